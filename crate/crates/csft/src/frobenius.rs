//! Frobenius algebras with a twisted `G_0`-action: presentations, axiom
//! checks, the Nakayama automorphism and the built-in battery.

use serde::Serialize;

use crate::csg::{self, CsgMorphism, Family, FiniteGroup, Parity};
use crate::operad;
use crate::tensor::{invert, Field, Result as TResult, Scalar, Tensor, TensorError};

/// A generator of the `G_0`-action: even generators are the unit rotation,
/// odd ones the reflection fixing the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionGenerator {
    pub parity: Parity,
    pub matrix: Tensor,
}

/// A finite-dimensional algebra `A` by structure constants, with unit,
/// trace covector and group actions. Matrices act on coordinate columns:
/// `M e_j = sum_i M[i][j] e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusPresentation {
    pub name: String,
    pub field: Field,
    pub dim: usize,
    /// `mul[i][j][k]`: coefficient of `e_k` in `e_i e_j`.
    pub mul: Tensor,
    pub unit: Vec<Scalar>,
    pub trace: Vec<Scalar>,
    pub g0_action: Vec<ActionGenerator>,
    /// One matrix per element of the companion group, in table order.
    pub h_action: Option<Vec<Tensor>>,
    pub companion: Option<FiniteGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, failure: Option<String>) -> Self {
        CheckResult { name: name.into(), passed: failure.is_none(), detail: failure.unwrap_or_default() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, failure: Option<String>) {
        self.checks.push(CheckResult::new(name, failure));
    }

    fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl FrobeniusPresentation {
    pub fn e(&self, i: usize) -> Vec<Scalar> {
        (0..self.dim).map(|k| if k == i { self.field.one() } else { self.field.zero() }).collect()
    }

    pub fn product(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.mul.get(&[i, j, k]);
                    if !c.is_zero() {
                        *o = &*o + &(&xy * c);
                    }
                }
            }
        }
        out
    }

    pub fn beta(&self, a: &[Scalar]) -> Scalar {
        a.iter().zip(&self.trace).fold(self.field.zero(), |acc, (x, t)| &acc + &(x * t))
    }

    pub fn apply(&self, m: &Tensor, a: &[Scalar]) -> Vec<Scalar> {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(self.field.zero(), |acc, j| &acc + &(m.get(&[i, j]) * &a[j])))
            .collect()
    }

    /// `B_ij = beta(e_i e_j)`.
    pub fn gram(&self) -> Tensor {
        let d = self.dim;
        let mut b = Tensor::zeros(self.field, vec![d, d]);
        for i in 0..d {
            for j in 0..d {
                b.set(&[i, j], self.beta(&self.product(&self.e(i), &self.e(j))));
            }
        }
        b
    }

    pub fn trace_tensor(&self) -> Tensor {
        Tensor::from_entries(self.field, vec![self.dim], self.trace.clone()).expect("trace length")
    }

    pub fn unit_tensor(&self) -> Tensor {
        Tensor::from_entries(self.field, vec![self.dim], self.unit.clone()).expect("unit length")
    }

    /// `beta_{k}(z_1, ..., z_k) = beta(z_1 ... z_k)` as a rank-`k` tensor.
    pub fn beta_tensor(&self, k: usize) -> Tensor {
        assert!(k >= 1);
        let d = self.dim;
        // products of all basis words of length k, row-major over the word
        let mut words: Vec<Vec<Scalar>> = (0..d).map(|i| self.e(i)).collect();
        for _ in 1..k {
            let mut next = Vec::with_capacity(words.len() * d);
            for w in &words {
                for j in 0..d {
                    next.push(self.product(w, &self.e(j)));
                }
            }
            words = next;
        }
        let data = words.iter().map(|w| self.beta(w)).collect();
        Tensor::from_entries(self.field, vec![d; k], data).unwrap()
    }

    pub fn with_action(mut self, gens: Vec<ActionGenerator>) -> Self {
        self.g0_action = gens;
        self
    }

    pub fn with_reflection(mut self, matrix: Tensor) -> Self {
        self.g0_action.retain(|g| g.parity != Parity::Odd);
        self.g0_action.push(ActionGenerator { parity: Parity::Odd, matrix });
        self
    }

    pub fn with_rotation(mut self, matrix: Tensor) -> Self {
        self.g0_action.retain(|g| g.parity != Parity::Even);
        self.g0_action.insert(0, ActionGenerator { parity: Parity::Even, matrix });
        self
    }

    pub fn with_h_action(mut self, group: FiniteGroup, matrices: Vec<Tensor>) -> Self {
        self.companion = Some(group);
        self.h_action = Some(matrices);
        self
    }

    fn generator(&self, parity: Parity) -> Option<&Tensor> {
        self.g0_action.iter().find(|g| g.parity == parity).map(|g| &g.matrix)
    }
}

/// The Nakayama automorphism: `beta(ab) = beta(b F(a))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NakayamaData {
    pub matrix: Tensor,
    /// Multiplicative order, if found within the search bound.
    pub order: Option<usize>,
}

pub const ORDER_BOUND: usize = 1000;

/// `F = B^-1 B^T`, rechecked against the defining relation.
pub fn nakayama(p: &FrobeniusPresentation) -> TResult<NakayamaData> {
    let b = p.gram();
    let f = invert(&b)?.matmul(&b.transpose())?;
    for i in 0..p.dim {
        let fa = p.apply(&f, &p.e(i));
        for j in 0..p.dim {
            let lhs = p.beta(&p.product(&p.e(i), &p.e(j)));
            let rhs = p.beta(&p.product(&p.e(j), &fa));
            assert_eq!(lhs, rhs, "Nakayama relation");
        }
    }
    Ok(NakayamaData { order: matrix_order(&f, ORDER_BOUND), matrix: f })
}

pub fn matrix_order(m: &Tensor, bound: usize) -> Option<usize> {
    let id = Tensor::identity(m.field(), m.shape()[0]);
    let mut pow = m.clone();
    for k in 1..=bound {
        if pow == id {
            return Some(k);
        }
        pow = pow.matmul(m).unwrap();
    }
    None
}

pub fn matrix_power(m: &Tensor, k: i64) -> TResult<Tensor> {
    let base = if k < 0 { invert(m)? } else { m.clone() };
    let mut acc = Tensor::identity(m.field(), m.shape()[0]);
    for _ in 0..k.unsigned_abs() {
        acc = acc.matmul(&base)?;
    }
    Ok(acc)
}

/// The `G_0`-action of a presentation resolved for a family.
#[derive(Clone, Debug)]
pub struct G0Action {
    pub family: Family,
    /// `U(t_1)`, the action of the unit rotation; defaults to `F^-1`.
    pub rotation: Tensor,
    pub rotation_inverse: Tensor,
    pub reflection: Option<Tensor>,
    pub h: Vec<Tensor>,
}

impl G0Action {
    pub fn resolve(p: &FrobeniusPresentation, family: &Family) -> TResult<G0Action> {
        let rotation = match p.generator(Parity::Even) {
            Some(m) => m.clone(),
            None => invert(&nakayama(p)?.matrix)?,
        };
        let rotation_inverse = invert(&rotation)?;
        let reflection = if family.is_dihedral() { p.generator(Parity::Odd).cloned() } else { None };
        let h = match (family.companion(), &p.h_action) {
            (None, _) => vec![Tensor::identity(p.field, p.dim)],
            (Some(g), Some(ms)) if ms.len() == g.order() => ms.clone(),
            (Some(_), _) => return Err(TensorError::Shape("companion action missing or of the wrong size".into())),
        };
        Ok(G0Action { family: family.clone(), rotation, rotation_inverse, reflection, h })
    }

    /// `U(g)` for `g = (h, t_1^c r^e)`, acting as `U_H(h) U(t_1)^c U(r)^e`.
    pub fn matrix(&self, g: &CsgMorphism) -> TResult<Tensor> {
        assert!(g.source() == 0 && g.target() == 0, "not an element of G_0");
        let c = if self.family.level() == Some(1) { 0 } else { g.lift()[0] };
        let rot = if c >= 0 {
            matrix_power(&self.rotation, c)?
        } else {
            matrix_power(&self.rotation_inverse, -c)?
        };
        let mut m = self.h[g.h()].matmul(&rot)?;
        if g.sign() == -1 {
            let r = self.reflection.as_ref().ok_or_else(|| TensorError::Shape("no reflection action given".into()))?;
            m = m.matmul(r)?;
        }
        Ok(m)
    }
}

fn vec_eq(a: &[Scalar], b: &[Scalar]) -> bool {
    a == b
}

/// Associativity and unit laws, plus the parity condition on the given action
/// generators (even: automorphism, odd: anti-automorphism).
pub fn check_algebra(p: &FrobeniusPresentation) -> CheckReport {
    let mut report = CheckReport::default();
    let d = p.dim;
    let mut shape_err = None;
    if p.mul.shape() != [d, d, d] || p.unit.len() != d || p.trace.len() != d {
        shape_err = Some(format!("dimension {d} does not match the structure data"));
    }
    report.push("shapes", shape_err.clone());
    if shape_err.is_some() {
        return report;
    }
    let basis: Vec<Vec<Scalar>> = (0..d).map(|i| p.e(i)).collect();
    let prods: Vec<Vec<Vec<Scalar>>> = (0..d).map(|i| (0..d).map(|j| p.product(&basis[i], &basis[j])).collect()).collect();
    let mut assoc = None;
    'outer: for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let lhs = p.product(&prods[i][j], &basis[k]);
                let rhs = p.product(&basis[i], &prods[j][k]);
                if !vec_eq(&lhs, &rhs) {
                    assoc = Some(format!("(e{i} e{j}) e{k} != e{i} (e{j} e{k})"));
                    break 'outer;
                }
            }
        }
    }
    report.push("associativity", assoc);
    let mut unit = None;
    for i in 0..d {
        if p.product(&p.unit, &basis[i]) != basis[i] || p.product(&basis[i], &p.unit) != basis[i] {
            unit = Some(format!("unit law fails on e{i}"));
            break;
        }
    }
    report.push("unit", unit);
    for (k, g) in p.g0_action.iter().enumerate() {
        report.push(&format!("g0_generator_{k}_parity"), parity_failure(p, &g.matrix, g.parity));
    }
    if let Some(hs) = &p.h_action {
        for (k, m) in hs.iter().enumerate() {
            report.push(&format!("h_{k}_automorphism"), parity_failure(p, m, Parity::Even));
        }
    }
    report
}

/// First failure of `m` being an (anti-)automorphism; also checks the unit and invertibility.
pub fn parity_failure(p: &FrobeniusPresentation, m: &Tensor, parity: Parity) -> Option<String> {
    let d = p.dim;
    if m.shape() != [d, d] {
        return Some(format!("action matrix has shape {:?}", m.shape()));
    }
    if invert(m).is_err() {
        return Some("action matrix is singular".into());
    }
    if p.apply(m, &p.unit) != p.unit {
        return Some("action does not fix the unit".into());
    }
    let images: Vec<Vec<Scalar>> = (0..d).map(|i| p.apply(m, &p.e(i))).collect();
    for i in 0..d {
        for j in 0..d {
            let lhs = p.apply(m, &p.product(&p.e(i), &p.e(j)));
            let rhs = match parity {
                Parity::Even => p.product(&images[i], &images[j]),
                Parity::Odd => p.product(&images[j], &images[i]),
            };
            if lhs != rhs {
                let kind = if parity == Parity::Even { "an automorphism" } else { "an anti-automorphism" };
                return Some(format!("not {kind} on (e{i}, e{j})"));
            }
        }
    }
    None
}

/// `U_f mu_2 = mu_2 . chi_2(f)` for each generator `f` of `G_0`, where input
/// `k` is moved to position `perm[k]` and twisted by `U(twists[k])`.
pub fn check_chi2_equivariance(p: &FrobeniusPresentation, family: &Family) -> CheckReport {
    let mut report = CheckReport::default();
    let action = match G0Action::resolve(p, family) {
        Ok(a) => a,
        Err(e) => {
            report.push("chi2_equivariance", Some(e.to_string()));
            return report;
        }
    };
    let mut gens = family.g0_generators();
    if let Some(h) = family.companion() {
        gens.extend((1..h.order()).map(|a| CsgMorphism::identity(family, 0).with_h(a)));
    }
    for f in gens {
        let failure = (|| -> Option<String> {
            let chi = operad::compute_chi2(&f).map_err(|e| e.to_string()).ok()?;
            let uf = action.matrix(&f).map_err(|e| e.to_string()).ok()?;
            let us: Vec<Tensor> = chi.twists.iter().map(|t| action.matrix(t).unwrap()).collect();
            for i in 0..p.dim {
                for j in 0..p.dim {
                    let inputs = [p.e(i), p.e(j)];
                    let lhs = p.apply(&uf, &p.product(&inputs[0], &inputs[1]));
                    let mut placed = [Vec::new(), Vec::new()];
                    for k in 0..2 {
                        placed[chi.perm[k]] = p.apply(&us[k], &inputs[k]);
                    }
                    if lhs != p.product(&placed[0], &placed[1]) {
                        return Some(format!("fails for {f} on (e{i}, e{j}) with chi_2 = {chi}"));
                    }
                }
            }
            None
        })();
        let failure = failure.or_else(|| operad::compute_chi2(&f).err().map(|e| e.to_string()));
        report.push(&format!("chi2_equivariance[{f}]"), failure);
    }
    report
}

/// `(d; sigma) . Phi`: the form `z -> Phi(z')` with `z'_{sigma^-1(i)} = U(d_i)^-1 z_i`.
pub fn wreath_act(phi: &Tensor, w: &operad::WreathElement, action: &G0Action) -> TResult<Tensor> {
    let n = phi.rank();
    assert_eq!(w.size(), n);
    let inv = w.inverse_perm();
    let mut t = phi.clone();
    // axis j of Phi receives U(d_{sigma(j)})^-1 z_{sigma(j)}
    for j in 0..n {
        let m = invert(&action.matrix(&w.twists[w.perm[j]])?)?;
        t = t.apply_on_axis(&m.transpose(), j)?;
    }
    // axis j now holds z_{sigma(j)}; reorder so that axis i holds z_i
    t.permute_axes(&inv)
}

/// `beta_{n+1}` is invariant under `eta_n(g)` for every generator `g` of `G_n`, `n <= max_n`.
pub fn check_eta_invariance(p: &FrobeniusPresentation, family: &Family, max_n: usize) -> CheckReport {
    let mut report = CheckReport::default();
    let action = match G0Action::resolve(p, family) {
        Ok(a) => a,
        Err(e) => {
            report.push("eta_invariance", Some(e.to_string()));
            return report;
        }
    };
    for n in 0..=max_n {
        let beta = p.beta_tensor(n + 1);
        let mut failure = None;
        for g in family.gn_generators(n) {
            let eta = match operad::compute_eta_standard(n, &g) {
                Ok(e) => e,
                Err(e) => {
                    failure = Some(e.to_string());
                    break;
                }
            };
            match wreath_act(&beta, &eta, &action) {
                Ok(moved) if moved == beta => {}
                Ok(_) => {
                    failure = Some(format!("beta_{} is not invariant under eta_{n}({g}) = {eta}", n + 1));
                    break;
                }
                Err(e) => {
                    failure = Some(e.to_string());
                    break;
                }
            }
        }
        report.push(&format!("eta_invariance_n{n}"), failure);
    }
    report
}

/// The action is a representation of `G_0` (times the companion group).
pub fn check_representation(p: &FrobeniusPresentation, family: &Family) -> CheckReport {
    let mut report = CheckReport::default();
    let action = match G0Action::resolve(p, family) {
        Ok(a) => a,
        Err(e) => {
            report.push("representation", Some(e.to_string()));
            return report;
        }
    };
    if family.is_dihedral() && action.reflection.is_none() {
        report.push("representation", Some("dihedral family without a reflection action".into()));
        return report;
    }
    let parity_rot = if family.level() == Some(1) { None } else { parity_failure(p, &action.rotation, Parity::Even) };
    report.push("rotation_parity", parity_rot);
    if let Some(r) = &action.reflection {
        report.push("reflection_parity", parity_failure(p, r, Parity::Odd));
    }
    let elements = csg::enumerate_group(family, 0, Some(2)).expect("G_0 enumeration");
    let mut failure = None;
    'outer: for a in &elements {
        for b in &elements {
            let ab = csg::compose(b, a).unwrap();
            let lhs = action.matrix(&ab);
            let rhs = action.matrix(a).and_then(|x| x.matmul(&action.matrix(b)?));
            if lhs != rhs {
                failure = Some(format!("U({a} . {b}) != U({a}) U({b})"));
                break 'outer;
            }
        }
    }
    if family.level() == Some(1) && failure.is_none() {
        // the unit rotation is trivial in G_0
        let explicit = p.generator(Parity::Even).cloned();
        let rot = explicit.unwrap_or_else(|| invert(&nakayama(p).unwrap().matrix).unwrap());
        if rot != Tensor::identity(p.field, p.dim) {
            failure = Some("the unit rotation is trivial in G_0 but acts nontrivially".into());
        }
    }
    report.push("representation", failure);
    report
}

/// Nondegeneracy of the trace.
pub fn check_gram(p: &FrobeniusPresentation) -> CheckReport {
    let mut report = CheckReport::default();
    report.push("gram_nondegenerate", invert(&p.gram()).err().map(|_| "Gram matrix is singular".into()));
    report
}

/// The H-action is by trace-preserving automorphisms.
pub fn check_equivariant(p: &FrobeniusPresentation) -> CheckReport {
    let mut report = CheckReport::default();
    let Some(hs) = &p.h_action else {
        report.push("h_action", None);
        return report;
    };
    if let Some(g) = &p.companion {
        if g.order() != hs.len() {
            report.push("h_action", Some(format!("{} matrices for a group of order {}", hs.len(), g.order())));
            return report;
        }
        let mut hom = None;
        'outer: for a in 0..g.order() {
            for b in 0..g.order() {
                if hs[g.mul(a, b)] != hs[a].matmul(&hs[b]).unwrap() {
                    hom = Some(format!("U({}) U({}) != U({})", g.name(a), g.name(b), g.name(g.mul(a, b))));
                    break 'outer;
                }
            }
        }
        report.push("h_homomorphism", hom);
    }
    for (k, m) in hs.iter().enumerate() {
        report.push(&format!("h_{k}_automorphism"), parity_failure(p, m, Parity::Even));
        let preserved = (0..p.dim).all(|i| p.beta(&p.apply(m, &p.e(i))) == p.trace[i]);
        report.push(&format!("h_{k}_trace"), (!preserved).then(|| "trace is not invariant".to_string()));
    }
    report
}

/// The verdict of the family-specific characterization.
pub fn check_family_specific(p: &FrobeniusPresentation, family: &Family) -> CheckReport {
    let mut report = CheckReport::default();
    report.extend(check_algebra(p));
    report.extend(check_gram(p));
    if !report.passed() {
        return report;
    }
    let naka = nakayama(p).expect("nondegenerate");
    let f = &naka.matrix;
    report.push("nakayama_automorphism", parity_failure(p, f, Parity::Even));
    let level = family.level();
    let order_ok = match (level, naka.order) {
        (Some(n), Some(o)) => (n as usize).is_multiple_of(o).then_some(()).ok_or(format!("F has order {o}, not dividing {n}")),
        (Some(n), None) => Err(format!("F has no finite order dividing {n}")),
        (None, _) => Ok(()),
    };
    report.push("nakayama_order", order_ok.err());
    if let Some(u) = p.generator(Parity::Even) {
        let finv = invert(f).unwrap();
        report.push("rotation_is_inverse_nakayama", (*u != finv).then(|| "U(t_1) != F^-1".to_string()));
    }
    if family.is_dihedral() {
        match p.generator(Parity::Odd) {
            None => report.push("involution", Some("no involution given".into())),
            Some(r) => {
                report.push("involution_anti_automorphism", parity_failure(p, r, Parity::Odd));
                let id = Tensor::identity(p.field, p.dim);
                report.push("involution_order_two", (r.matmul(r).unwrap() != id).then(|| "r^2 != 1".to_string()));
                let preserved = (0..p.dim).all(|i| p.beta(&p.apply(r, &p.e(i))) == p.trace[i]);
                report.push("involution_trace", (!preserved).then(|| "trace is not invariant".to_string()));
                let finv = invert(f).unwrap();
                let conj = r.matmul(f).unwrap().matmul(r).unwrap();
                report.push("involution_inverts_nakayama", (conj != finv).then(|| "r F r != F^-1".to_string()));
            }
        }
    }
    if family.companion().is_some() {
        report.extend(check_equivariant(p));
    }
    report
}

/// The generic verdict: algebra axioms, a representation of `G_0` with the
/// twisted parity, `chi_2`-equivariance, nondegeneracy and `eta_n`-invariance.
pub fn check_generic(p: &FrobeniusPresentation, family: &Family, max_n: usize) -> CheckReport {
    let mut report = CheckReport::default();
    report.extend(check_algebra(p));
    report.extend(check_gram(p));
    if !report.passed() {
        return report;
    }
    report.extend(check_representation(p, family));
    if !report.passed() {
        return report;
    }
    report.extend(check_chi2_equivariance(p, family));
    report.extend(check_eta_invariance(p, family, max_n));
    if let Some(hs) = &p.h_action {
        for (k, m) in hs.iter().enumerate() {
            let preserved = (0..p.dim).all(|i| p.beta(&p.apply(m, &p.e(i))) == p.trace[i]);
            report.push(&format!("h_{k}_trace"), (!preserved).then(|| "trace is not invariant".to_string()));
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusVerdict {
    pub family: String,
    pub generic: bool,
    pub specific: bool,
    pub checks: Vec<CheckResult>,
    /// Disagreement between the generic and the family-specific verdicts.
    pub internal_error: Option<String>,
}

impl FrobeniusVerdict {
    pub fn passed(&self) -> bool {
        self.generic && self.specific && self.internal_error.is_none()
    }
}

/// Default bound for the `eta_n` checks.
pub const ETA_MAX_N: usize = 5;

pub fn check_frobenius(p: &FrobeniusPresentation, family: &Family) -> FrobeniusVerdict {
    check_frobenius_bounded(p, family, ETA_MAX_N)
}

pub fn check_frobenius_bounded(p: &FrobeniusPresentation, family: &Family, max_n: usize) -> FrobeniusVerdict {
    let generic = check_generic(p, family, max_n);
    let specific = check_family_specific(p, family);
    let (g, s) = (generic.passed(), specific.passed());
    let internal_error = (g != s).then(|| {
        let which = if g { specific.first_failure() } else { generic.first_failure() };
        format!(
            "generic verdict {g} but family verdict {s}; first failure: {}",
            which.map_or(String::new(), |c| format!("{} ({})", c.name, c.detail))
        )
    });
    let mut checks = generic.checks;
    checks.extend(specific.checks.into_iter().map(|mut c| {
        c.name = format!("family:{}", c.name);
        c
    }));
    FrobeniusVerdict { family: family.to_string(), generic: g, specific: s, checks, internal_error }
}

fn mul_tensor(field: Field, d: usize, f: impl Fn(usize, usize) -> Vec<(usize, Scalar)>) -> Tensor {
    let mut t = Tensor::zeros(field, vec![d, d, d]);
    for i in 0..d {
        for j in 0..d {
            for (k, c) in f(i, j) {
                t.add_at(&[i, j, k], &c);
            }
        }
    }
    t
}

fn basis_vec(field: Field, d: usize, i: usize) -> Vec<Scalar> {
    (0..d).map(|k| if k == i { field.one() } else { field.zero() }).collect()
}

/// `k[Z/m]` with basis `g^0, ..., g^{m-1}` and trace the coefficient of the identity.
pub fn group_algebra(m: usize, field: Field) -> FrobeniusPresentation {
    assert!(m >= 1);
    FrobeniusPresentation {
        name: format!("k[Z/{m}] over {field}"),
        field,
        dim: m,
        mul: mul_tensor(field, m, |i, j| vec![((i + j) % m, field.one())]),
        unit: basis_vec(field, m, 0),
        trace: basis_vec(field, m, 0),
        g0_action: vec![],
        h_action: None,
        companion: None,
    }
}

/// The inversion `g -> g^-1` of `k[Z/m]`.
pub fn group_inversion(m: usize, field: Field) -> Tensor {
    let mut t = Tensor::zeros(field, vec![m, m]);
    for j in 0..m {
        t.set(&[(m - j) % m, j], field.one());
    }
    t
}

/// `M_d` with matrix units `E_ab` (index `a d + b`) and trace `tr(u a)` for a diagonal `u`.
pub fn matrix_algebra_twisted(d: usize, u: &[i64], field: Field) -> FrobeniusPresentation {
    assert_eq!(u.len(), d);
    let dim = d * d;
    let idx = |a: usize, b: usize| a * d + b;
    let mul = mul_tensor(field, dim, |i, j| {
        let (a, b, c, e) = (i / d, i % d, j / d, j % d);
        if b == c {
            vec![(idx(a, e), field.one())]
        } else {
            vec![]
        }
    });
    let mut unit = vec![field.zero(); dim];
    let mut trace = vec![field.zero(); dim];
    for a in 0..d {
        unit[idx(a, a)] = field.one();
        trace[idx(a, a)] = field.int(u[a]);
    }
    FrobeniusPresentation {
        name: format!("M_{d} over {field} with trace tr(diag{u:?} a)"),
        field,
        dim,
        mul,
        unit,
        trace,
        g0_action: vec![],
        h_action: None,
        companion: None,
    }
}

/// The transpose `E_ab -> E_ba` of `M_d`.
pub fn matrix_transpose(d: usize, field: Field) -> Tensor {
    let mut t = Tensor::zeros(field, vec![d * d, d * d]);
    for a in 0..d {
        for b in 0..d {
            t.set(&[b * d + a, a * d + b], field.one());
        }
    }
    t
}

/// `k[x]/x^m` with trace the top coefficient.
pub fn truncated_polynomials(m: usize, field: Field) -> FrobeniusPresentation {
    assert!(m >= 1);
    FrobeniusPresentation {
        name: format!("k[x]/x^{m} over {field}"),
        field,
        dim: m,
        mul: mul_tensor(field, m, |i, j| if i + j < m { vec![(i + j, field.one())] } else { vec![] }),
        unit: basis_vec(field, m, 0),
        trace: basis_vec(field, m, m - 1),
        g0_action: vec![],
        h_action: None,
        companion: None,
    }
}

/// Named constructors for the CLI: `group_algebra`, `matrix_algebra_twisted`, `truncated_polynomials`.
pub fn builtin(name: &str, params: &[i64], field: Field) -> Option<FrobeniusPresentation> {
    let positive = |k: usize| params.get(k).copied().filter(|&v| v >= 1).map(|v| v as usize);
    match name {
        "group_algebra" => Some(group_algebra(positive(0)?, field)),
        "truncated_polynomials" => Some(truncated_polynomials(positive(0)?, field)),
        "matrix_algebra_twisted" => {
            let d = positive(0)?;
            let u = params.get(1..=d)?;
            Some(matrix_algebra_twisted(d, u, field))
        }
        _ => None,
    }
}

/// The involution that makes each built-in algebra a candidate for the
/// dihedral families: inversion, transpose, or the identity (commutative case).
pub fn canonical_involution(p: &FrobeniusPresentation) -> Tensor {
    if p.name.starts_with("k[Z/") {
        group_inversion(p.dim, p.field)
    } else if p.name.starts_with("M_") {
        let d = (p.dim as f64).sqrt().round() as usize;
        matrix_transpose(d, p.field)
    } else {
        Tensor::identity(p.field, p.dim)
    }
}

/// The test battery: `k[Z/m]` (m <= 4), `M_2` over `F_5` with `u` in
/// `{I, diag(1,2), diag(1,3), diag(1,4)}`, and `k[x]/x^m` (m <= 4).
pub fn battery() -> Vec<FrobeniusPresentation> {
    let f5 = Field::fp(5).unwrap();
    let mut out = Vec::new();
    for m in 1..=4 {
        out.push(group_algebra(m, Field::Q));
    }
    for u in [[1, 1], [1, 2], [1, 3], [1, 4]] {
        out.push(matrix_algebra_twisted(2, &u, f5));
    }
    for m in 1..=4 {
        out.push(truncated_polynomials(m, Field::Q));
    }
    out
}

/// `k[Z/3]` with `H = Z/2` acting by inversion.
pub fn equivariant_example() -> FrobeniusPresentation {
    let p = group_algebra(3, Field::Q);
    let id = Tensor::identity(Field::Q, 3);
    let inv = group_inversion(3, Field::Q);
    p.with_h_action(FiniteGroup::cyclic(2), vec![id, inv])
}
