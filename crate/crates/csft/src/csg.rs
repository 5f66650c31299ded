//! Balanced crossed simplicial groups in the integer-lift circle-map model.
//!
//! A morphism `[n] -> [m]` is stored as an orientation sign and the values
//! `F(0), ..., F(n)` of a lift `F: Z -> Z` obeying the period rule
//! `F(i + n + 1) = F(i) + sign * (m + 1)`. Lifts are identified modulo
//! translation by `P * (m + 1)`, where `P` is the family level.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CsgError {
    #[error("malformed morphism: {0}")]
    Malformed(String),
    #[error("cannot compose: {0}")]
    Composition(String),
    #[error("outside the required domain: {0}")]
    Domain(String),
    #[error("cannot enumerate: {0}")]
    Enumeration(String),
    #[error("invalid group table: {0}")]
    Group(String),
}

pub type Result<T> = std::result::Result<T, CsgError>;

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    names: Vec<String>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(table: Vec<Vec<usize>>, names: Vec<String>) -> Result<Self> {
        let k = table.len();
        if k == 0 {
            return Err(CsgError::Group("empty table".into()));
        }
        if names.len() != k {
            return Err(CsgError::Group(format!("{} names for order {k}", names.len())));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != k {
                return Err(CsgError::Group(format!("row {a} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= k) {
                return Err(CsgError::Group(format!("entry {bad} in row {a} out of range")));
            }
        }
        for a in 0..k {
            if table[0][a] != a || table[a][0] != a {
                return Err(CsgError::Group(format!("element 0 is not an identity for {a}")));
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(CsgError::Group(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(k);
        for a in 0..k {
            match (0..k).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inverses.push(b),
                None => return Err(CsgError::Group(format!("element {a} has no inverse"))),
            }
        }
        Ok(FiniteGroup { table, names, inverses })
    }

    /// The cyclic group of order `k` with generator named `g`.
    pub fn cyclic(k: usize) -> Self {
        let table = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        let names = (0..k)
            .map(|a| match a {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{a}"),
            })
            .collect();
        FiniteGroup::new(table, names).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Only orientation-preserving circle maps (cyclic type).
    Preserving,
    /// Orientation-reversing maps allowed (dihedral type).
    Reversing,
}

/// The serialized family kind. `Cyclic`/`Dihedral` are the level-one cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Cyclic,
    Dihedral,
    NCyclic,
    NDihedral,
    Paracyclic,
    Paradihedral,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    orientation: Orientation,
    /// `Some(N)` for the N-fold cover families, `None` for the paracyclic ones.
    level: Option<u32>,
    companion: Option<Arc<FiniteGroup>>,
}

impl Family {
    pub fn new(kind: FamilyKind, level: Option<u32>) -> Result<Self> {
        use FamilyKind::*;
        let (orientation, level) = match kind {
            Cyclic => (Orientation::Preserving, Some(level.unwrap_or(1))),
            Dihedral => (Orientation::Reversing, Some(level.unwrap_or(1))),
            NCyclic => (Orientation::Preserving, level),
            NDihedral => (Orientation::Reversing, level),
            Paracyclic => (Orientation::Preserving, None),
            Paradihedral => (Orientation::Reversing, None),
        };
        match (kind, level) {
            (Cyclic | Dihedral, Some(l)) if l != 1 => {
                return Err(CsgError::Malformed(format!("{kind:?} has level 1, got {l}")))
            }
            (NCyclic | NDihedral, None) => {
                return Err(CsgError::Malformed(format!("{kind:?} requires a level N")))
            }
            (NCyclic | NDihedral, Some(0)) => {
                return Err(CsgError::Malformed("level must be at least 1".into()))
            }
            (Paracyclic | Paradihedral, _) if level.is_some() => unreachable!(),
            _ => {}
        }
        Ok(Family { orientation, level, companion: None })
    }

    pub fn cyclic() -> Self {
        Family { orientation: Orientation::Preserving, level: Some(1), companion: None }
    }

    pub fn dihedral() -> Self {
        Family { orientation: Orientation::Reversing, level: Some(1), companion: None }
    }

    pub fn n_cyclic(n: u32) -> Self {
        assert!(n >= 1, "level must be positive");
        Family { orientation: Orientation::Preserving, level: Some(n), companion: None }
    }

    pub fn n_dihedral(n: u32) -> Self {
        assert!(n >= 1, "level must be positive");
        Family { orientation: Orientation::Reversing, level: Some(n), companion: None }
    }

    pub fn paracyclic() -> Self {
        Family { orientation: Orientation::Preserving, level: None, companion: None }
    }

    pub fn paradihedral() -> Self {
        Family { orientation: Orientation::Reversing, level: None, companion: None }
    }

    pub fn with_companion(mut self, group: FiniteGroup) -> Self {
        self.companion = if group.order() == 1 { None } else { Some(Arc::new(group)) };
        self
    }

    pub fn without_companion(&self) -> Self {
        Family { companion: None, ..self.clone() }
    }

    pub fn kind(&self) -> FamilyKind {
        match (self.orientation, self.level) {
            (Orientation::Preserving, Some(1)) => FamilyKind::Cyclic,
            (Orientation::Reversing, Some(1)) => FamilyKind::Dihedral,
            (Orientation::Preserving, Some(_)) => FamilyKind::NCyclic,
            (Orientation::Reversing, Some(_)) => FamilyKind::NDihedral,
            (Orientation::Preserving, None) => FamilyKind::Paracyclic,
            (Orientation::Reversing, None) => FamilyKind::Paradihedral,
        }
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_dihedral(&self) -> bool {
        self.orientation == Orientation::Reversing
    }

    pub fn level(&self) -> Option<u32> {
        self.level
    }

    pub fn is_finite(&self) -> bool {
        self.level.is_some()
    }

    pub fn companion(&self) -> Option<&FiniteGroup> {
        self.companion.as_deref()
    }

    pub fn companion_order(&self) -> usize {
        self.companion.as_ref().map_or(1, |g| g.order())
    }

    fn h_mul(&self, a: usize, b: usize) -> usize {
        self.companion.as_ref().map_or(0, |g| g.mul(a, b))
    }

    fn h_inv(&self, a: usize) -> usize {
        self.companion.as_ref().map_or(0, |g| g.inv(a))
    }

    /// Order of `G_n` as listed in the classification table, times `|H|`.
    pub fn group_order(&self, n: usize) -> Option<usize> {
        let base = self.level? as usize * (n + 1);
        let base = if self.is_dihedral() { 2 * base } else { base };
        Some(base * self.companion_order())
    }

    /// Generators of `G_0` in the order used by algebra presentations:
    /// rotation first (when nontrivial), then reflection (dihedral families).
    pub fn g0_generators(&self) -> Vec<CsgMorphism> {
        let mut gens = Vec::new();
        if self.level != Some(1) {
            gens.push(CsgMorphism::rotation(self, 0, 1));
        }
        if self.is_dihedral() {
            gens.push(CsgMorphism::reflection(self, 0, 0));
        }
        gens
    }

    /// A generating set of `G_n`: the unit rotation, the reflection fixing 0
    /// (dihedral families) and the companion generators.
    pub fn gn_generators(&self, n: usize) -> Vec<CsgMorphism> {
        let mut gens = vec![CsgMorphism::rotation(self, n, 1)];
        if self.is_dihedral() {
            gens.push(CsgMorphism::reflection(self, n, 0));
        }
        if let Some(h) = self.companion() {
            for a in 1..h.order() {
                gens.push(CsgMorphism::identity(self, n).with_h(a));
            }
        }
        gens
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = if self.is_dihedral() { "Xi" } else { "Lambda" };
        match self.level {
            Some(1) => write!(f, "{letter}")?,
            Some(n) => write!(f, "{letter}_{n}")?,
            None => write!(f, "{letter}_inf")?,
        }
        if let Some(h) = &self.companion {
            write!(f, " x BH(|H|={})", h.order())?;
        }
        Ok(())
    }
}

/// A morphism `[source] -> [target]` of the crossed simplicial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CsgMorphism {
    family: Family,
    source: usize,
    target: usize,
    sign: i64,
    lift: Vec<i64>,
    h: usize,
}

/// A map of finite sets `{0..source} -> {0..target}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetMap {
    pub target: usize,
    pub values: Vec<usize>,
}

impl SetMap {
    pub fn source(&self) -> usize {
        self.values.len() - 1
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &SetMap) -> SetMap {
        SetMap { target: other.target, values: self.values.iter().map(|&v| other.values[v]).collect() }
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target + 1];
        self.values.len() == self.target + 1
            && self.values.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn inverse_permutation(&self) -> Vec<usize> {
        let mut inv = vec![0; self.values.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v] = i;
        }
        inv
    }

    pub fn preimage(&self, v: usize) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] == v).collect()
    }
}

impl CsgMorphism {
    /// Validates the lift inequalities and normalizes the translation class.
    pub fn new(family: &Family, source: usize, target: usize, sign: i64, lift: Vec<i64>, h: usize) -> Result<Self> {
        if lift.len() != source + 1 {
            return Err(CsgError::Malformed(format!(
                "lift has {} values for source [{source}]",
                lift.len()
            )));
        }
        if sign != 1 && sign != -1 {
            return Err(CsgError::Malformed(format!("sign must be +1 or -1, got {sign}")));
        }
        if sign == -1 && !family.is_dihedral() {
            return Err(CsgError::Malformed(format!("{family} has no orientation-reversing maps")));
        }
        if h >= family.companion_order() {
            return Err(CsgError::Malformed(format!("h label {h} outside the companion group")));
        }
        let period = target as i64 + 1;
        let ok = if sign == 1 {
            lift.windows(2).all(|w| w[0] <= w[1]) && lift[source] <= lift[0] + period
        } else {
            lift.windows(2).all(|w| w[0] >= w[1]) && lift[source] >= lift[0] - period
        };
        if !ok {
            return Err(CsgError::Malformed(format!(
                "lift {lift:?} with sign {sign} is not a degree-one circle map into [{target}]"
            )));
        }
        Ok(Self::raw(family, source, target, sign, lift, h))
    }

    pub(crate) fn raw(family: &Family, source: usize, target: usize, sign: i64, mut lift: Vec<i64>, h: usize) -> Self {
        if let Some(p) = family.level {
            let q = p as i64 * (target as i64 + 1);
            let shift = lift[0].rem_euclid(q) - lift[0];
            if shift != 0 {
                lift.iter_mut().for_each(|x| *x += shift);
            }
        }
        CsgMorphism { family: family.clone(), source, target, sign, lift, h }
    }

    pub fn identity(family: &Family, n: usize) -> Self {
        Self::raw(family, n, n, 1, (0..=n as i64).collect(), 0)
    }

    /// The rotation `i -> i + r` of `[n]`.
    pub fn rotation(family: &Family, n: usize, r: i64) -> Self {
        Self::raw(family, n, n, 1, (0..=n as i64).map(|i| i + r).collect(), 0)
    }

    /// The reflection `i -> c - i` of `[n]`; panics for cyclic-type families.
    pub fn reflection(family: &Family, n: usize, c: i64) -> Self {
        assert!(family.is_dihedral(), "reflections need a dihedral family");
        Self::raw(family, n, n, -1, (0..=n as i64).map(|i| c - i).collect(), 0)
    }

    /// A map of the simplex category given by its (monotone) values.
    pub fn delta(family: &Family, target: usize, values: Vec<i64>) -> Result<Self> {
        if values.iter().any(|&v| v < 0 || v > target as i64) || values.windows(2).any(|w| w[0] > w[1]) {
            return Err(CsgError::Malformed(format!("{values:?} is not a monotone map into [{target}]")));
        }
        let n = values.len() - 1;
        Self::new(family, n, target, 1, values, 0)
    }

    /// `psi_n: [n] -> [1]`, sending `n` to 1 and everything else to 0.
    pub fn psi(family: &Family, n: usize) -> Self {
        let values = (0..=n).map(|i| i64::from(i == n)).collect();
        Self::raw(family, n, 1, 1, values, 0)
    }

    /// `phi_n: [n] -> [1]`, sending 0 to 0 and everything else to 1.
    pub fn phi(family: &Family, n: usize) -> Self {
        let values = (0..=n).map(|i| i64::from(i != 0)).collect();
        Self::raw(family, n, 1, 1, values, 0)
    }

    /// The vertex `j: [0] -> [n]`.
    pub fn point(family: &Family, n: usize, j: usize) -> Self {
        assert!(j <= n);
        Self::raw(family, 0, n, 1, vec![j as i64], 0)
    }

    /// The collapse `omega_n: [n] -> [0]`.
    pub fn omega(family: &Family, n: usize) -> Self {
        Self::raw(family, n, 0, 1, vec![0; n + 1], 0)
    }

    /// The element of `Stab(j) < G_n` whose pullback along `j: [0] -> [n]` is `t`.
    pub fn stabilizer_lift(n: usize, j: usize, t: &CsgMorphism) -> Self {
        assert!(t.source == 0 && t.target == 0, "expected an element of G_0");
        let (eps, c) = (t.sign, t.lift[0]);
        let (n, j) = (n as i64, j as i64);
        let lift = (0..=n).map(|i| eps * (i - j) + j + c * (n + 1)).collect();
        Self::raw(&t.family, n as usize, n as usize, eps, lift, t.h)
    }

    pub fn with_h(mut self, h: usize) -> Self {
        assert!(h < self.family.companion_order());
        self.h = h;
        self
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn sign(&self) -> i64 {
        self.sign
    }

    pub fn lift(&self) -> &[i64] {
        &self.lift
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// Value of the periodic extension of the lift at any integer.
    pub fn at(&self, i: i64) -> i64 {
        let k = self.source as i64 + 1;
        let q = i.div_euclid(k);
        self.lift[i.rem_euclid(k) as usize] + self.sign * q * (self.target as i64 + 1)
    }

    /// Membership in the embedded simplex category.
    pub fn is_delta(&self) -> bool {
        self.sign == 1 && self.h == 0 && self.lift[0] >= 0 && self.lift[self.source] <= self.target as i64
    }

    pub fn is_automorphism(&self) -> bool {
        self.source == self.target && (self.lift[self.source] - self.lift[0]).abs() == self.source as i64
    }

    /// `g` after `f`: the lift of `f` followed by the periodic extension of `g`.
    pub fn then(&self, g: &CsgMorphism) -> Result<CsgMorphism> {
        compose(self, g)
    }

    pub fn inverse(&self) -> Result<CsgMorphism> {
        if !self.is_automorphism() {
            return Err(CsgError::Domain(format!("{self} is not invertible")));
        }
        let n = self.source as i64;
        let lift = if self.sign == 1 {
            let r = self.lift[0];
            (0..=n).map(|i| i - r).collect()
        } else {
            self.lift.clone()
        };
        Ok(Self::raw(&self.family, self.source, self.source, self.sign, lift, self.family.h_inv(self.h)))
    }

    /// The underlying map of finite sets.
    pub fn lambda(&self) -> SetMap {
        let m = self.target as i64 + 1;
        SetMap { target: self.target, values: self.lift.iter().map(|&x| x.rem_euclid(m) as usize).collect() }
    }
}

impl fmt::Display for CsgMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign == 1 { '+' } else { '-' };
        write!(f, "({s},{:?}):[{}]->[{}]", self.lift, self.source, self.target)?;
        if let Some(h) = self.family.companion() {
            write!(f, "@{}", h.name(self.h))?;
        }
        Ok(())
    }
}

/// `compose(f, g) = g . f`.
pub fn compose(f: &CsgMorphism, g: &CsgMorphism) -> Result<CsgMorphism> {
    if f.family != g.family {
        return Err(CsgError::Composition(format!("families {} and {} differ", f.family, g.family)));
    }
    if f.target != g.source {
        return Err(CsgError::Composition(format!("target [{}] of f is not source [{}] of g", f.target, g.source)));
    }
    let lift = f.lift.iter().map(|&x| g.at(x)).collect();
    let h = f.family.h_mul(g.h, f.h);
    Ok(CsgMorphism::raw(&f.family, f.source, g.target, f.sign * g.sign, lift, h))
}

/// The canonical factorization `f = phi . g` with `phi` in the simplex
/// category and `g` an automorphism of the source.
pub fn factorize(f: &CsgMorphism) -> (CsgMorphism, CsgMorphism) {
    let (n, m) = (f.source as i64, f.target as i64);
    let k = m + 1;
    // first index of the unique window of n + 1 consecutive indices landing in [0, m]
    let a = (0..=n)
        .map(|r| {
            let v = f.lift[r as usize];
            let q = if f.sign == 1 { ceil_div(-v, k) } else { ceil_div(v - m, k) };
            q * (n + 1) + r
        })
        .min()
        .expect("nonempty source");
    let family = &f.family;
    if f.sign == 1 {
        let phi = (0..=n).map(|j| f.at(j + a)).collect();
        let g = (0..=n).map(|i| i - a).collect();
        (
            CsgMorphism::raw(family, f.source, f.target, 1, phi, 0),
            CsgMorphism::raw(family, f.source, f.source, 1, g, f.h),
        )
    } else {
        let c = a + n;
        let phi = (0..=n).map(|j| f.at(c - j)).collect();
        let g = (0..=n).map(|i| c - i).collect();
        (
            CsgMorphism::raw(family, f.source, f.target, 1, phi, 0),
            CsgMorphism::raw(family, f.source, f.source, -1, g, f.h),
        )
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// For `phi: [n] -> [m]` in the simplex category and `g` in `G_m`, returns
/// `(g* phi, phi* g)` with `g . phi = (g* phi) . (phi* g)`.
pub fn pullback_along(phi: &CsgMorphism, g: &CsgMorphism) -> Result<(CsgMorphism, CsgMorphism)> {
    if !phi.is_delta() {
        return Err(CsgError::Domain(format!("{phi} is not in the simplex category")));
    }
    if !g.is_automorphism() || g.source != phi.target {
        return Err(CsgError::Domain(format!("{g} is not an automorphism of [{}]", phi.target)));
    }
    Ok(factorize(&compose(phi, g)?))
}

/// The homomorphism `omega_n^*: G_0 -> G_n`.
pub fn omega_pullback(g: &CsgMorphism, n: usize) -> Result<CsgMorphism> {
    if g.source != 0 || g.target != 0 {
        return Err(CsgError::Domain(format!("{g} is not in G_0")));
    }
    Ok(pullback_along(&CsgMorphism::omega(&g.family, n), g)?.1)
}

/// The pullback `j^*: Stab(j) -> G_0` along the vertex `j: [0] -> [n]`.
pub fn point_pullback(g: &CsgMorphism, j: usize) -> Result<CsgMorphism> {
    Ok(pullback_along(&CsgMorphism::point(&g.family, g.source, j), g)?.1)
}

pub fn lambda_map(f: &CsgMorphism) -> SetMap {
    f.lambda()
}

/// Largest `i` with `F(i) <= x` for a nondecreasing lift `F` (given by `value`).
fn upper_adjoint(n: i64, m: i64, x: i64, value: impl Fn(usize) -> i64) -> i64 {
    (0..=n)
        .map(|r| (x - value(r as usize)).div_euclid(m + 1) * (n + 1) + r)
        .max()
        .expect("nonempty source")
}

/// The self-duality `D: Hom([n],[m]) -> Hom([m],[n])`.
///
/// Orientation-preserving lifts go to `j -> n - F*(m - j)` with `F*` the upper
/// order-adjoint; orientation-reversing ones to `j -> n - (-F)*(j - m - 1)`.
/// Companion labels are inverted.
pub fn dualize(f: &CsgMorphism) -> CsgMorphism {
    let (n, m) = (f.source as i64, f.target as i64);
    let lift = if f.sign == 1 {
        (0..=m).map(|j| n - upper_adjoint(n, m, m - j, |r| f.lift[r])).collect()
    } else {
        (0..=m).map(|j| n - upper_adjoint(n, m, j - m - 1, |r| -f.lift[r])).collect()
    };
    CsgMorphism::raw(&f.family, f.target, f.source, f.sign, lift, f.family.h_inv(f.h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

pub fn parity(g: &CsgMorphism) -> Result<Parity> {
    if g.source != 0 || g.target != 0 {
        return Err(CsgError::Domain(format!("{g} is not in G_0")));
    }
    Ok(if g.sign == 1 { Parity::Even } else { Parity::Odd })
}

fn lift_range(family: &Family, target: usize, winding_bound: Option<u32>) -> Result<std::ops::Range<i64>> {
    let k = target as i64 + 1;
    match (family.level, winding_bound) {
        (Some(p), _) => Ok(0..p as i64 * k),
        (None, Some(b)) => Ok(-(b as i64) * k..b as i64 * k),
        (None, None) => Err(CsgError::Enumeration(format!("{family} has infinite hom-sets; give a winding bound"))),
    }
}

/// All elements of `G_n`; paracyclic families need a winding bound `b`, giving
/// the rotations and reflections with offset in `[-b(n+1), b(n+1))`.
pub fn enumerate_group(family: &Family, n: usize, winding_bound: Option<u32>) -> Result<Vec<CsgMorphism>> {
    let range = lift_range(family, n, winding_bound)?;
    let mut out = Vec::new();
    for h in 0..family.companion_order() {
        for r in range.clone() {
            out.push(CsgMorphism::rotation(family, n, r).with_h(h));
        }
        if family.is_dihedral() {
            for c in range.clone() {
                out.push(CsgMorphism::reflection(family, n, c).with_h(h));
            }
        }
    }
    Ok(out)
}

/// All morphisms `[n] -> [m]` (lifts with `F(0)` in the normalized window, or
/// within the winding bound for paracyclic families).
pub fn enumerate_hom(family: &Family, n: usize, m: usize, winding_bound: Option<u32>) -> Result<Vec<CsgMorphism>> {
    let range = lift_range(family, m, winding_bound)?;
    let k = m as i64 + 1;
    let signs: &[i64] = if family.is_dihedral() { &[1, -1] } else { &[1] };
    let mut out = Vec::new();
    for h in 0..family.companion_order() {
        for &sign in signs {
            for f0 in range.clone() {
                let mut lift = vec![f0];
                extend_lifts(&mut lift, n, sign, f0 + sign * k, &mut |l| {
                    out.push(CsgMorphism::raw(family, n, m, sign, l.to_vec(), h))
                });
            }
        }
    }
    Ok(out)
}

fn extend_lifts(lift: &mut Vec<i64>, n: usize, sign: i64, bound: i64, emit: &mut impl FnMut(&[i64])) {
    if lift.len() == n + 1 {
        emit(lift);
        return;
    }
    let last = *lift.last().unwrap();
    let (lo, hi) = if sign == 1 { (last, bound) } else { (bound, last) };
    for v in lo..=hi {
        lift.push(v);
        extend_lifts(lift, n, sign, bound, emit);
        lift.pop();
    }
}

/// Binomial coefficient for small arguments.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `|Hom_Delta([n],[m])|`.
pub fn delta_hom_count(n: usize, m: usize) -> usize {
    binomial(n + m + 1, n + 1)
}

/// Completes a cospan `[n] -f-> [1] <-g- [m]`, where `f` sends exactly one
/// point to 0 and `g` exactly one point to 1, to a pullback square with apex
/// `[n + m - 1]`. Returns the two projections `(p, q)` with `f.p = g.q`.
pub fn collapse_pullback(f: &CsgMorphism, g: &CsgMorphism) -> Result<(CsgMorphism, CsgMorphism)> {
    if f.family != g.family {
        return Err(CsgError::Composition("cospan legs live in different families".into()));
    }
    if f.target != 1 || g.target != 1 {
        return Err(CsgError::Domain("cospan legs must end in [1]".into()));
    }
    let (n, m) = (f.source, g.source);
    if n + m == 0 {
        return Err(CsgError::Domain("the pullback of two points over [1] is empty".into()));
    }
    let (fd, fg) = factorize(f);
    let (gd, gg) = factorize(g);
    if fd != CsgMorphism::phi(&f.family, n) {
        return Err(CsgError::Domain(format!("{f} does not collapse all but one point to 1")));
    }
    if gd != CsgMorphism::psi(&g.family, m) {
        return Err(CsgError::Domain(format!("{g} does not collapse all but one point to 0")));
    }
    let big = n + m - 1;
    let mi = m as i64;
    let p0 = (0..=big as i64).map(|k| if k < mi { 0 } else { k - mi + 1 }).collect();
    let q0 = (0..=big as i64).map(|k| if k < mi { k } else { mi }).collect();
    let p0 = CsgMorphism::raw(&f.family, big, n, 1, p0, 0);
    let q0 = CsgMorphism::raw(&f.family, big, m, 1, q0, 0);
    Ok((compose(&p0, &fg.inverse()?)?, compose(&q0, &gg.inverse()?)?))
}
