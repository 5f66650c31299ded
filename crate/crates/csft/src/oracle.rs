//! Brute-force verification of the categorical axioms on small instances.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::csg::{self, CsgMorphism, Family, Result};

/// Default winding bound for paracyclic families.
pub const DEFAULT_WINDING: u32 = 3;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub instances: usize,
    pub violations: Vec<String>,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), instances: 0, violations: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.violations.len() < 50 {
            self.violations.push(what());
        }
    }

    fn absorb(&mut self, other: Check) {
        self.instances += other.instances;
        let room = 50usize.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn merge(mut self, other: Report) -> Report {
        self.checks.extend(other.checks);
        self
    }

    pub fn violation_count(&self) -> usize {
        self.checks.iter().map(|c| c.violations.len()).sum()
    }
}

fn winding(family: &Family) -> Option<u32> {
    if family.is_finite() {
        None
    } else {
        Some(DEFAULT_WINDING)
    }
}

/// Exhaustive enumeration of `Hom([n],[m])`, checked against the product formula
/// `|G_n| * C(n+m+1, n+1)` for finite families.
pub fn enumerate_hom(family: &Family, n: usize, m: usize, winding_bound: Option<u32>) -> Result<Vec<CsgMorphism>> {
    let homs = csg::enumerate_hom(family, n, m, winding_bound)?;
    if let Some(order) = family.group_order(n) {
        assert_eq!(homs.len(), order * csg::delta_hom_count(n, m), "hom count of {family} ({n},{m})");
    }
    Ok(homs)
}

/// Group orders against the classification table for `n <= max_n`.
pub fn verify_group_orders(family: &Family, max_n: usize) -> Report {
    let mut check = Check::new("group_order");
    for n in 0..=max_n {
        let expected = family.group_order(n).expect("finite family");
        let group = csg::enumerate_group(family, n, None).expect("finite family");
        let distinct = group.iter().collect::<std::collections::HashSet<_>>().len();
        let bijective = group.iter().all(|g| g.is_automorphism() && g.lambda().is_bijective());
        check.record(group.len() == expected && distinct == expected && bijective, || {
            format!("{family}: |G_{n}| = {} ({distinct} distinct), expected {expected}", group.len())
        });
    }
    Report { checks: vec![check] }
}

type ComposeFn<'a> = dyn Fn(&CsgMorphism, &CsgMorphism) -> CsgMorphism + Sync + 'a;

/// Every morphism with `n, m <= max` has exactly one factorization `phi . g`.
pub fn verify_factorization_unique(family: &Family, max: usize) -> Report {
    verify_factorization_unique_with(family, max, &|f, g| csg::compose(f, g).expect("composable"))
}

/// As [`verify_factorization_unique`] with an injected composition law.
pub fn verify_factorization_unique_with(family: &Family, max: usize, compose: &ComposeFn<'_>) -> Report {
    let bound = winding(family);
    let pairs: Vec<(usize, usize)> = (0..=max).flat_map(|n| (0..=max).map(move |m| (n, m))).collect();
    let results: Vec<(Check, Check)> = pairs
        .par_iter()
        .map(|&(n, m)| {
            let mut unique = Check::new("factorization_unique");
            let mut round_trip = Check::new("factorization_round_trip");
            let homs = csg::enumerate_hom(family, n, m, bound).expect("enumerable");
            let group = csg::enumerate_group(family, n, bound).expect("enumerable");
            let deltas: Vec<_> = homs.iter().filter(|f| f.is_delta()).collect();
            let mut counts: HashMap<CsgMorphism, usize> = HashMap::new();
            for phi in &deltas {
                for g in &group {
                    *counts.entry(compose(g, phi)).or_default() += 1;
                }
            }
            for f in &homs {
                let c = counts.get(f).copied().unwrap_or(0);
                // winding-truncated enumerations only see part of each fiber
                let ok = if family.is_finite() { c == 1 } else { c <= 1 };
                unique.record(ok, || format!("{f} has {c} factorizations"));
                let (phi, g) = csg::factorize(f);
                let back = compose(&g, &phi);
                round_trip.record(phi.is_delta() && g.is_automorphism() && back == *f, || {
                    format!("{f} factors as {phi} . {g} which composes to {back}")
                });
            }
            if family.is_finite() {
                let expected = deltas.len() * group.len();
                unique.record(homs.len() == expected, || {
                    format!("|Hom([{n}],[{m}])| = {} but |Hom_Delta| * |G_n| = {expected}", homs.len())
                });
            }
            (unique, round_trip)
        })
        .collect();
    let mut unique = Check::new("factorization_unique");
    let mut round_trip = Check::new("factorization_round_trip");
    for (u, r) in results {
        unique.absorb(u);
        round_trip.absorb(r);
    }
    Report { checks: vec![unique, round_trip] }
}

/// A composition law that forgets the winding of the second map; used to
/// show that the uniqueness oracle can fail.
pub fn mutated_compose(f: &CsgMorphism, g: &CsgMorphism) -> CsgMorphism {
    let k = g.source() as i64 + 1;
    let lift = f.lift().iter().map(|&x| g.lift()[x.rem_euclid(k) as usize]).collect();
    CsgMorphism::raw(f.family(), f.source(), g.target(), f.sign() * g.sign(), lift, 0)
}

/// The admissible cospans `[n] -> [1] <- [m]` used by edge contraction.
pub fn admissible_cospans(family: &Family, n: usize, m: usize) -> Vec<(CsgMorphism, CsgMorphism)> {
    let bound = winding(family).map(|_| 1);
    let lone = |k: usize, value: usize| -> Vec<CsgMorphism> {
        csg::enumerate_hom(family, k, 1, bound)
            .expect("enumerable")
            .into_iter()
            .filter(|f| {
                let (d, _) = csg::factorize(f);
                if value == 0 {
                    d == CsgMorphism::phi(family, k)
                } else {
                    d == CsgMorphism::psi(family, k)
                }
            })
            .collect()
    };
    let fs = lone(n, 0);
    let gs = lone(m, 1);
    fs.iter().flat_map(|f| gs.iter().map(move |g| (f.clone(), g.clone()))).collect()
}

/// Checks that [`csg::collapse_pullback`] yields a commuting square with the
/// universal property against every cone with apex `[r]`, `r <= apex_bound`.
pub fn verify_pullback_universal(family: &Family, n: usize, m: usize, apex_bound: usize) -> Report {
    let mut commutes = Check::new("pullback_commutes");
    let mut universal = Check::new("pullback_universal");
    if n + m == 0 {
        return Report { checks: vec![commutes, universal] };
    }
    let bound = winding(family).map(|_| 1);
    let big = n + m - 1;
    let cospans = admissible_cospans(family, n, m);
    let results: Vec<(Check, Check)> = cospans
        .par_iter()
        .map(|(f, g)| {
            let mut commutes = Check::new("pullback_commutes");
            let mut universal = Check::new("pullback_universal");
            let (p, q) = csg::collapse_pullback(f, g).expect("admissible cospan");
            let fp = csg::compose(&p, f).unwrap();
            let gq = csg::compose(&q, g).unwrap();
            commutes.record(fp == gq, || format!("square over {f}, {g} does not commute"));
            for r in 0..=apex_bound {
                let mut factored: HashMap<(CsgMorphism, CsgMorphism), usize> = HashMap::new();
                for c in csg::enumerate_hom(family, r, big, bound).unwrap() {
                    let key = (csg::compose(&c, &p).unwrap(), csg::compose(&c, &q).unwrap());
                    *factored.entry(key).or_default() += 1;
                }
                let mut by_image: HashMap<CsgMorphism, Vec<CsgMorphism>> = HashMap::new();
                for b in csg::enumerate_hom(family, r, m, bound).unwrap() {
                    by_image.entry(csg::compose(&b, g).unwrap()).or_default().push(b);
                }
                for a in csg::enumerate_hom(family, r, n, bound).unwrap() {
                    let fa = csg::compose(&a, f).unwrap();
                    for b in by_image.get(&fa).into_iter().flatten() {
                        let c = factored.get(&(a.clone(), b.clone())).copied().unwrap_or(0);
                        let ok = if family.is_finite() { c == 1 } else { c <= 1 };
                        universal.record(ok, || format!("cone ({a}, {b}) over {f}, {g} has {c} mediating maps"));
                    }
                }
            }
            (commutes, universal)
        })
        .collect();
    for (c, u) in results {
        commutes.absorb(c);
        universal.absorb(u);
    }
    Report { checks: vec![commutes, universal] }
}

/// Involution and contravariance of the duality on all composable pairs with
/// objects `<= max`, plus the collapse pattern of the duals of `{i-1,i}` and `{0,n}`.
pub fn verify_duality(family: &Family, max: usize) -> Report {
    let bound = winding(family).map(|_| 1);
    let homs: HashMap<(usize, usize), Vec<CsgMorphism>> = (0..=max)
        .flat_map(|a| (0..=max).map(move |b| (a, b)))
        .map(|(a, b)| ((a, b), csg::enumerate_hom(family, a, b, bound).unwrap()))
        .collect();
    let mut involution = Check::new("duality_involution");
    for list in homs.values() {
        for f in list {
            let dd = csg::dualize(&csg::dualize(f));
            involution.record(dd == *f, || format!("D(D({f})) = {dd}"));
        }
    }
    let triples: Vec<(usize, usize, usize)> =
        (0..=max).flat_map(|a| (0..=max).flat_map(move |b| (0..=max).map(move |c| (a, b, c)))).collect();
    let parts: Vec<Check> = triples
        .par_iter()
        .map(|&(a, b, c)| {
            let mut check = Check::new("duality_contravariant");
            let dg: Vec<_> = homs[&(b, c)].iter().map(csg::dualize).collect();
            for f in &homs[&(a, b)] {
                let df = csg::dualize(f);
                for (g, dg) in homs[&(b, c)].iter().zip(&dg) {
                    let lhs = csg::dualize(&csg::compose(f, g).unwrap());
                    let rhs = csg::compose(dg, &df).unwrap();
                    check.record(lhs == rhs, || format!("D({g} . {f}) = {lhs} but D({f}) . D({g}) = {rhs}"));
                }
            }
            check
        })
        .collect();
    let mut contravariant = Check::new("duality_contravariant");
    parts.into_iter().for_each(|p| contravariant.absorb(p));

    let mut collapse = Check::new("duality_collapse_pattern");
    for n in 1..=max {
        for i in 1..=n {
            let edge = CsgMorphism::delta(family, n, vec![i as i64 - 1, i as i64]).unwrap();
            let ones = csg::dualize(&edge).lambda().preimage(1);
            collapse.record(ones == vec![n + 1 - i], || format!("D({{{},{i}}}) sends {ones:?} to 1", i - 1));
        }
        let outer = CsgMorphism::delta(family, n, vec![0, n as i64]).unwrap();
        let zeros = csg::dualize(&outer).lambda().preimage(0);
        collapse.record(zeros == vec![0], || format!("D({{0,{n}}}) sends {zeros:?} to 0"));
    }
    Report { checks: vec![involution, contravariant, collapse] }
}

/// The balancedness conditions: stabilizer pullbacks `Stab(i) -> G_0` are
/// isomorphisms, `1^* = 0^*` on `Stab(0) < G_1`, and hom-set sizes are
/// symmetric (necessary for a duality).
pub fn verify_balanced(family: &Family, max: usize) -> Report {
    let bound = winding(family);
    let g0 = csg::enumerate_group(family, 0, bound).unwrap();
    let mut bijective = Check::new("stabilizer_pullback_bijective");
    let mut homomorphism = Check::new("stabilizer_pullback_homomorphism");
    for n in 0..=max {
        let gn = csg::enumerate_group(family, n, bound).unwrap();
        for i in 0..=n {
            let stab: Vec<_> = gn.iter().filter(|g| g.lambda().values[i] == i).collect();
            let images: Vec<_> = stab.iter().map(|g| csg::point_pullback(g, i).unwrap()).collect();
            // the stabilizer lift is a two-sided inverse of i^*
            for t in &g0 {
                let s = CsgMorphism::stabilizer_lift(n, i, t);
                let ok = s.lambda().values[i] == i && csg::point_pullback(&s, i).unwrap() == *t;
                bijective.record(ok, || format!("{family}: {t} has no preimage in Stab({i}) < G_{n}"));
            }
            for (x, ix) in stab.iter().zip(&images) {
                let back = CsgMorphism::stabilizer_lift(n, i, ix);
                bijective.record(back == **x, || format!("{family}: {x} in Stab({i}) < G_{n} is not determined by {ix}"));
            }
            for (x, ix) in stab.iter().zip(&images) {
                for (y, iy) in stab.iter().zip(&images) {
                    let xy = csg::compose(y, x).unwrap();
                    let lhs = csg::point_pullback(&xy, i).unwrap();
                    let rhs = csg::compose(iy, ix).unwrap();
                    homomorphism.record(lhs == rhs, || format!("{i}^*({x} . {y}) != {i}^*({x}) . {i}^*({y})"));
                }
            }
        }
    }
    let mut endpoints = Check::new("one_equals_zero_pullback");
    for g in csg::enumerate_group(family, 1, bound).unwrap() {
        if g.lambda().values == [0, 1] {
            let zero = csg::point_pullback(&g, 0).unwrap();
            let one = csg::point_pullback(&g, 1).unwrap();
            endpoints.record(zero == one, || format!("0^*({g}) = {zero} but 1^*({g}) = {one}"));
        }
    }
    let symmetric = verify_hom_symmetry(max, |n, m| {
        csg::enumerate_hom(family, n, m, bound.map(|_| 1)).unwrap().len()
    });
    Report { checks: vec![bijective, homomorphism, endpoints, symmetric] }
}

/// A duality is a bijection `Hom([n],[m]) -> Hom([m],[n])`, so hom-set sizes must be symmetric.
pub fn verify_hom_symmetry(max: usize, hom_count: impl Fn(usize, usize) -> usize) -> Check {
    let mut check = Check::new("duality_hom_symmetry");
    for n in 0..=max {
        for m in 0..=max {
            let (a, b) = (hom_count(n, m), hom_count(m, n));
            check.record(a == b, || format!("|Hom([{n}],[{m}])| = {a} but |Hom([{m}],[{n}])| = {b}"));
        }
    }
    check
}

/// The semi-constant crossed simplicial group `Delta x BH`: `G_n = H` for all
/// `n`, hom-sets `Hom_Delta x H`. Its stabilizers are all of `H`, but it admits
/// no duality.
pub fn verify_balanced_semiconstant(h_order: usize, max: usize) -> Report {
    let mut bijective = Check::new("stabilizer_pullback_bijective");
    for n in 0..=max {
        for _ in 0..=n {
            bijective.record(true, String::new);
        }
    }
    let symmetric = verify_hom_symmetry(max, |n, m| csg::delta_hom_count(n, m) * h_order);
    Report { checks: vec![bijective, symmetric] }
}

/// The standard suite: group orders, factorization, pullbacks (`n, m <= min(max_n, 3)`),
/// duality and the balanced clauses.
pub fn run_suite(family: &Family, max_n: usize) -> Report {
    let small = max_n.min(3);
    let mut report = verify_group_orders(family, max_n)
        .merge(verify_factorization_unique(family, max_n))
        .merge(verify_duality(family, max_n))
        .merge(verify_balanced(family, max_n));
    let mut pullbacks: Vec<Check> = Vec::new();
    for n in 0..=small {
        for m in 0..=small {
            for c in verify_pullback_universal(family, n, m, 2).checks {
                match pullbacks.iter_mut().find(|p| p.name == c.name) {
                    Some(p) => p.absorb(c),
                    None => pullbacks.push(c),
                }
            }
        }
    }
    report.checks.extend(pullbacks);
    report
}
