//! The ten acceptance criteria, one line of output each.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use csft::csg::{compose, enumerate_group, CsgMorphism, Family, FiniteGroup};
use csft::evaluator::{nondegeneracy_graph, sample_twists, verify_functoriality, verify_invariance, EvaluationContext};
use csft::frobenius::*;
use csft::operad::*;
use csft::oracle::*;
use csft::tensor::{Field, Tensor};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ok_if(cond: bool, pass: String, fail: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(pass)
    } else {
        Err(fail())
    }
}

fn first_violation(r: &Report) -> String {
    r.checks
        .iter()
        .find(|c| !c.passed())
        .map_or_else(String::new, |c| format!("{}: {}", c.name, c.violations[0]))
}

fn element_order(g: &CsgMorphism) -> usize {
    let id = CsgMorphism::identity(g.family(), g.source());
    let mut x = g.clone();
    let mut k = 1;
    while x != id {
        x = compose(&x, g).unwrap();
        k += 1;
    }
    k
}

/// Orders of `G_n` from the classification table, with an independent structure check:
/// a cyclic group has an element of full order, a dihedral group of order `2m` has an
/// element of order `m` and `m` or `m + 1` involutions.
fn group_table(family: &Family, cyclic_order: impl Fn(usize) -> usize, max_n: usize) -> Outcome {
    for n in 0..=max_n {
        let m = cyclic_order(n);
        let group = enumerate_group(family, n, None).map_err(|e| e.to_string())?;
        let distinct: HashSet<_> = group.iter().collect();
        let expected = if family.is_dihedral() { 2 * m } else { m } * family.companion_order();
        if group.len() != expected || distinct.len() != expected {
            return Err(format!("{family}: |G_{n}| = {}, expected {expected}", group.len()));
        }
        if family.companion().is_some() {
            continue;
        }
        let orders: Vec<usize> = group.iter().map(element_order).collect();
        let involutions = orders.iter().filter(|&&o| o == 2).count();
        let has_rotation = orders.contains(&m);
        let shape_ok = if family.is_dihedral() {
            has_rotation && (involutions == m || involutions == m + 1 || m == 1)
        } else {
            has_rotation
        };
        if !shape_ok {
            return Err(format!("{family}: G_{n} has the wrong shape"));
        }
    }
    Ok(String::new())
}

fn criterion_1() -> Outcome {
    let mut cases = 0;
    group_table(&Family::cyclic(), |n| n + 1, 6)?;
    group_table(&Family::dihedral(), |n| n + 1, 6)?;
    cases += 14;
    for big_n in 1..=4u32 {
        let k = big_n as usize;
        group_table(&Family::n_cyclic(big_n), |n| k * (n + 1), 6)?;
        group_table(&Family::n_dihedral(big_n), |n| k * (n + 1), 6)?;
        cases += 14;
    }
    Ok(format!("{cases} groups match Z/(n+1), D_(n+1), Z/N(n+1), D_N(n+1) for n <= 6, N <= 4"))
}

fn criterion_2() -> Outcome {
    let mut instances = 0;
    for (fam, max) in [
        (Family::cyclic(), 4),
        (Family::dihedral(), 4),
        (Family::n_cyclic(2), 3),
        (Family::n_dihedral(2), 3),
        (Family::n_cyclic(3), 3),
    ] {
        let r = verify_factorization_unique(&fam, max);
        if !r.passed() {
            return Err(format!("{fam}: {}", first_violation(&r)));
        }
        instances += r.checks.iter().map(|c| c.instances).sum::<usize>();
    }
    let mutated = verify_factorization_unique_with(&Family::cyclic(), 2, &mutated_compose);
    ok_if(
        mutated.violation_count() >= 1,
        format!("0 violations in {instances} instances; mutated composition gives {} violations", mutated.violation_count()),
        || "mutated composition went undetected".into(),
    )
}

fn criterion_3() -> Outcome {
    let mut cospans = 0;
    for fam in [Family::cyclic(), Family::dihedral(), Family::n_cyclic(2)] {
        for n in 0..=3 {
            for m in 0..=3 {
                let r = verify_pullback_universal(&fam, n, m, 2);
                if !r.passed() {
                    return Err(format!("{fam} ({n},{m}): {}", first_violation(&r)));
                }
                cospans += r.check("pullback_commutes").unwrap().instances;
            }
        }
    }
    Ok(format!("{cospans} admissible cospans are pullbacks"))
}

fn criterion_4() -> Outcome {
    let mut pairs = 0;
    for (fam, max) in [
        (Family::cyclic(), 4),
        (Family::dihedral(), 4),
        (Family::n_cyclic(2), 3),
        (Family::n_dihedral(2), 3),
        (Family::n_cyclic(3), 3),
    ] {
        let r = verify_duality(&fam, max);
        if !r.passed() {
            return Err(format!("{fam}: {}", first_violation(&r)));
        }
        pairs += r.check("duality_contravariant").unwrap().instances;
    }
    Ok(format!("involution, contravariance on {pairs} composable pairs, collapse pattern for n <= 4"))
}

fn criterion_5() -> Outcome {
    let families = [
        Family::cyclic(),
        Family::dihedral(),
        Family::n_cyclic(2),
        Family::n_cyclic(3),
        Family::n_cyclic(4),
        Family::n_dihedral(2),
        Family::n_dihedral(3),
        Family::paracyclic(),
        Family::paradihedral(),
        Family::cyclic().with_companion(FiniteGroup::cyclic(2)),
    ];
    for fam in &families {
        for a in 1..=3 {
            for b in 1..=3 {
                let expected = standard_multiplication(fam, a + b - 1).canonical();
                for i in 1..=a {
                    let c = operad_compose(&standard_multiplication(fam, a), i, &standard_multiplication(fam, b))
                        .map_err(|e| e.to_string())?;
                    if c != expected {
                        return Err(format!("{fam}: m_{a} o_{i} m_{b} != m_{}", a + b - 1));
                    }
                }
            }
        }
        let g0 = enumerate_group(fam, 0, Some(2)).map_err(|e| e.to_string())?;
        let p1: Vec<_> = g0.iter().map(|t| standardize(&p1_iso_inv(t).unwrap()).unwrap()).collect();
        if p1.iter().collect::<HashSet<_>>().len() != g0.len() {
            return Err(format!("{fam}: P(1) -> G_0 is not injective"));
        }
        for (x, tx) in p1.iter().zip(&g0) {
            if p1_iso(x).map_err(|e| e.to_string())? != *tx {
                return Err(format!("{fam}: P(1) round trip fails at {tx}"));
            }
            for (y, ty) in p1.iter().zip(&g0) {
                let xy = p1_iso(&operad_compose(x, 1, y).unwrap()).unwrap();
                if xy != compose(ty, tx).unwrap() {
                    return Err(format!("{fam}: P(1) product of {tx} and {ty}"));
                }
            }
        }
    }
    let xi = Family::dihedral();
    let r = CsgMorphism::reflection(&xi, 0, 0);
    let chi = compute_chi2(&r).map_err(|e| e.to_string())?;
    if chi.twists != [r.clone(), r.clone()] || chi.perm != [1, 0] {
        return Err(format!("chi_2 of the reflection is {chi}"));
    }
    for big_n in 1..=4 {
        let fam = Family::n_cyclic(big_n);
        for f in enumerate_group(&fam, 0, None).unwrap() {
            let chi = compute_chi2(&f).map_err(|e| e.to_string())?;
            if chi.twists != [f.clone(), f.clone()] || chi.perm != [0, 1] {
                return Err(format!("{fam}: chi_2({f}) = {chi}"));
            }
        }
    }
    Ok(format!("m_a o_i m_b = m_(a+b-1) in {} families; P(1) = G_0; chi_2 as expected", families.len()))
}

fn criterion_6() -> Outcome {
    let families = [
        Family::cyclic(),
        Family::dihedral(),
        Family::n_cyclic(2),
        Family::n_cyclic(3),
        Family::n_cyclic(4),
        Family::n_dihedral(2),
        Family::n_dihedral(4),
        Family::paracyclic(),
        Family::paradihedral(),
    ];
    let mut verdicts = 0;
    let mut passes = 0;
    for p in battery() {
        for fam in &families {
            let alg = if fam.is_dihedral() { p.clone().with_reflection(canonical_involution(&p)) } else { p.clone() };
            let v = check_frobenius(&alg, fam);
            if let Some(e) = &v.internal_error {
                return Err(format!("{} in {fam}: {e}", p.name));
            }
            verdicts += 1;
            passes += usize::from(v.passed());
        }
    }
    let m2 = matrix_algebra_twisted(2, &[1, 2], Field::fp(5).unwrap());
    let on = |n| check_frobenius(&m2, &Family::n_cyclic(n)).passed();
    ok_if(
        on(4) && !on(2) && !on(3),
        format!("{verdicts} verdicts ({passes} pass), 0 disagreements; M_2(F_5, diag(1,2)) passes Lambda_4, fails Lambda_2, Lambda_3"),
        || format!("M_2(F_5, diag(1,2)): Lambda_4 {}, Lambda_2 {}, Lambda_3 {}", on(4), on(2), on(3)),
    )
}

/// One admissible algebra per family for the evaluator harnesses.
fn harness_contexts() -> Vec<EvaluationContext> {
    let f5 = Field::fp(5).unwrap();
    let f7 = Field::fp(7).unwrap();
    let with_t = |u: &[i64], field: Field| matrix_algebra_twisted(2, u, field).with_reflection(matrix_transpose(2, field));
    let cases = [
        (Family::cyclic(), with_t(&[1, 1], f5)),
        (Family::dihedral(), with_t(&[1, 1], f5)),
        (Family::n_cyclic(2), with_t(&[1, 4], f5)),
        (Family::n_dihedral(2), with_t(&[1, 4], f5)),
        (Family::n_cyclic(3), with_t(&[1, 2], f7)),
        (Family::n_cyclic(4), with_t(&[1, 2], f5)),
        (Family::n_dihedral(4), with_t(&[1, 2], f5)),
        (Family::paracyclic(), with_t(&[1, 2], f5)),
        (Family::paradihedral(), with_t(&[1, 3], f5)),
    ];
    cases
        .into_iter()
        .map(|(fam, p)| {
            assert!(check_frobenius(&p, &fam).passed(), "{} is not admissible for {fam}", p.name);
            EvaluationContext::new(p, &fam).unwrap()
        })
        .collect()
}

fn criterion_7() -> Outcome {
    let contexts = harness_contexts();
    let mut trials = 0;
    for ctx in &contexts {
        let r = verify_invariance(ctx, 200, 2024);
        if !r.passed() {
            return Err(format!("{}: {}", ctx.family(), first_violation(&r)));
        }
        trials += r.checks.iter().map(|c| c.instances).sum::<usize>();
    }
    Ok(format!("{trials} trials over {} families (vertex, edge, contraction order, 2-2 move), 0 failures", contexts.len()))
}

fn criterion_8() -> Outcome {
    let contexts = harness_contexts();
    for ctx in &contexts {
        let r = verify_functoriality(ctx, 200, 4048);
        if !r.passed() {
            return Err(format!("{}: {}", ctx.family(), first_violation(&r)));
        }
        let single = r.check("functoriality_single").unwrap().instances;
        let double = r.check("functoriality_double").unwrap().instances;
        if (single, double) != (200, 100) {
            return Err(format!("{}: ran {single} single and {double} double gluings", ctx.family()));
        }
    }
    Ok(format!("200 single and 100 double gluings on each of {} families, 0 failures", contexts.len()))
}

fn criterion_9() -> Outcome {
    // every battery algebra is admissible for the paracyclic family; symmetric ones also for Lambda
    let mut count = 0;
    for p in battery() {
        let mut fams = vec![Family::paracyclic()];
        if check_frobenius(&p, &Family::cyclic()).passed() {
            fams.push(Family::cyclic());
        }
        for fam in fams {
            let ctx = EvaluationContext::new(p.clone(), &fam).map_err(|e| e.to_string())?;
            let v = ctx.evaluate(&nondegeneracy_graph(&fam)).map_err(|e| e.to_string())?;
            if v != Tensor::identity(p.field, p.dim) {
                return Err(format!("{} in {fam}: zigzag is not the identity", p.name));
            }
            count += 1;
        }
    }
    Ok(format!("zigzag evaluates to the identity in {count} cases over {} algebras", battery().len()))
}

fn criterion_10() -> Outcome {
    let p = equivariant_example();
    let eq = check_equivariant(&p);
    if !eq.passed() {
        return Err(format!("check_equivariant: {:?}", eq.first_failure()));
    }
    let fam = Family::cyclic().with_companion(FiniteGroup::cyclic(2));
    let v = check_frobenius(&p, &fam);
    if !v.passed() {
        return Err(format!("check_frobenius in {fam}: {:?}", v.internal_error.or(v.checks.iter().find(|c| !c.passed).map(|c| c.name.clone()))));
    }
    group_table(&fam, |n| n + 1, 6)?;
    let r = verify_factorization_unique(&fam, 3);
    if !r.passed() {
        return Err(format!("factorization: {}", first_violation(&r)));
    }
    for n in 0..=3 {
        for m in 0..=3 {
            let r = verify_pullback_universal(&fam, n, m, 2);
            if !r.passed() {
                return Err(format!("pullback ({n},{m}): {}", first_violation(&r)));
            }
        }
    }
    let ctx = EvaluationContext::new(p.clone(), &fam).map_err(|e| e.to_string())?;
    let id = ctx.evaluate(&nondegeneracy_graph(&fam)).map_err(|e| e.to_string())?;
    if id != Tensor::identity(p.field, p.dim) || sample_twists(&fam).len() != 2 {
        return Err("equivariant evaluation".into());
    }
    Ok(format!("{fam}: equivariant checks pass, criteria 1-3 rerun cleanly"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("group orders", criterion_1),
        ("factorization uniqueness", criterion_2),
        ("collapse pullbacks", criterion_3),
        ("duality", criterion_4),
        ("operad", criterion_5),
        ("Frobenius cross-validation", criterion_6),
        ("evaluator well-definedness", criterion_7),
        ("functoriality", criterion_8),
        ("non-degeneracy", criterion_9),
        ("equivariant extension", criterion_10),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{secs:.2}s]", k + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
