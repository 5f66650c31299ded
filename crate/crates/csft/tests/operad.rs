use csft::csg::{compose, enumerate_group, CsgMorphism, Family};
use csft::graph::StructuredGraph;
use csft::operad::*;
use proptest::prelude::*;

fn families() -> Vec<Family> {
    vec![
        Family::cyclic(),
        Family::dihedral(),
        Family::n_cyclic(2),
        Family::n_cyclic(3),
        Family::n_dihedral(2),
        Family::n_dihedral(3),
        Family::paracyclic(),
        Family::paradihedral(),
    ]
}

fn g0(fam: &Family) -> Vec<CsgMorphism> {
    enumerate_group(fam, 0, Some(2)).unwrap()
}

#[test]
fn m1_is_the_identity_corolla() {
    for fam in families() {
        assert_eq!(standard_multiplication(&fam, 1), StructuredGraph::identity(&fam));
        assert_eq!(p1_iso(&standard_multiplication(&fam, 1)).unwrap(), CsgMorphism::identity(&fam, 0));
    }
}

#[test]
fn standard_multiplications_are_closed_under_composition() {
    for fam in families() {
        for a in 1..=3 {
            for b in 1..=3 {
                let expected = standard_multiplication(&fam, a + b - 1).canonical();
                for i in 1..=a {
                    let c = operad_compose(&standard_multiplication(&fam, a), i, &standard_multiplication(&fam, b)).unwrap();
                    assert_eq!(c, expected, "{fam}: m_{a} o_{i} m_{b}");
                }
            }
        }
    }
}

#[test]
fn composition_with_the_unit_is_neutral() {
    for fam in families() {
        let id = standard_multiplication(&fam, 1);
        for t in g0(&fam) {
            let x = operad_element(&fam, &[t.clone(), CsgMorphism::identity(&fam, 0)], &[2, 1]).unwrap();
            let x = standardize(&x).unwrap();
            assert_eq!(operad_compose(&id, 1, &x).unwrap(), x);
            assert_eq!(operad_compose(&x, 1, &id).unwrap(), x);
            assert_eq!(operad_compose(&x, 2, &id).unwrap(), x);
        }
    }
}

#[test]
fn twisted_composition_is_associative() {
    // both bracketings of three twisted binary elements
    for fam in [Family::dihedral(), Family::n_dihedral(2), Family::cyclic(), Family::n_cyclic(2)] {
        let ts = g0(&fam);
        let e = CsgMorphism::identity(&fam, 0);
        let elems: Vec<_> = ts
            .iter()
            .flat_map(|t| [vec![t.clone(), e.clone()], vec![e.clone(), t.clone()]])
            .map(|tw| standardize(&operad_element(&fam, &tw, &[1, 2]).unwrap()).unwrap())
            .collect();
        for x in &elems {
            for y in &elems {
                for z in &elems {
                    for i in 1..=2 {
                        for j in 1..=2 {
                            let left = operad_compose(&operad_compose(x, i, y).unwrap(), i + j - 1, z).unwrap();
                            let right = operad_compose(x, i, &operad_compose(y, j, z).unwrap()).unwrap();
                            assert_eq!(left, right, "{fam}");
                        }
                    }
                    let parallel_a = operad_compose(&operad_compose(x, 1, y).unwrap(), 3, z).unwrap();
                    let parallel_b = operad_compose(&operad_compose(x, 2, z).unwrap(), 1, y).unwrap();
                    assert_eq!(parallel_a, parallel_b, "{fam}");
                }
            }
        }
    }
}

#[test]
fn p1_is_a_monoid_isomorphism() {
    for fam in families() {
        let elems = g0(&fam);
        let p1: Vec<_> = elems.iter().map(|t| p1_iso_inv(t).unwrap()).collect();
        for (t, x) in elems.iter().zip(&p1) {
            assert_eq!(&p1_iso(x).unwrap(), t);
        }
        for i in 0..p1.len() {
            for j in 0..p1.len() {
                if i != j {
                    assert_ne!(standardize(&p1[i]).unwrap(), standardize(&p1[j]).unwrap());
                }
                let product = operad_compose(&p1[i], 1, &p1[j]).unwrap();
                assert_eq!(p1_iso(&product).unwrap(), compose(&elems[j], &elems[i]).unwrap(), "{fam}");
            }
        }
    }
}

#[test]
fn p1_counts() {
    assert_eq!(g0(&Family::n_cyclic(3)).len(), 3);
    assert_eq!(g0(&Family::n_dihedral(3)).len(), 6);
    let reflection = CsgMorphism::reflection(&Family::dihedral(), 0, 0);
    assert_eq!(p1_iso(&p1_iso_inv(&reflection).unwrap()).unwrap(), reflection);
}

#[test]
fn chi2_examples() {
    for fam in families() {
        assert_eq!(compute_chi2(&CsgMorphism::identity(&fam, 0)).unwrap(), WreathElement::identity(&fam, 2));
    }
    let xi = Family::dihedral();
    let f = CsgMorphism::reflection(&xi, 0, 0);
    assert_eq!(compute_chi2(&f).unwrap(), WreathElement { twists: vec![f.clone(), f.clone()], perm: vec![1, 0], distinguished: None });
    for n in 1..=4 {
        let fam = Family::n_cyclic(n);
        for f in g0(&fam) {
            assert_eq!(compute_chi2(&f).unwrap(), WreathElement { twists: vec![f.clone(), f.clone()], perm: vec![0, 1], distinguished: None });
        }
    }
}

#[test]
fn chi2_in_dihedral_families_swaps_exactly_for_odd_elements() {
    for fam in [Family::dihedral(), Family::n_dihedral(2), Family::n_dihedral(3), Family::paradihedral()] {
        for f in g0(&fam) {
            let chi = compute_chi2(&f).unwrap();
            assert_eq!(chi.twists, vec![f.clone(), f.clone()]);
            assert_eq!(chi.perm, if f.sign() < 0 { vec![1, 0] } else { vec![0, 1] });
        }
    }
}

#[test]
fn eta_examples() {
    for fam in families() {
        for n in 0..4 {
            let id = compute_eta_standard(n, &CsgMorphism::identity(&fam, n)).unwrap();
            assert!(id.is_identity());
            assert_eq!(id.distinguished, Some(n));
        }
    }
    let lambda = Family::cyclic();
    let eta = compute_eta_standard(2, &CsgMorphism::rotation(&lambda, 2, 1)).unwrap();
    assert_eq!(eta.perm, vec![1, 2, 0]);
    assert!(eta.twists.iter().all(|t| *t == CsgMorphism::identity(&lambda, 0)));

    // the one twisted entry is where the rotation wraps past the collapsed slot
    let fam = Family::n_cyclic(4);
    let eta = compute_eta_standard(2, &CsgMorphism::rotation(&fam, 2, 1)).unwrap();
    assert_eq!(eta.perm, vec![1, 2, 0]);
    let nontrivial: Vec<usize> = (0..3).filter(|&i| eta.twists[i] != CsgMorphism::identity(&fam, 0)).collect();
    assert_eq!(nontrivial.len(), 1);
    let t = &eta.twists[nontrivial[0]];
    assert!(*t == CsgMorphism::rotation(&fam, 0, 1) || *t == CsgMorphism::rotation(&fam, 0, -1), "{t}");
}

#[test]
fn eta_agrees_with_frames_read_from_the_trace() {
    for fam in families() {
        for n in 0..4 {
            let frames = trace_frames(&StructuredGraph::trace(&fam, n)).unwrap();
            assert_eq!(frames, standard_trace_frames(&fam, n));
        }
    }
}

#[test]
fn wreath_law_has_identity_and_inverses() {
    for fam in [Family::n_dihedral(3), Family::paradihedral()] {
        let gens = fam.gn_generators(2);
        for g in &gens {
            let w = compute_eta_standard(2, g).unwrap();
            let inv = compute_eta_standard(2, &g.inverse().unwrap()).unwrap();
            assert!(w.mul(&inv).is_identity());
            assert!(inv.mul(&w).is_identity());
            assert_eq!(w.mul(&WreathElement::identity(&fam, 3)).twists, w.twists);
        }
    }
}

#[test]
fn malformed_elements_are_rejected() {
    let fam = Family::cyclic();
    assert!(check_operad_element(&StructuredGraph::trace(&fam, 2)).is_err());
    assert!(operad_compose(&standard_multiplication(&fam, 2), 3, &standard_multiplication(&fam, 2)).is_err());
    assert!(operad_element(&fam, &[CsgMorphism::identity(&fam, 0)], &[2]).is_err());
    assert!(compute_eta_standard(2, &CsgMorphism::rotation(&fam, 1, 1)).is_err());
}

fn family_strategy() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::cyclic()),
        Just(Family::dihedral()),
        Just(Family::n_cyclic(3)),
        Just(Family::n_dihedral(3)),
        Just(Family::paracyclic()),
        Just(Family::paradihedral()),
    ]
}

fn word(fam: &Family, n: usize, letters: &[(usize, bool)]) -> CsgMorphism {
    let gens = fam.gn_generators(n);
    letters.iter().fold(CsgMorphism::identity(fam, n), |acc, &(i, invert)| {
        let g = &gens[i % gens.len()];
        let g = if invert { g.inverse().unwrap() } else { g.clone() };
        compose(&g, &acc).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eta_is_a_homomorphism(
        fam in family_strategy(),
        n in 0usize..5,
        a in prop::collection::vec((0usize..4, any::<bool>()), 0..6),
        b in prop::collection::vec((0usize..4, any::<bool>()), 0..6),
    ) {
        let (x, y) = (word(&fam, n, &a), word(&fam, n, &b));
        let xy = compose(&y, &x).unwrap();
        let lhs = compute_eta_standard(n, &xy).unwrap();
        let rhs = compute_eta_standard(n, &x).unwrap().mul(&compute_eta_standard(n, &y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chi2_is_a_homomorphism(
        fam in family_strategy(),
        a in prop::collection::vec((0usize..4, any::<bool>()), 0..6),
        b in prop::collection::vec((0usize..4, any::<bool>()), 0..6),
    ) {
        let (x, y) = (word(&fam, 0, &a), word(&fam, 0, &b));
        let lhs = compute_chi2(&compose(&y, &x).unwrap()).unwrap();
        let rhs = compute_chi2(&x).unwrap().mul(&compute_chi2(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn standardize_is_idempotent(fam in family_strategy(), i in 0usize..64, j in 0usize..64, swap in any::<bool>()) {
        let ts = g0(&fam);
        let tw = [ts[i % ts.len()].clone(), ts[j % ts.len()].clone()];
        let slots = if swap { [2, 1] } else { [1, 2] };
        let x = standardize(&operad_element(&fam, &tw, &slots).unwrap()).unwrap();
        prop_assert_eq!(standardize(&x).unwrap(), x);
    }
}
