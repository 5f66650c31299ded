use csft::csg::*;

fn m(family: &Family, n: usize, t: usize, sign: i64, lift: &[i64]) -> CsgMorphism {
    CsgMorphism::new(family, n, t, sign, lift.to_vec(), 0).unwrap()
}

#[test]
fn identity_is_neutral_on_hom_1_2() {
    let lam = Family::cyclic();
    let id = CsgMorphism::identity(&lam, 2);
    for f in enumerate_hom(&lam, 1, 2, None).unwrap() {
        assert_eq!(compose(&f, &id).unwrap(), f);
    }
}

#[test]
fn rotation_after_face_in_lambda() {
    let lam = Family::cyclic();
    let f = m(&lam, 1, 2, 1, &[0, 2]);
    let t = m(&lam, 2, 2, 1, &[1, 2, 3]);
    assert_eq!(compose(&f, &t).unwrap(), m(&lam, 1, 2, 1, &[1, 3]));
}

#[test]
fn reflection_is_an_involution_in_xi() {
    let xi = Family::dihedral();
    let r = m(&xi, 1, 1, -1, &[1, 0]);
    assert_eq!(compose(&r, &r).unwrap(), CsgMorphism::identity(&xi, 1));
}

#[test]
fn composition_rejects_mismatched_objects() {
    let lam = Family::cyclic();
    let f = CsgMorphism::identity(&lam, 1);
    let g = CsgMorphism::identity(&lam, 2);
    assert!(matches!(compose(&f, &g), Err(CsgError::Composition(_))));
    let xi = CsgMorphism::identity(&Family::dihedral(), 1);
    assert!(matches!(compose(&f, &xi), Err(CsgError::Composition(_))));
}

#[test]
fn reflections_are_rejected_in_cyclic_families() {
    assert!(CsgMorphism::new(&Family::cyclic(), 1, 1, -1, vec![1, 0], 0).is_err());
    assert!(CsgMorphism::new(&Family::cyclic(), 1, 1, 1, vec![0, 3], 0).is_err());
}

#[test]
fn normalization_identifies_translates() {
    let l2 = Family::n_cyclic(2);
    let a = m(&l2, 1, 1, 1, &[4, 5]);
    assert_eq!(a, CsgMorphism::identity(&l2, 1));
    let b = m(&l2, 1, 1, 1, &[2, 3]);
    assert_ne!(b, CsgMorphism::identity(&l2, 1));
    let para = Family::paracyclic();
    assert_ne!(m(&para, 1, 1, 1, &[2, 3]), CsgMorphism::identity(&para, 1));
}

#[test]
fn factorize_examples() {
    let lam = Family::cyclic();
    let f = m(&lam, 1, 2, 1, &[2, 4]);
    let (phi, g) = factorize(&f);
    assert_eq!(phi, m(&lam, 1, 2, 1, &[1, 2]));
    assert_eq!(g, m(&lam, 1, 1, 1, &[1, 2]));
    assert_eq!(compose(&g, &phi).unwrap(), f);

    let xi = Family::dihedral();
    let r = m(&xi, 1, 1, -1, &[1, 0]);
    let (phi, g) = factorize(&r);
    assert_eq!(phi, CsgMorphism::identity(&xi, 1));
    assert_eq!(g, r);

    let d = m(&lam, 1, 3, 1, &[0, 2]);
    assert_eq!(factorize(&d), (d.clone(), CsgMorphism::identity(&lam, 1)));
}

#[test]
fn pullback_examples() {
    let lam = Family::cyclic();
    let w1 = CsgMorphism::omega(&lam, 1);
    let id0 = CsgMorphism::identity(&lam, 0);
    assert_eq!(pullback_along(&w1, &id0).unwrap(), (w1.clone(), CsgMorphism::identity(&lam, 1)));

    let l2 = Family::n_cyclic(2);
    let gen = m(&l2, 0, 0, 1, &[1]);
    let (gs, pg) = pullback_along(&CsgMorphism::omega(&l2, 1), &gen).unwrap();
    assert_eq!(gs, CsgMorphism::omega(&l2, 1));
    assert_eq!(pg, CsgMorphism::rotation(&l2, 1, 2));

    let xi = Family::dihedral();
    let phi = m(&xi, 1, 2, 1, &[0, 1]);
    let g = m(&xi, 2, 2, -1, &[2, 1, 0]);
    let (gs, pg) = pullback_along(&phi, &g).unwrap();
    assert_eq!(gs, m(&xi, 1, 2, 1, &[1, 2]));
    assert_eq!(pg.sign(), -1);
    assert!(pg.is_automorphism());
    assert_eq!(compose(&phi, &g).unwrap(), compose(&pg, &gs).unwrap());

    let not_delta = CsgMorphism::rotation(&lam, 1, 1);
    assert!(matches!(
        pullback_along(&not_delta, &CsgMorphism::identity(&lam, 1)),
        Err(CsgError::Domain(_))
    ));
}

#[test]
fn omega_pullback_examples() {
    let xi = Family::dihedral();
    let r = CsgMorphism::reflection(&xi, 0, 0);
    for n in 1..=2 {
        let p = omega_pullback(&r, n).unwrap();
        assert_eq!(p.sign(), -1);
        let lam = p.lambda().values;
        assert_eq!(lam, (0..=n).rev().collect::<Vec<_>>());
    }
    let l2 = Family::n_cyclic(2);
    let gen = CsgMorphism::rotation(&l2, 0, 1);
    for n in 0..=4 {
        assert_eq!(omega_pullback(&gen, n).unwrap(), CsgMorphism::rotation(&l2, n, n as i64 + 1));
    }
    assert_eq!(
        omega_pullback(&CsgMorphism::identity(&l2, 0), 3).unwrap(),
        CsgMorphism::identity(&l2, 3)
    );
}

#[test]
fn lambda_examples() {
    let lam = Family::cyclic();
    let d = m(&lam, 1, 3, 1, &[0, 2]);
    assert_eq!(d.lambda().values, vec![0, 2]);
    let t = CsgMorphism::rotation(&lam, 3, 1);
    assert_eq!(t.lambda().values, vec![1, 2, 3, 0]);
    let xi = Family::dihedral();
    let r = CsgMorphism::reflection(&xi, 3, 3);
    assert_eq!(r.lambda().values, vec![3, 2, 1, 0]);
}

#[test]
fn dualize_examples() {
    let lam = Family::cyclic();
    for n in 0..=4 {
        let id = CsgMorphism::identity(&lam, n);
        assert_eq!(dualize(&id), id);
        for r in 0..=n as i64 {
            let t = CsgMorphism::rotation(&lam, n, r);
            // the strictly involutive duality fixes rotations
            assert_eq!(dualize(&t), t);
            assert_eq!(dualize(&t), CsgMorphism::rotation(&lam, n, -r).inverse().unwrap());
        }
    }
}

#[test]
fn dual_of_edge_collapses_all_but_one_point() {
    let lam = Family::cyclic();
    for n in 1..=4usize {
        for i in 1..=n {
            let e = CsgMorphism::delta(&lam, n, vec![i as i64 - 1, i as i64]).unwrap();
            let d = dualize(&e);
            assert_eq!((d.source(), d.target()), (n, 1));
            let ones = d.lambda().preimage(1);
            assert_eq!(ones, vec![n + 1 - i]);
        }
        let outer = CsgMorphism::delta(&lam, n, vec![0, n as i64]).unwrap();
        assert_eq!(dualize(&outer).lambda().preimage(0), vec![0]);
    }
}

#[test]
fn parity_examples() {
    let xi = Family::dihedral();
    assert_eq!(parity(&CsgMorphism::identity(&xi, 0)).unwrap(), Parity::Even);
    assert_eq!(parity(&CsgMorphism::reflection(&xi, 0, 0)).unwrap(), Parity::Odd);
    let l3 = Family::n_cyclic(3);
    for g in enumerate_group(&l3, 0, None).unwrap() {
        assert_eq!(parity(&g).unwrap(), Parity::Even);
    }
}

#[test]
fn group_enumeration_examples() {
    assert_eq!(enumerate_group(&Family::cyclic(), 2, None).unwrap().len(), 3);
    assert_eq!(enumerate_group(&Family::n_dihedral(3), 1, None).unwrap().len(), 12);
    let with_h = Family::cyclic().with_companion(FiniteGroup::cyclic(2));
    assert_eq!(enumerate_group(&with_h, 0, None).unwrap().len(), 2);
    assert!(matches!(
        enumerate_group(&Family::paracyclic(), 1, None),
        Err(CsgError::Enumeration(_))
    ));
}

#[test]
fn hom_counts() {
    assert_eq!(enumerate_hom(&Family::cyclic(), 0, 0, None).unwrap().len(), 1);
    assert_eq!(enumerate_hom(&Family::cyclic(), 1, 1, None).unwrap().len(), 6);
    assert_eq!(enumerate_hom(&Family::dihedral(), 0, 1, None).unwrap().len(), 4);
}

#[test]
fn family_normalization() {
    assert_eq!(Family::new(FamilyKind::NCyclic, Some(1)).unwrap(), Family::cyclic());
    assert_eq!(Family::new(FamilyKind::NDihedral, Some(1)).unwrap().kind(), FamilyKind::Dihedral);
    assert!(Family::new(FamilyKind::NCyclic, Some(0)).is_err());
    assert!(Family::new(FamilyKind::NCyclic, None).is_err());
}

#[test]
fn companion_table_is_validated() {
    assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 1]], vec!["e".into(), "a".into()]).is_err());
    assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 0]], vec!["e".into(), "a".into()]).is_ok());
}
