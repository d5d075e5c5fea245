mod common;

use common::*;

#[test]
fn associated_with_theta() {
    for c in projrep_cases() {
        let p = &c.proj;
        assert_eq!(p.dim() as i64, c.theta.degree_int(), "{}", c.name);
        for n in c.normal.elements() {
            assert_eq!(&p.at(n), p.rep().mat(n), "{}", c.name);
            assert_eq!(p.trace(n), c.theta.at(n), "{}", c.name);
        }
        let g = p.group();
        for x in g.elements() {
            for n in c.normal.elements() {
                assert_eq!(p.at(&n.mul(x)), p.rep().mat(n).mul(&p.at(x)), "{}", c.name);
                assert_eq!(p.at(&x.mul(n)), p.at(x).mul(p.rep().mat(n)), "{}", c.name);
            }
            for y in g.elements() {
                assert_eq!(p.at(x).mul(&p.at(y)), p.at(&x.mul(y)).scale(&p.alpha(x, y)), "{}", c.name);
            }
        }
    }
}

#[test]
fn factor_sets() {
    let list = projrep_cases();
    assert!(list.len() >= 5);
    let mut proper = 0;
    for c in &list {
        assert!(c.proj.cocycle_holds(), "{}", c.name);
        assert!(c.proj.factor_set().roots_of_unity(), "{}", c.name);
        if c.proj.group().order() < c.ambient.order() {
            proper += 1;
        }
    }
    assert!(proper >= 2, "some case should have a proper inertia group");
}

#[test]
fn mu_from_factor_set_matches_definition() {
    for c in projrep_cases() {
        for g in c.proj.group().elements() {
            assert_eq!(c.proj.mu_by_factor_set(g).unwrap(), c.proj.mu(g, 1).unwrap(), "{}", c.name);
        }
    }
}

#[test]
fn mu_cocycle_decomposition_on_random_pairs() {
    for c in projrep_cases() {
        assert_eq!(mu_decomposition_mismatches(&c, 100, 2024), 0, "{}", c.name);
    }
}

#[test]
fn bad_decomposition_is_rejected() {
    let c = &projrep_cases()[0];
    let g = c.proj.group().elements()[1].clone();
    let t = c.proj.group().elements()[2].clone();
    assert!(c.proj.mu_cocycle_decompose(&g, &t, &g, 1).is_err());
}
