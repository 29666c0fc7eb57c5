use rellat::closure::{example_generators, export_dot, find_pentagon, generate_closure, verify_lattice, Closure, DEFAULT_CAP};
use rellat::models::FiniteLattice;
use rellat::{Relation, Universe};

fn fig1() -> Closure {
    generate_closure(&example_generators(), &Universe::xy_2x2(), DEFAULT_CAP).unwrap()
}

#[test]
fn contains_generators_and_constants() {
    let u = Universe::xy_2x2();
    let c = fig1();
    for g in example_generators() {
        assert!(c.contains(&g), "{g}");
    }
    for r in [Relation::dee(), Relation::dum(), u.universal(), u.top_empty()] {
        assert!(c.contains(&r), "{r}");
    }
    assert_eq!(c.len(), 14);
}

#[test]
fn regenerating_from_elements_is_a_fixpoint() {
    let c = fig1();
    let again = generate_closure(&c.elements, &c.universe, DEFAULT_CAP).unwrap();
    assert_eq!(again.elements, c.elements);
    assert_eq!(again.hasse_edges, c.hasse_edges);
}

#[test]
fn punctured_set_fails_closure_check() {
    let c = fig1();
    let gens = example_generators();
    // A v C is produced only by union
    let removed = gens[0].inner_union(&gens[2]);
    assert!(c.contains(&removed));
    let punctured = Closure::from_elements(c.elements.iter().filter(|e| **e != removed).cloned(), &c.universe);
    let report = verify_lattice(&punctured);
    assert!(!report.closed);
    assert!(!report.ok());
    assert!(verify_lattice(&c).ok());
}

#[test]
fn pentagon_is_really_n5() {
    let c = fig1();
    let idx = find_pentagon(&c).expect("pentagon");
    let els: Vec<&Relation> = idx.iter().map(|&i| &c.elements[i]).collect();
    let mut leq = vec![false; 25];
    for a in 0..5 {
        for b in 0..5 {
            leq[a * 5 + b] = els[a].le(els[b]);
        }
    }
    let sub = FiniteLattice::from_order(5, leq).expect("a lattice");
    assert!(sub.is_isomorphic(&FiniteLattice::pentagon()));
    // closed under both operations
    for a in &els {
        for b in &els {
            assert!(els.contains(&&a.natural_join(b)) && els.contains(&&a.inner_union(b)));
        }
    }
}

#[test]
fn dot_is_stable_and_matches_golden() {
    let dot = export_dot(&fig1());
    assert_eq!(dot, export_dot(&fig1()));
    assert_eq!(dot, include_str!("golden/fig1.dot"));
}

#[test]
fn hasse_edges_are_covers() {
    let c = fig1();
    for &(a, b) in &c.hasse_edges {
        assert!(c.elements[a].le(&c.elements[b]) && a != b);
        for (k, m) in c.elements.iter().enumerate() {
            if k != a && k != b {
                assert!(!(c.elements[a].le(m) && m.le(&c.elements[b])), "{a} < {k} < {b}");
            }
        }
    }
}
