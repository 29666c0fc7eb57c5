use std::collections::BTreeSet;

use proptest::prelude::*;

use rellat::rewriter::{eliminate_redundant_joins, same_modulo_ac, solve_antijoin, universe_of, verify_rewrite, ConstraintSet};
use rellat::{parse_term, Assignment, Relation, Universe};

fn rel(attrs: &[&str], rows: &[&[&str]]) -> Relation {
    Relation::from_rows(attrs, rows).unwrap()
}

fn emp_env() -> Assignment {
    Assignment::from([
        ("E".to_owned(), rel(&["ename", "deptno"], &[&["SMITH", "20"], &["JONES", "20"], &["ALLEN", "30"]])),
        ("D".to_owned(), rel(&["deptno"], &[&["20"], &["30"], &["40"]])),
        ("F".to_owned(), rel(&["deptno", "loc"], &[&["20", "DALLAS"], &["30", "CHICAGO"]])),
        ("E0".to_owned(), rel(&["ename"], &[&["KING"]])),
        ("Q".to_owned(), rel(&["ename"], &[&["SMITH"], &["KING"]])),
    ])
}

fn constraints() -> ConstraintSet {
    ConstraintSet::default().foreign_key("E", "D").foreign_key("E", "F").projection("E0", "E")
}

#[test]
fn every_emitted_step_verifies_independently() {
    let env = emp_env();
    let u = universe_of(&env).unwrap();
    let t = parse_term("(E0 v (E ^ D)) ^ (Q v (E0 v (F ^ E)))").unwrap();
    let (out, steps) = eliminate_redundant_joins(&t, &constraints(), &env, &u).unwrap();
    assert_eq!(steps.len(), 2);
    assert!(same_modulo_ac(&out, &parse_term("(E0 v E) ^ (Q v (E0 v E))").unwrap()), "{out}");
    for s in &steps {
        for universe in [&u, &Universe::xy_2x2()] {
            let v = verify_rewrite(&s.before, &s.after, &s.justification, universe, 1000, 3).unwrap();
            assert!(v.holds(), "{s}: {v:?}");
        }
    }
    assert_eq!(steps[0].before, t);
    assert_eq!(steps[1].after, out);
}

#[test]
fn normal_form_independent_of_operand_order() {
    let env = emp_env();
    let u = universe_of(&env).unwrap();
    let variants = [
        "(E0 v (E ^ D)) ^ (E0 v (E ^ F))",
        "(E0 v (F ^ E)) ^ ((D ^ E) v E0)",
        "((E ^ F) v E0) ^ (E0 v (D ^ E))",
    ];
    let forms: BTreeSet<_> = variants
        .iter()
        .map(|s| {
            let (out, _) = eliminate_redundant_joins(&parse_term(s).unwrap(), &constraints(), &env, &u).unwrap();
            rellat::normalize_ac(&out)
        })
        .collect();
    assert_eq!(forms.len(), 1, "{forms:?}");
}

#[test]
fn identical_terms_verify_trivially() {
    let t = parse_term("E0 v E").unwrap();
    let v = verify_rewrite(&t, &t, &ConstraintSet::default(), &Universe::xy_2x2(), 50, 1).unwrap();
    assert!(v.holds());
}

#[test]
fn missing_projection_leaves_join_in_place() {
    let env = emp_env();
    let u = universe_of(&env).unwrap();
    let c = ConstraintSet::default().foreign_key("E", "D");
    let t = parse_term("E0 v (E ^ D)").unwrap();
    let (out, steps) = eliminate_redundant_joins(&t, &c, &env, &u).unwrap();
    assert_eq!(out, t);
    assert!(steps.is_empty());
}

#[test]
fn unbound_ground_name_is_an_error() {
    let env = emp_env();
    let u = universe_of(&env).unwrap();
    let err = eliminate_redundant_joins(&parse_term("E0 v (E ^ Z)").unwrap(), &constraints(), &env, &u).unwrap_err();
    assert!(err.to_string().contains("Z"), "{err}");
}

#[test]
fn strict_projection_instances_verify() {
    let mut c = ConstraintSet::default().foreign_key("E", "D").projection("E0", "E");
    c.strict_projections = true;
    let v = verify_rewrite(
        &parse_term("E0 v (E ^ D)").unwrap(),
        &parse_term("E0 v E").unwrap(),
        &c,
        &Universe::xy_2x2(),
        500,
        11,
    )
    .unwrap();
    assert!(v.holds());
}

#[test]
fn dangling_tuple_refutes_without_foreign_key() {
    let c = ConstraintSet::default().projection("E0", "E");
    let v = verify_rewrite(
        &parse_term("E0 v (E ^ D)").unwrap(),
        &parse_term("E0 v E").unwrap(),
        &c,
        &Universe::xy_2x2(),
        1000,
        5,
    )
    .unwrap();
    let rellat::Verdict::Counterexample { assignment, .. } = v else { panic!("expected a counterexample") };
    assert!(!assignment["E"].antijoin(&assignment["D"]).is_empty());
}

#[test]
fn smith_instance() {
    let e = rel(&["ename", "deptno"], &[&["SMITH", "10"], &["JONES", "20"], &["ALLEN", "30"]]);
    let d = rel(&["deptno"], &[&["20"], &["30"], &["40"]]);
    let u = universe_of(&Assignment::from([("E".to_owned(), e.clone()), ("D".to_owned(), d.clone())])).unwrap();
    assert_eq!(
        solve_antijoin(&e, &d, &u).unwrap(),
        BTreeSet::from([rel(&["ename", "deptno"], &[&["SMITH", "10"]])])
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn antijoin_is_the_unique_solution(i in 0usize..13, se: u64, sd: u64) {
        let universes = Universe::sweep(2, 3);
        let u = &universes[i % universes.len()];
        let e = u.random_relation(None, se).unwrap();
        let d = u.random_relation(None, sd).unwrap();
        prop_assert_eq!(solve_antijoin(&e, &d, u).unwrap(), BTreeSet::from([e.antijoin(&d)]));
    }
}
