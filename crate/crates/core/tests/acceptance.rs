//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rellat::catalogue::{derivations, fda_dual_witness};
use rellat::check::{check_law_sweep, replay};
use rellat::closure::{self, example_generators, DEFAULT_CAP};
use rellat::eval::Outcome;
use rellat::models::{find_separating_model, AxiomSet, Counterexample};
use rellat::rewriter::{self, ConstraintSet};
use rellat::{eval, find_law, law_catalogue, parse_term, Assignment, Header, Relation, Status, Universe};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rel(attrs: &[&str], rows: &[&[&str]]) -> Relation {
    Relation::from_rows(attrs, rows).unwrap()
}

fn law_soundness_sweep() -> Check {
    let start = Instant::now();
    let universes = Universe::sweep(3, 3);
    let valid: Vec<_> = law_catalogue().into_iter().filter(|l| l.status == Status::Valid).collect();
    ensure(valid.len() >= 24, format!("only {} valid laws", valid.len()))?;
    for law in &valid {
        let results = check_law_sweep(law, &universes, 1000, 42).map_err(|e| e.to_string())?;
        ensure(results.len() == universes.len(), format!("{} stopped early", law.id))?;
        if let Some((u, v)) = results.iter().find(|(_, v)| !v.holds()) {
            return Err(format!("{} refuted over {u:?}: {v:?}", law.id));
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} valid laws x {} universes x 1000 trials, no counterexample, {:.1}s",
        valid.len(),
        universes.len(),
        elapsed.as_secs_f64()
    ))
}

fn fda_dual_witness_values() -> Check {
    let u = Universe::from_domains(&[("x", &["1", "2"]), ("y", &["a", "b"])]).unwrap();
    let x = rel(&["x", "y"], &[&["1", "a"], &["1", "b"], &["2", "a"]]);
    let env = Assignment::from([("x".to_owned(), x.clone())]);
    let ev = |t: &str| eval(&u, &parse_term(t).unwrap(), &env).unwrap();
    let r11 = u.universal();
    ensure(ev("x v R00") == Relation::dee(), "x v R00 != R01")?;
    ensure(ev("x v R11") == r11, "x v R11 != R11")?;
    let lhs = ev("(x v R00) ^ (x v R11)");
    ensure(lhs == r11, format!("(x v R00) ^ (x v R11) = {lhs}"))?;
    ensure(lhs != x, "dual decomposition recovered x")?;
    let law = find_law("fda-dual").unwrap();
    let w = fda_dual_witness();
    ensure(replay(&law, &w.universe, &w.assignment) == Ok(Outcome::Violated), "witness does not refute")?;
    Ok(format!("x v R00 = R01, x v R11 = R11, meet = {lhs} != x"))
}

fn constant_theorems() -> Check {
    let mut universes = Universe::sweep(3, 3);
    universes.push(Universe::degenerate());
    let join = parse_term("R00 v R11").unwrap();
    let meet = parse_term("R00 ^ R11").unwrap();
    for u in &universes {
        let env = Assignment::new();
        ensure(eval(u, &join, &env).unwrap() == Relation::dee(), format!("R00 v R11 != R01 over {u:?}"))?;
        ensure(eval(u, &meet, &env).unwrap() == u.top_empty(), format!("R00 ^ R11 != R10 over {u:?}"))?;
        ensure(Relation::dum().inner_union(&u.universal()) == Relation::dee(), "direct join")?;
        ensure(Relation::dum().natural_join(&u.universal()) == u.top_empty(), "direct meet")?;
    }
    Ok(format!("R00 v R11 = R01 and R00 ^ R11 = R10 on {} universes incl. degenerate", universes.len()))
}

fn search(assume: &[&str], refute: &str, max: usize) -> Result<(Option<Counterexample>, Duration), String> {
    let start = Instant::now();
    let axioms = AxiomSet::from_ids(assume).map_err(|e| e.to_string())?;
    let found = find_separating_model(&axioms, &find_law(refute).unwrap(), max).map_err(|e| e.to_string())?;
    Ok((found, start.elapsed()))
}

fn independence() -> Check {
    let cases: [(&[&str], &str, usize, Option<&str>); 4] = [
        (&["sla"], "fda", 2, None),
        (&["sla", "fda"], "fda-inv", 2, None),
        (&["sla", "fda", "fda-inv"], "sdc", 5, Some("M3")),
        (&["sla", "fda", "fda-inv", "sdc"], "dch", 5, Some("N5")),
    ];
    let mut notes = Vec::new();
    for (assume, refute, size, shape) in cases {
        let (found, took) = search(assume, refute, 5)?;
        let cex = found.ok_or(format!("no model refutes {refute}"))?;
        ensure(took < Duration::from_secs(120), format!("{refute} took {took:?}"))?;
        ensure(cex.model.lattice.size() == size, format!("{refute}: size {}", cex.model.lattice.size()))?;
        if let Some(s) = shape {
            ensure(cex.model.lattice.shape_name() == Some(s), format!("{refute}: not {s}"))?;
        }
        ensure(cex.replay(), format!("{refute}: replay failed"))?;
        notes.push(format!("{refute}:{}", shape.unwrap_or("2-chain")));
    }
    Ok(notes.join(", "))
}

fn theorem_consistency() -> Check {
    let mut goals = Vec::new();
    for d in derivations() {
        let (found, _) = search(&d.assumptions, d.goal, 5)?;
        if let Some(cex) = found {
            return Err(format!("{} refuted from its assumptions:\n{cex}", d.goal));
        }
        goals.push(d.goal);
    }
    Ok(format!("no countermodel of size <= 5 for {}", goals.join(", ")))
}

fn antijoin_uniqueness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let universes = Universe::sweep(3, 3);
    let mut pairs = 0;
    while pairs < 200 {
        let u = &universes[rng.gen_range(0..universes.len())];
        let attrs: Vec<String> = u.attributes().iter().map(|a| a.as_str().to_owned()).collect();
        let pick = |rng: &mut ChaCha8Rng| Header::new(attrs.iter().filter(|_| rng.gen_bool(0.5)).cloned()).unwrap();
        let (he, hd) = (pick(&mut rng), pick(&mut rng));
        // keep the enumeration at most 2^12 candidates
        if u.product_size(&he).unwrap() > 12 {
            continue;
        }
        let e = u.random_relation(Some(&he), rng.gen()).unwrap();
        let d = u.random_relation(Some(&hd), rng.gen()).unwrap();
        let sols = rewriter::solve_antijoin(&e, &d, u).map_err(|err| err.to_string())?;
        ensure(sols == BTreeSet::from([e.antijoin(&d)]), format!("{e} m {d}: {sols:?}"))?;
        pairs += 1;
    }
    let e = rel(&["ename", "deptno"], &[&["SMITH", "10"], &["JONES", "20"], &["ALLEN", "30"]]);
    let d = rel(&["deptno"], &[&["20"], &["30"], &["40"]]);
    let env = Assignment::from([("E".to_owned(), e.clone()), ("D".to_owned(), d.clone())]);
    let u = rewriter::universe_of(&env).unwrap();
    let sols = rewriter::solve_antijoin(&e, &d, &u).map_err(|err| err.to_string())?;
    let smith = rel(&["ename", "deptno"], &[&["SMITH", "10"]]);
    ensure(sols == BTreeSet::from([smith.clone()]), format!("SMITH instance: {sols:?}"))?;
    Ok(format!("{pairs} random pairs unique; SMITH instance -> {smith}"))
}

fn case_study() -> Check {
    let c = ConstraintSet::default().foreign_key("E", "D").projection("E0", "E");
    let env = Assignment::from([
        ("E".to_owned(), rel(&["ename", "deptno"], &[&["SMITH", "20"], &["JONES", "20"], &["ALLEN", "30"]])),
        ("D".to_owned(), rel(&["deptno"], &[&["20"], &["30"], &["40"]])),
        ("E0".to_owned(), rel(&["ename"], &[&["KING"], &["SMITH"]])),
    ]);
    let u = rewriter::universe_of(&env).unwrap();
    let before = parse_term("E0 v (E ^ D)").unwrap();
    let (after, steps) = rewriter::eliminate_redundant_joins(&before, &c, &env, &u).map_err(|e| e.to_string())?;
    ensure(after == parse_term("E0 v E").unwrap(), format!("rewrote to {after}"))?;
    ensure(steps.len() == 1, format!("{} steps", steps.len()))?;
    for universe in [Universe::xy_2x2(), u] {
        let v = rewriter::verify_rewrite(&before, &after, &c, &universe, 1000, 42).map_err(|e| e.to_string())?;
        ensure(v.holds(), format!("verification failed: {v:?}"))?;
    }
    let without_fk = ConstraintSet::default().projection("E0", "E");
    let v = rewriter::verify_rewrite(&before, &after, &without_fk, &Universe::xy_2x2(), 1000, 42)
        .map_err(|e| e.to_string())?;
    let rellat::Verdict::Counterexample { trial, assignment } = v else {
        return Err("no counterexample without the foreign key".into());
    };
    ensure(!assignment["E"].antijoin(&assignment["D"]).is_empty(), "counterexample has no dangling tuple")?;
    Ok(format!("E0 v (E ^ D) => E0 v E, 1000 trials verified; without FK refuted at trial {trial}"))
}

fn fig1_closure() -> Check {
    let u = Universe::xy_2x2();
    let gens = example_generators();
    let c = closure::generate_closure(&gens, &u, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let report = closure::verify_lattice(&c);
    ensure(report.ok(), format!("{:?}", report.failures))?;
    ensure(c.elements.iter().all(|a| Relation::le(&Relation::dee(), a)), "R01 is not least")?;
    ensure(c.elements.iter().all(|a| Relation::le(a, &u.top_empty())), "R10 is not greatest")?;
    let (a, b, d) = (&gens[0], &gens[1], &gens[3]);
    let ad = rel(&["x", "y"], &[&["1", "a"], &["1", "b"]]);
    ensure(a.natural_join(d) == ad && c.contains(&ad), "A ^ D missing")?;
    ensure(b.natural_join(d) == u.universal() && c.contains(&u.universal()), "R11 = B ^ D missing")?;
    let p = closure::find_pentagon(&c).ok_or("no pentagon")?;
    let dot = closure::export_dot(&c);
    ensure(dot == closure::export_dot(&c), "DOT not stable")?;
    let again = closure::generate_closure(&gens, &u, DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(closure::export_dot(&again) == dot, "DOT differs across runs")?;
    ensure(dot == include_str!("golden/fig1.dot"), "DOT differs from golden file")?;
    Ok(format!("{} elements, lattice verified, pentagon at {p:?}, DOT matches golden", c.len()))
}

fn open_problem() -> Check {
    let law = find_law("or-over-meet").unwrap();
    let results = check_law_sweep(&law, &Universe::sweep(3, 3), 1000, 42).map_err(|e| e.to_string())?;
    let concrete = match results.iter().find(|(_, v)| !v.holds()) {
        Some((u, _)) => format!("concrete counterexample over {u:?}"),
        None => format!("no concrete counterexample on {} universes", results.len()),
    };
    let (found, took) = search(&["sla", "fda", "fda-inv", "sdc", "dch"], "or-over-meet", 6)?;
    let abstract_ = match found {
        Some(cex) => format!("abstract model of size {} violates it", cex.model.lattice.size()),
        None => "no abstract model of size <= 6".into(),
    };
    Ok(format!("{concrete}; {abstract_} ({:.1}s)", took.as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("law soundness sweep", law_soundness_sweep),
        ("dual decomposition witness", fda_dual_witness_values),
        ("constant theorems", constant_theorems),
        ("independence models", independence),
        ("theorem consistency", theorem_consistency),
        ("anti-join uniqueness", antijoin_uniqueness),
        ("redundant join elimination", case_study),
        ("five-generator closure", fig1_closure),
        ("open problem harness", open_problem),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
