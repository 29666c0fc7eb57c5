//! Redundant join elimination under foreign key and projection constraints,
//! and a brute-force solver for the anti-join equations.
//!
//! The rewrite `E0 v (E ^ D)  =>  E0 v E` is sound when every tuple of `E`
//! has a partner in `D` (a foreign key) and `header(E0) ⊆ header(E)`. Each
//! step is checked on the supplied environment and on randomly generated
//! instances that satisfy the constraints by construction. A step that fails
//! either check aborts the rewrite.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::check::Verdict;
use crate::error::RelationError;
use crate::eval::{eval, Assignment, EvalError};
use crate::relation::{AttributeName, Header, Relation, Value};
use crate::term::{normalize_ac, Term};
use crate::universe::Universe;

/// Largest candidate tuple count [`solve_antijoin`] will enumerate.
pub const ANTIJOIN_SEARCH_BOUND: usize = 20;
/// Random trials used to verify each emitted rewrite step.
pub const STEP_VERIFY_TRIALS: usize = 200;
pub const STEP_VERIFY_SEED: u64 = 7;

#[derive(Debug, Error)]
pub enum RewriteError {
    #[error("constraint {constraint} is violated: {detail}")]
    ConstraintViolated { constraint: Constraint, detail: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("cannot generate instances: {0}")]
    Unsatisfiable(String),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("rewrite `{before}` => `{after}` failed verification")]
    Unverified { before: Term, after: Term },
}

/// One declared constraint between ground names.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Constraint {
    /// Every tuple of `e` matches some tuple of `d`.
    ForeignKey { e: String, d: String },
    /// `header(e0) ⊆ header(e)`; with `strict`, `e0` also has no tuples.
    Projection { e0: String, e: String, strict: bool },
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::ForeignKey { e, d } => write!(f, "foreign key ({e}, {d})"),
            Constraint::Projection { e0, e, .. } => write!(f, "projection ({e0}, {e})"),
        }
    }
}

impl Constraint {
    /// Checks the constraint against concrete relations.
    pub fn check(&self, env: &Assignment) -> Result<(), RewriteError> {
        let get = |n: &str| env.get(n).ok_or_else(|| EvalError::Unbound(n.to_owned()));
        let violated = |detail: String| RewriteError::ConstraintViolated { constraint: self.clone(), detail };
        match self {
            Constraint::ForeignKey { e, d } => {
                let dangling = get(e)?.antijoin(get(d)?);
                if !dangling.is_empty() {
                    return Err(violated(format!("{e} has tuples without a match in {d}: {dangling}")));
                }
            }
            Constraint::Projection { e0, e, strict } => {
                let (r0, r) = (get(e0)?, get(e)?);
                if !r0.header().is_subset(r.header()) {
                    return Err(violated(format!("header {} is not within {}", r0.header(), r.header())));
                }
                if *strict && !r0.is_empty() {
                    return Err(violated(format!("{e0} must be an empty relation")));
                }
            }
        }
        Ok(())
    }
}

/// Constraints file contents: `{"foreign_keys": [["E","D"]], "projections": [["E0","E"]]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSet {
    #[serde(default)]
    pub foreign_keys: Vec<(String, String)>,
    #[serde(default)]
    pub projections: Vec<(String, String)>,
    /// Also require projection targets to be empty (header-only) relations.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub strict_projections: bool,
}

impl ConstraintSet {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn foreign_key(mut self, e: &str, d: &str) -> Self {
        self.foreign_keys.push((e.into(), d.into()));
        self
    }

    pub fn projection(mut self, e0: &str, e: &str) -> Self {
        self.projections.push((e0.into(), e.into()));
        self
    }

    pub fn constraints(&self) -> Vec<Constraint> {
        let fks = self
            .foreign_keys
            .iter()
            .map(|(e, d)| Constraint::ForeignKey { e: e.clone(), d: d.clone() });
        let projs = self.projections.iter().map(|(e0, e)| Constraint::Projection {
            e0: e0.clone(),
            e: e.clone(),
            strict: self.strict_projections,
        });
        fks.chain(projs).collect()
    }

    pub fn check(&self, env: &Assignment) -> Result<(), RewriteError> {
        self.constraints().iter().try_for_each(|c| c.check(env))
    }

    fn names(&self) -> BTreeSet<&str> {
        self.foreign_keys
            .iter()
            .chain(&self.projections)
            .flat_map(|(a, b)| [a.as_str(), b.as_str()])
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub before: Term,
    pub after: Term,
    pub rule: String,
    /// The constraints the step relies on.
    pub justification: ConstraintSet,
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (e, d) = &self.justification.foreign_keys[0];
        let (e0, _) = &self.justification.projections[0];
        write!(
            f,
            "{} => {}  [{}; FK({e}, {d}), Proj({e0}, {e})]",
            self.before, self.after, self.rule
        )
    }
}

const RULE: &str = "redundant-join";

/// Rewrites every `E0 v (E ^ D)` (modulo associativity and commutativity)
/// to `E0 v E` until none is left. Every declared constraint is checked on
/// `env` first, and each step is verified on `env` and by
/// [`verify_rewrite`] over `universe` before it is accepted.
pub fn eliminate_redundant_joins(
    term: &Term,
    constraints: &ConstraintSet,
    env: &Assignment,
    universe: &Universe,
) -> Result<(Term, Vec<RewriteStep>), RewriteError> {
    constraints.check(env)?;
    for name in term.names() {
        if !env.contains_key(name) {
            return Err(EvalError::Unbound(name.to_owned()).into());
        }
    }
    let mut current = term.clone();
    let mut steps = Vec::new();
    while let Some((next, justification)) = rewrite_first(&current, constraints) {
        if eval(universe, &current, env)? != eval(universe, &next, env)? {
            return Err(RewriteError::Unverified { before: current, after: next });
        }
        let verdict = verify_rewrite(&current, &next, &justification, universe, STEP_VERIFY_TRIALS, STEP_VERIFY_SEED)?;
        if !verdict.holds() {
            return Err(RewriteError::Unverified { before: current, after: next });
        }
        steps.push(RewriteStep {
            before: current,
            after: next.clone(),
            rule: RULE.into(),
            justification,
        });
        current = next;
    }
    Ok((current, steps))
}

/// Applies the rule at the first matching position in pre-order.
fn rewrite_first(t: &Term, c: &ConstraintSet) -> Option<(Term, ConstraintSet)> {
    if let Term::Join(..) = t {
        let ops = operands(t, false);
        if let Some((i, replacement, why)) = match_chain(&ops, c) {
            let mut ops = ops;
            ops[i] = replacement;
            let rebuilt = ops.into_iter().reduce(Term::join).expect("nonempty chain");
            return Some((rebuilt, why));
        }
    }
    match t {
        Term::Meet(a, b) | Term::Join(a, b) | Term::Or(a, b) => {
            let rebuild = |a: Term, b: Term| match t {
                Term::Meet(..) => a.meet(b),
                Term::Join(..) => a.join(b),
                _ => a.or(b),
            };
            if let Some((na, why)) = rewrite_first(a, c) {
                return Some((rebuild(na, (**b).clone()), why));
            }
            rewrite_first(b, c).map(|(nb, why)| (rebuild((**a).clone(), nb), why))
        }
        _ => None,
    }
}

/// Operands of a `^` or `v` chain, in their original order.
fn operands(t: &Term, meet: bool) -> Vec<Term> {
    match (t, meet) {
        (Term::Meet(a, b), true) | (Term::Join(a, b), false) => {
            let mut out = operands(a, meet);
            out.extend(operands(b, meet));
            out
        }
        _ => vec![t.clone()],
    }
}

/// Finds an operand `E ^ D` of a join chain that also contains `E0`.
fn match_chain(ops: &[Term], c: &ConstraintSet) -> Option<(usize, Term, ConstraintSet)> {
    let grounds: BTreeSet<&str> = ops
        .iter()
        .filter_map(|t| match t {
            Term::Ground(n) => Some(n.as_str()),
            _ => None,
        })
        .collect();
    for (i, op) in ops.iter().enumerate() {
        if !matches!(op, Term::Meet(..)) {
            continue;
        }
        let factors = operands(op, true);
        let [Term::Ground(a), Term::Ground(b)] = factors.as_slice() else {
            continue;
        };
        for (e, d) in &c.foreign_keys {
            if !((a == e && b == d) || (a == d && b == e)) {
                continue;
            }
            let proj = c.projections.iter().find(|(e0, pe)| pe == e && grounds.contains(e0.as_str()));
            if let Some((e0, _)) = proj {
                let why = ConstraintSet {
                    foreign_keys: vec![(e.clone(), d.clone())],
                    projections: vec![(e0.clone(), e.clone())],
                    strict_projections: c.strict_projections,
                };
                return Some((i, Term::ground(e), why));
            }
        }
    }
    None
}

/// How a projection target is drawn from its source.
#[derive(Clone, Copy, Debug)]
enum ProjectionMode {
    /// exactly the projection of the source
    Pure,
    /// projection plus random extra tuples
    Noisy,
    /// any relation over a sub-header
    Free,
}

/// Samples assignments satisfying `c` by construction and compares
/// `before` and `after` on each. Names not mentioned in `c` are drawn
/// freely.
pub fn verify_rewrite(
    before: &Term,
    after: &Term,
    c: &ConstraintSet,
    universe: &Universe,
    trials: usize,
    seed: u64,
) -> Result<Verdict, RewriteError> {
    if trials == 0 {
        return Err(RewriteError::NoTrials);
    }
    let mut names: BTreeSet<&str> = before.names();
    names.extend(after.names());
    names.extend(c.names());
    let order = generation_order(&names, c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let mode = [ProjectionMode::Pure, ProjectionMode::Noisy, ProjectionMode::Free][trial % 3];
        let env = generate(&order, c, universe, &mut rng, mode)?;
        c.check(&env)
            .map_err(|e| RewriteError::Unsatisfiable(format!("generated instance fails: {e}")))?;
        if eval(universe, before, &env)? != eval(universe, after, &env)? {
            return Ok(Verdict::Counterexample { trial, assignment: env });
        }
    }
    Ok(Verdict::Holds { trials, vacuous: 0 })
}

/// Orders names so that foreign key targets precede their sources and
/// projection sources precede their targets.
fn generation_order<'a>(names: &BTreeSet<&'a str>, c: &ConstraintSet) -> Result<Vec<&'a str>, RewriteError> {
    // edge a -> b: a must be generated before b
    let mut edges: BTreeSet<(&str, &str)> = BTreeSet::new();
    for (e, d) in &c.foreign_keys {
        edges.insert((d, e));
    }
    for (e0, e) in &c.projections {
        edges.insert((e, e0));
    }
    if let Some((a, _)) = edges.iter().find(|(a, b)| a == b) {
        return Err(RewriteError::Unsatisfiable(format!("{a} is constrained against itself")));
    }
    let mut remaining: Vec<&str> = names.iter().copied().collect();
    let mut order = Vec::new();
    while !remaining.is_empty() {
        let ready = remaining
            .iter()
            .position(|n| !edges.iter().any(|(a, b)| b == n && remaining.contains(a)));
        match ready {
            Some(i) => order.push(remaining.remove(i)),
            None => {
                return Err(RewriteError::Unsatisfiable(format!(
                    "cyclic constraints among {}",
                    remaining.join(", ")
                )))
            }
        }
    }
    Ok(order)
}

const DENSITIES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn random_subheader<R: Rng>(rng: &mut R, of: &Header) -> Header {
    Header::new(of.iter().filter(|_| rng.gen_bool(0.5)).map(|a| a.as_str().to_owned())).expect("sub-header")
}

fn generate<R: Rng>(
    order: &[&str],
    c: &ConstraintSet,
    u: &Universe,
    rng: &mut R,
    mode: ProjectionMode,
) -> Result<Assignment, RewriteError> {
    let mut env = Assignment::new();
    for &name in order {
        let sources: Vec<&Relation> = c
            .projections
            .iter()
            .filter(|(e0, _)| e0 == name)
            .map(|(_, e)| &env[e.as_str()])
            .collect();
        let density = *DENSITIES.choose(rng).expect("nonempty");
        let rel = if sources.is_empty() {
            let header = random_subheader(rng, &u.attributes());
            let mut r = u.random_relation_with(rng, &header, density)?;
            for (_, d) in c.foreign_keys.iter().filter(|(e, _)| e == name) {
                r = r.semijoin(&env[d.as_str()]);
            }
            r
        } else {
            let common = sources.iter().fold(u.attributes(), |h, s| h.intersection(s.header()));
            let header = random_subheader(rng, &common);
            if c.strict_projections {
                Relation::empty(header)
            } else {
                let noise = u.random_relation_with(rng, &header, density)?;
                match mode {
                    ProjectionMode::Pure => sources[0].project(&header),
                    ProjectionMode::Noisy => sources[0].project(&header).inner_union(&noise),
                    ProjectionMode::Free => noise,
                }
            }
        };
        // a projection target with its own foreign keys is not generated
        // consistently; refuse rather than emit bad instances
        if !sources.is_empty() && c.foreign_keys.iter().any(|(e, _)| e == name) {
            return Err(RewriteError::Unsatisfiable(format!(
                "{name} is both a projection target and a foreign key source"
            )));
        }
        env.insert(name.to_owned(), rel);
    }
    Ok(env)
}

/// A universe spanning every attribute and value occurring in `env`.
/// Attributes whose relations are all empty get a single placeholder value.
pub fn universe_of(env: &Assignment) -> Result<Universe, RelationError> {
    let mut domains: BTreeMap<AttributeName, BTreeSet<Value>> = BTreeMap::new();
    for rel in env.values() {
        for a in rel.header().iter() {
            domains.entry(a.clone()).or_default();
        }
        for row in rel.bindings() {
            for (a, v) in row {
                domains.get_mut(a).expect("header attribute").insert(v.clone());
            }
        }
    }
    for dom in domains.values_mut() {
        if dom.is_empty() {
            dom.insert(Value::new("_"));
        }
    }
    Universe::new(domains)
}

/// All relations `X` over `header(e)` with `(e ^ d) v X = e` and
/// `(e ^ d) ^ X = (e ^ d) ^ R00`, by exhaustive enumeration.
pub fn solve_antijoin(e: &Relation, d: &Relation, u: &Universe) -> Result<BTreeSet<Relation>, RewriteError> {
    u.validate(e)?;
    u.validate(d)?;
    let candidates = u.product(e.header())?;
    if candidates.len() > ANTIJOIN_SEARCH_BOUND {
        return Err(RelationError::SearchSpaceTooLarge {
            tuples: candidates.len() as u128,
            bound: ANTIJOIN_SEARCH_BOUND as u128,
        }
        .into());
    }
    let ed = e.natural_join(d);
    let ed_empty = ed.natural_join(&Relation::dum());
    let mut solutions = BTreeSet::new();
    for bits in 0u32..(1 << candidates.len()) {
        let tuples = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, t)| t.clone());
        let x = Relation::new(e.header().clone(), tuples)?;
        if ed.inner_union(&x) == *e && ed.natural_join(&x) == ed_empty {
            solutions.insert(x);
        }
    }
    Ok(solutions)
}

/// Whether two terms agree after AC normalization.
pub fn same_modulo_ac(a: &Term, b: &Term) -> bool {
    normalize_ac(a) == normalize_ac(b)
}
