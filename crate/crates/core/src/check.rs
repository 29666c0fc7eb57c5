//! Randomized checking of catalogue laws against concrete relations.
//!
//! Each trial draws a relation for every free name of the law and evaluates
//! the statement. Headers are drawn under a rotating plan so that laws with
//! header premises (SDC and friends) see premise-satisfying instances often:
//! independent headers on half the trials, one shared header on a quarter,
//! and on the last quarter headers that pairwise intersect in one common core.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::RelationalLattice;
use crate::catalogue::{Law, Status};
use crate::eval::{statement_outcome, Assignment, Env, EvalError, Outcome};
use crate::packed::PackedUniverse;
use crate::relation::{Header, Relation};
use crate::universe::Universe;

pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_SEED: u64 = 42;

const DENSITIES: [f64; 6] = [0.0, 0.25, 0.5, 0.5, 0.75, 1.0];

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// No trial violated the law. `vacuous` trials had a failing premise.
    Holds { trials: usize, vacuous: usize },
    /// First violating trial (by index) and its assignment.
    Counterexample { trial: usize, assignment: Assignment },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    /// Whether the verdict agrees with the catalogue status. Open laws agree
    /// with anything.
    pub fn agrees_with(&self, status: Status) -> bool {
        match status {
            Status::Valid => self.holds(),
            Status::Invalid => !self.holds(),
            Status::Open => true,
        }
    }
}

/// Machine-readable form of a verdict.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictSummary {
    pub law: String,
    pub status: Status,
    pub universe: String,
    pub holds: bool,
    pub trials: usize,
    pub vacuous: usize,
    pub counterexample: Option<std::collections::BTreeMap<String, String>>,
}

impl VerdictSummary {
    pub fn new(law: &Law, universe: &Universe, verdict: &Verdict) -> Self {
        let (holds, trials, vacuous, counterexample) = match verdict {
            Verdict::Holds { trials, vacuous } => (true, *trials, *vacuous, None),
            Verdict::Counterexample { trial, assignment } => (
                false,
                trial + 1,
                0,
                Some(assignment.iter().map(|(k, r)| (k.clone(), r.to_string())).collect()),
            ),
        };
        VerdictSummary {
            law: law.id.clone(),
            status: law.status,
            universe: crate::literal::universe_to_json(universe),
            holds,
            trials,
            vacuous,
            counterexample,
        }
    }
}

/// A carrier the checker can sample from.
trait Sampler: RelationalLattice {
    fn attribute_count(&self) -> usize;
    fn draw(&self, rng: &mut ChaCha8Rng, mask: u32, density: f64) -> Self::Elem;
    fn to_relation(&self, e: &Self::Elem) -> Relation;
}

impl Sampler for PackedUniverse {
    fn attribute_count(&self) -> usize {
        PackedUniverse::attribute_count(self)
    }

    fn draw(&self, rng: &mut ChaCha8Rng, mask: u32, density: f64) -> Self::Elem {
        self.random(rng, mask, density)
    }

    fn to_relation(&self, e: &Self::Elem) -> Relation {
        self.unpack(e)
    }
}

impl Sampler for Universe {
    fn attribute_count(&self) -> usize {
        self.domains().len()
    }

    fn draw(&self, rng: &mut ChaCha8Rng, mask: u32, density: f64) -> Relation {
        let attrs = self.attributes();
        let header = Header::new(
            attrs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, a)| a.as_str().to_owned()),
        )
        .expect("distinct attributes");
        self.random_relation_with(rng, &header, density).expect("own attributes")
    }

    fn to_relation(&self, e: &Relation) -> Relation {
        e.clone()
    }
}

fn draw_headers(rng: &mut ChaCha8Rng, trial: usize, k: usize, names: usize) -> Vec<u32> {
    let all = if k == 0 { 0 } else { u32::MAX >> (32 - k) };
    let random_mask = |rng: &mut ChaCha8Rng| rng.gen::<u32>() & all;
    match trial % 4 {
        2 => vec![random_mask(rng); names],
        3 => {
            let core = random_mask(rng);
            let mut masks = vec![core; names];
            for a in 0..k {
                if core >> a & 1 == 0 && names > 0 {
                    // give the attribute to one name, or to nobody
                    let owner = rng.gen_range(0..=names);
                    if owner < names {
                        masks[owner] |= 1 << a;
                    }
                }
            }
            masks
        }
        _ => (0..names).map(|_| random_mask(rng)).collect(),
    }
}

fn run<S: Sampler>(carrier: &S, law: &Law, trials: usize, seed: u64) -> Result<Verdict, CheckError> {
    if trials == 0 {
        return Err(CheckError::NoTrials);
    }
    let names: Vec<String> = law.statement.names().into_iter().map(str::to_owned).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vacuous = 0;
    for trial in 0..trials {
        let masks = draw_headers(&mut rng, trial, carrier.attribute_count(), names.len());
        let mut env = Env::new();
        for (name, mask) in names.iter().zip(masks) {
            let density = *DENSITIES.choose(&mut rng).expect("nonempty");
            env.insert(name.clone(), carrier.draw(&mut rng, mask, density));
        }
        match statement_outcome(carrier, &law.statement, &env)? {
            Outcome::Holds => {}
            Outcome::Vacuous => vacuous += 1,
            Outcome::Violated => {
                let assignment = env.iter().map(|(k, e)| (k.clone(), carrier.to_relation(e))).collect();
                return Ok(Verdict::Counterexample { trial, assignment });
            }
        }
    }
    Ok(Verdict::Holds { trials, vacuous })
}

/// Checks `law` on `trials` random assignments over `universe`.
/// Deterministic for a fixed seed.
pub fn check_law(law: &Law, universe: &Universe, trials: usize, seed: u64) -> Result<Verdict, CheckError> {
    match PackedUniverse::new(universe) {
        Some(packed) => run(&packed, law, trials, seed),
        None => run(universe, law, trials, seed),
    }
}

/// Same as [`check_law`] but always on the `Relation` representation.
pub fn check_law_unpacked(law: &Law, universe: &Universe, trials: usize, seed: u64) -> Result<Verdict, CheckError> {
    run(universe, law, trials, seed)
}

/// Checks a law on every universe, stopping at the first counterexample.
pub fn check_law_sweep(
    law: &Law,
    universes: &[Universe],
    trials: usize,
    seed: u64,
) -> Result<Vec<(Universe, Verdict)>, CheckError> {
    let mut out = Vec::with_capacity(universes.len());
    for u in universes {
        let v = check_law(law, u, trials, seed)?;
        let stop = !v.holds();
        out.push((u.clone(), v));
        if stop {
            break;
        }
    }
    Ok(out)
}

/// Evaluates a law under one explicit assignment.
pub fn replay(law: &Law, universe: &Universe, assignment: &Assignment) -> Result<Outcome, EvalError> {
    statement_outcome(universe, &law.statement, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::find_law;

    #[test]
    fn fda_holds_on_small_universe() {
        let v = check_law(&find_law("fda").unwrap(), &Universe::xy_2x2(), 300, 1).unwrap();
        assert!(v.holds());
    }

    #[test]
    fn fda_dual_refuted() {
        let law = find_law("fda-dual").unwrap();
        let u = Universe::xy_2x2();
        match check_law(&law, &u, 1000, 42).unwrap() {
            Verdict::Counterexample { assignment, .. } => {
                assert_eq!(replay(&law, &u, &assignment).unwrap(), Outcome::Violated);
            }
            v => panic!("expected counterexample, got {v:?}"),
        }
    }

    #[test]
    fn zero_trials_rejected() {
        let law = find_law("fda").unwrap();
        assert!(matches!(check_law(&law, &Universe::xy_2x2(), 0, 1), Err(CheckError::NoTrials)));
    }

    #[test]
    fn deterministic_for_seed() {
        let law = find_law("r11-meet-not-hom").unwrap();
        let u = Universe::xy_2x2();
        assert_eq!(check_law(&law, &u, 500, 9).unwrap(), check_law(&law, &u, 500, 9).unwrap());
    }

    #[test]
    fn packed_and_unpacked_agree() {
        let u = Universe::from_domains(&[("x", &["1", "2"]), ("y", &["a", "b", "c"])]).unwrap();
        for law in crate::catalogue::law_catalogue() {
            let a = check_law(&law, &u, 60, 3).unwrap();
            let b = check_law_unpacked(&law, &u, 60, 3).unwrap();
            assert_eq!(a, b, "{}", law.id);
        }
    }
}
