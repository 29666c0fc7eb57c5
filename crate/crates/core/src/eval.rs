//! Evaluation of terms and statements in any [`RelationalLattice`].

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::RelationalLattice;
use crate::relation::Relation;
use crate::term::{Constant, Equation, Implication, Statement, Term};

/// Values for the variables and ground names of a term.
pub type Env<E> = BTreeMap<String, E>;

/// Assignment of concrete relations.
pub type Assignment = Env<Relation>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound name `{0}`")]
    Unbound(String),
}

pub fn constant<A: RelationalLattice>(alg: &A, c: Constant) -> A::Elem {
    match c {
        Constant::R00 => alg.r00(),
        Constant::R01 => alg.r01(),
        Constant::R10 => alg.r10(),
        Constant::R11 => alg.r11(),
    }
}

pub fn eval<A: RelationalLattice>(alg: &A, term: &Term, env: &Env<A::Elem>) -> Result<A::Elem, EvalError> {
    Ok(match term {
        Term::Var(n) | Term::Ground(n) => env.get(n).cloned().ok_or_else(|| EvalError::Unbound(n.clone()))?,
        Term::Const(c) => constant(alg, *c),
        Term::Meet(a, b) => alg.meet(&eval(alg, a, env)?, &eval(alg, b, env)?),
        Term::Join(a, b) => alg.join(&eval(alg, a, env)?, &eval(alg, b, env)?),
        Term::Or(a, b) => alg.or(&eval(alg, a, env)?, &eval(alg, b, env)?),
    })
}

pub fn holds<A: RelationalLattice>(alg: &A, eq: &Equation, env: &Env<A::Elem>) -> Result<bool, EvalError> {
    Ok(eval(alg, &eq.lhs, env)? == eval(alg, &eq.rhs, env)?)
}

/// Result of evaluating a statement under one assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Premises hold and so does the conclusion.
    Holds,
    /// Some premise fails, so nothing was tested.
    Vacuous,
    Violated,
}

pub fn implication_outcome<A: RelationalLattice>(
    alg: &A,
    imp: &Implication,
    env: &Env<A::Elem>,
) -> Result<Outcome, EvalError> {
    for p in &imp.premises {
        if !holds(alg, p, env)? {
            return Ok(Outcome::Vacuous);
        }
    }
    Ok(if holds(alg, &imp.conclusion, env)? { Outcome::Holds } else { Outcome::Violated })
}

pub fn statement_outcome<A: RelationalLattice>(
    alg: &A,
    st: &Statement,
    env: &Env<A::Elem>,
) -> Result<Outcome, EvalError> {
    match st {
        Statement::Implies(imp) => implication_outcome(alg, imp, env),
        Statement::Iff(a, b) => {
            let (pa, pb) = (holds(alg, a, env)?, holds(alg, b, env)?);
            Ok(match (pa, pb) {
                (true, true) => Outcome::Holds,
                (false, false) => Outcome::Vacuous,
                _ => Outcome::Violated,
            })
        }
    }
}
