//! Relational lattice workbench.
//!
//! Relations form a lattice under natural join (`^`) and inner union (`v`).
//! This crate provides:
//!
//! * concrete relation semantics ([`Relation`], [`Universe`]) with the
//!   constants R00/R01/R10/R11, anti-join and the Date & Darwen OR;
//! * a term language and a catalogue of laws, checked by randomized trials
//!   against concrete relations ([`catalogue`], [`check`]);
//! * a finite model finder over small abstract lattices that reproduces
//!   axiom independence results ([`models`]);
//! * redundant join elimination with semantic verification, and a
//!   brute-force anti-join equation solver ([`rewriter`]);
//! * lattice closure of a generator set with Hasse diagram export
//!   ([`closure`]).
//!
//! All term evaluation goes through the [`RelationalLattice`] trait, which is
//! implemented for concrete relations, for their packed bitset encoding, and
//! for finite lattices with designated constants.

pub mod algebra;
pub mod catalogue;
pub mod check;
pub mod closure;
pub mod error;
pub mod eval;
pub mod literal;
pub mod models;
pub mod packed;
pub mod parser;
pub mod relation;
pub mod rewriter;
pub mod term;
pub mod universe;

pub use algebra::RelationalLattice;
pub use catalogue::{find_law, law_catalogue, Law, Status};
pub use check::{check_law, Verdict};
pub use error::{LiteralError, RelationError};
pub use eval::{eval, Assignment, Env, EvalError};
pub use packed::{PackedRelation, PackedUniverse};
pub use parser::{parse_equation, parse_statement, parse_term, ParseError};
pub use relation::{AttributeName, Header, Relation, Tuple, Value};
pub use term::{normalize_ac, Constant, Equation, Implication, Statement, Term};
pub use universe::Universe;
