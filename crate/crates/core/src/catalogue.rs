//! The catalogue of relational lattice laws.
//!
//! Every entry carries its expected status: `Valid` laws must survive
//! randomized checking against concrete relations, `Invalid` ones must be
//! refuted, and `Open` ones are exercised and reported but never asserted.

use std::fmt;

use serde::Serialize;

use crate::eval::Assignment;
use crate::parser::parse_statement;
use crate::relation::Relation;
use crate::term::Statement;
use crate::universe::Universe;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Valid,
    Invalid,
    Open,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Valid => "valid",
            Status::Invalid => "invalid",
            Status::Open => "open",
        })
    }
}

/// A concrete refuting instance kept alongside an invalid law.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub universe: Universe,
    pub assignment: Assignment,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Law {
    pub id: String,
    pub statement: Statement,
    pub status: Status,
    pub reference: String,
    pub witness: Option<Witness>,
}

impl Law {
    pub fn new(id: &str, statement: &str, status: Status, reference: &str) -> Self {
        let statement = parse_statement(statement)
            .unwrap_or_else(|e| panic!("catalogue entry `{id}` does not parse: {e}"));
        Law {
            id: id.to_owned(),
            statement,
            status,
            reference: reference.to_owned(),
            witness: None,
        }
    }
}

const SLA: &str = "standard lattice axioms (SLA)";
const COUSINS: &str = "FDA⁻¹ cousin, derivable from SLA+FDA+FDA⁻¹";
const LH: &str = "lattice homomorphism property of R00 ^ _ / R11 v _";
const NOT_HOM: &str = "dual mapping is not a lattice homomorphism";
const EMPTY_DIST: &str = "distributivity of empty relations";
const OR_THM: &str = "D&D OR theorem in SLA+FDA+FDA⁻¹+SDC+DCH";

const ENTRIES: &[(&str, &str, Status, &str)] = &[
    ("sla-meet-comm", "x ^ y = y ^ x", Status::Valid, SLA),
    ("sla-meet-assoc", "(x ^ y) ^ z = x ^ (y ^ z)", Status::Valid, SLA),
    ("sla-absorb-1", "x ^ (x v y) = x", Status::Valid, SLA),
    ("sla-join-comm", "x v y = y v x", Status::Valid, SLA),
    ("sla-join-assoc", "(x v y) v z = x v (y v z)", Status::Valid, SLA),
    ("sla-absorb-2", "x v (x ^ y) = x", Status::Valid, SLA),
    ("fda", "x = (x ^ R00) v (x ^ R11)", Status::Valid, "fundamental decomposition identity (FDA)"),
    ("fda-inv", "R00 ^ (x v R11) = x ^ R00", Status::Valid, "FDA⁻¹: dual of FDA met with R00"),
    ("cousin-1", "R11 v (x ^ R00) = x v R11", Status::Valid, COUSINS),
    ("cousin-2", "R00 v (x ^ R11) = x v R00", Status::Valid, COUSINS),
    ("bottom-join", "R00 v R11 = R01", Status::Valid, "FDA instantiated at R01"),
    ("top-meet", "R00 ^ R11 = R10", Status::Valid, "constant theorem for R10"),
    (
        "header-domain-equiv",
        "R00 ^ x = R00 ^ y <-> R11 v x = R11 v y",
        Status::Valid,
        "header conditions rewritten as domain conditions",
    ),
    ("lh-meet-join", "(R00 ^ x) v (R00 ^ y) = R00 ^ (x v y)", Status::Valid, LH),
    ("lh-meet-meet", "(R00 ^ x) ^ (R00 ^ y) = R00 ^ (x ^ y)", Status::Valid, LH),
    ("lh-join-meet", "(R11 v x) ^ (R11 v y) = R11 v (x ^ y)", Status::Valid, LH),
    (
        "sdc",
        "R00 ^ (x v y) = R00 ^ (x v z) -> x ^ (y v z) = (x ^ y) v (x ^ z)",
        Status::Valid,
        "SDC: header criterion for distributivity of join over union",
    ),
    (
        "sdc-domain-form",
        "R11 v (x v y) = R11 v (x v z) -> x ^ (y v z) = (x ^ y) v (x ^ z)",
        Status::Valid,
        "SDC restated over domains",
    ),
    (
        "union-over-join-criterion",
        "R00 ^ (x v y) = R00 ^ (x v z) & R00 ^ (x v z) = R00 ^ (y v z) -> x v (y ^ z) = (x v y) ^ (x v z)",
        Status::Valid,
        "criterion for distributivity of union over join",
    ),
    (
        "dch",
        "R00 ^ (x ^ (y v z)) = R00 ^ ((x ^ y) v (x ^ z))",
        Status::Valid,
        "DCH: distributivity constraint on relation headers",
    ),
    (
        "dch-domain-form",
        "R11 v (x ^ (y v z)) = R11 v ((x ^ y) v (x ^ z))",
        Status::Valid,
        "DCH restated over domains",
    ),
    (
        "dch-dual",
        "R00 ^ (x v (y ^ z)) = R00 ^ ((x v y) ^ (x v z))",
        Status::Valid,
        "dual of DCH, a theorem of SLA+SDC+DCH",
    ),
    (
        "empty-dist-meet",
        "(x ^ R00) ^ ((y ^ R00) v (z ^ R00)) = ((x ^ R00) ^ (y ^ R00)) v ((x ^ R00) ^ (z ^ R00))",
        Status::Valid,
        EMPTY_DIST,
    ),
    (
        "empty-dist-join",
        "(x ^ R00) v ((y ^ R00) ^ (z ^ R00)) = ((x ^ R00) v (y ^ R00)) ^ ((x ^ R00) v (z ^ R00))",
        Status::Valid,
        EMPTY_DIST,
    ),
    ("or-assoc", "x + (y + z) = (x + y) + z", Status::Valid, OR_THM),
    (
        "or-assoc-half",
        "(x + y) + z = ((x ^ ((y ^ z) v R11)) v (y ^ ((x ^ z) v R11))) v (z ^ ((x ^ y) v R11))",
        Status::Valid,
        "one half of OR associativity",
    ),
    ("meet-over-or", "x ^ (y + z) = (x ^ y) + (x ^ z)", Status::Valid, OR_THM),
    ("fda-dual", "x = (x v R00) ^ (x v R11)", Status::Invalid, "dual of FDA is not a law"),
    ("r00-join-not-hom", "(R00 v x) ^ (R00 v y) = R00 v (x ^ y)", Status::Invalid, NOT_HOM),
    ("r11-meet-not-hom", "(R11 ^ x) v (R11 ^ y) = R11 ^ (x v y)", Status::Invalid, NOT_HOM),
    (
        "or-over-meet",
        "x + (y ^ z) = (x + y) ^ (x + z)",
        Status::Open,
        "distributivity of OR over join: neither proved nor refuted",
    ),
];

/// The full catalogue, in a fixed order.
pub fn law_catalogue() -> Vec<Law> {
    ENTRIES
        .iter()
        .map(|&(id, st, status, reference)| {
            let mut law = Law::new(id, st, status, reference);
            if id == "fda-dual" {
                law.witness = Some(fda_dual_witness());
            }
            law
        })
        .collect()
}

pub fn find_law(id: &str) -> Option<Law> {
    law_catalogue().into_iter().find(|l| l.id == id)
}

/// `x = {(1,a),(1,b),(2,a)}` over `x ∈ {1,2}, y ∈ {a,b}`: then `x v R00 = R01`,
/// `x v R11 = R11` and `R01 ^ R11 = R11 ≠ x`.
pub fn fda_dual_witness() -> Witness {
    let x = Relation::from_rows(&["x", "y"], &[&["1", "a"], &["1", "b"], &["2", "a"]]).expect("valid rows");
    Witness {
        universe: Universe::xy_2x2(),
        assignment: Assignment::from([("x".to_owned(), x)]),
    }
}

/// The six lattice axioms.
pub const SLA_IDS: [&str; 6] = [
    "sla-meet-comm",
    "sla-meet-assoc",
    "sla-absorb-1",
    "sla-join-comm",
    "sla-join-assoc",
    "sla-absorb-2",
];

/// A theorem together with the assumption list it is derived from.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub goal: &'static str,
    pub assumptions: Vec<&'static str>,
}

/// Assumption lists from which each catalogued theorem is derived.
/// `"sla"` stands for all six lattice axioms.
pub fn derivations() -> Vec<Derivation> {
    let d = |goal, assumptions: &[&'static str]| Derivation { goal, assumptions: assumptions.to_vec() };
    let weak_fda = ["sla-meet-comm", "sla-absorb-1", "sla-join-comm", "fda", "fda-inv"];
    let empty_dist = ["sdc", "sla-meet-comm", "sla-meet-assoc", "sla-absorb-1", "dch"];
    let or_assoc = ["sdc-domain-form", "sla", "fda", "fda-inv", "dch-domain-form"];
    let meet_over_or = ["sdc-domain-form", "sla", "dch-domain-form", "lh-join-meet"];
    vec![
        d("cousin-1", &weak_fda),
        d("cousin-2", &["sla-meet-comm", "sla-join-comm", "sla-join-assoc", "sla-absorb-2", "fda"]),
        d("header-domain-equiv", &weak_fda),
        d("lh-meet-join", &["sla", "fda", "fda-inv"]),
        d("union-over-join-criterion", &["sdc", "sla", "fda", "fda-inv"]),
        d("dch-dual", &["sdc", "sla", "dch"]),
        d("empty-dist-meet", &empty_dist),
        d("empty-dist-join", &empty_dist),
        d("or-assoc-half", &or_assoc),
        d("or-assoc", &or_assoc),
        d("meet-over-or", &meet_over_or),
    ]
}
