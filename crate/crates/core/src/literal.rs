//! JSON file formats.
//!
//! Relation literal: `{"header": ["deptno","ename"], "tuples": [["10","SMITH"]]}`
//! with values positional against the header, which must be listed sorted.
//! Universe: `{"attributes": {"x": ["1","2"], "y": ["a","b"]}}`.
//! Environment: a JSON object mapping names to relation literals.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{LiteralError, RelationError};
use crate::relation::{AttributeName, Header, Relation, Tuple, Value};
use crate::universe::Universe;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationLiteral {
    pub header: Vec<String>,
    pub tuples: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseLiteral {
    pub attributes: BTreeMap<String, Vec<String>>,
}

impl From<&Relation> for RelationLiteral {
    fn from(rel: &Relation) -> Self {
        RelationLiteral {
            header: rel.header().iter().map(|a| a.as_str().to_owned()).collect(),
            tuples: rel
                .tuples()
                .map(|t| t.values().iter().map(|v| v.as_str().to_owned()).collect())
                .collect(),
        }
    }
}

impl TryFrom<RelationLiteral> for Relation {
    type Error = RelationError;

    fn try_from(lit: RelationLiteral) -> Result<Self, Self::Error> {
        let attrs = lit
            .header
            .into_iter()
            .map(AttributeName::new)
            .collect::<Result<Vec<_>, _>>()?;
        for w in attrs.windows(2) {
            if w[0] == w[1] {
                return Err(RelationError::DuplicateAttribute(w[0].clone()));
            }
            if w[0] > w[1] {
                return Err(RelationError::UnsortedHeader { after: w[0].clone(), found: w[1].clone() });
            }
        }
        let header = Header::from_sorted(attrs);
        let tuples = lit
            .tuples
            .into_iter()
            .map(|row| Tuple::new(row.into_iter().map(Value::new).collect()));
        Relation::new(header, tuples)
    }
}

impl From<&Universe> for UniverseLiteral {
    fn from(u: &Universe) -> Self {
        UniverseLiteral {
            attributes: u
                .domains()
                .iter()
                .map(|(a, d)| (a.as_str().to_owned(), d.iter().map(|v| v.as_str().to_owned()).collect()))
                .collect(),
        }
    }
}

impl TryFrom<UniverseLiteral> for Universe {
    type Error = RelationError;

    fn try_from(lit: UniverseLiteral) -> Result<Self, Self::Error> {
        let mut domains = BTreeMap::new();
        for (attr, values) in lit.attributes {
            domains.insert(AttributeName::new(attr)?, values.into_iter().map(Value::new).collect());
        }
        Universe::new(domains)
    }
}

pub fn relation_to_json(rel: &Relation) -> String {
    serde_json::to_string(&RelationLiteral::from(rel)).expect("serializable")
}

pub fn relation_from_json(text: &str) -> Result<Relation, LiteralError> {
    let lit: RelationLiteral = serde_json::from_str(text)?;
    Ok(Relation::try_from(lit)?)
}

pub fn universe_from_json(text: &str) -> Result<Universe, LiteralError> {
    let lit: UniverseLiteral = serde_json::from_str(text)?;
    Ok(Universe::try_from(lit)?)
}

pub fn universe_to_json(u: &Universe) -> String {
    serde_json::to_string(&UniverseLiteral::from(u)).expect("serializable")
}

/// Parses an environment: `{"A": <relation literal>, ...}`.
pub fn environment_from_json(text: &str) -> Result<BTreeMap<String, Relation>, LiteralError> {
    let lits: BTreeMap<String, RelationLiteral> = serde_json::from_str(text)?;
    lits.into_iter()
        .map(|(name, lit)| Ok((name, Relation::try_from(lit)?)))
        .collect()
}

pub fn environment_to_json(env: &BTreeMap<String, Relation>) -> String {
    let lits: BTreeMap<&String, RelationLiteral> = env.iter().map(|(k, r)| (k, RelationLiteral::from(r))).collect();
    serde_json::to_string_pretty(&lits).expect("serializable")
}

/// Parses a list of relation literals.
pub fn relations_from_json(text: &str) -> Result<Vec<Relation>, LiteralError> {
    let lits: Vec<RelationLiteral> = serde_json::from_str(text)?;
    lits.into_iter()
        .map(|lit| Relation::try_from(lit).map_err(LiteralError::from))
        .collect()
}

pub fn read_universe(path: &Path) -> Result<Universe, LiteralError> {
    universe_from_json(&std::fs::read_to_string(path)?)
}

pub fn read_environment(path: &Path) -> Result<BTreeMap<String, Relation>, LiteralError> {
    environment_from_json(&std::fs::read_to_string(path)?)
}

pub fn read_relations(path: &Path) -> Result<Vec<Relation>, LiteralError> {
    relations_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_literal_format() {
        let e = Relation::from_rows(&["ename", "deptno"], &[&["SMITH", "10"], &["JONES", "20"]]).unwrap();
        assert_eq!(
            relation_to_json(&e),
            r#"{"header":["deptno","ename"],"tuples":[["10","SMITH"],["20","JONES"]]}"#
        );
        assert_eq!(relation_from_json(&relation_to_json(&e)).unwrap(), e);
    }

    #[test]
    fn unsorted_header_rejected() {
        let err = relation_from_json(r#"{"header":["ename","deptno"],"tuples":[]}"#).unwrap_err();
        assert!(matches!(err, LiteralError::Relation(RelationError::UnsortedHeader { .. })));
    }

    #[test]
    fn arity_checked() {
        let err = relation_from_json(r#"{"header":["x"],"tuples":[["1","2"]]}"#).unwrap_err();
        assert!(matches!(err, LiteralError::Relation(RelationError::ArityMismatch { .. })));
    }

    #[test]
    fn universe_file() {
        let u = universe_from_json(r#"{"attributes": {"x": ["1","2"], "y": ["a","b"]}}"#).unwrap();
        assert_eq!(u, Universe::xy_2x2());
        assert_eq!(universe_from_json(&universe_to_json(&u)).unwrap(), u);
        assert!(universe_from_json(r#"{"attributes": {"x": []}}"#).is_err());
    }

    #[test]
    fn dee_and_dum_literals() {
        assert_eq!(relation_to_json(&Relation::dee()), r#"{"header":[],"tuples":[[]]}"#);
        assert_eq!(relation_to_json(&Relation::dum()), r#"{"header":[],"tuples":[]}"#);
    }
}
