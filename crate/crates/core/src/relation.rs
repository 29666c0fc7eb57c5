//! Finite relations and the operations defined on them.
//!
//! A [`Relation`] is a header (a set of attribute names) together with a set
//! of tuples over exactly that header. Tuples are stored positionally against
//! the header sorted by attribute name, so iteration order and serialization
//! are canonical.
//!
//! The two lattice operations are [`Relation::natural_join`] (written `^`)
//! and [`Relation::inner_union`] (written `v`). The remaining operations are
//! either derived from them or are plumbing used elsewhere in the crate.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::RelationError;

/// Name of an attribute (column). Never empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AttributeName(String);

impl AttributeName {
    pub fn new(name: impl Into<String>) -> Result<Self, RelationError> {
        let name = name.into();
        if name.is_empty() {
            return Err(RelationError::EmptyAttributeName);
        }
        Ok(AttributeName(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for AttributeName {
    type Error = RelationError;

    fn try_from(name: String) -> Result<Self, Self::Error> {
        AttributeName::new(name)
    }
}

impl From<AttributeName> for String {
    fn from(name: AttributeName) -> String {
        name.0
    }
}

impl fmt::Display for AttributeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Opaque attribute value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Value(String);

impl Value {
    pub fn new(text: impl Into<String>) -> Self {
        Value(text.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Value {
    fn from(text: &str) -> Self {
        Value(text.to_owned())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A set of attribute names, kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Header(Vec<AttributeName>);

impl Header {
    pub fn empty() -> Self {
        Header(Vec::new())
    }

    /// Builds a header from names in any order. Duplicates are rejected.
    pub fn new<I>(names: I) -> Result<Self, RelationError>
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let mut attrs = names
            .into_iter()
            .map(AttributeName::new)
            .collect::<Result<Vec<_>, _>>()?;
        attrs.sort();
        if let Some(w) = attrs.windows(2).find(|w| w[0] == w[1]) {
            return Err(RelationError::DuplicateAttribute(w[0].clone()));
        }
        Ok(Header(attrs))
    }

    pub(crate) fn from_sorted(attrs: Vec<AttributeName>) -> Self {
        debug_assert!(attrs.windows(2).all(|w| w[0] < w[1]));
        Header(attrs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AttributeName> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[AttributeName] {
        &self.0
    }

    pub fn position(&self, name: &AttributeName) -> Option<usize> {
        self.0.binary_search(name).ok()
    }

    pub fn contains(&self, name: &AttributeName) -> bool {
        self.position(name).is_some()
    }

    pub fn is_subset(&self, other: &Header) -> bool {
        self.0.iter().all(|a| other.contains(a))
    }

    pub fn union(&self, other: &Header) -> Header {
        let set: BTreeSet<_> = self.0.iter().chain(other.0.iter()).cloned().collect();
        Header(set.into_iter().collect())
    }

    pub fn intersection(&self, other: &Header) -> Header {
        Header(self.0.iter().filter(|a| other.contains(a)).cloned().collect())
    }
}

impl fmt::Display for Header {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(AttributeName::as_str).collect();
        write!(f, "[{}]", names.join(", "))
    }
}

/// A tuple, stored positionally against its relation's sorted header.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple(Vec<Value>);

impl Tuple {
    pub fn new(values: Vec<Value>) -> Self {
        Tuple(values)
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    fn pick(&self, positions: &[usize]) -> Tuple {
        Tuple(positions.iter().map(|&i| self.0[i].clone()).collect())
    }
}

/// A relation: header plus a duplicate-free set of tuples over that header.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    header: Header,
    tuples: BTreeSet<Tuple>,
}

impl Relation {
    /// Builds a relation whose tuples are positional against `header`
    /// (which is always sorted).
    pub fn new<I>(header: Header, tuples: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = Tuple>,
    {
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.0.len() != header.len() {
                return Err(RelationError::ArityMismatch {
                    expected: header.len(),
                    found: t.0.len(),
                });
            }
            set.insert(t);
        }
        Ok(Relation { header, tuples: set })
    }

    /// Builds a relation from rows given positionally against `attrs`, which
    /// may be listed in any order.
    ///
    /// ```
    /// use rellat::Relation;
    /// let e = Relation::from_rows(&["ename", "deptno"], &[&["SMITH", "10"]]).unwrap();
    /// assert_eq!(e.header().to_string(), "[deptno, ename]");
    /// ```
    pub fn from_rows<S: AsRef<str>>(attrs: &[&str], rows: &[&[S]]) -> Result<Self, RelationError> {
        let header = Header::new(attrs.iter().copied())?;
        // position in the caller's order for each sorted attribute
        let order: Vec<usize> = header
            .iter()
            .map(|a| attrs.iter().position(|s| *s == a.as_str()).expect("attribute present"))
            .collect();
        let mut tuples = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != attrs.len() {
                return Err(RelationError::ArityMismatch {
                    expected: attrs.len(),
                    found: row.len(),
                });
            }
            tuples.push(Tuple(order.iter().map(|&i| Value::new(row[i].as_ref())).collect()));
        }
        Relation::new(header, tuples)
    }

    pub fn empty(header: Header) -> Self {
        Relation { header, tuples: BTreeSet::new() }
    }

    /// R00: empty header, no tuples.
    pub fn dum() -> Self {
        Relation::empty(Header::empty())
    }

    /// R01: empty header, one empty tuple. The identity of natural join.
    pub fn dee() -> Self {
        let mut tuples = BTreeSet::new();
        tuples.insert(Tuple(Vec::new()));
        Relation { header: Header::empty(), tuples }
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Tuple> + '_ {
        self.tuples.iter()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &Tuple) -> bool {
        self.tuples.contains(tuple)
    }

    /// Tuples as attribute-to-value bindings.
    pub fn bindings(&self) -> impl Iterator<Item = Vec<(&AttributeName, &Value)>> + '_ {
        self.tuples
            .iter()
            .map(move |t| self.header.iter().zip(t.0.iter()).collect())
    }

    /// Natural join (`^`): header union, tuples agreeing on shared attributes.
    pub fn natural_join(&self, other: &Relation) -> Relation {
        let header = self.header.union(&other.header);
        let source: Vec<(bool, usize)> = header
            .iter()
            .map(|a| match self.header.position(a) {
                Some(i) => (true, i),
                None => (false, other.header.position(a).expect("attribute in union")),
            })
            .collect();
        let shared: Vec<(usize, usize)> = self
            .header
            .iter()
            .enumerate()
            .filter_map(|(i, a)| other.header.position(a).map(|j| (i, j)))
            .collect();

        let mut tuples = BTreeSet::new();
        for t in &self.tuples {
            for s in &other.tuples {
                if shared.iter().all(|&(i, j)| t.0[i] == s.0[j]) {
                    let row = source
                        .iter()
                        .map(|&(left, i)| if left { t.0[i].clone() } else { s.0[i].clone() })
                        .collect();
                    tuples.insert(Tuple(row));
                }
            }
        }
        Relation { header, tuples }
    }

    /// Inner union (`v`): header intersection, union of both projections.
    pub fn inner_union(&self, other: &Relation) -> Relation {
        let header = self.header.intersection(&other.header);
        let left = self.positions_of(&header);
        let right = other.positions_of(&header);
        let tuples = self
            .tuples
            .iter()
            .map(|t| t.pick(&left))
            .chain(other.tuples.iter().map(|t| t.pick(&right)))
            .collect();
        Relation { header, tuples }
    }

    /// Projection onto `attrs ∩ header(self)`.
    pub fn project(&self, attrs: &Header) -> Relation {
        let header = self.header.intersection(attrs);
        let positions = self.positions_of(&header);
        let tuples = self.tuples.iter().map(|t| t.pick(&positions)).collect();
        Relation { header, tuples }
    }

    /// Anti-join: tuples of `self` that match no tuple of `other` on the
    /// shared attributes. The header is that of `self`.
    pub fn antijoin(&self, other: &Relation) -> Relation {
        let shared = self.header.intersection(&other.header);
        let mine = self.positions_of(&shared);
        let theirs = other.positions_of(&shared);
        let keys: BTreeSet<Tuple> = other.tuples.iter().map(|t| t.pick(&theirs)).collect();
        let tuples = self
            .tuples
            .iter()
            .filter(|t| !keys.contains(&t.pick(&mine)))
            .cloned()
            .collect();
        Relation { header: self.header.clone(), tuples }
    }

    /// Semi-join: tuples of `self` matching some tuple of `other`.
    pub fn semijoin(&self, other: &Relation) -> Relation {
        let shared = self.header.intersection(&other.header);
        let mine = self.positions_of(&shared);
        let theirs = other.positions_of(&shared);
        let keys: BTreeSet<Tuple> = other.tuples.iter().map(|t| t.pick(&theirs)).collect();
        let tuples = self
            .tuples
            .iter()
            .filter(|t| keys.contains(&t.pick(&mine)))
            .cloned()
            .collect();
        Relation { header: self.header.clone(), tuples }
    }

    /// Lattice order: `a <= b` iff `a ^ b = b`. R01 is the least element and
    /// R10 the greatest.
    pub fn le(&self, other: &Relation) -> bool {
        // a ^ b = b  <=>  header(a) ⊆ header(b) and project(b, header(a)) ⊆ a
        if !self.header.is_subset(&other.header) {
            return false;
        }
        let positions = other.positions_of(&self.header);
        other.tuples.iter().all(|t| self.tuples.contains(&t.pick(&positions)))
    }

    fn positions_of(&self, sub: &Header) -> Vec<usize> {
        sub.iter()
            .map(|a| self.header.position(a).expect("sub-header"))
            .collect()
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.header)?;
        for (k, t) in self.tuples.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            let vals: Vec<&str> = t.0.iter().map(Value::as_str).collect();
            write!(f, "({})", vals.join(", "))?;
        }
        f.write_str("}")
    }
}
