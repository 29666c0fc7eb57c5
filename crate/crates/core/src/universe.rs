//! Finite universes: an attribute set with a finite, nonempty value domain per
//! attribute. R10 and R11 only make sense relative to a universe.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::RelationError;
use crate::relation::{AttributeName, Header, Relation, Tuple, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Universe {
    domains: BTreeMap<AttributeName, BTreeSet<Value>>,
}

impl Universe {
    pub fn new(domains: BTreeMap<AttributeName, BTreeSet<Value>>) -> Result<Self, RelationError> {
        if let Some((attr, _)) = domains.iter().find(|(_, d)| d.is_empty()) {
            return Err(RelationError::EmptyDomain(attr.clone()));
        }
        Ok(Universe { domains })
    }

    /// Convenience constructor from string slices.
    pub fn from_domains(spec: &[(&str, &[&str])]) -> Result<Self, RelationError> {
        let mut domains = BTreeMap::new();
        for (attr, values) in spec {
            let name = AttributeName::new(*attr)?;
            if domains.contains_key(&name) {
                return Err(RelationError::DuplicateAttribute(name));
            }
            domains.insert(name, values.iter().map(|v| Value::from(*v)).collect());
        }
        Universe::new(domains)
    }

    /// Universe with no attributes. Here R11 = R01 and R10 = R00.
    pub fn degenerate() -> Self {
        Universe { domains: BTreeMap::new() }
    }

    /// `x ∈ {1,2}`, `y ∈ {a,b}`: the domains of the small worked example.
    pub fn xy_2x2() -> Self {
        Universe::from_domains(&[("x", &["1", "2"]), ("y", &["a", "b"])]).expect("valid universe")
    }

    /// Every universe with at most `max_attrs` attributes and between 1 and
    /// `max_values` values per attribute, in a fixed order.
    pub fn sweep(max_attrs: usize, max_values: usize) -> Vec<Universe> {
        let mut out = Vec::new();
        for k in 0..=max_attrs {
            let mut sizes = vec![1usize; k];
            loop {
                let mut domains = BTreeMap::new();
                for (i, &n) in sizes.iter().enumerate() {
                    let name = AttributeName::new(sweep_attr_name(i)).expect("nonempty");
                    domains.insert(name, (1..=n).map(|v| Value::new(v.to_string())).collect());
                }
                out.push(Universe { domains });
                // odometer over sizes in 1..=max_values
                let mut i = 0;
                while i < k && sizes[i] == max_values {
                    sizes[i] = 1;
                    i += 1;
                }
                if i == k {
                    break;
                }
                sizes[i] += 1;
            }
        }
        out
    }

    pub fn attributes(&self) -> Header {
        Header::from_sorted(self.domains.keys().cloned().collect())
    }

    pub fn domain(&self, attr: &AttributeName) -> Option<&BTreeSet<Value>> {
        self.domains.get(attr)
    }

    pub fn domains(&self) -> &BTreeMap<AttributeName, BTreeSet<Value>> {
        &self.domains
    }

    /// Number of tuples in the full product over `header`.
    pub fn product_size(&self, header: &Header) -> Result<u128, RelationError> {
        header.iter().try_fold(1u128, |acc, a| {
            let d = self.domains.get(a).ok_or_else(|| RelationError::UnknownAttribute(a.clone()))?;
            Ok(acc.saturating_mul(d.len() as u128))
        })
    }

    /// All tuples over `header`, in canonical order.
    pub fn product(&self, header: &Header) -> Result<Vec<Tuple>, RelationError> {
        let columns: Vec<Vec<Value>> = header
            .iter()
            .map(|a| {
                self.domains
                    .get(a)
                    .map(|d| d.iter().cloned().collect())
                    .ok_or_else(|| RelationError::UnknownAttribute(a.clone()))
            })
            .collect::<Result<_, _>>()?;
        let mut rows: Vec<Vec<Value>> = vec![Vec::new()];
        for column in &columns {
            rows = rows
                .into_iter()
                .flat_map(|row| {
                    column.iter().map(move |v| {
                        let mut next = row.clone();
                        next.push(v.clone());
                        next
                    })
                })
                .collect();
        }
        Ok(rows.into_iter().map(Tuple::new).collect())
    }

    /// Full relation over `header`.
    pub fn full(&self, header: &Header) -> Result<Relation, RelationError> {
        Relation::new(header.clone(), self.product(header)?)
    }

    /// R10: every attribute, no tuples. The greatest element.
    pub fn top_empty(&self) -> Relation {
        Relation::empty(self.attributes())
    }

    /// R11: every attribute, every tuple.
    pub fn universal(&self) -> Relation {
        self.full(&self.attributes()).expect("own attributes")
    }

    /// Checks that `rel` lives in this universe.
    pub fn validate(&self, rel: &Relation) -> Result<(), RelationError> {
        let domains: Vec<&BTreeSet<Value>> = rel
            .header()
            .iter()
            .map(|a| self.domains.get(a).ok_or_else(|| RelationError::UnknownAttribute(a.clone())))
            .collect::<Result<_, _>>()?;
        for t in rel.tuples() {
            for ((attr, dom), v) in rel.header().iter().zip(&domains).zip(t.values()) {
                if !dom.contains(v) {
                    return Err(RelationError::ValueOutsideDomain {
                        attribute: attr.clone(),
                        value: v.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Date & Darwen OR computed from its set definition: over the union of
    /// both headers, every tuple whose restriction lies in `a` or in `b`.
    pub fn dd_or(&self, a: &Relation, b: &Relation) -> Result<Relation, RelationError> {
        self.validate(a)?;
        self.validate(b)?;
        let header = a.header().union(b.header());
        let pa: Vec<usize> = a.header().iter().map(|x| header.position(x).expect("in union")).collect();
        let pb: Vec<usize> = b.header().iter().map(|x| header.position(x).expect("in union")).collect();
        let pick = |t: &Tuple, ps: &[usize]| Tuple::new(ps.iter().map(|&i| t.values()[i].clone()).collect());
        let tuples = self
            .product(&header)?
            .into_iter()
            .filter(|t| a.contains(&pick(t, &pa)) || b.contains(&pick(t, &pb)));
        Relation::new(header, tuples)
    }

    /// A uniformly random subset of the full product over `header`. When
    /// `header` is `None` it is drawn uniformly among subsets of the
    /// universe's attributes. Reproducible for a fixed seed.
    pub fn random_relation(&self, header: Option<&Header>, seed: u64) -> Result<Relation, RelationError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let header = match header {
            Some(h) => h.clone(),
            None => self.random_header(&mut rng),
        };
        self.random_relation_with(&mut rng, &header, 0.5)
    }

    pub(crate) fn random_header<R: Rng>(&self, rng: &mut R) -> Header {
        Header::from_sorted(self.domains.keys().filter(|_| rng.gen_bool(0.5)).cloned().collect())
    }

    /// Includes each tuple of the product independently with probability
    /// `density`.
    pub(crate) fn random_relation_with<R: Rng>(
        &self,
        rng: &mut R,
        header: &Header,
        density: f64,
    ) -> Result<Relation, RelationError> {
        let tuples: Vec<Tuple> = self
            .product(header)?
            .into_iter()
            .filter(|_| rng.gen_bool(density))
            .collect();
        Relation::new(header.clone(), tuples)
    }
}

fn sweep_attr_name(i: usize) -> String {
    match i {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        n => format!("a{n}"),
    }
}
