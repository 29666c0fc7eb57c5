//! Lattice closure of a set of generator relations and its Hasse diagram.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::error::RelationError;
use crate::relation::Relation;
use crate::universe::Universe;

pub const DEFAULT_CAP: usize = 10_000;
/// Up to this many elements every triple is checked; beyond it triples are sampled.
pub const EXHAUSTIVE_LIMIT: usize = 50;
const SAMPLED_TRIPLES: usize = 20_000;

#[derive(Debug, Error)]
pub enum ClosureError {
    #[error("at least one generator is required")]
    NoGenerators,
    #[error("closure exceeds the cap of {0} elements")]
    CapExceeded(usize),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

#[derive(Clone, Debug)]
pub struct Closure {
    /// Sorted by header size, header, tuple count, then tuples.
    pub elements: Vec<Relation>,
    pub generators: Vec<Relation>,
    pub universe: Universe,
    /// Covers `(lower, upper)` as indices into `elements`.
    pub hasse_edges: Vec<(usize, usize)>,
}

fn sort_key(r: &Relation) -> (usize, &crate::relation::Header, usize, &Relation) {
    (r.header().len(), r.header(), r.len(), r)
}

impl Closure {
    /// Wraps an arbitrary element set without closing it. Used to build
    /// negative controls for [`verify_lattice`].
    pub fn from_elements(elements: impl IntoIterator<Item = Relation>, universe: &Universe) -> Self {
        let set: BTreeSet<Relation> = elements.into_iter().collect();
        let mut elements: Vec<Relation> = set.into_iter().collect();
        elements.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
        let hasse_edges = covers(&elements);
        Closure {
            generators: Vec::new(),
            elements,
            universe: universe.clone(),
            hasse_edges,
        }
    }

    pub fn index_of(&self, r: &Relation) -> Option<usize> {
        self.elements.iter().position(|e| e == r)
    }

    pub fn contains(&self, r: &Relation) -> bool {
        self.index_of(r).is_some()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Closes `gens` under `^` and `v` with a worklist: each new element is
/// combined with every element found before it.
pub fn generate_closure(gens: &[Relation], u: &Universe, cap: usize) -> Result<Closure, ClosureError> {
    if gens.is_empty() {
        return Err(ClosureError::NoGenerators);
    }
    let mut seen: BTreeSet<Relation> = BTreeSet::new();
    let mut list: Vec<Relation> = Vec::new();
    for g in gens {
        u.validate(g)?;
        if seen.insert(g.clone()) {
            list.push(g.clone());
        }
    }
    let mut k = 0;
    while k < list.len() {
        for j in 0..=k {
            for r in [list[k].natural_join(&list[j]), list[k].inner_union(&list[j])] {
                if !seen.contains(&r) {
                    if list.len() >= cap {
                        return Err(ClosureError::CapExceeded(cap));
                    }
                    seen.insert(r.clone());
                    list.push(r);
                }
            }
        }
        k += 1;
    }
    let mut c = Closure::from_elements(list, u);
    c.generators = gens.to_vec();
    Ok(c)
}

fn covers(elements: &[Relation]) -> Vec<(usize, usize)> {
    let n = elements.len();
    let lt: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| a != b && elements[a].le(&elements[b])).collect())
        .collect();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt[a][b] && !(0..n).any(|c| lt[a][c] && lt[c][b]) {
                out.push((a, b));
            }
        }
    }
    out
}

/// DOT digraph of the Hasse diagram, least element at the bottom. Node
/// labels are `header|tuple-count`.
pub fn export_dot(c: &Closure) -> String {
    let mut s = String::from("digraph closure {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, r) in c.elements.iter().enumerate() {
        writeln!(s, "  n{i} [label=\"{}|{}\"];", r.header(), r.len()).unwrap();
    }
    for (a, b) in &c.hasse_edges {
        writeln!(s, "  n{a} -> n{b};").unwrap();
    }
    s.push_str("}\n");
    s
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LatticeReport {
    pub elements: usize,
    pub closed: bool,
    pub sla_holds: bool,
    /// `^` is the least upper bound and `v` the greatest lower bound under `le`.
    pub bounds_agree: bool,
    pub triples_checked: usize,
    pub sampled: bool,
    pub bottom_is_r01: bool,
    pub top_is_r10: bool,
    pub failures: Vec<String>,
}

impl LatticeReport {
    pub fn ok(&self) -> bool {
        self.closed && self.sla_holds && self.bounds_agree && self.bottom_is_r01 && self.top_is_r10
    }
}

pub fn verify_lattice(c: &Closure) -> LatticeReport {
    let els = &c.elements;
    let n = els.len();
    let mut report = LatticeReport {
        elements: n,
        closed: true,
        sla_holds: true,
        bounds_agree: true,
        ..Default::default()
    };
    let set: BTreeSet<&Relation> = els.iter().collect();
    'pairs: for a in els {
        for b in els {
            let (m, j) = (a.natural_join(b), a.inner_union(b));
            for (r, op) in [(&m, "^"), (&j, "v")] {
                if !set.contains(r) {
                    report.closed = false;
                    report.failures.push(format!("{a} {op} {b} = {r} is missing"));
                    break 'pairs;
                }
            }
        }
    }

    let sla = |x: &Relation, y: &Relation, z: &Relation| -> Option<&'static str> {
        if x.natural_join(y) != y.natural_join(x) {
            return Some("sla-meet-comm");
        }
        if x.inner_union(y) != y.inner_union(x) {
            return Some("sla-join-comm");
        }
        if x.natural_join(y).natural_join(z) != x.natural_join(&y.natural_join(z)) {
            return Some("sla-meet-assoc");
        }
        if x.inner_union(y).inner_union(z) != x.inner_union(&y.inner_union(z)) {
            return Some("sla-join-assoc");
        }
        if x.natural_join(&x.inner_union(y)) != *x {
            return Some("sla-absorb-1");
        }
        if x.inner_union(&x.natural_join(y)) != *x {
            return Some("sla-absorb-2");
        }
        None
    };
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    if n <= EXHAUSTIVE_LIMIT {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    triples.push((a, b, c));
                }
            }
        }
    } else if n > 0 {
        report.sampled = true;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..SAMPLED_TRIPLES {
            triples.push((rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)));
        }
    }
    report.triples_checked = triples.len();
    for &(a, b, c) in &triples {
        if let Some(axiom) = sla(&els[a], &els[b], &els[c]) {
            report.sla_holds = false;
            report.failures.push(format!("{axiom} fails at ({}, {}, {})", els[a], els[b], els[c]));
            break;
        }
    }

    // `^` and `v` against bounds computed from the order alone
    if n <= EXHAUSTIVE_LIMIT {
        'bounds: for a in els {
            for b in els {
                let upper: Vec<&Relation> = els.iter().filter(|c| Relation::le(a, c) && Relation::le(b, c)).collect();
                let lower: Vec<&Relation> = els.iter().filter(|c| Relation::le(c, a) && Relation::le(c, b)).collect();
                let lub = upper.iter().find(|c| upper.iter().all(|d| Relation::le(c, d)));
                let glb = lower.iter().find(|c| lower.iter().all(|d| Relation::le(d, c)));
                if lub.is_none_or(|l| **l != a.natural_join(b)) || glb.is_none_or(|g| **g != a.inner_union(b)) {
                    report.bounds_agree = false;
                    report.failures.push(format!("bounds of {a} and {b} disagree with ^/v"));
                    break 'bounds;
                }
            }
        }
    }

    let least = els.iter().find(|a| els.iter().all(|b| Relation::le(a, b)));
    let greatest = els.iter().find(|a| els.iter().all(|b| Relation::le(b, a)));
    report.bottom_is_r01 = least == Some(&Relation::dee());
    report.top_is_r10 = greatest == Some(&c.universe.top_empty());
    if !report.bottom_is_r01 {
        report.failures.push("least element is not R01".into());
    }
    if !report.top_is_r10 {
        report.failures.push("greatest element is not R10".into());
    }
    report
}

/// Indices `[o, a, b, c, i]` of a pentagon sublattice: `a < b`, `c`
/// incomparable to both, `a v c = b v c = o` and `a ^ c = b ^ c = i`.
pub fn find_pentagon(c: &Closure) -> Option<[usize; 5]> {
    let els = &c.elements;
    let index: BTreeMap<&Relation, usize> = els.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let n = els.len();
    for a in 0..n {
        for b in 0..n {
            if a == b || !els[a].le(&els[b]) {
                continue;
            }
            for x in 0..n {
                if els[x].le(&els[b]) || els[a].le(&els[x]) {
                    continue;
                }
                // `x` is incomparable to `a` and `b` when neither `x <= b` nor `a <= x`
                let top = els[a].natural_join(&els[x]);
                let bottom = els[a].inner_union(&els[x]);
                if els[b].natural_join(&els[x]) != top || els[b].inner_union(&els[x]) != bottom {
                    continue;
                }
                if let (Some(&o), Some(&i)) = (index.get(&bottom), index.get(&top)) {
                    return Some([o, a, b, x, i]);
                }
            }
        }
    }
    None
}

/// Generators of the five-relation example over x∈{1,2}, y∈{a,b}:
/// A={(x=1)}, B={(x=1),(x=2)}, C={(y=a)}, D={(y=a),(y=b)} and R00.
pub fn example_generators() -> Vec<Relation> {
    vec![
        Relation::from_rows(&["x"], &[&["1"]]).expect("A"),
        Relation::from_rows(&["x"], &[&["1"], &["2"]]).expect("B"),
        Relation::from_rows(&["y"], &[&["a"]]).expect("C"),
        Relation::from_rows(&["y"], &[&["a"], &["b"]]).expect("D"),
        Relation::dum(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_dum_is_closed() {
        let c = generate_closure(&[Relation::dum()], &Universe::xy_2x2(), DEFAULT_CAP).unwrap();
        assert_eq!(c.elements, vec![Relation::dum()]);
        let dot = export_dot(&c);
        assert!(dot.contains("n0 [label=\"[]|0\"]"));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn two_element_chain_has_one_edge() {
        let a = Relation::from_rows(&["x"], &[&["1"]]).unwrap();
        let c = generate_closure(&[Relation::dee(), a], &Universe::xy_2x2(), DEFAULT_CAP).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.hasse_edges, vec![(0, 1)]);
    }

    #[test]
    fn cap_enforced() {
        let err = generate_closure(&example_generators(), &Universe::xy_2x2(), 5).unwrap_err();
        assert!(matches!(err, ClosureError::CapExceeded(5)));
    }

    #[test]
    fn no_generators() {
        assert!(matches!(
            generate_closure(&[], &Universe::xy_2x2(), DEFAULT_CAP),
            Err(ClosureError::NoGenerators)
        ));
    }

    #[test]
    fn chain_has_no_pentagon() {
        let a = Relation::from_rows(&["x"], &[&["1"]]).unwrap();
        let c = generate_closure(&[Relation::dee(), a], &Universe::xy_2x2(), DEFAULT_CAP).unwrap();
        assert_eq!(find_pentagon(&c), None);
    }
}
