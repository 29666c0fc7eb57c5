//! Small abstract lattices and a Mace4-style search for models that separate
//! axiom sets.
//!
//! Lattices are generated from partial orders rather than from raw operation
//! tables. The order follows the relational convention: `a <= b` iff
//! `a ^ b = b`, so `^` is the least upper bound and `v` the greatest lower
//! bound, R01 is the least element and R10 the greatest. A [`Model`] adds a
//! designation of the two free constants R00 and R11.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::RelationalLattice;
use crate::catalogue::{find_law, Law, SLA_IDS};
use crate::eval::{statement_outcome, Env, Outcome};

pub const MAX_LATTICE_SIZE: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("lattice size {0} is outside 1..=7")]
    SizeOutOfRange(usize),
    #[error("unknown law or axiom group `{0}`")]
    UnknownLaw(String),
}

/// A finite lattice on elements `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteLattice {
    size: usize,
    leq: Vec<bool>,
    meet: Vec<u8>,
    join: Vec<u8>,
}

impl FiniteLattice {
    /// Builds the lattice of a partial order given as a row-major `leq`
    /// matrix. Returns `None` unless every pair has a least upper and a
    /// greatest lower bound.
    pub fn from_order(size: usize, leq: Vec<bool>) -> Option<Self> {
        assert_eq!(leq.len(), size * size);
        let le = |a: usize, b: usize| leq[a * size + b];
        let mut meet = vec![0u8; size * size];
        let mut join = vec![0u8; size * size];
        for a in 0..size {
            for b in 0..size {
                let upper: Vec<usize> = (0..size).filter(|&c| le(a, c) && le(b, c)).collect();
                let lower: Vec<usize> = (0..size).filter(|&c| le(c, a) && le(c, b)).collect();
                let lub = upper.iter().copied().find(|&c| upper.iter().all(|&d| le(c, d)))?;
                let glb = lower.iter().copied().find(|&c| lower.iter().all(|&d| le(d, c)))?;
                meet[a * size + b] = lub as u8;
                join[a * size + b] = glb as u8;
            }
        }
        Some(FiniteLattice { size, leq, meet, join })
    }

    /// Builds a lattice from strict cover pairs `(lower, upper)`.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Option<Self> {
        let mut leq = vec![false; size * size];
        for i in 0..size {
            leq[i * size + i] = true;
        }
        for &(a, b) in covers {
            leq[a * size + b] = true;
        }
        // transitive closure
        for k in 0..size {
            for i in 0..size {
                for j in 0..size {
                    if leq[i * size + k] && leq[k * size + j] {
                        leq[i * size + j] = true;
                    }
                }
            }
        }
        FiniteLattice::from_order(size, leq)
    }

    pub fn chain(size: usize) -> Self {
        let covers: Vec<_> = (1..size).map(|i| (i - 1, i)).collect();
        FiniteLattice::from_covers(size, &covers).expect("chains are lattices")
    }

    /// M3: least element 0, three atoms, greatest element 4.
    pub fn diamond() -> Self {
        FiniteLattice::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).expect("M3")
    }

    /// N5: `0 < 1 < 2 < 4` and `0 < 3 < 4`.
    pub fn pentagon() -> Self {
        FiniteLattice::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).expect("N5")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    /// `a ^ b`: least upper bound.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b] as usize
    }

    /// `a v b`: greatest lower bound.
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b] as usize
    }

    /// Least element (R01).
    pub fn bottom(&self) -> usize {
        (0..self.size).find(|&a| (0..self.size).all(|b| self.le(a, b))).expect("lattice has a bottom")
    }

    /// Greatest element (R10).
    pub fn top(&self) -> usize {
        (0..self.size).find(|&a| (0..self.size).all(|b| self.le(b, a))).expect("lattice has a top")
    }

    /// Strict covers `(a, b)`: `a < b` with nothing in between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size;
        let lt = |a: usize, b: usize| a != b && self.le(a, b);
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Number of elements in a longest chain, minus one.
    pub fn height(&self) -> usize {
        let n = self.size;
        // elements sorted by down-set size form a linear extension
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| (0..n).filter(|&b| self.le(b, a)).count());
        let mut depth = vec![0usize; n];
        for &b in &order {
            for a in 0..n {
                if a != b && self.le(a, b) {
                    depth[b] = depth[b].max(depth[a] + 1);
                }
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// Independent re-check of the lattice axioms on the operation tables:
    /// commutativity, associativity, absorption, and agreement of the
    /// stored order with the order induced by `^`.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.size;
        for a in 0..n {
            for b in 0..n {
                if self.meet(a, b) != self.meet(b, a) || self.join(a, b) != self.join(b, a) {
                    return Err(format!("not commutative at ({a}, {b})"));
                }
                if self.meet(a, self.join(a, b)) != a || self.join(a, self.meet(a, b)) != a {
                    return Err(format!("absorption fails at ({a}, {b})"));
                }
                if self.le(a, b) != (self.meet(a, b) == b) {
                    return Err(format!("order disagrees with ^ at ({a}, {b})"));
                }
                for c in 0..n {
                    if self.meet(self.meet(a, b), c) != self.meet(a, self.meet(b, c))
                        || self.join(self.join(a, b), c) != self.join(a, self.join(b, c))
                    {
                        return Err(format!("not associative at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Relabels element `i` as `perm[i]`.
    fn permuted(&self, perm: &[usize]) -> FiniteLattice {
        let n = self.size;
        let mut leq = vec![false; n * n];
        let mut meet = vec![0u8; n * n];
        let mut join = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                let (pa, pb) = (perm[a], perm[b]);
                leq[pa * n + pb] = self.le(a, b);
                meet[pa * n + pb] = perm[self.meet(a, b)] as u8;
                join[pa * n + pb] = perm[self.join(a, b)] as u8;
            }
        }
        FiniteLattice { size: n, leq, meet, join }
    }

    fn order_code(&self) -> u64 {
        self.leq.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | (b as u64) << i)
    }

    /// Canonical labeling: elements are ordered by (down-set size, up-set
    /// size) and ties are broken by the lexicographically least order code.
    /// Two lattices are isomorphic iff their canonical forms are equal.
    pub fn canonical(&self) -> FiniteLattice {
        let n = self.size;
        let sig = |a: usize| {
            let down = (0..n).filter(|&b| self.le(b, a)).count();
            let up = (0..n).filter(|&b| self.le(a, b)).count();
            (down, up)
        };
        let mut elems: Vec<usize> = (0..n).collect();
        elems.sort_by_key(|&a| sig(a));
        // blocks of equal signature may be permuted freely
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for &a in &elems {
            match blocks.last_mut() {
                Some(block) if sig(block[0]) == sig(a) => block.push(a),
                _ => blocks.push(vec![a]),
            }
        }
        let mut best: Option<(u64, FiniteLattice)> = None;
        for order in block_orderings(&blocks) {
            // order[k] is the old element that receives new label k
            let mut perm = vec![0usize; n];
            for (k, &old) in order.iter().enumerate() {
                perm[old] = k;
            }
            let candidate = self.permuted(&perm);
            let code = candidate.order_code();
            if best.as_ref().is_none_or(|(c, _)| code < *c) {
                best = Some((code, candidate));
            }
        }
        best.expect("at least one ordering").1
    }

    pub fn is_isomorphic(&self, other: &FiniteLattice) -> bool {
        self.size == other.size && self.canonical() == other.canonical()
    }

    /// `"M3"`, `"N5"`, `"chain"`, or `None` for other shapes.
    pub fn shape_name(&self) -> Option<&'static str> {
        if self.size == 5 && self.is_isomorphic(&FiniteLattice::diamond()) {
            Some("M3")
        } else if self.size == 5 && self.is_isomorphic(&FiniteLattice::pentagon()) {
            Some("N5")
        } else if self.height() + 1 == self.size {
            Some("chain")
        } else {
            None
        }
    }
}

fn block_orderings(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for block in blocks {
        let perms = permutations(block.len());
        out = out
            .into_iter()
            .flat_map(|prefix| {
                perms.iter().map(move |p| {
                    let mut next = prefix.clone();
                    next.extend(p.iter().map(|&i| block[i]));
                    next
                })
            })
            .collect();
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// One lattice per isomorphism class on `n` elements, in canonical labeling,
/// ordered by height and then by order code.
pub fn lattice_classes(n: usize) -> Result<Vec<FiniteLattice>, ModelError> {
    if n == 0 || n > MAX_LATTICE_SIZE {
        return Err(ModelError::SizeOutOfRange(n));
    }
    // naturally labeled posets with 0 as least element: element k is added
    // above a down-closed set of earlier elements containing 0
    let mut classes: BTreeMap<(usize, u64), FiniteLattice> = BTreeMap::new();
    let mut below = vec![0u64; n];
    fn grow(k: usize, n: usize, below: &mut Vec<u64>, out: &mut BTreeMap<(usize, u64), FiniteLattice>) {
        if k == n {
            let mut leq = vec![false; n * n];
            for b in 0..n {
                leq[b * n + b] = true;
                for a in 0..n {
                    if below[b] >> a & 1 == 1 {
                        leq[a * n + b] = true;
                    }
                }
            }
            if let Some(l) = FiniteLattice::from_order(n, leq) {
                let c = l.canonical();
                out.entry((c.height(), c.order_code())).or_insert(c);
            }
            return;
        }
        for down in 0u64..(1 << k) {
            if down & 1 == 0 {
                continue;
            }
            let closed = (0..k).all(|i| down >> i & 1 == 0 || below[i] & !down == 0);
            if closed {
                below[k] = down;
                grow(k + 1, n, below, out);
            }
        }
    }
    if n == 1 {
        classes.insert((0, 1), FiniteLattice::chain(1));
    } else {
        grow(1, n, &mut below, &mut classes);
    }
    Ok(classes.into_values().collect())
}

/// Every lattice order on `n` labeled elements, each exactly once, or one
/// per isomorphism class when `dedup_isomorphic` is set. Classes appear in
/// the order of [`lattice_classes`].
pub fn enumerate_lattices(
    n: usize,
    dedup_isomorphic: bool,
) -> Result<Box<dyn Iterator<Item = FiniteLattice>>, ModelError> {
    let classes = lattice_classes(n)?;
    if dedup_isomorphic {
        return Ok(Box::new(classes.into_iter()));
    }
    let perms = permutations(n);
    Ok(Box::new(classes.into_iter().flat_map(move |class| {
        let mut seen = HashSet::new();
        perms
            .clone()
            .into_iter()
            .filter_map(move |p| {
                let l = class.permuted(&p);
                seen.insert(l.order_code()).then_some(l)
            })
            .collect::<Vec<_>>()
    })))
}

/// A finite lattice with R00 and R11 designated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    pub lattice: FiniteLattice,
    pub r00: usize,
    pub r11: usize,
}

impl Model {
    pub fn new(lattice: FiniteLattice, r00: usize, r11: usize) -> Self {
        assert!(r00 < lattice.size() && r11 < lattice.size());
        Model { lattice, r00, r11 }
    }

    pub fn describe(&self) -> String {
        let l = &self.lattice;
        let edges: Vec<String> = l.covers().iter().map(|(a, b)| format!("{a}<{b}")).collect();
        let mut s = String::new();
        writeln!(s, "size: {}", l.size()).unwrap();
        if let Some(shape) = l.shape_name() {
            writeln!(s, "shape: {shape}").unwrap();
        }
        writeln!(s, "order: {}", edges.join(" ")).unwrap();
        writeln!(s, "bottom (R01): {}, top (R10): {}", l.bottom(), l.top()).unwrap();
        write!(s, "R00 = {}, R11 = {}", self.r00, self.r11).unwrap();
        s
    }

    /// Hasse diagram, least element at the bottom.
    pub fn to_dot(&self) -> String {
        let l = &self.lattice;
        let mut s = String::from("digraph model {\n  rankdir=BT;\n");
        for a in 0..l.size() {
            let mut label = a.to_string();
            for (name, e) in [("R00", self.r00), ("R11", self.r11), ("R01", l.bottom()), ("R10", l.top())] {
                if e == a {
                    label.push_str(&format!(" {name}"));
                }
            }
            writeln!(s, "  n{a} [label=\"{label}\"];").unwrap();
        }
        for (a, b) in l.covers() {
            writeln!(s, "  n{a} -> n{b};").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

impl RelationalLattice for Model {
    type Elem = usize;

    fn meet(&self, a: &usize, b: &usize) -> usize {
        self.lattice.meet(*a, *b)
    }

    fn join(&self, a: &usize, b: &usize) -> usize {
        self.lattice.join(*a, *b)
    }

    fn r00(&self) -> usize {
        self.r00
    }

    fn r01(&self) -> usize {
        self.lattice.bottom()
    }

    fn r10(&self) -> usize {
        self.lattice.top()
    }

    fn r11(&self) -> usize {
        self.r11
    }
}

/// Evaluates directly from the order relation, without the operation tables.
struct OrderView<'a>(&'a Model);

impl RelationalLattice for OrderView<'_> {
    type Elem = usize;

    fn meet(&self, a: &usize, b: &usize) -> usize {
        let l = &self.0.lattice;
        let n = l.size();
        let upper: Vec<usize> = (0..n).filter(|&c| l.le(*a, c) && l.le(*b, c)).collect();
        *upper.iter().find(|&&c| upper.iter().all(|&d| l.le(c, d))).expect("lub")
    }

    fn join(&self, a: &usize, b: &usize) -> usize {
        let l = &self.0.lattice;
        let n = l.size();
        let lower: Vec<usize> = (0..n).filter(|&c| l.le(c, *a) && l.le(c, *b)).collect();
        *lower.iter().find(|&&c| lower.iter().all(|&d| l.le(d, c))).expect("glb")
    }

    fn r00(&self) -> usize {
        self.0.r00
    }

    fn r01(&self) -> usize {
        let l = &self.0.lattice;
        (0..l.size()).find(|&a| (0..l.size()).all(|b| l.le(a, b))).expect("bottom")
    }

    fn r10(&self) -> usize {
        let l = &self.0.lattice;
        (0..l.size()).find(|&a| (0..l.size()).all(|b| l.le(b, a))).expect("top")
    }

    fn r11(&self) -> usize {
        self.0.r11
    }
}

/// A law together with an assignment that falsifies it in a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub model: Model,
    pub assignment: BTreeMap<String, usize>,
    pub law: String,
}

impl Counterexample {
    /// Re-evaluates the law from the order relation alone and reports
    /// whether it is indeed violated.
    pub fn replay(&self) -> bool {
        let Some(law) = find_law(&self.law) else {
            return false;
        };
        matches!(
            statement_outcome(&OrderView(&self.model), &law.statement, &self.assignment),
            Ok(Outcome::Violated)
        )
    }

    pub fn summary(&self) -> CounterexampleSummary {
        CounterexampleSummary {
            law: self.law.clone(),
            size: self.model.lattice.size(),
            shape: self.model.lattice.shape_name(),
            covers: self.model.lattice.covers(),
            r00: self.model.r00,
            r11: self.model.r11,
            assignment: self.assignment.clone(),
        }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.model.describe())?;
        let vals: Vec<String> = self.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "violates {} at {}", self.law, vals.join(" "))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleSummary {
    pub law: String,
    pub size: usize,
    pub shape: Option<&'static str>,
    pub covers: Vec<(usize, usize)>,
    pub r00: usize,
    pub r11: usize,
    pub assignment: BTreeMap<String, usize>,
}

/// A set of laws assumed to hold. The lattice axioms are always included.
#[derive(Clone, Debug)]
pub struct AxiomSet {
    laws: Vec<Law>,
}

impl AxiomSet {
    /// Resolves law ids; `sla` (any case) expands to the six lattice axioms.
    pub fn from_ids<S: AsRef<str>>(ids: &[S]) -> Result<Self, ModelError> {
        let mut wanted: Vec<String> = SLA_IDS.iter().map(|s| s.to_string()).collect();
        for id in ids {
            let id = id.as_ref().trim().to_ascii_lowercase();
            if id.is_empty() || id == "sla" {
                continue;
            }
            if !wanted.contains(&id) {
                wanted.push(id);
            }
        }
        let laws = wanted
            .iter()
            .map(|id| find_law(id).ok_or_else(|| ModelError::UnknownLaw(id.clone())))
            .collect::<Result<_, _>>()?;
        Ok(AxiomSet { laws })
    }

    pub fn laws(&self) -> &[Law] {
        &self.laws
    }

    pub fn ids(&self) -> Vec<&str> {
        self.laws.iter().map(|l| l.id.as_str()).collect()
    }
}

/// First assignment (in lexicographic order over sorted names) violating
/// `law` in `model`.
pub fn violation(model: &Model, law: &Law) -> Option<Counterexample> {
    let names: Vec<String> = law.statement.names().into_iter().map(str::to_owned).collect();
    let n = model.lattice.size();
    let mut digits = vec![0usize; names.len()];
    let mut env: Env<usize> = names.iter().map(|k| (k.clone(), 0)).collect();
    loop {
        for (k, &d) in names.iter().zip(&digits) {
            *env.get_mut(k).expect("bound") = d;
        }
        let outcome = statement_outcome(model, &law.statement, &env).expect("all names bound");
        if outcome == Outcome::Violated {
            return Some(Counterexample {
                model: model.clone(),
                assignment: env,
                law: law.id.clone(),
            });
        }
        // odometer, last name fastest
        let mut i = digits.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < n {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Exhaustively checks every law over all assignments; returns the first
/// violation found.
pub fn check_model(model: &Model, laws: &[Law]) -> Option<Counterexample> {
    laws.iter().find_map(|law| violation(model, law))
}

/// Smallest model (by size, then enumeration order, then designation with
/// R00 varying slowest) satisfying every assumed law and violating `refute`.
pub fn find_separating_model(
    assume: &AxiomSet,
    refute: &Law,
    max_size: usize,
) -> Result<Option<Counterexample>, ModelError> {
    if max_size == 0 || max_size > MAX_LATTICE_SIZE {
        return Err(ModelError::SizeOutOfRange(max_size));
    }
    for n in 1..=max_size {
        for lattice in enumerate_lattices(n, true)? {
            for r00 in 0..n {
                for r11 in 0..n {
                    let model = Model::new(lattice.clone(), r00, r11);
                    if check_model(&model, assume.laws()).is_some() {
                        continue;
                    }
                    if let Some(cex) = violation(&model, refute) {
                        return Ok(Some(cex));
                    }
                }
            }
        }
    }
    Ok(None)
}
