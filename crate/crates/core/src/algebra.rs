//! The signature shared by every carrier the crate evaluates terms in:
//! concrete relations, their packed bitset encoding, and small abstract
//! lattices with designated constants.

use std::fmt::Debug;

use crate::relation::Relation;
use crate::universe::Universe;

/// Two binary operations and the four named constants.
///
/// `meet` is `^` (natural join on relations) and `join` is `v` (inner
/// union). The order is oriented so that `a <= b` iff `meet(a, b) == b`;
/// under it `r01` is the least element and `r10` the greatest.
pub trait RelationalLattice {
    type Elem: Clone + PartialEq + Debug;

    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn r00(&self) -> Self::Elem;
    fn r01(&self) -> Self::Elem;
    fn r10(&self) -> Self::Elem;
    fn r11(&self) -> Self::Elem;

    /// Date & Darwen OR: `(a ^ (b v R11)) v (b ^ (a v R11))`.
    fn or(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r11 = self.r11();
        let left = self.meet(a, &self.join(b, &r11));
        let right = self.meet(b, &self.join(a, &r11));
        self.join(&left, &right)
    }

    fn le(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.meet(a, b) == *b
    }
}

impl RelationalLattice for Universe {
    type Elem = Relation;

    fn meet(&self, a: &Relation, b: &Relation) -> Relation {
        a.natural_join(b)
    }

    fn join(&self, a: &Relation, b: &Relation) -> Relation {
        a.inner_union(b)
    }

    fn r00(&self) -> Relation {
        Relation::dum()
    }

    fn r01(&self) -> Relation {
        Relation::dee()
    }

    fn r10(&self) -> Relation {
        self.top_empty()
    }

    fn r11(&self) -> Relation {
        self.universal()
    }

    fn le(&self, a: &Relation, b: &Relation) -> bool {
        a.le(b)
    }
}
