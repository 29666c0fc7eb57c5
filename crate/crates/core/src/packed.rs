//! Bitset encoding of relations over a fixed small universe.
//!
//! Attributes are numbered in sorted order and a header is a bitmask over
//! them. A relation over header `h` is a bitset indexed by the mixed-radix
//! position of each tuple in the product of `h`'s domains, first attribute
//! most significant, so bit order matches the canonical tuple order.
//! Projection maps between every header and each of its sub-headers are
//! precomputed, so `^` and `v` reduce to table-driven bit loops. Law checking
//! runs on this encoding; the `Relation` operations are
//! the reference it is tested against.

use rand::Rng;

use crate::algebra::RelationalLattice;
use crate::error::RelationError;
use crate::relation::{AttributeName, Header, Relation, Tuple, Value};
use crate::universe::Universe;

/// Largest attribute count accepted by [`PackedUniverse::new`].
pub const MAX_PACKED_ATTRIBUTES: usize = 6;
/// Largest full-product size accepted by [`PackedUniverse::new`].
pub const MAX_PACKED_TUPLES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PackedRelation {
    header: u32,
    bits: Box<[u64]>,
}

impl PackedRelation {
    pub fn header_mask(&self) -> u32 {
        self.header
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    fn bit(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }
}

#[derive(Clone, Debug)]
pub struct PackedUniverse {
    universe: Universe,
    attrs: Vec<AttributeName>,
    values: Vec<Vec<Value>>,
    /// product size for each header mask
    sizes: Vec<usize>,
    /// `proj[sup * 2^k + sub]`, filled for `sub ⊆ sup`
    proj: Vec<Vec<u32>>,
}

impl PackedUniverse {
    pub fn new(universe: &Universe) -> Option<Self> {
        let k = universe.domains().len();
        if k > MAX_PACKED_ATTRIBUTES {
            return None;
        }
        let full = universe.product_size(&universe.attributes()).ok()?;
        if full > MAX_PACKED_TUPLES as u128 {
            return None;
        }
        let attrs: Vec<AttributeName> = universe.domains().keys().cloned().collect();
        let values: Vec<Vec<Value>> = universe.domains().values().map(|d| d.iter().cloned().collect()).collect();
        let dims: Vec<usize> = values.iter().map(Vec::len).collect();
        let masks = 1usize << k;
        let sizes: Vec<usize> = (0..masks)
            .map(|m| (0..k).filter(|i| m >> i & 1 == 1).map(|i| dims[i]).product())
            .collect();

        let mut proj = vec![Vec::new(); masks * masks];
        for sup in 0..masks {
            let sup_attrs: Vec<usize> = (0..k).filter(|i| sup >> i & 1 == 1).collect();
            for sub in 0..masks {
                if sub & !sup != 0 {
                    continue;
                }
                let mut map = Vec::with_capacity(sizes[sup]);
                let mut digits = vec![0usize; sup_attrs.len()];
                for _ in 0..sizes[sup] {
                    let idx = sup_attrs
                        .iter()
                        .zip(&digits)
                        .filter(|(&a, _)| sub >> a & 1 == 1)
                        .fold(0, |idx, (&a, &d)| idx * dims[a] + d);
                    map.push(idx as u32);
                    for (pos, &a) in sup_attrs.iter().enumerate().rev() {
                        digits[pos] += 1;
                        if digits[pos] < dims[a] {
                            break;
                        }
                        digits[pos] = 0;
                    }
                }
                proj[sup * masks + sub] = map;
            }
        }
        Some(PackedUniverse {
            universe: universe.clone(),
            attrs,
            values,
            sizes,
            proj,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn attribute_count(&self) -> usize {
        self.attrs.len()
    }

    fn full_mask(&self) -> u32 {
        ((1usize << self.attrs.len()) - 1) as u32
    }

    fn blank(&self, header: u32) -> PackedRelation {
        let words = self.sizes[header as usize].div_ceil(64);
        PackedRelation { header, bits: vec![0; words].into_boxed_slice() }
    }

    fn projection(&self, sup: u32, sub: u32) -> &[u32] {
        &self.proj[(sup as usize) << self.attrs.len() | sub as usize]
    }

    pub fn mask_of(&self, header: &Header) -> Result<u32, RelationError> {
        header.iter().try_fold(0u32, |m, a| {
            let i = self
                .attrs
                .binary_search(a)
                .map_err(|_| RelationError::UnknownAttribute(a.clone()))?;
            Ok(m | 1 << i)
        })
    }

    pub fn header_of(&self, mask: u32) -> Header {
        let attrs = (0..self.attrs.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.attrs[i].clone())
            .collect();
        Header::from_sorted(attrs)
    }

    pub fn pack(&self, rel: &Relation) -> Result<PackedRelation, RelationError> {
        self.universe.validate(rel)?;
        let mask = self.mask_of(rel.header())?;
        let cols: Vec<usize> = (0..self.attrs.len()).filter(|i| mask >> i & 1 == 1).collect();
        let mut out = self.blank(mask);
        for t in rel.tuples() {
            let idx = t.values().iter().zip(&cols).fold(0, |idx, (v, &a)| {
                let digit = self.values[a].binary_search(v).expect("validated value");
                idx * self.values[a].len() + digit
            });
            out.set(idx);
        }
        Ok(out)
    }

    pub fn unpack(&self, rel: &PackedRelation) -> Relation {
        let header = self.header_of(rel.header);
        let cols: Vec<usize> = (0..self.attrs.len()).filter(|i| rel.header >> i & 1 == 1).collect();
        let tuples = rel.ones().map(|mut idx| {
            let mut row: Vec<Value> = cols
                .iter()
                .rev()
                .map(|&a| {
                    let d = self.values[a].len();
                    let v = self.values[a][idx % d].clone();
                    idx /= d;
                    v
                })
                .collect();
            row.reverse();
            Tuple::new(row)
        });
        Relation::new(header, tuples).expect("arity matches header")
    }

    /// Random relation over the given header mask, each tuple included with
    /// probability `density`.
    pub fn random<R: Rng>(&self, rng: &mut R, header: u32, density: f64) -> PackedRelation {
        let mut out = self.blank(header);
        for i in 0..self.sizes[header as usize] {
            if rng.gen_bool(density) {
                out.set(i);
            }
        }
        out
    }
}

impl RelationalLattice for PackedUniverse {
    type Elem = PackedRelation;

    fn meet(&self, a: &PackedRelation, b: &PackedRelation) -> PackedRelation {
        let header = a.header | b.header;
        let pa = self.projection(header, a.header);
        let pb = self.projection(header, b.header);
        let mut out = self.blank(header);
        for (i, (&ia, &ib)) in pa.iter().zip(pb).enumerate() {
            if a.bit(ia as usize) && b.bit(ib as usize) {
                out.set(i);
            }
        }
        out
    }

    fn join(&self, a: &PackedRelation, b: &PackedRelation) -> PackedRelation {
        let header = a.header & b.header;
        let pa = self.projection(a.header, header);
        let pb = self.projection(b.header, header);
        let mut out = self.blank(header);
        for i in a.ones() {
            out.set(pa[i] as usize);
        }
        for i in b.ones() {
            out.set(pb[i] as usize);
        }
        out
    }

    fn r00(&self) -> PackedRelation {
        self.blank(0)
    }

    fn r01(&self) -> PackedRelation {
        let mut r = self.blank(0);
        r.set(0);
        r
    }

    fn r10(&self) -> PackedRelation {
        self.blank(self.full_mask())
    }

    fn r11(&self) -> PackedRelation {
        let mask = self.full_mask();
        let mut r = self.blank(mask);
        for i in 0..self.sizes[mask as usize] {
            r.set(i);
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_round_trip() {
        for u in Universe::sweep(2, 3) {
            let p = PackedUniverse::new(&u).unwrap();
            assert_eq!(p.unpack(&p.r00()), Relation::dum());
            assert_eq!(p.unpack(&p.r01()), Relation::dee());
            assert_eq!(p.unpack(&p.r10()), u.top_empty());
            assert_eq!(p.unpack(&p.r11()), u.universal());
        }
    }

    #[test]
    fn pack_unpack_identity() {
        let u = Universe::xy_2x2();
        let p = PackedUniverse::new(&u).unwrap();
        let x = Relation::from_rows(&["x", "y"], &[&["1", "a"], &["1", "b"], &["2", "a"]]).unwrap();
        assert_eq!(p.unpack(&p.pack(&x).unwrap()), x);
    }

    #[test]
    fn refuses_large_universes() {
        let vals: Vec<String> = (0..20).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = vals.iter().map(String::as_str).collect();
        let u = Universe::from_domains(&[("a", &refs), ("b", &refs), ("c", &refs)]).unwrap();
        assert!(PackedUniverse::new(&u).is_none());
    }
}
