//! Boolean relation algebra on finite carriers.
//!
//! A [`Relation`] is a dense square bit matrix: row `x` holds the set
//! `R[x] = { y : (x, y) ∈ R }`. Composition is the boolean matrix product
//! computed row-wise: `(R ∘ S)[x] = ⋃_{z ∈ R[x]} S[z]`.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(size: usize) -> usize {
    size.div_ceil(WORD)
}

/// A finite carrier `{0, …, size − 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Carrier {
    size: usize,
}

impl Carrier {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        Ok(Carrier { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn check(&self, other: usize) -> Result<()> {
        if self.size != other {
            return Err(Error::CarrierMismatch {
                left: self.size,
                right: other,
            });
        }
        Ok(())
    }
}

/// A subset of a finite carrier, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    size: usize,
    bits: Vec<u64>,
}

impl Subset {
    pub fn empty(size: usize) -> Self {
        Subset {
            size,
            bits: vec![0; words_for(size)],
        }
    }

    pub fn full(size: usize) -> Self {
        let mut s = Subset::empty(size);
        for x in 0..size {
            s.insert(x);
        }
        s
    }

    pub fn singleton(size: usize, x: usize) -> Self {
        let mut s = Subset::empty(size);
        s.insert(x);
        s
    }

    pub fn from_indices(size: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Subset::empty(size);
        for x in indices {
            if x >= size {
                return Err(Error::IndexOutOfRange { index: x, size });
            }
            s.insert(x);
        }
        Ok(s)
    }

    /// Subset whose members are the set bits of `mask` (carriers ≤ 64).
    pub fn from_mask(size: usize, mask: u64) -> Self {
        let mut s = Subset::empty(size);
        for x in 0..size.min(64) {
            if mask >> x & 1 == 1 {
                s.insert(x);
            }
        }
        s
    }

    /// Low 64 bits of the set.
    pub fn mask(&self) -> u64 {
        self.bits.first().copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.size && self.bits[x / WORD] >> (x % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        assert!(x < self.size, "index {x} out of range {}", self.size);
        self.bits[x / WORD] |= 1 << (x % WORD);
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        if x < self.size {
            self.bits[x / WORD] &= !(1 << (x % WORD));
        }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&x| self.contains(x))
    }

    pub fn union_with(&mut self, other: &Subset) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= *b;
        }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        let mut s = self.clone();
        for (a, b) in s.bits.iter_mut().zip(&other.bits) {
            *a &= *b;
        }
        s
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        let mut s = self.clone();
        for (a, b) in s.bits.iter_mut().zip(&other.bits) {
            *a &= !*b;
        }
        s
    }

    pub fn complement(&self) -> Subset {
        Subset::full(self.size).difference(self)
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Subset) -> bool {
        self.bits.iter().zip(&other.bits).any(|(a, b)| a & b != 0)
    }

    /// Every subset of a carrier of the given size, in mask order.
    pub fn all(size: usize) -> impl Iterator<Item = Subset> {
        assert!(size < 32, "subset enumeration limited to small carriers");
        (0..1u64 << size).map(move |m| Subset::from_mask(size, m))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Boolean flags of a relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub reflexive: bool,
    pub symmetric: bool,
    pub idempotent: bool,
    pub contains_diagonal: bool,
}

/// A binary relation on a finite carrier.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    size: usize,
    rows: Vec<Subset>,
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        Relation {
            size,
            rows: vec![Subset::empty(size); size],
        }
    }

    /// The diagonal Δ.
    pub fn diagonal(size: usize) -> Self {
        let mut r = Relation::empty(size);
        for x in 0..size {
            r.rows[x].insert(x);
        }
        r
    }

    pub fn full(size: usize) -> Self {
        Relation {
            size,
            rows: vec![Subset::full(size); size],
        }
    }

    pub fn from_pairs(
        size: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut r = Relation::empty(size);
        for (x, y) in pairs {
            for i in [x, y] {
                if i >= size {
                    return Err(Error::IndexOutOfRange { index: i, size });
                }
            }
            r.rows[x].insert(y);
        }
        Ok(r)
    }

    pub fn from_predicate(size: usize, mut pred: impl FnMut(usize, usize) -> bool) -> Self {
        let mut r = Relation::empty(size);
        for x in 0..size {
            for y in 0..size {
                if pred(x, y) {
                    r.rows[x].insert(y);
                }
            }
        }
        r
    }

    /// `A × B`.
    pub fn product(a: &Subset, b: &Subset) -> Self {
        let size = a.size();
        let mut r = Relation::empty(size);
        for x in a.iter() {
            r.rows[x] = b.clone();
        }
        r
    }

    /// The relation whose `size²` incidence bits are the low bits of `mask`,
    /// row-major. Used for exhaustive enumeration on tiny carriers.
    pub fn from_mask(size: usize, mask: u64) -> Self {
        assert!(size * size <= 64);
        Relation::from_predicate(size, |x, y| mask >> (x * size + y) & 1 == 1)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x].insert(y);
    }

    /// `R[x]`.
    pub fn row(&self, x: usize) -> &Subset {
        &self.rows[x]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |x| self.rows[x].iter().map(move |y| (x, y)))
    }

    pub fn count(&self) -> usize {
        self.rows.iter().map(Subset::len).sum()
    }

    fn same_carrier(&self, other: &Relation) -> Result<()> {
        if self.size != other.size {
            return Err(Error::CarrierMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }

    /// `R ∘ S = { (x, y) : ∃z, (x, z) ∈ R and (z, y) ∈ S }`.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        self.same_carrier(other)?;
        let mut out = Relation::empty(self.size);
        for x in 0..self.size {
            for z in self.rows[x].iter() {
                out.rows[x].union_with(&other.rows[z]);
            }
        }
        Ok(out)
    }

    /// `R⁻¹`, the transpose.
    pub fn inverse(&self) -> Relation {
        let mut out = Relation::empty(self.size);
        for (x, y) in self.pairs() {
            out.rows[y].insert(x);
        }
        out
    }

    /// `R[A] = ⋃_{x ∈ A} R[x]`.
    pub fn image(&self, a: &Subset) -> Result<Subset> {
        if a.size() != self.size {
            return Err(Error::CarrierMismatch {
                left: self.size,
                right: a.size(),
            });
        }
        let mut out = Subset::empty(self.size);
        for x in a.iter() {
            out.union_with(&self.rows[x]);
        }
        Ok(out)
    }

    /// `R^∞`, the union of all iterated compositions of a reflexive relation.
    pub fn iterate_star(&self) -> Result<Relation> {
        if !self.is_reflexive() {
            return Err(Error::NotReflexive);
        }
        let mut current = self.clone();
        loop {
            let next = current.compose(self)?.union(&current)?;
            if next == current {
                return Ok(current);
            }
            current = next;
        }
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.same_carrier(other)?;
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.union_with(b);
        }
        Ok(out)
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        self.same_carrier(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.intersection(b))
            .collect();
        Ok(Relation {
            size: self.size,
            rows,
        })
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.size == other.size
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.is_subset(b))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|x| self.contains(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.contains(y, x))
    }

    pub fn is_idempotent(&self) -> bool {
        self.compose(self).map(|c| &c == self).unwrap_or(false)
    }

    pub fn is_diagonal(&self) -> bool {
        *self == Relation::diagonal(self.size)
    }

    pub fn classify(&self) -> Classification {
        let reflexive = self.is_reflexive();
        Classification {
            reflexive,
            symmetric: self.is_symmetric(),
            idempotent: self.is_idempotent(),
            contains_diagonal: reflexive,
        }
    }

    /// Equivalence classes of a reflexive symmetric transitive relation, or
    /// more generally the distinct rows, in order of least element.
    pub fn classes(&self) -> Vec<Subset> {
        let mut seen = Subset::empty(self.size);
        let mut out = Vec::new();
        for x in 0..self.size {
            if !seen.contains(x) {
                let row = self.rows[x].clone();
                seen.union_with(&row);
                seen.insert(x);
                out.push(row);
            }
        }
        out
    }

    /// Parses the literal `"<size> <row> <row> …"`, each row a string of
    /// `0`/`1` characters; row `x`, column `y` set means `(x, y) ∈ R`.
    pub fn parse_literal(text: &str) -> Result<Relation> {
        let mut tokens = text.split_whitespace();
        let size: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty relation literal".into()))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad carrier size in `{text}`")))?;
        Carrier::new(size)?;
        let rows: Vec<&str> = tokens.collect();
        if rows.len() != size {
            return Err(Error::Parse(format!(
                "expected {size} rows, found {}",
                rows.len()
            )));
        }
        let mut r = Relation::empty(size);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::Parse(format!(
                    "row {x} has length {}, expected {size}",
                    row.len()
                )));
            }
            for (y, c) in row.chars().enumerate() {
                match c {
                    '1' => r.insert(x, y),
                    '0' => {}
                    other => {
                        return Err(Error::Parse(format!("bad character `{other}` in row {x}")))
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn to_literal(&self) -> String {
        let mut s = self.size.to_string();
        for x in 0..self.size {
            s.push(' ');
            for y in 0..self.size {
                s.push(if self.contains(x, y) { '1' } else { '0' });
            }
        }
        s
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation({})", self.to_literal())
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(size: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(size, pairs.iter().copied()).unwrap()
    }

    fn set(size: usize, xs: &[usize]) -> Subset {
        Subset::from_indices(size, xs.iter().copied()).unwrap()
    }

    // Definition of composition, evaluated by quantifying over all triples.
    fn compose_oracle(r: &Relation, s: &Relation) -> Relation {
        let n = r.size();
        Relation::from_predicate(n, |x, y| {
            (0..n).any(|z| r.contains(x, z) && s.contains(z, y))
        })
    }

    #[test]
    fn compose_examples() {
        let r = rel(3, &[(0, 1), (1, 2), (2, 2)]);
        assert_eq!(Relation::diagonal(3).compose(&r).unwrap(), r);
        assert_eq!(
            rel(3, &[(0, 1)]).compose(&rel(3, &[(1, 2)])).unwrap(),
            rel(3, &[(0, 2)])
        );
        let e = rel(3, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]);
        assert_eq!(e.compose(&e).unwrap(), e);
        assert!(matches!(
            r.compose(&Relation::diagonal(4)),
            Err(Error::CarrierMismatch { .. })
        ));
    }

    #[test]
    fn compose_matches_oracle_on_all_pairs_of_size_two() {
        for a in 0..16 {
            for b in 0..16 {
                let (r, s) = (Relation::from_mask(2, a), Relation::from_mask(2, b));
                assert_eq!(r.compose(&s).unwrap(), compose_oracle(&r, &s));
            }
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(rel(3, &[(0, 1)]).inverse(), rel(3, &[(1, 0)]));
        let sym = rel(3, &[(0, 1), (1, 0), (2, 2)]);
        assert_eq!(sym.inverse(), sym);
    }

    #[test]
    fn image_examples() {
        let a = set(3, &[0, 2]);
        assert_eq!(Relation::diagonal(3).image(&a).unwrap(), a);
        let r = rel(3, &[(0, 1), (1, 2)]);
        assert!(r.image(&Subset::empty(3)).unwrap().is_empty());
        assert_eq!(r.image(&set(3, &[0, 1])).unwrap(), set(3, &[1, 2]));
        assert!(r.image(&Subset::empty(4)).is_err());
    }

    #[test]
    fn iterate_star_examples() {
        assert_eq!(Relation::full(3).iterate_star().unwrap(), Relation::full(3));
        assert_eq!(
            Relation::diagonal(3).iterate_star().unwrap(),
            Relation::diagonal(3)
        );
        let r = Relation::diagonal(3)
            .union(&rel(3, &[(0, 1), (1, 0)]))
            .unwrap();
        let block = rel(3, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]);
        assert_eq!(r.iterate_star().unwrap(), block);
        assert_eq!(rel(3, &[(0, 1)]).iterate_star(), Err(Error::NotReflexive));
        // a path 0-1-2-3 closes up to the full relation
        let path = Relation::from_predicate(4, |x, y| x.abs_diff(y) <= 1);
        assert_eq!(path.iterate_star().unwrap(), Relation::full(4));
    }

    #[test]
    fn classify_examples() {
        let d = Relation::diagonal(3).classify();
        assert!(d.reflexive && d.symmetric && d.idempotent && d.contains_diagonal);
        assert!(!rel(3, &[(0, 1)]).classify().reflexive);
        let partition = rel(3, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]);
        assert!(partition.classify().idempotent);
        let path = Relation::from_predicate(3, |x, y| x.abs_diff(y) <= 1);
        assert!(!path.classify().idempotent);
    }

    #[test]
    fn literal_round_trip_and_errors() {
        let r = Relation::parse_literal("3 110 110 001").unwrap();
        assert_eq!(r, rel(3, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]));
        assert_eq!(Relation::parse_literal(&r.to_literal()).unwrap(), r);
        assert!(Relation::parse_literal("2 10").is_err());
        assert!(Relation::parse_literal("2 10 0x").is_err());
        assert!(Relation::parse_literal("0").is_err());
    }

    #[test]
    fn wide_carrier_uses_several_words() {
        let n = 130;
        let r = Relation::from_predicate(n, |x, y| y == (x + 1) % n);
        let r2 = r.compose(&r).unwrap();
        assert!(r2.contains(128, 0));
        assert!(r2.contains(129, 1));
        assert_eq!(r2.count(), n);
        assert_eq!(Subset::full(n).len(), n);
        assert_eq!(Subset::full(n).complement().len(), 0);
    }
}
