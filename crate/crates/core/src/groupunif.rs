//! Left, right, upper and lower uniformities of finite group models.
//!
//! A finite group carries an explicit chain of symmetric identity
//! neighborhoods `V_0 ⊇ … ⊇ V_k`; the identities checked here are
//! uniformity-level algebra that holds for any such chain.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::mapspace::{self, BasisComparison, BasisOrder, FunctionEntourage, MapSet};
use crate::relalg::{Relation, Subset};
use crate::report::Verdict;
use crate::ulb::CarrierMap;

/// A finite group given by its Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupModel {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupModel {
    /// Validates associativity, identity and inverses.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row of length {} in a table of order {n}",
                    row.len()
                )));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange { index: v, size: n });
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x][y] == identity && table[y][x] == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("element {x} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(GroupModel {
            table,
            identity,
            inverse,
        })
    }

    /// The group generated by the given permutations under composition.
    ///
    /// Elements are numbered in order of discovery, the identity first.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Self> {
        let degree = generators.first().map_or(1, Vec::len);
        let gens: Vec<CarrierMap> = generators
            .iter()
            .map(|g| CarrierMap::permutation(g.clone()))
            .collect::<Result<_>>()?;
        let mut elements = vec![CarrierMap::identity(degree)];
        let mut index: HashMap<Vec<usize>, usize> =
            HashMap::from([(elements[0].table().to_vec(), 0)]);
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let next = elements[i].compose(g)?;
                if !index.contains_key(next.table()) {
                    index.insert(next.table().to_vec(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let table = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| index[a.compose(b).expect("same degree").table()])
                    .collect()
            })
            .collect();
        GroupModel::new(table)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        GroupModel::new(
            (0..n)
                .map(|a| (0..n).map(|b| (a + b) % n).collect())
                .collect(),
        )
    }

    pub fn symmetric3() -> Self {
        GroupModel::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).expect("valid generators")
    }

    /// Symmetries of a square acting on its vertices.
    pub fn dihedral4() -> Self {
        GroupModel::from_permutations(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
            .expect("valid generators")
    }

    /// Quaternion units `±1, ±i, ±j, ±k`, numbered `4·s + u` with sign bit
    /// `s` and unit `u ∈ {1, i, j, k}`.
    pub fn quaternion() -> Self {
        // unit products as (sign flip, unit)
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (flip, unit) = UNIT[a % 4][b % 4];
                        4 * ((a / 4 + b / 4 + flip) % 2) + unit
                    })
                    .collect()
            })
            .collect();
        GroupModel::new(table).expect("quaternion table")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `x v x⁻¹`.
    pub fn conj(&self, x: usize, v: usize) -> usize {
        self.mul(self.mul(x, v), self.inv(x))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn product_set(&self, a: &Subset, b: &Subset) -> Subset {
        let mut out = Subset::empty(self.order());
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    pub fn inverse_set(&self, a: &Subset) -> Subset {
        let mut out = Subset::empty(self.order());
        for x in a.iter() {
            out.insert(self.inv(x));
        }
        out
    }

    pub fn is_symmetric_set(&self, a: &Subset) -> bool {
        a.iter().all(|x| a.contains(self.inv(x)))
    }

    /// Smallest symmetric set containing `a` and the identity.
    pub fn symmetrize(&self, a: &Subset) -> Subset {
        let mut out = a.union(&self.inverse_set(a));
        out.insert(self.identity);
        out
    }

    pub fn inner(&self, x: usize) -> CarrierMap {
        let n = self.order();
        CarrierMap::with_inverse(
            (0..n).map(|y| self.conj(x, y)).collect(),
            (0..n).map(|y| self.conj(self.inv(x), y)).collect(),
        )
        .expect("conjugation is bijective")
    }

    /// Inner automorphisms without repetition, the identity first.
    pub fn inner_automorphisms(&self) -> Vec<CarrierMap> {
        let mut out: Vec<CarrierMap> = Vec::new();
        for x in std::iter::once(self.identity).chain(0..self.order()) {
            let g = self.inner(x);
            if !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }

    pub fn is_automorphism(&self, f: &CarrierMap) -> bool {
        let n = self.order();
        f.size() == n
            && f.is_bijective()
            && (0..n).all(|a| {
                (0..n).all(|b| f.apply(self.mul(a, b)) == self.mul(f.apply(a), f.apply(b)))
            })
    }

    fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    fn generated(&self, gens: &[usize]) -> Subset {
        let mut seen = Subset::singleton(self.order(), self.identity);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let b = self.mul(a, g);
                if !seen.contains(b) {
                    seen.insert(b);
                    queue.push_back(b);
                }
            }
        }
        seen
    }

    fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        while span.len() < self.order() {
            let next = (0..self.order())
                .find(|&x| !span.contains(x))
                .expect("proper subgroup");
            gens.push(next);
            span = self.generated(&gens);
        }
        gens
    }

    /// All automorphisms, the identity first, by backtracking over images
    /// of a generating set.
    pub fn automorphisms(&self) -> Vec<CarrierMap> {
        let gens = self.generating_set();
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(gens.len());
        self.extend_images(&gens, &orders, &mut images, &mut out);
        out.sort_by_key(|f| !f.is_identity());
        out
    }

    fn extend_images(
        &self,
        gens: &[usize],
        orders: &[usize],
        images: &mut Vec<usize>,
        out: &mut Vec<CarrierMap>,
    ) {
        if images.len() == gens.len() {
            if let Some(f) = self.homomorphism_from(gens, images) {
                out.push(f);
            }
            return;
        }
        let want = orders[images.len()];
        for y in 0..self.order() {
            if self.element_order(y) == want {
                images.push(y);
                self.extend_images(gens, orders, images, out);
                images.pop();
            }
        }
    }

    fn homomorphism_from(&self, gens: &[usize], images: &[usize]) -> Option<CarrierMap> {
        let n = self.order();
        let mut phi = vec![usize::MAX; n];
        phi[self.identity] = self.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(a) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let b = self.mul(a, g);
                let value = self.mul(phi[a], img);
                if phi[b] == usize::MAX {
                    phi[b] = value;
                    queue.push_back(b);
                } else if phi[b] != value {
                    return None;
                }
            }
        }
        let f = CarrierMap::permutation(phi).ok()?;
        self.is_automorphism(&f).then_some(f)
    }
}

/// A chain of symmetric identity neighborhoods `V_0 ⊇ … ⊇ V_k` with
/// `V_{i+1}·V_{i+1} ⊆ V_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFiltration {
    levels: Vec<Subset>,
}

impl IdentityFiltration {
    pub fn new(group: &GroupModel, levels: Vec<Subset>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::BadNeighborhood("no levels".into()));
        }
        for (i, v) in levels.iter().enumerate() {
            check_neighborhood(group, v)
                .map_err(|e| Error::BadNeighborhood(format!("level {i}: {e}")))?;
        }
        for (i, pair) in levels.windows(2).enumerate() {
            if !pair[1].is_subset(&pair[0]) {
                return Err(Error::BadNeighborhood(format!(
                    "level {} is not inside level {i}",
                    i + 1
                )));
            }
            if !group.product_set(&pair[1], &pair[1]).is_subset(&pair[0]) {
                return Err(Error::BadNeighborhood(format!(
                    "V_{}·V_{} is not inside V_{i}",
                    i + 1,
                    i + 1
                )));
            }
        }
        Ok(IdentityFiltration { levels })
    }

    /// `{G, {e}}`.
    pub fn full(group: &GroupModel) -> Self {
        let n = group.order();
        IdentityFiltration {
            levels: vec![Subset::full(n), Subset::singleton(n, group.identity)],
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> &Subset {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[Subset] {
        &self.levels
    }
}

fn check_neighborhood(group: &GroupModel, v: &Subset) -> Result<()> {
    if v.size() != group.order() {
        return Err(Error::CarrierMismatch {
            left: group.order(),
            right: v.size(),
        });
    }
    if !v.contains(group.identity) {
        return Err(Error::BadNeighborhood(format!(
            "{v} does not contain the identity"
        )));
    }
    if !group.is_symmetric_set(v) {
        return Err(Error::BadNeighborhood(format!("{v} is not symmetric")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntourageKind {
    /// `x⁻¹y ∈ V`.
    Left,
    /// `xy⁻¹ ∈ V`.
    Right,
    /// Both of the above.
    Upper,
    /// `x ∈ VyV`.
    Lower,
}

impl EntourageKind {
    pub const ALL: [EntourageKind; 4] = [
        EntourageKind::Left,
        EntourageKind::Right,
        EntourageKind::Upper,
        EntourageKind::Lower,
    ];
}

impl fmt::Display for EntourageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntourageKind::Left => "left",
            EntourageKind::Right => "right",
            EntourageKind::Upper => "upper",
            EntourageKind::Lower => "lower",
        })
    }
}

pub fn group_entourage(group: &GroupModel, v: &Subset, kind: EntourageKind) -> Result<Relation> {
    check_neighborhood(group, v)?;
    let n = group.order();
    let g = group;
    Ok(match kind {
        EntourageKind::Left => Relation::from_predicate(n, |x, y| v.contains(g.mul(g.inv(x), y))),
        EntourageKind::Right => Relation::from_predicate(n, |x, y| v.contains(g.mul(x, g.inv(y)))),
        EntourageKind::Upper => Relation::from_predicate(n, |x, y| {
            v.contains(g.mul(g.inv(x), y)) && v.contains(g.mul(x, g.inv(y)))
        }),
        EntourageKind::Lower => {
            let mut r = Relation::empty(n);
            for y in 0..n {
                for a in v.iter() {
                    for b in v.iter() {
                        r.insert(g.mul(g.mul(a, y), b), y);
                    }
                }
            }
            r
        }
    })
}

/// `V·B·V`.
pub fn double_coset_image(group: &GroupModel, v: &Subset, b: &Subset) -> Subset {
    group.product_set(&group.product_set(v, b), v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LruReport {
    pub checks: usize,
    /// `(f, g, basis set, level)` where the two conditions disagree.
    pub counterexample: Option<(usize, usize, usize, usize)>,
}

impl LruReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn check_basis(group: &GroupModel, basis: &[Subset]) -> Result<()> {
    for b in basis {
        if b.size() != group.order() {
            return Err(Error::CarrierMismatch {
                left: group.order(),
                right: b.size(),
            });
        }
        if !group.is_symmetric_set(b) {
            return Err(Error::BadNeighborhood(format!(
                "basis set {b} is not symmetric"
            )));
        }
    }
    Ok(())
}

/// For automorphisms `f, g`: `f(x)⁻¹g(x) ∈ V` on `B` iff `f(x)g(x)⁻¹ ∈ V`
/// on `B⁻¹`, checked over every pair, basis set and level.
pub fn lru_agree_check(
    group: &GroupModel,
    auts: &[CarrierMap],
    filtration: &IdentityFiltration,
    basis: &[Subset],
) -> Result<LruReport> {
    check_basis(group, basis)?;
    let mut checks = 0;
    for (fi, f) in auts.iter().enumerate() {
        for (gi, g) in auts.iter().enumerate() {
            for (bi, b) in basis.iter().enumerate() {
                let b_inv = group.inverse_set(b);
                for (i, v) in filtration.levels().iter().enumerate() {
                    checks += 1;
                    let left = b
                        .iter()
                        .all(|x| v.contains(group.mul(group.inv(f.apply(x)), g.apply(x))));
                    let right = b_inv
                        .iter()
                        .all(|x| v.contains(group.mul(f.apply(x), group.inv(g.apply(x)))));
                    if left != right {
                        return Ok(LruReport {
                            checks,
                            counterexample: Some((fi, gi, bi, i)),
                        });
                    }
                }
            }
        }
    }
    Ok(LruReport {
        checks,
        counterexample: None,
    })
}

/// Least level `i` with `x V_i x⁻¹ ⊆ U` for every `x ∈ B`.
pub fn coarsely_sin_check(
    group: &GroupModel,
    filtration: &IdentityFiltration,
    u: &Subset,
    b: &Subset,
) -> Option<usize> {
    filtration.levels().iter().position(|v| {
        b.iter()
            .all(|x| v.iter().all(|y| u.contains(group.conj(x, y))))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperLowerReport {
    pub comparison: BasisComparison,
    /// Whether conjugation control was found for every level and basis set,
    /// which forces the two topologies to agree.
    pub coarsely_sin: bool,
    pub verdict: Verdict,
}

/// Compares the upper and lower topologies on an automorphism set through
/// their identity balls `𝐄_{B, E^∨_i}` and `𝐄_{B, E^∧_i}` (biconvergence).
pub fn upper_lower_compare(
    group: &GroupModel,
    auts: &MapSet,
    filtration: &IdentityFiltration,
    basis: &[Subset],
) -> Result<UpperLowerReport> {
    check_basis(group, basis)?;
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for v in filtration.levels() {
        let up = group_entourage(group, v, EntourageKind::Upper)?;
        let low = group_entourage(group, v, EntourageKind::Lower)?;
        for b in basis {
            upper.push(FunctionEntourage::from_relation(auts, b, &up, true)?);
            lower.push(FunctionEntourage::from_relation(auts, b, &low, true)?);
        }
    }
    let comparison = mapspace::compare_neighborhood_bases(auts, &upper, &lower)?;
    let coarsely_sin = controls_every_level(group, filtration, basis);
    let consistent = matches!(comparison.order, BasisOrder::Finer | BasisOrder::Equivalent)
        && (!coarsely_sin || comparison.order == BasisOrder::Equivalent);
    Ok(UpperLowerReport {
        comparison,
        coarsely_sin,
        verdict: Verdict::from_bool(consistent),
    })
}

/// For each level `i`, conjugation by `B ∪ {e}` maps some level `j` into a
/// neighborhood `U` with `U·U ⊆ V_i` (`U = V_{i+1}`, or `V_k` at the top
/// when it is a subgroup).
fn controls_every_level(
    group: &GroupModel,
    filtration: &IdentityFiltration,
    basis: &[Subset],
) -> bool {
    let k = filtration.depth();
    (0..=k).all(|i| {
        let u = if i < k {
            filtration.level(i + 1)
        } else {
            let top = filtration.level(k);
            if !group.product_set(top, top).is_subset(top) {
                return false;
            }
            top
        };
        basis.iter().all(|b| {
            let mut with_e = b.clone();
            with_e.insert(group.identity());
            coarsely_sin_check(group, filtration, u, &with_e).is_some()
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationReport {
    pub checks: usize,
    /// `(v, x, basis set, level)` with `γ(v)(x) ∉ V x V`.
    pub counterexample: Option<(usize, usize, usize, usize)>,
}

impl ConjugationReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Every inner automorphism `γ(v)` with `v ∈ V_i` moves each `x ∈ B` within
/// `V_i x V_i`, so `γ` is continuous into the lower topology.
pub fn conjugation_continuity_check(
    group: &GroupModel,
    auts: &MapSet,
    filtration: &IdentityFiltration,
    basis: &[Subset],
) -> Result<ConjugationReport> {
    check_basis(group, basis)?;
    for x in 0..group.order() {
        if auts.index_of(&group.inner(x)).is_none() {
            return Err(Error::MissingInner(x));
        }
    }
    let mut checks = 0;
    for (i, v) in filtration.levels().iter().enumerate() {
        for (bi, b) in basis.iter().enumerate() {
            for w in v.iter() {
                let gamma = group.inner(w);
                for x in b.iter() {
                    checks += 1;
                    let coset = double_coset_image(group, v, &Subset::singleton(group.order(), x));
                    if !coset.contains(gamma.apply(x)) {
                        return Ok(ConjugationReport {
                            checks,
                            counterexample: Some((w, x, bi, i)),
                        });
                    }
                }
            }
        }
    }
    Ok(ConjugationReport {
        checks,
        counterexample: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExhaustionIndex {
    /// One-based index of the first member containing the set.
    Found(usize),
    PrefixExhausted,
}

/// Least `k` (one-based) with `elements ⊆ V_k` in an exhaustion
/// `V_1 ⊆ V_2 ⊆ …` obeying `V_n·V_n ⊆ V_{n+1}`.
pub fn bounded_in_exhaustion(
    group: &GroupModel,
    elements: &Subset,
    exhaustion: &[Subset],
) -> Result<ExhaustionIndex> {
    for (n, pair) in exhaustion.windows(2).enumerate() {
        if !pair[0].is_subset(&pair[1])
            || !group.product_set(&pair[0], &pair[0]).is_subset(&pair[1])
        {
            return Err(Error::BadExhaustion(n + 1));
        }
    }
    Ok(exhaustion
        .iter()
        .position(|v| elements.is_subset(v))
        .map_or(ExhaustionIndex::PrefixExhausted, |k| {
            ExhaustionIndex::Found(k + 1)
        }))
}

/// All symmetric subsets of the group (including the empty set).
pub fn symmetric_subsets(group: &GroupModel) -> Vec<Subset> {
    Subset::all(group.order())
        .filter(|s| group.is_symmetric_set(s))
        .collect()
}

/// All symmetric identity neighborhoods.
pub fn symmetric_neighborhoods(group: &GroupModel) -> Vec<Subset> {
    symmetric_subsets(group)
        .into_iter()
        .filter(|s| s.contains(group.identity()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> Subset {
        Subset::from_indices(n, xs.iter().copied()).unwrap()
    }

    #[test]
    fn group_orders_and_automorphism_counts() {
        let s3 = GroupModel::symmetric3();
        let d4 = GroupModel::dihedral4();
        let q8 = GroupModel::quaternion();
        let c6 = GroupModel::cyclic(6).unwrap();
        assert_eq!((s3.order(), d4.order(), q8.order()), (6, 8, 8));
        assert_eq!(s3.automorphisms().len(), 6);
        assert_eq!(d4.automorphisms().len(), 8);
        assert_eq!(q8.automorphisms().len(), 24);
        assert_eq!(c6.automorphisms().len(), 2);
        assert_eq!(GroupModel::cyclic(8).unwrap().automorphisms().len(), 4);
        assert_eq!(s3.inner_automorphisms().len(), 6);
        assert_eq!(d4.inner_automorphisms().len(), 4);
        assert_eq!(q8.inner_automorphisms().len(), 4);
        assert!(c6.is_abelian() && !q8.is_abelian());
        for g in [&s3, &d4, &q8] {
            assert!(g.automorphisms()[0].is_identity());
            assert!(g.automorphisms().iter().all(|f| g.is_automorphism(f)));
        }
    }

    #[test]
    fn quaternion_relations() {
        let q = GroupModel::quaternion();
        let (minus_one, i, j, k) = (4, 1, 2, 3);
        assert_eq!(q.mul(i, i), minus_one);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), 4 + k);
        assert_eq!(q.mul(q.mul(i, j), k), minus_one);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(GroupModel::new(vec![vec![0, 0], vec![0, 1]]).is_err());
        assert!(GroupModel::new(vec![]).is_err());
        // a Latin square without associativity
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(GroupModel::new(t), Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn entourage_examples() {
        let g = GroupModel::symmetric3();
        let e = set(6, &[g.identity()]);
        for kind in EntourageKind::ALL {
            assert_eq!(
                group_entourage(&g, &e, kind).unwrap(),
                Relation::diagonal(6)
            );
            assert_eq!(
                group_entourage(&g, &Subset::full(6), kind).unwrap(),
                Relation::full(6)
            );
        }
        let swap = (0..6)
            .find(|&x| x != g.identity() && g.mul(x, x) == g.identity())
            .unwrap();
        let v = set(6, &[g.identity(), swap]);
        let l = group_entourage(&g, &v, EntourageKind::Left).unwrap();
        let r = group_entourage(&g, &v, EntourageKind::Right).unwrap();
        let up = group_entourage(&g, &v, EntourageKind::Upper).unwrap();
        let low = group_entourage(&g, &v, EntourageKind::Lower).unwrap();
        assert_eq!(up, l.intersection(&r).unwrap());
        assert!(l.union(&r).unwrap().is_subset(&low));
        assert_ne!(l, r);
        assert!(group_entourage(&g, &set(6, &[swap]), EntourageKind::Left).is_err());
    }

    #[test]
    fn left_entourages_are_left_invariant() {
        let g = GroupModel::dihedral4();
        for v in symmetric_neighborhoods(&g) {
            let l = group_entourage(&g, &v, EntourageKind::Left).unwrap();
            let r = group_entourage(&g, &v, EntourageKind::Right).unwrap();
            for (x, y) in l.pairs() {
                assert!((0..8).all(|a| l.contains(g.mul(a, x), g.mul(a, y))));
            }
            for (x, y) in r.pairs() {
                assert!((0..8).all(|a| r.contains(g.mul(x, a), g.mul(y, a))));
            }
        }
    }

    #[test]
    fn lower_image_is_double_coset() {
        let g = GroupModel::quaternion();
        for v in symmetric_neighborhoods(&g) {
            let low = group_entourage(&g, &v, EntourageKind::Lower).unwrap();
            for b in Subset::all(8).step_by(7) {
                assert_eq!(low.image(&b).unwrap(), double_coset_image(&g, &v, &b));
            }
        }
    }

    #[test]
    fn filtration_validation() {
        let g = GroupModel::cyclic(4).unwrap();
        let ok = IdentityFiltration::new(&g, vec![Subset::full(4), set(4, &[0, 2]), set(4, &[0])])
            .unwrap();
        assert_eq!(ok.depth(), 2);
        assert!(IdentityFiltration::new(&g, vec![set(4, &[0, 2]), Subset::full(4)]).is_err());
        assert!(IdentityFiltration::new(&g, vec![Subset::full(4), set(4, &[0, 1])]).is_err());
        // {0,1,3}² = C4 ⊄ {0,1,3}
        assert!(IdentityFiltration::new(&g, vec![set(4, &[0, 1, 3]), set(4, &[0, 1, 3])]).is_err());
    }

    #[test]
    fn lru_agree_on_small_groups() {
        for g in [
            GroupModel::symmetric3(),
            GroupModel::dihedral4(),
            GroupModel::quaternion(),
        ] {
            let auts = g.automorphisms();
            let basis = symmetric_subsets(&g);
            let f = IdentityFiltration::full(&g);
            let r = lru_agree_check(&g, &auts, &f, &basis).unwrap();
            assert!(r.passed());
            assert_eq!(r.checks, auts.len() * auts.len() * basis.len() * 2);
        }
        let g = GroupModel::cyclic(3).unwrap();
        assert!(lru_agree_check(
            &g,
            &g.automorphisms(),
            &IdentityFiltration::full(&g),
            &[set(3, &[1])]
        )
        .is_err());
    }

    #[test]
    fn coarsely_sin_examples() {
        let c = GroupModel::cyclic(4).unwrap();
        let f = IdentityFiltration::new(&c, vec![set(4, &[0, 2]), set(4, &[0])]).unwrap();
        assert_eq!(
            coarsely_sin_check(&c, &f, &set(4, &[0, 2]), &Subset::full(4)),
            Some(0)
        );
        assert_eq!(
            coarsely_sin_check(&c, &f, &set(4, &[0]), &set(4, &[0])),
            Some(1)
        );

        let s3 = GroupModel::symmetric3();
        let rotations = (0..6).filter(|&x| g_order(&s3, x) != 2).collect::<Vec<_>>();
        let u = set(6, &rotations);
        let f = IdentityFiltration::new(
            &s3,
            vec![Subset::full(6), u.clone(), set(6, &[s3.identity()])],
        )
        .unwrap();
        assert_eq!(coarsely_sin_check(&s3, &f, &u, &Subset::full(6)), Some(1));
        let t = (0..6).find(|&x| g_order(&s3, x) == 2).unwrap();
        let flip = set(6, &[s3.identity(), t]);
        assert_eq!(
            coarsely_sin_check(&s3, &f, &flip, &Subset::full(6)),
            Some(2)
        );
    }

    fn g_order(g: &GroupModel, x: usize) -> usize {
        g.element_order(x)
    }

    #[test]
    fn upper_lower_examples() {
        let s3 = GroupModel::symmetric3();
        let auts = MapSet::new(s3.automorphisms()).unwrap();
        let basis = symmetric_subsets(&s3);
        let r = upper_lower_compare(&s3, &auts, &IdentityFiltration::full(&s3), &basis).unwrap();
        assert_eq!(r.comparison.order, BasisOrder::Equivalent);
        assert!(r.coarsely_sin);
        assert_eq!(r.verdict, Verdict::Pass);

        let c5 = GroupModel::cyclic(5).unwrap();
        let auts = MapSet::new(c5.automorphisms()).unwrap();
        let f =
            IdentityFiltration::new(&c5, vec![Subset::full(5), set(5, &[0, 1, 4]), set(5, &[0])])
                .unwrap();
        let r = upper_lower_compare(&c5, &auts, &f, &symmetric_subsets(&c5)).unwrap();
        assert_eq!(
            (r.comparison.order, r.verdict),
            (BasisOrder::Equivalent, Verdict::Pass)
        );

        let only_id = MapSet::new(vec![CarrierMap::identity(6)]).unwrap();
        let r = upper_lower_compare(&s3, &only_id, &IdentityFiltration::full(&s3), &basis).unwrap();
        assert_eq!(r.comparison.order, BasisOrder::Equivalent);
    }

    #[test]
    fn conjugation_continuity_examples() {
        for g in [GroupModel::symmetric3(), GroupModel::quaternion()] {
            let auts = MapSet::new(g.automorphisms()).unwrap();
            let levels: Vec<_> = symmetric_neighborhoods(&g)
                .into_iter()
                .map(|v| IdentityFiltration::new(&g, vec![v]).unwrap())
                .collect();
            for f in &levels {
                let r =
                    conjugation_continuity_check(&g, &auts, f, &[Subset::full(g.order())]).unwrap();
                assert!(r.passed());
            }
        }
        let s3 = GroupModel::symmetric3();
        let only_id = MapSet::new(vec![CarrierMap::identity(6)]).unwrap();
        let err = conjugation_continuity_check(&s3, &only_id, &IdentityFiltration::full(&s3), &[])
            .unwrap_err();
        assert!(matches!(err, Error::MissingInner(_)));
    }

    #[test]
    fn exhaustion_examples() {
        let c = GroupModel::cyclic(8).unwrap();
        let chain = vec![
            set(8, &[0]),
            set(8, &[0, 4]),
            set(8, &[0, 2, 4, 6]),
            Subset::full(8),
        ];
        assert_eq!(
            bounded_in_exhaustion(&c, &set(8, &[0]), &chain).unwrap(),
            ExhaustionIndex::Found(1)
        );
        assert_eq!(
            bounded_in_exhaustion(&c, &set(8, &[6]), &chain).unwrap(),
            ExhaustionIndex::Found(3)
        );
        assert_eq!(
            bounded_in_exhaustion(&c, &set(8, &[1]), &chain[..3]).unwrap(),
            ExhaustionIndex::PrefixExhausted
        );
        let bad = vec![set(8, &[0, 1, 7]), set(8, &[0, 1, 2, 6, 7])];
        assert_eq!(
            bounded_in_exhaustion(&c, &set(8, &[0]), &bad),
            Ok(ExhaustionIndex::Found(1))
        );
        let bad = vec![set(8, &[0, 1, 7]), set(8, &[0, 1, 7])];
        assert_eq!(
            bounded_in_exhaustion(&c, &set(8, &[0]), &bad),
            Err(Error::BadExhaustion(1))
        );
    }
}
