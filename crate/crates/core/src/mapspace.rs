//! Function-space entourages `𝐄_{A,E}` on finite map sets.
//!
//! Topologies on a map set are represented only through balls around the
//! identity map: for an entourage `𝐄` on the set, its ball is
//! `{ f : (id, f) ∈ 𝐄 }`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::relalg::{Relation, Subset};
use crate::report::Verdict;
use crate::ulb::{CarrierMap, UlbSpace};
use crate::unif::UniformFiltration;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapSetFlags {
    pub closed_under_composition: bool,
    pub all_bijective: bool,
    pub contains_identity: bool,
}

/// A finite list of self-maps of one carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSet {
    size: usize,
    maps: Vec<CarrierMap>,
    flags: MapSetFlags,
}

impl MapSet {
    pub fn new(maps: Vec<CarrierMap>) -> Result<Self> {
        let size = maps
            .first()
            .map(CarrierMap::size)
            .ok_or(Error::EmptyCarrier)?;
        if let Some(m) = maps.iter().find(|m| m.size() != size) {
            return Err(Error::CarrierMismatch {
                left: size,
                right: m.size(),
            });
        }
        let tables: HashSet<&[usize]> = maps.iter().map(CarrierMap::table).collect();
        let closed_under_composition = maps.iter().all(|f| {
            maps.iter()
                .all(|g| tables.contains(f.compose(g).expect("same carrier").table()))
        });
        let flags = MapSetFlags {
            closed_under_composition,
            all_bijective: maps.iter().all(CarrierMap::is_bijective),
            contains_identity: maps.iter().any(CarrierMap::is_identity),
        };
        Ok(MapSet { size, maps, flags })
    }

    pub fn all_endomaps(n: usize) -> Self {
        MapSet::new(CarrierMap::all_endomaps(n)).expect("nonempty")
    }

    pub fn all_permutations(n: usize) -> Self {
        MapSet::new(CarrierMap::all_permutations(n)).expect("nonempty")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[CarrierMap] {
        &self.maps
    }

    pub fn get(&self, i: usize) -> Result<&CarrierMap> {
        self.maps.get(i).ok_or(Error::NotInMapSet(i))
    }

    pub fn flags(&self) -> MapSetFlags {
        self.flags
    }

    pub fn index_of(&self, f: &CarrierMap) -> Option<usize> {
        self.maps.iter().position(|g| g.table() == f.table())
    }

    pub fn identity_index(&self) -> Result<usize> {
        self.maps
            .iter()
            .position(CarrierMap::is_identity)
            .ok_or(Error::NoIdentity)
    }
}

/// `(f, g) ∈ 𝐄_{A,E}`, and with `bi` also `(f⁻¹, g⁻¹) ∈ 𝐄_{A,E}`.
///
/// Maps without inverses never satisfy the biconvergence clause.
pub fn related(f: &CarrierMap, g: &CarrierMap, a: &Subset, e: &Relation, bi: bool) -> bool {
    if !a.iter().all(|x| e.contains(f.apply(x), g.apply(x))) {
        return false;
    }
    if !bi {
        return true;
    }
    match (f.inverse_table(), g.inverse_table()) {
        (Some(fi), Some(gi)) => a.iter().all(|x| e.contains(fi[x], gi[x])),
        _ => false,
    }
}

/// `𝐄_{A,E}` as a relation on the indices of a map set.
pub fn big_e_relation(m: &MapSet, a: &Subset, e: &Relation, bi: bool) -> Result<Relation> {
    if bi && !m.flags.all_bijective {
        return Err(Error::NotBijective(
            "biconvergence entourage on a non-bijective map set".into(),
        ));
    }
    if a.size() != m.size || e.size() != m.size {
        return Err(Error::CarrierMismatch {
            left: m.size,
            right: e.size(),
        });
    }
    Ok(Relation::from_predicate(m.len(), |p, q| {
        related(&m.maps[p], &m.maps[q], a, e, bi)
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub set: Subset,
    pub level: Option<usize>,
    pub biconvergence: bool,
}

/// A function-space entourage together with the data that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionEntourage {
    pub relation: Relation,
    pub provenance: Provenance,
}

impl FunctionEntourage {
    pub fn from_relation(m: &MapSet, a: &Subset, e: &Relation, bi: bool) -> Result<Self> {
        Ok(FunctionEntourage {
            relation: big_e_relation(m, a, e, bi)?,
            provenance: Provenance {
                set: a.clone(),
                level: None,
                biconvergence: bi,
            },
        })
    }

    /// Ball around the identity map, as a set of map indices.
    pub fn ball(&self, identity: usize) -> Subset {
        self.relation.row(identity).clone()
    }
}

/// `𝐄_{A, E_i}` for level `i` of a filtration.
pub fn big_e(
    m: &MapSet,
    f: &UniformFiltration,
    a: &Subset,
    i: usize,
    bi: bool,
) -> Result<FunctionEntourage> {
    if i > f.depth() {
        return Err(Error::InvalidFiltration(format!("no level {i}")));
    }
    let mut e = FunctionEntourage::from_relation(m, a, f.level(i), bi)?;
    e.provenance.level = Some(i);
    Ok(e)
}

/// Tally for one family of identities in [`lemma_suite`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub first_witness: Option<String>,
}

impl FamilyResult {
    fn new(name: &'static str) -> Self {
        FamilyResult {
            name,
            checks: 0,
            failures: 0,
            first_witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_witness.is_none() {
                self.first_witness = Some(witness());
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    /// `𝐄_{A,E} ∘ 𝐄_{B,F} ⊆ 𝐄_{A∩B, E∘F}`.
    pub composition: FamilyResult,
    /// `𝐄_{A,E} ∘ 𝐄_{A,E} = 𝐄_{A,E}` for idempotent `E`.
    pub idempotent_lift: FamilyResult,
    /// `g 𝐄_{A,E} g⁻¹ ⊆ 𝐄_{gA, gE}`.
    pub conjugation: FamilyResult,
    /// Hausdorff transfer: `𝐄_{X,Δ}` is map equality; otherwise a swap of
    /// two inseparable points lies in the finest identity ball.
    pub separation: FamilyResult,
}

impl LemmaReport {
    pub fn families(&self) -> [&FamilyResult; 4] {
        [
            &self.composition,
            &self.idempotent_lift,
            &self.conjugation,
            &self.separation,
        ]
    }

    pub fn passed(&self) -> bool {
        self.families().iter().all(|f| f.failures == 0)
    }
}

/// Exhaustively checks the four families of function-space identities over
/// every pair of basis sets and levels of the space.
pub fn lemma_suite(space: &UlbSpace, m: &MapSet) -> Result<LemmaReport> {
    if m.size != space.size() {
        return Err(Error::CarrierMismatch {
            left: space.size(),
            right: m.size,
        });
    }
    let f = space.filtration();
    let sets = space.bornology().sets();
    let levels = f.depth() + 1;
    let mut cache = Vec::new();
    for a in sets {
        let row: Vec<Relation> = (0..levels)
            .map(|i| big_e_relation(m, a, f.level(i), false))
            .collect::<Result<_>>()?;
        cache.push(row);
    }

    let mut composition = FamilyResult::new("composition-inclusion");
    let mut idempotent_lift = FamilyResult::new("idempotent-lift");
    for (ai, a) in sets.iter().enumerate() {
        for (bi, b) in sets.iter().enumerate() {
            let meet = a.intersection(b);
            for i in 0..levels {
                for j in 0..levels {
                    let lhs = cache[ai][i].compose(&cache[bi][j])?;
                    let ef = f.level(i).compose(f.level(j))?;
                    let rhs = big_e_relation(m, &meet, &ef, false)?;
                    composition.record(lhs.is_subset(&rhs), || format!("A={a} B={b} i={i} j={j}"));
                }
            }
        }
        for (i, e) in cache[ai].iter().enumerate() {
            if f.level(i).is_idempotent() {
                let square = e.compose(e)?;
                idempotent_lift.record(&square == e, || format!("A={a} i={i}"));
            }
        }
    }

    let mut conjugation = FamilyResult::new("conjugation-inclusion");
    for g in m.maps.iter().filter(|g| g.is_bijective()) {
        let g_inv = g.inverse().expect("bijective");
        let conj: Vec<CarrierMap> = m
            .maps
            .iter()
            .map(|p| g.compose(p).and_then(|gp| gp.compose(&g_inv)))
            .collect::<Result<_>>()?;
        for (ai, a) in sets.iter().enumerate() {
            let ga = g.image(a);
            for (i, e) in cache[ai].iter().enumerate() {
                let ge = g.image_relation(f.level(i));
                for (p, q) in e.pairs() {
                    conjugation.record(related(&conj[p], &conj[q], &ga, &ge, false), || {
                        format!("g={g:?} A={a} i={i} f={:?} f'={:?}", m.maps[p], m.maps[q])
                    });
                }
            }
        }
    }

    let mut separation = FamilyResult::new("hausdorff-separation");
    let whole = Subset::full(m.size);
    let finest = f.finest();
    if finest.is_diagonal() {
        for bi in [false, true] {
            if bi && !m.flags.all_bijective {
                continue;
            }
            let e = big_e_relation(m, &whole, finest, bi)?;
            let equal = Relation::from_predicate(m.len(), |p, q| m.maps[p] == m.maps[q]);
            separation.record(e == equal, || format!("bi={bi}"));
        }
    } else if let Some((x, y)) = finest.pairs().find(|(x, y)| x != y) {
        let mut table: Vec<usize> = (0..m.size).collect();
        table.swap(x, y);
        let swap = CarrierMap::permutation(table).expect("transposition");
        let id = CarrierMap::identity(m.size);
        separation.record(related(&id, &swap, &whole, finest, true), || {
            format!("swap ({x} {y})")
        });
    }

    Ok(LemmaReport {
        composition,
        idempotent_lift,
        conjugation,
        separation,
    })
}

/// A witness `(j, B′)` for continuity of composition at `(g, h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityWitness {
    /// Level of the bounded half-step entourage `F′`.
    pub half_step_level: usize,
    /// Level `j` controlling both perturbations.
    pub level: usize,
    /// `B′ = F′[h(B)]`.
    pub enlarged_set: Subset,
    pub enlarged_set_bounded: bool,
    /// Perturbation pairs `(g′, h′)` meeting the hypotheses.
    pub admissible_pairs: usize,
    /// Total pairs scanned: `|M|²`.
    pub pairs_scanned: usize,
    /// First admissible pair whose composite leaves `𝐄_{B, E_i}`.
    pub counterexample: Option<(usize, usize)>,
}

impl ContinuityWitness {
    pub fn sound(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContinuityOutcome {
    Witness(ContinuityWitness),
    ResolutionExhausted { reason: String },
}

/// Builds the witness for continuity of `(g, h) ↦ g ∘ h` at target level
/// `i` on the set `B`, following the half-step construction, then verifies
/// it against every pair of perturbations drawn from the map set.
pub fn composition_continuity_witness(
    space: &UlbSpace,
    m: &MapSet,
    g: usize,
    h: usize,
    b: &Subset,
    i: usize,
) -> Result<ContinuityOutcome> {
    let certified = space.certified()?;
    let (gm, hm) = (m.get(g)?, m.get(h)?);
    let f = space.filtration();
    let k = f.depth();
    if i > k {
        return Err(Error::InvalidFiltration(format!("no level {i}")));
    }
    let half = (i + 1).max(certified);
    if half > k {
        return Ok(ContinuityOutcome::ResolutionExhausted {
            reason: format!(
                "no bounded half-step level below {i} (depth {k}, certified {certified})"
            ),
        });
    }
    let f_prime = f.level(half);
    let enlarged = f_prime.image(&hm.image(b))?;
    let Some(modulus) = least_level_into(f, gm, &enlarged, half) else {
        return Ok(ContinuityOutcome::ResolutionExhausted {
            reason: format!("g is not controlled into level {half} on {enlarged} at this depth"),
        });
    };
    let j = modulus.max(half);
    let e_j = f.level(j);
    let target = f.level(i);

    let g_close: Vec<usize> = (0..m.len())
        .filter(|&p| related(gm, &m.maps[p], &enlarged, e_j, false))
        .collect();
    let h_close: Vec<usize> = (0..m.len())
        .filter(|&q| related(hm, &m.maps[q], b, e_j, false))
        .collect();
    let gh: Vec<usize> = (0..m.size).map(|x| gm.apply(hm.apply(x))).collect();
    let mut counterexample = None;
    'outer: for &p in &g_close {
        for &q in &h_close {
            let (gp, hq) = (&m.maps[p], &m.maps[q]);
            if !b
                .iter()
                .all(|x| target.contains(gp.apply(hq.apply(x)), gh[x]))
            {
                counterexample = Some((p, q));
                break 'outer;
            }
        }
    }
    Ok(ContinuityOutcome::Witness(ContinuityWitness {
        half_step_level: half,
        level: j,
        enlarged_set_bounded: space.bornology().is_bounded(&enlarged),
        enlarged_set: enlarged,
        admissible_pairs: g_close.len() * h_close.len(),
        pairs_scanned: m.len() * m.len(),
        counterexample,
    }))
}

/// Least `j` with `(g×g)(E_j ∩ A×A) ⊆ E_target`.
fn least_level_into(
    f: &UniformFiltration,
    g: &CarrierMap,
    a: &Subset,
    target: usize,
) -> Option<usize> {
    let t = f.level(target);
    (0..=f.depth()).find(|&j| {
        let e = f.level(j);
        a.iter().all(|x| {
            e.row(x)
                .iter()
                .filter(|&y| a.contains(y))
                .all(|y| t.contains(g.apply(x), g.apply(y)))
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisOrder {
    Finer,
    Coarser,
    Equivalent,
    Incomparable,
}

impl fmt::Display for BasisOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BasisOrder::Finer => "finer",
            BasisOrder::Coarser => "coarser",
            BasisOrder::Equivalent => "equivalent",
            BasisOrder::Incomparable => "incomparable",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisComparison {
    pub order: BasisOrder,
    pub first_discrete: bool,
    pub second_discrete: bool,
    /// A ball of the second basis containing no ball of the first, if any.
    pub second_uncovered: Option<usize>,
    /// A ball of the first basis containing no ball of the second, if any.
    pub first_uncovered: Option<usize>,
}

/// Compares the identity-neighborhood filters generated by two lists of
/// function entourages: the first is finer iff every ball of the second
/// contains a ball of the first.
pub fn compare_neighborhood_bases(
    m: &MapSet,
    first: &[FunctionEntourage],
    second: &[FunctionEntourage],
) -> Result<BasisComparison> {
    let id = m.identity_index()?;
    for e in first.iter().chain(second) {
        if e.relation.size() != m.len() {
            return Err(Error::CarrierMismatch {
                left: m.len(),
                right: e.relation.size(),
            });
        }
        if !e.relation.is_reflexive() {
            return Err(Error::NotReflexive);
        }
    }
    let balls1: Vec<Subset> = first.iter().map(|e| e.ball(id)).collect();
    let balls2: Vec<Subset> = second.iter().map(|e| e.ball(id)).collect();
    let identity_maps =
        Subset::from_indices(m.len(), (0..m.len()).filter(|&p| m.maps[p].is_identity()))?;
    let uncovered = |big: &[Subset], small: &[Subset]| {
        big.iter()
            .position(|u| !small.iter().any(|v| v.is_subset(u)))
    };
    let second_uncovered = uncovered(&balls2, &balls1);
    let first_uncovered = uncovered(&balls1, &balls2);
    let order = match (second_uncovered.is_none(), first_uncovered.is_none()) {
        (true, true) => BasisOrder::Equivalent,
        (true, false) => BasisOrder::Finer,
        (false, true) => BasisOrder::Coarser,
        (false, false) => BasisOrder::Incomparable,
    };
    let discrete = |balls: &[Subset]| balls.iter().any(|b| b.is_subset(&identity_maps));
    Ok(BasisComparison {
        order,
        first_discrete: discrete(&balls1),
        second_discrete: discrete(&balls2),
        second_uncovered,
        first_uncovered,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallReport {
    pub verdict: Verdict,
    pub ball_size: usize,
    pub witness: Option<String>,
}

impl BallReport {
    fn unmet(reason: String) -> Self {
        BallReport {
            verdict: Verdict::PreconditionUnmet,
            ball_size: 0,
            witness: Some(reason),
        }
    }
}

/// When `E_i` is idempotent and `E_i[B] = B`, the biconvergence ball
/// `{ f : (f(x), x), (f⁻¹(x), x) ∈ E_i for x ∈ B }` is a subgroup.
pub fn open_subgroup_check(
    space: &UlbSpace,
    m: &MapSet,
    b: &Subset,
    i: usize,
) -> Result<BallReport> {
    let f = space.filtration();
    if i > f.depth() {
        return Err(Error::InvalidFiltration(format!("no level {i}")));
    }
    let e = f.level(i);
    if !m.flags.all_bijective {
        return Ok(BallReport::unmet(
            "map set has non-bijective members".into(),
        ));
    }
    if !e.is_idempotent() {
        return Ok(BallReport::unmet(format!("level {i} is not idempotent")));
    }
    if e.image(b)? != *b {
        return Ok(BallReport::unmet(format!("E_{i}[B] ≠ B for B = {b}")));
    }
    let id = CarrierMap::identity(m.size);
    let in_ball = |p: &CarrierMap| related(&id, p, b, e, true);
    let ball: Vec<&CarrierMap> = m.maps.iter().filter(|p| in_ball(p)).collect();
    for p in &ball {
        let inv = p.inverse().expect("bijective");
        if !in_ball(&inv) {
            return Ok(BallReport {
                verdict: Verdict::Fail,
                ball_size: ball.len(),
                witness: Some(format!("inverse of {p:?}")),
            });
        }
        for q in &ball {
            if !in_ball(&p.compose(q)?) {
                return Ok(BallReport {
                    verdict: Verdict::Fail,
                    ball_size: ball.len(),
                    witness: Some(format!("{p:?} ∘ {q:?}")),
                });
            }
        }
    }
    Ok(BallReport {
        verdict: Verdict::Pass,
        ball_size: ball.len(),
        witness: None,
    })
}

/// When every member of the set preserves `A` and `E_i`, the ball
/// `M ∩ 𝐄_{A,E_i}[id]` is invariant under conjugation by the set.
pub fn sin_criterion_check(
    space: &UlbSpace,
    m: &MapSet,
    a: &Subset,
    i: usize,
) -> Result<BallReport> {
    let f = space.filtration();
    if i > f.depth() {
        return Err(Error::InvalidFiltration(format!("no level {i}")));
    }
    let e = f.level(i);
    if !m.flags.all_bijective {
        return Ok(BallReport::unmet(
            "map set has non-bijective members".into(),
        ));
    }
    for g in &m.maps {
        if g.image(a) != *a {
            return Ok(BallReport::unmet(format!(
                "{g:?} does not preserve A = {a}"
            )));
        }
        if g.image_relation(e) != *e {
            return Ok(BallReport::unmet(format!("{g:?} does not preserve E_{i}")));
        }
    }
    let id = CarrierMap::identity(m.size);
    let ball: Vec<&CarrierMap> = m
        .maps
        .iter()
        .filter(|p| related(&id, p, a, e, false))
        .collect();
    for g in &m.maps {
        let g_inv = g.inverse().expect("bijective");
        for p in &ball {
            let conj = g.compose(p)?.compose(&g_inv)?;
            if !related(&id, &conj, a, e, false) {
                return Ok(BallReport {
                    verdict: Verdict::Fail,
                    ball_size: ball.len(),
                    witness: Some(format!("{g:?} conjugates {p:?} out of the ball")),
                });
            }
        }
    }
    Ok(BallReport {
        verdict: Verdict::Pass,
        ball_size: ball.len(),
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::born::BornologyBasis;
    use crate::rational::int;
    use crate::unif::PseudoMetric;

    fn line_space(n: usize, scales: &[i64]) -> UlbSpace {
        let metric = PseudoMetric::line(&(0..n as i64).collect::<Vec<_>>()).unwrap();
        let scales: Vec<_> = scales.iter().map(|&s| int(s)).collect();
        UlbSpace::new(
            UniformFiltration::from_metric(&metric, &scales).unwrap(),
            BornologyBasis::trivial(n),
        )
        .unwrap()
    }

    fn partition_space(n: usize, blocks: &[&[usize]]) -> UlbSpace {
        let part = Relation::from_predicate(n, |x, y| {
            blocks.iter().any(|b| b.contains(&x) && b.contains(&y))
        });
        let f =
            UniformFiltration::new(vec![Relation::full(n), part, Relation::diagonal(n)]).unwrap();
        UlbSpace::new(f, BornologyBasis::trivial(n)).unwrap()
    }

    #[test]
    fn big_e_examples() {
        let space = line_space(3, &[4, 2, 1]);
        let m = MapSet::all_endomaps(3);
        let f = space.filtration();
        let empty = big_e(&m, f, &Subset::empty(3), 2, false).unwrap();
        assert_eq!(empty.relation, Relation::full(27));
        let whole = big_e(&m, f, &Subset::full(3), 2, false).unwrap();
        assert_eq!(whole.relation, Relation::diagonal(27));

        // A = {0,1}, level 1 (|i-j| ≤ 1), scanned directly over all pairs
        let a = Subset::from_indices(3, [0, 1]).unwrap();
        let e = big_e(&m, f, &a, 1, false).unwrap();
        let maps = m.maps();
        for p in 0..27 {
            for q in 0..27 {
                let expected = (0..2).all(|x| maps[p].apply(x).abs_diff(maps[q].apply(x)) <= 1);
                assert_eq!(e.relation.contains(p, q), expected);
            }
        }
        assert!(e.relation.is_reflexive() && e.relation.is_symmetric());
        assert!(big_e(&m, f, &a, 1, true).is_err());
    }

    #[test]
    fn big_e_biconvergence_on_permutations() {
        let space = line_space(3, &[4, 2, 1]);
        let m = MapSet::all_permutations(3);
        let e = big_e(&m, space.filtration(), &Subset::full(3), 2, true).unwrap();
        assert_eq!(e.relation, Relation::diagonal(6));
        let sym = big_e(&m, space.filtration(), &Subset::singleton(3, 0), 1, true).unwrap();
        assert!(sym.relation.is_symmetric());
    }

    #[test]
    fn lemma_suite_on_all_endomaps() {
        let space = line_space(3, &[4, 2, 1]);
        let r = lemma_suite(&space, &MapSet::all_endomaps(3)).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(
            r.composition.checks > 0 && r.conjugation.checks > 0 && r.separation.checks == 2 - 1
        );
    }

    #[test]
    fn lemma_suite_partition_has_idempotent_lift() {
        let space = partition_space(4, &[&[0, 1], &[2, 3]]);
        let r = lemma_suite(&space, &MapSet::all_permutations(4)).unwrap();
        assert!(r.passed());
        assert_eq!(r.idempotent_lift.checks, 3);
        assert_eq!(r.separation.checks, 2);
    }

    #[test]
    fn lemma_suite_non_hausdorff_swap() {
        let part = Relation::from_predicate(3, |x, y| x == y || x + y == 1);
        let f = UniformFiltration::new(vec![Relation::full(3), part]).unwrap();
        let space = UlbSpace::new(f, BornologyBasis::trivial(3)).unwrap();
        let r = lemma_suite(&space, &MapSet::all_endomaps(3)).unwrap();
        assert!(r.passed());
        assert_eq!(r.separation.checks, 1);
    }

    #[test]
    fn continuity_witness_identity() {
        let space = line_space(3, &[8, 4, 2, 1]);
        let m = MapSet::all_endomaps(3);
        let id = m.identity_index().unwrap();
        let b = Subset::full(3);
        for i in 0..3 {
            match composition_continuity_witness(&space, &m, id, id, &b, i).unwrap() {
                ContinuityOutcome::Witness(w) => assert!(w.sound() && w.level > i),
                other => panic!("{other:?}"),
            }
        }
        assert!(matches!(
            composition_continuity_witness(&space, &m, id, id, &b, 3).unwrap(),
            ContinuityOutcome::ResolutionExhausted { .. }
        ));
        assert_eq!(
            composition_continuity_witness(&space, &m, 99, id, &b, 0),
            Err(Error::NotInMapSet(99))
        );
    }

    #[test]
    fn continuity_witness_exhaustive_on_line() {
        let space = line_space(3, &[8, 4, 2, 1]);
        let m = MapSet::all_endomaps(3);
        let b = Subset::from_indices(3, [0, 1]).unwrap();
        for g in 0..27 {
            for h in 0..27 {
                for i in 0..3 {
                    match composition_continuity_witness(&space, &m, g, h, &b, i).unwrap() {
                        ContinuityOutcome::Witness(w) => {
                            assert!(w.sound());
                            assert_eq!(w.pairs_scanned, 27 * 27);
                        }
                        other => panic!("{other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn continuity_depth_one_is_exhausted() {
        let space = line_space(3, &[2]);
        let m = MapSet::all_endomaps(3);
        let out = composition_continuity_witness(&space, &m, 0, 0, &Subset::full(3), 0).unwrap();
        assert!(matches!(out, ContinuityOutcome::ResolutionExhausted { .. }));
    }

    #[test]
    fn continuity_requires_certification() {
        let f = UniformFiltration::new(vec![Relation::full(4)]).unwrap();
        let b = BornologyBasis::from_index_lists(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let space = UlbSpace::new(f, b).unwrap();
        let m = MapSet::all_permutations(4);
        assert_eq!(
            composition_continuity_witness(&space, &m, 0, 0, &Subset::full(4), 0),
            Err(Error::Uncertified)
        );
    }

    #[test]
    fn compare_examples() {
        let m = MapSet::all_permutations(4);
        let delta = Relation::diagonal(4);
        let fix0 =
            vec![
                FunctionEntourage::from_relation(&m, &Subset::singleton(4, 0), &delta, true)
                    .unwrap(),
            ];
        let fix3 =
            vec![
                FunctionEntourage::from_relation(&m, &Subset::singleton(4, 3), &delta, true)
                    .unwrap(),
            ];
        let r = compare_neighborhood_bases(&m, &fix0, &fix0).unwrap();
        assert_eq!(r.order, BasisOrder::Equivalent);
        let r = compare_neighborhood_bases(&m, &fix0, &fix3).unwrap();
        assert_eq!(r.order, BasisOrder::Incomparable);
        assert!(!r.first_discrete && !r.second_discrete);
        let equality =
            vec![FunctionEntourage::from_relation(&m, &Subset::full(4), &delta, true).unwrap()];
        let r = compare_neighborhood_bases(&m, &equality, &fix0).unwrap();
        assert_eq!(r.order, BasisOrder::Finer);
        assert!(r.first_discrete);

        let no_id = MapSet::new(vec![CarrierMap::permutation(vec![1, 0]).unwrap()]).unwrap();
        let e = vec![FunctionEntourage::from_relation(
            &no_id,
            &Subset::full(2),
            &Relation::full(2),
            false,
        )
        .unwrap()];
        assert_eq!(
            compare_neighborhood_bases(&no_id, &e, &e),
            Err(Error::NoIdentity)
        );
    }

    #[test]
    fn open_subgroup_examples() {
        let m = MapSet::all_permutations(4);
        let discrete = UlbSpace::new(
            UniformFiltration::new(vec![Relation::full(4), Relation::diagonal(4)]).unwrap(),
            BornologyBasis::trivial(4),
        )
        .unwrap();
        let b = Subset::from_indices(4, [1, 2]).unwrap();
        let r = open_subgroup_check(&discrete, &m, &b, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.ball_size, 2); // pointwise fixator of {1,2} in Sym(4)

        let parts = partition_space(4, &[&[0, 1], &[2, 3]]);
        let b = Subset::from_indices(4, [0, 1]).unwrap();
        let r = open_subgroup_check(&parts, &m, &b, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.ball_size, 4); // preserve {0,1} and {2,3} setwise

        let line = line_space(4, &[4, 2, 1]);
        let r = open_subgroup_check(&line, &m, &Subset::full(4), 1).unwrap();
        assert_eq!(r.verdict, Verdict::PreconditionUnmet);
        let r = open_subgroup_check(&parts, &m, &Subset::singleton(4, 0), 1).unwrap();
        assert_eq!(r.verdict, Verdict::PreconditionUnmet);
    }

    #[test]
    fn sin_criterion_examples() {
        let space = line_space(4, &[4, 2, 1]);
        let isometries = MapSet::new(vec![
            CarrierMap::identity(4),
            CarrierMap::permutation(vec![3, 2, 1, 0]).unwrap(),
        ])
        .unwrap();
        for i in 0..3 {
            let r = sin_criterion_check(&space, &isometries, &Subset::full(4), i).unwrap();
            assert_eq!(r.verdict, Verdict::Pass);
        }
        let trivial = MapSet::new(vec![CarrierMap::identity(4)]).unwrap();
        let r = sin_criterion_check(&space, &trivial, &Subset::singleton(4, 2), 1).unwrap();
        assert_eq!((r.verdict, r.ball_size), (Verdict::Pass, 1));
        let r = sin_criterion_check(&space, &isometries, &Subset::singleton(4, 0), 1).unwrap();
        assert_eq!(r.verdict, Verdict::PreconditionUnmet);
        assert!(r.witness.is_some());
    }

    #[test]
    fn non_archimedean_space_gives_idempotent_function_entourages() {
        let space = partition_space(4, &[&[0, 1], &[2, 3]]);
        let m = MapSet::all_endomaps(4);
        for a in [Subset::full(4), Subset::from_indices(4, [0, 2]).unwrap()] {
            for i in 0..3 {
                let e = big_e(&m, space.filtration(), &a, i, false)
                    .unwrap()
                    .relation;
                assert!(e.is_idempotent());
            }
        }
    }
}
