//! Finite measure algebras: the symmetric-difference pseudometrics of a
//! family of measures and the uniform structure they generate on the
//! algebra's elements.
//!
//! Elements of the algebra over `{0, …, n−1}` are bitmasks, so element `A`
//! is also its own index in the carrier of size `2^n`.

use crate::born::BornologyBasis;
use crate::error::{Error, Result};
use crate::mapspace::MapSet;
use crate::rational::{self, int, Rational};
use crate::relalg::Relation;
use crate::ulb::{CarrierMap, UlbSpace};
use crate::unif::{check_halving, UniformFiltration};

use num_traits::{Signed, Zero};

/// Largest ground set handled; the algebra then has 32 elements.
pub const MAX_GROUND: usize = 5;

/// A measure on the subsets of `{0, …, n−1}` given by point weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    weights: Vec<Rational>,
}

impl Measure {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() || weights.len() > MAX_GROUND {
            return Err(Error::InvalidMeasure(format!(
                "ground set of size {} (allowed 1..={MAX_GROUND})",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::InvalidMeasure(format!(
                "negative weight {}",
                rational::format(w)
            )));
        }
        Ok(Measure { weights })
    }

    pub fn dirac(n: usize, point: usize) -> Result<Self> {
        if point >= n {
            return Err(Error::IndexOutOfRange {
                index: point,
                size: n,
            });
        }
        Measure::new((0..n).map(|i| int(i64::from(i == point))).collect())
    }

    pub fn counting(n: usize) -> Result<Self> {
        Measure::new(vec![int(1); n])
    }

    pub fn zero(n: usize) -> Result<Self> {
        Measure::new(vec![int(0); n])
    }

    pub fn ground(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn of(&self, a: usize) -> Rational {
        self.weights
            .iter()
            .enumerate()
            .filter(|(i, _)| a >> i & 1 == 1)
            .map(|(_, w)| w)
            .sum()
    }
}

/// `μ(A △ B)`.
pub fn sym_diff_distance(mu: &Measure, a: usize, b: usize) -> Rational {
    mu.of(a ^ b)
}

/// A nonempty list of measures on one ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureFamily {
    ground: usize,
    measures: Vec<Measure>,
}

impl MeasureFamily {
    pub fn new(measures: Vec<Measure>) -> Result<Self> {
        let ground = measures
            .first()
            .map(Measure::ground)
            .ok_or_else(|| Error::InvalidMeasure("empty family".into()))?;
        if let Some(m) = measures.iter().find(|m| m.ground() != ground) {
            return Err(Error::CarrierMismatch {
                left: ground,
                right: m.ground(),
            });
        }
        Ok(MeasureFamily { ground, measures })
    }

    pub fn diracs(n: usize) -> Result<Self> {
        MeasureFamily::new(
            (0..n)
                .map(|i| Measure::dirac(n, i))
                .collect::<Result<_>>()?,
        )
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    /// Number of algebra elements, `2^n`.
    pub fn algebra_size(&self) -> usize {
        1 << self.ground
    }

    pub fn measures(&self) -> &[Measure] {
        &self.measures
    }

    /// Some member assigns positive mass to `A △ B`.
    pub fn separates(&self, a: usize, b: usize) -> bool {
        self.measures
            .iter()
            .any(|m| sym_diff_distance(m, a, b).is_positive())
    }

    /// Smallest positive value any member takes on any element.
    pub fn min_positive_value(&self) -> Option<Rational> {
        self.measures
            .iter()
            .flat_map(|m| (1..self.algebra_size()).map(move |a| m.of(a)))
            .filter(|v| v.is_positive())
            .min()
    }

    fn separation_gap(&self) -> Rational {
        self.min_positive_value().unwrap_or_else(|| int(1))
    }
}

/// `E_i = ⋂_μ { (A, B) : μ(A △ B) < ε_i }` for thresholds with
/// `ε_{i+1} ≤ ε_i / 2`.
pub fn build_measure_filtration(
    fam: &MeasureFamily,
    thresholds: &[Rational],
) -> Result<UniformFiltration> {
    check_halving(thresholds)?;
    let n = fam.algebra_size();
    let levels = thresholds
        .iter()
        .map(|eps| {
            Relation::from_predicate(n, |a, b| {
                fam.measures
                    .iter()
                    .all(|m| &sym_diff_distance(m, a, b) < eps)
            })
        })
        .collect();
    UniformFiltration::new(levels)
}

/// The algebra as a space with the whole algebra bounded.
pub fn measure_space(fam: &MeasureFamily, thresholds: &[Rational]) -> Result<UlbSpace> {
    UlbSpace::new(
        build_measure_filtration(fam, thresholds)?,
        BornologyBasis::trivial(fam.algebra_size()),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    pub separates: bool,
    /// Finest level is the diagonal for thresholds `(δ, δ/2)`, with `δ` the
    /// least positive distance.
    pub hausdorff: bool,
    /// A pair no member separates, if any.
    pub witness: Option<(usize, usize)>,
}

impl SeparationReport {
    pub fn equivalence_holds(&self) -> bool {
        self.separates == self.hausdorff
    }
}

pub fn separation_check(fam: &MeasureFamily) -> Result<SeparationReport> {
    let n = fam.algebra_size();
    let witness = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .find(|&(a, b)| !fam.separates(a, b));
    let delta = fam.separation_gap();
    let f = build_measure_filtration(fam, &[delta.clone(), delta / int(2)])?;
    Ok(SeparationReport {
        separates: witness.is_none(),
        hausdorff: f.finest().is_diagonal(),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonArchReport {
    /// Least positive value; every value is `0` or at least this.
    pub gap: Rational,
    pub zero_one_valued: bool,
    pub idempotent_levels: Vec<bool>,
}

impl NonArchReport {
    pub fn passed(&self) -> bool {
        self.idempotent_levels.iter().all(|&b| b)
    }
}

/// Below the gap `δ` every level is the null-distance equivalence, so the
/// filtration with thresholds `(δ, δ/2, δ/4)` is non-Archimedean.
pub fn zero_one_non_arch(fam: &MeasureFamily) -> Result<NonArchReport> {
    let gap = fam.separation_gap();
    let thresholds = [gap.clone(), &gap / int(2), &gap / int(4)];
    let f = build_measure_filtration(fam, &thresholds)?;
    let zero_one_valued = fam.measures.iter().all(|m| {
        (0..fam.algebra_size()).all(|a| {
            let v = m.of(a);
            v.is_zero() || v == int(1)
        })
    });
    Ok(NonArchReport {
        gap,
        zero_one_valued,
        idempotent_levels: f.levels().iter().map(Relation::is_idempotent).collect(),
    })
}

/// An eventually periodic sequence of algebra elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSequence {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl PeriodicSequence {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidMeasure(
                "a periodic sequence needs a nonempty cycle".into(),
            ));
        }
        Ok(PeriodicSequence { prefix, cycle })
    }

    pub fn get(&self, k: usize) -> usize {
        match self.prefix.get(k) {
            Some(&a) => a,
            None => self.cycle[(k - self.prefix.len()) % self.cycle.len()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitOutcome {
    /// `⋂_n ⋃_{k≥n} A_k` and the distances from the cycle to it, all zero.
    Converges {
        limit: usize,
        tail_distances: Vec<Rational>,
    },
    /// Member `measure` keeps two cycle elements at a positive distance.
    Diverges {
        measure: usize,
        positions: (usize, usize),
        distance: Rational,
    },
}

impl LimitOutcome {
    pub fn verified(&self) -> bool {
        match self {
            LimitOutcome::Converges { tail_distances, .. } => {
                tail_distances.iter().all(Zero::is_zero)
            }
            LimitOutcome::Diverges { .. } => true,
        }
    }
}

/// For a periodic tail, `⋂_n ⋃_{k≥n} A_k` is the union of the cycle. The
/// sequence is Cauchy iff every member gives distance zero within the cycle.
pub fn cauchy_limit_formula(seq: &PeriodicSequence, fam: &MeasureFamily) -> Result<LimitOutcome> {
    let n = fam.algebra_size();
    if let Some(&a) = seq.prefix.iter().chain(&seq.cycle).find(|&&a| a >= n) {
        return Err(Error::IndexOutOfRange { index: a, size: n });
    }
    for (mi, m) in fam.measures.iter().enumerate() {
        for (i, &a) in seq.cycle.iter().enumerate() {
            for (j, &b) in seq.cycle.iter().enumerate().skip(i + 1) {
                let d = sym_diff_distance(m, a, b);
                if d.is_positive() {
                    return Ok(LimitOutcome::Diverges {
                        measure: mi,
                        positions: (i, j),
                        distance: d,
                    });
                }
            }
        }
    }
    let limit = seq.cycle.iter().fold(0, |acc, &a| acc | a);
    let tail_distances = fam
        .measures
        .iter()
        .flat_map(|m| {
            seq.cycle
                .iter()
                .map(move |&a| sym_diff_distance(m, a, limit))
        })
        .collect();
    Ok(LimitOutcome::Converges {
        limit,
        tail_distances,
    })
}

/// Map induced on the algebra by a permutation of the ground set.
pub fn induced_map(n: usize, perm: &CarrierMap) -> CarrierMap {
    let image = |a: usize| {
        (0..n)
            .filter(|&i| a >> i & 1 == 1)
            .fold(0, |acc, i| acc | 1 << perm.apply(i))
    };
    CarrierMap::permutation((0..1usize << n).map(image).collect()).expect("induced by a bijection")
}

/// Ground permutations preserving every member, acting on the algebra.
pub fn preserving_maps(fam: &MeasureFamily) -> MapSet {
    let n = fam.ground;
    let maps = CarrierMap::all_permutations(n)
        .into_iter()
        .filter(|p| {
            fam.measures
                .iter()
                .all(|m| (0..n).all(|i| m.weights[p.apply(i)] == m.weights[i]))
        })
        .map(|p| induced_map(n, &p))
        .collect();
    MapSet::new(maps).expect("the identity always preserves")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomReport {
    pub ground: usize,
    pub automorphisms: usize,
    /// Every order automorphism is induced by exactly one ground bijection.
    pub all_induced: bool,
}

/// Enumerates the inclusion-order automorphisms of the algebra over
/// `{0, …, n−1}` and checks each permutes atoms and is induced by that
/// permutation.
pub fn atom_recovery(n: usize) -> Result<AtomReport> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidMeasure(format!(
            "atom recovery enumerates ground sets of size 1..=3, got {n}"
        )));
    }
    let size = 1usize << n;
    let mut automorphisms = 0;
    let mut all_induced = true;
    let mut image = vec![usize::MAX; size];
    let mut used = vec![false; size];
    extend_order_map(size, 0, &mut image, &mut used, &mut |phi| {
        automorphisms += 1;
        let atoms: Option<Vec<usize>> = (0..n)
            .map(|i| {
                let a = phi[1 << i];
                (a.count_ones() == 1).then(|| a.trailing_zeros() as usize)
            })
            .collect();
        let induced = atoms.is_some_and(|atoms| {
            let perm = CarrierMap::permutation(atoms);
            perm.is_ok_and(|p| induced_map(n, &p).table() == phi)
        });
        all_induced &= induced;
    });
    Ok(AtomReport {
        ground: n,
        automorphisms,
        all_induced,
    })
}

/// Backtracks over bijections `φ` of `{0, …, size−1}` with
/// `A ⊆ B ⇔ φ(A) ⊆ φ(B)`, checked against earlier assignments.
fn extend_order_map(
    size: usize,
    next: usize,
    image: &mut [usize],
    used: &mut [bool],
    found: &mut impl FnMut(&[usize]),
) {
    if next == size {
        found(image);
        return;
    }
    let subset = |a: usize, b: usize| a & b == a;
    for y in 0..size {
        if used[y]
            || !(0..next).all(|a| {
                subset(a, next) == subset(image[a], y) && subset(next, a) == subset(y, image[a])
            })
        {
            continue;
        }
        image[next] = y;
        used[y] = true;
        extend_order_map(size, next + 1, image, used, found);
        used[y] = false;
    }
    image[next] = usize::MAX;
}
