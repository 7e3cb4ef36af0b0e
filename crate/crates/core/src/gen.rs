//! Seeded random instances for suites and tests.
//!
//! Every generator draws from a caller-supplied RNG, so a fixed seed gives
//! byte-identical runs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::born::BornologyBasis;
use crate::qorder::PlBijection;
use crate::rational::{int, ratio};
use crate::relalg::{Relation, Subset};
use crate::sigma::{Measure, MeasureFamily, PeriodicSequence};
use crate::symz::AffinePerm;
use crate::ulb::{CarrierMap, UlbSpace};
use crate::unif::UniformFiltration;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn relation<R: Rng>(rng: &mut R, n: usize) -> Relation {
    Relation::from_predicate(n, |_, _| rng.gen_bool(0.5))
}

pub fn subset<R: Rng>(rng: &mut R, n: usize) -> Subset {
    Subset::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5))).expect("in range")
}

pub fn map<R: Rng>(rng: &mut R, n: usize) -> CarrierMap {
    CarrierMap::new((0..n).map(|_| rng.gen_range(0..n)).collect()).expect("in range")
}

/// Random sets plus singletons, closed under unions of overlapping sets and
/// reduced to the maximal ones.
pub fn bornology<R: Rng>(rng: &mut R, n: usize) -> BornologyBasis {
    let mut sets: Vec<Subset> = (0..n).map(|x| Subset::singleton(n, x)).collect();
    for _ in 0..rng.gen_range(0..=n) {
        let s = subset(rng, n);
        if !s.is_empty() {
            sets.push(s);
        }
    }
    loop {
        let merge = (0..sets.len())
            .flat_map(|i| (i + 1..sets.len()).map(move |j| (i, j)))
            .find(|&(i, j)| sets[i].intersects(&sets[j]));
        let Some((i, j)) = merge else { break };
        let union = sets[i].union(&sets[j]);
        sets.remove(j);
        sets[i] = union;
    }
    sets.sort();
    BornologyBasis::new(n, sets).expect("nonempty carrier")
}

/// A chain of `depth + 1` levels ending in the diagonal, built from the
/// finest level up: each level adds random symmetric pairs to the square
/// of the one below.
pub fn filtration<R: Rng>(rng: &mut R, n: usize, depth: usize) -> UniformFiltration {
    let mut levels = vec![Relation::diagonal(n)];
    for _ in 0..depth {
        let below = levels.last().expect("nonempty");
        let mut level = below.compose(below).expect("same carrier");
        let p = rng.gen_range(0.0..0.4);
        for x in 0..n {
            for y in x + 1..n {
                if rng.gen_bool(p) {
                    level.insert(x, y);
                    level.insert(y, x);
                }
            }
        }
        levels.push(level);
    }
    levels.reverse();
    UniformFiltration::new(levels).expect("valid by construction")
}

pub fn ulb_space<R: Rng>(rng: &mut R, n: usize, depth: usize) -> UlbSpace {
    let f = filtration(rng, n, depth);
    UlbSpace::new(f, bornology(rng, n)).expect("valid by construction")
}

fn small_rational<R: Rng>(rng: &mut R, range: i64) -> crate::rational::Rational {
    ratio(rng.gen_range(-range * 4..=range * 4), rng.gen_range(1..=4))
}

/// An affine map composed with up to three bumps at random places.
pub fn pl_bijection<R: Rng>(rng: &mut R) -> PlBijection {
    let slopes = [ratio(1, 2), int(1), int(1), ratio(3, 2), int(2)];
    let slope = slopes.choose(rng).expect("nonempty").clone();
    let offset = if rng.gen_bool(0.5) {
        int(0)
    } else {
        small_rational(rng, 2)
    };
    let mut g = PlBijection::affine(slope, offset).expect("positive slope");
    for _ in 0..rng.gen_range(0..=3) {
        let a = small_rational(rng, 5);
        let b = &a + ratio(rng.gen_range(1..=8), rng.gen_range(1..=3));
        let bump = PlBijection::bump(&a, &b).expect("a < b");
        g = if rng.gen_bool(0.5) {
            g.compose(&bump)
        } else {
            bump.compose(&g.inverse())
        };
    }
    g
}

/// Sign, offset in `[−3, 3]` and a window radius up to `max_radius`.
pub fn affine_perm<R: Rng>(rng: &mut R, max_radius: i64) -> AffinePerm {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let offset = rng.gen_range(-3..=3);
    let n = rng.gen_range(0..=max_radius);
    let mut patch: Vec<i64> = (offset - n..=offset + n).collect();
    patch.shuffle(rng);
    AffinePerm::new(sign, offset, Some(n), patch).expect("patch fills the gap")
}

/// One to three measures on `n` points with weights from a small set that
/// includes zero, so some families fail to separate.
pub fn measure_family<R: Rng>(rng: &mut R, n: usize) -> MeasureFamily {
    let choices = [int(0), int(0), ratio(1, 2), int(1), int(2), int(3)];
    let measures = (0..rng.gen_range(1..=3))
        .map(|_| {
            Measure::new(
                (0..n)
                    .map(|_| choices.choose(rng).expect("nonempty").clone())
                    .collect(),
            )
        })
        .collect::<crate::Result<_>>()
        .expect("valid weights");
    MeasureFamily::new(measures).expect("nonempty")
}

fn null_points(fam: &MeasureFamily) -> Vec<usize> {
    use num_traits::Zero;
    (0..fam.ground())
        .filter(|&i| fam.measures().iter().all(|m| m.weights()[i].is_zero()))
        .collect()
}

/// A sequence whose cycle stays within one null-distance class.
pub fn cauchy_sequence<R: Rng>(rng: &mut R, fam: &MeasureFamily) -> PeriodicSequence {
    let size = fam.algebra_size();
    let nulls = null_points(fam);
    let base = rng.gen_range(0..size);
    let prefix = (0..rng.gen_range(0..4))
        .map(|_| rng.gen_range(0..size))
        .collect();
    let cycle = (0..rng.gen_range(1..4))
        .map(|_| {
            nulls
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .fold(base, |a, &i| a ^ (1 << i))
        })
        .collect();
    PeriodicSequence::new(prefix, cycle).expect("nonempty cycle")
}

/// A sequence alternating across a point of positive mass, if the family
/// has one.
pub fn non_cauchy_sequence<R: Rng>(rng: &mut R, fam: &MeasureFamily) -> Option<PeriodicSequence> {
    let nulls = null_points(fam);
    let heavy: Vec<usize> = (0..fam.ground()).filter(|i| !nulls.contains(i)).collect();
    let &p = heavy.choose(rng)?;
    let base = rng.gen_range(0..fam.algebra_size());
    let prefix = (0..rng.gen_range(0..3))
        .map(|_| rng.gen_range(0..fam.algebra_size()))
        .collect();
    Some(PeriodicSequence::new(prefix, vec![base, base ^ (1 << p)]).expect("nonempty cycle"))
}
