//! Bornologies given by finite bases, and the coarse structure they generate.
//!
//! A set is bounded iff it lies inside some basis set. The generated coarse
//! structure consists of the subsets of `Δ ∪ A_1×A_1 ∪ … ∪ A_n×A_n` for
//! bounded `A_i`; with a finite basis its largest member is
//! `Δ ∪ ⋃_{B basis} B×B`, so membership reduces to a pairwise test.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::relalg::{Relation, Subset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BornologyBasis {
    size: usize,
    sets: Vec<Subset>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BornologyViolation {
    /// (B1): the singleton `{point}` is in no basis set.
    MissingSingleton { point: usize },
    /// (B3): basis sets `a` and `b` meet but their union is unbounded.
    UnboundedUnion { a: usize, b: usize },
}

impl fmt::Display for BornologyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BornologyViolation::MissingSingleton { point } => {
                write!(f, "singleton {{{point}}} unbounded")
            }
            BornologyViolation::UnboundedUnion { a, b } => {
                write!(
                    f,
                    "basis sets {a} and {b} meet but their union is unbounded"
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BornologyReport {
    pub valid: bool,
    pub connected: bool,
    pub violations: Vec<BornologyViolation>,
}

/// Result of comparing bounded sets with the sets `S` such that `S × S` is coarse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTripReport {
    pub subsets_checked: usize,
    pub mismatch: Option<Subset>,
}

impl RoundTripReport {
    pub fn agrees(&self) -> bool {
        self.mismatch.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoarseAxiom {
    C1Diagonal,
    C2Inverse,
    C3Downward,
    C4Union,
    C5Composition,
}

impl fmt::Display for CoarseAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoarseAxiom::C1Diagonal => "C1",
            CoarseAxiom::C2Inverse => "C2",
            CoarseAxiom::C3Downward => "C3",
            CoarseAxiom::C4Union => "C4",
            CoarseAxiom::C5Composition => "C5",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseFailure {
    pub axiom: CoarseAxiom,
    pub left: Relation,
    pub right: Option<Relation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseAxiomsReport {
    pub exhaustive: bool,
    pub checks: usize,
    pub failures: Vec<CoarseFailure>,
    /// Every doubleton is bounded, so every single pair is coarse.
    pub coarsely_connected: bool,
    pub bornology_connected: bool,
}

impl CoarseAxiomsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.coarsely_connected == self.bornology_connected
    }
}

impl BornologyBasis {
    pub fn new(size: usize, sets: Vec<Subset>) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        if sets.is_empty() {
            return Err(Error::InvalidBornology("empty basis".into()));
        }
        for s in &sets {
            if s.size() != size {
                return Err(Error::CarrierMismatch {
                    left: size,
                    right: s.size(),
                });
            }
        }
        Ok(BornologyBasis { size, sets })
    }

    pub fn from_index_lists(size: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| Subset::from_indices(size, l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        BornologyBasis::new(size, sets)
    }

    /// Basis `{X}`: every set is bounded.
    pub fn trivial(size: usize) -> Self {
        BornologyBasis {
            size,
            sets: vec![Subset::full(size)],
        }
    }

    /// Basis of singletons: the finite bornology of a finite set's points only.
    pub fn singletons(size: usize) -> Self {
        BornologyBasis {
            size,
            sets: (0..size).map(|x| Subset::singleton(size, x)).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn is_bounded(&self, s: &Subset) -> bool {
        s.is_empty() || self.sets.iter().any(|b| s.is_subset(b))
    }

    pub fn validate(&self) -> BornologyReport {
        let mut violations = Vec::new();
        for x in 0..self.size {
            if !self.sets.iter().any(|b| b.contains(x)) {
                violations.push(BornologyViolation::MissingSingleton { point: x });
            }
        }
        let mut connected = true;
        for i in 0..self.sets.len() {
            for j in i + 1..self.sets.len() {
                let (a, b) = (&self.sets[i], &self.sets[j]);
                let bounded = self.is_bounded(&a.union(b));
                connected &= bounded;
                if a.intersects(b) && !bounded {
                    violations.push(BornologyViolation::UnboundedUnion { a: i, b: j });
                }
            }
        }
        BornologyReport {
            valid: violations.is_empty(),
            connected,
            violations,
        }
    }

    /// The generated coarse structure; requires a valid bornology.
    pub fn coarse(&self) -> Result<CoarseStructure<'_>> {
        match self.validate().violations.first() {
            Some(v) => Err(Error::InvalidBornology(v.to_string())),
            None => Ok(CoarseStructure { basis: self }),
        }
    }

    pub fn coarse_membership(&self, r: &Relation) -> Result<bool> {
        self.coarse()?.contains(r)
    }

    /// Sweeps every subset `S` and compares `S × S` coarse with `S` bounded.
    pub fn bounded_round_trip(&self) -> Result<RoundTripReport> {
        let coarse = self.coarse()?;
        let mut checked = 0;
        for s in Subset::all(self.size) {
            checked += 1;
            let square = Relation::product(&s, &s);
            if coarse.contains(&square)? != self.is_bounded(&s) {
                return Ok(RoundTripReport {
                    subsets_checked: checked,
                    mismatch: Some(s),
                });
            }
        }
        Ok(RoundTripReport {
            subsets_checked: checked,
            mismatch: None,
        })
    }

    /// Checks (C1)–(C5) for the generated coarse structure: exhaustively
    /// over all relations when the carrier has at most 3 points, otherwise
    /// on `samples` random relation pairs.
    pub fn coarse_axioms_suite<R: Rng>(
        &self,
        rng: &mut R,
        samples: usize,
    ) -> Result<CoarseAxiomsReport> {
        let coarse = self.coarse()?;
        let n = self.size;
        let mut failures = Vec::new();
        let mut checks = 0;

        let diag = Relation::diagonal(n);
        checks += 1;
        if !coarse.contains(&diag)? {
            failures.push(CoarseFailure {
                axiom: CoarseAxiom::C1Diagonal,
                left: diag,
                right: None,
            });
        }

        let exhaustive = n <= 3;
        if exhaustive {
            let all: Vec<Relation> = (0..1u64 << (n * n))
                .map(|m| Relation::from_mask(n, m))
                .collect();
            let member: Vec<bool> = all
                .iter()
                .map(|r| coarse.contains(r))
                .collect::<Result<_>>()?;
            for (i, r) in all.iter().enumerate() {
                checks += 1;
                if member[i] && !coarse.contains(&r.inverse())? {
                    failures.push(CoarseFailure {
                        axiom: CoarseAxiom::C2Inverse,
                        left: r.clone(),
                        right: None,
                    });
                }
                for (j, s) in all.iter().enumerate() {
                    checks += 3;
                    coarse.check_pair(r, member[i], s, member[j], &mut failures)?;
                }
            }
        } else {
            let maximal = coarse.maximal();
            for _ in 0..samples {
                let r = sample_relation(rng, &maximal);
                let s = sample_relation(rng, &maximal);
                let (mr, ms) = (coarse.contains(&r)?, coarse.contains(&s)?);
                checks += 4;
                if mr && !coarse.contains(&r.inverse())? {
                    failures.push(CoarseFailure {
                        axiom: CoarseAxiom::C2Inverse,
                        left: r.clone(),
                        right: None,
                    });
                }
                coarse.check_pair(&r, mr, &s, ms, &mut failures)?;
            }
        }

        let coarsely_connected = (0..n).all(|x| {
            (0..n).all(|y| {
                coarse
                    .contains(&Relation::from_pairs(n, [(x, y)]).expect("in range"))
                    .unwrap_or(false)
            })
        });
        Ok(CoarseAxiomsReport {
            exhaustive,
            checks,
            failures,
            coarsely_connected,
            bornology_connected: self.validate().connected,
        })
    }
}

/// Half the samples are random subsets of the maximal coarse entourage, so
/// that the closure axioms are exercised on members, not only vacuously.
fn sample_relation<R: Rng>(rng: &mut R, maximal: &Relation) -> Relation {
    let n = maximal.size();
    let inside = rng.gen_bool(0.5);
    Relation::from_predicate(n, |x, y| {
        let keep = rng.gen_bool(0.5);
        if inside {
            keep && maximal.contains(x, y)
        } else {
            keep
        }
    })
}

/// Membership oracle for the coarse structure generated by a valid bornology.
#[derive(Clone, Copy, Debug)]
pub struct CoarseStructure<'a> {
    basis: &'a BornologyBasis,
}

impl CoarseStructure<'_> {
    /// Every off-diagonal pair of `r` spans a bounded doubleton.
    pub fn contains(&self, r: &Relation) -> Result<bool> {
        let n = self.basis.size;
        if r.size() != n {
            return Err(Error::CarrierMismatch {
                left: n,
                right: r.size(),
            });
        }
        Ok(r.pairs().filter(|(x, y)| x != y).all(|(x, y)| {
            self.basis
                .sets
                .iter()
                .any(|b| b.contains(x) && b.contains(y))
        }))
    }

    /// `Δ ∪ ⋃_{B basis} B × B`.
    pub fn maximal(&self) -> Relation {
        let n = self.basis.size;
        let mut m = Relation::diagonal(n);
        for b in &self.basis.sets {
            m = m.union(&Relation::product(b, b)).expect("same carrier");
        }
        m
    }

    fn check_pair(
        &self,
        r: &Relation,
        r_in: bool,
        s: &Relation,
        s_in: bool,
        failures: &mut Vec<CoarseFailure>,
    ) -> Result<()> {
        let fail = |axiom| CoarseFailure {
            axiom,
            left: r.clone(),
            right: Some(s.clone()),
        };
        if s_in && r.is_subset(s) && !r_in {
            failures.push(fail(CoarseAxiom::C3Downward));
        }
        if r_in && s_in {
            if !self.contains(&r.union(s)?)? {
                failures.push(fail(CoarseAxiom::C4Union));
            }
            if !self.contains(&r.compose(s)?)? {
                failures.push(fail(CoarseAxiom::C5Composition));
            }
        }
        Ok(())
    }
}
