//! Truncated uniform structures.
//!
//! A [`UniformFiltration`] is a descending chain `E_0 ⊇ E_1 ⊇ … ⊇ E_k` of
//! reflexive symmetric relations with `E_{i+1} ∘ E_{i+1} ⊆ E_i`. It stands
//! for the first `k + 1` members of a countable basis of entourages; the
//! finest level `E_k` carries no half-step obligation of its own.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::relalg::{Relation, Subset};

/// A rational pseudometric on a finite carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoMetric {
    dist: Vec<Vec<Rational>>,
}

impl PseudoMetric {
    /// Validates symmetry, zero diagonal, nonnegativity and the triangle inequality.
    pub fn new(dist: Vec<Vec<Rational>>) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        for (x, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAPseudometric(format!(
                    "row {x} has length {}",
                    row.len()
                )));
            }
            if !row[x].is_zero() {
                return Err(Error::NotAPseudometric(format!("d({x},{x}) ≠ 0")));
            }
            for y in 0..n {
                if row[y].is_negative() {
                    return Err(Error::NotAPseudometric(format!("d({x},{y}) < 0")));
                }
                if row[y] != dist[y][x] {
                    return Err(Error::NotAPseudometric(format!("d({x},{y}) ≠ d({y},{x})")));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if dist[x][y] > &dist[x][z] + &dist[z][y] {
                        return Err(Error::NotAPseudometric(format!(
                            "triangle inequality fails at ({x},{y}) via {z}"
                        )));
                    }
                }
            }
        }
        Ok(PseudoMetric { dist })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Rational) -> Result<Self> {
        PseudoMetric::new((0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect())
    }

    /// `d(i, j) = |pos_i − pos_j|` for integer positions on a line.
    pub fn line(positions: &[i64]) -> Result<Self> {
        PseudoMetric::from_fn(positions.len(), |x, y| {
            rational::int((positions[x] - positions[y]).abs())
        })
    }

    pub fn size(&self) -> usize {
        self.dist.len()
    }

    pub fn get(&self, x: usize, y: usize) -> &Rational {
        &self.dist[x][y]
    }

    pub fn diameter(&self, a: &Subset) -> Rational {
        let mut best = rational::zero();
        for x in a.iter() {
            for y in a.iter() {
                if self.dist[x][y] > best {
                    best = self.dist[x][y].clone();
                }
            }
        }
        best
    }

    /// `E_α = { (x, y) : d(x, y) < α }`.
    pub fn ball_relation(&self, alpha: &Rational) -> Relation {
        Relation::from_predicate(self.size(), |x, y| &self.dist[x][y] < alpha)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiltrationViolation {
    NotReflexive {
        level: usize,
    },
    NotSymmetric {
        level: usize,
    },
    NotNested {
        level: usize,
    },
    /// `E_{level+1} ∘ E_{level+1} ⊄ E_level`, witnessed by a pair.
    HalfStep {
        level: usize,
        pair: (usize, usize),
    },
}

impl fmt::Display for FiltrationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationViolation::NotReflexive { level } => write!(f, "level {level} not reflexive"),
            FiltrationViolation::NotSymmetric { level } => write!(f, "level {level} not symmetric"),
            FiltrationViolation::NotNested { level } => {
                write!(f, "level {} not contained in level {level}", level + 1)
            }
            FiltrationViolation::HalfStep { level, pair } => write!(
                f,
                "half-step fails below level {level}: ({},{}) in E_{}∘E_{}",
                pair.0,
                pair.1,
                level + 1,
                level + 1
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationReport {
    pub valid: bool,
    pub hausdorff_at_resolution: bool,
    pub violations: Vec<FiltrationViolation>,
}

/// Outcome of comparing two filtrations on the same carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Refinement {
    /// The first filtration is strictly finer.
    Refines,
    /// The second filtration is strictly finer.
    RefinedBy,
    Equivalent,
    Incomparable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformFiltration {
    size: usize,
    levels: Vec<Relation>,
}

impl UniformFiltration {
    /// Builds a chain without checking the uniform axioms; see [`validate`](Self::validate).
    pub fn new(levels: Vec<Relation>) -> Result<Self> {
        let size = levels
            .first()
            .map(Relation::size)
            .ok_or_else(|| Error::InvalidFiltration("no levels".into()))?;
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        for l in &levels {
            if l.size() != size {
                return Err(Error::CarrierMismatch {
                    left: size,
                    right: l.size(),
                });
            }
        }
        Ok(UniformFiltration { size, levels })
    }

    /// Builds a chain and rejects it on its first violation.
    pub fn checked(levels: Vec<Relation>) -> Result<Self> {
        let f = UniformFiltration::new(levels)?;
        match f.validate().violations.first() {
            Some(v) => Err(Error::InvalidFiltration(v.to_string())),
            None => Ok(f),
        }
    }

    /// `E_i = { (x, y) : d(x, y) < α_i }` for scales with `α_{i+1} ≤ α_i / 2`.
    pub fn from_metric(metric: &PseudoMetric, scales: &[Rational]) -> Result<Self> {
        check_halving(scales)?;
        let levels = scales.iter().map(|a| metric.ball_relation(a)).collect();
        UniformFiltration::new(levels)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Index `k` of the finest level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> &Relation {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[Relation] {
        &self.levels
    }

    pub fn finest(&self) -> &Relation {
        &self.levels[self.depth()]
    }

    pub fn validate(&self) -> FiltrationReport {
        let mut violations = Vec::new();
        for (i, e) in self.levels.iter().enumerate() {
            if !e.is_reflexive() {
                violations.push(FiltrationViolation::NotReflexive { level: i });
            }
            if !e.is_symmetric() {
                violations.push(FiltrationViolation::NotSymmetric { level: i });
            }
        }
        for i in 0..self.depth() {
            let (upper, lower) = (&self.levels[i], &self.levels[i + 1]);
            if !lower.is_subset(upper) {
                violations.push(FiltrationViolation::NotNested { level: i });
            }
            let square = lower.compose(lower).expect("same carrier");
            let bad = square.pairs().find(|&(x, y)| !upper.contains(x, y));
            if let Some(pair) = bad {
                violations.push(FiltrationViolation::HalfStep { level: i, pair });
            }
        }
        FiltrationReport {
            valid: violations.is_empty(),
            hausdorff_at_resolution: self.finest().is_diagonal(),
            violations,
        }
    }

    /// `⋂_i E_i[A]`, which by nesting is `E_k[A]`.
    pub fn closure(&self, a: &Subset) -> Result<Subset> {
        self.finest().image(a)
    }

    pub fn is_non_archimedean(&self) -> bool {
        self.levels.iter().all(Relation::is_idempotent)
    }

    /// Whether the chain is a genuine basis on its own: the finest level is
    /// an equivalence relation, so repeating it forever satisfies (U6).
    pub fn is_closed_at_finest(&self) -> bool {
        self.finest().is_idempotent()
    }

    /// Whether every level of `other` contains some level of `self`.
    pub fn finer_than(&self, other: &UniformFiltration) -> Result<bool> {
        if self.size != other.size {
            return Err(Error::CarrierMismatch {
                left: self.size,
                right: other.size,
            });
        }
        // levels are nested, so it suffices to compare finest levels
        Ok(self.finest().is_subset(other.finest()))
    }

    pub fn refines(&self, other: &UniformFiltration) -> Result<Refinement> {
        let forward = self.finer_than(other)?;
        let backward = other.finer_than(self)?;
        Ok(match (forward, backward) {
            (true, true) => Refinement::Equivalent,
            (true, false) => Refinement::Refines,
            (false, true) => Refinement::RefinedBy,
            (false, false) => Refinement::Incomparable,
        })
    }
}

/// Scales must be positive with `α_{i+1} ≤ α_i / 2`.
pub fn check_halving(scales: &[Rational]) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::InvalidFiltration("no scales".into()));
    }
    if !scales[0].is_positive() {
        return Err(Error::ScaleRatio(0));
    }
    for i in 1..scales.len() {
        let half = &scales[i - 1] / rational::int(2);
        if !scales[i].is_positive() || scales[i] > half {
            return Err(Error::ScaleRatio(i));
        }
    }
    Ok(())
}
