//! Piecewise-affine order automorphisms of the rationals and the fixator
//! topologies of bounded intervals, upper rays and lower rays.
//!
//! The uniform structure on `Q` is discrete, so the basic identity ball of a
//! bounded set `S` is its pointwise fixator. Distinct topologies are
//! separated by explicit bumps.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, int, ratio, Rational};

/// An increasing piecewise-affine bijection of `Q` with rational data.
///
/// Piece `j` is `x ↦ slope·x + offset` on `[b_j, b_{j+1}]`, where the first
/// piece starts at `-∞` and the last ends at `+∞`. Adjacent pieces always
/// differ, so equal maps have equal representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlBijection {
    breakpoints: Vec<Rational>,
    pieces: Vec<(Rational, Rational)>,
}

impl PlBijection {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<(Rational, Rational)>) -> Result<Self> {
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidPl(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                pieces.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPl(
                "breakpoints must increase strictly".into(),
            ));
        }
        if let Some((p, _)) = pieces.iter().find(|(p, _)| !p.is_positive()) {
            return Err(Error::InvalidPl(format!(
                "slope {} is not positive",
                rational::format(p)
            )));
        }
        for (j, b) in breakpoints.iter().enumerate() {
            let (p0, q0) = &pieces[j];
            let (p1, q1) = &pieces[j + 1];
            if p0 * b + q0 != p1 * b + q1 {
                return Err(Error::InvalidPl(format!(
                    "discontinuous at {}",
                    rational::format(b)
                )));
            }
        }
        Ok(PlBijection {
            breakpoints,
            pieces,
        }
        .canonical())
    }

    pub fn identity() -> Self {
        PlBijection::affine(Rational::one(), Rational::zero()).expect("slope 1")
    }

    pub fn affine(slope: Rational, offset: Rational) -> Result<Self> {
        PlBijection::new(Vec::new(), vec![(slope, offset)])
    }

    /// Identity outside `[a, b]`; inside, slope 2 up to `a + (b−a)/3`, then
    /// slope 1/2. Moves every interior point.
    pub fn bump(a: &Rational, b: &Rational) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidPl("bump needs a < b".into()));
        }
        let mid = a + (b - a) / int(3);
        PlBijection::new(
            vec![a.clone(), mid, b.clone()],
            vec![
                (int(1), int(0)),
                (int(2), -a),
                (ratio(1, 2), b / int(2)),
                (int(1), int(0)),
            ],
        )
    }

    fn canonical(mut self) -> Self {
        let mut j = 0;
        while j < self.breakpoints.len() {
            if self.pieces[j] == self.pieces[j + 1] {
                self.breakpoints.remove(j);
                self.pieces.remove(j + 1);
            } else {
                j += 1;
            }
        }
        self
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[(Rational, Rational)] {
        &self.pieces
    }

    pub fn is_identity(&self) -> bool {
        self.breakpoints.is_empty() && self.pieces[0].0.is_one() && self.pieces[0].1.is_zero()
    }

    fn piece_index(&self, x: &Rational) -> usize {
        self.breakpoints.partition_point(|b| b < x)
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        let (p, q) = &self.pieces[self.piece_index(x)];
        p * x + q
    }

    /// `self ∘ other`, so `x ↦ self(other(x))`.
    pub fn compose(&self, other: &PlBijection) -> PlBijection {
        let inv = other.inverse();
        let mut cuts: Vec<Rational> = other.breakpoints.clone();
        cuts.extend(self.breakpoints.iter().map(|b| inv.apply(b)));
        cuts.sort();
        cuts.dedup();
        let mut pieces = Vec::with_capacity(cuts.len() + 1);
        for j in 0..=cuts.len() {
            let sample = interior_point(&cuts, j);
            let (p2, q2) = &other.pieces[other.piece_index(&sample)];
            let (p1, q1) = &self.pieces[self.piece_index(&other.apply(&sample))];
            pieces.push((p1 * p2, p1 * q2 + q1));
        }
        PlBijection {
            breakpoints: cuts,
            pieces,
        }
        .canonical()
    }

    pub fn inverse(&self) -> PlBijection {
        PlBijection {
            breakpoints: self.breakpoints.iter().map(|b| self.apply(b)).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|(p, q)| (p.recip(), -q / p))
                .collect(),
        }
    }

    /// Parses `(-inf, p, q) (b, p, q) …`: each triple gives the left end of
    /// a piece with its slope and offset.
    pub fn parse(text: &str) -> Result<Self> {
        let mut breakpoints = Vec::new();
        let mut pieces = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| {
                    Error::Parse(format!("expected `(start, slope, offset)` at `{rest}`"))
                })?;
            let fields: Vec<&str> = body.0.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!(
                    "piece `({})` needs three fields",
                    body.0
                )));
            }
            if pieces.is_empty() {
                if fields[0] != "-inf" {
                    return Err(Error::Parse("the first piece must start at -inf".into()));
                }
            } else {
                breakpoints.push(rational::parse(fields[0])?);
            }
            pieces.push((rational::parse(fields[1])?, rational::parse(fields[2])?));
            rest = body.1.trim_start();
        }
        if pieces.is_empty() {
            return Err(Error::Parse("empty piecewise map".into()));
        }
        PlBijection::new(breakpoints, pieces)
    }
}

/// A point strictly inside the `j`-th interval cut out by sorted `cuts`.
fn interior_point(cuts: &[Rational], j: usize) -> Rational {
    match (j.checked_sub(1).map(|i| &cuts[i]), cuts.get(j)) {
        (None, None) => int(0),
        (None, Some(hi)) => hi - int(1),
        (Some(lo), None) => lo + int(1),
        (Some(lo), Some(hi)) => (lo + hi) / int(2),
    }
}

impl fmt::Display for PlBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, (p, q)) in self.pieces.iter().enumerate() {
            if j > 0 {
                f.write_str(" ")?;
            }
            let start = if j == 0 {
                "-inf".to_string()
            } else {
                rational::format(&self.breakpoints[j - 1])
            };
            write!(
                f,
                "({start}, {}, {})",
                rational::format(p),
                rational::format(q)
            )?;
        }
        Ok(())
    }
}

impl fmt::Debug for PlBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RayKind {
    /// Bounded intervals `[a, b]`.
    TwoSided,
    /// Upper rays `[a, ∞)`.
    UpperRay,
    /// Lower rays `(−∞, b]`.
    LowerRay,
}

impl RayKind {
    pub const ALL: [RayKind; 3] = [RayKind::TwoSided, RayKind::UpperRay, RayKind::LowerRay];
}

impl fmt::Display for RayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RayKind::TwoSided => "two-sided",
            RayKind::UpperRay => "upper-ray",
            RayKind::LowerRay => "lower-ray",
        })
    }
}

/// A closed interval of `Q`; a missing end is infinite.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RaySet {
    lo: Option<Rational>,
    hi: Option<Rational>,
}

impl RaySet {
    pub fn two_sided(a: Rational, b: Rational) -> Result<Self> {
        if a > b {
            return Err(Error::InvalidPl(format!(
                "empty interval [{}, {}]",
                rational::format(&a),
                rational::format(&b)
            )));
        }
        Ok(RaySet {
            lo: Some(a),
            hi: Some(b),
        })
    }

    pub fn upper(a: Rational) -> Self {
        RaySet {
            lo: Some(a),
            hi: None,
        }
    }

    pub fn lower(b: Rational) -> Self {
        RaySet {
            lo: None,
            hi: Some(b),
        }
    }

    pub fn kind(&self) -> RayKind {
        match (&self.lo, &self.hi) {
            (Some(_), None) => RayKind::UpperRay,
            (None, Some(_)) => RayKind::LowerRay,
            _ => RayKind::TwoSided,
        }
    }

    pub fn lo(&self) -> Option<&Rational> {
        self.lo.as_ref()
    }

    pub fn hi(&self) -> Option<&Rational> {
        self.hi.as_ref()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|a| a <= x) && self.hi.as_ref().is_none_or(|b| x <= b)
    }

    pub fn is_subset(&self, other: &RaySet) -> bool {
        let lo_ok = match (&other.lo, &self.lo) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(c)) => a <= c,
        };
        let hi_ok = match (&other.hi, &self.hi) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(b), Some(d)) => d <= b,
        };
        lo_ok && hi_ok
    }
}

impl fmt::Display for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => write!(f, "[{}, {}]", rational::format(a), rational::format(b)),
            (Some(a), None) => write!(f, "[{}, inf)", rational::format(a)),
            (None, Some(b)) => write!(f, "(-inf, {}]", rational::format(b)),
            (None, None) => f.write_str("(-inf, inf)"),
        }
    }
}

impl fmt::Debug for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Whether every piece of `g` meeting `s` is the identity on the overlap.
pub fn fixes_pointwise(g: &PlBijection, s: &RaySet) -> bool {
    (0..g.pieces.len()).all(|j| {
        let lo = max_lower(j.checked_sub(1).map(|i| &g.breakpoints[i]), s.lo.as_ref());
        let hi = min_upper(g.breakpoints.get(j), s.hi.as_ref());
        let (p, q) = &g.pieces[j];
        match (lo, hi) {
            (Some(l), Some(h)) => match l.cmp(h) {
                Ordering::Greater => true,
                Ordering::Equal => &(p * l + q) == l,
                Ordering::Less => p.is_one() && q.is_zero(),
            },
            _ => p.is_one() && q.is_zero(),
        }
    })
}

fn max_lower<'a>(a: Option<&'a Rational>, b: Option<&'a Rational>) -> Option<&'a Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    }
}

fn min_upper<'a>(a: Option<&'a Rational>, b: Option<&'a Rational>) -> Option<&'a Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// A non-identity element fixing `s` pointwise: a bump on an interval
/// beside `s`.
pub fn non_discrete_witness(s: &RaySet) -> PlBijection {
    let g = match (&s.lo, &s.hi) {
        (_, Some(b)) => PlBijection::bump(&(b + int(1)), &(b + int(2))),
        (Some(a), None) => PlBijection::bump(&(a - int(3)), &(a - int(2))),
        (None, None) => unreachable!("basis sets are proper subsets of Q"),
    }
    .expect("unit-length bump");
    debug_assert!(fixes_pointwise(&g, s) && !g.is_identity());
    g
}

/// A bump fixing `fixed` pointwise while moving a point of `moved`, placed
/// just right or just left of all finite endpoints involved.
pub fn escaping_bump(fixed: &RaySet, moved: &RaySet) -> Option<PlBijection> {
    let ends = [&fixed.lo, &fixed.hi, &moved.lo, &moved.hi];
    let finite = ends
        .iter()
        .filter_map(|e| e.as_ref())
        .chain(std::iter::once(&int(0)))
        .cloned()
        .collect::<Vec<_>>();
    let top = finite.iter().max().expect("nonempty").clone();
    let bottom = finite.iter().min().expect("nonempty").clone();
    let candidates = [
        (&top + int(1), &top + int(2)),
        (&bottom - int(2), &bottom - int(1)),
    ];
    candidates.into_iter().find_map(|(a, b)| {
        let g = PlBijection::bump(&a, &b).ok()?;
        (fixes_pointwise(&g, fixed) && !fixes_pointwise(&g, moved)).then_some(g)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distinctness {
    /// The fixator of `set` contains no fixator of a set of the first kind:
    /// for each endpoint case, `g` fixes that set and moves a point of
    /// `set`.
    Escapes {
        set: RaySet,
        cases: Vec<(RaySet, PlBijection)>,
        verified: bool,
    },
    /// Every fixator of the second kind contains one of the first kind via
    /// `S_B ⊆ S_A`; `reversed` shows the inclusion of topologies is strict.
    Contained {
        inclusions: Vec<(RaySet, RaySet)>,
        reversed: Box<Distinctness>,
    },
}

impl Distinctness {
    pub fn verified(&self) -> bool {
        match self {
            Distinctness::Escapes { verified, .. } => *verified,
            Distinctness::Contained {
                inclusions,
                reversed,
            } => inclusions.iter().all(|(b, a)| b.is_subset(a)) && reversed.verified(),
        }
    }
}

/// Endpoint values covering every relative position against the fixed
/// witness sets at `0`.
fn endpoint_grid() -> Vec<Rational> {
    vec![int(-3), int(-1), int(0), ratio(1, 2), int(1), int(4)]
}

fn grid_sets(kind: RayKind) -> Vec<RaySet> {
    let grid = endpoint_grid();
    match kind {
        RayKind::UpperRay => grid.into_iter().map(RaySet::upper).collect(),
        RayKind::LowerRay => grid.into_iter().map(RaySet::lower).collect(),
        RayKind::TwoSided => grid
            .iter()
            .flat_map(|a| {
                grid.iter()
                    .filter(move |b| a <= *b)
                    .map(move |b| RaySet::two_sided(a.clone(), b.clone()).expect("a ≤ b"))
            })
            .collect(),
    }
}

/// Separates the topology of kind `a` from that of kind `b`.
///
/// When `b` is the bounded kind and `a` a ray kind, the topology of `a` is
/// finer: every bounded interval sits in a ray with the same finite end.
/// The result then records those inclusions and the reversed witness.
pub fn distinctness_witness(a: RayKind, b: RayKind) -> Result<Distinctness> {
    if a == b {
        return Err(Error::InvalidPl(format!(
            "distinctness needs two different kinds, got {a} twice"
        )));
    }
    let set = match b {
        RayKind::UpperRay => RaySet::upper(int(0)),
        RayKind::LowerRay => RaySet::lower(int(0)),
        RayKind::TwoSided => {
            let inclusions = grid_sets(RayKind::TwoSided)
                .into_iter()
                .map(|s| {
                    let ray = match a {
                        RayKind::UpperRay => RaySet::upper(s.lo.clone().expect("bounded")),
                        _ => RaySet::lower(s.hi.clone().expect("bounded")),
                    };
                    (s, ray)
                })
                .collect();
            return Ok(Distinctness::Contained {
                inclusions,
                reversed: Box::new(distinctness_witness(b, a)?),
            });
        }
    };
    let mut cases = Vec::new();
    let mut verified = true;
    for s in grid_sets(a) {
        match escaping_bump(&s, &set) {
            Some(g) => cases.push((s, g)),
            None => verified = false,
        }
    }
    Ok(Distinctness::Escapes {
        set,
        cases,
        verified,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupReport {
    pub samples: usize,
    /// Samples fixing both rays.
    pub fixers: usize,
    /// Pieces of fixers, each attributed to a ray it overlaps in an interval.
    pub pieces_covered: usize,
    /// Index of a non-identity sample fixing both rays.
    pub counterexample: Option<usize>,
}

impl SupReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Any element fixing both `(−∞, b]` and `[a, ∞)` with `a ≤ b` is the
/// identity: every piece has positive length and overlaps one of the rays
/// in an interval, on which it must be the identity.
pub fn sup_is_discrete_check(
    a: &Rational,
    b: &Rational,
    samples: &[PlBijection],
) -> Result<SupReport> {
    if a > b {
        return Err(Error::RaysDoNotCover {
            a: rational::format(a),
            b: rational::format(b),
        });
    }
    let (low, up) = (RaySet::lower(b.clone()), RaySet::upper(a.clone()));
    let mut report = SupReport {
        samples: samples.len(),
        fixers: 0,
        pieces_covered: 0,
        counterexample: None,
    };
    for (idx, g) in samples.iter().enumerate() {
        if !(fixes_pointwise(g, &low) && fixes_pointwise(g, &up)) {
            continue;
        }
        report.fixers += 1;
        for j in 0..g.pieces.len() {
            let start = j.checked_sub(1).map(|i| &g.breakpoints[i]);
            let end = g.breakpoints.get(j);
            // a piece starting below b overlaps the lower ray in an interval,
            // otherwise it starts at or above b ≥ a and lies in the upper ray
            if start.is_none_or(|s| s < b) || end.is_none_or(|e| e > a) {
                report.pieces_covered += 1;
            }
        }
        if !g.is_identity() && report.counterexample.is_none() {
            report.counterexample = Some(idx);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixatorReport {
    pub words: usize,
    pub fixators: usize,
    pub failure: Option<String>,
}

impl FixatorReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Words of length at most 3 in the sample and its inverses; the members
/// fixing `s` must be closed under composition and inversion.
pub fn fixator_subgroup_check(s: &RaySet, sample: &[PlBijection]) -> FixatorReport {
    let letters: Vec<PlBijection> = sample
        .iter()
        .flat_map(|g| [g.clone(), g.inverse()])
        .collect();
    let mut words = vec![PlBijection::identity()];
    let mut frontier = words.clone();
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                let v = w.compose(l);
                if !words.contains(&v) && !next.contains(&v) {
                    next.push(v);
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let fixing: Vec<&PlBijection> = words.iter().filter(|w| fixes_pointwise(w, s)).collect();
    let mut failure = None;
    'outer: for p in &fixing {
        if !fixes_pointwise(&p.inverse(), s) {
            failure = Some(format!("inverse of {p} moves {s}"));
            break;
        }
        for q in &fixing {
            if !fixes_pointwise(&p.compose(q), s) {
                failure = Some(format!("{p} after {q} moves {s}"));
                break 'outer;
            }
        }
    }
    FixatorReport {
        words: words.len(),
        fixators: fixing.len(),
        failure,
    }
}
