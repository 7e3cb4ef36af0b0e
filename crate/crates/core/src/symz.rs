//! Permutations of `Z` that are affine outside a finite window, and the
//! certificates separating the upper and lower topologies on them.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// `x ↦ sign·x + offset` for `|x| > N`, with an explicit patch on
/// `[−N, N]`. A missing window means the map is affine everywhere.
///
/// The patch must map `[−N, N]` onto `[offset − N, offset + N]`, the gap
/// left by the affine part. Windows are kept minimal, so equal maps are
/// equal values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffinePerm {
    sign: i64,
    offset: i64,
    radius: Option<i64>,
    patch: Vec<i64>,
}

impl AffinePerm {
    /// `patch[j]` is the image of `j − radius`.
    pub fn new(sign: i64, offset: i64, radius: Option<i64>, patch: Vec<i64>) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidAffinePerm(format!(
                "sign must be ±1, got {sign}"
            )));
        }
        match radius {
            None if !patch.is_empty() => {
                return Err(Error::InvalidAffinePerm(
                    "patch given without a window".into(),
                ));
            }
            None => {}
            Some(n) => {
                if n < 0 || patch.len() as i64 != 2 * n + 1 {
                    return Err(Error::InvalidAffinePerm(format!(
                        "window radius {n} needs {} patch values",
                        2 * n + 1
                    )));
                }
                let image: BTreeSet<i64> = patch.iter().copied().collect();
                let gap: BTreeSet<i64> = (offset - n..=offset + n).collect();
                if image != gap {
                    return Err(Error::InvalidAffinePerm(format!(
                        "patch must map [-{n}, {n}] onto [{}, {}]",
                        offset - n,
                        offset + n
                    )));
                }
            }
        }
        Ok(AffinePerm {
            sign,
            offset,
            radius,
            patch,
        }
        .minimized())
    }

    pub fn affine(sign: i64, offset: i64) -> Result<Self> {
        AffinePerm::new(sign, offset, None, Vec::new())
    }

    pub fn identity() -> Self {
        AffinePerm::affine(1, 0).expect("valid")
    }

    /// `x ↦ −x`.
    pub fn tau() -> Self {
        AffinePerm::affine(-1, 0).expect("valid")
    }

    /// `x ↦ x + n`.
    pub fn shift(n: i64) -> Self {
        AffinePerm::affine(1, n).expect("valid")
    }

    /// `x ↦ 2k − x`, whose only fixed point is `k`.
    pub fn reflection_at(k: i64) -> Self {
        AffinePerm::affine(-1, 2 * k).expect("valid")
    }

    /// Builds the map from a closure that must agree with the affine part
    /// outside `[−radius, radius]`.
    pub fn from_fn(sign: i64, offset: i64, radius: i64, f: impl Fn(i64) -> i64) -> Result<Self> {
        AffinePerm::new(
            sign,
            offset,
            Some(radius),
            (-radius..=radius).map(f).collect(),
        )
    }

    fn minimized(mut self) -> Self {
        while let Some(n) = self.radius {
            let (lo, hi) = (self.patch[0], self.patch[self.patch.len() - 1]);
            if lo != -self.sign * n + self.offset || hi != self.sign * n + self.offset {
                break;
            }
            if n == 0 {
                self.patch.clear();
                self.radius = None;
            } else {
                self.patch.pop();
                self.patch.remove(0);
                self.radius = Some(n - 1);
            }
        }
        self
    }

    pub fn sign(&self) -> i64 {
        self.sign
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Radius of the minimal window, if any.
    pub fn radius(&self) -> Option<i64> {
        self.radius
    }

    pub fn patch(&self) -> &[i64] {
        &self.patch
    }

    pub fn is_identity(&self) -> bool {
        self.sign == 1 && self.offset == 0 && self.radius.is_none()
    }

    pub fn apply(&self, x: i64) -> i64 {
        match self.radius {
            Some(n) if x.abs() <= n => self.patch[(x + n) as usize],
            _ => self.sign * x + self.offset,
        }
    }

    /// `self ∘ other`, so `x ↦ self(other(x))`.
    pub fn compose(&self, other: &AffinePerm) -> AffinePerm {
        let inner = other.radius.unwrap_or(-1);
        let outer = self.radius.map(|n| n + other.offset.abs()).unwrap_or(-1);
        let radius = inner.max(outer);
        let sign = self.sign * other.sign;
        let offset = self.sign * other.offset + self.offset;
        if radius < 0 {
            return AffinePerm {
                sign,
                offset,
                radius: None,
                patch: Vec::new(),
            };
        }
        let patch = (-radius..=radius)
            .map(|x| self.apply(other.apply(x)))
            .collect();
        AffinePerm {
            sign,
            offset,
            radius: Some(radius),
            patch,
        }
        .minimized()
    }

    pub fn inverse(&self) -> AffinePerm {
        let sign = self.sign;
        let offset = -self.sign * self.offset;
        let Some(n) = self.radius else {
            return AffinePerm {
                sign,
                offset,
                radius: None,
                patch: Vec::new(),
            };
        };
        let radius = n + self.offset.abs();
        let patch = (-radius..=radius)
            .map(|y| {
                if (y - self.offset).abs() <= n {
                    let j = self
                        .patch
                        .iter()
                        .position(|&v| v == y)
                        .expect("patch covers the gap");
                    j as i64 - n
                } else {
                    sign * (y - self.offset)
                }
            })
            .collect();
        AffinePerm {
            sign,
            offset,
            radius: Some(radius),
            patch,
        }
        .minimized()
    }

    pub fn conjugate(&self, sigma: &AffinePerm) -> AffinePerm {
        self.compose(sigma).compose(&self.inverse())
    }

    pub fn pow(&self, n: i64) -> AffinePerm {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(AffinePerm::identity(), |acc, _| acc.compose(&base))
    }

    pub fn fixed_points(&self) -> FixedPoints {
        let n = self.radius.unwrap_or(-1);
        let window = || (-n..=n).filter(|&x| self.apply(x) != x);
        if self.sign == 1 && self.offset == 0 {
            return FixedPoints::Cofinite {
                moved: window().collect(),
            };
        }
        let mut fixed: BTreeSet<i64> = (-n..=n).filter(|&x| self.apply(x) == x).collect();
        if self.sign == -1 && self.offset % 2 == 0 && (self.offset / 2).abs() > n {
            fixed.insert(self.offset / 2);
        }
        FixedPoints::Finite(fixed)
    }

    /// Parses `(sign, offset, [(i, x(i)) …])` with the patch listing the
    /// whole window `[−N, N]` in any order.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("{msg} in `{}`", text.trim()));
        let body = text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| bad("expected `(sign, offset, [...])`"))?;
        let (head, list) = body
            .split_once('[')
            .ok_or_else(|| bad("missing patch list"))?;
        let list = list
            .trim_end()
            .strip_suffix(']')
            .ok_or_else(|| bad("unterminated patch list"))?;
        let head: Vec<&str> = head
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        if head.len() != 2 {
            return Err(bad("expected sign and offset"));
        }
        let int = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| bad(&format!("not an integer `{}`", s.trim())))
        };
        let (sign, offset) = (int(head[0])?, int(head[1])?);
        let mut pairs = Vec::new();
        let mut rest = list.trim();
        while !rest.is_empty() {
            let (pair, tail) = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| bad("expected `(i, x(i))`"))?;
            let (i, v) = pair
                .split_once(',')
                .ok_or_else(|| bad("expected `(i, x(i))`"))?;
            pairs.push((int(i)?, int(v)?));
            rest = tail.trim_start().trim_start_matches(',').trim_start();
        }
        if pairs.is_empty() {
            return AffinePerm::affine(sign, offset);
        }
        pairs.sort();
        let n = pairs.iter().map(|(i, _)| i.abs()).max().expect("nonempty");
        if pairs.iter().map(|&(i, _)| i).ne(-n..=n) {
            return Err(bad("patch must list every point of a window [-N, N] once"));
        }
        AffinePerm::new(
            sign,
            offset,
            Some(n),
            pairs.into_iter().map(|(_, v)| v).collect(),
        )
    }
}

impl fmt::Display for AffinePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, [", self.sign, self.offset)?;
        if let Some(n) = self.radius {
            for (j, v) in self.patch.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "({}, {v})", j as i64 - n)?;
            }
        }
        f.write_str("])")
    }
}

impl fmt::Debug for AffinePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPoints {
    Finite(BTreeSet<i64>),
    /// Everything except the listed points is fixed.
    Cofinite {
        moved: BTreeSet<i64>,
    },
}

impl FixedPoints {
    /// Image under a bijection of `Z`.
    pub fn image(&self, x: &AffinePerm) -> FixedPoints {
        match self {
            FixedPoints::Finite(s) => FixedPoints::Finite(s.iter().map(|&p| x.apply(p)).collect()),
            FixedPoints::Cofinite { moved } => FixedPoints::Cofinite {
                moved: moved.iter().map(|&p| x.apply(p)).collect(),
            },
        }
    }
}

/// Labels a member of the detection family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    Tau,
    Shift(i64),
}

impl Probe {
    pub fn element(&self) -> AffinePerm {
        match *self {
            Probe::Tau => AffinePerm::tau(),
            Probe::Shift(n) => AffinePerm::shift(n),
        }
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probe::Tau => f.write_str("tau"),
            Probe::Shift(n) => write!(f, "rho^{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperCertificate {
    pub family_size: usize,
    /// Every probe commuted with `x` at `0`, and `x` is the identity.
    pub forced_identity: bool,
    /// First probe `σ` for which `(xσx⁻¹)⁻¹σ` moves `0`.
    pub detected_by: Option<Probe>,
}

impl UpperCertificate {
    /// Either `x` is the identity or some probe excludes it.
    pub fn consistent(&self) -> bool {
        self.forced_identity || self.detected_by.is_some()
    }
}

/// The probes `τ` and `ρ^n` for `1 ≤ |n| ≤ 2N + 2`.
pub fn detection_family(bound: i64) -> Vec<Probe> {
    let mut family = vec![Probe::Tau];
    for n in 1..=2 * bound + 2 {
        family.push(Probe::Shift(n));
        family.push(Probe::Shift(-n));
    }
    family
}

/// Tests `(γ(x)(σ))⁻¹σ` at `0` for every probe `σ`. Passing all probes
/// forces `x⁻¹` to fix `0` and commute with shifts on `[−2N−2, 2N+2]`,
/// which for a window of radius at most `N` makes `x` the identity.
pub fn upper_discreteness_certificate(x: &AffinePerm, bound: i64) -> Result<UpperCertificate> {
    let window = x.radius.unwrap_or(0);
    if window > bound || bound < 0 {
        return Err(Error::WindowTooLarge { window, bound });
    }
    let family = detection_family(bound);
    let detected_by = family.iter().copied().find(|probe| {
        let sigma = probe.element();
        x.conjugate(&sigma).inverse().compose(&sigma).apply(0) != 0
    });
    Ok(UpperCertificate {
        family_size: family.len(),
        forced_identity: detected_by.is_none() && x.is_identity(),
        detected_by,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyVerdict {
    pub key: i64,
    pub image: i64,
    /// Fixed points of `x σ_k x⁻¹` are exactly `{x(k)}`.
    pub transfer_holds: bool,
    /// `x(k) = k`; otherwise `x σ_k x⁻¹` misses `V σ_k V`, all of whose
    /// elements fix `k`.
    pub inside: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerCertificate {
    pub keys: Vec<KeyVerdict>,
}

impl LowerCertificate {
    pub fn inside(&self) -> bool {
        self.keys.iter().all(|k| k.inside)
    }

    pub fn transfers_hold(&self) -> bool {
        self.keys.iter().all(|k| k.transfer_holds)
    }
}

/// Per key `k`, decides whether `x` lies in the lower ball of the fixator
/// of the keys by locating the unique fixed point of `x σ_k x⁻¹`.
pub fn lower_pointwise_certificate(x: &AffinePerm, keys: &[i64]) -> LowerCertificate {
    let keys = keys
        .iter()
        .map(|&key| {
            let image = x.apply(key);
            let fixed = x.conjugate(&AffinePerm::reflection_at(key)).fixed_points();
            KeyVerdict {
                key,
                image,
                transfer_holds: fixed == FixedPoints::Finite(BTreeSet::from([image])),
                inside: image == key,
            }
        })
        .collect();
    LowerCertificate { keys }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn swap_window(n: i64, a: i64, b: i64) -> AffinePerm {
        AffinePerm::from_fn(1, 0, n, |x| {
            if x == a {
                b
            } else if x == b {
                a
            } else {
                x
            }
        })
        .unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let rho = AffinePerm::shift(1);
        let tau = AffinePerm::tau();
        assert!(rho.compose(&rho.inverse()).is_identity());
        assert!(tau.compose(&tau).is_identity());
        assert_eq!(rho.compose(&tau).apply(5), -4);
        assert_eq!(rho.pow(-3), AffinePerm::shift(-3));
        let s = swap_window(2, -1, 2);
        assert_eq!(s.radius(), Some(2));
        assert_eq!(s.compose(&s), AffinePerm::identity());
        assert_eq!(s.inverse(), s);
    }

    #[test]
    fn construction_checks() {
        assert!(AffinePerm::new(2, 0, None, vec![]).is_err());
        assert!(AffinePerm::new(1, 0, Some(1), vec![0, 1]).is_err());
        // image misses the gap [c-N, c+N] = [2, 4]
        assert!(AffinePerm::new(1, 3, Some(1), vec![1, 2, 3]).is_err());
        let m = AffinePerm::new(1, 3, Some(1), vec![4, 3, 2]).unwrap();
        assert_eq!(m.radius(), Some(1));
        let trivial = AffinePerm::new(-1, 3, Some(1), vec![4, 3, 2]).unwrap();
        assert_eq!(trivial.radius(), None);
    }

    #[test]
    fn reflections() {
        assert_eq!(AffinePerm::reflection_at(0), AffinePerm::tau());
        assert_eq!(
            AffinePerm::reflection_at(3).fixed_points(),
            FixedPoints::Finite(BTreeSet::from([3]))
        );
        let x = swap_window(3, 1, -2).compose(&AffinePerm::shift(2));
        let conj = x.conjugate(&AffinePerm::reflection_at(4));
        assert_eq!(
            conj.fixed_points(),
            FixedPoints::Finite(BTreeSet::from([x.apply(4)]))
        );
        assert_eq!(
            AffinePerm::shift(1).fixed_points(),
            FixedPoints::Finite(BTreeSet::new())
        );
        assert_eq!(
            swap_window(2, 0, 1).fixed_points(),
            FixedPoints::Cofinite {
                moved: BTreeSet::from([0, 1])
            }
        );
    }

    #[test]
    fn literal_round_trip() {
        let x = AffinePerm::new(-1, 1, Some(1), vec![1, 0, 2]).unwrap();
        let text = x.to_string();
        assert_eq!(text, "(-1, 1, [(-1, 1) (0, 0) (1, 2)])");
        assert_eq!(AffinePerm::parse(&text).unwrap(), x);
        assert_eq!(
            AffinePerm::parse("(1, 0, [])").unwrap(),
            AffinePerm::identity()
        );
        assert_eq!(
            AffinePerm::parse("(1, 0, [(1, 0), (0, 1), (-1, -1)])").unwrap(),
            swap_window(1, 0, 1)
        );
        assert!(AffinePerm::parse("(1, 0, [(1, 1)])").is_err());
        assert!(AffinePerm::parse("1, 0, []").is_err());
    }

    #[test]
    fn upper_examples() {
        let id = upper_discreteness_certificate(&AffinePerm::identity(), 1).unwrap();
        assert!(id.forced_identity && id.detected_by.is_none());
        let rho = upper_discreteness_certificate(&AffinePerm::shift(1), 1).unwrap();
        assert_eq!(rho.detected_by, Some(Probe::Tau));
        // fixes 0 and all nonnegative points; only negative shifts see it
        let neg = swap_window(2, -1, -2);
        let cert = upper_discreteness_certificate(&neg, 2).unwrap();
        assert!(matches!(cert.detected_by, Some(Probe::Shift(n)) if n < 0));
        assert!(matches!(
            upper_discreteness_certificate(&neg, 1),
            Err(Error::WindowTooLarge {
                window: 2,
                bound: 1
            })
        ));
    }

    #[test]
    fn lower_examples() {
        let id = lower_pointwise_certificate(&AffinePerm::identity(), &[0, 3, -7]);
        assert!(id.inside() && id.transfers_hold());
        let rho = lower_pointwise_certificate(&AffinePerm::shift(1), &[0]);
        assert_eq!((rho.keys[0].image, rho.keys[0].inside), (1, false));
        assert!(rho.transfers_hold());
        let bump = swap_window(3, 1, 3).compose(&swap_window(4, -4, -3));
        let cert = lower_pointwise_certificate(&bump, &[-2, 0, 5]);
        assert!(cert.inside() && cert.transfers_hold());
        let cert = lower_pointwise_certificate(&bump, &[1]);
        assert!(!cert.inside());
    }

    fn arb_perm() -> impl Strategy<Value = AffinePerm> {
        (
            prop::bool::ANY,
            -3i64..=3,
            0i64..=3,
            prop::collection::vec(any::<prop::sample::Index>(), 7),
        )
            .prop_map(|(neg, offset, n, picks)| {
                let sign = if neg { -1 } else { 1 };
                let mut gap: Vec<i64> = (offset - n..=offset + n).collect();
                let mut patch = Vec::new();
                for pick in picks.iter().take(gap.len()) {
                    patch.push(gap.remove(pick.index(gap.len())));
                }
                AffinePerm::new(sign, offset, Some(n), patch).unwrap()
            })
    }

    proptest! {
        #[test]
        fn group_laws(f in arb_perm(), g in arb_perm(), h in arb_perm()) {
            prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
            prop_assert!(f.compose(&f.inverse()).is_identity());
            prop_assert!(f.inverse().compose(&f).is_identity());
            prop_assert_eq!(f.compose(&AffinePerm::identity()), f.clone());
            for x in -15..=15 {
                prop_assert_eq!(f.compose(&g).apply(x), f.apply(g.apply(x)));
                prop_assert_eq!(f.inverse().apply(f.apply(x)), x);
            }
        }

        #[test]
        fn fixed_point_transfer(x in arb_perm(), s in arb_perm()) {
            prop_assert_eq!(x.conjugate(&s).fixed_points(), s.fixed_points().image(&x));
        }

        #[test]
        fn upper_detects_non_identity(x in arb_perm()) {
            let bound = x.radius().unwrap_or(0);
            let cert = upper_discreteness_certificate(&x, bound).unwrap();
            prop_assert!(cert.consistent());
            prop_assert_eq!(cert.detected_by.is_none(), x.is_identity());
        }

        #[test]
        fn lower_agrees_with_pointwise(x in arb_perm(), keys in prop::collection::vec(-6i64..=6, 0..4)) {
            let cert = lower_pointwise_certificate(&x, &keys);
            prop_assert!(cert.transfers_hold());
            prop_assert_eq!(cert.inside(), keys.iter().all(|&k| x.apply(k) == k));
        }

        #[test]
        fn literal_round_trips(x in arb_perm()) {
            prop_assert_eq!(AffinePerm::parse(&x.to_string()).unwrap(), x);
        }
    }
}
