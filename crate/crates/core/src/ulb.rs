//! Uniformly locally bounded spaces at finite resolution.

use std::fmt;

use crate::born::BornologyBasis;
use crate::error::{Error, Result};
use crate::relalg::{Relation, Subset};
use crate::report::Verdict;
use crate::unif::UniformFiltration;

/// A self-map of a finite carrier, optionally with its inverse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CarrierMap {
    table: Vec<usize>,
    inverse: Option<Vec<usize>>,
}

impl CarrierMap {
    pub fn new(table: Vec<usize>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        if let Some(&bad) = table.iter().find(|&&y| y >= n) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                size: n,
            });
        }
        Ok(CarrierMap {
            table,
            inverse: None,
        })
    }

    pub fn with_inverse(table: Vec<usize>, inverse: Vec<usize>) -> Result<Self> {
        let map = CarrierMap::new(table)?;
        if inverse.len() != map.size() {
            return Err(Error::CarrierMismatch {
                left: map.size(),
                right: inverse.len(),
            });
        }
        let ok = (0..map.size()).all(|x| {
            inverse.get(map.table[x]) == Some(&x)
                && inverse[x] < map.size()
                && map.table[inverse[x]] == x
        });
        if !ok {
            return Err(Error::NotBijective(
                "inverse table does not invert the map".into(),
            ));
        }
        Ok(CarrierMap {
            inverse: Some(inverse),
            ..map
        })
    }

    /// A bijection with its inverse computed from the table.
    pub fn permutation(table: Vec<usize>) -> Result<Self> {
        let map = CarrierMap::new(table)?;
        let n = map.size();
        let mut inv = vec![usize::MAX; n];
        for (x, &y) in map.table.iter().enumerate() {
            if inv[y] != usize::MAX {
                return Err(Error::NotBijective(format!(
                    "{} and {x} both map to {y}",
                    inv[y]
                )));
            }
            inv[y] = x;
        }
        Ok(CarrierMap {
            inverse: Some(inv),
            ..map
        })
    }

    /// Attaches the inverse when the table happens to be bijective.
    pub fn auto(table: Vec<usize>) -> Result<Self> {
        let map = CarrierMap::new(table)?;
        Ok(CarrierMap::permutation(map.table.clone()).unwrap_or(map))
    }

    pub fn identity(n: usize) -> Self {
        CarrierMap::permutation((0..n).collect()).expect("identity is bijective")
    }

    pub fn constant(n: usize, c: usize) -> Result<Self> {
        CarrierMap::auto(vec![c; n])
    }

    /// All `n^n` self-maps in lexicographic order of their tables.
    pub fn all_endomaps(n: usize) -> Vec<CarrierMap> {
        let total = n.pow(n as u32);
        (0..total)
            .map(|mut code| {
                let mut table = vec![0; n];
                for slot in table.iter_mut().rev() {
                    *slot = code % n;
                    code /= n;
                }
                CarrierMap::auto(table).expect("in range")
            })
            .collect()
    }

    /// All `n!` permutations, in lexicographic order.
    pub fn all_permutations(n: usize) -> Vec<CarrierMap> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(CarrierMap::permutation(current.clone()).expect("bijective"));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1))
                .rev()
                .find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..n)
                .rev()
                .find(|&j| current[j] > current[i])
                .expect("exists");
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn inverse_table(&self) -> Option<&[usize]> {
        self.inverse.as_deref()
    }

    pub fn is_bijective(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn inverse(&self) -> Option<CarrierMap> {
        let inv = self.inverse.clone()?;
        Some(CarrierMap {
            table: inv,
            inverse: Some(self.table.clone()),
        })
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &CarrierMap) -> Result<CarrierMap> {
        if self.size() != other.size() {
            return Err(Error::CarrierMismatch {
                left: self.size(),
                right: other.size(),
            });
        }
        let table = other.table.iter().map(|&x| self.table[x]).collect();
        let inverse = match (&self.inverse, &other.inverse) {
            (Some(a), Some(b)) => Some(a.iter().map(|&y| b[y]).collect()),
            _ => None,
        };
        Ok(CarrierMap { table, inverse })
    }

    pub fn image(&self, a: &Subset) -> Subset {
        let mut out = Subset::empty(self.size());
        for x in a.iter() {
            out.insert(self.table[x]);
        }
        out
    }

    /// Image of a relation under `f × f`.
    pub fn image_relation(&self, r: &Relation) -> Relation {
        let mut out = Relation::empty(self.size());
        for (x, y) in r.pairs() {
            out.insert(self.table[x], self.table[y]);
        }
        out
    }
}

impl fmt::Debug for CarrierMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.table)
    }
}

/// Outcome of the modulus search for a single target level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelModulus {
    /// Least source level that is mapped into the target level.
    At(usize),
    /// Even the finest level fails, and the finest level is an equivalence
    /// relation, so the chain is a complete basis and the failure is genuine.
    Violated { pair: (usize, usize) },
    /// Even the finest level fails, but finer entourages may exist beyond
    /// the truncation.
    ResolutionExhausted { pair: (usize, usize) },
}

/// Per-target-level modulus of uniform continuity on one set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    pub levels: Vec<LevelModulus>,
}

impl Modulus {
    pub fn at(&self, i: usize) -> Option<usize> {
        match self.levels.get(i)? {
            LevelModulus::At(j) => Some(*j),
            _ => None,
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.levels.iter().fold(Verdict::Pass, |acc, l| {
            acc.and(match l {
                LevelModulus::At(_) => Verdict::Pass,
                LevelModulus::Violated { .. } => Verdict::Fail,
                LevelModulus::ResolutionExhausted { .. } => Verdict::ResolutionExhausted,
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    pub modest: bool,
    /// Index of a basis set whose image is unbounded.
    pub unbounded_image_of: Option<usize>,
    pub uniformly_continuous: Verdict,
}

impl MorphismReport {
    pub fn holds(&self) -> bool {
        self.modest && self.uniformly_continuous == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    /// First basis set whose closure is unbounded.
    pub unbounded_closure: Option<usize>,
    /// Classes of `E_c^∞` for the certified level `c`.
    pub certified_components: Vec<Subset>,
    /// Classes of `E_k^∞` for the finest level `k`.
    pub finest_components: Vec<Subset>,
    pub bornology_connected: bool,
    /// `E_c^∞ = X × X ⇒ bornology connected`.
    pub connectivity_implication: bool,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.unbounded_closure.is_none() && self.connectivity_implication
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UlbSpace {
    filtration: UniformFiltration,
    bornology: BornologyBasis,
    certified_index: Option<usize>,
}

impl UlbSpace {
    /// Validates both structures and computes the certified level.
    pub fn new(filtration: UniformFiltration, bornology: BornologyBasis) -> Result<Self> {
        if filtration.size() != bornology.size() {
            return Err(Error::CarrierMismatch {
                left: filtration.size(),
                right: bornology.size(),
            });
        }
        if let Some(v) = filtration.validate().violations.first() {
            return Err(Error::InvalidFiltration(v.to_string()));
        }
        if let Some(v) = bornology.validate().violations.first() {
            return Err(Error::InvalidBornology(v.to_string()));
        }
        let mut space = UlbSpace {
            filtration,
            bornology,
            certified_index: None,
        };
        space.certified_index = space.bounded_entourage_index();
        Ok(space)
    }

    pub fn size(&self) -> usize {
        self.filtration.size()
    }

    pub fn filtration(&self) -> &UniformFiltration {
        &self.filtration
    }

    pub fn bornology(&self) -> &BornologyBasis {
        &self.bornology
    }

    pub fn certified_index(&self) -> Option<usize> {
        self.certified_index
    }

    pub fn certified(&self) -> Result<usize> {
        self.certified_index.ok_or(Error::Uncertified)
    }

    /// Least level `i` with `E_i[B]` bounded for every basis set `B`.
    pub fn bounded_entourage_index(&self) -> Option<usize> {
        (0..=self.filtration.depth()).find(|&i| self.level_is_bounded(i))
    }

    pub fn level_is_bounded(&self, i: usize) -> bool {
        let e = self.filtration.level(i);
        self.bornology.sets().iter().all(|b| {
            self.bornology
                .is_bounded(&e.image(b).expect("same carrier"))
        })
    }

    /// For each target level `i`, the least `j` with `(f×f)(E_j ∩ A×A) ⊆ E_i`.
    pub fn uniform_continuity_modulus(&self, f: &CarrierMap, a: &Subset) -> Result<Modulus> {
        if f.size() != self.size() || a.size() != self.size() {
            return Err(Error::CarrierMismatch {
                left: self.size(),
                right: f.size(),
            });
        }
        let k = self.filtration.depth();
        let genuine = self.filtration.is_closed_at_finest();
        let levels = (0..=k)
            .map(|i| {
                let target = self.filtration.level(i);
                let failure = |j: usize| {
                    let e = self.filtration.level(j);
                    a.iter()
                        .flat_map(|x| {
                            e.row(x)
                                .iter()
                                .filter(|&y| a.contains(y))
                                .map(move |y| (x, y))
                        })
                        .find(|&(x, y)| !target.contains(f.apply(x), f.apply(y)))
                };
                let mut last = None;
                for j in 0..=k {
                    match failure(j) {
                        None => return LevelModulus::At(j),
                        Some(pair) => last = Some(pair),
                    }
                }
                let pair = last.expect("at least one level");
                if genuine {
                    LevelModulus::Violated { pair }
                } else {
                    LevelModulus::ResolutionExhausted { pair }
                }
            })
            .collect();
        Ok(Modulus { levels })
    }

    /// Modest (bounded sets to bounded sets) and uniformly continuous on every basis set.
    pub fn is_morphism(&self, f: &CarrierMap) -> Result<MorphismReport> {
        let unbounded_image_of = self
            .bornology
            .sets()
            .iter()
            .position(|b| !self.bornology.is_bounded(&f.image(b)));
        let mut uc = Verdict::Pass;
        for b in self.bornology.sets() {
            uc = uc.and(self.uniform_continuity_modulus(f, b)?.verdict());
        }
        Ok(MorphismReport {
            modest: unbounded_image_of.is_none(),
            unbounded_image_of,
            uniformly_continuous: uc,
        })
    }

    pub fn is_ulb_automorphism(&self, f: &CarrierMap) -> Result<bool> {
        let inv = f
            .inverse()
            .ok_or_else(|| Error::NotBijective(format!("{f:?}")))?;
        Ok(self.is_morphism(f)?.holds() && self.is_morphism(&inv)?.holds())
    }

    pub fn structural_checks(&self) -> Result<StructuralReport> {
        let c = self.certified()?;
        let unbounded_closure = self.bornology.sets().iter().position(|b| {
            let closure = self.filtration.closure(b).expect("same carrier");
            !self.bornology.is_bounded(&closure)
        });
        let certified_star = self.filtration.level(c).iter_star_or_panic();
        let finest_star = self.filtration.finest().iter_star_or_panic();
        let bornology_connected = self.bornology.validate().connected;
        let chain_connected = certified_star == Relation::full(self.size());
        Ok(StructuralReport {
            unbounded_closure,
            certified_components: certified_star.classes(),
            finest_components: finest_star.classes(),
            bornology_connected,
            connectivity_implication: !chain_connected || bornology_connected,
        })
    }
}

trait StarExt {
    fn iter_star_or_panic(&self) -> Relation;
}

impl StarExt for Relation {
    fn iter_star_or_panic(&self) -> Relation {
        self.iterate_star()
            .expect("filtration levels are reflexive")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::unif::PseudoMetric;

    // consecutive disjoint blocks of the given width
    fn block_bornology(n: usize, width: usize) -> BornologyBasis {
        let sets = (0..n)
            .step_by(width)
            .map(|a| Subset::from_indices(n, a..(a + width).min(n)).unwrap())
            .collect();
        BornologyBasis::new(n, sets).unwrap()
    }

    fn line_space(n: usize, scales: &[i64], width: usize) -> UlbSpace {
        let metric = PseudoMetric::line(&(0..n as i64).collect::<Vec<_>>()).unwrap();
        let scales: Vec<_> = scales.iter().map(|&s| int(s)).collect();
        let f = UniformFiltration::from_metric(&metric, &scales).unwrap();
        UlbSpace::new(f, block_bornology(n, width)).unwrap()
    }

    #[test]
    fn carrier_map_basics() {
        let f = CarrierMap::permutation(vec![1, 2, 0]).unwrap();
        let g = f.inverse().unwrap();
        assert!(f.compose(&g).unwrap().is_identity());
        assert!(CarrierMap::permutation(vec![0, 0]).is_err());
        assert!(CarrierMap::new(vec![0, 3]).is_err());
        assert!(CarrierMap::with_inverse(vec![1, 0], vec![0, 1]).is_err());
        assert!(CarrierMap::with_inverse(vec![1, 0], vec![1, 0]).is_ok());
        assert_eq!(CarrierMap::all_endomaps(3).len(), 27);
        assert_eq!(
            CarrierMap::all_endomaps(3)
                .iter()
                .filter(|m| m.is_bijective())
                .count(),
            6
        );
        assert_eq!(CarrierMap::all_permutations(4).len(), 24);
    }

    #[test]
    fn bounded_entourage_index_examples() {
        let f = UniformFiltration::from_metric(
            &PseudoMetric::line(&[0, 1, 2]).unwrap(),
            &[int(4), int(1)],
        )
        .unwrap();
        let trivial = UlbSpace::new(f.clone(), BornologyBasis::trivial(3)).unwrap();
        assert_eq!(trivial.bounded_entourage_index(), Some(0));
        let fine = UlbSpace::new(f, BornologyBasis::singletons(3)).unwrap();
        // E_1 = Δ and Δ[B] = B
        assert_eq!(fine.bounded_entourage_index(), Some(1));
    }

    #[test]
    fn bounded_entourage_on_line_respects_diameter_bound() {
        // six points, basis = blocks {0,1,2} and {3,4,5}
        let space = line_space(6, &[4, 2, 1], 3);
        let idx = space.bounded_entourage_index();
        // E_0 = full is unbounded, E_1 = |i-j| ≤ 1 spills over the block boundary
        assert_eq!(idx, Some(2));
        let metric = PseudoMetric::line(&[0, 1, 2, 3, 4, 5]).unwrap();
        for (i, alpha) in [4, 2, 1].into_iter().enumerate() {
            for b in space.bornology().sets() {
                let img = space.filtration().level(i).image(b).unwrap();
                assert!(metric.diameter(&img) <= int(2 * alpha) + metric.diameter(b));
            }
        }
        for j in idx.unwrap()..=2 {
            assert!(space.level_is_bounded(j));
        }
    }

    #[test]
    fn modulus_examples() {
        let space = line_space(6, &[4, 2, 1], 6);
        let all = Subset::full(6);
        let id = space
            .uniform_continuity_modulus(&CarrierMap::identity(6), &all)
            .unwrap();
        assert_eq!(
            id.levels,
            vec![
                LevelModulus::At(0),
                LevelModulus::At(1),
                LevelModulus::At(2)
            ]
        );
        let constant = CarrierMap::constant(6, 2).unwrap();
        let m = space.uniform_continuity_modulus(&constant, &all).unwrap();
        assert_eq!(m.levels, vec![LevelModulus::At(0); 3]);
    }

    #[test]
    fn doubling_map_shifts_modulus_by_one() {
        // points 0..=12 on a line with scales 4,2,1; x ↦ 2x on B = {0..=6}
        let metric = PseudoMetric::line(&(0..13).collect::<Vec<_>>()).unwrap();
        let f = UniformFiltration::from_metric(&metric, &[int(4), int(2), int(1)]).unwrap();
        let space = UlbSpace::new(f, BornologyBasis::trivial(13)).unwrap();
        let double = CarrierMap::new((0..13).map(|x| (2 * x).min(12)).collect()).unwrap();
        let b = Subset::from_indices(13, 0..7).unwrap();
        let m = space.uniform_continuity_modulus(&double, &b).unwrap();
        // d(2x,2y) < α_i iff d(x,y) < α_i / 2 = α_{i+1}; the last target is served by E_2 = Δ
        assert_eq!(
            m.levels,
            vec![
                LevelModulus::At(1),
                LevelModulus::At(2),
                LevelModulus::At(2)
            ]
        );
    }

    #[test]
    fn modulus_distinguishes_violation_from_exhaustion() {
        // genuine: finest level is the partition {0,1}{2}
        let part = Relation::from_predicate(3, |x, y| x == y || x + y == 1);
        let f = UniformFiltration::new(vec![Relation::full(3), part]).unwrap();
        let space = UlbSpace::new(f, BornologyBasis::trivial(3)).unwrap();
        let swap = CarrierMap::permutation(vec![0, 2, 1]).unwrap();
        let m = space
            .uniform_continuity_modulus(&swap, &Subset::full(3))
            .unwrap();
        assert!(matches!(m.levels[1], LevelModulus::Violated { .. }));
        assert_eq!(m.verdict(), Verdict::Fail);

        // truncated: finest level is a path, not transitive
        let path = Relation::from_predicate(4, |x, y| x.abs_diff(y) <= 1);
        let f = UniformFiltration::new(vec![Relation::full(4), path]).unwrap();
        let space = UlbSpace::new(f, BornologyBasis::trivial(4)).unwrap();
        let spread = CarrierMap::new(vec![0, 3, 0, 3]).unwrap();
        let m = space
            .uniform_continuity_modulus(&spread, &Subset::full(4))
            .unwrap();
        assert!(matches!(
            m.levels[1],
            LevelModulus::ResolutionExhausted { .. }
        ));
        assert_eq!(m.verdict(), Verdict::ResolutionExhausted);
    }

    #[test]
    fn morphism_examples() {
        let space = line_space(4, &[4, 2, 1], 2);
        let r = space.is_morphism(&CarrierMap::identity(4)).unwrap();
        assert!(r.modest && r.uniformly_continuous == Verdict::Pass);
        let collapse = CarrierMap::constant(4, 0).unwrap();
        assert!(space.is_morphism(&collapse).unwrap().modest);

        let f = UniformFiltration::new(vec![Relation::full(4), Relation::diagonal(4)]).unwrap();
        let disjoint = BornologyBasis::from_index_lists(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let space = UlbSpace::new(f, disjoint).unwrap();
        let transposition = CarrierMap::permutation(vec![0, 2, 1, 3]).unwrap();
        let r = space.is_morphism(&transposition).unwrap();
        assert!(!r.modest);
        assert_eq!(r.unbounded_image_of, Some(0));
        assert!(!space.is_ulb_automorphism(&transposition).unwrap());
        assert!(space.is_ulb_automorphism(&CarrierMap::identity(4)).unwrap());
        assert!(space
            .is_ulb_automorphism(&CarrierMap::constant(4, 0).unwrap())
            .is_err());
    }

    #[test]
    fn line_isometries_are_automorphisms() {
        let space = line_space(5, &[4, 2, 1], 5);
        let reflect = CarrierMap::permutation(vec![4, 3, 2, 1, 0]).unwrap();
        assert!(space.is_ulb_automorphism(&reflect).unwrap());
        let scramble = CarrierMap::permutation(vec![0, 2, 4, 1, 3]).unwrap();
        let m = space.is_morphism(&scramble).unwrap();
        // E_2 = Δ serves every target, so continuity holds; the map is still a morphism
        assert!(m.holds());
    }

    #[test]
    fn morphisms_compose() {
        let space = line_space(3, &[4, 2, 1], 2);
        let maps = CarrierMap::all_endomaps(3);
        let morphisms: Vec<_> = maps
            .iter()
            .filter(|m| space.is_morphism(m).unwrap().holds())
            .collect();
        for f in &morphisms {
            for g in &morphisms {
                assert!(space.is_morphism(&f.compose(g).unwrap()).unwrap().holds());
            }
        }
    }

    #[test]
    fn structural_examples() {
        let f = UniformFiltration::from_metric(
            &PseudoMetric::line(&[0, 1, 2]).unwrap(),
            &[int(4), int(2)],
        )
        .unwrap();
        let r = UlbSpace::new(f, BornologyBasis::trivial(3))
            .unwrap()
            .structural_checks()
            .unwrap();
        assert!(r.passed() && r.bornology_connected);

        let space = line_space(6, &[4, 2, 1], 3);
        let r = space.structural_checks().unwrap();
        assert!(r.passed());

        // two blocks, bornology = the blocks
        let blocks = Relation::from_predicate(4, |x, y| x / 2 == y / 2);
        let f = UniformFiltration::new(vec![blocks, Relation::diagonal(4)]).unwrap();
        let b = BornologyBasis::from_index_lists(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let space = UlbSpace::new(f, b).unwrap();
        assert_eq!(space.certified_index(), Some(0));
        let r = space.structural_checks().unwrap();
        assert_eq!(r.certified_components.len(), 2);
        assert!(!r.bornology_connected && r.connectivity_implication && r.passed());
    }

    #[test]
    fn uncertified_space_is_reported() {
        // single full level with disjoint bornology: E_0[B] = X is unbounded
        let f = UniformFiltration::new(vec![Relation::full(4)]).unwrap();
        let b = BornologyBasis::from_index_lists(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let space = UlbSpace::new(f, b).unwrap();
        assert_eq!(space.certified_index(), None);
        assert_eq!(space.structural_checks(), Err(Error::Uncertified));
    }

    #[test]
    fn star_is_fixed_by_two_sided_composition() {
        // E^∞ = E ∘ E^∞ ∘ E for reflexive E
        let e = Relation::from_predicate(5, |x, y| {
            x.abs_diff(y) <= 1 && (x, y) != (2, 3) && (x, y) != (3, 2)
        });
        let star = e.iterate_star().unwrap();
        assert_eq!(e.compose(&star).unwrap().compose(&e).unwrap(), star);
        assert_eq!(star.classes().len(), 2);
    }
}
