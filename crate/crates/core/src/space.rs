//! Space files: TOML descriptions of a finite space and optional map sets,
//! group models and measure families.
//!
//! ```toml
//! [carrier]
//! size = 3
//!
//! [filtration]
//! levels = ["3 111 111 111", "3 110 111 011", "3 100 010 001"]
//!
//! [bornology]
//! sets = [[0, 1, 2]]
//!
//! [maps]
//! all_endomaps = true
//! ```
//!
//! A `[metric]` section with `distances` (or `positions` on a line) and
//! `scales` may replace `[filtration]`. Unknown sections and keys are
//! rejected.

use std::path::Path;

use serde::Deserialize;

use crate::born::BornologyBasis;
use crate::error::{Error, Result};
use crate::groupunif::{symmetric_subsets, GroupModel, IdentityFiltration};
use crate::mapspace::MapSet;
use crate::rational::{self, Rational};
use crate::relalg::{Relation, Subset};
use crate::sigma::{Measure, MeasureFamily};
use crate::ulb::{CarrierMap, UlbSpace};
use crate::unif::{PseudoMetric, UniformFiltration};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    carrier: RawCarrier,
    filtration: Option<RawFiltration>,
    metric: Option<RawMetric>,
    bornology: RawBornology,
    maps: Option<RawMaps>,
    group: Option<RawGroup>,
    measures: Option<RawMeasures>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCarrier {
    size: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFiltration {
    levels: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetric {
    distances: Option<Vec<Vec<String>>>,
    positions: Option<Vec<i64>>,
    scales: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBornology {
    sets: Vec<Vec<usize>>,
    connected_expected: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaps {
    #[serde(default)]
    tables: Vec<Vec<usize>>,
    #[serde(default)]
    all_endomaps: bool,
    #[serde(default)]
    all_permutations: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    named: Option<String>,
    table: Option<Vec<Vec<usize>>>,
    filtration: Option<Vec<Vec<usize>>>,
    automorphisms: Option<String>,
    automorphism_tables: Option<Vec<Vec<usize>>>,
    basis: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasures {
    weights: Vec<Vec<String>>,
    thresholds: Option<Vec<String>>,
}

/// A finite group with its neighborhood chain, automorphism list and
/// symmetric bornology basis.
#[derive(Clone, Debug)]
pub struct GroupSection {
    pub group: GroupModel,
    pub filtration: IdentityFiltration,
    pub automorphisms: MapSet,
    pub basis: Vec<Subset>,
}

#[derive(Clone, Debug)]
pub struct MeasureSection {
    pub family: MeasureFamily,
    pub thresholds: Option<Vec<Rational>>,
}

/// Everything a space file describes, validated.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub space: UlbSpace,
    pub maps: Option<MapSet>,
    pub group: Option<GroupSection>,
    pub measures: Option<MeasureSection>,
}

impl Bundle {
    pub fn size(&self) -> usize {
        self.space.size()
    }
}

pub fn load_space(path: &Path) -> Result<Bundle> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_space(&text)
}

pub fn parse_space(text: &str) -> Result<Bundle> {
    let raw: RawSpace =
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))?;
    let n = raw.carrier.size;
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    let filtration = match (raw.filtration, raw.metric) {
        (Some(f), None) => {
            let levels = f
                .levels
                .iter()
                .map(|l| Relation::parse_literal(l))
                .collect::<Result<Vec<_>>>()?;
            if let Some(r) = levels.iter().find(|r| r.size() != n) {
                return Err(Error::CarrierMismatch {
                    left: n,
                    right: r.size(),
                });
            }
            UniformFiltration::new(levels)?
        }
        (None, Some(m)) => {
            let metric = match (m.distances, m.positions) {
                (Some(d), None) => PseudoMetric::new(
                    d.iter()
                        .map(|row| row.iter().map(|v| rational::parse(v)).collect())
                        .collect::<Result<_>>()?,
                )?,
                (None, Some(p)) => PseudoMetric::line(&p)?,
                _ => {
                    return Err(Error::Parse(
                        "[metric] needs exactly one of `distances` or `positions`".into(),
                    ))
                }
            };
            if metric.size() != n {
                return Err(Error::CarrierMismatch {
                    left: n,
                    right: metric.size(),
                });
            }
            let scales = m
                .scales
                .iter()
                .map(|s| rational::parse(s))
                .collect::<Result<Vec<_>>>()?;
            UniformFiltration::from_metric(&metric, &scales)?
        }
        _ => {
            return Err(Error::Parse(
                "exactly one of [filtration] or [metric] is required".into(),
            ))
        }
    };
    let bornology = BornologyBasis::from_index_lists(n, &raw.bornology.sets)?;
    let space = UlbSpace::new(filtration, bornology)?;
    if let Some(expected) = raw.bornology.connected_expected {
        let connected = space.bornology().validate().connected;
        if connected != expected {
            return Err(Error::InvalidBornology(format!(
                "connected is {connected}, file expects {expected}"
            )));
        }
    }
    let maps = raw.maps.map(|m| parse_maps(n, m)).transpose()?;
    let group = raw.group.map(parse_group).transpose()?;
    let measures = raw.measures.map(parse_measures).transpose()?;
    Ok(Bundle {
        space,
        maps,
        group,
        measures,
    })
}

fn parse_maps(n: usize, raw: RawMaps) -> Result<MapSet> {
    let mut maps = Vec::new();
    if raw.all_endomaps {
        maps.extend(CarrierMap::all_endomaps(n));
    } else if raw.all_permutations {
        maps.extend(CarrierMap::all_permutations(n));
    }
    for t in raw.tables {
        if t.len() != n {
            return Err(Error::CarrierMismatch {
                left: n,
                right: t.len(),
            });
        }
        let m = CarrierMap::auto(t)?;
        if !maps.contains(&m) {
            maps.push(m);
        }
    }
    if maps.is_empty() {
        return Err(Error::Parse("[maps] lists no maps".into()));
    }
    MapSet::new(maps)
}

fn named_group(name: &str) -> Result<GroupModel> {
    match name {
        "S3" => Ok(GroupModel::symmetric3()),
        "D4" => Ok(GroupModel::dihedral4()),
        "Q8" => Ok(GroupModel::quaternion()),
        _ => match name.strip_prefix('C').and_then(|k| k.parse::<usize>().ok()) {
            Some(k) => GroupModel::cyclic(k),
            None => Err(Error::Parse(format!(
                "unknown group `{name}` (use S3, D4, Q8 or Cn)"
            ))),
        },
    }
}

fn parse_group(raw: RawGroup) -> Result<GroupSection> {
    let group = match (raw.named, raw.table) {
        (Some(name), None) => named_group(&name)?,
        (None, Some(table)) => GroupModel::new(table)?,
        _ => {
            return Err(Error::Parse(
                "[group] needs exactly one of `named` or `table`".into(),
            ))
        }
    };
    let n = group.order();
    let to_set = |l: &Vec<usize>| Subset::from_indices(n, l.iter().copied());
    let filtration = match raw.filtration {
        Some(levels) => {
            IdentityFiltration::new(&group, levels.iter().map(to_set).collect::<Result<_>>()?)?
        }
        None => IdentityFiltration::full(&group),
    };
    let mut auts = match raw.automorphisms.as_deref() {
        None | Some("all") => group.automorphisms(),
        Some("inner") => group.inner_automorphisms(),
        Some(other) => {
            return Err(Error::Parse(format!(
                "automorphisms must be `all` or `inner`, got `{other}`"
            )))
        }
    };
    if let Some(tables) = raw.automorphism_tables {
        auts = vec![CarrierMap::identity(n)];
        for t in tables {
            let f = CarrierMap::auto(t)?;
            if !group.is_automorphism(&f) {
                return Err(Error::InvalidGroup(format!("{f:?} is not an automorphism")));
            }
            if !auts.contains(&f) {
                auts.push(f);
            }
        }
    }
    let basis = match raw.basis {
        Some(sets) => sets.iter().map(to_set).collect::<Result<_>>()?,
        None => symmetric_subsets(&group)
            .into_iter()
            .filter(|s| !s.is_empty())
            .collect(),
    };
    Ok(GroupSection {
        group,
        filtration,
        automorphisms: MapSet::new(auts)?,
        basis,
    })
}

fn parse_measures(raw: RawMeasures) -> Result<MeasureSection> {
    let measures = raw
        .weights
        .iter()
        .map(|w| {
            Measure::new(
                w.iter()
                    .map(|v| rational::parse(v))
                    .collect::<Result<_>>()?,
            )
        })
        .collect::<Result<_>>()?;
    let thresholds = raw
        .thresholds
        .map(|t| {
            t.iter()
                .map(|v| rational::parse(v))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    Ok(MeasureSection {
        family: MeasureFamily::new(measures)?,
        thresholds,
    })
}
