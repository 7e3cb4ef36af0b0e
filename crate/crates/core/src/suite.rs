//! Named verification suites over a loaded [`Bundle`], the three model
//! demos, and identity-ball comparisons.
//!
//! Every suite is deterministic for a given seed; exhaustive modes ignore
//! the seed and the budget only caps randomized instance counts.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gen;
use crate::groupunif::{self, EntourageKind};
use crate::mapspace::{self, ContinuityOutcome, FunctionEntourage, MapSet};
use crate::qorder::{self, Distinctness, PlBijection, RayKind, RaySet};
use crate::rational::{self, int, ratio};
use crate::relalg::{Relation, Subset};
use crate::report::{SuiteReport, Verdict};
use crate::sigma::{self, LimitOutcome, MeasureFamily, PeriodicSequence};
use crate::space::{Bundle, GroupSection, MeasureSection};
use crate::symz::{self, AffinePerm};
use crate::ulb::{CarrierMap, LevelModulus, UlbSpace};

/// Suites runnable with `check`, in the order `all` runs them.
pub const SUITES: &[&str] = &[
    "relalg-laws",
    "filtration",
    "dictionary-roundtrip",
    "coarse-axioms",
    "ulb-structure",
    "morphisms",
    "lemma-suite",
    "composition-continuity",
    "open-subgroup",
    "sin-criterion",
    "group-entourages",
    "lru-agree",
    "coarsely-sin",
    "upper-lower",
    "conjugation-continuity",
    "measure-suite",
];

pub const DEMOS: &[&str] = &["qorder-separations", "sigma-suite", "symz-examples"];

fn table(m: &CarrierMap) -> String {
    let cells: Vec<String> = m.table().iter().map(usize::to_string).collect();
    format!("[{}]", cells.join(","))
}

fn maps_of<'a>(bundle: &'a Bundle, suite: &str) -> Result<&'a MapSet> {
    bundle.maps.as_ref().ok_or_else(|| Error::MissingSection {
        suite: suite.into(),
        section: "maps".into(),
    })
}

fn group_of<'a>(bundle: &'a Bundle, suite: &str) -> Result<&'a GroupSection> {
    bundle.group.as_ref().ok_or_else(|| Error::MissingSection {
        suite: suite.into(),
        section: "group".into(),
    })
}

fn measures_of<'a>(bundle: &'a Bundle, suite: &str) -> Result<&'a MeasureSection> {
    bundle
        .measures
        .as_ref()
        .ok_or_else(|| Error::MissingSection {
            suite: suite.into(),
            section: "measures".into(),
        })
}

/// Runs one suite, or every applicable suite for `all`.
pub fn run_suite(
    bundle: &Bundle,
    name: &str,
    seed: u64,
    budget: Option<usize>,
) -> Result<Vec<SuiteReport>> {
    let space = &bundle.space;
    match name {
        "all" => run_all(bundle, seed, budget),
        "relalg-laws" => Ok(relalg_law_reports(
            bundle.size(),
            seed,
            budget.unwrap_or(1000),
        )),
        "filtration" => Ok(vec![filtration_report(space)]),
        "dictionary-roundtrip" => dictionary_roundtrip(bundle.size(), seed, budget.unwrap_or(200)),
        "coarse-axioms" => coarse_axioms(space, seed, budget.unwrap_or(500)),
        "ulb-structure" => ulb_structure(space),
        "morphisms" => morphisms(space, maps_of(bundle, name)?),
        "lemma-suite" => lemma_suite(space, maps_of(bundle, name)?),
        "composition-continuity" => composition_continuity(space, maps_of(bundle, name)?),
        "open-subgroup" => open_subgroup(space, maps_of(bundle, name)?),
        "sin-criterion" => sin_criterion(space, maps_of(bundle, name)?),
        "group-entourages" => group_entourages(group_of(bundle, name)?),
        "lru-agree" => lru_agree(group_of(bundle, name)?),
        "coarsely-sin" => coarsely_sin(group_of(bundle, name)?),
        "upper-lower" => upper_lower(group_of(bundle, name)?),
        "conjugation-continuity" => conjugation_continuity(group_of(bundle, name)?),
        "measure-suite" => measure_suite(measures_of(bundle, name)?, seed, budget.unwrap_or(100)),
        other => Err(Error::UnknownSuite(other.into())),
    }
}

/// Every suite whose sections are present, in [`SUITES`] order. The
/// open-subgroup suite is skipped unless every map is a bijection.
pub fn run_all(bundle: &Bundle, seed: u64, budget: Option<usize>) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    for name in SUITES {
        if *name == "open-subgroup"
            && !bundle
                .maps
                .as_ref()
                .is_some_and(|m| m.flags().all_bijective)
        {
            continue;
        }
        match run_suite(bundle, name, seed, budget) {
            Ok(reports) => out.extend(reports),
            Err(Error::MissingSection { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub fn demo(name: &str, seed: u64, budget: Option<usize>) -> Result<Vec<SuiteReport>> {
    match name {
        "qorder-separations" => qorder_separations(seed, budget.unwrap_or(100)),
        "sigma-suite" => sigma_demo(seed, budget.unwrap_or(100)),
        "symz-examples" => symz_examples(seed, budget.unwrap_or(1000)),
        other => Err(Error::UnknownSuite(other.into())),
    }
}

type Law = (&'static str, fn(&Relation, &Relation, &Relation) -> bool);

fn laws() -> [Law; 5] {
    [
        ("associativity", |r, s, t| {
            r.compose(s).and_then(|rs| rs.compose(t)).ok()
                == s.compose(t).and_then(|st| r.compose(&st)).ok()
        }),
        ("inverse-reverses", |r, s, _| {
            r.compose(s).map(|rs| rs.inverse()).ok() == s.inverse().compose(&r.inverse()).ok()
        }),
        ("diagonal-unit", |r, _, _| {
            let d = Relation::diagonal(r.size());
            r.compose(&d).ok().as_ref() == Some(r) && d.compose(r).ok().as_ref() == Some(r)
        }),
        ("union-distributes", |r, s, t| {
            let lhs = s.union(t).and_then(|u| r.compose(&u)).ok();
            let rhs = r
                .compose(s)
                .and_then(|rs| r.compose(t).and_then(|rt| rs.union(&rt)))
                .ok();
            lhs == rhs
        }),
        ("image-of-composite", |r, s, t| {
            let a = t.row(0);
            r.compose(s).and_then(|rs| rs.image(a)).ok()
                == r.image(a).and_then(|ra| s.image(&ra)).ok()
        }),
    ]
}

/// Relation-algebra laws on `n` points: every triple when `n ≤ 2`,
/// otherwise `budget` random triples.
pub fn relalg_law_reports(n: usize, seed: u64, budget: usize) -> Vec<SuiteReport> {
    let triples: Vec<(Relation, Relation, Relation)> = if n <= 2 {
        let all: Vec<Relation> = (0..1u64 << (n * n))
            .map(|m| Relation::from_mask(n, m))
            .collect();
        let mut out = Vec::with_capacity(all.len().pow(3));
        for r in &all {
            for s in &all {
                for t in &all {
                    out.push((r.clone(), s.clone(), t.clone()));
                }
            }
        }
        out
    } else {
        let mut rng = gen::rng(seed);
        (0..budget)
            .map(|_| {
                (
                    gen::relation(&mut rng, n),
                    gen::relation(&mut rng, n),
                    gen::relation(&mut rng, n),
                )
            })
            .collect()
    };
    laws()
        .into_iter()
        .map(|(name, law)| {
            let failure = triples.iter().position(|(r, s, t)| !law(r, s, t));
            let mut rep =
                SuiteReport::new("relalg-laws", name, Verdict::from_bool(failure.is_none()))
                    .with("carrier", n)
                    .with("mode", if n <= 2 { "exhaustive" } else { "random" })
                    .with("checks", triples.len());
            if let Some(i) = failure {
                let (r, s, t) = &triples[i];
                rep.push("witness", format!("R={r} S={s} T={t}"));
            }
            rep
        })
        .collect()
}

fn filtration_report(space: &UlbSpace) -> SuiteReport {
    let f = space.filtration();
    let v = f.validate();
    let mut rep = SuiteReport::new("filtration", "levels", Verdict::from_bool(v.valid))
        .with("depth", f.depth())
        .with("hausdorff_at_resolution", v.hausdorff_at_resolution)
        .with("non_archimedean", f.is_non_archimedean())
        .with("closed_at_finest", f.is_closed_at_finest())
        .with(
            "certified_index",
            space
                .certified_index()
                .map_or("none".to_string(), |c| c.to_string()),
        );
    if let Some(first) = v.violations.first() {
        rep.push("witness", first);
    }
    rep
}

fn basis_string(sets: &[Subset]) -> String {
    sets.iter()
        .map(Subset::to_string)
        .collect::<Vec<_>>()
        .join("")
}

fn dictionary_roundtrip(n: usize, seed: u64, budget: usize) -> Result<Vec<SuiteReport>> {
    let mut rng = gen::rng(seed);
    (0..budget)
        .map(|i| {
            let b = gen::bornology(&mut rng, n);
            let rt = b.bounded_round_trip()?;
            let mut rep = SuiteReport::new(
                "dictionary-roundtrip",
                format!("#{i}"),
                Verdict::from_bool(rt.agrees()),
            )
            .with("basis", basis_string(b.sets()))
            .with("subsets_checked", rt.subsets_checked);
            if let Some(s) = rt.mismatch {
                rep.push("witness", s);
            }
            Ok(rep)
        })
        .collect()
}

fn coarse_axioms(space: &UlbSpace, seed: u64, samples: usize) -> Result<Vec<SuiteReport>> {
    let r = space
        .bornology()
        .coarse_axioms_suite(&mut gen::rng(seed), samples)?;
    let mut rep = SuiteReport::new("coarse-axioms", "bornology", Verdict::from_bool(r.passed()))
        .with("mode", if r.exhaustive { "exhaustive" } else { "random" })
        .with("checks", r.checks)
        .with("failures", r.failures.len())
        .with("coarsely_connected", r.coarsely_connected)
        .with("bornology_connected", r.bornology_connected);
    if let Some(f) = r.failures.first() {
        rep.push("witness", format!("{} on {}", f.axiom, f.left));
    }
    Ok(vec![rep])
}

fn ulb_structure(space: &UlbSpace) -> Result<Vec<SuiteReport>> {
    let Some(c) = space.certified_index() else {
        return Ok(vec![SuiteReport::new(
            "ulb-structure",
            "space",
            Verdict::ResolutionExhausted,
        )
        .with(
            "witness",
            format!(
                "no level up to {} has bounded images of all basis sets",
                space.filtration().depth()
            ),
        )]);
    };
    let r = space.structural_checks()?;
    let mut rep = SuiteReport::new("ulb-structure", "space", Verdict::from_bool(r.passed()))
        .with("certified_index", c)
        .with(
            "certified_components",
            basis_string(&r.certified_components),
        )
        .with("finest_components", basis_string(&r.finest_components))
        .with("bornology_connected", r.bornology_connected);
    if let Some(b) = r.unbounded_closure {
        rep.push("witness", format!("closure of basis set {b} is unbounded"));
    }
    Ok(vec![rep])
}

fn morphisms(space: &UlbSpace, maps: &MapSet) -> Result<Vec<SuiteReport>> {
    maps.maps()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let r = space.is_morphism(f)?;
            let verdict = if r.modest {
                r.uniformly_continuous
            } else {
                Verdict::Fail
            };
            let mut rep = SuiteReport::new("morphisms", format!("map{i}"), verdict)
                .with("map", table(f))
                .with("modest", r.modest)
                .with("uniformly_continuous", r.uniformly_continuous);
            if let Some(b) = r.unbounded_image_of {
                rep.push("witness", format!("image of basis set {b} is unbounded"));
            } else if r.uniformly_continuous != Verdict::Pass {
                for (bi, b) in space.bornology().sets().iter().enumerate() {
                    let m = space.uniform_continuity_modulus(f, b)?;
                    let bad = m.levels.iter().enumerate().find_map(|(lvl, l)| match l {
                        LevelModulus::Violated { pair }
                        | LevelModulus::ResolutionExhausted { pair } => Some((lvl, *pair)),
                        LevelModulus::At(_) => None,
                    });
                    if let Some((lvl, (x, y))) = bad {
                        rep.push(
                            "witness",
                            format!(
                                "basis set {bi}, level {lvl}: pair ({x},{y}) at the finest level"
                            ),
                        );
                        break;
                    }
                }
            }
            Ok(rep)
        })
        .collect()
}

fn lemma_suite(space: &UlbSpace, maps: &MapSet) -> Result<Vec<SuiteReport>> {
    let r = mapspace::lemma_suite(space, maps)?;
    Ok(r.families()
        .iter()
        .map(|fam| {
            let mut rep = SuiteReport::new(
                "lemma-suite",
                fam.name,
                Verdict::from_bool(fam.failures == 0),
            )
            .with("checks", fam.checks)
            .with("failures", fam.failures);
            if let Some(w) = &fam.first_witness {
                rep.push("witness", w);
            }
            rep
        })
        .collect())
}

/// For every basis set and every target level with a half-step inside the
/// truncation, builds and verifies the witness for every pair of maps.
fn composition_continuity(space: &UlbSpace, maps: &MapSet) -> Result<Vec<SuiteReport>> {
    let Some(_) = space.certified_index() else {
        return Ok(vec![SuiteReport::new(
            "composition-continuity",
            "space",
            Verdict::PreconditionUnmet,
        )
        .with("witness", "space is not certified at this resolution")]);
    };
    let k = space.filtration().depth();
    let mut out = Vec::new();
    for (bi, b) in space.bornology().sets().iter().enumerate() {
        for i in 0..k {
            let mut verdict = Verdict::Pass;
            let (mut witnesses, mut exhausted, mut unbounded) = (0, 0, 0);
            let mut sample = None;
            let mut witness = None;
            for g in 0..maps.len() {
                for h in 0..maps.len() {
                    match mapspace::composition_continuity_witness(space, maps, g, h, b, i)? {
                        ContinuityOutcome::Witness(w) => {
                            witnesses += 1;
                            unbounded += usize::from(!w.enlarged_set_bounded);
                            if sample.is_none() {
                                sample = Some(format!(
                                    "g={g} h={h} j={} B'={}",
                                    w.level, w.enlarged_set
                                ));
                            }
                            if let Some((p, q)) = w.counterexample {
                                verdict = Verdict::Fail;
                                witness.get_or_insert(format!("g={g} h={h} g'={p} h'={q}"));
                            }
                        }
                        ContinuityOutcome::ResolutionExhausted { reason } => {
                            exhausted += 1;
                            verdict = verdict.and(Verdict::ResolutionExhausted);
                            witness.get_or_insert(format!("g={g} h={h}: {reason}"));
                        }
                    }
                }
            }
            let mut rep =
                SuiteReport::new("composition-continuity", format!("B{bi}/level{i}"), verdict)
                    .with("pairs", maps.len() * maps.len())
                    .with("witnesses", witnesses)
                    .with("exhausted", exhausted)
                    .with("unbounded_enlargements", unbounded);
            if let Some(s) = sample {
                rep.push("sample", s);
            }
            if let Some(w) = witness {
                rep.push("witness", w);
            }
            out.push(rep);
        }
    }
    if out.is_empty() {
        out.push(
            SuiteReport::new(
                "composition-continuity",
                "space",
                Verdict::ResolutionExhausted,
            )
            .with("witness", "depth 0 leaves no half-step level"),
        );
    }
    Ok(out)
}

/// Runs the subgroup check on `E_i[B]` for every idempotent level, where
/// the set is `E_i`-closed by construction.
fn open_subgroup(space: &UlbSpace, maps: &MapSet) -> Result<Vec<SuiteReport>> {
    let f = space.filtration();
    let mut out = Vec::new();
    for i in (0..=f.depth()).filter(|&i| f.level(i).is_idempotent()) {
        for (bi, b) in space.bornology().sets().iter().enumerate() {
            let closed = f.level(i).image(b)?;
            let r = mapspace::open_subgroup_check(space, maps, &closed, i)?;
            let mut rep = SuiteReport::new("open-subgroup", format!("B{bi}/level{i}"), r.verdict)
                .with("set", &closed)
                .with("ball_size", r.ball_size);
            if let Some(w) = r.witness {
                rep.push("witness", w);
            }
            out.push(rep);
        }
    }
    if out.is_empty() {
        out.push(
            SuiteReport::new("open-subgroup", "space", Verdict::PreconditionUnmet)
                .with("witness", "no idempotent level"),
        );
    }
    Ok(out)
}

/// Runs the invariance check with the members of the map set that preserve
/// both the basis set and the level.
fn sin_criterion(space: &UlbSpace, maps: &MapSet) -> Result<Vec<SuiteReport>> {
    let f = space.filtration();
    let mut out = Vec::new();
    for (bi, b) in space.bornology().sets().iter().enumerate() {
        for i in 0..=f.depth() {
            let e = f.level(i);
            let preserving: Vec<CarrierMap> = maps
                .maps()
                .iter()
                .filter(|g| g.is_bijective() && g.image(b) == *b && g.image_relation(e) == *e)
                .cloned()
                .collect();
            let instance = format!("B{bi}/level{i}");
            if preserving.is_empty() {
                out.push(
                    SuiteReport::new("sin-criterion", instance, Verdict::PreconditionUnmet)
                        .with("witness", "no member preserves the set and level"),
                );
                continue;
            }
            let used = MapSet::new(preserving)?;
            let r = mapspace::sin_criterion_check(space, &used, b, i)?;
            let mut rep = SuiteReport::new("sin-criterion", instance, r.verdict)
                .with("maps_used", used.len())
                .with("ball_size", r.ball_size);
            if let Some(w) = r.witness {
                rep.push("witness", w);
            }
            out.push(rep);
        }
    }
    Ok(out)
}

fn group_entourages(g: &GroupSection) -> Result<Vec<SuiteReport>> {
    let group = &g.group;
    let n = group.order();
    let mut out = Vec::new();
    for (i, v) in g.filtration.levels().iter().enumerate() {
        let l = groupunif::group_entourage(group, v, EntourageKind::Left)?;
        let r = groupunif::group_entourage(group, v, EntourageKind::Right)?;
        let up = groupunif::group_entourage(group, v, EntourageKind::Upper)?;
        let low = groupunif::group_entourage(group, v, EntourageKind::Lower)?;
        let mut failures = Vec::new();
        if up != l.intersection(&r)? {
            failures.push("upper differs from left ∩ right".to_string());
        }
        if !l.union(&r)?.is_subset(&low) {
            failures.push("lower misses left ∪ right".to_string());
        }
        let left_invariant = l
            .pairs()
            .all(|(x, y)| (0..n).all(|a| l.contains(group.mul(a, x), group.mul(a, y))));
        let right_invariant = r
            .pairs()
            .all(|(x, y)| (0..n).all(|a| r.contains(group.mul(x, a), group.mul(y, a))));
        if !left_invariant || !right_invariant {
            failures.push("one-sided invariance fails".to_string());
        }
        for (bi, b) in g.basis.iter().enumerate() {
            if low.image(b)? != groupunif::double_coset_image(group, v, b) {
                failures.push(format!("lower image of basis set {bi} is not V·B·V"));
                break;
            }
        }
        let mut rep = SuiteReport::new(
            "group-entourages",
            format!("level{i}"),
            Verdict::from_bool(failures.is_empty()),
        )
        .with("neighborhood", v)
        .with("basis_sets", g.basis.len());
        if let Some(w) = failures.first() {
            rep.push("witness", w);
        }
        out.push(rep);
    }
    Ok(out)
}

fn lru_agree(g: &GroupSection) -> Result<Vec<SuiteReport>> {
    let r = groupunif::lru_agree_check(&g.group, g.automorphisms.maps(), &g.filtration, &g.basis)?;
    let mut rep = SuiteReport::new("lru-agree", "automorphisms", Verdict::from_bool(r.passed()))
        .with("automorphisms", g.automorphisms.len())
        .with("checks", r.checks);
    if let Some((f, h, b, i)) = r.counterexample {
        rep.push("witness", format!("f={f} g={h} basis set {b} level {i}"));
    }
    Ok(vec![rep])
}

fn coarsely_sin(g: &GroupSection) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    for (i, u) in g.filtration.levels().iter().enumerate() {
        for (bi, b) in g.basis.iter().enumerate() {
            let found = groupunif::coarsely_sin_check(&g.group, &g.filtration, u, b);
            let rep = match found {
                Some(j) => {
                    SuiteReport::new("coarsely-sin", format!("B{bi}/level{i}"), Verdict::Pass)
                        .with("level", j)
                }
                None => SuiteReport::new(
                    "coarsely-sin",
                    format!("B{bi}/level{i}"),
                    Verdict::ResolutionExhausted,
                )
                .with(
                    "witness",
                    format!(
                        "no level up to {} conjugates into level {i}",
                        g.filtration.depth()
                    ),
                ),
            };
            out.push(rep);
        }
    }
    Ok(out)
}

fn upper_lower(g: &GroupSection) -> Result<Vec<SuiteReport>> {
    let r = groupunif::upper_lower_compare(&g.group, &g.automorphisms, &g.filtration, &g.basis)?;
    let mut rep = SuiteReport::new("upper-lower", "automorphisms", r.verdict)
        .with("order", r.comparison.order)
        .with("coarsely_sin", r.coarsely_sin)
        .with("upper_discrete", r.comparison.first_discrete)
        .with("lower_discrete", r.comparison.second_discrete);
    if r.verdict == Verdict::Fail {
        rep.push(
            "witness",
            format!(
                "upper {} lower despite conjugation control",
                r.comparison.order
            ),
        );
    }
    Ok(vec![rep])
}

fn conjugation_continuity(g: &GroupSection) -> Result<Vec<SuiteReport>> {
    match groupunif::conjugation_continuity_check(
        &g.group,
        &g.automorphisms,
        &g.filtration,
        &g.basis,
    ) {
        Ok(r) => {
            let mut rep = SuiteReport::new(
                "conjugation-continuity",
                "inner",
                Verdict::from_bool(r.passed()),
            )
            .with("checks", r.checks);
            if let Some((v, x, b, i)) = r.counterexample {
                rep.push("witness", format!("v={v} x={x} basis set {b} level {i}"));
            }
            Ok(vec![rep])
        }
        Err(Error::MissingInner(x)) => Ok(vec![SuiteReport::new(
            "conjugation-continuity",
            "inner",
            Verdict::PreconditionUnmet,
        )
        .with(
            "witness",
            format!("inner automorphism of {x} is not listed"),
        )]),
        Err(e) => Err(e),
    }
}

/// A set of ground points given as a bit mask, e.g. `{0,2}`.
fn mask_set(mask: usize, ground: usize) -> Subset {
    Subset::from_indices(ground, (0..ground).filter(|i| mask >> i & 1 == 1)).expect("in range")
}

fn default_thresholds(fam: &MeasureFamily) -> Vec<rational::Rational> {
    let top = fam
        .measures()
        .iter()
        .map(|m| m.of(fam.algebra_size() - 1))
        .max()
        .unwrap_or_else(|| int(1))
        + int(1);
    let gap = fam.min_positive_value().unwrap_or_else(|| int(1));
    let mut out = vec![top];
    while out.len() < 8 && out.last().expect("nonempty") >= &gap {
        let next = out.last().expect("nonempty") / int(2);
        out.push(next);
    }
    out
}

fn measure_reports(
    suite: &str,
    fam: &MeasureFamily,
    thresholds: &[rational::Rational],
    label: &str,
) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    let sep = sigma::separation_check(fam)?;
    let mut rep = SuiteReport::new(
        suite,
        format!("{label}/separation"),
        Verdict::from_bool(sep.equivalence_holds()),
    )
    .with("separates", sep.separates)
    .with("hausdorff", sep.hausdorff);
    if let Some((a, b)) = sep.witness {
        rep.push(
            "inseparable",
            format!(
                "{}~{}",
                mask_set(a, fam.ground()),
                mask_set(b, fam.ground())
            ),
        );
    }
    out.push(rep);

    let na = sigma::zero_one_non_arch(fam)?;
    out.push(
        SuiteReport::new(
            suite,
            format!("{label}/non-archimedean"),
            Verdict::from_bool(na.passed()),
        )
        .with("gap", rational::format(&na.gap))
        .with("zero_one_valued", na.zero_one_valued),
    );

    let space = sigma::measure_space(fam, thresholds)?;
    let valid = space.filtration().validate().valid;
    out.push(
        SuiteReport::new(
            suite,
            format!("{label}/filtration"),
            Verdict::from_bool(valid),
        )
        .with(
            "thresholds",
            thresholds
                .iter()
                .map(rational::format)
                .collect::<Vec<_>>()
                .join(","),
        )
        .with(
            "hausdorff_at_resolution",
            space.filtration().finest().is_diagonal(),
        ),
    );

    let maps = sigma::preserving_maps(fam);
    let whole = Subset::full(fam.algebra_size());
    let mut verdict = Verdict::Pass;
    for i in 0..=space.filtration().depth() {
        verdict = verdict.and(mapspace::sin_criterion_check(&space, &maps, &whole, i)?.verdict);
    }
    out.push(
        SuiteReport::new(suite, format!("{label}/invariance"), verdict)
            .with("preserving_maps", maps.len()),
    );
    Ok(out)
}

fn limit_report(
    suite: &str,
    label: String,
    seq: &PeriodicSequence,
    fam: &MeasureFamily,
    expect_cauchy: bool,
) -> Result<SuiteReport> {
    let outcome = sigma::cauchy_limit_formula(seq, fam)?;
    let cauchy = matches!(outcome, LimitOutcome::Converges { .. });
    let ok = outcome.verified() && cauchy == expect_cauchy;
    let mut rep = SuiteReport::new(suite, label, Verdict::from_bool(ok))
        .with(
            "prefix",
            seq.prefix
                .iter()
                .map(|&m| mask_set(m, fam.ground()).to_string())
                .collect::<String>(),
        )
        .with(
            "cycle",
            seq.cycle
                .iter()
                .map(|&m| mask_set(m, fam.ground()).to_string())
                .collect::<String>(),
        );
    match outcome {
        LimitOutcome::Converges { limit, .. } => rep.push("limit", mask_set(limit, fam.ground())),
        LimitOutcome::Diverges {
            measure,
            positions,
            distance,
        } => rep.push(
            "divergence",
            format!(
                "measure {measure} keeps cycle positions {}/{} at {}",
                positions.0,
                positions.1,
                rational::format(&distance)
            ),
        ),
    }
    Ok(rep)
}

fn measure_suite(m: &MeasureSection, seed: u64, budget: usize) -> Result<Vec<SuiteReport>> {
    let fam = &m.family;
    let thresholds = m
        .thresholds
        .clone()
        .unwrap_or_else(|| default_thresholds(fam));
    let mut out = measure_reports("measure-suite", fam, &thresholds, "family")?;
    let mut rng = gen::rng(seed);
    let (mut converged, mut diverged, mut bad) = (0, 0, None);
    for i in 0..budget {
        let seq = gen::cauchy_sequence(&mut rng, fam);
        let rep = limit_report("measure-suite", format!("cauchy#{i}"), &seq, fam, true)?;
        converged += 1;
        if rep.verdict != Verdict::Pass {
            bad.get_or_insert(rep.to_record());
        }
        if i % 5 == 0 {
            if let Some(seq) = gen::non_cauchy_sequence(&mut rng, fam) {
                let rep =
                    limit_report("measure-suite", format!("divergent#{i}"), &seq, fam, false)?;
                diverged += 1;
                if rep.verdict != Verdict::Pass {
                    bad.get_or_insert(rep.to_record());
                }
            }
        }
    }
    let mut rep = SuiteReport::new(
        "measure-suite",
        "family/limits",
        Verdict::from_bool(bad.is_none()),
    )
    .with("cauchy", converged)
    .with("divergent", diverged);
    if let Some(w) = bad {
        rep.push("witness", w);
    }
    out.push(rep);
    Ok(out)
}

/// Basis-set index and level pairs naming function entourages.
type BasisSpec = Vec<(usize, usize)>;

/// Parses `B@i,B@i / B@i,…`: basis-set index (or `*` for all) at a level,
/// for each of the two bases.
fn parse_basis_spec(space: &UlbSpace, spec: &str) -> Result<(BasisSpec, BasisSpec)> {
    let (first, second) = spec
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("expected two bases separated by `/` in `{spec}`")))?;
    let sets = space.bornology().sets().len();
    let depth = space.filtration().depth();
    let side = |text: &str| -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for entry in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (b, i) = entry
                .split_once('@')
                .ok_or_else(|| Error::Parse(format!("expected `set@level`, got `{entry}`")))?;
            let level: usize = i
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad level in `{entry}`")))?;
            if level > depth {
                return Err(Error::IndexOutOfRange {
                    index: level,
                    size: depth + 1,
                });
            }
            match b.trim() {
                "*" => out.extend((0..sets).map(|s| (s, level))),
                idx => {
                    let s: usize = idx
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad set index in `{entry}`")))?;
                    if s >= sets {
                        return Err(Error::IndexOutOfRange {
                            index: s,
                            size: sets,
                        });
                    }
                    out.push((s, level));
                }
            }
        }
        if out.is_empty() {
            return Err(Error::Parse(format!("empty basis in `{spec}`")));
        }
        Ok(out)
    };
    Ok((side(first)?, side(second)?))
}

/// Compares the identity filters generated by two lists of entourages
/// `𝐄_{B, E_i}` on the bundle's map set. Biconvergence is used when every
/// map is bijective.
pub fn compare(bundle: &Bundle, spec: &str) -> Result<SuiteReport> {
    let maps = maps_of(bundle, "compare")?;
    let space = &bundle.space;
    let (first, second) = parse_basis_spec(space, spec)?;
    let bi = maps.flags().all_bijective;
    let build = |list: &[(usize, usize)]| -> Result<Vec<FunctionEntourage>> {
        list.iter()
            .map(|&(s, i)| {
                mapspace::big_e(
                    maps,
                    space.filtration(),
                    &space.bornology().sets()[s],
                    i,
                    bi,
                )
            })
            .collect()
    };
    let r = mapspace::compare_neighborhood_bases(maps, &build(&first)?, &build(&second)?)?;
    let mut rep = SuiteReport::new("compare", spec.replace(' ', ""), Verdict::Pass)
        .with("order", r.order)
        .with("biconvergence", bi)
        .with("first_discrete", r.first_discrete)
        .with("second_discrete", r.second_discrete);
    if let Some(u) = r.second_uncovered {
        rep.push("uncovered_second_ball", u);
    }
    if let Some(u) = r.first_uncovered {
        rep.push("uncovered_first_ball", u);
    }
    Ok(rep)
}

fn ray(kind: RayKind) -> RaySet {
    match kind {
        RayKind::TwoSided => RaySet::two_sided(int(0), int(1)).expect("0 ≤ 1"),
        RayKind::UpperRay => RaySet::upper(int(0)),
        RayKind::LowerRay => RaySet::lower(int(0)),
    }
}

/// The rational model: non-discreteness of each fixator topology, the six
/// ordered separations, and discreteness of the supremum of the two ray
/// topologies.
pub fn qorder_separations(seed: u64, samples: usize) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    for kind in RayKind::ALL {
        let s = ray(kind);
        let g = qorder::non_discrete_witness(&s);
        let ok = qorder::fixes_pointwise(&g, &s) && !g.is_identity();
        out.push(
            SuiteReport::new(
                "qorder-separations",
                format!("non-discrete/{kind}"),
                Verdict::from_bool(ok),
            )
            .with("claim", "the fixator of a basis set is not trivial")
            .with("set", &s)
            .with("g", &g),
        );
    }
    for a in RayKind::ALL {
        for b in RayKind::ALL.into_iter().filter(|&b| b != a) {
            let w = qorder::distinctness_witness(a, b)?;
            let mut rep = SuiteReport::new(
                "qorder-separations",
                format!("distinct/{a}/{b}"),
                Verdict::from_bool(w.verified()),
            );
            match &w {
                Distinctness::Escapes { set, cases, .. } => {
                    rep.push(
                        "claim",
                        format!("{b} topology is not coarser than {a} topology"),
                    );
                    rep.push("set", set);
                    rep.push("cases", cases.len());
                    if let Some((s, g)) = cases.first() {
                        rep.push("sample", format!("{s} fixed by {g}"));
                    }
                }
                Distinctness::Contained { inclusions, .. } => {
                    rep.push(
                        "claim",
                        format!("{a} topology is strictly finer than {b} topology"),
                    );
                    rep.push("inclusions", inclusions.len());
                }
            }
            out.push(rep);
        }
    }
    let mut rng = gen::rng(seed);
    let mut sample: Vec<PlBijection> = (0..samples).map(|_| gen::pl_bijection(&mut rng)).collect();
    sample.push(PlBijection::identity());
    let bump = PlBijection::bump(&int(2), &int(3))?;
    sample.push(bump.clone());
    let sup = qorder::sup_is_discrete_check(&int(-1), &int(1), &sample)?;
    let excluded = !qorder::fixes_pointwise(&bump, &RaySet::upper(int(-1)));
    out.push(
        SuiteReport::new(
            "qorder-separations",
            "sup-discrete",
            Verdict::from_bool(sup.passed() && excluded),
        )
        .with("claim", "fixing (-inf,1] and [-1,inf) forces the identity")
        .with("samples", sup.samples)
        .with("fixers", sup.fixers)
        .with("pieces_covered", sup.pieces_covered)
        .with("bump_excluded", excluded),
    );
    let s = RaySet::two_sided(int(0), int(1))?;
    let gens = vec![
        bump,
        PlBijection::bump(&int(5), &ratio(13, 2))?,
        PlBijection::affine(int(1), int(1))?,
    ];
    let fix = qorder::fixator_subgroup_check(&s, &gens);
    out.push(
        SuiteReport::new(
            "qorder-separations",
            "fixator-subgroup",
            Verdict::from_bool(fix.passed()),
        )
        .with("claim", "the fixator of [0,1] is a subgroup")
        .with("words", fix.words)
        .with("fixators", fix.fixators),
    );
    Ok(out)
}

/// The measure model on built-in families plus the limit formula and atom
/// recovery.
pub fn sigma_demo(seed: u64, budget: usize) -> Result<Vec<SuiteReport>> {
    let families = [
        ("diracs", MeasureFamily::diracs(3)?),
        (
            "counting",
            MeasureFamily::new(vec![sigma::Measure::counting(3)?])?,
        ),
        ("zero", MeasureFamily::new(vec![sigma::Measure::zero(3)?])?),
    ];
    let mut out = Vec::new();
    for (label, fam) in &families {
        out.extend(measure_reports(
            "sigma-suite",
            fam,
            &default_thresholds(fam),
            label,
        )?);
    }
    let dirac0 = MeasureFamily::new(vec![sigma::Measure::dirac(2, 0)?])?;
    let counting2 = MeasureFamily::new(vec![sigma::Measure::counting(2)?])?;
    out.push(limit_report(
        "sigma-suite",
        "limit/alternating".into(),
        &PeriodicSequence::new(vec![], vec![0b01, 0b11])?,
        &dirac0,
        true,
    )?);
    out.push(limit_report(
        "sigma-suite",
        "limit/swap".into(),
        &PeriodicSequence::new(vec![], vec![0b01, 0b10])?,
        &counting2,
        false,
    )?);
    let mut rng = gen::rng(seed);
    let mut failures = 0;
    for _ in 0..budget {
        let fam = gen::measure_family(&mut rng, 4);
        let sep = sigma::separation_check(&fam)?;
        failures += usize::from(!sep.equivalence_holds());
    }
    out.push(
        SuiteReport::new(
            "sigma-suite",
            "random-separation",
            Verdict::from_bool(failures == 0),
        )
        .with("families", budget)
        .with("failures", failures),
    );
    for n in 1..=3 {
        let r = sigma::atom_recovery(n)?;
        let expected = (1..=n).product::<usize>();
        out.push(
            SuiteReport::new(
                "sigma-suite",
                format!("atoms/n={n}"),
                Verdict::from_bool(r.all_induced && r.automorphisms == expected),
            )
            .with("automorphisms", r.automorphisms)
            .with("expected", expected),
        );
    }
    Ok(out)
}

/// The integer model: the upper certificate excludes every sampled
/// non-identity element, and the lower certificate agrees with pointwise
/// membership.
pub fn symz_examples(seed: u64, samples: usize) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    let rho = symz::upper_discreteness_certificate(&AffinePerm::shift(1), 1)?;
    out.push(
        SuiteReport::new(
            "symz-examples",
            "upper/rho",
            Verdict::from_bool(rho.detected_by.is_some()),
        )
        .with("claim", "the shift leaves the upper identity ball")
        .with(
            "detected_by",
            rho.detected_by.map_or("none".into(), |p| p.to_string()),
        ),
    );
    let lower = symz::lower_pointwise_certificate(&AffinePerm::shift(1), &[0]);
    out.push(
        SuiteReport::new(
            "symz-examples",
            "lower/rho",
            Verdict::from_bool(!lower.inside() && lower.transfers_hold()),
        )
        .with(
            "claim",
            "the shift moves key 0, so it leaves the lower ball of its fixator",
        )
        .with("image", lower.keys[0].image),
    );
    let mut rng = gen::rng(seed);
    let (mut non_identity, mut detected, mut undetected) = (0, 0, None);
    let (mut agreements, mut disagreement) = (0, None);
    for i in 0..samples {
        let x = gen::affine_perm(&mut rng, 5);
        let cert = symz::upper_discreteness_certificate(&x, 5)?;
        if !x.is_identity() {
            non_identity += 1;
            if cert.detected_by.is_some() {
                detected += 1;
            } else {
                undetected.get_or_insert(x.to_string());
            }
        } else if !cert.forced_identity {
            undetected.get_or_insert(x.to_string());
        }
        let keys: Vec<i64> = (0..rng.gen_range(0..=3))
            .map(|_| rng.gen_range(-8..=8))
            .collect();
        let low = symz::lower_pointwise_certificate(&x, &keys);
        let pointwise = keys.iter().all(|&k| x.apply(k) == k);
        if low.inside() == pointwise && low.transfers_hold() {
            agreements += 1;
        } else {
            disagreement.get_or_insert(format!("#{i} {x} keys {keys:?}"));
        }
    }
    let mut rep = SuiteReport::new(
        "symz-examples",
        "upper/random",
        Verdict::from_bool(undetected.is_none()),
    )
    .with("samples", samples)
    .with("non_identity", non_identity)
    .with("detected", detected)
    .with("family_size", symz::detection_family(5).len());
    if let Some(w) = undetected {
        rep.push("witness", w);
    }
    out.push(rep);
    let mut rep = SuiteReport::new(
        "symz-examples",
        "lower/random",
        Verdict::from_bool(disagreement.is_none()),
    )
    .with("samples", samples)
    .with("agreements", agreements);
    if let Some(w) = disagreement {
        rep.push("witness", w);
    }
    out.push(rep);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{exit_code, render, Format};
    use crate::space::parse_space;

    const LINE3: &str = r#"
        [carrier]
        size = 3
        [metric]
        positions = [0, 1, 2]
        scales = ["4", "2", "1"]
        [bornology]
        sets = [[0, 1, 2]]
        [maps]
        all_endomaps = true
    "#;

    #[test]
    fn default_suites_pass_on_line() {
        let b = parse_space(LINE3).unwrap();
        for name in [
            "relalg-laws",
            "filtration",
            "coarse-axioms",
            "ulb-structure",
            "lemma-suite",
            "composition-continuity",
        ] {
            let reps = run_suite(&b, name, 1, Some(50)).unwrap();
            assert_eq!(
                exit_code(&reps),
                0,
                "{name}: {}",
                render(&reps, Format::Records)
            );
        }
        let reps = run_suite(&b, "dictionary-roundtrip", 7, Some(200)).unwrap();
        assert_eq!(reps.len(), 200);
        assert!(reps.iter().all(|r| r.verdict == Verdict::Pass));
    }

    #[test]
    fn missing_sections_and_unknown_suites() {
        let b = parse_space(LINE3).unwrap();
        assert!(matches!(
            run_suite(&b, "lru-agree", 0, None),
            Err(Error::MissingSection { .. })
        ));
        assert!(matches!(
            run_suite(&b, "nope", 0, None),
            Err(Error::UnknownSuite(_))
        ));
        assert!(matches!(demo("nope", 0, None), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn compare_spec() {
        let b = parse_space(LINE3).unwrap();
        let r = compare(&b, "0@2 / 0@1").unwrap();
        assert_eq!(r.get("order"), Some("finer"));
        assert_eq!(
            compare(&b, "*@1 / 0@1").unwrap().get("order"),
            Some("equivalent")
        );
        assert!(compare(&b, "0@9 / 0@1").is_err());
        assert!(compare(&b, "0@1").is_err());
    }

    #[test]
    fn demos_pass() {
        for name in DEMOS {
            let reps = demo(name, 5, Some(40)).unwrap();
            assert_eq!(exit_code(&reps), 0, "{}", render(&reps, Format::Records));
        }
    }

    #[test]
    fn deterministic_records() {
        let b = parse_space(LINE3).unwrap();
        let once = render(&run_all(&b, 9, Some(20)).unwrap(), Format::Records);
        let twice = render(&run_all(&b, 9, Some(20)).unwrap(), Format::Records);
        assert_eq!(once, twice);
    }
}
