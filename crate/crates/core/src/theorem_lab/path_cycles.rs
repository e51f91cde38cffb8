//! Cycles whose three shadows would all be paths.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;

use super::lattice::{add, corners, sample_closed_walk, walk_chain, UNIT3};
use super::symmetry::{canonical_cycle, P3};
use super::{sample_rng, shadow_reports, triple_key, Mode, SearchConfig, SearchError, SearchReport};
use crate::arrangement::Classification;
use crate::curve::PolyChain;
use crate::strands::check_two_strands;

struct Outcome {
    key: String,
    all_paths: bool,
    two_strand_checks: usize,
    two_strand_violations: usize,
    canonical: Vec<P3>,
    chain: PolyChain,
}

fn examine(walk: &[P3]) -> Outcome {
    let chain = walk_chain(walk, true);
    let reports = shadow_reports(&chain);
    let two = check_two_strands(&chain);
    Outcome {
        key: triple_key(&reports),
        all_paths: reports
            .iter()
            .all(|r| r.classification == Classification::Path),
        two_strand_checks: two.checked,
        two_strand_violations: two.violations.len(),
        canonical: canonical_cycle(&corners(walk, true)),
        chain,
    }
}

fn record(report: &mut SearchReport, o: Outcome) {
    report.instances_checked += 1;
    report.bump(&o.key, 1);
    report.stat("twoStrandChecks", o.two_strand_checks as u64);
    report.stat("twoStrandViolations", o.two_strand_violations as u64);
    if o.all_paths || o.two_strand_violations > 0 {
        report.counterexamples.push(o.chain);
    }
}

/// Looks for simple lattice cycles whose three shadows are all paths, and
/// checks on the way that two path shadows force two strands in one of them.
///
/// With `sample_count > 0` cycles are sampled; with 0 every cycle of length
/// up to `max_length` in the box is enumerated once up to symmetry.
pub fn search_path_shadow_cycles(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.expect_mode(Mode::PathShadowCycles)?;
    if cfg.max_length < 4 {
        return Err(SearchError::InvalidConfig("maxLength must be at least 4".into()));
    }
    let t0 = Instant::now();
    let mut report = SearchReport::new(cfg);
    report.stat("twoStrandChecks", 0);
    report.stat("twoStrandViolations", 0);
    if cfg.sample_count > 0 {
        let outcomes: Vec<Outcome> = (0..cfg.sample_count)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(cfg.seed, i);
                examine(&sample_closed_walk(&mut rng, cfg.grid_max, cfg.max_length))
            })
            .collect();
        let mut distinct = BTreeSet::new();
        for o in outcomes {
            distinct.insert(o.canonical.clone());
            record(&mut report, o);
        }
        report.distinct_instances = Some(distinct.len() as u64);
    } else {
        let walks = enumerate_cycles(cfg)?;
        report.distinct_instances = Some(walks.len() as u64);
        let outcomes: Vec<Outcome> = walks.par_iter().map(|w| examine(w)).collect();
        for o in outcomes {
            record(&mut report, o);
        }
    }
    report.elapsed = t0.elapsed();
    Ok(report)
}

/// Every self-avoiding closed unit walk of length `4..=max_length` in the
/// box, one per symmetry class, as canonical corner sequences.
fn enumerate_cycles(cfg: &SearchConfig) -> Result<Vec<Vec<P3>>, SearchError> {
    let g = cfg.grid_max;
    let cells = ((g + 1) as u64).pow(3);
    let estimate = 5u64
        .checked_pow(cfg.max_length as u32 - 2)
        .and_then(|x| x.checked_mul(6 * cells))
        .unwrap_or(u64::MAX);
    cfg.check_budget(estimate)?;
    let starts: Vec<P3> = (0..=g)
        .flat_map(|x| (0..=g).flat_map(move |y| (0..=g).map(move |z| [x, y, z])))
        .collect();
    let found: Vec<BTreeSet<Vec<P3>>> = starts
        .par_iter()
        .map(|&s| {
            let mut out = BTreeSet::new();
            let mut walk = vec![s];
            extend(&mut walk, g, cfg.max_length, &mut out);
            out
        })
        .collect();
    let mut all = BTreeSet::new();
    for set in found {
        all.extend(set);
    }
    Ok(all.into_iter().collect())
}

fn l1(a: P3, b: P3) -> usize {
    (0..3).map(|k| (a[k] - b[k]).unsigned_abs() as usize).sum()
}

fn extend(walk: &mut Vec<P3>, g: i64, max_len: usize, out: &mut BTreeSet<Vec<P3>>) {
    let start = walk[0];
    let cur = *walk.last().unwrap();
    for d in UNIT3 {
        let q = add(cur, d);
        if q == start && walk.len() >= 4 {
            if walk[1] < walk[walk.len() - 1] {
                out.insert(canonical_cycle(&corners(walk, true)));
            }
            continue;
        }
        if q <= start || q.iter().any(|&c| c < 0 || c > g) || walk.contains(&q) {
            continue;
        }
        if walk.len() + l1(q, start) > max_len {
            continue;
        }
        walk.push(q);
        extend(walk, g, max_len, out);
        walk.pop();
    }
}
