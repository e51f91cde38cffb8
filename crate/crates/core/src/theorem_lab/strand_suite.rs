//! Seeded property runs of the strand laws on random planar lattice paths,
//! and of strand lifting on random spatial lattice paths.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::lattice::{sample_open_walk, sample_planar_path, walk_chain};
use super::{sample_rng, SearchError};
use crate::geom::same_point_set;
use crate::strands::{lift_strand, shadow_curve, strands, verify_strand_laws, Law, LawWitness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StrandSuiteConfig {
    pub paths: u64,
    pub lifts: u64,
    pub grid_max: i64,
    pub max_steps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StrandSuiteReport {
    pub config: StrandSuiteConfig,
    pub paths_checked: u64,
    pub disjoint_interior_violations: u64,
    pub strand_union_violations: u64,
    pub unique_direction_violations: u64,
    pub lift_attempts: u64,
    pub lifts_checked: u64,
    pub lift_violations: u64,
    /// Up to ten violating instances with the offending strands.
    pub witnesses: Vec<(crate::curve::PolyChain, LawWitness)>,
}

impl StrandSuiteReport {
    pub fn violation_count(&self) -> u64 {
        self.disjoint_interior_violations
            + self.strand_union_violations
            + self.unique_direction_violations
            + self.lift_violations
    }
}

/// Path `k` uses the sample stream `k`; lift attempt `k` uses the stream
/// `paths + k`, so the two parts never share randomness.
pub fn run_strand_suite(cfg: &StrandSuiteConfig) -> Result<StrandSuiteReport, SearchError> {
    if cfg.grid_max < 1 || cfg.max_steps < 1 {
        return Err(SearchError::InvalidConfig("grid and step bounds must be positive".into()));
    }
    let mut report = StrandSuiteReport {
        config: cfg.clone(),
        paths_checked: cfg.paths,
        disjoint_interior_violations: 0,
        strand_union_violations: 0,
        unique_direction_violations: 0,
        lift_attempts: 0,
        lifts_checked: 0,
        lift_violations: 0,
        witnesses: Vec::new(),
    };
    let found: Vec<_> = (0..cfg.paths)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(cfg.seed, k);
            let path = sample_planar_path(&mut rng, cfg.grid_max, cfg.max_steps);
            let laws = verify_strand_laws(&path);
            (path, laws.witnesses)
        })
        .collect();
    for (path, witnesses) in found {
        for w in witnesses {
            match w.law {
                Law::DisjointInteriors => report.disjoint_interior_violations += 1,
                Law::StrandUnionConnected => report.strand_union_violations += 1,
                Law::UniqueStrandDirection => report.unique_direction_violations += 1,
                _ => continue,
            }
            if report.witnesses.len() < 10 {
                report.witnesses.push((path.clone(), w));
            }
        }
    }

    const CHUNK: u64 = 256;
    let max_attempts = cfg.lifts.saturating_mul(1000);
    let mut attempt = 0;
    while report.lifts_checked < cfg.lifts && attempt < max_attempts {
        let end = (attempt + CHUNK).min(max_attempts);
        let outcomes: Vec<Option<Option<LawWitness>>> = (attempt..end)
            .into_par_iter()
            .map(|k| lift_instance(cfg, cfg.paths + k).map(|(_, w)| w))
            .collect();
        for (k, o) in (attempt..end).zip(outcomes) {
            if report.lifts_checked == cfg.lifts {
                break;
            }
            report.lift_attempts = k + 1;
            if let Some(w) = o {
                report.lifts_checked += 1;
                if let Some(w) = w {
                    report.lift_violations += 1;
                    if report.witnesses.len() < 10 {
                        let (gamma, _) = lift_instance(cfg, cfg.paths + k).unwrap();
                        report.witnesses.push((gamma, w));
                    }
                }
            }
        }
        attempt = end;
    }
    Ok(report)
}

/// A random spatial path with a path shadow and a random strand of that
/// shadow; `None` when the draw is not liftable, otherwise the chain and a
/// witness if the lifted strand fails to project onto the input strand.
fn lift_instance(
    cfg: &StrandSuiteConfig,
    stream: u64,
) -> Option<(crate::curve::PolyChain, Option<LawWitness>)> {
    let mut rng = sample_rng(cfg.seed, stream);
    let gamma = walk_chain(&sample_open_walk::<3>(&mut rng, cfg.grid_max, cfg.max_steps), false);
    let j = rng.gen_range(1..=3);
    let axis = rng.gen_range(1..=2);
    let shadow = shadow_curve(&gamma, j).ok()??;
    if shadow.is_closed() {
        return None;
    }
    let list = strands(&shadow, axis).ok()?;
    let sigma = list[rng.gen_range(0..list.len())].clone();
    let lifted = lift_strand(&gamma, j, &sigma).ok()?;
    let projected: Vec<_> = lifted
        .segments(&gamma)
        .into_iter()
        .map(|(a, b)| (a.drop_axis(j), b.drop_axis(j)))
        .collect();
    let ok = same_point_set(&projected, &sigma.segments(&shadow));
    let witness = (!ok).then(|| LawWitness {
        law: Law::ProjectionOfStrand,
        host: format!("shadow {j}"),
        first: Some(sigma),
        second: Some(lifted),
    });
    Some((gamma, witness))
}
