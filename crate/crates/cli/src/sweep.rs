use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::cache::MatrixCache;
use crate::checks::{run_verify_ring, Point, PointContext};
use crate::config::{Check, SweepConfig};
use crate::report::VerificationReport;

/// Grid points for the `(m, n, r, s)` checks, then the `(m, n)` pairs for
/// the ring checks.
pub fn grid(cfg: &SweepConfig) -> (Vec<Point>, Vec<(usize, usize)>) {
    let mut points = Vec::new();
    let mut pairs = BTreeSet::new();
    for &m in &cfg.m {
        for &n in &cfg.n {
            pairs.insert((m, n));
            for &r in &cfg.r {
                for &s in &cfg.s {
                    points.push(Point::new(m, n, r, s));
                }
            }
        }
    }
    (points, pairs.into_iter().collect())
}

/// Runs every enabled check over the grid. Points run concurrently, each
/// point's checks in sequence sharing intermediate results; the report is
/// sorted canonically.
pub fn run_sweep(cfg: &SweepConfig) -> std::io::Result<VerificationReport> {
    let cache = cfg.cache_dir.as_ref().map(MatrixCache::new).transpose()?;
    let (points, pairs) = grid(cfg);
    let point_checks: Vec<Check> = cfg
        .checks
        .iter()
        .copied()
        .filter(|c| !c.ignores_rs())
        .collect();
    let mut entries: Vec<_> = if point_checks.is_empty() {
        Vec::new()
    } else {
        points
            .par_iter()
            .flat_map_iter(|&p| {
                let ctx = PointContext::new(p, cfg, cache.as_ref());
                point_checks.iter().map(|&c| ctx.run(c)).collect::<Vec<_>>()
            })
            .collect()
    };
    if cfg.checks.contains(&Check::VerifyRing) {
        entries.par_extend(pairs.par_iter().map(|&(m, n)| run_verify_ring(cfg, m, n)));
    }
    Ok(VerificationReport::new(entries))
}
