//! Single-replica experiment kernels shared by the acceptance suite and the
//! command line tools. Each takes a [`StreamKey`] and is deterministic in it.

use serde::Serialize;

use crate::error::{check_rho, Error, Result};
use crate::lattice::{corner_count, geodesic, n_rho, LatticePath, Vertex};
use crate::limits::Variant;
use crate::nu::conditioned_jump_times;
use crate::rng::{CellField, StreamKey};
use crate::stationary::sample_psi;
use crate::tasep::{default_half_width, poisson_tail_bound, TasepState};

/// Point-to-point geodesic from the origin to `n^rho` in an i.i.d. field.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteGeodesicRun {
    pub endpoint: Vertex,
    pub path: LatticePath,
    pub center_weights: Vec<f64>,
    pub corners: usize,
    /// The weights the geodesic was computed in.
    #[serde(skip)]
    pub field: CellField,
}

pub fn finite_geodesic_run(rho: f64, n: i64, key: &StreamKey) -> Result<FiniteGeodesicRun> {
    if n < 1 {
        return Err(Error::param("n", "must be positive"));
    }
    let field = key.child("weights").field();
    let endpoint = n_rho(n, rho)?;
    let g = geodesic(&field, Vertex::ORIGIN, endpoint)?;
    let center_weights = g.path.vertices().iter().map(|v| field.exp1(v.a, v.b)).collect();
    Ok(FiniteGeodesicRun {
        endpoint,
        corners: corner_count(&g.path),
        path: g.path,
        center_weights,
        field,
    })
}

/// Fraction of `xs` strictly above `h`.
pub fn fraction_above(xs: &[f64], h: f64) -> f64 {
    xs.iter().filter(|&&x| x > h).count() as f64 / xs.len() as f64
}

fn check_times(times: &[f64]) -> Result<f64> {
    let mut last = 0.0;
    for &t in times {
        if !(t >= last) {
            return Err(Error::param("t", "snapshot times must be non-negative and sorted"));
        }
        last = t;
    }
    Ok(last)
}

fn snapshots(mut sim: TasepState, times: &[f64], lo: i64, hi: i64) -> Result<Vec<usize>> {
    Ok(snapshot_run(&mut sim, times, lo, hi)?.patterns)
}

/// Patterns seen from the pair at a list of times, with the boundary margin.
#[derive(Debug, Clone, Serialize)]
pub struct PhiRun {
    pub patterns: Vec<usize>,
    pub margin: i64,
    pub boundary_bound: f64,
}

fn snapshot_run(sim: &mut TasepState, times: &[f64], lo: i64, hi: i64) -> Result<PhiRun> {
    let mut patterns = Vec::with_capacity(times.len());
    for &t in times {
        sim.evolve(t)?;
        patterns.push(sim.pattern(lo, hi)?);
    }
    let margin = sim.margin() - lo.abs().max(hi);
    Ok(PhiRun {
        patterns,
        margin,
        boundary_bound: poisson_tail_bound(sim.time(), margin),
    })
}

/// Window half-width for snapshots up to `t_max` on `lo..=hi`.
pub fn phi_half_width(t_max: f64, lo: i64, hi: i64) -> i64 {
    default_half_width(t_max) + lo.abs().max(hi)
}

/// Centred patterns on `lo..=hi` at each of `times`, starting from the pair
/// at sites 0 and 1 in a Bernoulli(rho) background on `[-wd, wd]`.
pub fn phi_run(rho: f64, times: &[f64], lo: i64, hi: i64, wd: usize, key: &StreamKey) -> Result<PhiRun> {
    check_times(times)?;
    let mut sim = TasepState::init_bernoulli_pair(rho, wd, key)?;
    snapshot_run(&mut sim, times, lo, hi)
}

pub fn phi_patterns(rho: f64, times: &[f64], lo: i64, hi: i64, key: &StreamKey) -> Result<Vec<usize>> {
    let t_max = check_times(times)?;
    Ok(phi_run(rho, times, lo, hi, phi_half_width(t_max, lo, hi) as usize, key)?.patterns)
}

/// Same as [`phi_patterns`] but started from a stationary pair sample.
pub fn psi_started_patterns(rho: f64, times: &[f64], lo: i64, hi: i64, key: &StreamKey) -> Result<Vec<usize>> {
    let t_max = check_times(times)?;
    let wd = phi_half_width(t_max, lo, hi);
    let config = sample_psi(rho, wd as usize, &key.child("psi"))?;
    let sim = TasepState::from_config(&config, -wd, wd, key)?;
    snapshots(sim, times, lo, hi)
}

/// Pattern on `lo..=hi` of a single stationary pair sample.
pub fn psi_pattern(rho: f64, lo: i64, hi: i64, key: &StreamKey) -> Result<usize> {
    let half = lo.abs().max(hi).max(1) as usize;
    let config = sample_psi(rho, half, &key.child("psi"))?;
    config
        .pattern(lo, hi)
        .ok_or_else(|| Error::Invariant("pair sample misses pattern sites".into()))
}

/// Length of the interval between pair moves that covers time `t`, in a run
/// started from a stationary pair sample.
pub fn inspection_interval(rho: f64, t: f64, key: &StreamKey) -> Result<f64> {
    check_rho(rho)?;
    if !(t > 0.0) {
        return Err(Error::param("t", "must be positive"));
    }
    let horizon = 2.0 * t + 20.0;
    let wd = default_half_width(horizon);
    let config = sample_psi(rho, wd as usize, &key.child("psi"))?;
    let mut sim = TasepState::from_config(&config, -wd, wd, key)?;
    sim.evolve(t)?;
    let before = sim.pair_moves().last().map_or(0.0, |m| m.time);
    let seen = sim.pair_moves().len();
    while sim.pair_moves().len() == seen {
        if sim.step().is_none() || sim.time() > horizon {
            return Err(Error::truncation(
                format!("pair did not move between {t} and {horizon}"),
                "raise the horizon",
            ));
        }
    }
    Ok(sim.pair_moves()[seen].time - before)
}

/// `(L(1,0), L(0,1))` after a jump-conditioned start.
pub fn first_jump_times(rho: f64, variant: Variant, key: &StreamKey) -> Result<(f64, f64)> {
    let l = conditioned_jump_times(rho, variant, 1, key)?;
    Ok((l.get(1, 0), l.get(0, 1)))
}
