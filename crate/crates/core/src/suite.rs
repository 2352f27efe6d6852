//! The acceptance suite: thirteen checks with fixed thresholds, run as
//! replica farms and collected into a JSON report.
//!
//! Reports contain the seed, profile and sizes but no timings or worker
//! counts, so the same seed and profile give the same bytes.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::busemann::{recovered_weights_down, sample_busemann_box, SemiInfinite};
use crate::error::{Error, Result};
use crate::experiments::{
    finite_geodesic_run, first_jump_times, fraction_above, inspection_interval, phi_patterns,
    psi_pattern, psi_started_patterns,
};
use crate::farm::{default_workers, farm};
use crate::limits::{corner_rate, jump_survival, nu_cdf, sample_two_min, size_bias, Jump, Variant};
use crate::nu::nu_forward_sample;
use crate::rng::{bernoulli, uniform, SimRng, StreamKey};
use crate::stationary::{
    chain_from_drivers, chain_step, joint_pmf_bruteforce, sample_x_minus, sample_x_plus, x_minus_pmf,
    x_plus_pmf, ChainState, HalfLineDriver,
};
use crate::stats::{
    batch_ci, ks_distance, ks_two_sample, lag_correlation, mean, std_dev, survival_sup_distance,
    tv_distance, tv_to_pmf, Counts, EmpiricalDistribution, Verdict,
};
use crate::tasep::lpp_clock_coupling_check;

pub const CRITERIA: [(u8, &str); 13] = [
    (1, "geodesic-weight-law"),
    (2, "corner-fraction"),
    (3, "busemann-recovered-weights"),
    (4, "stationary-marginals"),
    (5, "chain-equivalence"),
    (6, "jump-time-laws"),
    (7, "nu-forward-sampler"),
    (8, "phi-convergence"),
    (9, "psi-stationarity"),
    (10, "coupling-exactness"),
    (11, "size-bias"),
    (12, "concentration"),
    (13, "determinism"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Full,
    Quick,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Profile::Full),
            "quick" => Ok(Profile::Quick),
            _ => Err(Error::param("profile", format!("expected full or quick, got `{s}`"))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Full => "full",
            Profile::Quick => "quick",
        })
    }
}

/// Every size the suite uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sizes {
    pub geodesic_n: i64,
    pub geodesic_replicas: u32,
    pub corner_replicas: u32,
    pub busemann_box: usize,
    pub x_samples: u32,
    pub star_x: usize,
    pub star_replicas: u32,
    pub chain_x: usize,
    pub chain_samples: u32,
    pub enumeration_x: usize,
    pub jump_runs: u32,
    pub nu_samples: u32,
    pub phi_replicas: u32,
    pub phi_times: Vec<f64>,
    pub coupling_runs: u32,
    pub coupling_wd: usize,
    pub coupling_t: f64,
    pub inspection_replicas: u32,
    pub inspection_t: f64,
    pub concentration_replicas: u32,
    pub concentration_n: [i64; 2],
    pub concentration_r: [usize; 2],
}

impl Sizes {
    pub fn for_profile(profile: Profile) -> Self {
        match profile {
            Profile::Full => Sizes {
                geodesic_n: 4000,
                geodesic_replicas: 50,
                corner_replicas: 20,
                busemann_box: 1001,
                x_samples: 1_000_000,
                star_x: 10_000,
                star_replicas: 1000,
                chain_x: 6,
                chain_samples: 1_000_000,
                enumeration_x: 6,
                jump_runs: 100_000,
                nu_samples: 100_000,
                phi_replicas: 100_000,
                phi_times: vec![5.0, 20.0, 80.0],
                coupling_runs: 100,
                coupling_wd: 200,
                coupling_t: 50.0,
                inspection_replicas: 50_000,
                inspection_t: 20.0,
                concentration_replicas: 40,
                concentration_n: [1000, 4000],
                concentration_r: [5000, 20_000],
            },
            Profile::Quick => Sizes {
                geodesic_n: 200,
                geodesic_replicas: 8,
                corner_replicas: 8,
                busemann_box: 101,
                x_samples: 20_000,
                star_x: 400,
                star_replicas: 100,
                chain_x: 6,
                chain_samples: 20_000,
                enumeration_x: 4,
                jump_runs: 2000,
                nu_samples: 2000,
                phi_replicas: 500,
                phi_times: vec![1.0, 2.0, 4.0],
                coupling_runs: 5,
                coupling_wd: 40,
                coupling_t: 8.0,
                inspection_replicas: 500,
                inspection_t: 5.0,
                concentration_replicas: 10,
                concentration_n: [50, 200],
                concentration_r: [100, 400],
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub profile: Profile,
    pub workers: usize,
    /// Criterion ids to run; all when empty.
    pub only: Vec<u8>,
}

impl SuiteConfig {
    pub fn new(seed: u64, profile: Profile) -> Self {
        Self {
            seed,
            profile,
            workers: default_workers(),
            only: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
    pub error: Option<String>,
    /// The error was a truncation or capacity limit.
    pub resource: bool,
}

impl CriterionReport {
    pub fn summary(&self) -> String {
        let mut line = format!(
            "{} {:>2} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name
        );
        for v in &self.verdicts {
            line.push_str(&format!(
                "\n       {} {}: {:.6} (threshold {})",
                if v.pass { "ok " } else { "bad" },
                v.statistic,
                v.value,
                v.threshold
            ));
        }
        if let Some(e) = &self.error {
            line.push_str(&format!("\n       error: {e}"));
        }
        line
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: String,
    pub seed: u64,
    pub profile: Profile,
    pub sizes: Sizes,
    pub criteria: Vec<CriterionReport>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn any_resource_error(&self) -> bool {
        self.criteria.iter().any(|c| c.resource)
    }
}

struct Ctx<'a> {
    seed: u64,
    workers: usize,
    sizes: &'a Sizes,
}

impl Ctx<'_> {
    fn key(&self, label: &str) -> StreamKey {
        StreamKey::new(self.seed, 0, label)
    }

    fn farm<T: Send>(&self, label: &str, replicas: u32, f: impl Fn(&StreamKey) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
        let base = self.key(label);
        farm(self.workers, replicas, |r| f(&base.for_replica(r)))
    }

    /// `total` draws split into chunks of at most `chunk`, one stream per chunk.
    fn draws<T: Send>(
        &self,
        label: &str,
        total: u32,
        f: impl Fn(&mut SimRng) -> Result<T> + Sync + Send,
    ) -> Result<Vec<T>> {
        const CHUNK: u32 = 10_000;
        let base = self.key(label);
        let parts = farm(self.workers, total.div_ceil(CHUNK), |chunk| {
            let mut rng = base.for_replica(chunk).rng();
            let n = CHUNK.min(total - chunk * CHUNK);
            (0..n).map(|_| f(&mut rng)).collect::<Result<Vec<T>>>()
        })?;
        Ok(parts.into_iter().flatten().collect())
    }
}

/// Runs the configured criteria; `on_done` sees each report as it finishes.
pub fn run_suite(
    config: &SuiteConfig,
    version: &str,
    mut on_done: impl FnMut(&CriterionReport),
) -> Result<SuiteReport> {
    let sizes = Sizes::for_profile(config.profile);
    for &id in &config.only {
        if !(1..=13).contains(&id) {
            return Err(Error::param("only", format!("criteria are numbered 1..=13, got {id}")));
        }
    }
    let ctx = Ctx {
        seed: config.seed,
        workers: config.workers,
        sizes: &sizes,
    };
    let mut criteria = Vec::new();
    for (id, name) in CRITERIA {
        if !config.only.is_empty() && !config.only.contains(&id) {
            continue;
        }
        let outcome = match id {
            1 => geodesic_weight_law(&ctx),
            2 => corner_fraction(&ctx),
            3 => busemann_recovered(&ctx),
            4 => stationary_marginals(&ctx),
            5 => chain_equivalence(&ctx),
            6 => jump_time_laws(&ctx),
            7 => nu_forward(&ctx),
            8 => phi_convergence(&ctx),
            9 => psi_stationarity(&ctx),
            10 => coupling_exactness(&ctx),
            11 => inspection(&ctx),
            12 => concentration(&ctx),
            _ => determinism(config, version),
        };
        let report = match outcome {
            Ok(verdicts) => CriterionReport {
                id,
                name: name.into(),
                pass: !verdicts.is_empty() && verdicts.iter().all(|v| v.pass),
                verdicts,
                error: None,
                resource: false,
            },
            Err(e) => CriterionReport {
                id,
                name: name.into(),
                verdicts: Vec::new(),
                pass: false,
                resource: e.is_resource(),
                error: Some(e.to_string()),
            },
        };
        on_done(&report);
        criteria.push(report);
    }
    Ok(SuiteReport {
        version: version.into(),
        seed: config.seed,
        profile: config.profile,
        pass: criteria.iter().all(|c| c.pass),
        sizes,
        criteria,
    })
}

fn geodesic_weight_law(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let s = ctx.sizes;
    let mut out = Vec::new();
    for (rho, threshold) in [(0.5, 0.02), (0.3, 0.025)] {
        let runs = ctx.farm(&format!("geodesic/{rho}"), s.geodesic_replicas, |key| {
            Ok(finite_geodesic_run(rho, s.geodesic_n, key)?.center_weights)
        })?;
        let pooled = EmpiricalDistribution::new(runs.concat())?;
        let ks = ks_distance(&pooled, |h| nu_cdf(rho, h))?;
        out.push(Verdict::below(
            format!("KS centre weights vs mixture law, rho={rho}, {} points", pooled.len()),
            ks,
            threshold,
        ));
    }
    Ok(out)
}

fn corner_fraction(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let s = ctx.sizes;
    let mut out = Vec::new();
    for rho in [0.5, 0.3] {
        let corners = ctx.farm(&format!("geodesic/{rho}"), s.corner_replicas, |key| {
            Ok(finite_geodesic_run(rho, s.geodesic_n, key)?.corners as f64 / (2 * s.geodesic_n) as f64)
        })?;
        out.push(Verdict::within(
            format!("mean corners/(2n), rho={rho}"),
            mean(&corners),
            corner_rate(rho)?,
            0.01,
        ));
    }
    Ok(out)
}

fn busemann_recovered(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let s = ctx.sizes;
    let mut out = Vec::new();
    for rho in [0.5, 0.3] {
        let f = sample_busemann_box(s.busemann_box, rho, &ctx.key(&format!("busemann/{rho}")))?;
        let w = recovered_weights_down(&f)?;
        let (width, height) = w.extent();
        let rows = w.values();
        let cols: Vec<f64> = (0..width)
            .flat_map(|i| (0..height).map(move |j| (i, j)))
            .map(|(i, j)| rows[j * width + i])
            .collect();
        let e = EmpiricalDistribution::new(rows.to_vec())?;
        out.push(Verdict::below(
            format!("KS recovered weights vs Exp(1), rho={rho}, {} entries", e.len()),
            ks_distance(&e, |h| 1.0 - (-h.max(0.0)).exp())?,
            0.005,
        ));
        out.push(Verdict::below(
            format!("|lag-1 correlation| along a, rho={rho}"),
            lag_correlation(rows, 1).abs(),
            0.01,
        ));
        out.push(Verdict::below(
            format!("|lag-1 correlation| along b, rho={rho}"),
            lag_correlation(&cols, 1).abs(),
            0.01,
        ));
    }
    Ok(out)
}

fn counts_of(values: &[i64]) -> Counts {
    let mut c = Counts::zeros(1);
    for &v in values {
        c.add_growing(v as usize);
    }
    c
}

fn stationary_marginals(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let s = ctx.sizes;
    let rho = 0.3;
    let xp = ctx.draws("x-plus", s.x_samples, |rng| sample_x_plus(rho, rng))?;
    let xm = ctx.draws("x-minus", s.x_samples, |rng| sample_x_minus(rho, rng))?;
    let tv_plus = tv_to_pmf(&counts_of(&xp), |k| x_plus_pmf(rho, k as i64))?;
    let tv_minus = tv_to_pmf(&counts_of(&xm), |k| x_minus_pmf(rho, k as i64))?;

    let (x_small, x_big) = (s.star_x / 4, s.star_x);
    let stars = ctx.farm("stars", s.star_replicas, |key| {
        let d = HalfLineDriver::sample(0.5, x_big, &mut key.rng())?;
        Ok((d.e_count(x_small) as f64, d.e_count(x_big) as f64))
    })?;
    let small: Vec<f64> = stars.iter().map(|p| p.0).collect();
    let big: Vec<f64> = stars.iter().map(|p| p.1).collect();
    Ok(vec![
        Verdict::below(format!("TV X+ vs pmf, rho={rho}"), tv_plus, 0.005),
        Verdict::below(format!("TV |X-| vs pmf, rho={rho}"), tv_minus, 0.005),
        Verdict::range(
            format!("mean star count ratio x={x_big} over x={x_small}"),
            mean(&big) / mean(&small),
            1.8,
            2.2,
        ),
    ])
}

fn chain_equivalence(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let s = ctx.sizes;
    let x = s.chain_x;
    let side = x + 1;
    let code = |c: ChainState| c.r1 as usize * side + c.r2 as usize;
    let mut out = Vec::new();
    for rho in [0.3, 0.5] {
        let chain = ctx.draws(&format!("chain/{rho}"), s.chain_samples, |rng| {
            let mut c = ChainState::START;
            for _ in 0..x {
                c = chain_step(c, rho, rng)?;
            }
            Ok(code(c))
        })?;
        let drivers = ctx.draws(&format!("drivers/{rho}"), s.chain_samples, |rng| {
            let y1: Vec<bool> = (0..x).map(|_| bernoulli(rng, rho)).collect();
            let y2: Vec<bool> = (0..x).map(|_| bernoulli(rng, rho)).collect();
            Ok(code(chain_from_drivers(&y1, &y2, x)?))
        })?;
        let (mut p, mut q) = (Counts::zeros(side * side), Counts::zeros(side * side));
        chain.iter().for_each(|&c| p.add(c));
        drivers.iter().for_each(|&c| q.add(c));
        out.push(Verdict::below(
            format!("TV chain vs drivers at x={x}, rho={rho}"),
            tv_distance(&p, &q)?,
            0.01,
        ));
    }
    for (num, den) in [(3, 10), (1, 2)] {
        let rho = BigRational::new(num.into(), den.into());
        let mut worst = 0.0f64;
        let mut all = true;
        for x in 1..=s.enumeration_x {
            let r = joint_pmf_bruteforce(&rho, x)?;
            worst = worst.max(r.max_abs_error);
            all &= r.pass;
        }
        out.push(Verdict::below(
            format!("max joint pmf error by enumeration, x<={}, rho={num}/{den}", s.enumeration_x),
            if all { worst } else { f64::INFINITY },
            1e-12,
        ));
    }
    Ok(out)
}

fn jump_time_laws(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let s = ctx.sizes;
    let mut out = Vec::new();
    for rho in [0.5, 0.3] {
        for variant in [Variant::One, Variant::Two] {
            let runs = ctx.farm(&format!("jumps/{rho}/{variant}"), s.jump_runs, |key| {
                first_jump_times(rho, variant, key)
            })?;
            for (which, pick) in [(Jump::L10, 0), (Jump::L01, 1)] {
                let e = EmpiricalDistribution::new(
                    runs.iter().map(|r| if pick == 0 { r.0 } else { r.1 }).collect(),
                )?;
                let d = survival_sup_distance(&e, |h| {
                    jump_survival(rho, variant, which, h).unwrap_or(f64::NAN)
                });
                out.push(Verdict::below(
                    format!("sup survival distance, variant {variant}, {which}, rho={rho}"),
                    d,
                    0.02,
                ));
            }
        }
    }
    Ok(out)
}

fn nu_forward(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let s = ctx.sizes;
    let mut out = Vec::new();
    for rho in [0.5, 0.3] {
        let w = ctx.farm(&format!("nu/{rho}"), s.nu_samples, |key| {
            Ok(nu_forward_sample(rho, 1, key)?.center_weight())
        })?;
        let e = EmpiricalDistribution::new(w)?;
        out.push(Verdict::below(
            format!("KS forward centre weight vs mixture law, rho={rho}"),
            ks_distance(&e, |h| nu_cdf(rho, h))?,
            0.01,
        ));
        if rho == 0.5 {
            let two_min = ctx.draws("two-min", s.nu_samples, |rng| Ok(sample_two_min(rng)))?;
            let f = EmpiricalDistribution::new(two_min)?;
            out.push(Verdict::below(
                "two-sample KS forward centre weight vs 2 min(E1+E2, E3+B E4)",
                ks_two_sample(&e, &f),
                0.01,
            ));
        }
    }
    Ok(out)
}

fn phi_convergence(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let s = ctx.sizes;
    let rho = 0.5;
    let (lo, hi) = (-3, 4);
    let alphabet = 1 << (hi - lo + 1);
    let runs = ctx.farm("phi", s.phi_replicas, |key| phi_patterns(rho, &s.phi_times, lo, hi, key))?;
    let reference = ctx.farm("phi-reference", s.phi_replicas, |key| psi_pattern(rho, lo, hi, key))?;
    let mut q = Counts::zeros(alphabet);
    reference.iter().for_each(|&c| q.add(c));
    let mut tvs = Vec::new();
    let mut out = Vec::new();
    for (k, &t) in s.phi_times.iter().enumerate() {
        let mut p = Counts::zeros(alphabet);
        runs.iter().for_each(|r| p.add(r[k]));
        let tv = tv_distance(&p, &q)?;
        tvs.push(tv);
        out.push(Verdict::below(
            format!("TV on [{lo},{hi}] at t={t}"),
            tv,
            if k + 1 == s.phi_times.len() { 0.05 } else { 1.0 },
        ));
    }
    out.push(Verdict::flag(
        format!("TV decreasing along t={:?}", s.phi_times),
        tvs.windows(2).all(|w| w[1] < w[0]),
    ));
    Ok(out)
}

fn psi_stationarity(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let s = ctx.sizes;
    let rho = 0.5;
    let (lo, hi) = (-4i64, 5i64);
    let mut times = vec![0.0];
    times.extend(&s.phi_times);
    let runs = ctx.farm("psi-started", s.phi_replicas, |key| psi_started_patterns(rho, &times, lo, hi, key))?;
    let cylinder = |k: usize, start: i64| {
        let mut c = Counts::zeros(8);
        let shift = (start - lo) as usize;
        runs.iter().for_each(|r| c.add(r[k] >> shift & 0b111));
        c
    };
    let mut out = Vec::new();
    for (k, &t) in times.iter().enumerate().skip(1) {
        let mut worst = 0.0f64;
        for start in lo..=hi - 2 {
            worst = worst.max(tv_distance(&cylinder(k, start), &cylinder(0, start))?);
        }
        out.push(Verdict::below(
            format!("max TV over 3-site cylinders in [{lo},{hi}], t={t} vs t=0"),
            worst,
            0.02,
        ));
    }
    Ok(out)
}

fn coupling_exactness(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let s = ctx.sizes;
    let reports = ctx.farm("coupling", s.coupling_runs, |key| {
        let rho = 0.1 + 0.8 * uniform(&mut key.child("rho").rng());
        lpp_clock_coupling_check(rho, s.coupling_wd, s.coupling_t, key)
    })?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    let swaps: usize = reports.iter().map(|r| r.swaps).sum();
    Ok(vec![
        Verdict::below(
            format!("runs with any mismatch out of {} ({swaps} swaps)", reports.len()),
            failed as f64,
            0.5,
        ),
        Verdict::flag("every run had swaps to compare", reports.iter().all(|r| r.swaps > 0)),
    ])
}

fn inspection(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let s = ctx.sizes;
    let rho = 0.5;
    let xs = ctx.farm("inspection", s.inspection_replicas, |key| inspection_interval(rho, s.inspection_t, key))?;
    let (m, half) = batch_ci(&xs, 20)?;
    Ok(vec![
        Verdict::within(
            format!("mean interval covering t={} (95% half width {half:.4})", s.inspection_t),
            m,
            size_bias(rho)?.mean(),
            0.07,
        ),
    ])
}

fn concentration(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let s = ctx.sizes;
    let rho = 0.5;
    let mut out = Vec::new();
    let mut sds = Vec::new();
    for n in s.concentration_n {
        let mu = ctx.farm(&format!("concentration/finite/{n}"), s.concentration_replicas, |key| {
            Ok(fraction_above(&finite_geodesic_run(rho, n, key)?.center_weights, 1.0))
        })?;
        sds.push(std_dev(&mu));
    }
    out.push(Verdict::below(
        format!(
            "sd ratio n={} over n={} (sd {:.5} / {:.5})",
            s.concentration_n[1], s.concentration_n[0], sds[1], sds[0]
        ),
        sds[1] / sds[0],
        0.5,
    ));
    sds.clear();
    for r in s.concentration_r {
        let mu = ctx.farm(&format!("concentration/semi/{r}"), s.concentration_replicas, |key| {
            Ok(fraction_above(&SemiInfinite::new(rho, r).run(key)?.center_weights, 1.0))
        })?;
        sds.push(std_dev(&mu));
    }
    out.push(Verdict::below(
        format!(
            "sd ratio r={} over r={} (sd {:.5} / {:.5})",
            s.concentration_r[1], s.concentration_r[0], sds[1], sds[0]
        ),
        sds[1] / sds[0],
        0.5,
    ));
    Ok(out)
}

fn determinism(config: &SuiteConfig, version: &str) -> Result<Vec<Verdict>> {
    let quick = |workers: usize| -> Result<String> {
        let c = SuiteConfig {
            seed: config.seed,
            profile: Profile::Quick,
            workers,
            only: (1..=12).collect(),
        };
        run_suite(&c, version, |_| {})?.to_json()
    };
    let many = default_workers().max(4);
    let first = quick(1)?;
    let again = quick(1)?;
    let parallel = quick(many)?;
    Ok(vec![
        Verdict::flag("quick report identical across two runs", first == again),
        Verdict::flag(format!("quick report identical with 1 and {many} workers"), first == parallel),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_parse_and_differ() {
        assert_eq!("quick".parse::<Profile>().unwrap(), Profile::Quick);
        assert!("slow".parse::<Profile>().is_err());
        assert_ne!(Sizes::for_profile(Profile::Full), Sizes::for_profile(Profile::Quick));
    }

    #[test]
    fn selected_criteria_only() {
        let mut c = SuiteConfig::new(3, Profile::Quick);
        c.only = vec![5, 10];
        let mut seen = Vec::new();
        let r = run_suite(&c, "test", |c| seen.push(c.id)).unwrap();
        assert_eq!(seen, vec![5, 10]);
        assert_eq!(r.criteria.len(), 2);
        assert!(r.criteria.iter().all(|c| c.error.is_none()));
        c.only = vec![14];
        assert!(run_suite(&c, "test", |_| {}).is_err());
    }
}
