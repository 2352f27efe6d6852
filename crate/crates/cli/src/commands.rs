use std::fmt::Write as _;

use serde_json::{json, Value};

use geoenv_core::busemann::SemiInfinite;
use geoenv_core::env::{empirical_env, EnvSample};
use geoenv_core::experiments::{finite_geodesic_run, fraction_above, phi_run, psi_pattern};
use geoenv_core::farm::farm;
use geoenv_core::lattice::{corner_flags, LatticePath};
use geoenv_core::limits::{corner_rate, nu_cdf, size_bias, variant_weights, Law, Variant};
use geoenv_core::nu::nu_forward_sample;
use geoenv_core::rng::{bernoulli, StreamKey};
use geoenv_core::stationary::{
    chain_from_drivers, chain_step, joint_pmf_bruteforce, project_bernoulli, project_etabar_star,
    rational_from_decimal, sample_sigma, x_minus_pmf, x_plus_pmf, etabar_from_star, ChainState,
};
use geoenv_core::stats::{ks_distance, mean, tv_distance, tv_to_pmf, Counts, EmpiricalDistribution};
use geoenv_core::suite::{run_suite, Profile, SuiteConfig};
use geoenv_core::{Error, Result};

use crate::config::{ExperimentConfig, Format, PHI_WINDOW};

pub enum Body {
    Json(Value),
    Csv(String),
}

pub struct Outcome {
    pub body: Body,
    /// False when an acceptance check failed.
    pub pass: bool,
    pub resource_error: bool,
}

impl From<Body> for Outcome {
    fn from(body: Body) -> Self {
        Outcome {
            body,
            pass: true,
            resource_error: false,
        }
    }
}

fn replicas<T: Send>(
    cfg: &ExperimentConfig,
    label: &str,
    f: impl Fn(&StreamKey) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    let base = StreamKey::new(cfg.seed, 0, label);
    farm(cfg.workers, cfg.replicas, |r| f(&base.for_replica(r)))
}

struct PathRecord {
    path: LatticePath,
    weights: Vec<f64>,
    envs: Vec<EnvSample>,
}

fn path_csv(records: &[PathRecord], s: usize) -> String {
    let mut out = String::from("replica,index,a,b,weight,corner");
    let cells = (2 * s + 1) * (2 * s + 1);
    if s > 0 {
        for i in 0..cells {
            write!(out, ",w{i}").unwrap();
        }
        for i in 0..cells {
            write!(out, ",m{i}").unwrap();
        }
    }
    out.push('\n');
    for (rep, rec) in records.iter().enumerate() {
        let corners = corner_flags(&rec.path);
        for (i, (v, w)) in rec.path.vertices().iter().zip(&rec.weights).enumerate() {
            write!(out, "{rep},{i},{},{},{w},{}", v.a, v.b, u8::from(corners[i])).unwrap();
            if let Some(e) = rec.envs.get(i) {
                for x in &e.weights {
                    write!(out, ",{x}").unwrap();
                }
                for &m in &e.mask {
                    write!(out, ",{}", u8::from(m)).unwrap();
                }
            }
            out.push('\n');
        }
    }
    out
}

fn path_summary(cfg: &ExperimentConfig, records: &[PathRecord]) -> Result<Value> {
    let per_replica: Vec<Value> = records
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let path = &rec.path;
            let corners = corner_flags(path).iter().filter(|&&c| c).count();
            json!({
                "replica": i,
                "endpoint": path.last(),
                "vertices": path.len(),
                "corner_fraction": corners as f64 / (path.len() - 1) as f64,
                "mean_weight": mean(&rec.weights),
                "fraction_weight_above_1": fraction_above(&rec.weights, 1.0),
            })
        })
        .collect();
    let pooled: Vec<f64> = records.iter().flat_map(|r| r.weights.iter().copied()).collect();
    let sb = size_bias(cfg.rho)?;
    let corner_fraction = mean(
        &per_replica
            .iter()
            .map(|v| v["corner_fraction"].as_f64().unwrap())
            .collect::<Vec<_>>(),
    );
    let e = EmpiricalDistribution::new(pooled)?;
    Ok(json!({
        "replicas": per_replica,
        "pooled": {
            "points": e.len(),
            "ks_vs_limit_law": ks_distance(&e, |h| nu_cdf(cfg.rho, h))?,
            "mean_weight": e.mean(),
            "limit_mean_weight": sb.mean_xi,
            "corner_fraction": corner_fraction,
            "limit_corner_fraction": corner_rate(cfg.rho)?,
        }
    }))
}

pub fn geodesic_env(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = cfg.s;
    let records = replicas(cfg, "geodesic-env", |key| {
        let run = finite_geodesic_run(cfg.rho, cfg.n, key)?;
        let envs = if s > 0 {
            empirical_env(&run.field, &run.path, s)?.samples
        } else {
            Vec::new()
        };
        Ok(PathRecord {
            path: run.path,
            weights: run.center_weights,
            envs,
        })
    })?;
    Ok(match cfg.format {
        Format::Csv => Body::Csv(path_csv(&records, s)),
        Format::Json => Body::Json(path_summary(cfg, &records)?),
    }
    .into())
}

pub fn busemann_env(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = cfg.s;
    let records = replicas(cfg, "busemann-env", |key| {
        let mut run = SemiInfinite::new(cfg.rho, cfg.r);
        if s > 0 {
            run = run.with_envs(s);
        }
        let out = run.run(key)?;
        Ok(PathRecord {
            path: LatticePath::new(out.path)?,
            weights: out.center_weights,
            envs: out.envs,
        })
    })?;
    Ok(match cfg.format {
        Format::Csv => Body::Csv(path_csv(&records, s)),
        Format::Json => Body::Json(path_summary(cfg, &records)?),
    }
    .into())
}

pub fn tasep_phi(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (lo, hi) = PHI_WINDOW;
    let wd = cfg.wd;
    let runs = replicas(cfg, "tasep-phi", |key| phi_run(cfg.rho, &[cfg.t], lo, hi, wd, key))?;
    let reference = replicas(cfg, "tasep-phi/reference", |key| psi_pattern(cfg.rho, lo, hi, key))?;
    let alphabet = 1usize << (hi - lo + 1);
    let (mut p, mut q) = (Counts::zeros(alphabet), Counts::zeros(alphabet));
    runs.iter().for_each(|r| p.add(r.patterns[0]));
    reference.iter().for_each(|&c| q.add(c));
    let body = match cfg.format {
        Format::Csv => {
            let mut out = String::from("pattern,sites,phi,psi\n");
            let (pf, qf) = (p.frequencies(), q.frequencies());
            for code in 0..alphabet {
                if pf[code] == 0.0 && qf[code] == 0.0 {
                    continue;
                }
                let sites: String = (0..alphabet.trailing_zeros())
                    .map(|i| if code >> i & 1 == 1 { '1' } else { '0' })
                    .collect();
                writeln!(out, "{code},{sites},{},{}", pf[code], qf[code]).unwrap();
            }
            Body::Csv(out)
        }
        Format::Json => {
            let min_margin = runs.iter().map(|r| r.margin).min().unwrap_or(0);
            let worst_bound = runs.iter().map(|r| r.boundary_bound).fold(0.0, f64::max);
            Body::Json(json!({
                "window": [lo, hi],
                "half_width": wd,
                "tv_to_stationary": tv_distance(&p, &q)?,
                "min_margin": min_margin,
                "boundary_bound": worst_bound,
            }))
        }
    };
    Ok(body.into())
}

pub fn psi_sample(cfg: &ExperimentConfig) -> Result<Outcome> {
    let half = cfg.wd;
    let samples = replicas(cfg, "psi-sample", |key| {
        let sigma = sample_sigma(cfg.rho, half, key)?;
        let star = project_etabar_star(&sigma)?;
        let bern = project_bernoulli(&sigma)?;
        let eta = etabar_from_star(&star)?;
        let stars = sigma.stars_up_to(half as i64);
        let ones = (1..=half as i64).filter(|&x| bern.bit(x) == Some(1)).count();
        Ok((eta, star.x_plus()?, star.x_minus()?, stars, ones))
    })?;
    let body = match cfg.format {
        Format::Csv => {
            let mut out = String::from("replica,site,symbol\n");
            for (i, s) in samples.iter().enumerate() {
                for (j, sym) in s.0.symbols().iter().enumerate() {
                    writeln!(out, "{i},{},{sym}", s.0.lo() + j as i64).unwrap();
                }
            }
            Body::Csv(out)
        }
        Format::Json => {
            let tail = |xs: Vec<Option<i64>>, pmf: &dyn Fn(i64) -> f64| -> Result<Value> {
                let missing = xs.iter().filter(|x| x.is_none()).count();
                let mut c = Counts::zeros(1);
                xs.iter().flatten().for_each(|&x| c.add_growing(x as usize));
                Ok(json!({
                    "found": xs.len() - missing,
                    "beyond_window": missing,
                    "tv_to_pmf": if c.total() > 0 { tv_to_pmf(&c, |k| pmf(k as i64))? } else { 1.0 },
                }))
            };
            let rho = cfg.rho;
            let stars: Vec<f64> = samples.iter().map(|s| s.3 as f64).collect();
            let density: Vec<f64> = samples.iter().map(|s| s.4 as f64 / half as f64).collect();
            Body::Json(json!({
                "half_length": half,
                "x_plus": tail(samples.iter().map(|s| s.1).collect(), &|k| x_plus_pmf(rho, k))?,
                "x_minus": tail(samples.iter().map(|s| s.2).collect(), &|k| x_minus_pmf(rho, k))?,
                "mean_stars_on_positive_half": mean(&stars),
                "bernoulli_projection_density": mean(&density),
            }))
        }
    };
    Ok(body.into())
}

pub fn chain_check(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (x, rho) = (cfg.k, cfg.rho);
    let side = x + 1;
    let code = |c: ChainState| c.r1 as usize * side + c.r2 as usize;
    let chain = replicas(cfg, "chain-check/chain", |key| {
        let mut rng = key.rng();
        let mut c = ChainState::START;
        for _ in 0..x {
            c = chain_step(c, rho, &mut rng)?;
        }
        Ok(code(c))
    })?;
    let drivers = replicas(cfg, "chain-check/drivers", |key| {
        let mut rng = key.rng();
        let y1: Vec<bool> = (0..x).map(|_| bernoulli(&mut rng, rho)).collect();
        let y2: Vec<bool> = (0..x).map(|_| bernoulli(&mut rng, rho)).collect();
        Ok(code(chain_from_drivers(&y1, &y2, x)?))
    })?;
    let (mut p, mut q) = (Counts::zeros(side * side), Counts::zeros(side * side));
    chain.iter().for_each(|&c| p.add(c));
    drivers.iter().for_each(|&c| q.add(c));
    let body = match cfg.format {
        Format::Csv => {
            let mut out = String::from("r1,r2,chain,drivers\n");
            let (pf, qf) = (p.frequencies(), q.frequencies());
            for r1 in 0..side {
                for r2 in 0..=r1 {
                    let i = r1 * side + r2;
                    if pf[i] > 0.0 || qf[i] > 0.0 {
                        writeln!(out, "{r1},{r2},{},{}", pf[i], qf[i]).unwrap();
                    }
                }
            }
            Body::Csv(out)
        }
        Format::Json => {
            let enumeration = if x <= 8 {
                match rational_from_decimal(rho) {
                    Ok(r) => serde_json::to_value(joint_pmf_bruteforce(&r, x)?)?,
                    Err(e) => json!({ "skipped": e.to_string() }),
                }
            } else {
                json!({ "skipped": "enumeration covers chain lengths up to 8" })
            };
            Body::Json(json!({
                "x": x,
                "tv_chain_vs_drivers": tv_distance(&p, &q)?,
                "enumeration": enumeration,
            }))
        }
    };
    Ok(body.into())
}

pub fn limit_eval(cfg: &ExperimentConfig, law: Law, h_max: f64, points: usize) -> Result<Outcome> {
    if law.is_constant() {
        let values = law.eval(cfg.rho, 0.0)?;
        return Ok(match cfg.format {
            Format::Csv => {
                let header: Vec<String> = if values.len() == 1 {
                    vec!["value".into()]
                } else {
                    (0..values.len()).map(|i| format!("value{i}")).collect()
                };
                let row: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                Body::Csv(format!("{}\n{}\n", header.join(","), row.join(",")))
            }
            Format::Json => Body::Json(json!({ "values": values })),
        }
        .into());
    }
    if !(h_max > 0.0) || points < 2 {
        return Err(Error::Invariant(
            "the h grid needs a positive upper end and at least two points".into(),
        ));
    }
    let grid: Vec<f64> = (0..points).map(|i| h_max * i as f64 / (points - 1) as f64).collect();
    let mut rows = Vec::with_capacity(points);
    for &h in &grid {
        rows.push((h, law.eval(cfg.rho, h)?[0]));
    }
    Ok(match cfg.format {
        Format::Csv => {
            let mut out = String::from("h,value\n");
            for (h, v) in rows {
                writeln!(out, "{h},{v}").unwrap();
            }
            Body::Csv(out)
        }
        Format::Json => Body::Json(json!({
            "h": grid,
            "values": rows.iter().map(|r| r.1).collect::<Vec<_>>(),
        })),
    }
    .into())
}

pub fn nu_sample(cfg: &ExperimentConfig) -> Result<Outcome> {
    let k = cfg.k;
    let samples = replicas(cfg, "nu-sample", |key| nu_forward_sample(cfg.rho, k, key))?;
    let body = match cfg.format {
        Format::Csv => {
            let mut out = String::from("replica,variant,a,b,weight,on_path\n");
            for (i, s) in samples.iter().enumerate() {
                for a in 0..=k {
                    for b in 0..=k {
                        writeln!(
                            out,
                            "{i},{},{a},{b},{},{}",
                            s.variant,
                            s.weight(a, b),
                            u8::from(s.on_path(a, b))
                        )
                        .unwrap();
                    }
                }
            }
            Body::Csv(out)
        }
        Format::Json => {
            let e = EmpiricalDistribution::new(samples.iter().map(|s| s.center_weight()).collect())?;
            let n = samples.len() as f64;
            let corners = samples.iter().filter(|s| s.is_corner()).count() as f64 / n;
            let ones = samples.iter().filter(|s| s.variant == Variant::One).count() as f64 / n;
            Body::Json(json!({
                "samples": samples.len(),
                "ks_center_weight_vs_limit_law": ks_distance(&e, |h| nu_cdf(cfg.rho, h))?,
                "corner_fraction": corners,
                "limit_corner_fraction": corner_rate(cfg.rho)?,
                "variant_one_fraction": ones,
                "variant_one_probability": variant_weights(cfg.rho)?.0,
            }))
        }
    };
    Ok(body.into())
}

pub fn check(cfg: &ExperimentConfig, profile: Profile, only: Vec<u8>, version: &str) -> Result<Outcome> {
    let suite = SuiteConfig {
        seed: cfg.seed,
        profile,
        workers: cfg.workers,
        only,
    };
    let report = run_suite(&suite, version, |c| eprintln!("{}", c.summary()))?;
    let pass = report.pass;
    let resource_error = report.any_resource_error();
    Ok(Outcome {
        body: Body::Json(serde_json::to_value(&report)?),
        pass,
        resource_error,
    })
}
