//! Closed-form laws for the weight seen from a typical geodesic vertex.
//!
//! All formulas are written as explicit polynomials times exponentials. With
//! `z = rho^2 + (1-rho)^2`, `c1 = rho(1-rho)/z` and `c2 = rho(1-rho)` the
//! weight survival is `(1 + c1 h)(1 + c2 h) e^{-h}`.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{check_rho, Error, Result};
use crate::rng::{bernoulli, exp1};

fn z(rho: f64) -> f64 {
    rho * rho + (1.0 - rho) * (1.0 - rho)
}

fn coefficients(rho: f64) -> (f64, f64) {
    let q = rho * (1.0 - rho);
    (q / z(rho), q)
}

/// `P[xi > h]` under the law of the weight at a typical geodesic vertex.
pub fn nu_survival(rho: f64, h: f64) -> f64 {
    if h < 0.0 {
        return 1.0;
    }
    let (c1, c2) = coefficients(rho);
    (1.0 + c1 * h) * (1.0 + c2 * h) * (-h).exp()
}

pub fn nu_cdf(rho: f64, h: f64) -> f64 {
    1.0 - nu_survival(rho, h)
}

pub fn nu_density(rho: f64, h: f64) -> f64 {
    if h < 0.0 {
        return 0.0;
    }
    let (c1, c2) = coefficients(rho);
    let p0 = 1.0 - c1 - c2;
    let p1 = c1 + c2 - 2.0 * c1 * c2;
    let p2 = c1 * c2;
    (p0 + p1 * h + p2 * h * h) * (-h).exp()
}

/// Weights of the Gamma(1,1), Gamma(2,1), Gamma(3,1) mixture.
pub fn gamma_mixture_weights(rho: f64) -> Result<(f64, f64, f64)> {
    check_rho(rho)?;
    let (r, s) = (rho, 1.0 - rho);
    let z = z(rho);
    Ok((
        (r.powi(4) + s.powi(4)) / z,
        2.0 * r * s,
        2.0 * r * r * s * s / z,
    ))
}

/// `P[Gamma(k,1) > h]` for `k` in 1..=3.
pub fn gamma_survival(k: u32, h: f64) -> f64 {
    if h < 0.0 {
        return 1.0;
    }
    let poly = match k {
        1 => 1.0,
        2 => 1.0 + h,
        3 => 1.0 + h + h * h / 2.0,
        _ => panic!("gamma_survival only covers shapes 1..=3"),
    };
    poly * (-h).exp()
}

pub fn corner_rate(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let (r, s) = (rho, 1.0 - rho);
    Ok(2.0 * r * r * s * s * (1.0 + 2.0 * r - 2.0 * r * r) / z(rho))
}

/// Corner probabilities under the two conditioned starts.
pub fn corner_mixture_probs(rho: f64) -> Result<(f64, f64)> {
    check_rho(rho)?;
    let k = 1.0 + 2.0 * rho - 2.0 * rho * rho;
    Ok((rho * rho * k, (1.0 - rho) * (1.0 - rho) * k))
}

/// Weights `((1-rho)^2, rho^2) / z` of the two conditioned starts.
pub fn variant_weights(rho: f64) -> Result<(f64, f64)> {
    check_rho(rho)?;
    let z = z(rho);
    Ok(((1.0 - rho) * (1.0 - rho) / z, rho * rho / z))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    One,
    Two,
}

impl Variant {
    pub fn index(self) -> u8 {
        match self {
            Variant::One => 1,
            Variant::Two => 2,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Variant::One),
            2 => Ok(Variant::Two),
            _ => Err(Error::param("variant", format!("must be 1 or 2, got {i}"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Which first jump time: `L(1,0)` (pair moves right) or `L(0,1)` (pair moves left).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Jump {
    L10,
    L01,
}

impl FromStr for Jump {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l10" | "right" => Ok(Jump::L10),
            "l01" | "left" => Ok(Jump::L01),
            _ => Err(Error::param("which", format!("expected L10 or L01, got `{s}`"))),
        }
    }
}

impl fmt::Display for Jump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Jump::L10 => "L10",
            Jump::L01 => "L01",
        })
    }
}

/// First-jump survival functions under the two conditioned starts.
pub fn jump_survival(rho: f64, variant: Variant, which: Jump, h: f64) -> Result<f64> {
    check_rho(rho)?;
    if h < 0.0 {
        return Ok(1.0);
    }
    let (r, s) = (rho, 1.0 - rho);
    Ok(match (variant, which) {
        (Variant::One, Jump::L10) => (1.0 + s * r * h) * (-s * h).exp(),
        (Variant::One, Jump::L01) => (1.0 + r * h) * (-r * h).exp(),
        (Variant::Two, Jump::L10) => (1.0 + s * h) * (-s * h).exp(),
        (Variant::Two, Jump::L01) => (1.0 + s * r * h) * (-r * h).exp(),
    })
}

/// Moments of the weight law and its size-biased version.
#[derive(Debug, Clone, Copy)]
pub struct SizeBias {
    rho: f64,
    pub mean_xi: f64,
    pub second_moment: f64,
}

impl SizeBias {
    pub fn density(&self, h: f64) -> f64 {
        h * nu_density(self.rho, h) / self.mean_xi
    }

    /// Mean of the size-biased law, `E[xi^2] / E[xi]`.
    pub fn mean(&self) -> f64 {
        self.second_moment / self.mean_xi
    }
}

pub fn size_bias(rho: f64) -> Result<SizeBias> {
    check_rho(rho)?;
    let (c1, c2) = coefficients(rho);
    // int h^j e^{-h} dh = j!
    let mean_xi = 1.0 + (c1 + c2) + 2.0 * c1 * c2;
    let second_moment = 2.0 * (1.0 + 2.0 * (c1 + c2) + 6.0 * c1 * c2);
    Ok(SizeBias {
        rho,
        mean_xi,
        second_moment,
    })
}

/// Draws `2 min(E1 + E2, E3 + B E4)` with `B` a fair coin.
pub fn sample_two_min(rng: &mut impl RngCore) -> f64 {
    let e1 = exp1(rng);
    let e2 = exp1(rng);
    let e3 = exp1(rng);
    let e4 = exp1(rng);
    let b = if bernoulli(rng, 0.5) { 1.0 } else { 0.0 };
    2.0 * (e1 + e2).min(e3 + b * e4)
}

/// Named closed forms evaluable on an `h` grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    NuSurvival,
    NuDensity,
    SizeBiasedDensity,
    JumpSurvival(Variant, Jump),
    CornerRate,
    GammaWeights,
    CornerProbs,
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let law = match s {
            "nu-survival" => Law::NuSurvival,
            "nu-density" => Law::NuDensity,
            "size-biased-density" => Law::SizeBiasedDensity,
            "jump-1-l10" => Law::JumpSurvival(Variant::One, Jump::L10),
            "jump-1-l01" => Law::JumpSurvival(Variant::One, Jump::L01),
            "jump-2-l10" => Law::JumpSurvival(Variant::Two, Jump::L10),
            "jump-2-l01" => Law::JumpSurvival(Variant::Two, Jump::L01),
            "corner-rate" => Law::CornerRate,
            "gamma-weights" => Law::GammaWeights,
            "corner-probs" => Law::CornerProbs,
            _ => {
                return Err(Error::param(
                    "law",
                    format!("unknown law `{s}`; expected one of {}", Law::NAMES.join(", ")),
                ))
            }
        };
        Ok(law)
    }
}

impl Law {
    pub const NAMES: [&'static str; 10] = [
        "nu-survival",
        "nu-density",
        "size-biased-density",
        "jump-1-l10",
        "jump-1-l01",
        "jump-2-l10",
        "jump-2-l01",
        "corner-rate",
        "gamma-weights",
        "corner-probs",
    ];

    /// True for laws that do not depend on `h`.
    pub fn is_constant(self) -> bool {
        matches!(self, Law::CornerRate | Law::GammaWeights | Law::CornerProbs)
    }

    /// Values at `h`; constant laws ignore `h` and may return several values.
    pub fn eval(self, rho: f64, h: f64) -> Result<Vec<f64>> {
        check_rho(rho)?;
        Ok(match self {
            Law::NuSurvival => vec![nu_survival(rho, h)],
            Law::NuDensity => vec![nu_density(rho, h)],
            Law::SizeBiasedDensity => vec![size_bias(rho)?.density(h)],
            Law::JumpSurvival(v, j) => vec![jump_survival(rho, v, j, h)?],
            Law::CornerRate => vec![corner_rate(rho)?],
            Law::GammaWeights => {
                let (a, b, c) = gamma_mixture_weights(rho)?;
                vec![a, b, c]
            }
            Law::CornerProbs => {
                let (a, b) = corner_mixture_probs(rho)?;
                vec![a, b]
            }
        })
    }
}
