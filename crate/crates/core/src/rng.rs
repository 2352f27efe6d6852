//! Deterministic, stream-keyed randomness.
//!
//! Every random quantity in the crate is drawn from a generator derived from a
//! [`StreamKey`] `(seed, replica, label)`. Two kinds of generators exist:
//!
//! * [`SimRng`], a sequential xoshiro256++ stream, used by samplers that
//!   consume draws in a fixed order (TASEP clocks, renewal drivers);
//! * [`CellField`], a counter-based field where the value at a lattice vertex
//!   is a pure function of the key and the vertex. Weight fields built this
//!   way do not depend on the box they are evaluated in, so a window can be
//!   enlarged without changing the values it already contains.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};

pub type SimRng = Xoshiro256PlusPlus;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0100_0000_01b3);
    }
    hash
}

/// Identifies one reproducible random stream.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub replica: u32,
    pub label: String,
}

impl StreamKey {
    pub fn new(seed: u64, replica: u32, label: impl Into<String>) -> Self {
        Self {
            seed,
            replica,
            label: label.into(),
        }
    }

    /// Same seed and replica, different label.
    pub fn relabel(&self, label: impl Into<String>) -> Self {
        Self::new(self.seed, self.replica, label)
    }

    /// Same seed and label, different replica.
    pub fn for_replica(&self, replica: u32) -> Self {
        Self::new(self.seed, replica, self.label.clone())
    }

    /// Appends `/suffix` to the label; used to split one key into sub-streams.
    pub fn child(&self, suffix: &str) -> Self {
        Self::new(self.seed, self.replica, format!("{}/{}", self.label, suffix))
    }

    pub fn stream_id(&self) -> u64 {
        let mut id = mix64(self.seed.wrapping_add(GOLDEN));
        id = mix64(id ^ u64::from(self.replica).wrapping_mul(0xD134_2543_DE82_EF95));
        mix64(id ^ fnv1a64(self.label.as_bytes()))
    }

    pub fn rng(&self) -> SimRng {
        SimRng::seed_from_u64(self.stream_id())
    }

    pub fn field(&self) -> CellField {
        let id = self.stream_id();
        CellField {
            k1: id,
            k2: mix64(id ^ 0x5851_F42D_4C95_7F2D),
        }
    }
}

/// Uniform on `(0, 1]` with 53 bits of precision.
#[inline]
pub fn uniform_open0(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform on `[0, 1)` with 53 bits of precision.
#[inline]
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Exp(1) by inversion.
#[inline]
pub fn exp1(rng: &mut impl RngCore) -> f64 {
    -uniform_open0(rng).ln()
}

#[inline]
pub fn bernoulli(rng: &mut impl RngCore, p: f64) -> bool {
    uniform(rng) < p
}

pub fn sample_exponential(rng: &mut impl RngCore, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::param("rate", format!("must be positive, got {rate}")));
    }
    Ok(exp1(rng) / rate)
}

pub fn sample_bernoulli(rng: &mut impl RngCore, p: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("must lie in [0,1], got {p}")));
    }
    Ok(bernoulli(rng, p))
}

/// Counter-based i.i.d. field over `Z^2`.
#[derive(Debug, Clone, Copy)]
pub struct CellField {
    k1: u64,
    k2: u64,
}

impl CellField {
    #[inline]
    pub fn bits(&self, a: i64, b: i64) -> u64 {
        let index = ((a as u32 as u64) << 32) | (b as u32 as u64);
        mix64(mix64(index.wrapping_add(self.k1)) ^ self.k2)
    }

    #[inline]
    pub fn uniform_open0(&self, a: i64, b: i64) -> f64 {
        ((self.bits(a, b) >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Exp(1) value attached to vertex `(a, b)`.
    #[inline]
    pub fn exp1(&self, a: i64, b: i64) -> f64 {
        -self.uniform_open0(a, b).ln()
    }
}

/// Parses a seed written in decimal or as `0x`-prefixed hex.
pub fn parse_seed(text: &str) -> Result<u64> {
    let t = text.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => t.replace('_', "").parse::<u64>(),
    };
    parsed.map_err(|e| Error::param("seed", format!("`{text}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean(xs: &[f64]) -> f64 {
        xs.iter().sum::<f64>() / xs.len() as f64
    }

    #[test]
    fn exponential_means() {
        let mut rng = StreamKey::new(1, 0, "exp").rng();
        let xs: Vec<f64> = (0..1_000_000)
            .map(|_| sample_exponential(&mut rng, 1.0).unwrap())
            .collect();
        let m = mean(&xs);
        assert!((0.997..=1.003).contains(&m), "{m}");

        let xs: Vec<f64> = (0..1_000_000)
            .map(|_| sample_exponential(&mut rng, 2.0).unwrap())
            .collect();
        assert!((mean(&xs) - 0.5).abs() < 0.003);
    }

    #[test]
    fn bad_parameters() {
        let mut rng = StreamKey::new(1, 0, "x").rng();
        assert!(sample_exponential(&mut rng, 0.0).is_err());
        assert!(sample_exponential(&mut rng, -1.0).is_err());
        assert!(sample_bernoulli(&mut rng, 1.5).is_err());
        assert!(sample_bernoulli(&mut rng, -0.1).is_err());
    }

    #[test]
    fn bernoulli_edges_and_frequency() {
        let mut rng = StreamKey::new(3, 0, "bern").rng();
        assert!((0..10_000).all(|_| !sample_bernoulli(&mut rng, 0.0).unwrap()));
        assert!((0..10_000).all(|_| sample_bernoulli(&mut rng, 1.0).unwrap()));
        let hits = (0..1_000_000).filter(|_| bernoulli(&mut rng, 0.3)).count();
        let freq = hits as f64 / 1e6;
        assert!((freq - 0.3).abs() < 0.002, "{freq}");
    }

    #[test]
    fn same_key_same_stream() {
        let key = StreamKey::new(42, 7, "weights");
        let mut r1 = key.rng();
        let mut r2 = key.clone().rng();
        let a: Vec<f64> = (0..100).map(|_| exp1(&mut r1)).collect();
        let b: Vec<f64> = (0..100).map(|_| exp1(&mut r2)).collect();
        assert_eq!(a, b);
        let f = key.field();
        assert_eq!(f.exp1(3, -9).to_bits(), key.field().exp1(3, -9).to_bits());
    }

    #[test]
    fn neighbouring_labels_are_uncorrelated() {
        let mut r1 = StreamKey::new(9, 0, "label-a").rng();
        let mut r2 = StreamKey::new(9, 0, "label-b").rng();
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| uniform(&mut r1)).collect();
        let ys: Vec<f64> = (0..n).map(|_| uniform(&mut r2)).collect();
        let r = crate::stats::correlation(&xs, &ys);
        assert!(r.abs() < 0.01, "{r}");
    }

    #[test]
    fn seeds_parse_in_both_bases() {
        assert_eq!(parse_seed("255").unwrap(), 255);
        assert_eq!(parse_seed("0xff").unwrap(), 255);
        assert_eq!(parse_seed("0XFF").unwrap(), 255);
        assert!(parse_seed("zz").is_err());
    }
}
