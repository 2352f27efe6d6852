//! Forward sampler for the environment seen from a typical geodesic vertex.
//!
//! A start is drawn from the mixture of the two jump-conditioned pair laws,
//! TASEP runs until the holes and particles labelled `0..=k+1` have all
//! exchanged, and the weights are read off the swap times as
//! `xi(a,b) = min(L(a+1,b), L(a,b+1)) - L(a,b)`.
//!
//! Swaps among those labels only involve sites between particle `k+1` and
//! hole `k+1`; everything outside has either already crossed or never will,
//! so the simulation runs on exactly that window.

use serde::{Deserialize, Serialize};

use crate::error::{check_rho, Error, Result};
use crate::lattice::Vertex;
use crate::limits::{variant_weights, Variant};
use crate::rng::{uniform, StreamKey};
use crate::stationary::{sample_psi_conditioned, StationaryConfig, Symbol};
use crate::tasep::TasepState;

const MAX_HALF_LENGTH: usize = 1 << 22;

/// Swap times `L(a, b)` for `0 <= a, b <= size - 1` with `L(0,0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpTimes {
    pub size: usize,
    pub times: Vec<f64>,
}

impl JumpTimes {
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.times[a * self.size + b]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuForwardSample {
    pub variant: Variant,
    pub jump_times: JumpTimes,
    /// `xi(a, b)` for `0 <= a, b <= k`, row-major in `a`.
    pub weights: Vec<f64>,
    pub k: usize,
    /// Forward path from the origin inside `[0, k]^2`.
    pub path: Vec<Vertex>,
    pub backward_neighbor: Vertex,
}

impl NuForwardSample {
    pub fn weight(&self, a: usize, b: usize) -> f64 {
        self.weights[a * (self.k + 1) + b]
    }

    pub fn center_weight(&self) -> f64 {
        self.weights[0]
    }

    pub fn on_path(&self, a: usize, b: usize) -> bool {
        self.path.contains(&Vertex::new(a as i64, b as i64))
    }

    /// Whether the origin is a corner of the path through it.
    pub fn is_corner(&self) -> bool {
        let first = self.path.get(1).copied();
        match self.variant {
            Variant::One => first == Some(Vertex::new(0, 1)),
            Variant::Two => first == Some(Vertex::new(1, 0)),
        }
    }
}

fn find_site(config: &StationaryConfig, start: i64, step: i64, symbol: Symbol, rank: usize) -> Option<i64> {
    let mut seen = 0;
    let mut x = start;
    while let Some(s) = config.get(x) {
        if s == symbol {
            if seen == rank {
                return Some(x);
            }
            seen += 1;
        }
        x += step;
    }
    None
}

/// Runs TASEP from a jump-conditioned start until every swap among labels
/// `0..=m` has happened.
pub fn conditioned_jump_times(rho: f64, variant: Variant, m: usize, key: &StreamKey) -> Result<JumpTimes> {
    check_rho(rho)?;
    if m == 0 {
        return Err(Error::param("k", "need at least one label beyond the origin"));
    }
    let config_key = key.child("config");
    let mut half = 4 * (m + 2);
    let (config, lo, hi) = loop {
        let config = sample_psi_conditioned(rho, variant, half, &config_key)?;
        // Particle labels count leftwards from site 1, hole labels rightwards from 0.
        let lo = find_site(&config, 1, -1, Symbol::Particle, m);
        let hi = find_site(&config, 0, 1, Symbol::Hole, m);
        if let (Some(lo), Some(hi)) = (lo, hi) {
            break (config, lo, hi);
        }
        half *= 2;
        if half > MAX_HALF_LENGTH {
            return Err(Error::truncation(
                "no window containing the required labels",
                "the configuration sampler ran past its maximum half length",
            ));
        }
    };
    let mut sim = TasepState::from_config(&config, lo, hi, key)?;
    let size = m + 1;
    let mut times = vec![f64::NAN; size * size];
    times[0] = 0.0;
    let mut missing = size * size - 1;
    while missing > 0 {
        let Some(s) = sim.step() else {
            return Err(Error::Invariant("window froze before all labels exchanged".into()));
        };
        if s.a >= 0 && s.b >= 0 && (s.a as usize) < size && (s.b as usize) < size {
            times[s.a as usize * size + s.b as usize] = s.time;
            missing -= 1;
        }
    }
    Ok(JumpTimes { size, times })
}

/// Draws one forward sample on the quadrant `[0, k]^2`.
pub fn nu_forward_sample(rho: f64, k: usize, key: &StreamKey) -> Result<NuForwardSample> {
    check_rho(rho)?;
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    let (w1, _) = variant_weights(rho)?;
    let variant = if uniform(&mut key.child("label").rng()) < w1 {
        Variant::One
    } else {
        Variant::Two
    };
    let jump_times = conditioned_jump_times(rho, variant, k + 1, key)?;
    let l = |a: usize, b: usize| jump_times.get(a, b);
    let mut weights = Vec::with_capacity((k + 1) * (k + 1));
    for a in 0..=k {
        for b in 0..=k {
            weights.push(l(a + 1, b).min(l(a, b + 1)) - l(a, b));
        }
    }
    let (mut a, mut b) = (0usize, 0usize);
    let mut path = vec![Vertex::ORIGIN];
    while a < k || b < k {
        if l(a + 1, b) < l(a, b + 1) {
            a += 1;
        } else {
            b += 1;
        }
        if a > k || b > k {
            break;
        }
        path.push(Vertex::new(a as i64, b as i64));
    }
    let backward_neighbor = match variant {
        Variant::One => Vertex::new(-1, 0),
        Variant::Two => Vertex::new(0, -1),
    };
    Ok(NuForwardSample {
        variant,
        jump_times,
        weights,
        k,
        path,
        backward_neighbor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_of_a_sample() {
        for r in 0..200 {
            let s = nu_forward_sample(0.4, 3, &StreamKey::new(1, r, "nu")).unwrap();
            assert_eq!(s.jump_times.get(0, 0), 0.0);
            assert!(s.weights.iter().all(|&w| w > 0.0));
            let direct = s.jump_times.get(1, 0).min(s.jump_times.get(0, 1));
            assert_eq!(s.center_weight(), direct);
            assert_eq!(s.path[0], Vertex::ORIGIN);
            for w in s.path.windows(2) {
                assert_eq!(w[1].d() - w[0].d(), 1);
                assert!(w[0].le(w[1]));
            }
            let expected = match s.variant {
                Variant::One => Vertex::new(-1, 0),
                Variant::Two => Vertex::new(0, -1),
            };
            assert_eq!(s.backward_neighbor, expected);
            // Swap times increase along both label directions.
            for a in 0..s.jump_times.size {
                for b in 0..s.jump_times.size {
                    if a + 1 < s.jump_times.size {
                        assert!(s.jump_times.get(a + 1, b) > s.jump_times.get(a, b));
                    }
                    if b + 1 < s.jump_times.size {
                        assert!(s.jump_times.get(a, b + 1) > s.jump_times.get(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn reproducible() {
        let key = StreamKey::new(9, 3, "nu");
        assert_eq!(
            nu_forward_sample(0.5, 2, &key).unwrap(),
            nu_forward_sample(0.5, 2, &key).unwrap()
        );
    }
}
