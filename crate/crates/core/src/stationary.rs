//! Stationary law of TASEP seen from a hole-particle pair.
//!
//! The sampler follows the random walk construction: two Bernoulli(rho)
//! sequences `Y1`, `Y2` drive `W = R2 - R1` and its running maximum `M`;
//! points where `M` increases become second-class particles (`*`). The left
//! half of the line comes from an independent driver at `1 - rho` with holes
//! and particles exchanged.
//!
//! Drivers are consumed sequentially, so a sample with a larger half length
//! extends a smaller one with the same key instead of replacing it.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{check_rho, Error, Result};
use crate::limits::Variant;
use crate::rng::{bernoulli, uniform, StreamKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    Hole,
    Particle,
    Star,
}

impl Symbol {
    pub fn bit(self) -> Option<u8> {
        match self {
            Symbol::Hole => Some(0),
            Symbol::Particle => Some(1),
            Symbol::Star => None,
        }
    }

    fn flipped(self) -> Self {
        match self {
            Symbol::Hole => Symbol::Particle,
            Symbol::Particle => Symbol::Hole,
            Symbol::Star => Symbol::Star,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::Hole => "0",
            Symbol::Particle => "1",
            Symbol::Star => "*",
        })
    }
}

/// One sided driver `(Y1, Y2)` on sites `1..=len` with its derived walks.
#[derive(Debug, Clone)]
pub struct HalfLineDriver {
    y1: Vec<bool>,
    y2: Vec<bool>,
    // Indexed by x = 0..=len.
    w: Vec<i64>,
    m: Vec<i64>,
    e: Vec<bool>,
}

impl Default for HalfLineDriver {
    fn default() -> Self {
        Self {
            y1: Vec::new(),
            y2: Vec::new(),
            w: vec![0],
            m: vec![0],
            e: vec![false],
        }
    }
}

impl HalfLineDriver {
    pub fn from_bits(y1: &[bool], y2: &[bool]) -> Result<Self> {
        if y1.len() != y2.len() {
            return Err(Error::param("drivers", "Y1 and Y2 must have equal length"));
        }
        let mut d = Self::default();
        for (&a, &b) in y1.iter().zip(y2) {
            d.push(a, b);
        }
        Ok(d)
    }

    pub fn sample(rho: f64, len: usize, rng: &mut impl RngCore) -> Result<Self> {
        check_rho(rho)?;
        let mut d = Self::default();
        d.extend(rho, len, rng);
        Ok(d)
    }

    /// Appends sites until the driver covers `1..=len`.
    pub fn extend(&mut self, rho: f64, len: usize, rng: &mut impl RngCore) {
        while self.len() < len {
            let a = bernoulli(rng, rho);
            let b = bernoulli(rng, rho);
            self.push(a, b);
        }
    }

    pub fn push(&mut self, y1: bool, y2: bool) {
        let x = self.len();
        let (w, m) = (self.w[x], self.m[x]);
        let w_next = w + i64::from(y2) - i64::from(y1);
        self.e.push(m == w && y2 && !y1);
        self.m.push(m.max(w_next));
        self.w.push(w_next);
        self.y1.push(y1);
        self.y2.push(y2);
    }

    pub fn len(&self) -> usize {
        self.y1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y1.is_empty()
    }

    pub fn y1(&self, x: usize) -> bool {
        self.y1[x - 1]
    }

    pub fn y2(&self, x: usize) -> bool {
        self.y2[x - 1]
    }

    pub fn r1(&self, x: usize) -> i64 {
        self.y1[..x].iter().filter(|&&y| y).count() as i64
    }

    pub fn r2(&self, x: usize) -> i64 {
        self.y2[..x].iter().filter(|&&y| y).count() as i64
    }

    pub fn w(&self, x: usize) -> i64 {
        self.w[x]
    }

    pub fn m(&self, x: usize) -> i64 {
        self.m[x]
    }

    /// Whether `x` is a point of increase of `M`.
    pub fn in_e(&self, x: usize) -> bool {
        self.e[x]
    }

    /// `|E ∩ [1, x]|`, which equals `M(x)`.
    pub fn e_count(&self, x: usize) -> i64 {
        self.m[x]
    }

    /// `sigma(x)` for `x >= 1`.
    pub fn sigma(&self, x: usize) -> Symbol {
        if self.y1(x) {
            Symbol::Particle
        } else if self.in_e(x) {
            Symbol::Star
        } else {
            Symbol::Hole
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConfigKind {
    Sigma,
    EtaBarStar,
    EtaBar,
    /// Product-measure projection; keeps the star at the origin.
    Bernoulli,
}

impl ConfigKind {
    fn name(self) -> &'static str {
        match self {
            ConfigKind::Sigma => "sigma",
            ConfigKind::EtaBarStar => "etaBarStar",
            ConfigKind::EtaBar => "etaBar",
            ConfigKind::Bernoulli => "bernoulli",
        }
    }
}

/// Symbols on the contiguous window `lo..lo + len`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryConfig {
    kind: ConfigKind,
    lo: i64,
    symbols: Vec<Symbol>,
}

impl StationaryConfig {
    pub fn new(kind: ConfigKind, lo: i64, symbols: Vec<Symbol>) -> Self {
        Self { kind, lo, symbols }
    }

    pub fn kind(&self) -> ConfigKind {
        self.kind
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.symbols.len() as i64 - 1
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, x: i64) -> Option<Symbol> {
        if x < self.lo {
            return None;
        }
        self.symbols.get((x - self.lo) as usize).copied()
    }

    /// Occupation at `x`; `None` off the window or at a star.
    pub fn bit(&self, x: i64) -> Option<u8> {
        self.get(x).and_then(Symbol::bit)
    }

    fn expect(&self, kind: ConfigKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::Variant {
                expected: kind.name(),
                found: self.kind.name(),
            })
        }
    }

    fn first_from(&self, start: i64, step: i64, target: Symbol) -> Option<i64> {
        let mut x = start;
        while let Some(s) = self.get(x) {
            if s == target {
                return Some((x - start).abs() + 1);
            }
            x += step;
        }
        None
    }

    /// First hole at a positive site of an `etaBarStar` config.
    pub fn x_plus(&self) -> Result<Option<i64>> {
        self.expect(ConfigKind::EtaBarStar)?;
        Ok(self.first_from(1, 1, Symbol::Hole))
    }

    /// Distance to the first particle at a negative site of an `etaBarStar` config.
    pub fn x_minus(&self) -> Result<Option<i64>> {
        self.expect(ConfigKind::EtaBarStar)?;
        Ok(self.first_from(-1, -1, Symbol::Particle))
    }

    /// `min{x >= 1 : eta(x + 1) = 0}` of an `etaBar` config.
    pub fn d_plus(&self) -> Result<Option<i64>> {
        self.expect(ConfigKind::EtaBar)?;
        Ok(self.first_from(2, 1, Symbol::Hole))
    }

    /// `min{x >= 1 : eta(-x) = 1}` of an `etaBar` config.
    pub fn d_minus(&self) -> Result<Option<i64>> {
        self.expect(ConfigKind::EtaBar)?;
        Ok(self.first_from(-1, -1, Symbol::Particle))
    }

    /// Number of stars on `[1, x]`.
    pub fn stars_up_to(&self, x: i64) -> usize {
        (1..=x).filter(|&y| self.get(y) == Some(Symbol::Star)).count()
    }

    /// Bits on `lo..=hi` packed with `lo` as the least significant bit.
    pub fn pattern(&self, lo: i64, hi: i64) -> Option<usize> {
        let mut code = 0usize;
        for x in (lo..=hi).rev() {
            code = code << 1 | usize::from(self.bit(x)?);
        }
        Some(code)
    }

    /// CSV with header `site,symbol`.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "site,symbol")?;
        for (i, s) in self.symbols.iter().enumerate() {
            writeln!(out, "{},{s}", self.lo + i as i64)?;
        }
        Ok(())
    }
}

fn check_half_length(half_length: usize) -> Result<()> {
    if half_length == 0 {
        return Err(Error::param("halfLength", "must be at least 1"));
    }
    Ok(())
}

/// `sigma` on `[-half_length, half_length]`.
pub fn sample_sigma(rho: f64, half_length: usize, key: &StreamKey) -> Result<StationaryConfig> {
    check_rho(rho)?;
    check_half_length(half_length)?;
    let right = HalfLineDriver::sample(rho, half_length, &mut key.child("right").rng())?;
    let left = HalfLineDriver::sample(1.0 - rho, half_length, &mut key.child("left").rng())?;
    Ok(sigma_from_drivers(&right, &left))
}

/// Glues a right driver at `rho` and a left driver at `1 - rho`.
pub fn sigma_from_drivers(right: &HalfLineDriver, left: &HalfLineDriver) -> StationaryConfig {
    let n = left.len();
    let mut symbols = Vec::with_capacity(n + right.len() + 1);
    for x in (1..=n).rev() {
        symbols.push(left.sigma(x).flipped());
    }
    symbols.push(Symbol::Star);
    for x in 1..=right.len() {
        symbols.push(right.sigma(x));
    }
    StationaryConfig::new(ConfigKind::Sigma, -(n as i64), symbols)
}

fn project(sigma: &StationaryConfig, positive: Symbol, kind: ConfigKind) -> Result<StationaryConfig> {
    sigma.expect(ConfigKind::Sigma)?;
    let symbols = sigma
        .symbols
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let x = sigma.lo + i as i64;
            match (s, x.signum()) {
                (Symbol::Star, 1) => positive,
                (Symbol::Star, -1) => positive.flipped(),
                _ => s,
            }
        })
        .collect();
    Ok(StationaryConfig::new(kind, sigma.lo, symbols))
}

/// Stars at positive sites become particles, at negative sites holes.
pub fn project_etabar_star(sigma: &StationaryConfig) -> Result<StationaryConfig> {
    project(sigma, Symbol::Particle, ConfigKind::EtaBarStar)
}

/// Stars at positive sites become holes, at negative sites particles.
pub fn project_bernoulli(sigma: &StationaryConfig) -> Result<StationaryConfig> {
    project(sigma, Symbol::Hole, ConfigKind::Bernoulli)
}

/// Replaces the star at the origin by a hole-particle pair at sites 0 and 1.
pub fn etabar_from_star(star: &StationaryConfig) -> Result<StationaryConfig> {
    star.expect(ConfigKind::EtaBarStar)?;
    let mut symbols = Vec::with_capacity(star.symbols.len() + 1);
    for x in star.lo..0 {
        symbols.push(star.get(x).unwrap());
    }
    symbols.push(Symbol::Hole);
    symbols.push(Symbol::Particle);
    for x in 1..=star.hi() {
        symbols.push(star.get(x).unwrap());
    }
    Ok(StationaryConfig::new(ConfigKind::EtaBar, star.lo.min(0), symbols))
}

/// A sample of the stationary pair law on `[-half_length, half_length + 1]`.
pub fn sample_psi(rho: f64, half_length: usize, key: &StreamKey) -> Result<StationaryConfig> {
    etabar_from_star(&project_etabar_star(&sample_sigma(rho, half_length, key)?)?)
}

/// Start conditioned on a pair jump at time zero.
///
/// Variant 1 has holes at -1 and 0 and a particle at 1; variant 2 has a hole
/// at 0 and particles at 1 and 2. The tails are copied from a pair sample.
pub fn sample_psi_conditioned(
    rho: f64,
    variant: Variant,
    half_length: usize,
    key: &StreamKey,
) -> Result<StationaryConfig> {
    let psi = sample_psi(rho, half_length, key)?;
    let l = half_length as i64;
    let (lo, hi) = match variant {
        Variant::One => (-l - 1, l + 1),
        Variant::Two => (-l, l + 2),
    };
    let symbols = (lo..=hi)
        .map(|x| {
            let src = match (variant, x) {
                (Variant::One, -1 | 0) | (Variant::Two, 0) => return Symbol::Hole,
                (Variant::One, 1) | (Variant::Two, 1 | 2) => return Symbol::Particle,
                (Variant::One, x) if x >= 2 => x,
                (Variant::One, x) => x + 1,
                (Variant::Two, x) if x >= 3 => x - 1,
                (Variant::Two, x) => x,
            };
            psi.get(src).expect("tail site inside the pair sample")
        })
        .collect();
    Ok(StationaryConfig::new(ConfigKind::EtaBar, lo, symbols))
}

/// Samples `X+` by running a right driver until the first hole.
pub fn sample_x_plus(rho: f64, rng: &mut impl RngCore) -> Result<i64> {
    check_rho(rho)?;
    let mut d = HalfLineDriver::default();
    loop {
        let a = bernoulli(rng, rho);
        let b = bernoulli(rng, rho);
        d.push(a, b);
        if d.sigma(d.len()) == Symbol::Hole {
            return Ok(d.len() as i64);
        }
    }
}

/// Samples `|X-|`; by the hole-particle symmetry this is `X+` at `1 - rho`.
pub fn sample_x_minus(rho: f64, rng: &mut impl RngCore) -> Result<i64> {
    check_rho(rho)?;
    sample_x_plus(1.0 - rho, rng)
}

pub fn x_plus_pmf(rho: f64, k: i64) -> f64 {
    if k < 1 {
        return 0.0;
    }
    k as f64 * (1.0 - rho).powi(2) * rho.powi(k as i32 - 1)
}

pub fn x_minus_pmf(rho: f64, k: i64) -> f64 {
    x_plus_pmf(1.0 - rho, k)
}

/// `(R1bar, R2bar)`; always `r1 >= r2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainState {
    pub r1: u64,
    pub r2: u64,
}

impl ChainState {
    pub const START: ChainState = ChainState { r1: 0, r2: 0 };
}

/// The four transition probabilities from `state`, ordered as moves
/// `(+1,+1)`, `(+1,0)`, `(0,+1)`, `(0,0)`.
pub fn chain_transitions(state: ChainState, rho: f64) -> Result<[f64; 4]> {
    check_rho(rho)?;
    if state.r1 < state.r2 {
        return Err(Error::Invariant(format!(
            "chain state ({}, {}) has r1 < r2",
            state.r1, state.r2
        )));
    }
    let d = (state.r1 - state.r2) as f64;
    let q = rho * (1.0 - rho);
    let p = [
        rho * rho,
        q * (d + 2.0) / (d + 1.0),
        q * d / (d + 1.0),
        (1.0 - rho) * (1.0 - rho),
    ];
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Invariant(format!(
            "transition row sums to {total}"
        )));
    }
    Ok(p)
}

pub fn chain_step(state: ChainState, rho: f64, rng: &mut impl RngCore) -> Result<ChainState> {
    let p = chain_transitions(state, rho)?;
    let u = uniform(rng);
    let ChainState { r1, r2 } = state;
    Ok(if u < p[0] {
        ChainState { r1: r1 + 1, r2: r2 + 1 }
    } else if u < p[0] + p[1] {
        ChainState { r1: r1 + 1, r2 }
    } else if u < p[0] + p[1] + p[2] {
        ChainState { r1, r2: r2 + 1 }
    } else {
        state
    })
}

/// `(R1 + E, R2 - E)` at `x`.
pub fn chain_from_drivers(y1: &[bool], y2: &[bool], x: usize) -> Result<ChainState> {
    if x > y1.len() || x > y2.len() {
        return Err(Error::param("x", "drivers are shorter than x"));
    }
    let d = HalfLineDriver::from_bits(&y1[..x], &y2[..x])?;
    let e = d.e_count(x);
    Ok(ChainState {
        r1: (d.r1(x) + e) as u64,
        r2: (d.r2(x) - e) as u64,
    })
}

/// Outcome of the exhaustive check of the joint trajectory law.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointPmfReport {
    pub x: usize,
    pub rho: String,
    pub driver_pairs: u64,
    pub admissible_events: u64,
    pub max_abs_error: f64,
    pub total_mass: String,
    pub mismatches: Vec<String>,
    pub pass: bool,
}

type Event = (Vec<(u8, u8)>, u8);

fn trajectory_of(y1: u32, y2: u32, x: usize) -> Event {
    let mut d = HalfLineDriver::default();
    let mut traj = Vec::with_capacity(x);
    for i in 0..x {
        d.push(y1 >> i & 1 == 1, y2 >> i & 1 == 1);
        let e = d.e_count(i + 1);
        traj.push(((d.r1(i + 1) + e) as u8, (d.r2(i + 1) - e) as u8));
    }
    (traj, d.e_count(x) as u8)
}

fn admissible(x: usize) -> Vec<Event> {
    fn walk(x: usize, cur: &mut Vec<(u8, u8)>, out: &mut Vec<Event>) {
        let (r1, r2) = cur.last().copied().unwrap_or((0, 0));
        if cur.len() == x {
            for h in 0..=(r1 - r2) {
                out.push((cur.clone(), h));
            }
            return;
        }
        for (a, b) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            if r1 + a >= r2 + b {
                cur.push((r1 + a, r2 + b));
                walk(x, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(x, &mut Vec::new(), &mut out);
    out
}

/// Enumerates all `4^x` driver pairs and checks, in exact arithmetic, that
/// every admissible (trajectory, `E(x)`) event has probability
/// `rho^(r1 + r2) (1 - rho)^(2x - r1 - r2)`.
pub fn joint_pmf_bruteforce(rho: &BigRational, x: usize) -> Result<JointPmfReport> {
    if !(rho > &BigRational::zero() && rho < &BigRational::one()) {
        return Err(Error::param("rho", "must lie in (0,1)"));
    }
    if x == 0 || x > 8 {
        return Err(Error::param("x", format!("must lie in 1..=8, got {x}")));
    }
    let one_minus = BigRational::one() - rho;
    let pow = |base: &BigRational, k: usize| (0..k).fold(BigRational::one(), |acc, _| acc * base);
    let weight = |ones: usize| pow(rho, ones) * pow(&one_minus, 2 * x - ones);

    let mut mass: HashMap<Event, BigRational> = HashMap::new();
    let mut total = BigRational::zero();
    let n = 1u32 << x;
    for y1 in 0..n {
        for y2 in 0..n {
            let ones = (y1.count_ones() + y2.count_ones()) as usize;
            let w = weight(ones);
            total += &w;
            *mass.entry(trajectory_of(y1, y2, x)).or_insert_with(BigRational::zero) += w;
        }
    }

    let events = admissible(x);
    let mut mismatches = Vec::new();
    let mut max_abs_error = 0.0f64;
    for ev in &events {
        let (r1, r2) = ev.0.last().copied().unwrap();
        let expected = weight(usize::from(r1) + usize::from(r2));
        let got = mass.remove(ev).unwrap_or_else(BigRational::zero);
        if got != expected {
            let err = (got.clone() - expected.clone()).abs().to_f64().unwrap_or(f64::INFINITY);
            max_abs_error = max_abs_error.max(err);
            if mismatches.len() < 10 {
                mismatches.push(format!("trajectory {:?} with E={}: got {got}, expected {expected}", ev.0, ev.1));
            }
        }
    }
    for (ev, m) in mass {
        if !m.is_zero() {
            max_abs_error = max_abs_error.max(m.to_f64().unwrap_or(f64::INFINITY));
            if mismatches.len() < 10 {
                mismatches.push(format!("inadmissible trajectory {:?} with E={} has mass {m}", ev.0, ev.1));
            }
        }
    }
    Ok(JointPmfReport {
        x,
        rho: rho.to_string(),
        driver_pairs: u64::from(n) * u64::from(n),
        admissible_events: events.len() as u64,
        max_abs_error,
        total_mass: total.to_string(),
        pass: mismatches.is_empty() && total.is_one(),
        mismatches,
    })
}

/// Exact rational for a decimal `rho` such as `0.3`.
pub fn rational_from_decimal(rho: f64) -> Result<BigRational> {
    check_rho(rho)?;
    for digits in 1..=9u32 {
        let scale = 10i64.pow(digits);
        let num = (rho * scale as f64).round();
        if (num / scale as f64 - rho).abs() < 1e-15 {
            return Ok(BigRational::new((num as i64).into(), scale.into()));
        }
    }
    Err(Error::param("rho", format!("{rho} is not a short decimal")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamKey;

    #[test]
    fn walk_invariants_and_e_rule() {
        let mut rng = StreamKey::new(1, 0, "drv").rng();
        let d = HalfLineDriver::sample(0.5, 5000, &mut rng).unwrap();
        for x in 1..=d.len() {
            assert!(d.m(x) >= d.w(x));
            let rule = d.m(x - 1) == d.w(x - 1) && d.y2(x) && !d.y1(x);
            assert_eq!(d.in_e(x), rule);
            assert_eq!(d.in_e(x), d.m(x) > d.m(x - 1));
        }
        assert_eq!(d.w(d.len()), d.r2(d.len()) - d.r1(d.len()));
    }

    #[test]
    fn first_site_forced_star() {
        let d = HalfLineDriver::from_bits(&[false], &[true]).unwrap();
        assert_eq!(d.sigma(1), Symbol::Star);
        let right = d;
        let left = HalfLineDriver::from_bits(&[true], &[false]).unwrap();
        let s = sigma_from_drivers(&right, &left);
        assert_eq!(s.get(0), Some(Symbol::Star));
        assert_eq!(s.get(1), Some(Symbol::Star));
        assert_eq!(s.get(-1), Some(Symbol::Hole));
    }

    #[test]
    fn projections_and_pair() {
        let key = StreamKey::new(2, 0, "psi");
        let s = sample_sigma(0.4, 200, &key).unwrap();
        assert_eq!(s.get(0), Some(Symbol::Star));
        let star = project_etabar_star(&s).unwrap();
        let bern = project_bernoulli(&s).unwrap();
        assert_eq!(star.get(0), Some(Symbol::Star));
        assert_eq!(star.symbols().iter().filter(|&&x| x == Symbol::Star).count(), 1);
        for x in -200..=200i64 {
            let differs = star.get(x) != bern.get(x);
            assert_eq!(differs, x != 0 && s.get(x) == Some(Symbol::Star));
        }
        let eta = etabar_from_star(&star).unwrap();
        assert_eq!((eta.bit(0), eta.bit(1)), (Some(0), Some(1)));
        for x in -200..0 {
            assert_eq!(eta.get(x), star.get(x));
        }
        for x in 2..=201 {
            assert_eq!(eta.get(x), star.get(x - 1));
        }
        assert!(project_etabar_star(&star).is_err());
        assert!(etabar_from_star(&s).is_err());
        assert_eq!(eta.d_plus().unwrap(), star.x_plus().unwrap());
    }

    #[test]
    fn longer_samples_extend_shorter_ones() {
        let key = StreamKey::new(3, 0, "psi");
        let a = sample_psi(0.5, 50, &key).unwrap();
        let b = sample_psi(0.5, 400, &key).unwrap();
        for x in a.lo()..=a.hi() {
            assert_eq!(a.get(x), b.get(x));
        }
    }

    #[test]
    fn conditioned_fixed_cells() {
        for r in 0..200 {
            let key = StreamKey::new(4, r, "cond");
            let c1 = sample_psi_conditioned(0.3, Variant::One, 30, &key).unwrap();
            assert_eq!((c1.bit(-1), c1.bit(0), c1.bit(1)), (Some(0), Some(0), Some(1)));
            let c2 = sample_psi_conditioned(0.3, Variant::Two, 30, &key).unwrap();
            assert_eq!((c2.bit(0), c2.bit(1), c2.bit(2)), (Some(0), Some(1), Some(1)));
            let psi = sample_psi(0.3, 30, &key).unwrap();
            for x in 2..=31 {
                assert_eq!(c1.get(x), psi.get(x));
                assert_eq!(c2.get(x + 1), psi.get(x));
            }
            for x in 1..=30 {
                assert_eq!(c1.get(-x - 1), psi.get(-x));
                assert_eq!(c2.get(-x), psi.get(-x));
            }
        }
    }

    #[test]
    fn chain_rows_sum_to_one() {
        for d in 0..=10 {
            for rho in [0.1, 0.3, 0.5, 0.9] {
                let p = chain_transitions(ChainState { r1: d + 3, r2: 3 }, rho).unwrap();
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                if d == 0 {
                    assert_eq!(p[2], 0.0);
                }
            }
        }
        assert!(chain_transitions(ChainState { r1: 0, r2: 1 }, 0.5).is_err());
    }

    #[test]
    fn drivers_give_ordered_pairs() {
        let mut rng = StreamKey::new(5, 0, "chain").rng();
        let d = HalfLineDriver::sample(0.5, 300, &mut rng).unwrap();
        for x in 0..=300 {
            let s = chain_from_drivers(&d.y1, &d.y2, x).unwrap();
            assert!(s.r1 >= s.r2);
            assert_eq!(s.r1 as i64 - s.r2 as i64, 2 * d.m(x) - d.w(x));
        }
    }

    #[test]
    fn bruteforce_x1_by_hand() {
        let rho = rational_from_decimal(0.3).unwrap();
        let rep = joint_pmf_bruteforce(&rho, 1).unwrap();
        assert!(rep.pass, "{:?}", rep.mismatches);
        assert_eq!(rep.total_mass, "1");
        // (1,0) with E = 1 comes only from Y1 = 0, Y2 = 1.
        assert_eq!(rep.admissible_events, 1 + 2 + 1);
    }

    #[test]
    fn bruteforce_small_x() {
        for rho in [0.3, 0.5] {
            let r = rational_from_decimal(rho).unwrap();
            for x in 1..=5 {
                let rep = joint_pmf_bruteforce(&r, x).unwrap();
                assert!(rep.pass, "rho={rho} x={x}: {:?}", rep.mismatches);
            }
        }
        assert!(joint_pmf_bruteforce(&rational_from_decimal(0.5).unwrap(), 9).is_err());
    }

    #[test]
    fn pattern_packing() {
        let c = StationaryConfig::new(
            ConfigKind::EtaBar,
            -1,
            vec![Symbol::Particle, Symbol::Hole, Symbol::Particle, Symbol::Particle],
        );
        assert_eq!(c.pattern(-1, 2), Some(0b1101));
        assert_eq!(c.pattern(-2, 2), None);
        let mut csv = Vec::new();
        c.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "site,symbol\n-1,1\n0,0\n1,1\n2,1\n");
    }
}
