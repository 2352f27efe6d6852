//! Continuous-time TASEP on a finite window with a tracked hole-particle pair.
//!
//! Particles jump right at rate one onto empty sites. Holes are labelled left
//! to right and particles right to left, so that the pair's hole (site 0 at
//! time zero) and the pair's particle (site 1) both carry label 0. The swap of
//! hole `a` with particle `b` happens at time `L(a, b)`.
//!
//! The scheduler keeps one exponential clock per admissible bond. A bond
//! `(x, x + 1)` with a particle at `x` and a hole at `x + 1` stays admissible
//! until it fires, so each clock is drawn once, when the bond appears. Sites
//! outside the window are frozen.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{check_rho, Error, Result};
use crate::rng::{bernoulli, exp1, SimRng, StreamKey};
use crate::stationary::{ConfigKind, StationaryConfig};

#[derive(Debug, Clone, Copy)]
struct Pending {
    time: f64,
    site: i64,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    // Reversed so that `BinaryHeap` pops the earliest clock.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.site.cmp(&self.site))
    }
}

/// One particle-hole exchange.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Swap {
    /// Hole label.
    pub a: i64,
    /// Particle label.
    pub b: i64,
    /// Left site of the bond before the swap.
    pub site: i64,
    pub time: f64,
    /// Exponential clock that elapsed between activation and the swap.
    pub wait: f64,
}

/// Swap times `L(a, b)` in firing order.
#[derive(Debug, Clone, Default)]
pub struct SwapLog {
    pub swaps: Vec<Swap>,
}

impl SwapLog {
    pub fn len(&self) -> usize {
        self.swaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.swaps.is_empty()
    }

    pub fn by_labels(&self) -> HashMap<(i64, i64), Swap> {
        self.swaps.iter().map(|s| ((s.a, s.b), *s)).collect()
    }

    /// CSV with header `a,b,time`.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "a,b,time")?;
        for s in &self.swaps {
            writeln!(out, "{},{},{}", s.a, s.b, s.time)?;
        }
        Ok(())
    }
}

/// A move of the tracked pair to labels `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairMove {
    pub time: f64,
    pub a: i64,
    pub b: i64,
    /// Site of the pair's hole after the move.
    pub site: i64,
}

/// Summary of an `evolve` call.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EvolveReport {
    pub events: u64,
    /// Smallest distance between the pair and a window edge over the run.
    pub margin: i64,
    /// Chernoff bound on a boundary effect travelling `margin` sites by now.
    pub boundary_bound: f64,
}

/// `P[Poisson(t) >= d]` bounded by `e^{-t} (e t / d)^d`.
pub fn poisson_tail_bound(t: f64, d: i64) -> f64 {
    if d <= 0 {
        return 1.0;
    }
    let d = d as f64;
    if d <= t {
        return 1.0;
    }
    (-t + d - d * (d / t).ln()).exp().min(1.0)
}

/// Window half-width used for runs of length `t`: linear speed plus
/// diffusive and pair-fluctuation margins.
pub fn default_half_width(t: f64) -> i64 {
    (t + 6.0 * t.sqrt() + 3.0 * t.powf(2.0 / 3.0) + 16.0).ceil() as i64
}

#[derive(Debug, Clone)]
pub struct TasepState {
    lo: i64,
    occ: Vec<bool>,
    label: Vec<i64>,
    time: f64,
    pair_hole: i64,
    a: i64,
    b: i64,
    pair_min: i64,
    pair_max: i64,
    events: u64,
    rng: SimRng,
    heap: BinaryHeap<Pending>,
    act: Vec<f64>,
    wait: Vec<f64>,
    log: Option<SwapLog>,
    moves: Vec<PairMove>,
}

impl TasepState {
    /// Starts from `occ` on `lo..lo + occ.len()` with the pair's hole at
    /// `pair_hole`. Clocks are drawn from `rng`.
    pub fn new(lo: i64, occ: Vec<bool>, pair_hole: i64, rng: SimRng) -> Result<Self> {
        let n = occ.len() as i64;
        let inside = |x: i64| x >= lo && x < lo + n;
        if !inside(pair_hole) || !inside(pair_hole + 1) {
            return Err(Error::param("pair", "pair sites must lie in the window"));
        }
        let at = |x: i64| (x - lo) as usize;
        if occ[at(pair_hole)] || !occ[at(pair_hole + 1)] {
            return Err(Error::param("pair", "pair must be a hole followed by a particle"));
        }
        let mut label = vec![0i64; occ.len()];
        let (mut h, mut p) = (0i64, 0i64);
        for x in pair_hole..lo + n {
            if !occ[at(x)] {
                label[at(x)] = h;
                h += 1;
            }
        }
        for x in (lo..=pair_hole + 1).rev() {
            if occ[at(x)] {
                label[at(x)] = p;
                p += 1;
            }
        }
        let (mut h, mut p) = (-1i64, -1i64);
        for x in (lo..pair_hole).rev() {
            if !occ[at(x)] {
                label[at(x)] = h;
                h -= 1;
            }
        }
        for x in pair_hole + 2..lo + n {
            if occ[at(x)] {
                label[at(x)] = p;
                p -= 1;
            }
        }
        let mut s = Self {
            lo,
            act: vec![0.0; occ.len()],
            wait: vec![0.0; occ.len()],
            occ,
            label,
            time: 0.0,
            pair_hole,
            a: 0,
            b: 0,
            pair_min: pair_hole,
            pair_max: pair_hole,
            events: 0,
            rng,
            heap: BinaryHeap::new(),
            log: None,
            moves: Vec::new(),
        };
        for x in lo..lo + n - 1 {
            if s.admissible(x) {
                s.activate(x);
            }
        }
        Ok(s)
    }

    /// Turns on the swap log.
    pub fn with_log(mut self) -> Self {
        self.log = Some(SwapLog::default());
        self
    }

    /// Pair at sites 0 and 1, Bernoulli(rho) elsewhere on `[-wd, wd]`.
    pub fn init_bernoulli_pair(rho: f64, wd: usize, key: &StreamKey) -> Result<Self> {
        check_rho(rho)?;
        if wd < 2 {
            return Err(Error::param("wd", "window half-width must be at least 2"));
        }
        let wd = wd as i64;
        let mut init = key.child("init").rng();
        let occ = (-wd..=wd)
            .map(|x| match x {
                0 => false,
                1 => true,
                _ => bernoulli(&mut init, rho),
            })
            .collect();
        Self::new(-wd, occ, 0, key.child("clocks").rng())
    }

    /// Starts from a pair-centred configuration restricted to `lo..=hi`.
    pub fn from_config(config: &StationaryConfig, lo: i64, hi: i64, key: &StreamKey) -> Result<Self> {
        if config.kind() != ConfigKind::EtaBar {
            return Err(Error::Variant {
                expected: "etaBar",
                found: "other",
            });
        }
        if lo < config.lo() || hi > config.hi() {
            return Err(Error::truncation(
                format!("window {lo}..={hi} exceeds the sampled configuration"),
                "sample the configuration with a larger half length",
            ));
        }
        let occ = (lo..=hi).map(|x| config.bit(x) == Some(1)).collect();
        Self::new(lo, occ, 0, key.child("clocks").rng())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.occ.len() as i64 - 1
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    /// `(a_t, b_t)`: the pair's current hole and particle labels.
    pub fn pair_labels(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    pub fn pair_site(&self) -> i64 {
        self.pair_hole
    }

    pub fn pair_moves(&self) -> &[PairMove] {
        &self.moves
    }

    pub fn occupied(&self, x: i64) -> Option<bool> {
        self.index(x).map(|i| self.occ[i])
    }

    /// Label of whatever sits at `x`.
    pub fn label_at(&self, x: i64) -> Option<i64> {
        self.index(x).map(|i| self.label[i])
    }

    pub fn log(&self) -> Option<&SwapLog> {
        self.log.as_ref()
    }

    pub fn take_log(&mut self) -> SwapLog {
        self.log.replace(SwapLog::default()).unwrap_or_default()
    }

    /// Scheduled but unfired swaps as `((a, b), activation, wait)`.
    pub fn pending(&self) -> Vec<((i64, i64), f64, f64)> {
        self.heap
            .iter()
            .map(|p| {
                let i = self.index(p.site).unwrap();
                ((self.label[i + 1], self.label[i]), self.act[i], self.wait[i])
            })
            .collect()
    }

    pub fn next_time(&self) -> Option<f64> {
        self.heap.peek().map(|p| p.time)
    }

    #[inline]
    fn index(&self, x: i64) -> Option<usize> {
        let i = x - self.lo;
        (i >= 0 && (i as usize) < self.occ.len()).then_some(i as usize)
    }

    #[inline]
    fn admissible(&self, x: i64) -> bool {
        match (self.index(x), self.index(x + 1)) {
            (Some(i), Some(j)) => self.occ[i] && !self.occ[j],
            _ => false,
        }
    }

    fn activate(&mut self, x: i64) {
        let i = (x - self.lo) as usize;
        let w = exp1(&mut self.rng);
        self.act[i] = self.time;
        self.wait[i] = w;
        self.heap.push(Pending {
            time: self.time + w,
            site: x,
        });
    }

    /// Fires the next swap, if any bond is admissible.
    pub fn step(&mut self) -> Option<Swap> {
        let Pending { time, site: x } = self.heap.pop()?;
        let i = (x - self.lo) as usize;
        self.time = time;
        self.events += 1;
        let swap = Swap {
            a: self.label[i + 1],
            b: self.label[i],
            site: x,
            time,
            wait: self.wait[i],
        };
        self.occ.swap(i, i + 1);
        self.label.swap(i, i + 1);
        if x == self.pair_hole + 1 {
            self.a += 1;
            self.pair_hole += 1;
            self.pair_max = self.pair_max.max(self.pair_hole);
            self.record_move();
        } else if x == self.pair_hole - 1 {
            self.b += 1;
            self.pair_hole -= 1;
            self.pair_min = self.pair_min.min(self.pair_hole);
            self.record_move();
        }
        if self.admissible(x - 1) {
            self.activate(x - 1);
        }
        if self.admissible(x + 1) {
            self.activate(x + 1);
        }
        if let Some(log) = &mut self.log {
            log.swaps.push(swap);
        }
        Some(swap)
    }

    fn record_move(&mut self) {
        self.moves.push(PairMove {
            time: self.time,
            a: self.a,
            b: self.b,
            site: self.pair_hole,
        });
    }

    /// Runs every swap with time `<= t_max`, then advances the clock to `t_max`.
    pub fn evolve(&mut self, t_max: f64) -> Result<EvolveReport> {
        if !(t_max >= 0.0) {
            return Err(Error::param("t_max", "must be non-negative"));
        }
        let start = self.events;
        while self.next_time().is_some_and(|t| t <= t_max) {
            self.step();
        }
        self.time = self.time.max(t_max);
        Ok(EvolveReport {
            events: self.events - start,
            margin: self.margin(),
            boundary_bound: poisson_tail_bound(self.time, self.margin()),
        })
    }

    /// Smallest distance from the pair to either window edge so far.
    pub fn margin(&self) -> i64 {
        (self.pair_min - self.lo).min(self.hi() - (self.pair_max + 1))
    }

    /// Occupations at `pair + lo ..= pair + hi`, i.e. the centred process.
    pub fn seen_from_pair(&self, lo: i64, hi: i64) -> Result<Vec<u8>> {
        (lo..=hi)
            .map(|d| {
                self.occupied(self.pair_hole + d).map(u8::from).ok_or_else(|| {
                    Error::truncation(
                        format!("site {d} relative to the pair left the window"),
                        "enlarge the window half-width",
                    )
                })
            })
            .collect()
    }

    /// Centred occupations on `lo..=hi` packed with `lo` as the least significant bit.
    pub fn pattern(&self, lo: i64, hi: i64) -> Result<usize> {
        let bits = self.seen_from_pair(lo, hi)?;
        Ok(bits.iter().rev().fold(0usize, |c, &b| c << 1 | usize::from(b)))
    }

    /// CSV snapshot with header `site,occupancy,label`.
    pub fn write_snapshot_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "site,occupancy,label")?;
        for (i, (&o, &l)) in self.occ.iter().zip(&self.label).enumerate() {
            writeln!(out, "{},{},{l}", self.lo + i as i64, u8::from(o))?;
        }
        Ok(())
    }
}

/// Result of comparing the simulated swap times against the growth recursion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CouplingReport {
    pub swaps: usize,
    pub cells: usize,
    pub pair_moves: usize,
    pub mismatches: Vec<String>,
    pub pass: bool,
}

/// Rebuilds `L(a, b)` from `max(L(a-1, b), L(a, b-1)) + wait(a, b)` using the
/// clocks the simulation drew, and compares it with the simulated swap log
/// and the pair trajectory. Equality is required bit for bit.
pub fn lpp_clock_coupling_check(rho: f64, wd: usize, t_max: f64, key: &StreamKey) -> Result<CouplingReport> {
    let sim = TasepState::init_bernoulli_pair(rho, wd, key)?.with_log();
    coupling_check(sim, t_max)
}

pub fn coupling_check(mut sim: TasepState, t_max: f64) -> Result<CouplingReport> {
    let (lo, hi) = (sim.lo(), sim.hi());
    let mut hole_pos = HashMap::new();
    let mut particle_pos = HashMap::new();
    for x in lo..=hi {
        let l = sim.label_at(x).unwrap();
        if sim.occupied(x).unwrap() {
            particle_pos.insert(l, x);
        } else {
            hole_pos.insert(l, x);
        }
    }
    sim.evolve(t_max)?;
    let log = sim.log().cloned().unwrap_or_default().by_labels();
    let pending: HashMap<(i64, i64), (f64, f64)> = sim
        .pending()
        .into_iter()
        .map(|(k, act, w)| (k, (act, w)))
        .collect();

    let mut mismatches = Vec::new();
    let mut note = |m: String| {
        if mismatches.len() < 20 {
            mismatches.push(m);
        }
    };
    let (amin, amax) = hole_pos.keys().fold((i64::MAX, i64::MIN), |(l, h), &k| (l.min(k), h.max(k)));
    let (bmin, bmax) = particle_pos
        .keys()
        .fold((i64::MAX, i64::MIN), |(l, h), &k| (l.min(k), h.max(k)));
    let width = if bmax >= bmin { (bmax - bmin + 1) as usize } else { 0 };
    let height = if amax >= amin { (amax - amin + 1) as usize } else { 0 };
    let mut grid = vec![f64::INFINITY; width * height];
    let at = |a: i64, b: i64| (a - amin) as usize * width + (b - bmin) as usize;
    let mut matched = 0usize;
    for a in amin..=amax {
        for b in bmin..=bmax {
            if particle_pos[&b] > hole_pos[&a] {
                grid[at(a, b)] = 0.0;
                if log.contains_key(&(a, b)) {
                    note(format!("({a},{b}) starts swapped but was logged"));
                }
                continue;
            }
            let p1 = if a > amin { grid[at(a - 1, b)] } else { 0.0 };
            let p2 = if b > bmin { grid[at(a, b - 1)] } else { 0.0 };
            let act = p1.max(p2);
            if act > t_max {
                if log.contains_key(&(a, b)) || pending.contains_key(&(a, b)) {
                    note(format!("({a},{b}) active in the simulation but not in the recursion"));
                }
                continue;
            }
            let w = match (log.get(&(a, b)), pending.get(&(a, b))) {
                (Some(s), _) => s.wait,
                (None, Some(&(_, w))) => w,
                (None, None) => {
                    note(format!("({a},{b}) has no clock in the simulation"));
                    continue;
                }
            };
            if let Some(&(sim_act, _)) = pending.get(&(a, b)) {
                if sim_act.to_bits() != act.to_bits() {
                    note(format!("({a},{b}) activation {sim_act} vs recursion {act}"));
                }
            }
            let l = act + w;
            grid[at(a, b)] = l;
            match log.get(&(a, b)) {
                Some(s) if l <= t_max => {
                    matched += 1;
                    if s.time.to_bits() != l.to_bits() {
                        note(format!("L({a},{b}) simulated {} vs recursion {l}", s.time));
                    }
                }
                Some(s) => note(format!("L({a},{b}) logged at {} beyond the recursion value {l}", s.time)),
                None if l <= t_max => note(format!("L({a},{b}) = {l} missing from the log")),
                None => {}
            }
        }
    }
    if matched != log.len() {
        note(format!("{} logged swaps, {matched} matched by the recursion", log.len()));
    }

    // Competition interface: from (0,0) step towards the earlier of the two swaps.
    let value = |a: i64, b: i64| {
        if (amin..=amax).contains(&a) && (bmin..=bmax).contains(&b) {
            grid[at(a, b)]
        } else {
            f64::INFINITY
        }
    };
    let (mut a, mut b) = (0i64, 0i64);
    let mut path = Vec::new();
    loop {
        let (right, left) = (value(a + 1, b), value(a, b + 1));
        let t = right.min(left);
        if t > t_max {
            break;
        }
        if right < left {
            a += 1;
        } else {
            b += 1;
        }
        path.push((t, a, b));
    }
    let moves = sim.pair_moves();
    if moves.len() != path.len() {
        note(format!("{} pair moves vs {} interface steps", moves.len(), path.len()));
    }
    for (m, &(t, a, b)) in moves.iter().zip(&path) {
        if (m.a, m.b) != (a, b) || m.time.to_bits() != t.to_bits() || m.site != a - b {
            note(format!("pair move {m:?} vs interface ({a},{b}) at {t}"));
        }
    }
    Ok(CouplingReport {
        swaps: log.len(),
        cells: grid.len(),
        pair_moves: moves.len(),
        pass: mismatches.is_empty(),
        mismatches,
    })
}
