//! Point-to-point exponential last-passage percolation.
//!
//! Passage times are computed by a row sweep over the rectangle spanned by
//! the endpoints, keeping one rolling row of passage times and one bit per
//! vertex recording which predecessor attained the maximum. The geodesic is
//! read back from the bitmap.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_rho, Error, Result};
use crate::rng::{CellField, StreamKey};

/// Largest number of cells a dense window or DP rectangle may cover.
pub const CELL_BUDGET: u128 = 1 << 36;
/// Largest dense weight window (f64 entries), about 1 GiB.
pub const WINDOW_BUDGET: u128 = 1 << 27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub a: i64,
    pub b: i64,
}

impl Vertex {
    pub const ORIGIN: Vertex = Vertex { a: 0, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    /// `a + b`, the anti-diagonal level.
    pub fn d(self) -> i64 {
        self.a + self.b
    }

    /// `a - b`, the position along the anti-diagonal.
    pub fn ad(self) -> i64 {
        self.a - self.b
    }

    /// Coordinate-wise `<=`.
    pub fn le(self, other: Vertex) -> bool {
        self.a <= other.a && self.b <= other.b
    }

    pub fn offset(self, da: i64, db: i64) -> Vertex {
        Vertex::new(self.a + da, self.b + db)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl From<(i64, i64)> for Vertex {
    fn from((a, b): (i64, i64)) -> Self {
        Vertex::new(a, b)
    }
}

/// Anything that assigns a weight to lattice vertices.
pub trait WeightSource {
    fn weight(&self, a: i64, b: i64) -> f64;

    fn contains(&self, v: Vertex) -> bool;

    fn describe(&self) -> String;
}

impl WeightSource for CellField {
    #[inline]
    fn weight(&self, a: i64, b: i64) -> f64 {
        self.exp1(a, b)
    }

    fn contains(&self, _v: Vertex) -> bool {
        true
    }

    fn describe(&self) -> String {
        "unbounded field".into()
    }
}

/// Dense rectangular field of vertex weights anchored at `origin`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightWindow {
    origin: Vertex,
    width: usize,
    height: usize,
    weights: Vec<f64>,
}

impl WeightWindow {
    /// Builds a window from a closure over absolute coordinates.
    pub fn from_fn(
        origin: Vertex,
        (width, height): (usize, usize),
        mut f: impl FnMut(i64, i64) -> f64,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::param("extent", "width and height must be positive"));
        }
        let cells = width as u128 * height as u128;
        if cells > WINDOW_BUDGET {
            return Err(Error::Capacity {
                cells,
                budget: WINDOW_BUDGET,
            });
        }
        let mut weights = Vec::with_capacity(width * height);
        for j in 0..height as i64 {
            for i in 0..width as i64 {
                weights.push(f(origin.a + i, origin.b + j));
            }
        }
        if let Some(bad) = weights.iter().find(|w| !(**w > 0.0)) {
            return Err(Error::param("weights", format!("must be positive, found {bad}")));
        }
        Ok(Self {
            origin,
            width,
            height,
            weights,
        })
    }

    /// Rows listed bottom-up: `rows[j][i]` is the weight at `origin + (i, j)`.
    pub fn from_rows(origin: Vertex, rows: &[&[f64]]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::param("rows", "rows must have equal length"));
        }
        Self::from_fn(origin, (width, height), |a, b| {
            rows[(b - origin.b) as usize][(a - origin.a) as usize]
        })
    }

    pub fn origin(&self) -> Vertex {
        self.origin
    }

    pub fn extent(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// North-east corner.
    pub fn corner(&self) -> Vertex {
        self.origin
            .offset(self.width as i64 - 1, self.height as i64 - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, v: Vertex) -> Option<f64> {
        self.contains(v).then(|| self.at(v.a, v.b))
    }

    #[inline]
    fn at(&self, a: i64, b: i64) -> f64 {
        let i = (a - self.origin.a) as usize;
        let j = (b - self.origin.b) as usize;
        self.weights[j * self.width + i]
    }
}

impl WeightSource for WeightWindow {
    #[inline]
    fn weight(&self, a: i64, b: i64) -> f64 {
        self.at(a, b)
    }

    fn contains(&self, v: Vertex) -> bool {
        v.a >= self.origin.a
            && v.b >= self.origin.b
            && v.a < self.origin.a + self.width as i64
            && v.b < self.origin.b + self.height as i64
    }

    fn describe(&self) -> String {
        format!("{}..={}", self.origin, self.corner())
    }
}

/// I.i.d. Exp(1) weights on the window `origin + [0,width) x [0,height)`.
///
/// Values come from the counter-based field of `key`, so the weight at a
/// vertex does not depend on the window that contains it.
pub fn gen_weights(origin: Vertex, extent: (usize, usize), key: &StreamKey) -> Result<WeightWindow> {
    let field = key.field();
    WeightWindow::from_fn(origin, extent, |a, b| field.exp1(a, b))
}

/// Up-right lattice path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePath {
    vertices: Vec<Vertex>,
}

impl LatticePath {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::param("path", "a path needs at least one vertex"));
        }
        for w in vertices.windows(2) {
            let (da, db) = (w[1].a - w[0].a, w[1].b - w[0].b);
            if !matches!((da, db), (1, 0) | (0, 1)) {
                return Err(Error::Invariant(format!(
                    "illegal step {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { vertices })
    }

    pub(crate) fn from_trusted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(Self::new(vertices.clone()).is_ok());
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        self.vertices[self.vertices.len() - 1]
    }

    /// Vertex at the given anti-diagonal level, if the path crosses it.
    pub fn at_level(&self, d: i64) -> Option<Vertex> {
        let i = d - self.first().d();
        (i >= 0 && (i as usize) < self.len()).then(|| self.vertices[i as usize])
    }

    /// Sum of weights along the path.
    pub fn weight(&self, src: &impl WeightSource) -> f64 {
        self.vertices.iter().map(|v| src.weight(v.a, v.b)).sum()
    }

    pub fn truncated(&self, len: usize) -> LatticePath {
        LatticePath {
            vertices: self.vertices[..len.min(self.len())].to_vec(),
        }
    }
}

/// Number of corners: interior vertices where the step direction changes.
pub fn corner_count(path: &LatticePath) -> usize {
    path.vertices()
        .windows(3)
        .filter(|w| (w[1].a - w[0].a) != (w[2].a - w[1].a))
        .count()
}

/// Per-vertex corner indicator (endpoints are never corners).
pub fn corner_flags(path: &LatticePath) -> Vec<bool> {
    let v = path.vertices();
    (0..v.len())
        .map(|i| i > 0 && i + 1 < v.len() && (v[i].a - v[i - 1].a) != (v[i + 1].a - v[i].a))
        .collect()
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Direction-`rho` lattice coordinates.
///
/// Returns `(floor(2(1-rho)^2 a / Z) + b, ceil(2 rho^2 a / Z) - b)` with
/// `Z = rho^2 + (1-rho)^2`. Values within `1e-9` (relative) of an integer are
/// treated as that integer before rounding, so exact rational cases such as
/// `rho = 1/3` are not spoiled by floating-point error.
pub fn rho_coords(a: i64, b: i64, rho: f64) -> Result<Vertex> {
    check_rho(rho)?;
    let q = 1.0 - rho;
    let z = rho * rho + q * q;
    let x = snap(2.0 * q * q * a as f64 / z).floor() as i64;
    let y = snap(2.0 * rho * rho * a as f64 / z).ceil() as i64;
    Ok(Vertex::new(x + b, y - b))
}

/// Endpoint `n^rho` of the direction-`rho` geodesic of length `2n`.
pub fn n_rho(n: i64, rho: f64) -> Result<Vertex> {
    rho_coords(n, 0, rho)
}

/// Result of a point-to-point geodesic computation.
#[derive(Debug, Clone)]
pub struct Geodesic {
    pub path: LatticePath,
    pub passage_time: f64,
    /// Exact floating-point ties met while filling the DP table.
    pub ties: u64,
}

fn check_endpoints(src: &impl WeightSource, u: Vertex, v: Vertex) -> Result<()> {
    if !u.le(v) {
        return Err(Error::Domain { from: u, to: v });
    }
    for w in [u, v] {
        if !src.contains(w) {
            return Err(Error::Bounds {
                vertex: w,
                window: src.describe(),
            });
        }
    }
    let cells = (v.a - u.a + 1) as u128 * (v.b - u.b + 1) as u128;
    if cells > CELL_BUDGET {
        return Err(Error::Capacity {
            cells,
            budget: CELL_BUDGET,
        });
    }
    Ok(())
}

/// Maximal weight over up-right paths from `u` to `v`, both ends included.
pub fn passage_time(src: &impl WeightSource, u: Vertex, v: Vertex) -> Result<f64> {
    check_endpoints(src, u, v)?;
    let width = (v.a - u.a + 1) as usize;
    let mut row = vec![f64::NEG_INFINITY; width];
    for b in u.b..=v.b {
        let mut left = f64::NEG_INFINITY;
        for (i, cell) in row.iter_mut().enumerate() {
            let best = if b == u.b && i == 0 { 0.0 } else { left.max(*cell) };
            left = best + src.weight(u.a + i as i64, b);
            *cell = left;
        }
    }
    Ok(row[width - 1])
}

/// `passage_time(u, v) - weight(v)`.
pub fn passage_time_star(src: &impl WeightSource, u: Vertex, v: Vertex) -> Result<f64> {
    Ok(passage_time(src, u, v)? - src.weight(v.a, v.b))
}

/// The geodesic from `u` to `v`.
///
/// On an exact tie between the two predecessors the one below, `w - (0,1)`,
/// is taken. Ties have probability zero for continuous weights; they are
/// counted in [`Geodesic::ties`].
pub fn geodesic(src: &impl WeightSource, u: Vertex, v: Vertex) -> Result<Geodesic> {
    check_endpoints(src, u, v)?;
    let width = (v.a - u.a + 1) as usize;
    let height = (v.b - u.b + 1) as usize;
    // Bit set: the maximum came from the left neighbour.
    let mut from_left = vec![0u64; (width * height).div_ceil(64)];
    let mut row = vec![f64::NEG_INFINITY; width];
    let mut ties = 0u64;
    for j in 0..height {
        let b = u.b + j as i64;
        let mut left = f64::NEG_INFINITY;
        let base = j * width;
        for (i, cell) in row.iter_mut().enumerate() {
            let below = *cell;
            let best = if j == 0 && i == 0 {
                0.0
            } else if left > below {
                let k = base + i;
                from_left[k >> 6] |= 1 << (k & 63);
                left
            } else {
                if left == below && i > 0 && j > 0 {
                    ties += 1;
                }
                below
            };
            left = best + src.weight(u.a + i as i64, b);
            *cell = left;
        }
    }
    let passage_time = row[width - 1];

    let mut vertices = Vec::with_capacity(width + height - 1);
    let (mut i, mut j) = (width - 1, height - 1);
    loop {
        vertices.push(u.offset(i as i64, j as i64));
        if i == 0 && j == 0 {
            break;
        }
        let k = j * width + i;
        if from_left[k >> 6] >> (k & 63) & 1 == 1 {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    vertices.reverse();
    Ok(Geodesic {
        path: LatticePath::from_trusted(vertices),
        passage_time,
        ties,
    })
}
