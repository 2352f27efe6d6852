//! Busemann fields of exponential LPP and semi-infinite geodesics.
//!
//! [`sample_busemann_box`] lays independent exponential increments along the
//! top and right edges of a box (horizontal Exp(1-rho), vertical Exp(rho)) and
//! fills the interior south-west with
//! `G(a,b) = min(G(a+1,b), G(a,b+1)) - xi(a,b)`.
//!
//! [`SemiInfinite`] is a streaming alternative for long geodesics: the same
//! law is produced on a quadrant from increments laid on its south and west
//! edges, filled north-east with `G(a,b) = max(G(a-1,b), G(a,b-1)) + xi_down(a,b)`.
//! Rows are generated one at a time and only a band of them is kept, so the
//! geodesic from the origin and its environments are read off on the fly.

use serde::Serialize;

use crate::env::EnvSample;
use crate::error::{check_rho, Error, Result};
use crate::lattice::{LatticePath, Vertex, WeightWindow, CELL_BUDGET, WINDOW_BUDGET};
use crate::rng::{exp1, StreamKey};

#[derive(Debug, Clone)]
pub struct BusemannField {
    origin: Vertex,
    width: usize,
    height: usize,
    rho: f64,
    g: Vec<f64>,
}

impl BusemannField {
    pub fn origin(&self) -> Vertex {
        self.origin
    }

    pub fn extent(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.a >= self.origin.a
            && v.b >= self.origin.b
            && v.a < self.origin.a + self.width as i64
            && v.b < self.origin.b + self.height as i64
    }

    pub fn g(&self, v: Vertex) -> Option<f64> {
        self.contains(v).then(|| self.at(v.a, v.b))
    }

    /// `B(u, v) = G(v) - G(u)`.
    pub fn increment(&self, u: Vertex, v: Vertex) -> Option<f64> {
        Some(self.g(v)? - self.g(u)?)
    }

    #[inline]
    fn at(&self, a: i64, b: i64) -> f64 {
        let i = (a - self.origin.a) as usize;
        let j = (b - self.origin.b) as usize;
        self.g[j * self.width + i]
    }

    fn describe(&self) -> String {
        let ne = self
            .origin
            .offset(self.width as i64 - 1, self.height as i64 - 1);
        format!("{}..={}", self.origin, ne)
    }
}

/// Busemann field on the `n x n` box with south-west corner at the origin.
pub fn sample_busemann_box(n: usize, rho: f64, key: &StreamKey) -> Result<BusemannField> {
    sample_busemann_rect(Vertex::ORIGIN, (n, n), rho, key)
}

pub fn sample_busemann_rect(
    origin: Vertex,
    (width, height): (usize, usize),
    rho: f64,
    key: &StreamKey,
) -> Result<BusemannField> {
    check_rho(rho)?;
    if width < 2 || height < 2 {
        return Err(Error::param("n", "box must be at least 2x2"));
    }
    let cells = width as u128 * height as u128;
    if cells > WINDOW_BUDGET {
        return Err(Error::Capacity {
            cells,
            budget: WINDOW_BUDGET,
        });
    }
    let mut boundary = key.child("boundary").rng();
    let xi = key.child("xi").field();
    let mut g = vec![0.0; width * height];
    let top = height - 1;
    for i in (0..width - 1).rev() {
        g[top * width + i] = g[top * width + i + 1] - exp1(&mut boundary) / (1.0 - rho);
    }
    for j in (0..top).rev() {
        g[j * width + width - 1] = g[(j + 1) * width + width - 1] - exp1(&mut boundary) / rho;
    }
    for j in (0..top).rev() {
        for i in (0..width - 1).rev() {
            let right = g[j * width + i + 1];
            let up = g[(j + 1) * width + i];
            g[j * width + i] = right.min(up) - xi.exp1(origin.a + i as i64, origin.b + j as i64);
        }
    }
    let base = g[0];
    for v in &mut g {
        *v -= base;
    }
    Ok(BusemannField {
        origin,
        width,
        height,
        rho,
        g,
    })
}

/// `xi(a,b) = min(G(a+1,b), G(a,b+1)) - G(a,b)` on the box minus its top row
/// and right column.
pub fn recover_xi_forward(f: &BusemannField) -> Result<WeightWindow> {
    WeightWindow::from_fn(f.origin, (f.width - 1, f.height - 1), |a, b| {
        f.at(a + 1, b).min(f.at(a, b + 1)) - f.at(a, b)
    })
}

/// `xi_down(a,b) = G(a,b) - max(G(a-1,b), G(a,b-1))` on the box minus its
/// bottom row and left column.
pub fn recovered_weights_down(f: &BusemannField) -> Result<WeightWindow> {
    WeightWindow::from_fn(f.origin.offset(1, 1), (f.width - 1, f.height - 1), |a, b| {
        f.at(a, b) - f.at(a - 1, b).max(f.at(a, b - 1))
    })
}

/// Follows the smaller of the two forward neighbours for `max_steps` steps;
/// ties go to `(1,0)`.
pub fn semi_infinite_geodesic(f: &BusemannField, start: Vertex, max_steps: usize) -> Result<LatticePath> {
    if !f.contains(start) {
        return Err(Error::Bounds {
            vertex: start,
            window: f.describe(),
        });
    }
    let mut v = start;
    let mut vertices = Vec::with_capacity(max_steps + 1);
    vertices.push(v);
    for step in 0..max_steps {
        let (right, up) = (v.offset(1, 0), v.offset(0, 1));
        match (f.g(right), f.g(up)) {
            (Some(gr), Some(gu)) => v = if gr <= gu { right } else { up },
            _ => {
                return Err(Error::truncation(
                    format!("geodesic from {start} left the box {} after {step} steps", f.describe()),
                    "enlarge the box",
                ))
            }
        }
        vertices.push(v);
    }
    Ok(LatticePath::from_trusted(vertices))
}

/// Last vertex of `path` with `G <= t`; the first vertex if `t` is below it.
pub fn p_process(g: impl Fn(Vertex) -> f64, path: &LatticePath, t: f64) -> Vertex {
    let vs = path.vertices();
    let k = vs.partition_point(|&v| g(v) <= t);
    vs[k.saturating_sub(1)]
}

/// Box extent for a run of `steps` geodesic steps in direction `rho`.
pub fn box_extent(rho: f64, steps: usize, margin_factor: f64) -> (usize, usize) {
    let z = rho * rho + (1.0 - rho) * (1.0 - rho);
    let s = steps as f64;
    let margin = margin_factor * s.powf(2.0 / 3.0);
    (
        (s * (1.0 - rho) * (1.0 - rho) / z + margin).ceil() as usize + 2,
        (s * rho * rho / z + margin).ceil() as usize + 2,
    )
}

/// Output of a streaming semi-infinite run.
#[derive(Debug, Clone, Serialize)]
pub struct SemiInfiniteSample {
    pub path: Vec<Vertex>,
    /// Forward weight at each path vertex.
    pub center_weights: Vec<f64>,
    /// `G` at each path vertex, with `G(0,0) = 0`.
    pub g_values: Vec<f64>,
    #[serde(skip)]
    pub envs: Vec<EnvSample>,
    pub columns: usize,
    pub rows: usize,
}

/// Streaming generator of the Busemann field on `[-m, a_max]  x [-m, inf)`
/// with `m = s + 1`, used to read the geodesic from the origin.
#[derive(Debug, Clone)]
pub struct SemiInfinite {
    pub rho: f64,
    /// Number of path vertices is `2r + 1`.
    pub r: usize,
    /// Environment radius; 0 keeps only the centre weights.
    pub s: usize,
    pub collect_envs: bool,
    pub margin_factor: f64,
}

struct Band {
    width: usize,
    lo: i64,
    rows: Vec<Vec<f64>>,
    top: i64,
}

impl Band {
    fn slot(&self, b: i64) -> usize {
        (b - self.lo).rem_euclid(self.rows.len() as i64) as usize
    }

    #[inline]
    fn g(&self, a: i64, b: i64) -> f64 {
        debug_assert!(b <= self.top && b > self.top - self.rows.len() as i64);
        self.rows[self.slot(b)][(a - self.lo) as usize]
    }

    #[inline]
    fn xi(&self, a: i64, b: i64) -> f64 {
        self.g(a + 1, b).min(self.g(a, b + 1)) - self.g(a, b)
    }
}

impl SemiInfinite {
    pub fn new(rho: f64, r: usize) -> Self {
        Self {
            rho,
            r,
            s: 0,
            collect_envs: false,
            margin_factor: 3.0,
        }
    }

    pub fn with_envs(mut self, s: usize) -> Self {
        self.s = s;
        self.collect_envs = true;
        self
    }

    /// Runs with a growing column budget until the path fits.
    pub fn run(&self, key: &StreamKey) -> Result<SemiInfiniteSample> {
        check_rho(self.rho)?;
        if self.r == 0 {
            return Err(Error::param("r", "must be positive"));
        }
        let (mut columns, _) = box_extent(self.rho, 2 * self.r, self.margin_factor);
        columns += self.s + 2;
        loop {
            match self.run_with_columns(key, columns) {
                Err(Error::Truncation { .. }) if columns < (1 << 26) => columns *= 2,
                other => return other,
            }
        }
    }

    /// One attempt with a fixed number of columns right of the origin.
    pub fn run_with_columns(&self, key: &StreamKey, columns: usize) -> Result<SemiInfiniteSample> {
        check_rho(self.rho)?;
        let rho = self.rho;
        let s = self.s as i64;
        let m = s + 1;
        let width = columns + m as usize + 1;
        let n_vertices = 2 * self.r + 1;
        let horizontal = key.child("horizontal").field();
        let vertical = key.child("vertical").field();
        let down = key.child("down").field();

        let mut band = Band {
            width,
            lo: -m,
            rows: vec![vec![0.0; width]; 2 * self.s + 3],
            top: -m,
        };
        // Bottom row.
        {
            let row = &mut band.rows[0];
            for i in 1..width {
                let a = -m + i as i64;
                row[i] = row[i - 1] + horizontal.exp1(a, 0) / (1.0 - rho);
            }
        }
        let right_edge = -m + width as i64 - 1;
        let mut cells: u128 = width as u128;

        let mut path = vec![Vertex::ORIGIN];
        let mut center_weights = Vec::with_capacity(n_vertices);
        let mut g_values = Vec::with_capacity(n_vertices);
        let mut envs = Vec::new();
        let mut emitted = 0usize;
        let mut g_origin = None;

        loop {
            // Next row.
            let b = band.top + 1;
            let prev = band.slot(band.top);
            let cur = band.slot(b);
            {
                let (prev_row, cur_row) = if prev < cur {
                    let (x, y) = band.rows.split_at_mut(cur);
                    (&x[prev], &mut y[0])
                } else {
                    let (x, y) = band.rows.split_at_mut(prev);
                    (&y[0], &mut x[cur])
                };
                cur_row[0] = prev_row[0] + vertical.exp1(0, b) / rho;
                let mut left = cur_row[0];
                for i in 1..width {
                    let v = left.max(prev_row[i]) + down.exp1(-m + i as i64, b);
                    cur_row[i] = v;
                    left = v;
                }
            }
            band.top = b;
            cells += width as u128;
            if cells > CELL_BUDGET {
                return Err(Error::Capacity {
                    cells,
                    budget: CELL_BUDGET,
                });
            }
            if b == 0 {
                g_origin = Some(band.g(0, 0));
            }

            // Trace the geodesic along row b - 1 until it steps up to row b.
            if b >= 1 && path.len() < n_vertices {
                loop {
                    let v = *path.last().unwrap();
                    if v.b != b - 1 || path.len() >= n_vertices {
                        break;
                    }
                    if v.a + s + 1 >= right_edge {
                        return Err(Error::truncation(
                            format!("geodesic reached column {} of {right_edge}", v.a),
                            "the run is retried with more columns",
                        ));
                    }
                    let next = if band.g(v.a + 1, v.b) <= band.g(v.a, v.b + 1) {
                        v.offset(1, 0)
                    } else {
                        v.offset(0, 1)
                    };
                    path.push(next);
                }
            }

            // Emit vertices whose environment rows are complete.
            let ready_row = b - s - 1;
            while emitted < path.len() && path[emitted].b <= ready_row {
                let v = path[emitted];
                // The path through rows up to v.b + s must be known for the mask.
                if path.len() < n_vertices && path.last().unwrap().b <= v.b + s {
                    break;
                }
                center_weights.push(band.xi(v.a, v.b));
                g_values.push(band.g(v.a, v.b) - g_origin.unwrap());
                if self.collect_envs {
                    envs.push(self.env_at(&band, &path, emitted));
                }
                emitted += 1;
            }
            if emitted == n_vertices {
                return Ok(SemiInfiniteSample {
                    path,
                    center_weights,
                    g_values,
                    envs,
                    columns,
                    rows: (b + m + 1) as usize,
                });
            }
        }
    }

    fn env_at(&self, band: &Band, path: &[Vertex], i: usize) -> EnvSample {
        let s = self.s as i64;
        let side = 2 * self.s + 1;
        let w = path[i];
        let mut weights = Vec::with_capacity(side * side);
        for db in -s..=s {
            for da in -s..=s {
                weights.push(band.xi(w.a + da, w.b + db));
            }
        }
        let mut mask = vec![false; side * side];
        let lo = i.saturating_sub(2 * self.s);
        let hi = (i + 2 * self.s).min(path.len() - 1);
        for u in &path[lo..=hi] {
            let (da, db) = (u.a - w.a, u.b - w.b);
            if da.abs() <= s && db.abs() <= s {
                mask[((db + s) as usize) * side + (da + s) as usize] = true;
            }
        }
        let _ = band.width;
        EnvSample {
            center: w,
            radius: self.s,
            weights,
            mask,
        }
    }
}
