//! Environments seen from the vertices of a path, and their empirical law.
//!
//! An [`EnvSample`] stores the weights and the path indicator on the box
//! `[-s, s]^2` around one path vertex. Cells are stored row-major with the
//! `b` offset as the slow index: offset `(da, db)` lives at
//! `(db + s) * (2s + 1) + (da + s)`.
//!
//! Binary dump layout (all integers and floats little-endian):
//!
//! ```text
//! magic   8 bytes  b"GEOENV01"
//! s       u32
//! count   u64
//! count records of:
//!     center.a  i64
//!     center.b  i64
//!     weights   (2s+1)^2 x f64
//!     mask      (2s+1)^2 x u8   (0 or 1)
//! ```

use std::io::{self, BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::lattice::{LatticePath, Vertex, WeightSource};

pub const BINARY_MAGIC: &[u8; 8] = b"GEOENV01";

#[derive(Debug, Clone, PartialEq)]
pub struct EnvSample {
    pub center: Vertex,
    pub radius: usize,
    pub weights: Vec<f64>,
    pub mask: Vec<bool>,
}

impl EnvSample {
    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    fn index(&self, da: i64, db: i64) -> Option<usize> {
        let s = self.radius as i64;
        ((-s..=s).contains(&da) && (-s..=s).contains(&db))
            .then(|| ((db + s) as usize) * self.side() + (da + s) as usize)
    }

    /// Weight at `center + (da, db)`.
    pub fn weight(&self, da: i64, db: i64) -> Option<f64> {
        self.index(da, db).map(|i| self.weights[i])
    }

    pub fn on_path(&self, da: i64, db: i64) -> Option<bool> {
        self.index(da, db).map(|i| self.mask[i])
    }

    pub fn center_weight(&self) -> f64 {
        self.weights[self.weights.len() / 2]
    }
}

/// Uniform measure on the environments seen from each vertex of a path.
#[derive(Debug, Clone, Default)]
pub struct EmpiricalEnvMeasure {
    pub samples: Vec<EnvSample>,
}

impl EmpiricalEnvMeasure {
    pub fn normalization(&self) -> usize {
        self.samples.len()
    }

    /// Average of a window functional over the samples.
    pub fn integrate(&self, f: impl Fn(&EnvSample) -> f64) -> f64 {
        self.samples.iter().map(f).sum::<f64>() / self.samples.len() as f64
    }
}

/// One sample per path vertex, each covering the `s`-box around the vertex.
///
/// Every box must lie inside `src`; there is no padding.
pub fn empirical_env(
    src: &impl WeightSource,
    path: &LatticePath,
    s: usize,
) -> Result<EmpiricalEnvMeasure> {
    let si = s as i64;
    for corner in [path.first().offset(-si, -si), path.last().offset(si, si)] {
        if !src.contains(corner) {
            return Err(Error::Bounds {
                vertex: corner,
                window: src.describe(),
            });
        }
    }
    // The path is monotone, so the south-west and north-east corners of the
    // first and last boxes bound every box; but a box can also stick out to
    // the north-west or south-east of the path's bounding rectangle.
    let (lo, hi) = (path.first(), path.last());
    for c in [Vertex::new(lo.a - si, hi.b + si), Vertex::new(hi.a + si, lo.b - si)] {
        if !src.contains(c) {
            return Err(Error::Bounds {
                vertex: c,
                window: src.describe(),
            });
        }
    }
    let vs = path.vertices();
    let side = 2 * s + 1;
    let samples = vs
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let mut weights = Vec::with_capacity(side * side);
            for db in -si..=si {
                for da in -si..=si {
                    weights.push(src.weight(w.a + da, w.b + db));
                }
            }
            let mut mask = vec![false; side * side];
            let lo = i.saturating_sub(2 * s);
            let hi = (i + 2 * s).min(vs.len() - 1);
            for u in &vs[lo..=hi] {
                let (da, db) = (u.a - w.a, u.b - w.b);
                if da.abs() <= si && db.abs() <= si {
                    mask[((db + si) as usize) * side + (da + si) as usize] = true;
                }
            }
            EnvSample {
                center: w,
                radius: s,
                weights,
                mask,
            }
        })
        .collect();
    Ok(EmpiricalEnvMeasure { samples })
}

/// CSV with header `a,b,w0..wM,m0..mM`, one row per sample.
pub fn write_env_csv(mut out: impl Write, samples: &[EnvSample]) -> Result<()> {
    let cells = samples.first().map_or(1, |s| s.side() * s.side());
    let mut header = String::from("a,b");
    for k in 0..cells {
        header.push_str(&format!(",w{k}"));
    }
    for k in 0..cells {
        header.push_str(&format!(",m{k}"));
    }
    writeln!(out, "{header}")?;
    for s in samples {
        write!(out, "{},{}", s.center.a, s.center.b)?;
        for w in &s.weights {
            write!(out, ",{w}")?;
        }
        for m in &s.mask {
            write!(out, ",{}", u8::from(*m))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn read_env_csv(input: impl BufRead) -> Result<Vec<EnvSample>> {
    let bad = |msg: &str| Error::Io(io::Error::new(io::ErrorKind::InvalidData, msg.to_string()));
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| bad("missing header"))??;
    let cols = header.split(',').count();
    if cols < 4 || (cols - 2) % 2 != 0 {
        return Err(bad("malformed header"));
    }
    let cells = (cols - 2) / 2;
    let side = (cells as f64).sqrt().round() as usize;
    if side * side != cells || side.is_multiple_of(2) {
        return Err(bad("window is not an odd square"));
    }
    let mut samples = Vec::new();
    for line in lines {
        let line = line?;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols {
            return Err(bad("row length differs from header"));
        }
        let num = |t: &str| t.parse::<f64>().map_err(|_| bad("bad number"));
        let int = |t: &str| t.parse::<i64>().map_err(|_| bad("bad integer"));
        let weights = fields[2..2 + cells].iter().map(|t| num(t)).collect::<Result<_>>()?;
        let mask = fields[2 + cells..]
            .iter()
            .map(|t| Ok(int(t)? != 0))
            .collect::<Result<_>>()?;
        samples.push(EnvSample {
            center: Vertex::new(int(fields[0])?, int(fields[1])?),
            radius: side / 2,
            weights,
            mask,
        });
    }
    Ok(samples)
}

pub fn write_env_binary(mut out: impl Write, radius: usize, samples: &[EnvSample]) -> Result<()> {
    out.write_all(BINARY_MAGIC)?;
    out.write_all(&(radius as u32).to_le_bytes())?;
    out.write_all(&(samples.len() as u64).to_le_bytes())?;
    for s in samples {
        if s.radius != radius {
            return Err(Error::param("radius", "all samples must share the radius"));
        }
        out.write_all(&s.center.a.to_le_bytes())?;
        out.write_all(&s.center.b.to_le_bytes())?;
        for w in &s.weights {
            out.write_all(&w.to_le_bytes())?;
        }
        let mask: Vec<u8> = s.mask.iter().map(|&m| u8::from(m)).collect();
        out.write_all(&mask)?;
    }
    Ok(())
}

pub fn read_env_binary(mut input: impl Read) -> Result<Vec<EnvSample>> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != BINARY_MAGIC {
        return Err(Error::Io(io::Error::new(
            io::ErrorKind::InvalidData,
            "bad magic",
        )));
    }
    let mut u32b = [0u8; 4];
    let mut u64b = [0u8; 8];
    input.read_exact(&mut u32b)?;
    let radius = u32::from_le_bytes(u32b) as usize;
    input.read_exact(&mut u64b)?;
    let count = u64::from_le_bytes(u64b);
    let cells = (2 * radius + 1) * (2 * radius + 1);
    let mut samples = Vec::new();
    for _ in 0..count {
        input.read_exact(&mut u64b)?;
        let a = i64::from_le_bytes(u64b);
        input.read_exact(&mut u64b)?;
        let b = i64::from_le_bytes(u64b);
        let mut weights = Vec::with_capacity(cells);
        for _ in 0..cells {
            input.read_exact(&mut u64b)?;
            weights.push(f64::from_le_bytes(u64b));
        }
        let mut mask = vec![0u8; cells];
        input.read_exact(&mut mask)?;
        samples.push(EnvSample {
            center: Vertex::new(a, b),
            radius,
            weights,
            mask: mask.into_iter().map(|m| m != 0).collect(),
        });
    }
    Ok(samples)
}
