//! Polar grids on the disc and complex functions sampled on them.
//!
//! Rings sit at Gauss–Legendre nodes of panels that shrink geometrically
//! toward `r = 1`; each ring carries an equispaced angular rule. The weight of
//! a sample is `w_r · r · 2/n_θ`, so that the weights add up to `R²`, the
//! normalized area of the covered disc.
//!
//! The text format is
//!
//! ```text
//! # polar-grid v1
//! # rings <count>
//! # ring <index> <radius> <radial weight> <angles>
//! radius,angle,re,im
//! <one row per sample, ring by ring>
//! ```

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::moments::log_tail_at;
use crate::quadrature::{gauss_legendre, RadialPoint};
use crate::weight::RadialWeight;

const ORDER: usize = 10;
const PANELS_PER_DECADE: usize = 2;
const FLOOR: f64 = 1e-12;
const MASS_CUTOFF: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ring {
    pub radius: f64,
    /// Weight of the radial rule, in `dr`.
    pub radial_weight: f64,
    pub n_theta: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarGrid {
    rings: Vec<Ring>,
}

/// One sample: its position and its share of the normalized area.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub ring: usize,
    pub point: Complex64,
    pub area: f64,
}

fn parse(msg: impl Into<String>) -> Error {
    Error::parse(msg)
}

fn angles_for(ring: usize) -> usize {
    (64 + 2 * ring).min(256)
}

impl PolarGrid {
    pub fn new(rings: Vec<Ring>) -> Result<Self> {
        if rings.is_empty() {
            return Err(Error::domain("a grid needs at least one ring"));
        }
        for w in rings.windows(2) {
            if !(w[1].radius > w[0].radius) {
                return Err(Error::domain("ring radii must be strictly increasing"));
            }
        }
        for r in &rings {
            if !(r.radius >= 0.0 && r.radius < 1.0) || !(r.radial_weight > 0.0) || r.n_theta == 0 {
                return Err(Error::domain(format!("invalid ring {r:?}")));
            }
        }
        Ok(PolarGrid { rings })
    }

    /// Radial panels `[0, ½]`, then `[u/√10, u]` for `u` from ½ down to `u_min`.
    pub fn with_floor(u_min: f64) -> Result<Self> {
        if !(u_min > 0.0 && u_min < 0.5) {
            return Err(Error::domain(format!("grid floor {u_min} outside (0, ½)")));
        }
        let (x, w) = gauss_legendre(ORDER);
        let step = 10f64.powf(-1.0 / PANELS_PER_DECADE as f64);
        let mut edges = vec![1.0, 0.5];
        while *edges.last().expect("nonempty") * step > u_min * (1.0 + 1e-12) {
            let next = edges.last().expect("nonempty") * step;
            edges.push(next);
        }
        edges.push(u_min);
        let mut rings = Vec::new();
        for pair in edges.windows(2) {
            let (hi, lo) = (pair[0], pair[1]);
            let mid = 0.5 * (hi + lo);
            let half = 0.5 * (hi - lo);
            for j in (0..ORDER).rev() {
                let u = mid - half * x[j];
                rings.push((1.0 - u, half * w[j]));
            }
        }
        rings.sort_by(|a, b| a.0.total_cmp(&b.0));
        let rings = rings
            .into_iter()
            .enumerate()
            .map(|(i, (radius, radial_weight))| Ring {
                radius,
                radial_weight,
                n_theta: angles_for(i),
            })
            .collect();
        PolarGrid::new(rings)
    }

    /// A grid that leaves out at most a `10⁻¹⁰` share of the mass of `w`
    /// near the boundary, or stops at `1 − r = 10⁻¹²`.
    pub fn for_weight(w: &RadialWeight, cfg: &Config) -> Result<Self> {
        let total = log_tail_at(w, RadialPoint::from_r(0.0), cfg)?.ln;
        let target = total + MASS_CUTOFF.ln();
        // Far out the tail of a fast-decaying weight is only known roughly, which
        // is plenty for placing the cutoff.
        let tail = |ln_u: f64| match log_tail_at(w, RadialPoint::from_ln_u(ln_u), cfg) {
            Ok(v) => Ok(v.ln),
            Err(Error::Accuracy { ln_estimate, .. }) => Ok(ln_estimate),
            Err(e) => Err(e),
        };
        let (mut lo, mut hi) = (FLOOR.ln(), 0.5f64.ln());
        if tail(lo)? > target {
            return PolarGrid::with_floor(FLOOR);
        }
        if tail(hi)? <= target {
            return PolarGrid::with_floor(0.25);
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if tail(mid)? > target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        PolarGrid::with_floor(lo.exp())
    }

    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }

    pub fn r_max(&self) -> f64 {
        self.rings[self.rings.len() - 1].radius
    }

    pub fn len(&self) -> usize {
        self.rings.iter().map(|r| r.n_theta).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.rings.iter().enumerate().flat_map(|(i, ring)| {
            let area = ring.radial_weight * ring.radius * 2.0 / ring.n_theta as f64;
            (0..ring.n_theta).map(move |j| Node {
                ring: i,
                point: Complex64::from_polar(ring.radius, 2.0 * PI * j as f64 / ring.n_theta as f64),
                area,
            })
        })
    }

    /// `Σ` of all sample weights.
    pub fn area(&self) -> f64 {
        self.rings.iter().map(|r| r.radial_weight * r.radius * 2.0).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolarGridFunction {
    grid: PolarGrid,
    values: Vec<Complex64>,
}

impl PolarGridFunction {
    pub fn new(grid: PolarGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain(format!(
                "{} values for a grid of {} samples",
                values.len(),
                grid.len()
            )));
        }
        Ok(PolarGridFunction { grid, values })
    }

    pub fn sample<F: Fn(Complex64) -> Complex64>(grid: &PolarGrid, f: F) -> Self {
        let values = grid.nodes().map(|n| f(n.point)).collect();
        PolarGridFunction {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &PolarGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `a·self + b·other` on the same grid.
    pub fn combine(&self, a: Complex64, other: &PolarGridFunction, b: Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::domain("functions live on different grids"));
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Ok(PolarGridFunction {
            grid: self.grid.clone(),
            values,
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0 && v.re >= 0.0)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let rings = self.grid.rings();
        let _ = writeln!(s, "# polar-grid v1");
        let _ = writeln!(s, "# rings {}", rings.len());
        for (i, r) in rings.iter().enumerate() {
            let _ = writeln!(s, "# ring {i} {:?} {:?} {}", r.radius, r.radial_weight, r.n_theta);
        }
        let _ = writeln!(s, "radius,angle,re,im");
        for (node, v) in self.grid.nodes().zip(&self.values) {
            let ring = rings[node.ring];
            let _ = writeln!(s, "{:?},{:?},{:?},{:?}", ring.radius, node.point.arg().rem_euclid(2.0 * PI), v.re, v.im);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        if lines.next() != Some("# polar-grid v1") {
            return Err(parse("missing '# polar-grid v1' header"));
        }
        let count: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("# rings "))
            .ok_or_else(|| parse("missing '# rings' line"))?
            .parse()
            .map_err(|_| parse("ring count is not an integer"))?;
        let mut rings = Vec::with_capacity(count);
        for i in 0..count {
            let line = lines.next().ok_or_else(|| parse("truncated ring table"))?;
            let fields: Vec<&str> = line
                .strip_prefix("# ring ")
                .ok_or_else(|| parse(format!("expected ring {i}, got '{line}'")))?
                .split_whitespace()
                .collect();
            if fields.len() != 4 || fields[0] != i.to_string() {
                return Err(parse(format!("malformed ring line '{line}'")));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| parse(format!("bad number '{s}'")));
            rings.push(Ring {
                radius: num(fields[1])?,
                radial_weight: num(fields[2])?,
                n_theta: fields[3].parse().map_err(|_| parse(format!("bad angle count '{}'", fields[3])))?,
            });
        }
        if lines.next() != Some("radius,angle,re,im") {
            return Err(parse("missing column header 'radius,angle,re,im'"));
        }
        let grid = PolarGrid::new(rings)?;
        let mut values = Vec::with_capacity(grid.len());
        for line in lines {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(parse(format!("expected 4 columns, got '{line}'")));
            }
            let re = f[2].parse::<f64>().map_err(|_| parse(format!("bad number '{}'", f[2])))?;
            let im = f[3].parse::<f64>().map_err(|_| parse(format!("bad number '{}'", f[3])))?;
            values.push(Complex64::new(re, im));
        }
        PolarGridFunction::new(grid, values)
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(mut input: R) -> Result<Self> {
        let mut s = String::new();
        input.read_to_string(&mut s)?;
        PolarGridFunction::from_text(&s)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        PolarGridFunction::from_text(&std::fs::read_to_string(path)?)
    }
}
