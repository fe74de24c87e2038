//! Point sets in the complex plane, separation geometry, deterministic
//! sampling and point-file I/O.
//!
//! The inner set `X` lives in the punctured disk `0 < |x| < γ₁` and the outer
//! set `Y` in the annulus `γ₂ < |y| < γ₃`. Everything downstream assumes this
//! normalized picture, so callers with a cluster elsewhere translate it to
//! the origin first (the kernel is translation invariant).

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result, Side};

pub type ComplexPoint = Complex64;

/// Disk samples closer than this fraction of `γ₁` to the origin are rejected.
pub const ORIGIN_EXCLUSION: f64 = 1e-3;

/// Ordered list of points. Row and column indices of every matrix built from
/// a set follow this order.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<ComplexPoint>,
    label: String,
}

impl PointSet {
    pub fn new(points: Vec<ComplexPoint>, label: impl Into<String>) -> Result<Self> {
        if let Some(i) = points.iter().position(|p| !(p.re.is_finite() && p.im.is_finite())) {
            return Err(invalid(format!("non-finite point at index {i}")));
        }
        Ok(Self {
            points,
            label: label.into(),
        })
    }

    pub fn points(&self) -> &[ComplexPoint] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, i: usize) -> ComplexPoint {
        self.points[i]
    }

    pub fn ensure_nonempty(&self) -> Result<()> {
        if self.points.is_empty() {
            Err(Error::EmptySet(self.label.clone()))
        } else {
            Ok(())
        }
    }

    /// The sub-list at `idx`, in that order.
    pub fn subset(&self, idx: &[usize], label: impl Into<String>) -> PointSet {
        PointSet {
            points: idx.iter().map(|&i| self.points[i]).collect(),
            label: label.into(),
        }
    }

    pub fn translated(&self, t: ComplexPoint) -> PointSet {
        PointSet {
            points: self.points.iter().map(|p| p + t).collect(),
            label: self.label.clone(),
        }
    }

    pub fn scaled(&self, s: ComplexPoint) -> PointSet {
        PointSet {
            points: self.points.iter().map(|p| p * s).collect(),
            label: self.label.clone(),
        }
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Separation radii `γ₁ < γ₂ < γ₃` together with the kernel order `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub d: u32,
}

impl GeometryConfig {
    pub fn new(gamma1: f64, gamma2: f64, gamma3: f64, d: u32) -> Result<Self> {
        if !(gamma1 > 0.0 && gamma1 < gamma2 && gamma2 < gamma3 && gamma3.is_finite()) {
            return Err(invalid(format!(
                "radii must satisfy 0 < gamma1 < gamma2 < gamma3, got ({gamma1}, {gamma2}, {gamma3})"
            )));
        }
        if d == 0 {
            return Err(invalid("kernel order d must be at least 1"));
        }
        Ok(Self {
            gamma1,
            gamma2,
            gamma3,
            d,
        })
    }

    pub fn with_order(self, d: u32) -> Result<Self> {
        Self::new(self.gamma1, self.gamma2, self.gamma3, d)
    }

    /// Whether `gamma` lies strictly between the two sets.
    pub fn separates(&self, gamma: f64) -> bool {
        self.gamma1 < gamma && gamma < self.gamma2
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` points uniform by area in the punctured disk `0 < |p| < γ₁`.
pub fn sample_disk(count: usize, gamma1: f64, seed: u64) -> Result<PointSet> {
    if count == 0 {
        return Err(invalid("sample count must be positive"));
    }
    if !(gamma1 > 0.0 && gamma1.is_finite()) {
        return Err(invalid(format!("disk radius must be positive, got {gamma1}")));
    }
    let mut rng = rng(seed);
    let r_min = ORIGIN_EXCLUSION * gamma1;
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let r = gamma1 * rng.gen::<f64>().sqrt();
        let theta = 2.0 * PI * rng.gen::<f64>();
        if r >= r_min && r < gamma1 {
            points.push(Complex64::from_polar(r, theta));
        }
    }
    PointSet::new(points, "disk")
}

/// `count` points uniform by area in the open annulus `γ₂ < |p| < γ₃`.
pub fn sample_annulus(count: usize, gamma2: f64, gamma3: f64, seed: u64) -> Result<PointSet> {
    if count == 0 {
        return Err(invalid("sample count must be positive"));
    }
    if !(gamma2 > 0.0 && gamma2 < gamma3 && gamma3.is_finite()) {
        return Err(invalid(format!(
            "annulus radii must satisfy 0 < gamma2 < gamma3, got ({gamma2}, {gamma3})"
        )));
    }
    let mut rng = rng(seed);
    let (a2, b2) = (gamma2 * gamma2, gamma3 * gamma3);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let r = (a2 + rng.gen::<f64>() * (b2 - a2)).sqrt();
        let theta = 2.0 * PI * rng.gen::<f64>();
        let p = Complex64::from_polar(r, theta);
        let rho = p.norm();
        if rho > gamma2 && rho < gamma3 {
            points.push(p);
        }
    }
    PointSet::new(points, "annulus")
}

/// Points uniformly spread on the circle `|p| = radius`.
pub(crate) fn sample_circle(count: usize, radius: f64, rng: &mut ChaCha8Rng) -> Vec<ComplexPoint> {
    (0..count)
        .map(|_| Complex64::from_polar(radius, 2.0 * PI * rng.gen::<f64>()))
        .collect()
}

pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    rng(seed)
}

/// Vertices of a structured triangular grid on `[0,w] x [0,h]` plus the
/// centroids of its triangles, shifted by `center`.
///
/// Each of the `(nx-1)(ny-1)` cells is split along its rising diagonal, so
/// the set has `nx*ny + 2(nx-1)(ny-1)` points.
pub fn mesh_points(nx: usize, ny: usize, rect: (f64, f64), center: ComplexPoint) -> Result<PointSet> {
    let (w, h) = rect;
    if nx < 2 || ny < 2 {
        return Err(invalid(format!("mesh needs nx, ny >= 2, got ({nx}, {ny})")));
    }
    if !(w > 0.0 && h > 0.0 && w.is_finite() && h.is_finite()) {
        return Err(invalid(format!("degenerate rectangle {w} x {h}")));
    }
    let dx = w / (nx - 1) as f64;
    let dy = h / (ny - 1) as f64;
    let mut points = Vec::with_capacity(nx * ny + 2 * (nx - 1) * (ny - 1));
    for j in 0..ny {
        for i in 0..nx {
            points.push(Complex64::new(i as f64 * dx, j as f64 * dy) + center);
        }
    }
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let (x0, y0) = (i as f64 * dx, j as f64 * dy);
            points.push(Complex64::new(x0 + 2.0 * dx / 3.0, y0 + dy / 3.0) + center);
            points.push(Complex64::new(x0 + dx / 3.0, y0 + 2.0 * dy / 3.0) + center);
        }
    }
    PointSet::new(points, "mesh")
}

/// Translates `points` so `center` sits at the origin and keeps the points
/// inside the punctured disk (`X`) and the annulus (`Y`) of `cfg`.
pub fn split_separated(points: &PointSet, center: ComplexPoint, cfg: &GeometryConfig) -> (PointSet, PointSet) {
    let r_min = ORIGIN_EXCLUSION * cfg.gamma1;
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    for p in points.points() {
        let q = p - center;
        let r = q.norm();
        if r >= r_min && r < cfg.gamma1 {
            inner.push(q);
        } else if r > cfg.gamma2 && r < cfg.gamma3 {
            outer.push(q);
        }
    }
    (
        PointSet { points: inner, label: "X".into() },
        PointSet { points: outer, label: "Y".into() },
    )
}

/// A mesh instance shaped like the finite-element test problem: a triangular
/// grid over `[0,2] x [0,1]`, an inner cluster of radius `γ₁ = 0.3` and the
/// remaining points beyond `γ₂ = 0.45`.
///
/// The grid density gives roughly 800 inner and 4000 outer points.
pub fn rectangle_mesh_instance(d: u32) -> Result<(PointSet, PointSet, GeometryConfig)> {
    const NX: usize = 61;
    const NY: usize = 31;
    let mesh = mesh_points(NX, NY, (2.0, 1.0), Complex64::new(0.0, 0.0))?;
    // Offset from the lattice so no vertex or centroid lands on the origin.
    let center = Complex64::new(1.0 + 0.0037, 0.5 + 0.0021);
    let far = mesh
        .points()
        .iter()
        .map(|p| (p - center).norm())
        .fold(0.0, f64::max);
    let cfg = GeometryConfig::new(0.3, 0.45, far * (1.0 + 1e-9) + 1e-12, d)?;
    let (x, y) = split_separated(&mesh, center, &cfg);
    Ok((x, y, cfg))
}

/// Reads a point file: one `re,im` pair per line, `#` comments and blank
/// lines ignored.
pub fn load_points(path: impl AsRef<Path>) -> Result<PointSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let points = parse_points(&text)?;
    if points.is_empty() {
        return Err(Error::EmptySet(path.display().to_string()));
    }
    PointSet::new(points, path.display().to_string())
}

pub fn parse_points(text: &str) -> Result<Vec<ComplexPoint>> {
    let mut points = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: n + 1, message };
        let (re, im) = line
            .split_once(',')
            .ok_or_else(|| parse_err(format!("expected 're,im', got '{line}'")))?;
        let re: f64 = re
            .trim()
            .parse()
            .map_err(|e| parse_err(format!("real part '{}': {e}", re.trim())))?;
        let im: f64 = im
            .trim()
            .parse()
            .map_err(|e| parse_err(format!("imaginary part '{}': {e}", im.trim())))?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(parse_err("non-finite coordinate".into()));
        }
        points.push(Complex64::new(re, im));
    }
    Ok(points)
}

/// Shortest round-trip decimal text, so `load_points` restores the set exactly.
pub fn format_points(set: &PointSet) -> String {
    let mut out = String::new();
    for p in set.points() {
        let _ = writeln!(out, "{},{}", p.re, p.im);
    }
    out
}

pub fn save_points(path: impl AsRef<Path>, set: &PointSet) -> Result<()> {
    fs::write(path, format_points(set))?;
    Ok(())
}

/// Checks `0 < |x| < γ₁` for every `x ∈ X` and `γ₂ < |y| < γ₃` for every `y ∈ Y`.
pub fn validate_separation(x: &PointSet, y: &PointSet, cfg: &GeometryConfig) -> Result<()> {
    for (index, p) in x.points().iter().enumerate() {
        let r = p.norm();
        let violation = if r == 0.0 {
            Some("|x| = 0".to_string())
        } else if r >= cfg.gamma1 {
            Some(format!("|x| = {r} >= gamma1 = {}", cfg.gamma1))
        } else {
            None
        };
        if let Some(violation) = violation {
            return Err(Error::Separation { side: Side::Inner, index, violation });
        }
    }
    for (index, p) in y.points().iter().enumerate() {
        let r = p.norm();
        let violation = if r <= cfg.gamma2 {
            Some(format!("|y| = {r} <= gamma2 = {}", cfg.gamma2))
        } else if r >= cfg.gamma3 {
            Some(format!("|y| = {r} >= gamma3 = {}", cfg.gamma3))
        } else {
            None
        };
        if let Some(violation) = violation {
            return Err(Error::Separation { side: Side::Outer, index, violation });
        }
    }
    Ok(())
}
