//! Bivariate Laurent polynomials with complex coefficients and their Newton
//! polygons.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Laurent polynomial in two variables, stored sparsely by exponent pair.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i32, i32), Complex64>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ((i32, i32), Complex64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: (i32, i32), coeff: Complex64) {
        let entry = self.terms.entry(exp).or_insert(Complex64::ZERO);
        *entry += coeff;
        if entry.norm() == 0.0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: (i32, i32)) -> Complex64 {
        self.terms.get(&exp).copied().unwrap_or(Complex64::ZERO)
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), Complex64)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn support(&self) -> Vec<(i32, i32)> {
        self.terms.keys().copied().collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drop coefficients below `rel_tol` times the largest magnitude.
    pub fn pruned(&self, rel_tol: f64) -> Self {
        let cutoff = self.max_abs() * rel_tol;
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() > cutoff)
                .map(|(e, c)| (*e, *c))
                .collect(),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        LaurentPoly2 {
            terms: self.terms.iter().map(|(e, c)| (*e, *c * factor)).collect(),
        }
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for ((a, b), c) in self.terms.iter() {
            acc += c * z.powi(*a) * w.powi(*b);
        }
        acc
    }

    /// Exponent range in the second variable.
    pub fn w_range(&self) -> Option<(i32, i32)> {
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for (_, b) in self.terms.keys() {
            lo = lo.min(*b);
            hi = hi.max(*b);
        }
        if lo <= hi {
            Some((lo, hi))
        } else {
            None
        }
    }

    pub fn z_range(&self) -> Option<(i32, i32)> {
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for (a, _) in self.terms.keys() {
            lo = lo.min(*a);
            hi = hi.max(*a);
        }
        if lo <= hi {
            Some((lo, hi))
        } else {
            None
        }
    }

    /// Coefficients of `w^t`, `t = lo..=hi`, with the first variable fixed at
    /// `z`. Returns `(lo, coefficients)`.
    pub fn w_profile(&self, z: Complex64) -> Option<(i32, Vec<Complex64>)> {
        let (lo, hi) = self.w_range()?;
        let mut out = vec![Complex64::ZERO; (hi - lo + 1) as usize];
        for ((a, b), c) in self.terms.iter() {
            out[(b - lo) as usize] += c * z.powi(*a);
        }
        Some((lo, out))
    }

    /// Coefficients of `z^t` with the second variable fixed at `w`.
    pub fn z_profile(&self, w: Complex64) -> Option<(i32, Vec<Complex64>)> {
        let (lo, hi) = self.z_range()?;
        let mut out = vec![Complex64::ZERO; (hi - lo + 1) as usize];
        for ((a, b), c) in self.terms.iter() {
            out[(a - lo) as usize] += c * w.powi(*b);
        }
        Some((lo, out))
    }

    /// Scalar `c` with `other = c * self`, together with the largest relative
    /// deviation of per-coefficient ratios from `c`. Requires equal supports.
    pub fn scalar_ratio(&self, other: &LaurentPoly2) -> Result<(Complex64, f64)> {
        if self.support() != other.support() {
            return Err(Error::SupportMismatch);
        }
        if self.is_zero() {
            return Err(Error::EmptySupport);
        }
        // Anchor the ratio at the largest coefficient.
        let (&anchor, _) = self
            .terms
            .iter()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap();
        let c = other.coefficient(anchor) / self.coefficient(anchor);
        let mut dev: f64 = 0.0;
        for (e, a) in self.terms() {
            let r = other.coefficient(e) / a;
            dev = dev.max((r - c).norm() / c.norm());
        }
        Ok((c, dev))
    }

    /// Plain-text dump: one `j k re im` line per term, ordered by `(j, k)`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for ((a, b), c) in self.terms.iter() {
            out.push_str(&format!("{} {} {} {}\n", a, b, c.re, c.im));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = LaurentPoly2::zero();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::Parse(format!(
                    "polynomial dump line {} has {} fields, want 4",
                    lineno + 1,
                    fields.len()
                )));
            }
            let a: i32 = fields[0]
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            let b: i32 = fields[1]
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            let re: f64 = fields[2]
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            let im: f64 = fields[3]
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            p.add_term((a, b), Complex64::new(re, im));
        }
        Ok(p)
    }

    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        NewtonPolygon::of_support(&self.support())
    }
}

/// Convex hull of a polynomial's exponent support, with integer vertices in
/// counterclockwise order (degenerate hulls keep 1 or 2 vertices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(i64, i64)>,
}

impl NewtonPolygon {
    pub fn of_support(points: &[(i32, i32)]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut pts: Vec<(i64, i64)> = points.iter().map(|(a, b)| (*a as i64, *b as i64)).collect();
        pts.sort();
        pts.dedup();
        if pts.len() <= 2 {
            return Ok(NewtonPolygon { vertices: pts });
        }
        // Andrew monotone chain; strict turns only, so collinear interior
        // points are dropped.
        let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| -> i64 {
            (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
        };
        let mut lower: Vec<(i64, i64)> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<(i64, i64)> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() <= 1 {
            // All points collinear; keep the two extremes.
            let vertices = vec![*pts.first().unwrap(), *pts.last().unwrap()];
            return Ok(NewtonPolygon { vertices });
        }
        Ok(NewtonPolygon { vertices: lower })
    }

    /// Counterclockwise vertex list.
    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    /// Vertices as a sorted set, for exact equality checks.
    pub fn vertex_set(&self) -> Vec<(i64, i64)> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }

    pub fn contains_interior(&self, p: (f64, f64)) -> bool {
        if self.vertices.len() < 3 {
            return false;
        }
        let n = self.vertices.len();
        for k in 0..n {
            let a = self.vertices[k];
            let b = self.vertices[(k + 1) % n];
            let cross = (b.0 - a.0) as f64 * (p.1 - a.1 as f64)
                - (b.1 - a.1) as f64 * (p.0 - a.0 as f64);
            if cross <= 0.0 {
                return false;
            }
        }
        true
    }

    pub fn contains_closed(&self, p: (f64, f64), tol: f64) -> bool {
        match self.vertices.len() {
            1 => {
                (p.0 - self.vertices[0].0 as f64).abs() <= tol
                    && (p.1 - self.vertices[0].1 as f64).abs() <= tol
            }
            2 => {
                let a = self.vertices[0];
                let b = self.vertices[1];
                let cross = (b.0 - a.0) as f64 * (p.1 - a.1 as f64)
                    - (b.1 - a.1) as f64 * (p.0 - a.0 as f64);
                let within = cross.abs() <= tol * (((b.0 - a.0).pow(2) + (b.1 - a.1).pow(2)) as f64).sqrt();
                let dot = (p.0 - a.0 as f64) * (b.0 - a.0) as f64
                    + (p.1 - a.1 as f64) * (b.1 - a.1) as f64;
                let len2 = ((b.0 - a.0).pow(2) + (b.1 - a.1).pow(2)) as f64;
                within && dot >= -tol && dot <= len2 + tol
            }
            _ => {
                let n = self.vertices.len();
                for k in 0..n {
                    let a = self.vertices[k];
                    let b = self.vertices[(k + 1) % n];
                    let cross = (b.0 - a.0) as f64 * (p.1 - a.1 as f64)
                        - (b.1 - a.1) as f64 * (p.0 - a.0 as f64);
                    if cross < -tol {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Integer points strictly inside the polygon.
    pub fn interior_lattice_points(&self) -> Vec<(i32, i32)> {
        let mut out = Vec::new();
        if self.vertices.len() < 3 {
            return out;
        }
        let min_x = self.vertices.iter().map(|v| v.0).min().unwrap();
        let max_x = self.vertices.iter().map(|v| v.0).max().unwrap();
        let min_y = self.vertices.iter().map(|v| v.1).min().unwrap();
        let max_y = self.vertices.iter().map(|v| v.1).max().unwrap();
        for x in min_x..=max_x {
            for y in min_y..=max_y {
                if self.contains_interior((x as f64, y as f64)) {
                    out.push((x as i32, y as i32));
                }
            }
        }
        out
    }
}
