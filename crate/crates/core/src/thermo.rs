//! Thermodynamics of the periodic dimer model: Ronkin function, surface
//! tension by concave maximization, rough/smooth classification through
//! gradient facets, and Gibbs edge probabilities from the inverse Kasteleyn
//! matrix.
//!
//! All torus integrals here run one exact inner pass and one adaptive outer
//! pass. For a fixed `z` on its circle, `P(z, w)` is a polynomial in `w`
//! whose roots are cheap to find, so the inner angular average of `log |P|`
//! follows from the root moduli, the inner gradient from counting roots
//! inside the contour, and the inner inverse-Kasteleyn integral from a
//! residue sum. The outer integrands are piecewise analytic with breakpoints
//! exactly where a root crosses the contour, and those angles are located by
//! bisection and handed to the quadrature as subdivision points.

use crate::error::{Error, Result};
use crate::kasteleyn::{interpolate_laurent, KasteleynEvaluator};
use crate::lattice::EdgeId;
use crate::poly::LaurentPoly2;
use crate::weights::PeriodicWeights;
use num_complex::Complex64;
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

/// Tunable tolerances of the thermodynamic routines.
#[derive(Clone, Copy, Debug)]
pub struct ThermoConfig {
    /// Absolute target for Ronkin values.
    pub ronkin_tol: f64,
    /// Gradient residual at which the field maximizer stops.
    pub ascent_grad_tol: f64,
    /// Step size below which the maximizer stops.
    pub ascent_step_tol: f64,
    /// Field norm treated as divergence (slope too close to the boundary).
    pub max_field_norm: f64,
    /// Ball radius around the maximizer probed by the facet test.
    pub facet_radius: f64,
    /// Grid side of the facet probe (`facet_grid^2` samples).
    pub facet_grid: usize,
    /// Gradient deviation below which a probe point conforms to the facet.
    pub facet_tol: f64,
    /// Largest probe deviation that still reads as inconclusive rather than
    /// as a clear curved (rough) neighborhood.
    pub rough_margin: f64,
    /// Absolute target for edge probabilities.
    pub edge_prob_tol: f64,
    /// Largest imaginary residue tolerated in an edge probability.
    pub imag_tol: f64,
}

impl Default for ThermoConfig {
    fn default() -> Self {
        ThermoConfig {
            ronkin_tol: 1e-6,
            ascent_grad_tol: 1e-6,
            ascent_step_tol: 1e-7,
            max_field_norm: 30.0,
            facet_radius: 0.2,
            facet_grid: 5,
            facet_tol: 1e-3,
            rough_margin: 1e-2,
            edge_prob_tol: 1e-4,
            imag_tol: 1e-6,
        }
    }
}

/// Phase of the ergodic measure at a slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseLabel {
    Rough,
    Smooth,
    BoundaryOrCorner,
}

// ---------------------------------------------------------------------------
// Polynomial roots.

/// Roots of `sum_k coeffs[k] w^k` with a nonzero leading coefficient.
fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    match d {
        0 => Vec::new(),
        1 => vec![-coeffs[0] / coeffs[1]],
        2 => {
            let (a, b, c) = (coeffs[2], coeffs[1], coeffs[0]);
            let s = (b * b - 4.0 * a * c).sqrt();
            // Pick the branch that adds constructively to avoid cancellation.
            let q = if (b + s).norm() >= (b - s).norm() {
                -(b + s) / 2.0
            } else {
                -(b - s) / 2.0
            };
            if q.norm() == 0.0 {
                vec![Complex64::ZERO, Complex64::ZERO]
            } else {
                vec![q / a, c / q]
            }
        }
        _ => durand_kerner(coeffs),
    }
}

fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0
        + monic[..d]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..d)
        .map(|k| seed.powu(k as u32 + 1) / seed.norm().powi(k as i32 + 1) * radius * 0.9)
        .collect();
    let eval = |w: Complex64| -> Complex64 {
        let mut acc = Complex64::ZERO;
        for c in monic.iter().rev() {
            acc = acc * w + c;
        }
        acc
    };
    for _ in 0..300 {
        let mut biggest = 0.0f64;
        for k in 0..d {
            let mut denom = Complex64::ONE;
            for l in 0..d {
                if l != k {
                    let mut diff = roots[k] - roots[l];
                    if diff.norm() < 1e-280 {
                        diff = Complex64::new(1e-280, 0.0);
                    }
                    denom *= diff;
                }
            }
            let delta = eval(roots[k]) / denom;
            roots[k] -= delta;
            biggest = biggest.max(delta.norm());
        }
        if biggest < 1e-14 * radius {
            break;
        }
    }
    roots
}

/// Coefficients of `P(z, .)` at a fixed `z`, stripped of exact zeros at both
/// ends: `P(z, w) = w^shift * q(w)` with `q` given by the returned vector.
fn stripped_profile(profile: (i32, Vec<Complex64>)) -> (i32, Vec<Complex64>) {
    let (lo, mut coeffs) = profile;
    let mut shift = lo;
    while coeffs.len() > 1 && coeffs.first().map(|c| c.norm()) == Some(0.0) {
        coeffs.remove(0);
        shift += 1;
    }
    while coeffs.len() > 1 && coeffs.last().map(|c| c.norm()) == Some(0.0) {
        coeffs.pop();
    }
    (shift, coeffs)
}

// ---------------------------------------------------------------------------
// Piecewise-constant counting along the contour and subdivision points.

/// Average of an integer-valued step function over `[0, 2pi)` together with
/// the located jump angles. The recursion accepts an interval once three
/// equal counts survive past the minimum depth, and bisects changes down to
/// the angular resolution floor.
fn step_average<F: Fn(f64) -> i64>(count: &F, initial_cells: usize, min_depth: u32) -> (f64, Vec<f64>) {
    let mut measure = 0.0f64;
    let mut breaks = Vec::new();
    let mut stack: Vec<(f64, f64, i64, i64, u32)> = Vec::new();
    let h = 2.0 * PI / initial_cells as f64;
    let counts: Vec<i64> = (0..=initial_cells)
        .map(|k| count(k as f64 * h))
        .collect();
    for k in 0..initial_cells {
        stack.push((k as f64 * h, (k + 1) as f64 * h, counts[k], counts[k + 1], 0));
    }
    while let Some((a, b, ca, cb, depth)) = stack.pop() {
        let mid = 0.5 * (a + b);
        if b - a < 1e-12 {
            measure += 0.5 * (ca + cb) as f64 * (b - a);
            breaks.push(mid);
            continue;
        }
        let cm = count(mid);
        if ca == cb && cb == cm && depth >= min_depth {
            measure += ca as f64 * (b - a);
            continue;
        }
        stack.push((a, mid, ca, cm, depth + 1));
        stack.push((mid, b, cm, cb, depth + 1));
    }
    (measure / (2.0 * PI), breaks)
}

/// Adaptive Simpson rule on `[a, b]` for a complex integrand.
fn adaptive_simpson<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64> {
    fn simpson(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
        (fa + 4.0 * fm + fb) * (h / 6.0)
    }
    fn recurse<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Result<Complex64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if delta.norm() <= 15.0 * tol || (b - a) < 1e-13 {
            return Ok(left + right + delta / 15.0);
        }
        if depth >= 45 {
            return Err(Error::QuadratureFailed(format!(
                "adaptive rule stalled on [{a:.6}, {b:.6}]"
            )));
        }
        Ok(recurse(f, a, m, fa, flm, fm, left, tol * 0.5, depth + 1)?
            + recurse(f, m, b, fm, frm, fb, right, tol * 0.5, depth + 1)?)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, tol, 0)
}

/// Integrate a piecewise-analytic periodic integrand over `[0, 2pi)` with
/// prescribed interior subdivision points.
fn integrate_periodic<F: Fn(f64) -> Complex64>(
    f: &F,
    breaks: &[f64],
    tol: f64,
) -> Result<Complex64> {
    let mut points: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|t| t.is_finite())
        .map(|t| t.rem_euclid(2.0 * PI))
        .collect();
    points.push(0.0);
    points.push(2.0 * PI);
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() < 1e-11);
    let mut total = Complex64::ZERO;
    let segments = points.len() - 1;
    for k in 0..segments {
        let (a, b) = (points[k], points[k + 1]);
        if b - a < 1e-11 {
            continue;
        }
        // Nudge endpoints off the breakpoints so the integrand is sampled on
        // one analytic branch only.
        let eps = ((b - a) * 1e-9).min(1e-10);
        total += adaptive_simpson(f, a + eps, b - eps, tol / segments as f64)?;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Ronkin function and its gradient.

/// Exact angular average of `log |P(z, .)|` on `|w| = e^{b2}` for a fixed
/// `z`: the root moduli of the `w`-polynomial give it in closed form.
fn log_avg_over_w(p: &LaurentPoly2, b2: f64, z: Complex64) -> f64 {
    let (shift, coeffs) = stripped_profile(p.w_profile(z).expect("nonzero polynomial"));
    let radius = b2.exp();
    let mut acc = shift as f64 * b2 + coeffs.last().unwrap().norm().ln();
    for r in poly_roots(&coeffs) {
        acc += radius.max(r.norm()).ln();
    }
    acc
}

fn w_roots_inside(p: &LaurentPoly2, b2: f64, z: Complex64) -> i64 {
    let (_, coeffs) = stripped_profile(p.w_profile(z).expect("nonzero polynomial"));
    let radius = b2.exp();
    poly_roots(&coeffs)
        .into_iter()
        .filter(|r| r.norm() < radius)
        .count() as i64
}

fn z_roots_inside(p: &LaurentPoly2, b1: f64, w: Complex64) -> i64 {
    let (_, coeffs) = stripped_profile(p.z_profile(w).expect("nonzero polynomial"));
    let radius = b1.exp();
    poly_roots(&coeffs)
        .into_iter()
        .filter(|r| r.norm() < radius)
        .count() as i64
}

/// Angles at which a `w`-root of `P(e^{b1 + i theta}, .)` crosses the
/// `|w| = e^{b2}` contour; these are the only non-analytic points of the
/// outer integrands.
fn crossing_angles(p: &LaurentPoly2, b: (f64, f64)) -> Vec<f64> {
    let count = |theta: f64| w_roots_inside(p, b.1, Complex64::from_polar(b.0.exp(), theta));
    step_average(&count, 64, 3).1
}

/// Torus average of `log |P|` over `|z| = e^{b1}`, `|w| = e^{b2}`.
pub fn ronkin(p: &LaurentPoly2, b: (f64, f64), cfg: &ThermoConfig) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::EmptySupport);
    }
    let breaks = crossing_angles(p, b);
    let f = |theta: f64| {
        Complex64::new(
            log_avg_over_w(p, b.1, Complex64::from_polar(b.0.exp(), theta)),
            0.0,
        )
    };
    let total = integrate_periodic(&f, &breaks, cfg.ronkin_tol * 0.5)?;
    Ok(total.re / (2.0 * PI))
}

/// Gradient of the Ronkin function: each component is a winding count, the
/// mean number of roots of the one-variable section inside the contour, plus
/// the Laurent offset. Exact up to the bisection of crossing angles.
pub fn grad_ronkin(p: &LaurentPoly2, b: (f64, f64), _cfg: &ThermoConfig) -> Result<(f64, f64)> {
    if p.is_zero() {
        return Err(Error::EmptySupport);
    }
    let (w_lo, _) = p.w_range().unwrap();
    let (z_lo, _) = p.z_range().unwrap();
    let over_w = |theta: f64| w_roots_inside(p, b.1, Complex64::from_polar(b.0.exp(), theta));
    let over_z = |phi: f64| z_roots_inside(p, b.0, Complex64::from_polar(b.1.exp(), phi));
    let (mw, _) = step_average(&over_w, 64, 3);
    let (mz, _) = step_average(&over_z, 64, 3);
    Ok((z_lo as f64 + mz, w_lo as f64 + mw))
}

/// Result of the concave maximization defining the surface tension.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceTension {
    pub sigma: f64,
    /// Maximizing magnetic field.
    pub b: (f64, f64),
    /// Norm of `grad R(b) - rho` at the returned point.
    pub grad_residual: f64,
}

/// Surface tension at slope `rho`: maximize `-R(B) + rho . B` over fields.
/// The Ronkin function is convex, so a damped Newton iteration on the
/// gradient match converges globally; inside a gradient facet the objective
/// is flat and any point of the facet is a maximizer.
pub fn surface_tension(
    p: &LaurentPoly2,
    rho: (f64, f64),
    cfg: &ThermoConfig,
) -> Result<SurfaceTension> {
    let np = p.newton_polygon()?;
    if !np.contains_interior(rho) {
        return Err(Error::SlopeOutside(rho.0, rho.1));
    }
    let b = maximizer_field(p, rho, cfg)?;
    let g = grad_ronkin(p, b, cfg)?;
    let residual = ((g.0 - rho.0).powi(2) + (g.1 - rho.1).powi(2)).sqrt();
    let sigma = -ronkin(p, b, cfg)? + rho.0 * b.0 + rho.1 * b.1;
    Ok(SurfaceTension {
        sigma,
        b,
        grad_residual: residual,
    })
}

/// Field solving `grad R(B) = rho`.
fn maximizer_field(p: &LaurentPoly2, rho: (f64, f64), cfg: &ThermoConfig) -> Result<(f64, f64)> {
    let mut b = (0.0f64, 0.0f64);
    let res = |b: (f64, f64)| -> Result<(f64, f64, f64)> {
        let g = grad_ronkin(p, b, cfg)?;
        let r = (g.0 - rho.0, g.1 - rho.1);
        Ok((r.0, r.1, (r.0 * r.0 + r.1 * r.1).sqrt()))
    };
    let (mut rx, mut ry, mut rn) = res(b)?;
    for _ in 0..120 {
        if rn <= cfg.ascent_grad_tol {
            return Ok(b);
        }
        if (b.0 * b.0 + b.1 * b.1).sqrt() > cfg.max_field_norm {
            return Err(Error::MaximizerDiverged {
                rho1: rho.0,
                rho2: rho.1,
                b1: b.0,
                b2: b.1,
                grad: rn,
            });
        }
        // Finite-difference Jacobian of the gradient (the Hessian of R).
        let h = 1e-3;
        let gx_p = grad_ronkin(p, (b.0 + h, b.1), cfg)?;
        let gx_m = grad_ronkin(p, (b.0 - h, b.1), cfg)?;
        let gy_p = grad_ronkin(p, (b.0, b.1 + h), cfg)?;
        let gy_m = grad_ronkin(p, (b.0, b.1 - h), cfg)?;
        let j11 = (gx_p.0 - gx_m.0) / (2.0 * h);
        let j12 = (gy_p.0 - gy_m.0) / (2.0 * h);
        let j21 = (gx_p.1 - gx_m.1) / (2.0 * h);
        let j22 = (gy_p.1 - gy_m.1) / (2.0 * h);
        let det = j11 * j22 - j12 * j21;
        let mut step = if det.abs() > 1e-12 {
            (-(j22 * rx - j12 * ry) / det, -(-j21 * rx + j11 * ry) / det)
        } else {
            // Flat spot (facet): a pure gradient step on the objective.
            (-rx, -ry)
        };
        // Cap steps: far from the solution the Hessian underestimates the
        // curvature growth near the polygon boundary.
        let step_norm = (step.0 * step.0 + step.1 * step.1).sqrt();
        let cap = 2.0;
        if step_norm > cap {
            step = (step.0 * cap / step_norm, step.1 * cap / step_norm);
        }
        let mut lambda = 1.0;
        let mut advanced = false;
        for _ in 0..25 {
            let trial = (b.0 + lambda * step.0, b.1 + lambda * step.1);
            let (tx, ty, tn) = res(trial)?;
            if tn < rn {
                b = trial;
                (rx, ry, rn) = (tx, ty, tn);
                advanced = true;
                break;
            }
            lambda *= 0.5;
            if lambda * step_norm < cfg.ascent_step_tol {
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    if rn <= cfg.ascent_grad_tol.max(1e-5) {
        Ok(b)
    } else {
        Err(Error::MaximizerDiverged {
            rho1: rho.0,
            rho2: rho.1,
            b1: b.0,
            b2: b.1,
            grad: rn,
        })
    }
}

/// Classify a slope of the open Newton polygon as rough or smooth. A smooth
/// slope is an integer point whose maximizing field sits in a gradient facet:
/// all probes in a ball report `grad R = rho`. A clearly curved neighborhood
/// reads as rough; anything in between is inconclusive and reported as such.
pub fn classify_slope(
    p: &LaurentPoly2,
    rho: (f64, f64),
    cfg: &ThermoConfig,
) -> Result<PhaseLabel> {
    let np = p.newton_polygon()?;
    if !np.contains_interior(rho) {
        if np.contains_closed(rho, 1e-9) {
            return Ok(PhaseLabel::BoundaryOrCorner);
        }
        return Err(Error::SlopeOutside(rho.0, rho.1));
    }
    let integral = (rho.0 - rho.0.round()).abs() < 1e-9 && (rho.1 - rho.1.round()).abs() < 1e-9;
    if !integral {
        return Ok(PhaseLabel::Rough);
    }
    let rho = (rho.0.round(), rho.1.round());
    let center = maximizer_field(p, rho, cfg)?;
    let verdict = |center: (f64, f64)| -> Result<(usize, f64, (f64, f64))> {
        let g = cfg.facet_grid;
        let mut conforming = 0usize;
        let mut max_dev = 0.0f64;
        let mut centroid = (0.0, 0.0);
        for a in 0..g {
            for b in 0..g {
                let dx = if g == 1 { 0.0 } else { -1.0 + 2.0 * a as f64 / (g - 1) as f64 };
                let dy = if g == 1 { 0.0 } else { -1.0 + 2.0 * b as f64 / (g - 1) as f64 };
                let probe = (
                    center.0 + cfg.facet_radius * dx,
                    center.1 + cfg.facet_radius * dy,
                );
                let grad = grad_ronkin(p, probe, cfg)?;
                let dev = ((grad.0 - rho.0).powi(2) + (grad.1 - rho.1).powi(2)).sqrt();
                max_dev = max_dev.max(dev);
                if dev < cfg.facet_tol {
                    conforming += 1;
                    centroid.0 += probe.0;
                    centroid.1 += probe.1;
                }
            }
        }
        if conforming > 0 {
            centroid.0 /= conforming as f64;
            centroid.1 /= conforming as f64;
        }
        Ok((conforming, max_dev, centroid))
    };
    let samples = cfg.facet_grid * cfg.facet_grid;
    let (conforming, max_dev, centroid) = verdict(center)?;
    if conforming == samples {
        return Ok(PhaseLabel::Smooth);
    }
    if conforming > 0 {
        // The maximizer may have stopped near a facet edge; recenter at the
        // conforming probes and retry once.
        let (c2, d2, _) = verdict(centroid)?;
        if c2 == samples {
            return Ok(PhaseLabel::Smooth);
        }
        if c2 > 0 && d2 > cfg.rough_margin {
            return Err(Error::Indeterminate {
                rho1: rho.0,
                rho2: rho.1,
                conforming: c2,
                samples,
                max_dev: d2,
            });
        }
    }
    if max_dev > cfg.rough_margin {
        return Ok(PhaseLabel::Rough);
    }
    Err(Error::Indeterminate {
        rho1: rho.0,
        rho2: rho.1,
        conforming,
        samples,
        max_dev,
    })
}

/// All smooth slopes: classify every interior lattice point of the Newton
/// polygon.
pub fn smooth_slopes(p: &LaurentPoly2, cfg: &ThermoConfig) -> Result<Vec<(i32, i32)>> {
    let np = p.newton_polygon()?;
    let mut out = Vec::new();
    for (a, b) in np.interior_lattice_points() {
        if classify_slope(p, (a as f64, b as f64), cfg)? == PhaseLabel::Smooth {
            out.push((a, b));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Edge probabilities.

/// Gibbs data pinned to one slope: the characteristic polynomial, the
/// maximizing magnetic field, and per-edge cofactor polynomials (cached).
/// Edge probabilities are `K(e)` times the inverse-Kasteleyn integral over
/// the field's torus.
pub struct SlopeEnsemble {
    weights: PeriodicWeights,
    evaluator: KasteleynEvaluator,
    p: LaurentPoly2,
    b: (f64, f64),
    cfg: ThermoConfig,
    cofactors: RefCell<HashMap<(usize, usize), LaurentPoly2>>,
}

impl SlopeEnsemble {
    pub fn new(weights: &PeriodicWeights, rho: (f64, f64), cfg: &ThermoConfig) -> Result<Self> {
        let p = crate::kasteleyn::characteristic_polynomial(weights)?;
        let st = surface_tension(&p, rho, cfg)?;
        Ok(Self::assemble(weights, p, st.b, cfg))
    }

    /// Reuse a maximizing field computed elsewhere. The field depends on the
    /// weights only through the characteristic polynomial up to scale, so it
    /// survives weight-evolution steps unchanged.
    pub fn with_field(
        weights: &PeriodicWeights,
        b: (f64, f64),
        cfg: &ThermoConfig,
    ) -> Result<Self> {
        let p = crate::kasteleyn::characteristic_polynomial(weights)?;
        Ok(Self::assemble(weights, p, b, cfg))
    }

    fn assemble(
        weights: &PeriodicWeights,
        p: LaurentPoly2,
        b: (f64, f64),
        cfg: &ThermoConfig,
    ) -> Self {
        SlopeEnsemble {
            weights: weights.clone(),
            evaluator: KasteleynEvaluator::new(weights),
            p,
            b,
            cfg: *cfg,
            cofactors: RefCell::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> (f64, f64) {
        self.b
    }

    pub fn charpoly(&self) -> &LaurentPoly2 {
        &self.p
    }

    fn cofactor_poly(&self, row: usize, col: usize) -> Result<LaurentPoly2> {
        if let Some(q) = self.cofactors.borrow().get(&(row, col)) {
            return Ok(q.clone());
        }
        let n = self.weights.n() as i32;
        let q = interpolate_laurent(
            |z, w| self.evaluator.cofactor(row, col, z, w),
            (-n, n),
            (-n, n),
            1e-7,
        )?;
        self.cofactors.borrow_mut().insert((row, col), q.clone());
        Ok(q)
    }

    /// Probability that `e` is occupied under the Gibbs measure at this
    /// slope.
    pub fn edge_probability(&self, e: EdgeId) -> Result<f64> {
        let value = self.edge_probability_complex(e)?;
        if value.im.abs() > self.cfg.imag_tol {
            return Err(Error::ImaginaryResidue(value.im.abs()));
        }
        Ok(value.re)
    }

    fn edge_probability_complex(&self, e: EdgeId) -> Result<Complex64> {
        let parity = self.weights.parity();
        let period = self.weights.period();
        let white = e.white_endpoint(parity);
        let black = e.black_endpoint(parity);
        // Offset of the black endpoint's fundamental domain relative to the
        // white one; it supplies the Fourier phase of the entry.
        let delta = (
            black.x.div_euclid(period) - white.x.div_euclid(period),
            black.y.div_euclid(period) - white.y.div_euclid(period),
        );
        let row = self.evaluator.white_row(white).expect("white endpoint");
        let col = self.evaluator.black_col(black).expect("black endpoint");
        let q = self.cofactor_poly(row, col)?;
        let inverse_entry = self.inverse_entry(&q, delta)?;
        let mut k_entry = Complex64::new(self.weights.edge_weight(e), 0.0);
        if matches!(e.orientation, crate::lattice::Orientation::Vertical) {
            k_entry *= Complex64::I;
        }
        Ok(k_entry * inverse_entry)
    }

    /// `(2 pi i)^{-2}` double contour integral of
    /// `[K^{-1}]_{col,row} z^{d1} w^{d2} dz/z dw/w` over the field's torus.
    /// The inner `w`-integral is an exact residue sum over the poles inside
    /// the contour; the outer integral is adaptive with subdivisions at the
    /// angles where a pole crosses the contour.
    fn inverse_entry(&self, q: &LaurentPoly2, delta: (i32, i32)) -> Result<Complex64> {
        let b = self.b;
        let breaks = crossing_angles(&self.p, b);
        let radius_w = b.1.exp();
        let inner = |theta: f64| -> Complex64 {
            let z = Complex64::from_polar(b.0.exp(), theta);
            let (shift, coeffs) = stripped_profile(self.p.w_profile(z).expect("nonzero"));
            let roots = poly_roots(&coeffs);
            let lead = *coeffs.last().unwrap();
            // Residues at the poles w = r inside |w| = e^{b2}: the integrand
            // is Q(z, w) w^{d2 - 1 - shift} / q(w) with P = w^shift q(w).
            let mut acc = Complex64::ZERO;
            let power = delta.1 - 1 - shift;
            for (j, r) in roots.iter().enumerate() {
                if r.norm() >= radius_w {
                    continue;
                }
                let mut dq = lead;
                for (l, s) in roots.iter().enumerate() {
                    if l != j {
                        dq *= r - s;
                    }
                }
                let r_pow = if *r == Complex64::ZERO && power < 0 {
                    // A zero root with a negative power merges with the pole
                    // at the origin; handled by the Taylor branch below only
                    // when q(0) != 0, so guard against the degenerate case.
                    return Complex64::new(f64::NAN, f64::NAN);
                } else {
                    r.powi(power)
                };
                acc += q.eval(z, *r) * r_pow / dq;
            }
            // Pole at the origin: Laurent terms of Q with total exponent
            // below zero pick up Taylor coefficients of 1/q at 0.
            if let Some((q_lo, q_coeffs)) = q.w_profile(z) {
                let min_exp = q_lo + power;
                if min_exp < 0 {
                    let order = (-min_exp) as usize;
                    let q0 = coeffs[0];
                    let mut taylor = vec![Complex64::ZERO; order];
                    taylor[0] = Complex64::ONE / q0;
                    for m in 1..order {
                        let mut s = Complex64::ZERO;
                        for i in 1..=m.min(coeffs.len() - 1) {
                            s += coeffs[i] * taylor[m - i];
                        }
                        taylor[m] = -s / q0;
                    }
                    for (idx, qc) in q_coeffs.iter().enumerate() {
                        let u = q_lo + idx as i32 + power;
                        if u < 0 {
                            let need = (-u - 1) as usize;
                            if need < taylor.len() {
                                acc += qc * taylor[need];
                            }
                        }
                    }
                }
            }
            acc
        };
        let phase = |theta: f64| -> Complex64 {
            inner(theta)
                * Complex64::from_polar((delta.0 as f64 * b.0).exp(), delta.0 as f64 * theta)
        };
        let total = integrate_periodic(&phase, &breaks, self.cfg.edge_prob_tol * 0.02)?;
        let value = total / (2.0 * PI);
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::QuadratureFailed(
                "inverse entry integrand degenerated".into(),
            ));
        }
        Ok(value)
    }

    /// Expected horizontal-minus-vertical occupancy of a face's boundary:
    /// `P(top) + P(bottom) - P(right) - P(left)`.
    pub fn face_hv(&self, f: crate::lattice::FaceCoord) -> Result<f64> {
        let [top, right, bottom, left] = crate::lattice::face_boundary_edges(f);
        Ok(self.edge_probability(top)? + self.edge_probability(bottom)?
            - self.edge_probability(right)?
            - self.edge_probability(left)?)
    }
}

/// Probability that edge `e` is occupied under the ergodic Gibbs measure of
/// slope `rho` for the weighting `w`.
pub fn edge_probability(
    weights: &PeriodicWeights,
    rho: (f64, f64),
    e: EdgeId,
    cfg: &ThermoConfig,
) -> Result<f64> {
    SlopeEnsemble::new(weights, rho, cfg)?.edge_probability(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kasteleyn::characteristic_polynomial;
    use crate::lattice::{face_boundary_edges, FaceCoord, Vertex};
    use approx::assert_relative_eq;

    fn cfg() -> ThermoConfig {
        ThermoConfig::default()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn monomial_ronkin_is_affine() {
        let p = LaurentPoly2::from_terms([((2, -1), c(3.0))]);
        for b in [(0.0, 0.0), (0.7, -0.3), (-1.5, 2.0)] {
            let r = ronkin(&p, b, &cfg()).unwrap();
            let expected = 3.0f64.ln() + 2.0 * b.0 - b.1;
            assert_relative_eq!(r, expected, epsilon = 1e-9);
            let g = grad_ronkin(&p, b, &cfg()).unwrap();
            assert_relative_eq!(g.0, 2.0, epsilon = 1e-9);
            assert_relative_eq!(g.1, -1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn ronkin_slope_saturates_at_polygon_edge() {
        let w = PeriodicWeights::uniform(1);
        let p = characteristic_polynomial(&w).unwrap();
        let g = grad_ronkin(&p, (8.0, 0.0), &cfg()).unwrap();
        assert_relative_eq!(g.0, 1.0, epsilon = 1e-3);
        assert!(g.1.abs() < 1e-3);
    }

    #[test]
    fn uniform_ronkin_matches_midpoint_convexity() {
        let w = PeriodicWeights::uniform(1);
        let p = characteristic_polynomial(&w).unwrap();
        let r0 = ronkin(&p, (0.0, 0.0), &cfg()).unwrap();
        let ra = ronkin(&p, (0.5, 0.2), &cfg()).unwrap();
        let rb = ronkin(&p, (-0.5, -0.2), &cfg()).unwrap();
        assert!(r0 <= 0.5 * (ra + rb) + 1e-7);
        // Symmetry of the uniform polynomial under inversions.
        assert_relative_eq!(ra, rb, epsilon = 1e-6);
    }

    #[test]
    fn uniform_surface_tension_at_center() {
        let w = PeriodicWeights::uniform(1);
        let p = characteristic_polynomial(&w).unwrap();
        let st = surface_tension(&p, (0.0, 0.0), &cfg()).unwrap();
        assert!(st.b.0.abs() < 1e-6 && st.b.1.abs() < 1e-6, "b = {:?}", st.b);
        let r0 = ronkin(&p, (0.0, 0.0), &cfg()).unwrap();
        assert_relative_eq!(st.sigma, -r0, epsilon = 1e-6);
    }

    #[test]
    fn uniform_center_slope_is_rough() {
        let w = PeriodicWeights::uniform(1);
        let p = characteristic_polynomial(&w).unwrap();
        assert_eq!(
            classify_slope(&p, (0.0, 0.0), &cfg()).unwrap(),
            PhaseLabel::Rough
        );
        assert_eq!(smooth_slopes(&p, &cfg()).unwrap(), Vec::<(i32, i32)>::new());
    }

    #[test]
    fn two_periodic_weights_have_the_gas_slope() {
        let w = PeriodicWeights::two_periodic(2.0, 1.0).unwrap();
        let p = characteristic_polynomial(&w).unwrap();
        assert_eq!(
            classify_slope(&p, (0.0, 0.0), &cfg()).unwrap(),
            PhaseLabel::Smooth
        );
        assert_eq!(smooth_slopes(&p, &cfg()).unwrap(), vec![(0, 0)]);
    }

    #[test]
    fn uniform_edge_probabilities_are_quarter() {
        let w = PeriodicWeights::uniform(1);
        let ens = SlopeEnsemble::new(&w, (0.0, 0.0), &cfg()).unwrap();
        for e in face_boundary_edges(FaceCoord::new(0, 0)) {
            let p = ens.edge_probability(e).unwrap();
            assert_relative_eq!(p, 0.25, epsilon = 2e-4);
        }
        assert!(ens.face_hv(FaceCoord::new(0, 0)).unwrap().abs() < 5e-4);
    }

    #[test]
    fn edge_probabilities_sum_to_one_at_each_vertex() {
        let w = PeriodicWeights::random(1, 3, 0.5, 2.0);
        let ens = SlopeEnsemble::new(&w, (0.2, -0.3), &cfg()).unwrap();
        let v = Vertex::new(0, 0);
        let edges = [
            EdgeId::horizontal(v),
            EdgeId::horizontal(Vertex::new(-1, 0)),
            EdgeId::vertical(v),
            EdgeId::vertical(Vertex::new(0, -1)),
        ];
        let mut sum = 0.0;
        for e in edges {
            let p = ens.edge_probability(e).unwrap();
            assert!((-1e-5..=1.0 + 1e-5).contains(&p), "p = {p}");
            sum += p;
        }
        assert_relative_eq!(sum, 1.0, epsilon = 1e-4);
    }

    #[test]
    fn near_corner_slope_selects_the_frozen_phase() {
        // Approaching the east corner of the polygon the measure freezes on
        // the vertical brickwork whose occupied edges have white bottom
        // endpoints: at parity 0 that is the left edge of the origin face.
        let w = PeriodicWeights::uniform(1);
        let ens = SlopeEnsemble::new(&w, (0.9, 0.0), &cfg()).unwrap();
        let [_, right, _, left] = face_boundary_edges(FaceCoord::new(0, 0));
        let p_left = ens.edge_probability(left).unwrap();
        let p_right = ens.edge_probability(right).unwrap();
        assert!(
            p_left > 0.7 && p_right < 0.2,
            "left {p_left:.3}, right {p_right:.3}"
        );
        let hv = ens.face_hv(FaceCoord::new(0, 0)).unwrap();
        assert!(hv < -0.6, "hv = {hv:.3}");
    }

    #[test]
    fn edge_probability_is_gauge_invariant() {
        let w = PeriodicWeights::random(1, 9, 0.4, 2.5);
        let e = EdgeId::horizontal(Vertex::new(0, 0));
        let a = edge_probability(&w, (0.1, 0.2), e, &cfg()).unwrap();
        let b = edge_probability(&w.gauge_normalize(), (0.1, 0.2), e, &cfg()).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-6);
    }
}
