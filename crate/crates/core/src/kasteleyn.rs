//! Magnetically twisted Kasteleyn matrix of the fundamental domain and the
//! characteristic polynomial `P(z, w) = det K(z, w)` recovered by
//! evaluation-interpolation on a grid of scaled roots of unity.
//!
//! Rows are indexed by the white vertices of the `2n x 2n` domain and columns
//! by the black ones. A horizontal edge contributes its weight times `z^a`, a
//! vertical edge contributes `i` times its weight times `w^b`; the exponents
//! are `+-1` exactly on edges that cross the fundamental-domain seam (sign
//! set by the direction of travel from the white to the black endpoint) and
//! `0` otherwise.

use crate::error::{Error, Result};
use crate::lattice::{EdgeId, Vertex};
use crate::poly::{LaurentPoly2, NewtonPolygon};
use crate::util;
use crate::weights::PeriodicWeights;
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug)]
struct EntrySpec {
    row: usize,
    col: usize,
    weight: f64,
    vertical: bool,
    z_exp: i32,
    w_exp: i32,
}

/// Callable form of `K(z, w)` for a fixed periodic weighting.
#[derive(Clone, Debug)]
pub struct KasteleynEvaluator {
    n: u32,
    entries: Vec<EntrySpec>,
    whites: Vec<Vertex>,
    blacks: Vec<Vertex>,
}

impl KasteleynEvaluator {
    pub fn new(weights: &PeriodicWeights) -> Self {
        let p = weights.period();
        let parity = weights.parity();
        let mut whites = Vec::new();
        let mut blacks = Vec::new();
        let mut white_of = vec![usize::MAX; (p * p) as usize];
        let mut black_of = vec![usize::MAX; (p * p) as usize];
        for y in 0..p {
            for x in 0..p {
                let v = Vertex::new(x, y);
                if v.is_white_at(parity) {
                    white_of[(y * p + x) as usize] = whites.len();
                    whites.push(v);
                } else {
                    black_of[(y * p + x) as usize] = blacks.len();
                    blacks.push(v);
                }
            }
        }
        let mut entries = Vec::with_capacity(whites.len() * 4);
        for (row, &v) in whites.iter().enumerate() {
            // Four outgoing edges; the monomial exponent is the offset of the
            // black endpoint's fundamental domain relative to the white's.
            let moves = [
                (EdgeId::horizontal(v), 1, 0, false),
                (EdgeId::horizontal(Vertex::new(v.x - 1, v.y)), -1, 0, false),
                (EdgeId::vertical(v), 0, 1, true),
                (EdgeId::vertical(Vertex::new(v.x, v.y - 1)), 0, -1, true),
            ];
            for (edge, dx, dy, vertical) in moves {
                let nbr = Vertex::new(v.x + dx, v.y + dy);
                let z_exp = if nbr.x < 0 {
                    -1
                } else if nbr.x >= p {
                    1
                } else {
                    0
                };
                let w_exp = if nbr.y < 0 {
                    -1
                } else if nbr.y >= p {
                    1
                } else {
                    0
                };
                let reduced = Vertex::new(nbr.x.rem_euclid(p), nbr.y.rem_euclid(p));
                let col = black_of[(reduced.y * p + reduced.x) as usize];
                debug_assert_ne!(col, usize::MAX, "lattice is bipartite");
                entries.push(EntrySpec {
                    row,
                    col,
                    weight: weights.edge_weight(edge),
                    vertical,
                    z_exp,
                    w_exp,
                });
            }
        }
        KasteleynEvaluator {
            n: weights.n(),
            entries,
            whites,
            blacks,
        }
    }

    pub fn dim(&self) -> usize {
        (2 * self.n * self.n) as usize
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Row index of a white vertex (arbitrary lattice coordinates).
    pub fn white_row(&self, v: Vertex) -> Option<usize> {
        let p = 2 * self.n as i32;
        let r = Vertex::new(v.x.rem_euclid(p), v.y.rem_euclid(p));
        self.whites.iter().position(|w| *w == r)
    }

    /// Column index of a black vertex.
    pub fn black_col(&self, v: Vertex) -> Option<usize> {
        let p = 2 * self.n as i32;
        let r = Vertex::new(v.x.rem_euclid(p), v.y.rem_euclid(p));
        self.blacks.iter().position(|b| *b == r)
    }

    pub fn matrix(&self, z: Complex64, w: Complex64) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut m = DMatrix::from_element(d, d, Complex64::ZERO);
        for e in &self.entries {
            let mut val = Complex64::new(e.weight, 0.0);
            if e.vertical {
                val *= Complex64::I;
            }
            if e.z_exp != 0 {
                val *= z.powi(e.z_exp);
            }
            if e.w_exp != 0 {
                val *= w.powi(e.w_exp);
            }
            m[(e.row, e.col)] += val;
        }
        m
    }

    pub fn det(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.matrix(z, w).lu().determinant()
    }

    /// Determinant of the minor with one white row and one black column
    /// removed, signed as the cofactor `(-1)^{row+col}`.
    pub fn cofactor(&self, row: usize, col: usize, z: Complex64, w: Complex64) -> Complex64 {
        let m = self.matrix(z, w);
        let d = self.dim();
        if d == 1 {
            return Complex64::ONE;
        }
        let minor = m.remove_row(row).remove_column(col);
        let sign = if (row + col) % 2 == 0 { 1.0 } else { -1.0 };
        minor.lu().determinant() * sign
    }
}

/// Recover a Laurent polynomial from point evaluations on a grid of scaled
/// roots of unity, one point per candidate exponent, and verify the fit at
/// off-grid points on the unit torus.
pub(crate) fn interpolate_laurent<F>(
    eval: F,
    z_range: (i32, i32),
    w_range: (i32, i32),
    rel_tol: f64,
) -> Result<LaurentPoly2>
where
    F: Fn(Complex64, Complex64) -> Complex64,
{
    let radius = 0.25f64.exp();
    let mz = (z_range.1 - z_range.0 + 1) as usize;
    let mw = (w_range.1 - w_range.0 + 1) as usize;
    let mut samples = vec![Complex64::ZERO; mz * mw];
    let node = |m: usize, a: usize| {
        Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * a as f64 / m as f64)
    };
    for a in 0..mz {
        let z = node(mz, a);
        for b in 0..mw {
            samples[a * mw + b] = eval(z, node(mw, b));
        }
    }
    let mut poly = LaurentPoly2::zero();
    for j in z_range.0..=z_range.1 {
        for k in w_range.0..=w_range.1 {
            let mut acc = Complex64::ZERO;
            for a in 0..mz {
                let za = Complex64::from_polar(
                    1.0,
                    -2.0 * std::f64::consts::PI * (a as f64) * (j as f64) / mz as f64,
                );
                for b in 0..mw {
                    let wb = Complex64::from_polar(
                        1.0,
                        -2.0 * std::f64::consts::PI * (b as f64) * (k as f64) / mw as f64,
                    );
                    acc += samples[a * mw + b] * za * wb;
                }
            }
            let coeff = acc / ((mz * mw) as f64 * radius.powi(j + k));
            poly.add_term((j, k), coeff);
        }
    }
    let poly = poly.pruned(1e-12);
    // Residual of refitting at points the grid never saw.
    let mut scale: f64 = 0.0;
    let mut residual: f64 = 0.0;
    for t in 0..20u64 {
        let th = 2.0 * std::f64::consts::PI * util::unit_from_hash(util::hash_words(0xF17, &[t, 0]));
        let ph = 2.0 * std::f64::consts::PI * util::unit_from_hash(util::hash_words(0xF17, &[t, 1]));
        let z = Complex64::from_polar(1.0, th);
        let w = Complex64::from_polar(1.0, ph);
        let direct = eval(z, w);
        scale = scale.max(direct.norm());
        residual = residual.max((poly.eval(z, w) - direct).norm());
    }
    let rel = residual / scale.max(poly.max_abs()).max(f64::MIN_POSITIVE);
    if rel > rel_tol {
        return Err(Error::InterpolationResidual {
            residual: rel,
            tol: rel_tol,
        });
    }
    Ok(poly)
}

/// Characteristic polynomial `det K(z, w)` with coefficients recovered on a
/// `(2n+1)^2` grid; the exponent support lies in the square `[-n, n]^2`.
pub fn characteristic_polynomial(weights: &PeriodicWeights) -> Result<LaurentPoly2> {
    let evaluator = KasteleynEvaluator::new(weights);
    let n = weights.n() as i32;
    interpolate_laurent(|z, w| evaluator.det(z, w), (-n, n), (-n, n), 1e-9)
}

/// Newton polygon of a characteristic polynomial.
pub fn newton_polygon(p: &LaurentPoly2) -> Result<NewtonPolygon> {
    p.newton_polygon()
}

#[derive(Clone, Copy, Debug)]
pub struct CharpolyRatio {
    /// Scalar `c` with `P_next = c * P`.
    pub factor: f64,
    /// Largest relative deviation of per-coefficient ratios from `factor`.
    pub deviation: f64,
}

/// The characteristic polynomial changes by a pure multiplicative constant
/// under one weight-evolution step; returns that constant and the spread of
/// the coefficient-wise ratios. A spread above `1e-8` signals a bug and is an
/// error.
pub fn charpoly_ratio(weights: &PeriodicWeights) -> Result<CharpolyRatio> {
    let p0 = characteristic_polynomial(weights)?;
    let p1 = characteristic_polynomial(&weights.spider_step()?)?;
    let (c, deviation) = p0.scalar_ratio(&p1)?;
    if deviation > 1e-8 {
        return Err(Error::NotScalarMultiple { spread: deviation });
    }
    debug_assert!(c.im.abs() <= 1e-8 * c.norm(), "ratio should be real");
    Ok(CharpolyRatio {
        factor: c.re,
        deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::FaceTuple;

    /// Closed form of the 2x2 determinant for period-2 weightings: with the
    /// even-face tuples `(a0, b0, c0, d0)` and `(a1, b1, c1, d1)` (clockwise
    /// from the top edge),
    /// `P = a0 c0 + a1 c1 + b0 d0 + b1 d1 + c0 c1 z + a0 a1 / z + d0 d1 w + b0 b1 / w`.
    fn period_two_oracle(t0: FaceTuple, t1: FaceTuple) -> LaurentPoly2 {
        let c = |x: f64| Complex64::new(x, 0.0);
        LaurentPoly2::from_terms([
            (
                (0, 0),
                c(t0.top * t0.bottom
                    + t1.top * t1.bottom
                    + t0.right * t0.left
                    + t1.right * t1.left),
            ),
            ((1, 0), c(t0.bottom * t1.bottom)),
            ((-1, 0), c(t0.top * t1.top)),
            ((0, 1), c(t0.left * t1.left)),
            ((0, -1), c(t0.right * t1.right)),
        ])
    }

    #[test]
    fn uniform_charpoly_matches_closed_form() {
        let w = PeriodicWeights::uniform(1);
        let p = characteristic_polynomial(&w).unwrap();
        let oracle = period_two_oracle(FaceTuple::uniform(1.0), FaceTuple::uniform(1.0));
        for (e, c) in oracle.terms() {
            assert!(
                (p.coefficient(e) - c).norm() < 1e-12,
                "coefficient at {e:?}: {} vs {}",
                p.coefficient(e),
                c
            );
        }
        assert_eq!(p.support(), oracle.support());
        let np = p.newton_polygon().unwrap();
        assert_eq!(np.vertex_set(), vec![(-1, 0), (0, -1), (0, 1), (1, 0)]);
    }

    #[test]
    fn random_period_two_matches_symbolic_determinant() {
        for seed in [3u64, 17, 91] {
            let w = PeriodicWeights::random(1, seed, 0.2, 4.0);
            let t0 = w.tuple_at(crate::lattice::FaceCoord::new(0, 0)).unwrap();
            let t1 = w.tuple_at(crate::lattice::FaceCoord::new(1, 1)).unwrap();
            let p = characteristic_polynomial(&w).unwrap();
            let oracle = period_two_oracle(t0, t1);
            for (e, c) in oracle.terms() {
                assert!(
                    (p.coefficient(e) - c).norm() <= 1e-10 * c.norm(),
                    "seed {seed}, term {e:?}"
                );
            }
        }
    }

    #[test]
    fn interpolation_agrees_with_direct_determinant() {
        let w = PeriodicWeights::random(2, 7, 0.3, 3.0);
        let p = characteristic_polynomial(&w).unwrap();
        let ev = KasteleynEvaluator::new(&w);
        // Grid-independent consistency at z = w = 1 and random torus points.
        let one = Complex64::ONE;
        let d11 = ev.det(one, one);
        assert!((p.eval(one, one) - d11).norm() <= 1e-10 * d11.norm().max(1.0));
        let mut max_rel: f64 = 0.0;
        for t in 0..50u64 {
            let th = 2.0 * std::f64::consts::PI
                * util::unit_from_hash(util::hash_words(42, &[t, 0]));
            let ph = 2.0 * std::f64::consts::PI
                * util::unit_from_hash(util::hash_words(42, &[t, 1]));
            let z = Complex64::from_polar(1.0, th);
            let wv = Complex64::from_polar(1.0, ph);
            let direct = ev.det(z, wv);
            let rel = (p.eval(z, wv) - direct).norm() / direct.norm().max(p.max_abs());
            max_rel = max_rel.max(rel);
        }
        assert!(max_rel <= 1e-9, "max relative error {max_rel:.3e}");
    }

    #[test]
    fn newton_polygon_is_the_tilted_square() {
        for (n, seed) in [(1u32, 5u64), (2, 6)] {
            let w = PeriodicWeights::random(n, seed, 0.5, 2.0);
            let p = characteristic_polynomial(&w).unwrap();
            let np = p.newton_polygon().unwrap();
            let m = n as i64;
            assert_eq!(
                np.vertex_set(),
                vec![(-m, 0), (0, -m), (0, m), (m, 0)],
                "n = {n}"
            );
        }
    }

    #[test]
    fn spider_step_scales_charpoly() {
        let uniform = PeriodicWeights::uniform(1);
        let r = charpoly_ratio(&uniform).unwrap();
        assert!(r.deviation < 1e-10);
        assert!((r.factor - 0.25).abs() < 1e-12);

        let mut w = PeriodicWeights::random(1, 1001, 0.3, 3.0);
        for _ in 0..20 {
            let r = charpoly_ratio(&w).unwrap();
            assert!(r.deviation < 1e-9);
            w = w.spider_step().unwrap();
        }
    }

    #[test]
    fn gauge_changes_factor_not_spread() {
        let w = PeriodicWeights::random(1, 55, 0.1, 9.0);
        let a = charpoly_ratio(&w).unwrap();
        let b = charpoly_ratio(&w.gauge_normalize()).unwrap();
        assert!(a.deviation < 1e-9 && b.deviation < 1e-9);
    }

    #[test]
    fn newton_polygon_invariant_under_weight_evolution() {
        let mut w = PeriodicWeights::random(2, 13, 0.4, 2.5);
        let np0 = characteristic_polynomial(&w)
            .unwrap()
            .newton_polygon()
            .unwrap();
        for _ in 0..8 {
            w = w.spider_step().unwrap().gauge_normalize();
            let np = characteristic_polynomial(&w)
                .unwrap()
                .newton_polygon()
                .unwrap();
            assert_eq!(np.vertex_set(), np0.vertex_set());
        }
    }
}
