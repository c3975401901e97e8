//! Doubly periodic edge weightings and their deterministic evolution under
//! the shuffling dynamics, together with the quantities that the evolution
//! conserves modulo gauge.
//!
//! A weighting of period `2n` is stored as one 4-tuple of positive weights
//! per even face of the `2n x 2n` fundamental domain. The tuple lists the
//! boundary edges clockwise starting from the top edge. Which faces are even
//! flips with the time parity, so a step moves the stored data to the
//! complementary face class.

use crate::error::{Error, Result};
use crate::lattice::{EdgeId, FaceCoord, Orientation, Vertex};
use crate::util;
use serde::{Deserialize, Serialize};

/// Weights of the four boundary edges of an even face, clockwise from the
/// top: `(top, right, bottom, left)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceTuple {
    pub top: f64,
    pub right: f64,
    pub bottom: f64,
    pub left: f64,
}

impl FaceTuple {
    pub fn uniform(w: f64) -> Self {
        FaceTuple {
            top: w,
            right: w,
            bottom: w,
            left: w,
        }
    }

    /// `top * bottom + right * left`, the normalizing constant of the face.
    pub fn delta(&self) -> f64 {
        self.top * self.bottom + self.right * self.left
    }

    fn all_positive(&self) -> bool {
        [self.top, self.right, self.bottom, self.left]
            .iter()
            .all(|w| w.is_finite() && *w > 0.0)
    }
}

/// Doubly `2n`-periodic positive edge weighting at a given time parity.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicWeights {
    n: u32,
    parity: u8,
    /// One tuple per even face of the fundamental face torus, in row-major
    /// order over rows `j = 0..2n` (each row holds `n` even faces).
    tuples: Vec<FaceTuple>,
}

impl PeriodicWeights {
    pub fn new(n: u32, parity: u8, tuples: Vec<FaceTuple>) -> Result<Self> {
        assert!(n >= 1, "period parameter must be positive");
        assert_eq!(tuples.len(), (2 * n * n) as usize);
        let w = PeriodicWeights {
            n,
            parity: parity % 2,
            tuples,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn uniform(n: u32) -> Self {
        PeriodicWeights {
            n,
            parity: 0,
            tuples: vec![FaceTuple::uniform(1.0); (2 * n * n) as usize],
        }
    }

    /// Two-periodic weighting: one even face of the `2 x 2` domain carries
    /// weight `a` on all four edges, the other carries `b`.
    pub fn two_periodic(a: f64, b: f64) -> Result<Self> {
        PeriodicWeights::new(1, 0, vec![FaceTuple::uniform(a), FaceTuple::uniform(b)])
    }

    /// Log-uniform random weighting in `[lo, hi]`, drawn from the
    /// counter-based stream for `seed`.
    pub fn random(n: u32, seed: u64, lo: f64, hi: f64) -> Self {
        assert!(lo > 0.0 && hi >= lo);
        let ratio = hi / lo;
        let mut tuples = Vec::with_capacity((2 * n * n) as usize);
        for idx in 0..(2 * n * n) as u64 {
            let draw =
                |slot: u64| lo * ratio.powf(util::unit_from_hash(util::hash_words(seed, &[idx, slot])));
            tuples.push(FaceTuple {
                top: draw(0),
                right: draw(1),
                bottom: draw(2),
                left: draw(3),
            });
        }
        PeriodicWeights {
            n,
            parity: 0,
            tuples,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Side length of the fundamental domain.
    pub fn period(&self) -> i32 {
        2 * self.n as i32
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    fn validate(&self) -> Result<()> {
        for (idx, t) in self.tuples.iter().enumerate() {
            if !t.all_positive() {
                let f = self.face_of_index(idx);
                let bad = [t.top, t.right, t.bottom, t.left]
                    .into_iter()
                    .find(|w| !w.is_finite() || *w <= 0.0)
                    .unwrap();
                return Err(Error::NonPositiveWeight {
                    i: f.i,
                    j: f.j,
                    value: bad,
                });
            }
        }
        Ok(())
    }

    fn reduce_face(&self, f: FaceCoord) -> FaceCoord {
        let p = self.period();
        FaceCoord::new(f.i.rem_euclid(p), f.j.rem_euclid(p))
    }

    fn tuple_index(&self, f: FaceCoord) -> Option<usize> {
        let f = self.reduce_face(f);
        if !f.is_even_at(self.parity) {
            return None;
        }
        let n = self.n as i32;
        let ip = (self.parity as i32 + f.j).rem_euclid(2);
        Some((f.j * n + (f.i - ip) / 2) as usize)
    }

    fn face_of_index(&self, idx: usize) -> FaceCoord {
        let n = self.n as usize;
        let j = idx / n;
        let ip = (self.parity as usize + j) % 2;
        FaceCoord::new((2 * (idx % n) + ip) as i32, j as i32)
    }

    /// Weight tuple of an even face (periodically reduced).
    pub fn tuple_at(&self, f: FaceCoord) -> Result<FaceTuple> {
        self.tuple_index(f)
            .map(|i| self.tuples[i])
            .ok_or(Error::OddFace(self.reduce_face(f), self.parity))
    }

    /// Periodic weight of an arbitrary lattice edge.
    pub fn edge_weight(&self, e: EdgeId) -> f64 {
        let f = e.even_face_at(self.parity);
        let t = self.tuple_at(f).expect("even face of an edge");
        match e.orientation {
            // A horizontal edge is the bottom of the face above it or the top
            // of the face below it; a vertical edge is the left of the face
            // east of it or the right of the face west of it.
            Orientation::Horizontal => {
                if f.j == e.base.y {
                    t.bottom
                } else {
                    t.top
                }
            }
            Orientation::Vertical => {
                if f.i == e.base.x {
                    t.left
                } else {
                    t.right
                }
            }
        }
    }

    /// One step of the deterministic weight evolution. Each new tuple pulls
    /// the matching entries of the four neighboring faces, divided by their
    /// normalizing constants.
    pub fn spider_step(&self) -> Result<PeriodicWeights> {
        self.validate()?;
        let n = self.n as i32;
        let new_parity = 1 - self.parity;
        let mut tuples = Vec::with_capacity(self.tuples.len());
        for j in 0..2 * n {
            let ip = (new_parity as i32 + j).rem_euclid(2);
            for col in 0..n {
                let i = 2 * col + ip;
                let pull = |f: FaceCoord| -> Result<(FaceTuple, f64)> {
                    let t = self.tuple_at(f)?;
                    Ok((t, t.delta()))
                };
                let (up, d_up) = pull(FaceCoord::new(i, j + 1))?;
                let (right, d_right) = pull(FaceCoord::new(i + 1, j))?;
                let (down, d_down) = pull(FaceCoord::new(i, j - 1))?;
                let (left, d_left) = pull(FaceCoord::new(i - 1, j))?;
                tuples.push(FaceTuple {
                    top: up.top / d_up,
                    right: right.right / d_right,
                    bottom: down.bottom / d_down,
                    left: left.left / d_left,
                });
            }
        }
        Ok(PeriodicWeights {
            n: self.n,
            parity: new_parity,
            tuples,
        })
    }

    /// Probabilities `(horizontal, vertical)` with which the creation step
    /// fills an empty even face.
    pub fn creation_probabilities(&self, f: FaceCoord) -> Result<(f64, f64)> {
        let t = self.tuple_at(f)?;
        let d = t.delta();
        Ok((t.top * t.bottom / d, t.right * t.left / d))
    }

    /// Gauge-invariant data: face weights of all `4n^2` fundamental-domain
    /// faces and the two alternating cycle products.
    pub fn gauge_invariants(&self) -> GaugeInvariants {
        let p = self.period();
        let mut face_weights = Vec::with_capacity((p * p) as usize);
        for j in 0..p {
            for i in 0..p {
                face_weights.push(self.face_weight(FaceCoord::new(i, j)));
            }
        }
        GaugeInvariants {
            face_weights,
            w1: self.cycle_product(Orientation::Horizontal),
            w2: self.cycle_product(Orientation::Vertical),
        }
    }

    /// Alternating product of the four boundary edge weights of a face. The
    /// first factor of the numerator is a clockwise edge running from a white
    /// to a black endpoint, which makes the product gauge invariant.
    fn face_weight(&self, f: FaceCoord) -> f64 {
        let [t, r, b, l] = crate::lattice::face_boundary_edges(f).map(|e| self.edge_weight(e));
        // Clockwise traversal starts the top edge at the face's top-left
        // corner; colors alternate, so either {top, bottom} or {right, left}
        // are the white-to-black pair.
        let top_left_white = Vertex::new(f.i, f.j + 1).is_white_at(self.parity);
        if top_left_white {
            (t * b) / (r * l)
        } else {
            (r * l) / (t * b)
        }
    }

    /// Alternating weight product over the full winding class: all `2n`
    /// straight cycles of the given direction through the fundamental domain.
    /// Edges leaving a white vertex in the positive direction go in the
    /// numerator. A single straight cycle's product is only conserved jointly
    /// with the face weights (the step trades factors between neighboring
    /// rows), while the class product is conserved exactly: every face
    /// contributes its two parallel edges with opposite roles, so the
    /// normalizing constants cancel.
    fn cycle_product(&self, dir: Orientation) -> f64 {
        let p = self.period();
        let mut num = 1.0;
        let mut den = 1.0;
        for line in 0..p {
            for s in 0..p {
                let (edge, start) = match dir {
                    Orientation::Horizontal => {
                        (EdgeId::horizontal(Vertex::new(s, line)), Vertex::new(s, line))
                    }
                    Orientation::Vertical => {
                        (EdgeId::vertical(Vertex::new(line, s)), Vertex::new(line, s))
                    }
                };
                let w = self.edge_weight(edge);
                if start.is_white_at(self.parity) {
                    num *= w;
                } else {
                    den *= w;
                }
            }
        }
        num / den
    }

    /// Gauge-equivalent weighting in which the geometric mean of the four
    /// edge weights at every vertex equals one. The representative is the
    /// fixed point of the convention, so the map is idempotent.
    pub fn gauge_normalize(&self) -> PeriodicWeights {
        let p = self.period();
        let nv = (p * p) as usize;
        let vid = |v: Vertex| -> usize {
            (v.y.rem_euclid(p) * p + v.x.rem_euclid(p)) as usize
        };
        // Equations: for each vertex, 4 u(v) + sum_nbr u(nbr) = -S(v) where
        // S(v) is the log-weight sum of its incident edges. The kernel is the
        // white/black split direction; a rank-one shift pins it.
        let mut a = nalgebra::DMatrix::<f64>::zeros(nv, nv);
        let mut rhs = nalgebra::DVector::<f64>::zeros(nv);
        for y in 0..p {
            for x in 0..p {
                let v = Vertex::new(x, y);
                let row = vid(v);
                a[(row, row)] += 4.0;
                for e in [
                    EdgeId::horizontal(v),
                    EdgeId::horizontal(Vertex::new(x - 1, y)),
                    EdgeId::vertical(v),
                    EdgeId::vertical(Vertex::new(x, y - 1)),
                ] {
                    let (ea, eb) = e.endpoints();
                    let other = if (ea.x.rem_euclid(p), ea.y.rem_euclid(p)) == (x, y) {
                        eb
                    } else {
                        ea
                    };
                    a[(row, vid(other))] += 1.0;
                    rhs[row] -= self.edge_weight(e).ln();
                }
            }
        }
        let kernel: nalgebra::DVector<f64> = nalgebra::DVector::from_fn(nv, |k, _| {
            let v = Vertex::new((k as i32) % p, (k as i32) / p);
            if v.is_white_at(self.parity) {
                1.0
            } else {
                -1.0
            }
        });
        a += &kernel * kernel.transpose();
        let u = a.lu().solve(&rhs).expect("gauge system is positive definite");
        let gauged = |e: EdgeId| -> f64 {
            let (ea, eb) = e.endpoints();
            self.edge_weight(e) * (u[vid(ea)] + u[vid(eb)]).exp()
        };
        let tuples = (0..self.tuples.len())
            .map(|idx| {
                let f = self.face_of_index(idx);
                let [t, r, b, l] = crate::lattice::face_boundary_edges(f).map(gauged);
                FaceTuple {
                    top: t,
                    right: r,
                    bottom: b,
                    left: l,
                }
            })
            .collect();
        PeriodicWeights {
            n: self.n,
            parity: self.parity,
            tuples,
        }
    }

    /// Serializable file form with faces listed in row-major order.
    pub fn to_file(&self) -> WeightsFile {
        WeightsFile {
            n: self.n,
            time_parity: self.parity,
            faces: (0..self.tuples.len())
                .map(|idx| {
                    let f = self.face_of_index(idx);
                    FaceRecord {
                        i: f.i,
                        j: f.j,
                        top: self.tuples[idx].top,
                        right: self.tuples[idx].right,
                        bottom: self.tuples[idx].bottom,
                        left: self.tuples[idx].left,
                    }
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("weights serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: WeightsFile = serde_json::from_str(s)?;
        file.into_weights()
    }

    /// Hex SHA-256 of the canonical JSON encoding; recorded in dump and grid
    /// headers so outputs can be traced to their weights.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_string(&self.to_file()).expect("weights serialize");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut out = String::with_capacity(64);
        for b in digest {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }
}

/// Gauge-invariant summary of a periodic weighting.
#[derive(Clone, Debug)]
pub struct GaugeInvariants {
    /// Row-major over all faces `(i, j)` of the fundamental domain.
    pub face_weights: Vec<f64>,
    pub w1: f64,
    pub w2: f64,
}

impl GaugeInvariants {
    pub fn product_of_face_weights(&self) -> f64 {
        self.face_weights.iter().product()
    }

    pub fn max_rel_dev(&self, other: &GaugeInvariants) -> f64 {
        let mut dev: f64 = 0.0;
        for (a, b) in self.face_weights.iter().zip(&other.face_weights) {
            dev = dev.max((a - b).abs() / a.abs().max(b.abs()));
        }
        dev = dev.max((self.w1 - other.w1).abs() / self.w1.abs().max(other.w1.abs()));
        dev.max((self.w2 - other.w2).abs() / self.w2.abs().max(other.w2.abs()))
    }
}

/// On-disk JSON schema for weight files.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightsFile {
    pub n: u32,
    pub time_parity: u8,
    pub faces: Vec<FaceRecord>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FaceRecord {
    pub i: i32,
    pub j: i32,
    pub top: f64,
    pub right: f64,
    pub bottom: f64,
    pub left: f64,
}

impl WeightsFile {
    pub fn into_weights(self) -> Result<PeriodicWeights> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Parse("weights file needs n >= 1".into()));
        }
        let count = (2 * n * n) as usize;
        let mut tuples = vec![None; count];
        let probe = PeriodicWeights {
            n,
            parity: self.time_parity % 2,
            tuples: vec![FaceTuple::uniform(1.0); count],
        };
        for rec in &self.faces {
            let idx = probe
                .tuple_index(FaceCoord::new(rec.i, rec.j))
                .ok_or_else(|| {
                    Error::Parse(format!(
                        "face ({}, {}) is odd at parity {}",
                        rec.i, rec.j, self.time_parity
                    ))
                })?;
            tuples[idx] = Some(FaceTuple {
                top: rec.top,
                right: rec.right,
                bottom: rec.bottom,
                left: rec.left,
            });
        }
        let tuples: Option<Vec<FaceTuple>> = tuples.into_iter().collect();
        let tuples = tuples.ok_or_else(|| Error::Parse("weights file misses faces".into()))?;
        PeriodicWeights::new(n, self.time_parity, tuples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_step_halves_everything() {
        for n in [1u32, 2] {
            let w = PeriodicWeights::uniform(n);
            let w1 = w.spider_step().unwrap();
            assert_eq!(w1.parity(), 1);
            for t in &w1.tuples {
                for v in [t.top, t.right, t.bottom, t.left] {
                    assert_eq!(v, 0.5);
                }
            }
        }
    }

    #[test]
    fn translation_invariant_step_matches_hand_value() {
        let tuple = FaceTuple {
            top: 1.0,
            right: 2.0,
            bottom: 3.0,
            left: 4.0,
        };
        let w = PeriodicWeights::new(1, 0, vec![tuple, tuple]).unwrap();
        assert_eq!(tuple.delta(), 11.0);
        let w1 = w.spider_step().unwrap();
        for f in [FaceCoord::new(1, 0), FaceCoord::new(0, 1)] {
            let t = w1.tuple_at(f).unwrap();
            assert_relative_eq!(t.top, 1.0 / 11.0);
            assert_relative_eq!(t.right, 2.0 / 11.0);
            assert_relative_eq!(t.bottom, 3.0 / 11.0);
            assert_relative_eq!(t.left, 4.0 / 11.0);
        }
    }

    #[test]
    fn creation_probabilities_examples() {
        let w = PeriodicWeights::uniform(1);
        let (ph, pv) = w.creation_probabilities(FaceCoord::new(0, 0)).unwrap();
        assert_eq!((ph, pv), (0.5, 0.5));

        let tuple = FaceTuple {
            top: 1.0,
            right: 2.0,
            bottom: 3.0,
            left: 4.0,
        };
        let w = PeriodicWeights::new(1, 0, vec![tuple, tuple]).unwrap();
        let (ph, pv) = w.creation_probabilities(FaceCoord::new(0, 0)).unwrap();
        assert_relative_eq!(ph, 3.0 / 11.0);
        assert_relative_eq!(pv, 8.0 / 11.0);
        assert!(w.creation_probabilities(FaceCoord::new(1, 0)).is_err());
    }

    #[test]
    fn probabilities_sum_to_one() {
        let w = PeriodicWeights::random(2, 11, 0.2, 5.0);
        for j in 0..4 {
            for i in 0..4 {
                let f = FaceCoord::new(i, j);
                if f.is_even_at(0) {
                    let (ph, pv) = w.creation_probabilities(f).unwrap();
                    assert!(ph > 0.0 && pv > 0.0);
                    assert_relative_eq!(ph + pv, 1.0, max_relative = 1e-14);
                }
            }
        }
    }

    #[test]
    fn gauge_invariants_are_conserved() {
        let w = PeriodicWeights::random(2, 42, 0.3, 3.0);
        let inv0 = w.gauge_invariants();
        assert_relative_eq!(inv0.product_of_face_weights(), 1.0, max_relative = 1e-12);
        let mut cur = w;
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for _ in 0..50 {
            cur = cur.spider_step().unwrap().gauge_normalize();
            let inv = cur.gauge_invariants();
            assert_relative_eq!(inv.w1, inv0.w1, max_relative = 1e-10);
            assert_relative_eq!(inv.w2, inv0.w2, max_relative = 1e-10);
            for fw in &inv.face_weights {
                lo = lo.min(*fw);
                hi = hi.max(*fw);
            }
        }
        // Face weights move but stay inside a bounded box.
        assert!(lo > 1e-8 && hi < 1e8, "face weights left [{lo:.3e}, {hi:.3e}]");
    }

    #[test]
    fn gauge_scaling_at_a_vertex_is_invisible() {
        let w = PeriodicWeights::random(1, 9, 0.5, 2.0);
        let inv0 = w.gauge_invariants();
        // Scale all four edges at vertex (0, 0) of every fundamental domain.
        let scale = 7.0;
        let v = Vertex::new(0, 0);
        let touched = [
            EdgeId::horizontal(v),
            EdgeId::horizontal(Vertex::new(-1, 0)),
            EdgeId::vertical(v),
            EdgeId::vertical(Vertex::new(0, -1)),
        ];
        let tuples = (0..w.tuples.len())
            .map(|idx| {
                let f = w.face_of_index(idx);
                let [t, r, b, l] = crate::lattice::face_boundary_edges(f).map(|e| {
                    let mut val = w.edge_weight(e);
                    let hit = touched.iter().any(|te| {
                        let p = w.period();
                        let (a, _) = te.endpoints();
                        let (c, _) = e.endpoints();
                        te.orientation == e.orientation
                            && a.x.rem_euclid(p) == c.x.rem_euclid(p)
                            && a.y.rem_euclid(p) == c.y.rem_euclid(p)
                    });
                    if hit {
                        val *= scale;
                    }
                    val
                });
                FaceTuple {
                    top: t,
                    right: r,
                    bottom: b,
                    left: l,
                }
            })
            .collect();
        let scaled = PeriodicWeights::new(1, 0, tuples).unwrap();
        assert!(inv0.max_rel_dev(&scaled.gauge_invariants()) < 1e-12);
    }

    #[test]
    fn normalize_is_idempotent_and_gauge_preserving() {
        let w = PeriodicWeights::random(2, 5, 0.1, 10.0);
        let g = w.gauge_normalize();
        assert!(w.gauge_invariants().max_rel_dev(&g.gauge_invariants()) < 1e-12);
        let gg = g.gauge_normalize();
        for (a, b) in g.tuples.iter().zip(&gg.tuples) {
            assert_relative_eq!(a.top, b.top, max_relative = 1e-12);
            assert_relative_eq!(a.right, b.right, max_relative = 1e-12);
            assert_relative_eq!(a.bottom, b.bottom, max_relative = 1e-12);
            assert_relative_eq!(a.left, b.left, max_relative = 1e-12);
        }
        // Vertex products are 1 after normalization.
        let p = g.period();
        for y in 0..p {
            for x in 0..p {
                let v = Vertex::new(x, y);
                let prod: f64 = [
                    EdgeId::horizontal(v),
                    EdgeId::horizontal(Vertex::new(x - 1, y)),
                    EdgeId::vertical(v),
                    EdgeId::vertical(Vertex::new(x, y - 1)),
                ]
                .iter()
                .map(|e| g.edge_weight(*e))
                .product();
                assert_relative_eq!(prod, 1.0, max_relative = 1e-12);
            }
        }
        let uniform = PeriodicWeights::uniform(1);
        let gu = uniform.gauge_normalize();
        assert_eq!(uniform, gu);
    }

    #[test]
    fn normalize_tames_extreme_scales() {
        // Pre-scale by 1e6 at alternating vertices, then normalize: the
        // representative lands in a moderate box.
        let base = PeriodicWeights::random(1, 77, 0.5, 2.0);
        let tuples = (0..base.tuples.len())
            .map(|idx| {
                let f = base.face_of_index(idx);
                let [t, r, b, l] = crate::lattice::face_boundary_edges(f).map(|e| {
                    let (a, bv) = e.endpoints();
                    let mut val = base.edge_weight(e);
                    for v in [a, bv] {
                        if v.is_white_at(0) {
                            val *= 1e6;
                        }
                    }
                    val
                });
                FaceTuple {
                    top: t,
                    right: r,
                    bottom: b,
                    left: l,
                }
            })
            .collect();
        let scaled = PeriodicWeights::new(1, 0, tuples).unwrap();
        let g = scaled.gauge_normalize();
        for t in &g.tuples {
            for v in [t.top, t.right, t.bottom, t.left] {
                assert!(v > 1e-3 && v < 1e3, "weight {v} escaped the box");
            }
        }
    }

    #[test]
    fn creation_probabilities_are_gauge_invariant() {
        let w = PeriodicWeights::random(2, 1234, 0.05, 20.0);
        let g = w.gauge_normalize();
        for j in 0..4 {
            for i in 0..4 {
                let f = FaceCoord::new(i, j);
                if f.is_even_at(0) {
                    let (ph, pv) = w.creation_probabilities(f).unwrap();
                    let (gh, gv) = g.creation_probabilities(f).unwrap();
                    assert_relative_eq!(ph, gh, max_relative = 1e-12);
                    assert_relative_eq!(pv, gv, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn long_run_normalized_weights_stay_bounded() {
        for (n, seed) in [(1u32, 101u64), (2, 202)] {
            let mut w = PeriodicWeights::random(n, seed, 0.25, 4.0);
            for _ in 0..1000 {
                w = w.spider_step().unwrap().gauge_normalize();
                for t in &w.tuples {
                    for v in [t.top, t.right, t.bottom, t.left] {
                        assert!(v > 1e-6 && v < 1e6, "weight {v} left the safe box");
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let w = PeriodicWeights::random(2, 31, 0.017, 93.0);
        let s = w.to_json();
        let back = PeriodicWeights::from_json(&s).unwrap();
        assert_eq!(w, back);
        assert_eq!(w.content_hash(), back.content_hash());
    }
}
