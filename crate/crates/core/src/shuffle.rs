//! The stochastic shuffling map: deletion, sliding, creation and color
//! interchange, applied independently at every even face.
//!
//! Each edge lies on the boundary of exactly one even face, so one step is a
//! product of local face maps: a face carrying a parallel pair is emptied, a
//! single dimer slides to the opposite edge, and an empty face is filled with
//! a parallel pair whose orientation is drawn from the face's creation
//! probabilities. Randomness is counter-based per `(face, time)`, which makes
//! runs reproducible, schedule independent, and gives the global monotone
//! coupling for free: two configurations evolved with the same seed share
//! every creation draw.

use crate::error::{Error, Result};
use crate::lattice::{
    face_boundary_edges, height_field, validate_matching, DimerConfig, FaceCoord, FaceIndexer,
    HeightField, Region,
};
use crate::util;
use crate::weights::PeriodicWeights;

/// Counter-based creation randomness: the draw for `(face, k)` is a pure
/// function of `(seed, face, k)`.
#[derive(Clone, Copy, Debug)]
pub struct TicketSource {
    seed: u64,
}

impl TicketSource {
    pub fn new(seed: u64) -> Self {
        TicketSource { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw in `[0, 1)` attached to a face and a time step.
    pub fn unit(&self, f: FaceCoord, k: u32) -> f64 {
        let packed = ((f.i as u32 as u64) << 32) | (f.j as u32 as u64);
        util::unit_from_hash(util::hash_words(self.seed, &[packed, k as u64 + 1]))
    }
}

/// Apply the deletion/sliding/creation rule of one even face: read the
/// occupancy of `f`'s boundary in `old`, write the outcome into `new`, and
/// return the face's height increment in quarters.
///
/// Every acting face changes by exactly +-1/2: the three all-horizontal
/// transitions give +1/2 and the all-vertical ones -1/2.
fn apply_face(
    old: &DimerConfig,
    new: &mut DimerConfig,
    weights: &PeriodicWeights,
    tickets: &TicketSource,
    f: FaceCoord,
    k: u32,
    allow_creation: bool,
) -> i64 {
    let [top, right, bottom, left] = face_boundary_edges(f);
    let t = old.is_occupied(top);
    let r = old.is_occupied(right);
    let b = old.is_occupied(bottom);
    let l = old.is_occupied(left);
    let h_old = (t as i64) + (b as i64);
    let v_old = (r as i64) + (l as i64);
    let (h_new, v_new) = match h_old + v_old {
        2 => {
            debug_assert!((t && b) || (r && l), "two dimers on a face are parallel");
            (0, 0)
        }
        1 => {
            let target = if t {
                bottom
            } else if b {
                top
            } else if r {
                left
            } else {
                right
            };
            new.place_dimer(target);
            (h_old, v_old)
        }
        0 => {
            if allow_creation {
                let (_, p_vertical) = weights
                    .creation_probabilities(f)
                    .expect("acting faces are even");
                if tickets.unit(f, k) < p_vertical {
                    new.place_dimer(left);
                    new.place_dimer(right);
                    (0, 2)
                } else {
                    new.place_dimer(top);
                    new.place_dimer(bottom);
                    (2, 0)
                }
            } else {
                (0, 0)
            }
        }
        _ => unreachable!("a perfect matching puts at most two dimers on a face"),
    };
    h_old + h_new - v_old - v_new
}

/// Height value of a face that the growing diamond has not reached yet.
/// These values are static under the dynamics (odd faces keep their height,
/// even faces beyond the diamond see no dimers) and agree with the boundary
/// ring profile at every time, with `+k/4` on the leftmost ring face.
pub fn background_height_quarters(f: FaceCoord) -> i64 {
    (f.i.abs() - f.j.abs()) as i64
}

/// Shuffling growth of the Aztec diamond: time `k` holds a perfect matching
/// of the diamond of size `k`, and one step applies the shuffle at all faces
/// even at `k`, yielding a matching of the next diamond.
#[derive(Clone, Debug)]
pub struct AztecGrowth {
    time: u32,
    config: DimerConfig,
    heights: HeightField,
    weights: PeriodicWeights,
    tickets: TicketSource,
}

impl AztecGrowth {
    /// Start from the empty diamond at time zero. The initial weighting must
    /// carry parity 0 so that the origin face is even at the first step.
    pub fn new(w0: &PeriodicWeights, seed: u64) -> Result<Self> {
        if w0.parity() != 0 {
            return Err(Error::InvalidArgument(
                "Aztec growth starts at time 0 and needs parity-0 weights".into(),
            ));
        }
        let region = Region::Aztec { size: 0 };
        let indexer = FaceIndexer::new(region)?;
        let quarters = indexer.faces().map(background_height_quarters).collect();
        let heights = HeightField::from_parts(indexer, quarters, FaceCoord::new(0, 0), 0);
        Ok(AztecGrowth {
            time: 0,
            config: DimerConfig::empty(region),
            heights,
            weights: w0.clone(),
            tickets: TicketSource::new(seed),
        })
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn config(&self) -> &DimerConfig {
        &self.config
    }

    pub fn heights(&self) -> &HeightField {
        &self.heights
    }

    pub fn weights(&self) -> &PeriodicWeights {
        &self.weights
    }

    pub fn seed(&self) -> u64 {
        self.tickets.seed()
    }

    /// Grow the diamond by one: apply the shuffle at all faces even at the
    /// current time, update heights (odd faces keep theirs), advance the
    /// weights and swap colors.
    pub fn step(&mut self) -> Result<()> {
        let k = self.time;
        let new_size = k as i32 + 1;
        let new_region = Region::Aztec { size: new_size };
        let mut new_config = DimerConfig::empty(new_region);

        let indexer = FaceIndexer::new(new_region)?;
        let mut quarters = Vec::with_capacity(indexer.len());
        for f in indexer.faces() {
            quarters.push(
                self.heights
                    .get_quarters(f)
                    .unwrap_or_else(|| background_height_quarters(f)),
            );
        }
        let mut heights = HeightField::from_parts(
            indexer,
            quarters,
            FaceCoord::new(-new_size, 0),
            new_size as i64,
        );

        // Faces interior to the grown diamond satisfy |i| + |j| <= k; the
        // even ones among them are exactly the faces that can act.
        let parity = (k % 2) as u8;
        let kk = k as i32;
        for j in -kk..=kk {
            let span = kk - j.abs();
            let start = if FaceCoord::new(-span, j).is_even_at(parity) {
                -span
            } else {
                -span + 1
            };
            let mut i = start;
            while i <= span {
                let f = FaceCoord::new(i, j);
                let dq = apply_face(
                    &self.config,
                    &mut new_config,
                    &self.weights,
                    &self.tickets,
                    f,
                    k,
                    true,
                );
                if dq != 0 {
                    let q = heights.get_quarters(f).unwrap();
                    heights.set_quarters(f, q + dq);
                }
                i += 2;
            }
        }

        self.config = new_config;
        self.heights = heights;
        self.weights = self.weights.spider_step()?.gauge_normalize();
        self.time += 1;
        Ok(())
    }

    pub fn run_to(&mut self, size: u32) -> Result<()> {
        while self.time < size {
            self.step()?;
        }
        Ok(())
    }
}

/// Exact sample from the Gibbs measure of the Aztec diamond of the given
/// size: the probability of a tiling is proportional to the product of its
/// occupied-edge weights under `w0`. Returns the final weighting for audit.
pub fn sample_aztec(
    size: u32,
    w0: &PeriodicWeights,
    seed: u64,
) -> Result<(DimerConfig, HeightField, PeriodicWeights)> {
    let mut growth = AztecGrowth::new(w0, seed)?;
    growth.run_to(size)?;
    let AztecGrowth {
        config,
        heights,
        weights,
        ..
    } = growth;
    Ok((config, heights, weights))
}

/// Pure form of the height update between two consecutive shuffle states:
/// faces odd at `k` keep their height; a face even at `k` changes by
/// `(H[before] + H[after] - V[before] - V[after]) / 4`, where `H` counts its
/// occupied horizontal boundary edges and `V` the vertical ones.
pub fn update_height(
    heights: &HeightField,
    before: &DimerConfig,
    after: &DimerConfig,
    k: u32,
) -> Result<HeightField> {
    if heights.region() != before.region() {
        return Err(Error::InconsistentConfigs(
            "height field and pre-step configuration live on different regions",
        ));
    }
    let compatible = match (before.region(), after.region()) {
        (Region::Aztec { size: a }, Region::Aztec { size: b }) => b == a + 1,
        (ra, rb) => ra == rb,
    };
    if !compatible {
        return Err(Error::InconsistentConfigs(
            "post-step region does not follow from the pre-step region",
        ));
    }
    let indexer = FaceIndexer::new(after.region())?;
    let parity = (k % 2) as u8;
    let mut quarters = Vec::with_capacity(indexer.len());
    for f in indexer.faces() {
        let mut q = heights
            .get_quarters(f)
            .unwrap_or_else(|| background_height_quarters(f));
        if f.is_even_at(parity) {
            let [ob, nb] = [before, after].map(|c| c.face_occupancy(f));
            let h = (ob[0] as i64 + ob[2] as i64) + (nb[0] as i64 + nb[2] as i64);
            let v = (ob[1] as i64 + ob[3] as i64) + (nb[1] as i64 + nb[3] as i64);
            q += h - v;
        }
        quarters.push(q);
    }
    Ok(HeightField::from_parts(
        indexer,
        quarters,
        heights.anchor,
        heights.anchor_quarters,
    ))
}

/// Shuffling dynamics on a square window, exact on a zone that shrinks by one
/// face per step. No boundary rule is invented: after `k` steps only faces
/// within `radius - k` of the center are trusted, where the evolution
/// coincides with the infinite-lattice dynamics driven by the same tickets.
#[derive(Clone, Debug)]
pub struct WindowEvolution {
    time: u32,
    radius: i32,
    config: DimerConfig,
    heights: HeightField,
    weights: PeriodicWeights,
    tickets: TicketSource,
}

impl WindowEvolution {
    pub fn new(
        initial: &DimerConfig,
        w0: &PeriodicWeights,
        seed: u64,
        anchor: FaceCoord,
        anchor_quarters: i64,
    ) -> Result<Self> {
        let Region::Window { radius } = initial.region() else {
            return Err(Error::RegionUnsupported(
                initial.region(),
                "window evolution needs a window region",
            ));
        };
        let heights = height_field(initial, w0.parity(), anchor, anchor_quarters)?;
        Ok(WindowEvolution {
            time: 0,
            radius,
            config: initial.clone(),
            heights,
            weights: w0.clone(),
            tickets: TicketSource::new(seed),
        })
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    /// Faces within this distance of the center agree with the infinite
    /// dynamics.
    pub fn trusted_radius(&self) -> i32 {
        self.radius - self.time as i32
    }

    pub fn config(&self) -> &DimerConfig {
        &self.config
    }

    pub fn heights(&self) -> &HeightField {
        &self.heights
    }

    pub fn step(&mut self) -> Result<()> {
        if self.trusted_radius() <= 0 {
            return Err(Error::WindowBudget {
                steps: self.time + 1,
                radius: self.radius,
            });
        }
        let k = self.time;
        let parity = (k % 2) as u8;
        let mut new_config = DimerConfig::empty(self.config.region());
        let r = self.radius;
        for j in -r..=r {
            let span = r - j.abs();
            for i in -span..=span {
                let f = FaceCoord::new(i, j);
                if !f.is_even_at(parity) {
                    continue;
                }
                let dq = apply_face(
                    &self.config,
                    &mut new_config,
                    &self.weights,
                    &self.tickets,
                    f,
                    k,
                    true,
                );
                if dq != 0 {
                    let q = self.heights.get_quarters(f).unwrap();
                    self.heights.set_quarters(f, q + dq);
                }
            }
        }
        self.config = new_config;
        self.weights = self.weights.spider_step()?.gauge_normalize();
        self.time += 1;
        Ok(())
    }
}

/// Height trajectory of the center face for times `0..=k_max`, exact by the
/// locality of the dynamics as long as `k_max < radius`.
pub fn window_evolve(
    initial: &DimerConfig,
    w0: &PeriodicWeights,
    k_max: u32,
    seed: u64,
    anchor: FaceCoord,
    anchor_quarters: i64,
) -> Result<Vec<i64>> {
    let Region::Window { radius } = initial.region() else {
        return Err(Error::RegionUnsupported(
            initial.region(),
            "window evolution needs a window region",
        ));
    };
    if k_max as i32 > radius - 1 {
        return Err(Error::WindowBudget {
            steps: k_max,
            radius,
        });
    }
    let mut evo = WindowEvolution::new(initial, w0, seed, anchor, anchor_quarters)?;
    let center = FaceCoord::new(0, 0);
    let mut trajectory = Vec::with_capacity(k_max as usize + 1);
    trajectory.push(evo.heights().get_quarters(center).unwrap());
    for _ in 0..k_max {
        evo.step()?;
        trajectory.push(evo.heights().get_quarters(center).unwrap());
    }
    Ok(trajectory)
}

/// Validity of a freshly produced configuration; exposed for property tests.
pub fn step_preserves_matching(config: &DimerConfig) -> bool {
    validate_matching(config)
}
