//! Deterministic reference configurations and local moves, used to seed
//! window experiments and to build ordered coupling pairs.

use crate::lattice::{
    face_boundary_edges, DimerConfig, EdgeId, FaceCoord, MatchDir, Region, Vertex,
};
use crate::util;

/// All-horizontal brickwork: vertex `(x, y)` pairs east when `x` is even.
/// Vertices whose partner falls outside the region stay unmatched, which is
/// fine for windows (only interior vertices must be covered).
pub fn brickwork(region: Region) -> DimerConfig {
    let mut config = DimerConfig::empty(region);
    for v in region.vertices() {
        let dir = if v.x.rem_euclid(2) == 0 {
            MatchDir::E
        } else {
            MatchDir::W
        };
        if region.contains_vertex(v.step(dir)) {
            config.set_dir(v, Some(dir));
        }
    }
    config
}

/// Vertical brickwork: vertex `(x, y)` pairs north when `y` is even.
pub fn vertical_brickwork(region: Region) -> DimerConfig {
    let mut config = DimerConfig::empty(region);
    for v in region.vertices() {
        let dir = if v.y.rem_euclid(2) == 0 {
            MatchDir::N
        } else {
            MatchDir::S
        };
        if region.contains_vertex(v.step(dir)) {
            config.set_dir(v, Some(dir));
        }
    }
    config
}

/// Rotate the parallel pair on `f`, whichever orientation is present.
/// Changes the height at `f` by exactly one (sign depending on the face class
/// and the coloring) and leaves all other faces unchanged.
pub fn rotate_face(config: &mut DimerConfig, f: FaceCoord) -> bool {
    let [top, right, bottom, left] = face_boundary_edges(f);
    if config.is_occupied(top) && config.is_occupied(bottom) {
        config.place_dimer(left);
        config.place_dimer(right);
        true
    } else if config.is_occupied(left) && config.is_occupied(right) {
        config.place_dimer(top);
        config.place_dimer(bottom);
        true
    } else {
        false
    }
}

/// Rotate the pair on `f` in the direction that lowers the height there by
/// one, under the coloring at `parity`: a face even at `parity` sits higher
/// with the vertical pair, an odd face with the horizontal one.
pub fn flip_down(config: &mut DimerConfig, parity: u8, f: FaceCoord) -> bool {
    let [top, right, bottom, left] = face_boundary_edges(f);
    let has_horizontal = config.is_occupied(top) && config.is_occupied(bottom);
    let has_vertical = config.is_occupied(left) && config.is_occupied(right);
    if f.is_even_at(parity) {
        if !has_vertical {
            return false;
        }
    } else if !has_horizontal {
        return false;
    }
    rotate_face(config, f)
}

/// Inverse of [`flip_down`]: raises the face height by one when applicable.
pub fn flip_up(config: &mut DimerConfig, parity: u8, f: FaceCoord) -> bool {
    let [top, right, bottom, left] = face_boundary_edges(f);
    let has_horizontal = config.is_occupied(top) && config.is_occupied(bottom);
    let has_vertical = config.is_occupied(left) && config.is_occupied(right);
    if f.is_even_at(parity) {
        if !has_horizontal {
            return false;
        }
    } else if !has_vertical {
        return false;
    }
    rotate_face(config, f)
}

/// Random walk over face rotations at counter-hashed faces. Keeps the
/// configuration a valid matching while roughening it.
pub fn randomize(config: &mut DimerConfig, seed: u64, attempts: u32) {
    let Region::Window { radius } = config.region() else {
        return;
    };
    for t in 0..attempts {
        let pick = |slot: u64| {
            let u = util::unit_from_hash(util::hash_words(seed, &[t as u64, slot]));
            ((u * (2 * radius - 1) as f64) as i32) - (radius - 1)
        };
        let f = FaceCoord::new(pick(0), pick(1));
        rotate_face(config, f);
    }
}

/// The horizontal tiling of the size-1 diamond; handy in small tests.
pub fn a1_horizontal() -> DimerConfig {
    let mut c = DimerConfig::empty(Region::Aztec { size: 1 });
    c.place_dimer(EdgeId::horizontal(Vertex::new(0, 0)));
    c.place_dimer(EdgeId::horizontal(Vertex::new(0, 1)));
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{height_field, validate_matching};

    #[test]
    fn brickwork_is_valid_and_flips_lower_heights() {
        let region = Region::Window { radius: 5 };
        let mut c = brickwork(region);
        assert!(validate_matching(&c));
        let anchor = FaceCoord::new(5, 0);
        let before = height_field(&c, 0, anchor, 0).unwrap();
        // Brickwork carries horizontal pairs on faces with even i; at
        // parity 0 the lowering rotation applies to the odd faces among them.
        let f = FaceCoord::new(0, 1);
        assert!(!flip_down(&mut c, 0, FaceCoord::new(0, 0)));
        assert!(flip_down(&mut c, 0, f));
        assert!(validate_matching(&c));
        let after = height_field(&c, 0, anchor, 0).unwrap();
        for g in before.faces() {
            let expected = if g == f { -4 } else { 0 };
            assert_eq!(
                after.get_quarters(g).unwrap() - before.get_quarters(g).unwrap(),
                expected,
                "at {g:?}"
            );
        }
        assert!(flip_up(&mut c, 0, f));
        let restored = height_field(&c, 0, anchor, 0).unwrap();
        assert_eq!(
            restored.get_quarters(f).unwrap(),
            before.get_quarters(f).unwrap()
        );
    }

    #[test]
    fn randomize_preserves_validity() {
        let region = Region::Window { radius: 6 };
        let mut c = brickwork(region);
        randomize(&mut c, 31337, 500);
        assert!(validate_matching(&c));
    }
}
