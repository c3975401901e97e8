//! Square-lattice geometry: faces, edges, regions, dimer configurations and
//! the quarter-integer height function.
//!
//! Conventions. The vertex at the origin is white at time 0 and the coloring
//! swaps every step, so vertex `(x, y)` is white at parity `p` iff
//! `x + y ≡ p (mod 2)`. Face `(i, j)` has its center at `(i + 1/2, j + 1/2)`
//! and is even at parity `p` iff `i + j ≡ p (mod 2)` (its bottom-left corner
//! is then white). Heights are stored in quarter units so all arithmetic is
//! exact.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub type Coord = i32;

/// Face of the square lattice, labeled by its bottom-left corner.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FaceCoord {
    pub i: Coord,
    pub j: Coord,
}

impl FaceCoord {
    pub fn new(i: Coord, j: Coord) -> Self {
        Self { i, j }
    }

    /// Even faces at parity `p` satisfy `i + j ≡ p (mod 2)`.
    pub fn is_even_at(self, parity: u8) -> bool {
        (self.i + self.j).rem_euclid(2) as u8 == parity % 2
    }

    pub fn l1_dist(self, other: FaceCoord) -> i32 {
        (self.i - other.i).abs() + (self.j - other.j).abs()
    }

    /// Center of the face in lattice coordinates.
    pub fn center(self) -> (f64, f64) {
        (self.i as f64 + 0.5, self.j as f64 + 0.5)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Vertex {
    pub x: Coord,
    pub y: Coord,
}

impl Vertex {
    pub fn new(x: Coord, y: Coord) -> Self {
        Self { x, y }
    }

    pub fn is_white_at(self, parity: u8) -> bool {
        (self.x + self.y).rem_euclid(2) as u8 == parity % 2
    }

    pub fn step(self, dir: MatchDir) -> Vertex {
        let (dx, dy) = dir.delta();
        Vertex::new(self.x + dx, self.y + dy)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Lattice edge, identified by its lower-left endpoint and orientation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct EdgeId {
    pub base: Vertex,
    pub orientation: Orientation,
}

impl EdgeId {
    pub fn horizontal(base: Vertex) -> Self {
        EdgeId {
            base,
            orientation: Orientation::Horizontal,
        }
    }

    pub fn vertical(base: Vertex) -> Self {
        EdgeId {
            base,
            orientation: Orientation::Vertical,
        }
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        match self.orientation {
            Orientation::Horizontal => (self.base, Vertex::new(self.base.x + 1, self.base.y)),
            Orientation::Vertical => (self.base, Vertex::new(self.base.x, self.base.y + 1)),
        }
    }

    pub fn white_endpoint(self, parity: u8) -> Vertex {
        let (a, b) = self.endpoints();
        if a.is_white_at(parity) {
            a
        } else {
            b
        }
    }

    pub fn black_endpoint(self, parity: u8) -> Vertex {
        let (a, b) = self.endpoints();
        if a.is_white_at(parity) {
            b
        } else {
            a
        }
    }

    /// The two faces bordering this edge.
    pub fn faces(self) -> (FaceCoord, FaceCoord) {
        match self.orientation {
            Orientation::Horizontal => (
                FaceCoord::new(self.base.x, self.base.y),
                FaceCoord::new(self.base.x, self.base.y - 1),
            ),
            Orientation::Vertical => (
                FaceCoord::new(self.base.x, self.base.y),
                FaceCoord::new(self.base.x - 1, self.base.y),
            ),
        }
    }

    /// Every edge lies on the boundary of exactly one face that is even at a
    /// given parity.
    pub fn even_face_at(self, parity: u8) -> FaceCoord {
        let (f, g) = self.faces();
        if f.is_even_at(parity) {
            f
        } else {
            g
        }
    }
}

/// Match direction of a vertex inside a perfect matching.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MatchDir {
    N,
    E,
    S,
    W,
}

impl MatchDir {
    pub fn delta(self) -> (Coord, Coord) {
        match self {
            MatchDir::N => (0, 1),
            MatchDir::E => (1, 0),
            MatchDir::S => (0, -1),
            MatchDir::W => (-1, 0),
        }
    }

    pub fn opposite(self) -> MatchDir {
        match self {
            MatchDir::N => MatchDir::S,
            MatchDir::E => MatchDir::W,
            MatchDir::S => MatchDir::N,
            MatchDir::W => MatchDir::E,
        }
    }

    pub fn letter(self) -> char {
        match self {
            MatchDir::N => 'N',
            MatchDir::E => 'E',
            MatchDir::S => 'S',
            MatchDir::W => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<MatchDir> {
        Some(match c {
            'N' => MatchDir::N,
            'E' => MatchDir::E,
            'S' => MatchDir::S,
            'W' => MatchDir::W,
            _ => return None,
        })
    }
}

/// Finite region of the lattice together with its boundary behavior.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Region {
    /// Aztec diamond of the given size: vertices with
    /// `|x - 1/2| + |y - 1/2| <= size`.
    Aztec { size: Coord },
    /// Square window around the origin face: faces with `|i| + |j| <= radius`
    /// and the vertices of the enclosing square.
    Window { radius: Coord },
    /// Doubly periodic `side x side` block.
    Torus { side: Coord },
}

impl Region {
    pub fn contains_vertex(&self, v: Vertex) -> bool {
        match *self {
            Region::Aztec { size } => (2 * v.x - 1).abs() + (2 * v.y - 1).abs() <= 2 * size,
            Region::Window { radius } => v.x.abs() <= radius + 1 && v.y.abs() <= radius + 1,
            Region::Torus { .. } => true,
        }
    }

    /// Faces on which heights are defined (for the Aztec diamond this is the
    /// set of internal faces together with the outer boundary ring).
    pub fn contains_face(&self, f: FaceCoord) -> bool {
        match *self {
            Region::Aztec { size } => {
                let m = |y: Coord| -> Coord {
                    if y >= 1 {
                        (size + 1 - y).max(0)
                    } else {
                        (size + y).max(0)
                    }
                };
                let hw = m(f.j).max(m(f.j + 1));
                f.i >= -hw && f.i <= hw && f.j >= -size && f.j <= size
            }
            Region::Window { radius } => f.i.abs() + f.j.abs() <= radius,
            Region::Torus { .. } => true,
        }
    }

    /// A window vertex is interior when all four faces around it belong to
    /// the window; only interior vertices are required to be matched there.
    pub fn is_interior_vertex(&self, v: Vertex) -> bool {
        match *self {
            Region::Window { .. } => [
                FaceCoord::new(v.x - 1, v.y - 1),
                FaceCoord::new(v.x, v.y - 1),
                FaceCoord::new(v.x - 1, v.y),
                FaceCoord::new(v.x, v.y),
            ]
            .into_iter()
            .all(|f| self.contains_face(f)),
            _ => self.contains_vertex(v),
        }
    }

    pub(crate) fn vertex_count(&self) -> usize {
        match *self {
            Region::Aztec { size } => (2 * size * (size + 1)) as usize,
            Region::Window { radius } => {
                let w = (2 * radius + 3) as usize;
                w * w
            }
            Region::Torus { side } => (side * side) as usize,
        }
    }

    pub(crate) fn vertex_index(&self, v: Vertex) -> Option<usize> {
        match *self {
            Region::Aztec { size } => {
                if !self.contains_vertex(v) {
                    return None;
                }
                let n = size as i64;
                let y = v.y as i64;
                let m = |y: i64| if y >= 1 { n + 1 - y } else { n + y };
                // Rows below y: closed-form prefix sums of the row widths 2m(y).
                let offset = if y <= 0 {
                    (n + y - 1) * (n + y)
                } else {
                    n * (n + 1) + (y - 1) * (2 * n + 2 - y)
                };
                Some((offset + (v.x as i64 - (1 - m(y)))) as usize)
            }
            Region::Window { radius } => {
                if !self.contains_vertex(v) {
                    return None;
                }
                let r = (radius + 1) as i64;
                let w = 2 * r + 1;
                Some(((v.y as i64 + r) * w + (v.x as i64 + r)) as usize)
            }
            Region::Torus { side } => {
                let x = v.x.rem_euclid(side) as usize;
                let y = v.y.rem_euclid(side) as usize;
                Some(y * side as usize + x)
            }
        }
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        match *self {
            Region::Aztec { size } => {
                let mut out = Vec::with_capacity(self.vertex_count());
                for y in (1 - size)..=size {
                    let m = if y >= 1 { size + 1 - y } else { size + y };
                    for x in (1 - m)..=m {
                        out.push(Vertex::new(x, y));
                    }
                }
                out
            }
            Region::Window { radius } => {
                let r = radius + 1;
                let mut out = Vec::with_capacity(self.vertex_count());
                for y in -r..=r {
                    for x in -r..=r {
                        out.push(Vertex::new(x, y));
                    }
                }
                out
            }
            Region::Torus { side } => {
                let mut out = Vec::with_capacity(self.vertex_count());
                for y in 0..side {
                    for x in 0..side {
                        out.push(Vertex::new(x, y));
                    }
                }
                out
            }
        }
    }
}

/// Dense indexer over the faces of a region's height domain.
#[derive(Clone, Debug)]
pub(crate) struct FaceIndexer {
    pub region: Region,
    j_min: Coord,
    /// Per row: (i_min, width, offset).
    rows: Vec<(Coord, usize, usize)>,
    total: usize,
}

impl FaceIndexer {
    pub fn new(region: Region) -> Result<Self> {
        let (j_min, j_max) = match region {
            Region::Aztec { size } => (-size, size),
            Region::Window { radius } => (-radius, radius),
            Region::Torus { .. } => {
                return Err(Error::RegionUnsupported(
                    region,
                    "height functions are multivalued on the torus",
                ))
            }
        };
        let mut rows = Vec::with_capacity((j_max - j_min + 1) as usize);
        let mut offset = 0usize;
        for j in j_min..=j_max {
            let (i_min, i_max) = match region {
                Region::Aztec { size } => {
                    let m = |y: Coord| -> Coord {
                        if y >= 1 {
                            (size + 1 - y).max(0)
                        } else {
                            (size + y).max(0)
                        }
                    };
                    let hw = m(j).max(m(j + 1));
                    (-hw, hw)
                }
                Region::Window { radius } => {
                    let hw = radius - j.abs();
                    (-hw, hw)
                }
                Region::Torus { .. } => unreachable!(),
            };
            let width = (i_max - i_min + 1) as usize;
            rows.push((i_min, width, offset));
            offset += width;
        }
        Ok(FaceIndexer {
            region,
            j_min,
            rows,
            total: offset,
        })
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn index(&self, f: FaceCoord) -> Option<usize> {
        let row = usize::try_from(f.j - self.j_min).ok()?;
        let &(i_min, width, offset) = self.rows.get(row)?;
        let col = usize::try_from(f.i - i_min).ok()?;
        if col < width {
            Some(offset + col)
        } else {
            None
        }
    }

    pub fn faces(&self) -> impl Iterator<Item = FaceCoord> + '_ {
        self.rows.iter().enumerate().flat_map(move |(r, &(i_min, width, _))| {
            let j = self.j_min + r as Coord;
            (0..width as Coord).map(move |c| FaceCoord::new(i_min + c, j))
        })
    }
}

/// Perfect matching (dimer configuration) on a finite region, stored as a
/// match direction per vertex.
#[derive(Clone, Debug)]
pub struct DimerConfig {
    region: Region,
    dirs: Vec<Option<MatchDir>>,
}

impl DimerConfig {
    pub fn empty(region: Region) -> Self {
        DimerConfig {
            region,
            dirs: vec![None; region.vertex_count()],
        }
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn dir_of(&self, v: Vertex) -> Option<MatchDir> {
        self.region.vertex_index(v).and_then(|i| self.dirs[i])
    }

    pub fn set_dir(&mut self, v: Vertex, dir: Option<MatchDir>) {
        if let Some(i) = self.region.vertex_index(v) {
            self.dirs[i] = dir;
        }
    }

    /// Place a dimer on both endpoints of an edge.
    pub fn place_dimer(&mut self, e: EdgeId) {
        let (a, b) = e.endpoints();
        let dir = match e.orientation {
            Orientation::Horizontal => MatchDir::E,
            Orientation::Vertical => MatchDir::N,
        };
        self.set_dir(a, Some(dir));
        self.set_dir(b, Some(dir.opposite()));
    }

    /// True when both endpoints lie in the region and are matched across `e`.
    pub fn is_occupied(&self, e: EdgeId) -> bool {
        let (a, b) = e.endpoints();
        let dir = match e.orientation {
            Orientation::Horizontal => MatchDir::E,
            Orientation::Vertical => MatchDir::N,
        };
        self.dir_of(a) == Some(dir) && self.dir_of(b) == Some(dir.opposite())
    }

    /// Occupancy of the four boundary edges of a face: top, right, bottom,
    /// left (clockwise from the top edge).
    pub fn face_occupancy(&self, f: FaceCoord) -> [bool; 4] {
        let [t, r, b, l] = face_boundary_edges(f);
        [
            self.is_occupied(t),
            self.is_occupied(r),
            self.is_occupied(b),
            self.is_occupied(l),
        ]
    }

    /// All dimers, each reported once.
    pub fn dimers(&self) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for v in self.region.vertices() {
            match self.dir_of(v) {
                Some(MatchDir::E) => out.push(EdgeId::horizontal(v)),
                Some(MatchDir::N) => out.push(EdgeId::vertical(v)),
                _ => {}
            }
        }
        out
    }
}

/// Boundary edges of a face in clockwise order starting from the top.
pub fn face_boundary_edges(f: FaceCoord) -> [EdgeId; 4] {
    [
        EdgeId::horizontal(Vertex::new(f.i, f.j + 1)),
        EdgeId::vertical(Vertex::new(f.i + 1, f.j)),
        EdgeId::horizontal(Vertex::new(f.i, f.j)),
        EdgeId::vertical(Vertex::new(f.i, f.j)),
    ]
}

/// Check the perfect-matching invariant: matched pairs are mutual, and every
/// vertex that the region requires to be covered is covered.
pub fn validate_matching(config: &DimerConfig) -> bool {
    let region = config.region();
    for v in region.vertices() {
        match config.dir_of(v) {
            Some(dir) => {
                let u = v.step(dir);
                if region.contains_vertex(u) {
                    if config.dir_of(u) != Some(dir.opposite()) {
                        return false;
                    }
                } else if region.is_interior_vertex(v) {
                    // An interior vertex matched out of the region is broken.
                    return false;
                }
            }
            None => {
                if region.is_interior_vertex(v) {
                    return false;
                }
            }
        }
    }
    true
}

/// Quarter-integer height function on the faces of a region.
#[derive(Clone, Debug)]
pub struct HeightField {
    indexer: FaceIndexer,
    /// Heights in quarter units.
    quarters: Vec<i64>,
    pub anchor: FaceCoord,
    pub anchor_quarters: i64,
}

impl HeightField {
    pub(crate) fn from_parts(
        indexer: FaceIndexer,
        quarters: Vec<i64>,
        anchor: FaceCoord,
        anchor_quarters: i64,
    ) -> Self {
        HeightField {
            indexer,
            quarters,
            anchor,
            anchor_quarters,
        }
    }

    pub fn region(&self) -> Region {
        self.indexer.region
    }

    pub fn get_quarters(&self, f: FaceCoord) -> Option<i64> {
        self.indexer.index(f).map(|i| self.quarters[i])
    }

    pub fn get(&self, f: FaceCoord) -> Option<f64> {
        self.get_quarters(f).map(|q| q as f64 / 4.0)
    }

    pub(crate) fn set_quarters(&mut self, f: FaceCoord, q: i64) {
        if let Some(i) = self.indexer.index(f) {
            self.quarters[i] = q;
        }
    }

    pub fn faces(&self) -> impl Iterator<Item = FaceCoord> + '_ {
        self.indexer.faces()
    }

    pub(crate) fn indexer(&self) -> &FaceIndexer {
        &self.indexer
    }
}

/// Sign of an edge crossing: +1 when the white endpoint lies on the right of
/// the direction of travel from `from` to its neighbor face `to`.
pub fn crossing_sign(from: FaceCoord, to: FaceCoord, parity: u8) -> (EdgeId, i64) {
    let (di, dj) = (to.i - from.i, to.j - from.j);
    debug_assert_eq!(di.abs() + dj.abs(), 1, "faces must be adjacent");
    let (edge, right_vertex) = match (di, dj) {
        (1, 0) => {
            let e = EdgeId::vertical(Vertex::new(from.i + 1, from.j));
            (e, e.endpoints().0)
        }
        (-1, 0) => {
            let e = EdgeId::vertical(Vertex::new(from.i, from.j));
            (e, e.endpoints().1)
        }
        (0, 1) => {
            let e = EdgeId::horizontal(Vertex::new(from.i, from.j + 1));
            (e, e.endpoints().1)
        }
        (0, -1) => {
            let e = EdgeId::horizontal(Vertex::new(from.i, from.j));
            (e, e.endpoints().0)
        }
        _ => unreachable!(),
    };
    let sign = if right_vertex.is_white_at(parity) { 1 } else { -1 };
    (edge, sign)
}

/// Height increment in quarters when stepping from face `from` to adjacent
/// face `to` through configuration `config` colored at `parity`.
pub fn height_step_quarters(
    config: &DimerConfig,
    parity: u8,
    from: FaceCoord,
    to: FaceCoord,
) -> i64 {
    let (edge, sign) = crossing_sign(from, to, parity);
    let occ = config.is_occupied(edge) as i64;
    sign * (4 * occ - 1)
}

/// Integrate the height function over the region's face domain from an anchor
/// value. The result is independent of the traversal order because every
/// closed face loop in the domain encircles a matched vertex.
pub fn height_field(
    config: &DimerConfig,
    parity: u8,
    anchor: FaceCoord,
    anchor_quarters: i64,
) -> Result<HeightField> {
    let indexer = FaceIndexer::new(config.region())?;
    let anchor_idx = indexer.index(anchor).ok_or(Error::FaceOutsideRegion {
        face: anchor,
        region: config.region(),
    })?;
    let mut quarters = vec![0i64; indexer.len()];
    let mut seen = vec![false; indexer.len()];
    quarters[anchor_idx] = anchor_quarters;
    seen[anchor_idx] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(anchor);
    while let Some(f) = queue.pop_front() {
        let here = quarters[indexer.index(f).unwrap()];
        for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let g = FaceCoord::new(f.i + di, f.j + dj);
            if let Some(gi) = indexer.index(g) {
                if !seen[gi] {
                    seen[gi] = true;
                    quarters[gi] = here + height_step_quarters(config, parity, f, g);
                    queue.push_back(g);
                }
            }
        }
    }
    Ok(HeightField::from_parts(
        indexer,
        quarters,
        anchor,
        anchor_quarters,
    ))
}

/// Pointwise comparison verdict between two height fields on the same region.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HeightOrder {
    Equal,
    /// First argument pointwise below-or-equal (and somewhere strictly below).
    Below,
    /// First argument pointwise above-or-equal (and somewhere strictly above).
    Above,
    Incomparable,
}

pub fn height_order(a: &HeightField, b: &HeightField) -> Result<HeightOrder> {
    if a.region() != b.region() {
        return Err(Error::RegionMismatch(a.region(), b.region()));
    }
    let mut any_below = false;
    let mut any_above = false;
    for f in a.faces() {
        let ha = a.get_quarters(f).unwrap();
        let hb = b.get_quarters(f).unwrap();
        if ha < hb {
            any_below = true;
        } else if ha > hb {
            any_above = true;
        }
    }
    Ok(match (any_below, any_above) {
        (false, false) => HeightOrder::Equal,
        (true, false) => HeightOrder::Below,
        (false, true) => HeightOrder::Above,
        (true, true) => HeightOrder::Incomparable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1_horizontal() -> DimerConfig {
        let mut c = DimerConfig::empty(Region::Aztec { size: 1 });
        c.place_dimer(EdgeId::horizontal(Vertex::new(0, 0)));
        c.place_dimer(EdgeId::horizontal(Vertex::new(0, 1)));
        c
    }

    fn a1_vertical() -> DimerConfig {
        let mut c = DimerConfig::empty(Region::Aztec { size: 1 });
        c.place_dimer(EdgeId::vertical(Vertex::new(0, 0)));
        c.place_dimer(EdgeId::vertical(Vertex::new(1, 0)));
        c
    }

    #[test]
    fn a1_tilings_validate() {
        assert!(validate_matching(&a1_horizontal()));
        assert!(validate_matching(&a1_vertical()));
    }

    #[test]
    fn overlapping_dimers_fail_validation() {
        let mut c = DimerConfig::empty(Region::Aztec { size: 1 });
        c.place_dimer(EdgeId::horizontal(Vertex::new(0, 0)));
        // Vertical dimer sharing vertex (1, 0): overwrites its direction.
        c.place_dimer(EdgeId::vertical(Vertex::new(1, 0)));
        assert!(!validate_matching(&c));
    }

    #[test]
    fn aztec_vertex_indexing_is_bijective() {
        for size in 1..=5 {
            let region = Region::Aztec { size };
            let vs = region.vertices();
            assert_eq!(vs.len(), region.vertex_count());
            for (k, v) in vs.iter().enumerate() {
                assert_eq!(region.vertex_index(*v), Some(k));
            }
            assert_eq!(region.vertex_index(Vertex::new(size + 1, 0)), None);
        }
    }

    #[test]
    fn face_indexer_covers_ring() {
        let idx = FaceIndexer::new(Region::Aztec { size: 1 }).unwrap();
        assert_eq!(idx.len(), 9);
        for f in [
            FaceCoord::new(0, 0),
            FaceCoord::new(-1, 0),
            FaceCoord::new(1, 1),
            FaceCoord::new(0, -1),
        ] {
            assert!(idx.index(f).is_some(), "{f:?}");
        }
        assert!(idx.index(FaceCoord::new(2, 0)).is_none());
        assert!(idx.index(FaceCoord::new(-2, -1)).is_none());
    }

    #[test]
    fn gradient_signs_match_occupancy_rule() {
        // Crossing an occupied edge with the white vertex on the right gives
        // +3/4; an empty edge with white on the right gives -1/4.
        let c = a1_vertical();
        // Step east from (-1,0) to (0,0) crosses the occupied vertical edge at
        // (0,0); travel direction east puts the south endpoint (0,0) on the
        // right, and (0,0) is black at parity 1.
        let d = height_step_quarters(&c, 1, FaceCoord::new(-1, 0), FaceCoord::new(0, 0));
        assert_eq!(d, -3);
        let d0 = height_step_quarters(&c, 0, FaceCoord::new(-1, 0), FaceCoord::new(0, 0));
        assert_eq!(d0, 3);
        // Empty edge crossing: from (-1,0) north to (-1,1) at parity 1 crosses
        // the empty horizontal edge based at (-1,1); east endpoint (0,1) is
        // white at parity 1, so the step is -1/4.
        let d1 = height_step_quarters(&c, 1, FaceCoord::new(-1, 0), FaceCoord::new(-1, 1));
        assert_eq!(d1, -1);
    }

    #[test]
    fn aztec_boundary_profile() {
        // Boundary heights of the diamond range over [-N/4, N/4] with the
        // extreme +N/4 at the leftmost ring face.
        for (config, parity) in [(a1_horizontal(), 1u8), (a1_vertical(), 1u8)] {
            let h = height_field(&config, parity, FaceCoord::new(-1, 0), 1).unwrap();
            assert_eq!(h.get_quarters(FaceCoord::new(1, 0)), Some(1));
            assert_eq!(h.get_quarters(FaceCoord::new(0, 1)), Some(-1));
            assert_eq!(h.get_quarters(FaceCoord::new(0, -1)), Some(-1));
            for f in [
                FaceCoord::new(-1, 1),
                FaceCoord::new(1, 1),
                FaceCoord::new(-1, -1),
                FaceCoord::new(1, -1),
            ] {
                assert_eq!(h.get_quarters(f), Some(0));
            }
            let ring = [
                FaceCoord::new(-1, 0),
                FaceCoord::new(-1, 1),
                FaceCoord::new(0, 1),
                FaceCoord::new(1, 1),
                FaceCoord::new(1, 0),
                FaceCoord::new(1, -1),
                FaceCoord::new(0, -1),
                FaceCoord::new(-1, -1),
            ];
            let min = ring.iter().map(|f| h.get_quarters(*f).unwrap()).min().unwrap();
            let max = ring.iter().map(|f| h.get_quarters(*f).unwrap()).max().unwrap();
            assert_eq!((min, max), (-1, 1));
        }
    }

    #[test]
    fn height_orders() {
        let h = height_field(&a1_horizontal(), 1, FaceCoord::new(-1, 0), 1).unwrap();
        let v = height_field(&a1_vertical(), 1, FaceCoord::new(-1, 0), 1).unwrap();
        assert_eq!(height_order(&h, &h).unwrap(), HeightOrder::Equal);
        // The two tilings differ only at the center face, by exactly 1.
        assert_eq!(
            h.get_quarters(FaceCoord::new(0, 0)).unwrap()
                - v.get_quarters(FaceCoord::new(0, 0)).unwrap(),
            4
        );
        assert_eq!(height_order(&v, &h).unwrap(), HeightOrder::Below);
        assert_eq!(height_order(&h, &v).unwrap(), HeightOrder::Above);
    }
}
