//! The Desarguesian projective plane PG(2,q) as an explicit incidence
//! structure, and the affine planes obtained by deleting one line.
//!
//! Points and lines are both stored as normalized homogeneous triples: the
//! first nonzero coordinate (scanning left to right) is 1. Ids follow the
//! lexicographic order of the normalized triples with `x0` most significant,
//! so for any `(p, e)` the numbering is fixed:
//!
//! * id 0 is `(0,0,1)`,
//! * ids `1..=q` are `(0,1,z)`,
//! * ids `q+1..` are `(1,y,z)` at `q + 1 + y*q + z`.
//!
//! A point `x` lies on the line `a` iff `a0*x0 + a1*x1 + a2*x2 = 0`. Each line
//! also carries a bitmask of its members; the bitmask is what every set
//! operation uses.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::mask::{Mask, CAPACITY};

pub type PointId = usize;
pub type LineId = usize;

/// Largest order for which a plane is built.
pub const MAX_PLANE_ORDER: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub id: PointId,
    /// Normalized homogeneous coordinates as element indices.
    pub coords: [u32; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub id: LineId,
    /// Normalized dual coordinates as element indices.
    pub coeffs: [u32; 3],
    pub members: Mask,
}

#[derive(Clone, Debug)]
pub struct Plane {
    field: FieldSpec,
    points: Vec<Point>,
    lines: Vec<Line>,
    line_ids: Vec<LineId>,
    point_lines: Vec<Vec<LineId>>,
    /// Joining line of `i < j` at `j*(j-1)/2 + i`.
    pair_line: Vec<u16>,
}

/// All normalized triples over GF(q), in id order.
fn normalized_triples(q: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    out.push([0, 0, 1]);
    for z in 0..q {
        out.push([0, 1, z]);
    }
    for y in 0..q {
        for z in 0..q {
            out.push([1, y, z]);
        }
    }
    out
}

fn tri_index(i: usize, j: usize) -> usize {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    hi * (hi - 1) / 2 + lo
}

impl Plane {
    pub fn new(field: FieldSpec) -> Result<Plane> {
        let q = field.q();
        if q > MAX_PLANE_ORDER {
            return Err(Error::PlaneTooLarge(q));
        }
        let triples = normalized_triples(q);
        let n = triples.len();
        debug_assert!(n <= CAPACITY);

        let points: Vec<Point> = triples
            .iter()
            .enumerate()
            .map(|(id, &coords)| Point { id, coords })
            .collect();

        let dot = |a: &[u32; 3], x: &[u32; 3]| {
            (0..3).fold(0, |acc, k| {
                field.add_index(acc, field.mul_index(a[k], x[k]))
            })
        };

        let lines: Vec<Line> = triples
            .iter()
            .enumerate()
            .map(|(id, &coeffs)| {
                let members = points
                    .iter()
                    .filter(|pt| dot(&coeffs, &pt.coords) == 0)
                    .map(|pt| pt.id)
                    .collect();
                Line {
                    id,
                    coeffs,
                    members,
                }
            })
            .collect();

        let mut point_lines = vec![Vec::with_capacity(q as usize + 1); n];
        let mut pair_line = vec![u16::MAX; n * (n - 1) / 2];
        for line in &lines {
            let members: Vec<PointId> = line.members.iter().collect();
            for (k, &a) in members.iter().enumerate() {
                point_lines[a].push(line.id);
                for &b in &members[k + 1..] {
                    pair_line[tri_index(a, b)] = line.id as u16;
                }
            }
        }

        Ok(Plane {
            field,
            points,
            lines,
            line_ids: (0..n).collect(),
            point_lines,
            pair_line,
        })
    }

    /// PG(2,q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Plane> {
        Plane::new(FieldSpec::with_order(q)?)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.field.q() as usize
    }

    /// Number of points, which equals the number of lines.
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn point(&self, id: PointId) -> Result<&Point> {
        self.points.get(id).ok_or(Error::NoSuchPoint(id))
    }

    pub fn line(&self, id: LineId) -> Result<&Line> {
        self.lines.get(id).ok_or(Error::NoSuchLine(id))
    }

    pub fn members(&self, line: LineId) -> Mask {
        self.lines[line].members
    }

    /// The q+1 lines through a point, in increasing id order.
    pub fn lines_through(&self, point: PointId) -> &[LineId] {
        &self.point_lines[point]
    }

    pub fn all_points(&self) -> Mask {
        Mask::full(self.size())
    }

    /// Id of the point with the given coordinates, which must be normalized.
    pub fn point_id(&self, coords: [u32; 3]) -> Option<PointId> {
        id_of_normalized(coords, self.field.q())
    }

    /// Id of the line with the given dual coordinates, which must be normalized.
    pub fn line_id(&self, coeffs: [u32; 3]) -> Option<LineId> {
        id_of_normalized(coeffs, self.field.q())
    }

    pub fn line_through(&self, p: PointId, r: PointId) -> Result<LineId> {
        self.point(p)?;
        self.point(r)?;
        if p == r {
            return Err(Error::SamePoint(p));
        }
        Ok(self.pair_line[tri_index(p, r)] as LineId)
    }

    pub fn meet(&self, l: LineId, m: LineId) -> Result<PointId> {
        self.line(l)?;
        self.line(m)?;
        if l == m {
            return Err(Error::SameLine(l));
        }
        Ok((self.lines[l].members & self.lines[m].members)
            .first()
            .expect("distinct lines of a projective plane meet"))
    }

    pub fn is_on(&self, point: PointId, line: LineId) -> bool {
        self.lines[line].members.contains(point)
    }

    /// Text dump: one `point <id> <x0> <x1> <x2>` row per point, then one
    /// `line <id> <a0> <a1> <a2> : <ids...>` row per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let [x0, x1, x2] = p.coords;
            writeln!(out, "point {} {} {} {}", p.id, x0, x1, x2).unwrap();
        }
        for l in &self.lines {
            let [a0, a1, a2] = l.coeffs;
            write!(out, "line {} {} {} {} :", l.id, a0, a1, a2).unwrap();
            for id in l.members.iter() {
                write!(out, " {id}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Position of a normalized triple in the canonical order, or `None` if the
/// triple is not normalized or out of range.
pub fn id_of_normalized(t: [u32; 3], q: u32) -> Option<usize> {
    if t.iter().any(|&c| c >= q) {
        return None;
    }
    let (q, [x0, x1, x2]) = (q as usize, t.map(|c| c as usize));
    match (x0, x1) {
        (0, 0) => (x2 == 1).then_some(0),
        (0, 1) => Some(1 + x2),
        (1, _) => Some(1 + q + x1 * q + x2),
        _ => None,
    }
}

/// A subset of the points of a plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    mask: Mask,
}

impl PointSet {
    pub fn empty() -> PointSet {
        PointSet::default()
    }

    /// Validates every id against the plane; duplicates are rejected.
    pub fn from_ids(plane: &Plane, ids: impl IntoIterator<Item = PointId>) -> Result<PointSet> {
        let mut mask = Mask::EMPTY;
        for id in ids {
            plane.point(id)?;
            if mask.contains(id) {
                return Err(Error::Format(format!("point {id} listed twice")));
            }
            mask.insert(id);
        }
        Ok(PointSet { mask })
    }

    pub fn from_mask(plane: &Plane, mask: Mask) -> Result<PointSet> {
        if !mask.is_subset(&plane.all_points()) {
            let bad = (mask - plane.all_points()).first().unwrap();
            return Err(Error::NoSuchPoint(bad));
        }
        Ok(PointSet { mask })
    }

    pub(crate) fn from_mask_unchecked(mask: Mask) -> PointSet {
        PointSet { mask }
    }

    pub fn mask(&self) -> Mask {
        self.mask
    }

    pub fn size(&self) -> usize {
        self.mask.count()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn contains(&self, id: PointId) -> bool {
        self.mask.contains(id)
    }

    /// Sorted point ids.
    pub fn ids(&self) -> Vec<PointId> {
        self.mask.iter().collect()
    }

    pub fn with(mut self, id: PointId) -> PointSet {
        self.mask.insert(id);
        self
    }

    pub fn without(mut self, id: PointId) -> PointSet {
        self.mask.remove(id);
        self
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet {
            mask: self.mask | other.mask,
        }
    }

    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet {
            mask: self.mask - other.mask,
        }
    }
}

/// The affine plane PG(2,q) minus a chosen line `r_inf`, with its parallel
/// classes.
#[derive(Clone, Debug)]
pub struct AffineFrame<'p> {
    plane: &'p Plane,
    r_inf: LineId,
    affine_points: Mask,
    affine_lines: Vec<LineId>,
    /// `(P, lines)` for each point P of `r_inf` in id order, where `lines` are
    /// the q affine lines through P.
    directions: Vec<(PointId, Vec<LineId>)>,
}

impl<'p> AffineFrame<'p> {
    pub fn new(plane: &'p Plane, r_inf: LineId) -> Result<AffineFrame<'p>> {
        plane.line(r_inf)?;
        let at_infinity = plane.members(r_inf);
        let affine_points = plane.all_points() - at_infinity;
        let affine_lines = (0..plane.size()).filter(|&l| l != r_inf).collect();
        let directions = at_infinity
            .iter()
            .map(|p| {
                let class = plane
                    .lines_through(p)
                    .iter()
                    .copied()
                    .filter(|&l| l != r_inf)
                    .collect();
                (p, class)
            })
            .collect();
        Ok(AffineFrame {
            plane,
            r_inf,
            affine_points,
            affine_lines,
            directions,
        })
    }

    pub fn plane(&self) -> &'p Plane {
        self.plane
    }

    pub fn r_inf(&self) -> LineId {
        self.r_inf
    }

    pub fn affine_points(&self) -> Mask {
        self.affine_points
    }

    pub fn affine_lines(&self) -> &[LineId] {
        &self.affine_lines
    }

    pub fn directions(&self) -> &[(PointId, Vec<LineId>)] {
        &self.directions
    }

    /// The parallel class of affine lines through `dir`, a point of `r_inf`.
    pub fn parallel_class(&self, dir: PointId) -> Result<&[LineId]> {
        self.directions
            .iter()
            .find(|(p, _)| *p == dir)
            .map(|(_, class)| class.as_slice())
            .ok_or_else(|| {
                Error::domain(format!(
                    "point {dir} is not on the line at infinity {}",
                    self.r_inf
                ))
            })
    }

    /// Point of `r_inf` on the given affine line (the line's direction).
    pub fn direction_of(&self, line: LineId) -> Result<PointId> {
        self.plane.meet(line, self.r_inf)
    }

    /// The affine line through `point` parallel to `line`.
    pub fn parallel_through(&self, point: PointId, line: LineId) -> Result<LineId> {
        let dir = self.direction_of(line)?;
        self.plane.line_through(point, dir)
    }

    pub fn affine_members(&self, line: LineId) -> Mask {
        self.plane.members(line) & self.affine_points
    }
}

/// Common view of the projective plane and an affine restriction: a point
/// universe, a family of lines, and incidence.
pub trait Geometry: Sync {
    fn plane(&self) -> &Plane;
    fn universe(&self) -> Mask;
    fn line_ids(&self) -> &[LineId];
    /// Points of `line` inside the universe.
    fn points_on(&self, line: LineId) -> Mask;
    /// Lines of the geometry through a point of the universe.
    fn lines_at(&self, point: PointId) -> &[LineId];
    /// Whether a blocking set may contain a whole line.
    fn allows_full_lines(&self) -> bool;
}

impl Geometry for Plane {
    fn plane(&self) -> &Plane {
        self
    }
    fn universe(&self) -> Mask {
        self.all_points()
    }
    fn line_ids(&self) -> &[LineId] {
        &self.line_ids
    }
    fn points_on(&self, line: LineId) -> Mask {
        self.members(line)
    }
    fn lines_at(&self, point: PointId) -> &[LineId] {
        self.lines_through(point)
    }
    fn allows_full_lines(&self) -> bool {
        false
    }
}

impl Geometry for AffineFrame<'_> {
    fn plane(&self) -> &Plane {
        self.plane
    }
    fn universe(&self) -> Mask {
        self.affine_points
    }
    fn line_ids(&self) -> &[LineId] {
        &self.affine_lines
    }
    fn points_on(&self, line: LineId) -> Mask {
        self.affine_members(line)
    }
    // every line through an affine point is an affine line
    fn lines_at(&self, point: PointId) -> &[LineId] {
        self.plane.lines_through(point)
    }
    fn allows_full_lines(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pg(q: u64) -> Plane {
        Plane::of_order(q).unwrap()
    }

    #[test]
    fn counts() {
        for (q, n) in [(3, 13), (4, 21), (5, 31)] {
            let plane = pg(q);
            assert_eq!(plane.size(), n);
            assert_eq!(plane.lines().len(), n);
            for l in plane.lines() {
                assert_eq!(l.members.count(), q as usize + 1);
            }
        }
    }

    #[test]
    fn ids_follow_lexicographic_order() {
        let plane = pg(4);
        let coords: Vec<_> = plane.points().iter().map(|p| p.coords).collect();
        let mut sorted = coords.clone();
        sorted.sort();
        assert_eq!(coords, sorted);
        for p in plane.points() {
            assert_eq!(plane.point_id(p.coords), Some(p.id));
        }
        assert_eq!(plane.point_id([0, 2, 1]), None);
        assert_eq!(plane.point_id([0, 0, 0]), None);
    }

    #[test]
    fn line_through_examples() {
        let plane = pg(3);
        let p = plane.point_id([1, 0, 0]).unwrap();
        let r = plane.point_id([0, 1, 0]).unwrap();
        let l = plane.line_through(p, r).unwrap();
        assert_eq!(plane.line(l).unwrap().coeffs, [0, 0, 1]);
        assert_eq!(plane.line_through(p, p), Err(Error::SamePoint(p)));
    }

    #[test]
    fn meet_examples() {
        let plane = pg(3);
        let l = plane.line_id([1, 0, 0]).unwrap();
        let m = plane.line_id([0, 1, 0]).unwrap();
        let x = plane.meet(l, m).unwrap();
        assert_eq!(plane.point(x).unwrap().coords, [0, 0, 1]);
        assert_eq!(plane.meet(l, l), Err(Error::SameLine(l)));
    }

    #[test]
    fn unknown_ids_rejected() {
        let plane = pg(3);
        assert_eq!(plane.line_through(0, 13), Err(Error::NoSuchPoint(13)));
        assert_eq!(plane.meet(0, 99), Err(Error::NoSuchLine(99)));
        assert!(AffineFrame::new(&plane, 13).is_err());
    }

    #[test]
    fn affine_frame_shapes() {
        for q in [3u64, 4] {
            let plane = pg(q);
            let q = q as usize;
            for r in 0..plane.size() {
                let frame = AffineFrame::new(&plane, r).unwrap();
                assert_eq!(frame.affine_points().count(), q * q);
                assert_eq!(frame.affine_lines().len(), q * q + q);
                assert_eq!(frame.directions().len(), q + 1);
                let mut seen = Vec::new();
                for (dir, class) in frame.directions() {
                    assert_eq!(class.len(), q);
                    let mut cover = Mask::EMPTY;
                    for &l in class {
                        let pts = frame.affine_members(l);
                        assert_eq!(pts.count(), q);
                        assert!(!cover.intersects(&pts));
                        cover |= pts;
                        assert_eq!(frame.direction_of(l).unwrap(), *dir);
                    }
                    assert_eq!(cover, frame.affine_points());
                    seen.extend(class.iter().copied());
                }
                seen.sort();
                assert_eq!(seen, frame.affine_lines());
            }
        }
    }

    #[test]
    fn parallel_class_rejects_affine_point() {
        let plane = pg(3);
        let frame = AffineFrame::new(&plane, 0).unwrap();
        let affine = frame.affine_points().first().unwrap();
        assert!(matches!(
            frame.parallel_class(affine),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn dump_format() {
        let plane = pg(3);
        let dump = plane.dump();
        let mut rows = dump.lines();
        assert_eq!(rows.next(), Some("point 0 0 0 1"));
        assert!(dump.contains("\nline 0 0 0 1 : 1 4 7 10\n"));
        assert!(dump.contains("\nline 4 1 0 0 : 0 1 2 3\n"));
        assert_eq!(dump.lines().count(), 26);
        assert_eq!(dump, pg(3).dump());
    }

    #[test]
    fn pointset_validation() {
        let plane = pg(3);
        assert!(PointSet::from_ids(&plane, [0, 1, 2]).is_ok());
        assert_eq!(
            PointSet::from_ids(&plane, [0, 13]),
            Err(Error::NoSuchPoint(13))
        );
        assert!(matches!(
            PointSet::from_ids(&plane, [1, 1]),
            Err(Error::Format(_))
        ));
        assert_eq!(
            PointSet::from_mask(&plane, Mask::single(20)),
            Err(Error::NoSuchPoint(20))
        );
    }

    #[test]
    fn too_large() {
        assert_eq!(Plane::of_order(17).unwrap_err(), Error::PlaneTooLarge(17));
        assert!(Plane::of_order(16).is_ok());
    }
}
