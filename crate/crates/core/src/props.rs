//! Property checkers for point sets: blocking, minimality, semiovals, the
//! r-infinity property, the parallel-class (Pi) properties, and tangent
//! spectra.
//!
//! Every checker is a direct scan over the lines of the geometry using
//! bitmask intersections. Nothing is cached.
//!
//! Degenerate inputs: the empty set is never blocking, and it is vacuously a
//! semioval.

use std::collections::BTreeMap;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::plane::{AffineFrame, Geometry, LineId, Plane, PointId, PointSet};

fn require_member(set: &PointSet, point: PointId) -> Result<()> {
    if !set.contains(point) {
        return Err(Error::domain(format!("point {point} is not in the set")));
    }
    Ok(())
}

fn require_affine(frame: &AffineFrame<'_>, set: &PointSet) -> Result<()> {
    if let Some(p) = (set.mask() - frame.affine_points()).first() {
        return Err(Error::domain(format!(
            "point {p} lies on the line at infinity {}",
            frame.r_inf()
        )));
    }
    Ok(())
}

/// Lines of the geometry through `point` meeting the set only in `point`.
fn tangents_at<G: Geometry + ?Sized>(geom: &G, set: &PointSet, point: PointId) -> Vec<LineId> {
    let only = crate::mask::Mask::single(point);
    geom.lines_at(point)
        .iter()
        .copied()
        .filter(|&l| geom.points_on(l) & set.mask() == only)
        .collect()
}

fn tangent_count<G: Geometry + ?Sized>(geom: &G, set: &PointSet, point: PointId) -> usize {
    let mask = set.mask();
    geom.lines_at(point)
        .iter()
        .filter(|&&l| (geom.points_on(l) & mask).count() == 1)
        .count()
}

/// Tangent lines of the projective plane at a point of the set.
pub fn tangent_lines(plane: &Plane, set: &PointSet, point: PointId) -> Result<Vec<LineId>> {
    plane.point(point)?;
    require_member(set, point)?;
    Ok(tangents_at(plane, set, point))
}

/// Tangent lines of the affine plane at a point of the set.
pub fn affine_tangent_lines(
    frame: &AffineFrame<'_>,
    set: &PointSet,
    point: PointId,
) -> Result<Vec<LineId>> {
    require_affine(frame, set)?;
    require_member(set, point)?;
    Ok(tangents_at(frame, set, point))
}

/// Blocking in whichever geometry is given: meets every line and, in the
/// projective plane, contains no line.
pub fn is_blocking<G: Geometry + ?Sized>(geom: &G, set: &PointSet) -> bool {
    let mask = set.mask();
    geom.line_ids().iter().all(|&l| {
        let pts = geom.points_on(l);
        pts.intersects(&mask) && (geom.allows_full_lines() || !pts.is_subset(&mask))
    })
}

pub fn is_blocking_projective(plane: &Plane, set: &PointSet) -> bool {
    is_blocking(plane, set)
}

/// Every affine line meets the set. The set may contain affine lines.
pub fn is_blocking_affine(frame: &AffineFrame<'_>, set: &PointSet) -> Result<bool> {
    require_affine(frame, set)?;
    Ok(is_blocking(frame, set))
}

/// A blocking set is minimal iff every point has at least one tangent.
pub fn is_minimal<G: Geometry + ?Sized>(geom: &G, set: &PointSet) -> Result<bool> {
    if !set.mask().is_subset(&geom.universe()) {
        return Err(Error::domain("the set has points outside the geometry"));
    }
    if !is_blocking(geom, set) {
        return Err(Error::domain("the set is not a blocking set"));
    }
    Ok(set.mask().iter().all(|p| tangent_count(geom, set, p) >= 1))
}

/// Exactly one tangent at every point. True for the empty set.
pub fn is_semioval(plane: &Plane, set: &PointSet) -> bool {
    set.mask().iter().all(|p| tangent_count(plane, set, p) == 1)
}

pub fn is_blocking_semioval(plane: &Plane, set: &PointSet) -> bool {
    is_blocking(plane, set) && is_semioval(plane, set)
}

/// If `point` has exactly one tangent to the blocking set, returns it (the
/// line playing the role of r-infinity); every other line through `point`
/// is then a secant.
pub fn has_r_infinity_property(
    plane: &Plane,
    set: &PointSet,
    point: PointId,
) -> Result<Option<LineId>> {
    plane.point(point)?;
    if !is_blocking(plane, set) {
        return Err(Error::domain("the set is not a blocking set"));
    }
    require_member(set, point)?;
    let tangents = tangents_at(plane, set, point);
    Ok(match tangents.as_slice() {
        [only] => Some(*only),
        _ => None,
    })
}

/// Points of a blocking set at which it has the r-infinity property.
pub fn r_infinity_points(plane: &Plane, set: &PointSet) -> Result<Vec<(PointId, LineId)>> {
    if !is_blocking(plane, set) {
        return Err(Error::domain("the set is not a blocking set"));
    }
    Ok(set
        .mask()
        .iter()
        .filter_map(|p| match tangents_at(plane, set, p).as_slice() {
            [only] => Some((p, *only)),
            _ => None,
        })
        .collect())
}

/// Per point of the set, the number of tangents that are not in the given
/// parallel class, and whether some line of the class lies inside the set.
fn pi_conditions(
    frame: &AffineFrame<'_>,
    set: &PointSet,
    dir: PointId,
) -> Result<(Vec<usize>, bool)> {
    let class = frame.parallel_class(dir)?;
    require_affine(frame, set)?;
    if !is_blocking(frame, set) {
        return Err(Error::domain("the set is not an affine blocking set"));
    }
    let outside: Vec<usize> = set
        .mask()
        .iter()
        .map(|p| {
            tangents_at(frame, set, p)
                .into_iter()
                .filter(|l| !class.contains(l))
                .count()
        })
        .collect();
    let contains_class_line = class
        .iter()
        .any(|&l| frame.affine_members(l).is_subset(&set.mask()));
    Ok((outside, contains_class_line))
}

/// (j) every point has a tangent outside the class of `dir`, and (jj) no line
/// of that class is contained in the set.
pub fn has_pi_property(frame: &AffineFrame<'_>, set: &PointSet, dir: PointId) -> Result<bool> {
    let (outside, full_line) = pi_conditions(frame, set, dir)?;
    Ok(!full_line && outside.iter().all(|&n| n >= 1))
}

/// (j') every point has exactly one tangent outside the class of `dir`, and
/// (jj).
pub fn has_pi_strong_property(
    frame: &AffineFrame<'_>,
    set: &PointSet,
    dir: PointId,
) -> Result<bool> {
    let (outside, full_line) = pi_conditions(frame, set, dir)?;
    Ok(!full_line && outside.iter().all(|&n| n == 1))
}

/// Line-intersection spectrum and per-point tangent/secant counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentReport {
    /// `spectrum[j]` is the number of lines meeting the set in exactly `j`
    /// points, for `j = 0..=q+1`.
    pub spectrum: Vec<usize>,
    pub tangents_per_point: BTreeMap<PointId, usize>,
    pub secants_per_point: BTreeMap<PointId, usize>,
}

impl TangentReport {
    /// Number of lines meeting the set in exactly `q - 1` points.
    pub fn x_q_minus_1(&self) -> usize {
        self.spectrum[self.spectrum.len() - 3]
    }
}

impl Serialize for TangentReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let tangents: BTreeMap<String, usize> = self
            .tangents_per_point
            .iter()
            .map(|(p, n)| (p.to_string(), *n))
            .collect();
        let mut s = serializer.serialize_struct("TangentReport", 2)?;
        s.serialize_field("spectrum", &self.spectrum)?;
        s.serialize_field("tangents_per_point", &tangents)?;
        s.end()
    }
}

pub fn tangent_report<G: Geometry + ?Sized>(geom: &G, set: &PointSet) -> TangentReport {
    let q = geom.plane().q();
    let mask = set.mask();
    let mut spectrum = vec![0; q + 2];
    for &l in geom.line_ids() {
        spectrum[(geom.points_on(l) & mask).count()] += 1;
    }
    let mut tangents_per_point = BTreeMap::new();
    let mut secants_per_point = BTreeMap::new();
    for p in mask.iter() {
        let (mut t, mut s) = (0, 0);
        for &l in geom.lines_at(p) {
            match (geom.points_on(l) & mask).count() {
                1 => t += 1,
                _ => s += 1,
            }
        }
        tangents_per_point.insert(p, t);
        secants_per_point.insert(p, s);
    }
    TangentReport {
        spectrum,
        tangents_per_point,
        secants_per_point,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructs::{default_triangle, vertexless_triangle};

    fn triangle(plane: &Plane) -> PointSet {
        let (a, b, c) = default_triangle(plane);
        vertexless_triangle(plane, a, b, c).unwrap().0
    }

    #[test]
    fn full_line_and_empty_are_not_blocking() {
        let plane = Plane::of_order(3).unwrap();
        let line = PointSet::from_mask(&plane, plane.members(0)).unwrap();
        assert!(!is_blocking_projective(&plane, &line));
        assert!(!is_blocking_projective(&plane, &PointSet::empty()));
        assert!(is_semioval(&plane, &PointSet::empty()));
    }

    #[test]
    fn singleton_tangents() {
        let plane = Plane::of_order(4).unwrap();
        let set = PointSet::from_ids(&plane, [7]).unwrap();
        assert_eq!(tangent_lines(&plane, &set, 7).unwrap().len(), 5);
        assert!(matches!(
            tangent_lines(&plane, &set, 8),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn vertexless_triangle_is_blocking_semioval() {
        for q in [3, 4, 5, 7] {
            let plane = Plane::of_order(q).unwrap();
            let t = triangle(&plane);
            assert!(is_blocking_projective(&plane, &t));
            assert!(is_minimal(&plane, &t).unwrap());
            assert!(is_semioval(&plane, &t));
            for p in t.ids() {
                assert_eq!(tangent_lines(&plane, &t, p).unwrap().len(), 1);
                assert!(has_r_infinity_property(&plane, &t, p).unwrap().is_some());
            }
        }
    }

    #[test]
    fn adding_a_point_breaks_minimality() {
        let plane = Plane::of_order(3).unwrap();
        let t = triangle(&plane);
        let extra = (0..plane.size()).find(|&p| !t.contains(p)).unwrap();
        let bigger = t.with(extra);
        assert!(is_blocking_projective(&plane, &bigger));
        assert!(!is_minimal(&plane, &bigger).unwrap());
    }

    #[test]
    fn minimal_requires_blocking() {
        let plane = Plane::of_order(3).unwrap();
        let set = PointSet::from_ids(&plane, [0, 1]).unwrap();
        assert!(matches!(is_minimal(&plane, &set), Err(Error::Domain(_))));
        assert!(matches!(
            has_r_infinity_property(&plane, &set, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn r_infinity_requires_membership() {
        let plane = Plane::of_order(3).unwrap();
        let t = triangle(&plane);
        let outside = (0..plane.size()).find(|&p| !t.contains(p)).unwrap();
        assert!(matches!(
            has_r_infinity_property(&plane, &t, outside),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn removing_r_infinity_point_unblocks_its_tangent() {
        let plane = Plane::of_order(5).unwrap();
        let t = triangle(&plane);
        for p in t.ids() {
            let tangent = has_r_infinity_property(&plane, &t, p).unwrap().unwrap();
            let without = t.without(p);
            assert!(!plane.members(tangent).intersects(&without.mask()));
        }
    }

    #[test]
    fn affine_checks_reject_points_at_infinity() {
        let plane = Plane::of_order(3).unwrap();
        let frame = AffineFrame::new(&plane, 0).unwrap();
        let at_inf = plane.members(0).first().unwrap();
        let set = PointSet::from_ids(&plane, [at_inf]).unwrap();
        assert!(matches!(
            is_blocking_affine(&frame, &set),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn two_crossing_affine_lines_block() {
        // every affine line is parallel to at most one of two crossing lines
        for q in [3, 4, 5] {
            let plane = Plane::of_order(q).unwrap();
            let frame = AffineFrame::new(&plane, 0).unwrap();
            let (d0, c0) = &frame.directions()[0];
            let (d1, c1) = &frame.directions()[1];
            assert_ne!(d0, d1);
            let cross = frame.affine_members(c0[0]) | frame.affine_members(c1[0]);
            let set = PointSet::from_mask(&plane, cross).unwrap();
            assert_eq!(set.size(), 2 * q as usize - 1);
            let brute = frame
                .affine_lines()
                .iter()
                .all(|&l| frame.affine_members(l).intersects(&cross));
            assert!(brute);
            assert!(is_blocking_affine(&frame, &set).unwrap());
        }
    }

    #[test]
    fn report_edge_cases() {
        let plane = Plane::of_order(4).unwrap();
        let empty = tangent_report(&plane, &PointSet::empty());
        assert_eq!(empty.spectrum, vec![21, 0, 0, 0, 0, 0]);
        let all = PointSet::from_mask(&plane, plane.all_points()).unwrap();
        let full = tangent_report(&plane, &all);
        assert_eq!(full.spectrum, vec![0, 0, 0, 0, 0, 21]);
    }

    #[test]
    fn report_json_shape() {
        let plane = Plane::of_order(3).unwrap();
        let t = triangle(&plane);
        let json = serde_json::to_value(tangent_report(&plane, &t)).unwrap();
        assert_eq!(json["spectrum"].as_array().unwrap().len(), 5);
        let per_point = json["tangents_per_point"].as_object().unwrap();
        assert_eq!(per_point.len(), 6);
        assert!(per_point.values().all(|v| v == 1));
    }

    #[test]
    fn triangle_spectrum_q5() {
        let plane = Plane::of_order(5).unwrap();
        let report = tangent_report(&plane, &triangle(&plane));
        assert!(report.x_q_minus_1() >= 3);
        assert_eq!(report.spectrum.iter().sum::<usize>(), 31);
    }
}
