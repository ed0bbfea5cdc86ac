//! Explicit constructions of blocking sets.
//!
//! Every construction is deterministic: whenever a free choice (a line, a
//! point) is allowed, the admissible candidate with the smallest id is taken.
//! [`k_construction`] accepts a seed that instead picks uniformly among the
//! admissible candidates, for diversity testing.
//!
//! Traces record the labelled points and lines of each construction so that
//! outputs can be cross-checked by hand; see [`Labels`].

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::plane::{AffineFrame, LineId, Plane, PointId, PointSet};
use crate::props;

/// Labelled points and lines of a construction, e.g. `"A"`, `"B1"`, `"D2"`
/// for points and `"a"`, `"l"` for lines.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Labels {
    pub points: BTreeMap<String, PointId>,
    pub lines: BTreeMap<String, LineId>,
}

impl Labels {
    fn point(&mut self, name: impl Into<String>, id: PointId) -> &mut Self {
        self.points.insert(name.into(), id);
        self
    }

    fn line(&mut self, name: impl Into<String>, id: LineId) -> &mut Self {
        self.lines.insert(name.into(), id);
        self
    }
}

/// Picks among admissible candidates: smallest id, or seeded uniform choice.
struct Chooser {
    rng: Option<ChaCha8Rng>,
}

impl Chooser {
    fn new(seed: Option<u64>) -> Self {
        Chooser {
            rng: seed.map(ChaCha8Rng::seed_from_u64),
        }
    }

    fn pick(&mut self, mut candidates: Vec<usize>) -> Option<usize> {
        candidates.sort_unstable();
        match &mut self.rng {
            None => candidates.first().copied(),
            Some(rng) => candidates.choose(rng).copied(),
        }
    }
}

fn exhausted(what: &str) -> Error {
    Error::domain(format!("construction exhausted: no admissible {what}"))
}

/// Three lines `a, b, c` forming a triangle, with vertices
/// `C = a∩b`, `B = a∩c`, `A = b∩c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangleTrace {
    pub a: LineId,
    pub b: LineId,
    pub c: LineId,
    pub vertex_a: PointId,
    pub vertex_b: PointId,
    pub vertex_c: PointId,
}

impl TriangleTrace {
    pub fn new(plane: &Plane, a: LineId, b: LineId, c: LineId) -> Result<Self> {
        for l in [a, b, c] {
            plane.line(l)?;
        }
        if a == b || b == c || a == c {
            return Err(Error::domain("triangle sides must be pairwise distinct"));
        }
        let vertex_c = plane.meet(a, b)?;
        if plane.is_on(vertex_c, c) {
            return Err(Error::domain("triangle sides must not be concurrent"));
        }
        Ok(TriangleTrace {
            a,
            b,
            c,
            vertex_a: plane.meet(b, c)?,
            vertex_b: plane.meet(a, c)?,
            vertex_c,
        })
    }

    pub fn vertices(&self) -> [PointId; 3] {
        [self.vertex_a, self.vertex_b, self.vertex_c]
    }

    pub fn labels(&self) -> Labels {
        let mut labels = Labels::default();
        labels
            .line("a", self.a)
            .line("b", self.b)
            .line("c", self.c)
            .point("A", self.vertex_a)
            .point("B", self.vertex_b)
            .point("C", self.vertex_c);
        labels
    }
}

/// The first triangle in id order: lines 0 and 1 and the smallest line
/// missing their meet.
pub fn default_triangle(plane: &Plane) -> (LineId, LineId, LineId) {
    let mut chooser = Chooser::new(None);
    choose_triangle(plane, &mut chooser).expect("every projective plane has a triangle")
}

/// Triangle sides: [`default_triangle`] without a seed, otherwise a seeded
/// uniform choice.
pub fn triangle_sides(plane: &Plane, seed: Option<u64>) -> (LineId, LineId, LineId) {
    let mut chooser = Chooser::new(seed);
    choose_triangle(plane, &mut chooser).expect("every projective plane has a triangle")
}

fn choose_triangle(plane: &Plane, chooser: &mut Chooser) -> Option<(LineId, LineId, LineId)> {
    let n = plane.size();
    let a = chooser.pick((0..n).collect())?;
    let b = chooser.pick((0..n).filter(|&l| l != a).collect())?;
    let meet = plane.meet(a, b).ok()?;
    let c = chooser.pick((0..n).filter(|&l| !plane.is_on(meet, l)).collect())?;
    Some((a, b, c))
}

/// Points lying on exactly one of three non-concurrent lines: `3q - 3` points.
pub fn vertexless_triangle(
    plane: &Plane,
    a: LineId,
    b: LineId,
    c: LineId,
) -> Result<(PointSet, TriangleTrace)> {
    let trace = TriangleTrace::new(plane, a, b, c)?;
    let sides = plane.members(a) | plane.members(b) | plane.members(c);
    let vertices: Mask = trace.vertices().into_iter().collect();
    Ok((PointSet::from_mask(plane, sides - vertices)?, trace))
}

/// Every vertexless triangle of the plane, deduplicated and sorted.
pub fn all_vertexless_triangles(plane: &Plane) -> Vec<PointSet> {
    let n = plane.size();
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            let meet = plane.meet(a, b).unwrap();
            for c in b + 1..n {
                if plane.is_on(meet, c) {
                    continue;
                }
                out.insert(vertexless_triangle(plane, a, b, c).unwrap().0);
            }
        }
    }
    out.into_iter().collect()
}

/// Projective triangles of side 3 in PG(2,3): the three vertices of a
/// triangle plus one further point on each side, closed under the rule that
/// the join of two such points on different sides meets the third side in a
/// point of the set.
pub fn projective_triangles_side3(plane: &Plane) -> Result<Vec<PointSet>> {
    if plane.q() != 3 {
        return Err(Error::domain(
            "projective triangles of side 3 are only built in PG(2,3)",
        ));
    }
    let n = plane.size();
    let mut out = BTreeSet::new();
    for p0 in 0..n {
        for p1 in p0 + 1..n {
            let side2 = plane.line_through(p0, p1)?;
            for p2 in p1 + 1..n {
                if plane.is_on(p2, side2) {
                    continue;
                }
                let sides = [
                    plane.line_through(p1, p2)?,
                    plane.line_through(p2, p0)?,
                    side2,
                ];
                let vertices: Mask = [p0, p1, p2].into_iter().collect();
                let interior: Vec<Vec<PointId>> = sides
                    .iter()
                    .map(|&s| (plane.members(s) - vertices).iter().collect())
                    .collect();
                for &q0 in &interior[0] {
                    for &q1 in &interior[1] {
                        for &q2 in &interior[2] {
                            let chosen = [q0, q1, q2];
                            let set = vertices | chosen.into_iter().collect();
                            if closed_under_joins(plane, &sides, &chosen, set)? {
                                out.insert(PointSet::from_mask(plane, set)?);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn closed_under_joins(
    plane: &Plane,
    sides: &[LineId; 3],
    chosen: &[PointId; 3],
    set: Mask,
) -> Result<bool> {
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let k = 3 - i - j;
            let join = plane.line_through(chosen[i], chosen[j])?;
            let third = if join == sides[k] {
                continue;
            } else {
                plane.meet(join, sides[k])?
            };
            if !set.contains(third) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Labelled configuration of a k-construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KConstructionTrace {
    pub triangle: TriangleTrace,
    /// The line `l` through `A` that is not a side.
    pub ell: LineId,
    /// `l ∩ a`.
    pub a_prime: PointId,
    pub d: Vec<PointId>,
    /// `B_i = B D_i ∩ b`.
    pub b_points: Vec<PointId>,
    /// `C_i = C D_i ∩ c`.
    pub c_points: Vec<PointId>,
}

impl KConstructionTrace {
    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn labels(&self) -> Labels {
        let mut labels = self.triangle.labels();
        labels.line("l", self.ell).point("A'", self.a_prime);
        for (i, ((&d, &b), &c)) in self
            .d
            .iter()
            .zip(&self.b_points)
            .zip(&self.c_points)
            .enumerate()
        {
            labels
                .point(format!("D{}", i + 1), d)
                .point(format!("B{}", i + 1), b)
                .point(format!("C{}", i + 1), c);
        }
        labels
    }

    /// Points of `a` in the set that are not on any line `B_i C_j`, together
    /// with the set's points on `b` and `c`: the points where the
    /// r-infinity property is guaranteed when `2q <= k <= 3q - 5`.
    pub fn guaranteed_r_infinity_points(&self, plane: &Plane, set: &PointSet) -> Vec<PointId> {
        let t = &self.triangle;
        let mut excluded = Mask::EMPTY;
        for &bi in &self.b_points {
            for &cj in &self.c_points {
                let join = plane.line_through(bi, cj).unwrap();
                excluded.insert(plane.meet(join, t.a).unwrap());
            }
        }
        let on_a = plane.members(t.a) - excluded;
        let region = on_a | plane.members(t.b) | plane.members(t.c);
        (set.mask() & region).iter().collect()
    }
}

/// Modified vertexless triangle of size `3q - 3 - n`, for `q >= 4` and
/// `2 <= n <= q - 2`.
///
/// With `T` the vertexless triangle on `a, b, c`, a line `l` through `A`
/// and points `D_1..D_n` on `l` off the sides, the result is
/// `(T ∪ {D_i}) \ {B_i, C_i}`. For odd q the second point is forced:
/// `C_2 = A'B_1 ∩ c` and `D_2 = C C_2 ∩ l`. For even q, and for `D_3..D_n`
/// in both cases, any remaining point of `l` off the sides is admissible.
pub fn k_construction(
    plane: &Plane,
    n: usize,
    seed: Option<u64>,
) -> Result<(PointSet, KConstructionTrace)> {
    let q = plane.q();
    if q < 4 {
        return Err(Error::domain(format!(
            "k-construction needs q >= 4, got q = {q}"
        )));
    }
    if n < 2 || n > q - 2 {
        return Err(Error::domain(format!(
            "k-construction needs 2 <= n <= q - 2 = {}, got n = {n}",
            q - 2
        )));
    }
    let mut chooser = Chooser::new(seed);
    let (a, b, c) = choose_triangle(plane, &mut chooser).ok_or_else(|| exhausted("triangle"))?;
    let (tri_set, triangle) = vertexless_triangle(plane, a, b, c)?;
    let (vertex_a, vertex_b, vertex_c) = (triangle.vertex_a, triangle.vertex_b, triangle.vertex_c);

    let ell = chooser
        .pick(
            plane
                .lines_through(vertex_a)
                .iter()
                .copied()
                .filter(|&l| l != b && l != c)
                .collect(),
        )
        .ok_or_else(|| exhausted("line through A"))?;
    let a_prime = plane.meet(ell, a)?;
    let mut free: Vec<PointId> = plane
        .members(ell)
        .iter()
        .filter(|&p| p != vertex_a && p != a_prime)
        .collect();

    let b_of = |d: PointId| -> Result<PointId> { plane.meet(plane.line_through(vertex_b, d)?, b) };
    let c_of = |d: PointId| -> Result<PointId> { plane.meet(plane.line_through(vertex_c, d)?, c) };

    let mut d = Vec::with_capacity(n);
    let d1 = chooser.pick(free.clone()).ok_or_else(|| exhausted("D1"))?;
    free.retain(|&p| p != d1);
    d.push(d1);

    if q % 2 == 1 {
        let b1 = b_of(d1)?;
        let c2 = plane.meet(plane.line_through(a_prime, b1)?, c)?;
        let d2 = plane.meet(plane.line_through(c2, vertex_c)?, ell)?;
        if !free.contains(&d2) {
            return Err(Error::domain(format!(
                "construction exhausted: forced D2 = {d2} is not a fresh point of l off the sides"
            )));
        }
        debug_assert_eq!(c_of(d2)?, c2);
        free.retain(|&p| p != d2);
        d.push(d2);
    }
    while d.len() < n {
        let next = chooser
            .pick(free.clone())
            .ok_or_else(|| exhausted("point D_i"))?;
        free.retain(|&p| p != next);
        d.push(next);
    }

    let b_points = d.iter().map(|&x| b_of(x)).collect::<Result<Vec<_>>>()?;
    let c_points = d.iter().map(|&x| c_of(x)).collect::<Result<Vec<_>>>()?;

    let added: Mask = d.iter().copied().collect();
    let removed: Mask = b_points.iter().chain(&c_points).copied().collect();
    let set = PointSet::from_mask(plane, (tri_set.mask() | added) - removed)?;
    if set.size() != 3 * q - 3 - n {
        return Err(Error::domain(format!(
            "construction produced {} points instead of {}",
            set.size(),
            3 * q - 3 - n
        )));
    }

    Ok((
        set,
        KConstructionTrace {
            triangle,
            ell,
            a_prime,
            d,
            b_points,
            c_points,
        },
    ))
}

/// Labelled configuration of an affine example, plus the direction (a point
/// of the line at infinity) of the transversal `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineTrace {
    pub labels: Labels,
    pub direction: PointId,
}

/// Two parallel affine lines `a, b` and a transversal `c`.
fn affine_frame_lines(frame: &AffineFrame<'_>) -> Result<(LineId, LineId, LineId)> {
    let a = frame.affine_lines()[0];
    let class = frame.parallel_class(frame.direction_of(a)?)?;
    let b = class
        .iter()
        .copied()
        .filter(|&l| l != a)
        .min()
        .ok_or_else(|| exhausted("parallel line b"))?;
    let c = frame
        .affine_lines()
        .iter()
        .copied()
        .find(|l| !class.contains(l))
        .ok_or_else(|| exhausted("transversal c"))?;
    Ok((a, b, c))
}

/// `(a ∪ b ∪ c) \ {A, B}` for parallel affine lines `a, b` and a transversal
/// `c` with `A = b∩c`, `B = a∩c`: a minimal affine blocking set of size
/// `3q - 4`.
pub fn affine_3q4(frame: &AffineFrame<'_>) -> Result<(PointSet, AffineTrace)> {
    let plane = frame.plane();
    let q = plane.q();
    if q < 3 {
        return Err(Error::domain(format!("needs q >= 3, got q = {q}")));
    }
    let (a, b, c) = affine_frame_lines(frame)?;
    let pa = plane.meet(b, c)?;
    let pb = plane.meet(a, c)?;
    let union = frame.affine_members(a) | frame.affine_members(b) | frame.affine_members(c);
    let set = PointSet::from_mask(plane, union)?.without(pa).without(pb);
    debug_assert_eq!(set.size(), 3 * q - 4);

    let direction = frame.direction_of(c)?;
    let mut labels = Labels::default();
    labels
        .line("a", a)
        .line("b", b)
        .line("c", c)
        .point("A", pa)
        .point("B", pb)
        .point("P", direction);
    Ok((set, AffineTrace { labels, direction }))
}

/// Affine image of a `(3q - 5)`-construction: size `3q - 6`, for `q >= 5`.
///
/// With `a, b` parallel, `c` a transversal, `A = b∩c`, `B = a∩c`, a line `l`
/// through `A` and `D_1` on `l` off `a` and `b`:
/// `A' = l∩a`, `C_1` is where the parallel to `a` through `D_1` meets `c`,
/// `B_1 = B D_1 ∩ b`, `C_2 = A'B_1 ∩ c`, `D_2` is where the parallel to `a`
/// through `C_2` meets `l`, and `B_2 = B D_2 ∩ b`. The set is
/// `(a ∪ b ∪ c ∪ {D_1, D_2}) \ {A, B, B_1, B_2, C_1, C_2}`.
///
/// In even characteristic the rule for `D_2` collapses onto `D_1`; the
/// smallest admissible point of `l` is used instead.
pub fn affine_3q6(frame: &AffineFrame<'_>) -> Result<(PointSet, AffineTrace)> {
    let plane = frame.plane();
    let q = plane.q();
    if q < 5 {
        return Err(Error::domain(format!("needs q >= 5, got q = {q}")));
    }
    let (a, b, c) = affine_frame_lines(frame)?;
    let pa = plane.meet(b, c)?;
    let pb = plane.meet(a, c)?;
    let c_of = |d: PointId| -> Result<PointId> { plane.meet(frame.parallel_through(d, a)?, c) };
    let b_of = |d: PointId| -> Result<PointId> { plane.meet(plane.line_through(pb, d)?, b) };

    // For odd q, D2 is determined by D1 and must avoid A, A' and D1; take
    // the first (l, D1) where it does. For even q the forced point is D1
    // itself and any other admissible D2 works.
    let mut choice = None;
    'outer: for &ell in plane.lines_through(pa) {
        if ell == b || ell == c || ell == frame.r_inf() {
            continue;
        }
        let a_prime = plane.meet(ell, a)?;
        let admissible: Vec<PointId> = frame
            .affine_members(ell)
            .iter()
            .filter(|&p| p != pa && p != a_prime)
            .collect();
        for &d1 in &admissible {
            let b1 = b_of(d1)?;
            let c2_forced = plane.meet(plane.line_through(a_prime, b1)?, c)?;
            let d2_forced = plane.meet(frame.parallel_through(c2_forced, a)?, ell)?;
            let d2 = if q.is_multiple_of(2) {
                admissible.iter().copied().find(|&p| p != d1)
            } else {
                Some(d2_forced).filter(|p| *p != d1 && admissible.contains(p))
            };
            if let Some(d2) = d2 {
                choice = Some((ell, a_prime, d1, d2, b1));
                break 'outer;
            }
        }
    }
    let (ell, a_prime, d1, d2, b1) = choice.ok_or_else(|| exhausted("D1, D2"))?;
    let c1 = c_of(d1)?;
    let c2 = c_of(d2)?;
    let b2 = b_of(d2)?;

    let union = frame.affine_members(a) | frame.affine_members(b) | frame.affine_members(c);
    let removed: Mask = [pa, pb, b1, b2, c1, c2].into_iter().collect();
    let set = PointSet::from_mask(plane, (union | Mask::from_iter([d1, d2])) - removed)?;
    if set.size() != 3 * q - 6 {
        return Err(Error::domain(format!(
            "construction produced {} points instead of {}",
            set.size(),
            3 * q - 6
        )));
    }

    let direction = frame.direction_of(c)?;
    let mut labels = Labels::default();
    labels
        .line("a", a)
        .line("b", b)
        .line("c", c)
        .line("l", ell)
        .point("A", pa)
        .point("B", pb)
        .point("A'", a_prime)
        .point("D1", d1)
        .point("D2", d2)
        .point("B1", b1)
        .point("B2", b2)
        .point("C1", c1)
        .point("C2", c2)
        .point("P", direction);
    Ok((set, AffineTrace { labels, direction }))
}

/// The Baer subplane of PG(2,4) spanned by the standard quadrilateral
/// `(1,0,0), (0,1,0), (0,0,1), (1,1,1)`, closed under joins and meets.
pub fn baer_subplane_q4(plane: &Plane) -> Result<PointSet> {
    if plane.q() != 4 {
        return Err(Error::domain(format!(
            "the Baer patch is defined for q = 4, got q = {}",
            plane.q()
        )));
    }
    let frame: Vec<PointId> = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
        .into_iter()
        .map(|c| plane.point_id(c).expect("normalized"))
        .collect();
    let mut points: BTreeSet<PointId> = frame.into_iter().collect();
    loop {
        let pts: Vec<PointId> = points.iter().copied().collect();
        let mut lines = BTreeSet::new();
        for (i, &x) in pts.iter().enumerate() {
            for &y in &pts[i + 1..] {
                lines.insert(plane.line_through(x, y)?);
            }
        }
        let lines: Vec<LineId> = lines.into_iter().collect();
        let before = points.len();
        for (i, &l) in lines.iter().enumerate() {
            for &m in &lines[i + 1..] {
                points.insert(plane.meet(l, m)?);
            }
        }
        if points.len() == before {
            break;
        }
    }
    if points.len() != 7 {
        return Err(Error::domain(format!(
            "quadrilateral closure has {} points, expected 7",
            points.len()
        )));
    }
    PointSet::from_ids(plane, points)
}

/// Output of [`baer_patch_q4`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaerPatch {
    pub set: PointSet,
    pub baer: PointSet,
    /// The point `T` where the set has the r-infinity property.
    pub t_point: PointId,
    /// The unique tangent to the set at `T`: the Baer tangent at `T` other
    /// than `t`.
    pub tangent: LineId,
    pub r_point: PointId,
    pub t_line: LineId,
    pub r_tangents: [LineId; 2],
    pub t_points: [PointId; 2],
}

impl BaerPatch {
    pub fn labels(&self) -> Labels {
        let mut labels = Labels::default();
        labels
            .point("R", self.r_point)
            .point("T", self.t_point)
            .point("T1", self.t_points[0])
            .point("T2", self.t_points[1])
            .line("t", self.t_line)
            .line("r1", self.r_tangents[0])
            .line("r2", self.r_tangents[1])
            .line("r_inf", self.tangent);
        labels
    }
}

/// `(B \ {R}) ∪ {T1, T2}` for a Baer subplane `B` of PG(2,4), points
/// `R, T` of `B`, a tangent `t` to `B` at `T`, the two tangents `r1, r2` at
/// `R`, and `Ti = t ∩ ri`. Size 8.
pub fn baer_patch_q4(plane: &Plane) -> Result<BaerPatch> {
    let baer = baer_subplane_q4(plane)?;
    let ids = baer.ids();
    let (r_point, t_point) = (ids[0], ids[1]);
    let t_tangents = props::tangent_lines(plane, &baer, t_point)?;
    let r_tangents = props::tangent_lines(plane, &baer, r_point)?;
    let (&[t_line, other], &[r1, r2]) = (t_tangents.as_slice(), r_tangents.as_slice()) else {
        return Err(Error::domain(
            "a Baer subplane of PG(2,4) has two tangents at each point",
        ));
    };
    let t1 = plane.meet(t_line, r1)?;
    let t2 = plane.meet(t_line, r2)?;
    let set = baer.without(r_point).with(t1).with(t2);
    Ok(BaerPatch {
        set,
        baer,
        t_point,
        tangent: other,
        r_point,
        t_line,
        r_tangents: [r1, r2],
        t_points: [t1, t2],
    })
}

/// Removes `point` from a minimal projective blocking set with the
/// r-infinity property at `point`, viewing the rest in the affine plane
/// whose line at infinity is the tangent at `point`.
pub fn alpha<'p>(
    plane: &'p Plane,
    set: &PointSet,
    point: PointId,
) -> Result<(AffineFrame<'p>, PointSet)> {
    if !props::is_blocking_projective(plane, set) {
        return Err(Error::domain(
            "alpha: the set is not a projective blocking set",
        ));
    }
    if !set.contains(point) {
        return Err(Error::domain(format!(
            "alpha: point {point} is not in the set"
        )));
    }
    if !props::is_minimal(plane, set)? {
        return Err(Error::domain("alpha: the set is not minimal"));
    }
    let tangent = props::has_r_infinity_property(plane, set, point)?.ok_or_else(|| {
        Error::domain(format!(
            "alpha: the set lacks the r-infinity property at point {point}"
        ))
    })?;
    let frame = AffineFrame::new(plane, tangent)?;
    Ok((frame, set.without(point)))
}

/// Adds the direction `dir` back to a minimal affine blocking set with the
/// Pi-property with respect to `dir`.
pub fn alpha_inverse(frame: &AffineFrame<'_>, set: &PointSet, dir: PointId) -> Result<PointSet> {
    frame.parallel_class(dir)?;
    if !props::is_blocking_affine(frame, set)? {
        return Err(Error::domain(
            "alpha inverse: the set is not an affine blocking set",
        ));
    }
    if !props::is_minimal(frame, set)? {
        return Err(Error::domain("alpha inverse: the set is not minimal"));
    }
    if !props::has_pi_property(frame, set, dir)? {
        return Err(Error::domain(format!(
            "alpha inverse: the set lacks the Pi-property for direction {dir}"
        )));
    }
    Ok(set.with(dir))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::props::*;

    #[test]
    fn triangle_sizes_and_errors() {
        for q in [3, 5] {
            let plane = Plane::of_order(q).unwrap();
            let (a, b, c) = default_triangle(&plane);
            let (set, trace) = vertexless_triangle(&plane, a, b, c).unwrap();
            assert_eq!(set.size(), 3 * q as usize - 3);
            for v in trace.vertices() {
                assert!(!set.contains(v));
            }
        }
        let plane = Plane::of_order(3).unwrap();
        // lines 1..=3 all pass through point 0 = (0,0,1)
        let concurrent: Vec<_> = plane.lines_through(0).to_vec();
        assert!(matches!(
            vertexless_triangle(&plane, concurrent[0], concurrent[1], concurrent[2]),
            Err(Error::Domain(_))
        ));
        assert!(vertexless_triangle(&plane, 0, 0, 5).is_err());
    }

    #[test]
    fn k_construction_rejects_bad_parameters() {
        let p3 = Plane::of_order(3).unwrap();
        assert!(matches!(
            k_construction(&p3, 2, None),
            Err(Error::Domain(_))
        ));
        let p5 = Plane::of_order(5).unwrap();
        assert!(matches!(
            k_construction(&p5, 1, None),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            k_construction(&p5, 4, None),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn k_construction_trace_invariants() {
        for q in [4u64, 5, 7, 8, 9] {
            let plane = Plane::of_order(q).unwrap();
            for n in 2..=q as usize - 2 {
                for seed in [None, Some(1), Some(2)] {
                    let (set, tr) = k_construction(&plane, n, seed).unwrap();
                    let t = &tr.triangle;
                    assert!(plane.is_on(t.vertex_a, tr.ell));
                    assert!(![t.a, t.b, t.c].contains(&tr.ell));
                    assert_eq!(tr.a_prime, plane.meet(tr.ell, t.a).unwrap());
                    for i in 0..n {
                        let d = tr.d[i];
                        assert!(plane.is_on(d, tr.ell));
                        for side in [t.a, t.b, t.c] {
                            assert!(!plane.is_on(d, side));
                        }
                        let bl = plane.line_through(t.vertex_b, d).unwrap();
                        assert_eq!(tr.b_points[i], plane.meet(bl, t.b).unwrap());
                        let cl = plane.line_through(t.vertex_c, d).unwrap();
                        assert_eq!(tr.c_points[i], plane.meet(cl, t.c).unwrap());
                        assert!(set.contains(d));
                    }
                    let distinct: BTreeSet<_> = tr.d.iter().collect();
                    assert_eq!(distinct.len(), n);
                    if q % 2 == 1 {
                        let j = plane.line_through(tr.a_prime, tr.b_points[0]).unwrap();
                        let c2 = plane.meet(j, t.c).unwrap();
                        assert_eq!(tr.c_points[1], c2);
                    }
                }
            }
        }
    }

    #[test]
    fn k_construction_labels() {
        let plane = Plane::of_order(5).unwrap();
        let (_, tr) = k_construction(&plane, 2, None).unwrap();
        let labels = tr.labels();
        for key in ["A", "B", "C", "A'", "D1", "D2", "B1", "B2", "C1", "C2"] {
            assert!(labels.points.contains_key(key), "{key}");
        }
        for key in ["a", "b", "c", "l"] {
            assert!(labels.lines.contains_key(key), "{key}");
        }
    }

    #[test]
    fn d_points_have_two_tangents() {
        let plane = Plane::of_order(5).unwrap();
        let (set, tr) = k_construction(&plane, 2, None).unwrap();
        let t = &tr.triangle;
        let d1 = tr.d[0];
        let mut tangents = tangent_lines(&plane, &set, d1).unwrap();
        tangents.sort();
        let mut expected = vec![
            plane.line_through(t.vertex_b, tr.b_points[0]).unwrap(),
            plane.line_through(t.vertex_c, tr.c_points[0]).unwrap(),
        ];
        expected.sort();
        assert_eq!(tangents, expected);
    }

    #[test]
    fn affine_examples_q5() {
        let plane = Plane::of_order(5).unwrap();
        let frame = AffineFrame::new(&plane, 0).unwrap();
        let (s4, tr4) = affine_3q4(&frame).unwrap();
        assert_eq!(s4.size(), 11);
        assert!(is_blocking_affine(&frame, &s4).unwrap());
        assert!(is_minimal(&frame, &s4).unwrap());
        assert!(has_pi_strong_property(&frame, &s4, tr4.direction).unwrap());

        let (s6, tr6) = affine_3q6(&frame).unwrap();
        assert_eq!(s6.size(), 9);
        assert!(is_blocking_affine(&frame, &s6).unwrap());
        assert!(is_minimal(&frame, &s6).unwrap());
        assert!(has_pi_property(&frame, &s6, tr6.direction).unwrap());
        assert!(!has_pi_strong_property(&frame, &s6, tr6.direction).unwrap());
        for d in ["D1", "D2"] {
            let id = tr6.labels.points[d];
            let outside: Vec<_> = affine_tangent_lines(&frame, &s6, id)
                .unwrap()
                .into_iter()
                .filter(|&l| frame.direction_of(l).unwrap() != tr6.direction)
                .collect();
            assert_eq!(outside.len(), 2, "{d}");
        }
    }

    #[test]
    fn affine_examples_other_orders() {
        for q in [7u64, 8, 9] {
            let plane = Plane::of_order(q).unwrap();
            let frame = AffineFrame::new(&plane, 3).unwrap();
            let (s6, tr6) = affine_3q6(&frame).unwrap();
            assert_eq!(s6.size(), 3 * q as usize - 6);
            assert!(is_minimal(&frame, &s6).unwrap());
            assert!(has_pi_property(&frame, &s6, tr6.direction).unwrap());
        }
        let p4 = Plane::of_order(4).unwrap();
        let f4 = AffineFrame::new(&p4, 0).unwrap();
        assert!(matches!(affine_3q6(&f4), Err(Error::Domain(_))));
        assert_eq!(affine_3q4(&f4).unwrap().0.size(), 8);
    }

    #[test]
    fn baer_subplane_is_gf2_points() {
        let plane = Plane::of_order(4).unwrap();
        let baer = baer_subplane_q4(&plane).unwrap();
        let gf2: Vec<_> = plane
            .points()
            .iter()
            .filter(|p| p.coords.iter().all(|&c| c < 2))
            .map(|p| p.id)
            .collect();
        assert_eq!(baer.ids(), gf2);
        for line in plane.lines() {
            let k = (line.members & baer.mask()).count();
            assert!(k == 1 || k == 3);
        }
    }

    #[test]
    fn baer_patch_wrong_order() {
        let plane = Plane::of_order(5).unwrap();
        assert!(matches!(baer_patch_q4(&plane), Err(Error::Domain(_))));
    }

    #[test]
    fn alpha_rejects_bad_inputs() {
        let plane = Plane::of_order(5).unwrap();
        let (set, tr) = k_construction(&plane, 3, None).unwrap();
        // size 2q - 1: no point has the r-infinity property
        let err = alpha(&plane, &set, tr.d[0]).unwrap_err();
        assert!(err.to_string().contains("r-infinity"));
        let not_blocking = PointSet::from_ids(&plane, [0, 1]).unwrap();
        assert!(alpha(&plane, &not_blocking, 0).is_err());
    }

    #[test]
    fn alpha_inverse_rejects_affine_direction() {
        let plane = Plane::of_order(5).unwrap();
        let frame = AffineFrame::new(&plane, 0).unwrap();
        let (set, _) = affine_3q4(&frame).unwrap();
        let affine_point = set.ids()[0];
        assert!(matches!(
            alpha_inverse(&frame, &set, affine_point),
            Err(Error::Domain(_))
        ));
    }
}
