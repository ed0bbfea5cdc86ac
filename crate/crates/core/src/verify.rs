//! Per-order theorem checks bundled for the `verify-paper` command.
//!
//! Constructions are checked for every order; exhaustive and pruned
//! searches only run for `q <= 5`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::constructs::{self, default_triangle};
use crate::error::{Error, Result};
use crate::plane::{AffineFrame, Plane, PointSet};
use crate::props;
use crate::search::{self, Filter, SearchOptions, SearchQuery};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub q: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Default line at infinity for affine checks: `x0 = 0`.
pub fn default_r_inf(plane: &Plane) -> usize {
    plane.q() + 1
}

pub fn verify_paper(q: u64, opts: &SearchOptions) -> Result<VerifyReport> {
    if q < 3 {
        return Err(Error::domain(format!(
            "blocking sets exist only for q >= 3, got q = {q}"
        )));
    }
    let plane = Plane::of_order(q)?;
    let q = plane.q();
    let mut checks = Checks(Vec::new());

    triangle_checks(&plane, &mut checks)?;
    affine_checks(&plane, &mut checks)?;
    if q >= 4 {
        k_construction_checks(&plane, &mut checks)?;
    }
    match q {
        3 => pg3_checks(&plane, opts, &mut checks)?,
        4 => pg4_checks(&plane, opts, &mut checks)?,
        5 => pg5_checks(&plane, opts, &mut checks)?,
        _ => {}
    }
    if q <= 5 {
        let frame = AffineFrame::new(&plane, default_r_inf(&plane))?;
        let cert = search::verify_affine_bound(&frame, opts)?;
        checks.add(
            "affine lower bound 2q-1",
            cert.complete && cert.matches.is_empty(),
            format!("no affine blocking set of size <= {}", 2 * q - 2),
        );
    }

    let passed = checks.0.iter().all(|c| c.passed);
    Ok(VerifyReport {
        q,
        passed,
        checks: checks.0,
    })
}

fn triangle_checks(plane: &Plane, checks: &mut Checks) -> Result<()> {
    let q = plane.q();
    let (a, b, c) = default_triangle(plane);
    let (set, _) = constructs::vertexless_triangle(plane, a, b, c)?;
    let r_inf_all = props::r_infinity_points(plane, &set)?.len() == set.size();
    checks.add(
        "vertexless triangle",
        set.size() == 3 * q - 3
            && props::is_minimal(plane, &set)?
            && props::is_blocking_semioval(plane, &set)
            && r_inf_all,
        format!(
            "size {}, minimal blocking semioval, r-infinity at every point",
            set.size()
        ),
    );
    Ok(())
}

fn affine_checks(plane: &Plane, checks: &mut Checks) -> Result<()> {
    let q = plane.q();
    let frame = AffineFrame::new(plane, default_r_inf(plane))?;
    let (s4, t4) = constructs::affine_3q4(&frame)?;
    checks.add(
        "affine 3q-4 example",
        s4.size() == 3 * q - 4
            && props::is_minimal(&frame, &s4)?
            && props::has_pi_strong_property(&frame, &s4, t4.direction)?,
        format!("size {}, minimal, strong Pi-property", s4.size()),
    );
    if q >= 5 {
        let (s6, t6) = constructs::affine_3q6(&frame)?;
        checks.add(
            "affine 3q-6 example",
            s6.size() == 3 * q - 6
                && props::is_minimal(&frame, &s6)?
                && props::has_pi_property(&frame, &s6, t6.direction)?
                && !props::has_pi_strong_property(&frame, &s6, t6.direction)?,
            format!(
                "size {}, minimal, Pi-property but not the strong one",
                s6.size()
            ),
        );
    }
    Ok(())
}

fn k_construction_checks(plane: &Plane, checks: &mut Checks) -> Result<()> {
    let q = plane.q();
    let mut sizes_ok = true;
    let mut r_inf_ok = true;
    for n in 2..=q - 2 {
        let (set, trace) = constructs::k_construction(plane, n, None)?;
        sizes_ok &= set.size() == 3 * q - 3 - n && props::is_minimal(plane, &set)?;
        if set.size() >= 2 * q {
            for p in trace.guaranteed_r_infinity_points(plane, &set) {
                r_inf_ok &= props::has_r_infinity_property(plane, &set, p)?.is_some();
            }
        }
    }
    checks.add(
        "k-construction size law",
        sizes_ok,
        format!("sizes 3q-3-n minimal for n = 2..={}", q - 2),
    );
    checks.add(
        "k-construction r-infinity points",
        r_inf_ok,
        "r-infinity property at the guaranteed points when 2q <= k <= 3q-5",
    );
    Ok(())
}

/// Every r-infinity point of every set maps under alpha to an affine
/// minimal blocking set with the Pi-property (strong for semiovals), and
/// alpha inverse restores the set. Returns the number of pairs checked.
pub fn alpha_suite(plane: &Plane, sets: &[PointSet]) -> Result<std::result::Result<usize, String>> {
    let mut pairs = 0;
    for set in sets {
        let semioval = props::is_semioval(plane, set);
        for (p, _) in props::r_infinity_points(plane, set)? {
            let (frame, image) = constructs::alpha(plane, set, p)?;
            let ok = props::is_blocking_affine(&frame, &image)?
                && props::is_minimal(&frame, &image)?
                && props::has_pi_property(&frame, &image, p)?
                && (!semioval || props::has_pi_strong_property(&frame, &image, p)?)
                && constructs::alpha_inverse(&frame, &image, p)? == *set;
            if !ok {
                return Ok(Err(format!("failed for {:?} at point {p}", set.ids())));
            }
            pairs += 1;
        }
    }
    Ok(Ok(pairs))
}

fn minimal_sets(plane: &Plane, opts: &SearchOptions) -> Result<Vec<PointSet>> {
    let n = plane.size();
    let cert = search::enumerate(
        plane,
        &SearchQuery::projective(1, n, &[Filter::Blocking, Filter::Minimal]),
        opts,
    )?;
    cert.point_sets(plane)
}

fn add_alpha(plane: &Plane, sets: &[PointSet], checks: &mut Checks) -> Result<()> {
    match alpha_suite(plane, sets)? {
        Ok(pairs) => checks.add(
            "alpha bijection",
            true,
            format!("{pairs} (set, point) pairs"),
        ),
        Err(msg) => checks.add("alpha bijection", false, msg),
    }
    Ok(())
}

fn pg3_checks(plane: &Plane, opts: &SearchOptions, checks: &mut Checks) -> Result<()> {
    let sets = minimal_sets(plane, opts)?;
    let found: BTreeSet<PointSet> = sets.iter().copied().collect();
    let triangles: BTreeSet<PointSet> = constructs::all_vertexless_triangles(plane)
        .into_iter()
        .collect();
    let mut all_r_inf = true;
    for s in &sets {
        all_r_inf &= props::r_infinity_points(plane, s)?.len() == s.size();
    }
    checks.add(
        "PG(2,3) classification",
        sets.iter().all(|s| s.size() == 6) && found == triangles && all_r_inf,
        format!(
            "{} minimal blocking sets, all vertexless triangles of size 6 with the r-infinity property everywhere",
            sets.len()
        ),
    );
    add_alpha(plane, &sets, checks)
}

fn pg4_checks(plane: &Plane, opts: &SearchOptions, checks: &mut Checks) -> Result<()> {
    let sets = minimal_sets(plane, opts)?;
    let sizes: BTreeSet<usize> = sets.iter().map(|s| s.size()).collect();
    checks.add(
        "PG(2,4) size spectrum",
        sizes == BTreeSet::from([7, 8, 9]),
        format!("sizes {sizes:?}"),
    );
    let mut with_r_inf = Vec::new();
    let mut r_inf_at_7 = 0;
    for s in &sets {
        if !props::r_infinity_points(plane, s)?.is_empty() {
            if s.size() == 7 {
                r_inf_at_7 += 1;
            }
            with_r_inf.push(*s);
        }
    }
    checks.add(
        "no r-infinity property at k = 2q-1",
        r_inf_at_7 == 0,
        format!("{r_inf_at_7} size-7 sets with the property"),
    );
    let patch = constructs::baer_patch_q4(plane)?;
    checks.add(
        "Baer patch",
        sets.contains(&patch.set)
            && props::has_r_infinity_property(plane, &patch.set, patch.t_point)?
                == Some(patch.tangent),
        "size-8 match with the r-infinity property at T",
    );
    add_alpha(plane, &with_r_inf, checks)
}

fn pg5_checks(plane: &Plane, opts: &SearchOptions, checks: &mut Checks) -> Result<()> {
    let (s10, t10) = constructs::k_construction(plane, 2, None)?;
    let on_c: Vec<_> = (s10.mask() & plane.members(t10.triangle.c))
        .iter()
        .collect();
    let mut ok = s10.size() == 10 && !props::is_semioval(plane, &s10);
    for &p in &on_c {
        ok &= props::has_r_infinity_property(plane, &s10, p)?.is_some();
    }
    checks.add(
        "k = 10 has r-infinity on c",
        ok,
        format!("r-infinity at {} points of c, not a semioval", on_c.len()),
    );

    let (s9, _) = constructs::k_construction(plane, 3, None)?;
    checks.add(
        "k = 9 lacks r-infinity",
        s9.size() == 9 && props::r_infinity_points(plane, &s9)?.is_empty(),
        "no point of the size-9 set has a unique tangent",
    );

    let semioval = search::enumerate(
        plane,
        &SearchQuery::projective(
            11,
            11,
            &[Filter::Blocking, Filter::Minimal, Filter::Semioval],
        )
        .with_limit(1),
        opts,
    )?
    .point_sets(plane)?;
    let found = match semioval.first() {
        Some(s) => {
            props::is_blocking_semioval(plane, s) && props::r_infinity_points(plane, s)?.len() == 11
        }
        None => false,
    };
    let (a, b, c) = default_triangle(plane);
    let (s12, _) = constructs::vertexless_triangle(plane, a, b, c)?;
    checks.add(
        "r-infinity coverage for k = 10, 11, 12",
        found && props::r_infinity_points(plane, &s12)?.len() == 12,
        "k-construction, searched blocking semioval, vertexless triangle",
    );

    let report = search::spectrum_report(plane, 9, 10, opts)?;
    let r9 = report.row(9).map_or(usize::MAX, |r| r.r_inf);
    let r10 = report.row(10).map_or(0, |r| r.r_inf);
    checks.add(
        "r-infinity spectrum at k = 9, 10",
        report.complete && r9 == 0 && r10 > 0,
        format!("{r9} sets at k = 9, {r10} at k = 10"),
    );
    Ok(())
}
