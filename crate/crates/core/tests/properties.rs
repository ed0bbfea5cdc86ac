use planeforge::constructs;
use planeforge::props;
use planeforge::search::{self, Filter, SearchOptions, SearchQuery};
use planeforge::{AffineFrame, FieldSpec, Mask, Plane, PointSet};
use proptest::prelude::*;

const ORDERS: [u64; 6] = [3, 4, 5, 7, 8, 9];

fn plane(q: u64) -> Plane {
    Plane::of_order(q).unwrap()
}

fn order() -> impl Strategy<Value = u64> {
    prop::sample::select(ORDERS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_ops_agree_with_checked_api(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16]), a in 0u32..16, b in 0u32..16) {
        let f = FieldSpec::with_order(q).unwrap();
        let (a, b) = (a % q as u32, b % q as u32);
        let (x, y) = (f.element(a).unwrap(), f.element(b).unwrap());
        prop_assert_eq!(f.add(x, y).unwrap().index(), f.add_index(a, b));
        prop_assert_eq!(f.mul(x, y).unwrap().index(), f.mul_index(a, b));
        prop_assert_eq!(f.add(f.sub(x, y).unwrap(), y).unwrap(), x);
        if b != 0 {
            let inv = f.inv(y).unwrap();
            prop_assert_eq!(f.mul(f.mul(x, y).unwrap(), inv).unwrap(), x);
        }
    }

    #[test]
    fn spectrum_identities(q in order(), bits in any::<u128>()) {
        let p = plane(q);
        let mask = Mask::from_u128(bits) & p.all_points();
        let set = PointSet::from_mask(&p, mask).unwrap();
        let report = props::tangent_report(&p, &set);
        let q = p.q();
        prop_assert_eq!(report.spectrum.iter().sum::<usize>(), p.size());
        let weighted: usize = report.spectrum.iter().enumerate().map(|(j, x)| j * x).sum();
        prop_assert_eq!(weighted, set.size() * (q + 1));
        // incidences of pairs of set points: each pair lies on one line
        let pairs: usize = report.spectrum.iter().enumerate().map(|(j, x)| j * j.saturating_sub(1) / 2 * x).sum();
        prop_assert_eq!(pairs, set.size() * set.size().saturating_sub(1) / 2);
    }

    #[test]
    fn join_and_meet_are_incident(q in order(), a in 0usize..91, b in 0usize..91) {
        let p = plane(q);
        let (a, b) = (a % p.size(), b % p.size());
        prop_assume!(a != b);
        let l = p.line_through(a, b).unwrap();
        prop_assert!(p.is_on(a, l) && p.is_on(b, l));
        let m = p.meet(a, b).unwrap();
        prop_assert!(p.is_on(m, a) && p.is_on(m, b));
    }

    #[test]
    fn minimal_means_every_point_has_a_tangent(q in prop::sample::select(vec![3u64, 4]), bits in any::<u32>()) {
        let p = plane(q);
        let mask = Mask::from_u128(bits as u128) & p.all_points();
        let set = PointSet::from_mask(&p, mask).unwrap();
        if props::is_blocking(&p, &set) {
            let by_tangents = set.ids().iter().all(|&x| !props::tangent_lines(&p, &set, x).unwrap().is_empty());
            let by_removal = set.ids().iter().all(|&x| !props::is_blocking(&p, &set.without(x)));
            prop_assert_eq!(props::is_minimal(&p, &set).unwrap(), by_tangents);
            prop_assert_eq!(by_tangents, by_removal);
        } else {
            prop_assert!(props::is_minimal(&p, &set).is_err());
        }
    }

    #[test]
    fn k_construction_seeds(q in prop::sample::select(vec![5u64, 7, 8, 9]), n in 2usize..8, seed in any::<u64>()) {
        let p = plane(q);
        let q = p.q();
        let n = 2 + n % (q - 3);
        let (set, trace) = constructs::k_construction(&p, n, Some(seed)).unwrap();
        prop_assert_eq!(set.size(), 3 * q - 3 - n);
        prop_assert!(props::is_minimal(&p, &set).unwrap());
        prop_assert_eq!(trace.n(), n);
    }
}

#[test]
fn every_construction_is_rediscovered_by_search() {
    let opts = SearchOptions::default();
    for q in [3u64, 4] {
        let p = plane(q);
        let cert = search::enumerate(
            &p,
            &SearchQuery::projective(1, p.size(), &[Filter::Blocking, Filter::Minimal]),
            &opts,
        )
        .unwrap();
        let found = cert.point_sets(&p).unwrap();
        for t in constructs::all_vertexless_triangles(&p) {
            assert!(found.contains(&t));
        }
        if q == 4 {
            let (k, _) = constructs::k_construction(&p, 2, None).unwrap();
            assert!(found.contains(&k));
            assert!(found.contains(&constructs::baer_patch_q4(&p).unwrap().set));
        }

        let r_inf = p.q() + 1;
        let frame = AffineFrame::new(&p, r_inf).unwrap();
        let (s, _) = constructs::affine_3q4(&frame).unwrap();
        let affine = search::enumerate(
            &p,
            &SearchQuery::affine(
                r_inf,
                s.size(),
                s.size(),
                &[Filter::Blocking, Filter::Minimal],
            ),
            &opts,
        )
        .unwrap();
        assert!(affine.point_sets(&p).unwrap().contains(&s));
    }
}

#[test]
fn certificates_do_not_depend_on_worker_count() {
    let p = plane(4);
    let query = SearchQuery::projective(
        7,
        9,
        &[Filter::Blocking, Filter::Minimal, Filter::RInfAtSomePoint],
    );
    let one = search::enumerate(&p, &query, &SearchOptions::default().with_jobs(1)).unwrap();
    for jobs in [2, 3, 8] {
        let many =
            search::enumerate(&p, &query, &SearchOptions::default().with_jobs(jobs)).unwrap();
        assert!(one.same_outcome(&many), "jobs = {jobs}");
    }
    let limited = query.clone().with_limit(100);
    let a = search::enumerate(&p, &limited, &SearchOptions::default().with_jobs(1)).unwrap();
    let b = search::enumerate(&p, &limited, &SearchOptions::default().with_jobs(4)).unwrap();
    assert!(a.same_outcome(&b));
    assert!(!a.complete);
}

#[test]
fn pi_filters_match_checkers_in_affine_search() {
    let p = plane(4);
    let r_inf = 5;
    let frame = AffineFrame::new(&p, r_inf).unwrap();
    let dir = p.members(r_inf).first().unwrap();
    let opts = SearchOptions::default();
    let all = search::enumerate(
        &p,
        &SearchQuery::affine(r_inf, 1, 16, &[Filter::Blocking, Filter::Minimal]),
        &opts,
    )
    .unwrap();
    let pi = search::enumerate(
        &p,
        &SearchQuery::affine(
            r_inf,
            1,
            16,
            &[Filter::Blocking, Filter::Minimal, Filter::PiProperty(dir)],
        ),
        &opts,
    )
    .unwrap();
    let expected: Vec<Vec<usize>> = all
        .point_sets(&p)
        .unwrap()
        .into_iter()
        .filter(|s| props::has_pi_property(&frame, s, dir).unwrap())
        .map(|s| s.ids())
        .collect();
    assert_eq!(pi.matches, expected);
    assert!(!expected.is_empty());
    // alpha inverse of each is a minimal projective set with r-infinity at dir
    for s in pi.point_sets(&p).unwrap() {
        let back = constructs::alpha_inverse(&frame, &s, dir).unwrap();
        assert_eq!(
            props::has_r_infinity_property(&p, &back, dir).unwrap(),
            Some(r_inf)
        );
        assert!(props::is_minimal(&p, &back).unwrap());
    }
}
