mod common;

use bcdof::catalog::{
    bc_cm_region, bc_dm_region, bc_pm_region, corner_catalog, devolve_outer, find_corner,
    region_for, CitedWork, RegionStatus, SchemeKind,
};
use bcdof::polytope::{Halfspace, Region};
use bcdof::rational::{int, rat};
use bcdof::scenario::{Coord, CsitModel, CsitType, DofPoint, MessageSet};
use bcdof::Rational;
use common::*;
use num_traits::Zero;
use proptest::prelude::*;

/// One table row `x1·d1 + x2·d2 + x0·d0 ≤ 1` with each coefficient written
/// as a reciprocal (0 meaning the term is absent).
fn row(k1: usize, k2: usize, k0: usize) -> Halfspace {
    let r = |k: usize| {
        if k == 0 {
            Rational::zero()
        } else {
            rat(1, k as i64)
        }
    };
    Halfspace::new(r(k1), r(k2), r(k0), int(1))
}

/// Private-message cells, typed out by hand for `N1 ≥ N2`.
fn table_pm(m: usize, n1: usize, n2: usize, csit: &str) -> Region {
    let (a, b, c) = (m.min(n1), m.min(n2), m.min(n1 + n2));
    let rows = match csit {
        "PP" => vec![
            hs((1, 1), (0, 1), (0, 1), n1 as i64),
            hs((0, 1), (1, 1), (0, 1), n2 as i64),
            hs((1, 1), (1, 1), (0, 1), m as i64),
        ],
        "PD" => vec![row(a, 0, 0), row(c, b, 0)],
        "DP" => vec![row(a, c, 0), row(0, b, 0)],
        "DD" => vec![row(c, b, 0), row(a, c, 0)],
        "PN" | "DN" | "NN" => vec![row(a, b, 0)],
        "NP" => vec![row(a, a, 0), row(0, b, 0)],
        "ND" => vec![row(a, a, 0), row(c, b, 0)],
        _ => unreachable!(),
    };
    Region::new_pinned(rows, Coord::D0)
}

/// Common-message cells, typed out by hand for `N1 ≥ N2`.
fn table_cm(m: usize, n1: usize, n2: usize, csit: &str) -> Region {
    let (a, b, c) = (m.min(n1), m.min(n2), m.min(n1 + n2));
    let rows = match csit {
        "PP" => vec![
            hs((1, 1), (0, 1), (1, 1), n1 as i64),
            hs((0, 1), (1, 1), (1, 1), n2 as i64),
            hs((1, 1), (1, 1), (1, 1), m as i64),
        ],
        "PD" => vec![row(a, 0, a), row(c, b, b)],
        "DP" => vec![row(a, c, a), row(0, b, b)],
        "DD" => vec![row(c, b, b), row(a, c, a)],
        "PN" | "DN" | "NN" => vec![row(a, b, b)],
        "NP" => vec![row(a, a, a), row(0, b, b)],
        "ND" => vec![row(a, a, a), row(c, b, b)],
        _ => unreachable!(),
    };
    Region::new(rows)
}

fn same_vertices(x: &Region, y: &Region) -> bool {
    brute_force_vertices(x) == brute_force_vertices(y)
}

#[test]
fn pm_regions_match_table_one() {
    for c in grid(6, true) {
        for m in CsitModel::all() {
            let (r, _) = bc_pm_region(c, m);
            let t = table_pm(c.m, c.n1, c.n2, &m.to_string());
            assert!(same_vertices(&r, &t), "{c} {m}");
        }
    }
}

#[test]
fn cm_regions_match_table_two() {
    for c in grid(6, true) {
        for m in CsitModel::all() {
            let (r, _) = bc_cm_region(c, m);
            let t = table_cm(c.m, c.n1, c.n2, &m.to_string());
            assert!(same_vertices(&r, &t), "{c} {m}");
        }
    }
}

#[test]
fn vertex_enumeration_agrees_with_brute_force() {
    for c in grid(5, false) {
        for m in CsitModel::all() {
            for ms in MessageSet::all() {
                let (r, _) = region_for(c, ms, m);
                assert_eq!(
                    sorted(r.vertices().unwrap()),
                    brute_force_vertices(&r),
                    "{c} {m} {ms}"
                );
            }
        }
    }
}

#[test]
fn documented_cells() {
    let (r, _) = bc_pm_region(cfg(5, 4, 2), csit("PN"));
    assert!(r
        .equals(&Region::new_pinned(vec![row(4, 2, 0)], Coord::D0))
        .unwrap());

    let (r, _) = bc_pm_region(cfg(1, 1, 1), csit("PP"));
    assert_eq!(
        brute_force_vertices(&r),
        sorted(vec![
            pt((0, 1), (0, 1), (0, 1)),
            pt((1, 1), (0, 1), (0, 1)),
            pt((0, 1), (1, 1), (0, 1))
        ])
    );

    let (r, _) = bc_pm_region(cfg(4, 3, 2), csit("ND"));
    assert!(r
        .equals(&Region::new_pinned(
            vec![row(3, 3, 0), row(4, 2, 0)],
            Coord::D0
        ))
        .unwrap());

    let (r, _) = bc_cm_region(cfg(3, 2, 1), csit("DD"));
    let want = vec![
        pt((0, 1), (0, 1), (0, 1)),
        pt((2, 1), (0, 1), (0, 1)),
        pt((0, 1), (1, 1), (0, 1)),
        pt((0, 1), (0, 1), (1, 1)),
        pt((12, 7), (3, 7), (0, 1)),
        pt((3, 2), (0, 1), (1, 2)),
    ];
    assert_eq!(sorted(r.vertices().unwrap()), sorted(want));

    let (r, _) = bc_dm_region(cfg(5, 4, 2), csit("ND"));
    let want = vec![
        pt((0, 1), (0, 1), (0, 1)),
        pt((4, 1), (0, 1), (0, 1)),
        pt((0, 1), (0, 1), (2, 1)),
        pt((10, 3), (0, 1), (2, 3)),
    ];
    assert_eq!(sorted(r.vertices().unwrap()), sorted(want));

    // M ≥ N1+N2 corner ((N1²−N2²)/N1, N2²/N1)
    let (r, _) = bc_dm_region(cfg(6, 3, 2), csit("ND"));
    assert!(r.vertices().unwrap().contains(&pt((5, 3), (0, 1), (4, 3))));
}

#[test]
fn membership_examples() {
    let (pp, _) = bc_cm_region(cfg(5, 3, 2), csit("PP"));
    assert!(pp.contains(&DofPoint::from_ints(3, 2, 0)));
    let (pn, _) = bc_pm_region(cfg(2, 2, 1), csit("PN"));
    assert!(!pn.contains(&pt((2, 1), (1, 2), (0, 1))));
    for c in grid(3, false) {
        for m in CsitModel::all() {
            for ms in MessageSet::all() {
                assert!(region_for(c, ms, m).0.contains(&DofPoint::origin()));
            }
        }
    }
}

#[test]
fn pm_equality_across_pn_dn_nn() {
    for c in grid(6, true) {
        let (nn, _) = bc_pm_region(c, csit("NN"));
        assert!(bc_pm_region(c, csit("PN")).0.equals(&nn).unwrap());
        assert!(bc_pm_region(c, csit("DN")).0.equals(&nn).unwrap());
    }
    assert!(!bc_pm_region(cfg(4, 3, 2), csit("PP"))
        .0
        .equals(&bc_pm_region(cfg(4, 3, 2), csit("NN")).0)
        .unwrap());
}

#[test]
fn devolution_reproduces_table_two() {
    for c in grid(6, true) {
        for m in CsitModel::all() {
            let t = table_cm(c.m, c.n1, c.n2, &m.to_string());
            assert!(same_vertices(&devolve_outer(c, m), &t), "{c} {m}");
        }
    }
    // for (4,2,1) DD exactly the two table rows survive
    let d = devolve_outer(cfg(4, 2, 1), csit("DD"));
    let nontrivial: Vec<_> = d.halfspaces.iter().filter(|h| !h.is_trivial()).collect();
    assert_eq!(nontrivial.len(), 2);
    let (nn, _) = bc_cm_region(cfg(1, 1, 1), csit("NN"));
    assert!(devolve_outer(cfg(1, 1, 1), csit("NN")).equals(&nn).unwrap());
}

/// Every vertex of every region; only the perfect-CSIT common-message
/// region has corners with all three coordinates positive, exactly at the
/// point where its three constraints meet.
#[test]
fn zero_coordinate_at_corners() {
    for c in grid(6, true) {
        for m in CsitModel::all() {
            for ms in MessageSet::all() {
                let (r, _) = region_for(c, ms, m);
                for v in brute_force_vertices(&r) {
                    assert!(inside(&r, &v));
                    if v.zero_count() > 0 {
                        continue;
                    }
                    let (a, b, s) = (
                        c.min_m_n1() as i64,
                        c.min_m_n2() as i64,
                        c.min_m_sum() as i64,
                    );
                    assert_eq!(
                        (m.to_string().as_str(), ms),
                        ("PP", MessageSet::Common),
                        "{c} {m} {ms} {v}"
                    );
                    assert!(a + b > s);
                    assert_eq!(v, DofPoint::from_ints(s - b, s - a, a + b - s));
                }
            }
        }
    }
}

#[test]
fn more_csit_never_shrinks() {
    let chains = [
        ["NN", "DN", "DD", "DP", "PP"],
        ["NN", "ND", "DD", "PD", "PP"],
    ];
    for c in grid(5, true) {
        for chain in chains {
            for w in chain.windows(2) {
                let (small, _) = bc_cm_region(c, csit(w[0]));
                let (big, _) = bc_cm_region(c, csit(w[1]));
                for v in brute_force_vertices(&small) {
                    assert!(inside(&big, &v), "{c}: {} ⊄ {} at {v}", w[0], w[1]);
                }
            }
        }
    }
}

#[test]
fn slices_recover_smaller_message_sets() {
    for c in grid(5, true) {
        for m in CsitModel::all() {
            let (cm, _) = bc_cm_region(c, m);
            let (pm, _) = bc_pm_region(c, m);
            assert!(same_vertices(&cm.slice(Coord::D0, &int(0)), &pm), "{c} {m}");
            let (dm, _) = bc_dm_region(c, m);
            assert!(same_vertices(&cm.slice(Coord::D2, &int(0)), &dm), "{c} {m}");
        }
    }
}

#[test]
fn few_transmit_antennas_give_a_simplex() {
    for c in grid(5, true).into_iter().filter(|c| c.m <= c.n2) {
        for m in CsitModel::all() {
            for ms in MessageSet::all() {
                let (r, _) = region_for(c, ms, m);
                let pinned = ms.pinned().into_iter().collect::<Vec<_>>();
                let simplex = Region::simplex(int(c.m as i64), &pinned);
                assert!(same_vertices(&r, &simplex), "{c} {m} {ms}");
            }
        }
    }
}

#[test]
fn status_labels() {
    for m in CsitModel::all() {
        for ms in [MessageSet::Private, MessageSet::Common] {
            let (_, label) = region_for(cfg(4, 3, 2), ms, m);
            let want = if m.csit_type() == CsitType::TypeII {
                RegionStatus::Ldof
            } else {
                RegionStatus::Dof
            };
            assert_eq!(label.status, want, "{m}");
            assert!(!label.derived);
        }
    }
    let (_, l) = bc_dm_region(cfg(5, 4, 2), csit("ND"));
    assert!(!l.derived);
    let (_, l) = bc_dm_region(cfg(5, 4, 2), csit("PP"));
    assert!(l.derived);
}

#[test]
fn corner_tags() {
    let dd = corner_catalog(cfg(3, 2, 1), MessageSet::Common, csit("DD"));
    let p1 = find_corner(&dd, "P1").unwrap();
    assert_eq!(p1.point, pt((12, 7), (3, 7), (0, 1)));
    assert_eq!(p1.kind, SchemeKind::CitedExternal(CitedWork::Vaze2011));
    let p2 = find_corner(&dd, "P2").unwrap();
    assert_eq!(p2.point, pt((3, 2), (0, 1), (1, 2)));
    assert_eq!(p2.kind, SchemeKind::DmNdTwoPhase);

    for c in corner_catalog(cfg(5, 4, 2), MessageSet::Private, csit("NP")) {
        if c.point.zero_count() == 2 {
            assert_eq!(c.kind, SchemeKind::TrivialBeamforming);
        } else {
            assert!(c.point.is_integral());
            assert_eq!(c.kind, SchemeKind::NpZeroForcing);
        }
    }

    // catalog covers exactly the nonzero vertices
    for c in grid(4, false) {
        for m in CsitModel::all() {
            for ms in MessageSet::all() {
                let (r, _) = region_for(c, ms, m);
                let mut from_region: Vec<DofPoint> = r
                    .vertices()
                    .unwrap()
                    .into_iter()
                    .filter(|v| !v.is_origin())
                    .collect();
                from_region.sort();
                let mut from_catalog: Vec<DofPoint> = corner_catalog(c, ms, m)
                    .into_iter()
                    .map(|k| k.point)
                    .collect();
                from_catalog.sort();
                assert_eq!(from_region, from_catalog, "{c} {m} {ms}");
                for k in corner_catalog(c, ms, m) {
                    if k.point.zero_count() == 2 {
                        assert_eq!(k.kind, SchemeKind::TrivialBeamforming);
                    }
                }
            }
        }
    }
}

fn scenario() -> impl Strategy<Value = (usize, usize, usize, usize, usize)> {
    (1usize..=6, 1usize..=6, 1usize..=6, 0usize..9, 0usize..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn relabeling_receivers((m, n1, n2, k, s) in scenario()) {
        let model = CsitModel::all()[k];
        let ms = [MessageSet::Private, MessageSet::Common][s % 2];
        let (r, _) = region_for(cfg(m, n1, n2), ms, model);
        let (q, _) = region_for(cfg(m, n2, n1), ms, model.swapped());
        prop_assert!(r.equals(&q.swapped()).unwrap());
    }

    #[test]
    fn redundancy_elimination_keeps_vertices((m, n1, n2, k, s) in scenario()) {
        let (r, _) = region_for(cfg(m, n1, n2), MessageSet::all()[s], CsitModel::all()[k]);
        let e = r.eliminate_redundant().unwrap();
        prop_assert_eq!(brute_force_vertices(&r), brute_force_vertices(&e));
        let mut doubled = r.halfspaces.clone();
        doubled.extend(r.halfspaces.iter().cloned());
        let d = Region::with_pinned(doubled, &r.pinned_coords()).eliminate_redundant().unwrap();
        prop_assert_eq!(d.halfspaces.len(), e.halfspaces.len());
    }

    #[test]
    fn bounded_by_transmit_simplex((m, n1, n2, k, s) in scenario()) {
        let (r, _) = region_for(cfg(m, n1, n2), MessageSet::all()[s], CsitModel::all()[k]);
        for v in brute_force_vertices(&r) {
            let total = v.d1.clone() + v.d2.clone() + v.d0.clone();
            prop_assert!(total <= int(m as i64));
        }
    }

    /// Membership on a grid of step 1/4 agrees with the convex hull of the
    /// vertices, tested through the time-sharing decomposition.
    #[test]
    fn hull_and_halfspaces_agree((m, n1, n2, k, s) in (1usize..=4, 1usize..=4, 1usize..=4, 0usize..9, 0usize..3),
                                 q in proptest::array::uniform3(0i64..=16)) {
        let model = CsitModel::all()[k];
        let ms = MessageSet::all()[s];
        let (r, _) = region_for(cfg(m, n1, n2), ms, model);
        let p = DofPoint::new(rat(q[0], 4), rat(q[1], 4), rat(q[2], 4));
        let plan = bcdof::schemes::achieve_point(cfg(m, n1, n2), ms, model, &p);
        prop_assert_eq!(inside(&r, &p), plan.is_ok());
    }

    #[test]
    fn equality_is_an_equivalence((m, n1, n2) in (1usize..=5, 1usize..=5, 1usize..=5), a in 0usize..9, b in 0usize..9, c in 0usize..9) {
        let x = cfg(m, n1, n2);
        let r = |i: usize| bc_pm_region(x, CsitModel::all()[i]).0;
        let (ra, rb, rc) = (r(a), r(b), r(c));
        prop_assert!(ra.equals(&ra).unwrap());
        prop_assert_eq!(ra.equals(&rb).unwrap(), rb.equals(&ra).unwrap());
        if ra.equals(&rb).unwrap() && rb.equals(&rc).unwrap() {
            prop_assert!(ra.equals(&rc).unwrap());
        }
    }
}

#[test]
fn slice_examples() {
    let (r, _) = bc_cm_region(cfg(3, 2, 1), csit("DD"));
    let s = r.slice(Coord::D2, &int(0));
    assert_eq!(
        brute_force_vertices(&s),
        sorted(vec![
            pt((0, 1), (0, 1), (0, 1)),
            pt((2, 1), (0, 1), (0, 1)),
            pt((0, 1), (0, 1), (1, 1)),
            pt((3, 2), (0, 1), (1, 2))
        ])
    );
    let empty = r.slice(Coord::D2, &int(5));
    assert!(empty.vertices().unwrap().is_empty());
    let dominated = Region::with_pinned(
        vec![hs((1, 1), (0, 1), (0, 1), 2), hs((1, 1), (0, 1), (0, 1), 3)],
        &[Coord::D2, Coord::D0],
    );
    let e = dominated.eliminate_redundant().unwrap();
    assert_eq!(e.halfspaces.iter().filter(|h| !h.is_trivial()).count(), 1);
    assert_eq!(e.halfspaces[0].b, int(2));
}
