mod common;

use bcdof::catalog::{bc_dm_region, corner_catalog, find_corner, region_for, SchemeKind};
use bcdof::linalg::{lift_channels, rank, sample_generic, GenericMatrix, LiftedChannel, RngSeed};
use bcdof::rational::{int, rat};
use bcdof::scenario::{AntennaConfig, CsitModel, DofPoint, MessageSet};
use bcdof::schemes::{
    achieve_point, check_decodability, scheme_dm_nd, scheme_dp_np_corner, scheme_np_pm, scheme_pp,
    simulate, CornerScheme, DmNdCase, DmNdPlan, Precoder, SchemeError,
};
use bcdof::Rational;
use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Corner of the degraded `ND` region away from the axes, from the case
/// formulas.
fn dm_nd_corner(c: AntennaConfig) -> DofPoint {
    let (m, n1, n2) = (c.m as i64, c.n1 as i64, c.n2 as i64);
    if m >= n1 + n2 {
        DofPoint::new(rat(n1 * n1 - n2 * n2, n1), int(0), rat(n2 * n2, n1))
    } else {
        DofPoint::new(
            rat(m * (n1 - n2), m - n2),
            int(0),
            rat((m - n1) * n2, m - n2),
        )
    }
}

#[test]
fn dm_nd_targets_match_case_formulas() {
    for c in grid(7, true) {
        let plan = DmNdPlan::new(c).unwrap();
        if c.m <= c.n1 || c.n1 == c.n2 {
            assert_eq!(plan.case, DmNdCase::CommonOnly, "{c}");
            continue;
        }
        let p = dm_nd_corner(c);
        assert_eq!(plan.target(), p, "{c}");
        let (r, _) = bc_dm_region(c, csit("ND"));
        assert!(brute_force_vertices(&r).contains(&p), "{c}");
    }
}

#[test]
fn dm_nd_documented_cases() {
    let plan = DmNdPlan::new(cfg(5, 4, 2)).unwrap();
    assert_eq!((plan.t, plan.phase1, plan.phase2), (3, 2, 1));
    assert_eq!(plan.symbols(), [10, 0, 2]);

    let plan = DmNdPlan::new(cfg(6, 3, 2)).unwrap();
    assert_eq!((plan.t, plan.phase1, plan.phase2), (3, 1, 2));
    assert_eq!(plan.symbols()[0], 5);
    assert_eq!(plan.target(), pt((5, 3), (0, 1), (4, 3)));

    // (2,3,4) relabels to (2,4,3) with M ≤ N2
    let plan = DmNdPlan::new(cfg(2, 3, 4).swapped()).unwrap();
    assert_eq!(plan.case, DmNdCase::CommonOnly);
    assert!(DmNdPlan::new(cfg(2, 3, 4)).is_err());
}

#[test]
fn dm_nd_decodes() {
    for (m, n1, n2) in [
        (5, 4, 2),
        (6, 3, 2),
        (7, 4, 3),
        (5, 3, 2),
        (4, 3, 1),
        (6, 5, 2),
        (3, 2, 2),
    ] {
        for s in 0..20 {
            let (p, trace) = scheme_dm_nd(cfg(m, n1, n2), RngSeed(s)).unwrap();
            assert!(
                trace.verdict,
                "({m},{n1},{n2}) seed {s}: {:?}",
                trace.ledger
            );
            assert_eq!(p.dof(), trace.target);
        }
    }
}

/// Resampling the channel of slot `u` leaves every precoder block of slots
/// up to `u` unchanged.
#[test]
fn dm_nd_is_causal() {
    for (m, n1, n2) in [(5, 4, 2), (6, 3, 2), (7, 4, 3)] {
        let c = cfg(m, n1, n2);
        let plan = DmNdPlan::new(c).unwrap();
        let (_, h2) = lift_channels(c, plan.t, RngSeed(3));
        let base = plan.build(&h2, &mut RngSeed(4).rng());
        assert!(base.causal);
        for u in 0..plan.t {
            let mut slots: Vec<GenericMatrix> = (0..plan.t).map(|t| h2.slot(t).clone()).collect();
            slots[u] = sample_generic(n2, m, RngSeed(99).derive(&[u as u64]));
            let other = plan.build(&LiftedChannel::from_slots(slots), &mut RngSeed(4).rng());
            for t in 0..=u {
                assert_eq!(base.slot(&base.v1, t), other.slot(&other.v1, t));
                assert_eq!(base.slot(&base.v0, t), other.slot(&other.v0, t));
            }
        }
        // zeroing all phase-2 channels changes nothing at all
        let mut slots: Vec<GenericMatrix> = (0..plan.t).map(|t| h2.slot(t).clone()).collect();
        for s in slots.iter_mut().skip(plan.phase1) {
            *s = GenericMatrix::zeros(n2, m);
        }
        let zeroed = plan.build(&LiftedChannel::from_slots(slots), &mut RngSeed(4).rng());
        assert_eq!(zeroed.v1, base.v1);
        assert_eq!(zeroed.v0, base.v0);
    }
}

#[test]
fn decodability_examples() {
    let c = cfg(3, 3, 2);
    let (h1, h2) = lift_channels(c, 1, RngSeed(1));
    let z = GenericMatrix::zeros(3, 0);
    let p = Precoder::new(1, 3, sample_generic(3, 3, RngSeed(2)), z.clone(), z).unwrap();
    let d = check_decodability(&h1, &h2, &p).unwrap();
    assert!(d.verdict);
    assert_eq!(
        (
            d.ledger[0].total,
            d.ledger[0].signal,
            d.ledger[0].interference
        ),
        (3, 3, 0)
    );

    // two streams into single-antenna receivers without zero-forcing
    let c = cfg(2, 1, 1);
    for s in 0..100 {
        let (h1, h2) = lift_channels(c, 1, RngSeed(s));
        let v1 = sample_generic(2, 1, RngSeed(s).derive(&[1]));
        let v2 = sample_generic(2, 1, RngSeed(s).derive(&[2]));
        let p = Precoder::new(1, 2, v1, v2, GenericMatrix::zeros(2, 0)).unwrap();
        assert!(!check_decodability(&h1, &h2, &p).unwrap().verdict);
    }
}

#[test]
fn verdict_matches_independent_ranks() {
    for s in 0..30 {
        let c = cfg(4, 3, 2);
        let (h1, h2) = lift_channels(c, 2, RngSeed(s));
        let k = [
            (s % 4) as usize,
            ((s / 4) % 3) as usize,
            ((s / 12) % 2) as usize,
        ];
        let v = |i: usize| sample_generic(8, k[i], RngSeed(s).derive(&[10 + i as u64]));
        let p = Precoder::new(2, 4, v(0), v(1), v(2)).unwrap();
        let d = check_decodability(&h1, &h2, &p).unwrap();
        let hv1 = h1.block_diag.mul(&p.v1.hstack(&p.v0));
        let hv2 = h2.block_diag.mul(&p.v2.hstack(&p.v0));
        let i1 = h1.block_diag.mul(&p.v2);
        let i2 = h2.block_diag.mul(&p.v1);
        let ok = |sig: &GenericMatrix, int: &GenericMatrix| {
            rank_oracle(&sig.hstack(int)) == rank_oracle(sig) + rank_oracle(int)
                && rank_oracle(sig) == sig.cols()
        };
        assert_eq!(d.verdict, ok(&hv1, &i1) && ok(&hv2, &i2), "seed {s}");
    }
}

#[test]
fn pp_examples() {
    let c = cfg(5, 3, 2);
    for d in [DofPoint::from_ints(3, 2, 0), DofPoint::from_ints(2, 1, 1)] {
        let r = simulate(c, 1, 50, RngSeed(1), |h1, h2, rng| {
            scheme_pp(c, &d, h1.slot(0), h2.slot(0), rng)
        })
        .unwrap();
        assert!(r.all_passed(), "{d}");
    }
    let (h1, h2) = lift_channels(c, 1, RngSeed(0));
    let p = scheme_pp(
        c,
        &DofPoint::from_ints(3, 2, 0),
        h1.slot(0),
        h2.slot(0),
        &mut RngSeed(1).rng(),
    )
    .unwrap();
    // all three W1 streams are zero-forced at receiver 2
    assert!(h2.slot(0).mul(&p.v1).is_zero());
    let p = scheme_pp(
        c,
        &DofPoint::origin(),
        h1.slot(0),
        h2.slot(0),
        &mut RngSeed(1).rng(),
    )
    .unwrap();
    assert_eq!(p.symbols(), [0, 0, 0]);
    assert!(check_decodability(&h1, &h2, &p).unwrap().verdict);
    assert!(matches!(
        scheme_pp(
            c,
            &pt((1, 2), (0, 1), (0, 1)),
            h1.slot(0),
            h2.slot(0),
            &mut RngSeed(1).rng()
        ),
        Err(SchemeError::NotIntegral(_))
    ));
    assert!(matches!(
        scheme_pp(
            c,
            &DofPoint::from_ints(3, 2, 1),
            h1.slot(0),
            h2.slot(0),
            &mut RngSeed(1).rng()
        ),
        Err(SchemeError::Infeasible(_))
    ));
}

/// Streams a receiver actually sees never exceed its dimension.
#[test]
fn pp_stream_counting() {
    for c in grid(5, false) {
        let (r, _) = region_for(c, MessageSet::Common, csit("PP"));
        let (h1, h2) = lift_channels(c, 1, RngSeed(7));
        for d1 in 0..=c.m as i64 {
            for d2 in 0..=c.m as i64 {
                for d0 in 0..=c.m as i64 {
                    let d = DofPoint::from_ints(d1, d2, d0);
                    if !r.contains(&d) {
                        continue;
                    }
                    let p =
                        scheme_pp(c, &d, h1.slot(0), h2.slot(0), &mut RngSeed(8).rng()).unwrap();
                    let all = p.v1.hstack(&p.v2).hstack(&p.v0);
                    for (h, n) in [(h1.slot(0), c.n1), (h2.slot(0), c.n2)] {
                        let seen = (0..all.cols())
                            .filter(|&j| !h.mul(&all.column_range(j, j + 1)).is_zero())
                            .count();
                        assert!(seen <= c.m.min(n), "{c} {d}");
                    }
                    assert!(check_decodability(&h1, &h2, &p).unwrap().verdict, "{c} {d}");
                }
            }
        }
    }
}

#[test]
fn np_examples() {
    let c = cfg(5, 4, 2);
    for d in [
        DofPoint::from_ints(3, 1, 0),
        DofPoint::from_ints(4, 0, 0),
        DofPoint::from_ints(0, 2, 0),
    ] {
        let r = simulate(c, 1, 50, RngSeed(2), |_, h2, rng| {
            scheme_np_pm(c, &d, h2.slot(0), rng)
        })
        .unwrap();
        assert!(r.all_passed(), "{d}");
    }
    let (_, h2) = lift_channels(c, 1, RngSeed(0));
    let p = scheme_np_pm(
        c,
        &DofPoint::from_ints(3, 1, 0),
        h2.slot(0),
        &mut RngSeed(1).rng(),
    )
    .unwrap();
    assert_eq!(rank(&h2.slot(0).mul(&p.v1)), 0);
    assert_eq!(rank(&h2.slot(0).mul(&p.v2)), 1);
}

#[test]
fn dp_corner_examples() {
    for ((m, n1, n2), want) in [
        ((4, 3, 2), (1, 0, 2)),
        ((2, 2, 2), (0, 0, 2)),
        ((6, 3, 2), (1, 0, 2)),
    ] {
        let c = cfg(m, n1, n2);
        let r = simulate(c, 1, 50, RngSeed(5), |_, h2, rng| {
            scheme_dp_np_corner(c, h2.slot(0), rng)
        })
        .unwrap();
        assert!(r.all_passed());
        assert_eq!(
            r.achieved,
            Some(DofPoint::from_ints(want.0, want.1, want.2))
        );
    }
}

#[test]
fn time_sharing_examples() {
    let plan = achieve_point(
        cfg(4, 3, 2),
        MessageSet::Private,
        csit("PN"),
        &pt((3, 2), (1, 1), (0, 1)),
    )
    .unwrap();
    let mut parts: Vec<(DofPoint, Rational)> = plan
        .components
        .iter()
        .map(|c| (c.corner.point.clone(), c.weight.clone()))
        .collect();
    parts.sort();
    assert_eq!(
        parts,
        vec![
            (DofPoint::from_ints(0, 2, 0), rat(1, 2)),
            (DofPoint::from_ints(3, 0, 0), rat(1, 2))
        ]
    );

    let dd = csit("DD");
    let plan = achieve_point(
        cfg(3, 2, 1),
        MessageSet::Common,
        dd,
        &pt((3, 4), (0, 1), (3, 4)),
    )
    .unwrap();
    let mut parts: Vec<(String, Rational)> = plan
        .components
        .iter()
        .map(|c| (c.corner.label.clone(), c.weight.clone()))
        .collect();
    parts.sort();
    assert_eq!(
        parts,
        vec![("B0".into(), rat(1, 2)), ("P2".into(), rat(1, 2))]
    );
    assert!(plan.idle.is_zero());

    let corner = achieve_point(
        cfg(3, 2, 1),
        MessageSet::Common,
        dd,
        &pt((12, 7), (3, 7), (0, 1)),
    )
    .unwrap();
    assert_eq!(corner.components.len(), 1);
    assert!(corner.components[0].weight.is_one());
    assert_eq!(corner.cited_count(), 1);

    let origin = achieve_point(cfg(3, 2, 1), MessageSet::Common, dd, &DofPoint::origin()).unwrap();
    assert!(origin.components.is_empty());

    let err = achieve_point(
        cfg(3, 2, 1),
        MessageSet::Common,
        dd,
        &DofPoint::from_ints(2, 1, 1),
    )
    .unwrap_err();
    assert_eq!(err.to_string(), "infeasible: violates d1/3 + d2 + d0 ≤ 1");
}

#[test]
fn simulation_reports() {
    let c = cfg(5, 4, 2);
    let nd = csit("ND");
    let corners = corner_catalog(c, MessageSet::Degraded, nd);
    let p = find_corner(&corners, "P").unwrap().clone();
    let scheme = CornerScheme::new(c, MessageSet::Degraded, nd, p).unwrap();
    let r = scheme.simulate(100, RngSeed(1)).unwrap();
    assert_eq!(r.passes, 100);
    assert_eq!(r.t, 3);
    assert_eq!(r, scheme.simulate(100, RngSeed(1)).unwrap());

    // more W1 streams than receiver 1 can resolve over T slots
    let over = simulate(c, 1, 20, RngSeed(2), |_, _, rng| {
        let z = GenericMatrix::zeros(5, 0);
        Precoder::new(
            1,
            5,
            bcdof::schemes::random_columns(5, 5, rng),
            z.clone(),
            z,
        )
    })
    .unwrap();
    assert_eq!(over.passes, 0);

    let dd = corner_catalog(cfg(3, 2, 1), MessageSet::Common, csit("DD"));
    let cited = find_corner(&dd, "P1").unwrap().clone();
    assert!(matches!(
        CornerScheme::new(cfg(3, 2, 1), MessageSet::Common, csit("DD"), cited),
        Err(SchemeError::CitedExternal(_))
    ));
}

/// Every simulatable corner of every region on a small grid, including
/// receiver-swapped scenarios, decodes in every trial and reaches its point.
#[test]
fn every_simulatable_corner_decodes() {
    for c in grid(4, false) {
        for m in CsitModel::all() {
            for ms in MessageSet::all() {
                for corner in corner_catalog(c, ms, m) {
                    if !corner.kind.is_simulatable() {
                        assert!(matches!(corner.kind, SchemeKind::CitedExternal(_)));
                        continue;
                    }
                    let s = CornerScheme::new(c, ms, m, corner.clone()).unwrap();
                    let r = s.simulate(100, RngSeed(11)).unwrap();
                    assert!(r.all_passed(), "{c} {m} {ms} {}", corner.point);
                    assert_eq!(r.achieved.as_ref(), Some(&corner.point), "{c} {m} {ms}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn plans_reconstruct_the_target((m, n1, n2, k, s) in (1usize..=5, 1usize..=5, 1usize..=5, 0usize..9, 0usize..3),
                                    q in proptest::array::uniform3(0i64..=12)) {
        let c = cfg(m, n1, n2);
        let model = CsitModel::all()[k];
        let ms = MessageSet::all()[s];
        let mut p = DofPoint::new(rat(q[0], 3), rat(q[1], 3), rat(q[2], 3));
        if let Some(pinned) = ms.pinned() {
            p.set(pinned, int(0));
        }
        match achieve_point(c, ms, model, &p) {
            Ok(plan) => {
                prop_assert!(region_for(c, ms, model).0.contains(&p));
                prop_assert_eq!(plan.reconstruct(), p);
                prop_assert!(plan.components.iter().all(|x| x.weight > Rational::zero()));
                prop_assert!(plan.idle >= Rational::zero());
                prop_assert_eq!(plan.total_weight(), Rational::one());
                prop_assert!(plan.components.len() <= 3);
            }
            Err(e) => {
                prop_assert!(!region_for(c, ms, model).0.contains(&p));
                prop_assert!(e.to_string().starts_with("infeasible: violates "));
            }
        }
    }
}
