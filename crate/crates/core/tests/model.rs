mod common;

use common::*;
use moip_core::model::{ideal_point, is_supported, nadir_point, nondominated_set, scalarize, supported_frontier};
use moip_core::solver::ip_solve;
use moip_core::{MoipError, MoipInstance, ObjVec};

#[test]
fn supported_points_are_nondominated_and_reverify() {
    let mut r = rng(21);
    for _ in 0..300 {
        let inst = random_instance(&mut r, 6);
        let nd = nondominated_set(&inst).unwrap();
        let f = supported_frontier(&inst).unwrap();
        assert!(!f.is_empty());
        for e in &f.entries {
            assert!(nd.as_finite().unwrap().contains(&e.y), "{:?} not nondominated", e.y);
            assert!(e.mu.iter().all(|m| *m > 0.0));
            let best = ip_solve(&scalarize(&inst, &e.mu).unwrap()).unwrap().value().unwrap();
            assert!((best - e.mu.dot(&e.y)).abs() <= 1e-9 * (1.0 + best.abs()), "{best} vs {}", e.mu.dot(&e.y));
        }
        assert!(f.entries.windows(2).all(|w| w[0].y[0] < w[1].y[0]));
    }
}

#[test]
fn is_supported_agrees_with_frontier() {
    let mut r = rng(22);
    for _ in 0..200 {
        let inst = random_instance(&mut r, 5);
        let f = supported_frontier(&inst).unwrap();
        for x in inst.feasible_points().unwrap() {
            let y = inst.objective_of(&x);
            let on_frontier = f.entries.iter().any(|e| e.y.approx_eq(&y));
            assert_eq!(is_supported(&inst, &x).unwrap(), on_frontier, "{x:?} -> {y:?}");
        }
    }
}

#[test]
fn nondominated_points_lie_between_nadir_and_ideal() {
    let mut r = rng(23);
    for _ in 0..300 {
        let inst = random_instance(&mut r, 8);
        let (lo, hi) = (nadir_point(&inst).unwrap(), ideal_point(&inst).unwrap());
        for y in nondominated_set(&inst).unwrap().points() {
            assert!(lo.weakly_below(y) && y.weakly_below(&hi));
        }
        // The ideal point is also an upper bound on every feasible value.
        for x in inst.feasible_points().unwrap() {
            assert!(inst.objective_of(&x).weakly_below(&hi));
        }
    }
}

#[test]
fn example5_frontier_includes_segment_point() {
    let f = supported_frontier(&example5()).unwrap();
    assert_eq!(f.points(), vec![ObjVec::from([2.0, 4.0]), ObjVec::from([3.0, 3.0]), ObjVec::from([4.0, 2.0])]);
}

#[test]
fn infeasible_instance() {
    let inst =
        MoipInstance::new(vec![vec![1.0], vec![1.0]], vec![vec![1.0]], vec![-1.0], vec![], vec![(0, 1)]).unwrap();
    assert_eq!(nondominated_set(&inst).unwrap(), moip_core::ExtendedSet::MinusInf);
    assert!(supported_frontier(&inst).unwrap().is_empty());
    assert!(matches!(ideal_point(&inst), Err(MoipError::Infeasible(_))));
}

#[test]
fn three_objectives_unsupported() {
    let inst = MoipInstance::new(vec![vec![1.0]; 3], vec![], vec![], vec![], vec![(0, 1)]).unwrap();
    assert!(matches!(supported_frontier(&inst), Err(MoipError::UnsupportedDimension(3))));
}
