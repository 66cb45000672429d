mod common;

use common::*;
use moip_core::chain::FrontierChain;
use moip_core::model::{nondominated_set, scalarize};
use moip_core::relax::{ch_relaxation_frontier, ldlp_bound, molp_relaxation_frontier};
use moip_core::solver::ip_solve;
use moip_core::{LagrangianContext, MultiplierGrid, ObjVec};
use rand::Rng;

#[test]
fn relaxations_bound_the_nondominated_set() {
    let mut r = rng(31);
    for _ in 0..500 {
        let inst = random_instance(&mut r, 6);
        let nd = nondominated_set(&inst).unwrap();
        let ctx = LagrangianContext::new(&inst).unwrap();
        for _ in 0..4 {
            let l = random_lambda(&mut r, 2, inst.dualized().len());
            let lr = ctx.relaxation(&l).unwrap();
            assert!(preceq_sets(&nd, &lr), "{nd} vs {lr} at {l:?}");
            assert!(preceq_oracle(nd.points(), lr.points()));
        }
    }
}

#[test]
fn hull_frontier_below_lp_frontier() {
    let mut r = rng(32);
    for _ in 0..300 {
        let inst = random_instance(&mut r, 5);
        let nd = nondominated_set(&inst).unwrap();
        let ch = FrontierChain::from_set(&ch_relaxation_frontier(&inst).unwrap()).unwrap();
        let molp = FrontierChain::from_set(&molp_relaxation_frontier(&inst).unwrap()).unwrap();
        assert!(ch.preceq(&molp), "{:?} vs {:?}", ch.vertices(), molp.vertices());
        assert!(ch.dominates_points(nd.points()));
    }
}

#[test]
fn hull_vertices_are_integral_images() {
    let mut r = rng(33);
    for _ in 0..300 {
        let inst = random_instance(&mut r, 6);
        let images: Vec<ObjVec> = inst.feasible_points().unwrap().iter().map(|x| inst.objective_of(x)).collect();
        for v in ch_relaxation_frontier(&inst).unwrap().points() {
            assert!(images.iter().any(|y| y.approx_eq(v)), "{v:?} has no integral preimage");
        }
    }
}

#[test]
fn scalarized_sandwich() {
    let mut r = rng(34);
    for _ in 0..300 {
        let inst = random_instance(&mut r, 6);
        let ctx = LagrangianContext::new(&inst).unwrap();
        let grid = MultiplierGrid::for_instance(&inst, 2.5, 4).unwrap();
        let ldlp = ldlp_bound(&inst).unwrap();
        for _ in 0..3 {
            let mu = [r.gen_range(0.05..1.0), r.gen_range(0.05..1.0)];
            let ip = ip_solve(&scalarize(&inst, &mu).unwrap()).unwrap().value().unwrap();
            let dual = ctx.scalarized_dual_value(&inst, &mu).unwrap();
            assert!(ip <= dual + 1e-7, "ip {ip} > dual {dual}");
            for l in grid.iter() {
                let v = ctx.relaxation_value(&l, &mu).unwrap();
                assert!(dual <= v + 1e-7, "dual {dual} > relaxation {v}");
            }
            // The frontier of the hull-based program attains the same weighted maximum.
            let best = ldlp.points().iter().map(|y| y.dot(&mu)).fold(f64::NEG_INFINITY, f64::max);
            assert!((best - dual).abs() <= 1e-7 * (1.0 + dual.abs()), "{best} vs {dual}");
        }
    }
}

#[test]
fn appendix_c_hull_program_beats_the_segment() {
    let inst = appendix_c();
    let ldlp = ldlp_bound(&inst).unwrap();
    let expected = [[0.5, 1.0], [5.0 / 6.0, 5.0 / 6.0], [1.0, 0.5]];
    assert_eq!(ldlp.points().len(), 3);
    for (p, e) in ldlp.points().iter().zip(expected) {
        assert!((p[0] - e[0]).abs() <= 1e-9 && (p[1] - e[1]).abs() <= 1e-9, "{p:?} vs {e:?}");
    }
    let ch = FrontierChain::from_set(&ch_relaxation_frontier(&inst).unwrap()).unwrap();
    assert!(ldlp.points().iter().any(|v| !ch.covers(v)));
}

#[test]
fn dual_grid_is_deterministic_across_pools() {
    let inst = random_instance(&mut rng(35), 6);
    let ctx = LagrangianContext::new(&inst).unwrap();
    let grid = MultiplierGrid::for_instance(&inst, 2.5, 26).unwrap();
    let one =
        rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| ctx.dual_approx(&grid).unwrap());
    let four =
        rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| ctx.dual_approx(&grid).unwrap());
    assert_eq!(one, four);
}
