mod common;

use common::*;
use moip_core::bounds::{
    bound_quality, halfspace_union_check, is_valid_lower_bound, is_valid_upper_bound, local_nadir_lower_bound,
};
use moip_core::model::{nondominated_set, supported_frontier};
use moip_core::{GammaMode, LagrangianContext, MultiplierGrid, ObjVec};
use rand::Rng;

#[test]
fn dual_points_pass_halfspace_check() {
    let mut r = rng(41);
    for _ in 0..300 {
        let inst = random_instance(&mut r, 6);
        let values: Vec<ObjVec> = inst.feasible_points().unwrap().iter().map(|x| inst.objective_of(x)).collect();
        let grid = MultiplierGrid::for_instance(&inst, 2.5, 6).unwrap();
        let u = LagrangianContext::new(&inst).unwrap().dual_approx(&grid).unwrap();
        for z in u.points() {
            assert!(halfspace_union_check(z, &values), "{z:?}");
        }
        assert!(is_valid_upper_bound(u.points(), &values));
    }
}

#[test]
fn local_nadirs_are_lower_bounds() {
    let mut r = rng(42);
    for _ in 0..300 {
        let inst = random_instance(&mut r, 7);
        let lower = local_nadir_lower_bound(&supported_frontier(&inst).unwrap()).unwrap();
        assert!(is_valid_lower_bound(&lower, &nondominated_set(&inst).unwrap()).unwrap());
    }
}

fn random_points(r: &mut rand_chacha::ChaCha8Rng, len: std::ops::Range<usize>) -> Vec<ObjVec> {
    let len = r.gen_range(len);
    (0..len).map(|_| ObjVec::from(vec![r.gen_range(-5.0..10.0), r.gen_range(-5.0..10.0)])).collect()
}

#[test]
fn zero_when_lower_inside_upper() {
    let mut r = rng(43);
    for _ in 0..500 {
        let l = random_points(&mut r, 1..5);
        let mut u = l.clone();
        u.extend(random_points(&mut r, 0..5));
        assert_eq!(bound_quality(&l, &u, GammaMode::SetUnion).unwrap().0, 0.0);
    }
}

#[test]
fn unscaled_distance_monotone_in_upper_set() {
    let mut r = rng(44);
    for _ in 0..1_000 {
        let l = random_points(&mut r, 1..5);
        let u = random_points(&mut r, 1..5);
        let mut bigger = u.clone();
        bigger.extend(random_points(&mut r, 1..4));
        let raw = |u: &[ObjVec]| {
            let (d, g) = bound_quality(&l, u, GammaMode::SetUnion).unwrap();
            d * g
        };
        assert!(raw(&bigger) <= raw(&u) + 1e-12);
    }
}

#[test]
fn scaled_metric_can_grow_when_a_point_is_added() {
    // The scale averages over L ∪ U, so a short new vector lowers γ.
    let l = vec![ObjVec::from([10.0, 0.0])];
    let u = vec![ObjVec::from([0.0, 10.0])];
    let mut bigger = u.clone();
    bigger.push(ObjVec::from([0.1, 0.1]));
    let (d0, _) = bound_quality(&l, &u, GammaMode::SetUnion).unwrap();
    let (d1, _) = bound_quality(&l, &bigger, GammaMode::SetUnion).unwrap();
    assert!(d1 > d0);
}

#[test]
fn gamma_modes_differ_only_on_duplicates() {
    let l = vec![ObjVec::from([3.0, 4.0])];
    let u = vec![ObjVec::from([3.0, 4.0]), ObjVec::from([0.0, 1.0])];
    let (_, set) = bound_quality(&l, &u, GammaMode::SetUnion).unwrap();
    let (_, multi) = bound_quality(&l, &u, GammaMode::Multiset).unwrap();
    assert_eq!(set, 3.0);
    assert!((multi - 11.0 / 3.0).abs() < 1e-12);
}
