#![allow(dead_code)]

use moip_core::pareto::{max_filter, min_filter, preceq, Antichain};
use moip_core::{ExtendedSet, HyperplaneFamily, MoipInstance, MultiplierMatrix, ObjVec};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn set(points: &[[f64; 2]]) -> ExtendedSet {
    max_filter(&points.iter().map(|p| ObjVec::from(*p)).collect::<Vec<_>>()).unwrap()
}

pub fn finite(points: Vec<ObjVec>) -> ExtendedSet {
    ExtendedSet::Finite(Antichain::new(points).unwrap())
}

pub fn lam(v: &[f64]) -> MultiplierMatrix {
    MultiplierMatrix::from_flat(v.len(), 1, v.to_vec()).unwrap()
}

/// `max x₁ − ½x₂, −½x₁ + x₂` over `x₁ + x₂ ≤ 3/2` (dualized), `x ∈ {0,1}²`.
pub fn example1() -> MoipInstance {
    MoipInstance::new(
        vec![vec![1.0, -0.5], vec![-0.5, 1.0]],
        vec![vec![1.0, 1.0]],
        vec![1.5],
        vec![0],
        vec![(0, 1), (0, 1)],
    )
    .unwrap()
}

/// Example 1 with right-hand side 1.
pub fn example2() -> MoipInstance {
    example1().with_rhs(vec![1.0]).unwrap()
}

/// Example 2 data with nothing dualized, for value-function sampling.
pub fn example4() -> MoipInstance {
    example2().without_dualization()
}

pub fn example5() -> MoipInstance {
    MoipInstance::new(
        vec![vec![2.0, 1.0], vec![1.0, 2.0]],
        vec![vec![1.0, 1.0]],
        vec![2.0],
        vec![],
        vec![(0, 2), (0, 2)],
    )
    .unwrap()
}

pub fn appendix_c() -> MoipInstance {
    MoipInstance::new(
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        vec![vec![2.0, 4.0], vec![4.0, 2.0]],
        vec![5.0, 5.0],
        vec![0, 1],
        vec![(0, 1), (0, 1)],
    )
    .unwrap()
}

/// Biobjective instance with `n ≤ max_n` variables in boxes `{0..1}` or
/// `{0..2}`, one or two rows (at least one dualized) and `x = 0` feasible.
pub fn random_instance(rng: &mut ChaCha8Rng, max_n: usize) -> MoipInstance {
    let n = rng.gen_range(1..=max_n);
    let boxes: Vec<(i64, i64)> = (0..n).map(|_| (0, rng.gen_range(1..=2))).collect();
    let c = (0..2).map(|_| (0..n).map(|_| rng.gen_range(-3..=6) as f64).collect()).collect();
    let m = rng.gen_range(1..=2);
    let a = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-1..=4) as f64).collect()).collect();
    let b = (0..m).map(|_| rng.gen_range(0..=2 * n as i64 + 2) as f64).collect();
    let dualized = if m == 2 && rng.gen_bool(0.5) { vec![0, 1] } else { vec![0] };
    MoipInstance::new(c, a, b, dualized, boxes).unwrap()
}

/// Nonnegative integer data whose boxes `[0, hᵢ]` (all `hᵢ ≤ 2`) are exactly
/// what the rows allow, so the boxes never cut `{x ∈ Z₊ⁿ : Ax ≤ b}`.
pub fn random_nonneg_instance(rng: &mut ChaCha8Rng, max_n: usize, k: usize) -> MoipInstance {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=2);
    // Row 0 entries ≥ 2 with b₀ ≤ 5 keep every cap at most 2.
    let mut a: Vec<Vec<f64>> = vec![(0..n).map(|_| rng.gen_range(2..=3) as f64).collect()];
    let mut b = vec![rng.gen_range(0..=5) as f64];
    if m == 2 {
        a.push((0..n).map(|_| rng.gen_range(0..=3) as f64).collect());
        b.push(rng.gen_range(0..=6) as f64);
    }
    let c = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-2..=5) as f64).collect()).collect();
    MoipInstance::new(c, a.clone(), b.clone(), vec![], implied_boxes(&a, &b)).unwrap()
}

pub fn implied_boxes(a: &[Vec<f64>], b: &[f64]) -> Vec<(i64, i64)> {
    (0..a[0].len())
        .map(|j| {
            let cap = a
                .iter()
                .zip(b)
                .filter(|(row, _)| row[j] > 0.0)
                .map(|(row, bi)| (bi / row[j]).floor() as i64)
                .min()
                .expect("row 0 is positive");
            (0, cap)
        })
        .collect()
}

pub fn random_lambda(rng: &mut ChaCha8Rng, k: usize, m1: usize) -> MultiplierMatrix {
    MultiplierMatrix::from_flat(k, m1, (0..k * m1).map(|_| rng.gen_range(0.0..3.0)).collect()).unwrap()
}

/// A finite antichain of up to `max_len` points with small integer
/// coordinates, so comparisons between random sets are frequent.
pub fn random_antichain(rng: &mut ChaCha8Rng, k: usize, max_len: usize) -> Vec<ObjVec> {
    let len = rng.gen_range(1..=max_len);
    let pts: Vec<ObjVec> =
        (0..len).map(|_| ObjVec::from((0..k).map(|_| rng.gen_range(0..=4) as f64).collect::<Vec<_>>())).collect();
    max_filter(&pts).unwrap().points().to_vec()
}

pub fn fin(points: &[ObjVec]) -> ExtendedSet {
    finite(points.to_vec())
}

/// `S ⪯ T` straight from the two defining conditions, independent of the
/// library implementation.
pub fn preceq_oracle(s: &[ObjVec], t: &[ObjVec]) -> bool {
    let leq = |a: &ObjVec, b: &ObjVec| a.iter().zip(b.iter()).all(|(x, y)| x <= y);
    let lt = |a: &ObjVec, b: &ObjVec| leq(a, b) && a.iter().zip(b.iter()).any(|(x, y)| x < y);
    s.iter().all(|p| t.iter().any(|q| leq(p, q))) && s.iter().all(|p| t.iter().all(|q| !lt(q, p)))
}

pub fn preceq_sets(s: &ExtendedSet, t: &ExtendedSet) -> bool {
    preceq(s, t).unwrap()
}

/// Brute-force `Min` of the union of the family sampled at `w₁ = i/100`
/// for `i ∈ [-window, window]`.
pub fn sampled_min_of_union(fam: &HyperplaneFamily, window: i64) -> ExtendedSet {
    let mut pts = Vec::new();
    for (mu, f) in fam.entries() {
        for i in -window..=window {
            let t = i as f64 / 100.0;
            pts.push(ObjVec::from(vec![t, (f - mu[0] * t) / mu[1]]));
        }
    }
    min_filter(&pts).unwrap()
}

pub fn random_family(rng: &mut ChaCha8Rng, planes: usize) -> HyperplaneFamily {
    let entries = (0..planes)
        .map(|_| (ObjVec::from(vec![rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0)]), rng.gen_range(-2.0..2.0)))
        .collect();
    HyperplaneFamily::new(entries).unwrap()
}
