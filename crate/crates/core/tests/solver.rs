mod common;

use common::rng;
use moip_core::solver::{
    conv_hull_lp, enumerate_feasible, ip_solve, ip_solve_with, lp_solve, IpOptions, IpProblem, LpProblem, Row,
    SolveOutcome,
};
use moip_core::Sense;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_ip(r: &mut ChaCha8Rng) -> IpProblem {
    let n = r.gen_range(1..=6);
    let m = r.gen_range(1..=3);
    IpProblem {
        objective: (0..n).map(|_| r.gen_range(-4..=8) as f64).collect(),
        rows: (0..m)
            .map(|_| Row::le((0..n).map(|_| r.gen_range(-2..=5) as f64).collect(), r.gen_range(0..=10) as f64))
            .collect(),
        lo: vec![0; n],
        hi: (0..n).map(|_| r.gen_range(1..=3)).collect(),
    }
}

fn lp_relaxation(p: &IpProblem) -> LpProblem {
    let mut lp = LpProblem::new(p.objective.clone(), Sense::Max);
    lp.rows = p.rows.clone();
    lp.bounds = p.lo.iter().zip(&p.hi).map(|(&l, &h)| (l as f64, h as f64)).collect();
    lp
}

#[test]
fn lp_bounds_ip_and_ip_matches_rescan() {
    let mut r = rng(1);
    for _ in 0..1_000 {
        let p = random_ip(&mut r);
        let ip = ip_solve(&p).unwrap().value().expect("x = 0 is feasible");
        let lp = lp_solve(&lp_relaxation(&p)).unwrap().value().unwrap();
        assert!(ip <= lp + 1e-7, "ip {ip} > lp {lp}");
        // Independent scan of the whole box.
        let mut best = f64::NEG_INFINITY;
        let mut x = p.lo.clone();
        loop {
            let ok = p
                .rows
                .iter()
                .all(|row| row.coeffs.iter().zip(&x).map(|(a, v)| a * *v as f64).sum::<f64>() <= row.rhs + 1e-9);
            if ok {
                best = best.max(p.objective.iter().zip(&x).map(|(c, v)| c * *v as f64).sum());
            }
            let Some(j) = (0..x.len()).find(|&j| x[j] < p.hi[j]) else { break };
            x[j] += 1;
            x[..j].copy_from_slice(&p.lo[..j]);
        }
        assert_eq!(ip, best);
        assert_eq!(enumerate_feasible(&p).unwrap().is_empty(), best == f64::NEG_INFINITY);
    }
}

#[test]
fn branch_and_bound_agrees_with_enumeration() {
    let mut r = rng(2);
    let opts = IpOptions { enumeration_cap: 1, branch_and_bound: true, ..IpOptions::default() };
    for _ in 0..300 {
        let p = random_ip(&mut r);
        let bb = ip_solve_with(&p, &opts).unwrap().value().unwrap();
        let en = ip_solve(&p).unwrap().value().unwrap();
        assert!((bb - en).abs() <= 1e-7, "{bb} vs {en}");
    }
}

#[test]
fn hull_maximum_sits_at_a_vertex() {
    let mut r = rng(3);
    for _ in 0..1_000 {
        let n = r.gen_range(1..=4);
        let pts: Vec<Vec<i64>> =
            (0..r.gen_range(1..=8)).map(|_| (0..n).map(|_| r.gen_range(-3..=3)).collect()).collect();
        let c: Vec<f64> = (0..n).map(|_| r.gen_range(-2.0..2.0)).collect();
        let best = pts
            .iter()
            .map(|q| c.iter().zip(q).map(|(a, v)| a * *v as f64).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        match conv_hull_lp(&pts, &c, &[]).unwrap() {
            SolveOutcome::Optimal { value, .. } => assert!((value - best).abs() <= 1e-7, "{value} vs {best}"),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn unbounded_and_infeasible_lps() {
    let lp = LpProblem::new(vec![1.0, 1.0], Sense::Max).with_row(Row::le(vec![1.0, -1.0], 1.0));
    assert_eq!(lp_solve(&lp).unwrap(), SolveOutcome::Unbounded);
    let lp = LpProblem::new(vec![1.0], Sense::Max).with_row(Row::ge(vec![1.0], 2.0)).with_row(Row::le(vec![1.0], 1.0));
    assert_eq!(lp_solve(&lp).unwrap(), SolveOutcome::Infeasible);
}
