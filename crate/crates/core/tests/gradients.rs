mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rbsm::grid::candidate_pairs_for;
use rbsm::objective::{
    boundary_penalty, hpwl, mean_field, overlap_penalty_hat, overlap_penalty_quadratic, PenaltyWeights,
    TermValueGrad,
};
use rbsm::Placement;

const H: f64 = 1e-4;

fn nudge(p: &Placement, slot: usize, axis: usize, d: f64) -> Placement {
    let mut q = p.clone();
    let (x, y) = q.get(slot);
    if axis == 0 {
        q.set(slot, x + d, y).unwrap();
    } else {
        q.set(slot, x, y + d).unwrap();
    }
    q
}

/// Compare every analytic partial with a central difference. With
/// `piecewise_linear`, coordinates whose one-sided differences disagree sit
/// on a kink and are reported as such.
fn check<F>(p: &Placement, f: F, piecewise_linear: bool) -> Result<usize, String>
where
    F: Fn(&Placement) -> TermValueGrad,
{
    let g = f(p);
    let mut kinks = 0;
    for slot in 0..p.len() {
        for axis in 0..2 {
            let v0 = f(p).value;
            let vp = f(&nudge(p, slot, axis, H)).value;
            let vm = f(&nudge(p, slot, axis, -H)).value;
            if piecewise_linear && ((vp - v0) - (v0 - vm)).abs() > 1e-9 * (1.0 + v0.abs()) {
                kinks += 1;
                continue;
            }
            let fd = (vp - vm) / (2.0 * H);
            let a = if axis == 0 { g.grad_x[slot] } else { g.grad_y[slot] };
            // the difference quotient carries a few ulps of the value over H
            let rounding = 8.0 * f64::EPSILON * (1.0 + v0.abs()) / H;
            let ok = (a - fd).abs() <= 1e-6 * a.abs().max(fd.abs()) + rounding;
            if !ok {
                return Err(format!("slot {slot} axis {axis}: analytic {a}, central difference {fd}"));
            }
        }
    }
    Ok(kinks)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hpwl_matches_central_differences(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (nl, _, p) = common::random_instance(&mut rng, 6, 2, 5);
        let nets = nl.all_nets();
        check(&p, |q| hpwl(&nl, q, &nets).unwrap(), true).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn boundary_matches_central_differences(seed in any::<u64>(), gamma in 1u32..50) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (nl, region, p) = common::random_instance(&mut rng, 6, 0, 2);
        let w = PenaltyWeights::uniform(p.len(), gamma as f64);
        check(&p, |q| boundary_penalty(&nl, &region, q, &w).unwrap(), true).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn hat_matches_central_differences(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (nl, _, _) = common::random_instance(&mut rng, 6, 0, 2);
        // crowd the cells so that many pairs overlap
        let p = common::random_centers(&mut rng, 6, &rbsm::Region::new(60.0, 60.0).unwrap(), 0.0);
        let pairs = common::all_pairs(&nl);
        let w = PenaltyWeights::uniform(p.len(), 3.0);
        check(&p, |q| overlap_penalty_hat(&nl, q, &w, &pairs).unwrap(), true).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn quadratic_matches_central_differences(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (nl, _, _) = common::random_instance(&mut rng, 6, 0, 2);
        let p = common::random_centers(&mut rng, 6, &rbsm::Region::new(60.0, 60.0).unwrap(), 0.0);
        let pairs = common::all_pairs(&nl);
        let w = PenaltyWeights::uniform(p.len(), 1.0);
        // bilinear in each coordinate pair, hence exact under central differences
        check(&p, |q| overlap_penalty_quadratic(&nl, q, &w, &pairs).unwrap(), true).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn mean_field_matches_central_differences(seed in any::<u64>(), alpha in 0.01f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, region, _) = common::random_instance(&mut rng, 1, 0, 0);
        let p = common::random_centers(&mut rng, 7, &region, 0.0);
        check(&p, |q| mean_field(q, alpha), false).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn grid_pairs_give_the_all_pairs_penalty(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (nl, region, _) = common::random_instance(&mut rng, 12, 0, 2);
        let p = common::random_centers(&mut rng, 12, &region, 10.0);
        let w = PenaltyWeights::uniform(p.len(), 7.0);
        let grid = candidate_pairs_for(&nl, &region, &p).unwrap();
        let a = overlap_penalty_hat(&nl, &p, &w, &grid).unwrap();
        let b = overlap_penalty_hat(&nl, &p, &w, &common::all_pairs(&nl)).unwrap();
        prop_assert_eq!(a, b);
    }
}
