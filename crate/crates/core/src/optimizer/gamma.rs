//! Adaptive penalty weights.
//!
//! A weight is the ceiling of the largest coordinate-wise ratio between the
//! wirelength subgradient and the penalty subgradient of its term, floored
//! at 1. Terms whose penalty subgradient vanishes keep `gamma0`.

use crate::objective::{self, boundary_loss, hat_unchecked, CellPair, PenaltyWeights};
use crate::{Netlist, Placement, Region, Result};

/// Weight of one term given its wirelength partials and penalty partials
/// over the same coordinates. Coordinates where the penalty partial is zero
/// are skipped.
pub fn adaptive_gamma(wl_partials: &[f64], penalty_partials: &[f64], gamma0: f64) -> f64 {
    debug_assert_eq!(wl_partials.len(), penalty_partials.len());
    let mut ratio = None::<f64>;
    for (&w, &p) in wl_partials.iter().zip(penalty_partials) {
        if p != 0.0 {
            let r = w.abs() / p.abs();
            ratio = Some(ratio.map_or(r, |m| m.max(r)));
        }
    }
    match ratio {
        None => gamma0,
        Some(r) => r.ceil().max(1.0),
    }
}

/// Recompute all weights at `placement`. Boundary weights cover every
/// movable cell; pair weights are stored for the `pairs` whose hat
/// subgradient is nonzero, all other pairs fall back to `gamma0`.
pub fn adapt_weights(
    netlist: &Netlist,
    region: &Region,
    placement: &Placement,
    pairs: &[CellPair],
    gamma0: f64,
) -> Result<PenaltyWeights> {
    let n = placement.len();
    let wl = if netlist.num_nets() == 0 {
        objective::TermValueGrad::zeros(n)
    } else {
        objective::hpwl(netlist, placement, &netlist.all_nets())?
    };
    let mut weights = PenaltyWeights::uniform(n, gamma0);
    for s in 0..n {
        let cell = netlist.movable_cell(s);
        let (_, dx, dy) = boundary_loss(placement.x[s], placement.y[s], cell.width, cell.height, region);
        weights.boundary[s] = adaptive_gamma(&[wl.grad_x[s], wl.grad_y[s]], &[dx, dy], gamma0);
    }
    for &pair in pairs {
        let (si, sj, wij, hij) = objective::pair_geometry(netlist, pair)?;
        let (_, gx, gy) = hat_unchecked(
            placement.x[si] - placement.x[sj],
            placement.y[si] - placement.y[sj],
            wij,
            hij,
        );
        if gx == 0.0 && gy == 0.0 {
            continue;
        }
        let g = adaptive_gamma(
            &[wl.grad_x[si], wl.grad_y[si], wl.grad_x[sj], wl.grad_y[sj]],
            &[gx, gy, -gx, -gy],
            gamma0,
        );
        weights.overlap.insert(pair, g);
    }
    Ok(weights)
}
