//! Terms of the penalty model and their subgradients.
//!
//! Every term returns a [`TermValueGrad`] whose gradient vectors are indexed
//! by movable slot. At a kink the zero element of the subdifferential of
//! `ReLU` / `|.|` is chosen, so feasible points are stationary for the
//! penalties. HPWL ties are broken towards the lowest cell id.

use std::collections::HashMap;

use crate::{CellId, Error, NetId, Netlist, Placement, Region, Result};

/// Unordered pair of movable cells, stored with `.0 < .1`.
pub type CellPair = (CellId, CellId);

pub fn ordered_pair(a: CellId, b: CellId) -> CellPair {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermValueGrad {
    pub value: f64,
    pub grad_x: Vec<f64>,
    pub grad_y: Vec<f64>,
}

impl TermValueGrad {
    pub fn zeros(n: usize) -> Self {
        TermValueGrad {
            value: 0.0,
            grad_x: vec![0.0; n],
            grad_y: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.grad_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grad_x.is_empty()
    }

    pub fn add(&mut self, other: &TermValueGrad) {
        self.value += other.value;
        for (a, b) in self.grad_x.iter_mut().zip(&other.grad_x) {
            *a += b;
        }
        for (a, b) in self.grad_y.iter_mut().zip(&other.grad_y) {
            *a += b;
        }
    }

    /// Euclidean norm over all coordinates.
    pub fn grad_norm(&self) -> f64 {
        self.grad_x
            .iter()
            .chain(&self.grad_y)
            .map(|g| g * g)
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.grad_x.iter().chain(&self.grad_y).all(|g| g.is_finite())
    }
}

/// Per-cell boundary weights and per-pair overlap weights. Pairs without an
/// explicit entry use `gamma0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PenaltyWeights {
    pub gamma0: f64,
    pub boundary: Vec<f64>,
    pub overlap: HashMap<CellPair, f64>,
}

impl PenaltyWeights {
    pub fn uniform(n_movable: usize, gamma: f64) -> Self {
        PenaltyWeights {
            gamma0: gamma,
            boundary: vec![gamma; n_movable],
            overlap: HashMap::new(),
        }
    }

    pub fn pair(&self, pair: CellPair) -> f64 {
        self.overlap.get(&pair).copied().unwrap_or(self.gamma0)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |g: f64| g.is_finite() && g >= 1.0;
        if !ok(self.gamma0)
            || !self.boundary.iter().all(|&g| ok(g))
            || !self.overlap.values().all(|&g| ok(g))
        {
            return Err(Error::Invalid("penalty weights must be finite and >= 1".into()));
        }
        Ok(())
    }
}

/// Sign with `sign(0) = 0` (unlike `f64::signum`).
#[inline]
pub(crate) fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Half-perimeter wirelength of the nets in `nets`.
///
/// Per net and axis the subgradient is `+1` on the member holding the
/// maximum coordinate and `-1` on the one holding the minimum; terminals
/// absorb their share.
pub fn hpwl(netlist: &Netlist, placement: &Placement, nets: &[NetId]) -> Result<TermValueGrad> {
    netlist.check_placement(placement)?;
    if nets.is_empty() {
        return Err(Error::Invalid("hpwl needs a non-empty net subset".into()));
    }
    let mut out = TermValueGrad::zeros(placement.len());
    for &net in nets {
        if net.0 >= netlist.num_nets() {
            return Err(Error::OutOfRange {
                what: "nets",
                index: net.0,
                len: netlist.num_nets(),
            });
        }
        accumulate_net(netlist, placement, net, &mut out);
    }
    Ok(out)
}

fn accumulate_net(netlist: &Netlist, placement: &Placement, net: NetId, out: &mut TermValueGrad) {
    let members = &netlist.net(net).members;
    if members.len() < 2 {
        return;
    }
    // (coordinate, cell) of the extreme members per axis.
    let first = members[0];
    let (fx, fy) = netlist.position(placement, first);
    let (mut max_x, mut min_x, mut max_y, mut min_y) =
        ((fx, first), (fx, first), (fy, first), (fy, first));
    for &c in &members[1..] {
        let (x, y) = netlist.position(placement, c);
        if x > max_x.0 || (x == max_x.0 && c < max_x.1) {
            max_x = (x, c);
        }
        if x < min_x.0 || (x == min_x.0 && c < min_x.1) {
            min_x = (x, c);
        }
        if y > max_y.0 || (y == max_y.0 && c < max_y.1) {
            max_y = (y, c);
        }
        if y < min_y.0 || (y == min_y.0 && c < min_y.1) {
            min_y = (y, c);
        }
    }
    out.value += (max_x.0 - min_x.0) + (max_y.0 - min_y.0);
    if let Some(s) = netlist.slot(max_x.1) {
        out.grad_x[s] += 1.0;
    }
    if let Some(s) = netlist.slot(min_x.1) {
        out.grad_x[s] -= 1.0;
    }
    if let Some(s) = netlist.slot(max_y.1) {
        out.grad_y[s] += 1.0;
    }
    if let Some(s) = netlist.slot(min_y.1) {
        out.grad_y[s] -= 1.0;
    }
}

/// Unweighted boundary loss of one cell centered at `(x, y)`, with its
/// partials.
pub fn boundary_loss(x: f64, y: f64, w: f64, h: f64, region: &Region) -> (f64, f64, f64) {
    let mut v = 0.0;
    let (mut dx, mut dy) = (0.0, 0.0);
    let left = 0.5 * w - x;
    if left > 0.0 {
        v += left;
        dx -= 1.0;
    }
    let right = x - (region.width - 0.5 * w);
    if right > 0.0 {
        v += right;
        dx += 1.0;
    }
    let bottom = 0.5 * h - y;
    if bottom > 0.0 {
        v += bottom;
        dy -= 1.0;
    }
    let top = y - (region.height - 0.5 * h);
    if top > 0.0 {
        v += top;
        dy += 1.0;
    }
    (v, dx, dy)
}

/// `Σ γ_i ℓ_b` over all movable cells.
pub fn boundary_penalty(
    netlist: &Netlist,
    region: &Region,
    placement: &Placement,
    weights: &PenaltyWeights,
) -> Result<TermValueGrad> {
    let slots: Vec<usize> = (0..placement.len()).collect();
    boundary_penalty_for(netlist, region, placement, weights, &slots)
}

/// Boundary penalty restricted to the given movable slots.
pub fn boundary_penalty_for(
    netlist: &Netlist,
    region: &Region,
    placement: &Placement,
    weights: &PenaltyWeights,
    slots: &[usize],
) -> Result<TermValueGrad> {
    netlist.check_placement(placement)?;
    if weights.boundary.len() != placement.len() {
        return Err(Error::Dimension {
            expected: placement.len(),
            got: weights.boundary.len(),
        });
    }
    let mut out = TermValueGrad::zeros(placement.len());
    for &s in slots {
        if s >= placement.len() {
            return Err(Error::OutOfRange {
                what: "movable slots",
                index: s,
                len: placement.len(),
            });
        }
        let cell = netlist.movable_cell(s);
        let (v, dx, dy) = boundary_loss(placement.x[s], placement.y[s], cell.width, cell.height, region);
        let g = weights.boundary[s];
        out.value += g * v;
        out.grad_x[s] += g * dx;
        out.grad_y[s] += g * dy;
    }
    Ok(out)
}

/// Two-dimensional piecewise-linear hat with support `|x| < r`, `|y| < t`,
/// peaking at 1 in the origin. Returns `(value, ∂x, ∂y)`.
///
/// The x-branch `1 - |x|/r` is taken whenever `|y|/t <= |x|/r`.
pub fn hat(x: f64, y: f64, r: f64, t: f64) -> Result<(f64, f64, f64)> {
    if !(r > 0.0 && t > 0.0) {
        return Err(Error::Invalid(format!("hat needs r > 0 and t > 0, got r={r}, t={t}")));
    }
    Ok(hat_unchecked(x, y, r, t))
}

#[inline]
pub(crate) fn hat_unchecked(x: f64, y: f64, r: f64, t: f64) -> (f64, f64, f64) {
    let ax = x.abs() / r;
    let ay = y.abs() / t;
    if ax >= 1.0 || ay >= 1.0 {
        (0.0, 0.0, 0.0)
    } else if ay <= ax {
        (1.0 - ax, -sign(x) / r, 0.0)
    } else {
        (1.0 - ay, 0.0, -sign(y) / t)
    }
}

/// Slots and half-sum extents `(w_ij, h_ij)` of a movable pair.
pub(crate) fn pair_geometry(
    netlist: &Netlist,
    pair: CellPair,
) -> Result<(usize, usize, f64, f64)> {
    let (a, b) = pair;
    for c in [a, b] {
        if c.0 >= netlist.num_cells() {
            return Err(Error::OutOfRange {
                what: "cells",
                index: c.0,
                len: netlist.num_cells(),
            });
        }
    }
    if a == b {
        return Err(Error::Invalid(format!("pair ({a}, {a}) repeats a cell")));
    }
    let (sa, sb) = match (netlist.slot(a), netlist.slot(b)) {
        (Some(sa), Some(sb)) => (sa, sb),
        _ => {
            return Err(Error::Invalid(format!(
                "pair ({a}, {b}) references a terminal; overlap is only defined for movable cells"
            )))
        }
    };
    let (ca, cb) = (netlist.cell(a), netlist.cell(b));
    Ok((
        sa,
        sb,
        0.5 * (ca.width + cb.width),
        0.5 * (ca.height + cb.height),
    ))
}

/// `Σ γ_ij φ_{w_ij,h_ij}(x_i − x_j, y_i − y_j)` over `pairs`.
pub fn overlap_penalty_hat(
    netlist: &Netlist,
    placement: &Placement,
    weights: &PenaltyWeights,
    pairs: &[CellPair],
) -> Result<TermValueGrad> {
    netlist.check_placement(placement)?;
    let mut out = TermValueGrad::zeros(placement.len());
    for &(a, b) in pairs {
        let (si, sj, wij, hij) = pair_geometry(netlist, (a, b))?;
        let (v, gx, gy) = hat_unchecked(
            placement.x[si] - placement.x[sj],
            placement.y[si] - placement.y[sj],
            wij,
            hij,
        );
        if v == 0.0 && gx == 0.0 && gy == 0.0 {
            continue;
        }
        let g = weights.pair(ordered_pair(a, b));
        out.value += g * v;
        out.grad_x[si] += g * gx;
        out.grad_x[sj] -= g * gx;
        out.grad_y[si] += g * gy;
        out.grad_y[sj] -= g * gy;
    }
    Ok(out)
}

/// Product of the axis overlap extents, `Σ γ_ij ReLU(w_ij − |Δx|)·ReLU(h_ij − |Δy|)`.
/// Equals the rectangle overlap area for unit weights. Kept for comparing
/// gradient behavior near tangency against the hat penalty.
pub fn overlap_penalty_quadratic(
    netlist: &Netlist,
    placement: &Placement,
    weights: &PenaltyWeights,
    pairs: &[CellPair],
) -> Result<TermValueGrad> {
    netlist.check_placement(placement)?;
    let mut out = TermValueGrad::zeros(placement.len());
    for &(a, b) in pairs {
        let (si, sj, wij, hij) = pair_geometry(netlist, (a, b))?;
        let dx = placement.x[si] - placement.x[sj];
        let dy = placement.y[si] - placement.y[sj];
        let lx = (wij - dx.abs()).max(0.0);
        let ly = (hij - dy.abs()).max(0.0);
        if lx == 0.0 || ly == 0.0 {
            continue;
        }
        let g = weights.pair(ordered_pair(a, b));
        let gx = -g * ly * sign(dx);
        let gy = -g * lx * sign(dy);
        out.value += g * lx * ly;
        out.grad_x[si] += gx;
        out.grad_x[sj] -= gx;
        out.grad_y[si] += gy;
        out.grad_y[sj] -= gy;
    }
    Ok(out)
}

/// Rectangle overlap area of a movable pair.
pub fn pair_overlap_area(netlist: &Netlist, placement: &Placement, pair: CellPair) -> Result<f64> {
    let (si, sj, wij, hij) = pair_geometry(netlist, pair)?;
    let lx = wij - (placement.x[si] - placement.x[sj]).abs();
    let ly = hij - (placement.y[si] - placement.y[sj]).abs();
    Ok(if lx > 0.0 && ly > 0.0 { lx * ly } else { 0.0 })
}

/// Summed overlap area over `pairs`, typically the grid candidates.
pub fn overlap_area(netlist: &Netlist, placement: &Placement, pairs: &[CellPair]) -> Result<f64> {
    pairs
        .iter()
        .map(|&p| pair_overlap_area(netlist, placement, p))
        .sum()
}

/// `α Σ_i ‖p_i − p̄‖²` with `p̄` the mean of the movable centers. The
/// gradient treats `p̄` as fixed: `2α (p_i − p̄)`.
pub fn mean_field(placement: &Placement, alpha: f64) -> TermValueGrad {
    let n = placement.len();
    let mut out = TermValueGrad::zeros(n);
    if n == 0 || alpha == 0.0 {
        return out;
    }
    let mx = placement.x.iter().sum::<f64>() / n as f64;
    let my = placement.y.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        let dx = placement.x[i] - mx;
        let dy = placement.y[i] - my;
        out.value += alpha * (dx * dx + dy * dy);
        out.grad_x[i] = 2.0 * alpha * dx;
        out.grad_y[i] = 2.0 * alpha * dy;
    }
    out
}

/// Full objective: HPWL over all nets plus boundary, hat-overlap (over
/// `pairs`) and mean-field terms.
pub fn total_objective(
    netlist: &Netlist,
    region: &Region,
    placement: &Placement,
    weights: &PenaltyWeights,
    alpha: f64,
    pairs: &[CellPair],
) -> Result<f64> {
    let wl = if netlist.num_nets() == 0 {
        0.0
    } else {
        hpwl(netlist, placement, &netlist.all_nets())?.value
    };
    let b = boundary_penalty(netlist, region, placement, weights)?.value;
    let o = overlap_penalty_hat(netlist, placement, weights, pairs)?.value;
    let m = mean_field(placement, alpha).value;
    Ok(wl + b + o + m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Cell;
    use approx::assert_relative_eq;

    fn ids(v: &[usize]) -> Vec<CellId> {
        v.iter().copied().map(CellId).collect()
    }

    fn squares(n: usize, side: f64) -> Netlist {
        let cells = (0..n).map(|i| Cell::movable(format!("c{i}"), side, side)).collect();
        Netlist::build(cells, vec![]).unwrap()
    }

    #[test]
    fn two_pin_net() {
        let cells = vec![Cell::movable("a", 1.0, 1.0), Cell::movable("b", 1.0, 1.0)];
        let nl = Netlist::build(cells, vec![ids(&[0, 1])]).unwrap();
        let p = Placement::new(vec![0.0, 3.0], vec![0.0, 4.0]).unwrap();
        let t = hpwl(&nl, &p, &[NetId(0)]).unwrap();
        assert_eq!(t.value, 7.0);
        assert_eq!(t.grad_x, vec![-1.0, 1.0]);
        assert_eq!(t.grad_y, vec![-1.0, 1.0]);
    }

    #[test]
    fn single_member_net_is_zero() {
        let nl = Netlist::build(vec![Cell::movable("a", 1.0, 1.0)], vec![ids(&[0])]).unwrap();
        let p = Placement::new(vec![2.0], vec![5.0]).unwrap();
        let t = hpwl(&nl, &p, &[NetId(0)]).unwrap();
        assert_eq!(t.value, 0.0);
        assert_eq!(t.grad_x, vec![0.0]);
    }

    #[test]
    fn hpwl_errors_and_ties() {
        let nl = squares(3, 1.0);
        let nl = Netlist::build(nl.cells().to_vec(), vec![ids(&[2, 0, 1])]).unwrap();
        let p = Placement::new(vec![1.0, 1.0, 1.0], vec![0.0, 2.0, 2.0]).unwrap();
        assert!(hpwl(&nl, &p, &[]).is_err());
        assert!(matches!(hpwl(&nl, &p, &[NetId(3)]), Err(Error::OutOfRange { .. })));
        let t = hpwl(&nl, &p, &[NetId(0)]).unwrap();
        // x: all tied, max and min both resolve to cell 0 and cancel.
        assert_eq!(t.grad_x, vec![0.0, 0.0, 0.0]);
        // y: max tie between cells 1 and 2 goes to 1, min is cell 0.
        assert_eq!(t.grad_y, vec![-1.0, 1.0, 0.0]);
    }

    #[test]
    fn terminals_absorb_gradient() {
        let cells = vec![Cell::movable("a", 1.0, 1.0), Cell::terminal("p", 10.0, -2.0)];
        let nl = Netlist::build(cells, vec![ids(&[0, 1])]).unwrap();
        let p = Placement::new(vec![0.0], vec![0.0]).unwrap();
        let t = hpwl(&nl, &p, &[NetId(0)]).unwrap();
        assert_eq!(t.value, 12.0);
        assert_eq!((t.grad_x[0], t.grad_y[0]), (-1.0, 1.0));
    }

    #[test]
    fn boundary_cases() {
        let region = Region::new(10.0, 10.0).unwrap();
        let nl = Netlist::build(vec![Cell::movable("a", 2.0, 2.0)], vec![]).unwrap();
        let w = PenaltyWeights::uniform(1, 1.0);

        let inside = Placement::new(vec![5.0], vec![5.0]).unwrap();
        let t = boundary_penalty(&nl, &region, &inside, &w).unwrap();
        assert_eq!((t.value, t.grad_x[0], t.grad_y[0]), (0.0, 0.0, 0.0));

        let left = Placement::new(vec![-1.0], vec![5.0]).unwrap();
        let t = boundary_penalty(&nl, &region, &left, &w).unwrap();
        assert_eq!((t.value, t.grad_x[0], t.grad_y[0]), (2.0, -1.0, 0.0));

        let kink = Placement::new(vec![1.0], vec![9.0]).unwrap();
        let t = boundary_penalty(&nl, &region, &kink, &w).unwrap();
        assert_eq!((t.value, t.grad_x[0], t.grad_y[0]), (0.0, 0.0, 0.0));

        let corner = Placement::new(vec![12.0], vec![-3.0]).unwrap();
        let t = boundary_penalty(&nl, &region, &corner, &PenaltyWeights::uniform(1, 3.0)).unwrap();
        assert_eq!((t.value, t.grad_x[0], t.grad_y[0]), (3.0 * (3.0 + 4.0), 3.0, -3.0));
    }

    #[test]
    fn hat_values() {
        assert_eq!(hat(0.0, 0.0, 1.0, 1.0).unwrap(), (1.0, 0.0, 0.0));
        assert_eq!(hat(2.0, 1.0, 2.0, 4.0).unwrap(), (0.0, 0.0, 0.0));
        assert_eq!(hat(1.0, 1.0, 2.0, 4.0).unwrap(), (0.5, -0.5, 0.0));
        assert_eq!(hat(-0.5, 3.0, 2.0, 4.0).unwrap(), (0.25, 0.0, -0.25));
        // on the branch boundary |y|/t == |x|/r the x-branch wins
        assert_eq!(hat(-1.0, 2.0, 2.0, 4.0).unwrap(), (0.5, 0.5, 0.0));
        assert!(hat(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(hat(0.0, 0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn hat_penalty_cases() {
        let nl = squares(2, 1.0);
        let w = PenaltyWeights::uniform(2, 1.0);
        let pair = [(CellId(0), CellId(1))];
        let same = Placement::new(vec![3.0, 3.0], vec![3.0, 3.0]).unwrap();
        let t = overlap_penalty_hat(&nl, &same, &w, &pair).unwrap();
        assert_eq!(t.value, 1.0);
        assert_eq!(t.grad_x, vec![0.0, 0.0]);
        assert_eq!(t.grad_y, vec![0.0, 0.0]);

        let apart = Placement::new(vec![0.0, 5.0], vec![0.0, 0.0]).unwrap();
        let t = overlap_penalty_hat(&nl, &apart, &w, &pair).unwrap();
        assert_eq!(t, TermValueGrad::zeros(2));

        let shifted = Placement::new(vec![0.0, 0.5], vec![0.0, 0.25]).unwrap();
        let t = overlap_penalty_hat(&nl, &shifted, &w, &pair).unwrap();
        assert_eq!(t.value, 0.5);
        assert_eq!(t.grad_x, vec![1.0, -1.0]);
    }

    #[test]
    fn terminal_pairs_rejected() {
        let cells = vec![Cell::movable("a", 1.0, 1.0), Cell::terminal("p", 0.0, 0.0)];
        let nl = Netlist::build(cells, vec![]).unwrap();
        let p = Placement::zeros(1);
        let w = PenaltyWeights::uniform(1, 1.0);
        let err = overlap_penalty_hat(&nl, &p, &w, &[(CellId(0), CellId(1))]).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
        assert!(overlap_penalty_quadratic(&nl, &p, &w, &[(CellId(0), CellId(0))]).is_err());
    }

    #[test]
    fn quadratic_is_overlap_area() {
        let nl = squares(2, 1.0);
        let w = PenaltyWeights::uniform(2, 1.0);
        let pair = [(CellId(0), CellId(1))];
        let p = Placement::new(vec![0.0, 0.5], vec![0.0, 0.5]).unwrap();
        let t = overlap_penalty_quadratic(&nl, &p, &w, &pair).unwrap();
        assert_relative_eq!(t.value, 0.25);
        assert_eq!(t.grad_x, vec![0.5, -0.5]);
        let apart = Placement::new(vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(overlap_penalty_quadratic(&nl, &apart, &w, &pair).unwrap().value, 0.0);
    }

    #[test]
    fn quadratic_gradient_vanishes_near_tangency() {
        let nl = squares(2, 2.0);
        let w = PenaltyWeights::uniform(2, 1.0);
        let pair = [(CellId(0), CellId(1))];
        for eps in [1e-2, 1e-4, 1e-6] {
            // x penetration eps, y penetration eps
            let p = Placement::new(vec![0.0, 2.0 - eps], vec![0.0, 2.0 - eps]).unwrap();
            let t = overlap_penalty_quadratic(&nl, &p, &w, &pair).unwrap();
            let g = t.grad_x[0].abs().max(t.grad_y[0].abs());
            assert_relative_eq!(g, eps, max_relative = 1e-6);
            let h = overlap_penalty_hat(&nl, &p, &w, &pair).unwrap();
            assert_eq!(h.grad_x[0].abs().max(h.grad_y[0].abs()), 0.5);
        }
    }

    #[test]
    fn mean_field_cases() {
        let p = Placement::new(vec![4.0, 4.0, 4.0], vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(mean_field(&p, 5.0), TermValueGrad::zeros(3));

        let p = Placement::new(vec![0.0, 2.0], vec![0.0, 0.0]).unwrap();
        let t = mean_field(&p, 1.0);
        assert_eq!(t.value, 2.0);
        assert_eq!(t.grad_x, vec![-2.0, 2.0]);
        assert_eq!(t.grad_y, vec![0.0, 0.0]);

        assert_eq!(mean_field(&p, 0.0), TermValueGrad::zeros(2));
        assert_eq!(mean_field(&Placement::zeros(0), 1.0).value, 0.0);
    }

    #[test]
    fn total_objective_compositional() {
        let cells = vec![
            Cell::movable("a", 2.0, 2.0),
            Cell::movable("b", 2.0, 2.0),
            Cell::movable("c", 1.0, 3.0),
        ];
        let nl = Netlist::build(cells, vec![ids(&[0, 1]), ids(&[1, 2])]).unwrap();
        let region = Region::new(10.0, 10.0).unwrap();
        let pairs = vec![(CellId(0), CellId(1)), (CellId(0), CellId(2)), (CellId(1), CellId(2))];
        let w = PenaltyWeights::uniform(3, 7.0);

        // feasible and overlap-free: penalties vanish
        let legal = Placement::new(vec![2.0, 5.0, 8.0], vec![2.0, 5.0, 8.0]).unwrap();
        let total = total_objective(&nl, &region, &legal, &w, 0.5, &pairs).unwrap();
        let wl = hpwl(&nl, &legal, &nl.all_nets()).unwrap().value;
        let mf = mean_field(&legal, 0.5).value;
        assert_eq!(total, wl + mf);
        let doubled = PenaltyWeights::uniform(3, 14.0);
        assert_eq!(total_objective(&nl, &region, &legal, &doubled, 0.5, &pairs).unwrap(), total);

        let bad = Placement::new(vec![0.5, 1.0, 9.8], vec![1.0, 1.5, 9.0]).unwrap();
        let total = total_objective(&nl, &region, &bad, &w, 0.5, &pairs).unwrap();
        let parts = hpwl(&nl, &bad, &nl.all_nets()).unwrap().value
            + boundary_penalty(&nl, &region, &bad, &w).unwrap().value
            + overlap_penalty_hat(&nl, &bad, &w, &pairs).unwrap().value
            + mean_field(&bad, 0.5).value;
        assert_relative_eq!(total, parts, max_relative = 1e-15);
    }
}
