//! Alternating legalization.
//!
//! Each round takes a small HPWL descent step, then scans the movable cells
//! in ascending id and pushes each one out of its lowest-id overlapping
//! partner to exact tangency, then snaps boundary violators back into the
//! die. Overlap-only sweeps continue after the last round until no pair
//! overlaps or the sweep cap is hit.

use serde::{Deserialize, Serialize};

use crate::objective::{hpwl, sign};
use crate::{Error, Netlist, Placement, Region, Result};

/// Which cell a de-overlap step moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveRule {
    /// Only the scanning cell moves.
    Scanning,
    /// Like `Scanning`, but when the move would push the scanning cell out
    /// of the die the partner (or the other axis) is tried first.
    BoundaryAware,
    /// Both cells move half the distance.
    Symmetric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LegalizeConfig {
    pub rounds: usize,
    /// Step of the HPWL descent sub-step; `None` uses 0.01 × mean cell
    /// size, `Some(0.0)` disables it.
    pub wl_lr: Option<f64>,
    pub move_rule: MoveRule,
    pub sweep_cap: usize,
}

impl Default for LegalizeConfig {
    fn default() -> Self {
        LegalizeConfig {
            rounds: 10,
            wl_lr: None,
            move_rule: MoveRule::BoundaryAware,
            sweep_cap: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegalizeReport {
    pub hpwl: f64,
    pub overlap: f64,
    /// Overlap-only sweeps run after the alternating rounds.
    pub sweeps: usize,
    /// No overlapping pair and every cell inside the die.
    pub legal: bool,
}

/// Relative slack under which two cells count as touching, not overlapping.
/// Only absorbs rounding in the tangency arithmetic.
const TOUCH_TOL: f64 = 1e-12;

/// Which axis a de-overlap step resolves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Strict overlap of slots `i` and `j` (extents beyond the tolerance).
pub fn overlapping(netlist: &Netlist, placement: &Placement, i: usize, j: usize) -> bool {
    let (wij, hij) = half_sums(netlist, i, j);
    let lx = wij - (placement.x[i] - placement.x[j]).abs();
    let ly = hij - (placement.y[i] - placement.y[j]).abs();
    lx > TOUCH_TOL * wij && ly > TOUCH_TOL * hij
}

fn half_sums(netlist: &Netlist, i: usize, j: usize) -> (f64, f64) {
    let (a, b) = (netlist.movable_cell(i), netlist.movable_cell(j));
    (0.5 * (a.width + b.width), 0.5 * (a.height + b.height))
}

/// Displacement of slot `i` that makes it tangent to slot `j` along the
/// axis where the hat subgradient is active. Coincident centers resolve in
/// x, moving `i` towards the die center.
pub fn deoverlap_step(
    netlist: &Netlist,
    region: &Region,
    placement: &Placement,
    i: usize,
    j: usize,
) -> Result<(Axis, f64)> {
    if i == j || !overlapping(netlist, placement, i, j) {
        return Err(Error::Invalid(format!(
            "slots {i} and {j} do not overlap; nothing to resolve"
        )));
    }
    let (wij, hij) = half_sums(netlist, i, j);
    let dx = placement.x[i] - placement.x[j];
    let dy = placement.y[i] - placement.y[j];
    if dy.abs() / hij <= dx.abs() / wij {
        let dir = direction(dx, placement.x[j], region.width);
        Ok((Axis::X, dir * (wij - dx.abs())))
    } else {
        let dir = direction(dy, placement.y[j], region.height);
        Ok((Axis::Y, dir * (hij - dy.abs())))
    }
}

fn direction(delta: f64, partner: f64, extent: f64) -> f64 {
    match sign(delta) {
        0.0 if partner > 0.5 * extent => -1.0,
        0.0 => 1.0,
        s => s,
    }
}

/// Displacement that puts slot `i` back inside the die on both axes.
pub fn boundary_snap(netlist: &Netlist, region: &Region, placement: &Placement, i: usize) -> Result<(f64, f64)> {
    let cell = netlist.movable_cell(i);
    if cell.width > region.width || cell.height > region.height {
        return Err(Error::Invalid(format!(
            "cell {} ({}x{}) does not fit in a {}x{} die",
            cell.name, cell.width, cell.height, region.width, region.height
        )));
    }
    let snap = |v: f64, half: f64, extent: f64| v.clamp(half, extent - half) - v;
    Ok((
        snap(placement.x[i], 0.5 * cell.width, region.width),
        snap(placement.y[i], 0.5 * cell.height, region.height),
    ))
}

fn in_bounds(netlist: &Netlist, region: &Region, x: f64, y: f64, i: usize) -> bool {
    let c = netlist.movable_cell(i);
    x >= 0.5 * c.width
        && x <= region.width - 0.5 * c.width
        && y >= 0.5 * c.height
        && y <= region.height - 0.5 * c.height
}

fn shift(p: &mut Placement, i: usize, axis: Axis, d: f64) {
    match axis {
        Axis::X => p.x[i] += d,
        Axis::Y => p.y[i] += d,
    }
}

fn other(axis: Axis) -> Axis {
    match axis {
        Axis::X => Axis::Y,
        Axis::Y => Axis::X,
    }
}

/// Resolve the pair `(i, j)` under `rule`. `rotation` shifts which of the
/// boundary-aware candidates is tried first.
fn resolve(
    netlist: &Netlist,
    region: &Region,
    p: &mut Placement,
    i: usize,
    j: usize,
    rule: MoveRule,
    rotation: usize,
) -> Result<()> {
    let (axis, d) = deoverlap_step(netlist, region, p, i, j)?;
    match rule {
        MoveRule::Scanning => shift(p, i, axis, d),
        MoveRule::Symmetric => {
            shift(p, i, axis, 0.5 * d);
            shift(p, j, axis, -0.5 * d);
        }
        MoveRule::BoundaryAware => {
            let fits = |p: &Placement, s: usize, axis: Axis, d: f64| {
                let (mut x, mut y) = p.get(s);
                match axis {
                    Axis::X => x += d,
                    Axis::Y => y += d,
                }
                in_bounds(netlist, region, x, y, s)
            };
            // separation along the other axis, for the fallbacks
            let (wij, hij) = half_sums(netlist, i, j);
            let (ext, delta, partner, size) = match other(axis) {
                Axis::X => (wij, p.x[i] - p.x[j], p.x[j], region.width),
                Axis::Y => (hij, p.y[i] - p.y[j], p.y[j], region.height),
            };
            let d2 = direction(delta, partner, size) * (ext - delta.abs());
            let candidates = [
                (i, axis, d),
                (j, axis, -d),
                (i, other(axis), d2),
                (j, other(axis), -d2),
            ];
            let start = rotation % candidates.len();
            let ordered = candidates[start..].iter().chain(&candidates[..start]);
            match ordered.copied().find(|&(s, a, d)| fits(p, s, a, d)) {
                Some((s, a, d)) => shift(p, s, a, d),
                None => shift(p, i, axis, d),
            }
        }
    }
    Ok(())
}

/// One scan over all movable slots in ascending id. Returns the number of
/// pairs resolved.
fn sweep(netlist: &Netlist, region: &Region, p: &mut Placement, rule: MoveRule, rotation: usize) -> Result<usize> {
    let n = p.len();
    let mut resolved = 0;
    for i in 0..n {
        if let Some(j) = (0..n).find(|&j| j != i && overlapping(netlist, p, i, j)) {
            resolve(netlist, region, p, i, j, rule, rotation)?;
            resolved += 1;
        }
    }
    for i in 0..n {
        let (dx, dy) = boundary_snap(netlist, region, p, i)?;
        p.x[i] += dx;
        p.y[i] += dy;
    }
    Ok(resolved)
}

/// Exact total overlap area over all movable pairs.
fn total_overlap(netlist: &Netlist, p: &Placement) -> f64 {
    let n = p.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let (wij, hij) = half_sums(netlist, i, j);
            let lx = wij - (p.x[i] - p.x[j]).abs();
            let ly = hij - (p.y[i] - p.y[j]).abs();
            if lx > 0.0 && ly > 0.0 {
                total += lx * ly;
            }
        }
    }
    total
}

fn any_overlap(netlist: &Netlist, p: &Placement) -> bool {
    let n = p.len();
    (0..n).any(|i| (i + 1..n).any(|j| overlapping(netlist, p, i, j)))
}

pub fn legalize(
    netlist: &Netlist,
    region: &Region,
    placement: &Placement,
    config: &LegalizeConfig,
) -> Result<(Placement, LegalizeReport)> {
    netlist.check_placement(placement)?;
    region.check_fits(netlist)?;
    if config.rounds == 0 {
        return Err(Error::Invalid("legalize: rounds must be >= 1".into()));
    }
    let lr = config.wl_lr.unwrap_or_else(|| 0.01 * netlist.mean_cell_size());
    if !(lr >= 0.0 && lr.is_finite()) {
        return Err(Error::Invalid(format!("legalize: wl_lr must be >= 0, got {lr}")));
    }
    let all_nets = netlist.all_nets();
    let mut p = placement.clone();

    for _ in 0..config.rounds {
        if lr > 0.0 && !all_nets.is_empty() {
            let g = hpwl(netlist, &p, &all_nets)?;
            for s in 0..p.len() {
                p.x[s] -= lr * g.grad_x[s];
                p.y[s] -= lr * g.grad_y[s];
            }
        }
        sweep(netlist, region, &mut p, config.move_rule, 0)?;
    }

    let mut sweeps = 0;
    // A sweep that leaves the overlap unchanged is stuck in a cycle; the
    // boundary-aware rule then rotates its preference among the candidate
    // moves so the next sweep resolves the same pairs differently.
    let mut rotation = 0;
    let mut last = total_overlap(netlist, &p);
    while sweeps < config.sweep_cap && any_overlap(netlist, &p) {
        sweep(netlist, region, &mut p, config.move_rule, rotation)?;
        let now = total_overlap(netlist, &p);
        if now >= last {
            rotation += 1;
        }
        last = now;
        sweeps += 1;
    }

    let legal = !any_overlap(netlist, &p)
        && (0..p.len()).all(|s| in_bounds(netlist, region, p.x[s], p.y[s], s));
    let hp = if all_nets.is_empty() {
        0.0
    } else {
        hpwl(netlist, &p, &all_nets)?.value
    };
    let report = LegalizeReport {
        hpwl: hp,
        overlap: total_overlap(netlist, &p),
        sweeps,
        legal,
    };
    Ok((p, report))
}
