//! Brute-force metrics, written without the objective module so the two can
//! check each other.

use rbsm::{CellKind, Netlist, Placement};

fn center(netlist: &Netlist, placement: &Placement, cell: usize) -> (f64, f64) {
    match netlist.cells()[cell].kind {
        CellKind::Terminal { x, y } => (x, y),
        CellKind::Movable => {
            let slot = netlist.slot(rbsm::CellId(cell)).expect("movable cell has a slot");
            (placement.x()[slot], placement.y()[slot])
        }
    }
}

/// Σ over nets of (max − min) in x plus (max − min) in y.
pub fn oracle_hpwl(netlist: &Netlist, placement: &Placement) -> f64 {
    let centers: Vec<(f64, f64)> = (0..netlist.num_cells())
        .map(|c| center(netlist, placement, c))
        .collect();
    let mut total = 0.0;
    for net in netlist.nets() {
        let xs = net.members.iter().map(|c| centers[c.0].0);
        let ys = net.members.iter().map(|c| centers[c.0].1);
        let span = |v: Vec<f64>| {
            let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
            max - min
        };
        total += span(xs.collect()) + span(ys.collect());
    }
    total
}

/// Σ over movable pairs i < j of the rectangle intersection area, O(N²).
pub fn oracle_overlap(netlist: &Netlist, placement: &Placement) -> f64 {
    let rects: Vec<(f64, f64, f64, f64)> = netlist
        .movable()
        .iter()
        .enumerate()
        .map(|(s, &c)| {
            let cell = netlist.cell(c);
            let (x, y) = (placement.x()[s], placement.y()[s]);
            (x - cell.width / 2.0, x + cell.width / 2.0, y - cell.height / 2.0, y + cell.height / 2.0)
        })
        .collect();
    let mut total = 0.0;
    for i in 0..rects.len() {
        for j in i + 1..rects.len() {
            let (a, b) = (rects[i], rects[j]);
            let w = a.1.min(b.1) - a.0.max(b.0);
            let h = a.3.min(b.3) - a.2.max(b.2);
            if w > 0.0 && h > 0.0 {
                total += w * h;
            }
        }
    }
    total
}

/// Slots of movable cells that overlap at least one other cell by more than
/// `tol` in area.
pub fn overlapping_slots(netlist: &Netlist, placement: &Placement, tol: f64) -> Vec<bool> {
    let n = netlist.num_movable();
    let mut hit = vec![false; n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (netlist.movable_cell(i), netlist.movable_cell(j));
            let w = (a.width + b.width) / 2.0 - (placement.x()[i] - placement.x()[j]).abs();
            let h = (a.height + b.height) / 2.0 - (placement.y()[i] - placement.y()[j]).abs();
            if w > 0.0 && h > 0.0 && w * h > tol {
                hit[i] = true;
                hit[j] = true;
            }
        }
    }
    hit
}

/// Every movable cell inside the die, closed intervals.
pub fn in_bounds(netlist: &Netlist, region: &rbsm::Region, placement: &Placement) -> bool {
    (0..netlist.num_movable()).all(|s| {
        let c = netlist.movable_cell(s);
        let (x, y) = (placement.x()[s], placement.y()[s]);
        x - c.width / 2.0 >= 0.0
            && x + c.width / 2.0 <= region.width
            && y - c.height / 2.0 >= 0.0
            && y + c.height / 2.0 <= region.height
    })
}
