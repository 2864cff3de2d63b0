#![allow(dead_code)]

use rand::Rng;
use rbsm::{Cell, CellId, Netlist, Placement, Region};

/// Random movable cells, a few terminals and 2–4-pin nets. Centers are
/// drawn from a box slightly larger than the die so that boundary terms
/// are exercised too.
pub fn random_instance<R: Rng>(rng: &mut R, n_movable: usize, n_terminals: usize, n_nets: usize) -> (Netlist, Region, Placement) {
    let region = Region::new(rng.random_range(100.0..300.0), rng.random_range(100.0..300.0)).unwrap();
    let mut cells = Vec::new();
    for i in 0..n_movable {
        cells.push(Cell::movable(format!("b{i}"), rng.random_range(5.0..40.0), rng.random_range(5.0..40.0)));
    }
    for i in 0..n_terminals {
        cells.push(Cell::terminal(
            format!("p{i}"),
            rng.random_range(0.0..region.width),
            rng.random_range(0.0..region.height),
        ));
    }
    let n = cells.len();
    let nets = (0..n_nets)
        .map(|_| {
            let k = rng.random_range(2..=4.min(n));
            rand::seq::index::sample(rng, n, k).into_iter().map(CellId).collect()
        })
        .collect();
    let netlist = Netlist::build(cells, nets).unwrap();
    let placement = random_centers(rng, n_movable, &region, 20.0);
    (netlist, region, placement)
}

pub fn random_centers<R: Rng>(rng: &mut R, n: usize, region: &Region, slack: f64) -> Placement {
    let x = (0..n).map(|_| rng.random_range(-slack..region.width + slack)).collect();
    let y = (0..n).map(|_| rng.random_range(-slack..region.height + slack)).collect();
    Placement::new(x, y).unwrap()
}

/// Brute-force list of every movable pair.
pub fn all_pairs(netlist: &Netlist) -> Vec<(CellId, CellId)> {
    let m = netlist.movable();
    let mut out = Vec::new();
    for a in 0..m.len() {
        for b in a + 1..m.len() {
            out.push((m[a], m[b]));
        }
    }
    out
}
