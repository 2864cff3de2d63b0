//! Uniform-grid broad phase for candidate overlapping pairs.
//!
//! Each movable cell is inserted into every bin its closed rectangle
//! touches, so any two intersecting rectangles share at least one bin for
//! every positive bin size. Coordinates outside the die are clamped into a
//! one-bin halo ring.

use crate::objective::CellPair;
use crate::{CellId, Error, Netlist, Placement, Region, Result};

const MAX_BINS: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq)]
pub struct UniformGrid {
    pub bin_w: f64,
    pub bin_h: f64,
    /// Bins across the die, halo excluded.
    pub nx: usize,
    pub ny: usize,
    /// `(nx + 2) * (ny + 2)` bins, row-major, halo included.
    occupancy: Vec<Vec<CellId>>,
}

impl UniformGrid {
    /// Members of bin `(ix, iy)` where `-1 ..= nx` and `-1 ..= ny` are valid.
    pub fn bin(&self, ix: isize, iy: isize) -> &[CellId] {
        let stride = self.nx + 2;
        &self.occupancy[(iy + 1) as usize * stride + (ix + 1) as usize]
    }

    /// Non-empty bins.
    pub fn occupied(&self) -> impl Iterator<Item = &[CellId]> {
        self.occupancy.iter().filter(|b| !b.is_empty()).map(Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.occupancy.iter().all(Vec::is_empty)
    }

    fn span(lo: f64, hi: f64, bin: f64, n: usize) -> (usize, usize) {
        let clamp = |v: f64| ((v / bin).floor().clamp(-1.0, n as f64) + 1.0) as usize;
        (clamp(lo), clamp(hi))
    }
}

/// Largest movable width and height, the default bin size.
pub fn default_bin_size(netlist: &Netlist) -> (f64, f64) {
    let (w, h) = netlist.max_cell_dims();
    (if w > 0.0 { w } else { 1.0 }, if h > 0.0 { h } else { 1.0 })
}

pub fn build_grid(
    netlist: &Netlist,
    region: &Region,
    placement: &Placement,
    bin_w: f64,
    bin_h: f64,
) -> Result<UniformGrid> {
    netlist.check_placement(placement)?;
    if !(bin_w > 0.0 && bin_h > 0.0 && bin_w.is_finite() && bin_h.is_finite()) {
        return Err(Error::Invalid(format!("bin size must be positive, got {bin_w}x{bin_h}")));
    }
    let nx = (region.width / bin_w).ceil().max(1.0) as usize;
    let ny = (region.height / bin_h).ceil().max(1.0) as usize;
    if (nx + 2).saturating_mul(ny + 2) > MAX_BINS {
        return Err(Error::Invalid(format!("grid of {nx}x{ny} bins is too fine")));
    }
    let stride = nx + 2;
    let mut occupancy = vec![Vec::new(); stride * (ny + 2)];
    for (slot, &cell) in netlist.movable().iter().enumerate() {
        let c = netlist.cell(cell);
        let (x, y) = placement.get(slot);
        let (x0, x1) = UniformGrid::span(x - 0.5 * c.width, x + 0.5 * c.width, bin_w, nx);
        let (y0, y1) = UniformGrid::span(y - 0.5 * c.height, y + 0.5 * c.height, bin_h, ny);
        for iy in y0..=y1 {
            for ix in x0..=x1 {
                occupancy[iy * stride + ix].push(cell);
            }
        }
    }
    Ok(UniformGrid {
        bin_w,
        bin_h,
        nx,
        ny,
        occupancy,
    })
}

/// Every unordered pair sharing a bin, once, sorted.
pub fn candidate_pairs(grid: &UniformGrid) -> Vec<CellPair> {
    let mut pairs = Vec::new();
    for members in grid.occupied() {
        for (k, &a) in members.iter().enumerate() {
            for &b in &members[k + 1..] {
                pairs.push(if a < b { (a, b) } else { (b, a) });
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Grid with the default bin size, then its candidate pairs.
pub fn candidate_pairs_for(
    netlist: &Netlist,
    region: &Region,
    placement: &Placement,
) -> Result<Vec<CellPair>> {
    let (bw, bh) = default_bin_size(netlist);
    Ok(candidate_pairs(&build_grid(netlist, region, placement, bw, bh)?))
}
