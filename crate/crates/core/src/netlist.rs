//! Circuit hypergraph, die region and placement vectors.
//!
//! Cell and net ids are dense indices into [`Netlist::cells`] and
//! [`Netlist::nets`]. Movable cells additionally get a *slot*: their index in
//! the coordinate vectors of a [`Placement`]. Terminals have no slot.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NetId(pub usize);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for NetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CellKind {
    Movable,
    /// Fixed pad; the position is the pin location used for wirelength.
    Terminal { x: f64, y: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub name: String,
    pub width: f64,
    pub height: f64,
    pub kind: CellKind,
}

impl Cell {
    pub fn movable(name: impl Into<String>, width: f64, height: f64) -> Self {
        Cell {
            name: name.into(),
            width,
            height,
            kind: CellKind::Movable,
        }
    }

    /// A zero-size pad fixed at `(x, y)`.
    pub fn terminal(name: impl Into<String>, x: f64, y: f64) -> Self {
        Cell {
            name: name.into(),
            width: 0.0,
            height: 0.0,
            kind: CellKind::Terminal { x, y },
        }
    }

    pub fn is_movable(&self) -> bool {
        matches!(self.kind, CellKind::Movable)
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Net {
    pub members: Vec<CellId>,
}

impl Net {
    pub fn degree(&self) -> usize {
        self.members.len()
    }
}

/// Hypergraph of cells and nets. Immutable once built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Netlist {
    cells: Vec<Cell>,
    nets: Vec<Net>,
    incidence: Vec<Vec<NetId>>,
    slot_of: Vec<Option<usize>>,
    movable: Vec<CellId>,
}

impl Netlist {
    /// Validates cells and nets, removes duplicate members inside each net
    /// (first occurrence wins) and derives the cell-to-net incidence lists.
    pub fn build(cells: Vec<Cell>, nets: Vec<Vec<CellId>>) -> Result<Self> {
        for (i, c) in cells.iter().enumerate() {
            let dims_ok = c.width.is_finite() && c.height.is_finite();
            match c.kind {
                CellKind::Movable => {
                    if !dims_ok || c.width <= 0.0 || c.height <= 0.0 {
                        return Err(Error::Invalid(format!(
                            "movable cell {i} ({}) must have positive finite size, got {}x{}",
                            c.name, c.width, c.height
                        )));
                    }
                }
                CellKind::Terminal { x, y } => {
                    if !dims_ok || c.width < 0.0 || c.height < 0.0 {
                        return Err(Error::Invalid(format!(
                            "terminal {i} ({}) has invalid size {}x{}",
                            c.name, c.width, c.height
                        )));
                    }
                    if !x.is_finite() || !y.is_finite() {
                        return Err(Error::NonFinite(format!("terminal {i} position")));
                    }
                }
            }
        }

        let mut incidence = vec![Vec::new(); cells.len()];
        let mut seen = vec![usize::MAX; cells.len()];
        let mut built = Vec::with_capacity(nets.len());
        for (k, members) in nets.into_iter().enumerate() {
            if members.is_empty() {
                return Err(Error::Invalid(format!("net {k} has no members")));
            }
            let mut dedup = Vec::with_capacity(members.len());
            for m in members {
                if m.0 >= cells.len() {
                    return Err(Error::DanglingCell { net: k, cell: m.0 });
                }
                if seen[m.0] != k {
                    seen[m.0] = k;
                    dedup.push(m);
                    incidence[m.0].push(NetId(k));
                }
            }
            built.push(Net { members: dedup });
        }

        let mut slot_of = vec![None; cells.len()];
        let mut movable = Vec::new();
        for (i, c) in cells.iter().enumerate() {
            if c.is_movable() {
                slot_of[i] = Some(movable.len());
                movable.push(CellId(i));
            }
        }

        Ok(Netlist {
            cells,
            nets: built,
            incidence,
            slot_of,
            movable,
        })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.0]
    }

    pub fn nets(&self) -> &[Net] {
        &self.nets
    }

    pub fn net(&self, id: NetId) -> &Net {
        &self.nets[id.0]
    }

    /// Nets containing `cell`, in ascending net order.
    pub fn incidence(&self, cell: CellId) -> &[NetId] {
        &self.incidence[cell.0]
    }

    /// Placement slot of a movable cell; `None` for terminals.
    pub fn slot(&self, cell: CellId) -> Option<usize> {
        self.slot_of[cell.0]
    }

    /// Movable cells in slot order.
    pub fn movable(&self) -> &[CellId] {
        &self.movable
    }

    pub fn movable_cell(&self, slot: usize) -> &Cell {
        &self.cells[self.movable[slot].0]
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_movable(&self) -> usize {
        self.movable.len()
    }

    pub fn num_terminals(&self) -> usize {
        self.cells.len() - self.movable.len()
    }

    pub fn num_nets(&self) -> usize {
        self.nets.len()
    }

    /// Sum of member counts over all nets.
    pub fn num_pins(&self) -> usize {
        self.nets.iter().map(Net::degree).sum()
    }

    pub fn all_nets(&self) -> Vec<NetId> {
        (0..self.nets.len()).map(NetId).collect()
    }

    pub fn total_movable_area(&self) -> f64 {
        self.movable.iter().map(|&c| self.cells[c.0].area()).sum()
    }

    /// Mean of `(w + h) / 2` over movable cells.
    pub fn mean_cell_size(&self) -> f64 {
        if self.movable.is_empty() {
            return 0.0;
        }
        let s: f64 = self
            .movable
            .iter()
            .map(|&c| 0.5 * (self.cells[c.0].width + self.cells[c.0].height))
            .sum();
        s / self.movable.len() as f64
    }

    /// Largest movable width and height.
    pub fn max_cell_dims(&self) -> (f64, f64) {
        self.movable.iter().fold((0.0f64, 0.0f64), |(w, h), &c| {
            (w.max(self.cells[c.0].width), h.max(self.cells[c.0].height))
        })
    }

    pub fn check_placement(&self, placement: &Placement) -> Result<()> {
        if placement.len() != self.movable.len() {
            return Err(Error::Dimension {
                expected: self.movable.len(),
                got: placement.len(),
            });
        }
        Ok(())
    }

    /// Coordinates of any cell: slot position for movable cells, the fixed
    /// position for terminals.
    pub fn position(&self, placement: &Placement, cell: CellId) -> (f64, f64) {
        match self.cells[cell.0].kind {
            CellKind::Terminal { x, y } => (x, y),
            CellKind::Movable => {
                let s = self.slot_of[cell.0].expect("movable cell has a slot");
                (placement.x[s], placement.y[s])
            }
        }
    }
}

/// For every net, the number of distinct other nets sharing at least one
/// cell (terminals included) with it.
pub fn net_degrees(netlist: &Netlist) -> Vec<usize> {
    let m = netlist.num_nets();
    let mut stamp = vec![usize::MAX; m];
    let mut out = Vec::with_capacity(m);
    for (k, net) in netlist.nets().iter().enumerate() {
        stamp[k] = k;
        let mut count = 0;
        for &c in &net.members {
            for &other in netlist.incidence(c) {
                if stamp[other.0] != k {
                    stamp[other.0] = k;
                    count += 1;
                }
            }
        }
        out.push(count);
    }
    out
}

/// The die `(0,0)–(width,height)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub width: f64,
    pub height: f64,
}

impl Region {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        if !(width.is_finite() && height.is_finite() && width > 0.0 && height > 0.0) {
            return Err(Error::Invalid(format!(
                "region must have positive finite size, got {width}x{height}"
            )));
        }
        Ok(Region { width, height })
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    /// Every movable cell must fit inside the die.
    pub fn check_fits(&self, netlist: &Netlist) -> Result<()> {
        for &c in netlist.movable() {
            let cell = netlist.cell(c);
            if cell.width > self.width || cell.height > self.height {
                return Err(Error::Invalid(format!(
                    "cell {} ({}x{}) does not fit in the {}x{} region",
                    cell.name, cell.width, cell.height, self.width, self.height
                )));
            }
        }
        Ok(())
    }
}

impl Default for Region {
    fn default() -> Self {
        Region {
            width: 800.0,
            height: 800.0,
        }
    }
}

/// Center coordinates of the movable cells, indexed by slot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub(crate) x: Vec<f64>,
    pub(crate) y: Vec<f64>,
}

impl Placement {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Dimension {
                expected: x.len(),
                got: y.len(),
            });
        }
        if let Some(i) = x.iter().chain(&y).position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("placement coordinate {i}")));
        }
        Ok(Placement { x, y })
    }

    pub fn zeros(n: usize) -> Self {
        Placement {
            x: vec![0.0; n],
            y: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn get(&self, slot: usize) -> (f64, f64) {
        (self.x[slot], self.y[slot])
    }

    pub fn set(&mut self, slot: usize, x: f64, y: f64) -> Result<()> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::NonFinite(format!("position of slot {slot}")));
        }
        self.x[slot] = x;
        self.y[slot] = y;
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cells(n: usize) -> Vec<Cell> {
        (0..n).map(|i| Cell::movable(format!("c{i}"), 1.0, 1.0)).collect()
    }

    fn ids(v: &[usize]) -> Vec<CellId> {
        v.iter().copied().map(CellId).collect()
    }

    #[test]
    fn smallest_hypergraph() {
        let nl = Netlist::build(unit_cells(2), vec![ids(&[0, 1])]).unwrap();
        assert_eq!(nl.incidence(CellId(0)), &[NetId(0)]);
        assert_eq!(nl.incidence(CellId(1)), &[NetId(0)]);
        assert_eq!(nl.num_pins(), 2);
    }

    #[test]
    fn duplicate_members_removed() {
        let nl = Netlist::build(unit_cells(2), vec![ids(&[0, 0, 1])]).unwrap();
        assert_eq!(nl.net(NetId(0)).members, ids(&[0, 1]));
        assert_eq!(nl.incidence(CellId(0)).len(), 1);
    }

    #[test]
    fn dangling_reference_names_net_and_cell() {
        let err = Netlist::build(unit_cells(2), vec![ids(&[0, 1]), ids(&[1, 7])]).unwrap_err();
        match err {
            Error::DanglingCell { net, cell } => assert_eq!((net, cell), (1, 7)),
            e => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn degrees_of_small_hypergraph() {
        let nl =
            Netlist::build(unit_cells(5), vec![ids(&[0, 1]), ids(&[1, 2]), ids(&[3, 4])]).unwrap();
        assert_eq!(net_degrees(&nl), vec![1, 1, 0]);

        let single = Netlist::build(unit_cells(2), vec![ids(&[0, 1])]).unwrap();
        assert_eq!(net_degrees(&single), vec![0]);
    }

    #[test]
    fn neighbouring_net_counted_once() {
        // nets 0 and 1 share two cells
        let nl = Netlist::build(unit_cells(3), vec![ids(&[0, 1, 2]), ids(&[0, 1])]).unwrap();
        assert_eq!(net_degrees(&nl), vec![1, 1]);
    }

    #[test]
    fn slots_skip_terminals() {
        let cells = vec![
            Cell::terminal("p0", 0.0, 0.0),
            Cell::movable("a", 2.0, 2.0),
            Cell::terminal("p1", 1.0, 1.0),
            Cell::movable("b", 2.0, 2.0),
        ];
        let nl = Netlist::build(cells, vec![ids(&[0, 1, 2, 3])]).unwrap();
        assert_eq!(nl.slot(CellId(0)), None);
        assert_eq!(nl.slot(CellId(1)), Some(0));
        assert_eq!(nl.slot(CellId(3)), Some(1));
        assert_eq!(nl.movable(), &[CellId(1), CellId(3)]);
        assert_eq!(nl.num_terminals(), 2);
    }

    #[test]
    fn rejects_bad_cells_and_placements() {
        assert!(Netlist::build(vec![Cell::movable("z", 0.0, 1.0)], vec![]).is_err());
        assert!(Netlist::build(vec![Cell::terminal("p", f64::NAN, 0.0)], vec![]).is_err());
        assert!(Netlist::build(unit_cells(1), vec![vec![]]).is_err());
        assert!(Placement::new(vec![0.0, f64::INFINITY], vec![0.0, 0.0]).is_err());
        assert!(Placement::new(vec![0.0], vec![]).is_err());
        assert!(Region::new(0.0, 1.0).is_err());
        let r = Region::new(1.0, 1.0).unwrap();
        let nl = Netlist::build(vec![Cell::movable("big", 2.0, 1.0)], vec![]).unwrap();
        assert!(r.check_fits(&nl).is_err());
    }
}
