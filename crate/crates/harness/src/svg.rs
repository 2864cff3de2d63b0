use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use rbsm::{CellKind, Netlist, Placement, Region};

use crate::oracle::overlapping_slots;

const MARGIN: f64 = 20.0;
const FILL: &str = "#9ecae1";
const FILL_OVERLAP: &str = "#fc9272";

/// Die outline, one rectangle per block (tinted when it overlaps another),
/// one dot per terminal. The y axis points up as in the placement.
pub fn render_to_string(netlist: &Netlist, region: &Region, placement: &Placement) -> String {
    let (w, h) = (region.width, region.height);
    let flip = |y: f64| h - y;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3} {:.3} {:.3} {:.3}">"#,
        -MARGIN,
        -MARGIN,
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN
    );
    let _ = writeln!(
        s,
        r#"<rect class="die" x="0" y="0" width="{w:.3}" height="{h:.3}" fill="none" stroke="black"/>"#
    );
    // round-off contacts below the legality threshold are not tinted
    let hot = overlapping_slots(netlist, placement, 1e-9 * netlist.total_movable_area());
    let font = (netlist.mean_cell_size() / 4.0).max(1.0);
    for (slot, &id) in netlist.movable().iter().enumerate() {
        let c = netlist.cell(id);
        let (x, y) = placement.get(slot);
        let (x0, y0) = (x - c.width / 2.0, flip(y + c.height / 2.0));
        let fill = if hot[slot] { FILL_OVERLAP } else { FILL };
        let _ = writeln!(
            s,
            r#"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}" fill="{fill}" fill-opacity="0.7" stroke="black" stroke-width="0.5"/>"#,
            c.width, c.height
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.3}" y="{:.3}" font-size="{font:.3}" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            flip(y),
            id.0
        );
    }
    for c in netlist.cells() {
        if let CellKind::Terminal { x, y } = c.kind {
            let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{:.3}" r="2" fill="black"/>"#, flip(y));
        }
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_svg(netlist: &Netlist, region: &Region, placement: &Placement, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, render_to_string(netlist, region, placement))
        .with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rbsm::{Cell, CellId};

    #[test]
    fn one_cell_one_rect() {
        let nl = Netlist::build(vec![Cell::movable("a", 4.0, 2.0)], vec![]).unwrap();
        let p = Placement::new(vec![5.0], vec![5.0]).unwrap();
        let svg = render_to_string(&nl, &Region::new(10.0, 10.0).unwrap(), &p);
        assert_eq!(svg.matches("<rect").count(), 2);
        assert!(svg.contains(r#"x="3.000" y="4.000" width="4.000" height="2.000""#));
    }

    #[test]
    fn overlapping_cells_are_tinted() {
        let cells = vec![
            Cell::movable("a", 2.0, 2.0),
            Cell::movable("b", 2.0, 2.0),
            Cell::movable("c", 2.0, 2.0),
            Cell::terminal("p", 0.0, 0.0),
        ];
        let nl = Netlist::build(cells, vec![vec![CellId(0), CellId(3)]]).unwrap();
        let p = Placement::new(vec![2.0, 3.0, 8.0], vec![2.0, 2.0, 8.0]).unwrap();
        let svg = render_to_string(&nl, &Region::new(10.0, 10.0).unwrap(), &p);
        assert_eq!(svg.matches(FILL_OVERLAP).count(), 2);
        assert_eq!(svg.matches(&format!(r#"fill="{FILL}""#)).count(), 1);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg, render_to_string(&nl, &Region::new(10.0, 10.0).unwrap(), &p));
    }
}
