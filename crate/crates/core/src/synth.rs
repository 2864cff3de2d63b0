//! Seeded synthetic instances for tests and for running the harness when
//! benchmark files are not available.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bookshelf::GsrcShape;
use crate::{Cell, CellId, Error, Netlist, Region, Result};

/// Maximum ratio of total movable area to die area accepted by
/// [`generate_synthetic`].
pub const MAX_DENSITY: f64 = 0.6;

/// Movable-only netlist with cell sides drawn uniformly from `size_range`
/// and nets of 2–6 distinct cells.
pub fn generate_synthetic(
    seed: u64,
    n_cells: usize,
    n_nets: usize,
    region: Region,
    size_range: (f64, f64),
) -> Result<(Netlist, Region)> {
    if n_cells < 2 || n_nets < 1 {
        return Err(Error::Generation(format!(
            "need at least 2 cells and 1 net, got {n_cells} cells and {n_nets} nets"
        )));
    }
    let (lo, hi) = size_range;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::Generation(format!("bad size range {lo}..{hi}")));
    }
    if hi > region.width.min(region.height) {
        return Err(Error::Generation("cells may exceed the region".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells: Vec<Cell> = (0..n_cells)
        .map(|i| {
            let w = rng.random_range(lo..=hi);
            let h = rng.random_range(lo..=hi);
            Cell::movable(format!("c{i}"), w, h)
        })
        .collect();
    let area: f64 = cells.iter().map(Cell::area).sum();
    if area > MAX_DENSITY * region.area() {
        return Err(Error::Generation(format!(
            "total cell area {area:.1} exceeds {:.0}% of the region area {:.1}",
            MAX_DENSITY * 100.0,
            region.area()
        )));
    }
    let all: Vec<usize> = (0..n_cells).collect();
    let nets = (0..n_nets)
        .map(|_| {
            let k = rng.random_range(2..=6usize.min(n_cells));
            all.choose_multiple(&mut rng, k).map(|&i| CellId(i)).collect()
        })
        .collect();
    Ok((Netlist::build(cells, nets)?, region))
}

/// A surrogate with the module/terminal/net/pin counts of a GSRC circuit.
///
/// Blocks get a hidden "ideal" location; nets are grown around an anchor
/// block from its spatial neighbours so that the instance has locality.
/// Terminals sit on the die boundary and each one joins exactly one net.
/// Total block area is `density` times the die area.
pub fn generate_gsrc_like(
    shape: &GsrcShape,
    seed: u64,
    region: Region,
    density: f64,
) -> Result<(Netlist, Region)> {
    let (nb, nt, nn, np) = (shape.modules, shape.terminals, shape.nets, shape.pins);
    if nb < 2 || nn < 1 || nt > nn || np < 2 * nn {
        return Err(Error::Generation(format!("inconsistent shape {shape:?}")));
    }
    if !(density > 0.0 && density <= MAX_DENSITY) {
        return Err(Error::Generation(format!("density {density} out of range")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let (w_die, h_die) = (region.width, region.height);

    // Block shapes, rescaled to hit the requested density.
    let raw: Vec<(f64, f64)> = (0..nb)
        .map(|_| {
            let area = rng.random_range(0.25f64..2.5);
            let aspect: f64 = rng.random_range(0.5f64..2.0);
            let w = (area * aspect).sqrt();
            (w, area / w)
        })
        .collect();
    let raw_area: f64 = raw.iter().map(|(w, h)| w * h).sum();
    let scale = (density * region.area() / raw_area).sqrt();
    let limit = 0.5 * w_die.min(h_die);
    let mut cells: Vec<Cell> = raw
        .iter()
        .enumerate()
        .map(|(i, &(w, h))| {
            Cell::movable(format!("sb{i}"), (w * scale).min(limit), (h * scale).min(limit))
        })
        .collect();

    let hidden: Vec<(f64, f64)> = (0..nb)
        .map(|_| {
            (
                rng.random_range(0.1 * w_die..0.9 * w_die),
                rng.random_range(0.1 * h_die..0.9 * h_die),
            )
        })
        .collect();
    let mut pads = Vec::with_capacity(nt);
    for t in 0..nt {
        let s = rng.random_range(0.0..2.0 * (w_die + h_die));
        let (x, y) = if s < w_die {
            (s, 0.0)
        } else if s < w_die + h_die {
            (w_die, s - w_die)
        } else if s < 2.0 * w_die + h_die {
            (2.0 * w_die + h_die - s, h_die)
        } else {
            (0.0, 2.0 * (w_die + h_die) - s)
        };
        pads.push((x, y));
        cells.push(Cell::terminal(format!("p{}", t + 1), x, y));
    }

    // Anchors: every block anchors at least one net when nets >= blocks.
    let anchors: Vec<usize> = (0..nn)
        .map(|k| if k < nb { k } else { rng.random_range(0..nb) })
        .collect();

    // Each terminal joins the nearest anchor net that has no terminal yet.
    let mut net_terminal: Vec<Option<usize>> = vec![None; nn];
    for (t, &(px, py)) in pads.iter().enumerate() {
        let best = (0..nn)
            .filter(|&k| net_terminal[k].is_none())
            .min_by(|&a, &b| {
                let da = dist2(hidden[anchors[a]], (px, py));
                let db = dist2(hidden[anchors[b]], (px, py));
                da.total_cmp(&db).then(a.cmp(&b))
            })
            .expect("terminals <= nets");
        net_terminal[best] = Some(t);
    }

    let mut degree = vec![2usize; nn];
    let max_degree = |k: usize, t: &[Option<usize>]| nb + usize::from(t[k].is_some());
    let mut extra = np - 2 * nn;
    let capacity: usize = (0..nn).map(|k| max_degree(k, &net_terminal) - 2).sum();
    if extra > capacity {
        return Err(Error::Generation("too many pins for the block count".into()));
    }
    while extra > 0 {
        let k = rng.random_range(0..nn);
        if degree[k] < max_degree(k, &net_terminal) {
            degree[k] += 1;
            extra -= 1;
        }
    }

    // Neighbour lists in hidden space.
    let neighbours: Vec<Vec<usize>> = (0..nb)
        .map(|a| {
            let mut order: Vec<usize> = (0..nb).filter(|&b| b != a).collect();
            order.sort_by(|&p, &q| {
                dist2(hidden[a], hidden[p])
                    .total_cmp(&dist2(hidden[a], hidden[q]))
                    .then(p.cmp(&q))
            });
            order
        })
        .collect();

    let mut nets = Vec::with_capacity(nn);
    for k in 0..nn {
        let anchor = anchors[k];
        let mut members = vec![CellId(anchor)];
        if let Some(t) = net_terminal[k] {
            members.push(CellId(nb + t));
        }
        let need = degree[k] - members.len();
        let pool = (2 * need + 2).min(nb - 1);
        let picked: Vec<usize> = neighbours[anchor][..pool]
            .choose_multiple(&mut rng, need)
            .copied()
            .collect();
        members.extend(picked.into_iter().map(CellId));
        nets.push(members);
    }

    Ok((Netlist::build(cells, nets)?, region))
}

fn dist2(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bookshelf::GSRC_CIRCUITS;

    #[test]
    fn deterministic_for_fixed_seed() {
        let r = Region::new(100.0, 100.0).unwrap();
        let a = generate_synthetic(7, 20, 30, r, (2.0, 8.0)).unwrap();
        let b = generate_synthetic(7, 20, 30, r, (2.0, 8.0)).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        let c = generate_synthetic(8, 20, 30, r, (2.0, 8.0)).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn nets_have_two_to_six_members() {
        let r = Region::new(100.0, 100.0).unwrap();
        let (nl, _) = generate_synthetic(1, 20, 30, r, (2.0, 8.0)).unwrap();
        assert_eq!(nl.num_nets(), 30);
        for net in nl.nets() {
            assert!((2..=6).contains(&net.degree()));
        }
        for c in nl.cells() {
            assert!((2.0..=8.0).contains(&c.width) && (2.0..=8.0).contains(&c.height));
        }
    }

    #[test]
    fn area_budget_is_enforced() {
        let r = Region::new(20.0, 20.0).unwrap();
        let err = generate_synthetic(1, 50, 10, r, (5.0, 6.0)).unwrap_err();
        assert!(matches!(err, Error::Generation(_)));
        assert!(generate_synthetic(1, 1, 1, r, (1.0, 2.0)).is_err());
    }

    #[test]
    fn gsrc_like_matches_declared_counts() {
        for shape in GSRC_CIRCUITS {
            let (nl, _) = generate_gsrc_like(shape, 3, Region::default(), 0.33).unwrap();
            assert_eq!(nl.num_movable(), shape.modules, "{}", shape.name);
            assert_eq!(nl.num_terminals(), shape.terminals, "{}", shape.name);
            assert_eq!(nl.num_nets(), shape.nets, "{}", shape.name);
            assert_eq!(nl.num_pins(), shape.pins, "{}", shape.name);
            let density = nl.total_movable_area() / Region::default().area();
            assert!((density - 0.33).abs() < 0.02, "{} density {density}", shape.name);
        }
    }
}
