//! Reader and writer for the GSRC Bookshelf floorplan dialect
//! (`.blocks`, `.nets`, `.pl`).
//!
//! Blocks are reduced to the bounding box of their vertex list. Pin offsets
//! in `.nets` are ignored: every pin sits at its cell's center. The die is
//! not stored in these files and is supplied by the caller.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::{Cell, CellId, CellKind, Error, Netlist, Placement, Region, Result};

/// Declared size of a GSRC circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GsrcShape {
    pub name: &'static str,
    pub modules: usize,
    pub terminals: usize,
    pub nets: usize,
    pub pins: usize,
}

/// The six hard-block GSRC circuits and their header counts.
pub const GSRC_CIRCUITS: &[GsrcShape] = &[
    GsrcShape { name: "n10", modules: 10, terminals: 69, nets: 118, pins: 248 },
    GsrcShape { name: "n30", modules: 30, terminals: 212, nets: 349, pins: 743 },
    GsrcShape { name: "n50", modules: 50, terminals: 209, nets: 485, pins: 1050 },
    GsrcShape { name: "n100", modules: 100, terminals: 334, nets: 885, pins: 1873 },
    GsrcShape { name: "n200", modules: 200, terminals: 564, nets: 1585, pins: 3599 },
    GsrcShape { name: "n300", modules: 300, terminals: 569, nets: 1893, pins: 4358 },
];

pub fn gsrc_shape(name: &str) -> Option<&'static GsrcShape> {
    GSRC_CIRCUITS.iter().find(|s| s.name == name)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchmarkBundle {
    pub circuit_name: String,
    pub blocks_path: PathBuf,
    pub nets_path: PathBuf,
    pub pl_path: PathBuf,
}

impl BenchmarkBundle {
    /// `<dir>/<name>.blocks`, `<dir>/<name>.nets`, `<dir>/<name>.pl`.
    pub fn in_dir(dir: impl AsRef<Path>, name: &str) -> Self {
        let dir = dir.as_ref();
        BenchmarkBundle {
            circuit_name: name.to_string(),
            blocks_path: dir.join(format!("{name}.blocks")),
            nets_path: dir.join(format!("{name}.nets")),
            pl_path: dir.join(format!("{name}.pl")),
        }
    }

    pub fn paths(&self) -> [&Path; 3] {
        [&self.blocks_path, &self.nets_path, &self.pl_path]
    }

    /// Paths of this bundle that do not exist.
    pub fn missing(&self) -> Vec<PathBuf> {
        self.paths()
            .into_iter()
            .filter(|p| !p.is_file())
            .map(Path::to_path_buf)
            .collect()
    }
}

/// Counts declared in the file headers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DeclaredCounts {
    pub modules: usize,
    pub terminals: usize,
    pub nets: usize,
    pub pins: usize,
}

/// Parse a bundle into a netlist. Terminal positions come from the `.pl`
/// file; block positions in it are ignored here (see [`read_placement`]).
pub fn parse_bundle(bundle: &BenchmarkBundle, region: Region) -> Result<(Netlist, Region)> {
    parse_bundle_counts(bundle, region).map(|(n, r, _)| (n, r))
}

/// Like [`parse_bundle`], also returning the header counts.
pub fn parse_bundle_counts(
    bundle: &BenchmarkBundle,
    region: Region,
) -> Result<(Netlist, Region, DeclaredCounts)> {
    let blocks_src = read(&bundle.blocks_path)?;
    let nets_src = read(&bundle.nets_path)?;
    let pl_src = read(&bundle.pl_path)?;

    let (mut cells, mut counts) = parse_blocks(&bundle.blocks_path, &blocks_src)?;
    let names = name_index(&cells);

    let pl = parse_pl(&bundle.pl_path, &pl_src, &names)?;
    let (nets, declared_nets, declared_pins) = parse_nets(&bundle.nets_path, &nets_src, &names)?;
    drop(names);
    for (i, cell) in cells.iter_mut().enumerate() {
        if let CellKind::Terminal { .. } = cell.kind {
            let (x, y, _) = pl.get(&i).ok_or_else(|| {
                Error::parse(&bundle.pl_path, 0, format!("terminal {} has no position", cell.name))
            })?;
            cell.kind = CellKind::Terminal { x: *x, y: *y };
        }
    }

    counts.nets = declared_nets;
    counts.pins = declared_pins;

    let netlist = Netlist::build(cells, nets)?;
    region.check_fits(&netlist)?;
    Ok((netlist, region, counts))
}

/// Read movable-cell centers from a `.pl` file. Every movable cell must be
/// listed; lower-left corners are converted to centers.
pub fn read_placement(netlist: &Netlist, path: impl AsRef<Path>) -> Result<Placement> {
    let path = path.as_ref();
    let src = read(path)?;
    let names = name_index(netlist.cells());
    let pl = parse_pl(path, &src, &names)?;
    let mut x = Vec::with_capacity(netlist.num_movable());
    let mut y = Vec::with_capacity(netlist.num_movable());
    for &c in netlist.movable() {
        let cell = netlist.cell(c);
        let (lx, ly, _) = pl
            .get(&c.0)
            .ok_or_else(|| Error::parse(path, 0, format!("block {} has no position", cell.name)))?;
        x.push(lx + 0.5 * cell.width);
        y.push(ly + 0.5 * cell.height);
    }
    Placement::new(x, y)
}

/// Write a `.pl` file: one line per cell with the lower-left corner of
/// movable cells (center minus half size) and the fixed position of
/// terminals.
pub fn write_placement(netlist: &Netlist, placement: &Placement, path: impl AsRef<Path>) -> Result<()> {
    netlist.check_placement(placement)?;
    let path = path.as_ref();
    let mut out = String::from("UCLA pl 1.0\n\n");
    for (i, cell) in netlist.cells().iter().enumerate() {
        let (lx, ly) = match cell.kind {
            CellKind::Terminal { x, y } => (x, y),
            CellKind::Movable => {
                let (cx, cy) = netlist.position(placement, CellId(i));
                (cx - 0.5 * cell.width, cy - 0.5 * cell.height)
            }
        };
        let _ = writeln!(out, "{}\t{}\t{}", cell.name, lx, ly);
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn name_index(cells: &[Cell]) -> HashMap<&str, usize> {
    cells.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect()
}

/// Non-empty lines with `#` comments removed, paired with 1-based line numbers.
fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn is_format_banner(line: &str) -> bool {
    line.starts_with("UCSC") || line.starts_with("UCLA")
}

/// `Key : value` header line.
fn header(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once(':')?;
    let k = k.trim();
    k.starts_with("Num").then(|| (k, v.trim()))
}

fn parse_count(path: &Path, line: usize, v: &str) -> Result<usize> {
    v.split_whitespace()
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(path, line, format!("expected a count, got {v:?}")))
}

fn parse_num(path: &Path, line: usize, t: &str) -> Result<f64> {
    let v: f64 = t
        .parse()
        .map_err(|_| Error::parse(path, line, format!("expected a number, got {t:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(path, line, format!("non-finite number {t:?}")));
    }
    Ok(v)
}

fn parse_blocks(path: &Path, src: &str) -> Result<(Vec<Cell>, DeclaredCounts)> {
    let mut cells = Vec::new();
    let mut declared_blocks: Option<(usize, usize)> = None;
    let mut hard_soft = (None, None);
    let mut declared_terms: Option<(usize, usize)> = None;
    let mut seen = HashMap::new();
    let mut last_line = 0;

    for (ln, line) in content_lines(src) {
        last_line = ln;
        if is_format_banner(line) {
            continue;
        }
        if let Some((k, v)) = header(line) {
            let n = parse_count(path, ln, v)?;
            match k {
                "NumBlocks" => declared_blocks = Some((n, ln)),
                "NumHardRectilinearBlocks" => hard_soft.0 = Some((n, ln)),
                "NumSoftRectangularBlocks" => hard_soft.1 = Some((n, ln)),
                "NumTerminals" => declared_terms = Some((n, ln)),
                _ => {}
            }
            continue;
        }
        let mut toks = line.split_whitespace();
        let name = toks.next().unwrap();
        let kind = toks
            .next()
            .ok_or_else(|| Error::parse(path, ln, format!("block {name} has no type")))?;
        let cell = match kind {
            "terminal" => Cell::terminal(name, 0.0, 0.0),
            "hardrectilinear" => {
                let rest: String = toks.collect::<Vec<_>>().join(" ");
                let (w, h) = parse_vertices(path, ln, name, &rest)?;
                Cell::movable(name, w, h)
            }
            "softrectangular" => {
                return Err(Error::parse(path, ln, format!("soft block {name} is not supported")))
            }
            other => return Err(Error::parse(path, ln, format!("unknown block type {other:?}"))),
        };
        if seen.insert(name.to_string(), ln).is_some() {
            return Err(Error::parse(path, ln, format!("duplicate block name {name}")));
        }
        cells.push(cell);
    }

    let modules = cells.iter().filter(|c| c.is_movable()).count();
    let terminals = cells.len() - modules;
    let declared_modules = match (declared_blocks, hard_soft) {
        (Some(d), _) => Some(d),
        (None, (Some((h, ln)), soft)) => Some((h + soft.map_or(0, |s| s.0), ln)),
        (None, (None, Some(s))) => Some(s),
        (None, (None, None)) => None,
    };
    let (dm, dm_line) =
        declared_modules.ok_or_else(|| Error::parse(path, last_line, "missing block count header"))?;
    if dm != modules {
        return Err(Error::parse(
            path,
            dm_line,
            format!("header declares {dm} blocks but {modules} were listed"),
        ));
    }
    let (dt, dt_line) =
        declared_terms.ok_or_else(|| Error::parse(path, last_line, "missing NumTerminals header"))?;
    if dt != terminals {
        return Err(Error::parse(
            path,
            dt_line,
            format!("header declares {dt} terminals but {terminals} were listed"),
        ));
    }
    Ok((
        cells,
        DeclaredCounts {
            modules,
            terminals,
            ..Default::default()
        },
    ))
}

/// `4 (x0, y0) (x1, y1) ...` → bounding-box width and height.
fn parse_vertices(path: &Path, ln: usize, name: &str, rest: &str) -> Result<(f64, f64)> {
    let cleaned: String = rest
        .chars()
        .map(|c| if matches!(c, '(' | ')' | ',') { ' ' } else { c })
        .collect();
    let mut toks = cleaned.split_whitespace();
    let bad = |msg: &str| Error::parse(path, ln, format!("block {name}: {msg}"));
    let n: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| bad("missing vertex count"))?;
    let nums = toks
        .map(|t| parse_num(path, ln, t))
        .collect::<Result<Vec<f64>>>()?;
    if n < 2 || nums.len() != 2 * n {
        return Err(bad(&format!(
            "expected {n} vertices, found {} coordinates",
            nums.len()
        )));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for v in nums.chunks(2) {
        x0 = x0.min(v[0]);
        x1 = x1.max(v[0]);
        y0 = y0.min(v[1]);
        y1 = y1.max(v[1]);
    }
    let (w, h) = (x1 - x0, y1 - y0);
    if w <= 0.0 || h <= 0.0 {
        return Err(bad("degenerate vertex list"));
    }
    Ok((w, h))
}

type NetsParse = (Vec<Vec<CellId>>, usize, usize);

fn parse_nets(path: &Path, src: &str, names: &HashMap<&str, usize>) -> Result<NetsParse> {
    let mut nets: Vec<Vec<CellId>> = Vec::new();
    let mut declared_nets = None;
    let mut declared_pins = None;
    // (remaining members, line of the NetDegree record)
    let mut open: Option<(usize, usize)> = None;
    let mut pins = 0usize;
    let mut last_line = 0;

    for (ln, line) in content_lines(src) {
        last_line = ln;
        if is_format_banner(line) {
            continue;
        }
        if let Some((k, v)) = header(line) {
            match k {
                "NumNets" => declared_nets = Some((parse_count(path, ln, v)?, ln)),
                "NumPins" => declared_pins = Some((parse_count(path, ln, v)?, ln)),
                _ => {}
            }
            continue;
        }
        if line.starts_with("NetDegree") {
            if let Some((left, start)) = open {
                if left > 0 {
                    return Err(Error::parse(
                        path,
                        ln,
                        format!("net declared at line {start} is missing {left} member(s)"),
                    ));
                }
            }
            let v = line
                .split_once(':')
                .map(|(_, v)| v)
                .ok_or_else(|| Error::parse(path, ln, "malformed NetDegree record"))?;
            let k = parse_count(path, ln, v)?;
            if k == 0 {
                return Err(Error::parse(path, ln, "net of degree 0"));
            }
            nets.push(Vec::with_capacity(k));
            open = Some((k, ln));
            continue;
        }
        let name = line.split_whitespace().next().unwrap();
        match open.as_mut() {
            Some((left, _)) if *left > 0 => {
                let id = names
                    .get(name)
                    .ok_or_else(|| Error::parse(path, ln, format!("unknown block {name:?} in net")))?;
                nets.last_mut().unwrap().push(CellId(*id));
                *left -= 1;
                pins += 1;
            }
            _ => {
                return Err(Error::parse(
                    path,
                    ln,
                    format!("pin line {name:?} outside of a NetDegree record"),
                ))
            }
        }
    }
    if let Some((left, start)) = open {
        if left > 0 {
            return Err(Error::parse(
                path,
                last_line.max(start),
                format!("file ends with net declared at line {start} missing {left} member(s)"),
            ));
        }
    }
    let (dn, dn_line) =
        declared_nets.ok_or_else(|| Error::parse(path, last_line, "missing NumNets header"))?;
    if dn != nets.len() {
        return Err(Error::parse(
            path,
            dn_line,
            format!("header declares {dn} nets but {} were listed", nets.len()),
        ));
    }
    let (dp, dp_line) =
        declared_pins.ok_or_else(|| Error::parse(path, last_line, "missing NumPins header"))?;
    if dp != pins {
        return Err(Error::parse(
            path,
            dp_line,
            format!("header declares {dp} pins but {pins} were listed"),
        ));
    }
    Ok((nets, dn, dp))
}

/// cell index → (x, y, line)
fn parse_pl(
    path: &Path,
    src: &str,
    names: &HashMap<&str, usize>,
) -> Result<HashMap<usize, (f64, f64, usize)>> {
    let mut out = HashMap::new();
    for (ln, line) in content_lines(src) {
        if is_format_banner(line) {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(Error::parse(path, ln, "expected `name x y`"));
        }
        let id = names
            .get(toks[0])
            .ok_or_else(|| Error::parse(path, ln, format!("unknown block {:?}", toks[0])))?;
        let x = parse_num(path, ln, toks[1])?;
        let y = parse_num(path, ln, toks[2])?;
        if out.insert(*id, (x, y, ln)).is_some() {
            return Err(Error::parse(path, ln, format!("{} placed twice", toks[0])));
        }
    }
    Ok(out)
}
