use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rbsm::bookshelf::{read_placement, write_placement, GSRC_CIRCUITS};
use rbsm::legalize::{legalize, LegalizeConfig};
use rbsm::optimizer::{RbsmConfig, Sampling};
use rbsm::Region;
use rbsm_harness::bench::{self, Method, Source, Suite, Variant};
use rbsm_harness::oracle::{in_bounds, oracle_hpwl, oracle_overlap};
use rbsm_harness::reference::published_lhpwl;
use rbsm_harness::report::{self, RunReport};
use rbsm_harness::svg::render_svg;

#[derive(Parser)]
#[command(name = "rbsm", version, about = "Nonsmooth penalty global placement for GSRC floorplans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Place one circuit with one method, then legalize.
    Run(RunArgs),
    /// Run a circuit × method × seed matrix and write CSV tables.
    Bench(BenchArgs),
    /// Legalize an existing placement.
    Legalize(LegalizeArgs),
    /// Draw a placement as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct CircuitArgs {
    /// GSRC circuit name (n10, n30, n50, n100, n200, n300).
    #[arg(long)]
    circuit: Option<String>,
    /// Directory holding <circuit>.blocks/.nets/.pl.
    #[arg(long, env = "GSRC_DIR")]
    bench_dir: Option<PathBuf>,
    /// Use a random instance with the circuit's counts instead of files.
    #[arg(long)]
    synthetic: bool,
    /// Seed of the synthetic instance.
    #[arg(long, default_value_t = 0)]
    synth_seed: u64,
    #[arg(long, requires_all = ["nets", "pl"])]
    blocks: Option<PathBuf>,
    #[arg(long)]
    nets: Option<PathBuf>,
    #[arg(long)]
    pl: Option<PathBuf>,
}

impl CircuitArgs {
    fn source(&self) -> Result<Source> {
        if let (Some(blocks), Some(nets), Some(pl)) = (&self.blocks, &self.nets, &self.pl) {
            let name = self.circuit.clone().unwrap_or_else(|| {
                blocks.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
            });
            return Ok(Source::Files { name, blocks: blocks.clone(), nets: nets.clone(), pl: pl.clone() });
        }
        let Some(name) = self.circuit.clone() else {
            bail!("give --circuit NAME (with --bench-dir or --synthetic) or --blocks/--nets/--pl");
        };
        if self.synthetic {
            return Ok(Source::Synthetic { name, seed: self.synth_seed });
        }
        match &self.bench_dir {
            Some(dir) => Ok(Source::Gsrc { dir: dir.clone(), name }),
            None => bail!("circuit {name}: pass --bench-dir DIR (or set GSRC_DIR), or --synthetic"),
        }
    }

    fn pl_path(&self, source: &Source) -> Option<PathBuf> {
        match source {
            Source::Files { pl, .. } => Some(pl.clone()),
            Source::Gsrc { dir, name } => Some(dir.join(format!("{name}.pl"))),
            Source::Synthetic { .. } => None,
        }
    }
}

#[derive(Args)]
struct OptimizerArgs {
    /// TOML file with optimizer settings (keys as in the README).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Die size as WIDTHxHEIGHT.
    #[arg(long, default_value = "800x800", value_parser = parse_region)]
    region: Region,
    /// Sample nets uniformly instead of by degree.
    #[arg(long)]
    uniform_batch: bool,
    /// Use a constant penalty weight instead of adaptive weights.
    #[arg(long)]
    fix_gamma: bool,
    #[arg(long)]
    no_mean_force: bool,
    #[arg(long)]
    no_perturb: bool,
    /// Skip legalization.
    #[arg(long)]
    no_legalize: bool,
}

impl OptimizerArgs {
    fn config(&self) -> Result<RbsmConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => RbsmConfig::default(),
        };
        if self.uniform_batch {
            cfg.sampling = Sampling::Uniform;
        }
        if self.fix_gamma {
            cfg.adaptive_gamma = false;
        }
        if self.no_mean_force {
            cfg.alpha = 0.0;
        }
        if self.no_perturb {
            cfg.perturb = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn legalizer(&self) -> Option<LegalizeConfig> {
        (!self.no_legalize).then(LegalizeConfig::default)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    circuit: CircuitArgs,
    #[command(flatten)]
    opt: OptimizerArgs,
    #[arg(long, value_enum, default_value = "rbsm")]
    method: Method,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    /// Write the final placement in Bookshelf .pl format.
    #[arg(long)]
    out_pl: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory holding the GSRC files.
    #[arg(long, env = "GSRC_DIR")]
    bench_dir: Option<PathBuf>,
    /// Use random instances with GSRC counts instead of files.
    #[arg(long)]
    synthetic: bool,
    #[arg(long, default_value_t = 0)]
    synth_seed: u64,
    /// Circuits to run; defaults to all six (n100, n200, n300 with --ablation).
    #[arg(long, value_delimiter = ',')]
    circuits: Vec<String>,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["rbsm", "gd", "adam"])]
    methods: Vec<Method>,
    /// Number of seeds, starting at 0.
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    /// Run the single-technique ablations of RBSM instead of the method comparison.
    #[arg(long)]
    ablation: bool,
    #[command(flatten)]
    opt: OptimizerArgs,
    #[arg(long, default_value = "results.csv")]
    out_csv: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct LegalizeArgs {
    #[command(flatten)]
    circuit: CircuitArgs,
    /// Placement to legalize; defaults to the circuit's .pl.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = "800x800", value_parser = parse_region)]
    region: Region,
    #[arg(long)]
    out_pl: PathBuf,
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    circuit: CircuitArgs,
    /// Placement to draw; defaults to the circuit's .pl.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = "800x800", value_parser = parse_region)]
    region: Region,
    #[arg(long)]
    out_svg: PathBuf,
}

fn parse_region(s: &str) -> Result<Region, String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got {s:?}"))?;
    let w: f64 = w.trim().parse().map_err(|e| format!("width {w:?}: {e}"))?;
    let h: f64 = h.trim().parse().map_err(|e| format!("height {h:?}: {e}"))?;
    Region::new(w, h).map_err(|e| e.to_string())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(a) => run(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Legalize(a) => legalize_cmd(a),
        Command::Render(a) => render_cmd(a),
    }
}

fn print_report(r: &RunReport) {
    let lh = r.lhpwl.map_or("-".to_string(), |v| format!("{v:.1}"));
    let legal = r.legal.map_or("-".to_string(), |v| v.to_string());
    println!(
        "{} {} [{}] seed {}: hpwl {:.1} overlap {:.1} lhpwl {lh} legal {legal} time {:.2}s ({} iterations)",
        r.circuit,
        r.method,
        r.variant,
        r.seed,
        r.hpwl,
        r.overlap,
        r.time_s.unwrap_or(f64::NAN),
        r.iterations
    );
}

fn run(a: RunArgs) -> Result<()> {
    let source = a.circuit.source()?;
    let cfg = a.opt.config()?;
    let circuit = bench::load(&source, a.opt.region)?;
    let out = bench::run_one(&circuit, a.method, Variant::Original, a.seed, &cfg, a.opt.legalizer().as_ref())?;
    print_report(&out.report);
    let final_p = out.legalized.as_ref().unwrap_or(&out.global);
    if let Some(path) = &a.out_csv {
        report::write_reports(path, std::slice::from_ref(&out.report), false)?;
        report::write_timings(&report::sibling(path, "timing"), std::slice::from_ref(&out.report))?;
    }
    if let Some(path) = &a.out_svg {
        render_svg(&circuit.netlist, &circuit.region, final_p, path)?;
    }
    if let Some(path) = &a.out_pl {
        write_placement(&circuit.netlist, final_p, path)?;
    }
    if out.report.legal == Some(false) {
        bail!("legalization left overlap or out-of-bounds cells");
    }
    Ok(())
}

fn bench_cmd(a: BenchArgs) -> Result<()> {
    if let Some(n) = a.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let names: Vec<String> = if !a.circuits.is_empty() {
        a.circuits.clone()
    } else if a.ablation {
        ["n100", "n200", "n300"].map(String::from).to_vec()
    } else {
        GSRC_CIRCUITS.iter().map(|c| c.name.to_string()).collect()
    };
    let sources = names
        .iter()
        .map(|name| {
            if a.synthetic {
                Ok(Source::Synthetic { name: name.clone(), seed: a.synth_seed })
            } else {
                match &a.bench_dir {
                    Some(dir) => Ok(Source::Gsrc { dir: dir.clone(), name: name.clone() }),
                    None => bail!("pass --bench-dir DIR (or set GSRC_DIR), or --synthetic"),
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut suite = Suite::new(sources);
    suite.optimizer = a.opt.config()?;
    suite.legalizer = a.opt.legalizer();
    suite.region = a.opt.region;
    suite.seeds = (0..a.seeds).collect();
    if a.ablation {
        suite.methods = vec![Method::Rbsm];
        suite.variants = Variant::ALL.to_vec();
    } else {
        suite.methods = a.methods.clone();
    }
    let (circuits, reports) = bench::run_benchmark(&suite)?;
    for r in &reports {
        print_report(r);
    }
    let summary = report::summarize(
        &reports,
        |c| circuits.iter().find(|x| x.name == c).and_then(|x| x.reference_hpwl()),
        published_lhpwl,
    );
    report::write_reports(&a.out_csv, &reports, false)?;
    report::write_timings(&report::sibling(&a.out_csv, "timing"), &reports)?;
    report::write_summary(&report::sibling(&a.out_csv, "summary"), &summary)?;
    println!("wrote {}", a.out_csv.display());

    let failed = reports.iter().filter(|r| r.legal == Some(false)).count();
    if failed > 0 {
        bail!("{failed} of {} runs did not legalize", reports.len());
    }
    Ok(())
}

fn load_with_placement(c: &CircuitArgs, input: Option<&Path>, region: Region) -> Result<(bench::Circuit, rbsm::Placement)> {
    let source = c.source()?;
    let circuit = bench::load(&source, region)?;
    let path = match input {
        Some(p) => p.to_path_buf(),
        None => c
            .pl_path(&source)
            .context("synthetic circuits have no placement file; pass --input")?,
    };
    let placement = read_placement(&circuit.netlist, &path)?;
    Ok((circuit, placement))
}

fn legalize_cmd(a: LegalizeArgs) -> Result<()> {
    let (circuit, p) = load_with_placement(&a.circuit, a.input.as_deref(), a.region)?;
    let (nl, region) = (&circuit.netlist, &circuit.region);
    let before = oracle_hpwl(nl, &p);
    let (q, rep) = legalize(nl, region, &p, &LegalizeConfig::default())?;
    let overlap = oracle_overlap(nl, &q);
    let legal = rep.legal && overlap <= 1e-9 * nl.total_movable_area() && in_bounds(nl, region, &q);
    println!(
        "{}: hpwl {before:.1} -> {:.1}, overlap {overlap:.3}, {} extra sweeps, legal {legal}",
        circuit.name,
        oracle_hpwl(nl, &q),
        rep.sweeps
    );
    write_placement(nl, &q, &a.out_pl)?;
    if let Some(path) = &a.out_svg {
        render_svg(nl, region, &q, path)?;
    }
    if !legal {
        bail!("legalization hit the sweep cap with overlap {overlap}");
    }
    Ok(())
}

fn render_cmd(a: RenderArgs) -> Result<()> {
    let (circuit, p) = load_with_placement(&a.circuit, a.input.as_deref(), a.region)?;
    render_svg(&circuit.netlist, &circuit.region, &p, &a.out_svg)
}
