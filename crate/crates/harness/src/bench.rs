//! Circuit loading and the (circuit × method × variant × seed) run matrix.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use rbsm::bookshelf::{gsrc_shape, parse_bundle, read_placement, BenchmarkBundle};
use rbsm::legalize::{legalize, LegalizeConfig};
use rbsm::optimizer::{adam_run, gd_run, rbsm_run, RbsmConfig, Sampling};
use rbsm::synth::generate_gsrc_like;
use rbsm::{Netlist, Placement, Region};

use crate::oracle::{in_bounds, oracle_hpwl, oracle_overlap};
use crate::report::{sort_reports, RunReport};

/// Block-area density of synthetic stand-ins for the GSRC circuits.
pub const SURROGATE_DENSITY: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Method {
    Rbsm,
    Gd,
    Adam,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Rbsm, Method::Gd, Method::Adam];

    pub fn name(self) -> &'static str {
        match self {
            Method::Rbsm => "rbsm",
            Method::Gd => "gd",
            Method::Adam => "adam",
        }
    }
}

/// Single-technique ablations of the full method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    Original,
    RandomBatch,
    FixGamma,
    NoMeanForce,
    NoPerturbation,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Original,
        Variant::RandomBatch,
        Variant::FixGamma,
        Variant::NoMeanForce,
        Variant::NoPerturbation,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Variant::Original => "Original algorithm",
            Variant::RandomBatch => "Random batch",
            Variant::FixGamma => "Fix gamma",
            Variant::NoMeanForce => "No mean force",
            Variant::NoPerturbation => "No perturbation",
        }
    }

    pub fn apply(self, base: &RbsmConfig) -> RbsmConfig {
        let mut c = base.clone();
        match self {
            Variant::Original => {}
            Variant::RandomBatch => c.sampling = Sampling::Uniform,
            Variant::FixGamma => c.adaptive_gamma = false,
            Variant::NoMeanForce => c.alpha = 0.0,
            Variant::NoPerturbation => c.perturb = false,
        }
        c
    }
}

#[derive(Clone, Debug)]
pub enum Source {
    /// `<dir>/<name>.{blocks,nets,pl}`.
    Gsrc { dir: PathBuf, name: String },
    Files { name: String, blocks: PathBuf, nets: PathBuf, pl: PathBuf },
    /// Random instance with the counts of a GSRC circuit.
    Synthetic { name: String, seed: u64 },
}

impl Source {
    pub fn name(&self) -> &str {
        match self {
            Source::Gsrc { name, .. } | Source::Files { name, .. } | Source::Synthetic { name, .. } => name,
        }
    }
}

pub struct Circuit {
    pub name: String,
    pub netlist: Netlist,
    pub region: Region,
    /// Placement shipped with the benchmark, if its `.pl` lists every block.
    pub reference: Option<Placement>,
}

impl Circuit {
    pub fn reference_hpwl(&self) -> Option<f64> {
        self.reference.as_ref().map(|p| oracle_hpwl(&self.netlist, p))
    }
}

pub fn load(source: &Source, region: Region) -> Result<Circuit> {
    let bundle = match source {
        Source::Synthetic { name, seed } => {
            let shape = gsrc_shape(name).with_context(|| {
                format!("unknown circuit {name}; synthetic instances exist for n10, n30, n50, n100, n200, n300")
            })?;
            let (netlist, region) = generate_gsrc_like(shape, *seed, region, SURROGATE_DENSITY)?;
            return Ok(Circuit { name: name.clone(), netlist, region, reference: None });
        }
        Source::Gsrc { dir, name } => BenchmarkBundle::in_dir(dir, name),
        Source::Files { name, blocks, nets, pl } => BenchmarkBundle {
            circuit_name: name.clone(),
            blocks_path: blocks.clone(),
            nets_path: nets.clone(),
            pl_path: pl.clone(),
        },
    };
    let missing = bundle.missing();
    if !missing.is_empty() {
        let list: Vec<String> = missing.iter().map(|p| format!("  {}", p.display())).collect();
        bail!("benchmark {} is incomplete; expected files:\n{}", source.name(), list.join("\n"));
    }
    let (netlist, region) = parse_bundle(&bundle, region)?;
    let reference = read_placement(&netlist, &bundle.pl_path).ok();
    Ok(Circuit { name: source.name().to_string(), netlist, region, reference })
}

pub struct Outcome {
    pub report: RunReport,
    /// Optimizer output.
    pub global: Placement,
    /// Legalized placement, when legalization ran.
    pub legalized: Option<Placement>,
}

pub fn run_one(
    circuit: &Circuit,
    method: Method,
    variant: Variant,
    seed: u64,
    optimizer: &RbsmConfig,
    legalizer: Option<&LegalizeConfig>,
) -> Result<Outcome> {
    let cfg = RbsmConfig { seed, ..variant.apply(optimizer) };
    let (nl, region) = (&circuit.netlist, &circuit.region);
    let start = Instant::now();
    let (global, trace) = match method {
        Method::Rbsm => rbsm_run(nl, region, &cfg),
        Method::Gd => gd_run(nl, region, &cfg),
        Method::Adam => adam_run(nl, region, &cfg),
    }
    .with_context(|| format!("{} {} seed {seed} on {}", method.name(), variant.label(), circuit.name))?;
    let time_s = start.elapsed().as_secs_f64();

    let (legalized, lhpwl, legal) = match legalizer {
        Some(lc) => {
            let (p, rep) = legalize(nl, region, &global, lc)?;
            let exact = oracle_overlap(nl, &p) <= 1e-9 * nl.total_movable_area();
            let legal = rep.legal && exact && in_bounds(nl, region, &p);
            let lh = oracle_hpwl(nl, &p);
            (Some(p), Some(lh), Some(legal))
        }
        None => (None, None, None),
    };
    let report = RunReport {
        circuit: circuit.name.clone(),
        method: method.name().to_string(),
        variant: variant.label().to_string(),
        seed,
        iterations: trace.len(),
        hpwl: oracle_hpwl(nl, &global),
        overlap: oracle_overlap(nl, &global),
        lhpwl,
        legal,
        time_s: Some(time_s),
    };
    Ok(Outcome { report, global, legalized })
}

#[derive(Clone, Debug)]
pub struct Suite {
    pub sources: Vec<Source>,
    pub methods: Vec<Method>,
    /// Applied to the RBSM method only; other methods always run as is.
    pub variants: Vec<Variant>,
    pub seeds: Vec<u64>,
    pub optimizer: RbsmConfig,
    pub legalizer: Option<LegalizeConfig>,
    pub region: Region,
}

impl Suite {
    pub fn new(sources: Vec<Source>) -> Self {
        Suite {
            sources,
            methods: vec![Method::Rbsm],
            variants: vec![Variant::Original],
            seeds: (0..5).collect(),
            optimizer: RbsmConfig::default(),
            legalizer: Some(LegalizeConfig::default()),
            region: Region::default(),
        }
    }
}

/// Load every circuit, run the whole matrix in parallel and return the
/// circuits with the reports in a fixed order.
pub fn run_benchmark(suite: &Suite) -> Result<(Vec<Circuit>, Vec<RunReport>)> {
    let circuits = suite
        .sources
        .iter()
        .map(|s| load(s, suite.region))
        .collect::<Result<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for (ci, _) in circuits.iter().enumerate() {
        for &method in &suite.methods {
            let variants: &[Variant] = if method == Method::Rbsm { &suite.variants } else { &[Variant::Original] };
            for &variant in variants {
                for &seed in &suite.seeds {
                    jobs.push((ci, method, variant, seed));
                }
            }
        }
    }
    let mut reports = jobs
        .par_iter()
        .map(|&(ci, method, variant, seed)| {
            run_one(&circuits[ci], method, variant, seed, &suite.optimizer, suite.legalizer.as_ref())
                .map(|o| o.report)
        })
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = circuits.iter().map(|c| c.name.clone()).collect();
    sort_reports(&mut reports, &names);
    Ok((circuits, reports))
}
