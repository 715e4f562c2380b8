use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use uemgft::config::resolve;
use uemgft::csvout::write_file;
use uemgft::edgelist::{read_edge_list, write_edge_list};
use uemgft::runner::{eigcurves_csv, eigen_curves, export_matrices, export_spectra, run_experiment, write_report};
use uemgft::station::{ingest_station_csv, BoundingBox};
use uemgft_core::datagen::{random_sensor_graph, rng_from_seed, uniform_healthy};
use uemgft_core::graph::Graph;

#[derive(Parser)]
#[command(name = "uemgft", version, about = "UEM graph Fourier transform experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an anomaly-detection experiment and write CSV results.
    Run(RunArgs),
    /// Sorted UEM eigenvalues along m (monotonicity curves).
    Fig1(Fig1Args),
    /// Export extended and UEM matrices as dense CSV.
    Matrices(MatricesArgs),
    /// Export UEM-GFT spectra of a uniform random signal.
    Spectra(SpectraArgs),
    /// Validate a station CSV file and print a short summary.
    IngestCheck(IngestArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// wave, uniform or station.
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated methods: gft,df1,df2,sp2,sp3,mrk,uem.
    #[arg(long)]
    gso: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write every cross-validation lattice point of run 0 to grid.csv.
    #[arg(long)]
    grid: bool,
}

#[derive(Args)]
struct GraphArgs {
    /// Read the graph from an edge-list file instead of sampling one.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Sensors in the sampled graph [fig1: 10, otherwise 50].
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GraphArgs {
    fn load(&self, default_nodes: usize) -> anyhow::Result<Graph> {
        if let Some(path) = &self.graph {
            return Ok(read_edge_list(path)?);
        }
        let mut rng = rng_from_seed(self.seed);
        Ok(random_sensor_graph(self.nodes.unwrap_or(default_nodes), self.k, self.seed, &mut rng, 1000)?)
    }
}

#[derive(Args)]
struct Fig1Args {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 0.4)]
    rho: f64,
    #[arg(long, default_value_t = 1.0)]
    n: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    scales: Vec<u32>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct MatricesArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 0.3)]
    rho: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    scales: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1")]
    m: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1")]
    n: Vec<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SpectraArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 0.3)]
    rho: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    scales: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1")]
    m: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1")]
    n: Vec<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct IngestArgs {
    path: PathBuf,
    /// lat_min,lat_max,lon_min,lon_max in degrees.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    bbox: Option<Vec<f64>>,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run(a) => {
            let mut overrides = Vec::new();
            let mut push = |k: &str, v: Option<String>| {
                if let Some(v) = v {
                    overrides.push((k.to_string(), v));
                }
            };
            push("experiment", a.experiment);
            push("nodes", a.nodes.map(|v| v.to_string()));
            push("k", a.k.map(|v| v.to_string()));
            push("runs", a.runs.map(|v| v.to_string()));
            push("seed", a.seed.map(|v| v.to_string()));
            push("gso", a.gso);
            push("out", a.out.map(|p| p.display().to_string()));
            if a.grid {
                push("write_grid", Some("true".into()));
            }
            let cfg = resolve(a.config.as_deref(), &overrides)?;
            let report = run_experiment(&cfg)?;
            write_report(&cfg.output_dir, &report)?;
            for row in &report.summary {
                println!("{:<4} mean F1 {:.4} (std {:.4})", row.method, row.mean_f1, row.std_f1);
            }
            println!("wrote {}", cfg.output_dir.display());
        }
        Command::Fig1(a) => {
            let graph = a.graph.load(10)?;
            let curves = eigen_curves(&graph, &a.scales, a.rho, a.n)?;
            write_file(&a.out.join("eigcurves.csv"), &eigcurves_csv(&curves))?;
            write_edge_list(&a.out.join("graph.txt"), &graph)?;
            println!("wrote {}", a.out.join("eigcurves.csv").display());
        }
        Command::Matrices(a) => {
            let graph = a.graph.load(50)?;
            let written = export_matrices(&a.out, &graph, a.rho, &a.scales, &a.m, &a.n)?;
            write_edge_list(&a.out.join("graph.txt"), &graph)?;
            println!("wrote {} matrices to {}", written.len(), a.out.display());
        }
        Command::Spectra(a) => {
            let graph = a.graph.load(50)?;
            let mut rng = rng_from_seed(a.graph.seed.wrapping_add(1));
            let signal = uniform_healthy(graph.n_nodes(), 0.0, 1.0, &mut rng);
            let written = export_spectra(&a.out, &graph, &signal, a.rho, &a.scales, &a.m, &a.n)?;
            write_edge_list(&a.out.join("graph.txt"), &graph)?;
            println!("wrote {} spectra to {}", written.len(), a.out.display());
        }
        Command::IngestCheck(a) => {
            let bbox = match a.bbox.as_deref() {
                None => None,
                Some(&[lat_min, lat_max, lon_min, lon_max]) => Some(BoundingBox { lat_min, lat_max, lon_min, lon_max }),
                Some(_) => bail!("--bbox takes lat_min,lat_max,lon_min,lon_max"),
            };
            let series = ingest_station_csv(&a.path, bbox.as_ref())
                .with_context(|| format!("invalid station file {}", a.path.display()))?;
            println!(
                "ok: {} stations, {} complete samples, source unit {:?}",
                series.n_stations(),
                series.samples.len(),
                series.source_unit
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("error: invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
