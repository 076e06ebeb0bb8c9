//! Command-line front end.
//!
//! Exit codes: 0 on success (and `InDomain` for `check`), 1 for
//! `NotInDomain`, 3 for `Undetermined`, 2 for usage errors, 4 when a
//! computation fails.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use markoff_hurwitz::bowditch::{is_in_domain, BowditchConfig, Status};
use markoff_hurwitz::hurwitz::{integer_solutions, HurwitzPoint};
use markoff_hurwitz::identity::{identity_partial_sums, IdentityVariant, PairWeights, SeriesOptions, TruncationCenter};
use markoff_hurwitz::slice::{render, Coloring, SliceJob};
use markoff_hurwitz::tree::{for_each_fibonacci, multiplicity, sierpinski_vector, Color, DirectedEdge, Vertex};
use markoff_hurwitz::{parse_complex, C64};

#[derive(Parser)]
#[command(name = "hurwitz", version, about = "Orbits of the Hurwitz equation on the n-valent tree")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct PointArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(3..=16))]
    n: u8,
    /// Coordinates as `re,im` (or a bare real), one per colour. Write a
    /// value with a leading minus as `--a=-1,0`; `--a` may be repeated.
    #[arg(long, num_args = 1.., value_parser = parse_complex)]
    a: Vec<C64>,
}

impl PointArgs {
    fn point(&self) -> HurwitzPoint {
        if self.a.len() != self.n as usize {
            Cli::command()
                .error(
                    ErrorKind::WrongNumberOfValues,
                    format!("--a needs {} coordinates, got {}", self.n, self.a.len()),
                )
                .exit();
        }
        HurwitzPoint::new(self.a.clone()).unwrap_or_else(|e| Cli::command().error(ErrorKind::ValueValidation, e).exit())
    }
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long = "K", default_value_t = 2.5, value_parser = parse_k)]
    k: f64,
    /// Breadth-first expansions before giving up.
    #[arg(long, default_value_t = 1_000_000)]
    budget: usize,
    #[arg(long, default_value_t = 10_000)]
    descent_budget: usize,
}

impl SearchArgs {
    fn config(&self) -> BowditchConfig {
        BowditchConfig {
            k: self.k,
            bfs_budget: self.budget,
            descent_budget: self.descent_budget,
            ..BowditchConfig::default()
        }
    }
}

fn parse_k(s: &str) -> Result<f64, String> {
    let k: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if k > 2.0 {
        Ok(k)
    } else {
        Err("K must exceed 2".into())
    }
}

fn parse_res(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once('x').ok_or("expected WxH")?;
    let w: usize = w.parse().map_err(|e| format!("{e}"))?;
    let h: usize = h.parse().map_err(|e| format!("{e}"))?;
    if w == 0 || h == 0 {
        return Err("resolution must be positive".into());
    }
    Ok((w, h))
}

#[derive(Clone)]
struct Letters(Vec<Color>);

fn parse_letters(s: &str) -> Result<Letters, String> {
    if s == "v0" || s.is_empty() {
        return Ok(Letters(Vec::new()));
    }
    s.split('.').map(|t| t.parse::<Color>().map_err(|e| format!("{e}"))).collect::<Result<_, _>>().map(Letters)
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    /// `Σ h(φ(γ)) − Σ μ/φ(v)`.
    H,
    /// `Σ 𝔥_μ` with uniform pair weights.
    Frak,
    /// The relative identity for the edge given by `--tail` and `--color`.
    Edge,
}

#[derive(Clone, Copy, ValueEnum)]
enum Center {
    Tree,
    Root,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColoringArg {
    Binary,
    TreeSize,
    KLevel,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dump `Φ` on every vertex up to a depth, one JSON record per line.
    Orbit {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Positive integer solutions with all entries at most `bound`.
    Markoff {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=16))]
        n: u8,
        #[arg(long)]
        bound: i128,
    },
    /// Membership verdict as JSON. Exit 0, 1 or 3 for in, out, undetermined.
    Check {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Partial sums of an identity by truncation depth, as JSON lines.
    Identity {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Variant::H)]
        variant: Variant,
        #[arg(long, value_enum, default_value_t = Center::Tree)]
        center: Center,
        /// Tail vertex of the edge for `--variant edge`, as `v0` or `1.2.3`.
        #[arg(long, value_parser = parse_letters, default_value = "v0")]
        tail: Letters,
        #[arg(long, default_value_t = 1)]
        color: Color,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Render the diagonal slice `(z, …, z)`.
    Slice {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=16), default_value_t = 3)]
        n: u8,
        #[arg(long, value_parser = parse_complex, default_value = "0,0")]
        center: C64,
        #[arg(long, default_value_t = 8.0)]
        width: f64,
        #[arg(long, default_value_t = 8.0)]
        height: f64,
        #[arg(long, value_parser = parse_res, default_value = "512x512")]
        res: (usize, usize),
        #[arg(long = "K", default_value_t = 2.5, value_parser = parse_k)]
        k: f64,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = ColoringArg::Binary)]
        coloring: ColoringArg,
        /// Run the full search on every pixel.
        #[arg(long)]
        no_fast_path: bool,
        #[arg(long, default_value = "slice.ppm")]
        out: String,
        #[arg(long)]
        summary: Option<String>,
    },
    /// Fibonacci function diagnostics.
    Fib {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=16))]
        n: u8,
        /// Print the multiplicity of each value `1..=max_m`.
        #[arg(long, default_value_t = 20)]
        max_m: u64,
        /// Depth for the Sierpinski injectivity check and `Σ F^{-s}`.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 2.0)]
        s: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(4)
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cmd {
        Cmd::Orbit { point, depth } => {
            let a = point.point();
            let mut err = None;
            a.orbit_for_each(depth, |r| {
                if err.is_none() {
                    err = serde_json::to_writer(&mut out, r).err().map(anyhow::Error::from);
                    if let Err(e) = writeln!(out) {
                        err = Some(e.into());
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Cmd::Markoff { n, bound } => {
            for x in integer_solutions(n as usize, bound)? {
                let parts: Vec<String> = x.iter().map(|v| v.to_string()).collect();
                writeln!(out, "({})", parts.join(", "))?;
            }
        }
        Cmd::Check { point, search } => {
            let a = point.point();
            let verdict = is_in_domain(&a, &search.config())?;
            serde_json::to_writer_pretty(&mut out, &verdict)?;
            writeln!(out)?;
            out.flush()?;
            return Ok(ExitCode::from(match verdict.status {
                Status::InDomain => 0,
                Status::NotInDomain => 1,
                Status::Undetermined => 3,
            }));
        }
        Cmd::Identity { point, depth, variant, center, tail, color, search } => {
            let a = point.point();
            let variant = match variant {
                Variant::H => IdentityVariant::McShaneH,
                Variant::Frak => IdentityVariant::FrakH(PairWeights::Uniform),
                Variant::Edge => {
                    let n = point.n as usize;
                    if color == 0 || color as usize > n {
                        Cli::command().error(ErrorKind::ValueValidation, format!("--color must lie in 1..={n}")).exit();
                    }
                    let tail = Vertex::new(n, tail.0).unwrap_or_else(|e| Cli::command().error(ErrorKind::ValueValidation, e).exit());
                    IdentityVariant::RelativeEdge(DirectedEdge { tail, color })
                }
            };
            let center = match center {
                Center::Tree => TruncationCenter::AttractingTree,
                Center::Root => TruncationCenter::Root,
            };
            let opts = SeriesOptions { center, bowditch: search.config() };
            for r in identity_partial_sums(&a, depth, &variant, &opts)? {
                serde_json::to_writer(&mut out, &r)?;
                writeln!(out)?;
            }
        }
        Cmd::Slice { n, center, width, height, res, k, budget, coloring, no_fast_path, out: path, summary } => {
            let coloring = match coloring {
                ColoringArg::Binary => Coloring::Binary,
                ColoringArg::TreeSize => Coloring::TreeSize,
                ColoringArg::KLevel => Coloring::KLevel,
            };
            let job = SliceJob { n: n as usize, center, width, height, res, k, budget, coloring, fast_path: !no_fast_path };
            let (image, sum) = render(&job);
            image.write_ppm(BufWriter::new(File::create(&path).with_context(|| format!("creating {path}"))?))?;
            let json = serde_json::to_string_pretty(&sum)?;
            match summary {
                Some(p) => std::fs::write(&p, json).with_context(|| format!("writing {p}"))?,
                None => writeln!(out, "{json}")?,
            }
        }
        Cmd::Fib { n, max_m, depth, s } => fib(&mut out, n as usize, max_m, depth, s)?,
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn fib(out: &mut impl Write, n: usize, max_m: u64, depth: usize, s: f64) -> Result<()> {
    writeln!(out, "m\tmultiplicity")?;
    for m in 1..=max_m {
        writeln!(out, "{m}\t{}", multiplicity(n, m)?)?;
    }

    // Sierpinski vectors on the geodesics meeting the colour-n side of v0.
    let top = n as Color;
    let mut seen = std::collections::HashMap::new();
    let mut collisions = 0usize;
    let mut partial = vec![0.0f64; depth + 1];
    let mut failure = None;
    for_each_fibonacci(
        n,
        depth,
        |_| false,
        |g, f| {
            partial[g.depth()] += (f as f64).powf(-s);
            let (_, j) = g.colors();
            let on_side = match g.root_vertex().letters().first() {
                None => j == top,
                Some(&c) => c == top,
            };
            if on_side && failure.is_none() {
                match sierpinski_vector(n, g) {
                    Ok(v) => {
                        if seen.insert(v, g.clone()).is_some() {
                            collisions += 1;
                        }
                    }
                    Err(e) => failure = Some(e),
                }
            }
        },
    )?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    writeln!(out, "sierpinski vectors to depth {depth}: {} geodesics, {collisions} collisions", seen.len())?;
    writeln!(out, "depth\tsum F^-{s}")?;
    let mut acc = 0.0;
    for (d, p) in partial.iter().enumerate() {
        acc += p;
        writeln!(out, "{d}\t{acc:.12}")?;
    }
    Ok(())
}
