use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use affine_hall::context::Context;
use affine_hall::cyclic::{canonical_cyclic, CyclicSlice};
use affine_hall::hall::{FitOptions, TypeAlgebra};
use affine_hall::laurent::LaurentPoly;
use affine_hall::modrep::roots::root_table;
use affine_hall::modrep::CatalogOptions;
use affine_hall::pbwbasis::{PbwAlgebra, PbwSlice};
use affine_hall::verify;
use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "ahall", version, about = "Exact Hall algebra bases for tame valued and cyclic quivers")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Catalog cache directory.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Built-in context name.
    #[arg(long)]
    ctx: Option<String>,
    /// Quiver description file.
    #[arg(long, conflicts_with = "ctx")]
    quiver: Option<PathBuf>,
}

impl Source {
    fn resolve(&self, default: &str) -> Result<Context> {
        match (&self.ctx, &self.quiver) {
            (_, Some(path)) => Context::from_file(path).with_context(|| format!("reading quiver {}", path.display())),
            (Some(name), None) => Ok(name.parse()?),
            (None, None) => Ok(default.parse()?),
        }
    }

    fn given(&self) -> bool {
        self.ctx.is_some() || self.quiver.is_some()
    }
}

#[derive(Args, Debug, Clone)]
struct Fields {
    /// Fitting field sizes.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u32>>,
    /// Held-out field size used to confirm a fit.
    #[arg(long)]
    verify_prime: Option<u32>,
}

impl Fields {
    fn fit(&self, opts: &CatalogOptions) -> FitOptions {
        let mut f = FitOptions { catalog: opts.clone(), ..FitOptions::default() };
        if let Some(p) = &self.primes {
            f.fit = p.clone();
        }
        if let Some(v) = self.verify_prime {
            f.held_out.retain(|&x| x != v);
            f.held_out.insert(0, v);
        }
        f
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Roots β_t against the indecomposables of a finite-field catalog.
    Roots {
        #[command(flatten)]
        src: Source,
        /// Window |t| ≤ bound.
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 2)]
        verify_prime: u32,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Emit basis coordinate tables.
    Basis {
        #[command(subcommand)]
        which: BasisKind,
    },
    /// Same as `basis comp`.
    CompBasis(CompArgs),
    /// Canonical basis B(π) of the cyclic quiver.
    CyclicCanonical(CyclicArgs),
    /// Fit a Hall polynomial g^L_{MN} from finite-field counts.
    HallPoly {
        #[command(flatten)]
        src: Source,
        /// `L|M|N` with summands `[i;l)`, `S<i>` or `(a,b,…)`, each optionally `^m`.
        #[arg(long)]
        triple: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        primes: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "7")]
        verify: Vec<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum BasisKind {
    Comp(CompArgs),
    Cyclic(CyclicArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    #[value(name = "N")]
    N,
    #[value(name = "E")]
    E,
    #[value(name = "C")]
    C,
    #[value(name = "report")]
    Report,
}

#[derive(Args, Debug)]
struct CompArgs {
    #[command(flatten)]
    src: Source,
    #[arg(long, value_delimiter = ',', default_value = "1,1")]
    cap: Vec<usize>,
    #[arg(long, value_enum, default_value = "C")]
    emit: Emit,
    #[command(flatten)]
    fields: Fields,
}

#[derive(Args, Debug)]
struct CyclicArgs {
    #[arg(long, default_value_t = 2)]
    rank: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,2")]
    dim: Vec<usize>,
    #[arg(long, value_enum, default_value = "C")]
    emit: Emit,
    #[command(flatten)]
    fields: Fields,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Serre,
    Hallpoly,
    Triangularity,
    Kostka,
    Orthogonality,
    Eta,
    Kashiwara,
    Roots,
    Normalization,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[command(flatten)]
    src: Source,
    #[arg(long, value_delimiter = ',')]
    cap: Option<Vec<usize>>,
    #[command(flatten)]
    fields: Fields,
    /// Series truncation order for the normalization suite.
    #[arg(long, default_value_t = 10)]
    order: i64,
    #[arg(long, default_value_t = 2)]
    rank: usize,
    /// Size bound (eta) or root window (roots).
    #[arg(long)]
    bound: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    dim: Option<Vec<usize>>,
}

fn poly(p: &LaurentPoly) -> String {
    p.to_string()
}

fn pbw_table(s: &PbwSlice, emit: Emit) -> Vec<Value> {
    let rows: Vec<(usize, Option<&Vec<LaurentPoly>>)> = match emit {
        Emit::N => (0..s.indices.len()).map(|k| (k, None)).collect(),
        Emit::E => s.aperiodic.iter().zip(&s.pbw).map(|(&k, c)| (k, Some(c))).collect(),
        _ => s.aperiodic.iter().zip(&s.canonical).map(|(&k, c)| (k, Some(c))).collect(),
    };
    rows.into_iter()
        .map(|(k, coords)| {
            let coords: Vec<Value> = match coords {
                None => vec![json!([s.indices[k].to_string(), "1*v^0"])],
                Some(c) => c
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(j, p)| json!([s.indices[j].to_string(), poly(p)]))
                    .collect(),
            };
            json!({
                "index": s.indices[k].to_string(),
                "part": s.indices[k].part.0,
                "aperiodic": s.aperiodic.contains(&k),
                "coords": coords,
            })
        })
        .collect()
}

fn cmd_comp(a: &CompArgs, opts: &CatalogOptions) -> Result<(Value, bool)> {
    let ctx = a.src.resolve("kronecker")?;
    if a.cap.len() != ctx.n() {
        bail!("cap {:?} has {} entries, {} has {} vertices", a.cap, a.cap.len(), ctx.name(), ctx.n());
    }
    let h = TypeAlgebra::build(&ctx, &a.cap, a.fields.fit(opts)).with_context(|| format!("building the Hall algebra up to {:?}", a.cap))?;
    let pa = PbwAlgebra::new(&h)?;
    let basis = pa.basis(&a.cap)?;
    if a.emit == Emit::Report {
        let rep = basis.check(&pa)?;
        let ok = rep.passed();
        return Ok((json!({"context": ctx.name(), "cap": a.cap, "report": rep, "passed": ok}), ok));
    }
    let slices: Vec<Value> = basis
        .slices
        .iter()
        .map(|(g, s)| json!({"grading": g, "elements": pbw_table(s, a.emit)}))
        .collect();
    let which = format!("{:?}", a.emit);
    Ok((json!({"context": ctx.name(), "cap": a.cap, "basis": which, "slices": slices}), true))
}

fn cyclic_table(s: &CyclicSlice, emit: Emit) -> Vec<Value> {
    let rows: Vec<(usize, Option<&Vec<LaurentPoly>>)> = match emit {
        Emit::N => (0..s.all.len()).map(|k| (k, None)).collect(),
        Emit::E => s.aperiodic.iter().zip(&s.pbw).map(|(&k, c)| (k, Some(c))).collect(),
        _ => s.aperiodic.iter().zip(&s.canonical).map(|(&k, c)| (k, Some(c))).collect(),
    };
    rows.into_iter()
        .map(|(k, coords)| {
            let coords: Vec<Value> = match coords {
                None => vec![json!([s.all[k].to_string(), "1*v^0"])],
                Some(c) => c
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(j, p)| json!([s.all[j].to_string(), poly(p)]))
                    .collect(),
            };
            json!({"multisegment": s.all[k].to_string(), "aperiodic": s.aperiodic.contains(&k), "coords": coords})
        })
        .collect()
}

fn cmd_cyclic(a: &CyclicArgs, opts: &CatalogOptions) -> Result<(Value, bool)> {
    if a.dim.len() != a.rank {
        bail!("dimension vector {:?} does not have {} entries", a.dim, a.rank);
    }
    let ctx = Context::Cyclic(a.rank);
    let h = TypeAlgebra::build(&ctx, &a.dim, a.fields.fit(opts)).with_context(|| format!("building the Hall algebra up to {:?}", a.dim))?;
    let (slices, rep) = canonical_cyclic(&h, &a.dim)?;
    let ok = rep.passed();
    if a.emit == Emit::Report {
        return Ok((json!({"rank": a.rank, "dim": a.dim, "report": rep, "passed": ok}), ok));
    }
    let table: Vec<Value> = slices.iter().map(|s| json!({"grading": s.dims, "elements": cyclic_table(s, a.emit)})).collect();
    let which = format!("{:?}", a.emit);
    Ok((json!({"rank": a.rank, "dim": a.dim, "basis": which, "slices": table, "passed": ok}), ok))
}

fn run_suite(s: Suite, a: &VerifyArgs, opts: &CatalogOptions) -> Result<(Value, bool)> {
    let fit = a.fields.fit(opts);
    let cap = |d: &[usize]| a.cap.clone().unwrap_or_else(|| d.to_vec());
    let pair = |v: Value, ok: bool| (json!({"report": v, "passed": ok}), ok);
    Ok(match s {
        Suite::Serre => {
            let ctxs = if a.src.given() { vec![a.src.resolve("kronecker")?] } else { vec!["kronecker".parse()?, "c2-folded".parse()?] };
            let r = verify::serre_suite(&ctxs, a.fields.primes.as_deref().unwrap_or(&[2, 3]), opts)?;
            pair(serde_json::to_value(&r)?, r.passed())
        }
        Suite::Hallpoly => {
            let v = [a.fields.verify_prime.unwrap_or(7)];
            let r = verify::hallpoly_suite(a.fields.primes.as_deref().unwrap_or(&[2, 3, 4, 5]), &v, opts)?;
            pair(serde_json::to_value(&r)?, r.passed())
        }
        Suite::Triangularity => {
            let ctx = a.src.resolve("kronecker")?;
            let dim = a.dim.clone().unwrap_or(vec![2; a.rank]);
            let r = verify::triangularity_suite(&ctx, &cap(&[2, 2]), a.rank, &dim, &fit)?;
            pair(serde_json::to_value(&r)?, r.passed())
        }
        Suite::Kostka => {
            let ctx = a.src.resolve("kronecker")?;
            let r = verify::kostka_suite(&ctx, a.bound.unwrap_or(2), a.fields.primes.as_deref().unwrap_or(&[2, 3]), &fit)?;
            pair(serde_json::to_value(&r)?, r.passed())
        }
        Suite::Orthogonality => {
            let r = verify::orthogonality_suite(&a.src.resolve("kronecker")?, &cap(&[2, 2]), &fit)?;
            pair(serde_json::to_value(&r)?, r.passed())
        }
        Suite::Eta => {
            let r = verify::eta_suite(a.rank, a.bound.unwrap_or(5));
            pair(serde_json::to_value(&r)?, r.passed())
        }
        Suite::Kashiwara => {
            let r = verify::kashiwara_suite(&a.src.resolve("kronecker")?, &cap(&[2, 2]), &fit)?;
            let ok = r.passed();
            pair(serde_json::to_value(&r)?, ok)
        }
        Suite::Roots => {
            let ctxs = if a.src.given() { vec![a.src.resolve("kronecker")?] } else { vec!["kronecker".parse()?, "a2tilde".parse()?] };
            let q = a.fields.verify_prime.unwrap_or(2);
            let r = verify::roots_suite(&ctxs, a.bound.unwrap_or(4) as i64, q, opts)?;
            pair(serde_json::to_value(&r)?, r.passed())
        }
        Suite::Normalization => {
            let ctxs = if a.src.given() { vec![a.src.resolve("kronecker")?] } else { Context::all_builtin() };
            let r = verify::normalization_suite(&ctxs, a.order, &fit)?;
            pair(serde_json::to_value(&r)?, r.passed())
        }
        Suite::All => {
            let mut out = serde_json::Map::new();
            let mut ok = true;
            for (name, s) in [
                ("serre", Suite::Serre),
                ("hallpoly", Suite::Hallpoly),
                ("triangularity", Suite::Triangularity),
                ("kostka", Suite::Kostka),
                ("orthogonality", Suite::Orthogonality),
                ("eta", Suite::Eta),
                ("kashiwara", Suite::Kashiwara),
                ("roots", Suite::Roots),
                ("normalization", Suite::Normalization),
            ] {
                let (v, p) = run_suite(s, a, opts)?;
                ok &= p;
                out.insert(name.to_string(), v);
            }
            (json!({"suites": out, "passed": ok}), ok)
        }
    })
}

fn run(cli: &Cli) -> Result<(Value, bool)> {
    let opts = CatalogOptions { cache_dir: cli.global.cache_dir.clone(), ..CatalogOptions::default() };
    let (body, ok) = match &cli.command {
        Command::Roots { src, bound, verify_prime } => {
            let ctx = src.resolve("kronecker")?;
            let r = root_table(&ctx, *bound, *verify_prime, &opts)?;
            let ok = r.passed();
            (json!({"command": "roots", "report": r, "passed": ok}), ok)
        }
        Command::Verify(a) => {
            let (v, ok) = run_suite(a.suite, a, &opts)?;
            let name = a.suite.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default();
            (json!({"command": "verify", "suite": name, "result": v, "passed": ok}), ok)
        }
        Command::Basis { which: BasisKind::Comp(a) } | Command::CompBasis(a) => cmd_comp(a, &opts)?,
        Command::Basis { which: BasisKind::Cyclic(a) } | Command::CyclicCanonical(a) => cmd_cyclic(a, &opts)?,
        Command::HallPoly { src, triple, primes, verify } => {
            if primes.len() < 2 {
                bail!("fitting needs at least two field sizes");
            }
            let ctx = src.resolve("kronecker")?;
            let spec = triple.parse().map_err(|e| anyhow!("{e}"))?;
            let r = verify::hall_poly(&ctx, &spec, primes, verify, &opts)?;
            let ok = r.passed();
            (json!({"command": "hall-poly", "context": r.context, "triple": r.triple, "poly": r.poly, "text": r.text,
                    "counts": r.counts, "verified_at": r.verified_at, "verified": r.verified, "passed": ok}), ok)
        }
    };
    let mut doc = json!({"schema": 1});
    doc.as_object_mut().expect("object").extend(body.as_object().cloned().unwrap_or_default());
    Ok((doc, ok))
}

/// The error chain, skipping causes already quoted by their parent.
fn chain(e: &anyhow::Error) -> String {
    let mut parts: Vec<String> = Vec::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !parts.last().is_some_and(|p| p.contains(&text)) {
            parts.push(text);
        }
    }
    parts.join(": ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("ahall: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((doc, ok)) => {
            let mut text = serde_json::to_string_pretty(&doc).expect("JSON value serializes");
            text.push('\n');
            let written = match &cli.global.out {
                Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("ahall: {}", chain(&e));
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("ahall: {}", chain(&e));
            ExitCode::from(2)
        }
    }
}
