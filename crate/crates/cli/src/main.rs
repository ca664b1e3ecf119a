use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qnsc::analysis::{
    is_controllable, is_heterogeneously_quantitatively_completable, is_quantitatively_completable,
    is_quantitatively_nonblocking, BoundSpec,
};
use qnsc::io::{
    export_dot, parse_automaton_with, serialize_automaton, ParseOptions, PropertyInfo, Report,
    Stats,
};
use qnsc::oracle::enumerate_bounded;
use qnsc::synthesis::{
    sup_chqc_traced, sup_cqc_traced, sup_hqc_traced, sup_qc_by, supcon_traced, SupQcMethod,
    SynthesisTrace,
};
use qnsc::{marked_language_compare, product, union_marked, Generator, Verdict};

/// Quantitatively nonblocking supervisory control: checks and synthesis.
///
/// Exit status 0 means the check passed or the result is nonempty. Status 1
/// means the check failed or the result is empty. Errors exit with 2.
#[derive(Parser, Debug)]
#[command(name = "qnsc", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write a JSON report.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Write the synthesis trace as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Derive controllability from numeric event names (odd controllable,
    /// even uncontrollable).
    #[arg(long, global = true)]
    parity_convention: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check nonblockingness, or N-step nonblockingness with --n.
    CheckNb {
        file: PathBuf,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Check quantitative completability with bound N.
    CheckQc {
        file: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// Check heterogeneous completability of SPEC against PLANT's markers.
    CheckHqc {
        plant: PathBuf,
        spec: PathBuf,
        #[arg(long)]
        bounds: BoundSpec,
    },
    /// Check controllability of SPEC with respect to PLANT.
    CheckCtrl { plant: PathBuf, spec: PathBuf },
    /// Supremal quantitatively completable sublanguage.
    Supqc {
        spec: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Method::Generator)]
        method: Method,
    },
    /// Supremal controllable sublanguage of SPEC (SPEC within PLANT).
    Supcon { plant: PathBuf, spec: PathBuf },
    /// Supremal controllable and quantitatively completable supervisor for
    /// PLANT under SPEC.
    SynthQ {
        plant: PathBuf,
        spec: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// Supremal heterogeneously completable sublanguage of SPEC (SPEC
    /// within PLANT).
    Suphqc {
        plant: PathBuf,
        spec: PathBuf,
        #[arg(long)]
        bounds: BoundSpec,
    },
    /// Supremal controllable and heterogeneously completable supervisor for
    /// PLANT under SPEC.
    SynthHq {
        plant: PathBuf,
        spec: PathBuf,
        #[arg(long)]
        bounds: BoundSpec,
    },
    /// Synchronous product.
    Product { a: PathBuf, b: PathBuf },
    /// Generator for the union of the marked languages.
    Union { a: PathBuf, b: PathBuf },
    /// Compare marked languages.
    Compare { a: PathBuf, b: PathBuf },
    /// Graphviz export.
    Dot { file: PathBuf },
    /// Brute-force helpers.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// List the marked strings up to a length, shortest first.
    Enum {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    Generator,
    Language,
    Both,
}

impl From<Method> for SupQcMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Generator => SupQcMethod::Generator,
            Method::Language => SupQcMethod::Language,
            Method::Both => SupQcMethod::Both,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

struct Ctx<'a> {
    common: &'a Common,
    started: Instant,
}

impl Ctx<'_> {
    fn load(&self, path: &Path) -> Result<Generator> {
        let text =
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let opts = ParseOptions {
            parity_convention: self.common.parity_convention,
        };
        parse_automaton_with(&text, opts).with_context(|| format!("{}", path.display()))
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.common.out {
            Some(p) => write_atomic(p, text),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }

    fn elapsed_ms(&self) -> f64 {
        self.started.elapsed().as_secs_f64() * 1e3
    }

    fn trace(&self) -> Option<SynthesisTrace> {
        self.common.trace.as_ref().map(|_| SynthesisTrace::new())
    }

    fn write_trace(&self, trace: Option<SynthesisTrace>) -> Result<()> {
        if let (Some(p), Some(t)) = (&self.common.trace, trace) {
            write_atomic(p, &t.to_json())?;
        }
        Ok(())
    }

    fn check(&self, property: PropertyInfo, verdict: Verdict, input: &Generator) -> Result<bool> {
        let holds = verdict.holds;
        let mut text = format!(
            "{}: {}\n",
            property.name,
            if holds { "holds" } else { "fails" }
        );
        for w in &verdict.witnesses {
            let marker = w
                .marker
                .as_ref()
                .map(|m| format!(" marker {m}"))
                .unwrap_or_default();
            text.push_str(&format!(
                "  {:?} at {}{marker}: access [{}] trace [{}]",
                w.kind,
                w.state,
                w.access.join(" "),
                w.trace.join(" ")
            ));
            if !w.cycle.is_empty() {
                text.push_str(&format!(" cycle [{}]", w.cycle.join(" ")));
            }
            text.push('\n');
        }
        self.emit(&text)?;
        let report = Report::from_verdict(property, verdict, Stats::of(input, self.elapsed_ms()));
        self.write_report(&report)?;
        Ok(holds)
    }

    fn result(
        &self,
        property: PropertyInfo,
        g: &Generator,
        trace: Option<SynthesisTrace>,
    ) -> Result<bool> {
        self.emit(&serialize_automaton(g))?;
        self.write_trace(trace)?;
        let verdict = Verdict {
            holds: !g.is_empty(),
            witnesses: Vec::new(),
        };
        let report = Report::from_verdict(property, verdict, Stats::of(g, self.elapsed_ms()));
        self.write_report(&report)?;
        Ok(!g.is_empty())
    }

    fn write_report(&self, report: &Report) -> Result<()> {
        if let Some(p) = &self.common.report {
            write_atomic(p, &report.to_json())?;
        }
        Ok(())
    }
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot write {}", path.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let ctx = Ctx {
        common: &cli.common,
        started: Instant::now(),
    };
    match &cli.command {
        Command::CheckNb { file, n: None } => {
            let g = ctx.load(file)?;
            ctx.check(PropertyInfo::new("nonblocking"), g.is_nonblocking(), &g)
        }
        Command::CheckNb { file, n: Some(n) } => {
            let g = ctx.load(file)?;
            let v = is_quantitatively_nonblocking(&g, *n)?;
            ctx.check(
                PropertyInfo::new("quantitatively_nonblocking").param("n", *n),
                v,
                &g,
            )
        }
        Command::CheckQc { file, n } => {
            let g = ctx.load(file)?;
            let v = is_quantitatively_completable(&g, *n)?;
            ctx.check(
                PropertyInfo::new("quantitatively_completable").param("n", *n),
                v,
                &g,
            )
        }
        Command::CheckHqc {
            plant,
            spec,
            bounds,
        } => {
            let (g, k) = (ctx.load(plant)?, ctx.load(spec)?);
            let v = is_heterogeneously_quantitatively_completable(&g, &k, bounds)?;
            let p = PropertyInfo::new("heterogeneously_quantitatively_completable")
                .param("bounds", bounds.to_string());
            ctx.check(p, v, &k)
        }
        Command::CheckCtrl { plant, spec } => {
            let (g, k) = (ctx.load(plant)?, ctx.load(spec)?);
            let v = is_controllable(&g, &k)?;
            ctx.check(PropertyInfo::new("controllable"), v, &k)
        }
        Command::Supqc { spec, n, method } => {
            let k = ctx.load(spec)?;
            let mut trace = ctx.trace();
            let out = sup_qc_by(&k, *n, (*method).into(), trace.as_mut())?;
            let p = PropertyInfo::new("sup_qc")
                .param("n", *n)
                .param("method", format!("{method:?}").to_lowercase());
            ctx.result(p, &out, trace)
        }
        Command::Supcon { plant, spec } => {
            let (g, k) = (ctx.load(plant)?, ctx.load(spec)?);
            let mut trace = ctx.trace();
            let out = supcon_traced(&g, &k, trace.as_mut())?;
            ctx.result(PropertyInfo::new("supcon"), &out, trace)
        }
        Command::SynthQ { plant, spec, n } => {
            let (g, e) = (ctx.load(plant)?, ctx.load(spec)?);
            let k = product(&g, &e)?;
            let mut trace = ctx.trace();
            let out = sup_cqc_traced(&g, &k, *n, trace.as_mut())?;
            ctx.result(PropertyInfo::new("sup_cqc").param("n", *n), &out, trace)
        }
        Command::Suphqc {
            plant,
            spec,
            bounds,
        } => {
            let (g, k) = (ctx.load(plant)?, ctx.load(spec)?);
            let mut trace = ctx.trace();
            let out = sup_hqc_traced(&g, &k, bounds, trace.as_mut())?;
            ctx.result(
                PropertyInfo::new("sup_hqc").param("bounds", bounds.to_string()),
                &out,
                trace,
            )
        }
        Command::SynthHq {
            plant,
            spec,
            bounds,
        } => {
            let (g, e) = (ctx.load(plant)?, ctx.load(spec)?);
            let mut trace = ctx.trace();
            let out = sup_chqc_traced(&g, &e, bounds, trace.as_mut())?;
            ctx.result(
                PropertyInfo::new("sup_chqc").param("bounds", bounds.to_string()),
                &out,
                trace,
            )
        }
        Command::Product { a, b } => {
            let out = product(&ctx.load(a)?, &ctx.load(b)?)?;
            ctx.result(PropertyInfo::new("product"), &out, None)
        }
        Command::Union { a, b } => {
            let out = union_marked(&ctx.load(a)?, &ctx.load(b)?)?;
            ctx.result(PropertyInfo::new("union"), &out, None)
        }
        Command::Compare { a, b } => {
            let rel = marked_language_compare(&ctx.load(a)?, &ctx.load(b)?)?;
            ctx.emit(&format!("{}\n", rel.name()))?;
            Ok(rel.is_equal())
        }
        Command::Dot { file } => {
            ctx.emit(&export_dot(&ctx.load(file)?))?;
            Ok(true)
        }
        Command::Oracle {
            command: OracleCommand::Enum { file, max_len },
        } => {
            let g = ctx.load(file)?;
            let lang = enumerate_bounded(&g, *max_len)?;
            let mut text = String::new();
            for w in lang.marked_shortlex() {
                text.push_str(&g.alphabet().render(w));
                text.push('\n');
            }
            ctx.emit(&text)?;
            Ok(true)
        }
    }
}
