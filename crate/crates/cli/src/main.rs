//! `semifield-forge`: builds the two families of commutative presemifields,
//! verifies the isotopisms between them and decides strong isotopy.
//! Machine output is one JSON report on stdout; a short summary goes to stderr.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use semifield_core::constructions::{self, StrongBranch, BRUTE_FORCE_LIMIT};
use semifield_core::families::{self, BhbParams};
use semifield_core::isotopy::{self, Verdict};
use semifield_core::json::{
    self, CertificateJson, FamilyDescriptor, FieldJson, IsotopyDataJson, NucleiJson, PresemifieldJson,
    RunReport, Timing, TripleJson,
};
use semifield_core::selftest::{self, SelftestConfig};
use semifield_core::{Error, FieldCtx, Presemifield, TowerParams};

const BOUND_ENV: &str = "SEMIFIELD_FORGE_BOUND";

/// Largest field whose multiplication table may be dumped.
const TABLE_LIMIT: u32 = 729;

#[derive(Parser, Debug)]
#[command(name = "semifield-forge", version, about = "Commutative presemifields P(q,l) and B(q,l,d,beta): construction, isotopisms, strong isotopy")]
struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Add wall-clock timing to the report (makes it non-reproducible)
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct FieldArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    ell: u32,
    /// Defining polynomial of F_(q^(2 ell)) over F_p, coefficients c0,c1,...,cn
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// Also run the definitional p^(2n) checks (and the brute-force search for `strong`)
    #[arg(long)]
    slow_oracles: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(name = "LMPTB")]
    Lmptb,
    #[value(name = "BHB")]
    Bhb,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build one presemifield and check it
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[command(flatten)]
        field: FieldArgs,
        /// BHB only
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// BHB only: beta = g^index for the field's fixed generator g
        #[arg(long, default_value_t = 1)]
        beta_index: u64,
        /// Write the multiplication table as CSV of element indices (x,y,x*y)
        #[arg(long)]
        table: Option<PathBuf>,
        /// Write the spread set as a sorted JSON list of maps
        #[arg(long)]
        spread: Option<PathBuf>,
    },
    /// Isotopisms between P(q,l) and B(q,l,2,beta_bar) and their nuclei
    Isotopy {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Decide strong isotopy of P(q,l) and B(q,l,2,beta_bar)
    Strong {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Seeded property suites at (3,3), (5,3), (3,5)
    Selftest {
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
        /// Skip parameter sets whose field needs more bits
        #[arg(long)]
        max_field_bits: Option<u32>,
        #[arg(long)]
        slow_oracles: bool,
    },
}

/// A failed run: exit code and message.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParams(_)
            | Error::NotOddPrime(_)
            | Error::ReducibleModulus(_)
            | Error::PreconditionFailed(_)
            | Error::ZeroInput => 2,
            Error::SizeBoundExceeded { .. } => 3,
            _ => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(what: &str, e: std::io::Error) -> Failure {
    Failure {
        code: 2,
        message: format!("{what}: {e}"),
    }
}

fn bug(message: impl Into<String>) -> Failure {
    Failure {
        code: 4,
        message: message.into(),
    }
}

/// Outcome of a command: the report and the summary lines.
struct Outcome {
    report: RunReport,
    summary: Vec<String>,
    code: u8,
}

fn size_bound() -> Result<Option<u64>, Failure> {
    match std::env::var(BOUND_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| Failure {
            code: 2,
            message: format!("{BOUND_ENV} = {v:?} is not a non-negative integer"),
        }),
        Err(_) => Ok(None),
    }
}

fn build_ctx(args: &FieldArgs, d: Option<u32>) -> Result<Arc<FieldCtx>, Failure> {
    let mut params = TowerParams::from_q(args.q, args.ell)?;
    if let Some(d) = d {
        params = params.with_d(d);
    }
    if let Some(bound) = size_bound()? {
        params = params.with_size_bound(bound);
    }
    Ok(Arc::new(FieldCtx::new(params, args.modulus.as_deref())?))
}

/// Both families need `ℓ > 1` odd.
fn require_odd_ell(ell: u32) -> Result<(), Failure> {
    if ell < 3 || ell % 2 == 0 {
        return Err(Error::InvalidParams(format!("ell = {ell} must be odd and > 1")).into());
    }
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn write_file(path: &PathBuf, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<(), Failure> {
    let file = File::create(path).map_err(|e| io_failure(&format!("cannot create {}", path.display()), e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| io_failure(&format!("cannot write {}", path.display()), e))
}

fn construct(
    report: &mut RunReport,
    family: Family,
    field: &FieldArgs,
    d: u32,
    beta_index: u64,
    table: Option<&PathBuf>,
    spread: Option<&PathBuf>,
) -> Result<Vec<String>, Failure> {
    require_odd_ell(field.ell)?;
    let ctx = build_ctx(field, (family == Family::Bhb).then_some(d))?;
    report.field = Some(FieldJson::new(&ctx));
    let s: Presemifield = match family {
        Family::Lmptb => {
            report.families.push(FamilyDescriptor::lmptb(&ctx));
            families::lmptb(&ctx)?
        }
        Family::Bhb => {
            let beta = families::beta_from_index(&ctx, beta_index);
            report.families.push(FamilyDescriptor::bhb(&ctx, d, beta)?);
            families::bhb(&ctx, BhbParams { d, beta })?
        }
    };
    let valid = s.is_presemifield();
    let commutative = s.is_commutative();
    let mut results = json!({
        "presemifield": to_value(&PresemifieldJson::new(&s)),
        "is_presemifield": valid,
        "commutative": commutative,
    });
    if field.slow_oracles {
        results["is_presemifield_by_scan"] = json!(s.is_presemifield_by_scan());
        results["commutative_exhaustive"] = json!(s.is_commutative_exhaustive());
    }
    if valid {
        let n = isotopy::nuclei(&s)?;
        results["nuclei"] = to_value(&NucleiJson::from(n));
    }
    if let Some(path) = table {
        if ctx.order() > TABLE_LIMIT {
            return Err(Failure {
                code: 2,
                message: format!("table dump needs a field of order at most {TABLE_LIMIT}, got {}", ctx.order()),
            });
        }
        write_file(path, |w| s.write_table_csv(w))?;
        results["table"] = json!(path.display().to_string());
    }
    if let Some(path) = spread {
        let maps = json::spread_set(&ctx, &s.spread_set());
        write_file(path, |w| {
            serde_json::to_writer(&mut *w, &maps).map_err(std::io::Error::other)?;
            writeln!(w)
        })?;
        results["spread_set"] = json!(path.display().to_string());
    }
    report.results = results;
    Ok(vec![format!(
        "{}: presemifield {valid}, commutative {commutative}",
        s.label()
    )])
}

fn isotopy_cmd(report: &mut RunReport, field: &FieldArgs) -> Result<Vec<String>, Failure> {
    require_odd_ell(field.ell)?;
    let ctx = build_ctx(field, Some(2))?;
    report.field = Some(FieldJson::new(&ctx));
    let (t45, cor) = constructions::cor46_isotopism(&ctx)?;
    report.families.push(FamilyDescriptor::lmptb(&ctx));
    report.families.push(FamilyDescriptor::bhb(&ctx, 2, t45.beta_bar)?);
    let p = families::lmptb(&ctx)?;
    let b = families::bhb(&ctx, BhbParams { d: 2, beta: t45.beta_bar })?;
    let (pt, bt) = (p.ts()?, b.ts()?);
    let nuclei: Vec<NucleiJson> = [&p, &b, &pt, &bt]
        .into_iter()
        .map(|s| isotopy::nuclei(s).map(NucleiJson::from))
        .collect::<Result<_, _>>()?;
    if nuclei[0] != nuclei[1] || nuclei[2] != nuclei[3] {
        return Err(bug("isotopic presemifields with different nuclei"));
    }
    let mut results = json!({
        "data": to_value(&IsotopyDataJson::new(&ctx, &t45)),
        "symplectic": to_value(&TripleJson::new(&ctx, &t45.triple)),
        "commutative": to_value(&TripleJson::new(&ctx, &cor)),
        "strong": cor.is_strong(),
        "nuclei": {
            "P": nuclei[0], "B": nuclei[1], "P_ts": nuclei[2], "B_ts": nuclei[3], "equal": true,
        },
    });
    if field.slow_oracles {
        let v = isotopy::verify_isotopism_all_pairs(&p, &b, &cor)?;
        if v != Verdict::Verified {
            return Err(bug(format!("commutative triple fails pointwise: {v:?}")));
        }
        results["all_pairs"] = json!(v.as_str());
    }
    report.results = results;
    Ok(vec![
        format!("{} -> {}: {}", t45.triple.source, t45.triple.target, t45.triple.status.as_str()),
        format!(
            "{} -> {}: {}{}",
            cor.source,
            cor.target,
            cor.status.as_str(),
            if cor.is_strong() { " (strong)" } else { "" }
        ),
        format!(
            "nuclei (left, middle, right): P ({}, {}, {}), P^t* ({}, {}, {})",
            nuclei[0].left, nuclei[0].middle, nuclei[0].right, nuclei[2].left, nuclei[2].middle, nuclei[2].right
        ),
    ])
}

fn strong_cmd(report: &mut RunReport, field: &FieldArgs) -> Result<Vec<String>, Failure> {
    require_odd_ell(field.ell)?;
    let ctx = build_ctx(field, Some(2))?;
    report.field = Some(FieldJson::new(&ctx));
    let mut cert = constructions::decide_strong(&ctx, false)?;
    report.families.push(FamilyDescriptor::lmptb(&ctx));
    report.families.push(FamilyDescriptor::bhb(&ctx, 2, cert.beta_bar)?);
    let mut notes = Vec::new();
    if field.slow_oracles {
        if let StrongBranch::NotExists(t) = &mut cert.branch {
            match constructions::brute_force_semilinear(&ctx, t.delta) {
                Ok(bf) if bf.found != 0 => {
                    return Err(bug(format!("brute force found {} strong isotopisms", bf.found)));
                }
                Ok(bf) => t.brute_force = Some(bf),
                Err(Error::SizeBoundExceeded { order, .. }) => notes.push(format!(
                    "brute force skipped: {order} candidates exceed {BRUTE_FORCE_LIMIT}"
                )),
                Err(e) => return Err(e.into()),
            }
        }
    }
    let cj = CertificateJson::new(&ctx, &cert);
    let mut results = to_value(&cj);
    if !notes.is_empty() {
        results["notes"] = json!(notes);
    }
    report.results = results;
    let mut summary = vec![format!(
        "P({q},{l}) and B({q},{l},2,beta_bar) strongly isotopic: {}",
        if cert.exists() { "yes" } else { "no" },
        q = cert.q,
        l = cert.ell
    )];
    summary.extend(notes);
    Ok(summary)
}

fn selftest_cmd(report: &mut RunReport, cfg: SelftestConfig) -> (Vec<String>, u8) {
    let r = selftest::run(&cfg);
    let mut summary: Vec<String> = r
        .suites
        .iter()
        .map(|s| match &s.skipped {
            Some(why) => format!("{} ({},{}): skipped, {why}", s.name, s.q, s.ell),
            None => format!(
                "{} ({},{}): {} checks, {}",
                s.name,
                s.q,
                s.ell,
                s.checks,
                if s.passed { "pass" } else { "FAIL" }
            ),
        })
        .collect();
    summary.push(format!("selftest {}", if r.passed { "passed" } else { "FAILED" }));
    report.results = to_value(&r);
    (summary, if r.passed { 0 } else { 1 })
}

fn run(cli: &Cli, command_echo: Vec<String>) -> Result<Outcome, Failure> {
    let mut report = RunReport::new(command_echo);
    let mut code = 0;
    let summary = match &cli.command {
        Command::Construct {
            family,
            field,
            d,
            beta_index,
            table,
            spread,
        } => construct(&mut report, *family, field, *d, *beta_index, table.as_ref(), spread.as_ref())?,
        Command::Isotopy { field } => isotopy_cmd(&mut report, field)?,
        Command::Strong { field } => strong_cmd(&mut report, field)?,
        Command::Selftest {
            seed,
            max_field_bits,
            slow_oracles,
        } => {
            let cfg = SelftestConfig {
                seed: *seed,
                max_field_bits: *max_field_bits,
                slow_oracles: *slow_oracles,
                ..Default::default()
            };
            let (summary, c) = selftest_cmd(&mut report, cfg);
            code = c;
            summary
        }
    };
    Ok(Outcome { report, summary, code })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot start {jobs} workers: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match run(&cli, echo) {
        Ok(mut out) => {
            if cli.timing {
                out.report.timing = Some(Timing {
                    wall_seconds: start.elapsed().as_secs_f64(),
                });
            }
            println!("{}", out.report.to_json_pretty());
            for line in &out.summary {
                eprintln!("{line}");
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
