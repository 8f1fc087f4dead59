use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pfq::census::{run_census, CensusConfig, CensusError, Mode, DEFAULT_BUDGET};
use pfq::charsum::{appendix_a, appendix_b_reduced, f2_certificate, p3_certificate};
use pfq::classify::{classify_json, planar_verdict, verdict_for_label, ClassLabel, ClassifyError};
use pfq::field::{Tower, TowerSpec};
use pfq::geometry::{hurwitz_check, ram_report};
use pfq::oracle::{
    canonical_coeffs, check_epsilon, is_planar_bruteforce, make_family, CanonicalTag, FnTable,
};
use pfq::quad::{build_quad, check_identities, invariants_json, CoeffVec, QuadError};
use pfq::suite::{run_suite, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "pfq",
    version,
    about = "Planarity of quadrinomials over F_{q^2}"
)]
struct Cli {
    #[command(flatten)]
    field: FieldArgs,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Work budget for census runs.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long, global = true, conflicts_with = "field")]
    p: Option<u32>,
    #[arg(long, global = true, default_value_t = 1)]
    k: u32,
    #[arg(long, global = true, default_value_t = 1)]
    ell: u32,
    /// Tower description as JSON, inline or a file path.
    #[arg(long, global = true)]
    field: Option<String>,
}

#[derive(Args)]
struct CArg {
    /// Four comma-separated elements of F_{q^2}.
    #[arg(long, allow_hyphen_values = true)]
    c: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify one coefficient vector.
    Classify {
        #[command(flatten)]
        c: CArg,
        /// Include the linear-equivalence witness.
        #[arg(long)]
        witness: bool,
    },
    /// Planarity verdict for one coefficient vector.
    Planar {
        #[command(flatten)]
        c: CArg,
        #[arg(long, conflicts_with = "both")]
        oracle_only: bool,
        #[arg(long)]
        both: bool,
    },
    /// Invariant polynomials and identity checks.
    Invariants {
        #[command(flatten)]
        c: CArg,
    },
    /// Ramification data of g.
    Geometry {
        #[command(flatten)]
        c: CArg,
    },
    /// A canonical family member.
    Family {
        #[arg(long)]
        tag: CanonicalTag,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<String>,
        /// Also decide planarity, by rule and by brute force.
        #[arg(long)]
        planar: bool,
    },
    /// Classify many coefficient vectors and cross-check by brute force.
    Census {
        #[arg(long, conflicts_with = "exhaustive")]
        samples: Option<usize>,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 0.05)]
        cross_check: f64,
        /// CSV destination; the summary goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suites.
    Verify {
        /// Fields as p,k,ell triples.
        #[arg(long, num_args = 1..)]
        fields: Vec<String>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        brute_samples: usize,
        #[arg(long, hide = true)]
        inject_e4_fault: bool,
    },
    /// Character-sum certificates for the two non-planar families.
    Charsum {
        #[command(subcommand)]
        which: CharsumCmd,
    },
}

#[derive(Subcommand)]
enum CharsumCmd {
    AppendixA {
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
    },
    AppendixB {
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
        /// Any element outside F_q; defaults to u.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
    },
}

enum Fail {
    Usage(String),
    Check(String),
}

type Res = Result<(), Fail>;

fn usage(e: impl std::fmt::Display) -> Fail {
    Fail::Usage(e.to_string())
}

fn tower(f: &FieldArgs) -> Result<Tower, Fail> {
    if let Some(s) = &f.field {
        let text = if s.trim_start().starts_with('{') {
            s.clone()
        } else {
            std::fs::read_to_string(s).map_err(usage)?
        };
        let spec: TowerSpec = serde_json::from_str(&text).map_err(usage)?;
        return Tower::from_spec(&spec).map_err(usage);
    }
    let p =
        f.p.ok_or_else(|| usage("give --p (with --k, --ell) or --field"))?;
    Tower::new(p, f.k, f.ell, None).map_err(usage)
}

fn coeffs<'a>(t: &'a Tower, c: &CArg) -> Result<CoeffVec<'a>, Fail> {
    CoeffVec::parse(t, std::slice::from_ref(&c.c)).map_err(|e: QuadError| usage(e))
}

fn print(v: &Value) {
    // a closed pipe is not an error worth reporting
    let _ = writeln!(
        io::stdout(),
        "{}",
        serde_json::to_string_pretty(v).expect("json")
    );
}

fn classify_err(e: ClassifyError) -> Fail {
    match e {
        ClassifyError::AllZeroCoefficients => usage(e),
        _ => Fail::Check(e.to_string()),
    }
}

fn brute_json(t: &Tower, table: &FnTable) -> Value {
    let r = is_planar_bruteforce(t, table);
    json!({
        "planar": r.planar,
        "collision": r.witness.map(|w| json!({
            "a": t.format(w.a), "b": t.format(w.b), "x1": t.format(w.x1), "x2": t.format(w.x2),
        })),
    })
}

fn run(cli: Cli) -> Res {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(usage)?;
    }
    // verify builds its own fields
    if let Cmd::Verify {
        fields,
        samples,
        brute_samples,
        inject_e4_fault,
    } = &cli.cmd
    {
        return verify(fields, *samples, *brute_samples, *inject_e4_fault, cli.seed);
    }
    let t = tower(&cli.field)?;
    match &cli.cmd {
        Cmd::Classify { c, witness } => {
            let c = coeffs(&t, c)?;
            print(&classify_json(&c, *witness).map_err(classify_err)?);
            Ok(())
        }
        Cmd::Planar {
            c,
            oracle_only,
            both,
        } => {
            let c = coeffs(&t, c)?;
            let brute = (*oracle_only || *both).then(|| brute_json(&t, &FnTable::of_coeffs(&c)));
            let cls = if *oracle_only {
                None
            } else {
                Some(planar_verdict(&c).map_err(classify_err)?)
            };
            let mut out = json!({ "c": c.to_strings() });
            if let Some(v) = &cls {
                out["classifier"] =
                    json!({ "planar": v.planar, "rule": v.rule, "rule_text": v.rule.explain() });
            }
            if let Some(b) = &brute {
                out["brute"] = b.clone();
            }
            let agree = match (&cls, &brute) {
                (Some(v), Some(b)) => Some(b["planar"] == v.planar),
                _ => None,
            };
            if let Some(a) = agree {
                out["agree"] = json!(a);
            }
            print(&out);
            if agree == Some(false) {
                return Err(Fail::Check("classifier and brute force disagree".into()));
            }
            Ok(())
        }
        Cmd::Invariants { c } => {
            let c = coeffs(&t, c)?;
            print(&invariants_json(&c));
            if !check_identities(&c).all() {
                return Err(Fail::Check("identity check failed".into()));
            }
            Ok(())
        }
        Cmd::Geometry { c } => {
            let c = coeffs(&t, c)?;
            let rep = ram_report(&c).map_err(|e| Fail::Check(e.to_string()))?;
            let mut out = rep.to_json();
            let g = build_quad(&c).g;
            if let Ok(h) = hurwitz_check(&g) {
                out["hurwitz"] =
                    json!({ "lhs": h.lhs, "rhs": h.rhs, "tame": h.tame, "holds": h.holds });
            }
            print(&out);
            if !rep.checks.all() {
                return Err(Fail::Check("ramification checks failed".into()));
            }
            Ok(())
        }
        Cmd::Family {
            tag,
            epsilon,
            planar,
        } => family(&t, *tag, epsilon.as_deref(), *planar),
        Cmd::Census {
            samples,
            exhaustive,
            cross_check,
            out,
        } => {
            let mode = if *exhaustive {
                Mode::Exhaustive
            } else {
                Mode::Samples(samples.unwrap_or(1000))
            };
            let cfg = CensusConfig {
                mode,
                cross_check: *cross_check,
                seed: cli.seed,
                budget: cli.budget,
            };
            let (rows, summary) = run_census(&t, &cfg).map_err(|e: CensusError| usage(e))?;
            let sink: Box<dyn Write> = match out {
                Some(p) => Box::new(File::create(p).map_err(usage)?),
                None => Box::new(io::stdout().lock()),
            };
            let mut w = csv::Writer::from_writer(sink);
            for r in &rows {
                w.serialize(r).map_err(|e| Fail::Check(e.to_string()))?;
            }
            w.flush().map_err(|e| Fail::Check(e.to_string()))?;
            drop(w);
            let s = serde_json::to_string_pretty(&summary).expect("json");
            if out.is_some() {
                println!("{s}");
            } else {
                eprintln!("{s}");
            }
            if !summary.ok() {
                return Err(Fail::Check(format!(
                    "{} disagreements, {} errors",
                    summary.disagreements, summary.errors
                )));
            }
            Ok(())
        }
        Cmd::Charsum { which } => charsum(&t, which),
        Cmd::Verify { .. } => unreachable!("handled above"),
    }
}

fn family(t: &Tower, tag: CanonicalTag, eps: Option<&str>, planar: bool) -> Res {
    let eps = eps.map(|s| t.parse(s)).transpose().map_err(usage)?;
    check_epsilon(tag, eps).map_err(usage)?;
    let cv = canonical_coeffs(tag, eps, t).map_err(usage)?;
    let mut out = json!({
        "tag": tag.to_string(),
        "epsilon": eps.map(|e| e.to_string()),
        "c": cv.to_strings(),
    });
    if planar {
        let label = ClassLabel {
            tag: tag.into(),
            epsilon: eps,
        };
        let v = verdict_for_label(t, label);
        let table = make_family(tag, eps, t).map_err(usage)?;
        let b = brute_json(t, &table);
        let agree = b["planar"] == v.planar;
        out["verdict"] =
            json!({ "planar": v.planar, "rule": v.rule, "rule_text": v.rule.explain() });
        out["brute"] = b;
        out["agree"] = json!(agree);
        print(&out);
        if !agree {
            return Err(Fail::Check("rule and brute force disagree".into()));
        }
        return Ok(());
    }
    print(&out);
    Ok(())
}

fn charsum(t: &Tower, which: &CharsumCmd) -> Res {
    match which {
        CharsumCmd::AppendixA { epsilon } => {
            let e = t.parse(epsilon).map_err(usage)?;
            let rep = appendix_a(t, e).map_err(usage)?;
            let cert = p3_certificate(t, e).map_err(usage)?;
            let brute = brute_json(
                t,
                &make_family(CanonicalTag::P3, Some(e), t).map_err(usage)?,
            );
            let mut out = serde_json::to_value(&rep).expect("json");
            out["reduced_certificate"] =
                json!(cert.map(|(x, n)| json!({ "t": x.to_string(), "solutions": n })));
            out["brute"] = brute;
            print(&out);
            let ok = rep.identity_holds
                && rep.bound_holds
                && rep.positive
                && rep.weil_ok
                && cert.is_some();
            if !ok || out["brute"]["planar"] == true {
                return Err(Fail::Check("certificate routes disagree".into()));
            }
            Ok(())
        }
        CharsumCmd::AppendixB { epsilon, xi } => {
            let e = t.parse(epsilon).map_err(usage)?;
            let x = match xi {
                Some(s) => t.parse(s).map_err(usage)?,
                None => t.u(),
            };
            let (ell_used, rep) = appendix_b_reduced(t, e.index(), x.index()).map_err(usage)?;
            let cert = f2_certificate(t, e).map_err(usage)?;
            let brute = brute_json(
                t,
                &make_family(CanonicalTag::F2, Some(e), t).map_err(usage)?,
            );
            let mut out = serde_json::to_value(&rep).expect("json");
            out["ell_used"] = json!(ell_used);
            out["reduced_certificate"] =
                json!(cert.map(|(a, n)| json!({ "a": a.to_string(), "solutions": n })));
            out["brute"] = brute;
            print(&out);
            let ok = rep.identity_holds
                && rep.bound_holds
                && rep.positive
                && rep.weil_ok
                && cert.is_some();
            if !ok || out["brute"]["planar"] == true {
                return Err(Fail::Check("certificate routes disagree".into()));
            }
            Ok(())
        }
    }
}

fn verify(fields: &[String], samples: usize, brute_samples: usize, inject: bool, seed: u64) -> Res {
    let mut cfg = SuiteConfig {
        samples,
        brute_samples,
        seed,
        inject_e4_fault: inject,
        ..Default::default()
    };
    if !fields.is_empty() {
        cfg.fields = fields
            .iter()
            .map(|s| {
                let v: Vec<u32> = s
                    .split(',')
                    .map(|x| x.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(usage)?;
                match v[..] {
                    [p, k, ell] => Ok((p, k, ell)),
                    _ => Err(usage(format!("field '{s}' is not p,k,ell"))),
                }
            })
            .collect::<Result<_, _>>()?;
    }
    let lines = run_suite(&cfg).map_err(usage)?;
    let mut failed = Vec::new();
    for l in &lines {
        let (p, k, ell) = l.field;
        let status = if l.ok() { "PASS" } else { "FAIL" };
        println!(
            "{status} {p},{k},{ell} {} passed={} failed={} skipped={}",
            l.name, l.passed, l.failed, l.skipped
        );
        if let Some(f) = &l.first_failure {
            println!("    first failure: {f}");
            failed.push(l.name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Fail::Check(format!("failed: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Check(m)) => {
            eprintln!("failure: {m}");
            ExitCode::from(1)
        }
    }
}
