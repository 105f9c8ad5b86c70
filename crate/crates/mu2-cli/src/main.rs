//! Command-line front end: enumeration and verification of the order-p^2
//! models over a configured discrete valuation ring, in deterministic JSON
//! or plain text.

use clap::{Args, Parser, Subcommand};
use mu2lab::breuil_kisin::{bk_enumerate, cross_check_counts, BkAmbient};
use mu2lab::classify::{enumerate_cell, iso_test, ModelRecord};
use mu2lab::dvr::{DvrRing, QuotientRing};
use mu2lab::error::Error;
use mu2lab::group_scheme::{build_model, ModelDescriptor};
use mu2lab::json;
use mu2lab::special_fiber::fiber_oracle_check;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mu2",
    about = "models of the order-p^2 multiplicative kernel over a d.v.r."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct RingArgs {
    /// residue characteristic p
    #[arg(long)]
    p: u64,
    /// equal characteristic: --char p; mixed characteristic: --char 0 or --mixed
    #[arg(long = "char")]
    char_case: Option<String>,
    /// mixed characteristic (same as --char 0)
    #[arg(long, default_value_t = false)]
    mixed: bool,
    /// residue field size for equal characteristic (a power of p)
    #[arg(long)]
    q: Option<u64>,
    /// ramification index (informational; implied by the Eisenstein file)
    #[arg(long)]
    e: Option<u32>,
    /// file with the Eisenstein coefficients, ascending, comma/line separated
    #[arg(long)]
    eisenstein: Option<PathBuf>,
    /// working precision exponent N
    #[arg(long)]
    precision: Option<u32>,
    /// seed recorded in the output (reserved for randomized self-checks)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// output format
    #[arg(long, default_value = "json")]
    format: String,
    /// worker threads for the enumeration
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// enumerate the isomorphism classes of order-p^2 models
    Enumerate {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 4)]
        mmax: u32,
        #[arg(long, default_value_t = 1)]
        nmax: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// build one model and print its Hopf presentation and axiom report
    Hopf {
        #[command(flatten)]
        ring: RingArgs,
        /// descriptor: inline `m=2 n=1 a=[0,1] j=1` or a JSON file path
        #[arg(long)]
        descriptor: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// decide whether two descriptors name isomorphic models
    Iso {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        d1: String,
        #[arg(long)]
        d2: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// classify the special fiber of one model
    Fiber {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        descriptor: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// enumerate the semilinear-algebra triples over k[[u]]
    Bk {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// compare the two classifications cell by cell
    Crosscheck {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InsufficientPrecision(_) => 3,
        Error::BadConfig(_) | Error::ConfigMismatch(_) | Error::Unsupported(_) => 2,
        _ => 2,
    }
}

fn read_eisenstein(path: &PathBuf) -> Result<Vec<i64>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut out = Vec::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()) {
        let tok = tok.trim();
        if tok.is_empty() || tok.starts_with('#') {
            continue;
        }
        out.push(
            tok.parse::<i64>()
                .map_err(|e| format!("bad coefficient {tok}: {e}"))?,
        );
    }
    Ok(out)
}

struct Ring {
    dvr: DvrRing,
    eis: Option<Vec<i64>>,
    seed: u64,
}

fn build_ring(args: &RingArgs, depth_hint: u32) -> Result<Ring, String> {
    let equal = match (&args.char_case, args.mixed) {
        (Some(c), false) if c == "p" => true,
        (Some(c), _) if c == "0" => false,
        (None, true) => false,
        (None, false) => return Err("specify --char p, --char 0 or --mixed".into()),
        (Some(c), true) if c == "p" => return Err("--char p conflicts with --mixed".into()),
        (Some(c), _) => return Err(format!("unknown --char value {c}")),
    };
    if equal {
        let q = args.q.unwrap_or(args.p);
        let mut f = 0u32;
        let mut qq = q;
        while qq > 1 && qq.is_multiple_of(args.p) {
            qq /= args.p;
            f += 1;
        }
        if qq != 1 || f == 0 {
            return Err(format!("q={q} is not a power of p={}", args.p));
        }
        let prec = args.precision.unwrap_or(depth_hint.max(12));
        let dvr = DvrRing::equal(args.p, f, prec).map_err(|e| e.to_string())?;
        Ok(Ring {
            dvr,
            eis: None,
            seed: args.seed,
        })
    } else {
        let path = args
            .eisenstein
            .as_ref()
            .ok_or_else(|| "mixed characteristic needs --eisenstein FILE".to_string())?;
        let eis = read_eisenstein(path)?;
        let e = (eis.len() - 1).max(1) as u32;
        if let Some(expected) = args.e {
            if expected != e {
                return Err(format!(
                    "--e {expected} does not match polynomial degree {e}"
                ));
            }
        }
        let prec = args
            .precision
            .unwrap_or_else(|| (3 * e + depth_hint).div_ceil(e).max(6));
        let dvr = DvrRing::mixed(args.p, prec, &eis).map_err(|e| e.to_string())?;
        Ok(Ring {
            dvr,
            eis: Some(eis),
            seed: args.seed,
        })
    }
}

#[derive(serde::Deserialize)]
struct DescriptorInput {
    m: u32,
    n: u32,
    a: Vec<u8>,
    j: u64,
}

fn parse_descriptor(dvr: &DvrRing, text: &str) -> Result<ModelDescriptor, String> {
    let input: DescriptorInput = if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| format!("descriptor JSON: {e}"))?
    } else if std::path::Path::new(text).exists() {
        let body = std::fs::read_to_string(text).map_err(|e| e.to_string())?;
        serde_json::from_str(&body).map_err(|e| format!("descriptor JSON: {e}"))?
    } else {
        // inline grammar: m=2 n=1 a=[0,1] j=1
        let mut m = None;
        let mut n = None;
        let mut a: Option<Vec<u8>> = None;
        let mut j = None;
        for tok in text.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| format!("bad token {tok}"))?;
            match k {
                "m" => m = Some(v.parse().map_err(|e| format!("m: {e}"))?),
                "n" => n = Some(v.parse().map_err(|e| format!("n: {e}"))?),
                "j" => j = Some(v.parse().map_err(|e| format!("j: {e}"))?),
                "a" => {
                    let inner = v.trim_start_matches('[').trim_end_matches(']');
                    let digits: Result<Vec<u8>, _> = inner
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.trim().parse::<u8>())
                        .collect();
                    a = Some(digits.map_err(|e| format!("a: {e}"))?);
                }
                other => return Err(format!("unknown descriptor key {other}")),
            }
        }
        DescriptorInput {
            m: m.ok_or("missing m")?,
            n: n.ok_or("missing n")?,
            a: a.unwrap_or_default(),
            j: j.ok_or("missing j")?,
        }
    };
    let q = QuotientRing::by_pi_power(dvr, input.n).map_err(|e| e.to_string())?;
    let mut digits = input.a;
    digits.resize(input.n as usize, 0);
    let a = mu2lab::dvr::Residue { digits };
    let f_bar = if q.is_zero_ring() {
        vec![q.one()]
    } else {
        let mu_bar = q.reduce(&dvr.pi_pow(input.m)).map_err(|e| e.to_string())?;
        mu2lab::artin_hasse::ep_closed_form(&q, &a, &mu_bar)
    };
    Ok(ModelDescriptor {
        mu: dvr.pi_pow(input.m),
        lam: dvr.pi_pow(input.n),
        f_bar,
        f_lift: None,
        j: input.j,
    })
}

fn emit(out: &OutArgs, body: String) -> Result<(), String> {
    match &out.out {
        Some(path) => std::fs::write(path, body).map_err(|e| e.to_string()),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn enumerate_parallel(
    dvr: &DvrRing,
    m_max: u32,
    n_max: u32,
    workers: usize,
) -> mu2lab::Result<Vec<ModelRecord>> {
    let cells = mu2lab::classify::admissible_cells(dvr, m_max, n_max);
    let workers = workers.max(1).min(cells.len().max(1));
    let chunks: Vec<Vec<(u32, u32)>> = cells
        .chunks(cells.len().div_ceil(workers))
        .map(|c| c.to_vec())
        .collect();
    let mut per_cell: Vec<((u32, u32), Vec<ModelRecord>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                let dvr = dvr.clone();
                scope.spawn(move || {
                    chunk
                        .into_iter()
                        .map(|(m, n)| enumerate_cell(&dvr, m, n).map(|v| ((m, n), v)))
                        .collect::<mu2lab::Result<Vec<_>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect::<mu2lab::Result<Vec<_>>>()
            .map(|vv| vv.into_iter().flatten().collect())
    })?;
    // deterministic merge in cell order
    per_cell.sort_by_key(|((m, n), _)| (*n, *m));
    Ok(per_cell.into_iter().flat_map(|(_, v)| v).collect())
}

fn run() -> Result<ExitCode, (u8, String)> {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Enumerate {
            ring,
            mmax,
            nmax,
            out,
        } => {
            let r = build_ring(&ring, 2 * ring.p as u32 * (nmax + 1) + mmax + 8)
                .map_err(|m| (2u8, m))?;
            let models = enumerate_parallel(&r.dvr, mmax, nmax, out.workers)
                .map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let config = json::config_doc(&r.dvr, r.eis.clone(), r.seed);
            let doc = json::enumerate_doc(&r.dvr, config, mmax, nmax, &models)
                .map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let body = match out.format.as_str() {
                "json" => json::render(&doc),
                "text" => {
                    let mut s = String::new();
                    s.push_str(&format!("classes: {}\n", doc.total));
                    for c in &doc.cells {
                        s.push_str(&format!("(m={}, n={}): {} class(es)\n", c.m, c.n, c.count));
                        for cl in &c.classes {
                            s.push_str(&format!("  a = {:?}, fiber = {:?}\n", cl.a, cl.fiber));
                        }
                    }
                    s
                }
                other => return Err((2, format!("unknown format {other}"))),
            };
            emit(&out, body).map_err(|m| (2u8, m))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Hopf {
            ring,
            descriptor,
            out,
        } => {
            let r = build_ring(&ring, 4 * ring.p as u32 + 12).map_err(|m| (2u8, m))?;
            let d = parse_descriptor(&r.dvr, &descriptor).map_err(|m| (2u8, m))?;
            let h = build_model(&r.dvr, &d).map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let report = h.verify();
            let ok = report.all_ok();
            let doc = json::HopfDoc {
                schema: json::SCHEMA,
                command: "hopf",
                config: json::config_doc(&r.dvr, r.eis.clone(), r.seed),
                descriptor: json::descriptor_doc(&r.dvr, &d),
                presentation: json::presentation_doc(&h),
                report,
            };
            emit(&out, json::render(&doc)).map_err(|m| (2u8, m))?;
            if ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(4))
            }
        }
        Cmd::Iso { ring, d1, d2, out } => {
            let r = build_ring(&ring, 4 * ring.p as u32 + 12).map_err(|m| (2u8, m))?;
            let da = parse_descriptor(&r.dvr, &d1).map_err(|m| (2u8, m))?;
            let db = parse_descriptor(&r.dvr, &d2).map_err(|m| (2u8, m))?;
            let isomorphic =
                iso_test(&r.dvr, &da, &db).map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let doc = json::IsoDoc {
                schema: json::SCHEMA,
                command: "iso",
                config: json::config_doc(&r.dvr, r.eis.clone(), r.seed),
                d1: json::descriptor_doc(&r.dvr, &da),
                d2: json::descriptor_doc(&r.dvr, &db),
                isomorphic,
            };
            emit(&out, json::render(&doc)).map_err(|m| (2u8, m))?;
            println!(
                "{}",
                if isomorphic {
                    "isomorphic"
                } else {
                    "not isomorphic"
                }
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Fiber {
            ring,
            descriptor,
            out,
        } => {
            let r = build_ring(&ring, 4 * ring.p as u32 + 12).map_err(|m| (2u8, m))?;
            let d = parse_descriptor(&r.dvr, &descriptor).map_err(|m| (2u8, m))?;
            let fm =
                fiber_oracle_check(&r.dvr, &d).map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let doc = json::FiberDoc {
                schema: json::SCHEMA,
                command: "fiber",
                config: json::config_doc(&r.dvr, r.eis.clone(), r.seed),
                descriptor: json::descriptor_doc(&r.dvr, &d),
                fiber: fm.class,
                shift: fm.shift,
            };
            emit(&out, json::render(&doc)).map_err(|m| (2u8, m))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bk { ring, out } => {
            let r = build_ring(&ring, 12).map_err(|m| (2u8, m))?;
            let amb =
                BkAmbient::from_ring(&r.dvr).map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let triples = bk_enumerate(&amb).map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let doc = json::bk_doc(
                &amb,
                json::config_doc(&r.dvr, r.eis.clone(), r.seed),
                &triples,
            );
            emit(&out, json::render(&doc)).map_err(|m| (2u8, m))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Crosscheck { ring, out } => {
            let r = build_ring(&ring, 12).map_err(|m| (2u8, m))?;
            let report =
                cross_check_counts(&r.dvr).map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let all = report.all_match;
            let doc = json::cross_doc(json::config_doc(&r.dvr, r.eis.clone(), r.seed), report);
            emit(&out, json::render(&doc)).map_err(|m| (2u8, m))?;
            println!(
                "{}",
                if all {
                    "counts agree"
                } else {
                    "counts disagree"
                }
            );
            if all {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err((code, msg)) => fail(code, &msg),
    }
}
