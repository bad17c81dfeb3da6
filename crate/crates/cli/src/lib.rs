//! Command-line front end: expression syntax, JSON documents and the `weyl`
//! subcommands.
//!
//! Exit codes: 0 when the computation completed (whatever the verdict), 1 for
//! usage, parse and document errors, 2 when an internal invariant of the
//! engine failed.

pub mod syntax;
pub mod wire;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use weyl_core::{
    ad_nilpotency_test, associated_poly, bispectral_partner, ccr_check, ccr_to_generators, choose_weights, decide,
    factor_form, random_orbit_element, verify_certificate, AdTestResult, CcrOutcome, CertSide, Certificate, Error,
    OrbitParams, TraceEvent, Verdict, WeylElement, DEFAULT_AD_CAP,
};

pub use syntax::{format_element, parse_expression};

#[derive(Parser, Debug)]
#[command(name = "weyl", version, about = "Strict nilpotency in the first Weyl algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide strict nilpotency and print a certificate or the rejection reason.
    Decide {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Print the full verdict document.
        #[arg(long)]
        json: bool,
    },
    /// Iterate ad_L on H until it vanishes, hits an eigen-relation or the cap.
    Ad {
        #[arg(allow_hyphen_values = true)]
        l: String,
        #[arg(allow_hyphen_values = true)]
        h: String,
        #[arg(long, default_value_t = DEFAULT_AD_CAP)]
        max_steps: u32,
    },
    /// Bispectral partner of a certified operator.
    Partner {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Check [L, P] = 1; with --generators, prove that L and P generate.
    Ccr {
        #[arg(allow_hyphen_values = true)]
        l: String,
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        generators: bool,
    },
    /// Newton-polygon data of the operator divided by its leading coefficient.
    Polygon {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Apply an automorphism word read from a JSON file.
    Apply {
        #[arg(long)]
        word: PathBuf,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Seeded random element of a known orbit, with its certificate.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        word_len: usize,
        #[arg(long, default_value_t = 4)]
        max_deg: u32,
        #[arg(long, default_value_t = 3)]
        max_q_deg: u32,
        /// Resample until the order is at most this bound.
        #[arg(long)]
        max_order: Option<u32>,
    },
    /// Check a certificate (or decide --json output) against an expression.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn failure(err: &CliError) -> Self {
        let code = match err {
            CliError::Engine(e) if e.is_internal() => 2,
            _ => 1,
        };
        Outcome { code, stdout: String::new(), stderr: format!("error: {err}\n") }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs `weyl` with `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match execute(cli.command) {
        Ok(out) => Outcome::ok(out),
        Err(e) => Outcome::failure(&e),
    }
}

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serialisable") + "\n"
}

fn execute(cmd: Command) -> CliResult<String> {
    let mut out = String::new();
    match cmd {
        Command::Decide { expr, json } => {
            let l = parse_expression(&expr)?;
            let verdict = decide(&l)?;
            if json {
                return Ok(pretty(&wire::verdict_to_json(&l, &verdict)));
            }
            describe_verdict(&mut out, &verdict);
        }
        Command::Ad { l, h, max_steps } => {
            let l = parse_expression(&l)?;
            let h = parse_expression(&h)?;
            let line = match ad_nilpotency_test(&l, &h, max_steps)? {
                AdTestResult::NilpotentAt(s) => format!("NilpotentAt {s}"),
                AdTestResult::EigenObstruction(c) => format!("EigenObstruction {c}"),
                AdTestResult::BoundExhausted { cap, last_weight } => {
                    format!("BoundExhausted after {cap} steps (last total degree {last_weight})")
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        Command::Partner { expr } => {
            let l = parse_expression(&expr)?;
            let p = bispectral_partner(&l)?;
            let _ = writeln!(out, "Lambda = {}", p.lambda_op);
            let _ = writeln!(out, "f(z) = {}", p.f_poly.display_in("z"));
            let _ = writeln!(out, "theta(x) = {}", p.theta);
        }
        Command::Ccr { l, p, generators } => {
            let l = parse_expression(&l)?;
            let p = parse_expression(&p)?;
            if !generators {
                let _ = writeln!(out, "[L, P] = 1: {}", ccr_check(&l, &p));
                return Ok(out);
            }
            match ccr_to_generators(&l, &p)? {
                CcrOutcome::Witness(w) => {
                    out.push_str("generates: L = word(a*D + b), P = word(x/a + R(D))\n");
                    let _ = writeln!(out, "a = {}", w.a);
                    let _ = writeln!(out, "b = {}", w.b);
                    let _ = writeln!(out, "R(D) = {}", w.r_poly.display_in("D"));
                    let _ = writeln!(out, "word = {}", wire::word_to_json(&w.word));
                }
                CcrOutcome::CounterexampleCandidate(v) => {
                    out.push_str("COUNTEREXAMPLE CANDIDATE: L is not certified strictly nilpotent\n");
                    describe_verdict(&mut out, &v);
                }
            }
        }
        Command::Polygon { expr } => {
            let l = parse_expression(&expr)?;
            describe_polygon(&mut out, &l)?;
        }
        Command::Apply { word, expr } => {
            let w = wire::parse_word(&read(&word)?)?;
            let e = parse_expression(&expr)?;
            let _ = writeln!(out, "{}", w.apply(&e));
        }
        Command::Random { seed, word_len, max_deg, max_q_deg, max_order } => {
            let params = OrbitParams { word_len, max_deg, max_q_deg, trailing_fourier: true, max_order };
            let (l, cert) = random_orbit_element(seed, &params)?;
            let doc = serde_json::json!({
                "element": format_element(&l),
                "certificate": wire::certificate_to_json(&cert),
            });
            out.push_str(&pretty(&doc));
        }
        Command::Verify { cert, expr } => {
            let c = wire::parse_certificate(&read(&cert)?)?;
            let l = parse_expression(&expr)?;
            let ok = verify_certificate(&l, &c);
            let _ = writeln!(out, "certificate {}", if ok { "verified" } else { "REJECTED" });
        }
    }
    Ok(out)
}

fn describe_certificate(out: &mut String, c: &Certificate) {
    let var = match c.side {
        CertSide::X => "x",
        CertSide::D => "D",
    };
    let _ = writeln!(out, "Q({var}) = {}", c.gen_poly.display_in(var));
    let _ = writeln!(out, "word = {}", c.word);
    let _ = writeln!(out, "certificate = {}", wire::certificate_to_json(c));
}

fn describe_verdict(out: &mut String, v: &Verdict) {
    let _ = writeln!(out, "verdict: {}", v.label());
    for event in v.trace() {
        match event {
            TraceEvent::FourierSwap => out.push_str("  Fourier transform: leading coefficient in x is constant\n"),
            TraceEvent::Scaled { leading, order } => {
                let _ = writeln!(out, "  order {order}, leading coefficient {leading}");
            }
            TraceEvent::Normalized { generator } => {
                let _ = writeln!(out, "  normalise subleading term: {generator}");
            }
            TraceEvent::Stage(s) => {
                let _ = write!(out, "  stage {}: order {}, weight {}, f = {}", s.stage, s.order, s.weight, s.assoc);
                match (&s.factored, s.new_order) {
                    (Some(form), Some(k)) => {
                        let _ = writeln!(out, " = {form}, new order {k}");
                    }
                    _ => out.push('\n'),
                }
            }
            TraceEvent::Terminal { .. } => {}
        }
    }
    match v {
        Verdict::StrictlyNilpotent { certificate, .. } => describe_certificate(out, certificate),
        Verdict::NotStrictlyNilpotent { reason, stage, .. } => {
            let _ = writeln!(out, "reason: {reason}");
            let _ = writeln!(out, "stage: {stage}");
        }
        Verdict::TriviallyConstant => {}
    }
}

fn describe_polygon(out: &mut String, l: &WeylElement) -> CliResult<()> {
    let prof = l.profile();
    if prof.order < 1 {
        return Err(Error::Precondition("polygon needs an operator of order >= 1".into()).into());
    }
    if !prof.leading.is_constant() {
        return Err(Error::NotNormalizable.into());
    }
    let monic = l.scale(&prof.leading.coeff(0).recip());
    let (weight, anchor) = choose_weights(&monic)?;
    let nd = associated_poly(&monic, weight)?;
    let _ = writeln!(out, "order: {}", prof.order);
    let _ = writeln!(out, "weight: {weight}");
    let _ = writeln!(out, "anchor: ({}, {})", anchor.0, anchor.1);
    let _ = writeln!(out, "v: {}", nd.value);
    let _ = writeln!(out, "f: {}", nd.assoc);
    match factor_form(&nd, prof.order as u32) {
        Ok(form) => {
            let _ = writeln!(
                out,
                "factors: {form} (n = {}, r = {}, k = {}, lambda = {})",
                form.n, form.r, form.k, form.lambda
            );
        }
        Err(diag) => {
            let _ = writeln!(out, "not of the form (Y^r - lambda X)^k: {diag}");
        }
    }
    Ok(())
}
