//! Batch command-line interface.
//!
//! Exit codes: 0 positive verdict or artifact produced, 1 negative verdict,
//! 2 usage, I/O or parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::biform::{hermitian_rank, hermitian_signature, Signature};
use crate::error::Error;
use crate::exactla::{h_matrix, GqMatrix};
use crate::format::{
    from_json, matrix_from_dto, poly_to_dto, to_json, BiFormDto, DecompositionFile, MapDecompositionFile, PairFile,
};
use crate::gen::{self, GenConfig};
use crate::numcheck::{numeric_verify, DEFAULT_TOL};
use crate::pairs::{self, Kind, PolyMapPair};

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "hermrank", version, about = "Exact analysis of orthogonal pairs between generalized balls")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sample count for numcheck and restriction runs.
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,
    /// Relative residual tolerance for numcheck.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_sig(text: &str) -> std::result::Result<Signature, String> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let (r, s, t) = match parts[..] {
        [r, s] => (r, s, 0),
        [r, s, t] => (r, s, t),
        _ => return Err("expected `r,s` or `r,s,t`".into()),
    };
    Signature::new(r, s, t).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide orthogonality by exact divisibility.
    Verify { pair: PathBuf },
    /// Print the multiplier form.
    Multiplier { pair: PathBuf },
    /// Hermitian rank of a bigraded form.
    Rank { biform: PathBuf },
    /// Hermitian signature of a bigraded form, with square witnesses.
    Signature { biform: PathBuf },
    /// Null, quasi-standard or other.
    Classify { pair: PathBuf },
    /// Certified quasi-standard decomposition of a pair.
    Decompose { pair: PathBuf },
    /// Certified decomposition of a single map (uses phi).
    DecomposeMap { pair: PathBuf },
    /// Homogenize an affine pair; the source gains one null direction.
    Homogenize { pair: PathBuf },
    /// Restrict a pair to a subspace given as a matrix file or drawn at random.
    Restrict {
        pair: PathBuf,
        /// Basis matrix whose Gram matrix is diagonal +1…, −1…, 0….
        #[arg(long)]
        subspace: Option<PathBuf>,
        /// Signature `a,b` of the random subspace (default: source r,s).
        #[arg(long, value_parser = parse_sig)]
        dims: Option<Signature>,
    },
    /// Generate a quasi-standard pair with witness, or a null pair.
    Gen {
        /// Source signature `r,s` or `r,s,t`.
        #[arg(long, value_parser = parse_sig)]
        source: Signature,
        /// Null part dimension; the target is (r+s+q, 0, 0).
        #[arg(long, default_value_t = 0)]
        q: usize,
        /// Generate a null pair into `--target` instead.
        #[arg(long)]
        null: bool,
        #[arg(long, value_parser = parse_sig)]
        target: Option<Signature>,
        /// Bound on component degrees.
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
        /// Bound on real and imaginary parts of random coefficients.
        #[arg(long, default_value_t = 3)]
        height: i64,
    },
    /// The generalized Whitney pair for (r, s).
    Whitney { r: usize, s: usize },
    /// Randomized check that generated pairs are never classified Other.
    Fuzz {
        /// Source signature `r,s`.
        #[arg(long, value_parser = parse_sig)]
        source: Signature,
        /// Target dimension n'.
        #[arg(long)]
        target_dim: usize,
        /// Number of generated pairs.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
    },
    /// Floating-point orthogonality check on sampled incidence points.
    Numcheck { pair: PathBuf },
}

/// Result of one command before rendering.
struct Outcome {
    code: i32,
    json: Value,
    text: String,
}

impl Outcome {
    fn ok(json: Value, text: impl Into<String>) -> Self {
        Outcome { code: EXIT_POSITIVE, json, text: text.into() }
    }

    fn verdict(positive: bool, json: Value, text: impl Into<String>) -> Self {
        Outcome { code: if positive { EXIT_POSITIVE } else { EXIT_NEGATIVE }, json, text: text.into() }
    }

    fn negative(e: &Error) -> Self {
        Outcome {
            code: EXIT_NEGATIVE,
            json: json!({"error": e.reason(), "message": e.to_string()}),
            text: format!("{}: {e}", e.reason()),
        }
    }

    fn usage(msg: String) -> Self {
        Outcome { code: EXIT_USAGE, json: json!({"error": "ParseError", "message": msg.clone()}), text: msg }
    }
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))
}

fn input_error(path: &Path, e: Error) -> Outcome {
    Outcome::usage(format!("{}: {e}", path.display()))
}

fn load_pair_file(path: &Path) -> Result<PairFile, Outcome> {
    from_json(&read(path)?).map_err(|e| input_error(path, e))
}

fn load_pair(path: &Path) -> Result<PolyMapPair, Outcome> {
    load_pair_file(path)?.to_pair().map_err(|e| input_error(path, e))
}

fn load_biform(path: &Path) -> Result<crate::biform::BiForm, Outcome> {
    from_json::<BiFormDto>(&read(path)?).and_then(|d| d.parse()).map_err(|e| input_error(path, e))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("DTOs always serialize")
}

fn pair_value(p: &PolyMapPair) -> Value {
    to_value(&PairFile::from(p))
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Null => "Null",
        Kind::QuasiStandard => "QuasiStandard",
        Kind::Other => "Other",
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the result to `out`; diagnostics go to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_POSITIVE };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let outcome = execute(&cli).unwrap_or_else(|o| o);
    let rendered = match cli.emit {
        Emit::Json => serde_json::to_string(&outcome.json).expect("json values serialize"),
        Emit::Text => outcome.text,
    };
    let sink: &mut dyn Write = if outcome.code == EXIT_USAGE { err } else { out };
    let _ = writeln!(sink, "{rendered}");
    outcome.code
}

fn execute(cli: &Cli) -> Result<Outcome, Outcome> {
    Ok(match &cli.command {
        Command::Verify { pair } => {
            let v = pairs::verify_pair(&load_pair(pair)?);
            let text = if v { "orthogonal pair" } else { "not an orthogonal pair" };
            Outcome::verdict(v, json!({"orthogonal": v}), text)
        }
        Command::Multiplier { pair } => match pairs::multiplier(&load_pair(pair)?) {
            Ok(m) => Outcome::ok(to_value(&BiFormDto::from(&m)), format!("{m:?}")),
            Err(e) => Outcome::negative(&e),
        },
        Command::Rank { biform } => {
            let r = hermitian_rank(&load_biform(biform)?);
            Outcome::ok(json!({"rank": r}), format!("rank {r}"))
        }
        Command::Signature { biform } => match hermitian_signature(&load_biform(biform)?) {
            Ok(s) => {
                let squares = |ts: &[crate::biform::SquareTerm]| -> Value {
                    ts.iter()
                        .map(|t| {
                            json!({"weight": crate::exactnum::format_rational(&t.weight), "poly": poly_to_dto(&t.poly)})
                        })
                        .collect()
                };
                Outcome::ok(
                    json!({"p": s.p, "q": s.q, "positive": squares(&s.positive), "negative": squares(&s.negative)}),
                    format!("signature ({}, {})", s.p, s.q),
                )
            }
            Err(e) => Outcome::negative(&e),
        },
        Command::Classify { pair } => match pairs::classify(&load_pair(pair)?) {
            Ok(c) => Outcome::ok(
                json!({"kind": kind_name(c.kind), "rank": c.rank}),
                format!("{} (rank {})", kind_name(c.kind), c.rank),
            ),
            Err(e) => Outcome::negative(&e),
        },
        Command::Decompose { pair } => match pairs::decompose(&load_pair(pair)?) {
            Ok(d) => {
                let file = DecompositionFile::from(&d);
                let text = to_json(&file);
                Outcome::ok(to_value(&file), text)
            }
            Err(e) => Outcome::negative(&e),
        },
        Command::DecomposeMap { pair } => {
            let p = load_pair(pair)?;
            match pairs::decompose_map(p.phi(), p.source(), p.target()) {
                Ok(d) => {
                    let file = MapDecompositionFile::from(&d);
                    let text = to_json(&file);
                    Outcome::ok(to_value(&file), text)
                }
                Err(e) => Outcome::negative(&e),
            }
        }
        Command::Homogenize { pair } => {
            let p = load_pair_file(pair)?.to_homogenized_pair().map_err(|e| input_error(pair, e))?;
            Outcome::ok(pair_value(&p), to_json(&PairFile::from(&p)))
        }
        Command::Restrict { pair, subspace, dims } => {
            let p = load_pair(pair)?;
            restrict(&p, subspace.as_deref(), *dims, cli.seed)?
        }
        Command::Gen { source, q, null, target, max_degree, height } => {
            let tgt = match (null, target) {
                (_, Some(t)) => *t,
                (false, None) => Signature { r: source.rank() + q, s: 0, t: 0 },
                (true, None) => return Err(Outcome::usage("--null requires --target".into())),
            };
            let cfg = GenConfig { seed: cli.seed, source: *source, target: tgt, max_degree: *max_degree, height: *height };
            let generated = if *null {
                gen::null_pair(&cfg).map(|p| json!({"pair": pair_value(&p)}))
            } else {
                gen::quasi_standard(&cfg, *q)
                    .map(|(p, w)| json!({"pair": pair_value(&p), "witness": to_value(&DecompositionFile::from(&w))}))
            };
            match generated {
                Ok(v) => {
                    let text = serde_json::to_string_pretty(&v).expect("json values serialize");
                    Outcome::ok(v, text)
                }
                Err(e @ Error::InvalidSignature(_)) => return Err(Outcome::usage(e.to_string())),
                Err(e) => Outcome::negative(&e),
            }
        }
        Command::Whitney { r, s } => match gen::whitney(*r, *s) {
            Ok(p) => Outcome::ok(pair_value(&p), to_json(&PairFile::from(&p))),
            Err(e) => return Err(Outcome::usage(e.to_string())),
        },
        Command::Fuzz { source, target_dim, count, max_degree } => {
            fuzz(*source, *target_dim, *count, *max_degree, cli.seed)?
        }
        Command::Numcheck { pair } => {
            let p = load_pair(pair)?;
            match numeric_verify(&p, cli.trials, cli.tol, cli.seed) {
                Ok(rep) => Outcome::verdict(
                    rep.failures == 0,
                    to_value(&rep),
                    format!(
                        "{} failures in {} trials, max relative residual {:.3e}",
                        rep.failures, rep.trials, rep.max_relative_residual
                    ),
                ),
                Err(e) => Outcome::negative(&e),
            }
        }
    })
}

/// Signature `(a, b, c)` when `gram = H_{a,b,c}` exactly.
fn diagonal_signature(gram: &GqMatrix) -> Option<Signature> {
    let n = gram.rows();
    let count = |v: i64, from: usize| (from..n).take_while(|&i| gram[(i, i)] == crate::exactnum::Gq::from_int(v)).count();
    let a = count(1, 0);
    let b = count(-1, a);
    let c = count(0, a + b);
    (a + b + c == n && *gram == h_matrix(a, b, c)).then_some(Signature { r: a, s: b, t: c })
}

fn restrict(p: &PolyMapPair, subspace: Option<&Path>, dims: Option<Signature>, seed: u64) -> Result<Outcome, Outcome> {
    let src = p.source();
    let s = match subspace {
        Some(path) => {
            let text = read(path)?;
            from_json(&text).and_then(|m| matrix_from_dto(&m)).map_err(|e| input_error(path, e))?
        }
        None => {
            let d = dims.unwrap_or(Signature { r: src.r, s: src.s, t: 0 });
            gen::random_subspace(src, d.r, d.s, seed).map_err(|e| Outcome::usage(e.to_string()))?
        }
    };
    if s.rows() != src.dim() || s.cols() == 0 {
        return Err(Outcome::usage(format!("subspace must have {} rows and at least one column", src.dim())));
    }
    let gram = &(&s.adjoint() * &h_matrix(src.r, src.s, src.t)) * &s;
    let Some(sub) = diagonal_signature(&gram) else {
        return Ok(Outcome::negative(&Error::ShapeMismatch("subspace Gram matrix is not of the form H_{a,b,c}".into())));
    };
    match p.restrict(&s, sub) {
        Ok(r) => Ok(Outcome::ok(json!({"pair": pair_value(&r), "seed": seed}), to_json(&PairFile::from(&r)))),
        Err(e) => Ok(Outcome::negative(&e)),
    }
}

fn fuzz(source: Signature, target_dim: usize, count: usize, max_degree: u32, seed: u64) -> Result<Outcome, Outcome> {
    let m = source.rank();
    if target_dim < m || m == 0 {
        return Err(Outcome::usage(format!("need 1 ≤ r+s ≤ n', got r+s = {m}, n' = {target_dim}")));
    }
    let in_range = target_dim + 3 <= 2 * m;
    let target = Signature { r: target_dim, s: 0, t: 0 };
    let q = target_dim - m;
    let (mut null, mut qs, mut other, mut boundary_other, mut failures) = (0usize, 0usize, 0usize, 0usize, 0usize);
    let mut first: Option<Value> = None;
    let mut fail = |pair: &PolyMapPair, why: &str, first: &mut Option<Value>| {
        failures += 1;
        if first.is_none() {
            *first = Some(json!({"reason": why, "pair": pair_value(pair)}));
        }
    };
    for i in 0..count {
        let cfg = GenConfig { seed: gen::derive_seed(seed, i as u64), source, target, max_degree, height: 3 };
        let pair = if i % 4 == 3 && target_dim >= 2 {
            gen::null_pair(&cfg)
        } else {
            gen::quasi_standard(&cfg, q).map(|(p, _)| p)
        };
        let pair = match pair {
            Ok(p) => p,
            Err(e) => return Ok(Outcome::negative(&e)),
        };
        match pairs::classify(&pair) {
            Ok(c) => match c.kind {
                Kind::Null => null += 1,
                Kind::QuasiStandard => {
                    qs += 1;
                    if !pairs::decompose(&pair).is_ok_and(|d| d.certify(&pair)) {
                        fail(&pair, "decomposition did not certify", &mut first);
                    }
                }
                Kind::Other => {
                    other += 1;
                    if in_range {
                        fail(&pair, "classified Other inside the hypothesis range", &mut first);
                    } else {
                        boundary_other += 1;
                    }
                }
            },
            Err(e) => fail(&pair, e.reason(), &mut first),
        }
    }
    // the sharpness example sits exactly at n' = 2(r+s) − 2
    let mut whitney_kind = Value::Null;
    if target_dim == 2 * m - 2 && source.r >= 1 && source.s >= 1 {
        if let Ok(w) = gen::whitney(source.r, source.s) {
            let w = w.with_null_vars(source.t);
            if let Ok(c) = pairs::classify(&w) {
                whitney_kind = json!(kind_name(c.kind));
                if c.kind == Kind::Other {
                    boundary_other += 1;
                }
            }
        }
    }
    let summary = json!({
        "count": count,
        "seed": seed,
        "in_hypothesis_range": in_range,
        "null": null,
        "quasi_standard": qs,
        "other": other,
        "boundary_whitney": whitney_kind,
        "expected_at_boundary": boundary_other,
        "failures": failures,
        "first_counterexample": first,
    });
    let text = format!(
        "{} pairs: {null} null, {qs} quasi-standard, {other} other; {boundary_other} expected at boundary; {failures} failures",
        count
    );
    Ok(Outcome::verdict(failures == 0, summary, text))
}
