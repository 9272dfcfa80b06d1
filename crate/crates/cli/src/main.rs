//! `regring`: command-line front end for exact rank-metric computations in
//! `M_n(K)`.
//!
//! Every command reads JSON files in the library's matrix, family or
//! certificate formats (`-` reads standard input) and writes JSON to standard
//! output or to `--out`. Exit codes: 0 on success, 1 on I/O or parse errors,
//! 2 on mathematical precondition failures and invalid certificates, 3 when a
//! randomized search exhausts its budget.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::Rational64;
use serde_json::{json, Value};

use regring::conjugacy::{
    conjugate_idempotents, conjugate_involutions, conjugate_nilpotents, split_involution,
    Involution, TwoNilpotent,
};
use regring::io::{
    parse_certificate, parse_family, parse_matrix, rational_to_string, scalar_to_json, to_pretty,
    write_certificate, DecompositionFile, FamilyFile, FieldSpec, MatrixFile,
};
use regring::lattice::{l_ann, r_ann};
use regring::matricial::{
    approx_special, approx_special_at_level, blow_up, matricialize, TowerElement,
};
use regring::width::{
    commutator_decompose, four_involutions, locally_special_decompose, verify_certificate,
    word_image, SearchBudget, Word, DEFAULT_COMMUTATOR_BUDGET, DEFAULT_INVOLUTION_BUDGET,
};
use regring::{Error, Field, Idempotent, LeftIdeal, Matrix, RightIdeal};

#[derive(Parser, Debug)]
#[command(
    name = "regring",
    version,
    about = "Exact rank-metric algebra in matrix rings over F_p and Q"
)]
struct Cli {
    /// Seed of every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Attempt budget of randomized searches (defaults depend on the search).
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Coefficient field (`Q`, `F5`, `5`); inputs must live over it.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank and normalized rank of a matrix.
    Rank { input: String },
    /// A quasi-inverse `b` with `aba = a` and `bab = b`.
    Quasiinv { input: String },
    /// Right and left annihilators of a matrix as canonical subspaces.
    Annihilate { input: String },
    /// Conjugator `g` with `g a g^{-1} = b` for two idempotents, two
    /// involutions or two square-zero matrices.
    Conjugate { a: String, b: String },
    /// Involutions `g, h` with `gh = u`.
    SplitInvolution { input: String },
    /// Decomposition of a matrix over `F_p` into full matrix blocks.
    Matricialize { input: String },
    /// Refines a matrix-unit family file by a factor.
    BlowUp {
        input: String,
        #[arg(long)]
        factor: usize,
    },
    /// Determinant-one approximation of a unit of side `2^k`.
    ApproxSpecial {
        input: String,
        /// Target distance bound, as `num/den`.
        #[arg(long, value_parser = parse_rational, conflicts_with = "level")]
        eps: Option<Rational64>,
        /// Explicit tower level of the approximant.
        #[arg(long)]
        level: Option<u32>,
    },
    /// Self-certifying factorizations.
    Decompose {
        #[command(subcommand)]
        kind: DecomposeKind,
    },
    /// Checks a certificate file.
    Verify { input: String },
    /// Image of a group word on `GL_n(F_p)`, by enumeration.
    WordImage {
        #[arg(long)]
        word: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum DecomposeKind {
    /// Four involutions with product the input (`det = ±1`).
    FourInvolutions { input: String },
    /// A single commutator equal to the input (`det = 1`).
    Commutator { input: String },
    /// Truncated locally-special product with an explicit residual.
    LocallySpecial {
        input: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
}

/// Failure of a command invocation.
enum Failure {
    Io(String),
    Lib(Error),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) | Failure::Lib(Error::Parse(_)) => 1,
            Failure::Lib(Error::BudgetExhausted { .. }) => 3,
            Failure::Lib(_) | Failure::Invalid(_) => 2,
        }
    }

    fn report(&self) -> Value {
        match self {
            Failure::Io(msg) => json!({"error": "Io", "message": msg}),
            Failure::Lib(e) => json!({"error": e.kind(), "message": e.to_string()}),
            Failure::Invalid(msg) => json!({"error": "InvalidCertificate", "message": msg}),
        }
    }
}

fn parse_field(text: &str) -> Result<Field, String> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(Field::Rationals);
    }
    let digits = t
        .trim_start_matches(['F', 'f'])
        .trim_start_matches(['_', 'p']);
    let p: u32 = digits
        .parse()
        .map_err(|_| format!("unknown field {text:?}"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

fn parse_rational(text: &str) -> Result<Rational64, String> {
    let bad = || format!("expected a rational num/den, got {text:?}");
    match text.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        None => text
            .trim()
            .parse::<i64>()
            .map(Rational64::from_integer)
            .map_err(|_| bad()),
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))
    }
}

struct Context {
    seed: u64,
    budget: Option<usize>,
    field: Option<Field>,
}

impl Context {
    fn matrix(&self, path: &str) -> Result<Matrix, Failure> {
        let m = parse_matrix(&read_input(path)?)?;
        if let Some(f) = self.field {
            if f != m.field() {
                return Err(Error::FieldMismatch(f.to_string(), m.field().to_string()).into());
            }
        }
        Ok(m)
    }

    fn search(&self, default: usize) -> Result<SearchBudget, Failure> {
        Ok(SearchBudget::new(
            self.budget.unwrap_or(default),
            self.seed,
        )?)
    }
}

fn right_ideal_json(i: &RightIdeal) -> Value {
    let basis = i.basis();
    let columns: Vec<Vec<Value>> = (0..basis.cols())
        .map(|c| basis.column(c).iter().map(scalar_to_json).collect())
        .collect();
    json!({"n": i.n(), "field": FieldSpec::of(i.field()), "dim": i.dim(), "basis": columns})
}

fn left_ideal_json(i: &LeftIdeal) -> Value {
    let basis = i.basis();
    let rows: Vec<Vec<Value>> = (0..basis.rows())
        .map(|r| basis.row(r).iter().map(scalar_to_json).collect())
        .collect();
    json!({"n": i.n(), "field": FieldSpec::of(i.field()), "dim": i.dim(), "basis": rows})
}

fn pretty(v: &Value) -> String {
    to_pretty(v)
}

fn conjugate(a: &Matrix, b: &Matrix) -> Result<Value, Failure> {
    a.check_compatible(b)?;
    let (kind, g) = if a.is_idempotent() && b.is_idempotent() {
        let e = Idempotent::new(a.clone())?;
        let f = Idempotent::new(b.clone())?;
        if e.rank() != f.rank() {
            return Err(Error::RankMismatch(e.rank(), f.rank()).into());
        }
        ("idempotent", conjugate_idempotents(&e, &f)?)
    } else if a.is_involution() && b.is_involution() {
        (
            "involution",
            conjugate_involutions(&Involution::new(a.clone())?, &Involution::new(b.clone())?)?,
        )
    } else if a.is_square_zero() && b.is_square_zero() {
        (
            "square-zero",
            conjugate_nilpotents(
                &TwoNilpotent::new(a.clone())?,
                &TwoNilpotent::new(b.clone())?,
            )?,
        )
    } else {
        return Err(Error::Precondition(
            "inputs must both be idempotents, involutions or square-zero matrices".into(),
        )
        .into());
    };
    debug_assert!(g.mul(a).mul(&g.inverse()?) == *b);
    Ok(json!({"kind": kind, "conjugator": MatrixFile::of(&g)}))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let ctx = Context {
        seed: cli.seed,
        budget: cli.budget,
        field: cli.field,
    };
    let out = match &cli.command {
        Command::Rank { input } => {
            let m = ctx.matrix(input)?;
            pretty(
                &json!({"rank": m.rank(), "normalized": rational_to_string(m.normalized_rank())}),
            )
        }
        Command::Quasiinv { input } => {
            to_pretty(&MatrixFile::of(&ctx.matrix(input)?.quasi_inverse()))
        }
        Command::Annihilate { input } => {
            let m = ctx.matrix(input)?;
            let right = r_ann(&m);
            pretty(&json!({
                "right": right_ideal_json(&right),
                "left": left_ideal_json(&l_ann(&m)),
                "right_delta": rational_to_string(right.delta()),
            }))
        }
        Command::Conjugate { a, b } => pretty(&conjugate(&ctx.matrix(a)?, &ctx.matrix(b)?)?),
        Command::SplitInvolution { input } => {
            let (g, h) = split_involution(&Involution::new(ctx.matrix(input)?)?)?;
            pretty(&json!({"g": MatrixFile::of(g.matrix()), "h": MatrixFile::of(h.matrix())}))
        }
        Command::Matricialize { input } => {
            to_pretty(&DecompositionFile::of(&matricialize(&ctx.matrix(input)?)?))
        }
        Command::BlowUp { input, factor } => {
            let fam = parse_family(&read_input(input)?)?;
            to_pretty(&FamilyFile::of(&blow_up(&fam, *factor)?))
        }
        Command::ApproxSpecial { input, eps, level } => {
            let x = TowerElement::new(ctx.matrix(input)?)?;
            let approx = match (eps, level) {
                (_, Some(k)) => approx_special_at_level(&x, *k)?,
                (Some(e), None) => approx_special(&x, *e)?,
                (None, None) => {
                    return Err(
                        Error::Precondition("approx-special needs --eps or --level".into()).into(),
                    )
                }
            };
            pretty(&json!({
                "level": approx.approximant.level(),
                "distance": rational_to_string(approx.distance),
                "approximant": MatrixFile::of(approx.approximant.matrix()),
            }))
        }
        Command::Decompose { kind } => {
            let cert = match kind {
                DecomposeKind::FourInvolutions { input } => four_involutions(
                    &ctx.matrix(input)?,
                    &mut ctx.search(DEFAULT_INVOLUTION_BUDGET)?,
                )?,
                DecomposeKind::Commutator { input } => commutator_decompose(
                    &ctx.matrix(input)?,
                    &mut ctx.search(DEFAULT_COMMUTATOR_BUDGET)?,
                )?,
                DecomposeKind::LocallySpecial { input, depth } => {
                    locally_special_decompose(&ctx.matrix(input)?, *depth)?
                }
            };
            write_certificate(&cert)
        }
        Command::Verify { input } => {
            let cert = parse_certificate(&read_input(input)?)?;
            let v = verify_certificate(&cert);
            if !v.valid {
                return Err(Failure::Invalid(v.reason.unwrap_or_default()));
            }
            pretty(&json!({"valid": true, "kind": cert.kind()}))
        }
        Command::WordImage { word, n } => {
            let field = ctx
                .field
                .ok_or_else(|| Error::Precondition("word-image needs --field".into()))?;
            let w = Word::parse(word)?;
            let image = word_image(&w, *n, field)?;
            pretty(&json!({
                "word": word,
                "n": n,
                "field": FieldSpec::of(field),
                "size": image.len(),
                "elements": image.iter().map(MatrixFile::of).collect::<Vec<_>>(),
            }))
        }
    };
    Ok(out)
}

fn emit(out: &Option<String>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) if path != "-" => {
            fs::write(path, text).map_err(|e| Failure::Io(format!("{path}: {e}")))
        }
        _ => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli).and_then(|text| emit(&cli.out, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Failure::Invalid(reason) = &f {
                let _ = emit(
                    &cli.out,
                    &pretty(&json!({"valid": false, "reason": reason})),
                );
            }
            eprintln!("{}", serde_json::to_string(&f.report()).expect("json"));
            ExitCode::from(f.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::Io("x".into()).exit_code(), 1);
        assert_eq!(Failure::Lib(Error::Parse("x".into())).exit_code(), 1);
        assert_eq!(
            Failure::Lib(Error::BudgetExhausted { attempts: 4 }).exit_code(),
            3
        );
        assert_eq!(
            Failure::Lib(Error::RankNotRepresentable("x".into())).exit_code(),
            2
        );
        assert_eq!(
            Failure::Lib(Error::EnumerationTooLarge("x".into())).exit_code(),
            2
        );
        assert_eq!(Failure::Invalid("x".into()).exit_code(), 2);
    }

    #[test]
    fn field_flags() {
        assert_eq!(parse_field("Q"), Ok(Field::Rationals));
        assert_eq!(parse_field("F5"), Ok(Field::Prime(5)));
        assert_eq!(parse_field("7"), Ok(Field::Prime(7)));
        assert_eq!(parse_field("F_3"), Ok(Field::Prime(3)));
        assert!(parse_field("F4").is_err());
        assert_eq!(parse_rational("1/4"), Ok(Rational64::new(1, 4)));
        assert!(parse_rational("1/0").is_err());
    }
}
