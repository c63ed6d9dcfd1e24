use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use symfact::algebra::parse::parse_gaussian_at;
use symfact::algebra::{GaussianRational, Matrix, MultiPoly};
use symfact::bounds::{k_bounds, BoundInput};
use symfact::factor::{factor_elementary_7_with, random_chain, rng_from_seed, search_k_factor, NumericConfig, SearchStatus, SearchStrategy, Spectrum};
use symfact::fiber::{in_singular_set, jacobian_phi, reduce_fiber, verify_reduction};
use symfact::io::{format_elementary_chain, format_factor_chain, format_matrix, parse_chain, parse_matrix, to_gaussian, ChainDocument, Ring};
use symfact::symplectic::{is_symplectic, phi, psi, ElementaryChain, FormKind};
use symfact::Error;

#[derive(Parser)]
#[command(name = "symfact", version, about = "Exact factorization of symplectic matrices into unitriangular factors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Std,
    Skew,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Matrix,
    Chain,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether a matrix is symplectic for the chosen form.
    Verify {
        #[arg(long, value_enum, default_value = "std")]
        form: Form,
        /// Matrix file; standard input when omitted.
        input: Option<PathBuf>,
    },
    /// Materialize a one-factor elementary chain as a matrix.
    MakeElementary { input: Option<PathBuf> },
    /// Seven standard factors of a one-factor elementary chain.
    Factor7 {
        /// Distinct nonzero diagonal entries, space separated (default 1..n).
        #[arg(long)]
        spectrum: Option<String>,
        input: Option<PathBuf>,
    },
    /// Check that a chain multiplies out to a target.
    VerifyProduct {
        /// Target: a matrix file or a chain file.
        #[arg(long)]
        target: PathBuf,
        input: Option<PathBuf>,
    },
    /// Look for a factorization into k alternating standard factors.
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "exact")]
        strategy: Strategy,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        /// Required for the numeric strategy.
        #[arg(long)]
        seed: Option<u64>,
        input: Option<PathBuf>,
    },
    /// Ordered product of a chain.
    Psi { input: Option<PathBuf> },
    /// Last row of the ordered product of an elementary chain.
    Phi { input: Option<PathBuf> },
    /// Membership of an elementary chain in the singular set.
    Singular { input: Option<PathBuf> },
    /// Exact Jacobian of the last-row map at a chain, with its rank.
    Jacobian { input: Option<PathBuf> },
    /// Reduce the fiber over a target vector to one equation.
    Reduce {
        /// 2n scalars, separated by spaces or commas.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        k: usize,
    },
    /// Check a fiber reduction on random points.
    VerifyReduce {
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Lower and upper bounds on the number of unitriangular factors.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        ktilde: Option<usize>,
        #[arg(long)]
        kcont2: Option<usize>,
    },
    /// Random elementary chain, or its product.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "gaussian", value_parser = parse_ring)]
        ring: Ring,
        #[arg(long, value_enum, default_value = "matrix")]
        output: Output,
    },
}

fn parse_ring(s: &str) -> Result<Ring, String> {
    if s == "gaussian" {
        return Ok(Ring::Gaussian);
    }
    s.strip_prefix("poly:")
        .and_then(|m| m.parse().ok())
        .map(Ring::Poly)
        .ok_or_else(|| format!("expected 'gaussian' or 'poly:<m>', got '{}'", s))
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidArgument(_) | Error::DimensionMismatch(_) => Failure::Usage(e.to_string()),
            other => Failure::Verification(other.to_string()),
        }
    }
}

type CliResult = Result<bool, Failure>;

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {}", p.display(), e))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {}", e)))?;
            Ok(s)
        }
    }
}

fn read_elementary(path: &Option<PathBuf>) -> Result<ElementaryChain<MultiPoly>, Failure> {
    match parse_chain(&read_input(path)?)? {
        ChainDocument::Elementary(c) => Ok(c),
        ChainDocument::Factors(_) => Err(Failure::Usage("expected 'factor minus|plus' blocks".into())),
    }
}

fn gaussian_chain(c: &ElementaryChain<MultiPoly>) -> Result<ElementaryChain<GaussianRational>, Failure> {
    Ok(c.try_map(|p| p.constant_value().ok_or(Error::PolynomialEntries))?)
}

fn chain_ring(c: &ElementaryChain<MultiPoly>) -> Ring {
    Ring::of(c.factors().iter().flat_map(|e| e.a().entries().iter().chain(e.z().entries())))
}

fn product_of(doc: ChainDocument) -> Matrix<MultiPoly> {
    match doc {
        ChainDocument::Elementary(c) => psi(&c),
        ChainDocument::Factors(c) => c.product(),
    }
}

fn parse_vector(text: &str) -> Result<Vec<GaussianRational>, Failure> {
    let mut out = Vec::new();
    let mut column = 1;
    for piece in text.split(|c: char| c == ',' || c.is_whitespace()) {
        if !piece.is_empty() {
            out.push(parse_gaussian_at(piece, 1, column).map_err(|e| Failure::Usage(format!("--target: {}", e)))?);
        }
        column += piece.chars().count() + 1;
    }
    if out.is_empty() || out.len() % 2 != 0 {
        return Err(Failure::Usage(format!("--target needs an even, nonzero number of entries, got {}", out.len())));
    }
    Ok(out)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Verify { form, input } => {
            let (m, _) = parse_matrix(&read_input(&input)?)?;
            let kind = match form {
                Form::Std => FormKind::Standard,
                Form::Skew => FormKind::SkewDiag,
            };
            let ok = is_symplectic(&m, kind)?;
            println!("symplectic: {}", ok);
            Ok(ok)
        }
        Command::MakeElementary { input } => {
            let c = read_elementary(&input)?;
            if c.len() != 1 {
                return Err(Failure::Usage(format!("expected exactly one factor, got {}", c.len())));
            }
            print!("{}", format_matrix(&c.factors()[0].materialize(), chain_ring(&c)));
            Ok(true)
        }
        Command::Factor7 { spectrum, input } => {
            let c = read_elementary(&input)?;
            if c.len() != 1 {
                return Err(Failure::Usage(format!("expected exactly one factor, got {}", c.len())));
            }
            let spec = match spectrum {
                Some(s) => Spectrum::new(parse_vector_any(&s)?)?,
                None => Spectrum::standard(c.n()),
            };
            let r = factor_elementary_7_with(&c.factors()[0], &spec)?;
            print!("{}", format_factor_chain(&r.chain));
            Ok(true)
        }
        Command::VerifyProduct { target, input } => {
            let product = product_of(parse_chain(&read_input(&input)?)?);
            let text = read_input(&Some(target))?;
            let expected = match parse_matrix(&text) {
                Ok((m, _)) => m,
                Err(matrix_err) => match parse_chain(&text) {
                    Ok(doc) => product_of(doc),
                    Err(_) => return Err(matrix_err.into()),
                },
            };
            let ok = product == expected;
            println!("product matches: {}", ok);
            Ok(ok)
        }
        Command::Search { k, strategy, restarts, seed, input } => {
            let (m, _) = parse_matrix(&read_input(&input)?)?;
            let target = to_gaussian(&m)?;
            let strategy = match strategy {
                Strategy::Exact => SearchStrategy::ExactElimination,
                Strategy::Numeric => {
                    let seed = seed.ok_or_else(|| Failure::Usage("--seed is required for --strategy numeric".into()))?;
                    SearchStrategy::NumericMultistart(NumericConfig::new(restarts, seed))
                }
            };
            let out = search_k_factor(&target, k, strategy)?;
            match out.status {
                SearchStatus::Found => {
                    println!("# status: found");
                    print!("{}", format_factor_chain(out.factors.as_ref().expect("found carries factors")));
                }
                SearchStatus::NotFoundEvidence => {
                    println!("status: not-found-evidence");
                    println!("note: {}", out.note);
                    if let Some(r) = out.residual {
                        println!("min_residual: {:.6e}", r.min_residual);
                        println!("restarts: {} requested per leading side, {} run", r.restarts, r.restarts_run);
                    }
                }
            }
            Ok(true)
        }
        Command::Psi { input } => {
            let doc = parse_chain(&read_input(&input)?)?;
            let p = product_of(doc);
            let ring = Ring::of(p.entries());
            print!("{}", format_matrix(&p, ring));
            Ok(true)
        }
        Command::Phi { input } => {
            let c = read_elementary(&input)?;
            let row: Vec<String> = phi(&c).to_vec().iter().map(|v| v.to_string()).collect();
            println!("{}", row.join(" "));
            Ok(true)
        }
        Command::Singular { input } => {
            let c = read_elementary(&input)?;
            if c.len() < 2 {
                return Err(Failure::Usage("the singular set is defined for K >= 2".into()));
            }
            println!("singular: {}", in_singular_set(&c));
            Ok(true)
        }
        Command::Jacobian { input } => {
            let c = gaussian_chain(&read_elementary(&input)?)?;
            let j = jacobian_phi(&c)?;
            print!("{}", format_matrix(&j, Ring::Gaussian));
            println!("# rank {}", j.exact_rank());
            Ok(true)
        }
        Command::Reduce { target, k } => {
            let t = parse_vector(&target)?;
            let plan = reduce_fiber(&t, k, t.len() / 2)?;
            println!("{}", plan);
            Ok(true)
        }
        Command::VerifyReduce { target, k, trials, seed } => {
            let t = parse_vector(&target)?;
            let plan = reduce_fiber(&t, k, t.len() / 2)?;
            let report = verify_reduction(&plan, trials, seed)?;
            println!("{}", report);
            Ok(report.all_passed())
        }
        Command::Bounds { n, d, ktilde, kcont2 } => {
            let r = k_bounds(&BoundInput { n, d, known_ktilde: ktilde, known_kcont: kcont2 })?;
            println!("{}", r);
            Ok(true)
        }
        Command::Gen { n, k, seed, ring, output } => {
            if n == 0 {
                return Err(Failure::Usage("--n must be positive".into()));
            }
            let mut rng = rng_from_seed(seed);
            let chain = random_chain(&mut rng, n, k, ring);
            match output {
                Output::Chain => print!("{}", format_elementary_chain(&chain)),
                Output::Matrix => print!("{}", format_matrix(&psi(&chain), ring)),
            }
            Ok(true)
        }
    }
}

/// Whitespace or comma separated scalars, any count.
fn parse_vector_any(text: &str) -> Result<Vec<GaussianRational>, Failure> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| parse_gaussian_at(p, 1, 1).map_err(|e| Failure::Usage(format!("--spectrum: {}", e))))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
