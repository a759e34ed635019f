//! `powerdiag` command line tool.
//!
//! Exit codes: 0 yes / verified, 1 no / not verified, 2 invalid input,
//! 3 internal error. Errors are printed to stderr as `{"error": "..."}`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use powerdiag::adjacency::{compute_adjacency_with_tolerance, AdjacencyError};
use powerdiag::detector::{detect_with, verify_certificate_with_tolerance, DetectError, DetectOptions};
use powerdiag::geometry::{
    forward_construct_pruned, forward_construct_with_tolerance, ForwardError, GeometryError,
};
use powerdiag::io::{
    AdjacencyDocument, Arithmetic, CertificateDocument, ComplexDocument, DomainDocument, IoError,
    NumberValue, SpecDocument, VerdictDocument,
};
use powerdiag::lp::LpError;
use powerdiag::random::{SiteRegion, SpecGenerator};
use powerdiag::scalar::{Rational, Scalar, Tolerance};
use powerdiag::{Domain, Verdict};

#[derive(Parser)]
#[command(name = "powerdiag", version, about = "Power diagram detection for polyhedral cell complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a complex is a power diagram and print a verdict.
    Detect {
        input: PathBuf,
        #[command(flatten)]
        num: NumericArgs,
        /// Domain document overriding the inline domain.
        #[arg(long)]
        domain: Option<PathBuf>,
        /// Include system size and pivot count.
        #[arg(long)]
        stats: bool,
        /// Write the verdict here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Build the complex of a power diagram (from a spec file or at random).
    Generate {
        /// Spec document with sites and gammas (or offsets).
        #[arg(long, conflicts_with_all = ["random", "seed"])]
        spec: Option<PathBuf>,
        /// Random spec: dimension and number of sites.
        #[arg(long, num_args = 2, value_names = ["D", "K"], required_unless_present = "spec")]
        random: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Print the adjacency index sets of a complex.
    Adjacency {
        input: PathBuf,
        #[command(flatten)]
        num: NumericArgs,
        #[arg(long)]
        domain: Option<PathBuf>,
        /// Evaluate in all of R^d, ignoring any domain.
        #[arg(long, conflicts_with = "domain")]
        ignore_domain: bool,
    },
    /// Check that a certificate reproduces a complex.
    Verify {
        complex: PathBuf,
        /// Certificate document, or a verdict document containing one.
        certificate: PathBuf,
        #[command(flatten)]
        num: NumericArgs,
        #[arg(long)]
        domain: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct NumericArgs {
    /// Exact rational arithmetic (default).
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Floating point arithmetic with a tolerance.
    #[arg(long)]
    float: bool,
    #[arg(long, default_value_t = Tolerance::DEFAULT.0)]
    tol: f64,
}

#[derive(Args)]
struct DomainArgs {
    /// Domain document.
    #[arg(long, conflicts_with_all = ["simplex", "unit_box"])]
    domain: Option<PathBuf>,
    /// Projected probability simplex in R^d.
    #[arg(long, conflicts_with = "unit_box")]
    simplex: bool,
    /// The box [0,1]^d.
    #[arg(long)]
    unit_box: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn internal(message: impl ToString) -> Self {
        Failure {
            code: 3,
            message: message.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::invalid(e)
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Lp(lp) => lp.into(),
            other => Failure::invalid(other),
        }
    }
}

impl From<LpError> for Failure {
    fn from(e: LpError) -> Self {
        match e {
            LpError::Malformed(_) => Failure::invalid(e),
            other => Failure::internal(other),
        }
    }
}

impl From<DetectError> for Failure {
    fn from(e: DetectError) -> Self {
        match e {
            DetectError::Lp(lp) => lp.into(),
            DetectError::Geometry(g) => g.into(),
            other => Failure::invalid(other),
        }
    }
}

impl From<AdjacencyError> for Failure {
    fn from(e: AdjacencyError) -> Self {
        match e {
            AdjacencyError::Lp(lp) => lp.into(),
            AdjacencyError::Geometry(g) => g.into(),
            other => Failure::invalid(other),
        }
    }
}

impl From<ForwardError> for Failure {
    fn from(e: ForwardError) -> Self {
        match e {
            ForwardError::Geometry(g) => g.into(),
            ForwardError::Adjacency(a) => a.into(),
            other => Failure::invalid(other),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::internal(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(Failure::internal),
    }
}

fn use_float(num: &NumericArgs, doc: &ComplexDocument) -> bool {
    num.float || doc.arithmetic() == Arithmetic::Float
}

fn load_domain<T: Scalar>(
    doc: &ComplexDocument,
    override_path: Option<&Path>,
    tol: Tolerance,
) -> Result<Domain<T>, Failure> {
    match override_path {
        Some(p) => Ok(DomainDocument::from_json(&read(p)?)?.to_domain(
            doc.dim,
            doc.arithmetic(),
            tol,
        )?),
        None => Ok(doc.to_domain(tol)?),
    }
}

fn detect_cmd<T: Scalar>(
    doc: &ComplexDocument,
    domain: Option<&Path>,
    tol: Tolerance,
    stats: bool,
    output: Option<&Path>,
) -> Result<u8, Failure> {
    let complex = doc.to_complex::<T>(tol)?;
    let domain = load_domain::<T>(doc, domain, tol)?;
    let opts = DetectOptions {
        tol,
        ..DetectOptions::default()
    };
    let res = detect_with(&complex, &domain, &opts)?;
    emit(&VerdictDocument::from_result(&res, stats).to_json(), output)?;
    Ok(match res.verdict {
        Verdict::IsPowerDiagram(_) => 0,
        Verdict::NotPowerDiagram => 1,
        Verdict::InvalidInput(reason) => return Err(Failure::invalid(reason)),
    })
}

fn adjacency_cmd<T: Scalar>(
    doc: &ComplexDocument,
    domain: Option<&Path>,
    ignore_domain: bool,
    tol: Tolerance,
) -> Result<u8, Failure> {
    let complex = doc.to_complex::<T>(tol)?;
    let domain = if ignore_domain {
        Domain::full(doc.dim)
    } else {
        load_domain::<T>(doc, domain, tol)?
    };
    let adj = compute_adjacency_with_tolerance(&complex, &domain, tol)?;
    emit(&AdjacencyDocument::from_structure(&adj, complex.labels()).to_json(), None)?;
    Ok(0)
}

fn verify_cmd<T: Scalar>(
    doc: &ComplexDocument,
    cert_text: &str,
    domain: Option<&Path>,
    tol: Tolerance,
) -> Result<u8, Failure> {
    let complex = doc.to_complex::<T>(tol)?;
    let domain = load_domain::<T>(doc, domain, tol)?;
    let cert = CertificateDocument::from_json(cert_text)?.to_certificate::<T>()?;
    let ok = verify_certificate_with_tolerance(&complex, &domain, &cert, tol)?;
    emit(&format!("{{\n  \"verified\": {ok}\n}}\n"), None)?;
    Ok(if ok { 0 } else { 1 })
}

fn generate_cmd(spec: Option<&Path>, random: Option<&[usize]>, seed: u64, dom: &DomainArgs) -> Result<u8, Failure> {
    let tol = Tolerance::DEFAULT;
    let (spec, inline_domain) = match (spec, random) {
        (Some(p), _) => {
            let sd = SpecDocument::from_json(&read(p)?)?;
            if sd.arithmetic == Some(Arithmetic::Float) {
                return Err(Failure::invalid("generate works in exact arithmetic only"));
            }
            (sd.to_spec::<Rational>()?, sd.domain.clone())
        }
        (None, Some(&[d, k])) => {
            if d == 0 || k == 0 {
                return Err(Failure::invalid("dimension and site count must be positive"));
            }
            let region = if dom.simplex {
                SiteRegion::Simplex
            } else if dom.unit_box {
                SiteRegion::UnitBox
            } else {
                SiteRegion::Symmetric
            };
            (SpecGenerator::new(seed).spec(d, k, region), None)
        }
        _ => return Err(Failure::invalid("give --spec PATH or --random D K")),
    };
    let d = spec.dim();
    let domain_doc = if let Some(p) = &dom.domain {
        DomainDocument::from_json(&read(p)?)?
    } else if dom.simplex {
        DomainDocument::Simplex { outcomes: d + 1 }
    } else if dom.unit_box {
        DomainDocument::Box {
            lo: vec![NumberValue::Text("0".into()); d],
            hi: vec![NumberValue::Text("1".into()); d],
        }
    } else {
        inline_domain.unwrap_or(DomainDocument::Full)
    };
    let domain = domain_doc.to_domain::<Rational>(d, Arithmetic::Exact, tol)?;
    let complex = if random.is_some() {
        // Random sites may produce empty cells; drop those sites.
        forward_construct_pruned(&spec, &domain, tol)?.0
    } else {
        forward_construct_with_tolerance(&spec, &domain, tol)?
    };
    emit(&ComplexDocument::from_complex(&complex, Some(domain_doc)).to_json(), None)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Detect {
            input,
            num,
            domain,
            stats,
            output,
        } => {
            let doc = ComplexDocument::from_json(&read(&input)?)?;
            let tol = Tolerance::new(num.tol);
            let (domain, output) = (domain.as_deref(), output.as_deref());
            if use_float(&num, &doc) {
                detect_cmd::<f64>(&doc, domain, tol, stats, output)
            } else {
                detect_cmd::<Rational>(&doc, domain, tol, stats, output)
            }
        }
        Command::Generate {
            spec,
            random,
            seed,
            domain,
        } => generate_cmd(spec.as_deref(), random.as_deref(), seed, &domain),
        Command::Adjacency {
            input,
            num,
            domain,
            ignore_domain,
        } => {
            let doc = ComplexDocument::from_json(&read(&input)?)?;
            let tol = Tolerance::new(num.tol);
            if use_float(&num, &doc) {
                adjacency_cmd::<f64>(&doc, domain.as_deref(), ignore_domain, tol)
            } else {
                adjacency_cmd::<Rational>(&doc, domain.as_deref(), ignore_domain, tol)
            }
        }
        Command::Verify {
            complex,
            certificate,
            num,
            domain,
        } => {
            let doc = ComplexDocument::from_json(&read(&complex)?)?;
            let cert = read(&certificate)?;
            let tol = Tolerance::new(num.tol);
            if use_float(&num, &doc) {
                verify_cmd::<f64>(&doc, &cert, domain.as_deref(), tol)
            } else {
                verify_cmd::<Rational>(&doc, &cert, domain.as_deref(), tol)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report(&e.to_string());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            report(&f.message);
            ExitCode::from(f.code)
        }
    }
}

fn report(message: &str) {
    let doc = serde_json::json!({ "error": message.trim() });
    eprintln!("{doc}");
}
