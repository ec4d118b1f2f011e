//! `dphase`: probabilities of digraph properties near the phase transition,
//! plus the Airy-type special functions behind them.

use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

mod commands;
mod numbers;
mod output;

use output::Format;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Output(std::io::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Numerical(_) => "numerical",
            CliError::Output(_) => "output",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => m.clone(),
            CliError::Output(e) => e.to_string(),
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) | CliError::Output(_) => 2,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e)
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub precision_bits: u32,
    pub target_digits: u32,
    /// Largest `n` accepted for exact (generating-function) probabilities.
    pub series_order_cap: u32,
    pub quadrature_tol: Option<f64>,
    pub output_format: Option<Format>,
}

impl CliConfig {
    fn validate(&self) -> Result<(), CliError> {
        if self.precision_bits < 64 {
            return Err(CliError::Usage("precision must be at least 64 bits".into()));
        }
        if self.target_digits < 1 {
            return Err(CliError::Usage("at least one digit must be requested".into()));
        }
        if let Some(t) = self.quadrature_tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(CliError::Usage("quadrature tolerance must lie in (0, 1)".into()));
            }
        }
        Ok(())
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.output_format.unwrap_or(default)
    }
}

#[derive(Debug, Parser)]
#[command(name = "dphase", version, about = "Random digraph probabilities near the phase transition")]
struct Cli {
    /// Working precision in bits (values are recomputed at twice this).
    #[arg(long, global = true, env = "DPHASE_PRECISION", default_value_t = 192)]
    precision: u32,
    /// Significant digits to certify and print.
    #[arg(long, global = true, default_value_t = 8)]
    digits: u32,
    /// Largest n for exact probabilities.
    #[arg(long, global = true, default_value_t = 20000)]
    series_order_cap: u32,
    /// Absolute tolerance for contour integrals (default follows the precision).
    #[arg(long, global = true)]
    quadrature_tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Model {
    Md,
    D2,
    Sd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Asym,
    Oracle,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RegimeArg {
    Auto,
    Subcritical,
    Critical,
    Supercritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableId {
    #[value(name = "airy_values")]
    AiryValues,
    #[value(name = "airy_I")]
    AiryI,
    #[value(name = "mdag")]
    Mdag,
    #[value(name = "elementary")]
    Elementary,
    #[value(name = "bicyclic")]
    Bicyclic,
    #[value(name = "simple_elementary")]
    SimpleElementary,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum IntegralKind {
    /// Rescaled critical acyclic limit.
    Varphi,
    /// Critical elementary limit.
    Elementary,
    /// The tabulated I(n, mu).
    TableI,
    /// Limit of one complex component with a given kernel excess and deficiency.
    PhiRd,
    /// Closed-form integral of Ai(-2; t)/Ai'(t)^2, equal to one.
    Identity,
    /// Closed-form integral of Ai(x)^(-2), equal to one.
    Knessl,
    /// Residue expansion of the acyclic limit (mu > 0).
    ResidueAcyclic,
    /// Residue expansion of the elementary limit (mu > 0).
    ResidueElementary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightKind {
    /// Multigraph weights e^(-n^2 w/2).
    Multi,
    /// Simple-graph weights (1 + w)^(-n choose 2).
    Simple,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InnerFn {
    One,
    Exp1,
    Exp2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Variant {
    Multi,
    Simple,
    Strict,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Probability that a random digraph belongs to a family.
    #[command(group(ArgGroup::new("edge").required(true).args(["p", "lambda", "mu"])))]
    Prob {
        /// acyclic, elementary, bicyclic, excess:R or kernel:R:D
        #[arg(long)]
        family: String,
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long, value_enum, default_value_t = RegimeArg::Auto)]
        regime: RegimeArg,
    },
    /// Reproduce a published table.
    Table {
        #[arg(long, value_enum)]
        id: TableId,
        /// Finite n rows of the probability tables.
        #[arg(long, value_delimiter = ',', default_values_t = [100u32, 1000])]
        ns: Vec<u32>,
    },
    /// Exact against asymptotic probabilities for p = lambda/n.
    Convergence {
        #[arg(long, default_value = "acyclic")]
        family: String,
        #[arg(long, value_enum, default_value_t = Model::Md)]
        model: Model,
        #[arg(long)]
        lambda: String,
        #[arg(long, value_delimiter = ',', default_values_t = [250u32, 500, 1000, 2000])]
        ns: Vec<u32>,
    },
    /// Generalised Airy function Ai(k; z).
    Airy {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// A number, re,im, or an Airy zero such as a1 or a2prime.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Contour integrals over Airy functions.
    Integral {
        #[arg(long, value_enum)]
        kind: IntegralKind,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
        #[arg(long)]
        r: Option<i64>,
        #[arg(long)]
        d: Option<i64>,
        /// Number of Airy zeros in residue expansions.
        #[arg(long, default_value_t = 30)]
        terms: u32,
    },
    /// Zeros of the deformed exponential.
    Roots {
        #[arg(long)]
        w: String,
        #[arg(long, value_enum, default_value_t = WeightKind::Multi)]
        kind: WeightKind,
        /// Index of the zero, from the one nearest the origin.
        #[arg(long, default_value_t = 1)]
        j: u32,
        /// 0 for the function, 1 for its companion.
        #[arg(long, default_value_t = 0)]
        r: i64,
        #[arg(long, value_enum, default_value_t = InnerFn::One)]
        f: InnerFn,
    },
    /// Evaluate the deformed exponential family at a point.
    Phi {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        w: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        r: i64,
        #[arg(long, value_enum, default_value_t = WeightKind::Multi)]
        kind: WeightKind,
        #[arg(long, value_enum, default_value_t = InnerFn::One)]
        f: InnerFn,
    },
    /// Strongly connected complex counts.
    Strong {
        #[arg(long)]
        r: u32,
        /// Also print the excess polynomial of this variant.
        #[arg(long, value_enum)]
        variant: Option<Variant>,
    },
    /// Exhaustive census of small digraphs.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        model: Model,
    },
}

fn run(cli: Cli) -> Result<Vec<String>, CliError> {
    let cfg = CliConfig {
        precision_bits: cli.precision,
        target_digits: cli.digits,
        series_order_cap: cli.series_order_cap,
        quadrature_tol: cli.quadrature_tol,
        output_format: cli.format,
    };
    cfg.validate()?;
    match cli.command {
        Command::Prob { family, model, n, p, lambda, mu, method, regime } => {
            commands::prob(&cfg, &family, model, n, [p, lambda, mu], method, regime)
        }
        Command::Table { id, ns } => commands::table(&cfg, id, &ns),
        Command::Convergence { family, model, lambda, ns } => commands::convergence(&cfg, &family, model, &lambda, &ns),
        Command::Airy { k, z } => commands::airy(&cfg, k, &z),
        Command::Integral { kind, mu, n, r, d, terms } => commands::integral(&cfg, kind, mu.as_deref(), n, r, d, terms),
        Command::Roots { w, kind, j, r, f } => commands::roots(&cfg, &w, kind, j, r, f),
        Command::Phi { z, w, r, kind, f } => commands::phi(&cfg, &z, &w, r, kind, f),
        Command::Strong { r, variant } => commands::strong(&cfg, r, variant),
        Command::Oracle { n, model } => commands::oracle(&cfg, n, model),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(warnings) if warnings.is_empty() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(2),
        // output cut short by a closed pipe (`| head`) is not a failure
        Err(CliError::Output(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            let obj = serde_json::json!({ "error": { "kind": e.kind(), "message": e.message() } });
            eprintln!("{obj}");
            ExitCode::from(e.code())
        }
    }
}
