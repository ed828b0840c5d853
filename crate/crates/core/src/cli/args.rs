use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "involution", version, about = "Commuting-family checks, exact operator identities and constrained flows")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bracket or operator-identity verification.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Integrate a flow and report conservation drift.
    Simulate(SimulateArgs),
    /// Exact parameter identities.
    #[command(subcommand)]
    Identity(IdentityCommand),
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Pairwise brackets of a family at seeded random points.
    Brackets(BracketArgs),
    /// Exact normal-ordered operator relations.
    Operators(OperatorArgs),
}

#[derive(Debug, Subcommand)]
pub enum IdentityCommand {
    /// `1/(a_ik a_kl) + 1/(a_kl a_li) + 1/(a_li a_ik) = 0` over all triples.
    Cyclic(CyclicArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Number of coordinates; inferred from --alphas when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated distinct rationals, e.g. `1,2,4` or `1/3,2/7,5`.
    /// Defaults to `1,2,4,...` of length N.
    #[arg(long)]
    pub alphas: Option<String>,
    /// Scalar parameter, rational.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub alpha: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BracketChoice {
    Poisson,
    DiracSphere,
    DiracEllipsoid,
}

#[derive(Debug, Clone, Args)]
pub struct BracketArgs {
    /// F, G, Jalpha, Htilde, H, sqrtL-tails, J, L, or `mixed:F1,G1,...`.
    #[arg(long)]
    pub family: String,
    #[arg(long, value_enum, default_value = "poisson")]
    pub bracket: BracketChoice,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Also write the JSON report here.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Relation {
    Son,
    Hk,
    Aux,
    Xpj,
    Dilation,
    Naive,
}

#[derive(Debug, Clone, Args)]
pub struct OperatorArgs {
    #[arg(long, value_enum)]
    pub relation: Relation,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemChoice {
    Neumann,
    Ellipsoid,
    Quartic,
    Hk,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub system: SystemChoice,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[arg(long, default_value_t = 10000)]
    pub steps: usize,
    /// Start coordinates; sampled from --seed when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub p0: Option<String>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Quartic: conserved total momentum.
    #[arg(long = "P", allow_hyphen_values = true, default_value_t = 2.0)]
    pub big_p: f64,
    /// Quartic: alpha_1 alpha_2.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub mu: f64,
    /// Quartic: energy.
    #[arg(long = "E", allow_hyphen_values = true, default_value_t = -0.5)]
    pub energy: f64,
    /// Quartic: initial separation x2 - x1.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub q0: f64,
    /// Quartic: take the negative root for (p2 - p1)/2.
    #[arg(long)]
    pub negative_branch: bool,
    /// hk: follow the flow of H_k alone (1-based) instead of sum_k H_k/alpha_k.
    #[arg(long)]
    pub k: Option<usize>,
    /// Write the trajectory with observable columns here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-6)]
    pub drift_tol: f64,
    /// Rerun at h/2 and record the observed convergence order.
    #[arg(long)]
    pub order_check: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CyclicArgs {
    #[arg(long)]
    pub alphas: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
