use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "satsec", version, about = "Secrecy design studies for RF satellite wiretap links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Secrecy capacity of the BPSK Gaussian wiretap channel: one point, or a
    /// 2-D surface over gamma_g0 and SNR.
    Capacity(CapacityArgs),
    /// Degradation angle theta* per scenario, with residuals against the
    /// reference angle.
    Region(RegionArgs),
    /// Leakage bound across sacrifice rates for one frame size.
    Tradeoff(TradeoffArgs),
    /// Leakage bound over Eve's polar angle, optionally also over her
    /// distance.
    Spatial(SpatialArgs),
    /// Encode and decode one message with the coset code.
    CodecDemo(CodecArgs),
    /// Exact seed-averaged leakage of a small code against the bound.
    LeakageOracle(OracleArgs),
    /// List built-in scenario presets.
    Presets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Directory receiving `<scenario>_<study>.csv`; nothing is written when
    /// omitted.
    #[arg(short = 'o', long = "out-dir", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Output file format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Scenario selection plus per-field overrides, applied in that order.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Scenario file (TOML).
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in scenario (see `satsec presets`).
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// Scenario label used in output file names.
    #[arg(long)]
    pub name: Option<String>,
    /// Bob's distance from the satellite [km].
    #[arg(long = "rho-b-km", value_name = "KM", allow_negative_numbers = true)]
    pub rho_b_km: Option<f64>,
    /// Eve's distance from the satellite [km].
    #[arg(long = "rho-e-km", value_name = "KM", allow_negative_numbers = true)]
    pub rho_e_km: Option<f64>,
    /// Eve's polar angle off Bob's boresight [degrees].
    #[arg(long = "theta-e-deg", value_name = "DEG", allow_negative_numbers = true)]
    pub theta_e_deg: Option<f64>,
    /// Path-loss exponent (>= 2; 2 is free space).
    #[arg(long = "r", value_name = "R", allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Eve/Bob receive-antenna amplitude ratio [dB, 20 log10].
    #[arg(long = "mu-db", value_name = "DB", allow_negative_numbers = true)]
    pub mu_db: Option<f64>,
    /// Eve/Bob noise-power ratio [dB, 10 log10].
    #[arg(long = "gamma-n-db", value_name = "DB", allow_negative_numbers = true)]
    pub gamma_n_db: Option<f64>,
    /// Transmit antenna half-power beamwidth [degrees].
    #[arg(long = "theta-3db-deg", value_name = "DEG", allow_negative_numbers = true)]
    pub theta_3db_deg: Option<f64>,
    /// Distance unit for path loss [km per unit].
    #[arg(long = "unit-km", value_name = "KM", allow_negative_numbers = true)]
    pub unit_km: Option<f64>,
    /// Bob's noise power with unit symbol energy [linear].
    #[arg(long = "n-b", visible_alias = "nb", value_name = "N_B", allow_negative_numbers = true)]
    pub n_b: Option<f64>,
    /// LDPC frame: short (n = 16200 bits) or medium (n = 32400 bits).
    #[arg(long, value_name = "FRAME")]
    pub frame: Option<String>,
    /// Sacrifice rate k'/n [bits per channel use].
    #[arg(long = "rho-sac", value_name = "RATE", allow_negative_numbers = true)]
    pub rho_sac: Option<f64>,
    /// Inner decoder error probability.
    #[arg(long = "epsilon-b", value_name = "P", allow_negative_numbers = true)]
    pub epsilon_b: Option<f64>,
    /// Reference degradation angle [degrees].
    #[arg(long = "target-theta-deg", value_name = "DEG", allow_negative_numbers = true)]
    pub target_theta_deg: Option<f64>,
    /// Reference verdict: never degraded.
    #[arg(long = "target-never")]
    pub target_never: bool,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Eve's regularised amplitude; with --nb or --snr-db gives one point.
    #[arg(long = "gamma-g0", value_name = "G", allow_negative_numbers = true)]
    pub gamma_g0: Option<f64>,
    /// Bob's noise power [linear].
    #[arg(long = "n-b", visible_alias = "nb", value_name = "N_B", conflicts_with = "snr_db", allow_negative_numbers = true)]
    pub n_b: Option<f64>,
    /// Bob's SNR, 10 log10(1/n_B) [dB].
    #[arg(long = "snr-db", value_name = "DB", allow_negative_numbers = true)]
    pub snr_db: Option<f64>,
    /// Grid points per axis for the surface (gamma_g0 in [0, 1], SNR in [-10, 20] dB).
    #[arg(long = "grid-points", default_value_t = 20, value_name = "N")]
    pub grid_points: usize,
    /// Label used in the output file name.
    #[arg(long, default_value = "capacity")]
    pub name: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// Run every built-in reference preset instead of a single scenario.
    #[arg(long, conflicts_with_all = ["config", "preset"])]
    pub all_presets: bool,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Largest exponent over s (tightest bound).
    Tightest,
    /// Smallest exponent over s.
    LiteralMin,
}

#[derive(Debug, Args)]
pub struct TradeoffArgs {
    /// Eve's regularised amplitude.
    #[arg(long = "gamma-g0", value_name = "G", default_value_t = 0.5, allow_negative_numbers = true)]
    pub gamma_g0: f64,
    /// Sacrifice rates to evaluate [bits per channel use, comma separated];
    /// defaults to x/3 for x = 0.01, ..., 1.
    #[arg(long = "rho-sac-grid", value_name = "LIST", value_delimiter = ',', allow_negative_numbers = true)]
    pub rho_sac_grid: Vec<f64>,
    /// Which optimum over s to report.
    #[arg(long, value_enum, default_value = "tightest")]
    pub mode: Mode,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SpatialArgs {
    /// First polar angle [degrees].
    #[arg(long = "theta-min-deg", value_name = "DEG", allow_negative_numbers = true)]
    pub theta_min_deg: Option<f64>,
    /// Last polar angle [degrees].
    #[arg(long = "theta-max-deg", value_name = "DEG", allow_negative_numbers = true)]
    pub theta_max_deg: Option<f64>,
    /// Angle step [degrees].
    #[arg(long = "theta-step-deg", value_name = "DEG", allow_negative_numbers = true)]
    pub theta_step_deg: Option<f64>,
    /// Eve distances for a 2-D map [km, comma separated].
    #[arg(long = "rho-e-grid-km", value_name = "LIST", value_delimiter = ',', allow_negative_numbers = true)]
    pub rho_e_grid_km: Vec<f64>,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Inner {
    /// No error correction; n = k + k'.
    Identity,
    /// Hamming(7,4) blocks; k + k' must be a multiple of 4.
    Hamming74,
}

#[derive(Debug, Clone, Args)]
pub struct CodeArgs {
    /// Secret message length [bits].
    #[arg(long, value_name = "BITS")]
    pub k: usize,
    /// Sacrificed random bits [bits].
    #[arg(long = "kprime", visible_alias = "k-prime", value_name = "BITS")]
    pub k_prime: usize,
    /// Built-in inner code.
    #[arg(long, value_enum, default_value = "identity", conflicts_with = "code")]
    pub inner: Inner,
    /// Inner-code descriptor file (`k n` header, then hex generator rows).
    #[arg(long, value_name = "PATH")]
    pub code: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 1, value_name = "U64")]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CodecArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Hash seed as hex (k + k' - 1 bits); drawn from --seed when absent.
    #[arg(long = "seed-hex", value_name = "HEX", conflicts_with = "seed_bits")]
    pub seed_hex: Option<String>,
    /// Hash seed as a '0'/'1' string, bit 0 first (k + k' - 1 bits).
    #[arg(long = "seed-bits", value_name = "BITS")]
    pub seed_bits: Option<String>,
    /// Message as hex (k bits); drawn from --seed when absent.
    #[arg(long = "message-hex", value_name = "HEX")]
    pub message_hex: Option<String>,
    /// Crossover probability of the channel between encoder and decoder.
    #[arg(long = "flip-prob", default_value_t = 0.0, value_name = "P", allow_negative_numbers = true)]
    pub flip_prob: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Eve's BSC crossover probability.
    #[arg(long = "bsc-p", value_name = "P", conflicts_with = "gamma_g0", allow_negative_numbers = true)]
    pub bsc_p: Option<f64>,
    /// Eve's regularised amplitude; the Gaussian channel is sign-quantised.
    #[arg(long = "gamma-g0", value_name = "G", requires = "n_b", allow_negative_numbers = true)]
    pub gamma_g0: Option<f64>,
    /// Bob's noise power for the sign-quantised channel [linear].
    #[arg(long = "n-b", visible_alias = "nb", value_name = "N_B", allow_negative_numbers = true)]
    pub n_b: Option<f64>,
    /// Hash seeds to sample when the family is too large to enumerate.
    #[arg(long, default_value_t = 10_000, value_name = "N")]
    pub samples: usize,
    /// Label used in the output file name.
    #[arg(long, default_value = "oracle")]
    pub name: String,
    #[command(flatten)]
    pub output: OutputArgs,
}
