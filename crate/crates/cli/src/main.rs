mod args;

use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use satsec_core::codec::{
    hard_decision_bsc, seed_averaged_leakage, CosetCode, HashSeed, IdentityCode, InnerCode, LinearCode, ToeplitzHash,
};
use satsec_core::exponents::{leakage_bound_at, CodeParams, ExponentMode};
use satsec_core::geometry::Degradation;
use satsec_core::gf2::BitVec;
use satsec_core::infotheory::{
    capacity_surface, format_f64, n_b_to_snr_db, secrecy_capacity, snr_db_to_n_b, write_capacity_csv, CapacityCell,
    DiscreteChannel,
};
use satsec_core::linkdesign::{
    default_rho_sac_grid, region_csv, run_region_study, run_spatial_map, run_tradeoff, spatial_csv, tradeoff_csv,
    write_atomic,
};
use satsec_core::scenario::{
    preset_by_name, presets, reference_presets, theta_grid, Experiment, Frame, Scenario, ScenarioFile, Study,
    SPATIAL_PRESET,
};
use satsec_core::Error;

use args::{CapacityArgs, Cli, CodeArgs, CodecArgs, Command, Inner, Mode, OracleArgs, OutputArgs, RegionArgs, ScenarioArgs, SpatialArgs, TradeoffArgs};

/// Failure with its process exit status.
#[derive(Debug)]
enum Failure {
    /// Bad configuration or arguments.
    Config(String),
    /// A numerical routine failed.
    Numerical(String),
    Io(String),
}

impl Failure {
    fn status(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Io(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() || matches!(e, Error::Decode(_)) {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Capacity(a) => capacity(a),
        Command::Region(a) => region(a),
        Command::Tradeoff(a) => tradeoff(a),
        Command::Spatial(a) => spatial(a),
        Command::CodecDemo(a) => codec_demo(a),
        Command::LeakageOracle(a) => leakage_oracle(a),
        Command::Presets => {
            for p in presets() {
                println!("{}", p.name);
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.status())
        }
    }
}

fn emit(output: &OutputArgs, scenario: &str, study: &str, csv: &str) -> Outcome {
    if let Some(dir) = &output.out_dir {
        write_atomic(dir, &format!("{scenario}_{study}.csv"), csv)?;
    }
    Ok(())
}

fn load_base(args: &ScenarioArgs, default_preset: &str) -> Result<ScenarioFile, Failure> {
    match (&args.config, &args.preset) {
        (Some(path), _) => read_scenario(path),
        (None, Some(name)) => Ok(preset_by_name(name)?),
        (None, None) => Ok(preset_by_name(default_preset)?),
    }
}

fn read_scenario(path: &Path) -> Result<ScenarioFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    Ok(ScenarioFile::parse(&text)?)
}

/// Applies every override flag to its scenario-file field.
fn apply_overrides(mut f: ScenarioFile, a: &ScenarioArgs) -> Result<ScenarioFile, Failure> {
    if let Some(v) = &a.name {
        f.name = v.clone();
    }
    macro_rules! set {
        ($($field:ident),*) => { $( if let Some(v) = a.$field { f.$field = v; } )* };
    }
    set!(rho_b_km, rho_e_km, theta_e_deg, r, mu_db, gamma_n_db, theta_3db_deg, unit_km, n_b, rho_sac, epsilon_b);
    if let Some(frame) = &a.frame {
        f.frame = Frame::parse(frame)?;
    }
    if let Some(t) = a.target_theta_deg {
        f.target_theta_deg = Some(t);
        f.target_never = false;
    }
    if a.target_never {
        f.target_never = true;
        f.target_theta_deg = None;
    }
    Ok(f)
}

fn resolve(args: &ScenarioArgs, default_preset: &str) -> Result<Scenario, Failure> {
    Ok(apply_overrides(load_base(args, default_preset)?, args)?.resolve()?)
}

fn capacity(a: CapacityArgs) -> Outcome {
    let n_b = match (a.n_b, a.snr_db) {
        (Some(n), _) => Some(n),
        (None, Some(db)) => Some(snr_db_to_n_b(db)),
        (None, None) => None,
    };
    let cells = match (a.gamma_g0, n_b) {
        (Some(g), Some(n_b)) => {
            let cs = secrecy_capacity(g, n_b)?;
            println!("C_s = {} bits per channel use (gamma_g0 = {g}, n_B = {n_b})", format_f64(cs));
            vec![CapacityCell { gamma_g0: g, snr_db: n_b_to_snr_db(n_b), cs_bits: cs }]
        }
        (None, None) => {
            if a.grid_points < 2 {
                return Err(Failure::Config("grid-points must be at least 2".into()));
            }
            let m = (a.grid_points - 1) as f64;
            let gammas: Vec<f64> = (0..a.grid_points).map(|i| i as f64 / m).collect();
            let snrs: Vec<f64> = (0..a.grid_points).map(|i| -10.0 + 30.0 * i as f64 / m).collect();
            let cells = capacity_surface(&gammas, &snrs)?;
            let peak = cells.iter().map(|c| c.cs_bits).fold(0.0, f64::max);
            println!("capacity surface: {} cells, max C_s = {} bits per channel use", cells.len(), format_f64(peak));
            cells
        }
        _ => return Err(Failure::Config("give both --gamma-g0 and --nb/--snr-db for a point, or neither for a surface".into())),
    };
    let mut buf = Vec::new();
    write_capacity_csv(&cells, &mut buf)?;
    emit(&a.output, &a.name, Study::Capacity.name(), &String::from_utf8_lossy(&buf))
}

fn region(a: RegionArgs) -> Outcome {
    let files: Vec<ScenarioFile> = if a.all_presets || (a.scenario.config.is_none() && a.scenario.preset.is_none()) {
        reference_presets()
    } else {
        vec![load_base(&a.scenario, SPATIAL_PRESET)?]
    };
    let scenarios: Vec<Scenario> =
        files.into_iter().map(|f| Ok(apply_overrides(f, &a.scenario)?.resolve()?)).collect::<Result<_, Failure>>()?;
    let rows = run_region_study(&scenarios)?;
    for r in &rows {
        let theta = match r.theta_star {
            Degradation::Never => "never degraded".to_string(),
            Degradation::Beyond { theta_deg } => format!("theta* = {theta_deg:.2} deg"),
        };
        let residual = r.residual_deg.map(|x| format!(", residual {x:+.2} deg")).unwrap_or_default();
        println!("{}: {theta}{residual}", r.scenario);
        emit(&a.output, &r.scenario, Study::Region.name(), &region_csv(std::slice::from_ref(r)))?;
    }
    Ok(())
}

fn tradeoff(a: TradeoffArgs) -> Outcome {
    let sc = resolve(&a.scenario, SPATIAL_PRESET)?;
    let grid = match (a.rho_sac_grid.is_empty(), a.scenario.rho_sac) {
        (false, _) => a.rho_sac_grid.clone(),
        (true, Some(r)) => vec![r],
        (true, None) => default_rho_sac_grid(),
    };
    let mode = match a.mode {
        Mode::Tightest => ExponentMode::Tightest,
        Mode::LiteralMin => ExponentMode::LiteralMin,
    };
    let rows = run_tradeoff(sc.frame, a.gamma_g0, sc.n_b, &grid, mode)?;
    let best = rows.iter().min_by(|x, y| x.bound.total_cmp(&y.bound)).expect("non-empty grid");
    println!(
        "n = {}, gamma_g0 = {}: bound = {:.3e} at rho_sac = {} (exponent {:.4e} bits)",
        sc.frame.n(),
        a.gamma_g0,
        best.bound,
        format_f64(best.rho_sac),
        best.exponent_bits
    );
    emit(&a.output, &sc.name, Study::Tradeoff.name(), &tradeoff_csv(&rows))
}

fn spatial(a: SpatialArgs) -> Outcome {
    let sc = resolve(&a.scenario, SPATIAL_PRESET)?;
    let defaults = sc.experiment.clone().unwrap_or_else(|| Experiment::new(Study::Spatial));
    let thetas = theta_grid(
        a.theta_min_deg.unwrap_or(defaults.theta_min_deg),
        a.theta_max_deg.unwrap_or(defaults.theta_max_deg),
        a.theta_step_deg.unwrap_or(defaults.theta_step_deg),
    )?;
    let radii = if a.rho_e_grid_km.is_empty() { defaults.rho_e_grid_km } else { a.rho_e_grid_km.clone() };
    let grid = (!radii.is_empty()).then_some(radii.as_slice());
    let rows = run_spatial_map(sc.frame, &sc, sc.rho_sac, &thetas, grid)?;
    let guaranteed = rows.iter().filter(|r| r.point.guaranteed).count();
    let first = rows.iter().find(|r| r.point.guaranteed).map(|r| format!(", first at theta = {} deg", format_f64(r.point.theta_deg)));
    println!("{}: {guaranteed} of {} cells guaranteed{}", sc.name, rows.len(), first.unwrap_or_default());
    emit(&a.output, &sc.name, Study::Spatial.name(), &spatial_csv(&rows, grid.is_some()))
}

fn inner_code(c: &CodeArgs) -> Result<Arc<dyn InnerCode>, Failure> {
    let dim = c.k + c.k_prime;
    if let Some(path) = &c.code {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        return Ok(Arc::new(LinearCode::from_descriptor(&text)?));
    }
    match c.inner {
        Inner::Identity => Ok(Arc::new(IdentityCode::new(dim))),
        Inner::Hamming74 => {
            if dim == 0 || !dim.is_multiple_of(4) {
                return Err(Failure::Config(format!("inner: hamming74 needs k + kprime to be a multiple of 4, got {dim}")));
            }
            Ok(Arc::new(LinearCode::hamming74().repeated(dim / 4)?))
        }
    }
}

fn codec_demo(a: CodecArgs) -> Outcome {
    let (k, kp) = (a.code.k, a.code.k_prime);
    if k == 0 || k + kp > 4096 {
        return Err(Failure::Config("k must be positive and k + kprime at most 4096".into()));
    }
    if !(0.0..=1.0).contains(&a.flip_prob) {
        return Err(Failure::Config(format!("flip-prob: {} is outside [0, 1]", a.flip_prob)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.code.seed);
    let seed = match (&a.seed_hex, &a.seed_bits) {
        (Some(hex), _) => HashSeed::from_hex(hex, k, kp)?,
        (None, Some(bits)) => HashSeed::from_bit_string(bits, k, kp)?,
        (None, None) => HashSeed::random(&mut rng, k, kp),
    };
    let code = CosetCode::new(inner_code(&a.code)?, ToeplitzHash::new(k, kp, seed)?)?;
    let m = match &a.message_hex {
        Some(hex) => BitVec::from_hex(hex, k)?,
        None => BitVec::random(&mut rng, k),
    };
    let l = BitVec::random(&mut rng, kp);
    let x = code.encode(&m, &l)?;
    let mut y = x.clone();
    for i in 0..y.len() {
        if rng.random_bool(a.flip_prob) {
            y.flip(i);
        }
    }
    let flips = x.xor(&y).weight();
    let decoded = code.decode(&y)?;
    let verdict = if decoded == m { "round-trip OK" } else { "round-trip FAILED" };
    println!(
        "{verdict}: message 0x{} -> codeword 0x{} ({flips} flips) -> 0x{} (seed {})",
        m.to_hex(),
        x.to_hex(),
        decoded.to_hex(),
        code.hash().seed().to_bit_string()
    );
    if decoded == m {
        Ok(())
    } else {
        Err(Failure::Numerical("decoded message differs from the sent message".into()))
    }
}

fn leakage_oracle(a: OracleArgs) -> Outcome {
    let (k, kp) = (a.code.k, a.code.k_prime);
    if k == 0 {
        return Err(Failure::Config("k must be positive".into()));
    }
    let ch = match (a.bsc_p, a.gamma_g0, a.n_b) {
        (Some(p), _, _) => DiscreteChannel::bsc(p)?,
        (None, Some(g), Some(n_b)) => hard_decision_bsc(g, n_b)?,
        _ => return Err(Failure::Config("give --bsc-p, or --gamma-g0 with --nb".into())),
    };
    let inner = inner_code(&a.code)?;
    let n = inner.length();
    let uniform = vec![(-(k as f64)).exp2(); 1usize.checked_shl(k as u32).filter(|_| k < 32).ok_or_else(|| Failure::Config("k too large".into()))?];
    let mut rng = ChaCha8Rng::seed_from_u64(a.code.seed);
    let avg = seed_averaged_leakage(inner, k, kp, &ch, &uniform, &mut rng, a.samples)?;
    let rho = ((k + kp) as f64 / n as f64).min(1.0);
    let params = CodeParams::new(n as u64, k as u64, kp as u64, rho, 0.0)?;
    let mut csv = String::from("s,bound,leakage_bits\n");
    let mut min_bound = f64::INFINITY;
    for i in 1..=9 {
        let s = i as f64 / 10.0;
        let bound = leakage_bound_at(s, &params, &ch)?;
        min_bound = min_bound.min(bound);
        csv.push_str(&format!("{},{},{}\n", format_f64(s), format_f64(bound), format_f64(avg.mean.strong_bits)));
    }
    println!(
        "leakage = {} bits over {} seeds ({}), min bound over s = {}: {}",
        format_f64(avg.mean.strong_bits),
        avg.seeds,
        if avg.exhaustive { "exhaustive" } else { "sampled" },
        format_f64(min_bound),
        if avg.mean.strong_bits <= min_bound { "dominated" } else { "VIOLATED" }
    );
    emit(&a.output, &a.name, "leakage", &csv)
}
