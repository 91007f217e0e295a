use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use casimir_core::analysis::{deep_ratio_grid, nernst_verdict, NernstConfig};
use casimir_core::asymptotics::{
    coefficient_c, validity_parameter, AsymptoticCoefficients, C2Variant,
};
use casimir_core::lifshitz::{free_energy, free_energy_t0, Polarizations};
use casimir_core::reflection::reflection_surface;

use crate::config::{RunConfig, Spacing, KEYS};
use crate::executor::RayonExecutor;
use crate::output::{guarded, header, num, DataFile};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "casimir",
    version,
    about = "Casimir free energy between metal half-spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// F(T) over a temperature grid, with a T = 0 anchor row.
    Sweep,
    /// F at zero temperature.
    T0,
    /// Low-temperature expansion constants.
    Asymptote,
    /// Numerical against analytic ΔF_TE, with the entropy verdict.
    Ratio,
    /// Squared reflection coefficients on a (ζ, k⊥) grid.
    Reflection,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Sweep => "sweep",
            Command::T0 => "t0",
            Command::Asymptote => "asymptote",
            Command::Ratio => "ratio",
            Command::Reflection => "reflection",
        }
    }
}

/// Every config key as a flag. Flags override the config file.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// key = value file; `#` starts a comment
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// drude, plasma, ideal, vacuum or table:<path>
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// gold-2 (9.03 eV / 34.5 meV) or gold-1 (9.0 eV / 35 meV)
    #[arg(long, global = true)]
    pub preset: Option<String>,
    #[arg(long, global = true)]
    pub omega_p_ev: Option<String>,
    #[arg(long, global = true)]
    pub nu_mev: Option<String>,
    /// Plate separation with unit, e.g. 1um or 500nm
    #[arg(long, global = true)]
    pub gap: Option<String>,
    #[arg(long, global = true)]
    pub tmin: Option<String>,
    #[arg(long, global = true)]
    pub tmax: Option<String>,
    #[arg(long, global = true)]
    pub tcount: Option<String>,
    /// linear or log
    #[arg(long, global = true)]
    pub tspacing: Option<String>,
    /// Temperature for the asymptote report, K
    #[arg(long, global = true)]
    pub temperature: Option<String>,
    #[arg(long, global = true)]
    pub tol_inner: Option<String>,
    #[arg(long, global = true)]
    pub tol_sum: Option<String>,
    #[arg(long, global = true)]
    pub delta_tol: Option<String>,
    /// Extend the ratio grid down to 0.008 K
    #[arg(long, global = true)]
    pub deep: bool,
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true)]
    pub workers: Option<String>,
    #[arg(long, global = true)]
    pub zeta_min: Option<String>,
    #[arg(long, global = true)]
    pub zeta_max: Option<String>,
    #[arg(long, global = true)]
    pub zeta_count: Option<String>,
    #[arg(long, global = true)]
    pub kperp_min: Option<String>,
    #[arg(long, global = true)]
    pub kperp_max: Option<String>,
    #[arg(long, global = true)]
    pub kperp_count: Option<String>,
    /// rounded, euler-maclaurin or exact-zeta
    #[arg(long, global = true)]
    pub c2_variant: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, Option<&str>)> {
        let values = [
            self.model.as_deref(),
            self.preset.as_deref(),
            self.omega_p_ev.as_deref(),
            self.nu_mev.as_deref(),
            self.gap.as_deref(),
            self.tmin.as_deref(),
            self.tmax.as_deref(),
            self.tcount.as_deref(),
            self.tspacing.as_deref(),
            self.temperature.as_deref(),
            self.tol_inner.as_deref(),
            self.tol_sum.as_deref(),
            self.delta_tol.as_deref(),
            self.deep.then_some("true"),
            self.out.as_deref(),
            self.workers.as_deref(),
            self.zeta_min.as_deref(),
            self.zeta_max.as_deref(),
            self.zeta_count.as_deref(),
            self.kperp_min.as_deref(),
            self.kperp_max.as_deref(),
            self.kperp_count.as_deref(),
            self.c2_variant.as_deref(),
        ];
        KEYS.iter().copied().zip(values).collect()
    }

    /// Defaults, then the config file, then flags; validated.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        for (key, value) in self.pairs() {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = cli.flags.resolve().and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("casimir: {e}");
            e.exit_code()
        }
    }
}

/// Runs `command` on a validated config; returns the files written.
pub fn run(command: Command, cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let workers = if cfg.workers == 0 { 1 } else { cfg.workers };
    let exec = RayonExecutor::new(workers)?;
    match command {
        Command::Sweep => sweep(cfg, &exec),
        Command::T0 => t0(cfg),
        Command::Asymptote => asymptote(cfg),
        Command::Ratio => ratio(cfg, &exec),
        Command::Reflection => reflection(cfg),
    }
}

fn sweep(cfg: &RunConfig, exec: &RayonExecutor) -> Result<Vec<PathBuf>, CliError> {
    let model = cfg.build_model()?;
    let geometry = cfg.geometry()?;
    let grid = cfg.grid(0.0, 800.0, 40, Spacing::Linear)?;
    let lc = cfg.lifshitz();
    let mut file = DataFile::create(&cfg.out, "sweep.csv", &header("sweep", cfg))?;
    file.line("T_K,F_TE_J_m2,F_TM_J_m2,F_total_J_m2,m_max,tol_achieved")?;
    guarded(&mut file, |file| {
        let z = free_energy_t0(&model, geometry, &lc)?;
        file.line(&format!(
            "{},{},{},{},0,{}",
            num(0.0),
            num(z.f_te),
            num(z.f_tm),
            num(z.f_total),
            num(z.rel_error)
        ))?;
        for &t in grid.iter().filter(|&&t| t > 0.0) {
            let f = free_energy(&model, geometry, t, Polarizations::BOTH, &lc, exec)?;
            file.line(&format!(
                "{},{},{},{},{},{}",
                num(t),
                num(f.f_te),
                num(f.f_tm),
                num(f.f_total),
                f.m_max,
                num(f.tol_achieved)
            ))?;
        }
        Ok(())
    })?;
    Ok(vec![file.path().to_path_buf()])
}

fn t0(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let model = cfg.build_model()?;
    let geometry = cfg.geometry()?;
    let mut file = DataFile::create(&cfg.out, "t0.csv", &header("t0", cfg))?;
    file.line("a_m,F_TE_J_m2,F_TM_J_m2,F_total_J_m2,rel_error")?;
    guarded(&mut file, |file| {
        let z = free_energy_t0(&model, geometry, &cfg.lifshitz())?;
        file.line(&format!(
            "{},{},{},{},{}",
            num(geometry.gap()),
            num(z.f_te),
            num(z.f_tm),
            num(z.f_total),
            num(z.rel_error)
        ))
    })?;
    Ok(vec![file.path().to_path_buf()])
}

fn asymptote(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    // The expansion is specific to the Drude medium, so the report always
    // uses the preset (with overrides) whatever model is selected.
    let params = cfg.drude_parameters()?;
    let gap = cfg.geometry()?.gap();
    let t = cfg.temperature;
    let mut file = DataFile::create(&cfg.out, "asymptote.txt", &header("asymptote", cfg))?;
    guarded(&mut file, |file| {
        let k = AsymptoticCoefficients::compute(&params, gap)?;
        let c = coefficient_c(&params, t)?;
        let scale = validity_parameter(&params, gap, t)?;
        file.line(&format!("temperature_K={}", num(t)))?;
        file.line(&format!("C_1_m2={}", num(c)))?;
        file.line(&format!("C1_J_m2_K2={}", num(k.c1)))?;
        file.line(&format!(
            "C2_{}_K-1/2={}",
            C2Variant::Rounded.name(),
            num(k.c2)
        ))?;
        file.line(&format!(
            "C2_{}_K-1/2={}",
            C2Variant::EulerMaclaurin.name(),
            num(k.c2_euler_maclaurin)
        ))?;
        file.line(&format!(
            "C2_{}_K-1/2={}",
            C2Variant::ExactZeta.name(),
            num(k.c2_exact_zeta)
        ))?;
        file.line(&format!("g_prime_0={}", num(k.g_prime_0)))?;
        file.line(&format!("I={}", num(k.i)))?;
        file.line(&format!("zeta_minus_1={}", num(k.zeta_minus_one)))?;
        file.line(&format!(
            "zeta_minus_3/2={}",
            num(k.zeta_minus_three_halves)
        ))?;
        file.line(&format!("a_sqrt_C={}", num(scale)))?;
        file.line(&format!(
            "expansion_valid={}",
            if scale < 0.1 {
                "yes"
            } else {
                "no (needs a*sqrt(C) << 1)"
            }
        ))
    })?;
    Ok(vec![file.path().to_path_buf()])
}

fn ratio(cfg: &RunConfig, exec: &RayonExecutor) -> Result<Vec<PathBuf>, CliError> {
    let model = cfg.build_model()?;
    let geometry = cfg.geometry()?;
    let grid = if cfg.deep {
        eprintln!("casimir: --deep extends the grid to 0.008 K; expect a long run");
        deep_ratio_grid()
    } else {
        cfg.grid(0.05, 1.0, 12, Spacing::Log)?
    };
    let nc = NernstConfig {
        grid,
        variant: cfg.c2_variant,
        lifshitz: cfg.lifshitz(),
        ..NernstConfig::default()
    };
    let head = header("ratio", cfg);
    let mut csv = DataFile::create(&cfg.out, "ratio.csv", &head)?;
    csv.line("T_K,deltaF_num_J_m2,deltaF_th_J_m2,R")?;
    let mut verdict = DataFile::create(&cfg.out, "verdict.txt", &head)?;
    let report = match nernst_verdict(&model, geometry, &nc, exec) {
        Ok(r) => r,
        Err(e) => {
            let e = CliError::from(e);
            csv.fail(&e)?;
            verdict.fail(&e)?;
            return Err(e);
        }
    };
    for p in &report.series {
        let mut row = format!(
            "{},{},{},{}",
            num(p.temperature),
            num(p.delta_f_num),
            num(p.delta_f_th),
            num(p.r)
        );
        if let Some(n) = &p.note {
            row.push_str(&format!(" # {n}"));
        }
        csv.line(&row)?;
    }
    for line in report.to_text().lines() {
        verdict.line(&format!("# {line}"))?;
    }
    for line in report.to_key_values().lines() {
        verdict.line(line)?;
    }
    Ok(vec![csv.path().to_path_buf(), verdict.path().to_path_buf()])
}

fn reflection(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let model = cfg.build_model()?;
    let zetas = if cfg.zeta_count == 1 {
        vec![cfg.zeta_min]
    } else {
        casimir_core::analysis::log_spaced(cfg.zeta_min, cfg.zeta_max, cfg.zeta_count)?
    };
    let n = cfg.kperp_count;
    let kperps: Vec<f64> = (0..n)
        .map(|i| {
            if n == 1 {
                cfg.kperp_min
            } else if i == n - 1 {
                cfg.kperp_max
            } else {
                cfg.kperp_min + (cfg.kperp_max - cfg.kperp_min) * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let mut file = DataFile::create(&cfg.out, "reflection.csv", &header("reflection", cfg))?;
    file.line("zeta_rad_s,k_perp_1_m,A,B")?;
    guarded(&mut file, |file| {
        let surface = reflection_surface(&model, &zetas, &kperps)?;
        for (z, k, p) in surface.rows() {
            file.line(&format!("{},{},{},{}", num(z), num(k), num(p.a), num(p.b)))?;
        }
        Ok(())
    })?;
    Ok(vec![file.path().to_path_buf()])
}
