//! Run configuration: flat `key = value` files merged with command flags.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use casimir_core::asymptotics::C2Variant;
use casimir_core::dispersion::{DispersionModel, DrudeParameters, TabulatedPermittivity};
use casimir_core::lifshitz::{Geometry, LifshitzConfig};
use casimir_core::units::ev_to_rad_per_s;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Drude,
    Plasma,
    Ideal,
    Vacuum,
    Table(PathBuf),
}

impl ModelSpec {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "drude" => Ok(ModelSpec::Drude),
            "plasma" => Ok(ModelSpec::Plasma),
            "ideal" => Ok(ModelSpec::Ideal),
            "vacuum" => Ok(ModelSpec::Vacuum),
            _ => match s.strip_prefix("table:") {
                Some(p) if !p.is_empty() => Ok(ModelSpec::Table(PathBuf::from(p))),
                _ => Err(CliError::Config(format!(
                    "unknown model '{s}' (expected drude, plasma, ideal, vacuum or table:<path>)"
                ))),
            },
        }
    }

    fn label(&self) -> String {
        match self {
            ModelSpec::Drude => "drude".into(),
            ModelSpec::Plasma => "plasma".into(),
            ModelSpec::Ideal => "ideal".into(),
            ModelSpec::Vacuum => "vacuum".into(),
            ModelSpec::Table(p) => format!("table:{}", p.display()),
        }
    }
}

/// Named Drude parameter sets for gold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// ħω_p = 9.03 eV, ħν = 34.5 meV.
    Gold2,
    /// ħω_p = 9.0 eV, ħν = 35 meV.
    Gold1,
}

impl Preset {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "gold-2" => Ok(Preset::Gold2),
            "gold-1" => Ok(Preset::Gold1),
            _ => Err(CliError::Config(format!(
                "unknown preset '{s}' (expected gold-2 or gold-1)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Gold2 => "gold-2",
            Preset::Gold1 => "gold-1",
        }
    }

    fn energies(self) -> (f64, f64) {
        match self {
            Preset::Gold2 => (9.03, 34.5),
            Preset::Gold1 => (9.0, 35.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Everything a subcommand needs. Grid fields left as `None` fall back to
/// the subcommand's own defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub preset: Preset,
    pub omega_p_ev: Option<f64>,
    pub nu_mev: Option<f64>,
    /// Metres.
    pub gap: f64,
    pub tmin: Option<f64>,
    pub tmax: Option<f64>,
    pub tcount: Option<usize>,
    pub tspacing: Option<Spacing>,
    /// Single temperature for the constants report, K.
    pub temperature: f64,
    pub tol_inner: f64,
    pub tol_sum: f64,
    pub delta_tol: f64,
    pub deep: bool,
    pub out: PathBuf,
    pub workers: usize,
    pub zeta_min: f64,
    pub zeta_max: f64,
    pub zeta_count: usize,
    pub kperp_min: f64,
    pub kperp_max: f64,
    pub kperp_count: usize,
    pub c2_variant: C2Variant,
}

impl Default for RunConfig {
    fn default() -> Self {
        let lc = LifshitzConfig::default();
        RunConfig {
            model: ModelSpec::Drude,
            preset: Preset::Gold2,
            omega_p_ev: None,
            nu_mev: None,
            gap: 1e-6,
            tmin: None,
            tmax: None,
            tcount: None,
            tspacing: None,
            temperature: 1.0,
            tol_inner: lc.tol_inner,
            tol_sum: lc.tol_sum,
            delta_tol: lc.delta_tol,
            deep: false,
            out: PathBuf::from("."),
            workers: 1,
            zeta_min: 1e3,
            zeta_max: 1e17,
            zeta_count: 29,
            kperp_min: 0.0,
            kperp_max: 2e7,
            kperp_count: 21,
            c2_variant: C2Variant::Rounded,
        }
    }
}

/// Keys accepted in config files and, with `--` and `-` for `_`, as flags.
pub const KEYS: &[&str] = &[
    "model",
    "preset",
    "omega_p_ev",
    "nu_mev",
    "gap",
    "tmin",
    "tmax",
    "tcount",
    "tspacing",
    "temperature",
    "tol_inner",
    "tol_sum",
    "delta_tol",
    "deep",
    "out",
    "workers",
    "zeta_min",
    "zeta_max",
    "zeta_count",
    "kperp_min",
    "kperp_max",
    "kperp_count",
    "c2_variant",
];

fn number(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Config(format!("{key}: '{value}' is not a finite number")))
}

fn count(key: &str, value: &str) -> Result<usize, CliError> {
    value
        .trim()
        .parse::<usize>()
        .map_err(|_| CliError::Config(format!("{key}: '{value}' is not a non-negative integer")))
}

fn boolean(key: &str, value: &str) -> Result<bool, CliError> {
    match value.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!(
            "{key}: '{value}' is not a boolean"
        ))),
    }
}

/// Parses `<number><unit>` with unit nm, um, μm, mm or m.
pub fn parse_gap(value: &str) -> Result<f64, CliError> {
    let v = value.trim();
    let split = v
        .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-')))
        .ok_or_else(|| CliError::Config(format!("gap '{v}' needs a unit (nm, um, mm or m)")))?;
    let (num, unit) = v.split_at(split);
    let per_metre = match unit.trim() {
        "nm" => 1e9,
        "um" | "μm" | "µm" => 1e6,
        "mm" => 1e3,
        "m" => 1.0,
        other => {
            return Err(CliError::Config(format!(
                "gap unit '{other}' not recognised"
            )))
        }
    };
    Ok(number("gap", num)? / per_metre)
}

impl RunConfig {
    /// Applies one setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key {
            "model" => self.model = ModelSpec::parse(value)?,
            "preset" => self.preset = Preset::parse(value)?,
            "omega_p_ev" => self.omega_p_ev = Some(number(key, value)?),
            "nu_mev" => self.nu_mev = Some(number(key, value)?),
            "gap" => self.gap = parse_gap(value)?,
            "tmin" => self.tmin = Some(number(key, value)?),
            "tmax" => self.tmax = Some(number(key, value)?),
            "tcount" => self.tcount = Some(count(key, value)?),
            "tspacing" => {
                self.tspacing = Some(match value {
                    "linear" => Spacing::Linear,
                    "log" => Spacing::Log,
                    _ => {
                        return Err(CliError::Config(format!(
                            "tspacing '{value}' must be linear or log"
                        )))
                    }
                })
            }
            "temperature" => self.temperature = number(key, value)?,
            "tol_inner" => self.tol_inner = number(key, value)?,
            "tol_sum" => self.tol_sum = number(key, value)?,
            "delta_tol" => self.delta_tol = number(key, value)?,
            "deep" => self.deep = boolean(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "workers" => self.workers = count(key, value)?,
            "zeta_min" => self.zeta_min = number(key, value)?,
            "zeta_max" => self.zeta_max = number(key, value)?,
            "zeta_count" => self.zeta_count = count(key, value)?,
            "kperp_min" => self.kperp_min = number(key, value)?,
            "kperp_max" => self.kperp_max = number(key, value)?,
            "kperp_count" => self.kperp_count = count(key, value)?,
            "c2_variant" => {
                self.c2_variant = match value {
                    "rounded" => C2Variant::Rounded,
                    "euler-maclaurin" => C2Variant::EulerMaclaurin,
                    "exact-zeta" => C2Variant::ExactZeta,
                    _ => {
                        return Err(CliError::Config(format!(
                            "c2_variant '{value}' must be rounded, euler-maclaurin or exact-zeta"
                        )))
                    }
                }
            }
            _ => return Err(CliError::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Applies a `key = value` file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    n + 1
                ))
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    /// Checks every invariant before any computation starts.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(self.gap > 0.0) {
            return bad(format!("gap must be positive, got {}", self.gap));
        }
        for (name, tol) in [
            ("tol_inner", self.tol_inner),
            ("tol_sum", self.tol_sum),
            ("delta_tol", self.delta_tol),
        ] {
            if !(tol > 0.0 && tol < 1e-2) {
                return bad(format!("{name} must lie in (0, 1e-2), got {tol}"));
            }
        }
        if let Some(c) = self.tcount {
            if c == 0 {
                return bad("temperature grid must be non-empty".into());
            }
        }
        if let (Some(a), Some(b)) = (self.tmin, self.tmax) {
            if b < a {
                return bad(format!("tmax {b} below tmin {a}"));
            }
        }
        if self.tmin.is_some_and(|t| t < 0.0) {
            return bad("tmin must be non-negative".into());
        }
        if !(self.temperature > 0.0) {
            return bad("temperature must be positive".into());
        }
        if self.zeta_count == 0 || self.kperp_count == 0 {
            return bad("reflection grids must be non-empty".into());
        }
        if !(self.zeta_min > 0.0 && self.zeta_max >= self.zeta_min) {
            return bad("reflection grid needs 0 < zeta_min <= zeta_max".into());
        }
        if !(self.kperp_min >= 0.0 && self.kperp_max >= self.kperp_min) {
            return bad("reflection grid needs 0 <= kperp_min <= kperp_max".into());
        }
        if self.omega_p_ev.is_some_and(|w| !(w > 0.0)) {
            return bad("omega_p_ev must be positive".into());
        }
        if self.nu_mev.is_some_and(|v| !(v > 0.0)) {
            return bad("nu_mev must be positive (nu = 0 is the plasma model)".into());
        }
        Ok(())
    }

    /// (ħω_p in eV, ħν in meV) after applying overrides to the preset.
    pub fn drude_energies(&self) -> (f64, f64) {
        let (wp, nu) = self.preset.energies();
        (self.omega_p_ev.unwrap_or(wp), self.nu_mev.unwrap_or(nu))
    }

    pub fn drude_parameters(&self) -> Result<DrudeParameters, CliError> {
        let (wp, nu) = self.drude_energies();
        DrudeParameters::from_ev(wp, nu * 1e-3, self.preset.name())
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn build_model(&self) -> Result<DispersionModel, CliError> {
        Ok(match &self.model {
            ModelSpec::Drude => DispersionModel::Drude(self.drude_parameters()?),
            ModelSpec::Plasma => {
                let (wp, _) = self.drude_energies();
                DispersionModel::plasma(ev_to_rad_per_s(wp))
                    .map_err(|e| CliError::Config(e.to_string()))?
            }
            ModelSpec::Ideal => DispersionModel::IdealMetal,
            ModelSpec::Vacuum => DispersionModel::Vacuum,
            ModelSpec::Table(path) => DispersionModel::Tabulated(read_table(path)?),
        })
    }

    pub fn geometry(&self) -> Result<Geometry, CliError> {
        Geometry::new(self.gap).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn lifshitz(&self) -> LifshitzConfig {
        LifshitzConfig {
            tol_inner: self.tol_inner,
            tol_sum: self.tol_sum,
            delta_tol: self.delta_tol,
            ..LifshitzConfig::default()
        }
    }

    /// Temperature grid with the given fallbacks for unset fields.
    pub fn grid(
        &self,
        min: f64,
        max: f64,
        n: usize,
        spacing: Spacing,
    ) -> Result<Vec<f64>, CliError> {
        let min = self.tmin.unwrap_or(min);
        let max = self.tmax.unwrap_or(max);
        let n = self.tcount.unwrap_or(n);
        let spacing = self.tspacing.unwrap_or(spacing);
        if n == 0 || max < min {
            return Err(CliError::Config("temperature grid is empty".into()));
        }
        if n == 1 {
            return Ok(vec![min]);
        }
        Ok(match spacing {
            Spacing::Linear => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        max
                    } else {
                        min + (max - min) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
            Spacing::Log => {
                if !(min > 0.0) {
                    return Err(CliError::Config("log spacing needs tmin > 0".into()));
                }
                casimir_core::analysis::log_spaced(min, max, n)
                    .map_err(|e| CliError::Config(e.to_string()))?
            }
        })
    }

    /// Settings that determine output content, one `key=value` per line.
    /// Worker count and output directory are left out: they do not change
    /// any number written.
    pub fn describe(&self) -> String {
        let (wp, nu) = self.drude_energies();
        let opt = |v: Option<f64>| v.map_or("default".to_string(), |x| format!("{x}"));
        let mut s = String::new();
        let _ = writeln!(s, "model={}", self.model.label());
        let _ = writeln!(s, "preset={}", self.preset.name());
        let _ = writeln!(s, "omega_p_ev={wp}");
        let _ = writeln!(s, "nu_mev={nu}");
        let _ = writeln!(s, "gap_m={:e}", self.gap);
        let _ = writeln!(s, "tmin={}", opt(self.tmin));
        let _ = writeln!(s, "tmax={}", opt(self.tmax));
        let _ = writeln!(
            s,
            "tcount={}",
            self.tcount.map_or("default".into(), |c| c.to_string())
        );
        let _ = writeln!(
            s,
            "tspacing={}",
            match self.tspacing {
                None => "default",
                Some(Spacing::Linear) => "linear",
                Some(Spacing::Log) => "log",
            }
        );
        let _ = writeln!(s, "temperature={}", self.temperature);
        let _ = writeln!(s, "tol_inner={:e}", self.tol_inner);
        let _ = writeln!(s, "tol_sum={:e}", self.tol_sum);
        let _ = writeln!(s, "delta_tol={:e}", self.delta_tol);
        let _ = writeln!(s, "deep={}", self.deep);
        let _ = writeln!(
            s,
            "zeta_grid={:e},{:e},{}",
            self.zeta_min, self.zeta_max, self.zeta_count
        );
        let _ = writeln!(
            s,
            "kperp_grid={:e},{:e},{}",
            self.kperp_min, self.kperp_max, self.kperp_count
        );
        let _ = writeln!(s, "c2_variant={}", self.c2_variant.name());
        s
    }
}

/// Reads `ζ ε` rows (whitespace or comma separated, `#` comments).
pub fn read_table(path: &Path) -> Result<TabulatedPermittivity, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read table {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 2 {
            return Err(CliError::Config(format!(
                "{}:{}: expected two columns (zeta, epsilon)",
                path.display(),
                n + 1
            )));
        }
        let z = number("zeta", fields[0])?;
        let e = number("epsilon", fields[1])?;
        rows.push((z, e));
    }
    TabulatedPermittivity::new(&rows)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_units() {
        assert_eq!(parse_gap("1000nm").unwrap(), 1e-6);
        assert_eq!(parse_gap("1um").unwrap(), 1e-6);
        assert_eq!(parse_gap("2.5 μm").unwrap(), 2.5e-6);
        assert!(parse_gap("1").is_err());
        assert!(parse_gap("1 furlong").is_err());
    }

    #[test]
    fn presets_and_overrides() {
        let mut c = RunConfig::default();
        assert_eq!(c.drude_energies(), (9.03, 34.5));
        c.set("preset", "gold-1").unwrap();
        assert_eq!(c.drude_energies(), (9.0, 35.0));
        c.set("nu_mev", "40").unwrap();
        assert_eq!(c.drude_energies(), (9.0, 40.0));
    }

    #[test]
    fn validation_catches_bad_tolerances() {
        let mut c = RunConfig::default();
        c.set("tol_inner", "0.5").unwrap();
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.set("tcount", "0").unwrap();
        assert!(c.validate().is_err());
        assert!(RunConfig::default().set("bogus", "1").is_err());
    }

    #[test]
    fn grids() {
        let c = RunConfig::default();
        let g = c.grid(0.0, 800.0, 5, Spacing::Linear).unwrap();
        assert_eq!(g, vec![0.0, 200.0, 400.0, 600.0, 800.0]);
        assert!(c.grid(0.0, 1.0, 3, Spacing::Log).is_err());
    }
}
