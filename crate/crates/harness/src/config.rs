//! Experiment configuration: defaults, the flat key-value file format, and
//! derived quantities (watt conversions, array geometries).
//!
//! The file format is one `key = value` pair per line, `#` starts a comment.
//! All decibel-valued keys carry a `_db`/`_dbm`/`_dbw`/`_dbi` suffix. Lists
//! are comma separated. Unknown keys are rejected so typos fail loudly.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::Path;

use irsbc_core::geometry::ArrayGeometry;
use nalgebra::Vector3;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// Which scheduler (and surface operation) a sum-rate curve uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Rbf,
    Dbf,
    Zfs,
    NoIrs,
    /// Coherent exhaustive IRS search on a `2^bits` phase grid.
    Coherent { bits: u8 },
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Rbf => write!(f, "rbf"),
            Scheme::Dbf => write!(f, "dbf"),
            Scheme::Zfs => write!(f, "zfs"),
            Scheme::NoIrs => write!(f, "no-irs"),
            Scheme::Coherent { bits } => write!(f, "coherent({bits})"),
        }
    }
}

impl Scheme {
    fn parse(s: &str) -> Result<Self, String> {
        let t = s.trim();
        match t {
            "rbf" => Ok(Scheme::Rbf),
            "dbf" => Ok(Scheme::Dbf),
            "zfs" => Ok(Scheme::Zfs),
            "no-irs" | "noirs" => Ok(Scheme::NoIrs),
            _ => {
                if let Some(rest) = t.strip_prefix("coherent(").and_then(|r| r.strip_suffix(')')) {
                    let bits: u8 =
                        rest.trim().parse().map_err(|_| format!("bad coherent bits in '{t}'"))?;
                    if bits == 0 {
                        return Err("coherent scheme needs at least one bit".into());
                    }
                    Ok(Scheme::Coherent { bits })
                } else {
                    Err(format!("unknown scheme '{t}' (rbf, dbf, zfs, no-irs, coherent(b))"))
                }
            }
        }
    }
}

/// Random-rotation phase resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    Continuous,
    Discrete,
}

/// Everything a run needs, mirroring the config file keys.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub scenario: String,
    pub seed: u64,
    pub threads: usize,

    // geometry
    pub wavelength_m: f64,
    pub bs_x_m: f64,
    pub bs_y_m: f64,
    pub irs_x_m: f64,
    pub irs_y_m: f64,
    pub bs_azimuth_rad: f64,
    pub bs_elevation_rad: f64,
    pub irs_azimuth_rad: f64,
    pub irs_elevation_rad: f64,
    pub n1: usize,
    /// Spacings; zero means "use the wavelength".
    pub d_bs_m: f64,
    pub d_irs1_m: f64,
    pub d_irs2_m: f64,
    pub alpha: f64,

    // radio
    pub noise_dbm: f64,
    pub pt_dbw: f64,
    pub bandwidth_hz: f64,
    pub element_gain_dbi: f64,
    pub penetration_irs_db: f64,
    pub penetration_direct_db: f64,
    pub intercept_c_db: f64,
    pub intercept_direct_db: f64,

    // population
    pub user_x_min_m: f64,
    pub user_x_max_m: f64,
    pub user_y_min_m: f64,
    pub user_y_max_m: f64,
    pub exponent_bs_irs: f64,
    pub exponent_irs_user: f64,
    pub exponent_direct: f64,
    pub path_grid: usize,

    // sum-rate campaign
    pub m: usize,
    pub n: usize,
    pub k_list: Vec<usize>,
    pub schemes: Vec<Scheme>,
    pub trials: usize,
    pub irs_mode: PhaseMode,
    pub irs_bits: u8,

    // energy-efficiency block
    pub ee_k: usize,
    pub ee_m_min: usize,
    pub ee_m_max: usize,
    pub ee_n_max: usize,
    pub ee_pmax_dbw: f64,
    pub ee_delta_w: f64,
    pub ee_eps: f64,
    pub ee_amp_a: f64,
    pub ee_p_bs_dbm: f64,
    pub ee_p_user_dbm: f64,
    pub ee_p_element_dbm: f64,
    pub ee_p_static_bs_dbm: f64,
    pub ee_p_static_irs_dbm: f64,
    pub ee_sweep_start_db: f64,
    pub ee_sweep_step_db: f64,
    pub ee_sweep_stop_db: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: "default".into(),
            seed: 1,
            threads: 0,

            wavelength_m: 0.5,
            bs_x_m: 0.0,
            bs_y_m: 0.0,
            irs_x_m: 0.0,
            irs_y_m: 50.0,
            bs_azimuth_rad: FRAC_PI_2,
            bs_elevation_rad: 0.0,
            irs_azimuth_rad: FRAC_PI_2,
            irs_elevation_rad: 0.0,
            n1: 8,
            d_bs_m: 0.0,
            d_irs1_m: 0.0,
            d_irs2_m: 0.0,
            alpha: 1.0,

            noise_dbm: -80.0,
            pt_dbw: 10.0,
            bandwidth_hz: 20e6,
            element_gain_dbi: 5.0,
            penetration_irs_db: 10.0,
            penetration_direct_db: 25.0,
            intercept_c_db: 30.0,
            intercept_direct_db: 33.0,

            user_x_min_m: -30.0,
            user_x_max_m: 30.0,
            user_y_min_m: 50.0,
            user_y_max_m: 130.0,
            exponent_bs_irs: 2.2,
            exponent_irs_user: 2.8,
            exponent_direct: 3.5,
            path_grid: 100,

            m: 2,
            n: 16,
            k_list: vec![4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 10000],
            schemes: vec![Scheme::Rbf, Scheme::Dbf, Scheme::Zfs, Scheme::NoIrs],
            trials: 500,
            irs_mode: PhaseMode::Continuous,
            irs_bits: 2,

            ee_k: 100_000,
            ee_m_min: 2,
            ee_m_max: 6,
            ee_n_max: 256,
            ee_pmax_dbw: 10.0,
            ee_delta_w: 0.01,
            ee_eps: 1e-6,
            ee_amp_a: 1.2,
            ee_p_bs_dbm: 20.0,
            ee_p_user_dbm: 10.0,
            ee_p_element_dbm: 10.0,
            ee_p_static_bs_dbm: 30.0,
            // 3 W; together with ee_k and the wavelength this default was
            // fixed once against the reference optimizer outputs
            ee_p_static_irs_dbm: 34.771212547196624,
            ee_sweep_start_db: -20.0,
            ee_sweep_step_db: 2.0,
            ee_sweep_stop_db: 14.0,
        }
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn dbw_to_watts(dbw: f64) -> f64 {
    10f64.powf(dbw / 10.0)
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_str_checked(&text)
    }

    pub fn from_str_checked(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let Some((key, value)) = stripped.split_once('=') else {
                return Err(ConfigError::Parse { line, msg: format!("expected key = value, got '{stripped}'") });
            };
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::Parse { line, msg: format!("duplicate key '{key}'") });
            }
            cfg.apply(key, value).map_err(|msg| ConfigError::Parse { line, msg })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn f(v: &str) -> Result<f64, String> {
            v.parse().map_err(|_| format!("'{v}' is not a number"))
        }
        fn u(v: &str) -> Result<usize, String> {
            v.parse().map_err(|_| format!("'{v}' is not a nonnegative integer"))
        }
        match key {
            "scenario" => self.scenario = value.to_string(),
            "seed" => self.seed = value.parse().map_err(|_| "bad seed".to_string())?,
            "threads" => self.threads = u(value)?,
            "wavelength_m" => self.wavelength_m = f(value)?,
            "bs_x_m" => self.bs_x_m = f(value)?,
            "bs_y_m" => self.bs_y_m = f(value)?,
            "irs_x_m" => self.irs_x_m = f(value)?,
            "irs_y_m" => self.irs_y_m = f(value)?,
            "bs_azimuth_rad" => self.bs_azimuth_rad = f(value)?,
            "bs_elevation_rad" => self.bs_elevation_rad = f(value)?,
            "irs_azimuth_rad" => self.irs_azimuth_rad = f(value)?,
            "irs_elevation_rad" => self.irs_elevation_rad = f(value)?,
            "n1" => self.n1 = u(value)?,
            "d_bs_m" => self.d_bs_m = f(value)?,
            "d_irs1_m" => self.d_irs1_m = f(value)?,
            "d_irs2_m" => self.d_irs2_m = f(value)?,
            "alpha" => self.alpha = f(value)?,
            "noise_dbm" => self.noise_dbm = f(value)?,
            "pt_dbw" => self.pt_dbw = f(value)?,
            "bandwidth_hz" => self.bandwidth_hz = f(value)?,
            "element_gain_dbi" => self.element_gain_dbi = f(value)?,
            "penetration_irs_db" => self.penetration_irs_db = f(value)?,
            "penetration_direct_db" => self.penetration_direct_db = f(value)?,
            "intercept_c_db" => self.intercept_c_db = f(value)?,
            "intercept_direct_db" => self.intercept_direct_db = f(value)?,
            "user_x_min_m" => self.user_x_min_m = f(value)?,
            "user_x_max_m" => self.user_x_max_m = f(value)?,
            "user_y_min_m" => self.user_y_min_m = f(value)?,
            "user_y_max_m" => self.user_y_max_m = f(value)?,
            "exponent_bs_irs" => self.exponent_bs_irs = f(value)?,
            "exponent_irs_user" => self.exponent_irs_user = f(value)?,
            "exponent_direct" => self.exponent_direct = f(value)?,
            "path_grid" => self.path_grid = u(value)?,
            "m" => self.m = u(value)?,
            "n" => self.n = u(value)?,
            "k_list" => {
                let mut out = Vec::new();
                for part in value.split(',') {
                    out.push(part.trim().parse().map_err(|_| format!("bad K '{part}'"))?);
                }
                self.k_list = out;
            }
            "schemes" => {
                let mut out = Vec::new();
                for part in value.split(',') {
                    out.push(Scheme::parse(part)?);
                }
                self.schemes = out;
            }
            "trials" => self.trials = u(value)?,
            "irs_mode" => {
                self.irs_mode = match value {
                    "continuous" => PhaseMode::Continuous,
                    "discrete" => PhaseMode::Discrete,
                    _ => return Err(format!("irs_mode must be continuous or discrete, got '{value}'")),
                }
            }
            "irs_bits" => self.irs_bits = value.parse().map_err(|_| "bad irs_bits".to_string())?,
            "ee_k" => self.ee_k = u(value)?,
            "ee_m_min" => self.ee_m_min = u(value)?,
            "ee_m_max" => self.ee_m_max = u(value)?,
            "ee_n_max" => self.ee_n_max = u(value)?,
            "ee_pmax_dbw" => self.ee_pmax_dbw = f(value)?,
            "ee_delta_w" => self.ee_delta_w = f(value)?,
            "ee_eps" => self.ee_eps = f(value)?,
            "ee_amp_a" => self.ee_amp_a = f(value)?,
            "ee_p_bs_dbm" => self.ee_p_bs_dbm = f(value)?,
            "ee_p_user_dbm" => self.ee_p_user_dbm = f(value)?,
            "ee_p_element_dbm" => self.ee_p_element_dbm = f(value)?,
            "ee_p_static_bs_dbm" => self.ee_p_static_bs_dbm = f(value)?,
            "ee_p_static_irs_dbm" => self.ee_p_static_irs_dbm = f(value)?,
            "ee_sweep_start_db" => self.ee_sweep_start_db = f(value)?,
            "ee_sweep_step_db" => self.ee_sweep_step_db = f(value)?,
            "ee_sweep_stop_db" => self.ee_sweep_stop_db = f(value)?,
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let err = |msg: String| Err(ConfigError::Invalid(msg));
        if self.wavelength_m <= 0.0 {
            return err("wavelength must be positive".into());
        }
        if self.n1 == 0 || self.m == 0 || self.n == 0 {
            return err("n1, m and n must be at least 1".into());
        }
        if self.n % self.n1 != 0 {
            return err(format!("n = {} must be a multiple of n1 = {}", self.n, self.n1));
        }
        if self.ee_n_max % self.n1 != 0 {
            return err(format!("ee_n_max = {} must be a multiple of n1 = {}", self.ee_n_max, self.n1));
        }
        if self.k_list.is_empty() {
            return err("k_list must not be empty".into());
        }
        if self.k_list.windows(2).any(|w| w[1] <= w[0]) {
            return err("k_list must be strictly ascending".into());
        }
        if self.trials == 0 {
            return err("trials must be at least 1".into());
        }
        if self.user_x_min_m > self.user_x_max_m || self.user_y_min_m > self.user_y_max_m {
            return err("user region bounds are inverted".into());
        }
        if self.path_grid == 0 {
            return err("path_grid must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return err("alpha must be in [0, 1]".into());
        }
        if self.ee_m_min == 0 || self.ee_m_min > self.ee_m_max {
            return err("need 1 <= ee_m_min <= ee_m_max".into());
        }
        if self.ee_k < 3 {
            return err("ee_k must be at least 3".into());
        }
        if self.ee_delta_w <= 0.0 || self.ee_eps <= 0.0 {
            return err("ee_delta_w and ee_eps must be positive".into());
        }
        if self.ee_sweep_step_db <= 0.0 {
            return err("ee_sweep_step_db must be positive".into());
        }
        for field in [
            self.noise_dbm,
            self.pt_dbw,
            self.element_gain_dbi,
            self.penetration_irs_db,
            self.penetration_direct_db,
            self.intercept_c_db,
            self.intercept_direct_db,
            self.ee_p_bs_dbm,
            self.ee_p_user_dbm,
            self.ee_p_element_dbm,
            self.ee_p_static_bs_dbm,
            self.ee_p_static_irs_dbm,
        ] {
            if !field.is_finite() {
                return err("all dB fields must be finite".into());
            }
        }
        Ok(())
    }

    pub fn noise_w(&self) -> f64 {
        dbm_to_watts(self.noise_dbm)
    }

    pub fn pt_w(&self) -> f64 {
        dbw_to_watts(self.pt_dbw)
    }

    fn spacing(&self, v: f64) -> f64 {
        if v > 0.0 {
            v
        } else {
            self.wavelength_m
        }
    }

    pub fn bs_origin(&self) -> Vector3<f64> {
        Vector3::new(self.bs_x_m, self.bs_y_m, 0.0)
    }

    pub fn irs_origin(&self) -> Vector3<f64> {
        Vector3::new(self.irs_x_m, self.irs_y_m, 0.0)
    }

    /// BS ULA with `m` antennas.
    pub fn bs_array(&self, m: usize) -> irsbc_core::Result<ArrayGeometry> {
        ArrayGeometry::ula(
            self.bs_origin(),
            self.bs_azimuth_rad,
            self.bs_elevation_rad,
            m,
            self.spacing(self.d_bs_m),
            self.wavelength_m,
        )
    }

    /// IRS URA with `n` elements laid out as `n1 x (n / n1)`.
    pub fn irs_array(&self, n: usize) -> irsbc_core::Result<ArrayGeometry> {
        ArrayGeometry::ura(
            self.irs_origin(),
            self.irs_azimuth_rad,
            self.irs_elevation_rad,
            self.n1,
            n / self.n1,
            self.spacing(self.d_irs1_m),
            self.spacing(self.d_irs2_m),
            self.wavelength_m,
        )
    }

    pub fn power_model(&self) -> irsbc_core::Result<irsbc_core::ee::PowerModel> {
        irsbc_core::ee::PowerModel::new(
            self.ee_amp_a,
            dbm_to_watts(self.ee_p_bs_dbm),
            dbm_to_watts(self.ee_p_user_dbm),
            dbm_to_watts(self.ee_p_element_dbm),
            dbm_to_watts(self.ee_p_static_bs_dbm),
            dbm_to_watts(self.ee_p_static_irs_dbm),
        )
    }

    pub fn ee_sweep_db(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut v = self.ee_sweep_start_db;
        while v <= self.ee_sweep_stop_db + 1e-9 {
            out.push(v);
            v += self.ee_sweep_step_db;
        }
        out
    }
}
