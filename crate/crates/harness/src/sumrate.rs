//! Monte Carlo sum-rate campaigns.
//!
//! One `CurvePoint` per `(K, scheme)` pair: trials draw fresh IRS phases,
//! fading and (for RBF) beams from per-trial seed lanes, schedule one
//! coherence interval and record the instantaneous sum rate. Trials fan out
//! over a rayon pool; the reduction runs in trial order, so results do not
//! depend on the worker count.

use rayon::prelude::*;

use irsbc_core::analysis::{scaling_dbf, scaling_no_irs_rbf, scaling_rbf, ScalingParams};
use irsbc_core::beamforming::{
    coherent_exhaustive, dbf_matrix, isotropic_beams, rbf_schedule, zfs_schedule, BeamformerSet,
};
use irsbc_core::channel::{compose_channel, covariance, draw_fading, draw_irs_phases, CovarianceModel, IrsMode};
use irsbc_core::rng::{lane, Purpose};
use irsbc_core::Result;

use crate::config::{ExperimentConfig, PhaseMode, Scheme};
use crate::pathloss::{mean_path_gains, PathGains};

/// One point of a sum-rate curve.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub k: usize,
    pub scheme: Scheme,
    /// Sample mean of the instantaneous sum rate (natural-log units).
    pub mean_rate: f64,
    pub std_err: f64,
    /// Matching scaling-law value, where one is defined for the scheme and
    /// numerically evaluable.
    pub theorem: Option<f64>,
}

fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn irs_mode(cfg: &ExperimentConfig) -> IrsMode {
    match cfg.irs_mode {
        PhaseMode::Continuous => IrsMode::Continuous,
        PhaseMode::Discrete => IrsMode::Discrete { bits: cfg.irs_bits },
    }
}

struct Campaign {
    h1: irsbc_core::CMat,
    cov: CovarianceModel,
    dbf: BeamformerSet,
    gains: PathGains,
    pt: f64,
    noise: f64,
    alphas: Vec<f64>,
}

impl Campaign {
    fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let bs = cfg.bs_array(cfg.m)?;
        let irs = cfg.irs_array(cfg.n)?;
        let h1 = irsbc_core::geometry::los_channel(&bs, &irs)?.h1;
        let gains = mean_path_gains(cfg)?;
        let alphas = vec![cfg.alpha; cfg.n];
        let cov = covariance(&h1, &alphas, gains.beta_r, gains.beta_d)?;
        let dbf = dbf_matrix(&cov);
        Ok(Self { h1, cov, dbf, gains, pt: cfg.pt_w(), noise: cfg.noise_w(), alphas })
    }

    /// Instantaneous sum rate of one trial.
    fn trial(&self, cfg: &ExperimentConfig, scheme: Scheme, k: usize, trial: u64) -> Result<f64> {
        let seed = cfg.seed;
        match scheme {
            Scheme::NoIrs => {
                let fading = draw_fading(cfg.m, cfg.n, k, &mut lane(seed, trial, Purpose::Fading))?;
                let sd = self.gains.beta_d.sqrt();
                let users: Vec<_> =
                    fading.hd.iter().map(|hd| hd.map(|v| v * sd)).collect();
                let beams = isotropic_beams(cfg.m, &mut lane(seed, trial, Purpose::Beams))?;
                Ok(rbf_schedule(&users, &beams, self.pt, self.noise)?.sum_rate)
            }
            Scheme::Coherent { bits } => {
                let fading = draw_fading(cfg.m, cfg.n, k, &mut lane(seed, trial, Purpose::Fading))?;
                let (_, out) = coherent_exhaustive(
                    &self.h1,
                    &self.alphas,
                    bits,
                    &fading,
                    self.gains.beta_r,
                    self.gains.beta_d,
                    &self.dbf,
                    self.pt,
                    self.noise,
                )?;
                Ok(out.sum_rate)
            }
            _ => {
                let irs =
                    draw_irs_phases(cfg.n, irs_mode(cfg), &mut lane(seed, trial, Purpose::IrsPhases))?;
                let fading = draw_fading(cfg.m, cfg.n, k, &mut lane(seed, trial, Purpose::Fading))?;
                let re =
                    compose_channel(&self.h1, &irs, &fading, self.gains.beta_r, self.gains.beta_d)?;
                match scheme {
                    Scheme::Dbf => Ok(rbf_schedule(&re.users, &self.dbf, self.pt, self.noise)?.sum_rate),
                    Scheme::Rbf => {
                        let beams = isotropic_beams(cfg.m, &mut lane(seed, trial, Purpose::Beams))?;
                        Ok(rbf_schedule(&re.users, &beams, self.pt, self.noise)?.sum_rate)
                    }
                    Scheme::Zfs => Ok(zfs_schedule(&re.users, self.pt, self.noise)?.sum_rate),
                    _ => unreachable!(),
                }
            }
        }
    }

    fn theorem(&self, cfg: &ExperimentConfig, scheme: Scheme, k: usize) -> Option<f64> {
        if k < 3 {
            return None;
        }
        let params = ScalingParams::new(&self.cov, k, self.pt, self.noise);
        match scheme {
            Scheme::Dbf => scaling_dbf(&params).ok(),
            Scheme::Rbf => scaling_rbf(&params).ok(),
            Scheme::NoIrs => scaling_no_irs_rbf(cfg.m, k, self.pt, self.noise, self.gains.beta_d).ok(),
            _ => None,
        }
    }
}

/// Runs the configured campaign and returns one point per `(K, scheme)`.
pub fn run_sumrate(cfg: &ExperimentConfig) -> Result<Vec<CurvePoint>> {
    let campaign = Campaign::new(cfg)?;
    let mut points = Vec::new();
    for &k in &cfg.k_list {
        for &scheme in &cfg.schemes {
            if k < cfg.m {
                continue; // fewer users than beams is outside every scheduler's domain
            }
            let samples: Vec<f64> = (0..cfg.trials as u64)
                .into_par_iter()
                .map(|t| campaign.trial(cfg, scheme, k, t))
                .collect::<Result<Vec<_>>>()?;
            let (mean_rate, std_err) = mean_and_se(&samples);
            points.push(CurvePoint {
                k,
                scheme,
                mean_rate,
                std_err,
                theorem: campaign.theorem(cfg, scheme, k),
            });
        }
    }
    Ok(points)
}
