//! Energy-efficiency campaigns: the four solver rows across a `P_max` sweep.

use irsbc_core::ee::{
    algorithm1, algorithm2, default_start, exhaustive_ee, exhaustive_ee_no_irs, EEProblem,
    EESolution,
};
use irsbc_core::Result;

use crate::config::{dbw_to_watts, ExperimentConfig};
use crate::pathloss::mean_path_gains;

/// One row of the EE table: a solver's answer at one `P_max`.
#[derive(Debug, Clone)]
pub struct EeRow {
    pub pmax_db: f64,
    pub solver: String,
    pub m: usize,
    pub n: usize,
    pub pt_w: f64,
    pub ee_mbits_per_j: f64,
    pub iterations: usize,
}

impl EeRow {
    fn from_solution(pmax_db: f64, sol: &EESolution) -> Self {
        Self {
            pmax_db,
            solver: sol.solver.to_string(),
            m: sol.m,
            n: sol.n,
            pt_w: sol.pt,
            ee_mbits_per_j: sol.ee,
            iterations: sol.iterations,
        }
    }
}

/// Builds the EE problem for the configured geometry at its full array sizes.
pub fn build_ee_problem(cfg: &ExperimentConfig) -> Result<EEProblem> {
    let bs = cfg.bs_array(cfg.ee_m_max)?;
    let irs = cfg.irs_array(cfg.ee_n_max)?;
    let h1 = irsbc_core::geometry::los_channel(&bs, &irs)?.h1;
    let gains = mean_path_gains(cfg)?;
    EEProblem::new(
        &h1,
        cfg.power_model()?,
        gains.beta_r,
        gains.beta_d,
        cfg.alpha,
        cfg.ee_k,
        cfg.noise_w(),
        cfg.ee_m_min,
        dbw_to_watts(cfg.ee_pmax_dbw),
        cfg.bandwidth_hz,
    )
}

/// Solves all four rows at each sweep point. The final sweep entry is the
/// configured `ee_pmax_dbw` if the grid does not already include it.
pub fn run_ee(cfg: &ExperimentConfig) -> Result<Vec<EeRow>> {
    let base = build_ee_problem(cfg)?;
    let mut sweep = cfg.ee_sweep_db();
    if sweep.iter().all(|&v| (v - cfg.ee_pmax_dbw).abs() > 1e-9) {
        sweep.push(cfg.ee_pmax_dbw);
    }
    let mut rows = Vec::with_capacity(sweep.len() * 4);
    for &pmax_db in &sweep {
        let mut prob = base.clone();
        prob.p_max = dbw_to_watts(pmax_db);
        let start = default_start(&prob);
        let ex = exhaustive_ee(&prob, cfg.ee_delta_w)?;
        let a1 = algorithm1(&prob, cfg.ee_eps, start)?;
        let a2 = algorithm2(&prob, cfg.ee_eps, start)?;
        let ni = exhaustive_ee_no_irs(&prob, cfg.ee_delta_w)?;
        rows.push(EeRow::from_solution(pmax_db, &ex));
        rows.push(EeRow::from_solution(pmax_db, &a1));
        rows.push(EeRow::from_solution(pmax_db, &a2));
        rows.push(EeRow::from_solution(pmax_db, &ni));
    }
    Ok(rows)
}
