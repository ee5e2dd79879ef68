//! Self-contained oracle checks, runnable from the CLI and reused by the
//! acceptance suite. Every check recomputes its target through an
//! independent route (dense eigensolver, Monte Carlo, quadrature, brute-force
//! scans) and reports the measured deviation against its threshold.

use irsbc_core::analysis::{
    am_matrix, expected_log_beam_gain, growth_limit, max_eigpair, SinrLaw,
};
use irsbc_core::beamforming::dbf_matrix;
use irsbc_core::channel::{compose_channel, covariance, draw_fading, draw_irs_phases, IrsMode};
use irsbc_core::ee::{ee_upper_bound, leibniz_det, opt_m_bound, opt_n_bound};
use irsbc_core::linalg::hermitian_eig_ascending;
use irsbc_core::rng::{lane, Purpose};
use irsbc_core::{CMat, CVec, Cplx, Result};
use nalgebra::DVector;
use rand::Rng;

use crate::config::ExperimentConfig;
use crate::eerun::build_ee_problem;
use crate::pathloss::mean_path_gains;

/// Outcome of one oracle check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    /// Measured deviation (smaller is better).
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, measured: f64, threshold: f64, detail: String) -> Self {
        Self { name, measured, threshold, pass: measured < threshold, detail }
    }
}

fn unit_beam<R: Rng + ?Sized>(m: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(m, |_, _| {
        let re: f64 = rng.sample(rand_distr::StandardNormal);
        let im: f64 = rng.sample(rand_distr::StandardNormal);
        Cplx::new(re, im)
    });
    let n = v.norm();
    v.unscale(n)
}

/// Closed-form eigenpair residual for one instance: the whitened operator's
/// dense top eigenpair must be `(1, phi_bar)` and the closed-form vector's
/// Rayleigh quotient must reproduce the closed-form eigenvalue, for every x.
pub fn lemma3_residual(lambda: &DVector<f64>, phi_bar: &CVec, xs: &[f64]) -> Result<f64> {
    let m = lambda.len();
    let (top, q) = max_eigpair(phi_bar, lambda)?;
    let mut worst = (q.norm() - 1.0).abs();
    let mut rayleigh_ref = None;
    for &x in xs {
        let a = am_matrix(x, phi_bar, lambda);
        let white =
            CMat::from_fn(m, m, |i, j| a[(i, j)] / Cplx::new((lambda[i] * lambda[j]).sqrt(), 0.0));
        let (wvals, wvecs) = hermitian_eig_ascending(&white);
        worst = worst.max((wvals[m - 1] - 1.0).abs());
        let align = phi_bar.dotc(&wvecs.column(m - 1).clone_owned()).norm();
        worst = worst.max((align - 1.0).abs());
        let rq = irsbc_core::linalg::quad_form(&q, &a);
        worst = worst.max((rq - top).abs() / top.max(1.0));
        if let Some(r0) = rayleigh_ref {
            let dx: f64 = rq - r0;
            worst = worst.max(dx.abs() / top.max(1.0));
        } else {
            rayleigh_ref = Some(rq);
        }
    }
    Ok(worst)
}

fn check_lemma3(seed: u64) -> Result<CheckResult> {
    let mut rng = lane(seed, 0, Purpose::Other(1));
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = 2 + (rng.gen::<u64>() % 5) as usize;
        let lambda = DVector::from_fn(m, |i, _| 0.1 + 0.6 * i as f64 + rng.gen::<f64>() * 0.4);
        let phi = unit_beam(m, &mut rng);
        worst = worst.max(lemma3_residual(&lambda, &phi, &[0.1, 1.0, 10.0])?);
    }
    Ok(CheckResult::new(
        "lemma3-eigpair",
        worst,
        1e-10,
        "closed-form eigenpair vs dense Hermitian eigensolver, 100 random instances".into(),
    ))
}

fn table_cov(cfg: &ExperimentConfig) -> Result<irsbc_core::channel::CovarianceModel> {
    let bs = cfg.bs_array(cfg.m)?;
    let irs = cfg.irs_array(cfg.n)?;
    let h1 = irsbc_core::geometry::los_channel(&bs, &irs)?.h1;
    let gains = mean_path_gains(cfg)?;
    covariance(&h1, &vec![cfg.alpha; cfg.n], gains.beta_r, gains.beta_d)
}

fn check_lemma2_ks(cfg: &ExperimentConfig, seed: u64) -> Result<CheckResult> {
    let bs = cfg.bs_array(2)?;
    let irs = cfg.irs_array(cfg.n)?;
    let h1 = irsbc_core::geometry::los_channel(&bs, &irs)?.h1;
    let gains = mean_path_gains(cfg)?;
    let cov = covariance(&h1, &vec![cfg.alpha; cfg.n], gains.beta_r, gains.beta_d)?;
    let beams = dbf_matrix(&cov);
    let law = SinrLaw::new(&cov, &beams, 1, cfg.pt_w(), cfg.noise_w())?;
    let draws = 100_000usize;
    let chunk = 500;
    let mut rng = lane(seed, 1, Purpose::Fading);
    let mut samples = Vec::with_capacity(draws);
    for _ in 0..draws / chunk {
        let phases = draw_irs_phases(cfg.n, IrsMode::Continuous, &mut rng)?;
        let fading = draw_fading(2, cfg.n, chunk, &mut rng)?;
        let re = compose_channel(&h1, &phases, &fading, gains.beta_r, gains.beta_d)?;
        for h in &re.users {
            samples.push(irsbc_core::beamforming::sinr(h, &beams, 1, cfg.pt_w(), cfg.noise_w()));
        }
    }
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut ks = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = law.cdf(x)?;
        ks = ks.max((f - i as f64 / n).abs()).max((f - (i + 1) as f64 / n).abs());
    }
    Ok(CheckResult::new(
        "lemma2-cdf-ks",
        ks,
        0.01,
        format!("empirical SINR CDF from {draws} composed channels vs closed form"),
    ))
}

fn check_appendix_expectation(seed: u64) -> Result<CheckResult> {
    let mut worst = 0.0f64;
    for lams in [vec![0.5, 1.5], vec![0.5, 1.0, 1.5]] {
        let m = lams.len();
        let lam = DVector::from_vec(lams);
        let closed = expected_log_beam_gain(&lam)?;
        let draws = 1_000_000usize;
        let mut rng = lane(seed, m as u64, Purpose::Other(2));
        let mut acc = 0.0;
        for _ in 0..draws {
            let v = CVec::from_fn(m, |_, _| {
                let re: f64 = rng.sample(rand_distr::StandardNormal);
                let im: f64 = rng.sample(rand_distr::StandardNormal);
                Cplx::new(re, im)
            });
            let n2 = v.norm_squared();
            let mut quad = 0.0;
            for i in 0..m {
                quad += v[i].norm_sqr() / n2 / lam[i];
            }
            acc += (1.0 / quad).ln();
        }
        worst = worst.max((closed - acc / draws as f64).abs());
    }
    Ok(CheckResult::new(
        "appendix-log-gain",
        worst,
        1e-2,
        "closed-form isotropic log beam gain vs 1e6-draw Monte Carlo, M in {2,3}".into(),
    ))
}

fn check_leibniz(cfg: &ExperimentConfig) -> Result<CheckResult> {
    let bs = cfg.bs_array(4)?;
    let irs = cfg.irs_array(cfg.n)?;
    let h1 = irsbc_core::geometry::los_channel(&bs, &irs)?.h1;
    let gains = mean_path_gains(cfg)?;
    let mut worst = 0.0f64;
    for m in 1..=4 {
        let sub = h1.view((0, 0), (m, cfg.n)).clone_owned();
        let cov = covariance(&sub, &vec![cfg.alpha; cfg.n], gains.beta_r, gains.beta_d)?;
        let got = leibniz_det(cov.r_bar())?;
        let want = cov.det_rbar();
        worst = worst.max((got - want).abs() / want.abs().max(1e-300));
    }
    Ok(CheckResult::new(
        "leibniz-det",
        worst,
        1e-9,
        "permutation-sum determinant vs eigenvalue product, M <= 4".into(),
    ))
}

fn check_covariance_fidelity(cfg: &ExperimentConfig, seed: u64) -> Result<CheckResult> {
    let cov = table_cov(cfg)?;
    let bs = cfg.bs_array(cfg.m)?;
    let irs = cfg.irs_array(cfg.n)?;
    let h1 = irsbc_core::geometry::los_channel(&bs, &irs)?.h1;
    let trials = 100_000usize;
    let chunk = 500;
    let mut acc = CMat::zeros(cfg.m, cfg.m);
    let mut rng = lane(seed, 2, Purpose::Fading);
    for _ in 0..trials / chunk {
        let phases = draw_irs_phases(cfg.n, IrsMode::Continuous, &mut rng)?;
        let fading = draw_fading(cfg.m, cfg.n, chunk, &mut rng)?;
        let re = compose_channel(&h1, &phases, &fading, cov.beta_r(), cov.beta_d())?;
        for h in &re.users {
            for i in 0..cfg.m {
                for j in 0..cfg.m {
                    acc[(i, j)] += h[i] * h[j].conj();
                }
            }
        }
    }
    acc /= Cplx::new(trials as f64, 0.0);
    let mut worst = 0.0f64;
    for i in 0..cfg.m {
        for j in 0..cfg.m {
            worst = worst.max((acc[(i, j)] - cov.r()[(i, j)]).norm() / cov.normalizer());
        }
    }
    Ok(CheckResult::new(
        "covariance-fidelity",
        worst,
        0.03,
        format!("empirical E[h h'] over {trials} composed channels vs closed form"),
    ))
}

fn check_growth_ratio(cfg: &ExperimentConfig) -> Result<CheckResult> {
    let cov = table_cov(cfg)?;
    let beams = dbf_matrix(&cov);
    let mut worst = 0.0f64;
    for m in 0..cfg.m {
        let law = SinrLaw::new(&cov, &beams, m, cfg.pt_w(), cfg.noise_w())?;
        let c = growth_limit(&law)?;
        let x = 50.0 * c;
        let ratio = law.sf(x)? / law.pdf(x)?;
        worst = worst.max((ratio / c - 1.0).abs());
    }
    Ok(CheckResult::new(
        "growth-limit",
        worst,
        0.02,
        "tail ratio (1-F)/f at 50x the growth scale vs the closed-form limit".into(),
    ))
}

fn check_bound_steps(cfg: &ExperimentConfig, seed: u64) -> Result<CheckResult> {
    let prob = build_ee_problem(cfg)?;
    let mut rng = lane(seed, 3, Purpose::Other(3));
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let pt = 0.2 + rng.gen::<f64>() * (prob.p_max - 0.2).max(0.1);
        let n = 1 + (rng.gen::<u64>() as usize) % prob.n_max;
        let m_got = opt_m_bound(n, pt, &prob);
        let best_m = (prob.m_min..=prob.m_max)
            .map(|m| ee_upper_bound(m, n, pt, &prob))
            .fold(f64::MIN, f64::max);
        worst = worst.max((ee_upper_bound(m_got, n, pt, &prob) - best_m).abs());
        let m = prob.m_min + (rng.gen::<u64>() as usize) % (prob.m_max - prob.m_min + 1);
        let n_got = opt_n_bound(m, pt, &prob);
        let best_n =
            (1..=prob.n_max).map(|n| ee_upper_bound(m, n, pt, &prob)).fold(f64::MIN, f64::max);
        worst = worst.max((ee_upper_bound(m, n_got, pt, &prob) - best_n).abs());
    }
    Ok(CheckResult::new(
        "bound-coordinate-steps",
        worst,
        1e-12,
        "closed-form antenna/element steps vs exhaustive integer scans of the bound".into(),
    ))
}

/// Runs the full oracle suite with the configured geometry.
pub fn run_validation(cfg: &ExperimentConfig) -> Result<Vec<CheckResult>> {
    let seed = cfg.seed;
    Ok(vec![
        check_lemma3(seed)?,
        check_lemma2_ks(cfg, seed)?,
        check_appendix_expectation(seed)?,
        check_leibniz(cfg)?,
        check_covariance_fidelity(cfg, seed)?,
        check_growth_ratio(cfg)?,
        check_bound_steps(cfg, seed)?,
    ])
}
