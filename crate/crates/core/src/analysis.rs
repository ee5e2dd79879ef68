//! Closed-form machinery behind the large-user scaling laws.
//!
//! For a fixed beam set the per-beam SINR of a correlated Gaussian channel
//! has an explicit CDF/PDF driven by the eigenvalues of the rank-one-update
//! matrix `A_m(x) = (1+x) L^{1/2} pb pb' L^{1/2} - x L`. Its largest
//! eigenvalue does not depend on `x` and equals `1/(pb' L^-1 pb)`, which sets
//! the extreme-value growth scale and hence the multi-user diversity term of
//! every scaling law. Everything here is evaluated on the unit-diagonal
//! covariance with an effective SNR `rho_eff = P_T/(M sigma^2) * normalizer`;
//! this is exactly equivalent to the unnormalized form because the SINR law
//! only depends on the product of the SNR and the covariance scale.
//!
//! All rates are in natural-log units.

use nalgebra::DVector;

use crate::beamforming::BeamformerSet;
use crate::channel::CovarianceModel;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig_ascending, quad_form};
use crate::{CMat, CVec, Cplx};

/// Minimum eigenvalue spacing before the partial-fraction forms are refused.
pub const EIGEN_SPACING_TOL: f64 = 1e-9;

/// The SINR distribution of one beam for a fixed beam set.
#[derive(Debug, Clone)]
pub struct SinrLaw {
    /// Ascending eigenvalues of the normalized covariance.
    lambda_bar: DVector<f64>,
    /// Beam rotated into eigencoordinates, `pb = U phi_m`.
    phi_bar: CVec,
    /// `P_T/(M sigma^2)` times the covariance normalizer.
    rho_eff: f64,
    det_rbar: f64,
}

impl SinrLaw {
    /// Law of `gamma_{k,m}` for beam `m` of `beams` under covariance `cov`.
    pub fn new(
        cov: &CovarianceModel,
        beams: &BeamformerSet,
        m: usize,
        pt: f64,
        noise: f64,
    ) -> Result<Self> {
        if pt <= 0.0 || noise <= 0.0 {
            return Err(Error::InvalidArgument("powers must be positive".into()));
        }
        if m >= beams.m() || beams.m() != cov.m() {
            return Err(Error::InvalidArgument("beam index / dimension mismatch".into()));
        }
        let phi_bar = cov.u() * beams.beam(m);
        let rho = pt / (cov.m() as f64 * noise);
        Self::from_parts(cov.lambda_bar().clone(), phi_bar, rho * cov.normalizer())
    }

    /// Directly from eigenvalues, a rotated unit beam and an effective SNR.
    pub fn from_parts(lambda_bar: DVector<f64>, phi_bar: CVec, rho_eff: f64) -> Result<Self> {
        if rho_eff <= 0.0 {
            return Err(Error::InvalidArgument("effective SNR must be positive".into()));
        }
        if lambda_bar.len() != phi_bar.len() {
            return Err(Error::InvalidArgument("dimension mismatch".into()));
        }
        if lambda_bar.iter().any(|&v| v <= 0.0) {
            return Err(Error::NotPsd("law needs strictly positive eigenvalues".into()));
        }
        if (phi_bar.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidArgument("beam must have unit norm".into()));
        }
        let det_rbar = lambda_bar.iter().product();
        Ok(Self { lambda_bar, phi_bar, rho_eff, det_rbar })
    }

    pub fn m(&self) -> usize {
        self.lambda_bar.len()
    }

    pub fn rho_eff(&self) -> f64 {
        self.rho_eff
    }

    pub fn lambda_bar(&self) -> &DVector<f64> {
        &self.lambda_bar
    }

    pub fn phi_bar(&self) -> &CVec {
        &self.phi_bar
    }

    fn eigensystem(&self, x: f64) -> Result<(DVector<f64>, CMat)> {
        let a = am_matrix(x, &self.phi_bar, &self.lambda_bar);
        let (vals, vecs) = hermitian_eig_ascending(&a);
        let m = vals.len();
        if m > 1 {
            let gap = vals[m - 1] - vals[m - 2];
            if gap < EIGEN_SPACING_TOL * vals[m - 1].abs().max(1.0) {
                return Err(Error::DegenerateEigenvalues(format!(
                    "top eigenvalues of A({x}) separated by only {gap:.3e}; perturb the covariance"
                )));
            }
        }
        Ok((vals, vecs))
    }

    /// Survival function `1 - F_s(x)`, computed without the cancellation that
    /// flattens the deep tail to zero in `f64`.
    pub fn sf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Err(Error::InvalidArgument("the SINR law is evaluated for x > 0".into()));
        }
        let (vals, _) = self.eigensystem(x)?;
        let m = vals.len();
        let top = vals[m - 1];
        let mut prod = top / self.det_rbar;
        for i in 0..m - 1 {
            prod *= vals[i] * top / (x * (vals[i] - top));
        }
        Ok(prod * (-x / (self.rho_eff * top)).exp())
    }

    /// CDF `F_s(x)` for `x > 0`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(1.0 - self.sf(x)?)
    }

    /// PDF `f_s(x)` for `x > 0`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Err(Error::InvalidArgument("the SINR law is evaluated for x > 0".into()));
        }
        let (vals, vecs) = self.eigensystem(x)?;
        let m = vals.len();
        let top = vals[m - 1];
        let sq = self.lambda_bar.map(|v| v.sqrt());
        // B = L^{1/2} (pb pb' - I) L^{1/2}, C = L^{1/2} pb pb' L^{1/2}
        let c_mat =
            CMat::from_fn(m, m, |i, j| self.phi_bar[i] * self.phi_bar[j].conj() * (sq[i] * sq[j]));
        let b_mat = CMat::from_fn(m, m, |i, j| {
            let id = if i == j { Cplx::new(self.lambda_bar[i], 0.0) } else { Cplx::new(0.0, 0.0) };
            c_mat[(i, j)] - id
        });
        let q_top = vecs.column(m - 1).clone_owned();
        let c_top = quad_form(&q_top, &c_mat);
        let mut bracket = c_top / (self.rho_eff * top) - quad_form(&q_top, &b_mat);
        for i in 0..m - 1 {
            let qi = vecs.column(i).clone_owned();
            let ci = quad_form(&qi, &c_mat);
            bracket -= (top * top * ci - vals[i] * vals[i] * c_top) / (vals[i] * x * (vals[i] - top));
        }
        let mut prod = 1.0 / self.det_rbar;
        for i in 0..m - 1 {
            prod *= vals[i] * top / (x * (vals[i] - top));
        }
        Ok(prod * (-x / (self.rho_eff * top)).exp() * bracket)
    }
}

/// The rank-one-update matrix `A_m(x)` in eigencoordinates.
pub fn am_matrix(x: f64, phi_bar: &CVec, lambda_bar: &DVector<f64>) -> CMat {
    let m = lambda_bar.len();
    let sq = lambda_bar.map(|v| v.sqrt());
    CMat::from_fn(m, m, |i, j| {
        let outer = phi_bar[i] * phi_bar[j].conj() * (sq[i] * sq[j]) * (1.0 + x);
        let diag = if i == j { Cplx::new(x * lambda_bar[i], 0.0) } else { Cplx::new(0.0, 0.0) };
        outer - diag
    })
}

/// The closed-form top eigenpair of the `A_m(x)` family:
/// `lambda_max = 1/(pb' L^-1 pb)` with eigenvector `L^{-1/2} pb` normalized.
///
/// The pair is independent of `x`. Exactly, for every `x >= 0`: the vector is
/// the top eigenvector of the whitened operator `L^{-1/2} A_m(x) L^{-1/2}`
/// (eigenvalue 1 with eigendirection `pb`), and its Rayleigh quotient in
/// `A_m(x)` equals `lambda_max`. The ordinary top eigenvalue of `A_m(x)`
/// decreases to `lambda_max` as `x` grows, which is the regime the
/// extreme-value argument lives in.
pub fn max_eigpair(phi_bar: &CVec, lambda_bar: &DVector<f64>) -> Result<(f64, CVec)> {
    if lambda_bar.iter().any(|&v| v <= 0.0) {
        return Err(Error::NotPsd("eigenvalue matrix must be positive definite".into()));
    }
    let m = lambda_bar.len();
    let mut quad = 0.0;
    for i in 0..m {
        quad += phi_bar[i].norm_sqr() / lambda_bar[i];
    }
    let top = 1.0 / quad;
    let scale = top.sqrt();
    let q = CVec::from_fn(m, |i, _| phi_bar[i] / lambda_bar[i].sqrt() * scale);
    Ok((top, q))
}

/// Extreme-value growth limit `c = lim (1 - F_s)/f_s = rho_eff * lambda_max`.
pub fn growth_limit(law: &SinrLaw) -> Result<f64> {
    let (top, _) = max_eigpair(law.phi_bar(), law.lambda_bar())?;
    Ok(law.rho_eff() * top)
}

/// Solves `F_s(l) = 1 - 1/K` by bracketed bisection.
///
/// The bracket starts at four times the asymptote `c (ln K + M ln ln K)` and
/// doubles until it encloses the root.
pub fn l_k_root(k: usize, law: &SinrLaw) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidArgument("l_K needs K >= 2".into()));
    }
    let tail = 1.0 / k as f64; // solve sf(l) = 1/K
    let c = growth_limit(law)?;
    let lnk = (k as f64).ln();
    let m = law.m() as f64;
    let guess = c * (lnk + m * lnk.ln().max(0.0));
    let mut hi = 4.0 * guess.max(c);
    let mut tries = 0;
    while law.sf(hi)? > tail {
        hi *= 2.0;
        tries += 1;
        if tries > 200 {
            return Err(Error::Bracketing(format!("no sign change up to x = {hi:.3e}")));
        }
    }
    let mut lo = 0.0; // sf(0+) = 1 > 1/K
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let s = law.sf(mid)?;
        if (s - tail).abs() < 1e-10 {
            return Ok(mid);
        }
        if s > tail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Leading terms of the growth point of `max ||z||^2` over `K` draws of a
/// `chi^2(2M)`-type squared norm: `ln K + (M-1) ln ln K`.
pub fn chi2_lk(m: usize, k: usize) -> Result<f64> {
    if k < 3 {
        return Err(Error::InvalidArgument("needs K >= 3 so ln ln K is defined".into()));
    }
    let lnk = (k as f64).ln();
    Ok(lnk + (m as f64 - 1.0) * lnk.ln())
}

/// Spreads eigenvalues whose neighbor gap is below [`EIGEN_SPACING_TOL`] by
/// `rel * mean` steps, returning how many were moved. The partial-fraction
/// expectation below is only valid for distinct eigenvalues; callers that hit
/// the degenerate case can apply this documented perturbation and accept the
/// `O(rel)` bias.
pub fn jitter_eigenvalues(lambda: &mut DVector<f64>, rel: f64) -> usize {
    let m = lambda.len();
    if m < 2 {
        return 0;
    }
    let mean = lambda.iter().sum::<f64>() / m as f64;
    let mut moved = 0;
    for i in 1..m {
        let min_gap = EIGEN_SPACING_TOL * mean.max(1e-300);
        if lambda[i] - lambda[i - 1] < min_gap {
            lambda[i] = lambda[i - 1] + rel * mean;
            moved += 1;
        }
    }
    moved
}

fn check_distinct(lambda_bar: &DVector<f64>) -> Result<()> {
    let m = lambda_bar.len();
    let mean = lambda_bar.iter().sum::<f64>() / m as f64;
    for i in 1..m {
        if lambda_bar[i] - lambda_bar[i - 1] < EIGEN_SPACING_TOL * mean.max(1e-300) {
            return Err(Error::DegenerateEigenvalues(format!(
                "eigenvalues {} and {} nearly coincide; apply jitter_eigenvalues first",
                lambda_bar[i - 1],
                lambda_bar[i]
            )));
        }
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut out = 1.0;
    for i in 0..k {
        out = out * (n - i) as f64 / (i + 1) as f64;
    }
    out
}

/// `E[ln(1/(phi' Rbar^-1 phi))]` over isotropic unit beams, in closed form.
///
/// Partial-fraction series over the (distinct, ascending) eigenvalues. The
/// expectation always lies in `[ln lambda_1, ln lambda_M]`; a result escaping
/// that interval means the series cancelled catastrophically, which is
/// reported as a degeneracy error.
pub fn expected_log_beam_gain(lambda_bar: &DVector<f64>) -> Result<f64> {
    if lambda_bar.iter().any(|&v| v <= 0.0) {
        return Err(Error::NotPsd("eigenvalues must be positive".into()));
    }
    let m = lambda_bar.len();
    if m == 1 {
        return Ok(lambda_bar[0].ln());
    }
    check_distinct(lambda_bar)?;
    let inv: Vec<f64> = lambda_bar.iter().map(|v| 1.0 / v).collect();
    let l1 = lambda_bar[0];
    let mut total = l1.ln();
    for i in 0..m {
        let mut eta = 1.0;
        for j in 0..m {
            if j != i {
                eta /= inv[j] - inv[i];
            }
        }
        total += eta * (-inv[i]).powi(m as i32 - 1) * (lambda_bar[i] / l1).ln();
        for l in 1..m {
            total += eta
                * binomial(m - 1, l)
                * (1.0 / l as f64)
                * (inv[0].powi(l as i32) - inv[i].powi(l as i32))
                * (-inv[i]).powi((m - 1 - l) as i32);
        }
    }
    let tol = 1e-6 * (1.0 + total.abs());
    if total < lambda_bar[0].ln() - tol || total > lambda_bar[m - 1].ln() + tol {
        return Err(Error::DegenerateEigenvalues(format!(
            "series left its [ln l_min, ln l_max] bound ({total}); eigenvalues too close"
        )));
    }
    Ok(total)
}

/// Inputs for the scaling-law evaluators.
#[derive(Debug, Clone)]
pub struct ScalingParams {
    pub m: usize,
    pub k: usize,
    pub pt: f64,
    pub noise: f64,
    pub beta_r: f64,
    pub beta_d: f64,
    pub alphas: Vec<f64>,
    /// Ascending eigenvalues of the normalized covariance.
    pub lambda_bar: DVector<f64>,
}

impl ScalingParams {
    pub fn new(cov: &CovarianceModel, k: usize, pt: f64, noise: f64) -> Self {
        Self {
            m: cov.m(),
            k,
            pt,
            noise,
            beta_r: cov.beta_r(),
            beta_d: cov.beta_d(),
            alphas: cov.alphas().to_vec(),
            lambda_bar: cov.lambda_bar().clone(),
        }
    }

    fn gain_sum(&self) -> f64 {
        self.beta_r * self.alphas.iter().map(|a| a * a).sum::<f64>() + self.beta_d
    }

    fn log_det_rbar(&self) -> f64 {
        self.lambda_bar.iter().map(|v| v.ln()).sum()
    }

    /// The two terms every law shares:
    /// `M ln(P_T/(sigma^2 M)) + M ln(gain_sum * ln K)`.
    fn common(&self) -> Result<f64> {
        if self.k < 3 {
            return Err(Error::InvalidArgument("scaling laws need K >= 3".into()));
        }
        let m = self.m as f64;
        let snr = self.pt / (self.noise * m);
        let mud = self.gain_sum() * (self.k as f64).ln();
        if snr <= 0.0 || mud <= 0.0 {
            return Err(Error::InvalidArgument(
                "nonpositive log argument: K or the channel gains are too small".into(),
            ));
        }
        Ok(m * snr.ln() + m * mud.ln())
    }
}

/// Average sum-capacity scaling (DPC): common terms plus the correlation
/// penalty `ln det(Rbar)`. Also covers the no-IRS form when all `alphas` are
/// zero.
pub fn scaling_dpc(p: &ScalingParams) -> Result<f64> {
    let det = p.log_det_rbar();
    if !det.is_finite() {
        return Err(Error::NotPsd("covariance is singular: ln det = -inf".into()));
    }
    Ok(p.common()? + det)
}

/// DBF sum average rate scaling; identical to the DPC law, which is how the
/// eigenbeam scheme closes the upper bound.
pub fn scaling_dbf(p: &ScalingParams) -> Result<f64> {
    scaling_dpc(p)
}

/// DBF scaling for an arbitrary fixed beam set: the determinant term becomes
/// the per-beam quadratic forms `sum_m ln 1/(pb_m' L^-1 pb_m)`.
pub fn scaling_dbf_generic(p: &ScalingParams, phi_bar: &CMat) -> Result<f64> {
    if phi_bar.nrows() != p.m || phi_bar.ncols() != p.m {
        return Err(Error::InvalidArgument("beam matrix must be M x M".into()));
    }
    let mut det_like = 0.0;
    for b in 0..p.m {
        let col = phi_bar.column(b);
        let mut quad = 0.0;
        for i in 0..p.m {
            quad += col[i].norm_sqr() / p.lambda_bar[i];
        }
        det_like += (1.0 / quad).ln();
    }
    Ok(p.common()? + det_like)
}

/// RBF sum average rate scaling: common terms plus `M` times the isotropic
/// expectation of the log beam gain.
pub fn scaling_rbf(p: &ScalingParams) -> Result<f64> {
    Ok(p.common()? + p.m as f64 * expected_log_beam_gain(&p.lambda_bar)?)
}

/// No-IRS RBF baseline: i.i.d. channels with gain `beta_d`.
pub fn scaling_no_irs_rbf(m: usize, k: usize, pt: f64, noise: f64, beta_d: f64) -> Result<f64> {
    let p = ScalingParams {
        m,
        k,
        pt,
        noise,
        beta_r: 0.0,
        beta_d,
        alphas: vec![],
        lambda_bar: DVector::from_element(m, 1.0),
    };
    p.common()
}
