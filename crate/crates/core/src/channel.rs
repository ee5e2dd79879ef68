//! Per-coherence-interval randomness and the channel covariance model.
//!
//! In every coherence interval the IRS applies fresh phase shifts and the
//! fading re-draws: the overall channel of user `k` is
//! `h_k = sqrt(beta_r) H1 Theta h2_k + sqrt(beta_d) hd_k`, with `H1` the
//! deterministic LoS matrix, `Theta = diag(alpha_n exp(j theta_n))` the IRS
//! response, and `h2_k`, `hd_k` i.i.d. unit-variance complex Gaussians.
//! Averaged over phases and fading the covariance has the closed form
//! `R = beta_r H1 diag(alpha^2) H1' + beta_d I` regardless of how the phases
//! are drawn, which is what every scaling law in [`crate::analysis`] consumes.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{clamp_psd, hermitian_eig_ascending};
use crate::{CMat, CVec, Cplx};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Phase-shifter resolution of the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrsMode {
    /// Phases drawn uniformly from `[0, 2 pi)`.
    Continuous,
    /// Phases drawn uniformly from the `2^bits`-point grid `{0, dtheta, ...}`.
    Discrete { bits: u8 },
}

/// One interval's IRS configuration: a phase and a fixed reflection
/// coefficient in `[0, 1]` per element.
#[derive(Debug, Clone)]
pub struct IrsResponse {
    pub phases: Vec<f64>,
    pub alphas: Vec<f64>,
    pub mode: IrsMode,
}

impl IrsResponse {
    /// Diagonal entries `alpha_n exp(j theta_n)` of the response matrix.
    pub fn diagonal(&self) -> Vec<Cplx> {
        self.phases
            .iter()
            .zip(&self.alphas)
            .map(|(&t, &a)| Cplx::new(a * t.cos(), a * t.sin()))
            .collect()
    }
}

/// Draws the per-interval IRS phases (unit reflection coefficients).
pub fn draw_irs_phases<R: Rng + ?Sized>(n: usize, mode: IrsMode, rng: &mut R) -> Result<IrsResponse> {
    if n == 0 {
        return Err(Error::InvalidArgument("IRS needs at least one element".into()));
    }
    let phases = match mode {
        IrsMode::Continuous => (0..n).map(|_| rng.gen::<f64>() * TWO_PI).collect(),
        IrsMode::Discrete { bits } => {
            if bits == 0 {
                return Err(Error::InvalidArgument("discrete mode needs at least one bit".into()));
            }
            let q = 1u64 << bits;
            let step = TWO_PI / q as f64;
            (0..n).map(|_| rng.gen_range(0..q) as f64 * step).collect()
        }
    };
    Ok(IrsResponse { phases, alphas: vec![1.0; n], mode })
}

/// Rayleigh fading for one interval: `h2` per user (IRS-user, length `N`) and
/// `hd` per user (direct, length `M`).
#[derive(Debug, Clone)]
pub struct Fading {
    pub h2: Vec<CVec>,
    pub hd: Vec<CVec>,
}

fn cn_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> CVec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CVec::from_fn(len, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Cplx::new(re * s, im * s)
    })
}

/// i.i.d. `CN(0, 1)` entries, independent across users and links.
pub fn draw_fading<R: Rng + ?Sized>(m: usize, n: usize, k: usize, rng: &mut R) -> Result<Fading> {
    if m == 0 || n == 0 || k == 0 {
        return Err(Error::InvalidArgument("all of M, N, K must be at least 1".into()));
    }
    let mut h2 = Vec::with_capacity(k);
    let mut hd = Vec::with_capacity(k);
    for _ in 0..k {
        h2.push(cn_vector(n, rng));
        hd.push(cn_vector(m, rng));
    }
    Ok(Fading { h2, hd })
}

/// One coherence interval's composed channels.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// `h_k` for every user.
    pub users: Vec<CVec>,
    pub irs: IrsResponse,
    pub fading: Fading,
    pub beta_r: f64,
    pub beta_d: f64,
}

/// Composes `h_k = sqrt(beta_r) H1 Theta h2_k + sqrt(beta_d) hd_k`.
pub fn compose_channel(
    h1: &CMat,
    irs: &IrsResponse,
    fading: &Fading,
    beta_r: f64,
    beta_d: f64,
) -> Result<ChannelRealization> {
    if beta_r < 0.0 || beta_d < 0.0 {
        return Err(Error::InvalidArgument("path gains must be nonnegative".into()));
    }
    let (m, n) = h1.shape();
    if irs.phases.len() != n {
        return Err(Error::InvalidArgument(format!(
            "IRS response has {} phases for {} elements",
            irs.phases.len(),
            n
        )));
    }
    if fading.h2.iter().any(|v| v.len() != n) || fading.hd.iter().any(|v| v.len() != m) {
        return Err(Error::InvalidArgument("fading dimensions disagree with H1".into()));
    }
    if fading.h2.len() != fading.hd.len() {
        return Err(Error::InvalidArgument("h2/hd user counts differ".into()));
    }
    let sr = beta_r.sqrt();
    let sd = beta_d.sqrt();
    let diag = irs.diagonal();
    let users = fading
        .h2
        .iter()
        .zip(&fading.hd)
        .map(|(h2, hd)| {
            // H1 * diag * h2, with the diagonal folded into h2 first
            let scaled = CVec::from_fn(n, |i, _| diag[i] * h2[i]);
            let mut h = h1 * scaled;
            h.apply(|v| *v *= sr);
            h + hd.map(|v| v * sd)
        })
        .collect();
    Ok(ChannelRealization { users, irs: irs.clone(), fading: fading.clone(), beta_r, beta_d })
}

/// Channel covariance `R`, its unit-diagonal normalization `R_bar` and the
/// ascending eigendecomposition of `R_bar`.
///
/// The phases integrate out of the covariance, so the model depends only on
/// `H1`, the reflection coefficients and the path gains.
#[derive(Debug, Clone)]
pub struct CovarianceModel {
    r: CMat,
    r_bar: CMat,
    /// `beta_r * sum(alpha^2) + beta_d`, the exact diagonal of `R`.
    normalizer: f64,
    /// Eigenvalues of `R_bar`, ascending.
    lambda_bar: nalgebra::DVector<f64>,
    /// Columns are the eigenvectors matching `lambda_bar`.
    v: CMat,
    beta_r: f64,
    beta_d: f64,
    alphas: Vec<f64>,
}

/// Builds the covariance model from the LoS matrix and reflection profile.
pub fn covariance(h1: &CMat, alphas: &[f64], beta_r: f64, beta_d: f64) -> Result<CovarianceModel> {
    let (m, n) = h1.shape();
    if alphas.len() != n {
        return Err(Error::InvalidArgument(format!("{} alphas for {} elements", alphas.len(), n)));
    }
    if beta_r < 0.0 || beta_d < 0.0 {
        return Err(Error::InvalidArgument("path gains must be nonnegative".into()));
    }
    let sum_a2: f64 = alphas.iter().map(|a| a * a).sum();
    let normalizer = beta_r * sum_a2 + beta_d;
    if normalizer <= 0.0 {
        return Err(Error::InvalidArgument(
            "covariance is identically zero (no reflection power and no direct gain)".into(),
        ));
    }

    // R = beta_r H1 diag(alpha^2) H1' + beta_d I, with the diagonal pinned to
    // its closed form so R_bar has an exactly unit diagonal.
    let mut r = CMat::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            if i == j {
                r[(i, i)] = Cplx::new(normalizer, 0.0);
                continue;
            }
            let mut acc = Cplx::new(0.0, 0.0);
            for kk in 0..n {
                acc += h1[(i, kk)] * h1[(j, kk)].conj() * (alphas[kk] * alphas[kk]);
            }
            let v = acc * beta_r;
            r[(i, j)] = v;
            r[(j, i)] = v.conj();
        }
    }
    let r_bar = r.map(|v| v / normalizer);

    let (mut lambda_bar, v) = hermitian_eig_ascending(&r_bar);
    clamp_psd(&mut lambda_bar, m as f64)?;
    Ok(CovarianceModel { r, r_bar, normalizer, lambda_bar, v, beta_r, beta_d, alphas: alphas.to_vec() })
}

impl CovarianceModel {
    pub fn m(&self) -> usize {
        self.r.nrows()
    }

    pub fn r(&self) -> &CMat {
        &self.r
    }

    pub fn r_bar(&self) -> &CMat {
        &self.r_bar
    }

    /// `beta_r sum(alpha^2) + beta_d`; every diagonal entry of `R`.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// Ascending eigenvalues of `R_bar`.
    pub fn lambda_bar(&self) -> &nalgebra::DVector<f64> {
        &self.lambda_bar
    }

    /// Eigenvector matrix `V` with `R_bar = V diag(lambda_bar) V'`.
    pub fn eigenvectors(&self) -> &CMat {
        &self.v
    }

    /// The rotation `U = V'` mapping a beam into eigencoordinates.
    pub fn u(&self) -> CMat {
        self.v.adjoint()
    }

    pub fn beta_r(&self) -> f64 {
        self.beta_r
    }

    pub fn beta_d(&self) -> f64 {
        self.beta_d
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn det_rbar(&self) -> f64 {
        self.lambda_bar.iter().product()
    }

    /// `ln det(R_bar)`, the correlation penalty (`<= 0`); `-inf` if singular.
    pub fn log_det_rbar(&self) -> f64 {
        self.lambda_bar.iter().map(|v| v.ln()).sum()
    }

    /// Draws `h ~ CN(0, R)` through the eigendecomposition; statistically
    /// equivalent to composing a full realization, and handy for tests that
    /// only care about the law of the channel.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CVec {
        let m = self.m();
        let z = cn_vector(m, rng);
        let mut acc = CVec::zeros(m);
        for i in 0..m {
            let scale = (self.lambda_bar[i] * self.normalizer).sqrt();
            acc += self.v.column(i) * (z[i] * scale);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{lane, Purpose};

    fn test_h1(m: usize, n1: usize, n2: usize) -> CMat {
        use crate::geometry::*;
        use nalgebra::Vector3;
        let lam = 0.5;
        let bs = ArrayGeometry::ula(Vector3::zeros(), std::f64::consts::FRAC_PI_2, 0.0, m, lam, lam).unwrap();
        let irs = ArrayGeometry::ura(
            Vector3::new(0.0, 50.0, 0.0),
            std::f64::consts::FRAC_PI_2,
            0.0,
            n1,
            n2,
            lam,
            lam,
            lam,
        )
        .unwrap();
        los_channel(&bs, &irs).unwrap().h1
    }

    #[test]
    fn one_bit_phases_live_on_the_two_point_grid() {
        let mut rng = lane(1, 0, Purpose::IrsPhases);
        let r = draw_irs_phases(4, IrsMode::Discrete { bits: 1 }, &mut rng).unwrap();
        for &t in &r.phases {
            assert!(t == 0.0 || (t - std::f64::consts::PI).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_bits_is_an_error() {
        let mut rng = lane(1, 0, Purpose::IrsPhases);
        assert!(draw_irs_phases(4, IrsMode::Discrete { bits: 0 }, &mut rng).is_err());
    }

    #[test]
    fn same_seed_same_phases() {
        let a = draw_irs_phases(16, IrsMode::Continuous, &mut lane(9, 5, Purpose::IrsPhases)).unwrap();
        let b = draw_irs_phases(16, IrsMode::Continuous, &mut lane(9, 5, Purpose::IrsPhases)).unwrap();
        assert_eq!(a.phases, b.phases);
    }

    #[test]
    fn continuous_phases_average_out() {
        // law of large numbers: mean of exp(j theta) near zero
        let mut rng = lane(2, 0, Purpose::IrsPhases);
        let r = draw_irs_phases(100_000, IrsMode::Continuous, &mut rng).unwrap();
        let mean = r.phases.iter().fold(Cplx::new(0.0, 0.0), |acc, &t| acc + Cplx::new(t.cos(), t.sin()))
            / r.phases.len() as f64;
        assert!(mean.norm() < 0.02, "|mean| = {}", mean.norm());
    }

    #[test]
    fn fading_moments() {
        let mut rng = lane(3, 0, Purpose::Fading);
        let f = draw_fading(2, 4, 25_000, &mut rng).unwrap();
        // per-entry variance within 2% of 1
        let mut var = 0.0;
        let mut cnt = 0.0;
        for v in &f.h2 {
            for x in v.iter() {
                var += x.norm_sqr();
                cnt += 1.0;
            }
        }
        assert!((var / cnt - 1.0).abs() < 0.02);
        // ||h2||^2 has mean N
        let mean_n: f64 = f.h2.iter().map(|v| v.norm_squared()).sum::<f64>() / f.h2.len() as f64;
        assert!((mean_n / 4.0 - 1.0).abs() < 0.01);
        // users uncorrelated: entrywise E[h_k h_{k+1}'] near zero
        let mut cross = Cplx::new(0.0, 0.0);
        for pair in f.hd.chunks_exact(2) {
            cross += pair[0][0] * pair[1][0].conj();
        }
        assert!((cross / (f.hd.len() as f64 / 2.0)).norm() < 0.02);
    }

    #[test]
    fn zero_alpha_removes_the_irs() {
        let h1 = test_h1(2, 2, 2);
        let mut rng = lane(4, 0, Purpose::Fading);
        let fading = draw_fading(2, 4, 3, &mut rng).unwrap();
        let irs = IrsResponse {
            phases: vec![0.3; 4],
            alphas: vec![0.0; 4],
            mode: IrsMode::Continuous,
        };
        let beta_d = 2.0;
        let out = compose_channel(&h1, &irs, &fading, 1.0, beta_d, ).unwrap();
        for (h, hd) in out.users.iter().zip(&fading.hd) {
            let expect = hd.map(|v| v * beta_d.sqrt());
            assert!((h - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn single_element_magnitude() {
        // beta_d = 0, N = 1, M = 1: |h| = sqrt(beta_r) * alpha * |h2|
        let h1 = CMat::from_element(1, 1, Cplx::new(0.6, 0.8));
        let mut rng = lane(5, 0, Purpose::Fading);
        let fading = draw_fading(1, 1, 1, &mut rng).unwrap();
        let irs = IrsResponse { phases: vec![1.1], alphas: vec![0.7], mode: IrsMode::Continuous };
        let out = compose_channel(&h1, &irs, &fading, 4.0, 0.0).unwrap();
        let expect = 2.0 * 0.7 * fading.h2[0][0].norm();
        assert!((out.users[0][0].norm() - expect).abs() < 1e-12);
    }

    #[test]
    fn negative_gain_rejected() {
        let h1 = test_h1(2, 2, 2);
        let mut rng = lane(6, 0, Purpose::Fading);
        let fading = draw_fading(2, 4, 1, &mut rng).unwrap();
        let irs = IrsResponse { phases: vec![0.0; 4], alphas: vec![1.0; 4], mode: IrsMode::Continuous };
        assert!(compose_channel(&h1, &irs, &fading, -1.0, 1.0).is_err());
    }

    #[test]
    fn zero_alpha_covariance_is_diagonal() {
        let h1 = test_h1(3, 2, 2);
        let cov = covariance(&h1, &[0.0; 4], 1.0, 2.0).unwrap();
        assert!((cov.det_rbar() - 1.0).abs() < 1e-12);
        assert!(cov.log_det_rbar().abs() < 1e-12);
        for i in 0..3 {
            assert!((cov.r()[(i, i)] - Cplx::new(2.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn diagonal_and_trace_are_exact() {
        let h1 = test_h1(4, 8, 2);
        let cov = covariance(&h1, &[1.0; 16], 3.0e-12, 1.0e-12).unwrap();
        let want = 3.0e-12 * 16.0 + 1.0e-12;
        for i in 0..4 {
            assert_eq!(cov.r()[(i, i)], Cplx::new(want, 0.0));
            assert_eq!(cov.r_bar()[(i, i)], Cplx::new(1.0, 0.0));
        }
        let trace: f64 = cov.lambda_bar().iter().sum();
        assert!((trace - 4.0).abs() < 1e-9);
        assert!(cov.det_rbar() <= 1.0 + 1e-9);
        assert!(cov.lambda_bar().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn covariance_ignores_realized_phases() {
        // two different phase draws, same covariance input: R never reads them
        let h1 = test_h1(2, 2, 2);
        let a = covariance(&h1, &[1.0; 4], 1.5, 0.5).unwrap();
        let b = covariance(&h1, &[1.0; 4], 1.5, 0.5).unwrap();
        assert_eq!(a.r(), b.r());
    }

    #[test]
    fn empirical_covariance_matches_closed_form() {
        // Monte Carlo over (Theta, h2, hd) draws vs Eq-form R, 3% of diagonal
        let h1 = test_h1(2, 8, 2);
        let beta_r = 2.0;
        let beta_d = 1.0;
        let cov = covariance(&h1, &[1.0; 16], beta_r, beta_d).unwrap();
        let trials = 100_000;
        let mut acc = CMat::zeros(2, 2);
        let mut rng = lane(11, 0, Purpose::Fading);
        for _ in 0..trials {
            let irs = draw_irs_phases(16, IrsMode::Continuous, &mut rng).unwrap();
            let fading = draw_fading(2, 16, 1, &mut rng).unwrap();
            let out = compose_channel(&h1, &irs, &fading, beta_r, beta_d).unwrap();
            let h = &out.users[0];
            for i in 0..2 {
                for j in 0..2 {
                    acc[(i, j)] += h[i] * h[j].conj();
                }
            }
        }
        acc /= Cplx::new(trials as f64, 0.0);
        let scale = cov.normalizer();
        for i in 0..2 {
            for j in 0..2 {
                let err = (acc[(i, j)] - cov.r()[(i, j)]).norm();
                assert!(err < 0.03 * scale, "entry ({i},{j}) off by {}", err / scale);
            }
        }
    }

    #[test]
    fn sampled_channels_match_composed_law() {
        // statistical equivalence of R^{1/2} z sampling and full composition
        let h1 = test_h1(2, 4, 2);
        let cov = covariance(&h1, &[1.0; 8], 1.0, 0.5).unwrap();
        let trials = 60_000;
        let mut acc = CMat::zeros(2, 2);
        let mut rng = lane(12, 0, Purpose::Fading);
        for _ in 0..trials {
            let h = cov.sample(&mut rng);
            for i in 0..2 {
                for j in 0..2 {
                    acc[(i, j)] += h[i] * h[j].conj();
                }
            }
        }
        acc /= Cplx::new(trials as f64, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                assert!((acc[(i, j)] - cov.r()[(i, j)]).norm() < 0.035 * cov.normalizer());
            }
        }
    }
}
