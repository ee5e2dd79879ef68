//! Energy-efficiency objective and solvers.
//!
//! The objective is the DBF sum-rate scaling law divided by a linear power
//! model `P_tot = A P_T + B M + C N + D`, reported in Mbits/J for a
//! configured bandwidth. Three solvers cover the accuracy/complexity range:
//!
//! - [`exhaustive_ee`]: full grid over antennas, elements and a transmit
//!   power lattice of step `delta`; the global reference.
//! - [`algorithm1`]: alternating maximization of the exact objective; the
//!   power step uses the transcendental stationarity condition whose unique
//!   root the pseudo-concave ratio admits, the two integer steps are 1-D
//!   scans.
//! - [`algorithm2`]: alternating maximization of the correlation-free upper
//!   bound, where all three coordinate steps are (semi-)closed-form root
//!   finds; the returned solution reports the exact objective at the final
//!   point.
//!
//! A configuration without the surface (`N = 0`) drops both the per-element
//! and the static IRS power terms.

use nalgebra::DVector;

use crate::analysis::{expected_log_beam_gain, scaling_no_irs_rbf};
use crate::channel::covariance;
use crate::error::{Error, Result};
use crate::CMat;

/// Linear power model coefficients.
///
/// `A = 1/zeta` scales the radiated power by the amplifier efficiency,
/// `B = P_B + P_U` is paid per active antenna (BS chain plus the served
/// user's receive chain), `C = P_n` per reflecting element, and
/// `D = P_sB + P_sI` is the static floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel {
    pub amp_a: f64,
    pub p_bs_chain: f64,
    pub p_user_chain: f64,
    pub p_element: f64,
    pub p_static_bs: f64,
    pub p_static_irs: f64,
}

impl PowerModel {
    pub fn new(
        amp_a: f64,
        p_bs_chain: f64,
        p_user_chain: f64,
        p_element: f64,
        p_static_bs: f64,
        p_static_irs: f64,
    ) -> Result<Self> {
        if amp_a < 1.0 {
            return Err(Error::InvalidArgument("amplifier factor A = 1/zeta must be >= 1".into()));
        }
        if [p_bs_chain, p_user_chain, p_element, p_static_bs, p_static_irs]
            .iter()
            .any(|&v| v < 0.0)
        {
            return Err(Error::InvalidArgument("component powers must be nonnegative".into()));
        }
        Ok(Self { amp_a, p_bs_chain, p_user_chain, p_element, p_static_bs, p_static_irs })
    }

    /// From per-block component powers: the BS chain is DAC + mixer + transmit
    /// filter, the user chain LNA + mixer + receive filter + ADC.
    #[allow(clippy::too_many_arguments)]
    pub fn from_components(
        zeta: f64,
        p_dac: f64,
        p_mix: f64,
        p_filt: f64,
        p_filr: f64,
        p_lna: f64,
        p_adc: f64,
        p_element: f64,
        p_static_bs: f64,
        p_static_irs: f64,
    ) -> Result<Self> {
        if zeta <= 0.0 || zeta > 1.0 {
            return Err(Error::InvalidArgument("amplifier efficiency must be in (0, 1]".into()));
        }
        Self::new(
            1.0 / zeta,
            p_dac + p_mix + p_filt,
            p_lna + p_mix + p_filr + p_adc,
            p_element,
            p_static_bs,
            p_static_irs,
        )
    }

    pub fn a(&self) -> f64 {
        self.amp_a
    }

    pub fn b(&self) -> f64 {
        self.p_bs_chain + self.p_user_chain
    }

    pub fn c(&self) -> f64 {
        self.p_element
    }

    pub fn d(&self) -> f64 {
        self.p_static_bs + self.p_static_irs
    }
}

/// `A P_T + B M + C N + D`.
pub fn power_total(pt: f64, m: usize, n: usize, pm: &PowerModel) -> f64 {
    pm.a() * pt + pm.b() * m as f64 + pm.c() * n as f64 + pm.d()
}

/// Power drawn when no surface is deployed: the per-element term and the IRS
/// static floor both disappear.
pub fn power_total_no_irs(pt: f64, m: usize, pm: &PowerModel) -> f64 {
    pm.a() * pt + pm.b() * m as f64 + pm.p_static_bs
}

/// The energy-efficiency maximization instance: power model, rate-law
/// parameters, bounds, and the correlation penalty of every reachable
/// antenna/element count, precomputed by truncating the full array geometry.
#[derive(Debug, Clone)]
pub struct EEProblem {
    pub power: PowerModel,
    pub beta_r: f64,
    pub beta_d: f64,
    /// Homogeneous reflection coefficient.
    pub alpha: f64,
    pub k: usize,
    pub noise: f64,
    pub m_min: usize,
    pub m_max: usize,
    pub n_max: usize,
    pub p_max: f64,
    /// Bandwidth in Hz for the Mbits/J conversion.
    pub bandwidth: f64,
    /// `lambda[(m-1)][(n-1)]`: ascending eigenvalues of the normalized
    /// covariance of the first `m` antennas and first `n` elements.
    lambda: Vec<Vec<DVector<f64>>>,
    /// `ln det Rbar` lookup, same indexing.
    log_det: Vec<Vec<f64>>,
}

impl EEProblem {
    /// Builds the problem from the full-size LoS matrix (`m_max` rows,
    /// `n_max` columns). Activating a subset keeps the first `m` antennas and
    /// the first `n` elements in flat URA order.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        h1_full: &CMat,
        power: PowerModel,
        beta_r: f64,
        beta_d: f64,
        alpha: f64,
        k: usize,
        noise: f64,
        m_min: usize,
        p_max: f64,
        bandwidth: f64,
    ) -> Result<Self> {
        let (m_max, n_max) = h1_full.shape();
        if m_max == 0 || n_max == 0 {
            return Err(Error::InvalidArgument("need at least one antenna and element".into()));
        }
        if k < 3 {
            return Err(Error::InvalidArgument("EE problems need K >= 3".into()));
        }
        if p_max <= 0.0 || noise <= 0.0 || bandwidth <= 0.0 {
            return Err(Error::InvalidArgument("p_max, noise and bandwidth must be positive".into()));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidArgument("reflection coefficient must be in [0, 1]".into()));
        }
        let m_min = m_min.clamp(1, m_max);
        let mut lambda = Vec::with_capacity(m_max);
        let mut log_det = Vec::with_capacity(m_max);
        for m in 1..=m_max {
            let mut lrow = Vec::with_capacity(n_max);
            let mut drow = Vec::with_capacity(n_max);
            for n in 1..=n_max {
                let sub = h1_full.view((0, 0), (m, n)).clone_owned();
                let cov = covariance(&sub, &vec![alpha; n], beta_r, beta_d)?;
                drow.push(cov.log_det_rbar());
                lrow.push(cov.lambda_bar().clone());
            }
            lambda.push(lrow);
            log_det.push(drow);
        }
        Ok(Self {
            power,
            beta_r,
            beta_d,
            alpha,
            k,
            noise,
            m_min,
            m_max,
            n_max,
            p_max,
            bandwidth,
            lambda,
            log_det,
        })
    }

    pub fn log_det_rbar(&self, m: usize, n: usize) -> f64 {
        if n == 0 {
            0.0
        } else {
            self.log_det[m - 1][n - 1]
        }
    }

    pub fn lambda_bar(&self, m: usize, n: usize) -> &DVector<f64> {
        &self.lambda[m - 1][n - 1]
    }

    fn gain(&self, n: usize) -> f64 {
        self.beta_r * self.alpha * self.alpha * n as f64 + self.beta_d
    }

    /// DBF rate law at `(m, n, pt)`, natural-log units; `n = 0` is the no-IRS
    /// baseline.
    pub fn rate(&self, m: usize, n: usize, pt: f64) -> f64 {
        let mf = m as f64;
        let lnk = (self.k as f64).ln();
        mf * (pt / (self.noise * mf)).ln() + mf * (self.gain(n) * lnk).ln() + self.log_det_rbar(m, n)
    }

    fn mbits_per_joule(&self, rate: f64, ptot: f64) -> f64 {
        if rate <= 0.0 {
            0.0
        } else {
            rate * self.bandwidth / ptot / 1e6
        }
    }
}

/// Exact EE objective in Mbits/J, clamped to zero where the scaling-law rate
/// is nonpositive.
pub fn ee_objective(m: usize, n: usize, pt: f64, prob: &EEProblem) -> f64 {
    if m == 0 || pt <= 0.0 {
        return 0.0;
    }
    let ptot = if n == 0 {
        power_total_no_irs(pt, m, &prob.power)
    } else {
        power_total(pt, m, n, &prob.power)
    };
    prob.mbits_per_joule(prob.rate(m, n, pt), ptot)
}

/// RBF-numerator variant of the EE objective: the correlation term becomes
/// `M` times the isotropic log-beam-gain expectation. Errors on degenerate
/// covariance spectra (the partial-fraction expectation requires distinct
/// eigenvalues).
pub fn ee_objective_rbf(m: usize, n: usize, pt: f64, prob: &EEProblem) -> Result<f64> {
    if m == 0 || pt <= 0.0 {
        return Ok(0.0);
    }
    let rate = if n == 0 {
        scaling_no_irs_rbf(m, prob.k, pt, prob.noise, prob.beta_d)?
    } else {
        let mf = m as f64;
        let lnk = (prob.k as f64).ln();
        mf * (pt / (prob.noise * mf)).ln()
            + mf * (prob.gain(n) * lnk).ln()
            + mf * expected_log_beam_gain(prob.lambda_bar(m, n))?
    };
    let ptot = if n == 0 {
        power_total_no_irs(pt, m, &prob.power)
    } else {
        power_total(pt, m, n, &prob.power)
    };
    Ok(prob.mbits_per_joule(rate, ptot))
}

/// Correlation-free upper bound on the EE objective (the determinant penalty
/// is dropped), clamped to zero like the exact objective. Equal to the exact
/// objective whenever the normalized covariance is the identity, e.g. at
/// `n = 0`.
pub fn ee_upper_bound(m: usize, n: usize, pt: f64, prob: &EEProblem) -> f64 {
    if m == 0 || pt <= 0.0 {
        return 0.0;
    }
    let mf = m as f64;
    let lnk = (prob.k as f64).ln();
    let rate = mf * (pt / (prob.noise * mf)).ln() + mf * (prob.gain(n) * lnk).ln();
    let ptot = if n == 0 {
        power_total_no_irs(pt, m, &prob.power)
    } else {
        power_total(pt, m, n, &prob.power)
    };
    prob.mbits_per_joule(rate, ptot)
}

/// Which solver produced an [`EESolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverTag {
    Exhaustive,
    Algorithm1,
    Algorithm2,
    ExhaustiveNoIrs,
}

impl std::fmt::Display for SolverTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SolverTag::Exhaustive => "exhaustive",
            SolverTag::Algorithm1 => "algorithm1",
            SolverTag::Algorithm2 => "algorithm2",
            SolverTag::ExhaustiveNoIrs => "exhaustive-no-irs",
        };
        f.write_str(s)
    }
}

/// A solver's answer: the configuration, its exact EE, and the recorded
/// objective trace (exact for the exhaustive/exact solvers, bound values for
/// the bound-based one).
#[derive(Debug, Clone)]
pub struct EESolution {
    pub m: usize,
    pub n: usize,
    pub pt: f64,
    /// Exact objective value at `(m, n, pt)`, Mbits/J.
    pub ee: f64,
    pub solver: SolverTag,
    pub iterations: usize,
    pub trace: Vec<f64>,
}

fn power_grid(p_max: f64, delta: f64) -> impl Iterator<Item = f64> {
    let steps = (p_max / delta).floor() as usize;
    (1..=steps).map(move |i| i as f64 * delta).chain(
        (p_max - steps as f64 * delta > 1e-12 * p_max).then_some(p_max),
    )
}

/// Global grid search over `{m_min..m_max} x {1..n_max} x {delta, 2 delta,
/// ..., p_max}`. Ties keep the first (smallest) configuration.
pub fn exhaustive_ee(prob: &EEProblem, delta: f64) -> Result<EESolution> {
    if delta <= 0.0 {
        return Err(Error::InvalidArgument("grid step must be positive".into()));
    }
    let lnk = (prob.k as f64).ln();
    let mut best = (0.0f64, prob.m_min, 1usize, delta.min(prob.p_max));
    for m in prob.m_min..=prob.m_max {
        let mf = m as f64;
        for n in 1..=prob.n_max {
            // rate = m (ln(pt) + shift); hoist everything that is P-free
            let shift = (1.0 / (prob.noise * mf)).ln() + (prob.gain(n) * lnk).ln()
                + prob.log_det_rbar(m, n) / mf;
            let pbase = prob.power.b() * mf + prob.power.c() * n as f64 + prob.power.d();
            for pt in power_grid(prob.p_max, delta) {
                let rate = mf * (pt.ln() + shift);
                if rate <= 0.0 {
                    continue;
                }
                let v = rate * prob.bandwidth / (prob.power.a() * pt + pbase) / 1e6;
                if v > best.0 {
                    best = (v, m, n, pt);
                }
            }
        }
    }
    Ok(EESolution {
        m: best.1,
        n: best.2,
        pt: best.3,
        ee: best.0,
        solver: SolverTag::Exhaustive,
        iterations: 1,
        trace: vec![best.0],
    })
}

/// Grid search with the surface disabled (`n = 0`, IRS power terms dropped).
pub fn exhaustive_ee_no_irs(prob: &EEProblem, delta: f64) -> Result<EESolution> {
    if delta <= 0.0 {
        return Err(Error::InvalidArgument("grid step must be positive".into()));
    }
    let mut best = (0.0f64, prob.m_min, delta.min(prob.p_max));
    for m in prob.m_min..=prob.m_max {
        for pt in power_grid(prob.p_max, delta) {
            let v = ee_objective(m, 0, pt, prob);
            if v > best.0 {
                best = (v, m, pt);
            }
        }
    }
    Ok(EESolution {
        m: best.1,
        n: 0,
        pt: best.2,
        ee: best.0,
        solver: SolverTag::ExhaustiveNoIrs,
        iterations: 1,
        trace: vec![best.0],
    })
}

/// Root of `d + c/P - d b - d ln(a P) = 0`, the stationarity condition of the
/// ratio `(ln(a P) + b)/(d P + c)`. The left side is strictly decreasing from
/// `+inf`, so the root is unique; bisection to 1e-10 relative.
fn stationary_power(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    let h = |p: f64| d + c / p - d * b - d * (a * p).ln();
    let mut hi = 1.0;
    let mut tries = 0;
    while h(hi) > 0.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 2000 {
            return Err(Error::Bracketing("stationary power exceeds 2^2000".into()));
        }
    }
    let mut lo = hi / 2.0;
    tries = 0;
    while h(lo) < 0.0 {
        lo /= 2.0;
        tries += 1;
        if tries > 4000 {
            return Err(Error::Bracketing("stationary power underflows".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn theorem5_coeffs(m: usize, n: usize, prob: &EEProblem, with_det: bool) -> (f64, f64, f64, f64) {
    let mf = m as f64;
    let a = 1.0 / (prob.noise * mf);
    let mut b = (prob.gain(n) * (prob.k as f64).ln()).ln();
    if with_det {
        b += prob.log_det_rbar(m, n) / mf;
    }
    let c = (prob.power.b() * mf + prob.power.c() * n as f64 + prob.power.d()) / mf;
    let d = prob.power.a() / mf;
    (a, b, c, d)
}

/// Unique EE-maximizing transmit power for fixed `(m, n)`, clamped to
/// `p_max`: the exact objective's stationary point.
pub fn opt_pt_exact(m: usize, n: usize, prob: &EEProblem) -> Result<f64> {
    let (a, b, c, d) = theorem5_coeffs(m, n, prob, true);
    Ok(stationary_power(a, b, c, d)?.min(prob.p_max))
}

/// Same power step for the correlation-free bound objective.
pub fn opt_pt_bound(m: usize, n: usize, prob: &EEProblem) -> Result<f64> {
    let (a, b, c, d) = theorem5_coeffs(m, n, prob, false);
    Ok(stationary_power(a, b, c, d)?.min(prob.p_max))
}

/// Sign of the bound-EE derivative in the continuous antenna count:
/// positive while `chi + ln beta - 1 - ln m > delta m (chi + ln beta - ln m)/(delta m + omega)`.
fn m_derivative_sign(m: f64, chi_lnb: f64, delta: f64, omega: f64) -> f64 {
    chi_lnb - 1.0 - m.ln() - delta * m * (chi_lnb - m.ln()) / (delta * m + omega)
}

/// Bound-optimal integer antenna count for fixed `(n, pt)`: bisection for the
/// continuous stationary point, then the better of floor/ceil within bounds.
pub fn opt_m_bound(n: usize, pt: f64, prob: &EEProblem) -> usize {
    let chi_lnb = (prob.gain(n) * (prob.k as f64).ln()).ln() + (pt / prob.noise).ln();
    let delta = prob.power.b();
    let omega = prob.power.a() * pt + prob.power.c() * n as f64 + prob.power.d();
    let hi_m = prob.m_max as f64;
    let m_cont = if m_derivative_sign(hi_m, chi_lnb, delta, omega) >= 0.0 {
        hi_m // still increasing at the cap
    } else {
        let mut lo = 1e-12;
        let mut hi = hi_m;
        if m_derivative_sign(lo, chi_lnb, delta, omega) <= 0.0 {
            lo // decreasing from the start: clamp below
        } else {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if m_derivative_sign(mid, chi_lnb, delta, omega) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
    };
    let lo_i = (m_cont.floor() as usize).clamp(prob.m_min, prob.m_max);
    let hi_i = (m_cont.ceil() as usize).clamp(prob.m_min, prob.m_max);
    if ee_upper_bound(hi_i, n, pt, prob) > ee_upper_bound(lo_i, n, pt, prob) {
        hi_i
    } else {
        lo_i
    }
}

/// Sign of the bound-EE derivative in the continuous element count.
fn n_derivative_sign(n: f64, prob: &EEProblem, m: f64, tau: f64, gamma: f64) -> f64 {
    let a2br = prob.alpha * prob.alpha * prob.beta_r;
    let delta = prob.power.c();
    let g = n * a2br + prob.beta_d;
    (delta * n + gamma) * (m * a2br / g) - delta * (m * g.ln() + tau)
}

/// Bound-optimal integer element count for fixed `(m, pt)`.
pub fn opt_n_bound(m: usize, pt: f64, prob: &EEProblem) -> usize {
    let mf = m as f64;
    let tau = mf * (pt / (prob.noise * mf)).ln() + mf * (prob.k as f64).ln().ln();
    let gamma = prob.power.a() * pt + prob.power.b() * mf + prob.power.d();
    let hi_n = prob.n_max as f64;
    let n_cont = if n_derivative_sign(hi_n, prob, mf, tau, gamma) >= 0.0 {
        hi_n
    } else {
        let mut lo = 1e-12;
        let mut hi = hi_n;
        if n_derivative_sign(lo, prob, mf, tau, gamma) <= 0.0 {
            lo
        } else {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if n_derivative_sign(mid, prob, mf, tau, gamma) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
    };
    let lo_i = (n_cont.floor() as usize).clamp(1, prob.n_max);
    let hi_i = (n_cont.ceil() as usize).clamp(1, prob.n_max);
    if ee_upper_bound(m, hi_i, pt, prob) > ee_upper_bound(m, lo_i, pt, prob) {
        hi_i
    } else {
        lo_i
    }
}

/// Default starting point: smallest antenna count, one element, half power.
pub fn default_start(prob: &EEProblem) -> (usize, usize, f64) {
    (prob.m_min, 1, prob.p_max / 2.0)
}

const MAX_ALTERNATIONS: usize = 100;

/// Alternating maximization of the exact objective: a power root-find and two
/// exhaustive integer line scans per round, until the objective moves by less
/// than `eps`. The recorded trace is nondecreasing because every step is a
/// coordinate-wise maximization.
pub fn algorithm1(prob: &EEProblem, eps: f64, start: (usize, usize, f64)) -> Result<EESolution> {
    let (mut m, mut n, mut pt) = start;
    m = m.clamp(prob.m_min, prob.m_max);
    n = n.clamp(1, prob.n_max);
    pt = pt.clamp(f64::MIN_POSITIVE, prob.p_max);
    let mut f = ee_objective(m, n, pt, prob);
    let mut trace = vec![f];
    for _ in 0..MAX_ALTERNATIONS {
        pt = opt_pt_exact(m, n, prob)?;
        m = (prob.m_min..=prob.m_max)
            .max_by(|&x, &y| {
                ee_objective(x, n, pt, prob).partial_cmp(&ee_objective(y, n, pt, prob)).unwrap()
            })
            .unwrap();
        n = (1..=prob.n_max)
            .max_by(|&x, &y| {
                ee_objective(m, x, pt, prob).partial_cmp(&ee_objective(m, y, pt, prob)).unwrap()
            })
            .unwrap();
        let f2 = ee_objective(m, n, pt, prob);
        trace.push(f2);
        let done = (f2 - f).abs() < eps;
        f = f2;
        if done {
            break;
        }
    }
    Ok(EESolution {
        m,
        n,
        pt,
        ee: f,
        solver: SolverTag::Algorithm1,
        iterations: trace.len() - 1,
        trace,
    })
}

/// Alternating maximization of the correlation-free bound: closed-ish power,
/// antenna and element steps, no exhaustive search. The solution reports the
/// exact objective at the bound's final point; `trace` holds bound values.
pub fn algorithm2(prob: &EEProblem, eps: f64, start: (usize, usize, f64)) -> Result<EESolution> {
    let (mut m, mut n, mut pt) = start;
    m = m.clamp(prob.m_min, prob.m_max);
    n = n.clamp(1, prob.n_max);
    pt = pt.clamp(f64::MIN_POSITIVE, prob.p_max);
    let mut fu = ee_upper_bound(m, n, pt, prob);
    let mut trace = vec![fu];
    for _ in 0..MAX_ALTERNATIONS {
        pt = opt_pt_bound(m, n, prob)?;
        m = opt_m_bound(n, pt, prob);
        n = opt_n_bound(m, pt, prob);
        let fu2 = ee_upper_bound(m, n, pt, prob);
        trace.push(fu2);
        let done = (fu2 - fu).abs() < eps;
        fu = fu2;
        if done {
            break;
        }
    }
    Ok(EESolution {
        m,
        n,
        pt,
        ee: ee_objective(m, n, pt, prob),
        solver: SolverTag::Algorithm2,
        iterations: trace.len() - 1,
        trace,
    })
}

/// Permutation-sum determinant of a (small) normalized covariance; a test
/// oracle for the eigenvalue-product determinant, guarded to `M <= 4`.
pub fn leibniz_det(r_bar: &CMat) -> Result<f64> {
    let m = r_bar.nrows();
    if m != r_bar.ncols() {
        return Err(Error::InvalidArgument("determinant needs a square matrix".into()));
    }
    if m > 4 {
        return Err(Error::Guard(format!("Leibniz expansion limited to M <= 4, got {m}")));
    }
    let mut idx: Vec<usize> = (0..m).collect();
    let mut total = crate::Cplx::new(0.0, 0.0);
    // Heap's algorithm; each swap is a transposition, so the signature flips
    fn visit(k: usize, idx: &mut Vec<usize>, sign: &mut f64, r: &CMat, acc: &mut crate::Cplx) {
        if k <= 1 {
            let mut term = crate::Cplx::new(*sign, 0.0);
            for (row, &col) in idx.iter().enumerate() {
                term *= r[(row, col)];
            }
            *acc += term;
            return;
        }
        for i in 0..k - 1 {
            visit(k - 1, idx, sign, r, acc);
            if k % 2 == 0 {
                idx.swap(i, k - 1);
            } else {
                idx.swap(0, k - 1);
            }
            *sign = -*sign;
        }
        visit(k - 1, idx, sign, r, acc);
    }
    let mut sign = 1.0;
    visit(m, &mut idx, &mut sign, r_bar, &mut total);
    Ok(total.re)
}
