//! Beam sets, per-beam SINRs and the schedulers for one coherence interval.
//!
//! RBF transmits on `M` random orthonormal beams and serves each beam to the
//! user reporting the largest SINR on it; DBF does the same with the fixed
//! eigenvector beam set of the channel covariance. ZF with greedy
//! semi-orthogonal user selection is the full-CSI benchmark, and the coherent
//! exhaustive search replaces random IRS phases with the best tuple from a
//! discrete grid, serving as the upper bound the random rotations scheme is
//! compared against.

use rand::Rng;

use crate::channel::{CovarianceModel, Fading};
use crate::error::{Error, Result};
use crate::linalg::unitarity_defect;
use crate::{CMat, CVec, Cplx};

/// How a beam set was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    RandomIsotropic,
    DeterministicEigen,
}

/// An `M x M` unitary whose columns are the transmit beams.
#[derive(Debug, Clone)]
pub struct BeamformerSet {
    pub phi: CMat,
    pub provenance: Provenance,
}

impl BeamformerSet {
    pub fn m(&self) -> usize {
        self.phi.ncols()
    }

    pub fn beam(&self, m: usize) -> CVec {
        self.phi.column(m).clone_owned()
    }
}

/// Result of scheduling one coherence interval.
#[derive(Debug, Clone)]
pub struct ScheduleOutcome {
    /// Winning user per beam (RBF/DBF) or the selected users (ZFS).
    pub winners: Vec<usize>,
    /// The SINR (or ZF post-processing SNR) each winner is served at.
    pub winner_sinrs: Vec<f64>,
    /// Instantaneous sum rate, natural-log units.
    pub sum_rate: f64,
}

/// Draws an isotropically distributed unitary: Gaussian matrix, QR, then the
/// diagonal phase fix that makes the factor Haar distributed.
pub fn isotropic_beams<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<BeamformerSet> {
    if m == 0 {
        return Err(Error::InvalidArgument("beam set needs M >= 1".into()));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    loop {
        let y = CMat::from_fn(m, m, |_, _| {
            let re: f64 = rng.sample(rand_distr::StandardNormal);
            let im: f64 = rng.sample(rand_distr::StandardNormal);
            Cplx::new(re * s, im * s)
        });
        let qr = y.qr();
        let r = qr.r();
        if (0..m).any(|i| r[(i, i)].norm() < 1e-12) {
            continue; // numerically rank deficient, re-draw
        }
        let mut phi = qr.q();
        for i in 0..m {
            let u = r[(i, i)] / r[(i, i)].norm();
            for row in 0..m {
                phi[(row, i)] *= u;
            }
        }
        debug_assert!(unitarity_defect(&phi) < 1e-10);
        return Ok(BeamformerSet { phi, provenance: Provenance::RandomIsotropic });
    }
}

/// The DBF beam set: eigenvectors of the normalized covariance, ordered by
/// ascending eigenvalue, so beam `m` attains `1 / (phi' Lambda^-1 phi) =
/// lambda_m(R_bar)` and the per-beam gains multiply out to `det(R_bar)`.
pub fn dbf_matrix(cov: &CovarianceModel) -> BeamformerSet {
    BeamformerSet { phi: cov.eigenvectors().clone(), provenance: Provenance::DeterministicEigen }
}

/// SINR of beam `m` for channel `h`: desired power over noise plus the power
/// leaked onto the other beams.
pub fn sinr(h: &CVec, beams: &BeamformerSet, m: usize, pt: f64, noise: f64) -> f64 {
    let mm = beams.m();
    assert!(m < mm, "beam index {m} out of range");
    assert!(pt > 0.0 && noise > 0.0, "powers must be positive");
    let mut desired = 0.0;
    let mut total = 0.0;
    for i in 0..mm {
        let p = h.dotc(&beams.beam(i)).norm_sqr();
        total += p;
        if i == m {
            desired = p;
        }
    }
    desired / (mm as f64 * noise / pt + (total - desired))
}

/// RBF/DBF scheduler: on each beam serve the user with the highest SINR.
/// One user may win several beams; ties go to the lowest user index.
pub fn rbf_schedule(
    users: &[CVec],
    beams: &BeamformerSet,
    pt: f64,
    noise: f64,
) -> Result<ScheduleOutcome> {
    let m = beams.m();
    let k = users.len();
    if k < m {
        return Err(Error::InvalidArgument(format!("need K >= M, got K={k}, M={m}")));
    }
    if pt <= 0.0 || noise <= 0.0 {
        return Err(Error::InvalidArgument("powers must be positive".into()));
    }
    let floor = m as f64 * noise / pt;
    let mut winners = vec![0usize; m];
    let mut best = vec![f64::NEG_INFINITY; m];
    let mut proj = vec![0.0f64; m];
    for (ku, h) in users.iter().enumerate() {
        let mut total = 0.0;
        for (i, p) in proj.iter_mut().enumerate() {
            *p = h.dotc(&beams.beam(i)).norm_sqr();
            total += *p;
        }
        for i in 0..m {
            let g = proj[i] / (floor + (total - proj[i]));
            if g > best[i] {
                best[i] = g;
                winners[i] = ku;
            }
        }
    }
    let sum_rate = best.iter().map(|g| g.ln_1p()).sum();
    Ok(ScheduleOutcome { winners, winner_sinrs: best, sum_rate })
}

/// Semi-orthogonality threshold for greedy ZF user selection.
pub const ZFS_ALPHA: f64 = 0.3;

fn zf_rate(selected: &[usize], users: &[CVec], pt: f64, noise: f64) -> Option<(Vec<f64>, f64)> {
    let s = selected.len();
    let gram = CMat::from_fn(s, s, |i, j| users[selected[j]].dotc(&users[selected[i]]));
    let inv = gram.try_inverse()?;
    let mut snrs = Vec::with_capacity(s);
    let mut rate = 0.0;
    for i in 0..s {
        let d = inv[(i, i)].re;
        if d <= 0.0 {
            return None;
        }
        let snr = pt / (s as f64 * noise) / d;
        rate += snr.ln_1p();
        snrs.push(snr);
    }
    Some((snrs, rate))
}

/// Zero-forcing with greedy semi-orthogonal user selection: grow the served
/// set along near-orthogonal directions, split the power equally, and stop as
/// soon as adding a user no longer improves the ZF sum rate (or the selected
/// channel matrix loses rank).
pub fn zfs_schedule(users: &[CVec], pt: f64, noise: f64) -> Result<ScheduleOutcome> {
    if users.is_empty() {
        return Err(Error::InvalidArgument("need at least one user".into()));
    }
    if pt <= 0.0 || noise <= 0.0 {
        return Err(Error::InvalidArgument("powers must be positive".into()));
    }
    let m = users[0].len();
    let mut pool: Vec<usize> = (0..users.len()).collect();
    let mut basis: Vec<CVec> = Vec::new();
    let mut selected: Vec<usize> = Vec::new();
    let mut snrs: Vec<f64> = Vec::new();
    let mut rate = 0.0f64;

    while selected.len() < m && !pool.is_empty() {
        // residual of each candidate orthogonal to the span of the selected
        let mut best_k = None;
        let mut best_norm = 0.0;
        let mut best_dir = CVec::zeros(m);
        for &k in &pool {
            let mut g = users[k].clone();
            for b in &basis {
                let c = b.dotc(&g);
                g -= b * c;
            }
            let n2 = g.norm_squared();
            if n2 > best_norm {
                best_norm = n2;
                best_k = Some(k);
                best_dir = g;
            }
        }
        let Some(kstar) = best_k else { break };
        if best_norm <= 1e-24 {
            break;
        }
        let mut candidate = selected.clone();
        candidate.push(kstar);
        match zf_rate(&candidate, users, pt, noise) {
            Some((s, r)) if selected.is_empty() || r > rate => {
                selected = candidate;
                snrs = s;
                rate = r;
            }
            _ => break, // rate dropped or Gram went singular: keep previous set
        }
        let dir = best_dir.unscale(best_norm.sqrt());
        basis.push(dir.clone());
        pool.retain(|&k| {
            if k == kstar {
                return false;
            }
            let hn = users[k].norm();
            hn == 0.0 || users[k].dotc(&dir).norm() / hn < ZFS_ALPHA
        });
    }
    Ok(ScheduleOutcome { winners: selected, winner_sinrs: snrs, sum_rate: rate })
}

/// Budget guard for the exhaustive phase enumeration.
pub const COHERENT_GUARD: u128 = 10_000_000;

/// Exhaustive coherent IRS search: evaluates the scheduler's sum rate for
/// every phase tuple on the `2^bits`-point grid and keeps the best, for one
/// fixed fading realization and beam set. Returns the winning phase tuple and
/// its outcome. The first tuple found wins ties, so the result is
/// deterministic.
pub fn coherent_exhaustive(
    h1: &CMat,
    alphas: &[f64],
    bits: u8,
    fading: &Fading,
    beta_r: f64,
    beta_d: f64,
    beams: &BeamformerSet,
    pt: f64,
    noise: f64,
) -> Result<(Vec<f64>, ScheduleOutcome)> {
    let (m, n) = h1.shape();
    if bits == 0 {
        return Err(Error::InvalidArgument("coherent search needs at least one bit".into()));
    }
    if alphas.len() != n {
        return Err(Error::InvalidArgument("alpha count disagrees with H1".into()));
    }
    if beta_r < 0.0 || beta_d < 0.0 {
        return Err(Error::InvalidArgument("path gains must be nonnegative".into()));
    }
    let q = 1u128 << bits;
    let combos = q.checked_pow(n as u32).filter(|&c| c <= COHERENT_GUARD).ok_or_else(|| {
        Error::Guard(format!(
            "phase enumeration needs {q}^{n} evaluations, budget is {COHERENT_GUARD}"
        ))
    })?;

    let qu = q as usize;
    let step = 2.0 * std::f64::consts::PI / qu as f64;
    let grid: Vec<Cplx> = (0..qu)
        .map(|i| {
            let t = i as f64 * step;
            Cplx::new(t.cos(), t.sin())
        })
        .collect();

    // h_k(theta) = W_k e(theta) + base_k, W_k[:,c] = sqrt(beta_r) alpha_c h2_k[c] H1[:,c];
    // the odometer walk below then only ever applies single-element deltas.
    let sr = beta_r.sqrt();
    let sd = beta_d.sqrt();
    let w: Vec<CMat> = fading
        .h2
        .iter()
        .map(|h2| CMat::from_fn(m, n, |r, c| h1[(r, c)] * h2[c] * (sr * alphas[c])))
        .collect();
    let mut current: Vec<CVec> = fading.hd.iter().map(|hd| hd.map(|v| v * sd)).collect();
    for (cur, wk) in current.iter_mut().zip(&w) {
        for c in 0..n {
            for r in 0..m {
                cur[r] += wk[(r, c)] * grid[0];
            }
        }
    }

    let mut digits = vec![0usize; n];
    let mut best_digits = digits.clone();
    let mut best: Option<ScheduleOutcome> = None;
    let mut evaluated: u128 = 0;
    loop {
        let outcome = rbf_schedule(&current, beams, pt, noise)?;
        if best.as_ref().map_or(true, |b| outcome.sum_rate > b.sum_rate) {
            best = Some(outcome);
            best_digits.copy_from_slice(&digits);
        }
        evaluated += 1;
        if evaluated == combos {
            break;
        }
        let mut pos = 0;
        loop {
            let old = digits[pos];
            let new = (old + 1) % qu;
            digits[pos] = new;
            let delta = grid[new] - grid[old];
            for (cur, wk) in current.iter_mut().zip(&w) {
                for r in 0..m {
                    cur[r] += wk[(r, pos)] * delta;
                }
            }
            if new != 0 {
                break;
            }
            pos += 1;
            debug_assert!(pos < n, "odometer overflow");
        }
    }
    let phases = best_digits.iter().map(|&d| d as f64 * step).collect();
    Ok((phases, best.expect("at least one combo evaluated")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{compose_channel, covariance, draw_fading, draw_irs_phases, IrsMode, IrsResponse};
    use crate::geometry::{los_channel, ArrayGeometry};
    use crate::rng::{lane, Purpose};
    use nalgebra::Vector3;

    fn table_h1(m: usize, n1: usize, n2: usize) -> CMat {
        let lam = 0.5;
        let az = std::f64::consts::FRAC_PI_2;
        let bs = ArrayGeometry::ula(Vector3::zeros(), az, 0.0, m, lam, lam).unwrap();
        let irs =
            ArrayGeometry::ura(Vector3::new(0.0, 50.0, 0.0), az, 0.0, n1, n2, lam, lam, lam).unwrap();
        los_channel(&bs, &irs).unwrap().h1
    }

    fn cn_users<R: Rng + ?Sized>(k: usize, m: usize, rng: &mut R) -> Vec<CVec> {
        (0..k)
            .map(|_| {
                CVec::from_fn(m, |_, _| {
                    let re: f64 = rng.sample(rand_distr::StandardNormal);
                    let im: f64 = rng.sample(rand_distr::StandardNormal);
                    Cplx::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
                })
            })
            .collect()
    }

    #[test]
    fn single_beam_is_a_unit_scalar() {
        let b = isotropic_beams(1, &mut lane(0, 0, Purpose::Beams)).unwrap();
        assert!((b.phi[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beams_unitary_across_seeds() {
        for s in 0..1000 {
            let b = isotropic_beams(4, &mut lane(s, 0, Purpose::Beams)).unwrap();
            assert!(unitarity_defect(&b.phi) < 1e-10);
        }
    }

    #[test]
    fn isotropic_projection_follows_beta_law() {
        // |phi_1' v|^2 ~ Beta(1, M-1) for a fixed unit vector v at M = 3;
        // empirical CDF against 1 - (1-x)^2, KS distance below 0.01
        let m = 3;
        let v = CVec::from_fn(m, |i, _| if i == 0 { Cplx::new(1.0, 0.0) } else { Cplx::new(0.0, 0.0) });
        let mut rng = lane(42, 0, Purpose::Beams);
        let draws = 100_000;
        let mut xs: Vec<f64> = (0..draws)
            .map(|_| {
                let b = isotropic_beams(m, &mut rng).unwrap();
                b.beam(0).dotc(&v).norm_sqr()
            })
            .collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks = 0.0f64;
        for (i, &x) in xs.iter().enumerate() {
            let cdf = 1.0 - (1.0 - x) * (1.0 - x);
            let lo = i as f64 / draws as f64;
            let hi = (i + 1) as f64 / draws as f64;
            ks = ks.max((cdf - lo).abs()).max((cdf - hi).abs());
        }
        assert!(ks < 0.01, "KS = {ks}");
    }

    #[test]
    fn sinr_single_beam_has_no_interference() {
        let h = CVec::from_vec(vec![Cplx::new(0.6, 0.8)]);
        let beams =
            BeamformerSet { phi: CMat::identity(1, 1), provenance: Provenance::DeterministicEigen };
        let got = sinr(&h, &beams, 0, 2.0, 0.5);
        assert!((got - 2.0 / 0.5 * h[0].norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn sinr_orthogonal_channel_is_zero() {
        let beams =
            BeamformerSet { phi: CMat::identity(2, 2), provenance: Provenance::DeterministicEigen };
        let h = CVec::from_vec(vec![Cplx::new(0.0, 0.0), Cplx::new(1.0, 0.0)]);
        assert_eq!(sinr(&h, &beams, 0, 1.0, 1.0), 0.0);
    }

    #[test]
    fn sinr_matches_from_scratch_recomputation() {
        let mut rng = lane(7, 0, Purpose::Beams);
        for _ in 0..50 {
            let beams = isotropic_beams(2, &mut rng).unwrap();
            let h = cn_users(1, 2, &mut rng).remove(0);
            let (pt, noise) = (3.0, 0.25);
            for m in 0..2 {
                let got = sinr(&h, &beams, m, pt, noise);
                let p0 = (h[0].conj() * beams.phi[(0, m)] + h[1].conj() * beams.phi[(1, m)]).norm_sqr();
                let o = 1 - m;
                let p1 = (h[0].conj() * beams.phi[(0, o)] + h[1].conj() * beams.phi[(1, o)]).norm_sqr();
                let want = p0 / (2.0 * noise / pt + p1);
                assert!((got - want).abs() <= 1e-12 * want.max(1.0));
            }
        }
    }

    #[test]
    fn parseval_limits_sinr() {
        // sum over beams of |h' phi_i|^2 equals ||h||^2
        let mut rng = lane(8, 0, Purpose::Beams);
        for _ in 0..100 {
            let m = 4;
            let beams = isotropic_beams(m, &mut rng).unwrap();
            let h = cn_users(1, m, &mut rng).remove(0);
            let total: f64 = (0..m).map(|i| h.dotc(&beams.beam(i)).norm_sqr()).sum();
            assert!((total - h.norm_squared()).abs() < 1e-10 * h.norm_squared());
        }
    }

    #[test]
    fn rbf_single_user_single_beam() {
        let users = vec![CVec::from_vec(vec![Cplx::new(0.3, -0.4)])];
        let beams =
            BeamformerSet { phi: CMat::identity(1, 1), provenance: Provenance::DeterministicEigen };
        let out = rbf_schedule(&users, &beams, 1.0, 1.0).unwrap();
        assert_eq!(out.winners, vec![0]);
        assert!((out.sum_rate - 1.25f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rbf_zero_channel_never_wins() {
        let mut rng = lane(9, 0, Purpose::Beams);
        let beams = isotropic_beams(2, &mut rng).unwrap();
        let users = vec![cn_users(1, 2, &mut rng).remove(0), CVec::zeros(2)];
        let out = rbf_schedule(&users, &beams, 1.0, 0.1).unwrap();
        assert_eq!(out.winners, vec![0, 0]);
    }

    #[test]
    fn rbf_matches_brute_force_argmax() {
        let mut rng = lane(10, 0, Purpose::Beams);
        for _ in 0..20 {
            let (m, k) = (3, 7);
            let beams = isotropic_beams(m, &mut rng).unwrap();
            let users = cn_users(k, m, &mut rng);
            let out = rbf_schedule(&users, &beams, 2.0, 0.3).unwrap();
            let mut rate = 0.0;
            for b in 0..m {
                let mut best = f64::NEG_INFINITY;
                let mut who = 0;
                for (u, h) in users.iter().enumerate() {
                    let g = sinr(h, &beams, b, 2.0, 0.3);
                    if g > best {
                        best = g;
                        who = u;
                    }
                }
                assert_eq!(out.winners[b], who);
                rate += best.ln_1p();
            }
            assert!((out.sum_rate - rate).abs() < 1e-12);
        }
    }

    #[test]
    fn rbf_winners_invariant_to_common_power_scaling() {
        let mut rng = lane(11, 0, Purpose::Beams);
        let beams = isotropic_beams(2, &mut rng).unwrap();
        let users = cn_users(40, 2, &mut rng);
        let a = rbf_schedule(&users, &beams, 1.0, 1e-9).unwrap();
        let b = rbf_schedule(&users, &beams, 7.0, 1e-9).unwrap();
        assert_eq!(a.winners, b.winners);
    }

    #[test]
    fn dbf_identity_covariance_gives_identity() {
        let h1 = CMat::from_element(2, 1, Cplx::new(1.0, 0.0));
        let cov = covariance(&h1, &[0.0], 0.0, 1.0).unwrap();
        let b = dbf_matrix(&cov);
        assert!(unitarity_defect(&b.phi) < 1e-12);
        assert!((b.phi[(0, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(b.phi[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn dbf_beams_are_eigenbasis() {
        let h1 = table_h1(2, 8, 2);
        let cov = covariance(&h1, &[1.0; 16], 2.0, 1.0).unwrap();
        let beams = dbf_matrix(&cov);
        // phi_bar_m = U phi_m are standard basis vectors
        let pb = cov.u() * &beams.phi;
        for m in 0..2 {
            for r in 0..2 {
                let want = if r == m { 1.0 } else { 0.0 };
                assert!((pb[(r, m)].norm() - want).abs() < 1e-10);
            }
        }
        // per-beam gains 1/(phi_bar' Lambda^-1 phi_bar) recover the eigenvalues,
        // and their logs sum to log det
        let mut sum = 0.0;
        for m in 0..2 {
            let mut q = 0.0;
            for r in 0..2 {
                q += pb[(r, m)].norm_sqr() / cov.lambda_bar()[r];
            }
            let gain = 1.0 / q;
            assert!((gain - cov.lambda_bar()[m]).abs() < 1e-10);
            sum += gain.ln();
        }
        assert!((sum - cov.log_det_rbar()).abs() < 1e-10);
    }

    #[test]
    fn zfs_single_user_is_mrt() {
        let h = CVec::from_vec(vec![Cplx::new(0.6, 0.0), Cplx::new(0.0, 0.8)]);
        let out = zfs_schedule(&[h.clone()], 2.0, 0.5).unwrap();
        assert_eq!(out.winners, vec![0]);
        let want = (1.0 + 2.0 / 0.5 * h.norm_squared()).ln();
        assert!((out.sum_rate - want).abs() < 1e-12);
    }

    #[test]
    fn zfs_rejects_duplicate_channels() {
        let h = CVec::from_vec(vec![Cplx::new(1.0, 0.0), Cplx::new(0.5, 0.5)]);
        let out = zfs_schedule(&[h.clone(), h.clone()], 1.0, 0.1).unwrap();
        assert_eq!(out.winners.len(), 1);
    }

    #[test]
    fn zfs_greedy_beats_every_singleton() {
        let mut rng = lane(12, 0, Purpose::Beams);
        for _ in 0..25 {
            let users = cn_users(4, 2, &mut rng);
            let out = zfs_schedule(&users, 5.0, 0.2).unwrap();
            for h in &users {
                let single = (1.0 + 5.0 / 0.2 * h.norm_squared()).ln();
                assert!(out.sum_rate >= single - 1e-9);
            }
        }
    }

    #[test]
    fn coherent_one_element_one_bit() {
        let h1 = CMat::from_element(1, 1, Cplx::new(1.0, 0.0));
        let mut rng = lane(13, 0, Purpose::Fading);
        let fading = draw_fading(1, 1, 2, &mut rng).unwrap();
        let beams =
            BeamformerSet { phi: CMat::identity(1, 1), provenance: Provenance::DeterministicEigen };
        let (phases, out) =
            coherent_exhaustive(&h1, &[1.0], 1, &fading, 1.0, 1.0, &beams, 1.0, 1.0).unwrap();
        assert_eq!(phases.len(), 1);
        let mut want = f64::NEG_INFINITY;
        for t in [0.0, std::f64::consts::PI] {
            let irs = IrsResponse { phases: vec![t], alphas: vec![1.0], mode: IrsMode::Discrete { bits: 1 } };
            let re = compose_channel(&h1, &irs, &fading, 1.0, 1.0).unwrap();
            want = want.max(rbf_schedule(&re.users, &beams, 1.0, 1.0).unwrap().sum_rate);
        }
        assert!((out.sum_rate - want).abs() < 1e-10);
    }

    #[test]
    fn coherent_matches_independent_enumeration() {
        let h1 = table_h1(2, 2, 1);
        let mut rng = lane(14, 0, Purpose::Fading);
        let fading = draw_fading(2, 2, 3, &mut rng).unwrap();
        let beams = isotropic_beams(2, &mut lane(14, 0, Purpose::Beams)).unwrap();
        let (_, out) =
            coherent_exhaustive(&h1, &[1.0; 2], 1, &fading, 1.5, 0.5, &beams, 2.0, 0.3).unwrap();
        let mut want = f64::NEG_INFINITY;
        for a in [0.0, std::f64::consts::PI] {
            for b in [0.0, std::f64::consts::PI] {
                let irs = IrsResponse {
                    phases: vec![a, b],
                    alphas: vec![1.0; 2],
                    mode: IrsMode::Discrete { bits: 1 },
                };
                let re = compose_channel(&h1, &irs, &fading, 1.5, 0.5).unwrap();
                want = want.max(rbf_schedule(&re.users, &beams, 2.0, 0.3).unwrap().sum_rate);
            }
        }
        assert!((out.sum_rate - want).abs() < 1e-10);
    }

    #[test]
    fn coherent_beats_random_rotations() {
        let h1 = table_h1(2, 4, 1);
        let beams = isotropic_beams(2, &mut lane(15, 0, Purpose::Beams)).unwrap();
        for trial in 0..100 {
            let fading = draw_fading(2, 4, 6, &mut lane(15, trial, Purpose::Fading)).unwrap();
            let irs =
                draw_irs_phases(4, IrsMode::Discrete { bits: 2 }, &mut lane(15, trial, Purpose::IrsPhases))
                    .unwrap();
            let re = compose_channel(&h1, &irs, &fading, 1.0, 0.5).unwrap();
            let random = rbf_schedule(&re.users, &beams, 1.0, 0.2).unwrap().sum_rate;
            let (_, best) =
                coherent_exhaustive(&h1, &[1.0; 4], 2, &fading, 1.0, 0.5, &beams, 1.0, 0.2).unwrap();
            assert!(best.sum_rate >= random - 1e-12, "trial {trial}");
        }
    }

    #[test]
    fn coherent_guard_trips() {
        let h1 = CMat::from_element(1, 30, Cplx::new(1.0, 0.0));
        let mut rng = lane(16, 0, Purpose::Fading);
        let fading = draw_fading(1, 30, 1, &mut rng).unwrap();
        let beams =
            BeamformerSet { phi: CMat::identity(1, 1), provenance: Provenance::DeterministicEigen };
        let err = coherent_exhaustive(&h1, &[1.0; 30], 2, &fading, 1.0, 1.0, &beams, 1.0, 1.0);
        assert!(matches!(err, Err(Error::Guard(_))));
    }
}
