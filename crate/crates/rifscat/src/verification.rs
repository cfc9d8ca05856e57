//! Brute-force oracles: real-axis root scanning, Klein-Gordon norm quadrature and
//! termwise vacuum moments. These paths are slow on purpose and do not call the
//! solvers they check.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::medium::{velocity_matched, MediumSpec, StepConfig};
use crate::modes::{dispersion_roots, Label, LocalModeVector, ModeId, Side};
use crate::num::C_LIGHT;
use crate::observables::{covariance, photon_number, variance, DetectorFilter};
use crate::scattering::{ScatteringResult, Solver};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub name: String,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub pass: bool,
}

impl OracleReport {
    fn new(name: &str, errors: &[f64], tolerance: f64) -> Self {
        let max_abs_error = errors.iter().fold(0.0f64, |a, &b| a.max(b));
        Self {
            name: name.into(),
            max_abs_error,
            tolerance,
            samples: errors.len(),
            pass: !errors.is_empty() && errors.iter().all(|e| e.is_finite()) && max_abs_error < tolerance,
        }
    }
}

/// F(ω,k)·Π D_i, written out directly; continuous across the resonance poles.
fn cleared_residual(m: &MediumSpec<f64>, u: f64, omega: f64, k: f64) -> f64 {
    let gamma = 1.0 / (1.0 - (u / C_LIGHT).powi(2)).sqrt();
    let s = gamma * (omega + u * k);
    let d: Vec<f64> = (0..3).map(|i| 1.0 - (s / m.omega(i)).powi(2)).collect();
    let mut g = (omega * omega - C_LIGHT * C_LIGHT * k * k) * d[0] * d[1] * d[2];
    for i in 0..3 {
        let others: f64 = (0..3).filter(|&j| j != i).map(|j| d[j]).product();
        g += 4.0 * std::f64::consts::PI * m.kappa(i) * s * s * others;
    }
    g
}

/// Real roots of the dispersion relation in `k_range` by sign-change scanning on an
/// asinh-spaced grid, each refined by bisection.
pub fn root_scan_oracle(
    medium: &MediumSpec<f64>,
    u: f64,
    omega: f64,
    k_range: (f64, f64),
    n_samples: usize,
) -> Result<Vec<f64>> {
    let f = |k: f64| cleared_residual(medium, u, omega, k);
    let (lo, hi) = k_range;
    if !(lo < hi) || n_samples < 2 {
        return Err(Error::RangeTooNarrow("empty k range".into()));
    }
    if !(f(lo) > 0.0 && f(hi) > 0.0) {
        return Err(Error::RangeTooNarrow(format!("residual not positive at the ends of ({lo:e}, {hi:e})")));
    }
    let k0 = omega / C_LIGHT * 1e-3;
    let (x0, x1) = ((lo / k0).asinh(), (hi / k0).asinh());
    let at = |i: usize| k0 * (x0 + (x1 - x0) * i as f64 / (n_samples - 1) as f64).sinh();
    let mut roots = Vec::new();
    let mut kp = at(0);
    let mut fp = f(kp);
    for i in 1..n_samples {
        let k = at(i);
        let fk = f(k);
        if (fk > 0.0) != (fp > 0.0) {
            let (mut a, mut b, pos_a) = (kp, k, fp > 0.0);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if (f(mid) > 0.0) == pos_a {
                    a = mid;
                } else {
                    b = mid;
                }
                if (b - a).abs() <= 1e-15 * a.abs().max(b.abs()) {
                    break;
                }
            }
            roots.push(0.5 * (a + b));
        }
        kp = k;
        fp = fk;
    }
    if roots.len() % 2 == 1 {
        return Err(Error::RangeTooNarrow(format!("odd number of sign changes ({})", roots.len())));
    }
    Ok(roots)
}

/// Generous k window for `root_scan_oracle`.
pub fn default_k_range(medium: &MediumSpec<f64>, u: f64, omega: f64) -> (f64, f64) {
    let gamma = 1.0 / (1.0 - (u / C_LIGHT).powi(2)).sqrt();
    let kmax = 100.0 * gamma * (omega + medium.omega(2)) / u;
    (-kmax, kmax)
}

/// ∫ i(φ†Π − Π†φ) dx over a box for the plane wave exp(i(kx − ωt)) with field amplitudes
/// (A, P₁, P₂, P₃). Spatial derivatives by a 9-point stencil, time derivatives analytic.
pub fn kg_norm_quadrature(
    medium: &MediumSpec<f64>,
    u: f64,
    omega: f64,
    k: f64,
    amps: [C64; 4],
    box_length: f64,
) -> f64 {
    let gamma = 1.0 / (1.0 - (u / C_LIGHT).powi(2)).sqrt();
    let i = C64::i();
    let h = (2.0 * std::f64::consts::PI / k.abs().max(1.0) / 100.0).min(box_length / 16.0);
    let n = (box_length / h).ceil() as usize;
    let h = box_length / n as f64;
    let field = |x: f64| -> [C64; 4] {
        let ph = (i * k * x).exp();
        [amps[0] * ph, amps[1] * ph, amps[2] * ph, amps[3] * ph]
    };
    const STENCIL: [f64; 9] =
        [1.0 / 280.0, -4.0 / 105.0, 0.2, -0.8, 0.0, 0.8, -0.2, 4.0 / 105.0, -1.0 / 280.0];
    let dx = |x: f64| -> [C64; 4] {
        let mut d = [C64::new(0.0, 0.0); 4];
        for (j, c) in STENCIL.iter().enumerate() {
            let f = field(x + (j as f64 - 4.0) * h);
            for q in 0..4 {
                d[q] += f[q] * (c / h);
            }
        }
        d
    };
    let mut total = 0.0;
    for p in 0..=n {
        let x = p as f64 * h;
        let phi = field(x);
        let d = dx(x);
        // ∂_t of exp(-iωt) is -iω
        let dt = |z: C64| -i * omega * z;
        let mut pi = [C64::new(0.0, 0.0); 4];
        pi[0] = dt(phi[0]) / (4.0 * std::f64::consts::PI * C_LIGHT * C_LIGHT);
        for q in 1..4 {
            let kq = medium.kappa(q - 1);
            let oq = medium.omega(q - 1);
            pi[q] = phi[0] * (gamma / C_LIGHT) + (dt(phi[q]) - d[q] * u) * (gamma * gamma / (kq * oq * oq));
        }
        let mut z = C64::new(0.0, 0.0);
        for q in 0..4 {
            z += phi[q].conj() * pi[q] - pi[q].conj() * phi[q];
        }
        let rho = (i * z).re;
        let w = if p == 0 || p == n { 0.5 * h } else { h };
        total += w * rho;
    }
    total
}

/// Klein-Gordon norm of a propagating local mode integrated over a box.
pub fn kg_norm_oracle(medium: &MediumSpec<f64>, u: f64, mode: &LocalModeVector<f64>, box_length: f64) -> f64 {
    let amps = [mode.w[0], mode.w[1], mode.w[2], mode.w[3]];
    kg_norm_quadrature(medium, u, mode.mode.omega, mode.mode.k.re, amps, box_length)
}

/// Vacuum moments of two filtered detector modes from an explicit Bogoliubov map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentResult {
    pub mean1: f64,
    pub mean2: f64,
    pub cov: f64,
    pub var1: f64,
    pub var2: f64,
}

/// Linear combination Σ x_m b_m + y_m b_m† over input labels m = (grid point, column).
struct Ladder {
    x: Vec<C64>,
    y: Vec<C64>,
}

impl Ladder {
    fn dagger(&self) -> Ladder {
        Ladder { x: self.y.iter().map(|z| z.conj()).collect(), y: self.x.iter().map(|z| z.conj()).collect() }
    }
}

/// ⟨0|P Q|0⟩ for linear P, Q: only b_m b_m† survives.
fn contract(p: &Ladder, q: &Ladder) -> C64 {
    p.x.iter().zip(&q.y).map(|(a, b)| a * b).sum()
}

fn detector_mode(grid: &[ScatteringResult<f64>], alpha: ModeId, filter: &DetectorFilter<f64>, w: &[f64]) -> Ladder {
    let mut x = vec![C64::new(0.0, 0.0); grid.len() * 8];
    let mut y = x.clone();
    for (i, s) in grid.iter().enumerate() {
        if !filter.contains(s.omega) {
            continue;
        }
        let Some(r) = s.out_index(alpha) else { continue };
        let ga = s.sigmas.g_out[r];
        let amp = w[i].sqrt();
        for b in 0..8 {
            let mut c = s.s[(r, b)];
            if ga < 0.0 {
                c = c.conj();
            }
            if s.sigmas.g_in[b] == ga {
                x[i * 8 + b] = c * amp;
            } else {
                y[i * 8 + b] = c * amp;
            }
        }
    }
    Ladder { x, y }
}

/// Evaluates ⟨N₁⟩, ⟨N₂⟩, cov and the two variances by Wick contraction of
/// ⟨A₁†A₁A₂†A₂⟩ with N = (τ/2π) A†A and A = Σ_i √w_i a_α(ω_i).
pub fn moment_oracle(
    grid: &[ScatteringResult<f64>],
    alphas: (ModeId, ModeId),
    filters: (&DetectorFilter<f64>, &DetectorFilter<f64>),
) -> MomentResult {
    let om: Vec<f64> = grid.iter().map(|s| s.omega).collect();
    let mut w = vec![0.0; om.len()];
    for i in 0..om.len().saturating_sub(1) {
        w[i] += 0.5 * (om[i + 1] - om[i]);
        w[i + 1] += 0.5 * (om[i + 1] - om[i]);
    }
    let a1 = detector_mode(grid, alphas.0, filters.0, &w);
    let a2 = detector_mode(grid, alphas.1, filters.1, &w);
    let (d1, d2) = (a1.dagger(), a2.dagger());
    let k1 = filters.0.tau / (2.0 * std::f64::consts::PI);
    let k2 = filters.1.tau / (2.0 * std::f64::consts::PI);
    // ⟨P†P Q†Q⟩ minus the disconnected part: the two remaining pairings
    let connected = |p: &Ladder, pd: &Ladder, q: &Ladder, qd: &Ladder| -> f64 {
        (contract(pd, qd) * contract(p, q) + contract(pd, q) * contract(p, qd)).re
    };
    MomentResult {
        mean1: k1 * contract(&d1, &a1).re,
        mean2: k2 * contract(&d2, &a2).re,
        cov: k1 * k2 * connected(&a1, &d1, &a2, &d2),
        var1: k1 * k1 * connected(&a1, &d1, &a1, &d1),
        var2: k2 * k2 * connected(&a2, &d2, &a2, &d2),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

fn random_solver(rng: &mut ChaCha8Rng, dn_range: (f64, f64)) -> Solver<f64> {
    let m = MediumSpec::fused_silica();
    let lam = rng.random_range(380e-9..1000e-9);
    let u = velocity_matched(&m, lam).expect("transparent");
    let dn = (rng.random_range(dn_range.0.ln()..dn_range.1.ln())).exp();
    Solver::new(StepConfig::new(m, dn, u).expect("valid step"))
}

/// Companion-matrix roots vs the real-axis scan on randomized configurations.
pub fn check_roots(n_configs: usize, seed: u64) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errs = Vec::new();
    while errs.len() < n_configs {
        let s = random_solver(&mut rng, (1e-6, 1e-2));
        let omega = (rng.random_range((1e12f64).ln()..(3e15f64).ln())).exp();
        if s.check_clear(omega).is_err() {
            continue;
        }
        for side in [Side::Left, Side::Right] {
            let m = s.medium(side);
            let Ok(roots) = dispersion_roots(m, s.step.u, omega) else { continue };
            let mut real: Vec<f64> = roots.iter().filter(|k| k.im == 0.0).map(|k| k.re).collect();
            real.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let scan = root_scan_oracle(m, s.step.u, omega, default_k_range(m, s.step.u, omega), 200_000);
            let e = match scan {
                Ok(sc) if sc.len() == real.len() => sc.iter().zip(&real).map(|(a, b)| rel(*a, *b)).fold(0.0, f64::max),
                _ => f64::INFINITY,
            };
            errs.push(e);
        }
    }
    OracleReport::new("root_scan", &errs, 1e-8)
}

/// Algebraic KG density × box length vs quadrature.
pub fn check_kg_norm(n_configs: usize, seed: u64) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errs = Vec::new();
    while errs.len() < n_configs {
        let s = random_solver(&mut rng, (1e-6, 1e-2));
        let omega = (rng.random_range((1e12f64).ln()..(3e15f64).ln())).exp();
        let side = if rng.random_bool(0.5) { Side::Left } else { Side::Right };
        let Ok(modes) = s.local_modes(omega, side) else { continue };
        let prop: Vec<_> = modes.iter().filter(|m| m.mode.is_propagating()).collect();
        let m = prop[rng.random_range(0..prop.len())];
        let wavelength = 2.0 * std::f64::consts::PI / m.mode.k.re.abs();
        let box_length = wavelength * rng.random_range(1.0..20.0);
        let q = kg_norm_oracle(s.medium(side), s.step.u, m, box_length);
        errs.push(rel(q, m.kg_norm_density * box_length));
    }
    OracleReport::new("kg_norm", &errs, 1e-8)
}

/// Closed-form covariance and variance vs the Wick oracle on 3-5 point grids.
pub fn check_moments(n_configs: usize, seed: u64) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errs = Vec::new();
    let nol = ModeId::new(Label::No, Side::Left);
    while errs.len() < n_configs {
        let s = random_solver(&mut rng, (1e-6, 1e-4));
        let Some(h) = s.intervals else { continue };
        let white = rng.random_bool(0.5);
        let (iv, partner) = if white {
            (h.whi, ModeId::new(Label::Lo, Side::Left))
        } else {
            (h.bhi, ModeId::new(Label::Mo, Side::Right))
        };
        let Some((a, b)) = iv else { continue };
        let npts = rng.random_range(3..=5);
        let t0 = rng.random_range(0.05..0.9);
        let span = 1e-3 * (b - a);
        let om: Vec<f64> = (0..npts).map(|i| a + (b - a) * t0 + span * i as f64 / (npts - 1) as f64).collect();
        let Ok(grid) = om.iter().map(|&w| s.scatter(w)).collect::<Result<Vec<_>>>() else { continue };
        let tau = (rng.random_range((1e-12f64).ln()..(1e-6f64).ln())).exp();
        let f1 = DetectorFilter::new(om[0], om[npts - 1], tau).unwrap();
        let cut = om[rng.random_range(0..npts - 1)];
        let f2 = DetectorFilter::new(cut, om[npts - 1], tau).unwrap();
        let pair = if rng.random_bool(0.5) { (nol, partner) } else { (partner, nol) };
        let o = moment_oracle(&grid, pair, (&f1, &f2));
        let (Ok(cov), Ok(n1)) = (covariance(&grid, pair.0, pair.1, &f1, &f2), photon_number(&grid, pair.0, &f1)) else {
            continue;
        };
        let e = rel(cov, o.cov).max(rel(variance(n1, &f1), o.var1)).max(rel(n1, o.mean1));
        errs.push(e);
    }
    OracleReport::new("moments", &errs, 1e-10)
}

/// The full randomized suite.
pub fn run_suite(n_configs: usize, seed: u64) -> Vec<OracleReport> {
    vec![check_roots(n_configs, seed), check_kg_norm(n_configs, seed + 1), check_moments(n_configs, seed + 2)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::subluminal_interval;

    fn solver(dn: f64) -> Solver<f64> {
        let m = MediumSpec::fused_silica();
        let u = velocity_matched(&m, 400e-9).unwrap();
        Solver::new(StepConfig::new(m, dn, u).unwrap())
    }

    #[test]
    fn scan_counts_by_scenario() {
        let s = solver(2e-6);
        let m = &s.step.right_medium;
        let u = s.step.u;
        let sb = subluminal_interval(m, u).unwrap();
        let inside = 0.5 * (sb.omega_min + sb.omega_max);
        let r = root_scan_oracle(m, u, inside, default_k_range(m, u, inside), 100_000).unwrap();
        assert_eq!(r.len(), 8);
        let below = 0.5 * sb.omega_min;
        let r = root_scan_oracle(m, u, below, default_k_range(m, u, below), 100_000).unwrap();
        assert_eq!(r.len(), 6);
    }

    #[test]
    fn zero_step_sides_share_roots() {
        let s = solver(0.0);
        let w = 2e14;
        let l = root_scan_oracle(&s.left, s.step.u, w, default_k_range(&s.left, s.step.u, w), 50_000).unwrap();
        let r = root_scan_oracle(&s.step.right_medium, s.step.u, w, default_k_range(&s.left, s.step.u, w), 50_000).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn narrow_range_rejected() {
        let s = solver(2e-6);
        let m = &s.step.right_medium;
        let r = root_scan_oracle(m, s.step.u, 2e14, (-1.0, 1.0), 100);
        assert!(matches!(r, Err(Error::RangeTooNarrow(_))));
    }

    #[test]
    fn kg_quadrature_properties() {
        let s = solver(2e-6);
        let modes = s.local_modes(1e14, Side::Right).unwrap();
        let m = &modes[1];
        let lam = 2.0 * std::f64::consts::PI / m.mode.k.re.abs();
        let q1 = kg_norm_oracle(&s.step.right_medium, s.step.u, m, 3.0 * lam);
        let q2 = kg_norm_oracle(&s.step.right_medium, s.step.u, m, 6.0 * lam);
        assert!((q2 / q1 - 2.0).abs() < 1e-8);
        assert_eq!(q1.signum(), m.mode.big_omega.re.signum());
        let amps = [m.w[0].conj(), m.w[1].conj(), m.w[2].conj(), m.w[3].conj()];
        let qc = kg_norm_quadrature(&s.step.right_medium, s.step.u, -m.mode.omega, -m.mode.k.re, amps, 3.0 * lam);
        assert!((qc + q1).abs() < 1e-8 * q1.abs());
    }

    #[test]
    fn uncorrelated_positive_pair_has_zero_covariance() {
        // δn = 0: no anomalous elements anywhere
        let s = solver(0.0);
        let grid: Vec<_> = [1.0e14, 1.001e14, 1.002e14].iter().map(|&w| s.scatter(w).unwrap()).collect();
        let f = DetectorFilter::new(1.0e14, 1.002e14, 1e-9).unwrap();
        let ids = (ModeId::new(Label::U, Side::Left), ModeId::new(Label::Uo, Side::Left));
        let o = moment_oracle(&grid, ids, (&f, &f));
        assert!(o.cov.abs() < 1e-40);
        assert!(o.mean1.abs() < 1e-30);
    }

    #[test]
    fn small_suites_pass() {
        for r in run_suite(4, 11) {
            assert!(r.pass, "{r:?}");
        }
    }
}
