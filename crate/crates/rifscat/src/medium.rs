//! Homogeneous Sellmeier regions, the index step and frame transformations.

use crate::error::{Error, Result};
use crate::num::{c_light, cx, lit, pi, re, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance<T> {
    /// Elastic constant kappa_i (dimensionless).
    pub kappa: T,
    /// Resonance angular frequency, rad/s.
    pub omega: T,
}

/// Three-resonance Hopfield/Sellmeier medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSpec<T> {
    resonances: [Resonance<T>; 3],
}

impl<T: Real> MediumSpec<T> {
    pub fn new(pairs: [(T, T); 3]) -> Result<Self> {
        let mut res = pairs.map(|(kappa, omega)| Resonance { kappa, omega });
        for r in &res {
            if !(r.kappa > T::zero()) || !(r.omega > T::zero()) {
                return Err(Error::InvalidInput(format!(
                    "resonance kappa = {}, omega = {} must both be positive",
                    r.kappa, r.omega
                )));
            }
        }
        res.sort_by(|a, b| a.omega.partial_cmp(&b.omega).unwrap());
        if res[0].omega == res[1].omega || res[1].omega == res[2].omega {
            return Err(Error::InvalidInput("resonance frequencies must be distinct".into()));
        }
        Ok(Self { resonances: res })
    }

    /// Fused silica constants.
    pub fn fused_silica() -> Self {
        Self::new([
            (lit(0.07142), lit(190.341e12)),
            (lit(0.03246), lit(16.2047e15)),
            (lit(0.05540), lit(27.537e15)),
        ])
        .expect("built-in constants are valid")
    }

    pub fn resonances(&self) -> &[Resonance<T>; 3] {
        &self.resonances
    }

    pub fn kappa(&self, i: usize) -> T {
        self.resonances[i].kappa
    }

    pub fn omega(&self, i: usize) -> T {
        self.resonances[i].omega
    }

    /// Lab-frame n^2(Omega).
    pub fn index_sq(&self, big_omega: T) -> T {
        let four_pi = lit::<T>(4.0) * pi::<T>();
        self.resonances.iter().fold(T::one(), |acc, r| {
            let x = big_omega / r.omega;
            acc + four_pi * r.kappa / (T::one() - x * x)
        })
    }

    fn d_index_sq(&self, big_omega: T) -> T {
        let four_pi = lit::<T>(4.0) * pi::<T>();
        self.resonances.iter().fold(T::zero(), |acc, r| {
            let x = big_omega / r.omega;
            let d = T::one() - x * x;
            acc + four_pi * r.kappa * lit::<T>(2.0) * big_omega / (r.omega * r.omega * d * d)
        })
    }

    /// Phase index, `None` inside a stop band.
    pub fn index(&self, big_omega: T) -> Option<T> {
        let n2 = self.index_sq(big_omega);
        (n2 > T::zero()).then(|| n2.sqrt())
    }

    /// Group index n + Omega dn/dOmega.
    pub fn group_index(&self, big_omega: T) -> Option<T> {
        let n = self.index(big_omega)?;
        Some(n + big_omega * self.d_index_sq(big_omega) / (lit::<T>(2.0) * n))
    }

    /// Scales the medium by mu: kappa -> mu kappa, Omega^2 -> Omega^2 / mu.
    pub fn scaled(&self, mu: T) -> Self {
        Self {
            resonances: self.resonances.map(|r| Resonance {
                kappa: r.kappa * mu,
                omega: r.omega / mu.sqrt(),
            }),
        }
    }
}

/// Rule converting the index step into the dispersion scaling mu.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MuRule {
    #[default]
    Linear,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig<T> {
    pub right_medium: MediumSpec<T>,
    pub delta_n: T,
    /// Front speed, m/s.
    pub u: T,
    /// Wavelength at which n_R and delta_n are defined, m.
    pub lambda_ref: T,
    pub mu_rule: MuRule,
    pub mu: T,
    pub gamma: T,
    pub n_r: T,
}

pub const DEFAULT_LAMBDA_REF: f64 = 800e-9;

impl<T: Real> StepConfig<T> {
    pub fn new(right_medium: MediumSpec<T>, delta_n: T, u: T) -> Result<Self> {
        Self::with_reference(right_medium, delta_n, u, lit(DEFAULT_LAMBDA_REF), MuRule::Linear)
    }

    pub fn with_reference(
        right_medium: MediumSpec<T>,
        delta_n: T,
        u: T,
        lambda_ref: T,
        mu_rule: MuRule,
    ) -> Result<Self> {
        let c = c_light::<T>();
        if !(u > T::zero() && u < c) {
            return Err(Error::InvalidInput(format!("front speed u = {u} must satisfy 0 < u < c")));
        }
        if !(delta_n >= T::zero()) {
            return Err(Error::InvalidInput(format!("delta_n = {delta_n} must be >= 0")));
        }
        if !(lambda_ref > T::zero()) {
            return Err(Error::InvalidInput("reference wavelength must be positive".into()));
        }
        let w_ref = lit::<T>(2.0) * pi::<T>() * c / lambda_ref;
        let n_r = right_medium.index(w_ref).ok_or_else(|| {
            Error::InvalidInput(format!("reference wavelength {lambda_ref} lies in a stop band"))
        })?;
        let mu = match mu_rule {
            MuRule::Linear => mu_linear(n_r, delta_n),
            MuRule::Exact => mu_exact(&right_medium, w_ref, delta_n)?,
        };
        let beta = u / c;
        let gamma = T::one() / (T::one() - beta * beta).sqrt();
        Ok(Self { right_medium, delta_n, u, lambda_ref, mu_rule, mu, gamma, n_r })
    }

    pub fn beta(&self) -> T {
        self.u / c_light::<T>()
    }
}

/// mu = 1 + 2 delta_n / (n_R - 1/n_R).
pub fn mu_linear<T: Real>(n_r: T, delta_n: T) -> T {
    T::one() + lit::<T>(2.0) * delta_n / (n_r - T::one() / n_r)
}

/// Solves n(Omega_ref; mu) - n(Omega_ref; 1) = delta_n by bisection.
pub fn mu_exact<T: Real>(right: &MediumSpec<T>, w_ref: T, delta_n: T) -> Result<T> {
    let n_r = right
        .index(w_ref)
        .ok_or_else(|| Error::InvalidInput("reference frequency lies in a stop band".into()))?;
    if delta_n == T::zero() {
        return Ok(T::one());
    }
    let gap = |mu: T| right.scaled(mu).index(w_ref).map(|n| n - n_r - delta_n);
    // the scaled resonances move down by sqrt(mu); stay below the first pole above w_ref
    let mut hi = T::one();
    for r in right.resonances() {
        if r.omega > w_ref {
            let x = r.omega / w_ref;
            hi = x * x;
            break;
        }
    }
    if hi == T::one() {
        hi = lit(10.0);
    }
    let mut lo = T::one();
    hi = T::one() + (hi - T::one()) * lit(0.999_999);
    match gap(hi) {
        Some(g) if g > T::zero() => {}
        _ => return Err(Error::InvalidInput(format!("delta_n = {delta_n} is not reachable by scaling"))),
    }
    for _ in 0..200 {
        let mid = (lo + hi) / lit(2.0);
        match gap(mid) {
            Some(g) if g > T::zero() => hi = mid,
            _ => lo = mid,
        }
        if hi - lo <= lit::<T>(4.0 * T::EPS) * hi {
            break;
        }
    }
    Ok((lo + hi) / lit(2.0))
}

/// Left (high-index) region: kappa_L = mu kappa_R, Omega_L^2 = Omega_R^2 / mu.
pub fn left_medium<T: Real>(step: &StepConfig<T>) -> MediumSpec<T> {
    step.right_medium.scaled(step.mu)
}

/// Front speed whose lab group velocity matches the medium at `lambda`.
pub fn velocity_matched<T: Real>(medium: &MediumSpec<T>, lambda: T) -> Result<T> {
    let w = lit::<T>(2.0) * pi::<T>() * c_light::<T>() / lambda;
    let ng = medium
        .group_index(w)
        .ok_or_else(|| Error::InvalidInput(format!("wavelength {lambda} lies in a stop band")))?;
    if !(ng > T::one()) {
        return Err(Error::InvalidInput(format!("group index {ng} at {lambda} is not subluminal")));
    }
    Ok(c_light::<T>() / ng)
}

fn gamma_of<T: Real>(u: T) -> T {
    let b = u / c_light::<T>();
    T::one() / (T::one() - b * b).sqrt()
}

/// (omega, k) in the front frame to (Omega, K) in the lab.
pub fn lorentz_to_lab<T: Real>(omega: T, k: Cx<T>, u: T) -> (Cx<T>, Cx<T>) {
    let c = c_light::<T>();
    let g = gamma_of(u);
    let big_omega = (re(omega) + k * u) * g;
    let big_k = (k + re(u * omega / (c * c))) * g;
    (big_omega, big_k)
}

pub fn lab_to_moving<T: Real>(big_omega: Cx<T>, big_k: Cx<T>, u: T) -> (Cx<T>, Cx<T>) {
    let c = c_light::<T>();
    let g = gamma_of(u);
    ((big_omega - big_k * u) * g, (big_k - big_omega * (u / (c * c))) * g)
}

/// One (omega, k) point and its lab image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameEvent<T> {
    pub omega: T,
    pub k: Cx<T>,
    pub big_omega: Cx<T>,
    pub big_k: Cx<T>,
}

impl<T: Real> FrameEvent<T> {
    pub fn new(omega: T, k: Cx<T>, u: T) -> Self {
        let (big_omega, big_k) = lorentz_to_lab(omega, k, u);
        Self { omega, k, big_omega, big_k }
    }

    pub fn real(omega: T, k: T, u: T) -> Self {
        Self::new(omega, cx(k, T::zero()), u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::cabs;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn silica_step(dn: f64) -> StepConfig<f64> {
        StepConfig::new(MediumSpec::fused_silica(), dn, 2.0 / 3.0 * C_LIGHT).unwrap()
    }
    use crate::num::C_LIGHT;

    #[test]
    fn silica_index_matches_tabulated() {
        // Malitson: n(0.8 um) = 1.4533, n(1.55 um) = 1.4440
        let m = MediumSpec::<f64>::fused_silica();
        let w = |l: f64| 2.0 * std::f64::consts::PI * C_LIGHT / l;
        assert!((m.index(w(0.8e-6)).unwrap() - 1.4533).abs() < 2e-4);
        assert!((m.index(w(1.55e-6)).unwrap() - 1.4440).abs() < 2e-4);
    }

    #[test]
    fn group_index_matches_finite_difference() {
        let m = MediumSpec::<f64>::fused_silica();
        for l in [250e-9, 400e-9, 1.2e-6, 3.0e-6] {
            let w = 2.0 * std::f64::consts::PI * C_LIGHT / l;
            let h = w * 1e-6;
            let f = |x: f64| x * m.index(x).unwrap();
            let fd = (f(w + h) - f(w - h)) / (2.0 * h);
            assert!((m.group_index(w).unwrap() - fd).abs() < 1e-8, "{l}");
        }
    }

    #[test]
    fn resonances_are_sorted_and_validated() {
        let m = MediumSpec::new([(0.1f64, 3.0), (0.2, 1.0), (0.3, 2.0)]).unwrap();
        assert_eq!(m.omega(0), 1.0);
        assert_eq!(m.kappa(0), 0.2);
        assert!(MediumSpec::new([(0.1f64, 3.0), (-0.2, 1.0), (0.3, 2.0)]).is_err());
        assert!(MediumSpec::new([(0.1f64, 3.0), (0.2, 0.0), (0.3, 2.0)]).is_err());
    }

    #[test]
    fn zero_step_leaves_medium_unchanged() {
        let s = silica_step(0.0);
        assert_eq!(s.mu, 1.0);
        assert_eq!(left_medium(&s), s.right_medium);
        let e = StepConfig::with_reference(MediumSpec::fused_silica(), 0.0, 2e8, 800e-9, MuRule::Exact).unwrap();
        assert_eq!(e.mu, 1.0);
    }

    #[test]
    fn linear_mu_formula() {
        let s = silica_step(2e-6);
        let expected = 1.0 + 2.0 * 2e-6 / (s.n_r - 1.0 / s.n_r);
        assert!((s.mu - expected).abs() < 1e-15);
        let l = left_medium(&s);
        for i in 0..3 {
            assert!((l.kappa(i) - s.mu * s.right_medium.kappa(i)).abs() < 1e-18);
            let ratio = l.omega(i).powi(2) * s.mu / s.right_medium.omega(i).powi(2);
            assert!((ratio - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_mu_reproduces_step_and_agrees_for_small_steps() {
        let right = MediumSpec::<f64>::fused_silica();
        let w = 2.0 * std::f64::consts::PI * C_LIGHT / 800e-9;
        let n_r = right.index(w).unwrap();
        for dn in [1e-6, 1e-4, 1e-2, 1e-1] {
            let mu = mu_exact(&right, w, dn).unwrap();
            let n_l = right.scaled(mu).index(w).unwrap();
            assert!((n_l - n_r - dn).abs() < 1e-12, "dn {dn}");
            let lin = mu_linear(n_r, dn);
            // the linear rule neglects the shift of the resonances, a few percent in mu - 1
            assert!(((mu - lin) / (lin - 1.0)).abs() < 0.05 + 5.0 * dn, "dn {dn}: {mu} vs {lin}");
        }
    }

    #[test]
    fn mu_monotone_in_step() {
        let right = MediumSpec::<f64>::fused_silica();
        let w = 2.0 * std::f64::consts::PI * C_LIGHT / 800e-9;
        let mut last = 1.0;
        for i in 1..=50 {
            let dn = 0.1 * i as f64 / 50.0;
            let mu = mu_exact(&right, w, dn).unwrap();
            assert!(mu > last);
            last = mu;
        }
    }

    #[test]
    fn invalid_speed_rejected() {
        let m = MediumSpec::<f64>::fused_silica();
        assert!(StepConfig::new(m, 1e-6, 0.0).is_err());
        assert!(StepConfig::new(m, 1e-6, C_LIGHT).is_err());
        assert!(StepConfig::new(m, -1e-6, 2e8).is_err());
    }

    #[test]
    fn lorentz_fixed_points() {
        let (o, k) = lorentz_to_lab(0.0f64, cx(0.0, 0.0), 2e8);
        assert_eq!((o, k), (cx(0.0, 0.0), cx(0.0, 0.0)));
        let (o, k) = lorentz_to_lab(3e14f64, cx(1e6, 2.0), 0.0);
        assert_eq!(o, cx(3e14, 0.0));
        assert_eq!(k, cx(1e6, 2.0));
    }

    #[test]
    fn lorentz_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let u = rng.random_range(0.01..0.99) * C_LIGHT;
            let w = rng.random_range(-1e16..1e16);
            let k = cx(rng.random_range(-1e8..1e8), rng.random_range(-1e5..1e5));
            let (o, kk) = lorentz_to_lab(w, k, u);
            let (w2, k2) = lab_to_moving(o, kk, u);
            let scale = w.abs() + cabs(k) * C_LIGHT;
            assert!(cabs(w2 - re(w)) < 1e-12 * scale);
            assert!(cabs(k2 - k) * C_LIGHT < 1e-12 * scale);
        }
    }

    #[test]
    fn frame_event_real_k() {
        let u = 2e8;
        let ev = FrameEvent::real(1e14f64, 5e5, u);
        let g = 1.0 / (1.0 - (u / C_LIGHT).powi(2)).sqrt();
        assert!((ev.big_omega.re - g * (1e14 + u * 5e5)).abs() < 1e-12 * ev.big_omega.re);
        assert_eq!(ev.big_omega.im, 0.0);
    }

    #[test]
    fn generic_over_f32() {
        let m = MediumSpec::<f32>::fused_silica();
        let w = 2.0 * std::f32::consts::PI * C_LIGHT as f32 / 800e-9;
        assert!((m.index(w).unwrap() - 1.4533).abs() < 1e-3);
    }
}
