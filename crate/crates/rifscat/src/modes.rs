//! Moving-frame dispersion roots, mode labels, scenarios, horizon intervals and local mode vectors.

use std::fmt;

use nalgebra::{Matrix4, SMatrix, SVector, Vector4};

use crate::error::{Error, Result};
use crate::medium::{left_medium, MediumSpec, StepConfig};
use crate::num::{abs2, c_light, cabs, cx, lit, pi, re, to_f64, Cx, Real, Twofold, HBAR_EV_S};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "L",
            Side::Right => "R",
        })
    }
}

/// Branch tag, listed in descending lab frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    U,
    Uo,
    Mo,
    Lo,
    L,
    Nl,
    No,
    Nu,
    C,
}

impl Label {
    pub const PROPAGATING: [Label; 8] =
        [Label::U, Label::Uo, Label::Mo, Label::Lo, Label::L, Label::Nl, Label::No, Label::Nu];

    pub fn as_str(&self) -> &'static str {
        match self {
            Label::U => "u",
            Label::Uo => "uo",
            Label::Mo => "mo",
            Label::Lo => "lo",
            Label::L => "l",
            Label::Nl => "nl",
            Label::No => "no",
            Label::Nu => "nu",
            Label::C => "c",
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        Self::PROPAGATING.iter().chain([Label::C].iter()).copied().find(|l| l.as_str() == s)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormSign {
    Positive,
    Negative,
    Unphysical,
}

impl NormSign {
    /// Entry of the signature matrix g.
    pub fn g(&self) -> f64 {
        match self {
            NormSign::Negative => -1.0,
            _ => 1.0,
        }
    }
}

/// Mode name such as `noL`; evanescent modes carry `d`/`g` for decaying/growing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeId {
    pub label: Label,
    pub side: Side,
    pub growing: bool,
}

impl ModeId {
    pub fn new(label: Label, side: Side) -> Self {
        Self { label, side, growing: false }
    }

    pub fn parse(s: &str) -> Option<ModeId> {
        let (body, side) = match s.chars().last()? {
            'L' => (&s[..s.len() - 1], Side::Left),
            'R' => (&s[..s.len() - 1], Side::Right),
            _ => return None,
        };
        Some(ModeId::new(Label::parse(body)?, side))
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.label == Label::C {
            write!(f, "c{}{}", self.side, if self.growing { "g" } else { "d" })
        } else {
            write!(f, "{}{}", self.label, self.side)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSolution<T> {
    pub k: Cx<T>,
    pub omega: T,
    pub big_omega: Cx<T>,
    pub big_k: Cx<T>,
    /// dω/dk in the front frame; `None` for evanescent modes.
    pub group_velocity_mf: Option<T>,
    pub norm_sign: NormSign,
    pub side: Side,
    pub label: Label,
    /// Decays away from the front (evanescent modes only).
    pub decaying: Option<bool>,
}

impl<T: Real> ModeSolution<T> {
    pub fn is_propagating(&self) -> bool {
        self.decaying.is_none()
    }

    pub fn id(&self) -> ModeId {
        ModeId { label: self.label, side: self.side, growing: self.decaying == Some(false) }
    }

    /// Carries energy towards the front.
    pub fn is_incoming(&self) -> Option<bool> {
        let v = self.group_velocity_mf?;
        Some(match self.side {
            Side::Left => v > T::zero(),
            Side::Right => v < T::zero(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    A,
    B,
    C,
    D,
    E,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::A => "a",
            Scenario::B => "b",
            Scenario::C => "c",
            Scenario::D => "d",
            Scenario::E => "e",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Scenario::A => "horizonless, left moving",
            Scenario::B => "white hole",
            Scenario::C => "horizonless, two way",
            Scenario::D => "black hole",
            Scenario::E => "high-frequency horizonless",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KinematicScenario {
    pub case: Scenario,
    /// Propagating modes on (left, right).
    pub counts: (usize, usize),
}

/// Front-frame frequency range where one side carries three optical modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subluminal<T> {
    pub omega_min: T,
    pub omega_max: T,
    /// Lab frequencies of the velocity-matched points behind omega_min and omega_max.
    pub big_omega_ir: T,
    pub big_omega_uv: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonIntervals<T> {
    pub left: Option<Subluminal<T>>,
    pub right: Option<Subluminal<T>>,
    /// (omega_minL, omega_minR), clipped to the left interval.
    pub whi: Option<(T, T)>,
    /// (omega_maxL, omega_maxR), clipped to the right interval.
    pub bhi: Option<(T, T)>,
}

impl<T: Real> HorizonIntervals<T> {
    /// All interval edges in ascending order.
    pub fn edges(&self) -> Vec<T> {
        let mut e: Vec<T> = [self.left, self.right]
            .iter()
            .flatten()
            .flat_map(|s| [s.omega_min, s.omega_max])
            .collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e
    }

    /// Rejects omega within `rel` of an interval edge.
    pub fn check_clear(&self, omega: T, rel: T) -> Result<()> {
        for e in self.edges() {
            if (omega - e).abs() <= rel * e.abs() {
                return Err(Error::BoundaryFrequency { omega: to_f64(omega), edge: to_f64(e) });
            }
        }
        Ok(())
    }

    pub fn sbli(&self, side: Side) -> Option<&Subluminal<T>> {
        match side {
            Side::Left => self.left.as_ref(),
            Side::Right => self.right.as_ref(),
        }
    }
}

/// hbar * width in micro-electronvolts.
pub fn width_uev<T: Real>(interval: (T, T)) -> f64 {
    (to_f64(interval.1) - to_f64(interval.0)) * HBAR_EV_S * 1e6
}

pub const BOUNDARY_GUARD: f64 = 1e-9;
pub const RESONANCE_GUARD: f64 = 1e-6;

fn gamma<T: Real>(u: T) -> T {
    let b = u / c_light::<T>();
    T::one() / (T::one() - b * b).sqrt()
}

/// F(ω, k) = ω² + Σ 4πκ s²/D − c²k² with s = γ(ω + uk), D = 1 − s²/Ω².
pub fn dispersion_residual<T: Real>(medium: &MediumSpec<T>, u: T, omega: T, k: Cx<T>) -> Cx<T> {
    let c = c_light::<T>();
    let s = (re(omega) + k * u) * gamma(u);
    let four_pi = lit::<T>(4.0) * pi::<T>();
    let mut f = re(omega * omega) - k * k * (c * c);
    for r in medium.resonances() {
        let d = re(T::one()) - s * s / (r.omega * r.omega);
        f += s * s * (four_pi * r.kappa) / d;
    }
    f
}

/// Sum of the magnitudes of the terms of F, used for relative residuals.
pub fn residual_scale<T: Real>(medium: &MediumSpec<T>, u: T, omega: T, k: Cx<T>) -> T {
    let c = c_light::<T>();
    let s = (re(omega) + k * u) * gamma(u);
    let four_pi = lit::<T>(4.0) * pi::<T>();
    let mut sc = omega * omega + abs2(k) * c * c;
    for r in medium.resonances() {
        let d = re(T::one()) - s * s / (r.omega * r.omega);
        sc += cabs(s * s * (four_pi * r.kappa) / d);
    }
    sc
}

/// (F_ω, F_k) at a complex point.
fn residual_derivatives<T: Real>(medium: &MediumSpec<T>, u: T, omega: T, k: Cx<T>) -> (Cx<T>, Cx<T>) {
    let c = c_light::<T>();
    let g = gamma(u);
    let s = (re(omega) + k * u) * g;
    let eight_pi = lit::<T>(8.0) * pi::<T>();
    let mut sum = re(T::zero());
    for r in medium.resonances() {
        let d = re(T::one()) - s * s / (r.omega * r.omega);
        sum += s * (eight_pi * r.kappa * g) / (d * d);
    }
    (re(lit::<T>(2.0) * omega) + sum, sum * u - k * (lit::<T>(2.0) * c * c))
}

/// (F, F_k) at a real k in compensated arithmetic. Near a pair of merging roots the
/// terms of F cancel to many digits; this keeps k and dω/dk accurate there.
fn real_residual_twofold<T: Real>(medium: &MediumSpec<T>, u: T, omega: T, k: T) -> (T, T) {
    let c = c_light::<T>();
    let g = gamma(u);
    let s = Twofold::mul_exact(u, k).add(Twofold::new(omega)).scale(g);
    let s2 = s.mul(s);
    let four_pi = lit::<T>(4.0) * pi::<T>();
    let c2 = Twofold::mul_exact(c, c);
    let mut f = Twofold::mul_exact(omega, omega).sub(c2.mul(Twofold::mul_exact(k, k)));
    let mut fk = c2.scale(lit::<T>(-2.0) * k);
    for r in medium.resonances() {
        let w2 = Twofold::mul_exact(r.omega, r.omega);
        let d = Twofold::new(T::one()).sub(s2.div(w2));
        let kap = Twofold::mul_exact(four_pi, r.kappa);
        f = f.add(kap.mul(s2).div(d));
        fk = fk.add(kap.mul(s).scale(lit::<T>(2.0) * g * u).div(d.mul(d)));
    }
    (f.value(), fk.value())
}

/// Newton steps on a real root with the compensated residual.
fn real_polish<T: Real>(medium: &MediumSpec<T>, u: T, omega: T, k0: T) -> T {
    let mut k = k0;
    let (mut f, mut fk) = real_residual_twofold(medium, u, omega, k);
    for _ in 0..8 {
        if fk == T::zero() {
            break;
        }
        let kn = k - f / fk;
        let (fnew, fknew) = real_residual_twofold(medium, u, omega, kn);
        if !(fnew.abs() < f.abs()) {
            break;
        }
        k = kn;
        f = fnew;
        fk = fknew;
    }
    k
}

fn poly_mul<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add<T: Real>(a: &[T], b: &[T], scale_b: T) -> Vec<T> {
    let mut out = vec![T::zero(); a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] += y * scale_b;
    }
    out
}

/// Coefficients (ascending) of the cleared dispersion polynomial in k̂ = k c / Ω_2.
pub fn dispersion_polynomial<T: Real>(medium: &MediumSpec<T>, u: T, omega: T) -> Vec<T> {
    let scale = medium.omega(1);
    let wh = omega / scale;
    let b = u / c_light::<T>();
    let g = gamma(u);
    let s = [g * wh, g * b];
    let s2 = poly_mul(&s, &s);
    let d: Vec<Vec<T>> = (0..3)
        .map(|i| {
            let oh = medium.omega(i) / scale;
            poly_add(&[T::one()], &s2, -T::one() / (oh * oh))
        })
        .collect();
    let dall = poly_mul(&poly_mul(&d[0], &d[1]), &d[2]);
    let mut p = poly_mul(&[-wh * wh, T::zero(), T::one()], &dall);
    let four_pi = lit::<T>(4.0) * pi::<T>();
    for i in 0..3 {
        let others: Vec<&Vec<T>> = (0..3).filter(|&j| j != i).map(|j| &d[j]).collect();
        let term = poly_mul(&s2, &poly_mul(others[0], others[1]));
        p = poly_add(&p, &term, -four_pi * medium.kappa(i));
    }
    p
}

fn newton_polish<T: Real>(medium: &MediumSpec<T>, u: T, omega: T, k0: Cx<T>) -> Cx<T> {
    let tol = lit::<T>(4.0 * T::EPS);
    let mut k = k0;
    let mut last_step = None::<T>;
    for _ in 0..60 {
        let f = dispersion_residual(medium, u, omega, k);
        let (_, fk) = residual_derivatives(medium, u, omega, k);
        if fk == re(T::zero()) {
            break;
        }
        let dk = f / fk;
        let step = cabs(dk);
        if let Some(prev) = last_step {
            // diverging or stalled: keep the best iterate
            if step > prev && step > tol * cabs(k) * lit(1e3) {
                break;
            }
        }
        k -= dk;
        last_step = Some(step);
        if step <= tol * cabs(k) {
            break;
        }
    }
    let r0 = cabs(dispersion_residual(medium, u, omega, k0)) / residual_scale(medium, u, omega, k0);
    let r1 = cabs(dispersion_residual(medium, u, omega, k)) / residual_scale(medium, u, omega, k);
    if r1 <= r0 {
        k
    } else {
        k0
    }
}

pub fn is_real_root<T: Real>(k: Cx<T>) -> bool {
    k.im.abs() < lit::<T>(1e-9) * k.re.abs() + lit::<T>(1e-3)
}

/// The eight roots k(ω) of the moving-frame dispersion relation.
pub fn dispersion_roots<T: Real>(medium: &MediumSpec<T>, u: T, omega: T) -> Result<Vec<Cx<T>>> {
    if !(omega > T::zero()) {
        return Err(Error::InvalidInput(format!("omega = {omega} must be positive")));
    }
    if !(u > T::zero() && u < c_light::<T>()) {
        return Err(Error::InvalidInput(format!("front speed u = {u} must satisfy 0 < u < c")));
    }
    let p = dispersion_polynomial(medium, u, omega);
    let n = p.len() - 1;
    debug_assert_eq!(n, 8);
    let lead = p[n];
    let mut comp = SMatrix::<T, 8, 8>::zeros();
    for i in 1..8 {
        comp[(i, i - 1)] = T::one();
    }
    for i in 0..8 {
        comp[(i, 7)] = -p[i] / lead;
    }
    let eig = comp.complex_eigenvalues();
    let to_k = medium.omega(1) / c_light::<T>();
    let mut roots: Vec<Cx<T>> = eig.iter().map(|z| newton_polish(medium, u, omega, *z * to_k)).collect();

    for k in roots.iter_mut() {
        if is_real_root(*k) {
            *k = re(real_polish(medium, u, omega, k.re));
        }
    }
    // enforce exact conjugate pairs
    let mut complex: Vec<usize> = (0..8).filter(|&i| roots[i].im != T::zero()).collect();
    if complex.len() % 2 == 1 {
        return Err(Error::DegenerateRoot { omega: to_f64(omega) });
    }
    while let Some(i) = complex.pop() {
        let target = roots[i].conj();
        let (pos, _) = complex
            .iter()
            .enumerate()
            .map(|(p, &j)| (p, cabs(roots[j] - target)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .ok_or(Error::DegenerateRoot { omega: to_f64(omega) })?;
        let j = complex.remove(pos);
        if cabs(roots[j] - target) > lit::<T>(1e-6) * cabs(target) {
            return Err(Error::DegenerateRoot { omega: to_f64(omega) });
        }
        let avg = (roots[i] + roots[j].conj()) * lit::<T>(0.5);
        roots[i] = avg;
        roots[j] = avg.conj();
    }
    for i in 0..8 {
        for j in i + 1..8 {
            let sep = cabs(roots[i] - roots[j]);
            let mag = cabs(roots[i]).max(cabs(roots[j]));
            if sep <= lit::<T>(1e-7) * mag {
                return Err(Error::DegenerateRoot { omega: to_f64(omega) });
            }
        }
    }
    roots.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    Ok(roots)
}

/// dω/dk on the real branch through (ω, k).
pub fn group_velocity<T: Real>(medium: &MediumSpec<T>, u: T, omega: T, k: T) -> Result<T> {
    let c = c_light::<T>();
    let (fw, _) = residual_derivatives(medium, u, omega, re(k));
    let fk = re(real_residual_twofold(medium, u, omega, k).1);
    let scale = lit::<T>(2.0) * c * c * k.abs() + (fk.re + lit::<T>(2.0) * c * c * k).abs();
    if fk.re.abs() <= lit::<T>(1e-8) * scale || fw.re == T::zero() {
        return Err(Error::ZeroDenominator { omega: to_f64(omega), k: to_f64(k) });
    }
    Ok(-fk.re / fw.re)
}

/// Locates the velocity-matched points on the positive-K optical branch.
pub fn subluminal_interval<T: Real>(medium: &MediumSpec<T>, u: T) -> Option<Subluminal<T>> {
    let c = c_light::<T>();
    let target = c / u;
    // optical band starts where n^2 crosses zero above the first resonance
    let (mut lo, mut hi) = (medium.omega(0), medium.omega(1));
    for _ in 0..200 {
        let mid = (lo + hi) / lit(2.0);
        if medium.index_sq(mid) > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let start = hi * lit(1.0 + 1e-9);
    let stop = medium.omega(1) * lit(1.0 - 1e-9);
    let f = |w: T| medium.group_index(w).map(|ng| ng - target);
    let n = 4000;
    let ratio = (stop / start).ln() / lit::<T>(n as f64);
    let mut crossings = Vec::new();
    let mut prev_w = start;
    let mut prev_f = f(start)?;
    for i in 1..=n {
        let w = start * (ratio * lit::<T>(i as f64)).exp();
        let fw = f(w)?;
        if (fw > T::zero()) != (prev_f > T::zero()) {
            let (mut a, mut b) = (prev_w, w);
            let fa_pos = prev_f > T::zero();
            for _ in 0..200 {
                let m = (a + b) / lit(2.0);
                if (f(m)? > T::zero()) == fa_pos {
                    a = m;
                } else {
                    b = m;
                }
                if b - a <= lit::<T>(4.0 * T::EPS) * b {
                    break;
                }
            }
            crossings.push((a + b) / lit(2.0));
        }
        prev_w = w;
        prev_f = fw;
    }
    if crossings.len() < 2 {
        return None;
    }
    let ir = crossings[0];
    let uv = crossings[crossings.len() - 1];
    let g = gamma(u);
    let w_of = |big: T| g * (big - u * medium.index(big).unwrap() * big / c);
    Some(Subluminal { omega_min: w_of(ir), omega_max: w_of(uv), big_omega_ir: ir, big_omega_uv: uv })
}

/// White- and black-hole intervals of the step.
pub fn horizon_intervals<T: Real>(step: &StepConfig<T>) -> Result<HorizonIntervals<T>> {
    let left = subluminal_interval(&left_medium(step), step.u);
    let right = subluminal_interval(&step.right_medium, step.u);
    let whi = left.and_then(|l| {
        let hi = match right {
            Some(r) => r.omega_min.min(l.omega_max),
            None => l.omega_max,
        };
        (hi >= l.omega_min).then_some((l.omega_min, hi))
    });
    let bhi = right.and_then(|r| {
        let lo = match left {
            Some(l) => l.omega_max.max(r.omega_min),
            None => r.omega_min,
        };
        (r.omega_max >= lo).then_some((lo, r.omega_max))
    });
    if whi.is_none() && bhi.is_none() {
        return Err(Error::NoHorizon);
    }
    Ok(HorizonIntervals { left, right, whi, bhi })
}

/// Assigns branch labels and sorts by descending Re Ω.
pub fn label_modes<T: Real>(
    solutions: &mut [ModeSolution<T>],
    medium: &MediumSpec<T>,
    sbli: Option<&Subluminal<T>>,
) -> Result<()> {
    solutions.sort_by(|a, b| {
        b.big_omega
            .re
            .partial_cmp(&a.big_omega.re)
            .unwrap()
            .then(a.k.im.partial_cmp(&b.k.im).unwrap())
    });
    let real: Vec<usize> = (0..solutions.len()).filter(|&i| solutions[i].is_propagating()).collect();
    for w in real.windows(2) {
        let (a, b) = (solutions[w[0]].big_omega.re, solutions[w[1]].big_omega.re);
        if (a - b).abs() <= lit::<T>(1e-12) * a.abs().max(b.abs()) {
            return Err(Error::LabelAmbiguity { big_omega: to_f64(a) });
        }
    }
    let (o1, o2) = (medium.omega(0), medium.omega(1));
    let mut optical = Vec::new();
    for &i in &real {
        let big = solutions[i].big_omega.re;
        solutions[i].label = if big > o2 {
            Label::U
        } else if big < -o2 {
            Label::Nu
        } else if big > T::zero() && big < o1 {
            Label::L
        } else if big <= T::zero() && big > -o1 {
            Label::Nl
        } else if big < T::zero() {
            Label::No
        } else {
            optical.push(i);
            Label::Uo
        };
    }
    match optical.len() {
        3 => {
            for (i, l) in optical.iter().zip([Label::Uo, Label::Mo, Label::Lo]) {
                solutions[*i].label = l;
            }
        }
        1 => {
            let omega = solutions[optical[0]].omega;
            solutions[optical[0]].label = match sbli {
                Some(s) if omega > s.omega_max => Label::Lo,
                _ => Label::Uo,
            };
        }
        0 => {}
        n => {
            return Err(Error::LabelAmbiguity { big_omega: to_f64(solutions[optical[n - 1]].big_omega.re) })
        }
    }
    for s in solutions.iter_mut().filter(|s| !s.is_propagating()) {
        s.label = Label::C;
    }
    Ok(())
}

/// Field vector W = (A, P, A', P') and V = 𝒰W of one plane-wave mode.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalModeVector<T: Real> {
    pub w: SVector<Cx<T>, 8>,
    pub v: SVector<Cx<T>, 8>,
    pub mode: ModeSolution<T>,
    /// i V†JV after normalization.
    pub kg_norm_density: T,
}

/// The matrix 𝒰 mapping W to V = (A, P, Π_A, Π_P).
pub fn u_matrix<T: Real>(medium: &MediumSpec<T>, u: T, omega: T) -> SMatrix<Cx<T>, 8, 8> {
    let c = c_light::<T>();
    let g = gamma(u);
    let i = cx(T::zero(), T::one());
    let mut m = SMatrix::<Cx<T>, 8, 8>::zeros();
    for j in 0..4 {
        m[(j, j)] = re(T::one());
    }
    m[(4, 0)] = -i * (omega / (lit::<T>(4.0) * pi::<T>() * c * c));
    for j in 0..3 {
        let r = medium.resonances()[j];
        let q = g * g / (r.kappa * r.omega * r.omega);
        m[(5 + j, 0)] = re(g / c);
        m[(5 + j, 1 + j)] = -i * (omega * q);
        m[(5 + j, 5 + j)] = re(-u * q);
    }
    m
}

/// i V†JV with J = [[0, 1], [-1, 0]].
pub fn kg_density<T: Real>(v: &SVector<Cx<T>, 8>) -> T {
    let mut z = re(T::zero());
    for j in 0..4 {
        z += v[j].conj() * v[4 + j] - v[4 + j].conj() * v[j];
    }
    (z * cx(T::zero(), T::one())).re
}

/// Builds the normalized field vector of the mode (ω, k) on `side`.
pub fn build_local_mode<T: Real>(
    medium: &MediumSpec<T>,
    u: T,
    omega: T,
    k: Cx<T>,
    side: Side,
) -> Result<LocalModeVector<T>> {
    let c = c_light::<T>();
    let g = gamma(u);
    let i = cx(T::zero(), T::one());
    let sp = re(omega) + k * u;
    let s = sp * g;
    for r in medium.resonances() {
        if (cabs(s) - r.omega).abs() < lit::<T>(RESONANCE_GUARD) * r.omega {
            return Err(Error::NearResonance { omega: to_f64(omega), resonance: to_f64(r.omega) });
        }
    }
    let d: Vec<Cx<T>> = medium
        .resonances()
        .iter()
        .map(|r| re(T::one()) - s * s / (r.omega * r.omega))
        .collect();
    let mut m = Matrix4::<Cx<T>>::zeros();
    m[(0, 0)] = (k * k - re(omega * omega / (c * c))) / (lit::<T>(4.0) * pi::<T>());
    for j in 0..3 {
        let kappa = medium.kappa(j);
        m[(0, 1 + j)] = i * sp * (g / c);
        m[(1 + j, 0)] = sp * (kappa * g / c);
        m[(1 + j, 1 + j)] = i * d[j];
    }
    // equilibrate rows and columns so the null vector has O(1) entries
    let mut col = [T::one(); 4];
    for j in 0..3 {
        let mag = cabs(s * medium.kappa(j) / (d[j] * c));
        if mag > T::zero() {
            col[1 + j] = mag;
        }
    }
    for r in 0..4 {
        for cidx in 0..4 {
            m[(r, cidx)] *= col[cidx];
        }
        let mx = (0..4).map(|cidx| cabs(m[(r, cidx)])).fold(T::zero(), |a, b| a.max(b));
        if mx > T::zero() {
            for cidx in 0..4 {
                m[(r, cidx)] /= re(mx);
            }
        }
    }
    let svd = m.svd(false, true);
    let sv = svd.singular_values;
    let smax = sv.iter().fold(T::zero(), |a, &b| a.max(b));
    let tol = lit::<T>(1e-8) * smax;
    let dim = sv.iter().filter(|&&x| x <= tol).count();
    if dim != 1 {
        return Err(Error::NullSpaceDimension { omega: to_f64(omega), dim });
    }
    let imin = (0..4).min_by(|&a, &b| sv[a].partial_cmp(&sv[b]).unwrap()).unwrap();
    let vt = svd.v_t.expect("requested");
    let mut x = Vector4::<Cx<T>>::zeros();
    for j in 0..4 {
        x[j] = vt[(imin, j)].conj() * col[j];
    }
    if cabs(x[0]) == T::zero() {
        return Err(Error::NullSpaceDimension { omega: to_f64(omega), dim: 0 });
    }
    let a0 = x[0];
    x /= a0;

    let mut w = SVector::<Cx<T>, 8>::zeros();
    for j in 0..4 {
        w[j] = x[j];
        w[4 + j] = x[j] * k * i;
    }
    let umat = u_matrix(medium, u, omega);
    let mut v = umat * w;
    let rho = kg_density(&v);
    let real = k.im == T::zero();
    let (big_omega, big_k) = crate::medium::lorentz_to_lab(omega, k, u);
    let (vg, norm_sign, decaying, scale) = if real {
        let vg = group_velocity(medium, u, omega, k.re)?;
        let n = rho * lit::<T>(2.0) * pi::<T>() * vg.abs();
        let sign = if big_omega.re > T::zero() { NormSign::Positive } else { NormSign::Negative };
        (Some(vg), sign, None, T::one() / n.abs().sqrt())
    } else {
        let norm = w.iter().map(|z| abs2(*z)).fold(T::zero(), |a, b| a + b).sqrt();
        let dec = match side {
            Side::Left => k.im < T::zero(),
            Side::Right => k.im > T::zero(),
        };
        (None, NormSign::Unphysical, Some(dec), T::one() / norm)
    };
    w *= re(scale);
    v *= re(scale);
    let provisional = if real { Label::Uo } else { Label::C };
    Ok(LocalModeVector {
        kg_norm_density: kg_density(&v),
        w,
        v,
        mode: ModeSolution {
            k,
            omega,
            big_omega,
            big_k,
            group_velocity_mf: vg,
            norm_sign,
            side,
            label: provisional,
            decaying,
        },
    })
}

/// All eight labeled, normalized local modes of one side, in descending Re Ω.
pub fn local_modes<T: Real>(
    medium: &MediumSpec<T>,
    u: T,
    omega: T,
    side: Side,
    sbli: Option<&Subluminal<T>>,
) -> Result<Vec<LocalModeVector<T>>> {
    let roots = dispersion_roots(medium, u, omega)?;
    let mut vecs = roots
        .into_iter()
        .map(|k| build_local_mode(medium, u, omega, k, side))
        .collect::<Result<Vec<_>>>()?;
    let mut sols: Vec<ModeSolution<T>> = vecs.iter().map(|v| v.mode).collect();
    label_modes(&mut sols, medium, sbli)?;
    // reorder vectors to match the labeled order
    let mut ordered = Vec::with_capacity(8);
    for s in sols {
        let pos = vecs.iter().position(|v| v.mode.k == s.k).expect("same roots");
        let mut lv = vecs.swap_remove(pos);
        lv.mode = s;
        ordered.push(lv);
    }
    Ok(ordered)
}

/// Kinematic scenario from the propagating-mode census on both sides.
pub fn scenario_from_modes<T: Real>(
    left: &[ModeSolution<T>],
    right: &[ModeSolution<T>],
    omega: T,
) -> Result<KinematicScenario> {
    let nl = left.iter().filter(|m| m.is_propagating()).count();
    let nr = right.iter().filter(|m| m.is_propagating()).count();
    let r_optical_uo = right.iter().any(|m| m.label == Label::Uo);
    let case = match (nl, nr) {
        (8, 6) => Scenario::B,
        (8, 8) => Scenario::C,
        (6, 8) => Scenario::D,
        (6, 6) if r_optical_uo => Scenario::A,
        (6, 6) => Scenario::E,
        _ => {
            return Err(Error::InconsistentScenario {
                omega: to_f64(omega),
                detail: format!("unexpected propagating counts ({nl}, {nr})"),
            })
        }
    };
    Ok(KinematicScenario { case, counts: (nl, nr) })
}

pub fn classify_scenario<T: Real>(step: &StepConfig<T>, omega: T) -> Result<KinematicScenario> {
    let hi = horizon_intervals(step).ok();
    let left_m = left_medium(step);
    let (sl, sr) = match &hi {
        Some(h) => {
            h.check_clear(omega, lit(BOUNDARY_GUARD))?;
            (h.left, h.right)
        }
        None => (subluminal_interval(&left_m, step.u), subluminal_interval(&step.right_medium, step.u)),
    };
    let solutions = |m: &MediumSpec<T>, side, s: Option<Subluminal<T>>| -> Result<Vec<ModeSolution<T>>> {
        let mut sols: Vec<ModeSolution<T>> = dispersion_roots(m, step.u, omega)?
            .into_iter()
            .map(|k| {
                let (big_omega, big_k) = crate::medium::lorentz_to_lab(omega, k, step.u);
                let prop = k.im == T::zero();
                ModeSolution {
                    k,
                    omega,
                    big_omega,
                    big_k,
                    group_velocity_mf: None,
                    norm_sign: NormSign::Unphysical,
                    side,
                    label: Label::C,
                    decaying: if prop { None } else { Some(true) },
                }
            })
            .collect();
        label_modes(&mut sols, m, s.as_ref())?;
        Ok(sols)
    };
    let l = solutions(&left_m, Side::Left, sl)?;
    let r = solutions(&step.right_medium, Side::Right, sr)?;
    scenario_from_modes(&l, &r, omega)
}
