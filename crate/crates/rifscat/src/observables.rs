//! Flux spectra, photon-number statistics and lab-frame spectral densities.

use crate::error::{Error, Result};
use crate::medium::lorentz_to_lab;
use crate::modes::{Label, ModeId, ModeSolution, Side};
use crate::num::{abs2, c_light, cabs, lit, pi, re, to_f64, Cx, Real};
use crate::scattering::{ScatteringResult, Solver};

/// Reported lab spectral densities times this factor give the magnitudes of the paper's Table I.
pub const TABLE_FLUX_FACTOR: f64 = 2.0 * std::f64::consts::PI;

/// Rectangular detector window in the moving frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorFilter<T> {
    pub interval: (T, T),
    pub tau: T,
}

impl<T: Real> DetectorFilter<T> {
    pub fn new(lo: T, hi: T, tau: T) -> Result<Self> {
        if !(lo < hi) || !(tau > T::zero()) {
            return Err(Error::InvalidInput(format!("filter needs lo < hi and tau > 0, got ({lo}, {hi}), {tau}")));
        }
        Ok(Self { interval: (lo, hi), tau })
    }

    pub fn width(&self) -> T {
        self.interval.1 - self.interval.0
    }

    pub fn contains(&self, omega: T) -> bool {
        omega >= self.interval.0 && omega <= self.interval.1
    }

    pub fn overlap(&self, other: &Self) -> Option<(T, T)> {
        let lo = self.interval.0.max(other.interval.0);
        let hi = self.interval.1.min(other.interval.1);
        (hi > lo).then_some((lo, hi))
    }
}

/// Columns of S whose norm class differs from that of row `row`.
pub fn anomalous_columns<T: Real>(s: &ScatteringResult<T>, row: usize) -> impl Iterator<Item = usize> + '_ {
    let g = s.sigmas.g_out[row];
    (0..8).filter(move |&b| s.sigmas.g_in[b] != g)
}

fn row_of<T: Real>(s: &ScatteringResult<T>, alpha: ModeId) -> Result<usize> {
    s.out_index(alpha)
        .filter(|_| alpha.label != Label::C)
        .ok_or_else(|| Error::InvalidInput(format!("{alpha} is not a propagating out mode at omega = {}", s.omega)))
}

/// Σ over anomalous β of |S_αβ|².
pub fn anomalous_sum<T: Real>(s: &ScatteringResult<T>, row: usize) -> T {
    anomalous_columns(s, row).fold(T::zero(), |acc, b| acc + abs2(s.s[(row, b)]))
}

/// X = Σ_{β ∉ {α}} S*_{α1 β} S_{α2 β} over the anomalous columns of row `set`.
pub fn overlap_sum<T: Real>(s: &ScatteringResult<T>, r1: usize, r2: usize, set: usize) -> Cx<T> {
    anomalous_columns(s, set).fold(re(T::zero()), |acc, b| acc + s.s[(r1, b)].conj() * s.s[(r2, b)])
}

/// |X|² evaluated as |X_{α1}||X_{α2}|, the two anomalous-set sums that quasi-unitarity makes equal.
pub fn overlap_modsq<T: Real>(s: &ScatteringResult<T>, r1: usize, r2: usize) -> T {
    cabs(overlap_sum(s, r1, r2, r1)) * cabs(overlap_sum(s, r1, r2, r2))
}

/// φ^α = (1/2π) Σ_{β ∉ {α}} |S_αβ|².
pub fn flux<T: Real>(s: &ScatteringResult<T>, alpha: ModeId) -> Result<T> {
    let r = row_of(s, alpha)?;
    Ok(anomalous_sum(s, r) / (lit::<T>(2.0) * pi::<T>()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint<T> {
    pub omega: T,
    pub flux_per_mode: Vec<(ModeId, T)>,
    pub scenario: crate::modes::KinematicScenario,
}

impl<T: Real> SpectrumPoint<T> {
    pub fn get(&self, id: ModeId) -> Option<T> {
        self.flux_per_mode.iter().find(|(m, _)| *m == id).map(|(_, f)| *f)
    }
}

pub fn spectrum_point<T: Real>(s: &ScatteringResult<T>) -> SpectrumPoint<T> {
    let flux_per_mode = s
        .sigmas
        .out_order
        .iter()
        .enumerate()
        .filter(|(_, id)| id.label != Label::C)
        .map(|(r, id)| (*id, anomalous_sum(s, r) / (lit::<T>(2.0) * pi::<T>())))
        .collect();
    SpectrumPoint { omega: s.omega, flux_per_mode, scenario: s.scenario }
}

/// Geometric grid on [lo, hi] with `n_interval` extra points inside each horizon interval.
pub fn frequency_grid<T: Real>(solver: &Solver<T>, lo: T, hi: T, n_base: usize, n_interval: usize) -> Result<Vec<T>> {
    if !(lo > T::zero() && hi > lo) || n_base < 2 {
        return Err(Error::InvalidInput("grid needs 0 < lo < hi and at least two points".into()));
    }
    let r = (hi / lo).ln();
    let mut g: Vec<T> = (0..n_base)
        .map(|i| lo * (r * lit::<T>(i as f64 / (n_base - 1) as f64)).exp())
        .collect();
    if let Some(h) = &solver.intervals {
        for (a, b) in [h.whi, h.bhi].into_iter().flatten() {
            for i in 0..n_interval {
                let t = lit::<T>((i as f64 + 0.5) / n_interval as f64);
                let w = a + t * (b - a);
                if w >= lo && w <= hi {
                    g.push(w);
                }
            }
        }
    }
    g.sort_by(|a, b| a.partial_cmp(b).unwrap());
    g.dedup();
    g.retain(|&w| solver.check_clear(w).is_ok());
    Ok(g)
}

/// Trapezoid weights of an ascending grid.
pub fn trapezoid_weights<T: Real>(grid: &[T]) -> Vec<T> {
    let n = grid.len();
    let mut w = vec![T::zero(); n];
    for i in 0..n.saturating_sub(1) {
        let h = (grid[i + 1] - grid[i]) / lit(2.0);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

fn grid_omegas<T: Real>(grid: &[ScatteringResult<T>]) -> Result<Vec<T>> {
    let om: Vec<T> = grid.iter().map(|s| s.omega).collect();
    if om.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(Error::InvalidInput("S grid must be strictly ascending in omega".into()));
    }
    Ok(om)
}

/// Mean photon number τ ∫ t φ dω on the grid.
pub fn photon_number<T: Real>(grid: &[ScatteringResult<T>], alpha: ModeId, filter: &DetectorFilter<T>) -> Result<T> {
    let om = grid_omegas(grid)?;
    let w = trapezoid_weights(&om);
    let mut sum = T::zero();
    for (i, s) in grid.iter().enumerate() {
        if filter.contains(om[i]) {
            if let Some(r) = s.out_index(alpha) {
                sum += w[i] * anomalous_sum(s, r);
            }
        }
    }
    Ok(filter.tau * sum / (lit::<T>(2.0) * pi::<T>()))
}

/// Photon-number covariance (τ/2π)² |Σ_i w_i X_i|² over the filter overlap, with the
/// modulus squared taken as the product of the two anomalous-set routes.
pub fn covariance<T: Real>(
    grid: &[ScatteringResult<T>],
    alpha: ModeId,
    alpha_prime: ModeId,
    f1: &DetectorFilter<T>,
    f2: &DetectorFilter<T>,
) -> Result<T> {
    let om = grid_omegas(grid)?;
    if f1.overlap(f2).is_none() {
        return Ok(T::zero());
    }
    let w = trapezoid_weights(&om);
    let mut total = [re(T::zero()); 2];
    let mut prev: Option<Cx<T>> = None;
    for (i, s) in grid.iter().enumerate() {
        if !(f1.contains(om[i]) && f2.contains(om[i])) {
            prev = None;
            continue;
        }
        let (x, x2) = match (s.out_index(alpha), s.out_index(alpha_prime)) {
            (Some(r1), Some(r2)) => (overlap_sum(s, r1, r2, r1), overlap_sum(s, r1, r2, r2)),
            _ => (re(T::zero()), re(T::zero())),
        };
        if let Some(p) = prev {
            let scale = cabs(p).max(cabs(x));
            let change = if scale > T::zero() { cabs(x - p) / scale } else { T::zero() };
            if change > lit(0.05) {
                return Err(Error::GridTooCoarse { omega: to_f64(om[i]), change: to_f64(change) });
            }
        }
        prev = Some(x);
        total[0] += x * w[i];
        total[1] += x2 * w[i];
    }
    let k = f1.tau / (lit::<T>(2.0) * pi::<T>());
    Ok(k * k * cabs(total[0]) * cabs(total[1]))
}

/// var(N) = N (N + τΔ/2π).
pub fn variance<T: Real>(mean_number: T, filter: &DetectorFilter<T>) -> T {
    mean_number * (mean_number + filter.tau * filter.width() / (lit::<T>(2.0) * pi::<T>()))
}

/// Overlap and the two detector bandwidths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandwidths<T> {
    pub delta: T,
    pub delta1: T,
    pub delta2: T,
}

impl<T: Real> Bandwidths<T> {
    /// Two identical detectors (Δ² = Δ₁Δ₂).
    pub fn matched(delta: T) -> Self {
        Self { delta, delta1: delta, delta2: delta }
    }

    fn prefactor(&self) -> T {
        self.delta * self.delta / (self.delta1 * self.delta2)
    }
}

/// Narrowband Pearson coefficient; for α = α′ the self-correlation ⟨N⟩²/var(N).
pub fn pearson<T: Real>(s: &ScatteringResult<T>, alpha: ModeId, alpha_prime: ModeId, bw: Bandwidths<T>) -> Result<T> {
    let r1 = row_of(s, alpha)?;
    let n1 = anomalous_sum(s, r1);
    if alpha == alpha_prime {
        return Ok(n1 / (n1 + T::one()));
    }
    let r2 = row_of(s, alpha_prime)?;
    let n2 = anomalous_sum(s, r2);
    let den = (n1 * (n1 + T::one()) * n2 * (n2 + T::one())).sqrt();
    if den == T::zero() {
        return Ok(T::zero());
    }
    Ok(bw.prefactor() * overlap_modsq(s, r1, r2) / den)
}

/// Second-order correlation; exactly 2 for a single mode.
pub fn g2<T: Real>(s: &ScatteringResult<T>, alpha: ModeId, alpha_prime: ModeId, bw: Bandwidths<T>) -> Result<T> {
    let r1 = row_of(s, alpha)?;
    if alpha == alpha_prime {
        return Ok(lit(2.0));
    }
    let r2 = row_of(s, alpha_prime)?;
    let n1 = anomalous_sum(s, r1);
    let n2 = anomalous_sum(s, r2);
    if n1 * n2 == T::zero() {
        return Ok(T::one());
    }
    Ok(T::one() + bw.prefactor() * overlap_modsq(s, r1, r2) / (n1 * n2))
}

/// Rejects a band over which n or |X| change by more than 1%.
pub fn narrowband_check<T: Real>(samples: &[ScatteringResult<T>], alpha: ModeId, alpha_prime: ModeId) -> Result<()> {
    let mut vals: Vec<[T; 3]> = Vec::new();
    for s in samples {
        let r1 = row_of(s, alpha)?;
        let r2 = row_of(s, alpha_prime)?;
        vals.push([anomalous_sum(s, r1), anomalous_sum(s, r2), overlap_modsq(s, r1, r2).sqrt()]);
    }
    for q in 0..3 {
        let mx = vals.iter().map(|v| v[q]).fold(T::zero(), |a, b| a.max(b));
        let mn = vals.iter().map(|v| v[q]).fold(mx, |a, b| a.min(b));
        if mx > T::zero() && (mx - mn) / mx > lit(0.01) {
            return Err(Error::NarrowbandViolated { variation: to_f64((mx - mn) / mx) });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationResult<T> {
    pub pair: (ModeId, ModeId),
    pub c: T,
    pub cov: T,
    pub vars: (T, T),
    pub g2: T,
}

/// Narrowband statistics of two modes centred on `omega`, checked at the band edges.
pub fn correlate<T: Real>(
    solver: &Solver<T>,
    omega: T,
    alpha: ModeId,
    alpha_prime: ModeId,
    bw: Bandwidths<T>,
    tau: T,
) -> Result<CorrelationResult<T>> {
    let half = bw.delta1.max(bw.delta2) / lit(2.0);
    let s = solver.scatter(omega)?;
    let edges = [solver.scatter(omega - half)?, s.clone(), solver.scatter(omega + half)?];
    narrowband_check(&edges, alpha, alpha_prime)?;
    let r1 = row_of(&s, alpha)?;
    let r2 = row_of(&s, alpha_prime)?;
    let k = tau / (lit::<T>(2.0) * pi::<T>());
    let (n1, n2) = (anomalous_sum(&s, r1), anomalous_sum(&s, r2));
    let cov = if alpha == alpha_prime {
        k * k * bw.delta1 * bw.delta1 * n1 * (n1 + T::one())
    } else {
        k * k * bw.delta * bw.delta * overlap_modsq(&s, r1, r2)
    };
    let vars = (
        k * k * bw.delta1 * bw.delta1 * n1 * (n1 + T::one()),
        k * k * bw.delta2 * bw.delta2 * n2 * (n2 + T::one()),
    );
    Ok(CorrelationResult {
        pair: (alpha, alpha_prime),
        c: pearson(&s, alpha, alpha_prime, bw)?,
        cov,
        vars,
        g2: g2(&s, alpha, alpha_prime, bw)?,
    })
}

/// Φ = (1 − u/v_g) φ.
pub fn lab_flux<T: Real>(phi_mf: T, v_g_lab: T, u: T) -> Result<T> {
    if v_g_lab == T::zero() {
        return Err(Error::ZeroGroupVelocity);
    }
    Ok((T::one() - u / v_g_lab) * phi_mf)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabContribution<T> {
    pub mode: ModeId,
    pub omega: T,
    /// Signed lab frequency and wavenumber of the local mode.
    pub big_omega: T,
    pub big_k: T,
    pub v_g_lab: T,
    pub phi: T,
    pub phi_lambda: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabSpectrumPoint<T> {
    pub lambda: T,
    pub phi_lambda: T,
    pub contributions: Vec<LabContribution<T>>,
}

/// Lab image of an out mode: wavelength and spectral density (2πc/λ²)|1 − u/v_g| φ.
pub fn lab_image<T: Real>(solver: &Solver<T>, mode: &ModeSolution<T>, phi: T) -> Result<(T, LabContribution<T>)> {
    let c = c_light::<T>();
    let big = mode.big_omega.re.abs();
    let med = solver.medium(mode.side);
    let ng = med
        .group_index(big)
        .ok_or_else(|| Error::InvalidInput(format!("{} lies in an opaque band", mode.id())))?;
    let vg = c / ng;
    let lambda = lit::<T>(2.0) * pi::<T>() * c / big;
    let prefactor = lit::<T>(2.0) * pi::<T>() * c / (lambda * lambda);
    let phi_lambda = prefactor * lab_flux(phi, vg, solver.step.u)?.abs();
    Ok((
        lambda,
        LabContribution {
            mode: mode.id(),
            omega: mode.omega,
            big_omega: mode.big_omega.re,
            big_k: mode.big_k.re,
            v_g_lab: vg,
            phi,
            phi_lambda,
        },
    ))
}

/// Front-frame images (side, ω, k) of a lab wavelength on both branches and sides.
pub fn lab_candidates<T: Real>(solver: &Solver<T>, lambda: T) -> Vec<(Side, T, T)> {
    let c = c_light::<T>();
    let u = solver.step.u;
    let b = u / c;
    let g = T::one() / (T::one() - b * b).sqrt();
    let big0 = lit::<T>(2.0) * pi::<T>() * c / lambda;
    let mut out = Vec::new();
    for side in [Side::Left, Side::Right] {
        let Some(n) = solver.medium(side).index(big0) else { continue };
        for sgn in [T::one(), -T::one()] {
            let big = sgn * big0;
            let big_k = sgn * n * big0 / c;
            let w = g * (big - u * big_k);
            if w > T::zero() {
                out.push((side, w, g * (big_k - u * big / (c * c))));
            }
        }
    }
    out
}

/// Lab spectral density at one wavelength, summed over the contributing out modes.
pub fn lab_spectrum_point<T: Real>(solver: &Solver<T>, lambda: T) -> Result<LabSpectrumPoint<T>> {
    let mut contributions = Vec::new();
    for (side, w, k) in lab_candidates(solver, lambda) {
        let s = match solver.scatter(w) {
            Ok(s) => s,
            Err(Error::BoundaryFrequency { .. }) => continue,
            Err(e) => return Err(e),
        };
        let modes = solver.local_modes(w, side)?;
        let hit = modes
            .iter()
            .filter(|m| m.mode.is_propagating())
            .min_by(|a, b| cabs(a.mode.k - re(k)).partial_cmp(&cabs(b.mode.k - re(k))).unwrap());
        let Some(m) = hit else { continue };
        if cabs(m.mode.k - re(k)) > lit::<T>(1e-6) * k.abs() || m.mode.is_incoming() != Some(false) {
            continue;
        }
        let phi = flux(&s, m.mode.id())?;
        contributions.push(lab_image(solver, &m.mode, phi)?.1);
    }
    if contributions.is_empty() {
        return Err(Error::NoContribution { lambda: to_f64(lambda) });
    }
    let phi_lambda = contributions.iter().fold(T::zero(), |a, c| a + c.phi_lambda);
    Ok(LabSpectrumPoint { lambda, phi_lambda, contributions })
}

pub fn lab_spectrum<T: Real>(solver: &Solver<T>, lambdas: &[T]) -> Vec<Result<LabSpectrumPoint<T>>> {
    lambdas.iter().map(|&l| lab_spectrum_point(solver, l)).collect()
}

/// Round-trip residual |Ω(ω, k) − Ω₀|/Ω₀ of a lab contribution.
pub fn lab_roundtrip_residual<T: Real>(solver: &Solver<T>, lambda: T, c: &LabContribution<T>) -> T {
    let (side, _, k) = lab_candidates(solver, lambda)
        .into_iter()
        .filter(|(s, _, _)| *s == c.mode.side)
        .min_by(|a, b| (a.1 - c.omega).abs().partial_cmp(&(b.1 - c.omega).abs()).unwrap())
        .unwrap();
    let _ = side;
    let (big, _) = lorentz_to_lab(c.omega, re(k), solver.step.u);
    let big0 = lit::<T>(2.0) * pi::<T>() * c_light::<T>() / lambda;
    (big.re.abs() - big0).abs() / big0
}

struct CellTerm<T: Real> {
    mode: ModeId,
    lo: T,
    hi: T,
    s: ScatteringResult<T>,
}

fn cell_edges<T: Real>(grid: &[T], i: usize) -> (T, T) {
    let n = grid.len();
    let lo = if i > 0 { (grid[i - 1] + grid[i]) / lit(2.0) } else { grid[0] - (grid[1.min(n - 1)] - grid[0]) / lit(2.0) };
    let hi = if i + 1 < n { (grid[i] + grid[i + 1]) / lit(2.0) } else { grid[i] + (grid[i] - grid[i.saturating_sub(1)]) / lit(2.0) };
    (lo, hi)
}

fn cell_terms<T: Real>(solver: &Solver<T>, grid: &[T], i: usize) -> Result<Vec<CellTerm<T>>> {
    let (l0, l1) = cell_edges(grid, i);
    let Ok(p) = lab_spectrum_point(solver, grid[i]) else { return Ok(Vec::new()) };
    let mut terms = Vec::new();
    for c in p.contributions {
        // ω at the cell edges on the same branch
        let edge = |lam: T| {
            lab_candidates(solver, lam)
                .into_iter()
                .filter(|(s, w, _)| *s == c.mode.side && (*w - c.omega).abs() < lit::<T>(0.5) * c.omega)
                .map(|(_, w, _)| w)
                .min_by(|a, b| (*a - c.omega).abs().partial_cmp(&(*b - c.omega).abs()).unwrap())
        };
        let (Some(a), Some(b)) = (edge(l0), edge(l1)) else { continue };
        let s = solver.scatter(c.omega)?;
        terms.push(CellTerm { mode: c.mode, lo: a.min(b), hi: a.max(b), s });
    }
    Ok(terms)
}

/// Pearson map between two lab wavelength grids with matched detector bandwidths.
pub fn lab_correlation_map<T: Real>(solver: &Solver<T>, grid1: &[T], grid2: &[T]) -> Result<Vec<Vec<T>>> {
    let t1 = (0..grid1.len()).map(|i| cell_terms(solver, grid1, i)).collect::<Result<Vec<_>>>()?;
    let t2 = (0..grid2.len()).map(|i| cell_terms(solver, grid2, i)).collect::<Result<Vec<_>>>()?;
    let stats = |t: &CellTerm<T>| -> Result<(T, T)> {
        let n = anomalous_sum(&t.s, row_of(&t.s, t.mode)?);
        let d = t.hi - t.lo;
        Ok((d * n, d * d * n * (n + T::one())))
    };
    let cell_var = |terms: &Vec<CellTerm<T>>| -> Result<T> {
        terms.iter().try_fold(T::zero(), |acc, p| Ok(acc + stats(p)?.1))
    };
    let var1 = t1.iter().map(cell_var).collect::<Result<Vec<T>>>()?;
    let var2 = t2.iter().map(cell_var).collect::<Result<Vec<T>>>()?;
    let mut map = vec![vec![T::zero(); grid2.len()]; grid1.len()];
    for (i, a) in t1.iter().enumerate() {
        for (j, b) in t2.iter().enumerate() {
            let same_cell = grid1[i] == grid2[j];
            let mut cov = T::zero();
            for p in a {
                for q in b {
                    if same_cell {
                        if p.mode == q.mode && p.lo == q.lo {
                            let (n, _) = stats(p)?;
                            cov += n * n;
                        }
                        continue;
                    }
                    let (lo, hi) = (p.lo.max(q.lo), p.hi.min(q.hi));
                    if hi <= lo || p.mode == q.mode {
                        continue;
                    }
                    let s = match solver.scatter((lo + hi) / lit(2.0)) {
                        Ok(s) => s,
                        Err(Error::BoundaryFrequency { .. }) => continue,
                        Err(e) => return Err(e),
                    };
                    let (Some(r1), Some(r2)) = (s.out_index(p.mode), s.out_index(q.mode)) else { continue };
                    cov += (hi - lo) * (hi - lo) * overlap_modsq(&s, r1, r2);
                }
            }
            if cov == T::zero() {
                continue;
            }
            map[i][j] = cov / (var1[i] * var2[j]).sqrt();
        }
    }
    Ok(map)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonRow<T> {
    pub omega: T,
    /// Position inside the horizon interval, 0 at the lower edge.
    pub t: T,
    pub partner: ModeId,
    pub lambda_nol: T,
    pub phi_nol: T,
    pub lambda_partner: T,
    pub phi_partner: T,
    pub c: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row<T> {
    pub u: T,
    /// Wavelength at which the right-side optical mode moves with the front.
    pub lambda_vm: T,
    pub white_hole: Option<HorizonRow<T>>,
    pub black_hole: Option<HorizonRow<T>>,
}

/// Scans one horizon interval for the noL lab-flux peak and reports the pair there.
pub fn horizon_row<T: Real>(solver: &Solver<T>, interval: (T, T), partner: ModeId, n_scan: usize) -> Result<HorizonRow<T>> {
    let nol = ModeId::new(Label::No, Side::Left);
    let mut best: Option<HorizonRow<T>> = None;
    let edge = 1e-3;
    for i in 0..n_scan {
        let t = lit::<T>(edge + (1.0 - 2.0 * edge) * i as f64 / (n_scan.max(2) - 1) as f64);
        let w = interval.0 + t * (interval.1 - interval.0);
        let s = match solver.scatter(w) {
            Ok(s) => s,
            Err(Error::BoundaryFrequency { .. } | Error::DegenerateRoot { .. }) => continue,
            Err(e) => return Err(e),
        };
        let (Some(rn), Some(rp)) = (s.out_index(nol), s.out_index(partner)) else { continue };
        let image = |r: usize, id: ModeId| -> Result<(T, T)> {
            let side_modes = solver.local_modes(w, id.side)?;
            let m = side_modes.iter().find(|m| m.mode.id() == id).expect("labelled mode");
            let (lam, c) = lab_image(solver, &m.mode, anomalous_sum(&s, r) / (lit::<T>(2.0) * pi::<T>()))?;
            Ok((lam, c.phi_lambda))
        };
        let (lambda_nol, phi_nol) = image(rn, nol)?;
        if best.is_some_and(|b| b.phi_nol >= phi_nol) {
            continue;
        }
        let (lambda_partner, phi_partner) = image(rp, partner)?;
        best = Some(HorizonRow {
            omega: w,
            t,
            partner,
            lambda_nol,
            phi_nol,
            lambda_partner,
            phi_partner,
            c: pearson(&s, nol, partner, Bandwidths::matched(T::one()))?,
        });
    }
    best.ok_or(Error::NoHorizon)
}

pub fn table1_row<T: Real>(solver: &Solver<T>, n_scan: usize) -> Result<Table1Row<T>> {
    let h = solver.intervals.as_ref().ok_or(Error::NoHorizon)?;
    let lambda_vm = solver
        .sbli_right
        .map(|s| lit::<T>(2.0) * pi::<T>() * c_light::<T>() / s.big_omega_uv)
        .unwrap_or(T::zero());
    let white_hole = h
        .whi
        .map(|i| horizon_row(solver, i, ModeId::new(Label::Lo, Side::Left), n_scan))
        .transpose()?;
    let black_hole = h
        .bhi
        .map(|i| horizon_row(solver, i, ModeId::new(Label::Mo, Side::Right), n_scan))
        .transpose()?;
    Ok(Table1Row { u: solver.step.u, lambda_vm, white_hole, black_hole })
}
