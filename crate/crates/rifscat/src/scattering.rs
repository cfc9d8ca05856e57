//! Global in/out modes, σ matrices and the scattering matrix at one frequency.

use nalgebra::{SMatrix, SVector};

use crate::error::{Error, Result};
use crate::medium::{left_medium, MediumSpec, StepConfig};
use crate::modes::{
    horizon_intervals, local_modes, scenario_from_modes, subluminal_interval, HorizonIntervals,
    KinematicScenario, LocalModeVector, ModeId, ModeSolution, Side, Subluminal, BOUNDARY_GUARD,
};
use crate::num::{abs2, cabs, lit, re, to_f64, Cx, Real};

pub type CMat8<T> = SMatrix<Cx<T>, 8, 8>;
pub type CVec8<T> = SVector<Cx<T>, 8>;

pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct MatchMatrix<T: Real> {
    /// 𝒜 = W_L⁻¹ W_R, mapping right-side amplitudes to left-side amplitudes.
    pub a_mat: CMat8<T>,
    /// Condition number of W_L after row and column equilibration.
    pub cond_number: T,
}

fn w_matrix<T: Real>(modes: &[LocalModeVector<T>], col_scale: &[T]) -> CMat8<T> {
    let mut w = CMat8::<T>::zeros();
    for (j, m) in modes.iter().enumerate() {
        for i in 0..8 {
            w[(i, j)] = m.w[i] * col_scale[j];
        }
    }
    w
}

fn condition<T: Real>(w: &CMat8<T>) -> T {
    let mut m = *w;
    for j in 0..8 {
        let n = m.column(j).norm();
        if n > T::zero() {
            m.column_mut(j).unscale_mut(n);
        }
    }
    for i in 0..8 {
        let n = m.row(i).norm();
        if n > T::zero() {
            m.row_mut(i).unscale_mut(n);
        }
    }
    let sv = m.singular_values();
    let mx = sv.iter().fold(T::zero(), |a, &b| a.max(b));
    let mn = sv.iter().fold(mx, |a, &b| a.min(b));
    if mn == T::zero() {
        lit(f64::INFINITY)
    } else {
        mx / mn
    }
}

fn check_modes<T: Real>(left: &[LocalModeVector<T>], right: &[LocalModeVector<T>]) -> Result<()> {
    if left.len() != 8 || right.len() != 8 {
        return Err(Error::InvalidInput("eight local modes per side are required".into()));
    }
    let w = left[0].mode.omega;
    if right.iter().chain(left).any(|m| m.mode.omega != w) {
        return Err(Error::InvalidInput("local modes at different frequencies".into()));
    }
    Ok(())
}

fn match_scaled<T: Real>(
    left: &[LocalModeVector<T>],
    right: &[LocalModeVector<T>],
    scale_l: &[T],
    scale_r: &[T],
) -> Result<MatchMatrix<T>> {
    let wl = w_matrix(left, scale_l);
    let wr = w_matrix(right, scale_r);
    let cond = condition(&wl);
    if !(cond <= lit(MAX_CONDITION)) {
        return Err(Error::SingularBasis { cond: to_f64(cond) });
    }
    // row equilibration of the stacked system
    let mut wl_s = wl;
    let mut wr_s = wr;
    for i in 0..8 {
        let mx = (0..8)
            .map(|j| cabs(wl[(i, j)]).max(cabs(wr[(i, j)])))
            .fold(T::zero(), |a, b| a.max(b));
        if mx > T::zero() {
            wl_s.row_mut(i).unscale_mut(mx);
            wr_s.row_mut(i).unscale_mut(mx);
        }
    }
    let a_mat = wl_s
        .lu()
        .solve(&wr_s)
        .ok_or(Error::SingularBasis { cond: f64::INFINITY })?;
    Ok(MatchMatrix { a_mat, cond_number: cond })
}

/// 𝒜 = W_L⁻¹ W_R from the unit-convention local modes.
pub fn match_matrix<T: Real>(
    left: &[LocalModeVector<T>],
    right: &[LocalModeVector<T>],
) -> Result<MatchMatrix<T>> {
    check_modes(left, right)?;
    let one = [T::one(); 8];
    match_scaled(left, right, &one, &one)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    In,
    Out,
    Decaying,
    Growing,
}

fn class_of<T: Real>(m: &ModeSolution<T>) -> Class {
    match (m.decaying, m.is_incoming()) {
        (Some(true), _) => Class::Decaying,
        (Some(false), _) => Class::Growing,
        (None, Some(true)) => Class::In,
        _ => Class::Out,
    }
}

/// Global-mode amplitude matrices; column j is the j-th global mode of the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Sigmas<T: Real> {
    pub sigma_l_in: CMat8<T>,
    pub sigma_r_in: CMat8<T>,
    pub sigma_l_out: CMat8<T>,
    pub sigma_r_out: CMat8<T>,
    /// Local mode defining each in (out) global mode.
    pub in_order: Vec<ModeId>,
    pub out_order: Vec<ModeId>,
    pub g_in: Vec<f64>,
    pub g_out: Vec<f64>,
    pub match_matrix: MatchMatrix<T>,
    /// σ with evanescent modes at the working scale (L in, R in, L out, R out).
    pub internal: [CMat8<T>; 4],
    /// Largest matching residual |σ_L − 𝒜σ_R| over all global modes.
    pub matching_residual: T,
}

/// Builds the in and out global-mode bases.
///
/// Evanescent columns are rescaled internally to the size of the propagating ones
/// before solving, then converted back to the unit-norm convention.
pub fn build_global_modes<T: Real>(
    left: &[LocalModeVector<T>],
    right: &[LocalModeVector<T>],
    scenario: &KinematicScenario,
) -> Result<Sigmas<T>> {
    check_modes(left, right)?;
    let omega = left[0].mode.omega;
    let all: Vec<&ModeSolution<T>> = left.iter().chain(right).map(|m| &m.mode).collect();
    let class: Vec<Class> = all.iter().map(|m| class_of(m)).collect();

    let inconsistent = |detail: String| Error::InconsistentScenario { omega: to_f64(omega), detail };
    let nprop = |s: &[LocalModeVector<T>]| s.iter().filter(|m| m.mode.is_propagating()).count();
    if (nprop(left), nprop(right)) != scenario.counts {
        return Err(inconsistent(format!(
            "propagating counts ({}, {}) differ from scenario {}",
            nprop(left),
            nprop(right),
            scenario.case
        )));
    }
    let count = |c: Class| class.iter().filter(|&&x| x == c).count();
    let (n_in, n_out, n_grow) = (count(Class::In), count(Class::Out), count(Class::Growing));
    if n_in + n_grow != 8 || n_out + n_grow != 8 {
        return Err(inconsistent(format!("{n_in} in, {n_out} out, {n_grow} growing modes")));
    }

    // internal scale for evanescent columns
    let norms: Vec<T> = left
        .iter()
        .chain(right)
        .filter(|m| m.mode.is_propagating())
        .map(|m| m.w.norm())
        .collect();
    let esc = if norms.is_empty() {
        T::one()
    } else {
        norms.iter().fold(T::zero(), |a, &b| a + b) / lit(norms.len() as f64)
    };
    let scale: Vec<T> = all.iter().map(|m| if m.is_propagating() { T::one() } else { esc }).collect();
    let matched = match_scaled(left, right, &scale[..8], &scale[8..])?;
    let (a, cond) = (matched.a_mat, matched.cond_number);

    let solve_gm = |defn: usize, kind: Class| -> Result<(CVec8<T>, CVec8<T>)> {
        let side = defn / 8;
        let mut fixed = [None::<T>; 16];
        if class[defn] == Class::Growing {
            for f in fixed.iter_mut().skip(side * 8).take(8) {
                *f = Some(T::zero());
            }
        } else {
            for j in 0..16 {
                if class[j] == kind || class[j] == Class::Growing {
                    fixed[j] = Some(T::zero());
                }
            }
        }
        fixed[defn] = Some(T::one());
        let free: Vec<usize> = (0..16).filter(|&j| fixed[j].is_none()).collect();
        if free.len() != 8 {
            return Err(inconsistent(format!("{} free amplitudes for {}", free.len(), all[defn].id())));
        }
        let mut el = CMat8::<T>::zeros();
        let mut er = CMat8::<T>::zeros();
        let mut fl = CVec8::<T>::zeros();
        let mut fr = CVec8::<T>::zeros();
        for (j, f) in fixed.iter().enumerate() {
            if let Some(v) = f {
                if j < 8 {
                    fl[j] = re(*v);
                } else {
                    fr[j - 8] = re(*v);
                }
            }
        }
        for (col, &j) in free.iter().enumerate() {
            if j < 8 {
                el[(j, col)] = re(T::one());
            } else {
                er[(j - 8, col)] = re(T::one());
            }
        }
        let x = (el - a * er)
            .lu()
            .solve(&(a * fr - fl))
            .ok_or(Error::SigmaSingular { omega: to_f64(omega) })?;
        Ok((fl + el * x, fr + er * x))
    };

    let basis = |kind: Class| -> Result<(CMat8<T>, CMat8<T>, Vec<usize>)> {
        let mut defs: Vec<usize> = (0..16).filter(|&j| class[j] == kind || class[j] == Class::Growing).collect();
        defs.sort_by(|&i, &j| {
            all[j]
                .big_omega
                .re
                .partial_cmp(&all[i].big_omega.re)
                .unwrap()
                .then(all[i].k.im.partial_cmp(&all[j].k.im).unwrap())
        });
        let mut sl = CMat8::<T>::zeros();
        let mut sr = CMat8::<T>::zeros();
        for (c, &d) in defs.iter().enumerate() {
            let (l, r) = solve_gm(d, kind)?;
            sl.set_column(c, &l);
            sr.set_column(c, &r);
        }
        Ok((sl, sr, defs))
    };
    let (mut il, mut ir, din) = basis(Class::In)?;
    let (mut ol, mut or, dout) = basis(Class::Out)?;

    let mut resid = T::zero();
    for (sl, sr) in [(&il, &ir), (&ol, &or)] {
        let d = sl - a * sr;
        resid = resid.max(d.iter().map(|z| cabs(*z)).fold(T::zero(), |x, y| x.max(y)));
    }

    let internal = [il, ir, ol, or];
    // back to unit-norm evanescent amplitudes
    for (mats, defs) in [([&mut il, &mut ir], &din), ([&mut ol, &mut or], &dout)] {
        for (side, m) in mats.into_iter().enumerate() {
            for i in 0..8 {
                m.row_mut(i).scale_mut(scale[side * 8 + i]);
            }
            for (c, &d) in defs.iter().enumerate() {
                m.column_mut(c).unscale_mut(scale[d]);
            }
        }
    }
    let mut a_unit = a;
    for i in 0..8 {
        for j in 0..8 {
            a_unit[(i, j)] = a[(i, j)] * scale[i] / scale[8 + j];
        }
    }
    let g = |d: &usize| all[*d].norm_sign.g();
    Ok(Sigmas {
        sigma_l_in: il,
        sigma_r_in: ir,
        sigma_l_out: ol,
        sigma_r_out: or,
        in_order: din.iter().map(|&d| all[d].id()).collect(),
        out_order: dout.iter().map(|&d| all[d].id()).collect(),
        g_in: din.iter().map(g).collect(),
        g_out: dout.iter().map(g).collect(),
        match_matrix: MatchMatrix { a_mat: a_unit, cond_number: cond },
        internal,
        matching_residual: resid,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringResult<T: Real> {
    pub omega: T,
    pub scenario: KinematicScenario,
    pub sigmas: Sigmas<T>,
    /// Rows indexed by out global modes, columns by in global modes.
    pub s: CMat8<T>,
    /// max |S_L − S_R| between the two evaluations of S.
    pub lr_residual: T,
    /// Largest discarded entry coupling unphysical and physical global modes.
    pub block_residual: T,
    /// ‖S†g_out S − g_in‖_max.
    pub quasi_unitarity_residual: T,
    /// max over rows of |Σ g_β |S_αβ|² − g_α|.
    pub row_norm_residual: T,
}

impl<T: Real> ScatteringResult<T> {
    pub fn out_index(&self, id: ModeId) -> Option<usize> {
        self.sigmas.out_order.iter().position(|m| *m == id)
    }

    pub fn in_index(&self, id: ModeId) -> Option<usize> {
        self.sigmas.in_order.iter().position(|m| *m == id)
    }

    pub fn mode_order(&self) -> &[ModeId] {
        &self.sigmas.out_order
    }

    pub fn g(&self) -> &[f64] {
        &self.sigmas.g_out
    }
}

fn max_abs<T: Real>(m: &CMat8<T>) -> T {
    m.iter().map(|z| cabs(*z)).fold(T::zero(), |a, b| a.max(b))
}

/// Solves a x = b after scaling the rows of both by the row maxima.
fn equilibrated_solve<T: Real>(a: &CMat8<T>, b: &CMat8<T>) -> Option<CMat8<T>> {
    let (mut a, mut b) = (*a, *b);
    for i in 0..8 {
        let mx = (0..8).map(|j| cabs(a[(i, j)]).max(cabs(b[(i, j)]))).fold(T::zero(), |x, y| x.max(y));
        if mx > T::zero() {
            a.row_mut(i).unscale_mut(mx);
            b.row_mut(i).unscale_mut(mx);
        }
    }
    a.lu().solve(&b)
}

/// S = (σ_L^out)⁻¹ σ_L^in, cross-checked against the right-side expression.
pub fn scattering_matrix<T: Real>(sigmas: Sigmas<T>, scenario: KinematicScenario, omega: T) -> Result<ScatteringResult<T>> {
    let sing = || Error::SigmaSingular { omega: to_f64(omega) };
    let [il, ir, ol, or] = &sigmas.internal;
    let mut s = equilibrated_solve(ol, il).ok_or_else(sing)?;
    let mut s_r = equilibrated_solve(or, ir).ok_or_else(sing)?;
    if s.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(sing());
    }
    // the unphysical global modes are shared by both bases: S is block diagonal
    let unphys = |id: &ModeId| id.growing;
    let mut block = T::zero();
    for (a, ida) in sigmas.out_order.iter().enumerate() {
        for (b, idb) in sigmas.in_order.iter().enumerate() {
            match (unphys(ida), unphys(idb)) {
                (false, false) => continue,
                (true, true) if ida == idb => {
                    block = block.max(cabs(s[(a, b)] - re(T::one())).max(cabs(s_r[(a, b)] - re(T::one()))));
                    s[(a, b)] = re(T::one());
                }
                _ => {
                    block = block.max(cabs(s[(a, b)]).max(cabs(s_r[(a, b)])));
                    s[(a, b)] = re(T::zero());
                }
            }
            s_r[(a, b)] = s[(a, b)];
        }
    }
    let lr = max_abs(&(s - s_r));
    let gi: Vec<T> = sigmas.g_in.iter().map(|&x| lit(x)).collect();
    let go: Vec<T> = sigmas.g_out.iter().map(|&x| lit(x)).collect();
    let mut qu = T::zero();
    for a in 0..8 {
        for b in 0..8 {
            let mut z = re(T::zero());
            for r in 0..8 {
                z += s[(r, a)].conj() * s[(r, b)] * go[r];
            }
            if a == b {
                z -= re(gi[a]);
            }
            qu = qu.max(cabs(z));
        }
    }
    let mut rn = T::zero();
    for a in 0..8 {
        let sum = (0..8).fold(T::zero(), |acc, b| acc + abs2(s[(a, b)]) * gi[b]);
        rn = rn.max((sum - go[a]).abs());
    }
    Ok(ScatteringResult {
        omega,
        scenario,
        sigmas,
        s,
        lr_residual: lr,
        block_residual: block,
        quasi_unitarity_residual: qu,
        row_norm_residual: rn,
    })
}

/// Step geometry with the derived left medium and interval data cached.
#[derive(Debug, Clone)]
pub struct Solver<T: Real> {
    pub step: StepConfig<T>,
    pub left: MediumSpec<T>,
    pub sbli_left: Option<Subluminal<T>>,
    pub sbli_right: Option<Subluminal<T>>,
    pub intervals: Option<HorizonIntervals<T>>,
}

impl<T: Real> Solver<T> {
    pub fn new(step: StepConfig<T>) -> Self {
        let left = left_medium(&step);
        let intervals = horizon_intervals(&step).ok();
        let (sbli_left, sbli_right) = match &intervals {
            Some(h) => (h.left, h.right),
            None => (subluminal_interval(&left, step.u), subluminal_interval(&step.right_medium, step.u)),
        };
        Self { step, left, sbli_left, sbli_right, intervals }
    }

    pub fn medium(&self, side: Side) -> &MediumSpec<T> {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.step.right_medium,
        }
    }

    pub fn sbli(&self, side: Side) -> Option<&Subluminal<T>> {
        match side {
            Side::Left => self.sbli_left.as_ref(),
            Side::Right => self.sbli_right.as_ref(),
        }
    }

    /// Refuses frequencies within the boundary guard of any interval edge.
    pub fn check_clear(&self, omega: T) -> Result<()> {
        for s in [self.sbli_left, self.sbli_right].iter().flatten() {
            for e in [s.omega_min, s.omega_max] {
                if (omega - e).abs() <= lit::<T>(BOUNDARY_GUARD) * e {
                    return Err(Error::BoundaryFrequency { omega: to_f64(omega), edge: to_f64(e) });
                }
            }
        }
        Ok(())
    }

    pub fn local_modes(&self, omega: T, side: Side) -> Result<Vec<LocalModeVector<T>>> {
        local_modes(self.medium(side), self.step.u, omega, side, self.sbli(side))
    }

    pub fn scatter(&self, omega: T) -> Result<ScatteringResult<T>> {
        self.check_clear(omega)?;
        let l = self.local_modes(omega, Side::Left)?;
        let r = self.local_modes(omega, Side::Right)?;
        let ls: Vec<ModeSolution<T>> = l.iter().map(|m| m.mode).collect();
        let rs: Vec<ModeSolution<T>> = r.iter().map(|m| m.mode).collect();
        let scenario = scenario_from_modes(&ls, &rs, omega)?;
        let sig = build_global_modes(&l, &r, &scenario)?;
        scattering_matrix(sig, scenario, omega)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::velocity_matched;
    use crate::modes::{Label, Scenario};

    fn solver(dn: f64) -> Solver<f64> {
        let m = MediumSpec::fused_silica();
        let u = velocity_matched(&m, 400e-9).unwrap();
        Solver::new(StepConfig::new(m, dn, u).unwrap())
    }

    fn mid(a: (f64, f64)) -> f64 {
        0.5 * (a.0 + a.1)
    }

    fn sample_points(s: &Solver<f64>) -> Vec<f64> {
        let h = s.intervals.unwrap();
        let (whi, bhi) = (h.whi.unwrap(), h.bhi.unwrap());
        vec![0.3 * whi.0, mid(whi), 0.5 * (whi.1 + bhi.0), mid(bhi), 1.5 * bhi.1]
    }

    #[test]
    fn identity_match_for_equal_media() {
        let s = solver(0.0);
        let w = 1e14;
        let l = s.local_modes(w, Side::Left).unwrap();
        let r = s.local_modes(w, Side::Right).unwrap();
        let m = match_matrix(&l, &r).unwrap();
        let err = max_abs(&(m.a_mat - CMat8::identity()));
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn all_scenarios_quasi_unitary() {
        let s = solver(2e-6);
        let expect = [Scenario::A, Scenario::B, Scenario::C, Scenario::D, Scenario::E];
        for (w, e) in sample_points(&s).into_iter().zip(expect) {
            let r = s.scatter(w).unwrap();
            assert_eq!(r.scenario.case, e);
            assert!(r.quasi_unitarity_residual < 1e-8, "{e}: {}", r.quasi_unitarity_residual);
            assert!(r.row_norm_residual < 1e-8);
            assert!(r.lr_residual < 1e-8, "{e}: {}", r.lr_residual);
            assert!(r.sigmas.matching_residual < 1e-9);
            assert!(r.block_residual < 1e-12, "{e}: {}", r.block_residual);
        }
    }

    #[test]
    fn quasi_unitary_next_to_interval_edges() {
        // slow merging modes; needs the compensated root polish
        let s = solver(1e-6);
        for e in s.intervals.unwrap().edges() {
            for off in [-3e-7, 3e-7, 1e-6] {
                let r = s.scatter(e * (1.0 + off)).unwrap();
                assert!(r.quasi_unitarity_residual < 1e-9, "edge {e:e} off {off}: {}", r.quasi_unitarity_residual);
            }
        }
    }

    #[test]
    fn zero_step_is_identity() {
        let s = solver(0.0);
        for w in [1e13, 2e14, 8e14] {
            let r = s.scatter(w).unwrap();
            assert!(max_abs(&(r.s - CMat8::identity())) < 1e-10);
            assert_eq!(r.sigmas.in_order.len(), 8);
        }
    }

    #[test]
    fn scenario_c_closed_form() {
        let s = solver(2e-6);
        let w = sample_points(&s)[2];
        let r = s.scatter(w).unwrap();
        let a = r.sigmas.match_matrix.a_mat;
        // index 2 is mo: moL defines the in mode, moR the out mode
        assert_eq!(r.sigmas.in_order[2], ModeId::new(Label::Mo, Side::Left));
        assert_eq!(r.sigmas.out_order[2], ModeId::new(Label::Mo, Side::Right));
        let tol = 1e-8;
        let m = 2;
        assert!(cabs(r.s[(m, m)] - a[(m, m)].inv()) < tol * cabs(r.s[(m, m)]));
        for j in 0..8 {
            if j == m {
                continue;
            }
            let sj = -a[(m, j)] / a[(m, m)];
            assert!(cabs(r.s[(m, j)] - sj) < tol * (1.0 + cabs(sj)));
            assert!(cabs(r.sigmas.sigma_r_in[(m, j)] - sj) < tol * (1.0 + cabs(sj)));
            for i in 0..8 {
                if i == m {
                    continue;
                }
                let sij = a[(i, j)] - a[(i, m)] * a[(m, j)] / a[(m, m)];
                assert!(cabs(r.s[(i, j)] - sij) < tol * (1.0 + cabs(sij)));
            }
        }
    }

    #[test]
    fn out_mo_right_structure() {
        let s = solver(2e-6);
        let w = sample_points(&s)[3];
        let r = s.scatter(w).unwrap();
        let c = r.out_index(ModeId::new(Label::Mo, Side::Right)).unwrap();
        let l = s.local_modes(w, Side::Left).unwrap();
        let rr = s.local_modes(w, Side::Right).unwrap();
        // right side: every amplitude may be nonzero (7 incoming + moR)
        let nz_r = (0..8).filter(|&i| cabs(r.sigmas.sigma_r_out[(i, c)]) > 0.0).count();
        assert_eq!(nz_r, 8);
        assert!(rr.iter().all(|m| m.mode.is_propagating()));
        // left side: only the decaying evanescent mode survives
        for (i, m) in l.iter().enumerate() {
            let amp = cabs(r.sigmas.sigma_l_out[(i, c)]);
            if m.mode.decaying == Some(true) {
                assert!(amp > 0.0);
            } else if m.mode.is_incoming() != Some(false) {
                assert_eq!(amp, 0.0, "{}", m.mode.id());
            }
        }
    }

    #[test]
    fn condition_grows_towards_extremum() {
        let s = solver(2e-6);
        let wmax = s.sbli_left.unwrap().omega_max;
        let mut last = 0.0;
        for rel in [1e-3, 1e-5, 1e-7] {
            let w = wmax * (1.0 - rel);
            let l = s.local_modes(w, Side::Left).unwrap();
            let r = s.local_modes(w, Side::Right).unwrap();
            let c = match_matrix(&l, &r).unwrap().cond_number;
            assert!(c > last);
            last = c;
        }
    }

    #[test]
    fn anomalous_elements_inside_bhi() {
        let s = solver(2e-6);
        let r = s.scatter(sample_points(&s)[3]).unwrap();
        let a = r.out_index(ModeId::new(Label::No, Side::Left)).unwrap();
        let mix: f64 = (0..8)
            .filter(|&b| r.sigmas.g_in[b] != r.sigmas.g_out[a])
            .map(|b| abs2(r.s[(a, b)]))
            .sum();
        assert!(mix > 0.0);
    }

    #[test]
    fn boundary_refused() {
        let s = solver(2e-6);
        let e = s.sbli_left.unwrap().omega_min;
        assert!(matches!(s.scatter(e), Err(Error::BoundaryFrequency { .. })));
    }
}
