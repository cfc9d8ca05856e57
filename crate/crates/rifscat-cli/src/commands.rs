//! The eight subcommands. Each resolves its parameters, computes on a rayon pool in
//! grid order and writes one artifact (corrmap writes two).

use std::path::PathBuf;

use rayon::prelude::*;
use serde_json::{json, Value};

use rifscat::medium::MuRule;
use rifscat::modes::{classify_scenario, width_uev, HorizonIntervals, Label, ModeId, NormSign, Side, Subluminal};
use rifscat::observables::{
    frequency_grid, lab_candidates, lab_correlation_map, lab_spectrum_point, spectrum_point, table1_row, HorizonRow,
    TABLE_FLUX_FACTOR,
};
use rifscat::scattering::{ScatteringResult, Solver};
use rifscat::verification::run_suite;
use rifscat::{Error, C_LIGHT};

use crate::config::{
    parse_count, parse_delta_n, parse_format, parse_length, parse_list, parse_positive, parse_u64, parse_velocity,
    Format, Resolver, StepArgs, PLACEMENT_KEYS, Velocity, DEFAULT_LADDER, DEFAULT_VELOCITIES,
};
use crate::error::CliError;
use crate::output::{num, write_csv, write_json, Metadata, Target};

struct Ctx {
    name: &'static str,
    out_dir: PathBuf,
    output: Option<String>,
    pool: rayon::ThreadPool,
}

impl Ctx {
    fn target(&self, ext: &str) -> Target {
        Target::resolve(self.output.as_deref(), &self.out_dir, &format!("{}.{ext}", self.name))
    }

    fn metadata(&self, r: &Resolver) -> Metadata {
        // placement keys change where output goes, never what it contains
        let config = r
            .resolved
            .iter()
            .filter(|(k, _)| !PLACEMENT_KEYS.contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Metadata::new(self.name, &r.canonical(self.name), config)
    }
}

pub fn dispatch(name: &'static str, r: &mut Resolver) -> Result<(), CliError> {
    let out_dir = PathBuf::from(r.get("out_dir", ".", |s| Ok(s.to_string()))?);
    let output = r.get_opt("output", |s| Ok(s.to_string()))?;
    let threads = r.get("threads", "0", parse_count(0))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let ctx = Ctx { name, out_dir, output, pool };
    match name {
        "dispersion" => dispersion(&ctx, r),
        "scenario" => scenario(&ctx, r),
        "smatrix" => smatrix(&ctx, r),
        "spectrum" => spectrum(&ctx, r),
        "labspectrum" => labspectrum(&ctx, r),
        "corrmap" => corrmap(&ctx, r),
        "table1" => table1(&ctx, r),
        "verify" => verify(&ctx, r),
        _ => Err(CliError::Config(format!("unknown command {name}"))),
    }
}

fn json_only(r: &mut Resolver) -> Result<(), CliError> {
    match r.get("format", "json", parse_format)? {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Config("this command writes JSON only".into())),
    }
}

fn mu_rule_name(m: MuRule) -> &'static str {
    match m {
        MuRule::Linear => "linear",
        MuRule::Exact => "exact",
    }
}

fn context(solver: &Solver<f64>, omega: f64) -> String {
    let st = &solver.step;
    format!("omega = {omega:e} rad/s, delta_n = {:e}, u = {:e} m/s", st.delta_n, st.u)
}

/// Errors that mark a frequency as unusable rather than the run as broken.
fn skippable(e: &Error) -> bool {
    matches!(e, Error::BoundaryFrequency { .. } | Error::NearResonance { .. } | Error::DegenerateRoot { .. })
}

fn sbli_json(s: Option<&Subluminal<f64>>) -> Value {
    match s {
        None => Value::Null,
        Some(s) => json!({
            "omega_min": s.omega_min,
            "omega_max": s.omega_max,
            "lambda_ir_m": 2.0 * std::f64::consts::PI * C_LIGHT / s.big_omega_ir,
            "lambda_uv_m": 2.0 * std::f64::consts::PI * C_LIGHT / s.big_omega_uv,
        }),
    }
}

fn interval_json(i: Option<(f64, f64)>) -> Value {
    match i {
        None => Value::Null,
        Some((a, b)) => json!({ "omega_lo": a, "omega_hi": b, "width_uev": width_uev((a, b)) }),
    }
}

fn step_json(solver: &Solver<f64>) -> Value {
    let st = &solver.step;
    json!({
        "delta_n": st.delta_n,
        "u_m_per_s": st.u,
        "u_over_c": st.u / C_LIGHT,
        "gamma": st.gamma,
        "mu": st.mu,
        "mu_rule": mu_rule_name(st.mu_rule),
        "n_r": st.n_r,
        "lambda_ref_m": st.lambda_ref,
    })
}

fn with_step(meta: Metadata, solver: &Solver<f64>) -> Metadata {
    let h = solver.intervals.as_ref();
    meta.derived("step", step_json(solver))
        .derived("whi", interval_json(h.and_then(|h| h.whi)))
        .derived("bhi", interval_json(h.and_then(|h| h.bhi)))
}

fn build_solver(r: &mut Resolver) -> Result<(StepArgs, Solver<f64>), CliError> {
    let args = StepArgs::resolve(r)?;
    let step = args.step(args.delta_n, args.velocity)?;
    Ok((args, Solver::new(step)))
}

fn omega_axis(lo: f64, hi: f64, n: usize, log: bool) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            if log {
                lo * (hi / lo).powf(t)
            } else {
                lo + (hi - lo) * t
            }
        })
        .collect()
}

fn check_range(lo: f64, hi: f64, what: &str) -> Result<(), CliError> {
    if lo < hi {
        Ok(())
    } else {
        Err(CliError::Config(format!("{what}: minimum {lo:e} must be below maximum {hi:e}")))
    }
}

fn norm_name(n: NormSign) -> &'static str {
    match n {
        NormSign::Positive => "+1",
        NormSign::Negative => "-1",
        _ => "unphysical",
    }
}

fn dispersion(ctx: &Ctx, r: &mut Resolver) -> Result<(), CliError> {
    let (_, solver) = build_solver(r)?;
    let lo = r.get("omega_min", "1e13", parse_positive)?;
    let hi = r.get("omega_max", "4e15", parse_positive)?;
    check_range(lo, hi, "omega")?;
    let n = r.get("points", "400", parse_count(2))?;
    let log = r.get("grid_spacing", "log", |s| match s {
        "log" => Ok(true),
        "lin" => Ok(false),
        _ => Err("expected `log` or `lin`".into()),
    })?;
    let sides = r.get("side", "both", |s| match s {
        "L" => Ok(vec![Side::Left]),
        "R" => Ok(vec![Side::Right]),
        "both" => Ok(vec![Side::Left, Side::Right]),
        _ => Err("expected `L`, `R` or `both`".into()),
    })?;
    let format = r.get("format", "csv", parse_format)?;
    let grid = omega_axis(lo, hi, n, log);
    type Rows = Vec<Vec<String>>;
    let per_point: Vec<Result<Rows, (f64, Error)>> = ctx.pool.install(|| {
        grid.par_iter()
            .map(|&w| {
                let mut rows = Vec::new();
                for &side in &sides {
                    let modes = solver.local_modes(w, side).map_err(|e| (w, e))?;
                    for m in modes {
                        let s = m.mode;
                        rows.push(vec![
                            num(w),
                            side.to_string(),
                            s.id().to_string(),
                            num(s.k.re),
                            num(s.k.im),
                            num(s.big_omega.re),
                            num(s.big_omega.im),
                            num(s.big_k.re),
                            num(s.big_k.im),
                            s.group_velocity_mf.map(num).unwrap_or_default(),
                            norm_name(s.norm_sign).to_string(),
                        ]);
                    }
                }
                Ok(rows)
            })
            .collect()
    });
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for p in per_point {
        match p {
            Ok(mut v) => rows.append(&mut v),
            Err((w, e)) if skippable(&e) => skipped.push(json!({ "omega": w, "reason": e.to_string() })),
            Err((w, e)) => return Err(CliError::compute(context(&solver, w), e)),
        }
    }
    let header: Vec<String> = [
        "omega", "side", "mode", "k_re", "k_im", "lab_omega_re", "lab_omega_im", "lab_k_re", "lab_k_im", "v_g", "norm_sign",
    ]
    .map(String::from)
    .to_vec();
    let meta = with_step(ctx.metadata(r), &solver)
        .derived("skipped", json!(skipped))
        .unit("omega", "rad/s (front frame)")
        .unit("k", "rad/m (front frame)")
        .unit("lab_omega", "rad/s (signed lab frequency)")
        .unit("lab_k", "rad/m")
        .unit("v_g", "m/s, front-frame group velocity; empty for complex k")
        .note("modes on each side are listed in descending lab frequency");
    match format {
        Format::Csv => write_csv(&ctx.target("csv"), &meta, &header, &rows),
        Format::Json => {
            let data: Vec<Value> = rows
                .iter()
                .map(|row| Value::Object(header.iter().cloned().zip(row.iter().map(|x| json!(x))).collect()))
                .collect();
            write_json(&ctx.target("json"), &meta, json!(data))
        }
    }
}

/// Scenario of each gap between consecutive interval edges.
fn scenario_sequence(solver: &Solver<f64>, h: Option<&HorizonIntervals<f64>>) -> Vec<Value> {
    let mut edges: Vec<f64> = h.map(|h| h.edges()).unwrap_or_default();
    edges.dedup();
    let mut bounds = vec![0.0];
    bounds.extend(&edges);
    bounds.push(f64::INFINITY);
    let mut seq: Vec<Value> = Vec::new();
    let mut last: Option<String> = None;
    for p in bounds.windows(2) {
        let probe = match (p[0], p[1]) {
            (a, b) if a == 0.0 && b.is_finite() => 0.5 * b,
            (a, b) if b.is_infinite() => if a > 0.0 { 1.5 * a } else { 1e14 },
            (a, b) => 0.5 * (a + b),
        };
        let case = match classify_scenario(&solver.step, probe) {
            Ok(k) => k.case.as_str().to_string(),
            Err(e) => format!("error: {e}"),
        };
        if last.as_deref() == Some(case.as_str()) {
            if let Some(Value::Object(o)) = seq.last_mut() {
                o.insert("omega_hi".into(), if p[1].is_finite() { json!(p[1]) } else { Value::Null });
            }
            continue;
        }
        seq.push(json!({
            "scenario": case,
            "omega_lo": p[0],
            "omega_hi": if p[1].is_finite() { json!(p[1]) } else { Value::Null },
        }));
        last = Some(case);
    }
    seq
}

fn scenario(ctx: &Ctx, r: &mut Resolver) -> Result<(), CliError> {
    json_only(r)?;
    let args = StepArgs::resolve(r)?;
    let ladder = r.get("delta_n_list", DEFAULT_LADDER, parse_list(parse_delta_n))?;
    let solvers = ladder
        .iter()
        .map(|&dn| Ok(Solver::new(args.step(dn, args.velocity)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let data: Vec<Value> = ctx.pool.install(|| {
        solvers
            .par_iter()
            .map(|s| {
                let h = s.intervals.as_ref();
                json!({
                    "step": step_json(s),
                    "sbli_left": sbli_json(s.sbli_left.as_ref()),
                    "sbli_right": sbli_json(s.sbli_right.as_ref()),
                    "whi": interval_json(h.and_then(|h| h.whi)),
                    "bhi": interval_json(h.and_then(|h| h.bhi)),
                    "sequence": scenario_sequence(s, h),
                })
            })
            .collect()
    });
    let meta = ctx
        .metadata(r)
        .unit("omega", "rad/s (front frame)")
        .unit("width_uev", "micro-electronvolt, hbar times the interval width")
        .unit("lambda", "m (vacuum wavelength of the velocity-matched lab frequencies)");
    write_json(&ctx.target("json"), &meta, json!(data))
}

fn cmat_json(s: &ScatteringResult<f64>) -> Value {
    let part = |f: &dyn Fn(usize, usize) -> f64| -> Value {
        json!((0..8).map(|i| (0..8).map(|j| f(i, j)).collect::<Vec<_>>()).collect::<Vec<_>>())
    };
    json!({
        "re": part(&|i, j| s.s[(i, j)].re),
        "im": part(&|i, j| s.s[(i, j)].im),
        "abs2": part(&|i, j| s.s[(i, j)].norm_sqr()),
    })
}

fn smatrix_json(s: &ScatteringResult<f64>) -> Value {
    let ids = |v: &[ModeId]| v.iter().map(|m| m.to_string()).collect::<Vec<_>>();
    json!({
        "omega": s.omega,
        "scenario": s.scenario.case.as_str(),
        "propagating_counts": [s.scenario.counts.0, s.scenario.counts.1],
        "in_modes": ids(&s.sigmas.in_order),
        "out_modes": ids(&s.sigmas.out_order),
        "g_in": s.sigmas.g_in,
        "g_out": s.sigmas.g_out,
        "s": cmat_json(s),
        "residuals": {
            "quasi_unitarity": s.quasi_unitarity_residual,
            "row_norm": s.row_norm_residual,
            "left_right": s.lr_residual,
            "block": s.block_residual,
            "matching": s.sigmas.matching_residual,
        },
        "match_condition_number": s.sigmas.match_matrix.cond_number,
    })
}

fn smatrix(ctx: &Ctx, r: &mut Resolver) -> Result<(), CliError> {
    json_only(r)?;
    let (_, solver) = build_solver(r)?;
    let omega = r.get_opt("omega", parse_positive)?;
    let lambda = r.get_opt("lambda", parse_length)?;
    let omegas: Vec<f64> = match (omega, lambda) {
        (Some(w), None) => vec![w],
        (None, Some(l)) => {
            let mut ws: Vec<f64> = lab_candidates(&solver, l).into_iter().map(|(_, w, _)| w).collect();
            ws.sort_by(f64::total_cmp);
            ws.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
            ws
        }
        _ => return Err(CliError::Config("smatrix needs exactly one of omega or lambda".into())),
    };
    let mut data = Vec::new();
    for w in omegas {
        let s = solver.scatter(w).map_err(|e| CliError::compute(context(&solver, w), e))?;
        data.push(smatrix_json(&s));
    }
    let meta = with_step(ctx.metadata(r), &solver)
        .unit("omega", "rad/s (front frame)")
        .note("S rows index out global modes, columns in global modes; unphysical (growing) modes carry g = +1");
    write_json(&ctx.target("json"), &meta, json!(data))
}

fn spectrum_ids() -> Vec<ModeId> {
    let mut v = Vec::new();
    for side in [Side::Left, Side::Right] {
        for l in Label::PROPAGATING {
            v.push(ModeId::new(l, side));
        }
    }
    v
}

fn spectrum(ctx: &Ctx, r: &mut Resolver) -> Result<(), CliError> {
    let (_, solver) = build_solver(r)?;
    let edges = solver.intervals.as_ref().map(|h| h.edges()).unwrap_or_default();
    let (dlo, dhi) = match (edges.first(), edges.last()) {
        (Some(a), Some(b)) => (format!("{:e}", 0.2 * a), format!("{:e}", 2.0 * b)),
        _ => ("1e13".into(), "1e15".into()),
    };
    let lo = r.get("omega_min", &dlo, parse_positive)?;
    let hi = r.get("omega_max", &dhi, parse_positive)?;
    check_range(lo, hi, "omega")?;
    let n = r.get("points", "400", parse_count(2))?;
    let ni = r.get("interval_points", "200", parse_count(0))?;
    let format = r.get("format", "csv", parse_format)?;
    let grid = frequency_grid(&solver, lo, hi, n, ni).map_err(|e| CliError::compute(context(&solver, lo), e))?;
    let results: Vec<Result<ScatteringResult<f64>, (f64, Error)>> =
        ctx.pool.install(|| grid.par_iter().map(|&w| solver.scatter(w).map_err(|e| (w, e))).collect());
    let ids = spectrum_ids();
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut skipped = Vec::new();
    for res in results {
        let s = match res {
            Ok(s) => s,
            Err((w, e)) if skippable(&e) => {
                skipped.push(json!({ "omega": w, "reason": e.to_string() }));
                continue;
            }
            Err((w, e)) => return Err(CliError::compute(context(&solver, w), e)),
        };
        let p = spectrum_point(&s);
        let mut row = vec![num(p.omega), p.scenario.case.as_str().to_string(), num(s.quasi_unitarity_residual)];
        row.extend(ids.iter().map(|id| p.get(*id).map(num).unwrap_or_default()));
        rows.push(row);
        let flux: serde_json::Map<String, Value> = p.flux_per_mode.iter().map(|(id, f)| (id.to_string(), json!(f))).collect();
        json_rows.push(json!({
            "omega": p.omega,
            "scenario": p.scenario.case.as_str(),
            "quasi_unitarity": s.quasi_unitarity_residual,
            "phi": flux,
        }));
    }
    let mut header = vec!["omega".to_string(), "scenario".into(), "quasi_unitarity".into()];
    header.extend(ids.iter().map(|id| format!("phi_{id}")));
    let meta = with_step(ctx.metadata(r), &solver)
        .derived("skipped", json!(skipped))
        .unit("omega", "rad/s (front frame)")
        .unit("phi", "photons per unit time per unit angular frequency, (1/2pi) sum of anomalous |S|^2")
        .note("empty phi cells: mode does not propagate at that frequency");
    match format {
        Format::Csv => write_csv(&ctx.target("csv"), &meta, &header, &rows),
        Format::Json => write_json(&ctx.target("json"), &meta, json!(json_rows)),
    }
}

fn lambda_grid(r: &mut Resolver, lo: &str, hi: &str, n: &str) -> Result<Vec<f64>, CliError> {
    let lo = r.get("lambda_min", lo, parse_length)?;
    let hi = r.get("lambda_max", hi, parse_length)?;
    check_range(lo, hi, "lambda")?;
    let n = r.get("points", n, parse_count(2))?;
    Ok(omega_axis(lo, hi, n, true))
}

fn labspectrum(ctx: &Ctx, r: &mut Resolver) -> Result<(), CliError> {
    let (_, solver) = build_solver(r)?;
    let grid = lambda_grid(r, "200nm", "4um", "2000")?;
    let format = r.get("format", "csv", parse_format)?;
    let points: Vec<Result<_, (f64, Error)>> = ctx
        .pool
        .install(|| grid.par_iter().map(|&l| lab_spectrum_point(&solver, l).map_err(|e| (l, e))).collect());
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for (p, &lam) in points.into_iter().zip(&grid) {
        let p = match p {
            Ok(p) => Some(p),
            Err((_, Error::NoContribution { .. })) => None,
            Err((l, e)) => return Err(CliError::compute(format!("lambda = {l:e} m, {}", context(&solver, 0.0)), e)),
        };
        let phi = p.as_ref().map_or(0.0, |p| p.phi_lambda);
        let contribs = p.as_ref().map(|p| p.contributions.clone()).unwrap_or_default();
        let modes: Vec<String> = contribs.iter().map(|c| c.mode.to_string()).collect();
        let omegas: Vec<String> = contribs.iter().map(|c| num(c.omega)).collect();
        let parts: Vec<String> = contribs.iter().map(|c| num(c.phi_lambda)).collect();
        rows.push(vec![num(lam), num(phi), num(phi * TABLE_FLUX_FACTOR), modes.join(";"), omegas.join(";"), parts.join(";")]);
        json_rows.push(json!({
            "lambda": lam,
            "phi_lambda": phi,
            "phi_lambda_table": phi * TABLE_FLUX_FACTOR,
            "contributions": contribs.iter().map(|c| json!({
                "mode": c.mode.to_string(),
                "omega": c.omega,
                "lab_omega": c.big_omega,
                "v_g_lab": c.v_g_lab,
                "phi_lambda": c.phi_lambda,
            })).collect::<Vec<_>>(),
        }));
    }
    let header: Vec<String> =
        ["lambda", "phi_lambda", "phi_lambda_table", "modes", "omegas", "phi_lambda_by_mode"].map(String::from).to_vec();
    let meta = with_step(ctx.metadata(r), &solver)
        .unit("lambda", "m (lab vacuum wavelength)")
        .unit("phi_lambda", "photons per unit time per unit wavelength, (2 pi c / lambda^2) |1 - u/v_g| phi")
        .unit("phi_lambda_table", "phi_lambda times 2 pi, the convention of the published horizon table")
        .note("modes/omegas/phi_lambda_by_mode list the contributing out modes, separated by ';'");
    match format {
        Format::Csv => write_csv(&ctx.target("csv"), &meta, &header, &rows),
        Format::Json => write_json(&ctx.target("json"), &meta, json!(json_rows)),
    }
}

fn corrmap(ctx: &Ctx, r: &mut Resolver) -> Result<(), CliError> {
    let (_, solver) = build_solver(r)?;
    let grid = lambda_grid(r, "200nm", "1000nm", "120")?;
    let format = r.get("format", "csv", parse_format)?;
    let map = ctx
        .pool
        .install(|| lab_correlation_map(&solver, &grid, &grid))
        .map_err(|e| CliError::compute(context(&solver, 0.0), e))?;
    let mut peak = (0.0f64, 0usize, 0usize);
    for (i, row) in map.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if i != j && c > peak.0 {
                peak = (c, i, j);
            }
        }
    }
    let meta = with_step(ctx.metadata(r), &solver)
        .derived("peak_offdiagonal", json!({ "c": peak.0, "lambda1": grid[peak.1], "lambda2": grid[peak.2] }))
        .unit("lambda", "m (lab vacuum wavelength, cell centres, geometric grid)")
        .unit("c", "dimensionless Pearson coefficient of photon numbers, matched detector bandwidths")
        .note("diagonal entries are self-coefficients; 0 where a cell has no emission");
    match format {
        Format::Json => write_json(&ctx.target("json"), &meta, json!({ "lambda": grid, "c": map })),
        Format::Csv => {
            let mut header = vec!["lambda1\\lambda2".to_string()];
            header.extend(grid.iter().map(|&l| num(l)));
            let rows: Vec<Vec<String>> = map
                .iter()
                .zip(&grid)
                .map(|(row, &l)| std::iter::once(num(l)).chain(row.iter().map(|&c| num(c))).collect())
                .collect();
            let target = ctx.target("csv");
            write_csv(&target, &meta, &header, &rows)?;
            if target != Target::Stdout {
                write_json(&target.with_extension("json"), &meta, json!({ "lambda": grid }))?;
            }
            Ok(())
        }
    }
}

fn horizon_json(h: Option<HorizonRow<f64>>) -> Value {
    match h {
        None => Value::Null,
        Some(h) => json!({
            "omega": h.omega,
            "position_in_interval": h.t,
            "partner": h.partner.to_string(),
            "lambda_nol_nm": h.lambda_nol * 1e9,
            "lambda_partner_nm": h.lambda_partner * 1e9,
            "phi_nol": h.phi_nol,
            "phi_partner": h.phi_partner,
            "phi_nol_table": h.phi_nol * TABLE_FLUX_FACTOR,
            "phi_partner_table": h.phi_partner * TABLE_FLUX_FACTOR,
            "c": h.c,
        }),
    }
}

fn table1(ctx: &Ctx, r: &mut Resolver) -> Result<(), CliError> {
    json_only(r)?;
    let args = StepArgs::resolve(r)?;
    let specs = r.get("velocities", DEFAULT_VELOCITIES, parse_list(|s| Ok((s.to_string(), parse_velocity(s)?))))?;
    let n_scan = r.get("scan_points", "600", parse_count(3))?;
    let solvers = specs
        .iter()
        .map(|(raw, v): &(String, Velocity)| Ok((raw.clone(), Solver::new(args.step(args.delta_n, *v)?))))
        .collect::<Result<Vec<_>, CliError>>()?;
    let data: Vec<Value> = ctx.pool.install(|| {
        solvers
            .par_iter()
            .map(|(raw, s)| {
                let mut o = json!({
                    "velocity": raw,
                    "u_m_per_s": s.step.u,
                    "u_over_c": s.step.u / C_LIGHT,
                    "three_u_over_c": 3.0 * s.step.u / C_LIGHT,
                });
                match table1_row(s, n_scan) {
                    Ok(row) => {
                        o["lambda_vm_nm"] = json!(row.lambda_vm * 1e9);
                        o["white_hole"] = horizon_json(row.white_hole);
                        o["black_hole"] = horizon_json(row.black_hole);
                    }
                    Err(e) => o["error"] = json!(e.to_string()),
                }
                o
            })
            .collect()
    });
    let meta = ctx
        .metadata(r)
        .unit("omega", "rad/s (front frame)")
        .unit("lambda", "nm (lab vacuum wavelength)")
        .unit("phi", "photons per unit time per unit wavelength at the noL flux peak of the interval")
        .unit("phi_table", "phi times 2 pi, the convention of the published horizon table")
        .note("each row reports the pair at the frequency of maximal noL lab flux inside the interval");
    write_json(&ctx.target("json"), &meta, json!(data))
}

fn verify(ctx: &Ctx, r: &mut Resolver) -> Result<(), CliError> {
    json_only(r)?;
    let n = r.get("configs", "100", parse_count(1))?;
    let seed = r.get("seed", "20260101", parse_u64)?;
    let reports = run_suite(n, seed);
    let data: Vec<Value> = reports
        .iter()
        .map(|o| {
            json!({
                "name": o.name,
                "max_abs_error": o.max_abs_error,
                "tolerance": o.tolerance,
                "samples": o.samples,
                "pass": o.pass,
            })
        })
        .collect();
    let meta = ctx.metadata(r).unit("max_abs_error", "relative error, dimensionless");
    write_json(&ctx.target("json"), &meta, json!(data))?;
    let failed: Vec<&str> = reports.iter().filter(|o| !o.pass).map(|o| o.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}
