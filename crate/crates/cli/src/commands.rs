//! The `steady`, `emp` and `sweep` subcommands, plus helpers shared with the
//! figure builders.

use rayon::prelude::*;
use squeezed_engine::dynamics::default_step;
use squeezed_engine::emp::emp_row;
use squeezed_engine::{
    affinity, build_rate_operator, evolve, fit_linear, fit_quadratic, fit_sech_form, flux_report,
    occupations, solve, steady_state, useful_work, Emp, EngineState, Fit, OptimizationSpec, Params,
    Squeeze,
};

use crate::config::{linspace, real_slot, FitChoice, ScenarioConfig};
use crate::csvout::{format_number, Cell, Table, VERSION};
use crate::error::CliError;

/// Maps `f` over `items` on the current rayon pool, keeping input order.
/// When several items fail, the first failure in input order is reported.
pub fn par_map<I, O, F>(items: &[I], f: F) -> Result<Vec<O>, CliError>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> Result<O, CliError> + Sync,
{
    let results: Vec<Result<O, CliError>> = items.par_iter().map(&f).collect();
    results.into_iter().collect()
}

/// Copies of the configured parameters with some keys replaced.
pub fn with(cfg: &ScenarioConfig, changes: &[(&str, f64)]) -> (Params, Squeeze) {
    let (mut p, mut s) = (cfg.params, cfg.squeeze);
    for &(k, v) in changes {
        *real_slot(&mut p, &mut s, k)
            .unwrap_or_else(|| panic!("`{k}` is not a physical parameter")) = v;
    }
    (p, s)
}

/// Leading metadata lines: tool version, command and every fixed parameter.
pub fn header(table: &mut Table, command: &str, cfg: &ScenarioConfig) {
    let mut meta = vec![format!("sqengine {VERSION}"), format!("command: {command}")];
    meta.extend(
        cfg.physical_entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {}", format_number(v))),
    );
    meta.append(&mut table.meta);
    table.meta = meta;
}

pub fn emp_spec(cfg: &ScenarioConfig, params: &Params) -> OptimizationSpec<f64> {
    let base = OptimizationSpec::new(cfg.variable, params);
    OptimizationSpec {
        lower: cfg.lower.unwrap_or(base.lower),
        upper: cfg.upper.unwrap_or(base.upper),
        grid_points: cfg.grid_points,
        refine_tol: cfg.refine_tol,
        ..base
    }
}

pub fn emp_at(cfg: &ScenarioConfig, p: &Params, s: &Squeeze, eta_c: f64) -> Result<Emp, CliError> {
    Ok(emp_row(p, s, &emp_spec(cfg, p), eta_c, cfg.eta_l_form)?)
}

fn state_cells(s: &EngineState<f64>) -> Vec<Cell> {
    [s.rho11, s.rho22, s.rhoaa, s.rhobb, s.rho12, s.trace()]
        .map(Cell::Num)
        .to_vec()
}

pub fn steady(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let (p, sq) = (&cfg.params, &cfg.squeeze);
    let occ = occupations(p, sq)?;
    let op = build_rate_operator(&occ, p, sq);
    let ss = steady_state(&op)?;
    let mut table = Table::new(["t", "rho11", "rho22", "rhoaa", "rhobb", "rho12", "trace"]);
    if !cfg.steady_only {
        if cfg.stride == 0 {
            return Err(CliError::Usage("stride must be >= 1".into()));
        }
        let t_final = cfg.t_final.unwrap_or(200.0 / p.r);
        let dt = cfg.dt.unwrap_or_else(|| default_step(p, &occ));
        if !(dt > 0.0 && t_final > dt) {
            return Err(CliError::Usage(format!(
                "need 0 < dt < t_final, got dt = {dt}, t_final = {t_final}"
            )));
        }
        let traj = evolve(EngineState::ground(), &op, t_final, dt, cfg.stride)?;
        table
            .meta_value("t_final", t_final)
            .meta_value("dt", dt)
            .meta(format!("stride = {}", cfg.stride));
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let mut row = vec![Cell::Num(*t)];
            row.extend(state_cells(s));
            table.push(row);
        }
    }
    table.meta("initial state: rho11 = 1; last row (t = steady) is the linear-solve steady state");
    let mut row = vec![Cell::Text("steady".into())];
    row.extend(state_cells(&ss));
    table.push(row);
    header(&mut table, "steady", cfg);
    Ok(table)
}

/// Fit footer lines for `(eta_c, emp)` data.
pub fn fit_footer(
    fit: FitChoice,
    x: f64,
    etas: &[f64],
    emps: &[f64],
    label: &str,
) -> Result<Vec<String>, CliError> {
    let (f, names): (Fit, &[&str]) = match fit {
        FitChoice::None => return Ok(vec![]),
        FitChoice::Linear => (fit_linear(etas, emps)?, &["m", "c"]),
        FitChoice::Quadratic => (fit_quadratic(etas, emps)?, &["c", "a5", "a6"]),
        FitChoice::Sech => (fit_sech_form(etas, emps, x)?, &["a1", "a2", "a3", "a4"]),
    };
    let prefix = if label.is_empty() {
        String::new()
    } else {
        format!("{label} ")
    };
    let mut lines = vec![format!("{prefix}fit = {}", f.model)];
    lines.extend(
        names
            .iter()
            .zip(&f.coefficients)
            .map(|(n, v)| format!("{prefix}{n} = {}", format_number(*v))),
    );
    lines.push(format!(
        "{prefix}residual_rms = {}",
        format_number(f.residual_rms)
    ));
    if fit == FitChoice::Sech {
        lines.push(format!("{prefix}converged = {}", u8::from(f.converged)));
    }
    Ok(lines)
}

pub fn emp(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let grid = cfg.etac_grid()?;
    emp_spec(cfg, &cfg.params).validate()?;
    let rows = par_map(&grid, |&e| emp_at(cfg, &cfg.params, &cfg.squeeze, e))?;
    let mut table = Table::new([
        "etaC",
        "argmax",
        "Pmax",
        "emp",
        "eta_ca",
        "eta_upper",
        "eta_L",
        "boundary",
    ]);
    let spec = emp_spec(cfg, &cfg.params);
    table
        .meta(format!("variable = {}", spec.variable))
        .meta_value("lower", spec.lower)
        .meta_value("upper", spec.upper)
        .meta(format!("grid_points = {}", spec.grid_points))
        .meta_value("refine_tol", spec.refine_tol)
        .meta("Tc is set to Th (1 - etaC) on every row");
    for r in &rows {
        table.push(vec![
            r.eta_c.into(),
            r.argmax.into(),
            r.p_max.into(),
            r.emp.into(),
            r.refs.eta_ca.into(),
            r.refs.eta_upper.into(),
            r.refs.eta_l.into(),
            r.boundary.into(),
        ]);
    }
    let emps: Vec<f64> = rows.iter().map(|r| r.emp).collect();
    table.footer = fit_footer(cfg.fit, cfg.squeeze.x, &grid, &emps, "")?;
    header(&mut table, "emp", cfg);
    Ok(table)
}

pub fn sweep(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    if cfg.points == 0 {
        return Err(CliError::Usage("empty sweep (points = 0)".into()));
    }
    let key = cfg.sweep.as_str();
    let values = linspace(cfg.from, cfg.to, cfg.points);
    let rows = par_map(&values, |&v| {
        let (p, s) = with(cfg, &[(key, v)]);
        p.validate()?;
        s.validate()?;
        let op = solve(&p, &s)?;
        let fr = flux_report(&p, &s)?;
        let work = useful_work(&p, &op.occ, op.flux)?;
        let st = op.state;
        Ok(vec![
            v,
            st.rho11,
            st.rho22,
            st.rhoaa,
            st.rhobb,
            st.rho12,
            fr.j,
            fr.j_o,
            fr.j_o0,
            affinity(&op.occ).log(),
            work.w,
            work.eta,
            work.power,
        ])
    })?;
    let mut table = Table::new([
        key, "rho11", "rho22", "rhoaa", "rhobb", "rho12", "j", "j_o", "j_o0", "affinity", "W",
        "eta", "power",
    ]);
    table.meta(format!(
        "sweep = {key} from {} to {} ({} points)",
        format_number(cfg.from),
        format_number(cfg.to),
        cfg.points
    ));
    for r in rows {
        table.push(r.into_iter().map(Cell::Num).collect());
    }
    header(&mut table, "sweep", cfg);
    Ok(table)
}
