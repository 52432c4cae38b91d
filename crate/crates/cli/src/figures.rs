//! Data tables for each figure id. Every figure starts from the default
//! scenario, applies its preset, then the user's overrides.
//!
//! Infinite squeezing is represented by `x = 10`.

use std::f64::consts::PI;

use squeezed_engine::dynamics::default_step;
use squeezed_engine::limits::{self, LimitInputs};
use squeezed_engine::observables::sign_change_argument;
use squeezed_engine::optimize::maximize;
use squeezed_engine::{
    affinity, build_rate_operator, evolve, flux_report, occupations, solve, useful_work,
    EngineState, Params, Squeeze,
};

use crate::commands::{emp_at, fit_footer, header, par_map, with};
use crate::config::{linspace, FitChoice, ScenarioConfig};
use crate::csvout::{format_number, Cell, Table};
use crate::error::CliError;

type Builder = fn(&ScenarioConfig) -> Result<Table, CliError>;

pub struct Figure {
    pub id: &'static str,
    pub title: &'static str,
    pub preset: &'static [(&'static str, &'static str)],
    build: Builder,
}

/// Temperatures of the dynamics panels; coherences chosen unequal because
/// `ph = pc` switches the coherence off entirely.
const FIG2: &[(&str, &str)] = &[
    ("Th", "2"),
    ("Tc", "0.5"),
    ("Tl", "0.9"),
    ("ph", "1"),
    ("pc", "0.1"),
];
const FIG3: &[(&str, &str)] = &[
    ("Th", "2"),
    ("Tc", "0.5"),
    ("Tl", "0.9"),
    ("x", "10"),
    ("pc", "1"),
];
const FIG6: &[(&str, &str)] = &[
    ("Th", "0.8"),
    ("Tl", "0.05"),
    ("xh", "0"),
    ("xc", "0"),
    ("ph", "0"),
    ("pc", "0"),
    ("variable", "x"),
];
const FIG7: &[(&str, &str)] = &[
    ("Th", "1"),
    ("Tl", "1"),
    ("xh", "0"),
    ("xc", "0"),
    ("ph", "0"),
    ("pc", "0"),
];

pub const FIGURES: &[Figure] = &[
    Figure {
        id: "fig1b",
        title: "rho12 vs xc for xh in {0, 0.5, 1, 2} and x in {0, 1}",
        preset: FIG2,
        build: fig1b,
    },
    Figure {
        id: "fig1c",
        title: "rho12 vs xh for xc in {0, 0.5, 1, 2} and x in {0, 1}",
        preset: FIG2,
        build: fig1c,
    },
    Figure {
        id: "fig1d",
        title: "rho12 vs x for several reservoir squeezings",
        preset: FIG2,
        build: fig1d,
    },
    Figure {
        id: "fig2a",
        title: "time evolution with (x = 2) and without (x = 0) squeezing",
        preset: FIG2,
        build: fig2a,
    },
    Figure {
        id: "fig2b",
        title: "steady state vs cavity squeezing x",
        preset: FIG2,
        build: fig2b,
    },
    Figure {
        id: "fig2c",
        title: "rhobb/rhoaa vs x for pc in {0.2, 0.3, 0.5, 0.7, 0.8}",
        preset: FIG2,
        build: fig2c,
    },
    Figure {
        id: "fig2d",
        title: "j/j_o vs ph at pc = 1 for x in {0, pi/6, pi/2, 2pi/3, 5pi/6, pi, 3pi/2}",
        preset: &[("Th", "2"), ("Tc", "0.5"), ("Tl", "0.9"), ("pc", "1")],
        build: fig2d,
    },
    Figure {
        id: "fig3",
        title: "j/j_o vs ph at x = 10, pc = 1, with the strong-squeezing closed form",
        preset: FIG3,
        build: fig3,
    },
    Figure {
        id: "fig3inset",
        title: "j/j_o vs ph at x = 10 against the strong-squeezing ratio law",
        preset: &[
            ("Th", "1"),
            ("Tc", "0.5"),
            ("Tl", "10"),
            ("x", "10"),
            ("pc", "1"),
            ("tau", "0"),
        ],
        build: fig3inset,
    },
    Figure {
        id: "fig3a",
        title: "j/j_o vs ph near equilibrium for several x",
        preset: &[("Th", "1"), ("Tc", "0.9"), ("Tl", "10"), ("pc", "1")],
        build: fig3a,
    },
    Figure {
        id: "fig3b",
        title: "optimal ph vs pc at x = 10 under strong bias, with both closed forms",
        preset: &[
            ("Th", "10000"),
            ("Tc", "0.5"),
            ("Tl", "0.9"),
            ("x", "10"),
            ("tau", "0"),
        ],
        build: fig3b,
    },
    Figure {
        id: "fig3c",
        title:
            "optimal ph vs x far from (Th = 1e4) and near (Th = 1, Tc = 0.9, Tl = 10) equilibrium",
        preset: &[
            ("Th", "10000"),
            ("Tc", "0.5"),
            ("Tl", "0.9"),
            ("pc", "0.5"),
            ("tau", "0"),
        ],
        build: fig3c,
    },
    Figure {
        id: "fig3d",
        title: "zeta(x)/zeta(0) for Tl in {0.5, 1, 2, 5}",
        preset: &[("Th", "2"), ("Tc", "0.1"), ("xh", "0"), ("xc", "0")],
        build: fig3d,
    },
    Figure {
        id: "fig4a",
        title: "j/j_o0 vs xc for x in {0, 1} and xh in {0, 0.5, 1, 2}",
        preset: FIG2,
        build: fig4a,
    },
    Figure {
        id: "fig4b",
        title: "j/j_o0 vs xh for x in {0, 1} and xc in {0, 0.5, 1, 2}",
        preset: FIG2,
        build: fig4b,
    },
    Figure {
        id: "fig4c",
        title: "j/j_o0 vs x for Tc in {0.5, 0.1} and three reservoir squeezings",
        preset: FIG2,
        build: fig4c,
    },
    Figure {
        id: "fig4d",
        title: "affinity ln(zeta) vs x for {xh, xc} = {1, 0.1} and {0.1, 1}",
        preset: FIG2,
        build: fig4d,
    },
    Figure {
        id: "fig5a",
        title: "W/W(x = 0) vs x for Tl in {0.5, 1, 2}",
        preset: &[("Th", "1"), ("Tc", "0.1"), ("xh", "0"), ("xc", "0")],
        build: fig5a,
    },
    Figure {
        id: "fig5b",
        title: "W vs x for Tc in {1.2, 1.5, 1.8}",
        preset: &[("Th", "2"), ("Tl", "1"), ("xh", "0"), ("xc", "0")],
        build: fig5b,
    },
    Figure {
        id: "fig5c",
        title: "EMP over Ea vs ph for x in {0, 1, 2}",
        preset: &[
            ("Th", "2"),
            ("Tc", "0.5"),
            ("Tl", "0.9"),
            ("pc", "0.1"),
            ("variable", "Ea"),
        ],
        build: fig5c,
    },
    Figure {
        id: "fig5d",
        title: "EMP over Ea vs x for Tl in {0.5, 0.9, 2}",
        preset: &[
            ("Th", "2"),
            ("Tc", "0.5"),
            ("ph", "1"),
            ("pc", "0.1"),
            ("variable", "Ea"),
        ],
        build: fig5d,
    },
    Figure {
        id: "fig6a",
        title: "EMP over x vs ph for pc in {0.1, 0.5, 0.9}",
        preset: &[("Th", "2"), ("Tc", "0.5"), ("Tl", "0.9"), ("variable", "x")],
        build: fig6a,
    },
    Figure {
        id: "fig6b",
        title: "EMP over x vs etaC, r = 0.7, g = 1",
        preset: FIG6,
        build: fig_emp_refs,
    },
    Figure {
        id: "fig6c",
        title: "EMP over x vs etaC, r = 0.1, g = 3",
        preset: &[
            ("Th", "0.8"),
            ("Tl", "0.05"),
            ("xh", "0"),
            ("xc", "0"),
            ("ph", "0"),
            ("pc", "0"),
            ("variable", "x"),
            ("r", "0.1"),
            ("g", "3"),
        ],
        build: fig_emp_refs,
    },
    Figure {
        id: "fig6d",
        title: "EMP over Ea vs etaC at x = 1, xc = xh = 0",
        preset: &[
            ("Th", "0.8"),
            ("Tl", "0.8"),
            ("x", "1"),
            ("xh", "0"),
            ("xc", "0"),
            ("ph", "0"),
            ("pc", "0"),
            ("variable", "Ea"),
        ],
        build: fig_emp_refs,
    },
    Figure {
        id: "fig7a",
        title: "EMP over xc vs etaC for x in {10, 1, 0}",
        preset: FIG7,
        build: fig7a,
    },
    Figure {
        id: "fig7b",
        title: "EMP over xh vs etaC for x in {10, 1, 0}",
        preset: FIG7,
        build: fig7b,
    },
    Figure {
        id: "fig7c",
        title: "EMP over xc and plain efficiency W/Qh vs etaC at x = 1",
        preset: FIG7,
        build: fig7c,
    },
    Figure {
        id: "fig7d",
        title: "EMP over Ea vs etaC at x in {1.5, 10} with quadratic and sech fits",
        preset: FIG7,
        build: fig7d,
    },
    Figure {
        id: "fig8",
        title: "EMP over Ea and the logarithmic estimate for three parameter sets",
        preset: &[("ph", "0"), ("pc", "0"), ("variable", "Ea")],
        build: fig8,
    },
];

pub fn lookup(id: &str) -> Option<&'static Figure> {
    FIGURES.iter().find(|f| f.id == id)
}

pub fn ids() -> Vec<&'static str> {
    FIGURES.iter().map(|f| f.id).collect()
}

impl Figure {
    pub fn config(&self, overrides: &[(String, String)]) -> Result<ScenarioConfig, CliError> {
        let mut cfg = ScenarioConfig::default();
        for (k, v) in self.preset {
            cfg.set(k, v)?;
        }
        cfg.apply(overrides)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn run(&self, overrides: &[(String, String)]) -> Result<Table, CliError> {
        let cfg = self.config(overrides)?;
        let mut table = (self.build)(&cfg)?;
        table.meta.insert(0, self.title.to_string());
        table
            .meta
            .insert(1, "x = 10 stands in for infinite squeezing".to_string());
        if cfg.params.tau == 0.0 {
            table.meta.insert(
                2,
                format!(
                    "tau = 0: ph is capped at {} (the steady state is not unique at ph = pc = 1)",
                    format_number(DARK_CEILING)
                ),
            );
        }
        header(&mut table, &format!("figure {}", self.id), &cfg);
        Ok(table)
    }
}

/// Evaluates `f` at every axis value (in parallel) and tabulates the results.
fn grid_table<F>(axis: &str, xs: &[f64], columns: Vec<String>, f: F) -> Result<Table, CliError>
where
    F: Fn(f64) -> Result<Vec<f64>, CliError> + Sync,
{
    let rows = par_map(xs, |&x| f(x))?;
    let mut table = Table::new(std::iter::once(axis.to_string()).chain(columns));
    for (x, row) in xs.iter().zip(rows) {
        table.push(std::iter::once(*x).chain(row).map(Cell::Num).collect());
    }
    Ok(table)
}

/// Cartesian product of two curve families, with column labels.
fn product(prefix: &str, a: (&str, &[f64]), b: (&str, &[f64])) -> (Vec<(f64, f64)>, Vec<String>) {
    let mut pairs = Vec::new();
    let mut names = Vec::new();
    for &u in a.1 {
        for &v in b.1 {
            pairs.push((u, v));
            names.push(format!("{prefix}_{}{u}_{}{v}", a.0, b.0));
        }
    }
    (pairs, names)
}

fn rho12(p: &Params, s: &Squeeze) -> Result<f64, CliError> {
    Ok(solve(p, s)?.state.rho12)
}

fn fig1b(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let (pairs, names) = product("rho12", ("x", &[0.0, 1.0]), ("xh", &[0.0, 0.5, 1.0, 2.0]));
    grid_table("xc", &linspace(0.0, 4.0, 81), names, |xc| {
        pairs
            .iter()
            .map(|&(x, xh)| {
                let (p, s) = with(cfg, &[("x", x), ("xh", xh), ("xc", xc)]);
                rho12(&p, &s)
            })
            .collect()
    })
}

fn fig1c(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let (pairs, names) = product("rho12", ("x", &[0.0, 1.0]), ("xc", &[0.0, 0.5, 1.0, 2.0]));
    grid_table("xh", &linspace(0.0, 4.0, 81), names, |xh| {
        pairs
            .iter()
            .map(|&(x, xc)| {
                let (p, s) = with(cfg, &[("x", x), ("xh", xh), ("xc", xc)]);
                rho12(&p, &s)
            })
            .collect()
    })
}

fn fig1d(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let pairs = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (1.0, 1.0)];
    let names = pairs
        .iter()
        .map(|(h, c)| format!("rho12_xh{h}_xc{c}"))
        .collect();
    grid_table("x", &linspace(0.0, 4.0, 81), names, |x| {
        pairs
            .iter()
            .map(|&(xh, xc)| {
                let (p, s) = with(cfg, &[("x", x), ("xh", xh), ("xc", xc)]);
                rho12(&p, &s)
            })
            .collect()
    })
}

fn fig2a(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let xs = [2.0, 0.0];
    let setups = xs
        .iter()
        .map(|&x| {
            let (p, s) = with(cfg, &[("x", x)]);
            let occ = occupations(&p, &s)?;
            Ok((p, occ, build_rate_operator(&occ, &p, &s)))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let t_final = cfg.t_final.unwrap_or(200.0 / cfg.params.r);
    let dt = cfg.dt.unwrap_or_else(|| {
        setups
            .iter()
            .map(|(p, occ, _)| default_step(p, occ))
            .fold(f64::INFINITY, f64::min)
    });
    if cfg.stride == 0 || !(dt > 0.0 && t_final > dt) {
        return Err(CliError::Usage(format!(
            "need stride >= 1 and 0 < dt < t_final, got dt = {dt}, t_final = {t_final}"
        )));
    }
    let trajs = par_map(&setups, |(_, _, op)| {
        Ok(evolve(EngineState::ground(), op, t_final, dt, cfg.stride)?)
    })?;
    let mut columns = vec!["t".to_string()];
    for x in xs {
        columns.extend(
            ["rho11", "rho22", "rhoaa", "rhobb", "rho12", "trace"].map(|c| format!("{c}_x{x}")),
        );
    }
    let mut table = Table::new(columns);
    table
        .meta_value("t_final", t_final)
        .meta_value("dt", dt)
        .meta(format!("stride = {}", cfg.stride));
    for (i, t) in trajs[0].times.iter().enumerate() {
        let mut row = vec![Cell::Num(*t)];
        for tr in &trajs {
            let s = tr.states[i];
            row.extend([s.rho11, s.rho22, s.rhoaa, s.rhobb, s.rho12, s.trace()].map(Cell::Num));
        }
        table.push(row);
    }
    Ok(table)
}

fn fig2b(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let names = ["rho11", "rho22", "rhoaa", "rhobb", "rho12"]
        .map(String::from)
        .to_vec();
    grid_table("x", &linspace(0.0, 10.0, 101), names, |x| {
        let (p, s) = with(cfg, &[("x", x)]);
        let st = solve(&p, &s)?.state;
        Ok(vec![st.rho11, st.rho22, st.rhoaa, st.rhobb, st.rho12])
    })
}

fn fig2c(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let pcs = [0.2, 0.3, 0.5, 0.7, 0.8];
    let names = pcs
        .iter()
        .map(|pc| format!("rhobb_over_rhoaa_pc{pc}"))
        .collect();
    grid_table("x", &linspace(0.0, 10.0, 101), names, |x| {
        pcs.iter()
            .map(|&pc| {
                let (p, s) = with(cfg, &[("x", x), ("pc", pc)]);
                let st = solve(&p, &s)?.state;
                Ok(st.rhobb / st.rhoaa)
            })
            .collect()
    })
}

fn fig2d(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let xs = [
        (0.0, "0"),
        (PI / 6.0, "pi6"),
        (PI / 2.0, "pi2"),
        (2.0 * PI / 3.0, "2pi3"),
        (5.0 * PI / 6.0, "5pi6"),
        (PI, "pi"),
        (1.5 * PI, "3pi2"),
    ];
    let names = xs.iter().map(|(_, l)| format!("j_over_jo_x{l}")).collect();
    grid_table("ph", &ph_axis(cfg, 101), names, |ph| {
        xs.iter()
            .map(|&(x, _)| {
                let (p, s) = with(cfg, &[("x", x), ("ph", ph)]);
                Ok(flux_report(&p, &s)?.ratio_jo)
            })
            .collect()
    })
}

fn fig3(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let names = ["j_over_jo", "closed_form", "j_over_jo_x0"]
        .map(String::from)
        .to_vec();
    grid_table("ph", &ph_axis(cfg, 101), names, |ph| {
        let (p, s) = with(cfg, &[("ph", ph)]);
        let op = solve(&p, &s)?;
        let inp = LimitInputs::new(&op.occ, &p, &s);
        let (p0, s0) = with(cfg, &[("ph", ph), ("x", 0.0)]);
        Ok(vec![
            flux_report(&p, &s)?.ratio_jo,
            limits::flux_xinf_pc1(&inp) / limits::flux_xinf_jo(&inp),
            flux_report(&p0, &s0)?.ratio_jo,
        ])
    })
}

/// Largest `ph` used when `ph = pc = 1` with `tau = 0` would make the
/// stationary state non-unique.
const DARK_CEILING: f64 = 1.0 - 1e-9;

fn ph_ceiling(cfg: &ScenarioConfig) -> f64 {
    if cfg.params.tau == 0.0 {
        DARK_CEILING
    } else {
        1.0
    }
}

/// `ph` grid on `[0, 1]`, with the last node pulled below one where needed.
fn ph_axis(cfg: &ScenarioConfig, n: usize) -> Vec<f64> {
    let mut axis = linspace(0.0, 1.0, n);
    if let Some(last) = axis.last_mut() {
        *last = ph_ceiling(cfg);
    }
    axis
}

fn fig3inset(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let names = ["j_over_jo", "ratio_law"].map(String::from).to_vec();
    let mut t = grid_table("ph", &ph_axis(cfg, 21), names, |ph| {
        let (p, s) = with(cfg, &[("ph", ph)]);
        let occ = occupations(&p, &s)?;
        Ok(vec![
            flux_report(&p, &s)?.ratio_jo,
            limits::flux_ratio_xinf(occ.hot / occ.cold, occ.cold, ph),
        ])
    })?;
    let col = |i: usize| t.rows.iter().map(|r| num(&r[i])).collect::<Vec<_>>();
    t.footer = fit_footer(FitChoice::Linear, cfg.squeeze.x, &col(0), &col(1), "")?;
    Ok(t)
}

fn num(c: &Cell) -> f64 {
    match c {
        Cell::Num(v) => *v,
        _ => f64::NAN,
    }
}

fn fig3a(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let xs = [0.0, 0.5, 1.0, 2.0, 10.0];
    let names = xs.iter().map(|x| format!("j_over_jo_x{x}")).collect();
    grid_table("ph", &ph_axis(cfg, 101), names, |ph| {
        xs.iter()
            .map(|&x| {
                let (p, s) = with(cfg, &[("x", x), ("ph", ph)]);
                Ok(flux_report(&p, &s)?.ratio_jo)
            })
            .collect()
    })
}

/// Hot coherence maximizing the flux, by grid scan and golden section.
pub fn optimal_ph(p: &Params, s: &Squeeze) -> Result<f64, CliError> {
    let top = if p.tau == 0.0 { DARK_CEILING } else { 1.0 };
    let best = maximize(
        |ph| {
            let mut s = *s;
            s.ph = ph;
            solve(p, &s).map(|op| op.flux)
        },
        0.0,
        top,
        201,
        1e-10,
    )?;
    Ok(best.argmax)
}

fn fig3b(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let names = ["ph_star", "biased_closed_form", "cold_limit"]
        .map(String::from)
        .to_vec();
    grid_table("pc", &linspace(0.05, 1.0, 20), names, |pc| {
        let (p, s) = with(cfg, &[("pc", pc)]);
        let occ = occupations(&p, &s)?;
        Ok(vec![
            optimal_ph(&p, &s)?,
            limits::ph_star_biased(occ.cold, pc)?,
            limits::ph_star_cold_limit(pc)?,
        ])
    })
}

fn fig3c(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let names = ["ph_star_far", "biased_closed_form", "ph_star_near"]
        .map(String::from)
        .to_vec();
    grid_table("x", &linspace(0.0, 10.0, 51), names, |x| {
        let (p, s) = with(cfg, &[("x", x)]);
        let occ = occupations(&p, &s)?;
        let (pn, sn) = with(cfg, &[("x", x), ("Th", 1.0), ("Tc", 0.9), ("Tl", 10.0)]);
        Ok(vec![
            optimal_ph(&p, &s)?,
            limits::ph_star_biased(occ.cold, s.pc)?,
            optimal_ph(&pn, &sn)?,
        ])
    })
}

fn fig3d(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let tls = [0.5, 1.0, 2.0, 5.0];
    let names = tls.iter().map(|tl| format!("zeta_ratio_Tl{tl}")).collect();
    let zeta = |x: f64, tl: f64| -> Result<f64, CliError> {
        let (p, s) = with(cfg, &[("x", x), ("Tl", tl)]);
        Ok(affinity(&occupations(&p, &s)?).zeta)
    };
    grid_table("x", &linspace(0.0, 3.0, 61), names, |x| {
        tls.iter()
            .map(|&tl| Ok(zeta(x, tl)? / zeta(0.0, tl)?))
            .collect()
    })
}

fn flux_gain(p: &Params, s: &Squeeze) -> Result<f64, CliError> {
    Ok(flux_report(p, s)?.ratio_j00)
}

fn fig4a(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let (pairs, names) = product(
        "j_over_jo0",
        ("x", &[0.0, 1.0]),
        ("xh", &[0.0, 0.5, 1.0, 2.0]),
    );
    grid_table("xc", &linspace(0.0, 3.0, 61), names, |xc| {
        pairs
            .iter()
            .map(|&(x, xh)| {
                let (p, s) = with(cfg, &[("x", x), ("xh", xh), ("xc", xc)]);
                flux_gain(&p, &s)
            })
            .collect()
    })
}

fn fig4b(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let (pairs, names) = product(
        "j_over_jo0",
        ("x", &[0.0, 1.0]),
        ("xc", &[0.0, 0.5, 1.0, 2.0]),
    );
    grid_table("xh", &linspace(0.0, 3.0, 61), names, |xh| {
        pairs
            .iter()
            .map(|&(x, xc)| {
                let (p, s) = with(cfg, &[("x", x), ("xh", xh), ("xc", xc)]);
                flux_gain(&p, &s)
            })
            .collect()
    })
}

fn fig4c(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let mut curves = Vec::new();
    let mut names = Vec::new();
    for tc in [0.5, 0.1] {
        for (xh, xc) in [(0.5, 0.1), (0.1, 0.5), (0.0, 0.0)] {
            curves.push((tc, xh, xc));
            names.push(format!("j_over_jo0_Tc{tc}_xh{xh}_xc{xc}"));
        }
    }
    grid_table("x", &linspace(0.0, 3.0, 61), names, |x| {
        curves
            .iter()
            .map(|&(tc, xh, xc)| {
                let (p, s) = with(cfg, &[("x", x), ("Tc", tc), ("xh", xh), ("xc", xc)]);
                flux_gain(&p, &s)
            })
            .collect()
    })
}

fn fig4d(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let pairs = [(1.0, 0.1), (0.1, 1.0)];
    let names = pairs
        .iter()
        .map(|(h, c)| format!("affinity_xh{h}_xc{c}"))
        .collect();
    let mut t = grid_table("x", &linspace(0.0, 3.0, 61), names, |x| {
        pairs
            .iter()
            .map(|&(xh, xc)| {
                let (p, s) = with(cfg, &[("x", x), ("xh", xh), ("xc", xc)]);
                Ok(affinity(&occupations(&p, &s)?).log())
            })
            .collect()
    })?;
    for (xh, xc) in pairs {
        let (p, s) = with(cfg, &[("xh", xh), ("xc", xc)]);
        let occ = occupations(&p, &s)?;
        let arg = sign_change_argument(&occ).unwrap_or(f64::NAN);
        // a real crossing needs a positive argument of at least one
        let xstar = if arg >= 1.0 {
            0.5 * arg.acosh()
        } else {
            f64::NAN
        };
        t.meta(format!(
            "xh = {xh}, xc = {xc}: arccosh argument = {}, x* = {}",
            format_number(arg),
            format_number(xstar)
        ));
    }
    Ok(t)
}

fn work(p: &Params, s: &Squeeze) -> Result<f64, CliError> {
    let occ = occupations(p, s)?;
    Ok(useful_work(p, &occ, 0.0)?.w)
}

fn fig5a(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let tls = [0.5, 1.0, 2.0];
    let names = tls.iter().map(|tl| format!("W_over_W0_Tl{tl}")).collect();
    let mut t = grid_table("x", &linspace(0.0, 3.0, 61), names, |x| {
        tls.iter()
            .map(|&tl| {
                let (p, s) = with(cfg, &[("x", x), ("Tl", tl)]);
                let (p0, s0) = with(cfg, &[("x", 0.0), ("Tl", tl)]);
                Ok(work(&p, &s)? / work(&p0, &s0)?)
            })
            .collect()
    })?;
    for tl in tls {
        let (p0, s0) = with(cfg, &[("x", 0.0), ("Tl", tl)]);
        t.meta(format!(
            "Tl = {tl}: W0 = {}",
            format_number(work(&p0, &s0)?)
        ));
    }
    Ok(t)
}

fn fig5b(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let tcs = [1.2, 1.5, 1.8];
    let names = tcs.iter().map(|tc| format!("W_Tc{tc}")).collect();
    grid_table("x", &linspace(0.0, 3.0, 61), names, |x| {
        tcs.iter()
            .map(|&tc| {
                let (p, s) = with(cfg, &[("x", x), ("Tc", tc)]);
                work(&p, &s)
            })
            .collect()
    })
}

/// EMP at the configured temperatures, not on an etaC grid.
fn emp_here(cfg: &ScenarioConfig, p: &Params, s: &Squeeze) -> Result<f64, CliError> {
    Ok(emp_at(cfg, p, s, p.carnot())?.emp)
}

fn fig5c(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let xs = [0.0, 1.0, 2.0];
    let names = xs.iter().map(|x| format!("emp_x{x}")).collect();
    grid_table("ph", &ph_axis(cfg, 21), names, |ph| {
        xs.iter()
            .map(|&x| {
                let (p, s) = with(cfg, &[("x", x), ("ph", ph)]);
                emp_here(cfg, &p, &s)
            })
            .collect()
    })
}

fn fig5d(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let tls = [0.5, 0.9, 2.0];
    let names = tls.iter().map(|tl| format!("emp_Tl{tl}")).collect();
    grid_table("x", &linspace(0.0, 3.0, 31), names, |x| {
        tls.iter()
            .map(|&tl| {
                let (p, s) = with(cfg, &[("x", x), ("Tl", tl)]);
                emp_here(cfg, &p, &s)
            })
            .collect()
    })
}

fn fig6a(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let pcs = [0.1, 0.5, 0.9];
    let mut names: Vec<String> = pcs.iter().map(|pc| format!("emp_pc{pc}")).collect();
    names.extend(["eta_ca", "eta_upper"].map(String::from));
    grid_table("ph", &ph_axis(cfg, 21), names, |ph| {
        let mut row = Vec::new();
        let mut refs = (0.0, 0.0);
        for &pc in &pcs {
            let (p, s) = with(cfg, &[("ph", ph), ("pc", pc)]);
            let r = emp_at(cfg, &p, &s, p.carnot())?;
            refs = (r.refs.eta_ca, r.refs.eta_upper);
            row.push(r.emp);
        }
        row.extend([refs.0, refs.1]);
        Ok(row)
    })
}

/// EMP against etaC with the three reference efficiencies.
fn fig_emp_refs(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let grid = cfg.etac_grid()?;
    let names = ["emp", "eta_ca", "eta_upper", "eta_L", "argmax", "boundary"]
        .map(String::from)
        .to_vec();
    let mut t = grid_table("etaC", &grid, names, |e| {
        let r = emp_at(cfg, &cfg.params, &cfg.squeeze, e)?;
        Ok(vec![
            r.emp,
            r.refs.eta_ca,
            r.refs.eta_upper,
            r.refs.eta_l,
            r.argmax,
            f64::from(u8::from(r.boundary)),
        ])
    })?;
    t.meta(format!("variable = {}", cfg.variable));
    Ok(t)
}

/// EMP curves against etaC for several values of one parameter, each with
/// its fit footer.
fn emp_curves(
    cfg: &ScenarioConfig,
    variable: &str,
    key: &str,
    values: &[f64],
    fits: &[FitChoice],
) -> Result<Table, CliError> {
    let mut cfg = cfg.clone();
    cfg.set("variable", variable)?;
    let grid = cfg.etac_grid()?;
    let names = values.iter().map(|v| format!("emp_{key}{v}")).collect();
    let cfg = &cfg;
    let mut t = grid_table("etaC", &grid, names, |e| {
        values
            .iter()
            .map(|&v| {
                let (p, s) = with(cfg, &[(key, v)]);
                Ok(emp_at(cfg, &p, &s, e)?.emp)
            })
            .collect()
    })?;
    t.meta(format!("variable = {variable}"));
    for (i, &v) in values.iter().enumerate() {
        let ys: Vec<f64> = t.rows.iter().map(|r| num(&r[i + 1])).collect();
        let (p, s) = with(cfg, &[(key, v)]);
        let occ = occupations(&p, &s)?;
        let wd = useful_work(&p, &occ, 0.0)?;
        let label = format!("{key} = {v}:");
        t.footer(format!(
            "{label} Th*Wdiss/Qh = {}",
            format_number(p.th * wd.wdiss / wd.qh)
        ));
        t.footer(format!(
            "{label} (Ea-Eb-Th*Wdiss)/Qh = {}",
            format_number((p.ea - p.eb - p.th * wd.wdiss) / wd.qh)
        ));
        let x = s.x;
        for &fit in fits {
            let lines = fit_footer(fit, x, &grid, &ys, &label)?;
            t.footer.extend(lines);
        }
    }
    Ok(t)
}

fn fig7a(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    emp_curves(cfg, "xc", "x", &[10.0, 1.0, 0.0], &[FitChoice::Linear])
}

fn fig7b(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    emp_curves(cfg, "xh", "x", &[10.0, 1.0, 0.0], &[FitChoice::Linear])
}

fn fig7c(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let mut cfg = cfg.clone();
    cfg.set("variable", "xc")?;
    cfg.set("x", "1")?;
    let grid = cfg.etac_grid()?;
    let cfg = &cfg;
    grid_table("etaC", &grid, vec!["emp_xc".into(), "eta".into()], |e| {
        let (p, s) = with(cfg, &[("Tc", cfg.params.th * (1.0 - e))]);
        let occ = occupations(&p, &s)?;
        Ok(vec![
            emp_at(cfg, &cfg.params, &cfg.squeeze, e)?.emp,
            useful_work(&p, &occ, 0.0)?.eta,
        ])
    })
}

fn fig7d(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    emp_curves(
        cfg,
        "Ea",
        "x",
        &[1.5, 10.0],
        &[FitChoice::Quadratic, FitChoice::Sech],
    )
}

fn fig8(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let sets = fig8_sets();
    let grid = cfg.etac_grid()?;
    let mut names = Vec::new();
    for k in 1..=sets.len() {
        names.extend([format!("emp_set{k}"), format!("eta_L_set{k}")]);
    }
    let mut t = grid_table("etaC", &grid, names, |e| {
        let mut row = Vec::new();
        for set in &sets {
            let (p, s) = with(cfg, set);
            let r = emp_at(cfg, &p, &s, e)?;
            row.extend([r.emp, r.refs.eta_l]);
        }
        Ok(row)
    })?;
    for (k, set) in sets.iter().enumerate() {
        let desc: Vec<String> = set
            .iter()
            .map(|(n, v)| format!("{n} = {}", format_number(*v)))
            .collect();
        t.meta(format!("set{}: {}", k + 1, desc.join(", ")));
    }
    Ok(t)
}

/// The three parameter sets of the logarithmic-estimate comparison, with the
/// cavity at the hot temperature.
pub fn fig8_sets() -> Vec<Vec<(&'static str, f64)>> {
    [(3.0, 0.1, 0.6), (4.0, 0.2, 0.5), (6.0, 0.2, 2.0 * PI)]
        .into_iter()
        .map(|(th, xr, x)| vec![("Th", th), ("Tl", th), ("xh", xr), ("xc", xr), ("x", x)])
        .collect()
}
