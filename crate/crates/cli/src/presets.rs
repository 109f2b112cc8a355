//! Canned parameter studies behind the `repro` subcommand.

use crate::output::{model_comments, Cell, Table};
use crate::Failure;
use clap::ValueEnum;
use optomech::network::{build_star_model, pairwise_entanglement_map};
use optomech::optimize::{
    maximize_en, sweep, BoundedParam, Objective, OptimizationSpec, ParamAxis, SweepSpec,
};
use optomech::steadystate::{steady_state, Regime};
use optomech::{
    CavityParams, FrequencyConfig, MechanicalMode, OpoParams, SystemModel, C64,
};
use std::f64::consts::PI;

/// Bundled study, named after the figure it regenerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig2b,
    Fig2c,
    Fig2e,
    Fig3,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig4d,
    Fig5,
    Fig6,
}

const ALL_REGIMES: [Regime; 4] =
    [Regime::Full, Regime::Broadband, Regime::Resonant, Regime::Ideal];

const PAIR: (usize, usize) = (1, 2);

/// Two near-degenerate resonators on a moderately narrow cavity.
fn reference_model() -> SystemModel {
    SystemModel {
        cavity: CavityParams { kappa_a: 0.1, kappa_a_prime: 0.0 },
        opo: OpoParams { chi: 0.5, kappa_c: 0.9, kappa_c_prime: 0.0 },
        freq: FrequencyConfig { epsilon_l: 1.0, epsilon_a: 0.004 },
        modes: vec![
            MechanicalMode { omega: 1.01, gamma: 2e-5, n_thermal: 10.0, coupling: C64::new(0.03, 0.0) },
            MechanicalMode { omega: 0.99, gamma: 2e-5, n_thermal: 10.0, coupling: C64::new(0.03, 0.0) },
        ],
    }
}

/// Search box shared by the optimizing studies.
fn search_box(ratio: f64) -> Vec<BoundedParam> {
    vec![
        BoundedParam { axis: ParamAxis::EpsilonL, lo: 0.5, hi: 1.5 },
        BoundedParam { axis: ParamAxis::EpsilonA, lo: 0.0, hi: 2.0 },
        BoundedParam { axis: ParamAxis::RPlus { ratio }, lo: 0.2, hi: 6.0 },
        BoundedParam { axis: ParamAxis::GPlus, lo: 0.0, hi: 0.2 },
        BoundedParam { axis: ParamAxis::GMinus, lo: -0.1, hi: 0.1 },
    ]
}

fn splitting_sweep() -> SweepSpec {
    SweepSpec { axis: ParamAxis::OmegaMinus, min: 0.0, max: 0.9, count: 91, log: false }
}

/// Runs one bundled study and returns its table.
pub fn run(preset: Preset) -> Result<Table, Failure> {
    match preset {
        Preset::Fig2b => fig2b(),
        Preset::Fig2c => fig2c(),
        Preset::Fig2e => fig2e(),
        Preset::Fig3 => fig3(),
        Preset::Fig4a => regime_sweep(
            "fig4a",
            "pair log-negativity vs source loss rate, all regimes",
            SweepSpec { axis: ParamAxis::KappaCPrime, min: 0.0, max: 0.81, count: 46, log: false },
        ),
        Preset::Fig4b => regime_sweep(
            "fig4b",
            "pair log-negativity vs mechanical damping, all regimes",
            SweepSpec { axis: ParamAxis::Gamma, min: 1e-6, max: 1e-2, count: 41, log: true },
        ),
        Preset::Fig4c => regime_sweep(
            "fig4c",
            "pair log-negativity vs thermal occupation, all regimes",
            SweepSpec { axis: ParamAxis::NThermal, min: 1e-2, max: 1e3, count: 41, log: true },
        ),
        Preset::Fig4d => regime_sweep(
            "fig4d",
            "pair log-negativity vs cavity loss rate, all regimes",
            SweepSpec { axis: ParamAxis::KappaAPrime, min: 0.0, max: 0.1, count: 41, log: false },
        ),
        Preset::Fig5 => fig5(),
        Preset::Fig6 => fig6(),
    }
}

fn sweep_header(name: &str, description: &str, model: &SystemModel) -> Vec<String> {
    let mut comments = vec![format!("optomech repro {name}"), description.to_string()];
    comments.extend(model_comments(model));
    comments
}

fn fig2b() -> Result<Table, Failure> {
    let model = reference_model();
    let rows = sweep(&model, Regime::Full, PAIR, 0.0, &splitting_sweep())?;
    Ok(Table {
        comments: sweep_header(
            "fig2b",
            "pair log-negativity vs mechanical half-splitting omega_minus, full model",
            &model,
        ),
        columns: vec!["omega_minus", "e_n", "var_min", "var_orth", "theta1", "theta2", "stable"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    Cell::Float(r.value),
                    Cell::Float(r.e_n),
                    Cell::Float(r.var_min),
                    Cell::Float(r.var_orth),
                    Cell::Float(r.theta1),
                    Cell::Float(r.theta2),
                    Cell::Flag(r.stable),
                ]
            })
            .collect(),
    })
}

fn fig2c() -> Result<Table, Failure> {
    let model = reference_model();
    let rows = sweep(&model, Regime::Full, PAIR, 0.0, &splitting_sweep())?;
    Ok(Table {
        comments: sweep_header(
            "fig2c",
            "collective variances and optimal phases vs omega_minus, full model",
            &model,
        ),
        columns: vec!["omega_minus", "var_min", "var_orth", "theta1", "theta2"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    Cell::Float(r.value),
                    Cell::Float(r.var_min),
                    Cell::Float(r.var_orth),
                    Cell::Float(r.theta1),
                    Cell::Float(r.theta2),
                ]
            })
            .collect(),
    })
}

fn fig2e() -> Result<Table, Failure> {
    let base = reference_model();
    let mut table = Table {
        comments: sweep_header(
            "fig2e",
            "best pair log-negativity over the drive settings vs cavity linewidth",
            &base,
        ),
        columns: vec![
            "regime", "kappa_a", "e_n", "epsilon_l", "epsilon_a", "r_plus", "g_plus", "g_minus",
        ],
        rows: Vec::new(),
    };
    table.comments.insert(
        2,
        "box: epsilon_l 0.5..1.5; epsilon_a 0..2; r_plus 0.2..6 (ratio 1/3); g_plus 0..0.2; g_minus -0.1..0.1".into(),
    );
    for regime in [Regime::Full, Regime::Broadband] {
        for k in 0..9 {
            let kappa_a = 10f64.powf(-1.0 + 0.25 * k as f64);
            let mut model = base.clone();
            model.cavity.kappa_a = kappa_a;
            let spec = OptimizationSpec {
                params: search_box(1.0 / 3.0),
                objective: Objective::LogNegativity,
                regime,
                pair: PAIR,
                time: 0.0,
                lattice: 4,
                max_iter: 600,
            };
            let res = maximize_en(&model, &spec)?;
            let mut row = vec![
                Cell::Text(regime.name().into()),
                Cell::Float(kappa_a),
                Cell::Float(res.value),
            ];
            row.extend(res.params.iter().map(|&p| Cell::Float(p)));
            table.rows.push(row);
        }
    }
    Ok(table)
}

fn fig3() -> Result<Table, Failure> {
    regime_sweep(
        "fig3",
        "pair log-negativity vs measurement time, all regimes",
        SweepSpec { axis: ParamAxis::Time, min: 0.0, max: PI, count: 101, log: false },
    )
}

fn regime_sweep(name: &str, description: &str, spec: SweepSpec) -> Result<Table, Failure> {
    let model = reference_model();
    let mut table = Table {
        comments: sweep_header(name, description, &model),
        columns: vec!["regime", spec.axis.label(), "e_n"],
        rows: Vec::new(),
    };
    for regime in ALL_REGIMES {
        for row in sweep(&model, regime, PAIR, 0.0, &spec)? {
            table.rows.push(vec![
                Cell::Text(regime.name().into()),
                Cell::Float(row.value),
                Cell::Float(row.e_n),
            ]);
        }
    }
    Ok(table)
}

fn fig5() -> Result<Table, Failure> {
    let base = reference_model();
    let mut table = Table {
        comments: sweep_header(
            "fig5",
            "pair log-negativity along each drive axis around the per-linewidth optimum, full model",
            &base,
        ),
        columns: vec!["kappa_a", "param", "value", "e_n", "stable"],
        rows: Vec::new(),
    };
    for kappa_a in [0.1, 1.0] {
        let mut model = base.clone();
        model.cavity.kappa_a = kappa_a;
        let params = search_box(1.0 / 3.0);
        let spec = OptimizationSpec {
            params: params.clone(),
            objective: Objective::LogNegativity,
            regime: Regime::Full,
            pair: PAIR,
            time: 0.0,
            lattice: 4,
            max_iter: 600,
        };
        let res = maximize_en(&model, &spec)?;
        table.comments.push(format!(
            "kappa_a = {kappa_a}: optimum e_n = {:.6} at {:?}",
            res.value, res.params
        ));
        let mut tuned = model.clone();
        for (bp, &v) in params.iter().zip(&res.params) {
            tuned = bp.axis.apply(&tuned, 0.0, v)?.0;
        }
        for bp in &params {
            let line = SweepSpec { axis: bp.axis, min: bp.lo, max: bp.hi, count: 41, log: false };
            for row in sweep(&tuned, Regime::Full, PAIR, 0.0, &line)? {
                table.rows.push(vec![
                    Cell::Float(kappa_a),
                    Cell::Text(bp.axis.label().into()),
                    Cell::Float(row.value),
                    Cell::Float(row.e_n),
                    Cell::Flag(row.stable),
                ]);
            }
        }
    }
    Ok(table)
}

fn fig6() -> Result<Table, Failure> {
    let n_pairs = 10;
    let narrow = reference_model();
    let narrow_g = vec![C64::new(0.03, 0.0); 2 * n_pairs];
    let mut wide = reference_model();
    wide.cavity.kappa_a = 1.0;
    wide.freq.epsilon_a = -0.1;
    let r_plus = 0.8;
    let r_minus = r_plus / 3.0;
    wide.opo.kappa_c = (r_plus + r_minus) / 2.0;
    wide.opo.chi = (r_plus - r_minus) / 2.0;
    let wide_g: Vec<C64> = (0..2 * n_pairs)
        .map(|i| C64::new(if i % 2 == 0 { 0.06 } else { 0.05 }, 0.0))
        .collect();
    let mut table = Table {
        comments: vec![
            "optomech repro fig6".into(),
            "pairwise log-negativity map of ten-pair star networks, full model".into(),
            "resonator j of pair p sits at epsilon_l +/- (1 + 3 p) * 0.01".into(),
        ],
        columns: vec!["kappa_a", "j", "k", "e_n"],
        rows: Vec::new(),
    };
    for (base, couplings) in [(&narrow, &narrow_g), (&wide, &wide_g)] {
        table.comments.extend(model_comments(base));
        let model = build_star_model(n_pairs, 0.01, couplings, base)?;
        let sol = steady_state(&model, Regime::Full)?;
        let map = pairwise_entanglement_map(&sol, 0.0)?;
        for j in 0..2 * n_pairs {
            for k in (j + 1)..2 * n_pairs {
                table.rows.push(vec![
                    Cell::Float(base.cavity.kappa_a),
                    Cell::Int((j + 1) as i64),
                    Cell::Int((k + 1) as i64),
                    Cell::Float(map[[j, k]]),
                ]);
            }
        }
    }
    Ok(table)
}
