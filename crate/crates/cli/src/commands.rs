//! The experiment subcommands.

use std::path::PathBuf;

use ellharm::ellipsoid::{cart_to_ellipsoidal, EllipsoidalSystem};
use ellharm::kahan::KahanSum;
use ellharm::lame::{solve_order, QuadOpts};
use ellharm::normconst::{gamma, gamma_fixed};
use ellharm::pcm::{
    born_energy, direct_coulomb, solvation_energy, spherical_coulomb_expansion, DielectricModel,
    ExpansionSet, PointCharge,
};
use ellharm::quad::TransformKind;

use crate::config::ModelConfig;
use crate::output::CsvWriter;

fn opts_with(scheme: TransformKind, tol: f64) -> QuadOpts {
    QuadOpts {
        transform: scheme,
        tolerance: tol,
        ..QuadOpts::default()
    }
}

/// `gamma`: normalization constants for every p at one order.
pub fn cmd_gamma(
    a: f64,
    b: f64,
    c: f64,
    n: usize,
    scheme: TransformKind,
    tol: f64,
    out: Option<&PathBuf>,
) -> Result<(), String> {
    let sys = EllipsoidalSystem::new(a, b, c).map_err(|e| e.to_string())?;
    let table = solve_order(&sys, n).map_err(|e| e.to_string())?;
    let mut csv = CsvWriter::create(out)?;
    csv.header(&["n", "p", "gamma", "evaluations"])?;
    for harm in table.harmonics() {
        let res = gamma(&sys, harm, scheme, tol).map_err(|e| e.to_string())?;
        csv.row(&[
            n.into(),
            harm.index().into(),
            res.gamma.into(),
            res.evaluations.into(),
        ])?;
    }
    Ok(())
}

/// `quad-compare`: work-precision rows for one γ_n^p across the three
/// transforms at fixed levels, errors against a level-12 tanh-sinh
/// reference.
pub fn cmd_quad_compare(
    a: f64,
    b: f64,
    c: f64,
    n: usize,
    p: usize,
    levels: &[u32],
    digits: u32,
    out: Option<&PathBuf>,
) -> Result<(), String> {
    let sys = EllipsoidalSystem::new(a, b, c).map_err(|e| e.to_string())?;
    let table = solve_order(&sys, n).map_err(|e| e.to_string())?;
    if p >= table.len() {
        return Err(format!("p = {p} out of range for order {n} (< {})", table.len()));
    }
    let harm = table.get(p);
    let reference = gamma_fixed(&sys, harm, TransformKind::TanhSinh, 12, digits)
        .map_err(|e| e.to_string())?
        .gamma;

    let mut csv = CsvWriter::create(out)?;
    csv.header(&["scheme", "evaluations", "abs_err_vs_reference"])?;
    for scheme in [TransformKind::TanhSinh, TransformKind::Tanh, TransformKind::Erf] {
        for &level in levels {
            let res = gamma_fixed(&sys, harm, scheme, level, digits).map_err(|e| e.to_string())?;
            csv.row(&[
                scheme.label().into(),
                res.evaluations.into(),
                (res.gamma - reference).abs().into(),
            ])?;
        }
    }
    Ok(())
}

/// `born-limit`: near-sphere cavities (1+Δ, 1+Δ/5, 1+Δ/10) with a unit
/// origin charge against the R = 1 Born ion.
pub fn cmd_born_limit(
    deltas: &[f64],
    eps_in: f64,
    eps_out: f64,
    order: usize,
    tol: f64,
    out: Option<&PathBuf>,
) -> Result<(), String> {
    let born = born_energy(1.0, 1.0, eps_in, eps_out);
    let opts = opts_with(TransformKind::TanhSinh, tol);
    let mut csv = CsvWriter::create(out)?;
    csv.header(&["delta", "dg", "born", "abs_err"])?;
    for &delta in deltas {
        let sys = EllipsoidalSystem::new(1.0 + delta, 1.0 + delta / 5.0, 1.0 + delta / 10.0)
            .map_err(|e| e.to_string())?;
        let charge = PointCharge {
            position: [0.0; 3],
            q: 1.0,
        };
        let model =
            DielectricModel::new(sys, eps_in, eps_out, vec![charge]).map_err(|e| e.to_string())?;
        let dg = solvation_energy(&model, order, &opts).map_err(|e| e.to_string())?;
        csv.row(&[
            delta.into(),
            dg.value.into(),
            born.into(),
            (dg.value - born).abs().into(),
        ])?;
    }
    Ok(())
}

fn load_model(config: &PathBuf, seed_override: Option<u64>) -> Result<DielectricModel, String> {
    let mut config = ModelConfig::load(config)?;
    if let Some(seed) = seed_override {
        if config.charges.is_some() {
            return Err("--seed cannot override explicit charges in the config".into());
        }
        config.seed = Some(seed);
    }
    config.build_model()
}

/// `solvate`: solvation free energy against truncation order, with the
/// self-referenced error against the highest requested order.
pub fn cmd_solvate(
    config: &PathBuf,
    orders: &[usize],
    tol: f64,
    seed_override: Option<u64>,
    out: Option<&PathBuf>,
) -> Result<(), String> {
    if orders.is_empty() {
        return Err("at least one order is required".into());
    }
    let model = load_model(config, seed_override)?;
    let opts = opts_with(TransformKind::TanhSinh, tol);
    let max_order = *orders.iter().max().unwrap();
    let expansion = ExpansionSet::build(&model, max_order, &opts).map_err(|e| e.to_string())?;
    let dg_max = expansion.solvation_energy_truncated(&model, max_order);

    let mut csv = CsvWriter::create(out)?;
    csv.header(&["order", "dg", "abs_err_vs_max_order", "evaluations"])?;
    for &order in orders {
        let dg = expansion.solvation_energy_truncated(&model, order);
        csv.row(&[
            order.into(),
            dg.into(),
            (dg - dg_max).abs().into(),
            expansion.evaluations_through(order).into(),
        ])?;
    }
    Ok(())
}

/// `expand-compare`: relative error of the ellipsoidal and spherical
/// Coulomb expansions against the direct sum at one evaluation point.
pub fn cmd_expand_compare(
    config: &PathBuf,
    point: [f64; 3],
    orders: &[usize],
    tol: f64,
    seed_override: Option<u64>,
    out: Option<&PathBuf>,
) -> Result<(), String> {
    if orders.is_empty() {
        return Err("at least one order is required".into());
    }
    let model = load_model(config, seed_override)?;
    let sys = model.sys();
    let opts = opts_with(TransformKind::TanhSinh, tol);
    let max_order = *orders.iter().max().unwrap();

    let exact = direct_coulomb(model.charges(), point);
    if exact == 0.0 {
        return Err("direct Coulomb sum vanishes at the evaluation point".into());
    }
    let ell_point =
        cart_to_ellipsoidal(sys, point[0], point[1], point[2]).map_err(|e| e.to_string())?;

    let expansion = ExpansionSet::build(&model, max_order, &opts).map_err(|e| e.to_string())?;
    // Per-order partial sums of the bare ellipsoidal expansion.
    let mut ell_partial = Vec::with_capacity(max_order + 1);
    let mut acc = KahanSum::new();
    for n in 0..=max_order {
        for harm in expansion.table(n).harmonics() {
            let solid = harm.solid_exterior(&ell_point, &opts).map_err(|e| e.to_string())?;
            acc.add(expansion.coulomb(n, harm.index()) * solid.value);
        }
        ell_partial.push(acc.value());
    }

    let spherical = spherical_coulomb_expansion(model.charges(), [0.0; 3], max_order);

    let mut csv = CsvWriter::create(out)?;
    csv.header(&["order", "ell_err", "sph_err"])?;
    for &order in orders {
        let ell_err = ((ell_partial[order] - exact) / exact).abs();
        let sph_err = ((spherical.eval_truncated(point, order) - exact) / exact).abs();
        csv.row(&[order.into(), ell_err.into(), sph_err.into()])?;
    }
    Ok(())
}
