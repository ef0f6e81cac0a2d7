//! Periodically driven emitters with the environment kept as explicit modes.

use std::f64::consts::PI;

use boundfloq::floquet::{
    asymptotic_projection, build_battery, build_spinchain, detect_fbs, dominant_frequency, one_period_propagator,
    quasienergy_spectrum, stroboscopic_evolve, superposition_fidelity, BatteryParams, Classification, FbsCriteria,
    FloquetSpectrum, PiecewiseModel, SpinChainParams, StateClass,
};

use super::{par_map, tail_mean, thin};
use crate::config::{float, grid, int, Config, Param};
use crate::error::{numerical, CliError, Result};
use crate::output::{Output, Plot, Table};

fn class_name(c: StateClass) -> &'static str {
    match c {
        StateClass::Band => "band",
        StateClass::Bound => "bound",
        StateClass::Ambiguous => "ambiguous",
    }
}

fn criteria(cfg: &Config) -> Result<FbsCriteria> {
    let c = FbsCriteria { gap_factor: cfg.positive("fbs.gap_factor")?, weight: cfg.positive("fbs.weight")? };
    if c.weight >= 1.0 {
        return Err(CliError::Validation(format!("key `fbs.weight` must be < 1, got {}", c.weight)));
    }
    Ok(c)
}

fn fbs_keys() -> [Param; 2] {
    [
        float("fbs.gap_factor", 5.0, "required gap to the band, in median level spacings"),
        float("fbs.weight", 0.1, "minimum weight on the system for a bound state"),
    ]
}

fn analyse(model: &PiecewiseModel, criteria: &FbsCriteria) -> Result<(FloquetSpectrum, Classification)> {
    let u = one_period_propagator(model).map_err(numerical("one-period propagator"))?;
    let spec = quasienergy_spectrum(u.as_ref(), model.period).map_err(numerical("quasienergy spectrum"))?;
    let classes = detect_fbs(&spec, model, criteria).map_err(numerical("bound-state detection"))?;
    Ok((spec, classes))
}

fn spectrum_rows(table: &mut Table, x: f64, spec: &FloquetSpectrum, classes: &Classification) {
    let mut order: Vec<usize> = (0..spec.len()).collect();
    order.sort_by(|&a, &b| spec.quasienergies[a].total_cmp(&spec.quasienergies[b]));
    for a in order {
        table.push(vec![
            x.into(),
            spec.quasienergies[a].into(),
            classes.weights[a].into(),
            class_name(classes.classes[a]).into(),
        ]);
    }
}

pub fn fbs_params() -> Vec<Param> {
    let mut p = vec![
        int("sites", 800, "chain length"),
        float("period", 0.05 * PI, "driving period"),
        float("first_duration", 0.02 * PI, "duration of the first piece"),
        grid("grid.a2", vec![1.5, 36.0], "second-piece driving amplitudes"),
        int("periods", 2000, "number of periods evolved"),
        float("tail_fraction", 0.1, "fraction of the record averaged for long-time values"),
        int("output.points", 400, "samples per trajectory"),
    ];
    p.extend(fbs_keys());
    p
}

pub fn fbs(cfg: &Config) -> Result<Output> {
    let sites = cfg.count("sites", 2)?;
    let period = cfg.positive("period")?;
    let first = cfg.positive("first_duration")?;
    let periods = cfg.count("periods", 1)?;
    let fraction = cfg.positive("tail_fraction")?;
    let points = cfg.count("output.points", 2)?;
    let crit = criteria(cfg)?;
    let rows = par_map(cfg.grid("grid.a2"), |&a2| {
        let model = build_spinchain(&SpinChainParams::reference(sites, period, first, a2))
            .map_err(numerical("spin-chain model"))?;
        let (spec, classes) = analyse(&model, &crit)?;
        let psi = model.unit_vector(0);
        let proj = asymptotic_projection(&spec, &classes, &psi);
        let projection = proj.mean_population(&spec, 0);
        let rec = stroboscopic_evolve(&model, &psi, periods, 1).map_err(numerical("stroboscopic evolution"))?;
        let pop = rec.population(0);
        let fid: Vec<f64> = rec.amplitude(0).into_iter().map(superposition_fidelity).collect();
        Ok((a2, spec, classes, projection, rec.times, pop, fid))
    })?;

    let mut spectrum = Table::new("spectrum", &["a2", "quasienergy", "weight", "class"]);
    let mut dynamics = Table::new("dynamics", &["a2", "t", "population", "fidelity"]);
    let mut summary = Table::new("bound_states", &["a2", "bound_states", "projection", "late_population", "late_fidelity"]);
    for (a2, spec, classes, projection, times, pop, fid) in &rows {
        spectrum_rows(&mut spectrum, *a2, spec, classes);
        for i in thin(times.len(), points) {
            dynamics.push(vec![(*a2).into(), times[i].into(), pop[i].into(), fid[i].into()]);
        }
        summary.push(vec![
            (*a2).into(),
            classes.bound().len().into(),
            (*projection).into(),
            tail_mean(pop, fraction).into(),
            tail_mean(fid, fraction).into(),
        ]);
    }
    let mut out = Output::default();
    out.tables = vec![summary, spectrum, dynamics];
    out.plots = vec![
        Plot::new("dynamics", "t", &["population", "fidelity"]).grouped("a2"),
        Plot::new("spectrum", "quasienergy", &["weight"]).grouped("a2"),
    ];
    Ok(out)
}

pub fn battery_params() -> Vec<Param> {
    let mut p = vec![
        int("lattice", 30, "bath lattice side N"),
        grid("grid.kappa", vec![0.2, 4.3, 6.0, 8.0], "qubit-qubit couplings"),
        float("horizon", 400.0, "evolution time"),
        int("output.points", 400, "samples per energy curve"),
    ];
    p.extend(fbs_keys());
    p
}

pub fn battery(cfg: &Config) -> Result<Output> {
    let lattice = cfg.count("lattice", 1)?;
    let horizon = cfg.positive("horizon")?;
    let points = cfg.count("output.points", 2)?;
    let crit = criteria(cfg)?;
    let rows = par_map(cfg.grid("grid.kappa"), |&kappa| {
        if kappa <= 0.0 {
            return Err(CliError::Validation(format!("grid `grid.kappa` must be positive, got {kappa}")));
        }
        let model = build_battery(&BatteryParams::reference(lattice, kappa)).map_err(numerical("battery model"))?;
        let (spec, classes) = analyse(&model, &crit)?;
        // the excitation starts in the charger
        let psi = model.unit_vector(1);
        let proj = asymptotic_projection(&spec, &classes, &psi);
        let projection = proj.mean_population(&spec, 0);
        let periods = (horizon / model.period).ceil() as usize;
        let rec = stroboscopic_evolve(&model, &psi, periods, 1).map_err(numerical("stroboscopic evolution"))?;
        let energy = rec.population(0);
        let beat = if proj.states.len() >= 2 {
            // skip the early transient, the band part has dephased by then
            let late = &energy[energy.len() / 2..];
            dominant_frequency(late, model.period)
        } else {
            None
        };
        Ok((kappa, spec, classes, proj.beat, beat, projection, rec.times, energy))
    })?;

    let mut spectrum = Table::new("spectrum", &["kappa", "quasienergy", "weight", "class"]);
    let mut energy = Table::new("energy", &["kappa", "t", "energy"]);
    let mut regimes = Table::new(
        "regimes",
        &["kappa", "bound_states", "regime", "delta_eps0", "beat_frequency", "projection", "late_mean_energy"],
    );
    for (kappa, spec, classes, delta, beat, projection, times, e) in &rows {
        spectrum_rows(&mut spectrum, *kappa, spec, classes);
        for i in thin(times.len(), points) {
            energy.push(vec![(*kappa).into(), times[i].into(), e[i].into()]);
        }
        let n = classes.bound().len();
        let regime = match n {
            0 => "decay",
            1 => "trapping",
            _ => "oscillation",
        };
        regimes.push(vec![
            (*kappa).into(),
            n.into(),
            regime.into(),
            (*delta).into(),
            (*beat).into(),
            (*projection).into(),
            tail_mean(e, 0.1).into(),
        ]);
    }
    let mut out = Output::default();
    out.tables = vec![regimes, spectrum, energy];
    out.plots = vec![
        Plot::new("energy", "t", &["energy"]).grouped("kappa"),
        Plot::new("regimes", "kappa", &["delta_eps0", "beat_frequency"]),
    ];
    Ok(out)
}
