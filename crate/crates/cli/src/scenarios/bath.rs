//! Emitters in Ohmic baths: bound states, decay, thermalisation, metrology.

use std::f64::consts::PI;

use boundfloq::dynamics::{
    effective_temperature, rates_from_u, solve_thermal, solve_u, tail_average, EffectiveTemperature,
};
use boundfloq::dynamics::states::photon_number;
use boundfloq::metrics::{bound_mzi, markovian_mzi, mzi_precision, non_markovianity, qsl_time, Exact, Limit, MziProbe};
use boundfloq::spectra::SpectralDensity;
use serde_json::json;

use super::{par_map, thin};
use crate::config::{flag, float, grid, int, linspace, Config, Param};
use crate::error::{numerical, CliError, Result};
use crate::output::{Cell, Output, Plot, Table};

fn ohmic(eta: f64, s: f64, cutoff: f64) -> Result<SpectralDensity> {
    let sd = SpectralDensity::ohmic(eta, s, cutoff);
    sd.validate().map_err(numerical("spectral density"))?;
    Ok(sd)
}

pub fn qsl_params() -> Vec<Param> {
    vec![
        float("omega0", 0.1, "emitter frequency"),
        float("s", 1.0, "Ohmicity exponent"),
        grid("grid.eta", linspace(0.02, 0.3, 15), "coupling strengths"),
        float("tau", 800.0, "driving horizon of the speed limit"),
        float("step", 0.05, "time step"),
        int("output.points", 200, "samples per population curve"),
    ]
}

pub fn qsl(cfg: &Config) -> Result<Output> {
    let omega0 = cfg.positive("omega0")?;
    let s = cfg.positive("s")?;
    let tau = cfg.positive("tau")?;
    let step = cfg.positive("step")?;
    let points = cfg.count("output.points", 2)?;
    let rows = par_map(cfg.grid("grid.eta"), |&eta| {
        let sd = ohmic(eta, s, 1.0)?;
        let traj = solve_u(&sd, omega0, tau, step).map_err(numerical("amplitude solve"))?;
        // align the horizon with the last node so it is always on the grid
        let horizon = traj.time(traj.len() - 1);
        let nm = non_markovianity(&traj, horizon).map_err(numerical("non-Markovianity"))?;
        let q = qsl_time(&traj, horizon).map_err(numerical("speed limit"))?;
        let bound = sd.bound_state(omega0).map_err(numerical("bound-state solve"))?;
        let pop = traj.population();
        let curve: Vec<(f64, f64)> = thin(pop.len(), points).into_iter().map(|i| (traj.time(i), pop[i])).collect();
        Ok((eta, nm.value(), q.time / horizon, bound, pop[pop.len() - 1], curve))
    })?;

    let mut table = Table::new("qsl", &["eta", "non_markovianity", "qsl_ratio", "bound_state", "residue", "final_population"]);
    let mut dynamics = Table::new("population", &["eta", "t", "population"]);
    for (eta, nm, ratio, bound, last, curve) in &rows {
        table.push(vec![
            (*eta).into(),
            (*nm).into(),
            (*ratio).into(),
            bound.is_some().into(),
            bound.map(|b| b.residue).into(),
            (*last).into(),
        ]);
        for &(t, p) in curve {
            dynamics.push(vec![(*eta).into(), t.into(), p.into()]);
        }
    }
    let mut out = Output::default();
    out.summarize("threshold_eta", omega0 / libm::tgamma(s));
    out.summarize("first_bound_eta", rows.iter().find(|r| r.3.is_some()).map(|r| r.0));
    out.tables = vec![table, dynamics];
    out.plots = vec![
        Plot::new("qsl", "eta", &["non_markovianity", "qsl_ratio"]),
        Plot::new("population", "t", &["population"]).grouped("eta"),
    ];
    Ok(out)
}

pub fn thermal_params() -> Vec<Param> {
    vec![
        float("eta", 0.1, "coupling strength"),
        float("s", 1.0, "Ohmicity exponent"),
        float("beta", 0.1, "inverse bath temperature"),
        grid("grid.omega_c", vec![5.0, 10.0, 20.0], "bath cutoff frequencies"),
        grid("grid.n0", vec![0.0, 1.0, 4.0], "initial mean photon numbers"),
        float("t_end", 100.0, "evolution time"),
        float("step", 0.01, "time step"),
        float("tail_fraction", 0.1, "fraction of the grid averaged for asymptotic rates"),
        int("output.points", 400, "samples per time series"),
    ]
}

pub fn thermal(cfg: &Config) -> Result<Output> {
    let eta = cfg.positive("eta")?;
    let s = cfg.positive("s")?;
    let beta = cfg.positive("beta")?;
    let t_end = cfg.positive("t_end")?;
    let step = cfg.positive("step")?;
    let fraction = cfg.positive("tail_fraction")?;
    if fraction > 1.0 {
        return Err(CliError::Validation(format!("key `tail_fraction` must be <= 1, got {fraction}")));
    }
    let points = cfg.count("output.points", 2)?;
    let n0s = cfg.grid("grid.n0").to_vec();
    if let Some(n) = n0s.iter().find(|&&n| n < 0.0) {
        return Err(CliError::Validation(format!("grid `grid.n0` holds negative photon number {n}")));
    }

    struct Point {
        cutoff: f64,
        bound: bool,
        gamma: Option<f64>,
        gamma_beta: Option<f64>,
        temperature: EffectiveTemperature,
        photons: Vec<Vec<f64>>,
        times: Vec<f64>,
        rates: Vec<(Option<f64>, Option<f64>)>,
    }
    let rows = par_map(cfg.grid("grid.omega_c"), |&cutoff| {
        let sd = ohmic(eta, s, cutoff)?;
        let traj = solve_u(&sd, 1.0, t_end, step).map_err(numerical("amplitude solve"))?;
        let (traj, rates) = solve_thermal(&sd, beta, &traj).map_err(numerical("thermal noise function"))?;
        let decay = rates.thermal_decay();
        let excitation = rates.excitation.clone().expect("thermal rates carry the excitation term");
        let gamma = tail_average(&decay, fraction);
        let gamma_beta = tail_average(&excitation, fraction);
        let vanishing = 1e-3 * PI * sd.evaluate_j(1.0).map_err(numerical("spectral density"))?;
        let temperature = match (gamma, gamma_beta) {
            (Some(g), Some(gb)) => effective_temperature(g, gb, 1.0, vanishing),
            _ => EffectiveTemperature::Undefined,
        };
        let photons = n0s
            .iter()
            .map(|&n0| photon_number(&traj, &rates, n0).map_err(numerical("photon number")))
            .collect::<Result<Vec<_>>>()?;
        let bound = sd.bound_state(1.0).map_err(numerical("bound-state solve"))?.is_some();
        let idx = thin(traj.len(), points);
        Ok(Point {
            cutoff,
            bound,
            gamma,
            gamma_beta,
            temperature,
            photons: photons.iter().map(|n| idx.iter().map(|&i| n[i]).collect()).collect(),
            times: idx.iter().map(|&i| traj.time(i)).collect(),
            rates: idx.iter().map(|&i| (decay[i], excitation[i])).collect(),
        })
    })?;

    let mut temp = Table::new(
        "temperature",
        &["omega_c", "bound_state", "gamma_inf", "gamma_beta_inf", "regime", "t_eff", "t_eff_over_t", "n_inf_spread"],
    );
    let mut finals = Table::new("photons", &["omega_c", "n0", "n_inf"]);
    let mut rates = Table::new("rates", &["omega_c", "t", "gamma", "gamma_beta"]);
    let mut photons = Table::new("photon_number", &["omega_c", "n0", "t", "n"]);
    for p in &rows {
        let (regime, t_eff) = match p.temperature {
            EffectiveTemperature::Finite(t) => ("finite", Some(t)),
            EffectiveTemperature::Divergent => ("divergent", None),
            EffectiveTemperature::Undefined => ("undefined", None),
        };
        let last: Vec<f64> = p.photons.iter().map(|n| n[n.len() - 1]).collect();
        let mean = last.iter().sum::<f64>() / last.len() as f64;
        let spread = last.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
            - last.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        temp.push(vec![
            p.cutoff.into(),
            p.bound.into(),
            p.gamma.into(),
            p.gamma_beta.into(),
            regime.into(),
            t_eff.into(),
            t_eff.map(|t| t * beta).into(),
            (mean > 0.0).then(|| spread / mean).into(),
        ]);
        for (n0, n) in n0s.iter().zip(&last) {
            finals.push(vec![p.cutoff.into(), (*n0).into(), (*n).into()]);
        }
        for (t, (g, gb)) in p.times.iter().zip(&p.rates) {
            rates.push(vec![p.cutoff.into(), (*t).into(), (*g).into(), (*gb).into()]);
        }
        for (n0, series) in n0s.iter().zip(&p.photons) {
            for (t, n) in p.times.iter().zip(series) {
                photons.push(vec![p.cutoff.into(), (*n0).into(), (*t).into(), (*n).into()]);
            }
        }
    }
    let mut out = Output::default();
    out.summarize("bath_temperature", 1.0 / beta);
    out.tables = vec![temp, finals, rates, photons];
    out.plots = vec![
        Plot::new("rates", "t", &["gamma", "gamma_beta"]).grouped("omega_c"),
        Plot::new("photon_number", "t", &["n"]).grouped("n0"),
    ];
    Ok(out)
}

pub fn mzi_params() -> Vec<Param> {
    vec![
        float("photons", 100.0, "total photon number of the probe"),
        float("shift", PI, "frequency shift imprinted on the signal arm"),
        float("omega_c", 300.0, "bath cutoff frequency"),
        float("s", 1.0, "Ohmicity exponent"),
        grid("grid.eta", vec![0.002, 0.011, 0.02], "coupling strengths"),
        grid("grid.t", linspace(0.2, 20.0, 100), "encoding times"),
        float("step", 0.002, "time step of the exact amplitude"),
    ]
}

pub fn mzi(cfg: &Config) -> Result<Output> {
    let photons = cfg.positive("photons")?;
    let shift = cfg.f64("shift");
    let cutoff = cfg.positive("omega_c")?;
    let s = cfg.positive("s")?;
    let step = cfg.positive("step")?;
    let times = cfg.grid("grid.t").to_vec();
    if times[0] <= 0.0 {
        return Err(CliError::Validation("grid `grid.t` must hold positive times".into()));
    }
    let probe = MziProbe::optimal(photons);
    let w = 1.0 + shift;
    if w <= 0.0 {
        return Err(CliError::Validation(format!("key `shift` must exceed -1, got {shift}")));
    }
    let curves = par_map(cfg.grid("grid.eta"), |&eta| {
        let sd = ohmic(eta, s, cutoff)?;
        let bound = sd.bound_state(w).map_err(numerical("bound-state solve"))?;
        let model = Exact { density: sd.clone(), step };
        let curve = mzi_precision(&model, 1.0, shift, &probe, &times).map_err(numerical("interferometer precision"))?;
        let kappa = PI * sd.evaluate_j(w).map_err(numerical("spectral density"))?;
        Ok((eta, bound, kappa, curve))
    })?;

    let mut table = Table::new(
        "precision",
        &["eta", "t", "precision", "shot_noise", "zeno", "markovian", "bound_form"],
    );
    let mut best = Table::new("optimum", &["eta", "bound_state", "residue", "t_opt", "min_precision"]);
    for (eta, bound, kappa, curve) in &curves {
        let snl = curve.limit(Limit::ShotNoise).expect("interferometer curves carry the shot-noise limit");
        let zeno = curve.limit(Limit::Zeno).expect("interferometer curves carry the Zeno limit");
        for (k, &t) in times.iter().enumerate() {
            table.push(vec![
                (*eta).into(),
                t.into(),
                curve.precision[k].into(),
                snl[k].into(),
                zeno[k].into(),
                markovian_mzi(*kappa, photons, t).into(),
                bound.map(|b| bound_mzi(b.residue, photons, t)).into(),
            ]);
        }
        let opt = curve
            .precision
            .iter()
            .enumerate()
            .filter_map(|(k, p)| p.map(|p| (times[k], p)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        best.push(vec![
            (*eta).into(),
            bound.is_some().into(),
            bound.map(|b| b.residue).into(),
            opt.map(|o| o.0).into(),
            opt.map(|o| o.1).into(),
        ]);
    }
    let mut out = Output::default();
    out.summarize("squeeze_fraction", probe.squeeze_fraction);
    out.tables = vec![table, best];
    out.plots = vec![Plot::new("precision", "t", &["precision", "shot_noise", "zeno"]).grouped("eta").log_y()];
    Ok(out)
}

pub fn bound_params() -> Vec<Param> {
    vec![
        float("omega0", 0.1, "emitter frequency"),
        float("s", 1.0, "Ohmicity exponent"),
        grid("grid.eta", linspace(0.02, 0.3, 29), "coupling strengths"),
    ]
}

pub fn bound(cfg: &Config) -> Result<Output> {
    let omega0 = cfg.positive("omega0")?;
    let s = cfg.positive("s")?;
    let rows = par_map(cfg.grid("grid.eta"), |&eta| {
        let sd = ohmic(eta, s, 1.0)?;
        Ok((eta, sd.bound_state(omega0).map_err(numerical("bound-state solve"))?))
    })?;
    let mut table = Table::new("bound_state", &["eta", "bound_state", "energy", "residue"]);
    for (eta, b) in &rows {
        table.push(vec![(*eta).into(), b.is_some().into(), b.map(|b| b.energy).into(), b.map(|b| b.residue).into()]);
    }
    let mut out = Output::default();
    out.summarize("threshold_eta", omega0 / libm::tgamma(s));
    out.summarize("first_bound_eta", rows.iter().find(|r| r.1.is_some()).map(|r| r.0));
    out.tables = vec![table];
    out.plots = vec![Plot::new("bound_state", "eta", &["energy", "residue"])];
    Ok(out)
}

pub fn amplitude_params() -> Vec<Param> {
    vec![
        float("eta", 0.1, "coupling strength"),
        float("s", 1.0, "Ohmicity exponent"),
        float("omega_c", 10.0, "bath cutoff frequency"),
        float("t_end", 50.0, "evolution time"),
        float("step", 0.01, "time step"),
        flag("thermal", false, "also compute the finite-temperature noise function"),
        float("beta", 1.0, "inverse bath temperature, used when `thermal` is set"),
        int("output.points", 1000, "rows in the time series"),
    ]
}

pub fn amplitude(cfg: &Config) -> Result<Output> {
    let sd = ohmic(cfg.positive("eta")?, cfg.positive("s")?, cfg.positive("omega_c")?)?;
    let t_end = cfg.positive("t_end")?;
    let step = cfg.positive("step")?;
    let points = cfg.count("output.points", 2)?;
    let traj = solve_u(&sd, 1.0, t_end, step).map_err(numerical("amplitude solve"))?;
    let (traj, rates) = if cfg.flag("thermal") {
        let beta = cfg.positive("beta")?;
        solve_thermal(&sd, beta, &traj).map_err(numerical("thermal noise function"))?
    } else {
        let rates = rates_from_u(&traj);
        (traj, rates)
    };
    let mut columns = vec!["t", "re_u", "im_u", "abs_u2", "gamma", "omega"];
    if traj.v.is_some() {
        columns.extend(["v", "gamma_beta"]);
    }
    let mut table = Table::new("amplitude", &columns);
    for i in thin(traj.len(), points) {
        let u = traj.u[i];
        let mut row: Vec<Cell> = vec![
            traj.time(i).into(),
            u.re.into(),
            u.im.into(),
            u.norm_sqr().into(),
            rates.decay[i].into(),
            rates.frequency[i].into(),
        ];
        if let (Some(v), Some(ex)) = (&traj.v, &rates.excitation) {
            row.push(v[i].into());
            row.push(ex[i].into());
        }
        table.push(row);
    }
    let mut out = Output::default();
    let bound = sd.bound_state(1.0).map_err(numerical("bound-state solve"))?;
    out.summarize("bound_state", json!(bound.map(|b| json!({"energy": b.energy, "residue": b.residue}))));
    out.summarize("final_abs_u", traj.u[traj.len() - 1].norm());
    out.summarize("warnings", json!(traj.warnings));
    out.tables = vec![table];
    out.plots = vec![Plot::new("amplitude", "t", &["abs_u2"]), Plot::new("amplitude", "t", &["gamma", "omega"])];
    Ok(out)
}
