//! Driven lattices: invariants on parameter grids, checked against open
//! boundaries.

use std::f64::consts::PI;

use boundfloq::topology::{
    chern_number, closing_condition, edge_flow, kitaev_invariants, kitaev_open_pairs, min_gaps, nhssh_invariants,
    nhssh_open_pairs, nhssh_open_spectrum, ribbon_spectrum, ClosingCondition, ClosingEnergy, DrivenHaldane,
    DrivenKitaev, DrivenNhssh, EdgeCriteria, ModeCount, Windings,
};
use boundfloq::Error;

use super::par_map;
use crate::config::{float, grid, int, linspace, Config, Param};
use crate::error::{numerical, Result};
use crate::output::{Cell, Output, Plot, Table};

/// All (a, b) pairs, `a` varying slowest.
fn plane(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

/// Status text of a point whose invariant could not be formed.
fn refused(e: &Error) -> &'static str {
    match e {
        Error::Gapless(_) => "gapless",
        _ => "unresolved",
    }
}

fn count_cells(c: Option<ModeCount>) -> [Cell; 2] {
    [c.map(|c| c.zero).into(), c.map(|c| c.pi).into()]
}

fn winding_cells(w: &Windings) -> [Cell; 2] {
    [w.w1.into(), w.w2.into()]
}

fn edge_criteria(cfg: &Config) -> Result<EdgeCriteria> {
    Ok(EdgeCriteria {
        energy: cfg.positive("edge.energy")?,
        edge_weight: cfg.positive("edge.weight")?,
        edge_fraction: cfg.positive("edge.fraction")?,
    })
}

fn edge_keys() -> [Param; 3] {
    let d = EdgeCriteria::default();
    [
        float("edge.energy", d.energy, "distance to 0 or pi/T counted as a boundary mode, in units of 2pi/T"),
        float("edge.weight", d.edge_weight, "minimum weight on the outer sites"),
        float("edge.fraction", d.edge_fraction, "fraction of sites counted as the edge"),
    ]
}

pub fn kitaev_params() -> Vec<Param> {
    let mut p = vec![
        float("t2", 2.5, "next-nearest hopping"),
        grid("grid.period", linspace(0.05, 0.4, 8), "driving periods"),
        grid("grid.t1", linspace(-3.0, 3.0, 13), "nearest hoppings"),
        int("winding.points", 4096, "momenta on the winding contour"),
        int("open.sites", 100, "open-chain length; 0 skips the open chain"),
    ];
    p.extend(edge_keys());
    p
}

pub fn kitaev(cfg: &Config) -> Result<Output> {
    let t2 = cfg.f64("t2");
    let points = cfg.count("winding.points", 16)?;
    let sites = cfg.count("open.sites", 0)?;
    let crit = edge_criteria(cfg)?;
    let grid_points = plane(cfg.grid("grid.period"), cfg.grid("grid.t1"));
    for &(period, t1) in &grid_points {
        DrivenKitaev::reference(t1, t2, period).validate().map_err(numerical("Kitaev model"))?;
    }
    let rows = par_map(&grid_points, |&(period, t1)| {
        let model = DrivenKitaev::reference(t1, t2, period);
        let windings = kitaev_invariants(&model, points);
        let open = if sites > 0 {
            Some(kitaev_open_pairs(&model, sites, &crit).map_err(numerical("open-chain spectrum"))?)
        } else {
            None
        };
        Ok((period, t1, windings, open))
    })?;
    let mut table =
        Table::new("phase", &["period", "t1", "w1", "w2", "n_zero", "n_pi", "open_zero", "open_pi", "status"]);
    let mut agree = 0;
    let mut compared = 0;
    for (period, t1, windings, open) in &rows {
        let mut row: Vec<Cell> = vec![(*period).into(), (*t1).into()];
        let counts = match windings {
            Ok(w) => {
                row.extend(winding_cells(w));
                w.counts()
            }
            Err(_) => {
                row.extend([Cell::Empty, Cell::Empty]);
                None
            }
        };
        row.extend(count_cells(counts));
        row.extend(count_cells(*open));
        let status = match windings {
            Err(e) => refused(e),
            Ok(_) if counts.is_none() => "non-integer",
            Ok(_) => "ok",
        };
        row.push(status.into());
        if let (Some(c), Some(o)) = (counts, open) {
            compared += 1;
            agree += usize::from(c == *o);
        }
        table.push(row);
    }
    let mut out = Output::default();
    out.summarize("open_chain_compared", compared);
    out.summarize("open_chain_agree", agree);
    out.tables = vec![table];
    out.plots = vec![Plot::new("phase", "t1", &["n_zero", "n_pi"]).grouped("period")];
    Ok(out)
}

pub fn haldane_params() -> Vec<Param> {
    vec![
        grid("grid.T1", linspace(0.1, 2.0, 20), "first-piece durations"),
        grid("grid.T2", linspace(0.1, 2.0, 20), "second-piece durations"),
        int("chern.grid", 60, "Brillouin-zone grid per direction"),
        float("ribbon.T1", 0.9, "first-piece duration of the ribbon"),
        float("ribbon.T2", 1.2, "second-piece duration of the ribbon"),
        int("ribbon.width", 40, "ribbon width in cells"),
        int("ribbon.momenta", 120, "momenta of the ribbon spectrum"),
        int("ribbon.flow_momenta", 360, "momenta used to count edge branches"),
        float("edge.weight", 0.6, "minimum weight on the lower edge"),
        float("edge.fraction", 0.1, "fraction of cells counted as the edge"),
    ]
}

pub fn haldane(cfg: &Config) -> Result<Output> {
    let n = cfg.count("chern.grid", 3)?;
    let grid_points = plane(cfg.grid("grid.T1"), cfg.grid("grid.T2"));
    for &(a, b) in &grid_points {
        DrivenHaldane::reference(a, b).validate().map_err(numerical("Haldane model"))?;
    }
    let rows = par_map(&grid_points, |&(a, b)| Ok((a, b, chern_number(&DrivenHaldane::reference(a, b), n))))?;
    let mut chern = Table::new("chern", &["T1", "T2", "chern", "min_gap", "status"]);
    for (a, b, c) in &rows {
        let row: Vec<Cell> = match c {
            Ok(c) => vec![(*a).into(), (*b).into(), c.value.into(), c.min_gap.into(), "ok".into()],
            Err(e) => vec![(*a).into(), (*b).into(), Cell::Empty, Cell::Empty, refused(e).into()],
        };
        chern.push(row);
    }

    let model = DrivenHaldane::reference(cfg.positive("ribbon.T1")?, cfg.positive("ribbon.T2")?);
    let width = cfg.count("ribbon.width", 2)?;
    let momenta = cfg.count("ribbon.momenta", 1)?;
    let flow_momenta = cfg.count("ribbon.flow_momenta", 4)?;
    let crit = EdgeCriteria {
        edge_weight: cfg.positive("edge.weight")?,
        edge_fraction: cfg.positive("edge.fraction")?,
        ..EdgeCriteria::default()
    };
    let thetas: Vec<f64> = (0..momenta).map(|m| 2.0 * PI * m as f64 / momenta as f64).collect();
    let spectra = par_map(&thetas, |&th| {
        ribbon_spectrum(&model, width, th, crit.edge_fraction).map_err(numerical("ribbon spectrum"))
    })?;
    let mut ribbon = Table::new("ribbon", &["theta", "quasienergy", "edge_weight"]);
    for (th, (eps, w)) in thetas.iter().zip(&spectra) {
        let mut order: Vec<usize> = (0..eps.len()).collect();
        order.sort_by(|&a, &b| eps[a].total_cmp(&eps[b]));
        for a in order {
            ribbon.push(vec![(*th).into(), eps[a].into(), w[a].into()]);
        }
    }
    let centres = [0.0, PI / model.period()];
    let flows = par_map(&centres, |&c| Ok(edge_flow(&model, width, c, flow_momenta, &crit).ok()))?;
    let ribbon_chern = chern_number(&model, n).ok().map(|c| c.value);

    let mut out = Output::default();
    out.summarize("ribbon_chern", ribbon_chern);
    out.summarize("edge_flow_zero", flows[0]);
    out.summarize("edge_flow_pi", flows[1]);
    out.tables = vec![chern, ribbon];
    out.plots = vec![
        Plot::new("chern", "T2", &["chern"]).grouped("T1"),
        Plot::new("ribbon", "theta", &["quasienergy"]),
    ];
    Ok(out)
}

pub fn nhssh_params() -> Vec<Param> {
    vec![
        float("t1", 2.0, "mean intracell hopping"),
        float("T1", 0.6, "first-piece duration"),
        float("T2", 0.6, "second-piece duration"),
        float("q", 3.0, "ratio of the second-piece intercell hopping to f"),
        grid("grid.f", linspace(0.2, 4.0, 20), "intercell hoppings f"),
        int("winding.points", 4096, "points on the winding contour"),
        int("open.cells", 80, "open-chain length in cells"),
        float("edge.energy", EdgeCriteria::default().energy, "distance to 0 or pi/T counted as a boundary mode"),
    ]
}

pub fn nhssh(cfg: &Config) -> Result<Output> {
    let points = cfg.count("winding.points", 16)?;
    let cells = cfg.count("open.cells", 2)?;
    let crit = EdgeCriteria { energy: cfg.positive("edge.energy")?, ..EdgeCriteria::default() };
    let model = |f: f64| DrivenNhssh {
        t1: cfg.f64("t1"),
        gamma: 1.0,
        amplitude: f,
        ratio: cfg.f64("q"),
        durations: (cfg.f64("T1"), cfg.f64("T2")),
    };
    let fs = cfg.grid("grid.f").to_vec();
    for &f in &fs {
        model(f).validate().map_err(numerical("non-Hermitian SSH model"))?;
    }
    let rows = par_map(&fs, |&f| {
        let m = model(f);
        let inv = nhssh_invariants(&m, points);
        let open = nhssh_open_pairs(&m, cells, &crit).map_err(numerical("open-chain spectrum"))?;
        let spec = nhssh_open_spectrum(&m, cells, crit.edge_fraction).map_err(numerical("open-chain spectrum"))?;
        Ok((f, inv, open, spec))
    })?;
    let mut table = Table::new(
        "windings",
        &[
            "f", "gbz_w1", "gbz_w2", "n_zero", "n_pi", "bz_w1", "bz_w2", "bz_n_zero", "bz_n_pi", "open_zero", "open_pi",
            "status",
        ],
    );
    let mut spectrum = Table::new("spectrum", &["f", "re_quasienergy", "im_quasienergy", "edge_weight", "boundary"]);
    for (f, inv, open, spec) in &rows {
        let mut row: Vec<Cell> = vec![(*f).into()];
        match inv {
            Ok(i) => {
                row.extend(winding_cells(&i.gbz));
                row.push(i.gbz.n_zero.into());
                row.push(i.gbz.n_pi.into());
                row.extend(winding_cells(&i.conventional));
                row.push(i.conventional.n_zero.into());
                row.push(i.conventional.n_pi.into());
            }
            Err(_) => row.extend(std::iter::repeat_with(|| Cell::Empty).take(8)),
        }
        row.extend(count_cells(Some(*open)));
        row.push(match inv {
            Ok(i) if i.gbz.counts().is_some() => "ok".into(),
            Ok(_) => "non-integer".into(),
            Err(e) => refused(e).into(),
        });
        table.push(row);
        let t = spec.period;
        let tol = crit.energy * 2.0 * PI / t;
        let mut order: Vec<usize> = (0..spec.quasienergies.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (spec.quasienergies[a], spec.quasienergies[b]);
            x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
        });
        for a in order {
            let e = spec.quasienergies[a];
            let near_zero = e.norm() < tol;
            let near_pi = (PI / t - e.re.abs()).hypot(e.im) < tol;
            spectrum.push(vec![
                (*f).into(),
                e.re.into(),
                e.im.into(),
                spec.edge_weight[a].into(),
                (near_zero || near_pi).into(),
            ]);
        }
    }
    let mut out = Output::default();
    out.tables = vec![table, spectrum];
    out.plots = vec![
        Plot::new("windings", "f", &["n_zero", "n_pi", "bz_n_zero", "bz_n_pi"]),
        Plot::new("spectrum", "f", &["re_quasienergy"]),
    ];
    Ok(out)
}

pub fn closing_params() -> Vec<Param> {
    vec![
        grid("grid.T1", linspace(0.1, 2.0, 20), "first-piece durations"),
        grid("grid.T2", linspace(0.1, 2.0, 20), "second-piece durations"),
        int("gap.samples", 48, "coarse Brillouin-zone scan per direction before zooming"),
        float("gap.threshold", 1e-3, "gaps below this count as closed"),
        float("gap.tolerance", 0.02, "tolerance when matching a closing to an analytic condition"),
    ]
}

fn condition_cells(c: ClosingCondition) -> [Cell; 5] {
    match c {
        ClosingCondition::Separate { n1, n2 } => ["separate".into(), n1.into(), n2.into(), Cell::Empty, Cell::Empty],
        ClosingCondition::Collinear { sign, n } => {
            ["collinear".into(), Cell::Empty, Cell::Empty, (sign as i64).into(), n.into()]
        }
        ClosingCondition::Anomaly => ["anomaly".into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty],
    }
}

pub fn closings(cfg: &Config) -> Result<Output> {
    let samples = cfg.count("gap.samples", 3)?;
    let threshold = cfg.positive("gap.threshold")?;
    let tol = cfg.positive("gap.tolerance")?;
    let grid_points = plane(cfg.grid("grid.T1"), cfg.grid("grid.T2"));
    let rows = par_map(&grid_points, |&(a, b)| {
        let model = DrivenHaldane::reference(a, b);
        let gaps = min_gaps(&model, samples).map_err(numerical("gap minimisation"))?;
        let tags = gaps.map(|g| (g.gap < threshold).then(|| closing_condition(&model, g.theta, tol)));
        Ok((a, b, gaps, tags))
    })?;
    let mut gaps_table = Table::new("gaps", &["T1", "T2", "gap_zero", "gap_pi"]);
    let mut closings = Table::new(
        "closings",
        &["T1", "T2", "energy", "gap", "theta1", "theta2", "condition", "n1", "n2", "sign", "n", "energy_consistent"],
    );
    let (mut found, mut anomalies) = (0, 0);
    for (a, b, gaps, tags) in &rows {
        gaps_table.push(vec![(*a).into(), (*b).into(), gaps[0].gap.into(), gaps[1].gap.into()]);
        for (g, tag) in gaps.iter().zip(tags) {
            let Some(tag) = tag else { continue };
            found += 1;
            anomalies += usize::from(*tag == ClosingCondition::Anomaly);
            let energy = match g.energy {
                ClosingEnergy::Zero => "zero",
                ClosingEnergy::PiOverT => "pi",
            };
            let mut row: Vec<Cell> =
                vec![(*a).into(), (*b).into(), energy.into(), g.gap.into(), g.theta.0.into(), g.theta.1.into()];
            row.extend(condition_cells(*tag));
            row.push(tag.energy().map(|e| e == g.energy).into());
            closings.push(row);
        }
    }
    let mut out = Output::default();
    out.summarize("closings", found);
    out.summarize("anomalies", anomalies);
    out.tables = vec![gaps_table, closings];
    out.plots = vec![Plot::new("gaps", "T2", &["gap_zero", "gap_pi"]).grouped("T1").log_y()];
    Ok(out)
}
