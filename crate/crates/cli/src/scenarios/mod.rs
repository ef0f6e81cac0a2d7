//! Built-in scenarios. Each one declares its keys with defaults and turns a
//! resolved config into tables.

mod bath;
mod driven;
mod lattice;

use rayon::prelude::*;

use crate::config::{text, Config, Param};
use crate::error::{CliError, Result};
use crate::output::Output;

pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    /// reference unit all frequencies, energies and times are expressed in
    pub unit: &'static str,
    params: fn() -> Vec<Param>,
    run: fn(&Config) -> Result<Output>,
}

impl Scenario {
    pub fn params(&self) -> Vec<Param> {
        let mut p = (self.params)();
        p.push(text("units.reference", self.unit, "reference unit of every frequency, energy and time"));
        p
    }

    pub fn execute(&self, cfg: &Config) -> Result<Output> {
        cfg.check_unit(self.unit)?;
        (self.run)(cfg)
    }
}

static CATALOG: &[Scenario] = &[
    Scenario {
        name: "fig2-qsl",
        description: "non-Markovianity and speed-limit ratio of spontaneous decay across the coupling grid",
        unit: "omega_c",
        params: bath::qsl_params,
        run: bath::qsl,
    },
    Scenario {
        name: "fig3-thermalization",
        description: "asymptotic rates, effective temperature and photon number of a thermal Ohmic bath",
        unit: "omega0",
        params: bath::thermal_params,
        run: bath::thermal,
    },
    Scenario {
        name: "fig4-mzi",
        description: "squeezed-light interferometer precision under exact, Markovian and lossless encoding",
        unit: "omega0",
        params: bath::mzi_params,
        run: bath::mzi,
    },
    Scenario {
        name: "fig5-fbs",
        description: "Floquet bound states of a driven spin at the end of an XX chain",
        unit: "J",
        params: driven::fbs_params,
        run: driven::fbs,
    },
    Scenario {
        name: "fig6-battery",
        description: "charger-battery qubits with lattice baths: bound-state count and stored energy",
        unit: "varpi",
        params: driven::battery_params,
        run: driven::battery,
    },
    Scenario {
        name: "fig7-kitaev",
        description: "Majorana pair counts at 0 and pi/T of the phase-swapped Kitaev chain",
        unit: "delta1",
        params: lattice::kitaev_params,
        run: lattice::kitaev,
    },
    Scenario {
        name: "fig8-haldane",
        description: "Chern-number phase diagram and ribbon spectrum of the two-step driven Haldane model",
        unit: "t1",
        params: lattice::haldane_params,
        run: lattice::haldane,
    },
    Scenario {
        name: "fig9-nhssh",
        description: "generalized-Brillouin-zone windings of the driven non-Hermitian SSH chain",
        unit: "gamma",
        params: lattice::nhssh_params,
        run: lattice::nhssh,
    },
    Scenario {
        name: "bound-state",
        description: "bound-state energy and residue of an emitter in an Ohmic bath",
        unit: "omega_c",
        params: bath::bound_params,
        run: bath::bound,
    },
    Scenario {
        name: "amplitude",
        description: "excited-state amplitude, time-local rates and optional thermal noise function",
        unit: "omega0",
        params: bath::amplitude_params,
        run: bath::amplitude,
    },
    Scenario {
        name: "gap-closings",
        description: "quasienergy gap closings of the driven Haldane model and the condition each one meets",
        unit: "t1",
        params: lattice::closing_params,
        run: lattice::closings,
    },
];

pub fn catalog() -> &'static [Scenario] {
    CATALOG
}

pub fn find(name: &str) -> Result<&'static Scenario> {
    CATALOG.iter().find(|s| s.name == name).ok_or_else(|| {
        let names: Vec<&str> = CATALOG.iter().map(|s| s.name).collect();
        CliError::Validation(format!("unknown scenario `{name}`; available: {}", names.join(", ")))
    })
}

/// Evaluate `f` on every item in parallel, keeping input order.
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    items.par_iter().map(f).collect()
}

/// About `points` evenly spaced indices into a series of length `n`, always
/// including both ends.
pub(crate) fn thin(n: usize, points: usize) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    if points < 2 || n <= points {
        return (0..n).collect();
    }
    let stride = (n - 1).div_ceil(points - 1);
    let mut idx: Vec<usize> = (0..n).step_by(stride).collect();
    if *idx.last().unwrap() != n - 1 {
        idx.push(n - 1);
    }
    idx
}

/// Mean of the last `fraction` of a series.
pub(crate) fn tail_mean(values: &[f64], fraction: f64) -> f64 {
    let n = values.len();
    let k = ((n as f64 * fraction).ceil() as usize).clamp(1, n);
    values[n - k..].iter().sum::<f64>() / k as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_names_unique() {
        let mut names: Vec<&str> = catalog().iter().map(|s| s.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), catalog().len());
    }

    #[test]
    fn thinning_keeps_ends() {
        assert_eq!(thin(5, 10), vec![0, 1, 2, 3, 4]);
        let idx = thin(1001, 11);
        assert_eq!(idx.first(), Some(&0));
        assert_eq!(idx.last(), Some(&1000));
        assert_eq!(idx.len(), 11);
        assert_eq!(*thin(1000, 11).last().unwrap(), 999);
    }

    #[test]
    fn every_default_config_resolves() {
        for s in catalog() {
            let cfg = Config::resolve(s.name, s.params(), &Default::default()).unwrap();
            cfg.check_unit(s.unit).unwrap();
        }
    }
}
