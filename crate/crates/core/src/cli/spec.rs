//! Serializable stand-ins for kernels, weights, grids and Fourier profiles.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{Profile, UniformGrid};
use crate::grid::LogGrid;
use crate::kernels::Kernel;
use crate::weights::{Direction, MonotoneProfile, Weight};

fn field(name: &str, e: Error) -> Error {
    Error::Config(format!("{name}: {e}"))
}

fn existing(base: &Path, path: &Path, name: &str) -> Result<PathBuf> {
    let full = if path.is_absolute() { path.to_path_buf() } else { base.join(path) };
    if !full.is_file() {
        return Err(Error::Config(format!("{name}: file {} does not exist", full.display())));
    }
    Ok(full)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KernelSpec {
    Zero,
    FractionalHardy { beta: f64 },
    AdjointHardy,
    FractionalHlp { beta: f64 },
    CesaroGamma { g: f64 },
    GaussianHat { sigma: f64 },
    /// Two-column `(radius, value)` CSV, evenly extended.
    SampledCsv { path: PathBuf },
}

impl KernelSpec {
    pub fn build(&self, base: &Path, name: &str) -> Result<Kernel> {
        let k = match self {
            KernelSpec::Zero => Ok(Kernel::Zero),
            KernelSpec::FractionalHardy { beta } => Kernel::fractional_hardy(*beta),
            KernelSpec::AdjointHardy => Ok(Kernel::AdjointHardy),
            KernelSpec::FractionalHlp { beta } => Kernel::fractional_hlp(*beta),
            KernelSpec::CesaroGamma { g } => Kernel::cesaro_gamma(*g),
            KernelSpec::GaussianHat { sigma } => Kernel::gaussian_hat(*sigma),
            KernelSpec::SampledCsv { path } => Kernel::from_csv(&existing(base, path, name)?),
        };
        k.map_err(|e| field(name, e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WeightSpec {
    Power { a: f64 },
    Constant { c: f64 },
    /// `(radius, value)` CSV of a monotone profile, evenly extended.
    MonotoneCsv { path: PathBuf, direction: Direction },
}

impl WeightSpec {
    pub fn one() -> Self {
        WeightSpec::Constant { c: 1.0 }
    }

    pub fn build(&self, base: &Path, name: &str) -> Result<Weight> {
        let w = match self {
            WeightSpec::Power { a } => Weight::power(*a),
            WeightSpec::Constant { c } => Weight::constant(*c),
            WeightSpec::MonotoneCsv { path, direction } => MonotoneProfile::from_csv(&existing(base, path, name)?, *direction)
                .map(|profile| Weight::EvenMonotone { profile }),
        };
        w.map_err(|e| field(name, e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub n_per_side: usize,
}

impl GridSpec {
    pub fn build(&self, name: &str) -> Result<LogGrid> {
        LogGrid::new(self.r_min, self.r_max, self.n_per_side).map_err(|e| field(name, e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProfileSpec {
    Zero,
    Gaussian { sigma: f64 },
    ExpPoly { power: u32, rate: f64 },
    /// `Φ̂` of an even kernel, with spectral derivatives up to `max_order`.
    Kernel { kernel: KernelSpec, half_width: f64, n: usize, max_order: usize },
}

impl ProfileSpec {
    pub fn build(&self, base: &Path, name: &str) -> Result<Profile> {
        let p = match self {
            ProfileSpec::Zero => Ok(Profile::Zero),
            ProfileSpec::Gaussian { sigma } => Profile::gaussian(*sigma),
            ProfileSpec::ExpPoly { power, rate } => Profile::exp_poly(*power, *rate),
            ProfileSpec::Kernel { kernel, half_width, n, max_order } => {
                let k = kernel.build(base, name)?;
                UniformGrid::new(*half_width, *n).and_then(|g| Profile::of_kernel(&k, g, *max_order))
            }
        };
        p.map_err(|e| field(name, e))
    }
}
