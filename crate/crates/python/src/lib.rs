//! Python module `wgdisp`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use wgdisp::asymptotic::fig4_data;
use wgdisp::{
    dispersion_energy, enumerate_modes, f_quadrature, f_te_closed, f_tm_closed, fourth_order_oracle,
    ratio_to_freespace, u_freespace_cp, u_freespace_vdw, Conventions, DipoleSpecies, DipoleTransition, EnergyBreakdown,
    FreeSpaceForm, ModeIndex, ModeSelection, OracleSpec, OrderingSet, Orientation, OrientationPair, PairConfiguration,
    QuadratureSpec, RatioReference, Truncation,
};

create_exception!(wgdisp, WgdispError, PyException);

fn err(e: wgdisp::Error) -> PyErr {
    WgdispError::new_err(e.to_string())
}

fn conventions(name: &str) -> PyResult<Conventions> {
    match name {
        "oracle-consistent" => Ok(Conventions::oracle_consistent()),
        "paper-literal" => Ok(Conventions::paper_literal()),
        _ => Err(PyValueError::new_err(format!("unknown convention '{name}'"))),
    }
}

fn orientation(name: &str) -> PyResult<Orientation> {
    match name {
        "isotropic" => Ok(Orientation::IsotropicAverage),
        "fixed" => Ok(Orientation::FixedVector),
        _ => Err(PyValueError::new_err(format!(
            "orientation must be 'isotropic' or 'fixed', got '{name}'"
        ))),
    }
}

#[pyclass(name = "Geometry", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyGeometry(wgdisp::Geometry);

#[pymethods]
impl PyGeometry {
    #[new]
    #[pyo3(signature = (a = 1.0, b = None))]
    fn new(a: f64, b: Option<f64>) -> PyResult<Self> {
        wgdisp::Geometry::new(a, b.unwrap_or(a)).map(Self).map_err(err)
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a()
    }

    #[getter]
    fn b(&self) -> f64 {
        self.0.b()
    }

    fn center(&self) -> (f64, f64) {
        let c = self.0.center();
        (c.x, c.y)
    }

    /// `(name, k_mn)` for every mode with cutoff at most `max_cutoff`.
    fn modes(&self, max_cutoff: f64) -> Vec<(String, f64)> {
        enumerate_modes(&self.0, max_cutoff)
            .into_iter()
            .map(|m| (m.to_string(), wgdisp::cutoff_wavenumber(&self.0, &m)))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Geometry(a={}, b={})", self.0.a(), self.0.b())
    }
}

#[pyclass(name = "Species", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySpecies(DipoleSpecies);

#[pymethods]
impl PySpecies {
    /// `transitions`: list of `(energy, (dx, dy, dz))`.
    #[new]
    #[pyo3(signature = (transitions, orientation = "isotropic"))]
    fn new(transitions: Vec<(f64, [f64; 3])>, orientation: &str) -> PyResult<Self> {
        let t = transitions
            .into_iter()
            .map(|(e, d)| DipoleTransition::new(e, d))
            .collect::<wgdisp::Result<Vec<_>>>()
            .map_err(err)?;
        DipoleSpecies::new(t, self::orientation(orientation)?)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (wavelength, dipole = [0.0, 0.0, 1.0], orientation = "isotropic"))]
    fn single(wavelength: f64, dipole: [f64; 3], orientation: &str) -> PyResult<Self> {
        DipoleSpecies::single(wavelength, dipole, self::orientation(orientation)?)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (path, orientation = "isotropic"))]
    fn from_file(path: &str, orientation: &str) -> PyResult<Self> {
        DipoleSpecies::from_file(path, self::orientation(orientation)?)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn transitions(&self) -> Vec<(f64, [f64; 3])> {
        self.0.transitions().iter().map(|t| (t.energy(), t.dipole())).collect()
    }
}

#[pyclass(name = "PairConfiguration", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPair(PairConfiguration);

#[pymethods]
impl PyPair {
    #[new]
    #[pyo3(signature = (
        z, species1, species2 = None, geometry = None, p1 = None, p2 = None,
        permittivity = 1.0, convention = "oracle-consistent", tail_tol = None, max_cutoff = None, modes = None,
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        z: f64,
        species1: &PySpecies,
        species2: Option<&PySpecies>,
        geometry: Option<&PyGeometry>,
        p1: Option<(f64, f64)>,
        p2: Option<(f64, f64)>,
        permittivity: f64,
        convention: &str,
        tail_tol: Option<f64>,
        max_cutoff: Option<f64>,
        modes: Option<Vec<String>>,
    ) -> PyResult<Self> {
        let g = match geometry {
            Some(g) => g.0,
            None => wgdisp::Geometry::square(1.0).map_err(err)?,
        };
        let c = g.center();
        let (x1, y1) = p1.unwrap_or((c.x, c.y));
        let (x2, y2) = p2.unwrap_or((c.x, c.y));
        let s2 = species2.unwrap_or(species1).0.clone();
        let mut cfg = PairConfiguration::new(
            g,
            g.point(x1, y1).map_err(err)?,
            g.point(x2, y2).map_err(err)?,
            z,
            species1.0.clone(),
            s2,
        )
        .map_err(err)?;
        cfg.permittivity = permittivity;
        cfg.conventions = conventions(convention)?;
        cfg.truncation = match (max_cutoff, tail_tol) {
            (Some(k), _) => Truncation::MaxCutoff(k),
            (None, Some(t)) => Truncation::RelativeTail(t),
            (None, None) => Truncation::default(),
        };
        if let Some(names) = modes {
            let list = names
                .iter()
                .map(|n| n.parse())
                .collect::<wgdisp::Result<Vec<ModeIndex>>>()
                .map_err(err)?;
            cfg.modes = ModeSelection::Explicit(list);
        }
        cfg.validate().map_err(err)?;
        Ok(Self(cfg))
    }

    #[getter]
    fn z(&self) -> f64 {
        self.0.z
    }

    fn with_z(&self, z: f64) -> Self {
        Self(self.0.with_z(z))
    }
}

#[pyclass(name = "EnergyReport", frozen)]
struct PyEnergy(EnergyBreakdown);

#[pymethods]
impl PyEnergy {
    #[getter]
    fn total(&self) -> f64 {
        self.0.total
    }

    #[getter]
    fn tail_estimate(&self) -> f64 {
        self.0.tail_estimate
    }

    #[getter]
    fn modes_used(&self) -> usize {
        self.0.modes_used
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.0.warnings.clone()
    }

    /// Mode-summed coupling tensor for each distinct transition energy.
    fn tensors(&self) -> Vec<(f64, [[f64; 3]; 3])> {
        self.0.tensors.iter().map(|t| (t.energy, t.tensor.0)).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "EnergyReport(total={:e}, modes_used={})",
            self.0.total, self.0.modes_used
        )
    }
}

/// Dispersion energy of a configured pair.
#[pyfunction]
fn energy(config: &PyPair) -> PyResult<PyEnergy> {
    dispersion_energy(&config.0).map(PyEnergy).map_err(err)
}

/// Single-mode coupling `F^μ_mn,ij(z)`; `method` is `"closed"` or `"quadrature"`.
#[pyfunction]
#[pyo3(signature = (
    mode, orientation, z, geometry = None, p1 = None, p2 = None,
    wavelength = 100.0, method = "closed", convention = "oracle-consistent",
))]
#[allow(clippy::too_many_arguments)]
fn coupling(
    mode: &str,
    orientation: &str,
    z: f64,
    geometry: Option<&PyGeometry>,
    p1: Option<(f64, f64)>,
    p2: Option<(f64, f64)>,
    wavelength: f64,
    method: &str,
    convention: &str,
) -> PyResult<f64> {
    let g = match geometry {
        Some(g) => g.0,
        None => wgdisp::Geometry::square(1.0).map_err(err)?,
    };
    let c = g.center();
    let (x1, y1) = p1.unwrap_or((c.x, c.y));
    let (x2, y2) = p2.unwrap_or((c.x, c.y));
    let (p1, p2) = (g.point(x1, y1).map_err(err)?, g.point(x2, y2).map_err(err)?);
    let mode: ModeIndex = mode.parse().map_err(err)?;
    let o: OrientationPair = orientation.parse().map_err(err)?;
    let conv = conventions(convention)?;
    if !(wavelength > 0.0) {
        return Err(PyValueError::new_err("wavelength must be > 0"));
    }
    let e = 2.0 * std::f64::consts::PI / wavelength;
    let v = match method {
        "closed" if mode.is_tm() => f_tm_closed(&g, &mode, o, &p1, &p2, z, conv.tm_sign),
        "closed" => f_te_closed(&g, &mode, o, &p1, &p2, z, e, conv.te_factor, conv.normalization),
        "quadrature" => f_quadrature(
            &g,
            &mode,
            o,
            &p1,
            &p2,
            z,
            e,
            mode.is_te(),
            conv.normalization,
            &QuadratureSpec::default(),
        ),
        _ => {
            return Err(PyValueError::new_err(format!(
                "method must be 'closed' or 'quadrature', got '{method}'"
            )))
        }
    };
    v.map(|v| v.value).map_err(err)
}

/// Twelve-ordering fourth-order energy over an explicit mode list.
#[pyfunction]
#[pyo3(signature = (config, dominant_only = false))]
fn oracle(config: &PyPair, dominant_only: bool) -> PyResult<f64> {
    let spec = OracleSpec {
        orderings: if dominant_only {
            OrderingSet::DominantOnly
        } else {
            OrderingSet::All
        },
        ..Default::default()
    };
    fourth_order_oracle(&config.0, &spec).map(|r| r.total).map_err(err)
}

/// Free-space reference energies `(van der Waals, Casimir-Polder)` at distance `r`.
#[pyfunction]
#[pyo3(signature = (species1, species2, r, permittivity = 1.0))]
fn freespace(species1: &PySpecies, species2: &PySpecies, r: f64, permittivity: f64) -> (f64, f64) {
    (
        u_freespace_vdw(&species1.0, &species2.0, r, FreeSpaceForm::Tensor, permittivity),
        u_freespace_cp(&species1.0, &species2.0, r, permittivity),
    )
}

/// Guide-to-free-space ratio; `reference` is `"vdw"` or `"cp"`.
#[pyfunction]
#[pyo3(signature = (z, wavelength, a = 1.0, reference = "vdw"))]
fn ratio(z: f64, wavelength: f64, a: f64, reference: &str) -> PyResult<f64> {
    let r = match reference {
        "vdw" => RatioReference::VdwReference,
        "cp" => RatioReference::CpReference,
        _ => return Err(PyValueError::new_err("reference must be 'vdw' or 'cp'")),
    };
    Ok(ratio_to_freespace(z, wavelength, a, r))
}

/// `(z/a, direct sum, integral approximation)` on a log grid.
#[pyfunction]
#[pyo3(signature = (lo = 0.01, hi = 1.0, points = 25))]
fn fig4(lo: f64, hi: f64, points: usize) -> PyResult<Vec<(f64, f64, f64)>> {
    fig4_data(lo, hi, points)
        .map(|v| v.into_iter().map(|p| (p.z_over_a, p.direct, p.integral)).collect())
        .map_err(err)
}

#[pymodule]
#[pyo3(name = "wgdisp")]
fn wgdisp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("WgdispError", m.py().get_type::<WgdispError>())?;
    m.add_class::<PyGeometry>()?;
    m.add_class::<PySpecies>()?;
    m.add_class::<PyPair>()?;
    m.add_class::<PyEnergy>()?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(coupling, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(freespace, m)?)?;
    m.add_function(wrap_pyfunction!(ratio, m)?)?;
    m.add_function(wrap_pyfunction!(fig4, m)?)?;
    Ok(())
}
