//! Python bindings: instances, schedulers, schedule files and verification.

use std::path::PathBuf;

use linksched::generate::{generate as generate_instance, GeneratorKind, ParamSpec};
use linksched::harness::{run_algorithm, Algorithm, RunOptions};
use linksched::io::{
    canonical_json, sinr_tolerance, verify, AlgorithmInfo, InstanceFile, ScheduleBody, ScheduleFile,
};
use linksched::oracles::partition_decide as decide;
use linksched::{derive_constants, Error, LinkSet, PhysParams, RmaxChoice};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(linksched, LinkschedError, PyException);
create_exception!(linksched, ModeMismatchError, LinkschedError);
create_exception!(linksched, AdmissionError, LinkschedError);
create_exception!(linksched, OracleCapError, LinkschedError);
create_exception!(linksched, VerificationError, LinkschedError);

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::ModeMismatch { .. } => ModeMismatchError::new_err(msg),
        Error::InvalidParams(_) => PyValueError::new_err(msg),
        Error::OracleCap(_) => OracleCapError::new_err(msg),
        Error::Verification(_) | Error::Lp(_) | Error::Internal(_) => {
            VerificationError::new_err(msg)
        }
        Error::Io(_) => LinkschedError::new_err(msg),
        _ => AdmissionError::new_err(msg),
    }
}

/// Converts through canonical JSON into plain Python objects.
fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = canonical_json(value).map_err(py_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(module = "linksched", frozen)]
pub struct Instance {
    file: InstanceFile,
    set: LinkSet,
}

impl Instance {
    fn from_file(file: InstanceFile) -> PyResult<Self> {
        let set = file.to_link_set().map_err(py_err)?;
        Ok(Self { file, set })
    }
}

#[pymethods]
impl Instance {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::from_file(InstanceFile::parse(text).map_err(py_err)?)
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Self::from_file(InstanceFile::read(&path).map_err(py_err)?)
    }

    /// Seeded instance; `spec` is a JSON parameter spec, defaults fill gaps.
    #[staticmethod]
    #[pyo3(signature = (kind, n, seed=0, spec=None))]
    fn generate(kind: &str, n: usize, seed: u64, spec: Option<&str>) -> PyResult<Self> {
        let kind: GeneratorKind = kind.parse().map_err(py_err)?;
        let spec: ParamSpec = match spec {
            Some(text) => {
                serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?
            }
            None => ParamSpec::default(),
        };
        Self::from_file(generate_instance(kind, n, seed, &spec).map_err(py_err)?)
    }

    fn to_json(&self) -> PyResult<String> {
        self.file.to_canonical_string().map_err(py_err)
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        self.file.write(&path).map_err(py_err)
    }

    fn digest(&self) -> PyResult<String> {
        self.file.digest().map_err(py_err)
    }

    fn __len__(&self) -> usize {
        self.set.len()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.set.mode().as_str()
    }

    #[getter]
    fn params<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, self.set.params())
    }

    #[getter]
    fn links<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.file.links)
    }

    #[pyo3(signature = (link, concurrent=Vec::new()))]
    fn sinr(&self, link: usize, concurrent: Vec<usize>) -> PyResult<f64> {
        self.set.sinr(link, &concurrent).map_err(py_err)
    }

    #[pyo3(signature = (ids, tolerance=None, strict=false))]
    fn is_independent(
        &self,
        ids: Vec<usize>,
        tolerance: Option<f64>,
        strict: bool,
    ) -> PyResult<bool> {
        self.set
            .check_independent_with(&ids, sinr_tolerance(strict, tolerance))
            .map_err(py_err)
    }

    /// `tau`, `K`, `omega` and the reference length for oblivious instances.
    fn constants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let c = derive_constants(&self.set, RmaxChoice::LongestLink).map_err(py_err)?;
        let value = serde_json::json!({
            "tau": c.tau,
            "capK": c.cap_k,
            "omega": c.omega.value(),
            "rmax": c.rmax,
        });
        to_py(py, &value)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(n={}, mode={:?})",
            self.set.len(),
            self.set.mode().as_str()
        )
    }
}

#[pyclass(module = "linksched", frozen)]
pub struct Schedule {
    file: ScheduleFile,
}

#[pymethods]
impl Schedule {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            file: ScheduleFile::parse(text).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            file: ScheduleFile::read(&path).map_err(py_err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        self.file.to_canonical_string().map_err(py_err)
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        self.file.write(&path).map_err(py_err)
    }

    /// Slot count, or total airtime for fractional schedules.
    #[getter]
    fn length(&self) -> f64 {
        self.file.schedule.length()
    }

    #[getter]
    fn algorithm(&self) -> &str {
        &self.file.algorithm.name
    }

    #[getter]
    fn details<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.file.algorithm.params)
    }

    /// Slots as lists of link ids; `None` for fractional schedules.
    #[getter]
    fn slots(&self) -> Option<Vec<Vec<usize>>> {
        match &self.file.schedule {
            ScheduleBody::Integral { slots } => Some(slots.clone()),
            ScheduleBody::Fractional { .. } => None,
        }
    }

    /// `(ids, gamma)` pairs; `None` for integral schedules.
    #[getter]
    fn entries(&self) -> Option<Vec<(Vec<usize>, f64)>> {
        match &self.file.schedule {
            ScheduleBody::Fractional { entries } => {
                Some(entries.iter().map(|e| (e.ids.clone(), e.gamma)).collect())
            }
            ScheduleBody::Integral { .. } => None,
        }
    }

    #[getter]
    fn instance_digest(&self) -> &str {
        &self.file.instance_digest
    }

    fn __len__(&self) -> usize {
        match &self.file.schedule {
            ScheduleBody::Integral { slots } => slots.len(),
            ScheduleBody::Fractional { entries } => entries.len(),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Schedule(algorithm={:?}, length={})",
            self.file.algorithm.name,
            self.length()
        )
    }
}

/// Runs a scheduler and returns a verified schedule.
#[pyfunction]
#[pyo3(signature = (instance, algo, slot_cap=None, node_budget=None, tolerance=None, strict=false))]
fn run(
    instance: &Instance,
    algo: &str,
    slot_cap: Option<usize>,
    node_budget: Option<usize>,
    tolerance: Option<f64>,
    strict: bool,
) -> PyResult<Schedule> {
    let algo: Algorithm = algo.parse().map_err(py_err)?;
    let opts = RunOptions {
        slot_cap,
        node_budget,
    };
    let out = run_algorithm(&instance.set, algo, &opts).map_err(py_err)?;
    let info = AlgorithmInfo {
        name: algo.as_str().to_string(),
        params: out.details,
    };
    let tol = sinr_tolerance(strict, tolerance);
    let file =
        ScheduleFile::build(&instance.file, &instance.set, info, out.body, tol).map_err(py_err)?;
    Ok(Schedule { file })
}

/// Checks a schedule against an instance and returns the full report.
#[pyfunction(name = "verify")]
#[pyo3(signature = (instance, schedule, tolerance=None, strict=false))]
fn verify_schedule<'py>(
    py: Python<'py>,
    instance: &Instance,
    schedule: &Schedule,
    tolerance: Option<f64>,
    strict: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let report = verify(
        &instance.file,
        &schedule.file,
        sinr_tolerance(strict, tolerance),
    )
    .map_err(py_err)?;
    to_py(py, &report)
}

#[pyfunction]
fn algorithms() -> Vec<&'static str> {
    Algorithm::ALL.iter().map(|a| a.as_str()).collect()
}

/// Equal-sum split of positive integers as two index lists, or `None`.
#[pyfunction]
fn partition_decide(values: Vec<u64>) -> PyResult<Option<(Vec<usize>, Vec<usize>)>> {
    Ok(decide(&values)
        .map_err(py_err)?
        .map(|w| (w.first, w.second)))
}

/// Whether the gadget for `integers` has a two-slot schedule exactly when
/// the integers split into equal halves.
#[pyfunction]
#[pyo3(signature = (integers, sigma=2.0, kappa=3.0))]
fn reduction_equivalence(integers: Vec<u64>, sigma: f64, kappa: f64) -> PyResult<bool> {
    let params = PhysParams {
        sigma,
        kappa,
        beta: kappa,
        ..ParamSpec::gadget_default().params
    };
    linksched::gadget::reduction_equivalence(&integers, &params).map_err(py_err)
}

#[pymodule]
#[pyo3(name = "linksched")]
fn linksched_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<Instance>()?;
    m.add_class::<Schedule>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(verify_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(algorithms, m)?)?;
    m.add_function(wrap_pyfunction!(partition_decide, m)?)?;
    m.add_function(wrap_pyfunction!(reduction_equivalence, m)?)?;
    m.add("LinkschedError", py.get_type::<LinkschedError>())?;
    m.add("ModeMismatchError", py.get_type::<ModeMismatchError>())?;
    m.add("AdmissionError", py.get_type::<AdmissionError>())?;
    m.add("OracleCapError", py.get_type::<OracleCapError>())?;
    m.add("VerificationError", py.get_type::<VerificationError>())?;
    Ok(())
}
