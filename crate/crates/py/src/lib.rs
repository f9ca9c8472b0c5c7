use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use weilform_core::algebroid::AlgebroidPresentation;
use weilform_core::fixtures;
use weilform_core::ideals::{self, IMConnection};
use weilform_core::poly::{self, Rational};
use weilform_core::report::Report;
use weilform_core::spec::{cochain_to_json, SpecFile};
use weilform_core::weil::{self, WeilCochain};

fn err(e: weilform_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn checks(rep: Report) -> Vec<(String, bool, String)> {
    rep.checks
        .into_iter()
        .map(|c| (c.name, c.passed, c.detail))
        .collect()
}

fn rational(s: &str) -> PyResult<Rational> {
    poly::Poly::parse_default(s, 0)
        .ok()
        .and_then(|p| p.as_constant())
        .ok_or_else(|| PyValueError::new_err(format!("not a rational number: {s:?}")))
}

/// Polynomial with exact rational coefficients.
#[pyclass(module = "weilform", frozen)]
struct Poly {
    inner: poly::Poly,
    vars: Vec<String>,
}

#[pymethods]
impl Poly {
    #[new]
    #[pyo3(signature = (src, variables))]
    fn new(src: &str, variables: Vec<String>) -> PyResult<Self> {
        let inner = poly::Poly::parse(src, &variables).map_err(err)?;
        Ok(Poly { inner, vars: variables })
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.vars.clone()
    }

    fn partial(&self, i: usize) -> PyResult<Poly> {
        Ok(self.wrap(self.inner.partial(i).map_err(err)?))
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __add__(&self, other: PyRef<'_, Poly>) -> PyResult<Poly> {
        Ok(self.wrap(self.inner.checked_add(&other.inner).map_err(err)?))
    }

    fn __sub__(&self, other: PyRef<'_, Poly>) -> PyResult<Poly> {
        Ok(self.wrap(self.inner.checked_sub(&other.inner).map_err(err)?))
    }

    fn __mul__(&self, other: PyRef<'_, Poly>) -> PyResult<Poly> {
        Ok(self.wrap(self.inner.checked_mul(&other.inner).map_err(err)?))
    }

    fn __neg__(&self) -> Poly {
        self.wrap(-&self.inner)
    }

    fn __eq__(&self, other: PyRef<'_, Poly>) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string_with(&self.vars)
    }

    fn __repr__(&self) -> String {
        format!("Poly({:?})", self.__str__())
    }
}

impl Poly {
    fn wrap(&self, inner: poly::Poly) -> Poly {
        Poly {
            inner,
            vars: self.vars.clone(),
        }
    }
}

/// Weil cochain with a record of the chart variables, for printing.
#[pyclass(module = "weilform", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Cochain {
    inner: WeilCochain,
    vars: Vec<String>,
}

#[pymethods]
impl Cochain {
    #[getter]
    fn level(&self) -> usize {
        self.inner.level()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.value_rank()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn to_json(&self) -> String {
        cochain_to_json(&self.inner, &self.vars).to_string()
    }

    fn __add__(&self, other: PyRef<'_, Cochain>) -> PyResult<Cochain> {
        Ok(self.wrap(self.inner.checked_add(&other.inner).map_err(err)?))
    }

    fn __sub__(&self, other: PyRef<'_, Cochain>) -> PyResult<Cochain> {
        let neg = other.inner.neg();
        Ok(self.wrap(self.inner.checked_add(&neg).map_err(err)?))
    }

    fn scale(&self, c: &str) -> PyResult<Cochain> {
        Ok(self.wrap(self.inner.scale(&rational(c)?)))
    }

    fn __eq__(&self, other: PyRef<'_, Cochain>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Cochain(level={}, degree={}, rank={})",
            self.inner.level(),
            self.inner.degree(),
            self.inner.value_rank()
        )
    }
}

impl Cochain {
    fn wrap(&self, inner: WeilCochain) -> Cochain {
        Cochain {
            inner,
            vars: self.vars.clone(),
        }
    }
}

/// Lie algebroid given by structure functions in a global frame.
#[pyclass(module = "weilform", frozen)]
struct Algebroid {
    inner: AlgebroidPresentation,
    vars: Vec<String>,
}

#[pymethods]
impl Algebroid {
    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn chart_dim(&self) -> usize {
        self.inner.chart_dim()
    }

    fn validate(&self) -> Vec<(String, bool, String)> {
        checks(self.inner.validate())
    }

    #[pyo3(signature = (rank, level, degree, seed = 0))]
    fn random_cochain(&self, rank: usize, level: usize, degree: usize, seed: u64) -> Cochain {
        Cochain {
            inner: fixtures::random_cochain(&self.inner, rank, level, degree, seed),
            vars: self.vars.clone(),
        }
    }
}

/// IM connection on a bundle of ideals.
#[pyclass(module = "weilform", frozen)]
struct ImConnection {
    inner: IMConnection,
    vars: Vec<String>,
}

#[pymethods]
impl ImConnection {
    #[getter]
    fn cochain(&self) -> Cochain {
        self.wrap(self.inner.cochain().clone())
    }

    #[getter]
    fn ideal(&self) -> Vec<usize> {
        self.inner.ideal().indices().iter().map(|i| i + 1).collect()
    }

    fn random_cochain(&self, level: usize, degree: usize, seed: u64) -> Cochain {
        let m = self.inner.ideal().rank();
        self.wrap(fixtures::random_cochain(self.inner.algebroid(), m, level, degree, seed))
    }

    /// Weil differential through the adjoint representation on the ideal.
    fn delta(&self, c: PyRef<'_, Cochain>) -> PyResult<Cochain> {
        let rep = self.inner.ideal().adjoint_rep();
        Ok(self.wrap(weil::delta(self.inner.algebroid(), &rep, &c.inner).map_err(err)?))
    }

    fn dnabla(&self, c: PyRef<'_, Cochain>) -> PyResult<Cochain> {
        let conn = self.inner.coupling_connection();
        Ok(self.wrap(weil::dnabla_cochain(&conn, &c.inner).map_err(err)?))
    }

    fn hstar(&self, c: PyRef<'_, Cochain>) -> PyResult<Cochain> {
        Ok(self.wrap(ideals::hstar(&self.inner, &c.inner).map_err(err)?))
    }

    fn dhor(&self, c: PyRef<'_, Cochain>) -> PyResult<Cochain> {
        Ok(self.wrap(ideals::dhor(&self.inner, &c.inner).map_err(err)?))
    }

    fn is_horizontal(&self, c: PyRef<'_, Cochain>) -> bool {
        weil::is_horizontal(&c.inner, self.inner.ideal().indices())
    }

    fn check_im(&self, c: PyRef<'_, Cochain>) -> PyResult<Vec<(String, bool, String)>> {
        let rep = self.inner.ideal().adjoint_rep();
        Ok(checks(weil::check_im(self.inner.algebroid(), &rep, &c.inner).map_err(err)?))
    }

    fn curvature(&self) -> PyResult<Cochain> {
        Ok(self.wrap(ideals::curvature(&self.inner).map_err(err)?))
    }

    fn bianchi(&self) -> PyResult<Vec<(String, bool, String)>> {
        Ok(checks(ideals::bianchi_check(&self.inner).map_err(err)?))
    }

    fn coupling_checks(&self) -> PyResult<Vec<(String, bool, String)>> {
        Ok(checks(ideals::coupling_checks(&self.inner).map_err(err)?))
    }

    /// The connection shifted by `λ·L` for a horizontal IM form `L`.
    fn deform(&self, l: PyRef<'_, Cochain>, lam: &str) -> PyResult<ImConnection> {
        let inner = ideals::deform(&self.inner, &l.inner, &rational(lam)?).map_err(err)?;
        Ok(ImConnection {
            inner,
            vars: self.vars.clone(),
        })
    }
}

impl ImConnection {
    fn wrap(&self, inner: WeilCochain) -> Cochain {
        Cochain {
            inner,
            vars: self.vars.clone(),
        }
    }
}

/// Parsed spec file.
#[pyclass(module = "weilform", frozen)]
struct Spec {
    inner: SpecFile,
}

#[pymethods]
impl Spec {
    #[staticmethod]
    fn parse(src: &str) -> PyResult<Spec> {
        Ok(Spec {
            inner: SpecFile::parse(src).map_err(err)?,
        })
    }

    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Spec> {
        let fx = fixtures::fixture(name).map_err(err)?;
        Ok(Spec {
            inner: SpecFile::from_fixture(&fx),
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.variables.clone()
    }

    #[getter]
    fn algebroid(&self) -> Algebroid {
        Algebroid {
            inner: self.inner.algebroid.clone(),
            vars: self.inner.variables.clone(),
        }
    }

    #[getter]
    fn cochains(&self) -> Vec<Cochain> {
        self.inner
            .cochains
            .iter()
            .map(|c| Cochain {
                inner: c.clone(),
                vars: self.inner.variables.clone(),
            })
            .collect()
    }

    fn im_connection(&self) -> PyResult<Option<ImConnection>> {
        let imc = self.inner.imc().map_err(err)?;
        Ok(imc.map(|inner| ImConnection {
            inner,
            vars: self.inner.variables.clone(),
        }))
    }
}

#[pyfunction]
fn fixture_names() -> Vec<&'static str> {
    fixtures::FIXTURE_NAMES.to_vec()
}

#[pymodule]
fn weilform(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poly>()?;
    m.add_class::<Cochain>()?;
    m.add_class::<Algebroid>()?;
    m.add_class::<ImConnection>()?;
    m.add_class::<Spec>()?;
    m.add_function(wrap_pyfunction!(fixture_names, m)?)?;
    Ok(())
}
