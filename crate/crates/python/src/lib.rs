//! Python bindings: the Steenrod algebra, Hom dimensions on both sides,
//! the comparison reports, the p-adic partitions and the verify suites.
//!
//! Structured results come back as plain dicts and lists.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use steenrod_poly::descriptor::Descriptor;
use steenrod_poly::hai_bridge::{bar_m, counterexample_report_for, free_module, full_faithfulness_report};
use steenrod_poly::padic_comb;
use steenrod_poly::steenrod::{self, AdemConvention};
use steenrod_poly::strictpoly::hom_p as core_hom_p;
use steenrod_poly::unstable::{hom_u as core_hom_u, TruncatedModule};
use steenrod_poly::verify::{default_ladder, default_trunc, run_suite, Suite, VerifyConfig};
use steenrod_poly::{Error, Prime};

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse(_) | Error::NotPrime(_) | Error::Precondition(_) | Error::SearchBound(..) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn prime(p: u32) -> PyResult<Prime> {
    Prime::new(p).map_err(err)
}

fn convention(name: &str) -> PyResult<AdemConvention> {
    match name {
        "printed" => Ok(AdemConvention::Printed),
        "signed" => Ok(AdemConvention::Signed),
        _ => Err(PyValueError::new_err(format!("unknown convention '{name}' (printed|signed)"))),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn descriptor(text: &str) -> PyResult<Descriptor> {
    text.parse::<Descriptor>().map_err(err)
}

fn module(d: &Descriptor, p: Prime, trunc: usize) -> PyResult<TruncatedModule> {
    match d {
        Descriptor::Functor(spec) => bar_m(spec, p, trunc),
        Descriptor::Free(n) => free_module(*n, p, trunc),
    }
    .map_err(err)
}

/// The mod p Steenrod algebra on the reduced powers.
#[pyclass(name = "SteenrodAlgebra", frozen)]
struct PySteenrodAlgebra {
    inner: Arc<steenrod::SteenrodAlgebra>,
}

#[pymethods]
impl PySteenrodAlgebra {
    #[new]
    #[pyo3(signature = (p, convention = "printed"))]
    fn new(p: u32, convention: &str) -> PyResult<Self> {
        let alg = steenrod::SteenrodAlgebra::new(prime(p)?, self::convention(convention)?);
        Ok(Self { inner: Arc::new(alg) })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.prime().value()
    }

    #[getter]
    fn convention(&self) -> String {
        format!("{:?}", self.inner.convention()).to_lowercase()
    }

    /// Admissible normal form of the composite `P^{i_1} ... P^{i_k}`.
    fn normalize(&self, word: Vec<u32>) -> Element {
        Element { inner: self.inner.normalize(&word), algebra: self.inner.clone() }
    }

    /// Parse text such as `"P2 P2 + P3 P1"`.
    fn parse(&self, text: &str) -> PyResult<Element> {
        let inner = steenrod::SteenrodElement::parse(text, &self.inner).map_err(err)?;
        Ok(Element { inner, algebra: self.inner.clone() })
    }

    fn monomial(&self, indices: Vec<u32>) -> Element {
        Element { inner: self.inner.monomial(&indices), algebra: self.inner.clone() }
    }

    fn __repr__(&self) -> String {
        format!("SteenrodAlgebra(p={}, convention='{}')", self.p(), self.convention())
    }
}

/// An element of the Steenrod algebra in admissible normal form.
#[pyclass(frozen)]
struct Element {
    inner: steenrod::SteenrodElement,
    algebra: Arc<steenrod::SteenrodAlgebra>,
}

#[pymethods]
impl Element {
    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    #[getter]
    fn degree(&self) -> Option<usize> {
        self.inner.degree()
    }

    /// `(indices, coefficient)` pairs.
    fn terms(&self) -> Vec<(Vec<u32>, u32)> {
        self.inner.terms().map(|(m, c)| (m.indices().to_vec(), c)).collect()
    }

    fn is_admissible(&self) -> bool {
        let p = self.inner.prime();
        self.inner.terms().all(|(m, _)| steenrod::is_admissible(m, p))
    }

    fn __mul__(&self, other: &Element) -> PyResult<Element> {
        let inner = self.algebra.multiply(&self.inner, &other.inner).map_err(err)?;
        Ok(Element { inner, algebra: self.algebra.clone() })
    }

    fn __add__(&self, other: &Element) -> PyResult<Element> {
        let inner = self.inner.add(&other.inner).map_err(err)?;
        Ok(Element { inner, algebra: self.algebra.clone() })
    }

    fn __eq__(&self, other: &Element) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element('{}')", self.inner)
    }
}

/// Shorthand for `SteenrodAlgebra(p).normalize(word)`.
#[pyfunction]
#[pyo3(signature = (word, p = 2, convention = "printed"))]
fn adem(word: Vec<u32>, p: u32, convention: &str) -> PyResult<Element> {
    PySteenrodAlgebra::new(p, convention).map(|a| a.normalize(word))
}

/// `dim Hom_P(F, G)` evaluated on `F_p^n` (default `n` = the degree).
#[pyfunction]
#[pyo3(signature = (source, target, p = 2, n = None))]
fn hom_p(source: &str, target: &str, p: u32, n: Option<usize>) -> PyResult<usize> {
    let f = descriptor(source)?.functor().map_err(err)?.clone();
    let g = descriptor(target)?.functor().map_err(err)?.clone();
    let n = n.unwrap_or(f.degree().max(g.degree()));
    Ok(core_hom_p(&f, &g, n, prime(p)?).map_err(err)?.dim())
}

/// `dim Hom_U` between the truncated modules, one value per ladder rung.
#[pyfunction]
#[pyo3(signature = (source, target, p = 2, ladder = None))]
fn hom_u(source: &str, target: &str, p: u32, ladder: Option<Vec<usize>>) -> PyResult<Vec<(usize, usize)>> {
    let p = prime(p)?;
    let ladder = ladder.unwrap_or_else(|| default_ladder(p));
    let top = *ladder.iter().max().ok_or_else(|| PyValueError::new_err("empty ladder"))?;
    let m = module(&descriptor(source)?, p, top)?;
    let n = module(&descriptor(target)?, p, top)?;
    let h = core_hom_u(&m, &n, top).map_err(err)?;
    Ok(ladder.iter().map(|&t| (t, h.dim_at(t))).collect())
}

/// Graded dimensions of a truncated module such as `"G(2,1)"` or `"F(2)"`.
#[pyfunction]
#[pyo3(signature = (descriptor, p = 2, trunc = None))]
fn module_dims(descriptor: &str, p: u32, trunc: Option<usize>) -> PyResult<Vec<(usize, usize)>> {
    let p = prime(p)?;
    let d = self::descriptor(descriptor)?;
    let m = module(&d, p, trunc.unwrap_or_else(|| default_trunc(p)))?;
    Ok(steenrod_poly::hai_bridge::dims(&m).into_iter().collect())
}

/// Comparison of `Hom_P(Γ^λ, S^{d;m})` with `Hom_U` of the truncated images.
#[pyfunction]
#[pyo3(signature = (lam, m, p = 2, ladder = None))]
fn faithfulness_report<'py>(
    py: Python<'py>,
    lam: Vec<usize>,
    m: usize,
    p: u32,
    ladder: Option<Vec<usize>>,
) -> PyResult<Bound<'py, PyAny>> {
    let p = prime(p)?;
    let ladder = ladder.unwrap_or_else(|| default_ladder(p));
    to_py(py, &full_faithfulness_report(&lam, m, p, &ladder).map_err(err)?)
}

/// Both sides for `Γ^a → Γ^1`; `a = 2` is the standard pair.
#[pyfunction]
#[pyo3(signature = (p = 2, a = 2, trunc = 32))]
fn counterexample<'py>(py: Python<'py>, p: u32, a: usize, trunc: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &counterexample_report_for(prime(p)?, a, trunc).map_err(err)?)
}

/// Digits `(c, e)` with `n = Σ c p^e`.
#[pyfunction]
#[pyo3(signature = (n, p = 2))]
fn p_adic(n: u64, p: u32) -> PyResult<Vec<(u64, u32)>> {
    Ok(padic_comb::p_adic(n, prime(p)?).digits)
}

/// Split indices of the power list by the p-adic digits of `n`, or by
/// explicit `targets` when given.
#[pyfunction]
#[pyo3(signature = (powers, n = None, targets = None, p = 2))]
fn partition(powers: Vec<u32>, n: Option<u64>, targets: Option<Vec<u64>>, p: u32) -> PyResult<Vec<Vec<usize>>> {
    let p = prime(p)?;
    let part = match targets {
        Some(t) => padic_comb::partition_distinct_sums(&powers, &t, p),
        None => {
            let n = n.unwrap_or_else(|| powers.iter().map(|&e| (p.value() as u64).pow(e)).sum());
            padic_comb::partition_powers(&powers, n, p)
        }
    };
    Ok(part.map_err(err)?.blocks)
}

/// Every valid partition for the targets, by exhaustive search.
#[pyfunction]
#[pyo3(signature = (powers, targets, p = 2))]
fn brute_force_partition(powers: Vec<u32>, targets: Vec<u64>, p: u32) -> PyResult<Vec<Vec<Vec<usize>>>> {
    let all = padic_comb::brute_force_partition(&powers, &targets, prime(p)?).map_err(err)?;
    Ok(all.into_iter().map(|q| q.blocks).collect())
}

#[pyfunction]
#[pyo3(signature = (lam, delta, powers, p = 2))]
fn block_partition<'py>(
    py: Python<'py>,
    lam: Vec<usize>,
    delta: u32,
    powers: Vec<u32>,
    p: u32,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &padic_comb::block_partition(&lam, delta, &powers, prime(p)?).map_err(err)?)
}

/// Run a verify suite; returns one dict per check.
#[pyfunction]
#[pyo3(signature = (suite = "all", p = 2, quick = true, seed = 0, trunc = None))]
fn verify<'py>(
    py: Python<'py>,
    suite: &str,
    p: u32,
    quick: bool,
    seed: u64,
    trunc: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let suite: Suite = suite.parse().map_err(err)?;
    let mut cfg = VerifyConfig::new(prime(p)?);
    cfg.quick = quick;
    cfg.seed = seed;
    if let Some(t) = trunc {
        cfg.trunc = t;
    }
    let checks = py.detach(|| run_suite(suite, &cfg));
    to_py(py, &checks)
}

#[pymodule]
fn steenpoly(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySteenrodAlgebra>()?;
    m.add_class::<Element>()?;
    m.add_function(wrap_pyfunction!(adem, m)?)?;
    m.add_function(wrap_pyfunction!(hom_p, m)?)?;
    m.add_function(wrap_pyfunction!(hom_u, m)?)?;
    m.add_function(wrap_pyfunction!(module_dims, m)?)?;
    m.add_function(wrap_pyfunction!(faithfulness_report, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(p_adic, m)?)?;
    m.add_function(wrap_pyfunction!(partition, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_partition, m)?)?;
    m.add_function(wrap_pyfunction!(block_partition, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
