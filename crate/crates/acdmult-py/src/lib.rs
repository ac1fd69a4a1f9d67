//! Python bindings: descriptors and multiplications as classes, deciders as
//! module functions. JSON is the interchange format on both sides, matching
//! the CLI formats byte for byte.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use acdmult::{Error, GenConfig, GroupDescriptor, MultElement, UnitConfig};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::CapExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(kind: &str, text: &str) -> PyResult<T> {
    serde_json::from_str(text)
        .map_err(|e| PyValueError::new_err(format!("malformed {kind}: {e}")))
}

fn unit_config(minus_one: bool, cap: usize) -> UnitConfig {
    UnitConfig {
        include_minus_one: minus_one,
        cap,
    }
}

/// A group descriptor: critical types, ranks, invariants, and numerators.
#[pyclass(module = "acdmult_py")]
struct Descriptor {
    inner: GroupDescriptor,
}

#[pymethods]
impl Descriptor {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Descriptor {
            inner: parse_json("descriptor", text)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("descriptor serializes")
    }

    /// Violated invariants as strings; empty means valid.
    fn violations(&self) -> Vec<String> {
        self.inner.violations().iter().map(|v| v.to_string()).collect()
    }

    /// Raises ValueError when any invariant is violated.
    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(to_py_err)
    }

    fn canonical(&self) -> PyResult<Descriptor> {
        Ok(Descriptor {
            inner: self.inner.canonicalize().map_err(to_py_err)?,
        })
    }

    fn is_rigid(&self) -> bool {
        self.inner.is_rigid()
    }

    fn is_clipped(&self) -> bool {
        self.inner.is_clipped()
    }

    fn is_proper(&self) -> bool {
        self.inner.is_proper()
    }

    fn regulator_index(&self) -> PyResult<u64> {
        self.inner.regulator_index().map_err(to_py_err)
    }

    fn total_rank(&self) -> u64 {
        self.inner.total_rank()
    }

    /// The descriptor of the multiplication group.
    fn mult(&self) -> PyResult<Descriptor> {
        Ok(Descriptor {
            inner: acdmult::mult_of(&self.inner).map_err(to_py_err)?,
        })
    }

    /// The clipped part and the completely decomposable part, either of
    /// which may be None.
    fn main_decomposition(&self) -> PyResult<(Option<Descriptor>, Option<Descriptor>)> {
        let (g1, c) = self.inner.main_decomposition().map_err(to_py_err)?;
        Ok((
            g1.map(|inner| Descriptor { inner }),
            c.map(|inner| Descriptor { inner }),
        ))
    }

    fn __repr__(&self) -> String {
        format!("Descriptor({})", self.to_json())
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        other
            .extract::<PyRef<Descriptor>>()
            .map(|o| o.inner == self.inner)
            .unwrap_or(false)
    }
}

/// A multiplication candidate, rank-one shorthand or full block form.
#[pyclass(module = "acdmult_py")]
struct Multiplication {
    inner: MultElement,
}

#[pymethods]
impl Multiplication {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Multiplication {
            inner: parse_json("multiplication", text)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("multiplication serializes")
    }

    fn add(&self, other: &Multiplication) -> PyResult<Multiplication> {
        Ok(Multiplication {
            inner: self.inner.add(&other.inner).map_err(to_py_err)?,
        })
    }

    fn neg(&self) -> Multiplication {
        Multiplication {
            inner: self.inner.neg(),
        }
    }

    fn __repr__(&self) -> String {
        format!("Multiplication({})", self.to_json())
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        other
            .extract::<PyRef<Multiplication>>()
            .map(|o| o.inner == self.inner)
            .unwrap_or(false)
    }
}

#[pyfunction]
fn near_iso(a: &Descriptor, b: &Descriptor) -> PyResult<bool> {
    acdmult::near_iso(&a.inner, &b.inner).map_err(to_py_err)
}

/// Isomorphism verdict; the certificate is available from `iso_witness`.
#[pyfunction]
#[pyo3(signature = (a, b, *, minus_one = true, cap = acdmult::DEFAULT_CAP))]
fn iso(a: &Descriptor, b: &Descriptor, minus_one: bool, cap: usize) -> PyResult<bool> {
    Ok(acdmult::iso(&a.inner, &b.inner, &unit_config(minus_one, cap))
        .map_err(to_py_err)?
        .is_some())
}

/// JSON certificate decomposing the numerator ratio, or None.
#[pyfunction]
#[pyo3(signature = (a, b, *, minus_one = true, cap = acdmult::DEFAULT_CAP))]
fn iso_witness(
    a: &Descriptor,
    b: &Descriptor,
    minus_one: bool,
    cap: usize,
) -> PyResult<Option<String>> {
    Ok(acdmult::iso(&a.inner, &b.inner, &unit_config(minus_one, cap))
        .map_err(to_py_err)?
        .map(|w| serde_json::to_string(&w).expect("witness serializes")))
}

#[pyfunction]
#[pyo3(signature = (g, *, minus_one = true, cap = acdmult::DEFAULT_CAP))]
fn self_mult_iso(g: &Descriptor, minus_one: bool, cap: usize) -> PyResult<bool> {
    Ok(
        acdmult::self_mult_iso(&g.inner, &unit_config(minus_one, cap))
            .map_err(to_py_err)?
            .is_some(),
    )
}

#[pyfunction]
fn realizable(m: &Descriptor) -> PyResult<bool> {
    acdmult::realizable(&m.inner).map_err(to_py_err)
}

#[pyfunction]
fn realize(m: &Descriptor) -> PyResult<Descriptor> {
    Ok(Descriptor {
        inner: acdmult::realize(&m.inner).map_err(to_py_err)?,
    })
}

/// The scalar witness `k` modulo the regulator index, or None when the
/// multiplication lies outside the multiplication group.
#[pyfunction]
fn mult_member(g: &Descriptor, u: &Multiplication) -> PyResult<Option<u64>> {
    Ok(acdmult::mult_contains(&g.inner, &u.inner)
        .map_err(to_py_err)?
        .map(|w| w.k))
}

/// JSON witness with the unit scalar mapping one ring onto the other, or
/// None when the rings are not isomorphic.
#[pyfunction]
#[pyo3(signature = (g, u, v, *, cap = acdmult::DEFAULT_CAP))]
fn ring_iso(
    g: &Descriptor,
    u: &Multiplication,
    v: &Multiplication,
    cap: usize,
) -> PyResult<Option<String>> {
    let cfg = unit_config(true, cap);
    Ok(acdmult::ring_iso(&g.inner, &u.inner, &v.inner, &cfg)
        .map_err(to_py_err)?
        .map(|w| serde_json::to_string(&w).expect("witness serializes")))
}

#[pyfunction]
#[pyo3(signature = (seed, *, max_types = 4, max_rank = 3, prime_pool = None, modulus_pool = None))]
fn gen_random(
    seed: u64,
    max_types: u32,
    max_rank: u64,
    prime_pool: Option<Vec<u64>>,
    modulus_pool: Option<Vec<u64>>,
) -> PyResult<Descriptor> {
    let defaults = GenConfig::default();
    let cfg = GenConfig {
        seed,
        max_types,
        max_rank,
        prime_pool: prime_pool.unwrap_or(defaults.prime_pool),
        modulus_pool: modulus_pool.unwrap_or(defaults.modulus_pool),
    };
    Ok(Descriptor {
        inner: acdmult::random_descriptor(&cfg).map_err(to_py_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (k, p, *, minus_one = true))]
fn example_4_9(k: u32, p: u64, minus_one: bool) -> PyResult<Descriptor> {
    let cfg = unit_config(minus_one, acdmult::DEFAULT_CAP);
    Ok(Descriptor {
        inner: acdmult::example_4_9(k, p, &cfg).map_err(to_py_err)?,
    })
}

#[pymodule]
fn acdmult_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Descriptor>()?;
    m.add_class::<Multiplication>()?;
    m.add_function(wrap_pyfunction!(near_iso, m)?)?;
    m.add_function(wrap_pyfunction!(iso, m)?)?;
    m.add_function(wrap_pyfunction!(iso_witness, m)?)?;
    m.add_function(wrap_pyfunction!(self_mult_iso, m)?)?;
    m.add_function(wrap_pyfunction!(realizable, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(mult_member, m)?)?;
    m.add_function(wrap_pyfunction!(ring_iso, m)?)?;
    m.add_function(wrap_pyfunction!(gen_random, m)?)?;
    m.add_function(wrap_pyfunction!(example_4_9, m)?)?;
    Ok(())
}
