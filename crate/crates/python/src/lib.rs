//! Python bindings: `Origami`, `Orbit` and the counting / index arithmetic.
//!
//! Permutations cross the boundary 0-based; the text forms (cycle notation,
//! canonical keys, cylinder specs) are the same as on the command line.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use origami_h2::congruence::{self, BadCase, OrbitLabel};
use origami_h2::enumeration;
use origami_h2::origami::Direction;
use origami_h2::{CanonicalKey, CylinderDiagram, MatrixZ, Orbit, Origami};

fn err(e: origami_h2::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Origami", module = "origami_h2_py", frozen)]
struct PyOrigami {
    inner: Origami,
}

#[pymethods]
impl PyOrigami {
    #[new]
    fn new(right: Vec<u32>, up: Vec<u32>) -> PyResult<Self> {
        Ok(PyOrigami {
            inner: Origami::new(right, up).map_err(err)?,
        })
    }

    /// Two lines of cycle notation, `right` then `up`, 1-based.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyOrigami {
            inner: text.parse().map_err(err)?,
        })
    }

    /// `1cyl(l1,l2,l3;t;h)`, `2cyl(h1,h2,w1,w2,t1,t2)` or `L(a,b)`.
    #[staticmethod]
    fn from_diagram(spec: &str) -> PyResult<Self> {
        let d: CylinderDiagram = spec.parse().map_err(err)?;
        Ok(PyOrigami { inner: d.build() })
    }

    #[staticmethod]
    fn from_key(key: &str) -> PyResult<Self> {
        let k: CanonicalKey = key.parse().map_err(err)?;
        Ok(PyOrigami {
            inner: k.to_origami(),
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn right(&self) -> Vec<u32> {
        self.inner.right().to_vec()
    }

    #[getter]
    fn up(&self) -> Vec<u32> {
        self.inner.up().to_vec()
    }

    fn is_in_h2(&self) -> bool {
        self.inner.is_in_h2()
    }

    fn is_primitive(&self) -> PyResult<bool> {
        self.inner.is_primitive().map_err(err)
    }

    fn canonical_key(&self) -> String {
        self.inner.canonical_key().to_string()
    }

    fn cylinder_diagram(&self, vertical: Option<bool>) -> PyResult<String> {
        let dir = if vertical.unwrap_or(false) {
            Direction::Vertical
        } else {
            Direction::Horizontal
        };
        Ok(self
            .inner
            .cylinder_decomposition(dir)
            .map_err(err)?
            .to_string())
    }

    fn integer_weierstrass_count(&self) -> PyResult<usize> {
        self.inner.integer_weierstrass_count().map_err(err)
    }

    fn u_orbit_width(&self) -> u64 {
        self.inner.u_orbit_width()
    }

    fn apply_t(&self) -> Self {
        PyOrigami {
            inner: self.inner.apply_t(),
        }
    }

    fn apply_s(&self) -> Self {
        PyOrigami {
            inner: self.inner.apply_s(),
        }
    }

    /// `[[a, b], [c, d]]` acting on the surface.
    fn apply_matrix(&self, a: i64, b: i64, c: i64, d: i64) -> PyResult<Self> {
        let m = MatrixZ::new(a, b, c, d).map_err(err)?;
        Ok(PyOrigami {
            inner: self.inner.apply_matrix(&m).map_err(err)?,
        })
    }

    fn stabilised_by(&self, a: i64, b: i64, c: i64, d: i64) -> PyResult<bool> {
        let m = MatrixZ::new(a, b, c, d).map_err(err)?;
        self.inner.stabilised_by(&m).map_err(err)
    }

    fn is_isomorphic(&self, other: &PyOrigami) -> bool {
        self.inner.is_isomorphic(&other.inner)
    }

    fn __eq__(&self, other: &PyOrigami) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Origami.from_key({:?})",
            self.inner.canonical_key().to_string()
        )
    }
}

#[pyclass(name = "Orbit", module = "origami_h2_py", frozen)]
struct PyOrbit {
    inner: Orbit,
}

#[pymethods]
impl PyOrbit {
    #[new]
    fn new(origami: &PyOrigami) -> PyResult<Self> {
        Ok(PyOrbit {
            inner: Orbit::compute(&origami.inner).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyOrbit {
            inner: Orbit::from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn level(&self) -> u64 {
        self.inner.level()
    }

    #[getter]
    fn cusp_widths(&self) -> Vec<u64> {
        self.inner.cusp_widths()
    }

    fn invariant(&self) -> PyResult<usize> {
        self.inner.invariant().map_err(err)
    }

    fn surfaces(&self) -> Vec<String> {
        self.inner
            .surfaces()
            .iter()
            .map(|k| k.to_string())
            .collect()
    }

    fn contains(&self, origami: &PyOrigami) -> bool {
        self.inner.contains(&origami.inner.canonical_key())
    }

    /// Certificate JSON, or `None` when the search is inconclusive.
    fn noncongruence_certificate(&self) -> PyResult<Option<String>> {
        let cert = congruence::noncongruence_search(&self.inner).map_err(err)?;
        Ok(cert.map(|c| serde_json::to_string(&c.to_json()).expect("certificates serialise")))
    }

    fn congruence_verify_level2(&self) -> PyResult<bool> {
        congruence::congruence_verify_level2(&self.inner).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }
}

fn label(s: &str) -> PyResult<OrbitLabel> {
    s.parse().map_err(err)
}

#[pyfunction]
fn principal_index(m: u64) -> PyResult<u128> {
    congruence::principal_index(m).map_err(err)
}

#[pyfunction]
fn relative_index(m: u64, level: u64) -> PyResult<u128> {
    congruence::relative_index(m, level).map_err(err)
}

#[pyfunction]
fn coprime_part(a: u64, b: u64) -> PyResult<u64> {
    congruence::coprime_part(a, b).map_err(err)
}

/// `lcm(1..n)` in factored text form, e.g. `2^2*3*5`.
#[pyfunction]
fn lcm_upto(n: u64) -> String {
    congruence::lcm_upto(n).to_string()
}

#[pyfunction]
fn expected_index(orbit_label: &str, n: u64) -> PyResult<u64> {
    congruence::expected_index(label(orbit_label)?, n).map_err(err)
}

#[pyfunction]
fn primitive_count_formula(n: u64) -> u64 {
    congruence::primitive_count_formula(n)
}

#[pyfunction]
fn enumerate_primitive(n: usize) -> PyResult<Vec<String>> {
    let keys = enumeration::enumerate_primitive(n).map_err(err)?;
    Ok(keys.iter().map(|k| k.to_string()).collect())
}

/// `(total, formula_total, a_count, b_count)`; the split is `None` unless
/// `n` is odd and at least 5.
#[pyfunction]
fn count_report(n: usize) -> PyResult<(u64, u64, Option<u64>, Option<u64>)> {
    let r = enumeration::count_report(n).map_err(err)?;
    Ok((
        r.total,
        r.formula_total,
        r.split.map(|s| s.a_count),
        r.split.map(|s| s.b_count),
    ))
}

#[pyfunction]
fn total_count_with_imprimitive(n: u64) -> PyResult<u64> {
    enumeration::total_count_with_imprimitive(n).map_err(err)
}

#[pyfunction]
fn smooth_p2m1_scan(limit: u64) -> Vec<u64> {
    congruence::smooth_p2m1_scan(limit)
}

/// `None` when not bad, otherwise `(r, s)` with `n - 3 = 2^r 3^s`.
#[pyfunction]
fn bad_case_classifier(n: u64) -> PyResult<Option<(u32, u32)>> {
    Ok(match congruence::bad_case_classifier(n).map_err(err)? {
        BadCase::NotBad => None,
        BadCase::Bad { r, s } => Some((r, s)),
    })
}

/// Rows `(n, d, δ)` in factored text form.
#[pyfunction]
fn table73() -> PyResult<Vec<(u64, String, String)>> {
    let rows = congruence::table73().map_err(err)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.n, r.d.to_string(), r.delta.to_string()))
        .collect())
}

#[pymodule]
fn origami_h2_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOrigami>()?;
    m.add_class::<PyOrbit>()?;
    m.add_function(wrap_pyfunction!(principal_index, m)?)?;
    m.add_function(wrap_pyfunction!(relative_index, m)?)?;
    m.add_function(wrap_pyfunction!(coprime_part, m)?)?;
    m.add_function(wrap_pyfunction!(lcm_upto, m)?)?;
    m.add_function(wrap_pyfunction!(expected_index, m)?)?;
    m.add_function(wrap_pyfunction!(primitive_count_formula, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_primitive, m)?)?;
    m.add_function(wrap_pyfunction!(count_report, m)?)?;
    m.add_function(wrap_pyfunction!(total_count_with_imprimitive, m)?)?;
    m.add_function(wrap_pyfunction!(smooth_p2m1_scan, m)?)?;
    m.add_function(wrap_pyfunction!(bad_case_classifier, m)?)?;
    m.add_function(wrap_pyfunction!(table73, m)?)?;
    Ok(())
}
