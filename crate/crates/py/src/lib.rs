//! Python bindings. Every function returns plain Python data built from the
//! same JSON reports the command line tool prints.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::{json, Value};

use massey_core::dga::MultiDegree;
use massey_core::face::{
    golod_test, hochster_table, mask_of, rk_model, support_class, triple_massey_scan, zk_massey, SimplicialComplex,
};
use massey_core::generators;
use massey_core::io::{betti_to_json, complex_from_json, complex_to_json, named_lie, outcome_json, parse_form, ring_from_json};
use massey_core::lie::{ce_window, GradedLie};
use massey_core::massey::{massey_product, MasseyOptions, Triviality};
use massey_core::resolution::golod_series_check;
use massey_core::{Error, Field};

fn err(e: Error) -> PyErr {
    match e {
        Error::Internal(m) => PyRuntimeError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (v.to_string(),))?.unbind())
}

fn field(name: &str) -> PyResult<Field> {
    Field::parse(name).map_err(err)
}

fn complex(text: &str) -> PyResult<SimplicialComplex> {
    complex_from_json(text).map_err(err)
}

/// `{(q, w): dim}` of the Witt algebra window, as a list of rows.
#[pyfunction]
#[pyo3(signature = (qmax=3, wmax=16, field_name="q"))]
fn goncharova(py: Python<'_>, qmax: usize, wmax: i32, field_name: &str) -> PyResult<Py<PyAny>> {
    let f = field(field_name)?;
    let cx = ce_window(GradedLie::witt_plus(wmax.max(2) as usize, f).map_err(err)?, qmax, wmax).map_err(err)?;
    let mut rows = Vec::new();
    for q in 0..=qmax {
        for w in 0..=wmax {
            let d = cx.cohomology_at(&MultiDegree::new(q as i32, vec![w])).map_err(err)?.dim();
            rows.push(json!({"q": q, "w": w, "dim": d}));
        }
    }
    to_py(py, &Value::Array(rows))
}

/// Massey product of forms such as `"e1"` or `"e2^e5 - 3*e3^e4"` in `m0` or `witt_plus`.
#[pyfunction]
#[pyo3(signature = (algebra, classes, wmax, full_scope=false, budget=8, field_name="q"))]
fn lie_massey(
    py: Python<'_>,
    algebra: &str,
    classes: Vec<String>,
    wmax: usize,
    full_scope: bool,
    budget: usize,
    field_name: &str,
) -> PyResult<Py<PyAny>> {
    let f = field(field_name)?;
    let forms = classes.iter().map(|c| parse_form(c, f)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let coh: usize = forms
        .iter()
        .map(|x| x.terms.keys().next().map(|m| m.count_ones() as usize).unwrap_or(1))
        .sum();
    let qmax = (coh + 3).saturating_sub(forms.len());
    let cx = ce_window(named_lie(algebra, wmax, f).map_err(err)?, qmax, wmax as i32).map_err(err)?;
    let opts = MasseyOptions {
        homogeneous: !full_scope,
        budget,
        ..MasseyOptions::default()
    };
    let o = massey_product(&cx, &forms, &opts).map_err(err)?;
    to_py(py, &outcome_json(&cx, &o).map_err(err)?)
}

/// Multigraded Betti table of a complex given as JSON.
#[pyfunction]
#[pyo3(signature = (complex_json, field_name="q"))]
fn betti(py: Python<'_>, complex_json: &str, field_name: &str) -> PyResult<Py<PyAny>> {
    let t = hochster_table(&complex(complex_json)?, field(field_name)?).map_err(err)?;
    to_py(py, &betti_to_json(&t))
}

#[pyfunction]
#[pyo3(signature = (complex_json, order_cap=None, field_name="q"))]
fn golod(py: Python<'_>, complex_json: &str, order_cap: Option<usize>, field_name: &str) -> PyResult<Py<PyAny>> {
    let k = complex(complex_json)?;
    let cap = order_cap.unwrap_or_else(|| massey_core::face::default_order_cap(&k));
    let r = golod_test(&k, field(field_name)?, cap).map_err(err)?;
    let v = json!({
        "verdict": r.verdict.label(),
        "trivial_multiplication": r.trivial_multiplication,
        "massey_trivial_up_to_cap": r.massey_trivial_up_to_cap,
        "order_cap": r.order_cap,
    });
    to_py(py, &v)
}

/// Massey product of the lowest-degree classes of the induced subcomplexes on `supports`.
#[pyfunction]
#[pyo3(signature = (complex_json, supports, field_name="q"))]
fn zk_massey_product(py: Python<'_>, complex_json: &str, supports: Vec<Vec<usize>>, field_name: &str) -> PyResult<Py<PyAny>> {
    let f = field(field_name)?;
    let k = complex(complex_json)?;
    let classes = supports
        .iter()
        .map(|s| support_class(&k, s, None, f))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let r = zk_massey(&k, &classes, f, &MasseyOptions::default()).map_err(err)?;
    let model = rk_model(&k, f).map_err(err)?;
    let masks: Vec<u32> = supports.iter().map(|s| mask_of(s)).collect();
    let v = json!({
        "supports": supports,
        "masks": masks,
        "mainlemma": {"cond1": r.mainlemma.cond1, "cond2": r.mainlemma.cond2},
        "outcome": outcome_json(&model, &r.outcome).map_err(err)?,
    });
    to_py(py, &v)
}

/// Number of scanned and of nontrivial triple products of missing-edge classes.
#[pyfunction]
#[pyo3(signature = (complex_json, field_name="q"))]
fn triple_scan(complex_json: &str, field_name: &str) -> PyResult<(usize, usize)> {
    let entries = triple_massey_scan(&complex(complex_json)?, field(field_name)?).map_err(err)?;
    let hits = entries.iter().filter(|e| e.outcome.triviality == Triviality::Nontrivial).count();
    Ok((entries.len(), hits))
}

/// Poincaré series and Serre bound of a finite monomial ring given as JSON.
#[pyfunction]
#[pyo3(signature = (ring_json, terms=6, field_name="q"))]
fn poincare(py: Python<'_>, ring_json: &str, terms: usize, field_name: &str) -> PyResult<Py<PyAny>> {
    let a = ring_from_json(ring_json, field(field_name)?).map_err(err)?;
    let c = golod_series_check(&a, terms).map_err(err)?;
    to_py(py, &serde_json::to_value(&c).map_err(|e| PyRuntimeError::new_err(e.to_string()))?)
}

/// Named complexes as JSON text: `cube`, `qn`, `polygon`, `dodecahedron`.
#[pyfunction]
#[pyo3(signature = (kind, n=None))]
fn generate(kind: &str, n: Option<usize>) -> PyResult<String> {
    let need = || n.ok_or_else(|| PyValueError::new_err(format!("{kind} needs n")));
    let k = match kind {
        "cube" => generators::cube(need()?),
        "qn" => generators::qn(need()?),
        "polygon" => generators::polygon(need()?),
        "dodecahedron" => generators::dodecahedron_nerve(),
        other => return Err(PyValueError::new_err(format!("unknown complex {other:?}"))),
    }
    .map_err(err)?;
    Ok(complex_to_json(&k).to_string())
}

#[pymodule]
fn massey(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(goncharova, m)?)?;
    m.add_function(wrap_pyfunction!(lie_massey, m)?)?;
    m.add_function(wrap_pyfunction!(betti, m)?)?;
    m.add_function(wrap_pyfunction!(golod, m)?)?;
    m.add_function(wrap_pyfunction!(zk_massey_product, m)?)?;
    m.add_function(wrap_pyfunction!(triple_scan, m)?)?;
    m.add_function(wrap_pyfunction!(poincare, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    Ok(())
}
