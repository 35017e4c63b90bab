use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::collections::BTreeMap;
use toric_exc::cohomology::CohomologyEngine;
use toric_exc::dataset;
use toric_exc::divisor::DivisorClass;
use toric_exc::intersection::{bondal_criterion, WallCriterion};
use toric_exc::quiver::{analyze, build_hom_tensor, hom_matrix, Collection, Verdict};

/// A smooth complete toric variety, presented by its fan and degree matrix.
#[pyclass]
struct Variety {
    inner: toric_exc::fan::ToricVariety,
}

fn err<E: ToString>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pymethods]
impl Variety {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.fan.dim
    }

    #[getter]
    fn picard_rank(&self) -> usize {
        self.inner.picard_rank()
    }

    #[getter]
    fn rays(&self) -> Vec<Vec<i64>> {
        self.inner.fan.rays.clone()
    }

    fn canonical_class(&self) -> Vec<i64> {
        self.inner.canonical_class().0
    }

    /// Cohomology of the line bundle with the given class, as a dict
    /// mapping degree to rank.
    fn cohomology(&self, class: Vec<i64>) -> PyResult<BTreeMap<usize, u64>> {
        if class.len() != self.inner.picard_rank() {
            return Err(err(format!(
                "class has {} coordinates, expected {}",
                class.len(),
                self.inner.picard_rank()
            )));
        }
        let engine = CohomologyEngine::new(&self.inner).map_err(err)?;
        let table = engine.cohomology_table(&DivisorClass(class)).map_err(err)?;
        Ok(table.entries().collect())
    }

    /// Graded Hom ranks between two line bundles, as a dict mapping degree
    /// to rank.
    fn hom(&self, src: Vec<i64>, dst: Vec<i64>) -> PyResult<BTreeMap<usize, u64>> {
        let engine = CohomologyEngine::new(&self.inner).map_err(err)?;
        let table = engine.hom_table(&DivisorClass(src), &DivisorClass(dst)).map_err(err)?;
        Ok(table.entries().collect())
    }

    /// Analyzes a candidate exceptional collection of line bundles.
    ///
    /// Returns a dict with "verdict" ("Orderable" / "NotOrderable") and
    /// either the ordering, strength flag and degree-0 Hom matrix, or the
    /// 2-cycle witness pair.
    fn analyze_collection<'py>(
        &self,
        py: Python<'py>,
        bundles: Vec<Vec<i64>>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let classes: Vec<DivisorClass> = bundles.into_iter().map(DivisorClass).collect();
        let collection = Collection::new(classes).map_err(err)?;
        let engine = CohomologyEngine::new(&self.inner).map_err(err)?;
        let tensor = build_hom_tensor(&engine, &collection, false).map_err(err)?;
        let verdict = analyze(&tensor);

        let out = PyDict::new(py);
        out.set_item("all_exceptional", verdict.all_exceptional)?;
        match verdict.verdict {
            Verdict::Orderable { ordering, strong } => {
                out.set_item("verdict", "Orderable")?;
                out.set_item("strong", strong)?;
                out.set_item("hom_matrix", hom_matrix(&tensor, &ordering))?;
                out.set_item("ordering", ordering)?;
            }
            Verdict::NotOrderable { witness } => {
                out.set_item("verdict", "NotOrderable")?;
                out.set_item("cycle", witness.cycle)?;
                out.set_item("pair", witness.pair)?;
                let fwd: BTreeMap<usize, u64> = witness.forward.entries().collect();
                let bwd: BTreeMap<usize, u64> = witness.backward.entries().collect();
                out.set_item("forward", fwd)?;
                out.set_item("backward", bwd)?;
            }
        }
        Ok(out)
    }

    /// Evaluates the numerical wall criterion: "Pass", or "Fail" with the
    /// offending wall's relation coefficients.
    fn bondal<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let out = PyDict::new(py);
        match bondal_criterion(&self.inner).map_err(err)? {
            WallCriterion::Pass => out.set_item("outcome", "Pass")?,
            WallCriterion::Fail { relation, .. } => {
                out.set_item("outcome", "Fail")?;
                let rays: Vec<Vec<i64>> = relation
                    .wall
                    .iter()
                    .map(|&r| self.inner.fan.rays[r].clone())
                    .collect();
                out.set_item("wall_rays", rays)?;
                out.set_item("coefficients", relation.coefficients)?;
            }
        }
        Ok(out)
    }
}

/// Loads a fixture JSON file and returns its variety together with the
/// stored candidate collection and expected verdict.
#[pyfunction]
fn load_fixture<'py>(py: Python<'py>, path: &str) -> PyResult<Bound<'py, PyDict>> {
    let f = dataset::load_fixture_file(std::path::Path::new(path)).map_err(err)?;
    let variety = f.variety().map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("id", &f.id)?;
    out.set_item("variety", Variety { inner: variety }.into_pyobject(py)?)?;
    out.set_item("collection", &f.collection)?;
    out.set_item(
        "expected_verdict",
        match f.expected_verdict {
            dataset::ExpectedVerdict::Orderable => "Orderable",
            dataset::ExpectedVerdict::NotOrderable => "NotOrderable",
        },
    )?;
    out.set_item("flags", &f.flags)?;
    Ok(out)
}

#[pymodule]
fn toricexc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Variety>()?;
    m.add_function(wrap_pyfunction!(load_fixture, m)?)?;
    Ok(())
}
