use pyo3::prelude::*;
use pyo3::types::PyDict;
use quatcomp_py::*;

#[test]
fn matrix_round_trips_through_planes() {
    let m = PyQMatrix::synthetic("synth:5x4:rank=2:scale=2:seed=1").unwrap();
    let (w, x, y, z) = m.planes();
    let back = PyQMatrix::new(5, 4, w, x, y, z).unwrap();
    assert!(back.__eq__(&m));
    assert!(PyQMatrix::new(2, 2, vec![0.0; 3], vec![0.0; 4], vec![0.0; 4], vec![0.0; 4]).is_err());
    assert!(PyQMatrix::from_json(&m.to_json().unwrap()).unwrap().__eq__(&m));
}

#[test]
fn config_overrides_and_validation() {
    let c = PySolverConfig::new("qtnn", 3, Some(1.5), None, None, None, Some(10), None, None, None).unwrap();
    assert_eq!((c.method(), c.rank(), c.rho(), c.step0(), c.max_outer()), ("qtnn", 3, 1.5, 0.005, 10));
    assert!(PySolverConfig::new("tnnr", 1, None, None, None, None, None, None, None, None).is_err());
    assert!(PySolverConfig::new("dwqtnn", 1, Some(0.9), None, None, None, None, None, None, None).is_err());
    assert!(PySolverConfig::new("dwqtnn", 1, None, None, None, None, None, None, None, Some("diag")).is_err());
}

#[test]
fn module_runs_from_python() {
    Python::attach(|py| {
        let module = PyModule::new(py, "quatcomp").unwrap();
        quatcomp_module(&module).unwrap();
        let locals = PyDict::new(py);
        locals.set_item("quatcomp", &module).unwrap();
        py.run(
            c"
truth = quatcomp.QMatrix.synthetic('synth:20x20:rank=1:scale=50:seed=2')
mask = quatcomp.Mask.from_pattern('random:p=0.4:seed=5', 20, 20)
rep = quatcomp.complete(mask.project(truth), mask, quatcomp.SolverConfig('dwqtnn', rank=1))
err = (rep.recovered - truth).frobenius_norm() / truth.frobenius_norm()
ok = rep.converged and mask.agrees(rep.recovered, truth) and err < 1e-2
try:
    quatcomp.qsvt(truth, -1.0)
    raised = False
except ValueError:
    raised = True
",
            None,
            Some(&locals),
        )
        .unwrap();
        let ok: bool = locals.get_item("ok").unwrap().unwrap().extract().unwrap();
        let raised: bool = locals.get_item("raised").unwrap().unwrap().extract().unwrap();
        assert!(ok && raised);
    });
}
