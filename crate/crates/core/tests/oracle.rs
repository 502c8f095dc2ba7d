mod common;

use common::{atom, oracle_c3, ORACLE_SEPARATIONS};
use graphene_vdw::graphene::GrapheneModel;
use graphene_vdw::lifshitz::{c3_zero_temperature, LifshitzRequest};

fn compare(name: &str, model: GrapheneModel) {
    let spec = atom(name);
    for a in ORACLE_SEPARATIONS {
        let adaptive = c3_zero_temperature(&LifshitzRequest::new(spec.clone(), model, a))
            .unwrap()
            .c3;
        let brute = oracle_c3(&spec, &model, a, 2048);
        let rel = (adaptive / brute - 1.0).abs();
        assert!(rel < 1e-6, "{name} {model} a={a}: adaptive {adaptive} oracle {brute} rel {rel:e}");
    }
}

#[test]
fn hydrodynamic_matches_fixed_grid() {
    for name in ["H", "H2", "He*", "Na"] {
        compare(name, GrapheneModel::hydrodynamic());
    }
}

#[test]
fn dirac_matches_fixed_grid() {
    for name in ["H", "H2", "He*", "Na"] {
        compare(name, GrapheneModel::dirac(0.1).unwrap());
    }
}

#[test]
fn massless_dirac_matches_fixed_grid() {
    let model = GrapheneModel::dirac(1e-15).unwrap();
    let spec = atom("He*");
    for a in [3.0, 30.0] {
        let adaptive = c3_zero_temperature(&LifshitzRequest::new(spec.clone(), model, a)).unwrap().c3;
        let brute = oracle_c3(&spec, &model, a, 1024);
        assert!((adaptive / brute - 1.0).abs() < 1e-6);
    }
}
