mod support;

use lmpcirc_core::analysis::congestion_impact;
use lmpcirc_core::circuit::{
    build_circuit, kcl_residuals, solve_circuit, solve_voltage_form, superpose, to_voltage_sources, CurrentSource,
    EquivalentCircuit, Resistor,
};
use lmpcirc_core::dcopf::solve_opf;
use lmpcirc_core::linalg::Lu;
use lmpcirc_core::Error;
use support::{congested_corpus, load_example, nodal_oracle};

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn circuit_reproduces_prices_on_corpus() {
    for inst in congested_corpus(5000, 80) {
        let c = build_circuit(&inst.net, &inst.sol).unwrap();
        let s = solve_circuit(&c).unwrap();
        assert_eq!(s.voltages[c.ground()], 0.0);
        assert!(max_diff(&s.prices(c.offset()), &inst.sol.lmp) <= 1e-6, "seed {}", inst.seed);

        // independent nodal solve with nalgebra
        let branches: Vec<_> = c.resistors().iter().map(|r| (r.from, r.to, r.conductance())).collect();
        let oracle = nodal_oracle(c.nodes(), &branches, &c.injections(c.sources()), c.ground());
        assert!(max_diff(&s.voltages, &oracle) <= 1e-8);

        // each branch current obeys Ohm's law against node voltages
        for (r, i) in c.resistors().iter().zip(&s.branch_currents) {
            assert!((i - (s.voltages[r.from] - s.voltages[r.to]) / r.ohms).abs() <= 1e-9);
        }
        assert!(kcl_residuals(&c, &s).iter().all(|r| r.abs() <= 1e-8));

        let sup = superpose(&c).unwrap();
        let parts = sup.per_source.as_ref().unwrap();
        assert_eq!(parts.len(), c.sources().len());
        let summed: Vec<f64> = (0..c.nodes()).map(|k| parts.iter().map(|p| p[k]).sum()).collect();
        assert!(max_diff(&summed, &s.voltages) <= 1e-8, "seed {}", inst.seed);

        let view = to_voltage_sources(&c);
        for (back, orig) in view.to_current_sources().iter().zip(c.sources()) {
            assert_eq!((back.resistor, back.from, back.to), (orig.resistor, orig.from, orig.to));
            assert!((back.amps - orig.amps).abs() <= 1e-12 * orig.amps);
        }
        let v = solve_voltage_form(&c, &view).unwrap();
        assert!(max_diff(&v, &s.voltages) <= 1e-8, "seed {}", inst.seed);
    }
}

#[test]
fn ground_reduced_conductance_is_invertible() {
    for inst in congested_corpus(7000, 20) {
        let c = build_circuit(&inst.net, &inst.sol).unwrap();
        let g = c.conductance_matrix();
        assert!(g.is_symmetric(1e-12));
        assert!(Lu::new(&g, 1e-12).is_err());
        assert!(Lu::new(&g.without(c.ground()), 1e-12).is_ok());
    }
}

#[test]
fn seven_bus_circuit_from_the_opf() {
    let net = load_example("case7_reconstructed.json");
    let sol = solve_opf(&net).unwrap();
    let c = build_circuit(&net, &sol).unwrap();
    assert_eq!((c.ground(), c.offset()), (1, 0.0));
    assert!(c.resistors().iter().all(|r| r.ohms == 1.0));
    let sources: Vec<(usize, usize, f64)> = c.sources().iter().map(|s| (s.from, s.to, s.amps)).collect();
    assert_eq!(sources.len(), 2);
    assert_eq!((sources[0].0, sources[0].1), (5, 0));
    assert!((sources[0].2 - 112.5).abs() < 1e-9);
    assert_eq!((sources[1].0, sources[1].1), (1, 3));
    assert!((sources[1].2 - 180.0).abs() < 1e-9);

    // the 112.5 source alone pulls most buses below ground
    let impact = congestion_impact(&c).unwrap();
    let first = &impact.sources[0];
    assert!(first.negative_buses.len() * 2 > c.nodes(), "{:?}", first.contribution);
    assert!(impact.sources[1].negative_buses.is_empty());
}

#[test]
fn uncongested_solution_has_no_circuit() {
    let text = r#"{
      "buses": [{"id": 0, "demand": 0}, {"id": 1, "demand": 10}, {"id": 2, "demand": 10}],
      "lines": [{"from": 0, "to": 1, "susceptance": 1}, {"from": 1, "to": 2, "susceptance": 1}, {"from": 0, "to": 2, "susceptance": 1}],
      "injectors": [{"bus": 0, "kind": "generator", "cost": 12, "p_min": 0, "p_max": 100}]
    }"#;
    let net = lmpcirc_core::network::parse_network::<f64>(text).unwrap();
    let sol = solve_opf(&net).unwrap();
    assert!(matches!(build_circuit(&net, &sol), Err(Error::NoCongestion)));
}

#[test]
fn malformed_circuits_are_rejected() {
    let r = |from, to| Resistor { from, to, ohms: 1.0 };
    let src = |resistor, from, to, amps| CurrentSource { resistor, from, to, amps };
    let tri = || vec![r(0, 1), r(1, 2), r(0, 2)];
    assert!(EquivalentCircuit::new(3, tri(), vec![src(0, 0, 1, 5.0)], 0, 0.0).is_ok());
    assert!(EquivalentCircuit::new(3, tri(), vec![src(0, 1, 2, 5.0)], 0, 0.0).is_err());
    assert!(EquivalentCircuit::new(3, tri(), vec![src(0, 0, 1, 5.0), src(0, 1, 0, 1.0)], 0, 0.0).is_err());
    assert!(EquivalentCircuit::new(3, tri(), vec![src(0, 0, 1, -5.0)], 0, 0.0).is_err());
    assert!(EquivalentCircuit::new(3, tri(), vec![src(0, 0, 1, 5.0)], 3, 0.0).is_err());
    assert!(matches!(
        EquivalentCircuit::new(4, tri(), vec![src(0, 0, 1, 5.0)], 0, 0.0),
        Err(Error::Disconnected { .. })
    ));
}
