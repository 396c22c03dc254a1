use drh_core::cohft::{
    bernoulli, export_table, hain_dr1_two_point, hain_dr1_two_point_at, table_oracle, trivial_oracle,
    DrOracle, OracleKey, Query,
};
use drh_core::diffalg::parse_poly;
use drh_core::hierarchy::{color_multisets, hamiltonian, hodge_coefficient, metric_quadratic};
use drh_core::kdv::{chain, first_structure, lenard_next, second_structure, DEFAULT_DEPTH};
use drh_core::poisson::{bracket, flows};
use drh_core::scalar::rational;
use drh_core::{Error, LocalFunctional, Truncation};
use num_bigint::BigInt;

const TWO_COLORS: &str = r#"{
  "name": "two colors",
  "dimension": 2,
  "metric": [["0", "1"], ["1", "0"]],
  "unit": 1,
  "entries": [
    {"g": 0, "d": 0, "alpha": 1, "insertions": [1, 1], "poly": []},
    {"g": 0, "d": 0, "alpha": 1, "insertions": [1, 2], "poly": [{"coeff": "1", "exps": [0, 0]}]},
    {"g": 0, "d": 0, "alpha": 1, "insertions": [2, 2], "poly": []}
  ]
}"#;

#[test]
fn table_round_trip_keeps_the_unit_hamiltonian() {
    let o = trivial_oracle();
    let t = Truncation::genus_deg(2, 4);
    let mut keys = Vec::new();
    for g in 0..=2 {
        for n in 2..=4 {
            for colors in color_multisets(1, n) {
                keys.push(OracleKey::new(g, 0, 0, colors));
            }
        }
    }
    let json = serde_json::to_string_pretty(&export_table(&o, &keys)).unwrap();
    let table = table_oracle(&json).unwrap();
    let h = hamiltonian(&table, 0, 0, &t).unwrap();
    assert_eq!(h, metric_quadratic(table.spec()));
    assert_eq!(h.rep(), &parse_poly("1/2*u^2", 1).unwrap());
}

#[test]
fn two_color_table() {
    let table = table_oracle(TWO_COLORS).unwrap();
    let h = hamiltonian(&table, 0, 0, &Truncation::genus_deg(0, 2)).unwrap();
    assert_eq!(h.rep(), &parse_poly("u1*u2", 2).unwrap());
    assert_eq!(h, metric_quadratic(table.spec()));
    // genus-one data is absent, never zero
    let err = hamiltonian(&table, 0, 0, &Truncation::genus_deg(1, 2)).unwrap_err();
    assert!(matches!(err, Error::MissingOracleData { .. }));
}

#[test]
fn hain_two_point() {
    assert_eq!(hain_dr1_two_point(), rational(1, 24));
    for a in -4..=4i64 {
        let want = rational(a * a, 24);
        assert_eq!(hain_dr1_two_point_at(a), want);
        // with psi_1 the integral doubles
        let Query::Known(p) = trivial_oracle().dr_poly(&OracleKey::new(1, 1, 0, vec![0, 0])) else {
            panic!("known");
        };
        let v = p.evaluate(&[BigInt::from(a), BigInt::from(-a)]);
        assert_eq!(v.get(&0).cloned().unwrap_or_default(), want * BigInt::from(2));
    }
}

#[test]
fn bernoulli_coefficients() {
    let want = [(1, 24), (1, 1440), (1, 60480), (1, 2419200), (1, 95800320)];
    for (g, (n, d)) in (1..=5u32).zip(want) {
        assert_eq!(hodge_coefficient(g), rational(n, d), "g={g}");
    }
    assert_eq!(bernoulli(12), rational(-691, 2730));
}

#[test]
fn lenard_chain_matches_dr() {
    let chain = chain(DEFAULT_DEPTH).unwrap();
    let t = Truncation::unbounded();
    let k1 = first_structure();
    let o = trivial_oracle();
    let dr0 = hamiltonian(&o, 0, 0, &Truncation::genus_deg(1, 3)).unwrap();
    let dr1 = hamiltonian(&o, 0, 1, &Truncation::genus_deg(1, 3)).unwrap();
    assert_eq!(chain[0], dr0);
    assert_eq!(chain[1], dr1);
    for (d, h) in chain.iter().enumerate() {
        assert!(bracket(&dr1, h, &k1, &t).unwrap().is_zero(), "d={d}");
        let lead = parse_poly(&format!("u^{}", d + 2), 1).unwrap();
        let c = h.rep().hbar_part(0);
        assert_eq!(c.len(), 1);
        assert_eq!(c.terms().keys().next(), lead.terms().keys().next());
    }
}

#[test]
fn second_structure_generates_next_flow() {
    let chain = chain(3).unwrap();
    let t = Truncation::unbounded();
    for d in 0..3 {
        let k2 = second_structure().apply(&chain[d].var_gradient(), &t).unwrap();
        let f = flows(&chain[d + 1], &first_structure(), &t).unwrap();
        // proportional: c * K2 delta h_d = dx delta h_{d+1}
        let (k, c) = f[0].terms().iter().next().unwrap();
        let ratio = c / &k2[0].coeff(k);
        assert_eq!(k2[0].scale(&ratio), f[0], "d={d}");
    }
    let again = lenard_next(&chain[1], 1).unwrap();
    assert_eq!(again.rep(), chain[2].rep());
    assert!(lenard_next(&LocalFunctional::new(parse_poly("u_1^2", 1).unwrap()), 0).is_err());
}
