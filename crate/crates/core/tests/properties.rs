//! Seeded property suites over random differential polynomials, mode
//! series and local functionals.

use drh_core::diffalg::{antiderivative, is_total_derivative, parse_poly, to_plain, var_derivative};
use drh_core::fourier::{b_equal, mode_pairing, p_bracket, q_inverse, t0, z_extend, BSeries};
use drh_core::matrix::{invert, Matrix};
use drh_core::poisson::{bracket, jacobi_defect, HamOperator};
use drh_core::sampling::{self, Shape, SEED};
use drh_core::{DiffPoly, JetVar, LocalFunctional, Scalar, Truncation};
use proptest::prelude::*;

const CASES: u64 = 24;

fn metric2() -> Matrix {
    vec![
        vec![Scalar::from_int(1), Scalar::from_int(2)],
        vec![Scalar::from_int(2), Scalar::from_int(-1)],
    ]
}

fn shapes() -> Vec<Shape> {
    vec![
        Shape { terms: 5, min_arity: 2, max_arity: 3, ..Shape::new(1) },
        Shape { terms: 4, min_arity: 2, max_arity: 3, genus_max: 1, graded: Some(0), ..Shape::new(2) },
    ]
}

/// Drops arity-one terms, whose classes other than `int u^a dx` lie in the image of `dx`.
fn without_linear(p: &DiffPoly) -> DiffPoly {
    p.filter_terms(|k| k.mono.arity() != 1, false)
}

#[test]
fn t0_after_q_inverse_is_identity() {
    let mut rng = sampling::rng(SEED);
    for shape in shapes() {
        for _ in 0..CASES {
            let s = sampling::series(&mut rng, &shape);
            let back = t0(&q_inverse(&s).unwrap());
            assert!(b_equal(&back, &s), "{s:?}");
        }
    }
}

#[test]
fn q_inverse_after_t0_is_identity_off_the_kernel() {
    let mut rng = sampling::rng(SEED + 1);
    for shape in shapes() {
        let shape = Shape { min_arity: 0, ..shape };
        for _ in 0..CASES {
            let f = LocalFunctional::new(without_linear(&sampling::poly(&mut rng, &shape)));
            let back = q_inverse(&t0(&f)).unwrap();
            assert!(back.lf_equal(&f), "{}", to_plain(f.rep()));
            assert_eq!(back.rep(), &f.normal_form());
        }
    }
}

#[test]
fn linear_functionals_are_the_kernel() {
    let mut rng = sampling::rng(SEED + 2);
    for dim in 1..=3 {
        for a in 0..dim {
            for k in 0..4 {
                let f = LocalFunctional::new(DiffPoly::var(dim, a, k));
                assert!(t0(&f).is_zero());
            }
        }
    }
    for _ in 0..CASES {
        let shape = Shape { min_arity: 1, max_arity: 1, ..Shape::new(2) };
        assert!(t0(&sampling::functional(&mut rng, &shape)).is_zero());
    }
}

#[test]
fn t0_respects_the_image_of_dx() {
    let mut rng = sampling::rng(SEED + 3);
    for shape in shapes() {
        for _ in 0..CASES {
            let p = sampling::poly(&mut rng, &shape);
            let exact = LocalFunctional::new(p.dx());
            assert!(t0(&exact).canonical().is_empty());
        }
    }
}

#[test]
fn bracket_intertwines_with_mode_bracket() {
    let mut rng = sampling::rng(SEED + 4);
    let t = Truncation::unbounded();
    let cases: Vec<(Shape, Matrix)> = vec![
        (Shape { terms: 3, min_arity: 2, max_arity: 3, ..Shape::new(1) }, vec![vec![Scalar::from_int(3)]]),
        (Shape { terms: 3, min_arity: 2, max_arity: 3, genus_max: 1, graded: Some(0), ..Shape::new(2) }, metric2()),
    ];
    for (shape, eta) in cases {
        let k = HamOperator::eta_dx(&eta).unwrap();
        for _ in 0..CASES {
            let f = sampling::functional(&mut rng, &shape);
            let g = sampling::functional(&mut rng, &shape);
            let lhs = t0(&bracket(&f, &g, &k, &t).unwrap());
            let rhs = p_bracket(&t0(&f), &t0(&g), &eta).unwrap();
            assert!(b_equal(&lhs, &rhs), "{} | {}", to_plain(f.rep()), to_plain(g.rep()));
        }
    }
}

#[test]
fn z_map_derivative_matches_partial_u() {
    let mut rng = sampling::rng(SEED + 5);
    for shape in shapes() {
        let shape = Shape { max_arity: 4, ..shape };
        for _ in 0..CASES {
            let f = sampling::functional(&mut rng, &shape);
            for a in 0..shape.dim {
                let lhs = z_extend(&t0(&f)).partial_p0(a);
                let rhs = t0(&f.partial_u(a));
                assert!(b_equal(&lhs, &rhs), "{} color {a}", to_plain(f.rep()));
            }
        }
    }
}

#[test]
fn mode_pairing_matches_variational_pairing() {
    let mut rng = sampling::rng(SEED + 6);
    for shape in shapes() {
        for _ in 0..CASES {
            let f = sampling::functional(&mut rng, &shape);
            for a in 0..shape.dim {
                for b in 0..shape.dim {
                    for k in 0..3 {
                        let dens = &f.var_derivative(a) * &DiffPoly::var(shape.dim, b, k);
                        let lhs = t0(&LocalFunctional::new(dens));
                        let rhs = mode_pairing(&t0(&f), a, b, k);
                        assert!(b_equal(&lhs, &rhs), "{} ({a},{b},{k})", to_plain(f.rep()));
                    }
                }
            }
        }
    }
}

#[test]
fn eta_dx_bracket_is_antisymmetric_and_jacobi() {
    let mut rng = sampling::rng(SEED + 7);
    let t = Truncation::unbounded();
    let small = Shape { terms: 2, min_arity: 2, max_arity: 3, max_order: 2, ..Shape::new(1) };
    let small2 = Shape { terms: 2, min_arity: 2, max_arity: 2, max_order: 2, ..Shape::new(2) };
    for (shape, eta) in [(small, vec![vec![Scalar::from_int(2)]]), (small2, metric2())] {
        let k = HamOperator::eta_dx(&eta).unwrap();
        for _ in 0..CASES {
            let f = sampling::functional(&mut rng, &shape);
            let g = sampling::functional(&mut rng, &shape);
            let h = sampling::functional(&mut rng, &shape);
            let fg = bracket(&f, &g, &k, &t).unwrap();
            let gf = bracket(&g, &f, &k, &t).unwrap();
            assert!((&fg + &gf).is_zero());
            assert!(jacobi_defect(&f, &g, &h, &k, &t).unwrap().is_zero());
        }
    }
}

#[test]
fn variational_complex_and_antiderivatives() {
    let mut rng = sampling::rng(SEED + 8);
    for shape in shapes() {
        let shape = Shape { min_arity: 1, ..shape };
        for _ in 0..CASES {
            let p = sampling::poly(&mut rng, &shape);
            let dp = p.dx();
            for a in 0..shape.dim {
                assert!(var_derivative(&dp, a).is_zero());
            }
            assert!(is_total_derivative(&dp));
            let g = antiderivative(&dp).unwrap();
            assert_eq!(g.dx(), dp);
            // g differs from p by a constant at most
            assert!((&g - &p).terms().keys().all(|k| k.mono.arity() == 0));
        }
    }
}

#[test]
fn non_exact_densities_are_detected() {
    let mut rng = sampling::rng(SEED + 9);
    let shape = Shape { terms: 3, min_arity: 2, max_arity: 3, ..Shape::new(1) };
    let mut seen = 0;
    for _ in 0..4 * CASES {
        let f = sampling::functional(&mut rng, &shape);
        let nf = f.normal_form();
        if nf.is_zero() {
            continue;
        }
        seen += 1;
        assert!(!f.is_zero());
        assert!(antiderivative(f.rep()).is_err());
        // normal form is a representative of the same class, and idempotent
        assert!(LocalFunctional::new(nf.clone()).lf_equal(&f));
        assert_eq!(drh_core::diffalg::normal_form(&nf), nf);
    }
    assert!(seen as u64 >= CASES);
}

#[test]
fn render_parse_round_trip() {
    let mut rng = sampling::rng(SEED + 10);
    for shape in shapes() {
        let shape = Shape { min_arity: 0, eps_max: 2, genus_max: 2, ..shape };
        for _ in 0..CASES {
            let p = sampling::poly(&mut rng, &shape);
            let s = to_plain(&p);
            assert_eq!(parse_poly(&s, shape.dim).unwrap(), p, "{s}");
            let j = serde_json::to_string(&p).unwrap();
            assert_eq!(serde_json::from_str::<DiffPoly>(&j).unwrap(), p);
        }
    }
}

#[test]
fn substitution_commutes_with_dx() {
    let mut rng = sampling::rng(SEED + 11);
    let t = Truncation::unbounded();
    let shape = Shape { terms: 3, min_arity: 1, max_arity: 2, max_order: 2, ..Shape::new(2) };
    for _ in 0..CASES {
        let f = sampling::poly(&mut rng, &shape);
        let images = vec![sampling::poly(&mut rng, &shape), sampling::poly(&mut rng, &shape)];
        let a = f.dx().substitute(&images, &t).unwrap();
        let b = f.substitute(&images, &t).unwrap().dx();
        assert_eq!(a, b);
    }
}

#[test]
fn series_json_round_trip() {
    let mut rng = sampling::rng(SEED + 12);
    for shape in shapes() {
        for _ in 0..CASES {
            let s = sampling::series(&mut rng, &shape);
            let j = serde_json::to_string(&s).unwrap();
            assert_eq!(serde_json::from_str::<BSeries>(&j).unwrap(), s);
        }
    }
}

#[test]
fn metric_inverse() {
    let inv = invert(&metric2()).unwrap();
    assert_eq!(inv[0][1], Scalar::frac(2, 5));
    assert_eq!(inv[1][1], Scalar::frac(-1, 5));
}

/// Nonzero.
fn small_rational() -> impl Strategy<Value = Scalar> {
    (1i64..=9, any::<bool>(), 1i64..=6).prop_map(|(n, neg, d)| Scalar::frac(if neg { -n } else { n }, d))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn dx_is_a_derivation(c1 in small_rational(), c2 in small_rational(), o1 in 0u32..3, o2 in 0u32..3) {
        let p = DiffPoly::monomial(1, c1, 0, 0, vec![JetVar::new(0, o1), JetVar::new(0, 0)]);
        let q = DiffPoly::monomial(1, c2, 1, 0, vec![JetVar::new(0, o2)]);
        let lhs = (&p * &q).dx();
        let rhs = &(&p.dx() * &q) + &(&p * &q.dx());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quadratic_normal_form_is_u_times_even_jet(c in small_rational(), i in 0u32..4, j in 0u32..4) {
        let f = LocalFunctional::new(DiffPoly::monomial(1, c, 0, 0, vec![JetVar::new(0, i), JetVar::new(0, j)]));
        let nf = f.normal_form();
        prop_assert!(nf.len() <= 1);
        for k in nf.terms().keys() {
            let v = k.mono.vars();
            prop_assert_eq!(v[0].order, 0);
            prop_assert_eq!(v[1].order, i + j);
        }
        prop_assert_eq!(nf.is_zero(), (i + j) % 2 == 1);
    }
}
