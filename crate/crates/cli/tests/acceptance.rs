//! Acceptance suite: runs each criterion exactly and prints one line per
//! criterion. Exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use drh_core::cohft::{
    export_table, hain_dr1_two_point, hain_dr1_two_point_at, hodge_oracle, table_oracle,
    trivial_oracle, DrOracle, OracleKey, Query,
};
use drh_core::diffalg::{antiderivative, is_total_derivative, parse_poly, to_plain, var_derivative};
use drh_core::fourier::{b_equal, p_bracket, q_inverse, t0, z_extend};
use drh_core::hierarchy::verify::{all_pairs, verify_unit_hamiltonian};
use drh_core::hierarchy::{
    color_multisets, hamiltonian, hodge_coefficient, metric_quadratic, string_solution,
    verify_commutativity, verify_dilaton, verify_first_derivative, verify_genus0, verify_string,
    verify_string_solution, BuildMode, Hierarchy,
};
use drh_core::kdv::{chain, first_structure, DEFAULT_DEPTH};
use drh_core::poisson::{bracket, jacobi_defect, HamOperator};
use drh_core::sampling::{self, Shape, SEED};
use drh_core::scalar::{factorial, rational};
use drh_core::{DiffPoly, Error, JetVar, LocalFunctional, Scalar, Truncation};
use num_bigint::BigInt;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(s: &str) -> DiffPoly {
    parse_poly(s, 1).expect("valid polynomial")
}

fn build(oracle: impl DrOracle + 'static, g: u32, d: u32, d_max: u32) -> Result<Hierarchy, String> {
    Hierarchy::build(Arc::new(oracle), Truncation::genus_deg(g, d), d_max, BuildMode::Windowed)
        .map_err(|e| e.to_string())
}

fn unit_hamiltonian() -> Outcome {
    let t = Truncation::genus_deg(2, 4);
    let want = metric_quadratic(trivial_oracle().spec());
    ensure(want.rep() == &p("1/2*u^2"), || "metric quadratic is not u^2/2".into())?;
    for o in [trivial_oracle(), hodge_oracle()] {
        let h = hamiltonian(&o, 0, 0, &t).map_err(|e| e.to_string())?;
        ensure(h == want, || format!("{}: {}", o.spec().name, to_plain(h.rep())))?;
    }
    let mut keys = Vec::new();
    for g in 0..=2 {
        for n in 2..=4 {
            for colors in color_multisets(1, n) {
                keys.push(OracleKey::new(g, 0, 0, colors));
            }
        }
    }
    let json = serde_json::to_string(&export_table(&trivial_oracle(), &keys)).map_err(|e| e.to_string())?;
    let table = table_oracle(&json).map_err(|e| e.to_string())?;
    let h = hamiltonian(&table, 0, 0, &t).map_err(|e| e.to_string())?;
    ensure(h == want, || format!("table: {}", to_plain(h.rep())))?;
    Ok("trivial, hodge and table round trip give 1/2*u^2".into())
}

fn trivial_g11() -> Outcome {
    let t = Truncation::genus_deg(1, 3);
    let h = hamiltonian(&trivial_oracle(), 0, 1, &t).map_err(|e| e.to_string())?;
    ensure(h.rep() == &p("1/6*u^3 + 1/24*h*u*u_2"), || to_plain(h.rep()))?;
    let hier = build(trivial_oracle(), 1, 3, 1)?;
    let flow = hier.dr_flow(0, 1).map_err(|e| e.to_string())?;
    ensure(flow == vec![p("u*u_1 + 1/12*h*u_3")], || to_plain(&flow[0]))?;
    Ok(format!("g(1,1) = {}; flow = {}", to_plain(h.rep()), to_plain(&flow[0])))
}

fn hodge_g11() -> Outcome {
    let t = Truncation::genus_deg(5, 3);
    let h = hamiltonian(&hodge_oracle(), 0, 1, &t).map_err(|e| e.to_string())?;
    let mut want = p("1/6*u^3");
    let mut coeffs = Vec::new();
    for g in 1..=5u32 {
        let c = hodge_coefficient(g);
        // |B_2g| / (2 (2g)!) from the Bernoulli recurrence
        let b = drh_core::cohft::bernoulli(2 * g);
        let formula = if g % 2 == 1 { b.clone() } else { -b.clone() } / (rational(2, 1) * factorial(2 * g));
        ensure(c == formula, || format!("g={g}: {c} vs {formula}"))?;
        let vars = vec![JetVar::new(0, 0), JetVar::new(0, 2 * g)];
        want = &want + &DiffPoly::monomial(1, Scalar::from_rational(c.clone()), g, g - 1, vars);
        coeffs.push(c.to_string());
    }
    ensure(coeffs[0] == "1/24" && coeffs[1] == "1/1440", || coeffs.join(", "))?;
    ensure(h.rep() == &want, || to_plain(h.rep()))?;
    let eps0 = h.rep().filter_terms(|k| k.epow == 0, false);
    ensure(eps0 == p("1/6*u^3 + 1/24*h*u*u_2"), || to_plain(&eps0))?;
    Ok(format!("coefficients {}", coeffs.join(", ")))
}

fn lenard_chain() -> Outcome {
    let hs = chain(DEFAULT_DEPTH).map_err(|e| e.to_string())?;
    let t = Truncation::unbounded();
    let k1 = first_structure();
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            let b = bracket(&hs[i], &hs[j], &k1, &t).map_err(|e| e.to_string())?;
            ensure(b.is_zero(), || format!("{{h_{i}, h_{j}}} = {}", to_plain(&b.normal_form())))?;
        }
    }
    let t3 = Truncation::genus_deg(1, 3);
    let dr0 = hamiltonian(&trivial_oracle(), 0, 0, &t3).map_err(|e| e.to_string())?;
    let dr1 = hamiltonian(&trivial_oracle(), 0, 1, &t3).map_err(|e| e.to_string())?;
    ensure(hs[0].lf_equal(&dr0) && hs[1].lf_equal(&dr1), || "h_0, h_1 differ from DR".into())?;
    for (d, h) in hs.iter().enumerate() {
        let b = bracket(&dr1, h, &k1, &t).map_err(|e| e.to_string())?;
        ensure(b.is_zero(), || format!("{{g(1,1), h_{d}}} = {}", to_plain(&b.normal_form())))?;
    }
    Ok(format!("{} Hamiltonians commute", hs.len()))
}

fn commutativity() -> Outcome {
    let h = build(trivial_oracle(), 1, 4, 3)?;
    let pairs = all_pairs(&h);
    let r = verify_commutativity(&h, &pairs).map_err(|e| e.to_string())?;
    ensure(r.all_passed(), || r.to_plain())?;
    ensure(pairs.len() == h.hams.len() * (h.hams.len() + 1) / 2, || "missing pairs".into())?;
    Ok(format!("{} pairs, {} checks", pairs.len(), r.checks.len()))
}

const CASES: usize = 24;

fn properties() -> Outcome {
    let shapes = [
        Shape { terms: 4, min_arity: 2, max_arity: 3, ..Shape::new(1) },
        Shape { terms: 3, min_arity: 2, max_arity: 3, genus_max: 1, graded: Some(0), ..Shape::new(2) },
    ];
    let eta2 = vec![
        vec![Scalar::from_int(1), Scalar::from_int(2)],
        vec![Scalar::from_int(2), Scalar::from_int(-1)],
    ];
    let etas = [vec![vec![Scalar::from_int(3)]], eta2];
    let t = Truncation::unbounded();
    let mut rng = sampling::rng(SEED);
    let mut runs = 0;
    for (shape, eta) in shapes.iter().zip(&etas) {
        let k = HamOperator::eta_dx(eta).map_err(|e| e.to_string())?;
        for _ in 0..CASES {
            let s = sampling::series(&mut rng, shape);
            ensure(b_equal(&t0(&q_inverse(&s).map_err(|e| e.to_string())?), &s), || "t0 q_inverse".into())?;

            let f = sampling::functional(&mut rng, shape);
            let g = sampling::functional(&mut rng, shape);
            let back = q_inverse(&t0(&f)).map_err(|e| e.to_string())?;
            ensure(back.lf_equal(&f), || format!("q_inverse t0 on {}", to_plain(f.rep())))?;
            for a in 0..shape.dim {
                ensure(t0(&LocalFunctional::new(DiffPoly::var(shape.dim, a, 0))).is_zero(), || {
                    "t0 of a linear functional".into()
                })?;
                let lhs = z_extend(&t0(&f)).partial_p0(a);
                ensure(b_equal(&lhs, &t0(&f.partial_u(a))), || format!("Z-map on {}", to_plain(f.rep())))?;
            }

            let fg = bracket(&f, &g, &k, &t).map_err(|e| e.to_string())?;
            let modes = p_bracket(&t0(&f), &t0(&g), eta).map_err(|e| e.to_string())?;
            ensure(b_equal(&t0(&fg), &modes), || "bracket intertwining".into())?;
            let gf = bracket(&g, &f, &k, &t).map_err(|e| e.to_string())?;
            ensure((&fg + &gf).is_zero(), || "antisymmetry".into())?;

            let pp = sampling::poly(&mut rng, shape);
            let dp = pp.dx();
            ensure((0..shape.dim).all(|a| var_derivative(&dp, a).is_zero()), || "delta dx".into())?;
            ensure(is_total_derivative(&dp), || "exactness".into())?;
            let anti = antiderivative(&dp).map_err(|e| e.to_string())?;
            ensure(anti.dx() == dp, || "antiderivative".into())?;
            runs += 1;
        }
    }
    let small = [
        (Shape { terms: 2, min_arity: 2, max_arity: 3, max_order: 2, ..Shape::new(1) }, vec![vec![Scalar::from_int(2)]]),
        (Shape { terms: 2, min_arity: 2, max_arity: 2, max_order: 2, ..Shape::new(2) }, etas[1].clone()),
    ];
    for (shape, eta) in &small {
        let k = HamOperator::eta_dx(eta).map_err(|e| e.to_string())?;
        for _ in 0..CASES {
            let [f, g, h] = [0, 1, 2].map(|_| sampling::functional(&mut rng, shape));
            let defect = jacobi_defect(&f, &g, &h, &k, &t).map_err(|e| e.to_string())?;
            ensure(defect.is_zero(), || "Jacobi".into())?;
        }
    }
    Ok(format!("{runs} instances per suite plus {} Jacobi triples", 2 * CASES))
}

fn identities() -> Outcome {
    let mut total = 0;
    for (name, h) in [("trivial", build(trivial_oracle(), 1, 6, 4)?), ("hodge", build(hodge_oracle(), 5, 3, 2)?)] {
        for r in [
            verify_unit_hamiltonian(&h),
            verify_string(&h),
            verify_first_derivative(&h),
            verify_dilaton(&h),
            verify_genus0(&h).map_err(|e| e.to_string())?,
        ] {
            ensure(!r.checks.is_empty() && r.all_passed(), || format!("{name}:\n{}", r.to_plain()))?;
            total += r.checks.len();
        }
        if name == "trivial" {
            for d in 0..=4u32 {
                let g0 = h.ham(0, d).ok_or("missing Hamiltonian")?.rep().hbar_part(0);
                let want = p(&format!("1/{}*u^{}", factorial(d + 2), d + 2));
                ensure(g0 == want, || format!("d={d}: {}", to_plain(&g0)))?;
            }
        }
    }
    Ok(format!("{total} checks"))
}

fn string_solution_identity() -> Outcome {
    let h = build(trivial_oracle(), 1, 3, 1)?;
    let sol = string_solution(&h, 3, None).map_err(|e| e.to_string())?;
    let r = verify_string_solution(&sol).map_err(|e| e.to_string())?;
    ensure(r.all_passed(), || r.to_plain())?;
    Ok(format!("{} checks, {} terms", r.checks.len(), sol.components[0].len()))
}

fn hain() -> Outcome {
    ensure(hain_dr1_two_point() == rational(1, 24), || hain_dr1_two_point().to_string())?;
    let Query::Known(poly) = trivial_oracle().dr_poly(&OracleKey::new(1, 1, 0, vec![0, 0])) else {
        return Err("no DR_1 psi data".into());
    };
    for a in -5..=5i64 {
        let v = hain_dr1_two_point_at(a);
        ensure(v == rational(a * a, 24), || format!("a={a}: {v}"))?;
        let with_psi = poly.evaluate(&[BigInt::from(a), BigInt::from(-a)]).remove(&0).unwrap_or_default();
        ensure(&v + &v == rational(a * a, 12) && with_psi == rational(a * a, 12), || {
            format!("a={a}: {with_psi}")
        })?;
    }
    Ok("a^2/24 and a^2/12 for |a| <= 5".into())
}

const BAD_DEGREE: &str = r#"{"dimension":1,"metric":[["1"]],"unit":1,"entries":[
  {"g":1,"d":1,"alpha":1,"insertions":[1,1],"poly":[{"coeff":"1","exps":[2,1]}]}]}"#;
const BAD_SYMMETRY: &str = r#"{"dimension":1,"metric":[["1"]],"unit":1,"entries":[
  {"g":1,"d":1,"alpha":1,"insertions":[1,1,1],"poly":[{"coeff":"1","exps":[2,0,0]}]}]}"#;

fn negative_paths() -> Outcome {
    for (what, doc, needle) in [("degree", BAD_DEGREE, "homogeneous"), ("symmetry", BAD_SYMMETRY, "symmetric")] {
        match table_oracle(doc) {
            Err(Error::Validation { key, reason }) => {
                ensure(key.contains("g=1") && key.contains("d=1") && reason.contains(needle), || {
                    format!("{what}: {key}: {reason}")
                })?;
            }
            other => return Err(format!("{what}: accepted or wrong error {:?}", other.err())),
        }
    }
    let err = hamiltonian(&trivial_oracle(), 0, 3, &Truncation::genus_deg(2, 4));
    let Err(Error::MissingOracleData { keys }) = err else {
        return Err("missing data not reported".into());
    };
    ensure(!keys.is_empty() && keys.iter().all(|k| k.g >= 1 && k.n() >= 3), || "bad key list".into())?;
    let out = Command::new(env!("CARGO_BIN_EXE_drh"))
        .args(["hamiltonian", "--alpha", "1", "--d", "3", "--genus-max", "2", "--deg-max", "4"])
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(out.status.code() == Some(3), || format!("exit {:?}", out.status.code()))?;
    ensure(out.stdout.is_empty(), || "printed a Hamiltonian anyway".into())?;
    for k in &keys {
        ensure(stderr.contains(&k.to_string()), || format!("{k} not listed"))?;
    }
    Ok(format!("both tables rejected; {} missing keys listed, exit 3", keys.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("unit Hamiltonian is half the metric", unit_hamiltonian, Duration::from_secs(1)),
        ("trivial g(1,1) and its flow", trivial_g11, Duration::from_secs(1)),
        ("Hodge g(1,1) Bernoulli coefficients", hodge_g11, Duration::from_secs(1)),
        ("Lenard chain commutes and matches DR", lenard_chain, Duration::from_secs(30)),
        ("DR Hamiltonians commute in the sound window", commutativity, Duration::from_secs(30)),
        ("property suites", properties, Duration::from_secs(60)),
        ("string, first-derivative, dilaton and genus-zero identities", identities, Duration::from_secs(10)),
        ("string solution identity", string_solution_identity, Duration::from_secs(10)),
        ("Hain two-point integral", hain, Duration::from_secs(1)),
        ("bad input is rejected with keys", negative_paths, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({took:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?}): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
