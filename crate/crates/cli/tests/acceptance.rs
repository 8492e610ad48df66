//! Acceptance suite: every reproduction target runs here at its stated
//! tolerance, one test per criterion, each printing a pass line (visible
//! with `cargo test --test acceptance -- --nocapture`).

use ilsf::basefield::artin::{artin_schreier_reduce, dependent_combination, CokernelDim};
use ilsf::basefield::{BaseFieldDesc, PrimeChar};
use ilsf::brauer::{
    arav_bound, decide_division, lemma_div_witness, simplify, symlen_report,
    twisted_laurent_division_check, BrauerClass, DivisionStatus, SymbolAS, SymlenBase,
    TwistedPresentation, WitnessReport,
};
use ilsf::laurent::{FieldTower, LaurentPoly, Monomial, PrecisionWindow};
use ilsf::quadforms::{
    anisotropic_by_values, bilinear_linkage_counterexample, brute_force_isotropy,
    f2span_intersection_dim, pure_subform_genset, quad_linkage_counterexample, IsotropyOutcome,
};
use ilsf_cli::parse::{parse_expression, ParsedExpr};
use ilsf_cli::run::{common_factor_trial, random_independent_slots};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn pass(n: u32, name: &str) {
    println!("acceptance {n} ({name}): PASS");
}

#[test]
fn acceptance_01_chain_class_division() {
    for p in [2u64, 3, 5] {
        for n in [2usize, 3, 4, 5] {
            let tower = FieldTower::new(BaseFieldDesc::prime_field(p).unwrap(), n);
            let class = lemma_div_witness(&tower).unwrap();
            assert_eq!(class.len(), n - 1);
            let t0 = Instant::now();
            let verdict = decide_division(&class);
            let dt = t0.elapsed();
            assert_eq!(
                verdict.status,
                DivisionStatus::Division,
                "p={p} n={n}: {}",
                verdict.trace_text()
            );
            assert!(dt.as_secs_f64() < 5.0, "p={p} n={n} took {dt:?}");
            if n == 2 {
                let text = verdict.trace_text();
                assert!(text.contains("(0, -1)"), "missing value line: {text}");
                assert!(
                    text.contains(&format!("Gamma_K = Z x (1/{p})Z")),
                    "missing value group line: {text}"
                );
                assert!(
                    text.contains("norm-value obstruction at (1, 0)"),
                    "missing norm obstruction line: {text}"
                );
            }
        }
    }
    pass(1, "chain class division for p in {2,3,5}, n in {2..5}");
}

#[test]
fn acceptance_02_symbol_length_closed_base() {
    for p in [2u64, 3, 5] {
        let p = PrimeChar::new(p).unwrap();
        for n in 2..=5u32 {
            let r = symlen_report(SymlenBase::AlgebraicallyClosed, p, n).unwrap();
            assert_eq!(r.claimed, n - 1);
            assert_eq!(r.upper_bound, n - 1);
            assert_eq!(arav_bound(CokernelDim::Finite(0), n).unwrap(), n - 1);
            let WitnessReport::Chain { class, verdict } = &r.witness else {
                panic!("expected a chain witness for the closed-base branch");
            };
            assert_eq!(class.len(), (n - 1) as usize);
            assert_eq!(verdict.status, DivisionStatus::Division, "{}", verdict.trace_text());
        }
    }
    pass(2, "symbol length n-1 with verified witness over closed bases");
}

#[test]
fn acceptance_03_symbol_length_ratfunc_base() {
    let k = BaseFieldDesc::parse("F2(t)").unwrap();
    let p = PrimeChar::new(2).unwrap();
    for n in 1..=3u32 {
        let r = symlen_report(SymlenBase::Field(k.clone()), p, n).unwrap();
        assert_eq!(r.claimed, n);
        let WitnessReport::Twisted { presentation, verdict, .. } = &r.witness else {
            panic!("expected a twisted witness for the ratfunc branch");
        };
        let expected: Vec<_> = [1i64, 3, 5][..n as usize]
            .iter()
            .map(|&m| k.t_pow(-m))
            .collect();
        assert_eq!(presentation.betas(), expected.as_slice());
        assert_eq!(verdict.status, DivisionStatus::Division, "{}", verdict.trace_text());
    }
    // the dependent control pair
    let tp = TwistedPresentation::new(k.clone(), vec![k.t_pow(-1), k.t_pow(-2)]).unwrap();
    let v = twisted_laurent_division_check(&tp);
    assert_eq!(v.status, DivisionStatus::NotDivision);
    let (coeffs, witness) = dependent_combination(&[k.t_pow(-1), k.t_pow(-2)], 6)
        .unwrap()
        .expect("the control pair is dependent");
    assert_eq!(coeffs, vec![1, 1]);
    assert_eq!(witness, k.t_pow(-1));
    assert_eq!(witness.wp(), k.t_pow(-1).add(&k.t_pow(-2)));
    assert!(v.trace_text().contains("w = t^-1"), "{}", v.trace_text());
    pass(3, "symbol length n over F2(t) with independent poles, control pair rejected");
}

#[test]
fn acceptance_04_upper_bound_matrix() {
    let cases = [
        (CokernelDim::Finite(0), [0u32, 1, 2, 3, 4, 5]),
        (CokernelDim::Finite(1), [1, 1, 2, 3, 4, 5]),
        (CokernelDim::Infinite, [1, 2, 3, 4, 5, 6]),
    ];
    let mut checked = 0;
    for (m, expected) in cases {
        for n in 1..=6u32 {
            assert_eq!(
                arav_bound(m, n).unwrap(),
                expected[(n - 1) as usize],
                "m={m}, n={n}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 18);
    pass(4, "upper bound matrix n-1/n over m in {0,1,infinite}, n in {1..6}");
}

#[test]
fn acceptance_05_quadratic_non_linkage() {
    let f2 = BaseFieldDesc::prime_field(2).unwrap();
    for n in 2..=5usize {
        let tower = FieldTower::new(f2.clone(), n + 1);
        let (_, _, omega) = quad_linkage_counterexample(n, &tower).unwrap();
        let verdict = anisotropic_by_values(&omega);
        assert!(verdict.is_anisotropic(), "n={n}: {verdict}");
    }
    // exhaustive corroboration at n = 2
    let tower = FieldTower::new(f2, 3);
    let (_, _, omega) = quad_linkage_counterexample(2, &tower).unwrap();
    let window = PrecisionWindow::symmetric(3, 2);
    let t0 = Instant::now();
    let outcome = brute_force_isotropy(&omega, &window, 1_000_000);
    let dt = t0.elapsed();
    let IsotropyOutcome::NoneFound { evaluations, budget } = outcome else {
        panic!("the sum form must have no isotropic vector: {outcome}");
    };
    assert_eq!(budget, 1_000_000);
    assert!(evaluations >= 235_000, "search must at least exhaust weights 1-2");
    assert!(dt.as_secs_f64() < 60.0, "search took {dt:?}");
    pass(5, "quadratic pair sum anisotropic for n in {2..5}, no witness in the window");
}

#[test]
fn acceptance_06_bilinear_span_intersections() {
    let f2 = BaseFieldDesc::prime_field(2).unwrap();
    let expected = [(2usize, 0usize), (3, 2), (4, 6)];
    for (n, want) in expected {
        let tower = FieldTower::new(f2.clone(), n + 1);
        let (phi, psi) = bilinear_linkage_counterexample(n, &tower).unwrap();
        let ga = pure_subform_genset(&phi).unwrap();
        let gb = pure_subform_genset(&psi).unwrap();
        let window = PrecisionWindow::uniform(n + 1, 0, 4).unwrap();
        let t0 = Instant::now();
        let r = f2span_intersection_dim(&ga, &gb, &window).unwrap();
        let dt = t0.elapsed();
        assert_eq!(r.dim_at_window, want, "n={n}");
        assert!(r.stabilized, "n={n} not stabilized");
        let threshold = (1usize << (n - 1)) - 1;
        assert!(r.dim_at_window < threshold, "n={n}: {} !< {threshold}", r.dim_at_window);
        if n == 4 {
            assert!(dt.as_secs_f64() < 30.0, "n=4 took {dt:?}");
        }
    }
    pass(6, "span intersections 0/2/6 below thresholds, stabilized");
}

#[test]
fn acceptance_07_common_factor_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240815);
    for n in [2usize, 3, 4] {
        let n_vars = n + 1;
        let mut failures = 0;
        for _ in 0..200 {
            let phi = random_independent_slots(&mut rng, n, n_vars);
            let psi = random_independent_slots(&mut rng, n, n_vars);
            if !common_factor_trial(&phi, &psi, n, n_vars) {
                failures += 1;
            }
        }
        assert_eq!(failures, 0, "n={n}: {failures} of 200 trials failed");
    }
    pass(7, "common factors found and span-verified on 200 random pairs per n");
}

#[test]
fn acceptance_08_reduction_matches_enumeration() {
    let mut fields = 0;
    for q in 2u64..=64 {
        let Some((p, d)) = prime_power(q) else { continue };
        let desc = BaseFieldDesc::finite_field(p, d).unwrap();
        let elems = desc.all_elements().unwrap();
        let image: std::collections::HashSet<_> = elems.iter().map(|x| x.wp()).collect();
        for beta in &elems {
            let red = artin_schreier_reduce(beta);
            assert!(red.holds_exactly(), "F{q}: decomposition not exact for {beta}");
            assert_eq!(
                red.in_image,
                image.contains(beta),
                "F{q}: disagreement at {beta}"
            );
        }
        fields += 1;
    }
    assert_eq!(fields, 27, "every prime power up to 64");
    pass(8, "reduction agrees with exhaustive image enumeration on all 27 fields");
}

fn prime_power(q: u64) -> Option<(u64, usize)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut m = q;
    let mut d = 0;
    while m.is_multiple_of(p) {
        m /= p;
        d += 1;
    }
    (m == 1).then_some((p, d))
}

#[test]
fn acceptance_09_division_check_command() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_ilsf"))
        .args([
            "division-check",
            "--base",
            "F2",
            "--p",
            "2",
            "--n",
            "3",
            "--class",
            "[a2^-1,a1)*[a3^-1,a2)",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("Division"), "{stdout}");
    assert!(stdout.contains("not linked"), "{stdout}");
    pass(9, "division-check certifies the 2-symbol class and reports non-linkage");
}

#[test]
fn acceptance_10_property_suites() {
    let f2 = BaseFieldDesc::prime_field(2).unwrap();
    let tower = FieldTower::new(f2.clone(), 3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let random_poly = |rng: &mut ChaCha8Rng, tower: &FieldTower| -> LaurentPoly {
        let n_terms = rng.gen_range(1..=4);
        tower.from_terms((0..n_terms).map(|_| {
            let exps: Vec<i64> = (0..tower.n()).map(|_| rng.gen_range(-3..=3)).collect();
            (Monomial::new(exps), tower.base().one())
        }))
    };

    // valuation multiplicativity on 10^4 random nonzero pairs
    let mut checked = 0;
    while checked < 10_000 {
        let x = random_poly(&mut rng, &tower);
        let y = random_poly(&mut rng, &tower);
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let vx = x.valuation().unwrap();
        let vy = y.valuation().unwrap();
        let vxy = x.mul(&y).valuation().unwrap();
        assert_eq!(vxy, vx.add(&vy), "x={x}, y={y}");
        checked += 1;
    }

    // simplify / verdict coherence over a full small corpus
    let pool = [
        SymbolAS::new(tower.var_pow(1, -1), tower.var(0)).unwrap(),
        SymbolAS::new(tower.var_pow(2, -1), tower.var(1)).unwrap(),
        SymbolAS::new(tower.zero(), tower.var(0)).unwrap(),
        SymbolAS::new(tower.one(), tower.var_pow(0, 2)).unwrap(),
        SymbolAS::new(tower.var_pow(1, -1).add(&tower.one()), tower.var(0)).unwrap(),
        SymbolAS::new(tower.var_pow(1, -1), tower.var(0)).unwrap(),
    ];
    let mut coherent = 0;
    for i in 0..pool.len() {
        for j in 0..pool.len() {
            let class =
                BrauerClass::new(tower.clone(), vec![pool[i].clone(), pool[j].clone()]).unwrap();
            let s = simplify(&class);
            let v1 = decide_division(&class);
            let v2 = decide_division(&s);
            if s.len() == class.len()
                && v1.status != DivisionStatus::Unknown
                && v2.status != DivisionStatus::Unknown
            {
                assert_eq!(v1.status, v2.status, "class {class}");
                coherent += 1;
            }
            if s.is_empty() {
                assert_ne!(v1.status, DivisionStatus::Division, "collapsed class {class}");
            }
        }
    }
    assert!(coherent > 0);

    // square decomposition round trip on 10^3 random elements over F4
    let f4 = BaseFieldDesc::finite_field(2, 2).unwrap();
    let t4 = FieldTower::new(f4.clone(), 2);
    let f4_elems = f4.all_elements().unwrap();
    for _ in 0..1_000 {
        let n_terms = rng.gen_range(0..=4);
        let x = t4.from_terms((0..n_terms).map(|_| {
            let exps: Vec<i64> = (0..2).map(|_| rng.gen_range(-3..=3)).collect();
            let c = f4_elems[rng.gen_range(0..4)].clone();
            (Monomial::new(exps), c)
        }));
        let classes = x.square_decompose().unwrap();
        assert_eq!(LaurentPoly::assemble_squares(&t4, &classes), x);
    }

    // print/parse round trip on 10^3 random objects
    for _ in 0..1_000 {
        let x = random_poly(&mut rng, &tower);
        let printed = x.to_string();
        let ParsedExpr::Element(back) = parse_expression(&printed, &tower).unwrap() else {
            panic!("element expected");
        };
        assert_eq!(back, x, "roundtrip failed on {printed}");
    }
    let class = lemma_div_witness(&tower).unwrap();
    let ParsedExpr::Class(back) = parse_expression(&class.to_string(), &tower).unwrap() else {
        panic!("class expected");
    };
    assert_eq!(back, class);

    pass(10, "property suites: 10^4 valuation pairs, coherence, round trips");
}

#[test]
fn acceptance_report_all_bundle() {
    // the bundle command reproduces the matrix at its defaults
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_ilsf"))
        .args(["report-all", "--p", "2", "--max-n", "4", "--format", "structured"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["all_pass"], true);
    // malformed base descriptor: exit 2
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_ilsf"))
        .args(["symlen", "--base", "Fnope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    println!("acceptance bundle (report-all defaults): PASS");
}
