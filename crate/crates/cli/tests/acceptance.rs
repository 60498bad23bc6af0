//! End-to-end acceptance checks. Prints one line per check and exits
//! nonzero if any fails.

#[path = "../../core/tests/support/oracle.rs"]
mod oracle;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use lsb_core::brace::{enumerate_braces, verify_brace, FiniteSkewBrace};
use lsb_core::group::{automorphisms, FiniteGroup};
use lsb_core::grouplaw::{
    check_brace_numeric, extract_bracket, extract_triangle, lambda_numeric, preset_brace_law, RATIONALIZE_TOLERANCE,
};
use lsb_core::lie::{check_postlie, random_rational_tensor, LieAlgebra, LieError, PostLieAlgebra, Rigidity};
use lsb_core::linalg::{format_rational, rat, BilinearMap, RationalSubspace};
use lsb_core::presets;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;
const SAMPLES: usize = 1000;
const RESIDUAL_TOL: f64 = 1e-8;
const LAMBDA_TOL: f64 = 1e-9;
const MAX_DEN: u64 = 64;
const BOUND: usize = 60;
const RANDOM_TENSORS: usize = 10_000;

/// Outcome of one check: a verdict plus a report that must not depend on
/// timing.
struct Outcome {
    pass: bool,
    report: String,
}

struct Check {
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn lsb(args: &[&str]) -> lsb_cli::Outcome {
    let mut full = vec!["lsb"];
    full.extend_from_slice(args);
    lsb_cli::run(full)
}

fn field<'a>(stdout: &'a str, key: &str) -> Option<&'a str> {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
}

fn tensor_text(t: &BilinearMap) -> String {
    t.nonzero_entries()
        .iter()
        .map(|(i, j, k, v)| format!("{}{}{}={}", i + 1, j + 1, k + 1, format_rational(v)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn brace_identity() -> Outcome {
    let out = lsb(&[
        "lsb-check",
        "presets:a1_1_model",
        "--samples",
        "1000",
        "--tol",
        "1e-8",
        "--seed",
        "42",
    ]);
    let residual: f64 = field(&out.stdout, "max_brace_residual")
        .and_then(|v| v.parse().ok())
        .unwrap_or(f64::INFINITY);
    Outcome {
        pass: out.code == 0 && residual < RESIDUAL_TOL,
        report: format!("exit {}\n{}", out.code, out.stdout),
    }
}

fn lambda_matrix() -> Outcome {
    let law = preset_brace_law("a1_1_model").expect("preset");
    let e = std::f64::consts::E;
    let expected = vec![vec![1.0, 0.0, 0.0], vec![0.0, e, 0.0], vec![0.0, 0.0, 1.0 / e]];
    match lambda_numeric(&law.dot, &law.circ, &[1.0, 0.0, 0.0]) {
        Ok(m) => {
            let dev = m.max_deviation(&expected);
            let mut report = format!("max deviation from diag(1, e, 1/e): {dev:.3e}\n");
            for row in m.rows() {
                let cells: Vec<String> = row.iter().map(|x| format!("{x:.12}")).collect();
                writeln!(report, "{}", cells.join(" ")).unwrap();
            }
            Outcome {
                pass: dev < LAMBDA_TOL,
                report,
            }
        }
        Err(e) => Outcome {
            pass: false,
            report: e.to_string(),
        },
    }
}

fn tensor_extraction() -> Outcome {
    let law = preset_brace_law("a1_1_model").expect("preset");
    let mut report = String::new();
    let bracket = extract_bracket(&law.circ).rationalize(MAX_DEN, RATIONALIZE_TOLERANCE);
    let triangle = extract_triangle(&law.dot, &law.circ).and_then(|t| t.rationalize(MAX_DEN, RATIONALIZE_TOLERANCE));
    let (Ok(bracket), Ok(triangle)) = (bracket, triangle) else {
        return Outcome {
            pass: false,
            report: "rationalization failed".into(),
        };
    };
    let mut expected_bracket = BilinearMap::zero(3);
    for (i, j, k, v) in [(0, 1, 1, 1), (1, 0, 1, -1), (0, 2, 2, -1), (2, 0, 2, 1)] {
        expected_bracket.set(i, j, k, rat(v));
    }
    let mut expected_triangle = BilinearMap::zero(3);
    for (i, j, k, v) in [(0, 1, 1, 1), (0, 2, 2, -1), (1, 2, 0, 1), (2, 1, 0, 1)] {
        expected_triangle.set(i, j, k, rat(v));
    }
    writeln!(report, "circ bracket: {}", tensor_text(&bracket)).unwrap();
    writeln!(report, "triangle: {}", tensor_text(&triangle)).unwrap();
    let postlie = check_postlie(&LieAlgebra::abelian(3), &triangle);
    writeln!(report, "post-Lie axioms: {}", if postlie.is_ok() { "ok" } else { "fail" }).unwrap();
    let circ_ok = postlie.as_ref().is_ok_and(|p| p.circ().bracket() == &expected_bracket);
    let cli = lsb(&["extract", "presets:a1_1_model"]);
    report.push_str(&cli.stdout);
    Outcome {
        pass: bracket == expected_bracket && triangle == expected_triangle && circ_ok && cli.code == 0,
        report,
    }
}

fn simplicity() -> Outcome {
    let p = PostLieAlgebra::a1_1();
    let mut report = String::new();
    let mut pass = true;
    let span = |idx: &[usize]| RationalSubspace::coordinate(3, idx);
    let expected = [
        RationalSubspace::zero(3),
        span(&[1]),
        span(&[2]),
        span(&[1, 2]),
        RationalSubspace::full(3),
    ];
    match p.circ().all_ideals_lowdim() {
        Ok(lattice) => {
            let same = lattice.families.is_empty()
                && lattice.ideals.len() == expected.len()
                && expected.iter().all(|e| lattice.ideals.contains(e));
            writeln!(report, "circ ideals: {} (families {})", lattice.ideals.len(), lattice.families.len()).unwrap();
            pass &= same;
        }
        Err(e) => {
            writeln!(report, "circ ideals: {e}").unwrap();
            pass = false;
        }
    }
    for idx in [&[1][..], &[2], &[1, 2]] {
        let stable = p.brace_ideal_test(&span(idx)).map(|r| r.triangle_stable).unwrap_or(true);
        writeln!(report, "triangle-stable {idx:?}: {stable}").unwrap();
        pass &= !stable;
    }
    let simple = p.is_simple_brace_infinitesimal().unwrap_or(false);
    let dot_solvable = p.dot().is_solvable();
    let circ_solvable = p.circ().is_solvable();
    let derived = p.brace_derived_series();
    let first_is_whole = derived.as_ref().is_ok_and(|(s, solvable)| {
        // The series stops at its first repeat.
        let d1 = s.get(1).unwrap_or(&s[0]);
        d1.is_full() && !solvable
    });
    writeln!(report, "simple: {simple}\ndot solvable: {dot_solvable}\ncirc solvable: {circ_solvable}").unwrap();
    writeln!(report, "first derived term is whole space: {first_is_whole}").unwrap();
    pass &= simple && dot_solvable && circ_solvable && first_is_whole;
    Outcome { pass, report }
}

fn rigidity() -> Outcome {
    let mut report = String::new();
    let mut pass = true;
    for (name, expected) in [("sl2_case1", Rigidity::CaseI), ("sl2_case2", Rigidity::CaseII)] {
        let got = presets::postlie(name).expect("preset").rigidity_classify();
        let cli = lsb(&["rigidity", &format!("presets:{name}")]);
        let line = field(&cli.stdout, "classification").unwrap_or("missing").to_string();
        writeln!(report, "{name}: {got:?}, cli: {line}").unwrap();
        pass &= got.as_ref() == Ok(&expected) && cli.code == 0;
    }
    let sl2 = LieAlgebra::sl2();
    let zero = BilinearMap::zero(3);
    let neg = sl2.bracket().map_entries(|x| -x);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut tested = 0;
    let mut skipped = 0;
    let mut failures: BTreeMap<String, usize> = BTreeMap::new();
    while tested < RANDOM_TENSORS {
        let t = random_rational_tensor(3, &mut rng);
        if t == zero || t == neg {
            skipped += 1;
            continue;
        }
        tested += 1;
        let key = match check_postlie(&sl2, &t) {
            Ok(_) => "accepted".to_string(),
            Err(LieError::AxiomViolation { axiom, .. }) => format!("axiom {axiom}"),
            Err(LieError::CircNotLie { .. }) => "circ Jacobi".to_string(),
            Err(e) => format!("other: {e}"),
        };
        *failures.entry(key).or_default() += 1;
    }
    writeln!(report, "random tensors: {tested} (skipped {skipped})").unwrap();
    for (k, v) in &failures {
        writeln!(report, "  {k}: {v}").unwrap();
    }
    pass &= !failures.contains_key("accepted");
    Outcome { pass, report }
}

const ORACLE_FIXTURES: [(&str, usize); 8] = [
    ("c1", 1),
    ("c2", 1),
    ("c3", 1),
    ("c4", 2),
    ("v4", 4),
    ("c5", 1),
    ("c6", 2),
    ("s3", 8),
];

fn oracle_equivalence() -> Outcome {
    let mut report = String::new();
    let mut pass = true;
    for n in 1..=6 {
        let tables = oracle::all_group_tables(n);
        let mut mismatches = 0;
        let mut counts = BTreeMap::new();
        for table in &tables {
            let g = FiniteGroup::from_flat(n, table.clone()).expect("oracle tables are groups");
            let found = enumerate_braces(&g, BOUND).map(|b| b.len()).unwrap_or(usize::MAX);
            let expected = oracle::brace_count(table, n);
            if found != expected {
                mismatches += 1;
            }
            *counts.entry(expected).or_insert(0) += 1;
        }
        writeln!(report, "order {n}: {} labeled groups, mismatches {mismatches}, counts {counts:?}", tables.len()).unwrap();
        pass &= mismatches == 0;
    }
    for (name, count) in ORACLE_FIXTURES {
        let g = presets::group(name).expect("preset");
        let found = enumerate_braces(&g, BOUND).map(|b| b.len()).unwrap_or(0);
        let oracle_count = oracle::brace_count(g.flat_table(), g.order());
        writeln!(report, "{name}: enumerate {found}, oracle {oracle_count}, fixture {count}").unwrap();
        pass &= found == count && oracle_count == count;
    }
    Outcome { pass, report }
}

const SMALL_GROUPS: [&str; 14] = [
    "c1", "c2", "c3", "c4", "v4", "c5", "c6", "s3", "c7", "c8", "c4xc2", "c2cubed", "d4", "q8",
];

fn lambda_violations(b: &FiniteSkewBrace) -> usize {
    let n = b.order();
    let mut bad = 0;
    for a in 0..n {
        let l = b.lambda(a);
        if !(0..n).all(|x| (0..n).all(|y| l[b.dot().mul(x, y)] == b.dot().mul(l[x], l[y]))) {
            bad += 1;
        }
        for c in 0..n {
            let ac = b.circ().mul(a, c);
            if !(0..n).all(|x| b.lambda_at(ac, x) == b.lambda_at(a, b.lambda_at(c, x))) {
                bad += 1;
            }
        }
    }
    bad
}

fn finite_laws() -> Outcome {
    let mut report = String::new();
    let (mut fund, mut quot, mut solv, mut lam) = (0, 0, 0, 0);
    let (mut braces, mut fund_checks, mut quotients) = (0, 0, 0);
    for name in SMALL_GROUPS {
        let g = presets::group(name).expect("preset");
        let auts = automorphisms(&g);
        let chars = g.characteristic_subgroups(&auts);
        let list = enumerate_braces(&g, BOUND).expect("small order");
        braces += list.len();
        for b in &list {
            for h in &chars {
                fund_checks += 1;
                match b.criterion_checks(h, &auts) {
                    Ok(r) if r.fund_lemma_lhs == r.fund_lemma_rhs => {}
                    _ => fund += 1,
                }
            }
            for ideal in b.all_ideals(BOUND).expect("small order") {
                quotients += 1;
                let ok = b
                    .quotient(&ideal.elements)
                    .is_ok_and(|(q, _)| verify_brace(q.dot(), q.circ()).is_ok());
                if !ok {
                    quot += 1;
                }
            }
            if b.derived_series().solvable && !(b.dot().is_solvable() && b.circ().is_solvable()) {
                solv += 1;
            }
            lam += lambda_violations(b);
        }
        writeln!(report, "{name}: {} braces, {} characteristic subgroups", list.len(), chars.len()).unwrap();
    }
    writeln!(report, "braces: {braces}, characteristic checks: {fund_checks}, quotients: {quotients}").unwrap();
    writeln!(
        report,
        "violations: characteristic criterion {fund}, quotient {quot}, solvability {solv}, lambda {lam}"
    )
    .unwrap();
    Outcome {
        pass: fund + quot + solv + lam == 0,
        report,
    }
}

fn order_24() -> Outcome {
    let out = lsb(&["enumerate", "--additive", "presets:c3xc2cubed", "--report-simple"]);
    let found = out
        .stdout
        .lines()
        .filter_map(|l| l.strip_prefix("simple_class: "))
        .any(|c| c.starts_with("circ=s4 triviality=neither "));
    Outcome {
        pass: out.code == 0 && found,
        report: format!("exit {}\n{}", out.code, out.stdout),
    }
}

fn affine_model() -> Outcome {
    let law = preset_brace_law("affine2d").expect("preset");
    let mut report = String::new();
    let residual = check_brace_numeric(&law.dot, &law.circ, SAMPLES, RESIDUAL_TOL, SEED)
        .map(|r| r.brace_residual)
        .unwrap_or(f64::INFINITY);
    writeln!(report, "brace residual: {residual:.3e}").unwrap();
    let bracket = extract_bracket(&law.circ).rationalize(MAX_DEN, RATIONALIZE_TOLERANCE);
    let mut expected = BilinearMap::zero(2);
    expected.set(1, 0, 0, rat(1));
    expected.set(0, 1, 0, rat(-1));
    let (same, solvable) = match &bracket {
        Ok(b) => {
            writeln!(report, "circ bracket: {}", tensor_text(b)).unwrap();
            let l = LieAlgebra::new(b.clone());
            (b == &expected, l.is_ok_and(|l| l.is_solvable() && !l.is_abelian()))
        }
        Err(e) => {
            writeln!(report, "circ bracket: {e}").unwrap();
            (false, false)
        }
    };
    Outcome {
        pass: residual < RESIDUAL_TOL && same && solvable,
        report,
    }
}

const CHECKS: [Check; 9] = [
    Check {
        title: "a1_1 brace identity over 1000 seeded triples",
        limit: Some(Duration::from_secs(5)),
        run: brace_identity,
    },
    Check {
        title: "a1_1 lambda matrix at (1,0,0)",
        limit: None,
        run: lambda_matrix,
    },
    Check {
        title: "a1_1 bracket and triangle extraction",
        limit: None,
        run: tensor_extraction,
    },
    Check {
        title: "a1_1 ideals, simplicity and solvability",
        limit: None,
        run: simplicity,
    },
    Check {
        title: "rigidity on sl2 and random triangle sweep",
        limit: None,
        run: rigidity,
    },
    Check {
        title: "enumeration against brute-force oracle up to order 6",
        limit: Some(Duration::from_secs(60)),
        run: oracle_equivalence,
    },
    Check {
        title: "finite brace laws up to order 8",
        limit: None,
        run: finite_laws,
    },
    Check {
        title: "simple brace of order 24 with circ S4",
        limit: Some(Duration::from_secs(600)),
        run: order_24,
    },
    Check {
        title: "2D affine model",
        limit: None,
        run: affine_model,
    },
];

fn main() {
    let mut all_pass = true;
    let mut reports = Vec::new();
    for (i, check) in CHECKS.iter().enumerate() {
        let start = Instant::now();
        let outcome = (check.run)();
        let elapsed = start.elapsed();
        let in_time = check.limit.is_none_or(|l| elapsed < l);
        let pass = outcome.pass && in_time;
        all_pass &= pass;
        let limit = check.limit.map(|l| format!(" (limit {} s)", l.as_secs())).unwrap_or_default();
        println!(
            "[{:02}] {} {}: {:.2} s{limit}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            check.title,
            elapsed.as_secs_f64()
        );
        if !pass || std::env::var_os("LSB_ACCEPTANCE_VERBOSE").is_some() {
            for line in outcome.report.lines() {
                println!("       {line}");
            }
        }
        reports.push(outcome.report);
    }
    let repeat: Vec<String> = CHECKS.iter().map(|c| (c.run)().report).collect();
    let differing: Vec<usize> = (0..CHECKS.len()).filter(|&i| reports[i] != repeat[i]).map(|i| i + 1).collect();
    let deterministic = differing.is_empty();
    all_pass &= deterministic;
    println!(
        "[10] {} reports of checks 01-09 byte-identical on rerun{}",
        if deterministic { "PASS" } else { "FAIL" },
        if deterministic { String::new() } else { format!(": differing {differing:?}") }
    );
    if !all_pass {
        std::process::exit(1);
    }
}
