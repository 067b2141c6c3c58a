//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the summary is always printed; exits nonzero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use subdirekt::suites::{self, Check, EXTRACTION_SAMPLES, EXTRACTION_SEED};
use subdirekt::witness::{non_group_family, subdirect_family};

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> Vec<Check>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "separating-set ground truth on {1,2,3} and {1,2,4}",
        budget: Some(Duration::from_secs(1)),
        run: suites::separating_ground_truth,
    },
    Criterion {
        id: 2,
        title: "greedy extension to 10 elements with exhaustive rechecks",
        budget: Some(Duration::from_secs(60)),
        run: suites::greedy_extension,
    },
    Criterion {
        id: 3,
        title: "triple criterion vs relation oracle on 3-subsets of {1..12}",
        budget: None,
        run: || suites::triple_criterion_cross_check(12),
    },
    Criterion {
        id: 4,
        title: "freeness up to degree 8",
        budget: None,
        run: suites::freeness,
    },
    Criterion {
        id: 5,
        title: "indecomposables of S_M are 1 x M",
        budget: None,
        run: suites::indecomposable_generators,
    },
    Criterion {
        id: 6,
        title: "pairwise non-isomorphism over build_prefix({1,2,4}, 6)",
        budget: None,
        run: || suites::pairwise_non_isomorphism(6),
    },
    Criterion {
        id: 7,
        title: "diagonal lift T_M ≤ N^3 onto S_M",
        budget: None,
        run: suites::diagonal_lift,
    },
    Criterion {
        id: 8,
        title: "generator extraction over order-3 semigroups with relative identities",
        budget: Some(Duration::from_secs(120)),
        run: || suites::generator_extraction(EXTRACTION_SAMPLES, EXTRACTION_SEED),
    },
    Criterion {
        id: 9,
        title: "non-group and subdirect witness families over null {0,a}",
        budget: None,
        run: || {
            let mut c = suites::family_witnesses("non-group", non_group_family);
            c.extend(suites::family_witnesses("subdirect", subdirect_family));
            c
        },
    },
    Criterion {
        id: 10,
        title: "census counts and class inclusion",
        budget: None,
        run: suites::census_cross_check,
    },
    Criterion {
        id: 11,
        title: "numerical form of <3,5>",
        budget: None,
        run: suites::numerical_forms,
    },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let checks = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = c.budget.is_none_or(|b| elapsed <= b);
        let ok = !checks.is_empty() && checks.iter().all(|k| k.passed) && in_budget;
        let budget = c
            .budget
            .map(|b| format!(" (limit {}s)", b.as_secs()))
            .unwrap_or_default();
        println!(
            "criterion {:>2}: {} - {} [{:.2}s{}]",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            elapsed.as_secs_f64(),
            budget
        );
        for k in &checks {
            let mark = if k.passed { "ok  " } else { "FAIL" };
            if k.detail.is_empty() {
                println!("    {mark} {}", k.name);
            } else {
                println!("    {mark} {}: {}", k.name, k.detail);
            }
        }
        if !ok {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
