//! Acceptance criteria A1 to A7. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use partition_ops::check::{
    adem_r_sweep, bar_check, bm_agreement, dual_confluence, lie_suite, nishida_suite, stability,
    translation_bijection, CheckReport,
};
use partition_ops::par::Exec;
use partition_ops::Prime;

const EXEC: Exec = Exec::Parallel;

/// Tag, description and the sweeps that decide it.
type Criterion = (&'static str, &'static str, fn() -> Vec<CheckReport>);

fn a1() -> Vec<CheckReport> {
    (-2..=3)
        .map(|j| bm_agreement(Prime::two(), &[j], j - 30, j + 5, 16, EXEC))
        .collect()
}

fn a2() -> Vec<CheckReport> {
    let p3 = Prime::new(3).unwrap();
    let p5 = Prime::new(5).unwrap();
    let mut out: Vec<CheckReport> = [vec![1, 2], vec![1, 1, 2]]
        .iter()
        .map(|g| bm_agreement(p3, g, -25, 4, 9, EXEC))
        .collect();
    for g in [1, 2, -2] {
        out.push(bm_agreement(p5, &[g], -35, 4, 25, EXEC));
    }
    out
}

fn a3() -> Vec<CheckReport> {
    let mut out = Vec::new();
    for p in [Prime::two(), Prime::new(3).unwrap()] {
        out.push(dual_confluence(p, 8, 4, EXEC));
        out.push(adem_r_sweep(p, 12, 4, EXEC));
        out.push(translation_bijection(p, 4, 3, 12));
    }
    out
}

fn a4() -> Vec<CheckReport> {
    [-1i64, 0, 1]
        .iter()
        .map(|&j| {
            let lo = j.min(4 * j);
            bar_check(j, 4, lo, lo + 23, EXEC).unwrap_or_else(|e| {
                let mut r = CheckReport::new(format!("bar j={j}"));
                r.fail(e.to_string());
                r
            })
        })
        .collect()
}

fn a5() -> Vec<CheckReport> {
    let mut out = Vec::new();
    for p in [Prime::two(), Prime::new(3).unwrap()] {
        for gens in [vec![1], vec![2], vec![1, 2], vec![1, 1, 2], vec![1, 2, 3]] {
            out.push(lie_suite(p, &gens, 6));
        }
    }
    out
}

fn a6() -> Vec<CheckReport> {
    vec![
        nishida_suite(Prime::two(), 8, 4, EXEC),
        nishida_suite(Prime::new(3).unwrap(), 8, 4, EXEC),
    ]
}

fn a7() -> Vec<CheckReport> {
    [Prime::two(), Prime::new(3).unwrap(), Prime::new(5).unwrap()]
        .into_iter()
        .map(|p| stability(p, 4, 3, 12))
        .collect()
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("A1", "sequence-count agreement, p=2, one generator", a1),
        ("A2", "sequence-count agreement, p=3 and p=5", a2),
        ("A3", "Adem coherence and translation bijection", a3),
        ("A4", "bar homology equals admissible words, p=2", a4),
        ("A5", "restricted Lie axioms", a5),
        ("A6", "Nishida suite", a6),
        ("A7", "stability of operations", a7),
    ];
    let mut all = true;
    for (tag, what, run) in criteria {
        let start = Instant::now();
        let reports = run();
        let ok = reports.iter().all(CheckReport::passed);
        let cases: usize = reports.iter().map(|r| r.cases).sum();
        all &= ok;
        println!(
            "{tag} {} {what} ({cases} cases, {:.2?})",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed()
        );
        for r in reports.iter().filter(|r| !r.passed()) {
            println!("  {r}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
