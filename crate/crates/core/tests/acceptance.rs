use std::process::ExitCode;
use std::time::Duration;

use bstkit_core::suites::{self, SuiteReport};

const SEED: u64 = 0x5eed;

fn main() -> ExitCode {
    let grid_limit = Duration::from_secs(60);
    let mut grid = suites::flat_oracle(1000, SEED);
    if grid.elapsed >= grid_limit {
        grid.failures.push(format!("took {:?}", grid.elapsed));
    }

    let criteria: Vec<(u32, SuiteReport)> = vec![
        (1, suites::examples(Duration::from_millis(100))),
        (2, suites::translation_size(Duration::from_secs(1))),
        (3, suites::equisatisfiability(200, 200, SEED)),
        (4, grid),
        (5, suites::flatness(100, SEED)),
        (6, suites::transformation(100, SEED)),
        (7, suites::atom_order(100, SEED)),
        (8, suites::bounds(20, Duration::from_secs(5))),
        (9, suites::axioms(10_000, SEED)),
        (10, suites::membership_downgrade()),
    ];

    let mut failed = 0;
    for (id, report) in &criteria {
        println!("criterion {id:>2}: {report}");
        failed += usize::from(!report.passed());
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
