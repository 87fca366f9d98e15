use drht_core::laws::{run_suite, LawConfig};
fn main() {
    let start = std::time::Instant::now();
    let cfg = LawConfig { trials: 50, seed: 1, budget: 1_000_000, workers: 1 };
    let report = run_suite(None, cfg);
    for row in &report.rows {
        println!("{:40} passed {:3} skipped {:3} violations {}", row.law, row.passed, row.skipped, row.violations.len());
    }
    println!("elapsed: {:?}", start.elapsed());
}
