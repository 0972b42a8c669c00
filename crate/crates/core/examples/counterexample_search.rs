//! Seeded counterexample search. Dropping a hypothesis must produce
//! violations; each kept witness replays to the same verdict.

use spdlab::lab::{replay, search_counterexamples, Suite};

fn main() -> spdlab::Result<()> {
    let report = search_counterexamples(Suite::NegativeControls, 400, 42, None, 4)?;
    println!("{} trials, {} violations", report.trials, report.violations);
    for (control, count) in &report.controls {
        println!("  {control:<22} {count}");
    }
    for w in report.witnesses.iter().take(4) {
        let again = replay(w)?;
        println!("trial {:>3} (seed {:>20}): slack {:+.4e}, replayed {:+.4e}", w.trial, w.seed, w.slack, again.slack);
    }

    // a suite whose hypotheses hold keeps its worst trials as witnesses too
    let clean = search_counterexamples(Suite::WeightedPower, 200, 42, None, 4)?;
    println!("{}: passed {}, {} violations, exit code {}", Suite::WeightedPower, clean.passed, clean.violations, clean.exit_code());
    Ok(())
}
