//! Register-level runs of the regular and adaptive algorithms on the third
//! example, where half of the expanded branches are rejected.

use lftlab::fixtures::ex3;
use lftlab::qsim::{run_qlft_1d_adaptive, run_qlft_1d_regular, SizePolicy};

fn main() -> lftlab::Result<()> {
    let f = ex3();
    // Five points: embed them in a three-qubit index register.
    let run = run_qlft_1d_regular(&f, 4, 7, SizePolicy::Embed)?;
    println!("regular, K = 4");
    print!("{}", run.transcript());
    println!("success probability {}  sampled attempts {}  AA rounds {}", run.success_probability, run.attempts, run.expected_aa_repetitions);
    for (j, v) in run.values()? {
        println!("  j={j} s={} f*={v}", run.dual[0].point(j));
    }
    let tries: u64 = (0..2000).map(|s| run.reseeded(s).attempts).sum();
    println!("empirical acceptance over 2000 runs: {:.4}", 2000.0 / tries as f64);

    let ada = run_qlft_1d_adaptive(&f, SizePolicy::Embed)?;
    println!("\nadaptive: attempts {}", ada.attempts);
    for label in ada.final_state.labels() {
        println!("  {label}");
    }
    Ok(())
}
