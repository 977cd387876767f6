//! Moving conjugate values from a register into amplitudes. The per-try success
//! probability is `omega`, the mean squared normalized value.

use lftlab::fixtures::{ex1, quadratic_ex1};
use lftlab::qsim::{
    attach_gradients, digital_to_analog, finalize_conjugate, indicator_postselect, prepare_superposition,
    run_qlft_1d_regular, SizePolicy,
};
use lftlab::{int, rat, DualGrid};
use num_traits::ToPrimitive;

fn main() -> lftlab::Result<()> {
    let run = run_qlft_1d_regular(&ex1(), 4, 0, SizePolicy::Embed)?;
    let analog = digital_to_analog(&run.final_state, 0)?;
    println!("ex1, K = 4: omega = {}", analog.omega);
    for (label, amp) in analog.state.iter() {
        println!("  {label}  amplitude {:+.4}", amp.to_f64());
    }

    let k = 1usize << 12;
    let dual = DualGrid::regular(rat(-1, 2), rat(3, 2) / int(k as i64 - 1), k)?;
    let state = attach_gradients(&prepare_superposition(&quadratic_ex1(k), SizePolicy::Strict)?)?;
    let (post, _) = indicator_postselect(&state, &dual, 0)?;
    let fine = digital_to_analog(&finalize_conjugate(&post, &dual)?, 0)?;
    println!(
        "fine grid, K = n = 4096 over [-1/2, 1]: omega = {:.5} (continuous limit 1841/4805 = {:.5}), AA tries {:.2}",
        fine.omega.to_f64().unwrap(),
        1841.0 / 4805.0,
        fine.expected_attempts
    );
    Ok(())
}
