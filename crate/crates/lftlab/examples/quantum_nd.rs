// The nested multidimensional algorithm treated as an experiment: every run is
// compared with the classical nested transform and the verdict is printed.

use lftlab::multi::{quadratic_form, TensorGrid};
use lftlab::qsim::{run_qlft_nd_regular, SizePolicy};
use lftlab::{int, rat, RegularGrid};

fn main() -> lftlab::Result<()> {
    let axis = RegularGrid::new(int(0), rat(1, 3), 4)?;
    let cases = [
        ("separable, kappa = 1", vec![vec![int(1), int(0)], vec![int(0), int(1)]]),
        ("diagonal, kappa = 4", vec![vec![int(1), int(0)], vec![int(0), int(4)]]),
        ("coupled", vec![vec![int(2), rat(1, 2)], vec![rat(1, 2), int(3)]]),
    ];
    for (seed, (name, q)) in cases.into_iter().enumerate() {
        let f = quadratic_form(TensorGrid::uniform(axis.clone(), 2), &q, &[rat(-1, 2), int(0)]);
        let run = run_qlft_nd_regular(&f, &[4, 4], seed as u64, SizePolicy::Strict)?;
        let v = run.verification.expect("regular runs are verified");
        let passes: Vec<String> = run.pass_acceptance.iter().map(|p| p.to_string()).collect();
        println!(
            "{name:<22} {:?}  labels {}/{}  wrong values {}  pass acceptance [{}]  seed {}",
            v.status,
            v.observed_labels,
            v.expected_labels,
            v.value_mismatches.len(),
            passes.join(", "),
            v.rng_seed
        );
    }
    Ok(())
}
