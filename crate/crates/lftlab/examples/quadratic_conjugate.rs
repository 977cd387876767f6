//! Discrete conjugate of `x^2 - 3x/4 + 1/2` on [0, 1], compared with the
//! continuous conjugate as the grid is refined.

use lftlab::fixtures::{ex1, ex1_conjugate, ex1_lipschitz, quadratic_ex1};
use lftlab::{convergence_gap, discrete_gradients, int, lft_brute, lft_regular, nontrivial_dual_range, regular_dual_grid};
use num_traits::ToPrimitive;

fn main() -> lftlab::Result<()> {
    let f = ex1();
    let g = discrete_gradients(&f, int(1))?;
    let dual = regular_dual_grid(nontrivial_dual_range(&g), 4)?;
    let r = lft_regular(&f, &dual)?;
    let brute = lft_brute(&f, &dual);

    println!("{:>6} {:>8} {:>8} {:>9} {:>3}", "s", "f*", "brute", "cont.", "x*");
    for j in 0..r.len() {
        let s = dual.point(j);
        println!(
            "{:>6} {:>8} {:>8} {:>9} {:>3}",
            s.to_string(),
            r.values[j].to_string(),
            brute.values[j].to_string(),
            ex1_conjugate(&s).to_string(),
            r.optimizer_index[j]
        );
    }

    println!("\nrefinement (K = n):");
    for e in 3..=10 {
        let n = 1usize << e;
        let f = quadratic_ex1(n);
        let g = discrete_gradients(&f, int(1))?;
        let dual = regular_dual_grid(nontrivial_dual_range(&g), n)?;
        let gap = convergence_gap(&f, ex1_conjugate, &dual)?;
        let bound = int(2) * ex1_lipschitz() * f.grid().gamma_x();
        println!("  n={n:>5}  max gap {:.3e}  bound {:.3e}", gap.to_f64().unwrap(), bound.to_f64().unwrap());
    }
    Ok(())
}
