// Normalizing grid spacing and gradient jumps leaves W unchanged; values map
// back through f*(s) = xi gamma_x^2 f~*(s~).

use lftlab::fixtures::ex3;
use lftlab::hardness::rescale_instance;
use lftlab::{discrete_gradients, int, lft_regular, nontrivial_dual_range, regular_dual_grid};

fn main() -> lftlab::Result<()> {
    let f = ex3();
    let dual = regular_dual_grid(nontrivial_dual_range(&discrete_gradients(&f, int(1))?), 5)?;
    let r = rescale_instance(&f, &dual)?;
    println!("xi = {}, gamma_x = {}, value scale = {}, dual scale = {}", r.xi, r.gamma_x, r.value_scale, r.dual_scale);
    println!("W = {}, W~ = {}, mapping exact: {}", r.w, r.w_tilde, r.mapping_exact);
    let a = lft_regular(&f, &dual)?;
    let b = lft_regular(&r.f, &r.dual)?;
    for j in 0..dual.len() {
        println!("  s={:<4} s~={:<4} f*={:<5} f~*={:<4}", dual.point(j).to_string(), r.dual.point(j).to_string(), a.values[j].to_string(), b.values[j].to_string());
    }
    Ok(())
}
