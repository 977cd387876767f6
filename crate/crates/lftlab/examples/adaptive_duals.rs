//! Regular versus adaptive dual grids on the two piecewise-linear examples, with
//! the multiplicity `W` that sets the post-selection success probability.

use lftlab::fixtures::{ex2, ex3};
use lftlab::lft::default_epsilon;
use lftlab::{
    discrete_gradients, int, lft_adaptive, lft_regular, nontrivial_dual_range, regular_dual_grid, witness_params,
    AdaptiveVariant, FunctionSpec,
};

fn show(name: &str, f: &FunctionSpec) -> lftlab::Result<()> {
    let g = discrete_gradients(f, int(1))?;
    let dual = regular_dual_grid(nontrivial_dual_range(&g), 5)?;
    let r = lft_regular(f, &dual)?;
    let g = discrete_gradients(f, default_epsilon(&dual))?;
    let w = witness_params(&g, f.grid(), &dual)?;
    println!("{name}: gradients {}", join(g.slopes()));
    println!("  regular   s = {}\n            f* = {}", join(&dual.points()), join(&r.values));
    println!("  W = {}, K/(nW) = {}, optimizers {:?}", w.w, w.success_probability, r.optimizer_index);
    for (label, v) in [("centered", AdaptiveVariant::Centered), ("right", AdaptiveVariant::Right), ("left", AdaptiveVariant::Left)] {
        let a = lft_adaptive(f, v)?;
        println!("  {label:<9} s = {}\n            f* = {}", join(&a.dual.points()), join(&a.values));
    }
    Ok(())
}

fn join(v: &[lftlab::Rational]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn main() -> lftlab::Result<()> {
    show("ex2", &ex2())?;
    show("ex3", &ex3())
}
