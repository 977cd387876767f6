// Nested one-dimensional passes on a 2D quadratic form, checked against the
// exhaustive oracle, plus the adaptive variant.

use lftlab::multi::{lft_nd_adaptive, lft_nd_brute, lft_nd_brute_product, lft_nd_regular, quadratic_form, shared_dual_grids, TensorGrid};
use lftlab::{int, rat, RegularGrid};

fn main() -> lftlab::Result<()> {
    let axis = RegularGrid::new(rat(-1, 1), rat(1, 4), 9)?;
    let grid = TensorGrid::uniform(axis, 2);
    // kappa = 3: eigenvalues of [[2, 1], [1, 2]] are 1 and 3.
    let q = vec![vec![int(2), int(1)], vec![int(1), int(2)]];
    let f = quadratic_form(grid, &q, &[rat(1, 2), int(0)]);

    let duals = shared_dual_grids(&f, &[8, 8])?;
    let nested = lft_nd_regular(&f, &duals)?;
    let brute = lft_nd_brute_product(&f, &duals)?;
    println!("dual grid per axis: {} .. {} ({} points)", duals[0].first(), duals[0].last(), duals[0].len());
    println!("nested == brute on all {} points: {}", nested.values.len(), nested.values == brute.values);
    println!("smallest Fenchel-Young gap: {}", nested.min_fenchel_young_gap(&f));

    let adaptive = lft_nd_adaptive(&f)?;
    let check = lft_nd_brute(&f, &adaptive.duals.to_list())?;
    let own = (0..adaptive.values.len()).filter(|&p| adaptive.optimizers[p] == f.shape().unflat(p)).count();
    println!(
        "adaptive: {} dual points, values exact: {}, own-index optimizers: {own}",
        adaptive.values.len(),
        adaptive.values == check.values
    );
    Ok(())
}
