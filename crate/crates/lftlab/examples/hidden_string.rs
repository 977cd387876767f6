//! Recovering a hidden string from conjugate values: `d` point queries at the
//! unit vectors, or `d + t` random samples and a linear solve.

use lftlab::hardness::{bits_to_string, recover_via_point_queries, recover_via_sampling, HiddenStringInstance};

fn main() -> lftlab::Result<()> {
    let z = HiddenStringInstance::parse_bits("1011001")?;

    let mut inst = HiddenStringInstance::point_query(z.clone())?;
    let r = recover_via_point_queries(&mut inst)?;
    println!("point queries: recovered {} with {} oracle calls", bits_to_string(&r.recovered), r.queries);

    for t in [0, 2, 6] {
        let wins = (0..200)
            .filter(|&seed| {
                let mut inst = HiddenStringInstance::sampling(z.clone()).expect("binary string");
                recover_via_sampling(&mut inst, t, seed).expect("d <= 16").succeeded()
            })
            .count();
        println!("sampling with t = {t}: {wins}/200 recoveries (bound {:.3})", 1.0 - 0.5f64.powi(t as i32));
    }
    Ok(())
}
