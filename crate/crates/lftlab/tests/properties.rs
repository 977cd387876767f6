mod common;

use common::{random_1d, random_tensor};
use lftlab::hardness::{recover_via_point_queries, sample_conjugate_pair, HiddenStringInstance};
use lftlab::lft::{lft_regular, optimizer_map, pins_last, AdaptiveVariant};
use lftlab::multi::{lft_nd_brute_product, lft_nd_regular_ordered, separable_sum, shared_dual_grids};
use lftlab::qsim::{run_qlft_1d_adaptive, run_qlft_1d_regular, SizePolicy};
use lftlab::witness::{dual_index_j, membership_a, multiplicities, witness_params};
use lftlab::{
    discrete_gradients, int, lft_adaptive, nontrivial_dual_range, rat, regular_dual_grid, DualGrid, FunctionSpec,
    Rational, RegularGrid,
};
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, n: usize, k: usize) -> (FunctionSpec, DualGrid) {
    let f = random_1d(&mut ChaCha8Rng::seed_from_u64(seed), n);
    let g = discrete_gradients(&f, int(1)).unwrap();
    let dual = regular_dual_grid(nontrivial_dual_range(&g), k).unwrap();
    (f, dual)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fenchel_young_gaps_vanish_only_where_assigned(seed in any::<u64>(), n in 3usize..40, k in 2usize..40) {
        let (f, dual) = instance(seed, n, k);
        let r = lft_regular(&f, &dual).unwrap();
        for (j, row) in r.fenchel_young_gaps(&f).iter().enumerate() {
            prop_assert!(row.iter().all(|gap| !gap.is_negative()));
            prop_assert!(row[r.optimizer_index[j]].is_zero());
        }
    }

    #[test]
    fn conjugate_is_discretely_convex(seed in any::<u64>(), n in 3usize..40, k in 3usize..40) {
        let (f, dual) = instance(seed, n, k);
        let v = lft_regular(&f, &dual).unwrap().values;
        for w in v.windows(3) {
            prop_assert!(!(w[2].clone() - &w[1] - &w[1] + &w[0]).is_negative());
        }
    }

    #[test]
    fn relabeling_is_a_bijection_onto_dual_indices(seed in any::<u64>(), n in 3usize..30, k in 2usize..30) {
        let (f, dual) = instance(seed, n, k);
        let g = discrete_gradients(&f, lftlab::lft::default_epsilon(&dual)).unwrap();
        let w = multiplicities(&g, &dual).into_iter().max().unwrap();
        let mut hits = vec![0usize; k];
        for i in 0..n {
            for m in 0..w {
                let j = dual_index_j(i, m, &g, &dual).unwrap();
                prop_assert_eq!(j.is_some(), membership_a(i, m, &g, &dual).unwrap());
                if let Some(j) = j {
                    hits[j] += 1;
                }
            }
        }
        prop_assert!(hits.iter().all(|&h| h == 1));
    }

    #[test]
    fn multiplicity_brackets_the_floor_formula(seed in any::<u64>(), n in 4usize..40, k in 2usize..40) {
        let (f, dual) = instance(seed, n, k);
        prop_assume!(dual.gamma_s().is_some_and(|g| !g.is_zero()));
        let g = discrete_gradients(&f, lftlab::lft::default_epsilon(&dual)).unwrap();
        let w = witness_params(&g, f.grid(), &dual).unwrap();
        // Pinning the top dual point to the last primal point can take one point
        // from the interval that realizes the floor.
        let pinned = usize::from(pins_last(&g, &dual));
        prop_assert!(w.floor_formula_w.saturating_sub(pinned).max(1) <= w.w && w.w <= w.floor_formula_w + 1,
            "W={} floor={} pinned={}", w.w, w.floor_formula_w, pinned);
    }

    #[test]
    fn biconjugate_on_gradient_duals_recovers_samples(seed in any::<u64>(), n in 3usize..30) {
        let f = random_1d(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let g = discrete_gradients(&f, int(1)).unwrap();
        let mut slopes = g.slopes().to_vec();
        slopes.dedup();
        let dual = DualGrid::explicit(slopes).unwrap();
        let fstar = lft_regular(&f, &dual).unwrap().values;
        for (i, x) in f.grid().points().iter().enumerate() {
            let bi = (0..dual.len()).map(|j| dual.point(j) * x - &fstar[j]).max().unwrap();
            prop_assert_eq!(&bi, f.sample(i));
        }
    }

    #[test]
    fn sentinel_offset_does_not_move_interior_optimizers(seed in any::<u64>(), n in 3usize..30, k in 2usize..30, e in 1i64..50) {
        let (f, dual) = instance(seed, n, k);
        let a = optimizer_map(&discrete_gradients(&f, rat(e, 7)).unwrap(), &dual).unwrap();
        let b = optimizer_map(&discrete_gradients(&f, int(e)).unwrap(), &dual).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn float_mode_tracks_exact_mode(seed in any::<u64>(), n in 3usize..30, k in 2usize..30) {
        let (f, dual) = instance(seed, n, k);
        let exact = lft_regular(&f, &dual).unwrap().values;
        let to = |r: &Rational| r.to_f64().unwrap();
        let grid = RegularGrid::new(to(f.grid().x0()), to(f.grid().gamma_x()), n).unwrap();
        let ff = FunctionSpec::new(grid, f.samples().iter().map(to).collect()).unwrap();
        let df = DualGrid::explicit(dual.points().iter().map(to).collect()).unwrap();
        let approx = lftlab::lft::lft_regular_clamped(&ff, &df).unwrap().values;
        for (a, b) in exact.iter().zip(&approx) {
            prop_assert!((to(a) - b).abs() <= 1e-6);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn simulator_steps_preserve_norm_exactly(seed in any::<u64>(), n in 3usize..24, k in 2usize..24) {
        let f = random_1d(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let run = run_qlft_1d_regular(&f, k, seed, SizePolicy::Embed).unwrap();
        prop_assert!(run.step_trace.iter().all(|s| s.norm == int(1)));
        prop_assert!(run.final_state.is_normalized());
        let run = run_qlft_1d_adaptive(&f, SizePolicy::Embed).unwrap();
        prop_assert!(run.step_trace.iter().all(|s| s.norm == int(1)));
        prop_assert_eq!(run.attempts, 1);
    }

    #[test]
    fn same_seed_same_transcript(seed in any::<u64>(), n in 3usize..16, k in 2usize..16) {
        let f = random_1d(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let a = run_qlft_1d_regular(&f, k, seed, SizePolicy::Embed).unwrap();
        let b = run_qlft_1d_regular(&f, k, seed, SizePolicy::Embed).unwrap();
        prop_assert_eq!(a.transcript(), b.transcript());
        prop_assert_eq!(serde_json::to_string(&a.summary()).unwrap(), serde_json::to_string(&b.summary()).unwrap());
    }

    #[test]
    fn axis_order_is_irrelevant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims = [rng.gen_range(3..7), rng.gen_range(3..7)];
        let f = random_tensor(&mut rng, &dims);
        let duals = shared_dual_grids(&f, &[rng.gen_range(2..7), rng.gen_range(2..7)]).unwrap();
        let a = lft_nd_regular_ordered(&f, &duals, &[0, 1]).unwrap().values;
        let b = lft_nd_regular_ordered(&f, &duals, &[1, 0]).unwrap().values;
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a, lft_nd_brute_product(&f, &duals).unwrap().values);
    }

    #[test]
    fn separable_sums_transform_termwise(seed in any::<u64>(), n in 3usize..9, k in 2usize..9) {
        let q = random_1d(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let f = separable_sum(&q, 2);
        let duals = shared_dual_grids(&f, &[k, k]).unwrap();
        let one = lft_regular(&q, &duals[0]).unwrap().values;
        let two = lftlab::multi::lft_nd_regular(&f, &duals).unwrap().values;
        for (p, v) in two.iter().enumerate() {
            prop_assert_eq!(v, &(one[p / k].clone() + &one[p % k]));
        }
    }

    #[test]
    fn adaptive_duals_pick_their_own_index(seed in any::<u64>(), n in 3usize..40) {
        let f = random_1d(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let r = lft_adaptive(&f, AdaptiveVariant::Centered).unwrap();
        for (i, x) in f.grid().points().iter().enumerate() {
            prop_assert_eq!(&r.values[i], &(r.dual.point(i) * x - f.sample(i)));
        }
    }

    #[test]
    fn hidden_string_identities(bits in proptest::collection::vec(0u8..=1, 1..7), seed in any::<u64>()) {
        let mut inst = HiddenStringInstance::point_query(bits.clone()).unwrap();
        let r = recover_via_point_queries(&mut inst).unwrap();
        prop_assert_eq!(r.recovered, bits.clone());
        let mut inst = HiddenStringInstance::sampling(bits.clone()).unwrap();
        let p = sample_conjugate_pair(&mut inst, seed).unwrap();
        let dot: i64 = p.s.iter().zip(&bits).map(|(a, b)| (a * b) as i64).sum();
        prop_assert_eq!(&p.value, &int(dot));
        prop_assert_eq!(p.brute_value, Some(p.value));
    }
}
