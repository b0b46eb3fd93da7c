use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weilkit::cahiers::{
    eval_j, induced_action, random_dmorphism, random_object, DObject, JSpace, PROBE_ALGEBRAS,
};
use weilkit::prolong::FragmentSpace;
use weilkit::weil::WeilAlgebra;

fn presets() -> Vec<Arc<WeilAlgebra>> {
    PROBE_ALGEBRAS.iter().map(|n| WeilAlgebra::preset(n).unwrap()).collect()
}

/// Counts exponent vectors with every block degree at most `d` by direct
/// enumeration of all exponents up to `d` per variable.
fn brute_monomials(blocks: &[usize], d: u32) -> usize {
    let n: usize = blocks.iter().sum();
    let mut count = 0;
    let mut e = vec![0u32; n];
    loop {
        let mut start = 0;
        let ok = blocks.iter().all(|&b| {
            let s: u32 = e[start..start + b].iter().sum();
            start += b;
            s <= d
        });
        if ok {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            e[i] += 1;
            if e[i] <= d {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

fn space(width: usize) -> FragmentSpace {
    FragmentSpace::Euclidean(width)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eval_j_dimension_matches_enumeration(
        blocks in prop::collection::vec(0usize..=2, 1..=2),
        which in 0usize..4,
        width in 1usize..=3,
        d in 0u32..=3,
    ) {
        let w = presets()[which].clone();
        let c = DObject::with_blocks(blocks.clone(), &w);
        let j: JSpace = eval_j(&space(width), &c, d).unwrap();
        let expected = width * brute_monomials(&blocks, d) * w.dimension();
        prop_assert_eq!(j.dimension(), expected);
        prop_assert_eq!(j.dimension_formula(), expected as u64);
    }

    #[test]
    fn coordinates_round_trip(s in any::<u64>(), d in 0u32..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(s);
        let c = random_object(&mut r, 2, &presets());
        let j = eval_j(&space(r.gen_range(1..=2)), &c, d).unwrap();
        let v = j.sample(&mut r);
        prop_assert_eq!(j.from_coords(&j.coords(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn identity_arrow_acts_trivially(s in any::<u64>(), d in 0u32..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(s);
        let c = random_object(&mut r, 2, &presets());
        let x = space(r.gen_range(1..=2));
        let act = induced_action(&x, &weilkit::cahiers::DMorphism::identity(&c), d).unwrap();
        let v = act.source().sample(&mut r);
        prop_assert_eq!(act.apply(&v).unwrap(), v);
    }

    #[test]
    fn composites_stay_valid(s in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(s);
        let algebras = presets();
        let a = random_object(&mut r, 2, &algebras);
        let b = random_object(&mut r, 2, &algebras);
        let c = random_object(&mut r, 2, &algebras);
        let f = random_dmorphism(&mut r, &a, &b);
        let g = random_dmorphism(&mut r, &b, &c);
        let fg = f.then(&g).unwrap();
        prop_assert_eq!(fg.source(), &a);
        prop_assert_eq!(fg.target(), &c);
        prop_assert_eq!(&weilkit::cahiers::DMorphism::identity(&a).then(&f).unwrap(), &f);
        prop_assert_eq!(&f.then(&weilkit::cahiers::DMorphism::identity(&b)).unwrap(), &f);
    }
}
