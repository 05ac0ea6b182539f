#![allow(dead_code)]

use prior_forge::{make_surface, DivisorClass, SheafExpr, SurfaceParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn surface(rng: &mut ChaCha8Rng) -> SurfaceParams {
    make_surface(rng.gen_range(0..4), rng.gen_range(0..5)).unwrap()
}

pub fn divisor(rng: &mut ChaCha8Rng, span: i64) -> DivisorClass {
    DivisorClass::new(rng.gen_range(-span..=span), rng.gen_range(-span..=span))
}

pub fn leaf(rng: &mut ChaCha8Rng) -> SheafExpr {
    let d = divisor(rng, 6);
    match rng.gen_range(0..3) {
        0 => SheafExpr::line(d),
        _ => SheafExpr::ideal(d, rng.gen_range(0..12), rng.gen_bool(0.7)).unwrap(),
    }
}

/// Random bracketing of `rank` leaves.
pub fn tree(rng: &mut ChaCha8Rng, rank: usize) -> SheafExpr {
    tree_with(rng, rank, &mut leaf)
}

pub fn tree_with(
    rng: &mut ChaCha8Rng,
    rank: usize,
    make_leaf: &mut dyn FnMut(&mut ChaCha8Rng) -> SheafExpr,
) -> SheafExpr {
    if rank == 1 {
        return make_leaf(rng);
    }
    let left = rng.gen_range(1..rank);
    let sub = tree_with(rng, left, make_leaf);
    let quot = tree_with(rng, rank - left, make_leaf);
    SheafExpr::extension(sub, quot, rng.gen_bool(0.5))
}
