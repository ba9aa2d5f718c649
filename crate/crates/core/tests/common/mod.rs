//! Random problem generators shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tamed_index::{Character, FixedComponent, NormalWeight, Parity, Rational, Summand, TamingData, Weight, Window};

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn weight(rng: &mut ChaCha8Rng, rank: usize, r: i64) -> Weight {
    Weight::new((0..rank).map(|_| rng.gen_range(-r..=r)).collect())
}

pub fn taming(rng: &mut ChaCha8Rng, rank: usize) -> TamingData {
    loop {
        let v: Vec<i64> = (0..rank).map(|_| rng.gen_range(-3..=3)).collect();
        if v.iter().any(|&x| x != 0) {
            return TamingData::from_integers(&v).unwrap();
        }
    }
}

fn normal(rng: &mut ChaCha8Rng, v: &TamingData, dim: u32) -> NormalWeight {
    loop {
        let w = weight(rng, v.rank(), 2);
        if v.pair(&w) != q(0) {
            let degree = if dim == 2 { rng.gen_range(-2..=2) } else { 0 };
            return NormalWeight { weight: w, degree };
        }
    }
}

/// A point or surface component with one to three normal lines.
pub fn component(rng: &mut ChaCha8Rng, v: &TamingData, label: String) -> FixedComponent {
    let dim = if rng.gen_bool(0.5) { 0 } else { 2 };
    let normals = rng.gen_range(1..=3);
    let summands = rng.gen_range(1..=3);
    FixedComponent {
        label,
        dim,
        genus: if dim == 2 { rng.gen_range(0..=3) } else { 0 },
        normal_weights: (0..normals).map(|_| normal(rng, v, dim)).collect(),
        summands: (0..summands)
            .map(|_| Summand {
                weight: weight(rng, v.rank(), 2),
                parity: if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd },
                rank: rng.gen_range(1..=2),
                twist_degree: if dim == 2 { rng.gen_range(-2..=2) } else { 0 },
            })
            .collect(),
    }
}

pub struct RandomProblem {
    pub v: TamingData,
    pub window: Window,
    pub components: Vec<FixedComponent>,
}

pub fn problem(rng: &mut ChaCha8Rng, max_components: usize) -> RandomProblem {
    let rank = rng.gen_range(1..=3);
    let v = taming(rng, rank);
    let count = rng.gen_range(1..=max_components);
    let components = (0..count).map(|i| component(rng, &v, format!("c{i}"))).collect();
    let lo = rng.gen_range(-6..=-1);
    let hi = rng.gen_range(lo..=3);
    let window = Window::closed(&v, q(lo), q(hi)).unwrap();
    RandomProblem { v, window, components }
}

/// A finite character with up to `len` entries.
pub fn finite(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> Character {
    let n = rng.gen_range(0..=len);
    let entries: Vec<(Weight, BigInt)> =
        (0..n).map(|_| (weight(rng, rank, 3), BigInt::from(rng.gen_range(-3i64..=3)))).collect();
    Character::finite(rank, entries).unwrap()
}
