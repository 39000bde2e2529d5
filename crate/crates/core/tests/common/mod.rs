#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use ncat_galois::descent::preorder_closure;
use ncat_galois::library::*;
use ncat_galois::limits::{coproduct, product, terminal};
use ncat_galois::reflect::reflect;
use ncat_galois::{FunctorSearch, NCat, NCatParts, NFunctor};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const MAX_LEVEL: usize = 40;

fn fits(c: &NCat) -> bool {
    (0..=c.n()).all(|l| c.len(l) <= MAX_LEVEL)
}

pub fn monoids() -> Vec<NCat> {
    let z2 = vec![vec![0, 1], vec![1, 0]];
    let z3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
    let and = vec![vec![0, 1], vec![1, 1]];
    let left_zero = vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]];
    vec![
        monoid(&["e", "s"], &z2).unwrap(),
        monoid(&["e", "r", "rr"], &z3).unwrap(),
        monoid(&["1", "0"], &and).unwrap(),
        monoid(&["e", "p", "q"], &left_zero).unwrap(),
    ]
}

/// Small named n-categories, all of dimension exactly `n`.
pub fn seeds(n: usize) -> Vec<Arc<NCat>> {
    let mut out = vec![terminal(n), discrete(n, &["p", "q"]), discrete(n, &["p", "q", "r"])];
    if n == 0 {
        return out.into_iter().map(Arc::new).collect();
    }
    for len in 1..=3 {
        out.push(chain(n, len));
    }
    for d in 0..=n {
        out.push(globe(d, n));
    }
    for d in 1..=n {
        out.push(raise(&parallel_cells(d, &["u", "v"]), n));
    }
    out.push(raise(&parallel_cells(1, &["u", "v", "w"]), n));
    for m in monoids() {
        out.push(raise(&m, n));
    }
    if n >= 2 {
        out.push(raise(&walking_two_cell(), n));
        out.push(raise(&parallel_two_cells(), n));
        out.push(raise(&double_delooping(&["e", "s"], &[vec![0, 1], vec![1, 0]]).unwrap(), n));
        for m in monoids().into_iter().take(2) {
            out.push(raise(&suspend(&Arc::new(m)), n));
        }
    }
    out.into_iter().map(Arc::new).collect()
}

/// All ordered pairs of distinct parallel top cells.
pub fn parallel_pairs(c: &NCat) -> Vec<(usize, usize)> {
    let m = c.n();
    let mut out = Vec::new();
    for a in 0..c.len(m) {
        for b in 0..c.len(m) {
            if a != b && (m == 0 || (c.src(m, a) == c.src(m, b) && c.tgt(m, a) == c.tgt(m, b))) {
                out.push((a, b));
            }
        }
    }
    out
}

/// A random n-category built from the seeds by products, coproducts,
/// suspensions, preorder closures, reflections and sub-n-categories.
pub fn random_ncat(rng: &mut ChaCha8Rng, n: usize, depth: usize) -> Arc<NCat> {
    use rand::Rng;
    let seeds = seeds(n);
    if depth == 0 {
        return seeds.choose(rng).unwrap().clone();
    }
    let pick = rng.gen_range(0..8);
    let out = match pick {
        0 => {
            let (a, b) = (random_ncat(rng, n, depth - 1), random_ncat(rng, n, depth - 1));
            product(&a, &b).apex
        }
        1 => {
            let (a, b) = (random_ncat(rng, n, depth - 1), random_ncat(rng, n, depth - 1));
            coproduct(&[a, b], n).unwrap().apex
        }
        2 if n >= 1 => Arc::new(suspend(&random_ncat(rng, n - 1, depth - 1))),
        3 if n >= 1 => {
            let s = random_ncat(rng, n - 1, depth - 1);
            let pairs = parallel_pairs(&s);
            let gens: Vec<(usize, usize)> = pairs.into_iter().filter(|_| rng.gen_bool(0.4)).collect();
            Arc::new(preorder_closure(&s, &gens).unwrap())
        }
        4 => reflect(&random_ncat(rng, n, depth - 1)).image,
        5 => {
            let a = random_ncat(rng, n, depth - 1);
            let gens: Vec<(usize, usize)> = (0..=n)
                .flat_map(|l| (0..a.len(l)).map(move |x| (l, x)))
                .filter(|_| rng.gen_bool(0.3))
                .collect();
            if gens.is_empty() {
                a
            } else {
                sub_ncat(&a, &gens).0
            }
        }
        _ => seeds.choose(rng).unwrap().clone(),
    };
    if fits(&out) {
        out
    } else {
        seeds.choose(rng).unwrap().clone()
    }
}

/// A random functor, found by searching with shuffled candidate orders.
pub fn random_functor(rng: &mut ChaCha8Rng, a: &Arc<NCat>, b: &Arc<NCat>) -> Option<NFunctor> {
    let rank: Vec<Vec<usize>> = (0..=b.n())
        .map(|l| {
            let mut r: Vec<usize> = (0..b.len(l)).collect();
            r.shuffle(rng);
            r
        })
        .collect();
    FunctorSearch::new(a, b).rank(rank).first()
}

/// An isomorphic copy of `c` with every level's indices shuffled.
pub fn permuted(rng: &mut ChaCha8Rng, c: &NCat) -> NCat {
    let n = c.n();
    let perm: Vec<Vec<usize>> = (0..=n)
        .map(|l| {
            let mut p: Vec<usize> = (0..c.len(l)).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    let old = c.parts();
    let mut p = NCatParts::empty(n);
    for l in 0..=n {
        let mut names = vec![String::new(); c.len(l)];
        for x in 0..c.len(l) {
            names[perm[l][x]] = old.names[l][x].clone();
        }
        p.names[l] = names;
        if l > 0 {
            let mut src = vec![0; c.len(l)];
            let mut tgt = vec![0; c.len(l)];
            for x in 0..c.len(l) {
                src[perm[l][x]] = perm[l - 1][old.src[l][x]];
                tgt[perm[l][x]] = perm[l - 1][old.tgt[l][x]];
            }
            let mut idn = vec![0; c.len(l - 1)];
            for y in 0..c.len(l - 1) {
                idn[perm[l - 1][y]] = perm[l][old.idn[l][y]];
            }
            p.src[l] = src;
            p.tgt[l] = tgt;
            p.idn[l] = idn;
            for i in 0..l {
                p.comp[l][i] = old.comp[l][i]
                    .iter()
                    .map(|(&(a, b), &r)| ((perm[l][a], perm[l][b]), perm[l][r]))
                    .collect();
            }
        }
    }
    p.validate().unwrap()
}

/// Top-level relation of an n-preorder as pairs of boundary names.
pub fn relation(c: &NCat) -> BTreeSet<(String, String)> {
    let n = c.n();
    (0..c.len(n))
        .map(|x| (c.name(n - 1, c.src(n, x)).to_string(), c.name(n - 1, c.tgt(n, x)).to_string()))
        .collect()
}

pub fn arb_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
