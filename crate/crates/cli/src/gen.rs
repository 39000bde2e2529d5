//! Seeded random instances for the property suites.
//!
//! Every instance starts from a library of named seeds (points, discrete
//! sets, chains, globes, parallel cells, small monoids and deloopings) and
//! is grown by products, coproducts, suspensions, wedges, preorder closures
//! of random generator pairs, reflections and sub-n-categories. `size`
//! bounds the number of generating cells each step adds per level; the
//! result is capped at `NCAT_GALOIS_MAX_CELLS` cells per level.

use std::sync::Arc;

use ncat_galois::descent::preorder_closure;
use ncat_galois::library::*;
use ncat_galois::limits::{coproduct, product, terminal};
use ncat_galois::reflect::reflect;
use ncat_galois::{FunctorSearch, NCat, NCatParts, NFunctor};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

/// The per-level cell cap from `NCAT_GALOIS_MAX_CELLS`, 64 by default.
pub fn max_cells() -> usize {
    std::env::var("NCAT_GALOIS_MAX_CELLS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&k| k > 0)
        .unwrap_or(64)
}

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub size: usize,
    pub cap: usize,
    /// Number of combinator steps above the seeds.
    pub depth: usize,
}

impl GenConfig {
    pub fn new(size: usize) -> Self {
        GenConfig { size: size.max(1), cap: max_cells(), depth: 2 }
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn fits(&self, c: &NCat) -> bool {
        (0..=c.n()).all(|l| c.len(l) <= self.cap)
    }
}

const LETTERS: [&str; 6] = ["u", "v", "w", "x", "y", "z"];

fn monoid_seeds(size: usize) -> Vec<NCat> {
    let mut out = vec![monoid(&["e", "s"], &[vec![0, 1], vec![1, 0]]).unwrap(), monoid(&["1", "0"], &[vec![0, 1], vec![1, 1]]).unwrap()];
    if size >= 3 {
        out.push(monoid(&["e", "r", "rr"], &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap());
        out.push(monoid(&["e", "p", "q"], &[vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]]).unwrap());
    }
    out
}

/// The seed library in dimension `n`.
pub fn seeds(n: usize, size: usize) -> Vec<Arc<NCat>> {
    let objects: Vec<&str> = ["p", "q", "r", "s", "t", "o"].into_iter().take(size.min(6)).collect();
    let mut out = vec![terminal(n)];
    for k in 2..=objects.len() {
        out.push(discrete(n, &objects[..k]));
    }
    if n >= 1 {
        for len in 1..=size.min(4) {
            out.push(chain(n, len));
        }
        for d in 0..=n {
            out.push(globe(d, n));
        }
        for d in 1..=n {
            for k in 2..=size.min(LETTERS.len()) {
                out.push(raise(&parallel_cells(d, &LETTERS[..k]), n));
            }
        }
        for m in monoid_seeds(size) {
            out.push(raise(&m, n));
        }
    }
    if n >= 2 {
        out.push(raise(&walking_two_cell(), n));
        out.push(raise(&parallel_two_cells(), n));
        out.push(raise(&double_delooping(&["e", "s"], &[vec![0, 1], vec![1, 0]]).unwrap(), n));
        for m in monoid_seeds(size).into_iter().take(2) {
            out.push(raise(&suspend(&Arc::new(m)), n));
        }
    }
    out.into_iter().map(Arc::new).collect()
}

/// Ordered pairs of distinct parallel top cells.
pub fn parallel_pairs(c: &NCat) -> Vec<(usize, usize)> {
    let m = c.n();
    let mut out = Vec::new();
    if m == 0 {
        for a in 0..c.len(0) {
            for b in 0..c.len(0) {
                if a != b {
                    out.push((a, b));
                }
            }
        }
        return out;
    }
    for cells in c.by_boundary(m).values() {
        for &a in cells {
            for &b in cells {
                if a != b {
                    out.push((a, b));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Up to `size` random pairs of distinct parallel top cells of `s`.
pub fn random_generators(rng: &mut Rng8, s: &NCat, size: usize) -> Vec<(usize, usize)> {
    let pairs = parallel_pairs(s);
    let k = rng.gen_range(0..=size.min(pairs.len()));
    let mut gens: Vec<(usize, usize)> = pairs.choose_multiple(rng, k).copied().collect();
    gens.sort_unstable();
    gens
}

/// A random n-preorder: the closure of random generators on a random skeleton.
pub fn random_preorder(rng: &mut Rng8, n: usize, cfg: GenConfig) -> Arc<NCat> {
    assert!(n >= 1);
    for _ in 0..8 {
        let s = random_ncat(rng, n - 1, cfg.with_depth(cfg.depth.saturating_sub(1)));
        let gens = random_generators(rng, &s, cfg.size);
        let c = preorder_closure(&s, &gens).expect("generators are parallel");
        if cfg.fits(&c) {
            return Arc::new(c);
        }
    }
    reflect(&seeds(n, cfg.size)[0]).image
}

/// A random n-category.
pub fn random_ncat(rng: &mut Rng8, n: usize, cfg: GenConfig) -> Arc<NCat> {
    let seeds = seeds(n, cfg.size);
    if cfg.depth == 0 {
        return seeds.choose(rng).unwrap().clone();
    }
    let sub = cfg.with_depth(cfg.depth - 1);
    for _ in 0..8 {
        let out = match rng.gen_range(0..9) {
            0 => product(&random_ncat(rng, n, sub), &random_ncat(rng, n, sub)).apex,
            1 => coproduct(&[random_ncat(rng, n, sub), random_ncat(rng, n, sub)], n).expect("same dimension").apex,
            2 if n >= 1 => Arc::new(suspend(&random_ncat(rng, n - 1, sub))),
            3 if n >= 1 => {
                let homs: Vec<Arc<NCat>> = (0..rng.gen_range(1..=2)).map(|_| random_ncat(rng, n - 1, sub)).collect();
                let objects: Vec<String> = (0..=homs.len()).map(|k| format!("w{k}")).collect();
                let refs: Vec<&str> = objects.iter().map(String::as_str).collect();
                Arc::new(wedge(n, &homs, &refs).cat)
            }
            4 if n >= 1 => random_preorder(rng, n, sub),
            5 => reflect(&random_ncat(rng, n, sub)).image,
            6 => {
                let a = random_ncat(rng, n, sub);
                let cells: Vec<(usize, usize)> = (0..=n).flat_map(|l| (0..a.len(l)).map(move |x| (l, x))).collect();
                let k = rng.gen_range(1..=cfg.size.min(cells.len()).max(1));
                let gens: Vec<(usize, usize)> = cells.choose_multiple(rng, k).copied().collect();
                sub_ncat(&a, &gens).0
            }
            7 if n >= 1 => Arc::new(raise(&random_ncat(rng, n - 1, sub), n)),
            _ => seeds.choose(rng).unwrap().clone(),
        };
        if cfg.fits(&out) {
            return out;
        }
    }
    seeds.choose(rng).unwrap().clone()
}

/// A random functor `a -> b`, found by searching with shuffled candidate
/// orders. Exists whenever `b` has an object.
pub fn random_functor(rng: &mut Rng8, a: &Arc<NCat>, b: &Arc<NCat>) -> Option<NFunctor> {
    let rank: Vec<Vec<usize>> = (0..=b.n())
        .map(|l| {
            let mut r: Vec<usize> = (0..b.len(l)).collect();
            r.shuffle(rng);
            r
        })
        .collect();
    FunctorSearch::new(a, b).rank(rank).first()
}

/// An isomorphic copy with the indices of every level shuffled.
pub fn permuted(rng: &mut Rng8, c: &NCat) -> NCat {
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
        p.names[l] = vec![String::new(); c.len(l)];
        for (x, &y) in perm[l].iter().enumerate() {
            p.names[l][y] = old.names[l][x].clone();
        }
        if l == 0 {
            continue;
        }
        p.src[l] = vec![0; c.len(l)];
        p.tgt[l] = vec![0; c.len(l)];
        for x in 0..c.len(l) {
            p.src[l][perm[l][x]] = perm[l - 1][old.src[l][x]];
            p.tgt[l][perm[l][x]] = perm[l - 1][old.tgt[l][x]];
        }
        p.idn[l] = vec![0; c.len(l - 1)];
        for y in 0..c.len(l - 1) {
            p.idn[l][perm[l - 1][y]] = perm[l][old.idn[l][y]];
        }
        for i in 0..l {
            p.comp[l][i] = old.comp[l][i].iter().map(|(&(a, b), &r)| ((perm[l][a], perm[l][b]), perm[l][r])).collect();
        }
    }
    p.validate().expect("a relabeling of a valid n-category")
}

/// Which table a mutation touched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    Src(usize),
    Tgt(usize),
    Idn(usize),
    Comp(usize, usize),
}

/// One table entry redirected to a different cell of the right level.
#[derive(Debug, Clone)]
pub struct Mutant {
    pub parts: NCatParts,
    pub table: Table,
    /// `(later, earlier)` for composition tables, otherwise `(cell, cell)`.
    pub key: (usize, usize),
    pub old: usize,
    pub new: usize,
}

impl Mutant {
    pub fn describe(&self) -> String {
        let p = &self.parts;
        let (lk, lv) = match self.table {
            Table::Src(l) | Table::Tgt(l) => (l, l - 1),
            Table::Idn(l) => (l - 1, l),
            Table::Comp(j, _) => (j, j),
        };
        let key = match self.table {
            Table::Comp(..) => format!("{}|{}", p.names[lk][self.key.0], p.names[lk][self.key.1]),
            _ => p.names[lk][self.key.0].clone(),
        };
        format!("{:?}[{key}]: {} -> {}", self.table, p.names[lv][self.old], p.names[lv][self.new])
    }
}

/// A random single-entry mutation, or `None` if no entry has an alternative value.
pub fn mutate(rng: &mut Rng8, c: &NCat) -> Option<Mutant> {
    let p = c.parts();
    let n = p.n;
    let mut slots: Vec<(Table, (usize, usize))> = Vec::new();
    for l in 1..=n {
        if p.names[l - 1].len() > 1 {
            for x in 0..p.names[l].len() {
                slots.push((Table::Src(l), (x, x)));
                slots.push((Table::Tgt(l), (x, x)));
            }
        }
        if p.names[l].len() > 1 {
            for y in 0..p.names[l - 1].len() {
                slots.push((Table::Idn(l), (y, y)));
            }
            for i in 0..l {
                for &k in p.comp[l][i].keys() {
                    slots.push((Table::Comp(l, i), k));
                }
            }
        }
    }
    let &(table, key) = slots.choose(rng)?;
    let mut parts = p.clone();
    let (size, slot): (usize, &mut usize) = match table {
        Table::Src(l) => (p.names[l - 1].len(), &mut parts.src[l][key.0]),
        Table::Tgt(l) => (p.names[l - 1].len(), &mut parts.tgt[l][key.0]),
        Table::Idn(l) => (p.names[l].len(), &mut parts.idn[l][key.0]),
        Table::Comp(j, i) => (p.names[j].len(), parts.comp[j][i].get_mut(&key).unwrap()),
    };
    let old = *slot;
    let new = (old + rng.gen_range(1..size)) % size;
    *slot = new;
    Some(Mutant { parts, table, key, old, new })
}
