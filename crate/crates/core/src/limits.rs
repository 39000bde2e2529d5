//! Terminal object, pullbacks, products and coproducts, all computed levelwise.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::functor::{same, NFunctor};
use crate::ncat::{NCat, NCatParts};
use crate::search::FunctorSearch;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LimitError {
    #[error("the two functors do not share a codomain")]
    NotACospan,
    #[error("the cone does not commute over the cospan")]
    NotACone,
    #[error("summand {0} has the wrong dimension")]
    Dimension(usize),
    #[error("the legs do not match the summands")]
    BadLegs,
}

/// The n-category with exactly one cell per level.
pub fn terminal(n: usize) -> NCat {
    let mut p = NCatParts::empty(n);
    for l in 0..=n {
        p.names[l].push(String::from("*"));
        if l > 0 {
            p.src[l].push(0);
            p.tgt[l].push(0);
            p.idn[l].push(0);
            for i in 0..l {
                p.comp[l][i].insert((0, 0), 0);
            }
        }
    }
    NCat::from_trusted(p)
}

/// The unique functor into a terminal n-category.
pub fn to_terminal(a: &Arc<NCat>, t: &Arc<NCat>) -> NFunctor {
    let maps = (0..=a.n()).map(|l| vec![0; a.len(l)]).collect();
    NFunctor::from_trusted(a.clone(), t.clone(), maps)
}

/// Name of the cell of a pullback over the pair `(a, b)`.
pub fn pair_name(a: &str, b: &str) -> String {
    format!("({a}|{b})")
}

/// A pullback square with its apex, projections and pair index.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub apex: Arc<NCat>,
    pub p1: NFunctor,
    pub p2: NFunctor,
    index: Vec<BTreeMap<(usize, usize), usize>>,
}

impl Pullback {
    /// Apex cell over `(a, b)` at level `l`.
    pub fn pair(&self, l: usize, a: usize, b: usize) -> Option<usize> {
        self.index[l].get(&(a, b)).copied()
    }

    /// The mediating functor of a commuting cone `(h, k)`.
    pub fn mediate(&self, h: &NFunctor, k: &NFunctor) -> Result<NFunctor, LimitError> {
        if !same(h.dom(), k.dom()) || !same(h.cod(), self.p1.cod()) || !same(k.cod(), self.p2.cod()) {
            return Err(LimitError::NotACone);
        }
        let c = h.dom();
        let mut maps = Vec::new();
        for l in 0..=c.n() {
            let mut m = Vec::with_capacity(c.len(l));
            for x in 0..c.len(l) {
                m.push(self.pair(l, h.apply(l, x), k.apply(l, x)).ok_or(LimitError::NotACone)?);
            }
            maps.push(m);
        }
        Ok(NFunctor::from_trusted(c.clone(), self.apex.clone(), maps))
    }

    /// Number of functors `u` with `p1 u = h` and `p2 u = k`, found by search
    /// without using the pair index; stops counting after `limit + 1`.
    pub fn count_mediating(&self, h: &NFunctor, k: &NFunctor, limit: usize) -> usize {
        let c = h.dom();
        let mut search = FunctorSearch::new(c, &self.apex);
        for l in 0..=c.n() {
            for x in 0..c.len(l) {
                let cands = (0..self.apex.len(l))
                    .filter(|&y| self.p1.apply(l, y) == h.apply(l, x) && self.p2.apply(l, y) == k.apply(l, x))
                    .collect();
                search = search.restrict(l, x, cands);
            }
        }
        match search.count(limit) {
            Ok(k) => k,
            Err(_) => limit + 1,
        }
    }
}

/// The pullback of the cospan `f: A -> X <- B: g`.
pub fn pullback(f: &NFunctor, g: &NFunctor) -> Result<Pullback, LimitError> {
    if !same(f.cod(), g.cod()) {
        return Err(LimitError::NotACospan);
    }
    let (a, b) = (f.dom(), g.dom());
    let n = a.n();
    let mut p = NCatParts::empty(n);
    let mut pairs: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut index: Vec<BTreeMap<(usize, usize), usize>> = Vec::new();
    for l in 0..=n {
        let mut over: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for y in 0..b.len(l) {
            over.entry(g.apply(l, y)).or_default().push(y);
        }
        let mut lv = Vec::new();
        let mut ix = BTreeMap::new();
        for x in 0..a.len(l) {
            for &y in over.get(&f.apply(l, x)).into_iter().flatten() {
                ix.insert((x, y), lv.len());
                p.names[l].push(pair_name(a.name(l, x), b.name(l, y)));
                lv.push((x, y));
            }
        }
        pairs.push(lv);
        index.push(ix);
    }
    for l in 1..=n {
        for &(x, y) in &pairs[l] {
            p.src[l].push(index[l - 1][&(a.src(l, x), b.src(l, y))]);
            p.tgt[l].push(index[l - 1][&(a.tgt(l, x), b.tgt(l, y))]);
        }
        for &(x, y) in &pairs[l - 1] {
            p.idn[l].push(index[l][&(a.idn(l, x), b.idn(l, y))]);
        }
        for i in 0..l {
            let mut b_entries: BTreeMap<(usize, usize), Vec<(usize, usize, usize)>> = BTreeMap::new();
            for (&(u, v), &w) in b.table(l, i) {
                b_entries.entry((g.apply(l, u), g.apply(l, v))).or_default().push((u, v, w));
            }
            let table = &mut p.comp[l][i];
            for (&(s, t), &r) in a.table(l, i) {
                for &(u, v, w) in b_entries.get(&(f.apply(l, s), f.apply(l, t))).into_iter().flatten() {
                    table.insert((index[l][&(s, u)], index[l][&(t, v)]), index[l][&(r, w)]);
                }
            }
        }
    }
    let apex = Arc::new(NCat::from_trusted(p));
    let p1 = pairs.iter().map(|lv| lv.iter().map(|&(x, _)| x).collect()).collect();
    let p2 = pairs.iter().map(|lv| lv.iter().map(|&(_, y)| y).collect()).collect();
    Ok(Pullback {
        p1: NFunctor::from_trusted(apex.clone(), a.clone(), p1),
        p2: NFunctor::from_trusted(apex.clone(), b.clone(), p2),
        apex,
        index,
    })
}

/// The product, as the pullback over the terminal n-category. Apex cells are
/// listed in row-major order of `(a, b)`.
pub fn product(a: &Arc<NCat>, b: &Arc<NCat>) -> Pullback {
    let t = Arc::new(terminal(a.n()));
    pullback(&to_terminal(a, &t), &to_terminal(b, &t)).expect("both legs end in the same terminal")
}

/// A coproduct with its injections.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub apex: Arc<NCat>,
    pub injections: Vec<NFunctor>,
}

impl Coproduct {
    /// The functor out of the coproduct that restricts to `legs[k]` on summand `k`.
    pub fn copair(&self, legs: &[NFunctor]) -> Result<NFunctor, LimitError> {
        if legs.len() != self.injections.len() || legs.is_empty() {
            return Err(LimitError::BadLegs);
        }
        let cod = legs[0].cod();
        let n = self.apex.n();
        let mut maps: Vec<Vec<usize>> = (0..=n).map(|l| vec![0; self.apex.len(l)]).collect();
        for (leg, inj) in legs.iter().zip(&self.injections) {
            if !same(leg.dom(), inj.dom()) || !same(leg.cod(), cod) {
                return Err(LimitError::BadLegs);
            }
            for (l, m) in maps.iter_mut().enumerate() {
                for x in 0..inj.dom().len(l) {
                    m[inj.apply(l, x)] = leg.apply(l, x);
                }
            }
        }
        Ok(NFunctor::from_trusted(self.apex.clone(), cod.clone(), maps))
    }
}

/// Disjoint union; cells of summand `k` are renamed to `k:name`.
pub fn coproduct(summands: &[Arc<NCat>], n: usize) -> Result<Coproduct, LimitError> {
    let tags: Vec<String> = (0..summands.len()).map(|k| format!("{k}")).collect();
    coproduct_tagged(summands, &tags, n)
}

pub(crate) fn coproduct_tagged(summands: &[Arc<NCat>], tags: &[String], n: usize) -> Result<Coproduct, LimitError> {
    let mut p = NCatParts::empty(n);
    let mut offsets: Vec<Vec<usize>> = Vec::new();
    for (k, s) in summands.iter().enumerate() {
        if s.n() != n {
            return Err(LimitError::Dimension(k));
        }
        let off: Vec<usize> = (0..=n).map(|l| p.names[l].len()).collect();
        for l in 0..=n {
            for x in 0..s.len(l) {
                p.names[l].push(format!("{}:{}", tags[k], s.name(l, x)));
                if l > 0 {
                    p.src[l].push(off[l - 1] + s.src(l, x));
                    p.tgt[l].push(off[l - 1] + s.tgt(l, x));
                }
            }
            if l > 0 {
                for x in 0..s.len(l - 1) {
                    p.idn[l].push(off[l] + s.idn(l, x));
                }
                for i in 0..l {
                    for (&(a, b), &r) in s.table(l, i) {
                        p.comp[l][i].insert((off[l] + a, off[l] + b), off[l] + r);
                    }
                }
            }
        }
        offsets.push(off);
    }
    let apex = Arc::new(NCat::from_trusted(p));
    let injections = summands
        .iter()
        .zip(&offsets)
        .map(|(s, off)| {
            let maps = (0..=n).map(|l| (0..s.len(l)).map(|x| off[l] + x).collect()).collect();
            NFunctor::from_trusted(s.clone(), apex.clone(), maps)
        })
        .collect();
    Ok(Coproduct { apex, injections })
}
