//! Morphism classes and the two factorization systems of the reflection.
//!
//! The reflective system factors `f: A -> B` through the pullback of the
//! unit of `B` along the induced map of reflections. The monotone-light
//! system keeps every level of `A` below the top and replaces the top cells
//! by their images under `f`, remembering source and target.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::functor::{same, NFunctor};
use crate::limits::pullback;
use crate::ncat::NCat;
use crate::reflect::{induced, reflect};
use crate::search::FunctorSearch;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error("the square does not commute")]
    NonCommuting,
    #[error("the square is not well typed")]
    IllTyped,
    #[error("expected exactly one diagonal, found {}", found.len())]
    NotUnique { found: Vec<NFunctor> },
    #[error("dimension 0 has no top-level homs")]
    Dimension,
}

/// Why a morphism fails one of the class conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A level below the top where the map is not a bijection; either two
    /// cells with one image or one codomain cell that is missed.
    NotBijective { level: usize, cells: Vec<String> },
    /// The codomain hom over `(source, target)` is inhabited but the domain hom is not.
    EmptyHom { source: String, target: String },
    NotSurjective { source: String, target: String, missed: String },
    NotInjective { source: String, target: String, cells: (String, String) },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NotBijective { level, cells } => {
                write!(f, "not bijective at level {level}: [{}]", cells.join(", "))
            }
            Witness::EmptyHom { source, target } => {
                write!(f, "empty hom {source} -> {target} over an inhabited one")
            }
            Witness::NotSurjective { source, target, missed } => {
                write!(f, "hom {source} -> {target} misses {missed}")
            }
            Witness::NotInjective { source, target, cells } => {
                write!(f, "hom {source} -> {target} identifies {} and {}", cells.0, cells.1)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Witnesses {
    pub vertical: Option<Witness>,
    pub stably_vertical: Option<Witness>,
    pub trivial_covering: Option<Witness>,
    pub covering: Option<Witness>,
}

/// Membership of a functor in the four classes, with the first
/// counterexample for every failed condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismClass {
    pub vertical: bool,
    pub stably_vertical: bool,
    pub trivial_covering: bool,
    pub covering: bool,
    pub witnesses: Witnesses,
}

fn bijective_below(f: &NFunctor) -> Option<Witness> {
    let (a, b) = (f.dom(), f.cod());
    for l in 0..a.n() {
        let mut first: BTreeMap<usize, usize> = BTreeMap::new();
        for x in a.sorted(l) {
            let y = f.apply(l, x);
            if let Some(&x0) = first.get(&y) {
                return Some(Witness::NotBijective {
                    level: l,
                    cells: vec![a.name(l, x0).into(), a.name(l, x).into()],
                });
            }
            first.insert(y, x);
        }
        if let Some(y) = b.sorted(l).into_iter().find(|y| !first.contains_key(y)) {
            return Some(Witness::NotBijective {
                level: l,
                cells: vec![b.name(l, y).into()],
            });
        }
    }
    None
}

/// Decides the four class conditions for `f`.
pub fn classify(f: &NFunctor) -> Result<MorphismClass, FactorError> {
    let (a, b) = (f.dom(), f.cod());
    let n = a.n();
    if n == 0 {
        return Err(FactorError::Dimension);
    }
    let bij = bijective_below(f);
    let homs_a = a.by_boundary(n);
    let homs_b = b.by_boundary(n);
    let mut w = Witnesses {
        vertical: bij.clone(),
        stably_vertical: bij.clone(),
        ..Witnesses::default()
    };
    let lower = a.sorted(n - 1);
    let empty = Vec::new();
    for &h in &lower {
        for &h2 in &lower {
            let dom_hom = homs_a.get(&(h, h2)).unwrap_or(&empty);
            let key = (f.apply(n - 1, h), f.apply(n - 1, h2));
            let cod_hom = homs_b.get(&key).unwrap_or(&empty);
            let (sn, tn) = (|| String::from(a.name(n - 1, h)), || String::from(a.name(n - 1, h2)));
            if w.vertical.is_none() && dom_hom.is_empty() && !cod_hom.is_empty() {
                w.vertical = Some(Witness::EmptyHom { source: sn(), target: tn() });
            }
            let image: BTreeSet<usize> = dom_hom.iter().map(|&t| f.apply(n, t)).collect();
            if w.stably_vertical.is_none() {
                let mut cod_sorted = cod_hom.clone();
                cod_sorted.sort_by(|&x, &y| b.name(n, x).cmp(b.name(n, y)));
                if let Some(&m) = cod_sorted.iter().find(|y| !image.contains(y)) {
                    w.stably_vertical = Some(Witness::NotSurjective {
                        source: sn(),
                        target: tn(),
                        missed: b.name(n, m).into(),
                    });
                }
            }
            let mut first: BTreeMap<usize, usize> = BTreeMap::new();
            let mut sorted_dom = dom_hom.clone();
            sorted_dom.sort_by(|&x, &y| a.name(n, x).cmp(a.name(n, y)));
            let mut clash = None;
            for &t in &sorted_dom {
                if let Some(&t0) = first.get(&f.apply(n, t)) {
                    clash = Some((String::from(a.name(n, t0)), String::from(a.name(n, t))));
                    break;
                }
                first.insert(f.apply(n, t), t);
            }
            if let Some(cells) = clash {
                if w.covering.is_none() {
                    w.covering = Some(Witness::NotInjective { source: sn(), target: tn(), cells: cells.clone() });
                }
                if w.trivial_covering.is_none() {
                    w.trivial_covering = Some(Witness::NotInjective { source: sn(), target: tn(), cells });
                }
            } else if w.trivial_covering.is_none() && !dom_hom.is_empty() {
                let mut cod_sorted = cod_hom.clone();
                cod_sorted.sort_by(|&x, &y| b.name(n, x).cmp(b.name(n, y)));
                if let Some(&m) = cod_sorted.iter().find(|y| !image.contains(y)) {
                    w.trivial_covering = Some(Witness::NotSurjective {
                        source: sn(),
                        target: tn(),
                        missed: b.name(n, m).into(),
                    });
                }
            }
        }
    }
    Ok(MorphismClass {
        vertical: w.vertical.is_none(),
        stably_vertical: w.stably_vertical.is_none(),
        trivial_covering: w.trivial_covering.is_none(),
        covering: w.covering.is_none(),
        witnesses: w,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorizationSystem {
    Reflective,
    MonotoneLight,
}

/// `f = m ∘ e` with `e: A -> middle` and `m: middle -> B`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub e: NFunctor,
    pub middle: Arc<NCat>,
    pub m: NFunctor,
    pub system: FactorizationSystem,
}

/// Factors `f` as a vertical map followed by a trivial covering.
pub fn reflective_factorize(f: &NFunctor) -> Factorization {
    let ra = reflect(f.dom());
    let rb = reflect(f.cod());
    let i_f = induced(f, &ra.unit, &rb.unit).expect("the reflection is functorial");
    let pb = pullback(&rb.unit, &i_f).expect("both maps land in the reflection of B");
    let e = pb.mediate(f, &ra.unit).expect("the unit is natural");
    Factorization {
        e,
        middle: pb.apex.clone(),
        m: pb.p1,
        system: FactorizationSystem::Reflective,
    }
}

/// Factors `f` as a stably vertical map followed by a covering.
pub fn ml_factorize(f: &NFunctor) -> Factorization {
    let (a, b) = (f.dom(), f.cod());
    let n = a.n();
    assert!(n >= 1, "factorization needs a top level");
    let mut parts = a.parts().clone();
    let mut cells: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    let mut keys: Vec<(usize, usize, usize)> = Vec::new();
    for t in 0..a.len(n) {
        let k = (a.src(n, t), a.tgt(n, t), f.apply(n, t));
        if !cells.contains_key(&k) {
            keys.push(k);
        }
        cells.insert(k, 0);
    }
    keys.sort_unstable();
    for (x, k) in keys.iter().enumerate() {
        cells.insert(*k, x);
    }
    let cell = |t: usize| cells[&(a.src(n, t), a.tgt(n, t), f.apply(n, t))];
    parts.names[n] = keys
        .iter()
        .map(|&(h, h2, beta)| format!("{}@{}>{}", b.name(n, beta), a.name(n - 1, h), a.name(n - 1, h2)))
        .collect();
    parts.src[n] = keys.iter().map(|k| k.0).collect();
    parts.tgt[n] = keys.iter().map(|k| k.1).collect();
    parts.idn[n] = (0..a.len(n - 1)).map(|h| cell(a.idn(n, h))).collect();
    for i in 0..n {
        parts.comp[n][i] = a
            .table(n, i)
            .iter()
            .map(|(&(g2, g1), &r)| ((cell(g2), cell(g1)), cell(r)))
            .collect();
    }
    let middle = Arc::new(NCat::from_trusted(parts));
    let mut e_maps: Vec<Vec<usize>> = (0..n).map(|l| (0..a.len(l)).collect()).collect();
    e_maps.push((0..a.len(n)).map(cell).collect());
    let mut m_maps: Vec<Vec<usize>> = f.maps()[..n].to_vec();
    m_maps.push(keys.iter().map(|k| k.2).collect());
    Factorization {
        e: NFunctor::from_trusted(a.clone(), middle.clone(), e_maps),
        m: NFunctor::from_trusted(middle.clone(), b.clone(), m_maps),
        middle,
        system: FactorizationSystem::MonotoneLight,
    }
}

/// Most diagonals collected before giving up on uniqueness.
const DIAGONAL_LIMIT: usize = 16;

/// The unique `d` with `d ∘ e = top` and `m ∘ d = bottom` for the square
/// `m ∘ top = bottom ∘ e`.
pub fn fill_diagonal(e: &NFunctor, m: &NFunctor, top: &NFunctor, bottom: &NFunctor) -> Result<NFunctor, FactorError> {
    if !same(e.dom(), top.dom()) || !same(e.cod(), bottom.dom()) || !same(m.dom(), top.cod()) || !same(m.cod(), bottom.cod()) {
        return Err(FactorError::IllTyped);
    }
    let lhs = m.after(top).map_err(|_| FactorError::IllTyped)?;
    let rhs = bottom.after(e).map_err(|_| FactorError::IllTyped)?;
    if lhs != rhs {
        return Err(FactorError::NonCommuting);
    }
    let (b, c) = (e.cod(), m.dom());
    let mut search = FunctorSearch::new(b, c);
    for l in 0..=b.n() {
        let mut fixed: Vec<Option<usize>> = vec![None; b.len(l)];
        let mut clash = vec![false; b.len(l)];
        for x in 0..e.dom().len(l) {
            let y = e.apply(l, x);
            match fixed[y] {
                Some(t) if t != top.apply(l, x) => clash[y] = true,
                _ => fixed[y] = Some(top.apply(l, x)),
            }
        }
        for y in 0..b.len(l) {
            let cands: Vec<usize> = if clash[y] {
                Vec::new()
            } else {
                (0..c.len(l))
                    .filter(|&z| m.apply(l, z) == bottom.apply(l, y) && fixed[y].map_or(true, |t| t == z))
                    .collect()
            };
            search = search.restrict(l, y, cands);
        }
    }
    let mut found = search.take(DIAGONAL_LIMIT);
    if found.len() == 1 {
        Ok(found.pop().expect("one diagonal"))
    } else {
        Err(FactorError::NotUnique { found })
    }
}

/// Objects of the site whose presheaves are n-categories: cells of one
/// level, composable pairs, and two-by-two composable grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteObject {
    Cells(usize),
    Pairs(usize, usize),
    Grids(usize, usize, usize),
}

/// Cell tuples of `c` at a site object, all at one level.
pub fn elements(c: &NCat, x: SiteObject) -> (usize, Vec<Vec<usize>>) {
    match x {
        SiteObject::Cells(l) => (l, (0..c.len(l)).map(|y| vec![y]).collect()),
        SiteObject::Pairs(j, i) => (j, c.table(j, i).keys().map(|&(a, b)| vec![a, b]).collect()),
        SiteObject::Grids(k, j, i) => {
            let mut by_tgt: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
            for &(g, d) in c.table(k, j).keys() {
                by_tgt.entry(c.bnd_tgt(k, g, i)).or_default().push((g, d));
            }
            let mut out = Vec::new();
            for &(a, b) in c.table(k, j).keys() {
                for &(g, d) in by_tgt.get(&c.bnd_src(k, a, i)).into_iter().flatten() {
                    if c.comp(k, i, b, d).is_some() {
                        out.push(vec![a, b, g, d]);
                    }
                }
            }
            (k, out)
        }
    }
}

/// Every site object for dimension `n`.
pub fn site_objects(n: usize) -> Vec<SiteObject> {
    let mut out: Vec<SiteObject> = (0..=n).map(SiteObject::Cells).collect();
    for j in 1..=n {
        for i in 0..j {
            out.push(SiteObject::Pairs(j, i));
        }
    }
    for k in 2..=n {
        for j in 1..k {
            for i in 0..j {
                out.push(SiteObject::Grids(k, j, i));
            }
        }
    }
    out
}

/// The naturality square of the unit along `f` at every site object is a
/// pullback of finite sets; returns the first object where it is not.
pub fn unit_squares_are_pullbacks(f: &NFunctor) -> Result<(), SiteObject> {
    let ra = reflect(f.dom());
    let rb = reflect(f.cod());
    let i_f = induced(f, &ra.unit, &rb.unit).expect("the reflection is functorial");
    for x in site_objects(f.dom().n()) {
        let (l, a_el) = elements(f.dom(), x);
        let (_, ia_el) = elements(&ra.image, x);
        let (_, b_el) = elements(f.cod(), x);
        let map = |g: &NFunctor, t: &[usize]| t.iter().map(|&y| g.apply(l, y)).collect::<Vec<usize>>();
        let mut over: BTreeMap<Vec<usize>, Vec<&Vec<usize>>> = BTreeMap::new();
        for v in &b_el {
            over.entry(map(&rb.unit, v)).or_default().push(v);
        }
        let mut corner: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
        for u in &ia_el {
            for v in over.get(&map(&i_f, u)).into_iter().flatten() {
                corner.insert((u.clone(), (*v).clone()));
            }
        }
        let image: BTreeSet<(Vec<usize>, Vec<usize>)> = a_el.iter().map(|t| (map(&ra.unit, t), map(f, t))).collect();
        if image.len() != a_el.len() || image != corner {
            return Err(x);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::{parallel_two_cells, walking_two_cell};
    use crate::limits::{terminal, to_terminal};
    use crate::search::find_isomorphism;

    fn flags(c: &MorphismClass) -> (bool, bool, bool, bool) {
        (c.vertical, c.stably_vertical, c.trivial_covering, c.covering)
    }

    fn by_names(a: &Arc<NCat>, b: &Arc<NCat>, top: &[(&str, &str)]) -> NFunctor {
        let mut maps: Vec<Vec<usize>> = (0..a.n()).map(|l| (0..a.len(l)).map(|x| b.find(l, a.name(l, x)).unwrap()).collect()).collect();
        let n = a.n();
        maps.push(
            (0..a.len(n))
                .map(|x| {
                    let s = a.name(n, x);
                    let t = top.iter().find(|p| p.0 == s).map_or(s, |p| p.1);
                    b.find(n, t).unwrap()
                })
                .collect(),
        );
        NFunctor::new(a.clone(), b.clone(), maps).unwrap()
    }

    #[test]
    fn classify_examples() {
        let w = Arc::new(walking_two_cell());
        assert_eq!(flags(&classify(&NFunctor::identity(&w)).unwrap()), (true, true, true, true));
        let t = Arc::new(terminal(2));
        let c = classify(&to_terminal(&w, &t)).unwrap();
        assert_eq!(flags(&c), (false, false, true, true));
        assert!(matches!(c.witnesses.vertical, Some(Witness::NotBijective { level: 0, .. })));
        let p = Arc::new(parallel_two_cells());
        let eta = crate::reflect::reflect(&p).unit;
        let c = classify(&eta).unwrap();
        assert_eq!(flags(&c), (true, true, false, false));
        assert_eq!(
            c.witnesses.covering,
            Some(Witness::NotInjective { source: "f".into(), target: "g".into(), cells: ("θ1".into(), "θ2".into()) })
        );
    }

    /// The inclusion of one of two parallel 2-cells is vertical but not
    /// stably so: pulling it back along the other one empties a hom.
    #[test]
    fn vertical_but_not_stably_vertical() {
        let w = Arc::new(walking_two_cell());
        let p = Arc::new(parallel_two_cells());
        let f = by_names(&w, &p, &[("θ", "θ1")]);
        let g = by_names(&w, &p, &[("θ", "θ2")]);
        let c = classify(&f).unwrap();
        assert!(c.vertical && !c.stably_vertical);
        assert_eq!(c.witnesses.stably_vertical, Some(Witness::NotSurjective { source: "f".into(), target: "g".into(), missed: "θ2".into() }));
        let pb = pullback(&f, &g).unwrap();
        let pulled = classify(&pb.p2).unwrap();
        assert!(!pulled.vertical);
        assert!(matches!(pulled.witnesses.vertical, Some(Witness::EmptyHom { .. })));
    }

    fn check_factorization(f: &NFunctor) {
        let r = reflective_factorize(f);
        assert!(r.middle.parts().clone().validate().is_ok());
        assert_eq!(r.m.after(&r.e).unwrap(), *f);
        assert!(classify(&r.e).unwrap().vertical);
        assert!(classify(&r.m).unwrap().trivial_covering);
        assert!(unit_squares_are_pullbacks(&r.m).is_ok());
        let ml = ml_factorize(f);
        assert!(ml.middle.parts().clone().validate().is_ok());
        assert_eq!(ml.m.after(&ml.e).unwrap(), *f);
        assert!(classify(&ml.e).unwrap().stably_vertical);
        assert!(classify(&ml.m).unwrap().covering);
    }

    #[test]
    fn factorizations_of_small_functors() {
        let w = Arc::new(walking_two_cell());
        let p = Arc::new(parallel_two_cells());
        let t = Arc::new(terminal(2));
        check_factorization(&NFunctor::identity(&p));
        check_factorization(&to_terminal(&w, &t));
        check_factorization(&to_terminal(&p, &t));
        check_factorization(&crate::reflect::reflect(&p).unit);
        for f in FunctorSearch::new(&p, &p).collect(1000).unwrap() {
            check_factorization(&f);
        }
        for f in FunctorSearch::new(&w, &p).collect(1000).unwrap() {
            check_factorization(&f);
        }
    }

    #[test]
    fn factorization_examples() {
        let w = Arc::new(walking_two_cell());
        let t = Arc::new(terminal(2));
        // Identity: e is an isomorphism.
        assert!(reflective_factorize(&NFunctor::identity(&w)).e.is_bijective());
        // The unit: m is an isomorphism.
        let p = Arc::new(parallel_two_cells());
        let eta = crate::reflect::reflect(&p).unit;
        let r = reflective_factorize(&eta);
        assert!(r.m.is_bijective());
        // Walking 2-cell to the terminal: the light middle is the walking 2-cell.
        let ml = ml_factorize(&to_terminal(&w, &t));
        assert!(ml.e.is_bijective());
        assert!(find_isomorphism(&ml.middle, &w).is_some());
        // A quotient followed by an inclusion is recovered.
        let three = {
            let homs = Arc::new(crate::library::suspend_named(&Arc::new(crate::library::set(&["κ1", "κ2", "κ3"])), ["f", "g"]));
            Arc::new(crate::library::suspend_named(&homs, ["a", "b"]))
        };
        let incl = {
            let img = &eta.cod().clone();
            let mut maps: Vec<Vec<usize>> = (0..2).map(|l| (0..img.len(l)).collect()).collect();
            let ko = |s: &str| three.find(2, s).unwrap();
            maps.push(
                (0..img.len(2))
                    .map(|x| match img.name(2, x) {
                        "θ1" => ko("κ1"),
                        s => three.find(2, s).unwrap(),
                    })
                    .collect(),
            );
            NFunctor::new(img.clone(), three.clone(), maps).unwrap()
        };
        let f = incl.after(&eta).unwrap();
        let ml = ml_factorize(&f);
        assert!(find_isomorphism(&ml.middle, eta.cod()).is_some());
        assert!(!ml.m.is_bijective() && classify(&ml.m).unwrap().covering);
        assert_eq!(ml.middle.name(2, ml.e.apply(2, p.find(2, "θ2").unwrap())), "κ1@f>g");
    }

    #[test]
    fn diagonals() {
        let p = Arc::new(parallel_two_cells());
        let eta = crate::reflect::reflect(&p).unit;
        let img = eta.cod().clone();
        // e iso: the diagonal is top after the inverse of e.
        let id = NFunctor::identity(&img);
        let d = fill_diagonal(&id, &id, &id, &id).unwrap();
        assert_eq!(d, id);
        // e the unit, m the identity of the image.
        let d = fill_diagonal(&eta, &id, &eta, &id).unwrap();
        assert_eq!(d, id);
        // Squares against the identity of the image.
        for top in FunctorSearch::new(&p, &p).collect(1000).unwrap() {
            let g = eta.after(&top).unwrap();
            for bottom in FunctorSearch::new(&img, &img).collect(1000).unwrap() {
                if bottom.after(&eta).unwrap() != g {
                    continue;
                }
                let m = NFunctor::identity(&img);
                let d = fill_diagonal(&eta, &m, &g, &bottom).unwrap();
                assert_eq!(d.after(&eta).unwrap(), g);
            }
        }
        assert!(matches!(fill_diagonal(&eta, &id, &NFunctor::identity(&p), &id), Err(FactorError::IllTyped)));
    }

    #[test]
    fn site_elements() {
        let w = walking_two_cell();
        assert_eq!(site_objects(2).len(), 3 + 3 + 1);
        let (l, pairs) = elements(&w, SiteObject::Pairs(2, 1));
        assert_eq!(l, 2);
        assert_eq!(pairs.len(), w.table(2, 1).len());
        let (_, grids) = elements(&w, SiteObject::Grids(2, 1, 0));
        assert!(!grids.is_empty());
    }
}
