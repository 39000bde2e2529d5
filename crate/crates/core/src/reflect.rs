//! The reflection of n-categories into n-preorders.
//!
//! An n-preorder has no two distinct parallel top cells. The reflection
//! keeps every level below `n` and identifies parallel top cells; each class
//! is named after its least member.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::functor::{FunctorError, NFunctor};
use crate::ncat::NCat;
use crate::search::{FunctorSearch, SearchLimit};

/// The first pair of distinct parallel top cells in name order, if any.
pub fn npreorder_witness(a: &NCat) -> Option<(usize, usize)> {
    let n = a.n();
    if n == 0 {
        return None;
    }
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for x in a.sorted(n) {
        if let Some(&y) = seen.get(&(a.src(n, x), a.tgt(n, x))) {
            return Some((y, x));
        }
        seen.insert((a.src(n, x), a.tgt(n, x)), x);
    }
    None
}

pub fn is_npreorder(a: &NCat) -> bool {
    npreorder_witness(a).is_none()
}

/// The reflection of an n-category together with its unit.
#[derive(Clone, Debug)]
pub struct ReflectionResult {
    pub image: Arc<NCat>,
    pub unit: NFunctor,
}

pub fn reflect(a: &Arc<NCat>) -> ReflectionResult {
    let n = a.n();
    if n == 0 {
        return ReflectionResult {
            image: a.clone(),
            unit: NFunctor::identity(a),
        };
    }
    let mut parts = a.parts().clone();
    // Each class is represented by its least member by name; classes keep
    // the order of their representatives.
    let mut rep_of_key: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for x in a.sorted(n) {
        rep_of_key.entry((a.src(n, x), a.tgt(n, x))).or_insert(x);
    }
    let mut reps: Vec<usize> = rep_of_key.values().copied().collect();
    reps.sort_unstable();
    let mut slot = vec![usize::MAX; a.len(n)];
    for (k, &x) in reps.iter().enumerate() {
        slot[x] = k;
    }
    let class: Vec<usize> = (0..a.len(n))
        .map(|x| slot[rep_of_key[&(a.src(n, x), a.tgt(n, x))]])
        .collect();
    parts.names[n] = reps.iter().map(|&x| String::from(a.name(n, x))).collect();
    parts.src[n] = reps.iter().map(|&x| a.src(n, x)).collect();
    parts.tgt[n] = reps.iter().map(|&x| a.tgt(n, x)).collect();
    parts.idn[n] = (0..a.len(n - 1)).map(|y| class[a.idn(n, y)]).collect();
    for i in 0..n {
        parts.comp[n][i] = a
            .table(n, i)
            .iter()
            .map(|(&(g, f), &r)| ((class[g], class[f]), class[r]))
            .collect();
    }
    let image = Arc::new(NCat::from_trusted(parts));
    let mut maps: Vec<Vec<usize>> = (0..n).map(|l| (0..a.len(l)).collect()).collect();
    maps.push(class);
    ReflectionResult {
        unit: NFunctor::from_trusted(a.clone(), image.clone(), maps),
        image,
    }
}

/// The unique `φ` with `φ ∘ unit = g`, for a levelwise surjective `unit`.
pub fn descend(unit: &NFunctor, g: &NFunctor) -> Result<NFunctor, FunctorError> {
    if !crate::functor::same(unit.dom(), g.dom()) {
        return Err(FunctorError::Mismatch(String::from("the unit and the map have different domains")));
    }
    let fa = unit.cod();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    for l in 0..=fa.n() {
        let mut m = vec![usize::MAX; fa.len(l)];
        for x in 0..g.dom().len(l) {
            let y = g.apply(l, x);
            let slot = &mut m[unit.apply(l, x)];
            if *slot != usize::MAX && *slot != y {
                return Err(FunctorError::Mismatch(String::from(
                    "the map does not descend along the unit",
                )));
            }
            *slot = y;
        }
        if m.contains(&usize::MAX) {
            return Err(FunctorError::Mismatch(String::from("the unit is not surjective")));
        }
        maps.push(m);
    }
    NFunctor::new(fa.clone(), g.cod().clone(), maps)
}

/// The functor between reflections induced by `f`, given units of its
/// domain and codomain.
pub fn induced(f: &NFunctor, unit_dom: &NFunctor, unit_cod: &NFunctor) -> Result<NFunctor, FunctorError> {
    descend(unit_dom, &unit_cod.after(f)?)
}

/// Something that computes units of a reflection into n-preorders.
pub trait Reflector {
    fn unit(&self, a: &Arc<NCat>) -> Result<NFunctor, Error>;
}

/// The reflection computed directly on the top level.
#[derive(Clone, Copy, Debug, Default)]
pub struct DirectReflector;

impl Reflector for DirectReflector {
    fn unit(&self, a: &Arc<NCat>) -> Result<NFunctor, Error> {
        Ok(reflect(a).unit)
    }
}

/// Whether every functor `T: A -> X` factors as `U ∘ η` for exactly one `U`,
/// where `X` is an n-preorder. Errors if there are more than `limit`
/// functors `A -> X`.
pub fn check_unit_universal(a: &Arc<NCat>, x: &Arc<NCat>, limit: usize) -> Result<bool, SearchLimit> {
    let r = reflect(a);
    let n = a.n();
    for t in FunctorSearch::new(a, x).collect(limit)? {
        let mut search = FunctorSearch::new(&r.image, x);
        for l in 0..=n {
            let mut wanted: Vec<Option<usize>> = vec![None; r.image.len(l)];
            let mut clash = false;
            for c in 0..a.len(l) {
                let k = r.unit.apply(l, c);
                match wanted[k] {
                    Some(y) if y != t.apply(l, c) => clash = true,
                    _ => wanted[k] = Some(t.apply(l, c)),
                }
            }
            if clash {
                return Ok(false);
            }
            for (k, w) in wanted.into_iter().enumerate() {
                if let Some(y) = w {
                    search = search.restrict(l, k, vec![y]);
                }
            }
        }
        if !matches!(search.count(1), Ok(1)) {
            return Ok(false);
        }
    }
    Ok(true)
}
