//! Strict n-functors between finite n-categories.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ncat::NCat;

/// Which structure a map fails to preserve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preserve {
    Src,
    Tgt,
    Idn,
    Comp,
}

impl fmt::Display for Preserve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preserve::Src => "src",
            Preserve::Tgt => "tgt",
            Preserve::Idn => "idn",
            Preserve::Comp => "comp",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctorError {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("{what}-preservation fails at level {level} on [{}]", cells.join(", "))]
    Preservation {
        what: Preserve,
        level: usize,
        cells: Vec<String>,
    },
    #[error("functors do not compose: {0}")]
    Mismatch(String),
}

/// A strict n-functor, stored as one cell map per level.
#[derive(Clone)]
pub struct NFunctor {
    dom: Arc<NCat>,
    cod: Arc<NCat>,
    maps: Vec<Vec<usize>>,
}

pub(crate) fn same(a: &Arc<NCat>, b: &Arc<NCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for NFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.maps == other.maps && same(&self.dom, &other.dom) && same(&self.cod, &other.cod)
    }
}

impl Eq for NFunctor {}

impl fmt::Debug for NFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NFunctor")
            .field("dom", &self.dom)
            .field("cod", &self.cod)
            .field("maps", &self.maps)
            .finish()
    }
}

impl NFunctor {
    /// Checks that the maps preserve boundaries, identities and composites.
    pub fn new(dom: Arc<NCat>, cod: Arc<NCat>, maps: Vec<Vec<usize>>) -> Result<Self, FunctorError> {
        check(&dom, &cod, &maps)?;
        Ok(NFunctor { dom, cod, maps })
    }

    pub(crate) fn from_trusted(dom: Arc<NCat>, cod: Arc<NCat>, maps: Vec<Vec<usize>>) -> Self {
        debug_assert_eq!(maps.len(), dom.n() + 1);
        NFunctor { dom, cod, maps }
    }

    pub fn identity(a: &Arc<NCat>) -> Self {
        let maps = (0..=a.n()).map(|l| (0..a.len(l)).collect()).collect();
        NFunctor { dom: a.clone(), cod: a.clone(), maps }
    }

    pub fn dom(&self) -> &Arc<NCat> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<NCat> {
        &self.cod
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn apply(&self, l: usize, x: usize) -> usize {
        self.maps[l][x]
    }

    /// `self` after `first`.
    pub fn after(&self, first: &NFunctor) -> Result<NFunctor, FunctorError> {
        if !same(&first.cod, &self.dom) {
            return Err(FunctorError::Mismatch(String::from(
                "codomain of the first functor is not the domain of the second",
            )));
        }
        let maps = first
            .maps
            .iter()
            .zip(&self.maps)
            .map(|(f, g)| f.iter().map(|&x| g[x]).collect())
            .collect();
        Ok(NFunctor {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            maps,
        })
    }

    /// The same cell maps with the codomain replaced by an equal n-category.
    pub fn with_cod(&self, cod: Arc<NCat>) -> Result<NFunctor, FunctorError> {
        if !same(&self.cod, &cod) {
            return Err(FunctorError::Mismatch(String::from("codomains differ")));
        }
        Ok(NFunctor { cod, ..self.clone() })
    }

    pub fn is_bijective(&self) -> bool {
        (0..=self.dom.n()).all(|l| {
            if self.dom.len(l) != self.cod.len(l) {
                return false;
            }
            let mut hit = vec![false; self.cod.len(l)];
            self.maps[l].iter().all(|&y| !core::mem::replace(&mut hit[y], true))
        })
    }

    /// The inverse, when the functor is an isomorphism.
    pub fn inverse(&self) -> Option<NFunctor> {
        if !self.is_bijective() {
            return None;
        }
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let mut inv = vec![0; m.len()];
                for (x, &y) in m.iter().enumerate() {
                    inv[y] = x;
                }
                inv
            })
            .collect();
        NFunctor::new(self.cod.clone(), self.dom.clone(), maps).ok()
    }

    /// Name-based view of the maps.
    pub fn to_raw(&self) -> RawNFunctor {
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(l, m)| {
                m.iter()
                    .enumerate()
                    .map(|(x, &y)| (String::from(self.dom.name(l, x)), String::from(self.cod.name(l, y))))
                    .collect()
            })
            .collect();
        RawNFunctor { maps }
    }
}

fn check(dom: &NCat, cod: &NCat, maps: &[Vec<usize>]) -> Result<(), FunctorError> {
    let n = dom.n();
    if cod.n() != n {
        return Err(FunctorError::Structural(format!(
            "domain has dimension {n} but codomain has dimension {}",
            cod.n()
        )));
    }
    if maps.len() != n + 1 {
        return Err(FunctorError::Structural(format!("expected {} level maps", n + 1)));
    }
    for l in 0..=n {
        if maps[l].len() != dom.len(l) {
            return Err(FunctorError::Structural(format!("map at level {l} is not total")));
        }
        if let Some(x) = maps[l].iter().position(|&y| y >= cod.len(l)) {
            return Err(FunctorError::Structural(format!(
                "{:?} at level {l} is sent to a missing cell",
                dom.name(l, x)
            )));
        }
    }
    let fail = |what: Preserve, level: usize, cells: Vec<String>| Err(FunctorError::Preservation { what, level, cells });
    for l in 1..=n {
        for x in 0..dom.len(l) {
            let y = maps[l][x];
            if cod.src(l, y) != maps[l - 1][dom.src(l, x)] {
                return fail(Preserve::Src, l, vec![dom.name(l, x).into(), cod.name(l, y).into()]);
            }
            if cod.tgt(l, y) != maps[l - 1][dom.tgt(l, x)] {
                return fail(Preserve::Tgt, l, vec![dom.name(l, x).into(), cod.name(l, y).into()]);
            }
        }
        for z in 0..dom.len(l - 1) {
            if maps[l][dom.idn(l, z)] != cod.idn(l, maps[l - 1][z]) {
                return fail(Preserve::Idn, l, vec![dom.name(l - 1, z).into()]);
            }
        }
    }
    for j in 1..=n {
        for i in 0..j {
            for (&(a, b), &r) in dom.table(j, i) {
                if cod.comp(j, i, maps[j][a], maps[j][b]) != Some(maps[j][r]) {
                    return fail(
                        Preserve::Comp,
                        j,
                        vec![dom.name(j, a).into(), dom.name(j, b).into(), dom.name(j, r).into()],
                    );
                }
            }
        }
    }
    Ok(())
}

/// Name-based cell maps, one per level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawNFunctor {
    pub maps: Vec<BTreeMap<String, String>>,
}

impl RawNFunctor {
    pub fn resolve(&self, dom: &Arc<NCat>, cod: &Arc<NCat>) -> Result<NFunctor, FunctorError> {
        let n = dom.n();
        if self.maps.len() != n + 1 {
            return Err(FunctorError::Structural(format!(
                "expected {} level maps, found {}",
                n + 1,
                self.maps.len()
            )));
        }
        let mut maps = Vec::new();
        for (l, m) in self.maps.iter().enumerate() {
            let mut v = vec![usize::MAX; dom.len(l)];
            for (a, b) in m {
                let x = dom
                    .find(l, a)
                    .ok_or_else(|| FunctorError::Structural(format!("maps[{l}]: unknown domain cell {a:?}")))?;
                v[x] = cod
                    .find(l, b)
                    .ok_or_else(|| FunctorError::Structural(format!("maps[{l}].{a}: unknown codomain cell {b:?}")))?;
            }
            if let Some(x) = v.iter().position(|&y| y == usize::MAX) {
                return Err(FunctorError::Structural(format!(
                    "maps[{l}] has no entry for {:?}",
                    dom.name(l, x)
                )));
            }
            maps.push(v);
        }
        NFunctor::new(dom.clone(), cod.clone(), maps)
    }
}

/// Validates name-based maps against the given domain and codomain.
pub fn is_functor_valid(dom: &Arc<NCat>, cod: &Arc<NCat>, raw: &RawNFunctor) -> Result<NFunctor, FunctorError> {
    raw.resolve(dom, cod)
}

/// `g` after `f`.
pub fn compose(g: &NFunctor, f: &NFunctor) -> Result<NFunctor, FunctorError> {
    g.after(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::{parallel_two_cells, walking_two_cell};
    use crate::limits::{terminal, to_terminal};

    #[test]
    fn identity_and_terminal_maps_are_valid() {
        let w = Arc::new(walking_two_cell());
        let id = NFunctor::identity(&w);
        let again = is_functor_valid(&w, &w, &id.to_raw()).unwrap();
        assert_eq!(again, id);
        let t = Arc::new(terminal(2));
        let bang = to_terminal(&w, &t);
        assert!(is_functor_valid(&w, &t, &bang.to_raw()).is_ok());
    }

    #[test]
    fn src_preservation_failure_is_named() {
        // θ sent to an identity 2-cell over a different 1-cell.
        let w = Arc::new(walking_two_cell());
        let mut raw = NFunctor::identity(&w).to_raw();
        raw.maps[2].insert(String::from("θ"), String::from("id_g"));
        match is_functor_valid(&w, &w, &raw) {
            Err(FunctorError::Preservation { what: Preserve::Src, level: 2, cells }) => assert_eq!(cells[0], "θ"),
            other => panic!("{other:?}"),
        }
        raw.maps[2].remove("θ");
        assert!(matches!(is_functor_valid(&w, &w, &raw), Err(FunctorError::Structural(_))));
    }

    #[test]
    fn composition_with_identities_and_terminal() {
        let a = Arc::new(parallel_two_cells());
        let b = Arc::new(walking_two_cell());
        let t = Arc::new(terminal(2));
        let f = crate::search::FunctorSearch::new(&a, &b).first().unwrap();
        assert_eq!(compose(&NFunctor::identity(&b), &f).unwrap(), f);
        assert_eq!(compose(&f, &NFunctor::identity(&a)).unwrap(), f);
        assert_eq!(compose(&to_terminal(&b, &t), &f).unwrap(), to_terminal(&a, &t));
        assert!(matches!(compose(&f, &f), Err(FunctorError::Mismatch(_))));
    }

    #[test]
    fn inverse_of_a_relabeling() {
        let w = Arc::new(walking_two_cell());
        let r = Arc::new(w.relabel(|_, s| format!("{s}'")).unwrap());
        let f = NFunctor::new(w.clone(), r.clone(), w.parts().names.iter().map(|v| (0..v.len()).collect()).collect()).unwrap();
        let g = f.inverse().unwrap();
        assert_eq!(g.after(&f).unwrap(), NFunctor::identity(&w));
        assert_eq!(f.after(&g).unwrap(), NFunctor::identity(&r));
    }
}
