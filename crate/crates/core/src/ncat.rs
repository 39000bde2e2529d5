//! The finite strict n-category data model.
//!
//! Cells are graded by level `0..=n` and addressed by their index within a
//! level. Source, target and identity maps are stored only between adjacent
//! levels; boundaries further down are obtained by iteration. For every pair
//! of levels `i < j` there is one composition table `comp[j][i]`, keyed by
//! `(later, earlier)` and defined exactly on the pairs whose `i`-boundaries
//! meet.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use crate::validate::{Law, ValidationError, Violation};

/// Composition table for one level pair, `(later, earlier) -> composite`.
pub type CompTable = BTreeMap<(usize, usize), usize>;

/// Index-based tables of an n-category that has not been validated yet.
///
/// `src[l]`, `tgt[l]` map level `l` to level `l - 1` and `idn[l]` maps level
/// `l - 1` to level `l`; the entries at index 0 are empty. `comp[j]` holds one
/// table per `i < j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NCatParts {
    pub n: usize,
    pub names: Vec<Vec<String>>,
    pub src: Vec<Vec<usize>>,
    pub tgt: Vec<Vec<usize>>,
    pub idn: Vec<Vec<usize>>,
    pub comp: Vec<Vec<CompTable>>,
}

impl NCatParts {
    /// Tables of the empty n-category.
    pub fn empty(n: usize) -> Self {
        NCatParts {
            n,
            names: vec![Vec::new(); n + 1],
            src: vec![Vec::new(); n + 1],
            tgt: vec![Vec::new(); n + 1],
            idn: vec![Vec::new(); n + 1],
            comp: (0..=n).map(|j| vec![CompTable::new(); j]).collect(),
        }
    }

    /// Checks the tables and every n-category law.
    pub fn validate(self) -> Result<NCat, ValidationError> {
        crate::validate::check(&self)?;
        Ok(NCat::from_trusted(self))
    }

    /// Iterated source of a level-`l` cell down to level `i`.
    pub(crate) fn bnd_src(&self, l: usize, mut x: usize, i: usize) -> usize {
        for lev in (i + 1..=l).rev() {
            x = self.src[lev][x];
        }
        x
    }

    pub(crate) fn bnd_tgt(&self, l: usize, mut x: usize, i: usize) -> usize {
        for lev in (i + 1..=l).rev() {
            x = self.tgt[lev][x];
        }
        x
    }

    pub(crate) fn tower(&self, i: usize, j: usize, mut x: usize) -> usize {
        for lev in i + 1..=j {
            x = self.idn[lev][x];
        }
        x
    }
}

/// A validated finite strict n-category.
///
/// Equality is equality of all tables, names included; use
/// [`find_isomorphism`](crate::find_isomorphism) for comparison up to
/// isomorphism.
#[derive(Clone)]
pub struct NCat {
    parts: NCatParts,
    index: Vec<BTreeMap<String, usize>>,
}

impl PartialEq for NCat {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl Eq for NCat {}

impl fmt::Debug for NCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<usize> = self.parts.names.iter().map(Vec::len).collect();
        f.debug_struct("NCat")
            .field("n", &self.parts.n)
            .field("cells", &sizes)
            .finish()
    }
}

impl NCat {
    /// Wraps tables that are known to satisfy the laws.
    pub(crate) fn from_trusted(parts: NCatParts) -> Self {
        let index = parts
            .names
            .iter()
            .map(|level| level.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect())
            .collect();
        NCat { parts, index }
    }

    pub fn n(&self) -> usize {
        self.parts.n
    }

    /// Number of cells at level `l`.
    pub fn len(&self, l: usize) -> usize {
        self.parts.names[l].len()
    }

    /// True when there are no objects, hence no cells at all.
    pub fn is_empty(&self) -> bool {
        self.parts.names[0].is_empty()
    }

    pub fn total_cells(&self) -> usize {
        self.parts.names.iter().map(Vec::len).sum()
    }

    pub fn names(&self, l: usize) -> &[String] {
        &self.parts.names[l]
    }

    pub fn name(&self, l: usize, x: usize) -> &str {
        &self.parts.names[l][x]
    }

    pub fn find(&self, l: usize, name: &str) -> Option<usize> {
        self.index.get(l)?.get(name).copied()
    }

    pub fn src(&self, l: usize, x: usize) -> usize {
        self.parts.src[l][x]
    }

    pub fn tgt(&self, l: usize, x: usize) -> usize {
        self.parts.tgt[l][x]
    }

    /// Identity on the level-`l - 1` cell `x`.
    pub fn idn(&self, l: usize, x: usize) -> usize {
        self.parts.idn[l][x]
    }

    pub fn comp(&self, j: usize, i: usize, later: usize, earlier: usize) -> Option<usize> {
        self.parts.comp[j][i].get(&(later, earlier)).copied()
    }

    pub fn table(&self, j: usize, i: usize) -> &CompTable {
        &self.parts.comp[j][i]
    }

    pub fn bnd_src(&self, l: usize, x: usize, i: usize) -> usize {
        self.parts.bnd_src(l, x, i)
    }

    pub fn bnd_tgt(&self, l: usize, x: usize, i: usize) -> usize {
        self.parts.bnd_tgt(l, x, i)
    }

    /// Iterated identity taking a level-`i` cell up to level `j`.
    pub fn tower(&self, i: usize, j: usize, x: usize) -> usize {
        self.parts.tower(i, j, x)
    }

    /// The cell `x` is an identity at level `l`; returns what it is the identity of.
    pub fn identity_of(&self, l: usize, x: usize) -> Option<usize> {
        if l == 0 {
            return None;
        }
        let s = self.src(l, x);
        (self.idn(l, s) == x).then_some(s)
    }

    /// Level-`l` cells grouped by `(src, tgt)`, in index order.
    pub fn by_boundary(&self, l: usize) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut out: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        if l == 0 {
            return out;
        }
        for x in 0..self.len(l) {
            out.entry((self.src(l, x), self.tgt(l, x))).or_default().push(x);
        }
        out
    }

    /// Level-`l` cells from `s` to `t`.
    pub fn hom(&self, l: usize, s: usize, t: usize) -> Vec<usize> {
        (0..self.len(l))
            .filter(|&x| self.src(l, x) == s && self.tgt(l, x) == t)
            .collect()
    }

    /// Indices of level `l` sorted by name.
    pub fn sorted(&self, l: usize) -> Vec<usize> {
        self.index[l].values().copied().collect()
    }

    pub fn parts(&self) -> &NCatParts {
        &self.parts
    }

    pub fn into_parts(self) -> NCatParts {
        self.parts
    }

    /// The same n-category with every cell renamed.
    pub fn relabel(&self, mut rename: impl FnMut(usize, &str) -> String) -> Result<NCat, ValidationError> {
        let mut parts = self.parts.clone();
        for (l, level) in parts.names.iter_mut().enumerate() {
            for s in level.iter_mut() {
                *s = rename(l, s);
            }
        }
        crate::validate::check_names(&parts)?;
        Ok(NCat::from_trusted(parts))
    }

    /// Name-based view of the tables.
    pub fn to_raw(&self) -> RawNCat {
        let p = &self.parts;
        let nm = |l: usize, x: usize| p.names[l][x].clone();
        let mut raw = RawNCat {
            n: p.n,
            cells: p.names.clone(),
            src: Vec::new(),
            tgt: Vec::new(),
            idn: Vec::new(),
            comp: BTreeMap::new(),
        };
        for l in 1..=p.n {
            raw.src.push((0..self.len(l)).map(|x| (nm(l, x), nm(l - 1, p.src[l][x]))).collect());
            raw.tgt.push((0..self.len(l)).map(|x| (nm(l, x), nm(l - 1, p.tgt[l][x]))).collect());
            raw.idn.push((0..self.len(l - 1)).map(|x| (nm(l - 1, x), nm(l, p.idn[l][x]))).collect());
            for i in 0..l {
                let table = p.comp[l][i]
                    .iter()
                    .map(|(&(a, b), &r)| ((nm(l, a), nm(l, b)), nm(l, r)))
                    .collect();
                raw.comp.insert((l, i), table);
            }
        }
        raw
    }
}

/// Name-based tables, as read from a file.
///
/// `src[l - 1]`, `tgt[l - 1]` describe level `l`; `idn[l - 1]` sends level
/// `l - 1` cells to level `l`. Composition tables are keyed by `(j, i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawNCat {
    pub n: usize,
    pub cells: Vec<Vec<String>>,
    pub src: Vec<BTreeMap<String, String>>,
    pub tgt: Vec<BTreeMap<String, String>>,
    pub idn: Vec<BTreeMap<String, String>>,
    pub comp: BTreeMap<(usize, usize), BTreeMap<(String, String), String>>,
}

impl RawNCat {
    /// Resolves names to indices without checking any law.
    pub fn resolve(&self) -> Result<NCatParts, ValidationError> {
        let n = self.n;
        let structural = |m: String| ValidationError::Structural(m);
        if self.cells.len() != n + 1 {
            return Err(structural(format!(
                "expected {} cell levels for n = {n}, found {}",
                n + 1,
                self.cells.len()
            )));
        }
        for (what, t) in [("src", &self.src), ("tgt", &self.tgt), ("idn", &self.idn)] {
            if t.len() != n {
                return Err(structural(format!("{what} must have {n} levels, found {}", t.len())));
            }
        }
        let mut index: Vec<BTreeMap<&str, usize>> = Vec::new();
        for (l, level) in self.cells.iter().enumerate() {
            let mut m = BTreeMap::new();
            for (k, s) in level.iter().enumerate() {
                if m.insert(s.as_str(), k).is_some() {
                    return Err(structural(format!("duplicate cell name {s:?} at level {l}")));
                }
            }
            index.push(m);
        }
        let look = |l: usize, s: &str, ctx: &dyn Fn() -> String| {
            index[l]
                .get(s)
                .copied()
                .ok_or_else(|| structural(format!("{}: unknown level-{l} cell {s:?}", ctx())))
        };
        let mut parts = NCatParts::empty(n);
        parts.names = self.cells.clone();
        for l in 1..=n {
            for (what, table, out) in [
                ("src", &self.src[l - 1], &mut parts.src[l]),
                ("tgt", &self.tgt[l - 1], &mut parts.tgt[l]),
            ] {
                let mut v = vec![usize::MAX; self.cells[l].len()];
                for (k, t) in table {
                    let x = look(l, k, &|| format!("{what}[{l}]"))?;
                    v[x] = look(l - 1, t, &|| format!("{what}[{l}].{k}"))?;
                }
                if let Some(x) = v.iter().position(|&y| y == usize::MAX) {
                    return Err(structural(format!(
                        "{what}[{l}] has no entry for {:?}",
                        self.cells[l][x]
                    )));
                }
                *out = v;
            }
            let mut v = vec![usize::MAX; self.cells[l - 1].len()];
            for (k, t) in &self.idn[l - 1] {
                let x = look(l - 1, k, &|| format!("idn[{l}]"))?;
                v[x] = look(l, t, &|| format!("idn[{l}].{k}"))?;
            }
            if let Some(x) = v.iter().position(|&y| y == usize::MAX) {
                return Err(structural(format!(
                    "idn[{l}] has no entry for {:?}",
                    self.cells[l - 1][x]
                )));
            }
            parts.idn[l] = v;
        }
        for (&(j, i), table) in &self.comp {
            if i >= j || j > n {
                return Err(structural(format!("comp[{j},{i}] is not a level pair i < j <= {n}")));
            }
            for ((a, b), r) in table {
                let ctx = || format!("comp[{j},{i}].{a}|{b}");
                let key = (look(j, a, &ctx)?, look(j, b, &ctx)?);
                parts.comp[j][i].insert(key, look(j, r, &ctx)?);
            }
        }
        Ok(parts)
    }
}

/// Validates name-based data and returns the n-category it describes.
pub fn validate_ncat(raw: &RawNCat) -> Result<NCat, ValidationError> {
    raw.resolve()?.validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::{walking_two_cell, parallel_two_cells};
    use crate::limits::terminal;

    #[test]
    fn terminal_is_valid() {
        for n in 0..4 {
            let t = terminal(n);
            assert_eq!(validate_ncat(&t.to_raw()).unwrap(), t);
        }
    }

    #[test]
    fn walking_two_cell_shape() {
        let w = walking_two_cell();
        let sizes: Vec<usize> = (0..=2).map(|l| w.len(l)).collect();
        assert_eq!(sizes, [2, 4, 5]);
        let theta = w.find(2, "θ").unwrap();
        assert_eq!(w.name(1, w.src(2, theta)), "f");
        assert_eq!(w.name(1, w.tgt(2, theta)), "g");
        assert_eq!(validate_ncat(&w.to_raw()).unwrap(), w);
    }

    #[test]
    fn redirected_horizontal_entry_is_caught() {
        let w = walking_two_cell();
        let mut raw = w.to_raw();
        // θ whiskered by the identity on a along level 0 should be θ.
        let key = (String::from("θ"), String::from("id_id_a"));
        let table = raw.comp.get_mut(&(2, 0)).unwrap();
        assert_eq!(table[&key], "θ");
        table.insert(key, String::from("id_f"));
        match validate_ncat(&raw) {
            Err(ValidationError::Law(v)) => {
                assert!(matches!(v.law, Law::CompositeBoundary | Law::RightUnit | Law::Interchange), "{v}");
                assert!(v.to_string().contains("law violated at levels"));
            }
            other => panic!("expected a law violation, got {other:?}"),
        }
    }

    #[test]
    fn dangling_and_domain_errors() {
        let w = walking_two_cell();
        let mut raw = w.to_raw();
        raw.src[1].insert(String::from("θ"), String::from("nope"));
        assert!(matches!(validate_ncat(&raw), Err(ValidationError::Structural(m)) if m.contains("src[2].θ")));

        let mut raw = w.to_raw();
        let table = raw.comp.get_mut(&(2, 1)).unwrap();
        table.remove(&(String::from("θ"), String::from("id_f")));
        assert!(matches!(validate_ncat(&raw), Err(ValidationError::Domain { j: 2, i: 1, .. })));

        let mut raw = w.to_raw();
        let table = raw.comp.get_mut(&(2, 1)).unwrap();
        table.insert((String::from("θ"), String::from("θ")), String::from("θ"));
        assert!(matches!(validate_ncat(&raw), Err(ValidationError::Domain { .. })));
    }

    #[test]
    fn relabel_and_queries() {
        let p = parallel_two_cells();
        let q = p.relabel(|l, s| format!("{l}{s}")).unwrap();
        assert_eq!(q.name(2, 0), format!("2{}", p.name(2, 0)));
        assert!(p.relabel(|_, _| String::from("x")).is_err());
        let f = p.find(1, "f").unwrap();
        let g = p.find(1, "g").unwrap();
        assert_eq!(p.hom(2, f, g).len(), 2);
        assert_eq!(p.by_boundary(2)[&(f, g)].len(), 2);
        let a = p.find(0, "a").unwrap();
        assert_eq!(p.identity_of(2, p.tower(0, 2, a)), Some(p.idn(1, a)));
    }
}
