//! Small n-categories built from pieces: points, discrete sets, wedges of
//! hom n-categories, suspensions, globes, monoids and sub-n-categories.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::functor::NFunctor;
use crate::ncat::{NCat, NCatParts, ValidationError};

fn id_name(s: &str) -> String {
    format!("id_{s}")
}

/// A 0-category, that is a finite set.
pub fn set(names: &[&str]) -> NCat {
    let mut p = NCatParts::empty(0);
    p.names[0] = names.iter().map(|s| String::from(*s)).collect();
    NCat::from_trusted(p)
}

/// The same cells regarded as an `m`-category with only identity cells above
/// the original top level.
pub fn raise(c: &NCat, m: usize) -> NCat {
    let d = c.n();
    assert!(m >= d, "cannot raise to a lower dimension");
    let mut p = c.parts().clone();
    p.n = m;
    for l in d + 1..=m {
        let below: Vec<String> = p.names[l - 1].clone();
        let size = below.len();
        p.names.push(below.iter().map(|s| id_name(s)).collect());
        p.src.push((0..size).collect());
        p.tgt.push((0..size).collect());
        p.idn.push((0..size).collect());
        let mut row = Vec::new();
        for i in 0..l {
            if i + 1 == l {
                row.push((0..size).map(|x| ((x, x), x)).collect());
            } else {
                row.push(p.comp[l - 1][i].clone());
            }
        }
        p.comp.push(row);
    }
    NCat::from_trusted(p)
}

/// The lower `m` levels.
pub fn truncate(c: &NCat, m: usize) -> NCat {
    assert!(m <= c.n(), "cannot truncate above the dimension");
    let mut p = c.parts().clone();
    p.n = m;
    p.names.truncate(m + 1);
    p.src.truncate(m + 1);
    p.tgt.truncate(m + 1);
    p.idn.truncate(m + 1);
    p.comp.truncate(m + 1);
    NCat::from_trusted(p)
}

/// One object and its identity tower.
pub fn point(n: usize, name: &str) -> NCat {
    raise(&set(&[name]), n)
}

/// Objects with identity cells only.
pub fn discrete(n: usize, names: &[&str]) -> NCat {
    raise(&set(names), n)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum WCell {
    Id(usize),
    Tup(usize, Vec<usize>),
}

impl WCell {
    fn start(&self) -> usize {
        match self {
            WCell::Id(a) | WCell::Tup(a, _) => *a,
        }
    }

    fn end(&self) -> usize {
        match self {
            WCell::Id(a) => *a,
            WCell::Tup(a, c) => a + c.len(),
        }
    }
}

/// A wedge of hom n-categories laid end to end.
pub struct Wedge {
    pub cat: NCat,
    index: Vec<BTreeMap<WCell, usize>>,
}

impl Wedge {
    /// The cell at level `l + 1` given by the level-`l` cell `x` of hom `r`.
    pub fn from_hom(&self, r: usize, l: usize, x: usize) -> usize {
        self.index[l + 1][&WCell::Tup(r, vec![x])]
    }

    /// The `k + 1` objects.
    pub fn object(&self, a: usize) -> usize {
        self.index[0][&WCell::Id(a)]
    }
}

/// The `m`-category with objects `objects[0..=k]` in which the cells from
/// `a` to `b > a` are tuples of cells of `homs[a], ..., homs[b - 1]`, all of
/// dimension `m - 1`, composed along objects by concatenation. There are
/// only identities from an object to itself and nothing backwards.
pub fn wedge(m: usize, homs: &[Arc<NCat>], objects: &[&str]) -> Wedge {
    assert!(m >= 1 && objects.len() == homs.len() + 1);
    assert!(homs.iter().all(|h| h.n() + 1 == m), "hom dimension must be one less");
    let k = homs.len();
    let mut levels: Vec<Vec<WCell>> = vec![(0..=k).map(WCell::Id).collect()];
    for l in 0..m {
        let mut lv = Vec::new();
        for a in 0..=k {
            lv.push(WCell::Id(a));
            for b in a + 1..=k {
                let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
                for h in &homs[a..b] {
                    let mut next = Vec::new();
                    for t in &tuples {
                        for x in 0..h.len(l) {
                            let mut t2 = t.clone();
                            t2.push(x);
                            next.push(t2);
                        }
                    }
                    tuples = next;
                }
                lv.extend(tuples.into_iter().map(|t| WCell::Tup(a, t)));
            }
        }
        levels.push(lv);
    }
    let index: Vec<BTreeMap<WCell, usize>> = levels
        .iter()
        .map(|lv| lv.iter().cloned().enumerate().map(|(x, c)| (c, x)).collect())
        .collect();
    let mut p = NCatParts::empty(m);
    p.names[0] = objects.iter().map(|s| String::from(*s)).collect();
    for l in 1..=m {
        let h = l - 1;
        for (x, c) in levels[l].iter().enumerate() {
            let name = match c {
                WCell::Id(_) => id_name(&p.names[l - 1][index[l - 1][&WCell::Id(c.start())]]),
                WCell::Tup(a, t) => {
                    let parts: Vec<&str> = t.iter().enumerate().map(|(r, &y)| homs[a + r].name(h, y)).collect();
                    format!("{a}[{}]", parts.join(","))
                }
            };
            p.names[l].push(name);
            let (s, t) = match c {
                WCell::Id(a) if l == 1 => (*a, *a),
                WCell::Tup(a, t) if l == 1 => (*a, a + t.len()),
                WCell::Id(a) => (index[l - 1][&WCell::Id(*a)], index[l - 1][&WCell::Id(*a)]),
                WCell::Tup(a, t) => {
                    let s: Vec<usize> = t.iter().enumerate().map(|(r, &y)| homs[a + r].src(h, y)).collect();
                    let tt: Vec<usize> = t.iter().enumerate().map(|(r, &y)| homs[a + r].tgt(h, y)).collect();
                    (index[l - 1][&WCell::Tup(*a, s)], index[l - 1][&WCell::Tup(*a, tt)])
                }
            };
            debug_assert!(x == p.src[l].len());
            p.src[l].push(s);
            p.tgt[l].push(t);
        }
        for c in &levels[l - 1] {
            let up = match c {
                _ if l == 1 => WCell::Id(c.start()),
                WCell::Id(a) => WCell::Id(*a),
                WCell::Tup(a, t) => {
                    let hh = l - 1;
                    WCell::Tup(*a, t.iter().enumerate().map(|(r, &y)| homs[a + r].idn(hh, y)).collect())
                }
            };
            p.idn[l].push(index[l][&up]);
        }
        // Along objects: concatenation.
        let mut by_start: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (x, c) in levels[l].iter().enumerate() {
            by_start.entry(c.start()).or_default().push(x);
        }
        for (x1, c1) in levels[l].iter().enumerate() {
            for &x2 in by_start.get(&c1.end()).into_iter().flatten() {
                let c2 = &levels[l][x2];
                let r = match (c1, c2) {
                    (WCell::Id(_), _) => x2,
                    (_, WCell::Id(_)) => x1,
                    (WCell::Tup(a, t1), WCell::Tup(_, t2)) => {
                        let mut t = t1.clone();
                        t.extend_from_slice(t2);
                        index[l][&WCell::Tup(*a, t)]
                    }
                };
                p.comp[l][0].insert((x2, x1), r);
            }
        }
        // Along higher levels: componentwise inside one hom.
        for i in 1..l {
            let hh = l - 1;
            let mut by_tgt: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for x in 0..levels[l].len() {
                by_tgt.entry(p.bnd_tgt(l, x, i)).or_default().push(x);
            }
            for x2 in 0..levels[l].len() {
                for &x1 in by_tgt.get(&p.bnd_src(l, x2, i)).into_iter().flatten() {
                    let r = match (&levels[l][x2], &levels[l][x1]) {
                        (WCell::Id(_), WCell::Id(_)) => Some(x2),
                        (WCell::Tup(a, t2), WCell::Tup(_, t1)) => t2
                            .iter()
                            .zip(t1)
                            .enumerate()
                            .map(|(r, (&y2, &y1))| homs[a + r].comp(hh, i - 1, y2, y1))
                            .collect::<Option<Vec<usize>>>()
                            .map(|t| index[l][&WCell::Tup(*a, t)]),
                        _ => None,
                    };
                    if let Some(r) = r {
                        p.comp[l][i].insert((x2, x1), r);
                    }
                }
            }
        }
    }
    Wedge {
        cat: NCat::from_trusted(p),
        index,
    }
}

/// Two objects `s`, `t` with `c` as the only non-trivial hom. Cells keep
/// their names from `c` unless that would clash.
pub fn suspend(c: &Arc<NCat>) -> NCat {
    suspend_named(c, ["s", "t"])
}

/// The ordinal with `len + 1` objects and `len` generating arrows, as an
/// n-category.
pub fn chain(n: usize, len: usize) -> NCat {
    let names: Vec<String> = (0..=len).map(|k| format!("{k}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let step = Arc::new(set(&["x"]));
    let homs = vec![step; len];
    raise(&wedge(1, &homs, &refs).cat, n)
}

/// The walking `d`-cell as an n-category.
pub fn globe(d: usize, n: usize) -> NCat {
    assert!(d <= n);
    if d == 0 {
        return point(n, "x");
    }
    let inner = Arc::new(globe(d - 1, n - 1));
    suspend(&inner)
}

/// `names.len()` parallel non-identity `n`-cells.
pub fn parallel_cells(n: usize, names: &[&str]) -> NCat {
    assert!(n >= 1);
    if n == 1 {
        let hom = Arc::new(set(names));
        return suspend(&hom);
    }
    let inner = Arc::new(parallel_cells(n - 1, names));
    suspend(&inner)
}

/// The one-object category of a finite monoid with unit `0`; `table[a][b]`
/// is the product `a b`, read as `a` after `b`.
pub fn monoid(names: &[&str], table: &[Vec<usize>]) -> Result<NCat, ValidationError> {
    let mut p = NCatParts::empty(1);
    p.names[0].push(String::from("o"));
    p.names[1] = names.iter().map(|s| String::from(*s)).collect();
    p.src[1] = vec![0; names.len()];
    p.tgt[1] = vec![0; names.len()];
    p.idn[1] = vec![0];
    for (a, row) in table.iter().enumerate() {
        for (b, &r) in row.iter().enumerate() {
            p.comp[1][0].insert((a, b), r);
        }
    }
    p.validate()
}

/// The two-fold delooping of a commutative monoid: one object, one 1-cell
/// and the monoid as 2-cells, composed the same way along both levels.
pub fn double_delooping(names: &[&str], table: &[Vec<usize>]) -> Result<NCat, ValidationError> {
    let mut p = NCatParts::empty(2);
    p.names[0].push(String::from("o"));
    p.names[1].push(String::from("id_o"));
    p.names[2] = names.iter().map(|s| String::from(*s)).collect();
    p.src[1] = vec![0];
    p.tgt[1] = vec![0];
    p.idn[1] = vec![0];
    p.src[2] = vec![0; names.len()];
    p.tgt[2] = vec![0; names.len()];
    p.idn[2] = vec![0];
    p.comp[1][0].insert((0, 0), 0);
    for (a, row) in table.iter().enumerate() {
        for (b, &r) in row.iter().enumerate() {
            p.comp[2][0].insert((a, b), r);
            p.comp[2][1].insert((a, b), r);
        }
    }
    p.validate()
}

/// Objects `a`, `b`, parallel 1-cells `f`, `g` and one 2-cell `θ: f ⇒ g`.
pub fn walking_two_cell() -> NCat {
    let arrow = Arc::new(suspend_named(&Arc::new(set(&["θ"])), ["f", "g"]));
    suspend_named(&arrow, ["a", "b"])
}

/// Objects `a`, `b`, parallel 1-cells `f`, `g` and two 2-cells `θ1, θ2: f ⇒ g`.
pub fn parallel_two_cells() -> NCat {
    let arrows = Arc::new(suspend_named(&Arc::new(set(&["θ1", "θ2"])), ["f", "g"]));
    suspend_named(&arrows, ["a", "b"])
}

/// Suspension with chosen object names.
pub fn suspend_named(c: &Arc<NCat>, objects: [&str; 2]) -> NCat {
    let w = wedge(c.n() + 1, core::slice::from_ref(c), &objects);
    let plain = w.cat.relabel(|_, s| match s.strip_prefix("0[").and_then(|r| r.strip_suffix(']')) {
        Some(inner) => String::from(inner),
        None => String::from(s),
    });
    plain.unwrap_or(w.cat)
}

/// The smallest sub-n-category containing the given `(level, cell)` pairs,
/// with its inclusion. Cells keep their names and relative order.
pub fn sub_ncat(c: &Arc<NCat>, generators: &[(usize, usize)]) -> (Arc<NCat>, NFunctor) {
    let n = c.n();
    let mut keep: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n + 1];
    for &(l, x) in generators {
        keep[l].insert(x);
    }
    loop {
        let mut changed = false;
        for l in (1..=n).rev() {
            let cells: Vec<usize> = keep[l].iter().copied().collect();
            for x in cells {
                changed |= keep[l - 1].insert(c.src(l, x));
                changed |= keep[l - 1].insert(c.tgt(l, x));
            }
        }
        for l in 1..=n {
            let cells: Vec<usize> = keep[l - 1].iter().copied().collect();
            for x in cells {
                changed |= keep[l].insert(c.idn(l, x));
            }
        }
        for j in 1..=n {
            for i in 0..j {
                for (&(a, b), &r) in c.table(j, i) {
                    if keep[j].contains(&a) && keep[j].contains(&b) {
                        changed |= keep[j].insert(r);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let order: Vec<Vec<usize>> = keep.iter().map(|s| s.iter().copied().collect()).collect();
    let pos: Vec<BTreeMap<usize, usize>> = order
        .iter()
        .map(|v| v.iter().enumerate().map(|(k, &x)| (x, k)).collect())
        .collect();
    let mut p = NCatParts::empty(n);
    for l in 0..=n {
        p.names[l] = order[l].iter().map(|&x| String::from(c.name(l, x))).collect();
        if l > 0 {
            p.src[l] = order[l].iter().map(|&x| pos[l - 1][&c.src(l, x)]).collect();
            p.tgt[l] = order[l].iter().map(|&x| pos[l - 1][&c.tgt(l, x)]).collect();
            p.idn[l] = order[l - 1].iter().map(|&x| pos[l][&c.idn(l, x)]).collect();
            for i in 0..l {
                for (&(a, b), &r) in c.table(l, i) {
                    if let (Some(&a2), Some(&b2)) = (pos[l].get(&a), pos[l].get(&b)) {
                        p.comp[l][i].insert((a2, b2), pos[l][&r]);
                    }
                }
            }
        }
    }
    let sub = Arc::new(NCat::from_trusted(p));
    let inclusion = NFunctor::from_trusted(sub.clone(), c.clone(), order);
    (sub, inclusion)
}
