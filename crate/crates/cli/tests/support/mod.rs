//! Brute-force oracles, written against the raw tables only.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ncat_galois::reflect::reflect;
use ncat_galois::{NCat, NCatParts, NFunctor};

fn down(tbl: &[Vec<usize>], l: usize, mut x: usize, i: usize) -> usize {
    for lev in (i + 1..=l).rev() {
        x = tbl[lev][x];
    }
    x
}

fn up(p: &NCatParts, i: usize, j: usize, mut x: usize) -> usize {
    for lev in i + 1..=j {
        x = p.idn[lev][x];
    }
    x
}

/// A precategory read off the tables: objects are level-`i` cells, arrows
/// level-`j` cells, composition `comp[j][i]`.
struct Pre<'a> {
    p: &'a NCatParts,
    i: usize,
    j: usize,
}

impl Pre<'_> {
    fn dom(&self, x: usize) -> usize {
        down(&self.p.src, self.j, x, self.i)
    }
    fn cod(&self, x: usize) -> usize {
        down(&self.p.tgt, self.j, x, self.i)
    }
    fn id(&self, o: usize) -> usize {
        up(self.p, self.i, self.j, o)
    }
    fn comp(&self, g: usize, f: usize) -> Option<usize> {
        self.p.comp[self.j][self.i].get(&(g, f)).copied()
    }

    /// Domain of definition, boundaries, units and associativity.
    fn is_category(&self) -> Result<(), String> {
        let (i, j) = (self.i, self.j);
        let arrows = self.p.names[j].len();
        for g in 0..arrows {
            for f in 0..arrows {
                let composable = self.dom(g) == self.cod(f);
                match (composable, self.comp(g, f)) {
                    (true, None) => return Err(format!("C[{j},{i}]: composable pair ({g},{f}) has no composite")),
                    (false, Some(_)) => return Err(format!("C[{j},{i}]: composite of non-composable ({g},{f})")),
                    (true, Some(r)) if self.dom(r) != self.dom(f) || self.cod(r) != self.cod(g) => {
                        return Err(format!("C[{j},{i}]: composite of ({g},{f}) has the wrong ends"))
                    }
                    _ => {}
                }
            }
        }
        for g in 0..arrows {
            if self.comp(g, self.id(self.dom(g))) != Some(g) || self.comp(self.id(self.cod(g)), g) != Some(g) {
                return Err(format!("C[{j},{i}]: unit law fails at {g}"));
            }
        }
        for (&(h, g), &hg) in &self.p.comp[j][i] {
            for f in 0..arrows {
                if let Some(gf) = self.comp(g, f) {
                    if self.comp(h, gf) != self.comp(hg, f) {
                        return Err(format!("C[{j},{i}]: associativity fails at ({h},{g},{f})"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Whether the tables describe a strict n-category.
pub fn laws_hold(p: &NCatParts) -> Result<(), String> {
    let n = p.n;
    if p.names.len() != n + 1 {
        return Err("level count".into());
    }
    for l in 1..=n {
        let (here, below) = (p.names[l].len(), p.names[l - 1].len());
        if p.src[l].len() != here || p.tgt[l].len() != here || p.idn[l].len() != below {
            return Err(format!("tables at level {l} are not total"));
        }
        if p.src[l].iter().chain(&p.tgt[l]).any(|&y| y >= below) || p.idn[l].iter().any(|&y| y >= here) {
            return Err(format!("dangling entry at level {l}"));
        }
        for x in 0..below {
            let e = p.idn[l][x];
            if p.src[l][e] != x || p.tgt[l][e] != x {
                return Err(format!("identity at level {l} has the wrong ends"));
            }
        }
        if l >= 2 {
            for x in 0..here {
                let (s, t) = (p.src[l][x], p.tgt[l][x]);
                if p.src[l - 1][s] != p.src[l - 1][t] || p.tgt[l - 1][s] != p.tgt[l - 1][t] {
                    return Err(format!("cell {x} at level {l} is not globular"));
                }
            }
        }
        for i in 0..l {
            if p.comp[l][i].iter().any(|(&(a, b), &r)| a >= here || b >= here || r >= here) {
                return Err(format!("dangling composition entry at level {l}"));
            }
        }
    }
    for j in 1..=n {
        for i in 0..j {
            Pre { p, i, j }.is_category()?;
        }
    }
    // Composition along i commutes with the boundaries and identities of
    // every level between i and the top, and interchanges with composition
    // along every level in between.
    for k in 1..=n {
        for i in 0..k.saturating_sub(1) {
            for (&(g, f), &r) in &p.comp[k][i] {
                for (tbl, what) in [(&p.src, "src"), (&p.tgt, "tgt")] {
                    let (bg, bf, br) = (tbl[k][g], tbl[k][f], tbl[k][r]);
                    if p.comp[k - 1][i].get(&(bg, bf)) != Some(&br) {
                        return Err(format!("{what} of a composite along {i} at level {k}"));
                    }
                }
            }
            for (&(u, v), &w) in &p.comp[k - 1][i] {
                if p.comp[k][i].get(&(p.idn[k][u], p.idn[k][v])) != Some(&p.idn[k][w]) {
                    return Err(format!("composite of identities along {i} at level {k}"));
                }
            }
            let mut after_i: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &(a, c) in p.comp[k][i].keys() {
                after_i.entry(a).or_default().push(c);
            }
            for j in i + 1..k {
                let mut after_j: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
                for (&(c, d), &cd) in &p.comp[k][j] {
                    after_j.entry(c).or_default().push((d, cd));
                }
                for (&(a, b), &ab) in &p.comp[k][j] {
                    for &c in after_i.get(&a).into_iter().flatten() {
                        for &(d, cd) in after_j.get(&c).into_iter().flatten() {
                            let Some(&bd) = p.comp[k][i].get(&(b, d)) else { continue };
                            let ac = p.comp[k][i][&(a, c)];
                            let left = p.comp[k][i].get(&(ab, cd));
                            if left.is_none() || left != p.comp[k][j].get(&(ac, bd)) {
                                return Err(format!("interchange at level {k} along {j},{i}"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Relation of an n-preorder as pairs of `(n-1)`-cells, by index.
pub fn relation_of(c: &NCat) -> BTreeSet<(usize, usize)> {
    let n = c.n();
    (0..c.len(n)).map(|x| (c.src(n, x), c.tgt(n, x))).collect()
}

/// The intersection of every relation on the top cells of `s` that
/// contains `gens`, is reflexive and transitive, and is closed under
/// composition along every lower level. `None` if there are too many
/// candidate pairs to enumerate.
pub fn intersect_all_preorders(s: &NCat, gens: &[(usize, usize)], max_pairs: usize) -> Option<BTreeSet<(usize, usize)>> {
    let m = s.n();
    let size = s.len(m);
    let parallel = |a: usize, b: usize| m == 0 || (s.src(m, a) == s.src(m, b) && s.tgt(m, a) == s.tgt(m, b));
    let mut pairs = Vec::new();
    for a in 0..size {
        for b in 0..size {
            if a != b && parallel(a, b) {
                pairs.push((a, b));
            }
        }
    }
    if pairs.len() > max_pairs {
        return None;
    }
    let diag: BTreeSet<(usize, usize)> = (0..size).map(|a| (a, a)).collect();
    let mut meet: Option<BTreeSet<(usize, usize)>> = None;
    for mask in 0u32..(1u32 << pairs.len()) {
        let mut r = diag.clone();
        r.extend(pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p));
        if !gens.iter().all(|g| r.contains(g)) {
            continue;
        }
        let transitive = r.iter().all(|&(a, b)| r.iter().filter(|&&(c, _)| c == b).all(|&(_, d)| r.contains(&(a, d))));
        if !transitive {
            continue;
        }
        let closed = (0..m).all(|i| {
            r.iter().all(|&(a, b)| {
                r.iter().all(|&(c, d)| match (s.comp(m, i, a, c), s.comp(m, i, b, d)) {
                    (Some(x), Some(y)) => r.contains(&(x, y)),
                    _ => true,
                })
            })
        });
        if closed {
            meet = Some(match meet {
                None => r,
                Some(old) => old.intersection(&r).copied().collect(),
            });
        }
    }
    // The chaotic relation always qualifies, so the family is never empty.
    Some(meet.expect("the chaotic relation is a valid preorder"))
}

/// Element tuples of `c` for every shape of the site: cells, composable
/// pairs along each lower level, and two-by-two grids for each pair of
/// lower levels. Keys name the shape.
pub fn shapes(c: &NCat) -> BTreeMap<String, Vec<Vec<usize>>> {
    let n = c.n();
    let mut out = BTreeMap::new();
    for l in 0..=n {
        out.insert(format!("D{l}"), (0..c.len(l)).map(|x| vec![x]).collect());
    }
    for j in 1..=n {
        for i in 0..j {
            out.insert(format!("D{j}{i}"), c.table(j, i).keys().map(|&(g, f)| vec![g, f]).collect());
        }
    }
    for k in 2..=n {
        for j in 1..k {
            for i in 0..j {
                let mut grids = Vec::new();
                for &(a, b) in c.table(k, j).keys() {
                    for &(cc, d) in c.table(k, j).keys() {
                        if c.comp(k, i, a, cc).is_some() && c.comp(k, i, b, d).is_some() {
                            grids.push(vec![a, b, cc, d]);
                        }
                    }
                }
                out.insert(format!("D{k}{j}{i}"), grids);
            }
        }
    }
    out
}

fn level_of(shape: &str) -> usize {
    shape[1..2].parse().unwrap()
}

/// For every shape, the square `A -> B`, `A -> IA`, `IA -> IB`, `B -> IB`
/// is a pullback of finite sets. Returns the first shape where it is not.
pub fn unit_squares_pullback(f: &NFunctor) -> Result<(), String> {
    let (a, b) = (f.dom(), f.cod());
    let (ra, rb) = (reflect(a), reflect(b));
    let n = a.n();
    // If on the top level: the class of θ goes to the class of f(θ).
    let mut i_f: BTreeMap<usize, usize> = BTreeMap::new();
    for x in 0..a.len(n) {
        i_f.insert(ra.unit.apply(n, x), rb.unit.apply(n, f.apply(n, x)));
    }
    let i_f_at = |l: usize, x: usize| if l == n { i_f[&x] } else { f.apply(l, x) };
    let (sa, sb, sia) = (shapes(a), shapes(b), shapes(&ra.image));
    for (shape, tuples) in &sa {
        let l = level_of(shape);
        let over: BTreeSet<(Vec<usize>, Vec<usize>)> = sb[shape]
            .iter()
            .flat_map(|y| {
                let ey: Vec<usize> = y.iter().map(|&c| rb.unit.apply(l, c)).collect();
                sia[shape]
                    .iter()
                    .filter(move |z| z.iter().map(|&c| i_f_at(l, c)).collect::<Vec<_>>() == ey)
                    .map(move |z| (y.clone(), z.clone()))
            })
            .collect();
        let images: Vec<(Vec<usize>, Vec<usize>)> = tuples
            .iter()
            .map(|x| (x.iter().map(|&c| f.apply(l, c)).collect(), x.iter().map(|&c| ra.unit.apply(l, c)).collect()))
            .collect();
        let distinct: BTreeSet<_> = images.iter().cloned().collect();
        if distinct.len() != images.len() || distinct != over {
            return Err(shape.clone());
        }
    }
    Ok(())
}
