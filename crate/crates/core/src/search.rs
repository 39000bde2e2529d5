//! Backtracking search for functors between finite n-categories.
//!
//! Cells of the domain are assigned level by level. Within a level the
//! next free cell is the least by name, and every composite of cells
//! already placed is placed right after them, so that it is forced rather
//! than guessed. Candidates are restricted to codomain cells with the already
//! assigned boundaries; identities and composites of assigned cells are
//! forced, and every composition entry is checked as soon as its three cells
//! are assigned.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::functor::NFunctor;
use crate::ncat::NCat;

const UNSET: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("search space exceeds the limit of {limit} solutions")]
pub struct SearchLimit {
    pub limit: usize,
}

/// A configurable functor search.
pub struct FunctorSearch<'a> {
    dom: &'a Arc<NCat>,
    cod: &'a Arc<NCat>,
    allowed: Vec<Vec<Option<Vec<usize>>>>,
    injective: bool,
    signatures: bool,
    rank: Option<Vec<Vec<usize>>>,
}

impl<'a> FunctorSearch<'a> {
    pub fn new(dom: &'a Arc<NCat>, cod: &'a Arc<NCat>) -> Self {
        let allowed = (0..=dom.n()).map(|l| vec![None; dom.len(l)]).collect();
        FunctorSearch {
            dom,
            cod,
            allowed,
            injective: false,
            signatures: false,
            rank: None,
        }
    }

    /// Restricts the image of `x` at level `l` to `candidates`, intersecting
    /// with any earlier restriction.
    pub fn restrict(mut self, l: usize, x: usize, candidates: Vec<usize>) -> Self {
        let slot = &mut self.allowed[l][x];
        *slot = Some(match slot.take() {
            None => candidates,
            Some(old) => old.into_iter().filter(|c| candidates.contains(c)).collect(),
        });
        self
    }

    /// Only levelwise-injective assignments; with equal level sizes this
    /// searches for isomorphisms.
    pub fn injective(mut self) -> Self {
        self.injective = true;
        self.signatures = true;
        self
    }

    /// Tries codomain cells in increasing `rank[l][y]` instead of by name.
    pub fn rank(mut self, rank: Vec<Vec<usize>>) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn first(&self) -> Option<NFunctor> {
        let mut found = None;
        self.run(&mut |maps| {
            found = Some(maps.to_vec());
            false
        });
        found.map(|m| NFunctor::from_trusted(self.dom.clone(), self.cod.clone(), m))
    }

    /// All solutions, or an error once more than `limit` are found.
    pub fn collect(&self, limit: usize) -> Result<Vec<NFunctor>, SearchLimit> {
        let mut out = Vec::new();
        let mut over = false;
        self.run(&mut |maps| {
            if out.len() == limit {
                over = true;
                return false;
            }
            out.push(NFunctor::from_trusted(self.dom.clone(), self.cod.clone(), maps.to_vec()));
            true
        });
        if over {
            Err(SearchLimit { limit })
        } else {
            Ok(out)
        }
    }

    /// Up to `limit` solutions, silently stopping there.
    pub fn take(&self, limit: usize) -> Vec<NFunctor> {
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        self.run(&mut |maps| {
            out.push(NFunctor::from_trusted(self.dom.clone(), self.cod.clone(), maps.to_vec()));
            out.len() < limit
        });
        out
    }

    /// Number of solutions, or an error once it exceeds `limit`.
    pub fn count(&self, limit: usize) -> Result<usize, SearchLimit> {
        let mut count = 0;
        self.run(&mut |_| {
            count += 1;
            count <= limit
        });
        if count > limit {
            Err(SearchLimit { limit })
        } else {
            Ok(count)
        }
    }

    /// Calls `visit` on every solution until it returns false.
    pub fn run(&self, visit: &mut dyn FnMut(&[Vec<usize>]) -> bool) {
        let (dom, cod) = (&**self.dom, &**self.cod);
        let n = dom.n();
        if cod.n() != n {
            return;
        }
        if self.injective && (0..=n).any(|l| dom.len(l) > cod.len(l)) {
            return;
        }
        let order: Vec<(usize, usize)> = (0..=n).flat_map(|l| generating_order(dom, l).into_iter().map(move |x| (l, x))).collect();
        let mut assign: Vec<Vec<usize>> = (0..=n).map(|l| vec![UNSET; dom.len(l)]).collect();
        if order.is_empty() {
            visit(&assign);
            return;
        }
        let mut pos: Vec<Vec<usize>> = (0..=n).map(|l| vec![0; dom.len(l)]).collect();
        for (p, &(l, x)) in order.iter().enumerate() {
            pos[l][x] = p;
        }
        // Each composition entry is checked at the position of its last cell;
        // a composite whose factors come first is forced.
        let mut checks: Vec<Vec<(usize, usize, usize, usize, usize)>> = vec![Vec::new(); order.len()];
        let mut forced: Vec<Option<(usize, usize, usize)>> = vec![None; order.len()];
        for j in 1..=n {
            for i in 0..j {
                for (&(a, b), &r) in dom.table(j, i) {
                    let last = pos[j][a].max(pos[j][b]).max(pos[j][r]);
                    checks[last].push((j, i, a, b, r));
                    let pr = pos[j][r];
                    if pos[j][a] < pr && pos[j][b] < pr && forced[pr].is_none() {
                        forced[pr] = Some((i, a, b));
                    }
                }
            }
        }
        let key = |l: usize, y: usize| match &self.rank {
            Some(r) => (r[l][y], String::new()),
            None => (0, String::from(cod.name(l, y))),
        };
        let mut by_bnd: Vec<BTreeMap<(usize, usize), Vec<usize>>> = Vec::new();
        for l in 0..=n {
            let mut m = cod.by_boundary(l);
            for v in m.values_mut() {
                v.sort_by_cached_key(|&y| key(l, y));
            }
            by_bnd.push(m);
        }
        let mut objects: Vec<usize> = (0..cod.len(0)).collect();
        objects.sort_by_cached_key(|&y| key(0, y));
        let (sig_dom, sig_cod) = if self.signatures {
            (signatures(dom), signatures(cod))
        } else {
            (Vec::new(), Vec::new())
        };
        let mut used: Vec<Vec<bool>> = if self.injective {
            (0..=n).map(|l| vec![false; cod.len(l)]).collect()
        } else {
            Vec::new()
        };

        let candidates = |p: usize, assign: &[Vec<usize>], used: &[Vec<bool>]| -> Vec<usize> {
            let (l, x) = order[p];
            let pool: Vec<usize> = if let Some(z) = dom.identity_of(l, x) {
                vec![cod.idn(l, assign[l - 1][z])]
            } else if let Some((i, a, b)) = forced[p] {
                match cod.comp(l, i, assign[l][a], assign[l][b]) {
                    Some(c) => vec![c],
                    None => return Vec::new(),
                }
            } else if l == 0 {
                objects.clone()
            } else {
                let k = (assign[l - 1][dom.src(l, x)], assign[l - 1][dom.tgt(l, x)]);
                by_bnd[l].get(&k).cloned().unwrap_or_default()
            };
            pool.into_iter()
                .filter(|&y| {
                    if l > 0 && (cod.src(l, y) != assign[l - 1][dom.src(l, x)] || cod.tgt(l, y) != assign[l - 1][dom.tgt(l, x)]) {
                        return false;
                    }
                    if let Some(allowed) = &self.allowed[l][x] {
                        if !allowed.contains(&y) {
                            return false;
                        }
                    }
                    if self.injective && used[l][y] {
                        return false;
                    }
                    !self.signatures || sig_dom[l][x] == sig_cod[l][y]
                })
                .collect()
        };
        let consistent = |p: usize, assign: &[Vec<usize>]| {
            checks[p]
                .iter()
                .all(|&(j, i, a, b, r)| cod.comp(j, i, assign[j][a], assign[j][b]) == Some(assign[j][r]))
        };

        let total = order.len();
        let mut cands: Vec<Vec<usize>> = vec![Vec::new(); total];
        let mut next = vec![0usize; total];
        cands[0] = candidates(0, &assign, &used);
        let mut p = 0;
        loop {
            let (l, x) = order[p];
            if assign[l][x] != UNSET {
                if self.injective {
                    used[l][assign[l][x]] = false;
                }
                assign[l][x] = UNSET;
            }
            let mut advanced = false;
            while next[p] < cands[p].len() {
                let y = cands[p][next[p]];
                next[p] += 1;
                assign[l][x] = y;
                if consistent(p, &assign) {
                    if self.injective {
                        used[l][y] = true;
                    }
                    advanced = true;
                    break;
                }
                assign[l][x] = UNSET;
            }
            if !advanced {
                if p == 0 {
                    return;
                }
                p -= 1;
                continue;
            }
            if p + 1 == total {
                if !visit(&assign) {
                    return;
                }
                continue;
            }
            p += 1;
            cands[p] = candidates(p, &assign, &used);
            next[p] = 0;
        }
    }
}

/// Level-`l` cells with identities first, then alternately the least
/// unplaced cell by name and every composite of placed cells.
fn generating_order(c: &NCat, l: usize) -> Vec<usize> {
    let size = c.len(l);
    let mut placed = vec![false; size];
    let mut out = Vec::with_capacity(size);
    let mut uses: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); size];
    for i in 0..l {
        for (&(a, b), &r) in c.table(l, i) {
            uses[a].push((a, b, r));
            if b != a {
                uses[b].push((a, b, r));
            }
        }
    }
    // Depth 0 for identities, 1 for cells that are no composite of two other
    // cells, otherwise one more than the shallowest decomposition. Cells on
    // no finite chain of decompositions go last.
    let mut decomposable = vec![false; size];
    for x in 0..size {
        for &(a, b, r) in &uses[x] {
            if a != r && b != r {
                decomposable[r] = true;
            }
        }
    }
    let mut depth: Vec<usize> = (0..size)
        .map(|x| match (c.identity_of(l, x).is_some(), decomposable[x]) {
            (true, _) => 0,
            (false, false) => 1,
            (false, true) => usize::MAX,
        })
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..size {
            for &(a, b, r) in &uses[x] {
                if a == r || b == r || depth[a] == usize::MAX || depth[b] == usize::MAX {
                    continue;
                }
                let d = depth[a].max(depth[b]) + 1;
                if d < depth[r] {
                    depth[r] = d;
                    changed = true;
                }
            }
        }
    }
    let mut queue: Vec<usize> = (0..size).filter(|&x| depth[x] == 0).collect();
    let mut names = c.sorted(l);
    names.sort_by_key(|&x| depth[x]);
    let mut next_free = 0;
    loop {
        let mut k = 0;
        while k < queue.len() {
            let x = queue[k];
            k += 1;
            if placed[x] {
                continue;
            }
            placed[x] = true;
            out.push(x);
            for &(a, b, r) in &uses[x] {
                if placed[a] && placed[b] && !placed[r] {
                    queue.push(r);
                }
            }
        }
        queue.clear();
        while next_free < size && placed[names[next_free]] {
            next_free += 1;
        }
        if next_free == size {
            return out;
        }
        queue.push(names[next_free]);
    }
}

/// Isomorphism-invariant data attached to each cell, used to prune iso search.
fn signatures(c: &NCat) -> Vec<Vec<Vec<usize>>> {
    let n = c.n();
    let mut sig: Vec<Vec<Vec<usize>>> = (0..=n)
        .map(|l| {
            (0..c.len(l))
                .map(|x| {
                    let mut s = vec![0; 3 + 3 * l];
                    s[0] = usize::from(c.identity_of(l, x).is_some());
                    s
                })
                .collect()
        })
        .collect();
    for l in 1..=n {
        for x in 0..c.len(l) {
            sig[l - 1][c.src(l, x)][1] += 1;
            sig[l - 1][c.tgt(l, x)][2] += 1;
        }
        for i in 0..l {
            for (&(a, b), &r) in c.table(l, i) {
                sig[l][a][3 + 3 * i] += 1;
                sig[l][b][4 + 3 * i] += 1;
                sig[l][r][5 + 3 * i] += 1;
            }
        }
    }
    sig
}

/// An isomorphism together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub forward: NFunctor,
    pub backward: NFunctor,
}

/// Searches for an isomorphism `a -> b`.
pub fn find_isomorphism(a: &Arc<NCat>, b: &Arc<NCat>) -> Option<IsoWitness> {
    if a.n() != b.n() {
        return None;
    }
    let n = a.n();
    if (0..=n).any(|l| a.len(l) != b.len(l)) {
        return None;
    }
    if (1..=n).any(|j| (0..j).any(|i| a.table(j, i).len() != b.table(j, i).len())) {
        return None;
    }
    let forward = FunctorSearch::new(a, b).injective().first()?;
    let backward = forward.inverse()?;
    Some(IsoWitness { forward, backward })
}

/// All functors `dom -> cod`, failing once there are more than `limit`.
pub fn enumerate_functors(dom: &Arc<NCat>, cod: &Arc<NCat>, limit: usize) -> Result<Vec<NFunctor>, SearchLimit> {
    FunctorSearch::new(dom, cod).collect(limit)
}
