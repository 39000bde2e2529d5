//! Effective descent covers of n-categories by n-preorders, the preorder
//! closure of a skeleton, and instance checks of the exactness properties of
//! the reflection.
//!
//! A functor into `B` that is surjective on every vertically composable
//! triple of horizontally composable pairs of top cells and on every
//! horizontally composable triple of vertically composable pairs is an
//! effective descent morphism. [`build_edm`] produces one out of a coproduct
//! of n-preorders, one summand per such configuration.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::functor::{FunctorError, NFunctor};
use crate::library::{globe, truncate, wedge};
use crate::limits::{coproduct_tagged, pullback};
use crate::ncat::{NCat, NCatParts};
use crate::reflect::{descend, is_npreorder, Reflector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DescentError {
    #[error("generator {0} <= {1} is not a pair of parallel cells")]
    NotParallel(String, String),
    #[error("composable configurations need dimension at least {0}")]
    Dimension(usize),
    #[error("configuration {0} does not extend to a functor: {1}")]
    Extension(String, String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Which of the two configuration shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConfigKind {
    /// Three rows composed along `j`, each a pair composed along `i`.
    Vertical,
    /// Three columns composed along `i`, each a pair composed along `j`.
    Horizontal,
}

/// A composable configuration of top cells, `i < j < n`.
///
/// `cells[t][p]` is the `p`-th member of the `t`-th pair, both counted from
/// the earliest. For the vertical kind the pairs compose along `i` and the
/// triple along `j`; for the horizontal kind the other way round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComposableConfig {
    pub kind: ConfigKind,
    pub j: usize,
    pub i: usize,
    pub cells: [[usize; 2]; 3],
}

impl ComposableConfig {
    fn flat(&self) -> [usize; 6] {
        let c = self.cells;
        [c[0][0], c[0][1], c[1][0], c[1][1], c[2][0], c[2][1]]
    }

    fn describe(&self, c: &NCat) -> String {
        let kind = match self.kind {
            ConfigKind::Vertical => "V",
            ConfigKind::Horizontal => "H",
        };
        let names: Vec<&str> = self.flat().iter().map(|&x| c.name(c.n(), x)).collect();
        format!("{kind}{}{}[{}]", self.j, self.i, names.join(","))
    }
}

/// A configuration that no cell tuple of the cover maps onto.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DescentGap {
    Config(ComposableConfig),
    /// For `n = 1`: arrows `[f, g, h]` with `g ∘ f` and `h ∘ g` defined.
    Triple([usize; 3]),
}

fn pairs_along(c: &NCat, i: usize) -> Vec<[usize; 2]> {
    let n = c.n();
    c.table(n, i).keys().map(|&(later, earlier)| [earlier, later]).collect()
}

fn triples_of(c: &NCat, pairs: &[[usize; 2]], along: usize) -> Vec<[[usize; 2]; 3]> {
    let n = c.n();
    let follows = |p: &[usize; 2], q: &[usize; 2]| c.comp(n, along, q[0], p[0]).is_some() && c.comp(n, along, q[1], p[1]).is_some();
    let mut next: Vec<Vec<usize>> = vec![Vec::new(); pairs.len()];
    let mut by_first: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, q) in pairs.iter().enumerate() {
        by_first.entry(c.bnd_src(n, q[0], along)).or_default().push(k);
    }
    for (k, p) in pairs.iter().enumerate() {
        for &m in by_first.get(&c.bnd_tgt(n, p[0], along)).into_iter().flatten() {
            if follows(p, &pairs[m]) {
                next[k].push(m);
            }
        }
    }
    let mut out = Vec::new();
    for (a, p) in pairs.iter().enumerate() {
        for &b in &next[a] {
            for &d in &next[b] {
                out.push([*p, pairs[b], pairs[d]]);
            }
        }
    }
    out
}

/// Every composable configuration of top cells of `c`, sorted by kind, `j`,
/// `i` and then the names of the cells.
pub fn composable_configs(c: &NCat) -> Vec<ComposableConfig> {
    let n = c.n();
    let mut out: Vec<(ConfigKind, usize, usize, Vec<&str>, ComposableConfig)> = Vec::new();
    for j in 1..n {
        for i in 0..j {
            for (kind, pair_level, triple_level) in [(ConfigKind::Vertical, i, j), (ConfigKind::Horizontal, j, i)] {
                let pairs = pairs_along(c, pair_level);
                for cells in triples_of(c, &pairs, triple_level) {
                    let cfg = ComposableConfig { kind, j, i, cells };
                    let names = cfg.flat().iter().map(|&x| c.name(n, x)).collect();
                    out.push((kind, j, i, names, cfg));
                }
            }
        }
    }
    out.sort_by(|a, b| (a.0, a.1, a.2, &a.3).cmp(&(b.0, b.1, b.2, &b.3)));
    out.into_iter().map(|t| t.4).collect()
}

/// Composable triples `[f, g, h]` of arrows of a 1-category, sorted by names.
pub fn composable_triples(c: &NCat) -> Vec<[usize; 3]> {
    let mut after: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(g, f) in c.table(1, 0).keys() {
        after.entry(f).or_default().push(g);
    }
    let mut out: Vec<(Vec<&str>, [usize; 3])> = Vec::new();
    for (&f, gs) in &after {
        for &g in gs {
            for &h in after.get(&g).into_iter().flatten() {
                out.push(([c.name(1, f), c.name(1, g), c.name(1, h)].to_vec(), [f, g, h]));
            }
        }
    }
    out.sort();
    out.into_iter().map(|t| t.1).collect()
}

/// Whether `p: E -> B` is surjective on composable configurations, which is
/// sufficient for it to be an effective descent morphism. Returns the first
/// configuration of `B` that is not hit.
pub fn is_edm_sufficient(p: &NFunctor) -> Result<(), DescentGap> {
    let (e, b) = (p.dom(), p.cod());
    let n = b.n();
    if n == 1 {
        let hit: BTreeSet<[usize; 3]> = composable_triples(e)
            .into_iter()
            .map(|t| t.map(|x| p.apply(1, x)))
            .collect();
        return match composable_triples(b).into_iter().find(|t| !hit.contains(t)) {
            Some(t) => Err(DescentGap::Triple(t)),
            None => Ok(()),
        };
    }
    // Pairs of E indexed by the pair of B they map to, per composition level.
    let mut over: Vec<BTreeMap<[usize; 2], Vec<[usize; 2]>>> = vec![BTreeMap::new(); n];
    for (i, m) in over.iter_mut().enumerate() {
        for q in pairs_along(e, i) {
            m.entry([p.apply(n, q[0]), p.apply(n, q[1])]).or_default().push(q);
        }
    }
    // Whether pairs follow one another along a level depends only on their
    // boundaries at that level.
    let starts = |along: usize, q: &[usize; 2]| (e.bnd_src(n, q[0], along), e.bnd_src(n, q[1], along));
    let ends = |along: usize, q: &[usize; 2]| (e.bnd_tgt(n, q[0], along), e.bnd_tgt(n, q[1], along));
    let empty = Vec::new();
    for cfg in composable_configs(b) {
        let (pl, tl) = match cfg.kind {
            ConfigKind::Vertical => (cfg.i, cfg.j),
            ConfigKind::Horizontal => (cfg.j, cfg.i),
        };
        let rows: Vec<&Vec<[usize; 2]>> = cfg.cells.iter().map(|t| over[pl].get(t).unwrap_or(&empty)).collect();
        let third: BTreeSet<(usize, usize)> = rows[2].iter().map(|q| starts(tl, q)).collect();
        let second: BTreeSet<(usize, usize)> =
            rows[1].iter().filter(|q| third.contains(&ends(tl, q))).map(|q| starts(tl, q)).collect();
        let found = rows[0].iter().any(|q| second.contains(&ends(tl, q)));
        if !found {
            return Err(DescentGap::Config(cfg));
        }
    }
    Ok(())
}

/// The least n-preorder on the given `(n-1)`-category containing the
/// generator pairs, closed under reflexivity, transitivity and composition
/// along every lower level. Top cells are named `a<=b`.
pub fn preorder_closure(skeleton: &NCat, generators: &[(usize, usize)]) -> Result<NCat, DescentError> {
    let m = skeleton.n();
    let n = m + 1;
    for &(a, b) in generators {
        if m > 0 && (skeleton.src(m, a) != skeleton.src(m, b) || skeleton.tgt(m, a) != skeleton.tgt(m, b)) {
            return Err(DescentError::NotParallel(skeleton.name(m, a).into(), skeleton.name(m, b).into()));
        }
    }
    let size = skeleton.len(m);
    let mut rel: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); size];
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); size];
    // Related pairs by the level-i source and target they share.
    let mut by_src: Vec<BTreeMap<usize, Vec<(usize, usize)>>> = vec![BTreeMap::new(); m];
    let mut by_tgt: Vec<BTreeMap<usize, Vec<(usize, usize)>>> = vec![BTreeMap::new(); m];
    let mut queue: Vec<(usize, usize)> = (0..size).map(|x| (x, x)).chain(generators.iter().copied()).collect();
    while let Some((a, b)) = queue.pop() {
        if !rel.insert((a, b)) {
            continue;
        }
        out[a].push(b);
        inc[b].push(a);
        for &c in &out[b] {
            queue.push((a, c));
        }
        for &z in &inc[a] {
            queue.push((z, b));
        }
        for i in 0..m {
            let (s, t) = (skeleton.bnd_src(m, a, i), skeleton.bnd_tgt(m, a, i));
            by_src[i].entry(s).or_default().push((a, b));
            by_tgt[i].entry(t).or_default().push((a, b));
            for &(c, d) in by_tgt[i].get(&s).into_iter().flatten() {
                let x = skeleton.comp(m, i, a, c).expect("boundaries meet");
                queue.push((x, skeleton.comp(m, i, b, d).expect("parallel cells compose alike")));
            }
            for &(c, d) in by_src[i].get(&t).into_iter().flatten() {
                let x = skeleton.comp(m, i, c, a).expect("boundaries meet");
                queue.push((x, skeleton.comp(m, i, d, b).expect("parallel cells compose alike")));
            }
        }
    }
    let cells: Vec<(usize, usize)> = rel.iter().copied().collect();
    let index: BTreeMap<(usize, usize), usize> = cells.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut parts: NCatParts = skeleton.parts().clone();
    parts.n = n;
    parts.names.push(
        cells
            .iter()
            .map(|&(a, b)| format!("{}<={}", skeleton.name(m, a), skeleton.name(m, b)))
            .collect(),
    );
    parts.src.push(cells.iter().map(|p| p.0).collect());
    parts.tgt.push(cells.iter().map(|p| p.1).collect());
    parts.idn.push((0..size).map(|x| index[&(x, x)]).collect());
    let mut row = vec![BTreeMap::new(); n];
    for &(a, b) in &cells {
        for &c in &out[b] {
            row[m].insert((index[&(b, c)], index[&(a, b)]), index[&(a, c)]);
        }
    }
    for (i, table) in row.iter_mut().enumerate().take(m) {
        for (&(a, b), &r) in skeleton.table(m, i) {
            for &a2 in &out[a] {
                for &b2 in &out[b] {
                    let r2 = skeleton.comp(m, i, a2, b2).expect("parallel cells compose alike");
                    table.insert((index[&(a, a2)], index[&(b, b2)]), index[&(r, r2)]);
                }
            }
        }
    }
    parts.comp.push(row);
    Ok(NCat::from_trusted(parts))
}

/// `len` top cells of a fresh `d`-category composable in a row along level
/// `along`, with those cells.
fn chain_shape(d: usize, along: usize, len: usize) -> (NCat, Vec<usize>) {
    if along == 0 {
        let cell = Arc::new(globe(d - 1, d - 1));
        let top = top_cell(&cell);
        let w = wedge(d, &vec![cell; len], &object_names(len + 1));
        let gens = (0..len).map(|r| w.from_hom(r, d - 1, top)).collect();
        (w.cat, gens)
    } else {
        let (inner, gens) = chain_shape(d - 1, along - 1, len);
        let w = wedge(d, &[Arc::new(inner)], &object_names(2));
        let gens = gens.into_iter().map(|g| w.from_hom(0, d - 1, g)).collect();
        (w.cat, gens)
    }
}

fn object_names(k: usize) -> Vec<&'static str> {
    ["0", "1", "2", "3", "4"][..k].to_vec()
}

/// The non-identity top cell of a globe.
fn top_cell(g: &NCat) -> usize {
    let n = g.n();
    (0..g.len(n)).find(|&x| g.identity_of(n, x).is_none()).unwrap_or(0)
}

/// The free n-category on a configuration shape with its six generating top
/// cells, in the order of [`ComposableConfig::cells`].
fn config_shape(n: usize, kind: ConfigKind, j: usize, i: usize) -> (NCat, Vec<usize>) {
    if i > 0 {
        let (inner, gens) = config_shape(n - 1, kind, j - 1, i - 1);
        let w = wedge(n, &[Arc::new(inner)], &object_names(2));
        let gens = gens.into_iter().map(|g| w.from_hom(0, n - 1, g)).collect();
        return (w.cat, gens);
    }
    match kind {
        ConfigKind::Vertical => {
            let (col, cg) = chain_shape(n - 1, j - 1, 3);
            let col = Arc::new(col);
            let w = wedge(n, &[col.clone(), col], &object_names(3));
            let mut gens = Vec::new();
            for &g in &cg {
                gens.push(w.from_hom(0, n - 1, g));
                gens.push(w.from_hom(1, n - 1, g));
            }
            (w.cat, gens)
        }
        ConfigKind::Horizontal => {
            let (col, cg) = chain_shape(n - 1, j - 1, 2);
            let col = Arc::new(col);
            let w = wedge(n, &[col.clone(), col.clone(), col], &object_names(4));
            let mut gens = Vec::new();
            for c in 0..3 {
                for &g in &cg {
                    gens.push(w.from_hom(c, n - 1, g));
                }
            }
            (w.cat, gens)
        }
    }
}

/// The n-preorder generated on the shape's lower levels by its generators.
fn preorder_shape(shape: &NCat, gens: &[usize]) -> (NCat, Vec<usize>) {
    let n = shape.n();
    let skeleton = truncate(shape, n - 1);
    let pairs: Vec<(usize, usize)> = gens.iter().map(|&g| (shape.src(n, g), shape.tgt(n, g))).collect();
    let closed = preorder_closure(&skeleton, &pairs).expect("generators have parallel boundaries");
    let gens = pairs
        .iter()
        .map(|&(a, b)| {
            let name = format!("{}<={}", skeleton.name(n - 1, a), skeleton.name(n - 1, b));
            closed.find(n, &name).expect("generator is in its closure")
        })
        .collect();
    (closed, gens)
}

/// A summand shape with its generating top cells and, for every cell, the
/// composition entries it is a factor of.
struct Shape {
    cat: Arc<NCat>,
    gens: Vec<usize>,
    uses: Vec<Vec<Vec<(usize, usize, usize, usize)>>>,
}

impl Shape {
    fn new(cat: NCat, gens: Vec<usize>) -> Self {
        let n = cat.n();
        let mut uses: Vec<Vec<Vec<(usize, usize, usize, usize)>>> = (0..=n).map(|l| vec![Vec::new(); cat.len(l)]).collect();
        for (l, u) in uses.iter_mut().enumerate().skip(1) {
            for i in 0..l {
                for (&(a, b), &r) in cat.table(l, i) {
                    u[a].push((i, a, b, r));
                    if b != a {
                        u[b].push((i, a, b, r));
                    }
                }
            }
        }
        Shape { cat: Arc::new(cat), gens, uses }
    }

    /// Extends an assignment of the generators to a functor by following
    /// boundaries, identities and composites.
    fn extend(&self, target: &Arc<NCat>, images: &[usize]) -> Result<NFunctor, String> {
        let shape = &self.cat;
        let n = shape.n();
        let mut assign: Vec<Vec<Option<usize>>> = (0..=n).map(|l| vec![None; shape.len(l)]).collect();
        let mut work: Vec<(usize, usize)> = Vec::new();
        type Assign = Vec<Vec<Option<usize>>>;
        let set = |assign: &mut Assign, work: &mut Vec<(usize, usize)>, l: usize, x: usize, y: usize| -> Result<(), String> {
            match assign[l][x] {
                Some(z) if z == y => Ok(()),
                Some(_) => Err(format!("conflicting images for {}", shape.name(l, x))),
                None => {
                    assign[l][x] = Some(y);
                    work.push((l, x));
                    Ok(())
                }
            }
        };
        for (&g, &y) in self.gens.iter().zip(images) {
            set(&mut assign, &mut work, n, g, y)?;
        }
        while let Some((l, x)) = work.pop() {
            let y = assign[l][x].expect("queued cells are assigned");
            if l > 0 {
                set(&mut assign, &mut work, l - 1, shape.src(l, x), target.src(l, y))?;
                set(&mut assign, &mut work, l - 1, shape.tgt(l, x), target.tgt(l, y))?;
            }
            if l < n {
                set(&mut assign, &mut work, l + 1, shape.idn(l + 1, x), target.idn(l + 1, y))?;
            }
            for &(i, a, b, r) in &self.uses[l][x] {
                if let (Some(ya), Some(yb)) = (assign[l][a], assign[l][b]) {
                    let yr = target
                        .comp(l, i, ya, yb)
                        .ok_or_else(|| format!("{} and {} do not compose", target.name(l, ya), target.name(l, yb)))?;
                    set(&mut assign, &mut work, l, r, yr)?;
                }
            }
        }
        let mut maps = Vec::new();
        for (l, level) in assign.into_iter().enumerate() {
            let mut m = Vec::new();
            for (x, y) in level.into_iter().enumerate() {
                m.push(y.ok_or_else(|| format!("{} is not generated", shape.name(l, x)))?);
            }
            maps.push(m);
        }
        NFunctor::new(shape.clone(), target.clone(), maps).map_err(|e: FunctorError| format!("{e}"))
    }
}

/// An effective descent morphism `p: E -> B` with `E` an n-preorder.
#[derive(Debug, Clone)]
pub struct Edm {
    pub e: Arc<NCat>,
    pub p: NFunctor,
}

/// A coproduct of n-preorders, one per composable configuration of `b`
/// (composable triple of arrows when `n = 1`), mapping onto `b`.
pub fn build_edm(b: &Arc<NCat>) -> Result<Edm, DescentError> {
    let n = b.n();
    if n == 0 {
        return Err(DescentError::Dimension(1));
    }
    let mut summands = Vec::new();
    let mut tags = Vec::new();
    let mut legs = Vec::new();
    let mut shapes: BTreeMap<(ConfigKind, usize, usize), Shape> = BTreeMap::new();
    let mut add = |shape: &Shape, images: &[usize], tag: String| -> Result<(), DescentError> {
        let leg = shape.extend(b, images).map_err(|e| DescentError::Extension(tag.clone(), e))?;
        summands.push(shape.cat.clone());
        tags.push(tag);
        legs.push(leg);
        Ok(())
    };
    if n == 1 {
        let point = Arc::new(crate::library::set(&["x"]));
        let chain = wedge(1, &[point.clone(), point.clone(), point], &object_names(4));
        let gens: Vec<usize> = (0..3).map(|r| chain.from_hom(r, 0, 0)).collect();
        let (cat, gens) = preorder_shape(&chain.cat, &gens);
        let shape = Shape::new(cat, gens);
        for t in composable_triples(b) {
            let names: Vec<&str> = t.iter().map(|&x| b.name(1, x)).collect();
            add(&shape, &t, format!("T[{}]", names.join(",")))?;
        }
    } else {
        for cfg in composable_configs(b) {
            let shape = shapes.entry((cfg.kind, cfg.j, cfg.i)).or_insert_with(|| {
                let (s, g) = config_shape(n, cfg.kind, cfg.j, cfg.i);
                let (s, g) = preorder_shape(&s, &g);
                Shape::new(s, g)
            });
            add(shape, &cfg.flat(), cfg.describe(b))?;
        }
    }
    let co = coproduct_tagged(&summands, &tags, n).map_err(|e| DescentError::Precondition(format!("{e}")))?;
    if legs.is_empty() {
        let p = NFunctor::new(co.apex.clone(), b.clone(), vec![Vec::new(); n + 1])
            .map_err(|e| DescentError::Precondition(format!("{e}")))?;
        return Ok(Edm { e: co.apex, p });
    }
    let p = co.copair(&legs).map_err(|e| DescentError::Precondition(format!("{e}")))?;
    Ok(Edm { e: co.apex, p })
}

/// The three exactness properties of a reflection, weakest last.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReflectionProperty {
    StableUnits,
    SemiLeftExact,
    Simple,
}

/// Data for one instance of a reflection property.
#[derive(Debug, Clone)]
pub enum PropertyInstance {
    /// `f: A -> X <- B: g` with `X` an n-preorder.
    Cospan { f: NFunctor, g: NFunctor },
    /// `s: X -> I(A)` with `X` an n-preorder, to pull the unit of `A` back along.
    UnitPullback { a: Arc<NCat>, s: NFunctor },
    /// `t: A -> B`, giving the comparison of `A` with the pullback of the unit
    /// of `B` along the reflection of `t`.
    Comparison { t: NFunctor },
}

/// Whether `reflector` satisfies `property` on `instance`.
pub fn verify_reflection_property(
    property: ReflectionProperty,
    instance: &PropertyInstance,
    reflector: &dyn Reflector,
) -> Result<bool, Error> {
    let pre = |m: &str| Error::from(DescentError::Precondition(String::from(m)));
    match (property, instance) {
        (ReflectionProperty::StableUnits, PropertyInstance::Cospan { f, g }) => {
            if !is_npreorder(f.cod()) {
                return Err(pre("the cospan vertex is not an n-preorder"));
            }
            let pb = pullback(f, g)?;
            let (ua, ub, ux) = (reflector.unit(f.dom())?, reflector.unit(g.dom())?, reflector.unit(f.cod())?);
            let i_f = descend(&ua, &ux.after(f)?)?;
            let i_g = descend(&ub, &ux.after(g)?)?;
            let rhs = pullback(&i_f, &i_g)?;
            let cmp = rhs.mediate(&ua.after(&pb.p1)?, &ub.after(&pb.p2)?)?;
            let up = reflector.unit(&pb.apex)?;
            Ok(descend(&up, &cmp)?.inverse().is_some())
        }
        (ReflectionProperty::SemiLeftExact, PropertyInstance::UnitPullback { a, s }) => {
            if !is_npreorder(s.dom()) {
                return Err(pre("the pulled-back object is not an n-preorder"));
            }
            let ua = reflector.unit(a)?;
            let s = s.with_cod(ua.cod().clone()).map_err(|_| pre("the map does not land in the reflection of A"))?;
            let pb = pullback(&s, &ua)?;
            let ul = reflector.unit(&pb.apex)?;
            let ux = reflector.unit(s.dom())?;
            Ok(descend(&ul, &ux.after(&pb.p1)?)?.inverse().is_some())
        }
        (ReflectionProperty::Simple, PropertyInstance::Comparison { t }) => {
            let ua = reflector.unit(t.dom())?;
            let ub = reflector.unit(t.cod())?;
            let i_t = descend(&ua, &ub.after(t)?)?;
            let pb = pullback(&ub, &i_t)?;
            let w = pb.mediate(t, &ua)?;
            let ul = reflector.unit(&pb.apex)?;
            Ok(descend(&ua, &ul.after(&w)?)?.inverse().is_some())
        }
        _ => Err(pre("the instance does not match the property")),
    }
}
