use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{derive_reflect, BaseReflection, CartesianBase, EnrichedError, ProductCone, VCat, VFunctor};
use crate::error::Error;
use crate::functor::{same, NFunctor};
use crate::limits::{product, terminal, to_terminal};
use crate::ncat::{NCat, NCatParts};
use crate::reflect::{induced, is_npreorder, reflect, DirectReflector, Reflector};
use crate::search::FunctorSearch;

pub type NCatVCat = VCat<Arc<NCat>, NFunctor>;
pub type NCatVFunctor = VFunctor<NFunctor>;

/// Finite `dim`-categories as an enrichment base, with products as
/// pullbacks over the terminal and the given reflector.
#[derive(Clone, Debug)]
pub struct NCatBase<R = DirectReflector> {
    pub dim: usize,
    pub reflector: R,
}

impl NCatBase<DirectReflector> {
    pub fn new(dim: usize) -> Self {
        NCatBase { dim, reflector: DirectReflector }
    }
}

fn base_err(e: impl core::fmt::Display) -> EnrichedError {
    EnrichedError::Base(format!("{e}"))
}

impl<R: Reflector> CartesianBase for NCatBase<R> {
    type Obj = Arc<NCat>;
    type Mor = NFunctor;

    fn dom(&self, f: &NFunctor) -> Arc<NCat> {
        f.dom().clone()
    }

    fn cod(&self, f: &NFunctor) -> Arc<NCat> {
        f.cod().clone()
    }

    fn id(&self, x: &Arc<NCat>) -> NFunctor {
        NFunctor::identity(x)
    }

    fn compose(&self, g: &NFunctor, f: &NFunctor) -> Result<NFunctor, EnrichedError> {
        g.after(f).map_err(base_err)
    }

    fn terminal(&self) -> Arc<NCat> {
        Arc::new(terminal(self.dim))
    }

    fn to_terminal(&self, x: &Arc<NCat>) -> NFunctor {
        to_terminal(x, &self.terminal())
    }

    fn product(&self, x: &Arc<NCat>, y: &Arc<NCat>) -> ProductCone<Arc<NCat>, NFunctor> {
        let p = product(x, y);
        ProductCone { apex: p.apex, left: p.p1, right: p.p2 }
    }

    fn pair(&self, cone: &ProductCone<Arc<NCat>, NFunctor>, f: &NFunctor, g: &NFunctor) -> Result<NFunctor, EnrichedError> {
        if !same(f.dom(), g.dom()) || !same(f.cod(), cone.left.cod()) || !same(g.cod(), cone.right.cod()) {
            return Err(EnrichedError::IllTyped(String::from("pairing of maps that do not match the product")));
        }
        let (x, y) = (f.cod(), g.cod());
        let z = f.dom();
        let maps = (0..=z.n())
            .map(|l| (0..z.len(l)).map(|c| f.apply(l, c) * y.len(l) + g.apply(l, c)).collect())
            .collect();
        debug_assert!((0..=x.n()).all(|l| cone.apex.len(l) == x.len(l) * y.len(l)));
        NFunctor::new(z.clone(), cone.apex.clone(), maps).map_err(base_err)
    }

    fn mor_eq(&self, f: &NFunctor, g: &NFunctor) -> bool {
        f == g
    }

    fn obj_eq(&self, x: &Arc<NCat>, y: &Arc<NCat>) -> bool {
        Arc::ptr_eq(x, y) || **x == **y
    }

    fn invert(&self, f: &NFunctor) -> Option<NFunctor> {
        f.inverse()
    }
}

impl<R: Reflector> BaseReflection for NCatBase<R> {
    fn reflect(&self, x: &Arc<NCat>) -> Result<(Arc<NCat>, NFunctor), EnrichedError> {
        let unit = self.reflector.unit(x).map_err(base_err)?;
        Ok((unit.cod().clone(), unit))
    }

    fn reflect_mor(&self, f: &NFunctor, unit_dom: &NFunctor, unit_cod: &NFunctor) -> Result<NFunctor, EnrichedError> {
        induced(f, unit_dom, unit_cod).map_err(base_err)
    }

    fn is_reflected(&self, x: &Arc<NCat>) -> bool {
        is_npreorder(x)
    }

    fn lift(&self, unit: &NFunctor, g: &NFunctor) -> Option<NFunctor> {
        if !same(unit.dom(), g.dom()) {
            return None;
        }
        let (fx, z) = (unit.cod(), g.cod());
        let mut search = FunctorSearch::new(fx, z);
        for l in 0..=fx.n() {
            let mut fixed: Vec<Option<usize>> = vec![None; fx.len(l)];
            for c in 0..unit.dom().len(l) {
                let k = unit.apply(l, c);
                match fixed[k] {
                    Some(y) if y != g.apply(l, c) => return None,
                    _ => fixed[k] = Some(g.apply(l, c)),
                }
            }
            for (k, y) in fixed.into_iter().enumerate() {
                if let Some(y) = y {
                    search = search.restrict(l, k, vec![y]);
                }
            }
        }
        search.first()
    }
}

/// Where each cell of `a` above level 0 sits among the homs of its enriched view.
struct Layout {
    /// `cells[l][x] = (a, b, position in hom(a, b) at level l)` for the
    /// level-`l + 1` cell `x`.
    cells: Vec<Vec<(usize, usize, usize)>>,
}

fn enrich(a: &Arc<NCat>) -> (NCatVCat, Layout) {
    let n = a.n();
    assert!(n >= 1, "an n-category with n >= 1 is needed");
    let o = a.len(0);
    let d = n - 1;
    let mut members: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); d + 1]; o * o];
    let mut cells: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for l in 0..=d {
        let mut lv = Vec::with_capacity(a.len(l + 1));
        for x in 0..a.len(l + 1) {
            let (s, t) = (a.bnd_src(l + 1, x, 0), a.bnd_tgt(l + 1, x, 0));
            let slot = &mut members[s * o + t][l];
            lv.push((s, t, slot.len()));
            slot.push(x);
        }
        cells.push(lv);
    }
    let pos = |l: usize, x: usize| cells[l][x].2;
    let mut homs = Vec::with_capacity(o * o);
    for mem in &members {
        let mut p = NCatParts::empty(d);
        for l in 0..=d {
            p.names[l] = mem[l].iter().map(|&x| String::from(a.name(l + 1, x))).collect();
            if l > 0 {
                p.src[l] = mem[l].iter().map(|&x| pos(l - 1, a.src(l + 1, x))).collect();
                p.tgt[l] = mem[l].iter().map(|&x| pos(l - 1, a.tgt(l + 1, x))).collect();
                p.idn[l] = mem[l - 1].iter().map(|&x| pos(l, a.idn(l + 1, x))).collect();
                for i in 0..l {
                    for &g in &mem[l] {
                        for &f in &mem[l] {
                            if let Some(r) = a.comp(l + 1, i + 1, g, f) {
                                p.comp[l][i].insert((pos(l, g), pos(l, f)), pos(l, r));
                            }
                        }
                    }
                }
            }
        }
        homs.push(Arc::new(NCat::from_trusted(p)));
    }
    let hom = |s: usize, t: usize| &homs[s * o + t];
    let mut comps = Vec::with_capacity(o * o * o);
    for s in 0..o {
        for m in 0..o {
            for t in 0..o {
                let (later, earlier, out) = (hom(m, t), hom(s, m), hom(s, t));
                let apex = product(later, earlier).apex;
                let maps = (0..=d)
                    .map(|l| {
                        let mut v = Vec::with_capacity(later.len(l) * earlier.len(l));
                        for &g in &members[m * o + t][l] {
                            for &f in &members[s * o + m][l] {
                                let r = a.comp(l + 1, 0, g, f).expect("0-composable cells compose");
                                v.push(pos(l, r));
                            }
                        }
                        v
                    })
                    .collect();
                comps.push(NFunctor::from_trusted(apex, out.clone(), maps));
            }
        }
    }
    let one = Arc::new(terminal(d));
    let units = (0..o)
        .map(|s| {
            let maps = (0..=d).map(|l| vec![pos(l, a.tower(0, l + 1, s))]).collect();
            NFunctor::from_trusted(one.clone(), hom(s, s).clone(), maps)
        })
        .collect();
    let objects = a.names(0).to_vec();
    (VCat::from_tables(objects, homs, comps, units), Layout { cells })
}

/// The enriched view of an n-category: the same objects, and for each pair
/// of objects the `(n-1)`-category of cells between them, composed along
/// objects.
pub fn to_enriched(a: &Arc<NCat>) -> NCatVCat {
    enrich(a).0
}

/// Offsets of each hom inside every level of the assembled n-category.
struct Assembly {
    cat: NCat,
    offsets: Vec<Vec<usize>>,
}

fn assemble(v: &NCatVCat) -> Result<Assembly, EnrichedError> {
    let o = v.len();
    if o == 0 {
        return Err(EnrichedError::IllTyped(String::from("no objects, so no dimension")));
    }
    let d = v.hom(0, 0).n();
    let n = d + 1;
    for a in 0..o {
        for b in 0..o {
            if v.hom(a, b).n() != d {
                return Err(EnrichedError::IllTyped(String::from("homs of different dimensions")));
            }
        }
    }
    let mut offsets: Vec<Vec<usize>> = vec![vec![0; o * o]; d + 1];
    let mut p = NCatParts::empty(n);
    p.names[0] = v.objects().to_vec();
    for l in 0..=d {
        let mut total = 0;
        for k in 0..o * o {
            offsets[l][k] = total;
            total += v.hom(k / o, k % o).len(l);
        }
        let mut raw: Vec<String> = Vec::with_capacity(total);
        for k in 0..o * o {
            raw.extend(v.hom(k / o, k % o).names(l).iter().cloned());
        }
        let distinct: BTreeSet<&String> = raw.iter().collect();
        if distinct.len() != raw.len() {
            raw.clear();
            for k in 0..o * o {
                let (a, b) = (k / o, k % o);
                for s in v.hom(a, b).names(l) {
                    raw.push(format!("{}>{}:{s}", v.objects()[a], v.objects()[b]));
                }
            }
        }
        p.names[l + 1] = raw;
    }
    let off = |l: usize, a: usize, b: usize| offsets[l][a * o + b];
    for l in 0..=d {
        for k in 0..o * o {
            let (a, b) = (k / o, k % o);
            let h = v.hom(a, b);
            for x in 0..h.len(l) {
                if l == 0 {
                    p.src[1].push(a);
                    p.tgt[1].push(b);
                } else {
                    p.src[l + 1].push(off(l - 1, a, b) + h.src(l, x));
                    p.tgt[l + 1].push(off(l - 1, a, b) + h.tgt(l, x));
                }
            }
        }
        if l == 0 {
            for a in 0..o {
                let j = v.unit(a);
                if j.cod().n() != d || !same(j.cod(), v.hom(a, a)) {
                    return Err(EnrichedError::IllTyped(format!("unit of {} is ill-typed", v.objects()[a])));
                }
                p.idn[1].push(off(0, a, a) + j.apply(0, 0));
            }
        } else {
            for k in 0..o * o {
                let (a, b) = (k / o, k % o);
                let h = v.hom(a, b);
                for x in 0..h.len(l - 1) {
                    p.idn[l + 1].push(off(l, a, b) + h.idn(l, x));
                }
            }
        }
        for i in 0..l {
            for k in 0..o * o {
                let (a, b) = (k / o, k % o);
                for (&(g, f), &r) in v.hom(a, b).table(l, i) {
                    p.comp[l + 1][i + 1].insert((off(l, a, b) + g, off(l, a, b) + f), off(l, a, b) + r);
                }
            }
        }
    }
    for a in 0..o {
        for b in 0..o {
            for c in 0..o {
                let m = v.comp(a, b, c);
                let (later, earlier) = (v.hom(b, c), v.hom(a, b));
                if !same(m.dom(), &product(later, earlier).apex) || !same(m.cod(), v.hom(a, c)) {
                    return Err(EnrichedError::IllTyped(format!(
                        "composition at {:?} is ill-typed",
                        [&v.objects()[a], &v.objects()[b], &v.objects()[c]]
                    )));
                }
                for l in 0..=d {
                    let w = earlier.len(l);
                    for g in 0..later.len(l) {
                        for f in 0..w {
                            p.comp[l + 1][0]
                                .insert((off(l, b, c) + g, off(l, a, b) + f), off(l, a, c) + m.apply(l, g * w + f));
                        }
                    }
                }
            }
        }
    }
    let cat = p.validate().map_err(|e| EnrichedError::Base(format!("{e}")))?;
    Ok(Assembly { cat, offsets })
}

/// The n-category with the objects of `v` whose cells above level 0 are the
/// cells of its homs. Cell names are kept unless two homs share a name at
/// some level, in which case that level is tagged `a>b:name`.
pub fn from_enriched(v: &NCatVCat) -> Result<NCat, EnrichedError> {
    Ok(assemble(v)?.cat)
}

/// Every enriched functor `c -> d`, read off from the functors between
/// the assembled n-categories; fails once there are more than `limit`.
pub fn enumerate_vfunctors(c: &NCatVCat, d: &NCatVCat, limit: usize) -> Result<Vec<NCatVFunctor>, Error> {
    let (ac, ad) = (assemble(c)?, assemble(d)?);
    let (oc, od) = (c.len(), d.len());
    let (cc, cd) = (Arc::new(ac.cat), Arc::new(ad.cat));
    let found = FunctorSearch::new(&cc, &cd).collect(limit)?;
    Ok(found
        .iter()
        .map(|f| {
            let objects: Vec<usize> = (0..oc).map(|a| f.apply(0, a)).collect();
            let mut comps = Vec::with_capacity(oc * oc);
            for a in 0..oc {
                for b in 0..oc {
                    let (h, k) = (c.hom(a, b), d.hom(objects[a], objects[b]));
                    let maps = (0..h.n() + 1)
                        .map(|l| {
                            let (from, to) = (ac.offsets[l][a * oc + b], ad.offsets[l][objects[a] * od + objects[b]]);
                            (0..h.len(l)).map(|x| f.apply(l + 1, from + x) - to).collect()
                        })
                        .collect();
                    comps.push(NFunctor::from_trusted(h.clone(), k.clone(), maps));
                }
            }
            VFunctor::from_tables(objects, comps)
        })
        .collect())
}

/// The reflection into n-preorders obtained by iterating the reflection of
/// categories into preorders through the enriched construction.
#[derive(Clone, Copy, Debug, Default)]
pub struct IteratedReflector;

impl Reflector for IteratedReflector {
    fn unit(&self, a: &Arc<NCat>) -> Result<NFunctor, Error> {
        iterate_reflect(a)
    }
}

/// The unit of the iterated reflection of `a`.
pub fn iterate_reflect(a: &Arc<NCat>) -> Result<NFunctor, Error> {
    if a.n() <= 1 {
        return Ok(reflect(a).unit);
    }
    let base = NCatBase { dim: a.n() - 1, reflector: IteratedReflector };
    let (v, layout) = enrich(a);
    if v.is_empty() {
        return Ok(reflect(a).unit);
    }
    let (fv, theta) = derive_reflect(&base, &v)?;
    let built = assemble(&fv)?;
    let o = v.len();
    let mut maps: Vec<Vec<usize>> = vec![(0..o).collect()];
    for (l, lv) in layout.cells.iter().enumerate() {
        maps.push(
            lv.iter()
                .map(|&(s, t, x)| built.offsets[l][s * o + t] + theta.component(s, t).apply(l, x))
                .collect(),
        );
    }
    let image = Arc::new(built.cat);
    Ok(NFunctor::new(a.clone(), image, maps)?)
}
