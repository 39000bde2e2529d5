//! Categories enriched in a cartesian base and the reflection derived from a
//! reflection of the base.
//!
//! A base reflection `F ⊣ G` whose unit is compatible with finite products
//! induces a reflection of enriched categories by applying `F` to every hom
//! object. Iterating this with n-categories as the base, starting from
//! categories and preorders, computes the reflection of n-categories one
//! dimension at a time.

mod conditions;
mod ncat_base;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use conditions::{check_base_conditions, BaseCondition, ConditionKind};
pub use ncat_base::{enumerate_vfunctors, from_enriched, iterate_reflect, to_enriched, IteratedReflector, NCatBase, NCatVCat, NCatVFunctor};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnrichedError {
    #[error("ill-typed: {0}")]
    IllTyped(String),
    #[error("{law} fails at objects [{}]", objects.join(", "))]
    Law { law: VLaw, objects: Vec<String> },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("base error: {0}")]
    Base(String),
}

/// Laws of enriched categories and functors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VLaw {
    Associativity,
    LeftUnit,
    RightUnit,
    PreservesComposition,
    PreservesUnits,
}

impl fmt::Display for VLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VLaw::Associativity => "associativity",
            VLaw::LeftUnit => "left unit",
            VLaw::RightUnit => "right unit",
            VLaw::PreservesComposition => "composition preservation",
            VLaw::PreservesUnits => "unit preservation",
        })
    }
}

/// A product of two objects with its projections.
#[derive(Debug, Clone)]
pub struct ProductCone<O, M> {
    pub apex: O,
    pub left: M,
    pub right: M,
}

/// A category with finite products, used as the enrichment base.
pub trait CartesianBase {
    type Obj: Clone + fmt::Debug;
    type Mor: Clone + fmt::Debug;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn id(&self, x: &Self::Obj) -> Self::Mor;
    /// `g` after `f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, EnrichedError>;
    fn terminal(&self) -> Self::Obj;
    fn to_terminal(&self, x: &Self::Obj) -> Self::Mor;
    fn product(&self, x: &Self::Obj, y: &Self::Obj) -> ProductCone<Self::Obj, Self::Mor>;
    /// The map into `cone.apex` with components `f` and `g`.
    fn pair(&self, cone: &ProductCone<Self::Obj, Self::Mor>, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor, EnrichedError>;
    fn mor_eq(&self, f: &Self::Mor, g: &Self::Mor) -> bool;
    fn obj_eq(&self, x: &Self::Obj, y: &Self::Obj) -> bool;
    fn invert(&self, f: &Self::Mor) -> Option<Self::Mor>;
}

/// A reflection of the base onto a full subcategory.
pub trait BaseReflection: CartesianBase {
    /// `F x` and the unit `x -> F x`.
    fn reflect(&self, x: &Self::Obj) -> Result<(Self::Obj, Self::Mor), EnrichedError>;
    /// `F f`, given the units of the domain and codomain of `f`.
    fn reflect_mor(&self, f: &Self::Mor, unit_dom: &Self::Mor, unit_cod: &Self::Mor) -> Result<Self::Mor, EnrichedError>;
    fn is_reflected(&self, x: &Self::Obj) -> bool;
    /// A `φ` with `φ ∘ unit = g`, if there is one.
    fn lift(&self, unit: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor>;
}

/// `f × g` between chosen products.
pub fn times<B: CartesianBase>(
    base: &B,
    from: &ProductCone<B::Obj, B::Mor>,
    to: &ProductCone<B::Obj, B::Mor>,
    f: &B::Mor,
    g: &B::Mor,
) -> Result<B::Mor, EnrichedError> {
    let l = base.compose(f, &from.left)?;
    let r = base.compose(g, &from.right)?;
    base.pair(to, &l, &r)
}

/// A category enriched in a cartesian base, with a finite set of objects.
///
/// `comp(a, b, c)` is `hom(b, c) × hom(a, b) -> hom(a, c)` out of the
/// base's chosen product, and `unit(a)` is `1 -> hom(a, a)`.
#[derive(Clone, Debug)]
pub struct VCat<O, M> {
    objects: Vec<String>,
    homs: Vec<O>,
    comps: Vec<M>,
    units: Vec<M>,
}

impl<O: Clone, M: Clone> VCat<O, M> {
    /// Builds from dense tables: `homs[a * o + b]`, `comps[(a * o + b) * o + c]`,
    /// `units[a]` for `o` objects. Nothing is checked.
    pub fn from_tables(objects: Vec<String>, homs: Vec<O>, comps: Vec<M>, units: Vec<M>) -> Self {
        let o = objects.len();
        assert!(homs.len() == o * o && comps.len() == o * o * o && units.len() == o);
        VCat { objects, homs, comps, units }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn hom(&self, a: usize, b: usize) -> &O {
        &self.homs[a * self.len() + b]
    }

    pub fn comp(&self, a: usize, b: usize, c: usize) -> &M {
        let o = self.len();
        &self.comps[(a * o + b) * o + c]
    }

    pub fn unit(&self, a: usize) -> &M {
        &self.units[a]
    }
}

fn names(v: &[String], ids: &[usize]) -> Vec<String> {
    ids.iter().map(|&k| v[k].clone()).collect()
}

fn expect<B: CartesianBase>(base: &B, x: &B::Obj, y: &B::Obj, what: impl FnOnce() -> String) -> Result<(), EnrichedError> {
    if base.obj_eq(x, y) {
        Ok(())
    } else {
        Err(EnrichedError::IllTyped(what()))
    }
}

/// Checks typing, associativity and the unit laws.
pub fn vcat_validate<B: CartesianBase>(base: &B, v: &VCat<B::Obj, B::Mor>) -> Result<(), EnrichedError> {
    let o = v.len();
    let one = base.terminal();
    for a in 0..o {
        let j = v.unit(a);
        expect(base, &base.dom(j), &one, || format!("unit of {} does not start at the terminal object", v.objects[a]))?;
        expect(base, &base.cod(j), v.hom(a, a), || format!("unit of {} does not land in its endo-hom", v.objects[a]))?;
        for b in 0..o {
            for c in 0..o {
                let m = v.comp(a, b, c);
                let p = base.product(v.hom(b, c), v.hom(a, b));
                expect(base, &base.dom(m), &p.apex, || {
                    format!("composition at {:?} does not start at the product of homs", names(&v.objects, &[a, b, c]))
                })?;
                expect(base, &base.cod(m), v.hom(a, c), || {
                    format!("composition at {:?} lands in the wrong hom", names(&v.objects, &[a, b, c]))
                })?;
            }
        }
    }
    for a in 0..o {
        for b in 0..o {
            let y = v.hom(a, b);
            let y1 = base.product(y, &one);
            let right = base.product(y, v.hom(a, a));
            let pair = base.pair(&y1, &base.id(y), &base.to_terminal(y))?;
            let step = times(base, &y1, &right, &base.id(y), v.unit(a))?;
            let lhs = base.compose(v.comp(a, a, b), &base.compose(&step, &pair)?)?;
            if !base.mor_eq(&lhs, &base.id(y)) {
                return Err(EnrichedError::Law { law: VLaw::RightUnit, objects: names(&v.objects, &[a, b]) });
            }
            let one_y = base.product(&one, y);
            let left = base.product(v.hom(b, b), y);
            let pair = base.pair(&one_y, &base.to_terminal(y), &base.id(y))?;
            let step = times(base, &one_y, &left, v.unit(b), &base.id(y))?;
            let lhs = base.compose(v.comp(a, b, b), &base.compose(&step, &pair)?)?;
            if !base.mor_eq(&lhs, &base.id(y)) {
                return Err(EnrichedError::Law { law: VLaw::LeftUnit, objects: names(&v.objects, &[a, b]) });
            }
        }
    }
    for a in 0..o {
        for b in 0..o {
            for c in 0..o {
                for d in 0..o {
                    let (x, y, z) = (v.hom(c, d), v.hom(b, c), v.hom(a, b));
                    let yz = base.product(y, z);
                    let x_yz = base.product(x, &yz.apex);
                    let xy = base.product(x, y);
                    let xy_z = base.product(&xy.apex, z);
                    let x_ac = base.product(x, v.hom(a, c));
                    let inner = times(base, &x_yz, &x_ac, &base.id(x), v.comp(a, b, c))?;
                    let lhs = base.compose(v.comp(a, c, d), &inner)?;
                    let first = base.pair(&xy, &x_yz.left, &base.compose(&yz.left, &x_yz.right)?)?;
                    let assoc = base.pair(&xy_z, &first, &base.compose(&yz.right, &x_yz.right)?)?;
                    let bd_z = base.product(v.hom(b, d), z);
                    let outer = times(base, &xy_z, &bd_z, v.comp(b, c, d), &base.id(z))?;
                    let rhs = base.compose(v.comp(a, b, d), &base.compose(&outer, &assoc)?)?;
                    if !base.mor_eq(&lhs, &rhs) {
                        return Err(EnrichedError::Law {
                            law: VLaw::Associativity,
                            objects: names(&v.objects, &[a, b, c, d]),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// The enriched category with one object and the terminal hom.
pub fn unit_vcat<B: CartesianBase>(base: &B) -> VCat<B::Obj, B::Mor> {
    let one = base.terminal();
    let p = base.product(&one, &one);
    VCat::from_tables(
        alloc::vec![String::from("*")],
        alloc::vec![one.clone()],
        alloc::vec![base.to_terminal(&p.apex)],
        alloc::vec![base.id(&one)],
    )
}

/// The product of enriched categories: pairs of objects, products of homs.
pub fn vcat_product<B: CartesianBase>(
    base: &B,
    a: &VCat<B::Obj, B::Mor>,
    b: &VCat<B::Obj, B::Mor>,
) -> Result<VCat<B::Obj, B::Mor>, EnrichedError> {
    let (oa, ob) = (a.len(), b.len());
    let o = oa * ob;
    let split = |k: usize| (k / ob, k % ob);
    let objects = (0..o)
        .map(|k| {
            let (x, y) = split(k);
            format!("({}|{})", a.objects[x], b.objects[y])
        })
        .collect();
    let cone = |p: usize, q: usize| {
        let ((x, y), (x2, y2)) = (split(p), split(q));
        base.product(a.hom(x, x2), b.hom(y, y2))
    };
    let mut homs = Vec::with_capacity(o * o);
    for p in 0..o {
        for q in 0..o {
            homs.push(cone(p, q).apex);
        }
    }
    let mut comps = Vec::with_capacity(o * o * o);
    for p in 0..o {
        for q in 0..o {
            for r in 0..o {
                let (hq_r, hp_q, hp_r) = (cone(q, r), cone(p, q), cone(p, r));
                let outer = base.product(&hq_r.apex, &hp_q.apex);
                let (x, y) = split(p);
                let (x2, y2) = split(q);
                let (x3, y3) = split(r);
                let ca = base.product(a.hom(x2, x3), a.hom(x, x2));
                let cb = base.product(b.hom(y2, y3), b.hom(y, y2));
                let to_a = base.pair(
                    &ca,
                    &base.compose(&hq_r.left, &outer.left)?,
                    &base.compose(&hp_q.left, &outer.right)?,
                )?;
                let to_b = base.pair(
                    &cb,
                    &base.compose(&hq_r.right, &outer.left)?,
                    &base.compose(&hp_q.right, &outer.right)?,
                )?;
                let ma = base.compose(a.comp(x, x2, x3), &to_a)?;
                let mb = base.compose(b.comp(y, y2, y3), &to_b)?;
                comps.push(base.pair(&hp_r, &ma, &mb)?);
            }
        }
    }
    let mut units = Vec::with_capacity(o);
    for p in 0..o {
        let (x, y) = split(p);
        units.push(base.pair(&cone(p, p), a.unit(x), b.unit(y))?);
    }
    Ok(VCat::from_tables(objects, homs, comps, units))
}

/// `vcat_product` together with its two projections.
#[derive(Clone, Debug)]
pub struct VProduct<O, M> {
    pub apex: VCat<O, M>,
    pub left: VFunctor<M>,
    pub right: VFunctor<M>,
}

pub fn vcat_product_cone<B: CartesianBase>(
    base: &B,
    a: &VCat<B::Obj, B::Mor>,
    b: &VCat<B::Obj, B::Mor>,
) -> Result<VProduct<B::Obj, B::Mor>, EnrichedError> {
    let apex = vcat_product(base, a, b)?;
    let ob = b.len();
    let o = apex.len();
    let (mut left, mut right) = (Vec::with_capacity(o * o), Vec::with_capacity(o * o));
    for p in 0..o {
        for q in 0..o {
            let cone = base.product(a.hom(p / ob, q / ob), b.hom(p % ob, q % ob));
            left.push(cone.left);
            right.push(cone.right);
        }
    }
    Ok(VProduct {
        left: VFunctor::from_tables((0..o).map(|k| k / ob).collect(), left),
        right: VFunctor::from_tables((0..o).map(|k| k % ob).collect(), right),
        apex,
    })
}

/// The map into `vcat_product(a, b)` with components `s` and `t`.
pub fn vcat_pair<B: CartesianBase>(
    base: &B,
    a: &VCat<B::Obj, B::Mor>,
    b: &VCat<B::Obj, B::Mor>,
    s: &VFunctor<B::Mor>,
    t: &VFunctor<B::Mor>,
) -> Result<VFunctor<B::Mor>, EnrichedError> {
    let o = s.object_map.len();
    if t.object_map.len() != o {
        return Err(EnrichedError::IllTyped(String::from("the two maps have different domains")));
    }
    let ob = b.len();
    let mut comps = Vec::with_capacity(o * o);
    for x in 0..o {
        for y in 0..o {
            let (sx, sy, tx, ty) = (s.object_map[x], s.object_map[y], t.object_map[x], t.object_map[y]);
            let cone = base.product(a.hom(sx, sy), b.hom(tx, ty));
            comps.push(base.pair(&cone, s.component(x, y), t.component(x, y))?);
        }
    }
    let objects = (0..o).map(|x| s.object_map[x] * ob + t.object_map[x]).collect();
    Ok(VFunctor::from_tables(objects, comps))
}

/// Same object map and equal components.
pub fn vfunctor_eq<B: CartesianBase>(base: &B, s: &VFunctor<B::Mor>, t: &VFunctor<B::Mor>) -> bool {
    s.object_map == t.object_map && s.components.iter().zip(&t.components).all(|(f, g)| base.mor_eq(f, g))
}

/// An enriched functor: an object map and one base morphism per hom.
#[derive(Clone, Debug)]
pub struct VFunctor<M> {
    pub object_map: Vec<usize>,
    components: Vec<M>,
    objects: usize,
}

impl<M: Clone> VFunctor<M> {
    /// `components[a * o + b]` for the `o` domain objects.
    pub fn from_tables(object_map: Vec<usize>, components: Vec<M>) -> Self {
        let objects = object_map.len();
        assert_eq!(components.len(), objects * objects);
        VFunctor { object_map, components, objects }
    }

    pub fn component(&self, a: usize, b: usize) -> &M {
        &self.components[a * self.objects + b]
    }
}

/// Checks typing and preservation of composition and units.
pub fn vfunctor_validate<B: CartesianBase>(
    base: &B,
    t: &VFunctor<B::Mor>,
    dom: &VCat<B::Obj, B::Mor>,
    cod: &VCat<B::Obj, B::Mor>,
) -> Result<(), EnrichedError> {
    let o = dom.len();
    if t.object_map.len() != o || t.object_map.iter().any(|&x| x >= cod.len()) {
        return Err(EnrichedError::IllTyped(String::from("object map is not a map of objects")));
    }
    let f = |a: usize| t.object_map[a];
    for a in 0..o {
        for b in 0..o {
            let c = t.component(a, b);
            expect(base, &base.dom(c), dom.hom(a, b), || format!("component at {:?} has the wrong domain", names(&dom.objects, &[a, b])))?;
            expect(base, &base.cod(c), cod.hom(f(a), f(b)), || {
                format!("component at {:?} has the wrong codomain", names(&dom.objects, &[a, b]))
            })?;
        }
    }
    for a in 0..o {
        let lhs = base.compose(t.component(a, a), dom.unit(a))?;
        if !base.mor_eq(&lhs, cod.unit(f(a))) {
            return Err(EnrichedError::Law { law: VLaw::PreservesUnits, objects: names(&dom.objects, &[a]) });
        }
        for b in 0..o {
            for c in 0..o {
                let lhs = base.compose(t.component(a, c), dom.comp(a, b, c))?;
                let from = base.product(dom.hom(b, c), dom.hom(a, b));
                let to = base.product(cod.hom(f(b), f(c)), cod.hom(f(a), f(b)));
                let both = times(base, &from, &to, t.component(b, c), t.component(a, b))?;
                let rhs = base.compose(cod.comp(f(a), f(b), f(c)), &both)?;
                if !base.mor_eq(&lhs, &rhs) {
                    return Err(EnrichedError::Law {
                        law: VLaw::PreservesComposition,
                        objects: names(&dom.objects, &[a, b, c]),
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn vfunctor_identity<B: CartesianBase>(base: &B, v: &VCat<B::Obj, B::Mor>) -> VFunctor<B::Mor> {
    let o = v.len();
    let comps = (0..o * o).map(|k| base.id(v.hom(k / o, k % o))).collect();
    VFunctor::from_tables((0..o).collect(), comps)
}

/// `t` after `s`.
pub fn vfunctor_compose<B: CartesianBase>(base: &B, t: &VFunctor<B::Mor>, s: &VFunctor<B::Mor>) -> Result<VFunctor<B::Mor>, EnrichedError> {
    let o = s.object_map.len();
    let objects: Vec<usize> = s.object_map.iter().map(|&x| t.object_map[x]).collect();
    let mut comps = Vec::with_capacity(o * o);
    for a in 0..o {
        for b in 0..o {
            let (fa, fb) = (s.object_map[a], s.object_map[b]);
            comps.push(base.compose(t.component(fa, fb), s.component(a, b))?);
        }
    }
    Ok(VFunctor::from_tables(objects, comps))
}

/// The inverse of `t`, which exists exactly when the object map is bijective
/// and every component is invertible.
pub fn vfunctor_inverse<B: CartesianBase>(base: &B, t: &VFunctor<B::Mor>, cod: &VCat<B::Obj, B::Mor>) -> Option<VFunctor<B::Mor>> {
    let o = t.object_map.len();
    if cod.len() != o {
        return None;
    }
    let mut inv = alloc::vec![usize::MAX; o];
    for (a, &x) in t.object_map.iter().enumerate() {
        if inv[x] != usize::MAX {
            return None;
        }
        inv[x] = a;
    }
    let mut comps = Vec::with_capacity(o * o);
    for x in 0..o {
        for y in 0..o {
            comps.push(base.invert(t.component(inv[x], inv[y]))?);
        }
    }
    Some(VFunctor::from_tables(inv, comps))
}

/// The derived reflection: `F` applied to every hom, with composition
/// `F(M) ∘ κ⁻¹` where `κ: F(X × Y) -> FX × FY` is the comparison map, and
/// the unit components given by the base units.
pub fn derive_reflect<B: BaseReflection>(
    base: &B,
    v: &VCat<B::Obj, B::Mor>,
) -> Result<(VCat<B::Obj, B::Mor>, VFunctor<B::Mor>), EnrichedError> {
    let o = v.len();
    let mut homs = Vec::with_capacity(o * o);
    let mut units_of = Vec::with_capacity(o * o);
    for k in 0..o * o {
        let (fx, eta) = base.reflect(v.hom(k / o, k % o))?;
        homs.push(fx);
        units_of.push(eta);
    }
    let eta = |a: usize, b: usize| &units_of[a * o + b];
    let fhom = |a: usize, b: usize| &homs[a * o + b];
    let mut comps = Vec::with_capacity(o * o * o);
    for a in 0..o {
        for b in 0..o {
            for c in 0..o {
                let m = v.comp(a, b, c);
                let cone = base.product(v.hom(b, c), v.hom(a, b));
                let (_, eta_p) = base.reflect(&cone.apex)?;
                let f_left = base.reflect_mor(&cone.left, &eta_p, eta(b, c))?;
                let f_right = base.reflect_mor(&cone.right, &eta_p, eta(a, b))?;
                let target = base.product(fhom(b, c), fhom(a, b));
                let kappa = base.pair(&target, &f_left, &f_right)?;
                let kappa_inv = base
                    .invert(&kappa)
                    .ok_or_else(|| EnrichedError::NotInvertible(format!("product comparison at {:?}", names(&v.objects, &[a, b, c]))))?;
                let fm = base.reflect_mor(m, &eta_p, eta(a, c))?;
                comps.push(base.compose(&fm, &kappa_inv)?);
            }
        }
    }
    let one = base.terminal();
    let (_, eta_one) = base.reflect(&one)?;
    let mut units = Vec::with_capacity(o);
    for a in 0..o {
        let fj = base.reflect_mor(v.unit(a), &eta_one, eta(a, a))?;
        units.push(base.compose(&fj, &eta_one)?);
    }
    let theta = VFunctor::from_tables((0..o).collect(), units_of);
    Ok((VCat::from_tables(v.objects.clone(), homs, comps, units), theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::NFunctor;
    use crate::library::{chain, discrete, parallel_cells, parallel_two_cells, raise, walking_two_cell};
    use crate::limits::{product, terminal};
    use crate::ncat::{NCat, NCatParts};
    use crate::reflect::{reflect, Reflector};
    use crate::search::find_isomorphism;
    use crate::Error;
    use alloc::sync::Arc;
    use alloc::vec;

    fn iso(a: NCat, b: &Arc<NCat>) -> bool {
        find_isomorphism(&Arc::new(a), b).is_some()
    }

    #[test]
    fn unit_vcat_is_valid_and_terminal() {
        let base = NCatBase::new(1);
        let e = unit_vcat(&base);
        assert!(vcat_validate(&base, &e).is_ok());
        assert_eq!(from_enriched(&e).unwrap(), terminal(2));
    }

    #[test]
    fn enriched_view_of_the_walking_two_cell() {
        let w = Arc::new(walking_two_cell());
        let v = to_enriched(&w);
        assert!(vcat_validate(&NCatBase::new(1), &v).is_ok());
        let (a, b) = (w.find(0, "a").unwrap(), w.find(0, "b").unwrap());
        let h = v.hom(a, b);
        let objects: Vec<&str> = h.names(0).iter().map(String::as_str).collect();
        assert_eq!(objects, ["f", "g"]);
        assert_eq!(h.len(1), 3);
        let theta = h.find(1, "θ").unwrap();
        assert_eq!((h.name(0, h.src(1, theta)), h.name(0, h.tgt(1, theta))), ("f", "g"));
        assert!(v.hom(b, a).is_empty());
        let t = Arc::new(terminal(2));
        let vt = to_enriched(&t);
        assert_eq!(vt.len(), 1);
        assert_eq!(**vt.hom(0, 0), terminal(1));
    }

    #[test]
    fn round_trips() {
        for c in [walking_two_cell(), parallel_two_cells(), raise(&chain(1, 2), 2), parallel_cells(3, &["u", "v"])] {
            let c = Arc::new(c);
            let back = from_enriched(&to_enriched(&c)).unwrap();
            assert!(iso(back.clone(), &c));
            let again = to_enriched(&Arc::new(back));
            let first = to_enriched(&c);
            assert_eq!(again.len(), first.len());
            for x in 0..first.len() {
                for y in 0..first.len() {
                    assert!(find_isomorphism(again.hom(x, y), first.hom(x, y)).is_some());
                }
            }
        }
    }

    #[test]
    fn corrupted_composition_is_rejected() {
        // Objects w, x, y, z with arrow categories between neighbours; the
        // hom w -> z is a cube with non-trivial automorphisms.
        let arrow = Arc::new(crate::library::truncate(&walking_two_cell(), 1));
        let c = Arc::new(crate::library::wedge(2, &[arrow.clone(), arrow.clone(), arrow], &["w", "x", "y", "z"]).cat);
        let v = to_enriched(&c);
        let base = NCatBase::new(1);
        assert!(vcat_validate(&base, &v).is_ok());
        let o = v.len();
        let (w, y, z) = (0, 2, 3);
        let m = v.comp(w, y, z).clone();
        let h = m.cod().clone();
        let swap = crate::search::FunctorSearch::new(&h, &h)
            .injective()
            .collect(100)
            .unwrap()
            .into_iter()
            .find(|s| *s != NFunctor::identity(&h))
            .unwrap();
        let mut comps: Vec<NFunctor> = (0..o * o * o).map(|k| v.comp(k / (o * o), (k / o) % o, k % o).clone()).collect();
        comps[(w * o + y) * o + z] = swap.after(&m).unwrap();
        let homs = (0..o * o).map(|k| v.hom(k / o, k % o).clone()).collect();
        let units = (0..o).map(|a| v.unit(a).clone()).collect();
        let corrupt = VCat::from_tables(v.objects().to_vec(), homs, comps, units);
        match vcat_validate(&base, &corrupt) {
            Err(EnrichedError::Law { law: VLaw::Associativity, objects }) => assert_eq!(objects, ["w", "x", "y", "z"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn products_of_vcats() {
        let base = NCatBase::new(1);
        let a = Arc::new(walking_two_cell());
        let b = Arc::new(raise(&chain(1, 1), 2));
        let (va, vb) = (to_enriched(&a), to_enriched(&b));
        let vab = vcat_product(&base, &va, &vb).unwrap();
        assert!(vcat_validate(&base, &vab).is_ok());
        assert_eq!(vab.len(), va.len() * vb.len());
        let back = from_enriched(&vab).unwrap();
        assert!(iso(back, &product(&a, &b).apex));
        let ve = vcat_product(&base, &va, &unit_vcat(&base)).unwrap();
        assert!(iso(from_enriched(&ve).unwrap(), &a));
    }

    #[test]
    fn derived_reflection() {
        let base = NCatBase::new(1);
        let w = Arc::new(walking_two_cell());
        let (fw, theta) = derive_reflect(&base, &to_enriched(&w)).unwrap();
        assert!(vcat_validate(&base, &fw).is_ok());
        let id = vfunctor_identity(&base, &to_enriched(&w));
        for a in 0..fw.len() {
            for b in 0..fw.len() {
                assert!(theta.component(a, b).is_bijective());
                assert_eq!(theta.component(a, b).maps(), id.component(a, b).maps());
            }
        }
        let p = Arc::new(parallel_two_cells());
        let vp = to_enriched(&p);
        let (fp, theta) = derive_reflect(&base, &vp).unwrap();
        assert!(vfunctor_validate(&base, &theta, &vp, &fp).is_ok());
        let (a, b) = (p.find(0, "a").unwrap(), p.find(0, "b").unwrap());
        assert_eq!(vp.hom(a, b).len(1), 4);
        assert_eq!(fp.hom(a, b).len(1), 3);
        assert!(iso(from_enriched(&fp).unwrap(), &reflect(&p).image));
        let (ffp, theta2) = derive_reflect(&base, &fp).unwrap();
        assert!(vfunctor_inverse(&base, &theta2, &ffp).is_some());
    }

    #[test]
    fn isomorphisms_of_vcats() {
        let base = NCatBase::new(1);
        let p = Arc::new(parallel_two_cells());
        let vp = to_enriched(&p);
        let id = vfunctor_identity(&base, &vp);
        let inv = vfunctor_inverse(&base, &id, &vp).unwrap();
        assert!(vfunctor_validate(&base, &inv, &vp, &vp).is_ok());
        let (fp, theta) = derive_reflect(&base, &vp).unwrap();
        // Not invertible: a component identifies θ1 and θ2.
        assert!(vfunctor_inverse(&base, &theta, &fp).is_none());
        let composite = vfunctor_compose(&base, &theta, &inv).unwrap();
        assert!(vfunctor_validate(&base, &composite, &vp, &fp).is_ok());
    }

    #[test]
    fn iterated_reflection_agrees_with_direct() {
        let c1 = Arc::new(chain(1, 2));
        assert_eq!(iterate_reflect(&c1).unwrap(), reflect(&c1).unit);
        for c in [parallel_two_cells(), walking_two_cell(), parallel_cells(3, &["u", "v", "w"]), raise(&parallel_cells(2, &["u", "v"]), 3)] {
            let c = Arc::new(c);
            let unit = iterate_reflect(&c).unwrap();
            assert!(crate::reflect::is_npreorder(unit.cod()));
            assert!(find_isomorphism(unit.cod(), &reflect(&c).image).is_some());
        }
        let w = Arc::new(walking_two_cell());
        assert!(iterate_reflect(&w).unwrap().is_bijective());
    }

    /// Collapses every hom to a single arrow as soon as there is a
    /// non-identity arrow, which is not a reflection.
    struct Perturbed;

    impl Reflector for Perturbed {
        fn unit(&self, a: &Arc<NCat>) -> Result<NFunctor, Error> {
            assert_eq!(a.n(), 1);
            if (0..a.len(1)).all(|x| a.identity_of(1, x).is_some()) {
                return Ok(reflect(a).unit);
            }
            let o = a.len(0);
            let mut p = NCatParts::empty(1);
            p.names[0] = a.names(0).to_vec();
            for s in 0..o {
                for t in 0..o {
                    p.names[1].push(format!("{}>{}", a.name(0, s), a.name(0, t)));
                    p.src[1].push(s);
                    p.tgt[1].push(t);
                }
            }
            p.idn[1] = (0..o).map(|s| s * o + s).collect();
            for s in 0..o {
                for m in 0..o {
                    for t in 0..o {
                        p.comp[1][0].insert((m * o + t, s * o + m), s * o + t);
                    }
                }
            }
            let chaotic = Arc::new(p.validate()?);
            let maps = vec![(0..o).collect(), (0..a.len(1)).map(|x| a.src(1, x) * o + a.tgt(1, x)).collect()];
            Ok(NFunctor::new(a.clone(), chaotic, maps)?)
        }
    }

    #[test]
    fn base_conditions() {
        let base = NCatBase::new(1);
        let report = check_base_conditions(&base, &[base.terminal()]);
        assert!(report.iter().all(|c| c.holds));
        let arrow = Arc::new(chain(1, 1));
        let pair = Arc::new(parallel_cells(1, &["u", "v"]));
        let report = check_base_conditions(&base, &[arrow.clone(), pair.clone()]);
        assert_eq!(report.len(), 1 + 2 + 4);
        assert!(report.iter().all(|c| c.holds), "{report:?}");
        let perturbed = NCatBase { dim: 1, reflector: Perturbed };
        let two = Arc::new(discrete(1, &["p", "q"]));
        let report = check_base_conditions(&perturbed, &[arrow, two]);
        let failed: Vec<&BaseCondition> = report.iter().filter(|c| !c.holds).collect();
        assert!(failed.iter().any(|c| c.kind == ConditionKind::ProductUnits && c.subjects == [0, 1]), "{report:?}");
    }
}
