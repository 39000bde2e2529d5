//! Randomized property suites. Trial `k` of a run with seed `s` uses seed
//! `s + k`, so `--seed s+k --trials 1` replays it alone.

use std::collections::BTreeMap;
use std::sync::Arc;

use ncat_galois::descent::{verify_reflection_property, PropertyInstance, ReflectionProperty};
use ncat_galois::enriched::iterate_reflect;
use ncat_galois::factor::{classify, fill_diagonal, ml_factorize, reflective_factorize, unit_squares_are_pullbacks, Factorization};
use ncat_galois::limits::pullback;
use ncat_galois::reflect::{induced, is_npreorder, reflect, DirectReflector};
use ncat_galois::{find_isomorphism, validate_ncat, FunctorSearch, NCat, NFunctor};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::format::{ncat_to_string, parse_ncat};
use crate::gen::{mutate, random_functor, random_ncat, random_preorder, GenConfig, Mutant, Rng8, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    StableUnits,
    Orthogonality,
    Crosscheck,
    Axioms,
}

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub n: usize,
    pub size: usize,
    pub seed: u64,
    pub trials: usize,
}

/// Named counters gathered by a passing trial.
pub type Stats = BTreeMap<&'static str, usize>;

#[derive(Debug, Clone)]
pub struct Trial {
    pub index: usize,
    pub seed: u64,
    pub result: Result<Stats, String>,
}

/// Runs every trial, possibly in parallel; the result is in trial order.
pub fn run(suite: Suite, p: Params) -> Vec<Trial> {
    (0..p.trials)
        .into_par_iter()
        .map(|index| {
            let seed = p.seed.wrapping_add(index as u64);
            Trial { index, seed, result: trial(suite, p.n, p.size, seed) }
        })
        .collect()
}

pub fn trial(suite: Suite, n: usize, size: usize, seed: u64) -> Result<Stats, String> {
    let mut rng = Rng8::seed_from_u64(seed);
    let cfg = GenConfig::new(size);
    match suite {
        Suite::Axioms => axioms(&mut rng, n, cfg),
        Suite::StableUnits => stable_units(&mut rng, n, cfg),
        Suite::Orthogonality => orthogonality(&mut rng, n, cfg),
        Suite::Crosscheck => crosscheck(&mut rng, n, cfg),
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Mutations no valid n-category survives: boundaries and identities, a
/// composite with a unit factor, or a composite moved off its boundary.
pub fn must_be_caught(c: &NCat, m: &Mutant) -> bool {
    match m.table {
        Table::Src(_) | Table::Tgt(_) | Table::Idn(_) => true,
        Table::Comp(j, i) => {
            let (a, b) = m.key;
            let unit_factor = c.tower(i, j, c.bnd_src(j, a, i)) == a || c.tower(i, j, c.bnd_tgt(j, b, i)) == b;
            unit_factor || c.src(j, m.old) != c.src(j, m.new) || c.tgt(j, m.old) != c.tgt(j, m.new)
        }
    }
}

fn axioms(rng: &mut Rng8, n: usize, cfg: GenConfig) -> Result<Stats, String> {
    let c = random_ncat(rng, n, cfg);
    let mut stats = Stats::new();
    let again = validate_ncat(&c.to_raw()).map_err(|e| format!("generated instance rejected: {e}"))?;
    if again != *c {
        return Err("validation changed the value".into());
    }
    if parse_ncat(&ncat_to_string(&c), "memory").map_err(err)? != *c {
        return Err("file round trip changed the value".into());
    }
    stats.insert("cells", c.total_cells());
    for _ in 0..4 {
        let Some(m) = mutate(rng, &c) else { break };
        match (m.parts.clone().validate().is_err(), must_be_caught(&c, &m)) {
            (true, _) => *stats.entry("killed").or_default() += 1,
            (false, true) => return Err(format!("mutant accepted: {}", m.describe())),
            (false, false) => *stats.entry("accepted_value_change").or_default() += 1,
        }
    }
    Ok(stats)
}

/// A random cospan into a random n-preorder.
pub fn random_cospan(rng: &mut Rng8, n: usize, cfg: GenConfig) -> Result<(NFunctor, NFunctor), String> {
    let x = if rng.gen_bool(0.5) {
        random_preorder(rng, n, cfg)
    } else {
        reflect(&random_ncat(rng, n, cfg)).image
    };
    let small = cfg.with_depth(cfg.depth.min(1));
    let (a, b) = (random_ncat(rng, n, small), random_ncat(rng, n, small));
    let f = random_functor(rng, &a, &x).ok_or("no functor into the vertex")?;
    let g = random_functor(rng, &b, &x).ok_or("no functor into the vertex")?;
    Ok((f, g))
}

/// Whether `I(A ×_X B) ≅ I(A) ×_X I(B)`, both as the canonical comparison
/// and by isomorphism search.
pub fn stable_units_instance(f: &NFunctor, g: &NFunctor) -> Result<Stats, String> {
    let inst = PropertyInstance::Cospan { f: f.clone(), g: g.clone() };
    if !verify_reflection_property(ReflectionProperty::StableUnits, &inst, &DirectReflector).map_err(err)? {
        return Err("the comparison map is not an isomorphism".into());
    }
    let (ra, rb, rx) = (reflect(f.dom()), reflect(g.dom()), reflect(f.cod()));
    let i_f = induced(f, &ra.unit, &rx.unit).map_err(err)?;
    let i_g = induced(g, &rb.unit, &rx.unit).map_err(err)?;
    let rhs = pullback(&i_f, &i_g).map_err(err)?.apex;
    let lhs = reflect(&pullback(f, g).map_err(err)?.apex).image;
    if find_isomorphism(&lhs, &rhs).is_none() {
        return Err("no isomorphism between the two sides".into());
    }
    Ok(Stats::from([("pullback_cells", lhs.total_cells())]))
}

fn stable_units(rng: &mut Rng8, n: usize, cfg: GenConfig) -> Result<Stats, String> {
    let (f, g) = random_cospan(rng, n, cfg)?;
    stable_units_instance(&f, &g)
}

pub fn factorize(system: usize, f: &NFunctor) -> Factorization {
    if system == 0 {
        reflective_factorize(f)
    } else {
        ml_factorize(f)
    }
}

pub fn check_factorization(system: usize, f: &NFunctor, fac: &Factorization) -> Result<(), String> {
    if fac.m.after(&fac.e).map_err(err)? != *f {
        return Err("m ∘ e differs from f".into());
    }
    let (ke, km) = (classify(&fac.e).map_err(err)?, classify(&fac.m).map_err(err)?);
    let ok = if system == 0 { ke.vertical && km.trivial_covering } else { ke.stably_vertical && km.covering };
    if ok {
        Ok(())
    } else {
        Err(format!("factor classes wrong in system {system}: e {ke:?}, m {km:?}"))
    }
}

/// A commuting square from `e` on the left to the right factor of a second
/// random functor, or `None` if the random attempts fail.
pub fn random_square(rng: &mut Rng8, system: usize, e: &NFunctor, n: usize, cfg: GenConfig) -> Option<(NFunctor, NFunctor, NFunctor)> {
    let small = cfg.with_depth(1);
    let (c, d) = (random_ncat(rng, n, small), random_ncat(rng, n, small));
    let g = random_functor(rng, &c, &d)?;
    let m = factorize(system, &g).m;
    let (a, mid) = (e.dom(), e.cod());
    for _ in 0..4 {
        let bottom = random_functor(rng, mid, m.cod())?;
        let mut search = FunctorSearch::new(a, m.dom());
        for l in 0..=n {
            for x in 0..a.len(l) {
                let want = bottom.apply(l, e.apply(l, x));
                let allowed: Vec<usize> = (0..m.dom().len(l)).filter(|&y| m.apply(l, y) == want).collect();
                search = search.restrict(l, x, allowed);
            }
        }
        if let Some(top) = search.first() {
            return Some((m, top, bottom));
        }
    }
    None
}

/// Checks one square; returns whether it came from the random family.
pub fn check_square(e: &NFunctor, m: &NFunctor, top: &NFunctor, bottom: &NFunctor) -> Result<(), String> {
    let d = fill_diagonal(e, m, top, bottom).map_err(err)?;
    if d.after(e).map_err(err)? != *top || m.after(&d).map_err(err)? != *bottom {
        return Err("the diagonal does not fill the square".into());
    }
    Ok(())
}

fn orthogonality(rng: &mut Rng8, n: usize, cfg: GenConfig) -> Result<Stats, String> {
    let small = cfg.with_depth(1);
    let (a, b) = (random_ncat(rng, n, small), random_ncat(rng, n, small));
    let f = random_functor(rng, &a, &b).ok_or("no functor")?;
    let mut stats = Stats::new();
    let mut trivial: Vec<NFunctor> = Vec::new();
    for system in 0..2 {
        let fac = factorize(system, &f);
        check_factorization(system, &f, &fac)?;
        let label = ["reflective", "ml"][system];
        match random_square(rng, system, &fac.e, n, cfg) {
            Some((m, top, bottom)) => {
                check_square(&fac.e, &m, &top, &bottom).map_err(|e| format!("{label} square: {e}"))?;
                *stats.entry(["squares_reflective", "squares_ml"][system]).or_default() += 1;
            }
            None => {
                check_square(&fac.e, &fac.m, &fac.e, &fac.m).map_err(|e| format!("{label} own square: {e}"))?;
                *stats.entry(["own_squares_reflective", "own_squares_ml"][system]).or_default() += 1;
            }
        }
        if system == 0 {
            trivial.push(fac.m.clone());
        }
    }
    if classify(&f).map_err(err)?.trivial_covering {
        trivial.push(f);
    }
    for t in &trivial {
        unit_squares_are_pullbacks(t).map_err(|x| format!("unit square at {x:?} is not a pullback"))?;
    }
    stats.insert("trivial_coverings", trivial.len());
    Ok(stats)
}

/// Whether the iterated reflection of `a` agrees with the direct one.
pub fn crosscheck_instance(a: &Arc<NCat>) -> Result<Stats, String> {
    let u = iterate_reflect(a).map_err(err)?;
    if !is_npreorder(u.cod()) {
        return Err("iterated image is not an n-preorder".into());
    }
    let direct = reflect(a).image;
    if find_isomorphism(u.cod(), &direct).is_none() {
        return Err("iterated and direct reflections differ".into());
    }
    Ok(Stats::from([("cells", a.total_cells())]))
}

fn crosscheck(rng: &mut Rng8, n: usize, cfg: GenConfig) -> Result<Stats, String> {
    crosscheck_instance(&random_ncat(rng, n, cfg))
}
