use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ncat::NCatParts;

/// The n-category laws, in the order they are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Law {
    IdentityBoundary,
    Globularity,
    CompositeBoundary,
    RightUnit,
    LeftUnit,
    Associativity,
    IdentityFunctoriality,
    Interchange,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::IdentityBoundary => "identity-boundary",
            Law::Globularity => "globularity",
            Law::CompositeBoundary => "composite-boundary",
            Law::RightUnit => "right-unit",
            Law::LeftUnit => "left-unit",
            Law::Associativity => "associativity",
            Law::IdentityFunctoriality => "identity-functoriality",
            Law::Interchange => "interchange",
        })
    }
}

/// The first failed law, the levels involved and the offending cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: Law,
    pub levels: Vec<usize>,
    pub cells: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} law violated at levels (", self.law)?;
        for (k, l) in self.levels.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ") on cells [{}]", self.cells.join(", "))?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    /// Malformed tables: wrong shapes, dangling indices, duplicate names.
    #[error("structural error: {0}")]
    Structural(String),
    /// A composition table whose keys are not exactly the composable pairs.
    #[error("domain error in comp[{j},{i}]: {detail} [{}]", cells.join(", "))]
    Domain {
        j: usize,
        i: usize,
        detail: String,
        cells: Vec<String>,
    },
    #[error("{0}")]
    Law(Violation),
}

pub(crate) fn check(p: &NCatParts) -> Result<(), ValidationError> {
    structural(p)?;
    check_names(p)?;
    identity_boundaries(p)?;
    globularity(p)?;
    domains(p)?;
    composite_boundaries(p)?;
    units(p)?;
    associativity(p)?;
    identity_functoriality(p)?;
    interchange(p)
}

fn structural(p: &NCatParts) -> Result<(), ValidationError> {
    let n = p.n;
    let err = |m: String| Err(ValidationError::Structural(m));
    if p.names.len() != n + 1 {
        return err(format!("expected {} cell levels, found {}", n + 1, p.names.len()));
    }
    for (what, t) in [("src", &p.src), ("tgt", &p.tgt)] {
        if t.len() != n + 1 || !t[0].is_empty() {
            return err(format!("{what} must have one table per level 1..={n}"));
        }
        for l in 1..=n {
            if t[l].len() != p.names[l].len() {
                return err(format!("{what}[{l}] is not total on level {l}"));
            }
            for (x, &y) in t[l].iter().enumerate() {
                if y >= p.names[l - 1].len() {
                    return err(format!(
                        "{what}[{l}] sends {:?} to missing cell index {y}",
                        p.names[l][x]
                    ));
                }
            }
        }
    }
    if p.idn.len() != n + 1 || !p.idn[0].is_empty() {
        return err(format!("idn must have one table per level 1..={n}"));
    }
    for l in 1..=n {
        if p.idn[l].len() != p.names[l - 1].len() {
            return err(format!("idn[{l}] is not total on level {}", l - 1));
        }
        for (x, &y) in p.idn[l].iter().enumerate() {
            if y >= p.names[l].len() {
                return err(format!(
                    "idn[{l}] sends {:?} to missing cell index {y}",
                    p.names[l - 1][x]
                ));
            }
        }
    }
    if p.comp.len() != n + 1 {
        return err(format!("comp must have {} rows", n + 1));
    }
    for j in 0..=n {
        if p.comp[j].len() != j {
            return err(format!("comp[{j}] must hold {j} tables"));
        }
        let size = p.names[j].len();
        for i in 0..j {
            for (&(a, b), &r) in &p.comp[j][i] {
                if a >= size || b >= size || r >= size {
                    return err(format!("comp[{j},{i}] refers to a missing level-{j} cell index"));
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn check_names(p: &NCatParts) -> Result<(), ValidationError> {
    for (l, level) in p.names.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for s in level {
            if !seen.insert(s.as_str()) {
                return Err(ValidationError::Structural(format!(
                    "duplicate cell name {s:?} at level {l}"
                )));
            }
        }
    }
    Ok(())
}

fn violation(p: &NCatParts, law: Law, levels: &[usize], cells: &[(usize, usize)], detail: String) -> ValidationError {
    ValidationError::Law(Violation {
        law,
        levels: levels.to_vec(),
        cells: cells.iter().map(|&(l, x)| p.names[l][x].clone()).collect(),
        detail,
    })
}

fn identity_boundaries(p: &NCatParts) -> Result<(), ValidationError> {
    for l in 1..=p.n {
        for x in 0..p.names[l - 1].len() {
            let e = p.idn[l][x];
            if p.src[l][e] != x || p.tgt[l][e] != x {
                return Err(violation(
                    p,
                    Law::IdentityBoundary,
                    &[l, l - 1],
                    &[(l - 1, x), (l, e)],
                    format!("the identity on {:?} is not an endo-cell of it", p.names[l - 1][x]),
                ));
            }
        }
    }
    Ok(())
}

fn globularity(p: &NCatParts) -> Result<(), ValidationError> {
    for l in 2..=p.n {
        for x in 0..p.names[l].len() {
            let (s, t) = (p.src[l][x], p.tgt[l][x]);
            if p.src[l - 1][s] != p.src[l - 1][t] || p.tgt[l - 1][s] != p.tgt[l - 1][t] {
                return Err(violation(
                    p,
                    Law::Globularity,
                    &[l, l - 1],
                    &[(l, x), (l - 1, s), (l - 1, t)],
                    format!("source and target of {:?} are not parallel", p.names[l][x]),
                ));
            }
        }
    }
    Ok(())
}

/// Level-`j` cells keyed by their level-`i` source and target.
fn groups(p: &NCatParts, j: usize, i: usize) -> (BTreeMap<usize, Vec<usize>>, BTreeMap<usize, Vec<usize>>) {
    let mut by_src: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut by_tgt: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..p.names[j].len() {
        by_src.entry(p.bnd_src(j, x, i)).or_default().push(x);
        by_tgt.entry(p.bnd_tgt(j, x, i)).or_default().push(x);
    }
    (by_src, by_tgt)
}

fn domains(p: &NCatParts) -> Result<(), ValidationError> {
    for j in 1..=p.n {
        for i in 0..j {
            let table = &p.comp[j][i];
            for &(a, b) in table.keys() {
                if p.bnd_src(j, a, i) != p.bnd_tgt(j, b, i) {
                    return Err(ValidationError::Domain {
                        j,
                        i,
                        detail: String::from("entry on a pair that is not composable"),
                        cells: vec![p.names[j][a].clone(), p.names[j][b].clone()],
                    });
                }
            }
            let (by_src, by_tgt) = groups(p, j, i);
            let composable: usize = by_src
                .iter()
                .map(|(c, later)| later.len() * by_tgt.get(c).map_or(0, Vec::len))
                .sum();
            if composable != table.len() {
                for (c, later) in &by_src {
                    for &a in later {
                        for &b in by_tgt.get(c).into_iter().flatten() {
                            if !table.contains_key(&(a, b)) {
                                return Err(ValidationError::Domain {
                                    j,
                                    i,
                                    detail: String::from("no entry for a composable pair"),
                                    cells: vec![p.names[j][a].clone(), p.names[j][b].clone()],
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn composite_boundaries(p: &NCatParts) -> Result<(), ValidationError> {
    for j in 1..=p.n {
        for i in 0..j {
            for (&(g2, g1), &r) in &p.comp[j][i] {
                let cells = [(j, g2), (j, g1), (j, r)];
                if p.bnd_src(j, r, i) != p.bnd_src(j, g1, i) || p.bnd_tgt(j, r, i) != p.bnd_tgt(j, g2, i) {
                    return Err(violation(
                        p,
                        Law::CompositeBoundary,
                        &[j, i],
                        &cells,
                        format!("level-{i} boundary of the composite is wrong"),
                    ));
                }
                for l in i + 1..j {
                    let s = p.comp[l][i].get(&(p.bnd_src(j, g2, l), p.bnd_src(j, g1, l)));
                    let t = p.comp[l][i].get(&(p.bnd_tgt(j, g2, l), p.bnd_tgt(j, g1, l)));
                    if s != Some(&p.bnd_src(j, r, l)) || t != Some(&p.bnd_tgt(j, r, l)) {
                        return Err(violation(
                            p,
                            Law::CompositeBoundary,
                            &[j, i],
                            &cells,
                            format!("level-{l} boundary of the composite is not the composite of boundaries"),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn units(p: &NCatParts) -> Result<(), ValidationError> {
    for j in 1..=p.n {
        for i in 0..j {
            let table = &p.comp[j][i];
            for g in 0..p.names[j].len() {
                let u = p.tower(i, j, p.bnd_src(j, g, i));
                if table.get(&(g, u)) != Some(&g) {
                    return Err(violation(
                        p,
                        Law::RightUnit,
                        &[j, i],
                        &[(j, g), (j, u)],
                        String::from("composing with the identity on the source changes the cell"),
                    ));
                }
                let u = p.tower(i, j, p.bnd_tgt(j, g, i));
                if table.get(&(u, g)) != Some(&g) {
                    return Err(violation(
                        p,
                        Law::LeftUnit,
                        &[j, i],
                        &[(j, u), (j, g)],
                        String::from("composing with the identity on the target changes the cell"),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn associativity(p: &NCatParts) -> Result<(), ValidationError> {
    for j in 1..=p.n {
        for i in 0..j {
            let table = &p.comp[j][i];
            let (by_src, _) = groups(p, j, i);
            for (&(g, f), &gf) in table {
                for &h in by_src.get(&p.bnd_tgt(j, g, i)).into_iter().flatten() {
                    let lhs = table.get(&(h, gf));
                    let rhs = table.get(&(h, g)).and_then(|&hg| table.get(&(hg, f)));
                    if lhs.is_none() || lhs != rhs {
                        return Err(violation(
                            p,
                            Law::Associativity,
                            &[j, i],
                            &[(j, h), (j, g), (j, f)],
                            String::new(),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn identity_functoriality(p: &NCatParts) -> Result<(), ValidationError> {
    for k in 2..=p.n {
        let j = k - 1;
        for i in 0..j {
            for (&(g2, g1), &r) in &p.comp[j][i] {
                let (e2, e1) = (p.idn[k][g2], p.idn[k][g1]);
                if p.comp[k][i].get(&(e2, e1)) != Some(&p.idn[k][r]) {
                    return Err(violation(
                        p,
                        Law::IdentityFunctoriality,
                        &[k, i],
                        &[(j, g2), (j, g1), (j, r)],
                        String::from("the identity on a composite is not the composite of identities"),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn interchange(p: &NCatParts) -> Result<(), ValidationError> {
    for k in 2..=p.n {
        for j in 1..k {
            let (_, by_tgt_j) = groups(p, k, j);
            for i in 0..j {
                let (_, by_tgt_i) = groups(p, k, i);
                let vert = &p.comp[k][j];
                let horiz = &p.comp[k][i];
                for (&(a, b), &ab) in vert {
                    for &c in by_tgt_i.get(&p.bnd_src(k, a, i)).into_iter().flatten() {
                        for &d in by_tgt_j.get(&p.bnd_src(k, c, j)).into_iter().flatten() {
                            let cd = vert.get(&(c, d));
                            let ac = horiz.get(&(a, c));
                            let bd = horiz.get(&(b, d));
                            let lhs = cd.and_then(|&cd| horiz.get(&(ab, cd)));
                            let rhs = ac.zip(bd).and_then(|(&ac, &bd)| vert.get(&(ac, bd)));
                            if lhs.is_none() || lhs != rhs {
                                return Err(violation(
                                    p,
                                    Law::Interchange,
                                    &[k, j, i],
                                    &[(k, a), (k, b), (k, c), (k, d)],
                                    String::new(),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
