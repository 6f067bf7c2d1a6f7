//! Enumeration of all canonical passable game values over a poset, by depth.
//!
//! Depth 0 lists the atoms. For depth d+1, candidate games `{L|R}` draw `L`
//! from one representative per left-equivalence class of option sets over the
//! catalog so far, and `R` from right-class representatives. Every candidate
//! is canonicalized; a candidate whose canonical form is new and of the right
//! depth joins the catalog. Rejected candidates are rolled back so the term
//! store only retains real values.

use crate::canonical::canonical_form;
use crate::error::{Error, Result};
use crate::game::{GameId, Universe};
use crate::lr::{left_classes, right_classes};

/// Budget knobs for enumeration.
#[derive(Clone, Debug)]
pub struct EnumerateBudget {
    /// Cap on interned terms in the universe.
    pub max_terms: usize,
    /// Cap on catalog values.
    pub max_values: usize,
}

impl Default for EnumerateBudget {
    fn default() -> Self {
        EnumerateBudget { max_terms: 50_000_000, max_values: 2_000_000 }
    }
}

/// All canonical passable values over one poset up to a depth bound.
pub struct ValueCatalog {
    /// Values grouped by exact depth of the canonical form.
    pub by_depth: Vec<Vec<GameId>>,
    /// True when a resource budget stopped the enumeration early.
    pub complete: bool,
    /// Telemetry: candidate composites examined per depth row.
    pub candidates_tried: Vec<usize>,
}

impl ValueCatalog {
    pub fn total(&self) -> usize {
        self.by_depth.iter().map(|v| v.len()).sum()
    }

    pub fn all_values(&self) -> Vec<GameId> {
        self.by_depth.iter().flatten().copied().collect()
    }
}

/// Enumerates canonical passable values of depth up to `max_depth`.
pub fn enumerate_canonical_passable(
    u: &mut Universe,
    max_depth: usize,
    budget: &EnumerateBudget,
) -> Result<ValueCatalog> {
    if u.poset().top().is_none() || u.poset().bottom().is_none() {
        return Err(Error::UnsupportedPoset(
            "enumeration needs top and bottom atoms".into(),
        ));
    }
    let mut by_depth: Vec<Vec<GameId>> = Vec::with_capacity(max_depth + 1);
    let mut candidates_tried = vec![0usize];

    // depth 0: the atoms, in poset order
    let mut atoms = Vec::new();
    for a in 0..u.poset().len() {
        atoms.push(u.atomic(a)?);
    }
    by_depth.push(atoms);

    let mut seen: rustc_hash::FxHashSet<GameId> = by_depth[0].iter().copied().collect();

    for d in 1..=max_depth {
        let so_far: Vec<GameId> = by_depth.iter().flatten().copied().collect();
        let lreps = left_classes(u, &so_far)?;
        let rreps = right_classes(u, &so_far)?;
        let mut new_values: Vec<GameId> = Vec::new();
        let mut tried = 0usize;
        for lrep in &lreps {
            for rrep in &rreps {
                tried += 1;
                if u.term_count() > budget.max_terms
                    || seen.len() + new_values.len() > budget.max_values
                {
                    by_depth.push(sort_values(u, new_values));
                    candidates_tried.push(tried);
                    return Ok(ValueCatalog { by_depth, complete: false, candidates_tried });
                }
                let sp = u.savepoint();
                let g = u.comp(lrep, rrep);
                if !u.is_passable(g) {
                    u.rollback(sp);
                    continue;
                }
                let c = canonical_form(u, g);
                if u.depth(c) != d as u32 || seen.contains(&c) {
                    // A rejected canonical form is a value of smaller depth or
                    // a duplicate, so it predates the savepoint and survives
                    // the rollback of the candidate's scratch terms.
                    debug_assert!(c.idx() < sp_mark(&sp) || new_values.contains(&c));
                    if c.idx() < sp_mark(&sp) {
                        u.rollback(sp);
                    }
                    continue;
                }
                seen.insert(c);
                new_values.push(c);
                if c.idx() < sp_mark(&sp) {
                    // The value term was interned earlier (e.g. while probing
                    // class keys); the candidate's scratch terms can go.
                    u.rollback(sp);
                }
            }
        }
        candidates_tried.push(tried);
        by_depth.push(sort_values(u, new_values));
    }
    Ok(ValueCatalog { by_depth, complete: true, candidates_tried })
}

fn sp_mark(sp: &crate::game::Savepoint) -> usize {
    crate::game::savepoint_mark(sp)
}

fn sort_values(u: &Universe, mut values: Vec<GameId>) -> Vec<GameId> {
    values.sort_by(|&a, &b| u.structural_cmp(a, b));
    values
}

/// Strictly increasing chain of passable games over a poset with two
/// incomparable atoms: `G_0 = a`, `G_k = {a, b | G_{k-1}}`.
pub fn increasing_chain(u: &mut Universe, len: usize) -> Result<Vec<GameId>> {
    let (a, b) = u
        .poset()
        .incomparable_pair()
        .ok_or_else(|| Error::Precondition("increasing_chain needs two incomparable atoms".into()))?;
    let ga = u.atomic(a)?;
    let gb = u.atomic(b)?;
    let mut chain = vec![ga];
    for _ in 0..len {
        let prev = *chain.last().unwrap();
        let next = u.comp(&[ga, gb], &[prev]);
        chain.push(next);
    }
    for (k, &g) in chain.iter().enumerate() {
        if !u.is_passable(g) {
            return Err(Error::Internal(format!("chain member {k} is not passable")));
        }
    }
    for w in chain.windows(2) {
        if !u.leq(w[0], w[1]) || u.leq(w[1], w[0]) {
            return Err(Error::Internal("chain is not strictly increasing".into()));
        }
    }
    Ok(chain)
}

/// Covering edges of the catalog order (indices into `values`).
pub fn hasse(u: &mut Universe, values: &[GameId]) -> Vec<(usize, usize)> {
    let n = values.len();
    let mut below = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                below[i][j] = u.leq(values[i], values[j]);
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !below[i][j] {
                continue;
            }
            let covered = (0..n).all(|k| k == i || k == j || !(below[i][k] && below[k][j]));
            if covered {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Exhaustive enumerator with no class acceleration, for cross-checking:
/// tries every pair of non-empty subsets of the catalog so far.
pub fn enumerate_brute_force(u: &mut Universe, max_depth: usize) -> Result<Vec<Vec<GameId>>> {
    let mut by_depth: Vec<Vec<GameId>> = Vec::new();
    let mut atoms = Vec::new();
    for a in 0..u.poset().len() {
        atoms.push(u.atomic(a)?);
    }
    by_depth.push(atoms);
    let mut seen: rustc_hash::FxHashSet<GameId> = by_depth[0].iter().copied().collect();
    for d in 1..=max_depth {
        let so_far: Vec<GameId> = by_depth.iter().flatten().copied().collect();
        let n = so_far.len();
        if n > 20 {
            return Err(Error::ResourceLimit("brute-force enumeration is for tiny catalogs".into()));
        }
        let mut new_values = Vec::new();
        for lmask in 1u32..1 << n {
            let lefts: Vec<GameId> =
                (0..n).filter(|i| lmask >> i & 1 == 1).map(|i| so_far[i]).collect();
            for rmask in 1u32..1 << n {
                let rights: Vec<GameId> =
                    (0..n).filter(|i| rmask >> i & 1 == 1).map(|i| so_far[i]).collect();
                let sp = u.savepoint();
                let g = u.comp(&lefts, &rights);
                if !u.is_passable(g) {
                    u.rollback(sp);
                    continue;
                }
                let c = canonical_form(u, g);
                if u.depth(c) != d as u32 || seen.contains(&c) {
                    if c.idx() < sp_mark(&sp) {
                        u.rollback(sp);
                    }
                    continue;
                }
                seen.insert(c);
                new_values.push(c);
            }
        }
        by_depth.push(sort_values(u, new_values));
    }
    Ok(by_depth)
}
