//! Left and right orders and equivalences on non-empty sets of games.
//!
//! Two sets are left equivalent when they are interchangeable as left option
//! sets in any context. Over a poset with bottom, `S <=L T` reduces to
//! `S <| {T|bottom}`, so set-level queries ride on the game-level caches, and
//! the class of `S` is keyed by the canonical form of `{S|bottom}`. These
//! classes are what make enumeration by depth tractable.

use crate::canonical::canonical_form;
use crate::error::{Error, Result};
use crate::game::{GameId, Universe};

/// Non-empty sorted duplicate-free list of games used as an option set.
pub type GameSet = Vec<GameId>;

fn normalize_set(set: &[GameId]) -> Result<GameSet> {
    if set.is_empty() {
        return Err(Error::InvalidArgument("game set must be non-empty".into()));
    }
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    Ok(s)
}

/// The game `{S|bottom}` that characterizes S's left behavior.
fn left_probe(u: &mut Universe, s: &[GameId]) -> Result<GameId> {
    let bot = u.bottom_game()?;
    Ok(u.comp(s, &[bot]))
}

/// The game `{top|S}` that characterizes S's right behavior.
fn right_probe(u: &mut Universe, s: &[GameId]) -> Result<GameId> {
    let top = u.top_game()?;
    Ok(u.comp(&[top], s))
}

/// `S <=L T`: S is at most as useful as T when offered as left options.
pub fn leql(u: &mut Universe, s: &[GameId], t: &[GameId]) -> Result<bool> {
    let s = normalize_set(s)?;
    let t = normalize_set(t)?;
    let probe = left_probe(u, &t)?;
    Ok(s.into_iter().all(|g| u.tri(g, probe)))
}

/// `S <=R T`: dual of [`leql`], requires a top atom. Unfolds to
/// `{top|S} <| m` for every member `m` of `T`.
pub fn leqr(u: &mut Universe, s: &[GameId], t: &[GameId]) -> Result<bool> {
    let s = normalize_set(s)?;
    let t = normalize_set(t)?;
    let probe = right_probe(u, &s)?;
    Ok(t.into_iter().all(|g| u.tri(probe, g)))
}

/// Left equivalence of sets.
pub fn eql(u: &mut Universe, s: &[GameId], t: &[GameId]) -> Result<bool> {
    Ok(leql(u, s, t)? && leql(u, t, s)?)
}

/// Right equivalence of sets.
pub fn eqr(u: &mut Universe, s: &[GameId], t: &[GameId]) -> Result<bool> {
    Ok(leqr(u, s, t)? && leqr(u, t, s)?)
}

/// `up(S) = {top | {S|bottom}}`: the maximum of S's left equivalence class.
pub fn upl(u: &mut Universe, s: &[GameId]) -> Result<GameId> {
    let s = normalize_set(s)?;
    let top = u.top_game()?;
    let inner = left_probe(u, &s)?;
    Ok(u.comp(&[top], &[inner]))
}

/// `down(S) = {{top|S} | bottom}`: dual of [`upl`].
pub fn downr(u: &mut Universe, s: &[GameId]) -> Result<GameId> {
    let s = normalize_set(s)?;
    let bot = u.bottom_game()?;
    let inner = right_probe(u, &s)?;
    Ok(u.comp(&[inner], &[bot]))
}

/// Decides `H <= K` through the left/right decomposition and asserts that it
/// agrees with the direct order.
pub fn leq_decomposition_check(u: &mut Universe, h: GameId, k: GameId) -> Result<bool> {
    let viaparts = leql(u, &[h], &[k])? && leqr(u, &[h], &[k])?;
    let direct = u.leq(h, k);
    if viaparts != direct {
        return Err(Error::Internal(format!(
            "left/right decomposition of <= disagrees with the direct order: {viaparts} vs {direct}"
        )));
    }
    Ok(viaparts)
}

/// Class key of a set under left equivalence: the canonical `{S|bottom}`.
pub fn left_class_key(u: &mut Universe, s: &[GameId]) -> Result<GameId> {
    let probe = left_probe(u, s)?;
    Ok(canonical_form(u, probe))
}

/// Class key under right equivalence: the canonical `{top|S}`.
pub fn right_class_key(u: &mut Universe, s: &[GameId]) -> Result<GameId> {
    let probe = right_probe(u, s)?;
    Ok(canonical_form(u, probe))
}

/// Reduces a representative set: if the canonical `{S|bottom}` still has the
/// shape `{S'|bottom}`, the smaller `S'` is left equivalent to `S`.
fn reduce_left_rep(u: &mut Universe, s: GameSet, key: GameId) -> GameSet {
    let bot = match u.poset().bottom() {
        Some(b) => b,
        None => return s,
    };
    let rights = u.right_options(key);
    if rights.len() == 1 {
        if let Some(a) = u.atom_of(rights[0]) {
            if a == bot {
                return u.left_options(key).to_vec();
            }
        }
    }
    s
}

fn reduce_right_rep(u: &mut Universe, s: GameSet, key: GameId) -> GameSet {
    let top = match u.poset().top() {
        Some(t) => t,
        None => return s,
    };
    let lefts = u.left_options(key);
    if lefts.len() == 1 {
        if let Some(a) = u.atom_of(lefts[0]) {
            if a == top {
                return u.right_options(key).to_vec();
            }
        }
    }
    s
}

/// One representative per left-equivalence class of non-empty subsets of
/// `games`, built incrementally: with representatives for the first k-1
/// games in hand, each new game spawns the 2m+1 candidate sets, which are
/// deduplicated by class key. The first-constructed representative wins.
pub fn left_classes(u: &mut Universe, games: &[GameId]) -> Result<Vec<GameSet>> {
    classes(u, games, true)
}

/// Dual of [`left_classes`].
pub fn right_classes(u: &mut Universe, games: &[GameId]) -> Result<Vec<GameSet>> {
    classes(u, games, false)
}

fn classes(u: &mut Universe, games: &[GameId], left: bool) -> Result<Vec<GameSet>> {
    if games.is_empty() {
        return Ok(Vec::new());
    }
    // reps maps insertion order; keys tracks known class keys.
    let mut reps: Vec<GameSet> = Vec::new();
    let mut keys: rustc_hash::FxHashSet<GameId> = Default::default();
    for &g in games {
        let mut additions: Vec<GameSet> = Vec::with_capacity(reps.len() + 1);
        additions.push(vec![g]);
        for rep in &reps {
            let mut s = rep.clone();
            s.push(g);
            s.sort_unstable();
            s.dedup();
            additions.push(s);
        }
        for s in additions {
            let key = if left {
                left_class_key(u, &s)?
            } else {
                right_class_key(u, &s)?
            };
            if keys.insert(key) {
                let reduced = if left {
                    reduce_left_rep(u, s, key)
                } else {
                    reduce_right_rep(u, s, key)
                };
                reps.push(reduced);
            }
        }
    }
    Ok(reps)
}

/// Partition of single games into left-equivalence classes; returns the class
/// index of each input game, classes numbered by first appearance.
pub fn left_class_partition(u: &mut Universe, games: &[GameId]) -> Result<Vec<usize>> {
    partition(u, games, true)
}

/// Dual of [`left_class_partition`].
pub fn right_class_partition(u: &mut Universe, games: &[GameId]) -> Result<Vec<usize>> {
    partition(u, games, false)
}

fn partition(u: &mut Universe, games: &[GameId], left: bool) -> Result<Vec<usize>> {
    let mut keys: Vec<GameId> = Vec::new();
    let mut out = Vec::with_capacity(games.len());
    for &g in games {
        let key = if left {
            left_class_key(u, &[g])?
        } else {
            right_class_key(u, &[g])?
        };
        match keys.iter().position(|&k| k == key) {
            Some(i) => out.push(i),
            None => {
                keys.push(key);
                out.push(keys.len() - 1);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::linear_poset;
    use crate::text::parse_game;

    #[test]
    fn left_order_examples() {
        let mut u = Universe::new(linear_poset(3).unwrap());
        let g = parse_game(&mut u, "{T|{a|B}}").unwrap();
        let a = u.atom("a").unwrap();
        // {T|{a|B}} <=L a, even though {T|{a|B}} is not <= a
        assert!(leql(&mut u, &[g], &[a]).unwrap());
        assert!(!u.leq(g, a));
        // reflexivity
        assert!(leql(&mut u, &[g, a], &[g, a]).unwrap());
        // empty sets refused
        assert!(leql(&mut u, &[], &[a]).is_err());
    }

    #[test]
    fn upl_is_class_maximum() {
        let mut u = Universe::new(linear_poset(3).unwrap());
        let a = u.atom("a").unwrap();
        let up_a = upl(&mut u, &[a]).unwrap();
        let expect = parse_game(&mut u, "{T|{a|B}}").unwrap();
        assert_eq!(up_a, expect);
        // S is left equivalent to up(S)
        assert!(eql(&mut u, &[a], &[up_a]).unwrap());
        // and every member is <= the maximum
        assert!(u.leq(a, up_a));

        let g = parse_game(&mut u, "{a|B}").unwrap();
        let s = vec![a, g];
        let up_s = upl(&mut u, &s).unwrap();
        assert!(eql(&mut u, &s, &[up_s]).unwrap());
        assert!(u.leq(a, up_s) && u.leq(g, up_s));
    }

    #[test]
    fn decomposition_matches_direct_order() {
        let mut u = Universe::new(linear_poset(3).unwrap());
        let a = u.atom("a").unwrap();
        let aa = parse_game(&mut u, "{a|a}").unwrap();
        assert!(leq_decomposition_check(&mut u, a, aa).unwrap());
        let b = u.atom("B").unwrap();
        let t = u.atom("T").unwrap();
        assert!(leq_decomposition_check(&mut u, b, t).unwrap());
        // H <=L K but not <=R K, so H <= K fails
        let h = parse_game(&mut u, "{T|{a|B}}").unwrap();
        assert!(!leq_decomposition_check(&mut u, h, a).unwrap());
        assert!(leql(&mut u, &[h], &[a]).unwrap());
        assert!(!leqr(&mut u, &[h], &[a]).unwrap());
    }

    #[test]
    fn classes_over_bool() {
        let mut u = Universe::new(linear_poset(2).unwrap());
        let b = u.atom("B").unwrap();
        let t = u.atom("T").unwrap();
        let reps = left_classes(&mut u, &[b, t]).unwrap();
        // {B}, {T}; {B,T} is left equivalent to {T}
        assert_eq!(reps.len(), 2);
        assert!(eql(&mut u, &[b, t], &[t]).unwrap());

        let single = left_classes(&mut u, &[t]).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn missing_bounds_are_refused() {
        let p = crate::poset::Poset::new("pair", vec!["x".into(), "y".into()], &[]).unwrap();
        let mut u = Universe::new(p);
        let x = u.atom("x").unwrap();
        assert!(matches!(leql(&mut u, &[x], &[x]), Err(Error::UnsupportedPoset(_))));
        assert!(matches!(upl(&mut u, &[x]), Err(Error::UnsupportedPoset(_))));
    }
}
