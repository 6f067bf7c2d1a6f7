//! Monotonization: every passable game is equivalent to a monotone game.
//!
//! The pipeline follows the constructive proof: first make the game
//! semi-monotone by adding a gift-horse option on the side that lacks a good
//! one, then make it monotone by lifting every left option through `up` and
//! every right option through `down`, twice. An optional shrinking pass
//! removes dominated options and bypasses reversible ones as long as
//! monotonicity survives.

use crate::error::{Error, Result};
use crate::game::{GameId, Universe};
use crate::lr::{downr, upl};

/// Which side an option set is destined for in [`clique_embed`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EmbedSide {
    /// Produce `{S|bottom}`.
    Left,
    /// Produce `{top|S}`.
    Right,
}

/// Equivalent semi-monotone form of a passable game: options are fixed
/// recursively, then a gift horse `{H|bottom}` (or `{top|H'}`) is added if
/// one side has no good option.
pub fn to_semi_monotone(u: &mut Universe, g: GameId) -> Result<GameId> {
    if !u.is_passable(g) {
        return Err(Error::Precondition("to_semi_monotone needs a passable game".into()));
    }
    u.top_game()?;
    u.bottom_game()?;
    semi_rec(u, g)
}

fn semi_rec(u: &mut Universe, g: GameId) -> Result<GameId> {
    if u.is_atomic(g) {
        return Ok(g);
    }
    let lefts: Vec<GameId> = u.left_options(g).to_vec();
    let rights: Vec<GameId> = u.right_options(g).to_vec();
    let lefts = lefts.into_iter().map(|o| semi_rec(u, o)).collect::<Result<Vec<_>>>()?;
    let rights = rights.into_iter().map(|o| semi_rec(u, o)).collect::<Result<Vec<_>>>()?;
    let cur = u.comp(&lefts, &rights);

    let good_left = lefts.iter().copied().find(|&h| u.leq(cur, h));
    let good_right = rights.iter().copied().find(|&k| u.leq(k, cur));
    match (good_left, good_right) {
        (Some(_), Some(_)) => Ok(cur),
        (Some(h), None) => {
            // add the right gift horse K = {H|bottom}
            let bot = u.bottom_game()?;
            let k = u.comp(&[h], &[bot]);
            let mut r2 = rights;
            r2.push(k);
            Ok(u.comp(&lefts, &r2))
        }
        (None, Some(h)) => {
            // dual: add the left gift horse K = {top|H}
            let top = u.top_game()?;
            let k = u.comp(&[top], &[h]);
            let mut l2 = lefts;
            l2.push(k);
            Ok(u.comp(&l2, &rights))
        }
        (None, None) => Err(Error::Internal(
            "passable composite with no good option on either side".into(),
        )),
    }
}

/// Equivalent monotone form of a passable game.
///
/// After the semi-monotone pass, each node `{L|R}` whose options have been
/// made monotone becomes `{up(L') | down(R')}` with `L' = {up(H) : H in L}`
/// and `R' = {down(K) : K in R}`. Nodes that are already monotone are kept.
pub fn to_monotone(u: &mut Universe, g: GameId) -> Result<GameId> {
    let semi = to_semi_monotone(u, g)?;
    mono_rec(u, semi)
}

fn mono_rec(u: &mut Universe, g: GameId) -> Result<GameId> {
    if u.is_atomic(g) || u.is_monotone(g) {
        return Ok(g);
    }
    let lefts: Vec<GameId> = u.left_options(g).to_vec();
    let rights: Vec<GameId> = u.right_options(g).to_vec();
    let lefts = lefts.into_iter().map(|o| mono_rec(u, o)).collect::<Result<Vec<_>>>()?;
    let rights = rights.into_iter().map(|o| mono_rec(u, o)).collect::<Result<Vec<_>>>()?;
    let l_lifted: Vec<GameId> =
        lefts.iter().map(|&h| upl(u, &[h])).collect::<Result<Vec<_>>>()?;
    let r_lifted: Vec<GameId> =
        rights.iter().map(|&k| downr(u, &[k])).collect::<Result<Vec<_>>>()?;
    let left_side = upl(u, &l_lifted)?;
    let right_side = downr(u, &r_lifted)?;
    Ok(u.comp(&[left_side], &[right_side]))
}

/// Embeds a `<|`-clique as one side of a bounded game: `{S|bottom}` or
/// `{top|S}`. Preserves monotone / semi-monotone / passable membership of
/// the members.
pub fn clique_embed(u: &mut Universe, set: &[GameId], side: EmbedSide) -> Result<GameId> {
    if set.is_empty() {
        return Err(Error::InvalidArgument("clique_embed needs a non-empty set".into()));
    }
    for &h in set {
        if !u.is_passable(h) {
            return Err(Error::Precondition("clique members must be passable".into()));
        }
    }
    for &h in set {
        for &k in set {
            if !u.tri(h, k) {
                return Err(Error::Precondition(
                    "clique_embed requires pairwise H <| K among members".into(),
                ));
            }
        }
    }
    let result = match side {
        EmbedSide::Left => {
            let bot = u.bottom_game()?;
            u.comp(set, &[bot])
        }
        EmbedSide::Right => {
            let top = u.top_game()?;
            u.comp(&[top], set)
        }
    };
    // class preservation: the weakest class all members satisfy is kept
    if set.iter().all(|&h| u.is_monotone(h)) {
        debug_assert!(u.is_monotone(result));
    } else if set.iter().all(|&h| u.is_semi_monotone(h)) {
        debug_assert!(u.is_semi_monotone(result));
    } else {
        debug_assert!(u.is_passable(result));
    }
    Ok(result)
}

/// Greedy size reduction of a monotone game: removes dominated options and
/// bypasses reversible ones, but only keeps a rewrite when the result is
/// still monotone. The value never changes.
pub fn shrink_monotone(u: &mut Universe, g: GameId) -> Result<GameId> {
    if !u.is_monotone(g) {
        return Err(Error::Precondition("shrink_monotone needs a monotone game".into()));
    }
    Ok(shrink_rec(u, g))
}

fn shrink_rec(u: &mut Universe, g: GameId) -> GameId {
    if u.is_atomic(g) {
        return g;
    }
    let lefts: Vec<GameId> = u.left_options(g).to_vec();
    let rights: Vec<GameId> = u.right_options(g).to_vec();
    let lefts: Vec<GameId> = lefts.into_iter().map(|o| try_shrink(u, o)).collect();
    let rights: Vec<GameId> = rights.into_iter().map(|o| try_shrink(u, o)).collect();
    let mut cur = u.comp(&lefts, &rights);

    'outer: loop {
        let lefts: Vec<GameId> = u.left_options(cur).to_vec();
        let rights: Vec<GameId> = u.right_options(cur).to_vec();
        // dominated removal, one candidate at a time
        if lefts.len() > 1 {
            for (i, &k) in lefts.iter().enumerate() {
                if lefts.iter().any(|&h| h != k && u.leq(k, h)) {
                    let rest: Vec<GameId> =
                        lefts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
                    let cand = u.comp(&rest, &rights);
                    if u.is_monotone(cand) {
                        cur = cand;
                        continue 'outer;
                    }
                }
            }
        }
        if rights.len() > 1 {
            for (i, &k) in rights.iter().enumerate() {
                if rights.iter().any(|&h| h != k && u.leq(h, k)) {
                    let rest: Vec<GameId> =
                        rights.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
                    let cand = u.comp(&lefts, &rest);
                    if u.is_monotone(cand) {
                        cur = cand;
                        continue 'outer;
                    }
                }
            }
        }
        // reversible bypass attempts
        for (i, &h) in lefts.iter().enumerate() {
            for k in u.right_options(h).to_vec() {
                if u.leq(k, cur) {
                    let mut new_l: Vec<GameId> =
                        lefts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
                    if u.is_atomic(k) {
                        new_l.push(k);
                    } else {
                        new_l.extend_from_slice(u.left_options(k));
                    }
                    let cand = u.comp(&new_l, &rights);
                    if u.is_monotone(cand) {
                        cur = cand;
                        continue 'outer;
                    }
                }
            }
        }
        for (i, &h) in rights.iter().enumerate() {
            for k in u.left_options(h).to_vec() {
                if u.leq(cur, k) {
                    let mut new_r: Vec<GameId> =
                        rights.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
                    if u.is_atomic(k) {
                        new_r.push(k);
                    } else {
                        new_r.extend_from_slice(u.right_options(k));
                    }
                    let cand = u.comp(&lefts, &new_r);
                    if u.is_monotone(cand) {
                        cur = cand;
                        continue 'outer;
                    }
                }
            }
        }
        return cur;
    }
}

fn try_shrink(u: &mut Universe, g: GameId) -> GameId {
    let s = shrink_rec(u, g);
    if u.is_monotone(s) {
        s
    } else {
        g
    }
}
