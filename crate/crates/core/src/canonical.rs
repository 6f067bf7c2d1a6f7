//! Reduction of games to canonical form.
//!
//! The canonical form of a game has no dominated, reversible, or passing
//! options at any position, and it is the unique such representative of the
//! game's value. Reductions are applied bottom-up; at each node the order is:
//! simplify a passing option, then remove dominated options, then bypass one
//! reversible option, repeated to a fixpoint. Each step strictly shrinks the
//! game, so the loop terminates.

use crate::error::{Error, Result};
use crate::game::{GameId, Universe};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Right => write!(f, "right"),
        }
    }
}

/// One rewrite applied during canonicalization: `from` became `to`.
#[derive(Clone, Debug)]
pub struct Step {
    pub from: GameId,
    pub to: GameId,
    pub kind: StepKind,
}

#[derive(Clone, Debug)]
pub enum StepKind {
    /// An option equivalent to the whole game replaced it.
    SimplifiedPassing { option: GameId },
    /// A dominated option was dropped.
    RemovedDominated { side: Side, option: GameId },
    /// A reversible option was bypassed through `via`.
    BypassedReversible { side: Side, option: GameId, via: GameId, via_atomic: bool },
}

/// Rewrite log of one canonicalization; replaying it from the input term
/// reproduces the output term.
pub type SimplificationTrace = Vec<Step>;

/// Canonical form of `g` (memoized per universe).
pub fn canonical_form(u: &mut Universe, g: GameId) -> GameId {
    canonicalize(u, g, &mut None)
}

/// Canonical form together with the rewrite steps that produced it.
///
/// Memoized prefixes contribute no steps, so ask for a trace on a fresh
/// universe (or an id not canonicalized before) to see the full history.
pub fn canonical_form_traced(u: &mut Universe, g: GameId) -> (GameId, SimplificationTrace) {
    let mut trace = Some(Vec::new());
    let c = canonicalize(u, g, &mut trace);
    (c, trace.unwrap())
}

fn record(trace: &mut Option<SimplificationTrace>, step: Step) {
    if let Some(t) = trace {
        t.push(step);
    }
}

fn canonicalize(u: &mut Universe, g: GameId, trace: &mut Option<SimplificationTrace>) -> GameId {
    let memo = u.canon[g.idx()];
    if memo != u32::MAX {
        return canon_id(memo);
    }
    if u.is_atomic(g) {
        set_canon(u, g, g);
        return g;
    }

    let lefts: Vec<GameId> = u.left_options(g).to_vec();
    let rights: Vec<GameId> = u.right_options(g).to_vec();
    let lefts: Vec<GameId> = lefts.into_iter().map(|o| canonicalize(u, o, trace)).collect();
    let rights: Vec<GameId> = rights.into_iter().map(|o| canonicalize(u, o, trace)).collect();
    let mut cur = u.comp(&lefts, &rights);
    let mut touched = vec![g];

    'fixpoint: loop {
        if u.is_atomic(cur) {
            break;
        }
        touched.push(cur);

        // 1. Passing option: an option equivalent to the game itself.
        let opts: Vec<GameId> = u
            .left_options(cur)
            .iter()
            .chain(u.right_options(cur))
            .copied()
            .collect();
        for h in opts {
            if u.equivalent(h, cur) {
                record(trace, Step { from: cur, to: h, kind: StepKind::SimplifiedPassing { option: h } });
                cur = h; // options are canonical, so h already is
                break 'fixpoint;
            }
        }

        // 2. Dominated options: keep maximal left options and minimal right
        //    options. Options are canonical, so comparabilities are strict.
        let lefts: Vec<GameId> = u.left_options(cur).to_vec();
        let rights: Vec<GameId> = u.right_options(cur).to_vec();
        let mut kept_l: Vec<GameId> = Vec::with_capacity(lefts.len());
        let mut removed_any = false;
        for &k in &lefts {
            let dominated = lefts.iter().any(|&h| h != k && u.leq(k, h));
            if dominated {
                removed_any = true;
            } else {
                kept_l.push(k);
            }
        }
        let mut kept_r: Vec<GameId> = Vec::with_capacity(rights.len());
        for &k in &rights {
            let dominated = rights.iter().any(|&h| h != k && u.leq(h, k));
            if dominated {
                removed_any = true;
            } else {
                kept_r.push(k);
            }
        }
        if removed_any {
            let next = u.comp(&kept_l, &kept_r);
            if let Some(t) = trace.as_mut() {
                for &k in lefts.iter().filter(|k| !kept_l.contains(k)) {
                    t.push(Step {
                        from: cur,
                        to: next,
                        kind: StepKind::RemovedDominated { side: Side::Left, option: k },
                    });
                }
                for &k in rights.iter().filter(|k| !kept_r.contains(k)) {
                    t.push(Step {
                        from: cur,
                        to: next,
                        kind: StepKind::RemovedDominated { side: Side::Right, option: k },
                    });
                }
            }
            cur = next;
            continue 'fixpoint;
        }

        // 3. Reversible options. A left option H is reversible via a right
        //    option K of H with K <= G; it is replaced by K's left options
        //    (or by K itself when K is atomic).
        for (i, &h) in lefts.iter().enumerate() {
            let h_rights: Vec<GameId> = u.right_options(h).to_vec();
            for k in h_rights {
                if u.leq(k, cur) {
                    let mut new_l: Vec<GameId> = lefts
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &x)| x)
                        .collect();
                    let via_atomic = u.is_atomic(k);
                    if via_atomic {
                        new_l.push(k);
                    } else {
                        new_l.extend_from_slice(u.left_options(k));
                    }
                    let next = u.comp(&new_l, &rights);
                    record(trace, Step {
                        from: cur,
                        to: next,
                        kind: StepKind::BypassedReversible {
                            side: Side::Left,
                            option: h,
                            via: k,
                            via_atomic,
                        },
                    });
                    cur = next;
                    continue 'fixpoint;
                }
            }
        }
        for (i, &h) in rights.iter().enumerate() {
            let h_lefts: Vec<GameId> = u.left_options(h).to_vec();
            for k in h_lefts {
                if u.leq(cur, k) {
                    let mut new_r: Vec<GameId> = rights
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &x)| x)
                        .collect();
                    let via_atomic = u.is_atomic(k);
                    if via_atomic {
                        new_r.push(k);
                    } else {
                        new_r.extend_from_slice(u.right_options(k));
                    }
                    let next = u.comp(&lefts, &new_r);
                    record(trace, Step {
                        from: cur,
                        to: next,
                        kind: StepKind::BypassedReversible {
                            side: Side::Right,
                            option: h,
                            via: k,
                            via_atomic,
                        },
                    });
                    cur = next;
                    continue 'fixpoint;
                }
            }
        }

        break 'fixpoint;
    }

    for t in touched {
        set_canon(u, t, cur);
    }
    set_canon(u, cur, cur);
    cur
}

fn canon_id(raw: u32) -> GameId {
    crate::game::game_id_from_raw(raw)
}

fn set_canon(u: &mut Universe, g: GameId, c: GameId) {
    u.canon[g.idx()] = crate::game::game_id_raw(c);
}

/// Decides equivalence and asserts the canonical-form uniqueness theorem:
/// `G` equivalent to `H` iff their canonical forms are the same term.
pub fn assert_unique(u: &mut Universe, g: GameId, h: GameId) -> Result<bool> {
    let eq = u.equivalent(g, h);
    let cg = canonical_form(u, g);
    let ch = canonical_form(u, h);
    if eq != (cg == ch) {
        return Err(Error::Internal(format!(
            "canonical uniqueness violated: equivalent={eq} but canonical ids {:?} vs {:?}",
            cg, ch
        )));
    }
    Ok(eq)
}

/// Removes dominated options from one composite node (options untouched).
pub fn remove_dominated(u: &mut Universe, g: GameId) -> Result<GameId> {
    if u.is_atomic(g) {
        return Err(Error::Precondition("remove_dominated needs a composite game".into()));
    }
    let lefts: Vec<GameId> = u.left_options(g).to_vec();
    let rights: Vec<GameId> = u.right_options(g).to_vec();
    let kept_l: Vec<GameId> = lefts
        .iter()
        .filter(|&&k| !lefts.iter().any(|&h| h != k && u.leq(k, h) && !u.leq(h, k)))
        .copied()
        .collect();
    let kept_r: Vec<GameId> = rights
        .iter()
        .filter(|&&k| !rights.iter().any(|&h| h != k && u.leq(h, k) && !u.leq(k, h)))
        .copied()
        .collect();
    Ok(u.comp(&kept_l, &kept_r))
}

/// Bypasses reversible options of one composite node to a local fixpoint.
pub fn bypass_reversible(u: &mut Universe, g: GameId) -> Result<GameId> {
    if u.is_atomic(g) {
        return Err(Error::Precondition("bypass_reversible needs a composite game".into()));
    }
    let mut cur = g;
    'outer: loop {
        let lefts: Vec<GameId> = u.left_options(cur).to_vec();
        let rights: Vec<GameId> = u.right_options(cur).to_vec();
        for (i, &h) in lefts.iter().enumerate() {
            for k in u.right_options(h).to_vec() {
                if u.leq(k, cur) {
                    let mut new_l: Vec<GameId> = lefts
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &x)| x)
                        .collect();
                    if u.is_atomic(k) {
                        new_l.push(k);
                    } else {
                        new_l.extend_from_slice(u.left_options(k));
                    }
                    cur = u.comp(&new_l, &rights);
                    continue 'outer;
                }
            }
        }
        for (i, &h) in rights.iter().enumerate() {
            for k in u.left_options(h).to_vec() {
                if u.leq(cur, k) {
                    let mut new_r: Vec<GameId> = rights
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &x)| x)
                        .collect();
                    if u.is_atomic(k) {
                        new_r.push(k);
                    } else {
                        new_r.extend_from_slice(u.right_options(k));
                    }
                    cur = u.comp(&lefts, &new_r);
                    continue 'outer;
                }
            }
        }
        return Ok(cur);
    }
}

/// If some option of `g` is equivalent to `g`, returns that option's
/// canonical form; otherwise returns `g` unchanged.
pub fn simplify_passing(u: &mut Universe, g: GameId) -> Result<GameId> {
    if u.is_atomic(g) {
        return Err(Error::Precondition("simplify_passing needs a composite game".into()));
    }
    let opts: Vec<GameId> = u
        .left_options(g)
        .iter()
        .chain(u.right_options(g))
        .copied()
        .collect();
    for h in opts {
        if u.equivalent(h, g) {
            return Ok(canonical_form(u, h));
        }
    }
    Ok(g)
}

/// Replays a simplification trace: each step substitutes `from -> to`
/// throughout the current term. Returns the final term.
pub fn replay_trace(u: &mut Universe, input: GameId, trace: &[Step]) -> GameId {
    let mut cur = input;
    for step in trace {
        cur = substitute(u, cur, step.from, step.to);
    }
    cur
}

fn substitute(u: &mut Universe, g: GameId, from: GameId, to: GameId) -> GameId {
    if g == from {
        return to;
    }
    if u.is_atomic(g) {
        return g;
    }
    let lefts: Vec<GameId> = u.left_options(g).to_vec();
    let rights: Vec<GameId> = u.right_options(g).to_vec();
    let l2: Vec<GameId> = lefts.iter().map(|&o| substitute(u, o, from, to)).collect();
    let r2: Vec<GameId> = rights.iter().map(|&o| substitute(u, o, from, to)).collect();
    if l2 == lefts && r2 == rights {
        g
    } else {
        u.comp(&l2, &r2)
    }
}

impl Step {
    pub fn describe(&self, u: &Universe) -> String {
        use crate::text::print_game;
        match &self.kind {
            StepKind::SimplifiedPassing { option } => {
                format!("passing: {} ~ game, simplified to it", print_game(u, *option))
            }
            StepKind::RemovedDominated { side, option } => {
                format!("dominated {side} option removed: {}", print_game(u, *option))
            }
            StepKind::BypassedReversible { side, option, via, via_atomic } => {
                format!(
                    "reversible {side} option {} bypassed via {}{}",
                    print_game(u, *option),
                    print_game(u, *via),
                    if *via_atomic { " (atomic)" } else { "" }
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{antichain_poset, linear_poset};
    use crate::text::parse_game;

    #[test]
    fn dominated_removal() {
        let mut u = Universe::new(linear_poset(3).unwrap());
        let g = parse_game(&mut u, "{a,T|B}").unwrap();
        let expect = parse_game(&mut u, "{T|B}").unwrap();
        assert_eq!(remove_dominated(&mut u, g).unwrap(), expect);
        assert_eq!(canonical_form(&mut u, g), expect);

        let aa = parse_game(&mut u, "{a|a}").unwrap();
        assert_eq!(remove_dominated(&mut u, aa).unwrap(), aa);
    }

    #[test]
    fn incomparable_options_kept() {
        let mut u = Universe::new(antichain_poset(2).unwrap());
        let g = parse_game(&mut u, "{a,b|B}").unwrap();
        assert_eq!(remove_dominated(&mut u, g).unwrap(), g);
        assert_eq!(canonical_form(&mut u, g), g);
    }

    #[test]
    fn passing_simplification() {
        let mut u = Universe::new(linear_poset(3).unwrap());
        let aa = parse_game(&mut u, "{a|a}").unwrap();
        let a = u.atom("a").unwrap();
        assert_eq!(simplify_passing(&mut u, aa).unwrap(), a);
        assert_eq!(canonical_form(&mut u, aa), a);

        let star = parse_game(&mut u, "{T|B}").unwrap();
        assert_eq!(simplify_passing(&mut u, star).unwrap(), star);

        let nested = parse_game(&mut u, "{{a|a}|{a|a}}").unwrap();
        assert_eq!(canonical_form(&mut u, nested), a);
    }

    #[test]
    fn bypass_example_from_fork_poset() {
        // J = {b|B}, K = {T|a}, H = {T|J}, G = {K,H|B}; canonical(G) = {K,b|B}
        let mut u = Universe::new(antichain_poset(2).unwrap());
        let g = parse_game(&mut u, "{{T|a},{T|{b|B}}|B}").unwrap();
        let expect = parse_game(&mut u, "{{T|a},b|B}").unwrap();
        assert!(u.is_monotone(g));
        assert_eq!(canonical_form(&mut u, g), expect);
        assert!(u.is_passable(expect));
        assert!(!u.is_monotone(expect));
        // the canonical form is a fixpoint
        assert_eq!(canonical_form(&mut u, expect), expect);
    }

    #[test]
    fn always_reversible_left_option() {
        // {T|{a|B}} as a left option reverses out through {a|B}
        let mut u = Universe::new(linear_poset(3).unwrap());
        let g = parse_game(&mut u, "{{T|{a|B}}|B}").unwrap();
        let expect = parse_game(&mut u, "{a|B}").unwrap();
        assert_eq!(canonical_form(&mut u, g), expect);
    }

    #[test]
    fn no_reversible_options_unchanged() {
        let mut u = Universe::new(linear_poset(2).unwrap());
        let star = parse_game(&mut u, "{T|B}").unwrap();
        assert_eq!(bypass_reversible(&mut u, star).unwrap(), star);
    }

    #[test]
    fn canonical_is_idempotent_and_atomic_fixed() {
        let mut u = Universe::new(linear_poset(3).unwrap());
        let a = u.atom("a").unwrap();
        assert_eq!(canonical_form(&mut u, a), a);
        let g = parse_game(&mut u, "{{a|a},T|{B|B}}").unwrap();
        let c = canonical_form(&mut u, g);
        assert_eq!(canonical_form(&mut u, c), c);
        assert!(u.equivalent(g, c));
    }

    #[test]
    fn uniqueness_assertions() {
        let mut u = Universe::new(linear_poset(3).unwrap());
        let a = u.atom("a").unwrap();
        let aa = parse_game(&mut u, "{a|a}").unwrap();
        assert!(assert_unique(&mut u, a, aa).unwrap());

        let mut ub = Universe::new(linear_poset(2).unwrap());
        let t = ub.atom("T").unwrap();
        let star = parse_game(&mut ub, "{T|B}").unwrap();
        assert!(!assert_unique(&mut ub, t, star).unwrap());

        let g = parse_game(&mut u, "{{T|a},a|B,{a|B}}").unwrap();
        let c = canonical_form(&mut u, g);
        assert!(assert_unique(&mut u, g, c).unwrap());
    }

    #[test]
    fn trace_replay_reproduces_output() {
        let mut u = Universe::new(antichain_poset(2).unwrap());
        let g = parse_game(&mut u, "{{T|a},{T|{b|B}},a|B,T}").unwrap();
        let (c, trace) = canonical_form_traced(&mut u, g);
        assert!(!trace.is_empty());
        let replayed = replay_trace(&mut u, g, &trace);
        assert_eq!(replayed, c);
    }

    #[test]
    fn linear_canonical_passable_is_monotone() {
        let mut u = Universe::new(linear_poset(4).unwrap());
        for s in ["{b|a}", "{T|{a|B}}", "{{T|b}|{b|a}}", "{b,{T|a}|B}"] {
            let g = parse_game(&mut u, s).unwrap();
            let c = canonical_form(&mut u, g);
            if u.is_passable(c) {
                assert!(u.is_monotone(c), "canonical passable over a chain must be monotone: {s}");
            }
        }
    }
}
