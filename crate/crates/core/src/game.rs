//! Interned game terms over a poset and the order relations on them.
//!
//! A [`Universe`] owns one poset together with a hash-consed store of game
//! terms. Structurally equal games always receive the same [`GameId`], which
//! makes equality O(1) and lets the mutually recursive relations `<=` and
//! `<|` memoize on id pairs. The relation caches are keyed so that every
//! entry involving an id is reachable from that id, which allows cheap
//! rollback of speculative term creation (see [`Universe::savepoint`]).

use hashbrown::hash_table::HashTable;
use rustc_hash::FxHashMap;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::poset::{AtomId, Poset};

/// Opaque handle to an interned game term within one universe.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GameId(u32);

impl GameId {
    #[inline]
    pub(crate) fn idx(self) -> usize {
        self.0 as usize
    }
}

#[inline]
pub(crate) fn game_id_from_raw(raw: u32) -> GameId {
    GameId(raw)
}

#[inline]
pub(crate) fn game_id_raw(g: GameId) -> u32 {
    g.0
}

/// One game term: an atom, or non-empty sorted option sets for both players.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Atom(AtomId),
    Comp(Box<[GameId]>, Box<[GameId]>),
}

fn hash_term(t: &Term) -> u64 {
    let mut h = rustc_hash::FxHasher::default();
    t.hash(&mut h);
    h.finish()
}

#[inline]
fn pair_key(g: GameId, h: GameId) -> (usize, u64) {
    let (hi, lo, swapped) = if g.0 >= h.0 { (g.0, h.0, 0u64) } else { (h.0, g.0, 1u64) };
    (hi as usize, (lo as u64) << 1 | swapped)
}

const UNKNOWN: u8 = 0;
const YES: u8 = 1;
const NO: u8 = 2;

#[inline]
fn flag(b: bool) -> u8 {
    if b {
        YES
    } else {
        NO
    }
}

/// Watermark for [`Universe::rollback`].
#[derive(Copy, Clone, Debug)]
pub struct Savepoint(usize);

#[inline]
pub(crate) fn savepoint_mark(sp: &Savepoint) -> usize {
    sp.0
}

/// Interning store, relation caches and classification caches for games over
/// one poset.
///
/// All operations are deterministic. The universe is `Send`; share it across
/// tasks behind a mutex when concurrent access is needed.
pub struct Universe {
    poset: Poset,
    terms: Vec<Term>,
    term_hash: Vec<u64>,
    intern: HashTable<u32>,
    depth: Vec<u32>,
    // Relation caches indexed by the larger id of the pair.
    leq_cache: Vec<FxHashMap<u64, bool>>,
    tri_cache: Vec<FxHashMap<u64, bool>>,
    // Per-id classification caches.
    passable: Vec<u8>,
    monotone: Vec<u8>,
    semi_monotone: Vec<u8>,
    pub(crate) canon: Vec<u32>,
}

impl Universe {
    pub fn new(poset: Poset) -> Self {
        Universe {
            poset,
            terms: Vec::new(),
            term_hash: Vec::new(),
            intern: HashTable::new(),
            depth: Vec::new(),
            leq_cache: Vec::new(),
            tri_cache: Vec::new(),
            passable: Vec::new(),
            monotone: Vec::new(),
            semi_monotone: Vec::new(),
            canon: Vec::new(),
        }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// Number of distinct interned terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn term(&self, g: GameId) -> &Term {
        &self.terms[g.idx()]
    }

    pub fn is_atomic(&self, g: GameId) -> bool {
        matches!(self.terms[g.idx()], Term::Atom(_))
    }

    pub fn atom_of(&self, g: GameId) -> Option<AtomId> {
        match self.terms[g.idx()] {
            Term::Atom(a) => Some(a),
            Term::Comp(..) => None,
        }
    }

    /// Left options; empty for atomic games.
    pub fn left_options(&self, g: GameId) -> &[GameId] {
        match &self.terms[g.idx()] {
            Term::Atom(_) => &[],
            Term::Comp(l, _) => l,
        }
    }

    /// Right options; empty for atomic games.
    pub fn right_options(&self, g: GameId) -> &[GameId] {
        match &self.terms[g.idx()] {
            Term::Atom(_) => &[],
            Term::Comp(_, r) => r,
        }
    }

    /// Depth: 0 for atoms, 1 + max option depth otherwise.
    pub fn depth(&self, g: GameId) -> u32 {
        self.depth[g.idx()]
    }

    fn intern_term(&mut self, t: Term) -> GameId {
        let h = hash_term(&t);
        if let Some(&id) = self.intern.find(h, |&id| self.terms[id as usize] == t) {
            return GameId(id);
        }
        let id = self.terms.len() as u32;
        let d = match &t {
            Term::Atom(_) => 0,
            Term::Comp(l, r) => {
                1 + l
                    .iter()
                    .chain(r.iter())
                    .map(|&o| self.depth[o.idx()])
                    .max()
                    .unwrap()
            }
        };
        self.terms.push(t);
        self.term_hash.push(h);
        self.depth.push(d);
        self.passable.push(UNKNOWN);
        self.monotone.push(UNKNOWN);
        self.semi_monotone.push(UNKNOWN);
        self.canon.push(u32::MAX);
        let hashes = &self.term_hash;
        self.intern
            .insert_unique(h, id, |&i| hashes[i as usize]);
        GameId(id)
    }

    /// The atomic game carrying one outcome.
    pub fn atomic(&mut self, a: AtomId) -> Result<GameId> {
        if a >= self.poset.len() {
            return Err(Error::InvalidArgument(format!(
                "atom index {a} out of range for poset {}",
                self.poset.name()
            )));
        }
        Ok(self.intern_term(Term::Atom(a)))
    }

    /// Atomic game by atom name.
    pub fn atom(&mut self, name: &str) -> Result<GameId> {
        let a = self.poset.atom_index(name).ok_or_else(|| {
            Error::InvalidArgument(format!("unknown atom {name:?} in poset {}", self.poset.name()))
        })?;
        self.atomic(a)
    }

    /// Shorthand for the atomic bottom game; requires the poset to have one.
    pub fn bottom_game(&mut self) -> Result<GameId> {
        let b = self
            .poset
            .bottom()
            .ok_or_else(|| Error::UnsupportedPoset(format!("{} has no bottom", self.poset.name())))?;
        self.atomic(b)
    }

    /// Shorthand for the atomic top game; requires the poset to have one.
    pub fn top_game(&mut self) -> Result<GameId> {
        let t = self
            .poset
            .top()
            .ok_or_else(|| Error::UnsupportedPoset(format!("{} has no top", self.poset.name())))?;
        self.atomic(t)
    }

    /// Composite game from option sets. Both sets must be non-empty; they are
    /// sorted and deduplicated so structurally equal games intern equal.
    pub fn compose(&mut self, lefts: &[GameId], rights: &[GameId]) -> Result<GameId> {
        if lefts.is_empty() || rights.is_empty() {
            return Err(Error::InvalidArgument(
                "composite games need at least one option per side".into(),
            ));
        }
        Ok(self.comp(lefts, rights))
    }

    pub(crate) fn comp(&mut self, lefts: &[GameId], rights: &[GameId]) -> GameId {
        debug_assert!(!lefts.is_empty() && !rights.is_empty());
        let mut l = lefts.to_vec();
        let mut r = rights.to_vec();
        l.sort_unstable();
        l.dedup();
        r.sort_unstable();
        r.dedup();
        self.intern_term(Term::Comp(l.into_boxed_slice(), r.into_boxed_slice()))
    }

    // ------------------------------------------------------------------
    // Order relations
    // ------------------------------------------------------------------

    #[inline]
    fn cache_get(cache: &[FxHashMap<u64, bool>], g: GameId, h: GameId) -> Option<bool> {
        let (hi, key) = pair_key(g, h);
        cache.get(hi).and_then(|m| m.get(&key).copied())
    }

    #[inline]
    fn cache_put(cache: &mut Vec<FxHashMap<u64, bool>>, g: GameId, h: GameId, v: bool) {
        let (hi, key) = pair_key(g, h);
        if cache.len() <= hi {
            cache.resize_with(hi + 1, FxHashMap::default);
        }
        cache[hi].insert(key, v);
    }

    /// The order `G <= H`: Left likes H at least as much as G, moving either
    /// first or second.
    pub fn leq(&mut self, g: GameId, h: GameId) -> bool {
        if g == h {
            // reflexive; also keeps the hot path cheap
            return true;
        }
        if let Some(v) = Self::cache_get(&self.leq_cache, g, h) {
            return v;
        }
        let v = self.leq_uncached(g, h);
        Self::cache_put(&mut self.leq_cache, g, h, v);
        v
    }

    fn leq_uncached(&mut self, g: GameId, h: GameId) -> bool {
        if let (Term::Atom(a), Term::Atom(b)) = (&self.terms[g.idx()], &self.terms[h.idx()]) {
            return self.poset.leq(*a, *b);
        }
        let lefts: Vec<GameId> = self.left_options(g).to_vec();
        for gl in lefts {
            if !self.tri(gl, h) {
                return false;
            }
        }
        let rights: Vec<GameId> = self.right_options(h).to_vec();
        for hr in rights {
            if !self.tri(g, hr) {
                return false;
            }
        }
        if self.is_atomic(g) || self.is_atomic(h) {
            return self.tri(g, h);
        }
        true
    }

    /// The relation `G <| H`: Left moving first in H does at least as well as
    /// Left moving second in G.
    pub fn tri(&mut self, g: GameId, h: GameId) -> bool {
        if let Some(v) = Self::cache_get(&self.tri_cache, g, h) {
            return v;
        }
        let v = self.tri_uncached(g, h);
        Self::cache_put(&mut self.tri_cache, g, h, v);
        v
    }

    fn tri_uncached(&mut self, g: GameId, h: GameId) -> bool {
        if let (Term::Atom(a), Term::Atom(b)) = (&self.terms[g.idx()], &self.terms[h.idx()]) {
            return self.poset.leq(*a, *b);
        }
        let rights: Vec<GameId> = self.right_options(g).to_vec();
        for gr in rights {
            if self.leq(gr, h) {
                return true;
            }
        }
        let lefts: Vec<GameId> = self.left_options(h).to_vec();
        for hl in lefts {
            if self.leq(g, hl) {
                return true;
            }
        }
        false
    }

    /// `G` and `H` denote the same value.
    pub fn equivalent(&mut self, g: GameId, h: GameId) -> bool {
        g == h || (self.leq(g, h) && self.leq(h, g))
    }

    // ------------------------------------------------------------------
    // Classification predicates
    // ------------------------------------------------------------------

    /// `G <| G`: neither player would benefit from passing at the root.
    pub fn is_locally_passable(&mut self, g: GameId) -> bool {
        self.tri(g, g)
    }

    /// Locally passable at every position.
    pub fn is_passable(&mut self, g: GameId) -> bool {
        match self.passable[g.idx()] {
            YES => return true,
            NO => return false,
            _ => {}
        }
        let mut v = self.tri(g, g);
        if v {
            let opts: Vec<GameId> = self
                .left_options(g)
                .iter()
                .chain(self.right_options(g))
                .copied()
                .collect();
            v = opts.into_iter().all(|o| self.is_passable(o));
        }
        self.passable[g.idx()] = flag(v);
        v
    }

    /// A left option `H` of `G` is good when `G <= H`; a right option `K`
    /// when `K <= G`. Monotone: every option good, hereditarily.
    pub fn is_monotone(&mut self, g: GameId) -> bool {
        match self.monotone[g.idx()] {
            YES => return true,
            NO => return false,
            _ => {}
        }
        let lefts: Vec<GameId> = self.left_options(g).to_vec();
        let rights: Vec<GameId> = self.right_options(g).to_vec();
        let mut v = lefts.iter().all(|&h| self.leq(g, h))
            && rights.iter().all(|&k| self.leq(k, g));
        if v {
            v = lefts
                .into_iter()
                .chain(rights)
                .all(|o| self.is_monotone(o));
        }
        self.monotone[g.idx()] = flag(v);
        v
    }

    /// At least one good option per side (atoms count), hereditarily.
    pub fn is_semi_monotone(&mut self, g: GameId) -> bool {
        match self.semi_monotone[g.idx()] {
            YES => return true,
            NO => return false,
            _ => {}
        }
        let lefts: Vec<GameId> = self.left_options(g).to_vec();
        let rights: Vec<GameId> = self.right_options(g).to_vec();
        let mut v = self.is_atomic(g)
            || (lefts.iter().any(|&h| self.leq(g, h))
                && rights.iter().any(|&k| self.leq(k, g)));
        if v {
            v = lefts
                .into_iter()
                .chain(rights)
                .all(|o| self.is_semi_monotone(o));
        }
        self.semi_monotone[g.idx()] = flag(v);
        v
    }

    // ------------------------------------------------------------------
    // Lattice structure
    // ------------------------------------------------------------------

    /// Least upper bound of a set of games; the empty join is bottom.
    ///
    /// Uses the construction `{H^L, K^L | {H, K | bottom}}` generalized to any
    /// number of games, after replacing each atomic input `a` by `{a|a}`.
    pub fn join(&mut self, games: &[GameId]) -> Result<GameId> {
        let bot = self.bottom_game()?;
        if games.is_empty() {
            return Ok(bot);
        }
        let norm: Vec<GameId> = games
            .iter()
            .map(|&g| self.composite_form(g))
            .collect();
        let mut lefts: Vec<GameId> = Vec::new();
        for &g in &norm {
            lefts.extend_from_slice(self.left_options(g));
        }
        let mut inner_lefts = norm.clone();
        inner_lefts.sort_unstable();
        let inner = self.comp(&inner_lefts, &[bot]);
        Ok(self.comp(&lefts, &[inner]))
    }

    /// Greatest lower bound; dual to [`Universe::join`], needs a top atom.
    pub fn meet(&mut self, games: &[GameId]) -> Result<GameId> {
        let top = self.top_game()?;
        if games.is_empty() {
            return Ok(top);
        }
        let norm: Vec<GameId> = games
            .iter()
            .map(|&g| self.composite_form(g))
            .collect();
        let mut rights: Vec<GameId> = Vec::new();
        for &g in &norm {
            rights.extend_from_slice(self.right_options(g));
        }
        let inner = self.comp(&[top], &norm);
        Ok(self.comp(&[inner], &rights))
    }

    /// `a` becomes `{a|a}`; composite games are unchanged.
    pub fn composite_form(&mut self, g: GameId) -> GameId {
        if self.is_atomic(g) {
            self.comp(&[g], &[g])
        } else {
            g
        }
    }

    // ------------------------------------------------------------------
    // Reasoning helpers
    // ------------------------------------------------------------------

    /// For a passable composite `G` and atom `a`, decides `G <= a`. When all
    /// left options satisfy `G^L <= a`, the answer must be true; that
    /// implication is asserted.
    pub fn passable_atom_bound(&mut self, g: GameId, a: AtomId) -> Result<bool> {
        if self.is_atomic(g) {
            return Err(Error::Precondition("passable_atom_bound needs a composite game".into()));
        }
        if !self.is_passable(g) {
            return Err(Error::Precondition("passable_atom_bound needs a passable game".into()));
        }
        let ga = self.atomic(a)?;
        let result = self.leq(g, ga);
        let lefts: Vec<GameId> = self.left_options(g).to_vec();
        let all_lefts_bounded = lefts.into_iter().all(|l| self.leq(l, ga));
        if all_lefts_bounded && !result {
            return Err(Error::Internal(format!(
                "passable composite with all left options <= {} is not <= it",
                self.poset.atom_name(a)
            )));
        }
        Ok(result)
    }

    /// For passable games over a linear poset, at least one of `G <| H` and
    /// `H <= G` must hold. Returns which do.
    pub fn linear_totality(&mut self, g: GameId, h: GameId) -> Result<LinearWitness> {
        if !self.poset.is_linear() {
            return Err(Error::Precondition("linear_totality needs a linearly ordered poset".into()));
        }
        if !self.is_passable(g) || !self.is_passable(h) {
            return Err(Error::Precondition("linear_totality needs passable games".into()));
        }
        let tri_gh = self.tri(g, h);
        let leq_hg = self.leq(h, g);
        if !tri_gh && !leq_hg {
            return Err(Error::Internal(
                "neither G <| H nor H <= G held for passable games over a linear poset".into(),
            ));
        }
        Ok(LinearWitness { tri_gh, leq_hg })
    }

    // ------------------------------------------------------------------
    // Term graph queries
    // ------------------------------------------------------------------

    /// All positions of `g` (itself, options, options of options, ...).
    pub fn positions(&self, g: GameId) -> Vec<GameId> {
        let mut seen = vec![g];
        let mut stack = vec![g];
        while let Some(x) = stack.pop() {
            for &o in self
                .left_options(x)
                .iter()
                .chain(self.right_options(x))
            {
                if !seen.contains(&o) {
                    seen.push(o);
                    stack.push(o);
                }
            }
        }
        seen
    }

    /// Number of distinct positions in `g`.
    pub fn position_count(&self, g: GameId) -> usize {
        self.positions(g).len()
    }

    /// Structural comparison used for stable printing: atoms before
    /// composites, atoms by index, composites lexicographically by their
    /// option lists.
    pub fn structural_cmp(&self, a: GameId, b: GameId) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if a == b {
            return Ordering::Equal;
        }
        match (&self.terms[a.idx()], &self.terms[b.idx()]) {
            (Term::Atom(x), Term::Atom(y)) => x.cmp(y),
            (Term::Atom(_), Term::Comp(..)) => Ordering::Less,
            (Term::Comp(..), Term::Atom(_)) => Ordering::Greater,
            (Term::Comp(l1, r1), Term::Comp(l2, r2)) => {
                let mut ord = self.list_cmp(l1, l2);
                if ord == Ordering::Equal {
                    ord = self.list_cmp(r1, r2);
                }
                ord
            }
        }
    }

    fn list_cmp(&self, xs: &[GameId], ys: &[GameId]) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        for (x, y) in xs.iter().zip(ys.iter()) {
            let ord = self.structural_cmp(*x, *y);
            if ord != Ordering::Equal {
                return ord;
            }
        }
        xs.len().cmp(&ys.len())
    }

    // ------------------------------------------------------------------
    // Speculative construction
    // ------------------------------------------------------------------

    /// Watermark for rolling back speculative term creation. All caches are
    /// keyed so that entries touching terms above the watermark disappear
    /// with them.
    pub fn savepoint(&self) -> Savepoint {
        Savepoint(self.terms.len())
    }

    /// Discards every term created since the savepoint together with all
    /// cache entries that mention them.
    pub fn rollback(&mut self, sp: Savepoint) {
        let mark = sp.0;
        for id in mark..self.terms.len() {
            let h = self.term_hash[id];
            if let Ok(entry) = self.intern.find_entry(h, |&i| i as usize == id) {
                entry.remove();
            }
        }
        self.terms.truncate(mark);
        self.term_hash.truncate(mark);
        self.depth.truncate(mark);
        self.passable.truncate(mark);
        self.monotone.truncate(mark);
        self.semi_monotone.truncate(mark);
        self.canon.truncate(mark);
        if self.leq_cache.len() > mark {
            self.leq_cache.truncate(mark);
        }
        if self.tri_cache.len() > mark {
            self.tri_cache.truncate(mark);
        }
    }

    /// Drops all relation and classification caches (test aid).
    pub fn clear_caches(&mut self) {
        self.leq_cache.clear();
        self.tri_cache.clear();
        for v in [&mut self.passable, &mut self.monotone, &mut self.semi_monotone] {
            v.iter_mut().for_each(|x| *x = UNKNOWN);
        }
        self.canon.iter_mut().for_each(|x| *x = u32::MAX);
    }
}

/// Which disjuncts of the linear totality lemma hold.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct LinearWitness {
    /// `G <| H`
    pub tri_gh: bool,
    /// `H <= G`
    pub leq_hg: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{antichain_poset, linear_poset};

    fn bool_universe() -> Universe {
        Universe::new(linear_poset(2).unwrap())
    }

    #[test]
    fn universe_is_send() {
        fn require_send<T: Send>() {}
        require_send::<Universe>();
    }

    #[test]
    fn interning_is_structural() {
        let mut u = bool_universe();
        let b = u.atom("B").unwrap();
        let t = u.atom("T").unwrap();
        let b2 = u.atom("B").unwrap();
        assert_eq!(b, b2);
        let star1 = u.compose(&[t], &[b]).unwrap();
        let star2 = u.compose(&[t, t], &[b]).unwrap();
        assert_eq!(star1, star2);
        assert_eq!(u.depth(star1), 1);
        assert!(u.compose(&[], &[b]).is_err());
    }

    #[test]
    fn atomic_order_and_star() {
        let mut u = bool_universe();
        let b = u.atom("B").unwrap();
        let t = u.atom("T").unwrap();
        let star = u.compose(&[t], &[b]).unwrap();
        // top is not below star: Left moving second in T beats first in star
        assert!(!u.leq(t, star));
        assert!(u.leq(star, t));
        assert!(u.leq(b, star));
        // bottom is below and tri-below everything
        assert!(u.tri(b, star) && u.leq(b, star));
        assert!(u.tri(star, t));
    }

    #[test]
    fn dead_move_equivalence() {
        let mut u = Universe::new(linear_poset(3).unwrap());
        let a = u.atom("a").unwrap();
        let aa = u.compose(&[a], &[a]).unwrap();
        assert!(u.leq(a, aa));
        assert!(u.leq(aa, a));
        assert!(u.equivalent(a, aa));
        // nested dead moves
        let aaaa = u.compose(&[aa], &[aa]).unwrap();
        assert!(u.equivalent(a, aaaa));
    }

    #[test]
    fn reflexivity_and_transitivity_samples() {
        let mut u = Universe::new(linear_poset(3).unwrap());
        let names = ["B", "a", "T"];
        let atoms: Vec<GameId> = names.iter().map(|n| u.atom(n).unwrap()).collect();
        let mut games = atoms.clone();
        for &x in &atoms {
            for &y in &atoms {
                games.push(u.compose(&[x], &[y]).unwrap());
            }
        }
        for &g in &games {
            assert!(u.leq(g, g), "reflexivity");
        }
        for &g in &games {
            for &h in &games {
                for &k in &games {
                    if u.tri(g, h) && u.leq(h, k) {
                        assert!(u.tri(g, k));
                    }
                    if u.leq(g, h) && u.tri(h, k) {
                        assert!(u.tri(g, k));
                    }
                    if u.leq(g, h) && u.leq(h, k) {
                        assert!(u.leq(g, k));
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_not_monotone_example_core_relations() {
        // fork poset {B, a, b, T}
        let mut u = Universe::new(antichain_poset(2).unwrap());
        let bot = u.atom("B").unwrap();
        let a = u.atom("a").unwrap();
        let b = u.atom("b").unwrap();
        let t = u.atom("T").unwrap();
        let k = u.compose(&[t], &[a]).unwrap(); // {T|a}
        let gp = u.compose(&[k, b], &[bot]).unwrap(); // {{T|a},b|B}
        assert!(!u.leq(gp, b), "G' is not below b");
        assert!(u.is_passable(gp));
        assert!(!u.is_monotone(gp));
    }

    #[test]
    fn passable_and_monotone_basics() {
        let mut u = bool_universe();
        let b = u.atom("B").unwrap();
        let t = u.atom("T").unwrap();
        let star = u.compose(&[t], &[b]).unwrap();
        assert!(u.is_monotone(t) && u.is_monotone(b) && u.is_monotone(star));
        let anti = u.compose(&[b], &[t]).unwrap(); // {B|T}
        assert!(!u.is_passable(anti));
        assert!(!u.is_monotone(anti));
        let star_star = u.compose(&[star], &[star]).unwrap();
        assert!(!u.is_monotone(star_star));
        // monotone implies passable
        assert!(u.is_passable(star));
        // atoms are passable and semi-monotone
        assert!(u.is_passable(b) && u.is_semi_monotone(b));
    }

    #[test]
    fn fundamental_example_is_passable_not_monotone() {
        let mut u = Universe::new(antichain_poset(2).unwrap());
        let a = u.atom("a").unwrap();
        let b = u.atom("b").unwrap();
        let g = u.compose(&[a, b], &[a]).unwrap();
        assert!(u.is_passable(g));
        assert!(!u.is_monotone(g));
        assert!(!u.is_semi_monotone(g)); // no good left option
    }

    #[test]
    fn join_examples() {
        let mut u = Universe::new(antichain_poset(2).unwrap());
        let bot = u.atom("B").unwrap();
        let a = u.atom("a").unwrap();
        let b = u.atom("b").unwrap();
        assert_eq!(u.join(&[]).unwrap(), bot);
        // join of a singleton is equivalent to it
        let j1 = u.join(&[a]).unwrap();
        assert!(u.equivalent(j1, a));
        // join {a,b} is equivalent to {a,b | {a,b|B}}
        let j = u.join(&[a, b]).unwrap();
        let inner = u.compose(&[a, b], &[bot]).unwrap();
        let expect = u.compose(&[a, b], &[inner]).unwrap();
        assert!(u.equivalent(j, expect));
        // and it is an upper bound below other upper bounds
        assert!(u.leq(a, j) && u.leq(b, j));
        let top = u.atom("T").unwrap();
        assert!(u.leq(j, top));
        // meet of the empty set is top
        assert_eq!(u.meet(&[]).unwrap(), top);
        let m = u.meet(&[a, b]).unwrap();
        assert!(u.leq(m, a) && u.leq(m, b));
        assert!(u.leq(bot, m));
    }

    #[test]
    fn join_requires_bottom() {
        // a two-element antichain with no bounds at all
        let p = crate::poset::Poset::new("pair", vec!["x".into(), "y".into()], &[]).unwrap();
        let mut u = Universe::new(p);
        let x = u.atom("x").unwrap();
        assert!(matches!(u.join(&[x]), Err(Error::UnsupportedPoset(_))));
    }

    #[test]
    fn passable_examples() {
        let mut u = Universe::new(antichain_poset(2).unwrap());
        let a = u.atom("a").unwrap();
        let b = u.atom("b").unwrap();
        let g = u.compose(&[a, b], &[a]).unwrap();
        assert!(u.is_passable(g));
        assert!(u.is_passable(a));

        let mut ub = bool_universe();
        let bb = ub.atom("B").unwrap();
        let tt = ub.atom("T").unwrap();
        let anti = ub.compose(&[bb], &[tt]).unwrap();
        assert!(!ub.is_passable(anti));
    }

    #[test]
    fn passable_atom_bound_examples() {
        let mut u = Universe::new(antichain_poset(2).unwrap());
        let a = u.atom("a").unwrap();
        let b = u.atom("b").unwrap();
        let bot = u.atom("B").unwrap();
        let t = u.atom("T").unwrap();
        let top_ix = u.poset().atom_index("T").unwrap();
        let a_ix = u.poset().atom_index("a").unwrap();

        let g = u.compose(&[a, b], &[a]).unwrap();
        assert!(u.passable_atom_bound(g, top_ix).unwrap());

        let aa = u.compose(&[a], &[a]).unwrap();
        assert!(u.passable_atom_bound(aa, a_ix).unwrap());

        let g2 = u.compose(&[t, a], &[bot]).unwrap();
        assert!(u.is_passable(g2));
        assert!(!u.passable_atom_bound(g2, a_ix).unwrap());

        // non-passable input refused
        let mut ub = bool_universe();
        let bb = ub.atom("B").unwrap();
        let tt = ub.atom("T").unwrap();
        let anti = ub.compose(&[bb], &[tt]).unwrap();
        let ix = ub.poset().atom_index("T").unwrap();
        assert!(matches!(
            ub.passable_atom_bound(anti, ix),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn linear_totality_examples() {
        let mut u = bool_universe();
        let b = u.atom("B").unwrap();
        let t = u.atom("T").unwrap();
        let star = u.compose(&[t], &[b]).unwrap();
        let w = u.linear_totality(star, star).unwrap();
        assert!(w.tri_gh && w.leq_hg);
        let w2 = u.linear_totality(t, b).unwrap();
        assert!(!w2.tri_gh && w2.leq_hg);

        // refuses non-passable H over Lin3 (the counterexample pair)
        let mut u3 = Universe::new(linear_poset(3).unwrap());
        let a = u3.atom("a").unwrap();
        let bb = u3.atom("B").unwrap();
        let tt = u3.atom("T").unwrap();
        let h = u3.compose(&[bb], &[tt]).unwrap();
        assert!(matches!(u3.linear_totality(a, h), Err(Error::Precondition(_))));
        // and indeed neither disjunct holds for that pair
        assert!(!u3.tri(a, h) && !u3.leq(h, a));

        // non-linear poset refused
        let mut ua = Universe::new(antichain_poset(2).unwrap());
        let x = ua.atom("a").unwrap();
        assert!(matches!(ua.linear_totality(x, x), Err(Error::Precondition(_))));
    }

    #[test]
    fn gift_horse_and_more_options() {
        let mut u = Universe::new(linear_poset(3).unwrap());
        let b = u.atom("B").unwrap();
        let a = u.atom("a").unwrap();
        let t = u.atom("T").unwrap();
        let g = u.compose(&[a], &[b]).unwrap();
        // more options: adding a left option can only help Left
        let g_plus = u.compose(&[a, t], &[b]).unwrap();
        assert!(u.leq(g, g_plus));
        // gift horse: H <| G iff G == {H, G^L | G^R}
        for h in [b, a, t, g] {
            let extended = u.compose(&[h, a], &[b]).unwrap();
            assert_eq!(u.tri(h, g), u.equivalent(g, extended), "gift horse for {h:?}");
        }
    }

    #[test]
    fn rollback_discards_terms_and_caches() {
        let mut u = bool_universe();
        let b = u.atom("B").unwrap();
        let t = u.atom("T").unwrap();
        let before = u.term_count();
        let sp = u.savepoint();
        let star = u.compose(&[t], &[b]).unwrap();
        assert!(u.leq(b, star));
        u.rollback(sp);
        assert_eq!(u.term_count(), before);
        // re-creating the term yields a fresh id at the same slot
        let star2 = u.compose(&[t], &[b]).unwrap();
        assert_eq!(star2.idx(), before);
        assert!(u.leq(b, star2));
    }

    #[test]
    fn cache_coherence_small_games() {
        let mut u = Universe::new(linear_poset(3).unwrap());
        let b = u.atom("B").unwrap();
        let a = u.atom("a").unwrap();
        let t = u.atom("T").unwrap();
        let mut games = vec![b, a, t];
        for &x in &[b, a, t] {
            for &y in &[b, a, t] {
                games.push(u.compose(&[x], &[y]).unwrap());
            }
        }
        let g1 = u.compose(&[games[5], a], &[b]).unwrap();
        games.push(g1);
        let mut with_cache = Vec::new();
        for &g in &games {
            for &h in &games {
                with_cache.push((u.leq(g, h), u.tri(g, h)));
            }
        }
        u.clear_caches();
        let mut idx = 0;
        for &g in &games {
            for &h in &games {
                assert_eq!(with_cache[idx], (u.leq(g, h), u.tri(g, h)));
                idx += 1;
            }
        }
    }
}
