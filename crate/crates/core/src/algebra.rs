//! Operations on games: sum, opposite, map, fused sum-map, the lambda/rho
//! payoffs with copy-cat verification, contextual-order probes, and values of
//! monotone set coloring games.
//!
//! Sums cross posets, so these functions move terms between universes. Each
//! operation takes explicit memo tables keyed by id pairs; results are
//! deterministic and independent of call order.

use rustc_hash::FxHashMap;

use crate::canonical::canonical_form;
use crate::error::{Error, Result};
use crate::game::{GameId, Universe};
use crate::poset::{monotone_map_check, opposite_poset, product_atom, product_poset, AtomId, Poset};

/// A monotone function between posets, given by a total atom table.
#[derive(Clone, Debug)]
pub struct MonotoneMap {
    src_hash: u64,
    dst_hash: u64,
    table: Vec<AtomId>,
}

impl MonotoneMap {
    pub fn new(src: &Poset, dst: &Poset, table: Vec<AtomId>) -> Result<Self> {
        if !monotone_map_check(src, dst, &table)? {
            return Err(Error::InvalidArgument("atom map is not monotone".into()));
        }
        Ok(MonotoneMap {
            src_hash: src.content_hash(),
            dst_hash: dst.content_hash(),
            table,
        })
    }

    pub fn identity(p: &Poset) -> Self {
        MonotoneMap {
            src_hash: p.content_hash(),
            dst_hash: p.content_hash(),
            table: (0..p.len()).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, a: AtomId) -> AtomId {
        self.table[a]
    }

    pub fn table(&self) -> &[AtomId] {
        &self.table
    }

    /// `g` after `f` (first `f`, then `g`).
    pub fn compose(g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap> {
        if f.dst_hash != g.src_hash {
            return Err(Error::InvalidArgument("map composition: posets do not line up".into()));
        }
        Ok(MonotoneMap {
            src_hash: f.src_hash,
            dst_hash: g.dst_hash,
            table: f.table.iter().map(|&a| g.table[a]).collect(),
        })
    }
}

/// A monotone function of two arguments, `f : A x B -> C`.
#[derive(Clone, Debug)]
pub struct BinaryMap {
    a_hash: u64,
    b_hash: u64,
    c_hash: u64,
    b_len: usize,
    table: Vec<AtomId>,
}

impl BinaryMap {
    pub fn new(a: &Poset, b: &Poset, c: &Poset, table: Vec<AtomId>) -> Result<Self> {
        if table.len() != a.len() * b.len() {
            return Err(Error::InvalidArgument("binary map table has the wrong size".into()));
        }
        for &t in &table {
            if t >= c.len() {
                return Err(Error::InvalidArgument("binary map targets unknown atom".into()));
            }
        }
        for a1 in 0..a.len() {
            for a2 in 0..a.len() {
                if !a.leq(a1, a2) {
                    continue;
                }
                for b1 in 0..b.len() {
                    for b2 in 0..b.len() {
                        if b.leq(b1, b2)
                            && !c.leq(table[a1 * b.len() + b1], table[a2 * b.len() + b2])
                        {
                            return Err(Error::InvalidArgument(
                                "binary atom map is not monotone".into(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(BinaryMap {
            a_hash: a.content_hash(),
            b_hash: b.content_hash(),
            c_hash: c.content_hash(),
            b_len: b.len(),
            table,
        })
    }

    #[inline]
    pub fn apply(&self, a: AtomId, b: AtomId) -> AtomId {
        self.table[a * self.b_len + b]
    }

    /// The identity pairing into the product poset of `a` and `b`.
    pub fn pairing(a: &Poset, b: &Poset, prod: &Poset) -> Result<BinaryMap> {
        let table: Vec<AtomId> = (0..a.len())
            .flat_map(|i| (0..b.len()).map(move |j| product_atom(b.len(), i, j)))
            .collect();
        BinaryMap::new(a, b, prod, table)
    }
}

pub type PairMemo = FxHashMap<(GameId, GameId), GameId>;
pub type UnaryMemo = FxHashMap<GameId, GameId>;

fn check_hash(actual: u64, expected: u64, what: &str) -> Result<()> {
    if actual != expected {
        return Err(Error::InvalidArgument(format!("{what}: poset mismatch")));
    }
    Ok(())
}

/// `f(G + H)` across universes: `g` over `ua`, `h` over `ub`, the result over
/// `dst` whose poset must be `f`'s target.
pub fn sum_map(
    ua: &Universe,
    ub: &Universe,
    dst: &mut Universe,
    f: &BinaryMap,
    g: GameId,
    h: GameId,
    memo: &mut PairMemo,
) -> Result<GameId> {
    check_hash(ua.poset().content_hash(), f.a_hash, "sum_map left operand")?;
    check_hash(ub.poset().content_hash(), f.b_hash, "sum_map right operand")?;
    check_hash(dst.poset().content_hash(), f.c_hash, "sum_map target")?;
    Ok(sum_map_rec(ua, ub, dst, f, g, h, memo))
}

fn sum_map_rec(
    ua: &Universe,
    ub: &Universe,
    dst: &mut Universe,
    f: &BinaryMap,
    g: GameId,
    h: GameId,
    memo: &mut PairMemo,
) -> GameId {
    if let Some(&r) = memo.get(&(g, h)) {
        return r;
    }
    let r = match (ua.atom_of(g), ub.atom_of(h)) {
        (Some(a), Some(b)) => dst.atomic(f.apply(a, b)).expect("map target validated"),
        _ => {
            let mut lefts = Vec::new();
            let mut rights = Vec::new();
            for &gl in ua.left_options(g) {
                lefts.push(sum_map_rec(ua, ub, dst, f, gl, h, memo));
            }
            for &hl in ub.left_options(h) {
                lefts.push(sum_map_rec(ua, ub, dst, f, g, hl, memo));
            }
            for &gr in ua.right_options(g) {
                rights.push(sum_map_rec(ua, ub, dst, f, gr, h, memo));
            }
            for &hr in ub.right_options(h) {
                rights.push(sum_map_rec(ua, ub, dst, f, g, hr, memo));
            }
            dst.comp(&lefts, &rights)
        }
    };
    memo.insert((g, h), r);
    r
}

/// Fold form of [`sum_map`] for `f : A x B -> A`: the left operand and the
/// result live in the same universe.
pub fn sum_map_fold(
    dst: &mut Universe,
    ub: &Universe,
    f: &BinaryMap,
    g: GameId,
    h: GameId,
    memo: &mut PairMemo,
) -> Result<GameId> {
    check_hash(dst.poset().content_hash(), f.a_hash, "sum_map_fold left operand")?;
    check_hash(ub.poset().content_hash(), f.b_hash, "sum_map_fold right operand")?;
    check_hash(dst.poset().content_hash(), f.c_hash, "sum_map_fold target")?;
    Ok(sum_map_fold_rec(dst, ub, f, g, h, memo))
}

fn sum_map_fold_rec(
    dst: &mut Universe,
    ub: &Universe,
    f: &BinaryMap,
    g: GameId,
    h: GameId,
    memo: &mut PairMemo,
) -> GameId {
    if let Some(&r) = memo.get(&(g, h)) {
        return r;
    }
    let r = match (dst.atom_of(g), ub.atom_of(h)) {
        (Some(a), Some(b)) => dst.atomic(f.apply(a, b)).expect("map target validated"),
        _ => {
            let g_lefts: Vec<GameId> = dst.left_options(g).to_vec();
            let g_rights: Vec<GameId> = dst.right_options(g).to_vec();
            let mut lefts = Vec::new();
            let mut rights = Vec::new();
            for gl in g_lefts {
                lefts.push(sum_map_fold_rec(dst, ub, f, gl, h, memo));
            }
            for &hl in ub.left_options(h) {
                lefts.push(sum_map_fold_rec(dst, ub, f, g, hl, memo));
            }
            for gr in g_rights {
                rights.push(sum_map_fold_rec(dst, ub, f, gr, h, memo));
            }
            for &hr in ub.right_options(h) {
                rights.push(sum_map_fold_rec(dst, ub, f, g, hr, memo));
            }
            dst.comp(&lefts, &rights)
        }
    };
    memo.insert((g, h), r);
    r
}

/// Plain disjunctive sum into the product poset universe.
pub fn sum(
    ua: &Universe,
    ub: &Universe,
    dst: &mut Universe,
    g: GameId,
    h: GameId,
    memo: &mut PairMemo,
) -> Result<GameId> {
    let prod = dst.poset().clone();
    let f = BinaryMap::pairing(ua.poset(), ub.poset(), &prod)?;
    sum_map(ua, ub, dst, &f, g, h, memo)
}

/// Builds the universe a plain sum lands in.
pub fn sum_universe(ua: &Universe, ub: &Universe) -> Result<Universe> {
    Ok(Universe::new(product_poset(ua.poset(), ub.poset())?))
}

/// The opposite game: players swap roles, the poset is reversed.
pub fn opposite(
    src: &Universe,
    dst: &mut Universe,
    g: GameId,
    memo: &mut UnaryMemo,
) -> Result<GameId> {
    let expected = opposite_poset(src.poset())?;
    check_hash(dst.poset().content_hash(), expected.content_hash(), "opposite target")?;
    Ok(opposite_rec(src, dst, g, memo))
}

fn opposite_rec(src: &Universe, dst: &mut Universe, g: GameId, memo: &mut UnaryMemo) -> GameId {
    if let Some(&r) = memo.get(&g) {
        return r;
    }
    let r = match src.atom_of(g) {
        Some(a) => dst.atomic(a).expect("same atom set"),
        None => {
            let lefts: Vec<GameId> = src
                .right_options(g)
                .iter()
                .map(|&o| opposite_rec(src, dst, o, memo))
                .collect();
            let rights: Vec<GameId> = src
                .left_options(g)
                .iter()
                .map(|&o| opposite_rec(src, dst, o, memo))
                .collect();
            dst.comp(&lefts, &rights)
        }
    };
    memo.insert(g, r);
    r
}

/// Builds the universe opposites land in.
pub fn opposite_universe(src: &Universe) -> Result<Universe> {
    Ok(Universe::new(opposite_poset(src.poset())?))
}

/// Relabels a game along a monotone map, preserving shape.
pub fn map_game(
    src: &Universe,
    dst: &mut Universe,
    f: &MonotoneMap,
    g: GameId,
    memo: &mut UnaryMemo,
) -> Result<GameId> {
    check_hash(src.poset().content_hash(), f.src_hash, "map source")?;
    check_hash(dst.poset().content_hash(), f.dst_hash, "map target")?;
    Ok(map_rec(src, dst, f, g, memo))
}

fn map_rec(
    src: &Universe,
    dst: &mut Universe,
    f: &MonotoneMap,
    g: GameId,
    memo: &mut UnaryMemo,
) -> GameId {
    if let Some(&r) = memo.get(&g) {
        return r;
    }
    let r = match src.atom_of(g) {
        Some(a) => dst.atomic(f.apply(a)).expect("map target validated"),
        None => {
            let lefts: Vec<GameId> = src
                .left_options(g)
                .iter()
                .map(|&o| map_rec(src, dst, f, o, memo))
                .collect();
            let rights: Vec<GameId> = src
                .right_options(g)
                .iter()
                .map(|&o| map_rec(src, dst, f, o, memo))
                .collect();
            dst.comp(&lefts, &rights)
        }
    };
    memo.insert(g, r);
    r
}

/// The payoff functions on `A x A^op` into Bool that favor Left and Right:
/// `lambda(a,b) = T iff b <=_A a` and `rho(a,b) = T iff a is not <=_A b`.
pub struct CopycatSetup {
    pub op: Universe,
    pub bool_u: Universe,
    pub lambda: BinaryMap,
    pub rho: BinaryMap,
}

pub fn copycat_setup(a: &Poset) -> Result<CopycatSetup> {
    let op = opposite_poset(a)?;
    let bool_p = crate::poset::linear_poset(2)?;
    let top = bool_p.atom_index("T").unwrap();
    let bot = bool_p.atom_index("B").unwrap();
    let n = a.len();
    let mut lam = vec![bot; n * n];
    let mut rho = vec![bot; n * n];
    for x in 0..n {
        for y in 0..n {
            if a.leq(y, x) {
                lam[x * n + y] = top;
            }
            if !a.leq(x, y) {
                rho[x * n + y] = top;
            }
        }
    }
    let lambda = BinaryMap::new(a, &op, &bool_p, lam)?;
    let rho = BinaryMap::new(a, &op, &bool_p, rho)?;
    Ok(CopycatSetup {
        op: Universe::new(op),
        bool_u: Universe::new(bool_p),
        lambda,
        rho,
    })
}

/// Result of the copy-cat verification for one game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopycatReport {
    /// `G +lambda G^op` is equivalent to top.
    pub lambda_second_player_left: bool,
    /// `G +rho G^op` is equivalent to bottom.
    pub rho_second_player_right: bool,
}

impl CopycatReport {
    pub fn holds(&self) -> bool {
        self.lambda_second_player_left && self.rho_second_player_right
    }
}

/// Verifies the copy-cat identities for a passable game.
pub fn copycat_check(u: &Universe, setup: &mut CopycatSetup, g: GameId) -> Result<CopycatReport> {
    let mut op_memo = UnaryMemo::default();
    let gop = opposite(u, &mut setup.op, g, &mut op_memo)?;
    let mut memo = PairMemo::default();
    let x = sum_map(u, &setup.op, &mut setup.bool_u, &setup.lambda, g, gop, &mut memo)?;
    let top = setup.bool_u.top_game()?;
    let lambda_ok = setup.bool_u.equivalent(x, top);
    let mut memo2 = PairMemo::default();
    let y = sum_map(u, &setup.op, &mut setup.bool_u, &setup.rho, g, gop, &mut memo2)?;
    let bot = setup.bool_u.bottom_game()?;
    let rho_ok = setup.bool_u.equivalent(y, bot);
    Ok(CopycatReport {
        lambda_second_player_left: lambda_ok,
        rho_second_player_right: rho_ok,
    })
}

/// Checks `G <= H  iff  top <= H +lambda G^op` and `G <| H iff top <| ...`
/// for one pair; returns whether both biconditionals agree.
pub fn copycat_order_probe(
    u: &mut Universe,
    setup: &mut CopycatSetup,
    g: GameId,
    h: GameId,
) -> Result<bool> {
    let mut op_memo = UnaryMemo::default();
    let gop = opposite(u, &mut setup.op, g, &mut op_memo)?;
    let mut memo = PairMemo::default();
    let x = sum_map(u, &setup.op, &mut setup.bool_u, &setup.lambda, h, gop, &mut memo)?;
    let top = setup.bool_u.top_game()?;
    let leq_direct = u.leq(g, h);
    let leq_via = setup.bool_u.leq(top, x);
    let tri_direct = u.tri(g, h);
    let tri_via = setup.bool_u.tri(top, x);
    Ok(leq_direct == leq_via && tri_direct == tri_via)
}

/// A context for games over `A`: a poset `B`, a monotone payoff
/// `f : A x B -> Bool`, and a passable game over `B`.
pub struct Context {
    pub universe: Universe,
    pub payoff: BinaryMap,
    pub game: GameId,
    pub label: String,
}

/// Win flags of a Bool-valued game from Left's perspective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WinFlags {
    pub first_player: bool,
    pub second_player: bool,
}

fn win_flags(ub: &mut Universe, x: GameId) -> Result<WinFlags> {
    let top = ub.top_game()?;
    Ok(WinFlags {
        first_player: ub.tri(top, x),
        second_player: ub.leq(top, x),
    })
}

/// Outcome of probing one context.
#[derive(Debug, Clone)]
pub struct ContextProbe {
    pub label: String,
    pub g_flags: WinFlags,
    pub h_flags: WinFlags,
    /// The three contextual-order implications that follow from the direct
    /// relations held in this context.
    pub consistent: bool,
}

/// Compares `g` and `h` inside each context and checks that the contextual
/// behavior is consistent with the direct order: `g <= h` forces both win
/// kinds to transfer, `g <| h` forces second-player wins of `g` to become
/// first-player wins of `h`.
pub fn contextual_probe(
    u: &mut Universe,
    g: GameId,
    h: GameId,
    contexts: &mut [Context],
) -> Result<Vec<ContextProbe>> {
    let leq_gh = u.leq(g, h);
    let tri_gh = u.tri(g, h);
    let mut out = Vec::new();
    for ctx in contexts {
        if !ctx.universe.is_passable(ctx.game) {
            return Err(Error::Precondition("context games must be passable".into()));
        }
        let mut bool_u = Universe::new(crate::poset::linear_poset(2)?);
        let mut memo = PairMemo::default();
        let gk = sum_map(u, &ctx.universe, &mut bool_u, &ctx.payoff, g, ctx.game, &mut memo)?;
        let hk = sum_map(u, &ctx.universe, &mut bool_u, &ctx.payoff, h, ctx.game, &mut memo)?;
        let gf = win_flags(&mut bool_u, gk)?;
        let hf = win_flags(&mut bool_u, hk)?;
        let mut consistent = true;
        if leq_gh {
            consistent &= !gf.first_player || hf.first_player;
            consistent &= !gf.second_player || hf.second_player;
        }
        if tri_gh {
            consistent &= !gf.second_player || hf.first_player;
        }
        out.push(ContextProbe {
            label: ctx.label.clone(),
            g_flags: gf,
            h_flags: hf,
            consistent,
        });
    }
    Ok(out)
}

/// Value of the monotone set coloring game with `cells` cells and the given
/// payoff over colorings (bit i set = cell i colored by Black). The payoff
/// must be monotone in the subset order.
pub fn set_coloring_value(
    dst: &mut Universe,
    cells: usize,
    payoff: &[AtomId],
) -> Result<GameId> {
    if cells > 12 {
        return Err(Error::ResourceLimit(format!(
            "set coloring game with {cells} cells exceeds the 12-cell guard"
        )));
    }
    if payoff.len() != 1 << cells {
        return Err(Error::InvalidArgument("payoff table must have 2^cells entries".into()));
    }
    for &a in payoff {
        if a >= dst.poset().len() {
            return Err(Error::InvalidArgument("payoff targets unknown atom".into()));
        }
    }
    // monotone in each coordinate suffices
    for mask in 0..1usize << cells {
        for c in 0..cells {
            if mask & (1 << c) == 0 && !dst.poset().leq(payoff[mask], payoff[mask | 1 << c]) {
                return Err(Error::InvalidArgument("payoff is not monotone".into()));
            }
        }
    }
    let mut memo: FxHashMap<(u32, u32), GameId> = Default::default();
    let v = color_rec(dst, cells, payoff, 0, 0, &mut memo)?;
    Ok(canonical_form(dst, v))
}

fn color_rec(
    dst: &mut Universe,
    cells: usize,
    payoff: &[AtomId],
    black: u32,
    white: u32,
    memo: &mut FxHashMap<(u32, u32), GameId>,
) -> Result<GameId> {
    if let Some(&r) = memo.get(&(black, white)) {
        return Ok(r);
    }
    let filled = black | white;
    let full = (1u32 << cells) - 1;
    let r = if filled == full {
        dst.atomic(payoff[black as usize])?
    } else {
        let mut lefts = Vec::new();
        let mut rights = Vec::new();
        for c in 0..cells as u32 {
            let bit = 1u32 << c;
            if filled & bit == 0 {
                lefts.push(color_rec(dst, cells, payoff, black | bit, white, memo)?);
                rights.push(color_rec(dst, cells, payoff, black, white | bit, memo)?);
            }
        }
        let g = dst.comp(&lefts, &rights);
        canonical_form(dst, g)
    };
    memo.insert((black, white), r);
    Ok(r)
}

/// Parses `map: a -> b` lines into a unary monotone map.
pub fn parse_unary_map(src: &Poset, dst: &Poset, text: &str) -> Result<MonotoneMap> {
    let mut table = vec![usize::MAX; src.len()];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lno = lineno + 1;
        let rest = line
            .strip_prefix("map:")
            .ok_or_else(|| Error::parse(lno, 1, "expected `map: a -> b`"))?;
        let mut halves = rest.split("->");
        let from = halves.next().map(str::trim).unwrap_or("");
        let to = halves.next().map(str::trim).unwrap_or("");
        if from.is_empty() || to.is_empty() || halves.next().is_some() {
            return Err(Error::parse(lno, 1, "expected `map: a -> b`"));
        }
        let fi = src
            .atom_index(from)
            .ok_or_else(|| Error::parse(lno, 1, format!("unknown source atom {from:?}")))?;
        let ti = dst
            .atom_index(to)
            .ok_or_else(|| Error::parse(lno, 1, format!("unknown target atom {to:?}")))?;
        table[fi] = ti;
    }
    if let Some(missing) = table.iter().position(|&t| t == usize::MAX) {
        return Err(Error::InvalidArgument(format!(
            "map is not total: atom {:?} has no image",
            src.atom_name(missing)
        )));
    }
    MonotoneMap::new(src, dst, table)
}

/// Parses `map: a b -> c` lines into a binary monotone map.
pub fn parse_binary_map(a: &Poset, b: &Poset, c: &Poset, text: &str) -> Result<BinaryMap> {
    let mut table = vec![usize::MAX; a.len() * b.len()];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lno = lineno + 1;
        let rest = line
            .strip_prefix("map:")
            .ok_or_else(|| Error::parse(lno, 1, "expected `map: a b -> c`"))?;
        let mut halves = rest.split("->");
        let from = halves.next().map(str::trim).unwrap_or("");
        let to = halves.next().map(str::trim).unwrap_or("");
        if from.is_empty() || to.is_empty() || halves.next().is_some() {
            return Err(Error::parse(lno, 1, "expected `map: a b -> c`"));
        }
        let mut args = from.split_whitespace();
        let (x, y) = match (args.next(), args.next(), args.next()) {
            (Some(x), Some(y), None) => (x, y),
            _ => return Err(Error::parse(lno, 1, "expected two source atoms")),
        };
        let xi = a
            .atom_index(x)
            .ok_or_else(|| Error::parse(lno, 1, format!("unknown atom {x:?}")))?;
        let yi = b
            .atom_index(y)
            .ok_or_else(|| Error::parse(lno, 1, format!("unknown atom {y:?}")))?;
        let ti = c
            .atom_index(to)
            .ok_or_else(|| Error::parse(lno, 1, format!("unknown target atom {to:?}")))?;
        table[xi * b.len() + yi] = ti;
    }
    if table.contains(&usize::MAX) {
        return Err(Error::InvalidArgument("binary map is not total".into()));
    }
    BinaryMap::new(a, b, c, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::linear_poset;
    use crate::text::{parse_game, print_game};

    fn lin(n: usize) -> Universe {
        Universe::new(linear_poset(n).unwrap())
    }

    #[test]
    fn sum_atomic_base_case() {
        let ua = lin(3);
        let ub = lin(2);
        let mut ua = ua;
        let mut ub = ub;
        let a = ua.atom("a").unwrap();
        let t = ub.atom("T").unwrap();
        let mut dst = sum_universe(&ua, &ub).unwrap();
        let mut memo = PairMemo::default();
        let s = sum(&ua, &ub, &mut dst, a, t, &mut memo).unwrap();
        assert_eq!(print_game(&dst, s), "(a,T)");
    }

    #[test]
    fn sum_with_composite() {
        // [a] + {B|T} over Bool = {(a,B)|(a,T)}
        let mut ua = lin(3);
        let mut ub = lin(2);
        let a = ua.atom("a").unwrap();
        let h = parse_game(&mut ub, "{B|T}").unwrap();
        let mut dst = sum_universe(&ua, &ub).unwrap();
        let mut memo = PairMemo::default();
        let s = sum(&ua, &ub, &mut dst, a, h, &mut memo).unwrap();
        assert_eq!(print_game(&dst, s), "{(a,B)|(a,T)}");

        // {a|a} + {B|T}: the four-option compound
        let g2 = parse_game(&mut ua, "{a|a}").unwrap();
        let s2 = sum(&ua, &ub, &mut dst, g2, h, &mut memo).unwrap();
        let expect = parse_game(
            &mut dst,
            "{{(a,B)|(a,B)},{(a,B)|(a,T)}|{(a,T)|(a,T)},{(a,B)|(a,T)}}",
        )
        .unwrap();
        assert_eq!(s2, expect);
    }

    #[test]
    fn sum_not_monotone_counterexample() {
        let mut ua = lin(3);
        let mut ub = lin(2);
        let g = ua.atom("a").unwrap();
        let gp = parse_game(&mut ua, "{a|a}").unwrap();
        assert!(ua.equivalent(g, gp));
        let h = parse_game(&mut ub, "{B|T}").unwrap();
        let mut dst = sum_universe(&ua, &ub).unwrap();
        let mut memo = PairMemo::default();
        let s1 = sum(&ua, &ub, &mut dst, g, h, &mut memo).unwrap();
        let s2 = sum(&ua, &ub, &mut dst, gp, h, &mut memo).unwrap();
        assert!(!dst.leq(s1, s2) && !dst.leq(s2, s1));
    }

    #[test]
    fn sum_monotone_on_passable() {
        let mut ua = lin(3);
        let mut ub = lin(2);
        let g = parse_game(&mut ua, "{a|B}").unwrap();
        let gp = parse_game(&mut ua, "{T|a}").unwrap();
        assert!(ua.leq(g, gp));
        let h = parse_game(&mut ub, "{T|B}").unwrap();
        assert!(ub.is_passable(h));
        let mut dst = sum_universe(&ua, &ub).unwrap();
        let mut memo = PairMemo::default();
        let s1 = sum(&ua, &ub, &mut dst, g, h, &mut memo).unwrap();
        let s2 = sum(&ua, &ub, &mut dst, gp, h, &mut memo).unwrap();
        assert!(dst.leq(s1, s2));
        // sum of passable games is passable
        assert!(dst.is_passable(s1));
    }

    #[test]
    fn opposite_involution_and_star() {
        let mut u = lin(2);
        let star = parse_game(&mut u, "{T|B}").unwrap();
        let mut dst = opposite_universe(&u).unwrap();
        let mut memo = UnaryMemo::default();
        let so = opposite(&u, &mut dst, star, &mut memo).unwrap();
        assert_eq!(print_game(&dst, so), "{B|T}");
        // read over the reversed order this is monotone again
        assert!(dst.is_monotone(so));
        let mut back = opposite_universe(&dst).unwrap();
        let mut memo2 = UnaryMemo::default();
        let s2 = opposite(&dst, &mut back, so, &mut memo2).unwrap();
        assert_eq!(print_game(&back, s2), "{T|B}");
        assert_eq!(back.poset().content_hash(), u.poset().content_hash());
    }

    #[test]
    fn map_identity_and_functoriality() {
        let mut u = lin(3);
        let g = parse_game(&mut u, "{{T|a}|B}").unwrap();
        let ident = MonotoneMap::identity(u.poset());
        let poset = u.poset().clone();
        let mut dst = Universe::new(poset.clone());
        let mut memo = UnaryMemo::default();
        let m = map_game(&u, &mut dst, &ident, g, &mut memo).unwrap();
        assert_eq!(print_game(&dst, m), print_game(&u, g));

        // squash a -> B then everything -> T equals the composed map
        let f = MonotoneMap::new(&poset, &poset, vec![0, 0, 2]).unwrap();
        let gmap = MonotoneMap::new(&poset, &poset, vec![0, 2, 2]).unwrap();
        let composed = MonotoneMap::compose(&gmap, &f).unwrap();
        let mut d1 = Universe::new(poset.clone());
        let mut mm = UnaryMemo::default();
        let step1 = map_game(&u, &mut d1, &f, g, &mut mm).unwrap();
        let mut d2 = Universe::new(poset.clone());
        let mut mm2 = UnaryMemo::default();
        let step2 = map_game(&d1, &mut d2, &gmap, step1, &mut mm2).unwrap();
        let mut d3 = Universe::new(poset.clone());
        let mut mm3 = UnaryMemo::default();
        let direct = map_game(&u, &mut d3, &composed, g, &mut mm3).unwrap();
        assert_eq!(print_game(&d2, step2), print_game(&d3, direct));

        // passability is preserved
        assert!(u.is_passable(g));
        assert!(d3.is_passable(direct));
    }

    #[test]
    fn conjunction_sum_over_bool() {
        let bool_p = linear_poset(2).unwrap();
        let mut ua = Universe::new(bool_p.clone());
        let mut ub = Universe::new(bool_p.clone());
        let and_table = vec![0, 0, 0, 1]; // B,B->B B,T->B T,B->B T,T->T
        let f = BinaryMap::new(&bool_p, &bool_p, &bool_p, and_table).unwrap();
        let sa = parse_game(&mut ua, "{T|B}").unwrap();
        let sb = parse_game(&mut ub, "{T|B}").unwrap();
        let mut dst = Universe::new(bool_p.clone());
        let mut memo = PairMemo::default();
        let x = sum_map(&ua, &ub, &mut dst, &f, sa, sb, &mut memo).unwrap();
        // Left must win both components: star-and-star is a loss for Left
        let bot = dst.bottom_game().unwrap();
        assert!(dst.equivalent(x, bot));

        // associativity for the associative payoff: (sa + sb) + sc equals
        // sa + (sb + sc) as identical terms
        let mut uc = Universe::new(bool_p.clone());
        let sc = parse_game(&mut uc, "{T|{T|B}}").unwrap();
        let mut m2 = PairMemo::default();
        let ab = sum_map(&ua, &ub, &mut dst, &f, sa, sb, &mut m2).unwrap();
        let mut m3 = PairMemo::default();
        let left_assoc = sum_map_fold(&mut dst, &uc, &f, ab, sc, &mut m3).unwrap();
        let mut dst2 = Universe::new(bool_p.clone());
        let mut m4 = PairMemo::default();
        let bc = sum_map(&ub, &uc, &mut dst2, &f, sb, sc, &mut m4).unwrap();
        let mut dst3 = Universe::new(bool_p.clone());
        let mut m5 = PairMemo::default();
        let right_assoc = sum_map(&ua, &dst2, &mut dst3, &f, sa, bc, &mut m5).unwrap();
        assert_eq!(print_game(&dst, left_assoc), print_game(&dst3, right_assoc));
    }

    #[test]
    fn sum_symmetric_and_unital() {
        use crate::poset::{product_atom, product_poset};
        // symmetry: swapping the pair coordinates carries G+H onto H+G
        let mut ua = lin(3);
        let mut ub = lin(2);
        let g = parse_game(&mut ua, "{T|a}").unwrap();
        let h = parse_game(&mut ub, "{T|B}").unwrap();
        let mut ab = sum_universe(&ua, &ub).unwrap();
        let mut ba = sum_universe(&ub, &ua).unwrap();
        let mut memo = PairMemo::default();
        let s_ab = sum(&ua, &ub, &mut ab, g, h, &mut memo).unwrap();
        let mut memo2 = PairMemo::default();
        let s_ba = sum(&ub, &ua, &mut ba, h, g, &mut memo2).unwrap();
        let pa = ua.poset().clone();
        let pb = ub.poset().clone();
        let pab = product_poset(&pa, &pb).unwrap();
        let pba = product_poset(&pb, &pa).unwrap();
        let mut swap = vec![0usize; pab.len()];
        for i in 0..pa.len() {
            for j in 0..pb.len() {
                swap[product_atom(pb.len(), i, j)] = product_atom(pa.len(), j, i);
            }
        }
        let swap = MonotoneMap::new(&pab, &pba, swap).unwrap();
        let mut mm = UnaryMemo::default();
        let carried = map_game(&ab, &mut ba, &swap, s_ab, &mut mm).unwrap();
        assert_eq!(carried, s_ba);

        // unital: summing with the one-atom game relabels only
        let mut unit = lin(1);
        let e = unit.atom("B").unwrap();
        let mut dst = sum_universe(&ua, &unit).unwrap();
        let mut m = PairMemo::default();
        let s = sum(&ua, &unit, &mut dst, g, e, &mut m).unwrap();
        assert_eq!(print_game(&dst, s), "{(T,B)|(a,B)}");
        // projecting the pair atoms back recovers g
        let proj_table: Vec<usize> = (0..pa.len()).collect();
        let pdst = dst.poset().clone();
        let proj = MonotoneMap::new(&pdst, &pa, proj_table).unwrap();
        let mut back = Universe::new(pa);
        let mut mm2 = UnaryMemo::default();
        let recovered = map_game(&dst, &mut back, &proj, s, &mut mm2).unwrap();
        assert_eq!(print_game(&back, recovered), print_game(&ua, g));
    }

    #[test]
    fn copycat_identities() {
        let mut u = lin(2);
        let star = parse_game(&mut u, "{T|B}").unwrap();
        let mut setup = copycat_setup(u.poset()).unwrap();
        let rep = copycat_check(&u, &mut setup, star).unwrap();
        assert!(rep.holds());

        let mut u3 = lin(3);
        let a = u3.atom("a").unwrap();
        let mut setup3 = copycat_setup(u3.poset()).unwrap();
        let rep_a = copycat_check(&u3, &mut setup3, a).unwrap();
        assert!(rep_a.holds());
        let g = parse_game(&mut u3, "{a|B}").unwrap();
        let rep_g = copycat_check(&u3, &mut setup3, g).unwrap();
        assert!(rep_g.holds());
        // order biconditionals on a sample pair
        assert!(copycat_order_probe(&mut u3, &mut setup3, g, a).unwrap());
        assert!(copycat_order_probe(&mut u3, &mut setup3, a, g).unwrap());
    }

    #[test]
    fn contextual_probe_consistency() {
        let mut u = lin(3);
        let g = parse_game(&mut u, "{a|B}").unwrap();
        let h = parse_game(&mut u, "{T|a}").unwrap();
        assert!(u.leq(g, h));
        // canonical context: (A^op, rho, H^op)
        let setup = copycat_setup(u.poset()).unwrap();
        let mut op = setup.op;
        let mut memo = UnaryMemo::default();
        let hop = opposite(&u, &mut op, h, &mut memo).unwrap();
        let mut contexts = vec![Context {
            universe: op,
            payoff: setup.rho,
            game: hop,
            label: "rho-with-H-op".into(),
        }];
        let probes = contextual_probe(&mut u, g, h, &mut contexts).unwrap();
        assert!(probes.iter().all(|p| p.consistent));
        // Left has no first-player win in G + rho H^op
        assert!(!probes[0].g_flags.first_player);
    }

    #[test]
    fn strict_context_separates_top_and_star() {
        // top <=gI star under strict contexts although top is not <= star
        let mut u = lin(2);
        let top = u.atom("T").unwrap();
        let star = parse_game(&mut u, "{T|B}").unwrap();
        assert!(!u.leq(top, star));
        // strict payoff: first argument decides when it is T or B (identity on Bool x Bool -> Bool by first coordinate)
        let bool_p = linear_poset(2).unwrap();
        let table = vec![0, 0, 1, 1]; // f(a,b) = a
        let f = BinaryMap::new(&bool_p, &bool_p, &bool_p, table).unwrap();
        let mut ub = Universe::new(bool_p.clone());
        let k = parse_game(&mut ub, "{T|B}").unwrap();
        let mut bool_dst = Universe::new(bool_p.clone());
        let mut memo = PairMemo::default();
        let g_in = sum_map(&u, &ub, &mut bool_dst, &f, top, k, &mut memo).unwrap();
        let h_in = sum_map(&u, &ub, &mut bool_dst, &f, star, k, &mut memo).unwrap();
        let gf = win_flags(&mut bool_dst, g_in).unwrap();
        let hf = win_flags(&mut bool_dst, h_in).unwrap();
        // Left wins both ways in top-in-context, only moving first in star-in-context
        assert!(gf.first_player && gf.second_player);
        assert!(hf.first_player && !hf.second_player);
    }

    #[test]
    fn set_coloring_values() {
        // one cell, identity payoff: the game star
        let mut u = lin(2);
        let v = set_coloring_value(&mut u, 1, &[0, 1]).unwrap();
        assert_eq!(print_game(&u, v), "{T|B}");

        // zero cells: the atomic payoff of the empty coloring
        let v0 = set_coloring_value(&mut u, 0, &[1]).unwrap();
        assert_eq!(print_game(&u, v0), "T");

        // two cells with AND payoff, cross-checked by brute-force play
        let and_payoff = [0usize, 0, 0, 1];
        let v2 = set_coloring_value(&mut u, 2, &and_payoff).unwrap();
        let oracle = brute_force_two_cells(&mut u, &and_payoff);
        assert!(u.equivalent(v2, oracle));

        assert!(set_coloring_value(&mut u, 13, &[0; 1 << 13]).is_err());
        assert!(set_coloring_value(&mut u, 1, &[1, 0]).is_err()); // not monotone
    }

    /// Independent oracle: explicit two-cell game tree with no sharing.
    fn brute_force_two_cells(u: &mut Universe, payoff: &[usize; 4]) -> GameId {
        // positions: each cell empty / black / white
        fn pos(u: &mut Universe, payoff: &[usize; 4], cells: [Option<bool>; 2]) -> GameId {
            if cells.iter().all(|c| c.is_some()) {
                let mask = cells
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.unwrap())
                    .fold(0usize, |m, (i, _)| m | 1 << i);
                return u.atomic(payoff[mask]).unwrap();
            }
            let mut lefts = Vec::new();
            let mut rights = Vec::new();
            for i in 0..2 {
                if cells[i].is_none() {
                    let mut cb = cells;
                    cb[i] = Some(true);
                    lefts.push(pos(u, payoff, cb));
                    let mut cw = cells;
                    cw[i] = Some(false);
                    rights.push(pos(u, payoff, cw));
                }
            }
            u.comp(&lefts, &rights)
        }
        pos(u, payoff, [None, None])
    }
}
