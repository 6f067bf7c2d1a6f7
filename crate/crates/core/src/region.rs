//! Hex regions as board graphs: outcome computation for completions, game
//! value by exhaustive play with canonicalization and a transposition table,
//! dead-cell detection, and the 4-terminal non-realizability sweep.
//!
//! A region lists its cells with axial coordinates. Default adjacency is the
//! hex grid: (r,c) neighbors (r+-1,c), (r,c+-1), (r+1,c-1), (r-1,c+1);
//! `adjacency add` lines extend it, which also lets files encode invisible
//! terminals as far-away virtual stones. Board edges are pseudo-nodes with a
//! color and a list of touching cells. The outcome of a completion is either
//! a non-crossing partition of the black terminals or, for the edge-based
//! region types, an atom of the quotient poset the template declares.

use rustc_hash::FxHashMap;

use crate::canonical::canonical_form;
use crate::error::{Error, Result};
use crate::game::{GameId, Universe};
use crate::poset::{
    antichain_poset, linear_poset, non_crossing_poset, AtomId, NonCrossingOutcome, Poset,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Color {
    Black,
    White,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CellState {
    Empty,
    Stone(Color),
}

/// How a region's completions map to outcome atoms.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Quotient {
    /// Non-crossing partition of the n black terminals.
    NTerminal,
    /// Two black terminal groups and an invisible gap terminal 3; outcomes
    /// B < a < T. Terminal 1 must be the group cyclically adjacent to the gap.
    Gap2Lin3,
    /// Three terminals, terminal 3 the handle; outcomes {B, a, b, T} with
    /// a, b incomparable (terminal 3 reaching terminal 2, resp. terminal 1).
    Fork,
    /// One-sided fork: black edges b1, b2 and white edges w1, w2; outcomes
    /// B < a < T.
    OneSided3,
    /// One-sided fork with a gap cell; outcomes B < a < b < T where the gap
    /// color separates a from b.
    OneSided4,
}

/// Edge declaration as parsed from a region file: name, color, cells.
pub type EdgeDecl = (String, Color, Vec<(i32, i32)>);

#[derive(Clone, Debug)]
pub struct EdgeSpec {
    pub color: Color,
    pub cells: Vec<usize>,
}

/// A board region: cells, pre-placed stones, terminals, optional edges/gap,
/// and the quotient describing its outcome atoms.
#[derive(Clone, Debug)]
pub struct Region {
    name: String,
    coords: Vec<(i32, i32)>,
    index: FxHashMap<(i32, i32), usize>,
    stones: Vec<CellState>,
    neighbors: Vec<Vec<usize>>,
    has_overrides: bool,
    terminals: Vec<Vec<usize>>,
    edges: FxHashMap<String, EdgeSpec>,
    gap: Option<(i32, i32)>,
    quotient: Quotient,
    budget: usize,
}

const DEFAULT_BUDGET: usize = 14;

fn hex_neighbors(r: i32, c: i32) -> [(i32, i32); 6] {
    [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1), (r + 1, c - 1), (r - 1, c + 1)]
}

impl Region {
    pub fn new(
        name: impl Into<String>,
        cells: Vec<((i32, i32), CellState)>,
        terminals: Vec<Vec<(i32, i32)>>,
        edges: Vec<EdgeDecl>,
        extra_adjacency: Vec<((i32, i32), (i32, i32))>,
        gap: Option<(i32, i32)>,
        quotient: Quotient,
    ) -> Result<Region> {
        let mut coords = Vec::with_capacity(cells.len());
        let mut stones = Vec::with_capacity(cells.len());
        let mut index = FxHashMap::default();
        for ((r, c), s) in &cells {
            if index.insert((*r, *c), coords.len()).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate cell ({r},{c})")));
            }
            coords.push((*r, *c));
            stones.push(*s);
        }
        let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); coords.len()];
        for (i, &(r, c)) in coords.iter().enumerate() {
            for (nr, nc) in hex_neighbors(r, c) {
                if let Some(&j) = index.get(&(nr, nc)) {
                    neighbors[i].push(j);
                }
            }
        }
        let has_overrides = !extra_adjacency.is_empty();
        for (p, q) in extra_adjacency {
            let i = *index
                .get(&p)
                .ok_or_else(|| Error::InvalidArgument(format!("adjacency names unknown cell {p:?}")))?;
            let j = *index
                .get(&q)
                .ok_or_else(|| Error::InvalidArgument(format!("adjacency names unknown cell {q:?}")))?;
            if !neighbors[i].contains(&j) {
                neighbors[i].push(j);
                neighbors[j].push(i);
            }
        }
        let terminals: Vec<Vec<usize>> = terminals
            .into_iter()
            .map(|group| {
                group
                    .into_iter()
                    .map(|p| {
                        index.get(&p).copied().ok_or_else(|| {
                            Error::InvalidArgument(format!("terminal names unknown cell {p:?}"))
                        })
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut edge_map = FxHashMap::default();
        for (ename, color, cs) in edges {
            let ids = cs
                .into_iter()
                .map(|p| {
                    index.get(&p).copied().ok_or_else(|| {
                        Error::InvalidArgument(format!("edge {ename} names unknown cell {p:?}"))
                    })
                })
                .collect::<Result<Vec<usize>>>()?;
            edge_map.insert(ename, EdgeSpec { color, cells: ids });
        }
        let region = Region {
            name: name.into(),
            coords,
            index,
            stones,
            neighbors,
            has_overrides,
            terminals,
            edges: edge_map,
            gap,
            quotient,
            budget: DEFAULT_BUDGET,
        };
        region.validate()?;
        Ok(region)
    }

    fn validate(&self) -> Result<()> {
        match self.quotient {
            Quotient::NTerminal | Quotient::Gap2Lin3 | Quotient::Fork => {
                if self.terminals.is_empty() {
                    return Err(Error::InvalidArgument("region needs terminals".into()));
                }
                if self.quotient != Quotient::NTerminal && self.terminals.len() != 3 {
                    return Err(Error::InvalidArgument(
                        "gap2lin3/fork regions need exactly 3 terminals".into(),
                    ));
                }
                if self.terminals.len() > 8 {
                    return Err(Error::ResourceLimit("more than 8 terminals".into()));
                }
            }
            Quotient::OneSided3 | Quotient::OneSided4 => {
                for e in ["b1", "b2", "w1", "w2"] {
                    if !self.edges.contains_key(e) {
                        return Err(Error::InvalidArgument(format!(
                            "one-sided regions need edge {e}"
                        )));
                    }
                }
                if self.quotient == Quotient::OneSided4 {
                    let gap = self.gap.ok_or_else(|| {
                        Error::InvalidArgument("onesided4 regions need a gap cell".into())
                    })?;
                    if !self.index.contains_key(&gap) {
                        return Err(Error::InvalidArgument(
                            "onesided4 gap must be a region cell".into(),
                        ));
                    }
                }
            }
        }
        // terminal groups: non-empty, disjoint, pre-placed black, internally connected
        let mut used = vec![false; self.coords.len()];
        for (t, group) in self.terminals.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidArgument(format!("terminal {} is empty", t + 1)));
            }
            for &i in group {
                if used[i] {
                    return Err(Error::InvalidArgument("terminals overlap".into()));
                }
                used[i] = true;
                if self.stones[i] != CellState::Stone(Color::Black) {
                    return Err(Error::InvalidArgument(format!(
                        "terminal {} contains a non-black cell",
                        t + 1
                    )));
                }
            }
            // connectivity within the group
            let mut seen = vec![group[0]];
            let mut stack = vec![group[0]];
            while let Some(x) = stack.pop() {
                for &n in &self.neighbors[x] {
                    if group.contains(&n) && !seen.contains(&n) {
                        seen.push(n);
                        stack.push(n);
                    }
                }
            }
            if seen.len() != group.len() {
                return Err(Error::InvalidArgument(format!(
                    "terminal {} is not black-connected",
                    t + 1
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn quotient(&self) -> Quotient {
        self.quotient
    }

    pub fn set_budget(&mut self, budget: usize) {
        self.budget = budget;
    }

    pub fn cell_count(&self) -> usize {
        self.coords.len()
    }

    /// Empty cells in file order; this is also the move order.
    pub fn empty_cells(&self) -> Vec<usize> {
        (0..self.coords.len())
            .filter(|&i| self.stones[i] == CellState::Empty)
            .collect()
    }

    pub fn coord(&self, i: usize) -> (i32, i32) {
        self.coords[i]
    }

    pub fn cell_index(&self, coord: (i32, i32)) -> Option<usize> {
        self.index.get(&coord).copied()
    }

    pub fn stone(&self, i: usize) -> CellState {
        self.stones[i]
    }

    pub fn has_adjacency_overrides(&self) -> bool {
        self.has_overrides
    }

    /// The outcome poset this region's values live over.
    pub fn outcome_poset(&self) -> Result<Poset> {
        match self.quotient {
            Quotient::NTerminal => non_crossing_poset(self.terminals.len()),
            Quotient::Gap2Lin3 | Quotient::OneSided3 => linear_poset(3),
            Quotient::OneSided4 => linear_poset(4),
            Quotient::Fork => antichain_poset(2),
        }
    }

    /// Outcome atom of a total completion. `fill[k]` colors `empty_cells()[k]`.
    pub fn outcome_of(&self, poset: &Poset, fill: &[Color]) -> Result<AtomId> {
        let empties = self.empty_cells();
        if fill.len() != empties.len() {
            return Err(Error::InvalidArgument(format!(
                "completion colors {} cells, region has {} empty",
                fill.len(),
                empties.len()
            )));
        }
        let mut states = self.stones.clone();
        for (k, &i) in empties.iter().enumerate() {
            states[i] = CellState::Stone(fill[k]);
        }
        self.outcome_of_states(poset, &states)
    }

    fn color_at(states: &[CellState], i: usize) -> Color {
        match states[i] {
            CellState::Stone(c) => c,
            CellState::Empty => unreachable!("outcome of a partial board"),
        }
    }

    fn outcome_of_states(&self, poset: &Poset, states: &[CellState]) -> Result<AtomId> {
        let n = self.coords.len();
        // union-find over cells plus one node per edge
        let edge_names: Vec<&String> = {
            let mut v: Vec<&String> = self.edges.keys().collect();
            v.sort();
            v
        };
        let mut uf = UnionFind::new(n + edge_names.len());
        for i in 0..n {
            let ci = Self::color_at(states, i);
            for &j in &self.neighbors[i] {
                if j > i && Self::color_at(states, j) == ci {
                    uf.union(i, j);
                }
            }
        }
        for (k, name) in edge_names.iter().enumerate() {
            let spec = &self.edges[*name];
            for &i in &spec.cells {
                if Self::color_at(states, i) == spec.color {
                    uf.union(n + k, i);
                }
            }
        }
        let edge_root = |uf: &mut UnionFind, name: &str| {
            let k = edge_names.iter().position(|e| e.as_str() == name).unwrap();
            uf.find(n + k)
        };

        match self.quotient {
            Quotient::NTerminal => {
                let labels: Vec<usize> =
                    self.terminals.iter().map(|g| uf.find(g[0])).collect();
                let part = NonCrossingOutcome::from_labels(&labels);
                if !part.is_non_crossing() {
                    return Err(Error::InvalidArgument(format!(
                        "region {}: completion produced a crossing partition {} (non-planar adjacency?)",
                        self.name,
                        part.atom_name()
                    )));
                }
                poset
                    .atom_index(&part.atom_name())
                    .ok_or_else(|| Error::Internal("partition missing from outcome poset".into()))
            }
            Quotient::Gap2Lin3 => {
                let r1 = uf.find(self.terminals[0][0]);
                let r2 = uf.find(self.terminals[1][0]);
                let r3 = uf.find(self.terminals[2][0]);
                let atom = if r1 == r2 {
                    "T"
                } else if r2 == r3 {
                    "a"
                } else {
                    "B"
                };
                Ok(poset.atom_index(atom).unwrap())
            }
            Quotient::Fork => {
                let r1 = uf.find(self.terminals[0][0]);
                let r2 = uf.find(self.terminals[1][0]);
                let r3 = uf.find(self.terminals[2][0]);
                let atom = if r1 == r2 && r2 == r3 {
                    "T"
                } else if r1 == r3 {
                    "b"
                } else if r2 == r3 {
                    "a"
                } else {
                    "B"
                };
                Ok(poset.atom_index(atom).unwrap())
            }
            Quotient::OneSided3 | Quotient::OneSided4 => {
                let black_conn = edge_root(&mut uf, "b1") == edge_root(&mut uf, "b2");
                let white_conn = edge_root(&mut uf, "w1") == edge_root(&mut uf, "w2");
                let atom = if black_conn {
                    "T"
                } else if white_conn {
                    "B"
                } else if self.quotient == Quotient::OneSided4 {
                    let g = self.index[&self.gap.unwrap()];
                    match Self::color_at(states, g) {
                        Color::Black => "b",
                        Color::White => "a",
                    }
                } else {
                    "a"
                };
                Ok(poset.atom_index(atom).unwrap())
            }
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Result of evaluating a region: the outcome universe, the canonical value,
/// and the transposition table of all evaluated subpositions.
pub struct RegionEval {
    pub universe: Universe,
    pub value: GameId,
    pub table: FxHashMap<u32, GameId>,
}

/// Canonical game value of the region by exhaustive play: Black colors a
/// cell black, White white; leaves are outcomes; every interior node is
/// canonicalized; positions are shared through a transposition table keyed
/// by the exact stone configuration.
pub fn region_value(region: &Region) -> Result<RegionEval> {
    let empties = region.empty_cells();
    if empties.len() > region.budget {
        return Err(Error::ResourceLimit(format!(
            "region {} has {} empty cells, budget is {}",
            region.name,
            empties.len(),
            region.budget
        )));
    }
    if empties.len() > 16 {
        return Err(Error::ResourceLimit("transposition key supports at most 16 empties".into()));
    }
    let poset = region.outcome_poset()?;
    let mut universe = Universe::new(poset);
    let mut table: FxHashMap<u32, GameId> = FxHashMap::default();
    let value = eval_rec(region, &mut universe, &empties, 0, &mut table)?;
    Ok(RegionEval { universe, value, table })
}

/// Board state key: two bits per empty cell (0 empty, 1 black, 2 white).
fn eval_rec(
    region: &Region,
    u: &mut Universe,
    empties: &[usize],
    state: u32,
    table: &mut FxHashMap<u32, GameId>,
) -> Result<GameId> {
    if let Some(&v) = table.get(&state) {
        return Ok(v);
    }
    let open: Vec<usize> = (0..empties.len())
        .filter(|&k| state >> (2 * k) & 3 == 0)
        .collect();
    let v = if open.is_empty() {
        let fill: Vec<Color> = (0..empties.len())
            .map(|k| {
                if state >> (2 * k) & 3 == 1 {
                    Color::Black
                } else {
                    Color::White
                }
            })
            .collect();
        let poset = u.poset().clone();
        let atom = region.outcome_of(&poset, &fill)?;
        u.atomic(atom)?
    } else {
        let mut lefts = Vec::with_capacity(open.len());
        let mut rights = Vec::with_capacity(open.len());
        for &k in &open {
            lefts.push(eval_rec(region, u, empties, state | 1 << (2 * k), table)?);
            rights.push(eval_rec(region, u, empties, state | 2 << (2 * k), table)?);
        }
        let g = u.comp(&lefts, &rights);
        canonical_form(u, g)
    };
    table.insert(state, v);
    Ok(v)
}

/// Cells whose color never affects the outcome, decided by exhaustive check
/// over the completions of the remaining cells.
#[allow(clippy::needless_range_loop)]
pub fn dead_cells(region: &Region) -> Result<Vec<(i32, i32)>> {
    let empties = region.empty_cells();
    if empties.len() > region.budget {
        return Err(Error::ResourceLimit("dead_cells exceeds the cell budget".into()));
    }
    let poset = region.outcome_poset()?;
    let n = empties.len();
    let mut dead = Vec::new();
    'cells: for k in 0..n {
        for mask in 0u32..1 << (n - 1) {
            let mut fill_b = Vec::with_capacity(n);
            let mut fill_w = Vec::with_capacity(n);
            let mut bit = 0;
            for j in 0..n {
                if j == k {
                    fill_b.push(Color::Black);
                    fill_w.push(Color::White);
                } else {
                    let c = if mask >> bit & 1 == 1 { Color::Black } else { Color::White };
                    fill_b.push(c);
                    fill_w.push(c);
                    bit += 1;
                }
            }
            if region.outcome_of(&poset, &fill_b)? != region.outcome_of(&poset, &fill_w)? {
                continue 'cells;
            }
        }
        dead.push(region.coord(empties[k]));
    }
    Ok(dead)
}

/// Counts Black's connected components over the region's cells.
#[allow(clippy::needless_range_loop)]
fn black_components(region: &Region, states: &[CellState]) -> usize {
    let n = region.coords.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        if states[i] != CellState::Stone(Color::Black) {
            continue;
        }
        for &j in &region.neighbors[i] {
            if j > i && states[j] == CellState::Stone(Color::Black) {
                uf.union(i, j);
            }
        }
    }
    let mut roots = Vec::new();
    for i in 0..n {
        if states[i] == CellState::Stone(Color::Black) {
            let r = uf.find(i);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
    }
    roots.len()
}

/// Flips one black stone of a filled board to white and returns the change
/// in Black's component count. On hex adjacency the change can never exceed
/// +2; a larger delta is a property violation.
pub fn component_delta_check(
    region: &Region,
    fill: &[Color],
    cell: (i32, i32),
) -> Result<i32> {
    let empties = region.empty_cells();
    if fill.len() != empties.len() {
        return Err(Error::InvalidArgument("completion size mismatch".into()));
    }
    let mut states = region.stones.clone();
    for (k, &i) in empties.iter().enumerate() {
        states[i] = CellState::Stone(fill[k]);
    }
    let idx = region
        .cell_index(cell)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown cell {cell:?}")))?;
    if states[idx] != CellState::Stone(Color::Black) {
        return Err(Error::Precondition("component_delta_check cell must be black".into()));
    }
    let before = black_components(region, &states) as i32;
    let mut flipped = states;
    flipped[idx] = CellState::Stone(Color::White);
    let after = black_components(region, &flipped) as i32;
    let delta = after - before;
    if !region.has_overrides && delta > 2 {
        return Err(Error::PropertyViolation(format!(
            "flipping {cell:?} raised Black's component count by {delta}"
        )));
    }
    Ok(delta)
}

/// Report of the 4-terminal star sweep.
#[derive(Debug, Clone, Copy)]
pub struct NoStarReport {
    pub regions_checked: usize,
    pub positions_checked: usize,
}

/// Exhaustively sweeps a family of small 4-terminal Hex regions and checks
/// that no position in any of them has value `{top|bottom}` over the
/// 4-terminal outcome poset. The family: every w x h parallelogram interior
/// with at most `max_empty` cells, surrounded by its boundary ring, over all
/// ring colorings with exactly four black arcs.
pub fn no_star_4terminal(max_empty: usize) -> Result<NoStarReport> {
    if max_empty > 7 {
        return Err(Error::ResourceLimit("no_star sweep supports at most 7 empty cells".into()));
    }
    let mut regions_checked = 0usize;
    let mut positions_checked = 0usize;
    for w in 1..=max_empty.max(1) as i32 {
        for h in 1..=max_empty.max(1) as i32 {
            if (w * h) as usize > max_empty {
                continue;
            }
            let interior: Vec<(i32, i32)> =
                (1..=h).flat_map(|r| (1..=w).map(move |c| (r, c))).collect();
            let ring = boundary_ring(&interior)?;
            let m = ring.len();
            for coloring in 0u32..1 << m {
                let colors: Vec<Color> = (0..m)
                    .map(|i| if coloring >> i & 1 == 1 { Color::Black } else { Color::White })
                    .collect();
                let arcs = black_arcs(&colors);
                if arcs.len() != 4 {
                    continue;
                }
                let mut cells: Vec<((i32, i32), CellState)> =
                    interior.iter().map(|&p| (p, CellState::Empty)).collect();
                for (i, &p) in ring.iter().enumerate() {
                    cells.push((p, CellState::Stone(colors[i])));
                }
                let terminals: Vec<Vec<(i32, i32)>> = arcs
                    .iter()
                    .map(|arc| arc.iter().map(|&i| ring[i]).collect())
                    .collect();
                let region = Region::new(
                    format!("sweep{w}x{h}-{coloring}"),
                    cells,
                    terminals,
                    Vec::new(),
                    Vec::new(),
                    None,
                    Quotient::NTerminal,
                )?;
                regions_checked += 1;
                let eval = region_value(&region)?;
                positions_checked += eval.table.len();
                let mut u = eval.universe;
                let top = u.top_game()?;
                let bot = u.bottom_game()?;
                let star = u.comp(&[top], &[bot]);
                let star_c = canonical_form(&mut u, star);
                for (&_, &v) in &eval.table {
                    if v == star_c {
                        return Err(Error::PropertyViolation(format!(
                            "region {} contains a position of value {{top|bottom}}",
                            region.name
                        )));
                    }
                }
            }
        }
    }
    Ok(NoStarReport { regions_checked, positions_checked })
}

/// The octagon analog: a single empty cell with eight neighbors via
/// adjacency overrides, surrounded by alternating black and white stones.
/// Its value is `{top|bottom}`, showing the sweep result is Hex-specific.
pub fn octagon_region() -> Result<Region> {
    let mut cells: Vec<((i32, i32), CellState)> = vec![((0, 0), CellState::Empty)];
    let mut terminals = Vec::new();
    let mut adjacency = Vec::new();
    for i in 0..8i32 {
        let p = (10, 10 + i); // a straight ring row: consecutive cells adjacent
        let color = if i % 2 == 0 { Color::Black } else { Color::White };
        cells.push((p, CellState::Stone(color)));
        adjacency.push(((0, 0), p));
        if i % 2 == 0 {
            terminals.push(vec![p]);
        }
    }
    Region::new("octagon", cells, terminals, Vec::new(), adjacency, None, Quotient::NTerminal)
}

/// Line-oriented region file format.
///
/// ```text
/// region <name>
/// cell r c [B|W|.]
/// terminal <k>: (r,c) (r,c) ...
/// edge <name> <B|W>: (r,c) ...
/// adjacency add r1 c1 r2 c2
/// gap r c
/// quotient <nterminal|gap2lin3|fork|onesided3|onesided4>
/// budget <n>
/// ```
pub fn parse_region(text: &str) -> Result<Region> {
    let mut name = None;
    let mut cells: Vec<((i32, i32), CellState)> = Vec::new();
    let mut terminals: Vec<(usize, Vec<(i32, i32)>)> = Vec::new();
    let mut edges: Vec<EdgeDecl> = Vec::new();
    let mut adjacency: Vec<((i32, i32), (i32, i32))> = Vec::new();
    let mut gap = None;
    let mut quotient = Quotient::NTerminal;
    let mut budget = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lno = lineno + 1;
        let mut words = line.split_whitespace();
        match words.next().unwrap() {
            "region" => {
                name = Some(words.collect::<Vec<_>>().join(" "));
            }
            "cell" => {
                let r = parse_int(words.next(), lno)?;
                let c = parse_int(words.next(), lno)?;
                let s = match words.next() {
                    Some("B") => CellState::Stone(Color::Black),
                    Some("W") => CellState::Stone(Color::White),
                    Some(".") | None => CellState::Empty,
                    Some(other) => {
                        return Err(Error::parse(lno, 1, format!("bad cell state {other:?}")))
                    }
                };
                cells.push(((r, c), s));
            }
            "terminal" => {
                let id_part = words
                    .next()
                    .ok_or_else(|| Error::parse(lno, 1, "terminal needs an index"))?;
                let id: usize = id_part
                    .trim_end_matches(':')
                    .parse()
                    .map_err(|_| Error::parse(lno, 1, "bad terminal index"))?;
                let coords = parse_coord_list(&words.collect::<Vec<_>>().join(" "), lno)?;
                terminals.push((id, coords));
            }
            "edge" => {
                let ename = words
                    .next()
                    .ok_or_else(|| Error::parse(lno, 1, "edge needs a name"))?
                    .to_string();
                let color = match words.next().map(|w| w.trim_end_matches(':')) {
                    Some("B") => Color::Black,
                    Some("W") => Color::White,
                    _ => return Err(Error::parse(lno, 1, "edge needs a color B or W")),
                };
                let coords = parse_coord_list(&words.collect::<Vec<_>>().join(" "), lno)?;
                edges.push((ename, color, coords));
            }
            "adjacency" => {
                if words.next() != Some("add") {
                    return Err(Error::parse(lno, 1, "expected `adjacency add`"));
                }
                let r1 = parse_int(words.next(), lno)?;
                let c1 = parse_int(words.next(), lno)?;
                let r2 = parse_int(words.next(), lno)?;
                let c2 = parse_int(words.next(), lno)?;
                adjacency.push(((r1, c1), (r2, c2)));
            }
            "gap" => {
                let r = parse_int(words.next(), lno)?;
                let c = parse_int(words.next(), lno)?;
                gap = Some((r, c));
            }
            "quotient" => {
                quotient = match words.next() {
                    Some("nterminal") => Quotient::NTerminal,
                    Some("gap2lin3") => Quotient::Gap2Lin3,
                    Some("fork") => Quotient::Fork,
                    Some("onesided3") => Quotient::OneSided3,
                    Some("onesided4") => Quotient::OneSided4,
                    other => {
                        return Err(Error::parse(lno, 1, format!("unknown quotient {other:?}")))
                    }
                };
            }
            "budget" => {
                budget = Some(parse_int(words.next(), lno)? as usize);
            }
            other => return Err(Error::parse(lno, 1, format!("unrecognized directive {other:?}"))),
        }
    }
    let name = name.ok_or_else(|| Error::parse(1, 1, "missing `region <name>` header"))?;
    terminals.sort_by_key(|(id, _)| *id);
    for (i, (id, _)) in terminals.iter().enumerate() {
        if *id != i + 1 {
            return Err(Error::InvalidArgument(
                "terminals must be numbered 1..n without gaps".into(),
            ));
        }
    }
    let terminal_groups = terminals.into_iter().map(|(_, g)| g).collect();
    let mut region = Region::new(name, cells, terminal_groups, edges, adjacency, gap, quotient)?;
    if let Some(b) = budget {
        region.set_budget(b);
    }
    Ok(region)
}

fn parse_int(w: Option<&str>, lno: usize) -> Result<i32> {
    w.and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(lno, 1, "expected an integer"))
}

fn parse_coord_list(s: &str, lno: usize) -> Result<Vec<(i32, i32)>> {
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        let inner = tok
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::parse(lno, 1, format!("expected (r,c), got {tok:?}")))?;
        let mut parts = inner.split(',');
        let r: i32 = parts
            .next()
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| Error::parse(lno, 1, "bad coordinate"))?;
        let c: i32 = parts
            .next()
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| Error::parse(lno, 1, "bad coordinate"))?;
        out.push((r, c));
    }
    if out.is_empty() {
        return Err(Error::parse(lno, 1, "expected at least one coordinate"));
    }
    Ok(out)
}

/// Boundary cells of a connected interior, in cyclic order.
fn boundary_ring(interior: &[(i32, i32)]) -> Result<Vec<(i32, i32)>> {
    use std::collections::HashSet;
    let inside: HashSet<(i32, i32)> = interior.iter().copied().collect();
    let mut ring: Vec<(i32, i32)> = Vec::new();
    for &(r, c) in interior {
        for p in hex_neighbors(r, c) {
            if !inside.contains(&p) && !ring.contains(&p) {
                ring.push(p);
            }
        }
    }
    // order by angle around the centroid in the hex embedding
    let embed = |(r, c): (i32, i32)| -> (f64, f64) {
        (c as f64 + r as f64 * 0.5, r as f64 * 0.866_025_403_784_438_6)
    };
    let (mut cx, mut cy) = (0.0, 0.0);
    for &p in interior {
        let (x, y) = embed(p);
        cx += x;
        cy += y;
    }
    cx /= interior.len() as f64;
    cy /= interior.len() as f64;
    ring.sort_by(|&a, &b| {
        let (ax, ay) = embed(a);
        let (bx, by) = embed(b);
        let ta = (ay - cy).atan2(ax - cx);
        let tb = (by - cy).atan2(bx - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    // the ring of a convex patch is a simple cycle: consecutive cells adjacent
    let m = ring.len();
    for i in 0..m {
        let (r, c) = ring[i];
        let next = ring[(i + 1) % m];
        if !hex_neighbors(r, c).contains(&next) {
            return Err(Error::Internal("boundary ring is not a simple cycle".into()));
        }
    }
    Ok(ring)
}

/// Maximal cyclic runs of black cells, as index lists into the ring.
fn black_arcs(colors: &[Color]) -> Vec<Vec<usize>> {
    let m = colors.len();
    if colors.iter().all(|&c| c == Color::Black) {
        return vec![(0..m).collect()];
    }
    // rotate so position 0 is white, then take linear runs
    let start = colors.iter().position(|&c| c == Color::White).unwrap();
    let mut arcs = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    for k in 0..m {
        let i = (start + k) % m;
        if colors[i] == Color::Black {
            cur.push(i);
        } else if !cur.is_empty() {
            arcs.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        arcs.push(cur);
    }
    arcs
}
