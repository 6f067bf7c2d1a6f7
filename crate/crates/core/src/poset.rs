//! Finite outcome posets: the universes of atomic outcomes that games are
//! played over.
//!
//! A poset is immutable after construction. The order is kept as a dense bit
//! matrix closed under transitivity, so `leq` queries are O(1).

use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Index of an atom within its poset.
pub type AtomId = usize;

/// Dense boolean matrix used for the order relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct BitMatrix {
    n: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = (n * n).div_ceil(64);
        BitMatrix { n, bits: vec![0; words] }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> bool {
        let k = i * self.n + j;
        self.bits[k / 64] >> (k % 64) & 1 != 0
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize) {
        let k = i * self.n + j;
        self.bits[k / 64] |= 1 << (k % 64);
    }
}

/// A finite partially ordered set of named atoms.
#[derive(Clone, Debug)]
pub struct Poset {
    name: String,
    atoms: Vec<String>,
    leq: BitMatrix,
    top: Option<AtomId>,
    bottom: Option<AtomId>,
    content_hash: u64,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.content_hash == other.content_hash
            && self.atoms == other.atoms
            && self.leq == other.leq
    }
}
impl Eq for Poset {}

/// Checks that a name is usable as an atom in the game expression grammar.
///
/// Metacharacters `{` `}` `|` and whitespace are never allowed. A comma is
/// allowed only inside balanced parentheses, so that product atoms such as
/// `(a,b)` survive a round trip through the grammar.
pub fn validate_atom_name(name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(Error::InvalidArgument("empty atom name".into()));
    }
    let mut depth = 0i32;
    for ch in name.chars() {
        match ch {
            '{' | '}' | '|' => {
                return Err(Error::InvalidArgument(format!(
                    "atom name {name:?} contains grammar metacharacter {ch:?}"
                )))
            }
            c if c.is_whitespace() => {
                return Err(Error::InvalidArgument(format!(
                    "atom name {name:?} contains whitespace"
                )))
            }
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::InvalidArgument(format!(
                        "atom name {name:?} has unbalanced parentheses"
                    )));
                }
            }
            ',' if depth == 0 => {
                return Err(Error::InvalidArgument(format!(
                    "atom name {name:?} contains a comma outside parentheses"
                )))
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::InvalidArgument(format!(
            "atom name {name:?} has unbalanced parentheses"
        )));
    }
    Ok(())
}

impl Poset {
    /// Builds a poset from an arbitrary relation given as `leq(i, j)` pairs.
    ///
    /// The relation is closed reflexively and transitively, then checked for
    /// antisymmetry. Atom names are validated against the grammar.
    pub fn new(
        name: impl Into<String>,
        atoms: Vec<String>,
        relation: &[(usize, usize)],
    ) -> Result<Self> {
        let n = atoms.len();
        if n == 0 {
            return Err(Error::InvalidArgument("poset must have at least one atom".into()));
        }
        for a in &atoms {
            validate_atom_name(a)?;
        }
        {
            let mut seen = std::collections::HashSet::new();
            for a in &atoms {
                if !seen.insert(a.as_str()) {
                    return Err(Error::InvalidArgument(format!("duplicate atom name {a:?}")));
                }
            }
        }
        let mut leq = BitMatrix::new(n);
        for i in 0..n {
            leq.set(i, i);
        }
        for &(i, j) in relation {
            if i >= n || j >= n {
                return Err(Error::InvalidArgument("relation index out of range".into()));
            }
            leq.set(i, j);
        }
        // Warshall transitive closure.
        for k in 0..n {
            for i in 0..n {
                if leq.get(i, k) {
                    for j in 0..n {
                        if leq.get(k, j) {
                            leq.set(i, j);
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq.get(i, j) && leq.get(j, i) {
                    return Err(Error::InvalidArgument(format!(
                        "relation is not antisymmetric: {} and {} are mutually below each other",
                        atoms[i], atoms[j]
                    )));
                }
            }
        }
        let top = (0..n).find(|&t| (0..n).all(|i| leq.get(i, t)));
        let bottom = (0..n).find(|&b| (0..n).all(|i| leq.get(b, i)));
        let mut poset = Poset {
            name: name.into(),
            atoms,
            leq,
            top,
            bottom,
            content_hash: 0,
        };
        poset.content_hash = poset.compute_hash();
        Ok(poset)
    }

    fn compute_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.atoms.hash(&mut h);
        self.leq.hash(&mut h);
        h.finish()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty atom sets
    }

    pub fn atom_name(&self, a: AtomId) -> &str {
        &self.atoms[a]
    }

    pub fn atoms(&self) -> impl Iterator<Item = (AtomId, &str)> {
        self.atoms.iter().enumerate().map(|(i, s)| (i, s.as_str()))
    }

    pub fn atom_index(&self, name: &str) -> Option<AtomId> {
        self.atoms.iter().position(|a| a == name)
    }

    #[inline]
    pub fn leq(&self, a: AtomId, b: AtomId) -> bool {
        self.leq.get(a, b)
    }

    pub fn top(&self) -> Option<AtomId> {
        self.top
    }

    pub fn bottom(&self) -> Option<AtomId> {
        self.bottom
    }

    /// Identifies the poset contents independently of its display name.
    pub fn content_hash(&self) -> u64 {
        self.content_hash
    }

    pub fn is_linear(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.leq(i, j) || self.leq(j, i)))
    }

    /// Covering pairs (a, b): a < b with nothing strictly between.
    pub fn covers(&self) -> Vec<(AtomId, AtomId)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                let direct = (0..n)
                    .all(|c| c == a || c == b || !(self.leq(a, c) && self.leq(c, b)));
                if direct {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Two atoms incomparable in the order, if any exist.
    pub fn incomparable_pair(&self) -> Option<(AtomId, AtomId)> {
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                if !self.leq(a, b) && !self.leq(b, a) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Serializes in the line-oriented poset text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "poset {}", self.name);
        let _ = writeln!(s, "atoms: {}", self.atoms.join(" "));
        for (a, b) in self.covers() {
            let _ = writeln!(s, "cover: {} < {}", self.atoms[a], self.atoms[b]);
        }
        s
    }

    /// Parses the line-oriented poset text format.
    ///
    /// Header `poset <name>`, one `atoms:` line, any number of `cover: x < y`
    /// lines. `#` starts a comment. Order is the reflexive-transitive closure
    /// of the covers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut atoms: Vec<String> = Vec::new();
        let mut covers: Vec<(usize, usize)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lno = lineno + 1;
            if let Some(rest) = line.strip_prefix("poset ") {
                name = Some(rest.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("atoms:") {
                if !atoms.is_empty() {
                    return Err(Error::parse(lno, 1, "duplicate atoms line"));
                }
                atoms = rest.split_whitespace().map(|s| s.to_string()).collect();
            } else if let Some(rest) = line.strip_prefix("cover:") {
                let mut parts = rest.split('<');
                let x = parts.next().map(str::trim).unwrap_or("");
                let y = parts.next().map(str::trim).unwrap_or("");
                if x.is_empty() || y.is_empty() || parts.next().is_some() {
                    return Err(Error::parse(lno, 1, "expected `cover: x < y`"));
                }
                let xi = atoms.iter().position(|a| a == x).ok_or_else(|| {
                    Error::parse(lno, 1, format!("unknown atom {x:?} in cover"))
                })?;
                let yi = atoms.iter().position(|a| a == y).ok_or_else(|| {
                    Error::parse(lno, 1, format!("unknown atom {y:?} in cover"))
                })?;
                covers.push((xi, yi));
            } else {
                return Err(Error::parse(lno, 1, format!("unrecognized line {line:?}")));
            }
        }
        let name = name.ok_or_else(|| Error::parse(1, 1, "missing `poset <name>` header"))?;
        if atoms.is_empty() {
            return Err(Error::parse(1, 1, "missing `atoms:` line"));
        }
        Poset::new(name, atoms, &covers)
    }
}

/// The linearly ordered poset with `n` atoms: `B < a < b < ... < T`.
///
/// For n = 1 the single atom `B` is both top and bottom.
pub fn linear_poset(n: usize) -> Result<Poset> {
    if n == 0 {
        return Err(Error::InvalidArgument("linear poset needs at least one atom".into()));
    }
    let atoms = chain_names(n);
    let covers: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Poset::new(format!("lin{n}"), atoms, &covers)
}

fn chain_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["B".into()],
        _ => {
            let mut v = vec!["B".to_string()];
            for i in 0..n - 2 {
                v.push(((b'a' + i as u8) as char).to_string());
            }
            v.push("T".into());
            v
        }
    }
}

/// Bottom, `k` pairwise incomparable middle atoms, top.
pub fn antichain_poset(k: usize) -> Result<Poset> {
    if k == 0 {
        return Err(Error::InvalidArgument("antichain poset needs k >= 1".into()));
    }
    if k > 24 {
        return Err(Error::ResourceLimit(format!("antichain middle count {k} too large")));
    }
    let mut atoms = vec!["B".to_string()];
    for i in 0..k {
        atoms.push(((b'a' + i as u8) as char).to_string());
    }
    atoms.push("T".into());
    let mut covers = Vec::new();
    for m in 1..=k {
        covers.push((0, m));
        covers.push((m, k + 1));
    }
    Poset::new(format!("antichain{k}"), atoms, &covers)
}

/// A partition of terminals `1..=n` into disjoint blocks, non-crossing with
/// respect to the cyclic terminal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NonCrossingOutcome {
    /// Blocks sorted by minimum element; each block sorted ascending.
    blocks: Vec<Vec<u8>>,
}

impl NonCrossingOutcome {
    /// Builds a partition from a class label per terminal (labels arbitrary).
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut groups: Vec<(usize, Vec<u8>)> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            match groups.iter_mut().find(|(g, _)| *g == l) {
                Some((_, v)) => v.push(i as u8 + 1),
                None => groups.push((l, vec![i as u8 + 1])),
            }
        }
        let mut blocks: Vec<Vec<u8>> = groups.into_iter().map(|(_, v)| v).collect();
        blocks.sort();
        NonCrossingOutcome { blocks }
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    /// Two terminals share a block.
    pub fn connected(&self, a: u8, b: u8) -> bool {
        self.blocks.iter().any(|bl| bl.contains(&a) && bl.contains(&b))
    }

    /// True when no two blocks interleave in the cyclic order. Blocks
    /// {..a..c..} and {..b..d..} with a < b < c < d would cross.
    pub fn is_non_crossing(&self) -> bool {
        for (i, x) in self.blocks.iter().enumerate() {
            for y in self.blocks.iter().skip(i + 1) {
                for w in x.windows(2) {
                    let (a, c) = (w[0], w[1]);
                    if y.iter().any(|&b| a < b && b < c) && y.iter().any(|&d| d < a || d > c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Refinement order: every pair connected in `self` is connected in `other`.
    pub fn refines(&self, other: &NonCrossingOutcome) -> bool {
        self.blocks.iter().all(|bl| {
            bl.windows(2).all(|w| other.connected(w[0], w[1]))
        })
    }

    /// Atom-name form: blocks joined by `.`, terminals concatenated, e.g. `12.3`.
    pub fn atom_name(&self) -> String {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|t| t.to_string()).collect::<String>())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Enumerates all non-crossing partitions of 1..=n.
pub fn non_crossing_partitions(n: usize) -> Vec<NonCrossingOutcome> {
    // Enumerate all set partitions via restricted growth strings, filter.
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(labels: &mut Vec<usize>, i: usize, maxl: usize, out: &mut Vec<NonCrossingOutcome>) {
        let n = labels.len();
        if i == n {
            let p = NonCrossingOutcome::from_labels(labels);
            if p.is_non_crossing() {
                out.push(p);
            }
            return;
        }
        for l in 0..=maxl {
            labels[i] = l;
            rec(labels, i + 1, maxl.max(l + 1), out);
        }
    }
    rec(&mut labels, 0, 0, &mut out);
    out.sort();
    out
}

/// Outcome poset of an n-terminal region: all non-crossing partitions of the
/// terminals, ordered by connection refinement.
pub fn non_crossing_poset(n: usize) -> Result<Poset> {
    if n == 0 || n > 8 {
        return Err(Error::ResourceLimit(format!(
            "non-crossing poset supports 1..=8 terminals, got {n}"
        )));
    }
    let parts = non_crossing_partitions(n);
    let atoms: Vec<String> = parts.iter().map(|p| p.atom_name()).collect();
    let mut rel = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        for (j, q) in parts.iter().enumerate() {
            if i != j && p.refines(q) {
                rel.push((i, j));
            }
        }
    }
    Poset::new(format!("nc{n}"), atoms, &rel)
}

/// Componentwise product order on pairs; atoms named `(x,y)`.
pub fn product_poset(a: &Poset, b: &Poset) -> Result<Poset> {
    let mut atoms = Vec::with_capacity(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            atoms.push(format!("({},{})", a.atom_name(i), b.atom_name(j)));
        }
    }
    let nb = b.len();
    let mut rel = Vec::new();
    for i1 in 0..a.len() {
        for j1 in 0..nb {
            for i2 in 0..a.len() {
                for j2 in 0..nb {
                    if a.leq(i1, i2) && b.leq(j1, j2) {
                        rel.push((i1 * nb + j1, i2 * nb + j2));
                    }
                }
            }
        }
    }
    Poset::new(format!("({}x{})", a.name(), b.name()), atoms, &rel)
}

/// Index of the pair atom `(i, j)` in `product_poset(a, b)`.
pub fn product_atom(b_len: usize, i: AtomId, j: AtomId) -> AtomId {
    i * b_len + j
}

/// Same atoms, reversed order. Top and bottom swap.
pub fn opposite_poset(a: &Poset) -> Result<Poset> {
    let atoms: Vec<String> = a.atoms().map(|(_, s)| s.to_string()).collect();
    let mut rel = Vec::new();
    for i in 0..a.len() {
        for j in 0..a.len() {
            if a.leq(j, i) {
                rel.push((i, j));
            }
        }
    }
    Poset::new(format!("{}^op", a.name()), atoms, &rel)
}

/// True iff `f` (a total atom table from `a` into `b`) preserves order.
pub fn monotone_map_check(a: &Poset, b: &Poset, f: &[AtomId]) -> Result<bool> {
    if f.len() != a.len() {
        return Err(Error::InvalidArgument(format!(
            "map table has {} entries for a poset of {} atoms",
            f.len(),
            a.len()
        )));
    }
    for &t in f {
        if t >= b.len() {
            return Err(Error::InvalidArgument("map targets unknown atom".into()));
        }
    }
    for i in 0..a.len() {
        for j in 0..a.len() {
            if a.leq(i, j) && !b.leq(f[i], f[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
