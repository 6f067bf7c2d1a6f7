//! Desk-scale falsification guards: the component-count bound under stone
//! flips, and the 4-terminal star sweep with its adjacency-override foil.

use hexval::canonical::canonical_form;
use hexval::region::{
    component_delta_check, no_star_4terminal, octagon_region, region_value, CellState, Color,
    Quotient, Region,
};
use hexval::testkit::Rng;

/// 10^4 random filled parallelogram boards: flipping any black stone raises
/// Black's component count by at most 2.
#[test]
fn component_delta_fuzz() {
    let mut rng = Rng::new(0xF1122);
    let mut checked = 0usize;
    while checked < 10_000 {
        let w = 2 + rng.below(4) as i32;
        let h = 2 + rng.below(4) as i32;
        let cells: Vec<((i32, i32), CellState)> = (1..=h)
            .flat_map(|r| (1..=w).map(move |c| (r, c)))
            .map(|p| (p, CellState::Empty))
            .collect();
        // a 2-terminal shell far away keeps the region valid
        let mut cells = cells;
        cells.push(((100, 100), CellState::Stone(Color::Black)));
        cells.push(((200, 200), CellState::Stone(Color::Black)));
        let region = Region::new(
            "fuzz",
            cells,
            vec![vec![(100, 100)], vec![(200, 200)]],
            Vec::new(),
            Vec::new(),
            None,
            Quotient::NTerminal,
        )
        .unwrap();
        let empties = region.empty_cells();
        let fill: Vec<Color> = (0..empties.len())
            .map(|_| if rng.chance(1, 2) { Color::Black } else { Color::White })
            .collect();
        let blacks: Vec<usize> = (0..empties.len())
            .filter(|&i| fill[i] == Color::Black)
            .collect();
        if blacks.is_empty() {
            continue;
        }
        let pick = blacks[rng.below(blacks.len())];
        let coord = region.coord(empties[pick]);
        let delta = component_delta_check(&region, &fill, coord)
            .expect("delta within the hex bound");
        assert!(delta <= 2);
        checked += 1;
    }
}

/// Deliberate violations are reported, not silently returned.
#[test]
fn component_delta_rejects_white_cell() {
    let region = Region::new(
        "tiny",
        vec![
            ((1, 1), CellState::Stone(Color::Black)),
            ((1, 2), CellState::Empty),
            ((1, 3), CellState::Stone(Color::Black)),
        ],
        vec![vec![(1, 1)], vec![(1, 3)]],
        Vec::new(),
        Vec::new(),
        None,
        Quotient::NTerminal,
    )
    .unwrap();
    assert!(component_delta_check(&region, &[Color::White], (1, 2)).is_err());
}

/// No small 4-terminal Hex region contains a position of value {top|bottom}.
#[test]
fn no_star_sweep_up_to_four_empties() {
    let report = no_star_4terminal(4).expect("sweep must come back clean");
    assert!(report.regions_checked > 100, "sweep family too small");
    assert!(report.positions_checked > report.regions_checked);
}

/// The octagon adjacency override does produce {top|bottom}, so the sweep
/// result is specific to hex adjacency.
#[test]
fn octagon_produces_star() {
    let region = octagon_region().unwrap();
    assert!(region.has_adjacency_overrides());
    let eval = region_value(&region).unwrap();
    let mut u = eval.universe;
    let top = u.top_game().unwrap();
    let bot = u.bottom_game().unwrap();
    let star = u.compose(&[top], &[bot]).unwrap();
    let star = canonical_form(&mut u, star);
    assert_eq!(eval.value, star);
}

/// The octagon fixture file matches the built-in builder.
#[test]
fn octagon_fixture_file() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/regions/");
    let text = std::fs::read_to_string(format!("{root}octagon.region")).unwrap();
    let region = hexval::region::parse_region(&text).unwrap();
    let eval = region_value(&region).unwrap();
    assert_eq!(
        hexval::text::print_game(&eval.universe, eval.value),
        "{1234|1.2.3.4}"
    );
}

/// Free-move desk check: on a small 4-terminal region where Black moving
/// first can connect all terminals, one free White move still leaves Black a
/// first-player strategy connecting at least two of them. Decided by direct
/// minimax over outcomes scored by largest connected terminal block.
#[test]
fn free_moves_cost_at_most_two_terminals_each() {
    use hexval::poset::NonCrossingOutcome;

    // a 2x3 interior whose ring carries four black terminals, each touching
    // two interior cells, so Black moving first can link them all
    let interior = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)];
    let ring_black = [(0, 2), (1, 4), (3, 2), (3, 1)]; // cyclic order
    let mut cells: Vec<((i32, i32), CellState)> =
        interior.iter().map(|&p| (p, CellState::Empty)).collect();
    for &p in &ring_black {
        cells.push((p, CellState::Stone(Color::Black)));
    }
    let region = Region::new(
        "freemove",
        cells,
        ring_black.iter().map(|&p| vec![p]).collect(),
        Vec::new(),
        Vec::new(),
        None,
        Quotient::NTerminal,
    )
    .unwrap();
    let poset = region.outcome_poset().unwrap();
    let empties = region.empty_cells();
    let n = empties.len();

    // minimax on the raw position: Black maximizes the largest block of
    // terminals in the final partition, White minimizes it
    fn biggest_block(poset: &hexval::Poset, atom: usize) -> usize {
        let name = poset.atom_name(atom);
        name.split('.').map(|b| b.len()).max().unwrap_or(1)
    }
    fn minimax(
        region: &Region,
        poset: &hexval::Poset,
        fill: &mut Vec<Option<Color>>,
        black_to_move: bool,
    ) -> usize {
        if fill.iter().all(|c| c.is_some()) {
            let total: Vec<Color> = fill.iter().map(|c| c.unwrap()).collect();
            let atom = region.outcome_of(poset, &total).unwrap();
            return biggest_block(poset, atom);
        }
        let mut best = if black_to_move { 0 } else { usize::MAX };
        for i in 0..fill.len() {
            if fill[i].is_some() {
                continue;
            }
            fill[i] = Some(if black_to_move { Color::Black } else { Color::White });
            let score = minimax(region, poset, fill, !black_to_move);
            fill[i] = None;
            if black_to_move {
                best = best.max(score);
            } else {
                best = best.min(score);
            }
        }
        best
    }

    // Black moving first connects all four terminals
    let mut fill: Vec<Option<Color>> = vec![None; n];
    let all = minimax(&region, &poset, &mut fill, true);
    assert_eq!(all, 4, "Black first must connect all four terminals");
    let _ = NonCrossingOutcome::from_labels(&[0, 0, 0, 0]);

    // every single free White move leaves Black at least 4 - 2 = 2
    for free in 0..n {
        let mut fill: Vec<Option<Color>> = vec![None; n];
        fill[free] = Some(Color::White);
        let forced = minimax(&region, &poset, &mut fill, true);
        assert!(
            forced >= 2,
            "after a free White move at {:?} Black only forces a block of {forced}",
            region.coord(empties[free])
        );
    }
}

/// Transposition caching does not change values: a cache-free replay of a
/// region evaluation reproduces the same canonical value text.
#[test]
fn transposition_cache_agrees_with_plain_recursion() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/regions/");
    let text = std::fs::read_to_string(format!("{root}gap2_g7.region")).unwrap();
    let region = hexval::region::parse_region(&text).unwrap();
    let cached = region_value(&region).unwrap();

    // cache-free oracle: plain recursion over move sequences
    let poset = region.outcome_poset().unwrap();
    let empties = region.empty_cells();
    fn eval(
        region: &Region,
        poset: &hexval::Poset,
        u: &mut hexval::Universe,
        fill: &mut Vec<Option<Color>>,
    ) -> hexval::GameId {
        if fill.iter().all(|c| c.is_some()) {
            let total: Vec<Color> = fill.iter().map(|c| c.unwrap()).collect();
            let atom = region.outcome_of(poset, &total).unwrap();
            return u.atomic(atom).unwrap();
        }
        let mut lefts = Vec::new();
        let mut rights = Vec::new();
        for i in 0..fill.len() {
            if fill[i].is_some() {
                continue;
            }
            fill[i] = Some(Color::Black);
            lefts.push(eval(region, poset, u, fill));
            fill[i] = Some(Color::White);
            rights.push(eval(region, poset, u, fill));
            fill[i] = None;
        }
        let g = u.compose(&lefts, &rights).unwrap();
        canonical_form(u, g)
    }
    let mut u = hexval::Universe::new(poset.clone());
    let mut fill: Vec<Option<Color>> = vec![None; empties.len()];
    let plain = eval(&region, &poset, &mut u, &mut fill);
    assert_eq!(
        hexval::text::print_game(&u, plain),
        hexval::text::print_game(&cached.universe, cached.value)
    );
}

/// Pre-filling a dead cell with either color leaves the region value
/// unchanged, so dead-cell removal is a sound pruning pass.
#[test]
fn dead_cell_prefill_preserves_value() {
    use hexval::region::dead_cells;
    let region = Region::new(
        "deadish",
        vec![
            ((1, 1), CellState::Stone(Color::Black)),
            ((1, 2), CellState::Empty),
            ((1, 3), CellState::Stone(Color::Black)),
            ((5, 5), CellState::Empty), // far away: dead
        ],
        vec![vec![(1, 1)], vec![(1, 3)]],
        Vec::new(),
        Vec::new(),
        None,
        Quotient::NTerminal,
    )
    .unwrap();
    let dead = dead_cells(&region).unwrap();
    assert_eq!(dead, vec![(5, 5)]);
    let base = region_value(&region).unwrap();
    for color in [Color::Black, Color::White] {
        let pruned = Region::new(
            "deadish-pruned",
            vec![
                ((1, 1), CellState::Stone(Color::Black)),
                ((1, 2), CellState::Empty),
                ((1, 3), CellState::Stone(Color::Black)),
                ((5, 5), CellState::Stone(color)),
            ],
            vec![vec![(1, 1)], vec![(1, 3)]],
            Vec::new(),
            Vec::new(),
            None,
            Quotient::NTerminal,
        )
        .unwrap();
        let eval = region_value(&pruned).unwrap();
        let mut u = eval.universe;
        let reference =
            hexval::text::parse_game(&mut u, &hexval::text::print_game(&base.universe, base.value))
                .unwrap();
        assert!(u.equivalent(eval.value, reference));
    }
}
