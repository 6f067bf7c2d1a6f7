//! Shared golden data for integration tests: the full value catalogs over
//! the three- and four-atom chains, with their cover relations and left and
//! right equivalence classes.

#![allow(dead_code)]

use hexval::canonical::canonical_form;
use hexval::text::parse_game;
use hexval::{GameId, Universe};

pub const LIN3_VALUES: [&str; 8] = [
    "B",
    "a",
    "T",
    "{a|B}",
    "{T|B}",
    "{T|a}",
    "{{T|a}|B}",
    "{T|{a|B}}",
];

/// Cover edges of the 8-value catalog, as (below, above) index pairs.
pub const LIN3_COVERS: [(usize, usize); 8] = [
    (0, 3),
    (3, 6),
    (6, 4),
    (4, 7),
    (7, 5),
    (5, 2),
    (6, 1),
    (1, 7),
];

pub const LIN3_LEFT_CLASSES: [&[usize]; 4] = [&[2], &[5], &[7, 1], &[4, 6, 3, 0]];
pub const LIN3_RIGHT_CLASSES: [&[usize]; 4] = [&[0], &[3], &[6, 1], &[4, 7, 5, 2]];

pub const LIN4_VALUES: [&str; 31] = [
    "B",
    "a",
    "b",
    "T",
    "{a|B}",
    "{b|B}",
    "{T|B}",
    "{b|a}",
    "{T|a}",
    "{T|b}",
    "{b,{T|a}|B}",
    "{{b|a}|B}",
    "{{T|a}|B}",
    "{{T|b}|B}",
    "{{T|b}|a}",
    "{T|a,{b|B}}",
    "{b|{a|B}}",
    "{T|{a|B}}",
    "{{T|b}|{a|B}}",
    "{T|{b|B}}",
    "{T|{b|a}}",
    "{{{T|b}|a}|B}",
    "{{T|a,{b|B}}|B}",
    "{{T|{b|a}}|B}",
    "{{T|{b|a}}|{a|B}}",
    "{T|{b|{a|B}}}",
    "{T|{b,{T|a}|B}}",
    "{T|{{b|a}|B}}",
    "{{T|b}|{{b|a}|B}}",
    "{{T|{b|{a|B}}}|B}",
    "{T|{{{T|b}|a}|B}}",
];

pub const LIN4_COVERS: [(usize, usize); 40] = [
    (0, 4),
    (4, 11),
    (11, 21),
    (21, 22),
    (22, 5),
    (5, 10),
    (10, 29),
    (29, 23),
    (23, 13),
    (13, 6),
    (6, 17),
    (17, 27),
    (27, 30),
    (30, 15),
    (15, 8),
    (8, 26),
    (26, 25),
    (25, 20),
    (20, 9),
    (9, 3),
    (22, 12),
    (12, 1),
    (1, 16),
    (16, 24),
    (24, 18),
    (18, 28),
    (28, 14),
    (14, 2),
    (2, 19),
    (19, 26),
    (12, 10),
    (15, 19),
    (29, 16),
    (14, 30),
    (23, 24),
    (24, 7),
    (7, 28),
    (28, 27),
    (13, 18),
    (18, 17),
];

pub const LIN4_LEFT_CLASSES: [&[usize]; 12] = [
    &[3],
    &[9],
    &[20],
    &[25],
    &[26],
    &[8],
    &[15],
    &[19, 2],
    &[30, 14],
    &[27, 28, 7],
    &[17, 18, 24, 16, 1],
    &[6, 13, 23, 29, 10, 5, 22, 21, 11, 4, 0, 12],
];

pub const LIN4_RIGHT_CLASSES: [&[usize]; 12] = [
    &[0],
    &[4],
    &[11],
    &[21],
    &[22],
    &[5],
    &[10],
    &[12, 1],
    &[29, 16],
    &[23, 24, 7],
    &[13, 18, 28, 14, 2],
    &[6, 17, 27, 30, 15, 8, 26, 25, 20, 9, 3, 19],
];

/// Parses and canonicalizes a list of golden expressions.
pub fn parse_values(u: &mut Universe, exprs: &[&str]) -> Vec<GameId> {
    exprs
        .iter()
        .map(|e| {
            let g = parse_game(u, e).expect(e);
            canonical_form(u, g)
        })
        .collect()
}
