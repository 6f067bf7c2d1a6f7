//! Text grammar for game expressions.
//!
//! `expr := ATOM | '{' expr (',' expr)* '|' expr (',' expr)* '}'`
//!
//! Whitespace is insignificant. An atom is any declared poset atom name;
//! commas inside balanced parentheses belong to the name (product atoms such
//! as `(a,b)`). The printer sorts options by a structural key so printing a
//! parsed normalized expression reproduces it byte for byte.

use crate::error::{Error, Result};
use crate::game::{GameId, Universe};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col, msg)
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn skip_ws(&mut self) {
        while matches!(self.src.get(self.pos), Some(b) if b.is_ascii_whitespace()) {
            self.bump();
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self, u: &mut Universe) -> Result<GameId> {
        self.skip_ws();
        match self.peek() {
            Some(b'{') => {
                self.bump();
                let lefts = self.option_list(u)?;
                self.skip_ws();
                if self.peek() != Some(b'|') {
                    return Err(self.error("expected '|' between option lists"));
                }
                self.bump();
                let rights = self.option_list(u)?;
                self.skip_ws();
                if self.peek() != Some(b'}') {
                    return Err(self.error("expected '}' after right options"));
                }
                self.bump();
                u.compose(&lefts, &rights)
            }
            Some(b'}') | Some(b'|') | Some(b',') => {
                Err(self.error("expected a game expression"))
            }
            None => Err(self.error("unexpected end of input")),
            _ => {
                let name = self.atom_name()?;
                u.atom(&name)
            }
        }
    }

    fn option_list(&mut self, u: &mut Universe) -> Result<Vec<GameId>> {
        self.skip_ws();
        if matches!(self.peek(), Some(b'|') | Some(b'}')) {
            return Err(self.error("option list must not be empty"));
        }
        let mut out = vec![self.expr(u)?];
        loop {
            self.skip_ws();
            if self.peek() == Some(b',') {
                self.bump();
                out.push(self.expr(u)?);
            } else {
                return Ok(out);
            }
        }
    }

    fn atom_name(&mut self) -> Result<String> {
        let mut name = String::new();
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Some(b'(') => {
                    depth += 1;
                    name.push(self.bump().unwrap() as char);
                }
                Some(b')') => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                    name.push(self.bump().unwrap() as char);
                }
                Some(b',') if depth > 0 => {
                    name.push(self.bump().unwrap() as char);
                }
                Some(b'{') | Some(b'}') | Some(b'|') | Some(b',') | None => break,
                Some(b) if b.is_ascii_whitespace() && depth == 0 => break,
                Some(_) => {
                    name.push(self.bump().unwrap() as char);
                }
            }
        }
        if name.is_empty() {
            return Err(self.error("expected an atom name"));
        }
        if depth != 0 {
            return Err(self.error(format!("unbalanced parentheses in atom name {name:?}")));
        }
        Ok(name)
    }
}

/// Parses one game expression, interning it into `u`.
pub fn parse_game(u: &mut Universe, text: &str) -> Result<GameId> {
    let mut p = Parser::new(text);
    let g = p.expr(u)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input after game expression"));
    }
    Ok(g)
}

/// Prints a game in the expression grammar with options in structural order.
pub fn print_game(u: &Universe, g: GameId) -> String {
    let mut s = String::new();
    write_game(u, g, &mut s);
    s
}

fn write_game(u: &Universe, g: GameId, out: &mut String) {
    if let Some(a) = u.atom_of(g) {
        out.push_str(u.poset().atom_name(a));
        return;
    }
    let mut lefts: Vec<GameId> = u.left_options(g).to_vec();
    let mut rights: Vec<GameId> = u.right_options(g).to_vec();
    lefts.sort_by(|&a, &b| u.structural_cmp(a, b));
    rights.sort_by(|&a, &b| u.structural_cmp(a, b));
    out.push('{');
    for (i, &o) in lefts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_game(u, o, out);
    }
    out.push('|');
    for (i, &o) in rights.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_game(u, o, out);
    }
    out.push('}');
}
