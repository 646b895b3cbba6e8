//! Text formats.
//!
//! Formulas are S-expressions:
//!
//! ```text
//! expr := "(+" expr+ ")" | "(*" expr+ ")" | var | integer
//! var  := x[i][u][v] | y[j] | z[j]
//! ```
//!
//! Integers may be negative and are reduced modulo the field prime.
//!
//! Circuits are gate lists, one gate per line, children referring to earlier
//! lines; the last gate is the output:
//!
//! ```text
//! g0 = x[1][1][1]
//! g1 = 3
//! g2 = (* g0 g1)
//! ```

use std::fmt;

use super::{circuit_from_gates, Builder, Circuit, Formula, Gate, GateId, GateKind};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::text::Cursor;

impl Formula {
    pub fn parse(field: PrimeField, s: &str) -> Result<Formula> {
        let mut cur = Cursor::new(s);
        let mut b = Builder::new(field);
        let root = parse_expr(&mut cur, &mut b)?;
        if cur.peek_token().is_some() {
            return Err(cur.error("trailing input"));
        }
        b.finish_formula(root)
    }

    /// Writes the S-expression of the subtree at `id`.
    pub fn write_sexpr<W: fmt::Write>(&self, id: GateId, out: &mut W) -> fmt::Result {
        let g = self.gate(id);
        match g.kind {
            GateKind::Input(v) => write!(out, "{v}"),
            GateKind::Const(c) => write!(out, "{}", c.value()),
            GateKind::Sum | GateKind::Prod => {
                out.write_str(if g.kind == GateKind::Sum { "(+" } else { "(*" })?;
                for &c in &g.children {
                    out.write_char(' ')?;
                    self.write_sexpr(c, out)?;
                }
                out.write_char(')')
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_sexpr(self.root(), f)
    }
}

fn parse_expr(cur: &mut Cursor<'_>, b: &mut Builder) -> Result<GateId> {
    match cur.peek_token() {
        Some(b'(') => {
            cur.eat(b'(');
            cur.skip_ws();
            let kind = if cur.eat(b'+') {
                GateKind::Sum
            } else if cur.eat(b'*') {
                GateKind::Prod
            } else {
                return Err(cur.error("expected '+' or '*'"));
            };
            let mut children = Vec::new();
            loop {
                match cur.peek_token() {
                    Some(b')') => {
                        cur.eat(b')');
                        break;
                    }
                    None => return Err(cur.error("unclosed '('")),
                    _ => children.push(parse_expr(cur, b)?),
                }
            }
            if children.is_empty() {
                return Err(cur.error("gate needs at least one child"));
            }
            Ok(b.gate(kind, children))
        }
        Some(b'x' | b'y' | b'z') => {
            let v = cur.var()?;
            Ok(b.input(v))
        }
        Some(c) if c == b'-' || c.is_ascii_digit() => {
            let v = cur.integer()?;
            let c = b.field().from_i64(v);
            Ok(b.constant(c))
        }
        Some(_) => Err(cur.error("unexpected character")),
        None => Err(cur.error("unexpected end of input")),
    }
}

impl Circuit {
    pub fn parse_gate_list(field: PrimeField, s: &str) -> Result<Circuit> {
        let mut gates: Vec<Gate> = Vec::new();
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let id = gates.len();
            let mut cur = Cursor::new(line);
            cur.skip_ws();
            cur.expect(b'g')?;
            let label = cur.unsigned()? as usize;
            if label != id {
                return Err(cur.error(format!("expected gate label g{id}")));
            }
            cur.skip_ws();
            cur.expect(b'=')?;
            let gate = match cur.peek_token() {
                Some(b'(') => {
                    cur.eat(b'(');
                    cur.skip_ws();
                    let kind = if cur.eat(b'+') {
                        GateKind::Sum
                    } else if cur.eat(b'*') {
                        GateKind::Prod
                    } else {
                        return Err(cur.error("expected '+' or '*'"));
                    };
                    let mut children = Vec::new();
                    while cur.peek_token() == Some(b'g') {
                        cur.eat(b'g');
                        children.push(cur.unsigned()? as usize);
                    }
                    cur.skip_ws();
                    cur.expect(b')')?;
                    Gate { kind, children }
                }
                Some(b'x' | b'y' | b'z') => Gate { kind: GateKind::Input(cur.var()?), children: vec![] },
                Some(_) => Gate { kind: GateKind::Const(field.from_i64(cur.integer()?)), children: vec![] },
                None => return Err(cur.error("missing gate body")),
            };
            if cur.peek_token().is_some() {
                return Err(cur.error("trailing input"));
            }
            gates.push(gate);
        }
        if gates.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty gate list".into() });
        }
        let root = gates.len() - 1;
        circuit_from_gates(field, gates, root)
    }

    /// Gate-list text; the output gate is last.
    pub fn to_gate_list(&self) -> String {
        use fmt::Write;
        let mut s = String::new();
        for (id, g) in self.gates().iter().enumerate() {
            let _ = match g.kind {
                GateKind::Input(v) => writeln!(s, "g{id} = {v}"),
                GateKind::Const(c) => writeln!(s, "g{id} = {}", c.value()),
                GateKind::Sum | GateKind::Prod => {
                    let op = if g.kind == GateKind::Sum { '+' } else { '*' };
                    let kids: Vec<String> = g.children.iter().map(|c| format!("g{c}")).collect();
                    writeln!(s, "g{id} = ({op} {})", kids.join(" "))
                }
            };
        }
        s
    }
}
