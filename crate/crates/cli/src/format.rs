//! Text circuit format.
//!
//! ```text
//! qubits 4
//! # comment
//! XOR 0 3
//! RY(-0.785398) 2
//! F^-1 2
//! measure 3 m
//! cond m=1,n=0 X 0
//! ```
//!
//! Angles accept decimals and `pi` terms such as `pi/4`, `-pi/2` or `3*pi/8`.
//! Matrix-parameterized gates take 8 reals: row-major (re, im) pairs.

use std::fmt;

use qgk_core::{Circuit, Condition, Error as CoreError, Gate};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        let text = src.split('#').next().unwrap_or("");
        Self {
            chars: text.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn err_at(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    /// Next whitespace-delimited word and its starting column.
    fn word(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && !self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| (self.chars[start..self.pos].iter().collect(), start + 1))
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && f(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err_at(self.column(), "unexpected trailing input"))
        }
    }

    fn uint(&mut self, what: &str) -> Result<(usize, usize), ParseError> {
        let (w, col) = self
            .word()
            .ok_or_else(|| self.err_at(self.column(), format!("expected {what}")))?;
        let v = w
            .parse()
            .map_err(|_| self.err_at(col, format!("expected {what}, found `{w}`")))?;
        Ok((v, col))
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn valid_slot(s: &str) -> bool {
    s.chars().next().is_some_and(is_ident_start) && s.chars().all(is_ident)
}

/// `number`, `pi`, optionally negated and combined with `*` or `/`.
fn parse_number(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix('-') {
        return parse_number(rest).map(|v| -v);
    }
    if let Some((a, b)) = t.rsplit_once('/') {
        return Some(parse_number(a)? / parse_number(b)?);
    }
    if let Some((a, b)) = t.rsplit_once('*') {
        return Some(parse_number(a)? * parse_number(b)?);
    }
    if t == "pi" {
        return Some(std::f64::consts::PI);
    }
    t.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses `NAME[(params)][^-1]` at the cursor, then the wires.
fn parse_gate_app(
    cur: &mut Cursor,
    num_wires: usize,
) -> Result<(Gate, Vec<usize>, usize), ParseError> {
    cur.skip_ws();
    let col = cur.column();
    if !cur.peek().is_some_and(is_ident_start) {
        return Err(cur.err_at(col, "expected a gate name"));
    }
    let name = cur.take_while(is_ident);
    let mut params = Vec::new();
    if cur.peek() == Some('(') {
        cur.pos += 1;
        let inner_col = cur.column();
        let inner = cur.take_while(|c| c != ')');
        if cur.peek() != Some(')') {
            return Err(cur.err_at(inner_col - 1, "unclosed `(`"));
        }
        cur.pos += 1;
        let mut offset = 0;
        for piece in inner.split(',') {
            let v = parse_number(piece).ok_or_else(|| {
                cur.err_at(
                    inner_col + offset,
                    format!("invalid number `{}`", piece.trim()),
                )
            })?;
            params.push(v);
            offset += piece.chars().count() + 1;
        }
    }
    let mut dagger = false;
    if cur.peek() == Some('^') {
        let c = cur.column();
        let suffix = cur.take_while(|ch| !ch.is_whitespace());
        if suffix != "^-1" {
            return Err(cur.err_at(c, format!("expected `^-1`, found `{suffix}`")));
        }
        dagger = true;
    } else if cur.peek().is_some_and(|c| !c.is_whitespace()) {
        return Err(cur.err_at(cur.column(), "unexpected character after gate name"));
    }
    let gate =
        Gate::from_spec(&name, &params, dagger).map_err(|e| cur.err_at(col, e.to_string()))?;
    let mut wires = Vec::with_capacity(gate.arity());
    for _ in 0..gate.arity() {
        let (w, wcol) = cur.uint("a wire index")?;
        if w >= num_wires {
            return Err(cur.err_at(
                wcol,
                format!("wire {w} out of range for {num_wires} qubits"),
            ));
        }
        if wires.contains(&w) {
            return Err(cur.err_at(wcol, format!("wire {w} repeated")));
        }
        wires.push(w);
    }
    Ok((gate, wires, col))
}

fn core_err(line: usize, column: usize, e: CoreError) -> ParseError {
    ParseError {
        line,
        column,
        message: e.to_string(),
    }
}

/// Parses a circuit file.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut cur = Cursor::new(raw, line);
        if cur.at_end() {
            continue;
        }
        let Some(circ) = circuit.as_mut() else {
            let (kw, col) = cur.word().expect("non-empty line");
            if kw != "qubits" {
                return Err(cur.err_at(col, "expected `qubits N` header"));
            }
            let (n, ncol) = cur.uint("a qubit count")?;
            if n == 0 {
                return Err(cur.err_at(ncol, "qubit count must be positive"));
            }
            cur.expect_end()?;
            circuit = Some(Circuit::new(n));
            continue;
        };
        let n = circ.num_wires();
        cur.skip_ws();
        let start = cur.pos;
        let (kw, col) = cur.word().expect("non-empty line");
        match kw.as_str() {
            "measure" => {
                let (w, wcol) = cur.uint("a wire index")?;
                if w >= n {
                    return Err(cur.err_at(wcol, format!("wire {w} out of range for {n} qubits")));
                }
                let (slot, scol) = cur
                    .word()
                    .ok_or_else(|| cur.err_at(cur.column(), "expected a slot name"))?;
                if !valid_slot(&slot) {
                    return Err(cur.err_at(scol, format!("invalid slot name `{slot}`")));
                }
                cur.expect_end()?;
                circ.measure(w, &slot)
                    .map_err(|e| core_err(line, scol, e))?;
            }
            "cond" => {
                let (spec, scol) = cur
                    .word()
                    .ok_or_else(|| cur.err_at(cur.column(), "expected conditions"))?;
                let mut conds = Vec::new();
                let mut offset = 0;
                for part in spec.split(',') {
                    let pcol = scol + offset;
                    offset += part.chars().count() + 1;
                    let (slot, value) = match part.split_once('=') {
                        None => (part, true),
                        Some((s, "1")) => (s, true),
                        Some((s, "0")) => (s, false),
                        Some((_, v)) => {
                            return Err(cur.err_at(
                                pcol,
                                format!("condition value must be 0 or 1, found `{v}`"),
                            ))
                        }
                    };
                    if !valid_slot(slot) {
                        return Err(cur.err_at(pcol, format!("invalid slot name `{slot}`")));
                    }
                    conds.push(Condition {
                        slot: slot.into(),
                        value,
                    });
                }
                let (gate, wires, _) = parse_gate_app(&mut cur, n)?;
                cur.expect_end()?;
                circ.conditional(conds, gate, &wires)
                    .map_err(|e| core_err(line, scol, e))?;
            }
            "qubits" => return Err(cur.err_at(col, "duplicate `qubits` header")),
            _ => {
                cur.pos = start;
                let (gate, wires, gcol) = parse_gate_app(&mut cur, n)?;
                cur.expect_end()?;
                circ.add(gate, &wires)
                    .map_err(|e| core_err(line, gcol, e))?;
            }
        }
    }
    circuit.ok_or(ParseError {
        line: 1,
        column: 1,
        message: "empty circuit file: expected `qubits N` header".into(),
    })
}

/// Canonical text: header line followed by one op per line.
pub fn print_circuit(circuit: &Circuit) -> String {
    format!("qubits {}\n{}", circuit.num_wires(), circuit)
}

/// Wrapper printing a circuit in file syntax.
pub struct CircuitText<'a>(pub &'a Circuit);

impl fmt::Display for CircuitText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_circuit(self.0))
    }
}
