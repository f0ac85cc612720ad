//! The `.rqc` line-oriented circuit format.
//!
//! ```text
//! # comment
//! qubits 2
//! h 0
//! f 0 1 1.5707963267948966   # control, target, angle in radians
//! ```
//!
//! One statement per line, `#` comments, blank lines ignored. The first
//! statement declares the register size. Gate statements are a mnemonic,
//! its operands (control first for two-qubit kinds) and, for rotation kinds,
//! one decimal angle. `gphase` takes an angle and no operands.

use std::fmt::Write as _;

use thiserror::Error;

use crate::angle::Angle;
use crate::circuit::Circuit;
use crate::gate::{Gate, GateKind, Operands};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// The text is not well formed.
    Syntax,
    /// Well formed, but the circuit it describes is invalid (operand range,
    /// duplicate operands, empty register).
    Invalid,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub kind: ParseErrorKind,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                out.push(Token { text: &line[b..byte], column: c + 1 });
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((b, c)) = start {
        out.push(Token { text: &line[b..], column: c + 1 });
    }
    out
}

fn strip_comment(line: &str) -> &str {
    let line = line.strip_suffix('\r').unwrap_or(line);
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

struct LineCtx {
    line: usize,
}

impl LineCtx {
    fn err(&self, column: usize, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column, message: message.into(), kind }
    }

    fn syntax(&self, tok: &Token<'_>, message: impl Into<String>) -> ParseError {
        self.err(tok.column, ParseErrorKind::Syntax, message)
    }

    fn index(&self, tok: &Token<'_>) -> Result<usize, ParseError> {
        if tok.text.is_empty() || !tok.text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.syntax(tok, format!("malformed integer `{}`", tok.text)));
        }
        tok.text
            .parse()
            .map_err(|_| self.syntax(tok, format!("integer `{}` is too large", tok.text)))
    }

    fn angle(&self, tok: &Token<'_>) -> Result<Angle, ParseError> {
        match tok.text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Angle::new(v)),
            _ => Err(self.syntax(tok, format!("malformed number `{}`", tok.text))),
        }
    }
}

/// Parse `.rqc` text. The first error encountered is reported.
pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let mut num_qubits: Option<usize> = None;
    let mut gates = Vec::new();

    for (i, raw) in text.split('\n').enumerate() {
        let ctx = LineCtx { line: i + 1 };
        let toks = tokens(strip_comment(raw));
        let Some(head) = toks.first() else { continue };
        let args = &toks[1..];

        if head.text == "qubits" {
            if num_qubits.is_some() {
                return Err(ctx.syntax(head, "duplicate `qubits` header"));
            }
            if args.len() != 1 {
                return Err(ctx.syntax(head, "`qubits` expects exactly one integer"));
            }
            let n = ctx.index(&args[0])?;
            if n == 0 {
                return Err(ctx.err(args[0].column, ParseErrorKind::Invalid, "register must have at least one qubit"));
            }
            num_qubits = Some(n);
            continue;
        }

        let Some(kind) = GateKind::from_mnemonic(head.text) else {
            let msg = if num_qubits.is_none() {
                format!("missing `qubits` header before `{}`", head.text)
            } else {
                format!("unknown mnemonic `{}`", head.text)
            };
            return Err(ctx.syntax(head, msg));
        };
        let Some(n) = num_qubits else {
            return Err(ctx.syntax(head, "missing `qubits` header"));
        };

        let arity = kind.num_operands();
        let expected = arity + usize::from(kind.takes_angle());
        if args.len() != expected {
            let col = args.get(expected).map_or(head.column, |t| t.column);
            return Err(ctx.err(
                col,
                ParseErrorKind::Syntax,
                format!("`{}` expects {expected} arguments, found {}", kind.mnemonic(), args.len()),
            ));
        }
        let mut qubits = [0usize; 2];
        for (slot, tok) in qubits.iter_mut().zip(&args[..arity]) {
            *slot = ctx.index(tok)?;
        }
        let param = if kind.takes_angle() { Some(ctx.angle(&args[arity])?) } else { None };
        for (q, tok) in qubits.iter().zip(&args[..arity]) {
            if *q >= n {
                return Err(ctx.err(
                    tok.column,
                    ParseErrorKind::Invalid,
                    format!("operand out of range: qubit {q} on a {n}-qubit register"),
                ));
            }
        }
        let operands = match arity {
            0 => Operands::None,
            1 => Operands::One(qubits[0]),
            _ => {
                if qubits[0] == qubits[1] {
                    return Err(ctx.err(args[1].column, ParseErrorKind::Invalid, "duplicate operands"));
                }
                Operands::Two { control: qubits[0], target: qubits[1] }
            }
        };
        gates.push(Gate { kind, operands, param });
    }

    match num_qubits {
        Some(n) => Ok(Circuit::with_gates(n, gates)),
        None => Err(ParseError {
            line: 1,
            column: 1,
            message: "missing `qubits` header".into(),
            kind: ParseErrorKind::Syntax,
        }),
    }
}

/// Canonical text for a circuit: header, optional name comment, one gate
/// per line, angles with 17 significant digits, LF terminated.
pub fn emit(c: &Circuit) -> String {
    let mut out = String::with_capacity(16 + 16 * c.gates.len());
    let _ = writeln!(out, "qubits {}", c.num_qubits);
    if let Some(name) = &c.name {
        let name = name.replace(['\n', '\r'], " ");
        let _ = writeln!(out, "# {}", name.trim_end());
    }
    for g in &c.gates {
        let _ = writeln!(out, "{g}");
    }
    out
}
