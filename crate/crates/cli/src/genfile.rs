//! Generator-set files: one Pauli string per line, e.g.
//!
//! ```text
//! qubits 5            # optional; otherwise one past the largest wire
//! M3: X0 X1 Z2 Z4     # optional label
//! - Z0 Z1
//! ```

use qgk_core::{GeneratorSet, PauliString};

use crate::format::ParseError;

pub fn parse_generators(text: &str) -> Result<GeneratorSet, ParseError> {
    let mut declared: Option<usize> = None;
    let mut entries: Vec<(usize, usize, Option<String>, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let column = body.len() - trimmed.len() + 1;
        if let Some(rest) = trimmed.strip_prefix("qubits") {
            let n = rest.trim().parse::<usize>().ok().filter(|&n| n > 0);
            if declared.is_some() || !entries.is_empty() || n.is_none() {
                return Err(ParseError {
                    line,
                    column,
                    message: "expected a single leading `qubits N` header".into(),
                });
            }
            declared = n;
            continue;
        }
        let (label, pauli, pcol) = match trimmed.split_once(':') {
            Some((l, p)) => {
                let l = l.trim();
                if l.is_empty() || !l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(ParseError {
                        line,
                        column,
                        message: format!("invalid label `{l}`"),
                    });
                }
                (
                    Some(l.to_string()),
                    p.to_string(),
                    column + trimmed.find(':').unwrap() + 1,
                )
            }
            None => (None, trimmed.to_string(), column),
        };
        entries.push((line, pcol, label, pauli));
    }
    if entries.is_empty() {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "no generators".into(),
        });
    }
    let n = match declared {
        Some(n) => n,
        None => entries
            .iter()
            .filter_map(|(_, _, _, p)| PauliString::max_wire_in(p))
            .max()
            .map_or(1, |m| m + 1),
    };
    let mut gens = Vec::new();
    let mut labels = Vec::new();
    for (i, (line, column, label, p)) in entries.iter().enumerate() {
        let ps = PauliString::parse_with_len(p, n).map_err(|e| ParseError {
            line: *line,
            column: *column,
            message: e.to_string(),
        })?;
        gens.push(ps);
        labels.push(label.clone().unwrap_or_else(|| format!("g{i}")));
    }
    GeneratorSet::with_labels(n, gens, labels).map_err(|e| {
        // Point at the later generator of a failing pair.
        let at = match e {
            qgk_core::Error::NonCommuting(_, j) | qgk_core::Error::NonHermitianGenerator(j) => j,
            _ => 0,
        };
        ParseError {
            line: entries[at].0,
            column: entries[at].1,
            message: e.to_string(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labelled_five_qubit() {
        let g = parse_generators(
            "M3: X0 X1 Z2 Z4\nM4: X1 X2 Z3 Z0\nM0: X2 X3 Z4 Z1\nM1: X3 X4 Z0 Z2\n",
        )
        .unwrap();
        assert_eq!(g.num_qubits(), 5);
        assert_eq!(g.labels(), ["M3", "M4", "M0", "M1"]);
    }

    #[test]
    fn non_commuting_points_at_line() {
        let e = parse_generators("X0\n\nZ0\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn header_sets_width() {
        let g = parse_generators("qubits 4\nZ0 Z1 Z2 # parity\n").unwrap();
        assert_eq!(g.num_qubits(), 4);
        assert!(parse_generators("Z0\nqubits 3\n").is_err());
    }
}
