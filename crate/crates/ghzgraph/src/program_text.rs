//! Line format for gate programs: `H q`, `CX c t`, `CCX c1 c2 t`, `CZ c t`
//! with zero-based addresses, one gate per line, listed in the order the
//! gates act (the reverse of the written operator product).

use std::fmt::Write as _;

use ghzgraph_core::{Gate, GateProgram};

use crate::graph_file::GraphFileError;

pub fn program_to_text(program: &GateProgram) -> String {
    let mut out = String::new();
    for g in program.execution_order() {
        let _ = match *g {
            Gate::H(q) => writeln!(out, "H {q}"),
            Gate::Cx { control, target } => writeln!(out, "CX {control} {target}"),
            Gate::Ccx { c1, c2, target } => writeln!(out, "CCX {c1} {c2} {target}"),
            Gate::Cz { control, target } => writeln!(out, "CZ {control} {target}"),
        };
    }
    out
}

/// Parses the line format back into a program. Addresses are checked
/// against `qubits` and must be distinct within a gate.
pub fn program_from_text(text: &str, qubits: usize) -> Result<GateProgram, GraphFileError> {
    let mut executed = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |msg: String| GraphFileError::Syntax { line, msg };
        let mut f = body.split_whitespace();
        let op = f.next().unwrap_or_default();
        let qs = f
            .map(|s| match s.parse::<usize>() {
                Ok(q) if q < qubits => Ok(q),
                Ok(q) => Err(err(format!(
                    "address {q} outside a {qubits}-qubit register"
                ))),
                Err(_) => Err(err(format!("`{s}` is not an address"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let gate = match (op, &qs[..]) {
            ("H", &[q]) => Gate::H(q),
            ("CX", &[control, target]) => Gate::Cx { control, target },
            ("CCX", &[c1, c2, target]) => Gate::Ccx { c1, c2, target },
            ("CZ", &[control, target]) => Gate::Cz { control, target },
            _ => return Err(err(format!("unrecognized gate line `{body}`"))),
        };
        let addrs = gate.addresses();
        if (1..addrs.len()).any(|k| addrs[..k].contains(&addrs[k])) {
            return Err(err("gate addresses must be distinct".into()));
        }
        executed.push(gate);
    }
    executed.reverse();
    Ok(GateProgram::new(executed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ghzgraph_core::GhzLayout;

    #[test]
    fn decoder_lines() {
        let l = GhzLayout::new(5).unwrap();
        let text = program_to_text(&l.build_decoder(0).unwrap());
        assert_eq!(text, "CX 9 5\nCX 9 6\nCX 9 7\nCX 9 8\nH 9\n");
    }

    #[test]
    fn round_trip_all_programs() {
        let l = GhzLayout::new(5).unwrap();
        let mut programs = vec![l.build_encoder()];
        for a in 0..10 {
            programs.push(l.build_decoder(a).unwrap());
            programs.push(l.build_recovery(a).unwrap());
        }
        for p in programs {
            assert_eq!(program_from_text(&program_to_text(&p), 10).unwrap(), p);
        }
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(program_from_text("CX 1 1\n", 4).is_err());
        assert!(program_from_text("H 4\n", 4).is_err());
        assert!(program_from_text("SWAP 0 1\n", 4).is_err());
        assert!(program_from_text("CCX 0 1\n", 4).is_err());
    }
}
