//! OpenQASM 2.0 text for [`Circuit`]s.
//!
//! Qubit `k` of a circuit becomes `q[k-1]`. Angles are written in radians
//! with 15 significant digits, one gate per line, followed by measurements
//! of the readout qubits into a classical register of the same width.

use std::fmt::Write;

use mqdimer_core::gates::{Axis, Circuit, Gate};

use crate::error::AppError;

/// Renders `circuit` with `measure` lines for `readout` (1-based).
pub fn to_qasm(circuit: &Circuit, readout: &[usize]) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", circuit.n_qubits());
    if !readout.is_empty() {
        let _ = writeln!(out, "creg c[{}];", readout.len());
    }
    for gate in circuit.gates() {
        out.push_str(&gate_line(gate));
        out.push('\n');
    }
    for (bit, q) in readout.iter().enumerate() {
        let _ = writeln!(out, "measure q[{}] -> c[{bit}];", q - 1);
    }
    out
}

fn gate_line(gate: &Gate) -> String {
    match *gate {
        Gate::Rotation {
            axis,
            target,
            angle,
        } => {
            let name = match axis {
                Axis::X => "rx",
                Axis::Y => "ry",
                Axis::Z => "rz",
            };
            format!("{name}({angle:.14e}) q[{}];", target - 1)
        }
        Gate::Cnot { control, target } => format!("cx q[{}],q[{}];", control - 1, target - 1),
    }
}

/// Number of gate lines in a document produced by [`to_qasm`].
pub fn count_gates(text: &str) -> usize {
    text.lines()
        .filter(|l| {
            ["rx(", "ry(", "rz(", "cx "]
                .iter()
                .any(|p| l.starts_with(p))
        })
        .count()
}

/// Reads back a document in the dialect written by [`to_qasm`]. Measurements
/// and register declarations other than `qreg` are skipped.
pub fn from_qasm(text: &str) -> Result<Circuit, AppError> {
    let bad = |line: &str| AppError::Config(format!("unsupported QASM line `{line}`"));
    let mut n_qubits = None;
    let mut gates = Vec::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty()
            || line.starts_with("//")
            || line.starts_with("OPENQASM")
            || line.starts_with("include")
            || line.starts_with("creg")
            || line.starts_with("measure")
        {
            continue;
        }
        let body = line.strip_suffix(';').ok_or_else(|| bad(line))?;
        if let Some(rest) = body.strip_prefix("qreg ") {
            n_qubits = Some(register_index(rest).ok_or_else(|| bad(line))?);
        } else if let Some(rest) = body.strip_prefix("cx ") {
            let (a, b) = rest.split_once(',').ok_or_else(|| bad(line))?;
            let ctl = register_index(a.trim()).ok_or_else(|| bad(line))?;
            let tgt = register_index(b.trim()).ok_or_else(|| bad(line))?;
            gates.push(Gate::cnot(ctl + 1, tgt + 1));
        } else {
            let (head, operand) = body.split_once(") ").ok_or_else(|| bad(line))?;
            let (name, angle) = head.split_once('(').ok_or_else(|| bad(line))?;
            let angle: f64 = angle.parse().map_err(|_| bad(line))?;
            let q = register_index(operand.trim()).ok_or_else(|| bad(line))? + 1;
            gates.push(match name {
                "rx" => Gate::rx(q, angle),
                "ry" => Gate::ry(q, angle),
                "rz" => Gate::rz(q, angle),
                _ => return Err(bad(line)),
            });
        }
    }
    let n = n_qubits.ok_or_else(|| AppError::Config("QASM text has no qreg".into()))?;
    Ok(Circuit::from_gates(n, gates)?)
}

fn register_index(s: &str) -> Option<usize> {
    s.strip_prefix("q[")?.strip_suffix(']')?.parse().ok()
}
