use super::{Circuit, GateKind, Operation};
use crate::error::{Result, TusqError};

/// Parses the line-oriented circuit format: `GATE q0 [q1] [angle]`, one
/// operation per line, `#` starting a comment. The register size is one more
/// than the largest qubit index mentioned.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut parsed = Vec::new();
    let mut n_qubits = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let name = fields.next().expect("non-empty line has a field");
        let kind = GateKind::from_name(name).map_err(|e| TusqError::Parse {
            line,
            message: e.to_string(),
        })?;
        let rest: Vec<&str> = fields.collect();
        let expected = kind.arity() + kind.param_count();
        if rest.len() != expected {
            return Err(TusqError::Parse {
                line,
                message: format!(
                    "{} expects {} qubit(s) and {} angle(s), got {} field(s)",
                    kind.name(),
                    kind.arity(),
                    kind.param_count(),
                    rest.len()
                ),
            });
        }
        let (qfields, pfields) = rest.split_at(kind.arity());
        let qubits = qfields
            .iter()
            .map(|f| {
                f.parse::<usize>().map_err(|_| TusqError::Parse {
                    line,
                    message: format!("bad qubit index `{f}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let params = pfields
            .iter()
            .map(|f| match f.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(TusqError::Parse {
                    line,
                    message: format!("bad angle `{f}`"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        let op = Operation::new(kind, qubits, params).map_err(|e| TusqError::Parse {
            line,
            message: e.to_string(),
        })?;
        n_qubits = n_qubits.max(op.qubits.iter().max().map_or(0, |q| q + 1));
        parsed.push((line, op));
    }
    if n_qubits == 0 {
        return Err(TusqError::Parse {
            line: 0,
            message: "circuit has no operations".into(),
        });
    }
    let mut circuit = Circuit::new(n_qubits);
    for (line, op) in parsed {
        circuit.push(op).map_err(|e| TusqError::Parse {
            line,
            message: e.to_string(),
        })?;
    }
    Ok(circuit)
}
