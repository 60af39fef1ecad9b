use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;

use super::GateKind;
use crate::error::{Result, TusqError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense unitary of a gate. For two-qubit gates the local basis index is
/// `b0 + 2*b1` where `b0` belongs to the first listed qubit (the control).
#[derive(Debug, Clone, PartialEq)]
pub enum GateMatrix {
    One([[Complex64; 2]; 2]),
    Two([[Complex64; 4]; 4]),
}

impl GateMatrix {
    pub fn dim(&self) -> usize {
        match self {
            GateMatrix::One(_) => 2,
            GateMatrix::Two(_) => 4,
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        match self {
            GateMatrix::One(m) => m[row][col],
            GateMatrix::Two(m) => m[row][col],
        }
    }

    pub fn adjoint(&self) -> GateMatrix {
        match self {
            GateMatrix::One(m) => {
                let mut out = [[ZERO; 2]; 2];
                for (r, row) in out.iter_mut().enumerate() {
                    for (c, v) in row.iter_mut().enumerate() {
                        *v = m[c][r].conj();
                    }
                }
                GateMatrix::One(out)
            }
            GateMatrix::Two(m) => {
                let mut out = [[ZERO; 4]; 4];
                for (r, row) in out.iter_mut().enumerate() {
                    for (c, v) in row.iter_mut().enumerate() {
                        *v = m[c][r].conj();
                    }
                }
                GateMatrix::Two(out)
            }
        }
    }
}

pub fn gate_matrix(kind: GateKind, params: &[f64]) -> Result<GateMatrix> {
    if kind == GateKind::Measure {
        return Err(TusqError::MeasureNotUnitary);
    }
    if params.len() != kind.param_count() {
        return Err(TusqError::ParamCount {
            kind,
            expected: kind.param_count(),
            got: params.len(),
        });
    }
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let m = match kind {
        GateKind::I => [[ONE, ZERO], [ZERO, ONE]],
        GateKind::X => [[ZERO, ONE], [ONE, ZERO]],
        GateKind::Y => [[ZERO, -I], [I, ZERO]],
        GateKind::Z => [[ONE, ZERO], [ZERO, -ONE]],
        GateKind::H => [[h, h], [h, -h]],
        GateKind::S => [[ONE, ZERO], [ZERO, I]],
        GateKind::Sdg => [[ONE, ZERO], [ZERO, -I]],
        GateKind::T => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, FRAC_PI_4)]],
        GateKind::Tdg => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, -FRAC_PI_4)]],
        GateKind::Rx => {
            let (s, c) = (params[0] / 2.0).sin_cos();
            let c = Complex64::new(c, 0.0);
            let s = Complex64::new(0.0, -s);
            [[c, s], [s, c]]
        }
        GateKind::Ry => {
            let (s, c) = (params[0] / 2.0).sin_cos();
            [
                [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
            ]
        }
        GateKind::Rz => {
            let half = params[0] / 2.0;
            [
                [Complex64::from_polar(1.0, -half), ZERO],
                [ZERO, Complex64::from_polar(1.0, half)],
            ]
        }
        GateKind::Cnot => {
            let mut m = [[ZERO; 4]; 4];
            m[0][0] = ONE;
            m[2][2] = ONE;
            m[1][3] = ONE;
            m[3][1] = ONE;
            return Ok(GateMatrix::Two(m));
        }
        GateKind::Measure => unreachable!(),
    };
    Ok(GateMatrix::One(m))
}
