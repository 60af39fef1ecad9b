//! Phase-free single-qubit Paulis.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

/// A single-qubit Pauli with the global phase dropped. The discriminants give
/// the ordering `I < X < Y < Z` used by the execution tree and fit in two bits.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[repr(u8)]
pub enum Pauli {
    #[default]
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(bits: u8) -> Pauli {
        Pauli::ALL[(bits & 3) as usize]
    }

    pub fn bits(self) -> u8 {
        self as u8
    }

    /// Symplectic `(x, z)` components.
    pub fn xz(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_xz(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    /// Drops the Z component; what remains is all a computational-basis
    /// measurement can see.
    pub fn x_part(self) -> Pauli {
        let (x, _) = self.xz();
        Pauli::from_xz(x, false)
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl Mul for Pauli {
    type Output = Pauli;

    /// Product with the phase discarded.
    fn mul(self, rhs: Pauli) -> Pauli {
        let (ax, az) = self.xz();
        let (bx, bz) = rhs.xz();
        Pauli::from_xz(ax ^ bx, az ^ bz)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_table() {
        use Pauli::*;
        assert_eq!(X * Y, Z);
        assert_eq!(Y * Z, X);
        assert_eq!(Z * X, Y);
        for p in Pauli::ALL {
            assert_eq!(p * p, I);
            assert_eq!(p * I, p);
        }
    }

    #[test]
    fn bits_round_trip() {
        for p in Pauli::ALL {
            assert_eq!(Pauli::from_bits(p.bits()), p);
            let (x, z) = p.xz();
            assert_eq!(Pauli::from_xz(x, z), p);
        }
    }

    #[test]
    fn x_part_drops_phase_component() {
        assert_eq!(Pauli::Y.x_part(), Pauli::X);
        assert_eq!(Pauli::Z.x_part(), Pauli::I);
        assert_eq!(Pauli::X.x_part(), Pauli::X);
    }
}
