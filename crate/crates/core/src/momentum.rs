use std::fmt;

use crate::error::{Error, Result};

/// Cartesian axis, indexed 1..=3 in user-facing interfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// 1-based constructor (`1 → X`).
    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Axis::X),
            2 => Ok(Axis::Y),
            3 => Ok(Axis::Z),
            _ => Err(Error::IndexOutOfRange {
                index: i,
                min: 1,
                max: 3,
            }),
        }
    }

    /// 0-based array offset.
    pub fn offset(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn index(self) -> usize {
        self.offset() + 1
    }

    pub fn unit(self) -> [f64; 3] {
        let mut e = [0.0; 3];
        e[self.offset()] = 1.0;
        e
    }
}

/// Momentum eigenvalue 𝔭 in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Momentum(pub [f64; 3]);

impl Momentum {
    pub const ZERO: Momentum = Momentum([0.0; 3]);

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let p = Momentum([x, y, z]);
        if p.0.iter().all(|c| c.is_finite()) {
            Ok(p)
        } else {
            Err(Error::InvalidArgument("momentum components must be finite".into()))
        }
    }

    pub fn along(axis: Axis, magnitude: f64) -> Self {
        let mut p = [0.0; 3];
        p[axis.offset()] = magnitude;
        Momentum(p)
    }

    pub fn component(&self, axis: Axis) -> f64 {
        self.0[axis.offset()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    /// Unit vector p̂; fails at zero momentum.
    pub fn direction(&self) -> Result<[f64; 3]> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroMomentum("direction of zero momentum"));
        }
        Ok(self.0.map(|c| c / n))
    }

    /// `self + t·dir`.
    pub fn shifted(&self, dir: [f64; 3], t: f64) -> Self {
        Momentum([
            self.0[0] + t * dir[0],
            self.0[1] + t * dir[1],
            self.0[2] + t * dir[2],
        ])
    }
}

impl fmt::Display for Momentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// Relativistic energy `√(m² + 𝔭²)`.
pub fn energy(mass: f64, p: &Momentum) -> f64 {
    (mass * mass + p.norm_sqr()).sqrt()
}

/// Positive or negative total-energy branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Positive => "positive",
            Branch::Negative => "negative",
        }
    }
}

/// Energy eigenvalue `H = ±√(m² + 𝔭²)` on a branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBranch {
    pub branch: Branch,
    pub value: f64,
}

impl EnergyBranch {
    pub fn new(branch: Branch, mass: f64, p: &Momentum) -> Self {
        Self {
            branch,
            value: branch.sign() * energy(mass, p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_round_trip() {
        for i in 1..=3 {
            assert_eq!(Axis::from_index(i).unwrap().index(), i);
        }
        assert!(Axis::from_index(0).is_err());
        assert!(Axis::from_index(4).is_err());
    }

    #[test]
    fn energy_branch_magnitude() {
        let p = Momentum::new(0.0, 0.0, 4.0).unwrap();
        let e = EnergyBranch::new(Branch::Negative, 3.0, &p);
        assert_eq!(e.value, -5.0);
    }

    #[test]
    fn non_finite_momentum_rejected() {
        assert!(Momentum::new(f64::NAN, 0.0, 0.0).is_err());
        assert!(Momentum::ZERO.direction().is_err());
    }
}
