use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::TorusError;

/// Reduces `q` into `[0, 1)`.
pub fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

#[cfg(test)]
pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A point of `T^p = R^p / Z^p` with exact coordinates in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    coords: Vec<BigRational>,
}

impl TorusPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        TorusPoint { coords: coords.iter().map(frac).collect() }
    }

    pub fn origin(dim: usize) -> Self {
        TorusPoint { coords: vec![BigRational::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Self-map of `T^p` of permutation-plus-translation form, acting on the
/// right: `(x . A)_i = x_{perm(i)} + trans_i mod 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineTorusMap {
    perm: Vec<usize>,
    trans: Vec<BigRational>,
}

impl AffineTorusMap {
    pub fn new(perm: Vec<usize>, trans: Vec<BigRational>) -> Result<Self, TorusError> {
        if perm.len() != trans.len() {
            return Err(TorusError::DimensionMismatch { expected: perm.len(), found: trans.len() });
        }
        let mut seen = vec![false; perm.len()];
        for &i in &perm {
            if i >= perm.len() || std::mem::replace(&mut seen[i], true) {
                return Err(TorusError::InvalidMap(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(AffineTorusMap { perm, trans: trans.iter().map(frac).collect() })
    }

    pub fn identity(dim: usize) -> Self {
        AffineTorusMap { perm: (0..dim).collect(), trans: vec![BigRational::zero(); dim] }
    }

    pub fn translation(trans: Vec<BigRational>) -> Self {
        AffineTorusMap { perm: (0..trans.len()).collect(), trans: trans.iter().map(frac).collect() }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn trans(&self) -> &[BigRational] {
        &self.trans
    }

    pub fn is_identity(&self) -> bool {
        self.is_translation() && self.trans.iter().all(Zero::is_zero)
    }

    pub fn is_translation(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    fn check_dim(&self, found: usize) -> Result<(), TorusError> {
        if found == self.dim() {
            Ok(())
        } else {
            Err(TorusError::DimensionMismatch { expected: self.dim(), found })
        }
    }

    pub fn apply(&self, x: &TorusPoint) -> Result<TorusPoint, TorusError> {
        self.check_dim(x.dim())?;
        let coords = self
            .perm
            .iter()
            .zip(&self.trans)
            .map(|(&j, t)| &x.coords[j] + t)
            .collect();
        Ok(TorusPoint::new(coords))
    }

    /// The map `x -> (x . self) . other`: permutation `perm_self o perm_other`
    /// and translation `trans_self(perm_other(i)) + trans_other(i)`.
    pub fn compose(&self, other: &AffineTorusMap) -> Result<AffineTorusMap, TorusError> {
        self.check_dim(other.dim())?;
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let trans = other
            .perm
            .iter()
            .zip(&other.trans)
            .map(|(&j, t)| frac(&(&self.trans[j] + t)))
            .collect();
        Ok(AffineTorusMap { perm, trans })
    }

    /// Block-diagonal map acting by `self` on the first coordinates and by
    /// `other` on the remaining ones.
    pub fn direct_sum(&self, other: &AffineTorusMap) -> AffineTorusMap {
        let offset = self.dim();
        let mut perm = self.perm.clone();
        perm.extend(other.perm.iter().map(|&j| j + offset));
        let mut trans = self.trans.clone();
        trans.extend(other.trans.iter().cloned());
        AffineTorusMap { perm, trans }
    }

    /// Cycles of the permutation, each listed as `i, perm(i), perm(perm(i)), ...`
    /// starting from its smallest index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.dim()];
        let mut out = Vec::new();
        for start in 0..self.dim() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.perm[i];
            }
            out.push(cycle);
        }
        out
    }

    /// A fixed point exists iff the translation sums to an integer along every
    /// cycle of the permutation. When it does, one is built by fixing the first
    /// coordinate of each cycle at 0 and solving `x_{perm(i)} = x_i - trans_i`
    /// around the cycle.
    pub fn fixed_point(&self) -> Option<TorusPoint> {
        let mut x = vec![BigRational::zero(); self.dim()];
        for cycle in self.cycles() {
            let sum: BigRational = cycle.iter().map(|&i| &self.trans[i]).sum();
            if !sum.is_integer() {
                return None;
            }
            let mut value = BigRational::zero();
            for &i in &cycle {
                x[i] = value.clone();
                value -= &self.trans[i];
            }
        }
        Some(TorusPoint::new(x))
    }

    /// Least common multiple of the translation denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.trans
            .iter()
            .fold(BigInt::one(), |acc, t| num_integer::Integer::lcm(&acc, t.denom()))
    }
}

impl fmt::Display for AffineTorusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm: Vec<String> = self.perm.iter().map(|i| i.to_string()).collect();
        let trans: Vec<String> = self.trans.iter().map(|t| t.to_string()).collect();
        write!(f, "perm=[{}] trans=[{}]", perm.join(","), trans.join(","))
    }
}
