use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::gaussian::{rat, Rational};
use super::PolyError;

/// Power series in `h`, `z` keeping only terms of total degree `<= cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries2 {
    cutoff: u32,
    terms: BTreeMap<(u32, u32), Rational>,
}

impl TruncatedSeries2 {
    pub fn zero(cutoff: u32) -> Self {
        Self { cutoff, terms: BTreeMap::new() }
    }

    pub fn one(cutoff: u32) -> Self {
        let mut s = Self::zero(cutoff);
        s.add_term(0, 0, &Rational::one());
        s
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn add_term(&mut self, h: u32, z: u32, c: &Rational) {
        if h + z > self.cutoff || c.is_zero() {
            return;
        }
        let entry = self.terms.entry((h, z)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(h, z));
        }
    }

    /// Coefficient of `h^h z^z` (zero when absent or beyond the cutoff).
    pub fn coeff(&self, h: u32, z: u32) -> Rational {
        self.terms.get(&(h, z)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if self.cutoff != other.cutoff {
            return Err(PolyError::CutoffMismatch(self.cutoff, other.cutoff));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (&(h, z), c) in &other.terms {
            out.add_term(h, z, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self { cutoff: self.cutoff, terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = Self::zero(self.cutoff);
        for (&(h1, z1), c1) in &self.terms {
            for (&(h2, z2), c2) in &other.terms {
                out.add_term(h1 + h2, z1 + z2, &(c1 * c2));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.cutoff);
        for _ in 0..e {
            acc = acc.checked_mul(self).expect("same cutoff");
        }
        acc
    }
}

/// Univariate power series in `h`, dense up to `cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series1 {
    coeffs: Vec<Rational>,
}

impl Series1 {
    pub fn zero(cutoff: u32) -> Self {
        Self { coeffs: vec![Rational::zero(); cutoff as usize + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        Self { coeffs }
    }

    pub fn cutoff(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: u32) -> Rational {
        self.coeffs.get(k as usize).cloned().unwrap_or_else(Rational::zero)
    }

    /// `e^(rate·h)`.
    pub fn exp(rate: &Rational, cutoff: u32) -> Self {
        let mut coeffs = Vec::with_capacity(cutoff as usize + 1);
        let mut term = Rational::one();
        coeffs.push(term.clone());
        for j in 1..=cutoff {
            term = term * rate / rat(j as i64);
            coeffs.push(term.clone());
        }
        Self { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.cutoff(), other.cutoff(), "series cutoff mismatch");
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cutoff(), other.cutoff(), "series cutoff mismatch");
        let n = self.coeffs.len();
        let mut coeffs = vec![Rational::zero(); n];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate().take(n - i) {
                coeffs[i + j] += x * y;
            }
        }
        Self { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::exp(&Rational::zero(), self.cutoff());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::gaussian::ratio;

    #[test]
    fn cutoff_mismatch_is_an_error() {
        let a = TruncatedSeries2::one(3);
        let b = TruncatedSeries2::one(4);
        assert_eq!(a.checked_add(&b), Err(PolyError::CutoffMismatch(3, 4)));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn truncation_drops_high_terms() {
        let mut x = TruncatedSeries2::zero(2);
        x.add_term(1, 0, &rat(1));
        x.add_term(0, 1, &rat(1));
        let sq = x.pow(3);
        assert!(sq.is_empty());
        let sq = x.pow(2);
        assert_eq!(sq.coeff(1, 1), rat(2));
    }

    #[test]
    fn exp_series() {
        let e = Series1::exp(&rat(-2), 3);
        assert_eq!(e.coeffs(), &[rat(1), rat(-2), rat(2), ratio(-4, 3)]);
        let prod = Series1::exp(&rat(1), 4).mul(&Series1::exp(&rat(-1), 4));
        assert_eq!(prod, Series1::exp(&rat(0), 4));
    }
}
