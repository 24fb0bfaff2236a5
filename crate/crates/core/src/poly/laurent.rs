use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::gaussian::{rat, GaussianRational, Rational};
use super::series::{Series1, TruncatedSeries2};
use super::{rational_json, PolyError};

/// Laurent polynomial in `a`, `z` with Gaussian-rational coefficients.
///
/// Terms are keyed by `(a exponent, z exponent)`; zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i32, i32), GaussianRational>,
}

impl LaurentPoly2 {
    pub fn monomial(c: impl Into<GaussianRational>, a_exp: i32, z_exp: i32) -> Self {
        let mut p = Self::default();
        p.add_term(a_exp, z_exp, &c.into());
        p
    }

    pub fn constant(c: impl Into<GaussianRational>) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn a() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn z() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn a_pow(k: i32) -> Self {
        Self::monomial(1, k, 0)
    }

    /// Dubrovnik circle value `d = (a - a^-1)/z + 1`.
    pub fn circle_dubrovnik() -> Self {
        Self::monomial(1, 1, -1) - Self::monomial(1, -1, -1) + Self::constant(1)
    }

    /// HOMFLY-PT circle value `δ = (a - a^-1)/z`.
    pub fn circle_homfly() -> Self {
        Self::monomial(1, 1, -1) - Self::monomial(1, -1, -1)
    }

    pub fn add_term(&mut self, a_exp: i32, z_exp: i32, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((a_exp, z_exp)).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(a_exp, z_exp));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a_exp: i32, z_exp: i32) -> GaussianRational {
        self.terms.get(&(a_exp, z_exp)).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::default();
        for (&(a, z), v) in &self.terms {
            out.add_term(a, z, &(v * c));
        }
        out
    }

    /// Multiplies by the monomial `a^da z^dz`.
    pub fn shift(&self, da: i32, dz: i32) -> Self {
        Self { terms: self.terms.iter().map(|(&(a, z), c)| ((a + da, z + dz), c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(GaussianRational::is_gaussian_integer)
    }

    pub fn min_z_exp(&self) -> Option<i32> {
        self.terms.keys().map(|&(_, z)| z).min()
    }

    /// Sets `a = 1`, leaving a polynomial in `z` alone.
    pub fn evaluate_a1(&self) -> Self {
        let mut out = Self::default();
        for (&(_, z), c) in &self.terms {
            out.add_term(0, z, c);
        }
        out
    }

    /// Expands `p(e^h, z)` as a power series in `h`, `z` truncated to total degree `cutoff`.
    pub fn substitute_exponential(&self, cutoff: u32) -> Result<TruncatedSeries2, PolyError> {
        let mut out = TruncatedSeries2::zero(cutoff);
        for (&(a, z), c) in &self.terms {
            if !c.is_real() {
                return Err(PolyError::NonReal(c.to_string()));
            }
            if z < 0 {
                return Err(PolyError::NegativeZExponent(z));
            }
            let z = z as u32;
            if z > cutoff {
                continue;
            }
            let exp = Series1::exp(&rat(a as i64), cutoff - z);
            for (j, e) in exp.coeffs().iter().enumerate() {
                out.add_term(j as u32, z, &(e * &c.re));
            }
        }
        Ok(out)
    }

    /// Expands `p(e^(rate·h), z_image(h))` as a univariate series truncated at `cutoff`.
    pub fn substitute_h(&self, a_rate: i64, z_image: &Series1) -> Result<Series1, PolyError> {
        let cutoff = z_image.cutoff();
        let mut out = Series1::zero(cutoff);
        let mut z_powers: BTreeMap<i32, Series1> = BTreeMap::new();
        for (&(a, z), c) in &self.terms {
            if !c.is_real() {
                return Err(PolyError::NonReal(c.to_string()));
            }
            if z < 0 {
                return Err(PolyError::NegativeZExponent(z));
            }
            let zp = z_powers.entry(z).or_insert_with(|| z_image.pow(z as u32)).clone();
            let term = Series1::exp(&rat(a as i64 * a_rate), cutoff).mul(&zp).scale(&c.re);
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Formal substitution `a ↦ a_image`, `z ↦ z_image`. Negative exponents
    /// require the corresponding image to be a single invertible monomial.
    pub fn substitute_monomial(
        &self,
        a_image: &LaurentPoly1,
        z_image: &LaurentPoly1,
    ) -> Result<LaurentPoly1, PolyError> {
        let mut a_cache: BTreeMap<i32, LaurentPoly1> = BTreeMap::new();
        let mut z_cache: BTreeMap<i32, LaurentPoly1> = BTreeMap::new();
        let mut out = LaurentPoly1::default();
        for (&(a, z), c) in &self.terms {
            if !a_cache.contains_key(&a) {
                a_cache.insert(a, a_image.powi(a).ok_or(PolyError::NotInvertible("a"))?);
            }
            if !z_cache.contains_key(&z) {
                z_cache.insert(z, z_image.powi(z).ok_or(PolyError::NotInvertible("z"))?);
            }
            let term = (&a_cache[&a] * &z_cache[&z]).scale(c);
            out = &out + &term;
        }
        Ok(out)
    }

    /// JSON array of `{aExp, zExp, re, im}` sorted by `(aExp, zExp)`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(&(a, z), c)| {
                    json!({
                        "aExp": a,
                        "zExp": z,
                        "re": rational_json(&c.re),
                        "im": rational_json(&c.im),
                    })
                })
                .collect(),
        )
    }
}

impl Zero for LaurentPoly2 {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly2 {
    fn one() -> Self {
        Self::constant(1)
    }
}

impl<'a> Add<&'a LaurentPoly2> for &'a LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        for (&(a, z), c) in &rhs.terms {
            out.add_term(a, z, c);
        }
        out
    }
}

impl Add for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(mut self, rhs: LaurentPoly2) -> LaurentPoly2 {
        for (&(a, z), c) in &rhs.terms {
            self.add_term(a, z, c);
        }
        self
    }
}

impl<'a> Sub<&'a LaurentPoly2> for &'a LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        for (&(a, z), c) in &rhs.terms {
            out.add_term(a, z, &-c.clone());
        }
        out
    }
}

impl Sub for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, rhs: LaurentPoly2) -> LaurentPoly2 {
        &self - &rhs
    }
}

impl Neg for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        Self { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl<'a> Mul<&'a LaurentPoly2> for &'a LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = LaurentPoly2::default();
        for (&(a1, z1), c1) in &self.terms {
            for (&(a2, z2), c2) in &rhs.terms {
                out.add_term(a1 + a2, z1 + z2, &(c1 * c2));
            }
        }
        out
    }
}

impl Mul for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, rhs: LaurentPoly2) -> LaurentPoly2 {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPoly2 {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |acc, p| acc + p)
    }
}

fn fmt_var(out: &mut String, name: char, e: i32) {
    match e {
        0 => {}
        1 => out.push(name),
        _ => {
            out.push(name);
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

/// Joins `(coefficient, monomial)` pairs into `2a^2 - a^4 + a^5 z` style text.
fn render_terms(terms: Vec<(GaussianRational, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (c, mono)) in terms.into_iter().enumerate() {
        let negative = c.is_real() && c.re < Rational::zero();
        let c = if negative { -c } else { c };
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&c.to_string());
        } else if !c.is_one() {
            out.push_str(&c.to_string());
            out.push_str(&mono);
        } else {
            out.push_str(&mono);
        }
    }
    out
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .terms
            .iter()
            .map(|(&(a, z), c)| {
                let mut mono = String::new();
                fmt_var(&mut mono, 'a', a);
                if z != 0 {
                    if !mono.is_empty() {
                        mono.push(' ');
                    }
                    fmt_var(&mut mono, 'z', z);
                }
                (c.clone(), mono)
            })
            .collect();
        f.write_str(&render_terms(terms))
    }
}

/// Laurent polynomial in one variable `s`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly1 {
    terms: BTreeMap<i32, GaussianRational>,
}

impl LaurentPoly1 {
    pub fn monomial(c: impl Into<GaussianRational>, e: i32) -> Self {
        let mut p = Self::default();
        p.add_term(e, &c.into());
        p
    }

    pub fn s() -> Self {
        Self::monomial(1, 1)
    }

    pub fn add_term(&mut self, e: i32, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: i32) -> GaussianRational {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::default();
        for (&e, v) in &self.terms {
            out.add_term(e, &(v * c));
        }
        out
    }

    /// Inverse of a single-term polynomial.
    pub fn inverse_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&e, c) = self.terms.iter().next()?;
        Some(Self::monomial(c.inv()?, -e))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power; negative powers only for invertible monomials.
    pub fn powi(&self, e: i32) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            Some(self.inverse_monomial()?.pow(e.unsigned_abs()))
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(GaussianRational::is_gaussian_integer)
    }

    /// Expands `p(i·e^h)` as a series in `h`; fails if any coefficient is not real.
    pub fn substitute_i_exp(&self, cutoff: u32) -> Result<Series1, PolyError> {
        let mut re = Series1::zero(cutoff);
        let mut im = Series1::zero(cutoff);
        for (&e, c) in &self.terms {
            let unit = c * &GaussianRational::i_pow(e as i64);
            let exp = Series1::exp(&rat(e as i64), cutoff);
            re = re.add(&exp.scale(&unit.re));
            im = im.add(&exp.scale(&unit.im));
        }
        if let Some(bad) = im.coeffs().iter().find(|c| !c.is_zero()) {
            return Err(PolyError::NonReal(super::gaussian::fmt_rational(bad)));
        }
        Ok(re)
    }
}

impl Zero for LaurentPoly1 {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly1 {
    fn one() -> Self {
        Self::monomial(1, 0)
    }
}

impl<'a> Add<&'a LaurentPoly1> for &'a LaurentPoly1 {
    type Output = LaurentPoly1;
    fn add(self, rhs: &LaurentPoly1) -> LaurentPoly1 {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c);
        }
        out
    }
}

impl Add for LaurentPoly1 {
    type Output = LaurentPoly1;
    fn add(self, rhs: LaurentPoly1) -> LaurentPoly1 {
        &self + &rhs
    }
}

impl<'a> Sub<&'a LaurentPoly1> for &'a LaurentPoly1 {
    type Output = LaurentPoly1;
    fn sub(self, rhs: &LaurentPoly1) -> LaurentPoly1 {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, &-c.clone());
        }
        out
    }
}

impl Sub for LaurentPoly1 {
    type Output = LaurentPoly1;
    fn sub(self, rhs: LaurentPoly1) -> LaurentPoly1 {
        &self - &rhs
    }
}

impl Neg for LaurentPoly1 {
    type Output = LaurentPoly1;
    fn neg(self) -> LaurentPoly1 {
        Self { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl<'a> Mul<&'a LaurentPoly1> for &'a LaurentPoly1 {
    type Output = LaurentPoly1;
    fn mul(self, rhs: &LaurentPoly1) -> LaurentPoly1 {
        let mut out = LaurentPoly1::default();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Mul for LaurentPoly1 {
    type Output = LaurentPoly1;
    fn mul(self, rhs: LaurentPoly1) -> LaurentPoly1 {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .terms
            .iter()
            .map(|(&e, c)| {
                let mut mono = String::new();
                fmt_var(&mut mono, 's', e);
                (c.clone(), mono)
            })
            .collect();
        f.write_str(&render_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::gaussian::ratio;

    fn a() -> LaurentPoly2 {
        LaurentPoly2::a()
    }
    fn ainv() -> LaurentPoly2 {
        LaurentPoly2::a_pow(-1)
    }

    #[test]
    fn d_times_z() {
        let lhs = LaurentPoly2::circle_dubrovnik() * LaurentPoly2::z();
        let rhs = a() - ainv() + LaurentPoly2::z();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn difference_of_squares() {
        let lhs = (a() - ainv()) * (a() + ainv());
        assert_eq!(lhs, LaurentPoly2::a_pow(2) - LaurentPoly2::a_pow(-2));
    }

    #[test]
    fn zeroth_power_is_one() {
        assert_eq!(LaurentPoly2::circle_dubrovnik().pow(0), LaurentPoly2::one());
    }

    #[test]
    fn evaluate_a1_cases() {
        assert_eq!(LaurentPoly2::circle_dubrovnik().evaluate_a1(), LaurentPoly2::one());
        assert!(LaurentPoly2::zero().evaluate_a1().is_zero());
    }

    #[test]
    fn exponential_of_a_squared() {
        let s = LaurentPoly2::a_pow(2).substitute_exponential(2).unwrap();
        assert_eq!(s.coeff(0, 0), rat(1));
        assert_eq!(s.coeff(1, 0), rat(2));
        assert_eq!(s.coeff(2, 0), rat(2));
        assert_eq!(s.len(), 3);
        let one = LaurentPoly2::one().substitute_exponential(3).unwrap();
        assert_eq!(one.coeff(0, 0), rat(1));
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn exponential_rejects_bad_input() {
        let nonreal = LaurentPoly2::constant(GaussianRational::i());
        assert!(matches!(nonreal.substitute_exponential(2), Err(PolyError::NonReal(_))));
        let neg = LaurentPoly2::monomial(1, 0, -1);
        assert!(matches!(neg.substitute_exponential(2), Err(PolyError::NegativeZExponent(-1))));
    }

    #[test]
    fn trefoil_expansion() {
        // 2a^2 - a^4 + a^5 z - a^3 z + a^2 z^2 - a^4 z^2
        let dk = LaurentPoly2::monomial(2, 2, 0) - LaurentPoly2::monomial(1, 4, 0)
            + LaurentPoly2::monomial(1, 5, 1)
            - LaurentPoly2::monomial(1, 3, 1)
            + LaurentPoly2::monomial(1, 2, 2)
            - LaurentPoly2::monomial(1, 4, 2);
        let s = dk.substitute_exponential(3).unwrap();
        // d/dh at h=0 by hand: h z -> 5-3 = 2; h^2 -> (2·4 - 16)/2 = -4; h^3 -> (2·8 - 64)/6 = -8;
        // h^2 z -> (25 - 9)/2 = 8; h z^2 -> 2 - 4 = -2
        assert_eq!(s.coeff(1, 1), rat(2));
        assert_eq!(s.coeff(2, 0), rat(-4));
        assert_eq!(s.coeff(3, 0), rat(-8));
        assert_eq!(s.coeff(2, 1), rat(8));
        assert_eq!(s.coeff(1, 2), rat(-2));
        assert_eq!(s.coeff(0, 0), rat(1));
    }

    #[test]
    fn unit_cancellation_under_substitution() {
        let p = a() * ainv();
        let a_img = LaurentPoly1::monomial(-GaussianRational::i(), -3);
        let z_img = LaurentPoly1::monomial(1, 1);
        assert_eq!(p.substitute_monomial(&a_img, &z_img).unwrap(), LaurentPoly1::one());
        assert_eq!(
            LaurentPoly2::one().substitute_monomial(&a_img, &z_img).unwrap(),
            LaurentPoly1::one()
        );
    }

    #[test]
    fn negative_power_needs_monomial_image() {
        let p = LaurentPoly2::a_pow(-1);
        let a_img = LaurentPoly1::s() + LaurentPoly1::one();
        let z_img = LaurentPoly1::s();
        assert!(matches!(p.substitute_monomial(&a_img, &z_img), Err(PolyError::NotInvertible("a"))));
    }

    #[test]
    fn i_exp_substitution() {
        // s^2 + s^-2 at s = i e^h is -(e^{2h} + e^{-2h}) = -2 - 4h^2 - ...
        let p = LaurentPoly1::monomial(1, 2) + LaurentPoly1::monomial(1, -2);
        let s = p.substitute_i_exp(2).unwrap();
        assert_eq!(s.coeffs(), &[rat(-2), rat(0), rat(-4)]);
        assert!(LaurentPoly1::s().substitute_i_exp(1).is_err());
    }

    #[test]
    fn display_forms() {
        let p = LaurentPoly2::monomial(2, 2, 0) - LaurentPoly2::monomial(1, 4, 0)
            + LaurentPoly2::monomial(1, 5, 1);
        assert_eq!(p.to_string(), "2a^2 - a^4 + a^5 z");
        assert_eq!(LaurentPoly2::zero().to_string(), "0");
        assert_eq!(LaurentPoly2::constant(GaussianRational::real(ratio(-1, 2))).to_string(), "-1/2");
        assert_eq!(LaurentPoly2::monomial(-1, -1, -1).to_string(), "-a^-1 z^-1");
    }
}
