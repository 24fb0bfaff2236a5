//! Skein-recursion oracles.
//!
//! The traversal starts at the base point; the first crossing met on its under
//! strand is expanded, and the recursion stops at descending diagrams, whose
//! value is fixed by the curl relations:
//!
//! * Dubrovnik: `D+ - D- = z (D0 - D∞)`, descending value `a^w d^(c-1)`
//!   with `d = (a - a^-1)/z + 1`.
//! * HOMFLY-PT: `a H+ - a^-1 H- = z H0`, descending value `δ^(c-1)` with
//!   `δ = (a - a^-1)/z`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::diagram::BasedKnotDiagram;
use crate::link::LinkStateDiagram;
use crate::par;
use crate::poly::{GaussianRational, LaurentPoly1, LaurentPoly2, PolyError, Rational, Series1};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeinError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("Jones polynomial {0} has non-integer or non-real coefficients")]
    NonIntegerJones(String),
}

/// Coefficients `(k, l) -> c` of `h^k z^l`, every pair with `k + l <= cutoff` present.
pub type CoefficientTable = BTreeMap<(u32, u32), Rational>;

// Below this size the recursion stays on the calling thread.
const PARALLEL_MIN_ARROWS: usize = 5;

fn circle_power(circle: &LaurentPoly2, components: usize) -> LaurentPoly2 {
    circle.pow(components as u32 - 1)
}

fn dubrovnik_rec(l: &LinkStateDiagram) -> LaurentPoly2 {
    let Some(id) = l.first_bottom_passage() else {
        return LaurentPoly2::a_pow(l.writhe()) * circle_power(&LaurentPoly2::circle_dubrovnik(), l.component_count());
    };
    let e = l.sign(id).expect("arrow present").value();
    let switched = l.switch_crossing(id).expect("arrow present");
    let smoothed = l.smooth_oriented(id).expect("arrow present");
    let singular = l.singularize(id).expect("arrow present");
    let (x, (y, w)) = if l.arrow_count() >= PARALLEL_MIN_ARROWS {
        par::join(
            || dubrovnik_rec(&switched),
            || par::join(|| dubrovnik_rec(&smoothed), || dubrovnik_rec(&singular)),
        )
    } else {
        (dubrovnik_rec(&switched), (dubrovnik_rec(&smoothed), dubrovnik_rec(&singular)))
    };
    x + (y - w).shift(0, 1).scale(&GaussianRational::int(e as i64))
}

/// Regular-isotopy Dubrovnik polynomial `D`.
pub fn dubrovnik_d(k: &BasedKnotDiagram) -> LaurentPoly2 {
    dubrovnik_rec(&LinkStateDiagram::from(k))
}

/// Oriented-knot normalization `DK = a^(-w) D`.
pub fn dubrovnik_dk(k: &BasedKnotDiagram) -> LaurentPoly2 {
    dubrovnik_d(k).shift(-k.writhe(), 0)
}

fn homfly_rec(l: &LinkStateDiagram) -> LaurentPoly2 {
    let Some(id) = l.first_bottom_passage() else {
        return circle_power(&LaurentPoly2::circle_homfly(), l.component_count());
    };
    let e = l.sign(id).expect("arrow present").value();
    let switched = l.switch_crossing(id).expect("arrow present");
    let smoothed = l.smooth_oriented(id).expect("arrow present");
    let (x, y) = if l.arrow_count() >= PARALLEL_MIN_ARROWS {
        par::join(|| homfly_rec(&switched), || homfly_rec(&smoothed))
    } else {
        (homfly_rec(&switched), homfly_rec(&smoothed))
    };
    // H+ = a^-2 H- + a^-1 z H0 ;  H- = a^2 H+ - a z H0
    x.shift(-2 * e, 0) + y.shift(-e, 1).scale(&GaussianRational::int(e as i64))
}

/// HOMFLY-PT polynomial with `a H+ - a^-1 H- = z H0` and unknot `1`.
pub fn homfly(k: &BasedKnotDiagram) -> LaurentPoly2 {
    homfly_rec(&LinkStateDiagram::from(k))
}

fn checked_jones(j: LaurentPoly1) -> Result<LaurentPoly1, SkeinError> {
    if j.is_real() && j.has_integer_coefficients() {
        Ok(j)
    } else {
        Err(SkeinError::NonIntegerJones(j.to_string()))
    }
}

/// `J(s) = DK(-i s^-3, -i (s^-1 + s))`.
pub fn jones_from_dk_poly(dk: &LaurentPoly2) -> Result<LaurentPoly1, SkeinError> {
    let minus_i = -GaussianRational::i();
    let a_image = LaurentPoly1::monomial(minus_i.clone(), -3);
    let z_image = LaurentPoly1::monomial(minus_i.clone(), -1) + LaurentPoly1::monomial(minus_i, 1);
    checked_jones(dk.substitute_monomial(&a_image, &z_image)?)
}

/// `J(s) = H(s^-4, s^2 - s^-2)`.
pub fn jones_from_homfly_poly(h: &LaurentPoly2) -> Result<LaurentPoly1, SkeinError> {
    let a_image = LaurentPoly1::monomial(1, -4);
    let z_image = LaurentPoly1::monomial(1, 2) - LaurentPoly1::monomial(1, -2);
    checked_jones(h.substitute_monomial(&a_image, &z_image)?)
}

pub fn jones_from_dk(k: &BasedKnotDiagram) -> Result<LaurentPoly1, SkeinError> {
    jones_from_dk_poly(&dubrovnik_dk(k))
}

pub fn jones_from_homfly(k: &BasedKnotDiagram) -> Result<LaurentPoly1, SkeinError> {
    jones_from_homfly_poly(&homfly(k))
}

/// Coefficients `c_k` of `J(i e^h) = Σ c_k h^k`.
pub fn jones_series(j: &LaurentPoly1, cutoff: u32) -> Result<Series1, SkeinError> {
    Ok(j.substitute_i_exp(cutoff)?)
}

/// Full coefficient table of `p(e^h, z)` up to total degree `cutoff`.
pub fn coefficient_table(p: &LaurentPoly2, cutoff: u32) -> Result<CoefficientTable, SkeinError> {
    let series = p.substitute_exponential(cutoff)?;
    let mut table = CoefficientTable::new();
    for k in 0..=cutoff {
        for l in 0..=cutoff - k {
            table.insert((k, l), series.coeff(k, l));
        }
    }
    Ok(table)
}

/// `p_{k,l}`: coefficients of `DK(e^h, z)`.
pub fn p_table(k: &BasedKnotDiagram, cutoff: u32) -> Result<CoefficientTable, SkeinError> {
    coefficient_table(&dubrovnik_dk(k), cutoff)
}

/// `H_{k,l}`: coefficients of `H(e^h, z)`.
pub fn h_table(k: &BasedKnotDiagram, cutoff: u32) -> Result<CoefficientTable, SkeinError> {
    coefficient_table(&homfly(k), cutoff)
}

/// True for `DK` values of knots: `z`-polynomial with real integer coefficients.
pub fn is_knot_polynomial(p: &LaurentPoly2) -> bool {
    p.min_z_exp().map_or(true, |z| z >= 0) && p.is_real() && p.has_integer_coefficients()
}

pub fn is_one(p: &LaurentPoly2) -> bool {
    *p == LaurentPoly2::one()
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn d(s: &str) -> BasedKnotDiagram {
        s.parse().unwrap()
    }

    fn poly(terms: &[(i64, i32, i32)]) -> LaurentPoly2 {
        terms.iter().map(|&(c, a, z)| LaurentPoly2::monomial(c, a, z)).sum()
    }

    const LEFT_TREFOIL: &str = "O1- U2- O3- U1- O2- U3-";

    #[test]
    fn unknot_and_kinks() {
        assert_eq!(dubrovnik_d(&BasedKnotDiagram::unknot()), LaurentPoly2::one());
        assert_eq!(dubrovnik_d(&d("O1+ U1+")), LaurentPoly2::a());
        assert_eq!(dubrovnik_dk(&d("O1+ U1+")), LaurentPoly2::one());
        for code in ["U1+ O1+", "O1- U1-", "U1- O1-"] {
            assert_eq!(dubrovnik_dk(&d(code)), LaurentPoly2::one(), "{code}");
            assert_eq!(homfly(&d(code)), LaurentPoly2::one(), "{code}");
        }
        assert_eq!(homfly(&BasedKnotDiagram::unknot()), LaurentPoly2::one());
    }

    #[test]
    fn left_trefoil_regression() {
        let k = d(LEFT_TREFOIL);
        // 2a^-1 - a + a^2 z - z + a^-1 z^2 - a z^2
        let expected_d = poly(&[(2, -1, 0), (-1, 1, 0), (1, 2, 1), (-1, 0, 1), (1, -1, 2), (-1, 1, 2)]);
        assert_eq!(dubrovnik_d(&k), expected_d);
        // 2a^2 - a^4 + a^5 z - a^3 z + a^2 z^2 - a^4 z^2
        let expected_dk = poly(&[(2, 2, 0), (-1, 4, 0), (1, 5, 1), (-1, 3, 1), (1, 2, 2), (-1, 4, 2)]);
        assert_eq!(dubrovnik_dk(&k), expected_dk);
    }

    #[test]
    fn jones_routes_agree_on_trefoil() {
        let k = d(LEFT_TREFOIL);
        let a = jones_from_dk(&k).unwrap();
        let b = jones_from_homfly(&k).unwrap();
        assert_eq!(a, b);
        assert_eq!(jones_series(&a, 3).unwrap().coeff(0), rat(1));
        assert_eq!(jones_from_dk(&BasedKnotDiagram::unknot()).unwrap(), LaurentPoly1::one());
    }

    #[test]
    fn trefoil_p_table() {
        let p = p_table(&d(LEFT_TREFOIL), 3).unwrap();
        assert_eq!(p[&(1, 1)], rat(2));
        assert_eq!(p[&(2, 0)], rat(-4));
        assert_eq!(p[&(3, 0)], rat(-8));
        assert_eq!(p[&(2, 1)], rat(8));
        assert_eq!(p[&(1, 2)], rat(-2));
        assert_eq!(p[&(0, 0)], rat(1));
        for n in 1..=3 {
            assert_eq!(p[&(0, n)], rat(0));
        }
    }
}
