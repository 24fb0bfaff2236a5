//! Gauss diagram formulas: arrow-diagram enumeration, the universal formulas
//! `A_{k,l}`, `A_k^H`, `A_k^DK`, the pairing with Gauss diagrams and the
//! unsigned aggregation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::diagram::{ArrowId, BasedKnotDiagram, CanonicalKey, DiagramError, Endpoint, EndpointRole, Sign};
use crate::par;
use crate::poly::{fmt_rational, rational_from_json, rational_json, PolyError, Rational, Series1, TruncatedSeries2};
use crate::skein::CoefficientTable;
use crate::state::{jones_substitution, w_arrow, w_arrow_homfly, JonesModel};

/// Largest order for which universal formulas are tabulated by default.
pub const DEFAULT_ORDER_BOUND: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GdfError {
    #[error("diagram class `{0}` is not alternating in the arrow signs")]
    NotUnsigned(String),
    #[error("bad GDF JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("order {0} exceeds the supported bound")]
    OrderTooLarge(u32),
}

fn key_arrows(key: &CanonicalKey) -> usize {
    if key.0.is_empty() {
        0
    } else {
        key.0.split(' ').count() / 2
    }
}

fn insert_nonzero(terms: &mut BTreeMap<CanonicalKey, Rational>, key: CanonicalKey, c: Rational) {
    if c.is_zero() {
        return;
    }
    let slot = terms.entry(key.clone()).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        terms.remove(&key);
    }
}

fn terms_json(terms: &BTreeMap<CanonicalKey, Rational>, unsigned: bool) -> Value {
    let list: Vec<Value> = terms.iter().map(|(k, c)| json!({"key": k.0, "coeff": rational_json(c)})).collect();
    json!({"unsigned": unsigned, "terms": list})
}

fn terms_from_json(v: &Value) -> Result<(bool, BTreeMap<CanonicalKey, Rational>), GdfError> {
    let unsigned = v.get("unsigned").and_then(Value::as_bool).unwrap_or(false);
    let list = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| GdfError::Json("missing `terms` array".into()))?;
    let mut terms = BTreeMap::new();
    for t in list {
        let key = t.get("key").and_then(Value::as_str).ok_or_else(|| GdfError::Json("term without `key`".into()))?;
        let coeff = t
            .get("coeff")
            .and_then(rational_from_json)
            .ok_or_else(|| GdfError::Json(format!("bad coefficient for `{key}`")))?;
        // round-trip through the parser so that keys are validated
        let d = if unsigned {
            BasedKnotDiagram::from_key(&signed_placeholder(key))?
        } else {
            BasedKnotDiagram::from_key(key)?
        };
        let canon = if unsigned { d.unsigned_key() } else { d.canonical_key() };
        insert_nonzero(&mut terms, canon, coeff);
    }
    Ok((unsigned, terms))
}

/// Attaches `+` to every token of an unsigned key.
fn signed_placeholder(unsigned: &str) -> String {
    unsigned.split_whitespace().map(|t| format!("{t}+")).collect::<Vec<_>>().join(" ")
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: &BTreeMap<CanonicalKey, Rational>) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (k, c)) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str(" + ")?;
        }
        write!(f, "{}·[{}]", fmt_rational(c), k)?;
    }
    Ok(())
}

/// Rational combination of based arrow diagrams keyed canonically.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Gdf {
    terms: BTreeMap<CanonicalKey, Rational>,
}

impl Gdf {
    pub fn new() -> Self {
        Self::default()
    }

    /// The formula `1·A`.
    pub fn single(a: &BasedKnotDiagram) -> Self {
        let mut g = Self::new();
        g.add_term(a, Rational::one());
        g
    }

    pub fn add_term(&mut self, a: &BasedKnotDiagram, c: Rational) {
        insert_nonzero(&mut self.terms, a.canonical_key(), c);
    }

    pub fn add_key(&mut self, key: CanonicalKey, c: Rational) {
        insert_nonzero(&mut self.terms, key, c);
    }

    pub fn coeff(&self, key: &CanonicalKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalKey, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest arrow count among the terms.
    pub fn max_arrows(&self) -> usize {
        self.terms.keys().map(key_arrows).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::new();
        for (k, v) in &self.terms {
            out.add_key(k.clone(), v * c);
        }
        out
    }

    /// The terms with exactly `m` arrows.
    pub fn homogeneous_part(&self, m: usize) -> Self {
        Self {
            terms: self.terms.iter().filter(|(k, _)| key_arrows(k) == m).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    /// Applies `reverse_all_arrows` to every term.
    pub fn reverse_arrows(&self) -> Self {
        let mut out = Self::new();
        for (k, v) in &self.terms {
            let d = BasedKnotDiagram::from_key(&k.0).expect("stored keys parse");
            out.add_term(&d.reverse_all_arrows(), v.clone());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        terms_json(&self.terms, false)
    }

    pub fn from_json(v: &Value) -> Result<Self, GdfError> {
        match terms_from_json(v)? {
            (false, terms) => Ok(Self { terms }),
            (true, terms) => Ok(UnsignedGdf { terms }.expand()),
        }
    }
}

impl fmt::Display for Gdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms)
    }
}

/// Combination of unsigned diagrams `Σ ε₁⋯ε_m A_{ε₁⋯ε_m}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnsignedGdf {
    terms: BTreeMap<CanonicalKey, Rational>,
}

impl UnsignedGdf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_key(&mut self, key: CanonicalKey, c: Rational) {
        insert_nonzero(&mut self.terms, key, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalKey, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &CanonicalKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::new();
        for (k, v) in &self.terms {
            out.add_key(k.clone(), v * c);
        }
        out
    }

    /// Sorted coefficient multiset.
    pub fn coefficients(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.terms.values().cloned().collect();
        v.sort();
        v
    }

    /// Expands every unsigned diagram over its `2^m` sign assignments.
    pub fn expand(&self) -> Gdf {
        let mut out = Gdf::new();
        for (k, c) in &self.terms {
            let base = BasedKnotDiagram::from_key(&signed_placeholder(&k.0)).expect("stored keys parse");
            for (d, eps) in sign_variants(&base) {
                out.add_term(&d, c * Rational::from_integer(eps.into()));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        terms_json(&self.terms, true)
    }

    pub fn from_json(v: &Value) -> Result<Self, GdfError> {
        match terms_from_json(v)? {
            (true, terms) => Ok(Self { terms }),
            (false, _) => Err(GdfError::Json("expected an unsigned GDF".into())),
        }
    }
}

impl fmt::Display for UnsignedGdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms)
    }
}

/// All sign assignments of a diagram, with the product of the signs.
fn sign_variants(base: &BasedKnotDiagram) -> Vec<(BasedKnotDiagram, i32)> {
    let ids: Vec<ArrowId> = base.arrow_ids().collect();
    (0..1u32 << ids.len())
        .map(|mask| {
            let signs: BTreeMap<ArrowId, Sign> = ids
                .iter()
                .enumerate()
                .map(|(i, &id)| (id, if mask >> i & 1 == 1 { Sign::Neg } else { Sign::Pos }))
                .collect();
            let prod = signs.values().map(|s| s.value()).product();
            (BasedKnotDiagram::new(base.endpoints().to_vec(), signs).expect("same arrows"), prod)
        })
        .collect()
}

/// Splits a GDF by underlying diagram: classes whose coefficients are
/// `u·ε₁⋯ε_m` for a single `u` go to the unsigned part, the others stay signed.
pub fn collapse_mixed(f: &Gdf) -> Result<(UnsignedGdf, Gdf), GdfError> {
    let mut classes: BTreeSet<CanonicalKey> = BTreeSet::new();
    for k in f.terms.keys() {
        classes.insert(BasedKnotDiagram::from_key(&k.0)?.unsigned_key());
    }
    let mut unsigned = UnsignedGdf::new();
    let mut rest = Gdf::new();
    for class in classes {
        let base = BasedKnotDiagram::from_key(&signed_placeholder(&class.0))?;
        let variants = sign_variants(&base);
        let u = f.coeff(&variants[0].0.canonical_key());
        let alternating = variants
            .iter()
            .all(|(d, eps)| f.coeff(&d.canonical_key()) == &u * Rational::from_integer((*eps).into()));
        if alternating {
            unsigned.add_key(class, u);
        } else {
            for (d, _) in &variants {
                rest.add_term(d, f.coeff(&d.canonical_key()));
            }
        }
    }
    Ok((unsigned, rest))
}

/// Collapses a GDF into unsigned form; fails on the first underlying diagram
/// whose coefficients are not `u·ε₁⋯ε_m` for a single `u`.
pub fn unsigned_collapse(f: &Gdf) -> Result<UnsignedGdf, GdfError> {
    let (unsigned, rest) = collapse_mixed(f)?;
    match rest.terms.keys().next() {
        None => Ok(unsigned),
        Some(k) => Err(GdfError::NotUnsigned(BasedKnotDiagram::from_key(&k.0)?.unsigned_key().0)),
    }
}

/// Coefficients of the mixed form: unsigned terms followed by the remaining
/// signed terms, sorted.
pub fn mixed_coefficients(f: &Gdf) -> Result<Vec<Rational>, GdfError> {
    let (unsigned, rest) = collapse_mixed(f)?;
    let mut v = unsigned.coefficients();
    v.extend(rest.terms.values().cloned());
    v.sort();
    Ok(v)
}

/// Perfect matchings of `0..2m` as chord lists, each chord `(first, second)`.
fn matchings(m: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let first = free.remove(0);
        for i in 0..free.len() {
            let second = free.remove(i);
            cur.push((first, second));
            rec(free, cur, out);
            cur.pop();
            free.insert(i, second);
        }
        free.insert(0, first);
    }
    let mut out = Vec::new();
    rec(&mut (0..2 * m).collect(), &mut Vec::new(), &mut out);
    out
}

/// Every based arrow diagram with exactly `m` arrows, once each;
/// `(2m-1)!! · 4^m` of them for `m ≥ 1`.
pub fn enumerate_arrow_diagrams(m: usize) -> Vec<BasedKnotDiagram> {
    let mut out = Vec::new();
    for chords in matchings(m) {
        for dirs in 0..1u32 << m {
            for signs in 0..1u32 << m {
                let mut endpoints = vec![Endpoint { arrow: 0, role: EndpointRole::Head }; 2 * m];
                let mut sign_map = BTreeMap::new();
                for (i, &(p, q)) in chords.iter().enumerate() {
                    let id = i as ArrowId + 1;
                    let (rp, rq) = if dirs >> i & 1 == 0 {
                        (EndpointRole::Head, EndpointRole::Foot)
                    } else {
                        (EndpointRole::Foot, EndpointRole::Head)
                    };
                    endpoints[p] = Endpoint { arrow: id, role: rp };
                    endpoints[q] = Endpoint { arrow: id, role: rq };
                    sign_map.insert(id, if signs >> i & 1 == 0 { Sign::Pos } else { Sign::Neg });
                }
                out.push(BasedKnotDiagram::new(endpoints, sign_map).expect("valid by construction"));
            }
        }
    }
    out
}

/// Series data of one arrow diagram.
#[derive(Clone, Debug)]
pub struct WeightEntry {
    pub key: CanonicalKey,
    pub arrows: usize,
    /// `W_A(e^h, z)`.
    pub kauffman: TruncatedSeries2,
    /// `W_A` at the Jones point, in `h`.
    pub jones_dk: Series1,
    /// `W^H_A` at the Jones point, in `h`.
    pub jones_h: Series1,
}

impl WeightEntry {
    pub fn compute(a: &BasedKnotDiagram, order: u32) -> Result<Self, GdfError> {
        let w = w_arrow(a);
        let kauffman = w.substitute_exponential(order)?;
        let jones_dk = jones_substitution(&w, JonesModel::Kauffman, order)?;
        let jones_h = jones_substitution(&w_arrow_homfly(a), JonesModel::Homfly, order)?;
        Ok(Self { key: a.canonical_key(), arrows: a.arrow_count(), kauffman, jones_dk, jones_h })
    }

    pub fn jones(&self, model: JonesModel) -> &Series1 {
        match model {
            JonesModel::Kauffman => &self.jones_dk,
            JonesModel::Homfly => &self.jones_h,
        }
    }
}

/// Weight series of every arrow diagram up to a fixed order; all universal
/// formulas of that order are read off it.
#[derive(Clone, Debug)]
pub struct WeightTable {
    order: u32,
    entries: Vec<WeightEntry>,
}

impl WeightTable {
    pub fn build(order: u32) -> Result<Self, GdfError> {
        let mut entries = Vec::new();
        for m in 0..=order as usize {
            let diagrams = enumerate_arrow_diagrams(m);
            let batch = par::map_collect(&diagrams, |a| WeightEntry::compute(a, order));
            for e in batch {
                entries.push(e?);
            }
        }
        Ok(Self { order, entries })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn entries(&self) -> &[WeightEntry] {
        &self.entries
    }

    /// `A_{k,l} = Σ_A w_{k,l}(A) A`.
    pub fn a_kl(&self, k: u32, l: u32) -> Gdf {
        assert!(k + l <= self.order, "order {} exceeds table order {}", k + l, self.order);
        let mut g = Gdf::new();
        for e in self.entries.iter().filter(|e| e.arrows <= (k + l) as usize) {
            g.add_key(e.key.clone(), e.kauffman.coeff(k, l));
        }
        g
    }

    /// `A_k^H` or `A_k^DK`.
    pub fn a_jones(&self, model: JonesModel, k: u32) -> Gdf {
        assert!(k <= self.order, "order {k} exceeds table order {}", self.order);
        let mut g = Gdf::new();
        for e in self.entries.iter().filter(|e| e.arrows <= k as usize) {
            g.add_key(e.key.clone(), e.jones(model).coeff(k));
        }
        g
    }
}

static TABLES: [OnceLock<WeightTable>; DEFAULT_ORDER_BOUND as usize + 1] =
    [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// Process-wide table of at least the given order (at most
/// `DEFAULT_ORDER_BOUND`); a higher-order table already built is reused.
pub fn cached_table(order: u32) -> Result<&'static WeightTable, GdfError> {
    if order > DEFAULT_ORDER_BOUND {
        return Err(GdfError::OrderTooLarge(order));
    }
    if let Some(t) = TABLES[order as usize..].iter().find_map(OnceLock::get) {
        return Ok(t);
    }
    let table = WeightTable::build(order)?;
    Ok(TABLES[order as usize].get_or_init(|| table))
}

pub fn build_a_kl(k: u32, l: u32) -> Result<Gdf, GdfError> {
    Ok(WeightTable::build(k + l)?.a_kl(k, l))
}

pub fn build_a_jones(model: JonesModel, k: u32) -> Result<Gdf, GdfError> {
    Ok(WeightTable::build(k)?.a_jones(model, k))
}

/// `⟨F, G⟩ = Σ_{B ⊂ G} F(B)`.
pub fn pair(f: &Gdf, g: &BasedKnotDiagram) -> Rational {
    if f.is_empty() {
        return Rational::zero();
    }
    g.subdiagrams(f.max_arrows()).map(|b| f.coeff(&b.canonical_key())).sum()
}

/// Table of `Σ_{B ⊂ G, |B| ≤ order} w_{k,l}(B)` for every `k + l ≤ order`,
/// computed from the subdiagrams of `G` alone.
pub fn eval_direct_table(g: &BasedKnotDiagram, order: u32) -> Result<CoefficientTable, GdfError> {
    let subs: Vec<BasedKnotDiagram> = g.subdiagrams(order as usize).collect();
    let mut distinct: HashMap<CanonicalKey, (BasedKnotDiagram, u32)> = HashMap::new();
    for b in subs {
        distinct.entry(b.canonical_key()).or_insert((b, 0)).1 += 1;
    }
    let items: Vec<(BasedKnotDiagram, u32)> = distinct.into_values().collect();
    let series = par::map_collect(&items, |(b, _)| w_arrow(b).substitute_exponential(order));
    let mut table = CoefficientTable::new();
    for k in 0..=order {
        for l in 0..=order - k {
            table.insert((k, l), Rational::zero());
        }
    }
    for ((_, mult), s) in items.iter().zip(series) {
        let s = s?;
        for (kl, c) in s.terms() {
            *table.get_mut(kl).expect("within order") += c * Rational::from_integer((*mult).into());
        }
    }
    Ok(table)
}

/// `p_{k,l}(G)` as `Σ_{B ⊂ G} w_{k,l}(B)`.
pub fn eval_pkl_direct(g: &BasedKnotDiagram, k: u32, l: u32) -> Result<Rational, GdfError> {
    Ok(eval_direct_table(g, k + l)?[&(k, l)].clone())
}

/// Number of terms with positive and negative coefficient.
pub fn sign_counts(u: &UnsignedGdf) -> (usize, usize) {
    let pos = u.terms.values().filter(|c| c.is_positive()).count();
    (pos, u.len() - pos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn d(s: &str) -> BasedKnotDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_arrow_diagrams(0).len(), 1);
        assert_eq!(enumerate_arrow_diagrams(1).len(), 4);
        assert_eq!(enumerate_arrow_diagrams(2).len(), 48);
        assert_eq!(enumerate_arrow_diagrams(3).len(), 15 * 64);
        let keys: BTreeSet<_> = enumerate_arrow_diagrams(3).iter().map(|a| a.canonical_key()).collect();
        assert_eq!(keys.len(), 15 * 64);
    }

    #[test]
    fn sign_variants_keep_roles() {
        let base = BasedKnotDiagram::from_key("H1+ F2+ F1+ H2+").unwrap();
        let v = sign_variants(&base);
        assert_eq!(v.len(), 4);
        assert_eq!(v[3].0.canonical_key().0, "H1- F2- F1- H2-");
        assert_eq!(v[3].1, 1);
        assert_eq!(v[1].1, -1);
    }

    #[test]
    fn collapse_round_trip() {
        let mut u = UnsignedGdf::new();
        u.add_key(CanonicalKey("H1 F2 F1 H2".into()), rat(3));
        u.add_key(CanonicalKey("F1 H1".into()), rat(-2));
        assert_eq!(unsigned_collapse(&u.expand()).unwrap(), u);
        let mut g = Gdf::new();
        g.add_term(&d("O1+ U1+"), rat(1));
        assert!(matches!(unsigned_collapse(&g), Err(GdfError::NotUnsigned(_))));
    }

    #[test]
    fn json_round_trip() {
        let mut g = Gdf::new();
        g.add_term(&d("O1+ U2- U1+ O2-"), crate::poly::ratio(-3, 4));
        g.add_term(&BasedKnotDiagram::unknot(), rat(1));
        assert_eq!(Gdf::from_json(&g.to_json()).unwrap(), g);
        let u = unsigned_collapse(&build_a_kl(1, 1).unwrap()).unwrap();
        assert_eq!(UnsignedGdf::from_json(&u.to_json()).unwrap(), u);
        assert_eq!(Gdf::from_json(&u.to_json()).unwrap(), u.expand());
    }

    #[test]
    fn low_order_formulas() {
        let t = WeightTable::build(2).unwrap();
        assert_eq!(t.a_kl(0, 0), Gdf::single(&BasedKnotDiagram::unknot()));
        assert!(t.a_kl(0, 1).is_empty());
        assert!(t.a_kl(0, 2).is_empty());
        let a20 = unsigned_collapse(&t.a_kl(2, 0)).unwrap();
        assert_eq!(a20.coefficients(), vec![rat(-4)]);
        let a11 = unsigned_collapse(&t.a_kl(1, 1)).unwrap();
        assert_eq!(a11.coefficients(), vec![rat(2)]);
    }

    #[test]
    fn pairing_on_trefoil() {
        let g = d("O1- U2- O3- U1- O2- U3-");
        let t = WeightTable::build(2).unwrap();
        assert_eq!(pair(&t.a_kl(1, 1), &g), rat(2));
        assert_eq!(pair(&t.a_kl(2, 0), &g), rat(-4));
        assert_eq!(eval_pkl_direct(&g, 1, 1).unwrap(), rat(2));
        assert_eq!(pair(&Gdf::single(&BasedKnotDiagram::unknot()), &g), rat(1));
    }

    #[test]
    fn reversal_is_involution_on_formulas() {
        let a = WeightTable::build(2).unwrap().a_kl(2, 0);
        assert_eq!(a.reverse_arrows().reverse_arrows(), a);
    }
}
