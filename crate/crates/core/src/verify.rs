//! Verification suites over a corpus. Each check is one report line
//! `CHECK name knot PASS|FAIL expected actual`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::corpus::CorpusEntry;
use crate::diagram::{ArrowId, BasedKnotDiagram, Sign};
use crate::gdf::{self, pair, GdfError, WeightTable};
use crate::poly::{rat, ratio, LaurentPoly2, Rational};
use crate::skein::{self, SkeinError};
use crate::state::{self, JonesModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub knot: String,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
}

fn compact(s: &str) -> String {
    let out: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if out.is_empty() {
        "-".into()
    } else {
        out
    }
}

impl Check {
    pub fn new(name: impl Into<String>, knot: &str, expected: impl fmt::Display, actual: impl fmt::Display) -> Self {
        let expected = compact(&expected.to_string());
        let actual = compact(&actual.to_string());
        Self { name: name.into(), knot: knot.to_string(), pass: expected == actual, expected, actual }
    }

    /// A check whose outcome is decided by the caller.
    pub fn verdict(
        name: impl Into<String>,
        knot: &str,
        pass: bool,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) -> Self {
        Self {
            name: name.into(),
            knot: knot.to_string(),
            pass,
            expected: compact(&expected.to_string()),
            actual: compact(&actual.to_string()),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "CHECK {} {} {} {} {}", self.name, self.knot, status, self.expected, self.actual)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn count(&self) -> (usize, usize) {
        let pass = self.checks.iter().filter(|c| c.pass).count();
        (pass, self.checks.len() - pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Skein(#[from] SkeinError),
    #[error(transparent)]
    Gdf(#[from] GdfError),
    #[error(transparent)]
    State(#[from] state::StateError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    StateModel,
    Representation,
    Identities,
    Vassiliev,
    Jones,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::StateModel, Suite::Representation, Suite::Identities, Suite::Vassiliev, Suite::Jones];

    pub fn name(self) -> &'static str {
        match self {
            Suite::StateModel => "state-model",
            Suite::Representation => "representation",
            Suite::Identities => "identities",
            Suite::Vassiliev => "vassiliev",
            Suite::Jones => "jones",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        [Suite::StateModel, Suite::Representation, Suite::Identities, Suite::Vassiliev, Suite::Jones, Suite::All]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Size limits of the individual suites.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Largest `k + l` checked on every knot.
    pub order: u32,
    /// Knots with at most this many arrows are also checked at `order + 1`.
    pub high_order_max_arrows: usize,
    /// Knots with at most this many arrows get every base-point rotation checked.
    pub rotation_max_arrows: usize,
    /// Finite differences run on knots with at most this many arrows.
    pub vassiliev_max_arrows: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { order: 3, high_order_max_arrows: 3, rotation_max_arrows: 5, vassiliev_max_arrows: 5 }
    }
}

pub fn run_suite(suite: Suite, corpus: &[CorpusEntry], limits: &Limits) -> Result<Report, VerifyError> {
    let mut report = Report::default();
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in suites {
        let part = match s {
            Suite::StateModel => state_model_suite(corpus, limits)?,
            Suite::Representation => representation_suite(corpus, limits)?,
            Suite::Identities => identities_suite(corpus, limits)?,
            Suite::Vassiliev => vassiliev_suite(corpus, limits)?,
            Suite::Jones => jones_suite(corpus)?,
            Suite::All => unreachable!(),
        };
        report.extend(part);
    }
    Ok(report)
}

fn rotations(g: &BasedKnotDiagram) -> Vec<BasedKnotDiagram> {
    let mut out = vec![g.clone()];
    for _ in 1..g.endpoints().len() {
        let next = out.last().expect("nonempty").move_base_point();
        out.push(next);
    }
    out
}

/// Oracle equivalence of the state sums, normalization and stored expectations.
pub fn state_model_suite(corpus: &[CorpusEntry], limits: &Limits) -> Result<Report, VerifyError> {
    let mut r = Report::default();
    for e in corpus {
        let g = &e.diagram;
        let dk = skein::dubrovnik_dk(g);
        r.push(Check::new("dk-state-sum", &e.name, &dk, state::dk_state_sum(g)));
        if g.arrow_count() <= limits.rotation_max_arrows {
            let rots = rotations(g);
            let agree = rots.iter().filter(|rg| state::dk_state_sum(rg) == dk && skein::dubrovnik_dk(rg) == dk).count();
            r.push(Check::new("dk-rotations", &e.name, rots.len(), agree));
        }
        r.push(Check::new("homfly-state-sum", &e.name, skein::homfly(g), state::homfly_state_sum(g)));
        r.push(Check::new("dk-at-a1", &e.name, 1, dk.evaluate_a1()));
        r.push(Check::verdict("dk-integral", &e.name, skein::is_knot_polynomial(&dk), "z-polynomial", &dk));
        let p = skein::p_table(g, 4)?;
        r.push(Check::new("p0_0", &e.name, 1, &p[&(0, 0)]));
        let p0n: Vec<String> = (1..=4).map(|n| p[&(0, n)].to_string()).collect();
        r.push(Check::new("p0_n", &e.name, "0,0,0,0", p0n.join(",")));
        for (key, value) in &e.expected {
            match key.as_str() {
                "D" => r.push(Check::new("expected-D", &e.name, value, skein::dubrovnik_d(g))),
                "DK" => r.push(Check::new("expected-DK", &e.name, value, &dk)),
                _ => {}
            }
        }
        for ((k, l), value) in e.expected_p() {
            r.push(Check::new(format!("expected-p{k}_{l}"), &e.name, value, &p[&(k, l)]));
        }
    }
    Ok(r)
}

/// `Σ_B w_{k,l}(B) = ⟨A_{k,l}, G⟩ = p_{k,l}(G)` and `Σ_B W_B = DK(G)`.
pub fn representation_suite(corpus: &[CorpusEntry], limits: &Limits) -> Result<Report, VerifyError> {
    let mut r = Report::default();
    let high = corpus.iter().any(|e| e.diagram.arrow_count() <= limits.high_order_max_arrows);
    let table = gdf::cached_table(if high { limits.order + 1 } else { limits.order })?;
    for e in corpus {
        let g = &e.diagram;
        let order = if g.arrow_count() <= limits.high_order_max_arrows { limits.order + 1 } else { limits.order };
        let p = skein::p_table(g, order)?;
        let direct = gdf::eval_direct_table(g, order)?;
        let shifted = g.move_base_point();
        for k in 0..=order {
            for l in 0..=order - k {
                let a = table.a_kl(k, l);
                let paired = pair(&a, g);
                let d = &direct[&(k, l)];
                let pass = paired == p[&(k, l)] && *d == p[&(k, l)];
                r.push(Check::verdict(
                    format!("p{k}_{l}-representation"),
                    &e.name,
                    pass,
                    &p[&(k, l)],
                    format!("{d}/{paired}"),
                ));
                if k + l <= limits.order {
                    r.push(Check::new(format!("p{k}_{l}-base-point"), &e.name, &paired, pair(&a, &shifted)));
                }
            }
        }
        if g.arrow_count() <= 7 {
            let sum: LaurentPoly2 = g.subdiagrams(g.arrow_count()).map(|b| state::w_arrow(&b)).sum();
            r.push(Check::new("dk-subdiagram-sum", &e.name, skein::dubrovnik_dk(g), sum));
        }
    }
    Ok(r)
}

/// Signed linking-number counts `(Σ ε_α lk₁(α), Σ ε_α lk₂(α))` over all
/// smoothings, counting crossings with the head on the first, resp. second, arc.
pub fn linking_counts(g: &BasedKnotDiagram) -> (i64, i64) {
    let (mut first, mut second) = (0i64, 0i64);
    for alpha in g.arrow_ids() {
        let (h, f) = g.positions(alpha).expect("present");
        let (lo, hi) = (h.min(f), h.max(f));
        let inside = |p: usize| lo < p && p < hi;
        let eps_a = g.sign(alpha).expect("present").value() as i64;
        for beta in g.arrow_ids().filter(|&b| b != alpha) {
            let (bh, bf) = g.positions(beta).expect("present");
            if inside(bh) == inside(bf) {
                continue;
            }
            let eps = g.sign(beta).expect("present").value() as i64 * eps_a;
            if inside(bh) {
                first += eps;
            } else {
                second += eps;
            }
        }
    }
    (first, second)
}

/// The single unsigned diagram of `A_{k,l}` as a GDF with coefficient 1.
fn unique_diagram(table: &WeightTable, k: u32, l: u32) -> Result<gdf::Gdf, VerifyError> {
    let u = gdf::unsigned_collapse(&table.a_kl(k, l))?;
    let mut one = gdf::UnsignedGdf::new();
    if let Some((key, _)) = u.terms().next() {
        one.add_key(key.clone(), Rational::one());
    }
    Ok(one.expand())
}

pub fn identities_suite(corpus: &[CorpusEntry], limits: &Limits) -> Result<Report, VerifyError> {
    let mut r = Report::default();
    let table = gdf::cached_table(limits.order)?;
    let d20 = unique_diagram(table, 2, 0)?;
    let d11 = unique_diagram(table, 1, 1)?;
    let reversed: Vec<((u32, u32), gdf::Gdf, gdf::Gdf)> = (0..=limits.order)
        .flat_map(|k| (0..=limits.order - k).map(move |l| (k, l)))
        .map(|(k, l)| {
            let a = table.a_kl(k, l);
            let rev = a.reverse_arrows();
            ((k, l), a, rev)
        })
        .collect();
    for e in corpus {
        let g = &e.diagram;
        let p = skein::p_table(g, 3)?;
        let terms = [ratio(1, 2) * &p[&(1, 2)], ratio(1, 4) * &p[&(2, 1)], ratio(1, 8) * &p[&(3, 0)]];
        let total: Rational = terms.iter().sum();
        r.push(Check::new("order3-relation", &e.name, 0, &total));
        let h = skein::h_table(g, 4)?;
        r.push(Check::new("homfly-h3_1", &e.name, 0, &h[&(3, 1)]));
        r.push(Check::new("homfly-h1_3", &e.name, 0, &h[&(1, 3)]));
        let lin = rat(48) * &h[&(0, 4)] + rat(12) * &h[&(2, 2)] + rat(3) * &h[&(4, 0)] + rat(4) * &h[&(0, 2)];
        r.push(Check::new("homfly-degree4", &e.name, 0, &lin));
        let (lk1, lk2) = linking_counts(g);
        r.push(Check::new("linking-two-ways", &e.name, lk1, lk2));
        r.push(Check::new("deg2-diagrams", &e.name, pair(&d20, g), pair(&d11, g)));
        for ((k, l), a, rev) in &reversed {
            r.push(Check::new(format!("reversal-p{k}_{l}"), &e.name, pair(a, g), pair(rev, g)));
        }
    }
    Ok(r)
}

/// Alternating sum `Σ_ε (Πε) p_{k,l}(G_ε)` over sign patterns on the arrows `s`.
pub fn finite_difference(
    g: &BasedKnotDiagram,
    s: &[ArrowId],
    order: u32,
) -> Result<skein::CoefficientTable, VerifyError> {
    let mut acc = skein::CoefficientTable::new();
    for mask in 0..1u32 << s.len() {
        let mut h = g.clone();
        let mut prod = 1i64;
        for (i, &id) in s.iter().enumerate() {
            let sign = if mask >> i & 1 == 1 { Sign::Neg } else { Sign::Pos };
            prod *= sign.value() as i64;
            h = h.with_crossing_sign(id, sign).expect("arrow present");
        }
        for (kl, c) in skein::p_table(&h, order)? {
            *acc.entry(kl).or_insert_with(Rational::zero) += c * Rational::from_integer(prod.into());
        }
    }
    Ok(acc)
}

fn subsets(ids: &[ArrowId], size: usize) -> Vec<Vec<ArrowId>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &id) in ids.iter().enumerate() {
        for mut rest in subsets(&ids[i + 1..], size - 1) {
            rest.insert(0, id);
            out.push(rest);
        }
    }
    out
}

pub fn vassiliev_suite(corpus: &[CorpusEntry], limits: &Limits) -> Result<Report, VerifyError> {
    let mut r = Report::default();
    for e in corpus.iter().filter(|e| e.diagram.arrow_count() <= limits.vassiliev_max_arrows) {
        let ids: Vec<ArrowId> = e.diagram.arrow_ids().collect();
        for m in 1..=limits.order + 1 {
            let mut nonzero: BTreeSet<(u32, u32)> = BTreeSet::new();
            let mut tried = 0;
            for s in subsets(&ids, m as usize) {
                tried += 1;
                let diff = finite_difference(&e.diagram, &s, m - 1)?;
                for ((k, l), c) in diff {
                    if !c.is_zero() {
                        nonzero.insert((k, l));
                    }
                }
            }
            let actual = if nonzero.is_empty() {
                format!("0({tried}-subsets)")
            } else {
                nonzero.iter().map(|(k, l)| format!("p{k}_{l}")).collect::<Vec<_>>().join(",")
            };
            r.push(Check::new(format!("vassiliev-order{}", m - 1), &e.name, format!("0({tried}-subsets)"), actual));
        }
    }
    Ok(r)
}

pub fn jones_suite(corpus: &[CorpusEntry]) -> Result<Report, VerifyError> {
    let mut r = Report::default();
    let table = gdf::cached_table(3)?;
    let formulas: Vec<(u32, gdf::Gdf, gdf::Gdf)> =
        (0..=3).map(|k| (k, table.a_jones(JonesModel::Homfly, k), table.a_jones(JonesModel::Kauffman, k))).collect();
    let h2 = gdf::mixed_coefficients(&formulas[2].1)?;
    let dk2 = gdf::mixed_coefficients(&formulas[2].2)?;
    let fmt_list = |v: &[Rational]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    r.push(Check::verdict(
        "a2-formulas-differ",
        "-",
        formulas[2].1 != formulas[2].2,
        fmt_list(&h2),
        fmt_list(&dk2),
    ));
    for e in corpus {
        let g = &e.diagram;
        let jd = skein::jones_from_dk(g)?;
        let jh = skein::jones_from_homfly(g)?;
        r.push(Check::new("jones-dk-vs-homfly", &e.name, &jh, &jd));
        let c = skein::jones_series(&jd, 3)?;
        r.push(Check::new("jones-c0", &e.name, 1, c.coeff(0)));
        for (k, ah, adk) in &formulas {
            let ck = c.coeff(*k);
            r.push(Check::new(format!("jones-c{k}-homfly-gdf"), &e.name, &ck, pair(ah, g)));
            r.push(Check::new(format!("jones-c{k}-dk-gdf"), &e.name, &ck, pair(adk, g)));
        }
    }
    Ok(r)
}
