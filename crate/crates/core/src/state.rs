//! State sums over labelings `σ: arrows → {φ, 0, ∞}`.
//!
//! A state is evaluated by walking the original circle from the base point
//! along a successor map over endpoint sides. Labeled arrows are rewired at
//! their first passage: `0` is the smoothing that respects the current
//! orientations and `∞` the one that violates them, which reverses the part of
//! the current component not yet passed (or the whole later component). The
//! change number `n(α)` counts those reversals touching the endpoints of `α`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::diagram::{ArrowId, BasedKnotDiagram, EndpointRole, Sign};
use crate::par;
use crate::poly::{GaussianRational, LaurentPoly1, LaurentPoly2, PolyError, Rational, Series1, TruncatedSeries2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateLabel {
    /// φ: the crossing is kept (switched if first met from below).
    Unlabeled,
    /// 0: oriented smoothing.
    Smooth,
    /// ∞: singularization.
    Singular,
}

impl StateLabel {
    pub const ALL: [StateLabel; 3] = [StateLabel::Unlabeled, StateLabel::Smooth, StateLabel::Singular];

    pub fn name(self) -> &'static str {
        match self {
            Self::Unlabeled => "phi",
            Self::Smooth => "0",
            Self::Singular => "inf",
        }
    }
}

impl FromStr for StateLabel {
    type Err = StateError;
    fn from_str(s: &str) -> Result<Self, StateError> {
        match s.trim() {
            "phi" | "φ" | "-" => Ok(Self::Unlabeled),
            "0" => Ok(Self::Smooth),
            "inf" | "∞" => Ok(Self::Singular),
            other => Err(StateError::BadLabel(other.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateError {
    #[error("unknown state label `{0}` (expected phi, 0 or inf)")]
    BadLabel(String),
    #[error("state lists {given} labels for {expected} arrows")]
    LabelCount { given: usize, expected: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Total labeling of a diagram's arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateAssignment {
    labels: BTreeMap<ArrowId, StateLabel>,
}

impl StateAssignment {
    pub fn new(labels: BTreeMap<ArrowId, StateLabel>) -> Self {
        Self { labels }
    }

    pub fn all_unlabeled(g: &BasedKnotDiagram) -> Self {
        Self { labels: g.arrow_ids().map(|id| (id, StateLabel::Unlabeled)).collect() }
    }

    /// Parses `phi,0,inf` style lists, one label per arrow in increasing id order.
    pub fn parse_for(g: &BasedKnotDiagram, spec: &str) -> Result<Self, StateError> {
        let labels: Vec<StateLabel> = if spec.trim().is_empty() {
            Vec::new()
        } else {
            spec.split(',').map(str::parse).collect::<Result<_, _>>()?
        };
        if labels.len() != g.arrow_count() {
            return Err(StateError::LabelCount { given: labels.len(), expected: g.arrow_count() });
        }
        Ok(Self { labels: g.arrow_ids().zip(labels).collect() })
    }

    /// The `index`-th state in lexicographic order of `(arrow id, label)`
    /// with `φ < 0 < ∞`.
    pub fn nth(ids: &[ArrowId], mut index: usize, labels: &[StateLabel]) -> Self {
        let base = labels.len();
        let mut out = BTreeMap::new();
        for &id in ids.iter().rev() {
            out.insert(id, labels[index % base]);
            index /= base;
        }
        Self { labels: out }
    }

    pub fn label(&self, id: ArrowId) -> StateLabel {
        self.labels.get(&id).copied().unwrap_or(StateLabel::Unlabeled)
    }

    pub fn labels(&self) -> &BTreeMap<ArrowId, StateLabel> {
        &self.labels
    }
}

/// Per-arrow record of a completed (or aborted) process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowTrace {
    pub id: ArrowId,
    pub sign: Sign,
    pub label: StateLabel,
    pub first_role: Option<EndpointRole>,
    pub change: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessTrace {
    pub arrows: Vec<ArrowTrace>,
    pub components: u32,
    /// False when a labeled arrow is first met at its head.
    pub valid: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    In(usize),
    Out(usize),
}

impl Side {
    fn index(self) -> usize {
        match self {
            Side::In(p) => 2 * p,
            Side::Out(p) => 2 * p + 1,
        }
    }

    fn from_index(i: usize) -> Self {
        if i % 2 == 0 {
            Side::In(i / 2)
        } else {
            Side::Out(i / 2)
        }
    }

    fn position(self) -> usize {
        match self {
            Side::In(p) | Side::Out(p) => p,
        }
    }
}

/// Arc `k` runs from endpoint `k-1` to endpoint `k`; the base point is on arc 0.
struct Route {
    len: usize,
    glue: Vec<usize>,
}

impl Route {
    fn new(len: usize) -> Self {
        let glue = (0..2 * len).map(|i| i ^ 1).collect();
        Self { len, glue }
    }

    fn leave(&self, arrived: Side) -> Side {
        Side::from_index(self.glue[arrived.index()])
    }

    /// Travels the arc leaving from `side`: returns the arc, whether it was
    /// traversed along the original orientation, and the side arrived at.
    fn travel(&self, side: Side) -> (usize, bool, Side) {
        match side {
            Side::Out(p) => {
                let q = (p + 1) % self.len;
                (q, true, Side::In(q))
            }
            Side::In(p) => {
                let q = (p + self.len - 1) % self.len;
                (p, false, Side::Out(q))
            }
        }
    }

    fn connect(&mut self, x: Side, y: Side) {
        self.glue[x.index()] = y.index();
        self.glue[y.index()] = x.index();
    }

    /// Walks from `side` until arriving at a side for which `stop` holds,
    /// collecting the arcs and arrival positions strictly in between.
    fn walk(&self, from: Side, stop: impl Fn(Side) -> bool) -> (Vec<usize>, Vec<usize>, Side) {
        let mut arcs = Vec::new();
        let mut positions = Vec::new();
        let mut leave = self.leave(from);
        loop {
            let (arc, _, arrived) = self.travel(leave);
            arcs.push(arc);
            if stop(arrived) {
                return (arcs, positions, arrived);
            }
            positions.push(arrived.position());
            leave = self.leave(arrived);
        }
    }
}

struct ArrowState {
    id: ArrowId,
    sign: Sign,
    label: StateLabel,
    first_role: Option<EndpointRole>,
    change: u32,
    resolved: bool,
}

/// Simulates the traversal of `g` under the labeling `sigma`.
pub fn run_process(g: &BasedKnotDiagram, sigma: &StateAssignment) -> ProcessTrace {
    let endpoints = g.endpoints();
    let len = endpoints.len();
    let index_of: BTreeMap<ArrowId, usize> = g.arrow_ids().enumerate().map(|(i, id)| (id, i)).collect();
    let mut arrows: Vec<ArrowState> = g
        .signs()
        .iter()
        .map(|(&id, &sign)| ArrowState {
            id,
            sign,
            label: sigma.label(id),
            first_role: None,
            change: 0,
            resolved: false,
        })
        .collect();
    let finish = |arrows: Vec<ArrowState>, components: u32, valid: bool| ProcessTrace {
        arrows: arrows
            .into_iter()
            .map(|a| ArrowTrace { id: a.id, sign: a.sign, label: a.label, first_role: a.first_role, change: a.change })
            .collect(),
        components,
        valid,
    };
    if len == 0 {
        return finish(arrows, 1, true);
    }

    let arrow_at: Vec<usize> = endpoints.iter().map(|e| index_of[&e.arrow]).collect();
    let mut partner = vec![0; len];
    for p in 0..len {
        for q in 0..len {
            if p != q && arrow_at[p] == arrow_at[q] {
                partner[p] = q;
            }
        }
    }

    let mut route = Route::new(len);
    let mut arc_reversed = vec![false; len];
    let mut arc_visited = vec![false; len];
    let mut components = 0;

    while let Some(start) = (0..len).find(|&k| !arc_visited[k]) {
        components += 1;
        arc_visited[start] = true;
        let mut arrived = if arc_reversed[start] { Side::Out((start + len - 1) % len) } else { Side::In(start) };
        loop {
            let p = arrived.position();
            let ai = arrow_at[p];
            if arrows[ai].first_role.is_none() {
                let role = endpoints[p].role;
                arrows[ai].first_role = Some(role);
                if arrows[ai].label != StateLabel::Unlabeled {
                    if role == EndpointRole::Head {
                        return finish(arrows, components, false);
                    }
                    let h = partner[p];
                    let odd = arrows[ai].change % 2 == 1;
                    if arrows[ai].label == StateLabel::Singular {
                        // Piece to reverse: the rest of this component up to the head,
                        // or, if the head lies elsewhere, that whole component.
                        let (mut arcs, mut positions, end) =
                            route.walk(arrived, |s| s.position() == h || s.position() == p);
                        if end.position() == p {
                            let (a, ps, _) = route.walk(Side::In(h), |s| s.position() == h);
                            arcs = a;
                            positions = ps;
                        }
                        let mut hits: BTreeMap<usize, u32> = BTreeMap::new();
                        for q in positions {
                            let bi = arrow_at[q];
                            if bi != ai && !arrows[bi].resolved {
                                *hits.entry(bi).or_default() += 1;
                            }
                        }
                        for (bi, count) in hits {
                            let b = &mut arrows[bi];
                            let frozen = b.label != StateLabel::Unlabeled && b.first_role.is_some();
                            if !frozen {
                                b.change += count;
                            }
                        }
                        for arc in arcs {
                            arc_reversed[arc] = !arc_reversed[arc];
                        }
                    }
                    let oriented = (arrows[ai].label == StateLabel::Smooth) != odd;
                    if oriented {
                        route.connect(Side::In(p), Side::Out(h));
                        route.connect(Side::In(h), Side::Out(p));
                    } else {
                        route.connect(Side::In(p), Side::In(h));
                        route.connect(Side::Out(p), Side::Out(h));
                    }
                    arrows[ai].resolved = true;
                }
            }
            let (arc, along, next) = route.travel(route.leave(arrived));
            if arc_visited[arc] {
                debug_assert_eq!(arc, start, "component closed on a foreign arc");
                break;
            }
            debug_assert_eq!(along, !arc_reversed[arc], "traversal against current orientation");
            arc_visited[arc] = true;
            arrived = next;
        }
    }
    finish(arrows, components, true)
}

fn parity_sign(n: u32) -> i32 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Kauffman state-model weight of one arrow at its first passage.
pub fn arrow_weight_kauffman(sign: Sign, label: StateLabel, role: EndpointRole, n: u32) -> LaurentPoly2 {
    let eps = sign.value();
    let pn = parity_sign(n);
    match (label, role) {
        (StateLabel::Unlabeled, EndpointRole::Head) => LaurentPoly2::a_pow(eps * (pn - 1)),
        (StateLabel::Unlabeled, EndpointRole::Foot) => LaurentPoly2::a_pow(eps * (-pn - 1)),
        (StateLabel::Smooth, EndpointRole::Foot) => LaurentPoly2::monomial((pn * eps) as i64, -eps, 1),
        (StateLabel::Singular, EndpointRole::Foot) => LaurentPoly2::monomial((-pn * eps) as i64, -eps, 1),
        (_, EndpointRole::Head) => LaurentPoly2::zero(),
    }
}

/// Arrow-diagram weight: the Kauffman weight with 1 subtracted from unlabeled entries.
pub fn arrow_weight_gdf(sign: Sign, label: StateLabel, role: EndpointRole, n: u32) -> LaurentPoly2 {
    let w = arrow_weight_kauffman(sign, label, role, n);
    if label == StateLabel::Unlabeled {
        w - LaurentPoly2::constant(1)
    } else {
        w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomflyTable {
    /// Weights of the HOMFLY-PT state model itself.
    StateModel,
    /// Arrow-diagram weights (unlabeled entries minus 1).
    ArrowDiagram,
}

/// HOMFLY-PT weight of one arrow. The `∞` label does not occur in this model
/// and gets weight zero.
pub fn arrow_weight_homfly(sign: Sign, label: StateLabel, role: EndpointRole, table: HomflyTable) -> LaurentPoly2 {
    let eps = sign.value();
    let shift = match table {
        HomflyTable::StateModel => LaurentPoly2::zero(),
        HomflyTable::ArrowDiagram => LaurentPoly2::constant(1),
    };
    match (label, role) {
        (StateLabel::Unlabeled, EndpointRole::Head) => LaurentPoly2::constant(1) - shift,
        (StateLabel::Unlabeled, EndpointRole::Foot) => LaurentPoly2::a_pow(-2 * eps) - shift,
        (StateLabel::Smooth, EndpointRole::Foot) => LaurentPoly2::monomial(eps as i64, -eps, 1),
        _ => LaurentPoly2::zero(),
    }
}

fn weight_product(trace: &ProcessTrace, arrow_weight: impl Fn(&ArrowTrace) -> LaurentPoly2) -> LaurentPoly2 {
    if !trace.valid {
        return LaurentPoly2::zero();
    }
    let mut acc = LaurentPoly2::constant(1);
    for a in &trace.arrows {
        let w = arrow_weight(a);
        if w.is_zero() {
            return w;
        }
        acc = &acc * &w;
    }
    acc
}

fn role_of(a: &ArrowTrace) -> EndpointRole {
    a.first_role.expect("valid traces meet every arrow")
}

/// `w(G, σ)` of the Kauffman state model (without the circle factor).
pub fn state_weight_kauffman(trace: &ProcessTrace) -> LaurentPoly2 {
    weight_product(trace, |a| arrow_weight_kauffman(a.sign, a.label, role_of(a), a.change))
}

pub fn state_weight_gdf(trace: &ProcessTrace) -> LaurentPoly2 {
    weight_product(trace, |a| arrow_weight_gdf(a.sign, a.label, role_of(a), a.change))
}

pub fn state_weight_homfly(trace: &ProcessTrace, table: HomflyTable) -> LaurentPoly2 {
    weight_product(trace, |a| arrow_weight_homfly(a.sign, a.label, role_of(a), table))
}

/// Until the first labeled arrow is reached the route is the original circle,
/// so a state whose earliest labeled endpoint is a head has weight zero.
pub fn starts_at_labeled_head(g: &BasedKnotDiagram, sigma: &StateAssignment) -> bool {
    g.endpoints()
        .iter()
        .find(|e| sigma.label(e.arrow) != StateLabel::Unlabeled)
        .is_some_and(|e| e.role == EndpointRole::Head)
}

fn state_sum(
    g: &BasedKnotDiagram,
    labels: &[StateLabel],
    circle: &LaurentPoly2,
    weight: impl Fn(&ProcessTrace) -> LaurentPoly2 + Sync + Send,
) -> LaurentPoly2 {
    state_sum_with(g, labels, circle, true, weight)
}

fn state_sum_with(
    g: &BasedKnotDiagram,
    labels: &[StateLabel],
    circle: &LaurentPoly2,
    prune: bool,
    weight: impl Fn(&ProcessTrace) -> LaurentPoly2 + Sync + Send,
) -> LaurentPoly2 {
    let ids: Vec<ArrowId> = g.arrow_ids().collect();
    let count = labels.len().pow(ids.len() as u32);
    let indices: Vec<usize> = (0..count).collect();
    let eval = |&i: &usize| {
        let sigma = StateAssignment::nth(&ids, i, labels);
        if prune && starts_at_labeled_head(g, &sigma) {
            return LaurentPoly2::zero();
        }
        let trace = run_process(g, &sigma);
        let w = weight(&trace);
        if w.is_zero() {
            return w;
        }
        &w * &circle.pow(trace.components - 1)
    };
    if ids.len() >= 5 {
        par::map_sum(&indices, eval)
    } else {
        indices.iter().map(eval).sum()
    }
}

/// `DK` as the sum over all `3^n` states of `w(G, σ) d^(c(σ)-1)`.
pub fn dk_state_sum(g: &BasedKnotDiagram) -> LaurentPoly2 {
    state_sum(g, &StateLabel::ALL, &LaurentPoly2::circle_dubrovnik(), state_weight_kauffman)
}

/// [`dk_state_sum`] without skipping any state.
pub fn dk_state_sum_unpruned(g: &BasedKnotDiagram) -> LaurentPoly2 {
    state_sum_with(g, &StateLabel::ALL, &LaurentPoly2::circle_dubrovnik(), false, state_weight_kauffman)
}

/// HOMFLY-PT through its state model: labels `{φ, 0}`, circle factor `δ`.
pub fn homfly_state_sum(g: &BasedKnotDiagram) -> LaurentPoly2 {
    let labels = [StateLabel::Unlabeled, StateLabel::Smooth];
    state_sum(g, &labels, &LaurentPoly2::circle_homfly(), |t| state_weight_homfly(t, HomflyTable::StateModel))
}

/// `W_A(a, z)` for an arrow diagram.
pub fn w_arrow(a: &BasedKnotDiagram) -> LaurentPoly2 {
    state_sum(a, &StateLabel::ALL, &LaurentPoly2::circle_dubrovnik(), state_weight_gdf)
}

/// `W^H_A(a, z)` for an arrow diagram.
pub fn w_arrow_homfly(a: &BasedKnotDiagram) -> LaurentPoly2 {
    let labels = [StateLabel::Unlabeled, StateLabel::Smooth];
    state_sum(a, &labels, &LaurentPoly2::circle_homfly(), |t| state_weight_homfly(t, HomflyTable::ArrowDiagram))
}

/// Exponential expansion `W_A(e^h, z)` up to total degree `cutoff`.
pub fn w_series(a: &BasedKnotDiagram, cutoff: u32) -> Result<TruncatedSeries2, StateError> {
    Ok(w_arrow(a).substitute_exponential(cutoff)?)
}

/// `w_{k,l}(A)`: coefficient of `h^k z^l` in `W_A(e^h, z)`.
pub fn w_kl(a: &BasedKnotDiagram, k: u32, l: u32) -> Result<Rational, StateError> {
    Ok(w_series(a, k + l)?.coeff(k, l))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JonesModel {
    Kauffman,
    Homfly,
}

impl JonesModel {
    pub fn name(self) -> &'static str {
        match self {
            Self::Kauffman => "kauffman",
            Self::Homfly => "homfly",
        }
    }
}

impl FromStr for JonesModel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "kauffman" | "dk" => Ok(Self::Kauffman),
            "homfly" | "h" => Ok(Self::Homfly),
            other => Err(format!("unknown model `{other}`")),
        }
    }
}

/// Series at `s = i e^h` of a Kauffman-side or HOMFLY-side weight, by the real
/// simplification: Kauffman `a → e^(-3h), z → e^h - e^(-h)`; HOMFLY
/// `a → e^(-4h), z → e^(-2h) - e^(2h)`.
pub fn jones_substitution(w: &LaurentPoly2, model: JonesModel, cutoff: u32) -> Result<Series1, PolyError> {
    let exp = |r: i64| Series1::exp(&crate::poly::rat(r), cutoff);
    match model {
        JonesModel::Kauffman => w.substitute_h(-3, &exp(1).sub(&exp(-1))),
        JonesModel::Homfly => w.substitute_h(-4, &exp(-2).sub(&exp(2))),
    }
}

/// Series of `W_A` (Kauffman) or `W^H_A` (HOMFLY) at `s = i e^h`.
pub fn jones_weight_series(a: &BasedKnotDiagram, model: JonesModel, cutoff: u32) -> Result<Series1, StateError> {
    let w = match model {
        JonesModel::Kauffman => w_arrow(a),
        JonesModel::Homfly => w_arrow_homfly(a),
    };
    Ok(jones_substitution(&w, model, cutoff)?)
}

/// Same series computed through the complex substitution in `s`, then `s = i e^h`.
pub fn jones_weight_series_symbolic(
    a: &BasedKnotDiagram,
    model: JonesModel,
    cutoff: u32,
) -> Result<Series1, StateError> {
    let s_poly = match model {
        JonesModel::Kauffman => {
            let minus_i = -GaussianRational::i();
            let a_image = LaurentPoly1::monomial(minus_i.clone(), -3);
            let z_image = LaurentPoly1::monomial(minus_i.clone(), -1) + LaurentPoly1::monomial(minus_i, 1);
            w_arrow(a).substitute_monomial(&a_image, &z_image)?
        }
        JonesModel::Homfly => {
            let a_image = LaurentPoly1::monomial(1, -4);
            let z_image = LaurentPoly1::monomial(1, 2) - LaurentPoly1::monomial(1, -2);
            w_arrow_homfly(a).substitute_monomial(&a_image, &z_image)?
        }
    };
    Ok(s_poly.substitute_i_exp(cutoff)?)
}

/// `w_k^H(A)` or `w_k^DK(A)`.
pub fn w_k_jones(a: &BasedKnotDiagram, model: JonesModel, k: u32) -> Result<Rational, StateError> {
    Ok(jones_weight_series(a, model, k)?.coeff(k))
}

/// Stable debug rendering of a process and its Kauffman weight.
pub struct TraceReport<'a>(pub &'a ProcessTrace);

impl fmt::Display for TraceReport<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.0;
        for a in &t.arrows {
            let (role, w) = match a.first_role {
                Some(r) => (r.letter().to_string(), arrow_weight_kauffman(a.sign, a.label, r, a.change).to_string()),
                None => ("-".to_string(), "-".to_string()),
            };
            writeln!(
                f,
                "arrow={} sign={} label={} first={} n={} w={}",
                a.id,
                a.sign.symbol(),
                a.label.name(),
                role,
                a.change,
                w.replace(' ', "")
            )?;
        }
        write!(f, "c={} valid={} weight={}", t.components, t.valid, state_weight_kauffman(t))
    }
}
