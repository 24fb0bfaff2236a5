//! Based Gauss and arrow diagrams: parsing, canonical keys, subdiagrams and
//! the knot-level diagram moves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub type ArrowId = u32;

/// Which strand of the crossing an endpoint sits on. Heads are over-passages,
/// feet are under-passages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndpointRole {
    Head,
    Foot,
}

impl EndpointRole {
    pub fn flipped(self) -> Self {
        match self {
            Self::Head => Self::Foot,
            Self::Foot => Self::Head,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Self::Head => 'H',
            Self::Foot => 'F',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Self::Pos => 1,
            Self::Neg => -1,
        }
    }

    pub fn from_value(v: i32) -> Self {
        if v > 0 {
            Self::Pos
        } else {
            Self::Neg
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::Pos => Self::Neg,
            Self::Neg => Self::Pos,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Self::Pos => '+',
            Self::Neg => '-',
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_value(self.value() * rhs.value())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endpoint {
    pub arrow: ArrowId,
    pub role: EndpointRole,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("arrow {0} has two {1:?} endpoints")]
    DuplicateEndpoint(ArrowId, EndpointRole),
    #[error("arrow {0} is given both signs")]
    InconsistentSign(ArrowId),
    #[error("arrow {0} does not occur exactly twice")]
    UnpairedArrow(ArrowId),
    #[error("unknown arrow {0}")]
    UnknownArrow(ArrowId),
}

/// A Gauss diagram on one based circle: endpoints listed from the base point
/// along the orientation, plus a sign per arrow.
///
/// Arrow and Gauss diagrams share this type; realizability is never checked.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BasedKnotDiagram {
    endpoints: Vec<Endpoint>,
    signs: BTreeMap<ArrowId, Sign>,
}

/// Based-diagram identity: arrows renumbered by first occurrence and rendered
/// as `H1+ F2- ...`. Equal keys iff equal based diagrams.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub String);

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl BasedKnotDiagram {
    pub fn unknot() -> Self {
        Self::default()
    }

    /// Builds a diagram, checking every invariant.
    pub fn new(endpoints: Vec<Endpoint>, signs: BTreeMap<ArrowId, Sign>) -> Result<Self, DiagramError> {
        let mut seen: BTreeSet<(ArrowId, EndpointRole)> = BTreeSet::new();
        for e in &endpoints {
            if !seen.insert((e.arrow, e.role)) {
                return Err(DiagramError::DuplicateEndpoint(e.arrow, e.role));
            }
        }
        let ids: BTreeSet<ArrowId> = endpoints.iter().map(|e| e.arrow).collect();
        for &id in &ids {
            if !seen.contains(&(id, EndpointRole::Head)) || !seen.contains(&(id, EndpointRole::Foot)) {
                return Err(DiagramError::UnpairedArrow(id));
            }
            if !signs.contains_key(&id) {
                return Err(DiagramError::UnpairedArrow(id));
            }
        }
        if let Some(&extra) = signs.keys().find(|k| !ids.contains(k)) {
            return Err(DiagramError::UnpairedArrow(extra));
        }
        Ok(Self { endpoints, signs })
    }

    pub fn endpoints(&self) -> &[Endpoint] {
        &self.endpoints
    }

    pub fn signs(&self) -> &BTreeMap<ArrowId, Sign> {
        &self.signs
    }

    pub fn arrow_count(&self) -> usize {
        self.signs.len()
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> + '_ {
        self.signs.keys().copied()
    }

    pub fn sign(&self, id: ArrowId) -> Option<Sign> {
        self.signs.get(&id).copied()
    }

    pub fn writhe(&self) -> i32 {
        self.signs.values().map(|s| s.value()).sum()
    }

    /// Positions `(head, foot)` of an arrow in the endpoint sequence.
    pub fn positions(&self, id: ArrowId) -> Option<(usize, usize)> {
        let mut head = None;
        let mut foot = None;
        for (i, e) in self.endpoints.iter().enumerate() {
            if e.arrow == id {
                match e.role {
                    EndpointRole::Head => head = Some(i),
                    EndpointRole::Foot => foot = Some(i),
                }
            }
        }
        Some((head?, foot?))
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        CanonicalKey(self.render_key(true))
    }

    /// Canonical key with the signs dropped, identifying the underlying diagram.
    pub fn unsigned_key(&self) -> CanonicalKey {
        CanonicalKey(self.render_key(false))
    }

    fn render_key(&self, signed: bool) -> String {
        let mut renumber: BTreeMap<ArrowId, usize> = BTreeMap::new();
        let mut tokens = Vec::with_capacity(self.endpoints.len());
        for e in &self.endpoints {
            let next = renumber.len() + 1;
            let k = *renumber.entry(e.arrow).or_insert(next);
            let mut tok = format!("{}{}", e.role.letter(), k);
            if signed {
                tok.push(self.signs[&e.arrow].symbol());
            }
            tokens.push(tok);
        }
        tokens.join(" ")
    }

    /// Arrows renumbered `1, 2, ...` by first occurrence.
    pub fn renumbered(&self) -> Self {
        let mut renumber: BTreeMap<ArrowId, ArrowId> = BTreeMap::new();
        for e in &self.endpoints {
            let next = renumber.len() as ArrowId + 1;
            renumber.entry(e.arrow).or_insert(next);
        }
        Self {
            endpoints: self
                .endpoints
                .iter()
                .map(|e| Endpoint { arrow: renumber[&e.arrow], role: e.role })
                .collect(),
            signs: self.signs.iter().map(|(id, s)| (renumber[id], *s)).collect(),
        }
    }

    /// Parses a canonical key (`H1+ F1+ ...`) back into a diagram.
    pub fn from_key(key: &str) -> Result<Self, DiagramError> {
        parse_tokens(key, |c| match c {
            'H' => Some(EndpointRole::Head),
            'F' => Some(EndpointRole::Foot),
            _ => None,
        })
    }

    /// The subdiagram on the given arrows, keeping this diagram's base point.
    pub fn restrict(&self, arrows: &BTreeSet<ArrowId>) -> Self {
        Self {
            endpoints: self.endpoints.iter().filter(|e| arrows.contains(&e.arrow)).copied().collect(),
            signs: self.signs.iter().filter(|(id, _)| arrows.contains(id)).map(|(id, s)| (*id, *s)).collect(),
        }
    }

    /// Every subdiagram with at most `max_arrows` arrows, each exactly once,
    /// in lexicographic order of the (sorted) arrow subsets.
    pub fn subdiagrams(&self, max_arrows: usize) -> impl Iterator<Item = BasedKnotDiagram> + '_ {
        let ids: Vec<ArrowId> = self.arrow_ids().collect();
        let mut subsets = Vec::new();
        lex_subsets(&ids, 0, max_arrows, &mut Vec::new(), &mut subsets);
        subsets.into_iter().map(move |s| self.restrict(&s.into_iter().collect()))
    }

    /// Shifts the base point forward past one endpoint.
    pub fn move_base_point(&self) -> Self {
        let mut endpoints = self.endpoints.clone();
        if !endpoints.is_empty() {
            endpoints.rotate_left(1);
        }
        Self { endpoints, signs: self.signs.clone() }
    }

    /// Exchanges head and foot of every arrow; signs are kept.
    pub fn reverse_all_arrows(&self) -> Self {
        Self {
            endpoints: self
                .endpoints
                .iter()
                .map(|e| Endpoint { arrow: e.arrow, role: e.role.flipped() })
                .collect(),
            signs: self.signs.clone(),
        }
    }

    /// Crossing change: negates the sign and exchanges the roles of one arrow.
    pub fn switch_crossing(&self, id: ArrowId) -> Result<Self, DiagramError> {
        let sign = self.sign(id).ok_or(DiagramError::UnknownArrow(id))?;
        let mut out = self.clone();
        out.signs.insert(id, sign.flipped());
        for e in out.endpoints.iter_mut().filter(|e| e.arrow == id) {
            e.role = e.role.flipped();
        }
        Ok(out)
    }

    /// Switches the crossing if needed so that the arrow ends up with `sign`.
    pub fn with_crossing_sign(&self, id: ArrowId, sign: Sign) -> Result<Self, DiagramError> {
        match self.sign(id) {
            None => Err(DiagramError::UnknownArrow(id)),
            Some(s) if s == sign => Ok(self.clone()),
            Some(_) => self.switch_crossing(id),
        }
    }
}

fn lex_subsets(
    ids: &[ArrowId],
    start: usize,
    max: usize,
    current: &mut Vec<ArrowId>,
    out: &mut Vec<Vec<ArrowId>>,
) {
    out.push(current.clone());
    if current.len() == max {
        return;
    }
    for i in start..ids.len() {
        current.push(ids[i]);
        lex_subsets(ids, i + 1, max, current, out);
        current.pop();
    }
}

fn parse_tokens(
    text: &str,
    role_of: impl Fn(char) -> Option<EndpointRole>,
) -> Result<BasedKnotDiagram, DiagramError> {
    let mut endpoints = Vec::new();
    let mut signs: BTreeMap<ArrowId, Sign> = BTreeMap::new();
    let mut counts: BTreeMap<ArrowId, usize> = BTreeMap::new();
    for tok in text.split_whitespace() {
        let malformed = || DiagramError::MalformedToken(tok.to_string());
        let mut chars = tok.chars();
        let role = chars.next().and_then(&role_of).ok_or_else(malformed)?;
        let sign = match tok.chars().last() {
            Some('+') => Sign::Pos,
            Some('-') => Sign::Neg,
            _ => return Err(malformed()),
        };
        let digits = &tok[1..tok.len() - 1];
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let id: ArrowId = digits.parse().map_err(|_| malformed())?;
        if id == 0 {
            return Err(malformed());
        }
        if let Some(prev) = signs.insert(id, sign) {
            if prev != sign {
                return Err(DiagramError::InconsistentSign(id));
            }
        }
        *counts.entry(id).or_default() += 1;
        endpoints.push(Endpoint { arrow: id, role });
    }
    if let Some((&id, _)) = counts.iter().find(|(_, &c)| c > 2) {
        return Err(DiagramError::UnpairedArrow(id));
    }
    BasedKnotDiagram::new(endpoints, signs)
}

impl FromStr for BasedKnotDiagram {
    type Err = DiagramError;

    /// Gauss code: `O<k><±>` (over, head) and `U<k><±>` (under, foot) tokens
    /// read from the base point.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tokens(s, |c| match c {
            'O' => Some(EndpointRole::Head),
            'U' => Some(EndpointRole::Foot),
            _ => None,
        })
    }
}

impl fmt::Display for BasedKnotDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self
            .endpoints
            .iter()
            .map(|e| {
                let letter = match e.role {
                    EndpointRole::Head => 'O',
                    EndpointRole::Foot => 'U',
                };
                format!("{}{}{}", letter, e.arrow, self.signs[&e.arrow].symbol())
            })
            .collect();
        f.write_str(&tokens.join(" "))
    }
}
