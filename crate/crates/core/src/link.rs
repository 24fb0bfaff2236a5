//! Multi-circle based diagrams met inside the skein recursion, with the three
//! crossing surgeries: switch, oriented smoothing and singularization.

use std::collections::{BTreeMap, BTreeSet};

use crate::diagram::{ArrowId, BasedKnotDiagram, DiagramError, Endpoint, EndpointRole, Sign};

/// One circle. `arc_tags[k]` is the original-order tag of the arc just before
/// `endpoints[k]`; the base point sits on arc 0. A circle without endpoints
/// still carries one arc.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circle {
    endpoints: Vec<Endpoint>,
    arc_tags: Vec<u32>,
}

impl Circle {
    pub fn endpoints(&self) -> &[Endpoint] {
        &self.endpoints
    }

    pub fn arc_tags(&self) -> &[u32] {
        &self.arc_tags
    }

    pub fn base_tag(&self) -> u32 {
        self.arc_tags[0]
    }

    /// Moves the base point onto the arc with the smallest tag.
    fn rebase_to_smallest_arc(mut self) -> Self {
        let k = (0..self.arc_tags.len()).min_by_key(|&k| self.arc_tags[k]).unwrap_or(0);
        if !self.endpoints.is_empty() {
            self.endpoints.rotate_left(k);
            self.arc_tags.rotate_left(k);
        }
        self
    }

    /// Open strand from the base point around to the base point.
    fn cut_at_base(&self) -> Strand {
        let mut arcs = self.arc_tags.clone();
        arcs.push(self.arc_tags[0]);
        Strand { arcs, eps: self.endpoints.clone() }
    }

    /// Open strand from just after endpoint `j` around to just before it.
    fn cut_at_endpoint(&self, j: usize) -> Strand {
        let n = self.endpoints.len();
        let arcs = (1..=n).map(|s| self.arc_tags[(j + s) % n]).collect();
        let eps = (1..n).map(|s| self.endpoints[(j + s) % n]).collect();
        Strand { arcs, eps }
    }
}

/// Open piece of a circle: `arcs.len() == eps.len() + 1`.
#[derive(Clone, Debug)]
struct Strand {
    arcs: Vec<u32>,
    eps: Vec<Endpoint>,
}

impl Strand {
    /// Splits around endpoint `k`, dropping it.
    fn split_at(self, k: usize) -> (Strand, Strand) {
        let left = Strand { arcs: self.arcs[..=k].to_vec(), eps: self.eps[..k].to_vec() };
        let right = Strand { arcs: self.arcs[k + 1..].to_vec(), eps: self.eps[k + 1..].to_vec() };
        (left, right)
    }

    fn concat(mut self, other: Strand) -> Strand {
        let joint = self.arcs.pop().expect("strand has an arc");
        let mut rest = other.arcs.into_iter();
        let first = rest.next().expect("strand has an arc");
        self.arcs.push(joint.min(first));
        self.arcs.extend(rest);
        self.eps.extend(other.eps);
        self
    }

    fn reversed(mut self) -> Strand {
        self.arcs.reverse();
        self.eps.reverse();
        self
    }

    fn close(mut self) -> Circle {
        let last = self.arcs.pop().expect("strand has an arc");
        if self.arcs.is_empty() {
            return Circle { endpoints: Vec::new(), arc_tags: vec![last] };
        }
        self.arcs[0] = self.arcs[0].min(last);
        if self.eps.is_empty() {
            self.arcs.truncate(1);
        }
        Circle { endpoints: self.eps, arc_tags: self.arcs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndpointAddr {
    pub component: usize,
    pub position: usize,
}

/// A based diagram on several circles. Circles are traversed in order, each
/// from its own base point; `signs` are the current crossing signs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinkStateDiagram {
    components: Vec<Circle>,
    signs: BTreeMap<ArrowId, Sign>,
}

impl From<&BasedKnotDiagram> for LinkStateDiagram {
    fn from(g: &BasedKnotDiagram) -> Self {
        let n = g.endpoints().len();
        let arc_tags = if n == 0 { vec![0] } else { (0..n as u32).collect() };
        Self {
            components: vec![Circle { endpoints: g.endpoints().to_vec(), arc_tags }],
            signs: g.signs().clone(),
        }
    }
}

impl LinkStateDiagram {
    pub fn components(&self) -> &[Circle] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn signs(&self) -> &BTreeMap<ArrowId, Sign> {
        &self.signs
    }

    pub fn sign(&self, id: ArrowId) -> Option<Sign> {
        self.signs.get(&id).copied()
    }

    pub fn arrow_count(&self) -> usize {
        self.signs.len()
    }

    /// Sum of current crossing signs, inter-component crossings included.
    pub fn writhe(&self) -> i32 {
        self.signs.values().map(|s| s.value()).sum()
    }

    /// Addresses of an arrow's endpoints in traversal order (first passage first).
    pub fn passages(&self, id: ArrowId) -> Option<(EndpointAddr, EndpointAddr)> {
        let mut found = Vec::with_capacity(2);
        for (c, circle) in self.components.iter().enumerate() {
            for (p, e) in circle.endpoints.iter().enumerate() {
                if e.arrow == id {
                    found.push(EndpointAddr { component: c, position: p });
                }
            }
        }
        match found[..] {
            [a, b] => Some((a, b)),
            _ => None,
        }
    }

    pub fn endpoint(&self, at: EndpointAddr) -> Endpoint {
        self.components[at.component].endpoints[at.position]
    }

    /// First crossing that the traversal meets on its under strand, if any.
    pub fn first_bottom_passage(&self) -> Option<ArrowId> {
        let mut met = BTreeSet::new();
        for circle in &self.components {
            for e in &circle.endpoints {
                if met.insert(e.arrow) && e.role == EndpointRole::Foot {
                    return Some(e.arrow);
                }
            }
        }
        None
    }

    /// Every crossing is met first on its over strand.
    pub fn is_descending(&self) -> bool {
        self.first_bottom_passage().is_none()
    }

    pub fn switch_crossing(&self, id: ArrowId) -> Result<Self, DiagramError> {
        let sign = self.sign(id).ok_or(DiagramError::UnknownArrow(id))?;
        let mut out = self.clone();
        out.signs.insert(id, sign.flipped());
        for circle in &mut out.components {
            for e in circle.endpoints.iter_mut().filter(|e| e.arrow == id) {
                e.role = e.role.flipped();
            }
        }
        Ok(out)
    }

    /// Orientation-respecting reconnection at `id`. A self-crossing splits its
    /// circle (the split-off circle is based on its smallest arc); a crossing of
    /// two circles merges them, dropping the later circle's base point.
    pub fn smooth_oriented(&self, id: ArrowId) -> Result<Self, DiagramError> {
        self.resolve(id, false)
    }

    /// Orientation-violating reconnection at `id`. The piece not yet passed by
    /// the traversal (the arc between the two passages, or the whole later
    /// circle) is reversed and the crossings it shares with the rest change sign.
    pub fn singularize(&self, id: ArrowId) -> Result<Self, DiagramError> {
        self.resolve(id, true)
    }

    fn resolve(&self, id: ArrowId, singular: bool) -> Result<Self, DiagramError> {
        let (first, second) = self.passages(id).ok_or(DiagramError::UnknownArrow(id))?;
        let mut signs = self.signs.clone();
        signs.remove(&id);
        let mut components = self.components.clone();

        let reversed: Vec<Endpoint>;
        if first.component == second.component {
            let c = first.component;
            let (a0, rest) = components[c].cut_at_base().split_at(first.position);
            let (b, tail) = rest.split_at(second.position - first.position - 1);
            reversed = b.eps.clone();
            if singular {
                components[c] = a0.concat(b.reversed()).concat(tail).close();
            } else {
                components[c] = a0.concat(tail).close();
                components.push(b.close().rebase_to_smallest_arc());
            }
        } else {
            let (ca, cb) = (first.component, second.component);
            let (a0, a1) = components[ca].cut_at_base().split_at(first.position);
            let b = components[cb].cut_at_endpoint(second.position);
            reversed = b.eps.clone();
            let b = if singular { b.reversed() } else { b };
            components[ca] = a0.concat(b).concat(a1).close();
            components.remove(cb);
        }

        if singular {
            let mut hits: BTreeMap<ArrowId, u32> = BTreeMap::new();
            for e in &reversed {
                *hits.entry(e.arrow).or_default() += 1;
            }
            for (arrow, n) in hits {
                if n == 1 {
                    let s = signs.get_mut(&arrow).expect("arrow present");
                    *s = s.flipped();
                }
            }
        }

        let rest = &mut components[1..];
        rest.sort_by_key(Circle::base_tag);
        Ok(Self { components, signs })
    }

    /// Checks the structural invariants; used by tests after every surgery.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut seen: BTreeSet<(ArrowId, EndpointRole)> = BTreeSet::new();
        let mut tags = Vec::new();
        for circle in &self.components {
            if circle.arc_tags.len() != circle.endpoints.len().max(1) {
                return Err("arc count does not match endpoint count".into());
            }
            tags.extend_from_slice(&circle.arc_tags);
            for e in &circle.endpoints {
                if !seen.insert((e.arrow, e.role)) {
                    return Err(format!("duplicate endpoint on arrow {}", e.arrow));
                }
            }
        }
        for id in self.signs.keys() {
            if !seen.contains(&(*id, EndpointRole::Head)) || !seen.contains(&(*id, EndpointRole::Foot)) {
                return Err(format!("arrow {id} lacks an endpoint"));
            }
        }
        if seen.len() != 2 * self.signs.len() {
            return Err("endpoint without a sign".into());
        }
        let distinct: BTreeSet<u32> = tags.iter().copied().collect();
        if distinct.len() != tags.len() {
            return Err("arc tags repeat".into());
        }
        Ok(())
    }
}
