use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::search::{enumerate_embeddings, subgraph_iso_bruteforce, Embedding, SearchBudget};
use super::{DistinguishError, Graph};
use crate::functor_core::PolyFunctor;

/// A coordinate of the host functor: the `position`-th neighbor of `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub vertex: usize,
    pub position: usize,
    pub neighbor: usize,
}

/// The host graph read as `U(X) = Π_v X^{deg(v)}`: one factor per vertex and
/// one slot per (vertex, neighbor) pair. Neighbors are taken in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostEncoding {
    host: Graph,
    arities: Vec<usize>,
    slots: Vec<Slot>,
    /// `offsets[v]` is the index of `v`'s first slot.
    offsets: Vec<usize>,
}

pub fn encode_host(host: &Graph) -> HostEncoding {
    let mut slots = Vec::with_capacity(2 * host.edge_count());
    let mut offsets = Vec::with_capacity(host.vertex_count());
    for v in 0..host.vertex_count() {
        offsets.push(slots.len());
        slots.extend(
            host.neighbors(v)
                .iter()
                .enumerate()
                .map(|(position, &neighbor)| Slot {
                    vertex: v,
                    position,
                    neighbor,
                }),
        );
    }
    HostEncoding {
        host: host.clone(),
        arities: (0..host.vertex_count()).map(|v| host.degree(v)).collect(),
        slots,
        offsets,
    }
}

impl HostEncoding {
    pub fn host(&self) -> &Graph {
        &self.host
    }

    /// Factor arities, one per vertex.
    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    /// Index of the slot of `vertex` that points at `neighbor`.
    pub fn slot_index(&self, vertex: usize, neighbor: usize) -> Option<usize> {
        let position = self.host.neighbors(vertex).binary_search(&neighbor).ok()?;
        Some(self.offsets[vertex] + position)
    }

    /// The host as a polynomial functor expression.
    pub fn functor(&self) -> PolyFunctor {
        if self.arities.is_empty() {
            return PolyFunctor::Const(1);
        }
        PolyFunctor::Prod(
            self.arities
                .iter()
                .map(|&d| PolyFunctor::Pow(d as u32))
                .collect(),
        )
    }

    /// The two slots realizing host edge `{a, b}`, if it is an edge.
    fn edge_slots(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (s, t) = (self.slot_index(a, b)?, self.slot_index(b, a)?);
        Some((s.min(t), s.max(t)))
    }

    /// The host edge whose two slots are exactly `s` and `t`.
    fn edge_of_slot_pair(&self, s: usize, t: usize) -> Option<(usize, usize)> {
        let (x, y) = (self.slots.get(s)?, self.slots.get(t)?);
        (x.neighbor == y.vertex && y.neighbor == x.vertex).then_some((x.vertex, y.vertex))
    }
}

/// A partition of slot indices `0..len`. Classes are sorted internally and
/// ordered by their smallest element, so equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SlotPartitionJson", into = "SlotPartitionJson")]
pub struct SlotPartition {
    len: usize,
    classes: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct SlotPartitionJson {
    slots: usize,
    classes: Vec<Vec<usize>>,
}

impl From<SlotPartition> for SlotPartitionJson {
    fn from(p: SlotPartition) -> Self {
        SlotPartitionJson {
            slots: p.len,
            classes: p.classes,
        }
    }
}

impl TryFrom<SlotPartitionJson> for SlotPartition {
    type Error = DistinguishError;

    fn try_from(json: SlotPartitionJson) -> Result<Self, Self::Error> {
        SlotPartition::new(json.slots, json.classes)
    }
}

impl SlotPartition {
    /// Checks that `classes` cover `0..len` exactly once, with no empty class.
    pub fn new(len: usize, mut classes: Vec<Vec<usize>>) -> Result<Self, DistinguishError> {
        let mut seen = vec![false; len];
        for class in &mut classes {
            if class.is_empty() {
                return Err(DistinguishError::InvalidQuotient("empty class".into()));
            }
            class.sort_unstable();
            for &s in class.iter() {
                match seen.get_mut(s) {
                    Some(flag) if !*flag => *flag = true,
                    Some(_) => {
                        return Err(DistinguishError::InvalidQuotient(format!(
                            "slot {s} in two classes"
                        )))
                    }
                    None => {
                        return Err(DistinguishError::InvalidQuotient(format!(
                            "slot {s} out of range"
                        )))
                    }
                }
            }
        }
        if let Some(missing) = seen.iter().position(|&f| !f) {
            return Err(DistinguishError::InvalidQuotient(format!(
                "slot {missing} not covered"
            )));
        }
        classes.sort_unstable_by_key(|c| c[0]);
        Ok(SlotPartition { len, classes })
    }

    /// Merge the given disjoint pairs; every other slot stays a singleton.
    pub fn from_pairs(len: usize, pairs: &[(usize, usize)]) -> Result<Self, DistinguishError> {
        let mut paired = vec![false; len];
        let mut classes = Vec::with_capacity(len);
        for &(s, t) in pairs {
            classes.push(vec![s, t]);
            for x in [s, t] {
                if let Some(flag) = paired.get_mut(x) {
                    *flag = true;
                }
            }
        }
        classes.extend((0..len).filter(|&s| !paired[s]).map(|s| vec![s]));
        SlotPartition::new(len, classes)
    }

    pub fn slot_count(&self) -> usize {
        self.len
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// The two-element classes, as `(smaller, larger)` pairs.
    pub fn doubletons(&self) -> Vec<(usize, usize)> {
        self.classes
            .iter()
            .filter(|c| c.len() == 2)
            .map(|c| (c[0], c[1]))
            .collect()
    }

    /// `profile[k]` = number of classes of size `k`.
    pub fn size_profile(&self) -> Vec<usize> {
        let largest = self.classes.iter().map(Vec::len).max().unwrap_or(0);
        let mut profile = vec![0; largest + 1];
        for c in &self.classes {
            profile[c.len()] += 1;
        }
        profile
    }
}

/// How a quotient was produced. Never shown to adversaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Embedding(Embedding),
    Decoy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternQuotient {
    pub pattern: Graph,
    pub slot_partition: SlotPartition,
    pub provenance: Provenance,
}

/// Quotient of the host encoding induced by `pattern`.
///
/// When `pattern` embeds, one embedding is drawn uniformly and for each pattern
/// edge the two host slots realizing it are merged. Otherwise a decoy merges
/// random disjoint slot pairs, as many as the pattern has edges (capped at half
/// the slot count), so that both cases share a class-size profile.
pub fn build_pattern_quotient<R: Rng + ?Sized>(
    pattern: &Graph,
    host: &Graph,
    rng: &mut R,
    budget: &SearchBudget,
) -> Result<PatternQuotient, DistinguishError> {
    let encoding = encode_host(host);
    let embeddings = enumerate_embeddings(pattern, host, budget)?;
    let (pairs, provenance) = match embeddings.choose(rng) {
        Some(pi) => {
            let pairs: Vec<(usize, usize)> = pattern
                .edges()
                .map(|(u, w)| {
                    encoding
                        .edge_slots(pi[u], pi[w])
                        .expect("embeddings map pattern edges onto host edges")
                })
                .collect();
            (pairs, Provenance::Embedding(pi.clone()))
        }
        None => {
            let merges = pattern.edge_count().min(encoding.slot_count() / 2);
            let mut order: Vec<usize> = (0..encoding.slot_count()).collect();
            let (picked, _) = order.partial_shuffle(rng, 2 * merges);
            let pairs = picked
                .chunks(2)
                .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
                .collect();
            (pairs, Provenance::Decoy)
        }
    };
    Ok(PatternQuotient {
        pattern: pattern.clone(),
        slot_partition: SlotPartition::from_pairs(encoding.slot_count(), &pairs)?,
        provenance,
    })
}

/// Whether `partition` is exactly the edge-slot identification of some single
/// embedding of `pattern` into `host`.
///
/// Every merged pair must be the two slots of one host edge, their number must
/// equal the pattern's edge count, and the pattern must embed into the host
/// restricted to those edges. With equal counts that embedding hits every
/// merged edge.
pub fn has_canonical_form(
    partition: &SlotPartition,
    pattern: &Graph,
    host: &Graph,
    budget: &SearchBudget,
) -> Result<bool, DistinguishError> {
    let encoding = encode_host(host);
    if partition.slot_count() != encoding.slot_count() {
        return Err(DistinguishError::InvalidQuotient(format!(
            "partition covers {} slots, host has {}",
            partition.slot_count(),
            encoding.slot_count()
        )));
    }
    if partition.classes().iter().any(|c| c.len() > 2) {
        return Ok(false);
    }
    let pairs = partition.doubletons();
    if pairs.len() != pattern.edge_count() {
        return Ok(false);
    }
    let mut edges = BTreeSet::new();
    for &(s, t) in &pairs {
        match encoding.edge_of_slot_pair(s, t) {
            Some(e) => edges.insert(e),
            None => return Ok(false),
        };
    }
    let restricted = Graph::new(host.vertex_count(), edges)?;
    Ok(subgraph_iso_bruteforce(pattern, &restricted, budget)?.is_some())
}
