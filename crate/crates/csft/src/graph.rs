//! Structured augmented graphs in trivialized form.
//!
//! Every vertex `v` of arity `n` carries a frame identifying its half-edges
//! with the slots `0..=n` of `[n]`. A half-edge `h` at slot `s` carries an
//! augmentation `[n] -> [1]` that sends `s` to its side and every other slot to
//! the opposite side. Augmentations with the same slot and side form a
//! `G_0`-torsor; the twist is the coordinate in that torsor.
//!
//! Coordinates: write `w` for the unit rotation of `[1]`, `c_s` for the
//! rotation of `[n]` sending `s` to `n`, and `L(t)` for the stabilizer lift
//! of `t` at the last vertex. An incoming half-edge with twist `t` has
//! augmentation `psi_n . L(t^-1) . c_s`; an outgoing one has augmentation
//! `w^-1 . psi_n . L(k(t)) . c_s`, where `k(t) = t` for even `t` and
//! `k(t) = t_1 . t` for odd `t`, with `t_1` the unit rotation of `[0]`.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::csg::{self, CsgError, CsgMorphism, Family};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("half-edge {0} bounds a loop; loops are never contracted")]
    ContractLoop(usize),
    #[error("half-edge {0} is external")]
    NotAnEdge(usize),
    #[error("cannot glue: {0}")]
    Gluing(String),
    #[error(transparent)]
    Csg(#[from] CsgError),
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// Side of a half-edge in its edge: 0 = outgoing, 1 = incoming.
pub const OUT: u8 = 0;
pub const IN: u8 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfEdge {
    pub vertex: usize,
    pub slot: usize,
    pub side: u8,
    pub twist: CsgMorphism,
}

/// A morphism of the structured bordism category, in trivialized form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructuredGraph {
    family: Family,
    arities: Vec<usize>,
    half_edges: Vec<HalfEdge>,
    pairing: Vec<usize>,
    ins: Vec<usize>,
    outs: Vec<usize>,
}

fn rot(family: &Family, n: usize, r: i64) -> CsgMorphism {
    CsgMorphism::rotation(family, n, r)
}

/// `c_s`: the rotation of `[n]` sending slot `s` to `n`.
fn slot_rotation(family: &Family, n: usize, slot: usize) -> CsgMorphism {
    rot(family, n, n as i64 - slot as i64)
}

fn out_tau(t: &CsgMorphism) -> CsgMorphism {
    if t.sign() == 1 {
        t.clone()
    } else {
        csg::compose(t, &rot(t.family(), 0, 1)).expect("G_0")
    }
}

fn out_twist(tau: &CsgMorphism) -> CsgMorphism {
    if tau.sign() == 1 {
        tau.clone()
    } else {
        csg::compose(tau, &rot(tau.family(), 0, -1)).expect("G_0")
    }
}

fn check_g0(t: &CsgMorphism, family: &Family) -> Result<()> {
    if t.family() != family || t.source() != 0 || t.target() != 0 {
        return Err(GraphError::Malformed(format!("twist {t} is not an element of G_0 of {family}")));
    }
    Ok(())
}

/// The augmentation of a half-edge with the given coordinates.
pub fn encode(family: &Family, n: usize, slot: usize, side: u8, twist: &CsgMorphism) -> CsgMorphism {
    let tau = if side == IN { twist.inverse().expect("G_0") } else { out_tau(twist) };
    let x = CsgMorphism::stabilizer_lift(n, n, &tau);
    let g = csg::compose(&slot_rotation(family, n, slot), &x).unwrap();
    let aug = csg::compose(&g, &CsgMorphism::psi(family, n)).unwrap();
    if side == IN {
        aug
    } else {
        csg::compose(&aug, &rot(family, 1, -1)).unwrap()
    }
}

/// The frame element `x` in the stabilizer of `n` with `aug` (made incoming) `= psi_n . x . c_slot`,
/// together with `tau = n^*(x)`.
pub fn incoming_frame(aug: &CsgMorphism, slot: usize) -> Result<(CsgMorphism, CsgMorphism)> {
    let family = aug.family();
    let n = aug.source();
    if aug.target() != 1 || slot > n {
        return Err(GraphError::Malformed(format!("{aug} is not an augmentation of slot {slot}")));
    }
    let lam = aug.lambda().values;
    let side = lam[slot] as u8;
    if (0..=n).any(|j| j != slot && lam[j] as u8 == side) {
        return Err(GraphError::Malformed(format!("{aug} collapses slot {slot} with another slot")));
    }
    let incoming = if side == IN { aug.clone() } else { csg::compose(aug, &rot(family, 1, 1))? };
    let (delta, g) = csg::factorize(&incoming);
    debug_assert_eq!(delta, CsgMorphism::psi(family, n));
    let x = csg::compose(&slot_rotation(family, n, slot).inverse()?, &g)?;
    let tau = csg::point_pullback(&x, n)?;
    Ok((x, tau))
}

/// Reads `(side, twist)` off an augmentation, given the slot it singles out.
pub fn decode(aug: &CsgMorphism, slot: usize) -> Result<(u8, CsgMorphism)> {
    let (_, tau) = incoming_frame(aug, slot)?;
    let side = aug.lambda().values[slot] as u8;
    let twist = if side == IN { tau.inverse()? } else { out_twist(&tau) };
    Ok((side, twist))
}

/// A leg of a corolla: side and twist, listed by slot.
#[derive(Clone, Debug)]
pub struct Leg {
    pub side: u8,
    pub twist: CsgMorphism,
}

impl Leg {
    pub fn incoming(family: &Family) -> Leg {
        Leg { side: IN, twist: CsgMorphism::identity(family, 0) }
    }

    pub fn outgoing(family: &Family) -> Leg {
        Leg { side: OUT, twist: CsgMorphism::identity(family, 0) }
    }

    pub fn twisted(mut self, twist: CsgMorphism) -> Leg {
        self.twist = twist;
        self
    }
}

impl StructuredGraph {
    pub fn new(
        family: Family,
        arities: Vec<usize>,
        half_edges: Vec<HalfEdge>,
        pairing: Vec<usize>,
        ins: Vec<usize>,
        outs: Vec<usize>,
    ) -> Result<Self> {
        let g = StructuredGraph { family, arities, half_edges, pairing, ins, outs };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(GraphError::Malformed(msg));
        let hn = self.half_edges.len();
        if self.pairing.len() != hn {
            return bad(format!("pairing has {} entries for {hn} half-edges", self.pairing.len()));
        }
        let mut seen: Vec<Vec<bool>> = self.arities.iter().map(|&n| vec![false; n + 1]).collect();
        for (i, h) in self.half_edges.iter().enumerate() {
            if h.vertex >= self.arities.len() || h.slot > self.arities[h.vertex] {
                return bad(format!("half-edge {i} sits at a nonexistent slot"));
            }
            if std::mem::replace(&mut seen[h.vertex][h.slot], true) {
                return bad(format!("half-edge {i} shares slot {} of vertex {}", h.slot, h.vertex));
            }
            if h.side > 1 {
                return bad(format!("half-edge {i} has side {}", h.side));
            }
            check_g0(&h.twist, &self.family)?;
            let j = self.pairing[i];
            if j >= hn || self.pairing[j] != i {
                return bad(format!("pairing is not an involution at half-edge {i}"));
            }
            if j != i && self.half_edges[j].side == h.side {
                return bad(format!("half-edges {i} and {j} are glued on the same side"));
            }
        }
        if let Some((v, s)) = seen.iter().enumerate().find_map(|(v, s)| s.iter().position(|x| !x).map(|s| (v, s))) {
            return bad(format!("slot {s} of vertex {v} is empty"));
        }
        let external = |side: u8| -> BTreeSet<usize> {
            (0..hn).filter(|&i| self.pairing[i] == i && self.half_edges[i].side == side).collect()
        };
        for (list, side, name) in [(&self.ins, IN, "in"), (&self.outs, OUT, "out")] {
            let set: BTreeSet<usize> = list.iter().copied().collect();
            if set.len() != list.len() || set != external(side) {
                return bad(format!("{name} order does not list exactly the external side-{side} half-edges"));
            }
        }
        Ok(())
    }

    /// A one-vertex graph without loops whose slot `s` carries `legs[s]`.
    /// `ins` and `outs` list slots.
    pub fn corolla(family: &Family, legs: Vec<Leg>, ins: Vec<usize>, outs: Vec<usize>) -> Result<Self> {
        if legs.is_empty() {
            return Err(GraphError::Malformed("a corolla needs at least one leg".into()));
        }
        let n = legs.len() - 1;
        let half_edges =
            legs.into_iter().enumerate().map(|(s, l)| HalfEdge { vertex: 0, slot: s, side: l.side, twist: l.twist }).collect();
        Self::new(family.clone(), vec![n], half_edges, (0..=n).collect(), ins, outs)
    }

    /// The identity corolla on `[1]`: slot 0 outgoing, slot 1 incoming.
    pub fn identity(family: &Family) -> Self {
        Self::corolla(family, vec![Leg::outgoing(family), Leg::incoming(family)], vec![1], vec![0]).unwrap()
    }

    /// The arity-one corolla whose incoming leg carries `twist`.
    pub fn twisted_identity(twist: &CsgMorphism) -> Result<Self> {
        let f = twist.family();
        Self::corolla(f, vec![Leg::outgoing(f), Leg::incoming(f).twisted(twist.clone())], vec![1], vec![0])
    }

    /// The standard multiplication `m_n`: slot 0 outgoing, slots `1..=n` incoming.
    pub fn multiplication(family: &Family, n: usize) -> Self {
        let mut legs = vec![Leg::outgoing(family)];
        legs.extend((0..n).map(|_| Leg::incoming(family)));
        Self::corolla(family, legs, (1..=n).collect(), vec![0]).unwrap()
    }

    /// The trace `b_{n}` on `[n]`: all `n + 1` legs incoming.
    pub fn trace(family: &Family, n: usize) -> Self {
        Self::corolla(family, (0..=n).map(|_| Leg::incoming(family)).collect(), (0..=n).collect(), vec![]).unwrap()
    }

    /// The cotrace `p_{n}` on `[n]`: all `n + 1` legs outgoing.
    pub fn cotrace(family: &Family, n: usize) -> Self {
        Self::corolla(family, (0..=n).map(|_| Leg::outgoing(family)).collect(), vec![], (0..=n).collect()).unwrap()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn ins(&self) -> &[usize] {
        &self.ins
    }

    pub fn outs(&self) -> &[usize] {
        &self.outs
    }

    pub fn vertex_count(&self) -> usize {
        self.arities.len()
    }

    pub fn is_external(&self, h: usize) -> bool {
        self.pairing[h] == h
    }

    /// Internal edges as `(outgoing half, incoming half)`, sorted by the outgoing half.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.half_edges.len())
            .filter(|&i| self.pairing[i] != i && self.half_edges[i].side == OUT)
            .map(|i| (i, self.pairing[i]))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn is_loop(&self, h: usize) -> bool {
        !self.is_external(h) && self.half_edges[h].vertex == self.half_edges[self.pairing[h]].vertex
    }

    pub fn is_corolla(&self) -> bool {
        self.arities.len() == 1 && self.edges().is_empty()
    }

    pub fn is_rose(&self) -> bool {
        self.arities.len() == 1
    }

    /// Half-edges at `v`, indexed by slot.
    pub fn slots(&self, v: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.arities[v] + 1];
        for (i, h) in self.half_edges.iter().enumerate() {
            if h.vertex == v {
                out[h.slot] = i;
            }
        }
        out
    }

    pub fn augmentation(&self, h: usize) -> CsgMorphism {
        let he = &self.half_edges[h];
        encode(&self.family, self.arities[he.vertex], he.slot, he.side, &he.twist)
    }

    /// `tau` of the half-edge: its incoming frame lies over `tau` in `G_0`.
    pub fn incoming_twist(&self, h: usize) -> CsgMorphism {
        let he = &self.half_edges[h];
        if he.side == IN {
            he.twist.inverse().unwrap()
        } else {
            out_tau(&he.twist)
        }
    }

    /// The displayed twist of an internal edge: `twist(in) . twist(out)^-1`.
    pub fn edge_twist(&self, h: usize) -> Result<CsgMorphism> {
        if self.is_external(h) {
            return Err(GraphError::NotAnEdge(h));
        }
        let (o, i) = if self.half_edges[h].side == OUT { (h, self.pairing[h]) } else { (self.pairing[h], h) };
        Ok(csg::compose(&self.half_edges[o].twist.inverse()?, &self.half_edges[i].twist)?)
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let nv = self.arities.len();
        let mut adj = vec![Vec::new(); nv];
        for (o, i) in self.edges() {
            let (a, b) = (self.half_edges[o].vertex, self.half_edges[i].vertex);
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut comp = vec![usize::MAX; nv];
        let mut out = Vec::new();
        for s in 0..nv {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut members = vec![s];
            comp[s] = out.len();
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &u in &adj[v] {
                    if comp[u] == usize::MAX {
                        comp[u] = out.len();
                        members.push(u);
                        queue.push_back(u);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Euler characteristic `V - E` of the underlying graph (external legs not counted).
    pub fn euler_characteristic(&self) -> i64 {
        self.arities.len() as i64 - self.edge_count() as i64
    }

    /// Sets the augmentation of `h` (with a new slot), recomputing side and twist.
    fn set_augmentation(&mut self, h: usize, aug: &CsgMorphism, slot: usize) -> Result<()> {
        let (side, twist) = decode(aug, slot)?;
        let he = &mut self.half_edges[h];
        he.slot = slot;
        he.side = side;
        he.twist = twist;
        Ok(())
    }

    /// Changes the frame of vertex `v` by `a` in `G_{n_v}`: augmentations are
    /// precomposed with `a` and slots relabelled by `lambda(a)^-1`.
    pub fn act_on_vertex(&self, v: usize, a: &CsgMorphism) -> Result<Self> {
        let n = *self
            .arities
            .get(v)
            .ok_or_else(|| GraphError::Malformed(format!("no vertex {v}")))?;
        if a.family() != &self.family || !a.is_automorphism() || a.source() != n {
            return Err(GraphError::Malformed(format!("{a} is not an element of G_{n}")));
        }
        let inv = a.lambda().inverse_permutation();
        let mut out = self.clone();
        for h in self.slots(v) {
            let aug = csg::compose(a, &self.augmentation(h))?;
            out.set_augmentation(h, &aug, inv[self.half_edges[h].slot])?;
        }
        Ok(out)
    }

    /// Changes the frame of the internal edge through `h` by `k` in `G_1`.
    /// A `k` swapping the two ends reverses the direction of the edge.
    pub fn act_on_edge(&self, h: usize, k: &CsgMorphism) -> Result<Self> {
        if h >= self.half_edges.len() || self.is_external(h) {
            return Err(GraphError::NotAnEdge(h));
        }
        if k.family() != &self.family || !k.is_automorphism() || k.source() != 1 {
            return Err(GraphError::Malformed(format!("{k} is not an element of G_1")));
        }
        let mut out = self.clone();
        for x in [h, self.pairing[h]] {
            let aug = csg::compose(&self.augmentation(x), k)?;
            out.set_augmentation(x, &aug, self.half_edges[x].slot)?;
        }
        Ok(out)
    }

    /// Contracts the internal edge through `h`, merging its two endpoints.
    pub fn contract_edge(&self, h: usize) -> Result<Self> {
        Ok(self.contract_edge_traced(h)?.0)
    }

    /// As [`contract_edge`](Self::contract_edge); also returns the merged
    /// vertex and the slots it gives to the half-edges of the incoming end.
    pub fn contract_edge_traced(&self, h: usize) -> Result<(Self, usize, Vec<usize>)> {
        if h >= self.half_edges.len() || self.is_external(h) {
            return Err(GraphError::NotAnEdge(h));
        }
        if self.is_loop(h) {
            return Err(GraphError::ContractLoop(h));
        }
        let (ho, hi) = if self.half_edges[h].side == OUT { (h, self.pairing[h]) } else { (self.pairing[h], h) };
        let (v, vi) = (self.half_edges[ho].vertex, self.half_edges[hi].vertex);
        let (p, q) = csg::collapse_pullback(&self.augmentation(ho), &self.augmentation(hi))?;
        let merged_arity = self.arities[v] + self.arities[vi] - 1;
        // new vertex numbering: drop vi, the merged vertex keeps v's place
        let keep = |u: usize| if u > vi { u - 1 } else { u };
        let new_v = keep(v);
        let mut arities = self.arities.clone();
        arities[v] = merged_arity;
        arities.remove(vi);
        let survivors: Vec<usize> = (0..self.half_edges.len()).filter(|&x| x != ho && x != hi).collect();
        let mut index = vec![usize::MAX; self.half_edges.len()];
        for (k, &x) in survivors.iter().enumerate() {
            index[x] = k;
        }
        let mut half_edges = Vec::with_capacity(survivors.len());
        let mut incoming_block = Vec::new();
        for &x in &survivors {
            let he = &self.half_edges[x];
            let mut new = he.clone();
            if he.vertex == v || he.vertex == vi {
                let proj = if he.vertex == v { &p } else { &q };
                let aug = csg::compose(proj, &self.augmentation(x))?;
                let slot = if merged_arity == 0 { 0 } else { aug.lambda().preimage(he.side as usize)[0] };
                let (side, twist) = decode(&aug, slot)?;
                debug_assert_eq!(side, he.side);
                new = HalfEdge { vertex: new_v, slot, side, twist };
                if he.vertex == vi {
                    incoming_block.push(slot);
                }
            } else {
                new.vertex = keep(he.vertex);
            }
            half_edges.push(new);
        }
        let pairing = survivors.iter().map(|&x| index[self.pairing[x]]).collect();
        let ins = self.ins.iter().map(|&x| index[x]).collect();
        let outs = self.outs.iter().map(|&x| index[x]).collect();
        incoming_block.sort_unstable();
        let g = StructuredGraph { family: self.family.clone(), arities, half_edges, pairing, ins, outs };
        debug_assert!(g.validate().is_ok());
        Ok((g, new_v, incoming_block))
    }

    /// Splits vertex `v` of arity `N` in two, joined by a new edge: the slots
    /// `start, start+1, ..., start+len-1` (cyclically) move to a new vertex of
    /// arity `len`, which becomes the incoming end. Contracting the new edge
    /// returns a graph differing from `self` by a rotation of the frame at `v`.
    /// Returns the graph and the outgoing half of the new edge.
    pub fn split_vertex(&self, v: usize, start: usize, len: usize) -> Result<(Self, usize)> {
        let big = *self.arities.get(v).ok_or_else(|| GraphError::Malformed(format!("no vertex {v}")))?;
        if len == 0 || len > big || start > big {
            return Err(GraphError::Malformed(format!("cannot split a block of {len} slots at {start} off [{big}]")));
        }
        let f = &self.family;
        let rotated = self.act_on_vertex(v, &rot(f, big, start as i64))?;
        let (m, n) = (len, big + 1 - len);
        let section_in = CsgMorphism::delta(f, big, (0..=m as i64).collect())?;
        let section_out = CsgMorphism::delta(f, big, (0..=n as i64).map(|j| j + m as i64 - 1).collect())?;
        let new_vertex = self.arities.len();
        let mut out = rotated.clone();
        out.arities[v] = n;
        out.arities.push(m);
        for h in rotated.slots(v) {
            let slot = rotated.half_edges[h].slot;
            let aug = rotated.augmentation(h);
            if slot < m {
                out.set_augmentation(h, &csg::compose(&section_in, &aug)?, slot)?;
                out.half_edges[h].vertex = new_vertex;
            } else {
                out.set_augmentation(h, &csg::compose(&section_out, &aug)?, slot + 1 - m)?;
            }
        }
        let id = CsgMorphism::identity(f, 0);
        let ho = out.half_edges.len();
        out.half_edges.push(HalfEdge { vertex: v, slot: 0, side: OUT, twist: id.clone() });
        out.half_edges.push(HalfEdge { vertex: new_vertex, slot: m, side: IN, twist: id });
        out.pairing.push(ho + 1);
        out.pairing.push(ho);
        debug_assert!(out.validate().is_ok());
        Ok((out, ho))
    }

    /// The dual 2-2 move on the edge through `h`, whose endpoints must both
    /// have three slots: contract, then split off the other adjacent pair.
    pub fn pachner_move(&self, h: usize) -> Result<(Self, usize)> {
        if h >= self.half_edges.len() || self.is_external(h) {
            return Err(GraphError::NotAnEdge(h));
        }
        let (a, b) = (self.half_edges[h].vertex, self.half_edges[self.pairing[h]].vertex);
        if self.arities[a] != 2 || self.arities[b] != 2 {
            return Err(GraphError::Malformed("the 2-2 move needs two three-slot vertices".into()));
        }
        let (merged, v, block) = self.contract_edge_traced(h)?;
        // the incoming end occupies a cyclic block of two of the four slots
        let start = block.iter().copied().find(|&s| !block.contains(&((s + 3) % 4))).expect("cyclic block");
        merged.split_vertex(v, (start + 1) % 4, 2)
    }

    /// Contracts edges until every component is a single vertex.
    pub fn normalize_to_rose(&self) -> Result<Self> {
        let mut g = self.clone();
        while let Some(h) = g.edges().into_iter().map(|e| e.0).find(|&h| !g.is_loop(h)) {
            g = g.contract_edge(h)?;
        }
        Ok(g)
    }

    /// Glues out-leg `outs[j]` of `self` to in-leg `ins[i]` of `next`. Legs are
    /// spliced in place: the inputs of `self` replace input `i` of `next` and
    /// the outputs of `next` replace output `j` of `self`.
    pub fn concatenate(&self, j: usize, next: &StructuredGraph, i: usize) -> Result<Self> {
        if self.family != next.family {
            return Err(GraphError::Gluing(format!("families {} and {} differ", self.family, next.family)));
        }
        if j >= self.outs.len() || i >= next.ins.len() {
            return Err(GraphError::Gluing(format!("no out-leg {j} or in-leg {i}")));
        }
        let (mut g, shift) = self.disjoint_union_raw(next);
        let (a, b) = (self.outs[j], next.ins[i] + shift);
        g.pairing[a] = b;
        g.pairing[b] = a;
        let next_ins: Vec<usize> = next.ins.iter().map(|&x| x + shift).collect();
        let next_outs: Vec<usize> = next.outs.iter().map(|&x| x + shift).collect();
        g.ins = [&next_ins[..i], &self.ins[..], &next_ins[i + 1..]].concat();
        g.outs = [&self.outs[..j], &next_outs[..], &self.outs[j + 1..]].concat();
        g.validate()?;
        Ok(g)
    }

    /// Glues out-legs `outs[j_k]` of `self` to in-legs `ins[i_k]` of `next` for
    /// every pair `(j_k, i_k)`. Remaining inputs: those of `self`, then those
    /// of `next`; remaining outputs likewise.
    pub fn glue(&self, next: &StructuredGraph, pairs: &[(usize, usize)]) -> Result<Self> {
        if self.family != next.family {
            return Err(GraphError::Gluing(format!("families {} and {} differ", self.family, next.family)));
        }
        let js: BTreeSet<usize> = pairs.iter().map(|p| p.0).collect();
        let is: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
        if js.len() != pairs.len() || is.len() != pairs.len() {
            return Err(GraphError::Gluing("a leg is glued twice".into()));
        }
        if js.iter().any(|&j| j >= self.outs.len()) || is.iter().any(|&i| i >= next.ins.len()) {
            return Err(GraphError::Gluing("no such leg".into()));
        }
        let (mut g, shift) = self.disjoint_union_raw(next);
        for &(j, i) in pairs {
            let (a, b) = (self.outs[j], next.ins[i] + shift);
            g.pairing[a] = b;
            g.pairing[b] = a;
        }
        g.ins = self.ins.iter().copied().chain(next.ins.iter().enumerate().filter(|(k, _)| !is.contains(k)).map(|(_, &x)| x + shift)).collect();
        g.outs = self.outs.iter().enumerate().filter(|(k, _)| !js.contains(k)).map(|(_, &x)| x).chain(next.outs.iter().map(|&x| x + shift)).collect();
        g.validate()?;
        Ok(g)
    }

    /// Disjoint union; inputs and outputs of `self` come first.
    pub fn disjoint_union(&self, other: &StructuredGraph) -> Result<Self> {
        if self.family != other.family {
            return Err(GraphError::Gluing(format!("families {} and {} differ", self.family, other.family)));
        }
        Ok(self.disjoint_union_raw(other).0)
    }

    fn disjoint_union_raw(&self, other: &StructuredGraph) -> (Self, usize) {
        let shift = self.half_edges.len();
        let vshift = self.arities.len();
        let mut g = self.clone();
        g.arities.extend(&other.arities);
        g.half_edges.extend(other.half_edges.iter().map(|h| HalfEdge { vertex: h.vertex + vshift, ..h.clone() }));
        g.pairing.extend(other.pairing.iter().map(|&x| x + shift));
        g.ins.extend(other.ins.iter().map(|&x| x + shift));
        g.outs.extend(other.outs.iter().map(|&x| x + shift));
        (g, shift)
    }

    /// Renumbers half-edges by `(vertex, slot)`; isomorphic graphs with the
    /// same vertex numbering become equal.
    pub fn canonical(&self) -> Self {
        let mut order: Vec<usize> = (0..self.half_edges.len()).collect();
        order.sort_by_key(|&h| (self.half_edges[h].vertex, self.half_edges[h].slot));
        let mut index = vec![0; order.len()];
        for (k, &h) in order.iter().enumerate() {
            index[h] = k;
        }
        StructuredGraph {
            family: self.family.clone(),
            arities: self.arities.clone(),
            half_edges: order.iter().map(|&h| self.half_edges[h].clone()).collect(),
            pairing: order.iter().map(|&h| index[self.pairing[h]]).collect(),
            ins: self.ins.iter().map(|&h| index[h]).collect(),
            outs: self.outs.iter().map(|&h| index[h]).collect(),
        }
    }

    /// Reorders the external legs; `ins[k]` becomes `self.ins[in_perm[k]]`.
    pub fn permute_legs(&self, in_perm: &[usize], out_perm: &[usize]) -> Result<Self> {
        let mut g = self.clone();
        g.ins = in_perm.iter().map(|&k| self.ins[k]).collect();
        g.outs = out_perm.iter().map(|&k| self.outs[k]).collect();
        g.validate()?;
        Ok(g)
    }
}

/// Parameters for [`random_graph`].
#[derive(Clone, Debug)]
pub struct RandomGraphSpec {
    pub max_vertices: usize,
    /// Allowed slot counts per vertex (arity + 1).
    pub slot_counts: Vec<usize>,
    pub max_external: usize,
    /// Chance that a free pair of half-edges becomes an extra edge.
    pub extra_edge_chance: f64,
}

impl Default for RandomGraphSpec {
    fn default() -> Self {
        RandomGraphSpec { max_vertices: 5, slot_counts: vec![1, 2, 3, 4], max_external: 4, extra_edge_chance: 0.3 }
    }
}

/// A random connected graph with random slots, directions and twists drawn from `twists`.
pub fn random_graph<R: Rng>(family: &Family, spec: &RandomGraphSpec, twists: &[CsgMorphism], rng: &mut R) -> StructuredGraph {
    loop {
        let nv = rng.gen_range(1..=spec.max_vertices);
        let slot_counts: Vec<usize> = (0..nv).map(|_| *spec.slot_counts.choose(rng).unwrap()).collect();
        // spanning tree: attach each vertex to an earlier one with a free slot
        let mut used = vec![0usize; nv];
        let mut tree = Vec::new();
        let mut ok = true;
        for v in 1..nv {
            let open: Vec<usize> = (0..v).filter(|&u| used[u] < slot_counts[u]).collect();
            match open.choose(rng) {
                Some(&u) if used[v] < slot_counts[v] => {
                    used[u] += 1;
                    used[v] += 1;
                    tree.push((u, v));
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let mut free: Vec<usize> = (0..nv).flat_map(|v| std::iter::repeat_n(v, slot_counts[v] - used[v])).collect();
        if free.is_empty() {
            continue;
        }
        free.shuffle(rng);
        let mut extra = Vec::new();
        while free.len() >= 3 && (free.len() > spec.max_external || rng.gen_bool(spec.extra_edge_chance)) {
            let a = free.pop().unwrap();
            let b = free.pop().unwrap();
            extra.push((a, b));
        }
        if free.len() > spec.max_external {
            continue;
        }
        // assemble half-edges: vertex, side, partner
        let mut he: Vec<(usize, u8)> = Vec::new();
        let mut pairing = Vec::new();
        for &(a, b) in tree.iter().chain(&extra) {
            let (sa, sb) = if rng.gen_bool(0.5) { (OUT, IN) } else { (IN, OUT) };
            let k = he.len();
            he.push((a, sa));
            he.push((b, sb));
            pairing.push(k + 1);
            pairing.push(k);
        }
        for &v in &free {
            let side = if rng.gen_bool(0.5) { OUT } else { IN };
            pairing.push(he.len());
            he.push((v, side));
        }
        let arities: Vec<usize> = slot_counts.iter().map(|&k| k - 1).collect();
        let mut slot_pool: Vec<Vec<usize>> = slot_counts
            .iter()
            .map(|&k| {
                let mut s: Vec<usize> = (0..k).collect();
                s.shuffle(rng);
                s
            })
            .collect();
        let half_edges: Vec<HalfEdge> = he
            .iter()
            .map(|&(v, side)| HalfEdge {
                vertex: v,
                slot: slot_pool[v].pop().expect("slot"),
                side,
                twist: twists.choose(rng).expect("twists").clone(),
            })
            .collect();
        let mut ins: Vec<usize> = (0..he.len()).filter(|&i| pairing[i] == i && he[i].1 == IN).collect();
        let mut outs: Vec<usize> = (0..he.len()).filter(|&i| pairing[i] == i && he[i].1 == OUT).collect();
        ins.shuffle(rng);
        outs.shuffle(rng);
        return StructuredGraph::new(family.clone(), arities, half_edges, pairing, ins, outs).expect("valid random graph");
    }
}
