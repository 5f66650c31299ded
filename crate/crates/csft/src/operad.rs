//! The operad of structured trees: standard multiplications, partial
//! composition, `P(1) = G_0`, and the homomorphisms `chi_2` and `eta_n`.

use std::fmt;

use crate::csg::{self, CsgMorphism, Family};
use crate::graph::{GraphError, Leg, Result, StructuredGraph, IN, OUT};

/// An element `(g_0, ..., g_k; sigma)` of `G_0 wr Sigma_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub twists: Vec<CsgMorphism>,
    pub perm: Vec<usize>,
    /// For `eta_n`: the slot playing the role of the collapsed point.
    pub distinguished: Option<usize>,
}

impl WreathElement {
    pub fn identity(family: &Family, size: usize) -> Self {
        WreathElement { twists: vec![CsgMorphism::identity(family, 0); size], perm: (0..size).collect(), distinguished: None }
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.twists.iter().all(|t| *t == CsgMorphism::identity(t.family(), 0))
    }

    /// `(d; sigma)(e; pi) = (d_0 e_{s(0)}, ..., d_k e_{s(k)}; sigma pi)` with
    /// `s = sigma^-1` and `G_0` products read right to left. Twists are indexed
    /// by target position; `eta_n` and `chi_n` are homomorphisms for this law.
    pub fn mul(&self, other: &WreathElement) -> WreathElement {
        assert_eq!(self.size(), other.size(), "wreath sizes differ");
        let inv = self.inverse_perm();
        let twists = (0..self.size())
            .map(|i| csg::compose(&other.twists[inv[i]], &self.twists[i]).expect("G_0"))
            .collect();
        let perm = (0..self.size()).map(|i| self.perm[other.perm[i]]).collect();
        WreathElement { twists, perm, distinguished: self.distinguished }
    }

    pub fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        inv
    }

    /// The same element with twists indexed by source position, `e_j = d_{sigma(j)}`.
    /// In these coordinates the law reads `(g; sigma)(h; tau) = (g_{tau(j)} h_j; sigma tau)`.
    pub fn source_indexed(&self) -> Vec<CsgMorphism> {
        self.perm.iter().map(|&p| self.twists[p].clone()).collect()
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let twists: Vec<String> = self.twists.iter().map(ToString::to_string).collect();
        write!(f, "({}; {:?})", twists.join(", "), self.perm)
    }
}

/// The standard multiplication `m_n`; `m_1` is the identity corolla.
pub fn standard_multiplication(family: &Family, n: usize) -> StructuredGraph {
    assert!(n >= 1, "m_n needs n >= 1");
    StructuredGraph::multiplication(family, n)
}

/// Checks that `g` is an operad element: a corolla with exactly one outgoing leg.
pub fn check_operad_element(g: &StructuredGraph) -> Result<()> {
    if !g.is_corolla() || g.outs().len() != 1 || g.ins().is_empty() {
        return Err(GraphError::Malformed("an operad element is a corolla with one output and some inputs".into()));
    }
    Ok(())
}

/// Acts on the vertex so that the outgoing leg sits at slot 0 with trivial twist.
pub fn standardize(g: &StructuredGraph) -> Result<StructuredGraph> {
    check_operad_element(g)?;
    let (_, frame) = csg::factorize(&g.augmentation(g.outs()[0]));
    Ok(g.act_on_vertex(0, &frame.inverse()?)?.canonical())
}

/// `a o_i b`: the output of `b` feeds input `i` (1-based) of `a`.
pub fn operad_compose(a: &StructuredGraph, i: usize, b: &StructuredGraph) -> Result<StructuredGraph> {
    check_operad_element(a)?;
    check_operad_element(b)?;
    if i == 0 || i > a.ins().len() {
        return Err(GraphError::Gluing(format!("no input {i} in an element of arity {}", a.ins().len())));
    }
    let glued = b.concatenate(0, a, i - 1)?;
    standardize(&glued.contract_edge(b.outs()[0])?)
}

/// `P(1) -> G_0`: the incoming twist of the standardized arity-one element.
pub fn p1_iso(x: &StructuredGraph) -> Result<CsgMorphism> {
    let s = standardize(x)?;
    if s.ins().len() != 1 {
        return Err(GraphError::Malformed("expected an arity-one operad element".into()));
    }
    Ok(s.half_edges()[s.ins()[0]].twist.clone())
}

/// `G_0 -> P(1)`.
pub fn p1_iso_inv(t: &CsgMorphism) -> Result<StructuredGraph> {
    StructuredGraph::twisted_identity(t)
}

/// Reads the input twists and slot permutation of a standardized element:
/// input `k` sits at slot `perm[k] + 1` with twist `twists[k]`.
pub fn read_inputs(g: &StructuredGraph) -> WreathElement {
    let hs = g.half_edges();
    WreathElement {
        twists: g.ins().iter().map(|&h| hs[h].twist.clone()).collect(),
        perm: g.ins().iter().map(|&h| hs[h].slot - 1).collect(),
        distinguished: None,
    }
}

/// `chi_2(f)`: act with `f` on the output of `m_2`, restandardize, and read the inputs.
pub fn compute_chi2(f: &CsgMorphism) -> Result<WreathElement> {
    compute_chi(f, 2)
}

/// `chi_n(f)` for any `n >= 1`.
pub fn compute_chi(f: &CsgMorphism, n: usize) -> Result<WreathElement> {
    let family = f.family();
    let m = standard_multiplication(family, n);
    let glued = m.concatenate(0, &p1_iso_inv(f)?, 0)?;
    let contracted = standardize(&glued.contract_edge(m.outs()[0])?)?;
    Ok(read_inputs(&contracted))
}

/// Incoming frames of the standard trace on `[n]`: slot `i` has frame `c_i`,
/// the rotation sending `i` to `n`.
pub fn standard_trace_frames(family: &Family, n: usize) -> Vec<CsgMorphism> {
    (0..=n).map(|i| CsgMorphism::rotation(family, n, n as i64 - i as i64)).collect()
}

/// The incoming frames (in `G_n`) of an all-incoming corolla, listed by slot.
pub fn trace_frames(g: &StructuredGraph) -> Result<Vec<CsgMorphism>> {
    if !g.is_corolla() || !g.outs().is_empty() {
        return Err(GraphError::Malformed("a trace has one vertex and only incoming legs".into()));
    }
    let n = g.arities()[0];
    g.slots(0)
        .into_iter()
        .map(|h| {
            let (x, _) = crate::graph::incoming_frame(&g.augmentation(h), g.half_edges()[h].slot)?;
            Ok(csg::compose(&CsgMorphism::rotation(g.family(), n, n as i64 - g.half_edges()[h].slot as i64), &x)?)
        })
        .collect()
}

/// `eta_n(g) = (n^*(g_0 g g_{s(0)}^-1), ..., n^*(g_n g g_{s(n)}^-1); sigma)` with
/// `sigma = lambda(g)` and `s = sigma^-1`, for incoming trace frames `g_i`.
pub fn compute_eta(n: usize, g: &CsgMorphism, frames: &[CsgMorphism]) -> Result<WreathElement> {
    if g.source() != n || !g.is_automorphism() || frames.len() != n + 1 {
        return Err(GraphError::Malformed(format!("{g} with {} frames is not an element of G_{n}", frames.len())));
    }
    let sigma = g.lambda().values;
    let inv = g.lambda().inverse_permutation();
    let twists = (0..=n)
        .map(|i| {
            let back = frames[inv[i]].inverse()?;
            let x = csg::compose(&csg::compose(&back, g)?, &frames[i])?;
            Ok(csg::point_pullback(&x, n)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WreathElement { twists, perm: sigma, distinguished: Some(n) })
}

/// `compute_eta` with the standard trace frames.
pub fn compute_eta_standard(n: usize, g: &CsgMorphism) -> Result<WreathElement> {
    compute_eta(n, g, &standard_trace_frames(g.family(), n))
}

/// An operad element with all legs given explicitly; slot 0 is the output.
pub fn operad_element(family: &Family, input_twists: &[CsgMorphism], input_slots: &[usize]) -> Result<StructuredGraph> {
    let n = input_twists.len();
    let mut legs = vec![Leg::outgoing(family); n + 1];
    for (t, &s) in input_twists.iter().zip(input_slots) {
        if s == 0 || s > n {
            return Err(GraphError::Malformed(format!("input slot {s} out of range")));
        }
        legs[s] = Leg { side: IN, twist: t.clone() };
    }
    if legs.iter().filter(|l| l.side == OUT).count() != 1 {
        return Err(GraphError::Malformed("input slots are not distinct".into()));
    }
    StructuredGraph::corolla(family, legs, input_slots.to_vec(), vec![0])
}
