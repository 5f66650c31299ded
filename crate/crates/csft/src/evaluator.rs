//! Evaluation of structured graphs against a Frobenius algebra with twisted
//! `G_0`-action, and the harnesses checking well-definedness and functoriality.
//!
//! A vertex of arity `n` is the form `beta(z_0 z_1 ... z_n)`, read along its
//! slots; the half-edge at slot `s` feeds `z_s = U(tau)^-1 y`, where `tau` is
//! the twist of its incoming frame. Edges and outgoing legs use the copairing
//! `R = B^-T`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::csg::{self, CsgMorphism, Family};
use crate::frobenius::{FrobeniusPresentation, G0Action};
use crate::graph::{random_graph, GraphError, RandomGraphSpec, StructuredGraph};
use crate::oracle::{Check, Report};
use crate::tensor::{contract, invert, Tensor, TensorError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("closed morphism: a component has no external legs")]
    ClosedMorphism,
    #[error("context mismatch: {0}")]
    Context(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

pub type Result<T> = std::result::Result<T, EvalError>;

/// A Frobenius algebra bound to a family, with its structure tensors.
#[derive(Clone, Debug)]
pub struct EvaluationContext {
    pub algebra: FrobeniusPresentation,
    pub action: G0Action,
    /// `mu_2[i][j][k]`.
    pub mul: Tensor,
    /// `beta_1` as a covector.
    pub trace: Tensor,
    pub unit: Tensor,
    pub gram: Tensor,
    /// `R = B^-T`, the copairing dual to `beta_2`.
    pub copairing: Tensor,
}

impl EvaluationContext {
    pub fn new(algebra: FrobeniusPresentation, family: &Family) -> Result<Self> {
        let action = G0Action::resolve(&algebra, family)?;
        let gram = algebra.gram();
        let copairing = invert(&gram)?.transpose();
        Ok(EvaluationContext {
            mul: algebra.mul.clone(),
            trace: algebra.trace_tensor(),
            unit: algebra.unit_tensor(),
            gram,
            copairing,
            action,
            algebra,
        })
    }

    pub fn family(&self) -> &Family {
        &self.action.family
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim
    }

    /// `U(g)` for `g` in `G_0`.
    pub fn action_matrix(&self, g: &CsgMorphism) -> Result<Tensor> {
        Ok(self.action.matrix(g)?)
    }

    /// `mu_n` as a tensor with `n` input axes and one output axis; `mu_0` is the unit.
    pub fn mu_n(&self, n: usize) -> Tensor {
        match n {
            0 => self.unit.clone(),
            1 => Tensor::identity(self.mul.field(), self.dim()),
            _ => {
                let mut t = self.mul.clone();
                for _ in 2..n {
                    // (x_1 ... x_k) x_{k+1}: last axis of t feeds the left input of mu
                    t = contract(&t, &[t.rank() - 1], &self.mul, &[0]).unwrap();
                }
                t
            }
        }
    }

    /// `beta_n = beta_1 . mu_n` for `n >= 1`.
    pub fn beta_n(&self, n: usize) -> Tensor {
        let m = self.mu_n(n);
        contract(&m, &[m.rank() - 1], &self.trace, &[0]).unwrap()
    }

    fn check_graph(&self, g: &StructuredGraph) -> Result<()> {
        if g.family() != self.family() {
            return Err(EvalError::Context(format!("graph over {} evaluated in {}", g.family(), self.family())));
        }
        let external: Vec<usize> = g.ins().iter().chain(g.outs()).map(|&h| g.half_edges()[h].vertex).collect();
        if g.components().iter().any(|c| !c.iter().any(|v| external.contains(v))) {
            return Err(EvalError::ClosedMorphism);
        }
        Ok(())
    }

    /// The value of `g` as a tensor with axes `ins` then `outs`: the entry at
    /// `(i_1, ..., i_p, o_1, ..., o_q)` is the coefficient of `e_o` in `Z(g)(e_i)`.
    /// Normalizes to roses, evaluates each rose locally and tensors the components.
    pub fn evaluate(&self, g: &StructuredGraph) -> Result<Tensor> {
        self.check_graph(g)?;
        let rose = g.normalize_to_rose()?;
        self.network_value(&rose)
    }

    /// The value of `g` computed directly as a state sum over its vertices.
    pub fn evaluate_state_sum(&self, g: &StructuredGraph) -> Result<Tensor> {
        self.check_graph(g)?;
        self.network_value(g)
    }

    fn network_value(&self, g: &StructuredGraph) -> Result<Tensor> {
        let mut net = Network::default();
        let hs = g.half_edges();
        let y: Vec<usize> = (0..hs.len()).map(|_| net.fresh()).collect();
        let mut twist_cache: HashMap<CsgMorphism, Tensor> = HashMap::new();
        for v in 0..g.vertex_count() {
            let slots = g.slots(v);
            let z: Vec<usize> = slots.iter().map(|_| net.fresh()).collect();
            for (&h, &zl) in slots.iter().zip(&z) {
                let tau = g.incoming_twist(h);
                let m = match twist_cache.get(&tau) {
                    Some(m) => m.clone(),
                    None => {
                        let m = invert(&self.action_matrix(&tau)?)?;
                        twist_cache.insert(tau, m.clone());
                        m
                    }
                };
                net.push(m, vec![zl, y[h]]);
            }
            if z.len() == 1 {
                net.push(self.trace.clone(), vec![z[0]]);
            } else {
                let mut acc = z[0];
                for &zl in &z[1..] {
                    let p = net.fresh();
                    net.push(self.mul.clone(), vec![acc, zl, p]);
                    acc = p;
                }
                net.push(self.trace.clone(), vec![acc]);
            }
        }
        for (o, i) in g.edges() {
            net.push(self.copairing.clone(), vec![y[o], y[i]]);
        }
        let mut open: Vec<usize> = g.ins().iter().map(|&h| y[h]).collect();
        for &h in g.outs() {
            let out = net.fresh();
            net.push(self.copairing.clone(), vec![y[h], out]);
            open.push(out);
        }
        Ok(net.contract_all(&open)?)
    }
}

/// A tensor network; every label joins two axes or is open.
#[derive(Default)]
struct Network {
    nodes: Vec<(Tensor, Vec<usize>)>,
    labels: usize,
}

impl Network {
    fn fresh(&mut self) -> usize {
        self.labels += 1;
        self.labels - 1
    }

    fn push(&mut self, t: Tensor, labels: Vec<usize>) {
        debug_assert_eq!(t.rank(), labels.len());
        self.nodes.push((t, labels));
    }

    fn merge(a: &(Tensor, Vec<usize>), b: &(Tensor, Vec<usize>)) -> std::result::Result<(Tensor, Vec<usize>), TensorError> {
        let mut ax1 = Vec::new();
        let mut ax2 = Vec::new();
        for (i, l) in a.1.iter().enumerate() {
            if let Some(j) = b.1.iter().position(|m| m == l) {
                ax1.push(i);
                ax2.push(j);
            }
        }
        let t = contract(&a.0, &ax1, &b.0, &ax2)?;
        let labels = a.1.iter().enumerate().filter(|(i, _)| !ax1.contains(i)).map(|(_, &l)| l)
            .chain(b.1.iter().enumerate().filter(|(j, _)| !ax2.contains(j)).map(|(_, &l)| l))
            .collect();
        Ok((t, labels))
    }

    /// Greedy pairwise contraction, smallest result first; the result has axes `open`.
    fn contract_all(mut self, open: &[usize]) -> std::result::Result<Tensor, TensorError> {
        let field = self.nodes[0].0.field();
        while self.nodes.len() > 1 {
            let mut best: Option<(usize, usize, usize, bool)> = None;
            for a in 0..self.nodes.len() {
                for b in a + 1..self.nodes.len() {
                    let (la, lb) = (&self.nodes[a].1, &self.nodes[b].1);
                    let shared = la.iter().filter(|l| lb.contains(l)).count();
                    let free = la.len() + lb.len() - 2 * shared;
                    let size = self.nodes[a].0.shape().iter().chain(self.nodes[b].0.shape()).product::<usize>().max(1);
                    let key = (free, size);
                    let connected = shared > 0;
                    let better = match best {
                        None => true,
                        Some((_, _, bf, bc)) => (connected && !bc) || (connected == bc && key.0 < bf),
                    };
                    if better {
                        best = Some((a, b, key.0, connected));
                    }
                }
            }
            let (a, b, _, _) = best.expect("two nodes");
            let nb = self.nodes.swap_remove(b);
            let na = self.nodes.swap_remove(a);
            self.nodes.push(Self::merge(&na, &nb)?);
        }
        let (t, labels) = self.nodes.pop().unwrap_or((Tensor::scalar(field.one()), vec![]));
        let perm: Vec<usize> = open.iter().map(|l| labels.iter().position(|m| m == l).expect("open label")).collect();
        t.permute_axes(&perm)
    }
}

/// Twists used by the random harnesses: all of `G_0` (winding 2 for paracyclic families).
pub fn sample_twists(family: &Family) -> Vec<CsgMorphism> {
    csg::enumerate_group(family, 0, Some(2)).expect("G_0")
}

fn random_group_element<R: Rng>(family: &Family, n: usize, rng: &mut R) -> CsgMorphism {
    let all = csg::enumerate_group(family, n, Some(2)).expect("G_n");
    all.choose(rng).unwrap().clone()
}

fn rng_for(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(trial as u64))
}

fn graph_with<R: Rng>(family: &Family, spec: &RandomGraphSpec, rng: &mut R, ok: impl Fn(&StructuredGraph) -> bool) -> StructuredGraph {
    let twists = sample_twists(family);
    loop {
        let g = random_graph(family, spec, &twists, rng);
        if ok(&g) {
            return g;
        }
    }
}

/// `T1` then `T2`: output `j` of `t1` feeds input `i` of `t2`, axes arranged
/// as for [`StructuredGraph::concatenate`].
pub fn compose_single(t1: &Tensor, shape1: (usize, usize), j: usize, t2: &Tensor, shape2: (usize, usize), i: usize) -> Result<Tensor> {
    let (p1, q1) = shape1;
    let (p2, q2) = shape2;
    let t = contract(t1, &[p1 + j], t2, &[i])?;
    // free axes: ins1 (p1), outs1 minus j (q1-1), ins2 minus i (p2-1), outs2 (q2)
    let base_o1 = p1;
    let base_i2 = p1 + q1 - 1;
    let base_o2 = base_i2 + p2 - 1;
    let mut perm = Vec::new();
    perm.extend(base_i2..base_i2 + i);
    perm.extend(0..p1);
    perm.extend(base_i2 + i..base_i2 + p2 - 1);
    perm.extend(base_o1..base_o1 + j);
    perm.extend(base_o2..base_o2 + q2);
    perm.extend(base_o1 + j..base_o1 + q1 - 1);
    Ok(t.permute_axes(&perm)?)
}

/// `T1` then `T2` along several pairs `(j, i)`, axes arranged as for [`StructuredGraph::glue`].
pub fn compose_multi(t1: &Tensor, shape1: (usize, usize), t2: &Tensor, shape2: (usize, usize), pairs: &[(usize, usize)]) -> Result<Tensor> {
    let (p1, q1) = shape1;
    let (p2, _) = shape2;
    let ax1: Vec<usize> = pairs.iter().map(|&(j, _)| p1 + j).collect();
    let ax2: Vec<usize> = pairs.iter().map(|&(_, i)| i).collect();
    let t = contract(t1, &ax1, t2, &ax2)?;
    let k = pairs.len();
    let q1r = q1 - k;
    let p2r = p2 - k;
    let rest = t.rank() - p1 - q1r - p2r;
    let mut perm: Vec<usize> = (0..p1).collect();
    perm.extend(p1 + q1r..p1 + q1r + p2r);
    perm.extend(p1..p1 + q1r);
    perm.extend(p1 + q1r + p2r..p1 + q1r + p2r + rest);
    Ok(t.permute_axes(&perm)?)
}

fn legs(g: &StructuredGraph) -> usize {
    g.ins().len() + g.outs().len()
}

fn arity(g: &StructuredGraph) -> (usize, usize) {
    (g.ins().len(), g.outs().len())
}

/// Seeded trial runner; each trial returns `Ok(None)` on success or a description of the failure.
fn run_trials(name: &str, trials: usize, seed: u64, f: impl Fn(&mut ChaCha8Rng) -> Result<Option<String>> + Sync) -> Check {
    let results: Vec<(usize, std::result::Result<Option<String>, EvalError>)> =
        (0..trials).into_par_iter().map(|k| (k, f(&mut rng_for(seed, k)))).collect();
    let violations: Vec<String> = results
        .into_iter()
        .filter_map(|(k, r)| match r {
            Ok(None) => None,
            Ok(Some(msg)) => Some(format!("seed {seed} trial {k}: {msg}")),
            Err(e) => Some(format!("seed {seed} trial {k}: error {e}")),
        })
        .take(50)
        .collect();
    Check { name: name.into(), instances: trials, violations }
}

/// Random graph parameters used by the harnesses: up to five vertices of arity at most 4.
pub fn harness_spec() -> RandomGraphSpec {
    RandomGraphSpec { slot_counts: vec![1, 2, 3, 4, 5], ..RandomGraphSpec::default() }
}

/// Single gluings (`trials`) and double gluings (`trials / 2`) of random graphs:
/// the composite of the values equals the value of the glued graph.
pub fn verify_functoriality(ctx: &EvaluationContext, trials: usize, seed: u64) -> Report {
    verify_functoriality_counts(ctx, trials, trials / 2, seed)
}

pub fn verify_functoriality_counts(ctx: &EvaluationContext, single: usize, double: usize, seed: u64) -> Report {
    let family = ctx.family().clone();
    let spec = RandomGraphSpec { max_vertices: 3, ..harness_spec() };
    let single_check = run_trials("functoriality_single", single, seed, |rng| {
        let (g1, g2) = loop {
            let g1 = graph_with(&family, &spec, rng, |g| !g.outs().is_empty());
            let g2 = graph_with(&family, &spec, rng, |g| !g.ins().is_empty());
            if legs(&g1) + legs(&g2) > 2 {
                break (g1, g2);
            }
        };
        let j = rng.gen_range(0..g1.outs().len());
        let i = rng.gen_range(0..g2.ins().len());
        let glued = g1.concatenate(j, &g2, i)?;
        let contracted = glued.contract_edge(g1.outs()[j])?;
        let lhs = compose_single(&ctx.evaluate(&g1)?, arity(&g1), j, &ctx.evaluate(&g2)?, arity(&g2), i)?;
        let rhs = ctx.evaluate(&contracted)?;
        Ok((lhs != rhs).then(|| format!("out {j} of a graph with {} vertices into in {i}", g1.vertex_count())))
    });
    let double_check = run_trials("functoriality_double", double, seed ^ 0x5eed, |rng| {
        let (g1, g2) = loop {
            let g1 = graph_with(&family, &spec, rng, |g| g.outs().len() >= 2);
            let g2 = graph_with(&family, &spec, rng, |g| g.ins().len() >= 2);
            if legs(&g1) + legs(&g2) > 4 {
                break (g1, g2);
            }
        };
        let mut js: Vec<usize> = (0..g1.outs().len()).collect();
        let mut is: Vec<usize> = (0..g2.ins().len()).collect();
        js.shuffle(rng);
        is.shuffle(rng);
        let pairs = [(js[0], is[0]), (js[1], is[1])];
        let glued = g1.glue(&g2, &pairs)?;
        let lhs = compose_multi(&ctx.evaluate(&g1)?, arity(&g1), &ctx.evaluate(&g2)?, arity(&g2), &pairs)?;
        let rhs = ctx.evaluate(&glued)?;
        Ok((lhs != rhs).then(|| format!("double gluing along {pairs:?}")))
    });
    Report { checks: vec![single_check, double_check] }
}

/// Graphs with an edge between two distinct three-slot vertices.
fn pachner_candidate<R: Rng>(family: &Family, rng: &mut R) -> (StructuredGraph, usize) {
    let spec = RandomGraphSpec { slot_counts: vec![2, 3, 3, 3, 4], ..harness_spec() };
    loop {
        let g = graph_with(family, &spec, rng, |g| g.vertex_count() >= 2);
        let hs = g.half_edges();
        let cands: Vec<usize> = g
            .edges()
            .into_iter()
            .map(|e| e.0)
            .filter(|&h| {
                let (a, b) = (hs[h].vertex, hs[g.pairing()[h]].vertex);
                a != b && g.arities()[a] == 2 && g.arities()[b] == 2
            })
            .collect();
        if let Some(&h) = cands.choose(rng) {
            return (g, h);
        }
    }
}

/// The dual 2-2 move on random graphs preserves the state-sum value.
pub fn verify_pachner(ctx: &EvaluationContext, trials: usize, seed: u64) -> Report {
    let family = ctx.family().clone();
    let check = run_trials("pachner", trials, seed, |rng| {
        let (g, h) = pachner_candidate(&family, rng);
        let (moved, _) = g.pachner_move(h)?;
        Ok((ctx.evaluate_state_sum(&g)? != ctx.evaluate_state_sum(&moved)?).then(|| format!("2-2 move on half-edge {h}")))
    });
    Report { checks: vec![check] }
}

/// Invariance of the value under vertex and edge automorphisms, random
/// contraction orders and the 2-2 move, on `trials` random graphs.
pub fn verify_invariance(ctx: &EvaluationContext, trials: usize, seed: u64) -> Report {
    let family = ctx.family().clone();
    let spec = harness_spec();
    let vertex = run_trials("invariance_vertex_automorphism", trials, seed, |rng| {
        let g = graph_with(&family, &spec, rng, |_| true);
        let base = ctx.evaluate_state_sum(&g)?;
        let mut moved = g.clone();
        for v in 0..g.vertex_count() {
            let a = random_group_element(&family, g.arities()[v], rng);
            moved = moved.act_on_vertex(v, &a)?;
        }
        Ok((ctx.evaluate_state_sum(&moved)? != base).then(|| "vertex automorphisms change the value".to_string()))
    });
    let edge = run_trials("invariance_edge_automorphism", trials, seed ^ 0xed9e, |rng| {
        let g = graph_with(&family, &spec, rng, |g| g.edge_count() > 0);
        let base = ctx.evaluate_state_sum(&g)?;
        let mut moved = g.clone();
        for (o, _) in g.edges() {
            let k = random_group_element(&family, 1, rng);
            moved = moved.act_on_edge(o, &k)?;
        }
        Ok((ctx.evaluate_state_sum(&moved)? != base).then(|| "edge automorphisms change the value".to_string()))
    });
    let contraction = run_trials("invariance_contraction_order", trials, seed ^ 0xc0de, |rng| {
        let g = graph_with(&family, &spec, rng, |_| true);
        let base = ctx.evaluate_state_sum(&g)?;
        let mut cur = g;
        loop {
            let cands: Vec<usize> = cur.edges().into_iter().map(|e| e.0).filter(|&h| !cur.is_loop(h)).collect();
            let Some(&h) = cands.choose(rng) else { break };
            cur = cur.contract_edge(h)?;
            if ctx.evaluate_state_sum(&cur)? != base {
                return Ok(Some("a contraction changes the value".into()));
            }
        }
        Ok((ctx.evaluate(&cur)? != base).then(|| "rose value differs".to_string()))
    });
    let pachner = verify_pachner(ctx, trials, seed ^ 0x2222).checks.remove(0);
    Report { checks: vec![vertex, edge, contraction, pachner] }
}

/// `evaluate(p1_iso_inv(g)) = U(g)` on all of `G_0`.
pub fn verify_p1_compatibility(ctx: &EvaluationContext) -> Check {
    let mut violations = Vec::new();
    let elements = sample_twists(ctx.family());
    for g in &elements {
        let graph = crate::operad::p1_iso_inv(g).expect("twisted identity");
        let ok = match (ctx.evaluate(&graph), ctx.action_matrix(g)) {
            (Ok(t), Ok(u)) => t.transpose() == u,
            _ => false,
        };
        if !ok {
            violations.push(format!("{g}"));
        }
    }
    Check { name: "p1_compatibility".into(), instances: elements.len(), violations }
}

/// `b_2` after `p_2`: slot 0 of the cotrace glued to slot 0 of the trace.
pub fn nondegeneracy_graph(family: &Family) -> StructuredGraph {
    let p2 = StructuredGraph::cotrace(family, 1);
    let b2 = StructuredGraph::trace(family, 1);
    p2.glue(&b2, &[(0, 0)]).expect("glue")
}
