//! Finite balls in Cayley graphs, integer edge chains and the
//! decomposition of cycles into translated relators.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use ibig::IBig;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fox::{fox_vector, FoxVector};
use crate::groupring::GroupRingElt;
use crate::oracles::Oracle;
use crate::par::{self, Parallelism};
use crate::words::{Gen, Word};

pub const DEFAULT_VERTEX_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallOptions {
    pub radius: usize,
    pub vertex_budget: usize,
    pub mode: Parallelism,
}

impl BallOptions {
    pub fn new(radius: usize) -> BallOptions {
        BallOptions {
            radius,
            vertex_budget: DEFAULT_VERTEX_BUDGET,
            mode: Parallelism::default(),
        }
    }

    pub fn sequential(self) -> BallOptions {
        BallOptions {
            mode: Parallelism::Sequential,
            ..self
        }
    }
}

/// An edge `(source vertex, generator)`, both as indices into the ball.
pub type EdgeKey = (usize, usize);

/// Integer combination of ball edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeChain {
    coeffs: BTreeMap<EdgeKey, IBig>,
}

impl EdgeChain {
    pub fn zero() -> EdgeChain {
        EdgeChain::default()
    }

    pub fn coeffs(&self) -> &BTreeMap<EdgeKey, IBig> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add_edge(&mut self, e: EdgeKey, c: IBig) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn add(&self, other: &EdgeChain) -> EdgeChain {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_edge(*e, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &IBig) -> EdgeChain {
        let mut out = EdgeChain::zero();
        for (e, c) in &self.coeffs {
            out.add_edge(*e, c * k);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Parent {
    vertex: usize,
    gen: usize,
    sign: i8,
}

/// The vertices within `radius` steps of the identity, in BFS order.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    oracle: Arc<Oracle>,
    gens: Vec<Word>,
    radius: usize,
    vertices: Vec<Word>,
    depth: Vec<usize>,
    parent: Vec<Option<Parent>>,
    index: HashMap<Word, usize>,
    /// `edges[v][j]`: target of the edge `(v, g_j)` when it stays inside.
    edges: Vec<Vec<Option<usize>>>,
}

/// Breadth-first ball: every vertex is expanded by `g_1, g_1⁻¹, g_2, …`
/// in order, so vertex numbering and parent paths are deterministic.
pub fn build_ball(oracle: &Arc<Oracle>, gens: &[Word], opts: BallOptions) -> Result<CayleyBall> {
    if gens.is_empty() {
        return Err(Error::InvalidArgument(
            "a Cayley ball needs generators".into(),
        ));
    }
    let steps: Vec<(usize, i8, Word)> = gens
        .iter()
        .enumerate()
        .flat_map(|(j, g)| [(j, 1i8, g.clone()), (j, -1i8, g.inv())])
        .collect();
    let identity = oracle.nf_word(&Word::identity())?;
    let mut vertices = vec![identity.clone()];
    let mut depth = vec![0];
    let mut parent = vec![None];
    let mut index = HashMap::from([(identity, 0usize)]);
    let mut frontier = vec![0usize];
    for d in 1..=opts.radius {
        let expanded = par::try_map(&frontier, opts.mode, |&v| {
            steps
                .iter()
                .map(|(_, _, s)| oracle.nf_word(&vertices[v].mul(s)))
                .collect::<Result<Vec<Word>>>()
        })?;
        let mut next = Vec::new();
        for (&v, targets) in frontier.iter().zip(expanded) {
            for ((j, sign, _), t) in steps.iter().zip(targets) {
                if index.contains_key(&t) {
                    continue;
                }
                if vertices.len() >= opts.vertex_budget {
                    return Err(Error::VertexBudget(opts.vertex_budget));
                }
                let id = vertices.len();
                index.insert(t.clone(), id);
                vertices.push(t);
                depth.push(d);
                parent.push(Some(Parent {
                    vertex: v,
                    gen: *j,
                    sign: *sign,
                }));
                next.push(id);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let edges = par::try_map(&vertices, opts.mode, |v| {
        gens.iter()
            .map(|g| Ok(index.get(&oracle.nf_word(&v.mul(g))?).copied()))
            .collect::<Result<Vec<Option<usize>>>>()
    })?;
    Ok(CayleyBall {
        oracle: oracle.clone(),
        gens: gens.to_vec(),
        radius: opts.radius,
        vertices,
        depth,
        parent,
        index,
        edges,
    })
}

#[derive(Clone, Copy, Debug)]
struct Step {
    tail: usize,
    head: usize,
    gen: usize,
    sign: i8,
}

impl CayleyBall {
    pub fn oracle(&self) -> &Arc<Oracle> {
        &self.oracle
    }

    pub fn gens(&self) -> &[Word] {
        &self.gens
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().flatten().filter(|t| t.is_some()).count()
    }

    /// All edges `(v, j)` with both endpoints inside, in `(v, j)` order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeKey, usize)> + '_ {
        self.edges.iter().enumerate().flat_map(|(v, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(j, t)| t.map(|t| ((v, j), t)))
        })
    }

    pub fn target(&self, e: EdgeKey) -> Option<usize> {
        self.edges.get(e.0)?.get(e.1).copied().flatten()
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Index of the vertex equal to `w` in the group, if inside the ball.
    pub fn vertex_of(&self, w: &Word) -> Result<Option<usize>> {
        Ok(self.index.get(&self.oracle.nf_word(w)?).copied())
    }

    /// Index of the generator whose value is the single letter `g`.
    fn gen_position(&self, g: &Gen) -> Result<usize> {
        let letter = Word::gen(g.clone());
        self.gens
            .iter()
            .position(|x| *x == letter)
            .ok_or_else(|| Error::UnknownGenerator(g.clone()))
    }

    /// Shortest path from the identity to `v`, as a word in the generators.
    pub fn path_word(&self, v: usize) -> Word {
        let mut steps = Vec::new();
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            steps.push(p);
            cur = p.vertex;
        }
        let mut out = Word::identity();
        for p in steps.iter().rev() {
            out.push_word(&self.gens[p.gen].pow(&IBig::from(p.sign)));
        }
        out
    }

    /// Signed edge path traced by `w` from the identity.
    pub fn lift_word(&self, w: &Word) -> Result<EdgeChain> {
        let letters = w
            .letters(1 << 24)
            .ok_or_else(|| Error::InvalidArgument("word too long to lift".into()))?;
        let mut chain = EdgeChain::zero();
        let mut v = 0usize;
        let mut prefix = Word::identity();
        for (g, sign) in letters {
            let j = self.gen_position(&g)?;
            prefix.push(g.clone(), IBig::from(sign));
            if sign > 0 {
                let t = self
                    .target((v, j))
                    .ok_or_else(|| Error::BallExceeded(prefix.clone()))?;
                chain.add_edge((v, j), IBig::one());
                v = t;
            } else {
                let u = self
                    .vertex_of(&prefix)?
                    .ok_or_else(|| Error::BallExceeded(prefix.clone()))?;
                if self.target((u, j)) != Some(v) {
                    return Err(Error::BallExceeded(prefix.clone()));
                }
                chain.add_edge((u, j), -IBig::one());
                v = u;
            }
        }
        Ok(chain)
    }

    /// `Σ c·(target − source)` as a vertex-indexed map without zeros.
    pub fn boundary(&self, c: &EdgeChain) -> BTreeMap<usize, IBig> {
        let mut out: BTreeMap<usize, IBig> = BTreeMap::new();
        for (&(v, j), k) in c.coeffs() {
            let t = self.target((v, j)).expect("chain edges lie in the ball");
            *out.entry(t).or_default() += k;
            *out.entry(v).or_default() -= k;
        }
        out.retain(|_, k| !k.is_zero());
        out
    }

    pub fn is_cycle(&self, c: &EdgeChain) -> bool {
        self.boundary(c).is_empty()
    }

    /// Left translate of a chain by the group element `g`.
    pub fn translate(&self, c: &EdgeChain, g: &Word) -> Result<EdgeChain> {
        let mut out = EdgeChain::zero();
        for (&(v, j), k) in c.coeffs() {
            let moved = g.mul(&self.vertices[v]);
            let u = self
                .vertex_of(&moved)?
                .ok_or_else(|| Error::SupportOutsideBall(moved.clone()))?;
            if self.target((u, j)).is_none() {
                return Err(Error::SupportOutsideBall(moved));
            }
            out.add_edge((u, j), k.clone());
        }
        Ok(out)
    }

    /// Puts the coefficient of `h` in `∂r/∂g_j` on the edge `(h, g_j)`.
    pub fn fox_to_chain(&self, v: &FoxVector) -> Result<EdgeChain> {
        let mut out = EdgeChain::zero();
        for (g, d) in v.components() {
            if d.is_zero() {
                continue;
            }
            if !Arc::ptr_eq(d.oracle(), &self.oracle) && **d.oracle() != *self.oracle {
                return Err(Error::OracleMismatch);
            }
            let j = self.gen_position(g)?;
            for (h, c) in d.terms() {
                let u = self
                    .index
                    .get(h)
                    .copied()
                    .ok_or_else(|| Error::SupportOutsideBall(h.clone()))?;
                if self.target((u, j)).is_none() {
                    return Err(Error::SupportOutsideBall(h.clone()));
                }
                out.add_edge((u, j), c.clone());
            }
        }
        Ok(out)
    }

    /// Inverse of [`CayleyBall::fox_to_chain`]: one group-ring element per
    /// generator letter.
    pub fn chain_to_fox(&self, c: &EdgeChain) -> Result<BTreeMap<Gen, GroupRingElt>> {
        let mut out = BTreeMap::new();
        for (j, g) in self.gens.iter().enumerate() {
            let letter = match g.syllables() {
                [s] if s.exp.is_one() => s.gen.clone(),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "{g} is not a single letter"
                    )))
                }
            };
            let terms = c
                .coeffs()
                .iter()
                .filter(|((_, k), _)| *k == j)
                .map(|(&(v, _), coef)| (coef.clone(), self.vertices[v].clone()));
            out.insert(letter, GroupRingElt::from_terms(&self.oracle, terms)?);
        }
        Ok(out)
    }

    /// Single-letter generator names, in generator order.
    pub fn letters(&self) -> Result<Vec<Gen>> {
        self.gens
            .iter()
            .map(|g| match g.syllables() {
                [s] if s.exp.is_one() => Ok(s.gen.clone()),
                _ => Err(Error::InvalidArgument(format!(
                    "{g} is not a single letter"
                ))),
            })
            .collect()
    }

    /// Splits a cycle into closed walks `P_j` and returns pairs `(f_j, s_j)`
    /// where `f_j` is the shortest path to the start of `P_j` and `s_j`
    /// spells `P_j`. Walks start at the first unused arc in edge order and
    /// always leave through the first unused arc; the identity
    /// `Σ F(f_j s_j f_j⁻¹) = c` is checked before returning.
    pub fn cycle_to_relators(&self, c: &EdgeChain) -> Result<Vec<(Word, Word)>> {
        if !self.is_cycle(c) {
            return Err(Error::NotACycle);
        }
        let letters = self.letters()?;
        let mut arcs: Vec<Step> = Vec::new();
        for (&(v, j), k) in c.coeffs() {
            let t = self.target((v, j)).expect("chain edges lie in the ball");
            let n = usize::try_from(&k.abs())
                .map_err(|_| Error::InvalidArgument("coefficient too large".into()))?;
            let arc = if k.is_positive() {
                Step {
                    tail: v,
                    head: t,
                    gen: j,
                    sign: 1,
                }
            } else {
                Step {
                    tail: t,
                    head: v,
                    gen: j,
                    sign: -1,
                }
            };
            arcs.extend(std::iter::repeat_n(arc, n));
        }
        arcs.sort_by_key(|a| (a.tail, a.gen, a.sign, a.head));
        let mut out_arcs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, a) in arcs.iter().enumerate() {
            out_arcs.entry(a.tail).or_default().push(i);
        }
        let mut next_out: BTreeMap<usize, usize> = BTreeMap::new();
        let mut used = vec![false; arcs.len()];
        let mut take = |v: usize, used: &mut Vec<bool>| -> Option<usize> {
            let list = out_arcs.get(&v)?;
            let pos = next_out.entry(v).or_insert(0);
            while *pos < list.len() && used[list[*pos]] {
                *pos += 1;
            }
            let i = *list.get(*pos)?;
            used[i] = true;
            Some(i)
        };
        let mut pairs = Vec::new();
        for first in 0..arcs.len() {
            if used[first] {
                continue;
            }
            let start = arcs[first].tail;
            let mut word = Word::identity();
            let mut v = start;
            loop {
                let i = take(v, &mut used).ok_or(Error::NotACycle)?;
                let a = arcs[i];
                word.push(letters[a.gen].clone(), IBig::from(a.sign));
                v = a.head;
                if v == start {
                    break;
                }
            }
            pairs.push((self.path_word(start), word));
        }
        let mut total = EdgeChain::zero();
        for (f, s) in &pairs {
            let rel = s.conj(f);
            total = total.add(&self.fox_to_chain(&fox_vector(&rel, &letters, &self.oracle)?)?);
        }
        if total != *c {
            return Err(Error::DecompositionMismatch);
        }
        Ok(pairs)
    }

    pub fn stats(&self) -> String {
        format!(
            "vertices: {}\nedges: {}\nradius: {}\n",
            self.vertex_count(),
            self.edge_count(),
            self.radius
        )
    }

    /// Graphviz text with vertices labelled by their normal forms.
    pub fn dot(&self) -> String {
        let mut s = String::from("digraph cayley {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{v}\"];");
        }
        for ((v, j), t) in self.edges() {
            let _ = writeln!(s, "  v{v} -> v{t} [label=\"{}\"];", self.gens[j]);
        }
        s.push_str("}\n");
        s
    }

    /// Human-readable listing of a chain, one edge per line.
    pub fn describe_chain(&self, c: &EdgeChain) -> String {
        let mut s = String::new();
        for (&(v, j), k) in c.coeffs() {
            let _ = writeln!(s, "{k} * ({}, {})", self.vertices[v], self.gens[j]);
        }
        s
    }
}
