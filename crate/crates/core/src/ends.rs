//! Balls in the coset graph of a subgroup `L`, with vertices the left cosets
//! `gL` and edges `(gL, gxL)` for generators `x`, and the end-counting and
//! boundary statistics built on them.
//!
//! A ball of radius `r` is the image of the Cayley ball: its vertices are the
//! cosets meeting the words of length `<= r`, and its edges are the pairs
//! `(gL, gxL)` between them realized by some `g` of length `<= r`. When `L`
//! is not normal a vertex may have infinitely many neighbours, so edges only
//! realized by longer `g` are not listed.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::baumslag_solitar::{Bs, Y};
use crate::error::{Error, Result};
use crate::groups::ElementKey;
use crate::subgroups::{CosetKey, CosetSet, Side, SubgroupHandle};
use crate::truth::Truth;
use crate::words::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub generator: u32,
    /// Smallest radius at which the edge is realized.
    pub depth: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BallElement {
    pub word: Word,
    pub depth: usize,
    pub vertex: usize,
}

#[derive(Clone, Debug)]
pub struct CosetGraphBall {
    pub radius: usize,
    pub generators: Vec<u32>,
    /// First-discovered word of each coset.
    pub vertices: Vec<Word>,
    pub depth: Vec<usize>,
    pub edges: Vec<Edge>,
    pub elements: Vec<BallElement>,
    /// `neighbors[e][i]`: the element `g * letters[i]` when it lies in the ball.
    neighbors: Vec<Vec<Option<usize>>>,
    letters: Vec<Letter>,
    subgroup: SubgroupHandle,
}

pub fn coset_graph_ball(l: &SubgroupHandle, generators: &[u32], radius: usize) -> Result<CosetGraphBall> {
    let ctx = l.context().clone();
    let letters: Vec<Letter> = generators.iter().flat_map(|&g| [Letter::pos(g), Letter::neg(g)]).collect();
    let mut element_index: HashMap<ElementKey, usize> = HashMap::new();
    let mut vertex_index: HashMap<CosetKey, usize> = HashMap::new();
    let mut ball = CosetGraphBall {
        radius,
        generators: generators.to_vec(),
        vertices: Vec::new(),
        depth: Vec::new(),
        edges: Vec::new(),
        elements: Vec::new(),
        neighbors: Vec::new(),
        letters: letters.clone(),
        subgroup: l.clone(),
    };

    let mut add = |ball: &mut CosetGraphBall,
                   element_index: &mut HashMap<ElementKey, usize>,
                   w: Word,
                   depth: usize|
     -> Result<usize> {
        let key = ctx.element_key(&w).ok_or(Error::OracleUnknown)?;
        let coset = l.left_coset_key(&w).ok_or(Error::OracleUnknown)?;
        let vertex = *vertex_index.entry(coset).or_insert_with(|| {
            ball.vertices.push(w.clone());
            ball.depth.push(depth);
            ball.vertices.len() - 1
        });
        ball.elements.push(BallElement { word: w, depth, vertex });
        ball.neighbors.push(vec![None; letters.len()]);
        element_index.insert(key, ball.elements.len() - 1);
        Ok(ball.elements.len() - 1)
    };

    add(&mut ball, &mut element_index, Word::identity(), 0)?;
    let mut next = 0;
    while next < ball.elements.len() {
        let (w, depth) = (ball.elements[next].word.clone(), ball.elements[next].depth);
        for (i, &letter) in letters.iter().enumerate() {
            let mut u = w.clone();
            u.push(letter);
            let key = ctx.element_key(&u).ok_or(Error::OracleUnknown)?;
            let target = match element_index.get(&key) {
                Some(&t) => Some(t),
                None if depth < radius => Some(add(&mut ball, &mut element_index, u, depth + 1)?),
                None => None,
            };
            ball.neighbors[next][i] = target;
        }
        next += 1;
    }

    let mut edges: HashMap<(usize, usize, u32), usize> = HashMap::new();
    for (e, el) in ball.elements.iter().enumerate() {
        for (i, letter) in letters.iter().enumerate() {
            if letter.inverse {
                continue;
            }
            let to = match ball.neighbors[e][i] {
                Some(t) => ball.elements[t].vertex,
                None => {
                    let mut u = el.word.clone();
                    u.push(*letter);
                    match vertex_index.get(&l.left_coset_key(&u).ok_or(Error::OracleUnknown)?) {
                        Some(&v) => v,
                        None => continue,
                    }
                }
            };
            let d = el.depth.max(ball.depth[to]);
            let slot = edges.entry((el.vertex, to, letter.generator)).or_insert(d);
            *slot = (*slot).min(d);
        }
    }
    ball.edges = edges.into_iter().map(|((from, to, generator), depth)| Edge { from, to, generator, depth }).collect();
    ball.edges.sort();
    Ok(ball)
}

impl CosetGraphBall {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn subgroup(&self) -> &SubgroupHandle {
        &self.subgroup
    }

    /// Vertices of the sub-ball of radius `r`.
    pub fn vertices_within(&self, r: usize) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.depth[v] <= r).collect()
    }

    pub fn edges_within(&self, r: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.depth <= r)
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::<usize>::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.from, e.to);
        }
        (0..self.vertices.len()).all(|v| uf.equiv(0, v))
    }

    /// The element `g * x^sign` when it lies in the ball.
    pub fn neighbor(&self, element: usize, l: Letter) -> Option<usize> {
        let i = self.letters.iter().position(|&m| m == l)?;
        self.neighbors[element][i]
    }

    pub fn to_dot(&self) -> String {
        let ctx = self.subgroup.context();
        let mut graph = petgraph::Graph::<String, String>::new();
        let nodes: Vec<_> = self
            .vertices
            .iter()
            .map(|w| {
                let rep = if w.is_empty() { "1".to_string() } else { ctx.show(w) };
                graph.add_node(format!("{rep} L"))
            })
            .collect();
        for e in &self.edges {
            let name = ctx.names().get(e.generator as usize).cloned().unwrap_or_else(|| format!("x{}", e.generator));
            graph.add_edge(nodes[e.from], nodes[e.to], name);
        }
        format!("{}", petgraph::dot::Dot::new(&graph))
    }
}

/// A set of vertices of a ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    pub members: BTreeSet<usize>,
}

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        VertexSet { members: members.into_iter().collect() }
    }

    pub fn all(ball: &CosetGraphBall) -> Self {
        VertexSet::new(0..ball.vertex_count())
    }

    /// Vertices whose representative satisfies `pred`.
    pub fn from_predicate(ball: &CosetGraphBall, pred: impl Fn(&Word) -> bool) -> Self {
        VertexSet::new((0..ball.vertex_count()).filter(|&v| pred(&ball.vertices[v])))
    }

    pub fn complement(&self, ball: &CosetGraphBall) -> Self {
        VertexSet::new((0..ball.vertex_count()).filter(|v| !self.members.contains(v)))
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }
}

pub fn boundary_edges(b: &VertexSet, ball: &CosetGraphBall) -> Vec<Edge> {
    ball.edges.iter().filter(|e| b.contains(e.from) != b.contains(e.to)).copied().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnulusCount {
    pub inner: usize,
    pub outer: usize,
    pub components: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EndsReport {
    pub radii: Vec<usize>,
    pub counts: Vec<AnnulusCount>,
    pub stabilized: bool,
    /// Outer radius from which the count stays at `estimate`.
    pub stable_from: Option<usize>,
    pub estimate: usize,
    pub vertices: usize,
}

/// Components of `ball(r) \ ball(r')` meeting the sphere of radius `r`, for
/// consecutive radii `r' < r` of the schedule.
pub fn ends_estimate(l: &SubgroupHandle, generators: &[u32], radii: &[usize]) -> Result<EndsReport> {
    if radii.len() < 2 || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("radii must be strictly increasing, at least two".into()));
    }
    let ball = coset_graph_ball(l, generators, *radii.last().unwrap())?;
    let counts: Vec<AnnulusCount> = radii
        .windows(2)
        .map(|w| AnnulusCount { inner: w[0], outer: w[1], components: annulus_components(&ball, w[0], w[1]) })
        .collect();
    let last = counts.last().unwrap().components;
    let run = counts.iter().rev().take_while(|c| c.components == last).count();
    let stabilized = run >= 2;
    Ok(EndsReport {
        radii: radii.to_vec(),
        stable_from: stabilized.then(|| counts[counts.len() - run].outer),
        counts,
        stabilized,
        estimate: last,
        vertices: ball.vertex_count(),
    })
}

fn annulus_components(ball: &CosetGraphBall, inner: usize, outer: usize) -> usize {
    let inside = |v: usize| ball.depth[v] > inner && ball.depth[v] <= outer;
    let mut uf = UnionFind::<usize>::new(ball.vertex_count());
    for e in ball.edges_within(outer) {
        if inside(e.from) && inside(e.to) {
            uf.union(e.from, e.to);
        }
    }
    let roots: BTreeSet<usize> =
        (0..ball.vertex_count()).filter(|&v| ball.depth[v] == outer).map(|v| uf.find(v)).collect();
    roots.len()
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReport {
    pub radii: Vec<usize>,
    /// Coset-level edges `(gL, gxL)` with exactly one endpoint in `B`.
    pub boundary_counts: Vec<usize>,
    /// Number of cosets in `Y` met by the ball.
    pub y_sizes: Vec<usize>,
    pub contained_in_y: bool,
    /// Every coset met by the ball lies entirely inside or outside `B`.
    pub saturated: bool,
    /// First radius of the final constant run of boundary counts.
    pub stable_from: Option<usize>,
    /// The counts end in a constant run of length at least two and never exceed it.
    pub bounded: bool,
}

/// `B` is given on elements; `Y` is the `L`-saturation of the union of
/// `B + Bx^-1` and `B + Bx` over generators `x`, restricted to the ball.
pub fn boundary_check(ball: &CosetGraphBall, in_b: impl Fn(&Word) -> bool) -> BoundaryReport {
    let member: Vec<bool> = ball.elements.iter().map(|e| in_b(&e.word)).collect();
    let mut vertex_side: Vec<Option<bool>> = vec![None; ball.vertex_count()];
    let mut saturated = true;
    for (e, el) in ball.elements.iter().enumerate() {
        match vertex_side[el.vertex] {
            None => vertex_side[el.vertex] = Some(member[e]),
            Some(s) => saturated &= s == member[e],
        }
    }

    let mut report = BoundaryReport {
        radii: (1..=ball.radius).collect(),
        boundary_counts: Vec::new(),
        y_sizes: Vec::new(),
        contained_in_y: true,
        saturated,
        stable_from: None,
        bounded: true,
    };
    for r in 1..=ball.radius {
        let mut y: BTreeSet<usize> = BTreeSet::new();
        let mut boundary: BTreeSet<(usize, usize, u32)> = BTreeSet::new();
        for (e, el) in ball.elements.iter().enumerate().filter(|(_, el)| el.depth <= r) {
            for &x in &ball.generators {
                for l in [Letter::pos(x), Letter::neg(x)] {
                    let mut u = el.word.clone();
                    u.push(l);
                    if in_b(&u) != member[e] {
                        y.insert(el.vertex);
                    }
                }
                if let Some(t) = ball.neighbor(e, Letter::pos(x)).filter(|&t| ball.elements[t].depth <= r) {
                    if member[e] != member[t] {
                        boundary.insert((el.vertex, ball.elements[t].vertex, x));
                    }
                }
            }
        }
        report.contained_in_y &= boundary.iter().all(|(a, b, _)| y.contains(a) && y.contains(b));
        report.boundary_counts.push(boundary.len());
        report.y_sizes.push(y.len());
    }
    let c = &report.boundary_counts;
    let last = *c.last().unwrap_or(&0);
    let run = c.iter().rev().take_while(|&&x| x == last).count();
    report.stable_from = (run >= 2).then(|| report.radii[c.len() - run]);
    report.bounded = run >= 2 && c.iter().all(|&x| x <= last);
    report
}

/// The side of the Bass-Serre edge `e = [<x>, y<x>]` containing `g y <x>`:
/// true when the normal form of `g y` begins with `y`. Invariant under right
/// multiplication by `<x^m>`, the stabilizer of `e`.
pub fn bs_edge_side(bs: Bs, g: &Word) -> bool {
    let mut u = g.clone();
    u.push(Letter::pos(Y));
    bs.reduce(&u).syllables().first() == Some(&(0, 1))
}

/// Whether a finite union of left cosets of `H` is closed under left
/// multiplication by `H`, i.e. is a union of double cosets `HgH`. Closure is
/// tested on the generators of `H` and the members of `H` within the Cayley
/// ball of radius `ball_radius`.
pub fn double_coset_membership(b: &CosetSet, ball_radius: usize) -> Truth {
    if b.side != Side::Left {
        return Truth::Unknown;
    }
    let h = &b.base;
    let gens = h.context().search_generators();
    let mut hs: Vec<Word> = h.generators().iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    for w in crate::words::ball_words(&gens, ball_radius) {
        match h.contains(&w) {
            Truth::True => hs.push(w),
            Truth::False => {}
            Truth::Unknown => return Truth::Unknown,
        }
    }
    let mut verdict = Truth::True;
    for s in &hs {
        for g in &b.representatives {
            let sg = s.mul(g);
            let mut found = Truth::False;
            for r in &b.representatives {
                match h.same_left_coset(r, &sg) {
                    Truth::True => {
                        found = Truth::True;
                        break;
                    }
                    Truth::Unknown => found = Truth::Unknown,
                    Truth::False => {}
                }
            }
            if found.is_false() {
                return Truth::False;
            }
            verdict = verdict & found;
        }
    }
    verdict
}

/// `HgH` as a union of left cosets, by closing `{gH}` under left
/// multiplication by the generators of `H`.
pub fn double_coset(h: &SubgroupHandle, g: &Word, limit: usize) -> Result<CosetSet> {
    let mut reps = vec![g.clone()];
    let mut keys: BTreeSet<CosetKey> = BTreeSet::new();
    keys.insert(h.left_coset_key(g).ok_or(Error::OracleUnknown)?);
    let moves: Vec<Word> = h.generators().iter().flat_map(|s| [s.clone(), s.inverse()]).collect();
    let mut next = 0;
    while next < reps.len() {
        let r = reps[next].clone();
        for s in &moves {
            let t = s.mul(&r);
            if keys.insert(h.left_coset_key(&t).ok_or(Error::OracleUnknown)?) {
                if reps.len() == limit {
                    return Err(Error::OracleUnknown);
                }
                reps.push(t);
            }
        }
        next += 1;
    }
    CosetSet::new(h.clone(), reps, Side::Left)
}

/// Text table of an [`EndsReport`].
pub fn format_ends(report: &EndsReport) -> String {
    let mut out = String::from("inner outer components\n");
    for c in &report.counts {
        let _ = writeln!(out, "{:>5} {:>5} {:>10}", c.inner, c.outer, c.components);
    }
    let _ = writeln!(out, "estimate {} (stabilized: {})", report.estimate, report.stabilized);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baumslag_solitar::BS23;
    use crate::groups::preset;

    fn sub(group: &str, gens: &[&str]) -> SubgroupHandle {
        let ctx = preset(group).unwrap();
        let g = gens.iter().map(|g| ctx.parse_word(g).unwrap()).collect();
        SubgroupHandle::new(&ctx, g)
    }

    #[test]
    fn small_balls() {
        let ball = coset_graph_ball(&sub("zn(1)", &[]), &[0], 3).unwrap();
        assert_eq!(ball.vertex_count(), 7);
        assert_eq!(ball.edges.len(), 6);
        assert!(ball.is_connected());

        let ball = coset_graph_ball(&sub("zn(2)", &["u"]), &[0, 1], 2).unwrap();
        assert_eq!(ball.vertex_count(), 5);
        let loops = ball.edges.iter().filter(|e| e.from == e.to).count();
        assert_eq!(loops, 5);
        assert_eq!(ball.edges.len(), 9);
    }

    #[test]
    fn estimates() {
        let r: Vec<usize> = (1..=20).collect();
        let e = ends_estimate(&sub("zn(1)", &[]), &[0], &r).unwrap();
        assert_eq!(e.estimate, 2);
        assert!(e.stabilized && e.stable_from.unwrap() <= 3);
        assert!(e.counts.iter().all(|c| c.components == 2));

        let e = ends_estimate(&sub("zn(2)", &[]), &[0, 1], &[2, 4, 6, 8]).unwrap();
        assert_eq!((e.estimate, e.stabilized), (1, true));
        let e = ends_estimate(&sub("zn(2)", &["u"]), &[0, 1], &[2, 4, 6, 8]).unwrap();
        assert_eq!((e.estimate, e.stabilized), (2, true));
    }

    #[test]
    fn boundaries() {
        let ball = coset_graph_ball(&sub("zn(1)", &[]), &[0], 3).unwrap();
        assert!(boundary_edges(&VertexSet::all(&ball), &ball).is_empty());
        assert_eq!(boundary_edges(&VertexSet::new([0]), &ball).len(), 2);

        let l = sub("zn(2)", &["u"]);
        for radius in 1..5 {
            let ball = coset_graph_ball(&l, &[0, 1], radius).unwrap();
            let b = VertexSet::from_predicate(&ball, |w| w.exponent_vector(2)[1] > 0);
            let edges = boundary_edges(&b, &ball);
            assert_eq!(edges.len(), 1);
            assert!(ball.vertices[edges[0].from].is_empty());
            assert_eq!(boundary_edges(&b.complement(&ball), &ball), edges);
        }
    }

    #[test]
    fn boundary_fixtures() {
        let ball = coset_graph_ball(&sub("zn(2)", &["u"]), &[0, 1], 4).unwrap();
        let everything = boundary_check(&ball, |_| true);
        assert!(everything.contained_in_y && everything.boundary_counts.iter().all(|&c| c == 0));
        assert!(everything.y_sizes.iter().all(|&c| c == 0));

        let half = boundary_check(&ball, |w| w.exponent_vector(2)[1] > 0);
        assert!(half.contained_in_y && half.saturated);
        assert!(half.boundary_counts.iter().all(|&c| c == 1));
        assert!(half.y_sizes.iter().all(|&c| c == 2));

        let ball = coset_graph_ball(&sub("bs(2,3)", &["x^2"]), &[0, 1], 8).unwrap();
        let side = boundary_check(&ball, |w| bs_edge_side(BS23, w));
        assert!(side.saturated && side.contained_in_y && side.bounded, "{side:?}");
        assert_eq!(side.boundary_counts.last(), Some(&5));
        assert_eq!(side.stable_from, Some(3));
    }

    #[test]
    fn bs_split_has_two_sides() {
        let e = ends_estimate(&sub("bs(2,3)", &["x^2"]), &[0, 1], &[2, 4, 6, 8]).unwrap();
        assert!(e.estimate >= 2, "{e:?}");
    }

    #[test]
    fn double_cosets() {
        let h = sub("sym3", &["a"]);
        let ctx = h.context().clone();
        let one = CosetSet::new(h.clone(), vec![Word::identity()], Side::Left).unwrap();
        assert_eq!(double_coset_membership(&one, 3), Truth::True);
        let b = ctx.parse_word("b").unwrap();
        let single = CosetSet::new(h.clone(), vec![b.clone()], Side::Left).unwrap();
        assert_eq!(double_coset_membership(&single, 3), Truth::False);
        let full = double_coset(&h, &b, 10).unwrap();
        assert_eq!(full.representatives.len(), 2);
        assert_eq!(double_coset_membership(&full, 3), Truth::True);
    }

    #[test]
    fn dot_output() {
        let ball = coset_graph_ball(&sub("zn(1)", &[]), &[0], 1).unwrap();
        let dot = ball.to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("->").count(), 2);
    }
}
