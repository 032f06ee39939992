//! Finite truncations of subgroup families, the admissibility and stability
//! axioms, fixed points and derivations.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::GroupContext;
use crate::linalg::{Matrix, Subspace, Vector};
use crate::modules::FiniteModule;
use crate::subgroups::{conjugate, intersect, SubgroupHandle};
use crate::truth::Truth;
use crate::words::{Letter, Word};

/// A finite poset of subgroups standing in for a family.
///
/// Node order, conjugation action and normality are computed once and only
/// recorded when certified by the membership oracles.
#[derive(Clone, Debug)]
pub struct FamilyTruncation {
    ctx: Arc<GroupContext>,
    nodes: Vec<SubgroupHandle>,
    /// `below[i][j]`: node `i` is certified contained in node `j`.
    below: Vec<Vec<bool>>,
    /// `conj[i][column]`: the node equal to `H_i^l` for the letter in that column.
    conj: Vec<Vec<Option<usize>>>,
    /// `normal[i][j]`: node `i` is certified normal in node `j` (and contained in it).
    normal: Vec<Vec<bool>>,
}

impl FamilyTruncation {
    /// Rejects repeated subgroups. Conjugation is taken by the search
    /// generators of the context and their inverses.
    pub fn new(ctx: &Arc<GroupContext>, nodes: Vec<SubgroupHandle>) -> Result<Self> {
        let n = nodes.len();
        for i in 0..n {
            for j in 0..i {
                if nodes[i].same_subgroup(&nodes[j]).is_true() {
                    return Err(Error::DuplicateNode(j, i));
                }
            }
        }
        let below: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| i == j || nodes[j].contains_subgroup(&nodes[i]).is_true()).collect())
            .collect();
        let letters: Vec<Letter> =
            ctx.search_generators().iter().flat_map(|&g| [Letter::pos(g), Letter::neg(g)]).collect();
        let conj = nodes
            .iter()
            .map(|h| {
                let mut row = vec![None; letters.len()];
                for &l in &letters {
                    let c = conjugate(h, &Word::letter(l));
                    row[l.column()] = nodes.iter().position(|k| k.same_subgroup(&c).is_true());
                }
                row
            })
            .collect();
        let normal = (0..n)
            .map(|i| (0..n).map(|j| below[i][j] && is_normal_in(&nodes[i], &nodes[j]).is_true()).collect())
            .collect();
        Ok(FamilyTruncation { ctx: ctx.clone(), nodes, below, conj, normal })
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    pub fn nodes(&self) -> &[SubgroupHandle] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_below(&self, small: usize, large: usize) -> bool {
        self.below[small][large]
    }

    pub fn is_normal_in(&self, small: usize, large: usize) -> bool {
        self.normal[small][large]
    }

    /// The node `H^l`, when it is in the truncation.
    pub fn conjugate_node(&self, node: usize, l: Letter) -> Option<usize> {
        self.conj[node].get(l.column()).copied().flatten()
    }

    /// The node `H^g`, following the action letter by letter.
    pub fn conjugate_node_by(&self, node: usize, g: &Word) -> Option<usize> {
        g.letters().iter().try_fold(node, |n, &l| self.conjugate_node(n, l))
    }

    /// Certified `(small, large)` inclusions, including `(i, i)`.
    pub fn order_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self.below[i][j]).collect()
    }

    /// Nodes with no other node certified strictly below them.
    pub fn minimal_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !(0..self.len()).any(|j| j != i && self.below[j][i])).collect()
    }

    /// Index in the ambient group, when the node has a coset table.
    pub fn node_index(&self, node: usize) -> Option<usize> {
        self.nodes[node].coset_table().map(|t| t.count())
    }
}

/// `L ⊴ H`: `h^-1 l h` and `h l h^-1` in `L` for generators of both. Needs
/// complete generator lists (coset tables supply Schreier generators).
pub fn is_normal_in(l: &SubgroupHandle, h: &SubgroupHandle) -> Truth {
    let gens = |s: &SubgroupHandle| -> Option<Vec<Word>> {
        if s.generators_complete() {
            Some(s.generators().to_vec())
        } else {
            s.coset_table().map(|t| t.schreier_generators())
        }
    };
    let (Some(lg), Some(hg)) = (gens(l), gens(h)) else { return Truth::Unknown };
    let contained = Truth::all(lg.iter().map(|g| h.contains(g)));
    let stable = Truth::all(hg.iter().flat_map(|x| {
        lg.iter()
            .flat_map(move |g| [g.conjugate(x), g.conjugate(&x.inverse())])
            .map(|w| l.contains(&w))
            .collect::<Vec<_>>()
    }));
    contained & stable
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub conjugation_closed: bool,
    pub downward_directed: bool,
    pub violations: Vec<String>,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.conjugation_closed && self.downward_directed
    }
}

pub fn check_admissible(fam: &FamilyTruncation) -> AdmissibilityReport {
    let mut violations = Vec::new();
    let ctx = &fam.ctx;
    for (i, row) in fam.conj.iter().enumerate() {
        for (col, target) in row.iter().enumerate() {
            if target.is_none() {
                let l = Word::letter(Letter::from_column(col));
                violations.push(format!("node {i} conjugated by {} is not a node", ctx.show(&l)));
            }
        }
    }
    let conjugation_closed = violations.is_empty();
    let n = fam.len();
    let mut downward_directed = true;
    for i in 0..n {
        for j in i + 1..n {
            if !(0..n).any(|k| fam.below[k][i] && fam.below[k][j]) {
                downward_directed = false;
                violations.push(format!("nodes {i} and {j} have no common lower bound"));
            }
        }
    }
    AdmissibilityReport { conjugation_closed, downward_directed, violations }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    /// `(k, h, l)`: `l <= k` with `l` normal in `h`, for each pair `k <= h`.
    pub witnesses: Vec<(usize, usize, usize)>,
    /// The first pair `k <= h` without such an `l`.
    pub failure: Option<(usize, usize)>,
}

pub fn check_stable(fam: &FamilyTruncation) -> StabilityReport {
    let mut witnesses = Vec::new();
    for (k, h) in fam.order_pairs() {
        let found = (0..fam.len())
            .find(|&l| fam.below[l][k] && fam.normal[l][h] && is_normal_in(&fam.nodes[l], &fam.nodes[h]).is_true());
        match found {
            Some(l) => witnesses.push((k, h, l)),
            None => return StabilityReport { stable: false, witnesses, failure: Some((k, h)) },
        }
    }
    StabilityReport { stable: true, witnesses, failure: None }
}

/// Generators used to compute the fixed space of a node.
fn node_generators(node: &SubgroupHandle) -> Result<Vec<Word>> {
    if node.generators_complete() {
        Ok(node.generators().to_vec())
    } else if let Some(t) = node.coset_table() {
        Ok(t.schreier_generators())
    } else {
        Err(Error::Precondition(format!("node {node} has no finite generating set")))
    }
}

pub fn node_fixed_space(m: &FiniteModule, node: &SubgroupHandle) -> Result<Subspace> {
    Ok(m.fixed_by(&node_generators(node)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct H0Report {
    pub dim: usize,
    pub basis: Vec<Vector>,
    pub minimal_node: usize,
    /// Dimension of the fixed space of every node, in node order.
    pub node_dims: Vec<usize>,
    /// The subspace is closed under every generator matrix.
    pub invariant: bool,
}

/// The union of the fixed spaces `M^H`. Directedness makes it the fixed
/// space of the minimal node; every other node's fixed space is checked to
/// lie inside it.
pub fn h0_s(m: &FiniteModule, fam: &FamilyTruncation) -> Result<(Subspace, H0Report)> {
    let mins = fam.minimal_nodes();
    let &[minimal_node] = &mins[..] else {
        return Err(Error::Precondition(format!(
            "truncation has {} minimal nodes; it is not downward directed",
            mins.len()
        )));
    };
    let space = node_fixed_space(m, &fam.nodes[minimal_node])?;
    let mut node_dims = Vec::with_capacity(fam.len());
    for node in &fam.nodes {
        let f = node_fixed_space(m, node)?;
        if !space.contains_space(&f) {
            return Err(Error::Precondition("a node's fixed space escapes the minimal node's".into()));
        }
        node_dims.push(f.dim());
    }
    let invariant = m.is_submodule(&space);
    let report = H0Report { dim: space.dim(), basis: space.basis().to_vec(), minimal_node, node_dims, invariant };
    Ok((space, report))
}

/// `M^G` for a module of the subcategory, i.e. one equal to its own `h0_s`.
pub fn h0_g_mod_s(m: &FiniteModule, fam: &FamilyTruncation) -> Result<Subspace> {
    let (s, _) = h0_s(m, fam)?;
    if s.dim() != m.dim {
        return Err(Error::NotInSubcategory(format!("only {} of {} dimensions are fixed by a member", s.dim(), m.dim)));
    }
    Ok(m.fixed_by_group())
}

#[derive(Clone, Debug, Serialize)]
pub struct H1Report {
    pub der: usize,
    pub ider: usize,
    pub h1: usize,
    /// Basis of derivations: one vector `δ(x_i)` per generator.
    #[serde(skip)]
    pub basis: Vec<Vec<Vector>>,
}

/// Derivations `δ(gh) = δ(g)h + δ(h)` modulo inner ones `g -> m g - m`.
///
/// Each relator `r = l_1 ... l_k` gives the linear condition
/// `Σ_j δ(l_j) l_{j+1}...l_k = 0` with `δ(x^-1) = -δ(x) x^-1`.
pub fn h1_derivations(ctx: &GroupContext, m: &FiniteModule) -> Result<H1Report> {
    let n = ctx.generator_count().ok_or(Error::NeedsFinitePresentation)?;
    let (p, d) = (m.p, m.dim);
    let unknowns = n * d;
    let mut blocks = Vec::new();
    for r in &ctx.presentation.relators {
        // Coefficient block for each generator: nd x d.
        let mut coeff = vec![Matrix::zero(p, d, d); n];
        let letters = r.letters();
        for j in 0..letters.len() {
            let suffix = m.word_matrix(&Word::new(letters[j + 1..].to_vec()));
            let l = letters[j];
            let term = if l.inverse { m.word_matrix(&Word::letter(l)).mul(&suffix).scale(p - 1) } else { suffix };
            let g = l.generator as usize;
            coeff[g] = add(&coeff[g], &term);
        }
        blocks.push(Matrix::vconcat(&coeff));
    }
    let der_space =
        if blocks.is_empty() { Subspace::whole(p, unknowns) } else { Matrix::hconcat(&blocks).left_kernel() };
    let id = Matrix::identity(p, d);
    let inner: Vec<Vector> = (0..d)
        .map(|i| {
            let mut e = vec![0; d];
            e[i] = 1;
            m.matrices().iter().flat_map(|mx| mx.sub(&id).apply(&e)).collect()
        })
        .collect();
    let ider_space = Subspace::span(p, unknowns, &inner);
    debug_assert!(der_space.contains_space(&ider_space));
    let basis = der_space.basis().iter().map(|v| v.chunks(d.max(1)).map(<[u64]>::to_vec).take(n).collect()).collect();
    Ok(H1Report { der: der_space.dim(), ider: ider_space.dim(), h1: der_space.dim() - ider_space.dim(), basis })
}

fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.sub(&b.scale(a.p - 1))
}

/// `δ(w)` for the derivation with the given generator values, expanding the
/// word letter by letter.
pub fn derivation_value(m: &FiniteModule, values: &[Vector], w: &Word) -> Vector {
    let p = m.p;
    let mut acc = vec![0; m.dim];
    for &l in w.letters() {
        let step = Word::letter(l);
        // δ(u l) = δ(u) l + δ(l)
        let moved = m.act(&acc, &step);
        let dl: Vector = if l.inverse {
            m.act(&values[l.generator as usize], &step).iter().map(|x| (p - x) % p).collect()
        } else {
            values[l.generator as usize].clone()
        };
        acc = moved.iter().zip(&dl).map(|(a, b)| (a + b) % p).collect();
    }
    acc
}

/// Parses `;`-separated nodes of `,`-separated generator words; an empty
/// node or `1` is the trivial subgroup.
pub fn parse_nodes(ctx: &Arc<GroupContext>, text: &str) -> Result<Vec<SubgroupHandle>> {
    text.split(';')
        .map(|node| {
            let gens = node
                .split(',')
                .map(str::trim)
                .filter(|g| !g.is_empty() && *g != "1")
                .map(|g| ctx.parse_word(g))
                .collect::<Result<Vec<_>>>()?;
            Ok(SubgroupHandle::new(ctx, gens))
        })
        .collect()
}

/// Every subgroup generated by at most two elements of a finite group; for
/// the small fixtures this is every subgroup. Sorted by index, then by
/// generators.
pub fn small_subgroups(ctx: &Arc<GroupContext>) -> Result<Vec<SubgroupHandle>> {
    let elements = ctx.elements().ok_or(Error::NeedsFinitePresentation)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut candidates = vec![vec![]];
    for (i, a) in elements.iter().enumerate() {
        candidates.push(vec![a.clone()]);
        for b in &elements[..i] {
            candidates.push(vec![b.clone(), a.clone()]);
        }
    }
    for gens in candidates {
        let h = SubgroupHandle::new(ctx, gens);
        let t = h.coset_table().ok_or(Error::NeedsFinitePresentation)?;
        let label: Vec<u32> = (0..t.count())
            .flat_map(|c| (0..2 * t.generator_count()).map(move |col| (c, col)))
            .map(|(c, col)| t.act(c, Letter::from_column(col)) as u32)
            .collect();
        if seen.insert(label) {
            out.push(h);
        }
    }
    out.sort_by_key(|h| (h.coset_table().map(|t| t.count()), h.describe()));
    Ok(out)
}

/// Closes `seeds` under conjugation by generators and pairwise intersection,
/// for at most `depth` rounds.
pub fn grow_truncation(
    ctx: &Arc<GroupContext>,
    seeds: Vec<SubgroupHandle>,
    depth: usize,
) -> Result<Vec<SubgroupHandle>> {
    let mut nodes: Vec<SubgroupHandle> = Vec::new();
    let push = |nodes: &mut Vec<SubgroupHandle>, h: SubgroupHandle| {
        if !nodes.iter().any(|k| k.same_subgroup(&h).is_true()) {
            nodes.push(h);
        }
    };
    for s in seeds {
        push(&mut nodes, s);
    }
    let letters: Vec<Word> =
        ctx.search_generators().iter().flat_map(|&g| [Word::generator(g), Word::generator(g).inverse()]).collect();
    for _ in 0..depth {
        let before = nodes.len();
        let current = nodes.clone();
        for h in &current {
            for l in &letters {
                push(&mut nodes, conjugate(h, l));
            }
        }
        for (i, h) in current.iter().enumerate() {
            for k in &current[..i] {
                push(&mut nodes, intersect(h, k)?);
            }
        }
        if nodes.len() == before {
            break;
        }
    }
    Ok(nodes)
}

/// Named truncations of the built-in finite groups.
///
/// `all`: every subgroup (for groups whose subgroups are 2-generated);
/// `whole`: the group alone; `trivial-whole`: the trivial subgroup and the
/// group. For `sym3` also `normal-order3`, `order2-whole` (three order-2
/// subgroups and the group) and `order2-whole-trivial`; for `cyclic(4)`
/// also `order2`.
pub fn named_family(ctx: &Arc<GroupContext>, name: &str) -> Result<FamilyTruncation> {
    let unknown = || Error::UnknownFamily { group: ctx.name.clone(), family: name.to_string() };
    let nodes_of = |text: &str| parse_nodes(ctx, text);
    let nodes = match (ctx.name.as_str(), name) {
        (_, "all") => small_subgroups(ctx)?,
        (_, "whole") => vec![SubgroupHandle::whole(ctx)],
        (_, "trivial-whole") => vec![SubgroupHandle::whole(ctx), SubgroupHandle::trivial(ctx)],
        ("sym3", "normal-order3") => nodes_of("a b; a, b")?,
        ("sym3", "order2-whole") => nodes_of("a, b; a; b; a b a")?,
        ("sym3", "order2-whole-trivial") => nodes_of("a, b; a; b; a b a; 1")?,
        ("cyclic(4)", "order2") => nodes_of("a^2; a")?,
        _ => return Err(unknown()),
    };
    if ctx.regular_table().is_none() {
        return Err(unknown());
    }
    FamilyTruncation::new(ctx, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::preset;

    fn family(group: &str, name: &str) -> FamilyTruncation {
        named_family(&preset(group).unwrap(), name).unwrap()
    }

    #[test]
    fn sym3_has_six_subgroups() {
        let g = preset("sym3").unwrap();
        assert_eq!(small_subgroups(&g).unwrap().len(), 6);
        assert_eq!(small_subgroups(&preset("klein4").unwrap()).unwrap().len(), 5);
        assert_eq!(small_subgroups(&preset("cyclic(4)").unwrap()).unwrap().len(), 3);
    }

    #[test]
    fn admissibility() {
        assert!(check_admissible(&family("sym3", "all")).admissible());
        let r = check_admissible(&family("sym3", "order2-whole"));
        assert!(r.conjugation_closed);
        assert!(!r.downward_directed);
        assert!(check_admissible(&family("sym3", "normal-order3")).admissible());
        let g = preset("sym3").unwrap();
        let dup = FamilyTruncation::new(&g, parse_nodes(&g, "a; a^3").unwrap());
        assert!(matches!(dup, Err(Error::DuplicateNode(0, 1))));
    }

    #[test]
    fn stability() {
        assert!(check_stable(&family("sym3", "normal-order3")).stable);
        assert!(check_stable(&family("sym3", "all")).stable);
        assert!(check_stable(&family("sym3", "order2-whole-trivial")).stable);
        assert!(!check_stable(&family("sym3", "order2-whole")).stable);
    }

    #[test]
    fn fixed_points() {
        let g = preset("sym3").unwrap();
        let fam = family("sym3", "normal-order3");
        let reg = FiniteModule::regular(&g, 2).unwrap();
        let (s, report) = h0_s(&reg, &fam).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(report.invariant);
        assert!(matches!(h0_g_mod_s(&reg, &fam), Err(Error::NotInSubcategory(_))));
        let sub = reg.restrict(&g, &s).unwrap();
        assert_eq!(h0_g_mod_s(&sub, &fam).unwrap().dim(), 1);
        let triv = FiniteModule::trivial(&g, 2, 3).unwrap();
        assert_eq!(h0_s(&triv, &fam).unwrap().0.dim(), 3);
        let bottom = family("sym3", "trivial-whole");
        assert_eq!(h0_s(&reg, &bottom).unwrap().0.dim(), 6);
        assert_eq!(h0_g_mod_s(&reg, &bottom).unwrap().dim(), 1);
    }

    #[test]
    fn derivations() {
        let z = preset("zn(1)").unwrap();
        let r = h1_derivations(&z, &FiniteModule::trivial(&z, 2, 1).unwrap()).unwrap();
        assert_eq!((r.der, r.ider, r.h1), (1, 0, 1));
        let c2 = preset("cyclic(2)").unwrap();
        let r = h1_derivations(&c2, &FiniteModule::trivial(&c2, 2, 1).unwrap()).unwrap();
        assert_eq!(r.h1, 1);
        let r = h1_derivations(&c2, &FiniteModule::regular(&c2, 2).unwrap()).unwrap();
        assert_eq!(r.h1, 0);
        let s3 = preset("sym3").unwrap();
        let m = FiniteModule::regular(&s3, 3).unwrap();
        let r = h1_derivations(&s3, &m).unwrap();
        for delta in &r.basis {
            for rel in &s3.presentation.relators {
                assert!(derivation_value(&m, delta, rel).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn growth() {
        let g = preset("sym3").unwrap();
        let nodes = grow_truncation(&g, parse_nodes(&g, "a").unwrap(), 3).unwrap();
        // <a>, its two conjugates, and the trivial intersection
        assert_eq!(nodes.len(), 4);
    }
}
