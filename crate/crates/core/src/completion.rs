//! The completion of a group along a finite family truncation: compatible
//! choices of one right coset per node, with the twisted product.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{node_fixed_space, FamilyTruncation};
use crate::groups::{todd_coxeter, CosetTable, Presentation};
use crate::linalg::Vector;
use crate::modules::FiniteModule;
use crate::words::{Letter, Word};

pub const DEFAULT_CEILING: usize = 1_000_000;

/// One coset id per node, in node order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CompletionElement(pub Vec<u32>);

impl CompletionElement {
    pub fn coset(&self, node: usize) -> usize {
        self.0[node] as usize
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedCompletion {
    fam: Arc<FamilyTruncation>,
    tables: Vec<Arc<CosetTable>>,
    /// `(small, large, map)`: the projection of right cosets for each
    /// certified strict inclusion.
    projections: Vec<(usize, usize, Vec<u32>)>,
}

impl TruncatedCompletion {
    /// Needs a coset table at every node and a conjugation action that is
    /// total on nodes and generators.
    pub fn new(fam: Arc<FamilyTruncation>) -> Result<Self> {
        let mut tables = Vec::with_capacity(fam.len());
        for (i, node) in fam.nodes().iter().enumerate() {
            tables.push(node.coset_table().cloned().ok_or(Error::InfiniteNode { node: i })?);
        }
        let ctx = fam.context();
        for i in 0..fam.len() {
            for g in ctx.search_generators() {
                for l in [Letter::pos(g), Letter::neg(g)] {
                    if fam.conjugate_node(i, l).is_none() {
                        return Err(Error::NotConjugationClosed { node: i, letter: ctx.show(&Word::letter(l)) });
                    }
                }
            }
        }
        let projections = fam
            .order_pairs()
            .into_iter()
            .filter(|(s, l)| s != l)
            .map(|(s, l)| {
                let map = tables[s].representatives().iter().map(|r| tables[l].coset_of(r) as u32).collect();
                (s, l, map)
            })
            .collect();
        Ok(TruncatedCompletion { fam, tables, projections })
    }

    pub fn family(&self) -> &Arc<FamilyTruncation> {
        &self.fam
    }

    pub fn table(&self, node: usize) -> &CosetTable {
        &self.tables[node]
    }

    pub fn node_count(&self) -> usize {
        self.tables.len()
    }

    /// The stored representative of `f(H)`.
    pub fn representative(&self, f: &CompletionElement, node: usize) -> &Word {
        self.tables[node].representative(f.coset(node))
    }

    pub fn is_compatible(&self, f: &CompletionElement) -> bool {
        f.0.len() == self.node_count() && self.projections.iter().all(|(s, l, map)| map[f.coset(*s)] == f.0[*l])
    }

    pub fn check_compatible(&self, f: &CompletionElement) -> Result<()> {
        match self.projections.iter().find(|(s, l, map)| map[f.coset(*s)] != f.0[*l]) {
            Some(&(small, large, _)) => Err(Error::Incompatible { small, large }),
            None => Ok(()),
        }
    }

    pub fn identity(&self) -> CompletionElement {
        CompletionElement(vec![CosetTable::BASE as u32; self.node_count()])
    }

    /// `ĝ(H) = Hg`.
    pub fn embed(&self, g: &Word) -> CompletionElement {
        CompletionElement(self.tables.iter().map(|t| t.coset_of(g) as u32).collect())
    }

    /// `H^f = H^x` for the representative `x` of `f(H)`.
    pub fn conj_node(&self, node: usize, f: &CompletionElement) -> usize {
        let x = self.representative(f, node);
        self.fam.conjugate_node_by(node, x).expect("conjugation-closed truncation")
    }

    /// `(f f')(H) = f(H) f'(H^f)`, computed on representatives.
    pub fn multiply(&self, f: &CompletionElement, g: &CompletionElement) -> Result<CompletionElement> {
        let out = CompletionElement(
            (0..self.node_count())
                .map(|h| {
                    let x = self.representative(f, h);
                    let hf = self.conj_node(h, f);
                    let y = self.representative(g, hf);
                    self.tables[h].act_word(self.tables[h].coset_of(x), y) as u32
                })
                .collect(),
        );
        self.check_compatible(&out)?;
        Ok(out)
    }

    /// Inverse for stable families. For each `H`: `x` represents `f(H)`;
    /// `K` is the first node (by increasing index) with `K <= H ∩ H^f` and
    /// `K` normal in `H^f`; `t` represents `f(K^{x^-1})`; then
    /// `f^-1(H) = H t^-1`.
    pub fn invert_stable(&self, f: &CompletionElement) -> Result<CompletionElement> {
        let fam = &self.fam;
        let mut by_index: Vec<usize> = (0..self.node_count()).collect();
        by_index.sort_by_key(|&k| (self.tables[k].count(), k));
        let mut out = Vec::with_capacity(self.node_count());
        for h in 0..self.node_count() {
            let x = self.representative(f, h);
            let hf = self.conj_node(h, f);
            let k = by_index
                .iter()
                .copied()
                .find(|&k| fam.is_below(k, h) && fam.is_below(k, hf) && fam.is_normal_in(k, hf))
                .ok_or(Error::MissingNode { node: h })?;
            let kx = fam.conjugate_node_by(k, &x.inverse()).ok_or(Error::MissingNode { node: h })?;
            let t = self.representative(f, kx);
            out.push(self.tables[h].coset_of(&t.inverse()) as u32);
        }
        let inv = CompletionElement(out);
        self.check_compatible(&inv)?;
        Ok(inv)
    }

    /// `f^-1(H^f) = f(H)^-1`: the coset `H^f x^-1` where `f(H) = Hx`.
    pub fn inverse_condition_holds(&self, f: &CompletionElement, inv: &CompletionElement) -> bool {
        (0..self.node_count()).all(|h| {
            let x = self.representative(f, h);
            let hf = self.conj_node(h, f);
            inv.coset(hf) == self.tables[hf].coset_of(&x.inverse())
        })
    }

    /// Every compatible assignment, nodes filled from largest subgroup down.
    pub fn enumerate(&self, ceiling: usize) -> Result<Vec<CompletionElement>> {
        let n = self.node_count();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&k| (self.tables[k].count(), k));
        // constraints[k]: projections from node k to nodes filled earlier.
        let position: Vec<usize> = {
            let mut p = vec![0; n];
            for (i, &k) in order.iter().enumerate() {
                p[k] = i;
            }
            p
        };
        let mut constraints: Vec<Vec<(usize, &Vec<u32>)>> = vec![Vec::new(); n];
        let mut reverse: Vec<Vec<(usize, &Vec<u32>)>> = vec![Vec::new(); n];
        for (s, l, map) in &self.projections {
            if position[*l] < position[*s] {
                constraints[*s].push((*l, map));
            } else {
                reverse[*l].push((*s, map));
            }
        }
        let mut out = Vec::new();
        let mut current = vec![u32::MAX; n];
        self.fill(&order, 0, &mut current, &constraints, &reverse, &mut out, ceiling)?;
        out.sort();
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(
        &self,
        order: &[usize],
        depth: usize,
        current: &mut Vec<u32>,
        constraints: &[Vec<(usize, &Vec<u32>)>],
        reverse: &[Vec<(usize, &Vec<u32>)>],
        out: &mut Vec<CompletionElement>,
        ceiling: usize,
    ) -> Result<()> {
        if depth == order.len() {
            if out.len() >= ceiling {
                return Err(Error::TooLarge { ceiling });
            }
            out.push(CompletionElement(current.clone()));
            return Ok(());
        }
        let node = order[depth];
        for c in 0..self.tables[node].count() as u32 {
            let fits = constraints[node].iter().all(|&(l, map)| map[c as usize] == current[l])
                && reverse[node].iter().all(|&(s, map)| current[s] == u32::MAX || map[current[s] as usize] == c);
            if fits {
                current[node] = c;
                self.fill(order, depth + 1, current, constraints, reverse, out, ceiling)?;
                current[node] = u32::MAX;
            }
        }
        Ok(())
    }

    /// `m f = m x` for the first node `H` fixing `m` and the representative
    /// `x` of `f(H)`.
    pub fn act(&self, m: &[u64], f: &CompletionElement, module: &FiniteModule) -> Result<Vector> {
        let node = self.fixing_node(m, module)?;
        Ok(module.act(m, self.representative(f, node)))
    }

    /// Nodes whose fixed space contains `m`.
    pub fn fixing_nodes(&self, m: &[u64], module: &FiniteModule) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, node) in self.fam.nodes().iter().enumerate() {
            if node_fixed_space(module, node)?.contains(m) {
                out.push(i);
            }
        }
        Ok(out)
    }

    fn fixing_node(&self, m: &[u64], module: &FiniteModule) -> Result<usize> {
        self.fixing_nodes(m, module)?.first().copied().ok_or(Error::NoFixingNode)
    }
}

/// A product table over an enumerated completion.
#[derive(Clone, Debug)]
pub struct MultiplicationTable {
    pub elements: Vec<CompletionElement>,
    /// `product[i][j]`: index of `elements[i] * elements[j]`.
    pub product: Vec<Vec<usize>>,
    pub identity: usize,
}

impl MultiplicationTable {
    pub fn build(tc: &TruncatedCompletion, elements: Vec<CompletionElement>) -> Result<Self> {
        let index: HashMap<&CompletionElement, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut product = Vec::with_capacity(elements.len());
        for f in &elements {
            let mut row = Vec::with_capacity(elements.len());
            for g in &elements {
                let fg = tc.multiply(f, g)?;
                row.push(*index.get(&fg).ok_or_else(|| Error::Precondition("product left the element list".into()))?);
            }
            product.push(row);
        }
        let identity = index[&tc.identity()];
        Ok(MultiplicationTable { elements, product, identity })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanReport {
    pub total: usize,
    pub invertible: usize,
    pub non_invertible_witnesses: Vec<CompletionElement>,
}

/// Searches a two-sided inverse for every element by exhaustive multiplication.
pub fn invertibility_scan(table: &MultiplicationTable) -> ScanReport {
    let mut report = ScanReport { total: table.len(), ..Default::default() };
    for i in 0..table.len() {
        let has_inverse =
            (0..table.len()).any(|j| table.product[i][j] == table.identity && table.product[j][i] == table.identity);
        if has_inverse {
            report.invertible += 1;
        } else {
            report.non_invertible_witnesses.push(table.elements[i].clone());
        }
    }
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub element_count: usize,
    pub associativity: bool,
    pub identity: bool,
    pub homomorphism: bool,
    pub conjugation_cocycle: bool,
    /// `None` when the family is not stable.
    pub inverses: Option<bool>,
    pub inverse_condition: Option<bool>,
    pub inverse_antihomomorphism: Option<bool>,
    pub failures: Vec<String>,
}

impl LawReport {
    pub fn pass(&self) -> bool {
        self.associativity
            && self.identity
            && self.homomorphism
            && self.conjugation_cocycle
            && self.inverses != Some(false)
            && self.inverse_condition != Some(false)
            && self.inverse_antihomomorphism != Some(false)
    }
}

/// Exhaustive monoid laws, the embedding homomorphism over `group_elements`,
/// the conjugation cocycle and, when `stable`, the inverse laws.
pub fn check_laws(
    tc: &TruncatedCompletion,
    table: &MultiplicationTable,
    group_elements: &[Word],
    stable: bool,
) -> Result<LawReport> {
    let n = table.len();
    let mut failures = Vec::new();
    let p = &table.product;
    let mut associativity = true;
    'assoc: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if p[p[a][b]][c] != p[a][p[b][c]] {
                    associativity = false;
                    failures.push(format!("associativity fails at ({a}, {b}, {c})"));
                    break 'assoc;
                }
            }
        }
    }
    let e = table.identity;
    let identity = (0..n).all(|a| p[e][a] == a && p[a][e] == a) && tc.embed(&Word::identity()) == tc.identity();
    if !identity {
        failures.push("identity law fails".into());
    }
    let mut homomorphism = true;
    let embedded: Vec<CompletionElement> = group_elements.iter().map(|g| tc.embed(g)).collect();
    'hom: for (g, eg) in group_elements.iter().zip(&embedded) {
        for (h, eh) in group_elements.iter().zip(&embedded) {
            if tc.multiply(eg, eh)? != tc.embed(&g.mul(h)) {
                homomorphism = false;
                failures.push(format!("embedding is not multiplicative at ({g}, {h})"));
                break 'hom;
            }
        }
    }
    let mut conjugation_cocycle = true;
    'cocycle: for node in 0..tc.node_count() {
        for a in 0..n {
            for b in 0..n {
                let lhs = tc.conj_node(node, &table.elements[p[a][b]]);
                let rhs = tc.conj_node(tc.conj_node(node, &table.elements[a]), &table.elements[b]);
                if lhs != rhs {
                    conjugation_cocycle = false;
                    failures.push(format!("conjugation cocycle fails at node {node}, ({a}, {b})"));
                    break 'cocycle;
                }
            }
        }
    }
    let (mut inverses, mut inverse_condition, mut inverse_antihomomorphism) = (None, None, None);
    if stable {
        let mut inv = Vec::with_capacity(n);
        let (mut ok_inv, mut ok_cond) = (true, true);
        for f in &table.elements {
            let g = tc.invert_stable(f)?;
            if tc.multiply(&g, f)? != tc.identity() || tc.multiply(f, &g)? != tc.identity() {
                ok_inv = false;
                failures.push(format!("invert_stable({:?}) is not a two-sided inverse", f.0));
            }
            if !tc.inverse_condition_holds(f, &g) {
                ok_cond = false;
                failures.push(format!("inverse condition fails for {:?}", f.0));
            }
            inv.push(g);
        }
        let mut ok_anti = true;
        'anti: for a in 0..n {
            for b in 0..n {
                let lhs = tc.invert_stable(&table.elements[p[a][b]])?;
                if lhs != tc.multiply(&inv[b], &inv[a])? {
                    ok_anti = false;
                    failures.push(format!("(fg)^-1 != g^-1 f^-1 at ({a}, {b})"));
                    break 'anti;
                }
            }
        }
        inverses = Some(ok_inv);
        inverse_condition = Some(ok_cond);
        inverse_antihomomorphism = Some(ok_anti);
    }
    Ok(LawReport {
        element_count: n,
        associativity,
        identity,
        homomorphism,
        conjugation_cocycle,
        inverses,
        inverse_condition,
        inverse_antihomomorphism,
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfiniteReport {
    pub completion_order: usize,
    pub limit_order: usize,
    pub bijective: bool,
    pub homomorphism: bool,
    pub isomorphic: bool,
}

/// Compares the completion with the inverse limit of the quotient groups
/// `G/H`, each enumerated afresh from the presentation with `H`'s generators
/// added as relators. Every node must be normal in `G`.
pub fn profinite_compare(tc: &TruncatedCompletion, table: &MultiplicationTable) -> Result<ProfiniteReport> {
    let fam = tc.family();
    let ctx = fam.context();
    let n = tc.node_count();
    for node in 0..n {
        for g in ctx.search_generators() {
            for l in [Letter::pos(g), Letter::neg(g)] {
                if fam.conjugate_node(node, l) != Some(node) {
                    return Err(Error::Precondition(format!("node {node} is not normal")));
                }
            }
        }
    }
    let mut quotients = Vec::with_capacity(n);
    for node in fam.nodes() {
        let mut relators = ctx.presentation.relators.clone();
        relators.extend(node.generators().iter().cloned());
        if !node.generators_complete() {
            relators.extend(node.coset_table().map(|t| t.schreier_generators()).unwrap_or_default());
        }
        let p = Presentation { generators: ctx.presentation.generators.clone(), relators };
        quotients.push(todd_coxeter(&p, &[], crate::groups::DEFAULT_ENUMERATION_LIMIT)?);
    }
    // Compatible tuples of quotient elements.
    let mut limit: Vec<Vec<u32>> = vec![vec![]];
    for q in &quotients {
        let mut next = Vec::new();
        for partial in &limit {
            for c in 0..q.count() as u32 {
                let mut t = partial.clone();
                t.push(c);
                next.push(t);
            }
        }
        limit = next;
    }
    let compatible = |t: &[u32]| {
        (0..n).all(|s| {
            (0..n).all(|l| {
                !fam.is_below(s, l)
                    || quotients[l].coset_of(quotients[s].representative(t[s] as usize)) == t[l] as usize
            })
        })
    };
    limit.retain(|t| compatible(t));
    let image = |f: &CompletionElement| -> Vec<u32> {
        (0..n).map(|h| quotients[h].coset_of(tc.representative(f, h)) as u32).collect()
    };
    let images: Vec<Vec<u32>> = table.elements.iter().map(image).collect();
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    let mut limit_sorted = limit.clone();
    limit_sorted.sort();
    let bijective = sorted.len() == images.len() && sorted == limit_sorted;
    let times = |a: &[u32], b: &[u32]| -> Vec<u32> {
        (0..n)
            .map(|h| quotients[h].act_word(a[h] as usize, quotients[h].representative(b[h] as usize)) as u32)
            .collect()
    };
    let homomorphism = (0..table.len())
        .all(|i| (0..table.len()).all(|j| images[table.product[i][j]] == times(&images[i], &images[j])));
    Ok(ProfiniteReport {
        completion_order: table.len(),
        limit_order: limit.len(),
        bijective,
        homomorphism,
        isomorphic: bijective && homomorphism,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{check_stable, named_family};
    use crate::groups::preset;

    fn build(group: &str, family: &str) -> (TruncatedCompletion, MultiplicationTable, Vec<Word>) {
        let ctx = preset(group).unwrap();
        let fam = Arc::new(named_family(&ctx, family).unwrap());
        let tc = TruncatedCompletion::new(fam).unwrap();
        let elements = tc.enumerate(DEFAULT_CEILING).unwrap();
        let table = MultiplicationTable::build(&tc, elements).unwrap();
        (tc, table, ctx.elements().unwrap())
    }

    #[test]
    fn sizes() {
        assert_eq!(build("sym3", "whole").1.len(), 1);
        assert_eq!(build("sym3", "normal-order3").1.len(), 2);
        assert_eq!(build("sym3", "all").1.len(), 6);
        assert_eq!(build("klein4", "all").1.len(), 4);
        assert_eq!(build("cyclic(4)", "order2").1.len(), 2);
    }

    #[test]
    fn laws_on_fixtures() {
        for (g, f) in [("sym3", "normal-order3"), ("sym3", "all"), ("cyclic(4)", "order2"), ("klein4", "all")] {
            let (tc, table, elements) = build(g, f);
            let stable = check_stable(tc.family()).stable;
            assert!(stable);
            let r = check_laws(&tc, &table, &elements, stable).unwrap();
            assert!(r.pass(), "{g}/{f}: {:?}", r.failures);
        }
    }

    #[test]
    fn embedding_injective_with_trivial_node() {
        let (tc, _, elements) = build("sym3", "all");
        let mut images: Vec<_> = elements.iter().map(|g| tc.embed(g)).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 6);
    }

    #[test]
    fn profinite() {
        for (g, f) in [("sym3", "normal-order3"), ("sym3", "whole"), ("cyclic(4)", "order2")] {
            let (tc, table, _) = build(g, f);
            let r = profinite_compare(&tc, &table).unwrap();
            assert!(r.isomorphic, "{g}/{f}: {r:?}");
        }
        let (tc, table, _) = build("sym3", "all");
        assert!(profinite_compare(&tc, &table).is_err());
    }

    #[test]
    fn module_action() {
        let ctx = preset("sym3").unwrap();
        let (tc, table, elements) = build("sym3", "normal-order3");
        let m = FiniteModule::regular(&ctx, 2).unwrap();
        let (s, _) = crate::families::h0_s(&m, tc.family()).unwrap();
        for v in s.elements() {
            assert_eq!(tc.act(&v, &tc.identity(), &m).unwrap(), v);
            for g in &elements {
                assert_eq!(tc.act(&v, &tc.embed(g), &m).unwrap(), m.act(&v, g));
            }
            for a in &table.elements {
                for b in &table.elements {
                    let ab = tc.multiply(a, b).unwrap();
                    let lhs = tc.act(&tc.act(&v, a, &m).unwrap(), b, &m).unwrap();
                    assert_eq!(lhs, tc.act(&v, &ab, &m).unwrap());
                }
            }
        }
        let outside = vec![1, 0, 0, 0, 0, 0];
        assert_eq!(tc.act(&outside, &tc.identity(), &m), Err(Error::NoFixingNode));
    }
}
