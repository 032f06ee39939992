//! Subgroup handles: conjugates, intersections, indices, commensurability.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::baumslag_solitar::{lcm, BrittonForm, X};
use crate::error::{Error, Result};
use crate::groups::{todd_coxeter, CosetTable, ElementKey, GroupContext, Oracle};
use crate::intmat::Lattice;
use crate::thompson::{a_generator, am_membership};
use crate::truth::Truth;
use crate::words::{ball_words, Letter, Word};

/// Live-coset bound for the enumeration attempted by [`SubgroupHandle::new`].
pub const AUTO_TABLE_LIMIT: usize = 2_000;

/// How membership in a subgroup is decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Finite index: the coset table of the subgroup in the ambient group.
    Table(Arc<CosetTable>),
    /// `<x^k>` in a Baumslag-Solitar group.
    Powers {
        k: i64,
    },
    /// A subgroup of a free abelian group, by exponent vectors.
    Lattice(Lattice),
    /// `<w>` in a free group, `w` nontrivial.
    FreeCyclic(Word),
    /// `A_m` in Thompson's group; words reaching past `index_bound` are undecided.
    ThompsonA {
        m: u32,
        index_bound: u32,
    },
    Trivial,
    Whole,
    /// `inner^by`: `t` is a member iff `by t by^-1` is a member of `inner`.
    Conjugate {
        inner: Box<Membership>,
        by: Word,
    },
    /// Conjunction.
    Meet(Vec<Membership>),
}

/// Canonical label of a left coset `gL`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CosetKey {
    Coset(u32),
    Britton(BrittonForm),
    Vector(Vec<i64>),
    Free(Word),
    Element(ElementKey),
    Whole,
    Tuple(Vec<CosetKey>),
}

impl Membership {
    pub fn contains(&self, ctx: &GroupContext, w: &Word) -> Truth {
        match self {
            Membership::Table(t) => t.contains(w).into(),
            Membership::Powers { k } => match ctx.oracle {
                Oracle::Britton(bs) => match bs.reduce(w).as_x_power() {
                    Some(e) => (e % k == 0).into(),
                    None => Truth::False,
                },
                _ => Truth::Unknown,
            },
            Membership::Lattice(l) => l.contains(&w.exponent_vector(l.width())).into(),
            Membership::FreeCyclic(g) => free_cyclic_contains(g, w).into(),
            Membership::ThompsonA { m, index_bound } => am_membership(w, *m, *index_bound),
            Membership::Trivial => ctx.is_trivial(w),
            Membership::Whole => Truth::True,
            Membership::Conjugate { inner, by } => inner.contains(ctx, &by.mul(w).mul(&by.inverse())),
            Membership::Meet(parts) => Truth::all(parts.iter().map(|p| p.contains(ctx, w))),
        }
    }

    /// Label shared by exactly the elements of the left coset `gL`, when the
    /// oracle provides one.
    pub fn left_coset_key(&self, ctx: &GroupContext, g: &Word) -> Option<CosetKey> {
        Some(match self {
            Membership::Table(t) => CosetKey::Coset(t.coset_of(&g.inverse()) as u32),
            Membership::Powers { k } => {
                let Oracle::Britton(bs) = ctx.oracle else { return None };
                let f = bs.reduce(g);
                CosetKey::Britton(f.with_tail(f.tail().rem_euclid(*k)))
            }
            Membership::Lattice(l) => CosetKey::Vector(l.reduce(&g.exponent_vector(l.width()))),
            Membership::FreeCyclic(w) => {
                let (base, k) = single_generator_power(w)?;
                let mut letters = g.letters().to_vec();
                let mut tail = 0i64;
                while let Some(&l) = letters.last() {
                    if l.generator != base {
                        break;
                    }
                    tail += l.sign();
                    letters.pop();
                }
                let prefix = Word::new(letters);
                CosetKey::Free(prefix.mul(&Word::power_of(base, tail.rem_euclid(k))))
            }
            Membership::ThompsonA { .. } => return None,
            Membership::Trivial => CosetKey::Element(ctx.element_key(g)?),
            Membership::Whole => CosetKey::Whole,
            Membership::Conjugate { inner, by } => inner.left_coset_key(ctx, &g.mul(&by.inverse()))?,
            Membership::Meet(parts) => {
                CosetKey::Tuple(parts.iter().map(|p| p.left_coset_key(ctx, g)).collect::<Option<_>>()?)
            }
        })
    }

    fn conjugated(&self, g: &Word) -> Membership {
        if g.is_empty() {
            return self.clone();
        }
        match self {
            Membership::Table(t) => Membership::Table(Arc::new(t.conjugated(g))),
            Membership::Lattice(_) | Membership::Trivial | Membership::Whole => self.clone(),
            Membership::FreeCyclic(w) => Membership::FreeCyclic(w.conjugate(g)),
            Membership::Conjugate { inner, by } => {
                let by = by.mul(g);
                if by.is_empty() {
                    (**inner).clone()
                } else {
                    Membership::Conjugate { inner: inner.clone(), by }
                }
            }
            _ => Membership::Conjugate { inner: Box::new(self.clone()), by: g.clone() },
        }
    }
}

fn single_generator_power(w: &Word) -> Option<(u32, i64)> {
    let first = w.letters().first()?;
    w.letters().iter().all(|l| l.generator == first.generator).then(|| (first.generator, w.len() as i64))
}

/// Splits a reduced word as `u c u^-1` with `c` cyclically reduced.
fn cyclic_split(w: &Word) -> (Word, Word) {
    let l = w.letters();
    let mut i = 0;
    while i + 1 < l.len() - i && l[i] == l[l.len() - 1 - i].inv() {
        i += 1;
    }
    (Word::new(l[..i].to_vec()), Word::new(l[i..l.len() - i].to_vec()))
}

fn free_cyclic_contains(g: &Word, w: &Word) -> bool {
    if w.is_empty() {
        return true;
    }
    let (u, c) = cyclic_split(g);
    let extra = w.len() as i64 - 2 * u.len() as i64;
    if extra <= 0 || extra % c.len() as i64 != 0 {
        return false;
    }
    let e = extra / c.len() as i64;
    *w == g.pow(e) || *w == g.pow(-e)
}

/// The primitive root `r` of a nontrivial free-group element, with `w = r^e`.
fn free_root(w: &Word) -> (Word, i64) {
    let (u, c) = cyclic_split(w);
    let n = c.len();
    let letters = c.letters();
    let p = (1..=n).find(|&p| n % p == 0 && (p..n).all(|i| letters[i] == letters[i - p])).unwrap_or(n);
    let root = u.mul(&Word::new(letters[..p].to_vec())).mul(&u.inverse());
    (root, (n / p) as i64)
}

/// A subgroup of the group of `ctx`, given by generators and, when known, a
/// membership oracle.
#[derive(Clone, Debug)]
pub struct SubgroupHandle {
    ctx: Arc<GroupContext>,
    generators: Vec<Word>,
    /// False when `generators` is only a partial list (intersections, `A_m`).
    complete: bool,
    membership: Option<Membership>,
}

impl SubgroupHandle {
    /// The subgroup generated by `generators`, with a membership oracle
    /// chosen from the context: coset tables in finite groups (and any
    /// finite-index subgroup found within [`AUTO_TABLE_LIMIT`] cosets),
    /// exponent lattices in free abelian groups, cyclic subgroups in free
    /// groups and conjugates of `<x^k>` in Baumslag-Solitar groups.
    pub fn new(ctx: &Arc<GroupContext>, generators: Vec<Word>) -> Self {
        let generators: Vec<Word> = generators.into_iter().filter(|g| !g.is_empty()).collect();
        let membership = infer_membership(ctx, &generators);
        SubgroupHandle { ctx: ctx.clone(), generators, complete: true, membership }
    }

    /// A subgroup with a declared membership oracle, which must accept every generator.
    pub fn with_membership(ctx: &Arc<GroupContext>, generators: Vec<Word>, membership: Membership) -> Result<Self> {
        for g in &generators {
            if !membership.contains(ctx, g).is_true() {
                return Err(Error::Precondition(format!(
                    "generator {} is not accepted by the declared membership",
                    ctx.show(g)
                )));
            }
        }
        Ok(SubgroupHandle { ctx: ctx.clone(), generators, complete: true, membership: Some(membership) })
    }

    pub fn whole(ctx: &Arc<GroupContext>) -> Self {
        let generators = ctx.search_generators().into_iter().map(Word::generator).collect();
        let membership = match ctx.regular_table() {
            Some(t) => Membership::Table(Arc::new(single_coset_table(&t))),
            None => Membership::Whole,
        };
        SubgroupHandle {
            ctx: ctx.clone(),
            generators,
            complete: ctx.generator_count().is_some(),
            membership: Some(membership),
        }
    }

    pub fn trivial(ctx: &Arc<GroupContext>) -> Self {
        SubgroupHandle::new(ctx, vec![])
    }

    /// `A_m` in Thompson's group, listing its first `listed` generators.
    pub fn thompson_a(ctx: &Arc<GroupContext>, m: u32, listed: u32, index_bound: u32) -> Self {
        SubgroupHandle {
            ctx: ctx.clone(),
            generators: (m..m + listed).map(a_generator).collect(),
            complete: false,
            membership: Some(Membership::ThompsonA { m, index_bound }),
        }
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn generators_complete(&self) -> bool {
        self.complete
    }

    pub fn membership(&self) -> Option<&Membership> {
        self.membership.as_ref()
    }

    pub fn coset_table(&self) -> Option<&Arc<CosetTable>> {
        match &self.membership {
            Some(Membership::Table(t)) => Some(t),
            _ => None,
        }
    }

    pub fn contains(&self, w: &Word) -> Truth {
        match &self.membership {
            Some(m) => m.contains(&self.ctx, w),
            None if self.generators.contains(w) || w.is_empty() => Truth::True,
            None => Truth::Unknown,
        }
    }

    /// Whether `other <= self`, by membership of `other`'s generators.
    pub fn contains_subgroup(&self, other: &SubgroupHandle) -> Truth {
        if let (Some(Membership::Table(a)), Some(Membership::Table(_))) = (&self.membership, &other.membership) {
            return other.schreier_or_generators().iter().all(|g| a.contains(g)).into();
        }
        if !other.complete {
            return Truth::Unknown;
        }
        Truth::all(other.generators.iter().map(|g| self.contains(g)))
    }

    fn schreier_or_generators(&self) -> Vec<Word> {
        if self.complete {
            self.generators.clone()
        } else if let Some(t) = self.coset_table() {
            t.schreier_generators()
        } else {
            self.generators.clone()
        }
    }

    /// Equality as subgroups, by mutual containment.
    pub fn same_subgroup(&self, other: &SubgroupHandle) -> Truth {
        if let (Some(Membership::Table(a)), Some(Membership::Table(b))) = (&self.membership, &other.membership) {
            return (a == b).into();
        }
        self.contains_subgroup(other) & other.contains_subgroup(self)
    }

    pub fn left_coset_key(&self, g: &Word) -> Option<CosetKey> {
        self.membership.as_ref()?.left_coset_key(&self.ctx, g)
    }

    /// `gL = g'L`, i.e. `g^-1 g'` is a member.
    pub fn same_left_coset(&self, g: &Word, h: &Word) -> Truth {
        self.contains(&g.inverse().mul(h))
    }

    /// `Lg = Lg'`, i.e. `g' g^-1` is a member.
    pub fn same_right_coset(&self, g: &Word, h: &Word) -> Truth {
        self.contains(&h.mul(&g.inverse()))
    }

    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| self.ctx.show(g)).collect();
        let dots = if self.complete { "" } else { ", ..." };
        format!("<{}{}>", gens.join(", "), dots)
    }
}

impl fmt::Display for SubgroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn single_coset_table(regular: &CosetTable) -> CosetTable {
    CosetTable::from_action(regular.generator_count(), 1, |_, _| 0)
}

fn infer_membership(ctx: &Arc<GroupContext>, gens: &[Word]) -> Option<Membership> {
    match ctx.oracle {
        Oracle::CosetTable { limit } => {
            todd_coxeter(&ctx.presentation, gens, limit).ok().map(|t| Membership::Table(Arc::new(t)))
        }
        Oracle::FreeAbelian => {
            let n = ctx.generator_count().unwrap_or(0);
            let vectors: Vec<Vec<i64>> = gens.iter().map(|g| g.exponent_vector(n)).collect();
            Some(Membership::Lattice(Lattice::new(&vectors, n)))
        }
        _ if gens.is_empty() => Some(Membership::Trivial),
        Oracle::Free if gens.len() == 1 => Some(Membership::FreeCyclic(gens[0].clone())),
        Oracle::Britton(bs) => {
            // Conjugates u^-1 <x^k> u, recognized syllabically.
            let u = common_conjugator(gens);
            let mut k = 0i64;
            for g in gens {
                let inner = bs.reduce(&u.mul(g).mul(&u.inverse()));
                match inner.as_x_power() {
                    Some(e) => k = crate::baumslag_solitar::gcd(k, e),
                    None => return finite_index_table(ctx, gens),
                }
            }
            if k == 0 {
                return Some(Membership::Trivial);
            }
            let powers = Membership::Powers { k: k.abs() };
            Some(if u.is_empty() { powers } else { Membership::Conjugate { inner: Box::new(powers), by: u } })
        }
        _ => finite_index_table(ctx, gens),
    }
}

fn finite_index_table(ctx: &Arc<GroupContext>, gens: &[Word]) -> Option<Membership> {
    ctx.generator_count()?;
    todd_coxeter(&ctx.presentation, gens, AUTO_TABLE_LIMIT).ok().map(|t| Membership::Table(Arc::new(t)))
}

/// The longest `u` with every generator of the form `u^-1 v u` as words.
fn common_conjugator(gens: &[Word]) -> Word {
    let mut best: Option<Vec<Letter>> = None;
    for g in gens {
        let l = g.letters();
        let mut i = 0;
        while 2 * i + 2 <= l.len() && l[i] == l[l.len() - 1 - i].inv() {
            i += 1;
        }
        let suffix: Vec<Letter> = l[l.len() - i..].to_vec();
        best = Some(match best {
            None => suffix,
            Some(b) => {
                // longest common suffix
                let n = b.iter().rev().zip(suffix.iter().rev()).take_while(|(a, c)| a == c).count();
                b[b.len() - n..].to_vec()
            }
        });
    }
    Word::new(best.unwrap_or_default())
}

/// `H^g`: generators `g^-1 h g`, membership `t in H^g <=> g t g^-1 in H`.
pub fn conjugate(h: &SubgroupHandle, g: &Word) -> SubgroupHandle {
    SubgroupHandle {
        ctx: h.ctx.clone(),
        generators: h.generators.iter().map(|w| w.conjugate(g)).collect(),
        complete: h.complete,
        membership: h.membership.as_ref().map(|m| m.conjugated(g)),
    }
}

/// Index of a subgroup in another, or why it is not known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(u64),
    /// Certified infinite.
    Infinite,
    /// Infinite, or larger than the bound.
    Exceeds,
}

impl Index {
    pub fn finite(self) -> Option<u64> {
        match self {
            Index::Finite(n) => Some(n),
            _ => None,
        }
    }
}

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Index::Finite(n) => s.serialize_u64(*n),
            Index::Infinite => s.serialize_str("infinite"),
            Index::Exceeds => s.serialize_str("infinite-or-exceeds"),
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => f.write_str("infinite"),
            Index::Exceeds => f.write_str("infinite-or-exceeds"),
        }
    }
}

/// `[ambient : sub]`, exact when at most `bound`.
pub fn index_bounded(sub: &SubgroupHandle, ambient: &SubgroupHandle, bound: u64) -> Result<Index> {
    match ambient.contains_subgroup(sub) {
        Truth::True => {}
        Truth::False => return Err(Error::Precondition(format!("{sub} is not contained in {ambient}"))),
        Truth::Unknown if !sub.complete => {}
        Truth::Unknown => return Err(Error::OracleUnknown),
    }
    let cap = |n: u64| if n <= bound { Index::Finite(n) } else { Index::Exceeds };
    use Membership::*;
    match (&sub.membership, &ambient.membership) {
        (Some(Table(s)), Some(Table(a))) => return Ok(cap((s.count() / a.count()) as u64)),
        (Some(Table(s)), Some(Whole)) => return Ok(cap(s.count() as u64)),
        (Some(Powers { k: s }), Some(Powers { k: a })) => return Ok(cap((s / a) as u64)),
        (Some(Conjugate { inner: si, by: sb }), Some(Conjugate { inner: ai, by: ab })) if sb == ab => {
            if let (Powers { k: s }, Powers { k: a }) = (&**si, &**ai) {
                return Ok(cap((s / a) as u64));
            }
        }
        (Some(Lattice(s)), Some(Lattice(a))) => {
            return Ok(a.index_of(s).map_or(Index::Infinite, cap));
        }
        (Some(FreeCyclic(s)), Some(FreeCyclic(a))) => {
            let (_, es) = free_root(s);
            let (_, ea) = free_root(a);
            return Ok(cap((es / ea) as u64));
        }
        (Some(Trivial), _) if sub.ctx.torsion_free() => {
            if ambient.generators.iter().any(|g| sub.ctx.is_trivial(g).is_false()) {
                return Ok(Index::Infinite);
            }
            if ambient.complete && ambient.generators.iter().all(|g| sub.ctx.is_trivial(g).is_true()) {
                return Ok(Index::Finite(1));
            }
        }
        _ => {}
    }
    if !ambient.complete {
        return Ok(Index::Exceeds);
    }
    Ok(count_right_cosets(sub, &ambient.generators, bound)
        .map_or(Index::Exceeds, |reps| Index::Finite(reps.len() as u64)))
}

/// Breadth-first enumeration of the right cosets `sub t`, `t` in the group
/// generated by `gens`. Returns representatives, or `None` past `bound`
/// cosets or on an undecided comparison.
pub fn count_right_cosets(sub: &SubgroupHandle, gens: &[Word], bound: u64) -> Option<Vec<Word>> {
    let mut moves: Vec<Word> = Vec::new();
    for g in gens {
        for m in [g.clone(), g.inverse()] {
            if !moves.contains(&m) {
                moves.push(m);
            }
        }
    }
    let mut reps = vec![Word::identity()];
    let mut keys: HashMap<CosetKey, usize> = HashMap::new();
    let keyed = sub.left_coset_key(&Word::identity()).is_some();
    if keyed {
        keys.insert(sub.left_coset_key(&Word::identity())?, 0);
    }
    let mut head = 0;
    while head < reps.len() {
        let t = reps[head].clone();
        for m in &moves {
            let next = t.mul(m);
            let known = if keyed {
                keys.contains_key(&sub.left_coset_key(&next.inverse())?)
            } else {
                let mut found = false;
                for r in &reps {
                    match sub.same_right_coset(r, &next) {
                        Truth::True => {
                            found = true;
                            break;
                        }
                        Truth::False => {}
                        Truth::Unknown => return None,
                    }
                }
                found
            };
            if !known {
                if reps.len() as u64 >= bound {
                    return None;
                }
                if keyed {
                    keys.insert(sub.left_coset_key(&next.inverse())?, reps.len());
                }
                reps.push(next);
            }
        }
        head += 1;
    }
    Some(reps)
}

/// `H ∩ K`.
pub fn intersect(h: &SubgroupHandle, k: &SubgroupHandle) -> Result<SubgroupHandle> {
    use Membership::*;
    let ctx = h.ctx.clone();
    let (Some(mh), Some(mk)) = (&h.membership, &k.membership) else {
        return Err(Error::UnsupportedOraclePair("a side has no membership oracle".into()));
    };
    let handle = |generators: Vec<Word>, membership: Membership| SubgroupHandle {
        ctx: ctx.clone(),
        generators,
        complete: true,
        membership: Some(membership),
    };
    Ok(match (mh, mk) {
        (Table(a), Table(b)) => {
            let t = a.fiber_product(b);
            handle(t.schreier_generators(), Table(Arc::new(t)))
        }
        (Whole, _) => k.clone(),
        (_, Whole) => h.clone(),
        (Trivial, _) | (_, Trivial) => handle(vec![], Trivial),
        (Powers { k: a }, Powers { k: b }) => {
            let l = lcm(*a, *b);
            handle(vec![Word::power_of(X, l)], Powers { k: l })
        }
        (Lattice(a), Lattice(b)) => {
            let l = a.intersection(b);
            let gens = l
                .basis()
                .iter()
                .map(|v| {
                    v.iter().enumerate().fold(Word::identity(), |acc, (i, &e)| acc.mul(&Word::power_of(i as u32, e)))
                })
                .collect();
            handle(gens, Lattice(l))
        }
        (FreeCyclic(a), FreeCyclic(b)) => {
            let (ra, ea) = free_root(a);
            let (rb, eb) = free_root(b);
            if ra != rb && ra != rb.inverse() {
                // Non-commuting elements of a free group generate a free group
                // of rank two, in which their cyclic subgroups meet trivially.
                return Ok(handle(vec![], Trivial));
            }
            let g = ra.pow(lcm(ea, eb));
            handle(vec![g.clone()], FreeCyclic(g))
        }
        _ if mh == mk => h.clone(),
        _ => SubgroupHandle {
            ctx: ctx.clone(),
            generators: vec![],
            complete: false,
            membership: Some(Meet(vec![mh.clone(), mk.clone()])),
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CommensurabilityReport {
    pub result: Truth,
    /// `[H : H ∩ K]` and `[K : H ∩ K]`.
    pub indices: [Index; 2],
    pub certificate: Certificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub intersection: String,
    /// Coset representatives of `H ∩ K` in `H` and in `K`, when enumerated.
    pub transversals: [Option<Vec<String>>; 2],
}

pub fn is_commensurable(h: &SubgroupHandle, k: &SubgroupHandle, bound: u64) -> Result<CommensurabilityReport> {
    let meet = intersect(h, k)?;
    let ih = index_bounded(&meet, h, bound)?;
    let ik = index_bounded(&meet, k, bound)?;
    let result = match (ih, ik) {
        (Index::Finite(_), Index::Finite(_)) => Truth::True,
        (Index::Infinite, _) | (_, Index::Infinite) => Truth::False,
        _ => Truth::Unknown,
    };
    let transversal = |ambient: &SubgroupHandle, idx: Index| {
        let n = idx.finite()?;
        if !ambient.complete {
            return None;
        }
        count_right_cosets(&meet, &ambient.generators, n.max(1))
            .map(|reps| reps.iter().map(|r| h.ctx.show(r)).collect())
    };
    let certificate =
        Certificate { intersection: meet.describe(), transversals: [transversal(h, ih), transversal(k, ik)] };
    Ok(CommensurabilityReport { result, indices: [ih, ik], certificate })
}

pub fn in_commensurator(h: &SubgroupHandle, g: &Word, bound: u64) -> Result<Truth> {
    Ok(is_commensurable(h, &conjugate(h, g), bound)?.result)
}

#[derive(Clone, Debug, Serialize)]
pub struct NearNormalReport {
    pub result: Truth,
    /// `(g, outcome)` for each listed generator and its inverse.
    pub checks: Vec<(String, Truth)>,
}

/// Checks `g` and `g^-1` in the commensurator for each `g` in `gens`, which
/// must generate the ambient group.
pub fn near_normal_on(h: &SubgroupHandle, gens: &[Word], bound: u64) -> Result<NearNormalReport> {
    let mut checks = Vec::new();
    for g in gens {
        for w in [g.clone(), g.inverse()] {
            checks.push((h.ctx.show(&w), in_commensurator(h, &w, bound)?));
        }
    }
    let result = Truth::all(checks.iter().map(|c| c.1));
    Ok(NearNormalReport { result, checks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Cosets `gL`.
    Left,
    /// Cosets `Lg`.
    Right,
}

/// A finite union of cosets of one subgroup.
#[derive(Clone, Debug)]
pub struct CosetSet {
    pub base: SubgroupHandle,
    pub representatives: Vec<Word>,
    pub side: Side,
}

impl CosetSet {
    /// Drops representatives of repeated cosets; fails on undecided comparisons.
    pub fn new(base: SubgroupHandle, representatives: Vec<Word>, side: Side) -> Result<Self> {
        let mut reps: Vec<Word> = Vec::new();
        for r in representatives {
            let mut dup = false;
            for s in &reps {
                let same = match side {
                    Side::Left => base.same_left_coset(s, &r),
                    Side::Right => base.same_right_coset(s, &r),
                };
                match same {
                    Truth::True => dup = true,
                    Truth::False => {}
                    Truth::Unknown => return Err(Error::OracleUnknown),
                }
            }
            if !dup {
                reps.push(r);
            }
        }
        Ok(CosetSet { base, representatives: reps, side })
    }

    /// `Xg ∩ X = ∅` for a union of right cosets: `t_i g t_j^-1` lies outside the base for all `i, j`.
    pub fn translate_is_disjoint(&self, g: &Word) -> Truth {
        Truth::all(self.representatives.iter().flat_map(|ti| {
            self.representatives.iter().map(move |tj| !self.base.contains(&ti.mul(g).mul(&tj.inverse())))
        }))
    }
}

/// The shortlex-least word `g` of length `<= radius` with `Xg ∩ X = ∅`.
pub fn neumann_translate(x_set: &CosetSet, radius: usize) -> Result<Option<Word>> {
    if x_set.side != Side::Right {
        return Err(Error::Precondition("translation needs a union of right cosets".into()));
    }
    let gens = x_set.base.ctx.search_generators();
    Ok(ball_words(&gens, radius).into_iter().find(|g| x_set.translate_is_disjoint(g).is_true()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::preset;

    fn sub(ctx: &Arc<GroupContext>, gens: &[&str]) -> SubgroupHandle {
        SubgroupHandle::new(ctx, gens.iter().map(|g| ctx.parse_word(g).unwrap()).collect())
    }

    #[test]
    fn conjugate_in_bs() {
        let g = preset("bs(2,3)").unwrap();
        let x2 = sub(&g, &["x^2"]);
        let y = g.parse_word("y").unwrap();
        let c = conjugate(&x2, &y);
        assert_eq!(c.generators(), &[g.parse_word("y^-1 x^2 y").unwrap()]);
        assert_eq!(c.same_subgroup(&sub(&g, &["x^3"])), Truth::True);
        let back = conjugate(&c, &y.inverse());
        for w in ball_words(&[0, 1], 4) {
            assert_eq!(back.contains(&w), x2.contains(&w));
        }
    }

    #[test]
    fn indices() {
        let z = preset("zn(1)").unwrap();
        assert_eq!(index_bounded(&sub(&z, &["t^6"]), &sub(&z, &["t"]), 100), Ok(Index::Finite(6)));
        let bs = preset("bs(2,3)").unwrap();
        assert_eq!(index_bounded(&sub(&bs, &["x^6"]), &sub(&bs, &["x"]), 100), Ok(Index::Finite(6)));
        assert_eq!(index_bounded(&sub(&bs, &["x^2"]), &SubgroupHandle::whole(&bs), 100), Ok(Index::Exceeds));
        let s3 = preset("sym3").unwrap();
        assert_eq!(index_bounded(&sub(&s3, &["a"]), &SubgroupHandle::whole(&s3), 100), Ok(Index::Finite(3)));
        assert_eq!(index_bounded(&SubgroupHandle::trivial(&s3), &sub(&s3, &["a"]), 100), Ok(Index::Finite(2)));
    }

    #[test]
    fn intersections() {
        let bs = preset("bs(2,3)").unwrap();
        let m = intersect(&sub(&bs, &["x^2"]), &sub(&bs, &["x^3"])).unwrap();
        assert_eq!(m.same_subgroup(&sub(&bs, &["x^6"])), Truth::True);
        let s3 = preset("sym3").unwrap();
        let m = intersect(&sub(&s3, &["a"]), &sub(&s3, &["b a b"])).unwrap();
        assert_eq!(m.coset_table().unwrap().count(), 6);
        let h = sub(&s3, &["a"]);
        assert_eq!(intersect(&h, &h).unwrap().same_subgroup(&h), Truth::True);
    }

    #[test]
    fn commensurability() {
        let z = preset("zn(1)").unwrap();
        let r = is_commensurable(&sub(&z, &["t^2"]), &sub(&z, &["t^3"]), 50).unwrap();
        assert_eq!((r.result, r.indices), (Truth::True, [Index::Finite(3), Index::Finite(2)]));
        let z2 = preset("zn(2)").unwrap();
        let r = is_commensurable(&sub(&z2, &["u"]), &sub(&z2, &["v"]), 50).unwrap();
        assert_eq!(r.result, Truth::False);
        let bs = preset("bs(2,3)").unwrap();
        let x = sub(&bs, &["x"]);
        let k = conjugate(&x, &bs.parse_word("y").unwrap());
        let r = is_commensurable(&x, &k, 50).unwrap();
        assert_eq!((r.result, r.indices), (Truth::True, [Index::Finite(3), Index::Finite(2)]));
        let k2 = sub(&bs, &["y^-1 x y"]);
        assert_eq!(is_commensurable(&x, &k2, 50).unwrap().indices, [Index::Finite(3), Index::Finite(2)]);
    }

    #[test]
    fn near_normality() {
        let bs = preset("bs(2,3)").unwrap();
        let gens = [bs.parse_word("x").unwrap(), bs.parse_word("y").unwrap()];
        assert_eq!(near_normal_on(&sub(&bs, &["x"]), &gens, 50).unwrap().result, Truth::True);
        let z2 = preset("zn(2)").unwrap();
        let gens = [z2.parse_word("u").unwrap(), z2.parse_word("v").unwrap()];
        assert_eq!(near_normal_on(&sub(&z2, &["u"]), &gens, 50).unwrap().result, Truth::True);
        let f2 = preset("free(2)").unwrap();
        let gens = [f2.parse_word("a").unwrap(), f2.parse_word("b").unwrap()];
        assert_eq!(near_normal_on(&sub(&f2, &["a"]), &gens, 50).unwrap().result, Truth::False);
        assert_eq!(in_commensurator(&sub(&f2, &["a"]), &Word::identity(), 10), Ok(Truth::True));
    }

    #[test]
    fn free_cyclic_membership() {
        let f2 = preset("free(2)").unwrap();
        let w = f2.parse_word("b a^2 b^-1").unwrap();
        assert!(free_cyclic_contains(&w, &w.pow(3)));
        assert!(free_cyclic_contains(&w, &w.pow(-2)));
        assert!(!free_cyclic_contains(&w, &f2.parse_word("b a b^-1").unwrap()));
        let (r, e) = free_root(&f2.parse_word("(a b)^3").unwrap());
        assert_eq!((r, e), (f2.parse_word("a b").unwrap(), 3));
    }

    #[test]
    fn translates() {
        let z2 = preset("zn(2)").unwrap();
        let u = sub(&z2, &["u"]);
        let x = CosetSet::new(u, vec![Word::identity(), z2.parse_word("v").unwrap()], Side::Right).unwrap();
        let g = neumann_translate(&x, 3).unwrap().unwrap();
        assert_eq!(x.translate_is_disjoint(&g), Truth::True);
        let s3 = preset("sym3").unwrap();
        let whole = CosetSet::new(SubgroupHandle::trivial(&s3), s3.elements().unwrap(), Side::Right).unwrap();
        assert_eq!(neumann_translate(&whole, 4).unwrap(), None);
        let bs = preset("bs(2,3)").unwrap();
        let x =
            CosetSet::new(sub(&bs, &["x"]), vec![Word::identity(), bs.parse_word("y").unwrap()], Side::Right).unwrap();
        let g = neumann_translate(&x, 4).unwrap().expect("found within radius 4");
        assert_eq!(x.translate_is_disjoint(&g), Truth::True);
    }
}
