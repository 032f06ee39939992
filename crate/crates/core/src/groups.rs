//! Presentations, word-problem oracles and Todd-Coxeter coset enumeration.

use std::collections::VecDeque;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::baumslag_solitar::{BrittonForm, Bs};
use crate::error::{Error, Result};
use crate::intmat::smith_diagonal;
use crate::thompson::{f_normal_form, FNormalForm};
use crate::truth::Truth;
use crate::words::{parse_terms, parse_word, Letter, Word};

/// Live-coset bound used when an oracle needs the regular representation.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Generators {
    Finite(Vec<String>),
    /// `x0, x1, ...` subject to `x_i^-1 x_j x_i = x_{j+1}` for `i < j`.
    ThompsonSchema,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Generators,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn finite(names: &[&str], relators: Vec<Word>) -> Self {
        Presentation {
            generators: Generators::Finite(names.iter().map(|s| s.to_string()).collect()),
            relators: relators.into_iter().filter(|r| !r.is_empty()).collect(),
        }
    }

    pub fn generator_count(&self) -> Option<usize> {
        match &self.generators {
            Generators::Finite(n) => Some(n.len()),
            Generators::ThompsonSchema => None,
        }
    }

    pub fn names(&self) -> &[String] {
        match &self.generators {
            Generators::Finite(n) => n,
            Generators::ThompsonSchema => &[],
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse_word(text, self.names())
    }

    /// Invariant factors of the abelianization: zeros for free rank, then the
    /// torsion orders greater than one.
    pub fn abelian_invariants(&self) -> Result<Vec<i64>> {
        let n = self.generator_count().ok_or(Error::NeedsFinitePresentation)?;
        let rows: Vec<Vec<i64>> = self.relators.iter().map(|r| r.exponent_vector(n)).collect();
        let diag = smith_diagonal(&rows, n);
        let mut out = vec![0; n - diag.len()];
        out.extend(diag.into_iter().filter(|&d| d != 1));
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Oracle {
    /// Finite groups: enumerate the regular representation.
    CosetTable {
        limit: usize,
    },
    Britton(Bs),
    ThompsonNormalForm,
    FreeAbelian,
    Free,
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Oracle::CosetTable { .. } => f.write_str("coset-table"),
            Oracle::Britton(bs) => write!(f, "britton({},{})", bs.m, bs.n),
            Oracle::ThompsonNormalForm => f.write_str("thompson-normal-form"),
            Oracle::FreeAbelian => f.write_str("free-abelian"),
            Oracle::Free => f.write_str("free"),
        }
    }
}

/// Canonical form of a group element under the context's oracle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ElementKey {
    Coset(u32),
    Britton(BrittonForm),
    Thompson(FNormalForm),
    Vector(Vec<i64>),
    Free(Word),
}

#[derive(Debug)]
pub struct GroupContext {
    pub name: String,
    pub presentation: Presentation,
    pub oracle: Oracle,
    regular: OnceLock<Option<Arc<CosetTable>>>,
}

impl GroupContext {
    pub fn new(name: impl Into<String>, presentation: Presentation, oracle: Oracle) -> Arc<Self> {
        Arc::new(GroupContext { name: name.into(), presentation, oracle, regular: OnceLock::new() })
    }

    pub fn names(&self) -> &[String] {
        self.presentation.names()
    }

    pub fn generator_count(&self) -> Option<usize> {
        self.presentation.generator_count()
    }

    /// Every oracle other than the coset table serves a torsion-free group.
    pub fn torsion_free(&self) -> bool {
        !matches!(self.oracle, Oracle::CosetTable { .. })
    }

    /// Generators used for searches: all of them, or `x0, x1` for Thompson's group.
    pub fn search_generators(&self) -> Vec<u32> {
        match self.generator_count() {
            Some(n) => (0..n as u32).collect(),
            None => vec![0, 1],
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.presentation.parse_word(text)
    }

    pub fn show(&self, w: &Word) -> String {
        let names = self.names();
        w.display_with((!names.is_empty()).then_some(names)).to_string()
    }

    /// Regular representation, for coset-table contexts whose enumeration closes.
    pub fn regular_table(&self) -> Option<Arc<CosetTable>> {
        self.regular
            .get_or_init(|| {
                let Oracle::CosetTable { limit } = self.oracle else { return None };
                todd_coxeter(&self.presentation, &[], limit).ok().map(Arc::new)
            })
            .clone()
    }

    /// Representatives of all elements of a finite group.
    pub fn elements(&self) -> Option<Vec<Word>> {
        self.regular_table().map(|t| t.representatives().to_vec())
    }

    pub fn element_key(&self, w: &Word) -> Option<ElementKey> {
        Some(match self.oracle {
            Oracle::CosetTable { .. } => ElementKey::Coset(self.regular_table()?.coset_of(w) as u32),
            Oracle::Britton(bs) => ElementKey::Britton(bs.reduce(w)),
            Oracle::ThompsonNormalForm => ElementKey::Thompson(f_normal_form(w)),
            Oracle::FreeAbelian => ElementKey::Vector(w.exponent_vector(self.generator_count().unwrap_or(0))),
            Oracle::Free => ElementKey::Free(w.clone()),
        })
    }

    pub fn is_trivial(&self, w: &Word) -> Truth {
        if w.is_empty() {
            return Truth::True;
        }
        match self.element_key(w) {
            Some(k) => Truth::from(Some(k) == self.element_key(&Word::identity())),
            None => Truth::Unknown,
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Truth {
        self.is_trivial(&u.mul(&v.inverse()))
    }

    /// Canonical word for the element, when the oracle has one.
    pub fn normal_word(&self, w: &Word) -> Option<Word> {
        Some(match self.oracle {
            Oracle::CosetTable { .. } => {
                let t = self.regular_table()?;
                t.representative(t.coset_of(w)).clone()
            }
            Oracle::Britton(bs) => bs.reduce(w).to_word(),
            Oracle::ThompsonNormalForm => f_normal_form(w).to_word(),
            Oracle::FreeAbelian => {
                let v = w.exponent_vector(self.generator_count().unwrap_or(0));
                v.iter().enumerate().fold(Word::identity(), |acc, (k, &e)| acc.mul(&Word::power_of(k as u32, e)))
            }
            Oracle::Free => w.clone(),
        })
    }
}

/// Finite permutation representation of a group on the right cosets `Hg` of a subgroup.
///
/// Coset 0 is the subgroup itself; representatives are shortlex-least words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    generators: usize,
    action: Vec<u32>,
    reps: Vec<Word>,
}

impl CosetTable {
    pub const BASE: usize = 0;

    /// Builds a table from an action on `count` cosets, renumbering in BFS order.
    pub fn from_action(generators: usize, count: usize, act: impl Fn(usize, Letter) -> usize) -> Self {
        Self::from_action_at(generators, count, Self::BASE, act)
    }

    /// Like [`CosetTable::from_action`], with `start` as the new base coset.
    /// Only cosets reachable from `start` are kept.
    pub fn from_action_at(generators: usize, count: usize, start: usize, act: impl Fn(usize, Letter) -> usize) -> Self {
        let cols = 2 * generators;
        let mut index = vec![usize::MAX; count];
        let mut order = vec![start];
        let mut reps = vec![Word::identity()];
        index[start] = 0;
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            for col in 0..cols {
                let d = act(c, Letter::from_column(col));
                if index[d] == usize::MAX {
                    index[d] = order.len();
                    order.push(d);
                    let mut w = reps[head].clone();
                    w.push(Letter::from_column(col));
                    reps.push(w);
                }
            }
            head += 1;
        }
        let mut action = vec![0u32; order.len() * cols];
        for (new, &old) in order.iter().enumerate() {
            for col in 0..cols {
                action[new * cols + col] = index[act(old, Letter::from_column(col))] as u32;
            }
        }
        CosetTable { generators, action, reps }
    }

    /// Table of the conjugate `H^g`, whose cosets `H^g t` correspond to `Hgt`.
    pub fn conjugated(&self, g: &Word) -> CosetTable {
        CosetTable::from_action_at(self.generators, self.count(), self.coset_of(g), |c, l| self.act(c, l))
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn act(&self, coset: usize, l: Letter) -> usize {
        self.action[coset * 2 * self.generators + l.column()] as usize
    }

    pub fn act_word(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// The coset `Hw`.
    pub fn coset_of(&self, w: &Word) -> usize {
        self.act_word(Self::BASE, w)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.coset_of(w) == Self::BASE
    }

    pub fn representative(&self, coset: usize) -> &Word {
        &self.reps[coset]
    }

    pub fn representatives(&self) -> &[Word] {
        &self.reps
    }

    /// Checks the table invariants against a presentation and subgroup generators.
    pub fn verify(&self, presentation: &Presentation, subgroup: &[Word]) -> bool {
        let n = self.count();
        let perms = (0..2 * self.generators).all(|col| {
            let l = Letter::from_column(col);
            (0..n).all(|c| self.act(self.act(c, l), l.inv()) == c)
        });
        let rels = presentation.relators.iter().all(|r| (0..n).all(|c| self.act_word(c, r) == c));
        perms && rels && subgroup.iter().all(|g| self.contains(g))
    }

    /// Table of `H ∩ K` from the tables of `H` and `K`: the pairs of cosets
    /// reachable from the base pair under the componentwise action.
    pub fn fiber_product(&self, other: &CosetTable) -> CosetTable {
        assert_eq!(self.generators, other.generators);
        let m = other.count();
        let mut ids = std::collections::HashMap::new();
        let mut pairs = vec![(Self::BASE, Self::BASE)];
        ids.insert((Self::BASE, Self::BASE), 0usize);
        let mut head = 0;
        while head < pairs.len() {
            let (a, b) = pairs[head];
            for col in 0..2 * self.generators {
                let l = Letter::from_column(col);
                let p = (self.act(a, l), other.act(b, l));
                if !ids.contains_key(&p) {
                    ids.insert(p, pairs.len());
                    pairs.push(p);
                }
            }
            head += 1;
        }
        let _ = m;
        CosetTable::from_action(self.generators, pairs.len(), |i, l| {
            let (a, b) = pairs[i];
            ids[&(self.act(a, l), other.act(b, l))]
        })
    }

    /// Schreier generators of the subgroup, with trivial ones dropped.
    pub fn schreier_generators(&self) -> Vec<Word> {
        let mut out: Vec<Word> = Vec::new();
        for c in 0..self.count() {
            for g in 0..self.generators as u32 {
                let l = Letter::pos(g);
                let d = self.act(c, l);
                let mut w = self.reps[c].clone();
                w.push(l);
                let w = w.mul(&self.reps[d].inverse());
                if !w.is_empty() && !out.contains(&w) && !out.contains(&w.inverse()) {
                    out.push(w);
                }
            }
        }
        out
    }
}

/// Todd-Coxeter enumeration (HLT strategy) of the cosets of `<subgroup>`.
///
/// Fails with [`Error::Incomplete`] once more than `limit` cosets are live.
pub fn todd_coxeter(presentation: &Presentation, subgroup: &[Word], limit: usize) -> Result<CosetTable> {
    let n = presentation.generator_count().ok_or(Error::NeedsFinitePresentation)?;
    let mut e = Enumerator::new(n, limit);
    let rels: Vec<Vec<usize>> =
        presentation.relators.iter().map(|r| r.letters().iter().map(|l| l.column()).collect()).collect();
    for g in subgroup {
        let cols: Vec<usize> = g.letters().iter().map(|l| l.column()).collect();
        e.scan_and_fill(0, &cols)?;
    }
    let mut c = 0;
    while c < e.rows() {
        for r in &rels {
            if !e.is_live(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        if e.is_live(c) {
            for col in 0..2 * n {
                if e.get(c, col) == NONE {
                    e.define(c, col)?;
                }
            }
        }
        c += 1;
    }
    Ok(e.finish())
}

const NONE: usize = usize::MAX;

struct Enumerator {
    cols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    live: usize,
    limit: usize,
    queue: VecDeque<usize>,
}

impl Enumerator {
    fn new(generators: usize, limit: usize) -> Self {
        let cols = 2 * generators;
        Enumerator { cols, table: vec![NONE; cols], parent: vec![0], live: 1, limit, queue: VecDeque::new() }
    }

    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn get(&self, c: usize, col: usize) -> usize {
        self.table[c * self.cols + col]
    }

    fn set(&mut self, c: usize, col: usize, d: usize) {
        self.table[c * self.cols + col] = d;
    }

    fn define(&mut self, c: usize, col: usize) -> Result<()> {
        // Dead rows are never reclaimed, so the total is bounded as well.
        if self.live >= self.limit || self.rows() >= self.limit.saturating_mul(20) {
            return Err(Error::Incomplete { limit: self.limit });
        }
        let d = self.rows();
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.parent.push(d);
        self.live += 1;
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        Ok(())
    }

    fn find(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut k = c;
        while self.parent[k] != r {
            let next = self.parent[k];
            self.parent[k] = r;
            k = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            self.live -= 1;
            self.queue.push_back(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        while let Some(g) = self.queue.pop_front() {
            for col in 0..self.cols {
                let d = self.get(g, col);
                if d == NONE {
                    continue;
                }
                self.set(d, col ^ 1, NONE);
                let mu = self.find(g);
                let nu = self.find(d);
                let mu_x = self.get(mu, col);
                if mu_x != NONE {
                    self.merge(nu, mu_x);
                } else {
                    let nu_xi = self.get(nu, col ^ 1);
                    if nu_xi != NONE {
                        self.merge(mu, nu_xi);
                    } else {
                        self.set(mu, col, nu);
                        self.set(nu, col ^ 1, mu);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        loop {
            if !self.is_live(c) {
                return Ok(());
            }
            let mut f = c;
            let mut i = 0usize;
            let mut b = c;
            let mut j = w.len() as isize - 1;
            while (i as isize) <= j && self.get(f, w[i]) != NONE {
                f = self.get(f, w[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, w[j as usize] ^ 1) != NONE {
                b = self.get(b, w[j as usize] ^ 1);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i as isize {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            } else {
                self.define(f, w[i])?;
            }
        }
    }

    fn finish(mut self) -> CosetTable {
        let live: Vec<usize> = (0..self.rows()).filter(|&c| self.is_live(c)).collect();
        let mut slot = vec![NONE; self.rows()];
        for (i, &c) in live.iter().enumerate() {
            slot[c] = i;
        }
        let gens = self.cols / 2;
        let cols = self.cols;
        let dense: Vec<usize> = live
            .iter()
            .flat_map(|&c| (0..cols).map(move |col| (c, col)))
            .map(|(c, col)| {
                let d = self.get(c, col);
                slot[self.find(d)]
            })
            .collect();
        CosetTable::from_action(gens, live.len(), |i, l| dense[i * cols + l.column()])
    }
}

fn letter_names(prefix: &[&str]) -> Vec<String> {
    prefix.iter().map(|s| s.to_string()).collect()
}

fn commutators(n: usize) -> Vec<Word> {
    let mut rels = Vec::new();
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            let (a, b) = (Word::generator(i), Word::generator(j));
            rels.push(a.inverse().mul(&b.inverse()).mul(&a).mul(&b));
        }
    }
    rels
}

fn parse_args(text: &str, prefix: &str) -> Option<Vec<i64>> {
    let inner = text.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|s| s.trim().parse().ok()).collect()
}

/// Built-in groups: `bs(m,n)`, `thompson-f`, `zn(k)`, `sym3`, `cyclic(n)`,
/// `klein4`, `free(k)`.
pub fn preset(name: &str) -> Result<Arc<GroupContext>> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let unknown = || Error::UnknownPreset(name.to_string());
    let tc = Oracle::CosetTable { limit: DEFAULT_ENUMERATION_LIMIT };
    let ctx = match key.as_str() {
        "thompson-f" | "thompson" | "f" => GroupContext::new(
            "thompson-f",
            Presentation { generators: Generators::ThompsonSchema, relators: vec![] },
            Oracle::ThompsonNormalForm,
        ),
        "sym3" | "s3" => {
            let p = Presentation::finite(&["a", "b"], vec![]);
            let rels = ["a^2", "b^2", "(a b)^3"].iter().map(|r| p.parse_word(r)).collect::<Result<_>>()?;
            GroupContext::new("sym3", Presentation::finite(&["a", "b"], rels), tc)
        }
        "klein4" | "v4" => {
            let p = Presentation::finite(&["a", "b"], vec![]);
            let rels = ["a^2", "b^2", "(a b)^2"].iter().map(|r| p.parse_word(r)).collect::<Result<_>>()?;
            GroupContext::new("klein4", Presentation::finite(&["a", "b"], rels), tc)
        }
        _ => {
            if let Some(args) = parse_args(&key, "bs") {
                let [m, n] = args[..] else { return Err(unknown()) };
                if m <= 0 || n <= 0 {
                    return Err(unknown());
                }
                let rel = Word::generator(1)
                    .inverse()
                    .mul(&Word::power_of(0, m))
                    .mul(&Word::generator(1))
                    .mul(&Word::power_of(0, -n));
                GroupContext::new(
                    format!("bs({m},{n})"),
                    Presentation::finite(&["x", "y"], vec![rel]),
                    Oracle::Britton(Bs::new(m, n)),
                )
            } else if let Some(args) = parse_args(&key, "zn") {
                let [k] = args[..] else { return Err(unknown()) };
                if !(1..=64).contains(&k) {
                    return Err(unknown());
                }
                let names: Vec<String> = match k {
                    1 => letter_names(&["t"]),
                    2 => letter_names(&["u", "v"]),
                    _ => (0..k).map(|i| format!("x{i}")).collect(),
                };
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                GroupContext::new(
                    format!("zn({k})"),
                    Presentation::finite(&refs, commutators(k as usize)),
                    Oracle::FreeAbelian,
                )
            } else if let Some(args) = parse_args(&key, "cyclic") {
                let [n] = args[..] else { return Err(unknown()) };
                if n <= 0 {
                    return Err(unknown());
                }
                GroupContext::new(format!("cyclic({n})"), Presentation::finite(&["a"], vec![Word::power_of(0, n)]), tc)
            } else if let Some(args) = parse_args(&key, "free") {
                let [k] = args[..] else { return Err(unknown()) };
                if !(1..=26).contains(&k) {
                    return Err(unknown());
                }
                let names: Vec<String> = (0..k as u8).map(|i| ((b'a' + i) as char).to_string()).collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                GroupContext::new(format!("free({k})"), Presentation::finite(&refs, vec![]), Oracle::Free)
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(ctx)
}

/// Parses the line-based presentation format:
///
/// ```text
/// gens: a b
/// rels: a^2 b^2 (a b)^3
/// oracle: coset-table
/// ```
///
/// Without commas, every top-level term of `rels:` is one relator; with
/// commas, the comma-separated pieces are. `#` starts a comment.
pub fn parse_presentation(text: &str) -> Result<(Presentation, Oracle)> {
    let mut names: Option<Vec<String>> = None;
    let mut relators: Option<Vec<Word>> = None;
    let mut oracle = None;
    let mut thompson = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line_err = |column: usize, message: String| Error::Parse { line: lineno + 1, column, message };
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(line_err(1, "expected `key: value`".into()));
        };
        let offset = key.len() + 2;
        match key.trim() {
            "gens" => {
                if names.is_some() {
                    return Err(line_err(1, "duplicate `gens:`".into()));
                }
                if value.trim() == "thompson" {
                    thompson = true;
                    names = Some(vec![]);
                    continue;
                }
                let list: Vec<String> = value
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect();
                for (i, n) in list.iter().enumerate() {
                    if !n.chars().all(|c| c.is_alphanumeric() || c == '_') || n == "1" {
                        return Err(line_err(offset, format!("bad generator name `{n}`")));
                    }
                    if list[..i].contains(n) {
                        return Err(line_err(offset, format!("duplicate generator `{n}`")));
                    }
                }
                names = Some(list);
            }
            "rels" => {
                let Some(list) = &names else {
                    return Err(line_err(1, "`rels:` before `gens:`".into()));
                };
                let shift = |e: Error| match e {
                    Error::Parse { column, message, .. } => line_err(column + offset - 1, message),
                    other => other,
                };
                let words: Vec<Word> = if value.contains(',') {
                    value
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| parse_word(s, list))
                        .collect::<Result<_>>()
                        .map_err(shift)?
                } else {
                    parse_terms(value, list).map_err(shift)?
                };
                relators.get_or_insert_with(Vec::new).extend(words.into_iter().filter(|w| !w.is_empty()));
            }
            "oracle" => {
                let v = value.trim();
                oracle = Some(match v {
                    "coset-table" => Oracle::CosetTable { limit: DEFAULT_ENUMERATION_LIMIT },
                    "thompson-normal-form" => Oracle::ThompsonNormalForm,
                    "free-abelian" => Oracle::FreeAbelian,
                    "free" => Oracle::Free,
                    _ => match parse_args(&v.replace(' ', ""), "britton") {
                        Some(a) if a.len() == 2 && a[0] > 0 && a[1] > 0 => Oracle::Britton(Bs::new(a[0], a[1])),
                        _ => return Err(line_err(offset, format!("unknown oracle `{v}`"))),
                    },
                });
            }
            other => return Err(line_err(1, format!("unknown key `{other}`"))),
        }
    }
    let Some(names) = names else {
        return Err(Error::Parse { line: 1, column: 1, message: "missing `gens:`".into() });
    };
    let generators = if thompson { Generators::ThompsonSchema } else { Generators::Finite(names) };
    let relators = relators.unwrap_or_default();
    if thompson && !relators.is_empty() {
        return Err(Error::Parse { line: 1, column: 1, message: "schema groups take no relators".into() });
    }
    let oracle = oracle.unwrap_or(match (&generators, relators.is_empty()) {
        (Generators::ThompsonSchema, _) => Oracle::ThompsonNormalForm,
        (_, true) => Oracle::Free,
        _ => Oracle::CosetTable { limit: DEFAULT_ENUMERATION_LIMIT },
    });
    Ok((Presentation { generators, relators }, oracle))
}

/// Canonical text form accepted by [`parse_presentation`].
pub fn serialize_presentation(p: &Presentation, oracle: &Oracle) -> String {
    let gens = match &p.generators {
        Generators::Finite(n) => n.join(" "),
        Generators::ThompsonSchema => "thompson".to_string(),
    };
    let names = p.names();
    let rels: Vec<String> =
        p.relators.iter().map(|r| r.display_with((!names.is_empty()).then_some(names)).to_string()).collect();
    let mut out = format!("gens: {gens}\n");
    if !rels.is_empty() {
        // A lone relator keeps a trailing comma so it is not split into terms.
        let tail = if rels.len() == 1 { "," } else { "" };
        out.push_str(&format!("rels: {}{tail}\n", rels.join(", ")));
    }
    out.push_str(&format!("oracle: {oracle}\n"));
    out
}

/// Resolves a preset name, or reads a presentation file.
pub fn load_group(spec: &str) -> Result<Arc<GroupContext>> {
    match preset(spec) {
        Ok(ctx) => Ok(ctx),
        Err(Error::UnknownPreset(_)) if std::path::Path::new(spec).is_file() => {
            let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse {
                line: 0,
                column: 0,
                message: e.to_string(),
            })?;
            let (p, o) = parse_presentation(&text)?;
            Ok(GroupContext::new(spec, p, o))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym3() -> Arc<GroupContext> {
        preset("sym3").unwrap()
    }

    #[test]
    fn cyclic_three() {
        let p = Presentation::finite(&["a"], vec![Word::power_of(0, 3)]);
        let t = todd_coxeter(&p, &[], 100).unwrap();
        assert_eq!(t.count(), 3);
        assert!(t.verify(&p, &[]));
    }

    #[test]
    fn sym3_tables() {
        let g = sym3();
        let a = g.parse_word("a").unwrap();
        let t = todd_coxeter(&g.presentation, &[a.clone()], 1000).unwrap();
        assert_eq!(t.count(), 3);
        assert!(t.verify(&g.presentation, &[a.clone()]));
        assert_eq!(t.coset_of(&Word::identity()), CosetTable::BASE);
        assert_eq!(t.coset_of(&a), CosetTable::BASE);
        assert_ne!(t.coset_of(&g.parse_word("b").unwrap()), CosetTable::BASE);
        assert_eq!(g.regular_table().unwrap().count(), 6);
    }

    #[test]
    fn bs_is_incomplete() {
        let g = preset("bs(2,3)").unwrap();
        let x = g.parse_word("x").unwrap();
        assert_eq!(todd_coxeter(&g.presentation, &[x], 10_000), Err(Error::Incomplete { limit: 10_000 }));
    }

    #[test]
    fn bs_word_problem() {
        let g = preset("bs(2,3)").unwrap();
        assert_eq!(g.is_trivial(&Word::identity()), Truth::True);
        assert_eq!(g.is_trivial(&g.parse_word("y^-1 x^2 y x^-3").unwrap()), Truth::True);
        assert_eq!(g.is_trivial(&g.parse_word("y^-1 x y x^-1").unwrap()), Truth::False);
    }

    #[test]
    fn fiber_product_in_sym3() {
        let g = sym3();
        let a = g.parse_word("a").unwrap();
        let bab = g.parse_word("b a b").unwrap();
        let ta = todd_coxeter(&g.presentation, &[a], 100).unwrap();
        let tb = todd_coxeter(&g.presentation, &[bab], 100).unwrap();
        let meet = ta.fiber_product(&tb);
        assert_eq!(meet.count(), 6);
        assert!(meet.verify(&g.presentation, &[]));
        assert!(meet.schreier_generators().iter().all(|w| g.is_trivial(w).is_true()));
    }

    #[test]
    fn presentation_format() {
        let (p, o) = parse_presentation("gens: a b\nrels: a^2 b^2 (a b)^3").unwrap();
        assert_eq!(p.generator_count(), Some(2));
        assert_eq!(p.relators.len(), 3);
        assert!(matches!(o, Oracle::CosetTable { .. }));
        let (p, o) = parse_presentation("gens: a b\nrels:\n").unwrap();
        assert!(p.relators.is_empty());
        assert_eq!(o, Oracle::Free);
        let err = parse_presentation("rels: a^2\ngens: a").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_presentation("gens: a\nrels: a^2 c").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 11, .. }), "{err:?}");
        let text = serialize_presentation(&p, &o);
        let (p2, o2) = parse_presentation(&text).unwrap();
        assert_eq!((p2, o2), (p, o));
        let bs = preset("bs(2,3)").unwrap();
        let text = serialize_presentation(&bs.presentation, &bs.oracle);
        assert_eq!(text, "gens: x y\nrels: y^-1 x^2 y x^-3,\noracle: britton(2,3)\n");
        assert_eq!(parse_presentation(&text).unwrap(), (bs.presentation.clone(), bs.oracle));
    }

    #[test]
    fn abelianization() {
        assert_eq!(sym3().presentation.abelian_invariants().unwrap(), vec![2]);
        assert_eq!(preset("zn(2)").unwrap().presentation.abelian_invariants().unwrap(), vec![0, 0]);
        assert_eq!(preset("bs(2,3)").unwrap().presentation.abelian_invariants().unwrap(), vec![0]);
        assert_eq!(preset("klein4").unwrap().presentation.abelian_invariants().unwrap(), vec![2, 2]);
    }

    #[test]
    fn presets() {
        for name in ["bs(2,3)", "thompson-f", "zn(1)", "zn(2)", "sym3", "cyclic(4)", "klein4", "free(2)"] {
            assert!(preset(name).is_ok(), "{name}");
        }
        assert!(matches!(preset("nosuch"), Err(Error::UnknownPreset(_))));
        assert_eq!(preset("cyclic(4)").unwrap().elements().unwrap().len(), 4);
        assert_eq!(preset("klein4").unwrap().elements().unwrap().len(), 4);
    }
}
