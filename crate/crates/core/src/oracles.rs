//! Slow reference implementations used to cross-check the main algorithms.
//!
//! Nothing here shares code with the engines it checks: words are plain
//! `(index, inverse)` lists rewritten one local move at a time, and finite
//! groups are explicit permutation groups.

use std::collections::{BTreeSet, HashMap};

use crate::baumslag_solitar::Bs;
use crate::thompson::FNormalForm;
use crate::words::{Letter, Word};

type Raw = Vec<(u32, bool)>;

fn raw(w: &Word) -> Raw {
    w.letters().iter().map(|l| (l.generator, l.inverse)).collect()
}

/// Rewrites a word of Thompson's group by local moves until no move applies:
/// free cancellation, the four reorderings derived from
/// `x_i^-1 x_j x_i = x_{j+1}` (`i < j`), and removal of pairs `x_k ... x_k^-1`
/// enclosing only indices `>= k + 2`. Returns the positive indices in order
/// and the negative indices read right to left.
pub fn thompson_rewrite(mut w: Raw) -> (Vec<u32>, Vec<u32>) {
    loop {
        if local_move(&mut w) {
            continue;
        }
        if !remove_bad_pair(&mut w) {
            break;
        }
    }
    let split = w.iter().position(|&(_, inv)| inv).unwrap_or(w.len());
    let pos = w[..split].iter().map(|&(i, _)| i).collect();
    let neg = w[split..].iter().rev().map(|&(i, _)| i).collect();
    (pos, neg)
}

fn local_move(w: &mut Raw) -> bool {
    for k in 0..w.len().saturating_sub(1) {
        let ((a, ai), (b, bi)) = (w[k], w[k + 1]);
        if a == b && ai != bi {
            w.drain(k..k + 2);
            return true;
        }
        let replacement = match (ai, bi) {
            (false, false) if b < a => [(b, false), (a + 1, false)],
            (true, false) if a < b => [(b + 1, false), (a, true)],
            (true, false) if b < a => [(b, false), (a + 1, true)],
            (true, true) if a < b => [(b + 1, true), (a, true)],
            _ => continue,
        };
        w[k] = replacement[0];
        w[k + 1] = replacement[1];
        return true;
    }
    false
}

fn remove_bad_pair(w: &mut Raw) -> bool {
    let split = w.iter().position(|&(_, inv)| inv).unwrap_or(w.len());
    let has = |k: u32| w.iter().any(|&(i, _)| i == k);
    for p in (0..split).rev() {
        let k = w[p].0;
        let Some(q) = (split..w.len()).find(|&q| w[q].0 == k) else { continue };
        if has(k + 1) {
            continue;
        }
        for letter in &mut w[p + 1..q] {
            letter.0 -= 1;
        }
        w.remove(q);
        w.remove(p);
        return true;
    }
    false
}

#[derive(Clone, Debug, Default)]
pub struct AgreementReport {
    pub words: u64,
    pub mismatches: Vec<String>,
}

impl AgreementReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the normal-form engine with [`thompson_rewrite`] on every freely
/// reduced word of length `<= max_len` in `x_0, ..., x_max_index`. Subtrees
/// of the search are split by first letter across threads.
pub fn thompson_agreement(max_len: usize, max_index: u32) -> AgreementReport {
    let letters: Vec<Letter> = (0..=max_index).flat_map(|i| [Letter::pos(i), Letter::neg(i)]).collect();
    let mut report = AgreementReport { words: 1, mismatches: Vec::new() };
    if max_len == 0 {
        return report;
    }
    let letters = &letters;
    let parts: Vec<AgreementReport> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            letters.iter().map(|&first| scope.spawn(move || thompson_subtree(letters, first, max_len))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for part in parts {
        report.words += part.words;
        report.mismatches.extend(part.mismatches);
    }
    report.mismatches.truncate(10);
    report
}

fn thompson_subtree(letters: &[Letter], first: Letter, max_len: usize) -> AgreementReport {
    let mut report = AgreementReport::default();
    let mut word: Vec<Letter> = Vec::new();
    let mut engine = vec![FNormalForm::identity()];
    let mut naive: Vec<Raw> = vec![Vec::new()];
    // Iterative DFS; `choice[d]` is the next letter to try at depth `d`.
    let mut choice = vec![0usize];
    while let Some(c) = choice.last_mut() {
        if *c == letters.len() || word.len() == max_len {
            choice.pop();
            if word.pop().is_some() {
                engine.pop();
                naive.pop();
            }
            continue;
        }
        let l = letters[*c];
        *c += 1;
        if word.last() == Some(&l.inv()) || (word.is_empty() && l != first) {
            continue;
        }
        let mut e = engine.last().unwrap().clone();
        e.mul_letter(l);
        let mut n = naive.last().unwrap().clone();
        n.push((l.generator, l.inverse));
        let (pos, neg) = thompson_rewrite(n);
        word.push(l);
        report.words += 1;
        if (e.positive() != pos.as_slice() || e.negative() != neg.as_slice()) && report.mismatches.len() < 10 {
            report.mismatches.push(format!("{}: engine {e}, naive {pos:?} / {neg:?}", Word::new(word.clone())));
        }
        let mut rebuilt: Raw = pos.iter().map(|&i| (i, false)).collect();
        rebuilt.extend(neg.iter().rev().map(|&i| (i, true)));
        engine.push(e);
        naive.push(rebuilt);
        choice.push(0);
    }
    report
}

/// Removes pinches `y^-1 x^(jm) y -> x^(jn)` and `y x^(jn) y^-1 -> x^(jm)` and
/// cancels inverse pairs until neither applies. By Britton's lemma the
/// result is empty iff the word is trivial, and equal elements give results
/// with the same sequence of stable letters.
pub fn bs_pinch_free(bs: Bs, w: &Word) -> Raw {
    let mut w = raw(w);
    'outer: loop {
        for k in 0..w.len().saturating_sub(1) {
            if w[k].0 == w[k + 1].0 && w[k].1 != w[k + 1].1 {
                w.drain(k..k + 2);
                continue 'outer;
            }
        }
        for i in 0..w.len() {
            if w[i].0 != 1 {
                continue;
            }
            let Some(j) = (i + 1..w.len()).find(|&j| w[j].0 == 1) else { break };
            if w[j].1 == w[i].1 {
                continue;
            }
            let a: i64 = w[i + 1..j].iter().map(|&(_, inv)| if inv { -1 } else { 1 }).sum();
            let (modulus, image) = if w[i].1 { (bs.m, bs.n) } else { (bs.n, bs.m) };
            if a % modulus != 0 {
                continue;
            }
            let b = a / modulus * image;
            let xs = std::iter::repeat((0, b < 0)).take(b.unsigned_abs() as usize);
            w.splice(i..=j, xs);
            continue 'outer;
        }
        break;
    }
    w
}

pub fn bs_stable_signs(w: &Raw) -> Vec<i8> {
    w.iter().filter(|&&(g, _)| g == 1).map(|&(_, inv)| if inv { -1 } else { 1 }).collect()
}

/// Checks the Britton reducer against [`bs_pinch_free`] on every freely
/// reduced word of length `<= max_len`, and the equality relation on all
/// pairs of words of length `<= pair_len`.
pub fn bs_agreement(bs: Bs, max_len: usize, pair_len: usize) -> AgreementReport {
    let mut report = AgreementReport::default();
    let note = |report: &mut AgreementReport, msg: String| {
        if report.mismatches.len() < 10 {
            report.mismatches.push(msg);
        }
    };
    let words = crate::words::ball_words(&[0, 1], max_len);
    for w in &words {
        report.words += 1;
        let form = bs.reduce(w);
        let naive = bs_pinch_free(bs, w);
        if form.stable_letters().collect::<Vec<_>>() != bs_stable_signs(&naive) {
            note(&mut report, format!("{w}: stable letters differ"));
        }
        if form.is_identity() != naive.is_empty() {
            note(&mut report, format!("{w}: triviality differs"));
        }
        if !bs_pinch_free(bs, &w.mul(&form.to_word().inverse())).is_empty() {
            note(&mut report, format!("{w}: form {form} is a different element"));
        }
    }
    let short: Vec<&Word> = words.iter().filter(|w| w.len() <= pair_len).collect();
    for u in &short {
        for v in &short {
            let same = bs.reduce(u) == bs.reduce(v);
            if same != bs_pinch_free(bs, &u.mul(&v.inverse())).is_empty() {
                note(&mut report, format!("{u} vs {v}: equality differs"));
            }
        }
    }
    report
}

pub type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // apply a, then b
    a.iter().map(|&i| b[i]).collect()
}

/// A finite group of permutations listed element by element, each with a
/// word in the generators reaching it.
#[derive(Clone, Debug)]
pub struct PermGroup {
    pub generators: Vec<Perm>,
    pub elements: Vec<Perm>,
    pub words: Vec<Word>,
}

impl PermGroup {
    pub fn generate(generators: Vec<Perm>) -> Self {
        let degree = generators.first().map_or(0, Vec::len);
        let mut elements: Vec<Perm> = vec![(0..degree).collect()];
        let mut words = vec![Word::identity()];
        let mut seen: HashMap<Perm, usize> = HashMap::new();
        seen.insert(elements[0].clone(), 0);
        let mut next = 0;
        while next < elements.len() {
            for (g, s) in generators.iter().enumerate() {
                let e = compose(&elements[next], s);
                if !seen.contains_key(&e) {
                    seen.insert(e.clone(), elements.len());
                    words.push(words[next].mul(&Word::generator(g as u32)));
                    elements.push(e);
                }
            }
            next += 1;
        }
        PermGroup { generators, elements, words }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, p: &Perm) -> usize {
        self.elements.iter().position(|e| e == p).expect("element of the group")
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index_of(&compose(&self.elements[a], &self.elements[b]))
    }

    /// The subgroup generated by a set of elements, as sorted indices.
    pub fn closure(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let c = self.mul(a, g);
                if set.insert(c) {
                    frontier.push(c);
                }
            }
        }
        set
    }

    /// Every subgroup generated by at most two elements.
    pub fn two_generated_subgroups(&self) -> BTreeSet<BTreeSet<usize>> {
        let n = self.order();
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| self.closure(&[a, b])).collect()
    }
}

/// Derivations and inner derivations of a finite permutation group with
/// coefficients in `GF(p)^dim`, counted by listing every function from
/// group elements to the module. `matrices[g]` is the (row-vector) action
/// of generator `g`.
pub fn count_derivations_by_functions(group: &PermGroup, p: u64, dim: usize, matrices: &[Vec<Vec<u64>>]) -> (u64, u64) {
    let act = |v: &[u64], m: &Vec<Vec<u64>>| -> Vec<u64> {
        (0..dim).map(|j| (0..dim).map(|i| v[i] * m[i][j]).sum::<u64>() % p).collect()
    };
    // Element words from `PermGroup::generate` only use positive letters.
    let act_word = |v: &[u64], w: &Word| -> Vec<u64> {
        w.letters().iter().fold(v.to_vec(), |acc, l| act(&acc, &matrices[l.generator as usize]))
    };
    let n = group.order();
    let vectors: Vec<Vec<u64>> = (0..p.pow(dim as u32))
        .map(|mut c| {
            (0..dim)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect()
        })
        .collect();
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| group.mul(a, b)).collect()).collect();
    let add = |a: &[u64], b: &[u64]| -> Vec<u64> { a.iter().zip(b).map(|(x, y)| (x + y) % p).collect() };

    let mut derivations = 0u64;
    let total = (vectors.len() as u64).pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let f: Vec<&Vec<u64>> = (0..n)
            .map(|_| {
                let v = &vectors[(c % vectors.len() as u64) as usize];
                c /= vectors.len() as u64;
                v
            })
            .collect();
        let ok = (0..n).all(|a| (0..n).all(|b| *f[table[a][b]] == add(&act_word(f[a], &group.words[b]), f[b])));
        derivations += u64::from(ok);
    }
    let inner: BTreeSet<Vec<Vec<u64>>> = vectors
        .iter()
        .map(|m| {
            (0..n)
                .map(|g| {
                    let mg = act_word(m, &group.words[g]);
                    mg.iter().zip(m).map(|(x, y)| (x + p - y) % p).collect()
                })
                .collect()
        })
        .collect();
    (derivations, inner.len() as u64)
}

/// Derivations of `<generators | relators>` counted over all assignments of
/// generator values, keeping those that vanish on every relator.
pub fn count_derivations_by_assignments(
    relators: &[Word],
    p: u64,
    dim: usize,
    matrices: &[Vec<Vec<u64>>],
    inverses: &[Vec<Vec<u64>>],
) -> (u64, u64) {
    let act = |v: &[u64], m: &Vec<Vec<u64>>| -> Vec<u64> {
        (0..dim).map(|j| (0..dim).map(|i| v[i] * m[i][j]).sum::<u64>() % p).collect()
    };
    let gens = matrices.len();
    let size = p.pow(dim as u32);
    let vector = |mut c: u64| -> Vec<u64> {
        (0..dim)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    };
    let value = |assign: &[Vec<u64>], w: &Word| -> Vec<u64> {
        // d(u x) = d(u) x + d(x),  d(u x^-1) = (d(u) - d(x)) x^-1
        w.letters().iter().fold(vec![0; dim], |acc, l| {
            let g = l.generator as usize;
            if l.inverse {
                let diff: Vec<u64> = acc.iter().zip(&assign[g]).map(|(a, b)| (a + p - b) % p).collect();
                act(&diff, &inverses[g])
            } else {
                act(&acc, &matrices[g]).iter().zip(&assign[g]).map(|(a, b)| (a + b) % p).collect()
            }
        })
    };
    let mut derivations = 0;
    for code in 0..size.pow(gens as u32) {
        let mut c = code;
        let assign: Vec<Vec<u64>> = (0..gens)
            .map(|_| {
                let v = vector(c % size);
                c /= size;
                v
            })
            .collect();
        derivations += u64::from(relators.iter().all(|r| value(&assign, r).iter().all(|&x| x == 0)));
    }
    let inner: BTreeSet<Vec<Vec<u64>>> = (0..size)
        .map(|c| {
            let m = vector(c);
            matrices.iter().map(|mx| act(&m, mx).iter().zip(&m).map(|(x, y)| (x + p - y) % p).collect()).collect()
        })
        .collect();
    (derivations, inner.len() as u64)
}

/// `log_p(der / ider)`.
pub fn h1_from_counts(p: u64, der: u64, ider: u64) -> usize {
    let mut q = der / ider;
    let mut k = 0;
    while q > 1 {
        q /= p;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thompson_rewriting_basics() {
        // x0^-1 x1 x0 = x2
        assert_eq!(thompson_rewrite(vec![(0, true), (1, false), (0, false)]), (vec![2], vec![]));
        assert_eq!(thompson_rewrite(vec![(1, false), (0, false)]), (vec![0, 2], vec![]));
        assert_eq!(thompson_rewrite(vec![(0, false), (2, false), (0, true)]), (vec![1], vec![]));
        assert!(thompson_agreement(4, 3).pass());
    }

    #[test]
    fn bs_rewriting_basics() {
        let bs = crate::baumslag_solitar::BS23;
        let w = Word::new([Letter::neg(1), Letter::pos(0), Letter::pos(0), Letter::pos(1)]);
        assert_eq!(bs_pinch_free(bs, &w), vec![(0, false); 3]);
        assert!(bs_agreement(bs, 5, 2).pass());
    }

    #[test]
    fn permutation_groups() {
        let s3 = PermGroup::generate(vec![vec![1, 0, 2], vec![0, 2, 1]]);
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.two_generated_subgroups().len(), 6);
        let v4 = PermGroup::generate(vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]);
        assert_eq!(v4.two_generated_subgroups().len(), 5);
    }

    #[test]
    fn cocycle_counts() {
        let c2 = PermGroup::generate(vec![vec![1, 0]]);
        let one = vec![vec![vec![1]]];
        assert_eq!(count_derivations_by_functions(&c2, 2, 1, &one), (2, 1));
        let swap = vec![vec![vec![0, 1], vec![1, 0]]];
        let (d, i) = count_derivations_by_functions(&c2, 2, 2, &swap);
        assert_eq!(h1_from_counts(2, d, i), 0);
        assert_eq!(count_derivations_by_assignments(&[], 2, 1, &one, &one), (2, 1));
    }
}
