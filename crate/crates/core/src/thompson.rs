//! Thompson's group `F = <x0, x1, ... | x_i^-1 x_j x_i = x_{j+1} (i < j)>`.
//!
//! Every element has a unique normal form
//! `x_{p1} ... x_{pk} x_{nl}^-1 ... x_{n1}^-1` with `p1 <= ... <= pk`,
//! `n1 <= ... <= nl`, and whenever `i` occurs in both parts, `i + 1` occurs in
//! at least one of them.
//!
//! The subgroup `A` is generated by `a_n = x_{2n+1} x_{2n}^-1`, and `A_m` by the
//! `a_n` with `n >= m`.

use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::truth::Truth;
use crate::words::{Letter, Word};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FNormalForm {
    pos: Vec<u32>,
    neg: Vec<u32>,
}

impl FNormalForm {
    pub fn identity() -> Self {
        FNormalForm::default()
    }

    pub fn generator(k: u32) -> Self {
        FNormalForm { pos: vec![k], neg: vec![] }
    }

    pub fn is_identity(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    pub fn positive(&self) -> &[u32] {
        &self.pos
    }

    pub fn negative(&self) -> &[u32] {
        &self.neg
    }

    pub fn len(&self) -> usize {
        self.pos.len() + self.neg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.pos.iter().chain(&self.neg).copied().max()
    }

    pub fn min_index(&self) -> Option<u32> {
        self.pos.first().into_iter().chain(self.neg.first()).copied().min()
    }

    pub fn inverse(&self) -> Self {
        FNormalForm { pos: self.neg.clone(), neg: self.pos.clone() }
    }

    pub fn to_word(&self) -> Word {
        let pos = self.pos.iter().map(|&i| Letter::pos(i));
        let neg = self.neg.iter().rev().map(|&i| Letter::neg(i));
        Word::new(pos.chain(neg))
    }

    /// Exponent sums of `x0` and of all `x_i` with `i >= 1`; this is the
    /// abelianization `F -> Z^2`.
    pub fn abelianization(&self) -> (i64, i64) {
        let zeros = |v: &[u32]| v.iter().take_while(|&&i| i == 0).count() as i64;
        let e0 = zeros(&self.pos) - zeros(&self.neg);
        let total = self.pos.len() as i64 - self.neg.len() as i64;
        (e0, total - e0)
    }

    /// Applies the shift endomorphism `x_i -> x_{i+s}` (or its inverse on
    /// forms whose indices are all `>= -s`).
    pub fn shifted(&self, s: i64) -> Option<Self> {
        let sh = |v: &[u32]| -> Option<Vec<u32>> { v.iter().map(|&i| u32::try_from(i as i64 + s).ok()).collect() };
        Some(FNormalForm { pos: sh(&self.pos)?, neg: sh(&self.neg)? })
    }

    pub fn mul_letter(&mut self, l: Letter) {
        if l.inverse {
            insert_front(&mut self.neg, l.generator);
        } else {
            let mut k = l.generator;
            let mut consumed = false;
            let mut idx = 0;
            while idx < self.neg.len() {
                let n = self.neg[idx];
                if n == k {
                    self.neg.remove(idx);
                    consumed = true;
                    break;
                } else if n < k {
                    // x_n^-1 x_k = x_{k+1} x_n^-1
                    k += 1;
                } else {
                    // x_n^-1 x_k = x_k x_{n+1}^-1
                    self.neg[idx] = n + 1;
                }
                idx += 1;
            }
            if !consumed {
                insert_back(&mut self.pos, k);
            }
        }
        self.cancel_pairs();
    }

    pub fn mul_word(&mut self, w: &Word) {
        for &l in w.letters() {
            self.mul_letter(l);
        }
    }

    pub fn mul(&self, other: &FNormalForm) -> FNormalForm {
        let mut out = self.clone();
        out.mul_word(&other.to_word());
        out
    }

    /// Removes `x_i ... x_i^-1` pairs with no `i + 1` in either part:
    /// `x_i W x_i^-1 = W` shifted down by one when `W` only involves indices `>= i + 2`.
    fn cancel_pairs(&mut self) {
        loop {
            let bad = self.pos.iter().rev().copied().find(|&i| {
                self.neg.binary_search(&i).is_ok()
                    && self.pos.binary_search(&(i + 1)).is_err()
                    && self.neg.binary_search(&(i + 1)).is_err()
            });
            let Some(i) = bad else { break };
            remove_and_lower(&mut self.pos, i);
            remove_and_lower(&mut self.neg, i);
        }
    }
}

/// `P x_k` re-sorted with `x_j x_k = x_k x_{j+1}` for `k < j`.
fn insert_back(v: &mut Vec<u32>, k: u32) {
    let at = v.partition_point(|&p| p <= k);
    for p in &mut v[at..] {
        *p += 1;
    }
    v.insert(at, k);
}

/// `x_k N` re-sorted: `x_k` moves right past every smaller index, gaining one each time.
fn insert_front(v: &mut Vec<u32>, mut k: u32) {
    let mut at = 0;
    while at < v.len() && v[at] < k {
        k += 1;
        at += 1;
    }
    v.insert(at, k);
}

fn remove_and_lower(v: &mut Vec<u32>, i: u32) {
    let last = v.partition_point(|&p| p <= i) - 1;
    v.remove(last);
    for p in &mut v[last..] {
        *p -= 1;
    }
}

impl fmt::Display for FNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_word().fmt(f)
    }
}

pub fn f_normal_form(w: &Word) -> FNormalForm {
    let mut form = FNormalForm::identity();
    form.mul_word(w);
    form
}

pub fn f_equal(u: &Word, v: &Word) -> bool {
    f_normal_form(u) == f_normal_form(v)
}

/// `x_{2n+1} x_{2n}^-1`.
pub fn a_generator(n: u32) -> Word {
    Word::new([Letter::pos(2 * n + 1), Letter::neg(2 * n)])
}

/// Checks `x_{2m}^-1 a_n x_{2m} = x_{2n+2} x_{2n+1}^-1` and the same with
/// `x_{2m+1}` as conjugator.
pub fn verify_conjugation_identity(m: u32, n: u32) -> bool {
    assert!(m < n, "needs 0 <= m < n");
    let rhs = f_normal_form(&Word::new([Letter::pos(2 * n + 2), Letter::neg(2 * n + 1)]));
    let a = a_generator(n);
    [2 * m, 2 * m + 1].into_iter().all(|c| f_normal_form(&a.conjugate(&Word::generator(c))) == rhs)
}

/// `[a_m, a_n]` is trivial.
pub fn generators_commute(m: u32, n: u32) -> bool {
    let (a, b) = (a_generator(m), a_generator(n));
    f_normal_form(&a.inverse().mul(&b.inverse()).mul(&a).mul(&b)).is_identity()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftReport {
    pub j: i64,
    /// Least `n` in the range from which `g^-1 x_n g = x_{n+j}` holds through the end.
    pub threshold: Option<u32>,
    pub all_pass: bool,
}

pub fn verify_shift(g: &Word, n_range: RangeInclusive<u32>) -> ShiftReport {
    let j = g.exponent_sum();
    let ginv = g.inverse();
    let holds = |n: u32| -> bool {
        let Ok(target) = u32::try_from(n as i64 + j) else { return false };
        let mut form = f_normal_form(&ginv);
        form.mul_letter(Letter::pos(n));
        form.mul_word(g);
        form == FNormalForm::generator(target)
    };
    let mut threshold = None;
    for n in n_range.rev() {
        if holds(n) {
            threshold = Some(n);
        } else {
            break;
        }
    }
    ShiftReport { j, threshold, all_pass: threshold.is_some() }
}

/// Range that certifies the shift for `g`: beyond `max index + |g|` every
/// letter of `g` has a smaller index than the moving generator.
pub fn shift_range(g: &Word) -> RangeInclusive<u32> {
    let top = g.max_generator().unwrap_or(0) + g.len() as u32 + 8;
    0..=top
}

/// Coordinates `c_n` with `form = prod a_n^{c_n}` when the element lies in `A`.
///
/// Peels the lowest generator: the `x0`-exponent of the abelianization fixes
/// `c_0`, the remainder must lie in `A_1 = shift^2(A)`, which forces all its
/// indices to be `>= 2`; shift down and repeat.
pub fn a_coordinates(form: &FNormalForm, index_bound: u32) -> (Truth, Vec<i64>) {
    if form.max_index().is_some_and(|i| i > index_bound) {
        return (Truth::Unknown, Vec::new());
    }
    let mut cur = form.clone();
    let mut coords = Vec::new();
    let a0 = a_generator(0);
    for _ in 0..=index_bound / 2 + 1 {
        if cur.is_identity() {
            return (Truth::True, coords);
        }
        let (e0, _) = cur.abelianization();
        // a_0 contributes -1 to the x0 exponent.
        let c0 = -e0;
        cur.mul_word(&a0.pow(-c0));
        if cur.min_index().is_some_and(|i| i < 2) {
            return (Truth::False, Vec::new());
        }
        coords.push(c0);
        cur = cur.shifted(-2).expect("indices are >= 2");
    }
    if cur.is_identity() {
        (Truth::True, coords)
    } else {
        (Truth::Unknown, Vec::new())
    }
}

pub fn a_membership(w: &Word, index_bound: u32) -> Truth {
    a_coordinates(&f_normal_form(w), index_bound).0
}

/// Membership in `A_m`: in `A` with coordinates vanishing below `m`.
pub fn am_membership(w: &Word, m: u32, index_bound: u32) -> Truth {
    match a_coordinates(&f_normal_form(w), index_bound) {
        (Truth::True, coords) => Truth::from(coords.iter().take(m as usize).all(|&c| c == 0)),
        (t, _) => t,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugateCertificate {
    /// The conjugating word `g`.
    pub g: String,
    pub exponent_sum: i64,
    /// Shift threshold for `g^-1 x_n g = x_{n+j}`.
    pub threshold: u32,
    /// Shift threshold for `g x_n g^-1 = x_{n-j}`.
    pub inverse_threshold: u32,
    /// Least `m` with `g a_n g^-1` and `g^-1 a_n g` in `A` for every `n >= m`.
    pub m: u32,
    /// `(n, k)` with `g^-1 a_n g = a_k` beyond the threshold.
    pub shifted_generators: Vec<(u32, u32)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmReport {
    pub m: u32,
    pub certificates: Vec<ConjugateCertificate>,
}

/// Least `m <= m_bound` with `A_m` contained in `A^g` and `A^(g^-1)` for each `g`.
///
/// Every `g` must have even exponent sum.
pub fn am_in_conjugate_intersection(gs: &[Word], m_bound: u32) -> Result<AmReport> {
    let mut certificates = Vec::new();
    let mut m_all = 0;
    for g in gs {
        let j = g.exponent_sum();
        if j % 2 != 0 {
            return Err(Error::Precondition(format!("{g} has odd exponent sum {j}")));
        }
        let ginv = g.inverse();
        let fwd = verify_shift(g, shift_range(g));
        let back = verify_shift(&ginv, shift_range(&ginv));
        let (Some(t_fwd), Some(t_back)) = (fwd.threshold, back.threshold) else {
            return Err(Error::BoundExhausted { bound: m_bound });
        };
        // Beyond 2n >= threshold both conjugates of a_n are generators a_{n ± j/2}.
        let certified_from = t_fwd.max(t_back).div_ceil(2);
        let index_bound = 2 * (certified_from + m_bound) + g.len() as u32 + 8;
        let in_a = |n: u32| -> bool {
            let a = a_generator(n);
            a_membership(&a.conjugate(g), index_bound).is_true()
                && a_membership(&a.conjugate(&ginv), index_bound).is_true()
        };
        let mut m = certified_from;
        while m > 0 && in_a(m - 1) {
            m -= 1;
        }
        let shifted_generators = (certified_from..certified_from + 3).map(|n| (n, (n as i64 + j / 2) as u32)).collect();
        m_all = m_all.max(m);
        certificates.push(ConjugateCertificate {
            g: g.to_string(),
            exponent_sum: j,
            threshold: t_fwd,
            inverse_threshold: t_back,
            m,
            shifted_generators,
        });
    }
    if m_all > m_bound {
        return Err(Error::BoundExhausted { bound: m_bound });
    }
    Ok(AmReport { m: m_all, certificates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s, &[]).unwrap()
    }

    #[test]
    fn defining_relation() {
        assert_eq!(f_normal_form(&w("x0^-1 x1 x0")), FNormalForm::generator(2));
        assert!(f_normal_form(&Word::identity()).is_identity());
        assert_eq!(f_normal_form(&w("x1 x0")), f_normal_form(&w("x0 x2")));
    }

    #[test]
    fn inverse_and_cancellation() {
        let g = w("x3 x0^-2 x5 x1^-1 x4");
        assert!(f_normal_form(&g.mul(&g.inverse())).is_identity());
        assert_eq!(f_normal_form(&g).inverse(), f_normal_form(&g.inverse()));
        // x0 x2 x1^-1 x0^-1: x1 occurs, so the x0 pair stays.
        assert_eq!(f_normal_form(&w("x0 x2 x1^-1 x0^-1")).len(), 4);
        // x1 x3 x1^-1 = x2
        assert_eq!(f_normal_form(&w("x1 x3 x1^-1")), FNormalForm::generator(2));
    }

    #[test]
    fn lemma_identities() {
        assert!(verify_conjugation_identity(0, 1));
        assert!(verify_conjugation_identity(0, 2));
        assert!(generators_commute(0, 1));
        assert_eq!(f_normal_form(&w("x0^-1 x3 x2^-1 x0")), f_normal_form(&w("x4 x3^-1")));
    }

    #[test]
    fn shifts() {
        let r = verify_shift(&w("x0^2"), 0..=20);
        assert_eq!(r.j, 2);
        assert_eq!(r.threshold, Some(1));
        assert_eq!(f_normal_form(&w("x0^-2 x5 x0^2")), FNormalForm::generator(7));
        let r = verify_shift(&Word::identity(), 0..=20);
        assert_eq!((r.j, r.threshold), (0, Some(0)));
        let r = verify_shift(&w("x0 x1^-1"), 0..=20);
        assert_eq!(r.j, 0);
        assert_eq!(r.threshold, Some(2));
        assert!(verify_shift(&w("x0^-2"), 0..=20).all_pass);
    }

    #[test]
    fn a_membership_examples() {
        assert_eq!(a_membership(&w("x1 x0^-1"), 20), Truth::True);
        assert_eq!(a_membership(&w("x3 x2^-1 x1 x0^-1"), 20), Truth::True);
        assert_eq!(a_membership(&w("x0"), 20), Truth::False);
        assert_eq!(a_membership(&w("x2 x1^-1"), 20), Truth::False);
        assert_eq!(a_membership(&w("x30"), 20), Truth::Unknown);
        let (t, c) = a_coordinates(&f_normal_form(&w("(x5 x4^-1)^2 (x1 x0^-1)^-3")), 40);
        assert_eq!(t, Truth::True);
        assert_eq!(c, vec![-3, 0, 2]);
    }

    #[test]
    fn am_examples() {
        assert_eq!(am_in_conjugate_intersection(&[Word::identity()], 5).unwrap().m, 0);
        let r = am_in_conjugate_intersection(&[w("x0^2")], 20).unwrap();
        assert_eq!(r.certificates[0].shifted_generators[0].1, r.certificates[0].shifted_generators[0].0 + 1);
        assert!(am_in_conjugate_intersection(&[w("x0 x1")], 20).is_ok());
        assert!(am_in_conjugate_intersection(&[w("x0")], 20).is_err());
    }
}
