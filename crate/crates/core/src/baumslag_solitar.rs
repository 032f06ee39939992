//! Baumslag-Solitar groups `BS(m, n) = <x, y | y^-1 x^m y = x^n>`.
//!
//! Elements are kept in the right normal form of the HNN extension:
//! `x^a0 y^e1 x^a1 ... y^ek x^ak` where no pinch `y^-1 x^(jm) y` or
//! `y x^(jn) y^-1` occurs, every exponent in front of `y` lies in `0..m` and
//! every exponent in front of `y^-1` lies in `0..n`. The trailing exponent is
//! unrestricted. Two words are equal in the group iff their forms are equal.
//!
//! `x` is generator 0 and `y` is generator 1.

use std::fmt;

use serde::Serialize;

use crate::words::{Letter, Word};

pub const X: u32 = 0;
pub const Y: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Bs {
    pub m: i64,
    pub n: i64,
}

/// `y^-1 x^2 y = x^3`.
pub const BS23: Bs = Bs { m: 2, n: 3 };

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BrittonForm {
    /// `(a_{i-1}, e_i)`: the x-exponent standing in front of each stable letter.
    syllables: Vec<(i64, i8)>,
    tail: i64,
}

impl BrittonForm {
    pub fn identity() -> Self {
        BrittonForm::default()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty() && self.tail == 0
    }

    /// The exponent `m` when the element is `x^m`.
    pub fn as_x_power(&self) -> Option<i64> {
        self.syllables.is_empty().then_some(self.tail)
    }

    pub fn stable_letters(&self) -> impl Iterator<Item = i8> + '_ {
        self.syllables.iter().map(|&(_, e)| e)
    }

    pub fn syllables(&self) -> &[(i64, i8)] {
        &self.syllables
    }

    pub fn tail(&self) -> i64 {
        self.tail
    }

    /// Number of stable letters.
    pub fn depth(&self) -> usize {
        self.syllables.len()
    }

    pub fn with_tail(&self, tail: i64) -> Self {
        BrittonForm { syllables: self.syllables.clone(), tail }
    }

    pub fn to_word(&self) -> Word {
        let mut letters = Vec::new();
        for &(a, e) in &self.syllables {
            letters.extend(Word::power_of(X, a).letters().iter().copied());
            letters.push(Letter::new(Y, e < 0));
        }
        letters.extend(Word::power_of(X, self.tail).letters().iter().copied());
        Word::new(letters)
    }
}

impl fmt::Display for BrittonForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let power = |a: i64| if a == 1 { "x".to_string() } else { format!("x^{a}") };
        let mut parts = Vec::new();
        for &(a, e) in &self.syllables {
            if a != 0 {
                parts.push(power(a));
            }
            parts.push(if e > 0 { "y".to_string() } else { "y^-1".to_string() });
        }
        if self.tail != 0 {
            parts.push(power(self.tail));
        }
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join(" "))
    }
}

impl Bs {
    pub fn new(m: i64, n: i64) -> Self {
        assert!(m != 0 && n != 0, "BS(m, n) needs nonzero m and n");
        Bs { m, n }
    }

    /// Right-multiplies `form` by one letter.
    pub fn push(&self, form: &mut BrittonForm, l: Letter) {
        match l.generator {
            X => form.tail += l.sign(),
            Y => {
                let e: i8 = if l.inverse { -1 } else { 1 };
                let a = form.tail;
                if let Some(&(prev, pe)) = form.syllables.last() {
                    // y^-1 x^(jm) y = x^(jn) and y x^(jn) y^-1 = x^(jm)
                    if pe == -1 && e == 1 && a % self.m == 0 {
                        form.syllables.pop();
                        form.tail = prev + a / self.m * self.n;
                        return;
                    }
                    if pe == 1 && e == -1 && a % self.n == 0 {
                        form.syllables.pop();
                        form.tail = prev + a / self.n * self.m;
                        return;
                    }
                }
                // x^(qm) y = y x^(qn) and x^(qn) y^-1 = y^-1 x^(qm)
                let (modulus, image) = if e == 1 { (self.m, self.n) } else { (self.n, self.m) };
                let r = a.rem_euclid(modulus.abs());
                let q = (a - r) / modulus;
                form.syllables.push((r, e));
                form.tail = q * image;
            }
            _ => panic!("BS(m, n) has generators x0, x1 only; got x{}", l.generator),
        }
    }

    pub fn reduce(&self, w: &Word) -> BrittonForm {
        let mut form = BrittonForm::identity();
        for &l in w.letters() {
            self.push(&mut form, l);
        }
        form
    }

    pub fn mul(&self, a: &BrittonForm, w: &Word) -> BrittonForm {
        let mut form = a.clone();
        for &l in w.letters() {
            self.push(&mut form, l);
        }
        form
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.reduce(w).is_identity()
    }

    /// `g^-1 x^a g` in normal form.
    pub fn conjugate_x_power(&self, a: i64, g: &Word) -> BrittonForm {
        let mut form = self.reduce(&g.inverse());
        form.tail += a;
        self.mul(&form, g)
    }

    /// Least positive `a <= a_bound` with `g^-1 x^a g = x^b`; returns `(a, b)`.
    pub fn power_conjugate(&self, g: &Word, a_bound: i64) -> Option<(i64, i64)> {
        (1..=a_bound).find_map(|a| self.conjugate_x_power(a, g).as_x_power().map(|b| (a, b)))
    }

    /// Whether `t` lies in `<x^a>^w = w^-1 <x^a> w`.
    pub fn in_conjugated_power(&self, t: &Word, a: i64, w: &Word) -> bool {
        let form = self.reduce(&w.mul(t).mul(&w.inverse()));
        matches!(form.as_x_power(), Some(p) if p % a == 0)
    }

    /// Least positive `b <= limit` with `x^b` in `<x^a>^w`.
    pub fn positive_power_in(&self, a: i64, w: &Word, limit: i64) -> Option<i64> {
        let winv = w.inverse();
        (1..=limit).find(|&b| matches!(self.conjugate_x_power(b, &winv).as_x_power(), Some(p) if p % a == 0))
    }

    /// Checks the two family axioms on the truncation
    /// `{ <x^a>^w : 1 <= a <= a_bound, w in {1} ∪ conjugators }`.
    pub fn family_axiom_check(&self, conjugators: &[Word], a_bound: i64) -> FamilyAxiomReport {
        let mut ws = vec![Word::identity()];
        for c in conjugators {
            if !ws.contains(c) {
                ws.push(c.clone());
            }
        }
        let members: Vec<(i64, Word)> = ws.iter().flat_map(|w| (1..=a_bound).map(move |a| (a, w.clone()))).collect();
        let mut report =
            FamilyAxiomReport { members: members.len(), closure_pass: true, directed_pass: true, ..Default::default() };

        let step = (self.m * self.n).abs();
        let limit_for = |a: i64, w: &Word| -> i64 {
            let ys = w.letters().iter().filter(|l| l.generator == Y).count() as u32;
            a.saturating_mul(step.saturating_pow(ys)).min(1_000_000)
        };

        // Conjugation closure: every conjugate of a member contains a positive power of x.
        let mut powers = Vec::with_capacity(members.len());
        for (a, w) in &members {
            powers.push(self.positive_power_in(*a, w, limit_for(*a, w)));
            for c in conjugators {
                let wc = w.mul(c);
                report.closure_checks += 1;
                match self.positive_power_in(*a, &wc, limit_for(*a, &wc)) {
                    Some(b) => report.witnesses.push(PowerWitness {
                        subgroup: format!("<x^{a}>^({})", wc.display_with(Some(&bs_names()))),
                        power: b,
                    }),
                    None => {
                        report.closure_pass = false;
                        report.failures.push(format!(
                            "no positive power of x found in <x^{a}>^({})",
                            wc.display_with(Some(&bs_names()))
                        ));
                    }
                }
            }
        }

        // Downward directedness: any two members contain a common <x^q>.
        for i in 0..members.len() {
            for j in i..members.len() {
                report.directed_checks += 1;
                let (Some(p), Some(q)) = (powers[i], powers[j]) else {
                    report.directed_pass = false;
                    report.failures.push(format!("member {i} or {j} has no positive power of x"));
                    continue;
                };
                let l = lcm(p, q);
                let xl = Word::power_of(X, l);
                let (ai, wi) = &members[i];
                let (aj, wj) = &members[j];
                if !(self.in_conjugated_power(&xl, *ai, wi) && self.in_conjugated_power(&xl, *aj, wj)) {
                    report.directed_pass = false;
                    report.failures.push(format!("x^{l} not in both members {i}, {j}"));
                }
            }
        }
        report.pass = report.failures.is_empty();
        report
    }
}

pub fn bs_names() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        (a / gcd(a, b) * b).abs()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PowerWitness {
    pub subgroup: String,
    pub power: i64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FamilyAxiomReport {
    pub members: usize,
    pub closure_checks: usize,
    pub directed_checks: usize,
    pub closure_pass: bool,
    pub directed_pass: bool,
    pub pass: bool,
    /// Least positive power of x found in each conjugated member.
    pub witnesses: Vec<PowerWitness>,
    pub failures: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s, &bs_names()).unwrap()
    }

    #[test]
    fn defining_relation_pinches() {
        let f = BS23.reduce(&w("y^-1 x^2 y"));
        assert_eq!(f.as_x_power(), Some(3));
        assert_eq!(BS23.reduce(&w("y x^3 y^-1")).as_x_power(), Some(2));
        assert!(BS23.is_trivial(&w("y^-1 x^2 y x^-3")));
    }

    #[test]
    fn pinch_free_word_is_unchanged() {
        let word = w("y^-1 x y");
        assert_eq!(BS23.reduce(&word).to_word(), word);
        assert!(!BS23.is_trivial(&w("y^-1 x y x^-1")));
    }

    #[test]
    fn power_conjugates() {
        assert_eq!(BS23.power_conjugate(&w("y"), 50), Some((2, 3)));
        assert_eq!(BS23.power_conjugate(&w("y^-1"), 50), Some((3, 2)));
        assert_eq!(BS23.power_conjugate(&w("y^2"), 50), Some((4, 9)));
        assert_eq!(BS23.power_conjugate(&w("y^2"), 3), None);
    }

    #[test]
    fn x_has_infinite_order() {
        for k in 1..=100 {
            assert_eq!(BS23.reduce(&Word::power_of(X, k)).as_x_power(), Some(k));
        }
    }

    #[test]
    fn family_checks() {
        let r = BS23.family_axiom_check(&[w("x")], 6);
        assert!(r.pass);
        let r = BS23.family_axiom_check(&[w("y")], 1);
        assert!(r.pass);
        // <x>^y contains x^3 and nothing smaller.
        assert_eq!(r.witnesses[0].power, 3);
        let r = BS23.family_axiom_check(&[w("y"), w("y^-1")], 12);
        assert!(r.pass, "{:?}", r.failures);
    }

    #[test]
    fn general_bs() {
        let bs = Bs::new(1, 2);
        assert_eq!(bs.reduce(&w("y^-1 x y")).as_x_power(), Some(2));
        let bs = Bs::new(2, 4);
        assert_eq!(bs.power_conjugate(&w("y"), 10), Some((2, 4)));
    }
}
