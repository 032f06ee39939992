//! Free-group words over an integer-indexed alphabet.
//!
//! A [`Word`] is always freely reduced: every constructor reduces eagerly, so
//! equality of words in the free group is plain sequence equality.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator `x_k` or its inverse.
///
/// Letters order as `x0 < x0^-1 < x1 < x1^-1 < ...`, which is the order used
/// for every shortlex search in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: u32,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: u32, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub const fn pos(generator: u32) -> Self {
        Letter::new(generator, false)
    }

    pub const fn neg(generator: u32) -> Self {
        Letter::new(generator, true)
    }

    pub const fn inv(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }

    pub const fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Column index used by coset tables: `2k` for `x_k`, `2k + 1` for `x_k^-1`.
    pub const fn column(self) -> usize {
        2 * self.generator as usize + self.inverse as usize
    }

    pub const fn from_column(col: usize) -> Self {
        Letter::new((col / 2) as u32, col % 2 == 1)
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Reduces `raw` and wraps it.
    pub fn new(raw: impl IntoIterator<Item = Letter>) -> Self {
        free_reduce(raw)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn generator(k: u32) -> Self {
        Word(vec![Letter::pos(k)])
    }

    /// `x_k^e`.
    pub fn power_of(k: u32, e: i64) -> Self {
        let l = Letter::new(k, e < 0);
        Word(vec![l; e.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        invert(self)
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    pub fn push(&mut self, l: Letter) {
        push_reduced(&mut self.0, l);
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `g^-1 self g`.
    pub fn conjugate(&self, g: &Word) -> Word {
        conjugate_word(self, g)
    }

    pub fn exponent_sum(&self) -> i64 {
        exponent_sum(self)
    }

    /// Largest generator index that occurs, if any.
    pub fn max_generator(&self) -> Option<u32> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Exponent sum of each generator `0..n`; letters with larger indices are ignored.
    pub fn exponent_vector(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for l in &self.0 {
            if let Some(slot) = v.get_mut(l.generator as usize) {
                *slot += l.sign();
            }
        }
        v
    }

    /// Renders with `x<k>` names, or with `names` when given.
    pub fn display_with<'a>(&'a self, names: Option<&'a [String]>) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        free_reduce(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        free_reduce(iter)
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inv()) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// All freely reduced words of length `<= radius` over `generators` and their
/// inverses, in shortlex order (letters ordered by column).
pub fn ball_words(generators: &[u32], radius: usize) -> Vec<Word> {
    let mut letters: Vec<Letter> = generators.iter().flat_map(|&g| [Letter::pos(g), Letter::neg(g)]).collect();
    letters.sort();
    let mut out = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.0.last() != Some(&l.inv()) {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn free_reduce(raw: impl IntoIterator<Item = Letter>) -> Word {
    let mut out = Vec::new();
    for l in raw {
        push_reduced(&mut out, l);
    }
    Word(out)
}

pub fn invert(w: &Word) -> Word {
    Word(w.0.iter().rev().map(|l| l.inv()).collect())
}

pub fn conjugate_word(w: &Word, g: &Word) -> Word {
    g.inverse().mul(w).mul(g)
}

pub fn exponent_sum(w: &Word) -> i64 {
    w.0.iter().map(|l| l.sign()).sum()
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: Option<&'a [String]>,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        // Runs of equal letters print as a single power.
        let letters = self.word.letters();
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * l.sign();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            match self.names.and_then(|n| n.get(l.generator as usize)) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "x{}", l.generator)?,
            }
            if e != 1 {
                write!(f, "^{e}")?;
            }
            i = j;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with(None).fmt(f)
    }
}

/// Parses word text.
///
/// Atoms are separated by whitespace: `x<k>`, `x<k>^<e>` with `e` a nonzero
/// integer, or a name from `names` with an optional exponent. Parenthesized
/// groups with an outer exponent, `(a b)^3`, are accepted as well. The literal
/// `1` is the identity.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    let terms = parse_terms(text, names)?;
    Ok(terms.into_iter().fold(Word::identity(), |acc, t| acc.mul(&t)))
}

/// Parses `text` into its top-level terms (atoms or parenthesized groups),
/// each with its exponent applied.
pub fn parse_terms(text: &str, names: &[String]) -> Result<Vec<Word>> {
    let mut p = Parser { src: text, pos: 0, names };
    let terms = p.sequence(0)?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected ')'"));
    }
    Ok(terms)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { line: 1, column: self.pos + 1, message: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '*' || c == '.' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn sequence(&mut self, depth: usize) -> Result<Vec<Word>> {
        let mut terms = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(')') if depth > 0 => break,
                Some(')') => return Err(self.error("unbalanced ')'")),
                Some('(') => {
                    self.pos += 1;
                    let inner = self.sequence(depth + 1)?;
                    self.skip_ws();
                    if self.peek() != Some(')') {
                        return Err(self.error("missing ')'"));
                    }
                    self.pos += 1;
                    let w = inner.into_iter().fold(Word::identity(), |a, t| a.mul(&t));
                    let e = self.exponent()?;
                    terms.push(w.pow(e));
                }
                Some(_) => {
                    let w = self.atom()?;
                    let e = self.exponent()?;
                    terms.push(w.pow(e));
                }
            }
        }
        Ok(terms)
    }

    fn atom(&mut self) -> Result<Word> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '\'' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        let name = &self.src[start..self.pos];
        if name.is_empty() {
            return Err(self.error("expected a generator"));
        }
        if name == "1" || name == "e" && !self.names.iter().any(|n| n == "e") {
            return Ok(Word::identity());
        }
        if let Some(k) = self.names.iter().position(|n| n == name) {
            return Ok(Word::generator(k as u32));
        }
        if let Some(digits) = name.strip_prefix('x') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let k: u32 = digits.parse().map_err(|_| Error::Parse {
                    line: 1,
                    column: start + 1,
                    message: "index too large".into(),
                })?;
                return Ok(Word::generator(k));
            }
        }
        Err(Error::Parse { line: 1, column: start + 1, message: format!("unknown generator `{name}`") })
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = &self.src[start..self.pos];
        match text.parse::<i64>() {
            Ok(0) | Err(_) => {
                Err(Error::Parse { line: 1, column: start + 1, message: format!("bad exponent `{text}`") })
            }
            Ok(e) => Ok(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(k: u32) -> Letter {
        Letter::pos(k)
    }
    fn xi(k: u32) -> Letter {
        Letter::neg(k)
    }

    #[test]
    fn reduce_examples() {
        assert!(free_reduce([x(0), xi(0)]).is_empty());
        assert_eq!(free_reduce([x(0), x(1), xi(1), x(0)]), Word::power_of(0, 2));
        let w = free_reduce([x(0), x(1), xi(0)]);
        assert_eq!(free_reduce(w.letters().iter().copied()), w);
    }

    #[test]
    fn invert_examples() {
        assert!(Word::identity().inverse().is_empty());
        let xy = Word::new([x(0), x(1)]);
        assert_eq!(xy.inverse(), Word::new([xi(1), xi(0)]));
        let x2 = Word::power_of(0, 2);
        assert!(x2.inverse().mul(&x2).is_empty());
    }

    #[test]
    fn conjugate_examples() {
        let w = Word::generator(0);
        assert_eq!(conjugate_word(&w, &Word::identity()), w);
        assert_eq!(conjugate_word(&w, &w), w);
        let y = Word::generator(1);
        assert_eq!(conjugate_word(&w, &y), Word::new([xi(1), x(0), x(1)]));
    }

    #[test]
    fn exponent_sum_examples() {
        assert_eq!(exponent_sum(&Word::identity()), 0);
        assert_eq!(exponent_sum(&Word::new([x(1), xi(0)])), 0);
        assert_eq!(exponent_sum(&Word::new([xi(1), x(0), x(0), x(1)])), 2);
    }

    #[test]
    fn parse_syntax() {
        let names: Vec<String> = vec!["x".into(), "y".into()];
        let w = parse_word("y^-1 x^2 y x^-3", &names).unwrap();
        assert_eq!(w.len(), 7);
        assert_eq!(w.exponent_sum(), -1);
        assert_eq!(parse_word("x3^-1 x1", &[]).unwrap(), Word::new([xi(3), x(1)]));
        assert_eq!(parse_word("(x0 x1)^2", &[]).unwrap().len(), 4);
        assert!(parse_word("1", &[]).unwrap().is_empty());
        assert!(parse_word("x0^0", &[]).is_err());
        assert!(parse_word("z", &names).is_err());
        assert!(parse_word("(x0", &[]).is_err());
        assert_eq!(parse_terms("a^2 b^2 (a b)^3", &["a".into(), "b".into()]).unwrap().len(), 3);
    }

    #[test]
    fn display_round_trip() {
        let w = Word::new([x(0), x(0), xi(3), x(1)]);
        assert_eq!(w.to_string(), "x0^2 x3^-1 x1");
        assert_eq!(parse_word(&w.to_string(), &[]).unwrap(), w);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn raw() -> impl Strategy<Value = Vec<Letter>> {
            prop::collection::vec((0u32..3, any::<bool>()).prop_map(|(g, i)| Letter::new(g, i)), 0..24)
        }

        proptest! {
            #[test]
            fn reduce_idempotent_and_shrinking(r in raw()) {
                let w = free_reduce(r.clone());
                prop_assert!(w.len() <= r.len());
                prop_assert_eq!(free_reduce(w.letters().iter().copied()), w.clone());
                for pair in w.letters().windows(2) {
                    prop_assert_ne!(pair[0], pair[1].inv());
                }
            }

            #[test]
            fn exponent_sum_is_additive(a in raw(), b in raw()) {
                let (u, v) = (Word::new(a), Word::new(b));
                prop_assert_eq!(u.mul(&v).exponent_sum(), u.exponent_sum() + v.exponent_sum());
                prop_assert_eq!(u.inverse().exponent_sum(), -u.exponent_sum());
                prop_assert_eq!(u.inverse().inverse(), u);
            }

            #[test]
            fn text_round_trip(a in raw()) {
                let w = Word::new(a);
                prop_assert_eq!(parse_word(&w.to_string(), &[]).unwrap(), w);
            }
        }
    }
}
