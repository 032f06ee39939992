//! Finite-dimensional right modules over `GF(p)`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::{CosetTable, GroupContext};
use crate::linalg::{fixed_space, is_prime, Matrix, Subspace, Vector};
use crate::words::Word;

/// Generator `i` acts by `v -> v * matrices[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    pub p: u64,
    pub dim: usize,
    matrices: Vec<Matrix>,
    inverses: Vec<Matrix>,
}

impl FiniteModule {
    /// Validates invertibility and, when `ctx` has explicit relators, that
    /// every relator acts as the identity.
    pub fn new(ctx: &GroupContext, p: u64, dim: usize, matrices: Vec<Matrix>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidModule(format!("{p} is not prime")));
        }
        let n = ctx.generator_count().ok_or(Error::NeedsFinitePresentation)?;
        if matrices.len() != n {
            return Err(Error::InvalidModule(format!("expected {n} matrices, got {}", matrices.len())));
        }
        let mut inverses = Vec::with_capacity(n);
        for (i, m) in matrices.iter().enumerate() {
            if m.p != p || m.rows != dim || m.cols != dim {
                return Err(Error::InvalidModule(format!("matrix {i} is not {dim}x{dim} over GF({p})")));
            }
            inverses.push(m.inverse().ok_or_else(|| Error::InvalidModule(format!("matrix {i} is singular")))?);
        }
        let module = FiniteModule { p, dim, matrices, inverses };
        for r in &ctx.presentation.relators {
            if !module.word_matrix(r).is_identity() {
                return Err(Error::InvalidModule(format!("relator {} acts nontrivially", ctx.show(r))));
            }
        }
        Ok(module)
    }

    pub fn trivial(ctx: &GroupContext, p: u64, dim: usize) -> Result<Self> {
        let n = ctx.generator_count().ok_or(Error::NeedsFinitePresentation)?;
        FiniteModule::new(ctx, p, dim, vec![Matrix::identity(p, dim); n])
    }

    /// The permutation module on the right cosets listed by `table`.
    pub fn permutation(ctx: &GroupContext, p: u64, table: &CosetTable) -> Result<Self> {
        let mats = (0..table.generator_count() as u32)
            .map(|g| {
                let perm: Vec<usize> = (0..table.count()).map(|c| table.act(c, crate::words::Letter::pos(g))).collect();
                Matrix::permutation(p, &perm)
            })
            .collect();
        FiniteModule::new(ctx, p, table.count(), mats)
    }

    /// The right regular module of a finite group.
    pub fn regular(ctx: &Arc<GroupContext>, p: u64) -> Result<Self> {
        let table = ctx.regular_table().ok_or(Error::NeedsFinitePresentation)?;
        FiniteModule::permutation(ctx, p, &table)
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn word_matrix(&self, w: &Word) -> Matrix {
        w.letters().iter().fold(Matrix::identity(self.p, self.dim), |acc, l| {
            let m = if l.inverse { &self.inverses[l.generator as usize] } else { &self.matrices[l.generator as usize] };
            acc.mul(m)
        })
    }

    pub fn act(&self, v: &[u64], w: &Word) -> Vector {
        w.letters().iter().fold(v.to_vec(), |acc, l| {
            let m = if l.inverse { &self.inverses[l.generator as usize] } else { &self.matrices[l.generator as usize] };
            m.apply(&acc)
        })
    }

    /// Vectors fixed by every word in `words`.
    pub fn fixed_by(&self, words: &[Word]) -> Subspace {
        let mats: Vec<Matrix> = words.iter().map(|w| self.word_matrix(w)).collect();
        fixed_space(self.p, self.dim, &mats)
    }

    pub fn fixed_by_group(&self) -> Subspace {
        fixed_space(self.p, self.dim, &self.matrices)
    }

    pub fn is_submodule(&self, s: &Subspace) -> bool {
        self.matrices.iter().all(|m| s.is_invariant(m))
    }

    /// The action on an invariant subspace, in its echelon basis.
    pub fn restrict(&self, ctx: &GroupContext, s: &Subspace) -> Result<Self> {
        if !self.is_submodule(s) {
            return Err(Error::InvalidModule("subspace is not invariant".into()));
        }
        let mats = self
            .matrices
            .iter()
            .map(|m| {
                let rows: Vec<Vector> =
                    s.basis().iter().map(|b| s.coordinates(&m.apply(b)).expect("invariant subspace")).collect();
                Matrix::from_rows(self.p, &rows, s.dim())
            })
            .collect();
        FiniteModule::new(ctx, self.p, s.dim(), mats)
    }

    /// Plain-text form: a header line `p dim`, then one `dim x dim` block of
    /// integers per generator, row-major. `#` starts a comment.
    pub fn parse(ctx: &GroupContext, text: &str) -> Result<Self> {
        let mut numbers = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            let mut column = 1;
            for tok in line.split_whitespace() {
                let at = line[column - 1..].find(tok).map_or(column, |i| column + i);
                let n: i64 = tok.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    column: at,
                    message: format!("expected an integer, found `{tok}`"),
                })?;
                numbers.push(n);
                column = at + tok.len();
            }
        }
        let [p, dim, rest @ ..] = &numbers[..] else {
            return Err(Error::InvalidModule("missing `p dim` header".into()));
        };
        if *p < 2 || *dim < 0 {
            return Err(Error::InvalidModule("bad header".into()));
        }
        let (p, dim) = (*p as u64, *dim as usize);
        let block = dim * dim;
        let n = ctx.generator_count().ok_or(Error::NeedsFinitePresentation)?;
        if rest.len() != n * block {
            return Err(Error::InvalidModule(format!(
                "expected {} entries for {n} generators, found {}",
                n * block,
                rest.len()
            )));
        }
        let mats = (0..n)
            .map(|g| {
                let rows: Vec<Vector> = (0..dim)
                    .map(|i| {
                        rest[g * block + i * dim..g * block + (i + 1) * dim]
                            .iter()
                            .map(|&x| x.rem_euclid(p as i64) as u64)
                            .collect()
                    })
                    .collect();
                Matrix::from_rows(p, &rows, dim)
            })
            .collect();
        FiniteModule::new(ctx, p, dim, mats)
    }

    pub fn to_text(&self, names: &[String]) -> String {
        let mut out = format!("{} {}\n", self.p, self.dim);
        for (i, m) in self.matrices.iter().enumerate() {
            let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
            let _ = writeln!(out, "# {name}");
            for r in 0..m.rows {
                let row: Vec<String> = m.row(r).iter().map(u64::to_string).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::preset;

    #[test]
    fn regular_sym3() {
        let g = preset("sym3").unwrap();
        let m = FiniteModule::regular(&g, 2).unwrap();
        assert_eq!(m.dim, 6);
        assert_eq!(m.fixed_by_group().dim(), 1);
    }

    #[test]
    fn text_round_trip() {
        let g = preset("cyclic(2)").unwrap();
        let m = FiniteModule::regular(&g, 3).unwrap();
        let text = m.to_text(g.names());
        assert_eq!(FiniteModule::parse(&g, &text).unwrap(), m);
        assert!(FiniteModule::parse(&g, "2 1\n1 x").is_err());
        // a^2 must act trivially
        let bad = FiniteModule::parse(&preset("cyclic(2)").unwrap(), "3 1\n2");
        assert!(bad.is_ok());
        let bad = FiniteModule::parse(&preset("cyclic(3)").unwrap(), "3 1\n2");
        assert!(matches!(bad, Err(Error::InvalidModule(_))));
    }
}
