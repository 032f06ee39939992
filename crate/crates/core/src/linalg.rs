//! Dense linear algebra over prime fields `GF(p)`, row-vector convention.

use serde::Serialize;

pub type Vector = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Matrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

impl Matrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        Matrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Matrix::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vector], cols: usize) -> Self {
        let mut m = Matrix::zero(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        m
    }

    /// Permutation matrix with `e_i M = e_{perm[i]}`.
    pub fn permutation(p: u64, perm: &[usize]) -> Self {
        let mut m = Matrix::zero(p, perm.len(), perm.len());
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, 1);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let p = self.p;
        let mut out = Matrix::zero(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out.get(i, j) + a * other.get(k, j)) % p;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x = (*x + self.p - y) % self.p;
        }
        out
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x = *x * (c % self.p) % self.p;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    /// `v M`.
    pub fn apply(&self, v: &[u64]) -> Vector {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = (*o + a * self.get(i, j)) % self.p;
            }
        }
        out
    }

    /// Columns side by side.
    pub fn hconcat(blocks: &[Matrix]) -> Matrix {
        let p = blocks[0].p;
        let rows = blocks[0].rows;
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zero(p, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.get(i, j));
                }
            }
            off += b.cols;
        }
        out
    }

    /// Rows stacked.
    pub fn vconcat(blocks: &[Matrix]) -> Matrix {
        let rows: Vec<Vector> = blocks.iter().flat_map(|b| b.row_vectors()).collect();
        Matrix::from_rows(blocks[0].p, &rows, blocks[0].cols)
    }

    pub fn rank(&self) -> usize {
        Subspace::span(self.p, self.cols, &self.row_vectors()).dim()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::hconcat(&[self.clone(), Matrix::identity(self.p, n)]);
        let mut rows = aug.row_vectors();
        let pivots = rref(self.p, &mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let inv: Vec<Vector> = rows[..n].iter().map(|r| r[n..].to_vec()).collect();
        Some(Matrix::from_rows(self.p, &inv, n))
    }

    /// `{v : v M = 0}`.
    pub fn left_kernel(&self) -> Subspace {
        let n = self.rows;
        let aug = Matrix::hconcat(&[self.clone(), Matrix::identity(self.p, n)]);
        let mut rows = aug.row_vectors();
        rref(self.p, &mut rows, self.cols + n);
        let basis: Vec<Vector> =
            rows.iter().filter(|r| r[..self.cols].iter().all(|&x| x == 0)).map(|r| r[self.cols..].to_vec()).collect();
        Subspace::span(self.p, n, &basis)
    }
}

/// Reduced row echelon form in place; drops zero rows and returns pivot columns.
pub fn rref(p: u64, rows: &mut Vec<Vector>, width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, i);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..rows[i].len() {
                    rows[i][j] = (rows[i][j] + p * p - f * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A subspace of `GF(p)^n`, stored in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Subspace {
    pub p: u64,
    pub ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn span(p: u64, ambient: usize, vectors: &[Vector]) -> Self {
        let mut rows: Vec<Vector> = vectors.iter().map(|v| v.iter().map(|x| x % p).collect()).collect();
        rref(p, &mut rows, ambient);
        Subspace { p, ambient, basis: rows }
    }

    pub fn whole(p: u64, n: usize) -> Self {
        Subspace::span(p, n, &Matrix::identity(p, n).row_vectors())
    }

    pub fn zero(p: u64, n: usize) -> Self {
        Subspace { p, ambient: n, basis: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Subspace::span(self.p, self.ambient, &rows).dim() == self.dim()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let rows: Vec<Vector> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(self.p, self.ambient, &rows)
    }

    pub fn is_invariant(&self, m: &Matrix) -> bool {
        self.basis.iter().all(|v| self.contains(&m.apply(v)))
    }

    /// Coordinates of `v` in the echelon basis; `v` must lie in the subspace.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vector> {
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.dim());
        for b in &self.basis {
            let c = b.iter().position(|&x| x != 0).expect("nonzero basis row");
            let a = rest[c];
            coords.push(a);
            for (r, x) in rest.iter_mut().zip(b) {
                *r = (*r + self.p * self.p - a * x) % self.p;
            }
        }
        rest.iter().all(|&x| x == 0).then_some(coords)
    }

    /// Every vector of the subspace (for small exhaustive checks).
    pub fn elements(&self) -> Vec<Vector> {
        let mut out = vec![vec![0; self.ambient]];
        for b in &self.basis {
            let mut next = Vec::with_capacity(out.len() * self.p as usize);
            for v in &out {
                for c in 0..self.p {
                    next.push(v.iter().zip(b).map(|(x, y)| (x + c * y) % self.p).collect());
                }
            }
            out = next;
        }
        out
    }
}

/// `{v : v M = v}` for every `M` in `mats`.
pub fn fixed_space(p: u64, dim: usize, mats: &[Matrix]) -> Subspace {
    if mats.is_empty() {
        return Subspace::whole(p, dim);
    }
    let id = Matrix::identity(p, dim);
    let blocks: Vec<Matrix> = mats.iter().map(|m| m.sub(&id)).collect();
    Matrix::hconcat(&blocks).left_kernel()
}
