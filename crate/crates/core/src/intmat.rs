//! Small integer linear algebra: Hermite rows, Smith diagonals, and lattices in `Z^n`.

use serde::Serialize;

/// Row-style Hermite normal form: nonzero rows in echelon form, positive
/// pivots, entries above each pivot reduced into `0..pivot`.
pub fn hermite_rows(rows: &[Vec<i64>], width: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut out_rows = 0;
    for col in 0..width {
        if out_rows == m.len() {
            break;
        }
        // Euclid on the column among rows out_rows..
        loop {
            let Some(piv) = (out_rows..m.len()).filter(|&i| m[i][col] != 0).min_by_key(|&i| m[i][col].abs()) else {
                break;
            };
            m.swap(out_rows, piv);
            let mut done = true;
            for i in out_rows + 1..m.len() {
                if m[i][col] != 0 {
                    let q = m[i][col].div_euclid(m[out_rows][col]);
                    for c in 0..width {
                        m[i][c] -= q * m[out_rows][c];
                    }
                    if m[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[out_rows][col] == 0 {
            continue;
        }
        if m[out_rows][col] < 0 {
            for x in &mut m[out_rows] {
                *x = -*x;
            }
        }
        let p = m[out_rows][col];
        for i in 0..out_rows {
            let q = m[i][col].div_euclid(p);
            if q != 0 {
                for c in 0..width {
                    m[i][c] -= q * m[out_rows][c];
                }
            }
        }
        out_rows += 1;
    }
    m.truncate(out_rows);
    m.retain(|r| r.iter().any(|&x| x != 0));
    m
}

/// Nonzero diagonal entries of the Smith normal form, each dividing the next.
pub fn smith_diagonal(rows: &[Vec<i64>], width: usize) -> Vec<i64> {
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let h = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < h.min(width) {
        // Smallest nonzero entry in the remaining block becomes the pivot.
        let Some((pi, pj)) = (t..h)
            .flat_map(|i| (t..width).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs())
        else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..h {
            let q = m[i][t] / m[t][t];
            if q != 0 {
                for j in t..width {
                    m[i][j] -= q * m[t][j];
                }
            }
            clean &= m[i][t] == 0;
        }
        for j in t + 1..width {
            let q = m[t][j] / m[t][t];
            if q != 0 {
                for row in m.iter_mut().skip(t) {
                    row[j] -= q * row[t];
                }
            }
            clean &= m[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // Divisibility: fold any non-multiple into the pivot row and retry.
        let p = m[t][t];
        if let Some(i) = (t + 1..h).find(|&i| (t + 1..width).any(|j| m[i][j] % p != 0)) {
            for j in t..width {
                m[t][j] += m[i][j];
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// A subgroup of `Z^n`, stored as Hermite rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Lattice {
    width: usize,
    basis: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(generators: &[Vec<i64>], width: usize) -> Self {
        Lattice { width, basis: hermite_rows(generators, width) }
    }

    pub fn whole(width: usize) -> Self {
        let id: Vec<Vec<i64>> = (0..width).map(|i| (0..width).map(|j| i64::from(i == j)).collect()).collect();
        Lattice::new(&id, width)
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn pivot(row: &[i64]) -> usize {
        row.iter().position(|&x| x != 0).expect("basis rows are nonzero")
    }

    /// Canonical representative of `v + L`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for row in &self.basis {
            let c = Self::pivot(row);
            let q = v[c].div_euclid(row[c]);
            if q != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= q * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|r| self.contains(r))
    }

    /// Coordinates of `v` in the basis, when `v` lies in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        let mut v = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let c = Self::pivot(row);
            if v[c] % row[c] != 0 {
                return None;
            }
            let q = v[c] / row[c];
            coords.push(q);
            for (x, r) in v.iter_mut().zip(row) {
                *x -= q * r;
            }
        }
        v.iter().all(|&x| x == 0).then_some(coords)
    }

    /// `[self : sub]` for `sub` contained in `self`; `None` when infinite.
    pub fn index_of(&self, sub: &Lattice) -> Option<u64> {
        if sub.rank() < self.rank() {
            return None;
        }
        let square: Vec<Vec<i64>> =
            sub.basis.iter().map(|r| self.coordinates(r).expect("sub is contained in self")).collect();
        let d = smith_diagonal(&square, self.rank());
        Some(d.iter().map(|&x| x as u64).product())
    }

    pub fn intersection(&self, other: &Lattice) -> Lattice {
        let (r1, r2) = (self.rank(), other.rank());
        let n = self.width;
        // Left kernel of [B1; -B2] via Hermite form of [B1 | I ; -B2 | I].
        let total = r1 + r2;
        let rows: Vec<Vec<i64>> = self
            .basis
            .iter()
            .map(|r| r.clone())
            .chain(other.basis.iter().map(|r| r.iter().map(|x| -x).collect()))
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..total).map(|j| i64::from(i == j)));
                r
            })
            .collect();
        let h = hermite_rows(&rows, n + total);
        let gens: Vec<Vec<i64>> = h
            .iter()
            .filter(|r| r[..n].iter().all(|&x| x == 0))
            .map(|r| {
                let a = &r[n..n + r1];
                (0..n).map(|c| (0..r1).map(|i| a[i] * self.basis[i][c]).sum()).collect()
            })
            .collect();
        Lattice::new(&gens, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_examples() {
        assert_eq!(smith_diagonal(&[vec![2, 0], vec![0, 3]], 2), vec![1, 6]);
        assert_eq!(smith_diagonal(&[vec![2, 4], vec![6, 8]], 2), vec![2, 4]);
        assert!(smith_diagonal(&[], 3).is_empty());
        // sym3 relators a^2, b^2, (ab)^3: abelianization Z/2.
        assert_eq!(smith_diagonal(&[vec![2, 0], vec![0, 2], vec![3, 3]], 2), vec![1, 2]);
    }

    #[test]
    fn lattice_ops() {
        let a = Lattice::new(&[vec![2, 0]], 2);
        let b = Lattice::new(&[vec![3, 0]], 2);
        let c = a.intersection(&b);
        assert_eq!(c.basis(), &[vec![6, 0]]);
        assert_eq!(a.index_of(&c), Some(3));
        assert_eq!(b.index_of(&c), Some(2));
        let u = Lattice::new(&[vec![1, 0]], 2);
        let v = Lattice::new(&[vec![0, 1]], 2);
        assert_eq!(u.intersection(&v).rank(), 0);
        assert_eq!(u.index_of(&u.intersection(&v)), None);
        assert_eq!(Lattice::whole(2).index_of(&Lattice::new(&[vec![2, 1], vec![0, 3]], 2)), Some(6));
        assert_eq!(a.reduce(&[5, 7]), vec![1, 7]);
    }
}
