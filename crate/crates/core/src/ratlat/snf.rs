use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMat;

/// `u * a * v == s` with `u`, `v` unimodular and `s` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMat,
    pub s: IntMat,
    pub v: IntMat,
}

impl SnfResult {
    /// Diagonal of `s`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }
}

/// `u * a == h` with `u` unimodular and `h` in row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult {
    pub u: IntMat,
    pub h: IntMat,
}

/// Unimodular row and column operations on a working matrix, mirrored into
/// the transforms.
struct Work {
    s: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn new(a: &IntMat) -> Self {
        Work {
            s: a.to_rows(),
            u: IntMat::identity(a.rows()).to_rows(),
            v: IntMat::identity(a.cols()).to_rows(),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.s.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.s.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.s, &mut self.u] {
            let src_row = m[src].clone();
            for (d, x) in m[dst].iter_mut().zip(&src_row) {
                *d -= q * x;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for row in self.s.iter_mut().chain(self.v.iter_mut()) {
            let x = q * &row[src];
            row[dst] -= x;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.s, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    /// Replaces rows (i, j) by (x*ri + y*rj, c*ri + d*rj); the 2x2 block must be unimodular.
    fn mix_rows(&mut self, i: usize, j: usize, [x, y, c, d]: [&BigInt; 4]) {
        for m in [&mut self.s, &mut self.u] {
            let (ri, rj) = (m[i].clone(), m[j].clone());
            for k in 0..ri.len() {
                m[i][k] = x * &ri[k] + y * &rj[k];
                m[j][k] = c * &ri[k] + d * &rj[k];
            }
        }
    }

    /// Replaces cols (i, j) by (x*ci + y*cj, c*ci + d*cj).
    fn mix_cols(&mut self, i: usize, j: usize, [x, y, c, d]: [&BigInt; 4]) {
        for row in self.s.iter_mut().chain(self.v.iter_mut()) {
            let (ci, cj) = (row[i].clone(), row[j].clone());
            row[i] = x * &ci + y * &cj;
            row[j] = c * &ci + d * &cj;
        }
    }

    /// Smallest nonzero |entry| in the lower-right block from `t`, first in row-major order.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.s.len() {
            for j in t..self.s[i].len() {
                let x = &self.s[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.s[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

fn to_mat(rows: Vec<Vec<BigInt>>, n_rows: usize, n_cols: usize) -> IntMat {
    IntMat::new(n_rows, n_cols, rows.into_iter().flatten().collect()).expect("shape preserved")
}

/// Smith normal form. Pivoting is deterministic: smallest absolute value,
/// ties broken row-major, so the transforms are reproducible.
pub fn smith_normal_form(a: &IntMat) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work::new(a);
    let mut rank = 0;
    for t in 0..m.min(n) {
        while let Some((pi, pj)) = w.pivot(t) {
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let p = w.s[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = w.s[i][t].div_floor(&p);
                if !q.is_zero() {
                    w.sub_row(i, t, &q);
                }
                clean &= w.s[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = w.s[t][j].div_floor(&p);
                if !q.is_zero() {
                    w.sub_col(j, t, &q);
                }
                clean &= w.s[t][j].is_zero();
            }
            if clean {
                break;
            }
        }
        if w.s[t][t].is_zero() {
            break;
        }
        rank = t + 1;
    }

    // Divisibility chain. After pass i, s[i] divides every later entry, and
    // later passes only shrink s[i+1..] to divisors of themselves.
    for i in 0..rank {
        for j in i + 1..rank {
            let (a, b) = (w.s[i][i].clone(), w.s[j][j].clone());
            if (&b % &a).is_zero() {
                continue;
            }
            let e = a.extended_gcd(&b);
            let (g, x, y) = if e.gcd.is_negative() {
                (-e.gcd, -e.x, -e.y)
            } else {
                (e.gcd, e.x, e.y)
            };
            let (ag, bg) = (&a / &g, &b / &g);
            w.mix_rows(i, j, [&x, &y, &-&bg, &ag]);
            let one = BigInt::one();
            w.mix_cols(i, j, [&one, &one, &-(&y * &bg), &(&x * &ag)]);
        }
    }
    for i in 0..rank {
        if w.s[i][i].is_negative() {
            w.negate_row(i);
        }
    }
    SnfResult {
        u: to_mat(w.u, m, m),
        s: to_mat(w.s, m, n),
        v: to_mat(w.v, n, n),
    }
}

/// Row-style Hermite normal form: positive pivots, entries above each pivot
/// reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMat) -> HnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work::new(a);
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        // Fold every lower entry of this column into row r by Bezout steps.
        for i in r + 1..m {
            if w.s[i][col].is_zero() {
                continue;
            }
            let (a, b) = (w.s[r][col].clone(), w.s[i][col].clone());
            let e = a.extended_gcd(&b);
            let g = e.gcd;
            w.mix_rows(r, i, [&e.x, &e.y, &-(&b / &g), &(&a / &g)]);
        }
        if w.s[r][col].is_zero() {
            continue;
        }
        if w.s[r][col].is_negative() {
            w.negate_row(r);
        }
        let p = w.s[r][col].clone();
        for i in 0..r {
            let q = w.s[i][col].div_floor(&p);
            if !q.is_zero() {
                w.sub_row(i, r, &q);
            }
        }
        r += 1;
    }
    HnfResult {
        u: to_mat(w.u, m, m),
        h: to_mat(w.s, m, n),
    }
}
