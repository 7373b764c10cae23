//! Matrices over L[t], with Smith and Hermite normal forms.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, Field};
use crate::poly::TPoly;
use crate::ratfn::RatFn;
use crate::ring::{self, PolyRing};
use crate::xpoly::XPoly;

#[derive(Clone, PartialEq, Eq)]
pub struct TMatrix {
    f: Field,
    rows: usize,
    cols: usize,
    e: Vec<TPoly>,
}

impl fmt::Debug for TMatrix {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(fm, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).display("t")).collect();
            write!(fm, "{}", row.join(", "))?;
        }
        write!(fm, "]")
    }
}

impl TMatrix {
    pub fn zero(f: &Field, rows: usize, cols: usize) -> Self {
        TMatrix {
            f: f.clone(),
            rows,
            cols,
            e: vec![TPoly::zero(f); rows * cols],
        }
    }
    pub fn identity(f: &Field, n: usize) -> Self {
        Self::scalar(f, n, &TPoly::one(f))
    }
    pub fn scalar(f: &Field, n: usize, a: &TPoly) -> Self {
        let mut m = Self::zero(f, n, n);
        for i in 0..n {
            m.set(i, i, a.clone());
        }
        m
    }
    pub fn from_rows(f: &Field, rows: Vec<Vec<TPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        TMatrix {
            f: f.clone(),
            rows: r,
            cols: c,
            e: rows.into_iter().flatten().collect(),
        }
    }
    pub fn from_cols(f: &Field, nrows: usize, cols: &[Vec<TPoly>]) -> Self {
        let mut m = Self::zero(f, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }
    pub fn diag(f: &Field, d: &[TPoly]) -> Self {
        let mut m = Self::zero(f, d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }
    pub fn field(&self) -> &Field {
        &self.f
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &TPoly {
        &self.e[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: TPoly) {
        self.e[i * self.cols + j] = v;
    }
    pub fn entries(&self) -> &[TPoly] {
        &self.e
    }
    pub fn col(&self, j: usize) -> Vec<TPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn row(&self, i: usize) -> Vec<TPoly> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }
    pub fn to_rows(&self) -> Vec<Vec<TPoly>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|x| x.is_zero())
    }
    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.f, self.rows)
    }
    /// Maximal entry degree (-1 for the zero matrix).
    pub fn max_deg(&self) -> isize {
        self.e.iter().map(|x| x.deg()).max().unwrap_or(-1)
    }

    pub fn mul(&self, o: &TMatrix) -> TMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut r = Self::zero(&self.f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = r.get(i, j).add_ref(&a.mul_ref(b));
                        r.set(i, j, v);
                    }
                }
            }
        }
        r
    }
    pub fn mul_vec(&self, v: &[TPoly]) -> Vec<TPoly> {
        (0..self.rows)
            .map(|i| {
                let mut s = TPoly::zero(&self.f);
                for (j, x) in v.iter().enumerate() {
                    s = s.add_ref(&self.get(i, j).mul_ref(x));
                }
                s
            })
            .collect()
    }
    pub fn add(&self, o: &TMatrix) -> TMatrix {
        assert!(self.rows == o.rows && self.cols == o.cols);
        self.zip(o, |a, b| a.add_ref(b))
    }
    pub fn sub(&self, o: &TMatrix) -> TMatrix {
        assert!(self.rows == o.rows && self.cols == o.cols);
        self.zip(o, |a, b| a.sub_ref(b))
    }
    fn zip(&self, o: &TMatrix, g: impl Fn(&TPoly, &TPoly) -> TPoly) -> TMatrix {
        TMatrix {
            f: self.f.clone(),
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().zip(&o.e).map(|(a, b)| g(a, b)).collect(),
        }
    }
    pub fn map(&self, g: impl Fn(&TPoly) -> TPoly) -> TMatrix {
        let e: Vec<TPoly> = self.e.iter().map(g).collect();
        let f = e.first().map_or(self.f.clone(), |x| x.field().clone());
        TMatrix {
            f,
            rows: self.rows,
            cols: self.cols,
            e,
        }
    }
    pub fn neg(&self) -> TMatrix {
        self.map(|a| a.neg_ref())
    }
    pub fn scale(&self, a: &TPoly) -> TMatrix {
        self.map(|x| x.mul_ref(a))
    }
    pub fn transpose(&self) -> TMatrix {
        let mut m = Self::zero(&self.f, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }
    /// Apply x ↦ x^(p^k) to all coefficients.
    pub fn frob(&self, k: u32) -> TMatrix {
        if k % self.f.degree() == 0 {
            return self.clone();
        }
        self.map(|a| a.frob(k))
    }
    pub fn embed(&self, emb: &Embedding) -> TMatrix {
        let mut m = self.map(|a| a.embed(emb));
        m.f = emb.dst.clone();
        m
    }
    /// Reduce all entries modulo a polynomial.
    pub fn rem(&self, m: &TPoly) -> TMatrix {
        self.map(|a| a.rem(m))
    }
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> TMatrix {
        let mut m = Self::zero(&self.f, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }
    pub fn block_diag(&self, o: &TMatrix) -> TMatrix {
        let mut m = Self::zero(&self.f, self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }
    pub fn hconcat(&self, o: &TMatrix) -> TMatrix {
        assert_eq!(self.rows, o.rows);
        let mut m = Self::zero(&self.f, self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                m.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }
    pub fn pow(&self, mut e: u64) -> TMatrix {
        let mut r = Self::identity(&self.f, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Determinant (fraction-free Bareiss elimination).
    pub fn det(&self) -> TPoly {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return TPoly::one(&self.f);
        }
        let mut a = self.to_rows();
        let mut prev = TPoly::one(&self.f);
        let mut negate = false;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(i) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return TPoly::zero(&self.f);
                };
                a.swap(k, i);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j].mul_ref(&a[k][k]).sub_ref(&a[i][k].mul_ref(&a[k][j]));
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if negate {
            d.neg_ref()
        } else {
            d
        }
    }

    /// Coefficients c_0..c_n of det(x·I − self).
    pub fn charpoly_coeffs(&self) -> Vec<TPoly> {
        assert!(self.is_square());
        ring::berkowitz(&PolyRing(self.f.clone()), &self.to_rows())
    }

    /// Characteristic polynomial det(x·I − self).
    pub fn charpoly(&self) -> XPoly {
        XPoly::from_coeffs(&self.f, self.charpoly_coeffs())
    }

    /// Minimal polynomial: the first power of self lying in the L(t)-span of
    /// the lower ones gives the monic annihilator of least degree.
    pub fn minpoly(&self) -> XPoly {
        assert!(self.is_square());
        let f = &self.f;
        let n = self.rows;
        let flat = |m: &TMatrix| -> Vec<RatFn> { m.e.iter().map(|a| RatFn::from_poly(a.clone())).collect() };
        let mut powers = vec![flat(&Self::identity(f, n))];
        let mut cur = Self::identity(f, n);
        for _k in 1..=n {
            cur = cur.mul(self);
            let target = flat(&cur);
            if let Some(c) = crate::ratfn::solve_columns(&powers, &target) {
                let mut coeffs: Vec<TPoly> = c
                    .iter()
                    .map(|x| {
                        assert!(x.is_poly(), "minimal polynomial of a matrix over L[t] is integral");
                        x.num.neg_ref()
                    })
                    .collect();
                coeffs.push(TPoly::one(f));
                return XPoly::from_coeffs(f, coeffs);
            }
            powers.push(target);
        }
        unreachable!("Cayley–Hamilton bounds the degree")
    }

    /// g(self) for a polynomial g in x over L[t].
    pub fn eval_xpoly(&self, g: &XPoly) -> TMatrix {
        let n = self.rows;
        let mut r = Self::zero(&self.f, n, n);
        for a in g.coeffs().iter().rev() {
            r = r.mul(self).add(&Self::scalar(&self.f, n, a));
        }
        r
    }

    /// Adjugate via Cayley–Hamilton.
    pub fn adjugate(&self) -> TMatrix {
        let n = self.rows;
        if n == 0 {
            return self.clone();
        }
        let c = self.charpoly_coeffs();
        // P = M^{n-1} + c_{n-1} M^{n-2} + ... + c_1 I  (Horner)
        let mut p = Self::identity(&self.f, n);
        for k in (1..n).rev() {
            p = p.mul(self).add(&Self::scalar(&self.f, n, &c[k]));
        }
        if (n + 1) % 2 == 0 {
            p
        } else {
            p.neg()
        }
    }

    /// The i-th exterior power (minors indexed by lexicographic subsets).
    pub fn exterior_power(&self, i: usize) -> TMatrix {
        let subsets = subsets(self.rows, i);
        let mut m = Self::zero(&self.f, subsets.len(), subsets.len());
        for (a, rs) in subsets.iter().enumerate() {
            for (b, cs) in subsets.iter().enumerate() {
                m.set(a, b, self.submatrix(rs, cs).det());
            }
        }
        m
    }

    /// Smith normal form: (U, D, V) with U·M·V = D.
    pub fn smith(&self) -> Result<(TMatrix, TMatrix, TMatrix)> {
        assert!(self.is_square());
        let n = self.rows;
        let f = self.f.clone();
        let mut a = self.clone();
        let mut u = Self::identity(&f, n);
        let mut v = Self::identity(&f, n);
        for k in 0..n {
            loop {
                // lowest-degree nonzero entry, ties by (row, col)
                let mut best: Option<(isize, usize, usize)> = None;
                for i in k..n {
                    for j in k..n {
                        let d = a.get(i, j).deg();
                        if d >= 0 && best.is_none_or(|b| d < b.0) {
                            best = Some((d, i, j));
                        }
                    }
                }
                let Some((_, pi, pj)) = best else {
                    return Err(Error::Singular);
                };
                a.swap_rows(k, pi);
                u.swap_rows(k, pi);
                a.swap_cols(k, pj);
                v.swap_cols(k, pj);
                let mut clean = true;
                for i in k + 1..n {
                    if a.get(i, k).is_zero() {
                        continue;
                    }
                    let (q, r) = a.get(i, k).divrem(a.get(k, k));
                    a.row_axpy(i, k, &q.neg_ref());
                    u.row_axpy(i, k, &q.neg_ref());
                    if !r.is_zero() {
                        clean = false;
                    }
                }
                for j in k + 1..n {
                    if a.get(k, j).is_zero() {
                        continue;
                    }
                    let (q, r) = a.get(k, j).divrem(a.get(k, k));
                    a.col_axpy(j, k, &q.neg_ref());
                    v.col_axpy(j, k, &q.neg_ref());
                    if !r.is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                let piv = a.get(k, k).clone();
                let bad = (k + 1..n).find(|&i| (k + 1..n).any(|j| !piv.divides(a.get(i, j))));
                if let Some(i) = bad {
                    let one = TPoly::one(&f);
                    a.row_axpy(k, i, &one);
                    u.row_axpy(k, i, &one);
                    continue;
                }
                break;
            }
            let inv = f.inv(a.get(k, k).lc());
            a.row_scale(k, inv);
            u.row_scale(k, inv);
        }
        Ok((u, a, v))
    }

    /// Elementary divisors (monic diagonal of the Smith form).
    pub fn elementary_divisors(&self) -> Result<Vec<TPoly>> {
        let (_, d, _) = self.smith()?;
        Ok((0..self.rows).map(|i| d.get(i, i).clone()).collect())
    }

    /// Column Hermite form: G·V = [H | 0] with V unimodular and H in
    /// column echelon form (monic pivots, entries left of a pivot reduced).
    pub fn hermite_columns(&self) -> Hermite {
        let f = self.f.clone();
        let (r, m) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut v = Self::identity(&f, m);
        let mut c = 0;
        let mut pivot_rows = Vec::new();
        for i in 0..r {
            if c == m {
                break;
            }
            loop {
                let mut best: Option<(isize, usize)> = None;
                for j in c..m {
                    let d = a.get(i, j).deg();
                    if d >= 0 && best.is_none_or(|b| d < b.0) {
                        best = Some((d, j));
                    }
                }
                let Some((_, j0)) = best else { break };
                a.swap_cols(c, j0);
                v.swap_cols(c, j0);
                let mut done = true;
                for j in c + 1..m {
                    if a.get(i, j).is_zero() {
                        continue;
                    }
                    let q = a.get(i, j).divrem(a.get(i, c)).0;
                    a.col_axpy(j, c, &q.neg_ref());
                    v.col_axpy(j, c, &q.neg_ref());
                    if !a.get(i, j).is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if a.get(i, c).is_zero() {
                continue;
            }
            let inv = f.inv(a.get(i, c).lc());
            a.col_scale(c, inv);
            v.col_scale(c, inv);
            for j in 0..c {
                let q = a.get(i, j).divrem(a.get(i, c)).0;
                if !q.is_zero() {
                    a.col_axpy(j, c, &q.neg_ref());
                    v.col_axpy(j, c, &q.neg_ref());
                }
            }
            pivot_rows.push(i);
            c += 1;
        }
        let cols: Vec<usize> = (0..c).collect();
        let all_rows: Vec<usize> = (0..r).collect();
        Hermite {
            h: a.submatrix(&all_rows, &cols),
            v,
            pivot_rows,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.e.swap(i * self.cols + c, j * self.cols + c);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.e.swap(r * self.cols + i, r * self.cols + j);
        }
    }
    /// row_i += a·row_k
    fn row_axpy(&mut self, i: usize, k: usize, a: &TPoly) {
        for c in 0..self.cols {
            let t = self.get(k, c).mul_ref(a);
            if !t.is_zero() {
                let v = self.get(i, c).add_ref(&t);
                self.set(i, c, v);
            }
        }
    }
    /// col_j += a·col_k
    fn col_axpy(&mut self, j: usize, k: usize, a: &TPoly) {
        for r in 0..self.rows {
            let t = self.get(r, k).mul_ref(a);
            if !t.is_zero() {
                let v = self.get(r, j).add_ref(&t);
                self.set(r, j, v);
            }
        }
    }
    fn row_scale(&mut self, i: usize, a: Fe) {
        for c in 0..self.cols {
            let v = self.get(i, c).scale(a);
            self.set(i, c, v);
        }
    }
    fn col_scale(&mut self, j: usize, a: Fe) {
        for r in 0..self.rows {
            let v = self.get(r, j).scale(a);
            self.set(r, j, v);
        }
    }
}

/// Result of [`TMatrix::hermite_columns`].
#[derive(Clone, Debug)]
pub struct Hermite {
    /// r×k basis of the column module, column echelon form.
    pub h: TMatrix,
    /// Unimodular transform with G·V = [H | 0].
    pub v: TMatrix,
    pub pivot_rows: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
    /// Solve H·X = Y exactly over L[t]; None if some column of Y is not in the
    /// column module.
    pub fn solve(&self, y: &TMatrix) -> Option<TMatrix> {
        let f = self.h.field().clone();
        let k = self.rank();
        let mut x = TMatrix::zero(&f, k, y.cols());
        for col in 0..y.cols() {
            let mut res = y.col(col);
            for p in 0..k {
                let row = self.pivot_rows[p];
                let xp = res[row].div_exact(self.h.get(row, p))?;
                if !xp.is_zero() {
                    for (i, r) in res.iter_mut().enumerate() {
                        *r = r.sub_ref(&self.h.get(i, p).mul_ref(&xp));
                    }
                }
                x.set(p, col, xp);
            }
            if res.iter().any(|r| !r.is_zero()) {
                return None;
            }
        }
        Some(x)
    }
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_poly(rng: &mut ChaCha8Rng, f: &Field, deg: usize) -> TPoly {
        TPoly::from_coeffs(f, (0..=deg).map(|_| f.decode_unchecked(rng.gen_range(0..f.size()))).collect())
    }

    #[test]
    fn smith_swap_shape() {
        let f = build_field(3, 1).unwrap();
        let t = TPoly::t(&f);
        for d in 1..4 {
            let m = TMatrix::from_rows(&f, vec![vec![TPoly::zero(&f), TPoly::one(&f)], vec![t.pow(d), TPoly::zero(&f)]]);
            let (u, dd, v) = m.smith().unwrap();
            assert_eq!(u.mul(&m).mul(&v), dd);
            assert_eq!(dd, TMatrix::diag(&f, &[TPoly::one(&f), t.pow(d)]));
        }
    }

    #[test]
    fn smith_random_against_determinant() {
        let f = build_field(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 200 {
            let rows: Vec<Vec<TPoly>> = (0..3).map(|_| (0..3).map(|_| rand_poly(&mut rng, &f, 2)).collect()).collect();
            let m = TMatrix::from_rows(&f, rows);
            let det = m.det();
            if det.is_zero() {
                assert!(matches!(m.smith(), Err(Error::Singular)));
                continue;
            }
            let (u, d, v) = m.smith().unwrap();
            assert_eq!(u.mul(&m).mul(&v), d);
            assert_eq!(u.det().deg(), 0);
            assert_eq!(v.det().deg(), 0);
            let mut prod = TPoly::one(&f);
            for i in 0..3 {
                assert!(d.get(i, i).is_monic());
                if i > 0 {
                    assert!(d.get(i - 1, i - 1).divides(d.get(i, i)));
                }
                for j in 0..3 {
                    if i != j {
                        assert!(d.get(i, j).is_zero());
                    }
                }
                prod = prod.mul_ref(d.get(i, i));
            }
            assert_eq!(prod, det.monic());
            done += 1;
        }
    }

    #[test]
    fn det_matches_berkowitz_and_adjugate() {
        let f = build_field(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..5 {
            let rows: Vec<Vec<TPoly>> = (0..n).map(|_| (0..n).map(|_| rand_poly(&mut rng, &f, 2)).collect()).collect();
            let m = TMatrix::from_rows(&f, rows.clone());
            let d = m.det();
            assert_eq!(d, ring::det(&PolyRing(f.clone()), &rows));
            assert_eq!(m.mul(&m.adjugate()), TMatrix::scalar(&f, n, &d));
        }
    }

    #[test]
    fn hermite_solves_and_kernel() {
        let f = build_field(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let rows: Vec<Vec<TPoly>> = (0..2).map(|_| (0..3).map(|_| rand_poly(&mut rng, &f, 1)).collect()).collect();
            let g = TMatrix::from_rows(&f, rows);
            let h = g.hermite_columns();
            let gv = g.mul(&h.v);
            for j in 0..3 {
                for i in 0..2 {
                    let expect = if j < h.rank() { h.h.get(i, j).clone() } else { TPoly::zero(&f) };
                    assert_eq!(gv.get(i, j), &expect);
                }
            }
            assert_eq!(h.v.det().deg(), 0);
            let x = h.solve(&g).unwrap();
            assert_eq!(h.h.mul(&x), g);
        }
    }
}
