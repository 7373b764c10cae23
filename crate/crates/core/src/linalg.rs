//! Dense linear algebra over a finite field. Elimination is row-major and
//! deterministic.

use crate::field::{Fe, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fe>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }
    pub fn from_rows(rows: Vec<Vec<Fe>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }
    /// Matrix whose columns are the given vectors.
    pub fn from_cols(nrows: usize, cols: &[Vec<Fe>]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..nrows {
                m.set(i, j, c[i]);
            }
        }
        m
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn mul(&self, f: &Field, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows);
        let mut r = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = f.add(r.get(i, j), f.mul(a, b));
                        r.set(i, j, v);
                    }
                }
            }
        }
        r
    }
    pub fn mul_vec(&self, f: &Field, v: &[Fe]) -> Vec<Fe> {
        (0..self.rows)
            .map(|i| f.sum((0..self.cols).map(|j| f.mul(self.get(i, j), v[j]))))
            .collect()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            let pivot_row: Vec<Fe> = self.row(r)[c..].to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for (k, &pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        let j = c + k;
                        let v = f.sub(self.get(i, j), f.mul(factor, pv));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of the right nullspace {x : A x = 0}.
    pub fn nullspace(&self, f: &Field) -> Vec<Vec<Fe>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Fe::ZERO; self.cols];
            v[free] = Fe::ONE;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(m.get(i, free));
            }
            out.push(v);
        }
        out
    }

    /// Solve A x = b; returns one solution if consistent.
    pub fn solve(&self, f: &Field, b: &[Fe]) -> Option<Vec<Fe>> {
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self, f: &Field) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Fe::ONE);
        }
        let piv = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn det(&self, f: &Field) -> Fe {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Fe::ONE;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Fe::ZERO;
            };
            if piv != c {
                for j in 0..n {
                    m.data.swap(piv * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pv = m.get(c, c);
            det = f.mul(det, pv);
            let inv = f.inv(pv);
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

/// Row-reduced basis of the span of the given vectors.
pub fn span_basis(f: &Field, dim: usize, vecs: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    if vecs.is_empty() {
        return vec![];
    }
    let mut m = Mat::from_rows(vecs.to_vec());
    if m.cols == 0 {
        m.cols = dim;
    }
    let r = m.rref(f).len();
    (0..r).map(|i| m.row(i).to_vec()).collect()
}

/// Incremental echelon basis supporting membership tests.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub dim: usize,
    rows: Vec<(usize, Vec<Fe>)>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    /// Reduce v against the basis.
    pub fn reduce(&self, f: &Field, v: &[Fe]) -> Vec<Fe> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let c = v[*p];
            if !c.is_zero() {
                for j in 0..self.dim {
                    if !row[j].is_zero() {
                        v[j] = f.sub(v[j], f.mul(c, row[j]));
                    }
                }
            }
        }
        v
    }
    pub fn contains(&self, f: &Field, v: &[Fe]) -> bool {
        self.reduce(f, v).iter().all(|x| x.is_zero())
    }
    /// Insert; returns true if the rank grew.
    pub fn insert(&mut self, f: &Field, v: &[Fe]) -> bool {
        let mut r = self.reduce(f, v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(r[p]);
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        // keep the basis fully reduced at pivot positions
        for (_, row) in self.rows.iter_mut() {
            let c = row[p];
            if !c.is_zero() {
                for j in 0..self.dim {
                    if !r[j].is_zero() {
                        row[j] = f.sub(row[j], f.mul(c, r[j]));
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }
    pub fn vectors(&self) -> Vec<Vec<Fe>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}
