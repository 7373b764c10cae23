//! Division-free routines over commutative rings given by a context object.

use crate::field::Field;
use crate::poly::TPoly;

pub trait Ring {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
}

/// L[t].
pub struct PolyRing(pub Field);

impl Ring for PolyRing {
    type E = TPoly;
    fn zero(&self) -> TPoly {
        TPoly::zero(&self.0)
    }
    fn one(&self) -> TPoly {
        TPoly::one(&self.0)
    }
    fn add(&self, a: &TPoly, b: &TPoly) -> TPoly {
        a.add_ref(b)
    }
    fn sub(&self, a: &TPoly, b: &TPoly) -> TPoly {
        a.sub_ref(b)
    }
    fn mul(&self, a: &TPoly, b: &TPoly) -> TPoly {
        a.mul_ref(b)
    }
    fn neg(&self, a: &TPoly) -> TPoly {
        a.neg_ref()
    }
}

/// Coefficients c_0..c_n (c_n = 1) of det(x·I − A), by Berkowitz's algorithm.
pub fn berkowitz<R: Ring>(ring: &R, a: &[Vec<R::E>]) -> Vec<R::E> {
    let n = a.len();
    // coefficients highest-first
    let mut v: Vec<R::E> = vec![ring.one()];
    for r in 0..n {
        // first column of the Toeplitz matrix: 1, -a_rr, -R C, -R A C, ...
        let mut col = Vec::with_capacity(r + 2);
        col.push(ring.one());
        col.push(ring.neg(&a[r][r]));
        // w = C (column r, rows 0..r)
        let mut w: Vec<R::E> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            // R·w
            let mut s = ring.zero();
            for j in 0..r {
                s = ring.add(&s, &ring.mul(&a[r][j], &w[j]));
            }
            col.push(ring.neg(&s));
            // w = A_r w
            let mut nw = Vec::with_capacity(r);
            for i in 0..r {
                let mut s = ring.zero();
                for j in 0..r {
                    s = ring.add(&s, &ring.mul(&a[i][j], &w[j]));
                }
                nw.push(s);
            }
            w = nw;
        }
        // new v = T v, T is (r+2)×(r+1) lower-triangular Toeplitz
        let mut nv = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut s = ring.zero();
            for j in 0..=r.min(i) {
                if i - j < col.len() {
                    s = ring.add(&s, &ring.mul(&col[i - j], &v[j]));
                }
            }
            nv.push(s);
        }
        v = nv;
    }
    v.reverse();
    v
}

/// Determinant via Berkowitz: det A = (-1)^n c_0.
pub fn det<R: Ring>(ring: &R, a: &[Vec<R::E>]) -> R::E {
    let c = berkowitz(ring, a);
    if a.len() % 2 == 0 {
        c[0].clone()
    } else {
        ring.neg(&c[0])
    }
}
