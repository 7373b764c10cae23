//! Rational functions in t over a finite field, kept in lowest terms with
//! monic denominator.

use std::fmt;

use crate::field::{Fe, Field};
use crate::poly::TPoly;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFn {
    pub num: TPoly,
    pub den: TPoly,
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl RatFn {
    pub fn new(num: TPoly, den: TPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let f = num.field().clone();
            return RatFn {
                num,
                den: TPoly::one(&f),
            };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
        let inv = n.field().inv(d.lc());
        n = n.scale(inv);
        d = d.scale(inv);
        RatFn { num: n, den: d }
    }
    pub fn from_poly(p: TPoly) -> Self {
        let f = p.field().clone();
        RatFn {
            num: p,
            den: TPoly::one(&f),
        }
    }
    pub fn zero(f: &Field) -> Self {
        Self::from_poly(TPoly::zero(f))
    }
    pub fn one(f: &Field) -> Self {
        Self::from_poly(TPoly::one(f))
    }
    pub fn constant(f: &Field, a: Fe) -> Self {
        Self::from_poly(TPoly::constant(f, a))
    }
    pub fn field(&self) -> &Field {
        self.num.field()
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }
    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add_ref(&o.num), self.den.clone());
        }
        Self::new(
            self.num.mul_ref(&o.den).add_ref(&o.num.mul_ref(&self.den)),
            self.den.mul_ref(&o.den),
        )
    }
    pub fn neg(&self) -> Self {
        RatFn {
            num: self.num.neg_ref(),
            den: self.den.clone(),
        }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field());
        }
        Self::new(self.num.mul_ref(&o.num), self.den.mul_ref(&o.den))
    }
    pub fn inv(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }
    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    pub fn pow_i(&self, k: i64) -> Self {
        let b = if k < 0 { self.inv() } else { self.clone() };
        Self::new(b.num.pow(k.unsigned_abs()), b.den.pow(k.unsigned_abs()))
    }
    /// Valuation at the place given by a monic irreducible `p`.
    pub fn val_at(&self, p: &TPoly) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.multiplicity(p) as i64 - self.den.multiplicity(p) as i64)
    }
    /// Valuation at infinity: deg den − deg num.
    pub fn val_inf(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.den.deg() as i64 - self.num.deg() as i64)
    }
}

/// Gaussian elimination over F(t): solve A x = b (A given by columns).
/// Returns None when inconsistent; the solution is unique when the columns are
/// independent.
pub fn solve_columns(cols: &[Vec<RatFn>], b: &[RatFn]) -> Option<Vec<RatFn>> {
    let f = b[0].field().clone();
    let n = b.len();
    let k = cols.len();
    let mut rows: Vec<Vec<RatFn>> = (0..n)
        .map(|i| {
            let mut r: Vec<RatFn> = cols.iter().map(|c| c[i].clone()).collect();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..=k {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else { continue };
        if c == k {
            return None;
        }
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for j in c..=k {
            rows[r][j] = rows[r][j].mul(&inv);
        }
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in c..=k {
                    let v = rows[i][j].sub(&factor.mul(&rows[r][j]));
                    rows[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut x = vec![RatFn::zero(&f); k];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][k].clone();
    }
    Some(x)
}

/// Rank of a matrix over F(t) given by rows.
pub fn rank(rows: &[Vec<RatFn>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut rows = rows.to_vec();
    let (n, m) = (rows.len(), rows[0].len());
    let mut r = 0;
    for c in 0..m {
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for i in r + 1..n {
            if !rows[i][c].is_zero() {
                let factor = rows[i][c].mul(&inv);
                for j in c..m {
                    let v = rows[i][j].sub(&factor.mul(&rows[r][j]));
                    rows[i][j] = v;
                }
            }
        }
        r += 1;
        if r == n {
            break;
        }
    }
    r
}
