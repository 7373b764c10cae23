//! Dense univariate polynomials over a finite field.
//!
//! `TPoly` is used for L[t] but also for any univariate polynomial over a
//! field (the variable name only matters for display).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::{Embedding, Fe, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct TPoly {
    f: Field,
    c: Vec<Fe>,
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("t"))
    }
}

impl TPoly {
    pub fn zero(f: &Field) -> Self {
        TPoly { f: f.clone(), c: vec![] }
    }
    pub fn one(f: &Field) -> Self {
        Self::constant(f, Fe::ONE)
    }
    pub fn constant(f: &Field, a: Fe) -> Self {
        Self::from_coeffs(f, vec![a])
    }
    /// The variable t.
    pub fn t(f: &Field) -> Self {
        Self::from_coeffs(f, vec![Fe::ZERO, Fe::ONE])
    }
    pub fn monomial(f: &Field, a: Fe, k: usize) -> Self {
        let mut c = vec![Fe::ZERO; k + 1];
        c[k] = a;
        Self::from_coeffs(f, c)
    }
    /// t - a
    pub fn linear(f: &Field, a: Fe) -> Self {
        Self::from_coeffs(f, vec![f.neg(a), Fe::ONE])
    }
    pub fn from_coeffs(f: &Field, mut c: Vec<Fe>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        TPoly { f: f.clone(), c }
    }
    /// From canonical integer encodings, constant term first.
    pub fn from_encodings(f: &Field, enc: &[u64]) -> Self {
        Self::from_coeffs(f, enc.iter().map(|&v| f.decode_unchecked(v % f.size())).collect())
    }
    pub fn encodings(&self) -> Vec<u64> {
        self.c.iter().map(|&x| self.f.encode(x)).collect()
    }
    pub fn field(&self) -> &Field {
        &self.f
    }
    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }
    /// Degree, -1 for zero.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }
    pub fn lc(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }
    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }
    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.f.inv(self.lc());
        self.scale(inv)
    }
    pub fn scale(&self, a: Fe) -> Self {
        if a.is_zero() {
            return Self::zero(&self.f);
        }
        TPoly {
            f: self.f.clone(),
            c: self.c.iter().map(|&x| self.f.mul(x, a)).collect(),
        }
    }
    /// Multiply by t^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Fe::ZERO; k];
        c.extend_from_slice(&self.c);
        TPoly { f: self.f.clone(), c }
    }
    /// Reduce modulo t^k.
    pub fn truncate(&self, k: usize) -> Self {
        Self::from_coeffs(&self.f, self.c.iter().take(k).copied().collect())
    }
    /// Largest k with t^k | self (None for zero).
    pub fn t_valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.f.add(self.coeff(i), o.coeff(i))).collect();
        Self::from_coeffs(&self.f, c)
    }
    pub fn sub_ref(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.f.sub(self.coeff(i), o.coeff(i))).collect();
        Self::from_coeffs(&self.f, c)
    }
    pub fn neg_ref(&self) -> Self {
        TPoly {
            f: self.f.clone(),
            c: self.c.iter().map(|&x| self.f.neg(x)).collect(),
        }
    }
    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.f);
        }
        let f = &self.f;
        let mut c = vec![Fe::ZERO; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = f.add(c[i + j], f.mul(a, b));
                }
            }
        }
        Self::from_coeffs(f, c)
    }
    /// Product truncated mod t^k.
    pub fn mul_trunc(&self, o: &Self, k: usize) -> Self {
        if self.is_zero() || o.is_zero() || k == 0 {
            return Self::zero(&self.f);
        }
        let f = &self.f;
        let n = (self.c.len() + o.c.len() - 1).min(k);
        let mut c = vec![Fe::ZERO; n];
        for (i, &a) in self.c.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    c[i + j] = f.add(c[i + j], f.mul(a, b));
                }
            }
        }
        Self::from_coeffs(f, c)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(&self.f);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_ref(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_ref(&b);
            }
        }
        r
    }

    /// Division with remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.f;
        if self.deg() < d.deg() {
            return (Self::zero(f), self.clone());
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        let inv = f.inv(d.lc());
        let mut q = vec![Fe::ZERO; r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + dl - 1];
            if top.is_zero() {
                continue;
            }
            let coef = f.mul(top, inv);
            q[k] = coef;
            for (j, &dc) in d.c.iter().enumerate() {
                if !dc.is_zero() {
                    r[k + j] = f.sub(r[k + j], f.mul(coef, dc));
                }
            }
        }
        r.truncate(dl - 1);
        (Self::from_coeffs(f, q), Self::from_coeffs(f, r))
    }
    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }
    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero if both zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, u) with s·self + u·o = g monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let f = &self.f;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub_ref(&q.mul_ref(&s1));
            let t2 = t0.sub_ref(&q.mul_ref(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lc());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse modulo m, if coprime.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).xgcd(m);
        if g.is_one() {
            Some(s.rem(m))
        } else {
            None
        }
    }

    pub fn mulmod(&self, o: &Self, m: &Self) -> Self {
        self.mul_ref(o).rem(m)
    }
    pub fn powmod(&self, e: u128, m: &Self) -> Self {
        let mut r = Self::one(&self.f).rem(m);
        let mut b = self.rem(m);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mulmod(&b, m);
            }
            e >>= 1;
            if e > 0 {
                b = b.mulmod(&b, m);
            }
        }
        r
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.f;
        let mut acc = Fe::ZERO;
        for &c in self.c.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }
    /// Evaluate at an element of an extension via an embedding.
    pub fn eval_embedded(&self, emb: &Embedding, x: Fe) -> Fe {
        let g = &emb.dst;
        let mut acc = Fe::ZERO;
        for &c in self.c.iter().rev() {
            acc = g.add(g.mul(acc, x), emb.apply(c));
        }
        acc
    }
    /// self(g(t)).
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero(&self.f);
        for &c in self.c.iter().rev() {
            acc = acc.mul_ref(g).add_ref(&Self::constant(&self.f, c));
        }
        acc
    }
    pub fn derivative(&self) -> Self {
        let f = &self.f;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(f.from_int(i as i64), a))
            .collect();
        Self::from_coeffs(f, c)
    }
    /// Apply x ↦ x^(p^k) to every coefficient.
    pub fn frob(&self, k: u32) -> Self {
        if k % self.f.degree() == 0 {
            return self.clone();
        }
        TPoly {
            f: self.f.clone(),
            c: self.c.iter().map(|&x| self.f.frob(x, k)).collect(),
        }
    }
    pub fn map_coeffs(&self, target: &Field, g: impl Fn(Fe) -> Fe) -> Self {
        Self::from_coeffs(target, self.c.iter().map(|&x| g(x)).collect())
    }
    pub fn embed(&self, emb: &Embedding) -> Self {
        self.map_coeffs(&emb.dst, |x| emb.apply(x))
    }
    /// Coefficients pulled back to a subfield; None if some coefficient is not
    /// in it.
    pub fn descend(&self, small: &Field) -> Option<Self> {
        if *small == self.f {
            return Some(self.clone());
        }
        let emb = crate::field::embedding(small, &self.f).ok()?;
        let inv = crate::field::preimage_table(&emb);
        let mut c = Vec::with_capacity(self.c.len());
        for &x in &self.c {
            c.push(*inv.get(&self.f.encode(x))?);
        }
        Some(Self::from_coeffs(small, c))
    }
    /// If every coefficient is a p-th power pattern in t (only exponents
    /// divisible by p occur), return g with self = g(t^p).
    pub fn deflate(&self, p: usize) -> Option<Self> {
        if self.c.iter().enumerate().any(|(i, x)| i % p != 0 && !x.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(&self.f, self.c.iter().step_by(p).copied().collect()))
    }
    pub fn inflate(&self, p: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Fe::ZERO; (self.c.len() - 1) * p + 1];
        for (i, &x) in self.c.iter().enumerate() {
            c[i * p] = x;
        }
        Self::from_coeffs(&self.f, c)
    }
    /// Multiplicity of `v` as a factor (v non-constant).
    pub fn multiplicity(&self, v: &Self) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(v) {
            cur = q;
            k += 1;
        }
        k
    }

    /// Canonical total order: degree, then coefficient encodings from the top.
    pub fn canonical_cmp(&self, o: &Self) -> Ordering {
        self.deg().cmp(&o.deg()).then_with(|| {
            for i in (0..self.c.len()).rev() {
                let x = self.f.encode(self.c[i]).cmp(&o.f.encode(o.c[i]));
                if x != Ordering::Equal {
                    return x;
                }
            }
            Ordering::Equal
        })
    }

    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let p = self.f.char();
        let prime = self.f.degree() == 1;
        let mut parts: Vec<String> = Vec::new();
        for i in (0..self.c.len()).rev() {
            let a = self.c[i];
            if a.is_zero() {
                continue;
            }
            let enc = self.f.encode(a);
            // over a prime field show p-1 as a minus sign
            let (neg, mag) = if prime && p > 2 && enc > p / 2 { (true, p - enc) } else { (false, enc) };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let body = if i == 0 {
                mag.to_string()
            } else if mag == 1 && prime {
                mono
            } else if prime {
                format!("{mag}*{mono}")
            } else {
                format!("[{mag}]*{mono}")
            };
            let body = if !prime && i == 0 { format!("[{mag}]") } else { body };
            if parts.is_empty() {
                parts.push(if neg { format!("-{body}") } else { body });
            } else {
                parts.push(if neg { format!("-{body}") } else { format!("+{body}") });
            }
        }
        parts.join("")
    }
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, o: &TPoly) -> TPoly {
        self.add_ref(o)
    }
}
impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, o: &TPoly) -> TPoly {
        self.sub_ref(o)
    }
}
impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, o: &TPoly) -> TPoly {
        self.mul_ref(o)
    }
}
impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn p(f: &Field, c: &[i64]) -> TPoly {
        TPoly::from_coeffs(f, c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn divrem_identity() {
        let f = build_field(3, 1).unwrap();
        let a = p(&f, &[1, 2, 0, 1, 2]);
        let b = p(&f, &[2, 1, 1]);
        let (q, r) = a.divrem(&b);
        assert!(r.deg() < b.deg());
        assert_eq!(&(&q * &b) + &r, a);
    }

    #[test]
    fn xgcd_bezout() {
        let f = build_field(5, 1).unwrap();
        let a = p(&f, &[1, 0, 1]);
        let b = p(&f, &[1, 1]);
        let (g, s, u) = a.xgcd(&b);
        assert_eq!(&(&s * &a) + &(&u * &b), g);
        assert!(g.is_one());
    }

    #[test]
    fn compose_and_derivative() {
        let f = build_field(3, 1).unwrap();
        let a = p(&f, &[0, 0, 1]); // t^2
        let g = p(&f, &[1, 1]); // t+1
        assert_eq!(a.compose(&g), p(&f, &[1, 2, 1]));
        assert_eq!(p(&f, &[0, 0, 0, 1]).derivative(), TPoly::zero(&f));
    }

    #[test]
    fn display_signs() {
        let f = build_field(3, 1).unwrap();
        assert_eq!(p(&f, &[0, 0, 1]).sub_ref(&p(&f, &[0, 1])).display("x"), "x^2-x");
    }
}
