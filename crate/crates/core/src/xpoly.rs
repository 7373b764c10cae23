//! Polynomials in x with coefficients in F[t].

use std::fmt;

use crate::field::{embedding, Embedding, Fe, Field};
use crate::poly::TPoly;
use crate::ring::Ring;

#[derive(Clone, PartialEq, Eq)]
pub struct XPoly {
    f: Field,
    c: Vec<TPoly>,
}

impl fmt::Debug for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("x"))
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("x"))
    }
}

impl XPoly {
    pub fn zero(f: &Field) -> Self {
        XPoly { f: f.clone(), c: vec![] }
    }
    pub fn one(f: &Field) -> Self {
        Self::constant(TPoly::one(f))
    }
    pub fn x(f: &Field) -> Self {
        Self::from_coeffs(f, vec![TPoly::zero(f), TPoly::one(f)])
    }
    pub fn constant(a: TPoly) -> Self {
        let f = a.field().clone();
        Self::from_coeffs(&f, vec![a])
    }
    /// x − a
    pub fn linear(a: &TPoly) -> Self {
        let f = a.field().clone();
        Self::from_coeffs(&f, vec![a.neg_ref(), TPoly::one(&f)])
    }
    pub fn from_coeffs(f: &Field, mut c: Vec<TPoly>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        XPoly { f: f.clone(), c }
    }
    pub fn field(&self) -> &Field {
        &self.f
    }
    pub fn coeffs(&self) -> &[TPoly] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> TPoly {
        self.c.get(i).cloned().unwrap_or_else(|| TPoly::zero(&self.f))
    }
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }
    pub fn lc(&self) -> TPoly {
        self.c.last().cloned().unwrap_or_else(|| TPoly::zero(&self.f))
    }
    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }
    /// Maximal t-degree of the coefficients.
    pub fn t_degree(&self) -> isize {
        self.c.iter().map(|a| a.deg()).max().unwrap_or(-1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs(&self.f, (0..n).map(|i| self.coeff(i).add_ref(&o.coeff(i))).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs(&self.f, (0..n).map(|i| self.coeff(i).sub_ref(&o.coeff(i))).collect())
    }
    pub fn neg(&self) -> Self {
        Self::from_coeffs(&self.f, self.c.iter().map(|a| a.neg_ref()).collect())
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.f);
        }
        let mut c = vec![TPoly::zero(&self.f); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Self::from_coeffs(&self.f, c)
    }
    pub fn scale(&self, a: &TPoly) -> Self {
        Self::from_coeffs(&self.f, self.c.iter().map(|x| x.mul_ref(a)).collect())
    }
    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(&self.f);
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
    pub fn derivative(&self) -> Self {
        let f = &self.f;
        Self::from_coeffs(
            f,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.scale(f.from_int(i as i64)))
                .collect(),
        )
    }
    /// self(x^k)
    pub fn inflate(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![TPoly::zero(&self.f); (self.c.len() - 1) * k + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Self::from_coeffs(&self.f, c)
    }
    /// g with self = g(x^k), if it exists.
    pub fn deflate(&self, k: usize) -> Option<Self> {
        if self.c.iter().enumerate().any(|(i, a)| i % k != 0 && !a.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(&self.f, self.c.iter().step_by(k).cloned().collect()))
    }

    /// Division by a divisor with unit leading coefficient (exact in F[t][x]).
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let lc = d.lc();
        assert!(lc.deg() == 0, "divisor must have constant leading coefficient");
        let inv = self.f.inv(lc.coeff(0));
        if self.deg() < d.deg() {
            return (Self::zero(&self.f), self.clone());
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        let mut q = vec![TPoly::zero(&self.f); r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + dl - 1].clone();
            if top.is_zero() {
                continue;
            }
            let coef = top.scale(inv);
            for (j, dc) in d.c.iter().enumerate() {
                if !dc.is_zero() {
                    r[k + j] = r[k + j].sub_ref(&coef.mul_ref(dc));
                }
            }
            q[k] = coef;
        }
        r.truncate(dl - 1);
        (Self::from_coeffs(&self.f, q), Self::from_coeffs(&self.f, r))
    }
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd of the coefficients.
    pub fn content(&self) -> TPoly {
        let mut g = TPoly::zero(&self.f);
        for a in &self.c {
            g = g.gcd(a);
            if g.is_one() {
                break;
            }
        }
        g
    }
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        let p = Self::from_coeffs(&self.f, self.c.iter().map(|a| a.div_exact(&c).unwrap()).collect());
        let inv = self.f.inv(p.lc().lc());
        Self::from_coeffs(&self.f, p.c.iter().map(|a| a.scale(inv)).collect())
    }
    /// Pseudo-remainder lc(d)^(deg a − deg d + 1)·a mod d.
    pub fn prem(&self, d: &Self) -> Self {
        let mut r = self.clone();
        let lc = d.lc();
        let dd = d.deg();
        while !r.is_zero() && r.deg() >= dd {
            let shift = (r.deg() - dd) as usize;
            let top = r.lc();
            let mut sub = vec![TPoly::zero(&self.f); shift];
            sub.extend(d.c.iter().map(|x| x.mul_ref(&top)));
            r = r.scale(&lc).sub(&Self::from_coeffs(&self.f, sub));
        }
        r
    }
    /// gcd over F(t)[x], normalized primitive with monic leading t-coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = o.primitive();
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = r.primitive();
        }
        let g = a.primitive();
        if g.is_zero() {
            return g;
        }
        let l = g.lc();
        let inv = self.f.inv(l.lc());
        Self::from_coeffs(&self.f, g.c.iter().map(|x| x.scale(inv)).collect())
    }

    /// Substitute t = c (c in the field of `emb.dst`); a univariate polynomial in x.
    pub fn eval_t(&self, emb: &Embedding, c: Fe) -> TPoly {
        TPoly::from_coeffs(&emb.dst, self.c.iter().map(|a| a.eval_embedded(emb, c)).collect())
    }
    pub fn map_coeffs(&self, target: &Field, g: impl Fn(&TPoly) -> TPoly) -> Self {
        Self::from_coeffs(target, self.c.iter().map(g).collect())
    }
    pub fn embed(&self, emb: &Embedding) -> Self {
        self.map_coeffs(&emb.dst, |a| a.embed(emb))
    }
    /// Whether every coefficient is fixed by x ↦ x^(p^k).
    pub fn fixed_by_frob(&self, k: u32) -> bool {
        self.c.iter().all(|a| a.frob(k) == *a)
    }
    /// Descend coefficients to a subfield; None if some coefficient is not in it.
    pub fn descend(&self, small: &Field) -> Option<Self> {
        if *small == self.f {
            return Some(self.clone());
        }
        let emb = embedding(small, &self.f).ok()?;
        let inv = crate::field::preimage_table(&emb);
        let mut out = Vec::with_capacity(self.c.len());
        for a in &self.c {
            let mut cs = Vec::with_capacity(a.coeffs().len());
            for &x in a.coeffs() {
                cs.push(*inv.get(&self.f.encode(x))?);
            }
            out.push(TPoly::from_coeffs(small, cs));
        }
        Some(Self::from_coeffs(small, out))
    }

    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for i in (0..self.c.len()).rev() {
            let a = &self.c[i];
            if a.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let body = a.display("t");
            let single = body.chars().skip(1).all(|ch| ch != '+' && ch != '-');
            let (neg, body) = match body.strip_prefix('-') {
                Some(rest) if single => (true, rest.to_string()),
                _ => (false, body),
            };
            if i == 0 && !single {
                // trailing constant: write its terms inline
                if !s.is_empty() && !body.starts_with('-') {
                    s.push('+');
                }
                s.push_str(&body);
                continue;
            }
            let term = if i == 0 {
                body
            } else if body == "1" {
                mono
            } else if single {
                format!("{body}*{mono}")
            } else {
                format!("({body})*{mono}")
            };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push(if neg { '-' } else { '+' });
            }
            s.push_str(&term);
        }
        s
    }

    /// Canonical total order (degree, then coefficients from the top).
    pub fn canonical_cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.deg().cmp(&o.deg()).then_with(|| {
            for i in (0..self.c.len()).rev() {
                let x = self.c[i].canonical_cmp(&o.c[i]);
                if x != std::cmp::Ordering::Equal {
                    return x;
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

/// F[t][x] as a ring, for division-free determinants.
pub struct XRing(pub Field);

impl Ring for XRing {
    type E = XPoly;
    fn zero(&self) -> XPoly {
        XPoly::zero(&self.0)
    }
    fn one(&self) -> XPoly {
        XPoly::one(&self.0)
    }
    fn add(&self, a: &XPoly, b: &XPoly) -> XPoly {
        a.add(b)
    }
    fn sub(&self, a: &XPoly, b: &XPoly) -> XPoly {
        a.sub(b)
    }
    fn mul(&self, a: &XPoly, b: &XPoly) -> XPoly {
        a.mul(b)
    }
    fn neg(&self, a: &XPoly) -> XPoly {
        a.neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn display_compact() {
        let f = build_field(3, 1).unwrap();
        let t = TPoly::t(&f);
        let x = XPoly::x(&f);
        let chi = x.pow(2).sub(&XPoly::constant(t.clone()));
        assert_eq!(chi.display("x"), "x^2-t");
        let g = x.sub(&XPoly::constant(TPoly::one(&f).sub_ref(&t))).pow(2);
        assert_eq!(g.display("x"), "x^2+(-t+1)*x+t^2+t+1");
    }

    #[test]
    fn gcd_over_rational_functions() {
        let f = build_field(3, 1).unwrap();
        let t = TPoly::t(&f);
        let x = XPoly::x(&f);
        let a = x.sub(&XPoly::constant(t.clone()));
        let b = x.add(&XPoly::constant(t.clone()));
        let c = x.pow(2).add(&XPoly::constant(TPoly::one(&f)));
        let g = a.mul(&c).gcd(&b.mul(&c));
        assert_eq!(g, c);
    }
}
