//! Finite fields F_{p^n} with a deterministic defining modulus.
//!
//! Elements are opaque `Fe` handles; all arithmetic goes through the owning
//! [`Field`]. In every field `Fe(0)` is zero and `Fe(1)` is one. The canonical
//! integer encoding of an element is `Σ a_i p^i` where `Σ a_i X^i` is its
//! representative modulo the defining polynomial.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Fields up to this size use log/Zech tables.
const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Fe(pub(crate) u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
    pub fn is_one(self) -> bool {
        self.0 == 1
    }
}

enum Repr {
    /// value = log + 1; `exp[k]` is the encoding of g^k, `log[enc]` the inverse,
    /// `zech[k]` is log(1 + g^k) or `u32::MAX` when 1 + g^k = 0.
    Table {
        exp: Vec<u32>,
        log: Vec<u32>,
        zech: Vec<u32>,
    },
    /// value = canonical encoding.
    Poly,
}

struct Inner {
    p: u64,
    n: u32,
    size: u64,
    modulus: Vec<u64>,
    repr: Repr,
}

/// A finite field descriptor. Cloning is cheap; equal `(p, n)` always give
/// the same shared descriptor.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.n)
    }
}

static FIELDS: Lazy<Mutex<HashMap<(u64, u32), Field>>> = Lazy::new(|| Mutex::new(HashMap::new()));

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Returns `(p, a)` with `q = p^a`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut a = 0;
    let mut x = q;
    while x > 1 {
        x /= p;
        a += 1;
    }
    Some((p, a))
}

// Dense polynomial helpers over F_p, used to find moduli and for the
// polynomial representation of large fields.
mod fp {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }
    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut r = vec![0u128; a.len() + b.len() - 1];
        let pp = p as u128;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x as u128 * y as u128) % pp;
            }
        }
        let mut r: Vec<u64> = r.into_iter().map(|x| x as u64).collect();
        reduce(&mut r, m, p);
        r
    }
    /// Reduce modulo a monic `m`.
    pub fn reduce(r: &mut Vec<u64>, m: &[u64], p: u64) {
        let n = m.len() - 1;
        trim(r);
        while r.len() > n {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - n;
            for (k, &c) in m.iter().enumerate() {
                let sub = (lead as u128 * c as u128 % p as u128) as u64;
                r[shift + k] = (r[shift + k] + p - sub) % p;
            }
            trim(r);
        }
    }
    pub fn powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = base.to_vec();
        reduce(&mut b, m, p);
        reduce(&mut result, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        result
    }
    pub fn inv_mod_p(a: u64, p: u64) -> u64 {
        let mut r = 1u128;
        let mut b = a as u128 % p as u128;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u128;
            }
            b = b * b % p as u128;
            e >>= 1;
        }
        r as u64
    }
    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let inv = inv_mod_p(*b.last().unwrap(), p);
            let mb: Vec<u64> = b.iter().map(|&c| (c as u128 * inv as u128 % p as u128) as u64).collect();
            reduce(&mut a, &mb, p);
            std::mem::swap(&mut a, &mut b);
        }
        a
    }
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let n = m.len() - 1;
        if n == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        let pn = (p as u128).pow(n as u32);
        let xq = powmod(&x, pn, m, p);
        let mut xr = xq.clone();
        trim(&mut xr);
        if xr != x {
            return false;
        }
        for l in super::prime_factors(n as u64) {
            let e = (p as u128).pow((n as u64 / l) as u32);
            let mut h = powmod(&x, e, m, p);
            while h.len() < 2 {
                h.push(0);
            }
            h[1] = (h[1] + p - 1) % p;
            trim(&mut h);
            let g = gcd(m, &h, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

fn digits(mut v: u64, p: u64, n: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(v % p);
        v /= p;
    }
    out
}

fn undigits(d: &[u64], p: u64) -> u64 {
    let mut v = 0u64;
    for &c in d.iter().rev() {
        v = v * p + c;
    }
    v
}

fn first_irreducible(p: u64, n: u32) -> Vec<u64> {
    let count = p.pow(n);
    for low in 0..count {
        let mut m = digits(low, p, n);
        m.push(1);
        if fp::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// Build (or fetch) the field F_{p^n}.
pub fn build_field(p: u64, n: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::Invalid("extension degree must be positive".into()));
    }
    let size = (p as u128).checked_pow(n).filter(|s| *s < (1u128 << 62));
    let size = match size {
        Some(s) => s as u64,
        None => return Err(Error::Computation(format!("field F_{p}^{n} too large"))),
    };
    let mut cache = FIELDS.lock().unwrap();
    if let Some(f) = cache.get(&(p, n)) {
        return Ok(f.clone());
    }
    let modulus = first_irreducible(p, n);
    let mut inner = Inner {
        p,
        n,
        size,
        modulus,
        repr: Repr::Poly,
    };
    if size <= TABLE_LIMIT {
        inner.repr = build_tables(&inner);
    }
    let f = Field(Arc::new(inner));
    cache.insert((p, n), f.clone());
    Ok(f)
}

fn poly_mul_enc(inner: &Inner, a: u64, b: u64) -> u64 {
    let da = digits(a, inner.p, inner.n);
    let db = digits(b, inner.p, inner.n);
    let mut r = fp::mulmod(&da, &db, &inner.modulus, inner.p);
    r.resize(inner.n as usize, 0);
    undigits(&r, inner.p)
}

fn build_tables(inner: &Inner) -> Repr {
    let s = inner.size;
    let order = s - 1;
    let factors = prime_factors(order);
    let pow_enc = |g: u64, e: u64| -> u64 {
        let mut r = 1u64;
        let mut b = g;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = poly_mul_enc(inner, r, b);
            }
            b = poly_mul_enc(inner, b, b);
            e >>= 1;
        }
        r
    };
    let mut g = 1u64;
    for cand in 1..s {
        if factors.iter().all(|&l| pow_enc(cand, order / l) != 1) {
            g = cand;
            break;
        }
    }
    if order == 1 {
        g = 1;
    }
    let mut exp = vec![0u32; order as usize];
    let mut log = vec![0u32; s as usize];
    let mut x = 1u64;
    for k in 0..order {
        exp[k as usize] = x as u32;
        log[x as usize] = k as u32;
        x = poly_mul_enc(inner, x, g);
    }
    let p = inner.p;
    let n = inner.n;
    let mut zech = vec![u32::MAX; order as usize];
    for k in 0..order {
        let mut d = digits(exp[k as usize] as u64, p, n);
        d[0] = (d[0] + 1) % p;
        let v = undigits(&d, p);
        if v != 0 {
            zech[k as usize] = log[v as usize];
        }
    }
    Repr::Table { exp, log, zech }
}

impl Field {
    pub fn char(&self) -> u64 {
        self.0.p
    }
    pub fn degree(&self) -> u32 {
        self.0.n
    }
    pub fn size(&self) -> u64 {
        self.0.size
    }
    /// Defining modulus over F_p, constant term first, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }
    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// Canonical integer encoding.
    pub fn encode(&self, a: Fe) -> u64 {
        match &self.0.repr {
            Repr::Table { exp, .. } => {
                if a.0 == 0 {
                    0
                } else {
                    exp[(a.0 - 1) as usize] as u64
                }
            }
            Repr::Poly => a.0,
        }
    }

    pub fn decode(&self, v: u64) -> Result<Fe> {
        if v >= self.0.size {
            return Err(Error::Invalid(format!("encoding {v} out of range for {self:?}")));
        }
        Ok(self.decode_unchecked(v))
    }

    pub(crate) fn decode_unchecked(&self, v: u64) -> Fe {
        match &self.0.repr {
            Repr::Table { log, .. } => {
                if v == 0 {
                    Fe(0)
                } else {
                    Fe(log[v as usize] as u64 + 1)
                }
            }
            Repr::Poly => Fe(v),
        }
    }

    /// Base-p digit vector of length n.
    pub fn digits(&self, a: Fe) -> Vec<u64> {
        digits(self.encode(a), self.0.p, self.0.n)
    }

    pub fn from_digits(&self, d: &[u64]) -> Fe {
        let mut v = d.to_vec();
        v.resize(self.0.n as usize, 0);
        let v: Vec<u64> = v.iter().map(|c| c % self.0.p).collect();
        self.decode_unchecked(undigits(&v, self.0.p))
    }

    /// Image of an integer under Z → F_p ⊂ F.
    pub fn from_int(&self, k: i64) -> Fe {
        let p = self.0.p as i64;
        let r = k.rem_euclid(p) as u64;
        self.decode_unchecked(r)
    }

    /// The generator X (class of the variable modulo the modulus).
    pub fn gen(&self) -> Fe {
        if self.0.n == 1 {
            // modulus is x - c; X = c
            let c = (self.0.p - self.0.modulus[0]) % self.0.p;
            self.decode_unchecked(c)
        } else {
            self.decode_unchecked(self.0.p)
        }
    }

    /// Iterate over all elements in canonical encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.0.size).map(move |v| self.decode_unchecked(v))
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        match &self.0.repr {
            Repr::Table { zech, .. } => {
                let order = self.0.size - 1;
                let la = a.0 - 1;
                let lb = b.0 - 1;
                let k = (lb + order - la) % order;
                let z = zech[k as usize];
                if z == u32::MAX {
                    Fe(0)
                } else {
                    Fe((la + z as u64) % order + 1)
                }
            }
            Repr::Poly => {
                let p = self.0.p;
                if self.0.n == 1 {
                    return Fe((a.0 + b.0) % p);
                }
                let (mut x, mut y) = (a.0, b.0);
                let mut r = 0u64;
                let mut base = 1u64;
                for _ in 0..self.0.n {
                    r += ((x % p + y % p) % p) * base;
                    x /= p;
                    y /= p;
                    base = base.wrapping_mul(p);
                }
                Fe(r)
            }
        }
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if a.0 == 0 || self.0.p == 2 {
            return a;
        }
        match &self.0.repr {
            Repr::Table { .. } => {
                let order = self.0.size - 1;
                Fe((a.0 - 1 + order / 2) % order + 1)
            }
            Repr::Poly => {
                let p = self.0.p;
                let d: Vec<u64> = digits(a.0, p, self.0.n).into_iter().map(|c| (p - c) % p).collect();
                Fe(undigits(&d, p))
            }
        }
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        match &self.0.repr {
            Repr::Table { .. } => {
                let order = self.0.size - 1;
                Fe((a.0 - 1 + b.0 - 1) % order + 1)
            }
            Repr::Poly => {
                if self.0.n == 1 {
                    return Fe((a.0 as u128 * b.0 as u128 % self.0.p as u128) as u64);
                }
                Fe(poly_mul_enc(&self.0, a.0, b.0))
            }
        }
    }

    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        match &self.0.repr {
            Repr::Table { .. } => {
                let order = self.0.size - 1;
                Fe((order - (a.0 - 1)) % order + 1)
            }
            Repr::Poly => self.pow(a, self.0.size as u128 - 2),
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: u128) -> Fe {
        if e == 0 {
            return Fe(1);
        }
        if a.0 == 0 {
            return Fe(0);
        }
        match &self.0.repr {
            Repr::Table { .. } => {
                let order = (self.0.size - 1) as u128;
                let l = (a.0 - 1) as u128;
                Fe(((l * (e % order)) % order) as u64 + 1)
            }
            Repr::Poly => {
                let mut r = Fe(1);
                let mut b = a;
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        r = self.mul(r, b);
                    }
                    b = self.mul(b, b);
                    e >>= 1;
                }
                r
            }
        }
    }

    /// a^(p^k).
    pub fn frob(&self, a: Fe, k: u32) -> Fe {
        let k = k % self.0.n;
        if k == 0 || a.0 <= 1 {
            return a;
        }
        match &self.0.repr {
            Repr::Table { .. } => {
                let order = (self.0.size - 1) as u128;
                let pk = (self.0.p as u128).pow(k) % order;
                Fe((((a.0 - 1) as u128 * pk) % order) as u64 + 1)
            }
            Repr::Poly => self.pow(a, (self.0.p as u128).pow(k)),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> u64 {
        let n = self.0.size - 1;
        let mut ord = n;
        for l in prime_factors(n) {
            while ord % l == 0 && self.pow(a, (ord / l) as u128).is_one() {
                ord /= l;
            }
        }
        ord
    }

    /// Whether `a` lies in the subfield of size p^k (k | n).
    pub fn in_subfield(&self, a: Fe, k: u32) -> bool {
        self.frob(a, k) == a
    }

    /// The p-th root (F is perfect).
    pub fn pth_root(&self, a: Fe) -> Fe {
        self.frob(a, self.0.n - 1)
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe(0), |acc, x| self.add(acc, x))
    }

    pub fn fmt_elt(&self, a: Fe) -> String {
        self.encode(a).to_string()
    }
}

/// The canonical embedding of a subfield into an extension.
pub struct Embedding {
    pub src: Field,
    pub dst: Field,
    image_of_gen: Fe,
    table: Option<Vec<Fe>>,
    gen_powers: Vec<Fe>,
    preimage: once_cell::sync::OnceCell<HashMap<u64, Fe>>,
}

impl Embedding {
    pub fn apply(&self, a: Fe) -> Fe {
        if let Some(t) = &self.table {
            return t[self.src.encode(a) as usize];
        }
        let d = self.src.digits(a);
        let mut acc = Fe::ZERO;
        for (i, c) in d.iter().enumerate() {
            if *c != 0 {
                let term = self.dst.mul(self.dst.from_int(*c as i64), self.gen_powers[i]);
                acc = self.dst.add(acc, term);
            }
        }
        acc
    }
    pub fn image_of_gen(&self) -> Fe {
        self.image_of_gen
    }
}

static EMBEDDINGS: Lazy<Mutex<HashMap<(u64, u32, u32), Arc<Embedding>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The canonical embedding `src → dst`, cached per field pair.
///
/// The image of the generator is the least-encoded root of the source modulus
/// in `dst`, restricted to roots compatible with the embeddings through
/// intermediate fields when those agree.
pub fn embedding(src: &Field, dst: &Field) -> Result<Arc<Embedding>> {
    if src.char() != dst.char() || dst.degree() % src.degree() != 0 {
        return Err(Error::NoEmbedding(format!("{src:?} -> {dst:?}")));
    }
    let key = (src.char(), src.degree(), dst.degree());
    if let Some(e) = EMBEDDINGS.lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let image = if src.degree() == 1 {
        Fe::ZERO
    } else if src == dst {
        src.gen()
    } else {
        let modpoly: Vec<Fe> = src.modulus().iter().map(|&c| dst.from_int(c as i64)).collect();
        let mut roots = crate::ffactor::roots(&crate::poly::TPoly::from_coeffs(dst, modpoly));
        roots.sort_by_key(|r| dst.encode(*r));
        let (a, b) = (src.degree(), dst.degree());
        let mut constraint: Option<Fe> = None;
        let mut conflict = false;
        for mid in (a + 1)..b {
            if mid % a == 0 && b % mid == 0 {
                let fmid = build_field(src.char(), mid)?;
                let e1 = embedding(src, &fmid)?;
                let e2 = embedding(&fmid, dst)?;
                let r = e2.apply(e1.apply(src.gen()));
                match constraint {
                    None => constraint = Some(r),
                    Some(c) if c != r => conflict = true,
                    _ => {}
                }
            }
        }
        match constraint {
            Some(c) if !conflict && roots.contains(&c) => c,
            _ => roots[0],
        }
    };
    let n = src.degree() as usize;
    let mut gen_powers = Vec::with_capacity(n);
    let mut x = Fe::ONE;
    for _ in 0..n {
        gen_powers.push(x);
        x = dst.mul(x, image);
    }
    let mut emb = Embedding {
        src: src.clone(),
        dst: dst.clone(),
        image_of_gen: image,
        table: None,
        gen_powers,
        preimage: once_cell::sync::OnceCell::new(),
    };
    if src.size() <= TABLE_LIMIT {
        let table: Vec<Fe> = (0..src.size()).map(|v| emb.apply(src.decode_unchecked(v))).collect();
        emb.table = Some(table);
    }
    let emb = Arc::new(emb);
    EMBEDDINGS.lock().unwrap().insert(key, emb.clone());
    Ok(emb)
}

/// Map from destination encodings back to source elements (source fields up
/// to the table limit).
pub fn preimage_table(emb: &Embedding) -> &HashMap<u64, Fe> {
    emb.preimage.get_or_init(|| {
        assert!(emb.src.size() <= TABLE_LIMIT, "preimage table for a large subfield");
        emb.src.elements().map(|a| (emb.dst.encode(emb.apply(a)), a)).collect()
    })
}

/// Embed a single element.
pub fn embed(x: Fe, src: &Field, target: &Field) -> Result<Fe> {
    Ok(embedding(src, target)?.apply(x))
}

/// An F_q-basis `1, X, …, X^{e-1}` of L = F_{q^e}, where X generates L over F_p,
/// with coordinate extraction.
pub struct RelativeBasis {
    pub small: Field,
    pub big: Field,
    pub rel_degree: usize,
    emb: Arc<Embedding>,
    /// rows: F_p digits of big element → F_p digits of the small coordinates
    inverse: Vec<Vec<u64>>,
    basis: Vec<Fe>,
}

impl RelativeBasis {
    pub fn new(small: &Field, big: &Field) -> Result<Self> {
        let emb = embedding(small, big)?;
        let a = small.degree() as usize;
        let e = (big.degree() / small.degree()) as usize;
        let p = big.char();
        let n = big.degree() as usize;
        let x = big.gen();
        let mut basis = Vec::with_capacity(e);
        let mut cur = Fe::ONE;
        for _ in 0..e {
            basis.push(cur);
            cur = big.mul(cur, x);
        }
        // columns: small digit j at position i  ->  digits of emb(Y^j)·X^i
        let ygen = small.gen();
        let mut ypows = Vec::with_capacity(a);
        let mut y = Fe::ONE;
        for _ in 0..a {
            ypows.push(y);
            y = small.mul(y, ygen);
        }
        let mut m = vec![vec![0u64; n]; n];
        for i in 0..e {
            for j in 0..a {
                let v = big.mul(emb.apply(ypows[j]), basis[i]);
                let d = big.digits(v);
                for r in 0..n {
                    m[r][i * a + j] = d[r];
                }
            }
        }
        let inverse = invert_mod_p(&m, p).ok_or_else(|| Error::Internal("relative basis singular".into()))?;
        Ok(RelativeBasis {
            small: small.clone(),
            big: big.clone(),
            rel_degree: e,
            emb,
            inverse,
            basis,
        })
    }

    pub fn basis(&self) -> &[Fe] {
        &self.basis
    }

    /// Coordinates of `v` in the basis, as elements of the small field.
    pub fn coords(&self, v: Fe) -> Vec<Fe> {
        let d = self.big.digits(v);
        let p = self.big.char();
        let a = self.small.degree() as usize;
        let n = d.len();
        let mut flat = vec![0u64; n];
        for r in 0..n {
            let mut s = 0u128;
            for c in 0..n {
                s += self.inverse[r][c] as u128 * d[c] as u128;
            }
            flat[r] = (s % p as u128) as u64;
        }
        (0..self.rel_degree).map(|i| self.small.from_digits(&flat[i * a..(i + 1) * a])).collect()
    }

    pub fn combine(&self, c: &[Fe]) -> Fe {
        let mut acc = Fe::ZERO;
        for (i, &x) in c.iter().enumerate() {
            if !x.is_zero() {
                acc = self.big.add(acc, self.big.mul(self.emb.apply(x), self.basis[i]));
            }
        }
        acc
    }

    pub fn lift(&self, x: Fe) -> Fe {
        self.emb.apply(x)
    }

    /// Pull an element of the subfield back to the small field; `None` if it is
    /// not in the image.
    pub fn descend(&self, v: Fe) -> Option<Fe> {
        let c = self.coords(v);
        if c[1..].iter().all(|x| x.is_zero()) {
            Some(c[0])
        } else {
            None
        }
    }
}

fn invert_mod_p(m: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let inv = fp::inv_mod_p(a[col][col], p);
        for x in a[col].iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..2 * n {
                    let sub = (f as u128 * a[col][c] as u128 % p as u128) as u64;
                    a[r][c] = (a[r][c] + p - sub) % p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
