#![allow(dead_code)]

use std::collections::HashSet;

use anderson::format::parse_motive;
use anderson::motive::{fields, Motive};
use anderson::{Fe, Field, TMatrix, TPoly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn motive(text: &str) -> Motive {
    parse_motive(text).unwrap()
}

pub fn rand_elt(rng: &mut ChaCha8Rng, l: &Field) -> Fe {
    l.decode(rng.gen_range(0..l.size())).unwrap()
}

pub fn rand_nonzero(rng: &mut ChaCha8Rng, l: &Field) -> Fe {
    l.decode(rng.gen_range(1..l.size())).unwrap()
}

pub fn rand_poly(rng: &mut ChaCha8Rng, l: &Field, deg: usize) -> TPoly {
    TPoly::from_coeffs(l, (0..=deg).map(|_| rand_elt(rng, l)).collect())
}

/// I + c·t^j·E_ab for a ≠ b.
pub fn elementary(rng: &mut ChaCha8Rng, l: &Field, r: usize, max_deg: usize) -> TMatrix {
    let mut m = TMatrix::identity(l, r);
    if r < 2 {
        return m;
    }
    let a = rng.gen_range(0..r);
    let b = (a + rng.gen_range(1..r)) % r;
    m.set(a, b, rand_poly(rng, l, max_deg));
    m
}

/// A random element of GL_r(L[t]) built from elementary matrices and a
/// diagonal of units.
pub fn unimodular(rng: &mut ChaCha8Rng, l: &Field, r: usize, steps: usize, max_deg: usize) -> TMatrix {
    let d: Vec<TPoly> = (0..r).map(|_| TPoly::constant(l, rand_nonzero(rng, l))).collect();
    let mut u = TMatrix::diag(l, &d);
    for _ in 0..steps {
        u = u.mul(&elementary(rng, l, r, max_deg));
    }
    u
}

fn companion(rng: &mut ChaCha8Rng, l: &Field, r: usize, theta: Fe) -> TMatrix {
    // τ e_i = e_{i+1}, τ e_r = (t−θ)/g_r e_1 − Σ (g_i/g_r) e_{i+1}: a
    // Drinfeld-module-shaped matrix of rank r
    let mut m = TMatrix::zero(l, r, r);
    for i in 1..r {
        m.set(i, i - 1, TPoly::one(l));
    }
    let c = rand_nonzero(rng, l);
    m.set(0, r - 1, TPoly::linear(l, theta).scale(c));
    for i in 1..r {
        m.set(i, r - 1, TPoly::constant(l, rand_elt(rng, l)));
    }
    m
}

/// A random valid motive with the given field parameters, rank r and
/// deg_t T ≤ max_deg.
pub fn random_motive(rng: &mut ChaCha8Rng, q: u64, e: u32, r: usize, max_deg: usize) -> Motive {
    random_motive_with(rng, q, e, r, max_deg, None)
}

/// As random_motive, optionally with a prescribed θ.
pub fn random_motive_with(
    rng: &mut ChaCha8Rng,
    q: u64,
    e: u32,
    r: usize,
    max_deg: usize,
    theta: Option<Fe>,
) -> Motive {
    let (_, l) = fields(q, e).unwrap();
    loop {
        let theta = theta.unwrap_or_else(|| rand_elt(rng, &l));
        let t = match rng.gen_range(0..3) {
            0 => companion(rng, &l, r, theta),
            _ => {
                let lin = TPoly::linear(&l, theta);
                let k = rng.gen_range(1..=max_deg.min(2));
                let d: Vec<TPoly> = (0..r).map(|_| lin.pow(k as u64)).collect();
                let mut t = TMatrix::diag(&l, &d);
                // mix with unimodular factors on both sides; a companion
                // factor changes the slope pattern
                if rng.gen_bool(0.5) {
                    t = t.mul(&companion(rng, &l, r, theta));
                }
                unimodular(rng, &l, r, 2, 1).mul(&t).mul(&unimodular(rng, &l, r, 2, 1))
            }
        };
        if t.max_deg() > max_deg as isize {
            continue;
        }
        if let Ok(m) = Motive::validate(q, e, theta, t) {
            return m;
        }
    }
}

pub fn poly_fq(fq: &Field, c: &[i64]) -> TPoly {
    TPoly::from_coeffs(fq, c.iter().map(|&x| fq.from_int(x)).collect())
}

pub type Key = Vec<Vec<u64>>;

pub fn key(f: &TMatrix) -> Key {
    f.entries().iter().map(|p| p.encodings()).collect()
}

/// Every polynomial over l with degree ≤ b.
pub fn all_polys(l: &Field, b: usize) -> Vec<TPoly> {
    let p = l.size();
    let count = p.pow(b as u32 + 1);
    (0..count)
        .map(|mut k| {
            let enc: Vec<u64> = (0..=b)
                .map(|_| {
                    let c = k % p;
                    k /= p;
                    c
                })
                .collect();
            TPoly::from_encodings(l, &enc)
        })
        .collect()
}

/// All F with deg_t F ≤ b and F·T = T'·σ(F), by enumeration. Only for
/// motives over a prime field, where σ fixes every coefficient.
pub fn brute_force_hom(m: &Motive, mp: &Motive, b: usize) -> HashSet<Key> {
    let l = m.field().clone();
    assert_eq!(l.degree(), 1, "brute force needs a prime field");
    let (rows, cols) = (mp.rank(), m.rank());
    let polys = all_polys(&l, b);
    let n = rows * cols;
    let mut out = HashSet::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut f = TMatrix::zero(&l, rows, cols);
        for (k, &i) in idx.iter().enumerate() {
            f.set(k / cols, k % cols, polys[i].clone());
        }
        if f.mul(m.matrix()) == mp.matrix().mul(&f) {
            out.insert(key(&f));
        }
        let mut k = 0;
        while k < n && idx[k] + 1 == polys.len() {
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        idx[k] += 1;
    }
    out
}

/// Σ a_i g_i over all a_i ∈ F_p[t] with deg a_i ≤ b − deg g_i, filtered to
/// degree ≤ b.
pub fn solver_span(gens: &[TMatrix], b: usize, l: &Field, shape: (usize, usize)) -> HashSet<Key> {
    let mut acc = vec![TMatrix::zero(l, shape.0, shape.1)];
    for g in gens {
        let dg = g.max_deg().max(0) as usize;
        if dg > b {
            continue;
        }
        let multiples: Vec<TMatrix> = all_polys(l, b - dg).iter().map(|a| g.scale(a)).collect();
        acc = acc.iter().flat_map(|x| multiples.iter().map(move |y| x.add(y))).collect();
    }
    acc.iter().filter(|f| f.max_deg() <= b as isize).map(key).collect()
}
