//! Factorization of univariate polynomials over a finite field
//! (squarefree, distinct-degree and Cantor–Zassenhaus equal-degree splitting).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::Fe;
use crate::poly::TPoly;

const SEED: u64 = 0x7a75_6d61_6e6e;

/// Squarefree decomposition of a monic polynomial: (factor, multiplicity),
/// factors pairwise coprime and squarefree.
pub fn squarefree(f: &TPoly) -> Vec<(TPoly, usize)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.deg() <= 0 {
        return out;
    }
    let fld = f.field().clone();
    let p = fld.char() as usize;
    let d = f.derivative();
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c).unwrap();
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).unwrap();
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y.clone();
        c = c.div_exact(&y).unwrap();
    }
    if c.deg() > 0 {
        // c = h(x^p) with coefficient p-th roots
        let h = c.deflate(p).expect("remaining part is a p-th power");
        let h = h.map_coeffs(&fld, |a| fld.pth_root(a));
        for (g, m) in squarefree(&h) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial.
pub fn distinct_degree(f: &TPoly) -> Vec<(TPoly, usize)> {
    let fld = f.field().clone();
    let qq = fld.size() as u128;
    let x = TPoly::t(&fld);
    let mut rest = f.monic();
    let mut out = Vec::new();
    let mut h = x.rem(&rest);
    let mut d = 1usize;
    while rest.deg() >= 2 * d as isize {
        h = h.powmod(qq, &rest);
        let g = rest.gcd(&h.sub_ref(&x));
        if g.deg() > 0 {
            rest = rest.div_exact(&g).unwrap();
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let dd = rest.deg() as usize;
        out.push((rest, dd));
    }
    out
}

fn random_poly(rng: &mut ChaCha8Rng, f: &TPoly) -> TPoly {
    let fld = f.field();
    let n = f.deg() as usize;
    let c: Vec<Fe> = (0..n).map(|_| fld.decode_unchecked(rng.gen_range(0..fld.size()))).collect();
    TPoly::from_coeffs(fld, c)
}

/// Split a monic squarefree product of irreducibles of degree d.
pub fn equal_degree(f: &TPoly, d: usize) -> Vec<TPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ (f.deg() as u64) << 8 ^ d as u64);
    let mut out = Vec::new();
    edf_rec(f, d, &mut rng, &mut out);
    out
}

fn edf_rec(f: &TPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<TPoly>) {
    if f.deg() as usize == d {
        out.push(f.monic());
        return;
    }
    let fld = f.field().clone();
    let qq = fld.size() as u128;
    loop {
        let a = random_poly(rng, f);
        if a.deg() <= 0 {
            continue;
        }
        let b = if fld.char() == 2 {
            // trace from F_{Q^d} to F_2
            let k = fld.degree() as usize * d;
            let mut acc = a.clone();
            let mut cur = a.clone();
            for _ in 1..k {
                cur = cur.mulmod(&cur, f);
                acc = acc.add_ref(&cur);
            }
            acc
        } else {
            // a^((Q^d-1)/2) = (a·a^Q···a^(Q^(d-1)))^((Q-1)/2)
            let mut norm = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = cur.powmod(qq, f);
                norm = norm.mulmod(&cur, f);
            }
            norm.powmod((qq - 1) / 2, f).sub_ref(&TPoly::one(&fld))
        };
        let g = f.gcd(&b);
        if g.deg() > 0 && g.deg() < f.deg() {
            let h = f.div_exact(&g).unwrap();
            edf_rec(&g, d, rng, out);
            edf_rec(&h, d, rng, out);
            return;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted canonically.
pub fn factor(f: &TPoly) -> Vec<(TPoly, usize)> {
    let mut out = Vec::new();
    for (g, m) in squarefree(f) {
        for (h, d) in distinct_degree(&g) {
            for k in equal_degree(&h, d) {
                out.push((k, m));
            }
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    out
}

pub fn is_irreducible(f: &TPoly) -> bool {
    if f.deg() <= 0 {
        return false;
    }
    let g = f.monic();
    if !g.gcd(&g.derivative()).is_one() {
        return false;
    }
    let dd = distinct_degree(&g);
    dd.len() == 1 && dd[0].1 as isize == g.deg()
}

pub fn is_squarefree(f: &TPoly) -> bool {
    f.deg() <= 0 || f.gcd(&f.derivative()).is_one()
}

/// Distinct roots in the coefficient field, sorted by encoding.
pub fn roots(f: &TPoly) -> Vec<Fe> {
    let fld = f.field().clone();
    let mut out: Vec<Fe> = factor(f)
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| fld.neg(g.coeff(0)))
        .collect();
    out.sort_by_key(|&r| fld.encode(r));
    out
}

/// Monic irreducible polynomials of degree d over the field, in canonical order.
pub fn irreducibles_of_degree(fld: &crate::field::Field, d: usize) -> impl Iterator<Item = TPoly> + '_ {
    let s = fld.size();
    let count = (s as u128).pow(d as u32);
    (0..count).filter_map(move |mut v| {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push(fld.decode_unchecked((v % s as u128) as u64));
            v /= s as u128;
        }
        c.push(Fe::ONE);
        let g = TPoly::from_coeffs(fld, c);
        if is_irreducible(&g) {
            Some(g)
        } else {
            None
        }
    })
}
