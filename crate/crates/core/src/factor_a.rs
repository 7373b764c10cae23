//! Factorization of monic polynomials in A[x], A = F_q[t], into irreducibles
//! over Q = F_q(t).
//!
//! Separable squarefree parts are factored by specializing t = c, lifting the
//! finite-field factorization (t − c)-adically and recombining. Inseparable
//! parts g(x^p) are handled through p-th roots of coefficients.

use crate::error::{Error, Result};
use crate::ffactor;
use crate::field::{build_field, embedding, preimage_table, Fe, Field};
use crate::poly::TPoly;
use crate::xpoly::XPoly;

/// Irreducible factors with multiplicities, sorted canonically.
pub fn factor_over_a(f: &XPoly) -> Result<Vec<(XPoly, usize)>> {
    if !f.is_monic() {
        return Err(Error::Invalid("factor_over_a expects a monic polynomial".into()));
    }
    let mut out: Vec<(XPoly, usize)> = Vec::new();
    factor_rec(f, 1, &mut out);
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(out)
}

/// Same as [`factor_over_a`] for a polynomial with coefficients in an
/// extension L of F_q; fails with NotARational unless they lie in F_q[t].
pub fn factor_descended(f: &XPoly, fq: &Field) -> Result<Vec<(XPoly, usize)>> {
    let g = f.descend(fq).ok_or(Error::NotARational)?;
    factor_over_a(&g)
}

pub fn is_irreducible_over_a(f: &XPoly) -> bool {
    match factor_over_a(f) {
        Ok(v) => v.len() == 1 && v[0].1 == 1,
        Err(_) => false,
    }
}

fn push(out: &mut Vec<(XPoly, usize)>, g: XPoly, m: usize) {
    if let Some(e) = out.iter_mut().find(|(h, _)| *h == g) {
        e.1 += m;
    } else {
        out.push((g, m));
    }
}

fn monic_x(g: &XPoly) -> XPoly {
    let p = g.primitive();
    let lc = p.lc();
    debug_assert!(lc.deg() == 0);
    let inv = p.field().inv(lc.coeff(0));
    p.scale(&TPoly::constant(p.field(), inv))
}

fn factor_rec(f: &XPoly, mult: usize, out: &mut Vec<(XPoly, usize)>) {
    if f.deg() <= 0 {
        return;
    }
    if f.deg() == 1 {
        push(out, f.clone(), mult);
        return;
    }
    let fld = f.field().clone();
    let p = fld.char() as usize;
    let df = f.derivative();
    if df.is_zero() {
        // f = g(x^p)
        let g = f.deflate(p).expect("zero derivative means a p-th power pattern");
        let mut parts = Vec::new();
        factor_rec(&g, 1, &mut parts);
        for (gi, mi) in parts {
            match coefficient_pth_root(&gi) {
                Some(h) => factor_rec(&h, mult * mi * p, out),
                None => push(out, gi.inflate(p), mult * mi),
            }
        }
        return;
    }
    let g = monic_x(&f.gcd(&df));
    if g.deg() > 0 {
        let h = f.div_exact(&g).expect("gcd divides");
        factor_rec(&g, mult, out);
        factor_rec(&h, mult, out);
        return;
    }
    for h in factor_separable(f) {
        push(out, h, mult);
    }
}

/// h with h^p = g when every coefficient of g is a p-th power in F_q[t].
fn coefficient_pth_root(g: &XPoly) -> Option<XPoly> {
    let fld = g.field().clone();
    let p = fld.char() as usize;
    let mut cs = Vec::new();
    for a in g.coeffs() {
        let d = a.deflate(p)?;
        cs.push(TPoly::from_coeffs(&fld, d.coeffs().iter().map(|&c| fld.pth_root(c)).collect()));
    }
    Some(XPoly::from_coeffs(&fld, cs))
}

/// Factor a monic, separable, squarefree polynomial.
fn factor_separable(f: &XPoly) -> Vec<XPoly> {
    let fq = f.field().clone();
    let n = f.deg() as usize;
    let (big, c) = pick_point(f);
    let emb = embedding(&fq, &big).expect("subfield");
    // F(s, x) = f(s + c, x)
    let shift = TPoly::from_coeffs(&big, vec![c, Fe::ONE]);
    let fs = XPoly::from_coeffs(&big, f.coeffs().iter().map(|a| a.embed(&emb).compose(&shift)).collect());
    let prec = f.t_degree().max(0) as usize + 1;
    let f0 = fs.eval_t(&embedding(&big, &big).unwrap(), Fe::ZERO);
    let locals: Vec<TPoly> = ffactor::factor(&f0).into_iter().map(|(g, _)| g).collect();
    if locals.len() == 1 {
        return vec![f.clone()];
    }
    let lifted = hensel_lift(&fs, &locals, prec);
    // recombination
    let back = TPoly::from_coeffs(&big, vec![big.neg(c), Fe::ONE]);
    let inv = preimage_table(&emb);
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut cur = f.clone();
    let mut found = Vec::new();
    let mut k = 1;
    while 2 * k <= remaining.len() {
        let mut hit = None;
        for sub in crate::tmatrix::subsets(remaining.len(), k) {
            let idx: Vec<usize> = sub.iter().map(|&i| remaining[i]).collect();
            let mut prod = XPoly::one(&big);
            for &i in &idx {
                prod = truncate(&prod.mul(&lifted[i]), prec);
            }
            let cand = descend_back(&prod, &back, inv, &fq);
            if let Some(cand) = cand {
                if let Some(q) = cur.div_exact(&cand) {
                    hit = Some((sub, cand, q));
                    break;
                }
            }
        }
        match hit {
            Some((sub, cand, q)) => {
                found.push(cand);
                cur = q;
                let drop: Vec<usize> = sub.iter().map(|&i| remaining[i]).collect();
                remaining.retain(|i| !drop.contains(i));
            }
            None => k += 1,
        }
    }
    found.push(cur);
    debug_assert_eq!(found.iter().map(|g| g.deg() as usize).sum::<usize>(), n);
    found
}

fn descend_back(prod: &XPoly, back: &TPoly, inv: &std::collections::HashMap<u64, Fe>, fq: &Field) -> Option<XPoly> {
    let big = prod.field();
    let mut cs = Vec::new();
    for a in prod.coeffs() {
        let at = a.compose(back);
        let mut v = Vec::new();
        for &x in at.coeffs() {
            v.push(*inv.get(&big.encode(x))?);
        }
        cs.push(TPoly::from_coeffs(fq, v));
    }
    Some(XPoly::from_coeffs(fq, cs))
}

/// Smallest extension F_{q^k} and point c with f(c, x) squarefree.
fn pick_point(f: &XPoly) -> (Field, Fe) {
    let fq = f.field().clone();
    let (p, a) = (fq.char(), fq.degree());
    for k in 1..=64u32 {
        let big = build_field(p, a * k).expect("extension field");
        let emb = embedding(&fq, &big).unwrap();
        let mut elts: Vec<Fe> = big.elements().collect();
        elts.sort_by_key(|&x| big.encode(x));
        for c in elts {
            // points of F_{q^k} not already tried in a smaller field
            if k > 1 && (1..k).any(|j| k % j == 0 && big.in_subfield(c, a * j)) {
                continue;
            }
            let g = f.eval_t(&emb, c);
            if ffactor::is_squarefree(&g) {
                return (big, c);
            }
        }
    }
    panic!("no good specialization point found")
}

fn truncate(g: &XPoly, prec: usize) -> XPoly {
    XPoly::from_coeffs(g.field(), g.coeffs().iter().map(|a| a.truncate(prec)).collect())
}

/// Coefficient of s^j as a polynomial in x.
fn s_coeff(g: &XPoly, j: usize) -> TPoly {
    TPoly::from_coeffs(g.field(), g.coeffs().iter().map(|a| a.coeff(j)).collect())
}

/// Lift a factorization f(0, x) = ∏ g_i (monic, pairwise coprime) to
/// precision s^prec, peeling off one factor at a time.
fn hensel_lift(f: &XPoly, locals: &[TPoly], prec: usize) -> Vec<XPoly> {
    let big = f.field().clone();
    let mut out = Vec::new();
    let mut rest = truncate(f, prec);
    for (i, g0) in locals.iter().enumerate() {
        if i + 1 == locals.len() {
            out.push(rest.clone());
            break;
        }
        let h0 = locals[i + 1..].iter().fold(TPoly::one(&big), |acc, g| acc.mul_ref(g));
        let (g, h) = lift_pair(&rest, g0, &h0, prec);
        out.push(g);
        rest = h;
    }
    out
}

fn to_x(g: &TPoly) -> XPoly {
    let f = g.field().clone();
    XPoly::from_coeffs(&f, g.coeffs().iter().map(|&c| TPoly::constant(&f, c)).collect())
}

/// Lift F ≡ G0·H0 (mod s) with G0 monic to F ≡ G·H (mod s^prec).
fn lift_pair(f: &XPoly, g0: &TPoly, h0: &TPoly, prec: usize) -> (XPoly, XPoly) {
    let (d, a, b) = g0.xgcd(h0);
    assert!(d.is_one(), "local factors must be coprime");
    let mut g = to_x(g0);
    let mut h = to_x(h0);
    for j in 1..prec {
        let err = truncate(&f.sub(&g.mul(&h)), j + 1);
        let e = s_coeff(&err, j);
        if e.is_zero() {
            continue;
        }
        let (q, dg) = e.mul_ref(&b).divrem(g0);
        let dh = e.mul_ref(&a).add_ref(&q.mul_ref(h0));
        let sj = |p: &TPoly| {
            let fl = p.field().clone();
            XPoly::from_coeffs(&fl, p.coeffs().iter().map(|&c| TPoly::monomial(&fl, c, j)).collect())
        };
        g = g.add(&sj(&dg));
        h = h.add(&sj(&dh));
    }
    (g, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(f: &Field, c: &[i64]) -> TPoly {
        TPoly::from_coeffs(f, c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn square_minus_t_irreducible() {
        let f = build_field(3, 1).unwrap();
        let g = XPoly::from_coeffs(&f, vec![tp(&f, &[0, -1]), tp(&f, &[]), tp(&f, &[1])]);
        let fac = factor_over_a(&g).unwrap();
        assert_eq!(fac.len(), 1);
    }

    #[test]
    fn difference_of_squares() {
        let f = build_field(3, 1).unwrap();
        let g = XPoly::from_coeffs(&f, vec![tp(&f, &[0, 0, -1]), tp(&f, &[]), tp(&f, &[1])]);
        let fac = factor_over_a(&g).unwrap();
        let shown: Vec<String> = fac.iter().map(|(h, m)| format!("{}^{}", h, m)).collect();
        assert_eq!(shown, vec!["x+t^1", "x-t^1"]);
    }

    #[test]
    fn inseparable_power() {
        // (x - t)^3 over F_3 = x^3 - t^3
        let f = build_field(3, 1).unwrap();
        let g = XPoly::linear(&tp(&f, &[0, 1])).pow(3).mul(&XPoly::linear(&tp(&f, &[1])));
        let fac = factor_over_a(&g).unwrap();
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().any(|(h, m)| *m == 3 && h.deg() == 1));
        // x^3 - t is irreducible and inseparable
        let h = XPoly::from_coeffs(&f, vec![tp(&f, &[0, -1]), tp(&f, &[]), tp(&f, &[]), tp(&f, &[1])]);
        assert!(is_irreducible_over_a(&h));
    }
}
