//! Places of F_q(t), Newton polygons, and local factorization data of
//! irreducible polynomials over F_q(t) via residual polynomials.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ffactor;
use crate::field::{build_field, embedding, Embedding, Fe, Field, RelativeBasis};
use crate::linalg::Mat;
use crate::poly::TPoly;
use crate::ratfn::RatFn;
use crate::xpoly::XPoly;

const MAX_DEPTH: usize = 8;

/// A place of Q = F_q(t): the place at infinity or a monic irreducible.
#[derive(Clone, PartialEq, Eq)]
pub enum Place {
    Inf,
    Finite(TPoly),
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Inf => write!(f, "inf"),
            Place::Finite(p) => write!(f, "({})", p.display("t")),
        }
    }
}

impl Place {
    /// Degree of the residue field over F_q.
    pub fn degree(&self) -> usize {
        match self {
            Place::Inf => 1,
            Place::Finite(p) => p.deg() as usize,
        }
    }
    pub fn val_poly(&self, a: &TPoly) -> Option<i64> {
        if a.is_zero() {
            return None;
        }
        Some(match self {
            Place::Inf => -(a.deg() as i64),
            Place::Finite(p) => a.multiplicity(p) as i64,
        })
    }
    pub fn val(&self, a: &RatFn) -> Option<i64> {
        match self {
            Place::Inf => a.val_inf(),
            Place::Finite(p) => a.val_at(p),
        }
    }
    /// π^k for the standard uniformizer (1/t at infinity).
    fn uniformizer_pow(&self, f: &Field, k: i64) -> RatFn {
        let base = match self {
            Place::Inf => RatFn::new(TPoly::one(f), TPoly::t(f)),
            Place::Finite(p) => RatFn::from_poly(p.clone()),
        };
        base.pow_i(k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Rational64,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub segments: Vec<Segment>,
}

/// One place of F = Q[x]/(f) above w: ramification e, residue degree f over
/// the residue field of w, and Newton slope λ (roots have valuation −λ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPlaceFactor {
    pub e: usize,
    pub f: usize,
    pub lambda: Rational64,
}

impl LocalPlaceFactor {
    /// Normalized valuation of a root at this place (uniformizer of w has valuation e).
    pub fn v_root(&self) -> Rational64 {
        -self.lambda * Rational64::from(self.e as i64)
    }
}

/// Lower convex hull of (i, v(a_i)).
fn hull(vals: &[Option<i64>]) -> NewtonPolygon {
    let pts: Vec<(i64, i64)> = vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i as i64, v)))
        .collect();
    let mut segs = Vec::new();
    let mut cur = 0;
    while cur + 1 < pts.len() {
        let (x0, y0) = pts[cur];
        let mut best = cur + 1;
        let mut best_slope = Rational64::new(pts[best].1 - y0, pts[best].0 - x0);
        for (k, &(x, y)) in pts.iter().enumerate().skip(cur + 2) {
            let s = Rational64::new(y - y0, x - x0);
            // on ties prefer the farther point
            if s <= best_slope {
                best = k;
                best_slope = s;
            }
        }
        segs.push(Segment {
            slope: best_slope,
            length: (pts[best].0 - x0) as usize,
        });
        cur = best;
    }
    NewtonPolygon { segments: segs }
}

pub fn newton_polygon(f: &XPoly, place: &Place) -> NewtonPolygon {
    let vals: Vec<Option<i64>> = f.coeffs().iter().map(|a| place.val_poly(a)).collect();
    hull(&vals)
}

fn newton_ratfn(c: &[RatFn], place: &Place) -> NewtonPolygon {
    hull(&c.iter().map(|a| place.val(a)).collect::<Vec<_>>())
}

/// Residue field of a place with reduction and lifting maps.
struct Residue {
    place: Place,
    fq: Field,
    fw: Field,
    emb: std::sync::Arc<Embedding>,
    zeta: Fe,
    // columns: coordinates of zeta^i over F_q
    lift_mat: Mat,
    rb: Option<RelativeBasis>,
}

impl Residue {
    fn new(fq: &Field, place: &Place) -> Result<Self> {
        let k = place.degree() as u32;
        let fw = build_field(fq.char(), fq.degree() * k)?;
        let emb = embedding(fq, &fw)?;
        let (zeta, rb, lift_mat) = match place {
            Place::Inf => (Fe::ZERO, None, Mat::zeros(0, 0)),
            Place::Finite(p) => {
                let pe = p.embed(&emb);
                let zeta = ffactor::roots(&pe)[0];
                let rb = RelativeBasis::new(fq, &fw)?;
                let mut cols = Vec::new();
                let mut z = Fe::ONE;
                for _ in 0..k {
                    cols.push(rb.coords(z));
                    z = fw.mul(z, zeta);
                }
                (zeta, Some(rb), Mat::from_cols(k as usize, &cols))
            }
        };
        Ok(Residue {
            place: place.clone(),
            fq: fq.clone(),
            fw,
            emb,
            zeta,
            lift_mat,
            rb,
        })
    }
    /// Residue of a / π^k where v(a) = k.
    fn reduce(&self, a: &RatFn, k: i64) -> Fe {
        match &self.place {
            Place::Inf => self.emb.apply(self.fq.div(a.num.lc(), a.den.lc())),
            Place::Finite(p) => {
                let strip = |g: &TPoly| {
                    let mut g = g.clone();
                    while let Some(q) = g.div_exact(p) {
                        g = q;
                    }
                    g.eval_embedded(&self.emb, self.zeta)
                };
                let (n, d) = (strip(&a.num), strip(&a.den));
                debug_assert_eq!(self.place.val(a), Some(k));
                self.fw.div(n, d)
            }
        }
    }
    /// A polynomial in t of degree < deg w reducing to y.
    fn lift(&self, y: Fe) -> TPoly {
        match &self.place {
            Place::Inf => TPoly::constant(&self.fq, self.fw_to_fq(y)),
            Place::Finite(_) => {
                let rb = self.rb.as_ref().unwrap();
                let c = self.lift_mat.solve(&self.fq, &rb.coords(y)).expect("powers of zeta span");
                TPoly::from_coeffs(&self.fq, c)
            }
        }
    }
    fn fw_to_fq(&self, y: Fe) -> Fe {
        *crate::field::preimage_table(&self.emb)
            .get(&self.fw.encode(y))
            .expect("residue at infinity lies in F_q")
    }
}

/// f(x + c) for coefficients in F_q(t).
fn shift(c: &[RatFn], s: &RatFn) -> Vec<RatFn> {
    let f = s.field().clone();
    let mut r: Vec<RatFn> = Vec::new();
    for a in c.iter().rev() {
        // r = r * (x + s) + a
        let mut nr = vec![RatFn::zero(&f); r.len() + 1];
        for (i, b) in r.iter().enumerate() {
            nr[i + 1] = nr[i + 1].add(b);
            nr[i] = nr[i].add(&b.mul(s));
        }
        nr[0] = nr[0].add(a);
        r = nr;
    }
    while r.last().is_some_and(|x| x.is_zero()) {
        r.pop();
    }
    r
}

/// Places of Q[x]/(f) above w for an irreducible monic f.
pub fn local_places(f: &XPoly, place: &Place) -> Result<Vec<LocalPlaceFactor>> {
    let fld = f.field().clone();
    let p = fld.char() as usize;
    if f.deg() >= 1 && f.derivative().is_zero() {
        // x^p − y with y ∉ Q(y)^p stays irreducible over every completion,
        // since completions of Q(y) are separable over it: fully ramified
        let g = f.deflate(p).unwrap();
        return Ok(local_places(&g, place)?
            .into_iter()
            .map(|l| LocalPlaceFactor {
                e: l.e * p,
                f: l.f,
                lambda: l.lambda / Rational64::from(p as i64),
            })
            .collect());
    }
    let res = Residue::new(&fld, place)?;
    let c: Vec<RatFn> = f.coeffs().iter().map(|a| RatFn::from_poly(a.clone())).collect();
    let np = newton_ratfn(&c, place);
    let mut out = Vec::new();
    let mut start = c.iter().position(|a| !a.is_zero()).unwrap_or(0);
    if start > 0 {
        // x divides f: for irreducible f this is f = x
        out.push(LocalPlaceFactor {
            e: 1,
            f: 1,
            lambda: Rational64::zero(),
        });
    }
    for seg in &np.segments {
        for (e, fv) in segment_places(&c, start, seg, &res, 0)? {
            out.push(LocalPlaceFactor {
                e,
                f: fv,
                lambda: seg.slope,
            });
        }
        start += seg.length;
    }
    Ok(out)
}

fn segment_places(c: &[RatFn], start: usize, seg: &Segment, res: &Residue, depth: usize) -> Result<Vec<(usize, usize)>> {
    let lam = seg.slope;
    let (a, b) = (*lam.numer(), *lam.denom() as usize);
    let place = &res.place;
    let v0 = place.val(&c[start]).expect("segment endpoint is nonzero");
    let m = seg.length / b;
    let mut rc = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let i = start + j * b;
        let line = v0 + a * j as i64;
        rc.push(match place.val(&c[i]) {
            Some(v) if v == line => res.reduce(&c[i], v),
            _ => Fe::ZERO,
        });
    }
    let r = TPoly::from_coeffs(&res.fw, rc);
    let mut out = Vec::new();
    for (phi, h) in ffactor::factor(&r.monic()) {
        if h == 1 {
            out.push((b, phi.deg() as usize));
        } else if b == 1 && phi.deg() == 1 {
            if depth + 1 >= MAX_DEPTH {
                return Err(Error::LocalFactorIndeterminate(format!("depth cap reached at {place:?}")));
            }
            let rho = res.fw.neg(phi.coeff(0));
            let s = RatFn::from_poly(res.lift(rho)).mul(&place.uniformizer_pow(&res.fq, -a));
            let sc = shift(c, &s);
            let np = newton_ratfn(&sc, place);
            let mut st = sc.iter().position(|x| !x.is_zero()).unwrap_or(0);
            let mut covered = 0;
            if st > 0 {
                return Err(Error::LocalFactorIndeterminate("shifted polynomial acquired a zero root".into()));
            }
            for s2 in &np.segments {
                if s2.slope < lam {
                    out.extend(segment_places(&sc, st, s2, res, depth + 1)?);
                    covered += s2.length;
                }
                st += s2.length;
            }
            if covered != h {
                return Err(Error::LocalFactorIndeterminate(format!(
                    "refinement at {place:?} covered {covered} of {h} roots"
                )));
            }
        } else {
            return Err(Error::LocalFactorIndeterminate(format!(
                "non-separable residual polynomial at {place:?}"
            )));
        }
    }
    Ok(out)
}

/// Root valuations (as a multiset) of f at a place, read from the polygon.
pub fn root_valuations(f: &XPoly, place: &Place) -> Vec<Rational64> {
    let np = newton_polygon(f, place);
    let mut out = Vec::new();
    for s in np.segments {
        for _ in 0..s.length {
            out.push(-s.slope);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(f: &Field, c: &[i64]) -> TPoly {
        TPoly::from_coeffs(f, c.iter().map(|&x| f.from_int(x)).collect())
    }
    fn mu(q: u64, a: i64, b: i64) -> XPoly {
        let f = build_field(q, 1).unwrap();
        XPoly::from_coeffs(&f, vec![tp(&f, &[0, 0, -a]), tp(&f, &[-b * b]), tp(&f, &[1])])
    }

    #[test]
    fn polygon_at_infinity_and_zero() {
        let g = mu(3, 1, 1);
        let r = |a, b| Rational64::new(a, b);
        assert_eq!(
            newton_polygon(&g, &Place::Inf).segments,
            vec![Segment { slope: r(1, 1), length: 2 }]
        );
        let t = Place::Finite(TPoly::t(g.field()));
        assert_eq!(
            newton_polygon(&g, &t).segments,
            vec![Segment { slope: r(-2, 1), length: 1 }, Segment { slope: r(0, 1), length: 1 }]
        );
    }

    #[test]
    fn three_cases_at_infinity() {
        let one = Rational64::from(1);
        let split = local_places(&mu(3, 1, 1), &Place::Inf).unwrap();
        assert_eq!(split, vec![LocalPlaceFactor { e: 1, f: 1, lambda: one }; 2]);
        let inert = local_places(&mu(5, 2, 1), &Place::Inf).unwrap();
        assert_eq!(inert, vec![LocalPlaceFactor { e: 1, f: 2, lambda: one }]);
        let ram = local_places(&mu(2, 1, 1), &Place::Inf).unwrap();
        assert_eq!(ram.len(), 1);
        assert_eq!((ram[0].e, ram[0].f), (2, 1));
        assert_eq!(ram[0].v_root(), Rational64::from(-2));
    }
}
