//! Pure Anderson motives over L = F_{q^e}: a free L[t]-module of rank r with
//! τ given on column vectors by x ↦ T·σ(x), σ the q-Frobenius on L.

use std::fmt;

use num_rational::Rational64;
use once_cell::sync::OnceCell;

use crate::error::{Error, Result};
use crate::factor_a::factor_over_a;
use crate::field::{build_field, embedding, prime_power, Fe, Field};
use crate::newton::{root_valuations, Place};
use crate::poly::TPoly;
use crate::tmatrix::TMatrix;
use crate::xpoly::XPoly;

#[derive(Clone)]
pub struct Motive {
    q: u64,
    e: u32,
    fq: Field,
    l: Field,
    theta: Fe,
    t: TMatrix,
    d: usize,
    cache: Cache,
}

#[derive(Clone, Default)]
struct Cache {
    pi: OnceCell<TMatrix>,
    chi: OnceCell<XPoly>,
    mu: OnceCell<XPoly>,
    mu_factors: OnceCell<Vec<(XPoly, usize)>>,
    chi_factors: OnceCell<Vec<(XPoly, usize)>>,
}

impl fmt::Debug for Motive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Motive(q={}, e={}, theta={}, T={:?})",
            self.q,
            self.e,
            self.l.encode(self.theta),
            self.t
        )
    }
}

/// Summary of the intrinsic invariants.
#[derive(Clone, Debug)]
pub struct MotiveReport {
    pub r: usize,
    pub d: usize,
    pub weight: Rational64,
    pub epsilon: TPoly,
    pub pure: bool,
    pub semisimple: bool,
    pub chi: XPoly,
    pub mu: XPoly,
}

/// Z(u) = ∏_i N_i(u)^{(-1)^{i+1}} with N_i(u) = det(1 − u·∧^iΠ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaFunction {
    pub factors: Vec<XPoly>,
}

impl ZetaFunction {
    pub fn exponent(i: usize) -> i32 {
        if i % 2 == 1 {
            1
        } else {
            -1
        }
    }
}

/// Field pair (F_q, F_{q^e}).
pub fn fields(q: u64, e: u32) -> Result<(Field, Field)> {
    let (p, a) = prime_power(q).ok_or_else(|| Error::Invalid(format!("q = {q} is not a prime power")))?;
    if e == 0 {
        return Err(Error::Invalid("e must be positive".into()));
    }
    Ok((build_field(p, a)?, build_field(p, a * e)?))
}

impl Motive {
    /// Build a motive after checking injectivity, the characteristic and
    /// non-degeneracy, but not purity.
    pub fn unchecked(q: u64, e: u32, theta: Fe, t: TMatrix) -> Result<Self> {
        let (fq, l) = fields(q, e)?;
        if *t.field() != l {
            return Err(Error::FieldMismatch(format!("matrix entries must lie in F_{q}^{e}")));
        }
        if !t.is_square() {
            return Err(Error::Invalid("T must be square".into()));
        }
        let det = t.det();
        if det.is_zero() {
            return Err(Error::NotInjective);
        }
        let d = det.deg() as usize;
        if t.rows() > 0 && d == 0 {
            return Err(Error::Degenerate);
        }
        let lin = TPoly::linear(&l, theta);
        match det.div_exact(&lin.pow(d as u64)) {
            Some(u) if u.deg() == 0 => {}
            _ => return Err(Error::BadCharacteristic),
        }
        Ok(Motive {
            q,
            e,
            fq,
            l,
            theta,
            t,
            d,
            cache: Cache::default(),
        })
    }

    /// Full validation including purity (a single slope at ∞).
    pub fn validate(q: u64, e: u32, theta: Fe, t: TMatrix) -> Result<Self> {
        let m = Self::unchecked(q, e, theta, t)?;
        let n = m.distinct_slopes().len();
        if n > 1 {
            return Err(Error::NotPure(n));
        }
        Ok(m)
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn base(&self) -> &Field {
        &self.fq
    }
    pub fn field(&self) -> &Field {
        &self.l
    }
    pub fn theta(&self) -> Fe {
        self.theta
    }
    pub fn matrix(&self) -> &TMatrix {
        &self.t
    }
    pub fn rank(&self) -> usize {
        self.t.rows()
    }
    pub fn dim(&self) -> usize {
        self.d
    }
    pub fn weight(&self) -> Rational64 {
        Rational64::new(self.d as i64, self.rank().max(1) as i64)
    }
    /// log_p q: σ is x ↦ x^(p^a).
    pub fn sigma_exp(&self) -> u32 {
        self.fq.degree()
    }
    /// σ^k applied to the coefficients of a matrix.
    pub fn sigma(&self, m: &TMatrix, k: u32) -> TMatrix {
        m.frob(self.sigma_exp() * k)
    }

    /// Minimal polynomial ε of θ over F_q.
    pub fn epsilon(&self) -> TPoly {
        let l = &self.l;
        let mut conj = vec![self.theta];
        let mut x = l.frob(self.theta, self.sigma_exp());
        while x != self.theta {
            conj.push(x);
            x = l.frob(x, self.sigma_exp());
        }
        let prod = conj.iter().fold(TPoly::one(l), |acc, &c| acc.mul_ref(&TPoly::linear(l, c)));
        let emb = embedding(&self.fq, l).unwrap();
        let inv = crate::field::preimage_table(&emb);
        TPoly::from_coeffs(&self.fq, prod.coeffs().iter().map(|c| inv[&l.encode(*c)]).collect())
    }
    pub fn char_place(&self) -> Place {
        Place::Finite(self.epsilon())
    }

    /// Π = T·σ(T)···σ^{e−1}(T).
    pub fn frobenius_matrix(&self) -> &TMatrix {
        self.cache.pi.get_or_init(|| {
            let mut p = self.t.clone();
            for k in 1..self.e {
                p = p.mul(&self.sigma(&self.t, k));
            }
            p
        })
    }

    /// Characteristic polynomial of Π, in F_q[t][x].
    pub fn chi(&self) -> Result<&XPoly> {
        self.cache.chi.get_or_try_init(|| {
            self.frobenius_matrix()
                .charpoly()
                .descend(&self.fq)
                .ok_or_else(|| Error::Internal("characteristic polynomial not A-rational".into()))
        })
    }
    /// Minimal polynomial μ_π, in F_q[t][x].
    pub fn mu(&self) -> Result<&XPoly> {
        self.cache.mu.get_or_try_init(|| {
            self.frobenius_matrix()
                .minpoly()
                .descend(&self.fq)
                .ok_or_else(|| Error::Internal("minimal polynomial not A-rational".into()))
        })
    }
    pub fn chi_factors(&self) -> Result<&Vec<(XPoly, usize)>> {
        self.cache.chi_factors.get_or_try_init(|| factor_over_a(self.chi()?))
    }
    pub fn mu_factors(&self) -> Result<&Vec<(XPoly, usize)>> {
        self.cache.mu_factors.get_or_try_init(|| factor_over_a(self.mu()?))
    }

    /// μ_π squarefree over Q.
    pub fn is_semisimple(&self) -> Result<bool> {
        Ok(self.mu_factors()?.iter().all(|(_, m)| *m == 1))
    }

    pub fn zeta(&self) -> Result<ZetaFunction> {
        let pi = self.frobenius_matrix();
        let r = self.rank();
        let mut factors = Vec::new();
        for i in 0..=r {
            let w = pi.exterior_power(i);
            let c = w.charpoly_coeffs();
            let n = c.len() - 1;
            // det(1 − u·W) = Σ_k c_{n−k} u^k
            let coeffs: Vec<TPoly> = (0..=n).map(|k| c[n - k].clone()).collect();
            let g = XPoly::from_coeffs(&self.l, coeffs)
                .descend(&self.fq)
                .ok_or_else(|| Error::Internal("zeta factor not A-rational".into()))?;
            factors.push(g);
        }
        Ok(ZetaFunction { factors })
    }

    /// Root valuations of χ at ∞ divided by e, sorted.
    pub fn slopes_at_infinity(&self) -> Result<Vec<Rational64>> {
        let mut v: Vec<Rational64> = root_valuations(self.chi()?, &Place::Inf)
            .into_iter()
            .map(|x| x / Rational64::from(self.e as i64))
            .collect();
        v.sort();
        Ok(v)
    }
    fn distinct_slopes(&self) -> Vec<Rational64> {
        let mut v = self.slopes_at_infinity().unwrap_or_default();
        v.dedup();
        v
    }
    /// A single slope, necessarily −d/r.
    pub fn rh_check(&self) -> Result<bool> {
        let s = self.slopes_at_infinity()?;
        Ok(s.iter().all(|x| *x == -self.weight()))
    }

    /// The same T over F_{q^{em}}.
    pub fn base_extend(&self, m: u32) -> Result<Motive> {
        if m == 0 {
            return Err(Error::Invalid("extension degree must be positive".into()));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        let (_, big) = fields(self.q, self.e * m)?;
        let emb = embedding(&self.l, &big)?;
        Motive::unchecked(self.q, self.e * m, emb.apply(self.theta), self.t.embed(&emb))
    }

    /// Block-diagonal sum; validation may reject mixed weights.
    pub fn direct_sum(&self, o: &Motive) -> Result<Motive> {
        self.check_compatible(o)?;
        Motive::validate(self.q, self.e, self.theta, self.t.block_diag(&o.t))
    }
    /// Block-diagonal sum without the purity check.
    pub fn direct_sum_unchecked(&self, o: &Motive) -> Result<Motive> {
        self.check_compatible(o)?;
        Motive::unchecked(self.q, self.e, self.theta, self.t.block_diag(&o.t))
    }
    pub fn check_compatible(&self, o: &Motive) -> Result<()> {
        if self.q != o.q || self.e != o.e || self.theta != o.theta {
            return Err(Error::FieldMismatch("motives over different bases".into()));
        }
        Ok(())
    }

    /// Smallest power m of p with base_extend(m) semisimple.
    pub fn semisimplification_degree(&self) -> Result<u32> {
        let p = self.fq.char() as u32;
        let r = self.rank().max(1) as u32;
        let mut bound = 1u32;
        while bound < r {
            bound *= p;
        }
        let mut m = 1u32;
        loop {
            if self.base_extend(m)?.is_semisimple()? {
                return Ok(m);
            }
            if m >= bound {
                return Err(Error::Internal("semisimplification bound exceeded".into()));
            }
            m *= p;
        }
    }

    pub fn report(&self) -> Result<MotiveReport> {
        Ok(MotiveReport {
            r: self.rank(),
            d: self.d,
            weight: self.weight(),
            epsilon: self.epsilon(),
            pure: self.rh_check()?,
            semisimple: self.is_semisimple()?,
            chi: self.chi()?.clone(),
            mu: self.mu()?.clone(),
        })
    }

    /// T' = U·T·σ(U)^{-1} for U invertible over L[t]: an isomorphic motive.
    pub fn conjugate(&self, u: &TMatrix) -> Result<Motive> {
        let su = self.sigma(u, 1);
        let det = su.det();
        if det.deg() != 0 {
            return Err(Error::Invalid("conjugating matrix is not invertible over L[t]".into()));
        }
        let inv = su.adjugate().scale(&TPoly::constant(&self.l, self.l.inv(det.coeff(0))));
        Motive::unchecked(self.q, self.e, self.theta, u.mul(&self.t).mul(&inv))
    }
}
