//! The endomorphism algebra E = End(M) ⊗ Q: dimensions, components,
//! local invariants, simplicity and the isogeny criterion.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::factor_a::factor_over_a;
use crate::ffactor;
use crate::morphisms::{fq_combinations, solve_hom, t_combinations, Morphism};
use crate::motive::Motive;
use crate::newton::{local_places, Place};
use crate::tmatrix::TMatrix;
use crate::xpoly::XPoly;

/// Σ m(μ)·n(μ)·deg μ over Q-irreducibles μ.
pub fn r_value_global(f: &XPoly, g: &XPoly) -> Result<usize> {
    let ff = factor_over_a(f)?;
    let gf = factor_over_a(g)?;
    Ok(ff
        .iter()
        .filter_map(|(mu, m)| gf.iter().find(|(nu, _)| nu == mu).map(|(_, n)| m * n * mu.deg() as usize))
        .sum())
}

/// r-value over the completion at w, from the local factorization of each
/// shared Q-irreducible factor.
pub fn r_value(f: &XPoly, g: &XPoly, w: &Place) -> Result<usize> {
    let ff = factor_over_a(f)?;
    let gf = factor_over_a(g)?;
    let mut total = 0;
    for (mu, m) in &ff {
        if let Some((_, n)) = gf.iter().find(|(nu, _)| nu == mu) {
            // distinct Q-irreducibles have no common root, so only the
            // local factors of the same μ pair up
            let local: usize = local_places(mu, w)?.iter().map(|p| p.e * p.f).sum();
            total += m * n * local;
        }
    }
    Ok(total)
}

/// Smallest-degree finite place ≠ ε (canonical order) where the local
/// factorization of f and g terminates.
pub fn comparison_place(m: &Motive, f: &XPoly, g: &XPoly) -> Result<(Place, usize)> {
    let eps = m.epsilon();
    for deg in 1..=8 {
        for v in ffactor::irreducibles_of_degree(m.base(), deg) {
            if v == eps {
                continue;
            }
            let w = Place::Finite(v);
            if let Ok(r) = r_value(f, g, &w) {
                return Ok((w, r));
            }
        }
    }
    Err(Error::LocalFactorIndeterminate("no good comparison place found".into()))
}

/// dim_Q Hom(M, M') ⊗ Q for semisimple M, M'.
pub fn hom_dimension(m: &Motive, mp: &Motive) -> Result<usize> {
    m.check_compatible(mp)?;
    if !m.is_semisimple()? || !mp.is_semisimple()? {
        return Err(Error::NotSemisimple);
    }
    if m.weight() != mp.weight() {
        return Ok(0);
    }
    Ok(comparison_place(m, m.chi()?, mp.chi()?)?.1)
}

/// Decision of the isogeny criterion with a witness when positive.
pub fn isogeny_equivalent(m: &Motive, mp: &Motive) -> Result<(bool, Option<Morphism>)> {
    m.check_compatible(mp)?;
    if !m.is_semisimple()? || !mp.is_semisimple()? {
        return Err(Error::NotSemisimple);
    }
    if m.chi()? != mp.chi()? {
        return Ok((false, None));
    }
    let hb = solve_hom(m, mp)?;
    let mats: Vec<TMatrix> = hb.gens.iter().map(|g| g.f.clone()).collect();
    if mats.is_empty() {
        return Err(Error::Internal("equal χ but Hom = 0".into()));
    }
    let found = fq_combinations(mats.clone(), m.base(), m.field())
        .find(|c| !c.det().is_zero())
        .or_else(|| t_combinations(&mats, m.base(), m.field()).find(|c| !c.det().is_zero()));
    match found {
        Some(f) => Ok((true, Some(Morphism::new(m, mp, f)?))),
        None => Err(Error::Internal("no isogeny found in Hom".into())),
    }
}

/// A place of a component field F_i above ε or ∞, with its Hasse invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInvariant {
    pub e: usize,
    pub f: usize,
    /// v(π) for v normalized on F_v.
    pub v_pi: Rational64,
    pub inv: Rational64,
}

#[derive(Clone, Debug)]
pub struct Component {
    pub mu: XPoly,
    pub multiplicity: usize,
    pub degree: usize,
    pub dim_over_center: usize,
    pub at_infinity: Vec<LocalInvariant>,
    pub at_char: Vec<LocalInvariant>,
    pub index: i64,
}

impl Component {
    pub fn invariant_sum(&self) -> Rational64 {
        let s: Rational64 = self.at_infinity.iter().chain(&self.at_char).map(|l| l.inv).sum();
        mod_one(s)
    }
    pub fn is_division(&self) -> bool {
        self.index == self.multiplicity as i64
    }
}

#[derive(Clone, Debug)]
pub struct EndAlgebraReport {
    pub components: Vec<Component>,
    pub dim: usize,
}

pub fn mod_one(x: Rational64) -> Rational64 {
    x - Rational64::from(x.floor().to_integer())
}

fn invariants(mu: &XPoly, w: &Place, m: &Motive) -> Result<Vec<LocalInvariant>> {
    let e_l = Rational64::from(m.e() as i64);
    let deg_w = Rational64::from(w.degree() as i64);
    Ok(local_places(mu, w)?
        .into_iter()
        .map(|p| {
            let v_pi = p.v_root();
            let inv = mod_one(-(Rational64::from(p.f as i64) * deg_w / e_l) * v_pi);
            LocalInvariant {
                e: p.e,
                f: p.f,
                v_pi,
                inv,
            }
        })
        .collect())
}

pub fn hasse_invariants(m: &Motive) -> Result<EndAlgebraReport> {
    if !m.is_semisimple()? {
        return Err(Error::NotSemisimple);
    }
    let chi_f = m.chi_factors()?;
    let eps = Place::Finite(m.epsilon());
    let mut components = Vec::new();
    let mut dim = 0;
    for (mu, _) in m.mu_factors()? {
        let mult = chi_f.iter().find(|(c, _)| c == mu).map(|x| x.1).unwrap_or(0);
        let at_infinity = invariants(mu, &Place::Inf, m)?;
        let at_char = invariants(mu, &eps, m)?;
        let index = at_infinity
            .iter()
            .chain(&at_char)
            .fold(1i64, |acc, l| acc.lcm(l.inv.denom()));
        let degree = mu.deg() as usize;
        dim += mult * mult * degree;
        components.push(Component {
            mu: mu.clone(),
            multiplicity: mult,
            degree,
            dim_over_center: mult * mult,
            at_infinity,
            at_char,
            index,
        });
    }
    Ok(EndAlgebraReport { components, dim })
}

/// (r, d) coprime.
pub fn is_primitive(m: &Motive) -> bool {
    m.rank().gcd(&m.dim()) == 1
}

/// M is simple: primitive, or E is a division algebra.
pub fn is_simple(m: &Motive) -> Result<bool> {
    if is_primitive(m) {
        return Ok(true);
    }
    let rep = hasse_invariants(m)?;
    Ok(rep.components.len() == 1 && rep.components[0].is_division())
}

/// Cross-checks between the computed data: dimension bounds, invariant sums,
/// component dimensions, and primitivity against the division test.
pub fn is_semisimple_algebra_consistent(m: &Motive) -> Result<bool> {
    let rep = hasse_invariants(m)?;
    let r = m.rank();
    let mut ok = r <= rep.dim && rep.dim <= r * r;
    ok &= rep.components.iter().map(|c| c.multiplicity * c.degree).sum::<usize>() == r;
    ok &= rep.components.iter().all(|c| c.invariant_sum().is_zero());
    if rep.components.len() == 1 {
        let c = &rep.components[0];
        ok &= c.degree * rep.dim == r * r;
        if is_primitive(m) {
            ok &= c.is_division();
        }
    }
    Ok(ok)
}
