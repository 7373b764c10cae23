//! Morphisms F: M → M' with F·T = T'·σ(F), Hom-spaces, isogenies, degrees,
//! norms, duals, kernels and images, and quotients by torsion modules.

use std::fmt;

use crate::error::{Error, Result};
use crate::ffactor;
use crate::field::{Fe, Field, RelativeBasis};
use crate::linalg::{Echelon, Mat};
use crate::motive::Motive;
use crate::poly::TPoly;
use crate::tmatrix::{Hermite, TMatrix};

#[derive(Clone)]
pub struct Morphism {
    pub src: Motive,
    pub dst: Motive,
    pub f: TMatrix,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({:?})", self.f)
    }
}

/// F·T − T'·σ(F).
pub fn residual(src: &Motive, dst: &Motive, f: &TMatrix) -> TMatrix {
    f.mul(src.matrix()).sub(&dst.matrix().mul(&src.sigma(f, 1)))
}

impl Morphism {
    pub fn new(src: &Motive, dst: &Motive, f: TMatrix) -> Result<Self> {
        src.check_compatible(dst)?;
        if f.rows() != dst.rank() || f.cols() != src.rank() {
            return Err(Error::Invalid("morphism matrix has the wrong shape".into()));
        }
        if !residual(src, dst, &f).is_zero() {
            return Err(Error::Invalid("matrix does not intertwine the τ-structures".into()));
        }
        Ok(Morphism {
            src: src.clone(),
            dst: dst.clone(),
            f,
        })
    }
    pub fn identity(m: &Motive) -> Self {
        Morphism {
            src: m.clone(),
            dst: m.clone(),
            f: TMatrix::identity(m.field(), m.rank()),
        }
    }
    /// a·id for a ∈ F_q[t].
    pub fn scalar(m: &Motive, a: &TPoly) -> Self {
        let a = lift_poly(a, m.field());
        Morphism {
            src: m.clone(),
            dst: m.clone(),
            f: TMatrix::scalar(m.field(), m.rank(), &a),
        }
    }
    /// Frobenius π as an endomorphism.
    pub fn frobenius(m: &Motive) -> Self {
        Morphism {
            src: m.clone(),
            dst: m.clone(),
            f: m.frobenius_matrix().clone(),
        }
    }
    /// self ∘ g.
    pub fn compose(&self, g: &Morphism) -> Morphism {
        Morphism {
            src: g.src.clone(),
            dst: self.dst.clone(),
            f: self.f.mul(&g.f),
        }
    }
    pub fn is_endomorphism(&self) -> bool {
        self.src.matrix() == self.dst.matrix() && self.src.theta() == self.dst.theta()
    }
    pub fn intertwines(&self) -> bool {
        residual(&self.src, &self.dst, &self.f).is_zero()
    }
}

pub(crate) fn lift_poly(a: &TPoly, l: &Field) -> TPoly {
    if a.field() == l {
        return a.clone();
    }
    let emb = crate::field::embedding(a.field(), l).expect("F_q embeds in L");
    a.embed(&emb)
}

/// A-basis of Hom(M, M') with the evidence used to certify it.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub gens: Vec<Morphism>,
    pub rank: usize,
    pub bound: usize,
    /// dim_Fq S_b − dim_Fq S_{b−1} for b = 0..=bound.
    pub increments: Vec<usize>,
}

/// F_q-basis of S_B = {F : deg F ≤ B, F·T = T'·σ(F)}, in echelon form with
/// respect to leading degree; each entry comes with its leading degree.
pub fn hom_space(m: &Motive, mp: &Motive, bound: usize) -> Result<Vec<(TMatrix, usize)>> {
    m.check_compatible(mp)?;
    let l = m.field().clone();
    let fq = m.base().clone();
    let rb = RelativeBasis::new(&fq, &l)?;
    let e = rb.rel_degree;
    let (r, rp) = (m.rank(), mp.rank());
    let block = rp * r * e;
    let nunk = (bound + 1) * block;
    let dmax = m.matrix().max_deg().max(mp.matrix().max_deg()).max(0) as usize;
    let neq_deg = bound + dmax + 1;
    let neq = neq_deg * rp * r * e;
    let mut a = Mat::zeros(neq, nunk);
    let t = m.matrix();
    let tp = mp.matrix();
    let sig = m.sigma_exp();
    for n in 0..=bound {
        for i in 0..rp {
            for j in 0..r {
                for (k, &b) in rb.basis().iter().enumerate() {
                    let col = (bound - n) * block + (i * r + j) * e + k;
                    let sb = l.frob(b, sig);
                    // F·T: row i gets b t^n · T[j][c]
                    let mut diff = vec![vec![TPoly::zero(&l); r]; rp];
                    for c in 0..r {
                        diff[i][c] = t.get(j, c).scale(b).shift(n);
                    }
                    // − T'·σ(F): column j gets T'[a][i] σ(b) t^n
                    for (ar, row) in diff.iter_mut().enumerate() {
                        row[j] = row[j].sub_ref(&tp.get(ar, i).scale(sb).shift(n));
                    }
                    for (ar, row) in diff.iter().enumerate() {
                        for (c, p) in row.iter().enumerate() {
                            for (deg, &x) in p.coeffs().iter().enumerate() {
                                if x.is_zero() {
                                    continue;
                                }
                                let co = rb.coords(x);
                                for (kk, &y) in co.iter().enumerate() {
                                    a.set(((deg * rp + ar) * r + c) * e + kk, col, y);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let ns = a.nullspace(&fq);
    if ns.is_empty() {
        return Ok(vec![]);
    }
    let mut basis = Mat::from_rows(ns);
    let piv = basis.rref(&fq);
    let mut out = Vec::new();
    for (row, &p) in piv.iter().enumerate() {
        let lead = bound - p / block;
        out.push((vec_to_matrix(basis.row(row), &rb, rp, r, bound), lead));
    }
    Ok(out)
}

fn vec_to_matrix(v: &[Fe], rb: &RelativeBasis, rp: usize, r: usize, bound: usize) -> TMatrix {
    let l = rb.big.clone();
    let e = rb.rel_degree;
    let block = rp * r * e;
    let mut coeffs = vec![vec![vec![Fe::ZERO; bound + 1]; r]; rp];
    for n in 0..=bound {
        for i in 0..rp {
            for j in 0..r {
                let base = (bound - n) * block + (i * r + j) * e;
                coeffs[i][j][n] = rb.combine(&v[base..base + e]);
            }
        }
    }
    TMatrix::from_rows(
        &l,
        coeffs
            .into_iter()
            .map(|row| row.into_iter().map(|c| TPoly::from_coeffs(&l, c)).collect())
            .collect(),
    )
}

fn matrix_to_vec(f: &TMatrix, rb: &RelativeBasis, bound: usize) -> Vec<Fe> {
    let (rp, r, e) = (f.rows(), f.cols(), rb.rel_degree);
    let block = rp * r * e;
    let mut v = vec![Fe::ZERO; (bound + 1) * block];
    for i in 0..rp {
        for j in 0..r {
            for (n, &c) in f.get(i, j).coeffs().iter().enumerate() {
                let base = (bound - n) * block + (i * r + j) * e;
                v[base..base + e].copy_from_slice(&rb.coords(c));
            }
        }
    }
    v
}

/// An A-basis of Hom(M, M').
pub fn solve_hom(m: &Motive, mp: &Motive) -> Result<HomBasis> {
    m.check_compatible(mp)?;
    let (r, rp) = (m.rank(), mp.rank());
    let rr = r * rp;
    let window = rr.max(4);
    let floor = (m.matrix().max_deg().max(0) + mp.matrix().max_deg().max(0)) as usize + rr;
    let start = floor + window;
    let cap = 8 * start;
    let expected = match (m.is_semisimple()?, mp.is_semisimple()?) {
        (true, true) => Some(crate::algebra::r_value_global(m.chi()?, mp.chi()?)?),
        _ => None,
    };
    let mut bound = start;
    loop {
        if let Some(hb) = try_bound(m, mp, bound, window)? {
            if expected.is_none_or(|x| x == hb.rank) {
                return Ok(hb);
            }
        }
        bound *= 2;
        if bound > cap {
            return Err(Error::DegreeBoundInsufficient(format!(
                "no certified Hom basis up to degree {cap}"
            )));
        }
    }
}

fn try_bound(m: &Motive, mp: &Motive, bound: usize, window: usize) -> Result<Option<HomBasis>> {
    let space = hom_space(m, mp, bound)?;
    let mut dims = vec![0usize; bound + 1];
    for (_, lead) in &space {
        for d in dims.iter_mut().skip(*lead) {
            *d += 1;
        }
    }
    let increments: Vec<usize> = (0..=bound).map(|b| dims[b] - if b == 0 { 0 } else { dims[b - 1] }).collect();
    let tail = &increments[bound + 1 - window..];
    if tail.iter().any(|&x| x != tail[0]) {
        return Ok(None);
    }
    let rank = tail[0];
    // generators: complements of S_{b−1} + t·S_{b−1} inside S_b
    let fq = m.base().clone();
    let rb = RelativeBasis::new(&fq, m.field())?;
    let nvec = (bound + 1) * mp.rank() * m.rank() * rb.rel_degree;
    let mut span = Echelon::new(nvec);
    let mut gens = Vec::new();
    let t = TPoly::t(m.field());
    for b in 0..=bound {
        let level: Vec<&TMatrix> = space.iter().filter(|(_, d)| *d == b).map(|(f, _)| f).collect();
        for f in &level {
            if span.insert(&fq, &matrix_to_vec(f, &rb, bound)) {
                gens.push(Morphism {
                    src: m.clone(),
                    dst: mp.clone(),
                    f: (*f).clone(),
                });
            }
        }
        if b < bound {
            for f in &level {
                span.insert(&fq, &matrix_to_vec(&f.scale(&t), &rb, bound));
            }
        }
    }
    if gens.len() != rank {
        return Ok(None);
    }
    debug_assert!(gens.iter().all(|g| g.intertwines()));
    Ok(Some(HomBasis {
        gens,
        rank,
        bound,
        increments,
    }))
}

/// All F_q-combinations Σ c_i g_i (not all zero), lexicographically.
pub fn fq_combinations(gens: Vec<TMatrix>, fq: &Field, l: &Field) -> impl Iterator<Item = TMatrix> {
    let q = fq.size() as usize;
    let n = gens.len();
    let total = q.checked_pow(n as u32).unwrap_or(usize::MAX);
    let elts: Vec<Fe> = {
        let mut v: Vec<Fe> = fq.elements().collect();
        v.sort_by_key(|&x| fq.encode(x));
        v
    };
    let emb = crate::field::embedding(fq, l).unwrap();
    let l = l.clone();
    (1..total).map(move |mut idx| {
        let mut acc = TMatrix::zero(&l, gens[0].rows(), gens[0].cols());
        for g in &gens {
            let c = elts[idx % q];
            idx /= q;
            if !c.is_zero() {
                acc = acc.add(&g.scale(&TPoly::constant(&l, emb.apply(c))));
            }
        }
        acc
    })
}

/// Isogeny: equal rank and nonzero determinant.
pub fn is_isogeny(f: &Morphism) -> bool {
    f.src.rank() == f.dst.rank() && !f.f.det().is_zero()
}

/// The monic F_q-irreducible below an L-irreducible φ: the product of its
/// σ-conjugates.
pub fn place_below(phi: &TPoly, fq: &Field) -> TPoly {
    let a = fq.degree();
    let mut prod = phi.clone();
    let mut cur = phi.frob(a);
    while cur != *phi {
        prod = prod.mul_ref(&cur);
        cur = cur.frob(a);
    }
    prod.descend(fq).expect("norm of a polynomial lies in F_q[t]").monic()
}

/// Places v of A dividing the elementary divisors, with the L-dimension of
/// the v-primary part of the cokernel and the largest exponent occurring.
fn cokernel_places(divs: &[TPoly], fq: &Field) -> Vec<(TPoly, usize, usize)> {
    let mut out: Vec<(TPoly, usize, usize)> = Vec::new();
    for d in divs {
        for (phi, k) in ffactor::factor(d) {
            let v = place_below(&phi, fq);
            let dim = phi.deg() as usize * k;
            match out.iter_mut().find(|(w, _, _)| *w == v) {
                Some(e) => {
                    e.1 += dim;
                    e.2 = e.2.max(k);
                }
                None => out.push((v, dim, k)),
            }
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    out
}

/// Minimal monic a ∈ F_q[t] annihilating coker F.
pub fn annihilator(f: &Morphism) -> Result<TPoly> {
    let divs = f.f.elementary_divisors()?;
    let fq = f.src.base();
    let mut a = TPoly::one(fq);
    for (v, _, k) in cokernel_places(&divs, fq) {
        a = a.mul_ref(&v.pow(k as u64));
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsogenyKind {
    Separable,
    PurelyInseparable,
    Mixed,
}

/// The cokernel K of an isogeny as an L-vector space with its t-action and
/// σ-semilinear τ_K (columns are images of basis vectors).
#[derive(Clone, Debug)]
pub struct Cokernel {
    /// L[t]-vectors b_k in the target lifting the L-basis of K.
    pub basis: Vec<Vec<TPoly>>,
    pub t_action: Mat,
    pub tau: Mat,
    u: TMatrix,
    divisors: Vec<TPoly>,
}

impl Cokernel {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    /// L-coordinates of the class of an L[t]-vector.
    pub fn coords(&self, x: &[TPoly]) -> Vec<Fe> {
        let y = self.u.mul_vec(x);
        let mut out = Vec::new();
        for (i, d) in self.divisors.iter().enumerate() {
            let k = d.deg() as usize;
            if k == 0 {
                continue;
            }
            let yr = y[i].rem(d);
            for j in 0..k {
                out.push(yr.coeff(j));
            }
        }
        out
    }
}

pub fn cokernel(f: &Morphism) -> Result<Cokernel> {
    let l = f.dst.field().clone();
    let (u, d, _v) = f.f.smith()?;
    let n = f.f.rows();
    let divisors: Vec<TPoly> = (0..n).map(|i| d.get(i, i).clone()).collect();
    // U^{-1}: U is unimodular
    let du = u.det();
    let uinv = u.adjugate().scale(&TPoly::constant(&l, l.inv(du.coeff(0))));
    let mut basis = Vec::new();
    for (i, di) in divisors.iter().enumerate() {
        for j in 0..di.deg().max(0) as usize {
            let mut ei = vec![TPoly::zero(&l); n];
            ei[i] = TPoly::monomial(&l, Fe::ONE, j);
            basis.push(uinv.mul_vec(&ei));
        }
    }
    let mut ck = Cokernel {
        basis,
        t_action: Mat::zeros(0, 0),
        tau: Mat::zeros(0, 0),
        u,
        divisors,
    };
    let dim = ck.dim();
    let t = TPoly::t(&l);
    let sig = f.dst.sigma_exp();
    let tp = f.dst.matrix();
    let mut tcols = Vec::new();
    let mut scols = Vec::new();
    for b in &ck.basis {
        tcols.push(ck.coords(&b.iter().map(|x| x.mul_ref(&t)).collect::<Vec<_>>()));
        let sb: Vec<TPoly> = b.iter().map(|x| x.frob(sig)).collect();
        scols.push(ck.coords(&tp.mul_vec(&sb)));
    }
    ck.t_action = Mat::from_cols(dim, &tcols);
    ck.tau = Mat::from_cols(dim, &scols);
    Ok(ck)
}

/// Matrix of the n-fold semilinear iterate S·σ(S)···σ^{n−1}(S).
pub fn semilinear_power(s: &Mat, l: &Field, sig: u32, n: usize) -> Mat {
    let mut acc = Mat::identity(s.rows);
    let mut cur = s.clone();
    for _ in 0..n {
        acc = acc.mul(l, &cur);
        cur = frob_mat(&cur, l, sig);
    }
    acc
}

pub fn frob_mat(m: &Mat, l: &Field, k: u32) -> Mat {
    Mat {
        rows: m.rows,
        cols: m.cols,
        data: m.data.iter().map(|&x| l.frob(x, k)).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct IsogenyData {
    pub elementary_divisors: Vec<TPoly>,
    pub coker_dim: usize,
    /// Monic generator of deg(f) in F_q[t].
    pub degree: TPoly,
    pub separable_part: TPoly,
    pub inseparable_part: TPoly,
    pub tau_k: Mat,
    pub kind: IsogenyKind,
}

pub fn isogeny_data(f: &Morphism) -> Result<IsogenyData> {
    if !is_isogeny(f) {
        return Err(Error::NotIsogeny);
    }
    let fq = f.src.base().clone();
    let l = f.src.field().clone();
    let divs = f.f.elementary_divisors()?;
    let eps = f.src.epsilon();
    let mut degree = TPoly::one(&fq);
    let mut sep = TPoly::one(&fq);
    let mut insep = TPoly::one(&fq);
    for (v, dim, _) in cokernel_places(&divs, &fq) {
        let k = dim / v.deg() as usize;
        let vk = v.pow(k as u64);
        degree = degree.mul_ref(&vk);
        if v == eps {
            insep = insep.mul_ref(&vk);
        } else {
            sep = sep.mul_ref(&vk);
        }
    }
    let ck = cokernel(f)?;
    let n = ck.dim();
    let sig = f.src.sigma_exp();
    let kind = if ck.tau.rank(&l) == n {
        IsogenyKind::Separable
    } else if semilinear_power(&ck.tau, &l, sig, n).is_zero() {
        IsogenyKind::PurelyInseparable
    } else {
        IsogenyKind::Mixed
    };
    Ok(IsogenyData {
        elementary_divisors: divs,
        coker_dim: n,
        degree,
        separable_part: sep,
        inseparable_part: insep,
        tau_k: ck.tau,
        kind,
    })
}

/// det F as an element of F_q[t], raw and monic.
pub fn norm(f: &Morphism) -> Result<(TPoly, TPoly)> {
    if !f.is_endomorphism() {
        return Err(Error::Invalid("the norm is defined for endomorphisms".into()));
    }
    let d = f.f.det();
    let raw = d
        .descend(f.src.base())
        .ok_or_else(|| Error::Internal("norm not in F_q[t]".into()))?;
    let monic = if raw.is_zero() { raw.clone() } else { raw.monic() };
    Ok((raw, monic))
}

/// (f∨, a) with f∘f∨ = a = f∨∘f.
pub fn dual_isogeny(f: &Morphism) -> Result<(Morphism, TPoly)> {
    if !is_isogeny(f) {
        return Err(Error::NotIsogeny);
    }
    let a = if f.is_endomorphism() && f.src.is_semisimple()? {
        norm(f)?.0
    } else {
        annihilator(f)?
    };
    let l = f.src.field().clone();
    let al = lift_poly(&a, &l);
    let det = f.f.det();
    let adj = f.f.adjugate();
    // a·F^{-1} = (a/det)·adj
    let mut g = TMatrix::zero(&l, adj.rows(), adj.cols());
    for i in 0..adj.rows() {
        for j in 0..adj.cols() {
            let num = adj.get(i, j).mul_ref(&al);
            let q = num
                .div_exact(&det)
                .ok_or_else(|| Error::Internal("dual isogeny is not integral".into()))?;
            g.set(i, j, q);
        }
    }
    let dual = Morphism::new(&f.dst, &f.src, g)?;
    Ok((dual, a))
}

/// Solve H·X = Y over L[t] for H with independent columns.
fn solve_in(h: &TMatrix, y: &TMatrix) -> Option<TMatrix> {
    let herm = h.hermite_columns();
    let x = herm.solve(y)?;
    // H·V = [Hn|0] so H·(V_left·X) = Y
    let k = herm.rank();
    let vleft = herm.v.submatrix(&(0..h.cols()).collect::<Vec<_>>(), &(0..k).collect::<Vec<_>>());
    Some(vleft.mul(&x))
}

/// Motive on the module spanned by the columns of H ⊂ L[t]^r stable under
/// x ↦ T·σ(x).
pub fn submotive(m: &Motive, h: &TMatrix) -> Result<Motive> {
    let rhs = m.matrix().mul(&m.sigma(h, 1));
    let s = solve_in(h, &rhs).ok_or_else(|| Error::Internal("submodule is not τ-stable".into()))?;
    Motive::validate(m.q(), m.e(), m.theta(), s)
}

fn column_basis(g: &TMatrix) -> (Hermite, TMatrix) {
    let herm = g.hermite_columns();
    let k = herm.rank();
    let h = herm.h.submatrix(&(0..g.rows()).collect::<Vec<_>>(), &(0..k).collect::<Vec<_>>());
    (herm, h)
}

#[derive(Clone, Debug)]
pub struct KernelImage {
    pub kernel: Option<Motive>,
    pub kernel_inclusion: Option<Morphism>,
    pub image: Option<Motive>,
    /// M ↠ im f
    pub projection: Option<Morphism>,
    /// im f ↪ M'
    pub image_inclusion: Option<Morphism>,
}

pub fn kernel_image(f: &Morphism) -> Result<KernelImage> {
    let (herm, h) = column_basis(&f.f);
    let k = herm.rank();
    let r = f.src.rank();
    let (image, projection, image_inclusion) = if k == 0 {
        (None, None, None)
    } else {
        let im = submotive(&f.dst, &h)?;
        let p = solve_in(&h, &f.f).ok_or_else(|| Error::Internal("image projection".into()))?;
        (
            Some(im.clone()),
            Some(Morphism::new(&f.src, &im, p)?),
            Some(Morphism::new(&im, &f.dst, h)?),
        )
    };
    let (kernel, kernel_inclusion) = if k == r {
        (None, None)
    } else {
        let kb = herm.v.submatrix(&(0..r).collect::<Vec<_>>(), &(k..r).collect::<Vec<_>>());
        let km = submotive(&f.src, &kb)?;
        (Some(km.clone()), Some(Morphism::new(&km, &f.src, kb)?))
    };
    Ok(KernelImage {
        kernel,
        kernel_inclusion,
        image,
        projection,
        image_inclusion,
    })
}

/// Submotive of M' generated by im F and lifts of the given cokernel vectors.
fn enlarge(f: &Morphism, extra: &[Vec<TPoly>]) -> Result<(Motive, TMatrix)> {
    let l = f.dst.field().clone();
    let n = f.dst.rank();
    let cols: Vec<Vec<TPoly>> = (0..f.f.cols()).map(|j| f.f.col(j)).chain(extra.iter().cloned()).collect();
    let g = TMatrix::from_cols(&l, n, &cols);
    let (_, h) = column_basis(&g);
    Ok((submotive(&f.dst, &h)?, h))
}

/// f = f_insep ∘ f_sep with coker f_sep étale and coker f_insep nilpotent.
pub fn sep_insep_factorization(f: &Morphism) -> Result<(Morphism, Morphism)> {
    if !is_isogeny(f) {
        return Err(Error::NotIsogeny);
    }
    let l = f.src.field().clone();
    let ck = cokernel(f)?;
    let n = ck.dim();
    let sig = f.src.sigma_exp();
    // K^ét = im of the n-fold iterate
    let it = semilinear_power(&ck.tau, &l, sig, n.max(1));
    let mut img = it.transpose();
    let piv = img.rref(&l);
    let extra: Vec<Vec<TPoly>> = (0..piv.len())
        .map(|row| {
            let c = img.row(row);
            let mut v = vec![TPoly::zero(&l); f.dst.rank()];
            for (k, &x) in c.iter().enumerate() {
                if !x.is_zero() {
                    for (i, vi) in v.iter_mut().enumerate() {
                        *vi = vi.add_ref(&ck.basis[k][i].scale(x));
                    }
                }
            }
            v
        })
        .collect();
    let (mid, h) = enlarge(f, &extra)?;
    let gs = solve_in(&h, &f.f).ok_or_else(|| Error::Internal("separable part".into()))?;
    let fsep = Morphism::new(&f.src, &mid, gs)?;
    let finsep = Morphism::new(&mid, &f.dst, h)?;
    Ok((fsep, finsep))
}

/// A finite torsion quotient ρ: M ↠ K: K an L-space with t-action A_t,
/// σ-semilinear τ_K (matrix S), and ρ(e_j) given by the columns of R.
#[derive(Clone, Debug)]
pub struct TorsionQuotient {
    pub t_action: Mat,
    pub tau: Mat,
    pub rho: Mat,
}

impl TorsionQuotient {
    /// M/aM for a ∈ F_q[t].
    pub fn principal(m: &Motive, a: &TPoly) -> Self {
        let l = m.field().clone();
        let a = lift_poly(a, &l);
        let f = Morphism {
            src: m.clone(),
            dst: m.clone(),
            f: TMatrix::scalar(&l, m.rank(), &a),
        };
        Self::from_isogeny(&f).expect("a·id is an isogeny")
    }
    /// The cokernel of an isogeny with its induced structure.
    pub fn from_isogeny(f: &Morphism) -> Result<Self> {
        let ck = cokernel(f)?;
        let l = f.dst.field();
        let n = f.dst.rank();
        let cols: Vec<Vec<Fe>> = (0..n)
            .map(|j| {
                let mut e = vec![TPoly::zero(l); n];
                e[j] = TPoly::one(l);
                ck.coords(&e)
            })
            .collect();
        Ok(TorsionQuotient {
            rho: Mat::from_cols(ck.dim(), &cols),
            t_action: ck.t_action,
            tau: ck.tau,
        })
    }
    /// coker τ with τ_K = 0.
    pub fn coker_tau_zero(m: &Motive) -> Result<Self> {
        let f = Morphism {
            src: m.clone(),
            dst: m.clone(),
            f: m.matrix().clone(),
        };
        let mut q = Self::from_isogeny(&f)?;
        q.tau = Mat::zeros(q.tau.rows, q.tau.cols);
        Ok(q)
    }
    pub fn dim(&self) -> usize {
        self.t_action.rows
    }
}

/// (M', inclusion) with M' = ker ρ.
pub fn factor_by_quotient(m: &Motive, k: &TorsionQuotient) -> Result<(Motive, Morphism)> {
    let l = m.field().clone();
    let sig = m.sigma_exp();
    let n = k.dim();
    let r = m.rank();
    let at = &k.t_action;
    // compatibility: A_t·S = S·σ(A_t) and ρ(T e_j) = S·σ(ρ(e_j))
    let rho_of = |x: &[TPoly]| -> Vec<Fe> {
        let mut acc = vec![Fe::ZERO; n];
        for (j, p) in x.iter().enumerate() {
            // p(A_t)·R_j by Horner
            let mut v = vec![Fe::ZERO; n];
            for &c in p.coeffs().iter().rev() {
                v = at.mul_vec(&l, &v);
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi = l.add(*vi, l.mul(c, k.rho.get(i, j)));
                }
            }
            for i in 0..n {
                acc[i] = l.add(acc[i], v[i]);
            }
        }
        acc
    };
    if at.mul(&l, &k.tau) != k.tau.mul(&l, &frob_mat(at, &l, sig)) {
        return Err(Error::BadQuotient("τ_K does not commute with t".into()));
    }
    let srho = k.tau.mul(&l, &frob_mat(&k.rho, &l, sig));
    for j in 0..r {
        if rho_of(&m.matrix().col(j)) != srho.col(j) {
            return Err(Error::BadQuotient("ρ is not τ-equivariant".into()));
        }
    }
    // kernel and cokernel of the linearized τ_K must be (t−θ)-power torsion
    let theta = m.theta();
    let shift = |a: &Mat| {
        let mut b = a.clone();
        for i in 0..n {
            b.set(i, i, l.sub(b.get(i, i), theta));
        }
        b
    };
    let sat = frob_mat(at, &l, sig);
    let nil_ker = semilinear_power(&shift(&sat), &l, 0, n);
    for v in k.tau.nullspace(&l) {
        if nil_ker.mul_vec(&l, &v).iter().any(|x| !x.is_zero()) {
            return Err(Error::BadQuotient("ker τ_K is not (t−θ)-power torsion".into()));
        }
    }
    let pw = semilinear_power(&shift(at), &l, 0, n);
    let mut im = Echelon::new(n);
    for j in 0..n {
        im.insert(&l, &k.tau.col(j));
    }
    for j in 0..n {
        if !im.contains(&l, &pw.col(j)) {
            return Err(Error::BadQuotient("coker τ_K is not (t−θ)-power torsion".into()));
        }
    }
    // ker ρ ⊇ a·L[t]^r with a the characteristic polynomial of A_t
    let atm = TMatrix::from_rows(
        &l,
        (0..n).map(|i| (0..n).map(|j| TPoly::constant(&l, at.get(i, j))).collect()).collect(),
    );
    let cp = atm.charpoly();
    let a = TPoly::from_coeffs(&l, cp.coeffs().iter().map(|c| c.coeff(0)).collect());
    let da = a.deg() as usize;
    // L-linear map on span{t^i e_j : i < deg a}
    let mut cols = Vec::new();
    for j in 0..r {
        for i in 0..da {
            let mut x = vec![TPoly::zero(&l); r];
            x[j] = TPoly::monomial(&l, Fe::ONE, i);
            cols.push(rho_of(&x));
        }
    }
    let mut gens: Vec<Vec<TPoly>> = Vec::new();
    for j in 0..r {
        let mut x = vec![TPoly::zero(&l); r];
        x[j] = a.clone();
        gens.push(x);
    }
    if n > 0 {
        for v in Mat::from_cols(n, &cols).nullspace(&l) {
            let mut x = vec![TPoly::zero(&l); r];
            for j in 0..r {
                x[j] = TPoly::from_coeffs(&l, v[j * da..(j + 1) * da].to_vec());
            }
            gens.push(x);
        }
    }
    let g = TMatrix::from_cols(&l, r, &gens);
    let (_, h) = column_basis(&g);
    let sub = submotive(m, &h)?;
    let inc = Morphism::new(&sub, m, h)?;
    Ok((sub, inc))
}

/// Result of [`ideal_image`].
#[derive(Clone, Debug)]
pub struct IdealImage {
    pub motive: Motive,
    pub inclusion: Morphism,
    pub kernel_ideal: bool,
}

/// M^I = Σ im f_i for the right ideal I generated by the f_i.
pub fn ideal_image(m: &Motive, gens: &[Morphism]) -> Result<IdealImage> {
    let l = m.field().clone();
    let fq = m.base().clone();
    if gens.is_empty() || !gens.iter().all(|g| g.is_endomorphism() && g.src.matrix() == m.matrix()) {
        return Err(Error::Invalid("ideal generators must be endomorphisms of M".into()));
    }
    let mats: Vec<TMatrix> = gens.iter().map(|g| g.f.clone()).collect();
    let has_isogeny = fq_combinations(mats.clone(), &fq, &l).any(|c| !c.det().is_zero())
        || t_combinations(&mats, &fq, &l).any(|c| !c.det().is_zero());
    if !has_isogeny {
        return Err(Error::NoIsogenyInIdeal);
    }
    let mut cat = mats[0].clone();
    for g in &mats[1..] {
        cat = cat.hconcat(g);
    }
    let (_, h) = column_basis(&cat);
    let sub = submotive(m, &h)?;
    let inc = Morphism::new(&sub, m, h.clone())?;
    let flag = is_kernel_ideal(m, &mats, &h, &inc)?;
    Ok(IdealImage {
        motive: sub,
        inclusion: inc,
        kernel_ideal: flag,
    })
}

/// Combinations Σ (c_i + c'_i t) g_i.
pub fn t_combinations(gens: &[TMatrix], fq: &Field, l: &Field) -> impl Iterator<Item = TMatrix> {
    let t = TPoly::t(l);
    let mut doubled: Vec<TMatrix> = gens.to_vec();
    doubled.extend(gens.iter().map(|g| g.scale(&t)));
    fq_combinations(doubled, fq, l)
}

/// Coordinates of an endomorphism in an A-basis of End(M).
fn end_coords(x: &TMatrix, basis: &[TMatrix], fq: &Field) -> Result<Vec<TPoly>> {
    use crate::ratfn::{solve_columns, RatFn};
    let flat = |m: &TMatrix| -> Vec<RatFn> { m.entries().iter().map(|a| RatFn::from_poly(a.clone())).collect() };
    let cols: Vec<Vec<RatFn>> = basis.iter().map(flat).collect();
    let sol = solve_columns(&cols, &flat(x)).ok_or_else(|| Error::Internal("not in End(M)".into()))?;
    sol.iter()
        .map(|c| {
            if !c.is_poly() {
                return Err(Error::Internal("End coordinates not integral".into()));
            }
            c.num.descend(fq).ok_or_else(|| Error::Internal("End coordinates not in A".into()))
        })
        .collect()
}

fn is_kernel_ideal(m: &Motive, mats: &[TMatrix], h: &TMatrix, inc: &Morphism) -> Result<bool> {
    let fq = m.base().clone();
    let l = m.field().clone();
    let end = solve_hom(m, m)?;
    let basis: Vec<TMatrix> = end.gens.iter().map(|g| g.f.clone()).collect();
    let rho = basis.len();
    // I as an A-submodule of A^ρ
    let mut icols: Vec<Vec<TPoly>> = Vec::new();
    for f in mats {
        for g in &basis {
            icols.push(end_coords(&f.mul(g), &basis, &fq)?);
        }
    }
    let imat = TMatrix::from_cols(&fq, rho, &icols);
    let iherm = imat.hermite_columns();
    // J ⊇ a0·End where a0 annihilates M/M^I
    let a0 = annihilator(inc)?;
    let da = a0.deg() as usize;
    let det = h.det();
    let adj = h.adjugate();
    let mut jgens: Vec<Vec<TPoly>> = Vec::new();
    for k in 0..rho {
        let mut v = vec![TPoly::zero(&fq); rho];
        v[k] = a0.clone();
        jgens.push(v);
    }
    if da > 0 {
        // F_q-linear condition adj(H)·Σ a_k G_k ≡ 0 mod det H on a_k mod a0
        let rb = RelativeBasis::new(&fq, &l)?;
        let dd = det.deg() as usize;
        let mut cols = Vec::new();
        for k in 0..rho {
            for i in 0..da {
                let x = adj.mul(&basis[k]).map(|p| p.shift(i).rem(&det));
                let mut col = Vec::new();
                for p in x.entries() {
                    for j in 0..dd {
                        col.extend(rb.coords(p.coeff(j)));
                    }
                }
                cols.push(col);
            }
        }
        let nrows = cols[0].len();
        for v in Mat::from_cols(nrows, &cols).nullspace(&fq) {
            jgens.push((0..rho).map(|k| TPoly::from_coeffs(&fq, v[k * da..(k + 1) * da].to_vec())).collect());
        }
    }
    let jmat = TMatrix::from_cols(&fq, rho, &jgens);
    Ok(iherm.solve(&jmat).is_some())
}
