//! Completions at places: local σ-shtukas at finite places, the étale/nilpotent
//! splitting at the characteristic place, reduction to one component of
//! A_v ⊗ L, Tate modules with their Frobenius, and the lattice chain at ∞.

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::ffactor;
use crate::field::{build_field, embedding, Fe, Field, RelativeBasis};
use crate::linalg::{Echelon, Mat};
use crate::morphisms::{frob_mat, lift_poly, semilinear_power};
use crate::motive::Motive;
use crate::poly::TPoly;
use crate::tmatrix::TMatrix;

/// Extension degrees tried when splitting a Tate module.
pub const SPLITTING_CAP: u32 = 64;

/// τ on (L[t]/w)^r with w = v^n, semilinear for σ^s.
#[derive(Clone, Debug)]
pub struct LocalShtuka {
    /// The place v, monic irreducible over F_q.
    pub place: TPoly,
    pub n: usize,
    /// v^n over L.
    pub modulus: TPoly,
    /// Entries reduced mod v^n.
    pub matrix: TMatrix,
    pub sigma_power: u32,
    pub etale: bool,
    /// σ as a power of the prime Frobenius.
    frob: u32,
}

impl LocalShtuka {
    /// Shtuka with the given matrix at v^n.
    pub fn from_matrix(v: &TPoly, n: usize, matrix: &TMatrix, frob: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("precision must be at least 1".into()));
        }
        if !v.is_monic() || !ffactor::is_irreducible(v) {
            return Err(Error::Invalid("place must be a monic irreducible".into()));
        }
        let l = matrix.field().clone();
        let vl = lift_poly(v, &l);
        let modulus = vl.pow(n as u64);
        let etale = vl.gcd(&matrix.det()).is_one();
        Ok(LocalShtuka {
            place: v.clone(),
            n,
            modulus: modulus.clone(),
            matrix: matrix.rem(&modulus),
            sigma_power: 1,
            etale,
            frob,
        })
    }
    pub fn field(&self) -> &Field {
        self.matrix.field()
    }
    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }
    /// L-dimension of (L[t]/w)^r.
    pub fn length(&self) -> usize {
        self.rank() * self.modulus.deg() as usize
    }
    /// Matrix S over L with τ(x) = S·σ^s(x) in the basis t^i e_j.
    pub fn linear_matrix(&self) -> Mat {
        semilinear_matrix(&self.matrix, &self.modulus)
    }
    /// Prime-Frobenius exponent of the semilinearity.
    pub fn frob_exp(&self) -> u32 {
        self.frob * self.sigma_power
    }
    /// F_q-dimension of the fixed points x = τ(x) over L.
    pub fn fixed_dim(&self, fq: &Field) -> Result<usize> {
        Ok(fixed_points(&self.linear_matrix(), self.field(), fq, self.frob_exp())?.len())
    }
}

pub fn localize(m: &Motive, v: &TPoly, n: usize) -> Result<LocalShtuka> {
    if v.field() != m.base() {
        return Err(Error::FieldMismatch("place must be over F_q".into()));
    }
    LocalShtuka::from_matrix(v, n, m.matrix(), m.sigma_exp())
}

fn coords(x: &[TPoly], d: usize) -> Vec<Fe> {
    let mut out = Vec::with_capacity(x.len() * d);
    for p in x {
        for i in 0..d {
            out.push(p.coeff(i));
        }
    }
    out
}

fn from_coords(l: &Field, c: &[Fe], d: usize) -> Vec<TPoly> {
    c.chunks(d).map(|ch| TPoly::from_coeffs(l, ch.to_vec())).collect()
}

/// Columns are the coordinates of A·t^i e_j mod w.
pub fn semilinear_matrix(a: &TMatrix, w: &TPoly) -> Mat {
    let d = w.deg() as usize;
    let r = a.cols();
    let mut cols = Vec::new();
    for j in 0..r {
        for i in 0..d {
            let col: Vec<TPoly> = a.col(j).iter().map(|p| p.shift(i).rem(w)).collect();
            cols.push(coords(&col, d));
        }
    }
    Mat::from_cols(a.rows() * d, &cols)
}

/// F_q-basis (as L-coordinate vectors) of {x : x = S·σ(x)}, σ = p^s-power.
pub fn fixed_points(s: &Mat, l: &Field, fq: &Field, frob: u32) -> Result<Vec<Vec<Fe>>> {
    let rb = RelativeBasis::new(fq, l)?;
    let e = rb.rel_degree;
    let n = s.rows;
    let mut cols = Vec::new();
    for u in 0..n {
        for &b in rb.basis() {
            let sb = l.frob(b, frob);
            let mut col = Vec::with_capacity(n * e);
            for i in 0..n {
                let mut y = l.mul(s.get(i, u), sb);
                if i == u {
                    y = l.sub(b, y);
                } else {
                    y = l.neg(y);
                }
                col.extend(rb.coords(y));
            }
            cols.push(col);
        }
    }
    let lin = Mat::from_cols(n * e, &cols);
    Ok(lin
        .nullspace(fq)
        .into_iter()
        .map(|v| v.chunks(e).map(|c| rb.combine(c)).collect())
        .collect())
}

/// Inverse Frobenius power on a coordinate vector.
fn unfrob(l: &Field, v: &[Fe], k: u32) -> Vec<Fe> {
    let n = l.degree();
    let inv = (n - k % n) % n;
    v.iter().map(|&x| l.frob(x, inv)).collect()
}

#[derive(Clone, Debug)]
pub struct EtaleNil {
    pub etale_dim: usize,
    pub nil_dim: usize,
    /// Columns: étale basis, then nilpotent basis (L-coordinates).
    pub basis: Mat,
    pub etale_block: Mat,
    pub nil_block: Mat,
}

/// Splitting of a shtuka at the characteristic place into its étale and
/// nilpotent parts.
pub fn etale_nil_decompose(s: &LocalShtuka, epsilon: &TPoly) -> Result<EtaleNil> {
    if s.place != *epsilon {
        return Err(Error::NotCharacteristicPlace);
    }
    let l = s.field().clone();
    let sm = s.linear_matrix();
    let n = sm.rows;
    let fr = s.frob_exp();
    let it = semilinear_power(&sm, &l, fr, n);
    let mut img = it.transpose();
    let k = img.rref(&l).len();
    let mut cols: Vec<Vec<Fe>> = (0..k).map(|i| img.row(i).to_vec()).collect();
    let steps = (fr as u64 * n as u64 % l.degree() as u64) as u32;
    for v in it.nullspace(&l) {
        cols.push(unfrob(&l, &v, steps));
    }
    let p = Mat::from_cols(n, &cols);
    let pinv = p
        .inverse(&l)
        .ok_or_else(|| Error::Internal("étale and nilpotent parts do not span".into()))?;
    let conj = pinv.mul(&l, &sm).mul(&l, &frob_mat(&p, &l, fr));
    let block = |r0: usize, c0: usize, nr: usize, nc: usize| {
        let mut b = Mat::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                b.set(i, j, conj.get(r0 + i, c0 + j));
            }
        }
        b
    };
    if !block(0, k, k, n - k).is_zero() || !block(k, 0, n - k, k).is_zero() {
        return Err(Error::Internal("decomposition is not block diagonal".into()));
    }
    let et = block(0, 0, k, k);
    let nil = block(k, k, n - k, n - k);
    if et.rank(&l) != k || !semilinear_power(&nil, &l, fr, n - k).is_zero() {
        return Err(Error::Internal("étale/nilpotent blocks have the wrong type".into()));
    }
    Ok(EtaleNil {
        etale_dim: k,
        nil_dim: n - k,
        basis: p,
        etale_block: et,
        nil_block: nil,
    })
}

/// Reduce a shtuka at v to the component L[t]/v_0^n, where v_0 is the first
/// (canonical order) factor of v over L; the Frobenius becomes the f-fold
/// composite, f = [F_v ∩ L : F_q].
pub fn reduce_mod_a0(s: &LocalShtuka, fq: &Field) -> Result<LocalShtuka> {
    let l = s.field().clone();
    let k = s.place.deg() as usize;
    let e = (l.degree() / fq.degree()) as usize;
    let f = k.gcd(&e);
    if f == 1 {
        return Ok(s.clone());
    }
    let vl = lift_poly(&s.place, &l);
    let mut facs: Vec<TPoly> = ffactor::factor(&vl).into_iter().map(|(g, _)| g).collect();
    if facs.len() != f {
        return Err(Error::NoCommonSubfield);
    }
    facs.sort_by(|a, b| a.canonical_cmp(b));
    let v0 = facs[0].clone();
    let w = v0.pow(s.n as u64);
    let sig = s.frob_exp();
    let mut phi = TMatrix::identity(&l, s.rank());
    for i in 0..f {
        phi = phi.mul(&s.matrix.frob(sig * i as u32)).rem(&w);
    }
    Ok(LocalShtuka {
        place: s.place.clone(),
        n: s.n,
        modulus: w.clone(),
        matrix: phi,
        sigma_power: s.sigma_power * f as u32,
        etale: s.etale,
        frob: s.frob,
    })
}

/// Fixed points of τ at v^n over F_{q^{em}}, as a free A/v^n-module.
#[derive(Clone, Debug)]
pub struct TateModuleData {
    pub place: TPoly,
    pub n: usize,
    /// Splitting degree m: fixed points are rational over F_{q^{em}}.
    pub m: u32,
    pub field: Field,
    pub modulus: TPoly,
    /// A/v^n-basis of the fixed module.
    pub basis: Vec<Vec<TPoly>>,
    /// F_q-dimension of the fixed module.
    pub fixed_dim: usize,
    /// Arithmetic Frobenius (q^e-power map) in the basis, entries in A/v^n.
    pub frobenius: TMatrix,
    /// Π mod v^n in the same basis.
    pub pi: TMatrix,
    fq: Field,
}

impl TateModuleData {
    /// Coordinates in A/v^n of a fixed vector.
    pub fn coords(&self, y: &[TPoly]) -> Result<Vec<TPoly>> {
        let d = self.modulus.deg() as usize;
        let rb = RelativeBasis::new(&self.fq, &self.field)?;
        let flat = |x: &[TPoly]| -> Vec<Fe> { coords(x, d).into_iter().flat_map(|c| rb.coords(c)).collect() };
        let mut cols = Vec::new();
        for b in &self.basis {
            for i in 0..d {
                let tb: Vec<TPoly> = b.iter().map(|p| p.shift(i).rem(&self.modulus)).collect();
                cols.push(flat(&tb));
            }
        }
        let a = Mat::from_cols(cols[0].len(), &cols);
        let sol = a
            .solve(&self.fq, &flat(y))
            .ok_or_else(|| Error::Internal("vector is not in the fixed module".into()))?;
        Ok(sol.chunks(d).map(|c| TPoly::from_coeffs(&self.fq, c.to_vec())).collect())
    }
    /// Matrix over A/v^n of a linear map x ↦ F·x into another Tate module.
    pub fn map_matrix(&self, target: &TateModuleData, f: &TMatrix) -> Result<TMatrix> {
        let emb = embedding(f.field(), &self.field)?;
        let fm = f.embed(&emb);
        let cols = self
            .basis
            .iter()
            .map(|b| {
                let y: Vec<TPoly> = fm.mul_vec(b).iter().map(|p| p.rem(&target.modulus)).collect();
                target.coords(&y)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TMatrix::from_cols(&self.fq, target.basis.len(), &cols))
    }
}

pub fn tate_module(m: &Motive, v: &TPoly, n: usize) -> Result<TateModuleData> {
    let target = v.deg() as usize * n * m.rank();
    for k in 1..=SPLITTING_CAP {
        match tate_module_over(m, v, n, k) {
            Ok(t) if t.fixed_dim == target => return Ok(t),
            Ok(_) => {}
            Err(Error::Computation(_)) => break,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SplittingCapExceeded(format!(
        "fixed points of rank {} not found over F_(q^(e·m)), m ≤ {SPLITTING_CAP}",
        m.rank()
    )))
}

/// Fixed points over F_{q^{e·k}}; the basis is only complete once
/// fixed_dim = deg v · n · r.
pub fn tate_module_over(m: &Motive, v: &TPoly, n: usize, k: u32) -> Result<TateModuleData> {
    let fq = m.base().clone();
    let eps = m.epsilon();
    if !v.gcd(&eps).is_one() {
        return Err(Error::Invalid("Tate modules are taken at places v ≠ ε".into()));
    }
    let s = localize(m, v, n)?;
    let big = build_field(fq.char(), m.field().degree() * k)?;
    let emb = embedding(m.field(), &big)?;
    let a = s.matrix.embed(&emb);
    let w = s.modulus.embed(&emb);
    let d = w.deg() as usize;
    let r = m.rank();
    let fixed = fixed_points(&semilinear_matrix(&a, &w), &big, &fq, m.sigma_exp())?;
    let fixed_dim = fixed.len();
    let vb = lift_poly(v, &big);
    // A/v^n-basis: lift a basis of Fix/v·Fix
    let rb = RelativeBasis::new(&fq, &big)?;
    let flat = |x: &[TPoly]| -> Vec<Fe> { coords(x, d).into_iter().flat_map(|c| rb.coords(c)).collect() };
    let dimq = r * d * rb.rel_degree;
    let mut span = Echelon::new(dimq);
    let elems: Vec<Vec<TPoly>> = fixed.iter().map(|c| from_coords(&big, c, d)).collect();
    for x in &elems {
        span.insert(&fq, &flat(&x.iter().map(|p| p.mul_ref(&vb).rem(&w)).collect::<Vec<_>>()));
    }
    let mut basis = Vec::new();
    for x in &elems {
        if basis.len() == r || span.contains(&fq, &flat(x)) {
            continue;
        }
        for i in 0..d {
            span.insert(&fq, &flat(&x.iter().map(|p| p.shift(i).rem(&w)).collect::<Vec<_>>()));
        }
        basis.push(x.clone());
    }
    let mut data = TateModuleData {
        place: v.clone(),
        n,
        m: k,
        field: big.clone(),
        modulus: w.clone(),
        basis,
        fixed_dim,
        frobenius: TMatrix::zero(&fq, 0, 0),
        pi: TMatrix::zero(&fq, 0, 0),
        fq: fq.clone(),
    };
    if fixed_dim != v.deg() as usize * n * r {
        return Ok(data);
    }
    let qe = fq.degree() * m.e();
    let vn = v.pow(n as u64);
    let frob_cols = data
        .basis
        .iter()
        .map(|b| data.coords(&b.iter().map(|p| p.frob(qe)).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    data.frobenius = TMatrix::from_cols(&fq, r, &frob_cols).rem(&vn);
    data.pi = data.map_matrix(&data, m.frobenius_matrix())?.rem(&vn);
    if !data.frobenius.mul(&data.pi).rem(&vn).is_identity() {
        return Err(Error::Internal("Frobenius does not invert Π on the Tate module".into()));
    }
    Ok(data)
}

// ---------------------------------------------------------------------------
// The lattice chain at ∞, in the parameter z = 1/t.

/// Laurent series Σ c_i z^{start+i}, known below the absolute exponent `prec`.
#[derive(Clone, Debug)]
pub struct Series {
    pub start: i64,
    pub coeffs: Vec<Fe>,
    pub prec: i64,
}

const EXACT: i64 = i64::MAX / 4;

impl Series {
    fn zero() -> Self {
        Series {
            start: 0,
            coeffs: vec![],
            prec: EXACT,
        }
    }
    /// Exact series of a polynomial in t.
    pub fn from_tpoly(p: &TPoly) -> Self {
        let d = p.deg();
        if d < 0 {
            return Self::zero();
        }
        let mut c: Vec<Fe> = p.coeffs().to_vec();
        c.reverse();
        Series {
            start: -d as i64,
            coeffs: c,
            prec: EXACT,
        }
        .normalized()
    }
    fn normalized(mut self) -> Self {
        let lead = self.coeffs.iter().position(|x| !x.is_zero()).unwrap_or(self.coeffs.len());
        self.coeffs.drain(..lead);
        self.start += lead as i64;
        let keep = (self.prec - self.start).max(0) as usize;
        self.coeffs.truncate(keep);
        while self.coeffs.last().is_some_and(|x| x.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
        self
    }
    fn coeff(&self, k: i64) -> Fe {
        let i = k - self.start;
        if i < 0 || i as usize >= self.coeffs.len() {
            Fe::ZERO
        } else {
            self.coeffs[i as usize]
        }
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Valuation, or None for a series that vanishes to its precision.
    pub fn val(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.start)
    }
    fn add(&self, o: &Self, l: &Field) -> Self {
        let prec = self.prec.min(o.prec);
        if self.is_zero() && o.is_zero() {
            return Series { prec, ..Self::zero() };
        }
        let lo = if self.is_zero() {
            o.start
        } else if o.is_zero() {
            self.start
        } else {
            self.start.min(o.start)
        };
        let hi = (self.start + self.coeffs.len() as i64).max(o.start + o.coeffs.len() as i64).min(prec);
        let c = (lo..hi.max(lo)).map(|k| l.add(self.coeff(k), o.coeff(k))).collect();
        Series { start: lo, coeffs: c, prec }.normalized()
    }
    fn neg(&self, l: &Field) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|&x| l.neg(x)).collect(),
            ..self.clone()
        }
    }
    fn mul(&self, o: &Self, l: &Field) -> Self {
        let vs = self.val().unwrap_or(self.prec.min(EXACT));
        let vo = o.val().unwrap_or(o.prec.min(EXACT));
        let prec = (self.prec.saturating_add(vo)).min(o.prec.saturating_add(vs)).min(EXACT);
        if self.is_zero() || o.is_zero() {
            return Series { prec, ..Self::zero() };
        }
        let start = self.start + o.start;
        let len = ((prec - start).max(0) as usize).min(self.coeffs.len() + o.coeffs.len());
        let mut c = vec![Fe::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                c[i + j] = l.add(c[i + j], l.mul(a, b));
            }
        }
        Series { start, coeffs: c, prec }.normalized()
    }
    /// Inverse, with relative precision `rel`.
    fn inv(&self, l: &Field, rel: i64) -> Result<Self> {
        let v = self.val().ok_or_else(|| Error::PrecisionInsufficient("inverting a vanishing series".into()))?;
        let avail = if self.prec >= EXACT { rel } else { (self.prec - v).min(rel) };
        let n = avail.max(1) as usize;
        let u0inv = l.inv(self.coeffs[0]);
        let mut out = vec![Fe::ZERO; n];
        out[0] = u0inv;
        for k in 1..n {
            let mut acc = Fe::ZERO;
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc = l.add(acc, l.mul(self.coeffs[j], out[k - j]));
            }
            out[k] = l.neg(l.mul(acc, u0inv));
        }
        Ok(Series {
            start: -v,
            coeffs: out,
            prec: -v + n as i64,
        }
        .normalized())
    }
    fn frob(&self, l: &Field, k: u32) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|&x| l.frob(x, k)).collect(),
            ..self.clone()
        }
    }
    fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Series {
                prec: self.prec.saturating_add(k).min(EXACT),
                ..Self::zero()
            };
        }
        Series {
            start: self.start + k,
            coeffs: self.coeffs.clone(),
            prec: if self.prec >= EXACT { EXACT } else { self.prec + k },
        }
    }
    /// Agreement to the joint precision.
    pub fn agrees(&self, o: &Self) -> bool {
        let prec = self.prec.min(o.prec);
        let lo = self.start.min(o.start);
        let hi = (self.start + self.coeffs.len() as i64).max(o.start + o.coeffs.len() as i64).min(prec);
        (lo..hi).all(|k| self.coeff(k) == o.coeff(k))
    }
}

/// Matrix over truncated Laurent series in z.
#[derive(Clone, Debug)]
pub struct SMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Series>,
}

impl SMat {
    fn zeros(rows: usize, cols: usize) -> Self {
        SMat {
            rows,
            cols,
            data: vec![Series::zero(); rows * cols],
        }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Series {
                start: 0,
                coeffs: vec![Fe::ONE],
                prec: EXACT,
            };
        }
        m
    }
    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.data[i * self.cols + j]
    }
    fn set(&mut self, i: usize, j: usize, s: Series) {
        self.data[i * self.cols + j] = s;
    }
    pub fn from_tmatrix(t: &TMatrix) -> Self {
        SMat {
            rows: t.rows(),
            cols: t.cols(),
            data: t.entries().iter().map(Series::from_tpoly).collect(),
        }
    }
    pub fn mul(&self, o: &SMat, l: &Field) -> SMat {
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Series::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(o.get(k, j), l), l);
                }
                out.set(i, j, acc);
            }
        }
        out
    }
    fn frob(&self, l: &Field, k: u32) -> SMat {
        SMat {
            data: self.data.iter().map(|s| s.frob(l, k)).collect(),
            ..self.clone()
        }
    }
    pub fn shift(&self, k: i64) -> SMat {
        SMat {
            data: self.data.iter().map(|s| s.shift(k)).collect(),
            ..self.clone()
        }
    }
    pub fn agrees(&self, o: &SMat) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data.iter().zip(&o.data).all(|(a, b)| a.agrees(b))
    }
    /// Minimum precision over all entries.
    pub fn precision(&self) -> i64 {
        self.data.iter().map(|s| s.prec).min().unwrap_or(EXACT)
    }
    /// Inverse by Gauss–Jordan with minimal-valuation pivots.
    fn inverse(&self, l: &Field, rel: i64) -> Result<SMat> {
        let n = self.rows;
        let mut a = self.clone();
        let mut b = SMat::identity(n);
        for c in 0..n {
            let piv = (c..n)
                .filter_map(|i| a.get(i, c).val().map(|v| (v, i)))
                .min()
                .ok_or_else(|| Error::PrecisionInsufficient("singular lattice basis".into()))?
                .1;
            for j in 0..n {
                a.data.swap(c * n + j, piv * n + j);
                b.data.swap(c * n + j, piv * n + j);
            }
            let inv = a.get(c, c).inv(l, rel)?;
            for j in 0..n {
                let x = a.get(c, j).mul(&inv, l);
                a.set(c, j, x);
                let y = b.get(c, j).mul(&inv, l);
                b.set(c, j, y);
            }
            for i in 0..n {
                if i == c || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..n {
                    let x = a.get(i, j).add(&f.mul(a.get(c, j), l).neg(l), l);
                    a.set(i, j, x);
                    let y = b.get(i, j).add(&f.mul(b.get(c, j), l).neg(l), l);
                    b.set(i, j, y);
                }
            }
        }
        Ok(b)
    }
}

/// An O_∞-lattice Λ with z^hi·O^r ⊂ Λ ⊂ z^lo·O^r, stored as the L-subspace
/// Λ/z^hi·O^r in coordinates (j − lo)·r + i for z^j e_i.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub r: usize,
    pub lo: i64,
    pub hi: i64,
    pub space: Echelon,
}

impl Lattice {
    /// Σ_g g·O_∞ for full-rank generators given as exact series columns with
    /// z^hi·O^r contained in the span.
    fn from_gens(l: &Field, r: usize, gens: &[Vec<Series>], hi: i64) -> Lattice {
        let lo = gens
            .iter()
            .flatten()
            .filter_map(|s| s.val())
            .min()
            .unwrap_or(hi)
            .min(hi);
        let dim = ((hi - lo) as usize) * r;
        let mut space = Echelon::new(dim);
        for g in gens {
            let vmin = g.iter().filter_map(|s| s.val()).min().unwrap_or(hi);
            for k in 0..(hi - vmin).max(0) {
                let mut v = vec![Fe::ZERO; dim];
                for (i, s) in g.iter().enumerate() {
                    for j in lo..hi {
                        let c = s.coeff(j - k);
                        if !c.is_zero() {
                            v[((j - lo) as usize) * r + i] = c;
                        }
                    }
                }
                space.insert(l, &v);
            }
        }
        Lattice { r, lo, hi, space }
    }
    /// L-dimension of z^lo·O^r / Λ.
    pub fn colength(&self) -> usize {
        ((self.hi - self.lo) as usize) * self.r - self.space.rank()
    }
    fn widen(&self, l: &Field, lo: i64, hi: i64) -> Lattice {
        let r = self.r;
        let dim = ((hi - lo) as usize) * r;
        let mut space = Echelon::new(dim);
        let off = ((self.lo - lo) as usize) * r;
        for v in self.space.vectors() {
            let mut w = vec![Fe::ZERO; dim];
            w[off..off + v.len()].copy_from_slice(&v);
            space.insert(l, &w);
        }
        for j in self.hi..hi {
            for i in 0..r {
                let mut w = vec![Fe::ZERO; dim];
                w[((j - lo) as usize) * r + i] = Fe::ONE;
                space.insert(l, &w);
            }
        }
        Lattice { r, lo, hi, space }
    }
    fn common(&self, o: &Lattice, l: &Field) -> (Lattice, Lattice) {
        let lo = self.lo.min(o.lo);
        let hi = self.hi.max(o.hi);
        (self.widen(l, lo, hi), o.widen(l, lo, hi))
    }
    pub fn contains(&self, o: &Lattice, l: &Field) -> bool {
        let (a, b) = self.common(o, l);
        b.space.vectors().iter().all(|v| a.space.contains(l, v))
    }
    pub fn equals(&self, o: &Lattice, l: &Field) -> bool {
        self.contains(o, l) && o.contains(self, l)
    }
    /// dim_L (self / o) for o ⊂ self.
    pub fn index_over(&self, o: &Lattice, l: &Field) -> usize {
        let (a, b) = self.common(o, l);
        a.space.rank() - b.space.rank()
    }
    /// z^k·Λ.
    pub fn shift(&self, k: i64) -> Lattice {
        Lattice {
            lo: self.lo + k,
            hi: self.hi + k,
            ..self.clone()
        }
    }
    /// Triangular O_∞-basis (columns), read off the echelon form.
    pub fn basis(&self, l: &Field) -> SMat {
        let r = self.r;
        let dim = ((self.hi - self.lo) as usize) * r;
        let mut m = Mat::from_rows(self.space.vectors());
        if m.rows == 0 {
            m = Mat::zeros(0, dim);
        }
        let piv = m.rref(l);
        let mut out = SMat::zeros(r, r);
        let mut done = vec![false; r];
        for (row, &p) in piv.iter().enumerate() {
            let i = p % r;
            if done[i] {
                continue;
            }
            done[i] = true;
            for (k, &c) in m.row(row).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (j, ii) = (self.lo + (k / r) as i64, k % r);
                let s = Series {
                    start: j,
                    coeffs: vec![c],
                    prec: EXACT,
                };
                let cur = out.get(ii, i).add(&s, l);
                out.set(ii, i, cur);
            }
        }
        for (i, d) in done.iter().enumerate() {
            if !d {
                out.set(
                    i,
                    i,
                    Series {
                        start: self.hi,
                        coeffs: vec![Fe::ONE],
                        prec: EXACT,
                    },
                );
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct LatticeChain {
    pub k: i64,
    pub l: usize,
    /// Λ_0 ⊂ Λ_1 ⊂ … ⊂ Λ_l with Λ_l = z^{−k}·Λ_0.
    pub lattices: Vec<Lattice>,
    pub coker_dims: Vec<usize>,
    /// τ as a matrix in t = 1/z.
    pub tau: TMatrix,
    frob: u32,
}

/// Default working precision 2(d + r) + 4.
pub fn default_precision(m: &Motive) -> usize {
    2 * (m.dim() + m.rank()) + 4
}

/// Λ_i = Σ_{j=i}^{i+l−1} T_j·σ^j(W) with T_j = T·σ(T)···σ^{j−1}(T), where
/// W = Σ_{n≥0} z^{kn}·T_{ln}·O_∞^r is the smallest lattice containing O_∞^r
/// with z^k·T_l·σ^l(W) = W.
pub fn infinity_filtration(m: &Motive, precision: usize) -> Result<LatticeChain> {
    let w: Rational64 = m.weight();
    let (k, l) = (*w.numer(), *w.denom() as usize);
    let r = m.rank();
    let fl = m.field().clone();
    let sig = m.sigma_exp();
    let mut tj = vec![TMatrix::identity(&fl, r)];
    let mut iterate = |j: usize| -> TMatrix {
        while tj.len() <= j {
            let n = tj.len();
            let next = tj[n - 1].mul(&m.matrix().frob(sig * (n as u32 - 1)));
            tj.push(next);
        }
        tj[j].clone()
    };
    // Σ z^s·T_j·O^r over the given (j, s)
    let mut span = |terms: &[(usize, i64)]| -> Result<Lattice> {
        let mut gens = Vec::new();
        let mut hi = i64::MAX;
        for &(j, s) in terms {
            let t = iterate(j);
            // z^c·O^r ⊂ T·O^r iff c ≥ deg adj(T)_{ab} − deg det T
            let det = t.det().deg() as i64;
            let adj = t.adjugate();
            let c = adj.entries().iter().map(|p| p.deg() as i64).max().unwrap_or(0) - det;
            hi = hi.min(c + s);
            for a in 0..r {
                gens.push(t.col(a).iter().map(|p| Series::from_tpoly(p).shift(s)).collect::<Vec<_>>());
            }
        }
        let lat = Lattice::from_gens(&fl, r, &gens, hi);
        if (lat.hi - lat.lo) as usize > precision {
            return Err(Error::PrecisionInsufficient(format!(
                "lattice window {} exceeds precision {precision}",
                lat.hi - lat.lo
            )));
        }
        Ok(lat)
    };
    // W_N = Σ_{n≤N} z^{kn}·T_{ln}·O^r; W_N = W_{N+1} forces W_N = W
    let mut depth = 0;
    let mut prev = span(&[(0, 0)])?;
    loop {
        let terms: Vec<(usize, i64)> = (0..=depth + 1).map(|n| (l * n, k * n as i64)).collect();
        let next = span(&terms)?;
        if next.equals(&prev, &fl) {
            break;
        }
        prev = next;
        depth += 1;
    }
    let lattice = |i: usize, span: &mut dyn FnMut(&[(usize, i64)]) -> Result<Lattice>| -> Result<Lattice> {
        let terms: Vec<(usize, i64)> = (i..i + l)
            .flat_map(|j| (0..=depth).map(move |n| (j + l * n, k * n as i64)))
            .collect();
        span(&terms)
    };
    let lats = (0..=l).map(|i| lattice(i, &mut span)).collect::<Result<Vec<_>>>()?;
    let mut dims = Vec::new();
    for i in 0..l {
        if !lats[i + 1].contains(&lats[i], &fl) {
            return Err(Error::PrecisionInsufficient("lattice chain is not increasing".into()));
        }
        dims.push(lats[i + 1].index_over(&lats[i], &fl));
    }
    if !lats[l].equals(&lats[0].shift(-k), &fl) {
        return Err(Error::PrecisionInsufficient("periodicity Λ_l = z^-k Λ_0 not certified".into()));
    }
    // one more period step as a cross-check
    if !lattice(l + 1, &mut span)?.equals(&lats[1].shift(-k), &fl) {
        return Err(Error::PrecisionInsufficient("periodicity not certified at Λ_(l+1)".into()));
    }
    Ok(LatticeChain {
        k,
        l,
        lattices: lats,
        coker_dims: dims,
        tau: m.matrix().clone(),
        frob: sig,
    })
}

/// τ̃, Π and Λ(·) on Λ_0 ⊕ … ⊕ Λ_{l−1} at ∞.
#[derive(Clone, Debug)]
pub struct BigShtuka {
    pub l: usize,
    pub k: i64,
    pub tau: SMat,
    pub pi: SMat,
    field: Field,
    frob: u32,
}

impl BigShtuka {
    /// Λ(λ) = diag(λ, λ^q, …, λ^{q^{l−1}}) on the blocks.
    pub fn lambda(&self, lambda: Fe, r: usize) -> SMat {
        let n = self.l * r;
        let mut m = SMat::zeros(n, n);
        for b in 0..self.l {
            let x = self.field.frob(lambda, self.sig_exp() * b as u32);
            for i in 0..r {
                m.set(
                    b * r + i,
                    b * r + i,
                    Series {
                        start: 0,
                        coeffs: vec![x],
                        prec: EXACT,
                    }
                    .normalized(),
                );
            }
        }
        m
    }
    fn sig_exp(&self) -> u32 {
        self.frob
    }
    /// Π^l = z^k.
    pub fn check_pi_power(&self) -> bool {
        let mut p = SMat::identity(self.pi.rows);
        for _ in 0..self.l {
            p = p.mul(&self.pi, &self.field);
        }
        p.agrees(&SMat::identity(self.pi.rows).shift(self.k))
    }
    /// Π·Λ(λ^q) = Λ(λ)·Π.
    pub fn check_lambda(&self, lambda: Fe, r: usize) -> bool {
        let lq = self.field.frob(lambda, self.sig_exp());
        let a = self.pi.mul(&self.lambda(lq, r), &self.field);
        let b = self.lambda(lambda, r).mul(&self.pi, &self.field);
        a.agrees(&b)
    }
}

/// The big shtuka at ∞ attached to a lattice chain, at relative precision
/// `precision` for the inverted lattice bases.
pub fn big_shtuka_infinity(chain: &LatticeChain, precision: usize) -> Result<BigShtuka> {
    let l = chain.l;
    if l == 0 {
        return Err(Error::Invalid("empty lattice chain".into()));
    }
    let fl = chain.tau.field().clone();
    let r = chain.tau.rows();
    let rel = precision as i64;
    let bases: Vec<SMat> = chain.lattices[..l].iter().map(|x| x.basis(&fl)).collect();
    let inv: Vec<SMat> = bases.iter().map(|b| b.inverse(&fl, rel)).collect::<Result<_>>()?;
    let t = SMat::from_tmatrix(&chain.tau);
    let n = l * r;
    let mut tau = SMat::zeros(n, n);
    let mut pi = SMat::zeros(n, n);
    let put = |m: &mut SMat, bi: usize, bj: usize, blk: &SMat| {
        for i in 0..r {
            for j in 0..r {
                m.set(bi * r + i, bj * r + j, blk.get(i, j).clone());
            }
        }
    };
    for i in 0..l {
        let src = &bases[i];
        let (dst_inv, bi, scale) = if i + 1 < l { (&inv[i + 1], i + 1, 0) } else { (&inv[0], 0, chain.k) };
        // τ_i : σ*Λ_i → Λ_{i+1}, and the inclusion Λ_i ⊂ Λ_{i+1}
        let ti = dst_inv.mul(&t.mul(&src.frob(&fl, chain.frob), &fl), &fl).shift(scale);
        let pii = dst_inv.mul(src, &fl).shift(scale);
        put(&mut tau, bi, i, &ti);
        put(&mut pi, bi, i, &pii);
    }
    let out = BigShtuka {
        l,
        k: chain.k,
        tau,
        pi,
        field: fl,
        frob: chain.frob,
    };
    if !out.check_pi_power() {
        return Err(Error::PrecisionInsufficient("Π^l = z^k not verified".into()));
    }
    Ok(out)
}
