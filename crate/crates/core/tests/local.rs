mod common;

use anderson::error::Error;
use anderson::local::*;
use anderson::morphisms::solve_hom;
use anderson::motive::{fields, Motive};
use anderson::{Field, TMatrix, TPoly};
use common::*;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn carlitz(q: u64, e: u32, theta: u64) -> Motive {
    let (_, l) = fields(q, e).unwrap();
    let th = l.decode(theta).unwrap();
    Motive::validate(q, e, th, TMatrix::from_rows(&l, vec![vec![TPoly::linear(&l, th)]])).unwrap()
}

fn swap(q: u64, e: u32) -> Motive {
    motive(&format!("q {q}\ne {e}\ntheta 0\nr 2\nrow [0];[1]\nrow [0,1];[0]\n"))
}

/// Number of x ∈ (L[t]/w)^r with x = A·σ^s(x) mod w, by enumeration.
fn count_fixed(a: &TMatrix, w: &TPoly, frob: u32) -> usize {
    let l = a.field().clone();
    let r = a.rows();
    let polys = all_polys(&l, w.deg() as usize - 1);
    let mut idx = vec![0usize; r];
    let mut count = 0;
    loop {
        let x: Vec<TPoly> = idx.iter().map(|&i| polys[i].clone()).collect();
        let sx: Vec<TPoly> = x.iter().map(|p| p.frob(frob)).collect();
        let y: Vec<TPoly> = a.mul_vec(&sx).iter().map(|p| p.rem(w)).collect();
        if y == x {
            count += 1;
        }
        let mut k = 0;
        while k < r && idx[k] + 1 == polys.len() {
            idx[k] = 0;
            k += 1;
        }
        if k == r {
            return count;
        }
        idx[k] += 1;
    }
}

#[test]
fn localization_and_etaleness() {
    let m = carlitz(3, 1, 1);
    let fq = m.base().clone();
    let s = localize(&m, &poly_fq(&fq, &[0, 1]), 1).unwrap();
    assert!(s.etale);
    assert_eq!(s.matrix, TMatrix::scalar(m.field(), 1, &poly_fq(&fq, &[-1])));
    let s = localize(&m, &m.epsilon(), 1).unwrap();
    assert!(!s.etale);
    assert!(s.matrix.is_zero());

    let m = swap(3, 1);
    let s = localize(&m, &poly_fq(&fq, &[-1, 1]), 2).unwrap();
    assert!(s.etale);
    assert_eq!(s.length(), 4);
}

#[test]
fn etale_nilpotent_splitting() {
    let (_, l) = fields(3, 1).unwrap();
    let th = l.from_int(1);
    let eps = TPoly::linear(&l, th);
    let d = TMatrix::diag(&l, &[eps.clone(), TPoly::constant(&l, l.from_int(2))]);
    let s = LocalShtuka::from_matrix(&eps, 1, &d, 1).unwrap();
    let en = etale_nil_decompose(&s, &eps).unwrap();
    assert_eq!((en.etale_dim, en.nil_dim), (1, 1));

    let c = carlitz(3, 1, 1);
    let s = localize(&c, &c.epsilon(), 2).unwrap();
    let en = etale_nil_decompose(&s, &c.epsilon()).unwrap();
    assert_eq!((en.etale_dim, en.nil_dim), (0, 2));

    let id = TMatrix::identity(&l, 2);
    let s = LocalShtuka::from_matrix(&eps, 1, &id, 1).unwrap();
    let en = etale_nil_decompose(&s, &eps).unwrap();
    assert_eq!((en.etale_dim, en.nil_dim), (2, 0));

    let s = localize(&c, &poly_fq(c.base(), &[0, 1]), 1).unwrap();
    assert_eq!(etale_nil_decompose(&s, &c.epsilon()).unwrap_err(), Error::NotCharacteristicPlace);
}

#[test]
fn reduction_to_one_factor_preserves_fixed_points() {
    // v = t^2 + t + 1 splits over F_4
    let m = swap(2, 2);
    let fq = m.base().clone();
    let v = poly_fq(&fq, &[1, 1, 1]);
    let s = localize(&m, &v, 1).unwrap();
    let red = reduce_mod_a0(&s, &fq).unwrap();
    assert_eq!(red.modulus.deg(), 1);
    let full = count_fixed(&s.matrix, &s.modulus, s.frob_exp());
    let part = count_fixed(&red.matrix, &red.modulus, red.frob_exp());
    assert_eq!(full, part);
    assert_eq!(full as u64, fq.size().pow(s.fixed_dim(&fq).unwrap() as u32));
    assert_eq!(part as u64, fq.size().pow(red.fixed_dim(&fq).unwrap() as u32));

    // v coprime to deg: nothing to do
    let c = carlitz(2, 1, 0);
    let s = localize(&c, &poly_fq(c.base(), &[1, 1, 1]), 1).unwrap();
    assert_eq!(reduce_mod_a0(&s, c.base()).unwrap().modulus, s.modulus);
}

#[test]
fn reduction_at_the_characteristic_composes_to_pi() {
    // θ a generator of F_4, so ε = t^2 + t + 1 has degree 2
    let m = carlitz(2, 2, 2);
    let fq = m.base().clone();
    assert_eq!(m.epsilon().deg(), 2);
    let s = localize(&m, &m.epsilon(), 2).unwrap();
    let red = reduce_mod_a0(&s, &fq).unwrap();
    assert_eq!(red.matrix, m.frobenius_matrix().rem(&red.modulus));
}

#[test]
fn carlitz_tate_module() {
    // x = (0 − 1)·x^3: x^2 = −1 first has roots in F_9
    let m = carlitz(3, 1, 1);
    let fq = m.base().clone();
    let v = poly_fq(&fq, &[0, 1]);
    let t = tate_module(&m, &v, 1).unwrap();
    assert_eq!((t.m, t.fixed_dim), (2, 1));
    assert_eq!(t.frobenius, TMatrix::scalar(&fq, 1, &poly_fq(&fq, &[-1])));

    let (_, f9) = fields(3, 2).unwrap();
    let minus_one = f9.from_int(-1);
    let sols = f9.elements().filter(|&x| x == f9.mul(minus_one, f9.pow(x, 3))).count();
    assert_eq!(sols, 3);
}

#[test]
fn tate_modules_of_random_motives() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for _ in 0..6 {
        let r = rng.gen_range(1..=2);
        let m = random_motive(&mut rng, 3, 1, r, 2);
        let fq = m.base().clone();
        let v = (0..3).map(|c| poly_fq(&fq, &[c, 1])).find(|v| *v != m.epsilon()).unwrap();
        for n in 1..=2 {
            let t = tate_module(&m, &v, n).unwrap();
            assert_eq!(t.fixed_dim, n * r);
            let vn = v.pow(n as u64);
            assert!(t.frobenius.mul(&t.pi).map(|p| p.rem(&vn)).is_identity());
        }
    }
}

/// Number of X ∈ M_r(F_q) with X·A = A·X for every A in `mats`.
fn commutant_size(fq: &Field, r: usize, mats: &[TMatrix]) -> usize {
    let polys = all_polys(fq, 0);
    let mut idx = vec![0usize; r * r];
    let mut count = 0;
    loop {
        let rows: Vec<Vec<TPoly>> = (0..r).map(|i| (0..r).map(|j| polys[idx[i * r + j]].clone()).collect()).collect();
        let x = TMatrix::from_rows(fq, rows);
        if mats.iter().all(|a| x.mul(a) == a.mul(&x)) {
            count += 1;
        }
        let mut k = 0;
        while k < r * r && idx[k] + 1 == polys.len() {
            idx[k] = 0;
            k += 1;
        }
        if k == r * r {
            return count;
        }
        idx[k] += 1;
    }
}

#[test]
fn endomorphisms_mod_v_fill_the_commutant() {
    let m = swap(3, 1);
    let fq = m.base().clone();
    let v = poly_fq(&fq, &[-1, 1]);
    let t = tate_module(&m, &v, 1).unwrap();
    let frob = t.frobenius.map(|p| p.rem(&v));
    let size = commutant_size(&fq, 2, &[frob.clone()]);
    let end = solve_hom(&m, &m).unwrap();
    assert_eq!(size as u64, fq.size().pow(end.rank as u32));
    for g in &end.gens {
        let h = t.map_matrix(&t, &g.f).unwrap().map(|p| p.rem(&v));
        assert_eq!(h.mul(&frob).map(|p| p.rem(&v)), frob.mul(&h).map(|p| p.rem(&v)));
    }
}

#[test]
fn lattice_chains_at_infinity() {
    let m = swap(3, 1);
    let ch = infinity_filtration(&m, default_precision(&m)).unwrap();
    assert_eq!((ch.k, ch.l, ch.coker_dims.clone()), (1, 2, vec![1, 1]));

    let c = carlitz(3, 1, 1);
    let ch = infinity_filtration(&c, default_precision(&c)).unwrap();
    assert_eq!((ch.k, ch.l), (1, 1));

    let mut rng = ChaCha8Rng::seed_from_u64(72);
    for _ in 0..10 {
        let r = rng.gen_range(1..=3);
        let e = rng.gen_range(1..=2);
        let m = random_motive(&mut rng, 2, e, r, 2);
        let ch = infinity_filtration(&m, default_precision(&m)).unwrap();
        assert_eq!(Rational64::new(ch.k, ch.l as i64), m.weight());
        assert_eq!(ch.coker_dims.iter().sum::<usize>(), ch.k as usize * r);
        let fl = m.field();
        for w in ch.lattices.windows(2) {
            assert!(w[1].contains(&w[0], fl));
        }
        assert!(ch.lattices[ch.l].equals(&ch.lattices[0].shift(-ch.k), fl));
    }
}

#[test]
fn big_shtuka() {
    let m = swap(3, 2);
    let ch = infinity_filtration(&m, default_precision(&m)).unwrap();
    let bs = big_shtuka_infinity(&ch, 8).unwrap();
    assert_eq!((bs.tau.rows, bs.tau.cols), (4, 4));
    assert!(bs.check_pi_power());
    let g = m.field().gen();
    assert!(bs.check_lambda(g, 2));

    let d = motive("q 3\ne 1\ntheta 2\nr 2\nrow [1];[1,1]\nrow [1];[0]\n");
    let ch = infinity_filtration(&d, default_precision(&d)).unwrap();
    let bs = big_shtuka_infinity(&ch, 8).unwrap();
    assert!(bs.check_pi_power());
}
