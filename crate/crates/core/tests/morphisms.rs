mod common;

use anderson::error::Error;
use anderson::morphisms::*;
use anderson::motive::{fields, Motive};
use anderson::{TMatrix, TPoly};
use common::*;

fn carlitz(q: u64, e: u32, theta: u64) -> Motive {
    let (_, l) = fields(q, e).unwrap();
    let th = l.decode(theta).unwrap();
    Motive::validate(q, e, th, TMatrix::from_rows(&l, vec![vec![TPoly::linear(&l, th)]])).unwrap()
}

fn swap_d1() -> Motive {
    motive("q 3\ne 1\ntheta 0\nr 2\nrow [0];[1]\nrow [0,1];[0]\n")
}

#[test]
fn carlitz_end_matches_brute_force() {
    let m = carlitz(3, 1, 1);
    let hb = solve_hom(&m, &m).unwrap();
    assert_eq!(hb.rank, 1);
    assert_eq!(hb.gens[0].f.max_deg(), 0);
    let gens: Vec<TMatrix> = hb.gens.iter().map(|g| g.f.clone()).collect();
    let oracle = brute_force_hom(&m, &m, 3);
    assert_eq!(oracle.len(), 81);
    assert_eq!(solver_span(&gens, 3, m.field(), (1, 1)), oracle);
}

#[test]
fn swap_end_matches_brute_force() {
    let m = swap_d1();
    let gens: Vec<TMatrix> = solve_hom(&m, &m).unwrap().gens.into_iter().map(|g| g.f).collect();
    assert_eq!(gens.len(), 2);
    assert_eq!(solver_span(&gens, 2, m.field(), (2, 2)), brute_force_hom(&m, &m, 2));
}

#[test]
fn different_weights_have_no_morphisms() {
    let m = swap_d1();
    let c = carlitz(3, 1, 0);
    assert_eq!(solve_hom(&m, &c).unwrap().rank, 0);
    assert_eq!(solve_hom(&c, &m).unwrap().rank, 0);
}

#[test]
fn every_generator_intertwines() {
    let m = motive("q 3\ne 3\ntheta 1\nr 2\nrow [1,2];[0]\nrow [0,1];[1,2]\n");
    let hb = solve_hom(&m, &m).unwrap();
    assert_eq!(hb.rank, 4);
    for g in &hb.gens {
        assert!(residual(&m, &m, &g.f).is_zero());
    }
}

#[test]
fn isogeny_test_and_elementary_divisors() {
    let m = swap_d1();
    let fq = m.base().clone();
    assert!(is_isogeny(&Morphism::scalar(&m, &poly_fq(&fq, &[1, 1]))));
    let zero = Morphism::new(&m, &m, TMatrix::zero(m.field(), 2, 2)).unwrap();
    assert!(!is_isogeny(&zero));

    // f = [[t, 0], [γ, 1]] with γ ∈ F_9 \ F_3 is an endomorphism of
    // diag(t, γ^{-2} t): γ = c·γ^3 forces c = γ^{-2}
    let (_, l) = fields(3, 2).unwrap();
    let g = l.gen();
    let c = l.inv(l.mul(g, g));
    let t = TPoly::t(&l);
    let tm = TMatrix::diag(&l, &[t.clone(), t.scale(c)]);
    let m = Motive::validate(3, 2, l.zero(), tm).unwrap();
    let f = TMatrix::from_rows(&l, vec![vec![t.clone(), TPoly::zero(&l)], vec![TPoly::constant(&l, g), TPoly::one(&l)]]);
    let f = Morphism::new(&m, &m, f).unwrap();
    assert!(is_isogeny(&f));
    let d = isogeny_data(&f).unwrap();
    assert_eq!(d.coker_dim, 1);
    assert_eq!(d.elementary_divisors, vec![TPoly::one(&l), t]);
}

#[test]
fn degrees_on_carlitz() {
    let m = carlitz(5, 1, 2);
    let fq = m.base().clone();
    let t = poly_fq(&fq, &[0, 1]);
    let eps = poly_fq(&fq, &[-2, 1]);
    let d = isogeny_data(&Morphism::scalar(&m, &t)).unwrap();
    assert_eq!((d.degree.clone(), d.kind), (t.clone(), IsogenyKind::Separable));
    assert_eq!(d.separable_part, t);
    let d = isogeny_data(&Morphism::scalar(&m, &eps)).unwrap();
    assert_eq!((d.degree.clone(), d.kind), (eps.clone(), IsogenyKind::PurelyInseparable));
    assert_eq!(d.inseparable_part, eps);

    let f = Morphism::scalar(&m, &t.mul_ref(&eps));
    let d = isogeny_data(&f).unwrap();
    assert_eq!(d.kind, IsogenyKind::Mixed);
    let (s, i) = sep_insep_factorization(&f).unwrap();
    assert_eq!(i.compose(&s).f, f.f);
    assert_eq!(isogeny_data(&s).unwrap().degree, t);
    assert_eq!(isogeny_data(&i).unwrap().degree, eps);
}

#[test]
fn separable_and_inseparable_factors_are_trivial_when_pure() {
    let m = swap_d1();
    let fq = m.base().clone();
    let f = Morphism::scalar(&m, &poly_fq(&fq, &[1, 1]));
    let (_, i) = sep_insep_factorization(&f).unwrap();
    assert_eq!(i.f.det().deg(), 0);
    let f = Morphism::scalar(&m, &poly_fq(&fq, &[0, 1]));
    let (s, _) = sep_insep_factorization(&f).unwrap();
    assert_eq!(s.f.det().deg(), 0);
}

#[test]
fn degree_of_frobenius() {
    // ε = t, d = 1, e = 2
    let m = motive("q 3\ne 2\ntheta 0\nr 2\nrow [0];[1]\nrow [0,1];[0]\n");
    let fq = m.base().clone();
    assert_eq!(m.frobenius_matrix(), &TMatrix::scalar(m.field(), 2, &TPoly::t(m.field())));
    let d = isogeny_data(&Morphism::frobenius(&m)).unwrap();
    assert_eq!(d.degree, poly_fq(&fq, &[0, 0, 1]));
    assert_eq!(d.degree, norm(&Morphism::frobenius(&m)).unwrap().1);
}

#[test]
fn norms_and_duals() {
    let m = swap_d1();
    let fq = m.base().clone();
    let t = poly_fq(&fq, &[0, 1]);
    let a = poly_fq(&fq, &[2, 1, 1]);
    assert_eq!(norm(&Morphism::scalar(&m, &a)).unwrap().0, a.mul_ref(&a));

    let (dual, a) = dual_isogeny(&Morphism::scalar(&m, &t)).unwrap();
    assert_eq!(a, t.mul_ref(&t));
    assert_eq!(dual.f, Morphism::scalar(&m, &t).f);

    let pi = Morphism::frobenius(&m);
    let (dual, a) = dual_isogeny(&pi).unwrap();
    assert_eq!(a, poly_fq(&fq, &[0, -1]));
    let al = Morphism::scalar(&m, &a).f;
    assert_eq!(pi.compose(&dual).f, al);
    assert_eq!(dual.compose(&pi).f, al);
    // (π∨)∨ = π here since a has degree 1 and N(π∨) = a
    let (dd, b) = dual_isogeny(&dual).unwrap();
    assert_eq!(b, a);
    assert_eq!(dd.f, pi.f);
}

#[test]
fn kernel_and_image() {
    let m = swap_d1();
    let fq = m.base().clone();
    let ki = kernel_image(&Morphism::scalar(&m, &poly_fq(&fq, &[0, 1]))).unwrap();
    assert!(ki.kernel.is_none());
    assert_eq!(ki.image.unwrap().rank(), 2);

    let a = carlitz(3, 1, 0);
    let b = motive("q 3\ne 1\ntheta 0\nr 1\nrow [0,2]\n");
    let s = a.direct_sum(&b).unwrap();
    let l = s.field().clone();
    let proj = TMatrix::from_rows(&l, vec![vec![TPoly::zero(&l), TPoly::one(&l)]]);
    let ki = kernel_image(&Morphism::new(&s, &b, proj).unwrap()).unwrap();
    assert_eq!(ki.kernel.as_ref().unwrap().matrix(), a.matrix());
    assert_eq!(ki.image.as_ref().unwrap().matrix(), b.matrix());
    let inc = ki.kernel_inclusion.unwrap();
    assert!(inc.intertwines());
}

#[test]
fn extension_quotient() {
    // T = [[1−t, 0], [t, 1−t]]; the second basis vector spans a sub-motive
    // and the first coordinate is the quotient, both with τ = 1 − t
    let m = motive("q 3\ne 1\ntheta 1\nr 2\nrow [1,2];[0]\nrow [0,1];[1,2]\n");
    let quot = motive("q 3\ne 1\ntheta 1\nr 1\nrow [1,2]\n");
    let l = m.field().clone();
    let psi = TMatrix::from_rows(&l, vec![vec![TPoly::one(&l), TPoly::zero(&l)]]);
    let ki = kernel_image(&Morphism::new(&m, &quot, psi).unwrap()).unwrap();
    assert_eq!(ki.image.unwrap().matrix(), quot.matrix());
    assert_eq!(ki.kernel.unwrap().matrix(), quot.matrix());
}

#[test]
fn quotients_by_torsion() {
    let m = swap_d1();
    let fq = m.base().clone();
    let a = poly_fq(&fq, &[1, 1]);
    let (sub, inc) = factor_by_quotient(&m, &TorsionQuotient::principal(&m, &a)).unwrap();
    assert_eq!(sub.rank(), 2);
    let al = TPoly::from_coeffs(m.field(), a.coeffs().to_vec());
    assert!(inc.f.entries().iter().all(|p| al.divides(p)));
    assert_eq!(inc.f.det().monic(), al.mul_ref(&al));

    let id = Morphism::identity(&m);
    let (_, inc) = factor_by_quotient(&m, &TorsionQuotient::from_isogeny(&id).unwrap()).unwrap();
    assert_eq!(inc.f.det().deg(), 0);

    let c = carlitz(3, 2, 3);
    assert_ne!(c.field().frob(c.theta(), 1), c.theta());
    let k = TorsionQuotient::coker_tau_zero(&c).unwrap();
    assert!(matches!(factor_by_quotient(&c, &k), Err(Error::BadQuotient(_))));
}

/// X with g = inc·X, required to be an isomorphism M → M^I.
fn isomorphism_onto(m: &Motive, inc: &Morphism, g: &TMatrix) -> Morphism {
    let det = inc.f.det();
    let x = inc.f.adjugate().mul(g).map(|p| p.div_exact(&det).expect("g factors through the image"));
    let x = Morphism::new(m, &inc.src, x).unwrap();
    assert_eq!(x.f.det().deg(), 0);
    x
}

#[test]
fn ideal_images() {
    let m = swap_d1();
    let fq = m.base().clone();
    let end: Vec<Morphism> = solve_hom(&m, &m).unwrap().gens;
    let a = poly_fq(&fq, &[0, 1]);
    let sa = Morphism::scalar(&m, &a);
    let ia: Vec<Morphism> = end.iter().map(|g| sa.compose(g)).collect();
    let img = ideal_image(&m, &ia).unwrap();
    assert!(img.kernel_ideal);
    isomorphism_onto(&m, &img.inclusion, &sa.f);

    let pi = Morphism::frobenius(&m);
    let ip: Vec<Morphism> = end.iter().map(|g| pi.compose(g)).collect();
    let img = ideal_image(&m, &ip).unwrap();
    assert!(img.kernel_ideal);
    isomorphism_onto(&m, &img.inclusion, &pi.f);

    let unit = ideal_image(&m, &end).unwrap();
    assert_eq!(unit.inclusion.f.det().deg(), 0);

    let zero = Morphism::new(&m, &m, TMatrix::zero(m.field(), 2, 2)).unwrap();
    assert!(matches!(ideal_image(&m, &[zero]), Err(Error::NoIsogenyInIdeal)));
}
