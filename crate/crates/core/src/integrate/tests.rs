use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::*;
use crate::linalg::factorial;
use crate::polyhedra::{dilate_to_integer, Polytope, Simplex, SimplicialCone};
use crate::polynomial::{decompose_monomial, ExponentVector, LinearFormSum};
use crate::Point;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn pt(v: &[i64]) -> Point {
    v.iter().map(|&x| q(x, 1)).collect()
}

fn form(v: &[i64]) -> Vec<Rational> {
    pt(v)
}

fn single(coef: Rational, power: u32, l: &[i64]) -> LinearFormSum {
    let mut f = LinearFormSum::new(l.len());
    f.add_term(coef, power, form(l));
    f
}

fn standard_simplex(d: usize) -> Polytope {
    let mut verts = vec![vec![q(0, 1); d]];
    for i in 0..d {
        let mut v = vec![q(0, 1); d];
        v[i] = q(1, 1);
        verts.push(v);
    }
    Polytope::from_vertices(d, verts).unwrap()
}

fn pentagon() -> Polytope {
    Polytope::from_vertices(2, vec![pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2]), pt(&[3, 1]), pt(&[1, 3])]).unwrap()
}

fn square() -> Polytope {
    Polytope::from_vertices(2, vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])]).unwrap()
}

fn both(p: &Polytope, f: &LinearFormSum) -> (Rational, Rational) {
    let t = integrate_via_triangulation(p, f).unwrap();
    let c = integrate_via_cone_decomposition(p, f, IntegrationOptions::default()).unwrap();
    (t, c)
}

#[test]
fn pentagon_area_and_high_power() {
    let p = pentagon();
    assert_eq!(volume_triangulation(&p).unwrap(), q(6, 1));
    assert_eq!(volume_cone_decomposition(&p, IntegrationOptions::default()).unwrap(), q(6, 1));

    let f = single(q(1, 1), 100, &[3, 5]);
    let (t, c) = both(&p, &f);
    let numerator: BigInt = "2272763693868996638935888674032202338331678429593822654741945853115019517044815807828554973991981183769557979672803164125396992"
        .parse()
        .unwrap();
    assert_eq!(t, Rational::new(numerator, BigInt::from(1717)));
    assert_eq!(t, c);
}

#[test]
fn triangle_residue_case() {
    let s = Simplex::new(vec![pt(&[1, 1]), pt(&[0, 1]), pt(&[1, 0])]).unwrap();
    let l = form(&[1, 1]);
    assert_eq!(integrate_simplex_regular(&l, 1, &s), Err(ComputeError::RegularityViolation));
    assert_eq!(integrate_simplex_residue(&l, 1, &s).unwrap(), q(2, 3));

    let p = Polytope::from_vertices(2, s.vertices().to_vec()).unwrap();
    let (t, c) = both(&p, &single(q(1, 1), 1, &[1, 1]));
    assert_eq!((t, c), (q(2, 3), q(2, 3)));

    // the constant integrand through the single pole at zero
    let std2 = Simplex::new(vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]).unwrap();
    assert_eq!(integrate_simplex_residue(&form(&[0, 0]), 0, &std2).unwrap(), q(1, 2));
    // ∫ x + 2y over the standard triangle is 1/6 + 2/6
    assert_eq!(integrate_simplex_regular(&form(&[1, 2]), 1, &std2).unwrap(), q(1, 2));
}

#[test]
fn residue_with_rational_values() {
    let s = Simplex::new(vec![pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 3])]).unwrap();
    // l = (1/2, 1/3) takes the value 1 at two vertices
    let l = vec![q(1, 2), q(1, 3)];
    let direct = integrate_simplex_residue(&l, 3, &s).unwrap();
    // oracle: expand (x/2 + y/3)^3 into monomials, integrate over 2 x 3 scaled triangle
    // ∫ x^a y^b over conv{0, 2e1, 3e2} = 2^(a+1) 3^(b+1) a! b! / (a+b+2)!
    let mono = |a: u32, b: u32| -> Rational {
        Rational::from_integer(
            BigInt::from(2).pow(a + 1) * BigInt::from(3).pow(b + 1) * factorial(a.into()) * factorial(b.into()),
        ) / Rational::from_integer(factorial(u64::from(a + b) + 2))
    };
    let mut oracle = Rational::zero();
    for a in 0..=3u32 {
        let b = 3 - a;
        let c = Rational::from_integer(crate::linalg::binomial(3, a.into()))
            * crate::linalg::rational_pow(&l[0], a.into())
            * crate::linalg::rational_pow(&l[1], b.into());
        oracle += c * mono(a, b);
    }
    assert_eq!(direct, oracle);
    // a perturbed form is regular, and both paths agree
    let r = vec![q(1, 2), q(2, 7)];
    assert_eq!(
        integrate_simplex_residue(&r, 4, &s).unwrap(),
        integrate_simplex_regular(&r, 4, &s).unwrap()
    );
}

#[test]
fn square_cone_contributions() {
    let p = square();
    let plan = ConePlan::new(&p, IntegrationOptions::default()).unwrap();
    let cones = plan.cones();
    assert_eq!(cones.len(), 4);
    let at = |v: &[i64]| cones.iter().find(|c| c.apex() == pt(v).as_slice()).unwrap();

    let l = form(&[1, 2]);
    let values: Vec<Rational> = [[0, 0], [1, 0], [0, 1], [1, 1]]
        .iter()
        .map(|v| integrate_cone_regular(&l, 0, at(v)).unwrap())
        .collect();
    assert_eq!(values, vec![q(0, 1), q(-1, 4), q(-1, 1), q(9, 4)]);

    // ∫ x with the perturbation (ε, ε)
    let l = form(&[1, 0]);
    let a = PerturbationVector::from_components(vec![BigInt::one(), BigInt::one()]);
    let got: Vec<Rational> = [[0, 0], [0, 1], [1, 0], [1, 1]]
        .iter()
        .map(|v| integrate_cone_residue(&l, 1, &a, at(v)).unwrap())
        .collect();
    assert_eq!(got, vec![q(0, 1), q(0, 1), q(-2, 6), q(5, 6)]);
    assert_eq!(got.iter().sum::<Rational>(), q(1, 2));

    let f = single(q(1, 1), 1, &[1, 0]);
    assert_eq!(plan.integrate(&f).unwrap(), q(1, 2));
    assert_eq!(plan.integrate_term_with(f.iter().next().unwrap(), &a).unwrap(), q(1, 2));
}

#[test]
fn cone_at_origin_vanishes() {
    let c = SimplicialCone::new(pt(&[0, 0]), vec![vec![1.into(), 0.into()], vec![0.into(), 1.into()]]).unwrap();
    assert!(integrate_cone_regular(&form(&[1, 2]), 3, &c).unwrap().is_zero());
}

#[test]
fn perturbation_choices() {
    let p = square();
    let plan = ConePlan::new(&p, IntegrationOptions::default()).unwrap();
    let l = form(&[1, 0]);
    let cones: Vec<&SimplicialCone> = plan.cones().iter().collect();
    let mut rng = IntegrationOptions::default().rng_for(0);
    let a = pick_perturbation(&l, &cones, &mut rng, 64).unwrap();
    assert_eq!(a.components[0], BigInt::one());
    assert_eq!(a.components[1], -BigInt::from(a.seed));

    let d1 = PerturbationVector::moment_curve(7, 1);
    assert_eq!(d1.components, vec![BigInt::one()]);
    let d4 = PerturbationVector::moment_curve(3, 4);
    assert_eq!(d4.components, vec![1.into(), (-3).into(), 9.into(), (-27).into()]);

    // the zero direction cannot repair a form orthogonal to a ray
    let bad = PerturbationVector::from_components(vec![BigInt::zero(), BigInt::zero()]);
    assert!(!bad.is_admissible(&l, plan.cones()));
}

#[test]
fn empty_and_constant_integrands() {
    let p = pentagon();
    let empty = LinearFormSum::new(2);
    assert_eq!(both(&p, &empty), (q(0, 1), q(0, 1)));
    let c = single(q(3, 1), 0, &[0, 0]);
    assert_eq!(both(&p, &c), (q(18, 1), q(18, 1)));
    let z = single(q(3, 1), 4, &[0, 0]);
    assert_eq!(both(&p, &z), (q(0, 1), q(0, 1)));
}

fn monomial_oracle_simplex(m: &[u32]) -> Rational {
    let num: BigInt = m.iter().map(|&e| factorial(e.into())).product();
    let total: u64 = m.iter().map(|&e| u64::from(e)).sum::<u64>() + m.len() as u64;
    Rational::new(num, factorial(total))
}

fn all_exponents(d: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let used: u32 = v.iter().sum();
                (0..=max_degree - used).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn standard_simplex_and_box_oracles() {
    for d in 1..=3 {
        let simplex = standard_simplex(d);
        let cube = Polytope::from_vertices(
            d,
            (0..1u32 << d)
                .map(|mask| (0..d).map(|i| q(i64::from(mask >> i & 1) * (i as i64 + 1), 1)).collect())
                .collect(),
        )
        .unwrap();
        let sp = SimplexPlan::new(&simplex).unwrap();
        let cp = ConePlan::new(&simplex, IntegrationOptions::default()).unwrap();
        let bp = SimplexPlan::new(&cube).unwrap();
        let bc = ConePlan::new(&cube, IntegrationOptions::default()).unwrap();
        for m in all_exponents(d, 4) {
            let f = decompose_monomial(&ExponentVector::new(m.clone()));
            let expected = monomial_oracle_simplex(&m);
            assert_eq!(sp.integrate(&f).unwrap(), expected, "simplex {m:?}");
            assert_eq!(cp.integrate(&f).unwrap(), expected, "simplex cones {m:?}");

            // box Π [0, i+1]
            let boxed: Rational = m
                .iter()
                .enumerate()
                .map(|(i, &e)| {
                    let b = BigInt::from(i + 1);
                    Rational::new(crate::linalg::int_pow(&b, u64::from(e) + 1), BigInt::from(e + 1))
                })
                .product();
            assert_eq!(bp.integrate(&f).unwrap(), boxed, "box {m:?}");
            assert_eq!(bc.integrate(&f).unwrap(), boxed, "box cones {m:?}");
        }
    }
}

#[test]
fn dilated_triangle() {
    let tri = Polytope::from_vertices(2, vec![pt(&[0, 0]), vec![q(1, 2), q(0, 1)], vec![q(0, 1), q(1, 2)]]).unwrap();
    let (_, dilated) = dilate_to_integer(&tri);
    let x = single(q(1, 1), 1, &[1, 0]);
    assert_eq!(both(&dilated, &x), (q(1, 48), q(1, 48)));
    assert_eq!(both(&tri, &x), (q(1, 48), q(1, 48)));
    assert_eq!(volume_triangulation(&dilated).unwrap(), q(1, 8));
    assert_eq!(volume_cone_decomposition(&dilated, IntegrationOptions::default()).unwrap(), q(1, 8));
}

#[test]
fn dilation_covariance() {
    let p = pentagon();
    let scaled = Polytope::from_vertices(2, p.vertices().iter().map(|v| v.iter().map(|x| x * q(3, 1)).collect()).collect()).unwrap();
    let m = ExponentVector::new(vec![2, 3]);
    let f = decompose_monomial(&m);
    let (a, _) = both(&p, &f);
    let (b, c) = both(&scaled, &f);
    assert_eq!(b, c);
    assert_eq!(b, a * Rational::from_integer(BigInt::from(3).pow(2 + 5)));
}

#[test]
fn three_candidate_volume_by_cones() {
    let (reduced, _) =
        crate::polyhedra::eliminate_equalities(&crate::polyhedra::tests::three_candidate()).unwrap();
    let p = Polytope::from_hrep(reduced).unwrap();
    let (_, p) = dilate_to_integer(&p);
    assert_eq!(volume_cone_decomposition(&p, IntegrationOptions::default()).unwrap(), q(71, 414720));
    assert_eq!(volume_triangulation(&p).unwrap(), q(71, 414720));
    let one = single(q(1, 1), 0, &[0, 0, 0, 0, 0]);
    let req = IntegrationRequest {
        polytope: p,
        integrand: one,
        method: Method::ConeDecomposition,
        valuation: Valuation::Integral,
    };
    assert_eq!(integrate(&req, IntegrationOptions::default()).unwrap(), q(71, 414720));
}
