//! Randomized invariants. Every property is exact; inputs are small.

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quasibos::coalgebra::{convolution_inverse, convolve, graded_coalgebra, tensor_subspace, Functional};
use quasibos::dqb::{check_dqb, from_group_cocycle};
use quasibos::fixtures::{fix1, fix3, fix4, z2_sign, z4_f5};
use quasibos::graded::{crossed_to_yd, pointed_filtration, random_crossed_module};
use quasibos::linalg::{kernel_basis, solve_linear};
use quasibos::preantipode::{check_antipode, check_derived_identities, check_preantipode, group_preantipode, solve_preantipode};
use quasibos::yd::{check_yd, yd_braiding, yd_morphism_space, yd_tensor, YDModule};
use quasibos::{Coalgebra, Field, GroupCocycleData, Matrix, Scalar, SparseTensor, Subspace};

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::prime(7).unwrap())]
}

fn matrix(f: Field, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| Matrix::from_fn(f, rows, cols, |i, j| f.int(v[i * cols + j])))
}

fn sized_matrix() -> impl Strategy<Value = Matrix> {
    (field(), 1usize..5, 1usize..6).prop_flat_map(|(f, r, c)| matrix(f, r, c))
}

fn counit_power(c: &Coalgebra, arity: usize) -> Functional {
    Functional::from_fn(c.dim(), arity, |idx| idx.iter().fold(c.field().one(), |acc, &i| &acc * c.eps(i)))
}

fn functional(c: &Coalgebra, arity: usize) -> impl Strategy<Value = Functional> {
    let (n, f) = (c.dim(), c.field());
    proptest::collection::vec(-2i64..=2, n.pow(arity as u32)).prop_map(move |v| Functional::new(n, arity, v.into_iter().map(|x| f.int(x)).collect()).unwrap())
}

/// A normalized 2-cochain with nonzero values.
fn cochain(g: &GroupCocycleData) -> impl Strategy<Value = Vec<Scalar>> {
    let n = g.order();
    let f = g.field();
    let e = g.identity().expect("a group");
    // values are ±1..±3, nonzero in F₅ as well
    proptest::collection::vec(prop_oneof![1i64..=3, -3i64..=-1], n * n)
        .prop_map(move |v| (0..n * n).map(|k| if k / n == e || k % n == e { f.one() } else { f.int(v[k]) }).collect())
}

fn crossed_yd(group: &GroupCocycleData, seed: u64) -> YDModule {
    let h = Arc::new(from_group_cocycle(group).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    crossed_to_yd(&random_crossed_module(&mut rng, group).unwrap(), h).unwrap()
}

fn groups() -> impl Strategy<Value = GroupCocycleData> {
    prop_oneof![Just(z2_sign()), Just(z4_f5())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solutions_solve(a in sized_matrix(), seed in proptest::collection::vec(-3i64..=3, 6)) {
        let f = a.field();
        let x0: Vec<Scalar> = (0..a.cols()).map(|j| f.int(seed[j])).collect();
        let b = a.apply(&x0);
        let x = solve_linear(&a, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(a.apply(&x), b);
        let arbitrary: Vec<Scalar> = (0..a.rows()).map(|i| f.int(seed[i])).collect();
        if let Some(y) = solve_linear(&a, &arbitrary).unwrap() {
            prop_assert_eq!(a.apply(&y), arbitrary);
        }
    }

    #[test]
    fn kernels_are_kernels(a in sized_matrix()) {
        let ker = kernel_basis(&a);
        for v in &ker {
            prop_assert!(a.apply(v).iter().all(Scalar::is_zero));
        }
        prop_assert_eq!(ker.len(), a.cols() - a.rank());
        prop_assert_eq!(Matrix::from_columns(a.field(), a.cols(), &ker).rank(), ker.len());
    }

    #[test]
    fn contraction_is_additive(
        f in field(),
        t in proptest::collection::vec(-3i64..=3, 6),
        u in proptest::collection::vec(-3i64..=3, 6),
        v in proptest::collection::vec(-3i64..=3, 6),
    ) {
        let dense = |shape: Vec<usize>, xs: &[i64]| SparseTensor::from_dense(f, shape, xs.iter().map(|&x| f.int(x)).collect()).unwrap();
        let t = dense(vec![2, 3], &t);
        let (u, v) = (dense(vec![3, 2], &u), dense(vec![3, 2], &v));
        let pairs = [(1, 0)];
        let lhs = t.contract(&u.add(&v).unwrap(), &pairs).unwrap();
        let rhs = t.contract(&u, &pairs).unwrap().add(&t.contract(&v, &pairs).unwrap()).unwrap();
        prop_assert_eq!(lhs.nonzeros(), rhs.nonzeros());
    }

    #[test]
    fn convolution_is_a_unital_monoid(
        (a, b, c) in (functional(fix3().coalgebra(), 2), functional(fix3().coalgebra(), 2), functional(fix3().coalgebra(), 2))
    ) {
        let h = fix3();
        let co = h.coalgebra();
        let ab_c = convolve(co, &convolve(co, &a, &b).unwrap(), &c).unwrap();
        let a_bc = convolve(co, &a, &convolve(co, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c.values(), a_bc.values());
        let e = counit_power(co, 2);
        prop_assert_eq!(&convolve(co, &a, &e).unwrap(), &a);
        prop_assert_eq!(&convolve(co, &e, &a).unwrap(), &a);
        if let Some(g) = convolution_inverse(co, &a) {
            prop_assert_eq!(&convolve(co, &a, &g).unwrap(), &e);
            prop_assert_eq!(&convolve(co, &g, &a).unwrap(), &e);
        }
    }

    #[test]
    fn coboundary_perturbations_stay_valid((g, phi) in groups().prop_flat_map(|g| { let c = cochain(&g); (Just(g), c) })) {
        let d = g.perturb(&phi);
        d.validate().unwrap();
        let h = from_group_cocycle(&d).unwrap();
        let rep = check_dqb(&h);
        prop_assert!(rep.passed(), "{}", rep);
        let n = h.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ij_k = h.mul(h.mul_basis(i, j), &quasibos::linalg::unit_vector(h.field(), n, k));
                    let i_jk = h.mul(&quasibos::linalg::unit_vector(h.field(), n, i), h.mul_basis(j, k));
                    prop_assert_eq!(ij_k, i_jk);
                }
            }
        }
        let closed = group_preantipode(&d).expect("a group");
        prop_assert!(check_preantipode(&h, &closed).passed());
        let solved = solve_preantipode(&h).expect("groups have preantipodes").s;
        prop_assert!(check_preantipode(&h, &solved).passed());
        prop_assert!(check_derived_identities(&h, &solved).passed());
    }

    #[test]
    fn crossed_modules_give_yd_modules_closed_under_tensor((g, s1, s2) in (groups(), any::<u64>(), any::<u64>())) {
        let (v, w) = (crossed_yd(&g, s1), crossed_yd(&g, s2));
        prop_assert!(check_yd(&v).passed());
        let vw = yd_tensor(&v, &w).unwrap();
        let rep = check_yd(&vw);
        prop_assert!(rep.passed(), "{}", rep);
    }

    #[test]
    fn braiding_is_natural(
        (g, s1, s2, cf, cg) in (groups(), any::<u64>(), any::<u64>(), proptest::collection::vec(-2i64..=2, 8), proptest::collection::vec(-2i64..=2, 8))
    ) {
        let (v, w) = (crossed_yd(&g, s1), crossed_yd(&g, s2));
        let f = v.field();
        let combo = |basis: Vec<Matrix>, cs: &[i64], d: usize| {
            basis.iter().zip(cs.iter().cycle()).fold(Matrix::zeros(f, d, d), |acc, (m, &c)| acc.add(&m.scale(&f.int(c))))
        };
        let fm = combo(yd_morphism_space(&v, &v).unwrap(), &cf, v.dim());
        let gm = combo(yd_morphism_space(&w, &w).unwrap(), &cg, w.dim());
        let c = yd_braiding(&v, &w).unwrap();
        prop_assert_eq!(gm.kron(&fm).mul(&c), c.mul(&fm.kron(&gm)));
    }
}

#[test]
fn graded_coalgebras_of_pointed_fixtures() {
    for a in [fix3(), fix4()] {
        let c = a.coalgebra();
        let filt = pointed_filtration(&a, None).unwrap();
        let n = c.dim();
        // Δ(A_m) ⊆ Σ_{i+j=m} A_i⊗A_j
        for (m, layer) in filt.layers.iter().enumerate() {
            let target = (0..=m).fold(Subspace::zero(c.field(), n * n), |acc, i| acc.sum(&tensor_subspace(&filt.layers[i], &filt.layers[m - i])));
            for v in layer.basis() {
                assert!(target.contains(&c.delta_of(v)), "layer {m}");
            }
        }
        let gc = graded_coalgebra(c, &filt).unwrap();
        assert!(quasibos::coalgebra::check_coalgebra(&gc.coalgebra).passed());
        for (i, &d) in gc.degrees.iter().enumerate() {
            assert!(d == 0 || gc.coalgebra.eps(i).is_zero());
        }
    }
}

#[test]
fn ordinary_antipodes_are_preantipodes() {
    let h1 = fix1();
    let s1 = Matrix::identity(h1.field(), 2);
    assert!(check_antipode(&h1, &s1).passed());
    assert!(check_preantipode(&h1, &s1).passed());
    // H₄ on 1, g, x, xg: S(x) = xg, S(xg) = −x
    let h4 = fix3();
    let q = h4.field();
    let mut s = Matrix::zeros(q, 4, 4);
    s.set(0, 0, q.one());
    s.set(1, 1, q.one());
    s.set(3, 2, q.one());
    s.set(2, 3, q.int(-1));
    assert!(check_antipode(&h4, &s).passed());
    assert!(check_preantipode(&h4, &s).passed());
}
