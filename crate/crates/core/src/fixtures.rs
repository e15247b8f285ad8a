//! Small reference objects used by tests, the acceptance suite and the CLI.
//!
//! FIX3 is written out by hand (not built by `bosonize`) so that the
//! bosonization tests can compare against it as an independent oracle.

use crate::coalgebra::{Coalgebra, Functional};
use crate::dqb::{cyclic_labels, from_group_cocycle, DualQuasiBialgebra, GroupCocycleData};
use std::sync::Arc;

use crate::linalg::{unit_vector, zero_vector, Matrix, Vector};
use crate::yd::{BraidedBialgebra, Comodule, YDModule};
use crate::scalar::Field;

fn q() -> Field {
    Field::Rationals
}

/// kZ₂ with trivial reassociator.
pub fn fix1() -> DualQuasiBialgebra {
    from_group_cocycle(&z2_trivial()).expect("valid")
}

/// k^θZ₂ with θ(g,g,g) = −1, all other values 1.
pub fn fix2() -> DualQuasiBialgebra {
    from_group_cocycle(&z2_sign()).expect("valid")
}

pub fn z2_trivial() -> GroupCocycleData {
    GroupCocycleData::trivial(cyclic_labels(2), vec![vec![0, 1], vec![1, 0]], q())
}

pub fn z2_sign() -> GroupCocycleData {
    GroupCocycleData::cyclic(2, 1, q()).expect("−1 is a square root of unity over Q")
}

/// Z₄ with θ(a,b,c) = 2^{a⌊(b+c)/4⌋} over F₅ (2 is a primitive 4th root of unity mod 5).
pub fn z4_f5() -> GroupCocycleData {
    GroupCocycleData::cyclic(4, 1, Field::prime(5).expect("prime")).expect("F5 contains i")
}

/// Sweedler's 4-dim Hopf algebra H₄ on the basis 1, g, x, xg with
/// g² = 1, x² = 0, gx = −xg, Δx = x⊗1 + g⊗x, trivial reassociator.
pub fn fix3() -> DualQuasiBialgebra {
    h4(q())
}

pub fn h4(f: Field) -> DualQuasiBialgebra {
    let labels: Vec<String> = ["1", "g", "x", "xg"].iter().map(|s| s.to_string()).collect();
    let one = f.one();
    let delta = vec![
        vec![(0, 0, one.clone())],
        vec![(1, 1, one.clone())],
        vec![(2, 0, one.clone()), (1, 2, one.clone())],
        vec![(3, 1, one.clone()), (0, 3, one.clone())],
    ];
    let counit = vec![one.clone(), one.clone(), f.zero(), f.zero()];
    let coalg = Coalgebra::from_terms(f, labels, delta, counit).expect("shape");
    // (a, b) -> (sign, product index); None means the product is 0
    let table = |a: usize, b: usize| -> Option<(i64, usize)> {
        let (ax, ag) = (a >= 2, a % 2 == 1);
        let (bx, bg) = (b >= 2, b % 2 == 1);
        if ax && bx {
            return None;
        }
        // moving g past x in a·b flips sign when a carries g and b carries x
        let sign = if ag && bx { -1 } else { 1 };
        let g = ag ^ bg;
        Some((sign, (if ax || bx { 2 } else { 0 }) + g as usize))
    };
    let mult = (0..4)
        .map(|a| {
            (0..4)
                .map(|b| match table(a, b) {
                    None => zero_vector(f, 4),
                    Some((s, k)) => {
                        let mut v = zero_vector(f, 4);
                        v[k] = f.int(s);
                        v
                    }
                })
                .collect()
        })
        .collect();
    let omega = Functional::counit_power(&coalg, 3);
    DualQuasiBialgebra::new(coalg, mult, unit_vector(f, 4, 0), omega).expect("ε⊗ε⊗ε is invertible")
}

/// H₄ (viewed in the YD category with trivial structure) bosonized over FIX2:
/// an 8-dim dual quasi-bialgebra whose reassociator is θ on the group-like factor.
pub fn fix4() -> DualQuasiBialgebra {
    let h = Arc::new(fix2());
    let r = trivial_braided(&fix3(), h.clone());
    let b = crate::bosonization::bosonize(&h, &r).expect("H₄ is a bialgebra in the YD category over FIX2");
    Arc::try_unwrap(b.b).unwrap_or_else(|a| (*a).clone())
}

/// The monoid algebra of {1, e} with e² = e and trivial reassociator: no preantipode.
pub fn fix5() -> DualQuasiBialgebra {
    let d = GroupCocycleData::trivial(vec!["1".into(), "e".into()], vec![vec![0, 1], vec![1, 1]], q());
    from_group_cocycle(&d).expect("valid monoid")
}

fn sv(f: Field, entries: &[(usize, i64)], n: usize) -> Vector {
    let mut v = zero_vector(f, n);
    for &(i, c) in entries {
        v[i] = f.int(c);
    }
    v
}

/// span{1, x} with ρ(x) = g⊗x and g⊳x = −x over a two-element group algebra
/// (index 1 is g); x² = 0, x primitive. A YD module only when θ(g,g,g) = 1.
pub fn r_sweedler(over: Arc<DualQuasiBialgebra>) -> BraidedBialgebra {
    let f = over.field();
    let labels = vec!["1".to_string(), "x".to_string()];
    let one = f.one();
    let co = Comodule::new(over, labels, vec![vec![(0, 0, one.clone())], vec![(1, 1, one)]]).expect("shape");
    let action = vec![vec![sv(f, &[(0, 1)], 2), sv(f, &[(1, 1)], 2)], vec![sv(f, &[(0, 1)], 2), sv(f, &[(1, -1)], 2)]];
    let carrier = YDModule::new(co, action).expect("shape");
    // columns 1·1, 1·x, x·1, x·x
    let mult = Matrix::from_columns(f, 2, &[sv(f, &[(0, 1)], 2), sv(f, &[(1, 1)], 2), sv(f, &[(1, 1)], 2), zero_vector(f, 2)]);
    // Δ1 = 1⊗1, Δx = x⊗1 + 1⊗x
    let delta = Matrix::from_columns(f, 4, &[sv(f, &[(0, 1)], 4), sv(f, &[(2, 1), (1, 1)], 4)]);
    BraidedBialgebra { carrier, mult, unit: sv(f, &[(0, 1)], 2), delta, counit: sv(f, &[(0, 1)], 2) }
}

/// An ordinary bialgebra B viewed in the YD category over `over` with
/// ρ(b) = 1⊗b and h⊳b = ε(h)b; the braiding is then the flip.
pub fn trivial_braided(b: &DualQuasiBialgebra, over: Arc<DualQuasiBialgebra>) -> BraidedBialgebra {
    let f = over.field();
    let d = b.dim();
    let n = over.dim();
    let unit = over.unit().clone();
    let coaction = (0..d)
        .map(|v| unit.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(h, c)| (h, v, c.clone())).collect())
        .collect();
    let co = Comodule::new(over.clone(), b.labels().to_vec(), coaction).expect("shape");
    let action = (0..n)
        .map(|h| (0..d).map(|v| {
            let mut e = zero_vector(f, d);
            e[v] = over.coalgebra().eps(h).clone();
            e
        }).collect())
        .collect();
    let carrier = YDModule::new(co, action).expect("shape");
    let mult = Matrix::from_fn(f, d, d * d, |k, c| b.mul_basis(c / d, c % d)[k].clone());
    let delta = b.coalgebra().delta_matrix();
    let counit = (0..d).map(|i| b.coalgebra().eps(i).clone()).collect();
    BraidedBialgebra { carrier, mult, unit: b.unit().clone(), delta, counit }
}

/// Two basis vectors of degree g with g⊳x = y, g⊳y = −x over a two-element
/// group algebra. g⊳g⊳ = −1 here, so this is a YD module exactly when θ(g,g,g) = −1.
pub fn z2_block(over: Arc<DualQuasiBialgebra>) -> YDModule {
    let f = over.field();
    let one = f.one();
    let co = Comodule::new(
        over,
        vec!["x".into(), "y".into()],
        vec![vec![(1, 0, one.clone())], vec![(1, 1, one)]],
    )
    .expect("shape");
    let action = vec![vec![sv(f, &[(0, 1)], 2), sv(f, &[(1, 1)], 2)], vec![sv(f, &[(1, 1)], 2), sv(f, &[(0, -1)], 2)]];
    YDModule::new(co, action).expect("shape")
}
