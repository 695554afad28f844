//! Algebraic laws and independent oracles for polynomials, the cyclic ring
//! and binary matrices.

use proptest::prelude::*;
use varray_core::gf2poly::f_poly;
use varray_core::{lambda_of, tmap, BitMatrix, BitVec, Poly, RingMatrix, RingParams};

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec(any::<bool>(), 0..=max_deg + 1).prop_map(|bits| {
        Poly::from_exponents(bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    })
}

/// Smallest degree of a nonconstant divisor, found by trial division over all
/// polynomials of increasing degree. The first divisor found is irreducible.
fn min_factor_degree_by_trial_division(f: &Poly) -> usize {
    let deg = f.degree().unwrap();
    for d in 1..=deg / 2 {
        for low in 0..(1u64 << d) {
            let g = Poly::from_u64((1u64 << d) | low);
            if g.divides(f).unwrap() {
                return d;
            }
        }
    }
    deg
}

#[test]
fn lambda_agrees_with_factorization_oracle() {
    for p in (3..=35).step_by(2) {
        let f = f_poly(p, 1);
        assert_eq!(
            lambda_of(p).unwrap(),
            min_factor_degree_by_trial_division(&f),
            "p={p}"
        );
    }
}

/// Rank as log2 of the size of the row space, enumerated exhaustively.
fn rank_by_row_space(m: &BitMatrix) -> usize {
    let rows: Vec<BitVec> = (0..m.rows()).map(|r| m.row(r)).collect();
    let mut space = std::collections::HashSet::new();
    for mask in 0u32..(1 << rows.len()) {
        let mut acc = BitVec::zeros(m.cols());
        for (i, r) in rows.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc.xor_assign(r);
            }
        }
        space.insert(acc);
    }
    space.len().trailing_zeros() as usize
}

fn small_matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..=9, 1usize..=9).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c)
            .prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
    })
}

fn ring_params() -> impl Strategy<Value = RingParams> {
    (
        prop_oneof![Just(3usize), Just(5), Just(7), Just(9), Just(11)],
        prop_oneof![Just(1usize), Just(2), Just(4)],
    )
        .prop_map(|(p, t)| RingParams::new(p, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn poly_ring_laws(a in poly_strategy(90), b in poly_strategy(70), c in poly_strategy(40)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&(&b + &c)), &a.mul(&b) + &a.mul(&c));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(&a + &a, Poly::zero());
    }

    #[test]
    fn divmod_and_gcd(a in poly_strategy(120), b in poly_strategy(60)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(&q.mul(&b) + &r, a.clone());
        prop_assert!(r.is_zero() || r.degree() < b.degree());
        let g = a.gcd(&b).unwrap();
        prop_assert!(g.divides(&a).unwrap() && g.divides(&b).unwrap());
    }

    #[test]
    fn inverse_modulo_f(rp in ring_params(), a in poly_strategy(40)) {
        let f = rp.f();
        let a = a.rem(&f).unwrap();
        let g = if a.is_zero() { f.clone() } else { a.gcd(&f).unwrap() };
        match rp.quotient_inv(&a) {
            Ok(inv) => prop_assert!(a.mul(&inv).rem(&f).unwrap().is_one()),
            Err(_) => prop_assert!(!g.is_one()),
        }
    }

    #[test]
    fn ring_reduction_is_homomorphic(rp in ring_params(), a in poly_strategy(50), b in poly_strategy(50)) {
        let (ea, eb) = (rp.lift(&a), rp.lift(&b));
        let f = rp.f();
        let lhs = rp.reduce_to_quotient(&ea.mul(&eb));
        let rhs = rp.reduce_to_quotient(&ea).mul(&rp.reduce_to_quotient(&eb)).rem(&f).unwrap();
        prop_assert_eq!(lhs, rhs);
        // multiplication by x is a cyclic shift
        prop_assert_eq!(ea.mul(&rp.monomial(1)), ea.shift(1));
    }

    #[test]
    fn circulant_product_and_sum(rp in ring_params(), a in poly_strategy(40), b in poly_strategy(40)) {
        let (ea, eb) = (rp.lift(&a), rp.lift(&b));
        let ca = rp.circulant(&ea, 0, 0).unwrap();
        let cb = rp.circulant(&eb, 0, 0).unwrap();
        prop_assert_eq!(ca.mul(&cb).unwrap(), rp.circulant(&ea.mul(&eb), 0, 0).unwrap());
        let sum = rp.circulant(&ea.add(&eb), 0, 0).unwrap();
        let direct = BitMatrix::from_fn(rp.m(), rp.m(), |i, j| ca.get(i, j) ^ cb.get(i, j));
        prop_assert_eq!(sum, direct);
    }

    #[test]
    fn rank_matches_row_space_oracle(m in small_matrix()) {
        prop_assert_eq!(m.rank(), rank_by_row_space(&m));
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn solve_recovers_unknowns(m in small_matrix(), xs in proptest::collection::vec(any::<bool>(), 9)) {
        let x = BitVec::from_bools(xs.into_iter().take(m.cols()));
        let rhs = m.mul_vec(&x).unwrap();
        match m.solve(&rhs) {
            Ok(sol) => {
                prop_assert_eq!(m.rank(), m.cols());
                prop_assert_eq!(sol, x);
            }
            Err(_) => prop_assert!(m.rank() < m.cols()),
        }
    }

    #[test]
    fn invert_round_trip(m in (1usize..=9).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n)
            .prop_map(move |bits| BitMatrix::from_fn(n, n, |i, j| bits[i * n + j]))
    })) {
        match m.invert() {
            Ok(inv) => prop_assert_eq!(m.mul(&inv).unwrap(), BitMatrix::identity(m.rows())),
            Err(_) => prop_assert!(m.rank() < m.rows()),
        }
    }

    /// If gcd(a, x^m+1) = x^tau+1 then the truncated circulant has full rank,
    /// and likewise for the two-block form with gcd(a+b, x^m+1).
    #[test]
    fn truncated_circulant_rank_law(rp in ring_params(), a in poly_strategy(40), b in poly_strategy(40)) {
        let l = rp.row_size();
        let target = rp.x_tau_plus_one();
        let (ea, eb) = (rp.lift(&a), rp.lift(&b));
        if rp.gcd_with_modulus(&ea) == target {
            prop_assert_eq!(rp.circulant(&ea, rp.tau(), rp.tau()).unwrap().rank(), l);
        }
        if rp.gcd_with_modulus(&ea.add(&eb)) == target {
            let two = RingMatrix::from_fn(rp, 1, 2, |_, j| if j == 0 { ea.clone() } else { eb.clone() });
            // [A(a) | A(b)] over the first block row
            let t = tmap(&two);
            prop_assert_eq!(t.rank(), l);
        }
    }

    #[test]
    fn bitvec_rotation_inverse(len in 1usize..200, k in 0usize..400, seed in any::<u64>()) {
        let v = BitVec::from_bools((0..len).map(|i| (seed >> (i % 64)) & 1 == 1));
        prop_assert_eq!(v.rotate_up(k).rotate_up(len - k % len), v);
    }
}

#[test]
fn rank_law_example_from_cauchy_entries() {
    // (x^tau+1) times a unit of R_{p,tau} has exactly gcd x^tau+1
    let rp = RingParams::new(7, 2).unwrap();
    let u = rp.quotient_inv(&Poly::from_exponents([0, 1, 2])).unwrap();
    let a = rp.lift(&rp.x_tau_plus_one().mul(&u));
    assert_eq!(rp.gcd_with_modulus(&a), rp.x_tau_plus_one());
    assert_eq!(rp.circulant(&a, 2, 2).unwrap().rank(), rp.row_size());
}
