//! Cross-checks between independent routes to the same numbers.

use domino2adic::cyclotomic::{self, reciprocal_power_sum};
use domino2adic::grid_count::{count_tilings, count_tilings_transfer, factor_square_count, BoardDims};
use domino2adic::padics::TwoAdicTrunc;
use domino2adic::series::{self, s_values, u_values, PowerSumTable};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

#[test]
fn broken_profile_agrees_with_transfer_matrix() {
    for rows in 1..=12 {
        for cols in rows..=14 {
            let dims = BoardDims::new(rows, cols);
            let dp = count_tilings(dims).unwrap();
            let tm = count_tilings_transfer(dims, 24).unwrap();
            assert_eq!(dp, tm, "{rows}x{cols}");
            assert_eq!(dp, count_tilings(BoardDims::new(cols, rows)).unwrap());
            if (rows * cols) % 2 == 1 {
                assert_eq!(dp, BigUint::from(0u32));
            } else {
                assert!(dp >= BigUint::from(1u32));
            }
        }
    }
}

#[test]
fn dp_and_cyclotomic_products_agree() {
    for n in 0..=7usize {
        let fact = factor_square_count(n).unwrap();
        assert_eq!(fact.two_exponent, n as u64);
        assert_eq!(fact.reassemble(), fact.count);
        assert_eq!(fact.odd_root_signed(), cyclotomic::f_exact(n).unwrap(), "n={n}");
    }
}

#[test]
fn f_is_pair_product_mod_four() {
    for n in 1..=12usize {
        let f = cyclotomic::f_exact(n).unwrap();
        let sign = cyclotomic::pair_product_sign(n).unwrap();
        assert_eq!(TwoAdicTrunc::new(&f, 2), TwoAdicTrunc::new(&BigInt::from(sign), 2), "n={n}");
    }
}

#[test]
fn series_matches_exact_f_mod_powers_of_two() {
    for n in 1..=8u64 {
        let f = cyclotomic::f_exact(n as usize).unwrap();
        for k in 2..=12 {
            assert_eq!(
                series::f_mod(n as i64, k).unwrap(),
                TwoAdicTrunc::new(&f, k),
                "n={n} K={k}"
            );
        }
    }
}

#[test]
fn power_sums_match_floating_point_root_sums() {
    for n in 0..=10u64 {
        let u = u_values(n, 8);
        let m = (2 * n + 1) as f64;
        for k in 1..=8 {
            let direct: f64 = (0..2 * n + 1)
                .map(|j| (2.0 * (2.0 * std::f64::consts::PI * j as f64 / m).cos()).powi(-(k as i32)))
                .sum();
            let exact = u[k - 1].to_f64().unwrap();
            let rel = (exact - direct).abs() / direct.abs().max(1e-300);
            assert!(rel <= 1e-9, "n={n} k={k}: {exact} vs {direct}");
        }
    }
}

#[test]
fn s_via_u_identity_matches_direct_cyclotomic_sum() {
    for n in 0..=5u64 {
        let s = s_values(&u_values(n, 8), 4);
        for k in 1..=4u32 {
            let direct = reciprocal_power_sum(n as usize, k).unwrap();
            assert_eq!(s[k as usize - 1], direct, "n={n} k={k}");
        }
    }
}

#[test]
fn elementary_symmetric_values_match_direct_expansion_for_n2() {
    // n = 2 has four reciprocals 1/alpha_{i,j}; E_k from Newton must vanish
    // past k = 4 and E_4 must be 1 / prod alpha = 1 / (-4) (full product is -2^2).
    let t = PowerSumTable::direct(2, 8);
    assert!(t.e[5..].iter().all(num_traits::Zero::is_zero));
    assert_eq!(t.e[4], num_rational::BigRational::new((-1).into(), 4.into()));
}
