use cgf_core::cyclotomic::{cgf_form, cyclotomic_poly, cyclotomic_product};
use cgf_core::polyq::IntPoly;
use cgf_core::semigroup::{frobenius_number, selmer_bound, GeneratorSet};
use num_integer::Integer;
use proptest::prelude::*;

/// Largest integer not reachable as a non-negative combination, by direct
/// reachability; `-1` when every non-negative integer is reachable.
fn frobenius_by_reachability(gens: &[u64]) -> i64 {
    let min = *gens.iter().min().unwrap() as usize;
    let max = *gens.iter().max().unwrap() as usize;
    let mut reach = vec![false; 1];
    reach[0] = true;
    let mut run = 1;
    let mut last_gap: i64 = -1;
    let mut x = 1;
    // Once `min` consecutive integers are reachable, all larger ones are.
    while run < min {
        let r = gens.iter().any(|&g| (g as usize) <= x && reach[x - g as usize]);
        reach.push(r);
        if r {
            run += 1;
        } else {
            run = 0;
            last_gap = x as i64;
        }
        x += 1;
        assert!(x < 4 * max * max + 10, "runaway");
    }
    last_gap
}

fn gcd_one_set() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=60, 1..=5)
        .prop_filter("gcd 1", |v| v.iter().fold(0u64, |g, x| g.gcd(x)) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn frobenius_matches_reachability(gens in gcd_one_set()) {
        let s = GeneratorSet::new(&gens).unwrap();
        let f = frobenius_number(&s).unwrap();
        prop_assert_eq!(f, frobenius_by_reachability(&gens));
        if gens.len() >= 2 {
            prop_assert!(f <= selmer_bound(&s).unwrap());
        }
    }

    #[test]
    fn cgf_form_recovers_products(indices in prop::collection::vec(2u64..=40, 0..5), shift in 0usize..4, scale in 1i64..4) {
        let prod = cyclotomic_product(&indices);
        let p = IntPoly::new(prod.coeffs().iter().map(|c| c * scale).collect()).shift_up(shift);
        if p.is_nonnegative() {
            let form = cgf_form(&p).unwrap().expect("product of cyclotomics");
            prop_assert_eq!(form.expand(), p);
            let mut sorted = indices.clone();
            sorted.sort_unstable();
            prop_assert_eq!(form.indices, sorted);
            prop_assert_eq!(form.beta, shift);
        }
    }
}

#[test]
fn non_cyclotomic_polynomial_has_no_form() {
    assert_eq!(cgf_form(&IntPoly::from_coeffs([1, 1, 2])).unwrap(), None);
    assert!(cgf_form(&cyclotomic_poly(1)).is_err());
}
