use linksched::gadget::{choose_gadget, reduction_equivalence, validate_gadget, REDUCTION_CAP};
use linksched::generate::ParamSpec;
use proptest::prelude::*;

fn integers() -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(1u64..9, 1..=REDUCTION_CAP)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn origin_hears_each_integer_link_as_its_value(values in integers(), kappa in 2.5f64..5.0) {
        let mut params = ParamSpec::gadget_default().params;
        params.kappa = kappa;
        params.beta = kappa;
        let g = choose_gadget(&values, &params).unwrap();
        let n = g.n();
        for (j, &v) in values.iter().enumerate() {
            let heard = g.set.received(j, n).unwrap();
            let expected = g.config.a * v as f64;
            prop_assert!((heard - expected).abs() <= 1e-9 * expected, "{heard} vs {expected}");
        }
        prop_assert!(validate_gadget(&g).unwrap());
    }

    #[test]
    fn origin_sinr_encodes_the_half_sum(values in integers(), mask in any::<u16>()) {
        let params = ParamSpec::gadget_default().params;
        let g = choose_gadget(&values, &params).unwrap();
        let n = g.n();
        let chosen: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
        prop_assume!(!chosen.is_empty());
        let load: u64 = chosen.iter().map(|&j| values[j]).sum();
        let half = g.config.big_n as f64 / 2.0;
        let expected = params.sigma * half / load as f64;
        let sinr = g.set.sinr(n, &chosen).unwrap();
        prop_assert!((sinr - expected).abs() <= 1e-9 * expected);
        prop_assert_eq!(sinr >= params.sigma * (1.0 - 1e-12), 2 * load <= g.config.big_n);
    }

    #[test]
    fn two_slots_iff_partition(values in proptest::collection::vec(1u64..7, 1..=8)) {
        prop_assert!(reduction_equivalence(&values, &ParamSpec::gadget_default().params).unwrap());
    }
}
