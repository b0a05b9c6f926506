use linksched::constants::{
    cell_capacity_bound, interference_sum_constant, oblivious_separation, oblivious_threshold,
    separation_holds,
};
use linksched::PhysParams;
use proptest::prelude::*;
use serde_json::Value;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn params_of(d: &Value) -> (PhysParams, f64) {
    let num = |key: &str| d[key].as_f64().expect("numeric field");
    let p = PhysParams {
        kappa: num("kappa"),
        eta: num("eta"),
        sigma: num("sigma"),
        xi: num("xi"),
        c: num("c"),
        beta: num("beta"),
        pmax: num("pmax"),
    };
    (p, num("rmax"))
}

#[test]
fn constants_match_the_frozen_oracle() {
    let text = include_str!("fixtures/constants_oracle.json");
    let draws: Vec<Value> = serde_json::from_str(text).unwrap();
    assert_eq!(draws.len(), 20);
    for (k, d) in draws.iter().enumerate() {
        let (p, rmax) = params_of(d);
        let tau = interference_sum_constant(p.kappa);
        assert!(
            rel(tau, d["tau"].as_f64().unwrap()) <= 1e-12,
            "draw {k} tau"
        );
        let x = oblivious_threshold(&p, rmax).unwrap();
        assert!(
            rel(x, d["separation_threshold"].as_f64().unwrap()) <= 1e-12,
            "draw {k} threshold"
        );
        let cap_k = oblivious_separation(&p, rmax).unwrap();
        assert_eq!(cap_k as u64, d["cap_k"].as_u64().unwrap(), "draw {k} K");
        assert_eq!(
            cell_capacity_bound(&p).value(),
            d["omega"].as_u64(),
            "draw {k} omega"
        );
        assert!(
            separation_holds(&p, rmax, cap_k).unwrap(),
            "draw {k} sufficiency"
        );
        if cap_k > 1 {
            assert!(
                !separation_holds(&p, rmax, cap_k - 1).unwrap(),
                "draw {k}: K is not minimal"
            );
        }
    }
}

fn linear_params() -> impl Strategy<Value = PhysParams> {
    (
        2.2f64..6.0,
        0.5f64..3.0,
        1.01f64..4.0,
        0.1f64..5.0,
        1.0f64..100.0,
    )
        .prop_map(|(kappa, eta, sigma, c, pmax)| PhysParams {
            kappa,
            eta,
            sigma,
            xi: 0.0,
            c,
            beta: kappa,
            pmax,
        })
}

proptest! {
    #[test]
    fn linear_power_separation_ignores_scale(p in linear_params(), r in 1e-3f64..1e3) {
        let base = oblivious_separation(&p, 1.0).unwrap();
        prop_assert_eq!(oblivious_separation(&p, r).unwrap(), base);
    }

    #[test]
    fn omega_is_at_least_two_with_noise(p in linear_params(), xi in 1e-4f64..0.5) {
        let p = PhysParams { xi, ..p };
        prop_assume!(p.pmax / (p.sigma * p.sigma * xi) > 0.0);
        prop_assert!(cell_capacity_bound(&p).value().unwrap() >= 2);
    }

    #[test]
    fn tau_shrinks_with_kappa(k in 2.1f64..8.0, dk in 0.01f64..2.0) {
        prop_assert!(interference_sum_constant(k + dk) < interference_sum_constant(k));
    }
}
