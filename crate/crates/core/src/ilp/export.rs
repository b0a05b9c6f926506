use std::fmt::Write;

use super::IlpInstance;

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:e}")
    } else {
        // colocated sender/receiver pairs; any bound this large disables the row
        "1e30".to_string()
    }
}

/// The full big-M model in CPLEX LP text format.
///
/// Variables are `x_i_t` and `y_t` with 1-based indices. Rows: `obj`,
/// `assign_i` (each link in exactly one slot), `use_i_t` (`x <= y`),
/// `sinr_i_t` (knapsack row with big-M), `order_t` (`y_t >= y_{t+1}`).
pub fn write_lp_format(ilp: &IlpInstance, slots: usize) -> String {
    let n = ilp.n;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ minimum-length link scheduling, {n} links, {slots} slots"
    );
    out.push_str("Minimize\n obj:");
    if slots == 0 {
        out.push_str(" 0 y_1");
    }
    for t in 1..=slots {
        let _ = write!(out, "{} y_{t}", if t == 1 { "" } else { " +" });
    }
    out.push_str("\nSubject To\n");
    for i in 1..=n {
        let _ = write!(out, " assign_{i}:");
        for t in 1..=slots {
            let _ = write!(out, "{} x_{i}_{t}", if t == 1 { "" } else { " +" });
        }
        out.push_str(" = 1\n");
    }
    for i in 1..=n {
        for t in 1..=slots {
            let _ = writeln!(out, " use_{i}_{t}: x_{i}_{t} - y_{t} <= 0");
        }
    }
    for i in 0..n {
        for t in 1..=slots {
            let _ = write!(out, " sinr_{}_{t}:", i + 1);
            for j in (0..n).filter(|&j| j != i) {
                let _ = write!(out, " + {} x_{}_{t}", num(ilp.b[j][i]), j + 1);
            }
            let _ = writeln!(
                out,
                " + {} x_{}_{t} <= {}",
                num(ilp.big_m[i]),
                i + 1,
                num(ilp.a[i] + ilp.big_m[i])
            );
        }
    }
    for t in 1..slots {
        let _ = writeln!(out, " order_{t}: y_{t} - y_{} >= 0", t + 1);
    }
    out.push_str("Binary\n");
    for i in 1..=n {
        for t in 1..=slots {
            let _ = writeln!(out, " x_{i}_{t}");
        }
    }
    for t in 1..=slots {
        let _ = writeln!(out, " y_{t}");
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::build_ilp;
    use crate::phys::{Link, LinkSet, PhysParams, PowerMode};

    #[test]
    fn two_link_model_layout() {
        let params = PhysParams {
            kappa: 3.0,
            eta: 1.0,
            sigma: 1.5,
            xi: 0.0,
            c: 1.0,
            beta: 3.0,
            pmax: 10.0,
        };
        let set = LinkSet::new(
            params,
            PowerMode::Arbitrary,
            vec![
                Link::new(0, (0.0, 0.0), (1.0, 0.0)).with_power(1.0),
                Link::new(1, (0.0, 5.0), (1.0, 5.0)).with_power(1.0),
            ],
        )
        .unwrap();
        let text = write_lp_format(&build_ilp(&set).unwrap(), 2);
        assert!(text.starts_with("\\ minimum-length"));
        assert!(text.contains("Minimize\n obj: y_1 + y_2\n"));
        assert!(text.contains(" assign_2: x_2_1 + x_2_2 = 1\n"));
        assert!(text.contains(" use_1_2: x_1_2 - y_2 <= 0\n"));
        assert!(text.contains(" order_1: y_1 - y_2 >= 0\n"));
        assert_eq!(text.matches("sinr_").count(), 4);
        assert!(text.ends_with("End\n"));
    }
}
