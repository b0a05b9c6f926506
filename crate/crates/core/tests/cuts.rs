mod common;

use common::instance;
use linksched::ilp::{
    build_ilp, lift_cut, schedule_cutting_plane, separate_min_cover, solve_lp, CuttingPlaneOptions,
    LpRelaxState,
};
use linksched::oracles::independent_masks;
use linksched::{PowerMode, Schedule};
use proptest::prelude::*;

fn members(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn accumulated_cuts_hold_on_every_independent_set(seed in any::<u64>(), kind in 0usize..3, n in 2usize..10) {
        let set = instance(PowerMode::Arbitrary, kind, n, seed, 0.01, 0.3);
        let out = schedule_cutting_plane(&set, &CuttingPlaneOptions::default()).unwrap();
        let indep = independent_masks(&set).unwrap();
        for cut in &out.cuts {
            for (mask, ok) in indep.iter().enumerate() {
                if *ok {
                    prop_assert!(cut.holds_for(&members(mask, n)), "{cut:?} cuts off {mask:b}");
                }
            }
        }
    }

    #[test]
    fn lifted_cuts_dominate_their_parents(seed in any::<u64>(), kind in 0usize..3, n in 3usize..12) {
        let set = instance(PowerMode::Arbitrary, kind, n, seed, 0.01, 0.3);
        let ilp = build_ilp(&set).unwrap();
        let everyone = vec![1.0; n];
        for i in 0..n {
            let Some(cut) = separate_min_cover(&ilp, &everyone, i, 0) else { continue };
            prop_assert!(cut.is_cover(&ilp));
            let lifted = lift_cut(&ilp, &cut);
            prop_assert_eq!(&lifted.cover, &cut.cover);
            // every point satisfying the lifted row at y = 1 satisfies the parent row
            for mask in 0..1usize << n {
                let m = members(mask, n);
                if lifted.holds_for(&m) {
                    prop_assert!(cut.holds_for(&m));
                }
            }
        }
    }

    #[test]
    fn lp_objective_never_drops_as_cuts_arrive(seed in any::<u64>(), kind in 0usize..3, n in 2usize..9) {
        let set = instance(PowerMode::Arbitrary, kind, n, seed, 0.01, 0.3);
        let ilp = build_ilp(&set).unwrap();
        let mut state = LpRelaxState::new(n, n);
        let mut last = solve_lp(&state).unwrap().objective;
        for _ in 0..20 {
            let sol = solve_lp(&state).unwrap();
            prop_assert!(sol.objective >= last - 1e-7);
            last = sol.objective;
            let mut added = false;
            for t in 0..n {
                let column = sol.column(t);
                for i in 0..n {
                    if let Some(cut) = separate_min_cover(&ilp, &column, i, t) {
                        added |= state.add_cut(lift_cut(&ilp, &cut));
                    }
                }
            }
            if !added {
                break;
            }
        }
    }

    #[test]
    fn relabelled_slots_stay_feasible(seed in any::<u64>(), kind in 0usize..3, n in 2usize..9, rot in 0usize..8) {
        let set = instance(PowerMode::Arbitrary, kind, n, seed, 0.01, 0.3);
        let out = schedule_cutting_plane(&set, &CuttingPlaneOptions::default()).unwrap();
        let mut slots = out.schedule.slots.clone();
        let len = slots.len();
        slots.rotate_left(rot % len);
        let permuted = Schedule::new(slots);
        prop_assert_eq!(permuted.len(), len);
        permuted.validate(&set, 1e-9).unwrap();
    }
}
