mod common;

use std::collections::BTreeMap;

use common::{instance, weighted_instance};
use linksched::generate::{generate, GeneratorKind, ParamSpec};
use linksched::harness::{run_algorithm, Algorithm, RunOptions};
use linksched::io::{verify, AlgorithmInfo, InstanceFile, ScheduleBody, ScheduleFile};
use linksched::oblivious::schedule_fractional;
use linksched::{Error, PowerMode};
use proptest::prelude::*;

fn info(name: &str) -> AlgorithmInfo {
    AlgorithmInfo {
        name: name.into(),
        params: BTreeMap::new(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn instance_files_round_trip(seed in any::<u64>(), kind in 0usize..3, n in 0usize..25, mode in 0usize..3) {
        let mode = [PowerMode::Oblivious, PowerMode::Uniform, PowerMode::Arbitrary][mode];
        let set = instance(mode, kind, n, seed, 0.01, 1.0);
        let file = InstanceFile::from_link_set(&set, None);
        let text = file.to_canonical_string().unwrap();
        let back = InstanceFile::parse(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.to_canonical_string().unwrap(), text);
        let parsed = back.to_link_set().unwrap();
        prop_assert_eq!(parsed.links(), set.links());
    }

    #[test]
    fn schedule_files_round_trip(seed in any::<u64>(), kind in 0usize..3, n in 1usize..20) {
        let set = weighted_instance(kind, n, seed);
        let file = InstanceFile::from_link_set(&set, None);
        let body = ScheduleBody::from(schedule_fractional(&set).unwrap());
        let sched = ScheduleFile::build(&file, &set, info("fractional-partition"), body, 1e-9).unwrap();
        let text = sched.to_canonical_string().unwrap();
        let back = ScheduleFile::parse(&text).unwrap();
        prop_assert_eq!(&back, &sched);
        prop_assert_eq!(back.to_canonical_string().unwrap(), text);
        prop_assert!(verify(&file, &back, 1e-9).unwrap().passed);
    }
}

#[test]
fn generation_is_seed_deterministic() {
    let spec = ParamSpec::default();
    for kind in [
        GeneratorKind::UniformRandom,
        GeneratorKind::Clustered,
        GeneratorKind::Line,
    ] {
        let a = generate(kind, 12, 99, &spec).unwrap();
        let b = generate(kind, 12, 99, &spec).unwrap();
        let c = generate(kind, 12, 100, &spec).unwrap();
        assert_eq!(
            a.to_canonical_string().unwrap(),
            b.to_canonical_string().unwrap()
        );
        assert_ne!(a.digest().unwrap(), c.digest().unwrap());
    }
}

#[test]
fn demand_defaults_to_one_and_unknown_fields_fail() {
    let set = instance(PowerMode::Oblivious, 0, 3, 5, 0.01, 1.0);
    let text = InstanceFile::from_link_set(&set, None)
        .to_canonical_string()
        .unwrap();
    let stripped = text.replace("\"demand\": 1.0,", "");
    assert_ne!(stripped, text);
    let back = InstanceFile::parse(&stripped)
        .unwrap()
        .to_link_set()
        .unwrap();
    assert!(back.links().iter().all(|l| l.demand == 1.0));
    let extra = text.replacen("{", "{\n  \"surprise\": 1,", 1);
    assert!(InstanceFile::parse(&extra).is_err());
}

#[test]
fn schedules_are_bound_to_their_instance() {
    let a = InstanceFile::from_link_set(&instance(PowerMode::Oblivious, 0, 5, 1, 0.01, 1.0), None);
    let b = InstanceFile::from_link_set(&instance(PowerMode::Oblivious, 0, 5, 2, 0.01, 1.0), None);
    let set = a.to_link_set().unwrap();
    let out = run_algorithm(&set, Algorithm::LinearPartition, &RunOptions::default()).unwrap();
    let sched = ScheduleFile::build(&a, &set, info("linear-partition"), out.body, 1e-9).unwrap();
    assert!(verify(&a, &sched, 1e-9).unwrap().passed);
    assert!(matches!(
        verify(&b, &sched, 1e-9),
        Err(Error::DigestMismatch { .. })
    ));
}

#[test]
fn unverifiable_schedules_are_not_packaged() {
    // everything in one slot on a crowded instance
    let set = instance(PowerMode::Uniform, 0, 12, 3, 0.01, 0.2);
    let file = InstanceFile::from_link_set(&set, None);
    let body = ScheduleBody::Integral {
        slots: vec![(0..12).collect()],
    };
    assert!(matches!(
        ScheduleFile::build(&file, &set, info("manual"), body, 1e-9),
        Err(Error::Verification(_))
    ));
}
