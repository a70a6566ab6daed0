use clap::Parser;
use proptest::prelude::*;
use wporb_cli::{build_report, Cli, Report};

fn report(args: &[String]) -> Report {
    let mut argv = vec!["wporb".to_string()];
    argv.extend_from_slice(args);
    build_report(&Cli::try_parse_from(argv).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn json_round_trips(q in prop::collection::vec(1u64..=7, 2..=4), seed in any::<u64>()) {
        let weights = q.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let r = report(&["--weights".into(), weights, "--seed".into(), seed.to_string()]);
        let json = r.to_json();
        prop_assert!(json.ends_with('\n'));
        prop_assert!(!json.contains('.'), "no decimals in {}", json);
        prop_assert_eq!(Report::from_json(&json).unwrap(), r);
    }
}

#[test]
fn three_point_report_round_trips() {
    let r = report(&[
        "threepoint".into(),
        "--weights".into(),
        "1,2,2,3,3,3".into(),
        "--triple".into(),
        "g2,g2".into(),
        "--classes".into(),
        "1,0,0".into(),
    ]);
    assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
}
