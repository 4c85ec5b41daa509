use dchoice::scenario::AngleUnit;
use dchoice::{parse_scenario, serialize, ErrorKind, Value};
use proptest::prelude::*;

#[test]
fn eraser_example_parses() {
    let s = parse_scenario("experiment = double_slit_eraser\nmarker = 90 deg\neraser = polarizer:45deg\n").unwrap();
    assert_eq!(s.experiment, "double_slit_eraser");
    assert_eq!(s.value("marker"), Value::Angle { value: 90.0, unit: AngleUnit::Deg });
    assert_eq!(s.word("eraser"), "polarizer:45deg");
    assert_eq!(s.seed, 0);
}

#[test]
fn type_mismatch_reports_its_line() {
    let e = parse_scenario("# header\nexperiment = double_slit_eraser\n\nmarker = banana\n").unwrap_err();
    assert_eq!(e.line, 4);
    assert_eq!(e.column, 10);
    assert!(matches!(e.kind, ErrorKind::TypeMismatch { .. }), "{e}");
    assert!(e.to_string().starts_with("line 4, column 10"));
}

#[test]
fn bare_numbers_are_not_angles() {
    let e = parse_scenario("experiment = double_slit_eraser\nmarker = 90\n").unwrap_err();
    assert!(e.to_string().contains("deg"), "{e}");
    let e = parse_scenario("experiment = herzog\nphase_step = 0.1\n").unwrap_err();
    assert_eq!(e.line, 2);
}

#[test]
fn diagnostics() {
    let cases: &[(&str, usize)] = &[
        ("experiment = wheeler\nchoice = interference\nchoice = which_path\n", 3),
        ("experiment = wheeler\ncolour = red\n", 2),
        ("experiment = warp_drive\n", 1),
        ("experiment = wheeler\nthis is not a pair\n", 2),
        ("experiment = wheeler\n[optics]\n", 2),
        ("experiment = wheeler\n[screen]\npoints = 2\n", 3),
        ("experiment = wheeler\n[screen]\nwidth = 2\n", 3),
        ("experiment = nocomm\ncases = 0\n", 2),
        ("experiment = nocomm\ntol = -1.0\n", 2),
        ("experiment = nocomm\nseed = -3\n", 2),
        ("experiment = wheeler\nshots = 1.5\n", 2),
        ("experiment = herzog\nqwp = yes\n", 2),
        ("experiment = nocomm\ntol = 1e-10e\n", 2),
        ("experiment = wheeler\nchoice =\n", 2),
    ];
    for (text, line) in cases {
        let e = parse_scenario(text).unwrap_err();
        assert_eq!(e.line, *line, "{text:?}: {e}");
        assert!(e.column >= 1);
    }
    assert!(matches!(parse_scenario("seed = 1\n").unwrap_err().kind, ErrorKind::MissingExperiment));
    assert!(matches!(
        parse_scenario("experiment = wheeler\nchoice = which_path\nchoice = which_path\n").unwrap_err().kind,
        ErrorKind::DuplicateKey(_)
    ));
    assert!(matches!(
        parse_scenario("experiment = warp_drive\n").unwrap_err().kind,
        ErrorKind::UnknownExperiment(_)
    ));
    // Inverted screen is caught when the section is assembled.
    assert!(matches!(
        parse_scenario("experiment = wheeler\n[screen]\nx_min = 5\nx_max = 1\n").unwrap_err().kind,
        ErrorKind::OutOfRange { .. }
    ));
}

#[test]
fn comments_whitespace_and_sections() {
    let s = parse_scenario(
        "  # leading comment\nexperiment=free_will   # trailing\n\tchoice =   not_push\nseed = 9\n[screen]\npoints = 101\ncenter_phase = 0 rad\n",
    )
    .unwrap();
    assert_eq!(s.word("choice"), "not_push");
    assert_eq!(s.seed, 9);
    let c = s.screen_config();
    assert_eq!(c.points, 101);
    assert_eq!(c.center_phase, 0.0);
    // Keys in [screen] do not collide with top-level ones.
    assert!(parse_scenario("experiment = temporal\npoints = 11\n[screen]\npoints = 11\n").is_ok());
}

#[test]
fn corpus_round_trips() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let s = parse_scenario(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parse_scenario(&serialize(&s)).unwrap(), s, "{}", path.display());
        n += 1;
    }
    assert!(n >= 20);
}

fn literal() -> impl Strategy<Value = (String, String)> {
    prop_oneof![
        (-1e6f64..1e6).prop_map(|x| ("lambda".to_string(), format!("{}", x.abs() + 1e-3))),
        (1i64..5000).prop_map(|n| ("points".to_string(), n.to_string())),
        (-720.0f64..720.0, any::<bool>()).prop_map(|(x, deg)| (
            "t0".to_string(),
            format!("{} {}", x.abs(), if deg { "deg" } else { "rad" })
        )),
    ]
}

proptest! {
    #[test]
    fn serialize_reparses_to_equal_scenario(
        seed in any::<u32>(),
        shots in 1usize..100_000,
        lambda in 1e-6f64..1e6,
        t in 0.0f64..1e3,
        points in 2i64..5000,
        choice in prop::sample::select(vec!["decay", "cat", "passive_zeno"]),
        phase in -1e3f64..1e3,
        deg in any::<bool>(),
        sigma in 1e-3f64..1e3,
        csv in any::<bool>(),
    ) {
        let unit = if deg { "deg" } else { "rad" };
        let text = format!(
            "experiment = temporal\nseed = {seed}\nshots = {shots}\ncsv = {csv}\nscenario = {choice}\n\
             lambda = {lambda}\nt = {t}\npoints = {points}\n[screen]\nsigma = {sigma:e}\ncenter_phase = {phase}{unit}\n"
        );
        let s = parse_scenario(&text).unwrap();
        let again = parse_scenario(&serialize(&s)).unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(serialize(&again), serialize(&s));
    }

    #[test]
    fn single_values_round_trip((key, lit) in literal()) {
        let _ = key;
        let v = dchoice::scenario::parse_value(&lit).unwrap();
        prop_assert_eq!(dchoice::scenario::parse_value(&v.to_string()).unwrap(), v);
    }
}
