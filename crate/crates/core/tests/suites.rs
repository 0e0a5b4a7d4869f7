use dowling_core::exec;
use dowling_core::suites::{run_suite, SuiteConfig, SUITES};
use dowling_core::Error;

/// Smaller grids than the defaults so the debug build stays quick.
fn light(suite: &str) -> SuiteConfig {
    let mut c = SuiteConfig::default();
    match suite {
        "thm6.1" | "cor6.5" => {
            c.m = Some(6);
            c.r = Some(2);
            c.j = Some(2);
        }
        "cor6.4" => {
            c.m = Some(5);
            c.r = Some(2);
            c.j = Some(1);
        }
        "thm3.2" | "thm3.3" => c.samples = Some(2),
        _ => {}
    }
    c
}

#[test]
fn every_suite_passes() {
    for suite in SUITES {
        let report = run_suite(suite, &light(suite)).unwrap_or_else(|e| panic!("{suite}: {e}"));
        assert!(
            report.passed,
            "{suite}: {}",
            serde_json::to_string_pretty(&report).unwrap()
        );
        assert!(!report.sections[0].entries.is_empty(), "{suite}");
    }
}

#[test]
fn output_is_identical_across_parallelism() {
    for suite in ["cor3.4", "thm5.4", "thm6.1", "prop4.5"] {
        let c = light(suite);
        let parallel = serde_json::to_string(&run_suite(suite, &c).unwrap()).unwrap();
        let sequential =
            exec::sequential(|| serde_json::to_string(&run_suite(suite, &c).unwrap()).unwrap());
        assert_eq!(parallel, sequential, "{suite}");
    }
}

#[test]
fn report_embeds_config() {
    let c = SuiteConfig {
        r: Some(2),
        k: Some(1),
        n: Some(2),
        ..SuiteConfig::default()
    };
    let json = serde_json::to_value(run_suite("thm5.4", &c).unwrap()).unwrap();
    assert_eq!(json["config"]["r"], 2);
    assert_eq!(json["sections"][0]["entries"][0]["epsilon"], -1);
    assert_eq!(
        json["sections"][0]["entries"][0]["verdict"],
        "exact-up-to-sign"
    );
}

#[test]
fn bad_input_is_rejected() {
    assert!(matches!(
        run_suite("bogus", &SuiteConfig::default()),
        Err(Error::UnknownSuite(_))
    ));
    let c = SuiteConfig {
        m: Some(4),
        r: Some(2),
        j: Some(1),
        ..SuiteConfig::default()
    };
    assert!(matches!(
        run_suite("thm6.1", &c),
        Err(Error::InvalidParameter(_))
    ));
    let mut c = SuiteConfig::default();
    c.guards.max_lattice_m = 5;
    assert!(matches!(run_suite("cor3.4", &c), Err(Error::Guard { .. })));
}
