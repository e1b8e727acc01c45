use mirp::verify::{run_all, run_suite, VerifyConfig, SUITES};

#[test]
fn default_suites_pass() {
    let r = run_all(&VerifyConfig::default()).unwrap();
    for s in &r.suites {
        println!("{:28} budget {} checked {:7} {:.2}s", s.name, s.budget, s.checked, s.seconds);
        assert!(s.passed(), "{}: {:?}", s.name, s.failures);
        assert!(s.checked > 0, "{}", s.name);
    }
    assert_eq!(r.suites.len(), SUITES.len());
}

#[test]
fn injected_fault_is_named() {
    let cfg = VerifyConfig { inject_fault: true, max_degree: 2, ..VerifyConfig::default() };
    let r = run_suite("prelie", &cfg).unwrap();
    assert_eq!(r.failures.len(), 1);
    assert!(r.failures[0].contains("(z(0,0), z(0,0), z(0,0))"), "{}", r.failures[0]);
}

#[test]
fn degree_one_is_vacuous_where_applicable() {
    let r = run_all(&VerifyConfig { max_degree: 1, ..VerifyConfig::default() }).unwrap();
    assert!(r.passed);
}
