use krss_core::verify::{run, Config, Suite};

#[test]
fn acceptance() {
    let outcomes = run(Suite::All, &Config::default());
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.criterion).collect();
    assert_eq!(outcomes.len(), 9);
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn flipped_transfer_is_caught() {
    let outcomes = run(Suite::All, &Config::default().with_flipped_transfer());
    let first = outcomes.iter().find(|o| !o.passed).expect("mutation must be detected");
    assert_eq!(first.suite, Suite::Coeffs);
    assert!(first.witness.is_some());
}
