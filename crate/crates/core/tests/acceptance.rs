use polyhom::selftest::{criterion, SelftestOptions};

fn check(id: u32) {
    let r = criterion(id, &SelftestOptions::default());
    println!("{} criterion {} {} ({} ms): {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.name, r.millis, r.detail);
    assert!(r.passed, "criterion {id} failed: {}", r.detail);
}

#[test]
fn criterion_1_boundary_squared() {
    check(1);
}

#[test]
fn criterion_2_standard_axioms() {
    check(2);
}

#[test]
fn criterion_3_unique_horn_filling() {
    check(3);
}

#[test]
fn criterion_4_blind_extraction() {
    check(4);
}

#[test]
fn criterion_5_action_laws() {
    check(5);
}

#[test]
fn criterion_6_hurewicz_verdict() {
    check(6);
}

#[test]
fn criterion_7_tower_limit() {
    check(7);
}

#[test]
fn criterion_8_planted_faults() {
    check(8);
}

#[test]
fn criterion_9_homology_and_snf() {
    check(9);
}
