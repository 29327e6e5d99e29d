use anticross_bench::{family_member, reference, small, X_NEAR};
use anticross_core::find_crossing;

#[test]
fn fixture_sizes() {
    assert_eq!(reference().n(), 11);
    assert_eq!(small().n(), 7);
    assert_eq!(family_member(6).n(), 6 * 4 + 7);
}

#[test]
fn fixtures_are_in_the_crossing_regime() {
    for spec in [reference(), family_member(2), family_member(6)] {
        assert!(spec.crossing_regime());
        assert!(find_crossing(&spec).is_ok());
    }
}

#[test]
fn small_fixture_crosses_beyond_the_schedule_start() {
    let spec = small();
    assert!(spec.crossing_regime());
    assert!(find_crossing(&spec).is_err());
}

#[test]
fn near_field_is_below_the_reference_crossing() {
    let cp = find_crossing(&reference()).unwrap();
    assert!(X_NEAR < cp.x_c && cp.x_c - X_NEAR < 0.3);
}
