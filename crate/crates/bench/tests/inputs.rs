use picard_bench::spiral_points;
use picard_core::count_zeros;
use picard_core::families::ParametricFamily;

#[test]
fn spiral_is_deterministic_and_spread() {
    let a = spiral_points(64, 1.0);
    assert_eq!(a, spiral_points(64, 1.0));
    let min_gap = a
        .iter()
        .enumerate()
        .flat_map(|(i, p)| a[i + 1..].iter().map(move |q| (p - q).norm()))
        .fold(f64::INFINITY, f64::min);
    assert!(min_gap > 0.05, "{min_gap}");
}

#[test]
fn benchmark_inputs_are_well_posed() {
    let f = ParametricFamily::by_key("example1").unwrap();
    for w in spiral_points(16, 1.0) {
        count_zeros(&f, w, 20.0).unwrap();
    }
}
