use proptest::prelude::*;

use flagmetric::io::{read_flag, write_flag, DataLayout};
use flagmetric::{shapes, Vec3};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // arbitrary low-order bits must survive both layouts
    #[test]
    fn flag_files_round_trip_exactly(
        noise in proptest::collection::vec(-1e-3f64..1e-3, 16 * 9 * 3),
        scale in 1e-6f64..1e6,
    ) {
        let base = shapes::sphere::<f64>(1.0, 16, 9).unwrap();
        let pts: Vec<Vec3> = base
            .points()
            .iter()
            .zip(noise.chunks(3))
            .map(|(p, n)| (*p + Vec3::new(n[0], n[1], n[2])) * scale)
            .collect();
        let f = base.with_points(pts).unwrap();
        let dir = tempfile::tempdir().unwrap();
        for layout in [DataLayout::Inline, DataLayout::Binary] {
            let path = dir.path().join("f.json");
            write_flag(&path, &f, layout).unwrap();
            let back = read_flag(&path).unwrap();
            for (a, b) in f.points().iter().zip(back.points()) {
                prop_assert_eq!(a.to_array().map(f64::to_bits), b.to_array().map(f64::to_bits));
            }
        }
    }
}
