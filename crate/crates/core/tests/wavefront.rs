//! No dependence may connect two tiles of one wavefront.

use proptest::prelude::*;
use wavespec::schedule::{
    assert_wavefront_independence, gaussj_dependences, givens_dependences, wavefronts, DepTag, DistanceVector,
    IterationDomain, SkewTileSchedule,
};

fn gaussj_always() -> Vec<DistanceVector> {
    gaussj_dependences()
        .into_iter()
        .filter(|d| *d.tag() == DepTag::Always)
        .collect()
}

#[test]
fn exhaustive_up_to_20() {
    let givens = givens_dependences();
    let gaussj = gaussj_always();
    for tile in [1, 2, 3, 4, 5, 7, 8, 32] {
        let s = SkewTileSchedule::wavefront(tile).unwrap();
        for a in 1..=20usize {
            for b in 1..=20usize {
                let rect = wavefronts(&IterationDomain::rect(0..a as i64, 0..b as i64), &s);
                assert!(
                    assert_wavefront_independence(&givens, &rect, &s),
                    "rect {a}x{b} tile {tile}"
                );
                assert!(
                    assert_wavefront_independence(&gaussj, &rect, &s),
                    "rect {a}x{b} tile {tile}"
                );
                if a >= 2 {
                    let g = wavefronts(&IterationDomain::givens(a, b), &s);
                    assert!(
                        assert_wavefront_independence(&givens, &g, &s),
                        "givens {a}x{b} tile {tile}"
                    );
                }
            }
            if a >= 2 {
                for k0 in 0..a - 1 {
                    let j = wavefronts(&IterationDomain::gaussj(a, k0), &s);
                    assert!(
                        assert_wavefront_independence(&gaussj, &j, &s),
                        "gaussj {a} from {k0} tile {tile}"
                    );
                }
            }
        }
    }
}

#[test]
fn unskewed_tiles_conflict() {
    let s = SkewTileSchedule::identity(2).unwrap();
    let plan = wavefronts(&IterationDomain::givens(8, 8), &s);
    assert!(!assert_wavefront_independence(&givens_dependences(), &plan, &s));
}

#[test]
fn every_point_in_exactly_one_tile() {
    let s = SkewTileSchedule::wavefront(3).unwrap();
    let d = IterationDomain::givens(13, 9);
    let plan = wavefronts(&d, &s);
    let mut seen: Vec<(i64, i64)> = plan
        .wavefronts()
        .iter()
        .flatten()
        .flat_map(|&t| plan.tile_points(t))
        .collect();
    seen.sort_unstable();
    let mut expected: Vec<_> = d.points().collect();
    expected.sort_unstable();
    assert_eq!(seen, expected);
}

proptest! {
    #[test]
    fn random_domains(m in 2usize..=20, n in 1usize..=20, t0 in 1i64..6, t1 in 1i64..6) {
        let s = SkewTileSchedule::new([[1, 0], [1, 1]], [t0, t1]).unwrap();
        let plan = wavefronts(&IterationDomain::givens(m, n), &s);
        prop_assert!(assert_wavefront_independence(&givens_dependences(), &plan, &s));
        // Tiles of one wavefront are listed in increasing t1.
        for wave in plan.wavefronts() {
            prop_assert!(wave.windows(2).all(|w| w[0].t1 < w[1].t1));
        }
    }
}
