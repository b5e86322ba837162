use std::collections::BTreeSet;
use std::fmt;

use super::{DepTag, DistanceVector, IntervalInt, ScheduleError};
use crate::numerics::floord;

/// Default tile edge, matching the 32-wide blocks of the hand-tiled kernels.
pub const DEFAULT_TILE: i64 = 32;

/// A unimodular 2-D skew followed by rectangular tiling of the skewed space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkewTileSchedule {
    skew: [[i64; 2]; 2],
    tile: [i64; 2],
}

impl SkewTileSchedule {
    pub fn new(skew: [[i64; 2]; 2], tile: [i64; 2]) -> Result<Self, ScheduleError> {
        let det = skew[0][0] * skew[1][1] - skew[0][1] * skew[1][0];
        if det.abs() != 1 {
            return Err(ScheduleError::Invalid(format!(
                "skew {skew:?} has determinant {det}, expected +1 or -1"
            )));
        }
        if tile.iter().any(|&t| t < 1) {
            return Err(ScheduleError::Invalid(format!("tile sizes {tile:?} must be >= 1")));
        }
        Ok(SkewTileSchedule { skew, tile })
    }

    pub fn identity(tile: i64) -> Result<Self, ScheduleError> {
        Self::new([[1, 0], [0, 1]], [tile, tile])
    }

    /// `(k, i) -> (k, k + i)`, square tiles of edge `tile`.
    pub fn wavefront(tile: i64) -> Result<Self, ScheduleError> {
        Self::new([[1, 0], [1, 1]], [tile, tile])
    }

    pub fn skew(&self) -> [[i64; 2]; 2] {
        self.skew
    }

    pub fn tile(&self) -> [i64; 2] {
        self.tile
    }

    fn det(&self) -> i64 {
        self.skew[0][0] * self.skew[1][1] - self.skew[0][1] * self.skew[1][0]
    }

    /// Skewed coordinates of an iteration point.
    #[inline]
    pub fn map(&self, (k, i): (i64, i64)) -> (i64, i64) {
        let s = &self.skew;
        (s[0][0] * k + s[0][1] * i, s[1][0] * k + s[1][1] * i)
    }

    /// Inverse of [`map`](Self::map); exact because the skew is unimodular.
    #[inline]
    pub fn unmap(&self, (c0, c1): (i64, i64)) -> (i64, i64) {
        let s = &self.skew;
        let det = self.det();
        (
            det * (s[1][1] * c0 - s[0][1] * c1),
            det * (-s[1][0] * c0 + s[0][0] * c1),
        )
    }

    /// Tile holding an iteration point.
    #[inline]
    pub fn tile_of(&self, p: (i64, i64)) -> Tile {
        let (c0, c1) = self.map(p);
        Tile {
            t0: floord(c0, self.tile[0]).expect("tile sizes are positive"),
            t1: floord(c1, self.tile[1]).expect("tile sizes are positive"),
        }
    }
}

/// Tile coordinates in the skewed space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tile {
    pub t0: i64,
    pub t1: i64,
}

impl Tile {
    pub fn new(t0: i64, t1: i64) -> Self {
        Tile { t0, t1 }
    }

    pub fn sum(&self) -> i64 {
        self.t0 + self.t1
    }
}

/// Outcome of checking a schedule against a dependence set.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Legal,
    /// Legal provided every named assumption holds at run time.
    LegalUnderAssumptions(BTreeSet<String>),
    /// First always-present dependence the schedule violates.
    Illegal(DistanceVector),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Legal => f.write_str("Legal"),
            Verdict::LegalUnderAssumptions(ids) => {
                let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
                write!(f, "LegalUnderAssumptions {{{}}}", ids.join(", "))
            }
            Verdict::Illegal(d) => write!(f, "Illegal {d}"),
        }
    }
}

/// Image of a distance vector under the schedule's skew, in interval
/// arithmetic. Tag and weight are carried over.
pub fn apply_skew(schedule: &SkewTileSchedule, d: &DistanceVector) -> Result<DistanceVector, ScheduleError> {
    if d.dim() != 2 {
        return Err(ScheduleError::Dimension {
            expected: 2,
            found: d.dim(),
        });
    }
    let c = d.components();
    let image = schedule.skew.iter().map(|row| row[0] * c[0] + row[1] * c[1]).collect();
    Ok(d.with_components(image))
}

/// A dependence is satisfied when every component of its skewed image is
/// nonnegative, which makes the band fully permutable.
pub fn is_satisfied(schedule: &SkewTileSchedule, d: &DistanceVector) -> Result<bool, ScheduleError> {
    Ok(apply_skew(schedule, d)?
        .components()
        .iter()
        .all(IntervalInt::nonnegative))
}

pub fn check_schedule(deps: &[DistanceVector], schedule: &SkewTileSchedule) -> Result<Verdict, ScheduleError> {
    let mut needed = BTreeSet::new();
    for d in deps {
        if is_satisfied(schedule, d)? {
            continue;
        }
        match d.tag() {
            DepTag::Always => return Ok(Verdict::Illegal(d.clone())),
            DepTag::Assumed(id) => {
                needed.insert(id.clone());
            }
        }
    }
    Ok(if needed.is_empty() {
        Verdict::Legal
    } else {
        Verdict::LegalUnderAssumptions(needed)
    })
}

/// Splits off assumed dependences less likely than `threshold`; those are
/// the ones a transformation search may ignore. Order is preserved.
pub fn speculative_partition(deps: &[DistanceVector], threshold: f64) -> (Vec<DistanceVector>, Vec<DistanceVector>) {
    deps.iter()
        .cloned()
        .partition(|d| !(matches!(d.tag(), DepTag::Assumed(_)) && d.weight() < threshold))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{gaussj_dependences, givens_dependences, Bound, NO_PIVOT};
    use proptest::prelude::*;

    fn skewed() -> SkewTileSchedule {
        SkewTileSchedule::wavefront(DEFAULT_TILE).unwrap()
    }

    #[test]
    fn schedule_validation() {
        assert!(SkewTileSchedule::new([[2, 0], [0, 1]], [4, 4]).is_err());
        assert!(SkewTileSchedule::new([[1, 0], [1, 1]], [0, 4]).is_err());
        assert!(SkewTileSchedule::new([[0, 1], [1, 0]], [4, 4]).is_ok());
    }

    #[test]
    fn map_round_trips() {
        for skew in [[[1, 0], [1, 1]], [[0, 1], [1, 0]], [[2, 1], [1, 1]], [[1, -1], [0, 1]]] {
            let s = SkewTileSchedule::new(skew, [3, 5]).unwrap();
            for k in -4..4 {
                for i in -4..4 {
                    assert_eq!(s.unmap(s.map((k, i))), (k, i));
                }
            }
        }
    }

    #[test]
    fn skew_examples() {
        let s = skewed();
        let d = apply_skew(&s, &DistanceVector::uniform(&[1, -1])).unwrap();
        assert_eq!(d, DistanceVector::uniform(&[1, 0]));
        let id = SkewTileSchedule::identity(8).unwrap();
        for d in givens_dependences().iter().chain(&gaussj_dependences()) {
            assert_eq!(&apply_skew(&id, d).unwrap(), d);
        }
        let d = DistanceVector::always(vec![IntervalInt::point(1), IntervalInt::at_least(1)]);
        let img = apply_skew(&s, &d).unwrap();
        assert_eq!(img.components(), &[IntervalInt::point(1), IntervalInt::at_least(2)]);
        assert!(apply_skew(&s, &DistanceVector::uniform(&[1, 0, 0])).is_err());
    }

    #[test]
    fn preset_verdicts() {
        let id = SkewTileSchedule::identity(DEFAULT_TILE).unwrap();
        assert_eq!(
            check_schedule(&givens_dependences(), &id).unwrap(),
            Verdict::Illegal(DistanceVector::uniform(&[1, -1]))
        );
        assert_eq!(
            check_schedule(&givens_dependences(), &skewed()).unwrap(),
            Verdict::Legal
        );
        let v = check_schedule(&gaussj_dependences(), &skewed()).unwrap();
        assert_eq!(v, Verdict::LegalUnderAssumptions([NO_PIVOT.to_string()].into()));
        assert_eq!(v.to_string(), "LegalUnderAssumptions {no-pivot}");
        let pivot = apply_skew(&skewed(), &gaussj_dependences()[2]).unwrap();
        assert_eq!(pivot.components()[1].lo(), Bound::NegInf);
    }

    #[test]
    fn illegal_reports_first_violation() {
        let deps = vec![
            DistanceVector::uniform(&[0, 1]),
            DistanceVector::uniform(&[1, -2]),
            DistanceVector::uniform(&[1, -1]),
        ];
        let v = check_schedule(&deps, &skewed()).unwrap();
        assert_eq!(v, Verdict::Illegal(DistanceVector::uniform(&[1, -2])));
    }

    #[test]
    fn partition_rules() {
        let deps = gaussj_dependences();
        let (kept, spec) = speculative_partition(&deps, 0.0);
        assert_eq!((kept.len(), spec.len()), (3, 0));
        let (kept, spec) = speculative_partition(&deps, 1.0);
        assert_eq!((kept.len(), spec.len()), (2, 1));
        let (kept, spec) = speculative_partition(&deps, 0.05);
        assert_eq!(spec, vec![deps[2].clone()]);
        assert_eq!(kept, deps[..2].to_vec());
        assert_eq!(check_schedule(&kept, &skewed()).unwrap(), Verdict::Legal);
    }

    fn arb_interval() -> impl Strategy<Value = IntervalInt> {
        (-20i64..20, 0i64..10, 0u8..4).prop_map(|(lo, w, shape)| match shape {
            0 => IntervalInt::point(lo),
            1 => IntervalInt::finite(lo, lo + w).unwrap(),
            2 => IntervalInt::at_least(lo),
            _ => IntervalInt::new(Bound::NegInf, Bound::Finite(lo)).unwrap(),
        })
    }

    fn arb_skew() -> impl Strategy<Value = SkewTileSchedule> {
        prop::sample::select(vec![
            [[1, 0], [0, 1]],
            [[1, 0], [1, 1]],
            [[1, 0], [2, 1]],
            [[0, 1], [1, 0]],
            [[1, 1], [0, 1]],
            [[2, 1], [1, 1]],
            [[1, -1], [0, 1]],
            [[-1, 0], [0, 1]],
        ])
        .prop_map(|s| SkewTileSchedule::new(s, [4, 4]).unwrap())
    }

    proptest! {
        #[test]
        fn skew_is_linear(s in arb_skew(), a0 in -50i64..50, a1 in -50i64..50, b0 in -50i64..50, b1 in -50i64..50) {
            let a = DistanceVector::uniform(&[a0, a1]);
            let b = DistanceVector::uniform(&[b0, b1]);
            let sum = DistanceVector::uniform(&[a0 + b0, a1 + b1]);
            let lhs = apply_skew(&s, &sum).unwrap();
            let ia = apply_skew(&s, &a).unwrap();
            let ib = apply_skew(&s, &b).unwrap();
            let rhs: Vec<IntervalInt> = ia.components().iter().zip(ib.components()).map(|(x, y)| *x + *y).collect();
            prop_assert_eq!(lhs.components(), &rhs[..]);
        }

        #[test]
        fn skew_is_linear_on_intervals(s in arb_skew(), a in (arb_interval(), arb_interval()), b in (arb_interval(), arb_interval())) {
            let da = DistanceVector::always(vec![a.0, a.1]);
            let db = DistanceVector::always(vec![b.0, b.1]);
            let dsum = DistanceVector::always(vec![a.0 + b.0, a.1 + b.1]);
            let lhs = apply_skew(&s, &dsum).unwrap();
            let ia = apply_skew(&s, &da).unwrap();
            let ib = apply_skew(&s, &db).unwrap();
            let rhs: Vec<IntervalInt> = ia.components().iter().zip(ib.components()).map(|(x, y)| *x + *y).collect();
            prop_assert_eq!(lhs.components(), &rhs[..]);
        }

        #[test]
        fn verdict_is_monotone(s in arb_skew(), base in prop::collection::vec((arb_interval(), arb_interval(), any::<bool>()), 0..6), extra in (arb_interval(), arb_interval(), any::<bool>())) {
            let mk = |(c0, c1, assumed): (IntervalInt, IntervalInt, bool)| {
                if assumed {
                    DistanceVector::assumed(vec![c0, c1], if c0.lo() > Bound::Finite(0) { "a" } else { "b" }, 0.5).unwrap()
                } else {
                    DistanceVector::always(vec![c0, c1])
                }
            };
            let deps: Vec<DistanceVector> = base.into_iter().map(mk).collect();
            let before = check_schedule(&deps, &s).unwrap();
            let mut more = deps.clone();
            more.push(mk(extra));
            let after = check_schedule(&more, &s).unwrap();
            if matches!(before, Verdict::Illegal(_)) {
                prop_assert!(matches!(after, Verdict::Illegal(_)));
            }
            // Dropping an assumed dependence never enlarges the assumption set.
            if let Some(pos) = deps.iter().position(|d| d.assumption().is_some()) {
                let mut fewer = deps.clone();
                fewer.remove(pos);
                let needed = |v: &Verdict| match v {
                    Verdict::LegalUnderAssumptions(ids) => ids.clone(),
                    _ => BTreeSet::new(),
                };
                if !matches!(before, Verdict::Illegal(_)) {
                    let after = check_schedule(&fewer, &s).unwrap();
                    prop_assert!(needed(&after).is_subset(&needed(&before)));
                }
            }
        }
    }
}
