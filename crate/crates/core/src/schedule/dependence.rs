use std::fmt;

use super::{IntervalInt, ScheduleError};

/// Whether a dependence always holds or only when an assumption fails.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DepTag {
    Always,
    /// Manifests only if the named speculative assumption is violated.
    Assumed(String),
}

/// Dependence distance vector over a loop nest, one interval per loop.
///
/// `weight` is the likelihood that the dependence manifests at run time.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceVector {
    components: Vec<IntervalInt>,
    tag: DepTag,
    weight: f64,
}

impl DistanceVector {
    pub fn new(components: Vec<IntervalInt>, tag: DepTag, weight: f64) -> Result<Self, ScheduleError> {
        if components.is_empty() {
            return Err(ScheduleError::Invalid("distance vector has no components".into()));
        }
        if !(0.0..=1.0).contains(&weight) {
            return Err(ScheduleError::Invalid(format!("weight {weight} outside [0, 1]")));
        }
        if tag == DepTag::Always && weight != 1.0 {
            return Err(ScheduleError::Invalid(
                "an always-present dependence has weight 1".into(),
            ));
        }
        if let DepTag::Assumed(id) = &tag {
            if id.is_empty() || id.chars().any(char::is_whitespace) {
                return Err(ScheduleError::Invalid(format!("bad assumption id `{id}`")));
            }
        }
        Ok(DistanceVector {
            components,
            tag,
            weight,
        })
    }

    pub fn always(components: Vec<IntervalInt>) -> Self {
        Self::new(components, DepTag::Always, 1.0).expect("nonempty components")
    }

    /// Point-valued always-present dependence.
    pub fn uniform(components: &[i64]) -> Self {
        Self::always(components.iter().map(|&c| IntervalInt::point(c)).collect())
    }

    pub fn assumed(components: Vec<IntervalInt>, assumption: &str, weight: f64) -> Result<Self, ScheduleError> {
        Self::new(components, DepTag::Assumed(assumption.to_owned()), weight)
    }

    pub fn components(&self) -> &[IntervalInt] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn tag(&self) -> &DepTag {
        &self.tag
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn assumption(&self) -> Option<&str> {
        match &self.tag {
            DepTag::Always => None,
            DepTag::Assumed(id) => Some(id),
        }
    }

    pub(crate) fn with_components(&self, components: Vec<IntervalInt>) -> Self {
        DistanceVector {
            components,
            tag: self.tag.clone(),
            weight: self.weight,
        }
    }
}

impl fmt::Display for DistanceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, c) in self.components.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Dependences of the rotation kernel's `(k, i)` macro-iterations.
pub fn givens_dependences() -> Vec<DistanceVector> {
    [[0, 1], [1, -1], [1, 0], [1, 1]]
        .iter()
        .map(|d| DistanceVector::uniform(d))
        .collect()
}

/// Assumption id under which row permutations are ignored.
pub const NO_PIVOT: &str = "no-pivot";

/// Default likelihood attached to the pivoting dependence.
pub const PIVOT_WEIGHT: f64 = 0.01;

/// Dependences of the elimination update `(k, i)`: the row carried to the
/// next step, the pivot-row broadcast, and the row swap, which is only
/// present when a zero pivot forces a permutation.
pub fn gaussj_dependences() -> Vec<DistanceVector> {
    vec![
        DistanceVector::uniform(&[1, 0]),
        DistanceVector::always(vec![IntervalInt::point(1), IntervalInt::at_least(1)]),
        DistanceVector::assumed(vec![IntervalInt::point(1), IntervalInt::any()], NO_PIVOT, PIVOT_WEIGHT)
            .expect("valid preset"),
    ]
}
