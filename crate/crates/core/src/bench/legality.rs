use std::path::PathBuf;
use std::str::FromStr;

use super::BenchError;
use crate::schedule::{
    check_schedule, gaussj_dependences, givens_dependences, parse_dependences, DistanceVector, SkewTileSchedule,
    Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Givens,
    Gaussj,
}

impl FromStr for Preset {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "givens" => Ok(Preset::Givens),
            "gaussj" => Ok(Preset::Gaussj),
            _ => Err(BenchError::Usage(format!("unknown preset `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DepSource {
    Preset(Preset),
    File(PathBuf),
}

impl DepSource {
    fn load(&self) -> Result<Vec<DistanceVector>, BenchError> {
        match self {
            DepSource::Preset(Preset::Givens) => Ok(givens_dependences()),
            DepSource::Preset(Preset::Gaussj) => Ok(gaussj_dependences()),
            DepSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok(parse_dependences(&text)?)
            }
        }
    }
}

/// `identity`, `wavefront`, or four comma-separated integers in row-major order.
pub fn parse_skew(s: &str) -> Result<[[i64; 2]; 2], BenchError> {
    match s.trim() {
        "identity" => return Ok([[1, 0], [0, 1]]),
        "wavefront" => return Ok([[1, 0], [1, 1]]),
        _ => {}
    }
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| BenchError::Usage(format!("bad skew `{s}`")))?;
    match v[..] {
        [a, b, c, d] => Ok([[a, b], [c, d]]),
        _ => Err(BenchError::Usage(format!("skew needs 4 entries, got `{s}`"))),
    }
}

/// `T` or `T0,T1`.
pub fn parse_tile(s: &str) -> Result<[i64; 2], BenchError> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| BenchError::Usage(format!("bad tile `{s}`")))?;
    match v[..] {
        [t] => Ok([t, t]),
        [t0, t1] => Ok([t0, t1]),
        _ => Err(BenchError::Usage(format!("tile needs 1 or 2 entries, got `{s}`"))),
    }
}

pub fn legality(source: &DepSource, skew: [[i64; 2]; 2], tile: [i64; 2]) -> Result<Verdict, BenchError> {
    let deps = source.load()?;
    let schedule = SkewTileSchedule::new(skew, tile)?;
    Ok(check_schedule(&deps, &schedule)?)
}

pub fn verdict_exit_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Legal => 0,
        Verdict::LegalUnderAssumptions(_) => 3,
        Verdict::Illegal(_) => 4,
    }
}
