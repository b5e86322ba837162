//! Plain-text dependence files.
//!
//! One vector per line: `[lo,hi] [lo,hi] tag weight`, where bounds are
//! integers or `inf`/`-inf`, and `tag` is `always` or an assumption id.
//! `#` starts a comment.
//!
//! ```text
//! # elimination update
//! [1,1] [0,0]     always   1
//! [1,1] [1,inf]   always   1
//! [1,1] [-inf,inf] no-pivot 0.01
//! ```

use std::fmt::Write as _;

use super::{Bound, DepTag, DistanceVector, IntervalInt, ScheduleError};

fn parse_bound(tok: &str) -> Option<Bound> {
    match tok {
        "inf" | "+inf" => Some(Bound::PosInf),
        "-inf" => Some(Bound::NegInf),
        _ => tok.parse().ok().map(Bound::Finite),
    }
}

fn parse_interval(tok: &str, line: usize) -> Result<IntervalInt, ScheduleError> {
    let err = |msg: String| ScheduleError::Parse { line, message: msg };
    let inner = tok
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err(format!("expected `[lo,hi]`, found `{tok}`")))?;
    let (lo, hi) = inner
        .split_once(',')
        .ok_or_else(|| err(format!("expected `[lo,hi]`, found `{tok}`")))?;
    let lo = parse_bound(lo.trim()).ok_or_else(|| err(format!("bad bound `{lo}`")))?;
    let hi = parse_bound(hi.trim()).ok_or_else(|| err(format!("bad bound `{hi}`")))?;
    IntervalInt::new(lo, hi).map_err(|e| err(e.to_string()))
}

pub fn parse_dependences(text: &str) -> Result<Vec<DistanceVector>, ScheduleError> {
    let mut deps = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or_default().trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(ScheduleError::Parse {
                line,
                message: format!("expected `[lo,hi] [lo,hi] tag weight`, found {} fields", toks.len()),
            });
        }
        let components = vec![parse_interval(toks[0], line)?, parse_interval(toks[1], line)?];
        let tag = match toks[2] {
            "always" => DepTag::Always,
            id => DepTag::Assumed(id.to_owned()),
        };
        let weight: f64 = toks[3].parse().map_err(|_| ScheduleError::Parse {
            line,
            message: format!("bad weight `{}`", toks[3]),
        })?;
        let d = DistanceVector::new(components, tag, weight).map_err(|e| ScheduleError::Parse {
            line,
            message: e.to_string(),
        })?;
        deps.push(d);
    }
    Ok(deps)
}

pub fn format_dependences(deps: &[DistanceVector]) -> String {
    let mut s = String::new();
    for d in deps {
        for c in d.components() {
            let _ = write!(s, "[{},{}] ", c.lo(), c.hi());
        }
        let tag = d.assumption().unwrap_or("always");
        let _ = writeln!(s, "{tag} {}", d.weight());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{gaussj_dependences, givens_dependences};

    #[test]
    fn presets_round_trip() {
        for deps in [givens_dependences(), gaussj_dependences()] {
            assert_eq!(parse_dependences(&format_dependences(&deps)).unwrap(), deps);
        }
    }

    #[test]
    fn module_doc_example() {
        let text = "# elimination update\n[1,1] [0,0]     always   1\n[1,1] [1,inf]   always   1\n[1,1] [-inf,inf] no-pivot 0.01\n";
        assert_eq!(parse_dependences(text).unwrap(), gaussj_dependences());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_dependences("\n[0,0] [1,1] always 1\n[1,0] [0,0] always 1\n").unwrap_err();
        assert!(matches!(e, ScheduleError::Parse { line: 3, .. }), "{e}");
        let e = parse_dependences("[0,0] [1,1] always 0.5\n").unwrap_err();
        assert!(matches!(e, ScheduleError::Parse { line: 1, .. }));
        assert!(parse_dependences("[0,0] 1 always 1").is_err());
        assert!(parse_dependences("[0,x] [1,1] always 1").is_err());
        assert!(parse_dependences("[0,0] [1,1] always").is_err());
    }
}
