use std::collections::HashSet;

use super::{Bound, DistanceVector, SkewTileSchedule, Tile};

/// `base + slope * k`
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineBound {
    pub base: i64,
    pub slope: i64,
}

impl AffineBound {
    pub fn constant(base: i64) -> Self {
        AffineBound { base, slope: 0 }
    }

    #[inline]
    pub fn at(&self, k: i64) -> i64 {
        self.base + self.slope * k
    }
}

/// Two-level iteration space `{(k, i) : k_lo <= k < k_hi, lo(k) <= i < hi(k)}`
/// with affine inner bounds, enough for rectangles and the triangular
/// spaces of both elimination kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IterationDomain {
    k_lo: i64,
    k_hi: i64,
    i_lo: AffineBound,
    i_hi: AffineBound,
}

impl IterationDomain {
    pub fn new(k_lo: i64, k_hi: i64, i_lo: AffineBound, i_hi: AffineBound) -> Self {
        IterationDomain { k_lo, k_hi, i_lo, i_hi }
    }

    pub fn rect(k: std::ops::Range<i64>, i: std::ops::Range<i64>) -> Self {
        Self::new(
            k.start,
            k.end,
            AffineBound::constant(i.start),
            AffineBound::constant(i.end),
        )
    }

    /// Rotation kernel: `0 <= k < n`, `0 <= i < m - 1 - k`.
    pub fn givens(m: usize, n: usize) -> Self {
        Self::new(
            0,
            n as i64,
            AffineBound::constant(0),
            AffineBound {
                base: m as i64 - 1,
                slope: -1,
            },
        )
    }

    /// Elimination updates from step `k0`: `k0 <= k < n - 1`, `k < i < n`.
    pub fn gaussj(n: usize, k0: usize) -> Self {
        Self::new(
            k0 as i64,
            n as i64 - 1,
            AffineBound { base: 1, slope: 1 },
            AffineBound::constant(n as i64),
        )
    }

    pub fn k_range(&self) -> std::ops::Range<i64> {
        self.k_lo..self.k_hi
    }

    #[inline]
    pub fn i_range(&self, k: i64) -> std::ops::Range<i64> {
        self.i_lo.at(k)..self.i_hi.at(k)
    }

    #[inline]
    pub fn contains(&self, (k, i): (i64, i64)) -> bool {
        self.k_range().contains(&k) && self.i_range(k).contains(&i)
    }

    /// All points in lexicographic `(k, i)` order.
    pub fn points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.k_range().flat_map(move |k| self.i_range(k).map(move |i| (k, i)))
    }

    pub fn len(&self) -> usize {
        self.k_range()
            .map(|k| self.i_range(k).end.saturating_sub(self.i_range(k).start).max(0) as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.points().next().is_none()
    }

    /// Smallest `i` lower bound and largest `i` upper bound over nonempty rows.
    fn i_hull(&self) -> Option<(i64, i64)> {
        self.k_range()
            .map(|k| self.i_range(k))
            .filter(|r| !r.is_empty())
            .fold(None, |acc, r| match acc {
                None => Some((r.start, r.end)),
                Some((lo, hi)) => Some((lo.min(r.start), hi.max(r.end))),
            })
    }
}

/// Tiles of a skewed iteration space grouped into wavefronts of equal
/// `t0 + t1`. Wavefront `w` holds the tiles with `t0 + t1 = min_sum + w`,
/// sorted by `t1`.
#[derive(Clone, Debug)]
pub struct WavefrontPlan {
    domain: IterationDomain,
    schedule: SkewTileSchedule,
    min_sum: i64,
    waves: Vec<Vec<Tile>>,
}

impl WavefrontPlan {
    pub fn domain(&self) -> &IterationDomain {
        &self.domain
    }

    pub fn schedule(&self) -> &SkewTileSchedule {
        &self.schedule
    }

    pub fn wavefronts(&self) -> &[Vec<Tile>] {
        &self.waves
    }

    pub fn len(&self) -> usize {
        self.waves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waves.is_empty()
    }

    pub fn tile_count(&self) -> usize {
        self.waves.iter().map(Vec::len).sum()
    }

    pub fn wave_of(&self, tile: Tile) -> Option<usize> {
        let w = usize::try_from(tile.sum() - self.min_sum).ok()?;
        self.waves
            .get(w)?
            .binary_search_by_key(&tile.t1, |t| t.t1)
            .ok()
            .map(|_| w)
    }

    /// Calls `f` on every domain point of `tile` in lexicographic order.
    pub fn for_each_point(&self, tile: Tile, mut f: impl FnMut(i64, i64)) {
        let s = &self.schedule;
        let [t0, t1] = s.tile();
        let (c0_lo, c1_lo) = (tile.t0 * t0, tile.t1 * t1);
        let corners = [
            s.unmap((c0_lo, c1_lo)),
            s.unmap((c0_lo + t0 - 1, c1_lo)),
            s.unmap((c0_lo, c1_lo + t1 - 1)),
            s.unmap((c0_lo + t0 - 1, c1_lo + t1 - 1)),
        ];
        let k_lo = corners.iter().map(|p| p.0).min().unwrap().max(self.domain.k_lo);
        let k_hi = corners.iter().map(|p| p.0).max().unwrap().min(self.domain.k_hi - 1);
        let i_lo = corners.iter().map(|p| p.1).min().unwrap();
        let i_hi = corners.iter().map(|p| p.1).max().unwrap();
        for k in k_lo..=k_hi {
            let r = self.domain.i_range(k);
            for i in i_lo.max(r.start)..=i_hi.min(r.end - 1) {
                if s.tile_of((k, i)) == tile {
                    f(k, i);
                }
            }
        }
    }

    pub fn tile_points(&self, tile: Tile) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        self.for_each_point(tile, |k, i| out.push((k, i)));
        out
    }
}

/// Groups the tiles covering `domain` into wavefronts.
pub fn wavefronts(domain: &IterationDomain, schedule: &SkewTileSchedule) -> WavefrontPlan {
    let mut seen = HashSet::new();
    let mut last = None;
    for p in domain.points() {
        let t = schedule.tile_of(p);
        if last != Some(t) {
            seen.insert(t);
            last = Some(t);
        }
    }
    let mut tiles: Vec<Tile> = seen.into_iter().collect();
    tiles.sort_by_key(|t| (t.sum(), t.t1));
    let min_sum = tiles.first().map_or(0, Tile::sum);
    let max_sum = tiles.last().map_or(-1, Tile::sum);
    let mut waves = vec![Vec::new(); (max_sum - min_sum + 1).max(0) as usize];
    for t in tiles {
        waves[(t.sum() - min_sum) as usize].push(t);
    }
    WavefrontPlan {
        domain: *domain,
        schedule: *schedule,
        min_sum,
        waves,
    }
}

fn clamp_range(base: i64, lo: Bound, hi: Bound, min: i64, max: i64) -> (i64, i64) {
    let lo = match lo {
        Bound::Finite(v) => (base + v).max(min),
        _ => min,
    };
    let hi = match hi {
        Bound::Finite(v) => (base + v).min(max),
        _ => max,
    };
    (lo, hi)
}

/// Brute-force check that no dependence links two distinct tiles of the
/// same wavefront. Quadratic in the domain size; meant for small domains.
pub fn assert_wavefront_independence(
    deps: &[DistanceVector],
    plan: &WavefrontPlan,
    schedule: &SkewTileSchedule,
) -> bool {
    let domain = plan.domain();
    let Some((i_min, i_max)) = domain.i_hull() else {
        return true;
    };
    let (k_min, k_max) = (domain.k_lo, domain.k_hi - 1);
    for p in domain.points() {
        let tp = schedule.tile_of(p);
        for d in deps {
            let [dk, di] = d.components() else {
                return false;
            };
            let (k_lo, k_hi) = clamp_range(p.0, dk.lo(), dk.hi(), k_min, k_max);
            let (i_lo, i_hi) = clamp_range(p.1, di.lo(), di.hi(), i_min, i_max - 1);
            for k in k_lo..=k_hi {
                for i in i_lo..=i_hi {
                    let q = (k, i);
                    if q == p || !domain.contains(q) {
                        continue;
                    }
                    let tq = schedule.tile_of(q);
                    if tq != tp && tq.sum() == tp.sum() {
                        return false;
                    }
                }
            }
        }
    }
    true
}
