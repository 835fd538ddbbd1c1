use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Finite union of closed intervals, kept sorted with overlaps merged.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn new(intervals: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut list: Vec<(f64, f64)> = intervals.into_iter().collect();
        if list.is_empty() {
            return Err(Error::InvalidArgument("empty interval union".into()));
        }
        for &(lo, hi) in &list {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
            }
        }
        list.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(list.len());
        for (lo, hi) in list {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        Ok(IntervalUnion { intervals: merged })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new([(lo, hi)])
    }

    /// Grammar: `[a,b]u[c,d]...`, whitespace ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| Error::format("target", format!("{why} in {text:?}"));
        if compact.is_empty() {
            return Err(bad("empty target"));
        }
        let mut intervals = Vec::new();
        for part in compact.split(['u', 'U']) {
            let inner = part
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(|| bad("expected [a,b]"))?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| bad("expected a comma"))?;
            let lo: f64 = a.parse().map_err(|_| bad("bad number"))?;
            let hi: f64 = b.parse().map_err(|_| bad("bad number"))?;
            intervals.push((lo, hi));
        }
        Self::new(intervals).map_err(|e| bad(&e.to_string()))
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains(&self, x: f64, tolerance: f64) -> bool {
        self.distance(x) <= tolerance
    }

    pub fn distance(&self, x: f64) -> f64 {
        self.intervals
            .iter()
            .map(|&(lo, hi)| {
                if x < lo {
                    lo - x
                } else if x > hi {
                    x - hi
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Image under `x ↦ αx + β`.
    pub fn affine(&self, alpha: f64, beta: f64) -> IntervalUnion {
        let mapped = self.intervals.iter().map(|&(lo, hi)| {
            let (p, q) = (alpha * lo + beta, alpha * hi + beta);
            (p.min(q), p.max(q))
        });
        IntervalUnion::new(mapped).expect("affine image of a nonempty union")
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::new(self.intervals.iter().chain(&other.intervals).copied())
            .expect("nonempty")
    }

    /// Largest distance between matching endpoints; zero iff equal.
    pub fn endpoint_distance(&self, other: &IntervalUnion) -> f64 {
        if self.intervals.len() != other.intervals.len() {
            return f64::INFINITY;
        }
        self.intervals
            .iter()
            .zip(&other.intervals)
            .map(|(a, b)| (a.0 - b.0).abs().max((a.1 - b.1).abs()))
            .fold(0.0, f64::max)
    }

    /// `(sup_p dist(p, self), sup_{t ∈ self} dist(t, points))` for a sorted
    /// point set. The second supremum over a closed interval is attained at an
    /// endpoint or halfway between two consecutive points.
    pub fn hausdorff_parts(&self, sorted_points: &[f64]) -> (f64, f64) {
        if sorted_points.is_empty() {
            return (0.0, f64::INFINITY);
        }
        let excess = sorted_points
            .iter()
            .map(|&p| self.distance(p))
            .fold(0.0, f64::max);
        let nearest = |t: f64| {
            let i = sorted_points.partition_point(|&p| p < t);
            let mut d = f64::INFINITY;
            if i < sorted_points.len() {
                d = d.min(sorted_points[i] - t);
            }
            if i > 0 {
                d = d.min(t - sorted_points[i - 1]);
            }
            d
        };
        let mut gap: f64 = 0.0;
        for &(lo, hi) in &self.intervals {
            gap = gap.max(nearest(lo)).max(nearest(hi));
            for w in sorted_points.windows(2) {
                let mid = 0.5 * (w[0] + w[1]);
                if lo < mid && mid < hi {
                    gap = gap.max(nearest(mid));
                }
            }
        }
        (excess, gap)
    }

    pub fn hausdorff(&self, sorted_points: &[f64]) -> f64 {
        let (a, b) = self.hausdorff_parts(sorted_points);
        a.max(b)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lo, hi)) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str("u")?;
            }
            write!(f, "[{lo},{hi}]")?;
        }
        Ok(())
    }
}

impl FromStr for IntervalUnion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IntervalUnion::parse(s)
    }
}

impl Serialize for IntervalUnion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntervalUnion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        IntervalUnion::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display() {
        let t = IntervalUnion::parse("[-0.5, 0] u [0.5,1]").unwrap();
        assert_eq!(t.intervals(), &[(-0.5, 0.0), (0.5, 1.0)]);
        assert_eq!(t.to_string(), "[-0.5,0]u[0.5,1]");
        assert_eq!(t.to_string().parse::<IntervalUnion>().unwrap(), t);
        for bad in ["", "[1,0]", "[0,1", "(0,1)", "[0;1]", "[a,1]"] {
            assert!(
                matches!(IntervalUnion::parse(bad), Err(Error::Format { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn merging_and_membership() {
        let t = IntervalUnion::new([(0.5, 1.0), (-1.0, 0.0), (0.8, 2.0)]).unwrap();
        assert_eq!(t.intervals(), &[(-1.0, 0.0), (0.5, 2.0)]);
        assert!(t.contains(0.25 + 0.25, 0.0));
        assert!(!t.contains(0.25, 0.1));
        assert!(t.contains(1e-9, 1e-8));
        assert_eq!(t.distance(0.3), 0.2);
    }

    #[test]
    fn affine_shift_of_dihedral_set() {
        let sym = IntervalUnion::new([(-0.75, -0.25), (0.25, 0.75)]).unwrap();
        let shifted = sym.affine(1.0, 0.25);
        assert_eq!(shifted, IntervalUnion::parse("[-0.5,0]u[0.5,1]").unwrap());
        assert_eq!(sym.affine(-1.0, 0.0), sym);
    }

    #[test]
    fn hausdorff_of_sample_points() {
        let t = IntervalUnion::interval(0.0, 1.0).unwrap();
        assert_eq!(t.hausdorff_parts(&[0.0, 1.0]), (0.0, 0.5));
        assert_eq!(t.hausdorff_parts(&[0.5, 2.0]), (1.0, 0.5));
        let (_, gap) = t.hausdorff_parts(&[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(gap, 0.125);
    }

    proptest! {
        #[test]
        fn gap_matches_dense_sampling(mut pts in prop::collection::vec(-1.0f64..2.0, 1..12)) {
            pts.sort_by(f64::total_cmp);
            let t = IntervalUnion::new([(-0.5, 0.0), (0.5, 1.0)]).unwrap();
            let (_, gap) = t.hausdorff_parts(&pts);
            let mut sampled: f64 = 0.0;
            for &(lo, hi) in t.intervals() {
                for i in 0..=2000 {
                    let x = lo + (hi - lo) * i as f64 / 2000.0;
                    let d = pts.iter().map(|p| (p - x).abs()).fold(f64::INFINITY, f64::min);
                    sampled = sampled.max(d);
                }
            }
            prop_assert!(sampled <= gap + 1e-12);
            prop_assert!(gap <= sampled + 1e-3);
        }
    }
}
