//! Asymptotic rate and entanglement curves of maximal-entanglement QUENTA
//! families from towers with `A(q) = √q − 1`, with an optional comparison
//! against a caller-supplied Gilbert–Varshamov style bound.
//!
//! ```
//! use num_rational::Ratio;
//! use quenta::bounds::{family_point, ihara_a};
//!
//! assert_eq!(ihara_a(64).unwrap(), 7);
//! let p = family_point(64, Ratio::new(3, 10)).unwrap();
//! assert_eq!(p.rate_lower, Ratio::new(39, 70));
//! ```

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::galois::prime_power;

pub type Q = Ratio<i64>;

/// Ties within this distance count as "not exceeding" in [`gv_compare`].
pub const GV_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticPoint {
    pub q: u32,
    pub delta: Q,
    /// `1 − δ − 1/A(q)` clamped at zero.
    pub rate_lower: Q,
    pub ent_lo: Q,
    pub ent_hi: Q,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareRow {
    pub point: AsymptoticPoint,
    pub gv_rate: Option<f64>,
    pub exceeds: Option<bool>,
}

/// `A(q) = √q − 1` for a square prime power `q`.
pub fn ihara_a(q: u32) -> Result<i64> {
    if prime_power(q).is_none() {
        return Err(Error::InvalidArgument(format!("{q} is not a prime power")));
    }
    let r = (q as f64).sqrt().round() as u32;
    if r * r != q {
        return Err(Error::NonSquareOrder(q));
    }
    if r < 2 {
        return Err(Error::InvalidArgument(format!("A({q}) = 0")));
    }
    Ok(r as i64 - 1)
}

/// Largest admissible relative distance, `1 − 1/A(q)`.
pub fn delta_max(q: u32) -> Result<Q> {
    Ok(Q::from_integer(1) - Q::new(1, ihara_a(q)?))
}

pub fn family_point(q: u32, delta: Q) -> Result<AsymptoticPoint> {
    let inv_a = Q::new(1, ihara_a(q)?);
    let top = delta_max(q)?;
    if delta < Q::zero() || delta > top {
        return Err(Error::InvalidArgument(format!("delta = {delta} outside [0, {top}]")));
    }
    let rate = Q::from_integer(1) - delta - inv_a;
    Ok(AsymptoticPoint {
        q,
        delta,
        rate_lower: rate.max(Q::zero()),
        ent_lo: delta,
        ent_hi: delta + inv_a,
    })
}

pub fn family_curve(q: u32, deltas: &[Q]) -> Result<Vec<AsymptoticPoint>> {
    deltas.iter().map(|&d| family_point(q, d)).collect()
}

/// `steps + 1` evenly spaced values from 0 to `1 − 1/A(q)`.
pub fn delta_grid(q: u32, steps: u32) -> Result<Vec<Q>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    let top = delta_max(q)?;
    Ok((0..=steps as i64).map(|i| top * Q::new(i, steps as i64)).collect())
}

/// Pairs each family point with `gv(q, δ)` when an evaluator is given.
pub fn gv_compare<F>(q: u32, deltas: &[Q], gv: Option<F>) -> Result<Vec<CompareRow>>
where
    F: Fn(u32, f64) -> Result<f64>,
{
    family_curve(q, deltas)?
        .into_iter()
        .map(|point| {
            let Some(gv) = gv.as_ref() else {
                return Ok(CompareRow { point, gv_rate: None, exceeds: None });
            };
            let g = gv(q, to_f64(point.delta))?;
            let exceeds = to_f64(point.rate_lower) > g + GV_TOLERANCE;
            Ok(CompareRow { point, gv_rate: Some(g), exceeds: Some(exceeds) })
        })
        .collect()
}

fn to_f64(r: Q) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Fixed six-place decimal, rounding half away from zero.
pub fn decimal6(r: Q) -> String {
    let scaled = r * Q::from_integer(1_000_000);
    let mut v = scaled.abs().round().to_integer();
    let neg = scaled < Q::zero() && v != 0;
    let frac = v % 1_000_000;
    v /= 1_000_000;
    format!("{}{v}.{frac:06}", if neg { "-" } else { "" })
}

/// CSV with header `delta,rate_lower,ent_lo,ent_hi`, plus `gv_rate,exceeds`
/// when any row carries a comparison. LF line endings.
pub fn to_csv(rows: &[CompareRow]) -> String {
    let gv = rows.iter().any(|r| r.gv_rate.is_some());
    let mut out = String::from("delta,rate_lower,ent_lo,ent_hi");
    if gv {
        out.push_str(",gv_rate,exceeds");
    }
    out.push('\n');
    for r in rows {
        let p = &r.point;
        out.push_str(&[p.delta, p.rate_lower, p.ent_lo, p.ent_hi].map(decimal6).join(","));
        if gv {
            let g = r.gv_rate.map(|g| format!("{g:.6}")).unwrap_or_default();
            let e = r.exceeds.map(|e| e.to_string()).unwrap_or_default();
            out.push_str(&format!(",{g},{e}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn none() -> Option<fn(u32, f64) -> Result<f64>> {
        None
    }

    #[test]
    fn ihara_values() {
        assert_eq!(ihara_a(64).unwrap(), 7);
        assert_eq!(ihara_a(4).unwrap(), 1);
        assert_eq!(ihara_a(9).unwrap(), 2);
        assert_eq!(ihara_a(8), Err(Error::NonSquareOrder(8)));
        assert!(ihara_a(36).is_err());
    }

    #[test]
    fn q64_points() {
        let p = family_point(64, Q::new(3, 10)).unwrap();
        assert_eq!(decimal6(p.rate_lower), "0.557143");
        let end = family_point(64, Q::new(6, 7)).unwrap();
        assert_eq!(end.rate_lower, Q::zero());
        let start = family_point(64, Q::zero()).unwrap();
        assert_eq!((start.rate_lower, start.ent_lo, start.ent_hi), (Q::new(6, 7), Q::zero(), Q::new(1, 7)));
        assert!(family_point(64, Q::new(7, 8)).is_err());
    }

    #[test]
    fn csv_shape() {
        let rows = gv_compare(64, &delta_grid(64, 100).unwrap(), none()).unwrap();
        let csv = to_csv(&rows);
        assert_eq!(csv.lines().count(), 102);
        assert!(csv.starts_with("delta,rate_lower,ent_lo,ent_hi\n0.000000,0.857143,0.000000,0.142857\n"));
        assert!(csv.ends_with("0.857143,0.000000,0.857143,1.000000\n"));
        assert_eq!(to_csv(&gv_compare(4, &delta_grid(4, 1).unwrap(), none()).unwrap()).lines().count(), 3);
    }

    #[test]
    fn degenerate_evaluators() {
        let grid = delta_grid(64, 10).unwrap();
        let zero = gv_compare(64, &grid, Some(|_, _| Ok(0.0))).unwrap();
        assert!(zero.iter().all(|r| r.exceeds == Some(r.point.rate_lower > Q::zero())));
        let same = gv_compare(64, &grid, Some(|q: u32, d: f64| Ok(1.0 - d - 1.0 / ((q as f64).sqrt() - 1.0)))).unwrap();
        assert!(same.iter().all(|r| r.exceeds == Some(false)));
        assert!(to_csv(&same).starts_with("delta,rate_lower,ent_lo,ent_hi,gv_rate,exceeds\n"));
    }

    #[test]
    fn rounding() {
        assert_eq!(decimal6(Q::new(1, 3)), "0.333333");
        assert_eq!(decimal6(Q::new(2, 3)), "0.666667");
        assert_eq!(decimal6(Q::new(1, 2_000_000)), "0.000001");
        assert_eq!(decimal6(Q::new(-3, 2)), "-1.500000");
    }

    proptest! {
        #[test]
        fn band_identities(root in prop::sample::select(vec![3u32, 4, 5, 7, 8, 9, 11, 16]), i in 0i64..=1000) {
            let q = root * root;
            let a = ihara_a(q).unwrap();
            let delta = delta_max(q).unwrap() * Q::new(i, 1000);
            let p = family_point(q, delta).unwrap();
            prop_assert_eq!(p.rate_lower + p.delta + Q::new(1, a), Q::from_integer(1));
            prop_assert_eq!(p.ent_hi - p.ent_lo, Q::new(1, a));
        }

        #[test]
        fn rate_strictly_decreasing(steps in 2u32..200) {
            let pts = family_curve(64, &delta_grid(64, steps).unwrap()).unwrap();
            prop_assert!(pts.windows(2).all(|w| w[1].rate_lower < w[0].rate_lower));
        }
    }
}
