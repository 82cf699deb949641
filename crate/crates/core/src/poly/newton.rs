use num_rational::Ratio;
use serde::Serialize;

use super::valuation::{valuation, Valuation};
use super::RatPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    #[serde(serialize_with = "ser_ratio")]
    pub slope: Ratio<i64>,
    pub length: u64,
}

impl Segment {
    /// Change in valuation across the segment.
    pub fn height(&self) -> Ratio<i64> {
        self.slope * Ratio::from_integer(self.length as i64)
    }
}

/// Lower convex hull of the points `(i, v_p(c_i))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub prime: u64,
    pub vertices: Vec<(u64, i64)>,
    pub segments: Vec<Segment>,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl NewtonPolygon {
    pub fn total_length(&self) -> u64 {
        self.segments.iter().map(|s| s.length).sum()
    }
}

/// Points with infinite valuation (zero coefficients) are dropped, so a
/// polynomial divisible by `z^k` gets a polygon starting at `x = k`.
pub fn newton_polygon(p: &RatPoly, prime: u64) -> NewtonPolygon {
    let pts: Vec<(u64, i64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match valuation(c, prime) {
            Valuation::Finite(v) => Some((i as u64, v)),
            Valuation::Infinite => None,
        })
        .collect();
    // Andrew's monotone chain, lower half. Collinear middle points are popped.
    let mut hull: Vec<(u64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (ax, ay) = hull[hull.len() - 2];
            let (bx, by) = hull[hull.len() - 1];
            let cross = (bx as i128 - ax as i128) * (pt.1 as i128 - ay as i128)
                - (by as i128 - ay as i128) * (pt.0 as i128 - ax as i128);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            Segment { slope: Ratio::new(w[1].1 - w[0].1, len as i64), length: len }
        })
        .collect();
    NewtonPolygon { prime, vertices: hull, segments }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn seg(n: i64, d: i64, len: u64) -> Segment {
        Segment { slope: Ratio::new(n, d), length: len }
    }

    #[test]
    fn hand_hull() {
        let p = RatPoly::from_i64s(&[9, 3, 0, 1]);
        let np = newton_polygon(&p, 3);
        assert_eq!(np.vertices, vec![(0, 2), (1, 1), (3, 0)]);
        assert_eq!(np.segments, vec![seg(-1, 1, 1), seg(-1, 2, 2)]);
    }

    #[test]
    fn collinear_points_merge() {
        let p = RatPoly::from_i64s(&[8, 4, 2, 1]);
        let np = newton_polygon(&p, 2);
        assert_eq!(np.segments, vec![seg(-1, 1, 3)]);
    }

    #[test]
    fn z_order_is_skipped() {
        let p = RatPoly::from_i64s(&[0, 0, 2, 1]);
        let np = newton_polygon(&p, 2);
        assert_eq!(np.vertices, vec![(2, 1), (3, 0)]);
        assert_eq!(np.total_length(), 1);
    }

    proptest! {
        #[test]
        fn hull_is_lower_and_convex(c in prop::collection::vec((-40i64..40, 1i64..40), 2..8)) {
            let coeffs: Vec<BigRational> = c.iter().map(|&(a, b)| rational(a, b)).collect();
            let p = RatPoly::new(coeffs);
            prop_assume!(p.degree().unwrap_or(0) >= 1 && !p.coeff(0).is_zero());
            let np = newton_polygon(&p, 2);
            prop_assert_eq!(np.total_length(), p.degree().unwrap() as u64);
            for w in np.segments.windows(2) {
                prop_assert!(w[0].slope < w[1].slope);
            }
            // every point lies on or above the polygon
            for (i, ci) in p.coeffs().iter().enumerate() {
                if let Valuation::Finite(v) = valuation(ci, 2) {
                    let k = np.vertices.windows(2).find(|w| w[0].0 <= i as u64 && i as u64 <= w[1].0).unwrap();
                    let (x0, y0) = k[0];
                    let (x1, y1) = k[1];
                    let lhs = (v - y0) as i128 * (x1 - x0) as i128;
                    let rhs = (y1 - y0) as i128 * (i as i64 - x0 as i64) as i128;
                    prop_assert!(lhs >= rhs);
                }
            }
        }
    }

    use num_traits::Zero;
}
