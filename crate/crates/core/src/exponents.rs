//! The (1/p, 1/q) diagram in exact rational arithmetic: necessary conditions,
//! the vertices D and D′, interpolation segments, the scaling line and the
//! dyadic exponent bookkeeping for ν_{γ,k}.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::HeisenbergDim;
use crate::measure::FractionalOrder;

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses "a/b", an integer, or a plain decimal such as "0.125" exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::invalid("rational", format!("cannot parse {text:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
        let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
        if b.is_zero() {
            return Err(Error::invalid("rational", "zero denominator"));
        }
        return Ok(Rational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if (whole.is_empty() && frac.is_empty())
        || !whole
            .chars()
            .chain(frac.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num = BigInt::from_str(&digits).map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let v = Rational::new(num, den);
    Ok(if neg { -v } else { v })
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

/// A point (1/p, 1/q) of the unit square.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExponentPoint {
    #[serde(serialize_with = "ser_rational")]
    inv_p: Rational,
    #[serde(serialize_with = "ser_rational")]
    inv_q: Rational,
}

impl ExponentPoint {
    pub fn new(inv_p: Rational, inv_q: Rational) -> Result<Self> {
        for (name, v) in [("inv_p", &inv_p), ("inv_q", &inv_q)] {
            if v.is_negative() || *v > Rational::one() {
                return Err(Error::invalid(
                    name,
                    format!("{} is outside [0, 1]", format_rational(v)),
                ));
            }
        }
        Ok(ExponentPoint { inv_p, inv_q })
    }

    pub fn from_ratios(p: (i64, i64), q: (i64, i64)) -> Result<Self> {
        Self::new(ratio(p.0, p.1), ratio(q.0, q.1))
    }

    pub fn inv_p(&self) -> &Rational {
        &self.inv_p
    }

    pub fn inv_q(&self) -> &Rational {
        &self.inv_q
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.inv_p), to_f64(&self.inv_q))
    }

    /// Image under the duality reflection (a, b) ↦ (1 − b, 1 − a).
    pub fn reflect(&self) -> ExponentPoint {
        ExponentPoint {
            inv_p: Rational::one() - &self.inv_q,
            inv_q: Rational::one() - &self.inv_p,
        }
    }
}

impl fmt::Display for ExponentPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_rational(&self.inv_p),
            format_rational(&self.inv_q)
        )
    }
}

/// Dimension and exact fractional order γ ∈ [0, 2n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionSpec {
    pub n: HeisenbergDim,
    #[serde(serialize_with = "ser_rational")]
    pub gamma: Rational,
}

impl RegionSpec {
    pub fn new(n: HeisenbergDim, gamma: Rational) -> Result<Self> {
        if gamma.is_negative() || gamma >= int(n.spatial() as i64) {
            return Err(Error::invalid(
                "gamma",
                format!(
                    "must lie in [0, {}), got {}",
                    n.spatial(),
                    format_rational(&gamma)
                ),
            ));
        }
        Ok(RegionSpec { n, gamma })
    }

    pub fn fractional_order(&self) -> Result<FractionalOrder> {
        FractionalOrder::new(to_f64(&self.gamma), self.n)
    }

    fn two_n(&self) -> Rational {
        int(self.n.spatial() as i64)
    }
}

/// A line 1/q = slope·(1/p) + intercept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Line {
    pub name: &'static str,
    #[serde(serialize_with = "ser_rational")]
    pub slope: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub intercept: Rational,
}

impl Line {
    pub fn eval(&self, inv_p: &Rational) -> Rational {
        &self.slope * inv_p + &self.intercept
    }

    pub fn contains(&self, pt: &ExponentPoint) -> bool {
        self.eval(&pt.inv_p) == pt.inv_q
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/q = {}·(1/p)", format_rational(&self.slope))?;
        if self.intercept.is_negative() {
            write!(f, " − {}", format_rational(&-self.intercept.clone()))
        } else if !self.intercept.is_zero() {
            write!(f, " + {}", format_rational(&self.intercept))
        } else {
            Ok(())
        }
    }
}

/// The four boundary lines; the region lies on or below the first and on or above the rest.
pub fn constraint_lines(r: &RegionSpec) -> [Line; 4] {
    let two_n = r.two_n();
    let n1 = &two_n + Rational::one();
    let n2 = &two_n + int(2);
    [
        Line {
            name: "diagonal",
            slope: Rational::one(),
            intercept: Rational::zero(),
        },
        Line {
            name: "upper_dual",
            slope: n1.clone(),
            intercept: -two_n.clone(),
        },
        Line {
            name: "lower",
            slope: Rational::one() / n1,
            intercept: Rational::zero(),
        },
        Line {
            name: "gamma",
            slope: Rational::one(),
            intercept: -(&two_n - &r.gamma) / n2,
        },
    ]
}

/// Signed slacks of the four necessary conditions at `pt` (nonnegative means satisfied).
pub fn constraint_slacks(r: &RegionSpec, pt: &ExponentPoint) -> [Rational; 4] {
    let [diag, upper, lower, gamma] = constraint_lines(r);
    [
        diag.eval(&pt.inv_p) - &pt.inv_q,
        &pt.inv_q - upper.eval(&pt.inv_p),
        &pt.inv_q - lower.eval(&pt.inv_p),
        &pt.inv_q - gamma.eval(&pt.inv_p),
    ]
}

/// Membership in the closed region cut out by the necessary conditions.
pub fn necessary_region(r: &RegionSpec, pt: &ExponentPoint) -> bool {
    constraint_slacks(r, pt).iter().all(|s| !s.is_negative())
}

/// Membership in the interior of that region (every condition strict).
pub fn necessary_region_open(r: &RegionSpec, pt: &ExponentPoint) -> bool {
    constraint_slacks(r, pt).iter().all(|s| s.is_positive())
}

/// Whether `pt` lies on the closed segment [D, D′].
pub fn on_segment_d_dprime(r: &RegionSpec, pt: &ExponentPoint) -> bool {
    let [_, _, _, gamma] = constraint_lines(r);
    let d = vertex_D(r);
    let dp = vertex_Dprime(r);
    let (lo, hi) = if d.inv_p <= dp.inv_p {
        (d, dp)
    } else {
        (dp, d)
    };
    gamma.contains(pt) && pt.inv_p >= lo.inv_p && pt.inv_p <= hi.inv_p
}

#[allow(non_snake_case)]
pub fn vertex_D(r: &RegionSpec) -> ExponentPoint {
    let n = int(r.n.n() as i64);
    let two_n = r.two_n();
    let den = &two_n * (&two_n + int(2));
    ExponentPoint {
        inv_p: (int(4) * &n * &n + &two_n + &r.gamma) / &den,
        inv_q: (&two_n + (&two_n + Rational::one()) * &r.gamma) / den,
    }
}

#[allow(non_snake_case)]
pub fn vertex_Dprime(r: &RegionSpec) -> ExponentPoint {
    vertex_D(r).reflect()
}

/// Vertices of the closed region in order (0,0), D′, D, (1,1).
pub fn region_polygon(r: &RegionSpec) -> Vec<ExponentPoint> {
    let origin = ExponentPoint {
        inv_p: Rational::zero(),
        inv_q: Rational::zero(),
    };
    let one = ExponentPoint {
        inv_p: Rational::one(),
        inv_q: Rational::one(),
    };
    let d = vertex_D(r);
    let dp = vertex_Dprime(r);
    if d == dp {
        vec![origin, d, one]
    } else {
        vec![origin, dp, d, one]
    }
}

/// (1 − θ)·P0 + θ·P1.
pub fn riesz_interpolate(
    p0: &ExponentPoint,
    p1: &ExponentPoint,
    theta: &Rational,
) -> Result<ExponentPoint> {
    if theta.is_negative() || *theta > Rational::one() {
        return Err(Error::invalid(
            "theta",
            format!("{} is outside [0, 1]", format_rational(theta)),
        ));
    }
    let s = Rational::one() - theta;
    Ok(ExponentPoint {
        inv_p: &s * &p0.inv_p + theta * &p1.inv_p,
        inv_q: &s * &p0.inv_q + theta * &p1.inv_q,
    })
}

/// θ* = (2n − γ)/(2n), the weight on the γ = 0 vertex that lands on D:
/// D = (1 − θ*)·(1,1) + θ*·D(γ=0).
pub fn theta_star(r: &RegionSpec) -> Rational {
    (r.two_n() - &r.gamma) / r.two_n()
}

/// kγθ − k(2n − γ)(1 − θ): the log₂ of the interpolated bound for ν_{γ,k} when
/// θ weights the γ = 0 vertex (bound 2^{kγ}) and 1 − θ weights (1,1) (bound 2^{−k(2n−γ)}).
pub fn balance(r: &RegionSpec, k: u32, theta: &Rational) -> Rational {
    let k = int(k as i64);
    &k * &r.gamma * theta - k * (r.two_n() - &r.gamma) * (Rational::one() - theta)
}

/// Whether 1/q = 1/p − 2n/(2n+2).
pub fn scaling_line(n: HeisenbergDim, pt: &ExponentPoint) -> bool {
    let two_n = int(n.spatial() as i64);
    let shift = &two_n / (&two_n + int(2));
    &pt.inv_p - shift == pt.inv_q
}

/// Predicted log₂ bounds for ν_{γ,k}: −k(2n−γ) at (1,1) and kγ at D(γ=0).
pub fn predicted_annulus_exponents(r: &RegionSpec, k: u32) -> (Rational, Rational) {
    let k = int(k as i64);
    (-(&k * (r.two_n() - &r.gamma)), k * &r.gamma)
}

/// Partial sums of Σ_k 2^{−k(2n−γ)τ}, k = 0..terms.
pub fn geometric_partial_sums(r: &RegionSpec, tau: f64, terms: usize) -> Vec<f64> {
    let rate = (2f64).powf(-(to_f64(&(r.two_n() - &r.gamma))) * tau);
    let mut sums = Vec::with_capacity(terms);
    let (mut acc, mut term) = (0.0, 1.0);
    for _ in 0..terms {
        acc += term;
        term *= rate;
        sums.push(acc);
    }
    sums
}

/// Euclidean distance from a float point to the boundary of the closed region.
pub fn distance_to_boundary(r: &RegionSpec, pt: (f64, f64)) -> f64 {
    let verts: Vec<(f64, f64)> = region_polygon(r)
        .iter()
        .map(ExponentPoint::to_f64)
        .collect();
    let mut best = f64::INFINITY;
    for i in 0..verts.len() {
        let a = verts[i];
        let b = verts[(i + 1) % verts.len()];
        best = best.min(segment_distance(pt, a, b));
    }
    best
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}

/// Floating-point counterpart for irrational γ. Results are approximate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxRegion {
    pub n: HeisenbergDim,
    pub gamma: f64,
    pub approximate: bool,
}

impl ApproxRegion {
    pub fn new(n: HeisenbergDim, gamma: f64) -> Result<Self> {
        FractionalOrder::new(gamma, n)?;
        Ok(ApproxRegion {
            n,
            gamma,
            approximate: true,
        })
    }

    pub fn vertex_d(&self) -> (f64, f64) {
        let n = self.n.n() as f64;
        let two_n = 2.0 * n;
        let den = two_n * (two_n + 2.0);
        (
            (4.0 * n * n + two_n + self.gamma) / den,
            (two_n + (two_n + 1.0) * self.gamma) / den,
        )
    }

    /// Closed-region membership with slack `tol` on every condition.
    pub fn contains(&self, pt: (f64, f64), tol: f64) -> bool {
        let two_n = self.n.spatial() as f64;
        let (a, b) = pt;
        b <= a + tol
            && b >= (two_n + 1.0) * a - two_n - tol
            && b >= a / (two_n + 1.0) - tol
            && b >= a - (two_n - self.gamma) / (two_n + 2.0) - tol
    }
}

/// Everything the geometry report prints for one (n, γ).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometrySummary {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub gamma: Rational,
    pub vertices: Vec<(String, ExponentPoint)>,
    pub lines: Vec<(Line, String)>,
    #[serde(serialize_with = "ser_rational")]
    pub theta_star: Rational,
    pub d_on_scaling_line: bool,
}

pub fn geometry_summary(r: &RegionSpec) -> GeometrySummary {
    let zero = ExponentPoint {
        inv_p: Rational::zero(),
        inv_q: Rational::zero(),
    };
    let one = ExponentPoint {
        inv_p: Rational::one(),
        inv_q: Rational::one(),
    };
    let d = vertex_D(r);
    GeometrySummary {
        n: r.n.n(),
        gamma: r.gamma.clone(),
        vertices: vec![
            ("origin".into(), zero),
            ("one".into(), one),
            ("D".into(), d.clone()),
            ("D_prime".into(), vertex_Dprime(r)),
        ],
        lines: constraint_lines(r)
            .into_iter()
            .map(|l| {
                let text = l.to_string();
                (l, text)
            })
            .collect(),
        theta_star: theta_star(r),
        d_on_scaling_line: scaling_line(r.n, &d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> HeisenbergDim {
        HeisenbergDim::new(n).unwrap()
    }

    fn spec(n: usize, gamma: Rational) -> RegionSpec {
        RegionSpec::new(dim(n), gamma).unwrap()
    }

    fn pt(a: (i64, i64), b: (i64, i64)) -> ExponentPoint {
        ExponentPoint::from_ratios(a, b).unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational(" 0.125 ").unwrap(), ratio(1, 8));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        for bad in ["", "1/0", "a/b", "1.2.3", "1e-3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert_eq!(format_rational(&ratio(6, 8)), "3/4");
        assert_eq!(format_rational(&int(1)), "1");
    }

    #[test]
    fn point_validation_and_reflection() {
        assert!(ExponentPoint::new(ratio(5, 4), int(0)).is_err());
        assert!(ExponentPoint::new(int(0), ratio(-1, 4)).is_err());
        let p = pt((3, 8), (1, 8));
        assert_eq!(p.reflect(), pt((7, 8), (5, 8)));
        assert_eq!(p.reflect().reflect(), p);
        assert_eq!(p.to_string(), "(3/8, 1/8)");
    }

    #[test]
    fn region_spec_bounds() {
        assert!(RegionSpec::new(dim(1), int(2)).is_err());
        assert!(RegionSpec::new(dim(1), ratio(-1, 2)).is_err());
        assert!(RegionSpec::new(dim(2), ratio(7, 2)).is_ok());
    }

    #[test]
    fn diagonal_endpoints_belong() {
        for n in 1..4 {
            for g in [int(0), ratio(1, 2), int(1)] {
                let r = spec(n, g);
                assert!(necessary_region(&r, &pt((0, 1), (0, 1))));
                assert!(necessary_region(&r, &pt((1, 1), (1, 1))));
            }
        }
    }

    #[test]
    fn vertex_d_examples() {
        let r = spec(1, int(0));
        let d = vertex_D(&r);
        assert_eq!(d, pt((3, 4), (1, 4)));
        let s = constraint_slacks(&r, &d);
        assert!(s[0].is_positive() && s[1].is_zero() && s[2].is_zero() && s[3].is_zero());
        assert!(necessary_region(&r, &d));
        assert!(!necessary_region_open(&r, &d));
        assert!(!necessary_region(&r, &pt((1, 1), (0, 1))));
        assert_eq!(vertex_D(&spec(2, int(0))), pt((5, 6), (1, 6)));
        for n in 1..=4usize {
            let d = vertex_D(&spec(n, int(0)));
            let n = n as i64;
            assert_eq!(d, pt((2 * n + 1, 2 * n + 2), (1, 2 * n + 2)));
        }
    }

    #[test]
    fn d_is_the_intersection_of_its_two_lines() {
        for n in 1..=3 {
            for g in [int(0), ratio(1, 2), int(1)] {
                let r = spec(n, g);
                let d = vertex_D(&r);
                let [_, upper, _, gamma] = constraint_lines(&r);
                assert!(upper.contains(&d) && gamma.contains(&d));
                let s = constraint_slacks(&r, &d);
                assert!(s[1].is_zero() && s[3].is_zero());
            }
        }
    }

    #[test]
    fn d_prime_examples() {
        assert_eq!(vertex_Dprime(&spec(1, int(0))), pt((3, 4), (1, 4)));
        let r = spec(1, int(1));
        assert_eq!(vertex_D(&r), pt((7, 8), (5, 8)));
        assert_eq!(vertex_Dprime(&r), pt((3, 8), (1, 8)));
        let [_, _, lower, gamma] = constraint_lines(&r);
        assert!(lower.contains(&vertex_Dprime(&r)) && gamma.contains(&vertex_Dprime(&r)));
        assert_eq!(region_polygon(&r).len(), 4);
        assert_eq!(region_polygon(&spec(1, int(0))).len(), 3);
    }

    #[test]
    fn interpolation() {
        let a = pt((3, 4), (1, 4));
        let b = pt((1, 1), (1, 1));
        assert_eq!(riesz_interpolate(&a, &b, &int(0)).unwrap(), a);
        assert_eq!(riesz_interpolate(&a, &b, &int(1)).unwrap(), b);
        let r = spec(1, int(1));
        let t = theta_star(&r);
        assert_eq!(t, ratio(1, 2));
        assert_eq!(riesz_interpolate(&a, &b, &t).unwrap(), vertex_D(&r));
        let mid = riesz_interpolate(&pt((0, 1), (0, 1)), &b, &ratio(1, 2)).unwrap();
        assert_eq!(mid, pt((1, 2), (1, 2)));
        assert!(riesz_interpolate(&a, &b, &ratio(3, 2)).is_err());
    }

    #[test]
    fn interpolating_from_the_gamma_zero_vertex_reaches_d() {
        for n in 1..=3 {
            let base = vertex_D(&spec(n, int(0)));
            let one = pt((1, 1), (1, 1));
            for g in [ratio(1, 3), ratio(1, 2), int(1)] {
                let r = spec(n, g);
                let hit = riesz_interpolate(&one, &base, &theta_star(&r)).unwrap();
                assert_eq!(hit, vertex_D(&r));
            }
        }
    }

    #[test]
    fn theta_star_examples() {
        assert_eq!(theta_star(&spec(2, int(0))), int(1));
        assert_eq!(theta_star(&spec(1, int(1))), ratio(1, 2));
        for (n, g, k) in [
            (1, ratio(1, 3), 2),
            (2, ratio(5, 2), 7),
            (3, ratio(11, 7), 1),
        ] {
            let r = spec(n, g);
            assert!(balance(&r, k, &theta_star(&r)).is_zero());
            assert!(!balance(&r, k, &ratio(1, 5)).is_zero());
        }
    }

    #[test]
    fn scaling_line_examples() {
        assert!(scaling_line(dim(1), &pt((3, 4), (1, 4))));
        assert!(!scaling_line(dim(1), &pt((1, 1), (1, 1))));
        for n in 1..=3 {
            let r = spec(n, int(0));
            let d = vertex_D(&r);
            assert!(scaling_line(dim(n), &d));
            // On the scaling line, the lower boundary is met only at D.
            let shift = ratio(2 * n as i64, 2 * n as i64 + 2);
            for k in 0..=40 {
                let a = ratio(k, 40);
                if a < shift {
                    continue;
                }
                let p = ExponentPoint::new(a.clone(), &a - &shift).unwrap();
                let s = constraint_slacks(&r, &p);
                let on_lower = s[1].is_zero() || s[2].is_zero();
                assert_eq!(necessary_region(&r, &p) && on_lower, p == d);
            }
        }
    }

    #[test]
    fn annulus_exponents() {
        assert_eq!(
            predicted_annulus_exponents(&spec(2, int(0)), 3),
            (int(-12), int(0))
        );
        assert_eq!(
            predicted_annulus_exponents(&spec(1, int(1)), 3),
            (int(-3), int(3))
        );
        let sums = geometric_partial_sums(&spec(1, ratio(1, 2)), 0.3, 200);
        assert!(sums.windows(2).all(|w| w[1] >= w[0]));
        let rate = 2f64.powf(-1.5 * 0.3);
        assert!((sums[199] - 1.0 / (1.0 - rate)).abs() < 1e-9);
    }

    #[test]
    fn boundary_distance() {
        let r = spec(1, int(0));
        assert!(distance_to_boundary(&r, (0.75, 0.25)) < 1e-15);
        let d = distance_to_boundary(&r, (0.5, 0.5));
        assert!(d < 1e-15);
        let inner = distance_to_boundary(&r, (0.6, 0.4));
        assert!(inner > 0.1);
    }

    #[test]
    fn approximate_path_agrees_on_rational_gamma() {
        let r = spec(1, ratio(1, 2));
        let approx = ApproxRegion::new(dim(1), 0.5).unwrap();
        let (a, b) = vertex_D(&r).to_f64();
        let (c, d) = approx.vertex_d();
        assert!((a - c).abs() < 1e-15 && (b - d).abs() < 1e-15);
        for i in 0..=20 {
            for j in 0..=i {
                let p = pt((i, 20), (j, 20));
                if distance_to_boundary(&r, p.to_f64()) > 1e-9 {
                    assert_eq!(necessary_region(&r, &p), approx.contains(p.to_f64(), 0.0));
                }
            }
        }
        assert!(
            ApproxRegion::new(dim(1), std::f64::consts::SQRT_2)
                .unwrap()
                .approximate
        );
        assert!(ApproxRegion::new(dim(1), 2.5).is_err());
    }

    #[test]
    fn summary_serializes_as_exact_strings() {
        let s = geometry_summary(&spec(1, int(1)));
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["vertices"][2][1]["inv_p"], "7/8");
        assert_eq!(json["vertices"][3][1]["inv_q"], "1/8");
        assert_eq!(json["theta_star"], "1/2");
        assert_eq!(s.lines[1].1, "1/q = 3·(1/p) − 2");
    }
}
