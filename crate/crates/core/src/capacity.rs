//! Information quantities for the type II wiretap channels and the
//! rate-equivocation regions built from them.
//!
//! All rates are in bits per channel use.

use serde::{Deserialize, Serialize};

use crate::channels::ChannelModel;
use crate::error::{Error, Result};

/// Per-panel tolerance of the adaptive Simpson rule.
pub const PANEL_TOLERANCE: f64 = 1e-8;
/// Half-width of the integration window around the integrand's centre,
/// in units of the Gaussian weight's `1/sqrt(2)` standard deviation scale.
const WINDOW: f64 = 10.0;

/// Upper Gaussian tail `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// `h(q) = -q log2 q - (1-q) log2 (1-q)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy(q: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(q) + term(1.0 - q)
}

/// `log2(1 + e^{-t})` without overflow for large `|t|`.
fn log2_one_plus_exp_neg(t: f64) -> f64 {
    let nat = if t >= 0.0 {
        (-t).exp().ln_1p()
    } else {
        -t + t.exp().ln_1p()
    };
    nat * std::f64::consts::LOG2_E
}

/// Capacity of the binary-input AWGN channel at SNR `λ = Es/N0`:
///
/// `1 - (1/sqrt(pi)) ∫ exp(-(y - sqrt λ)^2) log2(1 + exp(-4 y sqrt λ)) dy`.
pub fn c_biawgn(snr: f64) -> f64 {
    c_biawgn_with_bound(snr).0
}

/// Capacity together with a bound on the truncated tail mass.
///
/// The window `|y - sqrt λ| <= 10` drops at most
/// `[(1 + 4λ) erfc(10) + 4 sqrt(λ) e^{-100} / sqrt(pi)] / ln 2`, using
/// `log2(1 + e^{-t}) <= (1 + |t|) / ln 2`.
pub fn c_biawgn_with_bound(snr: f64) -> (f64, f64) {
    assert!(snr >= 0.0 && !snr.is_nan(), "SNR must be non-negative, got {snr}");
    if snr == 0.0 {
        return (0.0, 0.0);
    }
    let s = snr.sqrt();
    let integrand = |y: f64| {
        let d = y - s;
        (-d * d).exp() * log2_one_plus_exp_neg(4.0 * y * s)
    };
    let (lo, hi) = (s - WINDOW, s + WINDOW);
    let panels = 20;
    let width = (hi - lo) / panels as f64;
    let integral: f64 = (0..panels)
        .map(|i| {
            let a = lo + i as f64 * width;
            adaptive_simpson(&integrand, a, a + width, PANEL_TOLERANCE)
        })
        .sum();
    let c = 1.0 - integral / std::f64::consts::PI.sqrt();
    let tail = ((1.0 + 4.0 * snr) * libm::erfc(WINDOW)
        + 4.0 * s * (-WINDOW * WINDOW).exp() / std::f64::consts::PI.sqrt())
        * std::f64::consts::LOG2_E;
    (c.clamp(0.0, 1.0), tail)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Secrecy capacity of the type II wiretap channel with the given
/// eavesdropper channel: `ε` (BEC), `h(q)` (BSC), `1 - C(λ)` (BI-AWGN).
pub fn secrecy_capacity(ch: &ChannelModel) -> Result<f64> {
    ch.validate()?;
    Ok(match *ch {
        ChannelModel::Bec { erasure } => erasure,
        ChannelModel::Bsc { crossover } => binary_entropy(crossover),
        ChannelModel::BiAwgn { snr } => 1.0 - c_biawgn(snr),
    })
}

/// Perfect-secrecy rate reached by nesting on the dual of a capacity-achieving
/// erasure code: the erasure rate of the embedded BEC.
pub fn approach2_rate(ch: &ChannelModel) -> Result<f64> {
    ch.validate()?;
    Ok(match *ch {
        ChannelModel::Bec { erasure } => erasure,
        ChannelModel::Bsc { crossover } => {
            if crossover > 0.5 {
                return Err(Error::invalid(format!(
                    "BSC degradation needs q <= 1/2, got {crossover}"
                )));
            }
            2.0 * crossover
        }
        ChannelModel::BiAwgn { snr } => 2.0 * q_function((2.0 * snr).sqrt()),
    })
}

/// Erasure rate of the BEC embedded in the BI-AWGN channel: `2 Q(sqrt(2λ))`.
pub fn awgn_embedded_erasure(snr: f64) -> f64 {
    2.0 * q_function((2.0 * snr).sqrt())
}

/// Secrecy rate `-log2(1 - q)` of the error-detecting-code construction.
pub fn thangaraj_baseline(q: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::invalid(format!(
            "baseline rate needs q in [0, 1), got {q}"
        )));
    }
    Ok(-(1.0 - q).log2())
}

/// `Δ = 1 - C(λ) - 2 Q(sqrt(2λ))`, reported without clamping.
pub fn secrecy_gap(snr: f64) -> f64 {
    1.0 - c_biawgn(snr) - awgn_embedded_erasure(snr)
}

/// A rate-equivocation pair `(R, Re)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEquivocationPoint {
    pub rate: f64,
    pub equivocation: f64,
}

impl RateEquivocationPoint {
    pub const fn new(rate: f64, equivocation: f64) -> Self {
        RateEquivocationPoint { rate, equivocation }
    }

    /// `0 <= Re <= R <= 1` within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.equivocation >= -tol && self.equivocation <= self.rate + tol && self.rate <= 1.0 + tol
    }
}

/// Convex polygon in the `(R, Re)` plane, counterclockwise from `(0, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPolygon {
    vertices: Vec<RateEquivocationPoint>,
}

impl RegionPolygon {
    /// Convex hull of `points` (monotone chain). Collinear and repeated points
    /// are dropped.
    pub fn hull(points: &[RateEquivocationPoint]) -> Self {
        let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p.rate, p.equivocation)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15);
        if pts.len() < 3 {
            return RegionPolygon {
                vertices: pts.into_iter().map(|(r, e)| RateEquivocationPoint::new(r, e)).collect(),
            };
        }
        let mut lower: Vec<(f64, f64)> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 1e-15 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<(f64, f64)> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 1e-15 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        RegionPolygon {
            vertices: lower.into_iter().map(|(r, e)| RateEquivocationPoint::new(r, e)).collect(),
        }
    }

    pub fn vertices(&self) -> &[RateEquivocationPoint] {
        &self.vertices
    }

    /// True when every turn is a left turn (or the polygon is degenerate).
    pub fn is_convex(&self) -> bool {
        let v = &self.vertices;
        if v.len() < 3 {
            return true;
        }
        (0..v.len()).all(|i| {
            let (a, b, c) = (v[i], v[(i + 1) % v.len()], v[(i + 2) % v.len()]);
            cross((a.rate, a.equivocation), (b.rate, b.equivocation), (c.rate, c.equivocation)) > 0.0
        })
    }

    /// Point membership, boundary included up to `tol`.
    pub fn contains(&self, p: RateEquivocationPoint, tol: f64) -> bool {
        let v = &self.vertices;
        match v.len() {
            0 => false,
            1 => (v[0].rate - p.rate).hypot(v[0].equivocation - p.equivocation) <= tol,
            2 => distance_to_segment(p, v[0], v[1]) <= tol,
            len => (0..len).all(|i| {
                let (a, b) = (v[i], v[(i + 1) % len]);
                let edge = (b.rate - a.rate).hypot(b.equivocation - a.equivocation);
                cross((a.rate, a.equivocation), (b.rate, b.equivocation), (p.rate, p.equivocation)) >= -tol * edge
            }),
        }
    }

    pub fn contains_polygon(&self, other: &RegionPolygon, tol: f64) -> bool {
        other.vertices.iter().all(|&p| self.contains(p, tol))
    }

    pub fn area(&self) -> f64 {
        let v = &self.vertices;
        let len = v.len();
        if len < 3 {
            return 0.0;
        }
        0.5 * (0..len)
            .map(|i| {
                let (a, b) = (v[i], v[(i + 1) % len]);
                a.rate * b.equivocation - b.rate * a.equivocation
            })
            .sum::<f64>()
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn distance_to_segment(p: RateEquivocationPoint, a: RateEquivocationPoint, b: RateEquivocationPoint) -> f64 {
    let (dx, dy) = (b.rate - a.rate, b.equivocation - a.equivocation);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.rate - a.rate) * dx + (p.equivocation - a.equivocation) * dy) / len2).clamp(0.0, 1.0)
    };
    (p.rate - a.rate - t * dx).hypot(p.equivocation - a.equivocation - t * dy)
}

/// Corner points whose convex hull is the region achieved by time-sharing
/// among the nested constructions at SNR `λ`.
pub fn achievable_region_points(snr: f64, coarse_rate: f64, dual_rate: f64) -> [RateEquivocationPoint; 5] {
    let cap = 1.0 - c_biawgn(snr);
    [
        RateEquivocationPoint::new(0.0, 0.0),
        RateEquivocationPoint::new(dual_rate, dual_rate),
        RateEquivocationPoint::new(1.0 - coarse_rate, cap),
        RateEquivocationPoint::new(1.0, cap),
        RateEquivocationPoint::new(1.0, 0.0),
    ]
}

/// Achievable rate-equivocation region for the type II AWGN wiretap channel
/// using a good code of rate `coarse_rate` (threshold at or below `λ`) and a
/// dual-code construction of perfect-secrecy rate `dual_rate`.
pub fn achievable_region(snr: f64, coarse_rate: f64, dual_rate: f64) -> Result<RegionPolygon> {
    if snr < 0.0 || snr.is_nan() {
        return Err(Error::invalid(format!("SNR must be non-negative, got {snr}")));
    }
    for (name, r) in [("coarse rate", coarse_rate), ("dual-code rate", dual_rate)] {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::invalid(format!("{name} {r} outside [0, 1]")));
        }
    }
    // a good code of rate R1 with threshold at or below λ needs R1 <= C(λ)
    let c = c_biawgn(snr);
    if coarse_rate > c + 1e-12 {
        return Err(Error::invalid(format!(
            "coarse rate {coarse_rate} exceeds the eavesdropper capacity {c} at SNR {snr}"
        )));
    }
    Ok(RegionPolygon::hull(&achievable_region_points(snr, coarse_rate, dual_rate)))
}

/// `{(R, Re) : Re <= R <= 1, 0 <= Re <= 1 - C(λ)}`.
pub fn capacity_equivocation_region(snr: f64) -> Result<RegionPolygon> {
    if snr < 0.0 || snr.is_nan() {
        return Err(Error::invalid(format!("SNR must be non-negative, got {snr}")));
    }
    let cap = 1.0 - c_biawgn(snr);
    Ok(RegionPolygon::hull(&[
        RateEquivocationPoint::new(0.0, 0.0),
        RateEquivocationPoint::new(1.0, 0.0),
        RateEquivocationPoint::new(1.0, cap),
        RateEquivocationPoint::new(cap, cap),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from an independent adaptive Gauss-Kronrod evaluation
    // of the same integral (scipy.integrate.quad, epsabs 1e-13).
    const CAPACITY_REFERENCE: &[(f64, f64)] = &[
        (0.3, 0.335_596_014_008_553_8),
        (0.302, 0.337_329_848_677_315_3),
        (0.32, 0.352_700_574_649_406_1),
        (0.465, 0.462_671_126_056_527_3),
        (1.0, 0.721_451_590_790_388_1),
    ];

    #[test]
    fn q_function_values() {
        assert_eq!(q_function(0.0), 0.5);
        assert_eq!(q_function(f64::NEG_INFINITY), 1.0);
        assert_eq!(q_function(f64::INFINITY), 0.0);
        assert!((2.0 * q_function((2.0f64 * 0.465).sqrt()) - 0.335).abs() < 1e-3);
        // Q(1) = 0.158655253931457...
        assert!((q_function(1.0) - 0.158_655_253_931_457_05).abs() < 1e-15);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5), 1.0);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        // series form: h(q) = log2 e * [ln 2 ... ]; cross-check against ln directly
        let q: f64 = 0.11;
        let by_ln = -(q * q.ln() + (1.0 - q) * (1.0 - q).ln()) / std::f64::consts::LN_2;
        assert!((binary_entropy(q) - by_ln).abs() < 1e-15);
        assert!((binary_entropy(0.11) - 0.49999).abs() < 1e-4);
    }

    #[test]
    fn capacity_against_reference() {
        assert_eq!(c_biawgn(0.0), 0.0);
        assert!(c_biawgn(20.0) >= 0.9999);
        for &(snr, c) in CAPACITY_REFERENCE {
            let (value, tail) = c_biawgn_with_bound(snr);
            assert!((value - c).abs() < 1e-8, "λ={snr}: {value} vs {c}");
            assert!(tail < 1e-40);
        }
        assert!((1.0 - c_biawgn(0.302) - 0.663).abs() < 1e-3);
    }

    #[test]
    fn capacity_is_monotone_and_bounded() {
        let mut prev = 0.0;
        for i in 0..100 {
            let snr = 20.0 * i as f64 / 99.0;
            let c = c_biawgn(snr);
            assert!((0.0..=1.0).contains(&c));
            assert!(c >= prev - 1e-12, "capacity dropped at λ={snr}");
            prev = c;
        }
    }

    #[test]
    fn secrecy_capacities() {
        assert_eq!(secrecy_capacity(&ChannelModel::Bec { erasure: 0.3 }).unwrap(), 0.3);
        assert_eq!(secrecy_capacity(&ChannelModel::Bsc { crossover: 0.0 }).unwrap(), 0.0);
        let awgn = secrecy_capacity(&ChannelModel::BiAwgn { snr: 0.302 }).unwrap();
        assert!((awgn - 0.663).abs() < 1e-3);
        assert!(secrecy_capacity(&ChannelModel::Bec { erasure: 1.5 }).is_err());
    }

    #[test]
    fn approach2_rates() {
        // 2 Q(0.8) = erfc(0.8 / sqrt 2) = 0.42371079716679...
        let awgn = approach2_rate(&ChannelModel::BiAwgn { snr: 0.32 }).unwrap();
        assert!((awgn - 0.4237).abs() < 5e-4);
        assert!((awgn - 0.423_710_797_166_793_5).abs() < 1e-12);
        assert_eq!(approach2_rate(&ChannelModel::Bsc { crossover: 0.25 }).unwrap(), 0.5);
        assert_eq!(approach2_rate(&ChannelModel::Bec { erasure: 0.4 }).unwrap(), 0.4);
        assert!(approach2_rate(&ChannelModel::Bsc { crossover: 0.6 }).is_err());
    }

    #[test]
    fn baseline_values() {
        assert_eq!(thangaraj_baseline(0.0).unwrap(), 0.0);
        assert_eq!(thangaraj_baseline(0.5).unwrap(), 1.0);
        assert!((thangaraj_baseline(0.1).unwrap() - 0.152).abs() < 1e-3);
        assert!(thangaraj_baseline(1.0).is_err());
    }

    #[test]
    fn gap_values() {
        assert!(secrecy_gap(0.0).abs() < 1e-15);
        assert!((secrecy_gap(0.302) - 0.226).abs() < 2e-3);
        assert!(secrecy_gap(40.0).abs() < 1e-9);
        // non-negative over the operating range
        for i in 0..=70 {
            let snr = 0.3 + i as f64 * 0.01;
            assert!(secrecy_gap(snr) >= 0.0, "Δ < 0 at λ={snr}");
        }
    }

    #[test]
    fn region_at_032() {
        let dual = awgn_embedded_erasure(0.32);
        let region = achievable_region(0.32, 1.0 / 3.0, dual).unwrap();
        let cap = 1.0 - c_biawgn(0.32);
        let v = region.vertices();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], RateEquivocationPoint::new(0.0, 0.0));
        assert!(v.iter().any(|p| (p.rate - 2.0 / 3.0).abs() < 1e-12 && (p.equivocation - cap).abs() < 1e-12));
        assert!(v.iter().any(|p| (p.rate - 0.4237).abs() < 5e-4 && p.rate == p.equivocation));
        assert!(region.is_convex());
        assert!(v.iter().all(|p| p.is_valid(1e-12)));
        let outer = capacity_equivocation_region(0.32).unwrap();
        assert!(outer.contains_polygon(&region, 1e-12));
        assert!(outer.area() > region.area());
    }

    #[test]
    fn region_degenerate_cases() {
        // R1 = 0: (1 - R1, cap) and (1, cap) coincide.
        assert!(achievable_region(0.0, 1.0 / 3.0, 1.0).is_err());
        let region = achievable_region(0.5, 0.0, awgn_embedded_erasure(0.5)).unwrap();
        let cap = 1.0 - c_biawgn(0.5);
        assert!(region.vertices().iter().any(|p| p.rate == 1.0 && (p.equivocation - cap).abs() < 1e-15));
        assert_eq!(region.vertices().len(), 4);

        // λ → ∞: everything collapses onto the Re = 0 edge.
        let region = achievable_region(60.0, 0.5, awgn_embedded_erasure(60.0)).unwrap();
        assert!(region.vertices().iter().all(|p| p.equivocation < 1e-9));

        let triangle = capacity_equivocation_region(0.0).unwrap();
        assert_eq!(
            triangle.vertices(),
            &[
                RateEquivocationPoint::new(0.0, 0.0),
                RateEquivocationPoint::new(1.0, 0.0),
                RateEquivocationPoint::new(1.0, 1.0)
            ]
        );
        let capped = capacity_equivocation_region(0.302).unwrap();
        let top = capped.vertices().iter().map(|p| p.equivocation).fold(0.0, f64::max);
        assert!((top - 0.663).abs() < 1e-3);
    }

    #[test]
    fn achievable_inside_capacity_on_grid() {
        for i in 0..40 {
            let snr = 0.05 + i as f64 * 0.1;
            // a good code for this SNR has rate below capacity
            let coarse_rate = 0.9 * c_biawgn(snr);
            let region = achievable_region(snr, coarse_rate, awgn_embedded_erasure(snr)).unwrap();
            let outer = capacity_equivocation_region(snr).unwrap();
            if secrecy_gap(snr) >= 0.0 {
                assert!(outer.contains_polygon(&region, 1e-12), "λ={snr}");
            }
            assert!(region.is_convex());
        }
    }

    #[test]
    fn membership_rejects_outside_points() {
        let outer = capacity_equivocation_region(0.32).unwrap();
        assert!(!outer.contains(RateEquivocationPoint::new(0.5, 0.6), 1e-12));
        assert!(outer.contains(RateEquivocationPoint::new(0.5, 0.5), 1e-12));
        assert!(!outer.contains(RateEquivocationPoint::new(1.1, 0.1), 1e-12));
    }
}
