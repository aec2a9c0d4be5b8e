//! Ellipsoidal coordinates on a triaxial reference ellipsoid.
//!
//! A point (x, y, z) maps to (λ, μ, ν) through the roots of the confocal
//! equation
//!
//! ```text
//!   x²/t + y²/(t − h²) + z²/(t − k²) = 1,      t = s²,
//! ```
//!
//! with h² = a² − b², k² = a² − c². The three roots interleave as
//! λ² > k² > μ² > h² > ν² > 0, and signs follow
//!
//! ```text
//!   sgn λ = sgn x · sgn y · sgn z,   sgn μ = sgn x · sgn y,   sgn ν = sgn x · sgn z.
//! ```
//!
//! Besides the signed coordinates, points carry the four differences
//! (λ²−k², μ²−h², k²−μ², h²−ν²) refined to full relative precision: the
//! Cartesian recovery formulas take square roots of these, and forming them
//! by subtraction near a coordinate plane would lose half the digits.

use crate::error::{Error, Result};

/// Reference ellipsoid with a > b > c > 0 and the derived focal parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidalSystem {
    a: f64,
    b: f64,
    c: f64,
    h_sq: f64,
    k_sq: f64,
}

impl EllipsoidalSystem {
    /// Validates the semi-axes and derives h² = a²−b², k² = a²−c².
    ///
    /// Strictly triaxial only: spheres and spheroids are rejected.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidAxes(format!("non-finite axes ({a}, {b}, {c})")));
        }
        if c <= 0.0 {
            return Err(Error::InvalidAxes(format!("c = {c} must be positive")));
        }
        if a <= b {
            return Err(Error::InvalidAxes(format!(
                "a = {a} must exceed b = {b} (spheroid degenerate)"
            )));
        }
        if b <= c {
            return Err(Error::InvalidAxes(format!(
                "b = {b} must exceed c = {c} (spheroid degenerate)"
            )));
        }
        let h_sq = (a - b) * (a + b);
        let k_sq = (a - c) * (a + c);
        Ok(Self { a, b, c, h_sq, k_sq })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn h_sq(&self) -> f64 {
        self.h_sq
    }

    pub fn k_sq(&self) -> f64 {
        self.k_sq
    }

    pub fn h(&self) -> f64 {
        self.h_sq.sqrt()
    }

    pub fn k(&self) -> f64 {
        self.k_sq.sqrt()
    }

    /// Tolerance below which a Cartesian coordinate counts as on-plane.
    fn plane_tol(&self) -> f64 {
        1e-12 * self.a
    }
}

/// Signed ellipsoidal coordinates of one point, with stable differences.
#[derive(Debug, Clone, Copy)]
pub struct EllipsoidalPoint {
    lambda: f64,
    mu: f64,
    nu: f64,
    lambda_sq_minus_ksq: f64,
    mu_sq_minus_hsq: f64,
    ksq_minus_mu_sq: f64,
    hsq_minus_nu_sq: f64,
}

impl EllipsoidalPoint {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// λ² − k² ≥ 0.
    pub fn lambda_sq_minus_ksq(&self) -> f64 {
        self.lambda_sq_minus_ksq
    }

    /// μ² − h² ≥ 0.
    pub fn mu_sq_minus_hsq(&self) -> f64 {
        self.mu_sq_minus_hsq
    }

    /// k² − μ² ≥ 0.
    pub fn ksq_minus_mu_sq(&self) -> f64 {
        self.ksq_minus_mu_sq
    }

    /// h² − ν² ≥ 0.
    pub fn hsq_minus_nu_sq(&self) -> f64 {
        self.hsq_minus_nu_sq
    }

    /// Builds a point from raw signed coordinates; differences are formed by
    /// subtraction, so prefer [`cart_to_ellipsoidal`] output where available.
    pub fn from_coords(sys: &EllipsoidalSystem, lambda: f64, mu: f64, nu: f64) -> Result<Self> {
        let point = Self {
            lambda,
            mu,
            nu,
            lambda_sq_minus_ksq: lambda * lambda - sys.k_sq(),
            mu_sq_minus_hsq: mu * mu - sys.h_sq(),
            ksq_minus_mu_sq: sys.k_sq() - mu * mu,
            hsq_minus_nu_sq: sys.h_sq() - nu * nu,
        };
        point.check_brackets(sys)?;
        Ok(point)
    }

    fn check_brackets(&self, sys: &EllipsoidalSystem) -> Result<()> {
        let slack = 1e-9 * sys.k_sq();
        let ok = self.lambda_sq_minus_ksq >= -slack
            && self.mu_sq_minus_hsq >= -slack
            && self.ksq_minus_mu_sq >= -slack
            && self.hsq_minus_nu_sq >= -slack
            && self.nu * self.nu <= sys.h_sq() + slack;
        if ok {
            Ok(())
        } else {
            Err(Error::BracketViolation(format!(
                "lambda = {}, mu = {}, nu = {} against h² = {}, k² = {}",
                self.lambda,
                self.mu,
                self.nu,
                sys.h_sq(),
                sys.k_sq()
            )))
        }
    }
}

/// sgn with the convention sgn(0) = +1.
#[inline]
pub(crate) fn pos_sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Monic confocal cubic t³ − e2·t² + e1·t − e0 for a Cartesian point.
#[derive(Debug, Clone, Copy)]
struct ConfocalCubic {
    e2: f64,
    e1: f64,
    e0: f64,
}

impl ConfocalCubic {
    fn new(sys: &EllipsoidalSystem, x: f64, y: f64, z: f64) -> Self {
        let (h2, k2) = (sys.h_sq(), sys.k_sq());
        let r2 = x * x + y * y + z * z;
        ConfocalCubic {
            e2: h2 + k2 + r2,
            e1: h2 * k2 + x * x * (h2 + k2) + y * y * k2 + z * z * h2,
            e0: x * x * h2 * k2,
        }
    }

    fn eval(&self, t: f64) -> f64 {
        ((t - self.e2) * t + self.e1) * t - self.e0
    }

    fn deriv(&self, t: f64) -> f64 {
        (3.0 * t - 2.0 * self.e2) * t + self.e1
    }

    /// All three roots by the trigonometric formula (always real here).
    fn trig_roots(&self) -> [f64; 3] {
        let shift = self.e2 / 3.0;
        let p = self.e1 - self.e2 * self.e2 / 3.0;
        let q = self.eval(shift);
        if p >= 0.0 {
            // Triple-root degeneracy; only reachable in the exact limit.
            return [shift, shift, shift];
        }
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let two_thirds_pi = 2.0 * std::f64::consts::PI / 3.0;
        [
            shift + m * theta.cos(),
            shift + m * (theta - two_thirds_pi).cos(),
            shift + m * (theta + two_thirds_pi).cos(),
        ]
    }

    /// Newton-refines the offset δ = t − anchor using an exact value of the
    /// cubic at the anchor, so tiny offsets keep full relative precision.
    fn refine_offset(&self, anchor: f64, value_at_anchor: f64, start: f64) -> f64 {
        let a2 = 3.0 * anchor - self.e2;
        let a1 = (3.0 * anchor - 2.0 * self.e2) * anchor + self.e1;
        let mut delta = start;
        for _ in 0..4 {
            let g = ((delta + a2) * delta + a1) * delta + value_at_anchor;
            let gp = (3.0 * delta + 2.0 * a2) * delta + a1;
            if gp == 0.0 {
                break;
            }
            let step = g / gp;
            delta -= step;
            if step.abs() <= 1e-16 * delta.abs() {
                break;
            }
        }
        delta
    }
}

/// Cartesian → ellipsoidal transform.
///
/// On-plane coordinates (|coord| < 1e−12·a) snap the matching ellipsoidal
/// coordinate to its bracket endpoint with positive sign; the remaining
/// coordinates come from the deflated quadratic. Points within tolerance of
/// the focal curves are rejected.
pub fn cart_to_ellipsoidal(sys: &EllipsoidalSystem, x: f64, y: f64, z: f64) -> Result<EllipsoidalPoint> {
    let tol = sys.plane_tol();
    let (h2, k2) = (sys.h_sq(), sys.k_sq());
    let band = k2 - h2;

    let x_on = x.abs() < tol;
    let y_on = y.abs() < tol;
    let z_on = z.abs() < tol;

    let sign_l = pos_sign(x) * pos_sign(y) * pos_sign(z);
    let sign_m = pos_sign(x) * pos_sign(y);
    let sign_n = pos_sign(x) * pos_sign(z);

    // A solved root set as squares plus the four stable differences.
    struct Squares {
        l2: f64,
        m2: f64,
        n2: f64,
        d_lk: f64,
        d_mh: f64,
        d_km: f64,
        d_nh: f64,
    }

    let sq = match (x_on, y_on, z_on) {
        (true, true, true) => Squares {
            l2: k2,
            m2: h2,
            n2: 0.0,
            d_lk: 0.0,
            d_mh: 0.0,
            d_km: band,
            d_nh: h2,
        },
        (true, true, false) => {
            // z-axis: λ² = k² + z², μ = h, ν = 0.
            Squares {
                l2: k2 + z * z,
                m2: h2,
                n2: 0.0,
                d_lk: z * z,
                d_mh: 0.0,
                d_km: band,
                d_nh: h2,
            }
        }
        (true, false, true) => {
            // y-axis: ν = 0 and the h²+y² root goes to λ or μ.
            let t = h2 + y * y;
            if t >= k2 {
                if t - k2 < tol * tol {
                    return Err(Error::FocalDegeneracy { x, y, z });
                }
                Squares {
                    l2: t,
                    m2: k2,
                    n2: 0.0,
                    d_lk: y * y - band,
                    d_mh: band,
                    d_km: 0.0,
                    d_nh: h2,
                }
            } else {
                Squares {
                    l2: k2,
                    m2: t,
                    n2: 0.0,
                    d_lk: 0.0,
                    d_mh: y * y,
                    d_km: band - y * y,
                    d_nh: h2,
                }
            }
        }
        (false, true, true) => {
            // x-axis: roots are exactly {x², h², k²}.
            let t = x * x;
            if (t - h2).abs() < tol * tol || (t - k2).abs() < tol * tol {
                return Err(Error::FocalDegeneracy { x, y, z });
            }
            if t > k2 {
                Squares {
                    l2: t,
                    m2: k2,
                    n2: h2,
                    d_lk: t - k2,
                    d_mh: band,
                    d_km: 0.0,
                    d_nh: 0.0,
                }
            } else if t > h2 {
                Squares {
                    l2: k2,
                    m2: t,
                    n2: h2,
                    d_lk: 0.0,
                    d_mh: t - h2,
                    d_km: k2 - t,
                    d_nh: 0.0,
                }
            } else {
                Squares {
                    l2: k2,
                    m2: h2,
                    n2: t,
                    d_lk: 0.0,
                    d_mh: 0.0,
                    d_km: band,
                    d_nh: h2 - t,
                }
            }
        }
        (true, false, false) => {
            // x = 0 plane: ν = 0; quadratic for (λ², μ²).
            let b = h2 + k2 + y * y + z * z;
            let c0 = h2 * k2 + y * y * k2 + z * z * h2;
            let disc = (b * b - 4.0 * c0).max(0.0).sqrt();
            let t_hi = 0.5 * (b + disc);
            let t_lo = c0 / t_hi;
            Squares {
                l2: t_hi,
                m2: t_lo,
                n2: 0.0,
                d_lk: t_hi - k2,
                d_mh: t_lo - h2,
                d_km: k2 - t_lo,
                d_nh: h2,
            }
        }
        (false, true, false) => {
            // y = 0 plane: one root pinned at h².
            let b = k2 + x * x + z * z;
            let c0 = x * x * k2;
            let disc = (b * b - 4.0 * c0).max(0.0).sqrt();
            let t_hi = 0.5 * (b + disc);
            let t_lo = c0 / t_hi;
            if (t_lo - h2).abs() < tol * tol {
                return Err(Error::FocalDegeneracy { x, y, z });
            }
            if t_lo > h2 {
                Squares {
                    l2: t_hi,
                    m2: t_lo,
                    n2: h2,
                    d_lk: t_hi - k2,
                    d_mh: t_lo - h2,
                    d_km: k2 - t_lo,
                    d_nh: 0.0,
                }
            } else {
                Squares {
                    l2: t_hi,
                    m2: h2,
                    n2: t_lo,
                    d_lk: t_hi - k2,
                    d_mh: 0.0,
                    d_km: band,
                    d_nh: h2 - t_lo,
                }
            }
        }
        (false, false, true) => {
            // z = 0 plane: one root pinned at k².
            let b = h2 + x * x + y * y;
            let c0 = x * x * h2;
            let disc = (b * b - 4.0 * c0).max(0.0).sqrt();
            let t_hi = 0.5 * (b + disc);
            let t_lo = c0 / t_hi;
            if (t_hi - k2).abs() < tol * tol {
                return Err(Error::FocalDegeneracy { x, y, z });
            }
            if t_hi > k2 {
                Squares {
                    l2: t_hi,
                    m2: k2,
                    n2: t_lo,
                    d_lk: t_hi - k2,
                    d_mh: band,
                    d_km: 0.0,
                    d_nh: h2 - t_lo,
                }
            } else {
                Squares {
                    l2: k2,
                    m2: t_hi,
                    n2: t_lo,
                    d_lk: 0.0,
                    d_mh: t_hi - h2,
                    d_km: k2 - t_hi,
                    d_nh: h2 - t_lo,
                }
            }
        }
        (false, false, false) => {
            let cubic = ConfocalCubic::new(sys, x, y, z);
            let roots = cubic.trig_roots();

            // λ²: plain Newton, the large root is well conditioned.
            let mut l2 = roots[0];
            for _ in 0..3 {
                let d = cubic.deriv(l2);
                if d == 0.0 {
                    break;
                }
                l2 -= cubic.eval(l2) / d;
            }

            // μ²: refine against the nearer focal anchor; the exact cubic
            // values f(h²) = y²h²(k²−h²) and f(k²) = −z²k²(k²−h²) keep the
            // offset accurate however small it is.
            let (d_mh, d_km) = if roots[1] - h2 <= k2 - roots[1] {
                let delta = cubic.refine_offset(h2, y * y * h2 * band, roots[1] - h2);
                (delta, band - delta)
            } else {
                let delta = cubic.refine_offset(k2, -(z * z) * k2 * band, roots[1] - k2);
                (band + delta, -delta)
            };
            let m2 = h2 + d_mh;

            // ν²: anchor at 0 (f(0) = −x²h²k²) or at h².
            let (n2, d_nh) = if roots[2] <= 0.5 * h2 {
                let delta = cubic.refine_offset(0.0, -cubic.e0, roots[2]);
                (delta, h2 - delta)
            } else {
                let delta = cubic.refine_offset(h2, y * y * h2 * band, roots[2] - h2);
                (h2 + delta, -delta)
            };

            let d_lk = l2 - k2;
            let slack = 1e-9 * k2;
            if d_lk < -slack || d_mh < -slack || d_km < -slack || n2 < -slack || d_nh < -slack {
                let worst = [d_lk, d_mh, d_km, n2, d_nh]
                    .into_iter()
                    .fold(f64::INFINITY, f64::min);
                return Err(Error::RootOutsideBracket {
                    root: worst,
                    lo: 0.0,
                    hi: k2,
                    residual: cubic.eval(m2).abs(),
                });
            }
            Squares {
                l2,
                m2,
                n2: n2.max(0.0),
                d_lk: d_lk.max(0.0),
                d_mh: d_mh.max(0.0),
                d_km: d_km.max(0.0),
                d_nh: d_nh.max(0.0),
            }
        }
    };

    Ok(EllipsoidalPoint {
        lambda: sign_l * sq.l2.sqrt(),
        mu: sign_m * sq.m2.sqrt(),
        nu: sign_n * sq.n2.sqrt(),
        lambda_sq_minus_ksq: sq.d_lk,
        mu_sq_minus_hsq: sq.d_mh,
        ksq_minus_mu_sq: sq.d_km,
        hsq_minus_nu_sq: sq.d_nh,
    })
}

/// Ellipsoidal → Cartesian transform.
///
/// Magnitudes come from the closed-form products; signs invert the forward
/// convention (sgn x = sλ·sμ·sν, sgn y = sλ·sν, sgn z = sλ·sμ).
pub fn ellipsoidal_to_cart(sys: &EllipsoidalSystem, p: &EllipsoidalPoint) -> Result<(f64, f64, f64)> {
    p.check_brackets(sys)?;
    let (h2, k2) = (sys.h_sq(), sys.k_sq());
    let band = k2 - h2;

    let lam2_minus_hsq = p.lambda_sq_minus_ksq() + band;
    let ksq_minus_nu_sq = p.hsq_minus_nu_sq() + band;

    let x_abs = (p.lambda() * p.mu() * p.nu()).abs() / (h2 * k2).sqrt();
    let y_abs =
        (lam2_minus_hsq * p.mu_sq_minus_hsq() * p.hsq_minus_nu_sq() / (h2 * band)).max(0.0).sqrt();
    let z_abs = (p.lambda_sq_minus_ksq() * p.ksq_minus_mu_sq() * ksq_minus_nu_sq / (k2 * band))
        .max(0.0)
        .sqrt();

    let sl = pos_sign(p.lambda());
    let sm = pos_sign(p.mu());
    let sn = pos_sign(p.nu());
    Ok((sl * sm * sn * x_abs, sl * sn * y_abs, sl * sm * z_abs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn sys321() -> EllipsoidalSystem {
        EllipsoidalSystem::new(3.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn derived_focal_parameters() {
        let sys = sys321();
        assert_eq!(sys.h_sq(), 5.0);
        assert_eq!(sys.k_sq(), 8.0);

        let sys = EllipsoidalSystem::new(2.0, 1.5, 1.0).unwrap();
        assert_relative_eq!(sys.h_sq(), 1.75, max_relative = 1e-15);
        assert_relative_eq!(sys.k_sq(), 3.0, max_relative = 1e-15);
    }

    #[test]
    fn degenerate_axes_are_rejected() {
        assert!(EllipsoidalSystem::new(1.0, 1.0, 0.5).is_err());
        assert!(EllipsoidalSystem::new(2.0, 1.0, 1.0).is_err());
        assert!(EllipsoidalSystem::new(2.0, 1.5, 0.0).is_err());
        assert!(EllipsoidalSystem::new(2.0, 1.5, -1.0).is_err());
    }

    #[test]
    fn surface_points_have_lambda_a() {
        let sys = sys321();
        for (u, v) in [(0.3f64, 1.1f64), (1.2, 0.4), (0.9, 2.0), (2.2, 0.7)] {
            let x = sys.a() * u.sin() * v.cos();
            let y = sys.b() * u.sin() * v.sin();
            let z = sys.c() * u.cos();
            let p = cart_to_ellipsoidal(&sys, x, y, z).unwrap();
            assert!(
                (p.lambda().abs() - sys.a()).abs() < 1e-12,
                "lambda = {}",
                p.lambda()
            );
        }
    }

    /// Independent bracketed bisection on the cleared cubic.
    fn bisect_roots(sys: &EllipsoidalSystem, x: f64, y: f64, z: f64) -> [f64; 3] {
        let cubic = ConfocalCubic::new(sys, x, y, z);
        let f = |t: f64| cubic.eval(t);
        let bound = sys.h_sq() + sys.k_sq() + x * x + y * y + z * z + 1.0;
        let mut out = [0.0; 3];
        let brackets = [
            (sys.k_sq(), bound),
            (sys.h_sq(), sys.k_sq()),
            (0.0, sys.h_sq()),
        ];
        for (i, (mut lo, mut hi)) in brackets.into_iter().enumerate() {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(lo) * f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out[i] = 0.5 * (lo + hi);
        }
        out
    }

    #[test]
    fn cubic_roots_match_bisection_oracle() {
        let sys = sys321();
        let (x, y, z) = (1.0, 0.8, 0.5);
        let oracle = bisect_roots(&sys, x, y, z);
        let p = cart_to_ellipsoidal(&sys, x, y, z).unwrap();
        assert_relative_eq!(p.lambda() * p.lambda(), oracle[0], max_relative = 1e-12);
        assert_relative_eq!(p.mu() * p.mu(), oracle[1], max_relative = 1e-12);
        assert_relative_eq!(p.nu() * p.nu(), oracle[2], max_relative = 1e-12);
    }

    #[test]
    fn roundtrip_derived_point() {
        let sys = sys321();
        let (x, y, z) = (1.0, 0.8, 0.5);
        let p = cart_to_ellipsoidal(&sys, x, y, z).unwrap();
        let (xr, yr, zr) = ellipsoidal_to_cart(&sys, &p).unwrap();
        assert_relative_eq!(xr, x, max_relative = 1e-10);
        assert_relative_eq!(yr, y, max_relative = 1e-10);
        assert_relative_eq!(zr, z, max_relative = 1e-10);
    }

    #[test]
    fn confocal_residual_at_lambda() {
        let sys = sys321();
        let (x, y, z) = (1.4, -0.9, 0.6);
        let p = cart_to_ellipsoidal(&sys, x, y, z).unwrap();
        let (xr, yr, zr) = ellipsoidal_to_cart(&sys, &p).unwrap();
        let t = p.lambda() * p.lambda();
        let residual =
            xr * xr / t + yr * yr / (t - sys.h_sq()) + zr * zr / (t - sys.k_sq()) - 1.0;
        assert!(residual.abs() < 1e-10, "residual {residual:e}");
    }

    #[test]
    fn all_positive_coordinates_map_to_first_octant() {
        let sys = sys321();
        let p = EllipsoidalPoint::from_coords(&sys, 3.2, 2.4, 1.1).unwrap();
        let (x, y, z) = ellipsoidal_to_cart(&sys, &p).unwrap();
        assert!(x > 0.0 && y > 0.0 && z > 0.0);
    }

    #[test]
    fn sign_tables_compose_to_identity_in_all_octants() {
        let sys = sys321();
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    let (x, y, z) = (sx * 1.1, sy * 0.7, sz * 0.4);
                    let p = cart_to_ellipsoidal(&sys, x, y, z).unwrap();
                    let (xr, yr, zr) = ellipsoidal_to_cart(&sys, &p).unwrap();
                    assert_eq!(pos_sign(xr), sx, "octant ({sx},{sy},{sz})");
                    assert_eq!(pos_sign(yr), sy, "octant ({sx},{sy},{sz})");
                    assert_eq!(pos_sign(zr), sz, "octant ({sx},{sy},{sz})");
                }
            }
        }
    }

    #[test]
    fn roundtrip_random_points() {
        let sys = sys321();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let margin = 1e-6 * sys.a();
        let mut tested = 0;
        while tested < 2000 {
            let x: f64 = rng.gen_range(-2.0 * sys.a()..2.0 * sys.a());
            let y: f64 = rng.gen_range(-2.0 * sys.a()..2.0 * sys.a());
            let z: f64 = rng.gen_range(-2.0 * sys.a()..2.0 * sys.a());
            if x.abs() < margin || y.abs() < margin || z.abs() < margin {
                continue;
            }
            tested += 1;
            let p = cart_to_ellipsoidal(&sys, x, y, z).unwrap();
            let (xr, yr, zr) = ellipsoidal_to_cart(&sys, &p).unwrap();
            let err = ((xr - x).powi(2) + (yr - y).powi(2) + (zr - z).powi(2)).sqrt()
                / (x * x + y * y + z * z).sqrt();
            assert!(err < 1e-10, "({x}, {y}, {z}): relative error {err:e}");
        }
    }

    #[test]
    fn root_ordering_holds() {
        let sys = sys321();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..500 {
            let x: f64 = rng.gen_range(0.01..6.0);
            let y: f64 = rng.gen_range(0.01..6.0);
            let z: f64 = rng.gen_range(0.01..6.0);
            let p = cart_to_ellipsoidal(&sys, x, y, z).unwrap();
            let (l2, m2, n2) = (
                p.lambda() * p.lambda(),
                p.mu() * p.mu(),
                p.nu() * p.nu(),
            );
            assert!(l2 >= sys.k_sq() && sys.k_sq() >= m2);
            assert!(m2 >= sys.h_sq() && sys.h_sq() >= n2);
            assert!(n2 >= 0.0);
        }
    }

    #[test]
    fn origin_snaps_to_bracket_endpoints() {
        let sys = sys321();
        let p = cart_to_ellipsoidal(&sys, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(p.lambda(), sys.k());
        assert_eq!(p.mu(), sys.h());
        assert_eq!(p.nu(), 0.0);
        let (x, y, z) = ellipsoidal_to_cart(&sys, &p).unwrap();
        assert!(x.abs() < 1e-14 && y.abs() < 1e-14 && z.abs() < 1e-14);
    }

    #[test]
    fn axis_points_snap_deterministically() {
        let sys = sys321();

        // z-axis
        let p = cart_to_ellipsoidal(&sys, 0.0, 0.0, 1.5).unwrap();
        assert_relative_eq!(p.lambda(), (sys.k_sq() + 2.25).sqrt(), max_relative = 1e-14);
        assert_eq!(p.mu(), sys.h());
        assert_eq!(p.nu(), 0.0);
        let (x, y, z) = ellipsoidal_to_cart(&sys, &p).unwrap();
        assert!(x.abs() < 1e-14 && y.abs() < 1e-14);
        assert_relative_eq!(z, 1.5, max_relative = 1e-12);

        // y-axis outside the focal ellipse
        let p = cart_to_ellipsoidal(&sys, 0.0, 2.5, 0.0).unwrap();
        assert_relative_eq!(p.lambda(), (sys.h_sq() + 6.25).sqrt(), max_relative = 1e-14);
        assert_eq!(p.mu(), sys.k());
        let (x, y, z) = ellipsoidal_to_cart(&sys, &p).unwrap();
        assert!(x.abs() < 1e-14 && z.abs() < 1e-14);
        assert_relative_eq!(y, 2.5, max_relative = 1e-12);

        // x-axis, interior segment |x| < h
        let p = cart_to_ellipsoidal(&sys, 1.5, 0.0, 0.0).unwrap();
        assert_eq!(p.lambda(), sys.k());
        assert_eq!(p.mu(), sys.h());
        assert_relative_eq!(p.nu(), 1.5, max_relative = 1e-14);
        let (x, y, z) = ellipsoidal_to_cart(&sys, &p).unwrap();
        assert_relative_eq!(x, 1.5, max_relative = 1e-12);
        assert!(y.abs() < 1e-14 && z.abs() < 1e-14);
    }

    #[test]
    fn near_plane_points_keep_precision() {
        // Points just off a coordinate plane exercise the anchored Newton
        // refinement; plain subtraction would lose ~half the digits here.
        let sys = sys321();
        for &small in &[1e-5, 1e-6, 3e-7] {
            let (x, y, z) = (1.1, small, 0.7);
            let p = cart_to_ellipsoidal(&sys, x, y, z).unwrap();
            let (xr, yr, zr) = ellipsoidal_to_cart(&sys, &p).unwrap();
            assert_relative_eq!(xr, x, max_relative = 1e-10);
            assert_relative_eq!(yr, y, max_relative = 1e-8);
            assert_relative_eq!(zr, z, max_relative = 1e-10);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn roundtrip_is_identity_off_the_planes(
                x in prop::sample::select(vec![-1.0f64, 1.0]).prop_flat_map(|s| (1e-5f64..6.0).prop_map(move |v| s * v)),
                y in prop::sample::select(vec![-1.0f64, 1.0]).prop_flat_map(|s| (1e-5f64..6.0).prop_map(move |v| s * v)),
                z in prop::sample::select(vec![-1.0f64, 1.0]).prop_flat_map(|s| (1e-5f64..6.0).prop_map(move |v| s * v)),
            ) {
                let sys = EllipsoidalSystem::new(3.0, 2.0, 1.0).unwrap();
                let p = cart_to_ellipsoidal(&sys, x, y, z).unwrap();
                let (xr, yr, zr) = ellipsoidal_to_cart(&sys, &p).unwrap();
                let err = ((xr - x).powi(2) + (yr - y).powi(2) + (zr - z).powi(2)).sqrt()
                    / (x * x + y * y + z * z).sqrt();
                prop_assert!(err < 1e-10, "roundtrip error {err:e} at ({x}, {y}, {z})");

                // Root interleaving holds for every point.
                let (l2, m2, n2) = (
                    p.lambda() * p.lambda(),
                    p.mu() * p.mu(),
                    p.nu() * p.nu(),
                );
                prop_assert!(l2 >= sys.k_sq() && sys.k_sq() >= m2);
                prop_assert!(m2 >= sys.h_sq() && sys.h_sq() >= n2 && n2 >= 0.0);
            }
        }
    }
}
