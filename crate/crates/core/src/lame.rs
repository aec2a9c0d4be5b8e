//! Interior and exterior Lamé functions.
//!
//! Lamé's equation on the coordinate line,
//!
//! ```text
//!   (s²−h²)(s²−k²) E″ + s(2s²−h²−k²) E′ + (p − q s²) E = 0,   q = n(n+1),
//! ```
//!
//! has 2n+1 polynomial-type solutions of order n, split into four classes by
//! their prefactor: K (none), L (√|s²−h²|), M (√|s²−k²|), N (both). Writing
//! the remaining factor as s^σ · Σ_j b_j (1 − s²/h²)^j and matching powers of
//! (1 − s²/h²) turns each class into a small tridiagonal eigenproblem whose
//! eigenvalue is the separation constant and whose eigenvector holds the
//! expansion coefficients. The recurrences below were derived exactly that
//! way; the test suite re-checks every solved harmonic against the ODE with
//! independently expanded polynomials, so a wrong entry cannot survive.
//!
//! Exterior functions follow as F_n^p(λ) = (2n+1)·E_n^p(λ)·I_n^p(λ) with
//!
//! ```text
//!   I_n^p(λ) = ∫_λ^∞ ds / (E_n^p(s)² √(s²−k²) √(s²−h²)),
//! ```
//!
//! computed here by substituting s = λ/u and integrating adaptively over
//! (0, 1]; the substituted integrand vanishes like u^(2n) at u = 0, which
//! the tanh-sinh rule absorbs without special casing.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use crate::ellipsoid::{pos_sign, EllipsoidalPoint, EllipsoidalSystem};
use crate::error::{Error, Result};
use crate::quad::{integrate_adaptive, IntegrationResult, TransformKind};

/// Highest supported harmonic order.
pub const MAX_ORDER: usize = 50;

/// Quadrature options threaded through exterior-function evaluation.
#[derive(Debug, Clone, Copy)]
pub struct QuadOpts {
    pub transform: TransformKind,
    pub tolerance: f64,
    pub max_level: u32,
    pub digits: u32,
}

impl Default for QuadOpts {
    fn default() -> Self {
        Self {
            transform: TransformKind::TanhSinh,
            tolerance: 1e-13,
            max_level: 12,
            digits: 15,
        }
    }
}

/// A value that consumed quadrature work.
#[derive(Debug, Clone, Copy)]
pub struct QuadValue {
    pub value: f64,
    pub evaluations: usize,
}

/// The four solution classes of Lamé's equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LameClass {
    K,
    L,
    M,
    N,
}

impl LameClass {
    pub const ALL: [LameClass; 4] = [LameClass::K, LameClass::L, LameClass::M, LameClass::N];

    pub fn label(self) -> &'static str {
        match self {
            LameClass::K => "K",
            LameClass::L => "L",
            LameClass::M => "M",
            LameClass::N => "N",
        }
    }

    /// Number of order-n solutions in this class; the four sum to 2n+1.
    pub fn multiplicity(self, n: usize) -> usize {
        match self {
            LameClass::K => n / 2 + 1,
            LameClass::L | LameClass::M => n.div_ceil(2),
            LameClass::N => n / 2,
        }
    }

    /// Whether the prefactor carries √|s²−h²| and/or √|s²−k²|.
    pub fn factors(self) -> (bool, bool) {
        match self {
            LameClass::K => (false, false),
            LameClass::L => (true, false),
            LameClass::M => (false, true),
            LameClass::N => (true, true),
        }
    }

    /// Power of s in front of the series: degree bookkeeping fixes it to
    /// n mod 2 for K and N, (n+1) mod 2 for L and M.
    fn sigma(self, n: usize) -> u32 {
        match self {
            LameClass::K | LameClass::N => (n % 2) as u32,
            LameClass::L | LameClass::M => ((n + 1) % 2) as u32,
        }
    }
}

/// Real tridiagonal matrix stored by bands; `lower[i]` couples row i+1 to
/// column i, `upper[i]` row i to column i+1.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// y = T·x.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.size();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.lower[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.upper[i] * x[i + 1];
            }
            y[i] = v;
        }
        y
    }
}

/// Coefficients of the transformed recurrence for one class.
struct ClassParams {
    beta2: f64,
    beta0: f64,
    e0: f64,
    c2: f64,
    sigma: u32,
    size: usize,
}

fn class_params(class: LameClass, n: usize, h2: f64, k2: f64) -> ClassParams {
    let q = (n * (n + 1)) as f64;
    let (beta2, beta0, e0, c2) = match class {
        LameClass::K => (2.0, -(h2 + k2), 0.0, -q),
        LameClass::L => (4.0, -(h2 + 3.0 * k2), -k2, 2.0 - q),
        LameClass::M => (4.0, -(3.0 * h2 + k2), -h2, 2.0 - q),
        LameClass::N => (6.0, -3.0 * (h2 + k2), -(h2 + k2), 6.0 - q),
    };
    ClassParams {
        beta2,
        beta0,
        e0,
        c2,
        sigma: class.sigma(n),
        size: class.multiplicity(n),
    }
}

/// Builds the tridiagonal matrix T with T·b = sep_const·b for the given
/// class and order. Row m is the coefficient of (1 − s²/h²)^m after
/// substituting the class ansatz into Lamé's equation.
pub fn class_matrix(sys: &EllipsoidalSystem, n: usize, class: LameClass) -> Result<Tridiagonal> {
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge(n, MAX_ORDER));
    }
    let p = class_params(class, n, sys.h_sq(), sys.k_sq());
    if p.size == 0 {
        return Err(Error::EmptyClass {
            class: class.label(),
            n,
        });
    }
    let (h2, k2) = (sys.h_sq(), sys.k_sq());
    let band = k2 - h2;

    let mut diag = Vec::with_capacity(p.size);
    let mut lower = Vec::with_capacity(p.size.saturating_sub(1));
    let mut upper = Vec::with_capacity(p.size.saturating_sub(1));

    for m in 0..p.size {
        let mf = m as f64;
        // Everything below is the negated recurrence coefficient, so that
        // T b = sep_const · b directly.
        let d = if p.sigma == 0 {
            4.0 * (2.0 * h2 - k2) * mf * (mf - 1.0)
                + 2.0 * (2.0 * p.beta2 * h2 + p.beta0 - band) * mf
                + p.e0
                + p.c2 * h2
        } else {
            4.0 * (2.0 * h2 - k2) * mf * (mf - 1.0)
                + 2.0 * (2.0 * p.beta2 * h2 + p.beta0 - 3.0 * band) * mf
                + p.e0
                + p.beta0
                + (p.beta2 + p.c2) * h2
        };
        diag.push(-d);

        if m + 1 < p.size {
            let sup = (mf + 1.0) * (4.0 * band * mf - 2.0 * (p.beta2 * h2 + p.beta0));
            upper.push(-sup);
        }
        if m >= 1 {
            let sub = if p.sigma == 0 {
                -h2 * (4.0 * (mf - 1.0) * (mf - 2.0) + 2.0 * (1.0 + p.beta2) * (mf - 1.0) + p.c2)
            } else {
                -h2 * (4.0 * (mf - 1.0) * (mf - 2.0)
                    + 2.0 * (3.0 + p.beta2) * (mf - 1.0)
                    + p.beta2
                    + p.c2)
            };
            lower.push(-sub);
        }
    }

    Ok(Tridiagonal { diag, lower, upper })
}

/// One interior Lamé function E_n^p.
#[derive(Debug, Clone)]
pub struct LameHarmonic {
    n: usize,
    p: usize,
    class: LameClass,
    sep_const: f64,
    coeffs: Vec<f64>,
    sigma: u32,
    h_sq: f64,
    k_sq: f64,
}

impl LameHarmonic {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Index p within the order, 0-based over [0, 2n+1).
    pub fn index(&self) -> usize {
        self.p
    }

    pub fn class(&self) -> LameClass {
        self.class
    }

    pub fn sep_const(&self) -> f64 {
        self.sep_const
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Returns a copy with every coefficient scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for b in &mut out.coeffs {
            *b *= factor;
        }
        out
    }

    /// (has √|s²−h²| factor, has √|s²−k²| factor).
    pub fn class_factors(&self) -> (bool, bool) {
        self.class.factors()
    }

    fn horner(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for &b in self.coeffs.iter().rev() {
            acc = acc * t + b;
        }
        acc
    }

    fn horner_deriv(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (j, &b) in self.coeffs.iter().enumerate().rev().take_while(|(j, _)| *j >= 1) {
            acc = acc * t + j as f64 * b;
        }
        acc
    }

    /// The series part s^σ · Σ b_j (1 − s²/h²)^j without class factors.
    pub fn eval_series(&self, s: f64) -> f64 {
        let t = 1.0 - s * s / self.h_sq;
        let poly = self.horner(t);
        if self.sigma == 1 {
            s * poly
        } else {
            poly
        }
    }

    fn sign_h(&self, s: f64) -> f64 {
        let s2 = s * s;
        if s2 > self.k_sq || s2 < self.h_sq {
            pos_sign(s)
        } else {
            1.0
        }
    }

    fn sign_k(&self, s: f64) -> f64 {
        if s * s > self.h_sq {
            pos_sign(s)
        } else {
            1.0
        }
    }

    /// E_n^p(s), total on ℝ via the absolute-value branch of the class
    /// factors. The factor signs are keyed to the bracket the argument lies
    /// in so that triple products over (λ, μ, ν) come out with the Cartesian
    /// parity of the corresponding solid harmonic.
    pub fn eval(&self, s: f64) -> f64 {
        let mut v = self.eval_series(s);
        let (has_h, has_k) = self.class.factors();
        if has_h {
            v *= self.sign_h(s) * (s * s - self.h_sq).abs().sqrt();
        }
        if has_k {
            v *= self.sign_k(s) * (s * s - self.k_sq).abs().sqrt();
        }
        v
    }

    /// dE/ds, analytic. Errors exactly at |s| = h or |s| = k when the
    /// corresponding class factor is present (the derivative is unbounded).
    pub fn eval_deriv(&self, s: f64) -> Result<f64> {
        let s2 = s * s;
        let (has_h, has_k) = self.class.factors();
        if has_h && (s2 == self.h_sq || s.abs() == self.h_sq.sqrt()) {
            return Err(Error::DerivativeAtBranchPoint(self.h_sq.sqrt()));
        }
        if has_k && (s2 == self.k_sq || s.abs() == self.k_sq.sqrt()) {
            return Err(Error::DerivativeAtBranchPoint(self.k_sq.sqrt()));
        }

        let t = 1.0 - s2 / self.h_sq;
        let poly = self.horner(t);
        let poly_d = self.horner_deriv(t);
        let spow = if self.sigma == 1 { s } else { 1.0 };

        let mut log_factor = 0.0;
        if has_h {
            log_factor += s / (s2 - self.h_sq);
        }
        if has_k {
            log_factor += s / (s2 - self.k_sq);
        }

        let mut inner = spow * log_factor * poly - 2.0 * spow * s / self.h_sq * poly_d;
        if self.sigma == 1 {
            inner += poly;
        }

        let mut prefactor = 1.0;
        if has_h {
            prefactor *= self.sign_h(s) * (s2 - self.h_sq).abs().sqrt();
        }
        if has_k {
            prefactor *= self.sign_k(s) * (s2 - self.k_sq).abs().sqrt();
        }
        Ok(prefactor * inner)
    }

    /// Copy with coefficients scaled to unit max-norm, plus the scale taken
    /// out. Keeps quadrature tolerances meaningful independent of the
    /// caller's normalization.
    pub(crate) fn unit_normalized(&self) -> (LameHarmonic, f64) {
        let scale = self
            .coeffs
            .iter()
            .fold(0.0f64, |m, b| m.max(b.abs()))
            .max(f64::MIN_POSITIVE);
        (self.scaled(1.0 / scale), scale)
    }

    /// I_n^p(λ) = ∫_λ^∞ ds / (E² √(s²−k²) √(s²−h²)) for |λ| > k.
    ///
    /// Substituting s = |λ|/u maps the tail onto (0, 1].
    pub fn exterior_integral(&self, lambda: f64, opts: &QuadOpts) -> Result<IntegrationResult> {
        let lam = lambda.abs();
        let k2 = self.k_sq;
        if !(lam * lam > k2) {
            return Err(Error::NotExterior {
                lambda: lam,
                k: k2.sqrt(),
            });
        }
        let (unit, scale) = self.unit_normalized();
        let h2 = self.h_sq;
        let raw = move |u: f64| {
            let s = lam / u;
            let e = unit.eval(s);
            (lam / (u * u)) / (e * e * (s * s - k2).sqrt() * (s * s - h2).sqrt())
        };
        // The substituted integrand peaks at u = 1 and decays like u^(2n);
        // its magnitude shrinks like λ^−(2n+1), so the integrand is scaled
        // to O(1) to make the tolerance act relatively.
        let peak = raw(1.0);
        let mut res = integrate_adaptive(
            |u, _dlo, _dhi| raw(u) / peak,
            0.0,
            1.0,
            opts.tolerance,
            opts.max_level,
            opts.transform,
            opts.digits,
        )?;
        res.value *= peak / (scale * scale);
        res.error_estimate *= peak.abs() / (scale * scale);
        Ok(res)
    }

    /// F_n^p(λ) = (2n+1) · E_n^p(λ) · I_n^p(|λ|); decays to 0 at infinity.
    pub fn exterior_value(&self, lambda: f64, opts: &QuadOpts) -> Result<QuadValue> {
        let integral = self.exterior_integral(lambda, opts)?;
        Ok(QuadValue {
            value: (2 * self.n + 1) as f64 * self.eval(lambda) * integral.value,
            evaluations: integral.evaluations,
        })
    }

    /// dF/dλ = (2n+1)(E′·I + E·I′) with I′(|λ|) = −1/(E² √(λ²−k²) √(λ²−h²))
    /// straight from the fundamental theorem of calculus. I is even in λ, so
    /// on the negative branch its derivative picks up sign(λ).
    pub fn exterior_deriv(&self, lambda: f64, opts: &QuadOpts) -> Result<QuadValue> {
        let lam = lambda.abs();
        if !(lam * lam > self.k_sq) {
            return Err(Error::NotExterior {
                lambda: lam,
                k: self.k_sq.sqrt(),
            });
        }
        let integral = self.exterior_integral(lambda, opts)?;
        let e = self.eval(lambda);
        let e_d = self.eval_deriv(lambda)?;
        let i_d = -pos_sign(lambda)
            / (e * e * (lambda * lambda - self.k_sq).sqrt() * (lambda * lambda - self.h_sq).sqrt());
        Ok(QuadValue {
            value: (2 * self.n + 1) as f64 * (e_d * integral.value + e * i_d),
            evaluations: integral.evaluations,
        })
    }

    /// Interior solid harmonic 𝔼_n^p(r) = E(λ)·E(μ)·E(ν).
    pub fn solid_interior(&self, point: &EllipsoidalPoint) -> f64 {
        self.eval(point.lambda()) * self.eval(point.mu()) * self.eval(point.nu())
    }

    /// Exterior solid harmonic 𝔽_n^p(r) = F(λ)·E(μ)·E(ν), |λ| > k.
    pub fn solid_exterior(&self, point: &EllipsoidalPoint, opts: &QuadOpts) -> Result<QuadValue> {
        let f = self.exterior_value(point.lambda(), opts)?;
        Ok(QuadValue {
            value: f.value * self.eval(point.mu()) * self.eval(point.nu()),
            evaluations: f.evaluations,
        })
    }
}

/// All 2n+1 interior harmonics of one order, sorted by class (K, L, M, N)
/// and ascending separation constant within each class.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    sys: EllipsoidalSystem,
    n: usize,
    harmonics: Vec<LameHarmonic>,
}

impl HarmonicTable {
    pub fn sys(&self) -> &EllipsoidalSystem {
        &self.sys
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn harmonics(&self) -> &[LameHarmonic] {
        &self.harmonics
    }

    pub fn len(&self) -> usize {
        self.harmonics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.harmonics.is_empty()
    }

    pub fn get(&self, p: usize) -> &LameHarmonic {
        &self.harmonics[p]
    }
}

/// Solves one class eigenproblem and returns (sep_const, coeffs) pairs.
///
/// The matrix is diagonally similar to a symmetric tridiagonal one because
/// opposite off-diagonal entries share their sign; the scaling that makes it
/// symmetric is applied, the symmetric problem solved, and the eigenvectors
/// scaled back. Coefficients are then normalized so the highest power of s
/// carries coefficient 1 (b_top = (−h²)^top).
fn solve_class(
    sys: &EllipsoidalSystem,
    n: usize,
    class: LameClass,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let tri = class_matrix(sys, n, class)?;
    let size = tri.size();
    if size == 1 {
        let top = (-sys.h_sq()).powi(0);
        return Ok(vec![(tri.diag[0], vec![top])]);
    }

    let mut scale = vec![1.0f64; size];
    let mut sym_off = Vec::with_capacity(size - 1);
    for m in 0..size - 1 {
        let product = tri.lower[m] * tri.upper[m];
        if product <= 0.0 {
            return Err(Error::EigenFailure {
                class: class.label(),
                n,
                reason: format!("off-diagonal product {product} not positive at row {m}"),
            });
        }
        scale[m + 1] = scale[m] * (tri.lower[m] / tri.upper[m]).sqrt();
        sym_off.push(tri.upper[m].signum() * product.sqrt());
    }

    let (values, vectors) =
        crate::tridiag::symmetric_tridiagonal_eigen(&tri.diag, &sym_off).map_err(|reason| {
            Error::EigenFailure {
                class: class.label(),
                n,
                reason,
            }
        })?;

    let top_target = (-sys.h_sq()).powi((size - 1) as i32);
    let mut out = Vec::with_capacity(size);
    for (value, v) in values.into_iter().zip(vectors) {
        let mut b: Vec<f64> = v.iter().zip(&scale).map(|(vi, di)| vi * di).collect();
        let top = b[size - 1];
        if top == 0.0 {
            return Err(Error::EigenFailure {
                class: class.label(),
                n,
                reason: "eigenvector has vanishing top coefficient".into(),
            });
        }
        let factor = top_target / top;
        for bi in &mut b {
            *bi *= factor;
        }
        out.push((value, b));
    }
    Ok(out)
}

fn solve_order_uncached(sys: &EllipsoidalSystem, n: usize) -> Result<HarmonicTable> {
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge(n, MAX_ORDER));
    }
    let mut harmonics = Vec::with_capacity(2 * n + 1);
    for class in LameClass::ALL {
        if class.multiplicity(n) == 0 {
            continue;
        }
        let mut pairs = solve_class(sys, n, class)?;
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for (sep_const, coeffs) in pairs {
            harmonics.push(LameHarmonic {
                n,
                p: 0,
                class,
                sep_const,
                coeffs,
                sigma: class.sigma(n),
                h_sq: sys.h_sq(),
                k_sq: sys.k_sq(),
            });
        }
    }
    debug_assert_eq!(harmonics.len(), 2 * n + 1);
    for (p, harm) in harmonics.iter_mut().enumerate() {
        harm.p = p;
    }
    Ok(HarmonicTable {
        sys: *sys,
        n,
        harmonics,
    })
}

type TableKey = (u64, u64, u64, usize);

fn table_cache() -> &'static Mutex<HashMap<TableKey, Arc<HarmonicTable>>> {
    static CACHE: LazyLock<Mutex<HashMap<TableKey, Arc<HarmonicTable>>>> =
        LazyLock::new(|| Mutex::new(HashMap::new()));
    &CACHE
}

/// Solves (or fetches from the process-wide cache) all 2n+1 harmonics of
/// order n on the given system.
pub fn solve_order(sys: &EllipsoidalSystem, n: usize) -> Result<Arc<HarmonicTable>> {
    let key = (
        sys.a().to_bits(),
        sys.b().to_bits(),
        sys.c().to_bits(),
        n,
    );
    if let Some(table) = table_cache().lock().unwrap().get(&key) {
        return Ok(table.clone());
    }
    let table = Arc::new(solve_order_uncached(sys, n)?);
    table_cache().lock().unwrap().insert(key, table.clone());
    Ok(table)
}
