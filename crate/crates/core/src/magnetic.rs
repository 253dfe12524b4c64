//! Uniform magnetic field on the disk, flux through the cell, automorphy
//! factors and the twisted Bloch transform.

use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};

use crate::bloch_hyperbolic::{GaugeFrame, Tiling, Transformer};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::hyperbolic::{Curvature, DirichletCell, FuchsianGroup, Mobius, Quadrature};
use crate::linalg::CMat;
use crate::packet::WavePacket;
use crate::scalar::Real;

/// Absolute tolerance for the line integrals.
pub const PATH_TOL: f64 = 1e-12;

/// `a = i·A(r)(x dy − y dx)` with `A = (k/2)·b/(1−r²)`, so that
/// `da = i·b·vol` and `a(0) = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugePotential<T: Real> {
    pub b: T,
    pub curvature: Curvature,
}

pub fn uniform_potential<T: Real>(b: T, curvature: Curvature) -> GaugePotential<T> {
    GaugePotential { b, curvature }
}

impl<T: Real> GaugePotential<T> {
    fn k(&self) -> T {
        match self.curvature {
            Curvature::MinusOne => T::lit(4.0),
            Curvature::MinusFour => T::one(),
        }
    }

    /// Radial coefficient `A(r)`.
    pub fn coefficient(&self, r2: T) -> T {
        self.k() / T::lit(2.0) * self.b / (T::one() - r2)
    }

    /// `(a₁, a₂)` with `a = i(a₁dx + a₂dy)`.
    pub fn form(&self, z: Complex<T>) -> (T, T) {
        let a = self.coefficient(z.norm_sqr());
        (-a * z.im, a * z.re)
    }

    /// `a_z(v)/i`.
    pub fn pair(&self, z: Complex<T>, v: Complex<T>) -> T {
        self.coefficient(z.norm_sqr()) * (z.conj() * v).im
    }

    /// `∂₁a₂ − ∂₂a₁ = 2A + rA'(r)`, analytically.
    pub fn curl(&self, z: Complex<T>) -> T {
        let r2 = z.norm_sqr();
        let w = T::one() - r2;
        let c = self.k() / T::lit(2.0) * self.b;
        T::lit(2.0) * c / w + T::lit(2.0) * c * r2 / (w * w)
    }

    /// `b·ρ(z)`, the density of `da/i` against `dx∧dy`.
    pub fn field_density(&self, z: Complex<T>) -> T {
        self.b * self.curvature.density(z)
    }
}

/// Romberg integration on `[a, b]`, bisecting when the table stalls.
pub fn romberg<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    romberg_rec(f, a, b, tol, 0)
}

fn romberg_rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    const LEVELS: usize = 12;
    let mut prev = vec![0.5 * (b - a) * (f(a) + f(b))];
    for k in 1..LEVELS {
        let n = 1usize << (k - 1);
        let h = (b - a) / n as f64;
        let mid: f64 = (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum();
        let mut row = vec![0.5 * prev[0] + 0.5 * h * mid];
        let mut p = 1.0;
        for j in 1..=k {
            p *= 4.0;
            let v = row[j - 1] + (row[j - 1] - prev[j - 1]) / (p - 1.0);
            row.push(v);
        }
        if k >= 4 && (row[k] - prev[k - 1]).abs() <= tol {
            return row[k];
        }
        prev = row;
    }
    if depth >= 20 {
        return prev[LEVELS - 1];
    }
    let m = 0.5 * (a + b);
    romberg_rec(f, a, m, 0.5 * tol, depth + 1) + romberg_rec(f, m, b, 0.5 * tol, depth + 1)
}

/// Geodesic from `p` to `q` as `s ↦ (z(s), z'(s))`, `s ∈ [0, 1]`.
fn geodesic(p: Complex64, q: Complex64) -> impl Fn(f64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let w = (q - p) / (one - p.conj() * q);
    let k = 1.0 - p.norm_sqr();
    move |s| {
        let u = w * s;
        let den = one + p.conj() * u;
        ((u + p) / den, w * k / (den * den))
    }
}

/// `(1/2πi)∮_{∂C} a`, integrating along the geodesic sides.
pub fn flux(a: &GaugePotential<f64>, cell: &DirichletCell) -> f64 {
    let v = &cell.vertices;
    let mut total = 0.0;
    for i in 0..v.len() {
        let path = geodesic(v[i], v[(i + 1) % v.len()]);
        total += romberg(
            &|s| {
                let (z, dz) = path(s);
                a.pair(z, dz)
            },
            0.0,
            1.0,
            PATH_TOL,
        );
    }
    total / (2.0 * std::f64::consts::PI)
}

/// Area-quadrature estimate of the flux, `b·Σw/2π`.
pub fn flux_by_area(a: &GaugePotential<f64>, quad: &Quadrature) -> f64 {
    a.b * quad.total_weight() / (2.0 * std::f64::consts::PI)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FluxReport {
    pub b: f64,
    pub flux: f64,
    pub nearest_int: i64,
    pub abs_err: f64,
}

pub fn flux_report(a: &GaugePotential<f64>, cell: &DirichletCell) -> FluxReport {
    let f = flux(a, cell);
    let k = f.round();
    FluxReport { b: a.b, flux: f, nearest_int: k as i64, abs_err: (f - k).abs() }
}

/// Integrality test used before building automorphy factors.
pub fn check_integral(f: f64) -> Result<i64> {
    let k = f.round();
    if (f - k).abs() <= 1e-6 * (1.0 + k.abs()) {
        Ok(k as i64)
    } else {
        Err(Error::NonIntegralFlux(f))
    }
}

/// `(γ*a − a)/i` along the chart segment `p → q`.
pub fn pullback_difference(a: &GaugePotential<f64>, m: &Mobius<f64>, p: Complex64, q: Complex64) -> f64 {
    let d = q - p;
    romberg(
        &|t| {
            let z = p + d * t;
            a.pair(m.apply_raw(z), m.derivative(z) * d) - a.pair(z, d)
        },
        0.0,
        1.0,
        PATH_TOL,
    )
}

/// Factors `u_γ` with `γ*a = a + u_γ⁻¹du_γ`, anchored by the generator
/// convention `u_s(x0) = 1` and extended to words by the cocycle rule.
#[derive(Clone, Debug)]
pub struct Automorphy<'a> {
    pub potential: GaugePotential<f64>,
    pub group: &'a FuchsianGroup,
    pub flux: f64,
}

impl<'a> Automorphy<'a> {
    /// Requires integral flux through `cell`.
    pub fn new(potential: GaugePotential<f64>, group: &'a FuchsianGroup, cell: &DirichletCell) -> Result<Self> {
        let f = flux(&potential, cell);
        check_integral(f)?;
        Ok(Automorphy { potential, group, flux: f })
    }

    /// No integrality check; the factors are then only a local construction
    /// and the cocycle rule may fail.
    pub fn unchecked(potential: GaugePotential<f64>, group: &'a FuchsianGroup) -> Self {
        Automorphy { potential, group, flux: f64::NAN }
    }

    fn phase(&self, m: &Mobius<f64>, x: Complex64) -> f64 {
        pullback_difference(&self.potential, m, self.group.base_point, x)
    }

    /// `u_γ(x0)` via `u_{sw}(x0) = u_s(w·x0)·u_w(x0)`.
    pub fn anchor(&self, gamma: &GroupElement) -> Complex64 {
        self.product(gamma, self.group.base_point)
    }

    /// `Π_j u_{s_j}(s_{j+1}⋯s_L·x)` over the reduced word.
    pub fn product(&self, gamma: &GroupElement, x: Complex64) -> Complex64 {
        if self.potential.b == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let mut z = x;
        let mut total = 0.0;
        for &l in gamma.letters().iter().rev() {
            let m = self.group.element(&GroupElement::generator(self.group.genus, l));
            total += self.phase(&m, z);
            z = m.apply_raw(z);
        }
        Complex64::from_polar(1.0, total)
    }

    /// `u_γ(x) = u_γ(x0)·exp(∫_{x0}^{x}(γ*a − a))` along the chart segment.
    pub fn eval(&self, gamma: &GroupElement, x: Complex64) -> Complex64 {
        if self.potential.b == 0.0 || gamma.is_identity() {
            return Complex64::new(1.0, 0.0);
        }
        self.anchor(gamma) * Complex64::from_polar(1.0, self.phase(&self.group.element(gamma), x))
    }

    /// Same as [`Automorphy::eval`] along the polyline `x0 → path… → x`.
    pub fn eval_along(&self, gamma: &GroupElement, path: &[Complex64], x: Complex64) -> Complex64 {
        let m = self.group.element(gamma);
        let mut pts = vec![self.group.base_point];
        pts.extend_from_slice(path);
        pts.push(x);
        let total: f64 = pts.windows(2).map(|w| pullback_difference(&self.potential, &m, w[0], w[1])).sum();
        self.anchor(gamma) * Complex64::from_polar(1.0, total)
    }
}

pub fn automorphy(a: &GaugePotential<f64>, tiling: &Tiling, gamma: &GroupElement, x: Complex64) -> Result<Complex64> {
    Ok(Automorphy::new(*a, &tiling.group, &tiling.cell)?.eval(gamma, x))
}

/// `Σ_γ u_γ(y)ψ(γy)ρ(γ)` with factors from `u`.
pub fn twisted_transform_with(psi: &WavePacket<f64>, f: &GaugeFrame, u: &Automorphy, y: Complex64) -> Result<CMat> {
    let t = Transformer::new(psi, f)?;
    if !f.tiling.in_closed_cell(y) {
        return Err(Error::NotInCell);
    }
    let n = f.rep.rank();
    let mut out = CMat::zeros(n, n);
    for g in t.support() {
        let v = psi.value(f.tiling.group.element(g).apply_raw(y));
        if v != Complex64::new(0.0, 0.0) {
            out += f.rep.evaluate(g) * (u.eval(g, y) * v);
        }
    }
    Ok(out)
}

/// Twisted transform; `b = 0` reproduces the untwisted sum bit for bit.
pub fn twisted_transform(psi: &WavePacket<f64>, f: &GaugeFrame, a: &GaugePotential<f64>, y: Complex64) -> Result<CMat> {
    if a.b == 0.0 {
        return Transformer::new(psi, f)?.at(y);
    }
    let u = Automorphy::new(*a, &f.tiling.group, &f.tiling.cell)?;
    twisted_transform_with(psi, f, &u, y)
}
