//! Compactly supported wave packets on the disk built from the C² bump
//! `(1 − t²)³`, `t = d(z, center)/radius`, with analytic chart derivatives.

use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{distance_raw, Curvature, DiskPoint, Mobius};
use crate::scalar::Real;

/// Taylor coefficients of `arccosh(1+s)²` in `s`, from `s¹` on.
const ACOSH_SQ_SERIES: [f64; 11] = [
    2.0,
    -1.0 / 3.0,
    4.0 / 45.0,
    -1.0 / 35.0,
    16.0 / 1575.0,
    -8.0 / 2079.0,
    32.0 / 21021.0,
    -4.0 / 6435.0,
    256.0 / 984555.0,
    -128.0 / 1154725.0,
    512.0 / 10669659.0,
];

const SERIES_SWITCH: f64 = 0.05;

/// `F(u) = arccosh(u)²` and its first two derivatives.
fn acosh_sq<T: Real>(u: T) -> (T, T, T) {
    let s = u - T::one();
    if s < T::lit(SERIES_SWITCH) {
        let (mut f, mut f1, mut f2) = (T::zero(), T::zero(), T::zero());
        for (i, &c) in ACOSH_SQ_SERIES.iter().enumerate().rev() {
            let k = T::lit((i + 1) as f64);
            let c = T::lit(c);
            f = f * s + c;
            f1 = f1 * s + c * k;
            f2 = f2 * s + c * k * (k - T::one());
        }
        // Horner left f = Σ c_k s^{k−1}, f1 = Σ k c_k s^{k−1}, f2 = Σ k(k−1) c_k s^{k−1}
        let f = f * s;
        let f2 = if s == T::zero() { T::lit(2.0) * T::lit(ACOSH_SQ_SERIES[1]) } else { f2 / s };
        return (f, f1, f2);
    }
    let d = u.acosh();
    let w = u * u - T::one();
    let f1 = T::lit(2.0) * d / w.sqrt();
    (d * d, f1, (T::lit(2.0) - u * f1) / w)
}

/// Value, chart gradient and chart Hessian at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T: Real> {
    pub value: Complex<T>,
    pub grad: [Complex<T>; 2],
    pub hess: [[Complex<T>; 2]; 2],
}

impl<T: Real> Jet<T> {
    fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Jet { value: z, grad: [z; 2], hess: [[z; 2]; 2] }
    }

    /// Directional derivative along the chart vector `v`.
    pub fn along(&self, v: Complex<T>) -> Complex<T> {
        self.grad[0] * v.re + self.grad[1] * v.im
    }

    pub fn chart_laplacian(&self) -> Complex<T> {
        self.hess[0][0] + self.hess[1][1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketTerm<T: Real> {
    pub center: Complex<T>,
    pub coefficient: Complex<T>,
    pub radius: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WavePacket<T: Real> {
    pub terms: Vec<PacketTerm<T>>,
    pub curvature: Curvature,
}

impl<T: Real> WavePacket<T> {
    pub fn new(terms: Vec<PacketTerm<T>>, curvature: Curvature) -> Result<Self> {
        for t in &terms {
            DiskPoint::new(t.center)?;
            if !(t.radius > T::zero()) || !t.radius.is_finite() {
                return Err(Error::InvalidArgument(format!("packet radius must be positive, got {}", t.radius)));
            }
        }
        Ok(WavePacket { terms, curvature })
    }

    pub fn single(center: Complex<T>, coefficient: Complex<T>, radius: T, curvature: Curvature) -> Result<Self> {
        Self::new(vec![PacketTerm { center, coefficient, radius }], curvature)
    }

    pub fn zero(curvature: Curvature) -> Self {
        WavePacket { terms: Vec::new(), curvature }
    }

    /// `max_k d(0, c_k) + r_k`.
    pub fn support_radius(&self) -> T {
        let o = Complex::new(T::zero(), T::zero());
        self.terms.iter().map(|t| distance_raw(o, t.center, self.curvature) + t.radius).fold(T::zero(), T::max)
    }

    /// `ψ ∘ m⁻¹`: every center moved by `m`.
    pub fn translated(&self, m: &Mobius<T>) -> Self {
        let terms = self.terms.iter().map(|t| PacketTerm { center: m.apply_raw(t.center), ..*t }).collect();
        WavePacket { terms, curvature: self.curvature }
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        let terms = self.terms.iter().map(|t| PacketTerm { coefficient: t.coefficient * c, ..*t }).collect();
        WavePacket { terms, curvature: self.curvature }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        WavePacket { terms, curvature: self.curvature }
    }

    fn scale2(&self) -> T {
        let s = self.curvature.length_scale::<T>();
        s * s
    }

    /// `t² = (d/r)²` for one term.
    pub fn tau(&self, term: &PacketTerm<T>, z: Complex<T>) -> T {
        let d = distance_raw(z, term.center, self.curvature);
        (d / term.radius).powi(2)
    }

    pub fn value(&self, z: Complex<T>) -> Complex<T> {
        let mut out = Complex::new(T::zero(), T::zero());
        for t in &self.terms {
            let tau = self.tau(t, z);
            if tau < T::one() {
                out = out + t.coefficient * (T::one() - tau).powi(3);
            }
        }
        out
    }

    pub fn jet(&self, z: Complex<T>) -> Jet<T> {
        let mut out = Jet::zero();
        let two = T::lit(2.0);
        for t in &self.terms {
            let c = t.center;
            let (dx, dy) = (z.re - c.re, z.im - c.im);
            let a = dx * dx + dy * dy;
            let b = T::one() - z.norm_sqr();
            let k = two / (T::one() - c.norm_sqr());
            let u = T::one() + k * a / b;
            let (f, f1, f2) = acosh_sq(u);
            let r2 = t.radius * t.radius;
            let kap = self.scale2() / r2;
            let tau = kap * f;
            if tau >= T::one() {
                continue;
            }
            let ga = [two * dx, two * dy];
            let gb = [-two * z.re, -two * z.im];
            let mut gu = [T::zero(); 2];
            let mut hu = [[T::zero(); 2]; 2];
            for i in 0..2 {
                gu[i] = k * (ga[i] / b - a * gb[i] / (b * b));
                for j in 0..2 {
                    let delta = if i == j { T::one() } else { T::zero() };
                    let hq = two * delta / b - (ga[i] * gb[j] + ga[j] * gb[i]) / (b * b)
                        + a * two * delta / (b * b)
                        + two * a * gb[i] * gb[j] / (b * b * b);
                    hu[i][j] = k * hq;
                }
            }
            let om = T::one() - tau;
            let p0 = om * om * om;
            let p1 = -T::lit(3.0) * om * om;
            let p2 = T::lit(6.0) * om;
            let gt = [kap * f1 * gu[0], kap * f1 * gu[1]];
            out.value = out.value + t.coefficient * p0;
            for i in 0..2 {
                out.grad[i] = out.grad[i] + t.coefficient * (p1 * gt[i]);
                for j in 0..2 {
                    let ht = kap * (f2 * gu[i] * gu[j] + f1 * hu[i][j]);
                    out.hess[i][j] = out.hess[i][j] + t.coefficient * (p2 * gt[i] * gt[j] + p1 * ht);
                }
            }
        }
        out
    }
}

/// `−s(1−|z|²)²(∂₁²+∂₂²)ψ` with `s` fixed by the curvature convention.
pub fn laplacian<T: Real>(psi: &WavePacket<T>, z: Complex<T>) -> Complex<T> {
    chart_laplacian_to_metric(psi.jet(z).chart_laplacian(), z, psi.curvature)
}

/// JSON form: `{"curvature": -1, "terms": [{"center": [re,im], "coefficient": [re,im], "radius": r}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PacketFile {
    pub curvature: i32,
    pub terms: Vec<PacketTermRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PacketTermRecord {
    pub center: [f64; 2],
    pub coefficient: [f64; 2],
    pub radius: f64,
}

impl WavePacket<f64> {
    pub fn to_file(&self) -> PacketFile {
        PacketFile {
            curvature: self.curvature.value(),
            terms: self
                .terms
                .iter()
                .map(|t| PacketTermRecord {
                    center: [t.center.re, t.center.im],
                    coefficient: [t.coefficient.re, t.coefficient.im],
                    radius: t.radius,
                })
                .collect(),
        }
    }

    pub fn from_file(f: &PacketFile) -> Result<Self> {
        let terms = f
            .terms
            .iter()
            .map(|t| PacketTerm {
                center: Complex64::new(t.center[0], t.center[1]),
                coefficient: Complex64::new(t.coefficient[0], t.coefficient[1]),
                radius: t.radius,
            })
            .collect();
        Self::new(terms, Curvature::from_value(f.curvature)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(s)?)
    }
}

/// Converts a flat chart Laplacian at `z` into the hyperbolic one.
pub fn chart_laplacian_to_metric<T: Real>(flat: Complex<T>, z: Complex<T>, curvature: Curvature) -> Complex<T> {
    let w = T::one() - z.norm_sqr();
    flat * (-curvature.laplacian_scale::<T>() * w * w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn series_matches_closed_form_at_switch() {
        let below = acosh_sq(1.0 + SERIES_SWITCH * (1.0 - 1e-12));
        let above = acosh_sq(1.0 + SERIES_SWITCH * (1.0 + 1e-12));
        assert!((below.0 - above.0).abs() < 1e-12);
        assert!((below.1 - above.1).abs() < 1e-11);
        assert!((below.2 - above.2).abs() < 1e-9);
        let (f, f1, f2) = acosh_sq(1.0f64);
        assert_eq!((f, f1), (0.0, 2.0));
        assert!((f2 + 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn jet_matches_finite_differences() {
        let psi = WavePacket::new(
            vec![
                PacketTerm { center: c(0.1, -0.2), coefficient: c(1.0, 0.5), radius: 1.2 },
                PacketTerm { center: c(-0.3, 0.25), coefficient: c(-0.7, 0.0), radius: 0.8 },
            ],
            Curvature::MinusOne,
        )
        .unwrap();
        let z = c(0.05, 0.02);
        let j = psi.jet(z);
        assert!((j.value - psi.value(z)).norm() < 1e-14);
        let h = 1e-5;
        let e = [c(h, 0.0), c(0.0, h)];
        for i in 0..2 {
            let fd = (psi.value(z + e[i]) - psi.value(z - e[i])) / (2.0 * h);
            assert!((fd - j.grad[i]).norm() < 1e-8, "grad {i}");
            for k in 0..2 {
                let gp = psi.jet(z + e[k]).grad[i];
                let gm = psi.jet(z - e[k]).grad[i];
                assert!(((gp - gm) / (2.0 * h) - j.hess[i][k]).norm() < 1e-7, "hess {i}{k}");
            }
        }
    }

    #[test]
    fn jet_at_center_uses_series() {
        let psi = WavePacket::single(c(0.2, 0.1), c(1.0, 0.0), 1.0, Curvature::MinusFour).unwrap();
        let j = psi.jet(c(0.2, 0.1));
        assert_eq!(j.value, c(1.0, 0.0));
        assert!(j.grad[0].norm() < 1e-15 && j.grad[1].norm() < 1e-15);
        assert!(j.hess[0][0].re < 0.0);
    }

    #[test]
    fn laplacian_conventions() {
        // |z|² has flat Laplacian 4 everywhere
        let flat = c(4.0, 0.0);
        let o = c(0.0, 0.0);
        assert_eq!(chart_laplacian_to_metric(flat, o, Curvature::MinusFour), c(-4.0, 0.0));
        assert_eq!(chart_laplacian_to_metric(flat, o, Curvature::MinusOne), c(-1.0, 0.0));
        assert_eq!(laplacian(&WavePacket::zero(Curvature::MinusOne), c(0.3, 0.1)), o);
    }

    #[test]
    fn translation_is_composition() {
        let psi = WavePacket::single(c(0.1, 0.1), c(1.0, 0.0), 0.9, Curvature::MinusOne).unwrap();
        let m = Mobius::rotation(0.4).compose(&Mobius::translation(0.7));
        let moved = psi.translated(&m);
        let z = c(0.3, 0.35);
        assert!((moved.value(z) - psi.value(m.inverse().apply_raw(z))).norm() < 1e-13);
        let p32: WavePacket<f32> =
            WavePacket::single(Complex::new(0.1, 0.1), Complex::new(1.0, 0.0), 0.9, Curvature::MinusOne).unwrap();
        assert!((p32.value(Complex::new(0.15, 0.1)).re as f64 - psi.value(c(0.15, 0.1)).re).abs() < 1e-5);
    }
}
