//! Bloch transform of wave packets on the disk in the piecewise-constant
//! gauge `U(x) = ρ(γ)` for `x ∈ γC`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch_abstract::{ensemble_mean, McEstimate};
use crate::error::{Error, Result};
use crate::group::{GroupElement, SurfaceGroup};
use crate::hyperbolic::{DirichletCell, FuchsianGroup, Mobius, Quadrature};
use crate::linalg::{frobenius, CMat};
use crate::packet::{chart_laplacian_to_metric, WavePacket};
use crate::rep_variety::{RepEnsemble, UnitaryRep};

/// Closed-cell membership slack, relative to the hyperboloid height.
const CELL_TOL: f64 = 1e-9;

/// Orbit data for `ball(cutoff)`: the maps `γ` and the points `γx0`.
#[derive(Clone, Debug)]
pub struct Tiling {
    pub group: FuchsianGroup,
    pub cell: DirichletCell,
    pub cutoff: usize,
    elements: Vec<GroupElement>,
    maps: Vec<Mobius<f64>>,
    orbit: Vec<Complex64>,
}

impl Tiling {
    pub fn new(group: FuchsianGroup, cell: DirichletCell, cutoff: usize) -> Result<Self> {
        if cell.faces.iter().any(|f| f.word.len() != 1) {
            // the shell test below relies on faces being generators
            return Err(Error::InvalidArgument("cell faces must be paired by generators".into()));
        }
        let elements = SurfaceGroup::new(group.genus)?.ball(cutoff)?;
        let maps: Vec<Mobius<f64>> = elements.par_iter().map(|g| group.element(g)).collect();
        let orbit = maps.iter().map(|m| m.apply_raw(group.base_point)).collect();
        Ok(Tiling { group, cell, cutoff, elements, maps, orbit })
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn map(&self, i: usize) -> &Mobius<f64> {
        &self.maps[i]
    }

    /// Indices `γ` whose tile can meet the support. Fails when the support
    /// reaches the outermost shell of the ball.
    pub fn support(&self, psi: &WavePacket<f64>) -> Result<Vec<usize>> {
        let rc = self.cell.circumradius;
        for t in &psi.terms {
            let (g, _) = self.cell.unfold(t.center, self.cutoff)?;
            if g.len() >= self.cutoff {
                return Err(Error::SupportExceedsCutoff(self.cutoff));
            }
        }
        let idx: Vec<usize> = (0..self.elements.len())
            .filter(|&i| psi.terms.iter().any(|t| self.group.distance(self.orbit[i], t.center) < t.radius + rc))
            .collect();
        if idx.iter().any(|&i| self.elements[i].len() >= self.cutoff) {
            return Err(Error::SupportExceedsCutoff(self.cutoff));
        }
        Ok(idx)
    }

    pub fn in_closed_cell(&self, y: Complex64) -> bool {
        self.cell.contains_closed(y, CELL_TOL * crate::hyperbolic::to_hyperboloid(y)[0])
    }
}

/// `U` in the piecewise-constant gauge.
#[derive(Clone, Copy, Debug)]
pub struct GaugeFrame<'a> {
    pub rep: &'a UnitaryRep,
    pub tiling: &'a Tiling,
}

/// `U(x) = ρ(γ)` where `x ∈ γC`.
pub fn frame(f: &GaugeFrame, x: Complex64) -> Result<CMat> {
    let (g, _) = f.tiling.cell.unfold(x, f.tiling.cutoff)?;
    Ok(f.rep.evaluate(&g))
}

/// A packet together with the representation images over its support.
pub struct Transformer<'a> {
    tiling: &'a Tiling,
    psi: &'a WavePacket<f64>,
    idx: Vec<usize>,
    rho: Vec<CMat>,
    rank: usize,
}

impl<'a> Transformer<'a> {
    pub fn new(psi: &'a WavePacket<f64>, f: &GaugeFrame<'a>) -> Result<Self> {
        if psi.curvature != f.tiling.group.curvature {
            return Err(Error::InvalidArgument("packet and group use different curvature conventions".into()));
        }
        if f.rep.genus() != f.tiling.group.genus {
            return Err(Error::GenusMismatch(f.tiling.group.genus, f.rep.genus()));
        }
        let idx = f.tiling.support(psi)?;
        let rho = idx.iter().map(|&i| f.rep.evaluate(&f.tiling.elements[i])).collect();
        Ok(Transformer { tiling: f.tiling, psi, idx, rho, rank: f.rep.rank() })
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.idx.iter().map(|&i| &self.tiling.elements[i])
    }

    fn sum<F: Fn(&Mobius<f64>) -> Complex64>(&self, f: F) -> CMat {
        let mut out = CMat::zeros(self.rank, self.rank);
        for (k, &i) in self.idx.iter().enumerate() {
            let c = f(&self.tiling.maps[i]);
            if c != Complex64::new(0.0, 0.0) {
                out += &self.rho[k] * c;
            }
        }
        out
    }

    /// `Σ_γ ψ(γy) ρ(γ)` for `y` in the closed cell.
    pub fn at(&self, y: Complex64) -> Result<CMat> {
        if !self.tiling.in_closed_cell(y) {
            return Err(Error::NotInCell);
        }
        Ok(self.at_unchecked(y))
    }

    pub fn at_unchecked(&self, y: Complex64) -> CMat {
        self.sum(|m| self.psi.value(m.apply_raw(y)))
    }

    /// `𝔅(d_wψ)(y)` where `w` is the periodic extension of the chart vector `v`.
    pub fn derivative_at(&self, y: Complex64, v: Complex64) -> CMat {
        self.sum(|m| self.psi.jet(m.apply_raw(y)).along(m.derivative(y) * v))
    }

    /// `𝔅(Δψ)(y)`.
    pub fn laplacian_at(&self, y: Complex64) -> CMat {
        self.sum(|m| {
            let z = m.apply_raw(y);
            chart_laplacian_to_metric(self.psi.jet(z).chart_laplacian(), z, self.psi.curvature)
        })
    }

    /// True when no packet term changes smoothness class between the
    /// given points, i.e. no stencil straddles a support edge.
    pub fn smooth_across(&self, pts: &[Complex64]) -> bool {
        self.idx.iter().all(|&i| {
            let m = &self.tiling.maps[i];
            self.psi.terms.iter().all(|t| {
                let inside: Vec<bool> = pts.iter().map(|&p| self.psi.tau(t, m.apply_raw(p)) < 1.0).collect();
                inside.iter().all(|&b| b) || inside.iter().all(|&b| !b)
            })
        })
    }
}

pub fn transform_h(psi: &WavePacket<f64>, f: &GaugeFrame, y: Complex64) -> Result<CMat> {
    Transformer::new(psi, f)?.at(y)
}

/// `Σ_γ ψ(γx) ρ(γ)` at an arbitrary point, summed over the whole ball.
pub fn transform_extended(psi: &WavePacket<f64>, f: &GaugeFrame, x: Complex64) -> Result<CMat> {
    let t = f.tiling;
    let n = f.rep.rank();
    let mut out = CMat::zeros(n, n);
    for (i, g) in t.elements.iter().enumerate() {
        let v = psi.value(t.maps[i].apply_raw(x));
        if v != Complex64::new(0.0, 0.0) {
            if g.len() >= t.cutoff {
                return Err(Error::SupportExceedsCutoff(t.cutoff));
            }
            out += f.rep.evaluate(g) * v;
        }
    }
    Ok(out)
}

/// `‖𝔅̃ψ(γ⁻¹x) − 𝔅̃ψ(x)ρ(γ)‖_F`.
pub fn quasi_periodicity_residual(psi: &WavePacket<f64>, f: &GaugeFrame, gamma: &GroupElement, x: Complex64) -> Result<f64> {
    let ginv = f.tiling.group.element(gamma).inverse();
    let lhs = transform_extended(psi, f, ginv.apply_raw(x))?;
    let rhs = transform_extended(psi, f, x)? * f.rep.evaluate(gamma);
    Ok(frobenius(&(lhs - rhs)))
}

/// Node values of `𝔅ψ` over a cell quadrature.
#[derive(Clone, Debug)]
pub struct SectionSample {
    pub values: Vec<CMat>,
}

impl SectionSample {
    pub fn l2_norm_sq(&self, quad: &Quadrature) -> f64 {
        self.values.iter().zip(&quad.weights).map(|(a, w)| w * a.norm_squared()).sum()
    }
}

pub fn section(psi: &WavePacket<f64>, f: &GaugeFrame, quad: &Quadrature) -> Result<SectionSample> {
    let t = Transformer::new(psi, f)?;
    Ok(SectionSample { values: quad.nodes.par_iter().map(|&y| t.at_unchecked(y)).collect() })
}

/// `Σ_k weight·tr(U_k(x)* S_k(π(x)))`, with `S_k` supplied as a closure on
/// cell points.
pub fn adjoint_h<S>(ens: &RepEnsemble, tiling: &Tiling, x: Complex64, s: S) -> Result<McEstimate>
where
    S: Fn(usize, Complex64) -> Result<CMat> + Sync,
{
    let (g, y) = tiling.cell.unfold(x, tiling.cutoff)?;
    let xs = ens
        .members
        .par_iter()
        .enumerate()
        .map(|(k, rho)| Ok((rho.evaluate(&g).adjoint() * s(k, y)?).trace()))
        .collect::<Result<Vec<Complex64>>>()?;
    Ok(ensemble_mean(ens.rank, &xs))
}

fn stencil_check(t: &Transformer, pts: &[Complex64]) -> Result<()> {
    if pts.iter().all(|&p| t.tiling.cell.contains(p)) {
        Ok(())
    } else {
        Err(Error::StencilOutsideCell)
    }
}

/// `‖𝔅(d_wψ)(y) − D_v𝔅ψ(y)‖_F` with a central difference of step `h`.
pub fn derivative_intertwiner_residual(psi: &WavePacket<f64>, f: &GaugeFrame, y: Complex64, v: Complex64, h: f64) -> Result<f64> {
    let t = Transformer::new(psi, f)?;
    let (p, m) = (y + v * h, y - v * h);
    stencil_check(&t, &[y, p, m])?;
    let fd = (t.at_unchecked(p) - t.at_unchecked(m)) / Complex64::new(2.0 * h, 0.0);
    Ok(frobenius(&(t.derivative_at(y, v) - fd)))
}

/// Five-point stencil points around `y`.
pub fn five_point(y: Complex64, h: f64) -> [Complex64; 5] {
    [y, y + h, y - h, y + Complex64::new(0.0, h), y - Complex64::new(0.0, h)]
}

/// `‖𝔅(Δψ)(y) − Δ_h𝔅ψ(y)‖_F` with the metric-scaled five-point stencil.
pub fn laplacian_intertwiner_residual(psi: &WavePacket<f64>, f: &GaugeFrame, y: Complex64, h: f64) -> Result<f64> {
    let t = Transformer::new(psi, f)?;
    let pts = five_point(y, h);
    stencil_check(&t, &pts)?;
    let v: Vec<CMat> = pts.iter().map(|&p| t.at_unchecked(p)).collect();
    let flat = (&v[1] + &v[2] + &v[3] + &v[4] - &v[0] * Complex64::new(4.0, 0.0)) / Complex64::new(h * h, 0.0);
    let w = 1.0 - y.norm_sqr();
    let scale = -psi.curvature.laplacian_scale::<f64>() * w * w;
    Ok(frobenius(&(t.laplacian_at(y) - flat * Complex64::new(scale, 0.0))))
}

/// `max_y ‖𝔅(ψ∘γ⁻¹)(y) − ρ(γ)𝔅ψ(y)‖_F` over the quadrature nodes.
pub fn holonomy_intertwiner_residual(psi: &WavePacket<f64>, f: &GaugeFrame, gamma: &GroupElement, quad: &Quadrature) -> Result<f64> {
    let moved = psi.translated(&f.tiling.group.element(gamma));
    let t0 = Transformer::new(psi, f)?;
    let t1 = Transformer::new(&moved, f)?;
    let r = f.rep.evaluate(gamma);
    Ok(quad
        .nodes
        .par_iter()
        .map(|&y| frobenius(&(t1.at_unchecked(y) - &r * t0.at_unchecked(y))))
        .reduce(|| 0.0, f64::max))
}

/// `C_δ = Σ_{γ1⁻¹γ2 = δ} Σ_y w(y) conj ψ(γ1y) ψ(γ2y)`: the integral of
/// `‖𝔅ψ‖²` over the cell is `Σ_δ C_δ χ_ρ(δ)`.
pub fn overlap_classes(psi: &WavePacket<f64>, tiling: &Tiling, quad: &Quadrature) -> Result<BTreeMap<GroupElement, Complex64>> {
    let idx = tiling.support(psi)?;
    let k = idx.len();
    let chunk = 512;
    let partial: Vec<Vec<Complex64>> = quad
        .nodes
        .par_chunks(chunk)
        .zip(quad.weights.par_chunks(chunk))
        .map(|(nodes, weights)| {
            let mut o = vec![Complex64::new(0.0, 0.0); k * k];
            let mut vals: Vec<(usize, Complex64)> = Vec::new();
            for (&y, &w) in nodes.iter().zip(weights) {
                vals.clear();
                for (a, &i) in idx.iter().enumerate() {
                    let v = psi.value(tiling.maps[i].apply_raw(y));
                    if v != Complex64::new(0.0, 0.0) {
                        vals.push((a, v));
                    }
                }
                for &(a, va) in &vals {
                    for &(b, vb) in &vals {
                        o[a * k + b] += va.conj() * vb * w;
                    }
                }
            }
            o
        })
        .collect();
    let mut total = vec![Complex64::new(0.0, 0.0); k * k];
    for p in partial {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    let mut classes: BTreeMap<GroupElement, Complex64> = BTreeMap::new();
    for a in 0..k {
        for b in 0..k {
            let v = total[a * k + b];
            if v != Complex64::new(0.0, 0.0) {
                let d = tiling.elements[idx[a]].invert().compose(&tiling.elements[idx[b]])?;
                *classes.entry(d).or_default() += v;
            }
        }
    }
    Ok(classes)
}

/// Quadrature value of `‖ψ‖²_{L²(ℍ)}`, unfolded onto the cell.
pub fn l2_norm_sq(psi: &WavePacket<f64>, tiling: &Tiling, quad: &Quadrature) -> Result<f64> {
    let classes = overlap_classes(psi, tiling, quad)?;
    Ok(classes.get(&GroupElement::identity(tiling.group.genus)).map(|c| c.re).unwrap_or(0.0))
}

/// `Σ_k weight_k Σ_y w(y) ‖𝔅ψ(y)‖²_HS` over the ensemble, with standard error.
pub fn norm_recovery(psi: &WavePacket<f64>, tiling: &Tiling, ens: &RepEnsemble, quad: &Quadrature) -> Result<McEstimate> {
    if ens.genus != tiling.group.genus {
        return Err(Error::GenusMismatch(tiling.group.genus, ens.genus));
    }
    let classes: Vec<(GroupElement, Complex64)> = overlap_classes(psi, tiling, quad)?.into_iter().collect();
    let xs: Vec<Complex64> = ens
        .members
        .par_iter()
        .map(|rho| classes.iter().map(|(d, c)| c * rho.character(d)).sum())
        .collect();
    Ok(ensemble_mean(ens.rank, &xs))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SectionExport {
    pub member: usize,
    /// Matrix entries per node, row-major, as `[re, im]`.
    pub nodes: Vec<Vec<[f64; 2]>>,
}

impl SectionSample {
    pub fn to_export(&self, member: usize) -> SectionExport {
        let nodes = self
            .values
            .iter()
            .map(|a| {
                let mut row = Vec::with_capacity(a.len());
                for i in 0..a.nrows() {
                    for j in 0..a.ncols() {
                        row.push([a[(i, j)].re, a[(i, j)].im]);
                    }
                }
                row
            })
            .collect();
        SectionExport { member, nodes }
    }
}

/// CSV `member_index,l2_norm_sq`.
pub fn norm_summary_csv(samples: &[SectionSample], quad: &Quadrature) -> String {
    let mut out = String::from("member_index,l2_norm_sq\n");
    for (k, s) in samples.iter().enumerate() {
        out.push_str(&format!("{k},{}\n", s.l2_norm_sq(quad)));
    }
    out
}
