//! Bloch transform of finitely supported functions on the group, fiberwise
//! over an ensemble of representations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gamma_fn::GammaFunction;
use crate::group::{GroupElement, SurfaceGroup};
use crate::linalg::{frobenius, hermiticity_defect, CMat};
use crate::rep_variety::{jacobian_grid, RepEnsemble, UnitaryRep};

/// `[ρ, A]` with a concrete representative `ρ`.
#[derive(Clone, Debug)]
pub struct FiberElement<'a> {
    pub rep: &'a UnitaryRep,
    pub matrix: CMat,
}

impl FiberElement<'_> {
    pub fn hs_norm(&self) -> f64 {
        frobenius(&self.matrix)
    }
}

/// A section over an ensemble: one matrix per member, aligned by index.
#[derive(Clone, Debug)]
pub struct BlochField<'a> {
    pub ensemble: &'a RepEnsemble,
    pub values: Vec<CMat>,
}

impl<'a> BlochField<'a> {
    pub fn fiber(&self, k: usize) -> FiberElement<'a> {
        FiberElement { rep: &self.ensemble.members[k], matrix: self.values[k].clone() }
    }

    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        same_ensemble(self.ensemble, other.ensemble)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x * a + y * b).collect();
        Ok(BlochField { ensemble: self.ensemble, values })
    }
}

/// Ensemble average together with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub value: Complex64,
    pub stderr: f64,
}

/// `Σ_k weight·x_k`, computed as the mean of `x_k/n`.
pub fn ensemble_mean(rank: usize, xs: &[Complex64]) -> McEstimate {
    let n = rank as f64;
    let count = xs.len() as f64;
    let value = xs.iter().map(|x| x / n).sum::<Complex64>() / count;
    let stderr = if xs.len() > 1 {
        let var = xs.iter().map(|x| (x / n - value).norm_sqr()).sum::<f64>() / (count - 1.0);
        (var / count).sqrt()
    } else {
        0.0
    };
    McEstimate { value, stderr }
}

fn check_rep(psi_genus: usize, rho: &UnitaryRep) -> Result<()> {
    if psi_genus != rho.genus() {
        return Err(Error::GenusMismatch(psi_genus, rho.genus()));
    }
    Ok(())
}

fn same_ensemble(a: &RepEnsemble, b: &RepEnsemble) -> Result<()> {
    if std::ptr::eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::EnsembleMismatch("fields live over different ensembles".into()))
    }
}

/// `Σ_γ ψ(γ) ρ(γ)`.
pub fn transform<'a>(psi: &GammaFunction, rho: &'a UnitaryRep) -> Result<FiberElement<'a>> {
    check_rep(psi.genus(), rho)?;
    let mut m = CMat::zeros(rho.rank(), rho.rank());
    for (g, c) in psi.iter() {
        m += rho.evaluate(g) * *c;
    }
    Ok(FiberElement { rep: rho, matrix: m })
}

pub fn field<'a>(psi: &GammaFunction, ens: &'a RepEnsemble) -> Result<BlochField<'a>> {
    if psi.genus() != ens.genus {
        return Err(Error::GenusMismatch(psi.genus(), ens.genus));
    }
    let values = ens
        .members
        .par_iter()
        .map(|rho| transform(psi, rho).map(|f| f.matrix))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlochField { ensemble: ens, values })
}

/// `(B*F)(γ) = Σ_k weight·tr(ρ_k(γ)* F_k)`.
pub fn adjoint(f: &BlochField, gamma: &GroupElement) -> Result<Complex64> {
    Ok(adjoint_estimate(f, gamma)?.value)
}

pub fn adjoint_estimate(f: &BlochField, gamma: &GroupElement) -> Result<McEstimate> {
    let ens = f.ensemble;
    if gamma.genus() != ens.genus {
        return Err(Error::GenusMismatch(ens.genus, gamma.genus()));
    }
    let xs: Vec<Complex64> = ens
        .members
        .par_iter()
        .zip(&f.values)
        .map(|(rho, a)| (rho.evaluate(gamma).adjoint() * a).trace())
        .collect();
    Ok(ensemble_mean(ens.rank, &xs))
}

/// `Σ_k weight·tr(F1_k* F2_k)`.
pub fn inner(f1: &BlochField, f2: &BlochField) -> Result<Complex64> {
    Ok(inner_estimate(f1, f2)?.value)
}

pub fn inner_estimate(f1: &BlochField, f2: &BlochField) -> Result<McEstimate> {
    same_ensemble(f1.ensemble, f2.ensemble)?;
    let xs: Vec<Complex64> = f1
        .values
        .iter()
        .zip(&f2.values)
        .map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
        .collect();
    Ok(ensemble_mean(f1.ensemble.rank, &xs))
}

/// `T̂_γ[ρ, A] = [ρ, ρ(γ)⁻¹A]`.
pub fn hat_translate<'a>(v: &FiberElement<'a>, gamma: &GroupElement) -> Result<FiberElement<'a>> {
    check_rep(gamma.genus(), v.rep)?;
    Ok(FiberElement { rep: v.rep, matrix: v.rep.evaluate(gamma).adjoint() * &v.matrix })
}

/// `H = Σ_γ c_γ T_γ` acting by `(Hψ)(x) = Σ_γ c_γ ψ(γx)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicOperator {
    genus: usize,
    coefficients: BTreeMap<GroupElement, Complex64>,
}

impl PeriodicOperator {
    pub fn new<I>(genus: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, Complex64)>,
    {
        let f = GammaFunction::from_terms(genus, terms)?;
        Ok(PeriodicOperator { genus, coefficients: f.iter().map(|(g, c)| (g.clone(), *c)).collect() })
    }

    /// `Σ T_s` over the `4g` signed generators.
    pub fn adjacency(genus: usize) -> Result<Self> {
        let group = SurfaceGroup::new(genus)?;
        let one = Complex64::new(1.0, 0.0);
        Self::new(genus, group.generators().into_iter().map(|s| (s, one)))
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&GroupElement, &Complex64)> {
        self.coefficients.iter()
    }

    pub fn coefficient(&self, g: &GroupElement) -> Complex64 {
        self.coefficients.get(g).copied().unwrap_or_default()
    }

    pub fn l1_norm(&self) -> f64 {
        self.coefficients.values().map(|c| c.norm()).sum()
    }

    /// `max_γ |c_{γ⁻¹} − conj(c_γ)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|(g, c)| (self.coefficient(&g.invert()) - c.conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= 1e-12 * (1.0 + self.l1_norm())
    }

    pub fn apply(&self, psi: &GammaFunction) -> Result<GammaFunction> {
        let mut out = GammaFunction::zero(psi.genus());
        for (g, c) in &self.coefficients {
            out = out.plus(&psi.translate(g)?.scaled(*c))?;
        }
        Ok(out)
    }
}

/// `M(ρ) = Σ_γ c_γ ρ(γ)⁻¹`, so that `B(Hψ) = M(ρ)·Bψ`.
pub fn conjugate_operator(h: &PeriodicOperator, rho: &UnitaryRep) -> Result<CMat> {
    check_rep(h.genus, rho)?;
    let mut m = CMat::zeros(rho.rank(), rho.rank());
    for (g, c) in &h.coefficients {
        m += rho.evaluate(g).adjoint() * *c;
    }
    Ok(m)
}

/// Ascending eigenvalues of `M(ρ)`, each counted once.
pub fn band_spectrum(h: &PeriodicOperator, rho: &UnitaryRep) -> Result<Vec<f64>> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian(h.hermiticity_defect()));
    }
    let m = conjugate_operator(h, rho)?;
    let defect = hermiticity_defect(&m);
    if defect > 1e-9 * (1.0 + h.l1_norm()) {
        return Err(Error::NotHermitian(defect));
    }
    let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// CSV of the rank one bands over `jacobian_grid(m)`.
pub fn bands_grid_csv(h: &PeriodicOperator, m: usize, cap: u128) -> Result<String> {
    let g = h.genus;
    let mut out = String::new();
    let head: Vec<String> = (1..=2 * g).map(|j| format!("theta_{j}")).collect();
    writeln!(out, "{},band_index,eigenvalue", head.join(",")).expect("string write");
    for p in jacobian_grid(g, m, cap)? {
        let ev = band_spectrum(h, &p.to_rep())?;
        let th: Vec<String> = p.phases().iter().map(|t| t.to_string()).collect();
        for (b, e) in ev.iter().enumerate() {
            writeln!(out, "{},{b},{e}", th.join(",")).expect("string write");
        }
    }
    Ok(out)
}

/// CSV of the bands of every ensemble member.
pub fn bands_ensemble_csv(h: &PeriodicOperator, ens: &RepEnsemble) -> Result<String> {
    let spectra = ens.members.par_iter().map(|r| band_spectrum(h, r)).collect::<Result<Vec<_>>>()?;
    let mut out = String::from("member_index,band_index,eigenvalue\n");
    for (k, ev) in spectra.iter().enumerate() {
        for (b, e) in ev.iter().enumerate() {
            writeln!(out, "{k},{b},{e}").expect("string write");
        }
    }
    Ok(out)
}
