//! Finitely supported functions `ψ: Γ → ℂ`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{parse_element, word_string, GroupElement};

/// Amplitudes with modulus below this are dropped from supports.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Sup,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaFunction {
    genus: usize,
    terms: BTreeMap<GroupElement, Complex64>,
}

impl GammaFunction {
    pub fn zero(genus: usize) -> Self {
        GammaFunction { genus, terms: BTreeMap::new() }
    }

    /// Point mass `c·δ_γ`.
    pub fn delta(gamma: &GroupElement, c: Complex64) -> Self {
        let mut f = Self::zero(gamma.genus());
        f.add_term(gamma.clone(), c).expect("same genus");
        f
    }

    /// Sums repeated elements, then prunes.
    pub fn from_terms<I>(genus: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, Complex64)>,
    {
        let mut f = Self::zero(genus);
        for (g, c) in terms {
            f.add_term(g, c)?;
        }
        Ok(f)
    }

    pub fn add_term(&mut self, gamma: GroupElement, c: Complex64) -> Result<()> {
        if gamma.genus() != self.genus {
            return Err(Error::GenusMismatch(self.genus, gamma.genus()));
        }
        let slot = self.terms.entry(gamma).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
        let prune = slot.norm() < PRUNE_THRESHOLD;
        if prune {
            self.terms.retain(|_, v| v.norm() >= PRUNE_THRESHOLD);
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn get(&self, gamma: &GroupElement) -> Complex64 {
        self.terms.get(gamma).copied().unwrap_or_default()
    }

    /// Terms in shortlex order of the support.
    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &Complex64)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let terms = self.terms.iter().map(|(g, v)| (g.clone(), v * c));
        Self::from_terms(self.genus, terms).expect("same genus")
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (g, c) in other.iter() {
            out.add_term(g.clone(), *c)?;
        }
        Ok(out)
    }

    /// `T_γψ(γ′) = ψ(γγ′)`, i.e. the support moves by `γ⁻¹`.
    pub fn translate(&self, gamma: &GroupElement) -> Result<Self> {
        let inv = gamma.invert();
        let mut terms = Vec::with_capacity(self.len());
        for (x, c) in self.iter() {
            terms.push((inv.compose(x)?, *c));
        }
        Self::from_terms(self.genus, terms)
    }

    /// `(ψ1⋆ψ2)(γ) = Σ_{γ′} ψ1(γ′)ψ2(γ′⁻¹γ)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.genus != other.genus {
            return Err(Error::GenusMismatch(self.genus, other.genus));
        }
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (x, a) in self.iter() {
            for (y, b) in other.iter() {
                terms.push((x.compose(y)?, a * b));
            }
        }
        Self::from_terms(self.genus, terms)
    }

    pub fn lp_norm(&self, p: Norm) -> f64 {
        let mods = self.terms.values().map(|c| c.norm());
        match p {
            Norm::L1 => mods.sum(),
            Norm::L2 => mods.map(|m| m * m).sum::<f64>().sqrt(),
            Norm::Sup => mods.fold(0.0, f64::max),
        }
    }

    /// `⟨ψ|φ⟩ = Σ conj(ψ(γ)) φ(γ)`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.iter().map(|(g, a)| a.conj() * other.get(g)).sum()
    }

    pub fn to_file(&self) -> GammaFunctionFile {
        GammaFunctionFile {
            genus: self.genus,
            terms: self
                .iter()
                .map(|(g, c)| TermRecord { word: word_string(g), re: c.re, im: c.im })
                .collect(),
        }
    }

    pub fn from_file(file: &GammaFunctionFile) -> Result<Self> {
        let mut terms = Vec::with_capacity(file.terms.len());
        for t in &file.terms {
            terms.push((parse_element(file.genus, &t.word)?, Complex64::new(t.re, t.im)));
        }
        Self::from_terms(file.genus, terms)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(s)?)
    }
}

/// On-disk form: `{"genus": g, "terms": [{"word": "a1 B2", "re": x, "im": y}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GammaFunctionFile {
    pub genus: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermRecord {
    pub word: String,
    pub re: f64,
    pub im: f64,
}
