//! Unitary representations of the surface group: exact Jacobian points for
//! rank one, relator-projected Haar samples for higher rank, characters and
//! Monte Carlo expectations.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{GroupElement, Letter};
use crate::linalg::{frobenius, haar_unitary, identity, polar, unitarity_residual, CMat};
use crate::rng::{self, Stream};

pub const DEFAULT_GRID_CAP: u128 = 1 << 22;
pub const IRREDUCIBILITY_THRESHOLD: f64 = 1e-8;
const UNITARY_TOL: f64 = 1e-12;

/// A point of `U(1)^{2g}`: `λ(α_j) = exp(iθ_j)`, `λ(β_j) = exp(iθ_{g+j})`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianPoint {
    phases: Vec<f64>,
}

impl JacobianPoint {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.len() < 4 || phases.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!("need 2g >= 4 phases, got {}", phases.len())));
        }
        let phases = phases.into_iter().map(|t| t.rem_euclid(TAU)).map(|t| if t >= TAU { 0.0 } else { t }).collect();
        Ok(JacobianPoint { phases })
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn genus(&self) -> usize {
        self.phases.len() / 2
    }

    /// `λ(γ) = exp(i Σ_j k_j θ_j)` with `k` the abelian image of `γ`.
    pub fn character(&self, gamma: &GroupElement) -> Complex64 {
        let ab = gamma.abelianize();
        let t: f64 = ab.0.iter().zip(&self.phases).map(|(&k, &th)| k as f64 * th).sum();
        Complex64::from_polar(1.0, t)
    }

    pub fn to_rep(&self) -> UnitaryRep {
        let images = self.phases.iter().map(|&t| CMat::from_element(1, 1, Complex64::from_polar(1.0, t))).collect();
        UnitaryRep::from_images(self.genus(), images, 0).expect("rank one images are consistent")
    }
}

pub fn sample_jacobian(genus: usize, seed: u64) -> JacobianPoint {
    let mut r = rng::stream(seed, Stream::Jacobian, 0, 0);
    jacobian_from_rng(genus, &mut r)
}

fn jacobian_from_rng<R: Rng + ?Sized>(genus: usize, r: &mut R) -> JacobianPoint {
    let phases = (0..2 * genus).map(|_| r.random::<f64>() * TAU).collect();
    JacobianPoint { phases }
}

/// Tensor grid `θ_j ∈ {2πk/m}` on `U(1)^{2g}`, ordered with the last phase
/// varying fastest.
pub fn jacobian_grid(genus: usize, m: usize, cap: u128) -> Result<Vec<JacobianPoint>> {
    if m == 0 {
        return Err(Error::InvalidArgument("grid resolution must be >= 1".into()));
    }
    let d = 2 * genus;
    let points = (m as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if points > cap {
        return Err(Error::GridTooLarge { points, cap });
    }
    let step = TAU / m as f64;
    let mut out = Vec::with_capacity(points as usize);
    let mut idx = vec![0usize; d];
    for _ in 0..points {
        out.push(JacobianPoint { phases: idx.iter().map(|&k| k as f64 * step).collect() });
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] < m {
                break;
            }
            idx[j] = 0;
        }
    }
    Ok(out)
}

/// A homomorphism `Γ → U(n)` given by the images of `α_1…α_g, β_1…β_g`.
#[derive(Clone, Debug)]
pub struct UnitaryRep {
    genus: usize,
    rank: usize,
    images: Vec<CMat>,
    adjoints: Vec<CMat>,
    pub unitarity_residual: f64,
    pub relator_residual: f64,
    pub seed: u64,
    pub irreducibility_defect: usize,
}

impl PartialEq for UnitaryRep {
    fn eq(&self, other: &Self) -> bool {
        self.genus == other.genus && self.images == other.images && self.seed == other.seed
    }
}

impl UnitaryRep {
    pub fn from_images(genus: usize, images: Vec<CMat>, seed: u64) -> Result<Self> {
        if images.len() != 2 * genus {
            return Err(Error::InvalidArgument(format!("expected {} images, got {}", 2 * genus, images.len())));
        }
        let rank = images[0].nrows();
        for m in &images {
            if m.nrows() != rank || m.ncols() != rank {
                return Err(Error::RankMismatch(rank, m.nrows().max(m.ncols())));
            }
        }
        let adjoints = images.iter().map(|m| m.adjoint()).collect();
        let mut rep = UnitaryRep {
            genus,
            rank,
            images,
            adjoints,
            unitarity_residual: 0.0,
            relator_residual: 0.0,
            seed,
            irreducibility_defect: 0,
        };
        rep.unitarity_residual = rep.images.iter().map(unitarity_residual).fold(0.0, f64::max);
        rep.relator_residual = frobenius(&(rep.relator_image() - identity(rank)));
        rep.irreducibility_defect = irreducibility_defect(&rep.images);
        Ok(rep)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[CMat] {
        &self.images
    }

    fn letter_image(&self, l: Letter) -> &CMat {
        let j = l.slot();
        if l.is_inverse() {
            &self.adjoints[j]
        } else {
            &self.images[j]
        }
    }

    pub fn evaluate_letters(&self, word: &[Letter]) -> CMat {
        let mut out = identity(self.rank);
        for &l in word {
            out *= self.letter_image(l);
        }
        out
    }

    pub fn evaluate(&self, gamma: &GroupElement) -> CMat {
        self.evaluate_letters(gamma.letters())
    }

    pub fn character(&self, gamma: &GroupElement) -> Complex64 {
        if self.rank == 1 {
            return self.evaluate(gamma)[(0, 0)];
        }
        self.evaluate(gamma).trace()
    }

    fn relator_image(&self) -> CMat {
        self.evaluate_letters(&GroupElement::relator_word(self.genus))
    }

    /// Images replaced by `U ρ U*`.
    pub fn conjugate(&self, u: &CMat) -> Result<Self> {
        if u.nrows() != self.rank || u.ncols() != self.rank {
            return Err(Error::RankMismatch(self.rank, u.nrows()));
        }
        let res = unitarity_residual(u);
        if res > UNITARY_TOL {
            return Err(Error::NotUnitary(res));
        }
        let ua = u.adjoint();
        let images: Vec<CMat> = self.images.iter().map(|m| u * m * &ua).collect();
        let adjoints = images.iter().map(|m| m.adjoint()).collect();
        let mut rep = UnitaryRep { images, adjoints, ..self.clone() };
        rep.unitarity_residual = rep.images.iter().map(unitarity_residual).fold(0.0, f64::max);
        rep.relator_residual = frobenius(&(rep.relator_image() - identity(rep.rank)));
        Ok(rep)
    }

    /// `λ ⊗ ρ`: generator images multiplied by the phases of `λ`.
    pub fn twist(&self, lambda: &JacobianPoint) -> Result<Self> {
        if lambda.genus() != self.genus {
            return Err(Error::GenusMismatch(self.genus, lambda.genus()));
        }
        let images: Vec<CMat> =
            self.images.iter().zip(lambda.phases()).map(|(m, &t)| m * Complex64::from_polar(1.0, t)).collect();
        let adjoints = images.iter().map(|m| m.adjoint()).collect();
        Ok(UnitaryRep { images, adjoints, ..self.clone() })
    }
}

/// `dim{X : Xρ(s) = ρ(s)X for all generators s} − 1`.
pub fn irreducibility_defect(images: &[CMat]) -> usize {
    let n = images[0].nrows();
    if n == 1 {
        return 0;
    }
    let nn = n * n;
    // vec(AX − XA) = (I⊗A − Aᵀ⊗I) vec(X), column-major vec
    let mut sys = DMatrix::<Complex64>::zeros(images.len() * nn, nn);
    for (b, a) in images.iter().enumerate() {
        let off = b * nn;
        for q in 0..n {
            for p in 0..n {
                let col = q * n + p; // X_{pq}
                for i in 0..n {
                    sys[(off + q * n + i, col)] += a[(i, p)];
                    // (AX)_{i,q} gains A_{i,p}; (XA)_{p,i} gains A_{q,i}
                    sys[(off + i * n + p, col)] -= a[(q, i)];
                }
            }
        }
    }
    let sv = sys.singular_values();
    let rank = sv.iter().filter(|&&s| s > IRREDUCIBILITY_THRESHOLD).count();
    (nn - rank).saturating_sub(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Optimizer {
    GaussNewton,
    GradientDescent,
}

#[derive(Clone, Copy, Debug)]
pub struct SamplerOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub max_attempts: usize,
    pub optimizer: Optimizer,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions { max_iter: 5000, tol: 1e-8, max_attempts: 32, optimizer: Optimizer::GradientDescent }
    }
}

/// Outcome of one optimizer run from a fixed start.
#[derive(Clone, Debug)]
pub struct OptimizerRun {
    pub images: Vec<CMat>,
    /// `f` after every accepted step, starting with the initial value.
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Skew-Hermitian basis element `b` of `u(n)` as a list of `(k, l, coeff)`.
fn skew_basis(n: usize) -> Vec<Vec<(usize, usize, Complex64)>> {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        out.push(vec![(k, k, i)]);
    }
    for k in 0..n {
        for l in k + 1..n {
            out.push(vec![(k, l, one), (l, k, -one)]);
            out.push(vec![(k, l, i), (l, k, i)]);
        }
    }
    out
}

fn skew_from_coeffs(basis: &[Vec<(usize, usize, Complex64)>], c: &[f64], n: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for (b, &x) in basis.iter().zip(c) {
        for &(k, l, z) in b {
            m[(k, l)] += z * x;
        }
    }
    m
}

struct Relator {
    letters: Vec<Letter>,
    genus: usize,
    n: usize,
    basis: Vec<Vec<(usize, usize, Complex64)>>,
}

impl Relator {
    fn new(genus: usize, n: usize) -> Self {
        Relator { letters: GroupElement::relator_word(genus), genus, n, basis: skew_basis(n) }
    }

    fn factors(&self, images: &[CMat]) -> Vec<CMat> {
        self.letters
            .iter()
            .map(|l| {
                let m = &images[l.slot()];
                if l.is_inverse() {
                    m.adjoint()
                } else {
                    m.clone()
                }
            })
            .collect()
    }

    fn residual(&self, images: &[CMat]) -> CMat {
        let mut r = identity(self.n);
        for f in self.factors(images) {
            r *= f;
        }
        r - identity(self.n)
    }

    fn objective(&self, images: &[CMat]) -> f64 {
        self.residual(images).iter().map(|z| z.norm_sqr()).sum()
    }

    /// Residual `R − I` as a real vector and its Jacobian with respect to
    /// right-multiplicative skew-Hermitian perturbations `U_j(I + Ω_j)`.
    fn linearize(&self, images: &[CMat]) -> (nalgebra::DVector<f64>, DMatrix<f64>) {
        let n = self.n;
        let nn = n * n;
        let f = self.factors(images);
        let len = f.len();
        let mut pre = Vec::with_capacity(len + 1);
        pre.push(identity(n));
        for k in 0..len {
            let next = &pre[k] * &f[k];
            pre.push(next);
        }
        let mut suf = vec![identity(n); len + 1];
        for k in (0..len).rev() {
            suf[k] = &f[k] * &suf[k + 1];
        }
        let e = &pre[len] - identity(n);
        let mut rvec = nalgebra::DVector::zeros(2 * nn);
        for (idx, z) in e.iter().enumerate() {
            rvec[idx] = z.re;
            rvec[nn + idx] = z.im;
        }
        let mut jac = DMatrix::zeros(2 * nn, 2 * self.genus * nn);
        for (p, l) in self.letters.iter().enumerate() {
            let j = l.slot();
            // δR = L Ω Rm with sign folded into L
            let (lm, rm) = if l.is_inverse() { (-&pre[p], &suf[p]) } else { (pre[p + 1].clone(), &suf[p + 1]) };
            for (b, terms) in self.basis.iter().enumerate() {
                let col = j * nn + b;
                for &(k, q, z) in terms {
                    for c in 0..n {
                        let rz = rm[(q, c)] * z;
                        for r in 0..n {
                            let v = lm[(r, k)] * rz;
                            let idx = c * n + r;
                            jac[(idx, col)] += v.re;
                            jac[(nn + idx, col)] += v.im;
                        }
                    }
                }
            }
        }
        (rvec, jac)
    }

    fn retract(&self, images: &[CMat], delta: &nalgebra::DVector<f64>, t: f64) -> Vec<CMat> {
        let nn = self.n * self.n;
        images
            .iter()
            .enumerate()
            .map(|(j, u)| {
                let c: Vec<f64> = delta.as_slice()[j * nn..(j + 1) * nn].iter().map(|x| x * t).collect();
                let omega = skew_from_coeffs(&self.basis, &c, self.n);
                polar(&(u * (identity(self.n) + omega)))
            })
            .collect()
    }
}

const POLISH_STEPS: usize = 3;

/// Minimum-norm solution of `J δ = −r` through the eigendecomposition of `JJᵀ`.
fn min_norm_step(jac: &DMatrix<f64>, r: &nalgebra::DVector<f64>) -> Option<nalgebra::DVector<f64>> {
    let eig = (jac * jac.transpose()).symmetric_eigen();
    let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
    if !(lmax > 0.0) {
        return None;
    }
    let proj = eig.eigenvectors.transpose() * r;
    let scaled = nalgebra::DVector::from_iterator(
        proj.len(),
        proj.iter().zip(eig.eigenvalues.iter()).map(|(p, &l)| if l > 1e-10 * lmax { -p / l } else { 0.0 }),
    );
    Some(jac.transpose() * (&eig.eigenvectors * scaled))
}

/// Minimizes `‖R(ρ) − I‖_F²` from `start`, retracting onto the unitary group
/// by polar decomposition after every step. Steps are accepted only on
/// strict decrease.
pub fn minimize_relator(genus: usize, start: Vec<CMat>, opts: &SamplerOptions) -> OptimizerRun {
    let n = start[0].nrows();
    let rel = Relator::new(genus, n);
    let mut images = start;
    let mut fval = rel.objective(&images);
    let mut history = vec![fval];
    let tol2 = opts.tol * opts.tol;
    let mut gd_step = 0.1;
    let mut polish = 0;
    for _ in 0..opts.max_iter {
        let newton = if fval <= tol2 {
            // a few Newton steps past the tolerance push the residual to rounding level
            if polish >= POLISH_STEPS {
                break;
            }
            polish += 1;
            true
        } else {
            opts.optimizer == Optimizer::GaussNewton
        };
        let (r, jac) = rel.linearize(&images);
        let (delta, mut t) = if newton {
            match min_norm_step(&jac, &r) {
                Some(d) => (d, 1.0),
                None => break,
            }
        } else {
            ((jac.transpose() * &r) * -2.0, gd_step)
        };
        let mut accepted = false;
        for _ in 0..40 {
            let cand = rel.retract(&images, &delta, t);
            let fc = rel.objective(&cand);
            if fc < fval {
                images = cand;
                fval = fc;
                history.push(fval);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        if !newton {
            gd_step = (t * 2.0).min(1e3);
        }
    }
    OptimizerRun { images, converged: fval <= tol2, history }
}

/// Draws a Haar tuple and projects it onto the relator variety, resampling
/// on non-convergence or reducibility.
pub fn sample_unitary(genus: usize, n: usize, seed: u64, opts: &SamplerOptions) -> Result<UnitaryRep> {
    if n < 2 {
        return Err(Error::InvalidArgument("sample_unitary needs rank >= 2".into()));
    }
    let mut last = f64::INFINITY;
    for attempt in 0..opts.max_attempts {
        let mut r = rng::stream(seed, Stream::Unitary, 0, attempt as u64);
        let start: Vec<CMat> = (0..2 * genus).map(|_| haar_unitary(n, &mut r)).collect();
        let run = minimize_relator(genus, start, opts);
        last = run.history.last().copied().unwrap_or(f64::INFINITY).sqrt();
        if !run.converged {
            continue;
        }
        let rep = UnitaryRep::from_images(genus, run.images, seed)?;
        if rep.irreducibility_defect == 0 && rep.relator_residual <= opts.tol {
            return Ok(rep);
        }
    }
    Err(Error::NonConvergence { attempts: opts.max_attempts, residual: last })
}

/// Samples of `M_Γ^n`, each carrying weight `1/(nN)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepEnsemble {
    pub genus: usize,
    pub rank: usize,
    pub seed: u64,
    pub members: Vec<UnitaryRep>,
}

impl RepEnsemble {
    pub fn from_members(genus: usize, rank: usize, seed: u64, members: Vec<UnitaryRep>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("ensemble needs at least one member".into()));
        }
        for m in &members {
            if m.genus() != genus {
                return Err(Error::GenusMismatch(genus, m.genus()));
            }
            if m.rank() != rank {
                return Err(Error::RankMismatch(rank, m.rank()));
            }
        }
        Ok(RepEnsemble { genus, rank, seed, members })
    }

    /// The rank one ensemble on `jacobian_grid(m)`.
    pub fn from_grid(genus: usize, m: usize, cap: u128) -> Result<Self> {
        let members = jacobian_grid(genus, m, cap)?.iter().map(JacobianPoint::to_rep).collect();
        Self::from_members(genus, 1, 0, members)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn weight_per_member(&self) -> f64 {
        1.0 / (self.rank as f64 * self.members.len() as f64)
    }

    pub fn total_weight(&self) -> f64 {
        self.weight_per_member() * self.members.len() as f64
    }
}

pub fn ensemble(genus: usize, n: usize, count: usize, seed: u64, opts: &SamplerOptions) -> Result<RepEnsemble> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidArgument("rank and sample count must be >= 1".into()));
    }
    crate::group::SurfaceGroup::new(genus)?;
    let members: Vec<Result<UnitaryRep>> = (0..count)
        .into_par_iter()
        .map(|k| {
            if n == 1 {
                let mut r = rng::stream(seed, Stream::Jacobian, k as u64, 0);
                let mut rep = jacobian_from_rng(genus, &mut r).to_rep();
                rep.seed = rng::derive(seed, Stream::Jacobian, k as u64, 0);
                Ok(rep)
            } else {
                sample_unitary(genus, n, rng::derive(seed, Stream::Unitary, k as u64, 0), opts)
            }
        })
        .collect();
    let members = members.into_iter().collect::<Result<Vec<_>>>()?;
    RepEnsemble::from_members(genus, n, seed, members)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectationEstimate {
    pub value: Complex64,
    /// Standard error of the mean; 0 when fewer than two samples.
    pub stderr: f64,
    pub samples: usize,
    pub gamma: GroupElement,
    pub rank: usize,
}

/// `E_n(γ)` over a fixed ensemble.
pub fn expectation_from(ens: &RepEnsemble, gamma: &GroupElement) -> Result<ExpectationEstimate> {
    if gamma.genus() != ens.genus {
        return Err(Error::GenusMismatch(ens.genus, gamma.genus()));
    }
    let samples = ens.len();
    if !gamma.in_commutator_subgroup() {
        return Ok(ExpectationEstimate {
            value: Complex64::new(0.0, 0.0),
            stderr: 0.0,
            samples,
            gamma: gamma.clone(),
            rank: ens.rank,
        });
    }
    let n = ens.rank as f64;
    let tol = 1e-10 * n * (1.0 + gamma.len() as f64);
    let chars: Vec<Result<Complex64>> = ens
        .members
        .par_iter()
        .enumerate()
        .map(|(k, rho)| {
            let chi = rho.character(gamma);
            let lambda = jacobian_from_rng(ens.genus, &mut rng::stream(ens.seed, Stream::Twist, k as u64, 0));
            let dev = (rho.twist(&lambda)?.character(gamma) - chi).norm();
            if dev > tol {
                return Err(Error::TwistInconsistent(dev));
            }
            Ok(chi)
        })
        .collect();
    let chars = chars.into_iter().collect::<Result<Vec<_>>>()?;
    // mean of χ/n equals Σ weight·χ; this order keeps E(e) = 1 exact
    let value: Complex64 = chars.iter().map(|c| c / n).sum::<Complex64>() / samples as f64;
    let stderr = if samples > 1 {
        let mean = value;
        let var: f64 = chars.iter().map(|c| (c / n - mean).norm_sqr()).sum::<f64>() / (samples as f64 - 1.0);
        (var / samples as f64).sqrt()
    } else {
        0.0
    };
    Ok(ExpectationEstimate { value, stderr, samples, gamma: gamma.clone(), rank: ens.rank })
}

/// `E_n(γ)` from a fresh ensemble of `count` samples. Elements outside the
/// commutator subgroup return 0 without sampling.
pub fn expectation(
    gamma: &GroupElement,
    n: usize,
    count: usize,
    seed: u64,
    opts: &SamplerOptions,
) -> Result<ExpectationEstimate> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidArgument("rank and sample count must be >= 1".into()));
    }
    if !gamma.in_commutator_subgroup() {
        return Ok(ExpectationEstimate {
            value: Complex64::new(0.0, 0.0),
            stderr: 0.0,
            samples: count,
            gamma: gamma.clone(),
            rank: n,
        });
    }
    expectation_from(&ensemble(gamma.genus(), n, count, seed, opts)?, gamma)
}

#[derive(Serialize, Deserialize)]
struct MemberRecord {
    images: Vec<Vec<Vec<[f64; 2]>>>,
    relator_residual: f64,
    defect: usize,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct EnsemblePayload {
    rank: usize,
    genus: usize,
    seed: u64,
    members: Vec<MemberRecord>,
}

#[derive(Serialize, Deserialize)]
struct EnsembleFile {
    rank: usize,
    genus: usize,
    seed: u64,
    members: Vec<MemberRecord>,
    checksum: String,
}

fn checksum(payload: &EnsemblePayload) -> Result<String> {
    let bytes = serde_json::to_vec(payload)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl RepEnsemble {
    fn payload(&self) -> EnsemblePayload {
        let members = self
            .members
            .iter()
            .map(|m| MemberRecord {
                images: m
                    .images()
                    .iter()
                    .map(|u| (0..u.nrows()).map(|i| (0..u.ncols()).map(|j| [u[(i, j)].re, u[(i, j)].im]).collect()).collect())
                    .collect(),
                relator_residual: m.relator_residual,
                defect: m.irreducibility_defect,
                seed: m.seed,
            })
            .collect();
        EnsemblePayload { rank: self.rank, genus: self.genus, seed: self.seed, members }
    }

    pub fn to_json(&self) -> Result<String> {
        let p = self.payload();
        let checksum = checksum(&p)?;
        let file = EnsembleFile { rank: p.rank, genus: p.genus, seed: p.seed, members: p.members, checksum };
        Ok(serde_json::to_string(&file)?)
    }

    /// Parses a cache file, rejecting it if the checksum does not match.
    pub fn from_json(s: &str) -> Result<Self> {
        let f: EnsembleFile = serde_json::from_str(s)?;
        let p = EnsemblePayload { rank: f.rank, genus: f.genus, seed: f.seed, members: f.members };
        let found = checksum(&p)?;
        if found != f.checksum {
            return Err(Error::Checksum { expected: f.checksum, found });
        }
        let mut members = Vec::with_capacity(p.members.len());
        for m in p.members {
            let images: Vec<CMat> = m
                .images
                .iter()
                .map(|rows| {
                    let n = rows.len();
                    CMat::from_fn(n, n, |i, j| {
                        let z = rows[i].get(j).copied().unwrap_or([f64::NAN, f64::NAN]);
                        Complex64::new(z[0], z[1])
                    })
                })
                .collect();
            members.push(UnitaryRep::from_images(p.genus, images, m.seed)?);
        }
        RepEnsemble::from_members(p.genus, p.rank, p.seed, members)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

pub fn cache_path(dir: &Path, genus: usize, n: usize, count: usize, seed: u64) -> PathBuf {
    dir.join(format!("ensemble_g{genus}_n{n}_N{count}_s{seed}.json"))
}

/// Loads the ensemble from `dir` if a valid cache file exists, otherwise
/// samples it and writes the cache.
pub fn ensemble_cached(
    dir: &Path,
    genus: usize,
    n: usize,
    count: usize,
    seed: u64,
    opts: &SamplerOptions,
) -> Result<RepEnsemble> {
    let path = cache_path(dir, genus, n, count, seed);
    if path.exists() {
        let ens = RepEnsemble::load(&path)?;
        if ens.genus == genus && ens.rank == n && ens.len() == count && ens.seed == seed {
            return Ok(ens);
        }
        return Err(Error::EnsembleMismatch(format!("{} does not match the request", path.display())));
    }
    let ens = ensemble(genus, n, count, seed, opts)?;
    std::fs::create_dir_all(dir)?;
    ens.save(&path)?;
    Ok(ens)
}
