//! Quick invariant suite behind `hyperbloch verify`.

use num_complex::Complex64;
use rand::Rng;

use crate::bloch_abstract::{band_spectrum, hat_translate, transform, PeriodicOperator};
use crate::bloch_hyperbolic::{
    holonomy_intertwiner_residual, quasi_periodicity_residual, transform_extended, GaugeFrame, Tiling, Transformer,
};
use crate::error::Result;
use crate::gamma_fn::GammaFunction;
use crate::group::{parse_element, random_element, GroupElement, SurfaceGroup};
use crate::hyperbolic::{construct_group, dirichlet_cell, distance_raw, Curvature, DirichletCell, Mobius};
use crate::linalg::{frobenius, haar_unitary, unitarity_residual};
use crate::magnetic::{flux, twisted_transform, uniform_potential, Automorphy};
use crate::packet::{PacketTerm, WavePacket};
use crate::rep_variety::{ensemble, expectation_from, sample_jacobian, sample_unitary, SamplerOptions};
use crate::rng::{stream, Stream};

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub genus: usize,
    pub seed: u64,
    pub curvature: Curvature,
    /// Word-length radius of the tiling used by the transform checks.
    pub cutoff: usize,
    /// Randomized cases per check.
    pub cases: usize,
    pub rank: usize,
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { genus: 2, seed: 7, curvature: Curvature::MinusOne, cutoff: 5, cases: 10, rank: 2, samples: 16 }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }
}

fn check(out: &mut Vec<Check>, module: &'static str, name: &'static str, residual: f64, tolerance: f64) {
    out.push(Check { module, name, residual, tolerance });
}

fn rand_c<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)
}

/// Random interior point of the cell, by rejection in its chart disk.
pub fn random_cell_point<R: Rng + ?Sized>(cell: &DirichletCell, rng: &mut R) -> Complex64 {
    let r = cell.chart_radius();
    loop {
        let z = Complex64::new((rng.random::<f64>() * 2.0 - 1.0) * r, (rng.random::<f64>() * 2.0 - 1.0) * r);
        if cell.contains(z) {
            return z;
        }
    }
}

/// One or two bump terms near the cell, radii in `[0.3, 0.9)` (scaled to
/// the curvature's length unit).
pub fn random_packet<R: Rng + ?Sized>(t: &Tiling, rng: &mut R) -> Result<WavePacket<f64>> {
    let s = t.group.curvature.length_scale::<f64>();
    let count = rng.random_range(1..=2);
    let mut terms = Vec::with_capacity(count);
    for k in 0..count {
        let mut c = random_cell_point(&t.cell, rng);
        if k == 1 {
            let g = random_element(t.group.genus, 1, rng)?;
            c = t.group.element(&g).apply_raw(c);
        }
        let coefficient = Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0);
        terms.push(PacketTerm { center: c, coefficient, radius: s * (0.3 + 0.6 * rng.random::<f64>()) });
    }
    WavePacket::new(terms, t.group.curvature)
}

/// Point near the first term's center, well inside its support.
pub fn point_in_support<R: Rng + ?Sized>(psi: &WavePacket<f64>, rng: &mut R) -> Complex64 {
    let c = psi.terms[0].center;
    let r = 0.1 * (1.0 - c.norm_sqr()) * psi.terms[0].radius / psi.curvature.length_scale::<f64>();
    c + Complex64::from_polar(r * rng.random::<f64>(), rng.random::<f64>() * std::f64::consts::TAU)
}

fn random_gamma_fn<R: Rng>(genus: usize, rng: &mut R) -> Result<GammaFunction> {
    let mut terms = Vec::new();
    for _ in 0..4 {
        let len = rng.random_range(0..=3);
        terms.push((random_element(genus, len, rng)?, rand_c(rng)));
    }
    GammaFunction::from_terms(genus, terms)
}

pub fn run_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let g = cfg.genus;
    let mut rng = stream(cfg.seed, Stream::Verify, 0, 0);
    let mut out = Vec::new();
    let opts = SamplerOptions::default();

    // surface_group
    let sg = SurfaceGroup::new(g)?;
    let relator = GroupElement::from_letters(g, &GroupElement::relator_word(g))?;
    check(&mut out, "surface_group", "relator_is_identity", relator.len() as f64, 0.0);
    let sizes: Vec<usize> = (0..=2).map(|r| sg.ball(r).map(|b| b.len())).collect::<Result<_>>()?;
    let expect = [1, 1 + 4 * g, 1 + 4 * g + 4 * g * (4 * g - 1)];
    let dev = sizes.iter().zip(expect).map(|(a, b)| a.abs_diff(b)).sum::<usize>();
    check(&mut out, "surface_group", "ball_sizes_r2", dev as f64, 0.0);
    let mut bad = 0usize;
    for _ in 0..cfg.cases * 5 {
        let (x, y, z) = (random_element(g, 5, &mut rng)?, random_element(g, 5, &mut rng)?, random_element(g, 5, &mut rng)?);
        if x.compose(&y)?.compose(&z)? != x.compose(&y.compose(&z)?)? || !x.compose(&x.invert())?.is_identity() {
            bad += 1;
        }
    }
    check(&mut out, "surface_group", "associativity_and_inverse", bad as f64, 0.0);

    // rep_variety
    let rho = sample_unitary(g, cfg.rank, cfg.seed, &opts)?;
    let ures = rho.images().iter().map(unitarity_residual).fold(0.0, f64::max);
    check(&mut out, "rep_variety", "unitarity_residual", ures, 1e-12);
    check(&mut out, "rep_variety", "relator_residual", rho.relator_residual, opts.tol);
    let u = haar_unitary(cfg.rank, &mut rng);
    let conj = rho.conjugate(&u)?;
    let mut dev: f64 = 0.0;
    for _ in 0..cfg.cases {
        let w = random_element(g, 6, &mut rng)?;
        dev = dev.max((conj.character(&w) - rho.character(&w)).norm());
    }
    check(&mut out, "rep_variety", "character_conjugation_invariance", dev, 1e-12);
    let ens = ensemble(g, cfg.rank, cfg.samples, cfg.seed, &opts)?;
    let e = expectation_from(&ens, &sg.identity())?;
    check(&mut out, "rep_variety", "expectation_identity_is_one", (e.value - 1.0).norm(), 0.0);
    let a1 = parse_element(g, "a1")?;
    let v = expectation_from(&ens, &a1)?;
    check(&mut out, "rep_variety", "expectation_outside_commutator_zero", v.value.norm() + v.stderr, 0.0);

    // bloch_abstract
    let (mut eq, mut cv, mut gi) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..cfg.cases {
        let psi = random_gamma_fn(g, &mut rng)?;
        let phi = random_gamma_fn(g, &mut rng)?;
        let gam = random_element(g, 3, &mut rng)?;
        let bpsi = transform(&psi, &rho)?;
        let scale = 1.0 + bpsi.hs_norm();
        let lhs = transform(&psi.translate(&gam)?, &rho)?;
        eq = eq.max(frobenius(&(lhs.matrix - hat_translate(&bpsi, &gam)?.matrix)) / scale);
        let bphi = transform(&phi, &rho)?;
        let conv = transform(&psi.convolve(&phi)?, &rho)?;
        let prod = &bpsi.matrix * &bphi.matrix;
        cv = cv.max(frobenius(&(conv.matrix - &prod)) / (1.0 + frobenius(&prod)));
        let bc = transform(&psi, &conj)?;
        let rot = &u * &bpsi.matrix * u.adjoint();
        gi = gi.max(frobenius(&(bc.matrix - rot)) / scale);
    }
    check(&mut out, "bloch_abstract", "equivariance", eq, 1e-12);
    check(&mut out, "bloch_abstract", "convolution_theorem", cv, 1e-12);
    check(&mut out, "bloch_abstract", "gauge_covariance", gi, 1e-12);
    let h = PeriodicOperator::adjacency(g)?;
    let mut bd: f64 = 0.0;
    for k in 0..cfg.cases {
        let lam = sample_jacobian(g, cfg.seed.wrapping_add(k as u64));
        let band = band_spectrum(&h, &lam.to_rep())?[0];
        let exact: f64 = lam.phases().iter().map(|t| 2.0 * t.cos()).sum();
        bd = bd.max((band - exact).abs());
    }
    check(&mut out, "bloch_abstract", "rank1_band_function", bd, 1e-12);
    let spec = band_spectrum(&h, &rho)?;
    let over = spec.iter().map(|x| (x.abs() - 4.0 * g as f64).max(0.0)).fold(0.0, f64::max);
    check(&mut out, "bloch_abstract", "spectrum_within_l1_bound", over, 1e-10);

    // hyperbolic_plane
    let grp = construct_group(g, cfg.curvature)?;
    check(&mut out, "hyperbolic_plane", "relator_residual", grp.relator_residual(), 1e-10);
    let cell = dirichlet_cell(&grp, 3)?;
    check(&mut out, "hyperbolic_plane", "face_count", (cell.faces.len() as f64 - 4.0 * g as f64).abs(), 0.0);
    let mut di: f64 = 0.0;
    for _ in 0..cfg.cases {
        let z1 = random_cell_point(&cell, &mut rng);
        let z2 = random_cell_point(&cell, &mut rng);
        let m = Mobius::rotation(rng.random::<f64>() * 6.0).compose(&Mobius::translation(rng.random::<f64>() * 2.0));
        let d0 = distance_raw(z1, z2, cfg.curvature);
        di = di.max((distance_raw(m.apply_raw(z1), m.apply_raw(z2), cfg.curvature) - d0).abs());
    }
    check(&mut out, "hyperbolic_plane", "distance_mobius_invariance", di, 1e-12);
    let quad = cell.quadrature(0.02 * cell.chart_radius())?;
    let area = cfg.curvature.surface_area(g);
    check(&mut out, "hyperbolic_plane", "quadrature_area_rel_err", (quad.total_weight() - area).abs() / area, 0.05);

    // bloch_hyperbolic
    let tiling = Tiling::new(grp.clone(), cell.clone(), cfg.cutoff)?;
    let frame = GaugeFrame { rep: &rho, tiling: &tiling };
    let (mut qp, mut per, mut hol) = (0.0f64, 0.0f64, 0.0f64);
    let coarse = cell.quadrature(0.1 * cell.chart_radius())?;
    for _ in 0..cfg.cases {
        let psi = random_packet(&tiling, &mut rng)?;
        let gam = random_element(g, 1, &mut rng)?;
        let x = point_in_support(&psi, &mut rng);
        let scale = 1.0 + frobenius(&transform_extended(&psi, &frame, x)?);
        qp = qp.max(quasi_periodicity_residual(&psi, &frame, &gam, x)? / scale);
        let moved = grp.element(&gam).apply_raw(x);
        let n0 = frobenius(&transform_extended(&psi, &frame, x)?);
        per = per.max((frobenius(&transform_extended(&psi, &frame, moved)?) - n0).abs() / scale);
        hol = hol.max(holonomy_intertwiner_residual(&psi, &frame, &gam, &coarse)?);
    }
    check(&mut out, "bloch_hyperbolic", "quasi_periodicity", qp, 1e-10);
    check(&mut out, "bloch_hyperbolic", "norm_periodicity", per, 1e-12);
    check(&mut out, "bloch_hyperbolic", "holonomy_intertwiner", hol, 1e-10);

    // magnetic_twist
    let unit = 2.0 * std::f64::consts::PI / area;
    let mut fl: f64 = 0.0;
    for k in 0..=3 {
        let f = flux(&uniform_potential(unit * k as f64, cfg.curvature), &cell);
        fl = fl.max((f - k as f64).abs() / (1.0 + k as f64));
    }
    check(&mut out, "magnetic_twist", "flux_integrality", fl, 1e-6);
    let aut = Automorphy::new(uniform_potential(unit, cfg.curvature), &grp, &cell)?;
    let mut co: f64 = 0.0;
    for _ in 0..cfg.cases {
        let g1 = random_element(g, 2, &mut rng)?;
        let g2 = random_element(g, 2, &mut rng)?;
        let x = random_cell_point(&cell, &mut rng);
        let lhs = aut.eval(&g1.compose(&g2)?, x);
        let rhs = aut.eval(&g1, grp.element(&g2).apply_raw(x)) * aut.eval(&g2, x);
        co = co.max((lhs - rhs).norm());
    }
    check(&mut out, "magnetic_twist", "cocycle_identity", co, 1e-8);
    let psi = random_packet(&tiling, &mut rng)?;
    let y = random_cell_point(&cell, &mut rng);
    let tw = twisted_transform(&psi, &frame, &uniform_potential(0.0, cfg.curvature), y)?;
    let un = Transformer::new(&psi, &frame)?.at(y)?;
    check(&mut out, "magnetic_twist", "zero_field_reduction", frobenius(&(tw - un)), 0.0);

    Ok(out)
}

pub fn format_table(checks: &[Check]) -> String {
    let mut s = format!("{:<18} {:<38} {:>12} {:>10}  result\n", "module", "check", "residual", "tol");
    for c in checks {
        s.push_str(&format!(
            "{:<18} {:<38} {:>12.3e} {:>10.1e}  {}\n",
            c.module,
            c.name,
            c.residual,
            c.tolerance,
            if c.passed() { "pass" } else { "FAIL" }
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let checks = run_suite(&VerifyConfig { cases: 3, ..Default::default() }).unwrap();
        let table = format_table(&checks);
        println!("{table}");
        assert!(checks.iter().all(|c| c.passed()), "{table}");
    }
}
