//! Poincaré disk geometry: the SU(1,1) action, distances, a Fuchsian
//! realization of the surface group, its Dirichlet cell and quadrature.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_complex::{Complex, Complex64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{word_string, GroupElement, SurfaceGroup};
use crate::scalar::Real;

/// Metric normalization. `MinusOne` is `4|dz|²/(1−|z|²)²`, `MinusFour` is
/// `|dz|²/(1−|z|²)²`, the one behind the chart Laplacian `−(1−|z|²)²Δ₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Curvature {
    #[default]
    MinusOne,
    MinusFour,
}

impl Curvature {
    pub fn from_value(k: i32) -> Result<Self> {
        match k {
            -1 => Ok(Curvature::MinusOne),
            -4 => Ok(Curvature::MinusFour),
            _ => Err(Error::InvalidArgument(format!("curvature must be -1 or -4, got {k}"))),
        }
    }

    pub fn value(self) -> i32 {
        match self {
            Curvature::MinusOne => -1,
            Curvature::MinusFour => -4,
        }
    }

    /// Distance relative to the curvature −1 distance.
    pub fn length_scale<T: Real>(self) -> T {
        match self {
            Curvature::MinusOne => T::one(),
            Curvature::MinusFour => T::lit(0.5),
        }
    }

    /// Area density at `z` with respect to `dx dy`.
    pub fn density<T: Real>(self, z: Complex<T>) -> T {
        let s = T::one() - z.norm_sqr();
        let k = match self {
            Curvature::MinusOne => T::lit(4.0),
            Curvature::MinusFour => T::one(),
        };
        k / (s * s)
    }

    /// Prefactor `s` in `Δ = −s(1−|z|²)²(∂₁²+∂₂²)`.
    pub fn laplacian_scale<T: Real>(self) -> T {
        match self {
            Curvature::MinusOne => T::lit(0.25),
            Curvature::MinusFour => T::one(),
        }
    }

    /// Area of the closed genus `g` surface (Gauss–Bonnet).
    pub fn surface_area(self, genus: usize) -> f64 {
        let a = 4.0 * std::f64::consts::PI * (genus as f64 - 1.0);
        match self {
            Curvature::MinusOne => a,
            Curvature::MinusFour => a / 4.0,
        }
    }
}

/// Margin kept from the ideal boundary.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint<T: Real> {
    z: Complex<T>,
}

impl<T: Real> DiskPoint<T> {
    pub fn new(z: Complex<T>) -> Result<Self> {
        let r = z.norm();
        if !(r < T::one()) || r > T::one() - T::lit(BOUNDARY_MARGIN) {
            return Err(Error::OutsideDisk(format!("{z}")));
        }
        Ok(DiskPoint { z })
    }

    pub fn from_xy(x: T, y: T) -> Result<Self> {
        Self::new(Complex::new(x, y))
    }

    pub fn origin() -> Self {
        DiskPoint { z: Complex::new(T::zero(), T::zero()) }
    }

    pub fn z(self) -> Complex<T> {
        self.z
    }
}

/// `z ↦ (az+b)/(b̄z+ā)` with `|a|²−|b|² = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius<T: Real> {
    pub a: Complex<T>,
    pub b: Complex<T>,
}

fn unit_tol<T: Real>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(100.0))
}

impl<T: Real> Mobius<T> {
    pub fn new(a: Complex<T>, b: Complex<T>) -> Result<Self> {
        let det = a.norm_sqr() - b.norm_sqr();
        if (det - T::one()).abs() > unit_tol::<T>() {
            return Err(Error::InvalidArgument(format!("|a|²−|b|² = {det}, expected 1")));
        }
        Ok(Mobius { a, b })
    }

    pub fn identity() -> Self {
        Mobius { a: Complex::new(T::one(), T::zero()), b: Complex::new(T::zero(), T::zero()) }
    }

    /// Rotation by `φ` about the origin.
    pub fn rotation(phi: T) -> Self {
        let h = phi * T::lit(0.5);
        Mobius { a: Complex::new(h.cos(), h.sin()), b: Complex::new(T::zero(), T::zero()) }
    }

    /// Translation along the real diameter by curvature −1 length `t`.
    pub fn translation(t: T) -> Self {
        let h = t * T::lit(0.5);
        Mobius { a: Complex::new(h.cosh(), T::zero()), b: Complex::new(h.sinh(), T::zero()) }
    }

    /// Product `self ∘ other`, renormalized onto `|a|²−|b|² = 1`.
    pub fn compose(&self, o: &Self) -> Self {
        let a = self.a * o.a + self.b * o.b.conj();
        let b = self.a * o.b + self.b * o.a.conj();
        let s = (a.norm_sqr() - b.norm_sqr()).sqrt();
        Mobius { a: a / s, b: b / s }
    }

    pub fn inverse(&self) -> Self {
        Mobius { a: self.a.conj(), b: -self.b }
    }

    pub fn apply_raw(&self, z: Complex<T>) -> Complex<T> {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    pub fn apply(&self, z: DiskPoint<T>) -> Result<DiskPoint<T>> {
        DiskPoint::new(self.apply_raw(z.z))
    }

    /// Complex derivative `1/(b̄z+ā)²`.
    pub fn derivative(&self, z: Complex<T>) -> Complex<T> {
        let d = self.b.conj() * z + self.a.conj();
        (d * d).inv()
    }

    pub fn trace(&self) -> T {
        T::lit(2.0) * self.a.re
    }

    /// Curvature −1 translation length `2 arccosh(|tr|/2)`.
    pub fn translation_length(&self) -> T {
        T::lit(2.0) * (self.trace().abs() * T::lit(0.5)).max(T::one()).acosh()
    }

    /// Frobenius distance between the SU(1,1) matrices, minimized over sign.
    pub fn projective_distance(&self, o: &Self) -> T {
        let d = |s: T| {
            let da = self.a - o.a * s;
            let db = self.b - o.b * s;
            (T::lit(2.0) * (da.norm_sqr() + db.norm_sqr())).sqrt()
        };
        d(T::one()).min(d(-T::one()))
    }

    pub fn cast<U: Real>(&self) -> Mobius<U> {
        let c = |z: Complex<T>| Complex::new(U::lit(z.re.to_f64()), U::lit(z.im.to_f64()));
        Mobius { a: c(self.a), b: c(self.b) }
    }
}

/// Hyperbolic distance in the chosen normalization. Uses
/// `sinh(d/2) = |z1−z2| / √((1−|z1|²)(1−|z2|²))` at curvature −1.
pub fn distance<T: Real>(z1: DiskPoint<T>, z2: DiskPoint<T>, curvature: Curvature) -> T {
    distance_raw(z1.z, z2.z, curvature)
}

pub fn distance_raw<T: Real>(z1: Complex<T>, z2: Complex<T>, curvature: Curvature) -> T {
    let one = T::one();
    let r1 = z1.norm();
    let r2 = z2.norm();
    let den = ((one - r1) * (one + r1) * (one - r2) * (one + r2)).sqrt();
    T::lit(2.0) * ((z1 - z2).norm() / den).asinh() * curvature.length_scale::<T>()
}

/// Point of the hyperboloid `−x₀² + x₁² + x₂² = −1` for a disk point.
pub fn to_hyperboloid(z: Complex64) -> [f64; 3] {
    let s = 1.0 - z.norm_sqr();
    [(1.0 + z.norm_sqr()) / s, 2.0 * z.re / s, 2.0 * z.im / s]
}

pub fn from_hyperboloid(x: [f64; 3]) -> Complex64 {
    Complex64::new(x[1], x[2]) / (1.0 + x[0])
}

fn mink(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

/// A realization `Γ → PSU(1,1)` by side pairings of the regular `4g`-gon.
#[derive(Clone, Debug)]
pub struct FuchsianGroup {
    pub genus: usize,
    pub generators: Vec<Mobius<f64>>,
    pub base_point: Complex64,
    pub curvature: Curvature,
}

impl FuchsianGroup {
    /// Image of a group element, multiplied along its word.
    pub fn element(&self, gamma: &GroupElement) -> Mobius<f64> {
        let mut m = Mobius::identity();
        for l in gamma.letters() {
            let g = &self.generators[l.slot()];
            m = m.compose(&if l.is_inverse() { g.inverse() } else { *g });
        }
        m
    }

    /// `‖R − ±I‖` for the raw relator word (its canonical form is empty).
    pub fn relator_residual(&self) -> f64 {
        let mut m = Mobius::identity();
        for l in GroupElement::relator_word(self.genus) {
            let g = &self.generators[l.slot()];
            m = m.compose(&if l.is_inverse() { g.inverse() } else { *g });
        }
        m.projective_distance(&Mobius::identity())
    }

    pub fn orbit_point(&self, gamma: &GroupElement) -> Complex64 {
        self.element(gamma).apply_raw(self.base_point)
    }

    pub fn distance(&self, z1: Complex64, z2: Complex64) -> f64 {
        distance_raw(z1, z2, self.curvature)
    }
}

fn side_pairing(n: usize, from: usize, to: usize, inradius: f64) -> Mobius<f64> {
    let phi = |j: usize| std::f64::consts::TAU * j as f64 / n as f64;
    Mobius::rotation(phi(to))
        .compose(&Mobius::translation(2.0 * inradius))
        .compose(&Mobius::rotation(std::f64::consts::PI - phi(from)))
}

/// Side pairings of the regular `4g`-gon with interior angles `2π/4g`,
/// centered at 0, with the side pattern `a_i b_i a_i⁻¹ b_i⁻¹`. Orientations
/// are chosen so the standard relator holds projectively.
pub fn construct_group(genus: usize, curvature: Curvature) -> Result<FuchsianGroup> {
    SurfaceGroup::new(genus)?;
    if genus > 8 {
        return Err(Error::UnsupportedGenus(genus));
    }
    let n = 4 * genus;
    let pi_n = std::f64::consts::PI / n as f64;
    let inradius = (pi_n.cos() / pi_n.sin()).acosh();
    let base: Vec<Mobius<f64>> = (0..genus)
        .flat_map(|i| [side_pairing(n, 4 * i + 2, 4 * i, inradius), side_pairing(n, 4 * i + 3, 4 * i + 1, inradius)])
        .collect();
    let mut best: Option<(f64, FuchsianGroup)> = None;
    for mask in 0u32..(1 << (2 * genus)) {
        let mut gens = vec![Mobius::identity(); 2 * genus];
        for i in 0..genus {
            for (k, slot) in [(2 * i, i), (2 * i + 1, genus + i)] {
                let m = base[k];
                gens[slot] = if mask >> k & 1 == 1 { m.inverse() } else { m };
            }
        }
        let g = FuchsianGroup { genus, generators: gens, base_point: Complex64::new(0.0, 0.0), curvature };
        let r = g.relator_residual();
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, g));
        }
    }
    let (r, g) = best.expect("at least one orientation");
    if r > 1e-10 {
        return Err(Error::InvalidArgument(format!("no orientation satisfies the relator (residual {r:.2e})")));
    }
    Ok(g)
}

/// A Dirichlet face: the bisector between `x0` and `γ x0`.
#[derive(Clone, Debug)]
pub struct Face {
    pub word: GroupElement,
    pub map: Mobius<f64>,
    /// `V = γx0 − x0` on the hyperboloid; the cell is `⟨X, V⟩ < 0`.
    pub normal: [f64; 3],
}

/// Wigner–Seitz cell of the base point, given by its face inequalities.
#[derive(Clone, Debug)]
pub struct DirichletCell {
    pub genus: usize,
    pub curvature: Curvature,
    pub center: Complex64,
    pub cutoff: usize,
    pub faces: Vec<Face>,
    pub vertices: Vec<Complex64>,
    /// Largest distance from the center to a vertex, in the cell's curvature.
    pub circumradius: f64,
}

/// Quadrature nodes strictly inside the cell with area weights.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub h: f64,
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

const FACE_TOL: f64 = 1e-9;

struct Candidate {
    word: GroupElement,
    map: Mobius<f64>,
    normal: [f64; 3],
}

/// Faces supported by the candidates, with their vertex endpoints.
fn supported_faces(p: &[f64; 3], cands: &[Candidate]) -> (Vec<usize>, Vec<[f64; 3]>) {
    let results: Vec<Option<(usize, [[f64; 3]; 2])>> = (0..cands.len())
        .into_par_iter()
        .map(|i| {
            let v = &cands[i].normal;
            let q = [p[0] + v[0], p[1] + v[1], p[2] + v[2]];
            let mid_raw = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
            let mn = (-mink(&mid_raw, &mid_raw)).sqrt();
            let m = [mid_raw[0] / mn, mid_raw[1] / mn, mid_raw[2] / mn];
            // Lorentz cross product J(m × v) is orthogonal to both m and v
            let c = [m[1] * v[2] - m[2] * v[1], m[2] * v[0] - m[0] * v[2], m[0] * v[1] - m[1] * v[0]];
            let w_raw = [-c[0], c[1], c[2]];
            let wn = mink(&w_raw, &w_raw).sqrt();
            let w = [w_raw[0] / wn, w_raw[1] / wn, w_raw[2] / wn];
            let (mut lo, mut hi) = (-1.0f64, 1.0f64);
            for (j, c) in cands.iter().enumerate() {
                if j == i {
                    continue;
                }
                let a = mink(&m, &c.normal);
                let b = mink(&w, &c.normal);
                // a + b·u < 0 for u = tanh t
                if b.abs() < 1e-300 {
                    if a >= 0.0 {
                        return None;
                    }
                } else if b > 0.0 {
                    hi = hi.min(-a / b);
                } else {
                    lo = lo.max(-a / b);
                }
                if hi - lo <= FACE_TOL {
                    return None;
                }
            }
            if lo <= -1.0 + FACE_TOL || hi >= 1.0 - FACE_TOL {
                // a face running to the ideal boundary means the cell is unbounded
                return None;
            }
            let pt = |u: f64| {
                let t = u.atanh();
                [t.cosh() * m[0] + t.sinh() * w[0], t.cosh() * m[1] + t.sinh() * w[1], t.cosh() * m[2] + t.sinh() * w[2]]
            };
            Some((i, [pt(lo), pt(hi)]))
        })
        .collect();
    let mut faces = Vec::new();
    let mut verts = Vec::new();
    for (i, ends) in results.into_iter().flatten() {
        faces.push(i);
        verts.extend(ends);
    }
    (faces, verts)
}

fn candidates(group: &FuchsianGroup, radius: usize) -> Result<Vec<Candidate>> {
    let p = to_hyperboloid(group.base_point);
    let ball = SurfaceGroup::new(group.genus)?.ball(radius)?;
    Ok(ball
        .into_iter()
        .filter(|g| !g.is_identity())
        .map(|word| {
            let map = group.element(&word);
            let q = to_hyperboloid(map.apply_raw(group.base_point));
            Candidate { word, map, normal: [q[0] - p[0], q[1] - p[1], q[2] - p[2]] }
        })
        .collect())
}

/// The Dirichlet cell of `group.base_point` from the candidates in
/// `ball(cutoff)`. The face set is recomputed at `cutoff + 1` and must agree.
pub fn dirichlet_cell(group: &FuchsianGroup, cutoff: usize) -> Result<DirichletCell> {
    let p = to_hyperboloid(group.base_point);
    let c1 = candidates(group, cutoff)?;
    let (f1, v1) = supported_faces(&p, &c1);
    let c2 = candidates(group, cutoff + 1)?;
    let (f2, _) = supported_faces(&p, &c2);
    let w1: BTreeSet<&GroupElement> = f1.iter().map(|&i| &c1[i].word).collect();
    let w2: BTreeSet<&GroupElement> = f2.iter().map(|&i| &c2[i].word).collect();
    if f1.is_empty() || w1 != w2 {
        return Err(Error::CutoffTooSmall(cutoff));
    }
    let mut vertices: Vec<Complex64> = Vec::new();
    for v in v1 {
        let z = from_hyperboloid(v);
        if !vertices.iter().any(|w| (w - z).norm() < 1e-9) {
            vertices.push(z);
        }
    }
    vertices.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    let circumradius =
        vertices.iter().map(|&v| distance_raw(group.base_point, v, group.curvature)).fold(0.0, f64::max);
    let mut faces: Vec<Face> = f1
        .into_iter()
        .map(|i| Face { word: c1[i].word.clone(), map: c1[i].map, normal: c1[i].normal })
        .collect();
    faces.sort_by(|a, b| a.word.cmp(&b.word));
    Ok(DirichletCell {
        genus: group.genus,
        curvature: group.curvature,
        center: group.base_point,
        cutoff,
        faces,
        vertices,
        circumradius,
    })
}

impl DirichletCell {
    pub fn neighbor_words(&self) -> Vec<GroupElement> {
        self.faces.iter().map(|f| f.word.clone()).collect()
    }

    /// Largest `⟨X, V_γ⟩` over the faces; negative exactly inside the cell.
    pub fn violation(&self, z: Complex64) -> f64 {
        let x = to_hyperboloid(z);
        self.faces.iter().map(|f| mink(&x, &f.normal)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Strict Dirichlet inequality against every face.
    pub fn contains(&self, z: Complex64) -> bool {
        z.norm() < 1.0 && self.violation(z) < 0.0
    }

    pub fn contains_closed(&self, z: Complex64, tol: f64) -> bool {
        z.norm() < 1.0 && self.violation(z) <= tol
    }

    /// Euclidean radius of a chart disk containing the cell.
    pub fn chart_radius(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Midpoint grid `((i+½)h, (j+½)h)` restricted to the open cell, with
    /// weights `h²·density`.
    pub fn quadrature(&self, h: f64) -> Result<Quadrature> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidArgument(format!("quadrature step must be positive, got {h}")));
        }
        let r = self.chart_radius().min(1.0);
        let lo = (-r / h - 1.0).floor() as i64;
        let hi = (r / h).ceil() as i64;
        let rows: Vec<Vec<(Complex64, f64)>> = (lo..=hi)
            .into_par_iter()
            .map(|j| {
                let y = (j as f64 + 0.5) * h;
                (lo..=hi)
                    .filter_map(|i| {
                        let z = Complex64::new((i as f64 + 0.5) * h, y);
                        self.contains(z).then(|| (z, h * h * self.curvature.density(z)))
                    })
                    .collect()
            })
            .collect();
        let (nodes, weights): (Vec<Complex64>, Vec<f64>) = rows.into_iter().flatten().unzip();
        if nodes.is_empty() {
            return Err(Error::EmptyQuadrature);
        }
        Ok(Quadrature { h, nodes, weights })
    }

    /// Finds `γ` with `γ⁻¹z` in the closed cell. Among several admissible
    /// elements (boundary points) the shortlex-least is returned.
    pub fn unfold(&self, z: Complex64, cutoff: usize) -> Result<(GroupElement, Complex64)> {
        if !(z.norm() < 1.0) {
            return Err(Error::OutsideDisk(format!("{z}")));
        }
        let mut gamma = GroupElement::identity(self.genus);
        let mut w = z;
        for _ in 0..(50 * (cutoff + 2)) {
            let x = to_hyperboloid(w);
            let (k, v) = self
                .faces
                .iter()
                .enumerate()
                .map(|(k, f)| (k, mink(&x, &f.normal)))
                .fold((usize::MAX, 0.0), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
            if k == usize::MAX || v <= UNFOLD_TIE * x[0] {
                break;
            }
            let f = &self.faces[k];
            w = f.map.inverse().apply_raw(w);
            gamma = gamma.compose(&f.word)?;
            if gamma.len() > cutoff + 8 {
                return Err(Error::UnfoldFailed(cutoff));
            }
        }
        if !self.contains_closed(w, UNFOLD_TIE * to_hyperboloid(w)[0]) {
            return Err(Error::UnfoldFailed(cutoff));
        }
        // boundary ties: walk across every face the point lies on
        let mut seen: HashMap<GroupElement, Complex64> = HashMap::new();
        let mut stack = vec![(gamma, w)];
        while let Some((g, p)) = stack.pop() {
            if seen.contains_key(&g) {
                continue;
            }
            let x = to_hyperboloid(p);
            for f in &self.faces {
                if mink(&x, &f.normal).abs() <= UNFOLD_TIE * x[0] {
                    stack.push((g.compose(&f.word)?, f.map.inverse().apply_raw(p)));
                }
            }
            seen.insert(g, p);
        }
        let (g, p) = seen.into_iter().min_by(|a, b| a.0.cmp(&b.0)).expect("non-empty");
        if g.len() > cutoff {
            return Err(Error::UnfoldFailed(cutoff));
        }
        Ok((g, p))
    }

    pub fn to_export(&self, quad: Option<&Quadrature>) -> CellExport {
        CellExport {
            genus: self.genus,
            curvature: self.curvature.value(),
            x0: [self.center.re, self.center.im],
            neighbors: self.faces.iter().map(|f| word_string(&f.word)).collect(),
            nodes: quad
                .map(|q| q.nodes.iter().zip(&q.weights).map(|(z, w)| [z.re, z.im, *w]).collect())
                .unwrap_or_default(),
        }
    }

    /// Static SVG of the cell boundary and, optionally, its first shell of
    /// neighbor tiles.
    pub fn svg(&self, with_shell: bool) -> String {
        let size = 600.0;
        let px = |z: Complex64| ((z.re + 1.0) * size / 2.0, (1.0 - z.im) * size / 2.0);
        let mut out = String::new();
        writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">"#).unwrap();
        writeln!(out, r#"<circle cx="300" cy="300" r="300" fill="none" stroke="black"/>"#).unwrap();
        let mut tiles = vec![(Mobius::identity(), "black")];
        if with_shell {
            tiles.extend(self.faces.iter().map(|f| (f.map, "gray")));
        }
        for (m, color) in tiles {
            let mut d = String::new();
            let nv = self.vertices.len();
            for k in 0..nv {
                let (p, q) = (self.vertices[k], self.vertices[(k + 1) % nv]);
                for s in 0..=16 {
                    let z = m.apply_raw(geodesic_point(p, q, s as f64 / 16.0));
                    let (x, y) = px(z);
                    let cmd = if k == 0 && s == 0 { 'M' } else { 'L' };
                    write!(d, "{cmd}{x:.2},{y:.2} ").unwrap();
                }
            }
            writeln!(out, r#"<path d="{d}Z" fill="none" stroke="{color}"/>"#).unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}

const UNFOLD_TIE: f64 = 1e-11;

/// Point at fraction `s` along the geodesic from `p` to `q`.
pub fn geodesic_point(p: Complex64, q: Complex64, s: f64) -> Complex64 {
    let to0 = Mobius { a: Complex64::new(1.0, 0.0), b: -p };
    let scale = (1.0 - p.norm_sqr()).sqrt();
    let to0 = Mobius { a: to0.a / scale, b: to0.b / scale };
    let q0 = to0.apply_raw(q);
    let d = 2.0 * q0.norm().atanh();
    let r = (s * d / 2.0).tanh();
    let z = if q0.norm() > 0.0 { q0 / q0.norm() * r } else { q0 };
    to0.inverse().apply_raw(z)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CellExport {
    pub genus: usize,
    pub curvature: i32,
    pub x0: [f64; 2],
    pub neighbors: Vec<String>,
    pub nodes: Vec<[f64; 3]>,
}
