//! Independent oracles shared by the integration tests. Nothing here calls
//! the engine's canonical forms, tilings or eigensolvers.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use hyperbloch::group::{GroupElement, Letter};
use hyperbloch::hyperbolic::FuchsianGroup;
use hyperbloch::linalg::CMat;
use hyperbloch::packet::WavePacket;
use hyperbloch::rep_variety::UnitaryRep;
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------- words as signed integers: ±1..±2g, 1..g = a_i, g+1..2g = b_i

pub fn relator(genus: usize) -> Vec<i32> {
    let g = genus as i32;
    (1..=g).flat_map(|i| [i, g + i, -i, -(g + i)]).collect()
}

pub fn inv(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|x| -x).collect()
}

pub fn free_reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub struct Dehn {
    rels: Vec<Vec<i32>>,
}

impl Dehn {
    pub fn new(genus: usize) -> Self {
        let r = relator(genus);
        let mut rels = Vec::new();
        for base in [r.clone(), inv(&r)] {
            for k in 0..base.len() {
                let mut w = base[k..].to_vec();
                w.extend_from_slice(&base[..k]);
                rels.push(w);
            }
        }
        Dehn { rels }
    }

    /// Dehn's algorithm: replace any subword longer than half a relator.
    pub fn trivial(&self, w: &[i32]) -> bool {
        let mut w = free_reduce(w);
        let half = self.rels[0].len() / 2;
        'outer: loop {
            if w.is_empty() {
                return true;
            }
            for i in 0..w.len() {
                for r in &self.rels {
                    let k = w[i..].iter().zip(r).take_while(|(a, b)| a == b).count();
                    if k > half {
                        let mut next = w[..i].to_vec();
                        next.extend(inv(&r[k..]));
                        next.extend_from_slice(&w[i + k..]);
                        w = free_reduce(&next);
                        continue 'outer;
                    }
                }
            }
            return false;
        }
    }
}

pub fn to_letters(genus: usize, w: &[i32]) -> Vec<Letter> {
    w.iter().map(|&x| Letter::new(x.unsigned_abs() as usize, x < 0, genus).unwrap()).collect()
}

pub fn word_of(g: &GroupElement) -> Vec<i32> {
    g.letters()
        .iter()
        .map(|l| {
            let k = l.generator_index() as i32;
            if l.is_inverse() {
                -k
            } else {
                k
            }
        })
        .collect()
}

pub fn elem(genus: usize, w: &[i32]) -> GroupElement {
    GroupElement::from_letters(genus, &to_letters(genus, w)).unwrap()
}

/// Exponent sums per generator.
pub fn exponent_sums(genus: usize, w: &[i32]) -> Vec<i64> {
    let mut v = vec![0i64; 2 * genus];
    for &x in w {
        v[x.unsigned_abs() as usize - 1] += x.signum() as i64;
    }
    v
}

/// `ρ` multiplied letter by letter from the generator images.
pub fn rho_word(rep: &UnitaryRep, w: &[i32]) -> CMat {
    let n = rep.rank();
    let mut m = CMat::identity(n, n);
    for &x in w {
        let u = &rep.images()[x.unsigned_abs() as usize - 1];
        m = if x > 0 { m * u } else { m * u.adjoint() };
    }
    m
}

pub fn all_words(genus: usize, max_len: usize) -> Vec<Vec<i32>> {
    let letters: Vec<i32> = (1..=2 * genus as i32).flat_map(|k| [k, -k]).collect();
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for &l in &letters {
                let mut v: Vec<i32> = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

// ---------- Hermitian eigenvalues by cyclic Jacobi on the real embedding

pub fn jacobi_eigenvalues(h: &CMat) -> Vec<f64> {
    let n = h.nrows();
    let m = 2 * n;
    let mut a = vec![vec![0.0f64; m]; m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[i][j] = z.re;
            a[i + n][j + n] = z.re;
            a[i][j + n] = -z.im;
            a[i + n][j] = z.im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..m {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..m {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..m).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    // each eigenvalue of h appears twice in the embedding
    ev.into_iter().step_by(2).collect()
}

// ---------- disk geometry with plain 2×2 matrices

pub type M2 = [[Complex64; 2]; 2];

pub fn m2_identity() -> M2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

pub fn m2_mul(x: &M2, y: &M2) -> M2 {
    let mut r = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    r
}

pub fn m2_apply(m: &M2, z: Complex64) -> Complex64 {
    (m[0][0] * z + m[0][1]) / (m[1][0] * z + m[1][1])
}

/// Generator matrices `[[a, b], [b̄, ā]]` and their inverses `[[ā, −b], [−b̄, a]]`.
pub fn generator_matrix(grp: &FuchsianGroup, x: i32) -> M2 {
    let m = grp.generators[x.unsigned_abs() as usize - 1];
    let (a, b) = (m.a, m.b);
    if x > 0 {
        [[a, b], [b.conj(), a.conj()]]
    } else {
        [[a.conj(), -b], [-b.conj(), a]]
    }
}

pub fn word_matrix(grp: &FuchsianGroup, w: &[i32]) -> M2 {
    w.iter().fold(m2_identity(), |acc, &x| m2_mul(&acc, &generator_matrix(grp, x)))
}

/// Distance on the hyperboloid, curvature −1.
pub fn hyperboloid_distance(z1: Complex64, z2: Complex64) -> f64 {
    let lift = |z: Complex64| {
        let d = 1.0 - z.norm_sqr();
        [(1.0 + z.norm_sqr()) / d, 2.0 * z.re / d, 2.0 * z.im / d]
    };
    let (x, y) = (lift(z1), lift(z2));
    (x[0] * y[0] - x[1] * y[1] - x[2] * y[2]).max(1.0).acosh()
}

/// `∫_0^r (1 − (ρ/r)²)⁶ 2π sinh ρ dρ` by composite Simpson, curvature −1.
pub fn bump_norm_sq(radius: f64) -> f64 {
    let n = 20000;
    let h = radius / n as f64;
    let f = |rho: f64| (1.0 - (rho / radius).powi(2)).powi(6) * 2.0 * std::f64::consts::PI * rho.sinh();
    let mut s = f(0.0) + f(radius);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `Σ_{x ∈ π⁻¹(y)} ψ(x)ρ(x)` by breadth-first search over tiles, right
/// multiplying by generators, keeping tiles whose orbit point is within
/// `reach` of some packet center. Duplicate elements are merged by their
/// orbit point.
pub fn preimage_sum(psi: &WavePacket<f64>, grp: &FuchsianGroup, rep: &UnitaryRep, y: Complex64, reach: f64) -> CMat {
    let n = rep.rank();
    let genus = grp.genus as i32;
    let letters: Vec<i32> = (1..=2 * genus).flat_map(|k| [k, -k]).collect();
    let key = |z: Complex64| ((z.re * 1e7).round() as i64, (z.im * 1e7).round() as i64);
    let x0 = grp.base_point;
    let near = |z: Complex64| psi.terms.iter().any(|t| hyperboloid_distance(z, t.center) < t.radius + reach);
    let mut seen = HashSet::new();
    seen.insert(key(x0));
    let mut queue = VecDeque::new();
    queue.push_back((m2_identity(), CMat::identity(n, n)));
    let mut sum = CMat::zeros(n, n);
    while let Some((m, r)) = queue.pop_front() {
        let v = psi.value(m2_apply(&m, y));
        if v != c(0.0, 0.0) {
            sum += &r * v;
        }
        for &l in &letters {
            let m2 = m2_mul(&m, &generator_matrix(grp, l));
            let p = m2_apply(&m2, x0);
            if near(p) && seen.insert(key(p)) {
                queue.push_back((m2, &r * rho_word(rep, &[l])));
            }
        }
    }
    sum
}
