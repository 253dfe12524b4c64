//! Exact algebra of the genus-g surface group
//! `Γ = ⟨α_1..α_g, β_1..β_g | [α_1,β_1]…[α_g,β_g]⟩`.
//!
//! Elements are stored as canonical words: freely reduced, Dehn-reduced,
//! geodesic, and shortlex-least among all geodesic representatives.
//! Equality of arbitrary words is decided with Dehn's algorithm, which is
//! complete for surface presentations (every nonempty reduced word equal to
//! the identity contains more than half of a cyclic conjugate of `R^±1`).

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};

/// Default cap on `ball` radii; the sphere sizes grow like ~6.7^R at g = 2.
pub const DEFAULT_MAX_RADIUS: usize = 8;

/// A generator `α_i` (index `i ≤ g`) or `β_{i-g}` (index `i > g`), possibly inverted.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i16);

impl Letter {
    pub fn new(generator_index: usize, inverse: bool, genus: usize) -> Result<Self> {
        if generator_index == 0 || generator_index > 2 * genus {
            return Err(Error::Parse(format!(
                "generator index {generator_index} out of range for genus {genus}"
            )));
        }
        let k = generator_index as i16;
        Ok(Letter(if inverse { -k } else { k }))
    }

    pub fn alpha(i: usize) -> Self {
        Letter(i as i16)
    }

    pub fn beta(i: usize, genus: usize) -> Self {
        Letter((genus + i) as i16)
    }

    /// Index in `1..=2g`.
    pub fn generator_index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    /// Zero-based position of the generator in `α_1…α_g, β_1…β_g`.
    pub fn slot(self) -> usize {
        self.generator_index() - 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Shortlex alphabet order: a1 < A1 < a2 < A2 < … < b1 < B1 < …
    fn rank(self) -> u32 {
        2 * (self.generator_index() as u32 - 1) + self.is_inverse() as u32
    }

    pub fn format(self, genus: usize) -> String {
        let k = self.generator_index();
        let (ch, i) = if k <= genus { ('a', k) } else { ('b', k - genus) };
        let ch = if self.is_inverse() { ch.to_ascii_uppercase() } else { ch };
        format!("{ch}{i}")
    }
}

fn shortlex(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().map(|l| l.rank()).cmp(b.iter().map(|l| l.rank())))
}

fn inverse_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inverse()).collect()
}

fn free_reduce(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Cyclic conjugates of `R` and `R⁻¹`, indexed by their first letter.
struct RelatorTable {
    genus: usize,
    relator: Vec<Letter>,
    /// For each letter (keyed by `rank`), the rotations starting with it.
    by_first: Vec<Vec<Vec<Letter>>>,
}

impl RelatorTable {
    fn new(genus: usize) -> Self {
        let mut relator = Vec::with_capacity(4 * genus);
        for i in 1..=genus {
            let a = Letter::alpha(i);
            let b = Letter::beta(i, genus);
            relator.extend([a, b, a.inverse(), b.inverse()]);
        }
        let inv = inverse_word(&relator);
        let mut by_first = vec![Vec::new(); 4 * genus];
        for base in [&relator, &inv] {
            for s in 0..base.len() {
                let rot: Vec<Letter> = base[s..].iter().chain(&base[..s]).copied().collect();
                by_first[rot[0].rank() as usize].push(rot);
            }
        }
        RelatorTable { genus, relator, by_first }
    }

    fn half(&self) -> usize {
        2 * self.genus
    }

    /// Longest match of `w[p..]` against a relator rotation: `(length, rotation)`.
    fn best_match<'a>(&'a self, w: &[Letter], p: usize) -> Option<(usize, &'a [Letter])> {
        let mut best: Option<(usize, &[Letter])> = None;
        for rot in &self.by_first[w[p].rank() as usize] {
            let m = w[p..].iter().zip(rot).take_while(|(x, y)| x == y).count();
            if best.is_none_or(|(bm, _)| m > bm) {
                best = Some((m, rot));
            }
        }
        best
    }

    /// Greedy Dehn reduction: replace any subword longer than half a relator
    /// by the inverse of its complement until none is left.
    fn dehn_reduce(&self, w: &[Letter]) -> Vec<Letter> {
        let mut w = free_reduce(w);
        'scan: loop {
            for p in 0..w.len() {
                if let Some((m, rot)) = self.best_match(&w, p) {
                    if m > self.half() {
                        let replacement = inverse_word(&rot[m..]);
                        w.splice(p..p + m, replacement);
                        w = free_reduce(&w);
                        continue 'scan;
                    }
                }
            }
            return w;
        }
    }

    fn has_long_piece(&self, w: &[Letter]) -> bool {
        (0..w.len()).any(|p| self.best_match(w, p).is_some_and(|(m, _)| m > self.half()))
    }

    /// Words obtained by swapping one exact half-relator subword for the
    /// inverse of the other half.
    fn half_swaps(&self, w: &[Letter]) -> Vec<Vec<Letter>> {
        let h = self.half();
        let mut out = Vec::new();
        for p in 0..w.len() {
            for rot in &self.by_first[w[p].rank() as usize] {
                if p + h <= w.len() && w[p..p + h] == rot[..h] {
                    let mut v = Vec::with_capacity(w.len());
                    v.extend_from_slice(&w[..p]);
                    v.extend(inverse_word(&rot[h..]));
                    v.extend_from_slice(&w[p + h..]);
                    out.push(free_reduce(&v));
                }
            }
        }
        out
    }

    /// Geodesic, shortlex-least representative.
    ///
    /// After Dehn reduction the word may still be non-geodesic when a chain
    /// of half-relators hides a shortening; exploring the closure under
    /// half swaps exposes it. Once the closure contains no reducible word it
    /// is the full set of geodesics for the element.
    fn canonical(&self, w: &[Letter]) -> Vec<Letter> {
        let mut w = self.dehn_reduce(w);
        'restart: loop {
            let mut seen: HashSet<Vec<Letter>> = HashSet::new();
            let mut best = w.clone();
            let mut stack = vec![w.clone()];
            seen.insert(w.clone());
            while let Some(v) = stack.pop() {
                for u in self.half_swaps(&v) {
                    if u.len() < v.len() || self.has_long_piece(&u) {
                        w = self.dehn_reduce(&u);
                        continue 'restart;
                    }
                    if seen.insert(u.clone()) {
                        if shortlex(&u, &best) == Ordering::Less {
                            best = u.clone();
                        }
                        stack.push(u);
                    }
                }
            }
            return best;
        }
    }
}

fn table(genus: usize) -> &'static RelatorTable {
    static TABLES: OnceLock<Mutex<HashMap<usize, &'static RelatorTable>>> = OnceLock::new();
    let mut map = TABLES.get_or_init(Default::default).lock().expect("relator table lock");
    map.entry(genus).or_insert_with(|| Box::leak(Box::new(RelatorTable::new(genus))))
}

fn check_genus(genus: usize) -> Result<()> {
    if genus < 2 {
        Err(Error::UnsupportedGenus(genus))
    } else {
        Ok(())
    }
}

/// An element of Γ in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    genus: usize,
    word: Vec<Letter>,
}

impl GroupElement {
    pub fn identity(genus: usize) -> Self {
        GroupElement { genus, word: Vec::new() }
    }

    /// Element represented by an arbitrary word.
    pub fn from_letters(genus: usize, letters: &[Letter]) -> Result<Self> {
        check_genus(genus)?;
        if let Some(l) = letters.iter().find(|l| l.generator_index() > 2 * genus) {
            return Err(Error::Parse(format!("letter index {} exceeds 2g", l.generator_index())));
        }
        Ok(GroupElement { genus, word: table(genus).canonical(letters) })
    }

    pub fn generator(genus: usize, letter: Letter) -> Self {
        GroupElement { genus, word: vec![letter] }
    }

    pub fn alpha(genus: usize, i: usize) -> Self {
        Self::generator(genus, Letter::alpha(i))
    }

    pub fn beta(genus: usize, i: usize) -> Self {
        Self::generator(genus, Letter::beta(i, genus))
    }

    /// The relator `[α_1,β_1]…[α_g,β_g]` as a (trivial) element.
    pub fn relator_word(genus: usize) -> Vec<Letter> {
        table(genus).relator.clone()
    }

    /// Group commutator `x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &Self, y: &Self) -> Result<Self> {
        x.compose(y)?.compose(&x.invert())?.compose(&y.invert())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn letters(&self) -> &[Letter] {
        &self.word
    }

    /// Word length, which is the geodesic length in the Cayley graph.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.genus != other.genus {
            return Err(Error::GenusMismatch(self.genus, other.genus));
        }
        let mut w = self.word.clone();
        w.extend_from_slice(&other.word);
        Ok(GroupElement { genus: self.genus, word: table(self.genus).canonical(&w) })
    }

    pub fn invert(&self) -> Self {
        let inv = inverse_word(&self.word);
        GroupElement { genus: self.genus, word: table(self.genus).canonical(&inv) }
    }

    pub fn abelianize(&self) -> AbelianImage {
        abelianize_word(self.genus, &self.word)
    }

    pub fn in_commutator_subgroup(&self) -> bool {
        self.abelianize().is_zero()
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.genus.cmp(&other.genus).then_with(|| shortlex(&self.word, &other.word))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Word-problem equality: `g1 g2⁻¹` Dehn-reduces to the empty word.
pub fn equals(g1: &GroupElement, g2: &GroupElement) -> Result<bool> {
    if g1.genus != g2.genus {
        return Err(Error::GenusMismatch(g1.genus, g2.genus));
    }
    Ok(word_is_trivial(g1.genus, &[g1.word.as_slice(), &inverse_word(&g2.word)].concat()))
}

/// Dehn's algorithm on a raw word.
pub fn word_is_trivial(genus: usize, word: &[Letter]) -> bool {
    table(genus).dehn_reduce(word).is_empty()
}

/// Exponent-sum vector in `ℤ^{2g}`, ordered like the generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianImage(pub Vec<i64>);

impl AbelianImage {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl std::ops::Add for &AbelianImage {
    type Output = AbelianImage;
    fn add(self, rhs: Self) -> AbelianImage {
        AbelianImage(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

pub fn abelianize_word(genus: usize, word: &[Letter]) -> AbelianImage {
    let mut e = vec![0i64; 2 * genus];
    for l in word {
        e[l.generator_index() - 1] += if l.is_inverse() { -1 } else { 1 };
    }
    AbelianImage(e)
}

/// Configured view of Γ: genus plus the enumeration cap.
#[derive(Clone, Debug)]
pub struct SurfaceGroup {
    pub genus: usize,
    pub max_radius: usize,
}

impl SurfaceGroup {
    pub fn new(genus: usize) -> Result<Self> {
        check_genus(genus)?;
        Ok(SurfaceGroup { genus, max_radius: DEFAULT_MAX_RADIUS })
    }

    pub fn with_max_radius(mut self, max_radius: usize) -> Self {
        self.max_radius = max_radius;
        self
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.genus)
    }

    /// The `4g` signed generators in alphabet order.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out: Vec<Letter> = (1..=2 * self.genus)
            .flat_map(|k| [Letter(k as i16), Letter(-(k as i16))])
            .collect();
        out.sort_by_key(|l| l.rank());
        out
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        self.letters().into_iter().map(|l| GroupElement::generator(self.genus, l)).collect()
    }

    /// Elements of word length exactly `r`, shortlex-sorted.
    pub fn sphere(&self, r: usize) -> Result<Vec<GroupElement>> {
        let balls = self.spheres(r)?;
        Ok(balls.into_iter().last().unwrap_or_default())
    }

    /// All elements of word length `≤ r`, shortlex-sorted.
    pub fn ball(&self, r: usize) -> Result<Vec<GroupElement>> {
        Ok(self.spheres(r)?.into_iter().flatten().collect())
    }

    fn spheres(&self, r: usize) -> Result<Vec<Vec<GroupElement>>> {
        if r > self.max_radius {
            return Err(Error::RadiusTooLarge { radius: r, max: self.max_radius });
        }
        let t = table(self.genus);
        let letters = self.letters();
        let mut spheres = vec![vec![self.identity()]];
        for k in 1..=r {
            let mut next: HashSet<Vec<Letter>> = HashSet::new();
            for g in &spheres[k - 1] {
                for &l in &letters {
                    if g.word.last() == Some(&l.inverse()) {
                        continue;
                    }
                    let mut w = g.word.clone();
                    w.push(l);
                    let c = t.canonical(&w);
                    if c.len() == k {
                        next.insert(c);
                    }
                }
            }
            let mut sphere: Vec<GroupElement> =
                next.into_iter().map(|word| GroupElement { genus: self.genus, word }).collect();
            sphere.sort();
            spheres.push(sphere);
        }
        Ok(spheres)
    }

    pub fn parse(&self, s: &str) -> Result<GroupElement> {
        parse_element(self.genus, s)
    }
}

/// Element spelled by `len` uniform random letters (cancellation allowed).
pub fn random_element<R: Rng + ?Sized>(genus: usize, len: usize, rng: &mut R) -> Result<GroupElement> {
    check_genus(genus)?;
    let letters: Vec<Letter> = (0..len)
        .map(|_| {
            let k = rng.random_range(1..=2 * genus);
            Letter::new(k, rng.random::<bool>(), genus)
        })
        .collect::<Result<_>>()?;
    GroupElement::from_letters(genus, &letters)
}

/// Parse a group element: whitespace-separated letters (`a1 B2`), `e` for the
/// identity, and `[x,y]` commutator sugar with nested specs.
pub fn parse_element(genus: usize, s: &str) -> Result<GroupElement> {
    check_genus(genus)?;
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0;
    let w = parse_seq(genus, &chars, &mut pos)?;
    if pos != chars.len() {
        return Err(Error::Parse(format!("unexpected '{}' in {s:?}", chars[pos])));
    }
    GroupElement::from_letters(genus, &w)
}

fn parse_seq(genus: usize, c: &[char], pos: &mut usize) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    while *pos < c.len() {
        let ch = c[*pos];
        match ch {
            ' ' | '\t' | '\n' | '*' => *pos += 1,
            ',' | ']' => break,
            '[' => {
                *pos += 1;
                let x = parse_seq(genus, c, pos)?;
                if c.get(*pos) != Some(&',') {
                    return Err(Error::Parse("expected ',' in commutator".into()));
                }
                *pos += 1;
                let y = parse_seq(genus, c, pos)?;
                if c.get(*pos) != Some(&']') {
                    return Err(Error::Parse("expected ']' closing commutator".into()));
                }
                *pos += 1;
                out.extend_from_slice(&x);
                out.extend_from_slice(&y);
                out.extend(inverse_word(&x));
                out.extend(inverse_word(&y));
            }
            'e' => *pos += 1,
            'a' | 'A' | 'b' | 'B' => {
                *pos += 1;
                let start = *pos;
                while *pos < c.len() && c[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                let digits: String = c[start..*pos].iter().collect();
                let i: usize = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("missing index after '{ch}'")))?;
                if i == 0 || i > genus {
                    return Err(Error::Parse(format!("index {i} out of range for genus {genus}")));
                }
                let k = if ch.eq_ignore_ascii_case(&'a') { i } else { genus + i };
                out.push(Letter::new(k, ch.is_ascii_uppercase(), genus)?);
            }
            _ => return Err(Error::Parse(format!("unexpected character '{ch}'"))),
        }
    }
    Ok(out)
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.word.iter().map(|l| l.format(self.genus)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{self}⟩")
    }
}

/// Word string without the identity marker: empty for `e`.
pub fn word_string(g: &GroupElement) -> String {
    if g.is_identity() {
        String::new()
    } else {
        g.to_string()
    }
}
