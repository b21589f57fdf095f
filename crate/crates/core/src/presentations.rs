//! Finite presentations, Tietze moves and the named presentations used
//! throughout the toolkit.
//!
//! Relations `r = s` are stored as relators `r s⁻¹`, freely and cyclically
//! reduced; relators that reduce to the identity are dropped.
//!
//! Text format, one item per line:
//!
//! ```text
//! # comment
//! gens: x y
//! rel: x y^2 x^-1 y^-3
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use ibig::IBig;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::oracles::Oracle;
use crate::words::{Gen, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    gens: Vec<Gen>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(gens: Vec<Gen>, relators: Vec<Word>) -> Result<Presentation> {
        let mut seen = BTreeSet::new();
        for g in &gens {
            if !seen.insert(g.clone()) {
                return Err(Error::GeneratorCollision(g.clone()));
            }
        }
        let mut stored = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(g) = r.gens().into_iter().find(|g| !seen.contains(g)) {
                return Err(Error::ForeignGenerator(g));
            }
            let r = r.cyclically_reduced();
            if !r.is_identity() {
                stored.push(r);
            }
        }
        Ok(Presentation {
            gens,
            relators: stored,
        })
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn relator(&self, index: usize) -> Result<&Word> {
        self.relators.get(index).ok_or(Error::RelatorIndex(index))
    }

    pub fn has_gen(&self, g: &Gen) -> bool {
        self.gens.contains(g)
    }

    /// `1 − |gens| + |relators|`, the Euler characteristic of the
    /// presentation complex.
    pub fn euler_char(&self) -> i64 {
        1 - self.gens.len() as i64 + self.relators.len() as i64
    }

    /// Rows of exponent sums, one per relator, columns in generator order.
    pub fn abelianization_matrix(&self) -> Vec<Vec<IBig>> {
        self.relators
            .iter()
            .map(|r| self.gens.iter().map(|g| r.exponent_sum(g)).collect())
            .collect()
    }

    /// Adds `g` together with the relator `g · def⁻¹`.
    pub fn tietze_add_gen(&self, g: Gen, def: &Word) -> Result<Presentation> {
        if self.has_gen(&g) {
            return Err(Error::GeneratorCollision(g));
        }
        if let Some(h) = def.gens().into_iter().find(|h| !self.has_gen(h)) {
            return Err(Error::ForeignGenerator(h));
        }
        let mut gens = self.gens.clone();
        gens.push(g.clone());
        let mut relators = self.relators.clone();
        relators.push(Word::gen(g).mul(&def.inv()));
        Presentation::new(gens, relators)
    }

    /// Value `w` of `g` read off a relator of the form `g·w⁻¹` up to
    /// rotation and inversion.
    pub fn defining_value(&self, g: &Gen, index: usize) -> Result<Word> {
        let r = self.relator(index)?;
        let not_eliminable = || Error::NotEliminable {
            gen: g.clone(),
            index,
        };
        let hits: Vec<usize> = r
            .syllables()
            .iter()
            .enumerate()
            .filter(|(_, s)| &s.gen == g)
            .map(|(i, _)| i)
            .collect();
        let [k] = hits[..] else {
            return Err(not_eliminable());
        };
        let eps = &r.syllables()[k].exp;
        if !(eps.is_one() || (-eps).is_one()) {
            return Err(not_eliminable());
        }
        // r ~ g^ε · rest
        let rest = Word::from_syllables(
            r.syllables()[k + 1..]
                .iter()
                .chain(&r.syllables()[..k])
                .map(|s| (s.gen.clone(), s.exp.clone())),
        );
        Ok(if eps.is_one() { rest.inv() } else { rest })
    }

    /// Eliminates `g` using the relator at `index`; returns the new
    /// presentation and the word that was substituted for `g`.
    pub fn tietze_remove_gen(&self, g: &Gen, index: usize) -> Result<(Presentation, Word)> {
        if !self.has_gen(g) {
            return Err(Error::ForeignGenerator(g.clone()));
        }
        let value = self.defining_value(g, index)?;
        let images = BTreeMap::from([(g.clone(), value.clone())]);
        let gens = self.gens.iter().filter(|h| *h != g).cloned().collect();
        let relators = self
            .relators
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != index)
            .map(|(_, r)| r.substitute_partial(&images))
            .collect();
        Ok((Presentation::new(gens, relators)?, value))
    }

    /// Replaces, letter by letter from the left, each occurrence of `w` or
    /// `w⁻¹` in relator `target` by `g` or `g⁻¹`, where `g = w` is read off
    /// relator `def`.
    pub fn tietze_rewrite(&self, g: &Gen, def: usize, target: usize) -> Result<Presentation> {
        if def == target {
            return Err(Error::InvalidArgument(
                "a relator cannot rewrite itself".into(),
            ));
        }
        let value = self.defining_value(g, def)?;
        let limit = 1 << 20;
        let too_long = || Error::InvalidArgument("relator too long to rewrite".into());
        let pat = value.letters(limit).ok_or_else(too_long)?;
        let pat_inv = value.inv().letters(limit).ok_or_else(too_long)?;
        let text = self.relator(target)?.letters(limit).ok_or_else(too_long)?;
        let mut out: Vec<(Gen, i8)> = Vec::with_capacity(text.len());
        let mut i = 0;
        while i < text.len() {
            if !pat.is_empty() && text[i..].starts_with(&pat) {
                out.push((g.clone(), 1));
                i += pat.len();
            } else if !pat_inv.is_empty() && text[i..].starts_with(&pat_inv) {
                out.push((g.clone(), -1));
                i += pat_inv.len();
            } else {
                out.push(text[i].clone());
                i += 1;
            }
        }
        let mut relators = self.relators.clone();
        relators[target] = Word::from_letters(&out);
        Presentation::new(self.gens.clone(), relators)
    }

    pub fn invert_relator(&self, index: usize) -> Result<Presentation> {
        let mut relators = self.relators.clone();
        let r = relators.get_mut(index).ok_or(Error::RelatorIndex(index))?;
        *r = r.inv();
        Presentation::new(self.gens.clone(), relators)
    }

    /// Presentation with every generator and relator replaced by its
    /// primed copy.
    pub fn primed(&self) -> Presentation {
        Presentation {
            gens: self.gens.iter().map(Gen::primed).collect(),
            relators: self
                .relators
                .iter()
                .map(|r| r.map_gens(Gen::primed))
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Presentation> {
        let mut gens: Option<Vec<Gen>> = None;
        let mut relators = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let at_line = |e: Error| match e {
                Error::Parse { column, message } => Error::Parse {
                    column,
                    message: format!("line {}: {message}", lineno + 1),
                },
                other => other,
            };
            let (key, body) = line.split_once(':').ok_or_else(|| Error::Parse {
                column: 1,
                message: format!("line {}: expected `gens:` or `rel:`", lineno + 1),
            })?;
            let offset = key.len() + 1;
            let shift = |e: Error| match e {
                Error::Parse { column, message } => Error::Parse {
                    column: column + offset,
                    message,
                },
                other => other,
            };
            match key.trim() {
                "gens" => {
                    if gens.is_some() {
                        return Err(at_line(Error::Parse {
                            column: 1,
                            message: "duplicate `gens:` line".into(),
                        }));
                    }
                    let list = body
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|t| !t.is_empty())
                        .map(Gen::from_str)
                        .collect::<Result<Vec<_>>>()
                        .map_err(at_line)?;
                    gens = Some(list);
                }
                "rel" => {
                    let r = Word::from_str(body).map_err(shift).map_err(at_line)?;
                    relators.push(r);
                }
                other => {
                    return Err(at_line(Error::Parse {
                        column: 1,
                        message: format!("unknown key `{other}`"),
                    }))
                }
            }
        }
        let gens = gens.ok_or_else(|| Error::Parse {
            column: 1,
            message: "missing `gens:` line".into(),
        })?;
        Presentation::new(gens, relators)
    }
}

impl FromStr for Presentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Presentation> {
        Presentation::parse(s)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gens:")?;
        for g in &self.gens {
            write!(f, " {g}")?;
        }
        writeln!(f)?;
        for r in &self.relators {
            writeln!(f, "rel: {r}")?;
        }
        Ok(())
    }
}

/// `⟨x, y | x y^m x⁻¹ = y^n⟩`.
pub fn bs(m: i64, n: i64) -> Result<Presentation> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "BS parameters must be nonzero".into(),
        ));
    }
    let (x, y) = (Gen::new("x"), Gen::new("y"));
    let r = Word::power(y.clone(), m)
        .conj(&Word::gen(x.clone()))
        .mul(&Word::power(y.clone(), -n));
    Presentation::new(vec![x, y], vec![r])
}

/// `⟨x, y | x² = y³⟩`.
pub fn trefoil() -> Presentation {
    let (x, y) = (Gen::new("x"), Gen::new("y"));
    let r = Word::power(x.clone(), 2).mul(&Word::power(y.clone(), -3));
    Presentation::new(vec![x, y], vec![r]).expect("valid")
}

/// `⟨x, z | z = [x, z]²⟩`, stored as `z⁻¹ [x,z]²`.
pub fn gbar() -> Presentation {
    let (x, z) = (Gen::new("x"), Gen::new("z"));
    let c = Word::comm(&Word::gen(x.clone()), &Word::gen(z.clone()));
    let r = Word::power(z.clone(), -1).mul(&c.pow(&IBig::from(2)));
    Presentation::new(vec![x, z], vec![r]).expect("valid")
}

/// The relation `z_i = (z_{i+1} z_i⁻¹)²` at `i = 0`, as a relator.
pub fn hbar_template() -> Word {
    let z0 = Word::gen(Gen::indexed("z", 0));
    let z1 = Word::gen(Gen::indexed("z", 1));
    z0.mul(&z1.mul(&z0.inv()).pow(&IBig::from(-2)))
}

/// `⟨z_lo, …, z_{hi+1} | z_i = (z_{i+1} z_i⁻¹)², lo ≤ i ≤ hi⟩`.
pub fn hbar_window(lo: i64, hi: i64) -> Result<Presentation> {
    staggered_window("z", &[hbar_template()], lo, hi)
}

/// Instantiates template relators, written in `family_0, family_1, …`, at
/// every shift `i` in `lo..=hi`. The generators are the family members
/// from the lowest to the highest index any instance mentions.
pub fn staggered_window(
    family: &str,
    templates: &[Word],
    lo: i64,
    hi: i64,
) -> Result<Presentation> {
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty window {lo}..{hi}")));
    }
    let mut min_idx = i64::MAX;
    let mut max_idx = i64::MIN;
    for t in templates {
        for g in t.gens() {
            match g.index() {
                Some(i) if g.in_family(family) && !g.is_primed() => {
                    min_idx = min_idx.min(i);
                    max_idx = max_idx.max(i);
                }
                _ => return Err(Error::ForeignGenerator(g)),
            }
        }
    }
    if min_idx > max_idx {
        min_idx = 0;
        max_idx = 0;
    }
    let gens = (lo + min_idx..=hi + max_idx)
        .map(|i| Gen::indexed(family, i))
        .collect();
    let relators = (lo..=hi)
        .flat_map(|i| templates.iter().map(move |t| t.shift_indices(family, i)))
        .collect();
    Presentation::new(gens, relators)
}

/// Hand-written Tietze script taking `hbar_window(lo, hi)` to
/// `⟨u_lo, …, u_hi | u_{i+1}² u_i⁻³, lo ≤ i < hi⟩` via `u_i = z_{i+1} z_i⁻¹`.
pub fn hbar_to_chain(lo: i64, hi: i64) -> Result<Presentation> {
    let z = |i: i64| Gen::indexed("z", i);
    let u = |i: i64| Gen::indexed("u", i);
    let mut p = hbar_window(lo, hi)?;
    let count = (hi - lo + 1) as usize;
    // relators 0..count are the z-relations, count..2count the u-definitions.
    for i in lo..=hi {
        let def = Word::gen(z(i + 1)).mul(&Word::power(z(i), -1));
        p = p.tietze_add_gen(u(i), &def)?;
    }
    for k in 0..count {
        let i = lo + k as i64;
        p = p.tietze_rewrite(&u(i), count + k, k)?;
    }
    // Each rewritten z-relation now reads z_i u_i⁻²; removing it shifts the
    // remaining relators down by one.
    for i in lo..=hi {
        p = p.tietze_remove_gen(&z(i), 0)?.0;
    }
    // Only u-definitions remain; the last one is u_hi³ z_{hi+1}⁻¹.
    p = p.tietze_remove_gen(&z(hi + 1), count - 1)?.0;
    for k in 0..p.relators().len() {
        p = p.invert_relator(k)?;
    }
    Ok(p)
}

/// Expected output of [`hbar_to_chain`].
pub fn chain_window(lo: i64, hi: i64) -> Result<Presentation> {
    let u = |i: i64| Gen::indexed("u", i);
    let gens = (lo..=hi).map(u).collect();
    let relators = (lo..hi)
        .map(|i| Word::power(u(i + 1), 2).mul(&Word::power(u(i), -3)))
        .collect();
    Presentation::new(gens, relators)
}

/// Writes `w ∈ F(a, b)` as `Π f_j c^{ε_j} f_j⁻¹ · a^α b^β` with
/// `c = [a, b]`, by repeatedly swapping a `b^{±1} a^{±1}` pair.
/// Returns the conjugate factors `(f_j, ε_j)` and the remainder `a^α b^β`.
pub fn collect_commutators(w: &Word, a: &Gen, b: &Gen) -> Result<(Vec<(Word, i8)>, Word)> {
    if let Some(g) = w.gens().into_iter().find(|g| g != a && g != b) {
        return Err(Error::ForeignGenerator(g));
    }
    let letters = w
        .letters(1 << 16)
        .ok_or_else(|| Error::InvalidArgument("word too long to collect".into()))?;
    let (aw, bw) = (Word::gen(a.clone()), Word::gen(b.clone()));
    let mut factors = Vec::new();
    let mut u: Vec<(Gen, i8)> = letters;
    while let Some(k) = (0..u.len().saturating_sub(1)).find(|&k| &u[k].0 == b && &u[k + 1].0 == a) {
        let (eb, ea) = (u[k].1, u[k + 1].1);
        // [b^eb, a^ea] as a conjugate of c^{±1}.
        let (conj, sign) = match (eb, ea) {
            (1, 1) => (Word::identity(), -1),
            (-1, 1) => (bw.inv(), 1),
            (1, -1) => (aw.inv(), 1),
            _ => (bw.inv().mul(&aw.inv()), -1),
        };
        let prefix = Word::from_letters(&u[..k]);
        factors.push((prefix.mul(&conj), sign));
        u.swap(k, k + 1);
        u = Word::from_letters(&u).letters(usize::MAX).expect("bounded");
    }
    let rest = Word::from_letters(&u);
    let c = Word::comm(&aw, &bw);
    let mut product = Word::identity();
    for (f, s) in &factors {
        product.push_word(&c.pow(&IBig::from(*s)).conj(f));
    }
    product.push_word(&rest);
    if product != *w {
        return Err(Error::IdentityViolation(w.clone()));
    }
    Ok((factors, rest))
}

/// Returns true when every source relator maps to the identity.
pub fn check_hom(
    source: &Presentation,
    images: &BTreeMap<Gen, Word>,
    target: &Oracle,
) -> Result<bool> {
    for r in source.relators() {
        if !target.is_trivial(&r.substitute(images)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A map of presentations verified to induce a group homomorphism.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: Presentation,
    pub target: Presentation,
    pub images: BTreeMap<Gen, Word>,
    pub target_oracle: Arc<Oracle>,
}

impl GroupHom {
    pub fn new(
        source: Presentation,
        target: Presentation,
        images: BTreeMap<Gen, Word>,
        target_oracle: Arc<Oracle>,
    ) -> Result<GroupHom> {
        for g in source.gens() {
            let image = images
                .get(g)
                .ok_or_else(|| Error::MissingImage(g.clone()))?;
            if let Some(h) = image.gens().into_iter().find(|h| !target.has_gen(h)) {
                return Err(Error::ForeignGenerator(h));
            }
        }
        for r in source.relators() {
            if !target_oracle.is_trivial(&r.substitute(&images)?)? {
                return Err(Error::NotAHomomorphism(r.clone()));
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
            target_oracle,
        })
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        w.substitute(&self.images)
    }

    pub fn check(&self) -> Result<bool> {
        check_hom(&self.source, &self.images, &self.target_oracle)
    }
}

/// Zero row vector test helper: true when `v` is an integer combination
/// of the rows of `m` (small dense Gaussian elimination over Z via
/// Hermite reduction).
pub fn in_row_space(m: &[Vec<IBig>], v: &[IBig]) -> bool {
    let cols = v.len();
    let mut rows: Vec<Vec<IBig>> = m.to_vec();
    let mut target = v.to_vec();
    let mut r0 = 0;
    for c in 0..cols {
        // Euclid on column c among rows r0.. until one pivot remains.
        loop {
            let nonzero: Vec<usize> = (r0..rows.len())
                .filter(|&r| !rows[r][c].is_zero())
                .collect();
            if nonzero.len() <= 1 {
                break;
            }
            let p = *nonzero
                .iter()
                .min_by_key(|&&r| rows[r][c].clone() * rows[r][c].clone())
                .expect("nonempty");
            for &r in &nonzero {
                if r != p {
                    let q = &rows[r][c] / &rows[p][c];
                    let pivot = rows[p].clone();
                    for (x, y) in rows[r].iter_mut().zip(&pivot) {
                        *x -= &q * y;
                    }
                }
            }
        }
        let Some(p) = (r0..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            if !target[c].is_zero() {
                return false;
            }
            continue;
        };
        rows.swap(r0, p);
        if !(&target[c] % &rows[r0][c]).is_zero() {
            return false;
        }
        let q = &target[c] / &rows[r0][c];
        for (x, y) in target.iter_mut().zip(&rows[r0]) {
            *x -= &q * y;
        }
        r0 += 1;
    }
    target.iter().all(Zero::is_zero)
}
