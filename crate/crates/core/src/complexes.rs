//! Presentation 2-complexes and the doubling construction
//! `⟨X, X' | R, R', w = w'⟩`.

use std::collections::BTreeMap;

use ibig::IBig;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::oracles::Oracle;
use crate::presentations::{self, check_hom, Presentation};
use crate::words::{Gen, Word};

/// Cell counts of the presentation complex: one vertex, an edge per
/// generator and a face per relator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoComplex {
    pub presentation: Presentation,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub chi: i64,
}

impl TwoComplex {
    pub fn new(p: &Presentation) -> TwoComplex {
        let edges = p.gens().len();
        let faces = p.relators().len();
        TwoComplex {
            presentation: p.clone(),
            vertices: 1,
            edges,
            faces,
            chi: 1 - edges as i64 + faces as i64,
        }
    }
}

/// Doubles `p` and glues along `pairs`: each `(w, v)` adds the relator
/// `w v⁻¹`, where `w` is a word in `p` and `v` a word in the primed copy.
pub fn double_with(p: &Presentation, pairs: &[(Word, Word)]) -> Result<Presentation> {
    let primed = p.primed();
    let mut gens = p.gens().to_vec();
    gens.extend(primed.gens().iter().cloned());
    let mut relators = p.relators().to_vec();
    relators.extend(primed.relators().iter().cloned());
    for (w, v) in pairs {
        if let Some(g) = w.gens().into_iter().find(|g| !p.has_gen(g)) {
            return Err(Error::ForeignGenerator(g));
        }
        if let Some(g) = v.gens().into_iter().find(|g| !primed.has_gen(g)) {
            return Err(Error::ForeignGenerator(g));
        }
        relators.push(w.mul(&v.inv()));
    }
    Presentation::new(gens, relators)
}

/// `⟨X, X' | R, R', w = w' (w ∈ ids)⟩`.
pub fn double_presentation(p: &Presentation, ids: &[Word]) -> Result<Presentation> {
    let pairs: Vec<(Word, Word)> = ids
        .iter()
        .map(|w| (w.clone(), w.map_gens(Gen::primed)))
        .collect();
    double_with(p, &pairs)
}

/// `2 χ_min − 1 + |x|`.
pub fn chi_level_formula(chi_min: i64, genset_size: i64) -> i64 {
    2 * chi_min - 1 + genset_size
}

/// `(x^{2i+1}, y^{3i+1})`.
pub fn trefoil_genset(i: u32) -> (Word, Word) {
    let (x, y) = (Gen::new("x"), Gen::new("y"));
    (
        Word::power(x, 2 * i64::from(i) + 1),
        Word::power(y, 3 * i64::from(i) + 1),
    )
}

fn bezout(a: &IBig, b: &IBig) -> (IBig, IBig, IBig) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (IBig::one(), IBig::zero());
    let (mut t0, mut t1) = (IBig::zero(), IBig::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        let t2 = &t0 - &q * &t1;
        (r0, r1) = (r1, r2);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    (r0, s0, t0)
}

/// Witness words for `x` and `y` in letters `A ↦ x^{2i+1}`,
/// `B ↦ y^{3i+1}`. With `a(2i+1) + b(3i+1) = 1` the word `A^{2a} B^{3b}`
/// is the central `x² = y³`, and `x = A c^{-i}`, `y = B c^{-i}`.
pub fn trefoil_witnesses(i: u32) -> (Word, Word) {
    let (p, q) = (IBig::from(2 * i + 1), IBig::from(3 * i + 1));
    let (g, a, b) = bezout(&p, &q);
    debug_assert!(g.is_one());
    let (la, lb) = (Gen::new("A"), Gen::new("B"));
    let c =
        Word::power(la.clone(), IBig::from(2) * a).mul(&Word::power(lb.clone(), IBig::from(3) * b));
    let back = c.pow(&-IBig::from(i));
    (Word::gen(la).mul(&back), Word::gen(lb).mul(&back))
}

/// Checks with the oracle that the witnesses express `x` and `y`.
pub fn verify_trefoil_genset(i: u32, oracle: &Oracle) -> Result<bool> {
    let (gx, gy) = trefoil_genset(i);
    let subs = vec![(Gen::new("A"), gx), (Gen::new("B"), gy)];
    let (wx, wy) = trefoil_witnesses(i);
    Ok(
        oracle.witness_generation(&Word::gen(Gen::new("x")), &subs, &wx)?
            && oracle.witness_generation(&Word::gen(Gen::new("y")), &subs, &wy)?,
    )
}

/// The doubled trefoil presentation glued along `x^{2i+1}, y^{3i+1}`.
pub fn trefoil_ki(i: u32) -> Presentation {
    let (a, b) = trefoil_genset(i);
    double_presentation(&presentations::trefoil(), &[a, b]).expect("trefoil words are valid")
}

/// The doubled `BS(2,3)` presentation glued along `x` and `y⁴`.
pub fn bs_doubled() -> Presentation {
    let p = presentations::bs(2, 3).expect("valid parameters");
    let ids = [Word::gen(Gen::new("x")), Word::power(Gen::new("y"), 4)];
    double_presentation(&p, &ids).expect("valid words")
}

/// True when sending every primed generator to its unprimed copy kills
/// all relators of `p`.
pub fn verify_doubled_quotient(p: &Presentation, oracle: &Oracle) -> Result<bool> {
    let images: BTreeMap<Gen, Word> = p
        .gens()
        .iter()
        .map(|g| (g.clone(), Word::gen(g.unprimed())))
        .collect();
    check_hom(p, &images, oracle)
}
