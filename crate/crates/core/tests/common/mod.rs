#![allow(dead_code)]

pub mod criteria;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use ibig::IBig;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relmod::groupring::{GroupRingElt, SkewFrame, SkewLaurent};
use relmod::words::{g, w};
use relmod::{Gen, Oracle, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word(rng: &mut impl Rng, gens: &[Gen], syllables: usize, max_exp: i64) -> Word {
    let mut out = Word::identity();
    for _ in 0..rng.gen_range(0..=syllables) {
        let gen = gens.choose(rng).expect("nonempty alphabet").clone();
        let mut e = rng.gen_range(1..=max_exp);
        if rng.gen_bool(0.5) {
            e = -e;
        }
        out.push(gen, IBig::from(e));
    }
    out
}

/// A product of random conjugates of the relators, so trivial in the group.
pub fn relator_product(
    rng: &mut impl Rng,
    gens: &[Gen],
    relators: &[Word],
    factors: usize,
) -> Word {
    let mut out = Word::identity();
    for _ in 0..rng.gen_range(1..=factors) {
        let r = relators.choose(rng).expect("nonempty relators");
        let r = if rng.gen_bool(0.5) {
            r.clone()
        } else {
            r.inv()
        };
        out = out.mul(&r.conj(&random_word(rng, gens, 3, 2)));
    }
    out
}

/// Half plain random words, half random words times a relator product.
pub fn mixed_word(rng: &mut impl Rng, gens: &[Gen], relators: &[Word]) -> Word {
    let base = random_word(rng, gens, 5, 3);
    if relators.is_empty() || rng.gen_bool(0.5) {
        base
    } else {
        let r = relator_product(rng, gens, relators, 3);
        let tail = if rng.gen_bool(0.5) {
            base.inv()
        } else {
            Word::identity()
        };
        base.mul(&r).mul(&tail)
    }
}

pub struct Subject {
    pub label: &'static str,
    pub oracle: Arc<Oracle>,
    pub gens: Vec<Gen>,
    pub relators: Vec<Word>,
}

/// One representative per oracle kind.
pub fn subjects() -> Vec<Subject> {
    vec![
        Subject {
            label: "free",
            oracle: Arc::new(Oracle::free(vec![g("a"), g("b"), g("c")])),
            gens: vec![g("a"), g("b"), g("c")],
            relators: vec![],
        },
        Subject {
            label: "bs(2,3)",
            oracle: Arc::new(Oracle::bs(2, 3).unwrap()),
            gens: vec![g("x"), g("y")],
            relators: vec![w("x y^2 x^-1 y^-3")],
        },
        Subject {
            label: "bs(1,2)",
            oracle: Arc::new(Oracle::bs(1, 2).unwrap()),
            gens: vec![g("x"), g("y")],
            relators: vec![w("x y x^-1 y^-2")],
        },
        Subject {
            label: "amalgam(2,3)",
            oracle: Arc::new(Oracle::cyclic_amalgam(g("x"), g("y"), 2, 3).unwrap()),
            gens: vec![g("x"), g("y")],
            relators: vec![w("x^2 y^-3")],
        },
        Subject {
            label: "chain(3,2;0..3)",
            oracle: Arc::new(Oracle::chain("u", 3, 2, 0, 3).unwrap()),
            gens: (0..=3).map(|i| Gen::indexed("u", i)).collect(),
            relators: (0..3)
                .map(|i| w(&format!("u_{}^2 u_{i}^-3", i + 1)))
                .collect(),
        },
    ]
}

/// Projects a raw list of free-group terms into `ZG` by hand: every key is
/// sent to its normal form and coefficients are collected.
pub fn project(oracle: &Oracle, terms: &[(IBig, Word)]) -> BTreeMap<Word, IBig> {
    let mut out: BTreeMap<Word, IBig> = BTreeMap::new();
    for (c, key) in terms {
        let nf = oracle.nf_word(key).unwrap();
        *out.entry(nf).or_default() += c;
    }
    out.retain(|_, c| *c != IBig::from(0));
    out
}

/// Letter-by-letter product rule, no projection: `∂(u g)/∂g = ∂u/∂g + u`,
/// `∂(u g⁻¹)/∂g = ∂u/∂g − u g⁻¹`.
pub fn fox_letterwise(word: &Word, gen: &Gen) -> Vec<(IBig, Word)> {
    let letters = word.letters(usize::MAX).unwrap();
    let mut prefix: Vec<(Gen, i8)> = Vec::new();
    let mut out = Vec::new();
    for (h, s) in letters {
        if &h == gen {
            if s > 0 {
                out.push((IBig::from(1), Word::from_letters(&prefix)));
            } else {
                let mut p = prefix.clone();
                p.push((h.clone(), -1));
                out.push((IBig::from(-1), Word::from_letters(&p)));
            }
        }
        prefix.push((h, s));
    }
    out
}

pub fn elt_map(e: &GroupRingElt) -> BTreeMap<Word, IBig> {
    e.terms().map(|(k, c)| (k.clone(), c.clone())).collect()
}

/// Exhaustive equality by free reduction and relator insertion, confined to
/// reduced words of at most `bound` letters over two generators. Letters are
/// `0 = a, 1 = a⁻¹, 2 = b, 3 = b⁻¹`.
pub struct BruteForce {
    bound: usize,
    index: HashMap<u64, u32>,
    words: Vec<Vec<u8>>,
    parent: Vec<u32>,
}

fn pack(letters: &[u8]) -> u64 {
    letters
        .iter()
        .fold(0u64, |acc, &l| (acc << 2) | u64::from(l))
        | ((letters.len() as u64) << 58)
}

fn reduce(letters: impl IntoIterator<Item = u8>) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::new();
    for l in letters {
        if out.last() == Some(&(l ^ 1)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl BruteForce {
    fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            let p = self.parent[self.parent[i as usize] as usize];
            self.parent[i as usize] = p;
            i = p;
        }
        i
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }

    /// `relator` is a reduced letter sequence.
    pub fn new(relator: &[u8], bound: usize) -> BruteForce {
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut start = 0;
        for _ in 0..bound {
            let end = words.len();
            for i in start..end {
                for l in 0..4u8 {
                    if words[i].last() == Some(&(l ^ 1)) {
                        continue;
                    }
                    let mut next = words[i].clone();
                    next.push(l);
                    words.push(next);
                }
            }
            start = end;
        }
        let index: HashMap<u64, u32> = words
            .iter()
            .enumerate()
            .map(|(i, v)| (pack(v), i as u32))
            .collect();
        let parent = (0..words.len() as u32).collect();
        let mut bf = BruteForce {
            bound,
            index,
            words,
            parent,
        };
        let inverse: Vec<u8> = relator.iter().rev().map(|l| l ^ 1).collect();
        let mut inserts = Vec::new();
        for r in [relator.to_vec(), inverse] {
            for k in 0..r.len() {
                let mut rot = r[k..].to_vec();
                rot.extend_from_slice(&r[..k]);
                if !inserts.contains(&rot) {
                    inserts.push(rot);
                }
            }
        }
        for i in 0..bf.words.len() {
            let word = bf.words[i].clone();
            for pos in 0..=word.len() {
                for ins in &inserts {
                    let joined = reduce(
                        word[..pos]
                            .iter()
                            .chain(ins.iter())
                            .chain(word[pos..].iter())
                            .copied(),
                    );
                    if joined.len() > bf.bound {
                        continue;
                    }
                    let j = bf.index[&pack(&joined)];
                    bf.union(i as u32, j);
                }
            }
        }
        bf
    }

    pub fn words_up_to(&self, len: usize) -> Vec<Vec<u8>> {
        self.words
            .iter()
            .filter(|v| v.len() <= len)
            .cloned()
            .collect()
    }

    pub fn class(&mut self, letters: &[u8]) -> u32 {
        let i = self.index[&pack(letters)];
        self.find(i)
    }
}

pub fn letters_to_word(letters: &[u8], a: &Gen, b: &Gen) -> Word {
    let seq: Vec<(Gen, i8)> = letters
        .iter()
        .map(|&l| {
            let gen = if l < 2 { a.clone() } else { b.clone() };
            (gen, if l % 2 == 0 { 1 } else { -1 })
        })
        .collect();
    Word::from_letters(&seq)
}

/// `BS(2,3)` with `z_i = x^i y^4 x^-i` and a frame wide enough for sampling.
pub fn skew_frame() -> Arc<SkewFrame> {
    let oracle = Oracle::bs(2, 3)
        .unwrap()
        .with_family("z", w("y^4"), w("x"))
        .unwrap();
    SkewFrame::new(Arc::new(oracle), "z", -64, 64).unwrap()
}

/// A random element of `ZH`, built from short words in `z_{-2}, …, z_2`.
pub fn random_h_elt(rng: &mut impl Rng, frame: &Arc<SkewFrame>, terms: usize) -> GroupRingElt {
    let zs: Vec<Gen> = (-2..=2).map(|i| Gen::indexed("z", i)).collect();
    let raw: Vec<(IBig, Word)> = (0..rng.gen_range(1..=terms))
        .map(|_| {
            let mut c = rng.gen_range(1..=4i64);
            if rng.gen_bool(0.5) {
                c = -c;
            }
            (IBig::from(c), random_word(rng, &zs, 3, 2))
        })
        .collect();
    GroupRingElt::from_terms(frame.oracle(), raw).unwrap()
}

/// A random nonzero skew Laurent element with support in degrees `-3..=3`.
pub fn random_skew(rng: &mut impl Rng, frame: &Arc<SkewFrame>) -> SkewLaurent {
    let x = g("x");
    loop {
        let mut total = GroupRingElt::zero(frame.oracle());
        for _ in 0..rng.gen_range(1..=3) {
            let i = rng.gen_range(-3..=3i64);
            let a = random_h_elt(rng, frame, 3);
            total = total
                .add(&a.right_mul_word(&Word::power(x.clone(), i)).unwrap())
                .unwrap();
        }
        let s = frame.to_skew(&total).unwrap();
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn word_strategy(
    gens: Vec<Gen>,
    syllables: usize,
) -> impl proptest::strategy::Strategy<Value = Word> {
    use proptest::prelude::*;
    let n = gens.len();
    prop::collection::vec((0..n, prop_oneof![-4i64..=-1, 1i64..=4]), 0..=syllables).prop_map(
        move |parts| {
            let mut out = Word::identity();
            for (i, e) in parts {
                out.push(gens[i].clone(), IBig::from(e));
            }
            out
        },
    )
}
