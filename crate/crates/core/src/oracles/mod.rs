//! Word-problem oracles producing canonical normal forms.
//!
//! Supported families:
//!
//! * free groups,
//! * Baumslag–Solitar groups `⟨t, y | t y^m t⁻¹ = y^n⟩` (Britton reduction),
//! * cyclic amalgams `⟨a, b | a^m = b^n⟩`,
//! * finite windows of the chain `⟨u_i | u_{i+1}^q = u_i^p⟩`.
//!
//! An oracle may also carry *families* of derived generators: a family
//! `z` with base `β` and conjugator `γ` lets words mention `z_i`, which
//! stands for `γ^i β γ^-i` (and a bare `z` for `β`).

mod amalgam;
mod britton;
mod chain;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use ibig::IBig;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::par::{self, Parallelism};
use crate::words::{Gen, Word};

use amalgam::Vertex;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OracleKind {
    Free {
        gens: Vec<Gen>,
    },
    /// `stable · base^m · stable⁻¹ = base^n`, `m, n > 0`.
    BaumslagSolitar {
        m: i64,
        n: i64,
        stable: Gen,
        base: Gen,
    },
    /// `a^m = b^n` as given by the caller; internally both exponents are
    /// made positive by inverting the corresponding generator.
    CyclicAmalgam {
        a: Gen,
        b: Gen,
        m: i64,
        n: i64,
    },
    /// `u_{i+1}^q = u_i^p` for `lo <= i < hi`.
    ChainAmalgam {
        family: String,
        p: i64,
        q: i64,
        lo: i64,
        hi: i64,
    },
}

/// Derived generators `name_i = conjugator^i · base · conjugator^-i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    pub name: String,
    pub base: Word,
    pub conjugator: Word,
}

impl Family {
    pub fn value(&self, index: i64) -> Word {
        self.base.conj(&self.conjugator.pow(&IBig::from(index)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Certificate {
    FreelyReduced,
    /// Britton-reduced with this many stable letters.
    Britton {
        stable_letters: usize,
    },
    /// `c^central σ₁⋯σ_k` with `k = syllables`.
    Amalgam {
        central: IBig,
        syllables: usize,
    },
    /// Coset representatives followed by the edge power `carry`.
    Chain {
        carry: IBig,
        pieces: usize,
    },
}

/// A canonical representative: equal group elements give equal values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    pub word: Word,
    pub certificate: Certificate,
}

impl NormalForm {
    pub fn is_identity(&self) -> bool {
        self.word.is_identity()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Oracle {
    kind: OracleKind,
    families: Vec<Family>,
}

impl Oracle {
    pub fn free(gens: Vec<Gen>) -> Oracle {
        Oracle {
            kind: OracleKind::Free { gens },
            families: Vec::new(),
        }
    }

    /// `BS(m,n)` on the letters `x` (stable) and `y` (base).
    pub fn bs(m: i64, n: i64) -> Result<Oracle> {
        Oracle::bs_on(m, n, Gen::new("x"), Gen::new("y"))
    }

    pub fn bs_on(m: i64, n: i64, stable: Gen, base: Gen) -> Result<Oracle> {
        if m <= 0 || n <= 0 {
            return Err(Error::InvalidArgument(format!(
                "Baumslag-Solitar parameters must be positive, got ({m},{n})"
            )));
        }
        if stable == base {
            return Err(Error::GeneratorCollision(base));
        }
        Ok(Oracle {
            kind: OracleKind::BaumslagSolitar { m, n, stable, base },
            families: Vec::new(),
        })
    }

    /// `⟨a, b | a^m = b^n⟩`.
    pub fn cyclic_amalgam(a: Gen, b: Gen, m: i64, n: i64) -> Result<Oracle> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument(
                "amalgam exponents must be nonzero".into(),
            ));
        }
        if a == b {
            return Err(Error::GeneratorCollision(a));
        }
        Ok(Oracle {
            kind: OracleKind::CyclicAmalgam { a, b, m, n },
            families: Vec::new(),
        })
    }

    /// `⟨u_lo, …, u_hi | u_{i+1}^q = u_i^p⟩`.
    pub fn chain(family: &str, p: i64, q: i64, lo: i64, hi: i64) -> Result<Oracle> {
        if p <= 0 || q <= 0 {
            return Err(Error::InvalidArgument(format!(
                "chain exponents must be positive, got ({p},{q})"
            )));
        }
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty window {lo}..{hi}")));
        }
        Ok(Oracle {
            kind: OracleKind::ChainAmalgam {
                family: family.to_string(),
                p,
                q,
                lo,
                hi,
            },
            families: Vec::new(),
        })
    }

    /// Registers a family of derived generators.
    pub fn with_family(mut self, name: &str, base: Word, conjugator: Word) -> Result<Oracle> {
        if self.native_gens().iter().any(|g| g.name() == name)
            || self.families.iter().any(|f| f.name == name)
        {
            return Err(Error::GeneratorCollision(Gen::new(name)));
        }
        if let OracleKind::ChainAmalgam { family, .. } = &self.kind {
            if family == name {
                return Err(Error::GeneratorCollision(Gen::new(name)));
            }
        }
        self.expand(&base)?;
        self.expand(&conjugator)?;
        self.families.push(Family {
            name: name.to_string(),
            base,
            conjugator,
        });
        Ok(self)
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn family(&self, name: &str) -> Option<&Family> {
        self.families.iter().find(|f| f.name == name)
    }

    pub fn stable_letter(&self) -> Option<&Gen> {
        match &self.kind {
            OracleKind::BaumslagSolitar { stable, .. } => Some(stable),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            OracleKind::Free { .. } => "free",
            OracleKind::BaumslagSolitar { .. } => "Baumslag-Solitar",
            OracleKind::CyclicAmalgam { .. } => "cyclic amalgam",
            OracleKind::ChainAmalgam { .. } => "chain amalgam",
        }
    }

    /// Generators the normal forms are written in.
    pub fn native_gens(&self) -> Vec<Gen> {
        match &self.kind {
            OracleKind::Free { gens } => gens.clone(),
            OracleKind::BaumslagSolitar { stable, base, .. } => vec![stable.clone(), base.clone()],
            OracleKind::CyclicAmalgam { a, b, .. } => vec![a.clone(), b.clone()],
            OracleKind::ChainAmalgam { family, lo, hi, .. } => {
                (*lo..=*hi).map(|i| Gen::indexed(family, i)).collect()
            }
        }
    }

    fn check_native(&self, g: &Gen) -> Result<()> {
        match &self.kind {
            OracleKind::Free { gens } if gens.contains(g) => Ok(()),
            OracleKind::BaumslagSolitar { stable, base, .. } if g == stable || g == base => Ok(()),
            OracleKind::CyclicAmalgam { a, b, .. } if g == a || g == b => Ok(()),
            OracleKind::ChainAmalgam { family, lo, hi, .. }
                if g.in_family(family) && !g.is_primed() =>
            {
                match g.index() {
                    Some(i) if (*lo..=*hi).contains(&i) => Ok(()),
                    Some(_) => Err(Error::WindowExceeded {
                        gen: g.clone(),
                        lo: *lo,
                        hi: *hi,
                    }),
                    None => Err(Error::UnknownGenerator(g.clone())),
                }
            }
            _ => Err(Error::UnknownGenerator(g.clone())),
        }
    }

    /// Value of a family generator in native letters, if `g` is one.
    pub fn family_value(&self, g: &Gen) -> Option<Word> {
        if g.is_primed() {
            return None;
        }
        let fam = self.family(g.name())?;
        Some(fam.value(g.index().unwrap_or(0)))
    }

    /// Rewrites family generators into native letters and validates the rest.
    pub fn expand(&self, w: &Word) -> Result<Word> {
        let mut out = Word::identity();
        for s in w.syllables() {
            match self.family_value(&s.gen) {
                Some(value) => out.push_word(&value.pow(&s.exp)),
                None => {
                    self.check_native(&s.gen)?;
                    out.push(s.gen.clone(), s.exp.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn nf(&self, w: &Word) -> Result<NormalForm> {
        let native = self.expand(w)?;
        Ok(self.nf_native(&native))
    }

    fn nf_native(&self, w: &Word) -> NormalForm {
        match &self.kind {
            OracleKind::Free { .. } => NormalForm {
                word: w.clone(),
                certificate: Certificate::FreelyReduced,
            },
            OracleKind::BaumslagSolitar { m, n, stable, base } => {
                let bs = britton::Bs {
                    m: IBig::from(*m),
                    n: IBig::from(*n),
                    stable,
                    base,
                };
                let (word, stable_letters) = bs.normal_form(w);
                NormalForm {
                    word,
                    certificate: Certificate::Britton { stable_letters },
                }
            }
            OracleKind::CyclicAmalgam { a, b, m, n } => {
                let sa = if *m > 0 { IBig::one() } else { -IBig::one() };
                let sb = if *n > 0 { IBig::one() } else { -IBig::one() };
                let input = w.syllables().iter().map(|s| {
                    if &s.gen == a {
                        (Vertex::A, &s.exp * &sa)
                    } else {
                        (Vertex::B, &s.exp * &sb)
                    }
                });
                let form = amalgam::reduce(input, &IBig::from(m.abs()), &IBig::from(n.abs()));
                let mut word = Word::power(a.clone(), IBig::from(*m) * &form.central);
                for (v, e) in &form.syllables {
                    match v {
                        Vertex::A => word.push(a.clone(), e * &sa),
                        Vertex::B => word.push(b.clone(), e * &sb),
                    }
                }
                NormalForm {
                    word,
                    certificate: Certificate::Amalgam {
                        central: form.central,
                        syllables: form.syllables.len(),
                    },
                }
            }
            OracleKind::ChainAmalgam {
                family,
                p,
                q,
                lo,
                hi,
            } => {
                let syl: Vec<chain::Syl> = w
                    .syllables()
                    .iter()
                    .map(|s| (s.gen.index().expect("validated"), s.exp.clone()))
                    .collect();
                let form = chain::normal_form(&syl, *lo, *hi, &IBig::from(*p), &IBig::from(*q));
                let word = Word::from_syllables(
                    form.syllables
                        .into_iter()
                        .map(|(i, e)| (Gen::indexed(family, i), e)),
                );
                NormalForm {
                    word,
                    certificate: Certificate::Chain {
                        carry: form.carry,
                        pieces: form.pieces,
                    },
                }
            }
        }
    }

    pub fn nf_word(&self, w: &Word) -> Result<Word> {
        Ok(self.nf(w)?.word)
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        Ok(self.nf(w)?.is_identity())
    }

    pub fn equal(&self, a: &Word, b: &Word) -> Result<bool> {
        self.is_trivial(&a.mul(&b.inv()))
    }

    pub fn nf_batch(&self, words: &[Word], mode: Parallelism) -> Result<Vec<NormalForm>> {
        par::try_map(words, mode, |w| self.nf(w))
    }

    /// Leftmost-innermost pinch removal without canonicalisation.
    pub fn britton_reduce(&self, w: &Word) -> Result<Word> {
        match &self.kind {
            OracleKind::BaumslagSolitar { m, n, stable, base } => {
                let native = self.expand(w)?;
                let bs = britton::Bs {
                    m: IBig::from(*m),
                    n: IBig::from(*n),
                    stable,
                    base,
                };
                Ok(bs.britton_reduce(&native))
            }
            _ => Err(self.unsupported("britton_reduce")),
        }
    }

    /// True when the native word contains no pinch.
    pub fn is_pinch_free(&self, w: &Word) -> Result<bool> {
        match &self.kind {
            OracleKind::BaumslagSolitar { m, n, stable, base } => {
                let native = self.expand(w)?;
                let bs = britton::Bs {
                    m: IBig::from(*m),
                    n: IBig::from(*n),
                    stable,
                    base,
                };
                Ok(bs.has_no_pinch(&native))
            }
            _ => Err(self.unsupported("is_pinch_free")),
        }
    }

    fn unsupported(&self, op: &'static str) -> Error {
        Error::UnsupportedOracle {
            op,
            oracle: self.kind_name().to_string(),
        }
    }

    /// Returns `t` with `w = g^{k t}` when `w` lies in `⟨g^k⟩`. `g` must be
    /// a vertex generator of an amalgam or the base letter of a BS group.
    pub fn in_cyclic_subgroup(&self, w: &Word, g: &Word, k: &IBig) -> Result<Option<IBig>> {
        if !k.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "subgroup exponent must be positive, got {k}"
            )));
        }
        let letter = match g.syllables() {
            [s] if s.exp.is_one() => s.gen.clone(),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "{g} is not a single generator"
                )))
            }
        };
        let nf = self.nf(w)?;
        let exponent = match &self.kind {
            OracleKind::BaumslagSolitar { base, .. } => {
                if &letter != base {
                    return Err(Error::InvalidArgument(format!(
                        "{letter} is not the base generator"
                    )));
                }
                match nf.word.syllables() {
                    [] => Some(IBig::zero()),
                    [s] if &s.gen == base => Some(s.exp.clone()),
                    _ => None,
                }
            }
            OracleKind::CyclicAmalgam { a, b, .. } => {
                if &letter != a && &letter != b {
                    return Err(Error::InvalidArgument(format!(
                        "{letter} is not a vertex generator"
                    )));
                }
                // c^t σ lies in ⟨a⟩ iff σ is empty or a single a-syllable,
                // and in ⟨b⟩ iff σ is empty or a single b-syllable. The
                // word representation of c^t is a^{mt}, so re-express it.
                let (central, syllables) = match &nf.certificate {
                    Certificate::Amalgam { central, syllables } => (central.clone(), *syllables),
                    _ => unreachable!("amalgam oracle produced a foreign certificate"),
                };
                let (mv, nv) = match &self.kind {
                    OracleKind::CyclicAmalgam { m, n, .. } => (IBig::from(*m), IBig::from(*n)),
                    _ => unreachable!(),
                };
                let tail = nf.word.syllables().last();
                match syllables {
                    0 if &letter == a => Some(&mv * &central),
                    0 => Some(&nv * &central),
                    1 => {
                        let s = tail.expect("one syllable");
                        if s.gen != letter {
                            None
                        } else if &letter == a {
                            // a^{mt + r} was merged into a single syllable.
                            Some(s.exp.clone())
                        } else {
                            Some(&nv * &central + &s.exp)
                        }
                    }
                    _ => None,
                }
            }
            _ => return Err(self.unsupported("in_cyclic_subgroup")),
        };
        Ok(exponent.and_then(|e| {
            if (&e % k).is_zero() {
                Some(e / k)
            } else {
                None
            }
        }))
    }

    /// Checks that `witness`, read with its letters replaced by the given
    /// subgroup generators, equals `target`.
    pub fn witness_generation(
        &self,
        target: &Word,
        sub_gens: &[(Gen, Word)],
        witness: &Word,
    ) -> Result<bool> {
        let images: BTreeMap<Gen, Word> = sub_gens.iter().cloned().collect();
        let image = match witness.substitute(&images) {
            Ok(w) => w,
            Err(Error::MissingImage(g)) => return Err(Error::ArityMismatch(g)),
            Err(e) => return Err(e),
        };
        self.equal(&image, target)
    }

    /// Parses a CLI descriptor such as `bs:2,3`, `amalgam:3,2`,
    /// `free:x,y`, `chain:3,2:0..4`, optionally followed by families
    /// `+z=y^4` (conjugator defaults to the stable letter) or
    /// `+z=y^4@x`.
    pub fn from_descriptor(s: &str) -> Result<Oracle> {
        let bad = || Error::InvalidDescriptor(s.to_string());
        let mut parts = s.split('+');
        let head = parts.next().ok_or_else(bad)?.trim();
        let fields: Vec<&str> = head.split(':').collect();
        let ints = |f: &str| -> Result<Vec<i64>> {
            f.split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect()
        };
        let names = |f: &str| -> Result<Vec<Gen>> {
            f.split(',').map(|t| t.trim().parse::<Gen>()).collect()
        };
        let mut oracle = match fields.as_slice() {
            ["free", gens] => Oracle::free(names(gens)?),
            ["bs", mn] | ["bs", mn, _] => {
                let v = ints(mn)?;
                let [m, n] = v[..] else { return Err(bad()) };
                let (stable, base) = match fields.get(2) {
                    Some(nm) => match names(nm)?.as_slice() {
                        [t, y] => (t.clone(), y.clone()),
                        _ => return Err(bad()),
                    },
                    None => (Gen::new("x"), Gen::new("y")),
                };
                Oracle::bs_on(m, n, stable, base)?
            }
            ["amalgam", mn] | ["amalgam", mn, _] => {
                let v = ints(mn)?;
                let [m, n] = v[..] else { return Err(bad()) };
                let (a, b) = match fields.get(2) {
                    Some(nm) => match names(nm)?.as_slice() {
                        [a, b] => (a.clone(), b.clone()),
                        _ => return Err(bad()),
                    },
                    None => (Gen::new("a"), Gen::new("b")),
                };
                Oracle::cyclic_amalgam(a, b, m, n)?
            }
            ["chain", pq, window] | ["chain", pq, window, _] => {
                let v = ints(pq)?;
                let [p, q] = v[..] else { return Err(bad()) };
                let (lo, hi) = window.split_once("..").ok_or_else(bad)?;
                let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
                let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
                let family = fields.get(3).copied().unwrap_or("u");
                Oracle::chain(family, p, q, lo, hi)?
            }
            _ => return Err(bad()),
        };
        for fam in parts {
            let (name, rest) = fam.split_once('=').ok_or_else(bad)?;
            let (base, conj) = match rest.split_once('@') {
                Some((b, c)) => (b.parse::<Word>()?, c.parse::<Word>()?),
                None => {
                    let stable = oracle.stable_letter().cloned().ok_or_else(bad)?;
                    (rest.parse::<Word>()?, Word::gen(stable))
                }
            };
            oracle = oracle.with_family(name.trim(), base, conj)?;
        }
        Ok(oracle)
    }
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OracleKind::Free { gens } => {
                let names: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
                write!(f, "free:{}", names.join(","))?;
            }
            OracleKind::BaumslagSolitar { m, n, stable, base } => {
                write!(f, "bs:{m},{n}:{stable},{base}")?;
            }
            OracleKind::CyclicAmalgam { a, b, m, n } => write!(f, "amalgam:{m},{n}:{a},{b}")?,
            OracleKind::ChainAmalgam {
                family,
                p,
                q,
                lo,
                hi,
            } => write!(f, "chain:{p},{q}:{lo}..{hi}:{family}")?,
        }
        for fam in &self.families {
            write!(f, "+{}={}@{}", fam.name, fam.base, fam.conjugator)?;
        }
        Ok(())
    }
}

/// Shared handle used by group rings and Cayley balls.
pub type OracleRef = Arc<Oracle>;
