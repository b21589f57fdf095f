//! Free-group words over indexed generator symbols.
//!
//! A [`Word`] is stored as a run-length sequence of syllables `g^e`, always
//! freely reduced: adjacent syllables carry distinct generators and no
//! exponent is zero. Exponents are arbitrary precision.
//!
//! The text syntax is a whitespace separated list of syllables
//! `name[_index][']^exp`, for example `x y^2 x^-1 y^-3`, `z_1^2 z_0^-3`
//! or `x'^3`. The identity is written `1` (the empty string is accepted too).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use ibig::IBig;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A generator symbol: a name, an optional family index and a prime flag.
///
/// Ordering is by name, then index (unindexed first), then prime.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen {
    name: Arc<str>,
    index: Option<i64>,
    primed: bool,
}

impl Gen {
    pub fn new(name: &str) -> Gen {
        Gen {
            name: Arc::from(name),
            index: None,
            primed: false,
        }
    }

    pub fn indexed(name: &str, index: i64) -> Gen {
        Gen {
            name: Arc::from(name),
            index: Some(index),
            primed: false,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> Option<i64> {
        self.index
    }

    pub fn is_primed(&self) -> bool {
        self.primed
    }

    pub fn with_index(&self, index: Option<i64>) -> Gen {
        Gen {
            name: self.name.clone(),
            index,
            primed: self.primed,
        }
    }

    pub fn with_prime(&self, primed: bool) -> Gen {
        Gen {
            name: self.name.clone(),
            index: self.index,
            primed,
        }
    }

    pub fn primed(&self) -> Gen {
        self.with_prime(true)
    }

    pub fn unprimed(&self) -> Gen {
        self.with_prime(false)
    }

    pub fn in_family(&self, family: &str) -> bool {
        &*self.name == family
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if let Some(i) = self.index {
            write!(f, "_{i}")?;
        }
        if self.primed {
            f.write_str("'")?;
        }
        Ok(())
    }
}

impl FromStr for Gen {
    type Err = Error;

    fn from_str(s: &str) -> Result<Gen> {
        let s = s.trim();
        let (gen, exp) = parse_syllable(s, 0)?;
        if !exp.is_one() {
            return Err(Error::Parse {
                column: 0,
                message: format!("`{s}` carries an exponent; expected a bare generator"),
            });
        }
        Ok(gen)
    }
}

/// One run `gen^exp` of a word; `exp` is never zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub gen: Gen,
    pub exp: IBig,
}

/// A freely reduced word in a free group.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn gen(g: Gen) -> Word {
        Word::power(g, IBig::one())
    }

    pub fn power(g: Gen, exp: impl Into<IBig>) -> Word {
        let exp = exp.into();
        let mut w = Word::identity();
        w.push(g, exp);
        w
    }

    /// Builds a word from arbitrary syllables, reducing as it goes.
    pub fn from_syllables<I>(syllables: I) -> Word
    where
        I: IntoIterator<Item = (Gen, IBig)>,
    {
        let mut w = Word::identity();
        for (g, e) in syllables {
            w.push(g, e);
        }
        w
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn syllable_len(&self) -> usize {
        self.syllables.len()
    }

    /// Total number of letters, i.e. the sum of absolute exponents.
    pub fn letter_len(&self) -> IBig {
        self.syllables
            .iter()
            .fold(IBig::zero(), |acc, s| acc + s.exp.abs())
    }

    /// Appends `g^exp`, merging with the last syllable and cancelling.
    pub fn push(&mut self, g: Gen, exp: IBig) {
        if exp.is_zero() {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.gen == g => {
                last.exp += exp;
                if last.exp.is_zero() {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push(Syllable { gen: g, exp }),
        }
    }

    pub fn push_word(&mut self, other: &Word) {
        for s in &other.syllables {
            self.push(s.gen.clone(), s.exp.clone());
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.push_word(other);
        out
    }

    pub fn inv(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    gen: s.gen.clone(),
                    exp: -&s.exp,
                })
                .collect(),
        }
    }

    /// `a w a⁻¹`.
    pub fn conj(&self, by: &Word) -> Word {
        by.mul(self).mul(&by.inv())
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn comm(a: &Word, b: &Word) -> Word {
        a.mul(b).mul(&a.inv()).mul(&b.inv())
    }

    /// Integer power; conjugates of a single syllable are raised in place.
    pub fn pow(&self, k: &IBig) -> Word {
        if k.is_zero() || self.is_identity() {
            return Word::identity();
        }
        let (conjugator, core) = self.cyclic_core();
        if core.syllables.len() == 1 {
            let s = &core.syllables[0];
            return Word::power(s.gen.clone(), &s.exp * k).conj(&conjugator);
        }
        let base = if k.is_negative() {
            self.inv()
        } else {
            self.clone()
        };
        let n = usize::try_from(&k.abs()).expect("word power exponent too large");
        let mut out = Word::identity();
        for _ in 0..n {
            out.push_word(&base);
        }
        out
    }

    pub fn exponent_sum(&self, g: &Gen) -> IBig {
        self.syllables
            .iter()
            .filter(|s| &s.gen == g)
            .fold(IBig::zero(), |acc, s| acc + &s.exp)
    }

    pub fn gens(&self) -> BTreeSet<Gen> {
        self.syllables.iter().map(|s| s.gen.clone()).collect()
    }

    pub fn contains_gen(&self, g: &Gen) -> bool {
        self.syllables.iter().any(|s| &s.gen == g)
    }

    /// Homomorphic image under `images`; every occurring generator must be mapped.
    pub fn substitute(&self, images: &BTreeMap<Gen, Word>) -> Result<Word> {
        let mut out = Word::identity();
        for s in &self.syllables {
            let image = images
                .get(&s.gen)
                .ok_or_else(|| Error::MissingImage(s.gen.clone()))?;
            out.push_word(&image.pow(&s.exp));
        }
        Ok(out)
    }

    /// Like [`Word::substitute`] but leaves unmapped generators in place.
    pub fn substitute_partial(&self, images: &BTreeMap<Gen, Word>) -> Word {
        let mut out = Word::identity();
        for s in &self.syllables {
            match images.get(&s.gen) {
                Some(image) => out.push_word(&image.pow(&s.exp)),
                None => out.push(s.gen.clone(), s.exp.clone()),
            }
        }
        out
    }

    /// Renames generators letter by letter.
    pub fn map_gens(&self, f: impl Fn(&Gen) -> Gen) -> Word {
        Word::from_syllables(self.syllables.iter().map(|s| (f(&s.gen), s.exp.clone())))
    }

    /// Adds `delta` to the index of every generator of `family`.
    pub fn shift_indices(&self, family: &str, delta: i64) -> Word {
        if delta == 0 {
            return self.clone();
        }
        self.map_gens(|g| match g.index() {
            Some(i) if g.in_family(family) => g.with_index(Some(i + delta)),
            _ => g.clone(),
        })
    }

    /// Writes the word as `u c u⁻¹` with `c` cyclically reduced.
    pub fn cyclic_core(&self) -> (Word, Word) {
        let mut lo = 0;
        let mut hi = self.syllables.len();
        let mut conjugator = Word::identity();
        let mut core: Vec<Syllable>;
        loop {
            if hi - lo < 2 {
                core = self.syllables[lo..hi].to_vec();
                break;
            }
            let first = &self.syllables[lo];
            let last = &self.syllables[hi - 1];
            if first.gen != last.gen {
                core = self.syllables[lo..hi].to_vec();
                break;
            }
            let sum = &first.exp + &last.exp;
            if sum.is_zero() {
                conjugator.push(first.gen.clone(), first.exp.clone());
                lo += 1;
                hi -= 1;
                continue;
            }
            // Partial cancellation: keep the surviving power at the end.
            conjugator.push(first.gen.clone(), first.exp.clone());
            core = self.syllables[lo + 1..hi - 1].to_vec();
            core.push(Syllable {
                gen: first.gen.clone(),
                exp: sum,
            });
            break;
        }
        (conjugator, Word { syllables: core })
    }

    /// A cyclically reduced conjugate. When the first and last syllables
    /// share a generator, the first one is moved onto the end.
    pub fn cyclically_reduced(&self) -> Word {
        self.cyclic_core().1
    }

    /// Cyclic rotation starting at syllable `k` (then re-reduced).
    pub fn rotate(&self, k: usize) -> Word {
        let k = k % self.syllables.len().max(1);
        let mut out = Word::identity();
        for s in self.syllables[k..].iter().chain(&self.syllables[..k]) {
            out.push(s.gen.clone(), s.exp.clone());
        }
        out
    }

    /// Expands into single letters `(g, ±1)`; `None` if longer than `limit`.
    pub fn letters(&self, limit: usize) -> Option<Vec<(Gen, i8)>> {
        let mut out = Vec::new();
        for s in &self.syllables {
            let n = usize::try_from(&s.exp.abs()).ok()?;
            if out.len() + n > limit {
                return None;
            }
            let sign = if s.exp.is_positive() { 1 } else { -1 };
            out.extend(std::iter::repeat_n((s.gen.clone(), sign), n));
        }
        Some(out)
    }

    pub fn from_letters<'a, I>(letters: I) -> Word
    where
        I: IntoIterator<Item = &'a (Gen, i8)>,
    {
        Word::from_syllables(
            letters
                .into_iter()
                .map(|(g, s)| (g.clone(), IBig::from(*s))),
        )
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", s.gen)?;
            if !s.exp.is_one() {
                write!(f, "^{}", s.exp)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut w = Word::identity();
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, c) in s.char_indices() {
            if c.is_whitespace() {
                if let Some(st) = start.take() {
                    tokens.push((st, &s[st..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(st) = start {
            tokens.push((st, &s[st..]));
        }
        if tokens.len() == 1 && tokens[0].1 == "1" {
            return Ok(w);
        }
        for (col, tok) in tokens {
            let (g, e) = parse_syllable(tok, col)?;
            w.push(g, e);
        }
        Ok(w)
    }
}

fn parse_err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        column,
        message: message.into(),
    }
}

fn parse_signed(s: &str, column: usize) -> Result<(IBig, usize)> {
    let bytes = s.as_bytes();
    let mut end = 0;
    if end < bytes.len() && bytes[end] == b'-' {
        end += 1;
    }
    let digits_start = end;
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    if end == digits_start {
        return Err(parse_err(column + end, "expected an integer"));
    }
    let value = IBig::from_str_radix(&s[..end], 10)
        .map_err(|e| parse_err(column, format!("bad integer: {e}")))?;
    Ok((value, end))
}

/// Parses one syllable token; `column` is the token's offset in the input.
fn parse_syllable(tok: &str, column: usize) -> Result<(Gen, IBig)> {
    let bytes = tok.as_bytes();
    let mut pos = 0;
    if pos >= bytes.len() || !bytes[pos].is_ascii_alphabetic() {
        return Err(parse_err(
            column,
            format!("unexpected character in `{tok}`; a generator name must start with a letter"),
        ));
    }
    while pos < bytes.len() && bytes[pos].is_ascii_alphanumeric() {
        pos += 1;
    }
    let name = &tok[..pos];
    let mut index = None;
    if pos < bytes.len() && bytes[pos] == b'_' {
        pos += 1;
        let (value, used) = parse_signed(&tok[pos..], column + pos)?;
        let value = i64::try_from(&value)
            .map_err(|_| parse_err(column + pos, "generator index out of range"))?;
        index = Some(value);
        pos += used;
    }
    let mut primed = false;
    if pos < bytes.len() && bytes[pos] == b'\'' {
        primed = true;
        pos += 1;
    }
    let mut exp = IBig::one();
    if pos < bytes.len() && bytes[pos] == b'^' {
        pos += 1;
        let (value, used) = parse_signed(&tok[pos..], column + pos)?;
        if value.is_zero() {
            return Err(parse_err(column + pos, "exponent 0 is not allowed"));
        }
        exp = value;
        pos += used;
    }
    if pos < bytes.len() {
        let c = tok[pos..].chars().next().unwrap_or('?');
        return Err(parse_err(
            column + pos,
            format!("unexpected character `{c}`"),
        ));
    }
    let gen = Gen {
        name: Arc::from(name),
        index,
        primed,
    };
    Ok((gen, exp))
}

/// Parses a word literal, panicking on malformed input. Meant for constants.
pub fn w(s: &str) -> Word {
    s.parse()
        .unwrap_or_else(|e| panic!("bad word literal `{s}`: {e}"))
}

/// Parses a generator literal, panicking on malformed input.
pub fn g(s: &str) -> Gen {
    s.parse()
        .unwrap_or_else(|e| panic!("bad generator literal `{s}`: {e}"))
}
