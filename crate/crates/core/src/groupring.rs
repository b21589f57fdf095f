//! Integral group rings over oracle-backed groups and the skew Laurent
//! view `ZG = ZH[x^{±1}]` for Baumslag–Solitar groups, where `H` is the
//! kernel of the `x`-exponent sum.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use ibig::IBig;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::oracles::{Oracle, OracleKind};
use crate::par::{self, Parallelism};
use crate::words::{Gen, Word};

/// Products with at least this many monomial pairs are normalised in parallel.
const PARALLEL_PAIRS: usize = 512;

/// A finite integer combination of group elements, keyed by normal forms.
#[derive(Clone, Debug)]
pub struct GroupRingElt {
    oracle: Arc<Oracle>,
    terms: BTreeMap<Word, IBig>,
}

impl PartialEq for GroupRingElt {
    fn eq(&self, other: &Self) -> bool {
        same_oracle(&self.oracle, &other.oracle) && self.terms == other.terms
    }
}

impl Eq for GroupRingElt {}

fn same_oracle(a: &Arc<Oracle>, b: &Arc<Oracle>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn add_term(terms: &mut BTreeMap<Word, IBig>, key: Word, coef: IBig) {
    if coef.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coef);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += coef;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl GroupRingElt {
    pub fn zero(oracle: &Arc<Oracle>) -> GroupRingElt {
        GroupRingElt {
            oracle: oracle.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(oracle: &Arc<Oracle>) -> GroupRingElt {
        GroupRingElt::monomial(oracle, IBig::one(), &Word::identity()).expect("identity is valid")
    }

    pub fn monomial(oracle: &Arc<Oracle>, coef: IBig, w: &Word) -> Result<GroupRingElt> {
        let mut out = GroupRingElt::zero(oracle);
        add_term(&mut out.terms, oracle.nf_word(w)?, coef);
        Ok(out)
    }

    /// `Σ coef·w`, normalising every word.
    pub fn from_terms<I>(oracle: &Arc<Oracle>, terms: I) -> Result<GroupRingElt>
    where
        I: IntoIterator<Item = (IBig, Word)>,
    {
        let mut out = GroupRingElt::zero(oracle);
        for (c, w) in terms {
            add_term(&mut out.terms, oracle.nf_word(&w)?, c);
        }
        Ok(out)
    }

    pub fn oracle(&self) -> &Arc<Oracle> {
        &self.oracle
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &IBig)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Result<IBig> {
        let key = self.oracle.nf_word(w)?;
        Ok(self.terms.get(&key).cloned().unwrap_or_default())
    }

    fn check(&self, other: &GroupRingElt) -> Result<()> {
        if same_oracle(&self.oracle, &other.oracle) {
            Ok(())
        } else {
            Err(Error::OracleMismatch)
        }
    }

    pub fn add(&self, other: &GroupRingElt) -> Result<GroupRingElt> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            add_term(&mut out.terms, k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> GroupRingElt {
        self.scale(&-IBig::one())
    }

    pub fn sub(&self, other: &GroupRingElt) -> Result<GroupRingElt> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &IBig) -> GroupRingElt {
        let mut out = GroupRingElt::zero(&self.oracle);
        if !k.is_zero() {
            out.terms = self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect();
        }
        out
    }

    pub fn mul(&self, other: &GroupRingElt) -> Result<GroupRingElt> {
        self.check(other)?;
        let pairs: Vec<(&Word, &IBig, &Word, &IBig)> = self
            .terms
            .iter()
            .flat_map(|(a, ca)| other.terms.iter().map(move |(b, cb)| (a, ca, b, cb)))
            .collect();
        let mode = if pairs.len() >= PARALLEL_PAIRS {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        };
        let products = par::try_map(&pairs, mode, |(a, ca, b, cb)| {
            Ok::<_, Error>((self.oracle.nf_word(&a.mul(b))?, *ca * *cb))
        })?;
        let mut out = GroupRingElt::zero(&self.oracle);
        for (k, c) in products {
            add_term(&mut out.terms, k, c);
        }
        Ok(out)
    }

    /// `w · self`.
    pub fn left_mul_word(&self, w: &Word) -> Result<GroupRingElt> {
        self.map_keys(|k| w.mul(k))
    }

    /// `self · w`.
    pub fn right_mul_word(&self, w: &Word) -> Result<GroupRingElt> {
        self.map_keys(|k| k.mul(w))
    }

    /// Applies `f` to every group element and renormalises.
    pub fn map_keys(&self, f: impl Fn(&Word) -> Word) -> Result<GroupRingElt> {
        let mut out = GroupRingElt::zero(&self.oracle);
        for (k, c) in &self.terms {
            add_term(&mut out.terms, self.oracle.nf_word(&f(k))?, c.clone());
        }
        Ok(out)
    }

    /// Sum of coefficients.
    pub fn augmentation(&self) -> IBig {
        self.terms.values().fold(IBig::zero(), |acc, c| acc + c)
    }
}

fn fmt_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (&'a Word, &'a IBig)>,
{
    let mut first = true;
    for (w, c) in terms {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        write!(f, "{c}*{w}")?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms)
    }
}

/// The decomposition `G = H ⋊ ⟨x⟩` for a Baumslag–Solitar oracle carrying a
/// family `z_i = x^i y^k x^-i`. Elements of `H` are rendered as words in
/// the `z_i`, with indices confined to the window `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct SkewFrame {
    oracle: Arc<Oracle>,
    family: String,
    stable: Gen,
    base: Gen,
    window: (i64, i64),
    /// `ladder[j]` is the `y`-exponent of `z_j`, kept while integral.
    ladder: Vec<IBig>,
    /// `gcds[j] = gcd(ladder[0..=j])`.
    gcds: Vec<IBig>,
}

const LADDER_CAP: usize = 64;

fn gcd(a: &IBig, b: &IBig) -> IBig {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

impl SkewFrame {
    pub fn new(oracle: Arc<Oracle>, family: &str, lo: i64, hi: i64) -> Result<Arc<SkewFrame>> {
        let unsupported = || Error::UnsupportedOracle {
            op: "skew frame",
            oracle: oracle.kind_name().to_string(),
        };
        let OracleKind::BaumslagSolitar { m, n, stable, base } = oracle.kind().clone() else {
            return Err(unsupported());
        };
        let fam = oracle
            .family(family)
            .ok_or_else(|| Error::UnknownGenerator(Gen::new(family)))?;
        let k = match fam.base.syllables() {
            [s] if s.gen == base => s.exp.clone(),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "family {family} must have a power of {base} as base"
                )))
            }
        };
        if fam.conjugator != Word::gen(stable.clone()) {
            return Err(Error::InvalidArgument(format!(
                "family {family} must be conjugated by {stable}"
            )));
        }
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty window {lo}..{hi}")));
        }
        let (m, n) = (IBig::from(m), IBig::from(n));
        let mut ladder = vec![k.clone()];
        let mut gcds = vec![k.abs()];
        while ladder.len() < LADDER_CAP && !gcds.last().expect("nonempty").is_one() {
            let next = ladder.last().expect("nonempty") * &n;
            if !(&next % &m).is_zero() {
                break;
            }
            let next = next / &m;
            gcds.push(gcd(gcds.last().expect("nonempty"), &next));
            ladder.push(next);
        }
        Ok(Arc::new(SkewFrame {
            oracle,
            family: family.to_string(),
            stable,
            base,
            window: (lo, hi),
            ladder,
            gcds,
        }))
    }

    pub fn oracle(&self) -> &Arc<Oracle> {
        &self.oracle
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    /// Degree (x-exponent sum) of a group element.
    pub fn degree(&self, w: &Word) -> Result<i64> {
        let e = self.oracle.expand(w)?.exponent_sum(&self.stable);
        i64::try_from(&e).map_err(|_| Error::InvalidArgument("degree out of range".into()))
    }

    /// Writes `w = h · x^i` with `h ∈ H` in normal form.
    pub fn split(&self, w: &Word) -> Result<(Word, i64)> {
        let i = self.degree(w)?;
        let h = self
            .oracle
            .nf_word(&w.mul(&Word::power(self.stable.clone(), -i)))?;
        Ok((h, i))
    }

    /// `r = Σ c_j ladder[j]` with `0 ≤ c_j < gcds[j-1]/gcds[j]` for `j ≥ 1`.
    fn decompose(&self, r: &IBig) -> Option<Vec<IBig>> {
        let top = self.ladder.len() - 1;
        if !(r % &self.gcds[top]).is_zero() {
            return None;
        }
        let mut coeffs = vec![IBig::zero(); self.ladder.len()];
        let mut rest = r.clone();
        for j in (1..=top).rev() {
            let radix = &self.gcds[j - 1] / &self.gcds[j];
            let mut c = IBig::zero();
            while !((&rest - &c * &self.ladder[j]) % &self.gcds[j - 1]).is_zero() {
                c += 1;
                if c >= radix {
                    return None;
                }
            }
            rest -= &c * &self.ladder[j];
            coeffs[j] = c;
        }
        coeffs[0] = rest / &self.ladder[0];
        Some(coeffs)
    }

    /// Renders `h ∈ H` as a word in the family, checking the window.
    pub fn render(&self, h: &Word) -> Result<Word> {
        let native = self.oracle.expand(h)?;
        let failure = |reason: String| Error::FactorizationFailure {
            word: h.clone(),
            reason,
        };
        let mut p: i64 = 0;
        let mut out = Word::identity();
        for s in native.syllables() {
            if s.gen == self.stable {
                p += i64::try_from(&s.exp).map_err(|_| failure("degree overflow".into()))?;
                continue;
            }
            let coeffs = self.decompose(&s.exp).ok_or_else(|| {
                failure(format!(
                    "{}^{} is not a product of {} powers",
                    self.base, s.exp, self.family
                ))
            })?;
            for (j, c) in coeffs.iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let idx = p + j as i64;
                if idx < self.window.0 || idx > self.window.1 {
                    return Err(failure(format!(
                        "needs {}_{idx} outside {}..{}",
                        self.family, self.window.0, self.window.1
                    )));
                }
                out.push(Gen::indexed(&self.family, idx), c.clone());
            }
        }
        if p != 0 {
            return Err(failure("element has nonzero degree".into()));
        }
        Ok(out)
    }

    /// `x^i · a · x^-i`.
    pub fn twist(&self, a: &GroupRingElt, i: i64) -> Result<GroupRingElt> {
        let t = Word::power(self.stable.clone(), i);
        let ti = t.inv();
        a.map_keys(|k| t.mul(k).mul(&ti))
    }

    pub fn to_skew(self: &Arc<Self>, a: &GroupRingElt) -> Result<SkewLaurent> {
        if !same_oracle(a.oracle(), &self.oracle) {
            return Err(Error::OracleMismatch);
        }
        let mut coeffs: BTreeMap<i64, BTreeMap<Word, IBig>> = BTreeMap::new();
        for (key, c) in a.terms() {
            let (h, i) = self.split(key)?;
            self.render(&h)?;
            add_term(coeffs.entry(i).or_default(), h, c.clone());
        }
        let coeffs = coeffs
            .into_iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(i, terms)| {
                (
                    i,
                    GroupRingElt {
                        oracle: self.oracle.clone(),
                        terms,
                    },
                )
            })
            .collect();
        Ok(SkewLaurent {
            frame: self.clone(),
            coeffs,
        })
    }

    pub fn from_skew(&self, s: &SkewLaurent) -> Result<GroupRingElt> {
        let mut out = GroupRingElt::zero(&self.oracle);
        for (i, c) in &s.coeffs {
            out = out.add(&c.right_mul_word(&Word::power(self.stable.clone(), *i))?)?;
        }
        Ok(out)
    }

    /// An `H`-element with its keys rendered as family words.
    pub fn display_h(&self, a: &GroupRingElt) -> Result<String> {
        let mut rendered: BTreeMap<Word, IBig> = BTreeMap::new();
        for (k, c) in a.terms() {
            rendered.insert(self.render(k)?, c.clone());
        }
        Ok(FmtTerms(&rendered).to_string())
    }
}

struct FmtTerms<'a>(&'a BTreeMap<Word, IBig>);

impl fmt::Display for FmtTerms<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.0)
    }
}

/// `Σ_i a_i x^i` with `a_i` in `ZH`, keyed by normal forms in `G`.
#[derive(Clone, Debug)]
pub struct SkewLaurent {
    frame: Arc<SkewFrame>,
    coeffs: BTreeMap<i64, GroupRingElt>,
}

impl PartialEq for SkewLaurent {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for SkewLaurent {}

impl SkewLaurent {
    pub fn frame(&self) -> &Arc<SkewFrame> {
        &self.frame
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, GroupRingElt> {
        &self.coeffs
    }

    pub fn coeff(&self, i: i64) -> Option<&GroupRingElt> {
        self.coeffs.get(&i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest and highest degree with a nonzero coefficient.
    pub fn degree_bounds(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn length(&self) -> Result<i64> {
        let (lo, hi) = self.degree_bounds().ok_or(Error::ZeroElement)?;
        Ok(hi - lo)
    }

    /// Twisted product `(h x^i)(h' x^j) = h (x^i h' x^-i) x^{i+j}`.
    pub fn mul(&self, other: &SkewLaurent) -> Result<SkewLaurent> {
        let mut acc: BTreeMap<i64, GroupRingElt> = BTreeMap::new();
        let oracle = self.frame.oracle();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let term = a.mul(&self.frame.twist(b, *i)?)?;
                let slot = acc
                    .entry(i + j)
                    .or_insert_with(|| GroupRingElt::zero(oracle));
                *slot = slot.add(&term)?;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(SkewLaurent {
            frame: self.frame.clone(),
            coeffs: acc,
        })
    }

    /// Applies `x · _ · x⁻¹`: every coefficient is conjugated, degrees kept.
    pub fn conjugate_by_stable(&self) -> Result<SkewLaurent> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(i, c)| Ok((*i, self.frame.twist(c, 1)?)))
            .collect::<Result<_>>()?;
        Ok(SkewLaurent {
            frame: self.frame.clone(),
            coeffs,
        })
    }

    pub fn render(&self) -> Result<String> {
        if self.coeffs.is_empty() {
            return Ok("0".into());
        }
        let parts = self
            .coeffs
            .iter()
            .map(|(i, c)| Ok(format!("({})x^{i}", self.frame.display_h(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(parts.join(" + "))
    }
}

impl fmt::Display for SkewLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.render() {
            Ok(s) => write!(f, "{s}"),
            Err(e) => write!(f, "<{e}>"),
        }
    }
}
