//! Word problem for `BS(m,n) = ⟨t, y | t y^m t⁻¹ = y^n⟩`.
//!
//! Pinches `t y^{mk} t⁻¹ → y^{nk}` and `t⁻¹ y^{nk} t → y^{mk}` are removed
//! leftmost-innermost while the word is scanned; the canonical form also
//! pushes base powers rightwards through the stable letter, so that a
//! base exponent sitting before `t` lies in `[0, n)` and one before `t⁻¹`
//! lies in `[0, m)`. Uniqueness of that shape is the normal form theorem
//! for HNN extensions.

use ibig::ops::DivRemEuclid;
use ibig::IBig;
use num_traits::{Signed, Zero};

use crate::words::{Gen, Word};

pub(crate) struct Bs<'a> {
    pub m: IBig,
    pub n: IBig,
    pub stable: &'a Gen,
    pub base: &'a Gen,
}

/// Stack machine shared by reduction and canonicalisation: entries are
/// `(base exponent, stable sign)` pairs, `tail` is the trailing base power.
struct Machine<'a> {
    bs: &'a Bs<'a>,
    stack: Vec<(IBig, i8)>,
    tail: IBig,
    canonical: bool,
}

impl<'a> Machine<'a> {
    fn new(bs: &'a Bs<'a>, canonical: bool) -> Self {
        Machine {
            bs,
            stack: Vec::new(),
            tail: IBig::zero(),
            canonical,
        }
    }

    fn push_base(&mut self, e: &IBig) {
        self.tail += e;
    }

    fn push_stable(&mut self, eps: i8) {
        // t⁻¹ y^{nk} t = y^{mk} and t y^{mk} t⁻¹ = y^{nk}.
        let (divisor, image) = if eps > 0 {
            (&self.bs.n, &self.bs.m)
        } else {
            (&self.bs.m, &self.bs.n)
        };
        if let Some((_, last)) = self.stack.last() {
            if *last == -eps && (&self.tail % divisor).is_zero() {
                let (prev, _) = self.stack.pop().expect("stack is nonempty");
                self.tail = prev + &self.tail / divisor * image;
                return;
            }
        }
        if self.canonical {
            let (q, r) = (&self.tail).div_rem_euclid(divisor);
            self.stack.push((r, eps));
            self.tail = q * image;
        } else {
            let tail = std::mem::take(&mut self.tail);
            self.stack.push((tail, eps));
        }
    }

    fn run(mut self, w: &Word) -> (Word, usize) {
        for s in w.syllables() {
            if &s.gen == self.bs.base {
                self.push_base(&s.exp);
            } else {
                let eps = if s.exp.is_positive() { 1 } else { -1 };
                let count = u64::try_from(&s.exp.abs()).expect("stable exponent too large");
                for _ in 0..count {
                    self.push_stable(eps);
                }
            }
        }
        let stable_letters = self.stack.len();
        let mut out = Word::identity();
        for (r, eps) in self.stack {
            out.push(self.bs.base.clone(), r);
            out.push(self.bs.stable.clone(), IBig::from(eps));
        }
        out.push(self.bs.base.clone(), self.tail);
        (out, stable_letters)
    }
}

impl Bs<'_> {
    /// Canonical normal form of a word in the stable and base letters,
    /// together with its number of stable letters.
    pub fn normal_form(&self, w: &Word) -> (Word, usize) {
        Machine::new(self, true).run(w)
    }

    /// Pinch removal only; the output has no pinch but is not canonical.
    pub fn britton_reduce(&self, w: &Word) -> Word {
        Machine::new(self, false).run(w).0
    }

    /// True when no pinch `t^ε y^k t^-ε` with `k` in the matching subgroup occurs.
    pub fn has_no_pinch(&self, w: &Word) -> bool {
        let letters = w.syllables();
        let mut last_stable: Option<i8> = None;
        let mut between = IBig::zero();
        for s in letters {
            if &s.gen == self.base {
                between += &s.exp;
                continue;
            }
            let first = if s.exp.is_positive() { 1i8 } else { -1 };
            if let Some(prev) = last_stable {
                let divisor = if prev > 0 { &self.m } else { &self.n };
                if prev == -first && (&between % divisor).is_zero() {
                    return false;
                }
            }
            last_stable = Some(first);
            between = IBig::zero();
        }
        true
    }
}
