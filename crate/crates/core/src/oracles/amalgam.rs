//! Normal forms in `⟨a, b | a^m = b^n⟩` with `m, n > 0` (signs are
//! normalised away by the caller). The element `c = a^m = b^n` is central;
//! every element is uniquely `c^t σ₁⋯σ_k` with the σ's alternating between
//! `a^r` (`0 < r < m`) and `b^s` (`0 < s < n`).

use ibig::ops::DivRemEuclid;
use ibig::IBig;
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Vertex {
    A,
    B,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct AmalgamForm {
    pub central: IBig,
    pub syllables: Vec<(Vertex, IBig)>,
}

/// Reduces syllables given in the internal (sign-normalised) letters.
pub(crate) fn reduce<I>(syllables: I, m: &IBig, n: &IBig) -> AmalgamForm
where
    I: IntoIterator<Item = (Vertex, IBig)>,
{
    let mut form = AmalgamForm::default();
    for (v, e) in syllables {
        let mut e = e;
        if let Some((top, _)) = form.syllables.last() {
            if *top == v {
                e += form.syllables.pop().expect("nonempty").1;
            }
        }
        let modulus = match v {
            Vertex::A => m,
            Vertex::B => n,
        };
        let (q, r) = e.div_rem_euclid(modulus);
        form.central += q;
        if !r.is_zero() {
            form.syllables.push((v, r));
        }
    }
    form
}
