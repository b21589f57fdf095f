//! Normal forms in the line of amalgams `⟨u_lo, …, u_hi | u_{i+1}^q = u_i^p⟩`.
//!
//! The window `[lo, hi]` is split as `G[lo, hi-1] *_C ⟨u_hi⟩` with
//! `C = ⟨u_{hi-1}^p⟩ = ⟨u_hi^q⟩`, recursively. A normal form is a sequence
//! of alternating coset representatives followed by a power of the edge
//! generator, written as a trailing power of `u_hi`. Representatives of
//! `G[lo, hi-1] / C` are normal forms of the smaller group whose trailing
//! `u_{hi-1}` exponent is reduced into `[0, p)`.

use ibig::ops::DivRemEuclid;
use ibig::IBig;
use num_traits::Zero;

pub(crate) type Syl = (i64, IBig);

enum Rep {
    Lower(Vec<Syl>),
    Top(IBig),
}

pub(crate) struct ChainForm {
    pub syllables: Vec<Syl>,
    pub carry: IBig,
    pub pieces: usize,
}

fn push_merge(out: &mut Vec<Syl>, idx: i64, e: IBig) {
    if e.is_zero() {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.0 == idx {
            last.1 += e;
            if last.1.is_zero() {
                out.pop();
            }
            return;
        }
    }
    out.push((idx, e));
}

/// Splits a normal form of `G[lo, top]` as `rep · (u_top^p)^k` and returns
/// `(rep, k)`. The rep is empty exactly when the element lies in `⟨u_top^p⟩`.
pub(crate) fn split_edge(nf: Vec<Syl>, top: i64, p: &IBig) -> (Vec<Syl>, IBig) {
    let mut prefix = nf;
    let e = match prefix.last() {
        Some((idx, _)) if *idx == top => prefix.pop().expect("nonempty").1,
        _ => IBig::zero(),
    };
    let (k, r) = e.div_rem_euclid(p);
    if !r.is_zero() {
        prefix.push((top, r));
    }
    (prefix, k)
}

pub(crate) fn normal_form(syl: &[Syl], lo: i64, hi: i64, p: &IBig, q: &IBig) -> ChainForm {
    if lo == hi {
        let total = syl.iter().fold(IBig::zero(), |acc, (_, e)| acc + e);
        let mut out = Vec::new();
        push_merge(&mut out, lo, total);
        return ChainForm {
            pieces: usize::from(!out.is_empty()),
            syllables: out,
            carry: IBig::zero(),
        };
    }

    let mut stack: Vec<Rep> = Vec::new();
    let mut carry = IBig::zero();
    let mut i = 0;
    while i < syl.len() {
        if syl[i].0 == hi {
            let mut e = &syl[i].1 + q * &carry;
            if let Some(Rep::Top(_)) = stack.last() {
                if let Some(Rep::Top(s)) = stack.pop() {
                    e += s;
                }
            }
            let (k, r) = e.div_rem_euclid(q);
            carry = k;
            if !r.is_zero() {
                stack.push(Rep::Top(r));
            }
            i += 1;
            continue;
        }
        let mut j = i;
        while j < syl.len() && syl[j].0 != hi {
            j += 1;
        }
        let mut y: Vec<Syl> = match stack.last() {
            Some(Rep::Lower(_)) => match stack.pop() {
                Some(Rep::Lower(s)) => s,
                _ => unreachable!(),
            },
            _ => Vec::new(),
        };
        if !carry.is_zero() {
            push_merge(&mut y, hi - 1, p * &carry);
        }
        for (idx, e) in &syl[i..j] {
            push_merge(&mut y, *idx, e.clone());
        }
        let inner = normal_form(&y, lo, hi - 1, p, q);
        let (rep, k) = split_edge(inner.syllables, hi - 1, p);
        carry = k;
        if !rep.is_empty() {
            stack.push(Rep::Lower(rep));
        }
        i = j;
    }

    let pieces = stack.len();
    let mut out = Vec::new();
    for rep in stack {
        match rep {
            Rep::Lower(s) => {
                for (idx, e) in s {
                    push_merge(&mut out, idx, e);
                }
            }
            Rep::Top(r) => push_merge(&mut out, hi, r),
        }
    }
    push_merge(&mut out, hi, q * &carry);
    ChainForm {
        syllables: out,
        carry,
        pieces,
    }
}
