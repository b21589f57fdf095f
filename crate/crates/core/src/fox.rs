//! Fox free differential calculus with coefficients projected into `ZG`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use ibig::IBig;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::groupring::{GroupRingElt, SkewFrame, SkewLaurent};
use crate::oracles::Oracle;
use crate::presentations::Presentation;
use crate::words::{Gen, Word};

/// `∂w/∂g`, computed a syllable at a time:
/// `∂(g^k)/∂g = 1 + g + ⋯ + g^{k-1}` and `−(g⁻¹ + ⋯ + g^k)` for `k < 0`.
pub fn fox_derive(w: &Word, g: &Gen, oracle: &Arc<Oracle>) -> Result<GroupRingElt> {
    let mut terms: Vec<(IBig, Word)> = Vec::new();
    let mut prefix = Word::identity();
    for s in w.syllables() {
        if &s.gen == g {
            let k = usize::try_from(&s.exp.abs())
                .map_err(|_| Error::InvalidArgument(format!("exponent {} too large", s.exp)))?;
            let mut cur = prefix.clone();
            if s.exp.is_positive() {
                for _ in 0..k {
                    terms.push((IBig::one(), cur.clone()));
                    cur.push(g.clone(), IBig::one());
                }
            } else {
                for _ in 0..k {
                    cur.push(g.clone(), -IBig::one());
                    terms.push((-IBig::one(), cur.clone()));
                }
            }
        }
        prefix.push(s.gen.clone(), s.exp.clone());
    }
    GroupRingElt::from_terms(oracle, terms)
}

/// The Fox derivatives of one word with respect to a list of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoxVector {
    source: Word,
    gens: Vec<Gen>,
    components: BTreeMap<Gen, GroupRingElt>,
}

impl FoxVector {
    pub fn source(&self) -> &Word {
        &self.source
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn components(&self) -> &BTreeMap<Gen, GroupRingElt> {
        &self.components
    }

    pub fn component(&self, g: &Gen) -> Option<&GroupRingElt> {
        self.components.get(g)
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(GroupRingElt::is_zero)
    }

    pub fn oracle(&self) -> &Arc<Oracle> {
        self.components
            .values()
            .next()
            .expect("a Fox vector has at least one component")
            .oracle()
    }

    /// `Σ_g (∂w/∂g)(g − 1)`.
    pub fn boundary(&self) -> Result<GroupRingElt> {
        let oracle = self.oracle().clone();
        let one = GroupRingElt::one(&oracle);
        let mut total = GroupRingElt::zero(&oracle);
        for (g, d) in &self.components {
            let gm1 =
                GroupRingElt::monomial(&oracle, IBig::one(), &Word::gen(g.clone()))?.sub(&one)?;
            total = total.add(&d.mul(&gm1)?)?;
        }
        Ok(total)
    }

    /// Checks `Σ_g (∂w/∂g)(g − 1) = w − 1`.
    pub fn fundamental_identity_holds(&self) -> Result<bool> {
        let oracle = self.oracle().clone();
        let rhs = GroupRingElt::monomial(&oracle, IBig::one(), &self.source)?
            .sub(&GroupRingElt::one(&oracle))?;
        Ok(self.boundary()? == rhs)
    }
}

/// Componentwise Fox derivatives, verified against the fundamental identity.
pub fn fox_vector(w: &Word, gens: &[Gen], oracle: &Arc<Oracle>) -> Result<FoxVector> {
    if gens.is_empty() {
        return Err(Error::InvalidArgument(
            "a Fox vector needs generators".into(),
        ));
    }
    let allowed: BTreeSet<&Gen> = gens.iter().collect();
    if let Some(g) = w.gens().into_iter().find(|g| !allowed.contains(g)) {
        return Err(Error::ForeignGenerator(g));
    }
    let mut components = BTreeMap::new();
    for g in gens {
        components.insert(g.clone(), fox_derive(w, g, oracle)?);
    }
    let v = FoxVector {
        source: w.clone(),
        gens: gens.to_vec(),
        components,
    };
    if !v.fundamental_identity_holds()? {
        return Err(Error::IdentityViolation(w.clone()));
    }
    Ok(v)
}

/// One Fox vector per relator.
pub fn jacobian(p: &Presentation, oracle: &Arc<Oracle>) -> Result<Vec<FoxVector>> {
    p.relators()
        .iter()
        .map(|r| fox_vector(r, p.gens(), oracle))
        .collect()
}

/// `Σ_i (∂r/∂z_i) e_i` for a relator `r` of `H` written in the frame's
/// family, read through `e_i ↔ x^i`. The boundary `Σ_i (∂r/∂z_i)(z_i − 1)`
/// is checked to vanish.
pub fn relation_module_element(r: &Word, frame: &Arc<SkewFrame>) -> Result<SkewLaurent> {
    let oracle = frame.oracle().clone();
    let family = frame.family();
    let mut gens: Vec<Gen> = Vec::new();
    for g in r.gens() {
        if !g.in_family(family) || g.is_primed() || g.index().is_none() {
            return Err(Error::ForeignGenerator(g));
        }
        gens.push(g);
    }
    if !oracle.is_trivial(r)? {
        return Err(Error::NotARelator(r.clone()));
    }
    if gens.is_empty() {
        return frame.to_skew(&GroupRingElt::zero(&oracle));
    }
    let v = fox_vector(r, &gens, &oracle)?;
    if !v.boundary()?.is_zero() {
        return Err(Error::IdentityViolation(r.clone()));
    }
    let stable = oracle
        .stable_letter()
        .cloned()
        .expect("skew frames are built over BS oracles");
    let mut total = GroupRingElt::zero(&oracle);
    for (g, d) in v.components() {
        let i = g.index().expect("family generators are indexed");
        total = total.add(&d.right_mul_word(&Word::power(stable.clone(), i))?)?;
    }
    frame.to_skew(&total)
}
