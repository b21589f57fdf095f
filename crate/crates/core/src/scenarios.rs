//! Fixed catalogue of end-to-end checks. Each scenario records a list of
//! `(description, expected, actual)` steps and passes iff all of them match.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use ibig::IBig;
use serde::Serialize;

use crate::cayley::{build_ball, BallOptions};
use crate::complexes::{
    bs_doubled, chi_level_formula, double_with, trefoil_ki, verify_doubled_quotient,
    verify_trefoil_genset, TwoComplex,
};
use crate::error::{Error, Result};
use crate::fox::{fox_vector, relation_module_element};
use crate::groupring::SkewFrame;
use crate::oracles::Oracle;
use crate::par::{self, Parallelism};
use crate::presentations::{
    self, chain_window, check_hom, collect_commutators, hbar_to_chain, Presentation,
};
use crate::words::{Gen, Word};

pub const CATALOG: &[&str] = &[
    "gen-xz",
    "lemma2.1-tietze",
    "lemma2.1-commutator",
    "lemma2.2-cyclic",
    "lemma2.2-images",
    "thm1.1-beta",
    "lemma3.2-roundtrip",
    "thm4.3-chi",
    "thm4.4-chi",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub desc: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub id: String,
    pub status: Status,
    pub steps: Vec<Step>,
    pub ms: u128,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Report text without the timing, one step per line.
    pub fn render(&self) -> String {
        let mut s = format!(
            "{} {}\n",
            match self.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            },
            self.id
        );
        for st in &self.steps {
            let mark = if st.expected == st.actual {
                "ok "
            } else {
                "BAD"
            };
            s.push_str(&format!(
                "  [{mark}] {}: expected {}, got {}\n",
                st.desc, st.expected, st.actual
            ));
        }
        s
    }
}

/// Scenario inputs. `corrupt` swaps the `BS(2,3)` oracle for `BS(2,5)`,
/// which must make the run fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScenarioOptions {
    pub corrupt: bool,
}

struct Ctx {
    bs: Arc<Oracle>,
    steps: Vec<Step>,
}

impl Ctx {
    fn step(&mut self, desc: impl Into<String>, expected: impl ToString, actual: impl ToString) {
        self.steps.push(Step {
            desc: desc.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }
}

fn w(s: &str) -> Word {
    s.parse().expect("scenario literals are valid")
}

fn relators_text(p: &Presentation) -> String {
    let r: Vec<String> = p.relators().iter().map(Word::to_string).collect();
    format!("[{}]", r.join(", "))
}

fn gen_xz(c: &mut Ctx) -> Result<()> {
    let subs = vec![(Gen::new("X"), w("x")), (Gen::new("Z"), w("y^4"))];
    c.step("x z x^-1 = y^6", "y^6", c.bs.nf_word(&w("x y^4 x^-1"))?);
    let y2 =
        c.bs.witness_generation(&w("y^2"), &subs, &w("X Z X^-1 Z^-1"))?;
    c.step("y^2 = X Z X^-1 Z^-1", true, y2);
    let witness = w("X^2 Z X^-1 Z^-1 X^-1 Z X Z^-1 X^-1");
    let y = c.bs.witness_generation(&w("y"), &subs, &witness)?;
    c.step(format!("y = {witness}"), true, y);
    Ok(())
}

fn tietze_chain(c: &mut Ctx) -> Result<()> {
    for n in 1..=4 {
        let got = hbar_to_chain(0, n)?;
        let want = chain_window(0, n)?;
        c.step(
            format!("Tietze chain on the window 0..{n}"),
            relators_text(&want),
            relators_text(&got),
        );
    }
    let zy4 = BTreeMap::from([(Gen::new("x"), w("x")), (Gen::new("z"), w("y^4"))]);
    c.step(
        "x -> x, z -> y^4 defines a map onto BS(2,3)",
        true,
        check_hom(&presentations::gbar(), &zy4, &c.bs)?,
    );
    let zy = BTreeMap::from([(Gen::new("x"), w("x")), (Gen::new("z"), w("y"))]);
    c.step(
        "x -> x, z -> y is not a homomorphism",
        false,
        check_hom(&presentations::gbar(), &zy, &c.bs)?,
    );
    Ok(())
}

fn commutator_kernel(c: &mut Ctx) -> Result<()> {
    let amalgam = Oracle::cyclic_amalgam(Gen::indexed("u", 0), Gen::indexed("u", 1), 3, 2)?;
    let comm = Word::comm(&w("u_0"), &w("u_1"));
    c.step(
        "[u_0,u_1] in <u_0,u_1 | u_0^3 = u_1^2>",
        "nontrivial",
        if amalgam.is_trivial(&comm)? {
            "trivial"
        } else {
            "nontrivial"
        },
    );
    let chain = Oracle::chain("u", 3, 2, 0, 4)?;
    c.step(
        "[u_0,u_1] in the chain window 0..4",
        "nontrivial",
        if chain.is_trivial(&comm)? {
            "trivial"
        } else {
            "nontrivial"
        },
    );
    let image = Word::comm(&w("y^2"), &w("x y^2 x^-1"));
    c.step(
        "[y^2, x y^2 x^-1] in BS(2,3)",
        "trivial",
        if c.bs.is_trivial(&image)? {
            "trivial"
        } else {
            "nontrivial"
        },
    );
    // u_i = z_{i+1} z_i^-1 with z_i = x^i y^4 x^-i
    let zs = c.bs.as_ref().clone().with_family("z", w("y^4"), w("x"))?;
    let images = BTreeMap::from([
        (Gen::indexed("u", 0), w("z_1 z_0^-1")),
        (Gen::indexed("u", 1), w("z_2 z_1^-1")),
    ]);
    c.step("u_0 maps to y^2", "y^2", zs.nf_word(&w("z_1 z_0^-1"))?);
    c.step("u_1 maps to y^3", "y^3", zs.nf_word(&w("z_2 z_1^-1"))?);
    c.step(
        "image of [u_0,u_1] under u_i -> z_{i+1} z_i^-1",
        "trivial",
        if zs.is_trivial(&comm.substitute(&images)?)? {
            "trivial"
        } else {
            "nontrivial"
        },
    );
    Ok(())
}

fn cyclic_window(c: &mut Ctx) -> Result<()> {
    let (z0, z1, t) = (Gen::indexed("z", 0), Gen::indexed("z", 1), Gen::new("t"));
    let e0 = w("z_0^-1 z_1 z_0^-1 z_1 z_0^-1");
    let p = Presentation::new(vec![z0.clone(), z1.clone()], vec![e0.clone()])?;
    let p = p.tietze_add_gen(t.clone(), &w("z_1 z_0^-1"))?;
    let p = p.tietze_rewrite(&t, 1, 0)?;
    c.step(
        "e_0 rewritten through t = z_1 z_0^-1",
        "t^2 z_0^-1",
        p.relators()[0].clone(),
    );
    let (p, v0) = p.tietze_remove_gen(&z0, 0)?;
    c.step("z_0 in terms of t", "t^2", v0);
    let (p, v1) = p.tietze_remove_gen(&z1, 0)?;
    c.step("z_1 in terms of t", "t^3", v1);
    c.step("reduced presentation", "gens: t", p.to_string().trim_end());
    let (factors, rest) = collect_commutators(&e0, &z0, &z1)?;
    c.step(
        "e_0 = (product of conjugates of c_0^{+-1}) d_0",
        "z_0^-3 z_1^2",
        rest,
    );
    c.step("number of commutator factors", "3", factors.len());
    Ok(())
}

fn staggered_images(c: &mut Ctx) -> Result<()> {
    let zs = c.bs.as_ref().clone().with_family("z", w("y^4"), w("x"))?;
    for i in -2..=2 {
        let zi = Word::gen(Gen::indexed("z", i));
        let zj = Word::gen(Gen::indexed("z", i + 1));
        let ci = Word::comm(&zi, &zj);
        let di = zi.pow(&IBig::from(-3)).mul(&zj.pow(&IBig::from(2)));
        let ei = zi.inv().mul(&zj.mul(&zi.inv()).pow(&IBig::from(2)));
        for (name, word) in [("c", ci), ("d", di), ("e", ei)] {
            c.step(
                format!("{name}_{i} = {word}"),
                "trivial",
                if zs.is_trivial(&word)? {
                    "trivial"
                } else {
                    "nontrivial"
                },
            );
        }
    }
    Ok(())
}

fn beta_length(c: &mut Ctx) -> Result<()> {
    let zs = Arc::new(c.bs.as_ref().clone().with_family("z", w("y^4"), w("x"))?);
    let frame = SkewFrame::new(zs, "z", -16, 16)?;
    let r = w("z_1^2 z_0^-3");
    let beta = relation_module_element(&r, &frame)?;
    c.step("length of F(z_1^2 z_0^-3)", 1, beta.length()?);
    c.step(
        "F(z_1^2 z_0^-3) in ZH[x, x^-1]",
        "(-1*1 + -1*z_0 + -1*z_0^2)x^0 + (1*1 + 1*z_1)x^1",
        beta.render()?,
    );
    let v = fox_vector(
        &r,
        &[Gen::indexed("z", 0), Gen::indexed("z", 1)],
        frame.oracle(),
    )?;
    c.step("boundary sum of (dr/dz_i)(z_i - 1)", "0", v.boundary()?);
    Ok(())
}

fn cycle_roundtrip(c: &mut Ctx) -> Result<()> {
    let ball = build_ball(&c.bs, &[w("x"), w("y")], BallOptions::new(6))?;
    let r = w("x y^2 x^-1 y^-3");
    let one = ball.lift_word(&r)?;
    c.step("lift of r is a cycle", true, ball.is_cycle(&one));
    let pairs = ball.cycle_to_relators(&one);
    c.step(
        "pieces for one relator cycle",
        1,
        pairs.as_ref().map_or(0, Vec::len),
    );
    c.step("single cycle reassembles", "ok", status(&pairs));
    let two = one.add(&ball.translate(&one, &w("x^2"))?);
    let pairs = ball.cycle_to_relators(&two);
    c.step(
        "pieces for the two-translate sum",
        2,
        pairs.as_ref().map_or(0, Vec::len),
    );
    c.step(
        "connecting word of the second piece",
        "x^2",
        pairs.as_ref().map_or(String::new(), |p| {
            p.get(1).map_or(String::new(), |(f, _)| f.to_string())
        }),
    );
    c.step("two-translate sum reassembles", "ok", status(&pairs));
    Ok(())
}

fn status<T>(r: &Result<T>) -> String {
    match r {
        Ok(_) => "ok".into(),
        Err(e) => e.to_string(),
    }
}

fn doubled_bs_chi(c: &mut Ctx) -> Result<()> {
    let k = bs_doubled();
    c.step(
        "chi of the doubled BS(2,3) presentation",
        1,
        TwoComplex::new(&k).chi,
    );
    c.step("2 chi_min - 1 + |{x, y^4}|", 1, chi_level_formula(0, 2));
    c.step(
        "collapse of primes kills every relator",
        true,
        verify_doubled_quotient(&k, &c.bs)?,
    );
    let bs23 = presentations::bs(2, 3)?;
    let bad = double_with(&bs23, &[(w("x"), w("x'")), (w("y^4"), w("y'^3"))])?;
    c.step(
        "corrupted identification y^4 = y'^3",
        false,
        verify_doubled_quotient(&bad, &c.bs)?,
    );
    Ok(())
}

fn trefoil_doubles_chi(c: &mut Ctx) -> Result<()> {
    let trefoil = Oracle::cyclic_amalgam(Gen::new("x"), Gen::new("y"), 2, 3)?;
    let chi_min = presentations::trefoil().euler_char();
    c.step("chi of <x, y | x^2 = y^3>", 0, chi_min);
    for i in 0..=5 {
        let k = trefoil_ki(i);
        c.step(format!("chi(K_{i})"), 1, TwoComplex::new(&k).chi);
        c.step(
            format!("formula for K_{i}"),
            1,
            chi_level_formula(chi_min, 2),
        );
        c.step(
            format!("K_{i} presents the trefoil group"),
            true,
            verify_doubled_quotient(&k, &trefoil)?,
        );
        c.step(
            format!("x_{i} generates"),
            true,
            verify_trefoil_genset(i, &trefoil)?,
        );
    }
    Ok(())
}

fn body(id: &str) -> Option<fn(&mut Ctx) -> Result<()>> {
    Some(match id {
        "gen-xz" => gen_xz,
        "lemma2.1-tietze" => tietze_chain,
        "lemma2.1-commutator" => commutator_kernel,
        "lemma2.2-cyclic" => cyclic_window,
        "lemma2.2-images" => staggered_images,
        "thm1.1-beta" => beta_length,
        "lemma3.2-roundtrip" => cycle_roundtrip,
        "thm4.3-chi" => doubled_bs_chi,
        "thm4.4-chi" => trefoil_doubles_chi,
        _ => return None,
    })
}

pub fn run_scenario_with(id: &str, opts: ScenarioOptions) -> Result<ScenarioReport> {
    let f = body(id).ok_or_else(|| Error::UnknownScenario(id.to_string()))?;
    let start = Instant::now();
    let (m, n) = if opts.corrupt { (2, 5) } else { (2, 3) };
    let mut ctx = Ctx {
        bs: Arc::new(Oracle::bs(m, n)?),
        steps: Vec::new(),
    };
    if let Err(e) = f(&mut ctx) {
        ctx.step("run without error", "no error", e);
    }
    let ok = !ctx.steps.is_empty() && ctx.steps.iter().all(|s| s.expected == s.actual);
    Ok(ScenarioReport {
        id: id.to_string(),
        status: if ok { Status::Pass } else { Status::Fail },
        steps: ctx.steps,
        ms: start.elapsed().as_millis(),
    })
}

pub fn run_scenario(id: &str) -> Result<ScenarioReport> {
    run_scenario_with(id, ScenarioOptions::default())
}

/// Every scenario in catalogue order.
pub fn run_all_with(opts: ScenarioOptions, mode: Parallelism) -> Vec<ScenarioReport> {
    par::map(CATALOG, mode, |id| {
        run_scenario_with(id, opts).expect("catalogue ids are known")
    })
}

pub fn run_all() -> Vec<ScenarioReport> {
    run_all_with(ScenarioOptions::default(), Parallelism::default())
}

pub fn to_json(reports: &[ScenarioReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialise")
}
