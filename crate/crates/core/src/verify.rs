//! Self-checks grouped into suites, shared by the command line and the
//! acceptance tests.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::hai_bridge::{
    bar_m, counterexample_report, counterexample_report_for, free_module, full_faithfulness_report, modnil_report,
    omega_generator, reference_f_dim,
};
use crate::padic_comb::{
    block_partition, brute_force_partition, p_adic, partition_powers, power_lists, PAdicDecomposition,
};
use crate::steenrod::{degree, is_admissible, AdemConvention, PowerMonomial, SteenrodAlgebra, WordTerms};
use crate::strictpoly::{
    compositions, evaluate, hom_p, predicted_dim, random_vector, schur_operator_basis, act, FunctorSpec,
};
use crate::unstable::{
    milnor_op, p0_injective_range, sqrt_extract, submodule_span, tensor, tensor_element, tensor_power,
    young_invariants, Element, ModnilOutcome, TensorWord, TruncatedModule,
};

/// Result of one named check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// Which statement the check exercises.
    pub anchor: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

/// Pass/fail verdict with a human-readable detail line.
pub type Outcome = Result<(bool, String)>;

pub fn run_check(name: &str, anchor: &str, f: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Check { name: name.into(), anchor: anchor.into(), passed, detail, millis: start.elapsed().as_millis() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Steenrod,
    Unstable,
    Poly,
    Comb,
    PaperExamples,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "steenrod" => Suite::Steenrod,
            "unstable" => Suite::Unstable,
            "poly" => Suite::Poly,
            "comb" => Suite::Comb,
            "paper-examples" => Suite::PaperExamples,
            _ => return Err(Error::Parse(format!("unknown suite '{s}'"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::All => "all",
            Suite::Steenrod => "steenrod",
            Suite::Unstable => "unstable",
            Suite::Poly => "poly",
            Suite::Comb => "comb",
            Suite::PaperExamples => "paper-examples",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerifyConfig {
    pub p: u32,
    pub trunc: usize,
    pub seed: u64,
    pub quick: bool,
}

/// Default truncation per prime.
pub fn default_trunc(p: Prime) -> usize {
    match p.value() {
        2 => 64,
        3 => 81,
        _ => 125,
    }
}

/// Default truncation ladder per prime.
pub fn default_ladder(p: Prime) -> Vec<usize> {
    match p.value() {
        2 => vec![24, 32, 48],
        3 => vec![27, 54, 81],
        _ => vec![25, 75, 125],
    }
}

impl VerifyConfig {
    pub fn new(p: Prime) -> Self {
        VerifyConfig { p: p.value(), trunc: default_trunc(p), seed: 0, quick: false }
    }

    pub fn prime(&self) -> Prime {
        Prime::new(self.p).expect("validated at construction")
    }

    fn scaled(&self, full: usize, quick: usize) -> usize {
        if self.quick {
            quick
        } else {
            full
        }
    }
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn format_terms(terms: &[(Vec<u32>, u32)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(w, c)| {
            let m = PowerMonomial::from_word(w).to_string();
            if *c == 1 {
                m
            } else {
                format!("{c}*{m}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

// ---------------------------------------------------------------- steenrod

/// Low-degree relations: `P1P1 = 0`, `P2P2 = P3P1` at `p = 2`; at odd `p` the
/// printed relation gives `P1P1 = (p-2) P2`, the signed one `2 P2`.
pub fn adem_examples(p: Prime) -> Outcome {
    let printed = SteenrodAlgebra::new(p, AdemConvention::Printed);
    let signed = SteenrodAlgebra::new(p, AdemConvention::Signed);
    let mut cases: Vec<(&SteenrodAlgebra, Vec<u32>, WordTerms)> = Vec::new();
    if p.value() == 2 {
        cases.push((&printed, vec![1, 1], vec![]));
        cases.push((&printed, vec![2, 2], vec![(vec![3, 1], 1)]));
        cases.push((&printed, vec![2, 1], vec![(vec![2, 1], 1)]));
        cases.push((&printed, vec![1, 2], vec![(vec![3], 1)]));
    } else {
        cases.push((&printed, vec![1, 1], vec![(vec![2], p.value() - 2)]));
        cases.push((&signed, vec![1, 1], vec![(vec![2], 2)]));
        cases.push((&printed, vec![p.value(), 1], vec![(vec![p.value(), 1], 1)]));
    }
    let mut lines = Vec::new();
    let mut ok = true;
    for (alg, w, want) in cases {
        let got = alg.normalize_word(&w);
        ok &= got == want;
        lines.push(format!("{} = {}", format_terms(&[(w, 1)]), format_terms(&got)));
    }
    Ok((ok, lines.join("; ")))
}

fn random_word<R: Rng>(rng: &mut R, max_len: usize, max_index: u32) -> Vec<u32> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| rng.gen_range(1..=max_index)).collect()
}

/// Normal forms consist of admissible terms of the right degree and are fixed
/// by a second normalization.
pub fn adem_idempotence(p: Prime, cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed, 1);
    for conv in [AdemConvention::Printed, AdemConvention::Signed] {
        let alg = SteenrodAlgebra::new(p, conv);
        for _ in 0..cases {
            let w = random_word(&mut rng, 4, 12);
            let deg = crate::steenrod::word_degree(&w, p);
            for (t, _) in alg.normalize_word(&w) {
                let m = PowerMonomial::from_word(&t);
                if !is_admissible(&m, p) || degree(&m, p) != deg {
                    return Ok((false, format!("{w:?} -> bad term {m} ({conv:?})")));
                }
                if alg.normalize_word(&t) != vec![(t.clone(), 1)] {
                    return Ok((false, format!("{m} is not fixed by normalization ({conv:?})")));
                }
            }
        }
    }
    Ok((true, format!("{cases} random words per convention")))
}

/// `((ab)c) = (a(bc))` on random triples of monomials with indices `<= 12`.
pub fn associativity(p: Prime, conv: AdemConvention, cases: usize, seed: u64) -> Result<(usize, usize)> {
    let alg = SteenrodAlgebra::new(p, conv);
    let mut rng = rng(seed, 2);
    let mut failures = 0;
    for _ in 0..cases {
        let a = alg.normalize(&random_word(&mut rng, 2, 12));
        let b = alg.normalize(&random_word(&mut rng, 2, 12));
        let c = alg.normalize(&random_word(&mut rng, 2, 12));
        let left = alg.multiply(&alg.multiply(&a, &b)?, &c)?;
        let right = alg.multiply(&a, &alg.multiply(&b, &c)?)?;
        if left != right {
            failures += 1;
        }
    }
    Ok((cases - failures, failures))
}

fn random_element<R: Rng>(m: &TruncatedModule, degree: usize, rng: &mut R) -> Element {
    let q = m.prime().value();
    loop {
        let coords: Vec<u32> = (0..m.dim(degree)).map(|_| rng.gen_range(0..q)).collect();
        if coords.iter().any(|&c| c != 0) {
            return Element { degree, coords };
        }
    }
}

/// Equality up to the degree tag of zero elements.
fn same(a: &Element, b: &Element) -> bool {
    a == b || (a.is_zero() && b.is_zero())
}

fn nonempty_degrees(m: &TruncatedModule, max: usize) -> Vec<usize> {
    m.degrees().into_iter().filter(|&d| d <= max && m.dim(d) > 0).collect()
}

/// Up to two letters (rightmost applied first), each the sum of the powers in
/// a random subset of the factors of `w`, so that the action on `w` survives.
/// Updates `w` to the word reached.
fn guided_word<R: Rng>(rng: &mut R, w: &mut TensorWord, trunc: usize, p: Prime) -> Vec<u32> {
    let len = rng.gen_range(1..=2);
    let q = p.value() as usize - 1;
    let mut word = Vec::new();
    for _ in 0..len {
        let mask = rng.gen_range(1..(1u32 << w.len()));
        let k: usize = (0..w.len()).filter(|j| mask & (1 << j) != 0).map(|j| p.power(w.0[j].exp as u32)).sum();
        if w.degree(p) + k * q > trunc {
            break;
        }
        for j in 0..w.len() {
            if mask & (1 << j) != 0 {
                w.0[j].exp += 1;
            }
        }
        word.insert(0, k as u32);
    }
    word
}

/// Acting by `normalize(θ1 θ2)` agrees with acting by `θ2` and then `θ1` on
/// random elements of `F(1)^{⊗n}`, `n <= 3`.
pub fn action_consistency(p: Prime, trunc: usize, cases: usize, seed: u64) -> Outcome {
    let alg = SteenrodAlgebra::acting(p);
    let modules: Vec<TruncatedModule> = (1..=3).map(|n| tensor_power(p, n, 1, trunc)).collect::<Result<_>>()?;
    let mut rng = rng(seed, 3);
    let q = p.value() as usize - 1;
    let mut done = 0;
    let mut nonzero = 0;
    while done < cases {
        let m = &modules[rng.gen_range(0..modules.len())];
        let degs = nonempty_degrees(m, trunc.saturating_sub(2 * q));
        let Some(&deg) = degs.choose(&mut rng) else { continue };
        let x = random_element(m, deg, &mut rng);
        let support: Vec<usize> = (0..x.coords.len()).filter(|&i| x.coords[i] != 0).collect();
        let mut w = m.canonical_word(deg, *support.choose(&mut rng).expect("nonzero")).expect("word basis");
        let w2 = guided_word(&mut rng, &mut w, trunc, p);
        let w1 = guided_word(&mut rng, &mut w, trunc, p);
        if w1.is_empty() || w2.is_empty() {
            continue;
        }
        let seq = m.act_word(&w1, &m.act_word(&w2, &x)?)?;
        let word: Vec<u32> = w1.iter().chain(&w2).copied().collect();
        let prod = m.act_element(&alg.normalize(&word), &x)?;
        if !same(&seq, &prod) {
            return Ok((false, format!("mismatch for {w1:?} * {w2:?} on degree-{deg} element")));
        }
        nonzero += usize::from(!seq.is_zero());
        done += 1;
    }
    Ok((true, format!("{cases} cases at D = {trunc}, {nonzero} with nonzero value")))
}

/// The printed relation, read literally, breaks associativity and the module
/// action at odd primes. Passes when the defect is exhibited.
pub fn printed_relation_defect(p: Prime, seed: u64) -> Outcome {
    let (_, fails) = associativity(p, AdemConvention::Printed, 200, seed)?;
    let t = tensor_power(p, 2, 1, 4 * p.value() as usize)?;
    let (deg, idx) = t.word_index(&TensorWord::plain(&[0, 0])).expect("u ⊗ u");
    let x = Element::basis(&t, deg, idx);
    let seq = t.act_word(&[1, 1], &x)?;
    let printed = SteenrodAlgebra::new(p, AdemConvention::Printed);
    let via = t.act_element(&printed.normalize(&[1, 1]), &x)?;
    let ok = fails > 0 && seq != via;
    Ok((ok, format!("{fails}/200 non-associative triples; P1P1(u⊗u) differs from the printed rewrite: {}", seq != via)))
}

// ---------------------------------------------------------------- unstable

/// The A-span of `u^{⊗n}` equals the `S_n`-invariants of `F(1)^{⊗n}` in every
/// degree `<= max_degree`.
pub fn free_invariants_identity(p: Prime, n: usize, max_degree: usize) -> Outcome {
    let amb = Arc::new(tensor_power(p, n, 1, max_degree)?);
    let (deg, idx) = amb
        .word_index(&TensorWord::plain(&vec![0; n]))
        .ok_or(Error::TruncationOverflow { degree: n, trunc: max_degree })?;
    let span = submodule_span(&amb, &[Element::basis(&amb, deg, idx)], max_degree);
    let inv = young_invariants(amb.clone(), &[n], "inv")?;
    let mut total = 0;
    for d in 0..=max_degree {
        if span.dim(d) != inv.dim(d) {
            return Ok((false, format!("degree {d}: span {} vs invariants {}", span.dim(d), inv.dim(d))));
        }
        for i in 0..inv.dim(d) {
            let (_, v) = inv.to_words(&Element::basis(&inv, d, i))?;
            if !span.contains(&Element { degree: d, coords: v }) {
                return Ok((false, format!("invariant {} not in the span", inv.labels(d)[i])));
            }
        }
        total += inv.dim(d);
    }
    Ok((true, format!("n = {n}: equal in degrees <= {max_degree} (total dim {total})")))
}

/// `S^3(F(1))` is `P_0`-injective in range, and `u·u·u^{p^2}` has no square root.
pub fn reduced_witness(p: Prime, trunc: usize) -> Outcome {
    let s3 = bar_m(&FunctorSpec::SymParam { d: 3, m: 1 }, p, trunc)?;
    let (inj, range) = p0_injective_range(&s3);
    let (deg, idx) = s3
        .find_canonical(&TensorWord::plain(&[0, 0, 2]))
        .ok_or_else(|| Error::Precondition("u.u.u^{p^2} outside the truncation".into()))?;
    let x = Element::basis(&s3, deg, idx);
    let res = sqrt_extract(&s3, &x, 1);
    let not_in_image = matches!(res, Err(Error::NotInImage { .. }));
    Ok((
        inj && not_in_image,
        format!(
            "P0 injective up to degree {range}: {inj}; sqrt({}) -> {}",
            s3.labels(deg)[idx],
            match res {
                Ok(_) => "found".to_string(),
                Err(e) => e.to_string(),
            }
        ),
    ))
}

fn concat_element(
    big: &TruncatedModule,
    mx: &TruncatedModule,
    x: &Element,
    my: &TruncatedModule,
    y: &Element,
) -> Result<Element> {
    let p = big.prime();
    let deg = x.degree + y.degree;
    let mut coords = vec![0; big.dim(deg)];
    for (i, &a) in x.coords.iter().enumerate().filter(|(_, &a)| a != 0) {
        let wx = mx.canonical_word(x.degree, i).expect("word basis");
        for (j, &b) in y.coords.iter().enumerate().filter(|(_, &b)| b != 0) {
            let wy = my.canonical_word(y.degree, j).expect("word basis");
            let (_, k) = big.word_index(&wx.concat(&wy)).expect("word in the product");
            coords[k] = p.add(coords[k], p.mul(a, b));
        }
    }
    Ok(Element { degree: deg, coords })
}

fn p0_iter(m: &TruncatedModule, x: &Element, r: usize) -> Result<Element> {
    (0..r).try_fold(x.clone(), |acc, _| m.p0(&acc))
}

/// `m_n(r)(x) = P_0^r x` for `|x| = n`, and
/// `m_n(r)(x ⊗ P_0^k y) = P_0^r x ⊗ P_0^k y` for `p^k > n`.
pub fn stee_properties(p: Prime, trunc: usize, cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed, 4);
    let q = p.value() as usize;
    let mut modules: Vec<TruncatedModule> = (1..=3).map(|n| tensor_power(p, n, 1, trunc)).collect::<Result<_>>()?;
    for spec in [FunctorSpec::SymParam { d: 3, m: 1 }, FunctorSpec::Gamma(vec![2, 1]), FunctorSpec::Exterior(2)] {
        modules.push(bar_m(&spec, p, trunc)?);
    }
    let mut done = 0;
    while done < cases {
        let m = &modules[rng.gen_range(0..modules.len())];
        let Some(&n) = nonempty_degrees(m, trunc / q).choose(&mut rng) else { continue };
        let max_r = (1..).take_while(|&r| n * q.pow(r) <= trunc).last().unwrap_or(0);
        if max_r == 0 {
            continue;
        }
        let r = rng.gen_range(1..=max_r.min(3));
        let x = random_element(m, n, &mut rng);
        if milnor_op(m, n as u64, r, &x)? != p0_iter(m, &x, r as usize)? {
            return Ok((false, format!("m_n(r) != P0^r on {} (n = {n}, r = {r})", m.provenance())));
        }
        done += 1;
    }
    let powers: Vec<TruncatedModule> = (1..=4).map(|n| tensor_power(p, n, 1, trunc)).collect::<Result<_>>()?;
    let mut done = 0;
    let mut nonzero = 0;
    while done < cases {
        let a = rng.gen_range(1..=2);
        let b = rng.gen_range(1..=2);
        let (mx, my, big) = (&powers[a - 1], &powers[b - 1], &powers[a + b - 1]);
        let Some(&n) = nonempty_degrees(mx, trunc).choose(&mut rng) else { continue };
        let Some(&e) = nonempty_degrees(my, trunc).choose(&mut rng) else { continue };
        let k0 = (0..).find(|&k| q.pow(k) > n).expect("finite");
        let k = k0 + rng.gen_range(0..=1);
        let r = rng.gen_range(1..=2);
        if n * q.pow(r) + e * q.pow(k) > trunc {
            continue;
        }
        let x = random_element(mx, n, &mut rng);
        let y = random_element(my, e, &mut rng);
        let pky = p0_iter(my, &y, k as usize)?;
        let lhs = milnor_op(big, n as u64, r, &concat_element(big, mx, &x, my, &pky)?)?;
        let rhs = concat_element(big, mx, &p0_iter(mx, &x, r as usize)?, my, &pky)?;
        if lhs != rhs {
            return Ok((false, format!("mixed formula fails: n = {n}, r = {r}, k = {k}")));
        }
        nonzero += usize::from(!lhs.is_zero());
        done += 1;
    }
    Ok((true, format!("{cases} instances of each identity at D = {trunc} ({nonzero} mixed with nonzero value)")))
}

fn modnil_summary(outcomes: &[(String, ModnilOutcome)]) -> (bool, String) {
    let mut max_j = 0;
    for (label, o) in outcomes {
        match o {
            ModnilOutcome::Found { j } => max_j = max_j.max(*j),
            ModnilOutcome::Inconclusive { tested_up_to } => {
                return (false, format!("{label}: inconclusive after {tested_up_to} P0 steps"));
            }
        }
    }
    (true, format!("{} basis elements reached, max P0 iterations {max_j}", outcomes.len()))
}

/// `ι_n ⊗ P_0^q ι_m` generates `F(n) ⊗ F(m)` mod nilpotents, `q` minimal with
/// `p^q > n`.
pub fn modnil_free_tensor(p: Prime, n: usize, m: usize, trunc: usize, check_degree: usize) -> Outcome {
    let fa = free_module(n, p, trunc)?;
    let fb = free_module(m, p, trunc)?;
    let prod = tensor(&fa, &fb, Some(trunc))?;
    let qv = p.value() as usize;
    let q = (0..).find(|&q| qv.pow(q) > n).expect("finite");
    let y = p0_iter(&fb, &Element::basis(&fb, m, 0), q as usize)?;
    let gen = tensor_element(&fa, &fb, &prod, &Element::basis(&fa, n, 0), &y)?;
    let (ok, detail) = modnil_summary(&modnil_report(&prod, &gen, check_degree));
    Ok((ok, format!("F({n})⊗F({m}), q = {q}: {detail}")))
}

/// `u ⊗ u^p ⊗ ... ⊗ u^{p^{n-1}}` generates `F(1)^{⊗n}` mod nilpotents.
pub fn modnil_tensor_power(p: Prime, n: usize, trunc: usize, check_degree: usize) -> Outcome {
    let t = tensor_power(p, n, 1, trunc)?;
    let exps: Vec<u8> = (0..n as u8).collect();
    let (deg, idx) = t
        .word_index(&TensorWord::plain(&exps))
        .ok_or_else(|| Error::Precondition("generator outside the truncation".into()))?;
    let (ok, detail) = modnil_summary(&modnil_report(&t, &Element::basis(&t, deg, idx), check_degree));
    Ok((ok, format!("F(1)^{n}: {detail}")))
}

/// `ω_α` generates `Γ^λ(F(1))` mod nilpotents.
pub fn modnil_omega(p: Prime, lambda: &[usize], delta: usize, trunc: usize, check_degree: usize) -> Outcome {
    let m = bar_m(&FunctorSpec::gamma(lambda)?, p, trunc)?;
    let omega = omega_generator(lambda, delta, &m)?;
    let (ok, detail) = modnil_summary(&modnil_report(&m, &omega.element, check_degree));
    Ok((ok, format!("omega = {} (degree {}): {detail}", omega.label, omega.degree)))
}

// ---------------------------------------------------------------- poly

/// Hom dimensions between a few functors against counts.
pub fn poly_examples(p: Prime) -> Outcome {
    let cases: Vec<(FunctorSpec, FunctorSpec, usize)> = vec![
        (FunctorSpec::Gamma(vec![2, 1]), FunctorSpec::SymParam { d: 3, m: 1 }, 1),
        (FunctorSpec::Gamma(vec![2]), FunctorSpec::Gamma(vec![1]), 0),
        (FunctorSpec::Gamma(vec![1, 1]), FunctorSpec::Exterior(2), 1),
        (FunctorSpec::Gamma(vec![2]), FunctorSpec::Exterior(2), 0),
        (FunctorSpec::Gamma(vec![2]), FunctorSpec::TensorPower(2), 1),
        (FunctorSpec::Gamma(vec![1, 1]), FunctorSpec::TensorPower(2), 2),
        (FunctorSpec::Gamma(vec![1, 1, 1]), FunctorSpec::SymParam { d: 3, m: 2 }, 8),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (f, g, want) in cases {
        let n = f.degree().max(1);
        let h = hom_p(&f, &g, n, p)?;
        ok &= h.dim() == want;
        lines.push(format!("{f}->{g}: {}{}", h.dim(), if h.cross_degree { " (cross-degree)" } else { "" }));
    }
    Ok((ok, lines.join("; ")))
}

/// `dim Hom(Γ^λ, S^{d,V}) = Π C(λ_j + m - 1, λ_j)`, and stability from `n = d`
/// to `n = d + 1`.
pub fn poly_yoneda(p: Prime, max_d: usize) -> Outcome {
    let mut count = 0;
    for d in 1..=max_d {
        for lambda in compositions(d) {
            for m in 1..=2 {
                let f = FunctorSpec::Gamma(lambda.clone());
                let g = FunctorSpec::SymParam { d, m };
                let a = hom_p(&f, &g, d, p)?.dim();
                let b = hom_p(&f, &g, d + 1, p)?.dim();
                let want = predicted_dim(&lambda, m);
                if a != want || b != want {
                    return Ok((false, format!("{f}->{g}: n=d {a}, n=d+1 {b}, predicted {want}")));
                }
                count += 1;
            }
        }
    }
    Ok((true, format!("{count} pairs match the product of binomials at n = d and n = d + 1")))
}

/// Random `(γ, v)` pairs: Hom basis maps commute with Schur operators.
pub fn poly_invariance(p: Prime, cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed, 5);
    let pairs = [
        (FunctorSpec::Gamma(vec![2, 1]), FunctorSpec::SymParam { d: 3, m: 2 }),
        (FunctorSpec::Gamma(vec![1, 1]), FunctorSpec::TensorPower(2)),
        (FunctorSpec::Gamma(vec![1, 1, 1]), FunctorSpec::Exterior(3)),
    ];
    let mut checked = 0;
    for (f, g) in &pairs {
        let n = f.degree();
        let ef = evaluate(f, n, p)?;
        let eg = evaluate(g, n, p)?;
        let h = hom_p(f, g, n, p)?;
        let ops = schur_operator_basis(n, f.degree());
        for _ in 0..cases.div_ceil(pairs.len()) {
            let gamma = ops.choose(&mut rng).expect("nonempty");
            let v = random_vector(&ef, &mut rng);
            for phi in &h.basis {
                let lhs = phi.mul_vec(&act(gamma, &ef, &v)?);
                let rhs = act(gamma, &eg, &phi.mul_vec(&v))?;
                if lhs != rhs {
                    return Ok((false, format!("{f}->{g} fails at {gamma}")));
                }
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} random (γ, v) pairs")))
}

// ---------------------------------------------------------------- comb

/// Every multiset of at most `max_len` p-powers with sum `<= max_n`: the
/// constructive partition exists, lies in the brute-force list, and has at
/// least as many summands as digits.
pub fn comb_oracle(p: Prime, max_n: u64, max_len: usize) -> Outcome {
    let ns: Vec<u64> = (1..=max_n).collect();
    let results: Vec<Result<(usize, Option<String>)>> = ns
        .par_iter()
        .map(|&n| {
            let dec: PAdicDecomposition = p_adic(n, p);
            let targets: Vec<u64> = dec.digits.iter().map(|&(c, e)| c * (p.value() as u64).pow(e)).collect();
            let mut count = 0;
            for len in 1..=max_len {
                for powers in power_lists(n, len, p) {
                    let part = partition_powers(&powers, n, p)?;
                    let oracle = brute_force_partition(&powers, &targets, p)?;
                    if !oracle.contains(&part) {
                        return Ok((count, Some(format!("n = {n}, powers {powers:?}: {:?} not in oracle", part.blocks))));
                    }
                    if powers.len() < dec.length() {
                        return Ok((count, Some(format!("q+1 < k for {powers:?}"))));
                    }
                    count += 1;
                }
            }
            Ok((count, None))
        })
        .collect();
    let mut total = 0;
    for r in results {
        let (c, fail) = r?;
        if let Some(f) = fail {
            return Ok((false, f));
        }
        total += c;
    }
    Ok((true, format!("{total} power lists, n <= {max_n}, length <= {max_len}")))
}

/// Uniqueness of the consecutive-block partition on every instance that meets
/// the length hypothesis.
pub fn comb_blocks(p: Prime, max_d: usize, max_delta: u32) -> Outcome {
    let mut passing = 0;
    let mut instances = 0;
    for d in 1..=max_d {
        for lambda in compositions(d) {
            let max_l = *lambda.iter().max().expect("nonempty");
            for delta in (max_l as u32 + 1)..=max_delta {
                let total: u64 = lambda
                    .iter()
                    .enumerate()
                    .map(|(i, &l)| l as u64 * (p.value() as u64).pow(i as u32 * delta))
                    .sum();
                for powers in power_lists(total, d, p) {
                    let b = block_partition(&lambda, delta, &powers, p)?;
                    instances += 1;
                    if !b.hypothesis_holds {
                        continue;
                    }
                    passing += 1;
                    if !b.unique || b.blocks[0].len() > lambda[0] {
                        return Ok((false, format!("λ = {lambda:?}, δ = {delta}, powers {powers:?}: {b:?}")));
                    }
                }
            }
        }
    }
    Ok((passing > 0, format!("{passing} hypothesis-passing instances of {instances} are unique with card(E_1) <= λ_1")))
}

/// The documented failing instance emits the `card(E_2) > λ_2` warning.
pub fn comb_warning_instance() -> Outcome {
    let p = Prime::new(2)?;
    let b = block_partition(&[2, 1], 3, &[1, 2, 2], p)?;
    let hit = b.warnings.iter().find(|w| w.starts_with("card(E_2)")).cloned();
    Ok((hit.is_some() && !b.hypothesis_holds, format!("λ = (2,1), δ = 3, powers (1,2,2): {}", b.warnings.join("; "))))
}

// ---------------------------------------------------------------- paper examples

/// `Hom_{P_3}(Γ^{(2,1)}, S^{3,V}) = 1` and its evaluation on `F(1)` is stable
/// along the ladder.
pub fn headline_example(p: Prime, ladder: &[usize]) -> Outcome {
    let r = full_faithfulness_report(&[2, 1], 1, p, ladder)?;
    let ok = r.dim_p == 1 && r.ladder.iter().all(|&(_, d)| d == 1) && r.bijective_at_truncation;
    let reference = reference_f_dim(&[2, 1], 1, p).map(|d| format!(", reference Hom_F = {d} (quoted)")).unwrap_or_default();
    Ok((ok, format!("dimP = {}, ladder {:?}{reference}", r.dim_p, r.ladder)))
}

/// `dim hom_P = dim hom_U = Π C(λ_j + m - 1, λ_j)` with injective transport.
pub fn theorem_sweep(p: Prime, max_d: usize, max_m: usize, ladder: &[usize]) -> Outcome {
    let mut jobs = Vec::new();
    for d in 1..=max_d {
        for lambda in compositions(d) {
            for m in 1..=max_m {
                jobs.push((lambda.clone(), m));
            }
        }
    }
    let reports: Vec<_> = jobs
        .par_iter()
        .map(|(l, m)| full_faithfulness_report(l, *m, p, ladder))
        .collect::<Result<_>>()?;
    let mut lines = Vec::new();
    let mut ok = true;
    for r in &reports {
        let dim_u = r.ladder.last().expect("nonempty").1;
        let good = r.dim_p == r.predicted
            && dim_u == r.predicted
            && r.ladder_stable
            && r.transport_injective
            && r.bijective_at_truncation;
        ok &= good;
        if !good {
            lines.push(format!("λ = {:?}, m = {}: dimP {} dimU {:?} predicted {}", r.lambda, r.m, r.dim_p, r.ladder, r.predicted));
        }
    }
    let summary = format!("{} (λ, m) pairs with |λ| <= {max_d}, ladder {ladder:?}", reports.len());
    if ok {
        Ok((true, summary))
    } else {
        Ok((false, format!("{summary}; failures: {}", lines.join("; "))))
    }
}

/// `Hom_P(Γ^2, Γ^1) = 0` while `Hom_U(F(2), F(1))` is one-dimensional at `p = 2`.
/// At odd `p`, degree reasons force `Hom_U(F(2), F(1)) = 0`; the check then
/// asserts that value and the analogue `Γ^p → Γ^1`.
pub fn counterexample(p: Prime, trunc: usize) -> Outcome {
    let r = counterexample_report(p, trunc)?;
    let f2 = free_module(2, p, trunc)?;
    let f1 = bar_m(&FunctorSpec::Gamma(vec![1]), p, trunc)?;
    let direct = crate::unstable::hom_u(&f2, &f1, trunc)?.dim();
    if p.value() == 2 {
        let ok = r.dim_p == 0 && r.dim_u == 1 && direct == 1 && r.witness_linear;
        return Ok((ok, format!("dimP = {}, dimU = {} (F(2) direct: {direct}), witness {:?}", r.dim_p, r.dim_u, r.witness)));
    }
    let g = counterexample_report_for(p, p.value() as usize, trunc)?;
    let ok = r.dim_p == 0 && r.dim_u == 0 && direct == 0 && g.dim_p == 0 && g.dim_u == 1 && g.witness_linear;
    Ok((
        ok,
        format!(
            "Γ^2: dimP = {}, dimU = {} (F(2) direct: {direct}); Γ^{}: dimP = {}, dimU = {}, witness {:?}",
            r.dim_p, r.dim_u, p.value(), g.dim_p, g.dim_u, g.witness
        ),
    ))
}

// ---------------------------------------------------------------- suites

fn steenrod_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let p = cfg.prime();
    let n_assoc = cfg.scaled(500, 100);
    let mut out = vec![
        run_check("adem-examples", "low-degree Adem relations", || adem_examples(p)),
        run_check("adem-idempotence", "normal forms are admissible, homogeneous and fixed", || {
            adem_idempotence(p, cfg.scaled(300, 60), cfg.seed)
        }),
    ];
    let conv = if p.value() == 2 { AdemConvention::Printed } else { AdemConvention::Signed };
    out.push(run_check("associativity", "rewriting is associative", || {
        let (good, bad) = associativity(p, conv, n_assoc, cfg.seed)?;
        Ok((bad == 0, format!("{good}/{n_assoc} triples agree ({conv:?} relation)")))
    }));
    if p.value() != 2 {
        out.push(run_check("printed-relation-defect", "sign-free relation at odd p", || {
            printed_relation_defect(p, cfg.seed)
        }));
    }
    out.push(run_check("action-consistency", "rewriting agrees with the Cartan action", || {
        action_consistency(p, cfg.trunc, cfg.scaled(200, 40), cfg.seed)
    }));
    out
}

fn unstable_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let p = cfg.prime();
    let mut out = Vec::new();
    let inv_deg = cfg.scaled(40, 20).min(cfg.trunc.max(3));
    for n in 1..=3 {
        out.push(run_check(&format!("free-invariants-{n}"), "F(n) as invariants of F(1)^n", || {
            free_invariants_identity(p, n, inv_deg)
        }));
    }
    out.push(run_check("adem-compliance", "tensor powers satisfy the Adem relations", || {
        let t = tensor_power(p, 2, 1, cfg.trunc)?;
        let cap = cfg.scaled(cfg.trunc, cfg.trunc / 2).min(81);
        t.verify_adem(&SteenrodAlgebra::acting(p), cap)?;
        Ok((true, format!("F(1)^2 up to degree {cap}")))
    }));
    out.push(run_check("milnor-operations", "m_n(r) on classes of degree n and mixed tensors", || {
        stee_properties(p, cfg.trunc, cfg.scaled(100, 30), cfg.seed)
    }));
    let (mod_trunc, check) = match (p.value(), cfg.quick) {
        (2, false) => (128, 16),
        (2, true) => (64, 8),
        (_, false) => (cfg.trunc.max(243), 12),
        (_, true) => (cfg.trunc, 6),
    };
    for (n, m) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        if cfg.quick && n + m > 3 {
            continue;
        }
        out.push(run_check(&format!("modnil-free-{n}-{m}"), "mod-nil generator of F(n)⊗F(m)", || {
            modnil_free_tensor(p, n, m, mod_trunc, check)
        }));
    }
    for n in 1..=3 {
        out.push(run_check(&format!("modnil-tensor-{n}"), "mod-nil generator of F(1)^n", || {
            modnil_tensor_power(p, n, mod_trunc, check)
        }));
    }
    if p.value() == 2 {
        out.push(run_check("modnil-omega", "omega_alpha generates F(λ) mod nil", || {
            modnil_omega(p, &[2, 1], 3, mod_trunc, check)
        }));
    }
    out
}

fn poly_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let p = cfg.prime();
    vec![
        run_check("poly-examples", "Hom dimensions in P_d", || poly_examples(p)),
        run_check("poly-yoneda", "Hom from Γ^λ into S^{d,V}", || poly_yoneda(p, cfg.scaled(3, 2))),
        run_check("poly-invariance", "Schur equivariance of Hom bases", || {
            poly_invariance(p, cfg.scaled(200, 40), cfg.seed)
        }),
    ]
}

fn comb_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let primes: Vec<u32> = if cfg.quick { vec![cfg.p] } else { vec![2, 3, 5] };
    for q in primes {
        let p = Prime::new(q).expect("prime");
        out.push(run_check(&format!("partition-oracle-p{q}"), "p-adic partition of power sums", || {
            comb_oracle(p, cfg.scaled(256, 64) as u64, cfg.scaled(8, 6))
        }));
    }
    let primes: Vec<u32> = if cfg.quick || cfg.p > 3 { vec![cfg.p.min(3)] } else { vec![2, 3] };
    for q in primes {
        let p = Prime::new(q).expect("prime");
        out.push(run_check(&format!("block-uniqueness-p{q}"), "consecutive block partition", || {
            comb_blocks(p, 3, cfg.scaled(8, 7) as u32)
        }));
    }
    out.push(run_check("block-warning", "card(E_2) > λ_2 without the length hypothesis", comb_warning_instance));
    out
}

fn paper_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let p = cfg.prime();
    let ladder = default_ladder(p);
    let mut out = vec![run_check("headline-example", "Hom(Γ^(2,1), S^3) on both sides", || headline_example(p, &ladder))];
    let (max_d, max_m) = match (p.value(), cfg.quick) {
        (2, false) => (3, 2),
        (2, true) => (2, 2),
        (3, false) => (2, 1),
        _ => (1, 1),
    };
    out.push(run_check("full-faithfulness", "dim hom_P = dim hom_U = Π C(λ_j+m-1, λ_j)", || {
        theorem_sweep(p, max_d, max_m, &ladder)
    }));
    out.push(run_check("non-embedding", "Γ^2 → Γ^1 vs F(2) → F(1)", || counterexample(p, 32)));
    if p.value() == 2 {
        out.push(run_check("reduced-not-nil-closed", "S^3(F(1)) is reduced", || reduced_witness(p, 48)));
    }
    out
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<Check> {
    match suite {
        Suite::Steenrod => steenrod_suite(cfg),
        Suite::Unstable => unstable_suite(cfg),
        Suite::Poly => poly_suite(cfg),
        Suite::Comb => comb_suite(cfg),
        Suite::PaperExamples => paper_suite(cfg),
        Suite::All => [Suite::Steenrod, Suite::Unstable, Suite::Poly, Suite::Comb, Suite::PaperExamples]
            .into_iter()
            .flat_map(|s| run_suite(s, cfg))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn adem_examples_pass() {
        for p in [2, 3, 5] {
            assert!(adem_examples(pr(p)).unwrap().0, "p = {p}");
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in ["all", "steenrod", "unstable", "poly", "comb", "paper-examples"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_checks() {
        let p = pr(2);
        assert!(free_invariants_identity(p, 2, 12).unwrap().0);
        assert!(reduced_witness(p, 48).unwrap().0);
        assert!(comb_warning_instance().unwrap().0);
        assert!(comb_oracle(pr(3), 30, 4).unwrap().0);
    }

    #[test]
    fn errors_become_failed_checks() {
        let c = run_check("x", "y", || Err(Error::Precondition("boom".into())));
        assert!(!c.passed);
        assert!(c.detail.contains("boom"));
    }
}
