//! Evaluation of strict polynomial functors on `F(1)` and comparison of Hom
//! spaces on both sides.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::{Echelon, FpMatrix, Prime};
use crate::strictpoly::{evaluate, hom_p, predicted_dim, EvaluatedFunctor, FunctorSpec};
use crate::unstable::{
    build_f1, hom_u, modnil_generator_check, orbit_quotient, submodule_generated, tensor_power, young_invariants,
    Element, Letter, ModnilOutcome, ModuleMap, OrbitKind, TensorWord, TruncatedModule,
};

/// `spec(F(1))`, truncated at `trunc`.
pub fn bar_m(spec: &FunctorSpec, p: Prime, trunc: usize) -> Result<TruncatedModule> {
    match spec {
        FunctorSpec::TensorPower(d) => tensor_power(p, *d, 1, trunc),
        FunctorSpec::Gamma(lambda) => {
            let d = lambda.iter().sum();
            let amb = Arc::new(tensor_power(p, d, 1, trunc)?);
            young_invariants(amb, lambda, &format!("{spec}(F(1))"))
        }
        FunctorSpec::SymParam { d, m } => orbit_quotient(Arc::new(tensor_power(p, *d, *m, trunc)?), OrbitKind::Symmetric),
        FunctorSpec::Exterior(d) => orbit_quotient(Arc::new(tensor_power(p, *d, 1, trunc)?), OrbitKind::Exterior),
    }
}

/// `F(n)` as the submodule of `F(1)^{⊗n}` generated by `u^{⊗n}`.
pub fn free_module(n: usize, p: Prime, trunc: usize) -> Result<TruncatedModule> {
    if n == 0 {
        return Err(Error::Precondition("F(0) is not modelled".into()));
    }
    if n == 1 {
        return build_f1(p, trunc);
    }
    let amb = Arc::new(tensor_power(p, n, 1, trunc)?);
    let (deg, idx) = amb
        .word_index(&TensorWord::plain(&vec![0; n]))
        .ok_or(Error::TruncationOverflow { degree: n, trunc })?;
    let gen = Element::basis(&amb, deg, idx);
    submodule_generated(amb, &[gen], &format!("F({n})"))
}

fn canonical_lookup(m: &TruncatedModule) -> HashMap<TensorWord, (usize, usize)> {
    let mut out = HashMap::new();
    for d in m.degrees() {
        for i in 0..m.dim(d) {
            if let Some(w) = m.canonical_word(d, i) {
                out.insert(w, (d, i));
            }
        }
    }
    out
}

/// Push a natural transformation `η: F → G` (as a matrix on `F_p^n`) to a map
/// `F(F(1)) → G(F(1))`.
///
/// A basis word of `F(F(1))` using the distinct exponents `e_0 < ... < e_{s-1}`
/// is the image of a basis word of `F(U)` under `U → F(1)`, `e_i ↦ u^{p^{e_i}}`;
/// naturality then gives its image from the column of `η`.
pub fn transport(
    eta: &FpMatrix,
    ef: &EvaluatedFunctor,
    eg: &EvaluatedFunctor,
    mf: &TruncatedModule,
    mg: &TruncatedModule,
) -> Result<ModuleMap> {
    let top = mf.trunc().min(mg.trunc());
    let lookup = canonical_lookup(mg);
    let mut map = ModuleMap::zero(mf, mg, top);
    for d in mf.degrees() {
        if d > top {
            continue;
        }
        for b in 0..mf.dim(d) {
            let w = mf
                .canonical_word(d, b)
                .ok_or_else(|| Error::Precondition("source module has no word basis".into()))?;
            let mut exps: Vec<u8> = w.0.iter().map(|l| l.exp).collect();
            exps.sort();
            exps.dedup();
            if exps.len() > ef.n {
                return Err(Error::Precondition(format!("{} distinct exponents need n >= {}", exps.len(), exps.len())));
            }
            let relabel = |l: &Letter| Letter::new(exps.binary_search(&l.exp).expect("exponent present") as u8, l.color);
            let wu = TensorWord(w.0.iter().map(relabel).collect());
            let fi = ef
                .basis_index(&wu)
                .ok_or_else(|| Error::Invariance(format!("word {wu:?} is not canonical in {}", ef.spec)))?;
            for gi in 0..eg.dim() {
                let c = eta.get(gi, fi);
                if c == 0 {
                    continue;
                }
                let back = TensorWord(
                    eg.basis[gi]
                        .0
                        .iter()
                        .map(|l| {
                            exps.get(l.exp as usize)
                                .map(|&e| Letter::new(e, l.color))
                                .ok_or_else(|| Error::Invariance("natural map changed the weight".into()))
                        })
                        .collect::<Result<_>>()?,
                );
                let &(dg, gidx) = lookup
                    .get(&back)
                    .ok_or_else(|| Error::Invariance(format!("word {back:?} missing from target module")))?;
                debug_assert_eq!(dg, d);
                let blk = map.blocks.get_mut(&d).expect("block present");
                blk.add_to(gidx, b, c);
            }
        }
    }
    map.verify_linear(mf, mg)?;
    Ok(map)
}

/// `ω_α = P_0^{α_1} ι_{λ_1} ⊗ ... ⊗ P_0^{α_t} ι_{λ_t}` with `α = (0, δ, 2δ, ...)`.
#[derive(Clone, Debug, Serialize)]
pub struct OmegaElement {
    pub lambda: Vec<usize>,
    pub alpha: Vec<usize>,
    pub degree: usize,
    /// `δ > max λ_i`
    pub meets_hypothesis: bool,
    #[serde(skip)]
    pub element: Element,
    pub label: String,
}

/// Realize `ω_α` in `bar_m(Gamma(λ))`.
pub fn omega_generator(lambda: &[usize], delta: usize, module: &TruncatedModule) -> Result<OmegaElement> {
    let p = module.prime();
    let mut letters = Vec::new();
    let mut alpha = Vec::new();
    let mut degree = 0;
    for (i, &l) in lambda.iter().enumerate() {
        let a = i * delta;
        alpha.push(a);
        degree += l * p.power(a as u32);
        for _ in 0..l {
            letters.push(Letter::plain(a as u8));
        }
    }
    if degree > module.trunc() {
        return Err(Error::TruncationOverflow { degree, trunc: module.trunc() });
    }
    let w = TensorWord(letters);
    let idx = (0..module.dim(degree))
        .find(|&i| module.canonical_word(degree, i).as_ref() == Some(&w))
        .ok_or_else(|| Error::Precondition(format!("module has no basis vector for {w:?}")))?;
    Ok(OmegaElement {
        lambda: lambda.to_vec(),
        alpha,
        degree,
        meets_hypothesis: delta > lambda.iter().copied().max().unwrap_or(0),
        element: Element::basis(module, degree, idx),
        label: module.labels(degree)[idx].clone(),
    })
}

/// Default `δ = max λ_i + 1`.
pub fn default_delta(lambda: &[usize]) -> usize {
    lambda.iter().copied().max().unwrap_or(0) + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeVerdict {
    pub ok: bool,
    pub witness: Option<String>,
}

/// Check that every monomial of `φ(ω_α)` has exactly `λ_{k+1}` factors
/// `u^{p^{kδ}}` for each `k`.
pub fn prin2_shape_check(
    phi: &ModuleMap,
    lambda: &[usize],
    delta: usize,
    mf: &TruncatedModule,
    mg: &TruncatedModule,
) -> Result<ShapeVerdict> {
    let omega = omega_generator(lambda, delta, mf)?;
    let img = phi.apply(&omega.element, mg.dim(omega.degree));
    let mut expected: Vec<u8> = Vec::new();
    for (k, &l) in lambda.iter().enumerate() {
        expected.extend(std::iter::repeat_n((k * delta) as u8, l));
    }
    expected.sort();
    for (i, &c) in img.coords.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let w = mg
            .canonical_word(omega.degree, i)
            .ok_or_else(|| Error::Precondition("target module has no word basis".into()))?;
        let mut got: Vec<u8> = w.0.iter().map(|l| l.exp).collect();
        got.sort();
        if got != expected {
            return Ok(ShapeVerdict { ok: false, witness: Some(mg.labels(omega.degree)[i].clone()) });
        }
    }
    Ok(ShapeVerdict { ok: true, witness: None })
}

/// Hom dimensions on both sides for `Γ^λ → S^{d,V}`.
#[derive(Clone, Debug, Serialize)]
pub struct FaithfulnessReport {
    pub lambda: Vec<usize>,
    pub m: usize,
    pub p: u32,
    pub ladder: Vec<(usize, usize)>,
    #[serde(rename = "dimP")]
    pub dim_p: usize,
    pub predicted: usize,
    pub bijective_at_truncation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_f_dim: Option<usize>,
    pub transport_injective: bool,
    pub ladder_stable: bool,
    pub shape_checks_pass: bool,
    pub delta: usize,
    pub evaluation_dim: usize,
}

/// Hom over the ordinary functor category for the worked example, quoted as a
/// reference constant (not computed).
pub fn reference_f_dim(lambda: &[usize], m: usize, p: Prime) -> Option<usize> {
    (lambda == [2, 1] && m == 1 && p.value() == 2).then_some(2)
}

pub fn full_faithfulness_report(lambda: &[usize], m: usize, p: Prime, ladder: &[usize]) -> Result<FaithfulnessReport> {
    if ladder.is_empty() {
        return Err(Error::Precondition("ladder must have at least one rung".into()));
    }
    let f = FunctorSpec::gamma(lambda)?;
    let d = f.degree();
    let g = FunctorSpec::SymParam { d, m };
    let n = d;
    let hp = hom_p(&f, &g, n, p)?;
    let top = *ladder.iter().max().expect("nonempty");
    let mf = bar_m(&f, p, top)?;
    let mg = bar_m(&g, p, top)?;
    let hu = hom_u(&mf, &mg, top)?;
    let rungs: Vec<(usize, usize)> = ladder.iter().map(|&r| (r, hu.dim_at(r))).collect();
    let ef = evaluate(&f, n, p)?;
    let eg = evaluate(&g, n, p)?;
    let mut ech = Echelon::new(p, ModuleMap::zero(&mf, &mg, top).flatten().len());
    let mut injective = true;
    for eta in &hp.basis {
        let t = transport(eta, &ef, &eg, &mf, &mg)?;
        injective &= ech.insert(&t.flatten());
    }
    let delta = default_delta(lambda);
    let mut shape_ok = true;
    if omega_generator(lambda, delta, &mf).is_ok() {
        for phi in &hu.basis {
            shape_ok &= prin2_shape_check(phi, lambda, delta, &mf, &mg)?.ok;
        }
    }
    let dim_u_top = hu.dim_at(top);
    let k = rungs.len().min(3);
    let stable = rungs[rungs.len() - k..].windows(2).all(|w| w[0].1 == w[1].1);
    Ok(FaithfulnessReport {
        lambda: lambda.to_vec(),
        m,
        p: p.value(),
        ladder: rungs,
        dim_p: hp.dim(),
        predicted: predicted_dim(lambda, m),
        bijective_at_truncation: injective && dim_u_top == hp.dim(),
        reference_f_dim: reference_f_dim(lambda, m, p),
        transport_injective: injective,
        ladder_stable: stable,
        shape_checks_pass: shape_ok,
        delta,
        evaluation_dim: n,
    })
}

/// `Hom_P(Γ^a, Γ^1)` against `Hom_U(Γ^a(F(1)), F(1))`.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub p: u32,
    pub trunc: usize,
    pub source_degree: usize,
    #[serde(rename = "dimP")]
    pub dim_p: usize,
    #[serde(rename = "dimU")]
    pub dim_u: usize,
    /// Images of the generator `u^{⊗a}` under a basis of `Hom_U`.
    pub witness: Vec<String>,
    pub witness_linear: bool,
}

pub fn counterexample_report_for(p: Prime, a: usize, trunc: usize) -> Result<CounterexampleReport> {
    let src = FunctorSpec::Gamma(vec![a]);
    let tgt = FunctorSpec::Gamma(vec![1]);
    let hp = hom_p(&src, &tgt, a, p)?;
    let ms = bar_m(&src, p, trunc)?;
    let mt = build_f1(p, trunc)?;
    let hu = hom_u(&ms, &mt, trunc)?;
    let mut witness = Vec::new();
    let mut linear = true;
    for phi in &hu.basis {
        linear &= phi.verify_linear(&ms, &mt).is_ok();
        let img = phi.apply(&Element::basis(&ms, a, 0), mt.dim(a));
        let terms: Vec<String> = img
            .coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| if c == 1 { mt.labels(a)[i].clone() } else { format!("{c}*{}", mt.labels(a)[i]) })
            .collect();
        witness.push(format!("{} -> {}", ms.labels(a)[0], if terms.is_empty() { "0".into() } else { terms.join(" + ") }));
    }
    Ok(CounterexampleReport {
        p: p.value(),
        trunc,
        source_degree: a,
        dim_p: hp.dim(),
        dim_u: hu.dim(),
        witness,
        witness_linear: linear,
    })
}

/// The degree-2 case `Γ^2 → Γ^1`.
pub fn counterexample_report(p: Prime, trunc: usize) -> Result<CounterexampleReport> {
    counterexample_report_for(p, 2, trunc)
}

/// Mod-nil generation of `module` by `gen`, tested on every basis vector in
/// degrees `<= check_degree`.
pub fn modnil_report(module: &TruncatedModule, gen: &Element, check_degree: usize) -> Vec<(String, ModnilOutcome)> {
    let mut xs = Vec::new();
    let mut names = Vec::new();
    for d in module.degrees() {
        if d > check_degree {
            break;
        }
        for i in 0..module.dim(d) {
            xs.push(Element::basis(module, d, i));
            names.push(module.labels(d)[i].clone());
        }
    }
    names.into_iter().zip(modnil_generator_check(module, std::slice::from_ref(gen), &xs)).collect()
}

/// Per-degree dimensions, handy for reports.
pub fn dims(module: &TruncatedModule) -> BTreeMap<usize, usize> {
    module.degrees().into_iter().map(|d| (d, module.dim(d))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn bar_m_dimensions() {
        let g2 = bar_m(&FunctorSpec::Gamma(vec![2]), pr(2), 16).unwrap();
        assert_eq!((2..=5).map(|d| g2.dim(d)).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        let s3 = bar_m(&FunctorSpec::SymParam { d: 3, m: 1 }, pr(2), 8).unwrap();
        assert_eq!(s3.dim(3), 1);
        let g1 = bar_m(&FunctorSpec::Gamma(vec![1]), pr(2), 32).unwrap();
        let f1 = build_f1(pr(2), 32).unwrap();
        assert_eq!(dims(&g1), dims(&f1));
    }

    #[test]
    fn omega_examples() {
        let m = bar_m(&FunctorSpec::Gamma(vec![2, 1]), pr(2), 16).unwrap();
        let w = omega_generator(&[2, 1], 2, &m).unwrap();
        assert_eq!(w.degree, 6);
        assert_eq!(w.label, "[u^1.u^1|u^4]");
        let m = bar_m(&FunctorSpec::Gamma(vec![1, 1]), pr(2), 16).unwrap();
        let w = omega_generator(&[1, 1], 1, &m).unwrap();
        assert_eq!((w.degree, w.meets_hypothesis), (3, false));
        let m = bar_m(&FunctorSpec::Gamma(vec![1]), pr(2), 16).unwrap();
        assert_eq!(omega_generator(&[1], 5, &m).unwrap().degree, 1);
    }

    #[test]
    fn transport_identity_and_zero() {
        let p = pr(2);
        let f = FunctorSpec::Gamma(vec![1]);
        let ef = evaluate(&f, 1, p).unwrap();
        let mf = bar_m(&f, p, 32).unwrap();
        let id = transport(&FpMatrix::identity(p, 1), &ef, &ef, &mf, &mf).unwrap();
        for (d, b) in &id.blocks {
            assert_eq!(b, &FpMatrix::identity(p, mf.dim(*d)));
        }
        let z = transport(&FpMatrix::zeros(p, 1, 1), &ef, &ef, &mf, &mf).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn headline_transport_and_shape() {
        let p = pr(2);
        let f = FunctorSpec::Gamma(vec![2, 1]);
        let g = FunctorSpec::SymParam { d: 3, m: 1 };
        let hp = hom_p(&f, &g, 3, p).unwrap();
        let (ef, eg) = (evaluate(&f, 3, p).unwrap(), evaluate(&g, 3, p).unwrap());
        let (mf, mg) = (bar_m(&f, p, 24).unwrap(), bar_m(&g, p, 24).unwrap());
        let phi = transport(&hp.basis[0], &ef, &eg, &mf, &mg).unwrap();
        assert!(!phi.is_zero());
        let v = prin2_shape_check(&phi, &[2, 1], 2, &mf, &mg).unwrap();
        assert_eq!(v, ShapeVerdict { ok: true, witness: None });
        assert!(prin2_shape_check(&ModuleMap::zero(&mf, &mg, 24), &[2, 1], 2, &mf, &mg).unwrap().ok);
        // corrupt the map by adding u^2.u^2.u^2 to the image of ω
        let mut bad = phi.clone();
        let omega = omega_generator(&[2, 1], 2, &mf).unwrap();
        let blk = bad.blocks.get_mut(&6).unwrap();
        let other = (0..mg.dim(6)).find(|&i| mg.labels(6)[i] == "u^2.u^2.u^2").unwrap();
        let col = (0..mf.dim(6)).find(|&j| omega.element.coords[j] == 1).unwrap();
        blk.add_to(other, col, 1);
        let v = prin2_shape_check(&bad, &[2, 1], 2, &mf, &mg).unwrap();
        assert_eq!(v.witness.as_deref(), Some("u^2.u^2.u^2"));
    }

    #[test]
    fn free_module_two() {
        let f2 = free_module(2, pr(2), 16).unwrap();
        let g2 = bar_m(&FunctorSpec::Gamma(vec![2]), pr(2), 16).unwrap();
        assert_eq!(dims(&f2), dims(&g2));
    }
}
