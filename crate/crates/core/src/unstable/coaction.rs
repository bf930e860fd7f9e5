use std::collections::BTreeMap;
use std::fmt;

use super::module::{Element, Presentation, TensorWord, TruncatedModule};
use crate::error::{Error, Result};
use crate::fp::Prime;

/// Monomial `ξ_1^{r_1} ξ_2^{r_2} ...` in the dual Steenrod algebra (trailing
/// zero exponents dropped).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MilnorMonomial(Vec<u64>);

impl MilnorMonomial {
    pub fn new(mut r: Vec<u64>) -> Self {
        while r.last() == Some(&0) {
            r.pop();
        }
        MilnorMonomial(r)
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ r_i (p^i - 1)`.
    pub fn degree(&self, p: Prime) -> usize {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &r)| r as usize * (p.power(i as u32 + 1) - 1))
            .sum()
    }
}

impl fmt::Display for MilnorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0)
            .map(|(i, &r)| if r == 1 { format!("xi{}", i + 1) } else { format!("xi{}^{r}", i + 1) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Truncated coaction `λ(x) = Σ x_R ⊗ ξ^R`.
#[derive(Clone, Debug)]
pub struct CoactionExpansion {
    pub terms: BTreeMap<MilnorMonomial, Element>,
    /// Largest target degree retained.
    pub bound: usize,
}

fn word_data(module: &TruncatedModule, x: &Element) -> Result<(Vec<(TensorWord, u32)>, WordSink)> {
    match module.presentation() {
        Presentation::Words { words, .. } => {
            let ws = words.get(&x.degree).cloned().unwrap_or_default();
            let terms = ws.into_iter().zip(x.coords.iter().copied()).filter(|(_, c)| *c != 0).collect();
            Ok((terms, WordSink::Direct))
        }
        Presentation::Sub { .. } | Presentation::Quotient { .. } => {
            let (amb, v) = module.to_words(x)?;
            let Presentation::Words { words, .. } = amb.presentation() else {
                return Err(Error::Precondition("nested presentations are not supported".into()));
            };
            let ws = words.get(&x.degree).cloned().unwrap_or_default();
            let terms = ws.into_iter().zip(v).filter(|(_, c)| *c != 0).collect();
            Ok((terms, WordSink::Ambient))
        }
        Presentation::Opaque => Err(Error::Precondition("module has no tensor-word presentation".into())),
    }
}

enum WordSink {
    Direct,
    Ambient,
}

fn ambient_of(module: &TruncatedModule) -> Option<&TruncatedModule> {
    match module.presentation() {
        Presentation::Sub { ambient, .. } | Presentation::Quotient { ambient, .. } => Some(ambient),
        _ => None,
    }
}

fn collect(
    module: &TruncatedModule,
    sink: &WordSink,
    degree: usize,
    accum: &BTreeMap<TensorWord, u32>,
) -> Result<Element> {
    let words_mod = match sink {
        WordSink::Direct => module,
        WordSink::Ambient => ambient_of(module).expect("ambient exists"),
    };
    let mut v = vec![0; words_mod.dim(degree)];
    for (w, &c) in accum {
        let (_, i) = words_mod.word_index(w).ok_or_else(|| Error::Invariance(format!("word {w:?} outside the basis")))?;
        v[i] = module.prime().add(v[i], c);
    }
    match sink {
        WordSink::Direct => Ok(Element { degree, coords: v }),
        WordSink::Ambient => module.from_words(degree, &v),
    }
}

/// Coaction of `x`, truncated to target degrees `<= min(bound, D)`.
///
/// On `F(1)`, `λ(u^{p^s}) = Σ_i u^{p^{s+i}} ⊗ ξ_i^{p^s}`, and the coaction is
/// multiplicative across tensor factors.
pub fn coaction(module: &TruncatedModule, x: &Element, bound: usize) -> Result<CoactionExpansion> {
    let p = module.prime();
    let bound = bound.min(module.trunc());
    let (terms, sink) = word_data(module, x)?;
    // (monomial, target degree) -> word -> coefficient
    let mut acc: BTreeMap<MilnorMonomial, (usize, BTreeMap<TensorWord, u32>)> = BTreeMap::new();
    for (w, c) in terms {
        let mut shifts = vec![0u8; w.len()];
        expand(p, &w, 0, &mut shifts, x.degree, bound, &mut |shifts: &[u8], deg: usize| {
            let mut r: Vec<u64> = Vec::new();
            let mut nw = w.clone();
            for (j, &i) in shifts.iter().enumerate() {
                if i > 0 {
                    let i = i as usize;
                    if r.len() < i {
                        r.resize(i, 0);
                    }
                    r[i - 1] += p.power(w.0[j].exp as u32) as u64;
                    nw.0[j].exp += i as u8;
                }
            }
            let entry = acc.entry(MilnorMonomial::new(r)).or_insert_with(|| (deg, BTreeMap::new()));
            let slot = entry.1.entry(nw).or_insert(0);
            *slot = p.add(*slot, c);
        });
    }
    let mut out = BTreeMap::new();
    for (m, (deg, words)) in acc {
        let e = collect(module, &sink, deg, &words)?;
        if !e.is_zero() {
            out.insert(m, e);
        }
    }
    Ok(CoactionExpansion { terms: out, bound })
}

fn expand(
    p: Prime,
    w: &TensorWord,
    j: usize,
    shifts: &mut Vec<u8>,
    deg: usize,
    bound: usize,
    emit: &mut dyn FnMut(&[u8], usize),
) {
    if j == w.len() {
        emit(shifts, deg);
        return;
    }
    let base = p.power(w.0[j].exp as u32);
    let mut i = 0u8;
    loop {
        let grown = base * p.power(i as u32);
        let nd = deg - base + grown;
        if nd > bound {
            break;
        }
        shifts[j] = i;
        expand(p, w, j + 1, shifts, nd, bound, emit);
        i += 1;
    }
    shifts[j] = 0;
}

/// The operation `m_n(r)` dual to `ξ_r^n` (with `m_n(0)` the identity).
pub fn milnor_op(module: &TruncatedModule, n: u64, r: u32, x: &Element) -> Result<Element> {
    if r == 0 {
        return Ok(x.clone());
    }
    let p = module.prime();
    let target = x.degree + n as usize * (p.power(r) - 1);
    if target > module.trunc() {
        return Err(Error::TruncationOverflow { degree: target, trunc: module.trunc() });
    }
    let (terms, sink) = word_data(module, x)?;
    let mut acc: BTreeMap<TensorWord, u32> = BTreeMap::new();
    for (w, c) in terms {
        let pw = w.powers(p);
        let d = w.len();
        for mask in 0u32..(1 << d) {
            let s: usize = (0..d).filter(|j| mask & (1 << j) != 0).map(|j| pw[j]).sum();
            if s as u64 != n {
                continue;
            }
            let mut nw = w.clone();
            for j in 0..d {
                if mask & (1 << j) != 0 {
                    nw.0[j].exp += r as u8;
                }
            }
            let slot = acc.entry(nw).or_insert(0);
            *slot = p.add(*slot, c);
        }
    }
    collect(module, &sink, target, &acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unstable::module::{build_f1, tensor_power};

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn word(m: &TruncatedModule, exps: &[u8]) -> Element {
        let (d, i) = m.word_index(&TensorWord::plain(exps)).unwrap();
        Element::basis(m, d, i)
    }

    #[test]
    fn coaction_of_u_in_f1() {
        let f1 = build_f1(pr(2), 16).unwrap();
        let lam = coaction(&f1, &word(&f1, &[0]), 16).unwrap();
        assert_eq!(lam.terms.len(), 5);
        assert_eq!(lam.terms[&MilnorMonomial::new(vec![])], word(&f1, &[0]));
        assert_eq!(lam.terms[&MilnorMonomial::new(vec![1])], word(&f1, &[1]));
        assert_eq!(lam.terms[&MilnorMonomial::new(vec![0, 0, 0, 1])], word(&f1, &[4]));
    }

    #[test]
    fn milnor_ops_on_f1() {
        let f1 = build_f1(pr(3), 81).unwrap();
        let u = word(&f1, &[0]);
        assert_eq!(milnor_op(&f1, 1, 2, &u).unwrap(), word(&f1, &[2]));
        assert!(milnor_op(&f1, 2, 1, &u).unwrap().is_zero());
        assert_eq!(milnor_op(&f1, 5, 0, &u).unwrap(), u);
        // m_n(1) agrees with P^n
        let t = tensor_power(pr(3), 2, 1, 81).unwrap();
        for n in t.degrees() {
            for i in 0..t.dim(n) {
                let x = Element::basis(&t, n, i);
                for k in 1..=n {
                    if n + 2 * k > 81 {
                        break;
                    }
                    assert_eq!(milnor_op(&t, k as u64, 1, &x).unwrap(), t.act(k, &x).unwrap());
                }
            }
        }
    }

    #[test]
    fn coaction_coefficient_matches_milnor_op() {
        let t = tensor_power(pr(2), 2, 1, 32).unwrap();
        let x = word(&t, &[0, 1]);
        let lam = coaction(&t, &x, 32).unwrap();
        for (m, e) in &lam.terms {
            if m.exponents().iter().filter(|&&r| r > 0).count() == 1 {
                let r = m.exponents().len() as u32;
                let n = *m.exponents().last().unwrap();
                assert_eq!(&milnor_op(&t, n, r, &x).unwrap(), e);
            }
        }
        assert_eq!(format!("{}", MilnorMonomial::new(vec![2, 0, 1])), "xi1^2 xi3");
    }
}
