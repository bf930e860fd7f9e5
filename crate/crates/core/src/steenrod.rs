//! The algebra generated by the reduced powers `P^k` modulo the Adem relations,
//! with normal forms in the admissible basis.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{lucas_binomial, Prime};

/// A monomial `P^{i_1} ... P^{i_k}`; the empty sequence is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PowerMonomial(Vec<u32>);

impl PowerMonomial {
    pub fn unit() -> Self {
        PowerMonomial(Vec::new())
    }

    /// Build from indices, all of which must be positive.
    pub fn new(indices: Vec<u32>) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::Precondition("monomial indices must be >= 1".into()));
        }
        Ok(PowerMonomial(indices))
    }

    /// Build from a word, dropping `P^0 = 1` factors.
    pub fn from_word(word: &[u32]) -> Self {
        PowerMonomial(word.iter().copied().filter(|&i| i != 0).collect())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for PowerMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("P{i}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `(p-1) Σ i_j`.
pub fn degree(m: &PowerMonomial, p: Prime) -> usize {
    word_degree(m.indices(), p)
}

pub fn word_degree(word: &[u32], p: Prime) -> usize {
    (p.value() as usize - 1) * word.iter().map(|&i| i as usize).sum::<usize>()
}

/// `i_j >= p i_{j+1}` for every adjacent pair.
pub fn is_admissible(m: &PowerMonomial, p: Prime) -> bool {
    first_inadmissible(m.indices(), p).is_none()
}

fn first_inadmissible(word: &[u32], p: Prime) -> Option<usize> {
    word.windows(2).position(|w| (w[0] as u64) < p.value() as u64 * w[1] as u64)
}

/// `p i_1 - (p-1) Σ i_j`; the unit has excess 0.
pub fn excess(m: &PowerMonomial, p: Prime) -> i64 {
    match m.indices().first() {
        None => 0,
        Some(&i1) => p.value() as i64 * i1 as i64 - degree(m, p) as i64,
    }
}

/// Which form of the Adem relation drives normalisation.
///
/// `Printed` is the sign-free relation
/// `P^i P^j = Σ_t C((p-1)(j-t)-1, i-pt) P^{i+j-t} P^t`.
/// `Signed` inserts the classical factor `(-1)^{i+t}`; this is the relation
/// satisfied by the action on `F(1)` and its tensor powers when `p` is odd.
/// At `p = 2` the two coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum AdemConvention {
    #[default]
    Printed,
    Signed,
}

/// Homogeneous element of the algebra, stored in the admissible basis.
#[derive(Clone, PartialEq, Eq)]
pub struct SteenrodElement {
    p: Prime,
    terms: BTreeMap<PowerMonomial, u32>,
}

impl SteenrodElement {
    pub fn zero(p: Prime) -> Self {
        SteenrodElement { p, terms: BTreeMap::new() }
    }

    pub fn unit(p: Prime) -> Self {
        let mut e = Self::zero(p);
        e.terms.insert(PowerMonomial::unit(), 1);
        e
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PowerMonomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &PowerMonomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Common degree of all terms; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next().map(|m| degree(m, self.p))
    }

    /// Add `c · m` where `m` must be admissible and of the element's degree.
    pub fn add_term(&mut self, m: PowerMonomial, c: u32) -> Result<()> {
        if !is_admissible(&m, self.p) {
            return Err(Error::Precondition(format!("{m} is not admissible")));
        }
        if let Some(d) = self.degree() {
            if d != degree(&m, self.p) {
                return Err(Error::Precondition(format!(
                    "inhomogeneous element: {m} has degree {}, expected {d}",
                    degree(&m, self.p)
                )));
            }
        }
        self.add_unchecked(m, c);
        Ok(())
    }

    fn add_unchecked(&mut self, m: PowerMonomial, c: u32) {
        let p = self.p;
        let c = c % p.value();
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = p.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &SteenrodElement) -> Result<SteenrodElement> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.value(), other.p.value()));
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> SteenrodElement {
        let mut out = SteenrodElement::zero(self.p);
        for (m, v) in self.terms() {
            out.add_unchecked(m.clone(), self.p.mul(v, c));
        }
        out
    }

    /// Parse `c1*M1 + c2*M2`, where a monomial is `P{i1} P{i2} ...`,
    /// normalising each monomial with the given convention.
    pub fn parse(text: &str, algebra: &SteenrodAlgebra) -> Result<SteenrodElement> {
        let p = algebra.prime();
        let mut out = SteenrodElement::zero(p);
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        for raw in text.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            let (coeff, mono) = match term.split_once('*') {
                Some((c, m)) => {
                    let c: i64 = c
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
                    (p.from_i64(c), m.trim())
                }
                None => (1, term),
            };
            if mono == "0" {
                continue;
            }
            let word = parse_word(mono)?;
            let part = algebra.normalize(&word).scale(coeff);
            out = out.add(&part)?;
        }
        Ok(out)
    }
}

/// Parse a monomial such as `P2 P1`, `P^2 P^1` or `P{2} P{1}`; `1` is the unit.
pub fn parse_word(text: &str) -> Result<Vec<u32>> {
    let text = text.trim();
    if text == "1" {
        return Ok(Vec::new());
    }
    if text == "0" {
        return Err(Error::Parse("0 is not a monomial".into()));
    }
    text.split_whitespace()
        .map(|tok| {
            let body = tok
                .strip_prefix('P')
                .ok_or_else(|| Error::Parse(format!("expected P<k>, got {tok:?}")))?;
            let body = body.trim_start_matches('^').trim_start_matches('{').trim_end_matches('}');
            body.parse::<u32>().map_err(|_| Error::Parse(format!("bad index in {tok:?}")))
        })
        .collect()
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, &c)| match (c, m.is_unit()) {
                (1, _) => m.to_string(),
                (c, true) => c.to_string(),
                (c, false) => format!("{c}*{m}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SteenrodElement(p={}, {})", self.p, self)
    }
}

/// Rewriting engine for one prime and one convention. Normal forms of words
/// are memoised, so share one instance across many products.
/// Normal form of a word: admissible index sequences with coefficients.
pub type WordTerms = Vec<(Vec<u32>, u32)>;

pub struct SteenrodAlgebra {
    p: Prime,
    convention: AdemConvention,
    cache: Mutex<HashMap<Vec<u32>, WordTerms>>,
}

impl SteenrodAlgebra {
    pub fn new(p: Prime, convention: AdemConvention) -> Self {
        SteenrodAlgebra { p, convention, cache: Mutex::new(HashMap::new()) }
    }

    /// The convention that matches the action on tensor powers of `F(1)`.
    pub fn acting(p: Prime) -> Self {
        Self::new(p, AdemConvention::Signed)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn convention(&self) -> AdemConvention {
        self.convention
    }

    /// Right-hand side of the relation for an inadmissible pair `i < p j`.
    pub fn adem_pair(&self, i: u32, j: u32) -> WordTerms {
        let p = self.p;
        let q = p.value();
        debug_assert!((i as u64) < q as u64 * j as u64);
        let mut out = Vec::new();
        for t in 0..=i / q {
            let top = (q - 1) as u64 * (j - t) as u64 - 1;
            let mut c = lucas_binomial(top, (i - q * t) as u64, p).value;
            if c == 0 {
                continue;
            }
            if self.convention == AdemConvention::Signed && (i + t) % 2 == 1 {
                c = p.neg(c);
            }
            let mut w = vec![i + j - t];
            if t > 0 {
                w.push(t);
            }
            out.push((w, c));
        }
        out
    }

    /// Admissible expansion of a word, as `(admissible word, coefficient)` pairs.
    pub fn normalize_word(&self, word: &[u32]) -> WordTerms {
        let word: Vec<u32> = word.iter().copied().filter(|&i| i != 0).collect();
        let Some(pos) = first_inadmissible(&word, self.p) else {
            return vec![(word, 1)];
        };
        if let Some(hit) = self.cache.lock().unwrap().get(&word) {
            return hit.clone();
        }
        let p = self.p;
        let mut acc: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        for (mid, c) in self.adem_pair(word[pos], word[pos + 1]) {
            let mut w = word[..pos].to_vec();
            w.extend_from_slice(&mid);
            w.extend_from_slice(&word[pos + 2..]);
            for (nw, nc) in self.normalize_word(&w) {
                let slot = acc.entry(nw).or_insert(0);
                *slot = p.add(*slot, p.mul(c, nc));
            }
        }
        let result: WordTerms = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        self.cache.lock().unwrap().insert(word, result.clone());
        result
    }

    pub fn normalize(&self, word: &[u32]) -> SteenrodElement {
        let mut out = SteenrodElement::zero(self.p);
        for (w, c) in self.normalize_word(word) {
            out.add_unchecked(PowerMonomial(w), c);
        }
        out
    }

    pub fn monomial(&self, indices: &[u32]) -> SteenrodElement {
        self.normalize(indices)
    }

    pub fn multiply(&self, a: &SteenrodElement, b: &SteenrodElement) -> Result<SteenrodElement> {
        for x in [a, b] {
            if x.p != self.p {
                return Err(Error::ModulusMismatch(self.p.value(), x.p.value()));
            }
        }
        let p = self.p;
        let mut out = SteenrodElement::zero(p);
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let mut w = ma.indices().to_vec();
                w.extend_from_slice(mb.indices());
                let c = p.mul(ca, cb);
                for (nw, nc) in self.normalize_word(&w) {
                    out.add_unchecked(PowerMonomial(nw), p.mul(c, nc));
                }
            }
        }
        Ok(out)
    }
}

/// Admissible expansion of `P^{i_1} ... P^{i_k}` under the sign-free relation.
pub fn adem_normalize(word: &[u32], p: Prime) -> SteenrodElement {
    SteenrodAlgebra::new(p, AdemConvention::Printed).normalize(word)
}

/// Product under the sign-free relation.
pub fn multiply(a: &SteenrodElement, b: &SteenrodElement) -> Result<SteenrodElement> {
    if a.p != b.p {
        return Err(Error::ModulusMismatch(a.p.value(), b.p.value()));
    }
    SteenrodAlgebra::new(a.p, AdemConvention::Printed).multiply(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn mono(v: &[u32]) -> PowerMonomial {
        PowerMonomial::new(v.to_vec()).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(degree(&PowerMonomial::unit(), p(5)), 0);
        assert_eq!(degree(&mono(&[2]), p(2)), 2);
        assert_eq!(degree(&mono(&[2, 1]), p(3)), 6);
    }

    #[test]
    fn admissibility() {
        assert!(is_admissible(&mono(&[2, 1]), p(2)));
        assert!(!is_admissible(&mono(&[1, 1]), p(2)));
        assert!(is_admissible(&mono(&[3, 1]), p(3)));
        assert!(!is_admissible(&mono(&[2, 1]), p(3)));
        assert!(is_admissible(&mono(&[7]), p(3)));
        assert!(PowerMonomial::new(vec![1, 0]).is_err());
    }

    #[test]
    fn excess_values() {
        assert_eq!(excess(&mono(&[1]), p(2)), 1);
        assert_eq!(excess(&mono(&[2, 1]), p(2)), 1);
        assert_eq!(excess(&mono(&[3, 1]), p(3)), 1);
        assert_eq!(excess(&PowerMonomial::unit(), p(3)), 0);
    }

    #[test]
    fn adem_examples() {
        assert!(adem_normalize(&[1, 1], p(2)).is_zero());
        let e = adem_normalize(&[2, 2], p(2));
        assert_eq!(e.to_string(), "P3 P1");
        let e = adem_normalize(&[1, 1], p(3));
        assert_eq!(e.to_string(), "P2");
        let signed = SteenrodAlgebra::new(p(3), AdemConvention::Signed);
        assert_eq!(signed.normalize(&[1, 1]).to_string(), "2*P2");
    }

    #[test]
    fn unit_and_zero() {
        let pr = p(2);
        let x = adem_normalize(&[4, 2, 1], pr);
        assert_eq!(multiply(&SteenrodElement::unit(pr), &x).unwrap(), x);
        assert_eq!(multiply(&x, &SteenrodElement::unit(pr)).unwrap(), x);
        assert!(multiply(&SteenrodElement::zero(pr), &x).unwrap().is_zero());
        assert_eq!(SteenrodElement::unit(pr).to_string(), "1");
        assert_eq!(SteenrodElement::zero(pr).to_string(), "0");
    }

    #[test]
    fn products() {
        let pr = p(2);
        let a = adem_normalize(&[1], pr);
        assert!(multiply(&a, &a).unwrap().is_zero());
        let b = adem_normalize(&[2], pr);
        assert_eq!(multiply(&b, &b).unwrap().to_string(), "P3 P1");
        let c = adem_normalize(&[1], p(3));
        assert!(multiply(&a, &c).is_err());
    }

    #[test]
    fn sq_relations_match_known_table() {
        let pr = p(2);
        // Sq^1 Sq^2 = Sq^3, Sq^2 Sq^3 = Sq^5 + Sq^4 Sq^1, Sq^3 Sq^3 = Sq^5 Sq^1.
        assert_eq!(adem_normalize(&[1, 2], pr).to_string(), "P3");
        assert_eq!(adem_normalize(&[2, 3], pr).to_string(), "P5 + P4 P1");
        assert_eq!(adem_normalize(&[3, 3], pr).to_string(), "P5 P1");
    }

    #[test]
    fn parse_and_display() {
        let alg = SteenrodAlgebra::new(p(2), AdemConvention::Printed);
        let e = SteenrodElement::parse("P2 P2", &alg).unwrap();
        assert_eq!(e.to_string(), "P3 P1");
        let e = SteenrodElement::parse("P{1} P{1} + P^2", &alg).unwrap();
        assert_eq!(e.to_string(), "P2");
        let e = SteenrodElement::parse("1", &alg).unwrap();
        assert_eq!(e.to_string(), "1");
        let e = SteenrodElement::parse("2*P4", &alg).unwrap();
        assert!(e.is_zero());
        assert!(SteenrodElement::parse("Q1", &alg).is_err());
        assert!(SteenrodElement::parse("P1 + ", &alg).is_err());
        let alg3 = SteenrodAlgebra::new(p(3), AdemConvention::Printed);
        let e = SteenrodElement::parse("2*P3 P1 + P4", &alg3).unwrap();
        assert_eq!(e.to_string(), "P4 + 2*P3 P1");
    }

    #[test]
    fn inhomogeneous_terms_rejected() {
        let mut e = SteenrodElement::zero(p(2));
        e.add_term(mono(&[2]), 1).unwrap();
        assert!(e.add_term(mono(&[3]), 1).is_err());
        assert!(e.add_term(mono(&[1, 1]), 1).is_err());
    }
}
