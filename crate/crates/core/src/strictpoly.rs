//! Strict polynomial functors evaluated on `U = F_p^n`, realized as
//! subquotients of `(V^♯ ⊗ U)^{⊗d}`, with the action of the Schur algebra
//! `Γ^d(End U)` and the solver for `Hom_{P_d}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fp::{Echelon, FpMatrix, Prime};
use crate::unstable::{Letter, TensorWord};

/// Functors covered here. Letters of tensor words carry the basis index of
/// `U` in `exp` and the parameter index in `color`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FunctorSpec {
    TensorPower(usize),
    Gamma(Vec<usize>),
    /// `S^{d,V}: U ↦ S^d(V^♯ ⊗ U)` with `dim V = m`.
    SymParam { d: usize, m: usize },
    Exterior(usize),
}

impl FunctorSpec {
    pub fn gamma(lambda: &[usize]) -> Result<Self> {
        if lambda.is_empty() || lambda.contains(&0) {
            return Err(Error::Precondition(format!("composition {lambda:?} must have positive entries")));
        }
        Ok(FunctorSpec::Gamma(lambda.to_vec()))
    }

    pub fn degree(&self) -> usize {
        match self {
            FunctorSpec::TensorPower(d) | FunctorSpec::Exterior(d) => *d,
            FunctorSpec::Gamma(l) => l.iter().sum(),
            FunctorSpec::SymParam { d, .. } => *d,
        }
    }

    /// Number of parameter colours in the ambient tensor power.
    pub fn colors(&self) -> usize {
        match self {
            FunctorSpec::SymParam { m, .. } => *m,
            _ => 1,
        }
    }
}

impl fmt::Display for FunctorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorSpec::TensorPower(d) => write!(f, "T({d})"),
            FunctorSpec::Gamma(l) => {
                let s: Vec<String> = l.iter().map(|x| x.to_string()).collect();
                write!(f, "G({})", s.join(","))
            }
            FunctorSpec::SymParam { d, m } => write!(f, "S({d};m={m})"),
            FunctorSpec::Exterior(d) => write!(f, "L({d})"),
        }
    }
}

/// Canonical representative of a word under the symmetry of `spec`, with the
/// sign picked up (`None` when the word dies, as for repeated letters in `Λ^d`).
pub fn canonical_form(spec: &FunctorSpec, w: &TensorWord) -> Option<(TensorWord, bool)> {
    match spec {
        FunctorSpec::TensorPower(_) => Some((w.clone(), false)),
        FunctorSpec::Gamma(lambda) => {
            let mut out = Vec::with_capacity(w.len());
            let mut start = 0;
            for &b in lambda {
                let mut part = w.0[start..start + b].to_vec();
                part.sort();
                out.extend(part);
                start += b;
            }
            Some((TensorWord(out), false))
        }
        FunctorSpec::SymParam { .. } => {
            let mut v = w.0.clone();
            v.sort();
            Some((TensorWord(v), false))
        }
        FunctorSpec::Exterior(_) => {
            let mut v = w.0.clone();
            let mut odd = false;
            for i in 1..v.len() {
                let mut j = i;
                while j > 0 && v[j - 1] > v[j] {
                    v.swap(j - 1, j);
                    odd = !odd;
                    j -= 1;
                }
            }
            if v.windows(2).any(|x| x[0] == x[1]) {
                return None;
            }
            Some((TensorWord(v), odd))
        }
    }
}

/// `F(U)` for `U = F_p^n`.
#[derive(Clone, Debug)]
pub struct EvaluatedFunctor {
    pub spec: FunctorSpec,
    pub p: Prime,
    pub n: usize,
    /// Ambient basis: all words of length `d` over `colors × n` letters.
    pub ambient: Vec<TensorWord>,
    ambient_index: HashMap<TensorWord, usize>,
    /// Canonical word of each basis vector.
    pub basis: Vec<TensorWord>,
    basis_index: HashMap<TensorWord, usize>,
    pub labels: Vec<String>,
    /// ambient × dim
    pub embed: FpMatrix,
    /// dim × ambient
    pub project: FpMatrix,
    is_sub: bool,
}

fn all_words(d: usize, colors: usize, n: usize) -> Vec<TensorWord> {
    let mut letters = Vec::new();
    for u in 0..n {
        for c in 0..colors {
            letters.push(Letter::new(u as u8, c as u8));
        }
    }
    letters.sort();
    let mut out = vec![TensorWord(Vec::new())];
    for _ in 0..d {
        let mut next = Vec::with_capacity(out.len() * letters.len());
        for w in &out {
            for &l in &letters {
                let mut v = w.0.clone();
                v.push(l);
                next.push(TensorWord(v));
            }
        }
        out = next;
    }
    out
}

fn letter_label(l: &Letter, colored: bool) -> String {
    if colored {
        format!("s{}e{}", l.color, l.exp as usize + 1)
    } else {
        format!("e{}", l.exp as usize + 1)
    }
}

/// Evaluate a functor on `F_p^n`.
pub fn evaluate(spec: &FunctorSpec, n: usize, p: Prime) -> Result<EvaluatedFunctor> {
    if n == 0 || n > 255 {
        return Err(Error::Precondition("evaluation dimension must be in 1..=255".into()));
    }
    if let FunctorSpec::Gamma(l) = spec {
        if l.is_empty() || l.contains(&0) {
            return Err(Error::Precondition(format!("composition {l:?} must have positive entries")));
        }
    }
    let d = spec.degree();
    let colors = spec.colors();
    let ambient = all_words(d, colors, n);
    let ambient_index: HashMap<TensorWord, usize> = ambient.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut classes: BTreeMap<TensorWord, Vec<(usize, bool)>> = BTreeMap::new();
    for (i, w) in ambient.iter().enumerate() {
        if let Some((c, odd)) = canonical_form(spec, w) {
            classes.entry(c).or_default().push((i, odd));
        }
    }
    let basis: Vec<TensorWord> = classes.keys().cloned().collect();
    let basis_index = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let dim = basis.len();
    let mut embed = FpMatrix::zeros(p, ambient.len(), dim);
    let mut project = FpMatrix::zeros(p, dim, ambient.len());
    let is_sub = matches!(spec, FunctorSpec::Gamma(_) | FunctorSpec::TensorPower(_));
    let mut labels = Vec::with_capacity(dim);
    for (b, (c, members)) in classes.iter().enumerate() {
        let ci = ambient_index[c];
        if is_sub {
            // orbit sum; coordinate at the canonical word recovers it
            for &(i, _) in members {
                embed.set(i, b, 1);
            }
            project.set(b, ci, 1);
        } else {
            embed.set(ci, b, 1);
            for &(i, odd) in members {
                project.set(b, i, if odd { p.neg(1) } else { 1 });
            }
        }
        let colored = colors > 1;
        let lab = match spec {
            FunctorSpec::Gamma(lambda) => {
                let mut parts = Vec::new();
                let mut start = 0;
                for &blk in lambda {
                    let s: Vec<String> = c.0[start..start + blk].iter().map(|l| letter_label(l, false)).collect();
                    parts.push(s.join("."));
                    start += blk;
                }
                format!("[{}]", parts.join("|"))
            }
            FunctorSpec::TensorPower(_) => c.0.iter().map(|l| letter_label(l, false)).collect::<Vec<_>>().join("x"),
            FunctorSpec::SymParam { .. } => c.0.iter().map(|l| letter_label(l, colored)).collect::<Vec<_>>().join("."),
            FunctorSpec::Exterior(_) => c.0.iter().map(|l| letter_label(l, false)).collect::<Vec<_>>().join("^"),
        };
        labels.push(lab);
    }
    Ok(EvaluatedFunctor {
        spec: spec.clone(),
        p,
        n,
        ambient,
        ambient_index,
        basis,
        basis_index,
        labels,
        embed,
        project,
        is_sub,
    })
}

impl EvaluatedFunctor {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_index(&self, canonical: &TensorWord) -> Option<usize> {
        self.basis_index.get(canonical).copied()
    }

    /// Multiset of `U`-indices of a basis vector (its torus weight).
    pub fn weight(&self, i: usize) -> Vec<usize> {
        let mut w = vec![0; self.n];
        for l in &self.basis[i].0 {
            w[l.exp as usize] += 1;
        }
        w
    }

    fn apply_ambient(&self, gamma: &SchurOperator, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut out = vec![0; v.len()];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let w = &self.ambient[i];
            let mut counts: Vec<((usize, usize), usize)> = gamma.counts();
            let mut cur = w.clone();
            arrange(w, 0, &mut counts, &mut cur, &mut |nw: &TensorWord| {
                let j = self.ambient_index[nw];
                out[j] = p.add(out[j], c);
            });
        }
        out
    }

    /// Matrix of `γ` on `F(U)`; errors if the image leaves a sub-presentation.
    pub fn action_matrix(&self, gamma: &SchurOperator) -> Result<FpMatrix> {
        let dim = self.dim();
        let mut m = FpMatrix::zeros(self.p, dim, dim);
        for b in 0..dim {
            let w = self.apply_ambient(gamma, &self.embed.column(b));
            let img = self.project.mul_vec(&w);
            if self.is_sub && self.embed.mul_vec(&img) != w {
                return Err(Error::Invariance(format!("{gamma} does not preserve {}", self.spec)));
            }
            for (r, c) in img.into_iter().enumerate() {
                m.set(r, b, c);
            }
        }
        Ok(m)
    }
}

/// Enumerate the distinct ways of assigning the matrix units in `counts` to
/// the positions of `w` (unit `(i, j)` needs letter index `j` and turns it into `i`).
fn arrange(
    w: &TensorWord,
    pos: usize,
    counts: &mut Vec<((usize, usize), usize)>,
    cur: &mut TensorWord,
    emit: &mut dyn FnMut(&TensorWord),
) {
    if pos == w.len() {
        emit(cur);
        return;
    }
    let src = w.0[pos].exp as usize;
    for k in 0..counts.len() {
        let ((i, j), c) = counts[k];
        if c == 0 || j != src {
            continue;
        }
        counts[k].1 -= 1;
        cur.0[pos].exp = i as u8;
        arrange(w, pos + 1, counts, cur, emit);
        cur.0[pos].exp = w.0[pos].exp;
        counts[k].1 += 1;
    }
}

/// Orbit-sum basis element of `Γ^d(End U)`: a multiset of `d` matrix units `E_{ij}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchurOperator(Vec<(usize, usize)>);

impl SchurOperator {
    pub fn new(mut units: Vec<(usize, usize)>) -> Self {
        units.sort();
        SchurOperator(units)
    }

    pub fn units(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    fn counts(&self) -> Vec<((usize, usize), usize)> {
        let mut out: Vec<((usize, usize), usize)> = Vec::new();
        for &u in &self.0 {
            match out.last_mut() {
                Some((v, c)) if *v == u => *c += 1,
                _ => out.push((u, 1)),
            }
        }
        out
    }

    /// Weights `(row content, column content)`: `γ` maps weight `col` to weight `row`.
    pub fn contents(&self, n: usize) -> (Vec<usize>, Vec<usize>) {
        let mut r = vec![0; n];
        let mut c = vec![0; n];
        for &(i, j) in &self.0 {
            r[i] += 1;
            c[j] += 1;
        }
        (r, c)
    }
}

impl fmt::Display for SchurOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|(i, j)| format!("E{}{}", i + 1, j + 1)).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// All multisets of size `d` over the `n²` matrix units.
pub fn schur_operator_basis(n: usize, d: usize) -> Vec<SchurOperator> {
    let units: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(units: &[(usize, usize)], start: usize, d: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<SchurOperator>) {
        if cur.len() == d {
            out.push(SchurOperator(cur.clone()));
            return;
        }
        for k in start..units.len() {
            cur.push(units[k]);
            rec(units, k, d, cur, out);
            cur.pop();
        }
    }
    rec(&units, 0, d, &mut cur, &mut out);
    out
}

/// Apply `γ` to a vector of `F(U)`.
pub fn act(gamma: &SchurOperator, f: &EvaluatedFunctor, v: &[u32]) -> Result<Vec<u32>> {
    if v.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: v.len() });
    }
    let w = f.apply_ambient(gamma, &f.embed.mul_vec(v));
    let img = f.project.mul_vec(&w);
    if f.is_sub && f.embed.mul_vec(&img) != w {
        return Err(Error::Invariance(format!("{gamma} does not preserve {}", f.spec)));
    }
    Ok(img)
}

/// `Hom_{P_d}(F, G)` computed on `F_p^n`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: FunctorSpec,
    pub target: FunctorSpec,
    pub n: usize,
    /// Matrices `G(U) × F(U)`.
    pub basis: Vec<FpMatrix>,
    pub constraint_count: usize,
    pub unknowns: usize,
    /// Source and target have different degrees, so the space is zero.
    pub cross_degree: bool,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Solve `φ A_F(γ) = A_G(γ) φ` over the whole orbit-sum basis of `Γ^d(End U)`.
///
/// The diagonal operators are the weight projectors, so `φ` preserves torus
/// weights; unknowns are restricted to weight-matching entries from the start
/// and every remaining constraint is imposed explicitly.
pub fn hom_p(f: &FunctorSpec, g: &FunctorSpec, n: usize, p: Prime) -> Result<HomSpace> {
    if f.degree() != g.degree() {
        return Ok(HomSpace {
            source: f.clone(),
            target: g.clone(),
            n,
            basis: Vec::new(),
            constraint_count: 0,
            unknowns: 0,
            cross_degree: true,
        });
    }
    let d = f.degree();
    if n < d {
        return Err(Error::Precondition(format!("evaluation dimension {n} is below the degree {d}")));
    }
    let ef = evaluate(f, n, p)?;
    let eg = evaluate(g, n, p)?;
    hom_p_evaluated(&ef, &eg)
}

pub fn hom_p_evaluated(ef: &EvaluatedFunctor, eg: &EvaluatedFunctor) -> Result<HomSpace> {
    let p = ef.p;
    let n = ef.n;
    let d = ef.spec.degree();
    let wf: Vec<Vec<usize>> = (0..ef.dim()).map(|i| ef.weight(i)).collect();
    let wg: Vec<Vec<usize>> = (0..eg.dim()).map(|i| eg.weight(i)).collect();
    // unknown index for (g, f) with equal weights
    let mut unknown: HashMap<(usize, usize), usize> = HashMap::new();
    for (gi, w) in wg.iter().enumerate() {
        for (fi, v) in wf.iter().enumerate() {
            if w == v {
                let k = unknown.len();
                unknown.insert((gi, fi), k);
            }
        }
    }
    let nu = unknown.len();
    let ops = schur_operator_basis(n, d);
    let rows: Vec<Vec<Vec<u32>>> = ops
        .par_iter()
        .map(|gamma| -> Result<Vec<Vec<u32>>> {
            let (rc, cc) = gamma.contents(n);
            let af = ef.action_matrix(gamma)?;
            let ag = eg.action_matrix(gamma)?;
            let mut out = Vec::new();
            for (gi, w) in wg.iter().enumerate() {
                if *w != rc {
                    continue;
                }
                for (fi, v) in wf.iter().enumerate() {
                    if *v != cc {
                        continue;
                    }
                    let mut row = vec![0u32; nu];
                    // (φ A_F)[g, f] = Σ_{f'} φ[g, f'] A_F[f', f]
                    for fp in 0..ef.dim() {
                        let c = af.get(fp, fi);
                        if c != 0 {
                            if let Some(&k) = unknown.get(&(gi, fp)) {
                                row[k] = p.add(row[k], c);
                            }
                        }
                    }
                    // - (A_G φ)[g, f] = - Σ_{g'} A_G[g, g'] φ[g', f]
                    for gp in 0..eg.dim() {
                        let c = ag.get(gi, gp);
                        if c != 0 {
                            if let Some(&k) = unknown.get(&(gp, fi)) {
                                row[k] = p.sub(row[k], c);
                            }
                        }
                    }
                    if row.iter().any(|&x| x != 0) {
                        out.push(row);
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut ech = Echelon::new(p, nu);
    let mut count = 0;
    for r in rows.iter().flatten() {
        count += 1;
        ech.insert(r);
    }
    let basis: Vec<FpMatrix> = ech
        .kernel()
        .into_iter()
        .map(|v| {
            let mut m = FpMatrix::zeros(p, eg.dim(), ef.dim());
            for (&(gi, fi), &k) in &unknown {
                m.set(gi, fi, v[k]);
            }
            m
        })
        .collect();
    let hs = HomSpace {
        source: ef.spec.clone(),
        target: eg.spec.clone(),
        n,
        basis,
        constraint_count: count,
        unknowns: nu,
        cross_degree: false,
    };
    verify_equivariant(&hs, ef, eg, &ops)?;
    Ok(hs)
}

/// Re-check every basis map against every Schur operator.
pub fn verify_equivariant(
    hs: &HomSpace,
    ef: &EvaluatedFunctor,
    eg: &EvaluatedFunctor,
    ops: &[SchurOperator],
) -> Result<()> {
    ops.par_iter().try_for_each(|gamma| {
        let af = ef.action_matrix(gamma)?;
        let ag = eg.action_matrix(gamma)?;
        for phi in &hs.basis {
            if phi.mul(&af) != ag.mul(phi) {
                return Err(Error::Invariance(format!("solution does not commute with {gamma}")));
            }
        }
        Ok(())
    })
}

fn multiset_count(k: usize, m: usize) -> usize {
    // C(k + m - 1, k)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (m + k - 1 - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as usize
}

/// `Π_j C(λ_j + m - 1, λ_j)`, the dimension of `⊗_j S^{λ_j}(V^♯)`.
pub fn predicted_dim(lambda: &[usize], m: usize) -> usize {
    lambda.iter().map(|&l| multiset_count(l, m)).product()
}

/// Vector-space dimension of `spec(F_p^n)` by counting.
pub fn expected_dim(spec: &FunctorSpec, n: usize) -> usize {
    match spec {
        FunctorSpec::TensorPower(d) => n.pow(*d as u32),
        FunctorSpec::Gamma(l) => l.iter().map(|&x| multiset_count(x, n)).product(),
        FunctorSpec::SymParam { d, m } => multiset_count(*d, n * m),
        FunctorSpec::Exterior(d) => {
            if *d > n {
                0
            } else {
                (0..*d).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
            }
        }
    }
}

/// Compositions of `d` (ordered sequences of positive integers).
pub fn compositions(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=d {
        for mut rest in compositions(d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A random `(γ, v)` pair for invariance testing.
pub fn random_vector<R: rand::Rng>(f: &EvaluatedFunctor, rng: &mut R) -> Vec<u32> {
    (0..f.dim()).map(|_| rng.gen_range(0..f.p.value())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn evaluation_dimensions() {
        let g2 = evaluate(&FunctorSpec::Gamma(vec![2]), 2, pr(2)).unwrap();
        assert_eq!(g2.dim(), 3);
        assert_eq!(g2.labels, vec!["[e1.e1]", "[e1.e2]", "[e2.e2]"]);
        assert_eq!(evaluate(&FunctorSpec::SymParam { d: 3, m: 1 }, 1, pr(2)).unwrap().dim(), 1);
        assert_eq!(evaluate(&FunctorSpec::Gamma(vec![2, 1]), 3, pr(2)).unwrap().dim(), 18);
        for spec in [
            FunctorSpec::TensorPower(2),
            FunctorSpec::Gamma(vec![1, 2]),
            FunctorSpec::SymParam { d: 2, m: 2 },
            FunctorSpec::Exterior(2),
            FunctorSpec::Exterior(3),
        ] {
            for n in 1..=3 {
                let e = evaluate(&spec, n, pr(3)).unwrap();
                assert_eq!(e.dim(), expected_dim(&spec, n), "{spec} at {n}");
                assert_eq!(e.project.mul(&e.embed), FpMatrix::identity(pr(3), e.dim()));
            }
        }
    }

    #[test]
    fn schur_basis_counts() {
        assert_eq!(schur_operator_basis(1, 2).len(), 1);
        assert_eq!(schur_operator_basis(2, 1).len(), 4);
        assert_eq!(schur_operator_basis(3, 3).len(), 165);
    }

    #[test]
    fn matrix_unit_action() {
        let g2 = evaluate(&FunctorSpec::Gamma(vec![2]), 2, pr(2)).unwrap();
        let gamma = SchurOperator::new(vec![(0, 0), (0, 0)]);
        assert_eq!(act(&gamma, &g2, &[1, 0, 0]).unwrap(), vec![1, 0, 0]);
        assert_eq!(act(&gamma, &g2, &[0, 0, 1]).unwrap(), vec![0, 0, 0]);
        assert_eq!(act(&gamma, &g2, &[0, 0, 0]).unwrap(), vec![0, 0, 0]);
        // E11 E22 sends e1e2 + e2e1 to itself
        let mixed = SchurOperator::new(vec![(0, 0), (1, 1)]);
        assert_eq!(act(&mixed, &g2, &[0, 1, 0]).unwrap(), vec![0, 1, 0]);
        // E12 E12 sends the orbit sum e2e2 to e1e1
        let raise = SchurOperator::new(vec![(0, 1), (0, 1)]);
        assert_eq!(act(&raise, &g2, &[0, 0, 1]).unwrap(), vec![1, 0, 0]);
        // on S^2 the class of e2e2 goes to e1e1, and on e1e2 to 2 e1e1 = 0
        let s2 = evaluate(&FunctorSpec::SymParam { d: 2, m: 1 }, 2, pr(2)).unwrap();
        assert_eq!(act(&raise, &s2, &[0, 0, 1]).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn headline_poly_hom() {
        let h = hom_p(&FunctorSpec::Gamma(vec![2, 1]), &FunctorSpec::SymParam { d: 3, m: 1 }, 3, pr(2)).unwrap();
        assert_eq!(h.dim(), 1);
        let z = hom_p(&FunctorSpec::Gamma(vec![2]), &FunctorSpec::Gamma(vec![1]), 2, pr(2)).unwrap();
        assert!(z.cross_degree);
        assert_eq!(z.dim(), 0);
    }

    #[test]
    fn yoneda_dimensions() {
        for (d, m) in [(2, 1), (2, 2), (3, 2)] {
            let h = hom_p(&FunctorSpec::Gamma(vec![d]), &FunctorSpec::SymParam { d, m }, d, pr(2)).unwrap();
            assert_eq!(h.dim(), predicted_dim(&[d], m));
        }
    }

    #[test]
    fn predicted() {
        assert_eq!(predicted_dim(&[2, 1], 1), 1);
        assert_eq!(predicted_dim(&[2, 1], 2), 6);
        assert_eq!(predicted_dim(&[3], 1), 1);
        assert_eq!(compositions(3).len(), 4);
    }

    #[test]
    fn exterior_sign_at_odd_prime() {
        let l2 = evaluate(&FunctorSpec::Exterior(2), 2, pr(3)).unwrap();
        assert_eq!(l2.dim(), 1);
        // e2 e1 = -e1 e2
        let idx = l2.ambient.iter().position(|w| *w == TensorWord::plain(&[1, 0])).unwrap();
        assert_eq!(l2.project.get(0, idx), 2);
    }
}
