use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fp::{axpy, Echelon, FpMatrix, GradedSpace, Prime};
use crate::steenrod::SteenrodElement;

/// One tensor factor `u^{p^exp} ⊗ s_color` of a word in `(F(1) ⊗ V^♯)^{⊗d}`.
/// Uncoloured words use colour 0 throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub exp: u8,
    pub color: u8,
}

impl Letter {
    pub fn new(exp: u8, color: u8) -> Self {
        Letter { exp, color }
    }

    pub fn plain(exp: u8) -> Self {
        Letter { exp, color: 0 }
    }
}

/// Basis monomial `u^{p^{e_1}} ⊗ ... ⊗ u^{p^{e_d}}` of a tensor power of `F(1)`,
/// optionally decorated with dual-basis indices of a parameter space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorWord(pub Vec<Letter>);

impl TensorWord {
    pub fn plain(exps: &[u8]) -> Self {
        TensorWord(exps.iter().map(|&e| Letter::plain(e)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The exponents `p^{e_j}` of the factors.
    pub fn powers(&self, p: Prime) -> Vec<usize> {
        self.0.iter().map(|l| p.power(l.exp as u32)).collect()
    }

    pub fn degree(&self, p: Prime) -> usize {
        self.powers(p).iter().sum()
    }

    pub fn concat(&self, other: &TensorWord) -> TensorWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        TensorWord(v)
    }

    fn label(&self, p: Prime, colored: bool, sep: &str) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                if colored {
                    format!("u^{}s{}", p.power(l.exp as u32), l.color)
                } else {
                    format!("u^{}", p.power(l.exp as u32))
                }
            })
            .collect();
        parts.join(sep)
    }
}

/// Homogeneous element of a truncated module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    pub degree: usize,
    pub coords: Vec<u32>,
}

impl Element {
    pub fn zero(module: &TruncatedModule, degree: usize) -> Self {
        Element { degree, coords: vec![0; module.dim(degree)] }
    }

    pub fn basis(module: &TruncatedModule, degree: usize, index: usize) -> Self {
        let mut e = Self::zero(module, degree);
        e.coords[index] = 1;
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Element, p: Prime) -> Result<Element> {
        if self.degree != other.degree || self.coords.len() != other.coords.len() {
            return Err(Error::DimensionMismatch { expected: self.coords.len(), got: other.coords.len() });
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| p.add(a, b)).collect();
        Ok(Element { degree: self.degree, coords })
    }

    pub fn scale(&self, c: u32, p: Prime) -> Element {
        Element { degree: self.degree, coords: self.coords.iter().map(|&a| p.mul(a, c)).collect() }
    }
}

/// How a module was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Free(usize),
    TensorPower { d: usize, colors: usize },
    Tensor(String, String),
    Sub(String),
    Quotient(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Free(n) => write!(f, "F({n})"),
            Provenance::TensorPower { d, colors: 1 } => write!(f, "F(1)^{d}"),
            Provenance::TensorPower { d, colors } => write!(f, "(F(1) x V#[{colors}])^{d}"),
            Provenance::Tensor(a, b) => write!(f, "{a} x {b}"),
            Provenance::Sub(s) => write!(f, "sub: {s}"),
            Provenance::Quotient(s) => write!(f, "quotient: {s}"),
        }
    }
}

/// Basis of a submodule in one degree, in reduced form: vector `i` has a 1 in
/// ambient coordinate `pivots[i]` and 0 in every other pivot coordinate.
#[derive(Clone, Debug, Default)]
pub struct ReducedBasis {
    pub vectors: Vec<Vec<u32>>,
    pub pivots: Vec<usize>,
}

impl ReducedBasis {
    fn from_echelon(e: &Echelon) -> Self {
        ReducedBasis { vectors: e.basis().to_vec(), pivots: e.pivot_columns().to_vec() }
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[u32], p: Prime) -> Option<Vec<u32>> {
        let c: Vec<u32> = self.pivots.iter().map(|&i| v[i]).collect();
        let mut acc = vec![0; v.len()];
        for (ci, vec) in c.iter().zip(&self.vectors) {
            axpy(p, &mut acc, *ci, vec);
        }
        (acc == v).then_some(c)
    }

    pub fn combine(&self, coords: &[u32], len: usize, p: Prime) -> Vec<u32> {
        let mut acc = vec![0; len];
        for (c, vec) in coords.iter().zip(&self.vectors) {
            axpy(p, &mut acc, *c, vec);
        }
        acc
    }
}

/// Relation of a module to a tensor-word ambient, when there is one.
#[derive(Clone, Debug)]
pub enum Presentation {
    /// The module is `(F(1) ⊗ V^♯)^{⊗d}` itself, with tensor words as basis.
    Words { d: usize, colors: usize, words: BTreeMap<usize, Vec<TensorWord>>, index: HashMap<TensorWord, (usize, usize)> },
    Sub { ambient: Arc<TruncatedModule>, bases: BTreeMap<usize, ReducedBasis> },
    /// `project[n]` maps ambient coordinates onto the quotient; `section[n]`
    /// holds the chosen ambient representative of every quotient basis vector.
    Quotient { ambient: Arc<TruncatedModule>, project: BTreeMap<usize, FpMatrix>, section: BTreeMap<usize, Vec<Vec<u32>>> },
    Opaque,
}

/// Finite graded F_p space with the action of every `P^k` that stays inside
/// degrees `0..=trunc`.
///
/// Action matrices are stored only for `1 <= k <= degree` (instability makes
/// the rest vanish) and only when nonzero; a missing entry is the zero map.
#[derive(Clone, Debug)]
pub struct TruncatedModule {
    p: Prime,
    trunc: usize,
    space: GradedSpace,
    action: HashMap<(usize, usize), FpMatrix>,
    presentation: Presentation,
    provenance: Provenance,
}

fn word_label_list(words: &[TensorWord], p: Prime, colored: bool) -> Vec<String> {
    words.iter().map(|w| w.label(p, colored, "|")).collect()
}

impl TruncatedModule {
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.space.dim(degree)
    }

    pub fn labels(&self, degree: usize) -> &[String] {
        self.space.labels(degree)
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Degrees with a nonzero component.
    pub fn degrees(&self) -> Vec<usize> {
        self.space.degrees().collect()
    }

    fn target(&self, k: usize, degree: usize) -> usize {
        degree + k * (self.p.value() as usize - 1)
    }

    /// Matrix of `P^k` from `degree` to `degree + k(p-1)`.
    pub fn action_matrix(&self, k: usize, degree: usize) -> Result<FpMatrix> {
        let t = self.target(k, degree);
        if t > self.trunc {
            return Err(Error::TruncationOverflow { degree: t, trunc: self.trunc });
        }
        if k == 0 {
            return Ok(FpMatrix::identity(self.p, self.dim(degree)));
        }
        Ok(self
            .action
            .get(&(k, degree))
            .cloned()
            .unwrap_or_else(|| FpMatrix::zeros(self.p, self.dim(t), self.dim(degree))))
    }

    /// Borrowed nonzero action matrix, if any (no truncation check).
    pub fn action_entry(&self, k: usize, degree: usize) -> Option<&FpMatrix> {
        self.action.get(&(k, degree))
    }

    pub fn act(&self, k: usize, x: &Element) -> Result<Element> {
        let t = self.target(k, x.degree);
        if t > self.trunc {
            return Err(Error::TruncationOverflow { degree: t, trunc: self.trunc });
        }
        if k == 0 {
            return Ok(x.clone());
        }
        match self.action.get(&(k, x.degree)) {
            Some(m) => Ok(Element { degree: t, coords: m.mul_vec(&x.coords) }),
            None => Ok(Element::zero(self, t)),
        }
    }

    /// Act by the word `P^{i_1} ... P^{i_k}` (rightmost factor first).
    pub fn act_word(&self, word: &[u32], x: &Element) -> Result<Element> {
        word.iter().rev().try_fold(x.clone(), |acc, &i| self.act(i as usize, &acc))
    }

    pub fn act_element(&self, theta: &SteenrodElement, x: &Element) -> Result<Element> {
        let p = self.p;
        let deg = theta.degree().unwrap_or(0);
        let mut acc = Element { degree: x.degree + deg, coords: vec![0; self.dim_checked(x.degree + deg)?] };
        for (m, c) in theta.terms() {
            let y = self.act_word(m.indices(), x)?;
            axpy(p, &mut acc.coords, c, &y.coords);
        }
        Ok(acc)
    }

    fn dim_checked(&self, degree: usize) -> Result<usize> {
        if degree > self.trunc {
            return Err(Error::TruncationOverflow { degree, trunc: self.trunc });
        }
        Ok(self.dim(degree))
    }

    /// `P_0 x = P^{|x|} x`.
    pub fn p0(&self, x: &Element) -> Result<Element> {
        self.act(x.degree, x)
    }

    /// Tensor word attached to a basis vector: the word itself, the pivot word
    /// of an orbit sum, or the single-word representative of a quotient class.
    pub fn canonical_word(&self, degree: usize, index: usize) -> Option<TensorWord> {
        match &self.presentation {
            Presentation::Words { words, .. } => words.get(&degree).map(|w| w[index].clone()),
            Presentation::Sub { ambient, bases } => {
                let b = bases.get(&degree)?;
                ambient.canonical_word(degree, b.pivots[index])
            }
            Presentation::Quotient { ambient, section, .. } => {
                let v = &section.get(&degree)?[index];
                let nz: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0).collect();
                if nz.len() == 1 && v[nz[0]] == 1 {
                    ambient.canonical_word(degree, nz[0])
                } else {
                    None
                }
            }
            Presentation::Opaque => None,
        }
    }

    /// Index of a tensor word in a `Words` module.
    pub fn word_index(&self, w: &TensorWord) -> Option<(usize, usize)> {
        match &self.presentation {
            Presentation::Words { index, .. } => index.get(w).copied(),
            _ => None,
        }
    }

    /// Basis vector whose canonical word is `w`, in any word-backed presentation.
    pub fn find_canonical(&self, w: &TensorWord) -> Option<(usize, usize)> {
        if let Some(hit) = self.word_index(w) {
            return Some(hit);
        }
        let deg = w.degree(self.p);
        (0..self.dim(deg))
            .find(|&i| self.canonical_word(deg, i).as_ref() == Some(w))
            .map(|i| (deg, i))
    }

    /// Express an element of a word-presented module (or a sub/quotient of
    /// one) in tensor-word coordinates of the underlying word module.
    pub fn to_words(&self, x: &Element) -> Result<(Arc<TruncatedModule>, Vec<u32>)> {
        match &self.presentation {
            Presentation::Words { .. } => Err(Error::Precondition("module is its own word ambient".into())),
            Presentation::Sub { ambient, bases } => {
                let len = ambient.dim(x.degree);
                let v = match bases.get(&x.degree) {
                    Some(b) => b.combine(&x.coords, len, self.p),
                    None => vec![0; len],
                };
                Ok((ambient.clone(), v))
            }
            Presentation::Quotient { ambient, section, .. } => {
                let len = ambient.dim(x.degree);
                let mut v = vec![0; len];
                if let Some(s) = section.get(&x.degree) {
                    for (c, col) in x.coords.iter().zip(s) {
                        axpy(self.p, &mut v, *c, col);
                    }
                }
                Ok((ambient.clone(), v))
            }
            Presentation::Opaque => Err(Error::Precondition("module has no tensor-word presentation".into())),
        }
    }

    /// Inverse of [`Self::to_words`] on the image.
    pub fn from_words(&self, degree: usize, v: &[u32]) -> Result<Element> {
        match &self.presentation {
            Presentation::Words { .. } => Ok(Element { degree, coords: v.to_vec() }),
            Presentation::Sub { bases, .. } => {
                let coords = match bases.get(&degree) {
                    Some(b) => b
                        .coordinates(v, self.p)
                        .ok_or_else(|| Error::Invariance(format!("vector in degree {degree} leaves the submodule")))?,
                    None if v.iter().all(|&c| c == 0) => Vec::new(),
                    None => return Err(Error::Invariance(format!("vector in degree {degree} leaves the submodule"))),
                };
                Ok(Element { degree, coords })
            }
            Presentation::Quotient { project, .. } => {
                let coords = match project.get(&degree) {
                    Some(m) => m.mul_vec(v),
                    None => Vec::new(),
                };
                Ok(Element { degree, coords })
            }
            Presentation::Opaque => Err(Error::Precondition("module has no tensor-word presentation".into())),
        }
    }

    /// Check the Adem relations `P^i P^j = Σ ...` (for `i < p j`) on every basis
    /// vector whose composites stay in degrees `<= max_degree`.
    pub fn verify_adem(&self, algebra: &crate::steenrod::SteenrodAlgebra, max_degree: usize) -> Result<()> {
        let q = self.p.value() as usize;
        let top = max_degree.min(self.trunc);
        for n in self.degrees() {
            if n > top {
                continue;
            }
            // P^j x = 0 for j > n, so only j <= n matters.
            for j in 1..=n {
                let mid = self.target(j, n);
                if mid > top {
                    break;
                }
                for i in 1..q * j {
                    let t = self.target(i, mid);
                    if t > top {
                        break;
                    }
                    let lhs = self.action_matrix(i, mid)?.mul(&self.action_matrix(j, n)?);
                    let mut rhs = FpMatrix::zeros(self.p, self.dim(t), self.dim(n));
                    for (w, c) in algebra.normalize_word(&[i as u32, j as u32]) {
                        let mut m = FpMatrix::identity(self.p, self.dim(n));
                        let mut deg = n;
                        for &k in w.iter().rev() {
                            m = self.action_matrix(k as usize, deg)?.mul(&m);
                            deg = self.target(k as usize, deg);
                        }
                        rhs = rhs.add(&m.scale(c));
                    }
                    if lhs != rhs {
                        return Err(Error::Invariance(format!(
                            "Adem relation P{i} P{j} fails on degree {n} of {}",
                            self.provenance
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Text dump: basis lines `degree<TAB>label`, then `P{k} label -> combination`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for n in self.degrees() {
            for l in self.labels(n) {
                let _ = writeln!(out, "{n}\t{l}");
            }
        }
        let mut keys: Vec<&(usize, usize)> = self.action.keys().collect();
        keys.sort_by_key(|&&(k, n)| (n, k));
        for &(k, n) in keys {
            let m = &self.action[&(k, n)];
            let t = self.target(k, n);
            for (j, l) in self.labels(n).iter().enumerate() {
                let terms: Vec<String> = (0..m.rows())
                    .filter(|&i| m.get(i, j) != 0)
                    .map(|i| {
                        let c = m.get(i, j);
                        let lab = &self.labels(t)[i];
                        if c == 1 {
                            lab.clone()
                        } else {
                            format!("{c}*{lab}")
                        }
                    })
                    .collect();
                if !terms.is_empty() {
                    let _ = writeln!(out, "P{k} {l} -> {}", terms.join(" + "));
                }
            }
        }
        out
    }
}

/// Enumerate words of length `d` over letters `(exp, color)` with total degree
/// at most `trunc`, grouped by degree, each group in lexicographic order.
fn enumerate_words(p: Prime, d: usize, colors: usize, trunc: usize) -> BTreeMap<usize, Vec<TensorWord>> {
    let mut letters = Vec::new();
    let mut e = 0u8;
    while p.power(e as u32) <= trunc {
        for c in 0..colors {
            letters.push(Letter::new(e, c as u8));
        }
        e += 1;
    }
    let mut out: BTreeMap<usize, Vec<TensorWord>> = BTreeMap::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(
        p: Prime,
        d: usize,
        trunc: usize,
        letters: &[Letter],
        cur: &mut Vec<Letter>,
        deg: usize,
        out: &mut BTreeMap<usize, Vec<TensorWord>>,
    ) {
        if cur.len() == d {
            out.entry(deg).or_default().push(TensorWord(cur.clone()));
            return;
        }
        for &l in letters {
            let nd = deg + p.power(l.exp as u32);
            // Later letters have larger exponents, but colours interleave; keep scanning.
            if nd + (d - cur.len() - 1) > trunc {
                continue;
            }
            cur.push(l);
            rec(p, d, trunc, letters, cur, nd, out);
            cur.pop();
        }
    }
    rec(p, d, trunc, &letters, &mut cur, 0, &mut out);
    for v in out.values_mut() {
        v.sort();
    }
    out
}

/// `F(1)^{⊗d} ⊗ (V^♯)^{⊗d}` with `dim V = colors` and trivial action on the
/// parameter factors. `P^k` acts on a word by the iterated Cartan formula:
/// a sum over the sets of factors `u^{p^e} ↦ u^{p^{e+1}}` whose `p^e` add to `k`.
pub fn tensor_power(p: Prime, d: usize, colors: usize, trunc: usize) -> Result<TruncatedModule> {
    if colors == 0 || colors > 255 {
        return Err(Error::Precondition("parameter dimension must be in 1..=255".into()));
    }
    let words = enumerate_words(p, d, colors, trunc);
    let mut index = HashMap::new();
    let mut space = GradedSpace::new();
    for (&n, ws) in &words {
        for (i, w) in ws.iter().enumerate() {
            index.insert(w.clone(), (n, i));
        }
        for l in word_label_list(ws, p, colors > 1) {
            space.push(n, l);
        }
    }
    let q = p.value() as usize;
    let mut entries: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for (&n, ws) in &words {
        for (col, w) in ws.iter().enumerate() {
            let pw = w.powers(p);
            for mask in 1u32..(1 << d) {
                let k: usize = (0..d).filter(|j| mask & (1 << j) != 0).map(|j| pw[j]).sum();
                let t = n + k * (q - 1);
                if t > trunc {
                    continue;
                }
                if k > n {
                    return Err(Error::Invariance(format!("instability fails for P{k} on degree {n}")));
                }
                let mut nw = w.clone();
                for j in 0..d {
                    if mask & (1 << j) != 0 {
                        nw.0[j].exp += 1;
                    }
                }
                let (_, row) = index[&nw];
                entries.entry((k, n)).or_default().push((row, col));
            }
        }
    }
    let mut action = HashMap::new();
    for ((k, n), es) in entries {
        let t = n + k * (q - 1);
        let mut m = FpMatrix::zeros(p, space.dim(t), space.dim(n));
        for (r, c) in es {
            m.add_to(r, c, 1);
        }
        if !m.is_zero() {
            action.insert((k, n), m);
        }
    }
    let provenance = if d == 1 && colors == 1 { Provenance::Free(1) } else { Provenance::TensorPower { d, colors } };
    Ok(TruncatedModule {
        p,
        trunc,
        space,
        action,
        presentation: Presentation::Words { d, colors, words, index },
        provenance,
    })
}

/// `F(1)`: basis `u^{p^i}` with `P^{p^i} u^{p^i} = u^{p^{i+1}}` and all other
/// positive powers acting by zero.
pub fn build_f1(p: Prime, trunc: usize) -> Result<TruncatedModule> {
    if trunc < 1 {
        return Err(Error::Precondition("truncation degree must be >= 1".into()));
    }
    tensor_power(p, 1, 1, trunc)
}

type PairKey = ((usize, usize), (usize, usize));
type PairBasis = BTreeMap<usize, Vec<PairKey>>;

/// Basis of `M ⊗ N` in degrees `<= d`: per degree, the pairs
/// `((deg_a, idx_a), (deg_b, idx_b))` in the order used by [`tensor`].
fn pair_basis(m: &TruncatedModule, n: &TruncatedModule, d: usize) -> PairBasis {
    let mut pairs: PairBasis = BTreeMap::new();
    for a in m.degrees() {
        for b in n.degrees() {
            if a + b > d {
                continue;
            }
            for i in 0..m.dim(a) {
                for j in 0..n.dim(b) {
                    pairs.entry(a + b).or_default().push(((a, i), (b, j)));
                }
            }
        }
    }
    pairs
}

/// `x ⊗ y` as an element of `tensor(m, n, ..)` (which must be `prod`).
pub fn tensor_element(
    m: &TruncatedModule,
    n: &TruncatedModule,
    prod: &TruncatedModule,
    x: &Element,
    y: &Element,
) -> Result<Element> {
    let deg = x.degree + y.degree;
    if deg > prod.trunc {
        return Err(Error::TruncationOverflow { degree: deg, trunc: prod.trunc });
    }
    let pairs = pair_basis(m, n, prod.trunc);
    let list = pairs.get(&deg).map(Vec::as_slice).unwrap_or(&[]);
    let mut coords = vec![0; prod.dim(deg)];
    for (idx, &((a, i), (b, j))) in list.iter().enumerate() {
        if a == x.degree && b == y.degree {
            coords[idx] = m.p.mul(x.coords[i], y.coords[j]);
        }
    }
    Ok(Element { degree: deg, coords })
}

/// `M ⊗ N` with the Cartan formula, truncated at `min(D_M, D_N)` (or lower).
pub fn tensor(m: &TruncatedModule, n: &TruncatedModule, trunc: Option<usize>) -> Result<TruncatedModule> {
    if m.p != n.p {
        return Err(Error::ModulusMismatch(m.p.value(), n.p.value()));
    }
    let p = m.p;
    let q = p.value() as usize;
    let d = trunc.unwrap_or(usize::MAX).min(m.trunc).min(n.trunc);
    let pairs = pair_basis(m, n, d);
    let mut pos: HashMap<PairKey, usize> = HashMap::new();
    let mut space = GradedSpace::new();
    for (&deg, ps) in &pairs {
        for (idx, &(x, y)) in ps.iter().enumerate() {
            pos.insert((x, y), idx);
            space.push(deg, format!("[{}]x[{}]", m.labels(x.0)[x.1], n.labels(y.0)[y.1]));
        }
    }
    let mut action = HashMap::new();
    for (&deg, ps) in &pairs {
        let mut k = 1;
        while deg + k * (q - 1) <= d {
            let t = deg + k * (q - 1);
            let mut mat = FpMatrix::zeros(p, space.dim(t), space.dim(deg));
            for (col, &((a, i), (b, j))) in ps.iter().enumerate() {
                for ka in 0..=k.min(a) {
                    let kb = k - ka;
                    if kb > b {
                        continue;
                    }
                    let ta = a + ka * (q - 1);
                    let tb = b + kb * (q - 1);
                    let xa = m.act(ka, &Element::basis(m, a, i))?;
                    let yb = n.act(kb, &Element::basis(n, b, j))?;
                    for (ri, &ca) in xa.coords.iter().enumerate() {
                        if ca == 0 {
                            continue;
                        }
                        for (rj, &cb) in yb.coords.iter().enumerate() {
                            if cb == 0 {
                                continue;
                            }
                            let row = pos[&((ta, ri), (tb, rj))];
                            mat.add_to(row, col, p.mul(ca, cb));
                        }
                    }
                }
            }
            if k > deg && !mat.is_zero() {
                return Err(Error::Invariance(format!("instability fails for P{k} on degree {deg}")));
            }
            if k <= deg && !mat.is_zero() {
                action.insert((k, deg), mat);
            }
            k += 1;
        }
    }
    Ok(TruncatedModule {
        p,
        trunc: d,
        space,
        action,
        presentation: Presentation::Opaque,
        provenance: Provenance::Tensor(m.provenance.to_string(), n.provenance.to_string()),
    })
}

/// Closure of a set of elements under every `P^k`, within degrees `<= max_degree`.
#[derive(Clone, Debug)]
pub struct GradedSubspace {
    p: Prime,
    components: BTreeMap<usize, Echelon>,
}

impl GradedSubspace {
    pub fn dim(&self, degree: usize) -> usize {
        self.components.get(&degree).map_or(0, Echelon::rank)
    }

    pub fn contains(&self, x: &Element) -> bool {
        if x.is_zero() {
            return true;
        }
        self.components.get(&x.degree).is_some_and(|e| e.contains(&x.coords))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.components.iter().filter(|(_, e)| e.rank() > 0).map(|(&d, _)| d).collect()
    }

    pub fn component(&self, degree: usize) -> Option<&Echelon> {
        self.components.get(&degree)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }
}

/// The span `A·{gens}` inside `module`, up to `max_degree`.
pub fn submodule_span(module: &TruncatedModule, gens: &[Element], max_degree: usize) -> GradedSubspace {
    let p = module.p;
    let top = max_degree.min(module.trunc);
    let mut comps: BTreeMap<usize, Echelon> = BTreeMap::new();
    let mut work: Vec<Element> = gens.iter().filter(|g| g.degree <= top).cloned().collect();
    while let Some(v) = work.pop() {
        if v.is_zero() {
            continue;
        }
        let e = comps.entry(v.degree).or_insert_with(|| Echelon::new(p, module.dim(v.degree)));
        if !e.insert(&v.coords) {
            continue;
        }
        let mut k = 1;
        while k <= v.degree && module.target(k, v.degree) <= top {
            if let Ok(w) = module.act(k, &v) {
                if !w.is_zero() {
                    work.push(w);
                }
            }
            k += 1;
        }
    }
    GradedSubspace { p, components: comps }
}

/// Submodule with the given reduced bases; fails with [`Error::NotClosed`]
/// if the span is not stable under the action.
pub fn submodule_from_bases(
    ambient: Arc<TruncatedModule>,
    bases: BTreeMap<usize, ReducedBasis>,
    labels: BTreeMap<usize, Vec<String>>,
    name: &str,
) -> Result<TruncatedModule> {
    let p = ambient.p;
    let mut space = GradedSpace::new();
    for (&n, b) in &bases {
        let ls = labels.get(&n);
        for i in 0..b.vectors.len() {
            let l = ls.map(|v| v[i].clone()).unwrap_or_else(|| format!("e{n}_{i}"));
            space.push(n, l);
        }
    }
    let mut action = HashMap::new();
    for (&(k, n), m) in &ambient.action {
        let Some(src) = bases.get(&n) else { continue };
        if src.vectors.is_empty() {
            continue;
        }
        let t = ambient.target(k, n);
        let tgt = bases.get(&t);
        let mut mat = FpMatrix::zeros(p, tgt.map_or(0, |b| b.vectors.len()), src.vectors.len());
        for (col, v) in src.vectors.iter().enumerate() {
            let w = m.mul_vec(v);
            if w.iter().all(|&c| c == 0) {
                continue;
            }
            let coords = tgt.and_then(|b| b.coordinates(&w, p)).ok_or(Error::NotClosed { k, degree: n })?;
            for (r, c) in coords.into_iter().enumerate() {
                mat.set(r, col, c);
            }
        }
        if !mat.is_zero() {
            action.insert((k, n), mat);
        }
    }
    Ok(TruncatedModule {
        p,
        trunc: ambient.trunc,
        space,
        action,
        presentation: Presentation::Sub { ambient, bases },
        provenance: Provenance::Sub(name.to_string()),
    })
}

/// The submodule generated by `gens`.
pub fn submodule_generated(ambient: Arc<TruncatedModule>, gens: &[Element], name: &str) -> Result<TruncatedModule> {
    let span = submodule_span(&ambient, gens, ambient.trunc);
    let mut bases = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for (&n, e) in &span.components {
        if e.rank() == 0 {
            continue;
        }
        let b = ReducedBasis::from_echelon(e);
        let ls: Vec<String> = (0..b.vectors.len())
            .map(|i| vector_label(&ambient, n, &b.vectors[i]))
            .collect();
        bases.insert(n, b);
        labels.insert(n, ls);
    }
    submodule_from_bases(ambient, bases, labels, name)
}

fn vector_label(m: &TruncatedModule, n: usize, v: &[u32]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| if c == 1 { m.labels(n)[i].clone() } else { format!("{c}*{}", m.labels(n)[i]) })
        .collect();
    terms.join("+")
}

/// How an orbit quotient of a word module identifies words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitKind {
    /// Coinvariants of the symmetric group: `S^d`.
    Symmetric,
    /// Alternating quotient: words with a repeated letter die, and a
    /// permutation acts by its sign: `Λ^d`.
    Exterior,
}

fn sort_with_sign(letters: &[Letter]) -> (Vec<Letter>, bool) {
    let mut v = letters.to_vec();
    let mut odd = false;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    (v, odd)
}

/// Quotient of a word module by the full symmetric group acting on factors.
pub fn orbit_quotient(ambient: Arc<TruncatedModule>, kind: OrbitKind) -> Result<TruncatedModule> {
    let p = ambient.p;
    let (words, colors) = match &ambient.presentation {
        Presentation::Words { words, colors, .. } => (words.clone(), *colors),
        _ => return Err(Error::Precondition("orbit quotients need a tensor-word module".into())),
    };
    let mut project = BTreeMap::new();
    let mut section = BTreeMap::new();
    let mut space = GradedSpace::new();
    for (&n, ws) in &words {
        let mut keys: Vec<Vec<Letter>> = Vec::new();
        let mut key_pos: HashMap<Vec<Letter>, usize> = HashMap::new();
        let mut images = Vec::with_capacity(ws.len());
        for w in ws {
            let (sorted, odd) = sort_with_sign(&w.0);
            let repeated = sorted.windows(2).any(|x| x[0] == x[1]);
            if kind == OrbitKind::Exterior && repeated {
                images.push(None);
                continue;
            }
            let c = if kind == OrbitKind::Exterior && odd { p.neg(1) } else { 1 };
            let idx = *key_pos.entry(sorted.clone()).or_insert_with(|| {
                keys.push(sorted.clone());
                keys.len() - 1
            });
            images.push(Some((idx, c)));
        }
        if keys.is_empty() {
            continue;
        }
        // order classes by their canonical word
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let mut rank = vec![0; keys.len()];
        for (r, &k) in order.iter().enumerate() {
            rank[k] = r;
        }
        let mut proj = FpMatrix::zeros(p, keys.len(), ws.len());
        for (col, img) in images.iter().enumerate() {
            if let Some((idx, c)) = img {
                proj.set(rank[*idx], col, *c);
            }
        }
        let mut sec = vec![vec![0; ws.len()]; keys.len()];
        let index = match &ambient.presentation {
            Presentation::Words { index, .. } => index,
            _ => unreachable!(),
        };
        for &k in &order {
            let w = TensorWord(keys[k].clone());
            let (_, i) = index[&w];
            sec[rank[k]][i] = 1;
            space.push(n, w.label(p, colors > 1, "."));
        }
        project.insert(n, proj);
        section.insert(n, sec);
    }
    let name = match kind {
        OrbitKind::Symmetric => "symmetric coinvariants",
        OrbitKind::Exterior => "exterior quotient",
    };
    quotient_from_maps(ambient, project, section, space, name)
}

/// Quotient of `module` by the submodule generated by `gens`; the quotient
/// basis is the set of ambient basis vectors outside the echelon pivots.
pub fn quotient_by_submodule(module: Arc<TruncatedModule>, gens: &[Element], name: &str) -> Result<TruncatedModule> {
    let p = module.p;
    let span = submodule_span(&module, gens, module.trunc);
    let mut project = BTreeMap::new();
    let mut section = BTreeMap::new();
    let mut space = GradedSpace::new();
    for n in module.degrees() {
        let dim = module.dim(n);
        let empty = Echelon::new(p, dim);
        let e = span.components.get(&n).unwrap_or(&empty);
        let free: Vec<usize> = (0..dim).filter(|c| !e.pivot_columns().contains(c)).collect();
        if free.is_empty() {
            continue;
        }
        let mut proj = FpMatrix::zeros(p, free.len(), dim);
        for j in 0..dim {
            let mut v = vec![0; dim];
            v[j] = 1;
            e.reduce(&mut v);
            for (r, &f) in free.iter().enumerate() {
                proj.set(r, j, v[f]);
            }
        }
        let sec: Vec<Vec<u32>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![0; dim];
                v[f] = 1;
                v
            })
            .collect();
        for &f in &free {
            space.push(n, module.labels(n)[f].clone());
        }
        project.insert(n, proj);
        section.insert(n, sec);
    }
    quotient_from_maps(module, project, section, space, name)
}

fn quotient_from_maps(
    ambient: Arc<TruncatedModule>,
    project: BTreeMap<usize, FpMatrix>,
    section: BTreeMap<usize, Vec<Vec<u32>>>,
    space: GradedSpace,
    name: &str,
) -> Result<TruncatedModule> {
    let p = ambient.p;
    let mut action = HashMap::new();
    for (&(k, n), m) in &ambient.action {
        let t = ambient.target(k, n);
        // Kernel of the projection must be carried into the kernel.
        let (Some(pn), Some(sn)) = (project.get(&n), section.get(&n)) else {
            // Whole degree is killed; its image must die too.
            if let Some(pt) = project.get(&t) {
                for j in 0..m.cols() {
                    let img = pt.mul_vec(&m.column(j));
                    if img.iter().any(|&c| c != 0) {
                        return Err(Error::NotClosed { k, degree: n });
                    }
                }
            }
            continue;
        };
        let Some(pt) = project.get(&t) else { continue };
        let dim = m.cols();
        for j in 0..dim {
            let mut e = vec![0; dim];
            e[j] = 1;
            // e - section(project(e)) lies in the kernel
            let q = pn.mul_vec(&e);
            let mut lifted = vec![0; dim];
            for (c, col) in q.iter().zip(sn) {
                axpy(p, &mut lifted, *c, col);
            }
            let diff: Vec<u32> = e.iter().zip(&lifted).map(|(&a, &b)| p.sub(a, b)).collect();
            if pt.mul_vec(&m.mul_vec(&diff)).iter().any(|&c| c != 0) {
                return Err(Error::NotClosed { k, degree: n });
            }
        }
        let mut mat = FpMatrix::zeros(p, pt.rows(), sn.len());
        for (col, s) in sn.iter().enumerate() {
            let img = pt.mul_vec(&m.mul_vec(s));
            for (r, c) in img.into_iter().enumerate() {
                mat.set(r, col, c);
            }
        }
        if !mat.is_zero() {
            action.insert((k, n), mat);
        }
    }
    Ok(TruncatedModule {
        p,
        trunc: ambient.trunc,
        space,
        action,
        presentation: Presentation::Quotient { ambient, project, section },
        provenance: Provenance::Quotient(name.to_string()),
    })
}

/// Invariants of a word module under permutations inside consecutive blocks of
/// factors (a Young subgroup), with orbit sums as basis.
pub fn young_invariants(ambient: Arc<TruncatedModule>, blocks: &[usize], name: &str) -> Result<TruncatedModule> {
    let p = ambient.p;
    let (words, d, colors) = match &ambient.presentation {
        Presentation::Words { words, d, colors, .. } => (words, *d, *colors),
        _ => return Err(Error::Precondition("Young invariants need a tensor-word module".into())),
    };
    if blocks.iter().sum::<usize>() != d || blocks.contains(&0) {
        return Err(Error::Precondition(format!("blocks {blocks:?} do not partition {d} factors")));
    }
    let canon = |w: &TensorWord| -> TensorWord {
        let mut out = Vec::with_capacity(d);
        let mut start = 0;
        for &b in blocks {
            let mut part = w.0[start..start + b].to_vec();
            part.sort();
            out.extend(part);
            start += b;
        }
        TensorWord(out)
    };
    let mut bases = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for (&n, ws) in words {
        let mut groups: BTreeMap<TensorWord, Vec<usize>> = BTreeMap::new();
        for (i, w) in ws.iter().enumerate() {
            groups.entry(canon(w)).or_default().push(i);
        }
        let mut b = ReducedBasis::default();
        let mut ls = Vec::new();
        for (c, members) in groups {
            let mut v = vec![0; ws.len()];
            for &i in &members {
                v[i] = 1;
            }
            let pivot = ws.iter().position(|w| *w == c).expect("canonical word present");
            b.vectors.push(v);
            b.pivots.push(pivot);
            ls.push(young_label(&c, blocks, p, colors > 1));
        }
        bases.insert(n, b);
        labels.insert(n, ls);
    }
    submodule_from_bases(ambient, bases, labels, name)
}

fn young_label(w: &TensorWord, blocks: &[usize], p: Prime, colored: bool) -> String {
    let mut parts = Vec::new();
    let mut start = 0;
    for &b in blocks {
        parts.push(TensorWord(w.0[start..start + b].to_vec()).label(p, colored, "."));
        start += b;
    }
    format!("[{}]", parts.join("|"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steenrod::SteenrodAlgebra;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn word_elem(m: &TruncatedModule, exps: &[u8]) -> Element {
        let (deg, idx) = m.word_index(&TensorWord::plain(exps)).unwrap();
        Element::basis(m, deg, idx)
    }

    #[test]
    fn f1_action_table() {
        let f1 = build_f1(p(2), 8).unwrap();
        assert_eq!(f1.degrees(), vec![1, 2, 4, 8]);
        let u = word_elem(&f1, &[0]);
        assert_eq!(f1.act(1, &u).unwrap(), word_elem(&f1, &[1]));
        let u2 = word_elem(&f1, &[1]);
        assert!(f1.act(1, &u2).unwrap().is_zero());
        assert_eq!(f1.act(2, &u2).unwrap(), word_elem(&f1, &[2]));

        let f1 = build_f1(p(3), 9).unwrap();
        let u3 = word_elem(&f1, &[1]);
        assert_eq!(f1.act(3, &u3).unwrap(), word_elem(&f1, &[2]));
        assert!(f1.act(1, &u3).unwrap().is_zero());
        assert!(build_f1(p(2), 0).is_err());
    }

    #[test]
    fn cartan_on_u_tensor_u() {
        let t = tensor_power(p(2), 2, 1, 16).unwrap();
        let uu = word_elem(&t, &[0, 0]);
        assert_eq!(t.act(2, &uu).unwrap(), word_elem(&t, &[1, 1]));
        let s1 = t.act(1, &uu).unwrap();
        let expect = word_elem(&t, &[1, 0]).add(&word_elem(&t, &[0, 1]), p(2)).unwrap();
        assert_eq!(s1, expect);
        assert!(t.act(3, &uu).unwrap().is_zero());
    }

    #[test]
    fn generic_tensor_matches_word_power() {
        let pr = p(2);
        let f1 = build_f1(pr, 24).unwrap();
        let t = tensor(&f1, &f1, None).unwrap();
        let w = tensor_power(pr, 2, 1, 24).unwrap();
        for n in 0..=24 {
            assert_eq!(t.dim(n), w.dim(n), "degree {n}");
        }
        // pair basis ([u^a],[u^b]) corresponds to the word (a, b)
        for (&(k, n), m) in &t.action {
            let wm = w.action_matrix(k, n).unwrap();
            let perm = |deg: usize| -> Vec<usize> {
                t.labels(deg)
                    .iter()
                    .map(|l| {
                        let wl = l.replace("]x[", "|").replace(['[', ']'], "");
                        w.labels(deg).iter().position(|x| *x == wl).unwrap()
                    })
                    .collect()
            };
            let (ps, pt) = (perm(n), perm(n + k));
            for (i, &ti) in pt.iter().enumerate() {
                for (j, &sj) in ps.iter().enumerate() {
                    assert_eq!(m.get(i, j), wm.get(ti, sj));
                }
            }
        }
    }

    #[test]
    fn adem_compliance_of_tensor_powers() {
        let pr = p(2);
        let alg = SteenrodAlgebra::acting(pr);
        tensor_power(pr, 3, 1, 40).unwrap().verify_adem(&alg, 40).unwrap();
        tensor_power(pr, 2, 2, 32).unwrap().verify_adem(&alg, 32).unwrap();
        let p3 = p(3);
        tensor_power(p3, 2, 1, 81).unwrap().verify_adem(&SteenrodAlgebra::acting(p3), 81).unwrap();
    }

    #[test]
    fn printed_relation_fails_on_tensor_square_at_p3() {
        let p3 = p(3);
        let alg = SteenrodAlgebra::new(p3, crate::steenrod::AdemConvention::Printed);
        let t = tensor_power(p3, 2, 1, 27).unwrap();
        assert!(t.verify_adem(&alg, 27).is_err());
    }

    #[test]
    fn f2_closure_contains_degree_five_symmetric_element() {
        let pr = p(2);
        let amb = Arc::new(tensor_power(pr, 2, 1, 16).unwrap());
        let f2 = submodule_generated(amb.clone(), &[word_elem(&amb, &[0, 0])], "F(2)").unwrap();
        assert_eq!(f2.dim(5), 1);
        let x = Element::basis(&f2, 5, 0);
        let (_, v) = f2.to_words(&x).unwrap();
        let expect = word_elem(&amb, &[2, 0]).add(&word_elem(&amb, &[0, 2]), pr).unwrap();
        assert_eq!(v, expect.coords);
    }

    #[test]
    fn symmetric_cube_degree_three() {
        let pr = p(2);
        let amb = Arc::new(tensor_power(pr, 3, 1, 12).unwrap());
        let s3 = orbit_quotient(amb.clone(), OrbitKind::Symmetric).unwrap();
        assert_eq!(s3.dim(3), 1);
        assert_eq!(s3.labels(3), &["u^1.u^1.u^1".to_string()]);
        let l2 = orbit_quotient(Arc::new(tensor_power(pr, 2, 1, 12).unwrap()), OrbitKind::Exterior).unwrap();
        assert_eq!(l2.dim(2), 0);
        assert_eq!(l2.dim(3), 1);
    }

    #[test]
    fn quotient_by_submodule_of_f1() {
        let pr = p(2);
        let f1 = Arc::new(build_f1(pr, 16).unwrap());
        let q = quotient_by_submodule(f1.clone(), &[word_elem(&f1, &[1])], "F(1)/A u^2").unwrap();
        assert_eq!(q.degrees(), vec![1]);
        let u = Element::basis(&q, 1, 0);
        assert!(q.p0(&u).unwrap().is_zero());
    }

    #[test]
    fn non_closed_span_is_reported() {
        let pr = p(2);
        let amb = Arc::new(tensor_power(pr, 2, 1, 8).unwrap());
        let (n, i) = amb.word_index(&TensorWord::plain(&[0, 0])).unwrap();
        let mut bases = BTreeMap::new();
        let mut v = vec![0; amb.dim(n)];
        v[i] = 1;
        bases.insert(n, ReducedBasis { vectors: vec![v], pivots: vec![i] });
        let err = submodule_from_bases(amb, bases, BTreeMap::new(), "bad").unwrap_err();
        assert!(matches!(err, Error::NotClosed { .. }));
    }

    #[test]
    fn truncation_overflow() {
        let f1 = build_f1(p(2), 8).unwrap();
        let u8 = word_elem(&f1, &[3]);
        assert!(matches!(f1.p0(&u8), Err(Error::TruncationOverflow { .. })));
    }

    #[test]
    fn dump_format() {
        let f1 = build_f1(p(2), 4).unwrap();
        let d = f1.dump();
        assert!(d.starts_with("1\tu^1\n2\tu^2\n4\tu^4\n"));
        assert!(d.contains("P1 u^1 -> u^2"));
        assert!(d.contains("P2 u^2 -> u^4"));
    }
}
