use std::collections::BTreeMap;

use super::module::{Element, TruncatedModule};
use crate::error::{Error, Result};
use crate::fp::{axpy, Echelon, FpMatrix, Prime};

/// Degree-preserving linear map between truncated modules, given by one block
/// per degree (`dim N^n × dim M^n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub p: Prime,
    pub max_degree: usize,
    pub blocks: BTreeMap<usize, FpMatrix>,
}

impl ModuleMap {
    pub fn zero(m: &TruncatedModule, n: &TruncatedModule, max_degree: usize) -> Self {
        let mut blocks = BTreeMap::new();
        for d in 0..=max_degree {
            if m.dim(d) > 0 && n.dim(d) > 0 {
                blocks.insert(d, FpMatrix::zeros(m.prime(), n.dim(d), m.dim(d)));
            }
        }
        ModuleMap { p: m.prime(), max_degree, blocks }
    }

    pub fn apply(&self, x: &Element, target_dim: usize) -> Element {
        match self.blocks.get(&x.degree) {
            Some(b) => Element { degree: x.degree, coords: b.mul_vec(&x.coords) },
            None => Element { degree: x.degree, coords: vec![0; target_dim] },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(FpMatrix::is_zero)
    }

    /// Flattened entries in degree order, used for independence tests.
    pub fn flatten(&self) -> Vec<u32> {
        self.blocks.values().flat_map(|b| b.data().iter().copied()).collect()
    }

    /// Check `φ(P^k x) = P^k φ(x)` whenever both sides live in degrees `<= max_degree`.
    pub fn verify_linear(&self, m: &TruncatedModule, n: &TruncatedModule) -> Result<()> {
        let q = self.p.value() as usize;
        for d in m.degrees() {
            for k in 1..=d {
                let t = d + k * (q - 1);
                if t > self.max_degree {
                    break;
                }
                let pm = m.action_matrix(k, d)?;
                let pn = n.action_matrix(k, d)?;
                let src = self.block(d, m, n);
                let tgt = self.block(t, m, n);
                if tgt.mul(&pm) != pn.mul(&src) {
                    return Err(Error::NotLinear { k, degree: d });
                }
            }
        }
        Ok(())
    }

    fn block(&self, d: usize, m: &TruncatedModule, n: &TruncatedModule) -> FpMatrix {
        self.blocks.get(&d).cloned().unwrap_or_else(|| FpMatrix::zeros(self.p, n.dim(d), m.dim(d)))
    }
}

/// Which operations are imposed as constraints.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConstraintOps {
    /// Every `P^k`.
    #[default]
    All,
    /// Only `P^{p^i}`; enough in the limit since they generate, but weaker at
    /// finite truncation.
    PowersOfP,
}

/// Solution of `hom_U(M, N)` with unknowns in degrees `<= dc`.
#[derive(Clone, Debug)]
pub struct UnstableHomSpace {
    pub dc: usize,
    pub basis: Vec<ModuleMap>,
    /// `(t, dim)` after imposing every constraint with target degree `<= t`.
    pub ladder: Vec<(usize, usize)>,
}

impl UnstableHomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension after constraints up to degree `t`.
    pub fn dim_at(&self, t: usize) -> usize {
        self.ladder.iter().take_while(|(d, _)| *d <= t).last().map_or(0, |&(_, n)| n)
    }
}

fn op_allowed(k: usize, p: Prime, ops: ConstraintOps) -> bool {
    match ops {
        ConstraintOps::All => true,
        ConstraintOps::PowersOfP => p.log(k).is_some(),
    }
}

/// Degree-by-degree solver.
///
/// Maintains a parametrisation of the solutions in degrees `< t`; at degree `t`
/// the new unknowns are the entries of the degree-`t` block, and each
/// constraint `φ_t(P^k x) - P^k φ_n(x) = 0` is a row in (old parameters, new
/// entries). The kernel of these rows is the new parametrisation.
pub fn hom_u_with(m: &TruncatedModule, n: &TruncatedModule, dc: usize, ops: ConstraintOps) -> Result<UnstableHomSpace> {
    if m.prime() != n.prime() {
        return Err(Error::ModulusMismatch(m.prime().value(), n.prime().value()));
    }
    let p = m.prime();
    let q = p.value() as usize;
    let top = m.trunc().min(n.trunc());
    if dc > top {
        return Err(Error::TruncationOverflow { degree: dc, trunc: top });
    }
    // offsets of each degree's entries inside a parameter vector
    let mut offset: BTreeMap<usize, usize> = BTreeMap::new();
    let mut total = 0usize;
    // params[j] = full entry vector (length `total`) of the j-th solution
    let mut params: Vec<Vec<u32>> = Vec::new();
    let mut ladder = Vec::new();
    for t in 0..=dc {
        let (mt, nt) = (m.dim(t), n.dim(t));
        let et = mt * nt;
        let r = params.len();
        let mut ech = Echelon::new(p, r + et);
        for src in m.degrees() {
            if src >= t || (t - src) % (q - 1) != 0 {
                continue;
            }
            let k = (t - src) / (q - 1);
            if k == 0 || k > src || !op_allowed(k, p, ops) {
                continue;
            }
            let ms = m.dim(src);
            let ns = n.dim(src);
            let pm = m.action_entry(k, src);
            let pn = n.action_entry(k, src);
            if pm.is_none() && pn.is_none() {
                continue;
            }
            let off_s = offset.get(&src).copied();
            for a in 0..ms {
                for row_t in 0..nt {
                    let mut row = vec![0u32; r + et];
                    // φ_t(P^k e_a)[row_t]
                    if let Some(pm) = pm {
                        for b in 0..mt {
                            let c = pm.get(b, a);
                            if c != 0 {
                                row[r + row_t * mt + b] = p.add(row[r + row_t * mt + b], c);
                            }
                        }
                    }
                    // - (P^k φ_src(e_a))[row_t]
                    if let (Some(pn), Some(off)) = (pn, off_s) {
                        for c_idx in 0..ns {
                            let c = pn.get(row_t, c_idx);
                            if c == 0 {
                                continue;
                            }
                            let entry = off + c_idx * ms + a;
                            let neg = p.neg(c);
                            for (j, pv) in params.iter().enumerate() {
                                let v = pv[entry];
                                if v != 0 {
                                    row[j] = p.add(row[j], p.mul(neg, v));
                                }
                            }
                        }
                    }
                    if row.iter().any(|&x| x != 0) {
                        ech.insert(&row);
                    }
                }
            }
        }
        if et > 0 {
            offset.insert(t, total);
        }
        let new_total = total + et;
        if ech.rank() == 0 {
            for pv in &mut params {
                pv.resize(new_total, 0);
            }
            for e in 0..et {
                let mut v = vec![0; new_total];
                v[total + e] = 1;
                params.push(v);
            }
        } else {
            let kernel = ech.kernel();
            let mut next = Vec::with_capacity(kernel.len());
            for kv in kernel {
                let mut v = vec![0; new_total];
                for (j, &c) in kv[..r].iter().enumerate() {
                    if c != 0 {
                        axpy(p, &mut v[..total], c, &params[j]);
                    }
                }
                v[total..].copy_from_slice(&kv[r..]);
                next.push(v);
            }
            params = next;
        }
        total = new_total;
        ladder.push((t, params.len()));
    }
    let basis = params
        .into_iter()
        .map(|v| {
            let mut blocks = BTreeMap::new();
            for (&d, &off) in &offset {
                let (md, nd) = (m.dim(d), n.dim(d));
                blocks.insert(d, FpMatrix::from_rows(p, nd, md, v[off..off + md * nd].to_vec()).expect("block shape"));
            }
            ModuleMap { p, max_degree: dc, blocks }
        })
        .collect();
    Ok(UnstableHomSpace { dc, basis, ladder })
}

pub fn hom_u(m: &TruncatedModule, n: &TruncatedModule, dc: usize) -> Result<UnstableHomSpace> {
    hom_u_with(m, n, dc, ConstraintOps::All)
}
