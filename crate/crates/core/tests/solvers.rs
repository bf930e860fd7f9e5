//! Cross-checks of the Hom solvers against independent routes.

use std::sync::Arc;

use steenrod_poly::fp::{nullspace, Echelon, FpMatrix};
use steenrod_poly::hai_bridge::{bar_m, free_module, transport};
use steenrod_poly::strictpoly::{evaluate, hom_p, predicted_dim, FunctorSpec};
use steenrod_poly::unstable::{
    build_f1, hom_u, hom_u_with, tensor, tensor_power, young_invariants, ConstraintOps, TruncatedModule,
};
use steenrod_poly::Prime;

fn pr(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

/// Single nullspace over all block entries and all constraints `φ P^k = P^k φ`.
fn monolithic_dim(m: &TruncatedModule, n: &TruncatedModule, dc: usize) -> usize {
    let p = m.prime();
    let q = p.value() as usize - 1;
    let mut offsets = std::collections::BTreeMap::new();
    let mut total = 0;
    for d in 0..=dc {
        offsets.insert(d, total);
        total += m.dim(d) * n.dim(d);
    }
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for d in 0..=dc {
        if m.dim(d) == 0 {
            continue;
        }
        for k in 1..=d {
            let t = d + k * q;
            if t > dc {
                break;
            }
            let pm = m.action_matrix(k, d).unwrap();
            let pn = n.action_matrix(k, d).unwrap();
            // (B_t P_M)[a][b] - (P_N B_d)[a][b] = 0
            for a in 0..n.dim(t) {
                for b in 0..m.dim(d) {
                    let mut row = vec![0u32; total];
                    for c in 0..m.dim(t) {
                        let x = pm.get(c, b);
                        if x != 0 {
                            let idx = offsets[&t] + a * m.dim(t) + c;
                            row[idx] = p.add(row[idx], x);
                        }
                    }
                    for c in 0..n.dim(d) {
                        let x = pn.get(a, c);
                        if x != 0 {
                            let idx = offsets[&d] + c * m.dim(d) + b;
                            row[idx] = p.sub(row[idx], x);
                        }
                    }
                    if row.iter().any(|&v| v != 0) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    if rows.is_empty() {
        return total;
    }
    let data: Vec<u32> = rows.iter().flatten().copied().collect();
    nullspace(&FpMatrix::from_rows(p, rows.len(), total, data).unwrap()).len()
}

#[test]
fn incremental_solver_matches_monolithic() {
    let p2 = pr(2);
    let p3 = pr(3);
    let cases: Vec<(TruncatedModule, TruncatedModule, usize)> = vec![
        (build_f1(p2, 24).unwrap(), build_f1(p2, 24).unwrap(), 24),
        (tensor_power(p2, 2, 1, 24).unwrap(), build_f1(p2, 24).unwrap(), 24),
        (tensor_power(p2, 2, 1, 24).unwrap(), tensor_power(p2, 2, 1, 24).unwrap(), 24),
        (
            bar_m(&FunctorSpec::Gamma(vec![2, 1]), p2, 24).unwrap(),
            bar_m(&FunctorSpec::SymParam { d: 3, m: 1 }, p2, 24).unwrap(),
            24,
        ),
        (
            bar_m(&FunctorSpec::Gamma(vec![1, 1]), p2, 20).unwrap(),
            bar_m(&FunctorSpec::SymParam { d: 2, m: 2 }, p2, 20).unwrap(),
            20,
        ),
        (
            bar_m(&FunctorSpec::Gamma(vec![1, 1]), p3, 27).unwrap(),
            bar_m(&FunctorSpec::Exterior(2), p3, 27).unwrap(),
            27,
        ),
        (free_module(2, p3, 27).unwrap(), tensor_power(p3, 2, 1, 27).unwrap(), 27),
    ];
    for (m, n, dc) in &cases {
        let inc = hom_u(m, n, *dc).unwrap();
        assert_eq!(inc.dim(), monolithic_dim(m, n, *dc), "{} -> {}", m.provenance(), n.provenance());
        for phi in &inc.basis {
            phi.verify_linear(m, n).unwrap();
        }
        assert!(hom_u_with(m, n, *dc, ConstraintOps::PowersOfP).unwrap().dim() >= inc.dim());
    }
}

#[test]
fn ladder_rungs_match_separate_solves() {
    let p = pr(2);
    let f = FunctorSpec::Gamma(vec![1, 1]);
    let g = FunctorSpec::SymParam { d: 2, m: 1 };
    let m = bar_m(&f, p, 32).unwrap();
    let n = bar_m(&g, p, 32).unwrap();
    let h = hom_u(&m, &n, 32).unwrap();
    for t in [4, 8, 16, 32] {
        let mt = bar_m(&f, p, t).unwrap();
        let nt = bar_m(&g, p, t).unwrap();
        assert_eq!(h.dim_at(t), hom_u(&mt, &nt, t).unwrap().dim(), "t = {t}");
    }
}

#[test]
fn free_module_represents_degree_n() {
    // Hom_U(F(n), M) ≅ M^n
    for p in [pr(2), pr(3)] {
        let d = 4 * p.value() as usize * p.value() as usize;
        let f2 = free_module(2, p, d).unwrap();
        for target in [
            tensor_power(p, 2, 1, d).unwrap(),
            bar_m(&FunctorSpec::Gamma(vec![2]), p, d).unwrap(),
            bar_m(&FunctorSpec::SymParam { d: 2, m: 2 }, p, d).unwrap(),
            build_f1(p, d).unwrap(),
        ] {
            assert_eq!(hom_u(&f2, &target, d).unwrap().dim(), target.dim(2), "{}", target.provenance());
        }
    }
}

#[test]
fn evaluation_dimension_is_stable() {
    let p = pr(2);
    let pairs = [
        (FunctorSpec::Gamma(vec![1, 1]), FunctorSpec::Exterior(2)),
        (FunctorSpec::Gamma(vec![2]), FunctorSpec::TensorPower(2)),
        (FunctorSpec::Gamma(vec![2, 1]), FunctorSpec::SymParam { d: 3, m: 1 }),
        (FunctorSpec::TensorPower(2), FunctorSpec::TensorPower(2)),
    ];
    for (f, g) in pairs {
        let d = f.degree();
        assert_eq!(hom_p(&f, &g, d, p).unwrap().dim(), hom_p(&f, &g, d + 1, p).unwrap().dim(), "{f} -> {g}");
    }
    // End(⊗^2) is the group algebra of S_2.
    assert_eq!(hom_p(&FunctorSpec::TensorPower(2), &FunctorSpec::TensorPower(2), 2, p).unwrap().dim(), 2);
}

#[test]
fn yoneda_for_divided_powers() {
    for p in [pr(2), pr(3)] {
        for (lambda, m) in [(vec![2], 2), (vec![1, 2], 1), (vec![1, 1], 2), (vec![3], 1)] {
            let f = FunctorSpec::Gamma(lambda.clone());
            let g = FunctorSpec::SymParam { d: f.degree(), m };
            assert_eq!(hom_p(&f, &g, f.degree(), p).unwrap().dim(), predicted_dim(&lambda, m));
        }
    }
}

#[test]
fn evaluation_is_monoidal_on_dimensions() {
    let p = pr(2);
    let d = 40;
    let f1 = build_f1(p, d).unwrap();
    let g2 = bar_m(&FunctorSpec::Gamma(vec![2]), p, d).unwrap();
    let g21 = bar_m(&FunctorSpec::Gamma(vec![2, 1]), p, d).unwrap();
    let prod = tensor(&g2, &f1, Some(d)).unwrap();
    let t2 = bar_m(&FunctorSpec::TensorPower(2), p, d).unwrap();
    let sq = tensor(&f1, &f1, Some(d)).unwrap();
    for k in 0..=d {
        assert_eq!(g21.dim(k), prod.dim(k), "degree {k}");
        assert_eq!(t2.dim(k), sq.dim(k), "degree {k}");
    }
}

#[test]
fn free_modules_are_symmetric_invariants() {
    let p = pr(2);
    for n in 2..=3 {
        let f = free_module(n, p, 40).unwrap();
        let inv = young_invariants(Arc::new(tensor_power(p, n, 1, 40).unwrap()), &[n], "inv").unwrap();
        for k in 0..=40 {
            assert_eq!(f.dim(k), inv.dim(k));
        }
    }
}

#[test]
fn transport_of_poly_basis_is_linear_and_injective() {
    let p = pr(2);
    for (lambda, m) in [(vec![1, 1], 2), (vec![2, 1], 2), (vec![1, 1, 1], 1)] {
        let f = FunctorSpec::Gamma(lambda.clone());
        let d = f.degree();
        let g = FunctorSpec::SymParam { d, m };
        let h = hom_p(&f, &g, d, p).unwrap();
        let (ef, eg) = (evaluate(&f, d, p).unwrap(), evaluate(&g, d, p).unwrap());
        let (mf, mg) = (bar_m(&f, p, 24).unwrap(), bar_m(&g, p, 24).unwrap());
        let mut ech = Echelon::new(p, 0);
        for (i, eta) in h.basis.iter().enumerate() {
            let t = transport(eta, &ef, &eg, &mf, &mg).unwrap();
            t.verify_linear(&mf, &mg).unwrap();
            let v = t.flatten();
            if i == 0 {
                ech = Echelon::new(p, v.len());
            }
            assert!(ech.insert(&v), "λ = {lambda:?}, m = {m}");
        }
    }
}
