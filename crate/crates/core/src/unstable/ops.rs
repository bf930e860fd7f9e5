use serde::Serialize;

use super::module::{submodule_span, Element, TruncatedModule};
use crate::error::{Error, Result};
use crate::fp::{rank, solve, FpMatrix};

/// Whether `P_0` is injective on every degree `n` with `p n <= D`, together with
/// the largest such degree (the range that could actually be tested).
pub fn p0_injective_range(module: &TruncatedModule) -> (bool, usize) {
    let q = module.prime().value() as usize;
    let top = module.trunc() / q;
    for n in module.degrees() {
        if n > top {
            break;
        }
        let m = match module.action_matrix(n, n) {
            Ok(m) => m,
            Err(_) => break,
        };
        if rank(&m) < module.dim(n) {
            return (false, top);
        }
    }
    (true, top)
}

/// Find `y` with `P_0^iterations(y) = x`.
///
/// Fails with [`Error::NotReduced`] if `P_0` is not injective somewhere in the
/// chain (the preimage would not be unique) and [`Error::NotInImage`] if none
/// exists.
pub fn sqrt_extract(module: &TruncatedModule, x: &Element, iterations: usize) -> Result<Element> {
    let q = module.prime().value() as usize;
    let mut cur = x.clone();
    for _ in 0..iterations {
        if !cur.degree.is_multiple_of(q) {
            return Err(Error::NotInImage { iterations });
        }
        let n = cur.degree / q;
        let m: FpMatrix = module.action_matrix(n, n)?;
        if rank(&m) < module.dim(n) {
            return Err(Error::NotReduced { degree: n });
        }
        match solve(&m, &cur.coords)? {
            Some(y) => cur = Element { degree: n, coords: y },
            None => return Err(Error::NotInImage { iterations }),
        }
    }
    Ok(cur)
}

/// Outcome of the mod-nilpotent generation test for a single element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ModnilOutcome {
    /// Least `j` with `P_0^j x` in the span of the generators.
    Found { j: usize },
    /// No witness before `P_0^j x` leaves the truncation range.
    Inconclusive { tested_up_to: usize },
}

/// For each `x`, look for the least `j` with `P_0^j x ∈ A·gens`, testing only
/// while `p^j |x| <= D`.
pub fn modnil_generator_check(
    module: &TruncatedModule,
    gens: &[Element],
    xs: &[Element],
) -> Vec<ModnilOutcome> {
    let span = submodule_span(module, gens, module.trunc());
    xs.iter()
        .map(|x| {
            let mut cur = x.clone();
            let mut j = 0;
            loop {
                if span.contains(&cur) {
                    return ModnilOutcome::Found { j };
                }
                match module.p0(&cur) {
                    Ok(next) => {
                        cur = next;
                        j += 1;
                    }
                    Err(_) => return ModnilOutcome::Inconclusive { tested_up_to: j },
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::Prime;
    use crate::unstable::module::{build_f1, tensor_power, TensorWord};

    fn word(m: &TruncatedModule, exps: &[u8]) -> Element {
        let (d, i) = m.word_index(&TensorWord::plain(exps)).unwrap();
        Element::basis(m, d, i)
    }

    #[test]
    fn f1_is_reduced() {
        let f1 = build_f1(Prime::new(2).unwrap(), 64).unwrap();
        assert_eq!(p0_injective_range(&f1), (true, 32));
        let f1 = build_f1(Prime::new(3).unwrap(), 81).unwrap();
        assert_eq!(p0_injective_range(&f1), (true, 27));
    }

    #[test]
    fn sqrt_on_tensor_square() {
        let t = tensor_power(Prime::new(2).unwrap(), 2, 1, 32).unwrap();
        let y = sqrt_extract(&t, &word(&t, &[2, 3]), 2).unwrap();
        assert_eq!(y, word(&t, &[0, 1]));
        assert!(matches!(sqrt_extract(&t, &word(&t, &[0, 1]), 1), Err(Error::NotInImage { .. })));
        assert_eq!(sqrt_extract(&t, &word(&t, &[1, 2]), 1).unwrap(), word(&t, &[0, 1]));
        assert!(matches!(sqrt_extract(&t, &word(&t, &[0, 0]), 1), Err(Error::NotInImage { .. })));
    }

    #[test]
    fn modnil_on_f1() {
        let f1 = build_f1(Prime::new(2).unwrap(), 64).unwrap();
        let u = word(&f1, &[0]);
        let u4 = word(&f1, &[2]);
        let res = modnil_generator_check(&f1, std::slice::from_ref(&u4), &[u.clone(), u4.clone()]);
        assert_eq!(res, vec![ModnilOutcome::Found { j: 2 }, ModnilOutcome::Found { j: 0 }]);
        let res = modnil_generator_check(&f1, &[], &[u]);
        assert_eq!(res, vec![ModnilOutcome::Inconclusive { tested_up_to: 6 }]);
    }
}
