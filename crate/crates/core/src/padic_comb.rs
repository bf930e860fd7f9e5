//! Partitions of sums of prime powers according to base-p digits.
//!
//! Power lists are given by their exponents in ascending order, and index
//! sets refer to positions in that list (0-based).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::Prime;

/// Base-p digits `(coefficient, exponent)` of `n`, zero digits omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PAdicDecomposition {
    pub n: u64,
    pub digits: Vec<(u64, u32)>,
}

impl PAdicDecomposition {
    /// Number of nonzero digits.
    pub fn length(&self) -> usize {
        self.digits.len()
    }

    /// Exponents carrying a nonzero digit.
    pub fn support(&self) -> Vec<u32> {
        self.digits.iter().map(|&(_, e)| e).collect()
    }
}

pub fn p_adic(n: u64, p: Prime) -> PAdicDecomposition {
    let q = p.value() as u64;
    let mut digits = Vec::new();
    let mut x = n;
    let mut e = 0;
    while x > 0 {
        let c = x % q;
        if c != 0 {
            digits.push((c, e));
        }
        x /= q;
        e += 1;
    }
    PAdicDecomposition { n, digits }
}

fn pow(p: Prime, e: u32) -> u64 {
    (p.value() as u64).pow(e)
}

fn power_sum(powers: &[u32], p: Prime) -> u64 {
    powers.iter().map(|&l| pow(p, l)).sum()
}

/// Blocks of indices, one per target.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IndexPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl IndexPartition {
    fn normalized(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        IndexPartition { blocks }
    }

    /// Every index appears exactly once and block `i` sums to `targets[i]`.
    pub fn is_valid(&self, powers: &[u32], targets: &[u64], p: Prime) -> bool {
        if self.blocks.len() != targets.len() {
            return false;
        }
        let mut seen = vec![false; powers.len()];
        for (b, &t) in self.blocks.iter().zip(targets) {
            let mut s = 0;
            for &i in b {
                if i >= powers.len() || seen[i] {
                    return false;
                }
                seen[i] = true;
                s += pow(p, powers[i]);
            }
            if s != t {
                return false;
            }
        }
        seen.into_iter().all(|x| x)
    }
}

fn check_ascending(powers: &[u32]) -> Result<()> {
    if powers.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition("power exponents must be ascending".into()));
    }
    Ok(())
}

/// A (possibly merged) summand: value `p^exp`, made of the original indices in `members`.
#[derive(Clone, Debug)]
struct Item {
    exp: u32,
    members: Vec<usize>,
}

/// Induction on the top digit: while some summand is `p^0`, the units digit
/// `c` of `n` takes the first `c` of them and the rest are merged `p` at a time
/// into summands `p^1`; then everything is divided by `p`.
fn split_items(items: Vec<Item>, p: Prime) -> Vec<Vec<usize>> {
    let q = p.value() as u64;
    let n: u64 = items.iter().map(|it| pow(p, it.exp)).sum();
    let digits = p_adic(n, p).digits;
    if digits.len() <= 1 {
        return vec![items.into_iter().flat_map(|it| it.members).collect()];
    }
    let (zeros, rest): (Vec<Item>, Vec<Item>) = items.into_iter().partition(|it| it.exp == 0);
    let c0 = (n % q) as usize;
    let mut out = Vec::new();
    let mut merged = Vec::new();
    if c0 > 0 {
        out.push(zeros[..c0].iter().flat_map(|it| it.members.clone()).collect());
    }
    for chunk in zeros[c0..].chunks(q as usize) {
        debug_assert_eq!(chunk.len(), q as usize);
        merged.push(Item { exp: 1, members: chunk.iter().flat_map(|it| it.members.clone()).collect() });
    }
    let mut next: Vec<Item> = merged.into_iter().chain(rest).collect();
    next.sort_by_key(|it| it.exp);
    for it in &mut next {
        it.exp -= 1;
    }
    out.extend(split_items(next, p));
    out
}

/// Partition of the power list into blocks whose sums are the p-adic digits
/// `λ_i p^{m_i}` of `n`, in ascending order of `m_i`.
pub fn partition_powers(powers: &[u32], n: u64, p: Prime) -> Result<IndexPartition> {
    check_ascending(powers)?;
    let s = power_sum(powers, p);
    if s != n {
        return Err(Error::Precondition(format!("sum mismatch: powers add up to {s}, not {n}")));
    }
    if powers.is_empty() {
        return Ok(IndexPartition { blocks: Vec::new() });
    }
    let items = powers.iter().enumerate().map(|(i, &e)| Item { exp: e, members: vec![i] }).collect();
    let part = IndexPartition::normalized(split_items(items, p));
    let digits = p_adic(n, p);
    let targets: Vec<u64> = digits.digits.iter().map(|&(c, e)| c * pow(p, e)).collect();
    if !part.is_valid(powers, &targets, p) {
        return Err(Error::Invariance(format!("construction produced an invalid partition {:?}", part.blocks)));
    }
    if powers.len() < digits.length() {
        return Err(Error::Invariance("fewer summands than p-adic digits".into()));
    }
    Ok(part)
}

/// Partition with block sums `a_1, ..., a_k`, for targets whose p-adic digit
/// supports are pairwise disjoint.
pub fn partition_distinct_sums(powers: &[u32], targets: &[u64], p: Prime) -> Result<IndexPartition> {
    check_ascending(powers)?;
    if targets.contains(&0) {
        return Err(Error::Precondition("zero target".into()));
    }
    let decomps: Vec<PAdicDecomposition> = targets.iter().map(|&a| p_adic(a, p)).collect();
    for i in 0..decomps.len() {
        for j in i + 1..decomps.len() {
            if decomps[i].support().iter().any(|e| decomps[j].support().contains(e)) {
                return Err(Error::Precondition(format!(
                    "shared p-power between targets {} and {}",
                    targets[i], targets[j]
                )));
            }
        }
    }
    let n: u64 = targets.iter().sum();
    let s = power_sum(powers, p);
    if s != n {
        return Err(Error::Precondition(format!("sum mismatch: powers add up to {s}, targets to {n}")));
    }
    let by_digit = partition_powers(powers, n, p)?;
    let digits = p_adic(n, p).digits;
    let mut blocks = vec![Vec::new(); targets.len()];
    for (block, &(_, e)) in by_digit.blocks.into_iter().zip(&digits) {
        let owner = decomps.iter().position(|d| d.support().contains(&e)).expect("digit has an owner");
        blocks[owner].extend(block);
    }
    let part = IndexPartition::normalized(blocks);
    debug_assert!(part.is_valid(powers, targets, p));
    Ok(part)
}

/// Largest power list accepted by [`brute_force_partition`].
pub const SEARCH_BOUND: usize = 12;

/// Every assignment of indices to targets with the right sums.
pub fn brute_force_partition(powers: &[u32], targets: &[u64], p: Prime) -> Result<Vec<IndexPartition>> {
    if powers.len() > SEARCH_BOUND {
        return Err(Error::SearchBound(powers.len(), SEARCH_BOUND));
    }
    let vals: Vec<u64> = powers.iter().map(|&l| pow(p, l)).collect();
    if vals.iter().sum::<u64>() != targets.iter().sum::<u64>() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut remaining = targets.to_vec();
    let mut assign = vec![0usize; vals.len()];
    fn rec(i: usize, vals: &[u64], remaining: &mut [u64], assign: &mut [usize], out: &mut Vec<IndexPartition>) {
        if i == vals.len() {
            if remaining.iter().all(|&r| r == 0) {
                let mut blocks = vec![Vec::new(); remaining.len()];
                for (idx, &b) in assign.iter().enumerate() {
                    blocks[b].push(idx);
                }
                out.push(IndexPartition { blocks });
            }
            return;
        }
        for b in 0..remaining.len() {
            if remaining[b] >= vals[i] {
                remaining[b] -= vals[i];
                assign[i] = b;
                rec(i + 1, vals, remaining, assign, out);
                remaining[b] += vals[i];
            }
        }
    }
    rec(0, &vals, &mut remaining, &mut assign, &mut out);
    Ok(out)
}

/// Verdict of the length hypothesis for one index `i`: the p-adic length of
/// `p^δ - t` must exceed `d` for `1 <= t <= d p^{λ_i} - λ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisVerdict {
    pub i: usize,
    pub t_max: u64,
    pub holds: bool,
    /// Smallest `t` violating the condition (nonpositive `p^δ - t` counts as a violation).
    pub first_failure: Option<u64>,
}

pub fn length_hypothesis(lambda: &[usize], delta: u32, p: Prime) -> Vec<HypothesisVerdict> {
    let d = lambda.iter().sum::<usize>() as u64;
    let top = pow(p, delta);
    lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let t_max = (d * pow(p, l as u32)).saturating_sub(l as u64);
            let first_failure = (1..=t_max).find(|&t| t >= top || p_adic(top - t, p).length() as u64 <= d);
            HypothesisVerdict { i: i + 1, t_max, holds: first_failure.is_none(), first_failure }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockPartition {
    pub lambda: Vec<usize>,
    pub delta: u32,
    pub p: u32,
    pub powers: Vec<u32>,
    /// `p^{(i-1)δ} λ_i`
    pub targets: Vec<u64>,
    pub blocks: Vec<Vec<usize>>,
    /// Number of consecutive-block partitions with `card(E_1) <= λ_1`, by exhaustive search.
    pub candidates: usize,
    pub unique: bool,
    pub hypothesis: Vec<HypothesisVerdict>,
    pub hypothesis_holds: bool,
    pub warnings: Vec<String>,
}

fn is_run(b: &[usize]) -> bool {
    b.windows(2).all(|w| w[1] == w[0] + 1)
}

/// The consecutive-block partition with block sums `p^{(i-1)δ} λ_i` and
/// `card(E_1) <= λ_1`. Failed hypotheses produce warnings, not errors.
pub fn block_partition(lambda: &[usize], delta: u32, powers: &[u32], p: Prime) -> Result<BlockPartition> {
    check_ascending(powers)?;
    if lambda.is_empty() || lambda.contains(&0) {
        return Err(Error::Precondition("λ entries must be positive".into()));
    }
    let d: usize = lambda.iter().sum();
    if powers.len() != d {
        return Err(Error::Precondition(format!("expected {d} powers, got {}", powers.len())));
    }
    let targets: Vec<u64> = lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| l as u64 * pow(p, (i as u32) * delta))
        .collect();
    let total: u64 = targets.iter().sum();
    if power_sum(powers, p) != total {
        return Err(Error::Precondition(format!("sum mismatch: powers add up to {}, not {total}", power_sum(powers, p))));
    }
    let mut warnings = Vec::new();
    let max_l = *lambda.iter().max().expect("nonempty");
    if delta as usize <= max_l {
        warnings.push(format!("delta = {delta} does not exceed max lambda = {max_l}"));
    }
    let hypothesis = length_hypothesis(lambda, delta, p);
    for h in &hypothesis {
        if !h.holds {
            warnings.push(format!(
                "length hypothesis fails for i = {} at t = {}",
                h.i,
                h.first_failure.expect("failure recorded")
            ));
        }
    }
    let hypothesis_holds = hypothesis.iter().all(|h| h.holds) && delta as usize > max_l;
    let all = brute_force_partition(powers, &targets, p)?;
    let good: Vec<&IndexPartition> = all
        .iter()
        .filter(|c| c.blocks.iter().all(|b| is_run(b)) && c.blocks[0].len() <= lambda[0])
        .collect();
    let chosen = good
        .first()
        .ok_or_else(|| Error::Precondition("no consecutive-block partition exists".into()))?;
    for (i, b) in chosen.blocks.iter().enumerate() {
        if b.len() > lambda[i] {
            warnings.push(format!("card(E_{}) = {} > lambda_{} = {}", i + 1, b.len(), i + 1, lambda[i]));
        }
    }
    Ok(BlockPartition {
        lambda: lambda.to_vec(),
        delta,
        p: p.value(),
        powers: powers.to_vec(),
        targets,
        blocks: chosen.blocks.clone(),
        candidates: good.len(),
        unique: good.len() == 1,
        hypothesis,
        hypothesis_holds,
        warnings,
    })
}

/// All ascending exponent lists of length `len` with `Σ p^{l} = n`.
pub fn power_lists(n: u64, len: usize, p: Prime) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(p: Prime, rem: u64, left: usize, min_e: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = min_e;
        while pow(p, e) * left as u64 <= rem {
            cur.push(e);
            rec(p, rem - pow(p, e), left - 1, e, cur, out);
            cur.pop();
            e += 1;
        }
    }
    rec(p, n, len, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn digits() {
        assert_eq!(p_adic(6, pr(2)).digits, vec![(1, 1), (1, 2)]);
        assert_eq!(p_adic(27, pr(3)).digits, vec![(1, 3)]);
        assert_eq!(p_adic(10, pr(3)).digits, vec![(1, 0), (1, 2)]);
        assert_eq!(p_adic(0, pr(5)).length(), 0);
    }

    #[test]
    fn lemma_examples() {
        let part = partition_powers(&[0, 0, 2], 6, pr(2)).unwrap();
        assert_eq!(part.blocks, vec![vec![0, 1], vec![2]]);
        assert_eq!(partition_powers(&[4], 16, pr(2)).unwrap().blocks, vec![vec![0]]);
        assert_eq!(partition_powers(&[0, 0, 0], 3, pr(3)).unwrap().blocks, vec![vec![0, 1, 2]]);
        assert!(matches!(partition_powers(&[0, 1], 4, pr(2)), Err(Error::Precondition(_))));
    }

    #[test]
    fn distinct_sums() {
        let part = partition_distinct_sums(&[0, 0, 2], &[2, 4], pr(2)).unwrap();
        assert_eq!(part.blocks, vec![vec![0, 1], vec![2]]);
        assert_eq!(partition_distinct_sums(&[0, 1, 1], &[5], pr(2)).unwrap().blocks, vec![vec![0, 1, 2]]);
        let err = partition_distinct_sums(&[0, 0, 0, 0], &[1, 3], pr(2)).unwrap_err();
        assert!(err.to_string().contains("shared p-power"));
        let err = partition_distinct_sums(&[0], &[2], pr(2)).unwrap_err();
        assert!(err.to_string().contains("sum mismatch"));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_partition(&[0, 0, 2], &[2, 4], pr(2)).unwrap().len(), 1);
        assert!(brute_force_partition(&[0, 0], &[3, 0], pr(2)).unwrap().is_empty());
        assert_eq!(brute_force_partition(&[0, 0], &[1, 1], pr(2)).unwrap().len(), 2);
        assert!(matches!(brute_force_partition(&[0; 13], &[13], pr(2)), Err(Error::SearchBound(13, 12))));
    }

    #[test]
    fn block_examples() {
        let b = block_partition(&[2, 1], 5, &[0, 0, 5], pr(2)).unwrap();
        assert_eq!(b.blocks, vec![vec![0, 1], vec![2]]);
        assert!(b.unique);
        let b = block_partition(&[3], 4, &[0, 0, 0], pr(2)).unwrap();
        assert_eq!(b.blocks, vec![vec![0, 1, 2]]);
        let b = block_partition(&[2, 1], 3, &[1, 2, 2], pr(2)).unwrap();
        assert_eq!(b.blocks, vec![vec![0], vec![1, 2]]);
        assert!(!b.hypothesis_holds);
        assert!(b.warnings.iter().any(|w| w.contains("card(E_2) = 2 > lambda_2 = 1")));
    }

    #[test]
    fn hypothesis_threshold() {
        let p = pr(2);
        let holds = |d: u32| length_hypothesis(&[2, 1], d, p).iter().all(|h| h.holds);
        assert!(!holds(6));
        assert!(holds(7));
    }

    #[test]
    fn power_list_enumeration() {
        assert_eq!(power_lists(6, 3, pr(2)), vec![vec![0, 0, 2], vec![1, 1, 1]]);
    }
}
