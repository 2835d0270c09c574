//! Integer partitions and symmetric-group combinatorics.
//!
//! Partitions index both the stratification of the Hilbert scheme and the
//! conjugacy classes of the symmetric group; the age and centralizer-order
//! data derived here feed the orbifold computations.

use num_bigint::BigInt;

use crate::rat::Rat;

/// A partition of `n`: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive");
        assert!(parts.windows(2).all(|w| w[0] >= w[1]), "parts must be weakly decreasing");
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The partitioned integer `n`.
    pub fn sum(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts, written `|alpha|` when the partition is `alpha`.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// Multiplicity vector: `multiplicities()[i-1]` counts the parts equal
    /// to `i`, for `i = 1..=n`.
    pub fn multiplicities(&self) -> Vec<u32> {
        let n = self.sum() as usize;
        let mut mult = vec![0u32; n];
        for &p in &self.parts {
            mult[p as usize - 1] += 1;
        }
        mult
    }

    /// Age of the corresponding permutation acting on a surface power:
    /// `n - |alpha|`, each k-cycle contributing `k - 1`.
    pub fn age(&self) -> u32 {
        self.sum() - self.length() as u32
    }

    /// Centralizer order `z_alpha = prod_i i^{alpha_i} alpha_i!`.
    pub fn centralizer_order(&self) -> BigInt {
        let mut z = BigInt::from(1);
        for (i, &m) in self.multiplicities().iter().enumerate() {
            let part = BigInt::from(i + 1);
            for _ in 0..m {
                z *= &part;
            }
            z *= factorial(m as usize);
        }
        z
    }

    /// Size of the conjugacy class of cycle type `self` in the symmetric
    /// group: `n! / z_alpha`.
    pub fn class_size(&self) -> BigInt {
        factorial(self.sum() as usize) / self.centralizer_order()
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

/// All partitions of `n` in reverse lexicographic order, `(n)` first and
/// `(1,...,1)` last. `n = 0` yields the single empty partition.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    descend(n, n, &mut current, &mut out);
    out
}

fn descend(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    let mut p = remaining.min(max_part);
    while p >= 1 {
        current.push(p);
        descend(remaining - p, p, current, out);
        current.pop();
        p -= 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("n = {n} exceeds the brute-force bound {bound}")]
pub struct BruteForceBound {
    pub n: u32,
    pub bound: u32,
}

pub const DEFAULT_BRUTE_FORCE_BOUND: u32 = 6;

/// For every commuting pair `(g, h)` in the symmetric group on `n` letters,
/// the number of orbits of the subgroup generated by `g` and `h` on the
/// letters. Returned as one entry per pair, in a deterministic order.
pub fn commuting_pairs_orbit_counts(n: u32, bound: u32) -> Result<Vec<u32>, BruteForceBound> {
    if n > bound {
        return Err(BruteForceBound { n, bound });
    }
    let perms = all_permutations(n as usize);
    let mut out = Vec::new();
    for g in &perms {
        for h in &perms {
            if commute(g, h) {
                out.push(joint_orbit_count(g, h));
            }
        }
    }
    Ok(out)
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out.sort();
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

fn commute(g: &[usize], h: &[usize]) -> bool {
    (0..g.len()).all(|i| g[h[i]] == h[g[i]])
}

/// Orbits of the group generated by g and h on the letters, via union-find.
fn joint_orbit_count(g: &[usize], h: &[usize]) -> u32 {
    let n = g.len();
    if n == 0 {
        return 0;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for image in [g[i], h[i]] {
            let a = find(&mut parent, i);
            let b = find(&mut parent, image);
            if a != b {
                parent[a] = b;
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count() as u32
}

/// Sum of `e^{orbits}` over all commuting pairs, divided by `n!`; the
/// normalized orbifold Euler number of the n-th symmetric power of a space
/// with Euler number `e`.
pub fn normalized_commuting_pair_sum(e: i64, n: u32, bound: u32) -> Result<Rat, BruteForceBound> {
    let counts = commuting_pairs_orbit_counts(n, bound)?;
    let e = BigInt::from(e);
    let mut total = BigInt::from(0);
    for k in counts {
        let mut term = BigInt::from(1);
        for _ in 0..k {
            term *= &e;
        }
        total += term;
    }
    let denom = factorial(n as usize);
    Ok(Rat::from_bigint(total) / Rat::from_bigint(denom))
}
