//! Abelianization through the Smith normal form of the relator
//! exponent-sum matrix.

use std::fmt;

use serde::Serialize;

use super::presentation::Presentation;

/// A finitely generated abelian group `Z/t1 + ... + Z/tk + Z^r` with
/// `t1 | t2 | ... | tk` and every `ti >= 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianInvariants {
    pub torsion: Vec<u64>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    /// Builds invariants from arbitrary diagonal entries (zeros count as free
    /// summands, units are dropped) by re-normalizing into a divisibility
    /// chain.
    pub fn from_diagonal(diagonal: &[u64], extra_free: usize) -> Self {
        let mut free_rank = extra_free;
        // Primary decomposition, then regroup into invariant factors.
        let mut prime_powers: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &d in diagonal {
            if d == 0 {
                free_rank += 1;
                continue;
            }
            let mut n = d;
            let mut p = 2;
            while p * p <= n {
                if n % p == 0 {
                    let mut q = 1;
                    while n % p == 0 {
                        n /= p;
                        q *= p;
                    }
                    prime_powers.entry(p).or_default().push(q);
                }
                p += 1;
            }
            if n > 1 {
                prime_powers.entry(n).or_default().push(n);
            }
        }
        let len = prime_powers.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![1u64; len];
        for powers in prime_powers.values_mut() {
            powers.sort_unstable();
            // Largest powers go to the last factors.
            for (i, q) in powers.iter().rev().enumerate() {
                torsion[len - 1 - i] *= q;
            }
        }
        torsion.retain(|&t| t > 1);
        AbelianInvariants { torsion, free_rank }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Parses the `Display` form back (`1`, `Z/5 + Z`, `Z^2`, `Z/2 + Z/4 + Z^3`).
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if text == "1" || text == "0" || text.eq_ignore_ascii_case("trivial") {
            return Some(AbelianInvariants::default());
        }
        let mut torsion = Vec::new();
        let mut free_rank = 0;
        for part in text.split('+').map(str::trim) {
            if let Some(n) = part.strip_prefix("Z/") {
                let n: u64 = n.trim().parse().ok()?;
                if n == 0 {
                    free_rank += 1;
                } else if n > 1 {
                    torsion.push(n);
                }
            } else if part == "Z" {
                free_rank += 1;
            } else {
                let r = part.strip_prefix("Z^")?;
                free_rank += r.trim().parse::<usize>().ok()?;
            }
        }
        Some(AbelianInvariants::from_diagonal(&torsion, free_rank))
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Relator-by-generator matrix of exponent sums.
pub fn exponent_matrix(p: &Presentation) -> Vec<Vec<i64>> {
    p.relators()
        .iter()
        .map(|r| {
            (0..p.generator_count())
                .map(|g| r.exponent_sum(g as u32))
                .collect()
        })
        .collect()
}

/// Nonzero diagonal entries (absolute values, each dividing the next) of the
/// Smith normal form of `m`.
pub fn smith_diagonal(m: &[Vec<i64>]) -> Vec<u64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Pivot: smallest nonzero magnitude in the trailing block.
        let Some((pr, pc)) = smallest_entry(&a, t) else {
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // Enforce divisibility of the remaining block by the pivot.
                let p = a[t][t];
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        for j in t..cols {
                            let v = a[i][j];
                            a[t][j] += v;
                        }
                    }
                    None => break,
                }
            }
            let (pr, pc) = smallest_entry_in_cross(&a, t);
            a.swap(t, pr);
            for row in a.iter_mut() {
                row.swap(t, pc);
            }
        }
        diag.push(a[t][t].unsigned_abs() as u64);
    }
    diag
}

fn smallest_entry(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(u128, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.is_none_or(|(b, _, _)| x.unsigned_abs() < b) {
                best = Some((x.unsigned_abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smallest nonzero entry in row `t` or column `t` of the trailing block.
fn smallest_entry_in_cross(a: &[Vec<i128>], t: usize) -> (usize, usize) {
    let mut best = (a[t][t].unsigned_abs(), t, t);
    for (i, row) in a.iter().enumerate().skip(t) {
        let x = row[t];
        if x != 0 && (best.0 == 0 || x.unsigned_abs() < best.0) {
            best = (x.unsigned_abs(), i, t);
        }
    }
    for (j, &x) in a[t].iter().enumerate().skip(t) {
        if x != 0 && (best.0 == 0 || x.unsigned_abs() < best.0) {
            best = (x.unsigned_abs(), t, j);
        }
    }
    (best.1, best.2)
}

/// Abelian invariants of the group presented by `p`.
pub fn abelianize(p: &Presentation) -> AbelianInvariants {
    let diag = smith_diagonal(&exponent_matrix(p));
    let rank = diag.len();
    let torsion: Vec<u64> = diag.into_iter().filter(|&d| d > 1).collect();
    AbelianInvariants {
        torsion,
        free_rank: p.generator_count() - rank,
    }
}
