//! Todd–Coxeter coset enumeration, HLT strategy with lookahead.
//!
//! Columns are `2g` for generator `g` and `2g + 1` for its inverse. Coset 0
//! is the subgroup itself. Processing order is fixed, so runs are
//! reproducible.

use std::collections::VecDeque;

use serde::Serialize;

use super::presentation::Presentation;
use super::word::FreeWord;

const UNDEF: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CosetOutcome {
    /// The table closed with this many cosets.
    Index(u64),
    /// The table outgrew the coset limit; inconclusive.
    Overflow,
}

/// Outcome plus the bookkeeping needed to cite it as evidence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CosetEnumeration {
    pub outcome: CosetOutcome,
    /// Total number of coset definitions made.
    pub defined: u64,
    pub max_cosets: usize,
}

struct NoSpace;

struct Table {
    ncols: usize,
    rows: Vec<u32>,
    parent: Vec<u32>,
    limit: usize,
    defined: u64,
    queue: VecDeque<u32>,
}

fn word_columns(w: &FreeWord) -> Vec<usize> {
    w.letters()
        .map(|(g, s)| 2 * g as usize + usize::from(s < 0))
        .collect()
}

impl Table {
    fn new(ngens: usize, limit: usize) -> Self {
        let ncols = 2 * ngens;
        Table {
            ncols,
            rows: vec![UNDEF; ncols],
            parent: vec![0],
            limit,
            defined: 1,
            queue: VecDeque::new(),
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.rows[c as usize * self.ncols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, d: u32) {
        self.rows[c as usize * self.ncols + x] = d;
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = c;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }

    fn define(&mut self, c: u32, x: usize) -> Result<u32, NoSpace> {
        // The budget counts every coset ever defined, not just live ones, so
        // the limit bounds total work regardless of later coincidences.
        if self.defined >= self.limit as u64 {
            return Err(NoSpace);
        }
        let d = self.len() as u32;
        self.parent.push(d);
        self.rows.extend(std::iter::repeat_n(UNDEF, self.ncols));
        self.defined += 1;
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(d)
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = if a < b { (a, b) } else { (b, a) };
        self.parent[kill as usize] = keep;
        self.queue.push_back(kill);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        while let Some(g) = self.queue.pop_front() {
            for x in 0..self.ncols {
                let d = self.get(g, x);
                if d == UNDEF {
                    continue;
                }
                self.set(d, x ^ 1, UNDEF);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mu_x = self.get(mu, x);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x);
                } else {
                    let nu_xi = self.get(nu, x ^ 1);
                    if nu_xi != UNDEF {
                        self.merge(mu, nu_xi);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                    }
                }
            }
        }
    }

    /// Scans `w` at `c`, defining cosets when `fill` is set. Without `fill`
    /// only deductions and coincidences are recorded.
    fn scan(&mut self, c: u32, w: &[usize], fill: bool) -> Result<(), NoSpace> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0isize, w.len() as isize - 1);
        loop {
            while i <= j {
                let d = self.get(f, w[i as usize]);
                if d == UNDEF {
                    break;
                }
                f = d;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i {
                let d = self.get(b, w[j as usize] ^ 1);
                if d == UNDEF {
                    break;
                }
                b = d;
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = w[i as usize];
                self.set(f, x, b);
                self.set(b, x ^ 1, f);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }

    /// Renumbers live cosets consecutively. Returns the old-to-new map.
    fn compact(&mut self) -> Vec<u32> {
        let n = self.len();
        let mut map = vec![UNDEF; n];
        let mut next = 0u32;
        for c in 0..n as u32 {
            if self.alive(c) {
                map[c as usize] = next;
                next += 1;
            }
        }
        let mut rows = Vec::with_capacity(next as usize * self.ncols);
        for c in 0..n as u32 {
            if !self.alive(c) {
                continue;
            }
            for x in 0..self.ncols {
                let d = self.get(c, x);
                rows.push(if d == UNDEF {
                    UNDEF
                } else {
                    let r = self.rep(d);
                    map[r as usize]
                });
            }
        }
        self.rows = rows;
        self.parent = (0..next).collect();
        map
    }
}

fn relator_set(p: &Presentation) -> Vec<Vec<usize>> {
    p.relators()
        .iter()
        .filter(|r| !r.is_identity())
        .map(word_columns)
        .collect()
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the
/// group presented by `p`, defining at most `max_cosets` cosets in total.
pub fn enumerate_cosets(p: &Presentation, subgroup: &[FreeWord], max_cosets: usize) -> CosetEnumeration {
    let max_cosets = max_cosets.max(1);
    let relators = relator_set(p);
    let subgens: Vec<Vec<usize>> = subgroup.iter().map(word_columns).collect();
    let mut t = Table::new(p.generator_count(), max_cosets);
    let overflow = |t: &Table| CosetEnumeration {
        outcome: CosetOutcome::Overflow,
        defined: t.defined,
        max_cosets,
    };

    // Subgroup generators at coset 0.
    let mut k = 0;
    while k < subgens.len() {
        match t.scan(0, &subgens[k], true) {
            Ok(()) => k += 1,
            Err(NoSpace) => {
                if !lookahead(&mut t, &relators) {
                    return overflow(&t);
                }
            }
        }
    }

    let mut c: u32 = 0;
    'outer: while (c as usize) < t.len() {
        if t.alive(c) {
            for r in &relators {
                if t.scan(c, r, true).is_err() {
                    let map = match lookahead_map(&mut t, &relators) {
                        Some(m) => m,
                        None => return overflow(&t),
                    };
                    c = resume_point(&map, c);
                    continue 'outer;
                }
                if !t.alive(c) {
                    break;
                }
            }
            if t.alive(c) {
                for x in 0..t.ncols {
                    if t.get(c, x) == UNDEF && t.define(c, x).is_err() {
                        let map = match lookahead_map(&mut t, &relators) {
                            Some(m) => m,
                            None => return overflow(&t),
                        };
                        c = resume_point(&map, c);
                        continue 'outer;
                    }
                }
            }
        }
        c += 1;
    }
    let live = (0..t.len() as u32).filter(|&c| t.alive(c)).count();
    CosetEnumeration {
        outcome: CosetOutcome::Index(live as u64),
        defined: t.defined,
        max_cosets,
    }
}

/// First live coset at or after old index `c` under the compaction map.
fn resume_point(map: &[u32], c: u32) -> u32 {
    map[c as usize..]
        .iter()
        .copied()
        .find(|&m| m != UNDEF)
        .unwrap_or_else(|| map.iter().filter(|&&m| m != UNDEF).count() as u32)
}

fn lookahead(t: &mut Table, relators: &[Vec<usize>]) -> bool {
    lookahead_map(t, relators).is_some()
}

/// Scans every relator at every live coset without defining, then
/// compacts. `None` when no space was recovered.
fn lookahead_map(t: &mut Table, relators: &[Vec<usize>]) -> Option<Vec<u32>> {
    let before = t.len();
    let mut c = 0u32;
    while (c as usize) < t.len() {
        for r in relators {
            if !t.alive(c) {
                break;
            }
            let _ = t.scan(c, r, false);
        }
        c += 1;
    }
    let map = t.compact();
    if t.len() >= before {
        None
    } else {
        Some(map)
    }
}
