//! Irredundant cover enumeration.
//!
//! Every irredundant cover of a noncyclic group is a selection of eligible
//! noncyclic subgroups together with the maximal cyclic subgroups not
//! absorbed by the selection's union. Enumerating the 2^m selections and
//! keeping the irredundant ones therefore counts all covers; the lemma-free
//! [`brute_force_enumeration`] re-derives the same answer straight from the
//! definitions and serves as the oracle in tests.

use std::collections::BTreeSet;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::mask::Mask;

/// Refuse selection spaces past 2^30.
pub const DEFAULT_SELECTION_CAP: usize = 30;
/// Stop materializing cover lists past this count; counts stay exact.
pub const DEFAULT_COVER_LIST_CAP: usize = 10_000;
/// Default ceiling on proper subgroups for the brute-force oracle.
pub const DEFAULT_BRUTE_CAP: usize = 20;

/// A cover as subgroup ids into a fixed lattice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cover {
    pub members: BTreeSet<usize>,
    /// The noncyclic members; these recover the selection in the normal form.
    pub noncyclic_selection: BTreeSet<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct EnumerationStats {
    pub subsets_examined: u64,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug)]
pub struct CoverEnumeration {
    pub beta: u64,
    pub beta_normal: u64,
    /// Count of eligible noncyclic subgroups.
    pub m: usize,
    pub covers: Vec<Cover>,
    pub covers_elided: bool,
    pub stats: EnumerationStats,
}

/// Proper noncyclic subgroups containing at least one maximal cyclic
/// subgroup — exactly the subgroups that can appear in an irredundant cover
/// beyond the maximal cyclic ones. Sorted by (order, members).
pub fn eligible_noncyclic(l: &Lattice) -> Vec<usize> {
    let mut out: Vec<usize> = (0..l.len())
        .filter(|&i| {
            let s = l.subgroup(i);
            l.is_proper(i)
                && !s.flags.cyclic
                && l.maximal_cyclic_ids()
                    .iter()
                    .any(|&c| l.subgroup(c).members.is_subset_of(&s.members))
        })
        .collect();
    out.sort_by(|&a, &b| {
        let sa = l.subgroup(a);
        let sb = l.subgroup(b);
        sa.order.cmp(&sb.order).then_with(|| sa.members.cmp(&sb.members))
    });
    out
}

/// The paper's normal form: the selection plus every maximal cyclic subgroup
/// whose generators avoid the selection's union.
pub fn assemble_cover(l: &Lattice, selection: &BTreeSet<usize>) -> Result<Cover> {
    let eligible: BTreeSet<usize> = eligible_noncyclic(l).into_iter().collect();
    for &id in selection {
        if !eligible.contains(&id) {
            return Err(Error::NotEligible(id));
        }
    }
    let mut union = Mask::empty(l.group().order());
    for &id in selection {
        union.union_with(&l.subgroup(id).members);
    }
    let mut members = selection.clone();
    for &c in l.maximal_cyclic_ids() {
        if !l.subgroup(c).members.is_subset_of(&union) {
            members.insert(c);
        }
    }
    Ok(Cover {
        members,
        noncyclic_selection: selection.clone(),
    })
}

fn union_of(l: &Lattice, ids: impl Iterator<Item = usize>) -> Mask {
    let mut u = Mask::empty(l.group().order());
    for id in ids {
        u.union_with(&l.subgroup(id).members);
    }
    u
}

fn check_is_cover(l: &Lattice, c: &Cover) -> Result<()> {
    if c.members.iter().any(|&id| !l.is_proper(id)) {
        return Err(Error::NotACover);
    }
    let u = union_of(l, c.members.iter().copied());
    if u.count() != l.group().order() {
        return Err(Error::NotACover);
    }
    Ok(())
}

/// True iff removing any single member breaks coverage.
pub fn is_irredundant(l: &Lattice, c: &Cover) -> Result<bool> {
    check_is_cover(l, c)?;
    let ids: Vec<usize> = c.members.iter().copied().collect();
    Ok(no_member_is_covered_by_rest(l, &ids))
}

fn no_member_is_covered_by_rest(l: &Lattice, ids: &[usize]) -> bool {
    let words = l.group().order().div_ceil(64);
    let rows: Vec<&[u64]> = ids.iter().map(|&id| l.subgroup(id).members.words()).collect();
    let mut scratch = PrefixSuffix::new(words, ids.len());
    scratch.each_member_has_private_element(&rows, &vec![0u64; words])
}

/// Reusable prefix/suffix union buffers for "is any member covered by the
/// rest" checks, allocation-free per query.
struct PrefixSuffix {
    words: usize,
    pre: Vec<u64>,
    suf: Vec<u64>,
}

impl PrefixSuffix {
    fn new(words: usize, capacity: usize) -> Self {
        PrefixSuffix {
            words,
            pre: vec![0; (capacity + 1) * words],
            suf: vec![0; (capacity + 1) * words],
        }
    }

    fn ensure(&mut self, members: usize) {
        let need = (members + 1) * self.words;
        if self.pre.len() < need {
            self.pre.resize(need, 0);
            self.suf.resize(need, 0);
        }
    }

    /// `base` joins the union on the prefix side (the leftover cyclics in
    /// the selection walk; empty for raw covers).
    fn each_member_has_private_element(&mut self, rows: &[&[u64]], base: &[u64]) -> bool {
        let w = self.words;
        let k = rows.len();
        self.ensure(k);
        self.pre[..w].copy_from_slice(base);
        for i in 0..k {
            let (lo, hi) = self.pre.split_at_mut((i + 1) * w);
            let src = &lo[i * w..];
            let row = rows[i];
            for t in 0..w {
                hi[t] = src[t] | row[t];
            }
        }
        for t in k * w..(k + 1) * w {
            self.suf[t] = 0;
        }
        for i in (0..k).rev() {
            let row = rows[i];
            for t in 0..w {
                self.suf[i * w + t] = self.suf[(i + 1) * w + t] | row[t];
            }
        }
        (0..k).all(|i| {
            let row = rows[i];
            (0..w).any(|t| row[t] & !(self.pre[i * w + t] | self.suf[(i + 1) * w + t]) != 0)
        })
    }
}

/// True iff the member set is closed under conjugation by every element.
pub fn is_normal_cover(l: &Lattice, c: &Cover) -> Result<bool> {
    check_is_cover(l, c)?;
    Ok(member_set_conjugation_closed(l, &c.members))
}

fn member_set_conjugation_closed(l: &Lattice, ids: &BTreeSet<usize>) -> bool {
    ids.iter().all(|&id| (0..l.group().order()).all(|g| ids.contains(&l.conjugate_id(id, g))))
}

pub fn enumerate_covers(l: &Lattice, want_list: bool) -> Result<CoverEnumeration> {
    enumerate_covers_capped(l, want_list, DEFAULT_SELECTION_CAP, DEFAULT_COVER_LIST_CAP)
}

pub fn enumerate_covers_capped(
    l: &Lattice,
    want_list: bool,
    selection_cap: usize,
    list_cap: usize,
) -> Result<CoverEnumeration> {
    let start = Instant::now();
    let g = l.group();
    let n = g.order();

    // Cyclic groups have no covers by proper subgroups.
    if g.is_cyclic() {
        return Ok(CoverEnumeration {
            beta: 0,
            beta_normal: 0,
            m: 0,
            covers: Vec::new(),
            covers_elided: false,
            stats: EnumerationStats {
                subsets_examined: 0,
                elapsed_ms: start.elapsed().as_millis(),
            },
        });
    }

    let eligible = eligible_noncyclic(l);
    let m = eligible.len();
    if m > selection_cap {
        return Err(Error::SelectionCap { m, cap: selection_cap });
    }

    let cyclics = l.maximal_cyclic_ids();
    let t = cyclics.len();

    // Per maximal cyclic subgroup: which eligible subgroups absorb it.
    let absorb: Vec<u64> = cyclics
        .iter()
        .map(|&c| {
            let cm = &l.subgroup(c).members;
            let mut bits = 0u64;
            for (j, &h) in eligible.iter().enumerate() {
                if cm.is_subset_of(&l.subgroup(h).members) {
                    bits |= 1 << j;
                }
            }
            bits
        })
        .collect();
    // Absorption lists per eligible subgroup, for incremental updates.
    let absorbed_by: Vec<Vec<usize>> = (0..m)
        .map(|j| (0..t).filter(|&i| absorb[i] >> j & 1 == 1).collect())
        .collect();

    // Conjugation orbits over the eligible set: a selection is conjugation
    // closed iff it is a union of orbits. This matches the member-wise
    // normal-cover test because conjugation permutes maximal cyclic
    // subgroups and commutes with the leftover construction.
    let orbit_masks: Vec<u64> = {
        let pos: std::collections::HashMap<usize, usize> =
            eligible.iter().enumerate().map(|(j, &id)| (id, j)).collect();
        let mut seen = vec![false; m];
        let mut orbits = Vec::new();
        for j in 0..m {
            if seen[j] {
                continue;
            }
            let mut mask = 0u64;
            let mut stack = vec![j];
            while let Some(x) = stack.pop() {
                if seen[x] {
                    continue;
                }
                seen[x] = true;
                mask |= 1 << x;
                for c in 0..n {
                    let conj = l.conjugate_id(eligible[x], c);
                    let y = pos[&conj];
                    if !seen[y] {
                        stack.push(y);
                    }
                }
            }
            orbits.push(mask);
        }
        orbits
    };

    // Flattened mask rows for the hot loop.
    let words = n.div_ceil(64);
    let h_rows: Vec<&[u64]> = eligible.iter().map(|&id| l.subgroup(id).members.words()).collect();
    let cyc_rows: Vec<&[u64]> = cyclics.iter().map(|&id| l.subgroup(id).members.words()).collect();

    // Gray-code walk over selections: one subgroup toggles per step, so the
    // per-cyclic absorption counts update incrementally.
    let mut absorb_count = vec![0u32; t];
    let mut selection: u64 = 0;
    let mut beta = 0u64;
    let mut beta_normal = 0u64;
    let mut covers: Vec<Cover> = Vec::new();
    let mut covers_elided = false;
    let total: u64 = 1 << m;

    let mut selected_rows: Vec<&[u64]> = Vec::with_capacity(m);
    let mut leftover = vec![0u64; words];
    let mut scratch = PrefixSuffix::new(words, m);

    for step in 0..total {
        // Evaluate the current selection.
        let irredundant = if selection == 0 {
            true
        } else {
            leftover.fill(0);
            for i in 0..t {
                if absorb_count[i] == 0 {
                    let row = cyc_rows[i];
                    for w in 0..words {
                        leftover[w] |= row[w];
                    }
                }
            }
            selected_rows.clear();
            for j in 0..m {
                if selection >> j & 1 == 1 {
                    selected_rows.push(h_rows[j]);
                }
            }
            // Leftover cyclics are never redundant (their generators avoid
            // every other member), so only selected subgroups need checking.
            scratch.each_member_has_private_element(&selected_rows, &leftover)
        };
        if irredundant {
            beta += 1;
            if orbit_masks.iter().all(|&o| {
                let inter = selection & o;
                inter == 0 || inter == o
            }) {
                beta_normal += 1;
            }
            if want_list {
                if covers.len() < list_cap {
                    let sel: BTreeSet<usize> = (0..m)
                        .filter(|&j| selection >> j & 1 == 1)
                        .map(|j| eligible[j])
                        .collect();
                    let mut members = sel.clone();
                    for i in 0..t {
                        if absorb[i] & selection == 0 {
                            members.insert(cyclics[i]);
                        }
                    }
                    covers.push(Cover {
                        members,
                        noncyclic_selection: sel,
                    });
                } else {
                    covers_elided = true;
                }
            }
        }

        // Toggle one bit to reach the next Gray code.
        if step + 1 < total {
            let j = (step + 1).trailing_zeros() as usize;
            let adding = selection >> j & 1 == 0;
            selection ^= 1 << j;
            let delta: i32 = if adding { 1 } else { -1 };
            for &i in &absorbed_by[j] {
                absorb_count[i] = (absorb_count[i] as i32 + delta) as u32;
            }
        }
    }

    if covers_elided {
        covers.clear();
    } else {
        covers.sort();
    }

    Ok(CoverEnumeration {
        beta,
        beta_normal,
        m,
        covers,
        covers_elided,
        stats: EnumerationStats {
            subsets_examined: total,
            elapsed_ms: start.elapsed().as_millis(),
        },
    })
}

/// Builds the lattice and enumerates covers in one step.
pub fn enumerate_group(
    g: &crate::group::GroupHandle,
    want_list: bool,
) -> Result<(Lattice, CoverEnumeration)> {
    let l = crate::lattice::build_lattice(g)?;
    let e = enumerate_covers(&l, want_list)?;
    Ok((l, e))
}

/// Lemma-free oracle: scans every subset of the proper subgroups and tests
/// the cover and irredundancy definitions directly.
pub fn brute_force_enumeration(l: &Lattice, cap: usize) -> Result<CoverEnumeration> {
    let start = Instant::now();
    let g = l.group();
    let n = g.order();
    let proper: Vec<usize> = (0..l.len()).filter(|&i| l.is_proper(i)).collect();
    let p = proper.len();
    if p > cap {
        return Err(Error::BruteForceCap { count: p, cap });
    }
    let words = n.div_ceil(64);
    let full = Mask::full(n);
    let full_w = full.words();
    let rows_all: Vec<&[u64]> = proper.iter().map(|&id| l.subgroup(id).members.words()).collect();
    let mut beta = 0u64;
    let mut beta_normal = 0u64;
    let mut covers = Vec::new();
    let total: u64 = 1 << p;
    let mut rows: Vec<&[u64]> = Vec::with_capacity(p);
    let mut union = vec![0u64; words];
    let mut scratch = PrefixSuffix::new(words, p);
    let zero = vec![0u64; words];
    for bits in 1..total {
        rows.clear();
        union.fill(0);
        for i in 0..p {
            if bits >> i & 1 == 1 {
                let row = rows_all[i];
                for w in 0..words {
                    union[w] |= row[w];
                }
                rows.push(row);
            }
        }
        if union != full_w {
            continue;
        }
        if !scratch.each_member_has_private_element(&rows, &zero) {
            continue;
        }
        beta += 1;
        let members: BTreeSet<usize> =
            (0..p).filter(|&i| bits >> i & 1 == 1).map(|i| proper[i]).collect();
        if member_set_conjugation_closed(l, &members) {
            beta_normal += 1;
        }
        let noncyclic_selection = members
            .iter()
            .copied()
            .filter(|&id| !l.subgroup(id).flags.cyclic)
            .collect();
        covers.push(Cover {
            members,
            noncyclic_selection,
        });
    }
    covers.sort();
    Ok(CoverEnumeration {
        beta,
        beta_normal,
        m: eligible_noncyclic(l).len(),
        covers,
        covers_elided: false,
        stats: EnumerationStats {
            subsets_examined: total,
            elapsed_ms: start.elapsed().as_millis(),
        },
    })
}
