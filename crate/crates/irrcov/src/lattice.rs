//! Complete subgroup lattices with cyclicity/normality/maximality flags,
//! conjugation tables, quotients, and distinguished subgroups.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{
    center_mask, closure_mask, commutator_mask, subgroup_group, Elem, Group, GroupHandle,
};
use crate::mask::Mask;

/// Ceiling on enumerated subgroups; elementary abelian groups blow up
/// combinatorially and we refuse rather than truncate.
pub const DEFAULT_LATTICE_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SubgroupFlags {
    pub cyclic: bool,
    pub normal: bool,
    /// Maximal proper subgroup.
    pub maximal: bool,
    /// Cyclic and contained in no strictly larger cyclic subgroup.
    pub maximal_cyclic: bool,
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    pub members: Mask,
    pub order: usize,
    pub flags: SubgroupFlags,
}

/// Smallest subgroup containing `seed`. The maximality flags require lattice
/// context and are left unset here; [`Lattice`] entries carry them.
pub fn closure(g: &Group, seed: &Mask) -> Subgroup {
    let members = closure_mask(g, seed);
    let order = members.count();
    let flags = SubgroupFlags {
        cyclic: is_cyclic_mask(g, &members),
        normal: is_normal_mask(g, &members),
        ..Default::default()
    };
    Subgroup { members, order, flags }
}

pub fn is_cyclic_mask(g: &Group, mask: &Mask) -> bool {
    let order = mask.count();
    mask.iter_ones().any(|x| g.element_order(x) as usize == order)
}

pub fn is_normal_mask(g: &Group, mask: &Mask) -> bool {
    (0..g.order()).all(|c| mask.iter_ones().all(|x| mask.get(g.conjugate(c, x))))
}

#[derive(Clone, Debug)]
pub struct Lattice {
    group: GroupHandle,
    subgroups: Vec<Subgroup>,
    index_of: HashMap<Mask, usize>,
    maximal_cyclic_ids: Vec<usize>,
    /// `conjugation[s][g]` is the id of g S g^-1.
    conjugation: Vec<Vec<u32>>,
}

impl Lattice {
    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroup(&self, id: usize) -> &Subgroup {
        &self.subgroups[id]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn find(&self, mask: &Mask) -> Option<usize> {
        self.index_of.get(mask).copied()
    }

    /// Id of the trivial subgroup (always the first entry).
    pub fn trivial_id(&self) -> usize {
        0
    }

    /// Id of the whole group (always the last entry).
    pub fn full_id(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn is_proper(&self, id: usize) -> bool {
        self.subgroups[id].order < self.group.order()
    }

    /// Containment: subgroup `inner` inside subgroup `outer`.
    pub fn contains(&self, outer: usize, inner: usize) -> bool {
        self.subgroups[inner].members.is_subset_of(&self.subgroups[outer].members)
    }

    pub fn maximal_cyclic_ids(&self) -> &[usize] {
        &self.maximal_cyclic_ids
    }

    pub fn conjugate_id(&self, sub: usize, g: usize) -> usize {
        self.conjugation[sub][g] as usize
    }

    /// Ids of normal subgroups, ascending.
    pub fn normal_ids(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.subgroups[i].flags.normal).collect()
    }

    /// Any subgroup whose order is the full p-part of |G|.
    pub fn sylow(&self, p: u64) -> Result<usize> {
        let order = self.group.order() as u64;
        if order % p != 0 {
            return Err(Error::PrimeDoesNotDivide { p, order: order as usize });
        }
        let mut part = 1u64;
        let mut rest = order;
        while rest % p == 0 {
            part *= p;
            rest /= p;
        }
        Ok((0..self.len())
            .find(|&i| self.subgroups[i].order as u64 == part)
            .expect("Sylow subgroups exist"))
    }

    /// Intersection of all maximal proper subgroups; the whole group when
    /// there are none (trivial group).
    pub fn frattini_mask(&self) -> Mask {
        let mut acc = Mask::full(self.group.order());
        for s in &self.subgroups {
            if s.flags.maximal {
                acc.intersect_with(&s.members);
            }
        }
        acc
    }

    pub fn distinguished(&self) -> Distinguished {
        let g = self.group.as_ref();
        Distinguished {
            center: center_mask(g),
            commutator: commutator_mask(g, &Mask::full(g.order())),
            frattini: self.frattini_mask(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Distinguished {
    pub center: Mask,
    pub commutator: Mask,
    pub frattini: Mask,
}

pub fn build_lattice(g: &GroupHandle) -> Result<Lattice> {
    build_lattice_capped(g, DEFAULT_LATTICE_CAP)
}

/// Enumerates every subgroup: seeds with the cyclic subgroups, then joins
/// pairs to a fixpoint. Every subgroup is a join of cyclic ones, so the
/// fixpoint is complete.
pub fn build_lattice_capped(g: &GroupHandle, cap: usize) -> Result<Lattice> {
    let n = g.order();
    let mut seen: HashMap<Mask, ()> = HashMap::new();
    let mut queue: Vec<Mask> = Vec::new();
    for x in 0..n {
        let c = closure_mask(g, &Mask::singleton(n, x));
        if seen.insert(c.clone(), ()).is_none() {
            queue.push(c);
        }
    }
    queue.sort_by_key(|m| m.count());
    let mut done: Vec<Mask> = Vec::new();
    let mut head = 0;
    while head < queue.len() {
        let a = queue[head].clone();
        head += 1;
        for b in &done {
            if b.is_subset_of(&a) || a.is_subset_of(b) {
                continue;
            }
            let join = closure_mask(g, &a.union(b));
            if !seen.contains_key(&join) {
                if seen.len() >= cap {
                    return Err(Error::LatticeCap { found: seen.len() + 1, cap });
                }
                seen.insert(join.clone(), ());
                queue.push(join);
            }
        }
        done.push(a);
    }

    let mut masks: Vec<Mask> = seen.into_keys().collect();
    masks.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
    let index_of: HashMap<Mask, usize> =
        masks.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();

    // Conjugation table (identity rows when the group is abelian).
    let abelian = g.is_abelian();
    let mut conjugation: Vec<Vec<u32>> = Vec::with_capacity(masks.len());
    for (i, m) in masks.iter().enumerate() {
        if abelian {
            conjugation.push(vec![i as u32; n]);
            continue;
        }
        let mut row = Vec::with_capacity(n);
        for c in 0..n {
            let mut conj = Mask::empty(n);
            for x in m.iter_ones() {
                conj.set(g.conjugate(c, x));
            }
            row.push(index_of[&conj] as u32);
        }
        conjugation.push(row);
    }

    let mut subgroups: Vec<Subgroup> = masks
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let order = m.count();
            Subgroup {
                members: m.clone(),
                order,
                flags: SubgroupFlags {
                    cyclic: is_cyclic_mask(g, m),
                    normal: conjugation[i].iter().all(|&j| j as usize == i),
                    ..Default::default()
                },
            }
        })
        .collect();

    // Maximality passes: candidates only need checking against strictly
    // larger subgroups of divisible order.
    let count = subgroups.len();
    for i in 0..count {
        if subgroups[i].order == n {
            continue;
        }
        let covered = (0..count).any(|j| {
            j != i
                && subgroups[j].order < n
                && subgroups[j].order > subgroups[i].order
                && subgroups[j].order % subgroups[i].order == 0
                && subgroups[i].members.is_subset_of(&subgroups[j].members)
        });
        subgroups[i].flags.maximal = !covered;
    }
    // The whole group is not a proper subgroup, so never "maximal".
    let full = count - 1;
    subgroups[full].flags.maximal = false;

    let mut maximal_cyclic_ids = Vec::new();
    for i in 0..count {
        if !subgroups[i].flags.cyclic {
            continue;
        }
        let inside_larger_cyclic = (0..count).any(|j| {
            j != i
                && subgroups[j].flags.cyclic
                && subgroups[j].order > subgroups[i].order
                && subgroups[j].order % subgroups[i].order == 0
                && subgroups[i].members.is_subset_of(&subgroups[j].members)
        });
        if !inside_larger_cyclic {
            subgroups[i].flags.maximal_cyclic = true;
            maximal_cyclic_ids.push(i);
        }
    }

    Ok(Lattice {
        group: Arc::clone(g),
        subgroups,
        index_of,
        maximal_cyclic_ids,
        conjugation,
    })
}

/// Quotient group G/N on cosets; requires N normal.
pub fn quotient(g: &Group, n_mask: &Mask) -> Result<Group> {
    let n = g.order();
    let closed = closure_mask(g, n_mask);
    if &closed != n_mask {
        return Err(Error::NotSubgroup("quotient by a non-subgroup".into()));
    }
    if !is_normal_mask(g, n_mask) {
        return Err(Error::NotNormal);
    }
    let mut coset_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for h in n_mask.iter_ones() {
            coset_of[g.mul(x, h)] = id;
        }
    }
    let q = reps.len();
    let mut table = vec![0 as Elem; q * q];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * q + j] = coset_of[g.mul(a, b)] as Elem;
        }
    }
    let labels = reps
        .iter()
        .enumerate()
        .map(|(i, &r)| if i == 0 { "N".into() } else { format!("{}N", g.label(r)) })
        .collect();
    Group::from_table(table, labels, format!("({})/N", g.origin()), None)
}

/// N is cyclically embedded when <N, x> is cyclic for every x. Requires N
/// normal, matching the context in which the notion is used.
pub fn is_cyclically_embedded(g: &Group, n_mask: &Mask) -> Result<bool> {
    if !is_normal_mask(g, n_mask) {
        return Err(Error::NotNormal);
    }
    let n = g.order();
    for x in 0..n {
        let mut seed = n_mask.clone();
        seed.set(x);
        let joined = closure_mask(g, &seed);
        if !is_cyclic_mask(g, &joined) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Standalone group on a subgroup's elements (delegates to group-core).
pub fn subgroup_as_group(g: &Group, s: &Subgroup) -> Result<Group> {
    subgroup_group(g, &s.members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{
        cyclic, dihedral, direct_product, elementary_abelian, generalized_quaternion,
        is_isomorphic, matrix_gl2_automorphism, semidirect_product,
    };

    fn handle(g: Group) -> GroupHandle {
        Arc::new(g)
    }

    fn q8() -> GroupHandle {
        handle(generalized_quaternion(2).unwrap())
    }

    fn a4() -> GroupHandle {
        let e = elementary_abelian(2, 2).unwrap();
        let m = matrix_gl2_automorphism(&e, [[0, 1], [1, 1]]).unwrap();
        handle(semidirect_product(&e, 3, &m).unwrap())
    }

    /// Independent oracle: closure test over every subset, feasible for
    /// |G| <= 16.
    fn subgroup_count_by_subset_scan(g: &Group) -> usize {
        let n = g.order();
        assert!(n <= 16);
        let mut count = 0;
        for bits in 0u32..1 << n {
            if bits & 1 == 0 {
                continue; // must contain the identity
            }
            let get = |x: usize| bits >> x & 1 == 1;
            let mut ok = true;
            'outer: for a in 0..n {
                if !get(a) {
                    continue;
                }
                if !get(g.inv(a)) {
                    ok = false;
                    break;
                }
                for b in 0..n {
                    if get(b) && !get(g.mul(a, b)) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn closure_examples() {
        let q = q8();
        // <i> has order 4
        let s = closure(&q, &Mask::singleton(8, 1));
        assert_eq!(s.order, 4);
        assert!(s.flags.cyclic);

        // empty seed gives the trivial subgroup
        let t = closure(&q, &Mask::empty(8));
        assert_eq!(t.order, 1);

        // <r^2, s> in D8 is a Klein four subgroup
        let d = handle(dihedral(4).unwrap());
        let mut seed = Mask::empty(8);
        seed.set(2); // r^2
        seed.set(4); // s
        let k = closure(&d, &seed);
        assert_eq!(k.order, 4);
        assert!(!k.flags.cyclic);
    }

    #[test]
    fn lattice_counts_match_subset_scan_oracle() {
        let cases: Vec<GroupHandle> = vec![
            q8(),
            handle(dihedral(4).unwrap()),
            a4(),
            handle(cyclic(12).unwrap()),
            handle(elementary_abelian(2, 3).unwrap()),
            handle(direct_product(&cyclic(4).unwrap(), &cyclic(2).unwrap()).unwrap()),
        ];
        for g in cases {
            let l = build_lattice(&g).unwrap();
            let oracle = subgroup_count_by_subset_scan(&g);
            assert_eq!(l.len(), oracle, "{}", g.origin());
        }
    }

    #[test]
    fn q8_lattice_structure() {
        let l = build_lattice(&q8()).unwrap();
        assert_eq!(l.len(), 6);
        let orders: Vec<usize> = l.subgroups().iter().map(|s| s.order).collect();
        assert_eq!(orders, vec![1, 2, 4, 4, 4, 8]);
        // every proper subgroup of Q8 is cyclic and normal
        assert!(l.subgroups().iter().all(|s| s.flags.cyclic || s.order == 8));
        assert!(l.subgroups().iter().all(|s| s.flags.normal));
    }

    #[test]
    fn a4_lattice_structure() {
        let l = build_lattice(&a4()).unwrap();
        assert_eq!(l.len(), 10);
        let mc = l.maximal_cyclic_ids();
        assert_eq!(mc.len(), 7);
        let mut orders: Vec<usize> = mc.iter().map(|&i| l.subgroup(i).order).collect();
        orders.sort();
        assert_eq!(orders, vec![2, 2, 2, 3, 3, 3, 3]);
    }

    #[test]
    fn cyclic_prime_has_two_subgroups() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            let l = build_lattice(&handle(cyclic(p).unwrap())).unwrap();
            assert_eq!(l.len(), 2);
        }
    }

    #[test]
    fn maximal_cyclic_union_covers_group() {
        for g in [q8(), a4(), handle(dihedral(6).unwrap()), handle(cyclic(12).unwrap())] {
            let l = build_lattice(&g).unwrap();
            let mut u = Mask::empty(g.order());
            for &i in l.maximal_cyclic_ids() {
                u.union_with(&l.subgroup(i).members);
            }
            assert_eq!(u.count(), g.order(), "{}", g.origin());
        }
    }

    #[test]
    fn distinguished_subgroups() {
        let q = q8();
        let l = build_lattice(&q).unwrap();
        let d = l.distinguished();
        assert_eq!(d.center.count(), 2);

        let a = a4();
        let la = build_lattice(&a).unwrap();
        let da = la.distinguished();
        assert_eq!(da.commutator.count(), 4); // V4

        // Frattini of Z4 x Z2: the square of the order-4 generator.
        let z42 = handle(direct_product(&cyclic(4).unwrap(), &cyclic(2).unwrap()).unwrap());
        let lz = build_lattice(&z42).unwrap();
        let f = lz.distinguished().frattini;
        assert_eq!(f.count(), 2);
        // the nonidentity element of the Frattini subgroup has order 2 and is
        // a square of an order-4 element
        let elt = f.iter_ones().find(|&x| x != 0).unwrap();
        assert_eq!(z42.element_order(elt), 2);
        assert!((0..z42.order())
            .any(|x| z42.element_order(x) == 4 && z42.mul(x, x) == elt));
    }

    #[test]
    fn frattini_of_trivial_group_is_trivial() {
        let t = handle(cyclic(1).unwrap());
        let l = build_lattice(&t).unwrap();
        assert_eq!(l.frattini_mask().count(), 1);
    }

    #[test]
    fn quotient_examples() {
        let q = q8();
        let l = build_lattice(&q).unwrap();
        let d = l.distinguished();
        let quo = quotient(&q, &d.center).unwrap();
        assert_eq!(quo.order(), 4);
        assert!(is_isomorphic(&quo, &elementary_abelian(2, 2).unwrap()));

        // quotient by the trivial subgroup is G itself
        let triv = Mask::singleton(8, 0);
        let same = quotient(&q, &triv).unwrap();
        assert!(is_isomorphic(&same, &q));

        // quotient by G is trivial
        let full = Mask::full(8);
        let one = quotient(&q, &full).unwrap();
        assert_eq!(one.order(), 1);
    }

    #[test]
    fn quotient_rejects_non_normal() {
        let s3 = handle(dihedral(3).unwrap());
        // a reflection generates a non-normal C2
        let refl = (0..6).find(|&x| x >= 3).unwrap();
        let sub = closure_mask(&s3, &Mask::singleton(6, refl));
        assert!(matches!(quotient(&s3, &sub), Err(Error::NotNormal)));
    }

    #[test]
    fn cyclically_embedded_cases() {
        let q = q8();
        let z = center_mask(&q);
        assert!(is_cyclically_embedded(&q, &z).unwrap());

        let e = handle(elementary_abelian(2, 2).unwrap());
        let c2 = closure_mask(&e, &Mask::singleton(4, 1));
        assert!(!is_cyclically_embedded(&e, &c2).unwrap());

        let c12 = handle(cyclic(12).unwrap());
        let l = build_lattice(&c12).unwrap();
        for s in l.subgroups() {
            assert!(is_cyclically_embedded(&c12, &s.members).unwrap());
        }
    }

    #[test]
    fn cyclically_embedded_implies_central() {
        for g in [q8(), a4(), handle(dihedral(4).unwrap())] {
            let l = build_lattice(&g).unwrap();
            let z = center_mask(&g);
            for &i in &l.normal_ids() {
                let s = l.subgroup(i);
                if is_cyclically_embedded(&g, &s.members).unwrap() {
                    assert!(s.members.is_subset_of(&z), "{}", g.origin());
                }
            }
        }
    }

    #[test]
    fn sylow_examples() {
        let a = a4();
        let l = build_lattice(&a).unwrap();
        let syl2 = l.sylow(2).unwrap();
        assert_eq!(l.subgroup(syl2).order, 4);
        assert!(!l.subgroup(syl2).flags.cyclic);

        let d12 = handle(dihedral(6).unwrap());
        let l = build_lattice(&d12).unwrap();
        let syl3 = l.sylow(3).unwrap();
        assert_eq!(l.subgroup(syl3).order, 3);

        let q = q8();
        let l = build_lattice(&q).unwrap();
        let syl = l.sylow(2).unwrap();
        assert_eq!(syl, l.full_id());
        assert!(!l.is_proper(syl));
        assert!(l.sylow(3).is_err());
    }

    #[test]
    fn conjugation_preserves_order_and_permutes() {
        for g in [a4(), handle(dihedral(6).unwrap())] {
            let l = build_lattice(&g).unwrap();
            for c in 0..g.order() {
                let mut seen = vec![false; l.len()];
                for i in 0..l.len() {
                    let j = l.conjugate_id(i, c);
                    assert_eq!(l.subgroup(i).order, l.subgroup(j).order);
                    assert!(!seen[j]);
                    seen[j] = true;
                }
            }
        }
    }
}
