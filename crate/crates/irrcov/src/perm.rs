//! Permutation-generated groups (A_n, S_n, and friends), converted to
//! Cayley tables.

use crate::error::{Error, Result};
use crate::group::{build_indexed, Group, DEFAULT_ORDER_CAP};

/// A permutation of {0..k-1} as an image vector.
pub type Permutation = Vec<u8>;

/// `a` then `b`: (a*b)(x) = b(a(x)).
pub fn compose(a: &Permutation, b: &Permutation) -> Permutation {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn identity_perm(k: usize) -> Permutation {
    (0..k as u8).collect()
}

/// Builds a permutation from 1-based disjoint cycles, e.g. `&[&[1,2,3]]`.
pub fn from_cycles(k: usize, cycles: &[&[u8]]) -> Permutation {
    let mut p = identity_perm(k);
    for cyc in cycles {
        for w in 0..cyc.len() {
            let from = cyc[w] - 1;
            let to = cyc[(w + 1) % cyc.len()] - 1;
            p[from as usize] = to;
        }
    }
    p
}

/// Cycle notation with 1-based points; identity prints as "()".
pub fn cycle_label(p: &Permutation) -> String {
    let k = p.len();
    let mut seen = vec![false; k];
    let mut out = String::new();
    for s in 0..k {
        if seen[s] || p[s] as usize == s {
            seen[s] = true;
            continue;
        }
        out.push('(');
        let mut x = s;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(x + 1).to_string());
            first = false;
            x = p[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Closure of the generators under composition, then a Cayley table.
/// Fails if the closure exceeds the order cap.
pub fn build_permutation_group(generators: &[Permutation], origin: &str) -> Result<Group> {
    if generators.is_empty() {
        return Err(Error::InvalidParameter("need at least one generator".into()));
    }
    let k = generators[0].len();
    if generators.iter().any(|g| g.len() != k) {
        return Err(Error::InvalidParameter("generators act on different point counts".into()));
    }
    let mut elems: Vec<Permutation> = vec![identity_perm(k)];
    let mut seen: std::collections::HashSet<Permutation> = elems.iter().cloned().collect();
    let mut head = 0;
    while head < elems.len() {
        let cur = elems[head].clone();
        head += 1;
        for gen in generators {
            let next = compose(&cur, gen);
            if seen.insert(next.clone()) {
                if elems.len() >= DEFAULT_ORDER_CAP {
                    return Err(Error::OrderCap {
                        order: elems.len() + 1,
                        cap: DEFAULT_ORDER_CAP,
                    });
                }
                elems.push(next);
            }
        }
    }
    // BFS order already puts the identity first.
    build_indexed(elems, compose, cycle_label, origin.to_string(), None)
}

/// Alternating group on n points, generated by the 3-cycles (1 2 k).
pub fn alternating(n: u32) -> Result<Group> {
    if n < 3 {
        return Err(Error::InvalidParameter("alternating requires n >= 3".into()));
    }
    let gens: Vec<Permutation> = (3..=n as u8)
        .map(|k| from_cycles(n as usize, &[&[1, 2, k]]))
        .collect();
    build_permutation_group(&gens, &format!("A{n}"))
}

/// Symmetric group on n points.
pub fn symmetric(n: u32) -> Result<Group> {
    if n < 2 {
        return Err(Error::InvalidParameter("symmetric requires n >= 2".into()));
    }
    let mut gens: Vec<Permutation> = vec![from_cycles(n as usize, &[&[1, 2]])];
    if n > 2 {
        let full: Vec<u8> = (1..=n as u8).collect();
        gens.push(from_cycles(n as usize, &[&full]));
    }
    build_permutation_group(&gens, &format!("S{n}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{is_isomorphic, predicates};

    #[test]
    fn closure_orders() {
        let a5 = alternating(5).unwrap();
        assert_eq!(a5.order(), 60);
        let s4 = symmetric(4).unwrap();
        assert_eq!(s4.order(), 24);
        let c3 = build_permutation_group(&[from_cycles(3, &[&[1, 2, 3]])], "C3").unwrap();
        assert_eq!(c3.order(), 3);
        assert!(is_isomorphic(&c3, &crate::group::cyclic(3).unwrap()));
    }

    #[test]
    fn spec_generators_for_a5() {
        let g = build_permutation_group(
            &[from_cycles(5, &[&[1, 2, 3, 4, 5]]), from_cycles(5, &[&[1, 2, 3]])],
            "A5",
        )
        .unwrap();
        assert_eq!(g.order(), 60);
        assert!(!predicates(&g).solvable);
    }

    #[test]
    fn a4_matches_semidirect_construction() {
        let a4 = alternating(4).unwrap();
        let e = crate::group::elementary_abelian(2, 2).unwrap();
        let m = crate::group::matrix_gl2_automorphism(&e, [[0, 1], [1, 1]]).unwrap();
        let sd = crate::group::semidirect_product(&e, 3, &m).unwrap();
        assert!(is_isomorphic(&a4, &sd));
    }

    #[test]
    fn cap_guard() {
        assert!(alternating(7).is_err()); // order 2520
    }

    #[test]
    fn labels_are_cycles() {
        let s3 = symmetric(3).unwrap();
        assert_eq!(s3.label(0), "()");
        assert!(s3.labels().iter().any(|l| l == "(1 2)"));
    }
}
