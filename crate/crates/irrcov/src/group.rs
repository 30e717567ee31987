//! Finite groups as immutable multiplication tables.
//!
//! A [`Group`] stores the full Cayley table over element ids `0..order`,
//! with the identity pinned at id 0. Element ids carry no meaning beyond a
//! single instance; anything comparable across groups goes through
//! isomorphism-invariant quantities (orders, histograms, predicates).

use std::collections::HashMap;
use std::sync::Arc;

use crate::arith::{gcd, is_prime, lcm, prime_divisors};
use crate::error::{Error, Result};
use crate::mask::Mask;

/// Default ceiling on constructed group orders. Cayley tables are O(order^2),
/// so constructors fail loudly past this rather than degrade.
pub const DEFAULT_ORDER_CAP: usize = 512;

pub type Elem = u16;

/// Parameterized base-family constructors, as accepted by [`base_group`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseKind {
    /// Z_n, n >= 1.
    Cyclic(u32),
    /// D_{2n} of order 2n, n >= 2.
    Dihedral(u32),
    /// Generalized quaternion of order 2^(k+1), k >= 2.
    GeneralizedQuaternion(u32),
    /// Z_p^k, p prime, k >= 1.
    ElementaryAbelian(u32, u32),
    /// Modular p-group of order p^n, n >= 3: b a b^-1 = a^(1+p^(n-2)).
    Modular(u32, u32),
    /// Semidihedral of order 2^n, n >= 4: b a b^-1 = a^(-1+2^(n-2)).
    Semidihedral(u32),
    /// Heisenberg group of order p^3, p an odd prime.
    Heisenberg(u32),
}

impl BaseKind {
    pub fn order(&self) -> Option<u64> {
        Some(match *self {
            BaseKind::Cyclic(n) => n as u64,
            BaseKind::Dihedral(n) => 2 * n as u64,
            BaseKind::GeneralizedQuaternion(k) => 1u64.checked_shl(k + 1)?,
            BaseKind::ElementaryAbelian(p, k) => (p as u64).checked_pow(k)?,
            BaseKind::Modular(p, n) => (p as u64).checked_pow(n)?,
            BaseKind::Semidihedral(n) => 1u64.checked_shl(n)?,
            BaseKind::Heisenberg(p) => (p as u64).checked_pow(3)?,
        })
    }
}

#[derive(Clone)]
pub struct Group {
    order: usize,
    mul: Vec<Elem>,
    identity: Elem,
    inv: Vec<Elem>,
    element_orders: Vec<u32>,
    labels: Vec<String>,
    origin: String,
    base_kind: Option<BaseKind>,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Group({}, order {})", self.origin, self.order)
    }
}

impl Group {
    /// Build from a raw table. Checks the identity and inverse axioms
    /// (cheap); associativity is left to [`Group::verify_axioms`].
    pub fn from_table(
        mul: Vec<Elem>,
        labels: Vec<String>,
        origin: String,
        base_kind: Option<BaseKind>,
    ) -> Result<Group> {
        let order = labels.len();
        if order == 0 || mul.len() != order * order {
            return Err(Error::InvalidParameter(format!(
                "table size {} does not match {order} labels",
                mul.len()
            )));
        }
        // id 0 must act as a two-sided identity
        for x in 0..order {
            if mul[x] as usize != x || mul[x * order] as usize != x {
                return Err(Error::InvalidParameter(
                    "element 0 is not a two-sided identity".into(),
                ));
            }
        }
        let mut inv = vec![Elem::MAX; order];
        for x in 0..order {
            for y in 0..order {
                if mul[x * order + y] == 0 {
                    if mul[y * order + x] != 0 {
                        return Err(Error::InvalidParameter(format!(
                            "one-sided inverse at element {x}"
                        )));
                    }
                    inv[x] = y as Elem;
                }
            }
            if inv[x] == Elem::MAX {
                return Err(Error::InvalidParameter(format!("element {x} has no inverse")));
            }
        }
        let mut g = Group {
            order,
            mul,
            identity: 0,
            inv,
            element_orders: Vec::new(),
            labels,
            origin,
            base_kind,
        };
        let mut orders = Vec::with_capacity(order);
        for x in 0..order {
            orders.push(g.compute_element_order(x).ok_or_else(|| {
                Error::InvalidParameter(format!("powers of element {x} never reach the identity"))
            })?);
        }
        g.element_orders = orders;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, x: usize, k: u64) -> usize {
        let mut acc = self.identity();
        let mut base = x;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    fn compute_element_order(&self, x: usize) -> Option<u32> {
        let mut y = x;
        let mut k = 1u32;
        while y != 0 {
            if k as usize > self.order {
                return None;
            }
            y = self.mul(y, x);
            k += 1;
        }
        Some(k)
    }

    /// Least k >= 1 with x^k = identity.
    pub fn element_order(&self, x: usize) -> u32 {
        self.element_orders[x]
    }

    pub fn element_orders(&self) -> &[u32] {
        &self.element_orders
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn base_kind(&self) -> Option<BaseKind> {
        self.base_kind
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.element_orders.iter().any(|&o| o as usize == self.order)
    }

    pub fn exponent(&self) -> u64 {
        self.element_orders.iter().fold(1u64, |acc, &o| lcm(acc, o as u64))
    }

    /// Sorted (element order, count) histogram; the first line of defense in
    /// isomorphism filtering.
    pub fn order_histogram(&self) -> Vec<(u32, u32)> {
        let mut map = std::collections::BTreeMap::new();
        for &o in &self.element_orders {
            *map.entry(o).or_insert(0u32) += 1;
        }
        map.into_iter().collect()
    }

    /// Full axiom sweep: O(order^3) associativity plus identity/inverse
    /// re-checks. Returns the first violating triple as a witness.
    pub fn verify_axioms(&self) -> std::result::Result<(), String> {
        let n = self.order;
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(format!("identity fails at {x}"));
            }
            let ix = self.inv(x);
            if self.mul(x, ix) != 0 || self.mul(ix, x) != 0 {
                return Err(format!("inverse fails at {x}"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("associativity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds a group from an abstract element list plus a multiplication rule.
/// `elems[0]` must be the identity.
pub(crate) fn build_indexed<T, F, L>(
    elems: Vec<T>,
    mul: F,
    label: L,
    origin: String,
    base_kind: Option<BaseKind>,
) -> Result<Group>
where
    T: std::hash::Hash + Eq + Clone,
    F: Fn(&T, &T) -> T,
    L: Fn(&T) -> String,
{
    let n = elems.len();
    let index: HashMap<&T, usize> = elems.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut table = vec![0 as Elem; n * n];
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            let c = mul(a, b);
            let k = *index.get(&c).ok_or_else(|| {
                Error::InvalidParameter("multiplication left the element set".into())
            })?;
            table[i * n + j] = k as Elem;
        }
    }
    let labels = elems.iter().map(|t| label(t)).collect();
    Group::from_table(table, labels, origin, base_kind)
}

fn check_cap(order: u64) -> Result<()> {
    if order as usize > DEFAULT_ORDER_CAP || order == 0 {
        Err(Error::OrderCap {
            order: order as usize,
            cap: DEFAULT_ORDER_CAP,
        })
    } else {
        Ok(())
    }
}

/// Dispatcher over the named base families.
pub fn base_group(kind: BaseKind) -> Result<Group> {
    match kind {
        BaseKind::Cyclic(n) => cyclic(n),
        BaseKind::Dihedral(n) => dihedral(n),
        BaseKind::GeneralizedQuaternion(k) => generalized_quaternion(k),
        BaseKind::ElementaryAbelian(p, k) => elementary_abelian(p, k),
        BaseKind::Modular(p, n) => modular(p, n),
        BaseKind::Semidihedral(n) => semidihedral(n),
        BaseKind::Heisenberg(p) => heisenberg(p),
    }
}

pub fn cyclic(n: u32) -> Result<Group> {
    if n < 1 {
        return Err(Error::InvalidParameter("cyclic requires n >= 1".into()));
    }
    check_cap(n as u64)?;
    build_indexed(
        (0..n).collect(),
        |a, b| (a + b) % n,
        |&i| match i {
            0 => "1".into(),
            1 => "g".into(),
            i => format!("g^{i}"),
        },
        format!("C{n}"),
        Some(BaseKind::Cyclic(n)),
    )
}

fn rotation_word(gen: &str, i: u32) -> String {
    match i {
        0 => String::new(),
        1 => gen.to_string(),
        i => format!("{gen}^{i}"),
    }
}

fn two_part_label(gen: &str, i: u32, flip: &str, f: u32) -> String {
    let r = rotation_word(gen, i);
    let s = match f {
        0 => String::new(),
        1 => flip.to_string(),
        f => format!("{flip}^{f}"),
    };
    match (r.is_empty(), s.is_empty()) {
        (true, true) => "1".into(),
        (false, true) => r,
        (true, false) => s,
        (false, false) => format!("{r}*{s}"),
    }
}

pub fn dihedral(n: u32) -> Result<Group> {
    if n < 2 {
        return Err(Error::InvalidParameter("dihedral requires n >= 2".into()));
    }
    check_cap(2 * n as u64)?;
    let elems: Vec<(u32, u32)> = (0..2).flat_map(|f| (0..n).map(move |i| (i, f))).collect();
    build_indexed(
        elems,
        |&(i, f), &(j, g)| {
            let j = if f == 1 { (n - j) % n } else { j };
            ((i + j) % n, f ^ g)
        },
        |&(i, f)| two_part_label("r", i, "s", f),
        format!("D{}", 2 * n),
        Some(BaseKind::Dihedral(n)),
    )
}

pub fn generalized_quaternion(k: u32) -> Result<Group> {
    if k < 2 {
        return Err(Error::InvalidParameter(
            "generalized quaternion requires k >= 2".into(),
        ));
    }
    check_cap(1u64 << (k + 1))?;
    let m = 1u32 << k;
    let elems: Vec<(u32, u32)> = (0..2).flat_map(|f| (0..m).map(move |i| (i, f))).collect();
    build_indexed(
        elems,
        |&(i, f), &(j, g)| {
            let j = if f == 1 { (m - j) % m } else { j };
            let mut e = (i + j) % m;
            if f == 1 && g == 1 {
                e = (e + m / 2) % m;
            }
            (e, f ^ g)
        },
        |&(i, f)| two_part_label("x", i, "y", f),
        format!("Q{}", 2 * m),
        Some(BaseKind::GeneralizedQuaternion(k)),
    )
}

pub fn elementary_abelian(p: u32, k: u32) -> Result<Group> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("elementary abelian requires k >= 1".into()));
    }
    let order = (p as u64)
        .checked_pow(k)
        .ok_or_else(|| Error::InvalidParameter("order overflow".into()))?;
    check_cap(order)?;
    // Vectors over F_p, little-endian digits of the element id.
    let elems: Vec<Vec<u32>> = (0..order as u32)
        .map(|n| (0..k).map(|t| n / p.pow(t) % p).collect())
        .collect();
    build_indexed(
        elems,
        |a, b| a.iter().zip(b).map(|(x, y)| (x + y) % p).collect(),
        |v| {
            let body = v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
            format!("({body})")
        },
        format!("E{p}^{k}"),
        Some(BaseKind::ElementaryAbelian(p, k)),
    )
}

/// Common core of the modular and semidihedral families: `a^M = b^P = 1`,
/// `b a b^-1 = a^u`.
fn metacyclic_p_group(
    m: u32,
    p: u32,
    u: u32,
    origin: String,
    kind: BaseKind,
) -> Result<Group> {
    let mut upow = vec![1u64; p as usize];
    for f in 1..p as usize {
        upow[f] = upow[f - 1] * u as u64 % m as u64;
    }
    let elems: Vec<(u32, u32)> = (0..p).flat_map(|f| (0..m).map(move |i| (i, f))).collect();
    build_indexed(
        elems,
        |&(i, f), &(j, g)| {
            let j2 = (j as u64 * upow[f as usize] % m as u64) as u32;
            ((i + j2) % m, (f + g) % p)
        },
        |&(i, f)| two_part_label("a", i, "b", f),
        origin,
        Some(kind),
    )
}

pub fn modular(p: u32, n: u32) -> Result<Group> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    if n < 3 {
        return Err(Error::InvalidParameter("modular requires n >= 3".into()));
    }
    let order = (p as u64)
        .checked_pow(n)
        .ok_or_else(|| Error::InvalidParameter("order overflow".into()))?;
    check_cap(order)?;
    let m = p.pow(n - 1);
    let u = 1 + p.pow(n - 2);
    metacyclic_p_group(m, p, u, format!("Mod{p}^{n}"), BaseKind::Modular(p, n))
}

pub fn semidihedral(n: u32) -> Result<Group> {
    if n < 4 {
        return Err(Error::InvalidParameter("semidihedral requires n >= 4".into()));
    }
    check_cap(1u64 << n)?;
    let m = 1u32 << (n - 1);
    let u = m - 1 + (1 << (n - 2));
    metacyclic_p_group(m, 2, u % m, format!("SDih{}", 1u64 << n), BaseKind::Semidihedral(n))
}

pub fn heisenberg(p: u32) -> Result<Group> {
    if !is_prime(p as u64) || p == 2 {
        return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
    }
    let order = (p as u64).pow(3);
    check_cap(order)?;
    let elems: Vec<(u32, u32, u32)> = (0..p)
        .flat_map(|a| (0..p).flat_map(move |b| (0..p).map(move |c| (a, b, c))))
        .collect();
    // Reorder so the identity (0,0,0) comes first; it already does.
    build_indexed(
        elems,
        |&(a, b, c), &(x, y, z)| ((a + x) % p, (b + y) % p, (c + z + a * y) % p),
        |&(a, b, c)| format!("({a},{b},{c})"),
        format!("Heis{p}"),
        Some(BaseKind::Heisenberg(p)),
    )
}

pub fn direct_product(g: &Group, h: &Group) -> Result<Group> {
    direct_product_capped(g, h, DEFAULT_ORDER_CAP)
}

pub fn direct_product_capped(g: &Group, h: &Group, cap: usize) -> Result<Group> {
    let order = g.order() as u64 * h.order() as u64;
    if order as usize > cap {
        return Err(Error::OrderCap {
            order: order as usize,
            cap,
        });
    }
    let hn = h.order();
    let elems: Vec<(usize, usize)> = (0..g.order())
        .flat_map(|a| (0..hn).map(move |b| (a, b)))
        .collect();
    build_indexed(
        elems,
        |&(a, b), &(c, d)| (g.mul(a, c), h.mul(b, d)),
        |&(a, b)| format!("({},{})", g.label(a), h.label(b)),
        format!("({}x{})", g.origin(), h.origin()),
        None,
    )
}

/// A group automorphism, stored as the image permutation over element ids.
#[derive(Clone, Debug)]
pub struct Automorphism {
    map: Vec<Elem>,
}

impl Automorphism {
    /// Validates bijectivity and multiplicativity against `g`.
    pub fn new(g: &Group, map: Vec<Elem>) -> Result<Automorphism> {
        let n = g.order();
        if map.len() != n {
            return Err(Error::NotAnAutomorphism("wrong map length".into()));
        }
        let mut seen = vec![false; n];
        for &y in &map {
            let y = y as usize;
            if y >= n || seen[y] {
                return Err(Error::NotAnAutomorphism("map is not a bijection".into()));
            }
            seen[y] = true;
        }
        if map[g.identity()] as usize != g.identity() {
            return Err(Error::NotAnAutomorphism("identity not fixed".into()));
        }
        for x in 0..n {
            for y in 0..n {
                let lhs = map[g.mul(x, y)] as usize;
                let rhs = g.mul(map[x] as usize, map[y] as usize);
                if lhs != rhs {
                    return Err(Error::NotAnAutomorphism(format!(
                        "map({}*{}) != map({})*map({})",
                        g.label(x),
                        g.label(y),
                        g.label(x),
                        g.label(y)
                    )));
                }
            }
        }
        Ok(Automorphism { map })
    }

    pub fn identity(g: &Group) -> Automorphism {
        Automorphism {
            map: (0..g.order() as Elem).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            map: other.map.iter().map(|&x| self.map[x as usize]).collect(),
        }
    }

    /// Order of the underlying permutation (lcm of cycle lengths).
    pub fn permutation_order(&self) -> u64 {
        let n = self.map.len();
        let mut seen = vec![false; n];
        let mut out = 1u64;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0u64;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.map[x] as usize;
                len += 1;
            }
            out = lcm(out, len);
        }
        out
    }
}

/// Power map x -> x^u on a cyclic group; requires gcd(u, |G|) = 1.
pub fn power_map_automorphism(g: &Group, u: u64) -> Result<Automorphism> {
    let n = g.order() as u64;
    if !g.is_cyclic() {
        return Err(Error::NotAnAutomorphism(format!(
            "power map target {} is not cyclic",
            g.origin()
        )));
    }
    if gcd(u % n, n) != 1 {
        return Err(Error::NotAnAutomorphism(format!("gcd({u}, {n}) != 1")));
    }
    let map = (0..g.order()).map(|x| g.pow(x, u) as Elem).collect();
    Automorphism::new(g, map)
}

/// GL_2(F_p) action on an elementary abelian group of rank 2, built by
/// [`elementary_abelian`]. Matrix rows are images of the basis vectors.
pub fn matrix_gl2_automorphism(g: &Group, m: [[u32; 2]; 2]) -> Result<Automorphism> {
    let p = match g.base_kind() {
        Some(BaseKind::ElementaryAbelian(p, 2)) => p,
        _ => {
            return Err(Error::NotAnAutomorphism(format!(
                "matrix action target {} is not an elementary abelian rank-2 group",
                g.origin()
            )))
        }
    };
    let det = (m[0][0] as i64 * m[1][1] as i64 - m[0][1] as i64 * m[1][0] as i64)
        .rem_euclid(p as i64);
    if det == 0 {
        return Err(Error::NotAnAutomorphism("matrix is singular mod p".into()));
    }
    let m = [[m[0][0] % p, m[0][1] % p], [m[1][0] % p, m[1][1] % p]];
    let map = (0..g.order())
        .map(|x| {
            let a = x as u32 % p;
            let b = x as u32 / p;
            let a2 = (m[0][0] * a + m[1][0] * b) % p;
            let b2 = (m[0][1] * a + m[1][1] * b) % p;
            (b2 * p + a2) as Elem
        })
        .collect();
    Automorphism::new(g, map)
}

/// The order-3 automorphism of Q_8 rotating i -> j -> k.
pub fn q8_rotation_automorphism(g: &Group) -> Result<Automorphism> {
    if g.base_kind() != Some(BaseKind::GeneralizedQuaternion(2)) {
        return Err(Error::NotAnAutomorphism(format!(
            "q8 rotation target {} is not Q8",
            g.origin()
        )));
    }
    // Generators in the (i, f) enumeration: x = (1,0) at id 1, y = (0,1) at id 4.
    let x = 1;
    let y = 4;
    automorphism_from_generator_images(g, &[(x, y), (y, g.mul(x, y))])
}

/// Extends prescribed generator images to a full automorphism, if one exists.
pub fn automorphism_from_generator_images(
    g: &Group,
    pairs: &[(usize, usize)],
) -> Result<Automorphism> {
    let gens: Vec<usize> = pairs.iter().map(|&(a, _)| a).collect();
    let images: Vec<usize> = pairs.iter().map(|&(_, b)| b).collect();
    match extend_generator_map(g, g, &gens, &images) {
        Some(map) => Automorphism::new(g, map),
        None => Err(Error::NotAnAutomorphism(
            "generator images do not extend to an automorphism".into(),
        )),
    }
}

/// Semidirect product K x| Z_n where the generator of Z_n acts by `alpha`.
pub fn semidirect_product(k: &Group, n: u32, alpha: &Automorphism) -> Result<Group> {
    semidirect_product_capped(k, n, alpha, DEFAULT_ORDER_CAP)
}

pub fn semidirect_product_capped(
    k: &Group,
    n: u32,
    alpha: &Automorphism,
    cap: usize,
) -> Result<Group> {
    if n < 1 {
        return Err(Error::InvalidParameter("complement order must be >= 1".into()));
    }
    if alpha.degree() != k.order() {
        return Err(Error::NotAnAutomorphism("automorphism targets a different group".into()));
    }
    let ord = alpha.permutation_order();
    if n as u64 % ord != 0 {
        return Err(Error::ActionOrder {
            actual: ord,
            n: n as u64,
        });
    }
    let order = k.order() as u64 * n as u64;
    if order as usize > cap {
        return Err(Error::OrderCap {
            order: order as usize,
            cap,
        });
    }
    // alpha^i for i in 0..n
    let mut pows: Vec<Vec<Elem>> = Vec::with_capacity(n as usize);
    pows.push((0..k.order() as Elem).collect());
    for i in 1..n as usize {
        let prev = &pows[i - 1];
        pows.push(prev.iter().map(|&x| alpha.map()[x as usize]).collect());
    }
    let elems: Vec<(usize, u32)> = (0..k.order())
        .flat_map(|a| (0..n).map(move |i| (a, i)))
        .collect();
    build_indexed(
        elems,
        |&(a, i), &(b, j)| {
            let b2 = pows[i as usize][b] as usize;
            (k.mul(a, b2), (i + j) % n)
        },
        |&(a, i)| format!("({},t^{})", k.label(a), i),
        format!("({}:C{})", k.origin(), n),
        None,
    )
}

/// Group-level predicate bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPredicates {
    pub abelian: bool,
    pub nilpotent: bool,
    pub solvable: bool,
    pub exponent: u64,
    pub prime_divisors: Vec<u64>,
}

/// Elements commuting with everything.
pub fn center_mask(g: &Group) -> Mask {
    let n = g.order();
    let mut m = Mask::empty(n);
    for x in 0..n {
        if (0..n).all(|y| g.mul(x, y) == g.mul(y, x)) {
            m.set(x);
        }
    }
    m
}

/// Elements commuting with every element of `of`.
pub fn centralizer_mask(g: &Group, of: &Mask) -> Mask {
    let n = g.order();
    let mut m = Mask::empty(n);
    for x in 0..n {
        if of.iter_ones().all(|y| g.mul(x, y) == g.mul(y, x)) {
            m.set(x);
        }
    }
    m
}

/// Subgroup closure of a seed set: smallest subgroup containing it.
pub fn closure_mask(g: &Group, seed: &Mask) -> Mask {
    let n = g.order();
    let mut mask = Mask::empty(n);
    mask.set(g.identity());
    let mut members: Vec<usize> = vec![g.identity()];
    let mut queue: Vec<usize> = seed.iter_ones().collect();
    while let Some(z) = queue.pop() {
        if mask.get(z) {
            continue;
        }
        mask.set(z);
        members.push(z);
        for idx in 0..members.len() {
            let y = members[idx];
            let a = g.mul(z, y);
            if !mask.get(a) {
                queue.push(a);
            }
            let b = g.mul(y, z);
            if !mask.get(b) {
                queue.push(b);
            }
        }
    }
    mask
}

/// Closure of all commutators of elements drawn from `within`.
pub fn commutator_mask(g: &Group, within: &Mask) -> Mask {
    let mut seed = Mask::empty(g.order());
    let elems: Vec<usize> = within.iter_ones().collect();
    for &x in &elems {
        for &y in &elems {
            // [x, y] = x y x^-1 y^-1
            let c = g.mul(g.mul(g.mul(x, y), g.inv(x)), g.inv(y));
            seed.set(c);
        }
    }
    closure_mask(g, &seed)
}

pub fn predicates(g: &Group) -> GroupPredicates {
    let n = g.order() as u64;
    let primes = prime_divisors(n);
    let abelian = g.is_abelian();

    // Nilpotency: for each prime p, the set of p-power-order elements must be
    // closed under multiplication (then it is the unique Sylow p-subgroup).
    let nilpotent = if abelian {
        true
    } else {
        primes.iter().all(|&p| {
            let elems: Vec<usize> = (0..g.order())
                .filter(|&x| {
                    let o = g.element_order(x) as u64;
                    o == 1 || prime_divisors(o) == [p]
                })
                .collect();
            let mut mask = Mask::empty(g.order());
            for &x in &elems {
                mask.set(x);
            }
            elems
                .iter()
                .all(|&x| elems.iter().all(|&y| mask.get(g.mul(x, y))))
        })
    };

    // Solvability: derived series must reach the trivial subgroup.
    let solvable = if nilpotent {
        true
    } else {
        let mut cur = Mask::full(g.order());
        loop {
            let next = commutator_mask(g, &cur);
            if next.count() == 1 {
                break true;
            }
            if next == cur {
                break false;
            }
            cur = next;
        }
    };

    GroupPredicates {
        abelian,
        nilpotent,
        solvable,
        exponent: g.exponent(),
        prime_divisors: primes,
    }
}

/// Greedy small generating set: repeatedly adjoin the highest-order element
/// outside the current closure.
pub fn small_generating_set(g: &Group) -> Vec<usize> {
    let n = g.order();
    let mut gens = Vec::new();
    let mut closed = Mask::empty(n);
    closed.set(g.identity());
    while closed.count() < n {
        let pick = (0..n)
            .filter(|&x| !closed.get(x))
            .max_by_key(|&x| (g.element_order(x), std::cmp::Reverse(x)))
            .expect("closure is proper, an outside element exists");
        gens.push(pick);
        let mut seed = closed.clone();
        seed.set(pick);
        closed = closure_mask(g, &seed);
    }
    gens
}

/// Extends `gens -> images` to a homomorphism from <gens> (which must be all
/// of `g`) into `h`, returning the full map when consistent and injective.
pub(crate) fn extend_generator_map(
    g: &Group,
    h: &Group,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<Elem>> {
    let n = g.order();
    let mut map = vec![Elem::MAX; n];
    let mut used = vec![false; h.order()];
    map[g.identity()] = h.identity() as Elem;
    used[h.identity()] = true;
    let mut frontier = vec![g.identity()];
    let mut head = 0;
    while head < frontier.len() {
        let a = frontier[head];
        head += 1;
        let fa = map[a] as usize;
        for (&s, &si) in gens.iter().zip(images) {
            let b = g.mul(a, s);
            let fb = h.mul(fa, si);
            if map[b] == Elem::MAX {
                if used[fb] {
                    return None; // not injective
                }
                map[b] = fb as Elem;
                used[fb] = true;
                frontier.push(b);
            } else if map[b] as usize != fb {
                return None; // inconsistent relation
            }
        }
    }
    if frontier.len() != n {
        return None; // gens do not generate g
    }
    // The BFS checked phi(a*s) = phi(a)*phi(s) for every element/generator
    // pair, which forces multiplicativity by induction on word length.
    Some(map)
}

fn fingerprint(g: &Group) -> (usize, Vec<(u32, u32)>, bool, usize, usize, u64) {
    (
        g.order(),
        g.order_histogram(),
        g.is_abelian(),
        center_mask(g).count(),
        commutator_mask(g, &Mask::full(g.order())).count(),
        g.exponent(),
    )
}

/// Isomorphism test: invariant filtering, then backtracking over generator
/// images with incremental consistency checks.
pub fn is_isomorphic(g: &Group, h: &Group) -> bool {
    if g.order() != h.order() {
        return false;
    }
    if g.order() == 1 {
        return true;
    }
    if fingerprint(g) != fingerprint(h) {
        return false;
    }
    let gens = small_generating_set(g);
    let mut images = Vec::with_capacity(gens.len());
    search_images(g, h, &gens, &mut images)
}

fn search_images(g: &Group, h: &Group, gens: &[usize], images: &mut Vec<usize>) -> bool {
    if images.len() == gens.len() {
        return extend_generator_map(g, h, gens, images).is_some();
    }
    let next = gens[images.len()];
    let want = g.element_order(next);
    for c in 0..h.order() {
        if h.element_order(c) != want {
            continue;
        }
        images.push(c);
        // Partial consistency: the map on <gens so far> must already extend.
        let partial_ok = partial_extends(g, h, gens, images);
        if partial_ok && search_images(g, h, gens, images) {
            images.pop();
            return true;
        }
        images.pop();
    }
    false
}

/// Checks that the partial assignment extends to a monomorphism on the
/// subgroup generated by the assigned generators.
fn partial_extends(g: &Group, h: &Group, gens: &[usize], images: &[usize]) -> bool {
    let k = images.len();
    let n = g.order();
    let mut map = vec![Elem::MAX; n];
    let mut used = vec![false; h.order()];
    map[g.identity()] = h.identity() as Elem;
    used[h.identity()] = true;
    let mut frontier = vec![g.identity()];
    let mut head = 0;
    while head < frontier.len() {
        let a = frontier[head];
        head += 1;
        let fa = map[a] as usize;
        for i in 0..k {
            let b = g.mul(a, gens[i]);
            let fb = h.mul(fa, images[i]);
            if map[b] == Elem::MAX {
                if used[fb] {
                    return false;
                }
                map[b] = fb as Elem;
                used[fb] = true;
                frontier.push(b);
            } else if map[b] as usize != fb {
                return false;
            }
        }
    }
    true
}

/// Re-packages the subgroup given by `mask` as a standalone [`Group`].
/// Element ids are renumbered ascending, which keeps the identity at 0.
pub fn subgroup_group(g: &Group, mask: &Mask) -> Result<Group> {
    let elems: Vec<usize> = mask.iter_ones().collect();
    if elems.is_empty() || elems[0] != g.identity() {
        return Err(Error::NotSubgroup("mask does not contain the identity".into()));
    }
    let index: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let n = elems.len();
    let mut table = vec![0 as Elem; n * n];
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            let c = g.mul(a, b);
            let k = *index
                .get(&c)
                .ok_or_else(|| Error::NotSubgroup("mask not closed under multiplication".into()))?;
            table[i * n + j] = k as Elem;
        }
    }
    let labels = elems.iter().map(|&x| g.label(x).to_string()).collect();
    Group::from_table(table, labels, format!("sub({})", g.origin()), None)
}

pub type GroupHandle = Arc<Group>;
