//! Exact models of small finite groups as multiplication tables.
//!
//! The catalog covers the five isomorphism classes of order 8 plus the
//! nonabelian group of order 56. Tables are built from fixed presentations
//! and then validated against the group axioms, so nothing here depends on an
//! external small-groups database. Element index 0 is always the identity.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

/// Element of a [`GroupTable`], by index. Index 0 is the identity.
pub type Elem = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("element index {0} out of range for group of order {1}")]
    IndexOutOfRange(usize, usize),
    #[error("rank is only defined for groups of prime-power order (got {0})")]
    NotPrimePower(usize),
    #[error("multiset size {size} outside the window [{min}, {max}]")]
    SizeOutsideWindow { size: usize, min: usize, max: usize },
    #[error("the given multiset does not generate the group")]
    NotGenerating,
    #[error("table validation failed: {0}")]
    Invalid(String),
}

/// Identifies which catalog group a table models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupTag {
    C8,
    C4xC2,
    D8,
    Q8,
    E8,
    G56,
}

impl GroupTag {
    pub fn name(self) -> &'static str {
        match self {
            GroupTag::C8 => "C8",
            GroupTag::C4xC2 => "C4xC2",
            GroupTag::D8 => "D8",
            GroupTag::Q8 => "Q8",
            GroupTag::E8 => "E8",
            GroupTag::G56 => "G56",
        }
    }

    pub fn parse(s: &str) -> Option<GroupTag> {
        match s {
            "C8" => Some(GroupTag::C8),
            "C4xC2" => Some(GroupTag::C4xC2),
            "D8" => Some(GroupTag::D8),
            "Q8" => Some(GroupTag::Q8),
            "E8" => Some(GroupTag::E8),
            "G56" => Some(GroupTag::G56),
            _ => None,
        }
    }
}

/// A finite group given by its full multiplication table.
///
/// Immutable after construction; every operation is a pure lookup, so tables
/// can be shared freely across parallel case workers.
#[derive(Debug, Clone)]
pub struct GroupTable {
    order: usize,
    product: Vec<Elem>,
    inverse: Vec<Elem>,
    labels: Vec<String>,
    tag: GroupTag,
}

impl GroupTable {
    /// Builds a table from a raw product map and validates the group axioms.
    pub fn new(
        tag: GroupTag,
        labels: Vec<String>,
        product: Vec<Elem>,
    ) -> Result<GroupTable, GroupError> {
        let order = labels.len();
        if product.len() != order * order {
            return Err(GroupError::Invalid(format!(
                "product table has {} entries, expected {}",
                product.len(),
                order * order
            )));
        }
        let mut inverse = vec![usize::MAX; order];
        for g in 0..order {
            for h in 0..order {
                if product[g * order + h] >= order {
                    return Err(GroupError::Invalid("product entry out of range".into()));
                }
            }
        }
        // identity axioms
        for g in 0..order {
            if product[g * order] != g || product[g] != g {
                return Err(GroupError::Invalid(format!(
                    "index 0 is not a two-sided identity at {g}"
                )));
            }
        }
        // two-sided inverses
        for g in 0..order {
            let mut found = None;
            for h in 0..order {
                if product[g * order + h] == 0 && product[h * order + g] == 0 {
                    found = Some(h);
                    break;
                }
            }
            inverse[g] = found
                .ok_or_else(|| GroupError::Invalid(format!("element {g} has no inverse")))?;
        }
        // full associativity scan; order <= 56 keeps this cheap
        for a in 0..order {
            for b in 0..order {
                let ab = product[a * order + b];
                for c in 0..order {
                    let bc = product[b * order + c];
                    if product[ab * order + c] != product[a * order + bc] {
                        return Err(GroupError::Invalid(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(GroupError::Invalid(format!("duplicate label {l}")));
            }
        }
        Ok(GroupTable {
            order,
            product,
            inverse,
            labels,
            tag,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn label(&self, g: Elem) -> &str {
        &self.labels[g]
    }

    #[inline]
    pub fn mul(&self, g: Elem, h: Elem) -> Elem {
        self.product[g * self.order + h]
    }

    #[inline]
    pub fn inv(&self, g: Elem) -> Elem {
        self.inverse[g]
    }

    /// `g^k` by repeated squaring; `k` may be negative.
    pub fn pow(&self, g: Elem, k: i64) -> Elem {
        let (mut base, mut k) = if k < 0 {
            (self.inv(g), (-k) as u64)
        } else {
            (g, k as u64)
        };
        let mut acc = 0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative order of an element; always divides the group order.
    pub fn elem_order(&self, g: Elem) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    pub fn checked(&self, g: Elem) -> Result<Elem, GroupError> {
        if g < self.order {
            Ok(g)
        } else {
            Err(GroupError::IndexOutOfRange(g, self.order))
        }
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if !in_set[y] {
                        in_set[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        (0..self.order).filter(|&x| in_set[x]).collect()
    }

    pub fn generates(&self, gens: &[Elem]) -> bool {
        self.closure(gens).len() == self.order
    }

    /// Commutator subgroup, by commutator scan plus closure.
    pub fn derived_subgroup(&self) -> Vec<Elem> {
        let mut comms = BTreeSet::new();
        for g in 0..self.order {
            for h in 0..self.order {
                // [g,h] = g^-1 h^-1 g h
                let c = self.mul(self.mul(self.inv(g), self.inv(h)), self.mul(g, h));
                comms.insert(c);
            }
        }
        let gens: Vec<Elem> = comms.into_iter().collect();
        self.closure(&gens)
    }

    pub fn center(&self) -> Vec<Elem> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Common size of irredundant generating sets (Burnside basis rank).
    ///
    /// Computed as the minimum size over generating subsets, and cross-checked
    /// against the size of every irredundant generating subset; the two
    /// computations must agree for prime-power orders.
    pub fn rank(&self) -> Result<usize, GroupError> {
        if !is_prime_power(self.order) {
            return Err(GroupError::NotPrimePower(self.order));
        }
        let mut min_size = None;
        let mut irredundant_sizes = BTreeSet::new();
        for mask in 1u64..(1 << self.order) {
            let set: Vec<Elem> = (0..self.order).filter(|&i| mask >> i & 1 == 1).collect();
            if !self.generates(&set) {
                continue;
            }
            let size = set.len();
            if min_size.map_or(true, |m| size < m) {
                min_size = Some(size);
            }
            let irredundant = (0..set.len()).all(|skip| {
                let sub: Vec<Elem> = set
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &e)| e)
                    .collect();
                !self.generates(&sub)
            });
            if irredundant {
                irredundant_sizes.insert(size);
            }
        }
        let min = min_size.ok_or_else(|| GroupError::Invalid("no generating set".into()))?;
        if irredundant_sizes.len() != 1 || !irredundant_sizes.contains(&min) {
            return Err(GroupError::Invalid(format!(
                "irredundant generating sets of mixed sizes {irredundant_sizes:?}"
            )));
        }
        Ok(min)
    }

    /// All generating subsets (no repeats) of the given size, in lexicographic
    /// order over sorted index sequences.
    pub fn generating_subsets(&self, size: usize) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.subset_rec(1, size, &mut current, &mut out, false);
        out
    }

    /// All multisets of the given size over non-identity elements whose
    /// support generates the group, canonicalized as sorted index sequences.
    ///
    /// The size window `rank <= size <= rank + 2` is enforced; anything larger
    /// cannot come from an irredundant generating set of a group with this
    /// quotient.
    pub fn generating_multisets(&self, size: usize) -> Result<Vec<Vec<Elem>>, GroupError> {
        let rank = self.rank()?;
        if size < rank || size > rank + 2 {
            return Err(GroupError::SizeOutsideWindow {
                size,
                min: rank,
                max: rank + 2,
            });
        }
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.subset_rec(1, size, &mut current, &mut out, true);
        Ok(out)
    }

    fn subset_rec(
        &self,
        from: Elem,
        size: usize,
        current: &mut Vec<Elem>,
        out: &mut Vec<Vec<Elem>>,
        multiset: bool,
    ) {
        if current.len() == size {
            if self.generates(current) {
                out.push(current.clone());
            }
            return;
        }
        for g in from..self.order {
            current.push(g);
            let next = if multiset { g } else { g + 1 };
            self.subset_rec(next, size, current, out, multiset);
            current.pop();
        }
    }

    /// Coset projection modulo a normal subgroup given as a sorted element
    /// list. Returns the quotient table and the projection map; coset ids are
    /// assigned in order of their smallest member, so the identity coset is 0.
    pub fn quotient(&self, normal: &[Elem]) -> Result<(GroupTable, Vec<usize>), GroupError> {
        let nset: BTreeSet<Elem> = normal.iter().copied().collect();
        if !nset.contains(&0) {
            return Err(GroupError::Invalid("normal subgroup must contain 1".into()));
        }
        for &n in &nset {
            for g in 0..self.order {
                let conj = self.mul(self.mul(self.inv(g), n), g);
                if !nset.contains(&conj) {
                    return Err(GroupError::Invalid(format!(
                        "subgroup is not normal: {n}^{g} escapes"
                    )));
                }
            }
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(g);
            for &n in &nset {
                coset_of[self.mul(g, n)] = id;
            }
        }
        let k = reps.len();
        let mut product = vec![0; k * k];
        for a in 0..k {
            for b in 0..k {
                product[a * k + b] = coset_of[self.mul(reps[a], reps[b])];
            }
        }
        let labels = reps
            .iter()
            .map(|&r| format!("[{}]", self.labels[r]))
            .collect();
        let table = GroupTable::new(self.tag, labels, product)?;
        Ok((table, coset_of))
    }

    /// Abelianization `G/G'` with its projection map.
    pub fn abelianization(&self) -> (GroupTable, Vec<usize>) {
        let derived = self.derived_subgroup();
        self.quotient(&derived)
            .expect("derived subgroup is always normal")
    }

    /// All homomorphisms into the group of m-th roots of unity, as exponent
    /// maps. Enumerated through the abelianization; includes the trivial
    /// character. Deterministic order: lexicographic on the exponent vector.
    pub fn abelian_characters(&self, m: u32) -> Vec<Character> {
        let (ab, proj) = self.abelianization();
        let basis = ab.cyclic_basis();
        // exponent choices per basis element: e * d == 0 (mod m)
        let mut choices: Vec<Vec<u32>> = Vec::new();
        for &(g, _) in &basis {
            let d = ab.elem_order(g) as u32;
            let gcd = num_integer::gcd(d, m);
            let step = m / gcd;
            choices.push((0..gcd).map(|t| t * step).collect());
        }
        // decompose every element of the abelianization over the basis
        let mut rep = vec![vec![0u32; basis.len()]; ab.order()];
        let mut assigned = vec![false; ab.order()];
        let mut frontier = vec![0usize];
        assigned[0] = true;
        while let Some(x) = frontier.pop() {
            for (bi, &(g, _)) in basis.iter().enumerate() {
                let y = ab.mul(x, g);
                if !assigned[y] {
                    assigned[y] = true;
                    let mut r = rep[x].clone();
                    r[bi] += 1;
                    rep[y] = r;
                    frontier.push(y);
                }
            }
        }
        debug_assert!(assigned.iter().all(|&a| a));

        let mut out = Vec::new();
        let mut idx = vec![0usize; basis.len()];
        loop {
            let exps: Vec<u32> = (0..self.order)
                .map(|g| {
                    let r = &rep[proj[g]];
                    r.iter()
                        .zip(&idx)
                        .zip(&choices)
                        .map(|((&a, &i), ch)| a * ch[i] % m)
                        .sum::<u32>()
                        % m
                })
                .collect();
            out.push(Character { m, exp: exps });
            // odometer over choice indices
            let mut carry = true;
            for i in (0..idx.len()).rev() {
                if carry {
                    idx[i] += 1;
                    if idx[i] == choices[i].len() {
                        idx[i] = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }
        out.sort_by(|a, b| a.exp.cmp(&b.exp));
        out.dedup_by(|a, b| a.exp == b.exp);
        debug_assert!(out.iter().all(|c| c.is_homomorphism(self)));
        out
    }

    /// Greedy cyclic direct-sum decomposition of an abelian table:
    /// `(generator, order)` pairs whose orders multiply to the group order.
    fn cyclic_basis(&self) -> Vec<(Elem, usize)> {
        let mut basis: Vec<(Elem, usize)> = Vec::new();
        let mut sub = vec![0usize]; // closure of chosen generators
        while sub.len() < self.order {
            let mut best: Option<(Elem, usize)> = None;
            for g in 1..self.order {
                if sub.contains(&g) {
                    continue;
                }
                let d = self.elem_order(g);
                // direct-sum condition: the new cyclic factor meets the old
                // subgroup trivially
                let meets_trivially = (1..d).all(|k| {
                    let p = self.pow(g, k as i64);
                    p == 0 || !sub.contains(&p)
                });
                if meets_trivially && best.map_or(true, |(_, bd)| d > bd) {
                    best = Some((g, d));
                }
            }
            let (g, d) = best.expect("abelian group admits a cyclic decomposition");
            basis.push((g, d));
            let gens: Vec<Elem> = basis.iter().map(|&(g, _)| g).collect();
            sub = self.closure(&gens);
        }
        let prod: usize = basis.iter().map(|&(_, d)| d).product();
        assert_eq!(prod, self.order, "not a direct-sum basis");
        basis
    }

    /// All automorphisms, as permutations of element indices. Found by
    /// backtracking on images of a fixed irredundant generating tuple.
    pub fn automorphisms(&self) -> Vec<Vec<Elem>> {
        let gens = self
            .minimal_generating_tuple()
            .expect("every finite group has a generating tuple");
        let mut out = Vec::new();
        let mut images = Vec::new();
        self.aut_rec(&gens, &mut images, &mut out);
        out.sort();
        out
    }

    fn minimal_generating_tuple(&self) -> Option<Vec<Elem>> {
        for size in 1..=self.order {
            let subs = self.generating_subsets(size);
            if let Some(s) = subs.into_iter().next() {
                return Some(s);
            }
        }
        None
    }

    fn aut_rec(&self, gens: &[Elem], images: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        if images.len() == gens.len() {
            if let Some(perm) = self.extend_hom(gens, images) {
                out.push(perm);
            }
            return;
        }
        let want = self.elem_order(gens[images.len()]);
        for g in 0..self.order {
            if self.elem_order(g) == want {
                images.push(g);
                self.aut_rec(gens, images, out);
                images.pop();
            }
        }
    }

    /// Extends `gens[i] -> images[i]` to a homomorphism by closing under
    /// products; returns the permutation if it is a bijective homomorphism.
    fn extend_hom(&self, gens: &[Elem], images: &[Elem]) -> Option<Vec<Elem>> {
        let mut phi = vec![usize::MAX; self.order];
        phi[0] = 0;
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for (i, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                let fy = self.mul(phi[x], images[i]);
                if phi[y] == usize::MAX {
                    phi[y] = fy;
                    frontier.push(y);
                } else if phi[y] != fy {
                    return None;
                }
            }
        }
        if phi.iter().any(|&v| v == usize::MAX) {
            return None; // gens did not generate (cannot happen)
        }
        let mut seen = vec![false; self.order];
        for &v in &phi {
            if seen[v] {
                return None;
            }
            seen[v] = true;
        }
        for a in 0..self.order {
            for b in 0..self.order {
                if phi[self.mul(a, b)] != self.mul(phi[a], phi[b]) {
                    return None;
                }
            }
        }
        Some(phi)
    }

    /// Plain-text rendering of the multiplication table for human audit.
    pub fn render(&self) -> String {
        let width = self.labels.iter().map(|l| l.len()).max().unwrap_or(1) + 1;
        let mut s = String::new();
        s.push_str(&" ".repeat(width));
        for h in 0..self.order {
            s.push_str(&format!("{:>width$}", self.labels[h]));
        }
        s.push('\n');
        for g in 0..self.order {
            s.push_str(&format!("{:>width$}", self.labels[g]));
            for h in 0..self.order {
                s.push_str(&format!("{:>width$}", self.labels[self.mul(g, h)]));
            }
            s.push('\n');
        }
        s
    }
}

fn is_prime_power(mut n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 0;
    for d in 2..=n {
        if n % d == 0 {
            p = d;
            break;
        }
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Homomorphism from a group into the m-th roots of unity, stored as the
/// exponent of `zeta_m` at each element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    /// Conductor: the character takes values in the m-th roots of unity.
    pub m: u32,
    /// `exp[g]` is the exponent of `zeta_m` at element `g`; `exp[0] == 0`.
    pub exp: Vec<u32>,
}

impl Character {
    pub fn trivial(order: usize) -> Character {
        Character {
            m: 1,
            exp: vec![0; order],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.exp.iter().all(|&e| e == 0)
    }

    /// Exact multiplicative order of the character.
    pub fn order(&self) -> u32 {
        if self.is_trivial() {
            return 1;
        }
        let g = self
            .exp
            .iter()
            .fold(self.m, |acc, &e| num_integer::gcd(acc, e));
        self.m / g
    }

    /// Same character re-expressed with conductor equal to its exact order.
    pub fn normalized(&self) -> Character {
        let ord = self.order();
        let scale = self.m / ord;
        Character {
            m: ord,
            exp: self.exp.iter().map(|&e| e / scale).collect(),
        }
    }

    /// True when the character takes the value -1 at `g`.
    pub fn is_minus_one_at(&self, g: Elem) -> bool {
        self.m % 2 == 0 && self.exp[g] == self.m / 2
    }

    pub fn is_homomorphism(&self, table: &GroupTable) -> bool {
        if self.exp.len() != table.order() || self.exp[0] != 0 {
            return false;
        }
        for g in 0..table.order() {
            for h in 0..table.order() {
                if (self.exp[g] + self.exp[h]) % self.m != self.exp[table.mul(g, h)] {
                    return false;
                }
            }
        }
        true
    }
}

/// A multiset of non-identity elements whose support generates the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenMultiset {
    pub entries: Vec<Elem>,
}

fn table_from_fn(
    tag: GroupTag,
    labels: Vec<String>,
    mul: impl Fn(usize, usize) -> usize,
) -> GroupTable {
    let n = labels.len();
    let mut product = vec![0; n * n];
    for g in 0..n {
        for h in 0..n {
            product[g * n + h] = mul(g, h);
        }
    }
    GroupTable::new(tag, labels, product).expect("catalog table must satisfy the group axioms")
}

/// Cyclic group of order 8; element `k` is `s^k`.
pub fn c8() -> GroupTable {
    let labels = (0..8)
        .map(|k| if k == 0 { "1".into() } else { format!("s{k}") })
        .collect();
    table_from_fn(GroupTag::C8, labels, |g, h| (g + h) % 8)
}

/// `C4 x C2`; element `2a + b` is `r^a z^b`.
pub fn c4xc2() -> GroupTable {
    let lab = |a: usize, b: usize| match (a, b) {
        (0, 0) => "1".to_string(),
        (a, 0) => format!("r{a}"),
        (0, _) => "z".to_string(),
        (a, _) => format!("r{a}z"),
    };
    let labels = (0..8).map(|i| lab(i / 2, i % 2)).collect();
    table_from_fn(GroupTag::C4xC2, labels, |g, h| {
        let (a1, b1) = (g / 2, g % 2);
        let (a2, b2) = (h / 2, h % 2);
        ((a1 + a2) % 4) * 2 + (b1 + b2) % 2
    })
}

/// Dihedral group of order 8 with presentation `f^2 = x^4 = 1, fxf = x^-1`;
/// element `4e + k` is `f^e x^k`.
pub fn d8() -> GroupTable {
    let lab = |e: usize, k: usize| match (e, k) {
        (0, 0) => "1".to_string(),
        (0, k) => format!("x{k}"),
        (_, 0) => "f".to_string(),
        (_, k) => format!("fx{k}"),
    };
    let labels = (0..8).map(|i| lab(i / 4, i % 4)).collect();
    table_from_fn(GroupTag::D8, labels, |g, h| {
        let (e1, k1) = (g / 4, g % 4);
        let (e2, k2) = (h / 4, h % 4);
        // f^e1 x^k1 . f^e2 x^k2 = f^(e1+e2) x^(k1 (-1)^e2 + k2)
        let k = if e2 == 1 { (4 - k1) % 4 } else { k1 };
        ((e1 + e2) % 2) * 4 + (k + k2) % 4
    })
}

/// Quaternion group `{±1, ±i, ±j, ±k}`; index `2t + s` is `(-1)^s` times the
/// basis unit `1, i, j, k` at `t`.
pub fn q8() -> GroupTable {
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    // basis products: (unit, unit) -> (unit, sign)
    let base = |a: usize, b: usize| -> (usize, usize) {
        match (a, b) {
            (0, x) => (x, 0),
            (x, 0) => (x, 0),
            (1, 1) => (0, 1),
            (2, 2) => (0, 1),
            (3, 3) => (0, 1),
            (1, 2) => (3, 0),
            (2, 1) => (3, 1),
            (2, 3) => (1, 0),
            (3, 2) => (1, 1),
            (3, 1) => (2, 0),
            (1, 3) => (2, 1),
            _ => unreachable!(),
        }
    };
    table_from_fn(GroupTag::Q8, labels, |g, h| {
        let (t1, s1) = (g / 2, g % 2);
        let (t2, s2) = (h / 2, h % 2);
        let (t, s) = base(t1, t2);
        t * 2 + (s + s1 + s2) % 2
    })
}

/// Elementary abelian group `(C2)^3`; element index is the bit pattern over
/// the basis `e1, e2, e3`.
pub fn e8() -> GroupTable {
    let lab = |v: usize| {
        if v == 0 {
            return "1".to_string();
        }
        let mut s = String::new();
        for b in 0..3 {
            if v >> b & 1 == 1 {
                s.push_str(&format!("e{}", b + 1));
            }
        }
        s
    };
    let labels = (0..8).map(lab).collect();
    table_from_fn(GroupTag::E8, labels, |g, h| g ^ h)
}

/// The nonabelian group `C7 ⋉ (C2)^3`, with the order-7 automorphism acting
/// as the companion matrix of `t^3 + t + 1` over the field with 2 elements.
/// Element `8c + v` is `s^c v` with `v` a bit-vector.
pub fn g56() -> GroupTable {
    // v * M where M sends e1 -> e2, e2 -> e3, e3 -> e1 + e2
    fn step(v: usize) -> usize {
        let (b1, b2, b3) = (v & 1, v >> 1 & 1, v >> 2 & 1);
        b3 | (b1 ^ b3) << 1 | b2 << 2
    }
    fn act(mut v: usize, times: usize) -> usize {
        for _ in 0..times {
            v = step(v);
        }
        v
    }
    assert_eq!(act(1, 7), 1, "companion matrix must have order 7");
    assert_ne!(act(1, 1), 1);
    let labels = (0..56)
        .map(|i| {
            let (c, v) = (i / 8, i % 8);
            match (c, v) {
                (0, 0) => "1".to_string(),
                (c, 0) => format!("s{c}"),
                (0, v) => format!("v{v}"),
                (c, v) => format!("s{c}v{v}"),
            }
        })
        .collect();
    table_from_fn(GroupTag::G56, labels, |g, h| {
        let (c1, v1) = (g / 8, g % 8);
        let (c2, v2) = (h / 8, h % 8);
        // (s^c1 v1)(s^c2 v2) = s^(c1+c2) (v1^(s^c2)) v2
        ((c1 + c2) % 7) * 8 + (act(v1, c2) ^ v2)
    })
}

/// The five groups of order 8, one per isomorphism class.
pub fn order8_catalog() -> Vec<GroupTable> {
    vec![c8(), c4xc2(), d8(), q8(), e8()]
}

/// Catalog lookup by tag.
pub fn table_for(tag: GroupTag) -> GroupTable {
    match tag {
        GroupTag::C8 => c8(),
        GroupTag::C4xC2 => c4xc2(),
        GroupTag::D8 => d8(),
        GroupTag::Q8 => q8(),
        GroupTag::E8 => e8(),
        GroupTag::G56 => g56(),
    }
}

/// Non-trivial characters with conductor normalized to their exact order,
/// deduplicated and sorted; the enumeration order is part of the certificate
/// format.
pub fn nontrivial_characters(table: &GroupTable, max_order: u32) -> Vec<Character> {
    let mut seen = HashMap::new();
    for chi in table.abelian_characters(max_order) {
        let n = chi.normalized();
        if !n.is_trivial() {
            seen.insert((n.m, n.exp.clone()), n);
        }
    }
    let mut out: Vec<Character> = seen.into_values().collect();
    out.sort_by(|a, b| (a.m, &a.exp).cmp(&(b.m, &b.exp)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_five_valid_tables() {
        let cat = order8_catalog();
        assert_eq!(cat.len(), 5);
        let ranks: Vec<usize> = cat.iter().map(|t| t.rank().unwrap()).collect();
        assert_eq!(ranks, vec![1, 2, 2, 2, 3]);
    }

    #[test]
    fn d8_relations() {
        let t = d8();
        let f = 4;
        let x = 1;
        assert_eq!(t.mul(f, f), 0);
        assert_eq!(t.mul(t.mul(f, x), t.mul(f, x)), 0); // (fx)^2 = 1
        assert_eq!(t.mul(t.mul(f, x), f), t.inv(x)); // fxf = x^-1
    }

    #[test]
    fn q8_has_exactly_one_involution() {
        let t = q8();
        let invs: Vec<Elem> = (1..8).filter(|&g| t.mul(g, g) == 0).collect();
        assert_eq!(invs, vec![1]); // only -1
        assert_eq!(t.mul(2, 4), 6); // i * j = k
        assert_eq!(t.center(), vec![0, 1]);
    }

    #[test]
    fn e8_all_elements_are_involutions() {
        let t = e8();
        assert!((1..8).all(|g| t.elem_order(g) == 2));
        assert_eq!(t.derived_subgroup(), vec![0]);
    }

    #[test]
    fn derived_subgroup_of_d8() {
        let t = d8();
        assert_eq!(t.derived_subgroup(), vec![0, 2]); // {1, x^2}
    }

    #[test]
    fn g56_is_a_valid_group_with_odd_abelianization() {
        let t = g56();
        assert_eq!(t.order(), 56);
        let derived = t.derived_subgroup();
        assert_eq!(derived.len(), 8); // the (C2)^3 part
        let (ab, _) = t.abelianization();
        assert_eq!(ab.order(), 7); // no subgroup of index 2
        assert!(t.rank().is_err());
    }

    #[test]
    fn e8_has_28_irredundant_generating_triples() {
        let t = e8();
        let subs = t.generating_subsets(3);
        assert_eq!(subs.len(), 28);
    }

    #[test]
    fn c8_has_four_generating_singletons() {
        let t = c8();
        let m = t.generating_multisets(1).unwrap();
        assert_eq!(m.len(), 4);
        assert!(m.iter().all(|s| t.elem_order(s[0]) == 8));
        assert!(t.generating_multisets(4).is_err());
    }

    #[test]
    fn character_counts() {
        assert_eq!(e8().abelian_characters(2).len(), 8);
        for m in [2, 4, 8] {
            assert_eq!(d8().abelian_characters(m).len(), 4);
        }
        assert_eq!(c8().abelian_characters(8).len(), 8);
        assert_eq!(c4xc2().abelian_characters(4).len(), 8);
        // the trivial character is always present
        for t in order8_catalog() {
            assert!(t
                .abelian_characters(8)
                .iter()
                .any(|c| c.is_trivial()));
        }
    }

    #[test]
    fn characters_are_homomorphisms() {
        for t in order8_catalog() {
            for chi in t.abelian_characters(8) {
                assert!(chi.is_homomorphism(&t));
                let n = chi.normalized();
                assert!(n.is_homomorphism(&t));
                assert_eq!(n.m, n.order());
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(e8().automorphisms().len(), 168); // |GL(3,2)|
        assert_eq!(d8().automorphisms().len(), 8);
        assert_eq!(q8().automorphisms().len(), 24);
        assert_eq!(c8().automorphisms().len(), 4);
    }

    #[test]
    fn multisets_are_stable_under_relabeling() {
        // Pushing the multisets through any automorphism and re-sorting gives
        // back the same collection.
        for t in [d8(), e8()] {
            let rank = t.rank().unwrap();
            let multisets = t.generating_multisets(rank + 1).unwrap();
            let set: BTreeSet<Vec<Elem>> = multisets.iter().cloned().collect();
            for aut in t.automorphisms().into_iter().take(5) {
                let mapped: BTreeSet<Vec<Elem>> = multisets
                    .iter()
                    .map(|m| {
                        let mut v: Vec<Elem> = m.iter().map(|&g| aut[g]).collect();
                        v.sort();
                        v
                    })
                    .collect();
                assert_eq!(set, mapped);
            }
        }
    }

    #[test]
    fn quotient_of_d8_by_center() {
        let t = d8();
        let (q, proj) = t.quotient(&[0, 2]).unwrap();
        assert_eq!(q.order(), 4);
        assert!((0..4).all(|g| q.mul(g, g) == 0)); // C2 x C2
        assert_eq!(proj[0], proj[2]);
    }

    #[test]
    fn pow_and_order() {
        let t = c8();
        assert_eq!(t.pow(1, 5), 5);
        assert_eq!(t.pow(1, -1), 7);
        assert_eq!(t.elem_order(2), 4);
        assert!(t.checked(9).is_err());
    }
}
