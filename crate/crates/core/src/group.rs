//! Finitely generated abelian groups presented as direct sums of cyclic
//! factors. A modulus of 0 denotes a copy of the integers; anything else is
//! Z_m with m >= 2. Elements carry their group and store one reduced residue
//! per factor.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cyclic factor modulus must be 0 or at least 2, got {0}")]
    BadModulus(u64),
    #[error("operation requires a finite group")]
    Infinite,
    #[error("operation requires a nontrivial group")]
    Trivial,
    #[error("elements belong to different groups")]
    Mismatch,
    #[error("expected {expected} residues, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("group has fewer than two even invariant factors")]
    NoEvenPair,
}

#[derive(Debug)]
struct Repr {
    moduli: Vec<u64>,
}

/// A direct sum of cyclic groups, cheap to clone.
#[derive(Clone)]
pub struct Group(Arc<Repr>);

impl Group {
    pub fn new(moduli: Vec<u64>) -> Result<Group, GroupError> {
        if let Some(&bad) = moduli.iter().find(|&&m| m == 1) {
            return Err(GroupError::BadModulus(bad));
        }
        Ok(Group(Arc::new(Repr { moduli })))
    }

    pub fn trivial() -> Group {
        Group::new(Vec::new()).unwrap()
    }

    /// The integers under addition.
    pub fn integers() -> Group {
        Group::new(vec![0]).unwrap()
    }

    pub fn cyclic(order: u64) -> Result<Group, GroupError> {
        Group::new(vec![order])
    }

    pub fn direct_sum(&self, other: &Group) -> Group {
        let mut moduli = self.moduli().to_vec();
        moduli.extend_from_slice(other.moduli());
        Group::new(moduli).unwrap()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.0.moduli
    }

    pub fn rank(&self) -> usize {
        self.0.moduli.len()
    }

    pub fn is_finite(&self) -> bool {
        self.0.moduli.iter().all(|&m| m != 0)
    }

    /// True when the group is exactly the integers (one 0-modulus factor).
    pub fn is_integers(&self) -> bool {
        self.moduli() == [0]
    }

    pub fn order(&self) -> Option<u64> {
        self.0
            .moduli
            .iter()
            .try_fold(1u64, |acc, &m| if m == 0 { None } else { acc.checked_mul(m) })
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            residues: vec![0; self.rank()],
        }
    }

    pub fn element(&self, residues: Vec<i64>) -> Result<GroupElement, GroupError> {
        if residues.len() != self.rank() {
            return Err(GroupError::WrongArity {
                expected: self.rank(),
                got: residues.len(),
            });
        }
        let residues = residues
            .into_iter()
            .zip(self.moduli())
            .map(|(r, &m)| reduce(r, m))
            .collect();
        Ok(GroupElement {
            group: self.clone(),
            residues,
        })
    }

    /// Convenience for rank-1 groups (integers or a single cyclic factor).
    pub fn scalar(&self, value: i64) -> Result<GroupElement, GroupError> {
        self.element(vec![value])
    }

    /// All elements in lexicographic residue order (finite groups only).
    pub fn elements(&self) -> Result<Vec<GroupElement>, GroupError> {
        let order = self.order().ok_or(GroupError::Infinite)? as usize;
        let mut out = Vec::with_capacity(order);
        let mut current = vec![0i64; self.rank()];
        loop {
            out.push(GroupElement {
                group: self.clone(),
                residues: current.clone(),
            });
            // odometer, last factor fastest
            let mut pos = self.rank();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                current[pos] += 1;
                if (current[pos] as u64) < self.moduli()[pos] {
                    break;
                }
                current[pos] = 0;
            }
        }
    }

    /// Elements of order exactly 2, in lexicographic order.
    pub fn involutions(&self) -> Result<Vec<GroupElement>, GroupError> {
        if !self.is_finite() {
            return Err(GroupError::Infinite);
        }
        // per factor the solutions of 2r = 0, then every combination
        let mut out = vec![vec![]];
        for &m in self.moduli() {
            let opts: &[i64] = if m % 2 == 0 { &[0, (m / 2) as i64] } else { &[0] };
            let mut next = Vec::with_capacity(out.len() * opts.len());
            for prefix in &out {
                for &o in opts {
                    let mut v: Vec<i64> = prefix.clone();
                    v.push(o);
                    next.push(v);
                }
            }
            out = next;
        }
        out.sort();
        Ok(out
            .into_iter()
            .filter(|v| v.iter().any(|&r| r != 0))
            .map(|residues| GroupElement {
                group: self.clone(),
                residues,
            })
            .collect())
    }

    /// Sum of all elements: the unique involution when there is exactly one,
    /// zero otherwise.
    pub fn sum_all(&self) -> Result<GroupElement, GroupError> {
        let inv = self.involutions()?;
        if inv.len() == 1 {
            Ok(inv.into_iter().next().unwrap())
        } else {
            Ok(self.zero())
        }
    }

    /// Odd order, or more than one involution. Equivalently: the sum of all
    /// elements is zero.
    pub fn has_zero_sum(&self) -> Result<bool, GroupError> {
        if !self.is_finite() {
            return Err(GroupError::Infinite);
        }
        if self.order().unwrap() % 2 == 1 {
            return Ok(true);
        }
        Ok(self.moduli().iter().filter(|&&m| m % 2 == 0).count() >= 2)
    }

    /// Invariant factor presentation q_1 | q_2 | ... | q_r together with an
    /// isomorphism from this group onto it.
    pub fn invariant_factors(&self) -> Result<(Group, GroupIsomorphism), GroupError> {
        if !self.is_finite() {
            return Err(GroupError::Infinite);
        }
        if self.order() == Some(1) {
            return Err(GroupError::Trivial);
        }
        // prime-power atoms of every factor, tagged with their source factor
        let mut atoms: Vec<(u64, u64, usize)> = Vec::new(); // (p^e, p, source)
        for (idx, &m) in self.moduli().iter().enumerate() {
            for (p, e) in factorize(m) {
                atoms.push((p.pow(e), p, idx));
            }
        }
        // peel off the largest factor: one maximal atom per distinct prime
        let mut groups_desc: Vec<Vec<(usize, u64)>> = Vec::new();
        while !atoms.is_empty() {
            let mut picked: Vec<usize> = Vec::new();
            let mut primes: Vec<u64> = atoms.iter().map(|a| a.1).collect();
            primes.sort_unstable();
            primes.dedup();
            for p in primes {
                let best = atoms
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.1 == p)
                    .max_by_key(|(_, a)| a.0)
                    .map(|(i, _)| i)
                    .unwrap();
                picked.push(best);
            }
            picked.sort_unstable();
            let mut part: Vec<(usize, u64)> = Vec::new();
            for &i in picked.iter().rev() {
                let (pe, _, src) = atoms.remove(i);
                part.push((src, pe));
            }
            part.reverse();
            groups_desc.push(part);
        }
        groups_desc.reverse(); // ascending divisibility chain
        let chain: Vec<u64> = groups_desc
            .iter()
            .map(|part| part.iter().map(|&(_, pe)| pe).product())
            .collect();
        let target = Group::new(chain).unwrap();
        let iso = GroupIsomorphism {
            source: self.clone(),
            target,
            parts: groups_desc,
        };
        Ok((iso.target.clone(), iso))
    }

    /// Split off the two smallest even invariant factors 2a and 2b, giving a
    /// presentation Z_2a + Z_2b + rest and the isomorphism from this group
    /// onto it. Requires at least two even invariant factors.
    pub fn even_pair_split(&self) -> Result<EvenSplit, GroupError> {
        let (chain, iso) = self.invariant_factors()?;
        let evens: Vec<usize> = chain
            .moduli()
            .iter()
            .enumerate()
            .filter(|&(_, &q)| q % 2 == 0)
            .map(|(i, _)| i)
            .collect();
        if evens.len() < 2 {
            return Err(GroupError::NoEvenPair);
        }
        let (i0, i1) = (evens[0], evens[1]);
        let mut order: Vec<usize> = vec![i0, i1];
        order.extend((0..chain.rank()).filter(|&i| i != i0 && i != i1));
        let moduli: Vec<u64> = order.iter().map(|&i| chain.moduli()[i]).collect();
        let parts: Vec<Vec<(usize, u64)>> = order.iter().map(|&i| iso.parts[i].clone()).collect();
        let a = moduli[0] / 2;
        let b = moduli[1] / 2;
        let rest = Group::new(moduli[2..].to_vec()).unwrap();
        let target = Group::new(moduli).unwrap();
        Ok(EvenSplit {
            a,
            b,
            rest,
            split: target.clone(),
            iso: GroupIsomorphism {
                source: self.clone(),
                target,
                parts,
            },
        })
    }
}

fn reduce(r: i64, m: u64) -> i64 {
    if m == 0 {
        r
    } else {
        r.rem_euclid(m as i64)
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Every abelian group of the given finite order, one per isomorphism class,
/// presented by prime-power moduli in ascending order.
pub fn abelian_groups_of_order(order: u64) -> Vec<Group> {
    if order == 0 {
        return Vec::new();
    }
    if order == 1 {
        return vec![Group::new(Vec::new()).unwrap()];
    }
    // per prime p^e: one modulus list per partition of e
    let per_prime: Vec<Vec<Vec<u64>>> = factorize(order)
        .into_iter()
        .map(|(p, e)| {
            partitions(e)
                .into_iter()
                .map(|parts| parts.into_iter().map(|a| p.pow(a)).collect())
                .collect()
        })
        .collect();
    let mut combos: Vec<Vec<u64>> = vec![Vec::new()];
    for choices in &per_prime {
        let mut next = Vec::with_capacity(combos.len() * choices.len());
        for base in &combos {
            for choice in choices {
                let mut moduli = base.clone();
                moduli.extend_from_slice(choice);
                next.push(moduli);
            }
        }
        combos = next;
    }
    combos
        .into_iter()
        .map(|mut moduli| {
            moduli.sort_unstable();
            Group::new(moduli).unwrap()
        })
        .collect()
}

fn partitions(total: u32) -> Vec<Vec<u32>> {
    fn go(left: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for next in (1..=cap.min(left)).rev() {
            prefix.push(next);
            go(left - next, next, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}

impl PartialEq for Group {
    fn eq(&self, other: &Group) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.moduli() == other.moduli()
    }
}
impl Eq for Group {}

impl Hash for Group {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.moduli().hash(state);
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({})", self)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() == 0 {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .moduli()
            .iter()
            .map(|&m| if m == 0 { "Z".to_string() } else { format!("Z{}", m) })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl Serialize for Group {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dto<'a> {
            moduli: &'a [u64],
        }
        Dto { moduli: self.moduli() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Group {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Group, D::Error> {
        #[derive(Deserialize)]
        struct Dto {
            moduli: Vec<u64>,
        }
        let dto = Dto::deserialize(deserializer)?;
        Group::new(dto.moduli).map_err(D::Error::custom)
    }
}

/// One residue per factor of its group, always kept reduced.
#[derive(Clone)]
pub struct GroupElement {
    group: Group,
    residues: Vec<i64>,
}

impl GroupElement {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn residues(&self) -> &[i64] {
        &self.residues
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        if self.group != other.group {
            return Err(GroupError::Mismatch);
        }
        let residues = self
            .residues
            .iter()
            .zip(&other.residues)
            .zip(self.group.moduli())
            .map(|((&a, &b), &m)| reduce(a.wrapping_add(b), m))
            .collect();
        Ok(GroupElement {
            group: self.group.clone(),
            residues,
        })
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GroupElement {
        let residues = self
            .residues
            .iter()
            .zip(self.group.moduli())
            .map(|(&r, &m)| reduce(r.wrapping_neg(), m))
            .collect();
        GroupElement {
            group: self.group.clone(),
            residues,
        }
    }

    /// Integer multiple t*x.
    pub fn times(&self, t: i64) -> GroupElement {
        let residues = self
            .residues
            .iter()
            .zip(self.group.moduli())
            .map(|(&r, &m)| {
                let prod = (t as i128) * (r as i128);
                if m == 0 {
                    prod as i64
                } else {
                    prod.rem_euclid(m as i128) as i64
                }
            })
            .collect();
        GroupElement {
            group: self.group.clone(),
            residues,
        }
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &GroupElement) -> bool {
        self.group == other.group && self.residues == other.residues
    }
}
impl Eq for GroupElement {}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &GroupElement) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &GroupElement) -> Ordering {
        self.residues
            .cmp(&other.residues)
            .then_with(|| self.group.moduli().cmp(other.group.moduli()))
    }
}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.residues.hash(state);
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residues.len() == 1 {
            write!(f, "{}", self.residues[0])
        } else {
            let parts: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

/// Z_2a + Z_2b + rest presentation produced by [`Group::even_pair_split`].
#[derive(Debug)]
pub struct EvenSplit {
    pub a: u64,
    pub b: u64,
    pub rest: Group,
    pub split: Group,
    pub iso: GroupIsomorphism,
}

/// An isomorphism between two presentations of the same finite group. Each
/// target factor is the Chinese-remainder combination of prime-power pieces of
/// source factors; `parts[t]` lists those pieces as (source factor, prime
/// power).
#[derive(Debug)]
pub struct GroupIsomorphism {
    source: Group,
    target: Group,
    parts: Vec<Vec<(usize, u64)>>,
}

impl GroupIsomorphism {
    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn forward(&self, e: &GroupElement) -> Result<GroupElement, GroupError> {
        if e.group() != &self.source {
            return Err(GroupError::Mismatch);
        }
        let mut residues = Vec::with_capacity(self.target.rank());
        for part in &self.parts {
            let congruences: Vec<(u64, i64)> = part
                .iter()
                .map(|&(src, pe)| (pe, e.residues()[src].rem_euclid(pe as i64)))
                .collect();
            residues.push(crt(&congruences));
        }
        self.target.element(residues)
    }

    pub fn backward(&self, e: &GroupElement) -> Result<GroupElement, GroupError> {
        if e.group() != &self.target {
            return Err(GroupError::Mismatch);
        }
        let mut per_source: Vec<Vec<(u64, i64)>> = vec![Vec::new(); self.source.rank()];
        for (t, part) in self.parts.iter().enumerate() {
            for &(src, pe) in part {
                per_source[src].push((pe, e.residues()[t].rem_euclid(pe as i64)));
            }
        }
        let mut residues = Vec::with_capacity(self.source.rank());
        for congruences in &per_source {
            residues.push(crt(congruences));
        }
        self.source.element(residues)
    }
}

/// Solve x = a_i (mod n_i) for pairwise coprime n_i.
fn crt(congruences: &[(u64, i64)]) -> i64 {
    let mut x: i128 = 0;
    let mut n: i128 = 1;
    for &(ni, ai) in congruences {
        let ni = ni as i128;
        let ai = ai as i128;
        let delta = (ai - x).rem_euclid(ni);
        let step = delta * mod_inverse(n.rem_euclid(ni), ni) % ni;
        x += n * step;
        n *= ni;
        x = x.rem_euclid(n);
    }
    x as i64
}

fn mod_inverse(a: i128, n: i128) -> i128 {
    // extended Euclid; gcd(a, n) = 1 by construction
    let (mut r0, mut r1) = (n, a.rem_euclid(n));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(n)
}
