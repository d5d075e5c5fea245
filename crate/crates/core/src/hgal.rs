//! The Galois group `H` at finite level, its actions on characters, and
//! `H`-triples.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, gcd, p_prime_part, units};
use crate::chartab::ClassFunction;
use crate::cliff::inertia_group;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::group::{GroupRef, PermGroup};
use crate::perm::Perm;

/// `zeta_n -> zeta_n^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaloisAut {
    pub n: u64,
    pub k: u64,
}

impl GaloisAut {
    pub fn new(n: u64, k: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("conductor must be positive".into()));
        }
        let k = k.rem_euclid(n as i64) as u64;
        if n > 1 && gcd(k, n) != 1 {
            return Err(Error::NotCoprime {
                k: k as i64,
                n: n as u32,
            });
        }
        Ok(GaloisAut {
            n,
            k: if n == 1 { 1 } else { k },
        })
    }

    pub fn identity(n: u64) -> Self {
        GaloisAut { n, k: 1 % n.max(2) }
    }

    pub fn compose(&self, other: &GaloisAut) -> Result<GaloisAut> {
        if self.n != other.n {
            return Err(Error::InvalidInput("Galois automorphisms at different levels".into()));
        }
        GaloisAut::new(self.n, ((self.k * other.k) % self.n) as i64)
    }

    pub fn inverse(&self) -> GaloisAut {
        let k = crate::arith::mod_inv(self.k, self.n).unwrap_or(1);
        GaloisAut { n: self.n, k: if self.n == 1 { 1 } else { k } }
    }

    pub fn apply(&self, a: &Cyclo) -> Result<Cyclo> {
        if !self.n.is_multiple_of(a.conductor() as u64) {
            return Err(Error::InvalidInput(format!(
                "value of conductor {} outside Q(zeta_{})",
                a.conductor(),
                self.n
            )));
        }
        a.galois(self.k as i64)
    }
}

/// `H_n = { k in (Z/n)^x : k = p^f mod n_p' }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HGroup {
    pub n: u64,
    pub p: u64,
    pub elements: Vec<u64>,
}

pub fn h_group(n: u64, p: u64) -> HGroup {
    if n == 1 {
        return HGroup {
            n,
            p,
            elements: vec![1],
        };
    }
    let m = p_prime_part(n, p);
    let mut powers = vec![1 % m];
    let mut x = p % m;
    while !powers.contains(&x) {
        powers.push(x);
        x = x * p % m;
    }
    let elements = units(n)
        .into_iter()
        .filter(|k| powers.contains(&(k % m)))
        .collect();
    HGroup { n, p, elements }
}

/// `ord(p mod n_p') * phi(n_p)`.
pub fn h_group_order(n: u64, p: u64) -> u64 {
    let m = p_prime_part(n, p);
    let np = n / m;
    let mut ord = 1;
    let mut x = p % m;
    if m > 1 {
        while x != 1 {
            x = x * p % m;
            ord += 1;
        }
    }
    ord * euler_phi(np)
}

impl HGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, k: u64) -> bool {
        self.elements.binary_search(&(k % self.n.max(1))).is_ok() || (self.n == 1)
    }

    pub fn auts(&self) -> impl Iterator<Item = GaloisAut> + '_ {
        self.elements.iter().map(move |&k| GaloisAut { n: self.n, k })
    }

    /// An element of `H_big` restricting to `k` on `Q(zeta_n)`.
    pub fn lift(&self, k: u64, big: u64) -> Result<u64> {
        if !big.is_multiple_of(self.n) {
            return Err(Error::InvalidInput(format!("{} does not divide {big}", self.n)));
        }
        h_group(big, self.p)
            .elements
            .into_iter()
            .find(|&kk| self.n == 1 || kk % self.n == k % self.n)
            .ok_or_else(|| Error::InvalidInput(format!("{k} is not in H_{}", self.n)))
    }

    pub fn subgroup(&self, pred: impl Fn(u64) -> bool) -> HGroup {
        HGroup {
            n: self.n,
            p: self.p,
            elements: self.elements.iter().copied().filter(|&k| pred(k)).collect(),
        }
    }
}

/// An action of `H_n` on `points` given by image tables.
#[derive(Debug, Clone)]
pub struct HAction {
    pub h: HGroup,
    /// images[i][x] = x^{k_i} with k_i = h.elements[i]
    pub images: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub members: Vec<usize>,
    pub stabilizer: Vec<u64>,
}

impl HAction {
    pub fn on_characters(h: &HGroup, chars: &[ClassFunction]) -> Result<HAction> {
        let pos: HashMap<&ClassFunction, usize> =
            chars.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut images = Vec::with_capacity(h.order());
        for &k in &h.elements {
            let mut row = Vec::with_capacity(chars.len());
            for c in chars {
                let img = c.galois(k as i64)?;
                let j = *pos.get(&img).ok_or_else(|| {
                    Error::InvalidInput("character set is not closed under H".into())
                })?;
                row.push(j);
            }
            images.push(row);
        }
        Ok(HAction {
            h: h.clone(),
            images,
        })
    }

    pub fn points(&self) -> usize {
        self.images.first().map(|r| r.len()).unwrap_or(0)
    }

    pub fn orbits(&self) -> Vec<Orbit> {
        let n = self.points();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut members: Vec<usize> = self.images.iter().map(|row| row[x]).collect();
            members.sort();
            members.dedup();
            for &m in &members {
                seen[m] = true;
            }
            let stabilizer = self
                .h
                .elements
                .iter()
                .zip(&self.images)
                .filter(|(_, row)| row[x] == x)
                .map(|(&k, _)| k)
                .collect();
            out.push(Orbit {
                members,
                stabilizer,
            });
        }
        out
    }
}

pub fn orbits(h: &HGroup, chars: &[ClassFunction]) -> Result<Vec<Orbit>> {
    Ok(HAction::on_characters(h, chars)?.orbits())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoCertificate {
    /// `bijection[x]` is the image of point `x`.
    Bijection(Vec<usize>),
    SizeMismatch,
    /// A stabilizer occurring with different multiplicities on the two sides.
    Stabilizer(Vec<u64>),
}

impl IsoCertificate {
    pub fn holds(&self) -> bool {
        matches!(self, IsoCertificate::Bijection(_))
    }
}

pub fn permutation_isomorphic(a: &HAction, b: &HAction) -> Result<IsoCertificate> {
    if a.h.elements != b.h.elements {
        return Err(Error::InvalidInput("actions of different groups".into()));
    }
    if a.points() != b.points() {
        return Ok(IsoCertificate::SizeMismatch);
    }
    let oa = a.orbits();
    let ob = b.orbits();
    let mut by_stab: BTreeMap<Vec<u64>, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, o) in oa.iter().enumerate() {
        by_stab.entry(o.stabilizer.clone()).or_default().0.push(i);
    }
    for (i, o) in ob.iter().enumerate() {
        by_stab.entry(o.stabilizer.clone()).or_default().1.push(i);
    }
    for (stab, (xa, xb)) in &by_stab {
        if xa.len() != xb.len() {
            return Ok(IsoCertificate::Stabilizer(stab.clone()));
        }
    }
    let mut bij = vec![usize::MAX; a.points()];
    for (xa, xb) in by_stab.values() {
        for (&ia, &ib) in xa.iter().zip(xb) {
            let x = oa[ia].members[0];
            let y = ob[ib].members[0];
            for (ra, rb) in a.images.iter().zip(&b.images) {
                bij[ra[x]] = rb[y];
            }
        }
    }
    Ok(IsoCertificate::Bijection(bij))
}

/// `(G, N, theta)` with every `G`-conjugate of `theta` an `H`-conjugate.
#[derive(Debug, Clone)]
pub struct HTriple {
    pub group: GroupRef,
    pub normal: GroupRef,
    pub theta: ClassFunction,
    pub p: u64,
    pub conductor: u64,
}

impl HTriple {
    pub fn new(group: GroupRef, normal: GroupRef, theta: ClassFunction, p: u64) -> Result<Self> {
        if !normal.is_normal_in(&group) {
            return Err(Error::NotNormal);
        }
        if !(std::sync::Arc::ptr_eq(theta.group(), &normal) || **theta.group() == *normal) {
            return Err(Error::GroupMismatch);
        }
        if !theta.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        if is_h_triple(&group, &normal, &theta, p)?.is_none() {
            return Err(Error::NotHTriple(
                "a G-conjugate of theta is not an H-conjugate".into(),
            ));
        }
        let conductor = group.exponent();
        Ok(HTriple {
            group,
            normal,
            theta,
            p,
            conductor,
        })
    }

    pub fn h(&self) -> HGroup {
        h_group(self.conductor, self.p)
    }

    pub fn inertia(&self) -> PermGroup {
        inertia_group(&self.group, &self.normal, &self.theta).unwrap()
    }
}

/// For each lex-least representative `g` of `G_theta \ G`, some `k` in `H_n`
/// with `theta^g = theta^k`; `None` if some conjugate is not an `H`-conjugate.
pub fn is_h_triple(
    g: &GroupRef,
    n: &GroupRef,
    theta: &ClassFunction,
    p: u64,
) -> Result<Option<Vec<(Perm, u64)>>> {
    let gt = inertia_group(g, n, theta)?;
    let h = h_group(g.exponent(), p);
    let conj: Vec<(u64, ClassFunction)> = h
        .elements
        .iter()
        .map(|&k| Ok((k, theta.galois(k as i64)?)))
        .collect::<Result<_>>()?;
    let mut witness = Vec::new();
    for t in g.right_transversal(&gt) {
        let tg = theta.conjugate(&t);
        match conj.iter().find(|(_, c)| *c == tg) {
            Some((k, _)) => witness.push((t, *k)),
            None => return Ok(None),
        }
    }
    Ok(Some(witness))
}

/// `H_theta`: residues fixing `theta`.
pub fn h_theta(t: &HTriple) -> Result<HGroup> {
    let h = t.h();
    let mut keep = Vec::new();
    for &k in &h.elements {
        if t.theta.galois(k as i64)? == t.theta {
            keep.push(k);
        }
    }
    Ok(HGroup {
        n: h.n,
        p: h.p,
        elements: keep,
    })
}

/// `H_{G,theta}`: residues `k` with `theta^k` a `G`-conjugate of `theta`.
pub fn h_g_theta(t: &HTriple) -> Result<HGroup> {
    let witness = is_h_triple(&t.group, &t.normal, &t.theta, t.p)?
        .ok_or_else(|| Error::NotHTriple("witness vanished".into()))?;
    let conjugates: Vec<ClassFunction> = witness
        .iter()
        .map(|(g, _)| t.theta.conjugate(g))
        .collect();
    let h = t.h();
    let mut keep = Vec::new();
    for &k in &h.elements {
        if conjugates.contains(&t.theta.galois(k as i64)?) {
            keep.push(k);
        }
    }
    Ok(HGroup {
        n: h.n,
        p: h.p,
        elements: keep,
    })
}
