//! Galois–McKay verification and the inductive condition checker.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::catalog::{self, CatalogEntry};
use crate::chartab::{irreducibles, ClassFunction};
use crate::cliff::{rel_pprime_set, stabilizer_of_orbit};
use crate::config;
use crate::error::{Error, Result};
use crate::group::{GroupRef, PermGroup};
use crate::hgal::{h_group, permutation_isomorphic, HAction, HGroup, HTriple, IsoCertificate};
use crate::horder::{check_geq_c, find_witness, Failure};
use crate::perm::Perm;
use crate::projrep::ProjRep;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Fails,
    /// Equal counts, but the two `H`-actions are not permutation isomorphic.
    CountsOnly,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails => "FAILS",
            Verdict::CountsOnly => "COUNTS_ONLY",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// `bijection[i]` is the local character paired with global character `i`.
    Bijection(Vec<usize>),
    SizeMismatch { global: usize, local: usize },
    /// A stabilizer occurring `global` times on one side and `local` times on the other.
    Stabilizer {
        stabilizer: Vec<u64>,
        global: usize,
        local: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub members: Vec<usize>,
    pub stabilizer: Vec<u64>,
}

/// One side of the comparison: a set of characters with its `H`-action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Side {
    pub count: usize,
    pub degrees: Vec<i64>,
    pub orbits: Vec<OrbitRow>,
    /// Fixed points of each element of `H_n`, in the order of `h_elements`.
    pub fixed_points: Vec<usize>,
}

/// The comparison over one `G x H`-orbit of `Irr(Z)` in relative mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    /// Indices into the character table of `Z`.
    pub lambda: Vec<usize>,
    pub global: Side,
    pub local: Side,
    pub verdict: Verdict,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McKayReport {
    pub schema: u32,
    pub group: String,
    pub order: u64,
    pub p: u64,
    /// Level `n` of `H_n`.
    pub level: u64,
    pub h_elements: Vec<u64>,
    pub sylow_order: u64,
    /// `N_G(P)`, or `N_G(P)Z` in relative mode.
    pub local_group: String,
    pub local_order: u64,
    pub relative_order: Option<u64>,
    pub global: Side,
    pub local: Side,
    pub blocks: Vec<Block>,
    pub verdict: Verdict,
    pub certificate: Certificate,
}

fn side(action: &HAction, chars: &[ClassFunction]) -> Side {
    let orbits = action
        .orbits()
        .into_iter()
        .map(|o| OrbitRow {
            members: o.members,
            stabilizer: o.stabilizer,
        })
        .collect();
    let fixed_points = action
        .images
        .iter()
        .map(|row| row.iter().enumerate().filter(|(i, j)| i == *j).count())
        .collect();
    Side {
        count: chars.len(),
        degrees: chars.iter().map(|c| c.degree_int()).collect(),
        orbits,
        fixed_points,
    }
}

fn compare(
    h: &HGroup,
    global: &[ClassFunction],
    local: &[ClassFunction],
) -> Result<(Side, Side, Verdict, Certificate)> {
    let a = HAction::on_characters(h, global)?;
    let b = HAction::on_characters(h, local)?;
    let (sa, sb) = (side(&a, global), side(&b, local));
    let (verdict, cert) = match permutation_isomorphic(&a, &b)? {
        IsoCertificate::Bijection(bij) => (Verdict::Holds, Certificate::Bijection(bij)),
        IsoCertificate::SizeMismatch => (
            Verdict::Fails,
            Certificate::SizeMismatch {
                global: sa.count,
                local: sb.count,
            },
        ),
        IsoCertificate::Stabilizer(stab) => {
            let mult = |s: &Side| s.orbits.iter().filter(|o| o.stabilizer == stab).count();
            let cert = Certificate::Stabilizer {
                global: mult(&sa),
                local: mult(&sb),
                stabilizer: stab,
            };
            (Verdict::CountsOnly, cert)
        }
    };
    Ok((sa, sb, verdict, cert))
}

fn pprime(g: &GroupRef, p: u64) -> Result<Vec<ClassFunction>> {
    Ok(irreducibles(g)?
        .into_iter()
        .filter(|c| c.degree_int() % p as i64 != 0)
        .collect())
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    Ok(())
}

fn local_data(g: &GroupRef, p: u64) -> (PermGroup, u64) {
    let sylow = g.sylow(p);
    (g.normalizer_of(&sylow), sylow.order())
}

/// Compare the `H`-actions on `Irr_p'(G)` and `Irr_p'(N_G(P))`.
pub fn verify_mckay(g: &GroupRef, name: &str, p: u64) -> Result<McKayReport> {
    check_prime(p)?;
    let global = pprime(g, p)?;
    let (local_group, sylow_order) = local_data(g, p);
    let local_group = local_group.into_ref();
    let local = pprime(&local_group, p)?;
    let level = g.exponent();
    let h = h_group(level, p);
    let (gs, ls, verdict, certificate) = compare(&h, &global, &local)?;
    Ok(McKayReport {
        schema: REPORT_SCHEMA,
        group: name.to_string(),
        order: g.order(),
        p,
        level,
        h_elements: h.elements,
        sylow_order,
        local_group: "N_G(P)".into(),
        local_order: local_group.order(),
        relative_order: None,
        global: gs,
        local: ls,
        blocks: Vec::new(),
        verdict,
        certificate,
    })
}

/// `G x H`-orbits on `Irr(Z)`, as index lists into `irr`.
fn lambda_orbits(g: &GroupRef, irr: &[ClassFunction], h: &HGroup) -> Result<Vec<Vec<usize>>> {
    let pos: HashMap<&ClassFunction, usize> = irr.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut seen = vec![false; irr.len()];
    let mut out = Vec::new();
    for start in 0..irr.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let c = &irr[orbit[i]];
            let mut next: Vec<ClassFunction> = g.generators().iter().map(|x| c.conjugate(x)).collect();
            for &k in &h.elements {
                next.push(c.galois(k as i64)?);
            }
            for d in next {
                let j = *pos
                    .get(&d)
                    .ok_or_else(|| Error::InvalidInput("Irr(Z) is not closed under G x H".into()))?;
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                }
            }
            i += 1;
        }
        orbit.sort();
        out.push(orbit);
    }
    Ok(out)
}

/// The relative variant: `H = N_G(P)Z`, compared blockwise over the
/// `G x H`-orbits of `Irr(Z)` using characters of `p'`-degree ratio.
pub fn verify_mckay_relative(g: &GroupRef, name: &str, p: u64, z: &GroupRef) -> Result<McKayReport> {
    check_prime(p)?;
    if !z.is_subgroup_of(g) {
        return Err(Error::NotSubgroup);
    }
    if !z.is_normal_in(g) {
        return Err(Error::NotNormal);
    }
    let (np, sylow_order) = local_data(g, p);
    let mut gens = np.generators().to_vec();
    gens.extend(z.generators().iter().cloned());
    let local_group = PermGroup::new(g.degree(), gens)?.into_ref();
    let level = g.exponent();
    let h = h_group(level, p);
    let irr_z = irreducibles(z)?;
    let mut blocks = Vec::new();
    let (mut all_g, mut all_l) = (Vec::new(), Vec::new());
    for orbit in lambda_orbits(g, &irr_z, &h)? {
        let members: Vec<ClassFunction> = orbit.iter().map(|&i| irr_z[i].clone()).collect();
        let gl = rel_pprime_set(g, z, &members, p)?.members;
        let lo = rel_pprime_set(&local_group, z, &members, p)?.members;
        let (gs, ls, verdict, certificate) = compare(&h, &gl, &lo)?;
        all_g.extend(gl);
        all_l.extend(lo);
        blocks.push(Block {
            lambda: orbit,
            global: gs,
            local: ls,
            verdict,
            certificate,
        });
    }
    let (gs, ls, _, _) = compare(&h, &all_g, &all_l)?;
    let verdict = if blocks.iter().all(|b| b.verdict == Verdict::Holds) {
        Verdict::Holds
    } else if blocks.iter().any(|b| b.verdict == Verdict::Fails) {
        Verdict::Fails
    } else {
        Verdict::CountsOnly
    };
    let certificate = if verdict == Verdict::Holds {
        let mut bij = Vec::new();
        let mut offset = 0;
        for b in &blocks {
            if let Certificate::Bijection(v) = &b.certificate {
                bij.extend(v.iter().map(|j| j + offset));
            }
            offset += b.local.count;
        }
        Certificate::Bijection(bij)
    } else {
        blocks
            .iter()
            .find(|b| b.verdict == verdict)
            .map(|b| b.certificate.clone())
            .unwrap()
    };
    Ok(McKayReport {
        schema: REPORT_SCHEMA,
        group: name.to_string(),
        order: g.order(),
        p,
        level,
        h_elements: h.elements,
        sylow_order,
        local_group: "N_G(P)Z".into(),
        local_order: local_group.order(),
        relative_order: Some(z.order()),
        global: gs,
        local: ls,
        blocks,
        verdict,
        certificate,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Report(McKayReport),
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchItem {
    pub name: String,
    pub order: u64,
    pub p: u64,
    pub outcome: Outcome,
}

impl BatchItem {
    pub fn holds(&self) -> bool {
        matches!(&self.outcome, Outcome::Report(r) if r.verdict == Verdict::Holds)
    }
}

fn prime_divisors(n: u64) -> Vec<u64> {
    crate::arith::factorize(n).into_iter().map(|(q, _)| q).collect()
}

/// Run [`verify_mckay`] over the catalog entries accepted by `filter`, for
/// each of `primes` dividing the order (every prime divisor when `None`).
pub fn batch_verify(filter: impl Fn(&CatalogEntry) -> bool, primes: Option<&[u64]>) -> Vec<BatchItem> {
    let jobs: Vec<(CatalogEntry, u64)> = catalog::entries()
        .into_iter()
        .filter(|e| filter(e))
        .flat_map(|e| {
            let ps: Vec<u64> = match primes {
                Some(ps) => ps.iter().copied().filter(|&p| e.order % p == 0).collect(),
                None => prime_divisors(e.order),
            };
            ps.into_iter().map(move |p| (e.clone(), p))
        })
        .collect();
    let cfg = config::current();
    jobs.into_par_iter()
        .map(|(e, p)| {
            config::scoped(cfg.clone(), || {
                let outcome = e
                    .materialize()
                    .and_then(|g| verify_mckay(&g, e.name, p))
                    .map_or_else(|err| Outcome::Error(err.to_string()), Outcome::Report);
                BatchItem {
                    name: e.name.to_string(),
                    order: e.order,
                    p,
                    outcome,
                }
            })
        })
        .collect()
}

/// Data for the inductive condition on a group `X` at the prime `p`.
#[derive(Clone)]
pub struct InductiveWitness {
    pub x: GroupRef,
    pub p: u64,
    /// Permutations of the points of `X` normalizing `X` and a Sylow `p`-subgroup.
    pub gamma: Vec<Perm>,
    pub n: GroupRef,
    /// The pairing `theta -> Omega(theta)` on `p'`-degree characters.
    pub omega: Vec<(ClassFunction, ClassFunction)>,
    /// Supplied `(P, P')` for `omega[i]`, if any.
    pub pairs: Vec<Option<(Arc<ProjRep>, Arc<ProjRep>)>>,
    /// Build the canonical pair when none is supplied.
    pub construct_missing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseReport {
    pub ok: bool,
    pub detail: String,
}

impl ClauseReport {
    fn pass(detail: impl Into<String>) -> Self {
        ClauseReport {
            ok: true,
            detail: detail.into(),
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        ClauseReport {
            ok: false,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaStatus {
    Verified,
    Failed,
    Missing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaReport {
    /// Index into `omega`.
    pub index: usize,
    pub degree: i64,
    pub upper_order: u64,
    pub lower_order: u64,
    pub status: ThetaStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InductiveVerdict {
    Valid,
    Invalid,
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductiveReport {
    pub schema: u32,
    pub p: u64,
    pub x_order: u64,
    pub n_order: u64,
    pub clause_a: ClauseReport,
    pub clause_b: ClauseReport,
    pub clause_c: Vec<ThetaReport>,
    pub verdict: InductiveVerdict,
}

fn normalizes(x: &Perm, u: &PermGroup) -> bool {
    u.generators().iter().all(|s| u.contains(&s.conj(x)))
}

fn clause_a(w: &InductiveWitness) -> ClauseReport {
    let (x, n) = (&w.x, &w.n);
    if let Some(g) = w.gamma.iter().find(|g| g.degree() != x.degree()) {
        return ClauseReport::fail(format!("{g} does not act on the points of X"));
    }
    if let Some(g) = w.gamma.iter().find(|g| !normalizes(g, x)) {
        return ClauseReport::fail(format!("{g} does not normalize X"));
    }
    let r = x.sylow(w.p);
    if let Some(g) = w.gamma.iter().find(|g| !normalizes(g, &r)) {
        return ClauseReport::fail(format!("{g} does not normalize the Sylow subgroup R"));
    }
    if n.degree() != x.degree() || !n.is_subgroup_of(x) {
        return ClauseReport::fail("N is not a subgroup of X");
    }
    if n.order() == x.order() {
        return ClauseReport::fail("N is not proper in X");
    }
    if let Some(g) = w.gamma.iter().find(|g| !normalizes(g, n)) {
        return ClauseReport::fail(format!("N is not stable under {g}"));
    }
    let nr = x.normalizer_of(&r);
    if !nr.is_subgroup_of(n) {
        return ClauseReport::fail("N does not contain N_X(R)");
    }
    ClauseReport::pass(format!("|R| = {}, |N_X(R)| = {}", r.order(), nr.order()))
}

fn clause_b(w: &InductiveWitness, h: &HGroup) -> Result<ClauseReport> {
    let gx = pprime(&w.x, w.p)?;
    let gn = pprime(&w.n, w.p)?;
    let map: HashMap<&ClassFunction, &ClassFunction> = w.omega.iter().map(|(a, b)| (a, b)).collect();
    if map.len() != w.omega.len() || w.omega.len() != gx.len() {
        return Ok(ClauseReport::fail(format!(
            "Omega has {} pairs for {} characters of p'-degree",
            w.omega.len(),
            gx.len()
        )));
    }
    if let Some(c) = gx.iter().find(|c| !map.contains_key(c)) {
        return Ok(ClauseReport::fail(format!("no image for a character of degree {}", c.degree_int())));
    }
    let mut images: Vec<&ClassFunction> = map.values().copied().collect();
    images.sort_by(|a, b| a.values().cmp(b.values()));
    images.dedup();
    if images.len() != gn.len() || !gn.iter().all(|c| images.contains(&c)) {
        return Ok(ClauseReport::fail("Omega is not a bijection onto Irr_p'(N)"));
    }
    for (a, b) in &w.omega {
        for g in &w.gamma {
            if map.get(&a.conjugate(g)).copied() != Some(&b.conjugate(g)) {
                return Ok(ClauseReport::fail(format!(
                    "Omega is not equivariant under {g} at a character of degree {}",
                    a.degree_int()
                )));
            }
        }
        for &k in &h.elements {
            if map.get(&a.galois(k as i64)?).copied() != Some(&b.galois(k as i64)?) {
                return Ok(ClauseReport::fail(format!(
                    "Omega is not equivariant under sigma_{k} at a character of degree {}",
                    a.degree_int()
                )));
            }
        }
    }
    Ok(ClauseReport::pass(format!("{} pairs", w.omega.len())))
}

fn clause_c(w: &InductiveWitness, h: &HGroup) -> Result<Vec<ThetaReport>> {
    let degree = w.x.degree();
    let mut xg = w.x.generators().to_vec();
    xg.extend(w.gamma.iter().cloned());
    let xgamma = PermGroup::new(degree, xg)?.into_ref();
    let mut ng = w.n.generators().to_vec();
    ng.extend(w.gamma.iter().cloned());
    let ngamma = PermGroup::new(degree, ng)?;
    let hg = h_group(xgamma.exponent(), w.p);

    let mut done: Vec<ClassFunction> = Vec::new();
    let mut out = Vec::new();
    for (index, (theta, phi)) in w.omega.iter().enumerate() {
        if done.contains(theta) {
            continue;
        }
        for &k in &h.elements {
            done.push(theta.galois(k as i64)?);
        }
        let upper_group = stabilizer_of_orbit(&xgamma, &w.x, theta, &hg)?.into_ref();
        let lower_group = upper_group.intersection(&ngamma).into_ref();
        let mut report = ThetaReport {
            index,
            degree: theta.degree_int(),
            upper_order: upper_group.order(),
            lower_order: lower_group.order(),
            status: ThetaStatus::Missing,
            detail: String::new(),
        };
        let upper = HTriple::new(upper_group, w.x.clone(), theta.clone(), w.p)?;
        let lower = match HTriple::new(lower_group, w.n.clone(), phi.clone(), w.p) {
            Ok(t) => t,
            Err(e) => {
                report.status = ThetaStatus::Failed;
                report.detail = e.to_string();
                out.push(report);
                continue;
            }
        };
        let supplied = w.pairs.get(index).cloned().flatten();
        let result = match supplied {
            Some((p, pl)) => Some(check_geq_c(&upper, &lower, &p, &pl)),
            None if w.construct_missing => Some(find_witness(&upper, &lower)),
            None => None,
        };
        match result {
            Some(Ok(_)) => {
                report.status = ThetaStatus::Verified;
                report.detail = "order relation verified".into();
            }
            Some(Err(Failure::Input(e))) if matches!(e, Error::SizeLimitExceeded { .. }) => {
                return Err(e);
            }
            Some(Err(f)) => {
                report.status = ThetaStatus::Failed;
                report.detail = f.to_string();
            }
            None => report.detail = "no projective representations supplied".into(),
        }
        out.push(report);
    }
    Ok(out)
}

/// Check clauses (a), (b), (c) of the inductive condition for `w`.
pub fn check_inductive_witness(w: &InductiveWitness) -> Result<InductiveReport> {
    check_prime(w.p)?;
    let h = h_group(w.x.exponent(), w.p);
    let a = clause_a(w);
    let b = if a.ok {
        clause_b(w, &h)?
    } else {
        ClauseReport::fail("not checked")
    };
    let c = if a.ok && b.ok { clause_c(w, &h)? } else { Vec::new() };
    let verdict = if !a.ok || !b.ok || c.iter().any(|t| t.status == ThetaStatus::Failed) {
        InductiveVerdict::Invalid
    } else if c.iter().any(|t| t.status == ThetaStatus::Missing) {
        InductiveVerdict::Incomplete
    } else {
        InductiveVerdict::Valid
    };
    Ok(InductiveReport {
        schema: REPORT_SCHEMA,
        p: w.p,
        x_order: w.x.order(),
        n_order: w.n.order(),
        clause_a: a,
        clause_b: b,
        clause_c: c,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;

    fn cat(name: &str) -> GroupRef {
        lookup(name).unwrap().materialize().unwrap()
    }

    #[test]
    fn s4_at_two() {
        let r = verify_mckay(&cat("S4"), "S4", 2).unwrap();
        assert_eq!((r.global.count, r.local.count), (4, 4));
        assert_eq!(r.local_order, 8);
        assert_eq!(r.verdict, Verdict::Holds);
        let mut d = r.global.degrees.clone();
        d.sort();
        assert_eq!(d, vec![1, 1, 3, 3]);
        assert_eq!(r.local.degrees, vec![1, 1, 1, 1]);
    }

    #[test]
    fn a5_at_two() {
        let r = verify_mckay(&cat("A5"), "A5", 2).unwrap();
        assert_eq!((r.global.count, r.local.count), (4, 4));
        assert_eq!(r.level, 30);
        assert_eq!(r.h_elements, vec![1, 17, 19, 23]);
        for s in [&r.global, &r.local] {
            let mut sizes: Vec<usize> = s.orbits.iter().map(|o| o.members.len()).collect();
            sizes.sort();
            assert_eq!(sizes, vec![1, 1, 2]);
            let two = s.orbits.iter().find(|o| o.members.len() == 2).unwrap();
            assert_eq!(two.stabilizer, vec![1, 19]);
        }
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.global.fixed_points, r.local.fixed_points);
    }

    #[test]
    fn abelian_groups_hold() {
        for name in ["C6", "C4xC4", "C3xC3"] {
            let g = cat(name);
            for p in prime_divisors(g.order()) {
                let r = verify_mckay(&g, name, p).unwrap();
                assert_eq!(r.local_order, g.order());
                assert_eq!(r.verdict, Verdict::Holds);
                assert_eq!(r.global, r.local);
            }
        }
    }

    #[test]
    fn non_prime_is_rejected() {
        assert!(verify_mckay(&cat("S4"), "S4", 4).is_err());
    }

    #[test]
    fn relative_with_trivial_z_matches_plain() {
        let g = cat("S4");
        let z = PermGroup::trivial(4).into_ref();
        let plain = verify_mckay(&g, "S4", 3).unwrap();
        let rel = verify_mckay_relative(&g, "S4", 3, &z).unwrap();
        assert_eq!(rel.blocks.len(), 1);
        assert_eq!(rel.global.count, plain.global.count);
        assert_eq!(rel.local.count, plain.local.count);
        assert_eq!(rel.verdict, Verdict::Holds);
    }

    #[test]
    fn relative_over_the_centre() {
        let g = cat("SL(2,3)");
        let z = g.center().into_ref();
        let r = verify_mckay_relative(&g, "SL(2,3)", 3, &z).unwrap();
        assert_eq!(r.local_order, 6);
        assert_eq!(r.blocks.len(), 2);
        assert_eq!(r.verdict, Verdict::Holds);
        let v4 = cat("S4").derived_subgroup().derived_subgroup().into_ref();
        let rel = verify_mckay_relative(&cat("S4"), "S4", 2, &v4).unwrap();
        assert_eq!(rel.verdict, Verdict::Holds);
        let not_normal = PermGroup::new(4, vec![Perm::from_cycles(4, &[vec![0, 1]]).unwrap()])
            .unwrap()
            .into_ref();
        assert!(verify_mckay_relative(&cat("S4"), "S4", 2, &not_normal).is_err());
    }

    #[test]
    fn report_roundtrips() {
        let r = verify_mckay(&cat("D10"), "D10", 5).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: McKayReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        assert!(s.contains("\"HOLDS\""));
    }

    #[test]
    fn batch_records_size_errors() {
        let cfg = config::Config {
            max_table_order: 100,
            ..config::current()
        };
        let items = config::scoped(cfg, || {
            batch_verify(|e| e.name == "A6" || e.name == "C5", Some(&[2, 5]))
        });
        assert_eq!(items.len(), 3);
        let a6: Vec<_> = items.iter().filter(|i| i.name == "A6").collect();
        assert_eq!(a6.len(), 2);
        assert!(a6
            .iter()
            .all(|i| matches!(&i.outcome, Outcome::Error(e) if e.contains("exceeds"))));
        assert!(items.iter().find(|i| i.name == "C5").unwrap().holds());
        assert!(batch_verify(|_| false, None).is_empty());
    }

    fn a5_witness() -> InductiveWitness {
        let x = cat("A5");
        let r = x.sylow(2);
        let fixed = (0..5).find(|&i| r.generators().iter().all(|g| g.image(i) == i)).unwrap();
        let moved: Vec<usize> = (0..5).filter(|&i| i != fixed).collect();
        let gamma = vec![Perm::from_cycles(5, &[vec![moved[0], moved[1]]]).unwrap()];
        let n = x.normalizer_of(&r).into_ref();
        assert_eq!(n.order(), 12);
        let gx = pprime(&x, 2).unwrap();
        let gn = pprime(&n, 2).unwrap();
        let by_deg = |s: &[ClassFunction], d: i64| -> Vec<ClassFunction> {
            s.iter().filter(|c| c.degree_int() == d).cloned().collect()
        };
        let triv = |s: &[ClassFunction]| s.iter().find(|c| c.kernel().order() == c.group().order()).unwrap().clone();
        let three = by_deg(&gx, 3)[0].clone();
        let lam = gn
            .iter()
            .find(|c| c.degree_int() == 1 && c.kernel().order() != 12)
            .unwrap()
            .clone();
        let omega = vec![
            (triv(&gx), triv(&gn)),
            (by_deg(&gx, 5)[0].clone(), by_deg(&gn, 3)[0].clone()),
            (three.clone(), lam.clone()),
            (three.galois(2).unwrap(), lam.galois(2).unwrap()),
        ];
        InductiveWitness {
            x,
            p: 2,
            gamma,
            n,
            omega,
            pairs: Vec::new(),
            construct_missing: true,
        }
    }

    #[test]
    fn inductive_a5_with_a_transposition() {
        let w = a5_witness();
        let r = check_inductive_witness(&w).unwrap();
        assert!(r.clause_a.ok, "{}", r.clause_a.detail);
        assert!(r.clause_b.ok, "{}", r.clause_b.detail);
        assert_eq!(r.clause_c.len(), 3);
        for t in &r.clause_c {
            assert_eq!(t.upper_order, 120);
            assert_eq!(t.lower_order, 24);
        }
        assert_eq!(r.verdict, InductiveVerdict::Valid, "{:?}", r.clause_c);
    }

    #[test]
    fn inductive_negatives() {
        let mut w = a5_witness();
        w.construct_missing = false;
        let r = check_inductive_witness(&w).unwrap();
        assert_eq!(r.verdict, InductiveVerdict::Incomplete);
        assert!(r.clause_c.iter().all(|t| t.status == ThetaStatus::Missing));

        let mut w = a5_witness();
        let (a, b) = (w.omega[0].1.clone(), w.omega[2].1.clone());
        w.omega[0].1 = b;
        w.omega[2].1 = a;
        let r = check_inductive_witness(&w).unwrap();
        assert!(r.clause_a.ok);
        assert!(!r.clause_b.ok);
        assert!(r.clause_b.detail.contains("equivariant"));
        assert_eq!(r.verdict, InductiveVerdict::Invalid);

        let mut w = a5_witness();
        w.n = w.x.sylow(2).into_ref();
        let r = check_inductive_witness(&w).unwrap();
        assert!(r.clause_a.detail.contains("N_X(R)"));

        let mut w = a5_witness();
        w.n = w.x.clone();
        let r = check_inductive_witness(&w).unwrap();
        assert!(r.clause_a.detail.contains("proper"));
    }

    #[test]
    fn inductive_sl25_trivial_gamma() {
        let x = cat("SL(2,5)");
        let n = x.normalizer_of(&x.sylow(2)).into_ref();
        assert_eq!(n.order(), 24);
        let gx = pprime(&x, 2).unwrap();
        let gn = pprime(&n, 2).unwrap();
        let h = h_group(x.exponent(), 2);
        // pair H-orbits with matching stabilizers and degrees 1 <-> 1, 5 <-> 3
        let ax = HAction::on_characters(&h, &gx).unwrap();
        let an = HAction::on_characters(&h, &gn).unwrap();
        let bij = match permutation_isomorphic(&ax, &an).unwrap() {
            IsoCertificate::Bijection(b) => b,
            other => panic!("{other:?}"),
        };
        let omega: Vec<_> = gx.iter().cloned().zip(bij.iter().map(|&j| gn[j].clone())).collect();
        let w = InductiveWitness {
            x,
            p: 2,
            gamma: Vec::new(),
            n,
            omega,
            pairs: Vec::new(),
            construct_missing: false,
        };
        let r = check_inductive_witness(&w).unwrap();
        assert!(r.clause_a.ok, "{}", r.clause_a.detail);
        assert!(r.clause_b.ok, "{}", r.clause_b.detail);
        assert_eq!(r.verdict, InductiveVerdict::Incomplete);
    }
}
