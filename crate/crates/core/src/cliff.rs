//! Clifford theory: inertia groups, characters over orbits, correspondents.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::chartab::{irreducibles, ClassFunction};
use crate::error::{Error, Result};
use crate::group::{orbit_stabilizer, GroupRef, PermGroup};
use crate::hgal::HGroup;

fn check_normal(g: &PermGroup, n: &PermGroup) -> Result<()> {
    if n.is_normal_in(g) {
        Ok(())
    } else {
        Err(Error::NotNormal)
    }
}

/// `G_theta = { g : theta^g = theta }`.
pub fn inertia_group(g: &GroupRef, n: &GroupRef, theta: &ClassFunction) -> Result<PermGroup> {
    check_normal(g, n)?;
    let (_, _, stab) = orbit_stabilizer(g.degree(), g.generators(), theta.clone(), |c, s| {
        c.conjugate(s)
    });
    // the stabilizer always contains N; add its generators for a tidy generating set
    let mut gens = stab.generators().to_vec();
    for x in n.generators() {
        if !stab.contains(x) {
            gens.push(x.clone());
        }
    }
    PermGroup::new(g.degree(), gens)
}

/// Least value tuple in the `H`-orbit of `theta`.
fn h_canonical(theta: &ClassFunction, h: &HGroup) -> ClassFunction {
    h.elements
        .iter()
        .map(|&k| theta.galois(k as i64).expect("H acts on character values"))
        .min_by(|a, b| a.values().cmp(b.values()))
        .unwrap()
}

/// `G_{theta^H} = { g : theta^g = theta^sigma for some sigma in H_n }`.
pub fn stabilizer_of_orbit(
    g: &GroupRef,
    n: &GroupRef,
    theta: &ClassFunction,
    h: &HGroup,
) -> Result<PermGroup> {
    check_normal(g, n)?;
    let start = h_canonical(theta, h);
    let (_, _, stab) = orbit_stabilizer(g.degree(), g.generators(), start, |c, s| {
        h_canonical(&c.conjugate(s), h)
    });
    let mut gens = stab.generators().to_vec();
    for x in n.generators() {
        if !stab.contains(x) {
            gens.push(x.clone());
        }
    }
    PermGroup::new(g.degree(), gens)
}

/// Irreducible characters of `G` lying over some member of `base`.
#[derive(Debug, Clone)]
pub struct CharSetOver {
    pub group: GroupRef,
    pub normal: GroupRef,
    pub base: Vec<ClassFunction>,
    pub members: Vec<ClassFunction>,
}

impl CharSetOver {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn lies_over(chi: &ClassFunction, theta: &ClassFunction) -> Result<bool> {
    let res = chi.restrict(theta.group())?;
    Ok(!res.inner(theta)?.is_zero())
}

pub fn irr_over(g: &GroupRef, n: &GroupRef, orbit: &[ClassFunction]) -> Result<CharSetOver> {
    let mut members = Vec::new();
    for chi in irreducibles(g)? {
        let res = chi.restrict(n)?;
        let mut over = false;
        for theta in orbit {
            if !res.inner(theta)?.is_zero() {
                over = true;
                break;
            }
        }
        if over {
            members.push(chi);
        }
    }
    Ok(CharSetOver {
        group: g.clone(),
        normal: n.clone(),
        base: orbit.to_vec(),
        members,
    })
}

/// `chi^G` for `chi` in `Irr(G_theta | theta)`.
pub fn clifford_correspondent(
    chi: &ClassFunction,
    g: &GroupRef,
    theta: &ClassFunction,
) -> Result<ClassFunction> {
    let n = theta.group();
    if !chi.is_irreducible() || !lies_over(chi, theta)? {
        return Err(Error::NotIrreducibleOverTheta);
    }
    let gt = inertia_group(g, n, theta)?;
    if gt != **chi.group() {
        return Err(Error::NotIrreducibleOverTheta);
    }
    let ind = chi.induce(g)?;
    if !ind.is_irreducible() {
        return Err(Error::NotIrreducibleOverTheta);
    }
    Ok(ind)
}

/// The unique `psi` in `Irr(G_theta | theta)` inducing to `chi`.
pub fn clifford_preimage(
    chi: &ClassFunction,
    gt: &GroupRef,
    theta: &ClassFunction,
) -> Result<ClassFunction> {
    let res = chi.restrict(gt)?;
    let mut found = None;
    for psi in irreducibles(gt)? {
        if !res.inner(&psi)?.is_zero() && lies_over(&psi, theta)? {
            if found.is_some() {
                return Err(Error::NotIrreducibleOverTheta);
            }
            found = Some(psi);
        }
    }
    found.ok_or(Error::NotOver)
}

pub fn degree_ratio(chi: &ClassFunction, theta: &ClassFunction) -> Result<BigRational> {
    if !lies_over(chi, theta)? {
        return Err(Error::NotOver);
    }
    let a = chi.degree().as_rational().unwrap();
    let b = theta.degree().as_rational().unwrap();
    Ok(a / b)
}

/// Members of `Irr(G | orbit)` whose degree ratio over the orbit is prime to `p`.
pub fn rel_pprime_set(
    g: &GroupRef,
    z: &GroupRef,
    orbit: &[ClassFunction],
    p: u64,
) -> Result<CharSetOver> {
    let mut set = irr_over(g, z, orbit)?;
    let lambda_deg = orbit
        .first()
        .map(|l| l.degree().as_rational().unwrap())
        .unwrap_or_else(|| BigRational::from_integer(1.into()));
    let pp = BigInt::from(p);
    set.members.retain(|chi| {
        let r = chi.degree().as_rational().unwrap() / &lambda_deg;
        !(r.is_integer() && (r.to_integer() % &pp).is_zero())
    });
    Ok(set)
}

/// Ramification index `e` with `chi_N = e * (sum of the G-orbit of theta)`.
pub fn ramification(chi: &ClassFunction, theta: &ClassFunction) -> Result<i64> {
    chi.restrict(theta.group())?.multiplicity(theta)
}
