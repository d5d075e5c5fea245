//! The order `>=_c` on `H`-triples and the character bijections it yields.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::lcm;
use crate::chartab::{character_table, irreducibles, ClassFunction};
use crate::cliff::{clifford_preimage, inertia_group, lies_over};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::group::{GroupRef, PermGroup};
use crate::hgal::{h_group, HGroup, HTriple};
use crate::mat::Mat;
use crate::perm::Perm;
use crate::projrep::{projective_rep, rep_afford, ProjRep};

/// The first violated condition of the order, with a counterexample datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    I(String),
    II(String),
    III(String),
    IV(String),
    Input(Error),
}

impl Failure {
    pub fn condition(&self) -> &'static str {
        match self {
            Failure::I(_) => "i",
            Failure::II(_) => "ii",
            Failure::III(_) => "iii",
            Failure::IV(_) => "iv",
            Failure::Input(_) => "input",
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(e) => write!(f, "input: {e}"),
            Failure::I(s) | Failure::II(s) | Failure::III(s) | Failure::IV(s) => {
                write!(f, "condition ({}) fails: {s}", self.condition())
            }
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Transcript {
    /// Level `n` of `H_n` used for the `mu`-functions.
    pub level: u64,
    pub h_order: usize,
    /// `|(H x H)_theta|` at the level of `exp(G)`.
    pub stabilizer_size: usize,
    pub factor_pairs_checked: usize,
    pub central_elements_checked: usize,
    /// One `(h, k)` per `H_theta`-coset of `(H x H)_theta`.
    pub mu_representatives: Vec<(String, u64)>,
}

#[derive(Debug, Clone)]
pub struct OrderWitness {
    pub upper: HTriple,
    pub lower: HTriple,
    pub proj: Arc<ProjRep>,
    pub proj_low: Arc<ProjRep>,
    pub transcript: Transcript,
}

/// Pairs `(h, k)` with `h` in `H` and `theta^{h k} = theta`.
fn stabilizer_pairs(h: &PermGroup, theta: &ClassFunction, ks: &[u64]) -> Result<Vec<(usize, u64)>> {
    let mut out = Vec::new();
    for (i, x) in h.elements().iter().enumerate() {
        let t = theta.conjugate(x);
        for &k in ks {
            if t.galois(k as i64)? == *theta {
                out.push((i, k));
            }
        }
    }
    Ok(out)
}

fn stabilizes(theta: &ClassFunction, h: &Perm, k: u64) -> Result<bool> {
    Ok(theta.conjugate(h).galois(k as i64)? == *theta)
}

fn same_group(a: &GroupRef, b: &PermGroup) -> bool {
    **a == *b
}

/// Conditions (i) and (ii); returns `(H x H)_theta` at the level of `exp(G)`.
pub fn check_structure(
    upper: &HTriple,
    lower: &HTriple,
) -> std::result::Result<Vec<(usize, u64)>, Failure> {
    if upper.p != lower.p {
        return Err(Failure::Input(Error::InvalidInput("triples use different primes".into())));
    }
    let g = &upper.group;
    let n = &upper.normal;
    let h = &lower.group;
    let m = &lower.normal;
    let theta = &upper.theta;
    let phi = &lower.theta;

    // (i)
    if !h.is_subgroup_of(g) {
        return Err(Failure::I("H is not a subgroup of G".into()));
    }
    let mut nh = n.generators().to_vec();
    nh.extend(h.generators().iter().cloned());
    if PermGroup::new(g.degree(), nh)?.order() != g.order() {
        return Err(Failure::I("G != NH".into()));
    }
    if n.intersection(h) != **m {
        return Err(Failure::I("N meet H != M".into()));
    }
    let cgn = g.centralizer_of(n);
    if let Some(c) = cgn.elements().iter().find(|c| !h.contains(c)) {
        return Err(Failure::I(format!("{c} centralizes N but is not in H")));
    }

    // (ii)
    let base = h_group(g.exponent(), upper.p);
    let st = stabilizer_pairs(h, theta, &base.elements)?;
    let sp = stabilizer_pairs(h, phi, &base.elements)?;
    if st != sp {
        let datum = st
            .iter()
            .find(|x| !sp.contains(x))
            .or_else(|| sp.iter().find(|x| !st.contains(x)))
            .map(|(i, k)| format!("({}, {k})", h.elements()[*i]))
            .unwrap_or_default();
        return Err(Failure::II(format!("stabilizers differ at {datum}")));
    }

    Ok(st)
}

/// Verify that `(P, P')` gives `upper >=_c lower`.
pub fn check_geq_c(
    upper: &HTriple,
    lower: &HTriple,
    p: &Arc<ProjRep>,
    pl: &Arc<ProjRep>,
) -> std::result::Result<OrderWitness, Failure> {
    let g = &upper.group;
    let n = &upper.normal;
    let h = &lower.group;
    let m = &lower.normal;
    let theta = &upper.theta;
    let phi = &lower.theta;
    let st = check_structure(upper, lower)?;
    let cgn = g.centralizer_of(n);

    // shape of the projective representations
    let gt = upper.inertia();
    let ht = gt.intersection(h);
    if !same_group(p.group(), &gt) || p.normal() != n || p.theta() != theta {
        return Err(Failure::Input(Error::InvalidInput(
            "P is not a projective representation of G_theta over theta".into(),
        )));
    }
    if !same_group(pl.group(), &ht) || pl.normal() != m || pl.theta() != phi {
        return Err(Failure::Input(Error::InvalidInput(
            "P' is not a projective representation of H_theta over phi".into(),
        )));
    }

    // (iii)
    if !p.factor_set().roots_of_unity() {
        return Err(Failure::III("a value of alpha is not a root of unity".into()));
    }
    if !pl.factor_set().roots_of_unity() {
        return Err(Failure::III("a value of alpha' is not a root of unity".into()));
    }
    let tl = pl.transversal();
    let mut pairs = 0;
    for x in tl {
        for y in tl {
            if p.alpha(x, y) != pl.alpha(x, y) {
                return Err(Failure::III(format!(
                    "alpha({x}, {y}) = {} but alpha'({x}, {y}) = {}",
                    p.alpha(x, y),
                    pl.alpha(x, y)
                )));
            }
            pairs += 1;
        }
    }
    for c in cgn.elements() {
        let a = p.at(c).scalar_value();
        let b = pl.at(c).scalar_value();
        if a.is_none() || a != b {
            return Err(Failure::III(format!("P({c}) and P'({c}) give different scalars")));
        }
    }

    // (iv) on one representative per H_theta-coset
    let level = lcm(lcm(g.exponent(), p.conductor()), pl.conductor());
    let hk = h_group(level, upper.p);
    let mut reps = Vec::new();
    for &k in &hk.elements {
        let Some(x) = h
            .elements()
            .iter()
            .find(|x| stabilizes(theta, x, k).unwrap_or(false))
        else {
            continue;
        };
        let mu = p.mu(x, k as i64)?;
        let mul = pl.mu(x, k as i64)?;
        for y in tl {
            if mu.at(p, y) != mul.at(pl, y) {
                return Err(Failure::IV(format!(
                    "mu and mu' differ at y = {y} for (h, k) = ({x}, {k})"
                )));
            }
        }
        reps.push((x.to_string(), k));
    }
    Ok(OrderWitness {
        upper: upper.clone(),
        lower: lower.clone(),
        proj: p.clone(),
        proj_low: pl.clone(),
        transcript: Transcript {
            level,
            h_order: hk.order(),
            stabilizer_size: st.len(),
            factor_pairs_checked: pairs,
            central_elements_checked: cgn.elements().len(),
            mu_representatives: reps,
        },
    })
}

/// All `eps` on the transversal of `P'` with `delta(eps) alpha' = alpha` there.
fn matching_rescalings(p: &ProjRep, pl: &ProjRep) -> Result<Vec<Vec<Cyclo>>> {
    let tl = pl.transversal();
    let r = tl.len();
    let beta = |x: &Perm, y: &Perm| -> Result<Cyclo> { p.alpha(x, y).div(&pl.alpha(x, y)) };
    let gens: Vec<Perm> = pl
        .group()
        .generators()
        .iter()
        .filter(|s| pl.coset_index(s) != 0)
        .cloned()
        .collect();
    // eps(s)^r = prod_y beta(s, y)
    let mut choices: Vec<Vec<Cyclo>> = Vec::new();
    for s in &gens {
        let mut c = Cyclo::one();
        for y in tl {
            c = &c * &beta(s, y)?;
        }
        let (o, e) = c.root_of_unity_order().ok_or_else(|| {
            Error::NormalizationFailed("factor set ratio is not a root of unity".into())
        })?;
        let big = o as usize * r;
        let roots: Vec<Cyclo> = (0..big)
            .filter(|j| (j * r) % big == (e as usize * r) % big)
            .map(|j| Cyclo::root_of_unity(big as u32, j as i64))
            .collect();
        choices.push(roots);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; gens.len()];
    loop {
        let mut eps: Vec<Option<Cyclo>> = vec![None; r];
        eps[0] = Some(Cyclo::one());
        let mut queue = vec![0usize];
        let mut ok = true;
        while let Some(i) = queue.pop() {
            let x = &tl[i];
            let ex = eps[i].clone().unwrap();
            for (gi, s) in gens.iter().enumerate() {
                let sx = s.mul(x);
                let j = pl.coset_index(&sx);
                // eps(s x) = eps(s) eps(x) / beta(s, x)
                let v = (&choices[gi][idx[gi]] * &ex).div(&beta(s, x)?)?;
                match &eps[j] {
                    None => {
                        eps[j] = Some(v);
                        queue.push(j);
                    }
                    Some(w) if *w != v => {
                        ok = false;
                        break;
                    }
                    _ => {}
                }
            }
            if !ok {
                break;
            }
        }
        if ok && eps.iter().all(|e| e.is_some()) {
            let eps: Vec<Cyclo> = eps.into_iter().map(|e| e.unwrap()).collect();
            let mut good = true;
            'pairs: for x in tl {
                for y in tl {
                    let lhs = &(&eps[pl.coset_index(x)] * &eps[pl.coset_index(y)])
                        * &pl.alpha(x, y);
                    let rhs = &eps[pl.coset_index(&x.mul(y))] * &p.alpha(x, y);
                    if lhs != rhs {
                        good = false;
                        break 'pairs;
                    }
                }
            }
            if good {
                out.push(eps);
            }
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Canonical `P` on `G_theta` and every rescaling of the canonical `P'` on
/// `H_theta` whose factor set is the restriction of `P`'s.
pub fn candidate_pairs(upper: &HTriple, lower: &HTriple) -> Result<Vec<(Arc<ProjRep>, Arc<ProjRep>)>> {
    let gt = upper.inertia().into_ref();
    let ht = gt.intersection(&lower.group).into_ref();
    let p = Arc::new(projective_rep(&gt, &upper.normal, &upper.theta)?);
    let pl0 = projective_rep(&ht, &lower.normal, &lower.theta)?;
    let mut out = Vec::new();
    for eps in matching_rescalings(&p, &pl0)? {
        out.push((p.clone(), Arc::new(pl0.rescale(&eps)?)));
    }
    Ok(out)
}

/// Search the canonical candidate pairs for one giving `upper >=_c lower`.
pub fn find_witness(upper: &HTriple, lower: &HTriple) -> std::result::Result<OrderWitness, Failure> {
    check_structure(upper, lower)?;
    let pairs = candidate_pairs(upper, lower)?;
    let mut last = Failure::III("no rescaling of P' matches the factor set of P".into());
    for (p, pl) in pairs {
        match check_geq_c(upper, lower, &p, &pl) {
            Ok(w) => return Ok(w),
            Err(f @ (Failure::I(_) | Failure::II(_) | Failure::Input(_))) => return Err(f),
            Err(f) => last = f,
        }
    }
    Err(last)
}

/// A bijection between two sets of irreducible characters.
#[derive(Debug, Clone)]
pub struct CharBijection {
    pub pairs: Vec<(ClassFunction, ClassFunction)>,
}

impl CharBijection {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn image(&self, chi: &ClassFunction) -> Option<&ClassFunction> {
        self.pairs.iter().find(|(a, _)| a == chi).map(|(_, b)| b)
    }

    pub fn is_bijective(&self) -> bool {
        let n = self.pairs.len();
        for i in 0..n {
            for j in i + 1..n {
                if self.pairs[i].0 == self.pairs[j].0 || self.pairs[i].1 == self.pairs[j].1 {
                    return false;
                }
            }
        }
        true
    }

    /// `chi(1)/theta(1) = tau(chi)(1)/phi(1)` for every pair.
    pub fn preserves_ratios(&self, theta_deg: i64, phi_deg: i64) -> bool {
        self.pairs.iter().all(|(a, b)| {
            BigRational::new(BigInt::from(a.degree_int()), BigInt::from(theta_deg))
                == BigRational::new(BigInt::from(b.degree_int()), BigInt::from(phi_deg))
        })
    }

    /// `tau(chi^k) = tau(chi)^k` for every `k` given.
    pub fn is_equivariant(&self, ks: &[u64]) -> Result<bool> {
        for &k in ks {
            for (a, b) in &self.pairs {
                let ak = a.galois(k as i64)?;
                match self.image(&ak) {
                    Some(img) if *img == b.galois(k as i64)? => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }

    /// Equality as sets of pairs.
    pub fn same_map(&self, other: &CharBijection) -> bool {
        self.len() == other.len()
            && self.pairs.iter().all(|(a, b)| other.image(a) == Some(b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauMethod {
    /// Values `chi(h) tr P'(h) / tr P(h)` where `tr P(h) != 0`.
    Traces,
    /// Decompose a representation as `Q (x) P_J` and form `Q (x) P'`.
    Tensor,
}

fn characters_over(j: &GroupRef, theta: &ClassFunction) -> Result<Vec<ClassFunction>> {
    let mut out = Vec::new();
    for chi in irreducibles(j)? {
        if lies_over(&chi, theta)? {
            out.push(chi);
        }
    }
    Ok(out)
}

fn characters_over_any(g: &GroupRef, orbit: &[ClassFunction]) -> Result<usize> {
    let mut count = 0;
    for chi in irreducibles(g)? {
        let res = chi.restrict(orbit[0].group())?;
        let mut over = false;
        for t in orbit {
            if !res.inner(t)?.is_zero() {
                over = true;
                break;
            }
        }
        if over {
            count += 1;
        }
    }
    Ok(count)
}

/// `tau_J : Irr(J | theta) -> Irr(J meet H | phi)` for `N <= J <= G_theta`.
pub fn build_tau_j(w: &OrderWitness, j: &GroupRef) -> Result<CharBijection> {
    match build_tau_j_with(w, j, TauMethod::Traces) {
        Err(Error::AmbiguousTransfer(_)) => build_tau_j_with(w, j, TauMethod::Tensor),
        r => r,
    }
}

pub fn build_tau_j_with(w: &OrderWitness, j: &GroupRef, method: TauMethod) -> Result<CharBijection> {
    let theta = &w.upper.theta;
    let phi = &w.lower.theta;
    let n = &w.upper.normal;
    if !n.is_subgroup_of(j) || !j.is_subgroup_of(w.proj.group()) {
        return Err(Error::InvalidInput("J must lie between N and G_theta".into()));
    }
    let jh = j.intersection(&w.lower.group).into_ref();
    let sources = characters_over(j, theta)?;
    let targets = characters_over(&jh, phi)?;
    let td = theta.degree_int();
    let pd = phi.degree_int();
    let mut pairs = Vec::new();
    for chi in sources {
        let img = match method {
            TauMethod::Traces => transfer_by_traces(w, &chi, &jh, &targets, td, pd)?,
            TauMethod::Tensor => transfer_by_tensor(w, &chi, j, &jh)?,
        };
        if !targets.contains(&img) {
            return Err(Error::Check(format!("image of {chi:?} is not over phi")));
        }
        pairs.push((chi, img));
    }
    let b = CharBijection { pairs };
    if !b.is_bijective() || b.len() != targets.len() {
        return Err(Error::Check("tau_J is not a bijection".into()));
    }
    Ok(b)
}

fn transfer_by_traces(
    w: &OrderWitness,
    chi: &ClassFunction,
    jh: &GroupRef,
    targets: &[ClassFunction],
    td: i64,
    pd: i64,
) -> Result<ClassFunction> {
    let deg = BigRational::new(BigInt::from(chi.degree_int() * pd), BigInt::from(td));
    let mut known: Vec<(usize, Cyclo)> = Vec::new();
    for (c, rep) in jh.classes().reps.iter().enumerate() {
        let tp = w.proj.trace(rep);
        if tp.is_zero() {
            continue;
        }
        let v = (&chi.at(rep) * &w.proj_low.trace(rep)).div(&tp)?;
        known.push((c, v));
    }
    let cands: Vec<&ClassFunction> = targets
        .iter()
        .filter(|psi| psi.degree().as_rational() == Some(deg.clone()))
        .filter(|psi| known.iter().all(|(c, v)| psi.value(*c) == v))
        .collect();
    match cands.len() {
        1 => Ok(cands[0].clone()),
        0 => Err(Error::Check("no character matches the transferred values".into())),
        _ => Err(Error::AmbiguousTransfer(format!("{} candidates", cands.len()))),
    }
}

/// Coordinates of `v` in the span of `basis`, all as flattened matrices.
fn coordinates(basis: &[Mat], v: &Mat) -> Result<Vec<Cyclo>> {
    let cols: Vec<Vec<Cyclo>> = basis.iter().map(|b| b.entries().to_vec()).collect();
    let a = Mat::from_cols(&cols);
    let mut at = a.transpose();
    let pivots = at.rref();
    let sub: Vec<Vec<Cyclo>> = pivots.iter().map(|&i| a.row(i)).collect();
    let sub = Mat::from_rows(sub)?;
    let rhs: Vec<Cyclo> = pivots.iter().map(|&i| v.entries()[i].clone()).collect();
    let c = sub.inverse()?.mul_vec(&rhs);
    let mut check = Mat::zeros(v.rows(), v.cols());
    for (b, x) in basis.iter().zip(&c) {
        check = check.add(&b.scale(x));
    }
    if check != *v {
        return Err(Error::NormalizationFailed("matrix outside the intertwiner space".into()));
    }
    Ok(c)
}

fn transfer_by_tensor(
    w: &OrderWitness,
    chi: &ClassFunction,
    j: &GroupRef,
    jh: &GroupRef,
) -> Result<ClassFunction> {
    let x = rep_afford(j, chi)?;
    let d = w.proj.rep();
    let homs = d.homs_to(&|n: &Perm| x.mat(n).clone())?;
    let e = (chi.degree_int() / w.upper.theta.degree_int()) as usize;
    if homs.len() != e {
        return Err(Error::NormalizationFailed("wrong number of intertwiners".into()));
    }
    let vals = jh
        .classes()
        .reps
        .iter()
        .map(|h| {
            let pinv = w.proj.at(h).inverse()?;
            let mut tr = Cyclo::zero();
            for (i, s) in homs.iter().enumerate() {
                let img = x.mat(h).mul(s).mul(&pinv);
                tr = &tr + &coordinates(&homs, &img)?[i];
            }
            Ok(&tr * &w.proj_low.trace(h))
        })
        .collect::<Result<Vec<_>>>()?;
    let psi = ClassFunction::new(jh.clone(), vals)?;
    if !psi.is_irreducible() {
        return Err(Error::NormalizationFailed("tensor transfer is reducible".into()));
    }
    Ok(psi)
}

/// The `H`-equivariant bijection `Irr(G | theta^H) -> Irr(H | phi^H)`.
pub fn build_tau(w: &OrderWitness) -> Result<CharBijection> {
    let g = &w.upper.group;
    let h = &w.lower.group;
    let theta = &w.upper.theta;
    let phi = &w.lower.theta;
    let gt = w.proj.group().clone();
    let tau_gt = build_tau_j(w, &gt)?;
    let level = g.exponent();
    let hg = h_group(level, w.upper.p);
    // representatives theta^{k_i} of the G-orbits on theta^H
    let transversal = g.right_transversal(&gt);
    let mut reps: Vec<(u64, Vec<ClassFunction>)> = Vec::new();
    for &k in &hg.elements {
        let tk = theta.galois(k as i64)?;
        if reps.iter().any(|(_, orbit)| orbit.contains(&tk)) {
            continue;
        }
        let orbit: Vec<ClassFunction> = transversal.iter().map(|t| tk.conjugate(t)).collect();
        reps.push((k, orbit));
    }
    let over_theta = characters_over(g, theta)?;
    let mut pairs = Vec::new();
    for chi in &over_theta {
        let psi = clifford_preimage(chi, &gt, theta)?;
        let img = tau_gt
            .image(&psi)
            .ok_or_else(|| Error::Check("Clifford correspondent outside the domain".into()))?
            .induce(h)?;
        if !img.is_irreducible() || !lies_over(&img, phi)? {
            return Err(Error::Check("induced image is not irreducible over phi".into()));
        }
        pairs.push((chi.clone(), img));
    }
    let mut glued = Vec::new();
    for (k, _) in &reps {
        for (chi, img) in &pairs {
            glued.push((chi.galois(*k as i64)?, img.galois(*k as i64)?));
        }
    }
    let b = CharBijection { pairs: glued };
    let orbit: Vec<ClassFunction> = reps.iter().flat_map(|(_, o)| o.iter().cloned()).collect();
    let domain = characters_over_any(g, &orbit)?;
    if !b.is_bijective() || b.len() != domain {
        return Err(Error::Check("glued map is not a bijection".into()));
    }
    Ok(b)
}

/// `hat tau(chi) = tau(psi)^H` where `psi^G = chi`, for a witness on the
/// stabilizers of the `H`-orbits.
pub fn extend_tau_nonfull(
    w: &OrderWitness,
    g: &GroupRef,
    h: &GroupRef,
) -> Result<CharBijection> {
    let gs = &w.upper.group;
    let n = &w.upper.normal;
    if !gs.is_subgroup_of(g) || !w.lower.group.is_subgroup_of(h) || !n.is_normal_in(g) {
        return Err(Error::InvalidInput("witness groups must lie in the ambient groups".into()));
    }
    let tau = build_tau(w)?;
    let mut pairs = Vec::new();
    for chi in irreducibles(g)? {
        let res = chi.restrict(gs)?;
        let psi = tau.pairs.iter().map(|(a, _)| a).find(|a| {
            res.inner(a).map(|c| !c.is_zero()).unwrap_or(false)
                && a.induce(g).map(|x| x == chi).unwrap_or(false)
        });
        if let Some(psi) = psi {
            let img = tau.image(psi).unwrap().induce(h)?;
            pairs.push((chi, img));
        }
    }
    let b = CharBijection { pairs };
    let theta = &w.upper.theta;
    let hg = h_group(g.exponent(), w.upper.p);
    let orbit: Vec<ClassFunction> = hg
        .elements
        .iter()
        .map(|&k| theta.galois(k as i64))
        .collect::<Result<_>>()?;
    if !b.is_bijective() || b.len() != characters_over_any(g, &orbit)? {
        return Err(Error::Check("extended map is not a bijection".into()));
    }
    Ok(b)
}

/// `H_G`: residues `k` for which `theta^k` is `G`-conjugate to `theta`.
pub fn h_of_orbit(w: &OrderWitness) -> Result<HGroup> {
    let g = &w.upper.group;
    let theta = &w.upper.theta;
    let gt = inertia_group(g, &w.upper.normal, theta)?;
    let orbit: Vec<ClassFunction> = g
        .right_transversal(&gt)
        .iter()
        .map(|t| theta.conjugate(t))
        .collect();
    let hg = h_group(g.exponent(), w.upper.p);
    let mut keep = Vec::new();
    for &k in &hg.elements {
        if orbit.contains(&theta.galois(k as i64)?) {
            keep.push(k);
        }
    }
    Ok(hg.subgroup(|k| keep.contains(&k)))
}

pub fn table_size(g: &GroupRef) -> Result<usize> {
    Ok(character_table(g)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::irreducibles;

    fn sym(n: usize) -> GroupRef {
        let t = Perm::from_cycles(n, &[vec![0, 1]]).unwrap();
        let c = Perm::from_cycles(n, &[(0..n).collect()]).unwrap();
        PermGroup::new(n, vec![t, c]).unwrap().into_ref()
    }

    fn s4_witness() -> (HTriple, HTriple) {
        let g = sym(4);
        let a4 = g.derived_subgroup().into_ref();
        let theta = irreducibles(&a4).unwrap().into_iter().find(|c| c.degree_int() == 3).unwrap();
        let h = PermGroup::new(4, vec![Perm::from_cycles(4, &[vec![0, 1]]).unwrap()]).unwrap().into_ref();
        let one = PermGroup::trivial(4).into_ref();
        let phi = ClassFunction::trivial(&one);
        (
            HTriple::new(g, a4, theta, 2).unwrap(),
            HTriple::new(h, one, phi, 2).unwrap(),
        )
    }

    #[test]
    fn s4_over_a4_against_c2() {
        let (up, low) = s4_witness();
        let w = find_witness(&up, &low).unwrap();
        let tau = build_tau(&w).unwrap();
        assert_eq!(tau.len(), 2);
        assert!(tau.preserves_ratios(3, 1));
        let t2 = build_tau_j_with(&w, w.proj.group(), TauMethod::Tensor).unwrap();
        let t1 = build_tau_j_with(&w, w.proj.group(), TauMethod::Traces).unwrap();
        assert!(t1.same_map(&t2));
    }

    #[test]
    fn s3_against_c2_fails_first_condition() {
        let g = sym(3);
        let a3 = g.derived_subgroup().into_ref();
        let theta = irreducibles(&a3).unwrap().into_iter().nth(1).unwrap();
        let h = PermGroup::new(3, vec![Perm::from_cycles(3, &[vec![0, 1]]).unwrap()]).unwrap().into_ref();
        let one = PermGroup::trivial(3).into_ref();
        let up = HTriple::new(g, a3, theta, 2).unwrap();
        let low = HTriple::new(h, one.clone(), ClassFunction::trivial(&one), 2).unwrap();
        assert!(matches!(find_witness(&up, &low), Err(Failure::I(_))));
    }
}
