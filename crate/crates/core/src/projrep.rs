//! Matrix representations affording a character, projective representations
//! associated with an invariant character, factor sets and `mu`-functions.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::chartab::{character_table, irreducibles, ClassFunction};
use crate::cliff::inertia_group;
use crate::config;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::group::{GroupRef, PermGroup};
use crate::mat::Mat;
use crate::perm::Perm;

const MAX_DIM: usize = 12;

/// An idempotent `e = sum c_k k` of a subgroup algebra with `D(e)` of rank one
/// for every representation affording the character it was chosen for.
#[derive(Debug, Clone)]
pub struct Peak {
    pub elements: Vec<Perm>,
    pub coeffs: Vec<Cyclo>,
}

impl Peak {
    pub fn eval(&self, f: impl Fn(&Perm) -> Mat) -> Mat {
        let mut acc: Option<Mat> = None;
        for (k, c) in self.elements.iter().zip(&self.coeffs) {
            let m = f(k).scale(c);
            acc = Some(match acc {
                None => m,
                Some(a) => a.add(&m),
            });
        }
        acc.expect("peak has at least one element")
    }
}

#[derive(Debug, Clone)]
pub struct MatRep {
    group: GroupRef,
    dim: usize,
    mats: Vec<Mat>,
    character: ClassFunction,
    peak: Peak,
    cyclic: Vec<Cyclo>,
    words: Vec<Perm>,
    basis_inv: Mat,
}

fn rat(num: i64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Multiplicity of `lambda` (given on the elements of `k`) in `theta_K`.
fn multiplicity_on(theta: &ClassFunction, k: &[Perm], lambda: &[Cyclo]) -> Cyclo {
    let s: Cyclo = k
        .iter()
        .zip(lambda)
        .map(|(x, l)| &theta.at(x) * &l.conj())
        .sum();
    s.scale(&rat(1, k.len() as u64))
}

fn peak_from(k: &[Perm], lambda: &[Cyclo]) -> Peak {
    let f = rat(1, k.len() as u64);
    Peak {
        elements: k.to_vec(),
        coeffs: lambda.iter().map(|l| l.conj().scale(&f)).collect(),
    }
}

/// Find a subgroup `K` and linear `lambda` with `<theta_K, lambda> = 1`.
pub fn find_peak(n: &GroupRef, theta: &ClassFunction) -> Result<Peak> {
    let cl = n.classes();
    for rep in &cl.reps {
        let o = rep.order();
        let k: Vec<Perm> = (0..o).map(|s| rep.pow(s as i64)).collect();
        for j in 0..o {
            let lambda: Vec<Cyclo> = (0..o)
                .map(|s| Cyclo::root_of_unity(o as u32, (j * s) as i64))
                .collect();
            if multiplicity_on(theta, &k, &lambda).is_one() {
                return Ok(peak_from(&k, &lambda));
            }
        }
    }
    let mut candidates: Vec<GroupRef> = Vec::new();
    for rep in &cl.reps {
        let c = n.centralizer_of_element(rep);
        for y in c.elements() {
            let sub = PermGroup::new(n.degree(), vec![rep.clone(), y.clone()]).unwrap();
            if sub.order() > rep.order() {
                candidates.push(sub.into_ref());
            }
        }
    }
    for p in crate::arith::prime_divisors(n.order()) {
        let s = n.sylow(p);
        candidates.push(n.normalizer_of(&s).into_ref());
        candidates.push(s.into_ref());
    }
    for rep in &cl.reps {
        candidates.push(n.centralizer_of_element(rep).into_ref());
    }
    let mut seen: Vec<Vec<Perm>> = Vec::new();
    for k in candidates {
        let elts = k.elements().to_vec();
        if seen.contains(&elts) {
            continue;
        }
        seen.push(elts.clone());
        for lam in character_table(&k)?.linear() {
            let vals: Vec<Cyclo> = elts.iter().map(|x| lam.at(x)).collect();
            if multiplicity_on(theta, &elts, &vals).is_one() {
                return Ok(peak_from(&elts, &vals));
            }
        }
    }
    Err(Error::DimensionLimit {
        dim: theta.degree_int() as usize,
        reason: "no linear character of a searched subgroup occurs once in the restriction"
            .into(),
    })
}

struct Echelon {
    rows: Vec<Vec<Cyclo>>,
    pivots: Vec<usize>,
    // rows[r] = sum_j trans[r][j] * spun[j]
    trans: Vec<Vec<Cyclo>>,
}

impl Echelon {
    /// Reduce `v`; returns the residue and coefficients `f` with `v = residue + sum f_r rows[r]`.
    fn reduce(&self, v: &[Cyclo]) -> (Vec<Cyclo>, Vec<Cyclo>) {
        let mut w = v.to_vec();
        let mut f = Vec::with_capacity(self.rows.len());
        for (r, &p) in self.pivots.iter().enumerate() {
            let c = w[p].clone();
            if !c.is_zero() {
                for (i, x) in self.rows[r].iter().enumerate() {
                    if !x.is_zero() {
                        w[i] = &w[i] - &(&c * x);
                    }
                }
            }
            f.push(c);
        }
        (w, f)
    }

    /// Coordinates of `v` (assumed in the span) with respect to the spun vectors.
    fn coords(&self, v: &[Cyclo], dim: usize) -> Result<Vec<Cyclo>> {
        let (res, f) = self.reduce(v);
        if res.iter().any(|x| !x.is_zero()) {
            return Err(Error::NormalizationFailed("spun module not closed".into()));
        }
        let mut out = vec![Cyclo::zero(); dim];
        for (r, c) in f.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, t) in self.trans[r].iter().enumerate() {
                if !t.is_zero() {
                    out[j] = &out[j] + &(c * t);
                }
            }
        }
        Ok(out)
    }
}

/// Left action of `g` on the group algebra: `(g . v)_{g y} = v_y`.
fn left_mul(n: &PermGroup, g: &Perm, v: &[Cyclo]) -> Vec<Cyclo> {
    let elts = n.elements();
    let mut out = vec![Cyclo::zero(); v.len()];
    for (i, x) in v.iter().enumerate() {
        if !x.is_zero() {
            out[n.element_index(&g.mul(&elts[i])).unwrap()] = x.clone();
        }
    }
    out
}

/// A representation of `n` affording the irreducible `theta`.
pub fn rep_afford(n: &GroupRef, theta: &ClassFunction) -> Result<MatRep> {
    let peak = find_peak(n, theta)?;
    rep_afford_with_peak(n, theta, peak)
}

pub fn rep_afford_with_peak(n: &GroupRef, theta: &ClassFunction, peak: Peak) -> Result<MatRep> {
    if !theta.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let d = theta.degree_int() as usize;
    if d > MAX_DIM {
        return Err(Error::DimensionLimit {
            dim: d,
            reason: format!("degree above {MAX_DIM}"),
        });
    }
    let limit = config::current().max_proj_order;
    if n.order() > limit.max(MAX_DIM as u64 * 50) {
        return Err(Error::limit("representation", n.order(), limit));
    }
    let elts = n.elements();
    let size = elts.len();
    // e_theta = theta(1)/|N| sum theta(x^-1) x
    let ftheta = rat(d as i64, size as u64);
    let etheta: Vec<Cyclo> = elts.iter().map(|x| theta.at(x).conj().scale(&ftheta)).collect();
    let mut v0 = vec![Cyclo::zero(); size];
    for (i, a) in etheta.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (k, c) in peak.elements.iter().zip(&peak.coeffs) {
            let idx = n.element_index(&elts[i].mul(k)).unwrap();
            v0[idx] = &v0[idx] + &(a * c);
        }
    }
    if v0.iter().all(|x| x.is_zero()) {
        return Err(Error::NormalizationFailed("peak annihilates the isotypic component".into()));
    }
    let gens = n.generators().to_vec();
    let mut spun: Vec<Vec<Cyclo>> = Vec::new();
    let mut words: Vec<Perm> = Vec::new();
    let mut ech = Echelon {
        rows: Vec::new(),
        pivots: Vec::new(),
        trans: Vec::new(),
    };
    let mut queue = VecDeque::new();
    let try_add = |v: Vec<Cyclo>, w: Perm, spun: &mut Vec<Vec<Cyclo>>, words: &mut Vec<Perm>, ech: &mut Echelon| -> bool {
        let (res, f) = ech.reduce(&v);
        let Some(p) = res.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let j = spun.len();
        let inv = res[p].inverse().unwrap();
        let mut t = vec![Cyclo::zero(); j + 1];
        t[j] = Cyclo::one();
        for (r, c) in f.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (col, x) in ech.trans[r].iter().enumerate() {
                if !x.is_zero() {
                    t[col] = &t[col] - &(c * x);
                }
            }
        }
        for row in ech.trans.iter_mut() {
            row.push(Cyclo::zero());
        }
        let row: Vec<Cyclo> = res.iter().map(|x| x * &inv).collect();
        let t: Vec<Cyclo> = t.iter().map(|x| x * &inv).collect();
        // keep the echelon reduced with respect to the new pivot
        for r in 0..ech.rows.len() {
            let c = ech.rows[r][p].clone();
            if c.is_zero() {
                continue;
            }
            for i in 0..size {
                if !row[i].is_zero() {
                    ech.rows[r][i] = &ech.rows[r][i] - &(&c * &row[i]);
                }
            }
            for i in 0..=j {
                if !t[i].is_zero() {
                    ech.trans[r][i] = &ech.trans[r][i] - &(&c * &t[i]);
                }
            }
        }
        ech.rows.push(row);
        ech.pivots.push(p);
        ech.trans.push(t);
        spun.push(v);
        words.push(w);
        true
    };
    try_add(v0, n.identity(), &mut spun, &mut words, &mut ech);
    queue.push_back(0usize);
    while let Some(i) = queue.pop_front() {
        for s in &gens {
            let v = left_mul(n, s, &spun[i]);
            let w = s.mul(&words[i]);
            if try_add(v, w, &mut spun, &mut words, &mut ech) {
                queue.push_back(spun.len() - 1);
                if spun.len() > d {
                    return Err(Error::NormalizationFailed(
                        "spun module larger than the character degree".into(),
                    ));
                }
            }
        }
    }
    if spun.len() != d {
        return Err(Error::NormalizationFailed(format!(
            "spun module has dimension {} instead of {d}",
            spun.len()
        )));
    }
    let mut gen_mats = Vec::with_capacity(gens.len());
    for s in &gens {
        let cols: Vec<Vec<Cyclo>> = spun
            .iter()
            .map(|b| ech.coords(&left_mul(n, s, b), d))
            .collect::<Result<_>>()?;
        gen_mats.push(Mat::from_cols(&cols));
    }
    let mats = extend_to_group(n, &gen_mats)?;
    let mut cyclic = vec![Cyclo::zero(); d];
    cyclic[0] = Cyclo::one();
    let rep = MatRep {
        group: n.clone(),
        dim: d,
        mats,
        character: theta.clone(),
        peak,
        cyclic,
        words,
        basis_inv: Mat::identity(d),
    };
    rep.check_character()?;
    Ok(rep)
}

/// Matrices for every element from matrices of the generators.
fn extend_to_group(n: &PermGroup, gen_mats: &[Mat]) -> Result<Vec<Mat>> {
    let elts = n.elements();
    let d = gen_mats.first().map(|m| m.rows()).unwrap_or(1);
    let mut mats: Vec<Option<Mat>> = vec![None; elts.len()];
    let id = n.element_index(&n.identity()).unwrap();
    mats[id] = Some(Mat::identity(d));
    let mut queue = VecDeque::from([id]);
    while let Some(i) = queue.pop_front() {
        let m = mats[i].clone().unwrap();
        for (s, sm) in n.generators().iter().zip(gen_mats) {
            let j = n.element_index(&s.mul(&elts[i])).unwrap();
            let prod = sm.mul(&m);
            match &mats[j] {
                None => {
                    mats[j] = Some(prod);
                    queue.push_back(j);
                }
                Some(existing) => {
                    if *existing != prod {
                        return Err(Error::InvalidInput(
                            "generator matrices do not define a homomorphism".into(),
                        ));
                    }
                }
            }
        }
    }
    Ok(mats.into_iter().map(|m| m.unwrap()).collect())
}

impl MatRep {
    /// A representation from generator images; the character must be irreducible.
    pub fn from_generators(group: &GroupRef, d: usize, gen_mats: Vec<Mat>) -> Result<MatRep> {
        if gen_mats.len() != group.generators().len()
            || gen_mats.iter().any(|m| m.rows() != d || m.cols() != d)
        {
            return Err(Error::InvalidInput("one d x d matrix per generator expected".into()));
        }
        let mats = if group.generators().is_empty() {
            vec![Mat::identity(d)]
        } else {
            extend_to_group(group, &gen_mats)?
        };
        let character = ClassFunction::from_fn(group, |c| {
            mats[group.element_index(c).unwrap()].trace()
        });
        if !character.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let peak = find_peak(group, &character)?;
        let e = peak.eval(|k| mats[group.element_index(k).unwrap()].clone());
        let cyclic = (0..d)
            .map(|j| e.col(j))
            .find(|c| c.iter().any(|x| !x.is_zero()))
            .ok_or_else(|| Error::NormalizationFailed("peak acts as zero".into()))?;
        // spin the cyclic vector
        let mut basis: Vec<Vec<Cyclo>> = vec![cyclic.clone()];
        let mut words = vec![group.identity()];
        let mut i = 0;
        while i < basis.len() && basis.len() < d {
            for s in group.generators() {
                let w = s.mul(&words[i]);
                let v = mats[group.element_index(&w).unwrap()].mul_vec(&cyclic);
                let mut trial = basis.clone();
                trial.push(v.clone());
                if Mat::from_cols(&trial).rank() == trial.len() {
                    basis.push(v);
                    words.push(w);
                    if basis.len() == d {
                        break;
                    }
                }
            }
            i += 1;
        }
        let basis_inv = Mat::from_cols(&basis).inverse()?;
        Ok(MatRep {
            group: group.clone(),
            dim: d,
            mats,
            character,
            peak,
            cyclic,
            words,
            basis_inv,
        })
    }

    fn check_character(&self) -> Result<()> {
        for (c, rep) in self.group.classes().reps.iter().enumerate() {
            if self.mat(rep).trace() != *self.character.value(c) {
                return Err(Error::NormalizationFailed("trace does not match character".into()));
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn character(&self) -> &ClassFunction {
        &self.character
    }

    pub fn peak(&self) -> &Peak {
        &self.peak
    }

    pub fn cyclic_vector(&self) -> &[Cyclo] {
        &self.cyclic
    }

    pub fn mat(&self, g: &Perm) -> &Mat {
        &self.mats[self.group.element_index(g).expect("element of the representation's group")]
    }

    pub fn generator_mats(&self) -> Vec<Mat> {
        self.group.generators().iter().map(|g| self.mat(g).clone()).collect()
    }

    /// All `S` with `S D(n) = E(n) S`, for `E` a representation of the same
    /// group whose restriction is a multiple of `D`'s character.
    pub fn homs_to(&self, e: &dyn Fn(&Perm) -> Mat) -> Result<Vec<Mat>> {
        let pe = self.peak.eval(e);
        let mut cols: Vec<Vec<Cyclo>> = Vec::new();
        for j in 0..pe.cols() {
            let c = pe.col(j);
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut trial = cols.clone();
            trial.push(c.clone());
            if Mat::from_cols(&trial).rank() == trial.len() {
                cols.push(c);
            }
        }
        let mut out = Vec::new();
        for u in cols {
            let images: Vec<Vec<Cyclo>> = self.words.iter().map(|w| e(w).mul_vec(&u)).collect();
            let s = Mat::from_cols(&images).mul(&self.basis_inv);
            for g in self.group.generators() {
                if s.mul(self.mat(g)) != e(g).mul(&s) {
                    return Err(Error::NormalizationFailed(
                        "intertwiner check failed; target does not afford the character".into(),
                    ));
                }
            }
            out.push(s);
        }
        Ok(out)
    }

    /// The (up to scalar unique) invertible `S` with `S D(n) = E(n) S`.
    pub fn intertwiner_to(&self, e: &dyn Fn(&Perm) -> Mat) -> Result<Mat> {
        let homs = self.homs_to(e)?;
        if homs.len() != 1 {
            return Err(Error::NormalizationFailed(format!(
                "expected a one-dimensional intertwiner space, found {}",
                homs.len()
            )));
        }
        Ok(homs.into_iter().next().unwrap())
    }
}

/// Factor set stored on pairs of transversal indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    pub values: Vec<Vec<Cyclo>>,
}

impl FactorSet {
    pub fn get(&self, i: usize, j: usize) -> &Cyclo {
        &self.values[i][j]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_one())
    }

    pub fn roots_of_unity(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_root_of_unity())
    }
}

#[derive(Debug, Clone)]
pub struct ProjRep {
    group: GroupRef,
    normal: GroupRef,
    rep: Arc<MatRep>,
    transversal: Vec<Perm>,
    coset: Vec<usize>,
    mats: Vec<Mat>,
    factor: FactorSet,
}

/// A `mu`-function, stored on the transversal of `N` in `G_theta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuFunction {
    pub g: Perm,
    pub k: i64,
    pub values: Vec<Cyclo>,
}

impl MuFunction {
    pub fn at(&self, p: &ProjRep, y: &Perm) -> Cyclo {
        self.values[p.coset_index(y)].clone()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }
}

impl ProjRep {
    /// Build from matrices on the lex-least transversal of `N` in `G_theta`;
    /// all associated-with-theta conditions are verified.
    pub fn new(group: GroupRef, rep: Arc<MatRep>, mats: Vec<Mat>) -> Result<ProjRep> {
        let normal = rep.group().clone();
        if !normal.is_normal_in(&group) {
            return Err(Error::NotNormal);
        }
        let (transversal, coset) = group.right_cosets(&normal);
        if mats.len() != transversal.len() {
            return Err(Error::InvalidInput(format!(
                "{} transversal matrices expected, got {}",
                transversal.len(),
                mats.len()
            )));
        }
        if !mats[0].is_identity() {
            return Err(Error::InvalidInput("P(1) must be the identity".into()));
        }
        for (t, m) in transversal.iter().zip(&mats) {
            if m.rows() != rep.dim() || m.cols() != rep.dim() {
                return Err(Error::InvalidInput("matrix dimension mismatch".into()));
            }
            let tinv = t.inverse();
            for n in normal.generators() {
                let conj = t.mul(n).mul(&tinv);
                if m.mul(rep.mat(n)) != rep.mat(&conj).mul(m) {
                    return Err(Error::InvalidInput(
                        "P(t) does not conjugate D as required".into(),
                    ));
                }
            }
        }
        let mut p = ProjRep {
            group,
            normal,
            rep,
            transversal,
            coset,
            mats,
            factor: FactorSet { values: vec![] },
        };
        let r = p.transversal.len();
        let mut values = vec![vec![Cyclo::zero(); r]; r];
        for i in 0..r {
            for j in 0..r {
                let lhs = p.mats[i].mul(&p.mats[j]);
                let prod = p.transversal[i].mul(&p.transversal[j]);
                let rhs = p.at(&prod);
                values[i][j] = lhs.ratio_to(&rhs).ok_or_else(|| {
                    Error::InvalidInput("matrices are not projectively multiplicative".into())
                })?;
            }
        }
        p.factor = FactorSet { values };
        Ok(p)
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn normal(&self) -> &GroupRef {
        &self.normal
    }

    pub fn rep(&self) -> &Arc<MatRep> {
        &self.rep
    }

    pub fn theta(&self) -> &ClassFunction {
        self.rep.character()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn transversal(&self) -> &[Perm] {
        &self.transversal
    }

    pub fn transversal_mats(&self) -> &[Mat] {
        &self.mats
    }

    pub fn factor_set(&self) -> &FactorSet {
        &self.factor
    }

    pub fn coset_index(&self, g: &Perm) -> usize {
        self.coset[self.group.element_index(g).expect("element of G_theta")]
    }

    /// `P(g) = D(g t^-1) P(t)` where `t` represents `N g`.
    pub fn at(&self, g: &Perm) -> Mat {
        let i = self.coset_index(g);
        let n = g.mul(&self.transversal[i].inverse());
        if i == 0 {
            return self.rep.mat(&n).clone();
        }
        self.rep.mat(&n).mul(&self.mats[i])
    }

    pub fn trace(&self, g: &Perm) -> Cyclo {
        self.at(g).trace()
    }

    pub fn alpha(&self, x: &Perm, y: &Perm) -> Cyclo {
        self.factor.get(self.coset_index(x), self.coset_index(y)).clone()
    }

    pub fn conductor(&self) -> u64 {
        let mut c = self
            .mats
            .iter()
            .fold(1u64, |a, m| num_integer::lcm(a, m.conductor()));
        for g in self.normal.generators() {
            c = num_integer::lcm(c, self.rep.mat(g).conductor());
        }
        c
    }

    /// Verify the cocycle identity on all transversal triples.
    pub fn cocycle_holds(&self) -> bool {
        let t = &self.transversal;
        for x in t {
            for y in t {
                for z in t {
                    let lhs = &self.alpha(x, y) * &self.alpha(&x.mul(y), z);
                    let rhs = &self.alpha(x, &y.mul(z)) * &self.alpha(y, z);
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn rescale(&self, eps: &[Cyclo]) -> Result<ProjRep> {
        if eps.len() != self.transversal.len() || !eps[0].is_one() {
            return Err(Error::InvalidInput("epsilon must be given on the transversal with eps(1) = 1".into()));
        }
        let mats = self.mats.iter().zip(eps).map(|(m, e)| m.scale(e)).collect();
        ProjRep::new(self.group.clone(), self.rep.clone(), mats)
    }

    /// `mu_{g sigma}` with `sigma: zeta -> zeta^k`.
    pub fn mu(&self, g: &Perm, k: i64) -> Result<MuFunction> {
        if !self.normal.generators().iter().all(|n| self.normal.contains(&n.conj(g))) {
            return Err(Error::NotStabilizing);
        }
        let theta = self.theta();
        let ginv = g.inverse();
        if theta.conjugate(g).galois(k)? != *theta {
            return Err(Error::NotStabilizing);
        }
        let dprime = |n: &Perm| -> Mat {
            self.rep.mat(&g.mul(n).mul(&ginv)).galois(k).expect("coprime residue")
        };
        let m = self.rep.intertwiner_to(&dprime)?;
        let mut values = Vec::with_capacity(self.transversal.len());
        for (i, t) in self.transversal.iter().enumerate() {
            if i == 0 {
                values.push(Cyclo::one());
                continue;
            }
            let pg = self.at(&g.mul(t).mul(&ginv)).galois(k)?;
            let lhs = pg.mul(&m);
            let rhs = m.mul(&self.mats[i]);
            values.push(lhs.ratio_to(&rhs).ok_or_else(|| {
                Error::NormalizationFailed("conjugate projective representation not similar".into())
            })?);
        }
        Ok(MuFunction {
            g: g.clone(),
            k,
            values,
        })
    }

    /// `mu_g(y) = alpha(g, g^-1) / (alpha(g, y g^-1) alpha(y, g^-1))` for `g` in `G_theta`.
    pub fn mu_by_factor_set(&self, g: &Perm) -> Result<MuFunction> {
        if !self.group.contains(g) {
            return Err(Error::NotStabilizing);
        }
        let ginv = g.inverse();
        let num = self.alpha(g, &ginv);
        let values = self
            .transversal
            .iter()
            .map(|y| {
                let den = &self.alpha(g, &y.mul(&ginv)) * &self.alpha(y, &ginv);
                num.div(&den)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MuFunction {
            g: g.clone(),
            k: 1,
            values,
        })
    }

    /// `mu_t^{x sigma} mu_{x sigma}` for `g = t x` with `t` in `G_theta`.
    pub fn mu_cocycle_decompose(&self, g: &Perm, t: &Perm, x: &Perm, k: i64) -> Result<MuFunction> {
        if t.mul(x) != *g || !self.group.contains(t) {
            return Err(Error::BadDecomposition(format!("{g} != {t} * {x} with {t} in G_theta")));
        }
        let mu_t = self.mu_by_factor_set(t)?;
        let mu_x = self.mu(x, k)?;
        let xinv = x.inverse();
        let values = self
            .transversal
            .iter()
            .enumerate()
            .map(|(i, y)| {
                let a = mu_t.at(self, &x.mul(y).mul(&xinv)).galois(k)?;
                Ok(&a * &mu_x.values[i])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MuFunction {
            g: g.clone(),
            k,
            values,
        })
    }
}

/// A projective representation of `G` associated with the `G`-invariant `theta`.
///
/// For each transversal element `t` the character `theta` extends to `<N, t>`;
/// `P(t)` is read off from a representation affording such an extension,
/// so `P(t)^m = D(t^m)` for `m = |<N,t> : N|` and the factor set consists
/// of roots of unity.
pub fn projective_rep(g: &GroupRef, n: &GroupRef, theta: &ClassFunction) -> Result<ProjRep> {
    let limit = config::current().max_proj_order;
    if g.order() > limit {
        return Err(Error::limit("projective representation", g.order(), limit));
    }
    if !n.is_normal_in(g) {
        return Err(Error::NotNormal);
    }
    if inertia_group(g, n, theta)? != **g {
        return Err(Error::PreconditionFailed("theta is not invariant in the group".into()));
    }
    let d = Arc::new(rep_afford(n, theta)?);
    projective_rep_from(g, d)
}

pub fn projective_rep_from(g: &GroupRef, d: Arc<MatRep>) -> Result<ProjRep> {
    let n = d.group().clone();
    let theta = d.character().clone();
    let (transversal, coset) = g.right_cosets(&n);
    let mut cache: HashMap<Vec<usize>, (GroupRef, Arc<MatRep>, Mat)> = HashMap::new();
    let mut mats = vec![Mat::identity(d.dim())];
    for t in transversal.iter().skip(1) {
        let mut gens = n.generators().to_vec();
        gens.push(t.clone());
        let u = PermGroup::new(g.degree(), gens)?;
        let mut key: Vec<usize> = Vec::new();
        let mut x = t.clone();
        loop {
            let c = coset[g.element_index(&x).unwrap()];
            if key.contains(&c) {
                break;
            }
            key.push(c);
            x = x.mul(t);
        }
        key.sort();
        if !cache.contains_key(&key) {
            let u = u.into_ref();
            let psi = irreducibles(&u)?
                .into_iter()
                .find(|psi| psi.restrict(&n).map(|r| r == theta).unwrap_or(false))
                .ok_or_else(|| Error::NormalizationFailed("theta does not extend to a cyclic overgroup".into()))?;
            let e = Arc::new(rep_afford_with_peak(&u, &psi, d.peak().clone())?);
            let s = d.intertwiner_to(&|m: &Perm| e.mat(m).clone())?;
            cache.insert(key.clone(), (u, e, s));
        }
        let (_, e, s) = &cache[&key];
        let sinv = s.inverse()?;
        mats.push(sinv.mul(e.mat(t)).mul(s));
    }
    let p = ProjRep::new(g.clone(), d, mats)?;
    if !p.factor_set().roots_of_unity() {
        return Err(Error::NormalizationFailed("factor set has a non-root-of-unity value".into()));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::irreducibles;

    fn q8() -> GroupRef {
        let i = Perm::from_cycles(8, &[vec![0, 1, 3, 6], vec![2, 5, 7, 4]]).unwrap();
        let j = Perm::from_cycles(8, &[vec![0, 2, 3, 7], vec![1, 4, 6, 5]]).unwrap();
        PermGroup::new(8, vec![i, j]).unwrap().into_ref()
    }

    fn sym(n: usize) -> GroupRef {
        let t = Perm::from_cycles(n, &[vec![0, 1]]).unwrap();
        let c = Perm::from_cycles(n, &[(0..n).collect()]).unwrap();
        PermGroup::new(n, vec![t, c]).unwrap().into_ref()
    }

    #[test]
    fn affording_traces() {
        for g in [q8(), sym(3), sym(4)] {
            for chi in irreducibles(&g).unwrap() {
                let r = rep_afford(&g, &chi).unwrap();
                for x in g.elements() {
                    assert_eq!(r.mat(x).trace(), chi.at(x));
                    for y in g.generators() {
                        assert_eq!(r.mat(&x.mul(y)), &r.mat(x).mul(r.mat(y)));
                    }
                }
            }
        }
    }

    #[test]
    fn q8_over_centre_is_nontrivial() {
        let g = q8();
        assert_eq!(g.order(), 8);
        let z = g.center().into_ref();
        let theta = irreducibles(&z).unwrap().into_iter().find(|c| c.value(1).as_integer() == Some(-1)).unwrap();
        let p = projective_rep(&g, &z, &theta).unwrap();
        assert!(p.cocycle_holds());
        assert!(p.factor_set().roots_of_unity());
        assert!(!p.factor_set().is_trivial());
        for x in p.transversal() {
            assert_eq!(p.mu(x, 1).unwrap(), p.mu_by_factor_set(x).unwrap());
        }
    }

    #[test]
    fn invariant_character_of_s4_over_a4() {
        let g = sym(4);
        let a4 = g.derived_subgroup().into_ref();
        let theta = irreducibles(&a4).unwrap().into_iter().find(|c| c.degree_int() == 3).unwrap();
        let p = projective_rep(&g, &a4, &theta).unwrap();
        assert!(p.cocycle_holds());
        assert!(p.factor_set().is_trivial());
        let eps: Vec<Cyclo> = vec![Cyclo::one(), Cyclo::root_of_unity(4, 1)];
        let q = p.rescale(&eps).unwrap();
        assert!(q.cocycle_holds());
        assert_eq!(*q.factor_set().get(1, 1), Cyclo::from_int(-1));
    }

    #[test]
    fn mu_splits_along_products() {
        let g = q8();
        let z = g.center().into_ref();
        let theta = irreducibles(&z).unwrap().into_iter().find(|c| c.value(1).as_integer() == Some(-1)).unwrap();
        let p = projective_rep(&g, &z, &theta).unwrap();
        let elts = g.elements().to_vec();
        for t in elts.iter().step_by(3) {
            for x in elts.iter().step_by(2) {
                let prod = t.mul(x);
                for k in [1, 3] {
                    let direct = p.mu(&prod, k).unwrap();
                    let split = p.mu_cocycle_decompose(&prod, t, x, k).unwrap();
                    assert_eq!(direct.values, split.values);
                }
            }
        }
        assert!(matches!(
            p.mu_cocycle_decompose(&elts[1], &elts[2], &elts[3], 1),
            Err(Error::BadDecomposition(_))
        ));
    }
}
