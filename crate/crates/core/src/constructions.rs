//! Closure operations on `>=_c` witnesses. Every output is re-verified with
//! [`check_geq_c`] before it is returned.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::chartab::ClassFunction;
use crate::cliff::stabilizer_of_orbit;
use crate::config;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::group::{DirectProduct, GroupRef, PermGroup, Wreath};
use crate::hgal::{h_group, HTriple};
use crate::horder::{check_geq_c, Failure, OrderWitness};
use crate::mat::Mat;
use crate::perm::Perm;
use crate::projrep::{projective_rep, MatRep, ProjRep};

const MAX_WREATH: usize = 3;

type MatFn<'a> = &'a dyn Fn(&Perm) -> Result<Mat>;

fn verified(upper: &HTriple, lower: &HTriple, p: ProjRep, pl: ProjRep) -> Result<OrderWitness> {
    check_geq_c(upper, lower, &Arc::new(p), &Arc::new(pl)).map_err(|f| match f {
        Failure::Input(e) => e,
        f => Error::Check(f.to_string()),
    })
}

fn rep_on(n: &GroupRef, d: usize, f: MatFn) -> Result<Arc<MatRep>> {
    let mats = n.generators().iter().map(f).collect::<Result<Vec<_>>>()?;
    Ok(Arc::new(MatRep::from_generators(n, d, mats)?))
}

fn on_transversal(g: &GroupRef, d: Arc<MatRep>, f: MatFn) -> Result<ProjRep> {
    let mats = g
        .right_transversal(d.group())
        .iter()
        .map(f)
        .collect::<Result<Vec<_>>>()?;
    ProjRep::new(g.clone(), d, mats)
}

fn assemble(
    upper: HTriple,
    lower: HTriple,
    d: Arc<MatRep>,
    pf: MatFn,
    dl: Arc<MatRep>,
    plf: MatFn,
) -> Result<OrderWitness> {
    let gt = upper.inertia().into_ref();
    let ht = gt.intersection(&lower.group).into_ref();
    let p = on_transversal(&gt, d, pf)?;
    let pl = on_transversal(&ht, dl, plf)?;
    verified(&upper, &lower, p, pl)
}

fn group(degree: usize, gens: Vec<Perm>) -> Result<GroupRef> {
    Ok(PermGroup::new(degree, gens)?.into_ref())
}

fn fail(msg: impl Into<String>) -> Error {
    Error::PreconditionFailed(msg.into())
}

/// `(T >=_c T)` with `P = P'` the canonical projective representation.
pub fn reflexive_witness(t: &HTriple) -> Result<OrderWitness> {
    let gt = t.inertia().into_ref();
    let p = projective_rep(&gt, &t.normal, &t.theta)?;
    verified(t, t, p.clone(), p)
}

/// `(J, N, theta) >=_c (J meet H, M, phi)` for `N <= J <= G`.
pub fn restrict_witness(w: &OrderWitness, j: &GroupRef) -> Result<OrderWitness> {
    let (up, low) = (&w.upper, &w.lower);
    if !up.normal.is_subgroup_of(j) || !j.is_subgroup_of(&up.group) {
        return Err(fail("J does not lie between N and G"));
    }
    let hj = j.intersection(&low.group).into_ref();
    let upper = HTriple::new(j.clone(), up.normal.clone(), up.theta.clone(), up.p)?;
    let lower = HTriple::new(hj, low.normal.clone(), low.theta.clone(), low.p)?;
    assemble(
        upper,
        lower,
        w.proj.rep().clone(),
        &|x| Ok(w.proj.at(x)),
        w.proj_low.rep().clone(),
        &|x| Ok(w.proj_low.at(x)),
    )
}

/// A group isomorphism given by images of the source generators.
#[derive(Debug, Clone)]
pub struct Iso {
    pub src: GroupRef,
    pub dst: GroupRef,
    forward: HashMap<Perm, Perm>,
    backward: HashMap<Perm, Perm>,
}

impl Iso {
    pub fn new(src: GroupRef, dst: GroupRef, images: Vec<Perm>) -> Result<Iso> {
        if images.len() != src.generators().len() {
            return Err(Error::NotIsomorphism("one image per generator expected".into()));
        }
        if let Some(y) = images.iter().find(|y| y.degree() != dst.degree() || !dst.contains(y)) {
            return Err(Error::NotIsomorphism(format!("{y} is not in the target group")));
        }
        let mut forward = HashMap::new();
        forward.insert(src.identity(), dst.identity());
        let mut queue = VecDeque::from([src.identity()]);
        while let Some(x) = queue.pop_front() {
            let fx = forward[&x].clone();
            for (s, img) in src.generators().iter().zip(&images) {
                let y = x.mul(s);
                let fy = fx.mul(img);
                match forward.get(&y) {
                    Some(prev) if *prev != fy => {
                        return Err(Error::NotIsomorphism(format!(
                            "{y} would map to both {prev} and {fy}"
                        )));
                    }
                    Some(_) => {}
                    None => {
                        forward.insert(y.clone(), fy);
                        queue.push_back(y);
                    }
                }
            }
        }
        let backward: HashMap<Perm, Perm> =
            forward.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        if backward.len() != forward.len() || backward.len() as u64 != dst.order() {
            return Err(Error::NotIsomorphism("map is not bijective".into()));
        }
        Ok(Iso {
            src,
            dst,
            forward,
            backward,
        })
    }

    /// `x -> g^-1 x g`, onto the conjugate group.
    pub fn conjugation(src: &GroupRef, g: &Perm) -> Result<Iso> {
        let images: Vec<Perm> = src.generators().iter().map(|x| x.conj(g)).collect();
        let dst = group(g.degree(), images.clone())?;
        Iso::new(src.clone(), dst, images)
    }

    pub fn apply(&self, x: &Perm) -> Perm {
        self.forward[x].clone()
    }

    pub fn apply_inv(&self, y: &Perm) -> Perm {
        self.backward[y].clone()
    }

    fn image(&self, sub: &GroupRef) -> Result<GroupRef> {
        group(
            self.dst.degree(),
            sub.generators().iter().map(|s| self.apply(s)).collect(),
        )
    }
}

/// Transport along an isomorphism `f: G -> G^`, with `psi^f(x^f) = psi(x)`.
pub fn transport_witness(w: &OrderWitness, f: &Iso) -> Result<OrderWitness> {
    if *f.src != *w.upper.group {
        return Err(Error::NotIsomorphism("source is not the upper group of the witness".into()));
    }
    let (up, low) = (&w.upper, &w.lower);
    let n = f.image(&up.normal)?;
    let m = f.image(&low.normal)?;
    let theta = ClassFunction::from_fn(&n, |y| up.theta.at(&f.apply_inv(y)));
    let phi = ClassFunction::from_fn(&m, |y| low.theta.at(&f.apply_inv(y)));
    let d = rep_on(&n, w.proj.dim(), &|s| Ok(w.proj.rep().mat(&f.apply_inv(s)).clone()))?;
    let dl = rep_on(&m, w.proj_low.dim(), &|s| {
        Ok(w.proj_low.rep().mat(&f.apply_inv(s)).clone())
    })?;
    let upper = HTriple::new(f.dst.clone(), n, theta, up.p)?;
    let lower = HTriple::new(f.image(&low.group)?, m, phi, low.p)?;
    assemble(
        upper,
        lower,
        d,
        &|y| Ok(w.proj.at(&f.apply_inv(y))),
        dl,
        &|y| Ok(w.proj_low.at(&f.apply_inv(y))),
    )
}

/// The witness for `(G, N, theta^h) >=_c (H, M, phi^h)`, using `P^h(x) = P(h x h^-1)`.
pub fn conjugate_witness(w: &OrderWitness, h: &Perm) -> Result<OrderWitness> {
    if !w.lower.group.contains(h) {
        return Err(fail(format!("{h} is not in H")));
    }
    let g = &w.upper.group;
    let images = g.generators().iter().map(|x| x.conj(h)).collect();
    let f = Iso::new(g.clone(), g.clone(), images)?;
    transport_witness(w, &f)
}

/// The witness `(P^sigma, P'^sigma)` for the Galois conjugate triples.
pub fn galois_twist_witness(w: &OrderWitness, k: u64) -> Result<OrderWitness> {
    let (up, low) = (&w.upper, &w.lower);
    let hk = h_group(w.transcript.level, up.p);
    if !hk.contains(k) {
        return Err(fail(format!("{k} is not in H_{}", w.transcript.level)));
    }
    let k = k as i64;
    let d = rep_on(&up.normal, w.proj.dim(), &|s| w.proj.rep().mat(s).galois(k))?;
    let dl = rep_on(&low.normal, w.proj_low.dim(), &|s| w.proj_low.rep().mat(s).galois(k))?;
    let upper = HTriple::new(up.group.clone(), up.normal.clone(), up.theta.galois(k)?, up.p)?;
    let lower = HTriple::new(low.group.clone(), low.normal.clone(), low.theta.galois(k)?, low.p)?;
    assemble(
        upper,
        lower,
        d,
        &|x| w.proj.at(x).galois(k),
        dl,
        &|x| w.proj_low.at(x).galois(k),
    )
}

/// The witness on `G/L` for `L` inside `ker theta`, `ker phi` and `C_G(N)`
/// with `C_{G/L}(N/L) = C_G(N)/L`.
pub fn quotient_witness(w: &OrderWitness, l: &GroupRef) -> Result<OrderWitness> {
    let (up, low) = (&w.upper, &w.lower);
    let g = &up.group;
    if !l.is_subgroup_of(g) || !l.is_normal_in(g) {
        return Err(fail("L is not normal in G"));
    }
    let cgn = g.centralizer_of(&up.normal);
    if !l.is_subgroup_of(&cgn) {
        return Err(fail("L is not contained in C_G(N)"));
    }
    let deg = up.theta.degree();
    if !l.is_subgroup_of(&up.normal) || l.elements().iter().any(|x| up.theta.at(x) != deg) {
        return Err(fail("L is not contained in ker theta"));
    }
    let deg = low.theta.degree();
    if !l.is_subgroup_of(&low.normal) || l.elements().iter().any(|x| low.theta.at(x) != deg) {
        return Err(fail("L is not contained in ker phi"));
    }
    let q = g.quotient(l)?;
    let bar = |x: &Perm| q.map(g, x);
    let lift = |y: &Perm| q.reps[y.image(0)].clone();
    let image = |sub: &GroupRef| group(q.image.degree(), sub.generators().iter().map(bar).collect());
    let n = image(&up.normal)?;
    let m = image(&low.normal)?;
    if q.image.centralizer_of(&n).order() * l.order() != cgn.order() {
        return Err(fail("C_{G/L}(N/L) is not C_G(N)/L"));
    }
    let theta = ClassFunction::from_fn(&n, |y| up.theta.at(&lift(y)));
    let phi = ClassFunction::from_fn(&m, |y| low.theta.at(&lift(y)));
    let d = rep_on(&n, w.proj.dim(), &|s| Ok(w.proj.rep().mat(&lift(s)).clone()))?;
    let dl = rep_on(&m, w.proj_low.dim(), &|s| Ok(w.proj_low.rep().mat(&lift(s)).clone()))?;
    let upper = HTriple::new(q.image.clone(), n, theta, up.p)?;
    let lower = HTriple::new(image(&low.group)?, m, phi, low.p)?;
    assemble(
        upper,
        lower,
        d,
        &|y| Ok(w.proj.at(&lift(y))),
        dl,
        &|y| Ok(w.proj_low.at(&lift(y))),
    )
}

/// The witness over `theta_1 x theta_2` on the stabilizer of its `H`-orbit in `G_1 x G_2`.
pub fn direct_product_witness(w1: &OrderWitness, w2: &OrderWitness) -> Result<OrderWitness> {
    let p = w1.upper.p;
    if w2.upper.p != p {
        return Err(Error::InvalidInput("witnesses use different primes".into()));
    }
    let dp = DirectProduct::new(&w1.upper.group, &w2.upper.group);
    let deg = dp.d1 + dp.d2;
    let pair = |a: &GroupRef, b: &GroupRef| {
        let mut gens: Vec<Perm> = a.generators().iter().map(|s| dp.embed1(s)).collect();
        gens.extend(b.generators().iter().map(|s| dp.embed2(s)));
        group(deg, gens)
    };
    let n = pair(&w1.upper.normal, &w2.upper.normal)?;
    let m = pair(&w1.lower.normal, &w2.lower.normal)?;
    let hh = pair(&w1.lower.group, &w2.lower.group)?;
    let prod = |a: &ClassFunction, b: &ClassFunction, on: &GroupRef| {
        ClassFunction::from_fn(on, |x| &a.at(&dp.proj1(x)) * &b.at(&dp.proj2(x)))
    };
    let theta = prod(&w1.upper.theta, &w2.upper.theta, &n);
    let phi = prod(&w1.lower.theta, &w2.lower.theta, &m);
    let hg = h_group(dp.group.exponent(), p);
    let g = stabilizer_of_orbit(&dp.group, &n, &theta, &hg)?.into_ref();
    let h = stabilizer_of_orbit(&hh, &m, &phi, &hg)?.into_ref();
    let d = rep_on(&n, w1.proj.dim() * w2.proj.dim(), &|x| {
        Ok(w1.proj.rep().mat(&dp.proj1(x)).kron(w2.proj.rep().mat(&dp.proj2(x))))
    })?;
    let dl = rep_on(&m, w1.proj_low.dim() * w2.proj_low.dim(), &|x| {
        Ok(w1.proj_low.rep().mat(&dp.proj1(x)).kron(w2.proj_low.rep().mat(&dp.proj2(x))))
    })?;
    let upper = HTriple::new(g, n, theta, p)?;
    let lower = HTriple::new(h, m, phi, p)?;
    assemble(
        upper,
        lower,
        d,
        &|x| Ok(w1.proj.at(&dp.proj1(x)).kron(&w2.proj.at(&dp.proj2(x)))),
        dl,
        &|x| Ok(w1.proj_low.at(&dp.proj1(x)).kron(&w2.proj_low.at(&dp.proj2(x)))),
    )
}

/// `X(w)`: the permutation of tensor factors with `v_0 x .. x v_{m-1} -> v_{w(0)} x .. x v_{w(m-1)}`.
pub fn block_matrix(d: usize, w: &Perm) -> Mat {
    let m = w.degree();
    let size = d.pow(m as u32);
    let images: Vec<usize> = (0..size)
        .map(|idx| {
            let digits: Vec<usize> = (0..m).map(|i| idx / d.pow((m - 1 - i) as u32) % d).collect();
            (0..m).fold(0, |acc, i| acc * d + digits[w.image(i)])
        })
        .collect();
    Mat::permutation(&images)
}

fn tensor(ms: Vec<Mat>) -> Mat {
    ms.into_iter().reduce(|a, b| a.kron(&b)).expect("at least one factor")
}

/// `(x_1, .., x_m) w -> (f(1, x_1) x .. x f(m, x_m)) X(w)`.
fn wreath_mat(wr: &Wreath, x: &Perm, d: usize, f: &dyn Fn(usize, &Perm) -> Result<Mat>) -> Result<Mat> {
    let (xs, w) = wr.decompose(x);
    let ms = xs.iter().enumerate().map(|(i, xi)| f(i, xi)).collect::<Result<Vec<_>>>()?;
    Ok(tensor(ms).mul(&block_matrix(d, &w)))
}

fn check_wreath_size(m: usize, order: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidInput("wreath power must be positive".into()));
    }
    if m > MAX_WREATH {
        return Err(Error::limit("wreath power", m as u64, MAX_WREATH as u64));
    }
    let limit = config::current().max_proj_order;
    if order > limit {
        return Err(Error::limit("wreath witness", order, limit));
    }
    Ok(())
}

fn top_generators(wr: &Wreath) -> Vec<Perm> {
    let m = wr.m;
    let mut out = Vec::new();
    if m >= 2 {
        out.push(wr.block_perm(&Perm::from_cycles(m, &[vec![0, 1]]).unwrap()));
    }
    if m >= 3 {
        out.push(wr.block_perm(&Perm::from_cycles(m, &[(0..m).collect()]).unwrap()));
    }
    out
}

fn blockwise(wr: &Wreath, sub: &PermGroup) -> Vec<Perm> {
    let total = wr.d * wr.m;
    (0..wr.m)
        .flat_map(|i| sub.generators().iter().map(move |s| s.shifted(i * wr.d, total)))
        .collect()
}

fn product_char(wr: &Wreath, on: &GroupRef, factor: &dyn Fn(usize) -> ClassFunction) -> ClassFunction {
    let factors: Vec<ClassFunction> = (0..wr.m).map(factor).collect();
    ClassFunction::from_fn(on, |x| {
        let (xs, _) = wr.decompose(x);
        xs.iter()
            .zip(&factors)
            .fold(Cyclo::one(), |acc, (xi, f)| &acc * &f.at(xi))
    })
}

/// The witness for `((G_theta wr S_m) Delta G, N^m, theta^m) >=_c ((H_theta wr S_m) Delta H, M^m, phi^m)`.
pub fn wreath_diag_witness(w: &OrderWitness, m: usize) -> Result<OrderWitness> {
    if m == 0 || m > MAX_WREATH {
        check_wreath_size(m, 0)?;
    }
    let (up, low) = (&w.upper, &w.lower);
    let wr = Wreath::new(&up.group, m);
    let total = wr.d * m;
    let diag = |sub: &PermGroup| -> Vec<Perm> {
        sub.generators().iter().map(|s| wr.base_elem(&vec![s.clone(); m])).collect()
    };
    let big = |inertia: &PermGroup, whole: &PermGroup| -> Result<GroupRef> {
        let mut gens = blockwise(&wr, inertia);
        gens.extend(top_generators(&wr));
        gens.extend(diag(whole));
        group(total, gens)
    };
    let g = big(w.proj.group(), &up.group)?;
    check_wreath_size(m, g.order())?;
    let h = big(w.proj_low.group(), &low.group)?;
    let n = group(total, blockwise(&wr, &up.normal))?;
    let mm = group(total, blockwise(&wr, &low.normal))?;
    let theta = product_char(&wr, &n, &|_| up.theta.clone());
    let phi = product_char(&wr, &mm, &|_| low.theta.clone());
    let (d, dl) = (w.proj.dim(), w.proj_low.dim());
    let dr = rep_on(&n, d.pow(m as u32), &|x| {
        wreath_mat(&wr, x, d, &|_, xi| Ok(w.proj.rep().mat(xi).clone()))
    })?;
    let dlr = rep_on(&mm, dl.pow(m as u32), &|x| {
        wreath_mat(&wr, x, dl, &|_, xi| Ok(w.proj_low.rep().mat(xi).clone()))
    })?;
    let upper = HTriple::new(g, n, theta, up.p)?;
    let lower = HTriple::new(h, mm, phi, low.p)?;
    assemble(
        upper,
        lower,
        dr,
        &|x| wreath_mat(&wr, x, d, &|_, xi| Ok(w.proj.at(xi))),
        dlr,
        &|x| wreath_mat(&wr, x, dl, &|_, xi| Ok(w.proj_low.at(xi))),
    )
}

/// The witness over `theta^{s_1 m} x .. x theta^{s_k m}` in `G wr S_{mk}`,
/// provided the `theta^{s_i}` are pairwise not `G`-conjugate.
pub fn wreath_general_witness(w: &OrderWitness, m: usize, sigmas: &[u64]) -> Result<OrderWitness> {
    let (up, low) = (&w.upper, &w.lower);
    let k = sigmas.len();
    if k == 0 {
        return Err(Error::InvalidInput("at least one Galois automorphism expected".into()));
    }
    let n_blocks = m * k;
    check_wreath_size(n_blocks, 0)?;
    let hk = h_group(w.transcript.level, up.p);
    if let Some(s) = sigmas.iter().find(|&&s| !hk.contains(s)) {
        return Err(fail(format!("{s} is not in H_{}", w.transcript.level)));
    }
    let thetas = sigmas
        .iter()
        .map(|&s| up.theta.galois(s as i64))
        .collect::<Result<Vec<_>>>()?;
    let phis = sigmas
        .iter()
        .map(|&s| low.theta.galois(s as i64))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..k {
        for j in i + 1..k {
            if let Some(x) = up
                .group
                .elements()
                .iter()
                .find(|x| thetas[i].conjugate(x) == thetas[j])
            {
                return Err(Error::HypothesisFailed(format!(
                    "theta^{} and theta^{} are conjugate under {x}",
                    sigmas[i], sigmas[j]
                )));
            }
        }
    }
    let wr = Wreath::new(&up.group, n_blocks);
    let wrh = Wreath::new(&low.group, n_blocks);
    let total = wr.d * n_blocks;
    let n = group(total, blockwise(&wr, &up.normal))?;
    let mm = group(total, blockwise(&wr, &low.normal))?;
    let theta = product_char(&wr, &n, &|b| thetas[b / m].clone());
    let phi = product_char(&wr, &mm, &|b| phis[b / m].clone());
    let hg = h_group(wr.group.exponent(), up.p);
    let g = stabilizer_of_orbit(&wr.group, &n, &theta, &hg)?.into_ref();
    check_wreath_size(n_blocks, g.order())?;
    let h = stabilizer_of_orbit(&wrh.group, &mm, &phi, &hg)?.into_ref();
    let sig = |b: usize| sigmas[b / m] as i64;
    let (d, dl) = (w.proj.dim(), w.proj_low.dim());
    let dr = rep_on(&n, d.pow(n_blocks as u32), &|x| {
        wreath_mat(&wr, x, d, &|b, xi| w.proj.rep().mat(xi).galois(sig(b)))
    })?;
    let dlr = rep_on(&mm, dl.pow(n_blocks as u32), &|x| {
        wreath_mat(&wr, x, dl, &|b, xi| w.proj_low.rep().mat(xi).galois(sig(b)))
    })?;
    let upper = HTriple::new(g, n, theta, up.p)?;
    let lower = HTriple::new(h, mm, phi, low.p)?;
    assemble(
        upper,
        lower,
        dr,
        &|x| wreath_mat(&wr, x, d, &|b, xi| w.proj.at(xi).galois(sig(b))),
        dlr,
        &|x| wreath_mat(&wr, x, dl, &|b, xi| w.proj_low.at(xi).galois(sig(b))),
    )
}

/// Write `x` in `K Z` as `k z`.
fn split(x: &Perm, k: &PermGroup, z: &PermGroup) -> Option<(Perm, Perm)> {
    z.elements().iter().find_map(|c| {
        let a = x.mul(&c.inverse());
        k.contains(&a).then(|| (a, c.clone()))
    })
}

/// The witness for `(G_{(theta.lambda)^H}, NZ, theta.lambda) >=_c (H_{(phi.lambda)^H}, MZ, phi.lambda)`.
pub fn central_dot_witness(w: &OrderWitness, z: &GroupRef, lambda: &ClassFunction) -> Result<OrderWitness> {
    let (up, low) = (&w.upper, &w.lower);
    let (g, n, m) = (&up.group, &up.normal, &low.normal);
    if !z.is_subgroup_of(g) || !z.is_normal_in(g) {
        return Err(fail("Z is not normal in G"));
    }
    if !z.is_abelian() {
        return Err(fail("Z is not abelian"));
    }
    if z
        .generators()
        .iter()
        .any(|a| n.generators().iter().any(|b| a.mul(b) != b.mul(a)))
    {
        return Err(fail("Z is not contained in C_G(N)"));
    }
    if **lambda.group() != **z || !lambda.is_irreducible() {
        return Err(fail("lambda is not an irreducible character of Z"));
    }
    let deg = up.theta.degree();
    if let Some(y) = z
        .intersection(n)
        .elements()
        .iter()
        .find(|y| &lambda.at(y) * &deg != up.theta.at(y))
    {
        return Err(fail(format!("lambda does not lie over the character of Z meet N under theta (at {y})")));
    }
    let deg_of = g.degree();
    let join = |a: &GroupRef| {
        let mut gens = a.generators().to_vec();
        gens.extend(z.generators().iter().cloned());
        group(deg_of, gens)
    };
    let nz = join(n)?;
    let mz = join(m)?;
    let dot = |chi: &ClassFunction, k: &GroupRef, on: &GroupRef| {
        ClassFunction::from_fn(on, |x| {
            let (a, c) = split(x, k, z).expect("element of the central product");
            &chi.at(&a) * &lambda.at(&c)
        })
    };
    let theta = dot(&up.theta, n, &nz);
    let phi = dot(&low.theta, m, &mz);
    let hg = h_group(g.exponent(), up.p);
    let g2 = stabilizer_of_orbit(g, &nz, &theta, &hg)?.into_ref();
    let h2 = stabilizer_of_orbit(&low.group, &mz, &phi, &hg)?.into_ref();
    let upper = HTriple::new(g2, nz.clone(), theta, up.p)?;
    let lower = HTriple::new(h2, mz.clone(), phi, low.p)?;

    let d = rep_on(&nz, w.proj.dim(), &|s| {
        let (a, c) = split(s, n, z).unwrap();
        Ok(w.proj.rep().mat(&a).scale(&lambda.at(&c)))
    })?;
    let gt = upper.inertia().into_ref();
    let p = on_transversal(&gt, d, &|t| Ok(w.proj.at(t)))?;
    // p = eps P for a function eps constant on N-cosets; reuse it on H
    let eps = |x: &Perm| -> Result<Cyclo> {
        p.at(x)
            .ratio_to(&w.proj.at(x))
            .ok_or_else(|| Error::NormalizationFailed("rescaled P is not a multiple of P".into()))
    };
    let dl = rep_on(&mz, w.proj_low.dim(), &|s| Ok(w.proj_low.at(s).scale(&eps(s)?)))?;
    let ht = gt.intersection(&lower.group).into_ref();
    let pl = on_transversal(&ht, dl, &|t| Ok(w.proj_low.at(t).scale(&eps(t)?)))?;
    verified(&upper, &lower, p, pl)
}

/// Action of `x` by conjugation on the listed elements of `n`.
fn conj_action(n: &PermGroup, x: &Perm) -> Vec<usize> {
    n.elements()
        .iter()
        .map(|y| n.element_index(&y.conj(x)).expect("x normalizes N"))
        .collect()
}

fn action_image(n: &PermGroup, g: &PermGroup) -> Result<PermGroup> {
    let gens = g
        .generators()
        .iter()
        .map(|s| Perm::from_images(conj_action(n, s)))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(n.elements().len(), gens)
}

/// The witness for `(G^, N, theta) >=_c (H^, M, phi)` when `G^` and `H^`
/// induce the same automorphisms of `N` as `G` and `H`.
pub fn butterfly_witness(w: &OrderWitness, g_hat: &GroupRef, h_hat: &GroupRef) -> Result<OrderWitness> {
    let (up, low) = (&w.upper, &w.lower);
    let (n, m) = (&up.normal, &low.normal);
    if g_hat.degree() != n.degree() {
        return Err(Error::DegreeMismatch {
            expected: n.degree(),
            found: g_hat.degree(),
        });
    }
    if !n.is_subgroup_of(g_hat) || !n.is_normal_in(g_hat) {
        return Err(fail("N is not normal in the new upper group"));
    }
    if !h_hat.is_subgroup_of(g_hat) {
        return Err(fail("the new lower group is not contained in the new upper group"));
    }
    if action_image(n, &up.group)? != action_image(n, g_hat)? {
        return Err(Error::ImageMismatch("G and the new upper group induce different automorphisms of N".into()));
    }
    if action_image(n, &low.group)? != action_image(n, h_hat)? {
        return Err(Error::ImageMismatch("H and the new lower group induce different automorphisms of N".into()));
    }
    let c_hat = g_hat.centralizer_of(n);
    if let Some(c) = c_hat.elements().iter().find(|c| !h_hat.contains(c)) {
        return Err(fail(format!("{c} centralizes N but is not in the new lower group")));
    }
    let deg = n.degree();
    let cgn = up.group.centralizer_of(n);
    let mut gens = m.generators().to_vec();
    gens.extend(cgn.generators().iter().cloned());
    let mc = PermGroup::new(deg, gens)?;
    let tt = w.proj_low.group().right_transversal(&mc);

    let gt_hat = g_hat.filter_subgroup(|x| up.theta.conjugate(x) == up.theta).into_ref();
    let ht_hat = gt_hat.intersection(h_hat);
    let hats = tt
        .iter()
        .map(|t| {
            let a = conj_action(n, t);
            ht_hat
                .elements()
                .iter()
                .find(|y| conj_action(n, y) == a)
                .cloned()
                .ok_or_else(|| Error::ImageMismatch(format!("no element of the new lower group acts like {t}")))
        })
        .collect::<Result<Vec<_>>>()?;

    // lambda^(z c_i) = zeta_z on a fixed transversal c_i of Z(N) in C_G^(N)
    let zn = n.center();
    let creps = c_hat.right_transversal(&zn);
    let lam = |c: &Perm, chi: &ClassFunction| -> Result<Cyclo> {
        let z = creps
            .iter()
            .map(|r| c.mul(&r.inverse()))
            .find(|z| zn.contains(z))
            .expect("transversal of Z(N)");
        chi.at(&z).div(&chi.degree())
    };
    // x = t^ k c^ with k in K and c^ centralizing N
    let decompose = |x: &Perm, k: &PermGroup| -> Result<(usize, Perm, Perm)> {
        for (i, th) in hats.iter().enumerate() {
            let r = th.inverse().mul(x);
            for y in k.elements() {
                let c = y.inverse().mul(&r);
                if c_hat.contains(&c) {
                    return Ok((i, y.clone(), c));
                }
            }
        }
        Err(Error::Check(format!("{x} has no decomposition along the transversal")))
    };
    let upper = HTriple::new(g_hat.clone(), n.clone(), up.theta.clone(), up.p)?;
    let lower = HTriple::new(h_hat.clone(), m.clone(), low.theta.clone(), low.p)?;
    assemble(
        upper,
        lower,
        w.proj.rep().clone(),
        &|x| {
            let (i, y, c) = decompose(x, n)?;
            Ok(w.proj.at(&tt[i]).mul(w.proj.rep().mat(&y)).scale(&lam(&c, &up.theta)?))
        },
        w.proj_low.rep().clone(),
        &|x| {
            let (i, y, c) = decompose(x, m)?;
            Ok(w
                .proj_low
                .at(&tt[i])
                .mul(w.proj_low.rep().mat(&y))
                .scale(&lam(&c, &low.theta)?))
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::irreducibles;
    use crate::horder::{build_tau, find_witness};

    fn sym(n: usize) -> GroupRef {
        let t = Perm::from_cycles(n, &[vec![0, 1]]).unwrap();
        let c = Perm::from_cycles(n, &[(0..n).collect()]).unwrap();
        group(n, vec![t, c]).unwrap()
    }

    fn cyclic(n: usize) -> GroupRef {
        group(n, vec![Perm::from_cycles(n, &[(0..n).collect()]).unwrap()]).unwrap()
    }

    fn q8() -> GroupRef {
        let i = Perm::from_cycles(8, &[vec![0, 1, 3, 6], vec![2, 5, 7, 4]]).unwrap();
        let j = Perm::from_cycles(8, &[vec![0, 2, 3, 7], vec![1, 4, 6, 5]]).unwrap();
        group(8, vec![i, j]).unwrap()
    }

    fn s4_witness() -> OrderWitness {
        let g = sym(4);
        let a4 = g.derived_subgroup().into_ref();
        let theta = irreducibles(&a4).unwrap().into_iter().find(|c| c.degree_int() == 3).unwrap();
        let h = group(4, vec![Perm::from_cycles(4, &[vec![0, 1]]).unwrap()]).unwrap();
        let one = PermGroup::trivial(4).into_ref();
        let up = HTriple::new(g, a4, theta, 2).unwrap();
        let low = HTriple::new(h, one.clone(), ClassFunction::trivial(&one), 2).unwrap();
        find_witness(&up, &low).unwrap()
    }

    fn q8_witness() -> OrderWitness {
        let g = q8();
        let z = g.center().into_ref();
        let theta = irreducibles(&z).unwrap().into_iter().find(|c| c.value(1).as_integer() == Some(-1)).unwrap();
        reflexive_witness(&HTriple::new(g, z, theta, 2).unwrap()).unwrap()
    }

    fn c3_witness() -> OrderWitness {
        let g = cyclic(3);
        let theta = irreducibles(&g).unwrap().into_iter().find(|c| c.conductor() == 3).unwrap();
        reflexive_witness(&HTriple::new(g.clone(), g, theta, 2).unwrap()).unwrap()
    }

    fn trivial_witness(g: GroupRef, n: GroupRef) -> OrderWitness {
        let one = ClassFunction::trivial(&n);
        reflexive_witness(&HTriple::new(g, n, one, 2).unwrap()).unwrap()
    }

    #[test]
    fn restriction() {
        let w = q8_witness();
        let same = restrict_witness(&w, &w.upper.group).unwrap();
        assert_eq!(same.proj.transversal_mats(), w.proj.transversal_mats());
        let down = restrict_witness(&w, &w.upper.normal).unwrap();
        assert_eq!(down.upper.group.order(), 2);
        let i = w.upper.group.generators()[0].clone();
        let c4 = group(8, vec![i]).unwrap();
        let mid = restrict_witness(&w, &c4).unwrap();
        assert_eq!(mid.lower.group.order(), 4);
        let s4 = s4_witness();
        assert!(matches!(restrict_witness(&s4, &sym(4).sylow(2).into_ref()), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn transport_and_conjugation() {
        let w = s4_witness();
        let g = &w.upper.group;
        let id = Iso::new(g.clone(), g.clone(), g.generators().to_vec()).unwrap();
        let same = transport_witness(&w, &id).unwrap();
        assert_eq!(same.proj.transversal_mats(), w.proj.transversal_mats());
        let relabel = Iso::conjugation(g, &Perm::from_cycles(4, &[vec![0, 2, 1, 3]]).unwrap()).unwrap();
        let moved = transport_witness(&w, &relabel).unwrap();
        assert_eq!(moved.lower.group.order(), 2);
        let h = w.lower.group.generators()[0].clone();
        conjugate_witness(&w, &h).unwrap();
        conjugate_witness(&w, &Perm::identity(4)).unwrap();
        let outside = Perm::from_cycles(4, &[vec![0, 1, 2]]).unwrap();
        assert!(matches!(conjugate_witness(&w, &outside), Err(Error::PreconditionFailed(_))));
        let swap = Perm::from_cycles(4, &[vec![0, 1]]).unwrap();
        let not_hom = Iso::new(g.clone(), g.clone(), vec![swap.clone(), swap]);
        assert!(matches!(not_hom, Err(Error::NotIsomorphism(_))));
    }

    #[test]
    fn conjugation_keeps_the_glued_bijection() {
        let w = q8_witness();
        let tau = build_tau(&w).unwrap();
        for h in w.lower.group.generators() {
            let c = conjugate_witness(&w, h).unwrap();
            assert!(build_tau(&c).unwrap().same_map(&tau));
        }
    }

    #[test]
    fn galois_twist() {
        let w = q8_witness();
        let tau = build_tau(&w).unwrap();
        for &k in &h_group(w.transcript.level, 2).elements {
            let t = galois_twist_witness(&w, k).unwrap();
            assert!(build_tau(&t).unwrap().same_map(&tau));
        }
        let w3 = c3_witness();
        let t = galois_twist_witness(&w3, 2).unwrap();
        assert_eq!(t.upper.theta, w3.upper.theta.galois(2).unwrap());
        assert!(matches!(galois_twist_witness(&w3, 3), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn quotients() {
        let w = q8_witness();
        let one = PermGroup::trivial(8).into_ref();
        let same = quotient_witness(&w, &one).unwrap();
        assert_eq!(same.upper.group.order(), 8);

        let c2 = cyclic(2);
        let big = direct_product_witness(&w, &trivial_witness(c2.clone(), c2)).unwrap();
        let l = group(10, vec![Perm::from_cycles(10, &[vec![8, 9]]).unwrap()]).unwrap();
        let q = quotient_witness(&big, &l).unwrap();
        assert_eq!(q.upper.group.order(), 8);
        assert!(!q.proj.factor_set().is_trivial());

        let err = quotient_witness(&w, &w.upper.normal).unwrap_err();
        assert!(err.to_string().contains("ker theta"), "{err}");
        let v4 = group(4, vec![
            Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap(),
            Perm::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap(),
        ])
        .unwrap();
        let err = quotient_witness(&s4_witness(), &v4).unwrap_err();
        assert!(err.to_string().contains("C_G(N)"), "{err}");
        // on a valid witness ker phi follows from the other conditions, so forge the lower triple
        let mut forged = big.clone();
        let m = forged.lower.normal.clone();
        let phi = irreducibles(&m)
            .unwrap()
            .into_iter()
            .find(|c| l.elements().iter().any(|x| c.at(x) != c.degree()))
            .unwrap();
        forged.lower = HTriple::new(forged.lower.group.clone(), m, phi, 2).unwrap();
        let err = quotient_witness(&forged, &l).unwrap_err();
        assert!(err.to_string().contains("ker phi"), "{err}");
        let err = quotient_witness(&trivial_witness(sym(4), v4.clone()), &v4).unwrap_err();
        assert!(err.to_string().contains("C_{G/L}"), "{err}");
        let c = group(4, vec![Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap()]).unwrap();
        let err = quotient_witness(&trivial_witness(sym(4), v4), &c).unwrap_err();
        assert!(err.to_string().contains("normal"), "{err}");
    }

    #[test]
    fn direct_products() {
        let w = s4_witness();
        let c2 = cyclic(2);
        let triv = trivial_witness(c2.clone(), PermGroup::trivial(2).into_ref());
        let x = direct_product_witness(&w, &triv).unwrap();
        assert_eq!(x.upper.group.order(), 48);
        assert_eq!(x.proj.dim(), 3);
        let y = direct_product_witness(&w, &c3_witness()).unwrap();
        let g = &y.upper.group;
        assert_eq!(g.order(), 72);
        let tau = build_tau(&y).unwrap();
        assert!(tau.is_bijective());
        assert!(tau.preserves_ratios(3, 1));
    }

    #[test]
    fn orbit_stabilizer_bookkeeping() {
        let w = c3_witness();
        let y = direct_product_witness(&w, &w).unwrap();
        let full = DirectProduct::new(&w.upper.group, &w.upper.group).group;
        let hg = h_group(full.exponent(), 2);
        let orbit: Vec<ClassFunction> = hg
            .elements
            .iter()
            .map(|&k| y.upper.theta.galois(k as i64).unwrap())
            .collect();
        let direct = full
            .elements()
            .iter()
            .filter(|x| orbit.contains(&y.upper.theta.conjugate(x)))
            .count() as u64;
        assert_eq!(direct, y.upper.group.order());
    }

    #[test]
    fn wreath_diagonal() {
        let w = c3_witness();
        let one = wreath_diag_witness(&w, 1).unwrap();
        assert_eq!(one.upper.group.order(), 3);
        let w2 = wreath_diag_witness(&q8_witness(), 2).unwrap();
        assert_eq!(w2.upper.group.order(), 128);
        assert_eq!(w2.proj.dim(), 1);
        assert!(matches!(wreath_diag_witness(&s4_witness(), 2), Err(Error::SizeLimitExceeded { .. })));
        assert!(matches!(wreath_diag_witness(&w, 4), Err(Error::SizeLimitExceeded { .. })));
    }

    #[test]
    fn wreath_mu_is_a_product() {
        let w = q8_witness();
        let wt = wreath_diag_witness(&w, 2).unwrap();
        let wr = Wreath::new(&w.upper.group, 2);
        for y in w.lower.group.elements().iter().take(4) {
            for k in [1i64, 3] {
                let gamma = wr.base_elem(&[y.clone(), y.clone()]);
                let big = wt.proj.mu(&gamma, k).unwrap();
                let small = w.proj.mu(y, k).unwrap();
                for x in wt.proj.group().elements().iter().step_by(5) {
                    let (xs, _) = wr.decompose(x);
                    let rhs = &small.at(&w.proj, &xs[0]) * &small.at(&w.proj, &xs[1]);
                    assert_eq!(big.at(&wt.proj, x), rhs);
                }
            }
        }
    }

    #[test]
    fn wreath_general() {
        let w = c3_witness();
        let x = wreath_general_witness(&w, 1, &[1, 2]).unwrap();
        assert_eq!(x.upper.normal.order(), 9);
        assert!(matches!(
            wreath_general_witness(&w, 1, &[1, 1]),
            Err(Error::HypothesisFailed(_))
        ));
    }

    #[test]
    fn central_dot() {
        let w = q8_witness();
        let same = central_dot_witness(&w, &w.upper.normal, &w.upper.theta).unwrap();
        assert_eq!(same.upper.theta, w.upper.theta);

        // Q8 x C4 with lambda faithful on C4, then the central product Q8 o C4
        let c4 = cyclic(4);
        let base = direct_product_witness(&w, &trivial_witness(c4.clone(), PermGroup::trivial(4).into_ref())).unwrap();
        let g = &base.upper.group;
        let z = g.center().into_ref();
        assert_eq!(z.order(), 8);
        let lambda = irreducibles(&z)
            .unwrap()
            .into_iter()
            .find(|l| {
                let on_n = base.upper.normal.elements().iter().all(|y| l.at(y) == base.upper.theta.at(y));
                on_n && l.conductor() == 4
            })
            .unwrap();
        let dot = central_dot_witness(&base, &z, &lambda).unwrap();
        let l = lambda.kernel().into_ref();
        assert_eq!(l.order(), 2);
        let q = quotient_witness(&dot, &l).unwrap();
        assert_eq!(q.upper.group.order(), 16);

        let wrong = irreducibles(&z)
            .unwrap()
            .into_iter()
            .find(|l| base.upper.normal.elements().iter().any(|y| l.at(y) != base.upper.theta.at(y)))
            .unwrap();
        let err = central_dot_witness(&base, &z, &wrong).unwrap_err();
        assert!(err.to_string().contains("lie over"), "{err}");
        let q = q8();
        let i = group(8, vec![q.generators()[0].clone()]).unwrap();
        let lam = irreducibles(&i).unwrap().remove(0);
        let err = central_dot_witness(&trivial_witness(q.clone(), q.clone()), &i, &lam).unwrap_err();
        assert!(err.to_string().contains("C_G(N)"), "{err}");
        let s3 = sym(3);
        let err = central_dot_witness(&trivial_witness(s3.clone(), PermGroup::trivial(3).into_ref()), &s3, &ClassFunction::trivial(&s3))
            .unwrap_err();
        assert!(err.to_string().contains("abelian"), "{err}");
    }

    #[test]
    fn butterfly() {
        let w = s4_witness();
        let same = butterfly_witness(&w, &w.upper.group, &w.lower.group).unwrap();
        assert_eq!(same.upper.group.order(), 24);

        let g = &w.upper.group;
        let images: Vec<Perm> = g.generators().iter().map(|s| s.extend(6)).collect();
        let g6 = group(6, images.clone()).unwrap();
        let w6 = transport_witness(&w, &Iso::new(g.clone(), g6, images.clone()).unwrap()).unwrap();
        let extra = Perm::from_cycles(6, &[vec![4, 5]]).unwrap();
        let mut gens = images;
        gens.push(extra.clone());
        let g_hat = group(6, gens).unwrap();
        let h_hat = group(6, vec![Perm::from_cycles(6, &[vec![0, 1]]).unwrap(), extra.clone()]).unwrap();
        let b = butterfly_witness(&w6, &g_hat, &h_hat).unwrap();
        assert_eq!(b.upper.group.order(), 48);
        assert_eq!(b.lower.group.order(), 4);

        let c = group(6, vec![extra]).unwrap();
        assert!(matches!(butterfly_witness(&w6, &g_hat, &c), Err(Error::ImageMismatch(_))));
    }
}
