#![allow(dead_code)]

use galmck_core::catalog::lookup;
use galmck_core::chartab::{irreducibles, ClassFunction};
use galmck_core::constructions::{
    butterfly_witness, central_dot_witness, conjugate_witness, direct_product_witness,
    galois_twist_witness, quotient_witness, reflexive_witness, restrict_witness, transport_witness,
    wreath_diag_witness, wreath_general_witness, Iso,
};
use galmck_core::cyclo::Cyclo;
use galmck_core::group::{GroupRef, PermGroup};
use galmck_core::cliff::inertia_group;
use galmck_core::hgal::{h_group, HTriple};
use galmck_core::projrep::{projective_rep, ProjRep};
use rand::seq::SliceRandom;
use galmck_core::horder::{check_geq_c, find_witness, OrderWitness};
use galmck_core::{Error, Result};
use galmck_core::perm::Perm;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-6;

pub fn cat(name: &str) -> GroupRef {
    lookup(name).unwrap().materialize().unwrap()
}

pub fn perm(n: usize, cycles: &[&[usize]]) -> Perm {
    Perm::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub fn group(n: usize, gens: &[Perm]) -> GroupRef {
    PermGroup::new(n, gens.to_vec()).unwrap().into_ref()
}

/// Numerical value of a cyclotomic, read from its serialized form
/// `{"n": n, "c": [[e, "q"], ...]}` meaning `sum q zeta_n^e`.
pub fn complex(c: &Cyclo) -> Complex64 {
    complex_twisted(c, 1)
}

/// Numerical value of the image of `c` under `zeta -> zeta^k`.
pub fn complex_twisted(c: &Cyclo, k: u64) -> Complex64 {
    let v = serde_json::to_value(c).unwrap();
    let n = v["n"].as_u64().unwrap();
    let mut z = Complex64::new(0.0, 0.0);
    for term in v["c"].as_array().unwrap() {
        let e = term[0].as_u64().unwrap();
        let q = term[1].as_str().unwrap();
        let q = match q.split_once('/') {
            Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
            None => q.parse::<f64>().unwrap(),
        };
        let angle = 2.0 * std::f64::consts::PI * ((e * k) % n) as f64 / n as f64;
        z += Complex64::from_polar(q, angle);
    }
    z
}

pub fn close(a: &[Complex64], b: &[Complex64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < TOL)
}

/// Irreducible characters by Burnside's method: common eigenvectors of the
/// class multiplication matrices, computed in floating point.
pub fn burnside_table(g: &GroupRef, seed: u64) -> Vec<Vec<Complex64>> {
    let classes = g.classes();
    let r = classes.len();
    let elements = g.elements();
    let order = elements.len() as f64;
    let members: Vec<Vec<&Perm>> = (0..r)
        .map(|c| elements.iter().filter(|x| g.class_of(x) == Some(c)).collect())
        .collect();
    // a[j][k][l] = #{x in C_j : x^-1 z_l in C_k}
    let mut a = vec![vec![vec![0.0f64; r]; r]; r];
    for l in 0..r {
        let z = &classes.reps[l];
        for (j, cj) in members.iter().enumerate() {
            for x in cj {
                let y = x.inverse().mul(z);
                a[j][g.class_of(&y).unwrap()][l] += 1.0;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<f64> = (0..r).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let m = DMatrix::<Complex64>::from_fn(r, r, |k, l| {
        Complex64::new((0..r).map(|j| coeffs[j] * a[j][k][l]).sum(), 0.0)
    });
    let eig = m.map(|z| z.re).complex_eigenvalues();
    let identity_class = (0..r).find(|&c| classes.reps[c].is_identity()).unwrap();
    let mut rows = Vec::new();
    for lambda in eig.iter() {
        let shifted = &m - DMatrix::<Complex64>::identity(r, r) * *lambda;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.unwrap();
        let (idx, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.partial_cmp(y.1).unwrap())
            .unwrap();
        let mut w: Vec<Complex64> = vt.row(idx).iter().map(|z| z.conj()).collect();
        let w0 = w[identity_class];
        for x in w.iter_mut() {
            *x /= w0;
        }
        let norm: f64 = (0..r).map(|j| w[j].norm_sqr() / classes.sizes[j] as f64).sum();
        let deg = (order / norm).sqrt();
        rows.push((0..r).map(|j| w[j] * deg / classes.sizes[j] as f64).collect());
    }
    rows
}

/// Backtracking search for a bijection `a -> b` commuting with every
/// `sigma_k`, the action being computed numerically from character values.
pub fn equivariant_bijection(a: &[ClassFunction], b: &[ClassFunction], ks: &[u64]) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let table = |chars: &[ClassFunction]| -> Vec<Vec<usize>> {
        let base: Vec<Vec<Complex64>> = chars.iter().map(|c| c.values().iter().map(complex).collect()).collect();
        ks.iter()
            .map(|&k| {
                chars
                    .iter()
                    .map(|c| {
                        let img: Vec<Complex64> = c.values().iter().map(|v| complex_twisted(v, k)).collect();
                        base.iter().position(|row| close(row, &img)).expect("closed under H")
                    })
                    .collect()
            })
            .collect()
    };
    let (ta, tb) = (table(a), table(b));
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    fn consistent(i: usize, map: &[usize], ta: &[Vec<usize>], tb: &[Vec<usize>]) -> bool {
        (0..ta.len()).all(|s| (0..=i).all(|x| ta[s][x] > i || map[ta[s][x]] == tb[s][map[x]]))
    }
    fn go(i: usize, map: &mut Vec<usize>, used: &mut Vec<bool>, ta: &[Vec<usize>], tb: &[Vec<usize>]) -> bool {
        if i == map.len() {
            return true;
        }
        for y in 0..used.len() {
            if used[y] {
                continue;
            }
            map[i] = y;
            if consistent(i, map, ta, tb) {
                used[y] = true;
                if go(i + 1, map, used, ta, tb) {
                    return true;
                }
                used[y] = false;
            }
            map[i] = usize::MAX;
        }
        false
    }
    if go(0, &mut map, &mut used, &ta, &tb) {
        Some(map)
    } else {
        None
    }
}

pub fn sym(n: usize) -> GroupRef {
    group(n, &[perm(n, &[&[0, 1]]), Perm::from_cycles(n, &[(0..n).collect()]).unwrap()])
}

/// `(S4, A4, theta_3) >=_c (<(0 1)>, 1, 1)` at `p = 2`.
pub fn s4_triples() -> (HTriple, HTriple) {
    let g = sym(4);
    let a4 = g.derived_subgroup().into_ref();
    let theta = irreducibles(&a4).unwrap().into_iter().find(|c| c.degree_int() == 3).unwrap();
    let h = group(4, &[perm(4, &[&[0, 1]])]);
    let one = PermGroup::trivial(4).into_ref();
    (
        HTriple::new(g, a4, theta, 2).unwrap(),
        HTriple::new(h, one.clone(), ClassFunction::trivial(&one), 2).unwrap(),
    )
}

/// `(S3, A3, theta)` against `(<(0 1)>, 1, 1)` at `p = 2`.
pub fn s3_triples() -> (HTriple, HTriple) {
    let g = sym(3);
    let a3 = g.derived_subgroup().into_ref();
    let theta = irreducibles(&a3).unwrap().into_iter().find(|c| c.kernel().order() == 1).unwrap();
    let h = group(3, &[perm(3, &[&[0, 1]])]);
    let one = PermGroup::trivial(3).into_ref();
    (
        HTriple::new(g, a3, theta, 2).unwrap(),
        HTriple::new(h, one.clone(), ClassFunction::trivial(&one), 2).unwrap(),
    )
}

/// `(Q8, Z, theta)` with `theta(z) = -1`, at `p = 2`.
pub fn q8_central() -> HTriple {
    let g = cat("Q8");
    let z = g.center().into_ref();
    let theta = irreducibles(&z)
        .unwrap()
        .into_iter()
        .find(|c| c.kernel().order() == 1)
        .unwrap();
    HTriple::new(g, z, theta, 2).unwrap()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn s4_witness() -> OrderWitness {
    let (up, low) = s4_triples();
    find_witness(&up, &low).unwrap()
}

pub fn q8_witness() -> OrderWitness {
    reflexive_witness(&q8_central()).unwrap()
}

/// `(C3, C3, lambda)` with `lambda` faithful, at `p`.
pub fn c3_witness(p: u64) -> OrderWitness {
    let g = cat("C3");
    let theta = irreducibles(&g).unwrap().into_iter().find(|c| c.conductor() == 3).unwrap();
    reflexive_witness(&HTriple::new(g.clone(), g, theta, p).unwrap()).unwrap()
}

pub fn trivial_witness(g: GroupRef, n: GroupRef) -> OrderWitness {
    let one = ClassFunction::trivial(&n);
    reflexive_witness(&HTriple::new(g, n, one, 2).unwrap()).unwrap()
}

/// Re-run the full check on a witness's own data.
pub fn repasses(w: &OrderWitness) -> bool {
    check_geq_c(&w.upper, &w.lower, &w.proj, &w.proj_low).is_ok()
}

/// The S4 witness moved to 6 points, with the groups used by the butterfly
/// examples: `G^ = S4 x <(4 5)>`.
pub fn butterfly_setup() -> (OrderWitness, GroupRef, Perm) {
    let w = s4_witness();
    let g = &w.upper.group;
    let images: Vec<Perm> = g.generators().iter().map(|s| s.extend(6)).collect();
    let g6 = group(6, &images);
    let w6 = transport_witness(&w, &Iso::new(g.clone(), g6, images.clone()).unwrap()).unwrap();
    let extra = perm(6, &[&[4, 5]]);
    let mut gens = images;
    gens.push(extra.clone());
    (w6, group(6, &gens), extra)
}

/// One desk instance per closure construction.
pub fn closure_outputs() -> Vec<(&'static str, OrderWitness)> {
    let q8 = q8_witness();
    let mut out = Vec::new();
    out.push(("direct_product", direct_product_witness(&s4_witness(), &c3_witness(2)).unwrap()));

    let c2 = cat("C2");
    let big = direct_product_witness(&q8, &trivial_witness(c2.clone(), c2)).unwrap();
    let l = group(10, &[perm(10, &[&[8, 9]])]);
    out.push(("quotient", quotient_witness(&big, &l).unwrap()));

    let c4 = cat("C4");
    let base = direct_product_witness(&q8, &trivial_witness(c4, PermGroup::trivial(4).into_ref())).unwrap();
    let z = base.upper.group.center().into_ref();
    let lambda = irreducibles(&z)
        .unwrap()
        .into_iter()
        .find(|l| {
            l.conductor() == 4 && base.upper.normal.elements().iter().all(|y| l.at(y) == base.upper.theta.at(y))
        })
        .unwrap();
    out.push(("central_dot", central_dot_witness(&base, &z, &lambda).unwrap()));

    out.push(("wreath_diag(m=2)", wreath_diag_witness(&q8, 2).unwrap()));
    out.push(("wreath_general(k=2,m=1)", wreath_general_witness(&c3_witness(2), 1, &[1, 2]).unwrap()));

    let (w6, g_hat, extra) = butterfly_setup();
    let h_hat = group(6, &[perm(6, &[&[0, 1]]), extra]);
    out.push(("butterfly", butterfly_witness(&w6, &g_hat, &h_hat).unwrap()));
    out
}

fn is_pre(r: Result<OrderWitness>, needle: &str) -> bool {
    matches!(r, Err(Error::PreconditionFailed(ref m)) if m.contains(needle))
}

/// Every documented precondition of the closure constructions, each with
/// an input violating it; `true` when the violation is reported.
pub fn closure_negatives() -> Vec<(&'static str, bool)> {
    let s4 = s4_witness();
    let q8 = q8_witness();
    let c3 = c3_witness(2);
    let mut out = Vec::new();

    out.push((
        "restrict: J not between N and G",
        is_pre(restrict_witness(&s4, &s4.upper.group.sylow(2).into_ref()), "between"),
    ));

    let g = &s4.upper.group;
    let short = Iso::new(g.clone(), g.clone(), vec![g.generators()[0].clone()]);
    out.push(("transport: image count", matches!(short, Err(Error::NotIsomorphism(_)))));
    let outside = Iso::new(g.clone(), g.derived_subgroup().into_ref(), g.generators().to_vec());
    out.push(("transport: image outside target", matches!(outside, Err(Error::NotIsomorphism(_)))));
    let nonhom = Iso::new(g.clone(), g.clone(), vec![perm(4, &[&[0, 1]]), perm(4, &[&[0, 1]])]);
    out.push(("transport: not a homomorphism", matches!(nonhom, Err(Error::NotIsomorphism(_)))));
    let c2 = group(4, &[perm(4, &[&[0, 1], &[2, 3]])]);
    let onto_smaller = Iso::new(g.clone(), c2.clone(), vec![perm(4, &[&[0, 1], &[2, 3]]); 2]);
    out.push(("transport: not bijective", matches!(onto_smaller, Err(Error::NotIsomorphism(_)))));
    let wrong_src = Iso::new(c2.clone(), c2.clone(), c2.generators().to_vec()).unwrap();
    out.push((
        "transport: source is not G",
        matches!(transport_witness(&s4, &wrong_src), Err(Error::NotIsomorphism(_))),
    ));

    out.push(("conjugate: h not in H", is_pre(conjugate_witness(&s4, &perm(4, &[&[0, 1, 2]])), "not in H")));
    out.push(("galois twist: k not in H_n", is_pre(galois_twist_witness(&c3, 3), "not in H")));

    let l = group(4, &[perm(4, &[&[0, 1], &[2, 3]])]);
    out.push(("quotient: L not normal", is_pre(quotient_witness(&s4, &l), "not normal")));
    let v4 = g.derived_subgroup().derived_subgroup().into_ref();
    out.push(("quotient: L not in C_G(N)", is_pre(quotient_witness(&s4, &v4), "C_G(N)")));
    out.push(("quotient: L not in ker theta", is_pre(quotient_witness(&q8, &q8.upper.normal), "ker theta")));
    {
        let c2 = cat("C2");
        let big = direct_product_witness(&q8, &trivial_witness(c2.clone(), c2)).unwrap();
        let mut forged = big.clone();
        let m = forged.lower.normal.clone();
        let phi = irreducibles(&m)
            .unwrap()
            .into_iter()
            .find(|c| !c.at(&perm(10, &[&[8, 9]])).is_one())
            .unwrap();
        forged.lower = HTriple::new(forged.lower.group.clone(), m, phi, 2).unwrap();
        let l = group(10, &[perm(10, &[&[8, 9]])]);
        out.push(("quotient: L not in ker phi", is_pre(quotient_witness(&forged, &l), "ker phi")));
    }
    {
        let q = cat("Q8");
        let c4 = group(8, &[q.generators()[0].clone()]);
        let w = trivial_witness(q.clone(), c4);
        let z = q.center().into_ref();
        out.push(("quotient: centralizer of N/L", is_pre(quotient_witness(&w, &z), "C_{G/L}")));
    }

    let c3p3 = c3_witness(3);
    out.push((
        "direct product: different primes",
        matches!(direct_product_witness(&c3, &c3p3), Err(Error::InvalidInput(_))),
    ));

    out.push(("wreath: m = 0", matches!(wreath_diag_witness(&c3, 0), Err(Error::InvalidInput(_)))));
    out.push((
        "wreath: size bound",
        matches!(wreath_diag_witness(&s4, 2), Err(Error::SizeLimitExceeded { .. })),
    ));
    out.push((
        "wreath general: no sigma",
        matches!(wreath_general_witness(&c3, 1, &[]), Err(Error::InvalidInput(_))),
    ));
    out.push(("wreath general: sigma not in H_n", is_pre(wreath_general_witness(&c3, 1, &[1, 3]), "not in H")));
    out.push((
        "wreath general: conjugate thetas",
        matches!(wreath_general_witness(&c3, 1, &[1, 1]), Err(Error::HypothesisFailed(_))),
    ));

    let t = group(4, &[perm(4, &[&[0, 1]])]);
    let lam_t = irreducibles(&t).unwrap().remove(0);
    out.push(("central dot: Z not normal", is_pre(central_dot_witness(&s4, &t, &lam_t), "not normal")));
    let s3 = sym(3);
    let w_s3 = trivial_witness(s3.clone(), PermGroup::trivial(3).into_ref());
    out.push((
        "central dot: Z not abelian",
        is_pre(central_dot_witness(&w_s3, &s3, &ClassFunction::trivial(&s3)), "abelian"),
    ));
    {
        let q = cat("Q8");
        let i = group(8, &[q.generators()[0].clone()]);
        let lam = irreducibles(&i).unwrap().remove(0);
        let w = trivial_witness(q.clone(), q.clone());
        out.push(("central dot: Z not in C_G(N)", is_pre(central_dot_witness(&w, &i, &lam), "C_G(N)")));
    }
    {
        let z = q8.upper.normal.clone();
        let foreign = ClassFunction::trivial(&cat("C2"));
        out.push((
            "central dot: lambda not a character of Z",
            is_pre(central_dot_witness(&q8, &z, &foreign), "irreducible character of Z"),
        ));
        let one = ClassFunction::trivial(&z);
        out.push(("central dot: lambda not over theta", is_pre(central_dot_witness(&q8, &z, &one), "lie over")));
    }

    let (w6, g_hat, extra) = butterfly_setup();
    let h_hat = group(6, &[perm(6, &[&[0, 1]]), extra.clone()]);
    out.push((
        "butterfly: degree mismatch",
        matches!(butterfly_witness(&w6, &sym(5), &sym(5)), Err(Error::DegreeMismatch { .. })),
    ));
    let mut s5 = g_hat.generators().to_vec();
    s5.push(perm(6, &[&[3, 4]]));
    let s5 = group(6, &s5);
    out.push(("butterfly: N not normal", is_pre(butterfly_witness(&w6, &s5, &h_hat), "not normal")));
    let outside = group(6, &[perm(6, &[&[0, 5]])]);
    out.push(("butterfly: lower not in upper", is_pre(butterfly_witness(&w6, &g_hat, &outside), "not contained")));
    let mut inner = w6.upper.normal.generators().to_vec();
    inner.push(extra.clone());
    let inner = group(6, &inner);
    let h_in = group(6, std::slice::from_ref(&extra));
    out.push((
        "butterfly: upper automorphism image",
        matches!(butterfly_witness(&w6, &inner, &h_in), Err(Error::ImageMismatch(_))),
    ));
    out.push((
        "butterfly: lower automorphism image",
        matches!(butterfly_witness(&w6, &g_hat, &h_in), Err(Error::ImageMismatch(_))),
    ));
    let h_small = group(6, &[perm(6, &[&[0, 1]])]);
    out.push(("butterfly: centralizer not in lower", is_pre(butterfly_witness(&w6, &g_hat, &h_small), "centralizes")));
    out
}

/// Exact row and column orthogonality and the sum of squared degrees.
pub fn exact_orthogonality(g: &GroupRef) -> bool {
    let irr = irreducibles(g).unwrap();
    let classes = g.classes();
    let r = classes.reps.len();
    if irr.len() != r {
        return false;
    }
    let order = Cyclo::from_int(g.order() as i64);
    let deg2: i64 = irr.iter().map(|c| c.degree_int().pow(2)).sum();
    if deg2 as u64 != g.order() {
        return false;
    }
    for (i, a) in irr.iter().enumerate() {
        for (j, b) in irr.iter().enumerate() {
            let s: Cyclo = (0..r)
                .map(|c| &(&a.values()[c] * &b.values()[c].conj()) * &Cyclo::from_int(classes.sizes[c] as i64))
                .sum();
            let want = if i == j { order.clone() } else { Cyclo::zero() };
            if s != want {
                return false;
            }
        }
    }
    for x in 0..r {
        for y in 0..r {
            let s: Cyclo = irr.iter().map(|c| &c.values()[x] * &c.values()[y].conj()).sum();
            let want = if x == y {
                Cyclo::from_int((g.order() / classes.sizes[x]) as i64)
            } else {
                Cyclo::zero()
            };
            if s != want {
                return false;
            }
        }
    }
    true
}

/// The exact table and the Burnside table agree up to row order.
pub fn burnside_matches(g: &GroupRef, seed: u64) -> bool {
    let exact: Vec<Vec<Complex64>> = irreducibles(g)
        .unwrap()
        .iter()
        .map(|c| c.values().iter().map(complex).collect())
        .collect();
    let oracle = burnside_table(g, seed);
    if exact.len() != oracle.len() {
        return false;
    }
    let mut used = vec![false; oracle.len()];
    for row in &exact {
        match (0..oracle.len()).find(|&i| !used[i] && close(row, &oracle[i])) {
            Some(i) => used[i] = true,
            None => return false,
        }
    }
    true
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_pow(b: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| acc * b % m)
}

fn p_prime_part(mut n: u64, p: u64) -> u64 {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n
}

/// Units `k` mod `n` agreeing with some power of `p` modulo `n_p'`.
pub fn naive_h(n: u64, p: u64) -> Vec<u64> {
    let m = p_prime_part(n, p);
    (0..n.max(1))
        .filter(|&k| gcd(k, n) == 1)
        .filter(|&k| (0..=n).any(|f| (k % m) == mod_pow(p, f, m)))
        .collect()
}

/// `ord(p mod n_p') * phi(n_p)` by counting.
pub fn naive_h_order(n: u64, p: u64) -> u64 {
    let m = p_prime_part(n, p);
    let ord = (1..=m).find(|&f| mod_pow(p, f, m) == 1 % m).unwrap();
    let np = n / m;
    let phi = (1..=np).filter(|&k| gcd(k, np) == 1).count() as u64;
    ord * phi
}

pub struct Case {
    pub name: &'static str,
    pub ambient: GroupRef,
    pub normal: GroupRef,
    pub theta: ClassFunction,
    pub proj: ProjRep,
}

fn pick_theta(n: &GroupRef) -> ClassFunction {
    irreducibles(n)
        .unwrap()
        .into_iter()
        .filter(|c| c.kernel().order() < n.order())
        .min_by_key(|c| (c.kernel().order(), -c.degree_int()))
        .unwrap()
}

pub fn projrep_cases() -> Vec<Case> {
    let derived = |g: &GroupRef| g.derived_subgroup().into_ref();
    let centre = |g: &GroupRef| g.center().into_ref();
    let specs: Vec<(&'static str, GroupRef, GroupRef)> = vec![
        ("S4 over V4", cat("S4"), derived(&derived(&cat("S4")))),
        ("S4 over A4", cat("S4"), derived(&cat("S4"))),
        ("Q8 over Z", cat("Q8"), centre(&cat("Q8"))),
        ("D8 over Z", cat("D8"), centre(&cat("D8"))),
        ("SL(2,3) over Q8", cat("SL(2,3)"), derived(&cat("SL(2,3)"))),
        ("GL(2,3) over Q8", cat("GL(2,3)"), derived(&derived(&cat("GL(2,3)")))),
        ("S3xS3 over C3xC3", cat("S3xS3"), derived(&cat("S3xS3"))),
        ("Dic12 over C3", cat("Dic12"), derived(&cat("Dic12"))),
    ];
    specs
        .into_iter()
        .map(|(name, ambient, normal)| {
            let theta = pick_theta(&normal);
            let g_theta = inertia_group(&ambient, &normal, &theta).unwrap().into_ref();
            let proj = projective_rep(&g_theta, &normal, &theta).unwrap();
            Case {
                name,
                ambient,
                normal,
                theta,
                proj,
            }
        })
        .collect()
}

/// Compare `mu_cocycle_decompose` with `mu` on random `(g, k)` stabilizing
/// theta and random splittings `g = t x`; returns the number of mismatches.
pub fn mu_decomposition_mismatches(c: &Case, trials: usize, seed: u64) -> usize {
    let mut rng = seeded(seed);
    let p = &c.proj;
    let level = num_integer::lcm(c.ambient.exponent(), p.conductor());
    let ks = h_group(level, 2).elements;
    let stab: Vec<(Perm, u64)> = c
        .ambient
        .elements()
        .iter()
        .filter(|g| c.normal.generators().iter().all(|n| c.normal.contains(&n.conj(g))))
        .flat_map(|g| ks.iter().map(move |&k| (g.clone(), k)))
        .filter(|(g, k)| c.theta.conjugate(g).galois(*k as i64).unwrap() == c.theta)
        .collect();
    let g_theta = p.group().elements().to_vec();
    (0..trials)
        .filter(|_| {
            let (g, k) = stab.choose(&mut rng).unwrap();
            let t = g_theta.choose(&mut rng).unwrap();
            let x = t.inverse().mul(g);
            p.mu(g, *k as i64).unwrap() != p.mu_cocycle_decompose(g, t, &x, *k as i64).unwrap()
        })
        .count()
}
