//! Character tables by the Dixon–Schneider method, and class functions.
//!
//! Class sums act on the centre of the group algebra; their common
//! eigenvectors modulo a prime `q = 1 (mod exp G)` give the irreducible
//! characters reduced mod `q`, which are then lifted to exact cyclotomics.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{factorize, gcd, is_prime, mod_inv, mod_pow};
use crate::config;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::group::{GroupRef, PermGroup};
use crate::perm::Perm;

pub struct TableData {
    pub values: Vec<Vec<Cyclo>>,
    pub prime: u64,
}

#[derive(Clone)]
pub struct ClassFunction {
    group: GroupRef,
    values: Vec<Cyclo>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
            && (Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group)
    }
}

impl Eq for ClassFunction {}

impl Hash for ClassFunction {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.values.hash(state)
    }
}

impl fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl ClassFunction {
    pub fn new(group: GroupRef, values: Vec<Cyclo>) -> Result<Self> {
        let r = group.try_classes()?.len();
        if values.len() != r {
            return Err(Error::InvalidInput(format!(
                "class function needs {r} values, got {}",
                values.len()
            )));
        }
        Ok(ClassFunction { group, values })
    }

    pub fn trivial(group: &GroupRef) -> Self {
        let r = group.num_classes();
        ClassFunction {
            group: group.clone(),
            values: vec![Cyclo::one(); r],
        }
    }

    pub fn from_fn(group: &GroupRef, f: impl Fn(&Perm) -> Cyclo) -> Self {
        let values = group.classes().reps.iter().map(f).collect();
        ClassFunction {
            group: group.clone(),
            values,
        }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn values(&self) -> &[Cyclo] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclo {
        &self.values[class]
    }

    /// Value at an element of the group.
    pub fn at(&self, g: &Perm) -> Cyclo {
        let c = self
            .group
            .class_of(g)
            .expect("element lies in the class function's group");
        self.values[c].clone()
    }

    pub fn degree(&self) -> Cyclo {
        self.values[0].clone()
    }

    pub fn degree_int(&self) -> i64 {
        self.values[0].as_integer().expect("degree is an integer")
    }

    pub fn conductor(&self) -> u64 {
        self.values
            .iter()
            .fold(1u64, |a, v| num_integer::lcm(a, v.conductor() as u64))
    }

    fn same_group(&self, other: &ClassFunction) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn inner(&self, other: &ClassFunction) -> Result<Cyclo> {
        self.same_group(other)?;
        let cl = self.group.classes();
        let mut acc = Cyclo::zero();
        for k in 0..cl.len() {
            if self.values[k].is_zero() || other.values[k].is_zero() {
                continue;
            }
            let t = &self.values[k] * &other.values[k].conj();
            acc = acc + t.scale(&BigRational::from_integer(BigInt::from(cl.sizes[k])));
        }
        Ok(acc.scale(&BigRational::new(1.into(), BigInt::from(self.group.order()))))
    }

    /// Inner product as an integer, for characters.
    pub fn multiplicity(&self, other: &ClassFunction) -> Result<i64> {
        self.inner(other)?
            .as_integer()
            .ok_or_else(|| Error::InvalidInput("inner product is not an integer".into()))
    }

    pub fn is_irreducible(&self) -> bool {
        self.inner(self).map(|v| v.is_one()).unwrap_or(false)
            && self.values[0].as_integer().map(|d| d > 0).unwrap_or(false)
    }

    fn zip(&self, other: &ClassFunction, f: impl Fn(&Cyclo, &Cyclo) -> Cyclo) -> Result<Self> {
        self.same_group(other)?;
        Ok(ClassFunction {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &ClassFunction) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ClassFunction) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn map_values(&self, f: impl Fn(&Cyclo) -> Cyclo) -> Self {
        ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn galois(&self, k: i64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .map(|v| v.galois(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassFunction {
            group: self.group.clone(),
            values,
        })
    }

    /// `theta^g(n) = theta(g n g^-1)` for `g` normalizing the group.
    pub fn conjugate(&self, g: &Perm) -> Self {
        let ginv = g.inverse();
        let values = self
            .group
            .classes()
            .reps
            .iter()
            .map(|c| self.at(&g.mul(c).mul(&ginv)))
            .collect();
        ClassFunction {
            group: self.group.clone(),
            values,
        }
    }

    pub fn restrict(&self, sub: &GroupRef) -> Result<Self> {
        if !sub.is_subgroup_of(&self.group) {
            return Err(Error::NotSubgroup);
        }
        Ok(ClassFunction::from_fn(sub, |c| self.at(c)))
    }

    pub fn induce(&self, ambient: &GroupRef) -> Result<Self> {
        if !self.group.is_subgroup_of(ambient) {
            return Err(Error::NotSubgroup);
        }
        let big = ambient.classes();
        let small = self.group.classes();
        let mut sums = vec![Cyclo::zero(); big.len()];
        for (c, rep) in small.reps.iter().enumerate() {
            let k = ambient.class_of(rep).unwrap();
            let w = BigRational::from_integer(BigInt::from(small.sizes[c]));
            sums[k] = &sums[k] + &self.values[c].scale(&w);
        }
        let values = sums
            .into_iter()
            .enumerate()
            .map(|(k, s)| {
                let f = BigRational::new(
                    BigInt::from(ambient.order()),
                    BigInt::from(self.group.order() * big.sizes[k]),
                );
                s.scale(&f)
            })
            .collect();
        Ok(ClassFunction {
            group: ambient.clone(),
            values,
        })
    }

    pub fn kernel(&self) -> PermGroup {
        let d = self.degree();
        let bad: Vec<bool> = self.values.iter().map(|v| *v != d).collect();
        self.group
            .filter_subgroup(|g| !bad[self.group.class_of(g).unwrap()])
    }

    /// Conjugation by every element of `group`, as a class function of `self`'s group.
    pub fn is_invariant_under(&self, g: &Perm) -> bool {
        self.conjugate(g) == *self
    }
}

pub struct CharacterTable {
    group: GroupRef,
    irr: Vec<ClassFunction>,
    prime: u64,
}

impl CharacterTable {
    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irr
    }

    pub fn len(&self) -> usize {
        self.irr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irr.is_empty()
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn index_of(&self, chi: &ClassFunction) -> Option<usize> {
        self.irr.iter().position(|x| x == chi)
    }

    /// Multiplicities of the irreducibles in a character.
    pub fn decompose(&self, chi: &ClassFunction) -> Result<Vec<i64>> {
        self.irr.iter().map(|x| chi.multiplicity(x)).collect()
    }

    pub fn linear(&self) -> Vec<ClassFunction> {
        self.irr
            .iter()
            .filter(|c| c.degree().is_one())
            .cloned()
            .collect()
    }

    /// Check both orthogonality relations exactly.
    pub fn verify_orthogonality(&self) -> bool {
        let cl = self.group.classes();
        let r = self.irr.len();
        if r != cl.len() {
            return false;
        }
        let order = self.group.order() as i64;
        for i in 0..r {
            for j in i..r {
                let ip = self.irr[i].inner(&self.irr[j]).unwrap();
                if ip != Cyclo::from_int((i == j) as i64) {
                    return false;
                }
            }
        }
        for k in 0..r {
            for l in k..r {
                let s: Cyclo = self
                    .irr
                    .iter()
                    .map(|x| x.value(k) * &x.value(l).conj())
                    .sum();
                let want = if k == l {
                    order / cl.sizes[k] as i64
                } else {
                    0
                };
                if s != Cyclo::from_int(want) {
                    return false;
                }
            }
        }
        true
    }
}

pub fn character_table(g: &GroupRef) -> Result<CharacterTable> {
    let data = table_data(g)?;
    let irr = data
        .values
        .iter()
        .map(|v| ClassFunction {
            group: g.clone(),
            values: v.clone(),
        })
        .collect();
    Ok(CharacterTable {
        group: g.clone(),
        irr,
        prime: data.prime,
    })
}

pub fn irreducibles(g: &GroupRef) -> Result<Vec<ClassFunction>> {
    Ok(character_table(g)?.irr)
}

fn table_data(g: &PermGroup) -> Result<Arc<TableData>> {
    if let Some(t) = g.table.get() {
        return Ok(t.clone());
    }
    let limit = config::current().max_table_order;
    let order = g.order();
    if order > limit {
        return Err(Error::limit("character table", order, limit));
    }
    let data = dixon_schneider(g)?;
    let _ = g.table.set(Arc::new(data));
    Ok(g.table.get().unwrap().clone())
}

fn primitive_root(q: u64) -> u64 {
    let ps: Vec<u64> = factorize(q - 1).into_iter().map(|(p, _)| p).collect();
    (2..q)
        .find(|&g| ps.iter().all(|&p| mod_pow(g, (q - 1) / p, q) != 1))
        .unwrap_or(1)
}

/// Row-reduce in place over GF(q); returns pivot columns.
fn rref(rows: &mut Vec<Vec<u64>>, q: u64) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = mod_inv(rows[r][c], q).unwrap();
        for x in rows[r].iter_mut() {
            *x = *x * inv % q;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    rows[i][j] = (rows[i][j] + q - f * rows[r][j] % q) % q;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Right kernel of a square matrix over GF(q), as row vectors.
fn kernel(m: &[Vec<u64>], q: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut rows = m.to_vec();
    let pivots = rref(&mut rows, q);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = (q - rows[i][f]) % q;
            }
            v
        })
        .collect()
}

fn dixon_schneider(g: &PermGroup) -> Result<TableData> {
    let cl = g.try_classes()?;
    let r = cl.len();
    if r == 1 {
        return Ok(TableData {
            values: vec![vec![Cyclo::one()]],
            prime: 2,
        });
    }
    let order = g.order();
    let e = cl.exponent;
    let elts = g.try_elements()?;
    // c[(j * r + i) * r + k] = #{x in C_j : x^-1 g_k in C_i}
    let mut consts = vec![0u64; r * r * r];
    for (xi, x) in elts.list.iter().enumerate() {
        let j = cl.class_of[xi];
        let xinv = x.inverse();
        for k in 0..r {
            let y = xinv.mul(&cl.reps[k]);
            let i = cl.class_of[elts.index[&y]];
            consts[(j * r + i) * r + k] += 1;
        }
    }
    // power classes, pows[k][j] = class of rep_k^j
    let pows: Vec<Vec<usize>> = (0..r)
        .map(|k| {
            let rep = &cl.reps[k];
            let mut out = Vec::with_capacity(cl.orders[k] as usize);
            let mut cur = g.identity();
            for _ in 0..cl.orders[k] {
                out.push(cl.class_of[elts.index[&cur]]);
                cur = cur.mul(rep);
            }
            out
        })
        .collect();

    let mut q = e + 1;
    let mut attempts = 0;
    loop {
        while !(is_prime(q) && q * q > 4 * order) {
            q += e;
        }
        match dixon_mod(g, &consts, &pows, q) {
            Ok(values) => {
                return Ok(TableData { values, prime: q });
            }
            Err(err) => {
                attempts += 1;
                if attempts > 20 {
                    return Err(err);
                }
                q += e;
            }
        }
    }
}

fn dixon_mod(
    g: &PermGroup,
    consts: &[u64],
    pows: &[Vec<usize>],
    q: u64,
) -> Result<Vec<Vec<Cyclo>>> {
    let cl = g.classes();
    let r = cl.len();
    let order = g.order();
    let e = cl.exponent;
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()];
    for j in 1..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = |i: usize, k: usize| consts[(j * r + i) * r + k] % q;
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            let dim = space.len();
            let mut basis = space;
            let pivots = rref(&mut basis, q);
            // images of basis vectors in basis coordinates
            let mut b = vec![vec![0u64; dim]; dim];
            for (s, v) in basis.iter().enumerate() {
                let w: Vec<u64> = (0..r)
                    .map(|i| (0..r).fold(0u64, |acc, k| (acc + m(i, k) * v[k]) % q))
                    .collect();
                for (t, &p) in pivots.iter().enumerate() {
                    b[t][s] = w[p];
                }
            }
            let mut found = 0;
            for lambda in 0..q {
                let shifted: Vec<Vec<u64>> = (0..dim)
                    .map(|t| {
                        (0..dim)
                            .map(|s| {
                                if s == t {
                                    (b[t][s] + q - lambda) % q
                                } else {
                                    b[t][s]
                                }
                            })
                            .collect()
                    })
                    .collect();
                let ker = kernel(&shifted, q);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let sub: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|coords| {
                        (0..r)
                            .map(|i| {
                                coords
                                    .iter()
                                    .zip(&basis)
                                    .fold(0u64, |acc, (c, v)| (acc + c * v[i]) % q)
                            })
                            .collect()
                    })
                    .collect();
                next.push(sub);
                if found == dim {
                    break;
                }
            }
            if found != dim {
                return Err(Error::TableFailed(format!(
                    "class matrix not diagonalizable mod {q}"
                )));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::TableFailed(format!("eigenspaces not split mod {q}")));
    }
    let z = mod_pow(primitive_root(q), (q - 1) / e, q);
    let sqrt_bound = (order as f64).sqrt().floor() as u64 + 1;
    let mut rows = Vec::with_capacity(r);
    for space in spaces {
        let v = &space[0];
        if v[0] == 0 {
            return Err(Error::TableFailed("eigenvector vanishes at identity".into()));
        }
        let inv0 = mod_inv(v[0], q).unwrap();
        let v: Vec<u64> = v.iter().map(|x| x * inv0 % q).collect();
        let mut s = 0u64;
        for k in 0..r {
            let kp = cl.inverse[k];
            let term = v[k] * v[kp] % q * mod_inv(cl.sizes[k] % q, q).unwrap() % q;
            s = (s + term) % q;
        }
        if s == 0 {
            return Err(Error::TableFailed("degree equation degenerate".into()));
        }
        let target = order % q * mod_inv(s, q).unwrap() % q;
        let d = (1..=sqrt_bound)
            .find(|d| d * d % q == target && order.is_multiple_of(*d))
            .ok_or_else(|| Error::TableFailed(format!("no degree found mod {q}")))?;
        let modval: Vec<u64> = (0..r)
            .map(|k| v[k] * (d % q) % q * mod_inv(cl.sizes[k] % q, q).unwrap() % q)
            .collect();
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            let o = cl.orders[k];
            let zo = mod_pow(z, e / o, q);
            let oinv = mod_inv(o % q, q).unwrap();
            let mut terms = Vec::new();
            for l in 0..o {
                let mut acc = 0u64;
                for jj in 0..o {
                    let val = modval[pows[k][jj as usize]];
                    let exp = (o - (jj * l) % o) % o;
                    acc = (acc + val * mod_pow(zo, exp, q)) % q;
                }
                let ml = acc * oinv % q;
                if ml > d {
                    return Err(Error::TableFailed(format!("multiplicity out of range mod {q}")));
                }
                if ml != 0 {
                    terms.push((l as i64, BigRational::from_integer(BigInt::from(ml))));
                }
            }
            row.push(Cyclo::from_terms(o as u32, &terms));
        }
        rows.push(row);
    }
    rows.sort_by(|a, b| {
        let da = a[0].as_integer().unwrap_or(0);
        let db = b[0].as_integer().unwrap_or(0);
        da.cmp(&db).then_with(|| a.cmp(b))
    });
    // exact first orthogonality relation as a sanity check
    let order_q = BigRational::from_integer(BigInt::from(order));
    for a in 0..r {
        for b in a..r {
            let mut acc = Cyclo::zero();
            for k in 0..r {
                let t = &rows[a][k] * &rows[b][cl.inverse[k]];
                acc = acc + t.scale(&BigRational::from_integer(BigInt::from(cl.sizes[k])));
            }
            let want = if a == b { order_q.clone() } else { BigRational::zero() };
            if acc != Cyclo::from_rational(want) {
                return Err(Error::TableFailed(format!("orthogonality failed mod {q}")));
            }
        }
    }
    if gcd(q, order) != 1 {
        return Err(Error::TableFailed("prime divides group order".into()));
    }
    Ok(rows)
}
