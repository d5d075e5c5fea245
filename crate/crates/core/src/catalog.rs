//! Built-in catalog of small permutation groups.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{DirectProduct, GroupRef, PermGroup, Wreath};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recipe {
    Cyclic(usize),
    /// Dihedral group of order `2n` on `n` points.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    /// `SL(2, q)` on the nonzero vectors of `F_q^2`.
    SL2(usize),
    /// `PSL(2, q)` on the projective line.
    PSL2(usize),
    GL23,
    Q8,
    Direct(Box<Recipe>, Box<Recipe>),
    Wreath(Box<Recipe>, usize),
    /// Generators in cycle notation.
    Gens {
        degree: usize,
        generators: Vec<Vec<Vec<usize>>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub order: u64,
    pub recipe: Recipe,
}

impl CatalogEntry {
    pub fn materialize(&self) -> Result<GroupRef> {
        let g = materialize(&self.recipe)?;
        if g.order() != self.order {
            return Err(Error::InvalidInput(format!(
                "catalog entry {} has order {}, declared {}",
                self.name,
                g.order(),
                self.order
            )));
        }
        Ok(g)
    }
}

fn cycle_gen(degree: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
    Perm::from_cycles(degree, cycles)
}

pub fn materialize(recipe: &Recipe) -> Result<GroupRef> {
    let g = match recipe {
        Recipe::Cyclic(n) => {
            let n = *n;
            if n == 0 {
                return Err(Error::InvalidInput("cyclic group of order 0".into()));
            }
            if n == 1 {
                PermGroup::trivial(1)
            } else {
                PermGroup::new(n, vec![cycle_gen(n, &[(0..n).collect()])?])?
            }
        }
        Recipe::Dihedral(n) => {
            let n = *n;
            if n < 3 {
                return Err(Error::InvalidInput("dihedral recipe needs n >= 3".into()));
            }
            let rot = cycle_gen(n, &[(0..n).collect()])?;
            let refl = Perm::from_images((0..n).map(|i| (n - i) % n).collect())?;
            PermGroup::new(n, vec![rot, refl])?
        }
        Recipe::Symmetric(n) => {
            let n = *n;
            if n < 2 {
                PermGroup::trivial(n.max(1))
            } else {
                let mut gens = vec![cycle_gen(n, &[vec![0, 1]])?];
                if n > 2 {
                    gens.push(cycle_gen(n, &[(0..n).collect()])?);
                }
                PermGroup::new(n, gens)?
            }
        }
        Recipe::Alternating(n) => {
            let n = *n;
            if n < 3 {
                PermGroup::trivial(n.max(1))
            } else {
                let gens = (2..n)
                    .map(|k| cycle_gen(n, &[vec![0, 1, k]]))
                    .collect::<Result<Vec<_>>>()?;
                PermGroup::new(n, gens)?
            }
        }
        Recipe::SL2(q) => linear_group(&Field::new(*q)?, false)?,
        Recipe::PSL2(q) => projective_group(&Field::new(*q)?)?,
        Recipe::GL23 => linear_group(&Field::new(3)?, true)?,
        Recipe::Q8 => PermGroup::new(
            8,
            vec![
                cycle_gen(8, &[vec![0, 1, 2, 3], vec![4, 5, 6, 7]])?,
                cycle_gen(8, &[vec![0, 4, 2, 6], vec![1, 7, 3, 5]])?,
            ],
        )?,
        Recipe::Direct(a, b) => {
            let (a, b) = (materialize(a)?, materialize(b)?);
            return Ok(DirectProduct::new(&a, &b).group);
        }
        Recipe::Wreath(a, m) => {
            if *m == 0 {
                return Err(Error::InvalidInput("wreath recipe needs m >= 1".into()));
            }
            let a = materialize(a)?;
            return Ok(Wreath::new(&a, *m).group);
        }
        Recipe::Gens { degree, generators } => {
            let gens = generators
                .iter()
                .map(|c| cycle_gen(*degree, c))
                .collect::<Result<Vec<_>>>()?;
            PermGroup::new(*degree, gens)?
        }
    };
    Ok(Arc::new(g))
}

/// Arithmetic in `F_q` for `q` in {2, 3, 4, 5, 7}, elements encoded as `0..q`.
struct Field {
    q: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
}

impl Field {
    fn new(q: usize) -> Result<Field> {
        let (add, mul) = match q {
            2 | 3 | 5 | 7 => {
                let t = |f: fn(usize, usize) -> usize| {
                    (0..q).map(|a| (0..q).map(|b| f(a, b) % q).collect()).collect()
                };
                (t(|a, b| a + b), t(|a, b| a * b))
            }
            4 => {
                // 2 = w, 3 = w + 1 = w^2
                let log = [0, 0, 1, 2];
                let exp = [1, 2, 3];
                let add = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
                let mul = (0..4)
                    .map(|a| {
                        (0..4)
                            .map(|b| {
                                if a == 0 || b == 0 {
                                    0
                                } else {
                                    exp[(log[a] + log[b]) % 3]
                                }
                            })
                            .collect()
                    })
                    .collect();
                (add, mul)
            }
            _ => {
                return Err(Error::InvalidInput(format!(
                    "finite field of order {q} is not supported"
                )))
            }
        };
        Ok(Field { q, add, mul })
    }

    fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add[a][b] == 0).unwrap()
    }

    fn inv(&self, a: usize) -> usize {
        (1..self.q).find(|&b| self.mul[a][b] == 1).unwrap()
    }

    fn times(&self, v: [usize; 2], m: &[[usize; 2]; 2]) -> [usize; 2] {
        let f = |j: usize| self.add[self.mul[v[0]][m[0][j]]][self.mul[v[1]][m[1][j]]];
        [f(0), f(1)]
    }

    fn generators(&self, with_det: bool) -> Vec<[[usize; 2]; 2]> {
        let mut gens = Vec::new();
        for a in 1..self.q {
            gens.push([[1, a], [0, 1]]);
            gens.push([[1, 0], [a, 1]]);
        }
        if with_det {
            gens.push([[self.neg(1), 0], [0, 1]]);
        }
        gens
    }
}

fn linear_group(f: &Field, with_det: bool) -> Result<PermGroup> {
    let q = f.q;
    let index = |v: [usize; 2]| v[0] * q + v[1] - 1;
    let points: Vec<[usize; 2]> = (1..q * q).map(|i| [i / q, i % q]).collect();
    let gens = f
        .generators(with_det)
        .iter()
        .map(|m| Perm::from_images(points.iter().map(|&v| index(f.times(v, m))).collect()))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(q * q - 1, gens)
}

fn projective_group(f: &Field) -> Result<PermGroup> {
    let q = f.q;
    let index = |v: [usize; 2]| {
        if v[0] == 0 {
            q
        } else {
            f.mul[f.inv(v[0])][v[1]]
        }
    };
    let points: Vec<[usize; 2]> = (0..q).map(|x| [1, x]).chain([[0, 1]]).collect();
    let gens = f
        .generators(false)
        .iter()
        .map(|m| Perm::from_images(points.iter().map(|&v| index(f.times(v, m))).collect()))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(q + 1, gens)
}

fn b(r: Recipe) -> Box<Recipe> {
    Box::new(r)
}

fn gens(degree: usize, generators: &[&[&[usize]]]) -> Recipe {
    Recipe::Gens {
        degree,
        generators: generators
            .iter()
            .map(|g| g.iter().map(|c| c.to_vec()).collect())
            .collect(),
    }
}

pub fn entries() -> Vec<CatalogEntry> {
    use Recipe::*;
    let e = |name, order, recipe| CatalogEntry {
        name,
        order,
        recipe,
    };
    let cyclic_names = ["C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9"];
    let dihedral_names = ["D8", "D10", "D12", "D14", "D16", "D18", "D20"];
    let mut out: Vec<CatalogEntry> = cyclic_names
        .iter()
        .enumerate()
        .map(|(i, &name)| e(name, i as u64 + 2, Cyclic(i + 2)))
        .collect();
    out.extend([
        e("V4", 4, Direct(b(Cyclic(2)), b(Cyclic(2)))),
        e("C2^3", 8, Direct(b(Direct(b(Cyclic(2)), b(Cyclic(2)))), b(Cyclic(2)))),
        e("C3xC3", 9, Direct(b(Cyclic(3)), b(Cyclic(3)))),
        e("C4xC4", 16, Direct(b(Cyclic(4)), b(Cyclic(4)))),
        e("S3", 6, Symmetric(3)),
    ]);
    out.extend(
        dihedral_names
            .iter()
            .enumerate()
            .map(|(i, &name)| e(name, 2 * (i as u64 + 4), Dihedral(i + 4))),
    );
    out.extend([
        e("Dic12", 12, gens(7, &[&[&[0, 1, 2]], &[&[1, 2], &[3, 4, 5, 6]]])),
        e("Q8", 8, Q8),
        e("A4", 12, Alternating(4)),
        e("Q8xC2", 16, Direct(b(Q8), b(Cyclic(2)))),
        e("C3xS3", 18, Direct(b(Cyclic(3)), b(Symmetric(3)))),
        e("C3wrC2", 18, Wreath(b(Cyclic(3)), 2)),
        e("F20", 20, gens(5, &[&[&[0, 1, 2, 3, 4]], &[&[1, 2, 4, 3]]])),
        e("F21", 21, gens(7, &[&[&[0, 1, 2, 3, 4, 5, 6]], &[&[1, 2, 4], &[3, 6, 5]]])),
        e("S4", 24, Symmetric(4)),
        e("SL(2,3)", 24, SL2(3)),
        e("C2xA4", 24, Direct(b(Cyclic(2)), b(Alternating(4)))),
        e("Q8xC3", 24, Direct(b(Q8), b(Cyclic(3)))),
        e("S3xS3", 36, Direct(b(Symmetric(3)), b(Symmetric(3)))),
        e("GL(2,3)", 48, GL23),
        e("C2xS4", 48, Direct(b(Cyclic(2)), b(Symmetric(4)))),
        e("S3wrS2", 72, Wreath(b(Symmetric(3)), 2)),
        e("A5", 60, Alternating(5)),
        e("SL(2,4)", 60, SL2(4)),
        e("S5", 120, Symmetric(5)),
        e("SL(2,5)", 120, SL2(5)),
        e("PSL(2,7)", 168, PSL2(7)),
        e("SL(2,7)", 336, SL2(7)),
        e("A6", 360, Alternating(6)),
    ]);
    out
}

/// Looks up an entry by name, ignoring ASCII case.
pub fn lookup(name: &str) -> Option<CatalogEntry> {
    let all = entries();
    if let Some(e) = all.iter().find(|e| e.name == name) {
        return Some(e.clone());
    }
    all.into_iter().find(|e| e.name.eq_ignore_ascii_case(name))
}
