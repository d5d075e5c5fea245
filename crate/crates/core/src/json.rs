//! JSON file formats: groups, character tables, witnesses, inductive
//! witnesses and pipelines. Reports are serialized directly.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::factorize;
use crate::chartab::{character_table, irreducibles, ClassFunction};
use crate::constructions::{
    butterfly_witness, central_dot_witness, conjugate_witness, direct_product_witness,
    galois_twist_witness, quotient_witness, reflexive_witness, restrict_witness, transport_witness,
    wreath_diag_witness, wreath_general_witness, Iso,
};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::group::{GroupRef, PermGroup};
use crate::hgal::HTriple;
use crate::horder::{check_geq_c, OrderWitness};
use crate::mat::Mat;
use crate::mckay::InductiveWitness;
use crate::perm::Perm;
use crate::projrep::{MatRep, ProjRep};

pub const SCHEMA: u32 = 1;

fn bad(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("malformed JSON: {e}"))
}

pub fn to_string<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(bad)
}

pub fn from_str<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(bad)
}

/// A permutation in cycle notation.
pub type Cycles = Vec<Vec<usize>>;

pub fn perm_to_cycles(p: &Perm) -> Cycles {
    p.cycles().into_iter().filter(|c| c.len() > 1).collect()
}

pub fn perm_from_cycles(degree: usize, c: &Cycles) -> Result<Perm> {
    Perm::from_cycles(degree, c)
}

/// `{"degree": n, "generators": [[cycle, ...], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub degree: usize,
    pub generators: Vec<Cycles>,
}

impl GroupJson {
    pub fn from_group(g: &PermGroup) -> GroupJson {
        GroupJson {
            degree: g.degree(),
            generators: g.generators().iter().map(perm_to_cycles).collect(),
        }
    }

    pub fn to_group(&self) -> Result<GroupRef> {
        if self.degree == 0 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        let gens = self
            .generators
            .iter()
            .map(|c| perm_from_cycles(self.degree, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(PermGroup::new(self.degree, gens)?.into_ref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub representative: Cycles,
    pub size: u64,
    pub element_order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerMapJson {
    pub prime: u64,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub schema: u32,
    pub group: GroupJson,
    pub order: u64,
    pub classes: Vec<ClassJson>,
    pub power_maps: Vec<PowerMapJson>,
    /// One row per irreducible character, indexed by class.
    pub characters: Vec<Vec<Cyclo>>,
}

impl TableJson {
    pub fn from_group(g: &GroupRef) -> Result<TableJson> {
        let table = character_table(g)?;
        let classes = g.try_classes()?;
        let primes: Vec<u64> = factorize(g.order()).into_iter().map(|(p, _)| p).collect();
        Ok(TableJson {
            schema: SCHEMA,
            group: GroupJson::from_group(g),
            order: g.order(),
            classes: (0..classes.len())
                .map(|c| ClassJson {
                    representative: perm_to_cycles(&classes.reps[c]),
                    size: classes.sizes[c],
                    element_order: classes.orders[c],
                })
                .collect(),
            power_maps: primes
                .into_iter()
                .map(|p| PowerMapJson {
                    prime: p,
                    map: (0..classes.len()).map(|c| g.class_power(c, p as i64)).collect(),
                })
                .collect(),
            characters: table.irreducibles().iter().map(|c| c.values().to_vec()).collect(),
        })
    }
}

/// `(G, N, theta)` with `theta` given by its values on the classes of `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleJson {
    pub group: GroupJson,
    pub normal: GroupJson,
    pub theta: Vec<Cyclo>,
    pub p: u64,
}

impl TripleJson {
    fn from_triple(t: &HTriple) -> TripleJson {
        TripleJson {
            group: GroupJson::from_group(&t.group),
            normal: GroupJson::from_group(&t.normal),
            theta: t.theta.values().to_vec(),
            p: t.p,
        }
    }

    fn to_triple(&self) -> Result<HTriple> {
        let g = self.group.to_group()?;
        let n = self.normal.to_group()?;
        if n.degree() != g.degree() {
            return Err(Error::DegreeMismatch {
                expected: g.degree(),
                found: n.degree(),
            });
        }
        let theta = ClassFunction::new(n.clone(), self.theta.clone())?;
        HTriple::new(g, n, theta, self.p)
    }
}

/// A projective representation: `D` on the generators of the normal
/// subgroup and `P` on the lex-least transversal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjJson {
    pub dim: usize,
    pub d_generators: Vec<Mat>,
    pub transversal: Vec<Mat>,
}

impl ProjJson {
    fn from_proj(p: &ProjRep, normal: &PermGroup) -> ProjJson {
        ProjJson {
            dim: p.dim(),
            d_generators: normal.generators().iter().map(|g| p.rep().mat(g).clone()).collect(),
            transversal: p.transversal_mats().to_vec(),
        }
    }

    fn to_proj(&self, group: GroupRef, normal: &GroupRef) -> Result<Arc<ProjRep>> {
        let d = MatRep::from_generators(normal, self.dim, self.d_generators.clone())?;
        Ok(Arc::new(ProjRep::new(group, Arc::new(d), self.transversal.clone())?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub schema: u32,
    pub upper: TripleJson,
    pub lower: TripleJson,
    pub proj: ProjJson,
    pub proj_low: ProjJson,
}

impl WitnessJson {
    pub fn from_witness(w: &OrderWitness) -> WitnessJson {
        WitnessJson {
            schema: SCHEMA,
            upper: TripleJson::from_triple(&w.upper),
            lower: TripleJson::from_triple(&w.lower),
            proj: ProjJson::from_proj(&w.proj, &w.upper.normal),
            proj_low: ProjJson::from_proj(&w.proj_low, &w.lower.normal),
        }
    }

    /// Rebuild the witness and verify it from scratch.
    pub fn recheck(&self) -> Result<OrderWitness> {
        let upper = self.upper.to_triple()?;
        let lower = self.lower.to_triple()?;
        let gt = upper.inertia().into_ref();
        let ht = gt.intersection(&lower.group).into_ref();
        let p = self.proj.to_proj(gt, &upper.normal)?;
        let pl = self.proj_low.to_proj(ht, &lower.normal)?;
        check_geq_c(&upper, &lower, &p, &pl).map_err(|f| match f {
            crate::horder::Failure::Input(e) => e,
            f => Error::Check(f.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductiveJson {
    pub schema: u32,
    pub p: u64,
    pub x: GroupJson,
    /// Permutations of the points of `X`.
    pub gamma: Vec<Cycles>,
    pub n: GroupJson,
    /// Pairs of indices into the character tables of `X` and `N`.
    pub omega: Vec<(usize, usize)>,
    /// Construct the canonical projective representations for clause (c).
    #[serde(default)]
    pub construct: bool,
}

impl InductiveJson {
    pub fn to_witness(&self) -> Result<InductiveWitness> {
        let x = self.x.to_group()?;
        let n = self.n.to_group()?;
        let gamma = self
            .gamma
            .iter()
            .map(|c| perm_from_cycles(x.degree(), c))
            .collect::<Result<Vec<_>>>()?;
        let (irr_x, irr_n) = (irreducibles(&x)?, irreducibles(&n)?);
        let pick = |irr: &[ClassFunction], i: usize| {
            irr.get(i)
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("character index {i} out of range")))
        };
        let omega = self
            .omega
            .iter()
            .map(|&(i, j)| Ok((pick(&irr_x, i)?, pick(&irr_n, j)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(InductiveWitness {
            x,
            p: self.p,
            gamma,
            n,
            omega,
            pairs: Vec::new(),
            construct_missing: self.construct,
        })
    }
}

/// Starting point of a pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseJson {
    Witness(WitnessJson),
    /// `(G, N, theta) >=_c (G, N, theta)`, `theta` an index into the table of `N`.
    Reflexive {
        group: GroupJson,
        normal: GroupJson,
        theta: usize,
        p: u64,
    },
}

impl BaseJson {
    fn build(&self) -> Result<OrderWitness> {
        match self {
            BaseJson::Witness(w) => w.recheck(),
            BaseJson::Reflexive {
                group,
                normal,
                theta,
                p,
            } => {
                let g = group.to_group()?;
                let n = normal.to_group()?;
                let theta = irreducibles(&n)?
                    .get(*theta)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("character index {theta} out of range")))?;
                reflexive_witness(&HTriple::new(g, n, theta, *p)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum StepJson {
    Restrict { j: GroupJson },
    Transport { dst: GroupJson, images: Vec<Cycles> },
    Conjugate { h: Cycles },
    GaloisTwist { k: u64 },
    Quotient { l: GroupJson },
    DirectProduct { other: BaseJson },
    WreathDiag { m: usize },
    WreathGeneral { m: usize, sigmas: Vec<u64> },
    /// `lambda` indexes the character table of `Z`.
    CentralDot { z: GroupJson, lambda: usize },
    Butterfly { g_hat: GroupJson, h_hat: GroupJson },
}

impl StepJson {
    pub fn name(&self) -> &'static str {
        match self {
            StepJson::Restrict { .. } => "restrict",
            StepJson::Transport { .. } => "transport",
            StepJson::Conjugate { .. } => "conjugate",
            StepJson::GaloisTwist { .. } => "galois_twist",
            StepJson::Quotient { .. } => "quotient",
            StepJson::DirectProduct { .. } => "direct_product",
            StepJson::WreathDiag { .. } => "wreath_diag",
            StepJson::WreathGeneral { .. } => "wreath_general",
            StepJson::CentralDot { .. } => "central_dot",
            StepJson::Butterfly { .. } => "butterfly",
        }
    }

    pub fn apply(&self, w: &OrderWitness) -> Result<OrderWitness> {
        let deg = w.upper.group.degree();
        match self {
            StepJson::Restrict { j } => restrict_witness(w, &j.to_group()?),
            StepJson::Transport { dst, images } => {
                let dst = dst.to_group()?;
                let images = images
                    .iter()
                    .map(|c| perm_from_cycles(dst.degree(), c))
                    .collect::<Result<Vec<_>>>()?;
                transport_witness(w, &Iso::new(w.upper.group.clone(), dst, images)?)
            }
            StepJson::Conjugate { h } => conjugate_witness(w, &perm_from_cycles(deg, h)?),
            StepJson::GaloisTwist { k } => galois_twist_witness(w, *k),
            StepJson::Quotient { l } => quotient_witness(w, &l.to_group()?),
            StepJson::DirectProduct { other } => direct_product_witness(w, &other.build()?),
            StepJson::WreathDiag { m } => wreath_diag_witness(w, *m),
            StepJson::WreathGeneral { m, sigmas } => wreath_general_witness(w, *m, sigmas),
            StepJson::CentralDot { z, lambda } => {
                let z = z.to_group()?;
                let lam = irreducibles(&z)?
                    .get(*lambda)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("character index {lambda} out of range")))?;
                central_dot_witness(w, &z, &lam)
            }
            StepJson::Butterfly { g_hat, h_hat } => {
                butterfly_witness(w, &g_hat.to_group()?, &h_hat.to_group()?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineJson {
    pub schema: u32,
    pub base: BaseJson,
    pub steps: Vec<StepJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepLog {
    pub step: String,
    pub upper_order: u64,
    pub lower_order: u64,
    pub theta_degree: i64,
}

impl PipelineJson {
    /// Apply every step in order; each intermediate witness is verified by
    /// the transformation that produced it.
    pub fn run(&self) -> Result<(OrderWitness, Vec<StepLog>)> {
        let log = |name: &str, w: &OrderWitness| StepLog {
            step: name.to_string(),
            upper_order: w.upper.group.order(),
            lower_order: w.lower.group.order(),
            theta_degree: w.upper.theta.degree_int(),
        };
        let mut w = self.base.build()?;
        let mut logs = vec![log("base", &w)];
        for (i, s) in self.steps.iter().enumerate() {
            w = s
                .apply(&w)
                .map_err(|e| Error::InvalidInput(format!("step {} ({}): {e}", i + 1, s.name())))?;
            logs.push(log(s.name(), &w));
        }
        Ok((w, logs))
    }
}
