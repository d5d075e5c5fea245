//! Permutation groups with a deterministic Schreier–Sims stabilizer chain.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, OnceLock};

use crate::chartab::TableData;
use crate::config;
use crate::error::{Error, Result};
use crate::perm::Perm;

pub type GroupRef = Arc<PermGroup>;

struct Level {
    base: usize,
    orbit: Vec<usize>,
    // transversal[b] = (u, u^-1) with base^u = b
    transversal: Vec<Option<(Perm, Perm)>>,
}

pub struct StabChain {
    degree: usize,
    bases: Vec<usize>,
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabChain {
    fn build(degree: usize, gens: &[Perm]) -> StabChain {
        let mut chain = StabChain {
            degree,
            bases: Vec::new(),
            strong: Vec::new(),
            levels: Vec::new(),
        };
        for g in gens {
            if g.is_identity() || chain.strong.contains(g) {
                continue;
            }
            if chain.bases.iter().all(|&b| g.image(b) == b) {
                chain.bases.push(g.first_moved().unwrap());
            }
            chain.strong.push(g.clone());
        }
        chain.recompute();
        'outer: loop {
            for j in (0..chain.levels.len()).rev() {
                let gens_j = chain.level_gens(j);
                let level = &chain.levels[j];
                for &beta in &level.orbit {
                    let (u, _) = level.transversal[beta].as_ref().unwrap();
                    for s in &gens_j {
                        let img = s.image(beta);
                        let (_, vinv) = level.transversal[img].as_ref().unwrap();
                        let sg = u.mul(s).mul(vinv);
                        let (h, k) = chain.sift(&sg, j + 1);
                        if !h.is_identity() {
                            if k == chain.bases.len() {
                                chain.bases.push(h.first_moved().unwrap());
                            }
                            chain.strong.push(h);
                            chain.recompute();
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }
        chain
    }

    fn level_gens(&self, j: usize) -> Vec<Perm> {
        let fixed = &self.bases[..j];
        self.strong
            .iter()
            .filter(|s| fixed.iter().all(|&b| s.image(b) == b))
            .cloned()
            .collect()
    }

    fn recompute(&mut self) {
        let mut levels = Vec::with_capacity(self.bases.len());
        for j in 0..self.bases.len() {
            let gens = self.level_gens(j);
            let base = self.bases[j];
            let mut transversal: Vec<Option<(Perm, Perm)>> = vec![None; self.degree];
            let id = Perm::identity(self.degree);
            transversal[base] = Some((id.clone(), id));
            let mut orbit = vec![base];
            let mut i = 0;
            while i < orbit.len() {
                let b = orbit[i];
                i += 1;
                for s in &gens {
                    let c = s.image(b);
                    if transversal[c].is_none() {
                        let u = transversal[b].as_ref().unwrap().0.mul(s);
                        let uinv = u.inverse();
                        transversal[c] = Some((u, uinv));
                        orbit.push(c);
                    }
                }
            }
            levels.push(Level {
                base,
                orbit,
                transversal,
            });
        }
        self.levels = levels;
    }

    fn sift(&self, g: &Perm, start: usize) -> (Perm, usize) {
        let mut g = g.clone();
        for j in start..self.levels.len() {
            let level = &self.levels[j];
            let b = g.image(level.base);
            match &level.transversal[b] {
                None => return (g, j),
                Some((_, uinv)) => g = g.mul(uinv),
            }
        }
        let k = self.levels.len();
        (g, k)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift(g, 0).0.is_identity()
    }

    pub fn order(&self) -> u64 {
        self.levels.iter().map(|l| l.orbit.len() as u64).product()
    }

    pub fn base(&self) -> &[usize] {
        &self.bases
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong
    }
}

pub struct Elements {
    pub list: Vec<Perm>,
    pub index: HashMap<Perm, usize>,
}

pub struct Classes {
    pub reps: Vec<Perm>,
    pub sizes: Vec<u64>,
    pub orders: Vec<u64>,
    /// Class of each element, indexed like the sorted element list.
    pub class_of: Vec<usize>,
    pub inverse: Vec<usize>,
    pub exponent: u64,
}

impl Classes {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    chain: OnceLock<Arc<StabChain>>,
    elements: OnceLock<Arc<Elements>>,
    classes: OnceLock<Arc<Classes>>,
    pub(crate) table: OnceLock<Arc<TableData>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup {
            degree: self.degree,
            gens: self.gens.clone(),
            chain: self.chain.clone(),
            elements: self.elements.clone(),
            classes: self.classes.clone(),
            table: self.table.clone(),
        }
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group<{}>(", self.degree)?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && self.gens.iter().all(|g| other.contains(g))
            && other.gens.iter().all(|g| self.contains(g))
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let gens: Vec<Perm> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermGroup {
            degree,
            gens,
            chain: OnceLock::new(),
            elements: OnceLock::new(),
            classes: OnceLock::new(),
            table: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, vec![]).unwrap()
    }

    pub fn into_ref(self) -> GroupRef {
        Arc::new(self)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| Arc::new(StabChain::build(self.degree, &self.gens)))
    }

    pub fn order(&self) -> u64 {
        self.chain().order()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.chain().contains(g)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.contains(g))
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn try_elements(&self) -> Result<&Elements> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let order = self.order();
        let limit = config::current().max_enum_order;
        if order > limit {
            return Err(Error::limit("element enumeration", order, limit));
        }
        let chain = self.chain();
        let mut list = vec![self.identity()];
        for level in chain.levels.iter().rev() {
            let mut next = Vec::with_capacity(list.len() * level.orbit.len());
            for x in &list {
                for &b in &level.orbit {
                    next.push(x.mul(&level.transversal[b].as_ref().unwrap().0));
                }
            }
            list = next;
        }
        list.sort();
        let index = list
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        let _ = self.elements.set(Arc::new(Elements { list, index }));
        Ok(self.elements.get().unwrap())
    }

    /// Sorted element list. Panics if the group exceeds the enumeration cap.
    pub fn elements(&self) -> &[Perm] {
        &self.try_elements().expect("group too large to enumerate").list
    }

    pub fn element_index(&self, g: &Perm) -> Option<usize> {
        self.try_elements().ok()?.index.get(g).copied()
    }

    pub fn try_classes(&self) -> Result<&Classes> {
        if let Some(c) = self.classes.get() {
            return Ok(c);
        }
        let elts = self.try_elements()?;
        let n = elts.list.len();
        let mut raw_class = vec![usize::MAX; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if raw_class[start] != usize::MAX {
                continue;
            }
            let c = members.len();
            raw_class[start] = c;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let x = &elts.list[orbit[i]];
                i += 1;
                for g in &self.gens {
                    let y = x.conj(g);
                    let j = elts.index[&y];
                    if raw_class[j] == usize::MAX {
                        raw_class[j] = c;
                        orbit.push(j);
                    }
                }
            }
            members.push(orbit);
        }
        let mut order_keys: Vec<(u64, usize)> = members
            .iter()
            .enumerate()
            .map(|(c, m)| (elts.list[m[0]].order(), c))
            .collect();
        // within a class the first member found is the lex-least element
        order_keys.sort_by(|a, b| a.0.cmp(&b.0).then(members[a.1][0].cmp(&members[b.1][0])));
        let mut renumber = vec![0; members.len()];
        for (new, &(_, old)) in order_keys.iter().enumerate() {
            renumber[old] = new;
        }
        let class_of: Vec<usize> = raw_class.iter().map(|&c| renumber[c]).collect();
        let mut reps = Vec::with_capacity(members.len());
        let mut sizes = Vec::with_capacity(members.len());
        let mut orders = Vec::with_capacity(members.len());
        for &(o, old) in &order_keys {
            reps.push(elts.list[members[old][0]].clone());
            sizes.push(members[old].len() as u64);
            orders.push(o);
        }
        let inverse = reps
            .iter()
            .map(|r| class_of[elts.index[&r.inverse()]])
            .collect();
        let exponent = orders.iter().fold(1u64, |a, &o| num_integer::lcm(a, o));
        let _ = self.classes.set(Arc::new(Classes {
            reps,
            sizes,
            orders,
            class_of,
            inverse,
            exponent,
        }));
        Ok(self.classes.get().unwrap())
    }

    pub fn classes(&self) -> &Classes {
        self.try_classes().expect("group too large to enumerate")
    }

    pub fn class_of(&self, g: &Perm) -> Option<usize> {
        let idx = self.element_index(g)?;
        Some(self.classes().class_of[idx])
    }

    pub fn num_classes(&self) -> usize {
        self.classes().len()
    }

    pub fn exponent(&self) -> u64 {
        self.classes().exponent
    }

    /// Class of `rep_c ^ e`.
    pub fn class_power(&self, c: usize, e: i64) -> usize {
        let cl = self.classes();
        self.class_of(&cl.reps[c].pow(e)).unwrap()
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .all(|a| self.gens.iter().all(|b| a.mul(b) == b.mul(a)))
    }

    /// Subgroup generated by the given elements.
    pub fn subgroup(&self, gens: Vec<Perm>) -> Result<PermGroup> {
        for g in &gens {
            if !self.contains(g) {
                return Err(Error::NotSubgroup);
            }
        }
        PermGroup::new(self.degree, gens)
    }

    /// The subgroup consisting of elements satisfying `pred`; the caller
    /// guarantees that these form a subgroup.
    pub fn filter_subgroup(&self, pred: impl Fn(&Perm) -> bool) -> PermGroup {
        let members: Vec<Perm> = self.elements().iter().filter(|g| pred(g)).cloned().collect();
        group_from_elements(self.degree, &members)
    }

    pub fn is_normal_in(&self, ambient: &PermGroup) -> bool {
        self.is_subgroup_of(ambient)
            && ambient
                .gens
                .iter()
                .all(|g| self.gens.iter().all(|u| self.contains(&u.conj(g))))
    }

    pub fn normalizer_of(&self, u: &PermGroup) -> PermGroup {
        self.filter_subgroup(|g| u.gens.iter().all(|x| u.contains(&x.conj(g))))
    }

    pub fn centralizer_of(&self, u: &PermGroup) -> PermGroup {
        self.filter_subgroup(|g| u.gens.iter().all(|x| x.mul(g) == g.mul(x)))
    }

    pub fn centralizer_of_element(&self, x: &Perm) -> PermGroup {
        self.filter_subgroup(|g| x.mul(g) == g.mul(x))
    }

    pub fn center(&self) -> PermGroup {
        self.centralizer_of(self)
    }

    pub fn intersection(&self, other: &PermGroup) -> PermGroup {
        self.filter_subgroup(|g| other.contains(g))
    }

    /// Smallest normal subgroup of `self` containing `gens`.
    pub fn normal_closure(&self, gens: &[Perm]) -> PermGroup {
        let mut cur: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut group = PermGroup::new(self.degree, cur.clone()).unwrap();
        let mut i = 0;
        while i < cur.len() {
            let x = cur[i].clone();
            i += 1;
            for g in &self.gens {
                let y = x.conj(g);
                if !group.contains(&y) {
                    cur.push(y);
                    group = PermGroup::new(self.degree, cur.clone()).unwrap();
                }
            }
        }
        group
    }

    pub fn derived_subgroup(&self) -> PermGroup {
        let mut comms = Vec::new();
        for a in &self.gens {
            for b in &self.gens {
                let c = a.inverse().mul(&b.inverse()).mul(a).mul(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    /// Lexicographically least representatives of the right cosets `U x`,
    /// together with the coset number of every element of `self`.
    pub fn right_cosets(&self, u: &PermGroup) -> (Vec<Perm>, Vec<usize>) {
        let elts = self.try_elements().expect("group too large to enumerate");
        let sub = u.elements();
        let mut assign = vec![usize::MAX; elts.list.len()];
        let mut reps = Vec::new();
        for (i, x) in elts.list.iter().enumerate() {
            if assign[i] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x.clone());
            for y in sub {
                assign[elts.index[&y.mul(x)]] = c;
            }
        }
        (reps, assign)
    }

    pub fn right_transversal(&self, u: &PermGroup) -> Vec<Perm> {
        self.right_cosets(u).0
    }

    pub fn index_of(&self, u: &PermGroup) -> u64 {
        self.order() / u.order()
    }

    /// A Sylow `p`-subgroup, built by ascending through `p`-subgroups.
    pub fn sylow(&self, p: u64) -> PermGroup {
        let mut target = 1u64;
        let mut n = self.order();
        while n.is_multiple_of(p) {
            n /= p;
            target *= p;
        }
        let mut pgroup = PermGroup::trivial(self.degree);
        while pgroup.order() < target {
            let norm = self.normalizer_of(&pgroup);
            let x = norm
                .elements()
                .iter()
                .find(|x| !pgroup.contains(x) && pgroup.contains(&x.pow(p as i64)))
                .expect("Cauchy element exists in the normalizer quotient")
                .clone();
            let mut gens = pgroup.gens.clone();
            gens.push(x);
            pgroup = PermGroup::new(self.degree, gens).unwrap();
        }
        pgroup
    }

    /// Action of `self` on the right cosets of a normal subgroup `l`.
    pub fn quotient(&self, l: &PermGroup) -> Result<Quotient> {
        if !l.is_normal_in(self) {
            return Err(Error::NotNormal);
        }
        let (reps, assign) = self.right_cosets(l);
        let m = reps.len();
        let index = &self.try_elements()?.index;
        let act = |g: &Perm| -> Perm {
            let imgs = reps.iter().map(|r| assign[index[&r.mul(g)]]).collect();
            Perm::from_images(imgs).unwrap()
        };
        let gens = self.gens.iter().map(act).collect();
        let image = PermGroup::new(m, gens)?.into_ref();
        Ok(Quotient {
            image,
            reps,
            assign,
        })
    }
}

pub struct Quotient {
    pub image: GroupRef,
    pub reps: Vec<Perm>,
    assign: Vec<usize>,
}

impl Quotient {
    pub fn coset_of(&self, ambient: &PermGroup, g: &Perm) -> usize {
        self.assign[ambient.element_index(g).unwrap()]
    }

    pub fn map(&self, ambient: &PermGroup, g: &Perm) -> Perm {
        let imgs = self
            .reps
            .iter()
            .map(|r| self.coset_of(ambient, &r.mul(g)))
            .collect();
        Perm::from_images(imgs).unwrap()
    }
}

/// A generating set chosen greedily from a sorted element list.
pub fn group_from_elements(degree: usize, members: &[Perm]) -> PermGroup {
    let mut gens: Vec<Perm> = Vec::new();
    let mut group = PermGroup::trivial(degree);
    for x in members {
        if !group.contains(x) {
            gens.push(x.clone());
            group = PermGroup::new(degree, gens.clone()).unwrap();
            if group.order() as usize == members.len() {
                break;
            }
        }
    }
    group
}

pub struct DirectProduct {
    pub group: GroupRef,
    pub d1: usize,
    pub d2: usize,
}

impl DirectProduct {
    pub fn new(g1: &PermGroup, g2: &PermGroup) -> DirectProduct {
        let (d1, d2) = (g1.degree, g2.degree);
        let d = d1 + d2;
        let mut gens: Vec<Perm> = g1.gens.iter().map(|g| g.extend(d)).collect();
        gens.extend(g2.gens.iter().map(|g| g.shifted(d1, d)));
        DirectProduct {
            group: PermGroup::new(d, gens).unwrap().into_ref(),
            d1,
            d2,
        }
    }

    pub fn embed1(&self, g: &Perm) -> Perm {
        g.extend(self.d1 + self.d2)
    }

    pub fn embed2(&self, g: &Perm) -> Perm {
        g.shifted(self.d1, self.d1 + self.d2)
    }

    pub fn pair(&self, a: &Perm, b: &Perm) -> Perm {
        self.embed1(a).mul(&self.embed2(b))
    }

    pub fn proj1(&self, x: &Perm) -> Perm {
        Perm::from_images((0..self.d1).map(|i| x.image(i)).collect()).unwrap()
    }

    pub fn proj2(&self, x: &Perm) -> Perm {
        Perm::from_images((0..self.d2).map(|i| x.image(self.d1 + i) - self.d1).collect()).unwrap()
    }
}

/// `G wr S_m` acting imprimitively on `m` blocks of `deg(G)` points.
pub struct Wreath {
    pub group: GroupRef,
    pub base: GroupRef,
    pub d: usize,
    pub m: usize,
}

impl Wreath {
    pub fn new(g: &PermGroup, m: usize) -> Wreath {
        let d = g.degree;
        let total = d * m;
        let mut base_gens = Vec::new();
        for i in 0..m {
            for s in &g.gens {
                base_gens.push(s.shifted(i * d, total));
            }
        }
        let mut gens: Vec<Perm> = g.gens.iter().map(|s| s.extend(total)).collect();
        if m >= 2 {
            gens.push(Wreath::block_perm_static(d, m, &Perm::from_cycles(m, &[vec![0, 1]]).unwrap()));
            if m >= 3 {
                let cyc: Vec<usize> = (0..m).collect();
                gens.push(Wreath::block_perm_static(d, m, &Perm::from_cycles(m, &[cyc]).unwrap()));
            }
        }
        Wreath {
            group: PermGroup::new(total, gens).unwrap().into_ref(),
            base: PermGroup::new(total, base_gens).unwrap().into_ref(),
            d,
            m,
        }
    }

    fn block_perm_static(d: usize, m: usize, w: &Perm) -> Perm {
        let mut imgs = vec![0; d * m];
        for i in 0..m {
            for a in 0..d {
                imgs[i * d + a] = w.image(i) * d + a;
            }
        }
        Perm::from_images(imgs).unwrap()
    }

    /// The top-group element permuting the blocks like `w`.
    pub fn block_perm(&self, w: &Perm) -> Perm {
        Wreath::block_perm_static(self.d, self.m, w)
    }

    /// The base element with component `xs[i]` on block `i`.
    pub fn base_elem(&self, xs: &[Perm]) -> Perm {
        xs.iter()
            .enumerate()
            .fold(Perm::identity(self.d * self.m), |acc, (i, x)| {
                acc.mul(&x.shifted(i * self.d, self.d * self.m))
            })
    }

    /// Write `x` as `base_elem(xs) * block_perm(w)`.
    pub fn decompose(&self, x: &Perm) -> (Vec<Perm>, Perm) {
        let d = self.d;
        let w = Perm::from_images((0..self.m).map(|i| x.image(i * d) / d).collect()).unwrap();
        let b = x.mul(&self.block_perm(&w).inverse());
        let xs = (0..self.m)
            .map(|i| Perm::from_images((0..d).map(|a| b.image(i * d + a) - i * d).collect()).unwrap())
            .collect();
        (xs, w)
    }
}

/// Orbit of `start` under `gens` together with generators of its stabilizer.
pub fn orbit_stabilizer<T, F>(
    degree: usize,
    gens: &[Perm],
    start: T,
    act: F,
) -> (Vec<T>, Vec<Perm>, PermGroup)
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &Perm) -> T,
{
    let mut orbit = vec![start.clone()];
    let mut reps = vec![Perm::identity(degree)];
    let mut pos: HashMap<T, usize> = HashMap::new();
    pos.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    let mut stab_gens = Vec::new();
    let mut stab = PermGroup::trivial(degree);
    while let Some(i) = queue.pop_front() {
        for s in gens {
            let img = act(&orbit[i], s);
            let u = reps[i].mul(s);
            match pos.get(&img) {
                Some(&j) => {
                    let sg = u.mul(&reps[j].inverse());
                    if !stab.contains(&sg) {
                        stab_gens.push(sg);
                        stab = PermGroup::new(degree, stab_gens.clone()).unwrap();
                    }
                }
                None => {
                    pos.insert(img.clone(), orbit.len());
                    orbit.push(img);
                    reps.push(u);
                    queue.push_back(orbit.len() - 1);
                }
            }
        }
    }
    (orbit, reps, stab)
}
