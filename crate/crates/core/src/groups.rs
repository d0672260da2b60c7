//! Finite groups as multiplication tables, actions by automorphisms, homomorphisms,
//! semidirect products and automorphism enumeration.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Limits, Result};

/// A finite group on the dense element set `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    n: usize,
    mul: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validates the table (closure, associativity, identity, inverses).
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Contract("empty multiplication table".into()));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Contract("multiplication table is not square over 0..n".into()));
        }
        let mul: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| mul[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::Contract("no identity element".into()))?;
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::Contract(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::Contract(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(_) => return Err(Error::Contract("label count differs from order".into())),
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(FiniteGroup { name: name.into(), n, mul, identity, inv, labels })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Non-identity elements in increasing index order.
    pub fn non_identity(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| x != self.identity).collect()
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn product(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        let mut out = vec![self.identity];
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Greedy generating set: repeatedly add the element enlarging the generated subgroup most.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.generated(&gens);
        while current.len() < self.n {
            let best = (0..self.n)
                .filter(|x| current.binary_search(x).is_err())
                .max_by_key(|&x| {
                    let mut g = gens.clone();
                    g.push(x);
                    (self.generated(&g).len(), std::cmp::Reverse(x))
                })
                .unwrap();
            gens.push(best);
            current = self.generated(&gens);
        }
        gens
    }

    /// Subgroup on the given sorted element list, re-indexed densely; returns the group
    /// and the embedding (new index → old index).
    pub fn subgroup(&self, elems: &[usize], name: impl Into<String>) -> Result<(FiniteGroup, Vec<usize>)> {
        let pos = |x: usize| elems.iter().position(|&e| e == x);
        let mut table = Vec::with_capacity(elems.len());
        for &a in elems {
            let mut row = Vec::with_capacity(elems.len());
            for &b in elems {
                row.push(pos(self.mul(a, b)).ok_or_else(|| Error::Contract("subset not closed".into()))?);
            }
            table.push(row);
        }
        let labels = elems.iter().map(|&e| self.labels[e].clone()).collect();
        Ok((FiniteGroup::from_table(name, table, Some(labels))?, elems.to_vec()))
    }

    pub fn trivial() -> Self {
        cyclic(1)
    }
}

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(format!("Z/{n}"), table, None).unwrap()
}

/// Dihedral group of order `2n`; element `i + n·j` is `r^i s^j`.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let idx = |i: usize, j: usize| i % n + n * j;
    let mut table = vec![vec![0; 2 * n]; 2 * n];
    for j1 in 0..2 {
        for i1 in 0..n {
            for j2 in 0..2 {
                for i2 in 0..n {
                    // r^i1 s^j1 r^i2 s^j2 = r^(i1 ± i2) s^(j1+j2)
                    let i = if j1 == 0 { i1 + i2 } else { i1 + n - i2 };
                    table[idx(i1, j1)][idx(i2, j2)] = idx(i, (j1 + j2) % 2);
                }
            }
        }
    }
    let labels = (0..2 * n)
        .map(|x| {
            let (i, j) = (x % n, x / n);
            match (i, j) {
                (0, 0) => "e".to_string(),
                (i, 0) => format!("r{i}"),
                (0, _) => "s".to_string(),
                (i, _) => format!("r{i}s"),
            }
        })
        .collect();
    FiniteGroup::from_table(format!("D{n}"), table, Some(labels)).unwrap()
}

/// Quaternion group; elements 1, −1, i, −i, j, −j, k, −k.
pub fn quaternion8() -> FiniteGroup {
    // unit u ∈ {1,i,j,k} with sign; index = 2·u + (sign bit)
    let unit_mul = |a: usize, b: usize| -> (usize, bool) {
        match (a, b) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            (1, 2) => (3, false),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let mut table = vec![vec![0; 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let (u, neg) = unit_mul(a / 2, b / 2);
            let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
            table[a][b] = 2 * u + sign as usize;
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
    FiniteGroup::from_table("Q8", table, Some(labels)).unwrap()
}

/// Symmetric group on `n ≤ 4` letters, permutations in lexicographic order, `(στ)(x) = σ(τ(x))`.
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 4 {
        return Err(Error::Usage(format!("symmetric({n}) supported for 1 ≤ n ≤ 4")));
    }
    let mut perms: Vec<Vec<usize>> = Vec::new();
    permutations(&mut (0..n).collect(), 0, &mut perms);
    perms.sort();
    let pos = |p: &Vec<usize>| perms.binary_search(p).unwrap();
    let table = perms
        .iter()
        .map(|s| perms.iter().map(|t| pos(&t.iter().map(|&x| s[x]).collect())).collect())
        .collect();
    let labels = perms.iter().map(|p| p.iter().map(|x| (x + 1).to_string()).collect::<String>()).collect();
    FiniteGroup::from_table(format!("S{n}"), table, Some(labels))
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// `A × B` with element `a + |A|·b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (na, nb) = (a.order(), b.order());
    let table = (0..na * nb)
        .map(|x| (0..na * nb).map(|y| a.mul(x % na, y % na) + na * b.mul(x / na, y / na)).collect())
        .collect();
    let labels = (0..na * nb).map(|x| format!("({},{})", a.label(x % na), b.label(x / na))).collect();
    FiniteGroup::from_table(format!("{}x{}", a.name(), b.name()), table, Some(labels)).unwrap()
}

/// Action of `group` (G) on `target` (K) by automorphisms: `perm[g][k] = g(k)`.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub group: FiniteGroup,
    pub target: FiniteGroup,
    perm: Vec<Vec<usize>>,
    name: String,
}

impl PartialEq for GroupAction {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.target == other.target && self.perm == other.perm
    }
}

impl Eq for GroupAction {}

impl GroupAction {
    pub fn new(group: FiniteGroup, target: FiniteGroup, perm: Vec<Vec<usize>>, name: impl Into<String>) -> Result<Self> {
        if perm.len() != group.order() || perm.iter().any(|p| p.len() != target.order()) {
            return Err(Error::Contract("action table has wrong shape".into()));
        }
        for g in group.elements() {
            let p = &perm[g];
            let mut seen = vec![false; target.order()];
            for &x in p {
                if x >= target.order() || seen[x] {
                    return Err(Error::Contract(format!("action of {g} is not a permutation")));
                }
                seen[x] = true;
            }
            for a in target.elements() {
                for b in target.elements() {
                    if p[target.mul(a, b)] != target.mul(p[a], p[b]) {
                        return Err(Error::Contract(format!("action of {g} is not an automorphism")));
                    }
                }
            }
            for h in group.elements() {
                for k in target.elements() {
                    if perm[group.mul(g, h)][k] != p[perm[h][k]] {
                        return Err(Error::Contract("action is not a homomorphism G → Aut(K)".into()));
                    }
                }
            }
        }
        Ok(GroupAction { group, target, perm, name: name.into() })
    }

    #[inline]
    pub fn act(&self, g: usize, k: usize) -> usize {
        self.perm[g][k]
    }

    pub fn perm(&self, g: usize) -> &[usize] {
        &self.perm[g]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_trivial(&self) -> bool {
        self.perm.iter().all(|p| p.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// The underlying permutation action on the set of elements of K.
    pub fn as_permutation_action(&self) -> PermutationAction {
        PermutationAction { group: self.group.clone(), degree: self.target.order(), perm: self.perm.clone() }
    }
}

pub fn conjugation_action(g: &FiniteGroup) -> GroupAction {
    let perm = g.elements().map(|a| g.elements().map(|x| g.conj(a, x)).collect()).collect();
    GroupAction::new(g.clone(), g.clone(), perm, "conjugation").unwrap()
}

pub fn trivial_action(g: &FiniteGroup, k: &FiniteGroup) -> GroupAction {
    let perm = g.elements().map(|_| k.elements().collect()).collect();
    GroupAction::new(g.clone(), k.clone(), perm, "trivial").unwrap()
}

/// `Z/2` acting on an abelian group by inversion.
pub fn inversion_action(k: &FiniteGroup) -> Result<GroupAction> {
    if !k.is_abelian() {
        return Err(Error::Usage("inversion is an automorphism only for abelian groups".into()));
    }
    let perm = vec![k.elements().collect(), k.elements().map(|x| k.inv(x)).collect()];
    GroupAction::new(cyclic(2), k.clone(), perm, "inversion")
}

/// Extends automorphisms given on generators of G to an action; fails if inconsistent.
pub fn action_from_generators(
    group: &FiniteGroup,
    target: &FiniteGroup,
    generators: &[usize],
    perms: &[Vec<usize>],
) -> Result<GroupAction> {
    if generators.len() != perms.len() {
        return Err(Error::Usage("one permutation per generator required".into()));
    }
    let n = target.order();
    let mut perm: Vec<Option<Vec<usize>>> = vec![None; group.order()];
    perm[group.identity()] = Some((0..n).collect());
    let mut queue = VecDeque::from([group.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&g, p) in generators.iter().zip(perms) {
            if p.len() != n {
                return Err(Error::Usage("permutation length differs from |K|".into()));
            }
            let y = group.mul(g, x);
            let px = perm[x].clone().unwrap();
            let candidate: Vec<usize> = px.iter().map(|&k| p[k]).collect();
            match &perm[y] {
                Some(existing) if *existing != candidate => {
                    return Err(Error::Contract("generator permutations do not define a homomorphism".into()))
                }
                Some(_) => {}
                None => {
                    perm[y] = Some(candidate);
                    queue.push_back(y);
                }
            }
        }
    }
    let perm: Option<Vec<Vec<usize>>> = perm.into_iter().collect();
    let perm = perm.ok_or_else(|| Error::Usage("listed generators do not generate G".into()))?;
    GroupAction::new(group.clone(), target.clone(), perm, "explicit")
}

/// Homomorphism between finite groups given by its element map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    pub image: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: FiniteGroup, target: FiniteGroup, image: Vec<usize>) -> Result<Self> {
        if image.len() != source.order() || image.iter().any(|&x| x >= target.order()) {
            return Err(Error::Contract("homomorphism image has wrong shape".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                if image[source.mul(a, b)] != target.mul(image[a], image[b]) {
                    return Err(Error::Contract(format!("map is not multiplicative at ({a},{b})")));
                }
            }
        }
        Ok(GroupHom { source, target, image })
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.image[a]
    }

    pub fn is_bijective(&self) -> bool {
        let set: BTreeSet<usize> = self.image.iter().copied().collect();
        set.len() == self.image.len() && self.source.order() == self.target.order()
    }
}

/// `K ⋊ G` with `(a,g)(b,h) = (a·g(b), gh)`; element `(a,g)` has index `a + |K|·g`.
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    pub group: FiniteGroup,
    pub iota_k: GroupHom,
    pub iota_g: GroupHom,
    pub pi2: GroupHom,
    /// `μ(a,g) = ag`, present when K = G acts on itself by conjugation.
    pub mu: Option<GroupHom>,
    nk: usize,
}

impl SemidirectProduct {
    #[inline]
    pub fn index(&self, a: usize, g: usize) -> usize {
        a + self.nk * g
    }

    #[inline]
    pub fn pair(&self, x: usize) -> (usize, usize) {
        (x % self.nk, x / self.nk)
    }
}

pub fn semidirect_product(rho: &GroupAction) -> SemidirectProduct {
    let k = &rho.target;
    let g = &rho.group;
    let (nk, ng) = (k.order(), g.order());
    let n = nk * ng;
    let table = (0..n)
        .map(|x| {
            let (a, gx) = (x % nk, x / nk);
            (0..n)
                .map(|y| {
                    let (b, hy) = (y % nk, y / nk);
                    k.mul(a, rho.act(gx, b)) + nk * g.mul(gx, hy)
                })
                .collect()
        })
        .collect();
    let labels = (0..n).map(|x| format!("({},{})", k.label(x % nk), g.label(x / nk))).collect();
    let group = FiniteGroup::from_table(format!("{}x|{}", k.name(), g.name()), table, Some(labels)).unwrap();
    let iota_k = GroupHom::new(k.clone(), group.clone(), (0..nk).map(|a| a + nk * g.identity()).collect()).unwrap();
    let iota_g = GroupHom::new(g.clone(), group.clone(), (0..ng).map(|h| k.identity() + nk * h).collect()).unwrap();
    let pi2 = GroupHom::new(group.clone(), g.clone(), (0..n).map(|x| x / nk).collect()).unwrap();
    let mu = if *k == *g && *rho == conjugation_action(g) {
        Some(GroupHom::new(group.clone(), k.clone(), (0..n).map(|x| k.mul(x % nk, x / nk)).collect()).unwrap())
    } else {
        None
    };
    SemidirectProduct { group, iota_k, iota_g, pi2, mu, nk }
}

/// A homomorphism σ: G → K with conjugation-by-σ(g) equal to ρ(g), if one exists.
pub fn trivialization_section(rho: &GroupAction) -> Option<GroupHom> {
    let g = &rho.group;
    let k = &rho.target;
    let gens = g.generating_set();
    // candidate images of each generator: elements of K inducing ρ(gen) by conjugation
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| k.elements().filter(|&c| k.elements().all(|x| k.conj(c, x) == rho.act(s, x))).collect())
        .collect();
    let mut choice = vec![0; gens.len()];
    search_homs(g, k, &gens, &candidates, 0, &mut choice)
}

fn search_homs(
    g: &FiniteGroup,
    k: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    depth: usize,
    choice: &mut Vec<usize>,
) -> Option<GroupHom> {
    if depth == gens.len() {
        let images: Vec<usize> = choice.clone();
        let map = extend_on_generators(g, k, gens, &images)?;
        return GroupHom::new(g.clone(), k.clone(), map).ok();
    }
    for &c in &candidates[depth] {
        choice[depth] = c;
        if let Some(h) = search_homs(g, k, gens, candidates, depth + 1, choice) {
            return Some(h);
        }
    }
    None
}

/// Extends generator images along words; `None` if inconsistent.
fn extend_on_generators(g: &FiniteGroup, k: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.order()];
    map[g.identity()] = k.identity();
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let v = k.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = v;
                queue.push_back(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    Some(map)
}

/// All automorphisms of K, by backtracking over images of a generating set.
pub fn automorphism_group(k: &FiniteGroup, limits: &Limits) -> Result<Vec<GroupHom>> {
    if k.order() > limits.max_aut_order {
        return Err(Error::Resource(format!(
            "automorphism enumeration for |K| = {} exceeds bound {}",
            k.order(),
            limits.max_aut_order
        )));
    }
    let gens = k.generating_set();
    let orders: Vec<usize> = gens.iter().map(|&s| k.element_order(s)).collect();
    let mut out = Vec::new();
    let mut choice = vec![0; gens.len()];
    aut_search(k, &gens, &orders, 0, &mut choice, &mut out);
    out.sort_by(|a, b| a.image.cmp(&b.image));
    Ok(out)
}

fn aut_search(
    k: &FiniteGroup,
    gens: &[usize],
    orders: &[usize],
    depth: usize,
    choice: &mut Vec<usize>,
    out: &mut Vec<GroupHom>,
) {
    if depth == gens.len() {
        if let Some(map) = extend_on_generators(k, k, gens, choice) {
            if let Ok(h) = GroupHom::new(k.clone(), k.clone(), map) {
                if h.is_bijective() {
                    out.push(h);
                }
            }
        }
        return;
    }
    for c in k.elements() {
        if k.element_order(c) == orders[depth] && !choice[..depth].contains(&c) {
            choice[depth] = c;
            aut_search(k, gens, orders, depth + 1, choice, out);
        }
    }
}

/// Automorphisms of K commuting with every ρ(g).
pub fn equivariant_automorphisms(rho: &GroupAction, limits: &Limits) -> Result<Vec<GroupHom>> {
    let all = automorphism_group(&rho.target, limits)?;
    Ok(all
        .into_iter()
        .filter(|f| {
            rho.group
                .elements()
                .all(|g| rho.target.elements().all(|x| f.apply(rho.act(g, x)) == rho.act(g, f.apply(x))))
        })
        .collect())
}

/// A group acting on `0..degree` by permutations.
#[derive(Clone, Debug)]
pub struct PermutationAction {
    pub group: FiniteGroup,
    pub degree: usize,
    pub perm: Vec<Vec<usize>>,
}

impl PermutationAction {
    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.perm[g][x]
    }
}

/// One orbit with its representative (smallest point) and stabilizer (sorted).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub representative: usize,
    pub elements: Vec<usize>,
    pub stabilizer: Vec<usize>,
}

/// Orbits in increasing order of representative.
pub fn orbits_and_stabilizers(action: &PermutationAction) -> Vec<Orbit> {
    let mut seen = vec![false; action.degree];
    let mut out = Vec::new();
    for x in 0..action.degree {
        if seen[x] {
            continue;
        }
        let mut elements: Vec<usize> = action.group.elements().map(|g| action.act(g, x)).collect();
        elements.sort_unstable();
        elements.dedup();
        for &y in &elements {
            seen[y] = true;
        }
        let stabilizer = action.group.elements().filter(|&g| action.act(g, x) == x).collect();
        out.push(Orbit { representative: x, elements, stabilizer });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_have_expected_orders() {
        assert_eq!(cyclic(5).order(), 5);
        assert_eq!(dihedral(4).order(), 8);
        assert!(!dihedral(3).is_abelian());
        assert_eq!(quaternion8().order(), 8);
        assert_eq!(symmetric(3).unwrap().order(), 6);
        assert_eq!(symmetric(4).unwrap().order(), 24);
        assert_eq!(direct_product(&cyclic(2), &cyclic(3)).order(), 6);
    }

    #[test]
    fn quaternion_relations() {
        let q = quaternion8();
        let (i, j, k, m1) = (2, 4, 6, 1);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(i, i), m1);
        assert_eq!(q.mul(j, i), 7);
        assert_eq!(q.element_order(i), 4);
    }

    #[test]
    fn semidirect_formula() {
        let k = cyclic(4);
        let rho = inversion_action(&k).unwrap();
        let sd = semidirect_product(&rho);
        let x = sd.index(1, 1);
        let y = sd.index(1, 0);
        assert_eq!(sd.pair(sd.group.mul(x, y)), (0, 1));
        assert!(sd.mu.is_none());
        let t = semidirect_product(&trivial_action(&cyclic(2), &cyclic(3)));
        assert!(t.group.is_abelian());
    }

    #[test]
    fn mu_is_homomorphism_for_s3() {
        let s3 = symmetric(3).unwrap();
        let sd = semidirect_product(&conjugation_action(&s3));
        assert!(sd.mu.is_some());
    }

    #[test]
    fn sections() {
        let s3 = symmetric(3).unwrap();
        let sigma = trivialization_section(&conjugation_action(&s3)).unwrap();
        assert!(s3.elements().all(|x| s3.elements().all(|y| s3.conj(sigma.apply(x), y) == s3.conj(x, y))));
        let triv = trivialization_section(&trivial_action(&cyclic(2), &cyclic(3))).unwrap();
        assert!(triv.image.iter().all(|&x| x == 0));
        assert!(trivialization_section(&inversion_action(&cyclic(3)).unwrap()).is_none());
    }

    #[test]
    fn automorphism_counts() {
        let lim = Limits::default();
        assert_eq!(automorphism_group(&cyclic(4), &lim).unwrap().len(), 2);
        assert_eq!(automorphism_group(&direct_product(&cyclic(2), &cyclic(2)), &lim).unwrap().len(), 6);
        assert_eq!(automorphism_group(&quaternion8(), &lim).unwrap().len(), 24);
        let tight = Limits { max_aut_order: 4, ..Limits::default() };
        assert!(matches!(automorphism_group(&cyclic(5), &tight), Err(Error::Resource(_))));
    }

    #[test]
    fn equivariant_automorphism_examples() {
        let lim = Limits::default();
        assert_eq!(equivariant_automorphisms(&conjugation_action(&cyclic(5)), &lim).unwrap().len(), 4);
        assert_eq!(equivariant_automorphisms(&inversion_action(&cyclic(5)).unwrap(), &lim).unwrap().len(), 4);
        let s3 = symmetric(3).unwrap();
        assert_eq!(equivariant_automorphisms(&conjugation_action(&s3), &lim).unwrap().len(), 1);
    }

    #[test]
    fn orbit_examples() {
        let q = quaternion8();
        let orbits = orbits_and_stabilizers(&conjugation_action(&q).as_permutation_action());
        let sets: Vec<Vec<usize>> = orbits.iter().map(|o| o.elements.clone()).collect();
        assert_eq!(sets, vec![vec![0], vec![1], vec![2, 3], vec![4, 5], vec![6, 7]]);
        let inv = inversion_action(&cyclic(5)).unwrap().as_permutation_action();
        let sets: Vec<Vec<usize>> = orbits_and_stabilizers(&inv).iter().map(|o| o.elements.clone()).collect();
        assert_eq!(sets, vec![vec![0], vec![1, 4], vec![2, 3]]);
        for o in orbits {
            assert_eq!(o.elements.len() * o.stabilizer.len(), 8);
        }
    }

    #[test]
    fn explicit_action_extends() {
        let g = cyclic(2);
        let k = cyclic(5);
        let a = action_from_generators(&g, &k, &[1], &[vec![0, 4, 3, 2, 1]]).unwrap();
        assert_eq!(a, inversion_action(&k).unwrap());
        assert!(action_from_generators(&g, &k, &[1], &[vec![0, 2, 4, 1, 3]]).is_err());
    }
}
