//! Isomorphism search between finite monoids.
//!
//! The search refines elements by isomorphism-invariant signatures, picks a
//! generating set of the source (rarest signature classes first, smallest
//! index breaking ties), and backtracks over images of the generators. Every
//! assignment is closed under multiplication immediately, so a complete
//! generator assignment determines the whole map.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::monoid::FiniteMonoid;

/// A bijection between element indices that has been checked to be a monoid
/// isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IsoWitness {
    map: Vec<usize>,
}

impl IsoWitness {
    /// Checks that `map` is a bijection preserving products and the identity.
    pub fn certify(source: &FiniteMonoid, target: &FiniteMonoid, map: Vec<usize>) -> Result<Self> {
        let n = source.size();
        if target.size() != n || map.len() != n {
            return Err(Error::InvalidWitness(format!(
                "sizes differ: source {n}, target {}, map {}",
                target.size(),
                map.len()
            )));
        }
        let mut hit = vec![false; n];
        for &v in &map {
            if v >= n || hit[v] {
                return Err(Error::InvalidWitness(format!(
                    "{v} is hit twice or out of range"
                )));
            }
            hit[v] = true;
        }
        if map[source.identity()] != target.identity() {
            return Err(Error::InvalidWitness("identity not preserved".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::InvalidWitness(format!(
                        "product {a}*{b} not preserved"
                    )));
                }
            }
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        Self { map: inv }
    }

    /// Re-runs the certification against a concrete pair of monoids.
    pub fn is_valid_for(&self, source: &FiniteMonoid, target: &FiniteMonoid) -> bool {
        Self::certify(source, target, self.map.clone()).is_ok()
    }
}

/// Which element invariants prune the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Invariants {
    /// Order, index/period, idempotency.
    #[default]
    Basic,
    /// Basic plus unit status, left/right principal ideal sizes, centraliser
    /// size, square-root count and factorisation count.
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchConfig {
    /// Maximum number of generator assignments tried; `None` is unlimited.
    pub budget: Option<u64>,
    pub invariants: Invariants,
}

impl SearchConfig {
    pub fn with_budget(budget: Option<u64>) -> Self {
        Self {
            budget,
            ..Self::default()
        }
    }

    pub fn extended(mut self) -> Self {
        self.invariants = Invariants::Extended;
        self
    }
}

/// Result of a first-witness search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(IsoWitness),
    /// The search space was exhausted.
    ProvenAbsent,
    BudgetExceeded,
}

/// Outcome plus the number of search nodes spent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

/// Element signature; equal signatures are necessary for elements to
/// correspond under an isomorphism.
pub type Signature = Vec<usize>;

pub fn signatures(m: &FiniteMonoid, invariants: Invariants) -> Vec<Signature> {
    let n = m.size();
    let mut sq_roots = vec![0usize; n];
    let mut factorisations = vec![0usize; n];
    if invariants == Invariants::Extended {
        for a in 0..n {
            sq_roots[m.mul(a, a)] += 1;
            for b in 0..n {
                factorisations[m.mul(a, b)] += 1;
            }
        }
    }
    m.elements()
        .map(|a| {
            let (index, period) = m.index_period(a);
            let mut sig = vec![
                usize::from(a != m.identity()),
                m.element_order(a).value(),
                index,
                period,
                usize::from(m.is_idempotent(a)),
            ];
            if invariants == Invariants::Extended {
                let mut left = vec![false; n];
                let mut right = vec![false; n];
                let mut central = 0;
                for b in 0..n {
                    left[m.mul(b, a)] = true;
                    right[m.mul(a, b)] = true;
                    central += usize::from(m.mul(a, b) == m.mul(b, a));
                }
                sig.extend([
                    usize::from(m.inverse(a).is_ok()),
                    left.iter().filter(|&&x| x).count(),
                    right.iter().filter(|&&x| x).count(),
                    central,
                    sq_roots[a],
                    factorisations[a],
                ]);
            }
            sig
        })
        .collect()
}

/// Multiset of signatures, a cheap isomorphism invariant of the monoid.
pub fn signature_profile(m: &FiniteMonoid, invariants: Invariants) -> Vec<Signature> {
    let mut sigs = signatures(m, invariants);
    sigs.sort();
    sigs
}

pub fn find_isomorphism(m1: &FiniteMonoid, m2: &FiniteMonoid) -> Result<Option<IsoWitness>> {
    find_isomorphism_with(m1, m2, &SearchConfig::default())
}

/// `Ok(None)` means the search was exhausted; a spent budget is an error.
pub fn find_isomorphism_with(
    m1: &FiniteMonoid,
    m2: &FiniteMonoid,
    config: &SearchConfig,
) -> Result<Option<IsoWitness>> {
    let report = search_first(m1, m2, config);
    match report.outcome {
        SearchOutcome::Found(w) => Ok(Some(w)),
        SearchOutcome::ProvenAbsent => Ok(None),
        SearchOutcome::BudgetExceeded => Err(Error::SearchBudgetExceeded {
            nodes: report.nodes,
        }),
    }
}

pub fn search_first(m1: &FiniteMonoid, m2: &FiniteMonoid, config: &SearchConfig) -> SearchReport {
    let mut found = None;
    let (exhausted, nodes) = run_search(m1, m2, config, &mut |w| {
        found = Some(w);
        false
    });
    let outcome = match found {
        Some(w) => SearchOutcome::Found(w),
        None if exhausted => SearchOutcome::ProvenAbsent,
        None => SearchOutcome::BudgetExceeded,
    };
    SearchReport { outcome, nodes }
}

/// All isomorphisms `m1 -> m2`, sorted by map; automorphisms when equal.
pub fn enumerate_isomorphisms(m1: &FiniteMonoid, m2: &FiniteMonoid) -> Result<Vec<IsoWitness>> {
    enumerate_isomorphisms_with(m1, m2, &SearchConfig::default())
}

pub fn enumerate_isomorphisms_with(
    m1: &FiniteMonoid,
    m2: &FiniteMonoid,
    config: &SearchConfig,
) -> Result<Vec<IsoWitness>> {
    let mut all = Vec::new();
    let (exhausted, nodes) = run_search(m1, m2, config, &mut |w| {
        all.push(w);
        true
    });
    if !exhausted {
        return Err(Error::SearchBudgetExceeded { nodes });
    }
    all.sort_by(|a, b| a.map.cmp(&b.map));
    Ok(all)
}

/// Returns (exhausted, nodes). `visit` returns whether to keep searching.
fn run_search(
    m1: &FiniteMonoid,
    m2: &FiniteMonoid,
    config: &SearchConfig,
    visit: &mut dyn FnMut(IsoWitness) -> bool,
) -> (bool, u64) {
    if m1.size() != m2.size() {
        return (true, 0);
    }
    let sig1 = signatures(m1, config.invariants);
    let sig2 = signatures(m2, config.invariants);
    let mut p1 = sig1.clone();
    let mut p2 = sig2.clone();
    p1.sort();
    p2.sort();
    if p1 != p2 {
        return (true, 0);
    }

    // class ids shared between both sides
    let mut class_of_sig: BTreeMap<&Signature, usize> = BTreeMap::new();
    for s in &p1 {
        let next = class_of_sig.len();
        class_of_sig.entry(s).or_insert(next);
    }
    let class1: Vec<usize> = sig1.iter().map(|s| class_of_sig[s]).collect();
    let class2: Vec<usize> = sig2.iter().map(|s| class_of_sig[s]).collect();
    let mut members2 = vec![Vec::new(); class_of_sig.len()];
    for (b, &c) in class2.iter().enumerate() {
        members2[c].push(b);
    }

    let generators = generating_set(m1, &class1, &members2);
    let mut state = State {
        src: m1,
        tgt: m2,
        class1: &class1,
        class2: &class2,
        map: vec![None; m1.size()],
        inv: vec![None; m1.size()],
        mapped: Vec::with_capacity(m1.size()),
        nodes: 0,
        budget: config.budget,
    };
    if !state.assign(m1.identity(), m2.identity()) {
        return (true, 0);
    }
    let mut stop = false;
    let exhausted = state.descend(&generators, 0, &members2, visit, &mut stop);
    (exhausted || stop, state.nodes)
}

/// Greedy generating set over non-identity elements, rarest class first.
fn generating_set(m: &FiniteMonoid, class1: &[usize], members2: &[Vec<usize>]) -> Vec<usize> {
    let n = m.size();
    let mut order: Vec<usize> = m.elements().filter(|&a| a != m.identity()).collect();
    order.sort_by_key(|&a| (members2[class1[a]].len(), a));

    let mut in_closure = vec![false; n];
    in_closure[m.identity()] = true;
    let mut closure = vec![m.identity()];
    let mut generators = Vec::new();
    for &g in &order {
        if in_closure[g] {
            continue;
        }
        generators.push(g);
        in_closure[g] = true;
        closure.push(g);
        let mut i = closure.len() - 1;
        while i < closure.len() {
            let a = closure[i];
            for j in 0..=i {
                let b = closure[j];
                for p in [m.mul(a, b), m.mul(b, a)] {
                    if !in_closure[p] {
                        in_closure[p] = true;
                        closure.push(p);
                    }
                }
            }
            i += 1;
        }
        if closure.len() == n {
            break;
        }
    }
    generators
}

struct State<'a> {
    src: &'a FiniteMonoid,
    tgt: &'a FiniteMonoid,
    class1: &'a [usize],
    class2: &'a [usize],
    map: Vec<Option<usize>>,
    inv: Vec<Option<usize>>,
    mapped: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
}

impl State<'_> {
    /// Maps `a -> b` and closes under products. On failure the state is
    /// left partially extended; callers roll back with `truncate`.
    fn assign(&mut self, a: usize, b: usize) -> bool {
        if !self.set(a, b) {
            return false;
        }
        let mut i = self.mapped.len() - 1;
        while i < self.mapped.len() {
            let x = self.mapped[i];
            for j in 0..=i {
                let y = self.mapped[j];
                if !self.check(x, y) || !self.check(y, x) {
                    return false;
                }
            }
            i += 1;
        }
        true
    }

    fn set(&mut self, a: usize, b: usize) -> bool {
        if self.inv[b].is_some() || self.class1[a] != self.class2[b] {
            return false;
        }
        self.map[a] = Some(b);
        self.inv[b] = Some(a);
        self.mapped.push(a);
        true
    }

    fn check(&mut self, x: usize, y: usize) -> bool {
        let p = self.src.mul(x, y);
        let q = self.tgt.mul(self.map[x].unwrap(), self.map[y].unwrap());
        match self.map[p] {
            Some(v) => v == q,
            None => self.set(p, q),
        }
    }

    fn truncate(&mut self, len: usize) {
        while self.mapped.len() > len {
            let a = self.mapped.pop().unwrap();
            let b = self.map[a].take().unwrap();
            self.inv[b] = None;
        }
    }

    /// Returns false if the budget ran out.
    fn descend(
        &mut self,
        generators: &[usize],
        k: usize,
        members2: &[Vec<usize>],
        visit: &mut dyn FnMut(IsoWitness) -> bool,
        stop: &mut bool,
    ) -> bool {
        let Some(&g) = generators.get(k) else {
            let map: Vec<usize> = self.map.iter().map(|v| v.unwrap()).collect();
            let w = IsoWitness::certify(self.src, self.tgt, map)
                .expect("search produced an invalid isomorphism");
            *stop = !visit(w);
            return true;
        };
        if self.map[g].is_some() {
            return self.descend(generators, k + 1, members2, visit, stop);
        }
        let mark = self.mapped.len();
        for &t in &members2[self.class1[g]] {
            if self.inv[t].is_some() {
                continue;
            }
            self.nodes += 1;
            if self.budget.is_some_and(|b| self.nodes > b) {
                return false;
            }
            if self.assign(g, t) {
                let ok = self.descend(generators, k + 1, members2, visit, stop);
                if !ok {
                    self.truncate(mark);
                    return false;
                }
            }
            self.truncate(mark);
            if *stop {
                return true;
            }
        }
        true
    }
}
