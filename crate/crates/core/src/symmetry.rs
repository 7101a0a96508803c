//! Index symmetries of covariant tensors and their orbits.

use std::collections::BTreeMap;

/// One generator of a signed slot-permutation group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// Exchange of slots `a` and `b`; `skew` flips the sign.
    Swap { a: usize, b: usize, skew: bool },
    /// Exchange of the slot pairs `(a, a+1)` and `(b, b+1)`.
    PairSwap { a: usize, b: usize },
}

impl Generator {
    fn max_slot(&self) -> usize {
        match *self {
            Generator::Swap { a, b, .. } => a.max(b),
            Generator::PairSwap { a, b } => a.max(b) + 1,
        }
    }

    fn apply(&self, idx: &mut [usize]) -> i8 {
        match *self {
            Generator::Swap { a, b, skew } => {
                idx.swap(a, b);
                if skew {
                    -1
                } else {
                    1
                }
            }
            Generator::PairSwap { a, b } => {
                idx.swap(a, b);
                idx.swap(a + 1, b + 1);
                1
            }
        }
    }
}

/// The symmetry group of a tensor, given by generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symmetry {
    gens: Vec<Generator>,
}

/// The orbit of one index tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Members with the sign relating them to the representative.
    pub members: Vec<(Vec<usize>, i8)>,
    /// The group forces the component to vanish (a member is reached with
    /// both signs).
    pub vanishes: bool,
}

impl Orbit {
    pub fn representative(&self) -> &[usize] {
        &self.members[0].0
    }
}

impl Symmetry {
    pub fn none() -> Self {
        Symmetry::default()
    }

    pub fn symmetric(a: usize, b: usize) -> Self {
        Symmetry::none().with_symmetric(a, b)
    }

    pub fn skew(a: usize, b: usize) -> Self {
        Symmetry::none().with_skew(a, b)
    }

    /// Skew in `(o, o+1)` and `(o+2, o+3)`, symmetric under pair exchange.
    pub fn riemann(offset: usize) -> Self {
        Symmetry::none().with_riemann(offset)
    }

    pub fn with_symmetric(mut self, a: usize, b: usize) -> Self {
        self.gens.push(Generator::Swap { a, b, skew: false });
        self
    }

    pub fn with_skew(mut self, a: usize, b: usize) -> Self {
        self.gens.push(Generator::Swap { a, b, skew: true });
        self
    }

    pub fn with_riemann(self, o: usize) -> Self {
        let mut s = self.with_skew(o, o + 1).with_skew(o + 2, o + 3);
        s.gens.push(Generator::PairSwap { a: o, b: o + 2 });
        s
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    /// Highest slot touched plus one.
    pub fn span(&self) -> usize {
        self.gens.iter().map(|g| g.max_slot() + 1).max().unwrap_or(0)
    }

    /// Orbit of `idx`, representative first when `idx` is the smallest member.
    pub fn orbit(&self, idx: &[usize]) -> Orbit {
        let mut seen: BTreeMap<Vec<usize>, i8> = BTreeMap::new();
        let mut vanishes = false;
        let mut queue = vec![(idx.to_vec(), 1i8)];
        seen.insert(idx.to_vec(), 1);
        while let Some((t, s)) = queue.pop() {
            for g in &self.gens {
                let mut u = t.clone();
                let sign = s * g.apply(&mut u);
                match seen.get(&u) {
                    Some(&old) => vanishes |= old != sign,
                    None => {
                        seen.insert(u.clone(), sign);
                        queue.push((u, sign));
                    }
                }
            }
        }
        let first = seen.keys().next().cloned().unwrap_or_default();
        let flip = seen[&first];
        let members = seen.into_iter().map(|(k, s)| (k, s * flip)).collect();
        Orbit { members, vanishes }
    }

    /// All orbits of tuples in `dim^order`, each with its smallest member
    /// first, ordered by representative.
    pub fn orbits(&self, dim: usize, order: usize) -> Vec<Orbit> {
        let total = dim.pow(order as u32);
        let mut visited = vec![false; total];
        let mut out = Vec::new();
        for (flat, idx) in crate::tensor::tuples(dim, order).enumerate() {
            if visited[flat] {
                continue;
            }
            let orbit = self.orbit(&idx);
            for (m, _) in &orbit.members {
                visited[crate::tensor::flat_index(dim, m)] = true;
            }
            out.push(orbit);
        }
        out
    }
}
