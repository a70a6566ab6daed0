//! Ordinary cohomology ring and the Chen-Ruan Betti table.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::Result;
use crate::fan::{Fan, WeightSystem};
use crate::ratlat::{gcd_u64, lcm_list, Rat};
use crate::sectors::enumerate_twisted_sectors;

/// l_k = lcm over (k+1)-subsets I of prod(q_I) / gcd(q_I).
pub fn l_values(w: &WeightSystem) -> Vec<BigInt> {
    let q = w.q();
    let mut by_size: Vec<Vec<BigInt>> = vec![Vec::new(); q.len()];
    for mask in 1usize..1 << q.len() {
        let subset: Vec<u64> = (0..q.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| q[i])
            .collect();
        let prod: BigInt = subset.iter().map(|&x| BigInt::from(x)).product();
        by_size[subset.len() - 1].push(prod / gcd_u64(&subset));
    }
    by_size
        .iter()
        .map(|ls| lcm_list(ls).expect("nonempty positive list"))
        .collect()
}

/// Q-basis 1 = xi_0, xi_1, .., xi_n with xi_i xi_j = e_ij xi_{i+j}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdinaryRing {
    l: Vec<BigInt>,
    /// `e[i][j]` for i + j <= n.
    e: Vec<Vec<Rat>>,
}

impl OrdinaryRing {
    pub fn l(&self) -> &[BigInt] {
        &self.l
    }

    pub fn n(&self) -> usize {
        self.l.len() - 1
    }

    /// Structure constant e_ij, or None when i + j > n (the product is 0).
    pub fn e(&self, i: usize, j: usize) -> Option<&Rat> {
        self.e.get(i)?.get(j)
    }

    /// Rows of the triangular table.
    pub fn table(&self) -> &[Vec<Rat>] {
        &self.e
    }
}

pub fn ordinary_ring(w: &WeightSystem) -> OrdinaryRing {
    let l = l_values(w);
    let n = w.n();
    let e = (0..=n)
        .map(|i| {
            (0..=n - i)
                .map(|j| Rat::from(&l[i] * &l[j]) / Rat::from(l[i + j].clone()))
                .collect()
        })
        .collect();
    OrdinaryRing { l, e }
}

/// Rationally graded dimensions of the orbifold cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<Rat, u64>,
    denominator_lcm: BigInt,
    n: usize,
}

impl BettiTable {
    pub fn entries(&self) -> &BTreeMap<Rat, u64> {
        &self.entries
    }

    /// Dimension in degree p (zero when absent).
    pub fn dim(&self, p: &Rat) -> u64 {
        self.entries.get(p).copied().unwrap_or(0)
    }

    /// Common denominator of all degrees.
    pub fn denominator_lcm(&self) -> &BigInt {
        &self.denominator_lcm
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Whether dim H^p = dim H^(2n-p) for all p.
    pub fn is_poincare_symmetric(&self) -> bool {
        let top = Rat::from(2 * self.n as i64);
        self.entries
            .iter()
            .all(|(p, &d)| self.dim(&(&top - p)) == d)
    }
}

/// The untwisted sector contributes degrees 0, 2, .., 2n; a sector of
/// dimension m and shift iota contributes 2j + 2 iota for j = 0..m.
pub fn betti_table(fan: &Fan) -> Result<BettiTable> {
    let n = fan.n();
    let mut entries: BTreeMap<Rat, u64> = BTreeMap::new();
    for j in 0..=n {
        *entries.entry(Rat::from(2 * j as i64)).or_default() += 1;
    }
    let mut denominator_lcm = BigInt::one();
    for s in enumerate_twisted_sectors(fan)? {
        let shift = Rat::from(2i64) * s.iota();
        denominator_lcm = denominator_lcm.lcm(shift.denom());
        for j in 0..=s.dim() {
            *entries.entry(&shift + Rat::from(2 * j as i64)).or_default() += 1;
        }
    }
    Ok(BettiTable {
        entries,
        denominator_lcm,
        n,
    })
}

/// The table as a sorted list of (degree, dimension).
pub fn poincare_polynomial(table: &BettiTable) -> Vec<(Rat, u64)> {
    table.entries.iter().map(|(p, &d)| (p.clone(), d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::normalize_weights;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn l_examples() {
        let l = |q: &[u64]| l_values(&normalize_weights(q).unwrap());
        assert_eq!(l(&[2, 3, 4]), ints(&[1, 12, 24]));
        assert_eq!(l(&[1, 1, 1, 1]), ints(&[1, 1, 1, 1]));
        assert_eq!(l(&[2, 3, 5]), ints(&[1, 30, 30]));
    }

    #[test]
    fn ring_examples() {
        let ring = |q: &[u64]| ordinary_ring(&normalize_weights(q).unwrap());
        assert_eq!(ring(&[2, 3, 4]).e(1, 1), Some(&Rat::from(6i64)));
        assert_eq!(ring(&[2, 3, 5]).e(1, 1), Some(&Rat::from(30i64)));
        assert_eq!(ring(&[2, 3, 5]).e(1, 2), None);
        let p3 = ring(&[1, 1, 1, 1]);
        assert!(p3.table().iter().flatten().all(|e| e == &Rat::one()));
    }

    #[test]
    fn betti_of_p234() {
        let t = betti_table(&Fan::from_weights(&[2, 3, 4]).unwrap()).unwrap();
        let got = poincare_polynomial(&t);
        let want: Vec<(Rat, u64)> = [
            (0, 1, 1),
            (1, 1, 1),
            (3, 2, 1),
            (2, 1, 3),
            (5, 2, 1),
            (3, 1, 1),
            (4, 1, 1),
        ]
        .iter()
        .map(|&(p, q, d)| (Rat::frac_of(p, q), d))
        .collect();
        assert_eq!(got, want);
        assert_eq!(t.total(), 9);
        assert_eq!(t.denominator_lcm(), &BigInt::from(2));
        assert!(t.is_poincare_symmetric());
    }

    #[test]
    fn betti_of_p2_and_p235() {
        let t = betti_table(&Fan::from_weights(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(poincare_polynomial(&t).len(), 3);
        assert_eq!(t.total(), 3);
        let t = betti_table(&Fan::from_weights(&[2, 3, 5]).unwrap()).unwrap();
        assert_eq!(t.total(), 10);
    }

    #[test]
    fn betti_of_122333_shifts() {
        let t = betti_table(&Fan::from_weights(&[1, 2, 2, 3, 3, 3]).unwrap()).unwrap();
        assert_eq!(t.total(), 14);
        for shift in [Rat::frac_of(10, 3), Rat::frac_of(8, 3), Rat::from(4i64)] {
            assert!(t.dim(&shift) >= 1, "no class at {shift}");
        }
        assert_eq!(t.dim(&Rat::frac_of(10, 3)), 1);
        assert_eq!(t.dim(&Rat::frac_of(22, 3)), 1);
        assert_eq!(t.denominator_lcm(), &BigInt::from(3));
    }
}
