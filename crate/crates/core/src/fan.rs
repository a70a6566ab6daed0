//! The fan of P(q0..qn) and the local cyclic groups of its cones.
//!
//! Rays v1..vn are the rows of an upper-triangular matrix C0 and
//! v0 = -(q1 v1 + .. + qn vn)/q0, so that q0 v0 + .. + qn vn = 0. Every proper
//! subset of the n+1 rays spans a cone.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ratlat::{gcd_u64, rat_inverse, smith_normal_form, IntMat, Rat};

/// The weight tuple, divided by its gcd.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    q: Vec<u64>,
    reduced_from: Option<Vec<u64>>,
}

impl WeightSystem {
    pub fn q(&self) -> &[u64] {
        &self.q
    }

    pub fn weight(&self, i: usize) -> u64 {
        self.q[i]
    }

    /// Complex dimension n; there are n+1 weights.
    pub fn n(&self) -> usize {
        self.q.len() - 1
    }

    /// The tuple as typed, when it had a common factor.
    pub fn reduced_from(&self) -> Option<&[u64]> {
        self.reduced_from.as_deref()
    }

    pub fn sum(&self) -> u64 {
        self.q.iter().sum()
    }

    pub fn product(&self) -> BigInt {
        self.q.iter().map(|&x| BigInt::from(x)).product()
    }

    pub fn is_pairwise_coprime(&self) -> bool {
        let q = &self.q;
        (0..q.len()).all(|i| (i + 1..q.len()).all(|j| q[i].gcd(&q[j]) == 1))
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", tuple(&self.q))
    }
}

pub(crate) fn tuple(xs: &[u64]) -> String {
    let parts: Vec<String> = xs.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Divides out the gcd. Tuples with a common factor give the same space.
pub fn normalize_weights(raw: &[u64]) -> Result<WeightSystem> {
    if raw.len() < 2 {
        return Err(Error::InvalidWeights(format!(
            "need at least two weights, got {}",
            raw.len()
        )));
    }
    if raw.contains(&0) {
        return Err(Error::InvalidWeights("weights must be positive".into()));
    }
    let g = gcd_u64(raw);
    if g == 1 {
        return Ok(WeightSystem {
            q: raw.to_vec(),
            reduced_from: None,
        });
    }
    Ok(WeightSystem {
        q: raw.iter().map(|x| x / g).collect(),
        reduced_from: Some(raw.to_vec()),
    })
}

/// Upper-triangular basis matrix whose rows are v1..vn.
///
/// Diagonal entry i is d(0..i-1)/d(0..i) with d the prefix gcds. Above the
/// diagonal, column j is filled upwards with the least c >= 0 making
/// c*q_i + sum_{i<v<=j} c_vj*q_v divisible by d(0..i-1).
pub fn build_c0(w: &WeightSystem) -> IntMat {
    let n = w.n();
    let q: Vec<BigInt> = w.q.iter().map(|&x| BigInt::from(x)).collect();
    let prefix: Vec<BigInt> = q
        .iter()
        .scan(BigInt::zero(), |g, x| {
            *g = g.gcd(x);
            Some(g.clone())
        })
        .collect();
    let mut c = IntMat::zeros(n, n);
    for j in 1..=n {
        c.set(j - 1, j - 1, &prefix[j - 1] / &prefix[j]);
        for i in (1..j).rev() {
            let rest: BigInt = (i + 1..=j).map(|v| c.get(v - 1, j - 1) * &q[v]).sum();
            let modulus = &prefix[i - 1];
            let g = &prefix[i];
            // Solvable because the previous step made `rest` divisible by g.
            let m = modulus / g;
            let qi = &q[i] / g;
            let r = (-(&rest / g)).mod_floor(&m);
            let inv = qi.extended_gcd(&m).x.mod_floor(&m);
            c.set(i - 1, j - 1, (r * inv).mod_floor(&m));
        }
    }
    c
}

/// Index set of a cone. Always a proper subset of the rays.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn empty() -> Self {
        Cone(Vec::new())
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &Cone) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    /// Sorted union of the index sets; may not be a cone.
    pub fn union_indices(&self, other: &Cone) -> Vec<usize> {
        let mut v: Vec<usize> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Rays of the fan with `n_rays` rays that are not in this cone.
    pub fn complement(&self, n_rays: usize) -> Vec<usize> {
        (0..n_rays).filter(|&i| !self.contains(i)).collect()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A local group element, stored by its coefficients a_i in [0,1) on all
/// n+1 rays (zero off the carrier) together with k = sum a_i v_i.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalGroupElement {
    carrier: Cone,
    a: Vec<Rat>,
    ambient: Cone,
    k: Vec<BigInt>,
}

impl LocalGroupElement {
    pub fn carrier(&self) -> &Cone {
        &self.carrier
    }

    /// Maximal cone the element is expressed on.
    pub fn ambient(&self) -> &Cone {
        &self.ambient
    }

    pub fn k(&self) -> &[BigInt] {
        &self.k
    }

    /// Coefficient on ray i, zero off the carrier.
    pub fn a_on(&self, i: usize) -> &Rat {
        &self.a[i]
    }

    /// Coefficients on all rays.
    pub fn a_full(&self) -> &[Rat] {
        &self.a
    }

    /// Coefficients in the order of the ambient cone's rays.
    pub fn a_ambient(&self) -> Vec<Rat> {
        self.ambient
            .rays()
            .iter()
            .map(|&i| self.a[i].clone())
            .collect()
    }

    /// Coefficients on the carrier rays, all in (0,1).
    pub fn carrier_coefficients(&self) -> Vec<Rat> {
        self.carrier
            .rays()
            .iter()
            .map(|&i| self.a[i].clone())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.carrier.is_empty()
    }

    /// Degree shift: the sum of the coefficients.
    pub fn iota(&self) -> Rat {
        self.a.iter().sum()
    }

    /// Stable name `carrier=[i,..];a=[p/q,..]`.
    pub fn key(&self) -> String {
        let a: Vec<String> = self
            .carrier_coefficients()
            .iter()
            .map(|x| format!("{}/{}", x.numer(), x.denom()))
            .collect();
        format!("carrier={};a=[{}]", self.carrier, a.join(","))
    }
}

/// The complete fan of a weighted projective space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    weights: WeightSystem,
    c0: IntMat,
    rays: Vec<Vec<BigInt>>,
}

/// Builds the fan; checks |det C0| = q0 and integrality of v0.
pub fn build_fan(weights: &WeightSystem) -> Result<Fan> {
    let c0 = build_c0(weights);
    let q0 = BigInt::from(weights.q[0]);
    let det = c0.det()?;
    if det.abs() != q0 {
        return Err(Error::Internal(format!("|det C0| = {det}, expected {q0}")));
    }
    let n = weights.n();
    let mut total = vec![BigInt::zero(); n];
    for i in 1..=n {
        let qi = BigInt::from(weights.q[i]);
        for (t, x) in total.iter_mut().zip(c0.row(i - 1)) {
            *t += &qi * x;
        }
    }
    let mut v0 = Vec::with_capacity(n);
    for t in total {
        let (quot, rem) = t.div_rem(&q0);
        if !rem.is_zero() {
            return Err(Error::Internal("v0 is not integral".into()));
        }
        v0.push(-quot);
    }
    let mut rays = vec![v0];
    rays.extend(c0.to_rows());
    Ok(Fan {
        weights: weights.clone(),
        c0,
        rays,
    })
}

impl Fan {
    /// Normalizes raw weights and builds the fan.
    pub fn from_weights(raw: &[u64]) -> Result<Fan> {
        build_fan(&normalize_weights(raw)?)
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn q(&self, i: usize) -> u64 {
        self.weights.q[i]
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn num_rays(&self) -> usize {
        self.weights.q.len()
    }

    pub fn c0(&self) -> &IntMat {
        &self.c0
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    /// Validates an index set as a cone of this fan.
    pub fn cone(&self, indices: &[usize]) -> Result<Cone> {
        let mut v = indices.to_vec();
        v.sort_unstable();
        let bad = |why: &str| Error::InvalidCone(format!("{indices:?}: {why}"));
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad("repeated ray"));
        }
        if v.last().is_some_and(|&i| i >= self.num_rays()) {
            return Err(bad("ray index out of range"));
        }
        if v.len() > self.n() {
            return Err(bad("all rays together do not span a cone"));
        }
        Ok(Cone(v))
    }

    /// The maximal cone spanned by every ray except `k`.
    pub fn maximal_cone(&self, k: usize) -> Cone {
        Cone((0..self.num_rays()).filter(|&i| i != k).collect())
    }

    /// Lexicographically smallest maximal cone containing `tau`: drop the
    /// largest ray not in it.
    pub fn canonical_ambient(&self, tau: &Cone) -> Cone {
        let missing = (0..self.num_rays())
            .rev()
            .find(|&i| !tau.contains(i))
            .expect("a cone misses at least one ray");
        self.maximal_cone(missing)
    }

    /// Matrix with the cone's rays as rows.
    pub fn cone_matrix(&self, tau: &Cone) -> IntMat {
        IntMat::from_rows(
            &tau.rays()
                .iter()
                .map(|&i| self.rays[i].clone())
                .collect::<Vec<_>>(),
        )
        .expect("rays share a length")
    }

    /// Order of the cyclic group G_tau: gcd of the weights off tau.
    pub fn local_group_order(&self, tau: &Cone) -> u64 {
        let rest: Vec<u64> = tau
            .complement(self.num_rays())
            .into_iter()
            .map(|i| self.q(i))
            .collect();
        gcd_u64(&rest)
    }

    pub fn identity(&self) -> LocalGroupElement {
        let carrier = Cone::empty();
        LocalGroupElement {
            ambient: self.canonical_ambient(&carrier),
            carrier,
            a: vec![Rat::zero(); self.num_rays()],
            k: vec![BigInt::zero(); self.n()],
        }
    }

    /// Builds an element from its coefficients on all rays. Fails unless
    /// every entry is in [0,1), the support is a cone, and sum a_i v_i is a
    /// lattice point.
    pub fn element_from_a(&self, a: Vec<Rat>) -> Result<LocalGroupElement> {
        if a.len() != self.num_rays() {
            return Err(Error::Dimension(format!(
                "expected {} coefficients, got {}",
                self.num_rays(),
                a.len()
            )));
        }
        if a.iter().any(|x| x.is_negative() || x >= &Rat::one()) {
            return Err(Error::InvalidCone("coefficients must lie in [0,1)".into()));
        }
        let support: Vec<usize> = (0..a.len()).filter(|&i| !a[i].is_zero()).collect();
        let carrier = self.cone(&support)?;
        let mut k = Vec::with_capacity(self.n());
        for c in 0..self.n() {
            let x: Rat = support
                .iter()
                .map(|&i| &a[i] * Rat::from(self.rays[i][c].clone()))
                .sum();
            k.push(
                x.to_integer().ok_or_else(|| {
                    Error::InvalidCone("sum a_i v_i is not a lattice point".into())
                })?,
            );
        }
        Ok(LocalGroupElement {
            ambient: self.canonical_ambient(&carrier),
            carrier,
            a,
            k,
        })
    }

    /// The d elements of G_tau, identity first, sorted by (carrier, a).
    ///
    /// Takes the canonical maximal cone sigma over tau, walks the coset
    /// representatives y V^-1 of N/N_sigma given by the Smith form U B V = S,
    /// maps each to a = frac(k B^-1), and keeps those supported on tau.
    pub fn enumerate_group_elements(&self, tau: &Cone) -> Result<Vec<LocalGroupElement>> {
        let sigma = self.canonical_ambient(tau);
        let b = self.cone_matrix(&sigma);
        let b_inv = rat_inverse(&b)?;
        let snf = smith_normal_form(&b);
        let v_inv = rat_inverse(&snf.v)?
            .to_int()
            .ok_or_else(|| Error::Internal("Smith transform is not unimodular".into()))?;
        let box_sides: Vec<BigInt> = snf.diagonal();

        let mut out = Vec::new();
        let mut y = vec![BigInt::zero(); self.n()];
        loop {
            let k = v_inv.left_mul_vec(&y)?;
            let k_rat: Vec<Rat> = k.into_iter().map(Rat::from).collect();
            let coords = b_inv.left_mul_vec(&k_rat)?;
            let mut a = vec![Rat::zero(); self.num_rays()];
            for (&ray, x) in sigma.rays().iter().zip(coords) {
                a[ray] = x.fract();
            }
            if (0..a.len()).all(|i| a[i].is_zero() || tau.contains(i)) {
                out.push(self.element_from_a(a)?);
            }
            // Odometer over the box prod [0, s_i).
            let mut pos = 0;
            loop {
                if pos == y.len() {
                    out.sort();
                    let d = self.local_group_order(tau);
                    if out.len() as u64 != d {
                        return Err(Error::Internal(format!(
                            "G_{tau} has {} elements, expected {d}",
                            out.len()
                        )));
                    }
                    return Ok(out);
                }
                y[pos] += 1;
                if y[pos] < box_sides[pos] {
                    break;
                }
                y[pos] = BigInt::zero();
                pos += 1;
            }
        }
    }

    /// Same element on another maximal cone containing its carrier. The
    /// coefficients do not change.
    pub fn reexpress(&self, g: &LocalGroupElement, ambient: &Cone) -> Result<LocalGroupElement> {
        if ambient.len() != self.n() {
            return Err(Error::InvalidCone(format!("{ambient} is not maximal")));
        }
        if !g.carrier.is_subset(ambient) {
            return Err(Error::InvalidCone(format!(
                "{} does not contain the carrier {}",
                ambient, g.carrier
            )));
        }
        Ok(LocalGroupElement {
            ambient: ambient.clone(),
            ..g.clone()
        })
    }

    /// Product in G_sigma for elements on the same maximal cone sigma:
    /// a(gh) = frac(a(g) + a(h)). The result is put on its canonical cone.
    pub fn group_multiply(
        &self,
        g: &LocalGroupElement,
        h: &LocalGroupElement,
    ) -> Result<LocalGroupElement> {
        if g.ambient != h.ambient {
            return Err(Error::AmbientMismatch(
                g.ambient.to_string(),
                h.ambient.to_string(),
            ));
        }
        let a = g.a.iter().zip(&h.a).map(|(x, y)| (x + y).fract()).collect();
        self.element_from_a(a)
    }

    /// Product of elements whose carriers together span a cone. Fails with
    /// [`Error::NotACone`] when the union is every ray.
    pub fn multiply(
        &self,
        g: &LocalGroupElement,
        h: &LocalGroupElement,
    ) -> Result<LocalGroupElement> {
        let union = g.carrier.union_indices(&h.carrier);
        if union.len() > self.n() {
            return Err(Error::NotACone(
                g.carrier.to_string(),
                h.carrier.to_string(),
            ));
        }
        let sigma = self.canonical_ambient(&Cone(union));
        self.group_multiply(&self.reexpress(g, &sigma)?, &self.reexpress(h, &sigma)?)
    }

    pub fn inverse(&self, g: &LocalGroupElement) -> LocalGroupElement {
        let a =
            g.a.iter()
                .map(|x| {
                    if x.is_zero() {
                        Rat::zero()
                    } else {
                        Rat::one() - x
                    }
                })
                .collect();
        let mut inv = self.element_from_a(a).expect("inverse of a valid element");
        inv.ambient = g.ambient.clone();
        inv
    }

    /// g^p by repeated multiplication.
    pub fn power(&self, g: &LocalGroupElement, p: u64) -> LocalGroupElement {
        let mut acc = self.identity();
        for _ in 0..p {
            acc = self.multiply(&acc, g).expect("powers stay on the carrier");
        }
        acc
    }
}
