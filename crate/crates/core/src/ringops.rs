//! Obstruction bundles, torus localization and the orbifold cup product.
//!
//! A class on a sector is a product of toric divisors D_k. On the sector
//! with surviving rays S (weights q_S, gcd d) the reduced space is P(w) with
//! w = q_S / d, carrying torus divisors E_k for k in S. Surviving D_k become
//! E_k; a carrier ray t becomes (q_t / q_s) E_s where s is the last surviving
//! ray. Integrals over the sector are 1/d times integrals over P(w), which
//! are computed by summing over the n'+1 torus fixed points at random exact
//! rational torus weights and checking the answer at a second draw.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::l_values;
use crate::error::{Error, Result};
use crate::fan::{Fan, LocalGroupElement, WeightSystem};
use crate::ratlat::{gcd_u64, Rat};
use crate::sectors::{enumerate_twisted_sectors, SectorTriple};

/// (1, q0, .., qn) when q0 > 1, with the map old index -> new index.
pub fn embed_if_needed(w: &WeightSystem) -> Result<(WeightSystem, Vec<usize>)> {
    let q = w.q();
    if q[0] == 1 {
        return Ok((w.clone(), (0..q.len()).collect()));
    }
    let mut big = vec![1];
    big.extend_from_slice(q);
    let embedded = crate::fan::normalize_weights(&big)?;
    Ok((embedded, (1..=q.len()).collect()))
}

/// The phase c in [0,1) of an element: a_k = frac(c q_k) on every ray.
pub fn phase(fan: &Fan, g: &LocalGroupElement) -> Rat {
    // Bezout coefficients u with sum u_k q_k = 1 give c = frac(sum u_k a_k).
    let mut u = vec![BigInt::zero(); fan.num_rays()];
    let mut g_acc = BigInt::zero();
    for k in 0..fan.num_rays() {
        let e = g_acc.extended_gcd(&BigInt::from(fan.q(k)));
        for x in u.iter_mut().take(k) {
            *x *= &e.x;
        }
        u[k] = e.y;
        g_acc = e.gcd;
    }
    (0..fan.num_rays())
        .map(|k| Rat::from(u[k].clone()) * g.a_on(k))
        .sum::<Rat>()
        .fract()
}

/// Carries an element of P(Q) to P(1,Q) by its phase.
pub fn embed_element(
    small: &Fan,
    big: &Fan,
    index_map: &[usize],
    g: &LocalGroupElement,
) -> Result<LocalGroupElement> {
    let mut a = vec![Rat::zero(); big.num_rays()];
    for (i, &j) in index_map.iter().enumerate() {
        a[j] = g.a_on(i).clone();
    }
    if index_map.len() < big.num_rays() {
        a[0] = phase(small, g);
    }
    big.element_from_a(a)
}

/// sum_k c_k D_k over the rays of the fan.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EquivariantDivisor {
    coeffs: BTreeMap<usize, Rat>,
}

impl EquivariantDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Rat)>) -> Self {
        let mut d = Self::new();
        for (k, c) in terms {
            d.add(k, c);
        }
        d
    }

    /// D_S = sum of D_k over k in S.
    pub fn sum_of(rays: &[usize]) -> Self {
        Self::from_terms(rays.iter().map(|&k| (k, Rat::one())))
    }

    pub fn add(&mut self, k: usize, c: Rat) {
        let e = self.coeffs.entry(k).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }
}

impl fmt::Display for EquivariantDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(k, c)| format!("{c}*D{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// scalar * product of divisors, a class on some sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorClass {
    pub scalar: Rat,
    pub factors: Vec<EquivariantDivisor>,
}

impl SectorClass {
    pub fn one() -> Self {
        SectorClass {
            scalar: Rat::one(),
            factors: Vec::new(),
        }
    }

    pub fn divisor(d: EquivariantDivisor) -> Self {
        SectorClass {
            scalar: Rat::one(),
            factors: vec![d],
        }
    }

    pub fn power(d: &EquivariantDivisor, m: usize) -> Self {
        SectorClass {
            scalar: Rat::one(),
            factors: vec![d.clone(); m],
        }
    }

    pub fn times(&self, other: &SectorClass) -> SectorClass {
        SectorClass {
            scalar: &self.scalar * &other.scalar,
            factors: self.factors.iter().chain(&other.factors).cloned().collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }
}

/// m-th power of D_S on the sector of g, S the rays off its carrier.
pub fn sector_class(fan: &Fan, g: &LocalGroupElement, m: usize) -> SectorClass {
    let s = g.carrier().complement(fan.num_rays());
    SectorClass::power(&EquivariantDivisor::sum_of(&s), m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionSummand {
    /// Carrier ray t with a_t(g1) + a_t(g2) + a_t(g3) = 2.
    pub ray: usize,
    /// q_t.
    pub exponent: u64,
    /// Order of g -> exp(2 pi i a_t(g)) on the local group of the carrier.
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionBundle {
    pub summands: Vec<ObstructionSummand>,
    pub rank: usize,
}

impl ObstructionBundle {
    pub fn trivial() -> Self {
        ObstructionBundle {
            summands: Vec::new(),
            rank: 0,
        }
    }

    pub fn order_product(&self) -> u64 {
        self.summands.iter().map(|s| s.order).product()
    }
}

/// Line-bundle summands over the triple's fixed locus. The rank is checked
/// against dim - n + sum of the three degree shifts.
pub fn obstruction_bundle(fan: &Fan, t: &SectorTriple) -> Result<ObstructionBundle> {
    let two = Rat::from(2i64);
    let rays: Vec<usize> = t
        .carrier()
        .rays()
        .iter()
        .copied()
        .filter(|&r| t.ray_sum(r) == two)
        .collect();
    let formula = Rat::from(t.dim() as i64) - Rat::from(fan.n() as i64) + t.iota_sum();
    if formula != Rat::from(rays.len() as i64) {
        return Err(Error::Internal(format!(
            "obstruction rank {formula} from degree shifts, {} from ray sums",
            rays.len()
        )));
    }
    let group = if rays.is_empty() {
        Vec::new()
    } else {
        fan.enumerate_group_elements(t.carrier())?
    };
    let summands = rays
        .iter()
        .map(|&r| {
            let order = group
                .iter()
                .fold(BigInt::one(), |acc, g| acc.lcm(g.a_on(r).denom()));
            ObstructionSummand {
                ray: r,
                exponent: fan.q(r),
                order: u64::try_from(order).expect("order divides a weight"),
            }
        })
        .collect();
    Ok(ObstructionBundle {
        summands,
        rank: rays.len(),
    })
}

/// Data at the torus fixed point p_j of a reduced sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointData {
    /// Ray index of the coordinate that is nonzero at the point.
    pub point: usize,
    /// Tangent weights as linear forms in the torus parameters, one
    /// coefficient per surviving ray.
    pub euler_class: Vec<Vec<Rat>>,
    /// Order of the local group at the point.
    pub local_order: u64,
}

/// The sector P(q_S) reduced to P(q_S / d), surviving rays in a chosen
/// order whose last entry plays the distinguished role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSector {
    rays: Vec<usize>,
    q: Vec<u64>,
    d: u64,
}

impl ReducedSector {
    /// Surviving rays in ascending order.
    pub fn new(fan: &Fan, surviving: &[usize]) -> Result<Self> {
        let mut rays = surviving.to_vec();
        rays.sort_unstable();
        Self::ordered(fan, rays)
    }

    /// Surviving rays in the given order.
    pub fn ordered(fan: &Fan, rays: Vec<usize>) -> Result<Self> {
        if rays.is_empty() || rays.iter().any(|&k| k >= fan.num_rays()) {
            return Err(Error::InvalidCone(format!("bad surviving set {rays:?}")));
        }
        let q: Vec<u64> = rays.iter().map(|&k| fan.q(k)).collect();
        Ok(ReducedSector {
            d: gcd_u64(&q),
            rays,
            q,
        })
    }

    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.rays.len() - 1
    }

    /// Reduced weights w = q_S / d.
    pub fn weights(&self) -> Vec<u64> {
        self.q.iter().map(|x| x / self.d).collect()
    }

    fn last(&self) -> usize {
        self.rays.len() - 1
    }

    /// Coefficients on E_k (by position) of the restriction of D.
    pub fn restrict(&self, fan: &Fan, d: &EquivariantDivisor) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.rays.len()];
        let qs = Rat::from(self.q[self.last()]);
        for (k, c) in d.terms() {
            match self.rays.iter().position(|&r| r == k) {
                Some(p) => out[p] += c,
                None => out[self.last()] += c * Rat::from(fan.q(k)) / &qs,
            }
        }
        out
    }

    /// Fixed points with tangent weights mu_k - (w_k / w_j) mu_j.
    ///
    /// The local order w_j is checked against the group of the maximal cone
    /// at p_j divided by the generic stabilizer.
    pub fn fixed_points(&self, fan: &Fan) -> Result<Vec<FixedPointData>> {
        let w = self.weights();
        let m = self.rays.len();
        let mut out = Vec::with_capacity(m);
        for j in 0..m {
            let local = fan.local_group_order(&fan.maximal_cone(self.rays[j]));
            if !local.is_multiple_of(self.d) || local / self.d != w[j] {
                return Err(Error::Internal(format!(
                    "local order at p_{} is {local}/{}, reduced weight is {}",
                    self.rays[j], self.d, w[j]
                )));
            }
            let euler_class = (0..m)
                .filter(|&k| k != j)
                .map(|k| self.restriction_form(&w, k, j))
                .collect();
            out.push(FixedPointData {
                point: self.rays[j],
                euler_class,
                local_order: w[j],
            });
        }
        Ok(out)
    }

    /// Linear form of E_k restricted to p_j (positions).
    fn restriction_form(&self, w: &[u64], k: usize, j: usize) -> Vec<Rat> {
        let mut f = vec![Rat::zero(); w.len()];
        if k != j {
            f[k] = Rat::one();
            f[j] = -Rat::new(w[k], w[j]).expect("positive weight");
        }
        f
    }
}

fn eval_form(form: &[Rat], mu: &[Rat]) -> Rat {
    form.iter().zip(mu).map(|(a, b)| a * b).sum()
}

/// Integrand on a reduced sector: scalar times a product of divisors, each
/// given by its E-coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integrand {
    pub scalar: Rat,
    pub factors: Vec<Vec<Rat>>,
}

impl Integrand {
    /// Pulls classes and obstruction summands back to the reduced sector.
    pub fn build(
        fan: &Fan,
        sector: &ReducedSector,
        classes: &[&SectorClass],
        obstruction: &ObstructionBundle,
    ) -> Self {
        let mut scalar = Rat::one();
        let mut factors = Vec::new();
        for c in classes {
            scalar *= &c.scalar;
            factors.extend(c.factors.iter().map(|d| sector.restrict(fan, d)));
        }
        // Each summand is d_l (q_t / q_s) E_s.
        let last = sector.last();
        let qs = Rat::from(sector.q[last]);
        for s in &obstruction.summands {
            let mut f = vec![Rat::zero(); sector.rays.len()];
            f[last] = Rat::from(s.order * s.exponent) / &qs;
            factors.push(f);
        }
        Integrand { scalar, factors }
    }
}

/// One evaluation of the fixed-point sum at torus weights `mu`, one per
/// surviving position. None when a tangent weight vanishes.
pub fn localize_at(
    fan: &Fan,
    sector: &ReducedSector,
    integrand: &Integrand,
    mu: &[Rat],
) -> Result<Option<Rat>> {
    let w = sector.weights();
    let mut total = Rat::zero();
    for (j, p) in sector.fixed_points(fan)?.iter().enumerate() {
        let mut den = Rat::from(p.local_order);
        for form in &p.euler_class {
            let x = eval_form(form, mu);
            if x.is_zero() {
                return Ok(None);
            }
            den *= &x;
        }
        let mut num = integrand.scalar.clone();
        for f in &integrand.factors {
            let x: Rat = f
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| c * eval_form(&sector.restriction_form(&w, k, j), mu))
                .sum();
            num *= &x;
        }
        total += num / den;
    }
    Ok(Some(total))
}

/// Result of an integral; zero with `degree_mismatch` when the integrand
/// has the wrong degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integral {
    pub value: Rat,
    pub degree_mismatch: bool,
}

/// 64-bit FNV-1a, used to derive per-integral seeds from canonical keys.
pub fn seed_for(seed: u64, key: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in key.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    seed ^ h
}

const POLE_RETRIES: usize = 64;

fn draw_mu(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rat> {
    let mut mu: Vec<Rat> = (0..len)
        .map(|_| Rat::frac_of(rng.gen_range(-997..=997), rng.gen_range(1..=89)))
        .collect();
    // The last surviving ray is the reference point.
    if let Some(x) = mu.last_mut() {
        *x = Rat::zero();
    }
    mu
}

/// Integral over the reduced sector by localization, checked at two
/// independent torus weights. The 1/d and 1/prod d_l factors are not
/// applied here.
pub fn localize_integral(
    fan: &Fan,
    sector: &ReducedSector,
    integrand: &Integrand,
    rng_seed: u64,
) -> Result<Integral> {
    if integrand.factors.len() != sector.dim() {
        return Ok(Integral {
            value: Rat::zero(),
            degree_mismatch: true,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut values = Vec::with_capacity(2);
    let mut tries = 0;
    while values.len() < 2 {
        tries += 1;
        if tries > POLE_RETRIES {
            return Err(Error::Internal("no pole-free torus weights found".into()));
        }
        let mu = draw_mu(&mut rng, sector.rays.len());
        if let Some(v) = localize_at(fan, sector, integrand, &mu)? {
            values.push(v);
        }
    }
    if values[0] != values[1] {
        return Err(Error::Internal(format!(
            "localization depends on torus weights: {} vs {}",
            values[0], values[1]
        )));
    }
    Ok(Integral {
        value: values.swap_remove(0),
        degree_mismatch: false,
    })
}

/// Orbifold integral of a class over the sector of g (the whole space for
/// the identity): 1/d times the reduced integral.
pub fn sector_integral(
    fan: &Fan,
    g: &LocalGroupElement,
    class: &SectorClass,
    seed: u64,
) -> Result<Integral> {
    let sector = ReducedSector::new(fan, &g.carrier().complement(fan.num_rays()))?;
    let integrand = Integrand::build(fan, &sector, &[class], &ObstructionBundle::trivial());
    let mut out = localize_integral(fan, &sector, &integrand, seed_for(seed, &g.key()))?;
    out.value = out.value / Rat::from(sector.d());
    Ok(out)
}

/// Poincare pairing of alpha on the sector of g with beta on the sector of
/// g^-1 (the same space).
pub fn pairing(
    fan: &Fan,
    g: &LocalGroupElement,
    alpha: &SectorClass,
    beta: &SectorClass,
    seed: u64,
) -> Result<Rat> {
    Ok(sector_integral(fan, g, &alpha.times(beta), seed)?.value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreePoint {
    pub value: Rat,
    pub obstruction_rank: usize,
    pub degree_mismatch: bool,
    /// Sum of the degree shifts exceeds n, so the product vanishes.
    pub vanishing: bool,
}

/// <eta1, eta2, eta3> on the triple: (1 / prod d_l)(1 / d) times the
/// reduced integral of eta1 eta2 eta3 against the obstruction Euler class.
pub fn three_point(
    fan: &Fan,
    t: &SectorTriple,
    classes: [&SectorClass; 3],
    seed: u64,
) -> Result<ThreePoint> {
    let obstruction = obstruction_bundle(fan, t)?;
    if t.iota_sum() > Rat::from(fan.n() as i64) {
        return Ok(ThreePoint {
            value: Rat::zero(),
            obstruction_rank: obstruction.rank,
            degree_mismatch: false,
            vanishing: true,
        });
    }
    let sector = ReducedSector::new(fan, t.surviving())?;
    let integrand = Integrand::build(fan, &sector, &classes, &obstruction);
    let integral = localize_integral(fan, &sector, &integrand, seed_for(seed, &t.key()))?;
    let scale = Rat::from(obstruction.order_product() * sector.d());
    Ok(ThreePoint {
        value: integral.value / scale,
        obstruction_rank: obstruction.rank,
        degree_mismatch: integral.degree_mismatch,
        vanishing: false,
    })
}

/// Cup product of degree-zero point classes when the weights are pairwise
/// coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MutuallyPrimeProduct {
    Zero,
    /// coeff times the unit of the named sector.
    Sector {
        key: String,
        coeff: Rat,
    },
    /// The untwisted top-degree class with orbifold integral 1/q_i.
    IsotropyPointClass {
        point: usize,
    },
}

/// Closed form: classes at different isotropy points multiply to zero; at
/// the same point the product is the unit of the (g1 g2)-sector when the
/// three degree shifts sum to n, and the point class when g1 g2 = 1.
pub fn mutually_prime_product(
    fan: &Fan,
    g1: &LocalGroupElement,
    g2: &LocalGroupElement,
) -> Result<MutuallyPrimeProduct> {
    if !fan.weights().is_pairwise_coprime() {
        return Err(Error::InvalidWeights(format!(
            "{} is not pairwise coprime",
            fan.weights()
        )));
    }
    for g in [g1, g2] {
        if g.carrier().len() != fan.n() {
            return Err(Error::InvalidCone(format!(
                "{} is not a point sector",
                g.key()
            )));
        }
    }
    if g1.carrier() != g2.carrier() {
        return Ok(MutuallyPrimeProduct::Zero);
    }
    let point = g1.carrier().complement(fan.num_rays())[0];
    let h = fan.multiply(g1, g2)?;
    if h.is_identity() {
        return Ok(MutuallyPrimeProduct::IsotropyPointClass { point });
    }
    let total = g1.iota() + g2.iota() + fan.inverse(&h).iota();
    if total == Rat::from(fan.n() as i64) {
        Ok(MutuallyPrimeProduct::Sector {
            key: h.key(),
            coeff: Rat::one(),
        })
    } else {
        Ok(MutuallyPrimeProduct::Zero)
    }
}

/// Closed-form pairing of degree-zero point classes for pairwise coprime
/// weights: 1/q_i when g2 = g1^-1 at the point p_i, else 0.
pub fn mutually_prime_pairing(
    fan: &Fan,
    g1: &LocalGroupElement,
    g2: &LocalGroupElement,
) -> Result<Rat> {
    if !fan.weights().is_pairwise_coprime() {
        return Err(Error::InvalidWeights(format!(
            "{} is not pairwise coprime",
            fan.weights()
        )));
    }
    if g1.carrier().len() != fan.n() || fan.inverse(g1).key() != g2.key() {
        return Ok(Rat::zero());
    }
    let point = g1.carrier().complement(fan.num_rays())[0];
    Rat::new(1, fan.q(point))
}

/// Coefficient c with xi_k = c D^k on the untwisted sector, D the sum of
/// all toric divisors: xi_k = l_k H^k and D = (sum q) H.
pub fn xi_in_d_basis(w: &WeightSystem, k: usize) -> Rat {
    let l = l_values(w);
    Rat::from(l[k].clone()) / Rat::from(w.sum()).pow(k as u32)
}

/// Basis vector (g, m): the m-th power of D_S on the sector of g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisClass {
    pub element: LocalGroupElement,
    /// Index into the sector census, None for the untwisted sector.
    pub sector: Option<usize>,
    pub power: usize,
    /// Orbifold degree 2m + 2 iota.
    pub degree: Rat,
}

impl BasisClass {
    pub fn label(&self) -> String {
        match self.sector {
            None => format!("D^{}", self.power),
            Some(i) => format!("g{}*D^{}", i + 1, self.power),
        }
    }
}

/// Structure constants b1 * b2 = sum c b3 over the sector basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupTable {
    pub basis: Vec<BasisClass>,
    pub constants: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
    /// <(g,m), (g^-1, dim - m)> for every basis vector (g, m).
    pub pairings: Vec<Rat>,
}

impl CupTable {
    pub fn index_of(&self, g: &LocalGroupElement, power: usize) -> Option<usize> {
        let key = g.key();
        self.basis
            .iter()
            .position(|b| b.element.key() == key && b.power == power)
    }

    /// Product of two basis vectors as a dense coefficient vector.
    pub fn product_basis(&self, i: usize, j: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.basis.len()];
        if let Some(terms) = self.constants.get(&(i, j)) {
            for (k, c) in terms {
                out[*k] += c;
            }
        }
        out
    }

    /// Bilinear extension to dense vectors.
    pub fn product(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.basis.len()];
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                if let Some(terms) = self.constants.get(&(i, j)) {
                    let xy = xi * yj;
                    for (k, c) in terms {
                        out[*k] += &xy * c;
                    }
                }
            }
        }
        out
    }

    pub fn unit_vector(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.basis.len()];
        v[i] = Rat::one();
        v
    }

    /// First basis triple (a, b, c) with (ab)c != a(bc), if any.
    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.basis.len();
        let products: Vec<Vec<Vec<Rat>>> = (0..n)
            .map(|i| (0..n).map(|j| self.product_basis(i, j)).collect())
            .collect();
        for (a, row) in products.iter().enumerate() {
            for (b, ab) in row.iter().enumerate() {
                for (c, bc) in products[b].iter().enumerate() {
                    let left = self.product(ab, &self.unit_vector(c));
                    let right = self.product(&self.unit_vector(a), bc);
                    if left != right {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Dense vector of a closed-form product from [`mutually_prime_product`].
    pub fn express(&self, fan: &Fan, p: &MutuallyPrimeProduct) -> Result<Vec<Rat>> {
        let mut v = vec![Rat::zero(); self.basis.len()];
        match p {
            MutuallyPrimeProduct::Zero => {}
            MutuallyPrimeProduct::Sector { key, coeff } => {
                let i = self
                    .basis
                    .iter()
                    .position(|b| &b.element.key() == key && b.power == 0)
                    .ok_or_else(|| Error::UnknownSector {
                        key: key.clone(),
                        valid: self.basis.iter().map(|b| b.element.key()).collect(),
                    })?;
                v[i] = coeff.clone();
            }
            MutuallyPrimeProduct::IsotropyPointClass { point } => {
                let n = fan.n();
                let top = self
                    .index_of(&fan.identity(), n)
                    .ok_or_else(|| Error::Internal("missing top class".into()))?;
                let sigma = Rat::from(fan.weights().sum());
                v[top] = Rat::from(fan.weights().product())
                    / (Rat::from(fan.q(*point)) * sigma.pow(n as u32));
            }
        }
        Ok(v)
    }
}

/// The full cup product table in the D-power basis of every sector.
///
/// b1 * b2 lands on the sector of h = g1 g2; its coefficient on (h, dim - m)
/// is <b1, b2, (h^-1, m)> divided by the pairing of (h^-1, m) with (h, dim - m).
/// Products of elements with no common fixed point vanish.
pub fn cup_table(fan: &Fan, seed: u64) -> Result<CupTable> {
    let mut elements: Vec<(Option<usize>, LocalGroupElement)> = vec![(None, fan.identity())];
    elements.extend(
        enumerate_twisted_sectors(fan)?
            .into_iter()
            .enumerate()
            .map(|(i, s)| (Some(i), s.g().clone())),
    );
    let n = fan.n();
    let mut basis = Vec::new();
    for (sector, g) in &elements {
        let dim = n - g.carrier().len();
        for m in 0..=dim {
            basis.push(BasisClass {
                element: g.clone(),
                sector: *sector,
                power: m,
                degree: Rat::from(2 * m as i64) + Rat::from(2i64) * g.iota(),
            });
        }
    }
    let index: HashMap<(String, usize), usize> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| ((b.element.key(), b.power), i))
        .collect();
    let classes: Vec<SectorClass> = basis
        .iter()
        .map(|b| sector_class(fan, &b.element, b.power))
        .collect();

    let mut pairings = Vec::with_capacity(basis.len());
    for (b, class) in basis.iter().zip(&classes) {
        let dim = n - b.element.carrier().len();
        let dual = sector_class(fan, &fan.inverse(&b.element), dim - b.power);
        let p = pairing(fan, &b.element, class, &dual, seed)?;
        if p.is_zero() {
            return Err(Error::Internal(format!(
                "degenerate pairing at {}",
                b.label()
            )));
        }
        pairings.push(p);
    }

    let mut constants = BTreeMap::new();
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            let t = match SectorTriple::new(fan, &bi.element, &bj.element) {
                Ok(t) => t,
                Err(Error::NotACone(..)) => continue,
                Err(e) => return Err(e),
            };
            let g3 = t.g(2).clone();
            let h = fan.inverse(&g3);
            let dim3 = n - g3.carrier().len();
            let mut terms = Vec::new();
            for m3 in 0..=dim3 {
                let k3 = index[&(g3.key(), m3)];
                let v = three_point(fan, &t, [&classes[i], &classes[j], &classes[k3]], seed)?;
                if v.value.is_zero() {
                    continue;
                }
                let target = index[&(h.key(), dim3 - m3)];
                terms.push((target, v.value / &pairings[k3]));
            }
            if !terms.is_empty() {
                constants.insert((i, j), terms);
            }
        }
    }
    Ok(CupTable {
        basis,
        constants,
        pairings,
    })
}
