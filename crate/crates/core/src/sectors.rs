//! Twisted sectors and 3-multisectors.
//!
//! A sector is an orbit closure V(tau) together with an element of G_tau
//! whose coefficients are nonzero on every ray of tau. It is itself the
//! weighted projective space on the weights off tau.

use std::fmt;

use crate::error::{Error, Result};
use crate::fan::{tuple, Cone, Fan, LocalGroupElement};
use crate::ratlat::{gcd_u64, Rat};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwistedSector {
    g: LocalGroupElement,
    surviving: Vec<usize>,
    quotient_weights: Vec<u64>,
    d: u64,
    n: usize,
}

impl TwistedSector {
    /// Sector of a non-identity element.
    pub fn from_element(fan: &Fan, g: &LocalGroupElement) -> Result<Self> {
        if g.is_identity() {
            return Err(Error::InvalidCone(
                "the identity has no twisted sector".into(),
            ));
        }
        let surviving = g.carrier().complement(fan.num_rays());
        let quotient_weights: Vec<u64> = surviving.iter().map(|&i| fan.q(i)).collect();
        Ok(TwistedSector {
            g: g.clone(),
            d: gcd_u64(&quotient_weights),
            surviving,
            quotient_weights,
            n: fan.n(),
        })
    }

    pub fn g(&self) -> &LocalGroupElement {
        &self.g
    }

    pub fn carrier(&self) -> &Cone {
        self.g.carrier()
    }

    /// Rays off the carrier; the sector's homogeneous coordinates.
    pub fn surviving(&self) -> &[usize] {
        &self.surviving
    }

    /// Weights of the surviving rays.
    pub fn quotient_weights(&self) -> &[u64] {
        &self.quotient_weights
    }

    /// Full-length weight tuple with zeros on the carrier, as in P(2,0,4).
    pub fn padded_weights(&self) -> Vec<u64> {
        let mut w = vec![0; self.n + 1];
        for (&i, &q) in self.surviving.iter().zip(&self.quotient_weights) {
            w[i] = q;
        }
        w
    }

    /// Order of the generic stabilizer of the sector.
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn reduced_weights(&self) -> Vec<u64> {
        self.quotient_weights.iter().map(|q| q / self.d).collect()
    }

    pub fn dim(&self) -> usize {
        self.n - self.carrier().len()
    }

    pub fn iota(&self) -> Rat {
        self.g.iota()
    }

    pub fn key(&self) -> String {
        self.g.key()
    }
}

impl fmt::Display for TwistedSector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ~ P{} iota={}",
            self.key(),
            tuple(&self.padded_weights()),
            self.iota()
        )
    }
}

/// Degree shifting number: the sum of the carrier coefficients.
pub fn degree_shift(s: &TwistedSector) -> Rat {
    s.iota()
}

/// All twisted sectors, sorted by carrier and then coefficients.
pub fn enumerate_twisted_sectors(fan: &Fan) -> Result<Vec<TwistedSector>> {
    let rays = fan.num_rays();
    if rays >= usize::BITS as usize {
        return Err(Error::InvalidWeights(format!("{rays} weights is too many")));
    }
    let mut out = Vec::new();
    for mask in 1usize..(1 << rays) - 1 {
        let indices: Vec<usize> = (0..rays).filter(|i| mask >> i & 1 == 1).collect();
        let tau = fan.cone(&indices)?;
        if fan.local_group_order(&tau) == 1 {
            continue;
        }
        for g in fan.enumerate_group_elements(&tau)? {
            if g.carrier() == &tau {
                out.push(TwistedSector::from_element(fan, &g)?);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Resolves a user-facing name to an element: `1` (also `id`, `e`) for the
/// identity, `g<k>` for the k-th census entry (1-based), `g<k>^<p>` for a
/// power, or a canonical key.
pub fn find_element(fan: &Fan, census: &[TwistedSector], label: &str) -> Result<LocalGroupElement> {
    let label = label.trim();
    let unknown = || Error::UnknownSector {
        key: label.to_string(),
        valid: census.iter().map(TwistedSector::key).collect(),
    };
    if matches!(label, "1" | "id" | "e") {
        return Ok(fan.identity());
    }
    if let Some(rest) = label.strip_prefix('g') {
        let (index, power) = match rest.split_once('^') {
            Some((i, p)) => (i, p.parse::<u64>().map_err(|_| unknown())?),
            None => (rest, 1),
        };
        if let Ok(i) = index.parse::<usize>() {
            let s = i
                .checked_sub(1)
                .and_then(|i| census.get(i))
                .ok_or_else(unknown)?;
            return Ok(fan.power(s.g(), power));
        }
    }
    census
        .iter()
        .find(|s| s.key() == label)
        .map(|s| s.g().clone())
        .ok_or_else(unknown)
}

/// Ordered triple (g1, g2, g3) with g1 g2 g3 = 1 and a common fixed locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorTriple {
    g: [LocalGroupElement; 3],
    carrier: Cone,
    surviving: Vec<usize>,
    d: u64,
    n: usize,
}

impl SectorTriple {
    /// Completes (g1, g2) with g3 = (g1 g2)^-1. Fails with
    /// [`Error::NotACone`] when the two carriers share no fixed point.
    pub fn new(fan: &Fan, g1: &LocalGroupElement, g2: &LocalGroupElement) -> Result<Self> {
        let g3 = fan.inverse(&fan.multiply(g1, g2)?);
        let carrier = fan.cone(&g1.carrier().union_indices(g2.carrier()))?;
        let surviving = carrier.complement(fan.num_rays());
        let weights: Vec<u64> = surviving.iter().map(|&i| fan.q(i)).collect();
        Ok(SectorTriple {
            g: [g1.clone(), g2.clone(), g3],
            carrier,
            d: gcd_u64(&weights),
            surviving,
            n: fan.n(),
        })
    }

    pub fn g(&self, j: usize) -> &LocalGroupElement {
        &self.g[j]
    }

    pub fn elements(&self) -> &[LocalGroupElement; 3] {
        &self.g
    }

    /// Union of the three carriers.
    pub fn carrier(&self) -> &Cone {
        &self.carrier
    }

    pub fn surviving(&self) -> &[usize] {
        &self.surviving
    }

    /// Order of the generic stabilizer of the common fixed locus.
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.n - self.carrier.len()
    }

    pub fn iota_sum(&self) -> Rat {
        self.g.iter().map(LocalGroupElement::iota).sum()
    }

    /// Sum of the three coefficients on ray t: 0, 1 or 2.
    pub fn ray_sum(&self, t: usize) -> Rat {
        self.g.iter().map(|g| g.a_on(t).clone()).sum()
    }

    pub fn key(&self) -> String {
        let keys: Vec<String> = self.g.iter().map(LocalGroupElement::key).collect();
        keys.join(" | ")
    }
}

/// Every triple over ordered pairs of sector elements, identity included.
pub fn enumerate_triples(fan: &Fan) -> Result<Vec<SectorTriple>> {
    let mut elements = vec![fan.identity()];
    elements.extend(
        enumerate_twisted_sectors(fan)?
            .into_iter()
            .map(|s| s.g().clone()),
    );
    let mut out = Vec::new();
    for g1 in &elements {
        for g2 in &elements {
            match SectorTriple::new(fan, g1, g2) {
                Ok(t) => out.push(t),
                Err(Error::NotACone(..)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// Genus of the branched cover of the sphere with branching orders k1, k2, k3
/// and deck group of the given order: (2 + |K| - sum |K|/k_i) / 2.
pub fn covering_genus(k1: u64, k2: u64, k3: u64, group_order: u64) -> Result<Rat> {
    if group_order == 0
        || [k1, k2, k3]
            .iter()
            .any(|&k| k == 0 || !group_order.is_multiple_of(k))
    {
        return Err(Error::NonPositive(
            "covering_genus (branching orders must divide the group order)",
        ));
    }
    let sheets: u64 = [k1, k2, k3].iter().map(|k| group_order / k).sum();
    let euler = Rat::from(2 + group_order as i64) - Rat::from(sheets as i64);
    Ok(euler / Rat::from(2i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::frac_of(n, d)
    }

    #[test]
    fn census_of_p234() {
        let f = Fan::from_weights(&[2, 3, 4]).unwrap();
        let s = enumerate_twisted_sectors(&f).unwrap();
        let summary: Vec<(Vec<usize>, Vec<Rat>, Vec<u64>)> = s
            .iter()
            .map(|s| {
                (
                    s.carrier().rays().to_vec(),
                    s.g().carrier_coefficients(),
                    s.padded_weights(),
                )
            })
            .collect();
        assert_eq!(
            summary,
            vec![
                (vec![0, 1], vec![r(1, 2), r(1, 4)], vec![0, 0, 4]),
                (vec![0, 1], vec![r(1, 2), r(3, 4)], vec![0, 0, 4]),
                (vec![0, 2], vec![r(1, 3), r(2, 3)], vec![0, 3, 0]),
                (vec![0, 2], vec![r(2, 3), r(1, 3)], vec![0, 3, 0]),
                (vec![1], vec![r(1, 2)], vec![2, 0, 4]),
            ]
        );
        let iotas: Vec<Rat> = s.iter().map(degree_shift).collect();
        assert_eq!(iotas, vec![r(3, 4), r(5, 4), r(1, 1), r(1, 1), r(1, 2)]);
        assert_eq!(s[4].dim(), 1);
        assert_eq!(s[4].d(), 2);
        assert_eq!(s[4].reduced_weights(), vec![1, 2]);
    }

    #[test]
    fn smooth_projective_space_has_no_sectors() {
        let f = Fan::from_weights(&[1, 1, 1, 1]).unwrap();
        assert!(enumerate_twisted_sectors(&f).unwrap().is_empty());
    }

    #[test]
    fn census_of_122333() {
        let f = Fan::from_weights(&[1, 2, 2, 3, 3, 3]).unwrap();
        let s = enumerate_twisted_sectors(&f).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].key(), "carrier=[0,1,2];a=[1/3,2/3,2/3]");
        assert_eq!(s[1].key(), "carrier=[0,1,2];a=[2/3,1/3,1/3]");
        assert_eq!(s[2].key(), "carrier=[0,3,4,5];a=[1/2,1/2,1/2,1/2]");
        let iotas: Vec<Rat> = s.iter().map(TwistedSector::iota).collect();
        assert_eq!(iotas, vec![r(5, 3), r(4, 3), r(2, 1)]);
        assert_eq!(s[0].padded_weights(), vec![0, 0, 0, 3, 3, 3]);
        assert_eq!(s[2].padded_weights(), vec![0, 2, 2, 0, 0, 0]);
    }

    #[test]
    fn inverse_pairs_fill_the_codimension() {
        for q in [
            &[2u64, 3, 4][..],
            &[2, 3, 5],
            &[1, 2, 2, 3, 3, 3],
            &[3, 4, 6, 9],
        ] {
            let f = Fan::from_weights(q).unwrap();
            let s = enumerate_twisted_sectors(&f).unwrap();
            for x in &s {
                let inv = f.inverse(x.g());
                assert!(s.iter().any(|y| y.g() == &inv));
                assert_eq!(x.iota() + inv.iota(), Rat::from(x.carrier().len() as i64));
            }
        }
    }

    #[test]
    fn triples_of_122333() {
        let f = Fan::from_weights(&[1, 2, 2, 3, 3, 3]).unwrap();
        let s = enumerate_twisted_sectors(&f).unwrap();
        let t = enumerate_triples(&f).unwrap();
        let has = |a: &LocalGroupElement, b: &LocalGroupElement, c: &LocalGroupElement| {
            t.iter()
                .any(|x| x.elements() == &[a.clone(), b.clone(), c.clone()])
        };
        let (g1, g1sq, g2, id) = (s[0].g(), s[1].g(), s[2].g(), &f.identity());
        assert!(has(g1, g1, g1));
        assert!(has(g1sq, g1sq, g1sq));
        assert!(has(g1, g1sq, id));
        assert!(has(g2, g2, id));
        let t3 = SectorTriple::new(&f, g1, g1).unwrap();
        assert_eq!(t3.iota_sum(), r(5, 1));
        assert_eq!(t3.dim(), 2);
        assert_eq!(t3.d(), 3);
        // g1 and g2 fix no common point.
        assert!(matches!(
            SectorTriple::new(&f, g1, g2),
            Err(Error::NotACone(..))
        ));
    }

    #[test]
    fn identity_completes_every_sector() {
        let f = Fan::from_weights(&[2, 3, 5]).unwrap();
        let t = enumerate_triples(&f).unwrap();
        for s in enumerate_twisted_sectors(&f).unwrap() {
            let inv = f.inverse(s.g());
            assert!(t
                .iter()
                .any(|x| x.elements() == &[s.g().clone(), f.identity(), inv.clone()]));
        }
        assert!(t.iter().all(|x| x.dim() == 0 || x.carrier().is_empty()));
        // The Z3 point: three copies of the element with coefficients 1/3.
        let z3 = f.element_from_a(vec![r(1, 3), r(0, 1), r(1, 3)]).unwrap();
        let triple = SectorTriple::new(&f, &z3, &z3).unwrap();
        assert_eq!(triple.g(2), &z3);
        assert_eq!(triple.iota_sum(), r(2, 1));
    }

    #[test]
    fn labels() {
        let f = Fan::from_weights(&[1, 2, 2, 3, 3, 3]).unwrap();
        let s = enumerate_twisted_sectors(&f).unwrap();
        assert_eq!(find_element(&f, &s, "g1").unwrap(), *s[0].g());
        assert_eq!(find_element(&f, &s, "g1^2").unwrap(), *s[1].g());
        assert_eq!(find_element(&f, &s, "g1^3").unwrap(), f.identity());
        assert_eq!(find_element(&f, &s, "id").unwrap(), f.identity());
        assert_eq!(find_element(&f, &s, &s[2].key()).unwrap(), *s[2].g());
        for bad in ["g0", "g4", "g1^x", "carrier=[0];a=[1/2]", "h"] {
            match find_element(&f, &s, bad) {
                Err(Error::UnknownSector { valid, .. }) => assert_eq!(valid.len(), 3),
                other => panic!("{bad}: {other:?}"),
            }
        }
    }

    #[test]
    fn genus() {
        assert_eq!(covering_genus(3, 3, 3, 3).unwrap(), r(1, 1));
        assert_eq!(covering_genus(1, 1, 1, 1).unwrap(), r(0, 1));
        assert_eq!(covering_genus(2, 4, 4, 4).unwrap(), r(1, 1));
        assert!(covering_genus(3, 3, 3, 4).is_err());
    }
}
