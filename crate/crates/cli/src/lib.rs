//! Command-line front end: argument parsing, report assembly and rendering.

pub mod args;
pub mod report;
mod text;

use std::fmt;

use wporb::cohomology::{betti_table, ordinary_ring, poincare_polynomial};
use wporb::fan::{Fan, LocalGroupElement};
use wporb::ringops::{
    cup_table, mutually_prime_pairing, mutually_prime_product, obstruction_bundle, phase,
    sector_integral, three_point, xi_in_d_basis, EquivariantDivisor, MutuallyPrimeProduct,
    SectorClass,
};
use wporb::sectors::{enumerate_twisted_sectors, find_element, SectorTriple, TwistedSector};
use wporb::{Error, Rat};

pub use args::{Cli, Command};
pub use report::Report;
use report::*;

pub const EXIT_PARSE: u8 = 1;
pub const EXIT_KEY: u8 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    UnknownKey { key: String, valid: Vec<String> },
    Compute(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::UnknownKey { .. } => EXIT_KEY,
            CliError::Usage(_) | CliError::Compute(_) => EXIT_PARSE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownSector { key, valid } => CliError::UnknownKey { key, valid },
            Error::InvalidWeights(m) | Error::Parse(m) => CliError::Usage(m),
            other => CliError::Compute(other),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}\n\nFor more information, try '--help'."),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::UnknownKey { key, valid } => {
                writeln!(f, "unknown sector '{key}'. Valid names:")?;
                write!(f, "  1  (untwisted sector)")?;
                for (i, k) in valid.iter().enumerate() {
                    write!(f, "\n  g{}  {k}", i + 1)?;
                }
                Ok(())
            }
        }
    }
}

/// Runs a parsed command line and returns what goes to stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let report = build_report(cli)?;
    Ok(if cli.opts.json {
        report.to_json()
    } else {
        text::render(&report)
    })
}

pub fn build_report(cli: &Cli) -> Result<Report, CliError> {
    let given = cli
        .opts
        .weights
        .as_ref()
        .ok_or_else(|| CliError::Usage("the argument '--weights <WEIGHTS>' is required".into()))?
        .0
        .clone();
    let fan = Fan::from_weights(&given)?;
    let census = enumerate_twisted_sectors(&fan)?;
    let seed = cli.opts.seed;
    let mut report = Report {
        weights: WeightsSection {
            given,
            normalized: fan.weights().q().to_vec(),
        },
        seed,
        fan: None,
        sectors: None,
        betti: None,
        ring: None,
        three_point: None,
        integral: None,
    };
    let full = cli.command.is_none();
    let cmd = cli.command;
    if full || cmd == Some(Command::Fan) {
        report.fan = Some(fan_section(&fan));
    }
    if full || matches!(cmd, Some(Command::Sectors | Command::Ring)) {
        report.sectors = Some(sector_entries(&fan, &census));
    }
    if full || cmd == Some(Command::Betti) {
        report.betti = Some(betti_section(&fan)?);
    }
    if full || cmd == Some(Command::Ring) {
        report.ring = Some(ring_section(&fan, &census, seed)?);
    }
    if cmd == Some(Command::Threepoint) {
        report.three_point = Some(three_point_section(cli, &fan, &census)?);
    }
    if cmd == Some(Command::Integrate) {
        report.integral = Some(integral_section(cli, &fan, &census)?);
    }
    Ok(report)
}

fn fan_section(fan: &Fan) -> FanSection {
    let ints = |rows: Vec<Vec<num_bigint::BigInt>>| -> Vec<Vec<JsonInt>> {
        rows.into_iter()
            .map(|r| r.into_iter().map(JsonInt).collect())
            .collect()
    };
    FanSection {
        rays: ints(fan.rays().to_vec()),
        c0: ints(fan.c0().to_rows()),
        maximal_cones: (0..fan.num_rays())
            .map(|k| {
                let sigma = fan.maximal_cone(k);
                ConeEntry {
                    order: fan.local_group_order(&sigma),
                    rays: sigma.rays().to_vec(),
                }
            })
            .collect(),
    }
}

fn sector_entries(fan: &Fan, census: &[TwistedSector]) -> Vec<SectorEntry> {
    census
        .iter()
        .enumerate()
        .map(|(i, s)| SectorEntry {
            label: format!("g{}", i + 1),
            key: s.key(),
            carrier: s.carrier().rays().to_vec(),
            a: s.g().carrier_coefficients(),
            phase: phase(fan, s.g()),
            quotient_weights: s.padded_weights(),
            order: s.d(),
            iota: s.iota(),
            dim: s.dim(),
        })
        .collect()
}

fn betti_section(fan: &Fan) -> Result<BettiSection, CliError> {
    let table = betti_table(fan)?;
    Ok(BettiSection {
        entries: poincare_polynomial(&table)
            .into_iter()
            .map(|(degree, dim)| BettiEntry { degree, dim })
            .collect(),
        total: table.total(),
    })
}

fn label_of(census: &[TwistedSector], g: &LocalGroupElement) -> String {
    if g.is_identity() {
        return "1".into();
    }
    let key = g.key();
    census
        .iter()
        .position(|s| s.key() == key)
        .map(|i| format!("g{}", i + 1))
        .unwrap_or(key)
}

fn ring_section(fan: &Fan, census: &[TwistedSector], seed: u64) -> Result<RingSection, CliError> {
    let w = fan.weights();
    let ring = ordinary_ring(w);
    let table = cup_table(fan, seed)?;
    let basis = table
        .basis
        .iter()
        .zip(&table.pairings)
        .map(|(b, p)| BasisEntry {
            label: match (b.sector, b.power) {
                (None, 0) => "1".into(),
                _ => b.label(),
            },
            key: b.element.key(),
            power: b.power,
            degree: b.degree.clone(),
            pairing: p.clone(),
        })
        .collect();
    let products = table
        .constants
        .iter()
        .map(|(&(left, right), terms)| ProductEntry {
            left,
            right,
            terms: terms
                .iter()
                .map(|(k, c)| Term {
                    basis: *k,
                    coeff: c.clone(),
                })
                .collect(),
        })
        .collect();
    let point_relations = if w.is_pairwise_coprime() {
        Some(point_relations(fan, census)?)
    } else {
        None
    };
    Ok(RingSection {
        l: ring.l().iter().cloned().map(JsonInt).collect(),
        e: ring.table().to_vec(),
        xi_in_d: (0..=fan.n()).map(|k| xi_in_d_basis(w, k)).collect(),
        cup: CupSection { basis, products },
        point_relations,
    })
}

fn point_relations(fan: &Fan, census: &[TwistedSector]) -> Result<Vec<Relation>, CliError> {
    let points: Vec<&LocalGroupElement> = census
        .iter()
        .map(TwistedSector::g)
        .filter(|g| g.carrier().len() == fan.n())
        .collect();
    let mut out = Vec::new();
    for (i, x) in points.iter().enumerate() {
        for y in &points[i..] {
            let product = match mutually_prime_product(fan, x, y)? {
                MutuallyPrimeProduct::Zero => continue,
                MutuallyPrimeProduct::Sector { key, coeff } if coeff == Rat::one() => census
                    .iter()
                    .position(|s| s.key() == key)
                    .map(|i| format!("g{}", i + 1))
                    .unwrap_or(key),
                MutuallyPrimeProduct::Sector { key, coeff } => format!("{coeff}*{key}"),
                MutuallyPrimeProduct::IsotropyPointClass { point } => format!("e0@p{point}"),
            };
            out.push(Relation {
                left: label_of(census, x),
                right: label_of(census, y),
                product,
                pairing: mutually_prime_pairing(fan, x, y)?,
            });
        }
    }
    Ok(out)
}

/// One divisor given by coefficients over `rays`, or over all rays when the
/// vector is as long as the fan.
fn parse_divisor(s: &str, rays: &[usize], num_rays: usize) -> Result<EquivariantDivisor, CliError> {
    let coeffs = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<Rat>()
                .map_err(|_| CliError::Usage(format!("'{}' is not a rational number", x.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let targets: Vec<usize> = if coeffs.len() == rays.len() {
        rays.to_vec()
    } else if coeffs.len() == num_rays {
        (0..num_rays).collect()
    } else {
        return Err(CliError::Usage(format!(
            "divisor '{s}' needs {} coefficients (rays {rays:?}) or {num_rays}",
            rays.len()
        )));
    };
    Ok(EquivariantDivisor::from_terms(
        targets.into_iter().zip(coeffs),
    ))
}

fn parse_class(s: &str, rays: &[usize], num_rays: usize) -> Result<SectorClass, CliError> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return Ok(SectorClass::one());
    }
    s.split('*').try_fold(SectorClass::one(), |acc, f| {
        Ok(acc.times(&SectorClass::divisor(parse_divisor(f, rays, num_rays)?)))
    })
}

/// `count` classes from --classes; missing ones are 1.
fn parse_classes(
    spec: Option<&str>,
    count: usize,
    rays: &[usize],
    num_rays: usize,
) -> Result<Vec<SectorClass>, CliError> {
    let parts: Vec<&str> = spec.map(|s| s.split(';').collect()).unwrap_or_default();
    if parts.len() > count {
        return Err(CliError::Usage(format!(
            "--classes has {} entries, at most {count} allowed",
            parts.len()
        )));
    }
    (0..count)
        .map(|i| parse_class(parts.get(i).copied().unwrap_or(""), rays, num_rays))
        .collect()
}

fn describe(c: &SectorClass) -> String {
    let mut parts: Vec<String> = c.factors.iter().map(|d| format!("({d})")).collect();
    if c.scalar != Rat::one() || parts.is_empty() {
        parts.insert(0, c.scalar.to_string());
    }
    parts.join(" * ")
}

fn three_point_section(
    cli: &Cli,
    fan: &Fan,
    census: &[TwistedSector],
) -> Result<ThreePointSection, CliError> {
    let spec = cli
        .opts
        .triple
        .as_deref()
        .ok_or_else(|| CliError::Usage("threepoint needs --triple g1,g2[,g3]".into()))?;
    let labels = args::split_top_level(spec, ',');
    if !(2..=3).contains(&labels.len()) {
        return Err(CliError::Usage(format!(
            "--triple needs 2 or 3 sectors, got {}",
            labels.len()
        )));
    }
    let given = labels
        .iter()
        .map(|l| find_element(fan, census, l))
        .collect::<Result<Vec<_>, _>>()?;
    let zero = |triple: Vec<String>, note: &str| ThreePointSection {
        triple,
        classes: Vec::new(),
        value: Rat::zero(),
        obstruction_rank: 0,
        note: Some(note.into()),
    };
    let keys: Vec<String> = given.iter().map(LocalGroupElement::key).collect();
    let t = match SectorTriple::new(fan, &given[0], &given[1]) {
        Ok(t) => t,
        Err(Error::NotACone(..)) => return Ok(zero(keys, "the sectors share no fixed point")),
        Err(e) => return Err(e.into()),
    };
    if given.len() == 3 && given[2].key() != t.g(2).key() {
        return Ok(zero(keys, "g1 g2 g3 is not the identity"));
    }
    let classes = parse_classes(
        cli.opts.classes.as_deref(),
        3,
        t.surviving(),
        fan.num_rays(),
    )?;
    let v = three_point(
        fan,
        &t,
        [&classes[0], &classes[1], &classes[2]],
        cli.opts.seed,
    )?;
    let note = if v.vanishing {
        Some("degree shifts sum past n, so the product vanishes".to_string())
    } else if v.degree_mismatch {
        let degree: usize = classes.iter().map(SectorClass::degree).sum();
        let need = t.dim() - obstruction_bundle(fan, &t)?.rank;
        Some(format!(
            "degree mismatch: classes have degree {degree}, the locus needs {need}"
        ))
    } else {
        None
    };
    Ok(ThreePointSection {
        triple: t.elements().iter().map(LocalGroupElement::key).collect(),
        classes: classes.iter().map(describe).collect(),
        value: v.value,
        obstruction_rank: v.obstruction_rank,
        note,
    })
}

fn integral_section(
    cli: &Cli,
    fan: &Fan,
    census: &[TwistedSector],
) -> Result<IntegralSection, CliError> {
    let g = find_element(fan, census, cli.opts.sector.as_deref().unwrap_or("1"))?;
    let surviving = g.carrier().complement(fan.num_rays());
    let class = parse_classes(cli.opts.classes.as_deref(), 1, &surviving, fan.num_rays())?
        .pop()
        .expect("one class");
    let out = sector_integral(fan, &g, &class, cli.opts.seed)?;
    Ok(IntegralSection {
        sector: g.key(),
        class: describe(&class),
        value: out.value,
        note: out.degree_mismatch.then(|| {
            format!(
                "degree mismatch: class has degree {}, the sector has dimension {}",
                class.degree(),
                surviving.len() - 1
            )
        }),
    })
}
