use clap::{Args, Parser, Subcommand};

/// Chen-Ruan orbifold cohomology of weighted projective spaces, in exact
/// rational arithmetic.
#[derive(Parser, Debug, Clone, PartialEq, Eq)]
#[command(name = "wporb", version, about, long_about = None)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Rays of the fan and the basis matrix C0.
    Fan,
    /// Twisted sectors with their degree shifts.
    Sectors,
    /// The rationally graded Betti table.
    Betti,
    /// Ordinary ring constants and the full cup product table.
    Ring,
    /// A 3-point function <eta1, eta2, eta3> on a triple of sectors.
    Threepoint,
    /// Orbifold integral of a class over one sector.
    Integrate,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct Options {
    /// Comma-separated positive weights, e.g. 2,3,4.
    #[arg(long, global = true, value_parser = parse_weights)]
    pub weights: Option<Weights>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for the random torus weights used by localization.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sectors g1,g2[,g3]: 1, g<k>, g<k>^<p> or a canonical key.
    #[arg(long, global = true)]
    pub triple: Option<String>,
    /// Sector for `integrate`, named as in --triple. Defaults to 1.
    #[arg(long, global = true)]
    pub sector: Option<String>,
    /// Classes eta1;eta2;eta3, each a '*'-product of divisor coefficient
    /// vectors (over the surviving rays, or over all rays).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub classes: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weights(pub Vec<u64>);

pub fn parse_weights(s: &str) -> Result<Weights, String> {
    let q = s
        .split(',')
        .map(|x| {
            let x = x.trim();
            match x.parse::<u64>() {
                Ok(0) => Err("weights must be positive".to_string()),
                Ok(v) => Ok(v),
                Err(_) => Err(format!("'{x}' is not a positive integer")),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if q.len() < 2 {
        return Err("need at least two weights".into());
    }
    Ok(Weights(q))
}

/// Splits on `sep` outside square brackets, so canonical keys such as
/// `carrier=[0,1];a=[1/4,1/2]` survive a comma-separated list.
pub fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for ch in s.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if ch == sep && depth == 0 {
            parts.push(std::mem::take(&mut current));
        } else {
            current.push(ch);
        }
    }
    parts.push(current);
    parts.into_iter().map(|p| p.trim().to_string()).collect()
}
