//! Browser bindings. The logic lives in plain functions returning
//! `Result<String, String>` so it runs and tests natively; the
//! `#[wasm_bindgen]` wrappers only convert the error type.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use wporb::cohomology::{betti_table, poincare_polynomial};
use wporb::fan::Fan;
use wporb::ringops::{three_point, EquivariantDivisor, SectorClass};
use wporb::sectors::{enumerate_twisted_sectors, find_element, SectorTriple};
use wporb::{Error, Rat};

fn parse_weights(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| format!("'{}' is not a positive integer", x.trim()))
        })
        .collect()
}

/// Commas inside brackets belong to canonical keys.
fn split_names(s: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut depth = 0;
    for ch in s.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(String::new());
                continue;
            }
            _ => {}
        }
        out.last_mut().unwrap().push(ch);
    }
    out.into_iter().map(|x| x.trim().to_string()).collect()
}

fn fan_of(weights: &str) -> Result<Fan, String> {
    Fan::from_weights(&parse_weights(weights)?).map_err(|e| e.to_string())
}

fn err(e: Error) -> String {
    match e {
        Error::UnknownSector { key, valid } => {
            let names: Vec<String> = valid
                .iter()
                .enumerate()
                .map(|(i, k)| format!("g{} = {k}", i + 1))
                .collect();
            format!("unknown sector '{key}'; try 1 or {}", names.join(", "))
        }
        other => other.to_string(),
    }
}

/// Sector census and Betti table as JSON.
pub fn sectors_report(weights: &str) -> Result<String, String> {
    let fan = fan_of(weights)?;
    let sectors = enumerate_twisted_sectors(&fan).map_err(err)?;
    let table = betti_table(&fan).map_err(err)?;
    let census: Vec<Value> = sectors
        .iter()
        .enumerate()
        .map(|(i, s)| {
            json!({
                "label": format!("g{}", i + 1),
                "key": s.key(),
                "iota": s.iota(),
                "dim": s.dim(),
                "order": s.d(),
            })
        })
        .collect();
    let betti: Vec<Value> = poincare_polynomial(&table)
        .into_iter()
        .map(|(degree, dim)| json!({ "degree": degree, "dim": dim }))
        .collect();
    Ok(json!({
        "space": fan.weights().to_string(),
        "sectors": census,
        "betti": betti,
        "total": table.total(),
    })
    .to_string())
}

const SVG_SIZE: f64 = 320.0;

/// The fan of a weighted projective plane as an SVG drawing.
pub fn fan_svg(weights: &str) -> Result<String, String> {
    let fan = fan_of(weights)?;
    if fan.n() != 2 {
        return Err(format!(
            "{} is not a surface; the picture needs three weights",
            fan.weights()
        ));
    }
    let rays: Vec<(f64, f64)> = fan
        .rays()
        .iter()
        .map(|v| {
            (
                v[0].to_string().parse().unwrap(),
                v[1].to_string().parse().unwrap(),
            )
        })
        .collect();
    let reach = rays
        .iter()
        .flat_map(|&(x, y)| [x.abs(), y.abs()])
        .fold(1.0, f64::max);
    let c = SVG_SIZE / 2.0;
    let scale = (c - 30.0) / reach;
    let at = |(x, y): (f64, f64)| (c + x * scale, c - y * scale);

    let mut svg = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {s} {s}" width="{s}" height="{s}">"#,
        s = SVG_SIZE
    );
    for (k, color) in ["#e8eef8", "#f8ede4", "#e9f5e6"].into_iter().enumerate() {
        let cone = fan.maximal_cone(k);
        let (a, b) = (at(rays[cone.rays()[0]]), at(rays[cone.rays()[1]]));
        svg += &format!(
            r#"<polygon points="{c},{c} {:.1},{:.1} {:.1},{:.1}" fill="{}" stroke="none"><title>|G| = {}</title></polygon>"#,
            a.0,
            a.1,
            b.0,
            b.1,
            color,
            fan.q(k)
        );
    }
    let r = reach as i64;
    for i in -r..=r {
        for j in -r..=r {
            let (x, y) = at((i as f64, j as f64));
            svg += &format!(r##"<circle cx="{x:.1}" cy="{y:.1}" r="1.5" fill="#999"/>"##);
        }
    }
    for (i, &v) in rays.iter().enumerate() {
        let (x, y) = at(v);
        svg += &format!(
            r##"<line x1="{c}" y1="{c}" x2="{x:.1}" y2="{y:.1}" stroke="#234" stroke-width="2"/><text x="{:.1}" y="{:.1}" font-size="12">v{i} q={}</text>"##,
            x + 4.0,
            y - 4.0,
            fan.q(i)
        );
    }
    svg += "</svg>";
    Ok(svg)
}

/// <eta1, eta2, 1> on the triple named by `triple` ("g1,g1" or three
/// names); `classes` gives eta1 as divisor coefficients over the surviving
/// rays, blank for 1.
pub fn three_point_value(weights: &str, triple: &str, classes: &str) -> Result<String, String> {
    let fan = fan_of(weights)?;
    let census = enumerate_twisted_sectors(&fan).map_err(err)?;
    let names = split_names(triple);
    if !(2..=3).contains(&names.len()) {
        return Err("name two or three sectors, e.g. g1,g1".into());
    }
    let g = names
        .iter()
        .map(|n| find_element(&fan, &census, n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let t = match SectorTriple::new(&fan, &g[0], &g[1]) {
        Ok(t) => t,
        Err(Error::NotACone(..)) => {
            return Ok(json!({ "value": Rat::zero(), "note": "no common fixed point" }).to_string())
        }
        Err(e) => return Err(err(e)),
    };
    if g.len() == 3 && g[2].key() != t.g(2).key() {
        return Ok(
            json!({ "value": Rat::zero(), "note": "g1 g2 g3 is not the identity" }).to_string(),
        );
    }
    let eta = if classes.trim().is_empty() {
        SectorClass::one()
    } else {
        let coeffs = classes
            .split(',')
            .map(|x| x.trim().parse::<Rat>().map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() != t.surviving().len() {
            return Err(format!(
                "give {} coefficients, one per surviving ray {:?}",
                t.surviving().len(),
                t.surviving()
            ));
        }
        SectorClass::divisor(EquivariantDivisor::from_terms(
            t.surviving().iter().copied().zip(coeffs),
        ))
    };
    let one = SectorClass::one();
    let v = three_point(&fan, &t, [&eta, &one, &one], 0).map_err(err)?;
    let note = if v.vanishing {
        Some("degree shifts sum past n")
    } else if v.degree_mismatch {
        Some("degree mismatch")
    } else {
        None
    };
    Ok(json!({
        "triple": t.elements().iter().map(|g| g.key()).collect::<Vec<_>>(),
        "surviving": t.surviving(),
        "obstruction_rank": v.obstruction_rank,
        "value": v.value,
        "note": note,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn sectors(weights: &str) -> Result<String, JsValue> {
    sectors_report(weights).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn fan_picture(weights: &str) -> Result<String, JsValue> {
    fan_svg(weights).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn threepoint(weights: &str, triple: &str, classes: &str) -> Result<String, JsValue> {
    three_point_value(weights, triple, classes).map_err(|e| JsValue::from_str(&e))
}
