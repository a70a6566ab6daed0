use std::fmt::Write;

use crate::report::*;

fn tuple<T: ToString>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn ints(xs: &[JsonInt]) -> Vec<String> {
    xs.iter().map(|x| x.0.to_string()).collect()
}

pub fn render(r: &Report) -> String {
    let mut out = String::new();
    let w = &r.weights;
    write!(out, "P{}", tuple(&w.normalized)).unwrap();
    if w.given != w.normalized {
        write!(out, "  normalized from {}", tuple(&w.given)).unwrap();
    }
    out.push('\n');
    if let Some(f) = &r.fan {
        fan(&mut out, f);
    }
    if let Some(s) = &r.sectors {
        sectors(&mut out, s);
    }
    if let Some(b) = &r.betti {
        betti(&mut out, b);
    }
    if let Some(ring) = &r.ring {
        ring_text(&mut out, ring);
    }
    if let Some(t) = &r.three_point {
        writeln!(out, "\n3-point function").unwrap();
        for (i, k) in t.triple.iter().enumerate() {
            writeln!(out, "  g{} = {k}", i + 1).unwrap();
        }
        for (i, c) in t.classes.iter().enumerate() {
            writeln!(out, "  eta{} = {c}", i + 1).unwrap();
        }
        writeln!(out, "  obstruction rank {}", t.obstruction_rank).unwrap();
        writeln!(out, "  value = {}", t.value).unwrap();
        if let Some(n) = &t.note {
            writeln!(out, "  note: {n}").unwrap();
        }
    }
    if let Some(i) = &r.integral {
        writeln!(out, "\nintegral over {}", i.sector).unwrap();
        writeln!(out, "  class = {}", i.class).unwrap();
        writeln!(out, "  value = {}", i.value).unwrap();
        if let Some(n) = &i.note {
            writeln!(out, "  note: {n}").unwrap();
        }
    }
    out
}

fn fan(out: &mut String, f: &FanSection) {
    writeln!(out, "\nrays").unwrap();
    for (i, v) in f.rays.iter().enumerate() {
        writeln!(out, "  v{i} = {}", tuple(&ints(v))).unwrap();
    }
    writeln!(out, "C0").unwrap();
    for row in &f.c0 {
        writeln!(out, "  [{}]", ints(row).join(" ")).unwrap();
    }
    writeln!(out, "maximal cones").unwrap();
    for c in &f.maximal_cones {
        writeln!(out, "  {}  |G| = {}", tuple(&c.rays), c.order).unwrap();
    }
}

fn sectors(out: &mut String, s: &[SectorEntry]) {
    writeln!(out, "\ntwisted sectors ({})", s.len()).unwrap();
    for e in s {
        writeln!(
            out,
            "  {:<4} {}  ~ P{}  order {}  iota = {}  dim {}",
            e.label,
            e.key,
            tuple(&e.quotient_weights),
            e.order,
            e.iota,
            e.dim
        )
        .unwrap();
    }
}

fn betti(out: &mut String, b: &BettiSection) {
    writeln!(out, "\nBetti table (total {})", b.total).unwrap();
    for e in &b.entries {
        writeln!(out, "  H^{:<6} {}", e.degree.to_string(), e.dim).unwrap();
    }
}

fn ring_text(out: &mut String, r: &RingSection) {
    writeln!(out, "\nordinary ring").unwrap();
    writeln!(out, "  l = {}", tuple(&ints(&r.l))).unwrap();
    for (i, row) in r.e.iter().enumerate() {
        for (j, e) in row.iter().enumerate().skip(i) {
            if i > 0 {
                writeln!(out, "  xi{i} xi{j} = {e} xi{}", i + j).unwrap();
            }
        }
    }
    for (k, c) in r.xi_in_d.iter().enumerate().skip(1) {
        writeln!(out, "  xi{k} = {c} D^{k}").unwrap();
    }
    let basis = &r.cup.basis;
    writeln!(out, "\ncup product basis ({})", basis.len()).unwrap();
    for (i, b) in basis.iter().enumerate() {
        writeln!(
            out,
            "  b{i:<3} {:<10} degree {:<5} pairing {}",
            b.label,
            b.degree.to_string(),
            b.pairing
        )
        .unwrap();
    }
    writeln!(out, "nonzero products").unwrap();
    for p in r.cup.products.iter().filter(|p| p.left <= p.right) {
        let terms: Vec<String> = p
            .terms
            .iter()
            .map(|t| {
                let label = &basis[t.basis].label;
                if t.coeff == wporb::Rat::one() {
                    label.clone()
                } else {
                    format!("{} {label}", t.coeff)
                }
            })
            .collect();
        writeln!(
            out,
            "  {} * {} = {}",
            basis[p.left].label,
            basis[p.right].label,
            terms.join(" + ")
        )
        .unwrap();
    }
    if let Some(rel) = &r.point_relations {
        writeln!(out, "\npoint class relations (e0@p_i has integral 1/q_i)").unwrap();
        for x in rel {
            writeln!(
                out,
                "  {} * {} = {}   pairing {}",
                x.left, x.right, x.product, x.pairing
            )
            .unwrap();
        }
    }
}
