//! Line-oriented text format for colored graph instances.
//!
//! ```text
//! # comment
//! n 8
//! class unit_interval
//! k 2
//! sides xxxxyyyy
//! cert.center 1/2
//! e 0 1 r
//! ```
//!
//! Lines may appear in any order; the renderer emits a canonical order, so
//! parse-render round-trips are byte-exact. Every edge carries an explicit
//! color letter, rationals read as `a/b` or a bare integer, and certificate
//! lines are typed by key and checked against the graph after assembly.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use emtk_core::generators::{validate_certificate, Certificate};
use emtk_core::graph::{Color, ColoredGraph, Side};
use emtk_core::Rational;

#[derive(Debug, Clone)]
pub struct InstanceFile {
    /// Free-form class tag; drives automatic strategy selection.
    pub class_tag: String,
    /// Target red count baked into the file, overridable on the command line.
    pub k: Option<usize>,
    pub graph: ColoredGraph,
    pub certificate: Option<Certificate>,
}

fn field<T: FromStr>(line_no: usize, what: &str, s: &str) -> Result<T, String> {
    s.parse()
        .map_err(|_| format!("line {line_no}: invalid {what} `{s}`"))
}

fn arity(line_no: usize, key: &str, rest: &[&str], want: usize) -> Result<(), String> {
    if rest.len() == want {
        Ok(())
    } else {
        Err(format!(
            "line {line_no}: `{key}` takes {want} argument(s), got {}",
            rest.len()
        ))
    }
}

fn set_once<T>(line_no: usize, key: &str, slot: &mut Option<T>, value: T) -> Result<(), String> {
    if slot.is_some() {
        return Err(format!("line {line_no}: `{key}` appears twice"));
    }
    *slot = Some(value);
    Ok(())
}

pub fn parse(text: &str) -> Result<InstanceFile, String> {
    let mut n: Option<usize> = None;
    let mut class_tag: Option<String> = None;
    let mut k: Option<usize> = None;
    let mut sides: Option<Vec<Side>> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut red: Vec<(usize, usize)> = Vec::new();

    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut profile: Option<Vec<usize>> = None;
    let mut intervals: Vec<(Rational, Rational)> = Vec::new();
    let mut centers: Vec<Rational> = Vec::new();
    let mut split: Option<usize> = None;
    let mut nd_classes: Vec<(bool, Vec<usize>)> = Vec::new();
    let mut nd_edges: Vec<(usize, usize)> = Vec::new();
    let mut gnp: Option<(usize, Rational, u64)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        let key = words.next().expect("non-empty line");
        let rest: Vec<&str> = words.collect();
        match key {
            "n" => {
                arity(line_no, key, &rest, 1)?;
                set_once(line_no, key, &mut n, field(line_no, "vertex count", rest[0])?)?;
            }
            "class" => {
                arity(line_no, key, &rest, 1)?;
                set_once(line_no, key, &mut class_tag, rest[0].to_string())?;
            }
            "k" => {
                arity(line_no, key, &rest, 1)?;
                set_once(line_no, key, &mut k, field(line_no, "target", rest[0])?)?;
            }
            "sides" => {
                arity(line_no, key, &rest, 1)?;
                let parsed: Result<Vec<Side>, String> = rest[0]
                    .chars()
                    .map(|c| match c {
                        'x' => Ok(Side::X),
                        'y' => Ok(Side::Y),
                        other => Err(format!("line {line_no}: side must be x or y, got `{other}`")),
                    })
                    .collect();
                set_once(line_no, key, &mut sides, parsed?)?;
            }
            "e" => {
                arity(line_no, key, &rest, 3)?;
                let u = field(line_no, "endpoint", rest[0])?;
                let v = field(line_no, "endpoint", rest[1])?;
                match rest[2] {
                    "r" => red.push((u, v)),
                    "b" => {}
                    other => {
                        return Err(format!(
                            "line {line_no}: edge color must be r or b, got `{other}`"
                        ))
                    }
                }
                edges.push((u, v));
            }
            "cert.part" => {
                if rest.is_empty() {
                    return Err(format!("line {line_no}: empty part"));
                }
                let vs: Result<Vec<usize>, String> =
                    rest.iter().map(|s| field(line_no, "vertex", s)).collect();
                parts.push(vs?);
            }
            "cert.profile" => {
                let ds: Result<Vec<usize>, String> =
                    rest.iter().map(|s| field(line_no, "degree", s)).collect();
                set_once(line_no, key, &mut profile, ds?)?;
            }
            "cert.interval" => {
                arity(line_no, key, &rest, 2)?;
                intervals.push((
                    field(line_no, "rational", rest[0])?,
                    field(line_no, "rational", rest[1])?,
                ));
            }
            "cert.center" => {
                arity(line_no, key, &rest, 1)?;
                centers.push(field(line_no, "rational", rest[0])?);
            }
            "cert.split" => {
                arity(line_no, key, &rest, 1)?;
                set_once(line_no, key, &mut split, field(line_no, "split", rest[0])?)?;
            }
            "cert.nd_class" => {
                if rest.len() < 2 {
                    return Err(format!(
                        "line {line_no}: `cert.nd_class` needs a kind and at least one vertex"
                    ));
                }
                let clique = match rest[0] {
                    "clique" => true,
                    "independent" => false,
                    other => {
                        return Err(format!(
                            "line {line_no}: class kind must be clique or independent, got `{other}`"
                        ))
                    }
                };
                let vs: Result<Vec<usize>, String> =
                    rest[1..].iter().map(|s| field(line_no, "vertex", s)).collect();
                nd_classes.push((clique, vs?));
            }
            "cert.nd_edge" => {
                arity(line_no, key, &rest, 2)?;
                nd_edges.push((
                    field(line_no, "class index", rest[0])?,
                    field(line_no, "class index", rest[1])?,
                ));
            }
            "cert.gnp" => {
                arity(line_no, key, &rest, 3)?;
                let value = (
                    field(line_no, "vertex count", rest[0])?,
                    field(line_no, "rational", rest[1])?,
                    field(line_no, "seed", rest[2])?,
                );
                set_once(line_no, key, &mut gnp, value)?;
            }
            other => return Err(format!("line {line_no}: unknown directive `{other}`")),
        }
    }

    let n = n.ok_or("missing `n` line")?;
    if let Some(s) = &sides {
        if s.len() != n {
            return Err(format!("`sides` lists {} labels for {n} vertices", s.len()));
        }
    }
    let graph = match sides {
        Some(s) => ColoredGraph::bipartite(n, s, edges, red),
        None => ColoredGraph::new(n, edges, red),
    }
    .map_err(|e| format!("invalid graph: {e}"))?;

    let kinds = [
        !parts.is_empty(),
        profile.is_some(),
        !intervals.is_empty(),
        !centers.is_empty(),
        !nd_classes.is_empty() || !nd_edges.is_empty(),
        gnp.is_some(),
    ];
    if kinds.iter().filter(|&&present| present).count() > 1 {
        return Err("certificate lines of different kinds are mixed".into());
    }
    if split.is_some() && intervals.is_empty() && centers.is_empty() {
        return Err("`cert.split` without interval or center lines".into());
    }
    if !nd_edges.is_empty() && nd_classes.is_empty() {
        return Err("`cert.nd_edge` without `cert.nd_class` lines".into());
    }
    let certificate = if !parts.is_empty() {
        Some(Certificate::CompleteRPartite { parts })
    } else if let Some(profile) = profile {
        Some(Certificate::Chain { profile })
    } else if !intervals.is_empty() {
        Some(Certificate::Intervals { intervals, bipartite_split: split })
    } else if !centers.is_empty() {
        Some(Certificate::UnitIntervals { centers, bipartite_split: split })
    } else if !nd_classes.is_empty() {
        let (clique, classes) = nd_classes.into_iter().unzip();
        Some(Certificate::NeighborhoodDiversity { classes, clique, type_edges: nd_edges })
    } else {
        gnp.map(|(gn, p, seed)| Certificate::Gnp { n: gn, p, seed })
    };
    if let Some(cert) = &certificate {
        validate_certificate(&graph, cert).map_err(|e| format!("certificate mismatch: {e}"))?;
    }

    Ok(InstanceFile {
        class_tag: class_tag.unwrap_or_else(|| "custom".into()),
        k,
        graph,
        certificate,
    })
}

pub fn render(inst: &InstanceFile) -> String {
    let g = &inst.graph;
    let mut out = String::new();
    let _ = writeln!(out, "n {}", g.n());
    let _ = writeln!(out, "class {}", inst.class_tag);
    if let Some(k) = inst.k {
        let _ = writeln!(out, "k {k}");
    }
    if let Some(sides) = g.sides() {
        let labels: String = sides
            .iter()
            .map(|s| if *s == Side::X { 'x' } else { 'y' })
            .collect();
        let _ = writeln!(out, "sides {labels}");
    }
    match &inst.certificate {
        None => {}
        Some(Certificate::CompleteRPartite { parts }) => {
            for part in parts {
                let _ = writeln!(out, "cert.part {}", join(part));
            }
        }
        Some(Certificate::Chain { profile }) => {
            let line = join(profile);
            let _ = writeln!(out, "cert.profile{}{line}", if line.is_empty() { "" } else { " " });
        }
        Some(Certificate::Intervals { intervals, bipartite_split }) => {
            for (lo, hi) in intervals {
                let _ = writeln!(out, "cert.interval {lo} {hi}");
            }
            if let Some(split) = bipartite_split {
                let _ = writeln!(out, "cert.split {split}");
            }
        }
        Some(Certificate::UnitIntervals { centers, bipartite_split }) => {
            for c in centers {
                let _ = writeln!(out, "cert.center {c}");
            }
            if let Some(split) = bipartite_split {
                let _ = writeln!(out, "cert.split {split}");
            }
        }
        Some(Certificate::NeighborhoodDiversity { classes, clique, type_edges }) => {
            for (vs, &is_clique) in classes.iter().zip(clique) {
                let kind = if is_clique { "clique" } else { "independent" };
                let _ = writeln!(out, "cert.nd_class {kind} {}", join(vs));
            }
            for (a, b) in type_edges {
                let _ = writeln!(out, "cert.nd_edge {a} {b}");
            }
        }
        Some(Certificate::Gnp { n, p, seed }) => {
            let _ = writeln!(out, "cert.gnp {n} {p} {seed}");
        }
    }
    for &e in g.edges() {
        let (u, v) = e.endpoints();
        let color = if g.color(e).expect("edge from this graph") == Color::Red { 'r' } else { 'b' };
        let _ = writeln!(out, "e {u} {v} {color}");
    }
    out
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn read(path: &Path) -> Result<InstanceFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use emtk_core::generators::{
        gen_bip_interval, gen_bip_unit_interval, gen_chain, gen_chain_counterexample,
        gen_complete_r_partite, gen_gnp, gen_interval, gen_neighborhood_diversity,
        gen_unit_interval, random_coloring, ColoringSpec, TypeClassSpec,
    };
    use emtk_core::karzanov::karzanov_counterexample;

    fn generated_instances() -> Vec<InstanceFile> {
        let mut out = Vec::new();
        let mut push = |tag: &str, g: ColoredGraph, cert: Option<Certificate>, k: Option<usize>| {
            out.push(InstanceFile { class_tag: tag.into(), k, graph: g, certificate: cert });
        };
        let (g, cert) = gen_chain(&[1, 2, 2, 4]).unwrap();
        push("chain", g, Some(cert), Some(2));
        let (g, cert) = gen_complete_r_partite(&[2, 3, 3]).unwrap();
        let g = random_coloring(&g, ColoringSpec::Bernoulli(Rational::new(1, 3)), 7).unwrap();
        push("complete_r_partite", g, Some(cert), None);
        let (g, cert) = gen_unit_interval(9, 4).unwrap();
        push("unit_interval", g, Some(cert), None);
        let (g, cert) = gen_bip_unit_interval(4, 5, 2).unwrap();
        push("bip_unit_interval", g, Some(cert), Some(1));
        let (g, cert) = gen_interval(8, 1).unwrap();
        let g = random_coloring(&g, ColoringSpec::ExactCount(3), 9).unwrap();
        push("interval", g, Some(cert), None);
        let (g, cert) = gen_bip_interval(3, 4, 6).unwrap();
        push("bip_interval", g, Some(cert), None);
        let (g, cert) = gen_neighborhood_diversity(
            &[
                TypeClassSpec { size: 3, clique: true },
                TypeClassSpec { size: 2, clique: false },
                TypeClassSpec { size: 2, clique: true },
            ],
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        push("neighborhood_diversity", g, Some(cert), None);
        let (g, cert) = gen_gnp(10, Rational::new(2, 3), 11).unwrap();
        let g = random_coloring(&g, ColoringSpec::Bernoulli(Rational::new(1, 2)), 13).unwrap();
        push("gnp", g, Some(cert), Some(3));
        let (g, _, _) = gen_chain_counterexample(4).unwrap();
        let profile = Certificate::Chain { profile: (1..=4).collect() };
        push("chain_pshort_counterexample", g, Some(profile), None);
        let (g, cert) = karzanov_counterexample();
        push("karzanov_counterexample", g, Some(cert), Some(2));
        push("custom", ColoredGraph::new(4, [(0, 1), (1, 2), (2, 3)], [(1, 2)]).unwrap(), None, None);
        out
    }

    #[test]
    fn parse_render_round_trips_every_class() {
        for inst in generated_instances() {
            let text = render(&inst);
            let back = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", inst.class_tag));
            assert_eq!(render(&back), text, "class {}", inst.class_tag);
            assert_eq!(back.class_tag, inst.class_tag);
            assert_eq!(back.k, inst.k);
            assert_eq!(back.graph.n(), inst.graph.n());
            assert_eq!(back.graph.edges(), inst.graph.edges());
            assert_eq!(
                back.graph.red_edges().collect::<Vec<_>>(),
                inst.graph.red_edges().collect::<Vec<_>>()
            );
            assert_eq!(back.graph.sides(), inst.graph.sides());
        }
    }

    #[test]
    fn parser_reports_line_numbers_and_rejects_garbage() {
        let cases = [
            ("n 4\ne 0 1 red\n", "line 2"),
            ("n 4\nedge 0 1 r\n", "unknown directive"),
            ("n 4\nn 4\n", "appears twice"),
            ("e 0 1 b\n", "missing `n`"),
            ("n 4\ne 0 1 b\ne 0 1 r\n", "invalid graph"),
            ("n 4\ne 0 9 b\n", "invalid graph"),
            ("n 2\nsides xyx\ne 0 1 b\n", "2 vertices"),
            ("n 4\ncert.profile 2\ncert.part 0 1\ne 0 1 b\n", "mixed"),
            ("n 4\ncert.split 2\ne 0 1 b\n", "without interval"),
        ];
        for (text, needle) in cases {
            let err = parse(text).unwrap_err();
            assert!(err.contains(needle), "{text:?} -> {err}");
        }
    }

    #[test]
    fn certificates_must_match_the_graph() {
        let err = parse("n 4\ncert.part 0 1\ncert.part 2 3\ne 0 1 b\n").unwrap_err();
        assert!(err.contains("certificate mismatch"), "{err}");
        let ok = parse("n 4\ncert.part 0 2\ncert.part 1 3\ne 0 1 b\ne 0 3 b\ne 1 2 r\ne 2 3 b\n");
        assert!(ok.is_ok(), "{ok:?}");
    }

    #[test]
    fn rationals_read_back_in_both_notations() {
        let text = "n 2\ncert.interval -1/2 3\ncert.interval 2 7/3\ne 0 1 b\n";
        let inst = parse(text).unwrap();
        match inst.certificate.unwrap() {
            Certificate::Intervals { intervals, bipartite_split } => {
                assert_eq!(intervals[0], (Rational::new(-1, 2), Rational::from_integer(3)));
                assert_eq!(intervals[1], (Rational::from_integer(2), Rational::new(7, 3)));
                assert_eq!(bipartite_split, None);
            }
            other => panic!("wrong certificate: {other:?}"),
        }
    }
}
