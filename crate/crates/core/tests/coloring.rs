use std::collections::{BTreeMap, BTreeSet};

use modsys::algebra::signature_of;
use modsys::frontend::SpecDocument;
use modsys::semantics::expand;
use modsys::structures::Structure;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const COLORING: &str = include_str!("../msl/coloring.msl");

type Graph = (Vec<u32>, Vec<(u32, u32)>);

/// Proper 3-colourings counted over all 3^n assignments.
fn oracle_count((vertices, edges): &Graph) -> usize {
    let n = vertices.len() as u32;
    (0..3usize.pow(n))
        .filter(|code| {
            let colour = |v: u32| {
                let i = vertices.iter().position(|&x| x == v).unwrap() as u32;
                code / 3usize.pow(i) % 3
            };
            edges.iter().all(|&(x, y)| colour(x) != colour(y))
        })
        .count()
}

fn instance_text(name: &str, (vertices, edges): &Graph) -> String {
    let atoms: Vec<String> = vertices
        .iter()
        .map(|v| format!("V({v})"))
        .chain(edges.iter().map(|(x, y)| format!("E({x},{y})")))
        .collect();
    format!("instance {name} {{ {} }}\n", atoms.join(", "))
}

/// The colour of each vertex, checking every vertex has exactly one and
/// uncoloured elements have none.
fn colouring(s: &Structure, (vertices, edges): &Graph) -> BTreeMap<u32, String> {
    let mut out: BTreeMap<u32, String> = BTreeMap::new();
    for a in s.atoms() {
        if ["R", "G", "B"].contains(&a.symbol.name.as_str()) {
            let v: u32 = a.args[0].parse().unwrap();
            assert!(vertices.contains(&v), "{s}: colours non-vertex {v}");
            assert!(out.insert(v, a.symbol.name.clone()).is_none(), "{s}: {v} has two colours");
        }
    }
    assert_eq!(out.len(), vertices.len(), "{s}: some vertex is uncoloured");
    for (x, y) in edges {
        assert_ne!(out[x], out[y], "{s}: edge ({x},{y}) is monochromatic");
    }
    out
}

fn solutions(doc: &SpecDocument, system: &str, instance: &str, g: &Graph) -> BTreeSet<BTreeMap<u32, String>> {
    let e = doc.resolve(system).unwrap();
    let sigma = signature_of(&e).unwrap().sigma;
    let result = expand(&e, &doc.instance_structure(instance, &sigma).unwrap()).unwrap();
    let found: BTreeSet<_> = result.structures.iter().map(|s| colouring(s, g)).collect();
    assert_eq!(found.len(), result.len(), "distinct solutions carry distinct colourings");
    found
}

fn k3() -> Graph {
    (vec![1, 2, 3], vec![(1, 2), (1, 3), (2, 3)])
}

fn k4() -> Graph {
    (vec![1, 2, 3, 4], vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
}

fn c5() -> Graph {
    (vec![1, 2, 3, 4, 5], vec![(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
}

#[test]
fn oracle_counts_for_the_standard_graphs() {
    assert_eq!(oracle_count(&k3()), 6);
    assert_eq!(oracle_count(&k4()), 0);
    assert_eq!(oracle_count(&c5()), 30);
}

#[test]
fn shipped_instances_match_the_oracle() {
    let doc = SpecDocument::parse(COLORING).unwrap();
    for (name, g) in [("k3", k3()), ("k4", k4()), ("c5", c5())] {
        assert_eq!(solutions(&doc, "Mcol", name, &g).len(), oracle_count(&g), "{name}");
    }
}

#[test]
fn random_graphs_match_the_oracle() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut text = COLORING.to_string();
    let mut graphs = Vec::new();
    for k in 0..6 {
        let n = rng.gen_range(1..=5u32);
        let vertices: Vec<u32> = (1..=n).collect();
        let edges: Vec<(u32, u32)> =
            (1..=n).flat_map(|x| (x + 1..=n).map(move |y| (x, y))).filter(|_| rng.gen_bool(0.4)).collect();
        let name = format!("g{k}");
        text.push_str(&instance_text(&name, &(vertices.clone(), edges.clone())));
        graphs.push((name, (vertices, edges)));
    }
    let doc = SpecDocument::parse(&text).unwrap();
    for (name, g) in &graphs {
        assert_eq!(solutions(&doc, "Mcol", name, g).len(), oracle_count(g), "{name}: {g:?}");
    }
}

#[test]
fn feedback_checker_agrees_with_the_choice_program() {
    let doc = SpecDocument::parse(COLORING).unwrap();
    for (name, g) in [("k3", k3()), ("k4", k4())] {
        assert_eq!(solutions(&doc, "Colour", name, &g), solutions(&doc, "Mcol", name, &g), "{name}");
    }
}
