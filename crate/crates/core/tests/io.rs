use sigcolor::graph::{ListAssignment, Sign, SignedGraph};
use sigcolor::io::*;
use sigcolor::planar::{embed, fixtures};
use sigcolor::random;

#[test]
fn spec_example_parses() {
    let text = r#"{"vertices": ["a","b"], "edges": [{"u":"a","v":"b","sign":-1}], "lists": {"a":[1,2]}, "rotation": {"a":["b"]}}"#;
    // Lists must cover every vertex.
    assert!(matches!(parse_instance(text), Err(IoError::Graph(_))));
    let text = r#"{"vertices": ["a","b"], "edges": [{"u":"a","v":"b","sign":-1}], "lists": {"a":[1,2],"b":[3]}, "rotation": {"a":["b"],"b":["a"]}}"#;
    let inst = parse_instance(text).unwrap();
    assert_eq!(inst.graph.sign(0, 1), Some(Sign::Negative));
    assert_eq!(inst.lists.unwrap().get(1), &[3]);
    assert!(inst.embedding.is_some());
}

#[test]
fn bad_inputs_are_rejected() {
    for text in [
        r#"{"vertices": ["a","a"], "edges": []}"#,
        r#"{"vertices": ["a","b"], "edges": [{"u":"a","v":"c","sign":1}]}"#,
        r#"{"vertices": ["a","b"], "edges": [{"u":"a","v":"b","sign":2}]}"#,
        r#"{"vertices": ["a"], "edges": [{"u":"a","v":"a","sign":1}]}"#,
        r#"{"vertices": ["a","b"], "edges": [{"u":"a","v":"b","sign":1}], "rotation": {"a":[],"b":["a"]}}"#,
        r#"{"vertices": ["a","b","c"], "edges": [{"u":"a","v":"b","sign":1}], "rotation": {"a":["b"],"b":["a"],"c":[]}, "outer": ["a","c"]}"#,
        r#"[1, 2]"#,
    ] {
        assert!(parse_instance(text).is_err(), "{text}");
    }
}

#[test]
fn random_instances_round_trip() {
    let mut r = random::rng(1);
    for n in 3..30 {
        let mut emb = random::planar(n, 0.2, &mut r);
        random::sign_embedding(&mut emb, 0.5, &mut r);
        let l = random::lists(emb.graph().len(), 3, -4, 4, &mut r);
        let text = write_instance(emb.graph(), Some(&l), Some(&emb));
        let inst = parse_instance(&text).unwrap();
        assert_eq!(&inst.graph, emb.graph());
        assert_eq!(inst.lists.as_ref(), Some(&l));
        assert_eq!(inst.embedding.as_ref(), Some(&emb));
        assert_eq!(write_instance(&inst.graph, inst.lists.as_ref(), inst.embedding.as_ref()), text);
    }
}

#[test]
fn rotation_lists_start_at_lowest_neighbor() {
    let emb = embed(&fixtures::icosahedron()).unwrap();
    let doc = GraphDoc::from_embedding(&emb);
    let g = emb.graph();
    for (name, rot) in doc.rotation.unwrap() {
        let v = g.vertex(&name).unwrap();
        let lowest = g.neighbors(v).min().unwrap();
        assert_eq!(rot[0], g.name(lowest));
    }
}

#[test]
fn colorings_round_trip() {
    let g = SignedGraph::build(&["p", "q"], &[("p", "q", Sign::Positive)]).unwrap();
    let c = sigcolor::Coloring::new(vec![4, -2]);
    let text = coloring_json(&g, &c).to_string();
    assert_eq!(text, r#"{"p":4,"q":-2}"#);
    assert_eq!(parse_coloring(&g, &text).unwrap(), c);
    assert!(parse_coloring(&g, r#"{"p":4}"#).is_err());
}

#[test]
fn dot_labels_lists() {
    let g = SignedGraph::build(&["a", "b"], &[("a", "b", Sign::Positive)]).unwrap();
    let dot = to_dot(&g, Some(&ListAssignment::uniform(2, &[1, 2])));
    assert!(dot.contains(r#""a" [label="a [1, 2]"];"#));
    assert!(dot.contains(r#""a" -- "b" [style=solid];"#));
}
