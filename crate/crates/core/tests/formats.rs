use dpcolor::cover::{parse_cover, random_cover, validate, CoverMode, CoverParseError};
use dpcolor::graph::{generate, Family};
use dpcolor::{parse_graph, Cover, ParseError};

#[test]
fn graph_text_round_trips() {
    for seed in 0..10 {
        let g = generate(&Family::RandomTriangleFree { n: 50, d: 4.0, seed }).unwrap();
        assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g);
    }
}

#[test]
fn cover_text_round_trips() {
    let g = generate(&Family::RandomBipartite { n: 8, m: 9, p: 0.5, seed: 3 }).unwrap();
    for mode in [CoverMode::Perfect, CoverMode::Density(0.5)] {
        let c = random_cover(&g, 4, 11, mode).unwrap();
        let data = parse_cover(&c.to_text()).unwrap();
        assert!(validate(&g, &data).is_valid());
        assert_eq!(Cover::from_data(g.clone(), &data).unwrap(), c);
    }
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let g = parse_graph("# a path\np 3 2\n\ne 0 1   # first\ne 1 2\n").unwrap();
    assert_eq!(g.edge_count(), 2);
    let data = parse_cover("c 3 *\nL 0 1\nL 1 2 # ragged\nL 2 1\nm 0 0 1 1\n").unwrap();
    assert_eq!(data.fold, None);
    assert!(validate(&g, &data).is_valid());
}

#[test]
fn malformed_inputs_are_rejected() {
    assert_eq!(parse_graph("# nothing\n"), Err(ParseError::MissingHeader));
    assert!(matches!(parse_graph("e 0 1\n"), Err(ParseError::Malformed { line: 1, .. })));
    assert!(matches!(parse_graph("p 2 1\ne 0 0\n"), Err(ParseError::SelfLoop { line: 2, .. })));
    assert!(matches!(parse_graph("p 2 1\ne 0 5\n"), Err(ParseError::OutOfRange { vertex: 5, .. })));
    assert!(matches!(parse_graph("p 2 1\ne 0 x\n"), Err(ParseError::Malformed { line: 2, .. })));
    assert!(matches!(
        parse_cover("c 2 2\nL 0 3\n"),
        Err(CoverParseError::FoldMismatch { vertex: 0, size: 3, .. })
    ));
    assert!(matches!(parse_cover("c 2 2\nq 1\n"), Err(CoverParseError::Malformed { line: 2, .. })));
    assert_eq!(parse_cover("L 0 1\n"), Err(CoverParseError::Malformed {
        line: 1,
        reason: "content before `c` header".into()
    }));
}
