use hyperramsey::blocks::BlockHypergraph;
use hyperramsey::pipeline::{run_witness, verify_certificate, RunConfig, WitnessCertificate};
use hyperramsey::{make_family, Family, Hypergraph, Pattern};

#[test]
fn implicit_and_edge_formats_agree() {
    for seed in [0, 7] {
        let h = BlockHypergraph::random(5, 3, seed).unwrap();
        let back = BlockHypergraph::parse_implicit(&h.to_implicit_string()).unwrap();
        assert_eq!(back.to_hypergraph(), h.to_hypergraph());
        let explicit = Hypergraph::parse(&h.edge_file_string(None)).unwrap();
        assert_eq!(explicit, h.to_hypergraph());
    }
}

#[test]
fn pattern_file_round_trip() {
    for fam in [Family::F5, Family::Tp3, Family::Lc3, Family::K4Minus] {
        let f = make_family(fam, 3).unwrap();
        let g = Pattern::parse(&f.to_file_string(), Some(f.name())).unwrap();
        assert!(f.is_isomorphic(&g).unwrap());
    }
}

#[test]
fn certificate_text_round_trip() {
    let cfg = RunConfig::new(7, 3, make_family(Family::F5, 3).unwrap());
    let cert = run_witness(&cfg).unwrap();
    let text = cert.to_text();
    let back = WitnessCertificate::parse(&text).unwrap();
    assert_eq!(back.to_text(), text);
    assert!(verify_certificate(&back, 10_000_000, 1_000_000).unwrap().passed());
}
