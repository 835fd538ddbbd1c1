//! End-to-end checks across modules: fixtures, coverings, sweeps and growth.

use std::path::PathBuf;

use omega_spectra::covering::{
    fiber_counts, lift_path, path_from_labels, spectral_inclusion_report, verify_covering,
    HulanickiMode,
};
use omega_spectra::formats::{parse_covering, parse_graph, serialize_document, GraphDocument};
use omega_spectra::graph::{laplace_type_operator, markov_operator, WeightedGraph};
use omega_spectra::omega::{ball_sizes, OmegaWord};
use omega_spectra::schreier::{cayley_ball, level_projection_covering, schreier_graph};
use omega_spectra::spectra::{
    eigenvalues_selfadjoint, level_spectrum, spectrum_sweep, IntervalUnion, SpectrumReport,
};
use omega_spectra::{Error, Limits};

fn fixture(name: &str) -> Vec<u8> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    std::fs::read(path).unwrap()
}

fn omega(text: &str) -> OmegaWord {
    OmegaWord::parse(text).unwrap()
}

#[test]
fn level_fixtures_match_fresh_serialization() {
    for (name, n) in [
        ("gamma1_012.json", 1),
        ("gamma2_012.json", 2),
        ("gamma3_012.json", 3),
    ] {
        let g = schreier_graph(&omega(":012"), n).unwrap();
        let text = serialize_document(&GraphDocument::from_schreier(&g).unwrap());
        assert_eq!(text.as_bytes(), fixture(name).as_slice(), "{name}");
    }
}

#[test]
fn fixture_operator_agrees_with_markov_operator() {
    let parsed = parse_graph(&fixture("gamma4_0_12.json")).unwrap();
    let level = parsed.metadata.level.unwrap();
    let w = omega(parsed.metadata.omega.as_deref().unwrap());
    let from_file = laplace_type_operator(&parsed.graph);
    let direct = markov_operator(schreier_graph(&w, level).unwrap().graph()).unwrap();
    assert_eq!(from_file.dim(), direct.dim());
    for i in 0..direct.dim() {
        for j in 0..direct.dim() {
            assert!((from_file.entry(i, j) - direct.entry(i, j)).norm() < 1e-15);
        }
    }
}

#[test]
fn hermitian_fixture_has_real_spectrum() {
    let parsed = parse_graph(&fixture("hermitian3.json")).unwrap();
    assert!(parsed.graph.is_self_adjoint());
    let eigs =
        eigenvalues_selfadjoint(&laplace_type_operator(&parsed.graph), &Limits::default()).unwrap();
    assert_eq!(eigs.values.len(), 3);
    assert!(eigs.residuals.unwrap().iter().all(|r| *r < 1e-12));
}

#[test]
fn projections_between_levels_are_coverings() {
    for w in [":012", "0:12", ":0112", "2:0"] {
        let w = omega(w);
        for m in 2..=5 {
            for n in 1..m {
                let c = level_projection_covering(&w, m, n).unwrap();
                assert!(verify_covering(&c).unwrap().passed(), "{w} {m}->{n}");
                // every fiber has the same size on a finite cover
                let fiber = fiber_counts(&c, 0, 1 << m).unwrap();
                assert_eq!(*fiber.last().unwrap(), 1 << (m - n));
            }
        }
    }
}

#[test]
fn finite_cover_spectrum_contains_target_spectrum() {
    let w = omega(":012");
    let target = level_spectrum(&w, 3, &Limits::default()).unwrap();
    let source = level_spectrum(&w, 6, &Limits::default()).unwrap();
    for lambda in &target.values {
        assert!(
            source.values.iter().any(|mu| (mu - lambda).abs() < 1e-9),
            "{lambda}"
        );
    }
}

#[test]
fn lifts_follow_labels() {
    let w = omega(":012");
    let c = level_projection_covering(&w, 4, 2).unwrap();
    let down = path_from_labels(&c.target, 0, "abacad").unwrap();
    for start in (0..16).filter(|&x| c.vertex_map[x] == 0) {
        let up = lift_path(&c, 0, &down, start).unwrap();
        assert_eq!(up.vertices[0], start);
        let projected: Vec<usize> = up.vertices.iter().map(|&x| c.vertex_map[x]).collect();
        let expected = path_from_labels(&c.target, 0, "abacad")
            .map(|edges| omega_spectra::covering::path_vertices(&c.target, 0, &edges).unwrap())
            .unwrap();
        assert_eq!(projected, expected);
    }
    assert!(matches!(
        lift_path(&c, 0, &down, 15),
        Err(Error::BadStart(15))
    ));
}

#[test]
fn corrupted_cover_is_rejected_by_the_verifier() {
    let good = parse_covering(&fixture("cover_3_to_2.json")).unwrap();
    assert!(verify_covering(&good).unwrap().passed());
    let bad = parse_covering(&fixture("cover_3_to_2_corrupted.json")).unwrap();
    assert!(verify_covering(&bad).unwrap().violation.is_some());
}

#[test]
fn sweep_matches_per_level_spectra() {
    let w = omega("0:12");
    let target = IntervalUnion::parse("[-0.5,0]u[0.5,1]").unwrap();
    let limits = Limits::default();
    let sweep = spectrum_sweep(&w, 7, &target, 1e-8, &limits).unwrap();
    assert!(sweep.all_contained());
    assert!(sweep.hausdorff_non_increasing());
    for level in &sweep.levels {
        let g = schreier_graph(&w, level.level).unwrap();
        let dense = eigenvalues_selfadjoint(&markov_operator(g.graph()).unwrap(), &limits).unwrap();
        let report = SpectrumReport::new(dense, Some(&target), 1e-8);
        let gap = level
            .report
            .values()
            .iter()
            .zip(report.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(gap < 1e-10, "level {}", level.level);
    }
}

#[test]
fn markov_weights_round_trip() {
    let g = schreier_graph(&omega(":01"), 3).unwrap();
    let weighted = WeightedGraph::markov(g.graph()).unwrap();
    assert!(weighted.is_self_adjoint());
    let doc = GraphDocument::from_schreier(&g).unwrap();
    let decoded = doc.decode().unwrap();
    assert_eq!(decoded.graph, weighted);
}

#[test]
fn growth_is_independent_of_the_omega_representative() {
    let limits = Limits::default();
    let a = ball_sizes(&omega(":012"), 5, &limits).unwrap();
    let b = ball_sizes(&omega("012:012"), 5, &limits).unwrap();
    assert_eq!(a.sizes, b.sizes);
    assert_eq!(a.sizes[..4], [1, 5, 11, 23]);
}

#[test]
fn cayley_ball_residuals_are_sound() {
    let limits = Limits::default();
    let ball = cayley_ball(&omega(":012"), 6, 2, &limits).unwrap();
    assert!(verify_covering(&ball.covering).unwrap().passed());
    let report = spectral_inclusion_report(
        &ball.covering,
        &[1, 2, 3],
        HulanickiMode::Subexponential,
        &limits,
    )
    .unwrap();
    assert!(report.all_sound());
    assert_eq!(report.entries.len(), 4);
}
