use std::process::Command;
use susy_dirac::commands::{cmd_verify, figure_data, run};
use susy_dirac::config::{Cli, Module, RunConfig};
use susy_dirac::io::{Cell, Document, Table};
use clap::Parser;

fn config(args: &[&str]) -> RunConfig {
    let mut full = vec!["susy-dirac"];
    full.extend_from_slice(args);
    RunConfig::from_cli(&Cli::try_parse_from(full).unwrap()).unwrap()
}

fn doc(args: &[&str]) -> Document {
    figure_data(&config(args)).unwrap()
}

fn table<'a>(d: &'a Document, name: &str) -> &'a Table {
    d.tables.iter().find(|t| t.name == name).unwrap_or_else(|| panic!("no table {name}"))
}

fn num(c: &Cell) -> f64 {
    match c {
        Cell::Num(v) => *v,
        Cell::Text(t) => panic!("expected a number, got {t}"),
    }
}

fn text(c: &Cell) -> &str {
    match c {
        Cell::Text(t) => t,
        Cell::Num(v) => panic!("expected text, got {v}"),
    }
}

fn col(t: &Table, name: &str) -> usize {
    t.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn spectral_map_marks_the_extrema() {
    let d = doc(&["spectral-map", "--model", "custom-seeds", "--eps1=-2", "--eps2", "2", "--alpha", "0.5"]);
    let t = table(&d, "real_axis");
    let (lm, em, mk) = (col(t, "lambda_re"), col(t, "energy"), col(t, "marker"));
    let min = t.rows.iter().find(|r| text(&r[mk]) == "min").unwrap();
    assert!((num(&min[lm]) - 2.309401).abs() < 1e-6);
    assert!((num(&min[em]) - 1.732051).abs() < 1e-6);
    let max = t.rows.iter().find(|r| text(&r[mk]) == "max").unwrap();
    assert!((num(&max[lm]) + 2.309401).abs() < 1e-6);
    assert!(!table(&d, "contour").rows.is_empty());
}

#[test]
fn spectral_map_at_zero_coupling_is_the_identity() {
    let d = doc(&["spectral-map", "--alpha", "0"]);
    assert!(table(&d, "contour").rows.is_empty());
    let t = table(&d, "real_axis");
    let (lm, em) = (col(t, "lambda_re"), col(t, "energy"));
    for r in &t.rows {
        assert_eq!(num(&r[lm]), num(&r[em]));
    }
}

#[test]
fn documents_round_trip_in_both_formats() {
    for args in [&["spectral-map"][..], &["model", "--model", "poschl-teller", "--grid=-5,5,41"], &["sweep", "--model", "free-particle"]] {
        let d = doc(args);
        for json in [false, true] {
            let s = d.render(json).unwrap();
            let back = Document::parse(&s).unwrap();
            assert_eq!(back.render(json).unwrap(), s);
        }
    }
}

#[test]
fn free_particle_potential_at_origin() {
    let d = doc(&["model", "--model", "free-particle", "--alpha", "0.5", "--grid=-1,1,3"]);
    let t = table(&d, "potential");
    let mid = &t.rows[1];
    assert_eq!(num(&mid[col(t, "x")]), 0.0);
    assert!((num(&mid[col(t, "V12")]) - 0.315).abs() < 1e-12);
}

#[test]
fn coupling_changes_only_coupling_dependent_columns() {
    let a = doc(&["model", "--model", "free-particle", "--alpha", "0.5"]);
    let b = doc(&["model", "--model", "free-particle", "--alpha", "0.9"]);
    let (ta, tb) = (table(&a, "potential"), table(&b, "potential"));
    assert_eq!(ta.columns, tb.columns);
    let mut changed = vec![];
    for (j, name) in ta.columns.iter().enumerate() {
        if ta.rows.iter().zip(&tb.rows).any(|(ra, rb)| ra[j] != rb[j]) {
            changed.push(name.as_str());
        }
    }
    assert_eq!(changed, ["V12", "V14", "V23", "V34"]);
}

#[test]
fn poschl_teller_tanh_entries_vanish_at_origin() {
    let d = doc(&["model", "--model", "poschl-teller", "--alpha", "0.25", "--grid=-1,1,3"]);
    let t = table(&d, "potential");
    for c in ["V12", "V14", "V23", "V34"] {
        assert!(num(&t.rows[1][col(t, c)]).abs() < 1e-14, "{c}");
    }
    assert_eq!(table(&d, "levels").rows.len(), 8);
}

fn events(args: &[&str]) -> Vec<(String, f64, String, bool)> {
    let d = doc(args);
    let t = table(&d, "events");
    let (k, a, l, c) = (col(t, "kind"), col(t, "alpha"), col(t, "level_a"), col(t, "in_continuum"));
    t.rows.iter().map(|r| (text(&r[k]).to_string(), num(&r[a]), text(&r[l]).to_string(), text(&r[c]) == "true")).collect()
}

#[test]
fn free_particle_sweep_has_one_bic_event() {
    let ev = events(&["sweep", "--model", "free-particle"]);
    assert_eq!(ev.len(), 1, "{ev:?}");
    assert_eq!(ev[0].0, "bic");
    assert!((ev[0].1 - (3.0f64 / 7.0).sqrt()).abs() < 1e-12);
}

#[test]
fn poschl_teller_sweep_events() {
    let ev = events(&["sweep", "--model", "poschl-teller"]);
    let movable: Vec<_> = ev.iter().filter(|e| e.0 == "bic" && e.2.starts_with('E')).collect();
    assert_eq!(movable.len(), 6, "{ev:?}");
    assert!(movable.iter().all(|e| e.1 > 0.0 && e.1 < 1.0));
    assert!(ev.iter().filter(|e| e.0 == "crossing").all(|e| !e.3));
}

#[test]
fn degenerate_sweep_has_no_events() {
    let ev = events(&["sweep", "--model", "free-particle", "--alpha-sweep", "0,0,2"]);
    assert!(ev.is_empty(), "{ev:?}");
}

#[test]
fn injected_fault_fails_the_kinetic_check() {
    let cfg = config(&["verify", "--only", "composite", "--scale", "quick", "--inject-fault", "rotation-sign"]);
    let (_, report) = cmd_verify(&cfg);
    assert!(!report.passed());
    assert!(report.failed().iter().any(|c| c.name == "kinetic diagonalization"));
    assert_eq!(run(&cfg).unwrap().1, 1);
}

#[test]
fn only_selects_a_subset() {
    let cfg = config(&["verify", "--only", "spectrum", "--scale", "quick"]);
    let (_, report) = cmd_verify(&cfg);
    assert!(!report.checks.is_empty());
    assert!(report.checks.iter().all(|c| c.module == Module::Spectrum));
    assert!(report.passed());
}

fn bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_susy-dirac")).args(args).output().unwrap()
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["model", "--model", "free-particle", "--m", "0.1", "--eps1", "0.2"][..],
        &["model", "--model", "custom-seeds"],
        &["sweep", "--alpha-sweep", "0,0.5,1"],
        &["model", "--alpha", "1.5"],
        &["spectral-map", "--alpha-sweep", "0,0.5,10"],
        &["no-such-command"],
    ] {
        let out = bin(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn binary_writes_the_requested_file() {
    let path = std::env::temp_dir().join(format!("susy-dirac-{}.json", std::process::id()));
    let out = bin(&["spectral-map", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let d = Document::read(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(d.command, "spectral-map");
}
