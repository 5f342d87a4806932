use std::fs;

use collide_core::collision::tables::{table, Table, COUNT_TABLES};
use collide_core::collision::{
    config_hash, cross_validate, export_factor_rows, export_results, factor_scan, gcd_search, import_json,
    verify_lambda, DegreeTally, ExportFormat, SearchConfig,
};
use collide_core::gf::make_extension;
use collide_core::orbit::FamilySpec;
use collide_core::poly::{count_irreducibles, Poly};

fn t2(deg_max: usize) -> SearchConfig {
    COUNT_TABLES[0].config(deg_max).unwrap()
}

#[test]
fn candidates_are_all_irreducibles() {
    let cfg = COUNT_TABLES[1].config(7).unwrap();
    let res = gcd_search(&cfg).unwrap();
    for (&d, row) in &res.tally.rows {
        assert_eq!(row.candidates as u128, count_irreducibles(3, d as u32));
        assert!(row.successes <= row.candidates);
        assert_eq!(row.inconclusive, 0);
    }
    assert_eq!(res.records.len() as u64, res.tally.rows.values().map(|r| r.candidates).sum::<u64>());
    for r in &res.records {
        assert_eq!(r.success, r.outcomes.len() == 2 && r.outcomes.iter().all(|o| o.is_hit()));
    }
}

#[test]
fn every_success_has_a_verified_parameter() {
    for id in [2, 4, 8, 10] {
        let Table::Count(t) = table(id).unwrap() else { unreachable!() };
        let cfg = t.config(5).unwrap();
        let res = gcd_search(&cfg).unwrap();
        for r in res.records.iter().filter(|r| r.success) {
            assert!(verify_lambda(r, &cfg).unwrap(), "table {id} {}", r.g);
        }
    }
}

#[test]
fn thread_count_is_invisible() {
    let mut cfg = COUNT_TABLES[2].config(3).unwrap();
    let one = gcd_search(&cfg).unwrap();
    cfg.threads = 3;
    let three = gcd_search(&cfg).unwrap();
    assert_eq!(one, three);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    export_results(&one.tally, &one.records, ExportFormat::Csv, a.path()).unwrap();
    export_results(&three.tally, &three.records, ExportFormat::Csv, b.path()).unwrap();
    for f in ["summary.csv", "records.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn json_round_trip() {
    let cfg = t2(8);
    let res = gcd_search(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    export_results(&res.tally, &res.records, ExportFormat::Json, dir.path()).unwrap();
    let (tally, records) = import_json(&cfg.ctx, &dir.path().join("results.json")).unwrap();
    assert_eq!(tally, res.tally);
    assert_eq!(records, res.records);
}

#[test]
fn csv_layout() {
    let cfg = t2(3);
    let res = gcd_search(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    export_results(&res.tally, &res.records, ExportFormat::Csv, dir.path()).unwrap();
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary, "degree,candidates,successes,inconclusive\n1,2,1,0\n2,1,0,0\n3,2,2,0\n");
    let records = fs::read_to_string(dir.path().join("records.csv")).unwrap();
    let lines: Vec<&str> = records.lines().collect();
    assert_eq!(lines[0], "degree,poly,success,outcomes");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("1,\"[0,1]\","));

    let empty = tempfile::tempdir().unwrap();
    export_results(&DegreeTally::default(), &[], ExportFormat::Csv, empty.path()).unwrap();
    assert_eq!(
        fs::read_to_string(empty.path().join("summary.csv")).unwrap(),
        "degree,candidates,successes,inconclusive\n"
    );
    assert_eq!(
        fs::read_to_string(empty.path().join("records.csv")).unwrap(),
        "degree,poly,success,outcomes\n"
    );
}

#[test]
fn checkpoints_are_reused_only_on_resume() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = t2(5);
    cfg.checkpoint_dir = Some(dir.path().to_path_buf());
    cfg.resume = false;
    let first = gcd_search(&cfg).unwrap();
    let hash = config_hash(&cfg);
    let path = dir.path().join(format!("deg05-{hash}.json"));
    assert!(path.exists());

    // Flip one record on disk; a resumed run must read it back verbatim.
    let text = fs::read_to_string(&path).unwrap();
    let doctored = text.replacen("\"success\":true", "\"success\":false", 1);
    assert_ne!(text, doctored);
    fs::write(&path, doctored).unwrap();
    cfg.resume = true;
    let resumed = gcd_search(&cfg).unwrap();
    assert_eq!(resumed.tally.rows[&5].successes + 1, first.tally.rows[&5].successes);
    assert_eq!(resumed.tally.rows[&4], first.tally.rows[&4]);

    cfg.resume = false;
    assert_eq!(gcd_search(&cfg).unwrap(), first);
}

#[test]
fn config_hash_tracks_the_search_inputs() {
    let a = t2(5);
    let mut b = t2(9);
    b.threads = 4;
    b.rng_seed = 17;
    assert_eq!(config_hash(&a), config_hash(&b));
    b.step_cap = Some(100);
    assert_ne!(config_hash(&a), config_hash(&b));
    let mut c = t2(5);
    c.target = c.ctx.zero();
    assert_ne!(config_hash(&a), config_hash(&c));
}

#[test]
fn cross_validation_on_small_tables() {
    for i in [0, 1] {
        let cfg = COUNT_TABLES[i].config(3).unwrap();
        let rep = cross_validate(&cfg, 3, 6).unwrap();
        assert!(rep.ok(), "{:?}", rep.first_mismatch);
        assert!(rep.moduli_checked > 0);
    }
}

#[test]
fn factor_scan_degrees_sum_to_iterate_degree() {
    let f5 = make_extension(5, 1).unwrap();
    for d in [2u64, 3, 4] {
        let fam = FamilySpec::pure(d).unwrap();
        let rows = factor_scan(&f5, &fam, &f5.one(), &f5.from_int(2), 1, 5, 3).unwrap();
        for r in &rows {
            assert_eq!(r.total_degree() as u64, d.pow(r.n - 1));
        }
    }
    let f3 = make_extension(3, 1).unwrap();
    let fam = FamilySpec::custom(Poly::new(&f3, vec![0, 1, 0, 1]).unwrap()).unwrap();
    let rows = factor_scan(&f3, &fam, &f3.one(), &f3.zero(), 1, 5, 0).unwrap();
    assert!(rows.iter().all(|r| r.total_degree() == 3usize.pow(r.n - 1)));

    let dir = tempfile::tempdir().unwrap();
    export_factor_rows(&rows[..2], ExportFormat::Csv, dir.path()).unwrap();
    let text = fs::read_to_string(dir.path().join("factors.csv")).unwrap();
    assert!(text.starts_with("n,degree,multiplicity\n1,1,1\n"));
}

#[test]
fn bad_configs_are_rejected() {
    let f2 = make_extension(2, 1).unwrap();
    let f3 = make_extension(3, 1).unwrap();
    let fam = FamilySpec::pure(3).unwrap();
    assert!(SearchConfig::new(&f2, fam.clone(), vec![], f2.one(), 1, 3).is_err());
    assert!(SearchConfig::new(&f2, fam.clone(), vec![f2.one()], f2.one(), 0, 3).is_err());
    assert!(SearchConfig::new(&f2, fam, vec![f3.one()], f2.one(), 1, 3).is_err());
    assert!(FamilySpec::pure(1).is_err());
}
