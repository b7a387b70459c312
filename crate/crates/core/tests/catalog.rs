use std::fs;

use upb_core::unextend::{drop_row, enumerate_orthogonal, is_upb};
use upb_core::uom::{
    allowed_column_symmetries, catalog, catalog_json, catalog_names, coincidence_profile, coincidence_table,
    distinguishing_features, families, independent_variable_counts, instantiate, instantiate_with, lookup,
    parse_catalog, Genericity, Label, LintFinding, UomSpec,
};
use upb_core::{CMatrix, Error, PartySplit};

#[test]
fn catalog_has_every_transcribed_entry() {
    let names = catalog_names();
    assert_eq!(names.len(), 26);
    assert_eq!(names.iter().filter(|n| n.starts_with("F2(")).count(), 12);
    assert_eq!(names.iter().filter(|n| n.starts_with("F6(")).count(), 6);
    assert!(names.contains(&"F1(i3=i4')"));
    assert!(names.contains(&"SHIFTS3"));
    assert_eq!(catalog().len(), 26);
    assert_eq!(parse_catalog(catalog_json()).unwrap().len(), 26);
}

#[test]
fn every_four_qubit_entry_is_an_orthogonal_upb() {
    for (name, spec) in catalog() {
        let (_, set) = instantiate(&spec, 1).unwrap();
        set.require_orthogonal().unwrap();
        if set.n_qubits() == 4 {
            assert_eq!(set.len(), 8, "{name}");
            assert!(is_upb(&set, &PartySplit::ab_cd()).unwrap(), "{name}");
            assert!(is_upb(&set, &PartySplit::four_qubit()).unwrap(), "{name}");
        }
    }
}

#[test]
fn spec_roundtrips_through_a_file() {
    let f1 = lookup("F1").unwrap();
    let path = std::env::temp_dir().join(format!("upb-core-f1-{}.json", std::process::id()));
    fs::write(&path, f1.to_json()).unwrap();
    let back = UomSpec::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    fs::remove_file(&path).unwrap();
    assert_eq!(back, f1);
}

#[test]
fn catalog_file_errors() {
    let short_row = r#"[{"name":"x","rows":1,"cols":4,"grid":[["0","0","0"]]}]"#;
    assert!(matches!(parse_catalog(short_row), Err(Error::Parse { location, .. }) if location == "[0].grid[0]"));
    let dangling = r#"[{"name":"x","rows":1,"cols":1,"grid":[["a"]],"constraints":[{"subject":"q'","forbidden":["0"]}]}]"#;
    assert_eq!(parse_catalog(dangling), Err(Error::UnknownVariable("q".into())));
    let dup = r#"[{"name":"x","rows":1,"cols":1,"grid":[["0"]]},{"name":"x","rows":1,"cols":1,"grid":[["1"]]}]"#;
    assert!(matches!(parse_catalog(dup), Err(Error::Parse { .. })));
    assert_eq!(lookup("F7"), Err(Error::UnknownUom("F7".into())));
}

#[test]
fn independent_variable_counts_per_family() {
    let got: Vec<Vec<usize>> = families().iter().map(independent_variable_counts).collect();
    assert_eq!(
        got,
        vec![vec![2, 2, 2, 3], vec![2, 2, 2, 4], vec![2, 2, 3, 2], vec![2, 3, 2, 3], vec![3, 2, 2, 2], vec![2, 2, 2, 4]]
    );
}

/// Renames every variable of `spec` to a fresh name.
fn renamed(spec: &UomSpec) -> UomSpec {
    spec.variables().iter().fold(spec.clone(), |s, v| s.force_equal(v, &Label::var(&format!("z_{v}"))))
}

fn column_permuted(spec: &UomSpec, perm: &[usize; 4]) -> UomSpec {
    let mut out = spec.clone();
    out.grid = spec.grid.iter().map(|r| perm.iter().map(|&k| r[k].clone()).collect()).collect();
    out
}

#[test]
fn invariants_ignore_variable_names() {
    for f in families() {
        let r = renamed(&f);
        assert_ne!(r.variables(), f.variables());
        assert_eq!(coincidence_table(&r), coincidence_table(&f));
        assert_eq!(independent_variable_counts(&r), independent_variable_counts(&f));
        assert!(distinguishing_features(&f, &r).is_empty(), "{}", f.name);
    }
}

#[test]
fn allowed_symmetries_never_distinguish_a_family_from_itself() {
    for f in families() {
        for perm in allowed_column_symmetries() {
            let moved = column_permuted(&f, &perm);
            assert!(distinguishing_features(&f, &moved).is_empty(), "{} under {perm:?}", f.name);
        }
    }
}

#[test]
fn f3_and_f6_differ_on_the_zero_block() {
    let f3 = lookup("F3").unwrap();
    let f6 = lookup("F6").unwrap();
    // columns 1 and 3 (0-based 0 and 2): F3 repeats (0, 0), F6 does not
    assert!(coincidence_profile(&f3, 0, 2) > 0);
    assert_eq!(coincidence_profile(&f6, 0, 2), 0);
    assert_eq!(coincidence_profile(&f6, 1, 2), 0);
}

#[test]
fn lint_flags_incomplete_constraints_without_repair() {
    let f2 = lookup("F2").unwrap();
    assert!(f2.lint().contains(&LintFinding::UnconstrainedVariable { name: "i4".into() }));
    assert!(lookup("F1").unwrap().lint().is_empty());
    assert_eq!(lookup("F2").unwrap(), f2);
}

#[test]
fn verbatim_mode_allows_coincident_variables() {
    let f1 = lookup("F1").unwrap();
    let mut hit = false;
    for seed in 0..200 {
        let (inst, _) = instantiate_with(&f1, seed, Genericity::Verbatim).unwrap();
        assert!(inst.satisfies(&f1).unwrap());
        let vals: Vec<_> = inst.assignment.values().collect();
        hit |= (0..vals.len()).any(|a| (a + 1..vals.len()).any(|b| vals[a] == vals[b]));
    }
    assert!(hit, "no verbatim sample had two equal variables");
}

#[test]
fn t11_matches_the_closed_form() {
    // |0000>, |f5', 0, h3', 0>, |f5, g3, *>, |f5, g3', *>
    let spec = lookup("F1").unwrap();
    for seed in 1..=5 {
        let (inst, set) = instantiate(&spec, seed).unwrap();
        let v = |s: &str| inst.value(&s.parse::<Label>().unwrap()).unwrap().vector();
        let sol = enumerate_orthogonal(&drop_row(&set, 1).unwrap(), &PartySplit::ab_cd()).unwrap();
        assert_eq!(sol.count(), Some(4));
        let canon = |a: &CMatrix, b: &CMatrix| a.kron(b).projective_canonical();
        let ab: Vec<CMatrix> = sol.vectors.iter().map(|p| p[0].clone()).collect();
        let cd: Vec<CMatrix> = sol.vectors.iter().map(|p| p[1].clone()).collect();
        assert!(sol.vectors.contains(&vec![canon(&v("0"), &v("0")), canon(&v("0"), &v("0"))]));
        assert!(sol.vectors.contains(&vec![canon(&v("f5'"), &v("0")), canon(&v("h3'"), &v("0"))]));
        assert!(ab.contains(&canon(&v("f5"), &v("g3"))));
        assert!(ab.contains(&canon(&v("f5"), &v("g3'"))));
        // the last two CD parts are entangled two-qubit states
        let entangled = cd.iter().filter(|c| {
            let e = c.entries();
            &(&e[0] * &e[3]) != &(&e[1] * &e[2])
        });
        assert_eq!(entangled.count(), 2);
    }
}
