use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const INTEGERS: &str = r#"{"kind":"cayley","family":"integers"}"#;
const LATTICE: &str = r#"{"kind":"cayley","family":"integer-lattice-2d"}"#;
const FREE: &str = r#"{"kind":"cayley","family":"free"}"#;
const DIHEDRAL: &str = r#"{"kind":"cayley","family":"infinite-dihedral"}"#;
const CYCLIC_2: &str = r#"{"kind":"cayley","family":"integers-times-cyclic","m":2}"#;
const CYCLIC_3: &str = r#"{"kind":"cayley","family":"integers-times-cyclic","m":3}"#;
const HALF_LINE: &str = r#"{"kind":"layered","mode":"periodic","period":{"layers":[["a"]]},"wrap":[["a","a"]]}"#;
const HALL: &str =
    r#"{"kind":"layered","mode":"periodic","period":{"layers":[["a","b"]]},"wrap":[["a","a"],["b","a"]]}"#;
const CROSSINGS: &str = r#"{"kind":"layered","mode":"periodic","period":{"layers":[["a","b"]]},
    "wrap":[["a","a"],["b","b"],["a","b"]]}"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }
}

fn horoscope(args: &[&str], input: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horoscope"))
        .arg(args[0])
        .arg(input)
        .args(&args[1..])
        .output()
        .unwrap()
}

fn json(args: &[&str], input: &Path) -> Value {
    let out = horoscope(args, input);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema"], "horoscope/1");
    assert_eq!(doc["command"], args[0]);
    doc["result"].clone()
}

fn numbers(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()
}

#[test]
fn growth_verdicts() {
    let f = Fixture::new();
    let r = json(&["growth"], &f.file("z.json", INTEGERS));
    assert_eq!(numbers(&r["sphere_sizes"])[1..], [2; 8]);
    assert_eq!(r["verdict"], "linear-candidate");
    assert_eq!(r["constant_size"]["k"], 2);

    // Spheres of the square lattice have 4r points.
    let r = json(&["growth", "--radius", "10"], &f.file("z2.json", LATTICE));
    let expected: Vec<i64> = (0..=10).map(|r| if r == 0 { 1 } else { 4 * r }).collect();
    assert_eq!(numbers(&r["sphere_sizes"]), expected);
    assert_eq!(r["verdict"], "not-linear");

    // Spheres of the 4-regular tree have 4 * 3^(r-1) points.
    let r = json(&["growth", "--radius", "6"], &f.file("f.json", FREE));
    let expected: Vec<i64> = (0..=6).map(|r| if r == 0 { 1 } else { 4 * 3i64.pow(r - 1) }).collect();
    assert_eq!(numbers(&r["sphere_sizes"]), expected);
    assert_eq!(r["verdict"], "not-linear");
}

#[test]
fn horo_counts() {
    let f = Fixture::new();
    let r = json(&["horo", "--radius", "10"], &f.file("z.json", INTEGERS));
    let counts: Vec<i64> = r["radii"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["count"].as_i64().unwrap())
        .collect();
    assert_eq!(counts, vec![2; 10]);
    assert_eq!(r["stabilized"], true);

    // ℤ × ℤ₂: b_z for z far to either side, on either sheet; four functions.
    let r = json(&["horo", "--radius", "10"], &f.file("c2.json", CYCLIC_2));
    let counts: Vec<i64> = r["radii"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["count"].as_i64().unwrap())
        .collect();
    assert!(counts[5..].iter().all(|&c| c == 4), "{counts:?}");
    assert_eq!(r["stabilized"], true);

    let r = json(&["horo", "--radius", "6"], &f.file("z2.json", LATTICE));
    let counts: Vec<i64> = r["radii"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["count"].as_i64().unwrap())
        .collect();
    assert!(counts.windows(2).all(|w| w[0] < w[1]), "{counts:?}");
    assert_eq!(r["stabilized"], false);
}

#[test]
fn horo_maps_are_busemann_functions_on_the_line() {
    let f = Fixture::new();
    let r = json(&["horo", "--radius", "3"], &f.file("z.json", INTEGERS));
    let maps = &r["radii"][2]["restrictions"]["maps"];
    let mut seen: Vec<Vec<(i64, i64)>> = maps
        .as_array()
        .unwrap()
        .iter()
        .map(|m| {
            m.as_array()
                .unwrap()
                .iter()
                .map(|p| (p[0].as_i64().unwrap(), p[1].as_i64().unwrap()))
                .collect()
        })
        .collect();
    seen.sort();
    let line = |sign: i64| (-3..=3).map(|y| (y, sign * y)).collect::<Vec<_>>();
    assert_eq!(seen, vec![line(1), line(-1)]);
}

fn minima(r: &Value) -> Vec<Option<i64>> {
    r["verification"]["depths"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["minimum"].as_i64())
        .collect()
}

#[test]
fn cover_reports() {
    let f = Fixture::new();
    let r = json(&["cover"], &f.file("half.json", HALF_LINE));
    assert_eq!(r["cover"]["k"], 1);
    assert_eq!(minima(&r), vec![Some(10), Some(20), Some(40)]);
    // Path counts can exceed 2^64, so they travel as decimal strings.
    assert_eq!(r["verification"]["depths"][2]["spanning_paths"], "1");

    let r = json(&["cover"], &f.file("hall.json", HALL));
    assert_eq!(r["cover"]["paths"].as_array().unwrap().len(), 2);
    assert_eq!(r["verification"]["status"], "checked");
    for (m, floor) in minima(&r).into_iter().zip([8, 18, 38]) {
        assert!(m.unwrap() >= floor);
    }

    let r = json(&["cover"], &f.file("cross.json", CROSSINGS));
    assert_eq!(r["cover"]["paths"].as_array().unwrap().len(), 2);
    for (m, depth) in minima(&r).into_iter().zip([10, 20, 40]) {
        assert!(2 * m.unwrap() >= depth);
    }
}

#[test]
fn cover_skips_verification_on_wide_layers() {
    let names: Vec<String> = (0..7).map(|i| format!("\"v{i}\"")).collect();
    let wrap: Vec<String> = (0..7).map(|i| format!("[\"v{i}\",\"v{i}\"]")).collect();
    let spec = format!(
        r#"{{"kind":"layered","mode":"periodic","period":{{"layers":[[{}]]}},"wrap":[{}]}}"#,
        names.join(","),
        wrap.join(",")
    );
    let f = Fixture::new();
    let r = json(&["cover"], &f.file("wide.json", &spec));
    assert_eq!(r["cover"]["k"], 7);
    assert_eq!(r["verification"]["status"], "skipped");
}

#[test]
fn orbit_witnesses() {
    let f = Fixture::new();
    let r = json(&["orbit"], &f.file("z.json", INTEGERS));
    assert_eq!(r["witness"]["image_gcd"], 1);
    assert_eq!(r["growth_verdict"], "linear-candidate");
    let values: Vec<(i64, i64)> = r["witness"]["sampled_values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_i64().unwrap(), p[1].as_i64().unwrap()))
        .collect();
    let sign = values.iter().find(|(h, _)| *h != 0).map(|(h, v)| v / h).unwrap();
    assert!(sign == 1 || sign == -1);
    assert!(values.iter().all(|(h, v)| *v == sign * h));

    // D∞: the stabilizer sample is made of translations (n, 0).
    let r = json(&["orbit"], &f.file("d.json", DIHEDRAL));
    let sample = r["orbit"]["stabilizer_sample"].as_array().unwrap();
    assert!(!sample.is_empty());
    assert!(sample.iter().all(|x| x[1] == 0));
    assert_eq!(r["witness"]["image_gcd"], 2);

    // ℤ × ℤ₃: the homomorphism ignores the torsion coordinate.
    let r = json(&["orbit"], &f.file("c3.json", CYCLIC_3));
    for p in r["witness"]["sampled_values"].as_array().unwrap() {
        assert_eq!(p[1].as_i64().unwrap().abs(), p[0][0].as_i64().unwrap().abs());
    }
    assert!(r["witness"]["kernel_sample"]
        .as_array()
        .unwrap()
        .iter()
        .all(|x| x[0] == 0));
}

#[test]
fn orbit_on_the_lattice_fails_the_invariance_check() {
    let f = Fixture::new();
    let out = horoscope(&["orbit", "--radius", "4"], &f.file("z2.json", LATTICE));
    assert_eq!(out.status.code(), Some(6));
}

#[test]
fn reroot_given_and_seeded_rays() {
    let f = Fixture::new();
    let input = f.file(
        "ray.json",
        r#"{"kind":"cayley","family":"integer-lattice-2d","ray":[[3,1],[4,1],[4,2],[5,2],[6,2],[6,3]]}"#,
    );
    let r = json(&["reroot"], &input);
    assert_eq!(r["source"], "input");
    let rerooted = r["rerooted"].as_array().unwrap();
    assert_eq!(rerooted[0], serde_json::json!([0, 0]));
    assert_eq!(rerooted.last().unwrap(), &serde_json::json!([6, 3]));
    // Geodesic from the origin: coordinates sum to the index.
    for (i, v) in rerooted.iter().enumerate() {
        assert_eq!(v[0].as_i64().unwrap().abs() + v[1].as_i64().unwrap().abs(), i as i64);
    }

    let free = f.file("f.json", FREE);
    let a = horoscope(&["reroot", "--seed", "5", "--radius", "4"], &free);
    let b = horoscope(&["reroot", "--seed", "5", "--radius", "4"], &free);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["result"]["source"], "seeded");
    assert_eq!(r["result"]["rerooted"][0], "");
}

#[test]
fn reports_are_deterministic_and_written_to_out() {
    let f = Fixture::new();
    let input = f.file("c2.json", CYCLIC_2);
    let out_a = f.dir.path().join("a.json");
    let out_b = f.dir.path().join("b.json");
    for out in [&out_a, &out_b] {
        let o = horoscope(&["horo", "--radius", "5", "--out", out.to_str().unwrap()], &input);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&out_a).unwrap(), std::fs::read(&out_b).unwrap());
}

#[test]
fn csv_output() {
    let f = Fixture::new();
    let out = horoscope(
        &["growth", "--radius", "3", "--format", "csv"],
        &f.file("z.json", INTEGERS),
    );
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "schema,radius,sphere,ball\nhoroscope/1,0,1,1\nhoroscope/1,1,2,3\nhoroscope/1,2,2,5\nhoroscope/1,3,2,7\n"
    );
    let out = horoscope(&["cover", "--format", "csv"], &f.file("hall.json", HALL));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("schema,path,start,prefix,cycle"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn exit_codes() {
    let f = Fixture::new();
    let z = f.file("z.json", INTEGERS);
    let code = |args: &[&str], input: &Path| horoscope(args, input).status.code();
    assert_eq!(code(&["growth", "--radius", "0"], &z), Some(2));
    assert_eq!(code(&["horo", "--depth", "8", "--window", "8"], &z), Some(2));
    assert_eq!(code(&["growth"], &f.file("bad.json", r#"{"kind":"cayley","#)), Some(3));
    assert_eq!(
        code(&["growth"], &f.file("fam.json", r#"{"kind":"cayley","family":"sl2z"}"#)),
        Some(3)
    );
    assert_eq!(
        code(
            &["growth", "--radius", "30", "--budget", "100"],
            &f.file("z2.json", LATTICE)
        ),
        Some(4)
    );
    assert_eq!(code(&["growth"], &f.file("half.json", HALF_LINE)), Some(5));
    assert_eq!(code(&["cover"], &z), Some(5));
    assert_eq!(code(&["growth"], &f.dir.path().join("missing.json")), Some(7));
    let bad_ray = f.file("ray.json", r#"{"kind":"cayley","family":"integers","ray":[[1]]}"#);
    assert_eq!(code(&["reroot"], &bad_ray), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_horoscope"))
        .arg("nonsense")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
