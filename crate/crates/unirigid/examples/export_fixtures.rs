//! Write every built-in fixture to JSON, showing the on-disk framework and
//! certificate formats the CLI consumes.
//!
//! Usage: `cargo run --example export_fixtures [output-dir]`
//! (defaults to `fixtures/` under the crate root).

use std::path::PathBuf;

use unirigid::certificate::Certificate;
use unirigid::fixtures;
use unirigid::io::{write_certificate, write_framework};

fn main() -> unirigid::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"));
    std::fs::create_dir_all(&dir)?;

    let frameworks = [
        ("ladder.json", fixtures::ladder()),
        ("ladder_plus_diagonal.json", fixtures::ladder_with_diagonal()),
        ("triangle.json", fixtures::triangle()),
        ("k4_square.json", fixtures::k4_square()),
        ("k4_square_tensegrity.json", fixtures::k4_square_tensegrity()),
        ("square_4cycle.json", fixtures::square_cycle()),
        ("one_pole.json", fixtures::one_pole()),
        ("four_pole.json", fixtures::four_pole()),
        ("hidden_stress.json", fixtures::hidden_stress()),
    ];
    for (name, fw) in &frameworks {
        write_framework(&dir.join(name), fw)?;
        println!("wrote {name}");
    }

    let certificates: [(&str, &str, Certificate); 4] = [
        ("ladder.cert.json", "ladder.json", fixtures::ladder_certificate()),
        ("k4_square.cert.json", "k4_square.json", fixtures::k4_certificate()),
        (
            "one_pole_dimensional.cert.json",
            "one_pole.json",
            fixtures::one_pole_certificate_dimensional(),
        ),
        (
            "one_pole_universal.cert.json",
            "one_pole.json",
            fixtures::one_pole_certificate_universal(),
        ),
    ];
    for (name, fw_name, cert) in &certificates {
        let fw = frameworks
            .iter()
            .find(|(n, _)| n == fw_name)
            .map(|(_, fw)| fw)
            .unwrap();
        write_certificate(&dir.join(name), cert, &fw.graph)?;
        println!("wrote {name}");
    }

    // homogeneous map matrix for the transform subcommand
    let orchard = fixtures::orchard_map();
    let rows = unirigid::io::matrix_rows(orchard.matrix());
    std::fs::write(
        dir.join("orchard_map.json"),
        serde_json::to_string_pretty(&rows)? + "\n",
    )?;
    println!("wrote orchard_map.json");
    Ok(())
}
