// Reading and writing game files and machine-readable decompositions.

use hodge_shapley::io::{parse_document, parse_game, render_decomposition, render_decomposition_machine, Document, OutputFormat};
use hodge_shapley::{decompose, SolverConfig};

const GAME: &str = r#"{
  "players": 3,
  "values": {
    "{1}": 1,
    "{2}": 0.5,
    "{1,2}": 3,
    "{1,2,3}": 4
  }
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let game = parse_game(GAME)?;
    let d = decompose(&game, &SolverConfig::default())?;
    print!("{}", render_decomposition(&d, OutputFormat::Table));

    let text = render_decomposition_machine(&d);
    let Document::Decomposition(back) = parse_document(&text)? else {
        return Err("expected a decomposition".into());
    };
    assert_eq!(back.source, game);
    assert_eq!(back.max_abs_diff(&d), 0.0);
    println!("machine export: {} bytes, re-parsed bit for bit", text.len());

    match parse_game(r#"{"players": 2, "values": {"{1,,2}": 1}}"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => return Err("malformed key accepted".into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
