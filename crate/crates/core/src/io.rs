//! Game files, decomposition exports and text rendering.
//!
//! A game file is a JSON document:
//!
//! ```json
//! { "players": 3, "values": { "{1,2,3}": 1.0, "{1}": 0.25 } }
//! ```
//!
//! Keys are coalitions as brace-wrapped comma-separated 1-based player
//! labels; omitted coalitions are 0 and `"{}"` must be absent or 0. The
//! machine-readable decomposition adds one value map per player:
//!
//! ```json
//! { "players": 2, "values": { ... },
//!   "components": [ { "player": 1, "values": { ... } }, ... ] }
//! ```

use std::fmt::{self, Write as _};

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::axioms::AxiomReport;
use crate::coalition::Coalition;
use crate::components::Decomposition;
use crate::error::Error;
use crate::game::Game;
use crate::shapley::ShapleyAllocation;

/// Failure to load a game or decomposition document.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("key {key:?}: {reason}")]
    Key { key: String, reason: String },
    #[error("{0}")]
    Constraint(#[from] Error),
}

/// Coalition-keyed values in document order, keeping duplicates so they can
/// be reported.
#[derive(Debug, Default)]
struct Entries(Vec<(String, f64)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = Entries;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from coalition keys to numbers")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Entries, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, f64>()? {
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    player: usize,
    values: Entries,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    players: usize,
    values: Entries,
    #[serde(default)]
    components: Option<Vec<RawComponent>>,
}

/// A parsed document: a game, optionally with supplied component games.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Game(Game),
    Decomposition(Decomposition),
}

fn build_game(players: usize, entries: Entries) -> Result<Game, FormatError> {
    let mut seen = std::collections::HashSet::new();
    let mut parsed = Vec::with_capacity(entries.0.len());
    for (key, value) in entries.0 {
        let c: Coalition = key.parse().map_err(|e: crate::coalition::ParseCoalitionError| FormatError::Key {
            key: key.clone(),
            reason: e.reason.to_string(),
        })?;
        if !seen.insert(c) {
            return Err(FormatError::Key {
                key,
                reason: "coalition listed more than once".into(),
            });
        }
        parsed.push((c, value));
    }
    Ok(Game::new(players, parsed)?)
}

/// Parses a game file or a machine-format decomposition.
pub fn parse_document(text: &str) -> Result<Document, FormatError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let source = build_game(raw.players, raw.values)?;
    let Some(components) = raw.components else {
        return Ok(Document::Game(source));
    };
    let n = source.players();
    if components.len() != n {
        return Err(FormatError::Key {
            key: "components".into(),
            reason: format!("expected {n} component maps, found {}", components.len()),
        });
    }
    let mut games = vec![None; n];
    for comp in components {
        if comp.player == 0 || comp.player > n || games[comp.player - 1].is_some() {
            return Err(FormatError::Key {
                key: "player".into(),
                reason: format!("invalid or repeated player label {}", comp.player),
            });
        }
        games[comp.player - 1] = Some(build_game(n, comp.values)?);
    }
    Ok(Document::Decomposition(Decomposition {
        source,
        components: games.into_iter().map(|g| g.expect("all players filled")).collect(),
        residuals: vec![0.0; n],
    }))
}

pub fn parse_game(text: &str) -> Result<Game, FormatError> {
    match parse_document(text)? {
        Document::Game(g) => Ok(g),
        Document::Decomposition(d) => Ok(d.source),
    }
}

struct ValueMap<'a>(&'a Game);

impl Serialize for ValueMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = self.0.players();
        let mut map = serializer.serialize_map(Some((1 << n) - 1))?;
        for s in Coalition::all(n).skip(1) {
            map.serialize_entry(&s.to_string(), &self.0.value(s))?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct ComponentOut<'a> {
    player: usize,
    values: ValueMap<'a>,
}

#[derive(Serialize)]
struct DocumentOut<'a> {
    players: usize,
    values: ValueMap<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    components: Option<Vec<ComponentOut<'a>>>,
}

/// Game file text with every nonempty coalition listed in mask order.
pub fn render_game_file(game: &Game) -> String {
    let doc = DocumentOut {
        players: game.players(),
        values: ValueMap(game),
        components: None,
    };
    serde_json::to_string_pretty(&doc).expect("finite tables serialize") + "\n"
}

/// Machine-readable decomposition export.
pub fn render_decomposition_machine(d: &Decomposition) -> String {
    let doc = DocumentOut {
        players: d.players(),
        values: ValueMap(&d.source),
        components: Some(
            d.components
                .iter()
                .enumerate()
                .map(|(i, g)| ComponentOut {
                    player: i + 1,
                    values: ValueMap(g),
                })
                .collect(),
        ),
    };
    serde_json::to_string_pretty(&doc).expect("finite tables serialize") + "\n"
}

/// Formats with 12 significant digits, dropping trailing zeros.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_zeros(&s).to_string()
    } else {
        let s = format!("{:.*e}", (DIGITS - 1) as usize, x);
        match s.split_once('e') {
            Some((mantissa, e)) => format!("{}e{e}", trim_zeros(mantissa)),
            None => s,
        }
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Csv,
    Machine,
}

fn label_width(players: usize) -> usize {
    Coalition::grand(players).to_string().len().max(9)
}

const NUM_WIDTH: usize = 20;

pub fn render_shapley(alloc: &ShapleyAllocation, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Table => {
            let _ = writeln!(out, "{:>6}  {:>w$}", "player", "phi", w = NUM_WIDTH);
            for (i, p) in alloc.phi.iter().enumerate() {
                let _ = writeln!(out, "{:>6}  {:>w$}", i + 1, fmt_sig(*p), w = NUM_WIDTH);
            }
            let _ = writeln!(out, "{:>6}  {:>w$}", "total", fmt_sig(alloc.total()), w = NUM_WIDTH);
        }
        OutputFormat::Csv => {
            out.push_str("player,phi\n");
            for (i, p) in alloc.phi.iter().enumerate() {
                let _ = writeln!(out, "{},{}", i + 1, fmt_sig(*p));
            }
        }
        OutputFormat::Machine => {
            let map: serde_json::Map<String, serde_json::Value> = alloc
                .phi
                .iter()
                .enumerate()
                .map(|(i, p)| ((i + 1).to_string(), serde_json::json!(p)))
                .collect();
            out = serde_json::to_string_pretty(&serde_json::json!({
                "players": alloc.players(),
                "shapley": map,
            }))
            .expect("finite values serialize")
                + "\n";
        }
    }
    out
}

/// One row per coalition: label, `v(S)`, each `v_i(S)`, and the check
/// column `v(S) − Σ_i v_i(S)`.
pub fn render_decomposition(d: &Decomposition, format: OutputFormat) -> String {
    let n = d.players();
    let mut out = String::new();
    match format {
        OutputFormat::Machine => return render_decomposition_machine(d),
        OutputFormat::Table => {
            let lw = label_width(n);
            let _ = write!(out, "{:<lw$}  {:>w$}", "coalition", "v(S)", w = NUM_WIDTH);
            for i in 0..n {
                let _ = write!(out, "  {:>w$}", format!("v{}(S)", i + 1), w = NUM_WIDTH);
            }
            let _ = writeln!(out, "  {:>w$}", "check", w = NUM_WIDTH);
            for s in Coalition::all(n) {
                let _ = write!(out, "{:<lw$}  {:>w$}", s.to_string(), fmt_sig(d.source.value(s)), w = NUM_WIDTH);
                for g in &d.components {
                    let _ = write!(out, "  {:>w$}", fmt_sig(g.value(s)), w = NUM_WIDTH);
                }
                let check = d.source.value(s) - d.row_sum(s);
                let _ = writeln!(out, "  {:>w$}", fmt_sig(check), w = NUM_WIDTH);
            }
        }
        OutputFormat::Csv => {
            out.push_str("coalition,v");
            for i in 0..n {
                let _ = write!(out, ",v{}", i + 1);
            }
            out.push_str(",check\n");
            for s in Coalition::all(n) {
                let _ = write!(out, "\"{s}\",{}", fmt_sig(d.source.value(s)));
                for g in &d.components {
                    let _ = write!(out, ",{}", fmt_sig(g.value(s)));
                }
                let _ = writeln!(out, ",{}", fmt_sig(d.source.value(s) - d.row_sum(s)));
            }
        }
    }
    out
}

/// A labelled defect row, as printed by the verifier.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectRow {
    pub name: String,
    pub max_defect: f64,
    pub witness: Option<String>,
}

impl From<&AxiomReport> for DefectRow {
    fn from(r: &AxiomReport) -> Self {
        DefectRow {
            name: r.axiom.name().to_string(),
            max_defect: r.max_defect,
            witness: r.witness.clone(),
        }
    }
}

/// Fixed-column table: name, max defect, pass/FAIL at `tolerance`, witness.
pub fn render_defects(rows: &[DefectRow], tolerance: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<28}  {:>14}  {:<6}  witness", "check", "max defect", "status");
    for r in rows {
        let status = if r.max_defect <= tolerance { "pass" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{:<28}  {:>14.3e}  {:<6}  {}",
            r.name,
            r.max_defect,
            status,
            r.witness.as_deref().unwrap_or("-")
        );
    }
    out
}
