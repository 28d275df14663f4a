//! The classical Shapley axioms and the extended component-game axioms
//! A1–A5 as max-defect predicates. Thresholds belong to the caller.

use std::fmt;

use crate::coalition::Coalition;
use crate::components::{Decomposer, Decomposition};
use crate::error::{Error, Result};
use crate::game::{check_player, Game};
use crate::shapley::shapley_direct;

/// Above this player count symmetry checks use a fixed sample of pairs.
pub const FULL_PAIR_SWEEP_MAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    A1,
    A2,
    A3,
    A4,
    A5,
    ShapleyEfficiency,
    ShapleySymmetry,
    ShapleyNull,
    ShapleyLinearity,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::A1 => "A1 efficiency",
            Axiom::A2 => "A2 symmetry",
            Axiom::A3 => "A3 null-player",
            Axiom::A4 => "A4 linearity",
            Axiom::A5 => "A5 reflection",
            Axiom::ShapleyEfficiency => "Shapley efficiency",
            Axiom::ShapleySymmetry => "Shapley symmetry",
            Axiom::ShapleyNull => "Shapley null-player",
            Axiom::ShapleyLinearity => "Shapley linearity",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Worst violation of one axiom, with the instance that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub max_defect: f64,
    pub witness: Option<String>,
}

impl AxiomReport {
    fn new(axiom: Axiom) -> Self {
        AxiomReport {
            axiom,
            max_defect: 0.0,
            witness: None,
        }
    }

    /// Records a candidate defect; the witness closure runs only for a new
    /// strictly positive maximum.
    fn observe(&mut self, defect: f64, witness: impl FnOnce() -> String) {
        if defect > self.max_defect || defect.is_nan() {
            self.max_defect = if defect.is_nan() { f64::INFINITY } else { defect };
            self.witness = Some(witness());
        }
    }

    fn absorb(&mut self, other: AxiomReport) {
        if other.max_defect > self.max_defect {
            self.max_defect = other.max_defect;
            self.witness = other.witness;
        }
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_defect <= tolerance
    }
}

fn ensure_same(v: &Game, d: &Decomposition) -> Result<()> {
    if v.players() != d.players() || d.components.len() != v.players() {
        return Err(Error::PlayerCountMismatch {
            left: v.players(),
            right: d.components.len(),
        });
    }
    Ok(())
}

/// A1: `max_S |v(S) − Σ_i v_i(S)|`.
pub fn check_efficiency(v: &Game, d: &Decomposition) -> Result<AxiomReport> {
    ensure_same(v, d)?;
    let mut report = AxiomReport::new(Axiom::A1);
    for s in Coalition::all(v.players()) {
        let defect = (v.value(s) - d.row_sum(s)).abs();
        report.observe(defect, || format!("S={s}"));
    }
    Ok(report)
}

/// A2: `max_S |Φ_i[v^{ij}](S^{ij}) − Φ_j[v](S)|`.
pub fn check_symmetry(v: &Game, i: usize, j: usize, solver: &dyn Decomposer) -> Result<AxiomReport> {
    let n = v.players();
    check_player(n, i)?;
    check_player(n, j)?;
    let mut report = AxiomReport::new(Axiom::A2);
    if i == j {
        return Ok(report);
    }
    let d = solver.decompose(v)?;
    let swapped = solver.decompose(&v.swap_players(i, j)?)?;
    symmetry_defects(&mut report, &d, &swapped, i, j);
    Ok(report)
}

fn symmetry_defects(report: &mut AxiomReport, d: &Decomposition, swapped: &Decomposition, i: usize, j: usize) {
    for s in Coalition::all(d.players()) {
        let lhs = swapped.components[i].value(s.swap(i, j));
        let rhs = d.components[j].value(s);
        report.observe((lhs - rhs).abs(), || format!("i={}, j={}, S={s}", i + 1, j + 1));
    }
}

/// Player pairs checked by [`check_all`]: every pair up to
/// [`FULL_PAIR_SWEEP_MAX`] players, otherwise a fixed spread of pairs.
pub fn symmetry_pairs(players: usize) -> Vec<(usize, usize)> {
    if players <= FULL_PAIR_SWEEP_MAX {
        return (0..players)
            .flat_map(|i| (i + 1..players).map(move |j| (i, j)))
            .collect();
    }
    let last = players - 1;
    let mid = players / 2;
    let mut pairs = vec![(0, 1), (0, last), (mid - 1, mid), (1, mid), (mid, last), (last - 1, last)];
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// A3 for a null player `i`: `Φ_i[v] ≡ 0`, flatness across direction `i`,
/// and agreement with the decomposition of the restricted game.
pub fn check_null_player(v: &Game, i: usize, solver: &dyn Decomposer) -> Result<AxiomReport> {
    let n = v.players();
    check_player(n, i)?;
    let marginal = v.max_marginal(i);
    if marginal != 0.0 {
        return Err(Error::NotNullPlayer {
            player: i,
            defect: marginal,
        });
    }
    let d = solver.decompose(v)?;
    let mut report = AxiomReport::new(Axiom::A3);
    for s in Coalition::all(n) {
        let x = d.components[i].value(s).abs();
        report.observe(x, || format!("Φ_{}({s}) ≠ 0", i + 1));
    }
    if n == 1 {
        return Ok(report);
    }
    let restricted = solver.decompose(&v.restrict(i)?)?;
    for j in (0..n).filter(|&j| j != i) {
        let jj = if j < i { j } else { j - 1 };
        for s in Coalition::all_without(n, i) {
            let flat = (d.components[j].value(s.with(i)) - d.components[j].value(s)).abs();
            report.observe(flat, || format!("j={}, S={s}: lift not flat", j + 1));
            let tilde = restricted.components[jj].value(s.compress(i));
            let matched = (d.components[j].value(s) - tilde).abs();
            report.observe(matched, || format!("j={}, S={s}: restriction mismatch", j + 1));
        }
    }
    Ok(report)
}

/// A4: `max_{i,S} |Φ_i[αv + βw](S) − αΦ_i[v](S) − βΦ_i[w](S)|`.
pub fn check_linearity(
    v: &Game,
    w: &Game,
    alpha: f64,
    beta: f64,
    solver: &dyn Decomposer,
) -> Result<AxiomReport> {
    let combined = v.combine(alpha, w, beta)?;
    let dv = solver.decompose(v)?;
    let dw = solver.decompose(w)?;
    let dc = solver.decompose(&combined)?;
    let mut report = AxiomReport::new(Axiom::A4);
    for i in 0..v.players() {
        for s in Coalition::all(v.players()) {
            let lhs = dc.components[i].value(s);
            let rhs = alpha * dv.components[i].value(s) + beta * dw.components[i].value(s);
            report.observe((lhs - rhs).abs(), || format!("i={}, S={s}", i + 1));
        }
    }
    Ok(report)
}

/// A5 through the equivalent constancy of `v_i(S) + v_i(S ∪ {i})` over
/// `S ⊆ [N] \ {i}`; the defect is the largest per-player spread.
pub fn check_reflection(d: &Decomposition) -> AxiomReport {
    let n = d.players();
    let mut report = AxiomReport::new(Axiom::A5);
    for (i, comp) in d.components.iter().enumerate() {
        let sums = Coalition::all_without(n, i).map(|s| (s, comp.value(s) + comp.value(s.with(i))));
        let mut lo = (Coalition::EMPTY, f64::INFINITY);
        let mut hi = (Coalition::EMPTY, f64::NEG_INFINITY);
        for (s, x) in sums {
            if x < lo.1 {
                lo = (s, x);
            }
            if x > hi.1 {
                hi = (s, x);
            }
        }
        report.observe(hi.1 - lo.1, || format!("i={}, S={}, T={}", i + 1, lo.0, hi.0));
    }
    report
}

/// Pairs `(i, j)` with `v(S ∪ {i}) = v(S ∪ {j})` for all `S ⊆ [N] \ {i, j}`.
pub fn equivalent_pairs(v: &Game) -> Vec<(usize, usize)> {
    let n = v.players();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let equivalent = Coalition::all(n)
                .filter(|s| !s.contains(i) && !s.contains(j))
                .all(|s| v.value(s.with(i)) == v.value(s.with(j)));
            if equivalent {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// The four classical axioms checked on [`shapley_direct`]. Linearity is
/// probed with the game obtained by exchanging the first and last players.
pub fn check_classical_shapley(v: &Game) -> Vec<AxiomReport> {
    let n = v.players();
    let w = v.swap_players(0, n - 1).expect("players in range");
    check_classical_shapley_with(v, &[(w, 2.0, -1.0)])
}

/// Classical axioms with caller-supplied linearity probes `(w, α, β)`,
/// each checked as `φ(αv + βw) = αφ(v) + βφ(w)`.
pub fn check_classical_shapley_with(v: &Game, probes: &[(Game, f64, f64)]) -> Vec<AxiomReport> {
    let n = v.players();
    let phi = shapley_direct(v);

    let mut efficiency = AxiomReport::new(Axiom::ShapleyEfficiency);
    efficiency.observe((phi.total() - v.grand_value()).abs(), || "grand coalition".into());

    let mut symmetry = AxiomReport::new(Axiom::ShapleySymmetry);
    for (i, j) in equivalent_pairs(v) {
        symmetry.observe((phi.phi[i] - phi.phi[j]).abs(), || format!("i={}, j={}", i + 1, j + 1));
    }

    let mut null = AxiomReport::new(Axiom::ShapleyNull);
    for i in (0..n).filter(|&i| v.is_null_player(i)) {
        null.observe(phi.phi[i].abs(), || format!("i={}", i + 1));
    }

    let mut linearity = AxiomReport::new(Axiom::ShapleyLinearity);
    for (k, (w, alpha, beta)) in probes.iter().enumerate() {
        let Ok(combined) = v.combine(*alpha, w, *beta) else {
            linearity.observe(f64::INFINITY, || format!("probe {k}: player count mismatch"));
            continue;
        };
        let pc = shapley_direct(&combined);
        let pw = shapley_direct(w);
        for i in 0..n {
            let defect = (pc.phi[i] - alpha * phi.phi[i] - beta * pw.phi[i]).abs();
            linearity.observe(defect, || format!("probe {k}, i={}", i + 1));
        }
    }
    vec![efficiency, symmetry, null, linearity]
}

/// Runs A1–A5 on `v` with `solver`.
///
/// A2 covers [`symmetry_pairs`]; A3 covers every null player of `v` plus a
/// derived game in which player 1 is made null; A4 combines `v` with its
/// first/last-player swap.
pub fn check_all(v: &Game, solver: &dyn Decomposer) -> Result<Vec<AxiomReport>> {
    let n = v.players();
    let d = solver.decompose(v)?;
    let mut reports = vec![check_efficiency(v, &d)?];

    let mut symmetry = AxiomReport::new(Axiom::A2);
    for (i, j) in symmetry_pairs(n) {
        let swapped = solver.decompose(&v.swap_players(i, j)?)?;
        symmetry_defects(&mut symmetry, &d, &swapped, i, j);
    }
    reports.push(symmetry);

    let mut null = AxiomReport::new(Axiom::A3);
    for i in (0..n).filter(|&i| v.is_null_player(i)) {
        null.absorb(check_null_player(v, i, solver)?);
    }
    null.absorb(check_null_player(&v.nullify(0)?, 0, solver)?);
    reports.push(null);

    let w = v.swap_players(0, n - 1)?;
    reports.push(check_linearity(v, &w, 1.5, -0.5, solver)?);
    reports.push(check_reflection(&d));
    Ok(reports)
}
