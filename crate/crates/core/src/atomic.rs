//! Hyperfine Zeeman states, transition-line data and dipole matrix elements.
//!
//! Matrix elements are built from the fine-structure reduced element
//! `<J||d||J'>` of a line using the ground-state-normalized reduction common
//! in alkali data tables:
//!
//! ```text
//! <F m|d_q|F' m'>  = <F||d||F'> (-1)^(F'-1+m) sqrt(2F+1) (F' 1 F; m' q -m)
//! <F||d||F'>       = <J||d||J'> (-1)^(F'+J+1+I) sqrt((2F'+1)(2J+1)) {J J' 1; F' F I}
//! ```
//!
//! so that `sum_{F',m',q} |<F m|d_q|F' m'>|^2 = |<J||d||J'>|^2` for every
//! lower sublevel. The spherical components `d_0, d_{+1}, d_{-1}` refer to a
//! quantization axis parallel to the mirror surface.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::angular::{wigner3j, wigner6j};
use crate::error::AtomicError;
use crate::halfint::{phase, HalfInt};

/// Largest accepted ratio between a hyperfine interval and its line frequency.
pub const MAX_HYPERFINE_RATIO: f64 = 1e-3;

/// Fine-structure level label `n L_J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LevelLabel {
    pub n: u32,
    pub l: u32,
    pub j: HalfInt,
}

impl std::fmt::Display for LevelLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        const LETTERS: [&str; 7] = ["S", "P", "D", "F", "G", "H", "I"];
        let letter = LETTERS.get(self.l as usize).copied().unwrap_or("?");
        write!(f, "{}{}_{}", self.n, letter, self.j)
    }
}

/// A hyperfine Zeeman sublevel `|n L_J, F, m_F>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperfineState {
    pub n: u32,
    pub l: u32,
    pub j: HalfInt,
    pub f: HalfInt,
    pub m_f: HalfInt,
    /// Angular-frequency offset from the fine-structure reference level, rad/s.
    pub energy_offset: f64,
}

impl HyperfineState {
    /// Validates the state against the nuclear spin of its species.
    pub fn new(
        level: LevelLabel,
        f: HalfInt,
        m_f: HalfInt,
        nuclear_spin: HalfInt,
        energy_offset: f64,
    ) -> Result<Self, AtomicError> {
        let bad = |msg: String| Err(AtomicError::InvalidState(msg));
        if level.n == 0 {
            return bad("principal quantum number must be >= 1".into());
        }
        if level.j.twice() <= 0 {
            return bad(format!("J = {} must be positive", level.j));
        }
        if f.twice() < 0 {
            return bad(format!("F = {f} must be non-negative"));
        }
        let (lo, hi) = ((level.j - nuclear_spin).abs(), level.j + nuclear_spin);
        if f < lo || f > hi || !f.same_parity(hi) {
            return bad(format!("F = {f} outside |J - I| = {lo} .. J + I = {hi}"));
        }
        if m_f.abs() > f || !m_f.same_parity(f) {
            return bad(format!("m_F = {m_f} incompatible with F = {f}"));
        }
        if !energy_offset.is_finite() {
            return bad("energy offset must be finite".into());
        }
        Ok(Self {
            n: level.n,
            l: level.l,
            j: level.j,
            f,
            m_f,
            energy_offset,
        })
    }

    pub fn level(&self) -> LevelLabel {
        LevelLabel {
            n: self.n,
            l: self.l,
            j: self.j,
        }
    }
}

impl std::fmt::Display for HyperfineState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|{}, F={}, mF={}>", self.level(), self.f, self.m_f)
    }
}

/// One fine-structure transition from the lower level to an upper manifold.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionLine {
    pub label: Option<String>,
    pub lower: LevelLabel,
    pub upper: LevelLabel,
    /// `|<J||d||J'>|`, C m.
    pub reduced_dipole: f64,
    /// Transition angular frequency to the reference hyperfine level, rad/s.
    pub base_frequency: f64,
    /// Offset of each upper hyperfine level from the reference level, rad/s.
    pub hyperfine_intervals: BTreeMap<HalfInt, f64>,
}

impl TransitionLine {
    pub fn upper_j(&self) -> HalfInt {
        self.upper.j
    }

    /// Angular frequency from the lower reference level to upper level `f`.
    pub fn frequency(&self, f: HalfInt) -> Option<f64> {
        self.hyperfine_intervals.get(&f).map(|dw| self.base_frequency + dw)
    }
}

/// Validated transition manifold of one species.
#[derive(Clone, Debug, PartialEq)]
pub struct SpeciesData {
    pub name: Option<String>,
    pub nuclear_spin: HalfInt,
    pub lower: LevelLabel,
    pub lines: Vec<TransitionLine>,
}

/// Species file shipped with the crate: ⁸⁷Rb D1/D2 lines.
pub const RUBIDIUM_87_JSON: &str = include_str!("../data/rb87.json");

/// Hypothetical Rydberg-like species used to exercise generic inputs.
pub const HYPOTHETICAL_RYDBERG_JSON: &str = include_str!("../data/rydberg_32p_hypothetical.json");

/// The bundled ⁸⁷Rb data set.
pub fn rubidium87() -> SpeciesData {
    load_species(RUBIDIUM_87_JSON).expect("bundled rb87.json is valid")
}

impl SpeciesData {
    pub fn line_with_upper_j(&self, j: HalfInt) -> Result<&TransitionLine, AtomicError> {
        self.lines
            .iter()
            .find(|l| l.upper.j == j)
            .ok_or(AtomicError::MissingLine(j))
    }

    /// Allowed `F` values of a level with angular momentum `j`.
    pub fn f_values(&self, j: HalfInt) -> impl Iterator<Item = HalfInt> {
        HalfInt::range_inclusive((j - self.nuclear_spin).abs(), j + self.nuclear_spin)
    }

    /// A sublevel of the lower level. The lower level carries no hyperfine
    /// offsets in the data file, so every lower sublevel sits at offset 0.
    pub fn lower_state(&self, f: HalfInt, m_f: HalfInt) -> Result<HyperfineState, AtomicError> {
        HyperfineState::new(self.lower, f, m_f, self.nuclear_spin, 0.0)
    }

    /// A sublevel of the upper manifold of `line`, with its hyperfine offset.
    pub fn upper_state(&self, line: &TransitionLine, f: HalfInt, m_f: HalfInt) -> Result<HyperfineState, AtomicError> {
        let offset = *line
            .hyperfine_intervals
            .get(&f)
            .ok_or_else(|| AtomicError::InvalidState(format!("no hyperfine interval for F = {f} of {}", line.upper)))?;
        HyperfineState::new(line.upper, f, m_f, self.nuclear_spin, offset)
    }

    /// Every hyperfine Zeeman sublevel of the upper manifold of `line`.
    pub fn upper_states<'a>(&'a self, line: &'a TransitionLine) -> impl Iterator<Item = HyperfineState> + 'a {
        self.f_values(line.upper.j).flat_map(move |f| {
            f.projections()
                .map(move |m| self.upper_state(line, f, m).expect("validated at load"))
        })
    }

    /// The degenerate pair `(|F, -m>, |F, +m>)` of the lower level.
    pub fn zeeman_pair(&self, f: HalfInt, m_f: HalfInt) -> Result<(HyperfineState, HyperfineState), AtomicError> {
        Ok((self.lower_state(f, -m_f)?, self.lower_state(f, m_f)?))
    }

    /// The `|F=1, mF=-1>`, `|F=1, mF=+1>` pair.
    pub fn default_pair(&self) -> Result<(HyperfineState, HyperfineState), AtomicError> {
        self.zeeman_pair(HalfInt::ONE, HalfInt::ONE)
    }

    /// Copy of the data with every hyperfine interval set to zero.
    pub fn without_hyperfine_splitting(&self) -> SpeciesData {
        let mut out = self.clone();
        for line in &mut out.lines {
            for dw in line.hyperfine_intervals.values_mut() {
                *dw = 0.0;
            }
        }
        out
    }
}

/// `<i|d_q|g>` for a lower sublevel `g` and an upper sublevel `i`, in C m.
///
/// With this convention the element is nonzero only for
/// `m_F(i) = m_F(g) + q`, it is real, and it equals
/// `(-1)^q <g|d_{-q}|i>`.
pub fn hyperfine_dipole(
    g: &HyperfineState,
    i: &HyperfineState,
    q: i32,
    line: &TransitionLine,
    nuclear_spin: HalfInt,
) -> Result<f64, AtomicError> {
    if !(-1..=1).contains(&q) {
        return Err(AtomicError::BadSphericalIndex(q));
    }
    if g.level() != line.lower {
        return Err(AtomicError::ManifoldMismatch(format!(
            "{g} is not in the lower level {} of the line",
            line.lower
        )));
    }
    if i.level() != line.upper {
        return Err(AtomicError::ManifoldMismatch(format!(
            "{i} is not in the upper level {} of the line",
            line.upper
        )));
    }
    let q_half = HalfInt::int(q);
    if i.m_f != g.m_f + q_half || (g.f - i.f).abs() > HalfInt::ONE {
        return Ok(0.0);
    }

    let (j, jp, f, fp, m, mp) = (g.j, i.j, g.f, i.f, g.m_f, i.m_f);
    let six_j = wigner6j(j, jp, HalfInt::ONE, fp, f, nuclear_spin)?;
    let three_j = wigner3j(fp, HalfInt::ONE, f, mp, -q_half, -m)?;
    if six_j == 0.0 || three_j == 0.0 {
        return Ok(0.0);
    }
    let mismatch = || AtomicError::ManifoldMismatch(format!("non-integer phase for {g} -> {i}"));
    let reduced_phase = phase(fp + j + HalfInt::ONE + nuclear_spin).ok_or_else(mismatch)?;
    let projection_phase = phase(fp - HalfInt::ONE + m).ok_or_else(mismatch)?;
    let q_phase = if q == 0 { 1.0 } else { -1.0 };

    let reduced_f =
        line.reduced_dipole * reduced_phase * f64::from(fp.multiplicity() * j.multiplicity()).sqrt() * six_j;
    let lower_to_upper = reduced_f * projection_phase * f64::from(f.multiplicity()).sqrt() * three_j;
    Ok(q_phase * lower_to_upper)
}

/// Per-F terms `<e|d_-|j,F,0><g|d_+|j,F,0>` for the `|F=1, mF=∓1>` pair.
pub fn selection_rule_terms(j: HalfInt, species: &SpeciesData) -> Result<Vec<(HalfInt, f64)>, AtomicError> {
    let line = species.line_with_upper_j(j)?;
    let (g, e) = species.default_pair()?;
    species
        .f_values(j)
        .filter(|f| f.is_integer())
        .map(|f| {
            let i = species.upper_state(line, f, HalfInt::ZERO)?;
            let down = hyperfine_dipole(&e, &i, -1, line, species.nuclear_spin)?;
            let up = hyperfine_dipole(&g, &i, 1, line, species.nuclear_spin)?;
            Ok((f, down * up))
        })
        .collect()
}

/// `sum_F <e|d_-|j,F,mF=0><g|d_+|j,F,mF=0>`; vanishes identically.
pub fn selection_rule_sum(j: HalfInt, species: &SpeciesData) -> Result<f64, AtomicError> {
    Ok(selection_rule_terms(j, species)?.iter().map(|(_, t)| t).sum())
}

// ---------------------------------------------------------------------------
// species documents

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SpeciesDoc {
    #[serde(default)]
    name: Option<String>,
    nuclear_spin_x2: i32,
    #[serde(default)]
    lower_level: Option<LevelDoc>,
    lines: Vec<LineDoc>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct LevelDoc {
    #[serde(default = "default_n")]
    n: u32,
    #[serde(rename = "L", default)]
    l: u32,
    #[serde(rename = "J_x2")]
    j_x2: i32,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct LineDoc {
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    upper_n: Option<u32>,
    #[serde(rename = "upper_L", default = "default_upper_l")]
    upper_l: u32,
    #[serde(rename = "upper_J_x2")]
    upper_j_x2: i32,
    #[serde(rename = "reduced_dipole_Cm")]
    reduced_dipole_cm: f64,
    base_frequency_rad_s: f64,
    hyperfine_intervals: BTreeMap<String, f64>,
}

fn default_n() -> u32 {
    1
}

fn default_upper_l() -> u32 {
    1
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> AtomicError {
    AtomicError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

/// Parses and validates a species JSON document.
///
/// ```json
/// { "nuclear_spin_x2": 3,
///   "lines": [ { "upper_J_x2": 1, "reduced_dipole_Cm": 2.537e-29,
///                "base_frequency_rad_s": 2.3694e15,
///                "hyperfine_intervals": { "2": 0.0, "4": 5.13e9 } } ] }
/// ```
///
/// Interval keys are `2F`. Optional fields: `name`, `lower_level`
/// (`n`, `L`, `J_x2`; defaults to a J = 1/2 S level), and per line `label`,
/// `upper_n`, `upper_L`.
pub fn load_species(document: &str) -> Result<SpeciesData, AtomicError> {
    let doc: SpeciesDoc = serde_json::from_str(document).map_err(|e| AtomicError::Malformed(e.to_string()))?;

    if doc.nuclear_spin_x2 < 0 {
        return Err(invalid("nuclear_spin_x2", "must be non-negative"));
    }
    let nuclear_spin = HalfInt::from_twice(doc.nuclear_spin_x2);

    let lower = match doc.lower_level {
        Some(l) => LevelLabel {
            n: l.n,
            l: l.l,
            j: HalfInt::from_twice(l.j_x2),
        },
        None => LevelLabel {
            n: default_n(),
            l: 0,
            j: HalfInt::HALF,
        },
    };
    if lower.n == 0 {
        return Err(invalid("lower_level.n", "must be >= 1"));
    }
    if lower.j.twice() <= 0 {
        return Err(invalid("lower_level.J_x2", "must be positive"));
    }
    if doc.lines.is_empty() {
        return Err(invalid("lines", "at least one transition line is required"));
    }

    let mut lines = Vec::with_capacity(doc.lines.len());
    for (idx, ld) in doc.lines.into_iter().enumerate() {
        let field = |name: &str| format!("lines[{idx}].{name}");
        let upper = LevelLabel {
            n: ld.upper_n.unwrap_or(lower.n),
            l: ld.upper_l,
            j: HalfInt::from_twice(ld.upper_j_x2),
        };
        if upper.n == 0 {
            return Err(invalid(field("upper_n"), "must be >= 1"));
        }
        if upper.j.twice() <= 0 {
            return Err(invalid(field("upper_J_x2"), "must be positive"));
        }
        if !upper.j.same_parity(lower.j) || (upper.j - lower.j).abs() > HalfInt::ONE {
            return Err(invalid(
                field("upper_J_x2"),
                format!(
                    "J' = {} cannot be reached from J = {} by a dipole transition",
                    upper.j, lower.j
                ),
            ));
        }
        if upper == lower {
            return Err(invalid(field("upper_J_x2"), "upper level equals the lower level"));
        }
        if lines.iter().any(|l: &TransitionLine| l.upper.j == upper.j) {
            return Err(invalid(
                field("upper_J_x2"),
                format!("duplicate line for upper J = {}", upper.j),
            ));
        }
        if !(ld.reduced_dipole_cm.is_finite() && ld.reduced_dipole_cm > 0.0) {
            return Err(invalid(field("reduced_dipole_Cm"), "must be a positive finite number"));
        }
        let base = ld.base_frequency_rad_s;
        if !(base.is_finite() && base > 0.0) {
            return Err(invalid(
                field("base_frequency_rad_s"),
                "frequency must be strictly positive",
            ));
        }

        let mut intervals = BTreeMap::new();
        for (key, dw) in ld.hyperfine_intervals {
            let f_x2: i32 = key.trim().parse().map_err(|_| {
                invalid(
                    field("hyperfine_intervals"),
                    format!("key {key:?} is not an integer 2F"),
                )
            })?;
            let f = HalfInt::from_twice(f_x2);
            let (lo, hi) = ((upper.j - nuclear_spin).abs(), upper.j + nuclear_spin);
            if f < lo || f > hi || !f.same_parity(hi) {
                return Err(invalid(
                    field("hyperfine_intervals"),
                    format!("F = {f} outside |J' - I| = {lo} .. J' + I = {hi}"),
                ));
            }
            if !dw.is_finite() {
                return Err(invalid(
                    field("hyperfine_intervals"),
                    format!("F = {f} interval is not finite"),
                ));
            }
            if dw.abs() >= MAX_HYPERFINE_RATIO * base {
                return Err(invalid(
                    field("hyperfine_intervals"),
                    format!("F = {f} interval {dw:e} rad/s is not small against the line frequency"),
                ));
            }
            if base + dw <= 0.0 {
                return Err(invalid(
                    field("hyperfine_intervals"),
                    format!("F = {f} frequency must be positive"),
                ));
            }
            intervals.insert(f, dw);
        }
        for f in HalfInt::range_inclusive((upper.j - nuclear_spin).abs(), upper.j + nuclear_spin) {
            match intervals.get(&f) {
                None => {
                    return Err(invalid(field("hyperfine_intervals"), format!("missing F={f} interval")));
                }
                Some(&dw) if f == HalfInt::ONE && dw != 0.0 => {
                    return Err(invalid(
                        field("hyperfine_intervals"),
                        "the F=1 reference level must have a zero interval",
                    ));
                }
                _ => {}
            }
        }

        lines.push(TransitionLine {
            label: ld.label,
            lower,
            upper,
            reduced_dipole: ld.reduced_dipole_cm,
            base_frequency: base,
            hyperfine_intervals: intervals,
        });
    }

    Ok(SpeciesData {
        name: doc.name,
        nuclear_spin,
        lower,
        lines,
    })
}
