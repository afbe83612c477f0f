//! JSON schemas for problem files and reports.
//!
//! Problems are task-tagged JSON objects; reports mirror the solver
//! output with every certificate spelled out, so `verify` can re-check
//! them without re-running the solver.  Reports never contain timings
//! or absolute paths, and all maps are emitted in a fixed order, so a
//! rerun of the same problem is byte-identical.

use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// shared pieces
// ---------------------------------------------------------------------------

/// Variable blocks of a problem: base variables `x`, unknowns `y`, and an
/// optional deformation parameter `t`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variables {
    pub x: Vec<String>,
    #[serde(default)]
    pub y: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
}

/// A truncated series: its terms as a canonical expression string, the
/// order it is stated through, and whether it is a complete polynomial
/// rather than a truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetJson {
    pub expr: String,
    pub order: u32,
    pub exact: bool,
}

/// A valuation: a finite order or `"inf"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValuationJson {
    Finite(u32),
    Infinite(String),
}

/// One generator's cofactor inside a membership certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CofactorJson {
    pub generator: String,
    pub cofactor: JetJson,
}

/// Constructive ideal-membership certificate: `jet = Σ generator·cofactor`
/// through the stated order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MembershipJson {
    pub order: u32,
    pub cofactors: Vec<CofactorJson>,
}

// ---------------------------------------------------------------------------
// problems
// ---------------------------------------------------------------------------

/// The problem-file format this build reads.  Files may carry a
/// `"format"` tag; when present it must match.
pub const PROBLEM_FORMAT: u32 = 1;

/// A parsed problem file.
#[derive(Debug, Clone)]
pub enum Problem {
    Lift(LiftProblem),
    LiftGeneral(LiftGeneralProblem),
    CheckFormal(CheckFormalProblem),
    Homotopy(HomotopyProblem),
    WeakFg(WeakFgProblem),
    Cofinal(CofinalProblem),
    Cutoff(CutoffProblem),
    Borel(BorelProblem),
}

impl Problem {
    pub fn task(&self) -> &'static str {
        match self {
            Problem::Lift(_) => "lift",
            Problem::LiftGeneral(_) => "lift_general",
            Problem::CheckFormal(_) => "check_formal",
            Problem::Homotopy(_) => "homotopy",
            Problem::WeakFg(_) => "weak_fg",
            Problem::Cofinal(_) => "cofinal",
            Problem::Cutoff(_) => "cutoff",
            Problem::Borel(_) => "borel",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Problem::Lift(p) => &p.name,
            Problem::LiftGeneral(p) => &p.name,
            Problem::CheckFormal(p) => &p.name,
            Problem::Homotopy(p) => &p.name,
            Problem::WeakFg(p) => &p.name,
            Problem::Cofinal(p) => &p.name,
            Problem::Cutoff(p) => &p.name,
            Problem::Borel(p) => &p.name,
        }
    }

    /// Dispatches on the `task` field, then holds the specific schema to
    /// account for every remaining field.
    pub fn from_json(value: serde_json::Value) -> Result<Problem, String> {
        if let Some(tag) = value.get("format") {
            if tag.as_u64() != Some(u64::from(PROBLEM_FORMAT)) {
                return Err(format!(
                    "unsupported problem format {}; this tool reads format {}",
                    tag, PROBLEM_FORMAT
                ));
            }
        }
        let task = value
            .get("task")
            .and_then(|t| t.as_str())
            .ok_or_else(|| String::from("problem file has no string `task` field"))?
            .to_owned();
        let parse = |e: serde_json::Error| format!("task `{}`: {}", task, e);
        match task.as_str() {
            "lift" => Ok(Problem::Lift(serde_json::from_value(value).map_err(parse)?)),
            "lift_general" => Ok(Problem::LiftGeneral(
                serde_json::from_value(value).map_err(parse)?,
            )),
            "check_formal" => Ok(Problem::CheckFormal(
                serde_json::from_value(value).map_err(parse)?,
            )),
            "homotopy" => Ok(Problem::Homotopy(
                serde_json::from_value(value).map_err(parse)?,
            )),
            "weak_fg" => Ok(Problem::WeakFg(
                serde_json::from_value(value).map_err(parse)?,
            )),
            "cofinal" => Ok(Problem::Cofinal(
                serde_json::from_value(value).map_err(parse)?,
            )),
            "cutoff" => Ok(Problem::Cutoff(
                serde_json::from_value(value).map_err(parse)?,
            )),
            "borel" => Ok(Problem::Borel(
                serde_json::from_value(value).map_err(parse)?,
            )),
            other => Err(format!("unknown task `{}`", other)),
        }
    }

    /// Replaces the problem's truncation order (the `--order` flag).  Only
    /// tasks parameterized by a series order accept the override.
    pub fn override_order(&mut self, order: u32) -> Result<(), String> {
        match self {
            Problem::Lift(p) => p.order = order,
            Problem::LiftGeneral(p) => p.order = order,
            Problem::CheckFormal(p) => p.order = order,
            Problem::Homotopy(p) => p.order = order,
            Problem::WeakFg(_) | Problem::Cofinal(_) | Problem::Cutoff(_) | Problem::Borel(_) => {
                return Err(format!(
                    "task `{}` has no series order to override",
                    self.task()
                ));
            }
        }
        Ok(())
    }
}

/// Supplied annihilator/cokernel certificate for `lift`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuppliedCertificate {
    pub h: String,
    pub cokernel: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftProblem {
    #[allow(dead_code)]
    pub task: String,
    #[serde(default)]
    #[allow(dead_code)]
    pub format: Option<u32>,
    pub name: String,
    pub variables: Variables,
    pub equations: Vec<String>,
    pub start: Vec<String>,
    pub ideal: String,
    pub order: u32,
    #[serde(default)]
    pub quotient: Option<String>,
    #[serde(default)]
    pub certificate: Option<SuppliedCertificate>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftGeneralProblem {
    #[allow(dead_code)]
    pub task: String,
    #[serde(default)]
    #[allow(dead_code)]
    pub format: Option<u32>,
    pub name: String,
    pub variables: Variables,
    pub equations: Vec<String>,
    pub filtration: String,
    pub level: u32,
    pub prefix: Vec<String>,
    pub order: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckFormalProblem {
    #[allow(dead_code)]
    pub task: String,
    #[serde(default)]
    #[allow(dead_code)]
    pub format: Option<u32>,
    pub name: String,
    pub variables: Variables,
    pub equations: Vec<String>,
    pub assignment: Vec<String>,
    pub order: u32,
    #[serde(default)]
    pub quotient: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyProblem {
    #[allow(dead_code)]
    pub task: String,
    #[serde(default)]
    #[allow(dead_code)]
    pub format: Option<u32>,
    pub name: String,
    pub variables: Variables,
    pub equations: Vec<String>,
    pub start: Vec<String>,
    pub ideal: String,
    pub order: u32,
    /// Claimed fiber at `t = 1`, over the x-variables only.  When absent
    /// the computed fiber is recorded instead of checked.
    #[serde(default)]
    pub end: Option<Vec<String>>,
    /// Ideal confining the deformation `family − start fiber`.  Defaults
    /// to the correction ideal derived by the lift.
    #[serde(default)]
    pub deformation_ideal: Option<String>,
    /// Rational parameter values (as `p/q` strings) whose fibers are
    /// checked against the specialized family.
    #[serde(default)]
    pub specializations: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakFgProblem {
    #[allow(dead_code)]
    pub task: String,
    #[serde(default)]
    #[allow(dead_code)]
    pub format: Option<u32>,
    pub name: String,
    pub variables: Variables,
    pub filtration: String,
    pub j_max: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CofinalProblem {
    #[allow(dead_code)]
    pub task: String,
    #[serde(default)]
    #[allow(dead_code)]
    pub format: Option<u32>,
    pub name: String,
    pub variables: Variables,
    pub first: String,
    pub second: String,
    pub j_max: u32,
    #[serde(default = "default_scan_max")]
    pub scan_max: u32,
}

fn default_scan_max() -> u32 {
    24
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridJson {
    pub a: f64,
    pub b: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffProblem {
    #[allow(dead_code)]
    pub task: String,
    #[serde(default)]
    #[allow(dead_code)]
    pub format: Option<u32>,
    pub name: String,
    pub grid: GridJson,
    pub z: [f64; 2],
    pub widths: Vec<f64>,
    #[serde(default = "default_k_max")]
    pub k_max: u32,
}

fn default_k_max() -> u32 {
    2
}

/// One gluing term: `amplitude · (x−center)^order · (1 − ((x−center)/R)²)`
/// with `R` the distance from the center to the nearer endpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BorelTermJson {
    pub order: u32,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BorelProblem {
    #[allow(dead_code)]
    pub task: String,
    #[serde(default)]
    #[allow(dead_code)]
    pub format: Option<u32>,
    pub name: String,
    pub grid: GridJson,
    pub center: f64,
    pub terms: Vec<BorelTermJson>,
    #[serde(default = "default_cap")]
    pub derivative_cap: u32,
    /// Partial-sum cut points `N` whose remainders get flatness
    /// certificates.
    #[serde(default)]
    pub partial_slopes: Vec<u32>,
}

fn default_cap() -> u32 {
    1
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

pub const REPORT_FORMAT: u32 = 1;

/// Top-level report envelope.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub tool: String,
    pub format: u32,
    pub name: String,
    pub task: String,
    /// `solved` / `pass` for successes, `refused` / `fail` otherwise.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refusal: Option<RefusalJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<TaskResult>,
}

/// A structured refusal: a stable machine code, the human sentence, and
/// the witness object when the refusal carries one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefusalJson {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TaskResult {
    Lift(Box<LiftResultJson>),
    LiftGeneral(Box<LiftGeneralResultJson>),
    CheckFormal(CheckFormalResultJson),
    Homotopy(Box<HomotopyResultJson>),
    WeakFg(WeakFgResultJson),
    Cofinal(CofinalResultJson),
    Cutoff(CutoffResultJson),
    Borel(BorelResultJson),
}

/// Slack-unknown bookkeeping when a quotiented problem was rewritten.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnfoldJson {
    /// `(equation, quotient generator, slack name)` per slack unknown.
    pub slacks: Vec<UnfoldSlackJson>,
    /// Solved slack values: the witness that each original residual lies
    /// in the quotient ideal.
    pub witnesses: Vec<JetJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnfoldSlackJson {
    pub equation: usize,
    pub generator: String,
    pub name: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftResultJson {
    pub order: u32,
    pub y_solution: Vec<JetJson>,
    pub delta_y: Vec<JetJson>,
    pub h: JetJson,
    pub h_valuation: u32,
    pub certificate_source: String,
    pub cokernel: Vec<Vec<JetJson>>,
    pub iterations: usize,
    pub residual_valuations: Vec<ValuationJson>,
    /// Per equation: `F_i(start) ∈ 𝔞` spelled out.
    pub residual_membership: Vec<MembershipJson>,
    /// Per unknown: `h²·Δy_i ∈ 𝔞` spelled out.
    pub correction_membership: Vec<MembershipJson>,
    /// The derived ideal the corrections provably live in.
    pub correction_ideal: String,
    /// Per unknown: `Δy_i ∈ correction_ideal` spelled out.
    pub correction_ideal_membership: Vec<MembershipJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unfold: Option<UnfoldJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_trace: Option<Vec<Vec<JetJson>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftGeneralResultJson {
    pub order: u32,
    pub level: u32,
    pub level_generators: Vec<String>,
    pub prefix: Vec<JetJson>,
    pub y_solution: Vec<JetJson>,
    /// Per unknown: `y_i − prefix_i ∈ A_level` spelled out.
    pub combination: Vec<MembershipJson>,
    /// The order-shifted single-scale lift the construction reduced to.
    pub shifted: LiftResultJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckFormalResultJson {
    pub order: u32,
    pub residual_valuations: Vec<ValuationJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyIssueJson {
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationCertJson {
    pub t_power: u32,
    pub membership: MembershipJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecializationJson {
    pub t: String,
    pub fiber: Vec<JetJson>,
    pub residual_valuations: Vec<ValuationJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyResultJson {
    pub order: u32,
    pub family: Vec<JetJson>,
    pub ideal: String,
    pub start: Vec<JetJson>,
    pub end: Vec<JetJson>,
    pub pass: bool,
    pub issues: Vec<HomotopyIssueJson>,
    pub residual_valuations: Vec<ValuationJson>,
    /// Per component, per t-power: the deformation coefficient's
    /// membership certificate in the stated ideal.
    pub deformation_certificates: Vec<Vec<DeformationCertJson>>,
    pub specializations: Vec<SpecializationJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakFgLevelJson {
    pub level: u32,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakFgResultJson {
    pub j_max: u32,
    pub levels: Vec<WeakFgLevelJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CofinalResultJson {
    pub j_max: u32,
    /// `[j, d]` pairs: level `d` of the first filtration fits inside
    /// level `j` of the second.
    pub first_into_second: Vec<[u32; 2]>,
    pub second_into_first: Vec<[u32; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioJson {
    pub k: u32,
    pub max_derivative: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffResultJson {
    /// The grid actually used (after any seed jitter).
    pub grid: GridJson,
    pub z: [f64; 2],
    pub widths: Vec<f64>,
    pub threshold: f64,
    pub ratios: Vec<RatioJson>,
    pub pass: bool,
    /// Names of CSV dumps written next to the report (`--csv`), if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_files: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintJson {
    pub term: u32,
    pub k: u32,
    pub value: f64,
    pub budget: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlopeJson {
    pub n: u32,
    pub slope: f64,
    pub needed: f64,
    pub pass: bool,
    pub points: usize,
    pub constant: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BorelResultJson {
    /// The grid actually used (after any seed jitter).
    pub grid: GridJson,
    pub center: f64,
    pub derivative_cap: u32,
    pub epsilons: Vec<f64>,
    pub widths: Vec<f64>,
    pub plateau: [f64; 2],
    pub constraint_checks: Vec<ConstraintJson>,
    pub slopes: Vec<SlopeJson>,
    /// Number of grid samples where the assembly equals the full partial
    /// sum bit-for-bit.
    pub exact_partial_sum_samples: usize,
    pub pass: bool,
    /// Names of CSV dumps written next to the report (`--csv`), if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_files: Option<Vec<String>>,
}
