//! Command implementations behind the `hodge-eds` binary: config merging,
//! report construction, and rendering.
//!
//! Every command produces a single JSON value (schema 1) with a `trace`
//! field naming the library operations that produced its numbers; the
//! human-readable output is rendered from that JSON, never computed
//! separately. Reports are deterministic: the same configuration and seed
//! give byte-identical JSON.

pub mod selftest;

use hodge_eds_core::hodge::{GradedLie, HodgeNumbers, MiddleForm};
use hodge_eds_core::integral::{
    cartan_test, normal_form_w2, polar_space, sharp_construction_w2, IntegralElement,
};
use hodge_eds_core::jacobian::{
    self, nl_pipeline, smoothness_report, symmetrizer_kernel, HypersurfaceFixture,
};
use hodge_eds_core::linalg::{scalar_from, Scalar, Subspace};
use hodge_eds_core::nl::{random_gorenstein_fixture, refined_bound};
use hodge_eds_core::{chern, flag, nl};
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Debug)]
pub enum CliError {
    /// Malformed or missing configuration: exit code 2.
    Config(String),
    /// A computation could not run to completion: exit code 1.
    Failed(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn config_err(msg: impl std::fmt::Display) -> CliError {
    CliError::Config(msg.to_string())
}

fn failed(msg: impl std::fmt::Display) -> CliError {
    CliError::Failed(msg.to_string())
}

/// Keys accepted in a `--config` TOML file. Command-line flags override
/// file values.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub weight: Option<usize>,
    pub hodge: Option<Vec<usize>>,
    /// Middle polarization form: "orthonormal" (default) or "split".
    pub middle: Option<String>,
    pub lambda: Option<Vec<i64>>,
    pub mu: Option<Vec<i64>>,
    pub d: Option<usize>,
    pub num_vars: Option<usize>,
    pub poly: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub budget: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> Result<FileConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(config_err)
    }

    /// Overlays `other` (command-line values) on top of `self`.
    pub fn merge(mut self, other: FileConfig) -> FileConfig {
        macro_rules! take {
            ($f:ident) => {
                if other.$f.is_some() {
                    self.$f = other.$f;
                }
            };
        }
        take!(weight);
        take!(hodge);
        take!(middle);
        take!(lambda);
        take!(mu);
        take!(d);
        take!(num_vars);
        take!(poly);
        take!(seed);
        take!(trials);
        take!(budget);
        self
    }
}

/// Fully resolved run parameters.
pub struct Settings {
    pub cfg: FileConfig,
    pub seed: u64,
    pub trials: usize,
    pub budget: usize,
}

impl Settings {
    pub fn from_config(cfg: FileConfig) -> Settings {
        Settings {
            seed: cfg.seed.unwrap_or(0),
            trials: cfg.trials.unwrap_or(200),
            budget: cfg.budget.unwrap_or(jacobian::DEFAULT_BUDGET),
            cfg,
        }
    }
}

/// A finished command: the JSON report plus whether every asserted check
/// passed (exit code 0 vs 1).
pub struct Report {
    pub value: Value,
    pub ok: bool,
}

fn hodge_numbers(cfg: &FileConfig) -> Result<HodgeNumbers, CliError> {
    let weight = cfg
        .weight
        .ok_or_else(|| config_err("missing `weight` (flag --weight or config)"))?;
    let h = cfg
        .hodge
        .clone()
        .ok_or_else(|| config_err("missing `hodge` (flag --hodge or config)"))?;
    HodgeNumbers::new(weight, h).map_err(config_err)
}

fn middle_form(cfg: &FileConfig) -> Result<Option<MiddleForm>, CliError> {
    match cfg.middle.as_deref() {
        None => Ok(None),
        Some("orthonormal") => Ok(Some(MiddleForm::Orthonormal)),
        Some("split") => Ok(Some(MiddleForm::Split)),
        Some(other) => Err(config_err(format!(
            "unknown middle form `{other}` (expected orthonormal or split)"
        ))),
    }
}

fn build_lie(cfg: &FileConfig) -> Result<GradedLie, CliError> {
    let h = hodge_numbers(cfg)?;
    match middle_form(cfg)? {
        None => Ok(GradedLie::build(&h)),
        Some(m) => GradedLie::build_with(&h, m).map_err(config_err),
    }
}

pub fn domain_info(st: &Settings) -> Result<Report, CliError> {
    let lie = build_lie(&st.cfg)?;
    let h = lie.hodge();
    let n = h.weight() as i64;
    let pieces: Vec<Value> = (-n..=n)
        .map(|r| json!({"grade": r, "dim": lie.piece_dim(r)}))
        .collect();
    let structure = hodge_eds_core::hodge::verify_structure(&lie, st.budget);
    let value = json!({
        "schema": 1,
        "command": "domain-info",
        "weight": h.weight(),
        "hodge": h.h(),
        "dim_D": lie.domain_dimension(),
        "total_dim": h.total_dim(),
        "horizontal_dim": lie.g1_dim(),
        "nilpotent_dim": lie.nilpotent_dim(),
        "pieces": pieces,
        "structure_ok": structure.ok,
        "jacobi_triples_checked": structure.jacobi_triples_checked,
        "trace": ["GradedLie::build", "GradedLie::domain_dimension", "verify_structure"],
    });
    Ok(Report {
        ok: structure.ok,
        value,
    })
}

pub fn derived_flag(st: &Settings) -> Result<Report, CliError> {
    let lie = build_lie(&st.cfg)?;
    let theorem = flag::check_flag_theorem(&lie);
    let steps: Vec<Value> = theorem
        .flag
        .steps
        .iter()
        .map(|s| json!({"k": s.k, "w_dim": s.w_dim, "i_dim": s.i_dim}))
        .collect();
    let ok = theorem.containment_ok
        && theorem.termination_ok
        && (!theorem.equality_expected || theorem.equality_ok);
    let mut value = json!({
        "schema": 1,
        "command": "derived-flag",
        "weight": lie.hodge().weight(),
        "hodge": lie.hodge().h(),
        "steps": steps,
        "stabilized_at": theorem.flag.stabilized_at,
        "terminal_dim": theorem.flag.terminal_dim,
        "rank": theorem.flag.i_rank(),
        "containment_ok": theorem.containment_ok,
        "equality_expected": theorem.equality_expected,
        "equality_ok": theorem.equality_ok,
        "termination_bound": theorem.termination_bound,
        "termination_ok": theorem.termination_ok,
        "trace": ["derived_flag", "check_flag_theorem"],
    });
    if lie.hodge().weight() == 4 {
        let special = flag::special_cases(&lie);
        value["special_cases"] = json!({
            "drop_full_trivial": special.drop_full_trivial,
            "drop_full_dim": special.drop_full_dim,
            "frozen_nonzero": special.frozen_nonzero,
        });
        value["trace"]
            .as_array_mut()
            .unwrap()
            .push(json!("special_cases"));
    }
    Ok(Report { value, ok })
}

fn scalars(xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| scalar_from(x)).collect()
}

/// `λ`, `μ` for the weight-2 normal form: taken from the config or defaulted
/// to the generic values `λ_α = α+1`, `μ_α = (α+1)²`.
fn normal_form_params(cfg: &FileConfig, k: usize) -> (Vec<Scalar>, Vec<Scalar>) {
    let lambda = cfg
        .lambda
        .as_deref()
        .map(scalars)
        .unwrap_or_else(|| (1..=k as i64).map(scalar_from).collect());
    let mu = cfg
        .mu
        .as_deref()
        .map(scalars)
        .unwrap_or_else(|| (1..=k as i64).map(|a| scalar_from(a * a)).collect());
    (lambda, mu)
}

fn normal_form_element(st: &Settings) -> Result<(GradedLie, Vec<Scalar>, Vec<Scalar>), CliError> {
    let lie = build_lie(&st.cfg)?;
    let h = lie.hodge();
    if h.weight() != 2 || h.level_dim(2) != 3 {
        return Err(config_err(
            "integral normal forms need weight 2 with h^{2,0} = 3",
        ));
    }
    let k = h.level_dim(1);
    let (lambda, mu) = normal_form_params(&st.cfg, k);
    if lambda.len() != k || mu.len() != k {
        return Err(config_err(format!("lambda and mu must have length {k}")));
    }
    Ok((lie, lambda, mu))
}

pub fn integral_check(st: &Settings) -> Result<Report, CliError> {
    let (lie, lambda, mu) = normal_form_element(st)?;
    let e = normal_form_w2(&lie, &lambda, &mu).map_err(failed)?;
    let polar = polar_space(&e);
    let self_polar = polar == e.span();
    let value = json!({
        "schema": 1,
        "command": "integral-check",
        "hodge": lie.hodge().h(),
        "dim": e.dim(),
        "integral": true,
        "ambient_dim": lie.g1_dim(),
        "polar_dim": polar.dim(),
        "polar_equals_element": self_polar,
        "tangent_codim": hodge_eds_core::integral::tangent_codim(&e),
        "trace": ["normal_form_w2", "polar_space", "tangent_codim"],
    });
    Ok(Report { value, ok: true })
}

pub fn integral_construct(st: &Settings) -> Result<Report, CliError> {
    let mut cfg = st.cfg.clone();
    // The three-dimensional top case needs rational isotropic vectors in the
    // middle block, so default to the split form there.
    if cfg.middle.is_none() {
        if let Ok(h) = hodge_numbers(&cfg) {
            if h.weight() == 2 && h.level_dim(2) == 3 {
                cfg.middle = Some("split".into());
            }
        }
    }
    let lie = build_lie(&cfg)?;
    let h = lie.hodge();
    if h.weight() != 2 {
        return Err(config_err("integral construct needs weight 2"));
    }
    let e = sharp_construction_w2(&lie).map_err(failed)?;
    let w = h.level_dim(2);
    let k = h.level_dim(1);
    let bound = if k % 2 == 0 {
        w * k / 2
    } else {
        w * (k - 1) / 2 + 1
    };
    let value = json!({
        "schema": 1,
        "command": "integral-construct",
        "hodge": h.h(),
        "dim": e.dim(),
        "sharp_bound": bound,
        "achieves_bound": e.dim() == bound,
        "trace": ["sharp_construction_w2"],
    });
    Ok(Report { value, ok: true })
}

pub fn integral_cartan(st: &Settings) -> Result<Report, CliError> {
    let (lie, lambda, mu) = normal_form_element(st)?;
    let e = normal_form_w2(&lie, &lambda, &mu).map_err(failed)?;
    let rep = cartan_test(&e, st.trials, st.seed);
    let value = json!({
        "schema": 1,
        "command": "integral-cartan",
        "hodge": lie.hodge().h(),
        "dim": e.dim(),
        "polar_ranks": rep.c,
        "cartan_sum": rep.cartan_sum,
        "tangent_codim": rep.tangent_codim,
        "ordinary": rep.ordinary,
        "trace": ["normal_form_w2", "cartan_test", "tangent_codim"],
    });
    Ok(Report { value, ok: true })
}

/// Greedy seeded search for an abelian subspace of `𝒢^{-1,1}` of dimension
/// at most `max_dim`, used where no closed-form construction applies.
pub fn greedy_element(
    lie: &GradedLie,
    max_dim: usize,
    trials: usize,
    seed: u64,
) -> Option<IntegralElement<'_>> {
    let g1 = lie.g1_dim();
    if g1 == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<Vec<Scalar>> = Vec::new();
    for _ in 0..trials.max(1) {
        let mut cur: Vec<Vec<Scalar>> = Vec::new();
        let mut mats = Vec::new();
        let mut span = Subspace::zero(g1);
        let mut stale = 0;
        while cur.len() < max_dim && stale < 30 {
            let v: Vec<Scalar> = (0..g1)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Scalar::zero()
                    } else {
                        scalar_from(rng.gen_range(-2i64..=2))
                    }
                })
                .collect();
            if span.contains(&v) {
                stale += 1;
                continue;
            }
            let m = lie.g1_to_matrix(&v);
            if mats.iter().all(|u| m.commutator(u).is_zero()) {
                let mut vecs = cur.clone();
                vecs.push(v.clone());
                span = Subspace::from_vectors(g1, vecs);
                cur.push(v);
                mats.push(m);
                stale = 0;
            } else {
                stale += 1;
            }
        }
        if cur.len() > best.len() {
            best = cur;
        }
        if best.len() == max_dim {
            break;
        }
    }
    if best.is_empty() {
        None
    } else {
        IntegralElement::new(lie, best).ok()
    }
}

pub fn chern_verify(st: &Settings) -> Result<Report, CliError> {
    let lie = build_lie(&st.cfg)?;
    let h = lie.hodge();
    let constructed = if h.weight() == 2 {
        sharp_construction_w2(&lie).ok()
    } else {
        None
    };
    let e = match constructed {
        Some(e) => e,
        None => greedy_element(&lie, 4, st.trials, st.seed)
            .ok_or_else(|| failed("no integral element found"))?,
    };
    let rep = chern::verify_chern_relations(&e).map_err(failed)?;
    let value = json!({
        "schema": 1,
        "command": "chern-verify",
        "weight": h.weight(),
        "hodge": h.h(),
        "element_dim": e.dim(),
        "theta_products_zero": rep.theta_products_zero,
        "coeff_products_zero": rep.coeff_products_zero,
        "high_coeffs_zero": rep.high_coeffs_zero,
        "failures": rep.failures,
        "ok": rep.ok(),
        "trace": ["integrability_matrices", "char_coeffs", "verify_chern_relations"],
    });
    Ok(Report {
        ok: rep.ok(),
        value,
    })
}

pub fn nl_bound(st: &Settings) -> Result<Report, CliError> {
    let num_vars = st.cfg.num_vars.unwrap_or(3);
    if !(2..=4).contains(&num_vars) {
        return Err(config_err("num_vars must be between 2 and 4"));
    }
    let fix = random_gorenstein_fixture(num_vars, st.seed);
    let e = fix.element();
    let mid = fix.lie.hodge().level_dim(2);
    let mut rng = ChaCha8Rng::seed_from_u64(st.seed ^ 0x9e37_79b9);
    let zeta: Vec<Scalar> = loop {
        let z: Vec<Scalar> = (0..mid)
            .map(|_| scalar_from(rng.gen_range(-3i64..=3)))
            .collect();
        if z.iter().any(|x| !x.is_zero()) {
            break z;
        }
    };
    let rep = refined_bound(&e, &zeta).map_err(failed)?;
    let expected = nl::nl_codim(fix.lie.hodge()).map_err(failed)?;
    let value = json!({
        "schema": 1,
        "command": "nl-bound",
        "hodge": fix.lie.hodge().h(),
        "ambient_codim": expected,
        "dim_e": rep.dim_e,
        "dim_e_zeta": rep.dim_e_zeta,
        "codim": rep.codim,
        "h13": rep.h13,
        "sigma_zeta": rep.sigma,
        "bound": rep.bound,
        "holds": rep.holds,
        "equality": rep.equality,
        "rank_q_zeta": rep.rank_q,
        "trace": ["random_gorenstein_fixture", "e_zeta", "sigma_zeta", "quadric_q_zeta", "refined_bound", "nl_codim"],
    });
    Ok(Report {
        ok: rep.holds,
        value,
    })
}

fn fixture_from_poly(path: &str) -> Result<HypersurfaceFixture, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{path}: {e}")))?;
    let poly = jacobian::parse_poly(&text).map_err(config_err)?;
    let d = poly
        .homogeneous_degree()
        .ok_or_else(|| config_err("fixture polynomial must be homogeneous"))?;
    let n = poly
        .num_vars()
        .checked_sub(2)
        .ok_or_else(|| config_err("fixture polynomial needs at least 2 variables"))?;
    HypersurfaceFixture::new(n, d, poly).map_err(config_err)
}

pub fn jacobian_nl_pipeline(st: &Settings) -> Result<Report, CliError> {
    let d = st.cfg.d.unwrap_or(6);
    if d != 6 {
        return Err(config_err("the plane pipeline is implemented for d = 6"));
    }
    let fix = jacobian::sextic_with_plane(st.seed);
    let rep = nl_pipeline(&fix, st.budget).map_err(failed)?;
    let ok = rep.equality && rep.smoothness.ok;
    let value = json!({
        "schema": 1,
        "command": "jacobian-nl-pipeline",
        "d": rep.d,
        "seed": st.seed,
        "h40": rep.h40,
        "h13": rep.h13,
        "dim_vp_d": rep.dim_vp_d,
        "codim_t_zeta": rep.codim_t_zeta,
        "sigma_zeta": rep.sigma_zeta,
        "rank_q_zeta": rep.rank_q_zeta,
        "equality": rep.equality,
        "ambient_codim": rep.ambient_codim,
        "smoothness": smoothness_value(&rep.smoothness),
        "trace": ["sextic_with_plane", "smoothness_report", "restricted_regularity", "hodge_piece_dim", "t_p_codim", "restricted_pairing", "nl_pipeline"],
    });
    Ok(Report { value, ok })
}

fn smoothness_value(rep: &jacobian::SmoothnessReport) -> Value {
    json!({
        "socle_degree": rep.socle_degree,
        "checked_through": rep.checked_through,
        "complete": rep.complete,
        "first_mismatch": rep.first_mismatch,
        "ok": rep.ok,
    })
}

pub fn jacobian_smoothness(st: &Settings) -> Result<Report, CliError> {
    let fix = match st.cfg.poly.as_deref() {
        Some(path) => fixture_from_poly(path)?,
        None => jacobian::sextic_with_plane(st.seed),
    };
    let ladder = st.budget.min(jacobian::LADDER_BUDGET);
    let rep = smoothness_report(&fix, ladder).map_err(failed)?;
    let value = json!({
        "schema": 1,
        "command": "jacobian-smoothness",
        "n": fix.n(),
        "d": fix.d(),
        "ladder_budget": ladder,
        "smoothness": smoothness_value(&rep),
        "trace": ["smoothness_report", "ci_hilbert", "ideal_slice_dim"],
    });
    Ok(Report {
        ok: rep.ok,
        value,
    })
}

pub fn jacobian_symmetrizer(st: &Settings) -> Result<Report, CliError> {
    let fix = match st.cfg.poly.as_deref() {
        Some(path) => fixture_from_poly(path)?,
        None => jacobian::quintic_surface(),
    };
    let rep = symmetrizer_kernel(&fix, st.budget).map_err(failed)?;
    let ok = rep.kernel_dim >= rep.lower_bound && rep.contains_multiplication;
    let value = json!({
        "schema": 1,
        "command": "jacobian-symmetrizer",
        "n": fix.n(),
        "d": fix.d(),
        "h20": rep.h20,
        "dim_e": rep.dim_e,
        "h11": rep.h11,
        "kernel_dim": rep.kernel_dim,
        "lower_bound": rep.lower_bound,
        "contains_multiplication": rep.contains_multiplication,
        "trace": ["symmetrizer_kernel", "symmetrizer", "smoothness_report"],
    });
    Ok(Report { value, ok })
}

pub fn run_selftest() -> Report {
    let results = selftest::run_all();
    let ok = results.iter().all(|r| r.pass);
    let criteria: Vec<Value> = results
        .iter()
        .map(|r| json!({"name": r.name, "pass": r.pass, "detail": r.detail}))
        .collect();
    Report {
        value: json!({
            "schema": 1,
            "command": "selftest",
            "criteria": criteria,
            "ok": ok,
            "trace": ["selftest::run_all"],
        }),
        ok,
    }
}

/// Flat `key = value` rendering of a JSON report.
pub fn render(value: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, value, "");
    out
}

fn render_into(out: &mut String, v: &Value, prefix: &str) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let path = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_into(out, val, &path);
            }
        }
        Value::Array(arr) if arr.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = arr.iter().map(render_scalar).collect();
            out.push_str(&format!("{prefix} = [{}]\n", items.join(", ")));
        }
        Value::Array(arr) => {
            for (i, val) in arr.iter().enumerate() {
                render_into(out, val, &format!("{prefix}[{i}]"));
            }
        }
        scalar => out.push_str(&format!("{prefix} = {}\n", render_scalar(scalar))),
    }
}

fn render_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
