//! End-to-end experiment runs: configuration, the command set, the JSON
//! bundle written to the output directory, and replay of a bundle.
//!
//! Everything here is pure: [`run`] returns the files to write and the exit
//! status, leaving filesystem access to the caller.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::certification::oracle::{OracleBounds, OracleError};
use crate::certification::verify::Replay;
use crate::certification::{CertParams, IndecomposabilityCertificate, NonIsomorphismCertificate, RankReport};
use crate::construction::{
    all_nonempty_subsets, build_family, build_theta, default_choice, validate_spec, ConstructionInput,
    Limits, RigidSystemChoice, ValidatedSpec, ValidationReport,
};
use crate::fractions::{ComponentId, Quotient, TagId, TagRole};
use crate::modules::{GlueGenerator, GluedModule, LocalizationSum, Rigid};
use crate::ring::{Ring, RingDescriptor};

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Io = 1,
    Config = 2,
    Validation = 3,
    Refuted = 4,
    OracleDisagreement = 5,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Build,
    Certify,
    Report,
    OracleCheck,
}

/// `"all-nonempty"` or an explicit list of subsets of Delta.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubsetSpec {
    Keyword(String),
    Explicit(Vec<Vec<String>>),
}

impl Default for SubsetSpec {
    fn default() -> Self {
        SubsetSpec::Keyword("all-nonempty".into())
    }
}

/// Per-subset deviations from the default choice. Elements are written as
/// ring elements and resolved to designated tags.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceOverride {
    pub subset: Vec<String>,
    #[serde(default)]
    pub base: Option<String>,
    #[serde(default)]
    pub xi: BTreeMap<String, String>,
    #[serde(default)]
    pub ab: BTreeMap<String, [String; 2]>,
    #[serde(default)]
    pub relax: bool,
    #[serde(default)]
    pub support_overrides: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "default_coeff")]
    pub coeff: u32,
    #[serde(default = "default_exp")]
    pub exp: u32,
    #[serde(default = "default_depth")]
    pub depth: u32,
    #[serde(default = "default_max_combinations")]
    pub max_combinations: u64,
    /// Subset whose module is checked; the first module when absent.
    #[serde(default)]
    pub subset: Option<Vec<String>>,
}

fn default_coeff() -> u32 {
    30
}
fn default_exp() -> u32 {
    2
}
fn default_max_combinations() -> u64 {
    2_000_000
}
fn default_samples() -> u32 {
    32
}
fn default_depth() -> u32 {
    8
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            coeff: default_coeff(),
            exp: default_exp(),
            depth: default_depth(),
            max_combinations: default_max_combinations(),
            subset: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ring: RingDescriptor,
    pub gamma_pairs: Vec<[String; 2]>,
    #[serde(default)]
    pub delta: Vec<String>,
    #[serde(default)]
    pub subsets: SubsetSpec,
    #[serde(default)]
    pub choices: Vec<ChoiceOverride>,
    #[serde(default)]
    pub oracle_bounds: OracleConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: u32,
    #[serde(default)]
    pub output: Option<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("config: {e}"))
    }
}

/// Command-line overrides of configured values.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub depth: Option<u32>,
    pub coeff: Option<u32>,
    pub exp: Option<u32>,
    pub limits: Option<Limits>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit: Exit,
    pub files: BTreeMap<String, String>,
    pub messages: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            exit: Exit::Ok,
            files: BTreeMap::new(),
            messages: Vec::new(),
        }
    }

    fn fail(mut self, exit: Exit, msg: impl Into<String>) -> Self {
        self.exit = exit;
        self.messages.push(msg.into());
        self
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_json<T: Serialize>(t: &T) -> String {
    let v = serde_json::to_value(t).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Self-contained description of one glued module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulePresentation {
    pub label: String,
    pub ring: RingDescriptor,
    pub tags: Vec<TagPresentation>,
    pub s: Vec<String>,
    pub base: String,
    pub components: BTreeMap<String, Vec<String>>,
    pub glue: Vec<GluePresentation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagPresentation {
    pub id: String,
    pub role: TagRole,
    pub element: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluePresentation {
    pub component: String,
    pub xi: String,
    pub a: String,
    pub b: String,
}

pub fn present_module(spec: &ValidatedSpec, m: &GluedModule) -> ModulePresentation {
    let r = &spec.ring;
    ModulePresentation {
        label: m.label.clone(),
        ring: r.descriptor().clone(),
        tags: spec
            .tags
            .iter()
            .map(|t| TagPresentation {
                id: t.id.0.clone(),
                role: t.role,
                element: r.render(&t.element),
            })
            .collect(),
        s: m.s.iter().map(|t| t.0.clone()).collect(),
        base: m.base.0.clone(),
        components: m
            .components
            .iter()
            .map(|(c, a)| (c.0.clone(), a.support.iter().map(|t| t.0.clone()).collect()))
            .collect(),
        glue: m
            .glue
            .iter()
            .map(|g| GluePresentation {
                component: g.component.0.clone(),
                xi: g.xi.0.clone(),
                a: r.render(&g.a_elem),
                b: r.render(&g.b_elem),
            })
            .collect(),
    }
}

/// Rebuilds and revalidates the spec and module from a presentation.
pub fn load_module(p: &ModulePresentation) -> Result<(ValidatedSpec, GluedModule), String> {
    let ring = Ring::new(p.ring.clone()).map_err(|e| format!("{}: ring: {e}", p.label))?;
    let el = |s: &str| ring.parse_element(s).map_err(|e| format!("{}: element {s}: {e}", p.label));
    let by_id: BTreeMap<&str, &TagPresentation> = p.tags.iter().map(|t| (t.id.as_str(), t)).collect();
    let get = |id: String| by_id.get(id.as_str()).map(|t| t.element.as_str()).ok_or(format!("{}: missing tag {id}", p.label));
    let k1 = p.tags.iter().filter(|t| t.role == TagRole::GammaA).count();
    let k2 = p.tags.iter().filter(|t| t.role == TagRole::Delta).count();
    let mut gamma_pairs = Vec::new();
    for i in 0..k1 {
        gamma_pairs.push((el(get(format!("a{i}"))?)?, el(get(format!("b{i}"))?)?));
    }
    let delta = (0..k2).map(|j| el(get(format!("c{j}"))?)).collect::<Result<Vec<_>, _>>()?;
    let input = ConstructionInput {
        ring: ring.clone(),
        gamma_pairs,
        delta,
    };
    let spec = validate_spec(&input, Limits::default()).map_err(|r| format!("{}: {}", p.label, failure_lines(&r).join("; ")))?;
    let components = p
        .components
        .iter()
        .map(|(c, s)| (ComponentId(c.clone()), LocalizationSum::new(s.iter().map(|t| TagId(t.clone())))))
        .collect();
    let glue = p
        .glue
        .iter()
        .map(|g| {
            Ok(GlueGenerator {
                component: ComponentId(g.component.clone()),
                xi: TagId(g.xi.clone()),
                a_elem: el(&g.a)?,
                b_elem: el(&g.b)?,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    let m = GluedModule {
        label: p.label.clone(),
        s: p.s.iter().map(|t| TagId(t.clone())).collect(),
        components,
        base: ComponentId(p.base.clone()),
        glue,
    };
    m.check_shape().map_err(|e| format!("{}: {e}", p.label))?;
    Ok((spec, m))
}

fn failure_lines(r: &ValidationReport) -> Vec<String> {
    r.failures()
        .map(|f| {
            let mut s = format!("{} failed for {}", f.check, f.subjects.join(", "));
            if !f.detail.is_empty() {
                let _ = write!(s, ": {}", f.detail);
            }
            s
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleCertificates {
    pub module: String,
    pub indecomposability: IndecomposabilityCertificate,
    pub rank: RankReport,
}

struct Built {
    spec: ValidatedSpec,
    family: Vec<GluedModule>,
}

type Step<T> = Result<T, (Exit, Vec<String>)>;

fn cfg_err<T>(msg: impl Into<String>) -> Step<T> {
    Err((Exit::Config, vec![msg.into()]))
}

fn validated(cfg: &ExperimentConfig, limits: Limits, out: &mut Outcome) -> Step<ValidatedSpec> {
    let ring = match Ring::new(cfg.ring.clone()) {
        Ok(r) => r,
        Err(e) => return cfg_err(format!("ring: {e}")),
    };
    let el = |s: &str| ring.parse_element(s).map_err(|e| (Exit::Config, vec![format!("element {s:?}: {e}")]));
    let mut gamma_pairs = Vec::new();
    for [a, b] in &cfg.gamma_pairs {
        gamma_pairs.push((el(a)?, el(b)?));
    }
    let delta = cfg.delta.iter().map(|s| el(s)).collect::<Result<Vec<_>, _>>()?;
    let input = ConstructionInput {
        ring: ring.clone(),
        gamma_pairs,
        delta,
    };
    match validate_spec(&input, limits) {
        Ok(spec) => {
            out.files.insert("spec.json".into(), canonical_json(&spec_json(&spec, &spec.report)));
            Ok(spec)
        }
        Err(report) => {
            out.files.insert("spec.json".into(), canonical_json(&serde_json::json!({
                "ring": ring.descriptor(),
                "report": report,
            })));
            let mut lines = vec!["validation failed".to_string()];
            lines.extend(failure_lines(&report));
            Err((Exit::Validation, lines))
        }
    }
}

fn spec_json(spec: &ValidatedSpec, report: &ValidationReport) -> Value {
    let r = &spec.ring;
    let theta = build_theta(spec);
    serde_json::json!({
        "ring": r.descriptor(),
        "label": r.label(),
        "tags": spec.tags.iter().map(|t| serde_json::json!({
            "id": t.id, "role": t.role, "element": r.render(&t.element), "certificate": t.certificate,
        })).collect::<Vec<_>>(),
        "bezout": spec.bezout.iter().map(|((i, j), (u, v))| serde_json::json!({
            "pair": [i, j], "u": r.render(u), "v": r.render(v),
        })).collect::<Vec<_>>(),
        "theta": theta.iter().map(|s| serde_json::json!({"id": s.id, "support": s.support.support})).collect::<Vec<_>>(),
        "theta_incomparable": theta_incomparable(spec),
        "report": report,
    })
}

/// Whether the supports in Theta are pairwise incomparable under inclusion.
pub fn theta_incomparable(spec: &ValidatedSpec) -> bool {
    let theta = build_theta(spec);
    theta.iter().enumerate().all(|(i, s)| {
        theta
            .iter()
            .enumerate()
            .all(|(j, t)| i == j || !s.support.support.is_subset(&t.support.support))
    })
}

fn resolve_tags(spec: &ValidatedSpec, items: &[String]) -> Step<Vec<TagId>> {
    items
        .iter()
        .map(|s| {
            let e = spec
                .ring
                .parse_element(s)
                .map_err(|e| (Exit::Config, vec![format!("element {s:?}: {e}")]))?;
            spec.tags
                .find(&e)
                .cloned()
                .ok_or_else(|| (Exit::Config, vec![format!("{s} is not a designated element")]))
        })
        .collect()
}

fn choices(cfg: &ExperimentConfig, spec: &ValidatedSpec) -> Step<Vec<RigidSystemChoice>> {
    let subsets: Vec<Vec<TagId>> = match &cfg.subsets {
        SubsetSpec::Keyword(k) if k == "all-nonempty" => all_nonempty_subsets(&spec.delta),
        SubsetSpec::Keyword(k) => return cfg_err(format!("unknown subsets keyword {k:?}")),
        SubsetSpec::Explicit(list) => list.iter().map(|s| resolve_tags(spec, s)).collect::<Result<_, _>>()?,
    };
    let mut out = Vec::new();
    for s in subsets {
        let mut ch = default_choice(spec, &s);
        let key: BTreeSet<TagId> = s.iter().cloned().collect();
        for o in &cfg.choices {
            let target: BTreeSet<TagId> = resolve_tags(spec, &o.subset)?.into_iter().collect();
            if target != key {
                continue;
            }
            if let Some(b) = &o.base {
                ch.base = ComponentId(b.clone());
            }
            for (c, x) in &o.xi {
                ch.xi.insert(ComponentId(c.clone()), resolve_tags(spec, std::slice::from_ref(x))?.remove(0));
            }
            for (c, [a, b]) in &o.ab {
                let p = |s: &str| spec.ring.parse_element(s).map_err(|e| (Exit::Config, vec![format!("element {s:?}: {e}")]));
                ch.ab.insert(ComponentId(c.clone()), (p(a)?, p(b)?));
            }
            for (c, sup) in &o.support_overrides {
                ch.support_overrides
                    .insert(ComponentId(c.clone()), resolve_tags(spec, sup)?.into_iter().collect());
            }
            ch.relax |= o.relax;
        }
        out.push(ch);
    }
    Ok(out)
}

fn built(cfg: &ExperimentConfig, limits: Limits, out: &mut Outcome) -> Step<Built> {
    let spec = validated(cfg, limits, out)?;
    let chs = choices(cfg, &spec)?;
    let family = build_family(&spec, &chs).map_err(|e| (Exit::Config, vec![format!("construction: {e}")]))?;
    for m in &family {
        out.files
            .insert(format!("module-{}.json", m.label), canonical_json(&present_module(&spec, m)));
    }
    Ok(Built { spec, family })
}

struct Certified {
    certs: Vec<ModuleCertificates>,
    noniso: Vec<(String, String, NonIsomorphismCertificate)>,
}

fn certified(b: &Built, params: CertParams, out: &mut Outcome) -> Step<Certified> {
    let rigid = Rigid::new(Quotient::new(&b.spec.ring, &b.spec.tags));
    let internal = |e: crate::certification::CertError| (Exit::Refuted, vec![format!("certification error: {e}")]);
    let mut certs = Vec::new();
    let mut refuted = Vec::new();
    for m in &b.family {
        let ind = rigid.certify_indecomposable(m, params).map_err(internal)?;
        let rank = rigid.rank(m).map_err(internal)?;
        if let crate::certification::Verdict::Refuted { conditions } = &ind.verdict {
            for c in conditions {
                refuted.push(format!("S = {}: refuted: {c}", m.label));
            }
        }
        let mc = ModuleCertificates {
            module: m.label.clone(),
            indecomposability: ind,
            rank,
        };
        out.files.insert(format!("cert-{}.json", m.label), canonical_json(&mc));
        certs.push(mc);
    }
    let mut noniso = Vec::new();
    for i in 0..b.family.len() {
        for j in i + 1..b.family.len() {
            let (s, t) = (&b.family[i], &b.family[j]);
            let c = rigid.certify_nonisomorphic(s, t).map_err(internal)?;
            if !c.passed {
                refuted.push(format!("S = {}, T = {}: no separating cross-divisibility witness", s.label, t.label));
            }
            out.files
                .insert(format!("noniso-{}-{}.json", s.label, t.label), canonical_json(&c));
            noniso.push((s.label.clone(), t.label.clone(), c));
        }
    }
    if !refuted.is_empty() {
        return Err((Exit::Refuted, refuted));
    }
    Ok(Certified { certs, noniso })
}

fn summary(b: &Built, c: &Certified) -> String {
    let spec = &b.spec;
    let r = &spec.ring;
    let k1 = spec.kappa1();
    let k2 = spec.kappa2();
    let theta = build_theta(spec);
    let mut s = String::new();
    let _ = writeln!(s, "ring: {}", r.label());
    let _ = writeln!(s, "kappa1 = {k1}, kappa2 = {k2}, |Theta| = {}", theta.len());
    for t in spec.tags.iter() {
        let _ = writeln!(s, "  {} = {}", t.id, r.render(&t.element));
    }
    let _ = writeln!(s, "Theta pairwise incomparable: {}", if theta_incomparable(spec) { "yes" } else { "no" });
    if let (true, Some(x), Some(y)) = (r.is_skew(), r.x(), r.y()) {
        let yx = r.mul(&y, &x).map(|e| r.render(&e)).unwrap_or_default();
        let xy = r.mul(&x, &y).map(|e| r.render(&e)).unwrap_or_default();
        let _ = writeln!(s, "noncommutative check: y*x = {yx}, x*y = {xy}");
        if let Some(g) = r.field_generator() {
            let yg = r.mul(&y, &g).map(|e| r.render(&e)).unwrap_or_default();
            let gy = r.mul(&g, &y).map(|e| r.render(&e)).unwrap_or_default();
            let _ = writeln!(s, "noncommutative check: y*g = {yg}, g*y = {gy}");
        }
    }
    let _ = writeln!(s);
    let mut all_pass = true;
    for mc in &c.certs {
        let ok = mc.indecomposability.verdict.passed();
        all_pass &= ok;
        let _ = writeln!(
            s,
            "S = {}: indecomposable {}, essential {}, rank {}",
            mc.module,
            if ok { "PASSED" } else { "REFUTED" },
            if mc.indecomposability.essentiality.passed { "yes" } else { "no" },
            mc.rank.rank
        );
    }
    let pairs_ok = c.noniso.iter().filter(|(_, _, n)| n.passed).count();
    for (a, bb, n) in &c.noniso {
        let _ = writeln!(s, "  {a} vs {bb}: witness {} ({})", n.witness, if n.passed { "certified" } else { "failed" });
    }
    let _ = writeln!(s, "non-isomorphism: {pairs_ok} of {} pairs certified", c.noniso.len());
    let _ = writeln!(s);
    let n = c.certs.len();
    let rank = c.certs.first().map_or(0, |m| m.rank.rank);
    let achieved = if all_pass && pairs_ok == c.noniso.len() { n } else { 0 };
    let _ = writeln!(s, "{achieved} non-isomorphic indecomposable, rank {rank}");
    let _ = writeln!(
        s,
        "achieved: {achieved} non-isomorphic indecomposable essential submodules of E^(R), R = 2^kappa1 = {}, each of rank {rank}",
        theta.len()
    );
    let _ = writeln!(
        s,
        "reference counts: 2^kappa2 - 1 = {} (nonempty subsets), 2^kappa2 = {} (including the empty subset)",
        (1u64 << k2) - 1,
        1u64 << k2
    );
    if let Some(m) = c.certs.first() {
        let _ = writeln!(s, "rank note: {}", m.rank.note);
    }
    let _ = writeln!(
        s,
        "scope: finite instances only; the cardinal chi(D), the class of admissible domains and the adjoined element * are not computed"
    );
    s
}

/// Runs one command against a configuration.
pub fn run(cfg: &ExperimentConfig, cmd: Command, opts: RunOptions) -> Outcome {
    let mut out = Outcome::new();
    let limits = opts.limits.unwrap_or_else(Limits::from_env);
    let params = CertParams {
        seed: cfg.seed,
        depth: opts.depth.unwrap_or(cfg.oracle_bounds.depth),
        samples: cfg.samples,
    };
    let result: Step<Vec<String>> = (|| match cmd {
        Command::Validate => {
            let spec = validated(cfg, limits, &mut out)?;
            Ok(vec![format!(
                "valid: kappa1 = {}, kappa2 = {}, {} designated elements",
                spec.kappa1(),
                spec.kappa2(),
                spec.tags.iter().count()
            )])
        }
        Command::Build => {
            let b = built(cfg, limits, &mut out)?;
            Ok(vec![format!("built {} modules", b.family.len())])
        }
        Command::Certify | Command::Report => {
            let b = built(cfg, limits, &mut out)?;
            let c = certified(&b, params, &mut out)?;
            let text = summary(&b, &c);
            if cmd == Command::Report {
                out.files.insert("summary.txt".into(), text.clone());
            }
            Ok(vec![format!(
                "certified {} modules and {} non-isomorphism pairs",
                c.certs.len(),
                c.noniso.len()
            )])
        }
        Command::OracleCheck => {
            let b = built(cfg, limits, &mut out)?;
            let target = match &cfg.oracle_bounds.subset {
                Some(s) => {
                    let key: BTreeSet<TagId> = resolve_tags(&b.spec, s)?.into_iter().collect();
                    b.family.iter().find(|m| m.s.iter().cloned().collect::<BTreeSet<_>>() == key)
                }
                None => b.family.first(),
            };
            let Some(m) = target else {
                return cfg_err("oracle subset has no module");
            };
            let bounds = OracleBounds {
                coeff: opts.coeff.unwrap_or(cfg.oracle_bounds.coeff),
                exp: opts.exp.unwrap_or(cfg.oracle_bounds.exp),
                max_combinations: cfg.oracle_bounds.max_combinations,
            };
            let rigid = Rigid::new(Quotient::new(&b.spec.ring, &b.spec.tags));
            let rep = match rigid.brute_force_oracle(m, bounds) {
                Ok(r) => r,
                Err(OracleError::Module(e)) => return Err((Exit::OracleDisagreement, vec![format!("oracle: {e}")])),
                Err(e) => return cfg_err(format!("oracle: {e}")),
            };
            out.files.insert(format!("oracle-{}.json", m.label), canonical_json(&rep));
            let line = format!(
                "oracle S = {}: {} grid points, {} classes, {} disagreements",
                m.label,
                rep.grid_points,
                rep.classes,
                rep.disagreements.len()
            );
            if rep.passed {
                Ok(vec![line])
            } else {
                Err((Exit::OracleDisagreement, vec![line]))
            }
        }
    })();
    match result {
        Ok(msgs) => {
            out.messages.extend(msgs);
            out
        }
        Err((exit, msgs)) => {
            out.exit = exit;
            out.messages.extend(msgs);
            out
        }
    }
}

/// Label of a module, from a canonical file name.
fn strip<'a>(name: &'a str, prefix: &str) -> Option<&'a str> {
    name.strip_prefix(prefix)?.strip_suffix(".json")
}

/// Replays a written bundle (file name to contents).
pub fn verify_bundle(files: &BTreeMap<String, String>) -> Outcome {
    let out = Outcome::new();
    let mut modules: BTreeMap<String, (ValidatedSpec, GluedModule, ModulePresentation)> = BTreeMap::new();
    for (name, text) in files {
        let Some(label) = strip(name, "module-") else { continue };
        let p: ModulePresentation = match serde_json::from_str(text) {
            Ok(p) => p,
            Err(e) => return out.fail(Exit::Config, format!("{name}: {e}")),
        };
        match load_module(&p) {
            Ok((spec, m)) if m.label == label => {
                modules.insert(label.to_string(), (spec, m, p));
            }
            Ok(_) => return out.fail(Exit::Config, format!("{name}: label mismatch")),
            Err(e) => return out.fail(Exit::Validation, e),
        }
    }
    if modules.is_empty() {
        return out.fail(Exit::Config, "no module files to verify");
    }
    let mut replays: Vec<Replay> = Vec::new();
    let mut out = out;
    for (name, text) in files {
        if let Some(label) = strip(name, "cert-") {
            let Some((spec, m, _)) = modules.get(label) else {
                return out.fail(Exit::Config, format!("{name}: no module {label}"));
            };
            let mc: ModuleCertificates = match serde_json::from_str(text) {
                Ok(c) => c,
                Err(e) => return out.fail(Exit::Config, format!("{name}: {e}")),
            };
            let rigid = Rigid::new(Quotient::new(&spec.ring, &spec.tags));
            match (rigid.verify_indecomposable(m, &mc.indecomposability), rigid.verify_rank(m, &mc.rank)) {
                (Ok(a), Ok(b)) => replays.extend([a, b]),
                (Err(e), _) | (_, Err(e)) => return out.fail(Exit::Refuted, format!("{name}: {e}")),
            }
        } else if name.starts_with("noniso-") && name.ends_with(".json") {
            let c: NonIsomorphismCertificate = match serde_json::from_str(text) {
                Ok(c) => c,
                Err(e) => return out.fail(Exit::Config, format!("{name}: {e}")),
            };
            let (Some(l), Some(r)) = (modules.get(&c.left), modules.get(&c.right)) else {
                return out.fail(Exit::Config, format!("{name}: modules {} / {} missing", c.left, c.right));
            };
            if l.2.ring != r.2.ring || l.2.tags != r.2.tags {
                return out.fail(Exit::Config, format!("{name}: modules are over different designated data"));
            }
            let rigid = Rigid::new(Quotient::new(&l.0.ring, &l.0.tags));
            match rigid.verify_nonisomorphic(&l.1, &r.1, &c) {
                Ok(rep) => replays.push(rep),
                Err(e) => return out.fail(Exit::Refuted, format!("{name}: {e}")),
            }
        }
    }
    for r in &replays {
        out.messages.push(format!(
            "{}: recorded {}, replayed {}, regenerated {} [{}]",
            r.subject,
            verdict_word(&r.recorded),
            verdict_word(&r.replayed),
            if r.regenerated_identical { "identical" } else { "different" },
            if r.ok() { "ok" } else { "MISMATCH" }
        ));
    }
    out.files.insert("verify.json".into(), canonical_json(&replays));
    if replays.iter().any(|r| !r.ok()) {
        out.exit = Exit::Refuted;
    }
    out
}

fn verdict_word(v: &crate::certification::Verdict) -> &'static str {
    if v.passed() {
        "passed"
    } else {
        "refuted"
    }
}
