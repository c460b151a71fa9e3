//! Argument parsing, dispatch and report assembly.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sigma_core::cayley::{attach_2cells, build_window, components, dot_export, sublevel_graph, Level};
use sigma_core::sigma::geometry::{norm_bound_from_chi, random_instance, NormBoundInstance};
use sigma_core::sigma::triangulate::triangularize;
use sigma_core::sigma::{
    certificate_cone, sample_cone, sigma1_search, sigma2_probe, verify_derivation, verify_sigma1_certificate,
    verify_tree_witness, Derivation, DerivationOutcome, Evidence, Sigma1Options, Sigma2Aggregate, Sigma2Report, Status,
    Verdict,
};
use sigma_core::simplicial::{filtration_probe, Translates};
use sigma_core::track::{chi_track, enumerate_levels, search_nonneg_word, FiniteSubset, SearchOutcome};
use sigma_core::{Budgets, Character, Error, Presentation, Rational, Word};

use crate::certfile::CertificateFile;
use crate::error::{CliError, Result};
use crate::grammar::{digest, parse_character, parse_presentation, parse_rational, print_character};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TranslateMode {
    All,
    Nonneg,
}

#[derive(Debug, Parser)]
#[command(name = "sigma", version, about = "Certificates and window probes for Sigma-invariants of groups")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for sampling commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; reports do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    /// Leave timing out of reports.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[arg(long, global = true, default_value_t = 8, value_parser = positive)]
    pub max_word_len: usize,
    #[arg(long, global = true, default_value_t = 200_000, value_parser = positive)]
    pub max_frontier: usize,
    #[arg(long, global = true, default_value_t = 2_000_000, value_parser = positive)]
    pub max_nodes: usize,
    /// Wall-clock budget in milliseconds. Off by default since it makes
    /// results machine dependent.
    #[arg(long, global = true, value_parser = positive_u64)]
    pub wall_ms: Option<u64>,
    /// Window radius for window commands.
    #[arg(long, global = true, default_value_t = 3)]
    pub radius: usize,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> std::result::Result<u64, String> {
    positive(s).map(|n| n as u64)
}

impl RunConfig {
    pub fn budgets(&self) -> Budgets {
        Budgets {
            max_word_len: self.max_word_len,
            max_frontier: self.max_frontier,
            max_nodes: self.max_nodes,
            wall: self.wall_ms.map(Duration::from_millis),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GroupInput {
    /// Presentation file.
    pub group: PathBuf,
    /// Character literal, e.g. "a=1 b=-1/2". Missing generators are 0.
    #[arg(long = "char", default_value = "")]
    pub chi: String,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Longest t candidate.
    #[arg(long, default_value_t = 2)]
    pub t_max_len: usize,
    /// Longest word scanned by the free-tree refutation.
    #[arg(long, default_value_t = 4)]
    pub tree_max_len: usize,
    #[arg(long)]
    pub no_oracles: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Character track of a word.
    Track {
        #[command(flatten)]
        input: GroupInput,
        #[arg(long)]
        word: String,
    },
    /// The level set X^{m,chi} with witnesses.
    Levels {
        #[command(flatten)]
        input: GroupInput,
        #[arg(long)]
        m: usize,
    },
    /// A non-negative track word for an element of G_chi.
    GenAlong {
        #[command(flatten)]
        input: GroupInput,
        #[arg(long)]
        word: String,
    },
    /// Sigma^1 verdict with certificate or refutation witness.
    Sigma1 {
        #[command(flatten)]
        input: GroupInput,
        #[command(flatten)]
        search: SearchArgs,
        /// Also write the certificate file here.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Certificate cone, checked on seeded samples.
    Sigma1Cone {
        #[command(flatten)]
        input: GroupInput,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Derivations for all short non-negative relations in a window.
    Sigma2 {
        #[command(flatten)]
        input: GroupInput,
        #[command(flatten)]
        search: SearchArgs,
        /// Longest relation checked.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Presentation with relators of length at most 3 on a level set.
    Triangulate {
        #[command(flatten)]
        input: GroupInput,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        m: usize,
    },
    /// Sublevel graph of the Cayley graph in a ball.
    CayleyWindow {
        #[command(flatten)]
        input: GroupInput,
        /// Rational level or -inf.
        #[arg(long, default_value = "-inf", allow_hyphen_values = true)]
        level: String,
        /// Attach relator 2-cells.
        #[arg(long)]
        cells: bool,
    },
    /// pi_0 merges across the stages (C^m, s).
    FiltrationProbe {
        #[command(flatten)]
        input: GroupInput,
        #[arg(long, default_value_t = 2)]
        m_max: usize,
        /// Comma-separated levels, e.g. "0,-1,-2".
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        s_grid: String,
        #[arg(long, value_enum, default_value_t = TranslateMode::All)]
        translates: TranslateMode,
    },
    /// Re-checks a certificate file, optionally at another character.
    VerifyCert {
        cert: PathBuf,
        group: PathBuf,
        #[arg(long = "char")]
        chi: Option<String>,
    },
    /// Norm bound from a chi-bound, on one instance or seeded samples.
    GeomCheck {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// "P=-2,0 T=-1,0 r=1 h=1 nu=1/2"
        #[arg(long)]
        instance: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Track { .. } => "track",
            Command::Levels { .. } => "levels",
            Command::GenAlong { .. } => "gen-along",
            Command::Sigma1 { .. } => "sigma1",
            Command::Sigma1Cone { .. } => "sigma1-cone",
            Command::Sigma2 { .. } => "sigma2",
            Command::Triangulate { .. } => "triangulate",
            Command::CayleyWindow { .. } => "cayley-window",
            Command::FiltrationProbe { .. } => "filtration-probe",
            Command::VerifyCert { .. } => "verify-cert",
            Command::GeomCheck { .. } => "geom-check",
        }
    }
}

/// Exit code and output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Body of a report plus the exit code it implies.
struct Finding {
    code: i32,
    digest: Option<String>,
    result: Value,
    /// Replaces the JSON report under `--format dot`.
    dot: Option<String>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load_group(path: &Path) -> Result<Presentation> {
    parse_presentation(&read(path)?, path.parent())
}

fn load(input: &GroupInput) -> Result<(Presentation, Character, String)> {
    let p = load_group(&input.group)?;
    let chi = parse_character(&input.chi, &p)?;
    let d = digest(&p)?;
    Ok((p, chi, d))
}

fn show(p: &Presentation, w: &Word) -> String {
    w.display(p.names()).to_string()
}

fn rat(v: &Rational) -> Value {
    Value::String(v.to_string())
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Member => 0,
        Status::Refuted => 1,
        Status::Unknown => 2,
    }
}

fn options(search: &SearchArgs, config: &RunConfig) -> Sigma1Options {
    Sigma1Options {
        budgets: config.budgets(),
        t_max_len: search.t_max_len,
        tree_max_len: search.tree_max_len,
        use_oracles: !search.no_oracles,
    }
}

fn parse_level(text: &str) -> Result<Level> {
    match text.trim() {
        "-inf" => Ok(Level::NegInfinity),
        t => parse_rational(t)
            .map(Level::At)
            .ok_or_else(|| CliError::Usage(format!("`{t}` is neither a rational nor -inf"))),
    }
}

fn track_json(w: &Word, chi: &Character) -> Value {
    Value::Array(chi_track(w, chi).values().iter().map(rat).collect())
}

fn verdict_json(v: &Verdict, p: &Presentation, chi: &Character) -> Result<Value> {
    let mut out = json!({
        "status": v.status.as_str(),
        "soundness": v.soundness.as_str(),
        "route": v.route.as_str(),
    });
    let evidence = match &v.evidence {
        Evidence::Certificate(cert) => {
            let cone = certificate_cone(cert, p);
            let file = CertificateFile::new(cert, &cone, p, chi)?;
            json!({
                "certificate": serde_json::to_value(&file).expect("certificate serializes"),
                "verified": verify_sigma1_certificate(cert, p, chi),
            })
        }
        Evidence::ZeroCharacter => json!({ "zero_character": true }),
        Evidence::TreeWitness(w) => json!({
            "witness": show(p, w),
            "track": track_json(w, chi),
            "verified": verify_tree_witness(p, chi, w),
        }),
        Evidence::Budget { reason, t_candidates } => json!({
            "exhausted": reason.to_string(),
            "t_candidates": t_candidates,
        }),
    };
    out["evidence"] = evidence;
    Ok(out)
}

fn derivation_json(d: &Derivation, p: &Presentation) -> Value {
    Value::Array(
        d.factors
            .iter()
            .map(|f| {
                json!({
                    "conjugator": show(p, &f.conjugator),
                    "relator": f.relator.index,
                    "inverse": f.relator.inverse,
                    "rotation": f.relator.rotation,
                })
            })
            .collect(),
    )
}

/// Per-obligation entries and the exit code of a Σ² report.
fn sigma2_json(report: &Sigma2Report, p: &Presentation, chi: &Character, sigma1: Status) -> (i32, Value) {
    let mut failed_check = false;
    let obligations: Vec<Value> = report
        .obligations
        .iter()
        .map(|o| match &o.outcome {
            DerivationOutcome::Found(d) => {
                let verified = verify_derivation(d, &o.relation, p.relators(), chi);
                failed_check |= !verified;
                json!({
                    "relation": show(p, &o.relation),
                    "status": "derived",
                    "factors": derivation_json(d, p),
                    "verified": verified,
                })
            }
            DerivationOutcome::Unknown(e) => json!({
                "relation": show(p, &o.relation),
                "status": "unknown",
                "exhausted": e.to_string(),
            }),
        })
        .collect();
    let (aggregate, code) = match report.aggregate {
        Sigma2Aggregate::Vacuous => ("vacuous", if sigma1 == Status::Refuted { 1 } else { 2 }),
        Sigma2Aggregate::AllDerived => ("all-derived", 0),
        Sigma2Aggregate::Unknowns { .. } => ("unknowns", 2),
    };
    let code = if failed_check { 1 } else { code };
    let first_unknown = match report.aggregate {
        Sigma2Aggregate::Unknowns { first, .. } => json!(first),
        _ => Value::Null,
    };
    let value = json!({
        "aggregate": aggregate,
        "first_unknown": first_unknown,
        "max_len": report.max_len,
        "radius": report.radius,
        "soundness": report.soundness.as_str(),
        "obligations": obligations,
    });
    (code, value)
}

fn finding(code: i32, digest: Option<String>, result: Value) -> Finding {
    Finding { code, digest, result, dot: None }
}

fn parse_vector(text: &str) -> Option<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

fn parse_instance(text: &str) -> Result<NormBoundInstance> {
    let mut fields = std::collections::BTreeMap::new();
    for token in text.split_whitespace() {
        let (k, v) =
            token.split_once('=').ok_or_else(|| CliError::Usage(format!("expected key=value, found `{token}`")))?;
        fields.insert(k, v);
    }
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| CliError::Usage(format!("instance lacks `{k}`")));
    let scalar = |k: &str| {
        let v = get(k)?;
        parse_rational(v).ok_or_else(|| CliError::Usage(format!("`{v}` is not a rational literal")))
    };
    let vector = |k: &str| {
        let v = get(k)?;
        parse_vector(v).ok_or_else(|| CliError::Usage(format!("`{v}` is not a rational vector")))
    };
    Ok(NormBoundInstance { p: vector("P")?, t: vector("T")?, r: scalar("r")?, h: scalar("h")?, nu: scalar("nu")? })
}

fn instance_json(inst: &NormBoundInstance) -> Value {
    json!({
        "P": inst.p.iter().map(rat).collect::<Vec<_>>(),
        "T": inst.t.iter().map(rat).collect::<Vec<_>>(),
        "r": rat(&inst.r),
        "h": rat(&inst.h),
        "nu": rat(&inst.nu),
    })
}

fn execute(command: &Command, config: &RunConfig) -> Result<Finding> {
    let budgets = config.budgets();
    match command {
        Command::Track { input, word } => {
            let (p, chi, d) = load(input)?;
            let w = p.parse_word(word)?;
            let track = chi_track(&w, &chi);
            Ok(finding(
                0,
                Some(d),
                json!({
                    "word": show(&p, &w),
                    "track": track_json(&w, &chi),
                    "min": rat(track.min()),
                    "max": rat(track.max()),
                    "end": rat(track.end()),
                    "argmin": track.argmin(),
                    "nonnegative": track.is_nonneg(),
                }),
            ))
        }
        Command::Levels { input, m } => {
            let (p, chi, d) = load(input)?;
            let levels = enumerate_levels(&FiniteSubset::generators(&p)?, &chi, *m, &p, &budgets)?;
            let elements: Vec<Value> = levels
                .entries()
                .map(|(g, w)| {
                    json!({
                        "element": show(&p, g.word()),
                        "witness": show(&p, w),
                        "chi": rat(&chi.value(g.word())),
                    })
                })
                .collect();
            Ok(finding(0, Some(d), json!({ "m": m, "count": levels.len(), "elements": elements })))
        }
        Command::GenAlong { input, word } => {
            let (p, chi, d) = load(input)?;
            let g = p.normal_form(&p.parse_word(word)?)?;
            let element = show(&p, g.word());
            let result = match search_nonneg_word(&g, &FiniteSubset::generators(&p)?, &chi, &p, &budgets) {
                Ok(SearchOutcome::Found(w)) => finding(
                    0,
                    Some(d),
                    json!({ "status": "found", "element": element, "witness": show(&p, &w), "track": track_json(&w, &chi) }),
                ),
                Ok(SearchOutcome::Unknown(e)) => {
                    finding(2, Some(d), json!({ "status": "unknown", "element": element, "exhausted": e.to_string() }))
                }
                Err(Error::NotInGChi) => finding(
                    1,
                    Some(d),
                    json!({ "status": "not-in-g-chi", "element": element, "chi": rat(&chi.value(g.word())) }),
                ),
                Err(e) => return Err(e.into()),
            };
            Ok(result)
        }
        Command::Sigma1 { input, search, cert_out } => {
            let (p, chi, d) = load(input)?;
            let v = sigma1_search(&p, &chi, &options(search, config))?;
            if let (Some(path), Some(cert)) = (cert_out, v.certificate()) {
                let file = CertificateFile::new(cert, &certificate_cone(cert, &p), &p, &chi)?;
                std::fs::write(path, file.to_json())
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            }
            Ok(finding(status_code(v.status), Some(d), verdict_json(&v, &p, &chi)?))
        }
        Command::Sigma1Cone { input, search, samples } => {
            let (p, chi, d) = load(input)?;
            let v = sigma1_search(&p, &chi, &options(search, config))?;
            let Some(cert) = v.certificate() else {
                let code = if v.status == Status::Refuted { 1 } else { 2 };
                return Ok(finding(code, Some(d), json!({ "status": v.status.as_str(), "cone": Value::Null })));
            };
            let cone = certificate_cone(cert, &p);
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let points = sample_cone(&cone, &p, &chi, *samples, &mut rng);
            let scales = [Rational::from_integer(2.into()), Rational::new(1.into(), 3.into())];
            let mut failures = Vec::new();
            for point in &points {
                let mut checks = vec![point.clone()];
                checks.extend(scales.iter().map(|l| point.scale(l)));
                for c in checks {
                    if !cone.contains(&c) || !verify_sigma1_certificate(cert, &p, &c) {
                        failures.push(Value::String(print_character(&c, &p)));
                    }
                }
            }
            let file = CertificateFile::new(cert, &cone, &p, &chi)?;
            let shown: Vec<Value> = points.iter().take(5).map(|c| Value::String(print_character(c, &p))).collect();
            let code = if failures.is_empty() && points.len() == *samples { 0 } else { 1 };
            Ok(finding(
                code,
                Some(d),
                json!({
                    "status": v.status.as_str(),
                    "cone": serde_json::to_value(&file.cone).expect("cone serializes"),
                    "requested": samples,
                    "sampled": points.len(),
                    "first_samples": shown,
                    "scales": ["2", "1/3"],
                    "failures": failures,
                }),
            ))
        }
        Command::Sigma2 { input, search, max_len } => {
            let (p, chi, d) = load(input)?;
            let v = sigma1_search(&p, &chi, &options(search, config))?;
            let window = build_window(&p, &FiniteSubset::generators(&p)?, config.radius, &budgets)?;
            let report = sigma2_probe(&p, &chi, *max_len, &window, &[], &v, &budgets)?;
            let (code, mut value) = sigma2_json(&report, &p, &chi, v.status);
            value["sigma1"] = json!(v.status.as_str());
            Ok(finding(code, Some(d), value))
        }
        Command::Triangulate { input, search, m } => {
            let (p, chi, d) = load(input)?;
            let v = sigma1_search(&p, &chi, &options(search, config))?;
            let tri = triangularize(&p, &chi, *m, &budgets)?;
            let q = &tri.presentation;
            let generators: Vec<Value> = tri
                .elements
                .iter()
                .zip(q.names())
                .map(|(g, n)| json!({ "name": n, "element": show(&p, g.word()), "chi": rat(&chi.value(g.word())) }))
                .collect();
            let mut all_trivial = true;
            for r in q.relators() {
                all_trivial &= r.len() <= 3 && q.is_relation(r)?;
            }
            let window = build_window(q, &FiniteSubset::generators(q)?, 0, &budgets)?;
            let report = sigma2_probe(q, &tri.character, 0, &window, &tri.original_relators, &v, &budgets)?;
            let (code, mut value) = sigma2_json(&report, q, &tri.character, v.status);
            value["sigma1"] = json!(v.status.as_str());
            let code = if all_trivial { code } else { 1 };
            Ok(finding(
                code,
                Some(d),
                json!({
                    "m": m,
                    "generators": generators,
                    "relators": q.relators().iter().map(|r| show(q, r)).collect::<Vec<_>>(),
                    "relators_verified": all_trivial,
                    "originals": value,
                }),
            ))
        }
        Command::CayleyWindow { input, level, cells } => {
            let (p, chi, d) = load(input)?;
            let level = parse_level(level)?;
            let x = FiniteSubset::generators(&p)?;
            let window = build_window(&p, &x, config.radius, &budgets)?;
            let graph = sublevel_graph(&window, &x, &chi, &level, &p)?;
            let cells = if *cells { attach_2cells(&graph, p.relators(), &p)?.cells } else { vec![] };
            let dot = dot_export(&graph, &cells, &p);
            let vertices: Vec<Value> = graph
                .vertices()
                .iter()
                .zip(graph.values())
                .map(|(g, v)| json!({ "element": show(&p, g.word()), "chi": rat(v) }))
                .collect();
            let edges: Vec<Value> = graph
                .edges()
                .iter()
                .map(|e| json!({ "from": e.from, "to": e.to, "label": show(&p, graph.labels()[e.label].word()) }))
                .collect();
            let comps: Vec<Value> = components(&graph)
                .iter()
                .map(|c| Value::Array(c.iter().map(|g| Value::String(show(&p, g.word()))).collect()))
                .collect();
            let cells: Vec<Value> =
                cells.iter().map(|c| json!({ "base": show(&p, c.base.word()), "relator": c.relator })).collect();
            Ok(Finding {
                code: 0,
                digest: Some(d),
                result: json!({
                    "level": level.to_string(),
                    "radius": config.radius,
                    "vertices": vertices,
                    "edges": edges,
                    "components": comps,
                    "cells": cells,
                }),
                dot: Some(dot),
            })
        }
        Command::FiltrationProbe { input, m_max, s_grid, translates } => {
            let (p, chi, d) = load(input)?;
            let grid = s_grid.split(',').map(parse_level).collect::<Result<Vec<_>>>()?;
            let translates = match translates {
                TranslateMode::All => Translates::All,
                TranslateMode::Nonneg => Translates::NonNegative,
            };
            let x = FiniteSubset::generators(&p)?;
            let window = build_window(&p, &x, config.radius, &budgets)?;
            let report = filtration_probe(&p, &chi, &x, 0..=*m_max, &grid, &window, translates)?;
            let all_found = report.rows.iter().all(|r| r.found.is_some());
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "m": r.m,
                        "s": r.s.to_string(),
                        "small_classes": r.small_class_count,
                        "uniform_merge": r.found.as_ref().map(|(m2, s2)| json!({ "m": m2, "s": s2.to_string() })),
                    })
                })
                .collect();
            Ok(finding(
                if all_found { 0 } else { 2 },
                Some(d),
                json!({
                    "radius": report.radius,
                    "translates": match report.translates { Translates::All => "all", Translates::NonNegative => "nonneg" },
                    "rows": rows,
                }),
            ))
        }
        Command::VerifyCert { cert, group, chi } => {
            let file = CertificateFile::from_json(&read(cert)?)?;
            let p = load_group(group)?;
            let d = digest(&p)?;
            if d != file.group {
                return Err(CliError::Certificate("group digest does not match the presentation".into()));
            }
            let chi = parse_character(chi.as_deref().unwrap_or(&file.character), &p)?;
            let certificate = file.certificate(&p)?;
            let cone = file.cone(&p)?;
            let verified = verify_sigma1_certificate(&certificate, &p, &chi);
            Ok(finding(
                if verified { 0 } else { 1 },
                Some(d),
                json!({
                    "character": print_character(&chi, &p),
                    "verified": verified,
                    "in_cone": cone.contains(&chi),
                    "cone_matches": cone == certificate_cone(&certificate, &p),
                }),
            ))
        }
        Command::GeomCheck { samples, instance } => {
            if let Some(text) = instance {
                let inst = parse_instance(text)?;
                return Ok(match norm_bound_from_chi(&inst) {
                    Ok(slack) => finding(
                        if slack.is_nonneg() { 0 } else { 1 },
                        None,
                        json!({
                            "instance": instance_json(&inst),
                            "holds": slack.is_nonneg(),
                            "slack": { "rational": rat(&slack.rational), "sqrt_coeff": rat(&slack.sqrt_coeff), "radicand": rat(&slack.radicand) },
                        }),
                    ),
                    Err(Error::HypothesisViolated(h)) => {
                        finding(1, None, json!({ "instance": instance_json(&inst), "hypothesis_violated": h }))
                    }
                    Err(e) => return Err(e.into()),
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut violations = Vec::new();
            for _ in 0..*samples {
                let inst = random_instance(&mut rng);
                if !norm_bound_from_chi(&inst)?.is_nonneg() {
                    violations.push(instance_json(&inst));
                }
            }
            Ok(finding(
                if violations.is_empty() { 0 } else { 1 },
                None,
                json!({ "samples": samples, "violations": violations.len(), "violating": violations.into_iter().take(5).collect::<Vec<_>>() }),
            ))
        }
    }
}

/// Indented `key: value` rendering of a JSON value.
fn render_text(value: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let scalar = |v: &Value| match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Object(o) if o.is_empty() => Some("{}".into()),
        Value::Array(_) | Value::Object(_) => None,
        other => Some(other.to_string()),
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match scalar(v) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(v, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                match scalar(v) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(v, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

fn report(command: &Command, config: &RunConfig, found: Finding, elapsed: Duration) -> Result<String> {
    if config.format == Format::Dot {
        return found
            .dot
            .ok_or_else(|| CliError::Usage(format!("--format dot is not available for {}", command.name())));
    }
    let budgets = config.budgets();
    let mut value = json!({
        "tool": concat!("sigma ", env!("CARGO_PKG_VERSION")),
        "command": command.name(),
        "input_digest": found.digest,
        "seed": config.seed,
        "budgets": {
            "max_word_len": budgets.max_word_len,
            "max_frontier": budgets.max_frontier,
            "max_nodes": budgets.max_nodes,
            "wall_ms": config.wall_ms,
        },
        "exit_code": found.code,
        "result": found.result,
    });
    if !config.no_timing {
        value["timing_ms"] = json!(elapsed.as_millis() as u64);
    }
    Ok(match config.format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
            text.push('\n');
            text
        }
        _ => {
            let mut text = String::new();
            render_text(&value, 0, &mut text);
            text
        }
    })
}

/// Runs a parsed command on a dedicated pool when `--threads` is given.
pub fn dispatch(cli: &Cli) -> Outcome {
    let started = Instant::now();
    let work = || execute(&cli.command, &cli.config);
    let result = match cli.config.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(work),
            Err(e) => Err(CliError::Usage(format!("thread pool: {e}"))),
        },
        None => work(),
    };
    let result = result.and_then(|found| {
        let code = found.code;
        report(&cli.command, &cli.config, found, started.elapsed()).map(|stdout| (code, stdout))
    });
    match result {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Core(Error::BudgetExceeded(_)) => 2,
        other => other.exit_code(),
    }
}

/// Parses arguments and dispatches. Usage errors exit with 3.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code: 3, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            }
        }
    }
}
