use crate::{BoundsCommand, Cli, CliError, Command, GenerateCommand, KnotArg, LcCommand, Mode, MorseCommand};
use morselab::calculus::{cone_morse, dual_block_complex, dualize_matching, patch_interface, patch_morse, subdivide_morse, undualize_closed, DualizeMode};
use morselab::complex::cubes::{furch_ball, pile_of_cubes, KnotSpec};
use morselab::complex::{canonical_form, generators, Face};
use morselab::homology::{algebraic_depth, homology, reduced_homology, Coefficients};
use morselab::io::{parse_complex, parse_poset, write_facets, write_poset};
use morselab::lc::{census, e_upper, enumeration_bound, fuss_catalan, lc_assemble, lc_disassemble, random_tree_of_simplices, CensusConfig, CensusProgress, GluingScript};
use morselab::morse::{
    boundary_critical_morse, collapse_depth, endo_collapse_from, is_collapsible, is_endo_collapsible, pin_critical, polar_morse, verify_morse_inequalities,
    Certificate, CertificateKind, CollapseWitness, DepthStatus, MorseMatching, SearchConfig, Verdict,
};
use morselab::recognition::{hamiltonian_depth, hierarchy_report};
use morselab::{FacePoset, SimplicialComplex};
use serde_json::{json, Value};
use std::collections::HashMap;
use std::path::{Path, PathBuf};

/// Exit code, JSON report, and raw text that replaces the report when set.
pub struct Outcome {
    pub code: u8,
    pub report: Value,
    pub raw: Option<String>,
}

fn done(code: u8, report: Value) -> Result<Outcome, CliError> {
    Ok(Outcome { code, report, raw: None })
}

/// One `key: value` line per top-level field; nested values stay compact JSON.
pub fn render_text(report: &Value) -> String {
    match report {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect(),
        other => format!("{other}\n"),
    }
}

/// Resolves a relative path that does not exist against `MORSELAB_DATA`.
fn resolve(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("MORSELAB_DATA") {
        Some(dir) if Path::new(&dir).join(path).exists() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    let path = resolve(path);
    std::fs::read_to_string(&path).map_err(|source| CliError::Io { path, source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_complex(path: &Path) -> Result<SimplicialComplex, CliError> {
    parse_complex(&read(path)?).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
}

fn load_certificate(path: &Path) -> Result<Certificate, CliError> {
    Certificate::from_json(&read(path)?).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
}

fn load_matching(k: &SimplicialComplex, path: &Path) -> Result<MorseMatching, CliError> {
    Ok(load_certificate(path)?.validate_on(k)?)
}

fn labels(list: &str) -> Vec<String> {
    list.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

fn face(k: &SimplicialComplex, list: &str) -> Result<Face, CliError> {
    let names = labels(list);
    for n in &names {
        if k.vertex_id(n).is_none() {
            return Err(morselab::Error::UnknownLabel(n.clone()).into());
        }
    }
    k.face_from_labels(&names).filter(|f| k.contains_face(f)).ok_or_else(|| morselab::Error::NotAFace(names).into())
}

fn search_config(cli: &Cli) -> SearchConfig {
    SearchConfig { budget: cli.global.budget, seed: cli.global.seed, ..SearchConfig::default() }
}

fn kind_of(m: &MorseMatching) -> CertificateKind {
    if m.is_boundary_critical() {
        CertificateKind::BoundaryCritical
    } else {
        CertificateKind::Matching
    }
}

/// Writes the certificate when asked and returns it as JSON.
fn emit_certificate(cert: &Certificate, path: Option<&PathBuf>) -> Result<Value, CliError> {
    if let Some(p) = path {
        write(p, &cert.to_json())?;
    }
    Ok(serde_json::to_value(cert).expect("certificates serialize"))
}

fn emit_complex(k: &SimplicialComplex, path: Option<&PathBuf>) -> Result<Value, CliError> {
    if let Some(p) = path {
        write(p, &write_facets(k))?;
    }
    Ok(json!({ "facets": k.num_facets(), "f_vector": k.f_vector(), "canonical": canonical_form(k).to_hex() }))
}

fn verdict_report(v: &Verdict<CollapseWitness>, cert_path: Option<&PathBuf>) -> Result<Outcome, CliError> {
    let report = match v {
        Verdict::Yes { witness } => json!({
            "status": "yes",
            "facet": witness.facet_labels,
            "pairs": witness.sequence.pairs.len(),
            "certificate": emit_certificate(&witness.certificate, cert_path)?,
        }),
        Verdict::No { obstruction } => json!({ "status": "no", "obstruction": obstruction }),
        Verdict::Indeterminate { expansions } => json!({ "status": "indeterminate", "expansions": expansions }),
    };
    done(v.exit_code() as u8, report)
}

fn depth_code(status: DepthStatus) -> u8 {
    match status {
        DepthStatus::Exact | DepthStatus::LowerBoundProved => 0,
        DepthStatus::Indeterminate => 2,
    }
}

fn dualize_mode(mode: Option<Mode>, f: &MorseMatching, p: &FacePoset) -> DualizeMode {
    match mode {
        Some(Mode::BcToPlain) => DualizeMode::BcToPlain,
        Some(Mode::PlainToBc) => DualizeMode::PlainToBc,
        None if f.is_boundary_critical() && p.has_boundary() => DualizeMode::BcToPlain,
        None => DualizeMode::PlainToBc,
    }
}

fn generated(k: &SimplicialComplex, out: Option<&PathBuf>, extra: Value) -> Result<Outcome, CliError> {
    let text = write_facets(k);
    match out {
        Some(p) => {
            write(p, &text)?;
            let mut report = json!({ "written": p, "facets": k.num_facets(), "f_vector": k.f_vector() });
            if let (Value::Object(r), Value::Object(e)) = (&mut report, extra) {
                r.extend(e);
            }
            done(0, report)
        }
        None => Ok(Outcome { code: 0, report: Value::Null, raw: Some(text) }),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = search_config(cli);
    let field = cli.global.field;
    match &cli.command {
        Command::Check { input } => {
            let k = load_complex(input)?;
            let info = k.pseudomanifold_check();
            done(
                u8::from(!info.is_pseudo_manifold),
                json!({
                    "vertices": k.num_vertices(),
                    "dim": k.dim(),
                    "f_vector": k.f_vector(),
                    "euler_characteristic": k.euler_characteristic(),
                    "pure": info.pure,
                    "strongly_connected": info.strongly_connected,
                    "max_ridge_degree": info.max_ridge_degree,
                    "pseudo_manifold": info.is_pseudo_manifold,
                    "closed": info.is_closed,
                    "boundary_facets": info.boundary.as_ref().map_or(0, |b| b.num_facets()),
                    "canonical": canonical_form(&k).to_hex(),
                }),
            )
        }
        Command::Homology { input, reduced } => {
            let k = load_complex(input)?;
            let f = field.unwrap_or(Coefficients::Z);
            let h = if *reduced { reduced_homology(&k, f) } else { homology(&k, f) };
            done(0, serde_json::to_value(h).expect("profiles serialize"))
        }
        Command::Adepth { input } => {
            let k = load_complex(input)?;
            let fields = field.map_or_else(|| vec![Coefficients::Q, Coefficients::F2], |f| vec![f]);
            let depths = fields.iter().map(|&f| algebraic_depth(&k, f)).collect::<Result<Vec<_>, _>>()?;
            let min = depths.iter().map(|d| d.adepth).min();
            done(0, json!({ "dim": k.dim(), "adepth": min, "fields": depths }))
        }
        Command::Collapse { input, delete_facet, cert } => {
            let mut k = load_complex(input)?;
            if let Some(d) = delete_facet {
                k = k.removal(&face(&k, d)?)?;
            }
            verdict_report(&is_collapsible(&k, &cfg)?, cert.as_ref())
        }
        Command::Endo { input, delete_facet, facet, cert } => {
            let mut k = load_complex(input)?;
            if let Some(d) = delete_facet {
                k = k.removal(&face(&k, d)?)?;
            }
            let v = match facet {
                Some(f) => endo_collapse_from(&k, &face(&k, f)?, &cfg)?,
                None => is_endo_collapsible(&k, &cfg)?,
            };
            verdict_report(&v, cert.as_ref())
        }
        Command::Cdepth { input, cert } => {
            let k = load_complex(input)?;
            let c = collapse_depth(&k, &cfg)?;
            let certificate = c.witness.as_ref().map(|w| emit_certificate(&w.certificate, cert.as_ref())).transpose()?;
            done(
                depth_code(c.status),
                json!({
                    "value": c.k,
                    "dim": c.dim,
                    "status": c.status,
                    "obstruction": c.obstruction,
                    "expansions": c.expansions,
                    "facet": c.witness.as_ref().and_then(|w| w.facet_labels.clone()),
                    "certificate": certificate,
                }),
            )
        }
        Command::Hdepth { input } => {
            let k = load_complex(input)?;
            let h = hamiltonian_depth(&k, &cfg)?;
            done(depth_code(h.status), serde_json::to_value(&h).expect("depths serialize"))
        }
        Command::Morse(MorseCommand::BuildBc { input, facet, vertex, cert }) => {
            let k = load_complex(input)?;
            let facet = match facet {
                Some(f) => face(&k, f)?,
                None => k.facets()[0].clone(),
            };
            let seed = Some(cli.global.seed);
            let closed = k.pseudomanifold_check().is_closed;
            let (m, kind) = if closed {
                let v = match vertex {
                    Some(v) => k.vertex_id(v).ok_or_else(|| morselab::Error::UnknownLabel(v.clone()))?,
                    None => facet[0],
                };
                (polar_morse(&k, &facet, v, seed)?, CertificateKind::Matching)
            } else {
                (boundary_critical_morse(&k, &facet, seed)?, CertificateKind::BoundaryCritical)
            };
            let kind = if m.is_polar() {
                CertificateKind::Polar
            } else if m.is_equatorial() {
                CertificateKind::Equatorial
            } else {
                kind
            };
            let certificate = emit_certificate(&Certificate::from_matching(&m, kind), cert.as_ref())?;
            done(0, json!({ "kind": kind, "c": m.c(), "c_int": m.c_int(), "certificate": certificate }))
        }
        Command::Morse(MorseCommand::Verify { input, matching, absolute }) => {
            let k = load_complex(input)?;
            let m = load_matching(&k, matching)?;
            let relative = !absolute && m.is_boundary_critical() && k.pseudomanifold_check().boundary.is_some();
            let r = verify_morse_inequalities(&k, &m, relative, field.unwrap_or(Coefficients::Q))?;
            done(u8::from(!r.holds), serde_json::to_value(&r).expect("reports serialize"))
        }
        Command::Dualize { input, matching, mode, poset_out, cert } => {
            let k = load_complex(input)?;
            let p = FacePoset::from_complex(&k);
            let f = load_matching(&k, matching)?;
            let mode = dualize_mode(*mode, &f, &p);
            let dual = dual_block_complex(&k)?;
            let g = dualize_matching(&p, &dual, &f, mode)?;
            let d = p.max_dim();
            // Relative duality: the dual counts are the host counts read backwards.
            let identity = (0..=d).all(|j| match mode {
                DualizeMode::BcToPlain => g.c_at(d - j) == f.c_int_at(j),
                DualizeMode::PlainToBc => g.c_int_at(d - j) == f.c_at(j),
            });
            let round_trip = (!p.has_boundary()).then(|| undualize_closed(&p, &g).map(|b| b.c() == f.c())).transpose()?;
            if let Some(path) = poset_out {
                write(path, &write_poset(dual.poset()))?;
            }
            let certificate = emit_certificate(&Certificate::from_matching(&g, kind_of(&g)), cert.as_ref())?;
            done(
                u8::from(!identity || round_trip == Some(false)),
                json!({
                    "mode": mode,
                    "host_c": f.c(),
                    "host_c_int": f.c_int(),
                    "dual_c": g.c(),
                    "dual_c_int": g.c_int(),
                    "identity_holds": identity,
                    "round_trip_restores_c": round_trip,
                    "certificate": certificate,
                }),
            )
        }
        Command::Cone { input, matching, apex, complex_out, cert } => {
            let k = load_complex(input)?;
            let f = load_matching(&k, matching)?;
            let (c, g) = cone_morse(&k, &f, apex)?;
            let identity = (0..=k.dim() as usize).all(|j| g.c_int_at(j + 1) == f.c_int_at(j));
            let complex = emit_complex(&c, complex_out.as_ref())?;
            let certificate = emit_certificate(&Certificate::from_matching(&g, kind_of(&g)), cert.as_ref())?;
            done(
                u8::from(!identity),
                json!({ "c_int": f.c_int(), "cone_c_int": g.c_int(), "identity_holds": identity, "complex": complex, "certificate": certificate }),
            )
        }
        Command::Patch { first, second, sigma, complex_out, cert } => {
            let (m1, m2) = (load_complex(first)?, load_complex(second)?);
            let inter = patch_interface(&m1, &m2)?;
            let names = labels(sigma);
            let ridge = face(&inter, sigma)?;
            let seed = Some(cli.global.seed);
            let pin = |k: &SimplicialComplex| -> Result<MorseMatching, CliError> {
                let ids: Vec<u32> = names.iter().map(|n| k.vertex_id(n).ok_or_else(|| morselab::Error::UnknownLabel(n.clone()))).collect::<Result<_, _>>()?;
                let facet = k
                    .facets()
                    .iter()
                    .find(|f| ids.iter().all(|v| f.contains(v)))
                    .ok_or_else(|| morselab::Error::NotAFace(names.clone()))?;
                Ok(pin_critical(k, facet, seed)?)
            };
            let (f, g) = (pin(&m1)?, pin(&m2)?);
            let h = pin_critical(&inter, &ridge, seed)?;
            let (u, m) = patch_morse(&m1, &m2, &f, &g, &h, &names)?;
            let complex = emit_complex(&u, complex_out.as_ref())?;
            let certificate = emit_certificate(&Certificate::from_matching(&m, kind_of(&m)), cert.as_ref())?;
            done(
                0,
                json!({ "f_c_int": f.c_int(), "g_c_int": g.c_int(), "h_c_int": h.c_int(), "c_int": m.c_int(), "complex": complex, "certificate": certificate }),
            )
        }
        Command::Subdivide { input, matching, mode, complex_out, cert } => {
            let k = load_complex(input)?;
            let p = FacePoset::from_complex(&k);
            let f = load_matching(&k, matching)?;
            let mode = dualize_mode(*mode, &f, &p);
            let t = subdivide_morse(&k, &f, mode, &HashMap::new(), cli.global.seed)?;
            let got = if mode == DualizeMode::BcToPlain { t.matching.c() } else { t.matching.c_int() };
            let identity = got == t.expected.as_slice();
            let complex = emit_complex(&t.complex, complex_out.as_ref())?;
            let certificate = emit_certificate(&Certificate::from_matching(&t.matching, kind_of(&t.matching)), cert.as_ref())?;
            done(
                u8::from(!identity),
                json!({
                    "mode": mode,
                    "c": t.matching.c(),
                    "c_int": t.matching.c_int(),
                    "expected": t.expected,
                    "link_excess": t.link_excess,
                    "identity_holds": identity,
                    "complex": complex,
                    "certificate": certificate,
                }),
            )
        }
        Command::Lc(LcCommand::Assemble { script, complex_out, cert }) => {
            let text = read(script)?;
            let s: GluingScript = serde_json::from_str(&text)
                .map_err(|e| CliError::Input { path: script.clone(), source: morselab::Error::Parse { line: e.line(), msg: e.to_string() } })?;
            let out = lc_assemble(&s, cli.global.strict)?;
            let complex = emit_complex(&out.complex, complex_out.as_ref())?;
            let certificate = out
                .matching
                .as_ref()
                .map(|m| emit_certificate(&Certificate::from_matching(m, kind_of(m)), cert.as_ref()))
                .transpose()?;
            done(
                u8::from(!out.simplicial),
                json!({
                    "simplicial": out.simplicial,
                    "c_int": out.matching.as_ref().map(|m| m.c_int().to_vec()),
                    "complex": complex,
                    "certificate": certificate,
                }),
            )
        }
        Command::Lc(LcCommand::Disassemble { input, matching, out }) => {
            let k = load_complex(input)?;
            let f = load_matching(&k, matching)?;
            let script = lc_disassemble(&k, &f)?;
            let text = serde_json::to_string_pretty(&script).expect("scripts serialize");
            match out {
                Some(p) => {
                    write(p, &text)?;
                    done(
                        0,
                        json!({ "written": p, "tree_facets": script.tree.num_facets(), "phase_a": script.phase_a.len(), "phase_b": script.phase_b.len() }),
                    )
                }
                None => Ok(Outcome { code: 0, report: Value::Null, raw: Some(text + "\n") }),
            }
        }
        Command::Census { d, n, predicate, max_free, progress } => {
            let cfg = CensusConfig { d: *d, n: *n, predicate: (*predicate).into(), max_free: *max_free, budget: cli.global.budget };
            let emit = |p: CensusProgress| eprintln!("{}", serde_json::to_string(&p).expect("progress serializes"));
            let r = census(&cfg, progress.then_some(&emit as &(dyn Fn(CensusProgress) + Sync)))?;
            done(if r.complete { 0 } else { 2 }, serde_json::to_value(&r).expect("reports serialize"))
        }
        Command::Bounds(BoundsCommand::FussCatalan { d, n }) => {
            let value = fuss_catalan(*d, *n);
            match cli.global.format {
                crate::Format::Text => Ok(Outcome { code: 0, report: Value::Null, raw: Some(format!("{value}\n")) }),
                crate::Format::Json => done(0, json!({ "d": d, "N": n, "value": value.to_string() })),
            }
        }
        Command::Bounds(BoundsCommand::Enumeration { d, n, m }) => {
            let e = e_upper();
            let b = enumeration_bound(*d, *n, *m, &e)?;
            let ceiling = morselab::lc::bounds::ceiling(&b);
            done(
                0,
                json!({
                    "d": d,
                    "N": n,
                    "m": m,
                    "ceiling": ceiling.to_string(),
                    "log10": morselab::lc::bounds::log10(&b),
                    "e_upper": e.to_string(),
                }),
            )
        }
        Command::Generate(GenerateCommand::Furch { knot, size, out }) => {
            let spec = match knot {
                KnotArg::Trefoil => KnotSpec::trefoil(),
                KnotArg::Straight => KnotSpec::straight(*size, size / 2, size / 2),
            };
            let b = furch_ball(&spec)?;
            generated(&b.complex, out.as_ref(), json!({ "spanning_edge": b.spanning_edge, "tube_cubes": b.tube.len() }))
        }
        Command::Generate(GenerateCommand::Pile { a, b, c, remove, out }) => {
            let cubes = remove
                .iter()
                .map(|s| {
                    let v: Vec<i32> = s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().map_err(|_| CliError::Usage(format!("bad cube {s:?}")))?;
                    <[i32; 3]>::try_from(v).map_err(|_| CliError::Usage(format!("cube {s:?} needs three coordinates")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let pile = pile_of_cubes(*a, *b, *c, &cubes)?;
            generated(&pile.complex, out.as_ref(), json!({ "cubes": pile.cubes.len() }))
        }
        Command::Generate(GenerateCommand::Tree { d, n, out }) => {
            let t = random_tree_of_simplices(*d, *n, cli.global.seed)?;
            generated(t.complex(), out.as_ref(), json!({ "boundary_ridges": t.boundary_ridges().len() }))
        }
        Command::Generate(GenerateCommand::StackedSphere { d, n, out }) => {
            let k = generators::stacked_sphere(*d, *n, cli.global.seed)?;
            generated(&k, out.as_ref(), json!({}))
        }
        Command::Hierarchy { input } => {
            let k = load_complex(input)?;
            let r = hierarchy_report(&k, &cfg)?;
            done(0, serde_json::to_value(&r).expect("reports serialize"))
        }
        Command::ValidateCert { input, cert } => {
            let text = read(input)?;
            let p = if text.trim_start().starts_with('[') && text.contains('{') {
                parse_poset(&text).map_err(|source| CliError::Input { path: input.clone(), source })?
            } else {
                FacePoset::from_complex(&parse_complex(&text).map_err(|source| CliError::Input { path: input.clone(), source })?)
            };
            let c = load_certificate(cert)?;
            match c.validate(&p) {
                Ok(m) => done(0, json!({ "valid": true, "kind": c.kind, "c": m.c(), "c_int": m.c_int() })),
                Err(e) => done(1, json!({ "valid": false, "kind": c.kind, "reason": e.to_string() })),
            }
        }
    }
}
