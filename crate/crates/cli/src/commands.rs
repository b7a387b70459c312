//! One function per subcommand. Each returns the certificate JSON, a text
//! summary and an exit status; printing and file output live in `main`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use upb_core::geupb::{ge_check, tensor_upb, triple_tensor, CutVerdict};
use upb_core::ppt::{build_complement_state, certify_splits, is_ppt_all_cuts, is_scaled_projector};
use upb_core::structure::{bound_check, exclusion_predicates, fuzz_corpus, maxsum as max_sum, maxsum_oracle, o_numbers};
use upb_core::unextend::{
    check_orthogonality, drop_row, enumerate_orthogonal_with, find_extension_with, group, solution_span_rank,
    Orthogonality, SearchStats,
};
use upb_core::uom::{
    coincidence_table, distinguishing_features, independent_variable_counts, inequivalence_report, instantiate,
    Verdict,
};
use upb_core::{PartySplit, ProductVectorSet};

use crate::cert::{pretty, CliError, Exit, Outcome};
use crate::context::{parse_split, Context};
use crate::wire;

fn stats(s: &SearchStats) -> Value {
    json!({ "nodes": s.nodes, "rankEvaluations": s.rank_evaluations, "leaves": s.leaves })
}

fn orthogonality(set: &ProductVectorSet) -> Option<(usize, usize)> {
    match check_orthogonality(set) {
        Orthogonality::Ok => None,
        Orthogonality::ViolatingPair(i, j) => Some((i, j)),
    }
}

fn pair_key(a: usize, b: usize) -> String {
    [a, b].iter().map(|&q| (b'A' + q as u8) as char).collect()
}

/// `catalog`: the entries themselves, in the catalog file format, so the
/// output can be fed back through `--catalog`.
pub fn catalog(ctx: &Context, name: Option<&str>) -> Result<Outcome, CliError> {
    let specs = match name {
        Some(n) => vec![ctx.catalog.lookup(n)?],
        None => ctx.catalog.specs.clone(),
    };
    let mut text = String::new();
    for s in &specs {
        let lint = s.lint();
        let _ = write!(text, "{:<18} {}x{}  variables {}", s.name, s.rows, s.cols, s.variables().len());
        if !lint.is_empty() {
            let _ = write!(text, "  lint: {}", serde_json::to_string(&lint).expect("serializable"));
        }
        text.push('\n');
    }
    let json = match name {
        Some(_) => pretty(&specs[0]),
        None => pretty(&specs),
    };
    Ok(Outcome { json, text, exit: Exit::Ok, failure: None })
}

/// `verify`: is the (possibly row-dropped) instance a UPB under `split`?
pub fn verify(ctx: &Context, uom: &str, drop: Option<usize>, split: Option<&str>) -> Result<Outcome, CliError> {
    let (inst, set) = ctx.instance(uom, drop)?;
    let split = parse_split(split, set.n_qubits())?;
    let mut v = json!({ "rows": set.len(), "drop": drop, "variables": inst.assignment });
    if let Some((i, j)) = orthogonality(&set) {
        v["orthogonal"] = json!(false);
        v["violatingPair"] = json!([i, j]);
        v["upb"] = json!(false);
        let text = format!("{uom}: rows {i} and {j} are not orthogonal\n");
        return Ok(Outcome::claim(&ctx.cert(Some(uom), Some(&split), v), text, false));
    }
    v["orthogonal"] = json!(true);
    let g = group(&set, &split)?;
    let (w, st) = find_extension_with(&g, ctx.opts)?;
    v["upb"] = json!(w.is_none());
    v["searchStats"] = stats(&st);
    let mut cert = ctx.cert(Some(uom), Some(&split), Value::Null);
    let text = match &w {
        None => format!("{uom} seed {} is a UPB under {split}\n", ctx.seed),
        Some(w) => {
            v["witnessAssignment"] = json!(w.assignment);
            v["witnessVerified"] = json!(w.verify(&g));
            cert.solutions.push(wire::witness(w));
            format!("{uom} seed {} is extendible under {split}; witness in the certificate\n", ctx.seed)
        }
    };
    cert.verdicts = v;
    Ok(Outcome::claim(&cert, text, w.is_none()))
}

/// `enumerate`: every product vector orthogonal to the instance.
pub fn enumerate(ctx: &Context, uom: &str, drop: Option<usize>, split: Option<&str>) -> Result<Outcome, CliError> {
    let (_, set) = ctx.instance(uom, drop)?;
    let split = parse_split(split, set.n_qubits())?;
    let (sol, st) = enumerate_orthogonal_with(&set, &split, ctx.opts)?;
    let count = sol.count();
    let v = json!({
        "rows": set.len(),
        "drop": drop,
        "count": count,
        "finite": sol.is_finite(),
        "families": sol.families.iter().map(wire::family).collect::<Vec<_>>(),
        "spanRank": solution_span_rank(&sol),
        "searchStats": stats(&st),
    });
    let mut cert = ctx.cert(Some(uom), Some(&split), v);
    cert.solutions = wire::solutions(&sol);
    let text = match count {
        Some(n) => format!("{n} orthogonal product vectors under {split}\n"),
        None => format!(
            "infinitely many orthogonal product vectors under {split} ({} isolated, {} families)\n",
            sol.vectors.len(),
            sol.families.len()
        ),
    };
    Ok(Outcome::ok(&cert, text))
}

/// `state`: the normalized projector onto the complement of the instance,
/// its PPT verdicts and, with `certify`, the range criterion per split.
/// The first split is the one reported at top level; the state counts as
/// certified when it is PPT and entangled under every split.
pub fn state(
    ctx: &Context,
    uom: &str,
    drop: Option<usize>,
    splits: &[String],
    certify: bool,
) -> Result<Outcome, CliError> {
    let (_, set) = ctx.instance(uom, drop)?;
    let n = set.n_qubits();
    let splits: Vec<PartySplit> = if splits.is_empty() {
        vec![PartySplit::parse("AB:CD", n), PartySplit::parse("A:B:CD", n), Ok(PartySplit::finest(n))]
            .into_iter()
            .collect::<Result<_, _>>()?
    } else {
        splits.iter().map(|s| PartySplit::parse(s, n)).collect::<Result<_, _>>()?
    };
    let rho = build_complement_state(&set)?;
    let ppt = is_ppt_all_cuts(&rho, n)?;
    let all_ppt = ppt.values().all(|&b| b);
    let mut v = json!({
        "rows": set.len(),
        "drop": drop,
        "rank": rho.rank(),
        "trace": upb_core::exact::rat_to_string(&rho.trace().re),
        "scaledProjector": is_scaled_projector(&rho),
        "ppt": ppt,
    });
    let mut text = format!("rank {}, PPT on all {} cuts: {all_ppt}\n", rho.rank(), ppt.len());
    let mut holds = true;
    if certify {
        let certs = certify_splits(&set, &splits, ctx.opts)?;
        let mut per = Map::new();
        for c in &certs {
            per.insert(
                c.split.to_string(),
                json!({
                    "count": c.range_product_count,
                    "spanRank": c.range_product_span_rank,
                    "spanBound": c.span_bound,
                    "entangled": c.entangled,
                    "reason": c.reason,
                }),
            );
            let _ = writeln!(text, "{}: {}", c.split, c.reason);
        }
        let entangled = certs.iter().all(|c| c.entangled);
        v["rangeProductCount"] = json!(certs[0].range_product_count);
        v["entangled"] = json!(entangled);
        v["splitVerdicts"] = Value::Object(per);
        holds = entangled && all_ppt;
    }
    Ok(Outcome::claim(&ctx.cert(Some(uom), splits.first(), v), text, holds))
}

/// `state --sweep`: orthogonal product vector counts of every drop-one
/// subset of every 8-row 4-qubit catalog entry under `split`. Nothing is
/// asserted.
pub fn state_sweep(ctx: &Context, split: Option<&str>) -> Result<Outcome, CliError> {
    let split = PartySplit::parse(split.unwrap_or("AB:CD"), 4)?;
    let mut counts = Map::new();
    let mut over_nine = Vec::new();
    let mut text = String::new();
    for f in ctx.catalog.specs.iter().filter(|s| s.rows == 8 && s.cols == 4) {
        let (_, set) = instantiate(f, ctx.seed)?;
        let mut row = Vec::new();
        for i in 1..=set.len() {
            let sol = enumerate_orthogonal_with(&drop_row(&set, i)?, &split, ctx.opts)?.0;
            let c = sol.count();
            if c.is_none_or(|c| c > 9) {
                over_nine.push(format!("{} drop {i}", f.name));
            }
            row.push(c);
        }
        let shown: Vec<String> = row.iter().map(|c| c.map_or("inf".into(), |c| c.to_string())).collect();
        let _ = writeln!(text, "{}: {}", f.name, shown.join(" "));
        counts.insert(f.name.clone(), json!(row));
    }
    let v = json!({ "counts": counts, "moreThanNine": over_nine });
    Ok(Outcome::ok(&ctx.cert(None, Some(&split), v), text))
}

/// `ge`: unextendibility across every bipartition.
pub fn ge(ctx: &Context, uom: &str) -> Result<Outcome, CliError> {
    let (_, set) = ctx.instance(uom, None)?;
    let ge = ge_check(&set)?;
    let mut cert = ctx.cert(Some(uom), None, Value::Null);
    let mut per = Map::new();
    let mut text = String::new();
    for (cut, verdict) in &ge.per_bipartition {
        let kind = match verdict {
            CutVerdict::Upb => "upb",
            CutVerdict::ExtendibleWith(_) => "extendible",
            CutVerdict::TwoByNAutoFail(_) => "twoByN",
        };
        let mut entry = json!({ "verdict": kind });
        if let Some(w) = verdict.witness() {
            entry["witnessIndex"] = json!(cert.solutions.len());
            entry["witnessAssignment"] = json!(w.assignment);
            cert.solutions.push(wire::witness(w));
        }
        per.insert(cut.clone(), entry);
        let _ = writeln!(text, "{cut}: {kind}");
    }
    let _ = writeln!(text, "almost GE: {}, GEUPB: {}", ge.is_almost_ge, ge.is_geupb);
    cert.verdicts = json!({ "perBipartition": per, "isAlmostGe": ge.is_almost_ge, "isGeupb": ge.is_geupb });
    Ok(Outcome::ok(&cert, text))
}

/// `tensor`: the tensor product of two `parties`-partite sets (or the
/// three-factor cyclic construction), optionally checked for
/// unextendibility under the matching split.
pub fn tensor(
    ctx: &Context,
    left: &str,
    right: Option<&str>,
    parties: usize,
    triple: bool,
    verify: bool,
) -> Result<Outcome, CliError> {
    let (_, l) = ctx.instance(left, None)?;
    let (name, t) = if triple {
        (format!("{left}^3"), triple_tensor(&l, parties)?)
    } else {
        let right = right.unwrap_or(left);
        let (_, r) = ctx.instance(right, None)?;
        (format!("{left}x{right}"), tensor_upb(&l, &r, parties)?)
    };
    let split = PartySplit::uniform(parties, t.n_qubits() / parties);
    let orth = orthogonality(&t);
    let mut v = json!({
        "rows": t.len(),
        "qubits": t.n_qubits(),
        "dims": split.dims(),
        "orthogonal": orth.is_none(),
    });
    let mut text = format!("{name}: {} rows in {:?}\n", t.len(), split.dims());
    let mut cert = ctx.cert(Some(&name), Some(&split), Value::Null);
    let mut holds = orth.is_none();
    if let Some((i, j)) = orth {
        v["violatingPair"] = json!([i, j]);
        let _ = writeln!(text, "rows {i} and {j} are not orthogonal");
    } else if verify {
        let g = group(&t, &split)?;
        let (w, st) = find_extension_with(&g, ctx.opts)?;
        v["upb"] = json!(w.is_none());
        v["searchStats"] = stats(&st);
        if let Some(w) = &w {
            cert.solutions.push(wire::witness(w));
        }
        let _ = writeln!(text, "UPB under {split}: {}", w.is_none());
        holds = w.is_none();
    }
    cert.verdicts = v;
    Ok(Outcome::claim(&cert, text, holds))
}

/// `predicates`: exclusion predicates and o-numbers of an instance, and a
/// soundness fuzz in which every firing must come with an AB:CD extension.
pub fn predicates(ctx: &Context, uom: Option<&str>, fuzz: Option<usize>) -> Result<Outcome, CliError> {
    if uom.is_none() && fuzz.is_none() {
        return Err(CliError::Usage("predicates needs --uom, --fuzz or both".into()));
    }
    let ab_cd = PartySplit::ab_cd();
    let extendible = |set: &ProductVectorSet| -> Result<bool, CliError> {
        let g = group(set, &ab_cd)?;
        Ok(find_extension_with(&g, ctx.opts)?.0.is_some_and(|w| w.verify(&g)))
    };
    let mut v = Map::new();
    let mut text = String::new();
    let mut holds = true;
    if let Some(uom) = uom {
        let (_, set) = ctx.instance(uom, None)?;
        let fired = exclusion_predicates(&set)?;
        let bound = bound_check(&set);
        let consistent = fired.is_empty() || extendible(&set)?;
        holds &= consistent;
        let _ = writeln!(text, "{uom}: {} predicates fired; o-number sum {} (bound {})", fired.len(), bound.sum, bound.threshold);
        for f in &fired {
            let _ = writeln!(text, "  {} rows {:?}", f.id, f.rows);
        }
        v.insert("fired".into(), json!(fired));
        v.insert("oNumbers".into(), json!(o_numbers(&set).iter().map(|c| c.o_number).collect::<Vec<_>>()));
        v.insert("bound".into(), json!(bound));
        v.insert("consistent".into(), json!(consistent));
    }
    if let Some(n) = fuzz {
        let mut fired = 0;
        let mut violations = Vec::new();
        for (k, set) in fuzz_corpus(ctx.seed, n).iter().enumerate() {
            let hits = exclusion_predicates(set)?;
            if hits.is_empty() {
                continue;
            }
            fired += 1;
            if !extendible(set)? {
                violations.push(json!({ "index": k, "predicate": hits[0].id }));
            }
        }
        holds &= violations.is_empty();
        let _ = writeln!(text, "fuzz: {fired}/{n} sets fired, {} without an AB:CD witness", violations.len());
        v.insert("fuzz".into(), json!({ "size": n, "fired": fired, "violations": violations }));
    }
    Ok(Outcome::claim(&ctx.cert(uom, None, Value::Object(v)), text, holds))
}

/// `maxsum`: the closed form, optionally against exhaustive search.
pub fn maxsum(ctx: &Context, p: u32, n: u32, oracle: bool) -> Result<Outcome, CliError> {
    let m = max_sum(p, n)?;
    let mut v = json!({ "p": p, "n": n, "value": m.value, "extremal": m.extremal });
    let mut text = format!("maxsum({p}, {n}) = {} at {:?}\n", m.value, m.extremal);
    let mut holds = true;
    if oracle {
        let o = maxsum_oracle(p, n)?;
        holds = o == m.value;
        v["oracle"] = json!(o);
        v["match"] = json!(holds);
        let _ = writeln!(text, "exhaustive: {o}");
    }
    let mut cert = ctx.cert(None, None, v);
    cert.seed = None;
    Ok(Outcome::claim(&cert, text, holds))
}

fn coincidences(spec: &upb_core::uom::UomSpec) -> BTreeMap<String, usize> {
    coincidence_table(spec).into_iter().map(|((a, b), n)| (pair_key(a, b), n)).collect()
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::DistinguishedBy(f) => json!(f),
        Verdict::Undistinguished => Value::Null,
    }
}

/// `invariants`: independent-variable counts and coincidence tables, and
/// the features separating pairs of 4-column specs. With no UOM, all of
/// `F1`..`F6` and their fifteen pairs.
pub fn invariants(ctx: &Context, uom: Option<&str>, against: Option<&str>) -> Result<Outcome, CliError> {
    let specs = match uom {
        Some(u) => {
            let mut s = vec![ctx.catalog.lookup(u)?];
            if let Some(b) = against {
                s.push(ctx.catalog.lookup(b)?);
            }
            s
        }
        None if against.is_some() => return Err(CliError::Usage("--against needs --uom".into())),
        None => ctx.catalog.families()?,
    };
    let mut per = Map::new();
    let mut text = String::new();
    for s in &specs {
        let counts = independent_variable_counts(s);
        let _ = writeln!(text, "{}: counts {counts:?}", s.name);
        per.insert(s.name.clone(), json!({ "counts": counts, "coincidences": coincidences(s) }));
    }
    let mut pairs = Map::new();
    for i in 0..specs.len() {
        for j in i + 1..specs.len() {
            let (a, b) = (&specs[i], &specs[j]);
            if a.cols != 4 || b.cols != 4 {
                return Err(CliError::Usage(format!("{} and {} must both have four columns", a.name, b.name)));
            }
            let verdict = inequivalence_report(a, b);
            let features = distinguishing_features(a, b);
            let _ = writeln!(text, "{} vs {}: {features:?}", a.name, b.name);
            pairs.insert(
                format!("{} vs {}", a.name, b.name),
                json!({ "distinguishedBy": verdict_json(&verdict), "features": features }),
            );
        }
    }
    let mut cert = ctx.cert(uom, None, json!({ "specs": per, "pairs": pairs }));
    cert.seed = None;
    Ok(Outcome::ok(&cert, text))
}
