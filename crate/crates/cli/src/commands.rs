use std::fmt::Write as _;

use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use strongctx::dense::{apply_projector, norm_sqr, phase_state_vector, RootTable};
use strongctx::{
    build_empirical_model, contextual_fraction, decide_strong_contextuality, dickson_classify, enumerate_contexts,
    impossibility_by_psi, is_permutation_polynomial, outcome_possibility, table1_contexts, Certificate, Context,
    DecideOptions, JointOutcome, Modulus, PhaseFunctionState, Strategy, Verdict, ZdPoly,
};

use crate::config::{CommonArgs, ContextSet, Format, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_STRONG: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;

fn json_text<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn summarize(cert: &Certificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "d          {}", cert.modulus);
    let _ = writeln!(s, "input      {}", cert.input_phi);
    let _ = writeln!(s, "certified  {}", cert.certified_phi);
    for r in &cert.reductions {
        let _ = writeln!(s, "reduction  {r}");
    }
    let verdict = match cert.verdict {
        Verdict::StronglyContextual => "strongly_contextual",
        Verdict::NotStronglyContextual => "not_strongly_contextual",
    };
    let _ = writeln!(s, "verdict    {verdict}");
    match &cert.witness {
        None => {
            let st = &cert.stats;
            let _ = writeln!(
                s,
                "refuted    {} hidden variables (proof choice {}, family scan {}, full scan {})",
                st.lambdas_refuted, st.by_proof_choice, st.by_table1_scan, st.by_full_scan
            );
        }
        Some(w) => {
            let lam: Vec<String> = w.lambda.iter().map(u32::to_string).collect();
            let _ = writeln!(
                s,
                "witness    lambda = ({}), consistent on {} contexts",
                lam.join(","),
                w.table.iter().filter(|r| r.possible).count()
            );
        }
    }
    s
}

pub fn analyze(common: &CommonArgs, d: u64, phi: &str, strategy: Strategy, normalize: bool) -> Result<u8> {
    let cfg = RunConfig::new(common, d, 2, Format::Json)?.with_phi(phi).with_strategy(strategy);
    cfg.require_format(&[Format::Json, Format::Text])?;
    let state = cfg.state()?;
    let cert = decide_strong_contextuality(&state, DecideOptions { strategy: cfg.strategy, normalize })?;
    let body = match cfg.format {
        Format::Json => cert.to_json()?,
        _ => summarize(&cert),
    };
    cfg.emit(&body)?;
    Ok(if cert.is_strongly_contextual() { EXIT_OK } else { EXIT_NOT_STRONG })
}

#[derive(Serialize)]
struct TheoremRow {
    phi1: u32,
    phi2: u32,
    quadratic: String,
    phi: String,
    verdict: Verdict,
    matches_base: bool,
    refuted_by_full_scan: usize,
}

/// A random polynomial of degree <= 2 in j, k.
pub fn random_quadratic(m: Modulus, rng: &mut impl Rng) -> ZdPoly {
    let exps = [[2, 0], [1, 1], [0, 2], [1, 0], [0, 1], [0, 0]];
    let terms = exps.iter().map(|e| (e.to_vec(), i64::from(rng.gen_range(0..m.get()))));
    ZdPoly::from_terms(m, 2, terms).expect("two variables")
}

pub fn verify_theorem1(
    common: &CommonArgs,
    d: u64,
    include_quadratics: bool,
    samples: usize,
    strategy: Strategy,
) -> Result<u8> {
    let cfg = RunConfig::new(common, d, 2, Format::Text)?.with_strategy(strategy);
    let m = cfg.modulus;
    if m.get() % 3 == 1 {
        bail!("the family argument needs d != 1 (mod 3), got d = {d}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    for phi1 in m.elements() {
        for phi2 in m.elements() {
            if phi1 == 0 && phi2 == 0 {
                continue;
            }
            let base = PhaseFunctionState::cubic(m, phi1, phi2);
            let opts = DecideOptions { strategy: cfg.strategy, normalize: true };
            let cert = decide_strong_contextuality(&base, opts)?;
            rows.push(TheoremRow {
                phi1,
                phi2,
                quadratic: "0".into(),
                phi: base.describe(),
                verdict: cert.verdict,
                matches_base: true,
                refuted_by_full_scan: cert.stats.by_full_scan,
            });
            if !include_quadratics {
                continue;
            }
            for _ in 0..samples {
                let q = random_quadratic(m, &mut rng);
                let state = PhaseFunctionState::new(base.phi() + &q);
                // searched as given: the quadratic part is not stripped
                let c = decide_strong_contextuality(&state, DecideOptions { strategy: cfg.strategy, normalize: false })?;
                rows.push(TheoremRow {
                    phi1,
                    phi2,
                    quadratic: q.to_string(),
                    phi: state.describe(),
                    verdict: c.verdict,
                    matches_base: c.verdict == cert.verdict,
                    refuted_by_full_scan: c.stats.by_full_scan,
                });
            }
        }
    }
    let strong = rows.iter().filter(|r| r.verdict == Verdict::StronglyContextual).count();
    let failed = rows.iter().any(|r| r.verdict != Verdict::StronglyContextual || !r.matches_base);
    let body = match cfg.format {
        Format::Json => json_text(&json!({
            "schema": "1",
            "modulus": m.get(),
            "include_quadratics": include_quadratics,
            "samples": if include_quadratics { samples } else { 0 },
            "seed": cfg.seed,
            "strategy": cfg.strategy,
            "strongly_contextual": strong,
            "total": rows.len(),
            "states": rows,
        }))?,
        Format::Csv => {
            let mut s = String::from("phi1,phi2,quadratic,verdict,matches_base\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},\"{}\",{:?},{}", r.phi1, r.phi2, r.quadratic, r.verdict, r.matches_base);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in rows.iter().filter(|r| r.verdict != Verdict::StronglyContextual || !r.matches_base) {
                let _ = writeln!(s, "FAILED  {}  ({:?})", r.phi, r.verdict);
            }
            let _ = writeln!(s, "d = {}: {strong}/{} strongly contextual", m.get(), rows.len());
            s
        }
    };
    cfg.emit(&body)?;
    Ok(if failed { EXIT_VERIFY_FAILED } else { EXIT_OK })
}

fn context_list(m: Modulus, n: usize, set: ContextSet) -> Result<Vec<Context>> {
    Ok(match set {
        ContextSet::All => enumerate_contexts(m, n)?,
        ContextSet::Table1 => {
            if n != 2 {
                bail!("the family contexts are defined for two qudits");
            }
            table1_contexts(m).into_iter().map(|(_, c)| c).collect()
        }
    })
}

pub fn model(common: &CommonArgs, d: u64, phi: &str, n: usize, set: ContextSet) -> Result<u8> {
    let cfg = RunConfig::new(common, d, n, Format::Csv)?.with_phi(phi);
    let state = cfg.state()?;
    let contexts = context_list(cfg.modulus, n, set)?;
    let model = build_empirical_model::<f64>(&state, &contexts)?;
    let body = match cfg.format {
        Format::Csv => model.to_csv(),
        Format::Json => model.to_json()?,
        Format::Text => format!(
            "{} contexts, {} rows, {} impossible outcomes, max signalling {:.3e}",
            model.contexts().len(),
            model.rows().len(),
            model.impossible_count(),
            model.max_signalling_discrepancy()
        ),
    };
    cfg.emit(&body)?;
    Ok(EXIT_OK)
}

pub fn contexts(common: &CommonArgs, d: u64, n: usize, count: bool, table1: bool) -> Result<u8> {
    let cfg = RunConfig::new(common, d, n, Format::Text)?;
    let set = if table1 { ContextSet::Table1 } else { ContextSet::All };
    let list = context_list(cfg.modulus, n, set)?;
    let body = match (count, cfg.format) {
        (true, Format::Json) => json_text(&json!({ "schema": "1", "modulus": cfg.modulus.get(), "n": n, "count": list.len() }))?,
        (true, _) => list.len().to_string(),
        (false, Format::Json) => {
            let records: Vec<_> = list.iter().map(Context::record).collect();
            json_text(&json!({ "schema": "1", "modulus": cfg.modulus.get(), "n": n, "contexts": records }))?
        }
        (false, Format::Csv) => {
            let mut s = String::from("label,basis\n");
            for c in &list {
                let basis: Vec<String> = c.basis().iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "\"{}\",\"{}\"", c.label(), basis.join(" "));
            }
            s
        }
        (false, Format::Text) => {
            let mut s = String::new();
            for c in &list {
                let basis: Vec<String> = c.basis().iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "{:<28} {}", c.label(), basis.join(" "));
            }
            s
        }
    };
    cfg.emit(&body)?;
    Ok(EXIT_OK)
}

pub fn cf(common: &CommonArgs, d: u64, phi: &str, n: usize, set: ContextSet) -> Result<u8> {
    let cfg = RunConfig::new(common, d, n, Format::Text)?.with_phi(phi);
    cfg.require_format(&[Format::Json, Format::Text])?;
    let state = cfg.state()?;
    let model = build_empirical_model::<f64>(&state, &context_list(cfg.modulus, n, set)?)?;
    let r = contextual_fraction(&model)?;
    let body = match cfg.format {
        Format::Json => {
            let weights: Vec<_> = r.weights.iter().map(|(lam, w)| json!({ "lambda": lam, "weight": w })).collect();
            json_text(&json!({
                "schema": "1",
                "modulus": cfg.modulus.get(),
                "n": n,
                "phi": state.describe(),
                "contexts": model.contexts().len(),
                "cf": r.cf,
                "lp_variables": r.lp_variables,
                "lp_constraints": r.lp_constraints,
                "weights": weights,
            }))?
        }
        _ => format!("{:.6}", r.cf),
    };
    cfg.emit(&body)?;
    Ok(EXIT_OK)
}

pub fn dickson(common: &CommonArgs, d: u64, poly: &str) -> Result<u8> {
    let cfg = RunConfig::new(common, d, 1, Format::Text)?;
    cfg.require_format(&[Format::Json, Format::Text])?;
    let p = ZdPoly::parse_auto(poly, cfg.modulus, 1)?;
    let c = dickson_classify(&p)?;
    let exhaustive = is_permutation_polynomial(&p);
    if exhaustive != c.is_permutation {
        bail!("classification disagrees with exhaustive evaluation for {p}");
    }
    let normal = c.normal_form.map(|nf| nf.to_poly(cfg.modulus).to_text(&["x"]));
    let body = match cfg.format {
        Format::Json => json_text(&json!({
            "schema": "1",
            "modulus": cfg.modulus.get(),
            "poly": p.to_text(&["x"]),
            "is_permutation": c.is_permutation,
            "normal_form": c.normal_form,
            "normal_form_text": normal,
        }))?,
        _ => match (&c.normal_form, normal) {
            (Some(nf), Some(text)) => format!(
                "permutation\nnormal form  {} * g(x + {}) + {} with g(x) = {}\nexpanded     {}",
                nf.a,
                nf.b,
                nf.c,
                match nf.g {
                    strongctx::DicksonShape::Linear => "x",
                    strongctx::DicksonShape::Cubic => "x^3",
                },
                text
            ),
            _ => "not a permutation".to_string(),
        },
    };
    cfg.emit(&body)?;
    Ok(EXIT_OK)
}

#[derive(Default, Serialize)]
struct SelftestTally {
    modulus: u32,
    samples: usize,
    impossible: usize,
    psi_disagreements: usize,
    dense_disagreements: usize,
}

pub fn selftest(common: &CommonArgs, samples: usize) -> Result<u8> {
    let cfg = RunConfig::new(common, 3, 2, Format::Text)?;
    cfg.require_format(&[Format::Json, Format::Text])?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut tallies = Vec::new();
    for d in [3u64, 5] {
        let m = Modulus::new(d)?;
        let contexts = enumerate_contexts(m, 2)?;
        let roots = RootTable::<f64>::new(m);
        let mut t = SelftestTally { modulus: m.get(), samples, ..Default::default() };
        for _ in 0..samples {
            let cubic = ZdPoly::from_terms(
                m,
                2,
                [[2, 1], [1, 2]].iter().map(|e| (e.to_vec(), i64::from(rng.gen_range(0..m.get())))),
            )?;
            let state = PhaseFunctionState::new(&cubic + &random_quadratic(m, &mut rng));
            let ctx = &contexts[rng.gen_range(0..contexts.len())];
            let outcome = JointOutcome::new(vec![rng.gen_range(0..m.get()), rng.gen_range(0..m.get())]);
            let exact_impossible = !outcome_possibility(&state, ctx, &outcome)?.possible;
            let psi = impossibility_by_psi(&state, ctx, &outcome)?;
            let dense = norm_sqr(&apply_projector(ctx, &outcome.values, &phase_state_vector(state.phi()), &roots));
            t.impossible += usize::from(exact_impossible);
            t.psi_disagreements += usize::from(psi != exact_impossible);
            t.dense_disagreements += usize::from((dense < 1e-9) != exact_impossible);
        }
        tallies.push(t);
    }
    let failed = tallies.iter().any(|t| t.psi_disagreements + t.dense_disagreements > 0);
    let body = match cfg.format {
        Format::Json => json_text(&json!({ "schema": "1", "seed": cfg.seed, "results": tallies }))?,
        _ => {
            let mut s = String::new();
            for t in &tallies {
                let _ = writeln!(
                    s,
                    "d = {}: {} triples, {} impossible, {} psi disagreements, {} dense disagreements",
                    t.modulus, t.samples, t.impossible, t.psi_disagreements, t.dense_disagreements
                );
            }
            s
        }
    };
    cfg.emit(&body)?;
    Ok(if failed { EXIT_VERIFY_FAILED } else { EXIT_OK })
}
