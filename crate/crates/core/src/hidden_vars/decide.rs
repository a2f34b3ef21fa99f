use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::born::{outcome_possibility, PsiKernel};
use crate::dense::RootTable;
use crate::error::{Error, Result};
use crate::phase_space::{enumerate_contexts, table1_contexts, Context, PhasePoint, Table1Kind};
use crate::states::{strip_quadratic, strongness, swap_qudits, PhaseFunctionState, StrongnessReport};
use crate::zmod::{Modulus, ZdPoly};

use super::{enumerate_linear_hv, prescribed_outcome, HiddenVariable};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Proof choices, then the family contexts, then everything else.
    #[default]
    Table1First,
    /// All contexts in enumeration order.
    FullScan,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1_first" | "table1-first" => Ok(Strategy::Table1First),
            "full_scan" | "full-scan" => Ok(Strategy::FullScan),
            other => Err(Error::Unsupported(format!("unknown strategy {other:?}"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Table1First => "table1_first",
            Strategy::FullScan => "full_scan",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    pub strategy: Strategy,
    /// Strip the quadratic part and order the qudits so that the `j^2 k`
    /// coefficient is nonzero before searching. Both are Clifford moves.
    pub normalize: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { strategy: Strategy::Table1First, normalize: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    StronglyContextual,
    NotStronglyContextual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefutationStage {
    ProofChoice,
    Table1Scan,
    FullScan,
}

/// One hidden variable together with a context on which it predicts an
/// impossible joint outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub lambda: Vec<u32>,
    pub context: String,
    pub generators: Vec<Vec<u32>>,
    pub outcome: Vec<u32>,
    pub stage: RefutationStage,
    /// Kets at which the master polynomial was confirmed to permute Z_d.
    pub kets_confirmed: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRow {
    pub context: String,
    pub outcome: Vec<u32>,
    pub possible: bool,
    pub probability: f64,
}

/// A hidden variable with no impossible prediction, and its predictions on
/// every context.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub lambda: Vec<u32>,
    pub consistent: bool,
    pub table: Vec<WitnessRow>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScanStats {
    pub lambdas_refuted: usize,
    pub by_proof_choice: usize,
    pub by_table1_scan: usize,
    pub by_full_scan: usize,
    pub table1_contexts: usize,
    pub contexts_available: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub schema: String,
    pub modulus: u32,
    pub n: usize,
    pub input_phi: String,
    /// The state the refutations and witness refer to.
    pub certified_phi: String,
    pub reductions: Vec<String>,
    pub strongness: Option<StrongnessReport>,
    pub proof_hypotheses_hold: bool,
    pub strategy: Strategy,
    pub verdict: Verdict,
    pub refutations: Vec<Refutation>,
    pub witness: Option<Witness>,
    pub stats: ScanStats,
}

impl Certificate {
    pub fn is_strongly_contextual(&self) -> bool {
        self.verdict == Verdict::StronglyContextual
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Unsupported(e.to_string()))
    }

    pub fn certified_state(&self) -> Result<PhaseFunctionState> {
        PhaseFunctionState::parse(&self.certified_phi, Modulus::new(u64::from(self.modulus))?, self.n)
    }

    /// Re-checks every refutation through the projector expansion, which
    /// shares no code with the search. Returns the number of refutations
    /// that failed to check.
    pub fn recheck(&self) -> Result<usize> {
        let state = self.certified_state()?;
        let m = state.modulus();
        let mut bad = 0;
        for r in &self.refutations {
            let gens = r
                .generators
                .iter()
                .map(|g| PhasePoint::new(m, &g.iter().map(|&c| i64::from(c)).collect::<Vec<_>>()))
                .collect::<Result<Vec<_>>>()?;
            let ctx = Context::new(gens, r.context.clone())?;
            let hv = HiddenVariable::new(m, r.lambda.clone())?;
            let predicted = prescribed_outcome(&hv, &ctx)?;
            if predicted.values != r.outcome || outcome_possibility(&state, &ctx, &predicted)?.possible {
                bad += 1;
            }
        }
        Ok(bad)
    }
}

const UNKNOWN: u8 = 0;
const POSSIBLE: u8 = 1;
const IMPOSSIBLE: u8 = 2;

struct Engine<'a> {
    state: &'a PhaseFunctionState,
    m: Modulus,
    contexts: Vec<Context>,
    table1_len: usize,
    kernels: Vec<OnceLock<PsiKernel>>,
    /// verdict per (context, outcome on the basis)
    cache: Vec<AtomicU8>,
    /// `(phi1, phi2)` when the proof's context choices apply
    proof: Option<(u32, u32)>,
}

impl<'a> Engine<'a> {
    fn new(state: &'a PhaseFunctionState, strategy: Strategy) -> Result<Self> {
        let m = state.modulus();
        let all = enumerate_contexts(m, 2)?;
        let (contexts, table1_len) = match strategy {
            Strategy::FullScan => (all, 0),
            Strategy::Table1First => {
                let mut list: Vec<Context> = table1_contexts(m).into_iter().map(|(_, c)| c).collect();
                let t1 = list.len();
                let seen: HashSet<Context> = list.iter().cloned().collect();
                list.extend(all.into_iter().filter(|c| !seen.contains(c)));
                (list, t1)
            }
        };
        let proof = match strategy {
            Strategy::Table1First => proof_parameters(state.phi()),
            Strategy::FullScan => None,
        };
        let d2 = m.usize() * m.usize();
        Ok(Engine {
            state,
            m,
            kernels: (0..contexts.len()).map(|_| OnceLock::new()).collect(),
            cache: (0..contexts.len() * d2).map(|_| AtomicU8::new(UNKNOWN)).collect(),
            contexts,
            table1_len,
            proof,
        })
    }

    fn outcome(&self, ci: usize, hv: &HiddenVariable) -> (u32, u32) {
        let b = self.contexts[ci].basis();
        (b[0].dot(&hv.lam), b[1].dot(&hv.lam))
    }

    fn impossible(&self, ci: usize, a: u32, b: u32) -> bool {
        let d = self.m.usize();
        let slot = &self.cache[ci * d * d + a as usize * d + b as usize];
        match slot.load(Ordering::Relaxed) {
            POSSIBLE => false,
            IMPOSSIBLE => true,
            _ => {
                let kernel = self.kernels[ci].get_or_init(|| {
                    PsiKernel::for_context(self.state, &self.contexts[ci]).expect("contexts are two-qudit and isotropic")
                });
                let r = kernel.is_impossible(a, b);
                slot.store(if r { IMPOSSIBLE } else { POSSIBLE }, Ordering::Relaxed);
                r
            }
        }
    }

    fn refutation(&self, ci: usize, hv: &HiddenVariable, stage: RefutationStage) -> Refutation {
        let ctx = &self.contexts[ci];
        let (a, b) = self.outcome(ci, hv);
        Refutation {
            lambda: hv.lam.clone(),
            context: ctx.label().to_string(),
            generators: ctx.basis().iter().map(|g| g.coords().to_vec()).collect(),
            outcome: vec![a, b],
            stage,
            kets_confirmed: self.m.get() * self.m.get(),
        }
    }

    fn proof_choice_indices(&self, hv: &HiddenVariable) -> Vec<usize> {
        let Some((phi1, phi2)) = self.proof else { return Vec::new() };
        let m = self.m;
        let d = m.usize();
        [
            proof_choice_i(m, hv, phi2),
            proof_choice_ii(m, hv, phi1),
            proof_choice_iii(m, hv, phi1, phi2),
        ]
        .into_iter()
        .map(|kind| match kind {
            Table1Kind::I { alpha } => alpha as usize,
            Table1Kind::II { alpha } => d + alpha as usize,
            Table1Kind::III { alpha, beta } => 2 * d + alpha as usize * (d - 1) + beta as usize - 1,
        })
        .collect()
    }

    fn refute(&self, hv: &HiddenVariable) -> Option<Refutation> {
        for ci in self.proof_choice_indices(hv) {
            let (a, b) = self.outcome(ci, hv);
            if self.impossible(ci, a, b) {
                return Some(self.refutation(ci, hv, RefutationStage::ProofChoice));
            }
        }
        for ci in 0..self.contexts.len() {
            let (a, b) = self.outcome(ci, hv);
            if self.impossible(ci, a, b) {
                let stage = if ci < self.table1_len { RefutationStage::Table1Scan } else { RefutationStage::FullScan };
                return Some(self.refutation(ci, hv, stage));
            }
        }
        None
    }
}

/// `(phi1, phi2)` when `phi = phi1 j^2 k + phi2 j k^2` exactly, `phi1 != 0`
/// and `d != 1 mod 3`.
fn proof_parameters(phi: &ZdPoly) -> Option<(u32, u32)> {
    let m = phi.modulus();
    let phi = phi.reduce_fermat();
    let (phi1, phi2) = (phi.coeff(&[2, 1]), phi.coeff(&[1, 2]));
    let pure = phi.terms().all(|(e, _)| e.as_slice() == [2, 1] || e.as_slice() == [1, 2]);
    (pure && phi1 != 0 && m.get() % 3 != 1).then_some((phi1, phi2))
}

/// Family I with `alpha = 2 lam2 phi2` (display labels).
pub(crate) fn proof_choice_i(m: Modulus, hv: &HiddenVariable, phi2: u32) -> Table1Kind {
    let l = hv.display_labels();
    Table1Kind::I { alpha: m.mul(2, m.mul(l[1], phi2)) }
}

/// Family II with `alpha = 2 lam4 phi1`.
pub(crate) fn proof_choice_ii(m: Modulus, hv: &HiddenVariable, phi1: u32) -> Table1Kind {
    let l = hv.display_labels();
    Table1Kind::II { alpha: m.mul(2, m.mul(l[3], phi1)) }
}

/// Family III with the two-branch choice of `(alpha, beta)`; needs `phi1 != 0`.
pub(crate) fn proof_choice_iii(m: Modulus, hv: &HiddenVariable, phi1: u32, phi2: u32) -> Table1Kind {
    let l = hv.display_labels();
    let (l2, l4) = (l[1], l[3]);
    let phi1_inv = m.inv(phi1).expect("phi1 != 0");
    if phi2 == m.neg(1) {
        let alpha = m.mul(6 % m.get(), m.sub(m.mul(l2, phi1), l4));
        Table1Kind::III { alpha, beta: phi1_inv }
    } else {
        let s = m.add(phi2, 1);
        let s_inv = m.inv(s).expect("phi2 != -1");
        let inner = m.add(m.mul(m.mul(l2, phi1), m.add(phi2, 2)), m.mul(l4, m.sub(m.mul(phi2, phi2), 1)));
        let alpha = m.mul(2, m.mul(s_inv, inner));
        Table1Kind::III { alpha, beta: m.mul(phi1_inv, s) }
    }
}

fn normalized(state: &PhaseFunctionState) -> Result<(PhaseFunctionState, Vec<String>)> {
    let mut reductions = Vec::new();
    let reduced = state.phi().reduce_fermat();
    let quadratic = reduced.filter_degree(|deg| deg <= 2);
    let mut out = strip_quadratic(state);
    if !quadratic.is_zero() {
        reductions.push(format!("strip_quadratic: removed {quadratic}"));
    }
    let phi = out.phi();
    if phi.coeff(&[2, 1]) == 0 && phi.coeff(&[1, 2]) != 0 {
        out = swap_qudits(&out)?;
        reductions.push("swap_qudits".to_string());
    }
    Ok((out, reductions))
}

fn witness(state: &PhaseFunctionState, hv: &HiddenVariable) -> Result<Witness> {
    let roots = RootTable::<f64>::new(state.modulus());
    let mut table = Vec::new();
    for ctx in enumerate_contexts(state.modulus(), state.n())? {
        let outcome = prescribed_outcome(hv, &ctx)?;
        let exact = outcome_possibility(state, &ctx, &outcome)?;
        table.push(WitnessRow {
            context: ctx.label().to_string(),
            outcome: outcome.values,
            possible: exact.possible,
            probability: exact.probability(&roots),
        });
    }
    Ok(Witness { lambda: hv.lam.clone(), consistent: table.iter().all(|r| r.possible), table })
}

const CHUNK: usize = 256;

/// Decides whether the two-qudit phase-function state admits a linear hidden
/// variable that never predicts an impossible joint outcome.
///
/// Possibility is decided exactly (permutation-polynomial counting); the
/// certificate lists one refutation per hidden variable, or the first
/// consistent hidden variable with its full consistency table.
pub fn decide_strong_contextuality(state: &PhaseFunctionState, options: DecideOptions) -> Result<Certificate> {
    if state.n() != 2 {
        return Err(Error::Unsupported(format!("strong-contextuality search needs n = 2, got n = {}", state.n())));
    }
    let m = state.modulus();
    let report = strongness(state).ok();
    let (certified, reductions) = if options.normalize {
        normalized(state)?
    } else {
        (state.clone(), Vec::new())
    };
    let engine = Engine::new(&certified, options.strategy)?;
    let hvs = enumerate_linear_hv(m, 2);
    let mut refutations = Vec::with_capacity(hvs.len());
    let mut witness_hv = None;
    for chunk in hvs.chunks(CHUNK) {
        let results: Vec<Option<Refutation>> = chunk.par_iter().map(|hv| engine.refute(hv)).collect();
        if let Some(pos) = results.iter().position(Option::is_none) {
            witness_hv = Some(chunk[pos].clone());
            break;
        }
        refutations.extend(results.into_iter().flatten());
    }
    let mut stats = ScanStats {
        table1_contexts: engine.table1_len,
        contexts_available: engine.contexts.len(),
        ..ScanStats::default()
    };
    let (verdict, refutations, witness) = match witness_hv {
        Some(hv) => (Verdict::NotStronglyContextual, Vec::new(), Some(witness(&certified, &hv)?)),
        None => {
            stats.lambdas_refuted = refutations.len();
            for r in &refutations {
                match r.stage {
                    RefutationStage::ProofChoice => stats.by_proof_choice += 1,
                    RefutationStage::Table1Scan => stats.by_table1_scan += 1,
                    RefutationStage::FullScan => stats.by_full_scan += 1,
                }
            }
            (Verdict::StronglyContextual, refutations, None)
        }
    };
    let proof_hypotheses_hold = report.as_ref().is_some_and(|r| r.is_strong) && m.get() % 3 != 1;
    Ok(Certificate {
        schema: "1".to_string(),
        modulus: m.get(),
        n: 2,
        input_phi: state.describe(),
        certified_phi: certified.describe(),
        reductions,
        strongness: report,
        proof_hypotheses_hold,
        strategy: options.strategy,
        verdict,
        refutations,
        witness,
        stats,
    })
}
