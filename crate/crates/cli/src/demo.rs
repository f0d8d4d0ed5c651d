//! Standalone runs of the quantum subroutines.

use std::io::Write;

use qallpair::lssvm::{gram_from_points, solve_lssvm, KernelSpec};
use qallpair::qclassify::{bernoulli_frequency, interference_probability};
use qallpair::qtrain::{build_fhat, extract_solution, quantum_solve, Evolution, InversionConfig};
use qallpair::selection::{classical_argmax, durr_hoyer_max, quantum_mode, uniform_scores, ModeConfig, VoteList, MAX_MODE_CLASSES};
use qallpair::statevector::amplitude_encode;
use qallpair::{sub_seed, ResourceLedger};

use crate::args::Demo;
use crate::commands::ledger_line;
use crate::error::{usage, CliResult};

/// Largest `k` accepted by `demo grover-max` and `bench`.
pub const MAX_SEARCH_K: usize = 4096;
pub const MAX_TRIALS: usize = 100_000;

fn need_seed(seed: Option<u64>, what: &str) -> CliResult<u64> {
    seed.ok_or_else(|| usage(format!("{what} needs --seed (or QALLPAIR_SEED)")))
}

fn check_trials(trials: usize) -> CliResult<()> {
    if trials == 0 || trials > MAX_TRIALS {
        return Err(usage(format!("--trials must be in 1..={MAX_TRIALS}, got {trials}")));
    }
    Ok(())
}

pub fn demo_cmd(demo: &Demo, out: &mut dyn Write) -> CliResult<()> {
    match demo {
        Demo::GroverMax {
            k,
            trials,
            budget_multiplier,
            seed,
        } => grover_max(*k, *trials, *budget_multiplier, *seed, out),
        Demo::ModeFind {
            votes,
            eps,
            delta,
            trials,
            precision_qubits,
            seed,
        } => mode_find(votes, *eps, *delta, *trials, *precision_qubits, *seed, out),
        Demo::SwapTest {
            u,
            x,
            identical,
            shots,
            seed,
        } => swap_test(u, x, *identical, *shots, *seed, out),
        Demo::QpeSolve {
            gamma,
            precision_qubits,
            eps_kr,
            trotter_steps,
        } => qpe_solve(*gamma, *precision_qubits, *eps_kr, *trotter_steps, out),
    }
}

fn grover_max(k: usize, trials: usize, multiplier: f64, seed: Option<u64>, out: &mut dyn Write) -> CliResult<()> {
    if !(2..=MAX_SEARCH_K).contains(&k) {
        return Err(usage(format!("--k must be in 2..={MAX_SEARCH_K}, got {k}")));
    }
    check_trials(trials)?;
    if !(multiplier > 0.0 && multiplier.is_finite()) {
        return Err(usage(format!("--budget-multiplier must be positive, got {multiplier}")));
    }
    let seed = need_seed(seed, "demo grover-max")?;
    writeln!(out, "Dürr-Høyer max finding: k = {k}, {trials} trials, budget multiplier {multiplier}")?;
    let mut hits = 0;
    let mut total = ResourceLedger::new();
    for t in 0..trials {
        let trial_seed = sub_seed(seed, t as u64);
        let scores = uniform_scores(k, trial_seed);
        let best = classical_argmax(&scores);
        let run = durr_hoyer_max(&scores, sub_seed(trial_seed, 1), multiplier)?;
        let hit = run.index == best;
        hits += usize::from(hit);
        writeln!(
            out,
            "trial {t}: index {} (argmax {best}) {}, {} thresholds, {} grover iterations",
            run.index,
            if hit { "hit" } else { "miss" },
            run.thresholds.len(),
            run.ledger.grover_iterations
        )?;
        total += run.ledger;
    }
    writeln!(out, "success rate {:.4} ({hits}/{trials})", hits as f64 / trials as f64)?;
    writeln!(out, "ledger totals: {}", ledger_line(&total))?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn mode_find(
    votes: &[usize],
    eps: f64,
    delta: f64,
    trials: usize,
    precision: Option<usize>,
    seed: Option<u64>,
    out: &mut dyn Write,
) -> CliResult<()> {
    check_trials(trials)?;
    let k = votes.iter().copied().max().unwrap_or(0).max(2);
    if k > MAX_MODE_CLASSES {
        return Err(usage(format!("class ids must be at most {MAX_MODE_CLASSES}, got {k}")));
    }
    if votes.len() > 128 {
        return Err(usage(format!("at most 128 votes, got {}", votes.len())));
    }
    let list = VoteList::free(votes.to_vec(), k).map_err(|e| usage(e.to_string()))?;
    let cfg = ModeConfig {
        eps,
        delta,
        precision_qubits: precision,
        ..Default::default()
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let seed = need_seed(seed, "demo mode-find")?;
    let counts = list.counts();
    writeln!(
        out,
        "mode finding over {} votes (counts {:?}), eps {eps}, delta {delta}, {trials} trials",
        list.len(),
        counts
    )?;
    let mut returned = vec![0usize; k];
    let mut total = ResourceLedger::new();
    for t in 0..trials {
        let run = quantum_mode(&list, &cfg, sub_seed(seed, t as u64))?;
        returned[run.class - 1] += 1;
        writeln!(
            out,
            "trial {t}: class {} ({}), estimated frequency {:.4}",
            run.class,
            if list.is_mode(run.class) { "mode" } else { "not a mode" },
            run.estimate
        )?;
        total += run.ledger;
    }
    for (c, n) in returned.iter().enumerate().filter(|(_, n)| **n > 0) {
        writeln!(out, "class {}: returned {n}/{trials} ({:.4})", c + 1, *n as f64 / trials as f64)?;
    }
    let modes: usize = (1..=k).filter(|&c| list.is_mode(c)).map(|c| returned[c - 1]).sum();
    writeln!(out, "true-mode rate {:.4}", modes as f64 / trials as f64)?;
    writeln!(out, "ledger totals: {}", ledger_line(&total))?;
    Ok(())
}

fn swap_test(
    u: &[f64],
    x: &[f64],
    identical: bool,
    shots: Option<u64>,
    seed: Option<u64>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let x = if identical { u } else { x };
    if u.len() != x.len() {
        return Err(usage(format!("--u has {} entries but --x has {}", u.len(), x.len())));
    }
    if u.len() > 1 << 12 {
        return Err(usage("vectors are limited to 4096 entries"));
    }
    let su = amplitude_encode(u).map_err(|e| usage(format!("--u: {e}")))?;
    let sx = amplitude_encode(x).map_err(|e| usage(format!("--x: {e}")))?;
    let p = interference_probability(&su, &sx)?;
    let overlap = su.inner(&sx)?.re;
    writeln!(out, "swap test: {}-qubit states plus one ancilla", su.n_qubits())?;
    writeln!(out, "<u|x> = {overlap:.6}")?;
    writeln!(out, "P(ancilla = 1) = {:.6}", p.max(0.0))?;
    writeln!(out, "1/2 (1 - <u|x>) = {:.6}", (0.5 * (1.0 - overlap)).max(0.0))?;
    if let Some(n) = shots {
        if n == 0 {
            return Err(usage("--shots must be at least 1"));
        }
        let seed = need_seed(seed, "a sampled swap test")?;
        writeln!(out, "sampled over {n} shots: {:.6}", bernoulli_frequency(p, n, seed))?;
    }
    Ok(())
}

fn qpe_solve(
    gamma: f64,
    precision: usize,
    eps_kr: f64,
    trotter_steps: Option<usize>,
    out: &mut dyn Write,
) -> CliResult<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(usage(format!("--gamma must be positive, got {gamma}")));
    }
    let cfg = InversionConfig {
        precision_qubits: precision,
        eps_kr,
        evolution: trotter_steps.map_or(Evolution::Exact, |steps| Evolution::Trotter { steps }),
        ..Default::default()
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    // two orthonormal training points labelled +1 and -1
    let k = gram_from_points(&[&[1.0, 0.0], &[0.0, 1.0]], KernelSpec::Linear)?;
    let y = [1.0, -1.0];
    let fhat = build_fhat(&k, gamma)?;
    writeln!(out, "system: K = I2, gamma = {gamma}, y = (1, -1)")?;
    writeln!(out, "eigenvalues of F̂: {}", fmt_list(&fhat.eigenvalues()))?;
    let (b, alpha) = solve_lssvm(&k, &y, gamma)?;
    let mut classical = vec![b];
    classical.extend(&alpha);
    let norm = classical.iter().map(|v| v * v).sum::<f64>().sqrt();
    let direction: Vec<f64> = classical.iter().map(|v| v / norm).collect();
    writeln!(out, "classical (b, alpha) = {}", fmt_list(&classical))?;
    let sol = quantum_solve(&fhat, &y, &cfg)?;
    let amps: Vec<f64> = sol.state.amplitudes()[..3].iter().map(|a| a.re).collect();
    let fidelity = amps.iter().zip(&direction).map(|(a, d)| a * d).sum::<f64>().powi(2);
    let (qb, qalpha, gauge) = extract_solution(&fhat, &y, &sol.state)?;
    let mut quantum = vec![qb];
    quantum.extend(&qalpha);
    writeln!(out, "solution register amplitudes = {}", fmt_list(&amps))?;
    writeln!(out, "fidelity with classical direction = {fidelity:.6}")?;
    writeln!(out, "post-selection success probability = {:.6}", sol.success_probability)?;
    writeln!(out, "extracted (b, alpha) = {} (|sum alpha| / |alpha| = {gauge:.2e})", fmt_list(&quantum))?;
    writeln!(out, "ledger: {}", ledger_line(&sol.ledger))?;
    Ok(())
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{:.6}", if *x == 0.0 { 0.0 } else { *x })).collect();
    format!("({})", items.join(", "))
}
