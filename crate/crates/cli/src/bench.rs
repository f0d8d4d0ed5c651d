//! `bench`: max-finding query counts against the number of classes.

use std::fs;
use std::io::Write;

use qallpair::selection::{bench_csv, bench_exponent, max_finding_bench};

use crate::args::BenchArgs;
use crate::demo::{MAX_SEARCH_K, MAX_TRIALS};
use crate::error::{usage, CliError, CliResult};

/// Parses `4,8,16` or the doubling range `4..64`.
pub fn parse_ks(spec: &str) -> CliResult<Vec<usize>> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("--k: {s:?} is not a class count")))
    };
    let ks = if let Some((lo, hi)) = spec.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo < 2 || hi < lo {
            return Err(usage(format!("--k: range {spec:?} must satisfy 2 <= start <= end")));
        }
        std::iter::successors(Some(lo), |&k| k.checked_mul(2))
            .take_while(|&k| k <= hi)
            .collect()
    } else {
        spec.split(',').map(num).collect::<CliResult<Vec<_>>>()?
    };
    if let Some(&bad) = ks.iter().find(|&&k| !(2..=MAX_SEARCH_K).contains(&k)) {
        return Err(usage(format!("--k values must be in 2..={MAX_SEARCH_K}, got {bad}")));
    }
    Ok(ks)
}

pub fn bench_cmd(args: &BenchArgs, out: &mut dyn Write) -> CliResult<()> {
    let ks = parse_ks(&args.k)?;
    if args.trials == 0 || args.trials > MAX_TRIALS {
        return Err(usage(format!("--trials must be in 1..={MAX_TRIALS}, got {}", args.trials)));
    }
    if !(args.budget_multiplier > 0.0 && args.budget_multiplier.is_finite()) {
        return Err(usage(format!(
            "--budget-multiplier must be positive, got {}",
            args.budget_multiplier
        )));
    }
    let seed = args
        .seed
        .ok_or_else(|| usage("bench needs --seed (or QALLPAIR_SEED)"))?;
    let rows = max_finding_bench(&ks, args.trials, seed, args.budget_multiplier)?;
    let csv = bench_csv(&rows);
    match &args.out {
        Some(path) => {
            fs::write(path, &csv).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
            writeln!(out, "wrote {} rows to {}", rows.len(), path.display())?;
        }
        None => out.write_all(csv.as_bytes())?,
    }
    match bench_exponent(&rows) {
        Some(e) => writeln!(out, "fitted exponent {e:.3}")?,
        None => writeln!(out, "fitted exponent: none (needs at least two k values)")?,
    }
    Ok(())
}
