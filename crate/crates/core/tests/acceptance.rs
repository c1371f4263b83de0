//! One line per acceptance criterion; exits non-zero if any fails.

use rayon::prelude::*;
use toda_core::suites::{run_suite, SuiteOptions, SUITES};

const TITLES: [&str; 8] = [
    "monodromy structure",
    "classical identities",
    "dynamics",
    "Weierstrass and PDE residuals",
    "characters",
    "quantum spectrum and identities",
    "quasi-classical limit",
    "exact polynomial identities",
];

fn main() {
    let opts = SuiteOptions { seed: 7, ..Default::default() };
    let reports: Vec<_> = SUITES.par_iter().map(|s| run_suite(s, &opts)).collect();
    let mut failed = 0;
    for (i, (name, rep)) in SUITES.iter().zip(reports).enumerate() {
        let (ok, detail) = match rep {
            Ok(r) if r.pass() => (true, format!("{} rows", r.rows.len())),
            Ok(r) => {
                let bad: Vec<String> = r
                    .failures()
                    .into_iter()
                    .map(|row| format!("{} [{}] residual {:e}", row.identity, row.inputs, row.residual))
                    .collect();
                (false, bad.join("; "))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("{} criterion {}: {} ({name}): {detail}", if ok { "PASS" } else { "FAIL" }, i + 1, TITLES[i]);
    }
    println!("{} of {} criteria passed", SUITES.len() - failed, SUITES.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
