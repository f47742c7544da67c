//! Hard instances where no column subset does well, verified by checking
//! every subset.

use subsel::lowerbounds::{build_frobenius_hard, build_spectral_hard, verify_lower_bound};

fn main() -> subsel::Result<()> {
    let spectral = build_spectral_hard(2, 8, 1e-3)?;
    let frobenius = build_frobenius_hard(2, 8, 1e-3)?;
    for inst in [&spectral, &frobenius] {
        println!("{} family, n = 2, m = 8", inst.family.name());
        for k in 2..=8 {
            let r = verify_lower_bound(inst, k)?;
            let note = if r.vacuous { " (vacuous)" } else { "" };
            println!(
                "  k = {k}: best ratio {:>8.4}, lower bound {:>8.4}, violations {}{note}",
                r.min_ratio(),
                r.gamma.max(0.0),
                r.violations
            );
        }
    }
    Ok(())
}
