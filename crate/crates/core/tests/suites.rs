use isogeo::verify::{catalog_targets, run, Suite, VerifyOptions};

#[test]
fn full_catalog_passes_every_suite() {
    let opts = VerifyOptions { samples: 100, seed: 7, ..Default::default() };
    let rep = run(&catalog_targets(), &Suite::ALL, &opts);
    for c in &rep.checks {
        println!("{:<18} {:<60} n={:<4} skip={:<3} max={:e} tol={:e} {}", c.name, c.surface, c.points, c.skipped, c.max_residual, c.tolerance, c.pass);
    }
    assert!(rep.pass());
}
