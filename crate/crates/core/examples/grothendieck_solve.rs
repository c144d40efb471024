//! Build the decomposition matrix and invert it on each Serre weight.

use std::time::Instant;

use bmweights::groth_solver::{build_decomp_matrix, solve_all, verify_orthogonality};
use bmweights::FieldDatum;

fn main() -> bmweights::Result<()> {
    let fd = FieldDatum::new(3, 2, 1)?;
    let start = Instant::now();
    let m = build_decomp_matrix(&fd)?;
    println!("{fd}: {} weights x {} types, rank {}, kernel rank {}", m.rows().len(), m.cols().len(), m.rank(), m.kernel().rank());

    let sols = solve_all(&m)?;
    assert!(verify_orthogonality(&m, &sols)?);
    println!("solved and checked in {:?}", start.elapsed());

    let (w, sol) = sols.iter().next().expect("at least one weight");
    println!("n(-, {w}):");
    for (tau, k) in sol.terms() {
        println!("    {k:>3} * {tau}");
    }

    // Any kernel perturbation is an equally good solution.
    let other = sol.perturbed(&vec![1; m.kernel().rank()]);
    assert!(other.differs_by_kernel(sol));
    assert_eq!(other.canonical().dense(), sol.dense());
    Ok(())
}
