//! Cycle identities: Z(sigma) is a unit, Z(tau) = sum of Z(sigma).

use bmweights::cycles::{bm_cycle, x_special_fibre_cycle, x_ss_steinberg_cycle, z_identity_sides, z_of_type};
use bmweights::groth_solver::{build_decomp_matrix, solve_all};
use bmweights::tame_types::enumerate_tame_types;
use bmweights::FieldDatum;

fn main() -> bmweights::Result<()> {
    let fd = FieldDatum::new(5, 1, 1)?;
    let m = build_decomp_matrix(&fd)?;
    let sols = solve_all(&m)?;

    for (w, sol) in sols.iter().take(3) {
        println!("Z({w}) = {}", bm_cycle(w, sol)?);
    }

    for tau in enumerate_tame_types(&fd).iter().step_by(5) {
        let (lhs, rhs) = z_identity_sides(tau, &sols)?;
        assert_eq!(lhs, rhs);
        println!("{tau:<8} {}", z_of_type(tau)?);
        assert_eq!(x_special_fibre_cycle(tau)?, lhs.to_x_side());
    }

    let st = x_ss_steinberg_cycle(&fd, fd.level_one(1))?;
    println!("Steinberg twist: {st}");
    println!("{}", serde_json::to_string(&st.to_json()).expect("json"));
    Ok(())
}
