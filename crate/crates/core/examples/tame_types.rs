//! Enumerate tame inertial types and their gamma digits.

use bmweights::jh::p_tau;
use bmweights::tame_types::{enumerate_tame_types, make_principal_series};
use bmweights::{FieldDatum, TameType, TypeKind};

fn main() -> bmweights::Result<()> {
    let fd = FieldDatum::new(3, 2, 1)?;
    let types = enumerate_tame_types(&fd);
    for kind in [TypeKind::Scalar, TypeKind::PrincipalSeries, TypeKind::Cuspidal] {
        let n = types.iter().filter(|t| t.kind() == kind).count();
        println!("{:<17} {n}", kind.name());
    }

    for tau in types.iter().filter(|t| !t.is_scalar()).take(6) {
        println!("{tau:<10} gamma={:?} |P_tau|={} dim={}", tau.gamma().digits(), p_tau(tau).len(), tau.expected_dim());
    }

    // Specs in either order name the same type.
    let a = make_principal_series(&fd, fd.level_one(3), fd.level_one(1))?;
    let b = TameType::parse(&fd, "ps:1,3")?;
    assert_eq!(a, b);
    Ok(())
}
