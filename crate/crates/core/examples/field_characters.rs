//! Character exponents of tame inertia and their base-p digits.
//!
//! Run with `cargo run --example field_characters -- 5 2`.

use bmweights::{FieldDatum, Level};

fn main() -> bmweights::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse().expect("integer argument"));
    let p = args.next().unwrap_or(5);
    let f = args.next().unwrap_or(2) as u32;
    let fd = FieldDatum::new(p, f, 1)?;
    println!("{fd}: q = {}, level-one modulus {}, level-two modulus {}", fd.q(), fd.m1(), fd.m2());

    for i in 0..f as usize {
        println!("omega_{i} = {}", fd.fundamental_exponent(i, Level::One)?);
    }
    println!("cyclotomic character = {}", fd.cyclotomic_exponent());

    // A few exponents and their digit vectors, round-tripped.
    for c in [1, fd.p() as i128, (fd.m1() / 2) as i128, fd.m1() as i128 - 1] {
        let c = fd.level_one(c);
        let d = fd.digits_of(c);
        assert_eq!(fd.exponent_of_digits(&d)?, c);
        println!("{:>4} -> {:?}", c.value(), d.digits());
    }

    // Level-two characters that are norms from level one.
    let norms = (0..fd.m2() as i128).filter_map(|c| fd.factor_through_norm(fd.level_two(c)).transpose()).count();
    println!("{norms} of {} level-two exponents factor through the norm", fd.m2());
    Ok(())
}
