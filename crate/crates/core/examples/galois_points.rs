//! Inertial data of reducible Galois representations and the weights they
//! pick out.

use bmweights::galois_points::{all_niveau_one_data, components_through, datum_for_weight, match_weights, RamFlag};
use bmweights::weights::enumerate_weights;
use bmweights::FieldDatum;

fn main() -> bmweights::Result<()> {
    let fd = FieldDatum::new(3, 2, 1)?;
    for w in enumerate_weights(&fd, false).iter().take(4) {
        let d = datum_for_weight(&fd, w)?;
        let matched = match_weights(&fd, &d)?;
        println!("{w} -> {d} -> {:?}", matched.iter().map(|x| x.key()).collect::<Vec<_>>());
        println!("    components: {}", components_through(&fd, &d)?);
    }

    let data = all_niveau_one_data(&fd);
    let tres = data.iter().filter(|d| d.ram_flag() == RamFlag::Tres).count();
    let empty = data.iter().filter(|d| match_weights(&fd, d).map(|s| s.is_empty()).unwrap_or(false)).count();
    println!("{} data, {tres} tres ramifiee, {empty} with no weights", data.len());
    Ok(())
}
