//! Every verification suite over a small grid, in parallel inside each suite.

use std::time::Instant;

use bmweights::verify::{run_suites, Suite};
use bmweights::FieldDatum;

fn main() -> bmweights::Result<()> {
    let mut ok = true;
    for (p, f) in [(3, 1), (5, 1), (3, 2), (7, 1)] {
        let fd = FieldDatum::new(p, f, 1)?;
        let start = Instant::now();
        for r in run_suites(fd, &Suite::all()) {
            ok &= r.passed();
            match &r.counterexample {
                None => println!("{fd}  {:<7} ok   {:>6} checks", r.suite.name(), r.checks),
                Some(cx) => println!("{fd}  {:<7} FAIL {cx}", r.suite.name()),
            }
        }
        println!("{fd}  done in {:?}", start.elapsed());
    }
    std::process::exit(if ok { 0 } else { 1 });
}
