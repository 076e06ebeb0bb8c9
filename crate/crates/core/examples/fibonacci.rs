//! The Fibonacci function on geodesics: multiplicities, and the comparison
//! of `log|φ|` with `F` for a point of the domain.

use markoff_hurwitz::hurwitz::HurwitzPoint;
use markoff_hurwitz::identity::fibonacci_growth_check;
use markoff_hurwitz::tree::multiplicity;

fn main() -> anyhow::Result<()> {
    println!("m   n=3  n=4");
    for m in 1..=12 {
        println!("{m:<3} {:<4} {}", multiplicity(3, m)?, multiplicity(4, m)?);
    }

    let a = HurwitzPoint::real(&[3.0, 3.0, 2.2])?;
    let rep = fibonacci_growth_check(&a, 9, 2.5)?;
    println!(
        "(3, 3, 2.2) to depth 9: {} geodesics, c1 = {:.4}, c2 = {:.4}, {} exceptional, {} upper / {} lower violations",
        rep.scanned,
        rep.c1,
        rep.c2,
        rep.exceptional.len(),
        rep.upper_violations.len(),
        rep.lower_violations.len()
    );
    Ok(())
}
