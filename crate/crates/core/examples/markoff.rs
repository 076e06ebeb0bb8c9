//! Integer solutions of `Σ x_k² = ∏ x_k` up to a bound.
//!
//! ```text
//! cargo run --example markoff -- [n] [bound]
//! ```

use markoff_hurwitz::hurwitz::integer_solutions;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(3), |s| s.parse())?;
    let bound: i128 = args.next().map_or(Ok(1000), |s| s.parse())?;
    let sols = integer_solutions(n, bound)?;
    for x in &sols {
        if n == 3 {
            // divided by 3 these are the Markoff triples
            let m: Vec<i128> = x.iter().map(|v| v / 3).collect();
            println!("{x:?}  ->  {m:?}");
        } else {
            println!("{x:?}");
        }
    }
    println!("{} solutions", sols.len());
    Ok(())
}
