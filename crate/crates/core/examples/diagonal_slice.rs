//! Renders the diagonal slice `(z, z, z)` of the domain to `slice.ppm`.
//!
//! ```text
//! cargo run --release --example diagonal_slice -- [n] [res] [budget]
//! ```
//! Black pixels lie in the domain, white ones do not, gray ones exhausted
//! the search budget.

use std::fs::File;
use std::io::BufWriter;

use markoff_hurwitz::slice::{render, SliceJob};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().map_or(Ok(3), |s| s.parse())?;
    let res = args.next().map_or(Ok(200), |s| s.parse())?;
    let budget = args.next().map_or(Ok(20_000), |s| s.parse())?;
    let job = SliceJob { n, res: (res, res), budget, width: 6.0, height: 6.0, ..Default::default() };
    let (image, summary) = render(&job);
    image.write_ppm(BufWriter::new(File::create("slice.ppm")?))?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
