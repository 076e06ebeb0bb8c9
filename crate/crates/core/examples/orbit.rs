//! Walks the orbit of the Markoff point `(3, 3, 3)` and prints the values
//! along one geodesic.

use markoff_hurwitz::hurwitz::HurwitzPoint;
use markoff_hurwitz::tree::canonical_geodesic;
use markoff_hurwitz::tree::Vertex;

fn main() -> anyhow::Result<()> {
    let a = HurwitzPoint::real(&[3.0, 3.0, 3.0])?;
    for rec in a.orbit_enumerate(2) {
        let x: Vec<f64> = rec.x.iter().map(|z| z.re).collect();
        println!("{:>6}  {:?}", rec.v.to_string(), x);
    }

    let g = canonical_geodesic(&Vertex::root(), 1, 2);
    let ys: Vec<f64> = a.geodesic_values(&g, -3..=4)?.iter().map(|z| z.re).collect();
    println!("y_m on {g}, m = -3..=4: {ys:?}");
    Ok(())
}
