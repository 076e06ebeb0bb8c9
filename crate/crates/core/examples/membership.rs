//! Membership verdicts for a few points, with `A_φ(K)` and the attracting
//! tree when the point is in the domain.

use markoff_hurwitz::bowditch::{is_in_domain, BowditchConfig};
use markoff_hurwitz::hurwitz::HurwitzPoint;
use markoff_hurwitz::C64;

fn main() -> anyhow::Result<()> {
    let points = [
        ("markoff (3,3,3)", HurwitzPoint::real(&[3.0, 3.0, 3.0])?),
        ("(3, 3, 2.2)", HurwitzPoint::real(&[3.0, 3.0, 2.2])?),
        ("(1.2, 2, 2, 2)", HurwitzPoint::real(&[1.2, 2.0, 2.0, 2.0])?),
        ("diagonal 1.5", HurwitzPoint::diagonal(3, C64::new(1.5, 0.0))?),
        ("diagonal 1+0.3i", HurwitzPoint::diagonal(3, C64::new(1.0, 0.3))?),
    ];
    let cfg = BowditchConfig { bfs_budget: 5_000, ..BowditchConfig::default() };
    for (name, a) in &points {
        let v = is_in_domain(a, &cfg)?;
        println!("{name}: {:?}", v.status);
        for m in &v.a_phi_k {
            println!("    {}  phi = {:.6}", m.geodesic, m.phi);
        }
        if let Some(t) = &v.tree {
            println!("    attracting tree: {} vertices", t.vertices.len());
        }
        if let Some(w) = &v.witness {
            println!("    witness: {}", serde_json::to_string(w)?);
        }
    }
    Ok(())
}
