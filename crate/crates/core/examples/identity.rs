//! Partial sums of the McShane-type identity and the relative identity for
//! one directed edge.

use markoff_hurwitz::hurwitz::HurwitzPoint;
use markoff_hurwitz::identity::{
    finite_tree_identity, identity_partial_sums, psi_directed, IdentityVariant, SeriesOptions,
};
use markoff_hurwitz::tree::{ball, DirectedEdge, Vertex};
use markoff_hurwitz::C64;

fn main() -> anyhow::Result<()> {
    let a = HurwitzPoint::real(&[3.0, 3.0, 3.0])?;
    let opts = SeriesOptions::default();
    println!("depth  partial sum       residual   terms");
    for r in identity_partial_sums(&a, 10, &IdentityVariant::McShaneH, &opts)? {
        println!("{:>5}  {:.12}  {:.3e}  {}", r.depth.unwrap_or(0), r.partial_sum.re, r.residual, r.term_count);
    }

    let e = DirectedEdge { tail: Vertex::root(), color: 1 };
    let psi = psi_directed(&a, &e)?;
    println!("psi({e}) = {:.12} (closed form {:.12})", psi.quotient.re, psi.closed_form.re);
    for r in identity_partial_sums(&a, 6, &IdentityVariant::RelativeEdge(e), &opts)? {
        println!("    depth {}: {:.12}", r.depth.unwrap_or(0), r.partial_sum.re);
    }

    // exact on finite trees, whatever the point
    let b = HurwitzPoint::new(vec![C64::new(1.0, 0.5), C64::new(-0.3, 2.0), C64::new(2.5, -1.0), C64::new(0.7, 0.1)])?;
    let t = ball(4, &Vertex::root(), 2)?;
    let r = finite_tree_identity(&b, &t)?;
    println!("finite tree of {} vertices: residual {:.3e}", r.tree_size, r.residual);
    Ok(())
}
