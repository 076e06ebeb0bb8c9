//! Random elements of `Γ_n*` in normal form, their action and the check
//! that they preserve `H`.

use markoff_hurwitz::group::{random_point, GroupElement};
use markoff_hurwitz::hurwitz::hurwitz_h;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 4;
    let g = GroupElement::random(n, 4, &mut rng);
    let h = GroupElement::random(n, 3, &mut rng);
    let gh = g.compose(&h)?;
    println!("g      = {}", serde_json::to_string(&g)?);
    println!("h      = {}", serde_json::to_string(&h)?);
    println!("gh     = {}", serde_json::to_string(&gh)?);
    println!("g g^-1 = {}", serde_json::to_string(&g.compose(&g.inverse())?)?);

    let x = random_point(n, 1.2, &mut rng);
    let y = gh.apply(&x)?;
    println!("H(x) = {:.12}", hurwitz_h(&x));
    println!("H(gh x) = {:.12}", hurwitz_h(&y));
    gh.verify_preserves_h(100, 1.2, &mut rng)?;
    println!("gh preserves H at 100 random points");
    Ok(())
}
