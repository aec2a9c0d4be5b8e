use ellharm::ellipsoid::*;
use ellharm::lame::QuadOpts;
use ellharm::pcm::*;
use ellharm::kahan::KahanSum;

fn main() {
    let sys = EllipsoidalSystem::new(3.0, 2.0, 1.0).unwrap();
    let charges = seeded_charges(&sys, DEFAULT_SEED, 5);
    let model = DielectricModel::new(sys, 1.0, 80.0, charges.clone()).unwrap();
    let opts = QuadOpts { tolerance: 1e-12, ..QuadOpts::default() };
    let expansion = ExpansionSet::build(&model, 20, &opts).unwrap();
    let eps1 = model.eps_in();

    use std::f64::consts::PI;
    // second phi value gives a negative-lambda octant
    let theta = PI * 0.37 / 5.0;
    let phi = 2.0 * PI * 1.41 / 4.0;
    let pt = [sys.a()*theta.sin()*phi.cos(), sys.b()*theta.sin()*phi.sin(), sys.c()*theta.cos()];
    let p = cart_to_ellipsoidal(&sys, pt[0], pt[1], pt[2]).unwrap();
    println!("pt {pt:?}\n  lam={} mu={} nu={}", p.lambda(), p.mu(), p.nu());

    let coul_at = |lambda: f64| -> f64 {
        let q = EllipsoidalPoint::from_coords(&sys, lambda, p.mu(), p.nu()).unwrap();
        let (x, y, z) = ellipsoidal_to_cart(&sys, &q).unwrap();
        direct_coulomb(&charges, [x, y, z]) / eps1
    };
    println!("  direct={:.8e} coul_at(lam0)={:.8e}", direct_coulomb(&charges, pt)/eps1, coul_at(p.lambda()));
    // does from_coords move outward when lambda becomes more negative?
    let d = 1e-3;
    let q1 = EllipsoidalPoint::from_coords(&sys, p.lambda()+d, p.mu(), p.nu()).unwrap();
    let (x1, y1, z1) = ellipsoidal_to_cart(&sys, &q1).unwrap();
    println!("  lam0+d -> ({x1:.4},{y1:.4},{z1:.4}) r={:.4} (orig r={:.4})",
        (x1*x1+y1*y1+z1*z1).sqrt(), (pt[0]*pt[0]+pt[1]*pt[1]+pt[2]*pt[2]).sqrt());

    let delta = 1e-5;
    let dcoul_fd = (coul_at(p.lambda() + delta) - coul_at(p.lambda() - delta)) / (2.0 * delta);
    let mut dser = KahanSum::new();
    for n in 0..=20usize {
        for harm in expansion.table(n).harmonics() {
            let angular = harm.eval(p.mu()) * harm.eval(p.nu());
            dser.add(expansion.coulomb(n, harm.index()) / eps1
                * harm.exterior_deriv(p.lambda(), &opts).unwrap().value
                * angular);
        }
    }
    println!("  dcoul FD = {dcoul_fd:.8e}, series = {:.8e}", dser.value());
}
