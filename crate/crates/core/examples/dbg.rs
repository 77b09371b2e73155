use harmonic_zeros::gallery::*;
use harmonic_zeros::solver::*;
use harmonic_zeros::roots::*;
fn main() {
    let spec = random_instance(0, 4, 1366414895027884944).unwrap();
    println!("{}", spec.r);
    let set = solve(&spec.r, spec.c, &SolverConfig::default()).unwrap();
    for z in &set.zeros { println!("zero {} |r'|={} res {}", z.location, z.r_prime_abs, z.residual); }
    println!("N+ {} N- {}", set.n_plus, set.n_minus);
    let fp = spec.r.fixed_point_polynomial(spec.c).unwrap();
    let rs = find_roots(&fp, 1e-12, 200).unwrap();
    let sh0 = spec.r.shift_numerator(spec.c).unwrap();
    let poles = find_roots(sh0.denominator(), 1e-12, 200).unwrap();
    for z0 in &poles.roots { let a = sh0.numerator().eval(*z0)/sh0.denominator().derivative().eval(*z0); let s = *z0 + a / z0.conj(); let pz = polish(&sh0, s, 200); println!("pole {:.6} A {:.3e} seed->{:.9} f {:.2e}", z0, a.norm(), pz, harmonic_value(&sh0,pz).norm()); }
    let sh = spec.r.shift_numerator(spec.c).unwrap();
    for (z, res) in rs.roots.iter().zip(&rs.residuals) {
        let pz = polish(&sh, *z, 200);
        println!("  polished {:.9} f {:.2e} moved {:.3e}", pz, harmonic_value(&sh, pz).norm(), (pz - z).norm());
        println!("cand {:.6} polyres {:.2e} f {:.2e} q {:.2e}", z, res, harmonic_value(&sh, *z).norm(), sh.denominator().eval(*z).norm());
    }
}
#[allow(dead_code)]
fn unused() {}
