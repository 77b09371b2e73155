use harmonic_zeros::dynamics::*;
use harmonic_zeros::gallery::*;
use harmonic_zeros::solver::*;
fn main() {
    let spec = random_instance(2, 1, 191192858434173414).unwrap();
    println!("{}", spec.r);
    let set = solve(&spec.r, spec.c, &SolverConfig::default()).unwrap();
    for z in &set.zeros { println!("zero {} |r'|={}", z.location, z.r_prime_abs); }
    let map = build_iterated_map(&spec.r, spec.c).unwrap();
    for s in orbit_seeds(&spec.r).unwrap() {
        for steps in [10_000usize, 100_000, 1_000_000] {
            let cfg = OrbitConfig { max_steps: steps, ..Default::default() };
            let o = iterate_orbit(&map, s, &cfg, 1e4);
            println!("{:?} [{steps}] -> {:?} steps {}", s, o.limit, o.steps);
        }
    }
}
