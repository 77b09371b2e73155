use harmonic_zeros::workflow::*;
fn main() {
    let mut pairs = vec![];
    for p in 0..5 { for q in 0..5 { if p.max(q) >= 2 { pairs.push((p,q)); } } }
    let cfg = FuzzConfig { pairs, count: 200, seed: 99, pipeline: PipelineConfig::default() };
    let t = std::time::Instant::now();
    let (s, outs) = fuzz_campaign(&cfg).unwrap();
    println!("{:?}", t.elapsed());
    println!("inst {} solved {} err {} regular {} sig {} ap {} oracle res {} agree {} attained {}", s.instances, s.solved, s.solver_errors, s.regular, s.signature_checked, s.argument_principle_checked, s.oracle_resolved, s.oracle_agreed, s.attained);
    for v in s.violations.iter().take(20) { println!("VIOL {:?}", v); }
    for o in outs.iter() { if let Some(r) = &o.report { if r.invariants.orbit_oracle.is_none() { println!("({},{}) seed {} oracle {:?}", o.n_p, o.n_q, o.seed, r.orbit_oracle); } } }
}
