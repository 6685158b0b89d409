use std::time::Instant;
fn main() {
    let t0 = Instant::now();
    let r = supervec::toroidal::jacobi_sweep::<supervec::Rat128>(2, 2).unwrap();
    println!("N=2: {} gens, {} triples, {} failures, {:?}", r.generators, r.triples_checked, r.failures.len(), t0.elapsed());
    let t0 = Instant::now();
    let r = supervec::toroidal::jacobi_sweep::<supervec::Rat128>(3, 1).unwrap();
    println!("N=3 range 1: {} gens, {} triples, {} failures, {:?}", r.generators, r.triples_checked, r.failures.len(), t0.elapsed());
}
