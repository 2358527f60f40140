use std::time::Instant;
use zetalab::eval::{self, DirichletBlock, GridSpec};
use zetalab::ComplexVal;

fn main() {
    let block = DirichletBlock::unit(1.0, 2000.0, 0.5).unwrap();
    let grid = GridSpec::new(100.0, 0.01, 4096).unwrap();
    // warm caches
    let _ = eval::grid_eval(&block, &grid).unwrap();

    let t0 = Instant::now();
    let fast = eval::grid_eval(&block, &grid).unwrap();
    let fast_el = t0.elapsed();
    let pairs = 4096.0 * 2000.0;
    println!("fast: {:?} = {:.2} ns/pair", fast_el, fast_el.as_nanos() as f64 / pairs);

    let t1 = Instant::now();
    let mut acc = ComplexVal::new(0.0, 0.0);
    for k in (0..4096).step_by(16) {
        acc += eval::zeta_sum(&block, grid.point(k)).unwrap();
    }
    let naive_el = t1.elapsed();
    let naive_terms = 256.0 * 2000.0;
    println!(
        "naive: {:?} for {} terms = {:.2} ns/term; scaled ratio {:.1}",
        naive_el,
        naive_terms,
        naive_el.as_nanos() as f64 / naive_terms,
        (naive_el.as_secs_f64() * 16.0) / fast_el.as_secs_f64()
    );
    println!("sink {} {}", fast[0].re, acc.re);
}
