use zetalab::eval::{self, DirichletBlock, GridSpec};

fn main() {
    // hardest contract corner: sigma = 0 (no decay), max length
    let block = DirichletBlock::unit(0.0, 1.0e6, 0.0).unwrap();
    let grid = GridSpec::new(1234.5, 0.01, 2048).unwrap();
    let t0 = std::time::Instant::now();
    let fast = eval::grid_eval(&block, &grid).unwrap();
    println!("grid_eval over 1e6-term block, 2048 pts: {:?}", t0.elapsed());
    let mut worst = 0.0f64;
    for k in [0usize, 511, 1023, 1024, 1535, 2047] {
        let direct = eval::zeta_sum(&block, grid.point(k)).unwrap();
        worst = worst.max((fast[k] - direct).norm());
    }
    println!("worst deviation at sampled points: {worst:.3e}");
    // moderate sigma, same length
    let block2 = DirichletBlock::unit(0.0, 1.0e6, 0.5).unwrap();
    let fast2 = eval::grid_eval(&block2, &grid).unwrap();
    let mut worst2 = 0.0f64;
    for k in [0usize, 1023, 2047] {
        let direct = eval::zeta_sum(&block2, grid.point(k)).unwrap();
        worst2 = worst2.max((fast2[k] - direct).norm());
    }
    println!("sigma = 1/2 worst: {worst2:.3e}");
}
