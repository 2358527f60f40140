fn main() {
    let t0 = std::time::Instant::now();
    let m = zetalab::calib::calibrate().expect("calibration");
    println!("elapsed: {:?}", t0.elapsed());
    println!("c_afe: {:?}", m.c_afe);
    println!("c_afe_long: {:?}", m.c_afe_long);
    println!("c_convexity: {:?}", m.c_convexity);
    println!("c_gamma: {:?}", m.c_gamma);
    println!("c_zeta_prime_frac: {:?}", m.c_zeta_prime_frac);
    println!("c_box: {:?}", m.c_box);
    println!("c_mellin: {:?}", m.c_mellin);
    println!("c_perron: {:?}", m.c_perron);
    println!("c_mv: {:?}", m.c_mv);
}
