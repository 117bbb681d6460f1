use std::time::Instant;
use effectkit::{ToleranceConfig};
use effectkit::generators::{rand_ortho_triple, rand_x0_pair, rand_mixed_abs_compat_pair};
use effectkit::structure::{recover_x0_normal_form, six_block_recover};
use effectkit::coexistence::decompose_poc;
use effectkit::batch;

fn main() {
    let tol = ToleranceConfig::default();
    let t = Instant::now();
    let _ = batch::map_seeds(0, 500, |s| {
        let n = 2 + (s % 7) as usize;
        let inst = rand_ortho_triple(n, s, &tol).unwrap();
        decompose_poc(&inst.a, &inst.b, &tol).unwrap();
    });
    println!("c3 (500 ortho triples): {:.2} s", t.elapsed().as_secs_f64());

    let t = Instant::now();
    let _ = batch::map_seeds(0, 200, |s| {
        let k = 1 + (s % 4) as usize;
        let (a, b, _f) = rand_x0_pair(k, s, &tol).unwrap();
        recover_x0_normal_form(&a, &b, &tol).unwrap();
    });
    println!("c6 (200 x0 round trips): {:.2} s", t.elapsed().as_secs_f64());

    let t = Instant::now();
    let _ = batch::map_seeds(0, 200, |s| {
        let (a, b) = rand_mixed_abs_compat_pair(s, &tol).unwrap();
        six_block_recover(&a, &b, &tol).unwrap();
    });
    println!("c9 (200 six-block): {:.2} s", t.elapsed().as_secs_f64());
}
