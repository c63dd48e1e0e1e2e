use g2flow::curve::perturbed_circle;
use g2flow::nlss::{cross_validate, CrossValidateOptions};
use g2flow::octonion::ImOctonion;

fn main() {
    let cases: [(f64, &[usize], u64); 4] = [
        (0.05, &[2, 3], 11),
        (0.03, &[2, 3], 11),
        (0.05, &[2], 11),
        (0.04, &[2], 7),
    ];
    for (amp, modes, seed) in cases {
        print!("amp={amp} modes={modes:?} seed={seed}:");
        let mut discs = Vec::new();
        for n in [128usize, 256] {
            let c = perturbed_circle(n, amp, modes, seed).unwrap();
            let opts = CrossValidateOptions {
                t_end: 0.05,
                n_outputs: 4,
                cfl_frac: 0.1,
                fallback_seed: ImOctonion::basis(3),
            };
            match cross_validate(&c, &opts) {
                Ok(r) => {
                    print!("  n={n}: disc={:.3e} wind={:.2e}", r.mag_disc_max, r.winding_disc_max);
                    discs.push(r.mag_disc_max);
                }
                Err(e) => print!("  n={n}: ERR {e}"),
            }
        }
        if discs.len() == 2 {
            print!("  order={:.2}", (discs[0] / discs[1]).log2());
        }
        println!();
    }
}
