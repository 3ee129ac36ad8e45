use hzn_core::special::{li_exp_dbg};
use hzn_core::Complex64;

fn main() {
    let eps = 1e-4f64;
    let x = 2.0f64;
    let tau = core::f64::consts::TAU;
    for t in [1e-5f64, 1e-4, 6.3e-4, 1e-3, 1e-2, 0.1, 0.3, 1.0] {
        let mu_a = Complex64::new(-x * t, tau * eps);
        let num = li_exp_dbg(2, mu_a);
        println!("t={t:.1e}: Li2(e^mu) = {:.15}", num);
    }
}
