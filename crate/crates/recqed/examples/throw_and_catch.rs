//! Single-photon state transfer between two cavity nodes: synthesize the
//! drive that makes node 1 emit a Gaussian wavepacket, drive node 2 with
//! its time reverse, and watch the photon move the atom population from
//! node 1 to node 2.
//!
//! ```bash
//! cargo run -p recqed --example throw_and_catch
//! ```

use recqed::dynamics::{run_throw_catch, ThrowCatchConfig};
use recqed::pulse::GaussianPulse;

fn bar(x: f64, width: usize) -> String {
    let n = (x.clamp(0.0, 1.0) * width as f64).round() as usize;
    format!("{}{}", "#".repeat(n), ".".repeat(width - n))
}

fn main() {
    let (g, kappa) = (10.0, 2.0);
    let sigma = 10.0 / kappa;
    let t0 = GaussianPulse::DEFAULT_TRUNCATION * sigma;
    let shape = GaussianPulse::new(sigma, t0);
    let span = (0.0, 2.0 * t0);

    let cfg = ThrowCatchConfig::new(g, kappa);
    let tc = run_throw_catch(&shape, span, &cfg).unwrap();

    println!("two-node transfer, g = {g}, kappa = {kappa}, gamma = 0\n");
    println!(
        "{:>7}  {:<24} {:<24} {:>8}",
        "t", "node 1 |phi12|^2", "node 2 |phi12|^2", "Omega_1"
    );
    let n = tc.grid.len;
    for k in (0..n).step_by(n / 24) {
        let p1 = tc.node1[k].phi12.norm_sqr();
        let p2 = tc.node2[k].phi12.norm_sqr();
        println!(
            "{:>7.2}  {} {} {:>8.3}",
            tc.grid.time(k),
            bar(p1, 24),
            bar(p2, 24),
            tc.omega1.values[k]
        );
    }

    let r = &tc.report;
    println!("\ntransfer fidelity        : {:.8}", r.fidelity);
    println!("residual flux past node 2: {:.3e}", r.residual_flux);
    println!("residual in node 1       : {:.3e}", r.node1_residual);
    println!("conservation defect      : {:.3e}", r.conservation_defect);
    println!("drive self-consistency L2: {:.3e}", r.synthesis_l2_error);
    println!("max |Omega|              : {:.3}", r.max_omega);
    println!("step                     : {:.4e}", r.step);
}
