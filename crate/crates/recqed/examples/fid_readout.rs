//! Free-induction-decay style readout: a brief weak probe reflected off
//! the atom-cavity system leaves a long narrowband tail decaying at the
//! eliminated-atom rate g^2/kappa + gamma/2. Detecting that tail is a
//! coherent (heterodyne-friendly) signature of a single dopant.
//!
//! ```bash
//! cargo run -p recqed --example fid_readout
//! ```

use recqed::pulse::{GaussianPulse, Pulse, TimeGrid};
use recqed::response::{fid_signal, ResponseSystem, FID_EXTENT_KAPPAS};

fn main() {
    // Deep bad-cavity regime, kappa/g = 100 (arbitrary angular units).
    let (g, kappa, gamma) = (1.0, 100.0, 0.01);
    let sys = ResponseSystem::new(g, kappa, gamma);

    let dt = std::f64::consts::TAU / (FID_EXTENT_KAPPAS * kappa);
    let sigma = 5.0 * dt;
    let t0 = 10.0 * sigma;
    let probe_shape = GaussianPulse::new(sigma, t0);
    let len = ((t0 + 6.0 * sigma) / dt).ceil() as usize + 1;
    let probe = Pulse::from_shape(TimeGrid::new(0.0, dt, len), &probe_shape);

    let res = fid_signal(&sys, &probe).unwrap();
    println!(
        "grid: {} points, extent {:.1} rad/s, resolution {:.2e} rad/s",
        res.n_points, res.extent, res.resolution
    );

    let expected = g * g / kappa + 0.5 * gamma;
    println!("expected tail rate g^2/kappa + gamma/2 = {expected:.5}\n");

    // Sample |out| on a log-ish schedule through the tail.
    println!("{:>10} {:>12}", "t", "|out|");
    let mut t = t0;
    while t < t0 + 4.0 / expected {
        let k = (t / dt).round() as usize;
        println!("{:>10.2} {:>12.4e}", t, res.output.values[k].norm());
        t += 0.4 / expected;
    }

    // Least-squares fit of ln|out| over the tail window.
    let (t1, t2) = (t0 + 0.3 / expected, t0 + 2.3 / expected);
    let pts: Vec<(f64, f64)> = res
        .output
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| (res.output.grid.time(k), v.norm()))
        .filter(|&(t, a)| t >= t1 && t <= t2 && a > 0.0)
        .map(|(t, a)| (t, a.ln()))
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    println!(
        "\nfitted tail decay rate = {:.5}  (relative error {:.2e})",
        -slope,
        (-slope - expected).abs() / expected
    );
}
