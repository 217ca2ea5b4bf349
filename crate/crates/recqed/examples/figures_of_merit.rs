//! Derived figures of merit: reproduce the spectroscopic summary table
//! (dipole moment and two-level spontaneous time for every catalog ion),
//! then work one full (ion, resonator) example.
//!
//! ```bash
//! cargo run -p recqed --example figures_of_merit
//! ```

use recqed::catalog::Catalog;
use recqed::coupling::{self, figures};
use recqed::units::to_hz;
use recqed::wgm::ResonatorSpec;

fn main() {
    let catalog = Catalog::builtin();

    println!(
        "{:<28} {:>12} {:>12} {:>10} {:>10}",
        "id", "mu/(C m)", "T_spon/ms", "Ts/T1", "Ts/T2"
    );
    for t in catalog.records() {
        let mu = coupling::dipole_moment(t);
        let ts = coupling::spontaneous_time(t);
        println!(
            "{:<28} {:>12.3e} {:>12.3} {:>10.1} {:>10.1}",
            t.id,
            mu,
            ts * 1e3,
            ts / t.t1(),
            ts / t.t2()
        );
    }

    // A 0.5 mm Er:Y2SiO5 sphere at Q = 1e9.
    let er = catalog.get("Er3+:Y2SiO5 4I15/2-4I13/2").unwrap();
    let resonator = ResonatorSpec::for_transition(er, 0.5e-3, 1e9);
    let f = figures(er, &resonator).unwrap();

    println!("\n--- {} in a 0.5 mm sphere, Q = 1e9 ---", er.id);
    println!("mode volume   : {:.4e} m^3", f.mode_volume);
    println!("beta          : {:.4e}", f.beta);
    println!("g             : {:.4e} rad/s  ({:.4e} Hz)", f.g, to_hz(f.g));
    println!(
        "kappa         : {:.4e} rad/s  ({:.4e} Hz)",
        f.kappa,
        to_hz(f.kappa)
    );
    println!("gamma         : {:.4e} rad/s", f.gamma);
    println!("gamma_h       : {:.4e} rad/s", f.gamma_h);
    println!("N0(pop)       : {:.4e}", f.n0_pop);
    println!("N0(ph)        : {:.4e}", f.n0_ph);
    println!("n0            : {:.4e}", f.n0_sat);
    println!("cooperativity : {:.4e}", f.cooperativity);
    println!(
        "\nstrong coupling (N0 < 1, n0 < 1): {}",
        if f.n0_ph < 1.0 && f.n0_sat < 1.0 {
            "yes"
        } else {
            "no"
        }
    );
}
