//! Resonator design problem: for each ion, the quality factor required to
//! reach critical atom number 1 as a function of sphere radius.
//!
//! ```bash
//! cargo run -p recqed --example design_curves
//! ```

use recqed::catalog::Catalog;
use recqed::wgm::{linear_grid, radius_q_curve, DesignTarget};

fn main() {
    let catalog = Catalog::builtin();
    let radii = linear_grid(0.1e-3, 5e-3, 8);

    for target in [DesignTarget::Population, DesignTarget::Phase] {
        println!(
            "Q required for {} = 1:",
            match target {
                DesignTarget::Population => "N0(pop)",
                DesignTarget::Phase => "N0(ph)",
            }
        );
        print!("{:<28}", "id \\ radius/mm");
        for r in &radii {
            print!(" {:>9.2}", r * 1e3);
        }
        println!();
        // Sort ions by their Q requirement at the smallest radius.
        let mut rows: Vec<_> = catalog
            .records()
            .iter()
            .map(|t| {
                let qs: Vec<f64> = radius_q_curve(t, target, &radii)
                    .into_iter()
                    .map(|(_, p)| p.expect("radii inside validity").q_required)
                    .collect();
                (t.id.clone(), qs)
            })
            .collect();
        rows.sort_by(|a, b| a.1[0].total_cmp(&b.1[0]));
        for (id, qs) in rows {
            print!("{id:<28}");
            for q in qs {
                print!(" {q:>9.2e}");
            }
            println!();
        }
        println!();
    }
    println!("The lowest row wins: it needs the least demanding resonator.");
}
