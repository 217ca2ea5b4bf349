//! Command-line front end.
//!
//! Six subcommands bind the computational modules: `catalog`, `figures`,
//! `design`, `throwcatch`, `spectrum`, `fid`. Every run writes its data
//! files plus a `manifest.json` echoing all resolved parameters; repeated
//! runs with the same manifest produce byte-identical data files. Files
//! are written atomically (temp file + rename).
//!
//! Exit codes: 0 success, 2 usage error, 3 numeric/physics error.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use crate::catalog::Catalog;
use crate::coupling;
use crate::dynamics::{run_throw_catch, SynthesisOptions, ThrowCatchConfig};
use crate::pulse::{GaussianPulse, Pulse, TimeGrid};
use crate::response::{fid_signal, spectrum, unwrap_phases, ResponseSystem, FID_EXTENT_KAPPAS};
use crate::units;
use crate::wgm::{self, DesignTarget, ResonatorSpec};
use crate::{Error, Result};

/// Environment variable naming a default catalog file.
pub const CATALOG_ENV: &str = "RECQED_CATALOG";

#[derive(Debug, Parser)]
#[command(
    name = "recqed",
    about = "Rare-earth-ion cavity QED design and simulation toolkit",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output directory for data files and manifest.json.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    /// Treat suffixed rate values (e.g. 10MHz) as already angular instead
    /// of multiplying by 2 pi.
    #[arg(long, global = true)]
    pub angular: bool,

    /// Catalog file (defaults to $RECQED_CATALOG, then the bundled table).
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect the transition catalog.
    Catalog(CatalogArgs),
    /// Figures of merit for one transition in a resonator.
    Figures(FiguresArgs),
    /// Radius vs required-Q design curves.
    Design(DesignArgs),
    /// Two-node single-photon throw-and-catch simulation.
    Throwcatch(ThrowcatchArgs),
    /// Reflection/emission spectrum vs detuning.
    Spectrum(SpectrumArgs),
    /// Free-induction-decay style time-domain readout.
    Fid(FidArgs),
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// List the available transition ids.
    #[arg(long)]
    pub list: bool,
    /// Show one record in full.
    #[arg(long)]
    pub show: Option<String>,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// Transition id, e.g. "Pr3+:Y2SiO5 3H4-1D2".
    #[arg(long)]
    pub ion: String,
    /// Resonator quality factor.
    #[arg(long = "Q")]
    pub q: f64,
    /// Resonator radius (e.g. 0.5mm); mode volume then follows from the
    /// fundamental WGM model.
    #[arg(long)]
    pub radius: Option<String>,
    /// Explicit mode volume in m^3, bypassing the WGM model.
    #[arg(long)]
    pub mode_volume: Option<f64>,
    /// Excess dephasing rate (rate string; 0 keeps the catalog T2).
    #[arg(long)]
    pub gamma_p: Option<String>,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Which critical atom number to pin to 1: n0pop or n0ph.
    #[arg(long)]
    pub target: String,
    /// Transition id or "all".
    #[arg(long, default_value = "all")]
    pub ion: String,
    /// Smallest radius (length string).
    #[arg(long, default_value = "0.1mm")]
    pub radius_min: String,
    /// Largest radius (length string).
    #[arg(long, default_value = "5mm")]
    pub radius_max: String,
    /// Number of radius grid points.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct ThrowcatchArgs {
    /// Coupling strength g (rate string; bare numbers are rad/s).
    #[arg(long, default_value = "10")]
    pub g: String,
    /// Cavity decay kappa.
    #[arg(long, default_value = "2")]
    pub kappa: String,
    /// Free-space decay gamma.
    #[arg(long, default_value = "0")]
    pub gamma: String,
    /// Target-pulse width sigma (time string; default 10/kappa).
    #[arg(long)]
    pub sigma: Option<String>,
    /// Target-pulse center t0 (default: truncation * sigma).
    #[arg(long)]
    pub t0: Option<String>,
    /// Truncation half-width in units of sigma.
    #[arg(long, default_value_t = GaussianPulse::DEFAULT_TRUNCATION)]
    pub truncation: f64,
    /// Integration step (default: largest step obeying the step rule).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Pure propagation delay between the nodes (time string).
    #[arg(long, default_value = "0")]
    pub delay: String,
    /// Abort if the synthesized |Omega| exceeds this cap.
    #[arg(long)]
    pub omega_cap: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Coupling strength g.
    #[arg(long, default_value = "1MHz")]
    pub g: String,
    /// Cavity decay kappa.
    #[arg(long, default_value = "10MHz")]
    pub kappa: String,
    /// Atomic decay gamma.
    #[arg(long, default_value = "0.01MHz")]
    pub gamma: String,
    /// Remove the atom (empty cavity).
    #[arg(long)]
    pub no_atom: bool,
    /// Lower edge of the detuning grid.
    #[arg(long, default_value = "-30MHz", allow_hyphen_values = true)]
    pub delta_min: String,
    /// Upper edge of the detuning grid.
    #[arg(long, default_value = "30MHz", allow_hyphen_values = true)]
    pub delta_max: String,
    /// Number of detuning points.
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct FidArgs {
    /// Coupling strength g.
    #[arg(long, default_value = "1MHz")]
    pub g: String,
    /// Cavity decay kappa.
    #[arg(long, default_value = "100MHz")]
    pub kappa: String,
    /// Atomic decay gamma.
    #[arg(long, default_value = "0.01MHz")]
    pub gamma: String,
    /// Remove the atom (empty cavity).
    #[arg(long)]
    pub no_atom: bool,
    /// Probe width sigma (time string; default 5 grid steps).
    #[arg(long)]
    pub probe_sigma: Option<String>,
    /// Probe center (time string; default 10 sigma).
    #[arg(long)]
    pub probe_t0: Option<String>,
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_)
        | Error::InvalidParameter { .. }
        | Error::UnknownId { .. }
        | Error::Io { .. }
        | Error::CatalogParse { .. }
        | Error::CatalogInvariant { .. }
        | Error::DuplicateId { .. } => 2,
        _ => 3,
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    std::fs::create_dir_all(&cli.out).map_err(|source| Error::Io {
        path: cli.out.clone(),
        source,
    })?;
    match &cli.command {
        Command::Catalog(args) => cmd_catalog(cli, args),
        Command::Figures(args) => cmd_figures(cli, args),
        Command::Design(args) => cmd_design(cli, args),
        Command::Throwcatch(args) => cmd_throwcatch(cli, args),
        Command::Spectrum(args) => cmd_spectrum(cli, args),
        Command::Fid(args) => cmd_fid(cli, args),
    }
}

fn load_catalog(cli: &Cli) -> Result<(Catalog, String)> {
    if let Some(path) = &cli.catalog {
        return Ok((Catalog::load(path)?, path.display().to_string()));
    }
    if let Ok(path) = std::env::var(CATALOG_ENV) {
        if !path.is_empty() {
            return Ok((Catalog::load(&path)?, path));
        }
    }
    Ok((Catalog::builtin(), "builtin".to_string()))
}

fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<String> {
    let path = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    tmp.write_all(contents.as_bytes())
        .map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
    tmp.persist(&path).map_err(|e| Error::Io {
        path: path.clone(),
        source: e.error,
    })?;
    Ok(name.to_string())
}

fn write_manifest(
    dir: &Path,
    subcommand: &str,
    parameters: serde_json::Value,
    outputs: &[String],
) -> Result<()> {
    let manifest = json!({
        "subcommand": subcommand,
        "parameters": parameters,
        "outputs": outputs,
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&manifest).unwrap());
    write_atomic(dir, "manifest.json", &text)?;
    Ok(())
}

fn slug(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect()
}

fn cmd_catalog(cli: &Cli, args: &CatalogArgs) -> Result<()> {
    let (catalog, source) = load_catalog(cli)?;
    if args.list || args.show.is_none() {
        for id in catalog.ids() {
            println!("{id}");
        }
    }
    if let Some(id) = &args.show {
        let r = catalog.get(id)?;
        println!("id                  = {}", r.id);
        println!("wavelength          = {} nm", r.wavelength_nm);
        println!("oscillator strength = {}", r.oscillator_strength);
        println!("T1                  = {} us", r.t1_us);
        println!(
            "T2                  = {} us  ({})",
            r.t2_us, r.t2_field_note
        );
        println!("host index          = {}", r.host_index);
    }
    let records = json!(catalog.records());
    let text = format!("{}\n", serde_json::to_string_pretty(&records).unwrap());
    let mut outputs = vec![write_atomic(&cli.out, "catalog.json", &text)?];
    outputs.sort();
    write_manifest(
        &cli.out,
        "catalog",
        json!({
            "catalog_source": source,
            "list": args.list,
            "show": args.show,
        }),
        &outputs,
    )
}

fn cmd_figures(cli: &Cli, args: &FiguresArgs) -> Result<()> {
    let (catalog, source) = load_catalog(cli)?;
    let transition = catalog.get(&args.ion)?;

    let radius = args
        .radius
        .as_deref()
        .map(units::parse_length)
        .transpose()?;
    let resonator = ResonatorSpec {
        radius,
        n: transition.host_index,
        wavelength_vac: transition.wavelength_vac(),
        q: args.q,
        mode_volume_override: args.mode_volume,
    };
    let mut figures = coupling::figures(transition, &resonator)?;

    // Optional dephasing override on top of the catalog T2.
    if let Some(gp) = &args.gamma_p {
        let gamma_p = units::parse_rate(gp, cli.angular)?;
        let rates = coupling::RatesInput {
            g: figures.g,
            kappa: figures.kappa,
            gamma: figures.gamma,
            gamma_p: transition.gamma_p() + gamma_p,
        };
        figures.gamma_h = rates.gamma_h();
        figures.n0_ph = rates.n0_ph();
        figures.n0_sat = rates.n0_sat();
    }

    let hz = units::to_hz;
    println!("transition          : {}", transition.id);
    println!("mu                  : {:.6e} C m", figures.mu);
    println!("T_spon              : {:.6e} s", figures.t_spon);
    println!("chi_L               : {:.6}", figures.chi_l);
    println!("mode volume         : {:.6e} m^3", figures.mode_volume);
    println!("beta                : {:.6e}", figures.beta);
    println!(
        "g                   : {:.6e} rad/s  ({:.6e} Hz)",
        figures.g,
        hz(figures.g)
    );
    println!(
        "kappa               : {:.6e} rad/s  ({:.6e} Hz)",
        figures.kappa,
        hz(figures.kappa)
    );
    println!(
        "gamma               : {:.6e} rad/s  ({:.6e} Hz)",
        figures.gamma,
        hz(figures.gamma)
    );
    println!(
        "gamma_h             : {:.6e} rad/s  ({:.6e} Hz)",
        figures.gamma_h,
        hz(figures.gamma_h)
    );
    println!("N0(pop)             : {:.6e}", figures.n0_pop);
    println!("N0(ph)              : {:.6e}", figures.n0_ph);
    println!("n0                  : {:.6e}", figures.n0_sat);
    println!("cooperativity       : {:.6e}", figures.cooperativity);

    let payload = json!({
        "transition": transition.id,
        "figures": figures,
        "hz_equivalents": {
            "g_hz": hz(figures.g),
            "kappa_hz": hz(figures.kappa),
            "gamma_hz": hz(figures.gamma),
            "gamma_h_hz": hz(figures.gamma_h),
        },
        "notes": "rates are angular (rad/s); TM/TE mode corrections ignored (sub-10%)",
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&payload).unwrap());
    let outputs = vec![write_atomic(&cli.out, "figures.json", &text)?];
    write_manifest(
        &cli.out,
        "figures",
        json!({
            "catalog_source": source,
            "ion": args.ion,
            "Q": args.q,
            "radius_m": radius,
            "mode_volume_m3": args.mode_volume,
            "gamma_p": args.gamma_p,
            "angular": cli.angular,
        }),
        &outputs,
    )
}

fn cmd_design(cli: &Cli, args: &DesignArgs) -> Result<()> {
    let (catalog, source) = load_catalog(cli)?;
    let target = match args.target.as_str() {
        "n0pop" => DesignTarget::Population,
        "n0ph" => DesignTarget::Phase,
        other => {
            return Err(Error::Usage(format!(
                "unknown design target `{other}` (use n0pop or n0ph)"
            )))
        }
    };
    let rmin = units::parse_length(&args.radius_min)?;
    let rmax = units::parse_length(&args.radius_max)?;
    if !(rmax > rmin) || args.points < 2 {
        return Err(Error::Usage(
            "need radius_max > radius_min and at least 2 points".into(),
        ));
    }
    let radii = wgm::linear_grid(rmin, rmax, args.points);

    let selected: Vec<_> = if args.ion == "all" {
        catalog.records().to_vec()
    } else {
        vec![catalog.get(&args.ion)?.clone()]
    };

    let mut outputs = Vec::new();
    for t in &selected {
        let curve = wgm::radius_q_curve(t, target, &radii);
        let mut text = String::from("radius_m,Q_required,ell,mode_volume_m3\n");
        for (radius, point) in &curve {
            match point {
                Ok(p) => text.push_str(&format!(
                    "{},{},{},{}\n",
                    radius, p.q_required, p.ell, p.mode_volume
                )),
                Err(e) => text.push_str(&format!("# radius {radius}: {e}\n")),
            }
        }
        let name = format!("design_{}_{}.csv", slug(&t.id), target.label());
        outputs.push(write_atomic(&cli.out, &name, &text)?);
        println!("{name}");
    }
    write_manifest(
        &cli.out,
        "design",
        json!({
            "catalog_source": source,
            "target": target.label(),
            "ion": args.ion,
            "radius_min_m": rmin,
            "radius_max_m": rmax,
            "points": args.points,
        }),
        &outputs,
    )
}

fn cmd_throwcatch(cli: &Cli, args: &ThrowcatchArgs) -> Result<()> {
    let g = units::parse_rate(&args.g, cli.angular)?;
    let kappa = units::parse_rate(&args.kappa, cli.angular)?;
    let gamma = units::parse_rate(&args.gamma, cli.angular)?;
    let delay = units::parse_time(&args.delay)?;
    let sigma = match &args.sigma {
        Some(s) => units::parse_time(s)?,
        None => 10.0 / kappa,
    };
    let t0 = match &args.t0 {
        Some(s) => units::parse_time(s)?,
        None => args.truncation * sigma,
    };
    if !(args.truncation > 0.0) {
        return Err(Error::Usage("truncation must be positive".into()));
    }

    let shape = GaussianPulse::with_truncation(sigma, t0, args.truncation);
    let (start, end) = shape.window();
    if start < 0.0 {
        return Err(Error::Usage(format!(
            "pulse window starts at t = {start} < 0; increase --t0"
        )));
    }
    let cfg = ThrowCatchConfig {
        g,
        kappa,
        gamma,
        delay,
        dt: args.dt,
        synthesis: SynthesisOptions {
            omega_cap: args.omega_cap,
            ..Default::default()
        },
    };
    let tc = run_throw_catch(&shape, (0.0, end), &cfg)?;

    let mut csv = String::from(
        "t,node,alpha_re,alpha_im,phi12_re,phi12_im,phi13_re,phi13_im,omega,beta_re,beta_im\n",
    );
    let mut row = |t: f64, node: u8, s: &crate::dynamics::NodeState, om: f64, beta: Complex64| {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            t,
            node,
            s.alpha.re,
            s.alpha.im,
            s.phi12.re,
            s.phi12.im,
            s.phi13.re,
            s.phi13.im,
            om,
            beta.re,
            beta.im
        ));
    };
    for k in 0..tc.grid.len {
        let t = tc.grid.time(k);
        row(
            t,
            1,
            &tc.node1[k],
            tc.omega1.values[k],
            tc.beta_mid.values[k],
        );
    }
    for k in 0..tc.grid.len {
        let t = tc.grid.time(k) + tc.delay;
        row(
            t,
            2,
            &tc.node2[k],
            tc.omega2.values[k],
            tc.beta_out2.values[k],
        );
    }

    let summary = json!({
        "fidelity": tc.report.fidelity,
        "residual_flux": tc.report.residual_flux,
        "tail_truncation": tc.report.tail_truncation,
        "step": tc.report.step,
        "node1_residual": tc.report.node1_residual,
        "spontaneous_loss": tc.report.spontaneous_loss,
        "conservation_defect": tc.report.conservation_defect,
        "synthesis_l2_error": tc.report.synthesis_l2_error,
        "max_omega": tc.report.max_omega,
        "asymmetric_target": tc.report.asymmetric_target,
        "parameters": {
            "g": g, "kappa": kappa, "gamma": gamma,
            "sigma": sigma, "t0": t0, "truncation": args.truncation,
            "delay": delay, "dt": tc.report.step,
            "omega_cap": args.omega_cap,
        },
    });
    let mut outputs = vec![
        write_atomic(&cli.out, "trajectory.csv", &csv)?,
        write_atomic(
            &cli.out,
            "summary.json",
            &format!("{}\n", serde_json::to_string_pretty(&summary).unwrap()),
        )?,
    ];
    outputs.sort();

    println!("fidelity            : {:.6}", tc.report.fidelity);
    println!("residual flux       : {:.3e}", tc.report.residual_flux);
    println!("node-1 residual     : {:.3e}", tc.report.node1_residual);
    println!(
        "conservation defect : {:.3e}",
        tc.report.conservation_defect
    );
    println!("step                : {:.6e}", tc.report.step);

    write_manifest(
        &cli.out,
        "throwcatch",
        json!({
            "g": g, "kappa": kappa, "gamma": gamma,
            "sigma": sigma, "t0": t0, "truncation": args.truncation,
            "delay": delay, "dt_requested": args.dt, "dt": tc.report.step,
            "omega_cap": args.omega_cap,
            "angular": cli.angular,
        }),
        &outputs,
    )
}

fn cmd_spectrum(cli: &Cli, args: &SpectrumArgs) -> Result<()> {
    let g = units::parse_rate(&args.g, cli.angular)?;
    let kappa = units::parse_rate(&args.kappa, cli.angular)?;
    let gamma = units::parse_rate(&args.gamma, cli.angular)?;
    let dmin = units::parse_rate(&args.delta_min, cli.angular)?;
    let dmax = units::parse_rate(&args.delta_max, cli.angular)?;
    if !(dmax > dmin) || args.points < 2 {
        return Err(Error::Usage(
            "need delta_max > delta_min and at least 2 points".into(),
        ));
    }
    let mut sys = ResponseSystem::new(g, kappa, gamma);
    if args.no_atom {
        sys.atom_present = false;
    }
    sys.validate()?;

    let deltas = wgm::linear_grid(dmin, dmax, args.points);
    let spec = spectrum(&sys, &deltas);
    let unwrapped = unwrap_phases(&spec.iter().map(|p| p.phase).collect::<Vec<_>>());

    let mut csv = String::from("delta_rad_s,r_re,r_im,phase_unwrapped,emission_prob\n");
    for (pt, ph) in spec.iter().zip(&unwrapped) {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            pt.delta, pt.r.re, pt.r.im, ph, pt.emission_prob
        ));
    }
    let outputs = vec![write_atomic(&cli.out, "spectrum.csv", &csv)?];

    let at_zero = crate::response::response_at(&sys, 0.0);
    println!("C = 2g^2/(kappa gamma) : {:.6e}", sys.cooperativity());
    println!(
        "r(0)                   : {:.6e} {:+.6e}i",
        at_zero.r.re, at_zero.r.im
    );
    println!("|e(0)|^2               : {:.6e}", at_zero.emission_prob);

    write_manifest(
        &cli.out,
        "spectrum",
        json!({
            "g": g, "kappa": kappa, "gamma": gamma,
            "atom_present": !args.no_atom,
            "delta_min": dmin, "delta_max": dmax, "points": args.points,
            "angular": cli.angular,
        }),
        &outputs,
    )
}

fn cmd_fid(cli: &Cli, args: &FidArgs) -> Result<()> {
    let g = units::parse_rate(&args.g, cli.angular)?;
    let kappa = units::parse_rate(&args.kappa, cli.angular)?;
    let gamma = units::parse_rate(&args.gamma, cli.angular)?;
    let mut sys = ResponseSystem::new(g, kappa, gamma);
    if args.no_atom {
        sys.atom_present = false;
    }
    sys.validate()?;

    let grid_dt = std::f64::consts::TAU / (FID_EXTENT_KAPPAS * kappa);
    let sigma = match &args.probe_sigma {
        Some(s) => units::parse_time(s)?,
        None => 5.0 * grid_dt,
    };
    let t0 = match &args.probe_t0 {
        Some(s) => units::parse_time(s)?,
        None => 10.0 * sigma,
    };
    let probe_shape = GaussianPulse::new(sigma, t0);
    let probe_len = ((t0 + 6.0 * sigma) / grid_dt).ceil() as usize + 1;
    let probe = Pulse::from_shape(TimeGrid::new(0.0, grid_dt, probe_len.max(2)), &probe_shape);

    let res = fid_signal(&sys, &probe)?;

    let mut csv = String::from("t,out_re,out_im,abs\n");
    for (k, v) in res.output.values.iter().enumerate() {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            res.output.grid.time(k),
            v.re,
            v.im,
            v.norm()
        ));
    }
    let outputs = vec![write_atomic(&cli.out, "fid.csv", &csv)?];

    println!("grid points          : {}", res.n_points);
    println!("grid extent          : {:.6e} rad/s", res.extent);
    println!("grid resolution      : {:.6e} rad/s", res.resolution);
    println!(
        "expected tail rate   : {:.6e} rad/s (g^2/kappa + gamma/2)",
        g * g / kappa + 0.5 * gamma
    );

    write_manifest(
        &cli.out,
        "fid",
        json!({
            "g": g, "kappa": kappa, "gamma": gamma,
            "atom_present": !args.no_atom,
            "probe_sigma": sigma, "probe_t0": t0,
            "grid_extent": res.extent, "grid_resolution": res.resolution,
            "grid_points": res.n_points,
            "angular": cli.angular,
        }),
        &outputs,
    )
}
