use lomse_core::{extract_profile, integrate_orbit, nonminimizing_verdict, seed_unstable, validate_params, OrbitOptions};

fn main() -> lomse_core::Result<()> {
    let params = validate_params(3, 2, 4)?;
    println!("phi0 = {}, stability = {:?}", params.phi0(), params.stability());

    let opts = OrbitOptions::default();
    let orbit = integrate_orbit(&params, seed_unstable(&params, 1e-8), 200.0, &opts)?;
    println!("terminal = {:?}, psi zeros = {}", orbit.terminal, orbit.psi_zero_count());

    let profile = extract_profile(&orbit, &params)?;
    let density = nonminimizing_verdict(&profile, &orbit, &params)?;
    println!("verdict = {:?}", density.verdict);
    Ok(())
}
