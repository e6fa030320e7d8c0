// probe: deviation of Lorentzian-kernel solution from damped closed form
use detlab_core::numerics::{solve_volterra, TimeGrid, VolterraOptions};

fn main() {
    let pi = std::f64::consts::PI;
    for (gamma, omega_bar, span_factor) in [(0.1f64, 1.0f64, 5.0f64), (2.0, 1.0, 5.0)] {
        for cutoff in [1e3, 4e3, 1e4] {
            for dt in [0.01, 0.005] {
                let span = span_factor / gamma;
                let n = (span / dt).round() as usize + 1;
                let grid = TimeGrid::new(0.0, dt, n).unwrap();
                let c = 2.0 * gamma / pi; // mass 1
                let k = solve_volterra(
                    |s: f64| c * cutoff / (1.0 + cutoff * cutoff * s * s),
                    omega_bar * omega_bar,
                    1.0,
                    &grid,
                    &VolterraOptions::default(),
                )
                .unwrap();
                let mut worst = 0.0f64;
                let mut targ = 0.0;
                for (i, t) in grid.times().enumerate() {
                    let cf = if gamma < omega_bar {
                        let w = (omega_bar * omega_bar - gamma * gamma).sqrt();
                        (-gamma * t).exp() * (w * t).sin() / w
                    } else {
                        let w = (gamma * gamma - omega_bar * omega_bar).sqrt();
                        (-gamma * t).exp() * (w * t).sinh() / w
                    };
                    let d = (k.u[i] - cf).abs();
                    if d > worst { worst = d; targ = t; }
                }
                println!("gamma={gamma} cutoff={cutoff:.0e} dt={dt}: max|u-cf|={worst:.3e} at t={targ:.2}");
            }
        }
    }
}
