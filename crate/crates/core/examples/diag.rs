// Scratch diagnostic for PSO convergence behavior. Not shipped.
use rostering::executor::ExecutorConfig;
use rostering::parse_instance;
use rostering::pso::{run_pso, PsoParams};

fn main() {
    let text = std::fs::read_to_string("instances/bcv_8_13_1.txt").unwrap();
    let instance = parse_instance(&text).unwrap();
    let exec = ExecutorConfig::default();
    let v_max: Option<f64> = std::env::args()
        .nth(1)
        .map(|s| s.parse().unwrap());
    for &particles in &[16usize, 32] {
        for seed in 0..6u64 {
            let params = PsoParams {
                particles,
                iterations: 1000,
                seed,
                v_max,
                ..PsoParams::default()
            };
            let r = run_pso(&instance, &params, &exec).unwrap();
            let h = &r.history;
            let last_improve = (1..h.len())
                .rev()
                .find(|&i| h[i] < h[i - 1])
                .unwrap_or(0);
            println!(
                "pop {:2} seed {}: best {:6} @100 {:6} @300 {:6} @600 {:6} last_improve {}",
                particles, seed, r.best_fitness, h[99], h[299], h[599], last_improve
            );
        }
    }
}
