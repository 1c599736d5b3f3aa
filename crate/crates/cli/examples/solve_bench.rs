use std::time::Instant;
use locsearch::objective::Objective;
use locsearch::{q_reachable_neighborhood, NeighborhoodSpec, SupportSet};
use locsearch_cli::datasets::gen_ising;

fn main() {
    let ds = gen_ising(6, 3, 100, 200, 10, 4048).unwrap();
    let sys = ds.system(3).unwrap();
    let spec = NeighborhoodSpec::for_system(&sys, 1).unwrap();
    let obj = ds.objective().unwrap();
    let cfg = locsearch::SolverConfig::default();

    // Replay a greedy growth path, timing every candidate solve.
    let mut x = SupportSet::empty();
    let mut slowest: (f64, SupportSet) = (0.0, SupportSet::empty());
    let mut total = 0.0;
    let mut count = 0;
    for _ in 0..12 {
        let hood = q_reachable_neighborhood(&sys, &x, &spec).unwrap();
        let mut best: Option<(f64, SupportSet)> = None;
        for cand in hood {
            let t0 = Instant::now();
            let solve = obj.restricted_argmax(cand.members(), &cfg).unwrap();
            let dt = t0.elapsed().as_secs_f64() * 1e3;
            total += dt;
            count += 1;
            if dt > slowest.0 {
                slowest = (dt, cand.clone());
            }
            if best.as_ref().map_or(true, |(bv, _)| solve.value > *bv) {
                best = Some((solve.value, cand));
            }
        }
        match best {
            Some((_, next)) if next.len() >= x.len() => x = next,
            _ => break,
        }
    }
    println!("{count} solves, avg {:.2} ms, slowest {:.2} ms at {}", total / count as f64, slowest.0, slowest.1);
    // How many iterations does the slowest support take? Re-run with looser caps to see.
    for max_iters in [10usize, 50, 200, 500] {
        let c = locsearch::SolverConfig { tol: 1e-8, max_iters };
        let t0 = Instant::now();
        let s = obj.restricted_argmax(slowest.1.members(), &c).unwrap();
        let g = obj.grad(&s.w);
        let gnorm: f64 = slowest.1.iter().map(|j| g[j] * g[j]).sum::<f64>().sqrt();
        println!("max_iters {max_iters}: {:.2} ms, value {:.6}, |g| {:.2e}", t0.elapsed().as_secs_f64() * 1e3, s.value, gnorm);
    }
}
