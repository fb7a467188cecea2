//! Seeded random instance generator for tests and the `gen` command.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Bus, Injector, InjectorKind, Line, Network};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sampling knobs. Every sampled value is rounded to two decimals.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomNetworkConfig {
    pub susceptance: (f64, f64),
    pub limit_probability: f64,
    pub flow_limit: (f64, f64),
    pub demand_probability: f64,
    pub demand: (f64, f64),
    pub generator_probability: f64,
    pub generator_cost: (f64, f64),
    pub generator_capacity: (f64, f64),
    pub load_probability: f64,
    pub load_bid: (f64, f64),
    pub load_capacity: (f64, f64),
}

impl Default for RandomNetworkConfig {
    fn default() -> Self {
        RandomNetworkConfig {
            susceptance: (0.5, 5.0),
            limit_probability: 0.4,
            flow_limit: (10.0, 80.0),
            demand_probability: 0.6,
            demand: (10.0, 100.0),
            generator_probability: 0.6,
            generator_cost: (0.0, 100.0),
            generator_capacity: (20.0, 150.0),
            load_probability: 0.15,
            load_bid: (50.0, 150.0),
            load_capacity: (5.0, 30.0),
        }
    }
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    (rng.gen_range(lo..=hi) * 100.0).round() / 100.0
}

impl RandomNetworkConfig {
    /// Connected meshed network on `n` buses. Deterministic in `seed`.
    pub fn generate<T: Scalar>(&self, seed: u64, n: usize, edge_prob: f64) -> Result<Network<T>> {
        if n < 3 {
            return Err(Error::InvalidNetwork(format!("random network needs n >= 3, got {n}")));
        }
        if !(edge_prob > 0.0 && edge_prob <= 1.0) {
            return Err(Error::InvalidNetwork(format!("edge probability {edge_prob} outside (0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs = loop {
            // random spanning tree, then independent extra edges
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut adjacent = vec![vec![false; n]; n];
            let mut pairs = Vec::new();
            for k in 1..n {
                let (u, v) = (order[k], order[rng.gen_range(0..k)]);
                adjacent[u][v] = true;
                adjacent[v][u] = true;
                pairs.push((u.min(v), u.max(v)));
            }
            for u in 0..n {
                for v in u + 1..n {
                    if !adjacent[u][v] && rng.gen_bool(edge_prob) {
                        pairs.push((u, v));
                    }
                }
            }
            if pairs.len() >= n {
                pairs.sort_unstable();
                break pairs;
            }
        };
        let lines: Vec<Line<f64>> = pairs
            .into_iter()
            .map(|(from, to)| {
                let susceptance = draw(&mut rng, self.susceptance);
                let flow_limit = rng.gen_bool(self.limit_probability).then(|| draw(&mut rng, self.flow_limit));
                Line { from, to, susceptance, flow_limit }
            })
            .collect();

        let mut buses: Vec<Bus<f64>> = (0..n)
            .map(|id| {
                let fixed_demand =
                    if rng.gen_bool(self.demand_probability) { draw(&mut rng, self.demand) } else { 0.0 };
                Bus { id, fixed_demand }
            })
            .collect();
        if buses.iter().all(|b| b.fixed_demand == 0.0) {
            let k = rng.gen_range(0..n);
            buses[k].fixed_demand = draw(&mut rng, self.demand);
        }

        let mut injectors = Vec::new();
        for bus in 0..n {
            if rng.gen_bool(self.generator_probability) {
                injectors.push(Injector {
                    bus,
                    kind: InjectorKind::Generator,
                    cost: draw(&mut rng, self.generator_cost),
                    p_min: 0.0,
                    p_max: draw(&mut rng, self.generator_capacity),
                });
            }
            if rng.gen_bool(self.load_probability) {
                injectors.push(Injector {
                    bus,
                    kind: InjectorKind::Load,
                    cost: draw(&mut rng, self.load_bid),
                    p_min: 0.0,
                    p_max: draw(&mut rng, self.load_capacity),
                });
            }
        }
        if !injectors.iter().any(|i| i.kind == InjectorKind::Generator) {
            let bus = rng.gen_range(0..n);
            let at = injectors.iter().position(|i| i.bus > bus).unwrap_or(injectors.len());
            injectors.insert(
                at,
                Injector {
                    bus,
                    kind: InjectorKind::Generator,
                    cost: draw(&mut rng, self.generator_cost),
                    p_min: 0.0,
                    p_max: draw(&mut rng, self.generator_capacity),
                },
            );
        }

        // capacity balancing: resample with a growing range until supply covers demand
        let demand: f64 = buses.iter().map(|b| b.fixed_demand).sum();
        let mut scale = 1.0;
        loop {
            let capacity: f64 =
                injectors.iter().filter(|i| i.kind == InjectorKind::Generator).map(|i| i.p_max).sum();
            if capacity >= demand {
                break;
            }
            scale *= 1.25;
            let range = (self.generator_capacity.0 * scale, self.generator_capacity.1 * scale);
            for inj in injectors.iter_mut().filter(|i| i.kind == InjectorKind::Generator) {
                inj.p_max = draw(&mut rng, range);
            }
        }

        Network::new(buses, lines, injectors).map(|net| net.cast())
    }
}

/// [`RandomNetworkConfig::generate`] with default sampling ranges.
pub fn generate_random_network<T: Scalar>(seed: u64, n: usize, edge_prob: f64) -> Result<Network<T>> {
    RandomNetworkConfig::default().generate(seed, n, edge_prob)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let a: Network<f64> = generate_random_network(1, 5, 0.5).unwrap();
        let b: Network<f64> = generate_random_network(1, 5, 0.5).unwrap();
        assert_eq!(a, b);
        let c: Network<f64> = generate_random_network(2, 5, 0.5).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn connected_and_meshed() {
        for seed in 0..50 {
            for &(n, p) in &[(3, 0.1), (7, 0.4), (20, 0.05)] {
                let net: Network<f64> = generate_random_network(seed, n, p).unwrap();
                assert_eq!(net.adjacency().components(), 1);
                assert!(net.lines().len() >= n, "seed {seed}: no cycle");
                let supply: f64 = net
                    .injectors()
                    .iter()
                    .filter(|i| i.kind == InjectorKind::Generator)
                    .map(|i| i.p_max)
                    .sum();
                assert!(supply >= net.total_demand());
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(generate_random_network::<f64>(0, 2, 0.5).is_err());
        assert!(generate_random_network::<f64>(0, 5, 0.0).is_err());
        assert!(generate_random_network::<f64>(0, 5, 1.5).is_err());
    }
}
