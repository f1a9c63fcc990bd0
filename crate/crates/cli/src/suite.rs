//! Fixed instance suites for `monopart bench`.

use std::fmt;
use std::time::Instant;

use clap::ValueEnum;

use monopart::generate::{gen_coloring, GenMode};
use monopart::oracle::{min_partition_exact, ORACLE_CAP};
use monopart::{partition, verify_certificate, GraphFamily, PipelineParams};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    /// Four small runs.
    Smoke,
    /// 50 runs over n in {50,100,200,300}, p in {0.1,...,0.9} and three families.
    Pipeline,
    /// Small hosts with the exact oracle alongside.
    Oracle,
    /// Two-class split colorings, where no single copy spans.
    Split,
}

pub struct Row {
    pub n: usize,
    pub family: String,
    pub seed: u64,
    pub pieces: usize,
    pub oracle: Option<usize>,
    pub wall_ms: u128,
    pub verified: bool,
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let oracle = self.oracle.map_or("NA".to_string(), |o| o.to_string());
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.n, self.family, self.seed, self.pieces, oracle, self.wall_ms, self.verified
        )
    }
}

struct Instance {
    n: usize,
    mode: GenMode,
    family: GraphFamily,
}

fn instances(suite: Suite) -> anyhow::Result<Vec<Instance>> {
    let fams = [GraphFamily::paths(), GraphFamily::cycles(), GraphFamily::cycle_power(2)?];
    let ps = [0.1, 0.3, 0.5, 0.7, 0.9];
    Ok(match suite {
        Suite::Smoke => (0..4)
            .map(|i| Instance {
                n: [10, 30][i % 2],
                mode: GenMode::Random { p: 0.5 },
                family: fams[i % 2].clone(),
            })
            .collect(),
        Suite::Pipeline => (0..50)
            .map(|i| Instance {
                n: [50, 100, 200, 300][i % 4],
                mode: GenMode::Random { p: ps[i % 5] },
                family: fams[i % 3].clone(),
            })
            .collect(),
        Suite::Oracle => (0..20)
            .map(|i| Instance {
                n: 4 + i % 5,
                mode: GenMode::Random { p: 0.5 },
                family: [GraphFamily::matchings(), GraphFamily::cycles()][i % 2].clone(),
            })
            .collect(),
        Suite::Split => (0..12)
            .map(|i| Instance {
                n: [100, 200][i % 2],
                mode: GenMode::BipartiteSplit { s: [20, 30, 45][i % 3] },
                family: fams[i % 3].clone(),
            })
            .collect(),
    })
}

pub fn run(suite: Suite, seed: u64) -> anyhow::Result<Vec<Row>> {
    let mut rows = Vec::new();
    for (i, inst) in instances(suite)?.into_iter().enumerate() {
        let run_seed = monopart::seed::derive(seed, i as u64);
        let g = gen_coloring(inst.n, &inst.mode, run_seed)?.coloring;
        let fam = &inst.family;
        let start = Instant::now();
        let cert = partition(&g, fam, fam, &PipelineParams::with_seed(run_seed))?;
        let wall_ms = start.elapsed().as_millis();
        let verified = verify_certificate(&g, fam, fam, &cert).accepted();
        let oracle = if inst.n <= ORACLE_CAP && matches!(suite, Suite::Oracle) {
            Some(min_partition_exact(&g, fam, fam)?.0)
        } else {
            None
        };
        rows.push(Row {
            n: inst.n,
            family: fam.name().to_string(),
            seed: run_seed,
            pieces: cert.len(),
            oracle,
            wall_ms,
            verified,
        });
    }
    Ok(rows)
}
