use frobtest::community::{
    label_agreement, select_common_k, sequential_common_k, spectral_partition, ResidualSpectralTest,
};
use frobtest::graph::{sample_sbm, BlockProbabilityMatrix, CommunityPartition};
use frobtest::pipeline::correlation_from_series;
use frobtest::rng::RandomSeed;
use rand::Rng;
use rand_distr::StandardNormal;

#[test]
fn spectral_recovers_planted_blocks() {
    let truth = BlockProbabilityMatrix::planted(2, 0.5, 0.05).unwrap();
    let planted = CommunityPartition::from_sizes(&[50, 50]).unwrap();
    let mut total = 0.0;
    for trial in 0..100 {
        let a = sample_sbm(&truth, &planted, &RandomSeed::new(trial)).unwrap();
        let found = spectral_partition(&a, 2, &RandomSeed::new(1000 + trial)).unwrap();
        total += label_agreement(&planted, &found).unwrap();
    }
    let mean = total / 100.0;
    assert!(mean >= 0.95, "mean agreement {mean}");
}

#[test]
fn separated_two_block_graphs_select_two() {
    let truth = BlockProbabilityMatrix::planted(2, 0.5, 0.02).unwrap();
    let planted = CommunityPartition::balanced(60, 2).unwrap();
    let nets: Vec<_> = (0..3)
        .map(|s| sample_sbm(&truth, &planted, &RandomSeed::new(40 + s)).unwrap())
        .collect();
    let sel = select_common_k(&nets, 4, &ResidualSpectralTest::default(), &RandomSeed::new(7)).unwrap();
    assert_eq!(sel.k, 2, "{:?}", sel.rounds);
}

#[test]
fn detected_k_grows_with_separation() {
    let planted = CommunityPartition::balanced(60, 2).unwrap();
    let mean_k = |p: f64, q: f64| -> f64 {
        let truth = BlockProbabilityMatrix::planted(2, p, q).unwrap();
        let total: usize = (0..10u64)
            .map(|r| {
                let nets: Vec<_> = (0..2)
                    .map(|s| sample_sbm(&truth, &planted, &RandomSeed::new(r * 10 + s)).unwrap())
                    .collect();
                sequential_common_k(&nets, 3, &RandomSeed::new(500 + r)).unwrap()
            })
            .sum();
        total as f64 / 10.0
    };
    let weak = mean_k(0.28, 0.25);
    let strong = mean_k(0.5, 0.05);
    assert!(weak <= strong, "weak {weak}, strong {strong}");
    assert!(strong >= 1.8);
}

#[test]
fn planted_block_correlation_recovered() {
    let (rois, times, rho) = (24, 8, 0.8f64);
    let mut total = 0.0;
    for trial in 0..100 {
        let mut rng = RandomSeed::new(trial).rng();
        let factors: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..times).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
            .collect();
        let series: Vec<Vec<f64>> = (0..rois)
            .map(|i| {
                (0..times)
                    .map(|t| {
                        rho.sqrt() * factors[i / 12][t] + (1.0 - rho).sqrt() * rng.sample::<f64, _>(StandardNormal)
                    })
                    .collect()
            })
            .collect();
        let c = correlation_from_series(&series).unwrap();
        let mut sum = 0.0;
        let mut count = 0;
        for i in 0..rois {
            for j in (i + 1)..rois {
                if i / 12 == j / 12 {
                    sum += c.get(i, j);
                    count += 1;
                }
            }
        }
        total += sum / count as f64;
    }
    let mean = total / 100.0;
    assert!((mean - rho).abs() < 0.1, "mean within-block correlation {mean}");
}
