use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kgrec_core::baselines::{ProjectTopicMatrix, TopFilter};
use kgrec_core::classify::{ClassifierKind, ClassifierModel, TrainConfig, VectorizerModel};
use kgrec_core::eval::{augmentation_cases, run_experiment, ExperimentConfig, RelevanceSource, System};
use kgrec_core::recommend::Augmenter;
use kgrec_core::spread::{Kgrec, SeedSet};
use kgrec_core::synth::{planted_corpus, topic_world, PlantedConfig, TopicWorldConfig};
use kgrec_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn training(c: &mut Criterion) {
    let corpus = planted_corpus(&PlantedConfig { documents: 300, ..Default::default() });
    let vectorizer = VectorizerModel::fit(&corpus.records).unwrap();
    let mut group = c.benchmark_group("train_lr");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = TrainConfig { exec, ..Default::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                ClassifierModel::train(ClassifierKind::LogisticRegressionOvr, &corpus.records, &vectorizer, &cfg)
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn augmentation(c: &mut Criterion) {
    let world = topic_world(&TopicWorldConfig { projects: 2000, topics: 400, ..Default::default() });
    let kg = Kgrec::from_graph(&world.graph, 0.5, 0.5).unwrap();
    let seeds: Vec<SeedSet> = world
        .records
        .iter()
        .filter_map(|r| kg.seed_from_names(r.topics.iter().map(|t| (t.as_str(), 1.0))).ok())
        .collect();
    let topfilter = TopFilter::new(ProjectTopicMatrix::from_records(&world.records).unwrap());
    let queries: Vec<Vec<String>> = world.records.iter().map(|r| r.topics.clone()).collect();

    let mut group = c.benchmark_group("augment_batch");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("kgrec", name), |b| {
            b.iter(|| kg.augment_batch(black_box(&seeds), 5, exec))
        });
        group.bench_function(BenchmarkId::new("topfilter", name), |b| {
            b.iter(|| topfilter.recommend_batch(black_box(&queries), 5, exec))
        });
    }
    group.finish();

    let cases = augmentation_cases(&world.records, 0.5, 1);
    let kg_system = System::new("kgrec", |c| {
        let seeds: Vec<(String, f64)> = c.given.iter().map(|t| (t.clone(), 1.0)).collect();
        kg.augment_topics(&seeds, 5, &Default::default()).into_iter().map(|x| x.0).collect()
    });
    let tf_system = System::new("topfilter", |c| {
        topfilter
            .recommend_for_topics(c.given.iter().map(String::as_str), 5)
            .map(|r| r.ranked.into_iter().map(|x| x.0).collect())
            .unwrap_or_default()
    });
    let systems = [kg_system, tf_system];
    let mut group = c.benchmark_group("run_experiment");
    for (name, exec) in MODES {
        let cfg = ExperimentConfig { exec, ..Default::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_experiment(&systems, &cases, RelevanceSource::GroundTruth, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, training, augmentation);
criterion_main!(benches);
