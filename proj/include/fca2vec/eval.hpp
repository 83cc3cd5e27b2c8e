#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fca2vec/closure2vec.hpp"
#include "fca2vec/context.hpp"
#include "fca2vec/fc2vec.hpp"
#include "fca2vec/lattice.hpp"

namespace fca2vec {

// ---------------------------------------------------------------------------
// Temporal co-authorship graph

struct TemporalSplit {
    int train_cutoff_year = 0;  // edges up to and including this year train
    int test_start_year = 0;    // inclusive window of prediction targets
    int test_end_year = 0;
};

// Undirected edge as (lo, hi) node indices with lo < hi.
using Edge = std::pair<int, int>;

struct CoauthorGraph {
    // Largest connected component of the up-to-cutoff graph, restricted to
    // attributes from the training window that still have members there.
    FormalContext training_context;
    std::vector<int> component_objects;  // original object indices, ascending
    std::vector<Edge> train_edges;       // component-local indices
    std::vector<Edge> test_positives;    // share a window attribute, no train edge
};

// Objects sharing an attribute are linked. Requires attribute years.
CoauthorGraph coauthor_graph(const FormalContext& ctx, const TemporalSplit& split);

// `count` distinct node pairs (lo < hi) outside `forbidden`, drawn uniformly;
// deterministic under seed. Throws when fewer than `count` such pairs exist.
std::vector<Edge> negative_sample_edges(int n_nodes, const std::vector<Edge>& forbidden,
                                        int count, std::uint64_t seed);

// Componentwise product of the two endpoint embeddings.
Vec edge_features(const EmbeddingTable& table, const Edge& e);

// ---------------------------------------------------------------------------
// L2-regularized logistic regression (liblinear-style objective
// 0.5 w.w + C sum log(1+exp(-y f)), unregularized intercept)

struct LogisticModel {
    Vec w;
    double b = 0.0;
    double c_chosen = 1.0;

    double predict_probability(const Vec& x) const;
    bool predict(const Vec& x) const { return predict_probability(x) > 0.5; }
};

inline const std::vector<double>& default_c_grid() {
    static const std::vector<double> grid = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2};
    return grid;
}

// C picked from the grid by stratified 5-fold cross-validated F1 on the
// training set (earliest grid entry wins ties), then refit on all data.
LogisticModel logistic_regression_train(const std::vector<Vec>& features,
                                        const std::vector<int>& labels,
                                        const std::vector<double>& c_grid,
                                        std::uint64_t seed);

struct PrF1 {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Precision/recall/F1 of the positive class; empty denominators give 0.
PrF1 binary_metrics(const std::vector<int>& truth, const std::vector<int>& predicted);

// ---------------------------------------------------------------------------
// Link prediction experiment

struct BinaryClassifierReport {
    std::vector<PrF1> rounds;
    double precision_mean = 0.0, precision_stdev = 0.0;
    double recall_mean = 0.0, recall_stdev = 0.0;
    double f1_mean = 0.0, f1_stdev = 0.0;
};

struct LinkPredictionConfig {
    Fc2VecArch arch = Fc2VecArch::Cbow;
    int d = 3;
    int rounds = 30;
    int epochs = 200;
    double lr0 = 1.0;
    bool untrained_baseline = false;  // keep the random init (chance-level reference)
    std::uint64_t seed = 0;
};

struct LinkPredictionResult {
    BinaryClassifierReport report;
    int component_size = 0;
    int train_examples = 0;  // balanced: 2x train edges
    int test_examples = 0;   // balanced: 2x test positives
};

// Per round: embed the training component, featurize balanced train/test edge
// sets, fit the classifier, score the held-out test set. The balanced edge
// sets are sampled once; only embedding and cross-validation reseed per round.
LinkPredictionResult link_prediction_experiment(const FormalContext& ctx,
                                                const TemporalSplit& split,
                                                const LinkPredictionConfig& cfg);

// ---------------------------------------------------------------------------
// k-means and attribute clustering

struct Clustering {
    std::vector<int> assignment;  // point index -> cluster id in [0,k)
    int k = 0;
};

struct KmeansResult {
    Clustering clustering;
    std::vector<Vec> centroids;
    double inertia = 0.0;
};

// kmeans++ seeding, Lloyd iterations to a fixpoint, best of 10 restarts.
KmeansResult kmeans(const std::vector<Vec>& points, int k, std::uint64_t seed);

// Fraction of implications whose attributes all live in one cluster.
// An empty implication list counts as 0 (with a note on stderr).
double intra_cluster_ratio(const std::vector<Implication>& base, const Clustering& clustering);

struct RatioStats {
    double mean = 0.0;
    double stdev = 0.0;
    std::vector<double> values;
};

// Intra-cluster ratios of `rounds` random clusterings with the same cluster
// cardinalities (attribute labels shuffled).
RatioStats random_clustering_baseline(const Clustering& clustering,
                                      const std::vector<Implication>& base, int rounds,
                                      std::uint64_t seed);

// k-means directly on the 0/1 object-incidence columns of the attributes.
Clustering naive_clustering(const FormalContext& ctx, int k, std::uint64_t seed);

struct ClusteringExperimentConfig {
    int d = 3;
    std::vector<int> k_set = {2, 5, 10};
    int rounds = 20;
    int epochs = 200;
    double lr0 = 1.0;
    int baseline_rounds = 50;
    std::uint64_t seed = 0;
};

struct ClusteringCell {
    Fc2VecArch arch = Fc2VecArch::SkipGram;
    int k = 0;
    RatioStats ratio;             // one value per round
    RatioStats random_baseline;   // pooled over rounds x baseline_rounds
    double max_cluster_mean = 0.0;
};

struct ClusteringExperimentResult {
    std::vector<int> k_set;
    std::vector<ClusteringCell> cells;  // SG cells for every k, then CBoW
    std::vector<double> naive_ratio;    // aligned with k_set
    long base_size = 0;
};

// Per round: attribute2vec under both architectures, k-means per k, ratio of
// the canonical base vs matched-size random baselines and the naive
// incidence-vector clustering.
ClusteringExperimentResult clustering_experiment(const FormalContext& ctx,
                                                 const ClusteringExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Distance structure around the trained pair-distance model

struct DistanceStats {
    std::string label;
    double mean = 0.0;
    double stdev = 0.0;
    long count = 0;
};

struct CoveringDistanceResult {
    DistanceStats cover;      // concept pairs in covering relation
    DistanceStats non_cover;  // sampled pairs not in covering relation
};

// Embeds every intent; cover pairs are exhausted, non-cover pairs sampled up
// to sample_cap (all of them when fewer exist).
CoveringDistanceResult covering_distance_experiment(const SiameseModel& model,
                                                    const ConceptLattice& lattice,
                                                    long sample_cap, std::uint64_t seed);

struct ImplicationDistanceResult {
    DistanceStats single_implied;      // premise vs each implied attribute
    DistanceStats single_non_implied;  // premise vs each attribute outside the closure
    DistanceStats implication;         // premise vs its closure
    DistanceStats non_implication;     // size-matched random premise/conclusion stand-ins
};

ImplicationDistanceResult implication_distance_experiment(const SiameseModel& model,
                                                          const std::vector<Implication>& base,
                                                          std::uint64_t seed);

// ---------------------------------------------------------------------------
// Scatter export

// CSV with header x,y[,z],label; labels must not contain commas, quotes, or
// line breaks. Points must share one width of 2 or 3.
void save_scatter_csv(const std::vector<Vec>& points, const std::vector<std::string>& labels,
                      const std::string& path);

}  // namespace fca2vec
