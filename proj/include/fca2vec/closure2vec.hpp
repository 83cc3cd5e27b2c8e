#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fca2vec/context.hpp"
#include "fca2vec/nn.hpp"

namespace fca2vec {

enum class PairDistance { Euclidean, Cosine };

const char* pair_distance_name(PairDistance d);
PairDistance pair_distance_from_name(const std::string& s);

// Euclidean distance or cosine distance (1 - cosine similarity). Zero-norm
// inputs under cosine are treated as maximally dissimilar (similarity 0).
double vector_distance(PairDistance delta, const Vec& a, const Vec& b);

// 0/1 encoding of an attribute set.
Vec encode_attrset(const AttrSet& b);

// One training triple: y differs from x in exactly one attribute, z is the
// closure Hamming distance of the pair normalized by |M|.
struct ChdSample {
    AttrSet x;
    AttrSet y;
    double z;
};

// Samples from every attribute subset of size <= t: for each such X, one
// uniformly drawn attribute m gives Y = X symmetric-difference {m}. t is
// clamped to |M| (with a note on stderr) when larger.
std::vector<ChdSample> generate_chd_samples(const FormalContext& ctx, int t, std::uint64_t seed);

void save_chd_samples(const std::vector<ChdSample>& samples, const std::string& path);
std::vector<ChdSample> load_chd_samples(int n_attributes, const std::string& path);

// Two identical-parameter branches over a shared trunk
// |M| -> |G| -> |M| -> d (affine+relu each); the model output for a pair is
// the distance between the two branch embeddings.
struct SiameseModel {
    DenseNet trunk;
    PairDistance delta = PairDistance::Euclidean;
    int dim() const { return trunk.output_width(); }
};

enum class TargetTransform {
    Auto,     // squared for euclidean, plain for cosine
    Plain,
    Squared,
};

struct Closure2VecConfig {
    int d = 2;
    PairDistance delta = PairDistance::Euclidean;
    TargetTransform target = TargetTransform::Auto;
    int epochs = 5;
    double lr0 = 0.001;
    int batch_size = 32;
    std::uint64_t seed = 0;
};

bool squared_targets(const Closure2VecConfig& cfg);

struct SiameseTrainResult {
    SiameseModel model;
    std::vector<double> epoch_loss;  // mean squared error per epoch
};

// Minimizes (distance(branch(x), branch(y)) - target)^2 by mini-batch SGD
// with a constant learning rate; gradients from both branches accumulate into
// the shared parameters. Deterministic under cfg.seed.
SiameseTrainResult train_closure2vec(const FormalContext& ctx,
                                     const std::vector<ChdSample>& samples,
                                     const Closure2VecConfig& cfg);

Vec embed_attrset(const SiameseModel& model, const AttrSet& b);
double pair_distance(const SiameseModel& model, const AttrSet& a, const AttrSet& b);

// Embedding dump: set-hex<TAB>v1<TAB>...<TAB>vd per line.
void save_attrset_embeddings(const SiameseModel& model, const std::vector<AttrSet>& sets,
                             const std::string& path);

}  // namespace fca2vec
