#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fca2vec/context.hpp"
#include "fca2vec/lattice.hpp"
#include "fca2vec/nn.hpp"

namespace fca2vec {

enum class Fc2VecArch { SkipGram, Cbow };

const char* fc2vec_arch_name(Fc2VecArch a);
Fc2VecArch fc2vec_arch_from_name(const std::string& s);

// One target object together with the rest of the extent it was drawn from.
struct TargetContextPair {
    int target = 0;      // object index, not contained in context_set
    ObjSet context_set;  // extent minus the target; never empty
};

// Pairs (a, A \ {a}) for every concept extent A with 1 < |A| < |G| and every
// a in A. The full extent G carries no information and is skipped, as are
// singletons. Order: concepts as given, targets ascending within an extent.
std::vector<TargetContextPair> target_context_pairs(const FormalContext& ctx,
                                                    const std::vector<Concept>& concepts);

// Skip-gram examples (one-hot target in, one-hot context object out), one per
// (target, context object) combination. Extent groups, the targets within a
// group, and the context objects within a pair are each visited in an order
// drawn from the seeded generator; examples of one pair stay adjacent unless
// global_shuffle additionally shuffles the flat list. Duplicates across
// concepts are preserved.
std::vector<std::pair<Vec, Vec>> sg_examples(const std::vector<TargetContextPair>& pairs,
                                             std::uint64_t seed, bool global_shuffle = false);

// CBoW examples: input = mean of the context one-hots, output = one-hot
// target; exactly one example per pair, pair order drawn from the seeded
// generator. Distinct pairs always yield distinct examples.
std::vector<std::pair<Vec, Vec>> cbow_examples(const std::vector<TargetContextPair>& pairs,
                                               std::uint64_t seed);

// Named embedding rows; values is row-major names.size() x d.
struct EmbeddingTable {
    std::vector<std::string> names;
    int d = 0;
    std::vector<double> values;

    Vec row(int i) const;
};

// TSV: entity_name<TAB>v1<TAB>...<TAB>vd. Names may not contain tabs.
void save_embedding_table(const EmbeddingTable& table, const std::string& path);
EmbeddingTable load_embedding_table(const std::string& path);

struct Fc2VecConfig {
    Fc2VecArch arch = Fc2VecArch::SkipGram;
    int d = 2;
    int epochs = 200;
    double lr0 = 1.0;  // linearly decayed to (almost) zero over all epochs
    std::uint64_t seed = 0;
    bool global_shuffle = false;  // skip-gram only
};

struct Fc2VecTrainResult {
    EmbeddingTable table;
    std::vector<double> epoch_loss;  // mean cross-entropy per epoch
    DenseNet net;                    // the trained two-matrix softmax net
};

// Trains the two-matrix softmax net (|G| -> d -> |G|, no biases) by SGD with
// cross-entropy, regenerating freshly shuffled examples every epoch; the
// returned rows are the input-matrix columns, one per object. Pass the
// context's concepts if already enumerated, else they are computed here.
// A context without any qualifying extent cannot be trained on.
Fc2VecTrainResult train_object2vec(const FormalContext& ctx, const Fc2VecConfig& cfg,
                                   const std::vector<Concept>* concepts = nullptr);

// Same on the transposed context: rows are attributes. concepts, if given,
// are the original context's (their extents/intents swap roles internally).
Fc2VecTrainResult train_attribute2vec(const FormalContext& ctx, const Fc2VecConfig& cfg,
                                      const std::vector<Concept>* concepts = nullptr);

}  // namespace fca2vec
