#pragma once

#include <cstdint>
#include <optional>

#include "fca2vec/context.hpp"
#include "fca2vec/nn.hpp"

namespace fca2vec {

// Two-layer threshold network computing B -> B'' exactly. Weights are 0 for
// incident (object, attribute) pairs and -1 otherwise; the second layer is
// the transpose. The threshold activation maps 0 to 1 and negatives to 0, so
// the hidden layer encodes B' and the output encodes B''. Arithmetic stays on
// integers via bit tests; no floating point is involved.
struct ClosureNet {
    // Bit m of neg_in[g] set means first-layer weight (g, m) is -1.
    std::vector<AttrSet> neg_in;
    // Bit g of neg_out[m] set means second-layer weight (m, g) is -1.
    std::vector<ObjSet> neg_out;
    int object_count() const { return static_cast<int>(neg_in.size()); }
    int attribute_count() const { return static_cast<int>(neg_out.size()); }
};

ClosureNet build_closure_net(const FormalContext& ctx);

// Hidden-layer encoding for an input attribute set (B' for an unmutated net).
ObjSet closure_net_hidden(const ClosureNet& net, const AttrSet& input);

// Full forward pass (B'' for an unmutated net).
AttrSet closure_net_forward(const ClosureNet& net, const AttrSet& input);

// Mutation hook for verification tests: toggles one weight between 0 and -1.
// layer 0 is the |M| -> |G| map, layer 1 the |G| -> |M| map.
void flip_weight(ClosureNet& net, int layer, int obj, int attr);

struct VerifyResult {
    bool ok = true;
    bool exhaustive = true;
    std::size_t tested = 0;
    // Input whose hidden layer or output disagrees with the derivation
    // operators, when ok is false.
    std::optional<AttrSet> counterexample;
};

// Checks hidden = B' and output = B'' against the context. Exhaustive over
// all subsets when |M| <= 20, otherwise over `samples` random subsets (the
// empty and full sets are always included).
VerifyResult verify_closure_net(const FormalContext& ctx, const ClosureNet& net,
                                std::size_t samples = 10000, std::uint64_t seed = 0);

// Max absolute residual of the least-squares affine map from [1 enc(B)] to
// enc(B'') over all subsets B. Strictly positive whenever no affine map can
// represent the closure; ~0 when the closure is the identity. Requires
// |M| <= 12 (exhaustive design matrix). Normal equations with ridge 1e-10.
double best_affine_fit_residual(const FormalContext& ctx);

// Float rendition with threshold01 activations, e.g. for checkpoint export.
// The resulting net is frozen (not trainable).
DenseNet closure_net_to_dense(const ClosureNet& net);

}  // namespace fca2vec
