#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fca2vec/context.hpp"

namespace fca2vec {

// A formal concept: extent' = intent and intent' = extent.
struct Concept {
    ObjSet extent;
    AttrSet intent;
};

// Cover edge (lower, upper): indices into a concept list, lower covered by upper.
using CoverEdge = std::pair<int, int>;

struct ConceptLattice {
    std::vector<Concept> concepts;  // intents in lectic (ascending value) order
    std::vector<CoverEdge> covers;  // transitive reduction, sorted by (lower, upper)
};

// premise -> conclusion with the conclusion stored as the full closure of the
// premise (premise included).
struct Implication {
    AttrSet premise;
    AttrSet conclusion;
};

// Periodic progress callback; receives the number of items produced so far.
using ProgressFn = std::function<void(std::size_t)>;

// All formal concepts of ctx, each exactly once, intents ascending in value
// order (attribute 0 is the least significant bit). NextClosure enumeration.
std::vector<Concept> enumerate_concepts(const FormalContext& ctx,
                                        const ProgressFn& progress = {});

// Transitive reduction of the concept order (extent inclusion). `concepts`
// must be the complete concept set of ctx with intents in ascending value
// order and no duplicates; violations raise std::invalid_argument. The
// per-concept neighbor search runs on `threads` workers; the edge list is
// returned sorted by (lower, upper) regardless of thread count.
std::vector<CoverEdge> covering_relation(const FormalContext& ctx,
                                         const std::vector<Concept>& concepts, int threads = 1);

ConceptLattice build_lattice(const FormalContext& ctx, int threads = 1);

// Duquenne-Guigues canonical base: premises are exactly the pseudo-intents in
// ascending value order, conclusions their closures. Sound, complete, and of
// minimum cardinality among complete implication sets.
std::vector<Implication> canonical_base(const FormalContext& ctx,
                                        const ProgressFn& progress = {});

// (A1,B1) <= (A2,B2) iff A1 is a subset of A2.
bool concept_order_leq(const Concept& a, const Concept& b);

// Index of the concept with this intent via binary search over the sorted
// intent list; -1 if absent.
int concept_index_of_intent(const std::vector<Concept>& concepts, const AttrSet& intent);

// Forward chaining: smallest superset of x closed under every implication.
AttrSet implication_closure(const std::vector<Implication>& base, const AttrSet& x);

// Exports. No header rows; one record per line.
//   concepts: index<TAB>extent-hex<TAB>intent-hex
//   covers:   lower<TAB>upper
//   base:     premise names -> (conclusion minus premise) names, space-joined
void save_concepts_tsv(const std::vector<Concept>& concepts, const std::string& path);
void save_covers_tsv(const std::vector<CoverEdge>& covers, const std::string& path);
void save_base_text(const FormalContext& ctx, const std::vector<Implication>& base,
                    const std::string& path);

}  // namespace fca2vec
