#include "fca2vec/lattice.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "fca2vec/threads.hpp"

namespace fca2vec {

namespace {

constexpr std::size_t kProgressStride = 4096;

void report(const ProgressFn& progress, std::size_t n) {
    if (progress && (n % kProgressStride == 0)) progress(n);
}

}  // namespace

std::vector<Concept> enumerate_concepts(const FormalContext& ctx, const ProgressFn& progress) {
    const int n_m = ctx.attribute_count();
    const int n_g = ctx.object_count();
    const ObjSet all_objs = ObjSet::full(n_g);
    const AttrSet all_attrs = AttrSet::full(n_m);

    std::vector<Concept> out;
    AttrSet intent = derive_attrs(ctx, all_objs);  // closure of the empty attribute set
    ObjSet extent = all_objs;

    // suffix_extent[i] = extent of (current intent restricted to indices >= i);
    // suffix_extent[n_m] corresponds to the empty set.
    std::vector<ObjSet> suffix_extent(n_m + 1, all_objs);

    while (true) {
        out.push_back({extent, intent});
        report(progress, out.size());
        if (intent == all_attrs) break;

        for (int j = n_m - 1; j >= 0; --j) {
            suffix_extent[j] = suffix_extent[j + 1];
            if (intent.test(j)) suffix_extent[j] &= ctx.col(j);
        }

        bool advanced = false;
        for (int i = 0; i < n_m && !advanced; ++i) {
            if (intent.test(i)) continue;
            ObjSet cand_extent = suffix_extent[i + 1];
            cand_extent &= ctx.col(i);
            // The candidate closure is canonical iff it adds no attribute
            // above i outside the current intent; such an attribute m is
            // added exactly when the candidate extent lies inside col(m).
            bool canonical = true;
            for (int m = i + 1; m < n_m && canonical; ++m)
                if (!intent.test(m) && ctx.col(m).contains(cand_extent)) canonical = false;
            if (!canonical) continue;
            extent = cand_extent;
            intent = derive_attrs(ctx, extent);
            advanced = true;
        }
        if (!advanced)
            throw std::logic_error("enumerate_concepts: no successor before reaching M");
    }
    if (progress) progress(out.size());
    return out;
}

int concept_index_of_intent(const std::vector<Concept>& concepts, const AttrSet& intent) {
    auto it = std::lower_bound(
        concepts.begin(), concepts.end(), intent,
        [](const Concept& c, const AttrSet& key) { return Bitset::value_less(c.intent, key); });
    if (it == concepts.end() || it->intent != intent) return -1;
    return static_cast<int>(it - concepts.begin());
}

std::vector<CoverEdge> covering_relation(const FormalContext& ctx,
                                         const std::vector<Concept>& concepts, int threads) {
    if (concepts.empty()) throw std::invalid_argument("covering_relation: empty concept list");
    for (const Concept& c : concepts) {
        if (c.extent.width() != ctx.object_count() || c.intent.width() != ctx.attribute_count())
            throw std::invalid_argument("covering_relation: concept widths do not match context");
    }
    for (std::size_t k = 1; k < concepts.size(); ++k)
        if (!Bitset::value_less(concepts[k - 1].intent, concepts[k].intent))
            throw std::invalid_argument(
                "covering_relation: concepts must be duplicate-free and sorted by intent value");

    const int n_m = ctx.attribute_count();
    std::vector<std::vector<CoverEdge>> partial(std::max(threads, 1));

    // Lower neighbors of each concept, searched on the attribute side: adding
    // one attribute m to the intent and closing gives a candidate below; the
    // shrinking `viable` set keeps exactly the minimal (covering) candidates.
    parallel_chunks(concepts.size(), threads, [&](std::size_t lo, std::size_t hi, int worker) {
        std::vector<CoverEdge>& edges = partial[worker];
        for (std::size_t ci = lo; ci < hi; ++ci) {
            const Concept& c = concepts[ci];
            AttrSet viable = c.intent.complement();
            for (int m = 0; m < n_m; ++m) {
                if (c.intent.test(m)) continue;
                ObjSet sub_extent = c.extent;
                sub_extent &= ctx.col(m);
                AttrSet sub_intent = derive_attrs(ctx, sub_extent);
                AttrSet added = sub_intent;
                added.subtract(c.intent);
                added.reset(m);
                if (!added.intersects(viable)) {
                    int li = concept_index_of_intent(concepts, sub_intent);
                    if (li < 0)
                        throw std::invalid_argument(
                            "covering_relation: concept list is not the complete lattice");
                    edges.emplace_back(li, static_cast<int>(ci));
                } else {
                    viable.reset(m);
                }
            }
        }
    });

    std::vector<CoverEdge> covers;
    for (auto& p : partial) covers.insert(covers.end(), p.begin(), p.end());
    std::sort(covers.begin(), covers.end());
    return covers;
}

ConceptLattice build_lattice(const FormalContext& ctx, int threads) {
    ConceptLattice lat;
    lat.concepts = enumerate_concepts(ctx);
    lat.covers = covering_relation(ctx, lat.concepts, threads);
    return lat;
}

AttrSet implication_closure(const std::vector<Implication>& base, const AttrSet& x) {
    AttrSet cur = x;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Implication& imp : base) {
            if (cur.contains(imp.premise) && !cur.contains(imp.conclusion)) {
                cur |= imp.conclusion;
                changed = true;
            }
        }
    }
    return cur;
}

std::vector<Implication> canonical_base(const FormalContext& ctx, const ProgressFn& progress) {
    const int n_m = ctx.attribute_count();
    const AttrSet all_attrs = AttrSet::full(n_m);
    std::vector<Implication> base;

    AttrSet a(n_m);
    std::size_t visited = 0;
    while (true) {
        AttrSet closed = closure_attrs(ctx, a);
        if (closed != a) base.push_back({a, closed});
        ++visited;
        report(progress, visited);
        if (a == all_attrs) break;

        bool advanced = false;
        for (int i = 0; i < n_m && !advanced; ++i) {
            if (a.test(i)) continue;
            AttrSet cand = a;
            cand.keep_above(i);
            cand.set(i);
            cand = implication_closure(base, cand);
            AttrSet cand_above = cand;
            cand_above.keep_above(i);
            AttrSet a_above = a;
            a_above.keep_above(i);
            if (cand_above == a_above) {
                a = cand;
                advanced = true;
            }
        }
        if (!advanced) throw std::logic_error("canonical_base: no successor before reaching M");
    }
    if (progress) progress(visited);
    return base;
}

bool concept_order_leq(const Concept& a, const Concept& b) { return b.extent.contains(a.extent); }

// ---------------------------------------------------------------------------
// Exports

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

void save_concepts_tsv(const std::vector<Concept>& concepts, const std::string& path) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < concepts.size(); ++i)
        out << i << '\t' << concepts[i].extent.to_hex() << '\t' << concepts[i].intent.to_hex()
            << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void save_covers_tsv(const std::vector<CoverEdge>& covers, const std::string& path) {
    auto out = open_out(path);
    for (const auto& [lower, upper] : covers) out << lower << '\t' << upper << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void save_base_text(const FormalContext& ctx, const std::vector<Implication>& base,
                    const std::string& path) {
    auto out = open_out(path);
    for (const Implication& imp : base) {
        bool first = true;
        imp.premise.for_each_set([&](int m) {
            if (!first) out << ' ';
            out << ctx.attribute_name(m);
            first = false;
        });
        out << " -> ";
        AttrSet added = imp.conclusion;
        added.subtract(imp.premise);
        first = true;
        added.for_each_set([&](int m) {
            if (!first) out << ' ';
            out << ctx.attribute_name(m);
            first = false;
        });
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fca2vec
