#include "fca2vec/fc2vec.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fca2vec/util.hpp"

namespace fca2vec {

const char* fc2vec_arch_name(Fc2VecArch a) {
    return a == Fc2VecArch::SkipGram ? "sg" : "cbow";
}

Fc2VecArch fc2vec_arch_from_name(const std::string& s) {
    if (s == "sg") return Fc2VecArch::SkipGram;
    if (s == "cbow") return Fc2VecArch::Cbow;
    throw std::invalid_argument("unknown architecture: " + s);
}

std::vector<TargetContextPair> target_context_pairs(const FormalContext& ctx,
                                                    const std::vector<Concept>& concepts) {
    const int n_g = ctx.object_count();
    std::vector<TargetContextPair> pairs;
    for (const Concept& c : concepts) {
        if (c.extent.width() != n_g)
            throw std::invalid_argument("concept extent width does not match context");
        int size = c.extent.count();
        if (size <= 1 || size >= n_g) continue;
        c.extent.for_each_set([&](int t) {
            ObjSet rest = c.extent;
            rest.reset(t);
            pairs.push_back({t, std::move(rest)});
        });
    }
    return pairs;
}

namespace {

// Consecutive pairs from one extent form a group; the extent is recoverable
// as context_set plus the target.
std::vector<std::vector<std::size_t>> group_by_extent(const std::vector<TargetContextPair>& pairs,
                                                      int width) {
    std::vector<std::vector<std::size_t>> groups;
    ObjSet prev(width);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const TargetContextPair& p = pairs[i];
        if (p.context_set.width() != width)
            throw std::invalid_argument("inconsistent pair widths");
        if (p.target < 0 || p.target >= width || p.context_set.test(p.target) ||
            p.context_set.none())
            throw std::invalid_argument("malformed target/context pair");
        ObjSet extent = p.context_set;
        extent.set(p.target);
        if (groups.empty() || !(extent == prev)) groups.emplace_back();
        groups.back().push_back(i);
        prev = std::move(extent);
    }
    return groups;
}

Vec unit_vec(int i, int n) { return one_hot(i + 1, n); }

}  // namespace

std::vector<std::pair<Vec, Vec>> sg_examples(const std::vector<TargetContextPair>& pairs,
                                             std::uint64_t seed, bool global_shuffle) {
    std::vector<std::pair<Vec, Vec>> out;
    if (pairs.empty()) return out;
    const int n = pairs.front().context_set.width();
    auto groups = group_by_extent(pairs, n);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> group_order(groups.size());
    for (std::size_t i = 0; i < group_order.size(); ++i) group_order[i] = i;
    std::shuffle(group_order.begin(), group_order.end(), rng);

    std::vector<int> ctx_objs;
    for (std::size_t gi : group_order) {
        std::vector<std::size_t> members = groups[gi];
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t pi : members) {
            const TargetContextPair& p = pairs[pi];
            ctx_objs.clear();
            p.context_set.for_each_set([&](int c) { ctx_objs.push_back(c); });
            std::shuffle(ctx_objs.begin(), ctx_objs.end(), rng);
            Vec target = unit_vec(p.target, n);
            for (int c : ctx_objs) out.emplace_back(target, unit_vec(c, n));
        }
    }
    if (global_shuffle) std::shuffle(out.begin(), out.end(), rng);
    return out;
}

std::vector<std::pair<Vec, Vec>> cbow_examples(const std::vector<TargetContextPair>& pairs,
                                               std::uint64_t seed) {
    std::vector<std::pair<Vec, Vec>> out;
    if (pairs.empty()) return out;
    const int n = pairs.front().context_set.width();
    auto groups = group_by_extent(pairs, n);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> group_order(groups.size());
    for (std::size_t i = 0; i < group_order.size(); ++i) group_order[i] = i;
    std::shuffle(group_order.begin(), group_order.end(), rng);

    for (std::size_t gi : group_order) {
        std::vector<std::size_t> members = groups[gi];
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t pi : members) {
            const TargetContextPair& p = pairs[pi];
            double share = 1.0 / p.context_set.count();
            Vec input(n, 0.0);
            p.context_set.for_each_set([&](int c) { input[c] = share; });
            out.emplace_back(std::move(input), unit_vec(p.target, n));
        }
    }
    return out;
}

Vec EmbeddingTable::row(int i) const {
    if (i < 0 || static_cast<std::size_t>(i) >= names.size())
        throw std::out_of_range("embedding row index out of range");
    auto begin = values.begin() + static_cast<std::ptrdiff_t>(i) * d;
    return Vec(begin, begin + d);
}

void save_embedding_table(const EmbeddingTable& table, const std::string& path) {
    if (table.values.size() != table.names.size() * static_cast<std::size_t>(table.d))
        throw std::invalid_argument("embedding table shape mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < table.names.size(); ++i) {
        if (table.names[i].find('\t') != std::string::npos)
            throw std::invalid_argument("entity name contains a tab: " + table.names[i]);
        out << table.names[i];
        for (int r = 0; r < table.d; ++r)
            out << '\t' << format_double(table.values[i * table.d + r]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

EmbeddingTable load_embedding_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    EmbeddingTable table;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() < 2) throw ParseError(path, lineno, "expected name and values");
        if (fields[0].empty()) throw ParseError(path, lineno, "empty entity name");
        if (!seen.insert(fields[0]).second)
            throw ParseError(path, lineno, "duplicate entity name: " + fields[0]);
        int d_here = static_cast<int>(fields.size()) - 1;
        if (table.names.empty())
            table.d = d_here;
        else if (d_here != table.d)
            throw ParseError(path, lineno, "inconsistent value count");
        table.names.push_back(fields[0]);
        for (int r = 1; r <= table.d; ++r) {
            try {
                std::size_t pos = 0;
                double v = std::stod(fields[r], &pos);
                if (pos != fields[r].size())
                    throw std::invalid_argument("malformed number: " + fields[r]);
                table.values.push_back(v);
            } catch (const std::invalid_argument& e) {
                throw ParseError(path, lineno, e.what());
            } catch (const std::out_of_range& e) {
                throw ParseError(path, lineno, e.what());
            }
        }
    }
    if (table.names.empty()) throw ParseError(path, lineno, "empty embedding table");
    return table;
}

Fc2VecTrainResult train_object2vec(const FormalContext& ctx, const Fc2VecConfig& cfg,
                                   const std::vector<Concept>* concepts) {
    if (cfg.d < 1) throw std::invalid_argument("embedding dimension must be >= 1");
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (cfg.lr0 < 0.0) throw std::invalid_argument("lr0 must be >= 0");

    std::vector<Concept> local;
    if (!concepts) {
        local = enumerate_concepts(ctx);
        concepts = &local;
    }
    auto pairs = target_context_pairs(ctx, *concepts);
    if (pairs.empty())
        throw std::runtime_error(
            "nothing to train on: no concept extent with 1 < |extent| < |objects|");

    const int n = ctx.object_count();
    DenseNet net = make_net(
        n, {{cfg.d, Activation::Identity, false}, {n, Activation::Softmax, false}});
    init_weights(net, derive_seed(cfg.seed, "fc2vec-init"));

    // Per-epoch example count does not depend on the shuffles.
    long per_epoch = 0;
    if (cfg.arch == Fc2VecArch::SkipGram)
        for (const TargetContextPair& p : pairs) per_epoch += p.context_set.count();
    else
        per_epoch = static_cast<long>(pairs.size());

    TrainConfig tc;
    tc.epochs = 1;
    tc.lr0 = cfg.lr0;
    tc.lr_schedule = LrSchedule::LinearDecayToZero;
    tc.batch_size = 1;
    tc.loss = Loss::CrossEntropy;
    tc.shuffle = false;  // the example generators own the ordering
    tc.total_steps_override = static_cast<long>(cfg.epochs) * per_epoch;

    Fc2VecTrainResult result;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::uint64_t es = derive_seed(cfg.seed, "fc2vec-epoch-" + std::to_string(epoch));
        auto examples = cfg.arch == Fc2VecArch::SkipGram
                            ? sg_examples(pairs, es, cfg.global_shuffle)
                            : cbow_examples(pairs, es);
        tc.step_offset = static_cast<long>(epoch - 1) * per_epoch;
        TrainResult tr = train(net, examples, tc);
        result.epoch_loss.push_back(tr.epoch_loss.at(0));
    }

    result.table.d = cfg.d;
    result.table.names = ctx.objects();
    result.table.values.assign(static_cast<std::size_t>(n) * cfg.d, 0.0);
    const Layer& input_layer = net.layers.front();
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < cfg.d; ++r)
            result.table.values[static_cast<std::size_t>(i) * cfg.d + r] =
                input_layer.w[static_cast<std::size_t>(r) * n + i];
    result.net = std::move(net);
    return result;
}

Fc2VecTrainResult train_attribute2vec(const FormalContext& ctx, const Fc2VecConfig& cfg,
                                      const std::vector<Concept>* concepts) {
    FormalContext dual = dualize(ctx);
    if (!concepts) return train_object2vec(dual, cfg, nullptr);
    // Swapping the components of every concept yields the dual's concepts;
    // ascending intent value order is exactly the enumeration order.
    std::vector<Concept> dual_concepts;
    dual_concepts.reserve(concepts->size());
    for (const Concept& c : *concepts) dual_concepts.push_back({c.intent, c.extent});
    std::sort(dual_concepts.begin(), dual_concepts.end(), [](const Concept& a, const Concept& b) {
        return Bitset::value_less(a.intent, b.intent);
    });
    return train_object2vec(dual, cfg, &dual_concepts);
}

}  // namespace fca2vec
