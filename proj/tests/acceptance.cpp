// Acceptance gate: twelve end-to-end checks, one pass/fail line each.
//
// Checks that depend on external datasets (mushroom, wiki44k, the ICFCA
// co-authorship context) switch to those files automatically when they are
// placed under data/real/; otherwise they run on the bundled fixtures and
// say so in their output line. Oracles here are written independently of the
// library: closures by scanning explicit incidence rows, implication bases
// by testing the pseudo-closedness definition over all subsets.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fca2vec/closure2vec.hpp"
#include "fca2vec/context.hpp"
#include "fca2vec/eval.hpp"
#include "fca2vec/fc2vec.hpp"
#include "fca2vec/lattice.hpp"
#include "fca2vec/nn.hpp"
#include "fca2vec/rudolph.hpp"
#include "fca2vec/util.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using namespace fca2vec;

namespace {

const std::string kData = FCA2VEC_DATA_DIR;
const std::string kCli = FCA2VEC_CLI_PATH;

std::string data_path(const char* name) { return kData + "/" + name; }
std::string real_path(const char* name) { return kData + "/real/" + name; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// ---------------------------------------------------------------------------
// Independent oracle: explicit row scans and bitmask subsets, |M| <= 20.

struct RawCtx {
    int m = 0;
    std::vector<std::uint32_t> rows;  // bit k set = object has attribute k
};

RawCtx raw_of(const FormalContext& ctx) {
    RawCtx r;
    r.m = ctx.attribute_count();
    for (int g = 0; g < ctx.object_count(); ++g) {
        std::uint32_t mask = 0;
        for (int a = 0; a < r.m; ++a)
            if (ctx.row(g).test(a)) mask |= 1u << a;
        r.rows.push_back(mask);
    }
    return r;
}

std::uint32_t oracle_closure(const RawCtx& c, std::uint32_t b) {
    std::uint32_t full = c.m == 32 ? 0xffffffffu : (1u << c.m) - 1;
    std::uint32_t out = full;
    bool any = false;
    for (std::uint32_t row : c.rows)
        if ((row & b) == b) {
            out &= row;
            any = true;
        }
    return any ? out : full;
}

std::set<std::uint32_t> oracle_closed_sets(const RawCtx& c) {
    std::set<std::uint32_t> closed;
    for (std::uint32_t b = 0; b < (1u << c.m); ++b)
        if (oracle_closure(c, b) == b) closed.insert(b);
    return closed;
}

// Pseudo-closed sets by definition, found in ascending cardinality order so
// that every strictly contained candidate is already known.
std::vector<std::pair<std::uint32_t, std::uint32_t>> oracle_base(const RawCtx& c) {
    std::vector<std::uint32_t> by_size[33];
    for (std::uint32_t b = 0; b < (1u << c.m); ++b) by_size[__builtin_popcount(b)].push_back(b);
    std::vector<std::uint32_t> pseudos;
    for (int size = 0; size <= c.m; ++size)
        for (std::uint32_t b : by_size[size]) {
            if (oracle_closure(c, b) == b) continue;
            bool ok = true;
            for (std::uint32_t q : pseudos) {
                if (q != b && (q & b) == q && (oracle_closure(c, q) & ~b) != 0) {
                    ok = false;
                    break;
                }
            }
            if (ok) pseudos.push_back(b);
        }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> base;
    for (std::uint32_t p : pseudos) base.push_back({p, oracle_closure(c, p)});
    std::sort(base.begin(), base.end());
    return base;
}

std::uint32_t mask_of(const AttrSet& s) {
    std::uint32_t mask = 0;
    for (int a : s.to_indices()) mask |= 1u << a;
    return mask;
}

// ---------------------------------------------------------------------------
// Harness

struct Outcome {
    bool pass = false;
    std::string detail;
};

bool g_all_pass = true;

void run_check(int id, const std::string& title, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) g_all_pass = false;
    std::printf("%s  criterion %2d: %s%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
                o.detail.empty() ? "" : " -- ", o.detail.c_str());
    std::fflush(stdout);
}

// ---------------------------------------------------------------------------
// criterion 1: exact lattice counts on the bundled textbook-sized contexts

Outcome crit1() {
    auto t0 = std::chrono::steady_clock::now();
    FormalContext tiny = load_burmeister(data_path("tiny3x3.cxt"));
    auto concepts = enumerate_concepts(tiny);
    auto covers = covering_relation(tiny, concepts);
    auto base = canonical_base(tiny);
    RawCtx raw = raw_of(tiny);
    auto closed = oracle_closed_sets(raw);
    auto obase = oracle_base(raw);

    if (concepts.size() != 6) return {false, "tiny context: " + std::to_string(concepts.size()) + " concepts, want 6"};
    if (closed.size() != 6) return {false, "oracle disagrees on tiny concept count"};
    if (covers.size() != 7) return {false, "tiny context: " + std::to_string(covers.size()) + " cover edges, want 7"};
    if (base.size() != 1 || obase.size() != 1) return {false, "tiny base size != 1"};
    if (mask_of(base[0].premise) != obase[0].first || mask_of(base[0].conclusion) != obase[0].second)
        return {false, "tiny base implication differs from oracle"};
    if (mask_of(base[0].premise) != 0b001u || mask_of(base[0].conclusion) != 0b101u)
        return {false, "tiny base is not {first attr -> third attr}"};

    FormalContext lb = load_burmeister(data_path("livingbeings.cxt"));
    auto lb_concepts = enumerate_concepts(lb);
    auto lb_closed = oracle_closed_sets(raw_of(lb));
    if (lb_concepts.size() != 19)
        return {false, "living-beings: " + std::to_string(lb_concepts.size()) + " concepts, want 19"};
    if (lb_closed.size() != 19) return {false, "oracle disagrees on living-beings concept count"};

    double dt = seconds_since(t0);
    if (dt >= 1.0) return {false, "took " + fmt(dt) + " s, budget 1 s"};
    return {true, "6 concepts / 7 covers / 1 implication and 19 concepts, oracle-matched, " + fmt(dt) + " s"};
}

// criterion 2: mushroom reproduction, else concept/base oracle equivalence
// on 50 random 12x12 contexts

Outcome crit2() {
    std::string mushroom = real_path("agaricus-lepiota.data");
    if (fs::exists(mushroom)) {
        std::ifstream in(mushroom);
        NominalTable table;
        for (int i = 0; i < 23; ++i) table.columns.push_back("c" + std::to_string(i));
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::vector<std::string> row;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) row.push_back(cell);
            table.rows.push_back(std::move(row));
        }
        FormalContext ctx = scale_nominal(table, MissingPolicy::AsValue);
        if (ctx.object_count() == 8124 && ctx.attribute_count() == 119) {
            auto t0 = std::chrono::steady_clock::now();
            auto concepts = enumerate_concepts(ctx);
            double enum_s = seconds_since(t0);
            if (concepts.size() != 238710)
                return {false, "mushroom: " + std::to_string(concepts.size()) + " concepts, want 238710"};
            if (enum_s >= 900) return {false, "enumeration took " + fmt(enum_s, 1) + " s, budget 900 s"};
            auto t1 = std::chrono::steady_clock::now();
            auto base = canonical_base(ctx);
            double base_s = seconds_since(t1);
            if (base.size() != 2323)
                return {false, "mushroom: base " + std::to_string(base.size()) + ", want 2323"};
            if (base_s >= 7200) return {false, "base took " + fmt(base_s, 1) + " s, budget 7200 s"};
            return {true, "mushroom 8124x119, 238710 concepts (" + fmt(enum_s, 1) + " s), base 2323 (" +
                              fmt(base_s, 1) + " s)"};
        }
        std::printf("      note: scaled mushroom is %dx%d, not 8124x119; falling back to random-context oracle\n",
                    ctx.object_count(), ctx.attribute_count());
    }
    std::mt19937_64 rng(20260823);
    for (int i = 0; i < 50; ++i) {
        double density = 0.2 + 0.012 * i;
        FormalContext ctx = fixtures::random_context(12, 12, density, rng, false);
        RawCtx raw = raw_of(ctx);
        auto concepts = enumerate_concepts(ctx);
        auto closed = oracle_closed_sets(raw);
        if (concepts.size() != closed.size())
            return {false, "context " + std::to_string(i) + ": concept count mismatch"};
        std::set<std::uint32_t> intents;
        for (const Concept& c : concepts) intents.insert(mask_of(c.intent));
        if (intents != closed) return {false, "context " + std::to_string(i) + ": closed-set mismatch"};
        auto base = canonical_base(ctx);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> got;
        for (const Implication& imp : base) got.push_back({mask_of(imp.premise), mask_of(imp.conclusion)});
        std::sort(got.begin(), got.end());
        if (got != oracle_base(raw)) return {false, "context " + std::to_string(i) + ": base mismatch"};
    }
    return {true, "external dataset absent; concepts and bases of 50 random 12x12 contexts match the subset oracle"};
}

// criterion 3: the exact closure network agrees with the derivation
// operators on every subset, over 100 random contexts

Outcome crit3() {
    std::mt19937_64 rng(31337);
    std::size_t total = 0;
    for (int i = 0; i < 100; ++i) {
        int g = 1 + static_cast<int>(rng() % 12);
        int m = 1 + static_cast<int>(rng() % 10);
        double density = 0.1 + 0.8 * ((i % 10) / 9.0);
        FormalContext ctx = fixtures::random_context(g, m, density, rng, false);
        ClosureNet net = build_closure_net(ctx);
        VerifyResult v = verify_closure_net(ctx, net);
        if (!v.ok || !v.exhaustive)
            return {false, "context " + std::to_string(i) + " (" + std::to_string(g) + "x" +
                               std::to_string(m) + ") failed"};
        if (v.tested != (std::size_t{1} << m))
            return {false, "context " + std::to_string(i) + " not exhausted"};
        total += v.tested;
    }
    return {true, "100 random contexts, " + std::to_string(total) + " subsets, all closures exact"};
}

// criterion 4: no affine map can express the closure of the tiny context

Outcome crit4() {
    auto t0 = std::chrono::steady_clock::now();
    FormalContext tiny = load_burmeister(data_path("tiny3x3.cxt"));
    double residual = best_affine_fit_residual(tiny);
    double dt = seconds_since(t0);
    if (!(residual > 1e-6)) return {false, "residual " + format_double(residual) + " not > 1e-6"};
    if (dt >= 1.0) return {false, "took " + fmt(dt) + " s, budget 1 s"};
    return {true, "best affine fit leaves residual " + fmt(residual, 4) + ", " + fmt(dt) + " s"};
}

// criterion 5: CBoW example generation never produces duplicates

Outcome crit5() {
    std::mt19937_64 rng(909);
    long examples = 0;
    for (int i = 0; i < 50; ++i) {
        int g = 2 + static_cast<int>(rng() % 9);
        int m = 2 + static_cast<int>(rng() % 9);
        double density = 0.25 + 0.5 * ((i % 8) / 7.0);
        FormalContext ctx = fixtures::random_context(g, m, density, rng, false);
        auto pairs = target_context_pairs(ctx, enumerate_concepts(ctx));
        auto ex = cbow_examples(pairs, rng());
        std::set<std::string> seen;
        for (const auto& [in, out] : ex) {
            std::string key;
            for (double v : in) key += format_double(v) + ",";
            key += "|";
            for (double v : out) key += format_double(v) + ",";
            if (!seen.insert(key).second)
                return {false, "duplicate example in context " + std::to_string(i)};
        }
        examples += static_cast<long>(ex.size());
    }
    return {true, "50 random contexts, " + std::to_string(examples) + " examples, all distinct"};
}

// criterion 6: skip-gram emits the expected object pairs from the
// living-beings extent {a, f, g} (target f, context {a, g})

Outcome crit6() {
    FormalContext lb = load_burmeister(data_path("livingbeings.cxt"));
    auto pairs = target_context_pairs(lb, enumerate_concepts(lb));
    const int n = lb.object_count();
    ObjSet want_ctx(n);
    want_ctx.set(0);
    want_ctx.set(6);
    bool found = false;
    for (const TargetContextPair& p : pairs)
        if (p.target == 5 && p.context_set == want_ctx) found = true;
    if (!found) return {false, "pair (object 6, context {1, 7}) not generated"};

    Vec e6 = one_hot(6, n), e1 = one_hot(1, n), e7 = one_hot(7, n);
    int min_e6e7 = 1 << 30;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto ex = sg_examples(pairs, seed);
        int c61 = 0, c67 = 0;
        for (const auto& [in, out] : ex) {
            if (in == e6 && out == e1) ++c61;
            if (in == e6 && out == e7) ++c67;
        }
        if (c61 < 1) return {false, "example (e6, e1) missing"};
        if (c67 < 2) return {false, "(e6, e7) occurs " + std::to_string(c67) + " times, want >= 2"};
        min_e6e7 = std::min(min_e6e7, c67);
    }
    return {true, "(e6, e1) present and (e6, e7) occurs " + std::to_string(min_e6e7) +
                      " times per epoch over 3 shuffle seeds"};
}

// criterion 7: analytic gradients match finite differences on both
// layer/loss stacks in use

Outcome crit7() {
    std::mt19937_64 rng(424242);
    auto uniform = [&rng](int n, double lo, double hi) {
        Vec v(n);
        std::uniform_real_distribution<double> d(lo, hi);
        for (double& x : v) x = d(rng);
        return v;
    };
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        DenseNet trunk = make_net(6, {{8, Activation::Relu, true},
                                      {6, Activation::Relu, true},
                                      {3, Activation::Relu, true}});
        init_weights(trunk, 100 + trial);
        for (Layer& lay : trunk.layers)
            for (double& b : lay.b) b = 0.05;  // keep pre-activations off the relu kink
        double err = gradient_check(trunk, uniform(6, 0.0, 1.0), uniform(3, 0.0, 1.0), Loss::Mse);
        worst = std::max(worst, err);
        if (err >= 1e-4) return {false, "relu/mse trunk error " + format_double(err)};

        DenseNet head = make_net(7, {{3, Activation::Identity, false},
                                     {7, Activation::Softmax, false}});
        init_weights(head, 200 + trial);
        Vec target(7, 0.0);
        target[trial % 7] = 1.0;
        double err2 = gradient_check(head, uniform(7, -1.0, 1.0), target, Loss::CrossEntropy);
        worst = std::max(worst, err2);
        if (err2 >= 1e-4) return {false, "softmax/cross-entropy head error " + format_double(err2)};
    }
    return {true, "worst relative error " + format_double(worst) + " over 5 trials of each stack"};
}

// criteria 8 + 9: distance structure of the trained siamese embedding on the
// bundled ~2000-concept lattice. Trained once here, judged twice below.

struct LatticeSignal {
    int cr_wins = 0, simp_wins = 0, imp_wins = 0;
    double ratio_sum = 0.0, worst_ratio = 1e30;
    double seconds = 0.0;
    std::string error;
};

LatticeSignal run_lattice_signal() {
    LatticeSignal s;
    try {
        auto t0 = std::chrono::steady_clock::now();
        FormalContext ctx = load_burmeister(data_path("lattice2k.cxt"));
        ConceptLattice lattice = build_lattice(ctx, 4);
        std::vector<Implication> base = canonical_base(ctx);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            auto samples = generate_chd_samples(ctx, 4, seed);
            Closure2VecConfig cfg;
            cfg.d = 3;
            cfg.delta = PairDistance::Euclidean;
            cfg.epochs = 100;
            cfg.lr0 = 0.1;
            cfg.seed = seed;
            SiameseModel model = train_closure2vec(ctx, samples, cfg).model;
            CoveringDistanceResult cov = covering_distance_experiment(model, lattice, 1000000, seed);
            ImplicationDistanceResult imp = implication_distance_experiment(model, base, seed);
            if (cov.cover.mean < cov.non_cover.mean) ++s.cr_wins;
            if (imp.single_implied.mean > imp.single_non_implied.mean) ++s.simp_wins;
            if (imp.implication.mean < imp.non_implication.mean) ++s.imp_wins;
            double ratio = cov.cover.mean > 0 ? cov.non_cover.mean / cov.cover.mean : 1e30;
            s.ratio_sum += ratio;
            s.worst_ratio = std::min(s.worst_ratio, ratio);
        }
        s.seconds = seconds_since(t0);
    } catch (const std::exception& e) {
        s.error = e.what();
    }
    return s;
}

// criterion 10: embedding-based attribute clustering beats matched random
// baselines for every k

Outcome crit10() {
    FormalContext ctx = load_burmeister(data_path("surrogate100.cxt"));
    ClusteringExperimentConfig cfg;
    cfg.d = 3;
    cfg.k_set = {2, 5, 10};
    cfg.rounds = 5;
    cfg.epochs = 50;
    cfg.lr0 = 0.1;
    cfg.baseline_rounds = 50;
    cfg.seed = 0;
    ClusteringExperimentResult r = clustering_experiment(ctx, cfg);
    std::string margins;
    for (const ClusteringCell& c : r.cells) {
        if (c.arch != Fc2VecArch::SkipGram) continue;
        if (!(c.ratio.mean > c.random_baseline.mean))
            return {false, "k=" + std::to_string(c.k) + ": ratio " + fmt(c.ratio.mean, 4) +
                               " not above baseline " + fmt(c.random_baseline.mean, 4)};
        margins += " k" + std::to_string(c.k) + " " + fmt(c.ratio.mean, 3) + ">" +
                   fmt(c.random_baseline.mean, 3);
    }

    std::string wiki = real_path("wiki44k.cxt");
    if (fs::exists(wiki)) {
        FormalContext wctx = load_burmeister(wiki);
        ClusteringExperimentConfig wcfg;
        wcfg.d = 3;
        wcfg.k_set = {2};
        wcfg.rounds = 5;
        wcfg.seed = 0;
        ClusteringExperimentResult wr = clustering_experiment(wctx, wcfg);
        double k2 = 0.0;
        for (const ClusteringCell& c : wr.cells)
            if (c.arch == Fc2VecArch::SkipGram && c.k == 2) k2 = c.ratio.mean;
        if (k2 < 0.15 || k2 > 0.45)
            return {false, "wiki44k skip-gram k=2 ratio " + fmt(k2, 4) + " outside [0.15, 0.45]"};
        return {true, "bundled surrogate" + margins + "; wiki44k k=2 ratio " + fmt(k2, 4)};
    }
    return {true, "bundled 100-attribute surrogate, 5 rounds:" + margins + " (external dataset absent)"};
}

// criterion 11: link prediction beats chance on the bundled temporal
// context; untrained embeddings stay at chance

Outcome crit11() {
    FormalContext ctx = attach_years_from_tsv(load_burmeister(data_path("toy_temporal.cxt")),
                                              data_path("toy_temporal_years.tsv"));
    TemporalSplit split{2015, 2016, 2017};
    LinkPredictionConfig cfg;
    cfg.arch = Fc2VecArch::Cbow;
    cfg.d = 3;
    cfg.rounds = 10;
    cfg.epochs = 200;
    cfg.lr0 = 0.1;
    cfg.seed = 1;
    LinkPredictionResult trained = link_prediction_experiment(ctx, split, cfg);
    cfg.untrained_baseline = true;
    LinkPredictionResult untrained = link_prediction_experiment(ctx, split, cfg);
    if (!(trained.report.f1_mean > 0.55))
        return {false, "trained F1 " + fmt(trained.report.f1_mean, 4) + " not > 0.55"};
    if (untrained.report.f1_mean < 0.4 || untrained.report.f1_mean > 0.6)
        return {false, "untrained F1 " + fmt(untrained.report.f1_mean, 4) + " outside [0.4, 0.6]"};

    std::string icfca = real_path("icfca.cxt");
    std::string icfca_years = real_path("icfca_years.tsv");
    if (fs::exists(icfca) && fs::exists(icfca_years)) {
        FormalContext rctx = attach_years_from_tsv(load_burmeister(icfca), icfca_years);
        TemporalSplit rsplit{2015, 2016, 2019};
        LinkPredictionConfig rcfg;
        rcfg.arch = Fc2VecArch::Cbow;
        rcfg.d = 3;
        rcfg.rounds = 30;
        rcfg.epochs = 200;
        rcfg.lr0 = 1.0;
        rcfg.seed = 1;
        LinkPredictionResult rr = link_prediction_experiment(rctx, rsplit, rcfg);
        if (rr.train_examples != 1278 || rr.test_examples != 84)
            return {false, "co-authorship context: " + std::to_string(rr.train_examples) + " train / " +
                               std::to_string(rr.test_examples) + " test examples, want 1278 / 84"};
        if (std::fabs(rr.report.f1_mean - 0.69) > 0.15)
            return {false, "co-authorship F1 " + fmt(rr.report.f1_mean, 4) + " not within 0.69 +- 0.15"};
        return {true, "bundled F1 " + fmt(trained.report.f1_mean, 3) + " vs untrained " +
                          fmt(untrained.report.f1_mean, 3) + "; external context F1 " +
                          fmt(rr.report.f1_mean, 3)};
    }
    return {true, "trained F1 " + fmt(trained.report.f1_mean, 3) + " > 0.55, untrained " +
                      fmt(untrained.report.f1_mean, 3) + " in [0.4, 0.6] (external dataset absent)"};
}

// criterion 12: every stochastic subcommand is byte-deterministic

std::map<std::string, std::string> snapshot_dir(const std::string& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        files[entry.path().filename().string()] = ss.str();
    }
    return files;
}

Outcome crit12() {
    fs::path tmp = fs::temp_directory_path() / "fca2vec-acceptance";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    std::string T = tmp.string();
    std::string lb = data_path("livingbeings.cxt");
    std::string toy = data_path("toy_temporal.cxt");
    std::string toy_years = data_path("toy_temporal_years.tsv");

    std::vector<std::pair<std::string, std::string>> commands = {
        {"train-closure2vec",
         kCli + " train-closure2vec " + lb + " -o " + T + "/c2v --d 2 --epochs 3 --seed 5"},
        {"train-o2v", kCli + " train-o2v " + lb + " -o " + T + "/o2v --arch sg --d 2 --epochs 10 --seed 5"},
        {"train-a2v", kCli + " train-a2v " + lb + " -o " + T + "/a2v --arch cbow --d 2 --epochs 10 --seed 5"},
        {"eval-linkpred", kCli + " eval-linkpred " + toy + " --years " + toy_years + " -o " + T +
                              "/lp --cutoff 2015 --window-start 2016 --window-end 2017 --rounds 2 "
                              "--epochs 20 --lr0 0.1 --seed 5"},
        {"eval-cluster", kCli + " eval-cluster " + lb + " -o " + T +
                             "/cl --d 2 -k 2 --rounds 2 --epochs 5 --lr0 0.1 --baseline-rounds 3 --seed 5"},
        {"eval-covers", kCli + " eval-covers " + lb + " --checkpoint " + T + "/c2v/checkpoint.txt -o " +
                            T + "/ec --seed 5"},
        {"eval-implications", kCli + " eval-implications " + lb + " --checkpoint " + T +
                                  "/c2v/checkpoint.txt -o " + T + "/ei --seed 5"},
    };

    std::map<std::string, std::string> out_dir = {
        {"train-closure2vec", T + "/c2v"}, {"train-o2v", T + "/o2v"},  {"train-a2v", T + "/a2v"},
        {"eval-linkpred", T + "/lp"},      {"eval-cluster", T + "/cl"}, {"eval-covers", T + "/ec"},
        {"eval-implications", T + "/ei"},
    };

    // first pass: run everything once and snapshot
    std::map<std::string, std::map<std::string, std::string>> first;
    for (const auto& [name, cmd] : commands) {
        int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
        if (rc != 0) return {false, name + " exited with code " + std::to_string(rc)};
        first[name] = snapshot_dir(out_dir[name]);
        if (first[name].empty()) return {false, name + " wrote no output files"};
    }
    // second pass into the same directories: every byte must be reproduced
    for (const auto& [name, cmd] : commands) {
        int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
        if (rc != 0) return {false, name + " (rerun) exited with code " + std::to_string(rc)};
        auto second = snapshot_dir(out_dir[name]);
        if (first[name] != second) {
            for (const auto& [file, bytes] : first[name])
                if (!second.count(file) || second[file] != bytes)
                    return {false, name + ": " + file + " differs between identical runs"};
            return {false, name + ": outputs differ between identical runs"};
        }
    }
    fs::remove_all(tmp);
    long files = 0;
    for (const auto& [name, snap] : first) files += static_cast<long>(snap.size());
    return {true, "7 stochastic subcommands rerun byte-identically (" + std::to_string(files) +
                      " files compared)"};
}

}  // namespace

int main() {
    std::printf("acceptance checks (data: %s)\n", kData.c_str());
    run_check(1, "exact concept, cover, and implication counts on the bundled textbook contexts", crit1);
    run_check(2, "concept enumeration and canonical base match an independent subset oracle", crit2);
    run_check(3, "exact closure network verified exhaustively on 100 random contexts", crit3);
    run_check(4, "closure of the 3x3 counterexample context admits no affine fit", crit4);
    run_check(5, "CBoW example generation is injective on 50 random contexts", crit5);
    run_check(6, "skip-gram reproduces the expected object pairs from a living-beings extent", crit6);
    run_check(7, "analytic gradients match finite differences for both training stacks", crit7);

    LatticeSignal sig = run_lattice_signal();
    run_check(8, "covering pairs embed closer than non-covering pairs", [&sig]() -> Outcome {
        if (!sig.error.empty()) return {false, "exception: " + sig.error};
        if (sig.cr_wins < 4) return {false, std::to_string(sig.cr_wins) + "/5 seeds, want >= 4"};
        double mean_ratio = sig.ratio_sum / 5.0;
        if (!(mean_ratio >= 1.5))
            return {false, "mean non-cover/cover ratio " + fmt(mean_ratio, 2) + " below 1.5"};
        if (sig.seconds >= 1800) return {false, "took " + fmt(sig.seconds, 1) + " s, budget 1800 s"};
        return {true, std::to_string(sig.cr_wins) + "/5 seeds, ratio mean " + fmt(mean_ratio, 2) +
                          " (worst " + fmt(sig.worst_ratio, 2) + "), " + fmt(sig.seconds, 1) + " s"};
    });
    run_check(9, "implied attributes embed closer than non-implied ones", [&sig]() -> Outcome {
        if (!sig.error.empty()) return {false, "exception: " + sig.error};
        if (sig.simp_wins < 4)
            return {false, "single-attribute direction " + std::to_string(sig.simp_wins) + "/5 seeds"};
        if (sig.imp_wins < 4)
            return {false, "premise-closure direction " + std::to_string(sig.imp_wins) + "/5 seeds"};
        return {true, "single-attribute " + std::to_string(sig.simp_wins) +
                          "/5 seeds, premise-closure " + std::to_string(sig.imp_wins) + "/5 seeds"};
    });

    run_check(10, "embedding clustering beats matched random baselines for k = 2, 5, 10", crit10);
    run_check(11, "link prediction beats chance while untrained embeddings stay at chance", crit11);
    run_check(12, "stochastic subcommands rerun byte-identically under a fixed seed", crit12);

    std::printf("%s\n", g_all_pass ? "all criteria passed" : "FAILURES PRESENT");
    return g_all_pass ? 0 : 1;
}
