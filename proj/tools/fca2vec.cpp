// Command-line front end: every pipeline stage (context inspection, lattice
// exports, embedding training, evaluation experiments) as one subcommand.
//
// Options come from explicit flags or an optional JSON config file
// (--config); flags win. Every command that writes artifacts also writes a
// manifest (command + effective config + input hashes + output names)
// sufficient to re-run it. Commands never modify their inputs, and identical
// config + seed produces byte-identical output files.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
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
#include "fca2vec/threads.hpp"
#include "fca2vec/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fca2vec;

namespace {

int g_threads = 1;            // resolved worker count
int g_threads_requested = 0;  // as given on the command line / config (0 = auto)

// ---------------------------------------------------------------------------
// Config-file plumbing: every option is registered with a JSON key; after
// parsing, keys from the config file fill in options the user did not pass.

struct Merge {
    std::string key;
    CLI::Option* opt;
    std::function<void(const json&)> apply;
};

struct Cmd {
    CLI::App* app = nullptr;
    std::vector<Merge> merges;
    std::vector<std::string> required;
    std::function<int()> run;
};

template <class T>
void assign_from_json(T& var, const json& v, const std::string& key) {
    try {
        var = v.get<T>();
    } catch (const json::exception&) {
        throw std::runtime_error("config key '" + key + "' has the wrong type");
    }
}

template <class T>
CLI::Option* bind_opt(Cmd& c, const std::string& spec, const std::string& key, T& var,
                      const std::string& help) {
    CLI::Option* o = c.app->add_option(spec, var, help)->capture_default_str();
    c.merges.push_back({key, o, [&var, key](const json& v) { assign_from_json(var, v, key); }});
    return o;
}

CLI::Option* bind_flag(Cmd& c, const std::string& spec, const std::string& key, bool& var,
                       const std::string& help) {
    CLI::Option* o = c.app->add_flag(spec, var, help);
    c.merges.push_back({key, o, [&var, key](const json& v) { assign_from_json(var, v, key); }});
    return o;
}

// Fills unset options from the config file, rejects unknown keys, and
// enforces options that must come from either source.
void apply_config(const Cmd& c, const json& cfg) {
    std::set<std::string> known{"threads"};
    for (const Merge& m : c.merges) known.insert(m.key);
    for (const auto& [key, value] : cfg.items()) {
        (void)value;
        if (!known.count(key))
            throw std::runtime_error("config key '" + key + "' does not match any option of '" +
                                     c.app->get_name() + "'");
    }
    for (const Merge& m : c.merges)
        if (m.opt->count() == 0 && cfg.contains(m.key)) m.apply(cfg.at(m.key));
    for (const std::string& key : c.required) {
        for (const Merge& m : c.merges)
            if (m.key == key && m.opt->count() == 0 && !cfg.contains(key))
                throw std::runtime_error("'" + c.app->get_name() + "' requires --" + key +
                                         " (flag or config entry)");
    }
}

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config file " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw std::runtime_error("config file " + path + " must hold a JSON object");
    return cfg;
}

// ---------------------------------------------------------------------------
// Small shared helpers

std::string join_path(const std::string& dir, const char* name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_manifest(const std::string& path, const std::string& command, json config,
                    json inputs, const std::vector<std::string>& outputs) {
    config["threads"] = g_threads_requested;
    json m;
    m["command"] = command;
    m["config"] = std::move(config);
    m["inputs"] = std::move(inputs);
    m["outputs"] = outputs;
    write_text(path, m.dump(2) + "\n");
}

json context_input(const std::string& path, const FormalContext& ctx) {
    return json{{"path", path}, {"context_hash", context_hash(ctx)}};
}

json stats_json(const DistanceStats& s) {
    return json{{"label", s.label}, {"mean", s.mean}, {"stdev", s.stdev}, {"count", s.count}};
}

std::string stats_csv_row(const DistanceStats& s) {
    return s.label + "," + format_double(s.mean) + "," + format_double(s.stdev) + "," +
           std::to_string(s.count) + "\n";
}

void warn_unusual_d(int d) {
    if (d != 2 && d != 3)
        std::cerr << "warning: embedding dimension " << d << " is outside the usual range {2, 3}\n";
}

SiameseModel load_siamese(const std::string& checkpoint, const std::string& delta,
                          const FormalContext& ctx) {
    SiameseModel model;
    model.trunk = load_checkpoint(checkpoint);
    model.delta = pair_distance_from_name(delta);
    if (model.trunk.input_width() != ctx.attribute_count())
        throw std::runtime_error("checkpoint expects " + std::to_string(model.trunk.input_width()) +
                                 " attributes but the context has " +
                                 std::to_string(ctx.attribute_count()));
    return model;
}

TargetTransform target_from_name(const std::string& s) {
    if (s == "auto") return TargetTransform::Auto;
    if (s == "plain") return TargetTransform::Plain;
    if (s == "squared") return TargetTransform::Squared;
    throw std::runtime_error("unknown target transform: " + s + " (auto|plain|squared)");
}

// ---------------------------------------------------------------------------
// info

struct InfoOpts {
    std::string context;
    bool full = false;
};

int run_info(const InfoOpts& o) {
    FormalContext ctx = load_burmeister(o.context);
    std::cout << "objects     " << ctx.object_count() << "\n"
              << "attributes  " << ctx.attribute_count() << "\n"
              << "incidences  " << ctx.incidence_count() << "\n"
              << "density     " << format_double(ctx.density()) << "\n";
    if (o.full) {
        auto concepts = enumerate_concepts(ctx);
        double mean_attrs = 0.0, mean_objs = 0.0;
        for (const Concept& c : concepts) {
            mean_attrs += c.intent.count();
            mean_objs += c.extent.count();
        }
        if (!concepts.empty()) {
            mean_attrs /= static_cast<double>(concepts.size());
            mean_objs /= static_cast<double>(concepts.size());
        }
        auto base = canonical_base(ctx);
        std::cout << "concepts            " << concepts.size() << "\n"
                  << "attrs per concept   " << format_double(mean_attrs) << "\n"
                  << "objects per concept " << format_double(mean_objs) << "\n"
                  << "canonical base      " << base.size() << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// concepts / covers / base

struct ExportOpts {
    std::string context;
    std::string out;
};

int run_concepts(const ExportOpts& o) {
    FormalContext ctx = load_burmeister(o.context);
    auto concepts = enumerate_concepts(ctx);
    save_concepts_tsv(concepts, o.out);
    write_manifest(o.out + ".manifest.json", "concepts",
                   json{{"context", o.context}, {"out", o.out}},
                   json{{"context", context_input(o.context, ctx)}}, {o.out});
    std::cout << concepts.size() << " concepts -> " << o.out << "\n";
    return 0;
}

int run_covers(const ExportOpts& o) {
    FormalContext ctx = load_burmeister(o.context);
    ConceptLattice lattice = build_lattice(ctx, g_threads);
    save_covers_tsv(lattice.covers, o.out);
    write_manifest(o.out + ".manifest.json", "covers",
                   json{{"context", o.context}, {"out", o.out}},
                   json{{"context", context_input(o.context, ctx)}}, {o.out});
    std::cout << lattice.concepts.size() << " concepts, " << lattice.covers.size()
              << " cover edges -> " << o.out << "\n";
    return 0;
}

int run_base(const ExportOpts& o) {
    FormalContext ctx = load_burmeister(o.context);
    auto base = canonical_base(ctx);
    save_base_text(ctx, base, o.out);
    write_manifest(o.out + ".manifest.json", "base",
                   json{{"context", o.context}, {"out", o.out}},
                   json{{"context", context_input(o.context, ctx)}}, {o.out});
    std::cout << base.size() << " implications -> " << o.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// scale

struct ScaleOpts {
    std::string input;
    std::string out;
    std::string missing = "no-attribute";
    std::string empty = "reject";
};

int run_scale(const ScaleOpts& o) {
    MissingPolicy missing;
    if (o.missing == "no-attribute")
        missing = MissingPolicy::NoAttribute;
    else if (o.missing == "as-value")
        missing = MissingPolicy::AsValue;
    else
        throw std::runtime_error("unknown missing policy: " + o.missing +
                                 " (no-attribute|as-value)");
    EmptyPolicy empty;
    if (o.empty == "reject")
        empty = EmptyPolicy::Reject;
    else if (o.empty == "drop")
        empty = EmptyPolicy::Drop;
    else if (o.empty == "allow")
        empty = EmptyPolicy::Allow;
    else
        throw std::runtime_error("unknown empty policy: " + o.empty + " (reject|drop|allow)");

    NominalTable table = load_csv(o.input);
    DropStats stats;
    FormalContext ctx = scale_nominal(table, missing, empty, &stats);
    save_burmeister(ctx, o.out);
    write_manifest(o.out + ".manifest.json", "scale",
                   json{{"input", o.input}, {"out", o.out}, {"missing", o.missing},
                        {"empty", o.empty}},
                   json{{"csv", json{{"path", o.input}}},
                        {"context", context_input(o.out, ctx)}},
                   {o.out});
    std::cout << "scaled " << table.rows.size() << " rows x " << table.columns.size()
              << " columns -> " << ctx.object_count() << " objects x " << ctx.attribute_count()
              << " attributes -> " << o.out << "\n";
    if (stats.objects_dropped || stats.attributes_dropped)
        std::cout << "dropped " << stats.objects_dropped << " empty objects, "
                  << stats.attributes_dropped << " empty attributes\n";
    return 0;
}

// ---------------------------------------------------------------------------
// train-closure2vec

struct TrainC2VOpts {
    std::string context;
    std::string out;
    int d = 2;
    std::string delta = "euclidean";
    std::string target = "auto";
    int epochs = 5;
    double lr0 = 0.001;
    int batch = 32;
    int sample_size = 2;
    std::uint64_t seed = 0;
};

int run_train_c2v(const TrainC2VOpts& o) {
    FormalContext ctx = load_burmeister(o.context);
    warn_unusual_d(o.d);
    if (o.sample_size < 0) throw std::runtime_error("--sample-size must be >= 0");
    auto samples = generate_chd_samples(ctx, o.sample_size, o.seed);

    Closure2VecConfig cfg;
    cfg.d = o.d;
    cfg.delta = pair_distance_from_name(o.delta);
    cfg.target = target_from_name(o.target);
    cfg.epochs = o.epochs;
    cfg.lr0 = o.lr0;
    cfg.batch_size = o.batch;
    cfg.seed = o.seed;
    SiameseTrainResult r = train_closure2vec(ctx, samples, cfg);

    ensure_dir(o.out);
    save_checkpoint(r.model.trunk, join_path(o.out, "checkpoint.txt"));
    save_loss_csv(r.epoch_loss, join_path(o.out, "loss.csv"));
    EmbeddingTable table;
    table.names = ctx.attributes();
    table.d = o.d;
    for (int m = 0; m < ctx.attribute_count(); ++m) {
        AttrSet s(ctx.attribute_count());
        s.set(m);
        Vec e = embed_attrset(r.model, s);
        table.values.insert(table.values.end(), e.begin(), e.end());
    }
    save_embedding_table(table, join_path(o.out, "embeddings.tsv"));
    write_manifest(join_path(o.out, "manifest.json"), "train-closure2vec",
                   json{{"context", o.context}, {"out", o.out}, {"d", o.d},
                        {"delta", o.delta}, {"target", o.target}, {"epochs", o.epochs},
                        {"lr0", o.lr0}, {"batch", o.batch}, {"sample-size", o.sample_size},
                        {"seed", o.seed}},
                   json{{"context", context_input(o.context, ctx)}},
                   {"checkpoint.txt", "embeddings.tsv", "loss.csv"});
    std::cout << samples.size() << " samples, " << o.epochs << " epochs, final loss "
              << format_double(r.epoch_loss.back()) << " -> " << o.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// train-o2v / train-a2v

struct TrainFcOpts {
    std::string context;
    std::string out;
    std::string arch = "sg";
    int d = 2;
    int epochs = 200;
    double lr0 = 1.0;
    bool global_shuffle = false;
    std::uint64_t seed = 0;
};

int run_train_fc(const TrainFcOpts& o, bool attributes) {
    FormalContext ctx = load_burmeister(o.context);
    warn_unusual_d(o.d);
    Fc2VecConfig cfg;
    cfg.arch = fc2vec_arch_from_name(o.arch);
    cfg.d = o.d;
    cfg.epochs = o.epochs;
    cfg.lr0 = o.lr0;
    cfg.seed = o.seed;
    cfg.global_shuffle = o.global_shuffle;
    Fc2VecTrainResult r = attributes ? train_attribute2vec(ctx, cfg) : train_object2vec(ctx, cfg);

    ensure_dir(o.out);
    save_embedding_table(r.table, join_path(o.out, "embeddings.tsv"));
    save_checkpoint(r.net, join_path(o.out, "checkpoint.txt"));
    save_loss_csv(r.epoch_loss, join_path(o.out, "loss.csv"));
    write_manifest(join_path(o.out, "manifest.json"),
                   attributes ? "train-a2v" : "train-o2v",
                   json{{"context", o.context}, {"out", o.out}, {"arch", o.arch}, {"d", o.d},
                        {"epochs", o.epochs}, {"lr0", o.lr0},
                        {"global-shuffle", o.global_shuffle}, {"seed", o.seed}},
                   json{{"context", context_input(o.context, ctx)}},
                   {"checkpoint.txt", "embeddings.tsv", "loss.csv"});
    std::cout << r.table.names.size() << " embeddings of dimension " << o.d << ", final loss "
              << format_double(r.epoch_loss.back()) << " -> " << o.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// eval-linkpred

struct LinkPredOpts {
    std::string context;
    std::string years;
    std::string out;
    int cutoff = 0;
    int window_start = 0;
    int window_end = 0;
    std::string arch = "cbow";
    int d = 3;
    int rounds = 30;
    int epochs = 200;
    double lr0 = 1.0;
    bool untrained = false;
    std::uint64_t seed = 0;
};

int run_linkpred(const LinkPredOpts& o) {
    FormalContext ctx = load_burmeister(o.context);
    if (o.years.empty())
        throw std::runtime_error(
            "link prediction needs publication years: pass --years <sidecar.tsv> "
            "(one 'attribute_name<TAB>year' line per attribute)");
    ctx = attach_years_from_tsv(ctx, o.years);
    warn_unusual_d(o.d);

    TemporalSplit split{o.cutoff, o.window_start, o.window_end};
    LinkPredictionConfig cfg;
    cfg.arch = fc2vec_arch_from_name(o.arch);
    cfg.d = o.d;
    cfg.rounds = o.rounds;
    cfg.epochs = o.epochs;
    cfg.lr0 = o.lr0;
    cfg.untrained_baseline = o.untrained;
    cfg.seed = o.seed;
    LinkPredictionResult r = link_prediction_experiment(ctx, split, cfg);

    ensure_dir(o.out);
    json rep;
    rep["component_size"] = r.component_size;
    rep["train_examples"] = r.train_examples;
    rep["test_examples"] = r.test_examples;
    rep["untrained_baseline"] = o.untrained;
    rep["precision_mean"] = r.report.precision_mean;
    rep["precision_stdev"] = r.report.precision_stdev;
    rep["recall_mean"] = r.report.recall_mean;
    rep["recall_stdev"] = r.report.recall_stdev;
    rep["f1_mean"] = r.report.f1_mean;
    rep["f1_stdev"] = r.report.f1_stdev;
    json rounds = json::array();
    for (const PrF1& p : r.report.rounds)
        rounds.push_back(json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}});
    rep["rounds"] = rounds;
    write_text(join_path(o.out, "report.json"), rep.dump(2) + "\n");

    std::string csv = "round,precision,recall,f1\n";
    for (std::size_t i = 0; i < r.report.rounds.size(); ++i)
        csv += std::to_string(i + 1) + "," + format_double(r.report.rounds[i].precision) + "," +
               format_double(r.report.rounds[i].recall) + "," +
               format_double(r.report.rounds[i].f1) + "\n";
    write_text(join_path(o.out, "rounds.csv"), csv);

    write_manifest(join_path(o.out, "manifest.json"), "eval-linkpred",
                   json{{"context", o.context}, {"years", o.years}, {"out", o.out},
                        {"cutoff", o.cutoff}, {"window-start", o.window_start},
                        {"window-end", o.window_end}, {"arch", o.arch}, {"d", o.d},
                        {"rounds", o.rounds}, {"epochs", o.epochs}, {"lr0", o.lr0},
                        {"untrained", o.untrained}, {"seed", o.seed}},
                   json{{"context", context_input(o.context, ctx)},
                        {"years", json{{"path", o.years}}}},
                   {"report.json", "rounds.csv"});
    std::cout << "component " << r.component_size << ", " << r.train_examples
              << " train / " << r.test_examples << " test examples, F1 "
              << format_double(r.report.f1_mean) << " +- "
              << format_double(r.report.f1_stdev) << " -> " << o.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// eval-cluster

struct ClusterOpts {
    std::string context;
    std::string out;
    int d = 3;
    std::vector<int> k_set = {2, 5, 10};
    int rounds = 20;
    int epochs = 200;
    double lr0 = 1.0;
    int baseline_rounds = 50;
    std::uint64_t seed = 0;
};

int run_cluster(const ClusterOpts& o) {
    FormalContext ctx = load_burmeister(o.context);
    warn_unusual_d(o.d);
    ClusteringExperimentConfig cfg;
    cfg.d = o.d;
    cfg.k_set = o.k_set;
    cfg.rounds = o.rounds;
    cfg.epochs = o.epochs;
    cfg.lr0 = o.lr0;
    cfg.baseline_rounds = o.baseline_rounds;
    cfg.seed = o.seed;
    ClusteringExperimentResult r = clustering_experiment(ctx, cfg);

    ensure_dir(o.out);
    json rep;
    rep["base_size"] = r.base_size;
    rep["k_set"] = r.k_set;
    rep["naive_ratio"] = r.naive_ratio;
    json cells = json::array();
    for (const ClusteringCell& c : r.cells)
        cells.push_back(json{{"arch", fc2vec_arch_name(c.arch)},
                             {"k", c.k},
                             {"ratio_mean", c.ratio.mean},
                             {"ratio_stdev", c.ratio.stdev},
                             {"ratio_values", c.ratio.values},
                             {"baseline_mean", c.random_baseline.mean},
                             {"baseline_stdev", c.random_baseline.stdev},
                             {"max_cluster_mean", c.max_cluster_mean}});
    rep["cells"] = cells;
    write_text(join_path(o.out, "report.json"), rep.dump(2) + "\n");

    std::string csv = "arch,k,ratio_mean,ratio_stdev,baseline_mean,baseline_stdev,max_cluster_mean\n";
    for (const ClusteringCell& c : r.cells)
        csv += std::string(fc2vec_arch_name(c.arch)) + "," + std::to_string(c.k) + "," +
               format_double(c.ratio.mean) + "," + format_double(c.ratio.stdev) + "," +
               format_double(c.random_baseline.mean) + "," +
               format_double(c.random_baseline.stdev) + "," +
               format_double(c.max_cluster_mean) + "\n";
    write_text(join_path(o.out, "cells.csv"), csv);

    write_manifest(join_path(o.out, "manifest.json"), "eval-cluster",
                   json{{"context", o.context}, {"out", o.out}, {"d", o.d}, {"k", o.k_set},
                        {"rounds", o.rounds}, {"epochs", o.epochs}, {"lr0", o.lr0},
                        {"baseline-rounds", o.baseline_rounds}, {"seed", o.seed}},
                   json{{"context", context_input(o.context, ctx)}},
                   {"report.json", "cells.csv"});
    for (const ClusteringCell& c : r.cells)
        std::cout << fc2vec_arch_name(c.arch) << " k=" << c.k << " ratio "
                  << format_double(c.ratio.mean) << " random " << format_double(c.random_baseline.mean)
                  << "\n";
    std::cout << "base size " << r.base_size << " -> " << o.out << "\n";
    if (r.base_size == 0) {
        std::cerr << "warning: the canonical base is empty; every ratio is zero\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// eval-covers

struct CoversOpts {
    std::string context;
    std::string checkpoint;
    std::string out;
    std::string delta = "euclidean";
    long sample_cap = 1000000;
    std::uint64_t seed = 0;
};

int run_eval_covers(const CoversOpts& o) {
    FormalContext ctx = load_burmeister(o.context);
    SiameseModel model = load_siamese(o.checkpoint, o.delta, ctx);
    if (o.sample_cap < 0) throw std::runtime_error("--sample-cap must be >= 0");
    ConceptLattice lattice = build_lattice(ctx, g_threads);
    CoveringDistanceResult r = covering_distance_experiment(model, lattice, o.sample_cap, o.seed);

    long n = static_cast<long>(lattice.concepts.size());
    long non_total = n * (n - 1) / 2 - static_cast<long>(lattice.covers.size());
    bool capped = non_total > o.sample_cap;
    if (capped)
        std::cout << "note: non-covering pairs sampled, " << o.sample_cap << " of " << non_total
                  << "\n";

    ensure_dir(o.out);
    json rep;
    rep["concepts"] = n;
    rep["covers"] = static_cast<long>(lattice.covers.size());
    rep["cover"] = stats_json(r.cover);
    rep["non_cover"] = stats_json(r.non_cover);
    rep["sampling"] = capped ? json{{"mode", "capped"}, {"population", non_total}}
                             : json{{"mode", "exhaustive"}, {"population", non_total}};
    write_text(join_path(o.out, "report.json"), rep.dump(2) + "\n");
    write_text(join_path(o.out, "distances.csv"),
               "label,mean,stdev,count\n" + stats_csv_row(r.cover) + stats_csv_row(r.non_cover));
    write_manifest(join_path(o.out, "manifest.json"), "eval-covers",
                   json{{"context", o.context}, {"checkpoint", o.checkpoint}, {"out", o.out},
                        {"delta", o.delta}, {"sample-cap", o.sample_cap}, {"seed", o.seed}},
                   json{{"context", context_input(o.context, ctx)},
                        {"checkpoint", json{{"path", o.checkpoint}}}},
                   {"report.json", "distances.csv"});
    std::cout << "cover mean " << format_double(r.cover.mean) << " (" << r.cover.count
              << "), non-cover mean " << format_double(r.non_cover.mean) << " ("
              << r.non_cover.count << ") -> " << o.out << "\n";
    if (r.cover.count == 0 || r.non_cover.count == 0) {
        std::cerr << "warning: a distance class is empty; the comparison is degenerate\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// eval-implications

struct ImplOpts {
    std::string context;
    std::string checkpoint;
    std::string out;
    std::string delta = "euclidean";
    std::uint64_t seed = 0;
};

int run_eval_implications(const ImplOpts& o) {
    FormalContext ctx = load_burmeister(o.context);
    SiameseModel model = load_siamese(o.checkpoint, o.delta, ctx);
    auto base = canonical_base(ctx);
    ImplicationDistanceResult r = implication_distance_experiment(model, base, o.seed);

    ensure_dir(o.out);
    json rep;
    rep["base_size"] = static_cast<long>(base.size());
    rep["single_implied"] = stats_json(r.single_implied);
    rep["single_non_implied"] = stats_json(r.single_non_implied);
    rep["implication"] = stats_json(r.implication);
    rep["non_implication"] = stats_json(r.non_implication);
    write_text(join_path(o.out, "report.json"), rep.dump(2) + "\n");
    write_text(join_path(o.out, "distances.csv"),
               "label,mean,stdev,count\n" + stats_csv_row(r.single_implied) +
                   stats_csv_row(r.single_non_implied) + stats_csv_row(r.implication) +
                   stats_csv_row(r.non_implication));
    write_manifest(join_path(o.out, "manifest.json"), "eval-implications",
                   json{{"context", o.context}, {"checkpoint", o.checkpoint}, {"out", o.out},
                        {"delta", o.delta}, {"seed", o.seed}},
                   json{{"context", context_input(o.context, ctx)},
                        {"checkpoint", json{{"path", o.checkpoint}}}},
                   {"report.json", "distances.csv"});
    std::cout << "base " << base.size() << ", implied-attribute mean "
              << format_double(r.single_implied.mean) << ", non-implied mean "
              << format_double(r.single_non_implied.mean) << " -> " << o.out << "\n";
    if (base.empty()) {
        std::cerr << "warning: the canonical base is empty; all statistics are zero\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// scatter

struct ScatterOpts {
    std::string input;
    std::string out;
};

int run_scatter(const ScatterOpts& o) {
    EmbeddingTable table = load_embedding_table(o.input);
    std::vector<Vec> points;
    points.reserve(table.names.size());
    for (int i = 0; i < static_cast<int>(table.names.size()); ++i) points.push_back(table.row(i));
    save_scatter_csv(points, table.names, o.out);
    write_manifest(o.out + ".manifest.json", "scatter",
                   json{{"input", o.input}, {"out", o.out}},
                   json{{"embeddings", json{{"path", o.input}}}}, {o.out});
    std::cout << points.size() << " points of dimension " << table.d << " -> " << o.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify-rudolph / affine-residual

struct VerifyOpts {
    std::string context;
    long samples = 10000;
    std::uint64_t seed = 0;
};

int run_verify(const VerifyOpts& o) {
    FormalContext ctx = load_burmeister(o.context);
    if (o.samples < 0) throw std::runtime_error("--samples must be >= 0");
    ClosureNet net = build_closure_net(ctx);
    VerifyResult v = verify_closure_net(ctx, net, static_cast<std::size_t>(o.samples), o.seed);
    std::cout << (v.exhaustive ? "exhaustive" : "sampled") << " check of " << v.tested
              << " attribute sets: " << (v.ok ? "all closures match" : "MISMATCH") << "\n";
    if (!v.ok && v.counterexample) {
        std::cout << "counterexample attribute indices:";
        for (int m : v.counterexample->to_indices()) std::cout << " " << m;
        std::cout << "\n";
    }
    return v.ok ? 0 : 1;
}

struct ResidualOpts {
    std::string context;
};

int run_residual(const ResidualOpts& o) {
    FormalContext ctx = load_burmeister(o.context);
    double r = best_affine_fit_residual(ctx);
    std::cout << "best affine fit residual " << format_double(r) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// wiring

CLI::App* make_sub(CLI::App& app, const std::string& name, const std::string& desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->fallthrough();
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"formal context analysis: lattices, implications, embeddings, evaluations"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON file with option defaults; explicit flags win");
    app.add_option("--threads", g_threads_requested,
                   "worker threads (0 = FCA2VEC_THREADS env or hardware)")
        ->capture_default_str();

    std::vector<Cmd> cmds;

    {
        auto o = std::make_shared<InfoOpts>();
        Cmd c;
        c.app = make_sub(app, "info", "print context statistics");
        bind_opt(c, "context", "context", o->context, "Burmeister .cxt file");
        bind_flag(c, "--full", "full", o->full,
                  "also enumerate concepts and the canonical base (expensive)");
        c.required = {"context"};
        c.run = [o] { return run_info(*o); };
        cmds.push_back(std::move(c));
    }
    {
        auto o = std::make_shared<ExportOpts>();
        Cmd c;
        c.app = make_sub(app, "concepts", "enumerate all formal concepts to a TSV file");
        bind_opt(c, "context", "context", o->context, "Burmeister .cxt file");
        bind_opt(c, "-o,--out", "out", o->out, "output TSV path");
        c.required = {"context", "out"};
        c.run = [o] { return run_concepts(*o); };
        cmds.push_back(std::move(c));
    }
    {
        auto o = std::make_shared<ExportOpts>();
        Cmd c;
        c.app = make_sub(app, "covers", "compute the covering relation to a TSV file");
        bind_opt(c, "context", "context", o->context, "Burmeister .cxt file");
        bind_opt(c, "-o,--out", "out", o->out, "output TSV path");
        c.required = {"context", "out"};
        c.run = [o] { return run_covers(*o); };
        cmds.push_back(std::move(c));
    }
    {
        auto o = std::make_shared<ExportOpts>();
        Cmd c;
        c.app = make_sub(app, "base", "compute the canonical implication base to a text file");
        bind_opt(c, "context", "context", o->context, "Burmeister .cxt file");
        bind_opt(c, "-o,--out", "out", o->out, "output text path");
        c.required = {"context", "out"};
        c.run = [o] { return run_base(*o); };
        cmds.push_back(std::move(c));
    }
    {
        auto o = std::make_shared<ScaleOpts>();
        Cmd c;
        c.app = make_sub(app, "scale", "nominally scale a CSV table into a formal context");
        bind_opt(c, "input", "input", o->input, "CSV file with a header row");
        bind_opt(c, "-o,--out", "out", o->out, "output .cxt path");
        bind_opt(c, "--missing", "missing", o->missing,
                 "handling of the '?' token: no-attribute|as-value");
        bind_opt(c, "--empty", "empty", o->empty,
                 "empty rows/columns after scaling: reject|drop|allow");
        c.required = {"input", "out"};
        c.run = [o] { return run_scale(*o); };
        cmds.push_back(std::move(c));
    }
    {
        auto o = std::make_shared<TrainC2VOpts>();
        Cmd c;
        c.app = make_sub(app, "train-closure2vec",
                         "train the siamese closure-distance embedding");
        bind_opt(c, "context", "context", o->context, "Burmeister .cxt file");
        bind_opt(c, "-o,--out", "out", o->out, "output directory");
        bind_opt(c, "-d,--d", "d", o->d, "embedding dimension");
        bind_opt(c, "--delta", "delta", o->delta, "pair distance: euclidean|cosine");
        bind_opt(c, "--target", "target", o->target, "target transform: auto|plain|squared");
        bind_opt(c, "--epochs", "epochs", o->epochs, "training epochs");
        bind_opt(c, "--lr0", "lr0", o->lr0, "learning rate");
        bind_opt(c, "--batch", "batch", o->batch, "mini-batch size");
        bind_opt(c, "-t,--sample-size", "sample-size", o->sample_size,
                 "max size of the seed attribute sets sampled for training");
        bind_opt(c, "--seed", "seed", o->seed, "random seed");
        c.required = {"context", "out", "seed"};
        c.run = [o] { return run_train_c2v(*o); };
        cmds.push_back(std::move(c));
    }
    for (bool attributes : {false, true}) {
        auto o = std::make_shared<TrainFcOpts>();
        Cmd c;
        c.app = make_sub(app, attributes ? "train-a2v" : "train-o2v",
                         attributes ? "train attribute embeddings on the transposed context"
                                    : "train object embeddings from concept extents");
        bind_opt(c, "context", "context", o->context, "Burmeister .cxt file");
        bind_opt(c, "-o,--out", "out", o->out, "output directory");
        bind_opt(c, "--arch", "arch", o->arch, "architecture: sg|cbow");
        bind_opt(c, "-d,--d", "d", o->d, "embedding dimension");
        bind_opt(c, "--epochs", "epochs", o->epochs, "training epochs");
        bind_opt(c, "--lr0", "lr0", o->lr0, "initial learning rate (linear decay)");
        bind_flag(c, "--global-shuffle", "global-shuffle", o->global_shuffle,
                  "flat-shuffle skip-gram examples across pairs");
        bind_opt(c, "--seed", "seed", o->seed, "random seed");
        c.required = {"context", "out", "seed"};
        c.run = [o, attributes] { return run_train_fc(*o, attributes); };
        cmds.push_back(std::move(c));
    }
    {
        auto o = std::make_shared<LinkPredOpts>();
        Cmd c;
        c.app = make_sub(app, "eval-linkpred",
                         "co-authorship link prediction on a temporal context");
        bind_opt(c, "context", "context", o->context, "Burmeister .cxt file (authors x papers)");
        bind_opt(c, "--years", "years", o->years, "TSV sidecar: attribute_name<TAB>year");
        bind_opt(c, "-o,--out", "out", o->out, "output directory");
        bind_opt(c, "--cutoff", "cutoff", o->cutoff, "last training year (inclusive)");
        bind_opt(c, "--window-start", "window-start", o->window_start, "first test year");
        bind_opt(c, "--window-end", "window-end", o->window_end, "last test year");
        bind_opt(c, "--arch", "arch", o->arch, "architecture: sg|cbow");
        bind_opt(c, "-d,--d", "d", o->d, "embedding dimension");
        bind_opt(c, "--rounds", "rounds", o->rounds, "experiment repetitions");
        bind_opt(c, "--epochs", "epochs", o->epochs, "training epochs per round");
        bind_opt(c, "--lr0", "lr0", o->lr0, "initial learning rate (linear decay)");
        bind_flag(c, "--untrained", "untrained", o->untrained,
                  "keep the randomly initialized embeddings (baseline)");
        bind_opt(c, "--seed", "seed", o->seed, "random seed");
        c.required = {"context", "years", "out", "cutoff", "window-start", "window-end", "seed"};
        c.run = [o] { return run_linkpred(*o); };
        cmds.push_back(std::move(c));
    }
    {
        auto o = std::make_shared<ClusterOpts>();
        Cmd c;
        c.app = make_sub(app, "eval-cluster",
                         "attribute clustering vs the canonical implication base");
        bind_opt(c, "context", "context", o->context, "Burmeister .cxt file");
        bind_opt(c, "-o,--out", "out", o->out, "output directory");
        bind_opt(c, "-d,--d", "d", o->d, "embedding dimension");
        bind_opt(c, "-k,--k", "k", o->k_set, "cluster counts (comma separated)")->delimiter(',');
        bind_opt(c, "--rounds", "rounds", o->rounds, "embedding repetitions");
        bind_opt(c, "--epochs", "epochs", o->epochs, "training epochs per round");
        bind_opt(c, "--lr0", "lr0", o->lr0, "initial learning rate (linear decay)");
        bind_opt(c, "--baseline-rounds", "baseline-rounds", o->baseline_rounds,
                 "random clusterings per embedding round");
        bind_opt(c, "--seed", "seed", o->seed, "random seed");
        c.required = {"context", "out", "seed"};
        c.run = [o] { return run_cluster(*o); };
        cmds.push_back(std::move(c));
    }
    {
        auto o = std::make_shared<CoversOpts>();
        Cmd c;
        c.app = make_sub(app, "eval-covers",
                         "embedding distances across covering vs non-covering concept pairs");
        bind_opt(c, "context", "context", o->context, "Burmeister .cxt file");
        bind_opt(c, "--checkpoint", "checkpoint", o->checkpoint,
                 "trunk checkpoint from train-closure2vec");
        bind_opt(c, "-o,--out", "out", o->out, "output directory");
        bind_opt(c, "--delta", "delta", o->delta, "pair distance used in training");
        bind_opt(c, "--sample-cap", "sample-cap", o->sample_cap,
                 "max sampled non-covering pairs");
        bind_opt(c, "--seed", "seed", o->seed, "random seed");
        c.required = {"context", "checkpoint", "out", "seed"};
        c.run = [o] { return run_eval_covers(*o); };
        cmds.push_back(std::move(c));
    }
    {
        auto o = std::make_shared<ImplOpts>();
        Cmd c;
        c.app = make_sub(app, "eval-implications",
                         "embedding distances around the canonical implication base");
        bind_opt(c, "context", "context", o->context, "Burmeister .cxt file");
        bind_opt(c, "--checkpoint", "checkpoint", o->checkpoint,
                 "trunk checkpoint from train-closure2vec");
        bind_opt(c, "-o,--out", "out", o->out, "output directory");
        bind_opt(c, "--delta", "delta", o->delta, "pair distance used in training");
        bind_opt(c, "--seed", "seed", o->seed, "random seed");
        c.required = {"context", "checkpoint", "out", "seed"};
        c.run = [o] { return run_eval_implications(*o); };
        cmds.push_back(std::move(c));
    }
    {
        auto o = std::make_shared<ScatterOpts>();
        Cmd c;
        c.app = make_sub(app, "scatter", "export a 2-d/3-d embedding table as a labeled CSV");
        bind_opt(c, "input", "input", o->input, "embedding TSV (name<TAB>v1<TAB>...)");
        bind_opt(c, "-o,--out", "out", o->out, "output CSV path");
        c.required = {"input", "out"};
        c.run = [o] { return run_scatter(*o); };
        cmds.push_back(std::move(c));
    }
    {
        auto o = std::make_shared<VerifyOpts>();
        Cmd c;
        c.app = make_sub(app, "verify-rudolph",
                         "check the exact closure network against the derivation operators");
        bind_opt(c, "context", "context", o->context, "Burmeister .cxt file");
        bind_opt(c, "--samples", "samples", o->samples,
                 "random subsets tested when exhaustion is infeasible");
        bind_opt(c, "--seed", "seed", o->seed, "random seed for sampled verification");
        c.required = {"context"};
        c.run = [o] { return run_verify(*o); };
        cmds.push_back(std::move(c));
    }
    {
        auto o = std::make_shared<ResidualOpts>();
        Cmd c;
        c.app = make_sub(app, "affine-residual",
                         "best affine fit residual of the closure map (impossibility witness)");
        bind_opt(c, "context", "context", o->context, "Burmeister .cxt file");
        c.required = {"context"};
        c.run = [o] { return run_residual(*o); };
        cmds.push_back(std::move(c));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        json cfg = load_config_file(config_path);
        for (Cmd& c : cmds)
            if (c.app->parsed()) {
                apply_config(c, cfg);
                if (app.count("--threads") == 0 && cfg.contains("threads"))
                    assign_from_json(g_threads_requested, cfg.at("threads"), "threads");
                g_threads = resolve_threads(g_threads_requested);
                return c.run();
            }
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
