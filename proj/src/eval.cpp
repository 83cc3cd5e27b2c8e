#include "fca2vec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "fca2vec/util.hpp"

namespace fca2vec {

namespace {

Edge normalized(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

DistanceStats make_stats(std::string label, const std::vector<double>& values) {
    DistanceStats s;
    s.label = std::move(label);
    s.mean = mean_of(values);
    s.stdev = sample_stdev(values);
    s.count = static_cast<long>(values.size());
    return s;
}

void fill_ratio_stats(RatioStats& r) {
    r.mean = mean_of(r.values);
    r.stdev = sample_stdev(r.values);
}

}  // namespace

// ---------------------------------------------------------------------------
// Temporal co-authorship graph

CoauthorGraph coauthor_graph(const FormalContext& ctx, const TemporalSplit& split) {
    if (!ctx.has_years())
        throw std::invalid_argument("coauthor_graph: context has no attribute years");
    if (!(split.train_cutoff_year < split.test_start_year &&
          split.test_start_year <= split.test_end_year))
        throw std::invalid_argument("coauthor_graph: cutoff must precede the test window");

    const int n = ctx.object_count();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };

    std::set<Edge> train_global;
    for (int m = 0; m < ctx.attribute_count(); ++m) {
        if (ctx.attribute_year(m) > split.train_cutoff_year) continue;
        std::vector<int> members = ctx.col(m).to_indices();
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                train_global.insert(normalized(members[i], members[j]));
                int a = find(members[i]), b = find(members[j]);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
    }
    if (train_global.empty())
        throw std::runtime_error("coauthor_graph: no co-authorship at or before the cutoff");

    std::map<int, std::vector<int>> components;
    for (int g = 0; g < n; ++g) components[find(g)].push_back(g);
    const std::vector<int>* best = nullptr;
    for (const auto& [root, members] : components) {
        (void)root;
        if (members.size() < 2) continue;
        if (!best || members.size() > best->size()) best = &members;
        // map iteration is ascending by root, so equal sizes keep the
        // component with the smallest root
    }
    CoauthorGraph out;
    out.component_objects = *best;  // ascending by construction

    std::vector<int> local_of(n, -1);
    for (std::size_t i = 0; i < out.component_objects.size(); ++i)
        local_of[out.component_objects[i]] = static_cast<int>(i);

    ObjSet keep_objs(n);
    for (int g : out.component_objects) keep_objs.set(g);
    AttrSet keep_attrs(ctx.attribute_count());
    for (int m = 0; m < ctx.attribute_count(); ++m) {
        if (ctx.attribute_year(m) > split.train_cutoff_year) continue;
        if (ctx.col(m).intersects(keep_objs)) keep_attrs.set(m);
    }
    out.training_context = restrict_context(ctx, keep_objs, keep_attrs);

    std::set<Edge> train_local;
    for (const Edge& e : train_global) {
        int a = local_of[e.first], b = local_of[e.second];
        if (a >= 0 && b >= 0) train_local.insert(normalized(a, b));
    }
    out.train_edges.assign(train_local.begin(), train_local.end());

    std::set<Edge> window_local;
    for (int m = 0; m < ctx.attribute_count(); ++m) {
        int year = ctx.attribute_year(m);
        if (year < split.test_start_year || year > split.test_end_year) continue;
        std::vector<int> members = ctx.col(m).to_indices();
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                int a = local_of[members[i]], b = local_of[members[j]];
                if (a >= 0 && b >= 0) window_local.insert(normalized(a, b));
            }
    }
    for (const Edge& e : window_local)
        if (!train_local.count(e)) out.test_positives.push_back(e);
    return out;
}

std::vector<Edge> negative_sample_edges(int n_nodes, const std::vector<Edge>& forbidden,
                                        int count, std::uint64_t seed) {
    if (n_nodes < 0) throw std::invalid_argument("negative_sample_edges: negative node count");
    if (count < 0) throw std::invalid_argument("negative_sample_edges: negative sample count");
    std::set<Edge> forb;
    for (const Edge& e : forbidden) {
        if (e.first < 0 || e.second < 0 || e.first >= n_nodes || e.second >= n_nodes ||
            e.first == e.second)
            throw std::invalid_argument("negative_sample_edges: forbidden edge out of range");
        forb.insert(normalized(e.first, e.second));
    }
    std::vector<Edge> candidates;
    for (int i = 0; i < n_nodes; ++i)
        for (int j = i + 1; j < n_nodes; ++j)
            if (!forb.count({i, j})) candidates.push_back({i, j});
    if (static_cast<std::size_t>(count) > candidates.size())
        throw std::runtime_error("negative_sample_edges: only " +
                                 std::to_string(candidates.size()) + " non-edges available, " +
                                 std::to_string(count) + " requested");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> picks = sample_without_replacement(candidates.size(),
                                                                static_cast<std::size_t>(count),
                                                                rng);
    std::vector<Edge> out;
    out.reserve(picks.size());
    for (std::size_t p : picks) out.push_back(candidates[p]);
    return out;
}

Vec edge_features(const EmbeddingTable& table, const Edge& e) {
    Vec a = table.row(e.first);
    Vec b = table.row(e.second);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    return a;
}

// ---------------------------------------------------------------------------
// Logistic regression

namespace {

double sigmoid_stable(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// Gauss-Jordan with partial pivoting and a tiny diagonal ridge; the systems
// here are (d+1)x(d+1) Newton steps.
Vec solve_small(std::vector<Vec> a, Vec b) {
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) a[i][i] += 1e-10;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        double p = a[col][col];
        if (p == 0.0) throw std::runtime_error("singular Newton system");
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / p;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

double logistic_objective(const std::vector<Vec>& x, const std::vector<int>& y, double c_reg,
                          const Vec& w, double b) {
    double obj = 0.0;
    for (double v : w) obj += 0.5 * v * v;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double s = b;
        for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[i][j];
        double margin = (y[i] == 1 ? s : -s);
        obj += c_reg * softplus(-margin);
    }
    return obj;
}

LogisticModel fit_logistic(const std::vector<Vec>& x, const std::vector<int>& y, double c_reg) {
    const std::size_t d = x.front().size();
    LogisticModel model;
    model.w.assign(d, 0.0);
    model.c_chosen = c_reg;

    for (int iter = 0; iter < 100; ++iter) {
        Vec grad(d + 1, 0.0);
        for (std::size_t j = 0; j < d; ++j) grad[j] = model.w[j];
        std::vector<Vec> hess(d + 1, Vec(d + 1, 0.0));
        for (std::size_t j = 0; j < d; ++j) hess[j][j] = 1.0;

        for (std::size_t i = 0; i < x.size(); ++i) {
            double s = model.b;
            for (std::size_t j = 0; j < d; ++j) s += model.w[j] * x[i][j];
            double p = sigmoid_stable(s);
            double r = c_reg * (p - y[i]);
            double q = c_reg * p * (1.0 - p);
            for (std::size_t j = 0; j < d; ++j) {
                grad[j] += r * x[i][j];
                for (std::size_t l = 0; l <= j; ++l) hess[j][l] += q * x[i][j] * x[i][l];
                hess[d][j] += q * x[i][j];
            }
            grad[d] += r;
            hess[d][d] += q;
        }
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t l = j + 1; l <= d; ++l) hess[j][l] = hess[l][j];

        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        if (gmax < 1e-9) break;

        Vec step = solve_small(hess, grad);
        double decrease = 0.0;
        for (std::size_t j = 0; j <= d; ++j) decrease += grad[j] * step[j];
        double f0 = logistic_objective(x, y, c_reg, model.w, model.b);
        double t = 1.0;
        Vec w_new;
        double b_new = 0.0;
        for (int half = 0; half < 50; ++half) {
            w_new = model.w;
            for (std::size_t j = 0; j < d; ++j) w_new[j] -= t * step[j];
            b_new = model.b - t * step[d];
            if (logistic_objective(x, y, c_reg, w_new, b_new) <= f0 - 1e-4 * t * decrease) break;
            t *= 0.5;
        }
        double moved = 0.0;
        for (std::size_t j = 0; j <= d; ++j) moved = std::max(moved, std::abs(t * step[j]));
        model.w = std::move(w_new);
        model.b = b_new;
        if (moved < 1e-12) break;
    }
    return model;
}

}  // namespace

double LogisticModel::predict_probability(const Vec& x) const {
    if (x.size() != w.size())
        throw std::invalid_argument("logistic prediction: feature width mismatch");
    double s = b;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
    return sigmoid_stable(s);
}

PrF1 binary_metrics(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("binary_metrics: length mismatch");
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] != 0 && truth[i] != 1)
            throw std::invalid_argument("binary_metrics: labels must be 0/1");
        if (predicted[i] != 0 && predicted[i] != 1)
            throw std::invalid_argument("binary_metrics: predictions must be 0/1");
        if (predicted[i] == 1 && truth[i] == 1) ++tp;
        if (predicted[i] == 1 && truth[i] == 0) ++fp;
        if (predicted[i] == 0 && truth[i] == 1) ++fn;
    }
    PrF1 m;
    m.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    m.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

LogisticModel logistic_regression_train(const std::vector<Vec>& features,
                                        const std::vector<int>& labels,
                                        const std::vector<double>& c_grid,
                                        std::uint64_t seed) {
    if (features.empty() || features.size() != labels.size())
        throw std::invalid_argument("logistic regression: empty or mismatched inputs");
    const std::size_t d = features.front().size();
    long positives = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].size() != d)
            throw std::invalid_argument("logistic regression: inconsistent feature widths");
        if (labels[i] != 0 && labels[i] != 1)
            throw std::invalid_argument("logistic regression: labels must be 0/1");
        positives += labels[i];
    }
    if (positives == 0 || positives == static_cast<long>(labels.size()))
        throw std::invalid_argument("logistic regression: both classes must be present");
    if (c_grid.empty()) throw std::invalid_argument("logistic regression: empty C grid");
    for (double c : c_grid)
        if (!(c > 0.0)) throw std::invalid_argument("logistic regression: C must be positive");

    const int n_folds = 5;
    std::vector<int> fold_of(labels.size(), 0);
    {
        std::mt19937_64 rng(derive_seed(seed, "cv-folds"));
        for (int cls = 0; cls <= 1; ++cls) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (labels[i] == cls) idx.push_back(i);
            std::shuffle(idx.begin(), idx.end(), rng);
            for (std::size_t j = 0; j < idx.size(); ++j)
                fold_of[idx[j]] = static_cast<int>(j % n_folds);
        }
    }

    double best_f1 = -1.0;
    double best_c = c_grid.front();
    for (double c : c_grid) {
        std::vector<double> fold_f1;
        for (int fold = 0; fold < n_folds; ++fold) {
            std::vector<Vec> xin;
            std::vector<int> yin, ytest;
            std::vector<Vec> xtest;
            for (std::size_t i = 0; i < features.size(); ++i) {
                if (fold_of[i] == fold) {
                    xtest.push_back(features[i]);
                    ytest.push_back(labels[i]);
                } else {
                    xin.push_back(features[i]);
                    yin.push_back(labels[i]);
                }
            }
            long pos = std::accumulate(yin.begin(), yin.end(), 0l);
            if (xtest.empty() || pos == 0 || pos == static_cast<long>(yin.size())) continue;
            LogisticModel m = fit_logistic(xin, yin, c);
            std::vector<int> pred;
            pred.reserve(xtest.size());
            for (const Vec& x : xtest) pred.push_back(m.predict(x) ? 1 : 0);
            fold_f1.push_back(binary_metrics(ytest, pred).f1);
        }
        double mean_f1 = fold_f1.empty() ? -1.0 : mean_of(fold_f1);
        if (mean_f1 > best_f1) {
            best_f1 = mean_f1;
            best_c = c;
        }
    }
    return fit_logistic(features, labels, best_c);
}

// ---------------------------------------------------------------------------
// Link prediction experiment

LinkPredictionResult link_prediction_experiment(const FormalContext& ctx,
                                                const TemporalSplit& split,
                                                const LinkPredictionConfig& cfg) {
    if (cfg.rounds < 1) throw std::invalid_argument("link prediction: rounds must be >= 1");
    if (cfg.d < 1) throw std::invalid_argument("link prediction: d must be >= 1");
    if (cfg.epochs < 1) throw std::invalid_argument("link prediction: epochs must be >= 1");
    if (cfg.lr0 < 0.0) throw std::invalid_argument("link prediction: lr0 must be >= 0");

    CoauthorGraph graph = coauthor_graph(ctx, split);
    const int n = static_cast<int>(graph.component_objects.size());
    if (graph.test_positives.empty())
        throw std::runtime_error("link prediction: no test positives inside the window");

    std::vector<Edge> train_neg = negative_sample_edges(
        n, graph.train_edges, static_cast<int>(graph.train_edges.size()),
        derive_seed(cfg.seed, "train-negatives"));
    std::vector<Edge> test_forbidden = graph.train_edges;
    test_forbidden.insert(test_forbidden.end(), graph.test_positives.begin(),
                          graph.test_positives.end());
    std::vector<Edge> test_neg = negative_sample_edges(
        n, test_forbidden, static_cast<int>(graph.test_positives.size()),
        derive_seed(cfg.seed, "test-negatives"));

    std::vector<Edge> train_set = graph.train_edges;
    train_set.insert(train_set.end(), train_neg.begin(), train_neg.end());
    std::vector<int> train_labels(graph.train_edges.size(), 1);
    train_labels.resize(train_set.size(), 0);
    std::vector<Edge> test_set = graph.test_positives;
    test_set.insert(test_set.end(), test_neg.begin(), test_neg.end());
    std::vector<int> test_labels(graph.test_positives.size(), 1);
    test_labels.resize(test_set.size(), 0);

    auto concepts = enumerate_concepts(graph.training_context);

    LinkPredictionResult result;
    result.component_size = n;
    result.train_examples = static_cast<int>(train_set.size());
    result.test_examples = static_cast<int>(test_set.size());

    std::vector<double> precisions, recalls, f1s;
    for (int round = 0; round < cfg.rounds; ++round) {
        Fc2VecConfig ec;
        ec.arch = cfg.arch;
        ec.d = cfg.d;
        ec.epochs = cfg.epochs;
        ec.lr0 = cfg.untrained_baseline ? 0.0 : cfg.lr0;
        ec.seed = derive_seed(cfg.seed, "embed-round-" + std::to_string(round));
        EmbeddingTable table = train_object2vec(graph.training_context, ec, &concepts).table;

        std::vector<Vec> train_x, test_x;
        train_x.reserve(train_set.size());
        for (const Edge& e : train_set) train_x.push_back(edge_features(table, e));
        test_x.reserve(test_set.size());
        for (const Edge& e : test_set) test_x.push_back(edge_features(table, e));

        LogisticModel clf = logistic_regression_train(
            train_x, train_labels, default_c_grid(),
            derive_seed(cfg.seed, "cv-round-" + std::to_string(round)));
        std::vector<int> pred;
        pred.reserve(test_x.size());
        for (const Vec& x : test_x) pred.push_back(clf.predict(x) ? 1 : 0);
        PrF1 m = binary_metrics(test_labels, pred);
        result.report.rounds.push_back(m);
        precisions.push_back(m.precision);
        recalls.push_back(m.recall);
        f1s.push_back(m.f1);
    }
    result.report.precision_mean = mean_of(precisions);
    result.report.precision_stdev = sample_stdev(precisions);
    result.report.recall_mean = mean_of(recalls);
    result.report.recall_stdev = sample_stdev(recalls);
    result.report.f1_mean = mean_of(f1s);
    result.report.f1_stdev = sample_stdev(f1s);
    return result;
}

// ---------------------------------------------------------------------------
// k-means

namespace {

double sq_dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

KmeansResult kmeans(const std::vector<Vec>& points, int k, std::uint64_t seed) {
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("kmeans: no points");
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("kmeans: k exceeds the number of points");
    const std::size_t dim = points.front().size();
    for (const Vec& p : points)
        if (p.size() != dim) throw std::invalid_argument("kmeans: inconsistent point widths");

    std::mt19937_64 rng(seed);
    KmeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < 10; ++restart) {
        // k-means++ seeding
        std::vector<Vec> centroids;
        centroids.reserve(k);
        std::uniform_int_distribution<std::size_t> first(0, n - 1);
        centroids.push_back(points[first(rng)]);
        std::vector<double> d2(n, 0.0);
        for (int c = 1; c < k; ++c) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double m = sq_dist(points[i], centroids[0]);
                for (std::size_t cc = 1; cc < centroids.size(); ++cc)
                    m = std::min(m, sq_dist(points[i], centroids[cc]));
                d2[i] = m;
                total += m;
            }
            std::size_t chosen;
            if (total <= 0.0) {
                chosen = first(rng);  // all mass on existing centroids
            } else {
                std::uniform_real_distribution<double> pickd(0.0, total);
                double r = pickd(rng);
                double cum = 0.0;
                chosen = n - 1;
                for (std::size_t i = 0; i < n; ++i) {
                    cum += d2[i];
                    if (r <= cum) {
                        chosen = i;
                        break;
                    }
                }
            }
            centroids.push_back(points[chosen]);
        }

        // Lloyd iterations until the assignment stabilizes
        std::vector<int> assign(n, -1);
        for (int iter = 0; iter < 300; ++iter) {
            bool changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                int arg = 0;
                double bestd = sq_dist(points[i], centroids[0]);
                for (int c = 1; c < k; ++c) {
                    double d = sq_dist(points[i], centroids[c]);
                    if (d < bestd) {
                        bestd = d;
                        arg = c;
                    }
                }
                if (assign[i] != arg) {
                    assign[i] = arg;
                    changed = true;
                }
            }
            if (!changed) break;
            std::vector<Vec> sums(k, Vec(dim, 0.0));
            std::vector<long> counts(k, 0);
            for (std::size_t i = 0; i < n; ++i) {
                ++counts[assign[i]];
                for (std::size_t j = 0; j < dim; ++j) sums[assign[i]][j] += points[i][j];
            }
            for (int c = 0; c < k; ++c) {
                if (counts[c] == 0) continue;  // empty cluster keeps its centroid
                for (std::size_t j = 0; j < dim; ++j)
                    centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
            }
        }
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) inertia += sq_dist(points[i], centroids[assign[i]]);
        if (inertia < best.inertia) {
            best.inertia = inertia;
            best.centroids = centroids;
            best.clustering.assignment.assign(assign.begin(), assign.end());
            best.clustering.k = k;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Attribute clustering

double intra_cluster_ratio(const std::vector<Implication>& base, const Clustering& clustering) {
    if (base.empty()) {
        std::cerr << "note: intra-cluster ratio of an empty implication set is reported as 0\n";
        return 0.0;
    }
    if (clustering.k < 1) throw std::invalid_argument("intra_cluster_ratio: invalid clustering");
    const int width = base.front().premise.width();
    if (static_cast<int>(clustering.assignment.size()) != width)
        throw std::invalid_argument("intra_cluster_ratio: assignment does not cover attributes");
    for (int id : clustering.assignment)
        if (id < 0 || id >= clustering.k)
            throw std::invalid_argument("intra_cluster_ratio: cluster id out of range");

    long intra = 0;
    for (const Implication& imp : base) {
        if (imp.premise.width() != width || imp.conclusion.width() != width)
            throw std::invalid_argument("intra_cluster_ratio: implication width mismatch");
        AttrSet all = imp.premise | imp.conclusion;
        int cluster = -1;
        bool contained = true;
        all.for_each_set([&](int m) {
            if (cluster == -1)
                cluster = clustering.assignment[m];
            else if (clustering.assignment[m] != cluster)
                contained = false;
        });
        if (contained) ++intra;
    }
    return static_cast<double>(intra) / static_cast<double>(base.size());
}

RatioStats random_clustering_baseline(const Clustering& clustering,
                                      const std::vector<Implication>& base, int rounds,
                                      std::uint64_t seed) {
    if (rounds < 1) throw std::invalid_argument("random baseline: rounds must be >= 1");
    std::mt19937_64 rng(seed);
    Clustering shuffled = clustering;
    RatioStats stats;
    stats.values.reserve(rounds);
    for (int r = 0; r < rounds; ++r) {
        std::shuffle(shuffled.assignment.begin(), shuffled.assignment.end(), rng);
        stats.values.push_back(intra_cluster_ratio(base, shuffled));
    }
    fill_ratio_stats(stats);
    return stats;
}

Clustering naive_clustering(const FormalContext& ctx, int k, std::uint64_t seed) {
    std::vector<Vec> points;
    points.reserve(ctx.attribute_count());
    for (int m = 0; m < ctx.attribute_count(); ++m) {
        Vec v(ctx.object_count(), 0.0);
        ctx.col(m).for_each_set([&](int g) { v[g] = 1.0; });
        points.push_back(std::move(v));
    }
    return kmeans(points, k, seed).clustering;
}

ClusteringExperimentResult clustering_experiment(const FormalContext& ctx,
                                                 const ClusteringExperimentConfig& cfg) {
    if (cfg.d < 1) throw std::invalid_argument("clustering experiment: d must be >= 1");
    if (cfg.rounds < 1) throw std::invalid_argument("clustering experiment: rounds must be >= 1");
    if (cfg.baseline_rounds < 1)
        throw std::invalid_argument("clustering experiment: baseline rounds must be >= 1");
    if (cfg.k_set.empty()) throw std::invalid_argument("clustering experiment: empty k set");
    for (int k : cfg.k_set)
        if (k < 1 || k > ctx.attribute_count())
            throw std::invalid_argument("clustering experiment: k out of range");

    std::vector<Implication> base = canonical_base(ctx);
    auto concepts = enumerate_concepts(ctx);

    ClusteringExperimentResult result;
    result.k_set = cfg.k_set;
    result.base_size = static_cast<long>(base.size());
    const Fc2VecArch archs[2] = {Fc2VecArch::SkipGram, Fc2VecArch::Cbow};
    for (Fc2VecArch arch : archs)
        for (int k : cfg.k_set) {
            ClusteringCell cell;
            cell.arch = arch;
            cell.k = k;
            result.cells.push_back(cell);
        }

    std::vector<std::vector<double>> max_sizes(result.cells.size());
    for (int round = 0; round < cfg.rounds; ++round) {
        for (int ai = 0; ai < 2; ++ai) {
            Fc2VecConfig ec;
            ec.arch = archs[ai];
            ec.d = cfg.d;
            ec.epochs = cfg.epochs;
            ec.lr0 = cfg.lr0;
            ec.seed = derive_seed(cfg.seed, std::string("embed-") + fc2vec_arch_name(archs[ai]) +
                                                "-round-" + std::to_string(round));
            EmbeddingTable table = train_attribute2vec(ctx, ec, &concepts).table;
            std::vector<Vec> points;
            points.reserve(table.names.size());
            for (std::size_t i = 0; i < table.names.size(); ++i)
                points.push_back(table.row(static_cast<int>(i)));

            for (std::size_t ki = 0; ki < cfg.k_set.size(); ++ki) {
                int k = cfg.k_set[ki];
                std::string tag = std::string(fc2vec_arch_name(archs[ai])) + "-k" +
                                  std::to_string(k) + "-round-" + std::to_string(round);
                KmeansResult km = kmeans(points, k, derive_seed(cfg.seed, "kmeans-" + tag));
                std::size_t cell_idx = static_cast<std::size_t>(ai) * cfg.k_set.size() + ki;
                ClusteringCell& cell = result.cells[cell_idx];
                cell.ratio.values.push_back(intra_cluster_ratio(base, km.clustering));

                std::vector<long> sizes(k, 0);
                for (int id : km.clustering.assignment) ++sizes[id];
                max_sizes[cell_idx].push_back(
                    static_cast<double>(*std::max_element(sizes.begin(), sizes.end())));

                RatioStats rb = random_clustering_baseline(
                    km.clustering, base, cfg.baseline_rounds,
                    derive_seed(cfg.seed, "baseline-" + tag));
                cell.random_baseline.values.insert(cell.random_baseline.values.end(),
                                                   rb.values.begin(), rb.values.end());
            }
        }
    }
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        fill_ratio_stats(result.cells[i].ratio);
        fill_ratio_stats(result.cells[i].random_baseline);
        result.cells[i].max_cluster_mean = mean_of(max_sizes[i]);
    }
    for (std::size_t ki = 0; ki < cfg.k_set.size(); ++ki) {
        Clustering naive = naive_clustering(
            ctx, cfg.k_set[ki],
            derive_seed(cfg.seed, "naive-k" + std::to_string(cfg.k_set[ki])));
        result.naive_ratio.push_back(intra_cluster_ratio(base, naive));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Distance structure experiments

CoveringDistanceResult covering_distance_experiment(const SiameseModel& model,
                                                    const ConceptLattice& lattice,
                                                    long sample_cap, std::uint64_t seed) {
    const std::size_t n = lattice.concepts.size();
    if (n == 0) throw std::invalid_argument("covering distances: empty lattice");
    if (sample_cap < 0) throw std::invalid_argument("covering distances: negative sample cap");
    std::vector<Vec> embeds;
    embeds.reserve(n);
    for (const Concept& c : lattice.concepts) embeds.push_back(embed_attrset(model, c.intent));

    std::vector<double> cr;
    cr.reserve(lattice.covers.size());
    std::unordered_set<long long> cover_keys;
    cover_keys.reserve(lattice.covers.size() * 2);
    for (const CoverEdge& e : lattice.covers) {
        cr.push_back(vector_distance(model.delta, embeds[e.first], embeds[e.second]));
        int lo = std::min(e.first, e.second), hi = std::max(e.first, e.second);
        cover_keys.insert(static_cast<long long>(lo) * static_cast<long long>(n) + hi);
    }

    long long total_pairs = static_cast<long long>(n) * (n - 1) / 2;
    long long non_total = total_pairs - static_cast<long long>(cover_keys.size());
    long long target = std::min<long long>(sample_cap, non_total);
    std::vector<double> non_cr;
    non_cr.reserve(static_cast<std::size_t>(target));
    if (target == non_total) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                long long key = static_cast<long long>(i) * static_cast<long long>(n) + j;
                if (cover_keys.count(key)) continue;
                non_cr.push_back(vector_distance(model.delta, embeds[i], embeds[j]));
            }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::unordered_set<long long> drawn;
        drawn.reserve(static_cast<std::size_t>(target) * 2);
        while (static_cast<long long>(non_cr.size()) < target) {
            std::size_t a = pick(rng), b = pick(rng);
            if (a == b) continue;
            std::size_t lo = std::min(a, b), hi = std::max(a, b);
            long long key = static_cast<long long>(lo) * static_cast<long long>(n) + hi;
            if (cover_keys.count(key) || !drawn.insert(key).second) continue;
            non_cr.push_back(vector_distance(model.delta, embeds[lo], embeds[hi]));
        }
    }
    CoveringDistanceResult result;
    result.cover = make_stats("covering", cr);
    result.non_cover = make_stats("non-covering", non_cr);
    return result;
}

ImplicationDistanceResult implication_distance_experiment(const SiameseModel& model,
                                                          const std::vector<Implication>& base,
                                                          std::uint64_t seed) {
    ImplicationDistanceResult result;
    std::vector<double> s_imp, non_s_imp, imp, non_imp;
    if (base.empty()) {
        std::cerr << "note: implication distance experiment on an empty implication set\n";
    } else {
        const int n_m = base.front().premise.width();
        std::vector<Vec> singleton(n_m);
        for (int m = 0; m < n_m; ++m) {
            AttrSet s(n_m);
            s.set(m);
            singleton[m] = embed_attrset(model, s);
        }
        std::mt19937_64 rng(seed);
        for (const Implication& im : base) {
            Vec pe = embed_attrset(model, im.premise);
            Vec ce = embed_attrset(model, im.conclusion);
            for (int m = 0; m < n_m; ++m) {
                double d = vector_distance(model.delta, pe, singleton[m]);
                if (im.conclusion.test(m))
                    s_imp.push_back(d);
                else
                    non_s_imp.push_back(d);
            }
            imp.push_back(vector_distance(model.delta, pe, ce));

            auto random_set = [&](int size) {
                AttrSet s(n_m);
                for (std::size_t i : sample_without_replacement(n_m, size, rng))
                    s.set(static_cast<int>(i));
                return s;
            };
            AttrSet x = random_set(im.premise.count());
            AttrSet y = random_set(im.conclusion.count());
            non_imp.push_back(
                vector_distance(model.delta, embed_attrset(model, x), embed_attrset(model, y)));
        }
    }
    result.single_implied = make_stats("implied-attribute", s_imp);
    result.single_non_implied = make_stats("non-implied-attribute", non_s_imp);
    result.implication = make_stats("premise-closure", imp);
    result.non_implication = make_stats("random-size-matched", non_imp);
    return result;
}

// ---------------------------------------------------------------------------
// Scatter export

void save_scatter_csv(const std::vector<Vec>& points, const std::vector<std::string>& labels,
                      const std::string& path) {
    if (points.size() != labels.size())
        throw std::invalid_argument("scatter export: point/label count mismatch");
    std::size_t dim = points.empty() ? 2 : points.front().size();
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("scatter export: points must be 2- or 3-dimensional");
    for (const Vec& p : points)
        if (p.size() != dim) throw std::invalid_argument("scatter export: mixed point widths");
    for (const std::string& l : labels)
        if (l.find_first_of(",\"\r\n") != std::string::npos)
            throw std::invalid_argument("scatter export: label contains CSV metacharacters");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << (dim == 2 ? "x,y,label\n" : "x,y,z,label\n");
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < dim; ++j) out << format_double(points[i][j]) << ',';
        out << labels[i] << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fca2vec
