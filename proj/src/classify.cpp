#include "rffhsi/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "rffhsi/threading.hpp"

namespace rffhsi {

namespace {

// LRU cache of training Gram rows, bounded by a byte budget.
class KernelRowCache {
public:
    KernelRowCache(const Matrix& x, double gamma, std::size_t budget_bytes)
        : x_(x), gamma_(gamma), norms_(x.colwise().squaredNorm().transpose()) {
        const std::size_t row_bytes = sizeof(double) * static_cast<std::size_t>(x.cols());
        max_rows_ = std::max<std::size_t>(2, budget_bytes / std::max<std::size_t>(1, row_bytes));
    }

    const Vector& row(std::int64_t i) {
        auto it = index_.find(i);
        if (it != index_.end()) {
            rows_.splice(rows_.begin(), rows_, it->second);
            return rows_.front().second;
        }
        if (rows_.size() >= max_rows_) {
            index_.erase(rows_.back().first);
            rows_.pop_back();
        }
        Vector values = (-gamma_ * ((norms_.array() + norms_(i)) -
                                    2.0 * (x_.transpose() * x_.col(i)).array()))
                            .max(-700.0)
                            .exp()
                            .matrix();
        rows_.emplace_front(i, std::move(values));
        index_[i] = rows_.begin();
        return rows_.front().second;
    }

private:
    const Matrix& x_;
    double gamma_;
    Vector norms_;
    std::size_t max_rows_;
    std::list<std::pair<std::int64_t, Vector>> rows_;
    std::unordered_map<std::int64_t, std::list<std::pair<std::int64_t, Vector>>::iterator> index_;
};

}  // namespace

double SvmBinaryModel::decision(const Vector& x) const {
    if (x.size() != support_vectors.rows())
        throw_dimension("decision input dimension mismatch");
    double value = bias;
    for (std::int64_t s = 0; s < support_vectors.cols(); ++s)
        value += dual_coeffs(s) *
                 std::exp(-kernel.gamma * (support_vectors.col(s) - x).squaredNorm());
    return value;
}

SvmBinaryModel svm_train_binary(const Matrix& x, const std::vector<int>& y_pm1, double cost,
                                const KernelParams& kernel, const SvmTrainOptions& options) {
    const std::int64_t n = x.cols();
    if (static_cast<std::size_t>(n) != y_pm1.size())
        throw_dimension("label count does not match sample count");
    if (!(cost > 0.0)) throw_usage("cost must be positive");
    bool has_pos = false, has_neg = false;
    for (int y : y_pm1) {
        if (y == 1) has_pos = true;
        else if (y == -1) has_neg = true;
        else throw_usage("binary labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw_usage("binary training needs both classes");

    KernelRowCache cache(x, kernel.gamma, options.cache_mb * (1 << 20));
    std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
    // G_k = y_k - sum_m alpha_m y_m K(x_m, x_k); the maximal-violating-pair
    // selection and the stopping rule both read it directly.
    std::vector<double> grad(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) grad[static_cast<std::size_t>(k)] = y_pm1[static_cast<std::size_t>(k)];

    bool converged = false;
    std::int64_t passes = 0;
    double g_max = 0.0, g_min = 0.0;
    for (; passes < options.max_passes; ++passes) {
        std::int64_t i = -1, j = -1;
        g_max = -std::numeric_limits<double>::infinity();
        g_min = std::numeric_limits<double>::infinity();
        for (std::int64_t k = 0; k < n; ++k) {
            const int y = y_pm1[static_cast<std::size_t>(k)];
            const double a = alpha[static_cast<std::size_t>(k)];
            const double g = grad[static_cast<std::size_t>(k)];
            const bool in_up = (y == 1 && a < cost) || (y == -1 && a > 0.0);
            const bool in_low = (y == 1 && a > 0.0) || (y == -1 && a < cost);
            if (in_up && g > g_max) { g_max = g; i = k; }
            if (in_low && g < g_min) { g_min = g; j = k; }
        }
        if (i < 0 || j < 0 || g_max - g_min <= options.tol) {
            converged = true;
            break;
        }

        const Vector& row_i = cache.row(i);
        const Vector& row_j = cache.row(j);
        const int yi = y_pm1[static_cast<std::size_t>(i)];
        const int yj = y_pm1[static_cast<std::size_t>(j)];
        const double eta = std::max(row_i(i) + row_j(j) - 2.0 * row_i(j), 1e-12);

        const double room_i = yi == 1 ? cost - alpha[static_cast<std::size_t>(i)]
                                      : alpha[static_cast<std::size_t>(i)];
        const double room_j = yj == 1 ? alpha[static_cast<std::size_t>(j)]
                                      : cost - alpha[static_cast<std::size_t>(j)];
        const double step = std::min({room_i, room_j, (g_max - g_min) / eta});
        alpha[static_cast<std::size_t>(i)] += yi * step;
        alpha[static_cast<std::size_t>(j)] -= yj * step;
        for (std::int64_t k = 0; k < n; ++k)
            grad[static_cast<std::size_t>(k)] -= step * (row_i(k) - row_j(k));
    }

    SvmBinaryModel model;
    model.kernel = kernel;
    model.converged = converged;

    // Bias from the free support vectors; midpoint of the violating-pair
    // bounds when none are free.
    double free_sum = 0.0;
    std::int64_t free_count = 0;
    for (std::int64_t k = 0; k < n; ++k) {
        const double a = alpha[static_cast<std::size_t>(k)];
        if (a > 1e-12 && a < cost - 1e-12 * cost) {
            free_sum += grad[static_cast<std::size_t>(k)];
            ++free_count;
        }
    }
    model.bias = free_count > 0 ? free_sum / static_cast<double>(free_count)
                                : 0.5 * (g_max + g_min);

    std::vector<std::int64_t> sv;
    for (std::int64_t k = 0; k < n; ++k)
        if (alpha[static_cast<std::size_t>(k)] > 0.0) sv.push_back(k);
    model.support_vectors.resize(x.rows(), static_cast<std::int64_t>(sv.size()));
    model.dual_coeffs.resize(static_cast<std::int64_t>(sv.size()));
    model.sv_indices = sv;
    for (std::size_t s = 0; s < sv.size(); ++s) {
        model.support_vectors.col(static_cast<std::int64_t>(s)) = x.col(sv[s]);
        model.dual_coeffs(static_cast<std::int64_t>(s)) =
            alpha[static_cast<std::size_t>(sv[s])] * y_pm1[static_cast<std::size_t>(sv[s])];
    }
    return model;
}

SvmMulticlassModel svm_train_multiclass(const Matrix& x, const LabelVector& labels, double cost,
                                        const KernelParams& kernel,
                                        const SvmTrainOptions& options) {
    check_same_length(x, labels);
    const int num_classes = labels.num_classes;
    if (num_classes < 2) throw_usage("multiclass training needs at least 2 classes");

    SvmMulticlassModel model;
    model.num_classes = num_classes;
    model.kernel = kernel;
    for (int a = 1; a <= num_classes; ++a) {
        for (int b = a + 1; b <= num_classes; ++b) {
            std::vector<std::int64_t> indices;
            std::vector<int> y;
            for (std::size_t k = 0; k < labels.ids.size(); ++k) {
                if (labels.ids[k] == a || labels.ids[k] == b) {
                    indices.push_back(static_cast<std::int64_t>(k));
                    y.push_back(labels.ids[k] == a ? 1 : -1);
                }
            }
            Matrix pair_x(x.rows(), static_cast<std::int64_t>(indices.size()));
            for (std::size_t k = 0; k < indices.size(); ++k)
                pair_x.col(static_cast<std::int64_t>(k)) = x.col(indices[k]);
            SvmBinaryModel binary = svm_train_binary(pair_x, y, cost, kernel, options);
            binary.class_a = a;
            binary.class_b = b;
            model.models.push_back(std::move(binary));
        }
    }
    return model;
}

std::vector<int> svm_predict(const SvmMulticlassModel& model, const Matrix& x) {
    const int num_classes = model.num_classes;
    std::vector<int> predictions(static_cast<std::size_t>(x.cols()));
    parallel_for(x.cols(), [&](std::int64_t col) {
        std::vector<int> votes(static_cast<std::size_t>(num_classes) + 1, 0);
        std::vector<double> scores(static_cast<std::size_t>(num_classes) + 1, 0.0);
        const Vector point = x.col(col);
        for (const auto& binary : model.models) {
            const double value = binary.decision(point);
            if (value >= 0.0) ++votes[static_cast<std::size_t>(binary.class_a)];
            else ++votes[static_cast<std::size_t>(binary.class_b)];
            scores[static_cast<std::size_t>(binary.class_a)] += value;
            scores[static_cast<std::size_t>(binary.class_b)] -= value;
        }
        int best = 1;
        for (int c = 2; c <= num_classes; ++c) {
            if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)] ||
                (votes[static_cast<std::size_t>(c)] == votes[static_cast<std::size_t>(best)] &&
                 scores[static_cast<std::size_t>(c)] > scores[static_cast<std::size_t>(best)]))
                best = c;
        }
        predictions[static_cast<std::size_t>(col)] = best;
    });
    return predictions;
}

std::vector<double> default_cost_grid() {
    std::vector<double> grid;
    for (int a = -5; a <= 15; ++a) grid.push_back(std::ldexp(1.0, a));
    return grid;
}

std::vector<double> default_gamma_grid() {
    std::vector<double> grid;
    for (int b = -15; b <= -1; b += 2) grid.push_back(std::ldexp(1.0, b));
    for (int b : {1, 3, 4, 5}) grid.push_back(std::ldexp(1.0, b));
    return grid;
}

namespace {

std::vector<std::vector<std::int64_t>> stratified_folds(const LabelVector& labels, int folds,
                                                        std::uint64_t seed) {
    std::vector<std::vector<std::int64_t>> by_class(static_cast<std::size_t>(labels.num_classes));
    for (std::size_t i = 0; i < labels.ids.size(); ++i)
        by_class[static_cast<std::size_t>(labels.ids[i] - 1)].push_back(static_cast<std::int64_t>(i));

    auto rng = make_rng(mix_seed(seed, seed_offset::folds));
    std::vector<std::vector<std::int64_t>> fold_indices(static_cast<std::size_t>(folds));
    for (auto& idx : by_class) {
        if (static_cast<int>(idx.size()) < folds)
            throw_usage("a class has fewer samples than folds");
        for (std::size_t i = idx.size(); i > 1; --i) {
            std::uniform_int_distribution<std::size_t> pick(0, i - 1);
            std::swap(idx[i - 1], idx[pick(rng)]);
        }
        for (std::size_t i = 0; i < idx.size(); ++i)
            fold_indices[i % static_cast<std::size_t>(folds)].push_back(idx[i]);
    }
    for (auto& fold : fold_indices) std::sort(fold.begin(), fold.end());
    return fold_indices;
}

}  // namespace

GridSearchResult grid_search_cv(const Matrix& x, const LabelVector& labels,
                                const std::vector<double>& cost_grid,
                                const std::vector<double>& gamma_grid, int folds,
                                std::uint64_t seed, const SvmTrainOptions& options) {
    check_same_length(x, labels);
    if (folds < 2) throw_usage("cross validation needs at least 2 folds");
    if (cost_grid.empty() || gamma_grid.empty()) throw_usage("parameter grids must be nonempty");
    const auto fold_indices = stratified_folds(labels, folds, seed);

    // Precompute per-fold train/validation views once; cells share them.
    struct FoldData {
        Matrix train_x, val_x;
        LabelVector train_labels;
        std::vector<int> val_ids;
    };
    std::vector<FoldData> fold_data(static_cast<std::size_t>(folds));
    for (int f = 0; f < folds; ++f) {
        std::vector<std::int64_t> train_idx;
        for (int g = 0; g < folds; ++g)
            if (g != f)
                train_idx.insert(train_idx.end(), fold_indices[static_cast<std::size_t>(g)].begin(),
                                 fold_indices[static_cast<std::size_t>(g)].end());
        std::sort(train_idx.begin(), train_idx.end());
        auto& data = fold_data[static_cast<std::size_t>(f)];
        const auto& val_idx = fold_indices[static_cast<std::size_t>(f)];
        data.train_x.resize(x.rows(), static_cast<std::int64_t>(train_idx.size()));
        for (std::size_t k = 0; k < train_idx.size(); ++k)
            data.train_x.col(static_cast<std::int64_t>(k)) = x.col(train_idx[k]);
        data.val_x.resize(x.rows(), static_cast<std::int64_t>(val_idx.size()));
        std::vector<int> train_ids;
        for (std::int64_t idx : train_idx) train_ids.push_back(labels.ids[static_cast<std::size_t>(idx)]);
        data.train_labels = make_label_vector(std::move(train_ids));
        for (std::size_t k = 0; k < val_idx.size(); ++k) {
            data.val_x.col(static_cast<std::int64_t>(k)) = x.col(val_idx[k]);
            data.val_ids.push_back(labels.ids[static_cast<std::size_t>(val_idx[k])]);
        }
    }

    GridSearchResult result;
    result.costs = cost_grid;
    result.gammas = gamma_grid;
    result.folds = folds;
    result.cv_accuracy.resize(static_cast<std::int64_t>(cost_grid.size()),
                              static_cast<std::int64_t>(gamma_grid.size()));

    const std::int64_t cells = static_cast<std::int64_t>(cost_grid.size() * gamma_grid.size());
    parallel_for(cells, [&](std::int64_t cell) {
        const std::size_t ci = static_cast<std::size_t>(cell) / gamma_grid.size();
        const std::size_t gi = static_cast<std::size_t>(cell) % gamma_grid.size();
        const KernelParams kernel{gamma_grid[gi]};
        double accuracy_sum = 0.0;
        for (const auto& fold : fold_data) {
            const SvmMulticlassModel model =
                svm_train_multiclass(fold.train_x, fold.train_labels, cost_grid[ci], kernel, options);
            const std::vector<int> pred = svm_predict(model, fold.val_x);
            std::int64_t correct = 0;
            for (std::size_t k = 0; k < pred.size(); ++k)
                if (pred[k] == fold.val_ids[k]) ++correct;
            accuracy_sum += static_cast<double>(correct) / static_cast<double>(pred.size());
        }
        result.cv_accuracy(static_cast<std::int64_t>(ci), static_cast<std::int64_t>(gi)) =
            100.0 * accuracy_sum / static_cast<double>(fold_data.size());
    });

    double best = -1.0;
    for (std::size_t ci = 0; ci < cost_grid.size(); ++ci) {
        for (std::size_t gi = 0; gi < gamma_grid.size(); ++gi) {
            const double acc = result.cv_accuracy(static_cast<std::int64_t>(ci),
                                                  static_cast<std::int64_t>(gi));
            const bool better =
                acc > best ||
                (acc == best && (cost_grid[ci] < result.best_cost ||
                                 (cost_grid[ci] == result.best_cost &&
                                  gamma_grid[gi] < result.best_gamma)));
            if (better) {
                best = acc;
                result.best_cost = cost_grid[ci];
                result.best_gamma = gamma_grid[gi];
            }
        }
    }
    return result;
}

std::vector<int> knn_predict(const Matrix& train_x, const LabelVector& train_labels,
                             const Matrix& test_x, int k) {
    check_same_length(train_x, train_labels);
    if (train_x.cols() < 1) throw_dimension("knn needs a nonempty training set");
    if (train_x.rows() != test_x.rows()) throw_dimension("knn train/test dimension mismatch");
    if (k < 1) throw_usage("k must be >= 1");
    const std::int64_t n = train_x.cols();
    const std::int64_t effective_k = std::min<std::int64_t>(k, n);

    std::vector<int> predictions(static_cast<std::size_t>(test_x.cols()));
    parallel_for(test_x.cols(), [&](std::int64_t col) {
        std::vector<std::pair<double, std::int64_t>> distances(static_cast<std::size_t>(n));
        for (std::int64_t t = 0; t < n; ++t)
            distances[static_cast<std::size_t>(t)] = {
                (train_x.col(t) - test_x.col(col)).squaredNorm(), t};
        std::partial_sort(distances.begin(), distances.begin() + effective_k, distances.end());
        std::vector<int> votes(static_cast<std::size_t>(train_labels.num_classes) + 1, 0);
        for (std::int64_t t = 0; t < effective_k; ++t)
            ++votes[static_cast<std::size_t>(
                train_labels.ids[static_cast<std::size_t>(distances[static_cast<std::size_t>(t)].second)])];
        int best = 1;
        for (int c = 2; c <= train_labels.num_classes; ++c)
            if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
        predictions[static_cast<std::size_t>(col)] = best;
    });
    return predictions;
}

double svm_kkt_residual(const SvmBinaryModel& model, const Matrix& x,
                        const std::vector<int>& y_pm1, double cost) {
    const std::int64_t n = x.cols();
    std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
    for (std::size_t s = 0; s < model.sv_indices.size(); ++s)
        alpha[static_cast<std::size_t>(model.sv_indices[s])] =
            std::abs(model.dual_coeffs(static_cast<std::int64_t>(s)));
    double worst = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        const double margin =
            y_pm1[static_cast<std::size_t>(k)] * model.decision(x.col(k)) - 1.0;
        const double a = alpha[static_cast<std::size_t>(k)];
        double violation;
        if (a <= 1e-12) violation = std::max(0.0, -margin);
        else if (a >= cost - 1e-12 * cost) violation = std::max(0.0, margin);
        else violation = std::abs(margin);
        worst = std::max(worst, violation);
    }
    return worst;
}

double svm_dual_objective(const SvmBinaryModel& model) {
    const std::int64_t n_sv = model.support_vectors.cols();
    double alpha_sum = 0.0;
    for (std::int64_t s = 0; s < n_sv; ++s) alpha_sum += std::abs(model.dual_coeffs(s));
    const Matrix gram = rbf_gram(model.support_vectors, model.support_vectors, model.kernel);
    const double quad = model.dual_coeffs.dot(gram * model.dual_coeffs);
    return alpha_sum - 0.5 * quad;
}

}  // namespace rffhsi
