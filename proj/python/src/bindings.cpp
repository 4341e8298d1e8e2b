#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rffhsi/classify.hpp"
#include "rffhsi/eval.hpp"
#include "rffhsi/hsi.hpp"
#include "rffhsi/model_io.hpp"
#include "rffhsi/reducer.hpp"

namespace py = pybind11;
using namespace rffhsi;

namespace {

LabelVector labels_from(const std::vector<int>& ids) { return make_label_vector(ids); }

ReducerSpec make_spec(const std::string& method, int components, int rff_features, int landmarks,
                      std::optional<double> sigma, std::uint64_t seed,
                      const std::string& centered_kernel, const std::string& bandwidth_rule,
                      std::int64_t max_pairs, const std::string& nonlinearity) {
    ReducerSpec spec;
    spec.method = reducer_method_from_string(method);
    spec.components = components;
    spec.rff_features = rff_features;
    spec.landmarks = landmarks;
    spec.sigma = sigma;
    spec.seed = seed;
    if (centered_kernel == "auto") spec.centered_kernel = KernelCentering::automatic;
    else if (centered_kernel == "on") spec.centered_kernel = KernelCentering::on;
    else if (centered_kernel == "off") spec.centered_kernel = KernelCentering::off;
    else throw_usage("centered_kernel must be auto, on, or off");
    if (bandwidth_rule == "mean-squared") spec.bandwidth_rule = BandwidthRule::mean_squared_distance;
    else if (bandwidth_rule == "mean") spec.bandwidth_rule = BandwidthRule::mean_distance;
    else throw_usage("bandwidth_rule must be mean-squared or mean");
    spec.max_pairs = max_pairs;
    if (nonlinearity == "logcosh") spec.nonlinearity = IcaNonlinearity::logcosh;
    else if (nonlinearity == "cube") spec.nonlinearity = IcaNonlinearity::cube;
    else throw_usage("nonlinearity must be logcosh or cube");
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Random-Fourier-feature ICA/LDA dimensionality reduction for hyperspectral images";

    py::register_exception<Error>(m, "RffhsiError");

    m.def(
        "estimate_bandwidth",
        [](const Matrix& x, std::int64_t max_pairs, std::uint64_t seed, const std::string& rule) {
            return estimate_bandwidth(x, max_pairs, seed,
                                      rule == "mean" ? BandwidthRule::mean_distance
                                                     : BandwidthRule::mean_squared_distance);
        },
        py::arg("x"), py::arg("max_pairs") = kDefaultMaxPairs, py::arg("seed") = 0,
        py::arg("rule") = "mean-squared",
        "RBF bandwidth from pairwise distances of the (d, N) sample matrix");

    m.def("gamma_from_sigma", &gamma_from_sigma, py::arg("sigma"));

    py::class_<RffMap>(m, "RffMap")
        .def_readonly("coefficients", &RffMap::coefficients)
        .def_readonly("offsets", &RffMap::offsets)
        .def_readonly("sigma", &RffMap::sigma)
        .def_readonly("seed", &RffMap::seed)
        .def_property_readonly("input_dim", &RffMap::input_dim)
        .def_property_readonly("feature_count", &RffMap::feature_count);

    m.def("sample_rff_map", &sample_rff_map, py::arg("dim"), py::arg("feature_count"),
          py::arg("sigma"), py::arg("seed") = 0);
    m.def("apply_rff", &apply_rff, py::arg("map"), py::arg("x"),
          "z(x) = sqrt(2/D) cos(R^T x + b) columnwise over a (d, N) matrix");

    m.def(
        "rbf_kernel",
        [](const Vector& x, const Vector& y, double gamma) {
            return rbf_kernel(x, y, KernelParams{gamma});
        },
        py::arg("x"), py::arg("y"), py::arg("gamma"));

    py::class_<LandmarkSet>(m, "LandmarkSet")
        .def_readonly("points", &LandmarkSet::points)
        .def_readonly("source_indices", &LandmarkSet::source_indices)
        .def_property_readonly("count", &LandmarkSet::count);

    m.def(
        "select_landmarks",
        [](const Matrix& x, int m_, std::uint64_t seed, double gamma) {
            return select_landmarks(x, m_, seed, KernelParams{gamma});
        },
        py::arg("x"), py::arg("m"), py::arg("seed"), py::arg("gamma"));
    m.def(
        "kernel_feature_map",
        [](const Matrix& x, const LandmarkSet& landmarks, double gamma, bool centered) {
            return kernel_feature_map(x, landmarks, KernelParams{gamma}, centered);
        },
        py::arg("x"), py::arg("landmarks"), py::arg("gamma"), py::arg("centered") = false);

    py::class_<ReducerModel>(m, "ReducerModel")
        .def_property_readonly("method",
                               [](const ReducerModel& model) { return to_string(model.spec.method); })
        .def_property_readonly("components", &ReducerModel::components)
        .def_readonly("sigma_used", &ReducerModel::sigma_used)
        .def_readonly("fit_seconds", &ReducerModel::fit_seconds)
        .def_readonly("input_dim", &ReducerModel::input_dim)
        .def_readonly("fit_scope", &ReducerModel::fit_scope);

    m.def(
        "fit",
        [](const std::string& method, const Matrix& x, std::optional<std::vector<int>> labels,
           int components, int rff_features, int landmarks, std::optional<double> sigma,
           std::uint64_t seed, const std::string& centered_kernel,
           const std::string& bandwidth_rule, std::int64_t max_pairs,
           const std::string& nonlinearity) {
            const ReducerSpec spec =
                make_spec(method, components, rff_features, landmarks, sigma, seed,
                          centered_kernel, bandwidth_rule, max_pairs, nonlinearity);
            if (labels) {
                const LabelVector lv = labels_from(*labels);
                return fit_reducer(spec, x, &lv);
            }
            return fit_reducer(spec, x, nullptr);
        },
        py::arg("method"), py::arg("x"), py::arg("labels") = std::nullopt,
        py::arg("components") = 10, py::arg("rff_features") = 0, py::arg("landmarks") = 2000,
        py::arg("sigma") = std::nullopt, py::arg("seed") = 0, py::arg("centered_kernel") = "auto",
        py::arg("bandwidth_rule") = "mean-squared", py::arg("max_pairs") = kDefaultMaxPairs,
        py::arg("nonlinearity") = "logcosh",
        "Fit one of ica|kica|rffica|lda|gda|rfflda on a (d, N) sample matrix");

    m.def("transform", &reducer_transform, py::arg("model"), py::arg("x"),
          "Project a (d, N) matrix to (components, N)");

    m.def("save_model", &save_reducer, py::arg("path"), py::arg("model"));
    m.def("load_model", &load_reducer, py::arg("path"));

    m.def(
        "stratified_split",
        [](const std::vector<int>& labels, int per_class, std::uint64_t seed) {
            const DatasetSplit split = stratified_split(labels, per_class, seed);
            return py::make_tuple(split.train_indices, split.test_indices);
        },
        py::arg("labels"), py::arg("per_class"), py::arg("seed") = 0,
        "(train_indices, test_indices); label 0 is background");

    m.def("class_counts", &class_counts, py::arg("labels"));

    m.def(
        "knn_predict",
        [](const Matrix& train_x, const std::vector<int>& train_labels, const Matrix& test_x,
           int k) { return knn_predict(train_x, labels_from(train_labels), test_x, k); },
        py::arg("train_x"), py::arg("train_labels"), py::arg("test_x"), py::arg("k") = 1);

    py::class_<SvmMulticlassModel>(m, "SvmModel")
        .def_readonly("num_classes", &SvmMulticlassModel::num_classes)
        .def_property_readonly("gamma",
                               [](const SvmMulticlassModel& model) { return model.kernel.gamma; })
        .def_property_readonly("pair_count", [](const SvmMulticlassModel& model) {
            return model.models.size();
        });

    m.def(
        "svm_train",
        [](const Matrix& x, const std::vector<int>& labels, double cost, double gamma) {
            return svm_train_multiclass(x, labels_from(labels), cost, KernelParams{gamma});
        },
        py::arg("x"), py::arg("labels"), py::arg("cost") = 1.0, py::arg("gamma") = 1.0);
    m.def("svm_predict", &svm_predict, py::arg("model"), py::arg("x"));
    m.def("save_svm", &save_svm, py::arg("path"), py::arg("model"));
    m.def("load_svm", &load_svm, py::arg("path"));

    py::class_<GridSearchResult>(m, "GridSearchResult")
        .def_readonly("best_cost", &GridSearchResult::best_cost)
        .def_readonly("best_gamma", &GridSearchResult::best_gamma)
        .def_readonly("cv_accuracy", &GridSearchResult::cv_accuracy)
        .def_readonly("costs", &GridSearchResult::costs)
        .def_readonly("gammas", &GridSearchResult::gammas);

    m.def(
        "grid_search_cv",
        [](const Matrix& x, const std::vector<int>& labels, std::vector<double> costs,
           std::vector<double> gammas, int folds, std::uint64_t seed) {
            if (costs.empty()) costs = default_cost_grid();
            if (gammas.empty()) gammas = default_gamma_grid();
            return grid_search_cv(x, labels_from(labels), costs, gammas, folds, seed);
        },
        py::arg("x"), py::arg("labels"), py::arg("costs") = std::vector<double>{},
        py::arg("gammas") = std::vector<double>{}, py::arg("folds") = 5, py::arg("seed") = 0);

    m.def(
        "score",
        [](const std::vector<int>& predictions, const std::vector<int>& truth) {
            const ScoreResult result = score(predictions, labels_from(truth));
            py::dict out;
            out["overall"] = result.overall;
            out["average"] = result.average;
            out["per_class"] = result.per_class;
            out["confusion"] = result.confusion.counts;
            return out;
        },
        py::arg("predictions"), py::arg("truth"));

    m.attr("__version__") = "0.1.0";
}
