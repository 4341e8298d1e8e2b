"""Random-Fourier-feature ICA/LDA dimensionality reduction for hyperspectral images.

Sample matrices are (d, N): one spectrum per column. Labels are integers
1..C; 0 marks background pixels and is excluded from training and scoring.
"""

from ._core import (
    GridSearchResult,
    LandmarkSet,
    ReducerModel,
    RffMap,
    RffhsiError,
    SvmModel,
    __version__,
    apply_rff,
    class_counts,
    estimate_bandwidth,
    fit,
    gamma_from_sigma,
    grid_search_cv,
    kernel_feature_map,
    knn_predict,
    load_model,
    load_svm,
    rbf_kernel,
    sample_rff_map,
    save_model,
    save_svm,
    score,
    select_landmarks,
    stratified_split,
    svm_predict,
    svm_train,
    transform,
)

__all__ = [
    "GridSearchResult",
    "LandmarkSet",
    "ReducerModel",
    "RffMap",
    "RffhsiError",
    "SvmModel",
    "__version__",
    "apply_rff",
    "class_counts",
    "estimate_bandwidth",
    "fit",
    "gamma_from_sigma",
    "grid_search_cv",
    "kernel_feature_map",
    "knn_predict",
    "load_model",
    "load_svm",
    "rbf_kernel",
    "sample_rff_map",
    "save_model",
    "save_svm",
    "score",
    "select_landmarks",
    "stratified_split",
    "svm_predict",
    "svm_train",
    "transform",
]
