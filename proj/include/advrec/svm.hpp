#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace advrec {

using Matrix = std::vector<std::vector<double>>;

struct SvmParams {
    double C{1.0};
    std::optional<double> gamma; // unset: 1 / (dim * variance of all feature values)
    double tolerance{1e-3};      // stop once the maximal KKT violation falls below this
    std::size_t max_iterations{0}; // 0: max(10^7, 100 n)
};

/// Binary rbf-kernel SVM. Class +1 is the adverb, -1 the antonym.
struct SvmModel {
    Matrix support_vectors;
    std::vector<double> coefficients; // alpha_i * y_i
    double bias{0.0};
    double gamma{1.0};
    double C{1.0};
    std::string positive_label;
    std::string negative_label;
    std::size_t dim{0};

    double decision(std::span<const double> x) const;
};

struct SvmTraining {
    SvmModel model;
    std::vector<double> alpha; // one per training sample
    double dual_objective{0.0}; // sum(alpha) - 1/2 sum alpha_i alpha_j y_i y_j k_ij
    std::size_t iterations{0};
    bool converged{false};
};

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// 1 / (d * var(X)) over all entries, or 1 when the variance is zero.
double scale_gamma(const Matrix& x);

/// SMO with maximal-violating-pair, second-order working-set selection.
/// `y` holds +1 / -1. Throws on single-class or ragged input.
SvmTraining train_svm(const Matrix& x, const std::vector<int>& y, const SvmParams& params,
    const std::string& positive_label = "+1", const std::string& negative_label = "-1");

double dual_objective(const Matrix& x, const std::vector<int>& y, const std::vector<double>& alpha, double gamma);

/// Largest per-sample violation of the KKT conditions
/// (y f >= 1 at alpha = 0, y f = 1 on free vectors, y f <= 1 at alpha = C).
double max_kkt_violation(const Matrix& x, const std::vector<int>& y, const std::vector<double>& alpha, const SvmModel& model);

/// +1 or -1; a zero decision value maps to +1.
int predict_sign(const SvmModel& model, std::span<const double> x);
/// Label token for the predicted class.
const std::string& predict_label(const SvmModel& model, std::span<const double> x);

std::string serialize_model(const SvmModel& model);
SvmModel parse_model(std::string_view text);

} // namespace advrec
