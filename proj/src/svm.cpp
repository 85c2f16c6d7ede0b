#include "advrec/svm.hpp"

#include "advrec/error.hpp"
#include "advrec/util.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace advrec {

double SvmModel::decision(std::span<const double> x) const
{
    if (x.size() != dim) {
        throw Error(ErrorKind::Dimension, "feature length " + std::to_string(x.size()) + " does not match model dimension " + std::to_string(dim));
    }
    double sum = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i) {
        sum += coefficients[i] * rbf_kernel(support_vectors[i], x, gamma);
    }
    return sum;
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma)
{
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

double scale_gamma(const Matrix& x)
{
    if (x.empty() || x.front().empty()) {
        return 1.0;
    }
    double sum = 0.0;
    double sum2 = 0.0;
    std::size_t n = 0;
    for (const auto& row : x) {
        for (double v : row) {
            sum += v;
            sum2 += v * v;
            ++n;
        }
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sum2 / static_cast<double>(n) - mean * mean;
    if (!(var > 1e-12)) {
        return 1.0;
    }
    return 1.0 / (static_cast<double>(x.front().size()) * var);
}

namespace {

constexpr double kTau = 1e-12;

void check_inputs(const Matrix& x, const std::vector<int>& y)
{
    if (x.empty() || x.size() != y.size()) {
        throw Error(ErrorKind::Validation, "SVM training needs one label per sample and at least one sample");
    }
    const std::size_t dim = x.front().size();
    bool pos = false;
    bool neg = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].size() != dim) {
            throw Error(ErrorKind::Dimension, "training vectors differ in length");
        }
        if (y[i] == 1) {
            pos = true;
        } else if (y[i] == -1) {
            neg = true;
        } else {
            throw Error(ErrorKind::Validation, "labels must be +1 or -1");
        }
    }
    if (!pos || !neg) {
        throw Error(ErrorKind::Degenerate, "SVM training needs samples of both classes");
    }
}

} // namespace

SvmTraining train_svm(const Matrix& x, const std::vector<int>& y, const SvmParams& params,
    const std::string& positive_label, const std::string& negative_label)
{
    check_inputs(x, y);
    if (!(params.C > 0.0)) {
        throw Error(ErrorKind::Validation, "C must be positive");
    }
    const double gamma = params.gamma.value_or(scale_gamma(x));
    if (!(gamma > 0.0)) {
        throw Error(ErrorKind::Validation, "gamma must be positive");
    }
    const std::size_t n = x.size();
    const double C = params.C;

    std::vector<double> K(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        K[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = rbf_kernel(x[i], x[j], gamma);
            K[i * n + j] = k;
            K[j * n + i] = k;
        }
    }
    auto Q = [&](std::size_t i, std::size_t j) { return static_cast<double>(y[i] * y[j]) * K[i * n + j]; };

    std::vector<double> alpha(n, 0.0);
    std::vector<double> G(n, -1.0); // gradient of 1/2 a'Qa - e'a

    const std::size_t max_iter = params.max_iterations > 0 ? params.max_iterations : std::max<std::size_t>(10000000, 100 * n);
    std::size_t iter = 0;
    bool converged = false;
    const double inf = std::numeric_limits<double>::infinity();

    while (iter < max_iter) {
        double gmax = -inf;
        std::ptrdiff_t gi = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] == 1) {
                if (alpha[t] < C && -G[t] >= gmax) {
                    gmax = -G[t];
                    gi = static_cast<std::ptrdiff_t>(t);
                }
            } else if (alpha[t] > 0.0 && G[t] >= gmax) {
                gmax = G[t];
                gi = static_cast<std::ptrdiff_t>(t);
            }
        }
        double gmax2 = -inf;
        std::ptrdiff_t gj = -1;
        double best = inf;
        for (std::size_t t = 0; t < n; ++t) {
            double grad_diff = 0.0;
            if (y[t] == 1) {
                if (!(alpha[t] > 0.0)) {
                    continue;
                }
                gmax2 = std::max(gmax2, G[t]);
                grad_diff = gmax + G[t];
            } else {
                if (!(alpha[t] < C)) {
                    continue;
                }
                gmax2 = std::max(gmax2, -G[t]);
                grad_diff = gmax - G[t];
            }
            if (gi >= 0 && grad_diff > 0.0) {
                const auto i = static_cast<std::size_t>(gi);
                double quad = K[i * n + i] + K[t * n + t] - 2.0 * K[i * n + t];
                if (quad <= 0.0) {
                    quad = kTau;
                }
                const double obj = -(grad_diff * grad_diff) / quad;
                if (obj <= best) {
                    best = obj;
                    gj = static_cast<std::ptrdiff_t>(t);
                }
            }
        }
        if (gi < 0 || gj < 0 || gmax + gmax2 < params.tolerance) {
            converged = true;
            break;
        }
        ++iter;

        const auto i = static_cast<std::size_t>(gi);
        const auto j = static_cast<std::size_t>(gj);
        const double old_i = alpha[i];
        const double old_j = alpha[j];
        if (y[i] != y[j]) {
            double quad = Q(i, i) + Q(j, j) + 2.0 * Q(i, j);
            if (quad <= 0.0) {
                quad = kTau;
            }
            const double delta = (-G[i] - G[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = C - diff;
                }
            } else if (alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = C + diff;
            }
        } else {
            double quad = Q(i, i) + Q(j, j) - 2.0 * Q(i, j);
            if (quad <= 0.0) {
                quad = kTau;
            }
            const double delta = (G[i] - G[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = sum - C;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > C) {
                if (alpha[j] > C) {
                    alpha[j] = C;
                    alpha[i] = sum - C;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        const double di = alpha[i] - old_i;
        const double dj = alpha[j] - old_j;
        for (std::size_t k = 0; k < n; ++k) {
            G[k] += Q(k, i) * di + Q(k, j) * dj;
        }
    }

    // Offset from free vectors, else the midpoint of the feasible interval.
    double ub = inf;
    double lb = -inf;
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * G[t];
        if (alpha[t] >= C) {
            if (y[t] == -1) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else if (alpha[t] <= 0.0) {
            if (y[t] == 1) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);

    SvmTraining out;
    out.model.gamma = gamma;
    out.model.C = C;
    out.model.bias = -rho;
    out.model.dim = x.front().size();
    out.model.positive_label = positive_label;
    out.model.negative_label = negative_label;
    double objective = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        objective += alpha[t] * (G[t] - 1.0);
        if (alpha[t] > 0.0) {
            out.model.support_vectors.push_back(x[t]);
            out.model.coefficients.push_back(alpha[t] * y[t]);
        }
    }
    out.dual_objective = -0.5 * objective;
    out.alpha = std::move(alpha);
    out.iterations = iter;
    out.converged = converged;
    return out;
}

double dual_objective(const Matrix& x, const std::vector<int>& y, const std::vector<double>& alpha, double gamma)
{
    double linear = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        linear += alpha[i];
        for (std::size_t j = 0; j < x.size(); ++j) {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * rbf_kernel(x[i], x[j], gamma);
        }
    }
    return linear - 0.5 * quad;
}

double max_kkt_violation(const Matrix& x, const std::vector<int>& y, const std::vector<double>& alpha, const SvmModel& model)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double margin = y[i] * model.decision(x[i]);
        double v = 0.0;
        if (alpha[i] <= 0.0) {
            v = std::max(0.0, 1.0 - margin);
        } else if (alpha[i] >= model.C) {
            v = std::max(0.0, margin - 1.0);
        } else {
            v = std::abs(margin - 1.0);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

int predict_sign(const SvmModel& model, std::span<const double> x)
{
    return model.decision(x) >= 0.0 ? 1 : -1;
}

const std::string& predict_label(const SvmModel& model, std::span<const double> x)
{
    return predict_sign(model, x) > 0 ? model.positive_label : model.negative_label;
}

std::string serialize_model(const SvmModel& model)
{
    std::string out = "advrec-svm 1\n";
    out += "labels " + model.positive_label + " " + model.negative_label + "\n";
    out += "gamma " + format_real(model.gamma) + "\n";
    out += "C " + format_real(model.C) + "\n";
    out += "bias " + format_real(model.bias) + "\n";
    out += "dim " + std::to_string(model.dim) + "\n";
    out += "sv " + std::to_string(model.support_vectors.size()) + "\n";
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        out += format_real(model.coefficients[i]);
        for (double v : model.support_vectors[i]) {
            out += ' ';
            out += format_real(v);
        }
        out += '\n';
    }
    return out;
}

namespace {

double to_double(const std::string& text, std::size_t line)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::Parse, "not a number: '" + text + "'", line);
    }
    return v;
}

std::size_t to_size(const std::string& text, std::size_t line)
{
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::Parse, "not a count: '" + text + "'", line);
    }
    return v;
}

} // namespace

SvmModel parse_model(std::string_view text)
{
    const auto lines = split(text, '\n');
    auto field = [&](std::size_t idx, std::string_view key, std::size_t arity) {
        if (idx >= lines.size()) {
            throw Error(ErrorKind::Parse, "model file truncated before '" + std::string(key) + "'", idx + 1);
        }
        auto parts = split_ws(lines[idx]);
        if (parts.size() != arity + 1 || parts[0] != key) {
            throw Error(ErrorKind::Parse, "expected '" + std::string(key) + "'", idx + 1);
        }
        return parts;
    };
    const auto magic = field(0, "advrec-svm", 1);
    if (magic[1] != "1") {
        throw Error(ErrorKind::Parse, "unsupported model version " + magic[1], 1);
    }
    SvmModel m;
    const auto labels = field(1, "labels", 2);
    m.positive_label = labels[1];
    m.negative_label = labels[2];
    m.gamma = to_double(field(2, "gamma", 1)[1], 3);
    m.C = to_double(field(3, "C", 1)[1], 4);
    m.bias = to_double(field(4, "bias", 1)[1], 5);
    m.dim = to_size(field(5, "dim", 1)[1], 6);
    const std::size_t count = to_size(field(6, "sv", 1)[1], 7);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t idx = 7 + k;
        if (idx >= lines.size()) {
            throw Error(ErrorKind::Parse, "model file truncated in support vectors", idx + 1);
        }
        const auto parts = split_ws(lines[idx]);
        if (parts.size() != m.dim + 1) {
            throw Error(ErrorKind::Dimension, "support vector has wrong length", idx + 1);
        }
        m.coefficients.push_back(to_double(parts[0], idx + 1));
        std::vector<double> sv;
        for (std::size_t i = 1; i < parts.size(); ++i) {
            sv.push_back(to_double(parts[i], idx + 1));
        }
        m.support_vectors.push_back(std::move(sv));
    }
    return m;
}

} // namespace advrec
