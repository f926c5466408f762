#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "mprad/analytics.hpp"
#include "mprad/error.hpp"

namespace mprad::analytics {

namespace {

using Eigen::Index;

void check_training_labels(Index n, std::span<const int> labels, int min_per_class) {
    if (static_cast<Index>(labels.size()) != n) {
        throw Error(Errc::dimension_mismatch, std::to_string(n) + " rows but " + std::to_string(labels.size()) + " labels");
    }
    int pos = 0, neg = 0;
    for (int l : labels) {
        if (l == 1) ++pos;
        else if (l == 0) ++neg;
        else throw Error(Errc::invalid_argument, "labels must be 0 or 1, got " + std::to_string(l));
    }
    if (pos < min_per_class || neg < min_per_class) {
        throw Error(Errc::invalid_argument, "need at least " + std::to_string(min_per_class) +
                                                " subjects per class (have " + std::to_string(pos) + " positive, " +
                                                std::to_string(neg) + " negative)");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// SMO

LinearSvm train_linear_svm(const Eigen::MatrixXd& x, std::span<const int> labels, const SvmOptions& opt) {
    const Index n = x.rows();
    check_training_labels(n, labels, 1);
    if (!(opt.c_positive > 0.0) || !(opt.cost_ratio > 0.0)) {
        throw Error(Errc::invalid_argument, "SVM costs must be positive");
    }
    const Eigen::MatrixXd k = x * x.transpose();
    std::vector<double> y(static_cast<std::size_t>(n)), cap(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        const bool pos = labels[static_cast<std::size_t>(i)] == 1;
        y[static_cast<std::size_t>(i)] = pos ? 1.0 : -1.0;
        cap[static_cast<std::size_t>(i)] = pos ? opt.c_positive : opt.c_positive * opt.cost_ratio;
    }
    std::vector<double> alpha(static_cast<std::size_t>(n), 0.0), grad(static_cast<std::size_t>(n), -1.0);
    auto up = [&](std::size_t t) { return y[t] > 0 ? alpha[t] < cap[t] : alpha[t] > 0.0; };
    auto low = [&](std::size_t t) { return y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < cap[t]; };

    LinearSvm svm;
    for (svm.iterations = 0;; ++svm.iterations) {
        // i: maximal violator; j: largest second-order objective decrease.
        double m = -std::numeric_limits<double>::infinity(), big_m = std::numeric_limits<double>::infinity();
        std::size_t i = 0, j = 0;
        for (std::size_t t = 0; t < alpha.size(); ++t) {
            const double v = -y[t] * grad[t];
            if (up(t) && v > m) {
                m = v;
                i = t;
            }
        }
        double best = std::numeric_limits<double>::infinity();
        const auto ii0 = static_cast<Index>(i);
        for (std::size_t t = 0; t < alpha.size(); ++t) {
            if (!low(t)) continue;
            const double v = -y[t] * grad[t];
            big_m = std::min(big_m, v);
            if (v >= m) continue;
            const auto tt = static_cast<Index>(t);
            const double a = std::max(k(ii0, ii0) + k(tt, tt) - 2.0 * k(ii0, tt), 1e-12);
            const double gain = -(m - v) * (m - v) / a;
            if (gain < best) {
                best = gain;
                j = t;
            }
        }
        svm.kkt_gap = m - big_m;
        if (svm.kkt_gap < opt.tolerance || svm.iterations >= opt.max_iterations) break;

        const auto ii = static_cast<Index>(i), jj = static_cast<Index>(j);
        const double curvature = std::max(k(ii, ii) + k(jj, jj) - 2.0 * k(ii, jj), 1e-12);
        double step = (m + y[j] * grad[j]) / curvature;
        step = std::min(step, y[i] > 0 ? cap[i] - alpha[i] : alpha[i]);
        step = std::min(step, y[j] > 0 ? alpha[j] : cap[j] - alpha[j]);
        alpha[i] += y[i] * step;
        alpha[j] -= y[j] * step;
        alpha[i] = std::clamp(alpha[i], 0.0, cap[i]);
        alpha[j] = std::clamp(alpha[j], 0.0, cap[j]);
        for (Index t = 0; t < n; ++t) {
            grad[static_cast<std::size_t>(t)] += step * y[static_cast<std::size_t>(t)] * (k(t, ii) - k(t, jj));
        }
    }

    double ub = std::numeric_limits<double>::infinity(), lb = -ub, free_sum = 0.0;
    int free_count = 0;
    for (std::size_t t = 0; t < alpha.size(); ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= cap[t]) {
            if (y[t] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (alpha[t] <= 0.0) {
            if (y[t] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    const double rho = free_count > 0 ? free_sum / free_count : 0.5 * (ub + lb);
    svm.b = -rho;
    svm.w = Eigen::VectorXd::Zero(x.cols());
    for (Index t = 0; t < n; ++t) {
        svm.w += alpha[static_cast<std::size_t>(t)] * y[static_cast<std::size_t>(t)] * x.row(t).transpose();
    }
    return svm;
}

// ---------------------------------------------------------------------------
// IsoSVM

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
    Standardizer s;
    s.mean = x.colwise().mean().transpose();
    s.scale.resize(x.cols());
    for (Index j = 0; j < x.cols(); ++j) {
        const double sd = std::sqrt((x.col(j).array() - s.mean(j)).square().mean());
        s.scale(j) = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
    return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& x) const {
    return (x - mean).cwiseQuotient(scale);
}

namespace {

Standardizer identity(Index cols) {
    return {Eigen::VectorXd::Zero(cols), Eigen::VectorXd::Ones(cols)};
}

}  // namespace

IsoSvmModel isosvm_train(const Eigen::MatrixXd& x, std::span<const int> labels, const IsoSvmOptions& opt) {
    check_training_labels(x.rows(), labels, 1);
    IsoSvmModel model;
    model.options = opt;
    model.input = opt.standardize ? Standardizer::fit(x) : identity(x.cols());
    model.isomap = isomap_fit(model.input.apply(x), opt.k, opt.dims);
    model.embedded = Standardizer::fit(model.isomap.embedding);
    model.svm = train_linear_svm(model.embedded.apply(model.isomap.embedding), labels, opt.svm);
    return model;
}

Prediction isosvm_predict(const IsoSvmModel& model, const Eigen::VectorXd& x) {
    const Eigen::VectorXd e = isomap_transform(model.isomap, model.input.apply(x));
    Prediction p;
    p.score = model.svm.decision(model.embedded.apply(e));
    p.label = p.score >= 0.0 ? 1 : 0;
    return p;
}

// ---------------------------------------------------------------------------
// Leave-one-out

namespace {

template <class Fold>
Loocv run_loocv(const Eigen::MatrixXd& x, std::span<const int> labels, int threads, Fold&& fold) {
    const Index n = x.rows();
    check_training_labels(n, labels, 2);
    Loocv out;
    out.scores.assign(static_cast<std::size_t>(n), 0.0);
    out.predicted.assign(static_cast<std::size_t>(n), 0);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    const int nt = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for num_threads(nt) schedule(dynamic, 1)
    for (Index i = 0; i < n; ++i) {
        try {
            Eigen::MatrixXd train(n - 1, x.cols());
            std::vector<int> y;
            y.reserve(static_cast<std::size_t>(n - 1));
            for (Index r = 0, o = 0; r < n; ++r) {
                if (r == i) continue;
                train.row(o++) = x.row(r);
                y.push_back(labels[static_cast<std::size_t>(r)]);
            }
            out.scores[static_cast<std::size_t>(i)] = fold(train, y, Eigen::VectorXd(x.row(i).transpose()));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    double tp = 0, fn = 0, tn = 0, fp = 0;
    for (Index i = 0; i < n; ++i) {
        const auto s = static_cast<std::size_t>(i);
        out.predicted[s] = out.scores[s] >= 0.0 ? 1 : 0;
        if (labels[s] == 1) (out.predicted[s] == 1 ? tp : fn) += 1;
        else (out.predicted[s] == 0 ? tn : fp) += 1;
    }
    out.sensitivity = tp / (tp + fn);
    out.specificity = tn / (tn + fp);
    out.roc = roc_auc(out.scores, labels);
    return out;
}

}  // namespace

Loocv loocv(const Eigen::MatrixXd& x, std::span<const int> labels, const IsoSvmOptions& opt, int threads) {
    IsoSvmOptions fold_opt = opt;
    const int max_k = static_cast<int>(x.rows()) - 2;
    std::vector<std::string> warnings;
    if (fold_opt.k > max_k && max_k >= 1) {
        warnings.push_back("k=" + std::to_string(opt.k) + " clamped to " + std::to_string(max_k) + " for " +
                           std::to_string(x.rows()) + " subjects");
        fold_opt.k = max_k;
    }
    Loocv out = run_loocv(x, labels, threads, [&](const Eigen::MatrixXd& train, const std::vector<int>& y,
                                                  const Eigen::VectorXd& held_out) {
        return isosvm_predict(isosvm_train(train, y, fold_opt), held_out).score;
    });
    out.k_used = fold_opt.k;
    out.warnings = std::move(warnings);
    return out;
}

Loocv loocv_linear(const Eigen::MatrixXd& x, std::span<const int> labels, const SvmOptions& opt, bool standardize,
                   int threads) {
    return run_loocv(x, labels, threads, [&](const Eigen::MatrixXd& train, const std::vector<int>& y,
                                             const Eigen::VectorXd& held_out) {
        const Standardizer s = standardize ? Standardizer::fit(train) : identity(train.cols());
        const LinearSvm svm = train_linear_svm(s.apply(train), y, opt);
        return svm.decision(s.apply(held_out));
    });
}

}  // namespace mprad::analytics
