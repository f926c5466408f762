#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mprad/analytics.hpp"
#include "mprad/error.hpp"

namespace mprad::analytics {

namespace {

using Eigen::Index;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Indices of the k points nearest to `x` among the rows of `points`,
// skipping row `skip`; ties broken by index.
std::vector<Index> nearest_rows(const Eigen::MatrixXd& points, const Eigen::VectorXd& x, int k, Index skip,
                                std::vector<double>& dist) {
    const Index n = points.rows();
    dist.resize(static_cast<std::size_t>(n));
    std::vector<Index> idx;
    idx.reserve(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) {
        dist[static_cast<std::size_t>(j)] = (points.row(j).transpose() - x).norm();
        if (j != skip) idx.push_back(j);
    }
    const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(kk), idx.end(), [&](Index a, Index b) {
        const double da = dist[static_cast<std::size_t>(a)], db = dist[static_cast<std::size_t>(b)];
        return da < db || (da == db && a < b);
    });
    idx.resize(kk);
    return idx;
}

Eigen::MatrixXd knn_graph(const Eigen::MatrixXd& points, int k) {
    const Index n = points.rows();
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(n, n, kInf);
    std::vector<double> dist;
    for (Index i = 0; i < n; ++i) {
        g(i, i) = 0.0;
        for (Index j : nearest_rows(points, points.row(i).transpose(), k, i, dist)) {
            g(i, j) = dist[static_cast<std::size_t>(j)];
            g(j, i) = dist[static_cast<std::size_t>(j)];
        }
    }
    return g;
}

std::vector<int> component_sizes(const Eigen::MatrixXd& g) {
    const Index n = g.rows();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    std::vector<int> sizes;
    std::vector<Index> stack;
    for (Index s = 0; s < n; ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        const int id = static_cast<int>(sizes.size());
        sizes.push_back(0);
        stack.push_back(s);
        comp[static_cast<std::size_t>(s)] = id;
        while (!stack.empty()) {
            const Index u = stack.back();
            stack.pop_back();
            ++sizes.back();
            for (Index v = 0; v < n; ++v) {
                if (comp[static_cast<std::size_t>(v)] < 0 && std::isfinite(g(u, v))) {
                    comp[static_cast<std::size_t>(v)] = id;
                    stack.push_back(v);
                }
            }
        }
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

void check_points(const Eigen::MatrixXd& points, int k) {
    if (points.rows() < 2) throw Error(Errc::invalid_argument, "isomap needs at least two points");
    if (k < 1 || k >= points.rows()) {
        throw Error(Errc::invalid_argument, "neighbour count k=" + std::to_string(k) + " must lie in [1, " +
                                                std::to_string(points.rows() - 1) + "] for " +
                                                std::to_string(points.rows()) + " points");
    }
    if (!points.allFinite()) throw Error(Errc::invalid_argument, "isomap input is not finite");
}

}  // namespace

std::vector<int> knn_components(const Eigen::MatrixXd& points, int k) {
    check_points(points, k);
    return component_sizes(knn_graph(points, k));
}

Isomap isomap_fit(const Eigen::MatrixXd& points, int k, int dims) {
    check_points(points, k);
    const Index n = points.rows();
    if (dims < 1 || dims >= n) {
        throw Error(Errc::invalid_argument, "embedding dimension " + std::to_string(dims) + " must lie in [1, " +
                                                std::to_string(n - 1) + "]");
    }
    Eigen::MatrixXd g = knn_graph(points, k);
    const auto sizes = component_sizes(g);
    if (sizes.size() > 1) {
        std::string list;
        for (int s : sizes) list += (list.empty() ? "" : ", ") + std::to_string(s);
        throw Error(Errc::disconnected_graph, "k=" + std::to_string(k) + " neighbour graph has " +
                                                  std::to_string(sizes.size()) + " components of sizes " + list);
    }
    // Floyd-Warshall
    for (Index m = 0; m < n; ++m) {
        for (Index i = 0; i < n; ++i) {
            const double gim = g(i, m);
            for (Index j = 0; j < n; ++j) {
                const double via = gim + g(m, j);
                if (via < g(i, j)) g(i, j) = via;
            }
        }
    }
    // Symmetric up to rounding; average the two triangles so the eigensolver sees a symmetric matrix.
    g = 0.5 * (g + g.transpose()).eval();

    Isomap model;
    model.k = k;
    model.dims = dims;
    model.points = points;
    model.geodesic = g;
    const Eigen::MatrixXd sq = g.cwiseProduct(g);
    model.sq_mean = sq.colwise().mean().transpose();
    const double grand = model.sq_mean.mean();
    Eigen::MatrixXd b(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) b(i, j) = -0.5 * (sq(i, j) - model.sq_mean(i) - model.sq_mean(j) + grand);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
    if (eig.info() != Eigen::Success) throw Error(Errc::degenerate, "MDS eigendecomposition failed");

    model.eigenvalues.resize(dims);
    model.eigenvectors.resize(n, dims);
    const double top = eig.eigenvalues()(n - 1);
    for (int d = 0; d < dims; ++d) {
        const Index src = n - 1 - d;
        const double lambda = eig.eigenvalues()(src);
        if (!(lambda > 1e-12 * std::max(top, 1.0))) {
            throw Error(Errc::degenerate, "MDS has only " + std::to_string(d) + " positive eigenvalues, " +
                                              std::to_string(dims) + " requested");
        }
        Eigen::VectorXd v = eig.eigenvectors().col(src);
        Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0) v = -v;
        model.eigenvalues(d) = lambda;
        model.eigenvectors.col(d) = v;
    }
    model.embedding = model.eigenvectors * model.eigenvalues.cwiseSqrt().asDiagonal();
    return model;
}

Eigen::VectorXd isomap_transform(const Isomap& model, const Eigen::VectorXd& x) {
    if (x.size() != model.points.cols()) {
        throw Error(Errc::dimension_mismatch, "point has " + std::to_string(x.size()) + " coordinates, model expects " +
                                                  std::to_string(model.points.cols()));
    }
    const Index n = model.points.rows();
    std::vector<double> dist;
    const auto nn = nearest_rows(model.points, x, model.k, -1, dist);
    Eigen::VectorXd delta_sq(n);
    for (Index j = 0; j < n; ++j) {
        double best = kInf;
        for (Index m : nn) best = std::min(best, dist[static_cast<std::size_t>(m)] + model.geodesic(m, j));
        delta_sq(j) = best * best;
    }
    const Eigen::VectorXd centred = delta_sq - model.sq_mean;
    Eigen::VectorXd y(model.dims);
    for (int d = 0; d < model.dims; ++d) {
        y(d) = -0.5 * model.eigenvectors.col(d).dot(centred) / std::sqrt(model.eigenvalues(d));
    }
    return y;
}

}  // namespace mprad::analytics
