#include "rfsom/mds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rfsom {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

double frobenius_norm(const Matrix& a) {
  double sum = 0.0;
  for (double v : a.values()) sum += v * v;
  return std::sqrt(sum);
}

void check_symmetric(const Matrix& a, double tolerance, const char* who) {
  if (a.rows() != a.cols()) throw std::invalid_argument(std::string(who) + ": not square");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tolerance) {
        throw std::invalid_argument(std::string(who) + ": not symmetric");
      }
    }
  }
}

}  // namespace

EigenResult symmetric_eigen(const Matrix& input) {
  const double scale = frobenius_norm(input);
  check_symmetric(input, 1e-9 * std::max(1.0, scale), "symmetric_eigen");
  const std::size_t n = input.rows();

  Matrix a = input;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  // Convergence is relative to the matrix scale; an all-zero input is
  // already diagonal.
  const double target = 1e-12 * scale;
  constexpr int kMaxSweeps = 100;
  bool converged = off_diagonal_norm(a) <= target;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i != p && i != q) {
            const double aip = a(i, p);
            const double aiq = a(i, q);
            a(i, p) = c * aip - s * aiq;
            a(p, i) = a(i, p);
            a(i, q) = s * aip + c * aiq;
            a(q, i) = a(i, q);
          }
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
    converged = off_diagonal_norm(a) <= target;
  }
  if (!converged) {
    throw std::runtime_error("symmetric_eigen: Jacobi did not converge in 100 sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenResult result;
  result.values.reserve(n);
  result.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    result.values.push_back(a(order[k], order[k]));
    for (std::size_t i = 0; i < n; ++i) result.vectors(k, i) = v(i, order[k]);
  }
  return result;
}

Embedding2D classical_mds(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  require(n >= 3, "classical_mds: need at least 3 points");
  check_symmetric(d.values, 1e-9 * std::max(1.0, frobenius_norm(d.values)),
                  "classical_mds");

  Matrix squared(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      squared(i, j) = d.values(i, j) * d.values(i, j);
    }
  }

  std::vector<double> row_mean(n, 0.0);
  double grand_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row_mean[i] += squared(i, j);
    row_mean[i] /= static_cast<double>(n);
    grand_mean += row_mean[i];
  }
  grand_mean /= static_cast<double>(n);

  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b(i, j) = -0.5 * (squared(i, j) - row_mean[i] - row_mean[j] + grand_mean);
    }
  }

  const EigenResult eig = symmetric_eigen(b);

  Embedding2D embedding;
  embedding.coordinates = Matrix(n, 2);
  for (std::size_t k = 0; k < 2; ++k) {
    embedding.eigenvalues_used[k] = eig.values[k];
    const double scale = std::sqrt(std::max(eig.values[k], 0.0));
    auto vec = eig.vectors.row(k);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(vec[i]) > std::abs(vec[peak])) peak = i;
    }
    const double sign = vec[peak] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      embedding.coordinates(i, k) = sign * vec[i] * scale;
    }
  }

  double negative = 0.0;
  double total = 0.0;
  for (double lambda : eig.values) {
    total += std::abs(lambda);
    if (lambda < 0.0) negative -= lambda;
  }
  embedding.negative_mass_fraction = total > 0.0 ? negative / total : 0.0;
  return embedding;
}

DistanceMatrix euclidean_distance_matrix(const Matrix& rows) {
  require(rows.rows() >= 1, "euclidean_distance_matrix: empty input");
  const std::size_t n = rows.rows();
  DistanceMatrix d;
  d.values = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sum = 0.0;
      const auto a = rows.row(i);
      const auto b = rows.row(j);
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        sum += diff * diff;
      }
      const double dist = std::sqrt(sum);
      d.values(i, j) = dist;
      d.values(j, i) = dist;
    }
  }
  return d;
}

DistanceMatrix dissimilarity_from_proximity(const Matrix& proximity) {
  require(proximity.rows() == proximity.cols(),
          "dissimilarity_from_proximity: not square");
  const std::size_t n = proximity.rows();
  DistanceMatrix d;
  d.values = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d.values(i, j) = i == j ? 0.0 : 1.0 - proximity(i, j);
    }
  }
  return d;
}

}  // namespace rfsom
