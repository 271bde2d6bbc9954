#include "hcal/pca.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "hcal/error.hpp"

namespace hcal {

namespace {

constexpr double kRankTolerance = 1e-10;

std::size_t largest_entry(const Eigen::VectorXd& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  return static_cast<std::size_t>(idx);
}

}  // namespace

PcaMap pca_fit(std::span<const Vector> rows, std::size_t dims) {
  const auto n = rows.size();
  if (n < 2) throw Error(ErrorKind::TooFewSamples, "PCA needs at least 2 points");
  const auto d = rows.front().size();
  if (dims == 0 || dims > std::min(n, d)) {
    throw Error(ErrorKind::InvalidArgument, "requested " + std::to_string(dims) + " components from " +
                                                std::to_string(n) + " points in " + std::to_string(d) +
                                                " dimensions");
  }

  Eigen::MatrixXd data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != d) throw Error(ErrorKind::DimensionMismatch, "ragged PCA input");
    for (std::size_t j = 0; j < d; ++j) data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mean;
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::Rank, "eigendecomposition did not converge");
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> lead(d);
  for (std::size_t i = 0; i < d; ++i) lead[i] = largest_entry(vectors.col(static_cast<Eigen::Index>(i)));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto va = values(static_cast<Eigen::Index>(a));
    const auto vb = values(static_cast<Eigen::Index>(b));
    if (va != vb) return va > vb;
    return lead[a] < lead[b];
  });

  PcaMap map;
  map.mean.assign(mean.data(), mean.data() + d);
  for (std::size_t c = 0; c < dims; ++c) {
    Eigen::VectorXd v = vectors.col(static_cast<Eigen::Index>(order[c]));
    if (v(static_cast<Eigen::Index>(largest_entry(v))) < 0.0) v = -v;
    map.components.emplace_back(v.data(), v.data() + d);
    map.eigenvalues.push_back(std::max(0.0, values(static_cast<Eigen::Index>(order[c]))));
  }

  const double scale = std::max(map.eigenvalues.front(), 1.0);
  for (std::size_t c = 0; c < dims; ++c) {
    if (map.eigenvalues[c] <= kRankTolerance * scale) {
      map.warnings.push_back("RankError: component " + std::to_string(c) +
                             " has a near-zero eigenvalue; the data has numerical rank " + std::to_string(c));
      break;
    }
  }
  return map;
}

PcaMap pca_fit(const FeatureBundle& bundle, std::size_t dims) {
  std::vector<Vector> rows;
  for (auto i : bundle.indices_of(RecordKind::real_query)) rows.push_back(bundle.row_as_vector(i));
  return pca_fit(rows, dims);
}

Vector pca_project_direction(const PcaMap& map, std::span<const double> direction) {
  if (direction.size() != map.input_dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "point has dimension " + std::to_string(direction.size()) +
                                                  ", PCA map expects " + std::to_string(map.input_dimension()));
  }
  Vector out(map.output_dimension(), 0.0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    double acc = 0.0;
    for (std::size_t j = 0; j < direction.size(); ++j) acc += direction[j] * map.components[c][j];
    out[c] = acc;
  }
  return out;
}

Vector pca_project(const PcaMap& map, std::span<const double> point) {
  if (point.size() != map.input_dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "point has dimension " + std::to_string(point.size()) +
                                                  ", PCA map expects " + std::to_string(map.input_dimension()));
  }
  Vector centered(point.begin(), point.end());
  for (std::size_t j = 0; j < centered.size(); ++j) centered[j] -= map.mean[j];
  return pca_project_direction(map, centered);
}

}  // namespace hcal
