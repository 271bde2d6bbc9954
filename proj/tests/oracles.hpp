#pragma once
// Reference implementations used only by the tests. They deliberately avoid
// the library's own helpers: plain loops, long double where it matters.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline long double dot(const Vec& a, const Vec& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return s;
}

inline double distance(const Vec& a, const Vec& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    long double d = static_cast<long double>(a[i]) - b[i];
    s += d * d;
  }
  return static_cast<double>(std::sqrt(s));
}

inline Vec softmax(const Vec& x) {
  std::vector<long double> e(x.size());
  long double sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    e[i] = std::exp(static_cast<long double>(x[i]));
    sum += e[i];
  }
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = static_cast<double>(e[i] / sum);
  return out;
}

// Two passes: sum, then divide.
inline Vec mean(const std::vector<Vec>& rows) {
  std::vector<long double> acc(rows.front().size(), 0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < r.size(); ++j) acc[j] += r[j];
  Vec out(acc.size());
  for (std::size_t j = 0; j < acc.size(); ++j) out[j] = static_cast<double>(acc[j] / rows.size());
  return out;
}

// Kahan-compensated mean.
inline Vec kahan_mean(const std::vector<Vec>& rows) {
  std::size_t d = rows.front().size();
  Vec sum(d, 0.0), comp(d, 0.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) {
      double y = r[j] - comp[j];
      double t = sum[j] + y;
      comp[j] = (t - sum[j]) - y;
      sum[j] = t;
    }
  }
  for (auto& v : sum) v /= static_cast<double>(rows.size());
  return sum;
}

// Lowest index among the minima of a full scan.
inline int argmin(const Vec& v) {
  int best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return best;
}

inline int argmax(const Vec& v) {
  int best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return best;
}

// k-NN by sorting every anchor distance; ties on distance resolved by class
// then anchor index, vote ties by summed distance then class.
inline int knn(const Vec& probe, const std::vector<Vec>& anchors, const std::vector<int>& classes,
               std::size_t num_classes, std::size_t k) {
  struct Entry {
    double d;
    int cls;
    std::size_t idx;
  };
  std::vector<Entry> all;
  for (std::size_t i = 0; i < anchors.size(); ++i) all.push_back({distance(probe, anchors[i]), classes[i], i});
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.cls != b.cls) return a.cls < b.cls;
    return a.idx < b.idx;
  });
  std::vector<int> votes(num_classes, 0);
  std::vector<double> dsum(num_classes, 0.0);
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i) {
    votes[static_cast<std::size_t>(all[i].cls)]++;
    dsum[static_cast<std::size_t>(all[i].cls)] += all[i].d;
  }
  int best = 0;
  for (std::size_t c = 1; c < num_classes; ++c) {
    auto b = static_cast<std::size_t>(best);
    if (votes[c] > votes[b] || (votes[c] == votes[b] && votes[c] > 0 && dsum[c] < dsum[b])) best = static_cast<int>(c);
  }
  return best;
}

struct Scores {
  std::vector<std::vector<long>> confusion;
  Vec f1;
  double macro_f1 = 0;
  double accuracy = 0;
};

// Confusion matrix from the raw prediction log, then F1 = 2TP / (2TP + FP + FN).
inline Scores score(const std::vector<int>& truth, const std::vector<int>& pred, std::size_t k) {
  Scores s;
  s.confusion.assign(k, std::vector<long>(k, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) s.confusion[truth[i]][pred[i]]++;
  long correct = 0;
  for (std::size_t c = 0; c < k; ++c) {
    long tp = s.confusion[c][c];
    long fp = 0, fn = 0;
    for (std::size_t o = 0; o < k; ++o) {
      if (o == c) continue;
      fp += s.confusion[o][c];
      fn += s.confusion[c][o];
    }
    correct += tp;
    long denom = 2 * tp + fp + fn;
    s.f1.push_back(denom == 0 ? 0.0 : 2.0 * tp / static_cast<double>(denom));
  }
  s.macro_f1 = std::accumulate(s.f1.begin(), s.f1.end(), 0.0) / static_cast<double>(k);
  s.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  return s;
}

// Silverman bandwidth with sample sd and linearly interpolated quartiles.
inline double silverman(Vec x) {
  std::size_t n = x.size();
  std::sort(x.begin(), x.end());
  long double m = 0;
  for (double v : x) m += v;
  m /= n;
  long double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  double sd = static_cast<double>(std::sqrt(ss / (n - 1)));
  auto q = [&](double p) {
    double pos = p * static_cast<double>(n - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, n - 1);
    return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
  };
  double iqr = q(0.75) - q(0.25);
  double spread = std::min(sd, iqr / 1.34);
  return std::max(0.9 * spread * std::pow(static_cast<double>(n), -0.2), 1e-3);
}

// Gaussian KDE sampled at the midpoints of `points` equal cells of [-1, 1].
// Each kernel is evaluated over its +-8 bandwidth window with the exact
// recurrence g(x + dx) = g(x) r(x), r(x + dx) = r(x) c, re-seeded directly
// every 256 steps.
inline Vec kde_midpoints(const Vec& samples, double h, std::size_t points) {
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  const double dx = 2.0 / static_cast<double>(points);
  const double c = std::exp(-(dx / h) * (dx / h));
  const auto n = static_cast<long>(points);
  Vec out(points, 0.0);
  for (double s : samples) {
    long lo = std::max(0L, static_cast<long>(std::floor((s - 8 * h + 1.0) / dx)));
    long hi = std::min(n - 1, static_cast<long>(std::ceil((s + 8 * h + 1.0) / dx)));
    double g = 0, r = 0;
    for (long i = lo; i <= hi; ++i) {
      if ((i - lo) % 256 == 0) {
        double x = -1.0 + (static_cast<double>(i) + 0.5) * dx;
        double u = (x - s) / h;
        g = std::exp(-0.5 * u * u);
        r = std::exp(-u * dx / h - 0.5 * (dx / h) * (dx / h));
      }
      out[static_cast<std::size_t>(i)] += g;
      g *= r;
      r *= c;
    }
  }
  const double scale = kInvSqrt2Pi / (h * static_cast<double>(samples.size()));
  for (auto& v : out) v *= scale;
  return out;
}

// Midpoint Riemann sum of min(p, q) over [-1, 1].
inline double riemann_overlap(const Vec& a, const Vec& b, std::size_t points = 1000000) {
  auto pa = kde_midpoints(a, silverman(a), points);
  auto pb = kde_midpoints(b, silverman(b), points);
  long double s = 0;
  for (std::size_t i = 0; i < points; ++i) s += std::min(pa[i], pb[i]);
  return static_cast<double>(s * (2.0 / static_cast<double>(points)));
}

// Best balanced error of any single-threshold rule, in either orientation,
// scanning every cut between sorted samples.
inline double optimal_threshold_error(const Vec& first, const Vec& second) {
  std::vector<std::pair<double, int>> all;
  for (double v : first) all.push_back({v, 0});
  for (double v : second) all.push_back({v, 1});
  std::sort(all.begin(), all.end());
  double n0 = static_cast<double>(first.size()), n1 = static_cast<double>(second.size());
  // Rule "x > t -> first": errors are first-samples <= t plus second-samples > t.
  double below0 = 0, below1 = 0;
  double best = 1.0;
  auto consider = [&] {
    double e_a = 0.5 * (below0 / n0 + (n1 - below1) / n1);
    double e_b = 0.5 * ((n0 - below0) / n0 + below1 / n1);
    best = std::min({best, e_a, e_b});
  };
  consider();
  for (std::size_t i = 0; i < all.size(); ++i) {
    (all[i].second == 0 ? below0 : below1) += 1;
    if (i + 1 < all.size() && all[i + 1].first == all[i].first) continue;
    consider();
  }
  return best;
}

}  // namespace oracle
