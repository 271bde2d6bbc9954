#pragma once

#include <string>
#include <vector>

#include "doctest.h"
#include "hcal/error.hpp"
#include "hcal/feature.hpp"

// Checks that `expr` throws hcal::Error of the given kind.
#define CHECK_THROWS_KIND(expr, error_kind)                              \
  do {                                                                   \
    bool thrown_ = false;                                                \
    try {                                                                \
      (void)(expr);                                                      \
    } catch (const hcal::Error& e) {                                     \
      thrown_ = true;                                                    \
      CHECK_MESSAGE(e.kind() == (error_kind), "got " << e.what());       \
    }                                                                    \
    CHECK_MESSAGE(thrown_, "expected " #error_kind " from " #expr);      \
  } while (0)

namespace test {

inline hcal::LabelSpace labels(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("L" + std::to_string(i));
  return hcal::LabelSpace(names);
}

// Hidden-space bundle of real queries with the given rows and classes.
inline hcal::FeatureBundle hidden(std::size_t num_classes, const std::vector<hcal::Vector>& rows,
                                  const std::vector<int>& classes) {
  std::vector<hcal::RecordInfo> records;
  for (int c : classes) records.push_back({c, hcal::RecordKind::real_query, 0});
  return hcal::FeatureBundle::from_rows(hcal::FeatureSpace::hidden, labels(num_classes), rows, records);
}

// `count` rows with class i % num_classes, row i = (i, i, ...).
inline hcal::FeatureBundle counting(std::size_t num_classes, std::size_t count, std::size_t dim = 2) {
  std::vector<hcal::Vector> rows;
  std::vector<int> classes;
  for (std::size_t i = 0; i < count; ++i) {
    rows.push_back(hcal::Vector(dim, static_cast<double>(i)));
    classes.push_back(static_cast<int>(i % num_classes));
  }
  return hidden(num_classes, rows, classes);
}

}  // namespace test
