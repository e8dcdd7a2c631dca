#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plab/types.hpp"

namespace plab {

struct IterateRecord {
  std::int64_t k = 0;
  double objective_gap = 0.0;  // f(x_k) - f* (or F); NaN when the optimum is unknown
  double objective = 0.0;      // f(x_k) (or F(x_k))
  double step_size = 0.0;
  std::optional<Index> selected_index;
  std::uint64_t seed = 0;

  bool operator==(const IterateRecord&) const = default;
};

// Per-iteration history of one solver run. When store_points is set, point(j)
// is the iterate of records[j] (stored flat to keep long stochastic runs
// compact). Written by a single run; indices strictly increase from 0.
struct IterateTrace {
  std::string algorithm_tag;
  std::string problem_tag;
  std::vector<IterateRecord> records;
  std::vector<std::string> warnings;
  bool store_points = true;
  Index point_dim = 0;
  std::vector<double> point_data;

  void append(const IterateRecord& record, const Vector& x);

  bool has_points() const { return store_points && !records.empty(); }
  Eigen::Map<const Vector> point(std::size_t j) const {
    return Eigen::Map<const Vector>(point_data.data() + j * point_dim, point_dim);
  }

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  const IterateRecord& back() const { return records.back(); }

  // Index of the first record whose gap is finite, or size() if none.
  std::size_t first_finite() const;

  bool operator==(const IterateTrace& other) const;
};

}  // namespace plab
