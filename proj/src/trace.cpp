#include "plab/trace.hpp"

#include <cmath>

namespace plab {

void IterateTrace::append(const IterateRecord& record, const Vector& x) {
  const std::int64_t expected = records.empty() ? 0 : records.back().k + 1;
  if (record.k != expected)
    throw ConfigError("IterateTrace: iteration indices must increase by one from 0");
  if (store_points) {
    if (records.empty()) point_dim = x.size();
    if (x.size() != point_dim) throw ConfigError("IterateTrace: point dimension changed");
    point_data.insert(point_data.end(), x.data(), x.data() + x.size());
  }
  records.push_back(record);
}

std::size_t IterateTrace::first_finite() const {
  for (std::size_t j = 0; j < records.size(); ++j)
    if (std::isfinite(records[j].objective_gap)) return j;
  return records.size();
}

bool IterateTrace::operator==(const IterateTrace& other) const {
  if (algorithm_tag != other.algorithm_tag || problem_tag != other.problem_tag ||
      records.size() != other.records.size() || warnings != other.warnings ||
      store_points != other.store_points || point_dim != other.point_dim)
    return false;
  for (std::size_t j = 0; j < records.size(); ++j) {
    // Bitwise comparison of the record fields; NaN gaps compare by position.
    const auto& a = records[j];
    const auto& b = other.records[j];
    const bool gap_same = (std::isnan(a.objective_gap) && std::isnan(b.objective_gap)) ||
                          a.objective_gap == b.objective_gap;
    if (!gap_same || a.k != b.k || a.objective != b.objective || a.step_size != b.step_size ||
        a.selected_index != b.selected_index || a.seed != b.seed)
      return false;
  }
  return point_data == other.point_data;
}

}  // namespace plab
