#pragma once

#include "plab/harness.hpp"

namespace plab::harness {

std::string get_string(const json& j, const char* key, const std::string& where);
double get_number(const json& j, const char* key, const std::string& where);
double get_number(const json& j, const char* key, const std::string& where, double fallback);
double get_positive(const json& j, const char* key, const std::string& where);
Index get_index(const json& j, const char* key, const std::string& where, Index fallback);
std::uint64_t get_u64(const json& j, const char* key, const std::string& where,
                      std::uint64_t fallback);
Vector json_vector(const json& j, const std::string& where);
Matrix json_matrix(const json& j, const std::string& where);

json vector_json(const Vector& v);

}  // namespace plab::harness
