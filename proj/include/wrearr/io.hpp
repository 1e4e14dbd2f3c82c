#pragma once

// JSON for operators, weights and step functions; CSV for step-function rows.
//
//   operator: {"algebra":{"kind":"matrix","blocks":[n1,...],"weights":[l1,...]},
//              "blocks":[[row-major entries], ...]}
//          or {"algebra":{"kind":"steps","bound":B},
//              "step":{"breakpoints":[...],"values":[...]}}
//   weight:   {"kind":"step","mu":{"breakpoints":[...],"values":[...]}} or {"kind":"exp"}

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "wrearr/algebra.hpp"
#include "wrearr/errors.hpp"
#include "wrearr/stepfn.hpp"
#include "wrearr/weighted.hpp"

namespace wrearr::io {

using json = nlohmann::json;

/// Malformed input text or a document that does not follow the schema.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that round-trips; "inf" for infinity.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace detail {

inline const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw parse_error(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw parse_error(where + ": missing field '" + key + "'");
  return *it;
}

inline std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw parse_error(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (v.is_number()) out.push_back(v.get<double>());
    else if (v.is_string() && v.get<std::string>() == "inf") out.push_back(inf);
    else throw parse_error(where + ": expected a number");
  }
  return out;
}

inline json number_array(std::span<const double> xs) {
  json arr = json::array();
  for (double v : xs) {
    if (std::isinf(v)) arr.push_back("inf");
    else arr.push_back(v);
  }
  return arr;
}

}  // namespace detail

/// Parse JSON text; syntax errors report line and column.
inline json parse_json(const std::string& text, const std::string& source = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw parse_error(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON: " +
                      e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

inline json to_json(const StepFunction& f) {
  return {{"breakpoints", detail::number_array(f.breakpoints())}, {"values", detail::number_array(f.values())}};
}

inline StepFunction step_from_json(const json& j, const std::string& where = "step") {
  return StepFunction(detail::numbers(detail::member(j, "breakpoints", where), where + ".breakpoints"),
                      detail::numbers(detail::member(j, "values", where), where + ".values"));
}

inline json to_json(const Algebra& alg) {
  if (!alg.is_matrix()) return {{"kind", "steps"}, {"bound", alg.domain_bound()}};
  json sizes = json::array();
  for (auto n : alg.block_sizes()) sizes.push_back(n);
  return {{"kind", "matrix"}, {"blocks", sizes}, {"weights", detail::number_array(alg.trace_weights())}};
}

inline Algebra algebra_from_json(const json& j) {
  const auto& kind = detail::member(j, "kind", "algebra");
  if (kind == "steps") {
    const auto& b = detail::member(j, "bound", "algebra");
    if (!b.is_number()) throw parse_error("algebra.bound: expected a number");
    return Algebra::commutative(b.get<double>());
  }
  if (kind == "matrix") {
    const auto& blocks = detail::member(j, "blocks", "algebra");
    if (!blocks.is_array()) throw parse_error("algebra.blocks: expected an array of sizes");
    std::vector<std::size_t> sizes;
    for (const auto& n : blocks) {
      if (!n.is_number_integer() || n.get<long long>() < 0) throw parse_error("algebra.blocks: expected sizes");
      sizes.push_back(n.get<std::size_t>());
    }
    std::vector<double> weights;
    if (j.contains("weights")) weights = detail::numbers(j.at("weights"), "algebra.weights");
    else weights.assign(sizes.size(), 1.0);
    return Algebra::matrix_blocks(std::move(sizes), std::move(weights));
  }
  throw parse_error("algebra.kind: expected \"matrix\" or \"steps\"");
}

inline json to_json(const Operator& a) {
  json out{{"algebra", to_json(a.algebra())}};
  if (!a.is_matrix()) {
    const auto& m = a.multiplier();
    out["step"] = {{"breakpoints", detail::number_array(m.breakpoints())},
                   {"values", detail::number_array(m.values())}};
    return out;
  }
  json blocks = json::array();
  for (const auto& b : a.blocks()) blocks.push_back(detail::number_array(b.data()));
  out["blocks"] = blocks;
  return out;
}

inline Operator operator_from_json(const json& j) {
  Algebra alg = algebra_from_json(detail::member(j, "algebra", "operator"));
  if (!alg.is_matrix()) {
    const auto& s = detail::member(j, "step", "operator");
    return Operator::from_multiplier(alg, Multiplier(detail::numbers(detail::member(s, "breakpoints", "step"), "step.breakpoints"),
                                                     detail::numbers(detail::member(s, "values", "step"), "step.values")));
  }
  const auto& blocks = detail::member(j, "blocks", "operator");
  if (!blocks.is_array()) throw parse_error("operator.blocks: expected an array of blocks");
  const auto sizes = alg.block_sizes();
  if (blocks.size() != sizes.size()) throw validation_error("operator.blocks: block count does not match algebra");
  std::vector<Matrix> mats;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    auto entries = detail::numbers(blocks[k], "operator.blocks[" + std::to_string(k) + "]");
    if (entries.size() != sizes[k] * sizes[k])
      throw validation_error("operator.blocks[" + std::to_string(k) + "]: expected " +
                             std::to_string(sizes[k] * sizes[k]) + " entries");
    mats.emplace_back(sizes[k], sizes[k], std::move(entries));
  }
  return Operator::from_blocks(std::move(alg), std::move(mats));
}

inline json to_json(const Weight& w) {
  if (w.is_exponential()) return {{"kind", "exp"}};
  return {{"kind", "step"}, {"mu", to_json(w.mu())}};
}

inline Weight weight_from_json(const json& j) {
  const auto& kind = detail::member(j, "kind", "weight");
  if (kind == "exp") return Weight::exponential();
  if (kind == "step") return Weight::step(step_from_json(detail::member(j, "mu", "weight"), "weight.mu"));
  throw parse_error("weight.kind: expected \"step\" or \"exp\"");
}

/// "t_start,t_end,value" header followed by one row per piece.
inline void write_csv(std::ostream& out, const StepFunction& f) {
  out << "t_start,t_end,value\n";
  for (const auto& r : rows(f))
    out << format_number(r.start) << ',' << format_number(r.end) << ',' << format_number(r.value) << '\n';
}

}  // namespace wrearr::io
