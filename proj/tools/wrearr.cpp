// wrearr: command-line front end.
//
//   wrearr mu     --input op.json [--out mu.csv]
//   wrearr mux    --input op.json --weight w.json [--out mux.csv]
//   wrearr taux   --input op.json --weight w.json
//   wrearr norm   --input op.json --weight w.json --norm L2
//   wrearr verify [--seed 42] [--trials 100] [--weight w.json] [--out dump.json]
//   wrearr gen    --kind diag|block|isometry|weight [--size 4] [--seed 1] [--out file.json]
//
// Exit codes: 0 ok, 1 property failure, 2 parse error, 3 validation error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wrearr/io.hpp"
#include "wrearr/verify.hpp"
#include "wrearr/wrearr.hpp"

namespace {

using namespace wrearr;

enum Exit { ok = 0, property_failure = 1, parse_failure = 2, invalid = 3 };

std::string twelve_digits(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Writes to --out when given, otherwise to stdout.
template <class Fn>
void emit(const std::string& out_path, Fn&& fn) {
  if (out_path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw validation_error(out_path + ": cannot open for writing");
  fn(out);
}

double tolerance_from_env() {
  const char* env = std::getenv("WREARR_TOLERANCE");
  if (env == nullptr || *env == '\0') return value_tolerance;
  char* end = nullptr;
  const double tol = std::strtod(env, &end);
  if (*end != '\0' || !(tol > 0.0)) throw validation_error(std::string("WREARR_TOLERANCE: bad value '") + env + "'");
  return tol;
}

WeightedContext load_context(const Operator& a, const std::string& weight_path) {
  return {a.algebra(), io::weight_from_json(io::read_json_file(weight_path))};
}

int run_verify(std::uint64_t seed, std::size_t trials, const std::string& weight_path, const std::string& out_path) {
  verify::Settings settings;
  settings.tolerance = tolerance_from_env();
  if (!weight_path.empty()) settings.weight = io::weight_from_json(io::read_json_file(weight_path));

  const auto props = verify::properties();
  std::size_t failures = 0;
  io::json dumps = io::json::array();
  if (trials > 0) {
    for (std::size_t i = 0; i < props.size(); ++i) {
      const auto r = verify::run(props[i], i, seed, trials, settings);
      std::printf("%-4s %-40s passed=%zu failed=%zu worst=%s time=%.2fs\n", r.failed == 0 ? "PASS" : "FAIL",
                  r.name.c_str(), r.passed, r.failed, twelve_digits(r.worst_residual).c_str(), r.seconds);
      if (r.failed > 0) {
        ++failures;
        dumps.push_back(verify::dump(r.name, *r.counterexample));
      }
    }
  }
  std::printf("%zu properties, %zu trials each, %zu failing\n", trials > 0 ? props.size() : 0, trials, failures);
  if (failures == 0) return ok;
  emit(out_path, [&](std::ostream& os) { os << dumps.dump(2) << '\n'; });
  return property_failure;
}

int run_gen(std::uint64_t seed, const std::string& kind, std::size_t size, const std::string& out_path) {
  random::Rng rng(seed);
  io::json doc;
  if (kind == "weight") {
    if (size > 8) {
      std::cerr << "gen: weights have 1-8 steps\n";
      return parse_failure;
    }
    doc = io::to_json(random::step_weight(rng, size));
  } else {
    if (size == 0 || size > max_block_size) {
      std::cerr << "gen: size must be in [1, " << max_block_size << "]\n";
      return parse_failure;
    }
    const auto alg = Algebra::matrix_blocks({size}, {1.0});
    if (kind == "diag") {
      std::vector<double> d(size);
      for (auto& v : d) v = random::uniform(rng, -1.0, 1.0);
      doc = io::to_json(Operator::diagonal(alg, d));
    } else if (kind == "block") {
      doc = io::to_json(random::block_operator(rng, alg));
    } else if (kind == "isometry") {
      doc = io::to_json(random::partial_isometry(rng, alg));
    } else {
      std::cerr << "gen: unknown kind '" << kind << "'\n";
      return parse_failure;
    }
  }
  emit(out_path, [&](std::ostream& os) { os << doc.dump() << '\n'; });
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted non-commutative rearrangements"};
  app.require_subcommand(1);

  std::string input, weight, norm_spec, out, kind;
  std::uint64_t seed = 42;
  std::size_t trials = 100;
  std::size_t size = 4;

  auto* mu = app.add_subcommand("mu", "CSV of the singular value function");
  mu->add_option("--input", input, "operator JSON")->required();
  mu->add_option("--out", out, "output CSV (default stdout)");

  auto* mux = app.add_subcommand("mux", "CSV of the weighted rearrangement");
  mux->add_option("--input", input, "operator JSON")->required();
  mux->add_option("--weight", weight, "weight JSON")->required();
  mux->add_option("--out", out, "output CSV (default stdout)");

  auto* taux = app.add_subcommand("taux", "weighted functional tau_x(a)");
  taux->add_option("--input", input, "operator JSON")->required();
  taux->add_option("--weight", weight, "weight JSON")->required();

  auto* norm = app.add_subcommand("norm", "norm of a by both routes");
  norm->add_option("--input", input, "operator JSON")->required();
  norm->add_option("--weight", weight, "weight JSON")->required();
  norm->add_option("--norm", norm_spec, "L1, L2, Linf, Lp:p, orlicz:cosh-1, orlicz:llogl, orlicz:pow:p, orlicz:capped:c")
      ->required();

  auto* ver = app.add_subcommand("verify", "randomized property suite");
  ver->add_option("--seed", seed, "base seed");
  ver->add_option("--trials", trials, "trials per property");
  ver->add_option("--weight", weight, "pin every instance to this weight");
  ver->add_option("--out", out, "counterexample dump (default stdout)");

  auto* gen = app.add_subcommand("gen", "random operator or weight JSON");
  gen->add_option("--kind", kind, "diag, block, isometry or weight")->required();
  gen->add_option("--size", size, "block size, or step count for weights (0 = random)");
  gen->add_option("--seed", seed, "seed");
  gen->add_option("--out", out, "output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : parse_failure;
  }

  try {
    if (*ver) return run_verify(seed, trials, weight, out);
    if (*gen) return run_gen(seed, kind, size, out);

    const Operator a = io::operator_from_json(io::read_json_file(input));
    if (*mu) {
      const auto f = singular_value_function(a);
      emit(out, [&](std::ostream& os) { io::write_csv(os, f); });
      return ok;
    }
    const auto ctx = load_context(a, weight);
    if (*mux) {
      const auto f = weighted_rearrangement(ctx, a);
      emit(out, [&](std::ostream& os) { io::write_csv(os, f); });
    } else if (*taux) {
      std::cout << twelve_digits(tau_x(ctx, a)) << '\n';
    } else if (*norm) {
      const NormKind k = parse_norm_kind(norm_spec);
      const double ra = norm_route_a(ctx, k, a);
      const double rb = norm_route_b(ctx, k, a);
      const double diff = ra == rb ? 0.0 : std::abs(ra - rb);
      std::cout << "route_a " << twelve_digits(ra) << '\n'
                << "route_b " << twelve_digits(rb) << '\n'
                << "difference " << twelve_digits(diff) << '\n';
    }
    return ok;
  } catch (const io::parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return parse_failure;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return parse_failure;
  } catch (const std::logic_error& e) {
    // validation_error, refusal_error and membership_error
    std::cerr << "validation error: " << e.what() << '\n';
    return invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return property_failure;
  }
}
