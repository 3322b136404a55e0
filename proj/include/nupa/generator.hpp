#pragma once

// Dataset construction: operand sampling, per-task-variant constraints,
// duplicate filtering, bucket assignment, and line-oriented persistence.
// Everything is driven by explicitly derived random streams, so any
// (seed, task, length, index) cell can be regenerated in isolation and a
// dataset built twice is identical byte for byte.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nupa/numeral.hpp"
#include "nupa/oracle.hpp"

namespace nupa::generator {

enum class Variant { Standard, Easy, Hard };

std::string_view variant_name(Variant v);
std::optional<Variant> variant_from_name(std::string_view name);

// Arithmetic-style cells test lengths 1-20; recognition and comparison
// cells stretch to 100. Fractions always sit in the short regime.
enum class RangeClass { UpTo20, UpTo100 };

RangeClass range_class(oracle::TaskId task, Rep rep);
std::size_t class_max_length(RangeClass c);

// Length buckets: 1-4 / 5-8 / 9-14 / 15-20 in the short regime,
// 1-10 / 11-20 / 21-60 / 61-100 in the long one.
std::string_view bucket_of(RangeClass c, std::size_t length);

// Which variants exist per cell: multiply ships only as hard/easy, addition
// has an easy split for fractions, mod has an easy split for integers, and
// max/min have hard versions everywhere. Everything else is standard only.
bool variant_allowed(oracle::TaskId task, Rep rep, Variant v);

struct TaskSpec {
  oracle::TaskId task = oracle::TaskId::Add;
  Rep rep = Rep::Integer;
  Variant variant = Variant::Standard;
  std::size_t min_length = 2;
  std::size_t max_length = 20;
  std::size_t per_length = 1000;
};

// Compact cell name: "add-int", "multiply-hard-float", "mod-easy-int".
// Standard variants omit the variant segment.
std::string task_token(oracle::TaskId task, Rep rep, Variant v);
std::string task_token(const TaskSpec& spec);

// Parses a token back into a spec with default lengths and counts.
// Returns nullopt for unknown cells.
std::optional<TaskSpec> spec_from_token(std::string_view token);

// Every supported (task, rep, variant) cell with default ranges.
std::vector<TaskSpec> full_roster();

struct SeedPath {
  std::string task;  // task token
  std::size_t length = 0;
  std::size_t index = 0;
  bool operator==(const SeedPath&) const = default;
};

struct TaskInstance {
  oracle::TaskId task = oracle::TaskId::Add;
  Rep rep = Rep::Integer;
  Variant variant = Variant::Standard;
  std::size_t length = 0;
  std::string bucket;
  std::vector<std::string> operands;  // canonical texts, display order
  std::optional<int> extra_arg;       // position / digit / significant figures
  std::string ground_truth;           // canonical answer text
  SeedPath seed;
  bool operator==(const TaskInstance&) const = default;
};

Rep instance_answer_rep(const TaskInstance& inst);

// Draws uniformly from [0, n) using raw engine words (the standard
// distributions vary across library implementations; this keeps datasets
// byte-identical everywhere).
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n);

// The per-instance random stream for (seed, task token, length, index).
std::mt19937_64 instance_stream(std::uint64_t seed, std::string_view token, std::size_t length,
                                std::size_t index);

std::string gen_digit_string(std::size_t len, bool leading_nonzero, std::mt19937_64& rng);

// One canonical number with problem_length exactly L. Scientific needs
// L >= 2 (one significand digit before the point, at least one after).
Number gen_operand(Rep rep, std::size_t L, std::mt19937_64& rng);

// An operand pair for a two-operand task: the first operand has length L,
// the second length is uniform on [ceil(L/2), L] (variant rules override),
// variant constraints are enforced, non-commutative tasks are ordered so the
// result exists, and commutative tasks swap with probability one half.
std::pair<Number, Number> gen_pair(const TaskSpec& spec, std::size_t L, std::mt19937_64& rng);

// Re-establishes the variant constraints on a candidate pair, regenerating
// parts as needed. Exposed for property tests.
std::pair<Number, Number> apply_variant_constraints(const TaskSpec& spec, Number a, Number b,
                                                    std::mt19937_64& rng);

// Builds every instance for the spec: per length, up to per_length distinct
// questions (fewer when the space is exhausted), ground truth attached from
// the oracle, ordered by (length, index).
std::vector<TaskInstance> build_dataset(const TaskSpec& spec, std::uint64_t seed);

// One JSON record per line with stable field order.
void write_dataset(std::ostream& out, const std::vector<TaskInstance>& data);
std::vector<TaskInstance> read_dataset(std::istream& in);

}  // namespace nupa::generator
