#pragma once

// Scoring and aggregation. Each prediction earns three numbers: exact match
// (byte equality), digit match (share of ground-truth digits reproduced at
// their aligned positions), and dlength (summed per-part length error).
// Aggregates average those per task cell and length bucket, and the
// learned-digit summaries reduce per-length curves to "how many digits does
// the model sustain".

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nupa/generator.hpp"
#include "nupa/numeral.hpp"
#include "nupa/oracle.hpp"

namespace nupa::metrics {

struct ScoreTriple {
  int exact = 0;            // 0 or 1
  double digit_match = 0.0; // in [0, 1]
  double dlength = 0.0;     // non-negative, integral per instance
  bool operator==(const ScoreTriple&) const = default;
};

// Scores a predicted answer against the canonical ground truth of the given
// representation. The empty string is the no-answer sentinel: exact and
// digit match are zero and dlength is the full ground-truth digit count. A
// prediction that does not even split into the right shape scores the same
// way. Predictions need not be canonical ("09", "6/4"): parts are aligned
// digit by digit, right-aligned for integer-like parts and left-aligned for
// decimal ones, with surplus predicted digits ignored by digit match and
// penalized through dlength only.
ScoreTriple score(const std::string& ground_truth, Rep rep, const std::string& prediction);

struct ScoredInstance {
  oracle::TaskId task = oracle::TaskId::Add;
  Rep rep = Rep::Integer;
  generator::Variant variant = generator::Variant::Standard;
  std::size_t length = 0;
  std::string bucket;
  ScoreTriple triple;
};

struct RangeAggregate {
  oracle::TaskId task = oracle::TaskId::Add;
  Rep rep = Rep::Integer;
  generator::Variant variant = generator::Variant::Standard;
  std::string bucket;
  std::size_t n = 0;
  double exact = 0.0;
  double digit_match = 0.0;
  double dlength = 0.0;
};

// Arithmetic means per (task, rep, variant, bucket), ordered by task, then
// representation, then variant, then bucket size. Permutation-invariant in
// the record order.
std::vector<RangeAggregate> aggregate(const std::vector<ScoredInstance>& records);

enum class MetricBasis { Exact, Digit, Dlength };

std::string_view basis_name(MetricBasis basis);

struct LearnedDigitSummary {
  std::size_t well_learned = 0;
  std::size_t performance_preserving = 0;
  MetricBasis basis = MetricBasis::Exact;
};

// Reduces a per-length curve to the largest length D such that every tested
// length up to D meets the threshold: over 90% / over 10% for exact match,
// over 90% / over 50% for digit match, and at most 0.1 / at most 1 for
// dlength (where smaller is better).
LearnedDigitSummary learned_digits(const std::map<std::size_t, double>& per_length,
                                   MetricBasis basis);

// Mean of one metric per length, the curve learned_digits consumes.
std::map<std::size_t, double> per_length_curve(const std::vector<ScoredInstance>& records,
                                               MetricBasis basis);

struct ReportRow {
  std::string task;
  std::string rep;
  std::string variant;
  std::string bucket;
  std::size_t n = 0;
  double exact = 0.0;
  double digit_match = 0.0;
  double dlength = 0.0;
  std::size_t wld = 0;  // well-learned digits, exact-match basis
  std::size_t ppd = 0;  // performance-preserving digits, exact-match basis
};

// One row per (task, rep, variant, bucket); the learned-digit columns repeat
// the cell-wide exact-basis summary on each of its bucket rows.
std::vector<ReportRow> build_report(const std::vector<ScoredInstance>& records);

// Tab-separated table of the report rows, header first.
void write_report_tsv(std::ostream& out, const std::vector<ReportRow>& rows);

// Structured mirror carrying the aggregates plus learned-digit summaries on
// all three bases, under a schema_version field.
void write_report_json(std::ostream& out, const std::vector<ScoredInstance>& records);

}  // namespace nupa::metrics
