#include "nupa/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <tuple>

#include <json.hpp>

#include "nupa/errors.hpp"

namespace nupa::metrics {

namespace {

std::size_t total_digit_count(const PartSlices& parts) {
  std::size_t total = 0;
  for (const auto& [role, text] : parts) total += text.size();
  return total;
}

int bucket_order(const std::string& bucket) {
  if (bucket == "S") return 0;
  if (bucket == "M") return 1;
  if (bucket == "L") return 2;
  if (bucket == "XL") return 3;
  return 4;
}

auto aggregate_key(const ScoredInstance& r) {
  return std::tuple(static_cast<int>(r.task), static_cast<int>(r.rep),
                    static_cast<int>(r.variant), bucket_order(r.bucket), r.bucket);
}

// Pass criterion for one tested length under the basis' threshold pair.
bool passes(MetricBasis basis, double value, bool strong) {
  switch (basis) {
    case MetricBasis::Exact: return value > (strong ? 0.90 : 0.10);
    case MetricBasis::Digit: return value > (strong ? 0.90 : 0.50);
    case MetricBasis::Dlength: return value <= (strong ? 0.1 : 1.0);
  }
  return false;
}

std::string fixed4(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4f", v);
  return buffer;
}

struct CellKey {
  oracle::TaskId task;
  Rep rep;
  generator::Variant variant;
  auto tie() const {
    return std::tuple(static_cast<int>(task), static_cast<int>(rep), static_cast<int>(variant));
  }
  bool operator<(const CellKey& o) const { return tie() < o.tie(); }
  bool operator==(const CellKey& o) const { return tie() == o.tie(); }
};

}  // namespace

ScoreTriple score(const std::string& ground_truth, Rep rep, const std::string& prediction) {
  auto gt_parts = split_parts(rep, ground_truth);
  if (!gt_parts)
    throw DomainError("ground truth \"" + ground_truth + "\" is not a valid " +
                      std::string(rep_name(rep)));
  const std::size_t gt_total = total_digit_count(*gt_parts);

  ScoreTriple triple;
  triple.exact = !prediction.empty() && prediction == ground_truth ? 1 : 0;

  auto pred_parts = prediction.empty() ? std::nullopt : split_parts(rep, prediction);
  if (!pred_parts) {
    // No usable answer: every ground-truth digit is missing.
    triple.digit_match = 0.0;
    triple.dlength = static_cast<double>(gt_total);
    return triple;
  }

  std::size_t correct = 0;
  std::size_t dlength = 0;
  for (std::size_t part = 0; part < gt_parts->size(); ++part) {
    const auto& [role, gt_text] = (*gt_parts)[part];
    const std::string& pred_text = (*pred_parts)[part].second;
    const std::size_t m = gt_text.size();
    const std::size_t n = pred_text.size();
    dlength += m > n ? m - n : n - m;
    for (std::size_t i = 0; i < m; ++i) {
      if (alignment_of(role) == Alignment::Left) {
        if (i < n && pred_text[i] == gt_text[i]) ++correct;
      } else {
        const std::size_t from_right = m - 1 - i;
        if (from_right < n && pred_text[n - 1 - from_right] == gt_text[i]) ++correct;
      }
    }
  }
  triple.digit_match = gt_total == 0 ? 0.0 : static_cast<double>(correct) / gt_total;
  triple.dlength = static_cast<double>(dlength);
  return triple;
}

std::vector<RangeAggregate> aggregate(const std::vector<ScoredInstance>& records) {
  std::map<decltype(aggregate_key(std::declval<ScoredInstance>())), RangeAggregate> cells;
  for (const auto& r : records) {
    auto& cell = cells[aggregate_key(r)];
    if (cell.n == 0) {
      cell.task = r.task;
      cell.rep = r.rep;
      cell.variant = r.variant;
      cell.bucket = r.bucket;
    }
    ++cell.n;
    cell.exact += r.triple.exact;
    cell.digit_match += r.triple.digit_match;
    cell.dlength += r.triple.dlength;
  }
  std::vector<RangeAggregate> out;
  out.reserve(cells.size());
  for (auto& [key, cell] : cells) {
    cell.exact /= static_cast<double>(cell.n);
    cell.digit_match /= static_cast<double>(cell.n);
    cell.dlength /= static_cast<double>(cell.n);
    out.push_back(std::move(cell));
  }
  return out;
}

std::string_view basis_name(MetricBasis basis) {
  switch (basis) {
    case MetricBasis::Exact: return "exact";
    case MetricBasis::Digit: return "digit_match";
    case MetricBasis::Dlength: return "dlength";
  }
  throw DomainError("unknown metric basis");
}

LearnedDigitSummary learned_digits(const std::map<std::size_t, double>& per_length,
                                   MetricBasis basis) {
  LearnedDigitSummary summary;
  summary.basis = basis;
  bool strong_alive = true;
  bool weak_alive = true;
  for (const auto& [length, value] : per_length) {
    strong_alive = strong_alive && passes(basis, value, true);
    weak_alive = weak_alive && passes(basis, value, false);
    if (strong_alive) summary.well_learned = length;
    if (weak_alive) summary.performance_preserving = length;
    if (!weak_alive && !strong_alive) break;
  }
  return summary;
}

std::map<std::size_t, double> per_length_curve(const std::vector<ScoredInstance>& records,
                                               MetricBasis basis) {
  std::map<std::size_t, std::pair<double, std::size_t>> sums;
  for (const auto& r : records) {
    auto& [sum, n] = sums[r.length];
    switch (basis) {
      case MetricBasis::Exact: sum += r.triple.exact; break;
      case MetricBasis::Digit: sum += r.triple.digit_match; break;
      case MetricBasis::Dlength: sum += r.triple.dlength; break;
    }
    ++n;
  }
  std::map<std::size_t, double> curve;
  for (const auto& [length, acc] : sums) curve[length] = acc.first / acc.second;
  return curve;
}

std::vector<ReportRow> build_report(const std::vector<ScoredInstance>& records) {
  // Exact-basis learned digits per cell, repeated on each bucket row.
  std::map<CellKey, LearnedDigitSummary> summaries;
  std::map<CellKey, std::vector<ScoredInstance>> per_cell;
  for (const auto& r : records)
    per_cell[CellKey{r.task, r.rep, r.variant}].push_back(r);
  for (const auto& [key, cell_records] : per_cell)
    summaries[key] = learned_digits(per_length_curve(cell_records, MetricBasis::Exact),
                                    MetricBasis::Exact);

  std::vector<ReportRow> rows;
  for (const auto& agg : aggregate(records)) {
    ReportRow row;
    row.task = std::string(oracle::task_name(agg.task));
    row.rep = std::string(rep_name(agg.rep));
    row.variant = std::string(generator::variant_name(agg.variant));
    row.bucket = agg.bucket;
    row.n = agg.n;
    row.exact = agg.exact;
    row.digit_match = agg.digit_match;
    row.dlength = agg.dlength;
    const auto& summary = summaries[CellKey{agg.task, agg.rep, agg.variant}];
    row.wld = summary.well_learned;
    row.ppd = summary.performance_preserving;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_report_tsv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "task\trep\tvariant\tbucket\tn\texact\tdigit_match\tdlength\twld\tppd\n";
  for (const auto& row : rows) {
    out << row.task << '\t' << row.rep << '\t' << row.variant << '\t' << row.bucket << '\t'
        << row.n << '\t' << fixed4(row.exact) << '\t' << fixed4(row.digit_match) << '\t'
        << fixed4(row.dlength) << '\t' << row.wld << '\t' << row.ppd << '\n';
  }
}

void write_report_json(std::ostream& out, const std::vector<ScoredInstance>& records) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;

  auto& aggregates = j["aggregates"] = nlohmann::ordered_json::array();
  for (const auto& agg : aggregate(records)) {
    nlohmann::ordered_json row;
    row["task"] = std::string(oracle::task_name(agg.task));
    row["rep"] = std::string(rep_name(agg.rep));
    row["variant"] = std::string(generator::variant_name(agg.variant));
    row["bucket"] = agg.bucket;
    row["n"] = agg.n;
    row["exact"] = agg.exact;
    row["digit_match"] = agg.digit_match;
    row["dlength"] = agg.dlength;
    aggregates.push_back(std::move(row));
  }

  std::map<CellKey, std::vector<ScoredInstance>> per_cell;
  for (const auto& r : records)
    per_cell[CellKey{r.task, r.rep, r.variant}].push_back(r);

  auto& learned = j["learned_digits"] = nlohmann::ordered_json::array();
  for (const auto& [key, cell_records] : per_cell) {
    for (MetricBasis basis : {MetricBasis::Exact, MetricBasis::Digit, MetricBasis::Dlength}) {
      const auto summary = learned_digits(per_length_curve(cell_records, basis), basis);
      nlohmann::ordered_json row;
      row["task"] = std::string(oracle::task_name(key.task));
      row["rep"] = std::string(rep_name(key.rep));
      row["variant"] = std::string(generator::variant_name(key.variant));
      row["basis"] = std::string(basis_name(basis));
      row["well_learned"] = summary.well_learned;
      row["performance_preserving"] = summary.performance_preserving;
      learned.push_back(std::move(row));
    }
  }
  out << j.dump(2) << '\n';
}

}  // namespace nupa::metrics
