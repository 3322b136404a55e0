#pragma once

// Batch evaluation driver: endpoint clients for chat-completion models,
// run orchestration with durable per-row persistence and resume, scoring
// over persisted rows, and the command-line surface.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nupa/generator.hpp"
#include "nupa/metrics.hpp"
#include "nupa/prompting.hpp"

namespace nupa::harness {

struct EndpointProfile {
  std::string base_url;             // e.g. "http://127.0.0.1:8080"
  std::string api_key_env;          // name of the env var holding the credential ("" = none)
  std::string model;
  double temperature = 0.6;
  double top_p = 0.9;
  double timeout_seconds = 30.0;    // > 0
  std::size_t parallelism = 1;      // ≥ 1 in-flight requests
  std::string system_profile = "default";  // key into the template pack's system messages
  bool operator==(const EndpointProfile&) const = default;
};

// Throws ConfigError when the invariants above do not hold.
void validate(const EndpointProfile& profile);

// JSON profile file. Unknown keys and malformed values raise ConfigError;
// the credential itself never appears in the file, only the env var name.
EndpointProfile load_endpoint_profile(std::istream& in);
void save_endpoint_profile(std::ostream& out, const EndpointProfile& profile);

// One chat exchange. Implementations throw EndpointError on failure and
// must tolerate concurrent calls from the dispatch pool.
class Endpoint {
 public:
  virtual ~Endpoint() = default;
  virtual std::string complete(const std::optional<std::string>& system_text,
                               const std::string& user_text) = 0;
};

// Test stub that answers every question with its ground truth, looked up by
// the question line (the tail of the user text).
class OracleEndpoint final : public Endpoint {
 public:
  explicit OracleEndpoint(const std::vector<generator::TaskInstance>& data);
  OracleEndpoint(const std::vector<generator::TaskInstance>& data,
                 const prompting::TemplatePack& pack);
  std::string complete(const std::optional<std::string>& system_text,
                       const std::string& user_text) override;

 private:
  std::map<std::string, std::string> answers_;
};

// Test stub that never answers.
class EmptyEndpoint final : public Endpoint {
 public:
  std::string complete(const std::optional<std::string>& system_text,
                       const std::string& user_text) override;
};

// Generic chat-completion client (POST {base_url}/v1/chat/completions with
// model, sampling parameters, and a system+user message list). Plain HTTP;
// terminate TLS in front of the artifact if the provider requires it.
class HttpEndpoint final : public Endpoint {
 public:
  explicit HttpEndpoint(EndpointProfile profile);
  std::string complete(const std::optional<std::string>& system_text,
                       const std::string& user_text) override;

 private:
  EndpointProfile profile_;
};

struct RunConfig {
  std::string dataset_path;   // JSONL dataset to evaluate
  std::string run_dir;        // receives results.jsonl and manifest.json
  EndpointProfile profile;
  std::size_t shots = 0;      // few-shot exemplars per prompt
  std::uint64_t seed = 0;     // drives exemplar choice
  std::size_t stop_after = 0; // stop after this many newly scored rows (0 = run to completion)
  prompting::TemplatePack pack = prompting::TemplatePack::defaults();
};

// One persisted result line.
struct ResultRow {
  std::size_t index = 0;      // position in the dataset
  oracle::TaskId task = oracle::TaskId::Add;
  Rep rep = Rep::Integer;
  generator::Variant variant = generator::Variant::Standard;
  std::size_t length = 0;
  std::string bucket;
  std::vector<std::string> operands;
  std::optional<int> extra_arg;
  std::string ground_truth;
  std::string raw_output;
  std::string extracted;
  metrics::ScoreTriple score;
};

struct RunManifest {
  std::string dataset_path;
  std::size_t dataset_instances = 0;
  EndpointProfile profile;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  std::string started;
  std::string finished;
  bool complete = false;
  std::vector<ResultRow> rows;  // ordered by dataset index
};

// Reads persisted result rows. A malformed final line is dropped (a killed
// writer can leave one behind); malformed earlier lines raise ConfigError.
// When dropped_tail is given it is set to whether such a line was discarded,
// so callers can rewrite the file before appending.
std::vector<ResultRow> read_results(std::istream& in, bool* dropped_tail = nullptr);

// Evaluates the dataset against the endpoint. Rows append to
// {run_dir}/results.jsonl one flushed line at a time, in dataset order, so
// an interrupted run resumes where it stopped without re-querying finished
// instances. Failed requests retry up to three times with growing delays,
// then score as empty answers; request failures never abort the run.
// Requests are dispatched up to profile.parallelism at a time, but rows are
// still persisted in dataset order by a single writer.
RunManifest run_evaluation(const RunConfig& cfg, Endpoint& endpoint);

struct ScoreReport {
  std::vector<metrics::ScoredInstance> records;  // one per persisted row
  std::vector<metrics::ReportRow> rows;          // per (task, rep, variant, bucket)
};

// Recomputes every aggregate from {run_dir}/results.jsonl. ConfigError when
// the run directory has no results.
ScoreReport score_run(const std::string& run_dir);

// Renders report.tsv and report.json into the run directory.
void write_reports(const std::string& run_dir, const ScoreReport& report);

// Command-line entry: generate | transform | rfcot | eval | score | report.
// Returns 0 on success, nonzero on usage or configuration errors.
int cli(const std::vector<std::string>& args);
int cli(int argc, const char* const* argv);

}  // namespace nupa::harness
