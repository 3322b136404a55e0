#include "nupa/harness.hpp"

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>
#include <utility>

#include "nupa/errors.hpp"
#include "nupa/oracle.hpp"
#include "nupa/rfcot.hpp"
#include "nupa/transforms.hpp"

namespace nupa::harness {
namespace {

constexpr int kSchemaVersion = 1;
constexpr int kMaxAttempts = 4;  // one call plus three retries

std::string iso_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json profile_json(const EndpointProfile& p) {
  nlohmann::ordered_json j;
  j["base_url"] = p.base_url;
  j["api_key_env"] = p.api_key_env;
  j["model"] = p.model;
  j["temperature"] = p.temperature;
  j["top_p"] = p.top_p;
  j["timeout_seconds"] = p.timeout_seconds;
  j["parallelism"] = p.parallelism;
  j["system_profile"] = p.system_profile;
  return j;
}

nlohmann::ordered_json row_json(const ResultRow& row) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["index"] = row.index;
  j["task"] = std::string(oracle::task_name(row.task));
  j["rep"] = std::string(rep_name(row.rep));
  j["variant"] = std::string(generator::variant_name(row.variant));
  j["length"] = row.length;
  j["bucket"] = row.bucket;
  j["operands"] = row.operands;
  if (row.extra_arg)
    j["extra_arg"] = *row.extra_arg;
  else
    j["extra_arg"] = nullptr;
  j["ground_truth"] = row.ground_truth;
  j["raw_output"] = row.raw_output;
  j["extracted"] = row.extracted;
  j["exact"] = row.score.exact;
  j["digit_match"] = row.score.digit_match;
  j["dlength"] = row.score.dlength;
  return j;
}

ResultRow row_from_json(const nlohmann::json& j) {
  ResultRow row;
  if (j.at("schema_version").get<int>() != kSchemaVersion)
    throw ParseError("unsupported result schema version");
  row.index = j.at("index").get<std::size_t>();
  const auto task = oracle::task_from_name(j.at("task").get<std::string>());
  const auto rep = rep_from_name(j.at("rep").get<std::string>());
  const auto variant = generator::variant_from_name(j.at("variant").get<std::string>());
  if (!task || !rep || !variant) throw ParseError("unknown task, rep, or variant in result row");
  row.task = *task;
  row.rep = *rep;
  row.variant = *variant;
  row.length = j.at("length").get<std::size_t>();
  row.bucket = j.at("bucket").get<std::string>();
  row.operands = j.at("operands").get<std::vector<std::string>>();
  if (!j.at("extra_arg").is_null()) row.extra_arg = j.at("extra_arg").get<int>();
  row.ground_truth = j.at("ground_truth").get<std::string>();
  row.raw_output = j.at("raw_output").get<std::string>();
  row.extracted = j.at("extracted").get<std::string>();
  row.score.exact = j.at("exact").get<int>();
  row.score.digit_match = j.at("digit_match").get<double>();
  row.score.dlength = j.at("dlength").get<double>();
  return row;
}

// Builds the full prompt for one dataset row. Exemplar choice draws from a
// stream keyed by (seed, cell, length, index), so a resumed run renders the
// same prompt the interrupted run would have.
prompting::PromptBundle build_prompt(const std::vector<generator::TaskInstance>& data,
                                     std::size_t index, const RunConfig& cfg) {
  const auto& inst = data[index];
  std::string few_shot;
  if (cfg.shots > 0) {
    auto rng = generator::instance_stream(
        cfg.seed, "shots/" + generator::task_token(inst.task, inst.rep, inst.variant), inst.length,
        index);
    few_shot = prompting::few_shot_prefix(inst, cfg.shots, data, rng, cfg.pack);
  }
  return prompting::render_question(inst, cfg.pack, cfg.profile.system_profile, few_shot);
}

// One request with bounded backoff; a still-failing request becomes the
// empty answer rather than aborting the run.
std::string query_with_retries(Endpoint& endpoint, const prompting::PromptBundle& bundle) {
  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    try {
      return endpoint.complete(bundle.system_text, bundle.user_text);
    } catch (const EndpointError&) {
      if (attempt < kMaxAttempts)
        std::this_thread::sleep_for(std::chrono::milliseconds(25L << attempt));
    }
  }
  return "";
}

void write_manifest_file(const RunConfig& cfg, const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["dataset"] = manifest.dataset_path;
  j["dataset_instances"] = manifest.dataset_instances;
  j["endpoint"] = profile_json(manifest.profile);
  j["shots"] = manifest.shots;
  j["seed"] = manifest.seed;
  j["transform"] = nullptr;  // this driver evaluates canonical surfaces only
  j["started"] = manifest.started;
  j["finished"] = manifest.finished;
  j["rows"] = manifest.rows.size();
  j["complete"] = manifest.complete;
  j["results"] = "results.jsonl";
  std::ofstream out(cfg.run_dir + "/manifest.json");
  if (!out) throw ConfigError("cannot write manifest in " + cfg.run_dir);
  out << j.dump(2) << '\n';
}

}  // namespace

void validate(const EndpointProfile& profile) {
  if (profile.parallelism < 1) throw ConfigError("endpoint parallelism must be at least 1");
  if (!(profile.timeout_seconds > 0)) throw ConfigError("endpoint timeout must be positive");
}

EndpointProfile load_endpoint_profile(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed endpoint profile: ") + e.what());
  }
  EndpointProfile p;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "base_url")
        p.base_url = value.get<std::string>();
      else if (key == "api_key_env")
        p.api_key_env = value.get<std::string>();
      else if (key == "model")
        p.model = value.get<std::string>();
      else if (key == "temperature")
        p.temperature = value.get<double>();
      else if (key == "top_p")
        p.top_p = value.get<double>();
      else if (key == "timeout_seconds")
        p.timeout_seconds = value.get<double>();
      else if (key == "parallelism")
        p.parallelism = value.get<std::size_t>();
      else if (key == "system_profile")
        p.system_profile = value.get<std::string>();
      else
        throw ConfigError("unknown endpoint profile key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed endpoint profile: ") + e.what());
  }
  validate(p);
  return p;
}

void save_endpoint_profile(std::ostream& out, const EndpointProfile& profile) {
  out << profile_json(profile).dump(2) << '\n';
}

OracleEndpoint::OracleEndpoint(const std::vector<generator::TaskInstance>& data)
    : OracleEndpoint(data, prompting::TemplatePack::defaults()) {}

OracleEndpoint::OracleEndpoint(const std::vector<generator::TaskInstance>& data,
                               const prompting::TemplatePack& pack) {
  for (const auto& inst : data) answers_[prompting::question_text(inst, pack)] = inst.ground_truth;
}

std::string OracleEndpoint::complete(const std::optional<std::string>& /*system_text*/,
                                     const std::string& user_text) {
  const std::size_t newline = user_text.rfind('\n');
  const std::string question =
      newline == std::string::npos ? user_text : user_text.substr(newline + 1);
  const auto it = answers_.find(question);
  if (it == answers_.end()) throw EndpointError("question not in the answer book: " + question);
  return it->second;
}

std::string EmptyEndpoint::complete(const std::optional<std::string>& /*system_text*/,
                                    const std::string& /*user_text*/) {
  return "";
}

HttpEndpoint::HttpEndpoint(EndpointProfile profile) : profile_(std::move(profile)) {
  validate(profile_);
}

std::string HttpEndpoint::complete(const std::optional<std::string>& system_text,
                                   const std::string& user_text) {
  // A fresh client per call keeps concurrent dispatch safe.
  httplib::Client client(profile_.base_url);
  const auto sec = static_cast<time_t>(profile_.timeout_seconds);
  const auto usec = static_cast<time_t>((profile_.timeout_seconds - static_cast<double>(sec)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);

  httplib::Headers headers;
  if (!profile_.api_key_env.empty()) {
    const char* key = std::getenv(profile_.api_key_env.c_str());
    if (key != nullptr && *key != '\0')
      headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  nlohmann::json body;
  body["model"] = profile_.model;
  body["temperature"] = profile_.temperature;
  body["top_p"] = profile_.top_p;
  auto messages = nlohmann::json::array();
  if (system_text) messages.push_back({{"role", "system"}, {"content", *system_text}});
  messages.push_back({{"role", "user"}, {"content", user_text}});
  body["messages"] = std::move(messages);

  const auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
  if (!res)
    throw EndpointError("no response from " + profile_.base_url + ": " +
                        httplib::to_string(res.error()));
  if (res->status != 200)
    throw EndpointError("chat endpoint returned status " + std::to_string(res->status));
  try {
    const auto j = nlohmann::json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw EndpointError(std::string("malformed chat response: ") + e.what());
  }
}

std::vector<ResultRow> read_results(std::istream& in, bool* dropped_tail) {
  std::vector<ResultRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool dropped = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (dropped)
      throw ConfigError("malformed result row before line " + std::to_string(line_no));
    try {
      rows.push_back(row_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception&) {
      // A killed writer can leave one partial line, but only as the tail.
      dropped = true;
    }
  }
  if (dropped_tail) *dropped_tail = dropped;
  return rows;
}

RunManifest run_evaluation(const RunConfig& cfg, Endpoint& endpoint) {
  validate(cfg.profile);
  std::ifstream dataset_in(cfg.dataset_path);
  if (!dataset_in) throw ConfigError("cannot open dataset " + cfg.dataset_path);
  const auto data = generator::read_dataset(dataset_in);

  std::filesystem::create_directories(cfg.run_dir);
  const std::string results_path = cfg.run_dir + "/results.jsonl";

  RunManifest manifest;
  manifest.dataset_path = cfg.dataset_path;
  manifest.dataset_instances = data.size();
  manifest.profile = cfg.profile;
  manifest.shots = cfg.shots;
  manifest.seed = cfg.seed;
  manifest.started = iso_now();

  bool dropped_tail = false;
  {
    std::ifstream existing(results_path);
    if (existing) manifest.rows = read_results(existing, &dropped_tail);
  }
  for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
    const auto& row = manifest.rows[i];
    if (row.index != i || i >= data.size() || row.operands != data[i].operands ||
        row.ground_truth != data[i].ground_truth)
      throw ConfigError("existing results do not match the dataset; refusing to resume");
  }
  if (dropped_tail) {
    // Rewrite the intact prefix so new rows never append onto a torn line.
    std::ofstream rewrite(results_path, std::ios::trunc);
    if (!rewrite) throw ConfigError("cannot write " + results_path);
    for (const auto& row : manifest.rows) rewrite << row_json(row).dump() << '\n';
  }

  std::ofstream out(results_path, std::ios::app);
  if (!out) throw ConfigError("cannot write " + results_path);

  std::size_t fresh = 0;
  std::size_t next = manifest.rows.size();
  while (next < data.size() && (cfg.stop_after == 0 || fresh < cfg.stop_after)) {
    std::size_t block = std::min(cfg.profile.parallelism, data.size() - next);
    if (cfg.stop_after > 0) block = std::min(block, cfg.stop_after - fresh);

    std::vector<prompting::PromptBundle> bundles;
    bundles.reserve(block);
    for (std::size_t i = 0; i < block; ++i) bundles.push_back(build_prompt(data, next + i, cfg));

    std::vector<std::future<std::string>> raws;
    raws.reserve(block);
    for (std::size_t i = 0; i < block; ++i)
      raws.push_back(std::async(std::launch::async, [&endpoint, &bundles, i] {
        return query_with_retries(endpoint, bundles[i]);
      }));

    for (std::size_t i = 0; i < block; ++i) {
      const std::size_t index = next + i;
      const auto& inst = data[index];
      ResultRow row;
      row.index = index;
      row.task = inst.task;
      row.rep = inst.rep;  // the cell's representation; answers may differ (e.g. quotients)
      row.variant = inst.variant;
      row.length = inst.length;
      row.bucket = inst.bucket;
      row.operands = inst.operands;
      row.extra_arg = inst.extra_arg;
      row.ground_truth = inst.ground_truth;
      row.raw_output = raws[i].get();
      row.extracted = prompting::extract_answer(bundles[i], row.raw_output);
      row.score =
          metrics::score(inst.ground_truth, generator::instance_answer_rep(inst), row.extracted);
      std::string persisted = row_json(row).dump();
      persisted.push_back('\n');
      out << persisted;
      out.flush();
      manifest.rows.push_back(std::move(row));
      ++fresh;
    }
    next += block;
  }

  manifest.complete = manifest.rows.size() == data.size();
  manifest.finished = iso_now();
  write_manifest_file(cfg, manifest);
  return manifest;
}

ScoreReport score_run(const std::string& run_dir) {
  std::ifstream in(run_dir + "/results.jsonl");
  if (!in) throw ConfigError("no results.jsonl under " + run_dir);
  const auto rows = read_results(in);

  ScoreReport report;
  report.records.reserve(rows.size());
  for (const auto& row : rows) {
    metrics::ScoredInstance rec;
    rec.task = row.task;
    rec.rep = row.rep;
    rec.variant = row.variant;
    rec.length = row.length;
    rec.bucket = row.bucket;
    rec.triple = row.score;
    report.records.push_back(std::move(rec));
  }
  report.rows = metrics::build_report(report.records);
  return report;
}

void write_reports(const std::string& run_dir, const ScoreReport& report) {
  std::ofstream tsv(run_dir + "/report.tsv");
  if (!tsv) throw ConfigError("cannot write report.tsv under " + run_dir);
  metrics::write_report_tsv(tsv, report.rows);
  std::ofstream json_out(run_dir + "/report.json");
  if (!json_out) throw ConfigError("cannot write report.json under " + run_dir);
  metrics::write_report_json(json_out, report.records);
}

namespace {

// "7" or "2..20".
std::pair<std::size_t, std::size_t> parse_length_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const std::size_t n = std::stoul(text);
      return {n, n};
    }
    const std::size_t lo = std::stoul(text.substr(0, dots));
    const std::size_t hi = std::stoul(text.substr(dots + 2));
    return {lo, hi};
  } catch (const std::exception&) {
    throw ConfigError("bad --lengths value '" + text + "' (use N or LO..HI)");
  }
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ','))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

// Opens --out when given, stdout otherwise.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<generator::TaskInstance> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset " + path);
  return generator::read_dataset(in);
}

int run_generate(const std::string& tasks, const std::string& lengths, std::size_t per_length,
                 std::uint64_t seed, const std::string& out_path) {
  std::vector<generator::TaskSpec> specs;
  if (tasks == "all") {
    specs = generator::full_roster();
  } else {
    for (const auto& token : split_commas(tasks)) {
      const auto spec = generator::spec_from_token(token);
      if (!spec) throw ConfigError("unknown task token '" + token + "'");
      specs.push_back(*spec);
    }
  }
  if (specs.empty()) throw ConfigError("no tasks selected");
  for (auto& spec : specs) {
    if (!lengths.empty()) {
      const auto [lo, hi] = parse_length_range(lengths);
      spec.min_length = lo;
      spec.max_length = hi;
    }
    spec.per_length = per_length;
  }

  OutputTarget out(out_path);
  for (const auto& spec : specs) {
    const auto data = generator::build_dataset(spec, seed);
    generator::write_dataset(out.stream(), data);
  }
  return 0;
}

int run_transform_tokens(const std::string& in_path, const std::string& mode, std::size_t k,
                         std::uint64_t seed, const std::string& out_path) {
  const bool aligned = mode == "aligned";
  if (!aligned && mode != "random")
    throw ConfigError("bad --tokenize mode '" + mode + "' (aligned or random)");
  if (k == 0) throw ConfigError("--tokenize chunk size must be at least 1");
  std::ifstream in(in_path);
  if (!in) throw ConfigError("cannot open dataset " + in_path);

  const transforms::TokenizationScheme scheme{
      aligned ? transforms::TokenizeMode::AlignedK : transforms::TokenizeMode::RandomK, k};
  std::mt19937_64 rng(seed);
  OutputTarget out(out_path);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
      if (j.at("rep").get<std::string>() != "integer")
        throw ConfigError("tokenizer corpora need an integer dataset (line " +
                          std::to_string(line_no) + ")");
      nlohmann::ordered_json surface;
      surface["tokenizer"] = mode;
      surface["k"] = k;
      auto ops = nlohmann::ordered_json::array();
      for (const auto& op : j.at("operands"))
        ops.push_back(transforms::tokenize(op.get<std::string>(), scheme, &rng));
      surface["operands"] = std::move(ops);
      surface["ground_truth"] =
          transforms::tokenize(j.at("ground_truth").get<std::string>(), scheme, &rng);
      j["surface"] = std::move(surface);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    out.stream() << j.dump() << '\n';
  }
  return 0;
}

int run_transform(const std::string& in_path, const std::string& reverse, std::size_t pad,
                  bool hints, bool no_pad_answer, const std::string& out_path) {
  const auto mode = transforms::reverse_mode_from_name(reverse);
  if (!mode) throw ConfigError("unknown --reverse mode '" + reverse + "'");
  transforms::FormatVariant variant;
  variant.reverse_mode = *mode;
  if (pad > 0) variant.pad_width = pad;
  variant.index_hints = hints;

  const auto data = load_dataset(in_path);
  OutputTarget out(out_path);
  transforms::write_transformed_corpus(out.stream(), data, variant, !no_pad_answer);
  return 0;
}

int run_rfcot(const std::string& in_path, std::size_t budget, const std::string& out_path) {
  OutputTarget out(out_path);
  if (budget > 0) {
    out.stream() << rfcot::max_supported_length(oracle::TaskId::Add, Rep::Integer, budget) << '\n';
    return 0;
  }
  if (in_path.empty()) throw ConfigError("rfcot needs --in or --budget");
  const auto data = load_dataset(in_path);
  rfcot::write_sft_pairs(out.stream(), data);
  return 0;
}

int run_eval(const std::string& dataset, const std::string& run_dir, const std::string& config,
             const std::string& stub, std::size_t shots, std::uint64_t seed,
             std::size_t stop_after) {
  if (config.empty() == stub.empty())
    throw ConfigError("eval needs exactly one of --config or --stub");

  RunConfig cfg;
  cfg.dataset_path = dataset;
  cfg.run_dir = run_dir;
  cfg.shots = shots;
  cfg.seed = seed;
  cfg.stop_after = stop_after;

  std::unique_ptr<Endpoint> endpoint;
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw ConfigError("cannot open endpoint profile " + config);
    cfg.profile = load_endpoint_profile(in);
    endpoint = std::make_unique<HttpEndpoint>(cfg.profile);
  } else if (stub == "oracle") {
    endpoint = std::make_unique<OracleEndpoint>(load_dataset(dataset), cfg.pack);
  } else if (stub == "empty") {
    endpoint = std::make_unique<EmptyEndpoint>();
  } else {
    throw ConfigError("unknown --stub '" + stub + "' (oracle or empty)");
  }

  const RunManifest manifest = run_evaluation(cfg, *endpoint);
  std::cout << "rows " << manifest.rows.size() << "/" << manifest.dataset_instances
            << (manifest.complete ? " complete" : " partial") << " in " << run_dir << '\n';
  return 0;
}

int run_score(const std::string& run_dir, bool write_files) {
  const ScoreReport report = score_run(run_dir);
  if (write_files) write_reports(run_dir, report);
  metrics::write_report_tsv(std::cout, report.rows);
  return 0;
}

}  // namespace

int cli(const std::vector<std::string>& args) {
  CLI::App app{"numeral benchmark toolkit: datasets, prompts, scoring, and evaluation runs"};
  app.name("nupa");
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "build benchmark datasets");
  std::string gen_tasks = "all";
  std::string gen_lengths;
  std::size_t gen_per_length = 1000;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  generate->add_option("--tasks", gen_tasks, "comma-separated task tokens, or 'all'");
  generate->add_option("--lengths", gen_lengths, "length range as N or LO..HI");
  generate->add_option("--per-length", gen_per_length, "instances per length");
  generate->add_option("--seed", gen_seed, "generation seed");
  generate->add_option("--out", gen_out, "output file (default stdout)");

  auto* transform = app.add_subcommand("transform", "emit format or tokenizer corpora");
  std::string tr_in;
  std::string tr_reverse = "none";
  std::size_t tr_pad = 0;
  bool tr_hints = false;
  bool tr_no_pad_answer = false;
  std::string tr_tokenize;
  std::uint64_t tr_tok_seed = 0;
  std::string tr_out;
  transform->add_option("--in", tr_in, "dataset to transform")->required();
  transform->add_option("--reverse", tr_reverse, "none|total|each_part|int_only|dec_only");
  transform->add_option("--pad", tr_pad, "zero-pad parts to this width");
  transform->add_flag("--hints", tr_hints, "prefix digits with position labels");
  transform->add_flag("--no-pad-answer", tr_no_pad_answer, "pad operands only");
  transform->add_option("--tokenize", tr_tokenize, "emit digit chunks instead: aligned:K or random:K");
  transform->add_option("--tokenize-seed", tr_tok_seed, "seed for random chunking");
  transform->add_option("--out", tr_out, "output file (default stdout)");

  auto* rfcot_cmd = app.add_subcommand("rfcot", "emit rule-following finetuning pairs");
  std::string rf_in;
  std::size_t rf_budget = 0;
  std::string rf_out;
  rfcot_cmd->add_option("--in", rf_in, "integer addition dataset");
  rfcot_cmd->add_option("--budget", rf_budget, "print the longest length fitting this token budget");
  rfcot_cmd->add_option("--out", rf_out, "output file (default stdout)");

  auto* eval = app.add_subcommand("eval", "run an evaluation against an endpoint");
  std::string ev_dataset;
  std::string ev_run;
  std::string ev_config;
  std::string ev_stub;
  std::size_t ev_shots = 0;
  std::uint64_t ev_seed = 0;
  std::size_t ev_stop_after = 0;
  eval->add_option("--dataset", ev_dataset, "dataset to evaluate")->required();
  eval->add_option("--run", ev_run, "run directory for results and manifest")->required();
  eval->add_option("--config", ev_config, "endpoint profile JSON");
  eval->add_option("--stub", ev_stub, "built-in endpoint: oracle or empty");
  eval->add_option("--shots", ev_shots, "few-shot exemplars per prompt");
  eval->add_option("--seed", ev_seed, "seed for exemplar choice");
  eval->add_option("--stop-after", ev_stop_after, "stop after this many new rows");

  auto* score = app.add_subcommand("score", "score a run and write its reports");
  std::string sc_run;
  score->add_option("--run", sc_run, "run directory")->required();

  auto* report = app.add_subcommand("report", "print a run's report table");
  std::string rp_run;
  report->add_option("--run", rp_run, "run directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (generate->parsed())
      return run_generate(gen_tasks, gen_lengths, gen_per_length, gen_seed, gen_out);
    if (transform->parsed()) {
      if (!tr_tokenize.empty()) {
        const auto colon = tr_tokenize.find(':');
        if (colon == std::string::npos)
          throw ConfigError("bad --tokenize value '" + tr_tokenize + "' (use MODE:K)");
        std::size_t k = 0;
        try {
          k = std::stoul(tr_tokenize.substr(colon + 1));
        } catch (const std::exception&) {
          throw ConfigError("bad --tokenize chunk size in '" + tr_tokenize + "'");
        }
        return run_transform_tokens(tr_in, tr_tokenize.substr(0, colon), k, tr_tok_seed, tr_out);
      }
      return run_transform(tr_in, tr_reverse, tr_pad, tr_hints, tr_no_pad_answer, tr_out);
    }
    if (rfcot_cmd->parsed()) return run_rfcot(rf_in, rf_budget, rf_out);
    if (eval->parsed())
      return run_eval(ev_dataset, ev_run, ev_config, ev_stub, ev_shots, ev_seed, ev_stop_after);
    if (score->parsed()) return run_score(sc_run, true);
    if (report->parsed()) return run_score(rp_run, false);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli(args);
}

}  // namespace nupa::harness
