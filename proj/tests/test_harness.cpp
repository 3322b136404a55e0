#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>
#include <json.hpp>

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nupa/errors.hpp"
#include "nupa/generator.hpp"
#include "nupa/harness.hpp"
#include "nupa/metrics.hpp"
#include "nupa/prompting.hpp"

using namespace nupa;

namespace {

// A throwaway directory under the system temp root, removed on scope exit.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::atomic<unsigned> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("nupa-harness-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  REQUIRE(out.good());
  out << text;
}

// Builds a small dataset for one cell and persists it where a run can load it.
std::vector<generator::TaskInstance> make_dataset(const std::string& token, std::size_t lo,
                                                  std::size_t hi, std::size_t per_length,
                                                  std::uint64_t seed, const std::string& path) {
  auto spec = generator::spec_from_token(token);
  REQUIRE(spec.has_value());
  spec->min_length = lo;
  spec->max_length = hi;
  spec->per_length = per_length;
  const auto data = generator::build_dataset(*spec, seed);
  std::ofstream out(path);
  REQUIRE(out.good());
  generator::write_dataset(out, data);
  return data;
}

harness::RunConfig config_for(const std::string& dataset_path, const std::string& run_dir) {
  harness::RunConfig cfg;
  cfg.dataset_path = dataset_path;
  cfg.run_dir = run_dir;
  return cfg;
}

// Fails the first `failures` attempts at each distinct question, then defers.
class FlakyEndpoint final : public harness::Endpoint {
 public:
  FlakyEndpoint(harness::Endpoint& inner, int failures) : inner_(inner), failures_(failures) {}

  std::string complete(const std::optional<std::string>& system_text,
                       const std::string& user_text) override {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (attempts_[user_text]++ < failures_) throw EndpointError("synthetic outage");
    }
    return inner_.complete(system_text, user_text);
  }

 private:
  harness::Endpoint& inner_;
  int failures_;
  std::mutex mu_;
  std::map<std::string, int> attempts_;
};

class DownEndpoint final : public harness::Endpoint {
 public:
  std::string complete(const std::optional<std::string>&, const std::string&) override {
    throw EndpointError("synthetic outage");
  }
};

// Answers correctly after a question-dependent delay, to shake up the order
// in which parallel requests finish.
class SleepyOracle final : public harness::Endpoint {
 public:
  explicit SleepyOracle(const std::vector<generator::TaskInstance>& data) : inner_(data) {}

  std::string complete(const std::optional<std::string>& system_text,
                       const std::string& user_text) override {
    const auto ms = std::hash<std::string>{}(user_text) % 17;
    std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    return inner_.complete(system_text, user_text);
  }

 private:
  harness::OracleEndpoint inner_;
};

// Runs the command line with std::cout and std::cerr captured.
int run_cli(const std::vector<std::string>& args, std::string* out = nullptr,
            std::string* err = nullptr) {
  std::ostringstream out_buf;
  std::ostringstream err_buf;
  std::streambuf* old_out = std::cout.rdbuf(out_buf.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(err_buf.rdbuf());
  const int rc = harness::cli(args);
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  if (out) *out = out_buf.str();
  if (err) *err = err_buf.str();
  return rc;
}

}  // namespace

TEST_CASE("endpoint profiles round trip and reject junk") {
  harness::EndpointProfile p;
  p.base_url = "http://10.0.0.7:8000";
  p.api_key_env = "KEY_ENV";
  p.model = "local-chat";
  p.temperature = 0.1;
  p.top_p = 0.5;
  p.timeout_seconds = 12.5;
  p.parallelism = 8;
  p.system_profile = "none";

  std::stringstream buf;
  harness::save_endpoint_profile(buf, p);
  CHECK(harness::load_endpoint_profile(buf) == p);

  std::istringstream partial(R"({"base_url": "http://x", "model": "m"})");
  const auto q = harness::load_endpoint_profile(partial);
  CHECK(q.base_url == "http://x");
  CHECK(q.temperature == doctest::Approx(0.6));
  CHECK(q.top_p == doctest::Approx(0.9));
  CHECK(q.timeout_seconds == doctest::Approx(30.0));
  CHECK(q.parallelism == 1);
  CHECK(q.system_profile == "default");

  std::istringstream unknown(R"({"api_key": "sk-123"})");
  CHECK_THROWS_AS(harness::load_endpoint_profile(unknown), ConfigError);
  std::istringstream malformed("{");
  CHECK_THROWS_AS(harness::load_endpoint_profile(malformed), ConfigError);
  std::istringstream wrong_type(R"({"parallelism": "many"})");
  CHECK_THROWS_AS(harness::load_endpoint_profile(wrong_type), ConfigError);
  std::istringstream zero_parallel(R"({"parallelism": 0})");
  CHECK_THROWS_AS(harness::load_endpoint_profile(zero_parallel), ConfigError);
  std::istringstream dead_timeout(R"({"timeout_seconds": 0})");
  CHECK_THROWS_AS(harness::load_endpoint_profile(dead_timeout), ConfigError);

  harness::EndpointProfile bad;
  bad.parallelism = 0;
  CHECK_THROWS_AS(harness::validate(bad), ConfigError);
  bad = harness::EndpointProfile{};
  bad.timeout_seconds = -1;
  CHECK_THROWS_AS(harness::validate(bad), ConfigError);
  CHECK_NOTHROW(harness::validate(harness::EndpointProfile{}));
}

TEST_CASE("the oracle stub answers by question line") {
  TempDir dir;
  const auto data = make_dataset("add-int", 1, 2, 3, 11, dir.file("data.jsonl"));
  harness::OracleEndpoint endpoint(data);

  const auto bundle = prompting::render_question(data[0]);
  CHECK(endpoint.complete(bundle.system_text, bundle.user_text) == data[0].ground_truth);

  // Few-shot blocks prepend lines; the probe question stays last.
  const std::string with_prefix =
      "Add two numbers: 7 + 7 = 14\n" + prompting::question_text(data[0]);
  CHECK(endpoint.complete(std::nullopt, with_prefix) == data[0].ground_truth);

  CHECK_THROWS_AS(endpoint.complete(std::nullopt, "Add two numbers: 0 + 0 ="), EndpointError);

  harness::EmptyEndpoint empty;
  CHECK(empty.complete(std::nullopt, bundle.user_text).empty());
}

TEST_CASE("an oracle run scores perfectly and persists in order") {
  TempDir dir;
  const auto data = make_dataset("add-int", 1, 4, 3, 11, dir.file("data.jsonl"));
  REQUIRE(data.size() == 12);
  const auto cfg = config_for(dir.file("data.jsonl"), dir.file("run"));
  harness::OracleEndpoint endpoint(data);

  const auto manifest = harness::run_evaluation(cfg, endpoint);
  CHECK(manifest.complete);
  CHECK(manifest.dataset_instances == 12);
  REQUIRE(manifest.rows.size() == 12);
  for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
    const auto& row = manifest.rows[i];
    CHECK(row.index == i);
    CHECK(row.operands == data[i].operands);
    CHECK(row.extracted == data[i].ground_truth);
    CHECK(row.score.exact == 1);
    CHECK(row.score.digit_match == doctest::Approx(1.0));
    CHECK(row.score.dlength == doctest::Approx(0.0));
  }

  // The persisted rows mirror the in-memory ones.
  {
    std::ifstream in(dir.file("run/results.jsonl"));
    bool dropped = true;
    const auto rows = harness::read_results(in, &dropped);
    CHECK_FALSE(dropped);
    REQUIRE(rows.size() == 12);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].index == i);
      CHECK(rows[i].ground_truth == data[i].ground_truth);
      CHECK(rows[i].raw_output == manifest.rows[i].raw_output);
    }
  }

  const auto mj = nlohmann::json::parse(slurp(dir.file("run/manifest.json")));
  CHECK(mj.at("schema_version") == 1);
  CHECK(mj.at("dataset") == cfg.dataset_path);
  CHECK(mj.at("dataset_instances") == 12);
  CHECK(mj.at("endpoint").at("parallelism") == 1);
  CHECK(mj.at("endpoint").at("system_profile") == "default");
  CHECK(mj.at("shots") == 0);
  CHECK(mj.at("transform").is_null());
  CHECK(mj.at("rows") == 12);
  CHECK(mj.at("complete") == true);
  CHECK(mj.at("results") == "results.jsonl");
  const std::regex iso(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z)");
  CHECK(std::regex_match(mj.at("started").get<std::string>(), iso));
  CHECK(std::regex_match(mj.at("finished").get<std::string>(), iso));

  const auto report = harness::score_run(cfg.run_dir);
  CHECK(report.records.size() == 12);
  REQUIRE_FALSE(report.rows.empty());
  for (const auto& row : report.rows) {
    CHECK(row.exact == doctest::Approx(1.0));
    CHECK(row.dlength == doctest::Approx(0.0));
  }
  harness::write_reports(cfg.run_dir, report);
  const auto tsv = slurp(dir.file("run/report.tsv"));
  CHECK(tsv.rfind("task\trep\tvariant\tbucket\tn\texact\tdigit_match\tdlength\twld\tppd\n", 0) ==
        0);
  const auto rj = nlohmann::json::parse(slurp(dir.file("run/report.json")));
  CHECK(rj.at("schema_version") == 1);
}

TEST_CASE("empty answers score like the no-answer sentinel") {
  TempDir dir;
  const auto data = make_dataset("truediv-int", 1, 3, 2, 3, dir.file("data.jsonl"));
  REQUIRE_FALSE(data.empty());
  REQUIRE(generator::instance_answer_rep(data[0]) == Rep::Fraction);
  const auto cfg = config_for(dir.file("data.jsonl"), dir.file("run"));
  harness::EmptyEndpoint endpoint;

  const auto manifest = harness::run_evaluation(cfg, endpoint);
  CHECK(manifest.complete);
  REQUIRE(manifest.rows.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& row = manifest.rows[i];
    CHECK(row.raw_output.empty());
    CHECK(row.extracted.empty());
    // The answer is a quotient, so scoring runs against the fraction shape,
    // while the row keeps the cell's own representation.
    CHECK(row.rep == Rep::Integer);
    CHECK(row.score ==
          metrics::score(data[i].ground_truth, generator::instance_answer_rep(data[i]), ""));
    CHECK(row.score.exact == 0);
  }
}

TEST_CASE("transient endpoint failures are retried") {
  TempDir dir;
  const auto data = make_dataset("add-int", 1, 1, 3, 2, dir.file("data.jsonl"));
  const auto cfg = config_for(dir.file("data.jsonl"), dir.file("run"));
  harness::OracleEndpoint oracle(data);
  FlakyEndpoint flaky(oracle, 2);  // two failures leave one good attempt in budget

  const auto manifest = harness::run_evaluation(cfg, flaky);
  CHECK(manifest.complete);
  for (const auto& row : manifest.rows) CHECK(row.score.exact == 1);
}

TEST_CASE("a dead endpoint yields empty answers, not an aborted run") {
  TempDir dir;
  const auto data = make_dataset("add-int", 1, 1, 2, 4, dir.file("data.jsonl"));
  const auto cfg = config_for(dir.file("data.jsonl"), dir.file("run"));
  DownEndpoint down;

  const auto manifest = harness::run_evaluation(cfg, down);
  CHECK(manifest.complete);
  REQUIRE(manifest.rows.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(manifest.rows[i].raw_output.empty());
    CHECK(manifest.rows[i].score ==
          metrics::score(data[i].ground_truth, generator::instance_answer_rep(data[i]), ""));
  }
}

TEST_CASE("interrupted runs resume to byte-identical results") {
  TempDir dir;
  const auto data = make_dataset("add-int", 1, 4, 3, 11, dir.file("data.jsonl"));
  harness::OracleEndpoint endpoint(data);

  auto reference = config_for(dir.file("data.jsonl"), dir.file("ref"));
  reference.shots = 2;
  reference.seed = 5;
  const auto whole = harness::run_evaluation(reference, endpoint);
  CHECK(whole.complete);

  auto cfg = reference;
  cfg.run_dir = dir.file("resumed");
  cfg.stop_after = 5;
  const auto first = harness::run_evaluation(cfg, endpoint);
  CHECK_FALSE(first.complete);
  CHECK(first.rows.size() == 5);
  const auto second = harness::run_evaluation(cfg, endpoint);
  CHECK_FALSE(second.complete);
  CHECK(second.rows.size() == 10);
  cfg.stop_after = 0;
  const auto done = harness::run_evaluation(cfg, endpoint);
  CHECK(done.complete);
  CHECK(done.rows.size() == 12);

  CHECK(slurp(dir.file("resumed/results.jsonl")) == slurp(dir.file("ref/results.jsonl")));
  auto a = nlohmann::json::parse(slurp(dir.file("ref/manifest.json")));
  auto b = nlohmann::json::parse(slurp(dir.file("resumed/manifest.json")));
  for (auto* j : {&a, &b}) {
    j->erase("started");
    j->erase("finished");
  }
  CHECK(a == b);

  // Running a finished directory again changes nothing.
  const auto before = slurp(dir.file("resumed/results.jsonl"));
  const auto again = harness::run_evaluation(cfg, endpoint);
  CHECK(again.complete);
  CHECK(slurp(dir.file("resumed/results.jsonl")) == before);
}

TEST_CASE("resume refuses results from a different dataset") {
  TempDir dir;
  const auto data = make_dataset("add-int", 2, 2, 4, 1, dir.file("a.jsonl"));
  make_dataset("add-int", 3, 3, 4, 1, dir.file("b.jsonl"));
  auto cfg = config_for(dir.file("a.jsonl"), dir.file("run"));
  harness::OracleEndpoint endpoint(data);
  harness::run_evaluation(cfg, endpoint);

  cfg.dataset_path = dir.file("b.jsonl");
  CHECK_THROWS_AS(harness::run_evaluation(cfg, endpoint), ConfigError);

  // A results file whose indices do not start at zero is just as foreign.
  cfg.dataset_path = dir.file("a.jsonl");
  const auto intact = slurp(dir.file("run/results.jsonl"));
  write_file(dir.file("run/results.jsonl"), intact.substr(intact.find('\n') + 1));
  CHECK_THROWS_AS(harness::run_evaluation(cfg, endpoint), ConfigError);
}

TEST_CASE("a torn final line is dropped and repaired on resume") {
  TempDir dir;
  const auto data = make_dataset("add-int", 1, 2, 3, 8, dir.file("data.jsonl"));
  const auto cfg = config_for(dir.file("data.jsonl"), dir.file("run"));
  harness::OracleEndpoint endpoint(data);
  harness::run_evaluation(cfg, endpoint);
  const auto intact = slurp(dir.file("run/results.jsonl"));

  // Keep the first rows whole and cut the last one off mid-object, the way a
  // killed writer would.
  const auto last_line = intact.rfind("\n{") + 1;
  write_file(dir.file("run/results.jsonl"), intact.substr(0, last_line + 20));

  const auto manifest = harness::run_evaluation(cfg, endpoint);
  CHECK(manifest.complete);
  CHECK(slurp(dir.file("run/results.jsonl")) == intact);
}

TEST_CASE("result reading tolerates a torn tail but not torn middles") {
  TempDir dir;
  const auto data = make_dataset("add-int", 1, 1, 3, 6, dir.file("data.jsonl"));
  const auto cfg = config_for(dir.file("data.jsonl"), dir.file("run"));
  harness::OracleEndpoint endpoint(data);
  harness::run_evaluation(cfg, endpoint);

  std::vector<std::string> lines;
  {
    std::istringstream in(slurp(dir.file("run/results.jsonl")));
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) lines.push_back(line);
  }
  REQUIRE(lines.size() == 3);

  {
    std::istringstream in(lines[0] + "\n" + lines[1] + "\n" + lines[2].substr(0, 25));
    bool dropped = false;
    const auto rows = harness::read_results(in, &dropped);
    CHECK(rows.size() == 2);
    CHECK(dropped);
  }
  {
    std::istringstream in(lines[0] + "\n\n" + lines[1] + "\n");
    bool dropped = true;
    const auto rows = harness::read_results(in, &dropped);
    CHECK(rows.size() == 2);
    CHECK_FALSE(dropped);
  }
  {
    std::istringstream in(lines[0].substr(0, 25) + "\n" + lines[1] + "\n");
    CHECK_THROWS_AS(harness::read_results(in), ConfigError);
  }
}

TEST_CASE("parallel dispatch preserves persisted order") {
  TempDir dir;
  const auto data = make_dataset("add-int", 1, 4, 4, 21, dir.file("data.jsonl"));
  REQUIRE(data.size() == 16);
  SleepyOracle endpoint(data);

  auto sequential = config_for(dir.file("data.jsonl"), dir.file("seq"));
  harness::run_evaluation(sequential, endpoint);

  auto parallel = sequential;
  parallel.run_dir = dir.file("par");
  parallel.profile.parallelism = 4;
  const auto manifest = harness::run_evaluation(parallel, endpoint);
  CHECK(manifest.complete);
  for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
    CHECK(manifest.rows[i].index == i);
    CHECK(manifest.rows[i].score.exact == 1);
  }
  CHECK(slurp(dir.file("par/results.jsonl")) == slurp(dir.file("seq/results.jsonl")));
}

TEST_CASE("the chat client round-trips against a local server") {
  httplib::Server server;
  std::mutex mu;
  std::string seen_auth;
  nlohmann::json seen_body;
  std::atomic<int> mode{0};
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    {
      std::lock_guard<std::mutex> lock(mu);
      seen_auth = req.get_header_value("Authorization");
      seen_body = nlohmann::json::parse(req.body);
    }
    if (mode == 1) {
      res.status = 500;
      res.set_content("overloaded", "text/plain");
      return;
    }
    if (mode == 2) {
      res.set_content("this is not json", "text/plain");
      return;
    }
    nlohmann::json reply;
    reply["choices"][0]["message"]["content"] = "42";
    res.set_content(reply.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread serving([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  harness::EndpointProfile profile;
  profile.base_url = "http://127.0.0.1:" + std::to_string(port);
  profile.api_key_env = "NUPA_TEST_API_KEY";
  profile.model = "test-model";
  profile.timeout_seconds = 5;
  setenv("NUPA_TEST_API_KEY", "sekrit", 1);
  harness::HttpEndpoint endpoint(profile);

  CHECK(endpoint.complete(std::string("be terse"), "Add two numbers: 1 + 2 =") == "42");
  {
    std::lock_guard<std::mutex> lock(mu);
    CHECK(seen_auth == "Bearer sekrit");
    CHECK(seen_body.at("model") == "test-model");
    CHECK(seen_body.at("temperature").get<double>() == doctest::Approx(0.6));
    REQUIRE(seen_body.at("messages").size() == 2);
    CHECK(seen_body.at("messages")[0].at("role") == "system");
    CHECK(seen_body.at("messages")[0].at("content") == "be terse");
    CHECK(seen_body.at("messages")[1].at("role") == "user");
    CHECK(seen_body.at("messages")[1].at("content") == "Add two numbers: 1 + 2 =");
  }

  CHECK(endpoint.complete(std::nullopt, "Q") == "42");
  {
    std::lock_guard<std::mutex> lock(mu);
    CHECK(seen_body.at("messages").size() == 1);
  }

  // Without a credential in the environment no header goes out.
  auto bare = profile;
  bare.api_key_env = "NUPA_TEST_MISSING_KEY";
  unsetenv("NUPA_TEST_MISSING_KEY");
  harness::HttpEndpoint anonymous(bare);
  CHECK(anonymous.complete(std::nullopt, "Q") == "42");
  {
    std::lock_guard<std::mutex> lock(mu);
    CHECK(seen_auth.empty());
  }

  mode = 1;
  CHECK_THROWS_AS(endpoint.complete(std::nullopt, "Q"), EndpointError);
  mode = 2;
  CHECK_THROWS_AS(endpoint.complete(std::nullopt, "Q"), EndpointError);

  server.stop();
  serving.join();

  auto unreachable = profile;
  unreachable.base_url = "http://127.0.0.1:9";  // discard port; nothing listens
  unreachable.timeout_seconds = 2;
  harness::HttpEndpoint refused(unreachable);
  CHECK_THROWS_AS(refused.complete(std::nullopt, "Q"), EndpointError);
}

TEST_CASE("the command line generates deterministic datasets") {
  TempDir dir;
  std::string out;
  std::string err;
  const std::vector<std::string> args{"generate",     "--tasks", "add-int", "--lengths",
                                      "1..3",         "--per-length", "2",  "--seed",
                                      "7",            "--out",   dir.file("a.jsonl")};
  CHECK(run_cli(args, &out, &err) == 0);
  auto again = args;
  again.back() = dir.file("b.jsonl");
  CHECK(run_cli(again) == 0);
  const auto a = slurp(dir.file("a.jsonl"));
  CHECK(a == slurp(dir.file("b.jsonl")));
  CHECK(std::count(a.begin(), a.end(), '\n') == 6);

  CHECK(run_cli({"generate", "--tasks", "sprint-int"}, &out, &err) == 2);
  CHECK(err.find("unknown task token") != std::string::npos);
  CHECK(run_cli({"generate", "--tasks", "add-int", "--lengths", "x..y"}, &out, &err) == 2);
  CHECK(run_cli({"generate", "--bogus"}, &out, &err) != 0);
  CHECK(run_cli({}, &out, &err) != 0);
}

TEST_CASE("the command line pipeline runs end to end") {
  TempDir dir;
  std::string out;
  std::string err;
  REQUIRE(run_cli({"generate", "--tasks", "add-int", "--lengths", "1..2", "--per-length", "2",
                   "--seed", "3", "--out", dir.file("data.jsonl")}) == 0);

  CHECK(run_cli({"transform", "--in", dir.file("data.jsonl"), "--reverse", "total", "--pad", "4",
                 "--out", dir.file("rev.jsonl")}) == 0);
  {
    std::istringstream in(slurp(dir.file("rev.jsonl")));
    std::string line;
    REQUIRE(std::getline(in, line));
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("surface").at("reverse") == "total");
    CHECK(j.at("surface").at("pad") == 4);
  }
  CHECK(run_cli({"transform", "--in", dir.file("data.jsonl"), "--tokenize", "aligned:3", "--out",
                 dir.file("tok.jsonl")}) == 0);
  {
    std::istringstream in(slurp(dir.file("tok.jsonl")));
    std::string line;
    REQUIRE(std::getline(in, line));
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("surface").at("tokenizer") == "aligned");
    CHECK(j.at("surface").at("k") == 3);
  }
  CHECK(run_cli({"transform", "--in", dir.file("data.jsonl"), "--reverse", "sideways"}, &out,
                &err) == 2);
  CHECK(run_cli({"transform", "--in", dir.file("data.jsonl"), "--tokenize", "aligned"}, &out,
                &err) == 2);

  CHECK(run_cli({"rfcot", "--in", dir.file("data.jsonl"), "--out", dir.file("sft.jsonl")}) == 0);
  {
    std::istringstream in(slurp(dir.file("sft.jsonl")));
    std::string line;
    REQUIRE(std::getline(in, line));
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("prompt"));
    CHECK(j.contains("response"));
  }
  CHECK(run_cli({"rfcot", "--budget", "2000"}, &out, &err) == 0);
  CHECK(out == "33\n");
  CHECK(run_cli({"rfcot"}, &out, &err) == 2);

  CHECK(run_cli({"eval", "--dataset", dir.file("data.jsonl"), "--run", dir.file("run"), "--stub",
                 "oracle"},
                &out, &err) == 0);
  CHECK(out.rfind("rows 4/4 complete", 0) == 0);
  CHECK(run_cli({"eval", "--dataset", dir.file("data.jsonl"), "--run", dir.file("run2")}, &out,
                &err) == 2);
  CHECK(run_cli({"eval", "--dataset", dir.file("data.jsonl"), "--run", dir.file("run3"), "--stub",
                 "oracle", "--config", dir.file("nope.json")},
                &out, &err) == 2);
  CHECK(run_cli({"eval", "--dataset", dir.file("data.jsonl"), "--run", dir.file("run4"), "--stub",
                 "psychic"},
                &out, &err) == 2);

  CHECK(run_cli({"score", "--run", dir.file("run")}, &out, &err) == 0);
  CHECK(out.rfind("task\trep\tvariant", 0) == 0);
  CHECK(std::filesystem::exists(dir.file("run/report.tsv")));
  CHECK(std::filesystem::exists(dir.file("run/report.json")));
  CHECK(run_cli({"report", "--run", dir.file("run")}, &out, &err) == 0);
  CHECK(out.rfind("task\trep\tvariant", 0) == 0);
  CHECK(run_cli({"score", "--run", dir.file("missing")}, &out, &err) == 2);
}
