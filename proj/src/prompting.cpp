#include "nupa/prompting.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <regex>
#include <vector>

#include <json.hpp>

#include "nupa/errors.hpp"

namespace nupa::prompting {

using oracle::TaskId;

namespace {

void replace_all(std::string& text, std::string_view what, std::string_view with) {
  std::size_t at = 0;
  while ((at = text.find(what, at)) != std::string::npos) {
    text.replace(at, what.size(), with);
    at += with.size();
  }
}

const std::string& lookup_task_prompt(const TemplatePack& pack, TaskId task) {
  auto it = pack.task_prompts.find(task);
  if (it == pack.task_prompts.end())
    throw ConfigError("template pack has no task prompt for " +
                      std::string(oracle::task_name(task)));
  return it->second;
}

bool same_question(const generator::TaskInstance& a, const generator::TaskInstance& b) {
  return a.task == b.task && a.rep == b.rep && a.variant == b.variant &&
         a.operands == b.operands && a.extra_arg == b.extra_arg;
}

const TemplatePack& default_pack() {
  static const TemplatePack pack = TemplatePack::defaults();
  return pack;
}

}  // namespace

TemplatePack TemplatePack::defaults() {
  TemplatePack pack;
  pack.format_prompts = {
      {Rep::Integer,
       "Directly return the answer as an integer without any comma separator, like 123 ."},
      {Rep::Float,
       "Directly return the answer as a float without any comma separator, like 10.4 ."},
      {Rep::Fraction,
       "Directly return the answer as an **irreducible** fraction without any comma separator, "
       "like 7/13 ."},
      {Rep::Scientific,
       "Directly return the answer as a scientific notation without any comma separator, like "
       "1.23e4 . The float part should be in the range [1, 10)."},
  };
  pack.task_prompts = {
      {TaskId::Add, "Add two numbers: <a> + <b> ="},
      {TaskId::Sub, "Subtract two numbers: <a> - <b> ="},
      {TaskId::Multiply, "Multiply two numbers: <a> * <b> ="},
      {TaskId::Truediv, "Divide two numbers and return the result as a fraction. <a> / <b> ="},
      {TaskId::Floordiv, "Divide two numbers and return the result as an integer. <a> // <b> ="},
      {TaskId::Mod, "Divide two numbers and return the remainder. <a> % <b> ="},
      {TaskId::Max, "Get the maximal number: <a> and <b> ="},
      {TaskId::Min, "Get the minimal number: <a> and <b> ="},
      {TaskId::DigitMax,
       "Compare two numbers digit by digit and return the larger digit at each position, "
       "treating any missing digits as 0. <a> and <b> ="},
      {TaskId::DigitMin,
       "Compare two numbers digit by digit and return the smaller digit at each position, "
       "treating any missing digits as 0. <a> and <b> ="},
      {TaskId::DigitAdd,
       "The task is to add two given numbers digit by digit and return the result modulo 10 "
       "(ignoring carry), treating any missing digits as 0. <a> digit add <b> ="},
      {TaskId::GetDigit,
       "Get the digit at the given position (from left to right, starting from 0). <a> at "
       "position <b> ="},
      {TaskId::Length, "The total number of digits of <a> ="},
      {TaskId::Count,
       "Count the number of the given digit in the given number: <a> count the occurrence time "
       "of digit <b> ="},
      {TaskId::ToFloat, "Convert the number to float: <a> ="},
      {TaskId::ToScientific, "Convert the number to scientific notation: <a> ="},
      {TaskId::SigFig,
       "Convert the number to scientific notation: <a> and keep significant figures as <b> ="},
  };
  pack.system_messages = {
      {"default",
       "You are a capable math assistant. Return your solution without any process in the "
       "format: The answer is [YOUR ANSWER]. The final answer must strictly match the format "
       "<regex>."},
  };
  return pack;
}

std::string_view extraction_pattern(Rep rep) {
  switch (rep) {
    case Rep::Integer: return "\\d+";
    case Rep::Float: return "\\d+\\.\\d+";
    case Rep::Fraction: return "\\d+/\\d+";
    case Rep::Scientific: return "\\d+\\.\\d+e\\d+";
  }
  throw DomainError("unknown representation");
}

std::string question_text(const generator::TaskInstance& inst, const TemplatePack& pack) {
  std::string text = lookup_task_prompt(pack, inst.task);

  std::string a = inst.operands.at(0);
  std::string b;
  if (inst.operands.size() > 1)
    b = inst.operands.at(1);
  else if (inst.extra_arg)
    b = std::to_string(*inst.extra_arg);

  // "(3/8) / (2/5)" instead of "3/8 / 2/5".
  if (inst.task == TaskId::Truediv && inst.rep == Rep::Fraction) {
    a = "(" + a + ")";
    b = "(" + b + ")";
  }

  replace_all(text, "<a>", a);
  replace_all(text, "<b>", b);
  return text;
}

std::string question_text(const generator::TaskInstance& inst) {
  return question_text(inst, default_pack());
}

PromptBundle render_question(const generator::TaskInstance& inst, const TemplatePack& pack,
                             std::string_view system_profile, std::string_view few_shot) {
  if (!few_shot.empty() && few_shot.back() != '\n')
    throw DomainError("a few-shot block must end with a newline");

  PromptBundle bundle;
  bundle.answer_rep = oracle::answer_rep(inst.task, inst.rep);
  bundle.extraction_pattern = std::string(extraction_pattern(bundle.answer_rep));

  auto fmt = pack.format_prompts.find(bundle.answer_rep);
  if (fmt == pack.format_prompts.end())
    throw ConfigError("template pack has no format prompt for " +
                      std::string(rep_name(bundle.answer_rep)));
  bundle.user_text = fmt->second;
  bundle.user_text += '\n';
  bundle.user_text += few_shot;
  bundle.user_text += question_text(inst, pack);

  if (system_profile != "none") {
    auto sys = pack.system_messages.find(std::string(system_profile));
    if (sys == pack.system_messages.end())
      throw ConfigError("template pack has no system message profile \"" +
                        std::string(system_profile) + "\"");
    std::string message = sys->second;
    replace_all(message, "<regex>", bundle.extraction_pattern);
    bundle.system_text = std::move(message);
  }
  return bundle;
}

PromptBundle render_question(const generator::TaskInstance& inst) {
  return render_question(inst, default_pack());
}

std::string few_shot_prefix(const generator::TaskInstance& inst, std::size_t k,
                            const std::vector<generator::TaskInstance>& pool,
                            std::mt19937_64& rng, const TemplatePack& pack) {
  if (k == 0) return "";

  // Candidates: same cell, not the probe itself, grouped by length.
  std::map<std::size_t, std::vector<const generator::TaskInstance*>> by_length;
  for (const auto& ex : pool) {
    if (ex.task != inst.task || ex.rep != inst.rep || ex.variant != inst.variant) continue;
    if (same_question(ex, inst)) continue;
    by_length[ex.length].push_back(&ex);
  }
  if (by_length.size() < k)
    throw InsufficientPoolError("few-shot pool offers " + std::to_string(by_length.size()) +
                                " lengths, need " + std::to_string(k));

  std::vector<std::size_t> lengths;
  for (const auto& entry : by_length) lengths.push_back(entry.first);

  // k lengths spread evenly across the available ones, ascending.
  std::vector<std::size_t> chosen;
  if (k == 1) {
    chosen.push_back(lengths[(lengths.size() - 1) / 2]);
  } else {
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t pos =
          (2 * j * (lengths.size() - 1) + (k - 1)) / (2 * (k - 1));  // rounded j*(m-1)/(k-1)
      chosen.push_back(lengths[pos]);
    }
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    // Rounding can merge neighbors when lengths are scarce; fall back to the
    // first k lengths in that case.
    if (chosen.size() < k) {
      chosen.assign(lengths.begin(), lengths.begin() + k);
    }
  }

  std::string prefix;
  for (std::size_t L : chosen) {
    const auto& group = by_length[L];
    const auto* ex = group[generator::bounded(rng, group.size())];
    prefix += question_text(*ex, pack);
    prefix += ' ';
    prefix += ex->ground_truth;
    prefix += '\n';
  }
  return prefix;
}

std::string few_shot_prefix(const generator::TaskInstance& inst, std::size_t k,
                            const std::vector<generator::TaskInstance>& pool,
                            std::mt19937_64& rng) {
  return few_shot_prefix(inst, k, pool, rng, default_pack());
}

std::string extract_answer(const PromptBundle& bundle, const std::string& raw) {
  const std::regex pattern(bundle.extraction_pattern);
  std::smatch match;
  if (!std::regex_search(raw, match, pattern)) return "";
  return match.str();
}

TemplatePack load_template_pack(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("template pack: ") + e.what());
  }
  try {
    TemplatePack pack;
    for (const auto& [key, value] : j.at("format_prompts").items()) {
      auto rep = rep_from_name(key);
      if (!rep) throw ConfigError("template pack names unknown representation \"" + key + "\"");
      pack.format_prompts[*rep] = value.get<std::string>();
    }
    for (const auto& [key, value] : j.at("task_prompts").items()) {
      auto task = oracle::task_from_name(key);
      if (!task) throw ConfigError("template pack names unknown task \"" + key + "\"");
      pack.task_prompts[*task] = value.get<std::string>();
    }
    for (const auto& [key, value] : j.at("system_messages").items())
      pack.system_messages[key] = value.get<std::string>();
    return pack;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("template pack: ") + e.what());
  }
}

void save_template_pack(std::ostream& out, const TemplatePack& pack) {
  nlohmann::ordered_json j;
  auto& formats = j["format_prompts"] = nlohmann::ordered_json::object();
  for (const auto& [rep, text] : pack.format_prompts) formats[std::string(rep_name(rep))] = text;
  auto& tasks = j["task_prompts"] = nlohmann::ordered_json::object();
  for (const auto& [task, text] : pack.task_prompts)
    tasks[std::string(oracle::task_name(task))] = text;
  auto& systems = j["system_messages"] = nlohmann::ordered_json::object();
  for (const auto& [profile, text] : pack.system_messages) systems[profile] = text;
  out << j.dump(2) << '\n';
}

}  // namespace nupa::prompting
