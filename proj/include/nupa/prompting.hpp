#pragma once

// Prompt assembly and answer extraction. A question is a format prompt
// (keyed by the expected answer representation) followed by a task prompt
// with the operands substituted; every question ends with "=". Extraction
// takes the first regex match for the answer representation from the raw
// model output, with the empty string standing in for "no answer".

#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "nupa/generator.hpp"
#include "nupa/numeral.hpp"
#include "nupa/oracle.hpp"

namespace nupa::prompting {

// Editable template pack. Task prompts use <a> and <b> placeholders; system
// messages use <regex> for the expected answer pattern. Profiles name
// alternative system messages; the "none" profile suppresses the system
// message entirely.
struct TemplatePack {
  std::map<Rep, std::string> format_prompts;              // by answer representation
  std::map<oracle::TaskId, std::string> task_prompts;     // by task
  std::map<std::string, std::string> system_messages;     // by profile

  static TemplatePack defaults();
  bool operator==(const TemplatePack&) const = default;
};

// JSON template pack file, editable by hand.
TemplatePack load_template_pack(std::istream& in);
void save_template_pack(std::ostream& out, const TemplatePack& pack);

struct PromptBundle {
  std::optional<std::string> system_text;
  std::string user_text;  // always ends with "="
  Rep answer_rep = Rep::Integer;
  std::string extraction_pattern;
  bool operator==(const PromptBundle&) const = default;
};

// Answer pattern per representation: "\d+", "\d+\.\d+", "\d+/\d+",
// "\d+\.\d+e\d+".
std::string_view extraction_pattern(Rep rep);

// The task prompt with operands substituted ("Add two numbers: 744 + 543 =").
// Fraction operands of true division are parenthesized so the two slashes
// cannot be confused.
std::string question_text(const generator::TaskInstance& inst, const TemplatePack& pack);
std::string question_text(const generator::TaskInstance& inst);

// Full prompt: format prompt, optional few-shot block, question. The
// few_shot block must be empty or newline-terminated.
PromptBundle render_question(const generator::TaskInstance& inst, const TemplatePack& pack,
                             std::string_view system_profile = "default",
                             std::string_view few_shot = "");
PromptBundle render_question(const generator::TaskInstance& inst);

// Solved exemplars ("question = answer"), one at each of k distinct lengths
// drawn evenly across the lengths available in the pool, ascending, never
// including the probe instance itself. Throws InsufficientPoolError when the
// pool cannot supply k distinct lengths.
std::string few_shot_prefix(const generator::TaskInstance& inst, std::size_t k,
                            const std::vector<generator::TaskInstance>& pool,
                            std::mt19937_64& rng, const TemplatePack& pack);
std::string few_shot_prefix(const generator::TaskInstance& inst, std::size_t k,
                            const std::vector<generator::TaskInstance>& pool,
                            std::mt19937_64& rng);

// First match of the bundle's pattern in the raw output; the empty string
// when nothing matches (the empty answer scores zero later).
std::string extract_answer(const PromptBundle& bundle, const std::string& raw);

}  // namespace nupa::prompting
