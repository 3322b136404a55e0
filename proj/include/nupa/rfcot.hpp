#pragma once

// Rule-following chain-of-thought material: a code rule prompt, a
// deterministic step-by-step execution trace that ends in the final answer,
// token budgeting for context-window planning, and SFT pair emission.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nupa/generator.hpp"
#include "nupa/numeral.hpp"
#include "nupa/oracle.hpp"

namespace nupa::rfcot {

// Counting profile for budget checks. The default approximates one token
// per four characters; plug in a model-specific counter to reproduce the
// limits a real tokenizer would give (published context-window limits were
// measured with such a tokenizer, so they shift with the profile).
using TokenCounter = std::function<std::size_t(std::string_view)>;

// ceil(character count / 4); empty text counts zero.
std::size_t estimate_tokens(std::string_view text);

struct RuleProgram {
  oracle::TaskId task = oracle::TaskId::Add;
  Rep rep = Rep::Integer;
  std::string rule_text;  // the code block shown after "Rule:"
};

struct RuleTrace {
  std::string prompt;        // rule text plus the question
  std::string trace;         // interleaved code echoes and variable states
  std::string final_answer;  // canonical answer text
  std::size_t token_estimate = 0;  // counter(prompt) + counter(trace)
};

// The registry currently carries integer addition, which walks the operands
// in three-digit chunks from the least significant end. Other (task, rep)
// cells raise UnsupportedTaskError until a rule is registered for them.
bool rule_available(oracle::TaskId task, Rep rep);

RuleProgram build_rule_prompt(oracle::TaskId task, Rep rep);

// Replays the rule on concrete operands. The trace echoes each code line,
// then prints the variable states it produced, and closes with
// "So the answer is <answer>.".
RuleTrace emit_trace(oracle::TaskId task, Rep rep, const Number& a, const Number& b,
                     const TokenCounter& counter = {});

// Largest operand length whose prompt plus trace fits the budget, probed on
// the longest-trace instance of each length (both operands all nines) and
// located by binary search. Returns 0 when even length 1 is over budget;
// the search is capped at 8192 digits.
std::size_t max_supported_length(oracle::TaskId task, Rep rep, std::size_t budget,
                                 const TokenCounter& counter = {});

struct SftPair {
  std::string prompt;
  std::string response;
  bool operator==(const SftPair&) const = default;
};

// Finetuning pair for one dataset instance: the rule prompt with the
// instance's question, and the full trace as the target response.
SftPair sft_pair(const generator::TaskInstance& inst);

// One {"prompt", "response"} JSON object per line.
void write_sft_pairs(std::ostream& out, const std::vector<generator::TaskInstance>& data);

}  // namespace nupa::rfcot
