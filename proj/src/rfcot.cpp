#include "nupa/rfcot.hpp"

#include <json.hpp>

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "nupa/errors.hpp"

namespace nupa::rfcot {
namespace {

constexpr std::size_t kMaxProbeLength = 8192;

std::string quote(const std::string& s) { return "\"" + s + "\""; }

std::string int_add_rule_text() {
  return "def add(num1, num2):\n"
         "    result = ''\n"
         "    carry = 0\n"
         "    # Main Loop\n"
         "    while num1 or num2:\n"
         "        digit1 = int(num1[-3:]) if num1 else 0\n"
         "        digit2 = int(num2[-3:]) if num2 else 0\n"
         "        total = digit1 + digit2 + carry\n"
         "        result = str(total % 1000).zfill(3) + result\n"
         "        carry = total//1000\n"
         "        num1 = num1[:-3] if num1 else num1\n"
         "        num2 = num2[:-3] if num2 else num2\n"
         "    if carry:\n"
         "        result = str(carry) + result\n"
         "    result = result.lstrip('0') or '0'\n"
         "    return result";
}

std::string int_add_question(const std::string& a, const std::string& b) {
  return "Q: Return the answer as an integer without any delimiter, like 123. Add two numbers: " +
         a + " + " + b;
}

std::string zfill3(int value) {
  std::string s = std::to_string(value);
  while (s.size() < 3) s.insert(s.begin(), '0');
  return s;
}

// The trace is a sequence of blocks separated by blank lines, alternating
// code-line echoes with the variable states they produced.
struct TraceBuilder {
  std::vector<std::string> blocks;
  void block(std::initializer_list<std::string> lines) {
    std::string text;
    for (const auto& line : lines) {
      if (!text.empty()) text.push_back('\n');
      text += line;
    }
    blocks.push_back(std::move(text));
  }
  std::string str() const {
    std::string text;
    for (const auto& b : blocks) {
      if (!text.empty()) text += "\n\n";
      text += b;
    }
    return text;
  }
};

// Executes the chunked-addition rule while echoing it. Notation follows the
// worked example: the first loop check echoes "while num1 or num2:" with its
// colon and later checks drop it, the first entry states no variables while
// every later check restates num1/num2, chunk trimming is echoed without
// its guard, and the rule's single-quoted literals turn into double quotes
// inside the trace.
std::string int_add_trace(const std::string& a, const std::string& b, std::string& final_answer) {
  TraceBuilder t;
  std::string num1 = a;
  std::string num2 = b;
  std::string result;
  int carry = 0;

  t.block({"num1 = " + quote(num1), "num2 = " + quote(num2), "result = " + quote(result),
           "carry = " + std::to_string(carry)});

  bool first_check = true;
  while (true) {
    t.block({first_check ? "while num1 or num2:" : "while num1 or num2"});
    const bool enter = !num1.empty() || !num2.empty();
    if (first_check) {
      t.block({"check the stop criterion", enter ? "enter the loop" : "end the loop"});
    } else {
      t.block({"check the stop criterion", "num1 = " + quote(num1) + " and num2 = " + quote(num2),
               enter ? "enter the loop" : "end the loop"});
    }
    first_check = false;
    if (!enter) break;

    const std::string chunk1 = num1.size() > 3 ? num1.substr(num1.size() - 3) : num1;
    const std::string chunk2 = num2.size() > 3 ? num2.substr(num2.size() - 3) : num2;
    const int digit1 = num1.empty() ? 0 : std::stoi(chunk1);
    const int digit2 = num2.empty() ? 0 : std::stoi(chunk2);
    t.block({"digit1 = int(num1[-3:]) if num1 else 0", "digit2 = int(num2[-3:]) if num2 else 0"});
    t.block({"num1 = " + quote(num1), "num2 = " + quote(num2),
             "digit1 = " + std::to_string(digit1), "digit2 = " + std::to_string(digit2)});

    const int total = digit1 + digit2 + carry;
    t.block({"total = digit1 + digit2 + carry"});
    t.block({"carry = " + std::to_string(carry),
             "total = " + std::to_string(digit1) + " + " + std::to_string(digit2) + " + " +
                 std::to_string(carry) + " = " + std::to_string(total)});

    const int chunk_value = total % 1000;
    const std::string chunk = zfill3(chunk_value);
    const std::string old_result = result;
    result = chunk + result;
    const int old_carry = carry;
    carry = total / 1000;
    t.block({"result = str(total % 1000).zfill(3) + result", "carry = total//1000"});
    // The carry state substitutes the carry variable itself, as the worked
    // example does ("carry = 0//1000 = 0"), not the total it divides.
    t.block({"total % 1000 = " + std::to_string(total) + "%1000 = " + std::to_string(chunk_value),
             "result = " + quote(chunk) + " + " + quote(old_result) + " = " + quote(result),
             "carry = " + std::to_string(old_carry) + "//1000 = " + std::to_string(carry)});

    num1 = num1.size() > 3 ? num1.substr(0, num1.size() - 3) : "";
    num2 = num2.size() > 3 ? num2.substr(0, num2.size() - 3) : "";
    t.block({"num1 = num1[:-3]", "num2 = num2[:-3]"});
    t.block({"num1 = " + quote(num1), "num2 = " + quote(num2)});
  }

  t.block({"if carry:", "    result = str(carry) + result"});
  if (carry) {
    const std::string old_result = result;
    result = std::to_string(carry) + result;
    t.block({"carry = " + std::to_string(carry),
             "result = " + quote(std::to_string(carry)) + " + " + quote(old_result) + " = " +
                 quote(result)});
  } else {
    t.block({"carry = 0", "pass"});
  }

  const std::size_t keep = result.find_first_not_of('0');
  result = keep == std::string::npos ? "0" : result.substr(keep);
  t.block({"result = result.lstrip(\"0\") or \"0\""});
  t.block({"result = " + quote(result)});

  t.block({"return result"});
  t.block({"return " + quote(result), "So the answer is " + result + "."});

  final_answer = result;
  return t.str();
}

void require_rule(oracle::TaskId task, Rep rep) {
  if (!rule_available(task, rep))
    throw UnsupportedTaskError("no rule registered for " + std::string(oracle::task_name(task)) +
                               " over " + std::string(rep_name(rep)));
}

std::size_t count_tokens(const TokenCounter& counter, std::string_view text) {
  return counter ? counter(text) : estimate_tokens(text);
}

}  // namespace

std::size_t estimate_tokens(std::string_view text) { return (text.size() + 3) / 4; }

bool rule_available(oracle::TaskId task, Rep rep) {
  return task == oracle::TaskId::Add && rep == Rep::Integer;
}

RuleProgram build_rule_prompt(oracle::TaskId task, Rep rep) {
  require_rule(task, rep);
  RuleProgram program;
  program.task = task;
  program.rep = rep;
  program.rule_text = int_add_rule_text();
  return program;
}

RuleTrace emit_trace(oracle::TaskId task, Rep rep, const Number& a, const Number& b,
                     const TokenCounter& counter) {
  require_rule(task, rep);
  if (a.kind() != rep || b.kind() != rep)
    throw DomainError("operands do not match the rule's representation");
  const std::string lhs = format(a);
  const std::string rhs = format(b);

  RuleTrace out;
  out.prompt = "Follow the given rule to solve the question.\nRule:\n" + int_add_rule_text() +
               "\n" + int_add_question(lhs, rhs);
  out.trace = int_add_trace(lhs, rhs, out.final_answer);
  out.token_estimate = count_tokens(counter, out.prompt) + count_tokens(counter, out.trace);
  return out;
}

std::size_t max_supported_length(oracle::TaskId task, Rep rep, std::size_t budget,
                                 const TokenCounter& counter) {
  require_rule(task, rep);
  const auto fits = [&](std::size_t length) {
    const Number nines = parse(rep, std::string(length, '9'));
    return emit_trace(task, rep, nines, nines, counter).token_estimate <= budget;
  };
  if (budget == 0 || !fits(1)) return 0;
  std::size_t lo = 1;        // known to fit
  std::size_t hi = 2;        // candidate upper bound
  while (hi <= kMaxProbeLength && fits(hi)) {
    lo = hi;
    hi *= 2;
  }
  if (lo >= kMaxProbeLength) return kMaxProbeLength;
  hi = std::min(hi, kMaxProbeLength + 1);  // first length known (or assumed) not to fit
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (fits(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

SftPair sft_pair(const generator::TaskInstance& inst) {
  if (inst.operands.size() != 2)
    throw DomainError("rule traces need two operands");
  const Number a = parse(inst.rep, inst.operands[0]);
  const Number b = parse(inst.rep, inst.operands[1]);
  const RuleTrace trace = emit_trace(inst.task, inst.rep, a, b);
  return SftPair{trace.prompt, trace.trace};
}

void write_sft_pairs(std::ostream& out, const std::vector<generator::TaskInstance>& data) {
  for (const auto& inst : data) {
    const SftPair pair = sft_pair(inst);
    nlohmann::ordered_json line;
    line["prompt"] = pair.prompt;
    line["response"] = pair.response;
    out << line.dump() << '\n';
  }
}

}  // namespace nupa::rfcot
