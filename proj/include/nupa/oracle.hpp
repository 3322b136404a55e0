#pragma once

// Exact ground-truth computation for every benchmark task. All arithmetic is
// performed over digit strings (see digits.hpp); no binary floating point is
// involved anywhere, so results are reproducible bit for bit.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "nupa/numeral.hpp"

namespace nupa::oracle {

enum class TaskId {
  Add,
  Sub,
  Multiply,
  Truediv,
  Floordiv,
  Mod,
  Max,
  Min,
  DigitMax,
  DigitMin,
  DigitAdd,
  GetDigit,
  Length,
  Count,
  ToFloat,
  ToScientific,
  SigFig,
};

inline constexpr TaskId kAllTasks[] = {
    TaskId::Add,      TaskId::Sub,      TaskId::Multiply, TaskId::Truediv,
    TaskId::Floordiv, TaskId::Mod,      TaskId::Max,      TaskId::Min,
    TaskId::DigitMax, TaskId::DigitMin, TaskId::DigitAdd, TaskId::GetDigit,
    TaskId::Length,   TaskId::Count,    TaskId::ToFloat,  TaskId::ToScientific,
    TaskId::SigFig,
};

std::string_view task_name(TaskId task);               // "add", "digit_max", ...
std::optional<TaskId> task_from_name(std::string_view name);

// What the task takes besides the first operand.
enum class SecondOperand { None, SameRep, SmallInt };
SecondOperand second_operand(TaskId task);

// Task/representation support table (41 valid combinations).
bool supported(TaskId task, Rep rep);

// Representation of the answer. Counting-style tasks answer with a small
// integer; conversions answer in the target representation; everything else
// answers in the operand representation.
Rep answer_rep(TaskId task, Rep operand_rep);

// Exact value comparison within one representation: -1, 0, +1.
int compare_value(const Number& a, const Number& b);

// Binary arithmetic. sub requires a >= b (types are unsigned); truediv and
// the division pair require a nonzero divisor. Scientific subtraction whose
// result would be zero or smaller than 1 has no representable answer and
// raises DomainError.
Number add(const Number& a, const Number& b);
Number sub(const Number& a, const Number& b);
Number multiply(const Number& a, const Number& b);
Number truediv(const Number& a, const Number& b);   // integer or fraction operands
Number floordiv(const Number& a, const Number& b);  // integers
Number modulo(const Number& a, const Number& b);    // integers

enum class Extremum { Max, Min };
Number extremum(const Number& a, const Number& b, Extremum which);

// Digit-wise combination with right-aligned integer-like parts and
// left-aligned decimal parts; missing digits read as 0. DigitAdd combines
// as (x + y) mod 10 with no carry. Results are canonicalized.
enum class DigitCombine { Max, Min, AddNoCarry };
Number digit_combine(const Number& a, const Number& b, DigitCombine mode);

// Digit selectors over the number's own digits in display order (integer and
// float operands). get_digit positions count from 0 at the most significant
// digit; out-of-range positions raise DomainError.
int get_digit(const Number& a, int position);
int total_length(const Number& a);
int count_digit(const Number& a, int digit);

// Conversions. to_float accepts fractions whose denominator factors into
// 2^a * 5^b (exact decimal expansion) and any scientific value. to_scientific
// and round_sig_figs answer in scientific form, which cannot represent
// values below 1 (DomainError); round_sig_figs rounds half away from zero to
// k significant figures.
Number to_float(const Number& a);
Number to_scientific(const Number& a);
Number round_sig_figs(const Number& a, int k);

// Uniform entry point used by the generator and harness: computes the
// answer text for a task instance. Two-operand tasks take b; argument tasks
// (get_digit, count, sig_fig) take arg. Raises UnsupportedTaskError for
// combinations outside the support table.
std::string evaluate(TaskId task, Rep rep, const Number& a, const std::optional<Number>& b,
                     std::optional<int> arg);

}  // namespace nupa::oracle
