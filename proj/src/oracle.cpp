#include "nupa/oracle.hpp"

#include <algorithm>
#include <array>

#include "nupa/digits.hpp"

namespace nupa::oracle {

namespace {

// value = digits * 10^-scale, digits canonical.
struct Scaled {
  std::string digits;
  std::size_t scale;
};

Scaled float_scaled(const Number& f) {
  const std::string& i = f.part(PartRole::IntPart);
  const std::string& d = f.part(PartRole::DecPart);
  return {digits::strip_leading_zeros(i + d), d.size()};
}

Number float_from_scaled(const std::string& ds, std::size_t scale) {
  if (ds.size() <= scale) {
    return canonicalize_float("0", std::string(scale - ds.size(), '0') + ds);
  }
  return canonicalize_float(ds.substr(0, ds.size() - scale), ds.substr(ds.size() - scale));
}

// value = digits * 10^exp10; exp10 may be negative.
struct PointValue {
  std::string digits;
  std::int64_t exp10;
};

PointValue sci_point(const Number& s) {
  const std::string& si = s.part(PartRole::SigInt);
  const std::string& sd = s.part(PartRole::SigDec);
  std::int64_t exp = std::stoll(s.part(PartRole::Exponent));
  return {digits::strip_leading_zeros(si + sd), exp - static_cast<std::int64_t>(sd.size())};
}

void require_same_kind(const Number& a, const Number& b) {
  if (a.kind() != b.kind()) throw DomainError("operands must share a representation");
}

[[noreturn]] void unsupported(TaskId task, Rep rep) {
  throw UnsupportedTaskError(std::string(task_name(task)) + " is not defined for " +
                             std::string(rep_name(rep)) + " operands");
}

char combine_digits(char x, char y, DigitCombine mode) {
  switch (mode) {
    case DigitCombine::Max: return std::max(x, y);
    case DigitCombine::Min: return std::min(x, y);
    case DigitCombine::AddNoCarry: return static_cast<char>('0' + ((x - '0') + (y - '0')) % 10);
  }
  return '0';
}

std::string combine_right(const std::string& a, const std::string& b, DigitCombine mode) {
  std::size_t n = std::max(a.size(), b.size());
  std::string pa = std::string(n - a.size(), '0') + a;
  std::string pb = std::string(n - b.size(), '0') + b;
  std::string out(n, '0');
  for (std::size_t i = 0; i < n; ++i) out[i] = combine_digits(pa[i], pb[i], mode);
  return out;
}

std::string combine_left(const std::string& a, const std::string& b, DigitCombine mode) {
  std::size_t n = std::max(a.size(), b.size());
  std::string pa = a + std::string(n - a.size(), '0');
  std::string pb = b + std::string(n - b.size(), '0');
  std::string out(n, '0');
  for (std::size_t i = 0; i < n; ++i) out[i] = combine_digits(pa[i], pb[i], mode);
  return out;
}

}  // namespace

std::string_view task_name(TaskId task) {
  switch (task) {
    case TaskId::Add: return "add";
    case TaskId::Sub: return "sub";
    case TaskId::Multiply: return "multiply";
    case TaskId::Truediv: return "truediv";
    case TaskId::Floordiv: return "floordiv";
    case TaskId::Mod: return "mod";
    case TaskId::Max: return "max";
    case TaskId::Min: return "min";
    case TaskId::DigitMax: return "digit_max";
    case TaskId::DigitMin: return "digit_min";
    case TaskId::DigitAdd: return "digit_add";
    case TaskId::GetDigit: return "get_digit";
    case TaskId::Length: return "length";
    case TaskId::Count: return "count";
    case TaskId::ToFloat: return "to_float";
    case TaskId::ToScientific: return "to_scientific";
    case TaskId::SigFig: return "sig_fig";
  }
  return "";
}

std::optional<TaskId> task_from_name(std::string_view name) {
  for (TaskId t : kAllTasks) {
    if (task_name(t) == name) return t;
  }
  return std::nullopt;
}

SecondOperand second_operand(TaskId task) {
  switch (task) {
    case TaskId::GetDigit:
    case TaskId::Count:
    case TaskId::SigFig:
      return SecondOperand::SmallInt;
    case TaskId::Length:
    case TaskId::ToFloat:
    case TaskId::ToScientific:
      return SecondOperand::None;
    default:
      return SecondOperand::SameRep;
  }
}

bool supported(TaskId task, Rep rep) {
  switch (task) {
    case TaskId::Add:
    case TaskId::Sub:
    case TaskId::Multiply:
    case TaskId::Max:
    case TaskId::Min:
      return true;
    case TaskId::Truediv:
      return rep == Rep::Integer || rep == Rep::Fraction;
    case TaskId::Floordiv:
    case TaskId::Mod:
    case TaskId::Count:
      return rep == Rep::Integer;
    case TaskId::DigitMax:
    case TaskId::DigitMin:
    case TaskId::DigitAdd:
    case TaskId::GetDigit:
    case TaskId::Length:
    case TaskId::ToScientific:
    case TaskId::SigFig:
      return rep == Rep::Integer || rep == Rep::Float;
    case TaskId::ToFloat:
      return rep == Rep::Fraction || rep == Rep::Scientific;
  }
  return false;
}

Rep answer_rep(TaskId task, Rep operand_rep) {
  switch (task) {
    case TaskId::Truediv:
      return Rep::Fraction;
    case TaskId::Floordiv:
    case TaskId::Mod:
    case TaskId::GetDigit:
    case TaskId::Length:
    case TaskId::Count:
      return Rep::Integer;
    case TaskId::ToFloat:
      return Rep::Float;
    case TaskId::ToScientific:
    case TaskId::SigFig:
      return Rep::Scientific;
    default:
      return operand_rep;
  }
}

int compare_value(const Number& a, const Number& b) {
  require_same_kind(a, b);
  switch (a.kind()) {
    case Rep::Integer:
      return digits::cmp(a.part(PartRole::IntPart), b.part(PartRole::IntPart));
    case Rep::Float: {
      int c = digits::cmp(a.part(PartRole::IntPart), b.part(PartRole::IntPart));
      if (c != 0) return c;
      std::string da = a.part(PartRole::DecPart);
      std::string db = b.part(PartRole::DecPart);
      std::size_t n = std::max(da.size(), db.size());
      da.append(n - da.size(), '0');
      db.append(n - db.size(), '0');
      return da < db ? -1 : (da > db ? 1 : 0);
    }
    case Rep::Fraction: {
      std::string lhs = digits::mul(a.part(PartRole::Numerator), b.part(PartRole::Denominator));
      std::string rhs = digits::mul(b.part(PartRole::Numerator), a.part(PartRole::Denominator));
      return digits::cmp(lhs, rhs);
    }
    case Rep::Scientific: {
      int c = digits::cmp(a.part(PartRole::Exponent), b.part(PartRole::Exponent));
      if (c != 0) return c;
      std::string sa = a.part(PartRole::SigInt) + a.part(PartRole::SigDec);
      std::string sb = b.part(PartRole::SigInt) + b.part(PartRole::SigDec);
      std::size_t n = std::max(sa.size(), sb.size());
      sa.append(n - sa.size(), '0');
      sb.append(n - sb.size(), '0');
      return sa < sb ? -1 : (sa > sb ? 1 : 0);
    }
  }
  return 0;
}

Number add(const Number& a, const Number& b) {
  require_same_kind(a, b);
  switch (a.kind()) {
    case Rep::Integer:
      return Number::integer(digits::add(a.part(PartRole::IntPart), b.part(PartRole::IntPart)));
    case Rep::Float: {
      Scaled sa = float_scaled(a);
      Scaled sb = float_scaled(b);
      std::size_t scale = std::max(sa.scale, sb.scale);
      std::string da = digits::shift10(sa.digits, scale - sa.scale);
      std::string db = digits::shift10(sb.digits, scale - sb.scale);
      return float_from_scaled(digits::add(da, db), scale);
    }
    case Rep::Fraction: {
      std::string num =
          digits::add(digits::mul(a.part(PartRole::Numerator), b.part(PartRole::Denominator)),
                      digits::mul(b.part(PartRole::Numerator), a.part(PartRole::Denominator)));
      std::string den = digits::mul(a.part(PartRole::Denominator), b.part(PartRole::Denominator));
      return canonicalize_fraction(num, den);
    }
    case Rep::Scientific: {
      PointValue pa = sci_point(a);
      PointValue pb = sci_point(b);
      std::int64_t base = std::min(pa.exp10, pb.exp10);
      std::string da = digits::shift10(pa.digits, static_cast<std::size_t>(pa.exp10 - base));
      std::string db = digits::shift10(pb.digits, static_cast<std::size_t>(pb.exp10 - base));
      return canonicalize_scientific(digits::add(da, db), "", base);
    }
  }
  throw DomainError("add: unknown representation");
}

Number sub(const Number& a, const Number& b) {
  require_same_kind(a, b);
  if (compare_value(a, b) < 0) throw DomainError("sub requires a >= b");
  switch (a.kind()) {
    case Rep::Integer:
      return Number::integer(digits::sub(a.part(PartRole::IntPart), b.part(PartRole::IntPart)));
    case Rep::Float: {
      Scaled sa = float_scaled(a);
      Scaled sb = float_scaled(b);
      std::size_t scale = std::max(sa.scale, sb.scale);
      std::string da = digits::shift10(sa.digits, scale - sa.scale);
      std::string db = digits::shift10(sb.digits, scale - sb.scale);
      return float_from_scaled(digits::sub(da, db), scale);
    }
    case Rep::Fraction: {
      std::string lhs = digits::mul(a.part(PartRole::Numerator), b.part(PartRole::Denominator));
      std::string rhs = digits::mul(b.part(PartRole::Numerator), a.part(PartRole::Denominator));
      std::string den = digits::mul(a.part(PartRole::Denominator), b.part(PartRole::Denominator));
      return canonicalize_fraction(digits::sub(lhs, rhs), den);
    }
    case Rep::Scientific: {
      PointValue pa = sci_point(a);
      PointValue pb = sci_point(b);
      std::int64_t base = std::min(pa.exp10, pb.exp10);
      std::string da = digits::shift10(pa.digits, static_cast<std::size_t>(pa.exp10 - base));
      std::string db = digits::shift10(pb.digits, static_cast<std::size_t>(pb.exp10 - base));
      return canonicalize_scientific(digits::sub(da, db), "", base);
    }
  }
  throw DomainError("sub: unknown representation");
}

Number multiply(const Number& a, const Number& b) {
  require_same_kind(a, b);
  switch (a.kind()) {
    case Rep::Integer:
      return Number::integer(digits::mul(a.part(PartRole::IntPart), b.part(PartRole::IntPart)));
    case Rep::Float: {
      Scaled sa = float_scaled(a);
      Scaled sb = float_scaled(b);
      return float_from_scaled(digits::mul(sa.digits, sb.digits), sa.scale + sb.scale);
    }
    case Rep::Fraction:
      return canonicalize_fraction(
          digits::mul(a.part(PartRole::Numerator), b.part(PartRole::Numerator)),
          digits::mul(a.part(PartRole::Denominator), b.part(PartRole::Denominator)));
    case Rep::Scientific: {
      PointValue pa = sci_point(a);
      PointValue pb = sci_point(b);
      return canonicalize_scientific(digits::mul(pa.digits, pb.digits), "", pa.exp10 + pb.exp10);
    }
  }
  throw DomainError("multiply: unknown representation");
}

Number truediv(const Number& a, const Number& b) {
  require_same_kind(a, b);
  switch (a.kind()) {
    case Rep::Integer:
      if (digits::is_zero(b.part(PartRole::IntPart))) throw DomainError("division by zero");
      return canonicalize_fraction(a.part(PartRole::IntPart), b.part(PartRole::IntPart));
    case Rep::Fraction:
      return canonicalize_fraction(
          digits::mul(a.part(PartRole::Numerator), b.part(PartRole::Denominator)),
          digits::mul(a.part(PartRole::Denominator), b.part(PartRole::Numerator)));
    default:
      unsupported(TaskId::Truediv, a.kind());
  }
}

Number floordiv(const Number& a, const Number& b) {
  require_same_kind(a, b);
  if (a.kind() != Rep::Integer) unsupported(TaskId::Floordiv, a.kind());
  if (digits::is_zero(b.part(PartRole::IntPart))) throw DomainError("division by zero");
  return Number::integer(
      digits::divmod(a.part(PartRole::IntPart), b.part(PartRole::IntPart)).first);
}

Number modulo(const Number& a, const Number& b) {
  require_same_kind(a, b);
  if (a.kind() != Rep::Integer) unsupported(TaskId::Mod, a.kind());
  if (digits::is_zero(b.part(PartRole::IntPart))) throw DomainError("division by zero");
  return Number::integer(
      digits::divmod(a.part(PartRole::IntPart), b.part(PartRole::IntPart)).second);
}

Number extremum(const Number& a, const Number& b, Extremum which) {
  int c = compare_value(a, b);
  // Ties return the first operand.
  if (which == Extremum::Max) return c >= 0 ? a : b;
  return c <= 0 ? a : b;
}

Number digit_combine(const Number& a, const Number& b, DigitCombine mode) {
  require_same_kind(a, b);
  switch (a.kind()) {
    case Rep::Integer:
      return canonicalize_integer(
          combine_right(a.part(PartRole::IntPart), b.part(PartRole::IntPart), mode));
    case Rep::Float:
      return canonicalize_float(
          combine_right(a.part(PartRole::IntPart), b.part(PartRole::IntPart), mode),
          combine_left(a.part(PartRole::DecPart), b.part(PartRole::DecPart), mode));
    default: {
      TaskId task = mode == DigitCombine::Max
                        ? TaskId::DigitMax
                        : (mode == DigitCombine::Min ? TaskId::DigitMin : TaskId::DigitAdd);
      unsupported(task, a.kind());
    }
  }
}

int get_digit(const Number& a, int position) {
  if (a.kind() != Rep::Integer && a.kind() != Rep::Float) unsupported(TaskId::GetDigit, a.kind());
  std::string ds = value_digits(a);
  if (position < 0 || static_cast<std::size_t>(position) >= ds.size()) {
    throw DomainError("digit position out of range");
  }
  return ds[static_cast<std::size_t>(position)] - '0';
}

int total_length(const Number& a) {
  if (a.kind() != Rep::Integer && a.kind() != Rep::Float) unsupported(TaskId::Length, a.kind());
  return static_cast<int>(value_digits(a).size());
}

int count_digit(const Number& a, int digit) {
  if (a.kind() != Rep::Integer) unsupported(TaskId::Count, a.kind());
  if (digit < 0 || digit > 9) throw DomainError("digit must be 0-9");
  std::string ds = value_digits(a);
  return static_cast<int>(std::count(ds.begin(), ds.end(), static_cast<char>('0' + digit)));
}

Number to_float(const Number& a) {
  switch (a.kind()) {
    case Rep::Fraction: {
      std::string den = a.part(PartRole::Denominator);
      std::uint32_t twos = 0;
      std::uint32_t fives = 0;
      while (true) {
        auto [q, r] = digits::divmod(den, "2");
        if (r != "0") break;
        den = q;
        ++twos;
      }
      while (true) {
        auto [q, r] = digits::divmod(den, "5");
        if (r != "0") break;
        den = q;
        ++fives;
      }
      if (den != "1") {
        throw DomainError("fraction has no finite decimal expansion: denominator " +
                          a.part(PartRole::Denominator));
      }
      std::uint32_t scale = std::max(twos, fives);
      std::string factor =
          digits::mul(digits::pow_u32(2, scale - twos), digits::pow_u32(5, scale - fives));
      return float_from_scaled(digits::mul(a.part(PartRole::Numerator), factor), scale);
    }
    case Rep::Scientific: {
      PointValue p = sci_point(a);
      if (p.exp10 >= 0) {
        return float_from_scaled(digits::shift10(p.digits, static_cast<std::size_t>(p.exp10)), 0);
      }
      return float_from_scaled(p.digits, static_cast<std::size_t>(-p.exp10));
    }
    default:
      unsupported(TaskId::ToFloat, a.kind());
  }
}

Number to_scientific(const Number& a) {
  switch (a.kind()) {
    case Rep::Integer:
      return canonicalize_scientific(a.part(PartRole::IntPart), "", 0);
    case Rep::Float:
      return canonicalize_scientific(a.part(PartRole::IntPart), a.part(PartRole::DecPart), 0);
    default:
      unsupported(TaskId::ToScientific, a.kind());
  }
}

Number round_sig_figs(const Number& a, int k) {
  if (a.kind() != Rep::Integer && a.kind() != Rep::Float) unsupported(TaskId::SigFig, a.kind());
  if (k < 1) throw DomainError("significant figure count must be positive");
  std::size_t scale =
      a.kind() == Rep::Float ? a.part(PartRole::DecPart).size() : static_cast<std::size_t>(0);
  std::string ds = digits::strip_leading_zeros(value_digits(a));
  if (digits::is_zero(ds)) throw DomainError("scientific form cannot represent zero");
  // Exponent of the leading digit.
  std::int64_t exp = static_cast<std::int64_t>(ds.size()) - 1 - static_cast<std::int64_t>(scale);
  std::string kept;
  if (ds.size() <= static_cast<std::size_t>(k)) {
    kept = ds + std::string(static_cast<std::size_t>(k) - ds.size(), '0');
  } else {
    kept = ds.substr(0, static_cast<std::size_t>(k));
    if (ds[static_cast<std::size_t>(k)] >= '5') kept = digits::add(kept, "1");
  }
  // A carry that lengthens the kept digits raises the exponent by one, which
  // the significand renormalization picks up on its own.
  return canonicalize_scientific(kept, "", exp - (k - 1));
}

std::string evaluate(TaskId task, Rep rep, const Number& a, const std::optional<Number>& b,
                     std::optional<int> arg) {
  if (!supported(task, rep)) unsupported(task, rep);
  if (a.kind() != rep) throw DomainError("first operand representation mismatch");
  SecondOperand kind2 = second_operand(task);
  if (kind2 == SecondOperand::SameRep && (!b || b->kind() != rep)) {
    throw DomainError(std::string(task_name(task)) + " needs a second operand of the same kind");
  }
  if (kind2 == SecondOperand::SmallInt && !arg) {
    throw DomainError(std::string(task_name(task)) + " needs an integer argument");
  }
  switch (task) {
    case TaskId::Add: return format(add(a, *b));
    case TaskId::Sub: return format(sub(a, *b));
    case TaskId::Multiply: return format(multiply(a, *b));
    case TaskId::Truediv: return format(truediv(a, *b));
    case TaskId::Floordiv: return format(floordiv(a, *b));
    case TaskId::Mod: return format(modulo(a, *b));
    case TaskId::Max: return format(extremum(a, *b, Extremum::Max));
    case TaskId::Min: return format(extremum(a, *b, Extremum::Min));
    case TaskId::DigitMax: return format(digit_combine(a, *b, DigitCombine::Max));
    case TaskId::DigitMin: return format(digit_combine(a, *b, DigitCombine::Min));
    case TaskId::DigitAdd: return format(digit_combine(a, *b, DigitCombine::AddNoCarry));
    case TaskId::GetDigit: return std::to_string(get_digit(a, *arg));
    case TaskId::Length: return std::to_string(total_length(a));
    case TaskId::Count: return std::to_string(count_digit(a, *arg));
    case TaskId::ToFloat: return format(to_float(a));
    case TaskId::ToScientific: return format(to_scientific(a));
    case TaskId::SigFig: return format(round_sig_figs(a, *arg));
  }
  throw UnsupportedTaskError("unknown task");
}

}  // namespace nupa::oracle
