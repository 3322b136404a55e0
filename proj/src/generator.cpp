#include "nupa/generator.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "nupa/digits.hpp"
#include "nupa/errors.hpp"

namespace nupa::generator {

using oracle::TaskId;

namespace {

constexpr Rep kAllReps[] = {Rep::Integer, Rep::Float, Rep::Fraction, Rep::Scientific};
constexpr Variant kAllVariants[] = {Variant::Standard, Variant::Easy, Variant::Hard};

// First operand comes out first or second with equal probability for these.
bool commutative(TaskId task) {
  switch (task) {
    case TaskId::Add:
    case TaskId::Multiply:
    case TaskId::Max:
    case TaskId::Min:
    case TaskId::DigitMax:
    case TaskId::DigitMin:
    case TaskId::DigitAdd:
      return true;
    default:
      return false;
  }
}

// These need a >= b for the result to exist.
bool ordered_pair(TaskId task) {
  return task == TaskId::Sub || task == TaskId::Floordiv || task == TaskId::Mod;
}

std::size_t min_operand_length(Rep rep) { return rep == Rep::Scientific ? 2 : 1; }

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

char random_digit(std::mt19937_64& rng, bool nonzero) {
  return nonzero ? char('1' + bounded(rng, 9)) : char('0' + bounded(rng, 10));
}

// Splits a target length between the attaining part (exactly L) and the other
// part (uniform on [1, L]). Returns {first_len, second_len}.
std::pair<std::size_t, std::size_t> split_two_part_lengths(std::size_t L, std::mt19937_64& rng) {
  if (L == 1) return {1, 1};
  std::size_t other = 1 + bounded(rng, L);
  if (bounded(rng, 2) == 0) return {L, other};
  return {other, L};
}

long long exponent_of(const Number& n) { return std::atoll(n.part(PartRole::Exponent).c_str()); }

// Peer for a hard comparison on integers and floats: identical part shapes,
// a shared leading digit prefix, and a forced difference right after it.
Number shared_prefix_peer(const Number& a, std::mt19937_64& rng) {
  const std::string ad = value_digits(a);
  const std::size_t n = ad.size();
  const bool is_float = a.kind() == Rep::Float;
  const std::size_t p = n >= 2 ? 1 + bounded(rng, n - 1) : 0;

  auto draw = [&](std::size_t pos, char avoid) {
    // Leading digits stay nonzero, and a float may not end in a trailing
    // decimal zero.
    const bool nonzero = pos == 0 || (is_float && pos == n - 1);
    char c;
    do {
      c = random_digit(rng, nonzero);
    } while (c == avoid);
    return c;
  };

  std::string bd = ad.substr(0, p);
  bd += draw(p, ad[p]);
  for (std::size_t i = p + 1; i < n; ++i) bd += draw(i, '\0');

  if (!is_float) return Number::integer(bd);
  const std::size_t int_len = a.part(PartRole::IntPart).size();
  return Number::floating(bd.substr(0, int_len), bd.substr(int_len));
}

// Peer for a hard comparison on scientific operands: same significand length;
// seven times out of ten the exponent matches and the significands differ,
// otherwise the exponents differ.
Number hard_scientific_peer(const Number& a, std::mt19937_64& rng) {
  const std::size_t sig_len = a.part(PartRole::SigInt).size() + a.part(PartRole::SigDec).size();
  const bool same_exponent = bounded(rng, 10) < 7;
  for (int tries = 0; tries < 10000; ++tries) {
    Number b = gen_operand(Rep::Scientific, sig_len, rng);
    if (same_exponent) {
      if (b.part(PartRole::SigInt) != a.part(PartRole::SigInt) ||
          b.part(PartRole::SigDec) != a.part(PartRole::SigDec)) {
        return Number::scientific(b.part(PartRole::SigInt), b.part(PartRole::SigDec),
                                  a.part(PartRole::Exponent));
      }
    } else if (b.part(PartRole::Exponent) != a.part(PartRole::Exponent)) {
      return b;
    }
  }
  throw GenerationError("could not build a distinct scientific peer");
}

bool fraction_below_one(const Number& n) {
  return digits::cmp(n.part(PartRole::Numerator), n.part(PartRole::Denominator)) < 0;
}

// Fraction whose denominator is 2^x * 5^y, so its decimal expansion
// terminates. One of the parts reaches exactly L digits.
Number gen_terminating_fraction(std::size_t L, std::mt19937_64& rng) {
  const std::uint64_t xmax = 10 * L / 3 + 1;  // 2^x up to about L digits
  const std::uint64_t ymax = 10 * L / 7 + 1;  // 5^y likewise
  for (int tries = 0; tries < 20000; ++tries) {
    const bool den_attains = bounded(rng, 2) == 1;
    const auto x = static_cast<std::uint32_t>(bounded(rng, xmax + 1));
    const auto y = static_cast<std::uint32_t>(bounded(rng, ymax + 1));
    const std::string den = digits::mul(digits::pow_u32(2, x), digits::pow_u32(5, y));
    if (den_attains ? den.size() != L : den.size() > L) continue;
    const std::size_t num_len = den_attains ? 1 + bounded(rng, L) : L;
    std::string num = gen_digit_string(num_len, true, rng);
    // A last digit of 1, 3, 7 or 9 keeps the numerator coprime with 2^x * 5^y.
    if (den != "1") num.back() = "1379"[bounded(rng, 4)];
    return Number::fraction(num, den);
  }
  throw GenerationError("no terminating fraction of length " + std::to_string(L) + " found");
}

// Length of the second operand before variant constraints are applied.
std::size_t shorter_length(const TaskSpec& spec, std::size_t L, std::mt19937_64& rng) {
  const std::size_t lmin = min_operand_length(spec.rep);
  if (spec.variant == Variant::Easy) {
    const std::size_t hi = std::max(lmin, std::min<std::size_t>(2, L));
    return lmin + bounded(rng, hi - lmin + 1);
  }
  if (spec.variant == Variant::Hard) {
    if (spec.task == TaskId::Multiply) {
      const std::size_t lo = std::max(lmin, L / 2 + 1);
      return lo + bounded(rng, L - lo + 1);
    }
    if (spec.rep != Rep::Fraction) return L;  // comparisons pit equal-length operands
  }
  const std::size_t lo = std::max(lmin, (L + 1) / 2);
  return lo + bounded(rng, L - lo + 1);
}

std::string dedup_key(const TaskInstance& inst) {
  std::string key;
  for (const auto& op : inst.operands) {
    key += op;
    key += '\x1f';
  }
  if (inst.extra_arg) key += std::to_string(*inst.extra_arg);
  return key;
}

std::optional<TaskInstance> make_instance(const TaskSpec& spec, RangeClass rc,
                                          const std::string& token, std::size_t L,
                                          std::size_t index, std::mt19937_64& rng) {
  // A draw can land outside the answer domain (a scientific difference
  // collapsing below one, say); redraws continue on the same stream.
  for (int attempt = 0; attempt < 200; ++attempt) {
    try {
      std::optional<Number> a;
      std::optional<Number> b;
      std::optional<int> arg;
      if (oracle::second_operand(spec.task) == oracle::SecondOperand::SameRep) {
        auto pair = gen_pair(spec, L, rng);
        a = std::move(pair.first);
        b = std::move(pair.second);
      } else {
        if (spec.task == TaskId::ToFloat && spec.rep == Rep::Fraction) {
          a = gen_terminating_fraction(L, rng);
        } else {
          a = gen_operand(spec.rep, L, rng);
        }
        switch (spec.task) {
          case TaskId::GetDigit:
            arg = static_cast<int>(bounded(rng, oracle::total_length(*a)));
            break;
          case TaskId::Count:
            arg = static_cast<int>(bounded(rng, 10));
            break;
          case TaskId::SigFig:
            arg = 1 + static_cast<int>(bounded(rng, value_digits(*a).size()));
            break;
          default:
            break;
        }
      }

      TaskInstance inst;
      inst.task = spec.task;
      inst.rep = spec.rep;
      inst.variant = spec.variant;
      inst.length = L;
      inst.bucket = std::string(bucket_of(rc, L));
      inst.operands.push_back(format(*a));
      if (b) inst.operands.push_back(format(*b));
      inst.extra_arg = arg;
      inst.ground_truth = oracle::evaluate(spec.task, spec.rep, *a, b, arg);
      inst.seed = SeedPath{token, L, index};
      return inst;
    } catch (const DomainError&) {
      continue;
    } catch (const GenerationError&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::Standard: return "standard";
    case Variant::Easy: return "easy";
    case Variant::Hard: return "hard";
  }
  throw DomainError("unknown variant");
}

std::optional<Variant> variant_from_name(std::string_view name) {
  for (Variant v : kAllVariants)
    if (name == variant_name(v)) return v;
  return std::nullopt;
}

RangeClass range_class(TaskId task, Rep rep) {
  if (rep == Rep::Fraction) return RangeClass::UpTo20;
  switch (task) {
    case TaskId::Add:
    case TaskId::Sub:
    case TaskId::Multiply:
    case TaskId::Truediv:
    case TaskId::Floordiv:
    case TaskId::Mod:
      return RangeClass::UpTo20;
    default:
      return RangeClass::UpTo100;
  }
}

std::size_t class_max_length(RangeClass c) { return c == RangeClass::UpTo20 ? 20 : 100; }

std::string_view bucket_of(RangeClass c, std::size_t length) {
  if (length == 0) throw DomainError("length must be positive");
  if (c == RangeClass::UpTo20) {
    if (length <= 4) return "S";
    if (length <= 8) return "M";
    if (length <= 14) return "L";
    if (length <= 20) return "XL";
  } else {
    if (length <= 10) return "S";
    if (length <= 20) return "M";
    if (length <= 60) return "L";
    if (length <= 100) return "XL";
  }
  throw DomainError("length " + std::to_string(length) + " exceeds the range of its class");
}

bool variant_allowed(TaskId task, Rep rep, Variant v) {
  if (!oracle::supported(task, rep)) return false;
  switch (v) {
    case Variant::Standard:
      // Multiplication ships only in its split forms.
      return task != TaskId::Multiply;
    case Variant::Easy:
      return task == TaskId::Multiply || (task == TaskId::Add && rep == Rep::Fraction) ||
             (task == TaskId::Mod && rep == Rep::Integer);
    case Variant::Hard:
      return task == TaskId::Multiply || task == TaskId::Max || task == TaskId::Min;
  }
  return false;
}

std::string task_token(TaskId task, Rep rep, Variant v) {
  std::string token(oracle::task_name(task));
  if (v != Variant::Standard) {
    token += '-';
    token += variant_name(v);
  }
  token += '-';
  token += rep_token(rep);
  return token;
}

std::string task_token(const TaskSpec& spec) { return task_token(spec.task, spec.rep, spec.variant); }

std::optional<TaskSpec> spec_from_token(std::string_view token) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= token.size()) {
    std::size_t dash = token.find('-', start);
    if (dash == std::string_view::npos) dash = token.size();
    parts.push_back(token.substr(start, dash - start));
    start = dash + 1;
  }
  if (parts.size() < 2) return std::nullopt;

  auto rep = rep_from_name(parts.back());
  if (!rep) return std::nullopt;
  parts.pop_back();

  Variant variant = Variant::Standard;
  if (parts.size() >= 2) {
    auto v = variant_from_name(parts.back());
    if (!v) return std::nullopt;
    variant = *v;
    parts.pop_back();
  }
  if (parts.size() != 1) return std::nullopt;
  auto task = oracle::task_from_name(parts.front());
  if (!task) return std::nullopt;
  if (!variant_allowed(*task, *rep, variant)) return std::nullopt;

  TaskSpec spec;
  spec.task = *task;
  spec.rep = *rep;
  spec.variant = variant;
  spec.min_length = 2;
  spec.max_length = class_max_length(range_class(*task, *rep));
  return spec;
}

std::vector<TaskSpec> full_roster() {
  std::vector<TaskSpec> roster;
  for (TaskId task : oracle::kAllTasks)
    for (Rep rep : kAllReps)
      for (Variant v : kAllVariants)
        if (variant_allowed(task, rep, v)) {
          TaskSpec spec;
          spec.task = task;
          spec.rep = rep;
          spec.variant = v;
          spec.min_length = 2;
          spec.max_length = class_max_length(range_class(task, rep));
          roster.push_back(spec);
        }
  return roster;
}

Rep instance_answer_rep(const TaskInstance& inst) { return oracle::answer_rep(inst.task, inst.rep); }

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw DomainError("bounded draw needs a positive range");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t reject = (max % n + 1) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (reject == 0 || r <= max - reject) return r % n;
  }
}

std::mt19937_64 instance_stream(std::uint64_t seed, std::string_view token, std::size_t length,
                                std::size_t index) {
  std::string key = std::to_string(seed);
  key += '/';
  key += token;
  key += '/';
  key += std::to_string(length);
  key += '/';
  key += std::to_string(index);
  return std::mt19937_64(fnv1a(key));
}

std::string gen_digit_string(std::size_t len, bool leading_nonzero, std::mt19937_64& rng) {
  if (len == 0) throw DomainError("digit string length must be positive");
  std::string s(len, '0');
  s[0] = random_digit(rng, leading_nonzero);
  for (std::size_t i = 1; i < len; ++i) s[i] = random_digit(rng, false);
  return s;
}

Number gen_operand(Rep rep, std::size_t L, std::mt19937_64& rng) {
  if (L == 0) throw DomainError("operand length must be positive");
  switch (rep) {
    case Rep::Integer:
      return Number::integer(gen_digit_string(L, true, rng));
    case Rep::Float: {
      auto [int_len, dec_len] = split_two_part_lengths(L, rng);
      std::string int_part = gen_digit_string(int_len, true, rng);
      std::string dec_part = gen_digit_string(dec_len, false, rng);
      dec_part.back() = random_digit(rng, true);  // no trailing decimal zero
      return Number::floating(std::move(int_part), std::move(dec_part));
    }
    case Rep::Fraction: {
      for (int tries = 0; tries < 10000; ++tries) {
        auto [num_len, den_len] = split_two_part_lengths(L, rng);
        std::string num = gen_digit_string(num_len, true, rng);
        std::string den = gen_digit_string(den_len, true, rng);
        if (digits::gcd(num, den) == "1") return Number::fraction(std::move(num), std::move(den));
      }
      throw GenerationError("no coprime pair of length " + std::to_string(L) + " found");
    }
    case Rep::Scientific: {
      if (L < 2) throw DomainError("scientific operands need at least two significand digits");
      std::string sig_int(1, random_digit(rng, true));
      std::string sig_dec = gen_digit_string(L - 1, false, rng);
      sig_dec.back() = random_digit(rng, true);
      std::string exponent = std::to_string(1 + bounded(rng, 99));
      return Number::scientific(std::move(sig_int), std::move(sig_dec), std::move(exponent));
    }
  }
  throw DomainError("unknown representation");
}

std::pair<Number, Number> apply_variant_constraints(const TaskSpec& spec, Number a, Number b,
                                                    std::mt19937_64& rng) {
  const std::size_t L = problem_length(a);
  const std::size_t lmin = min_operand_length(spec.rep);

  // Length windows for the split difficulty variants.
  if (spec.variant == Variant::Easy ||
      (spec.variant == Variant::Hard && spec.task == TaskId::Multiply)) {
    std::size_t lo, hi;
    if (spec.variant == Variant::Easy) {
      lo = lmin;
      hi = std::max(lmin, std::min<std::size_t>(2, L));
    } else {
      lo = std::max(lmin, L / 2 + 1);
      hi = L;
    }
    const std::size_t lb = problem_length(b);
    if (lb < lo || lb > hi) b = gen_operand(spec.rep, lo + bounded(rng, hi - lo + 1), rng);
    return {std::move(a), std::move(b)};
  }

  // Scientific addition and subtraction keep the exponents within reach of
  // each other, so the aligned significands overlap.
  if (spec.rep == Rep::Scientific && (spec.task == TaskId::Add || spec.task == TaskId::Sub)) {
    const long long ea = exponent_of(a);
    if (std::llabs(ea - exponent_of(b)) > 4) {
      const long long lo = std::max(1ll, ea - 4);
      const long long hi = std::min(99ll, ea + 4);
      const long long e = lo + static_cast<long long>(bounded(rng, std::uint64_t(hi - lo + 1)));
      b = Number::scientific(b.part(PartRole::SigInt), b.part(PartRole::SigDec),
                             std::to_string(e));
    }
    return {std::move(a), std::move(b)};
  }

  if (spec.task == TaskId::Max || spec.task == TaskId::Min) {
    if (spec.variant == Variant::Hard) {
      switch (spec.rep) {
        case Rep::Integer:
        case Rep::Float:
          b = shared_prefix_peer(a, rng);
          break;
        case Rep::Scientific:
          b = hard_scientific_peer(a, rng);
          break;
        case Rep::Fraction: {
          // Hard fraction comparisons pit two values below one.
          const std::size_t lb = problem_length(b);
          int guard = 0;
          while (!fraction_below_one(a)) {
            a = gen_operand(spec.rep, L, rng);
            if (++guard > 10000) throw GenerationError("no fraction below one found");
          }
          while (!fraction_below_one(b) || oracle::compare_value(a, b) == 0) {
            b = gen_operand(spec.rep, lb, rng);
            if (++guard > 10000) throw GenerationError("no fraction below one found");
          }
          break;
        }
      }
    } else {
      // Comparisons never pose a tie.
      const std::size_t lb = problem_length(b);
      int guard = 0;
      while (oracle::compare_value(a, b) == 0) {
        b = gen_operand(spec.rep, lb, rng);
        if (++guard > 10000) throw GenerationError("could not break a comparison tie");
      }
    }
  }
  return {std::move(a), std::move(b)};
}

std::pair<Number, Number> gen_pair(const TaskSpec& spec, std::size_t L, std::mt19937_64& rng) {
  if (oracle::second_operand(spec.task) != oracle::SecondOperand::SameRep)
    throw DomainError("gen_pair needs a task with two operands");
  Number a = gen_operand(spec.rep, L, rng);
  Number b = gen_operand(spec.rep, shorter_length(spec, L, rng), rng);
  auto pair = apply_variant_constraints(spec, std::move(a), std::move(b), rng);

  if (ordered_pair(spec.task)) {
    if (oracle::compare_value(pair.first, pair.second) < 0) std::swap(pair.first, pair.second);
  } else if (commutative(spec.task) && bounded(rng, 2) == 1) {
    std::swap(pair.first, pair.second);
  }
  return pair;
}

std::vector<TaskInstance> build_dataset(const TaskSpec& spec, std::uint64_t seed) {
  if (!variant_allowed(spec.task, spec.rep, spec.variant))
    throw UnsupportedTaskError("no such cell: " + task_token(spec));
  const RangeClass rc = range_class(spec.task, spec.rep);
  if (spec.min_length < min_operand_length(spec.rep) || spec.min_length > spec.max_length ||
      spec.max_length > class_max_length(rc))
    throw DomainError("length range " + std::to_string(spec.min_length) + ".." +
                      std::to_string(spec.max_length) + " is invalid for " + task_token(spec));

  const std::string token = task_token(spec);
  std::vector<TaskInstance> out;
  for (std::size_t L = spec.min_length; L <= spec.max_length; ++L) {
    std::unordered_set<std::string> seen;
    std::size_t accepted = 0;
    std::size_t misses = 0;
    // The question space can run dry (two-digit counting offers only 900
    // distinct questions); a long run of duplicates ends the length early.
    for (std::size_t index = 0; accepted < spec.per_length && misses < 2000; ++index) {
      auto rng = instance_stream(seed, token, L, index);
      auto inst = make_instance(spec, rc, token, L, index, rng);
      if (!inst || !seen.insert(dedup_key(*inst)).second) {
        ++misses;
        continue;
      }
      misses = 0;
      ++accepted;
      out.push_back(std::move(*inst));
    }
  }
  return out;
}

void write_dataset(std::ostream& out, const std::vector<TaskInstance>& data) {
  for (const auto& inst : data) {
    nlohmann::ordered_json line;
    line["task"] = std::string(oracle::task_name(inst.task));
    line["rep"] = std::string(rep_name(inst.rep));
    line["variant"] = std::string(variant_name(inst.variant));
    line["length"] = inst.length;
    line["bucket"] = inst.bucket;
    line["operands"] = inst.operands;
    if (inst.extra_arg)
      line["extra_arg"] = *inst.extra_arg;
    else
      line["extra_arg"] = nullptr;
    line["ground_truth"] = inst.ground_truth;
    line["seed_path"] = nlohmann::ordered_json::array({inst.seed.task, inst.seed.length, inst.seed.index});
    out << line.dump() << '\n';
  }
}

std::vector<TaskInstance> read_dataset(std::istream& in) {
  std::vector<TaskInstance> data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "dataset line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
    try {
      TaskInstance inst;
      auto task = oracle::task_from_name(j.at("task").get<std::string>());
      auto rep = rep_from_name(j.at("rep").get<std::string>());
      auto variant = variant_from_name(j.at("variant").get<std::string>());
      if (!task || !rep || !variant) throw ParseError(where + ": unknown task, rep, or variant");
      inst.task = *task;
      inst.rep = *rep;
      inst.variant = *variant;
      inst.length = j.at("length").get<std::size_t>();
      inst.bucket = j.at("bucket").get<std::string>();
      inst.operands = j.at("operands").get<std::vector<std::string>>();
      if (!j.at("extra_arg").is_null()) inst.extra_arg = j.at("extra_arg").get<int>();
      inst.ground_truth = j.at("ground_truth").get<std::string>();
      const auto& sp = j.at("seed_path");
      inst.seed = SeedPath{sp.at(0).get<std::string>(), sp.at(1).get<std::size_t>(),
                           sp.at(2).get<std::size_t>()};
      data.push_back(std::move(inst));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return data;
}

}  // namespace nupa::generator
