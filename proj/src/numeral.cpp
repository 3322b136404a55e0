#include "nupa/numeral.hpp"

#include <algorithm>

#include "nupa/digits.hpp"

namespace nupa {

namespace {

constexpr std::array<PartRole, 1> kIntegerRoles = {PartRole::IntPart};
constexpr std::array<PartRole, 2> kFloatRoles = {PartRole::IntPart, PartRole::DecPart};
constexpr std::array<PartRole, 2> kFractionRoles = {PartRole::Numerator, PartRole::Denominator};
constexpr std::array<PartRole, 3> kScientificRoles = {PartRole::SigInt, PartRole::SigDec,
                                                      PartRole::Exponent};

// Decimal tail rule: nonempty digits, no trailing zero unless the part is
// exactly "0".
bool valid_decimal_tail(std::string_view s) {
  if (!digits::is_digit_string(s)) return false;
  return s.size() == 1 || s.back() != '0';
}

[[noreturn]] void reject(const std::string& what) { throw DomainError(what); }

}  // namespace

Alignment alignment_of(PartRole role) {
  switch (role) {
    case PartRole::DecPart:
    case PartRole::SigDec:
      return Alignment::Left;
    default:
      return Alignment::Right;
  }
}

std::string_view rep_name(Rep rep) {
  switch (rep) {
    case Rep::Integer: return "integer";
    case Rep::Float: return "float";
    case Rep::Fraction: return "fraction";
    case Rep::Scientific: return "scientific";
  }
  return "";
}

std::string_view rep_token(Rep rep) {
  switch (rep) {
    case Rep::Integer: return "int";
    case Rep::Float: return "float";
    case Rep::Fraction: return "frac";
    case Rep::Scientific: return "sci";
  }
  return "";
}

std::optional<Rep> rep_from_name(std::string_view name) {
  if (name == "integer" || name == "int") return Rep::Integer;
  if (name == "float") return Rep::Float;
  if (name == "fraction" || name == "frac") return Rep::Fraction;
  if (name == "scientific" || name == "sci") return Rep::Scientific;
  return std::nullopt;
}

std::string_view part_name(PartRole role) {
  switch (role) {
    case PartRole::IntPart: return "int";
    case PartRole::DecPart: return "dec";
    case PartRole::Numerator: return "num";
    case PartRole::Denominator: return "den";
    case PartRole::SigInt: return "sig_int";
    case PartRole::SigDec: return "sig_dec";
    case PartRole::Exponent: return "exp";
  }
  return "";
}

Number Number::integer(std::string int_digits) {
  if (!digits::is_canonical(int_digits)) reject("integer part not canonical: " + int_digits);
  return Number(Rep::Integer, {std::move(int_digits), {}, {}});
}

Number Number::floating(std::string int_digits, std::string dec_digits) {
  if (!digits::is_canonical(int_digits)) reject("float int part not canonical: " + int_digits);
  if (!valid_decimal_tail(dec_digits)) reject("float dec part not canonical: " + dec_digits);
  return Number(Rep::Float, {std::move(int_digits), std::move(dec_digits), {}});
}

Number Number::fraction(std::string numerator, std::string denominator) {
  if (!digits::is_canonical(numerator)) reject("numerator not canonical: " + numerator);
  if (!digits::is_canonical(denominator)) reject("denominator not canonical: " + denominator);
  if (digits::is_zero(denominator)) reject("zero denominator");
  if (digits::gcd(numerator, denominator) != "1") {
    reject("fraction not reduced: " + numerator + "/" + denominator);
  }
  return Number(Rep::Fraction, {std::move(numerator), std::move(denominator), {}});
}

Number Number::scientific(std::string sig_int, std::string sig_dec, std::string exponent) {
  if (sig_int.size() != 1 || sig_int[0] < '1' || sig_int[0] > '9') {
    reject("significand must start with a single digit 1-9: " + sig_int);
  }
  if (!valid_decimal_tail(sig_dec)) reject("significand decimals not canonical: " + sig_dec);
  if (!digits::is_canonical(exponent)) reject("exponent not canonical: " + exponent);
  return Number(Rep::Scientific, {std::move(sig_int), std::move(sig_dec), std::move(exponent)});
}

const std::string& Number::part(PartRole role) const {
  auto rs = roles();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i] == role) return parts_[i];
  }
  throw DomainError(std::string("representation ") + std::string(rep_name(kind_)) +
                    " has no part " + std::string(part_name(role)));
}

std::span<const PartRole> Number::roles() const {
  switch (kind_) {
    case Rep::Integer: return kIntegerRoles;
    case Rep::Float: return kFloatRoles;
    case Rep::Fraction: return kFractionRoles;
    case Rep::Scientific: return kScientificRoles;
  }
  return {};
}

std::optional<PartSlices> split_parts(Rep kind, std::string_view text) {
  auto digits_only = [](std::string_view s) { return digits::is_digit_string(s); };
  PartSlices out;
  switch (kind) {
    case Rep::Integer: {
      if (!digits_only(text)) return std::nullopt;
      out.emplace_back(PartRole::IntPart, std::string(text));
      return out;
    }
    case Rep::Float: {
      auto dot = text.find('.');
      if (dot == std::string_view::npos || text.find('.', dot + 1) != std::string_view::npos) {
        return std::nullopt;
      }
      auto i = text.substr(0, dot);
      auto d = text.substr(dot + 1);
      if (!digits_only(i) || !digits_only(d)) return std::nullopt;
      out.emplace_back(PartRole::IntPart, std::string(i));
      out.emplace_back(PartRole::DecPart, std::string(d));
      return out;
    }
    case Rep::Fraction: {
      auto slash = text.find('/');
      if (slash == std::string_view::npos || text.find('/', slash + 1) != std::string_view::npos) {
        return std::nullopt;
      }
      auto n = text.substr(0, slash);
      auto d = text.substr(slash + 1);
      if (!digits_only(n) || !digits_only(d)) return std::nullopt;
      out.emplace_back(PartRole::Numerator, std::string(n));
      out.emplace_back(PartRole::Denominator, std::string(d));
      return out;
    }
    case Rep::Scientific: {
      auto e = text.find('e');
      if (e == std::string_view::npos || text.find('e', e + 1) != std::string_view::npos) {
        return std::nullopt;
      }
      auto sig = text.substr(0, e);
      auto exp = text.substr(e + 1);
      auto dot = sig.find('.');
      if (dot == std::string_view::npos || sig.find('.', dot + 1) != std::string_view::npos) {
        return std::nullopt;
      }
      auto si = sig.substr(0, dot);
      auto sd = sig.substr(dot + 1);
      if (!digits_only(si) || !digits_only(sd) || !digits_only(exp)) return std::nullopt;
      out.emplace_back(PartRole::SigInt, std::string(si));
      out.emplace_back(PartRole::SigDec, std::string(sd));
      out.emplace_back(PartRole::Exponent, std::string(exp));
      return out;
    }
  }
  return std::nullopt;
}

Number parse(Rep kind, std::string_view text) {
  auto slices = split_parts(kind, text);
  if (!slices) {
    throw ParseError("text does not match the " + std::string(rep_name(kind)) +
                     " grammar: " + std::string(text));
  }
  try {
    switch (kind) {
      case Rep::Integer:
        return Number::integer((*slices)[0].second);
      case Rep::Float:
        return Number::floating((*slices)[0].second, (*slices)[1].second);
      case Rep::Fraction:
        return Number::fraction((*slices)[0].second, (*slices)[1].second);
      case Rep::Scientific:
        return Number::scientific((*slices)[0].second, (*slices)[1].second,
                                  (*slices)[2].second);
    }
  } catch (const DomainError& e) {
    throw ParseError("non-canonical " + std::string(rep_name(kind)) + " '" +
                     std::string(text) + "': " + e.what());
  }
  throw ParseError("unknown representation");
}

std::string format(const Number& n) {
  switch (n.kind()) {
    case Rep::Integer:
      return n.part(PartRole::IntPart);
    case Rep::Float:
      return n.part(PartRole::IntPart) + "." + n.part(PartRole::DecPart);
    case Rep::Fraction:
      return n.part(PartRole::Numerator) + "/" + n.part(PartRole::Denominator);
    case Rep::Scientific:
      return n.part(PartRole::SigInt) + "." + n.part(PartRole::SigDec) + "e" +
             n.part(PartRole::Exponent);
  }
  return "";
}

Number canonicalize_integer(std::string int_digits) {
  if (!digits::is_digit_string(int_digits)) reject("not a digit string: " + int_digits);
  return Number::integer(digits::strip_leading_zeros(int_digits));
}

Number canonicalize_float(std::string int_digits, std::string dec_digits) {
  if (int_digits.empty()) int_digits = "0";
  if (dec_digits.empty()) dec_digits = "0";
  if (!digits::is_digit_string(int_digits) || !digits::is_digit_string(dec_digits)) {
    reject("not a digit string: " + int_digits + "." + dec_digits);
  }
  return Number::floating(digits::strip_leading_zeros(int_digits),
                          digits::strip_trailing_zeros(dec_digits));
}

Number canonicalize_fraction(std::string numerator, std::string denominator) {
  if (!digits::is_digit_string(numerator) || !digits::is_digit_string(denominator)) {
    reject("not a digit string: " + numerator + "/" + denominator);
  }
  if (digits::is_zero(denominator)) reject("zero denominator");
  if (digits::is_zero(numerator)) return Number::fraction("0", "1");
  std::string num = digits::strip_leading_zeros(numerator);
  std::string den = digits::strip_leading_zeros(denominator);
  std::string g = digits::gcd(num, den);
  if (g != "1") {
    num = digits::divmod(num, g).first;
    den = digits::divmod(den, g).first;
  }
  return Number::fraction(std::move(num), std::move(den));
}

Number canonicalize_scientific(std::string sig_int_digits, std::string sig_dec_digits,
                               std::int64_t exponent) {
  if (sig_int_digits.empty()) sig_int_digits = "0";
  if (!digits::is_digit_string(sig_int_digits) ||
      (!sig_dec_digits.empty() && !digits::is_digit_string(sig_dec_digits))) {
    reject("not a digit string: " + sig_int_digits + "." + sig_dec_digits);
  }
  std::string head = digits::strip_leading_zeros(sig_int_digits);
  std::string sig_int;
  std::string sig_dec;
  std::int64_t exp = exponent;
  if (!digits::is_zero(head)) {
    sig_int = head.substr(0, 1);
    sig_dec = head.substr(1) + sig_dec_digits;
    exp += static_cast<std::int64_t>(head.size()) - 1;
  } else {
    auto j = sig_dec_digits.find_first_not_of('0');
    if (j == std::string::npos) reject("scientific form cannot represent zero");
    sig_int = sig_dec_digits.substr(j, 1);
    sig_dec = sig_dec_digits.substr(j + 1);
    exp -= static_cast<std::int64_t>(j) + 1;
  }
  if (exp < 0) reject("scientific form cannot represent values below 1");
  sig_dec = sig_dec.empty() ? "0" : digits::strip_trailing_zeros(sig_dec);
  return Number::scientific(std::move(sig_int), std::move(sig_dec), std::to_string(exp));
}

std::vector<std::pair<PartRole, std::size_t>> part_lengths(const Number& n) {
  std::vector<std::pair<PartRole, std::size_t>> out;
  for (PartRole role : n.roles()) out.emplace_back(role, n.part(role).size());
  return out;
}

std::size_t problem_length(const Number& n) {
  switch (n.kind()) {
    case Rep::Integer:
      return n.part(PartRole::IntPart).size();
    case Rep::Float:
      return std::max(n.part(PartRole::IntPart).size(), n.part(PartRole::DecPart).size());
    case Rep::Fraction:
      return std::max(n.part(PartRole::Numerator).size(), n.part(PartRole::Denominator).size());
    case Rep::Scientific:
      return std::max(n.part(PartRole::SigInt).size() + n.part(PartRole::SigDec).size(),
                      n.part(PartRole::Exponent).size());
  }
  return 0;
}

std::string value_digits(const Number& n) {
  std::string out;
  for (PartRole role : n.roles()) {
    if (role == PartRole::Exponent) continue;
    out += n.part(role);
  }
  return out;
}

}  // namespace nupa
