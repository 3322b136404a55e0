#pragma once

// Canonical numeral grammar shared by every other module. Four
// representations, all non-negative, written without separators:
//
//   integer      "1287"
//   float        "103.786"      (decimal part never empty, no trailing zero
//                                unless it is exactly "0")
//   fraction     "13/21"        (coprime, denominator nonzero)
//   scientific   "9.8302e18"    (significand in [1, 10), exponent without
//                                leading zeros)
//
// A Number stores its digit parts separately so that metrics and transforms
// can reason about parts without re-splitting text.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nupa/errors.hpp"

namespace nupa {

enum class Rep { Integer, Float, Fraction, Scientific };

enum class PartRole {
  IntPart,      // integer digits of integer / float
  DecPart,      // decimal digits of float
  Numerator,
  Denominator,
  SigInt,       // single digit before the point of a scientific significand
  SigDec,       // digits after the point of a scientific significand
  Exponent,
};

enum class Alignment { Right, Left };

// Decimal-ish parts compare from the most significant digit outward (left
// aligned); everything else lines up at the units digit (right aligned).
Alignment alignment_of(PartRole role);

std::string_view rep_name(Rep rep);      // "integer", "float", ...
std::string_view rep_token(Rep rep);     // "int", "float", "frac", "sci"
std::optional<Rep> rep_from_name(std::string_view name);  // accepts either form

std::string_view part_name(PartRole role);

class Number {
 public:
  // Factories validate canonical form and throw DomainError otherwise. Use
  // canonicalize() to normalize raw digit parts first.
  static Number integer(std::string int_digits);
  static Number floating(std::string int_digits, std::string dec_digits);
  static Number fraction(std::string numerator, std::string denominator);
  static Number scientific(std::string sig_int, std::string sig_dec, std::string exponent);

  Rep kind() const { return kind_; }
  const std::string& part(PartRole role) const;

  // Roles present for this representation, in display order.
  std::span<const PartRole> roles() const;

  bool operator==(const Number& other) const = default;

 private:
  Number(Rep kind, std::array<std::string, 3> parts) : kind_(kind), parts_(std::move(parts)) {}
  Rep kind_;
  std::array<std::string, 3> parts_;
};

// Strict parse of canonical text. Rejects malformed shapes and non-canonical
// forms (leading zeros, trailing decimal zeros, non-coprime fractions,
// out-of-range significands) with ParseError.
Number parse(Rep kind, std::string_view text);

// Canonical rendering; parse(kind, format(n)) == n.
std::string format(const Number& n);

// Normalizes raw digit parts into a canonical Number:
//   - strips leading zeros from integer-like parts,
//   - strips trailing zeros from decimal parts (keeping one digit),
//   - reduces fractions by gcd; a zero numerator collapses to 0/1,
//   - renormalizes scientific significands to [1, 10), folding the shift
//     into the exponent.
// The scientific form takes the significand as raw digits around a point
// ("96" "53152" with exponent 54 means 96.53152e54 -> 9.653152e55). Values
// with no scientific form (zero, exponent below zero) raise DomainError, as
// does a zero denominator.
Number canonicalize_integer(std::string int_digits);
Number canonicalize_float(std::string int_digits, std::string dec_digits);
Number canonicalize_fraction(std::string numerator, std::string denominator);
Number canonicalize_scientific(std::string sig_int_digits, std::string sig_dec_digits,
                               std::int64_t exponent);

// Lenient shape split used on model output: checks only that the text has
// the right separators in the right places with nonempty digit runs, and
// returns the parts in display order. Canonicality is not required, so
// "09" or "6/4" still split. Returns nullopt when the shape does not match.
using PartSlices = std::vector<std::pair<PartRole, std::string>>;
std::optional<PartSlices> split_parts(Rep kind, std::string_view text);

// Digit length of each part, display order.
std::vector<std::pair<PartRole, std::size_t>> part_lengths(const Number& n);

// Problem length: integer -> |int|; float -> max(|int|, |dec|); fraction ->
// max(|num|, |den|); scientific -> max(|sig_int| + |sig_dec|, |exp|).
std::size_t problem_length(const Number& n);

// Digits of the number itself in display order (exponent digits excluded for
// scientific; separators skipped).
std::string value_digits(const Number& n);

}  // namespace nupa
