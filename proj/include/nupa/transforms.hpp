#pragma once

// Surface-format transforms for corpus ablations: digit reversal, zero
// padding, index hints, and digit-chunk tokenization. Every transform is
// invertible given its parameters, so transformed corpora can be scored by
// mapping model output back to canonical numerals.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "nupa/generator.hpp"
#include "nupa/numeral.hpp"

namespace nupa::transforms {

// How digits are reordered. Total reversal mirrors the whole digit string
// (a float's decimal digits come out first); each-part reversal mirrors
// every digit part in place; int/dec reversal mirrors just that part of an
// integer or float.
enum class ReverseMode { None, Total, EachPart, IntOnly, DecOnly };

std::string_view reverse_mode_name(ReverseMode mode);
std::optional<ReverseMode> reverse_mode_from_name(std::string_view name);

struct FormatVariant {
  ReverseMode reverse_mode = ReverseMode::None;
  std::optional<std::size_t> pad_width;  // per-part zero padding target
  bool index_hints = false;              // prefix every digit with its position label
  bool operator==(const FormatVariant&) const = default;
};

// Integers take everything but decimal-part reversal; floats take
// everything; fractions and scientific numbers reverse only none/each_part
// and take neither padding nor hints.
bool valid_for(const FormatVariant& v, Rep rep);

// Position labels for index hints: a..z, then aa, ab, ... (leftmost display
// digit is position 0).
std::string position_label(std::size_t index);

// Transformed surface string. Padding widens parts first (leading zeros on
// integer-like parts, trailing zeros on decimal parts), reversal reorders
// the padded digits, and hints label each digit of the final surface.
// Throws DomainError when the variant does not fit the representation or the
// padding is narrower than a part.
std::string apply_format(const Number& n, const FormatVariant& v);

// Exact inverse: unapply_format(apply_format(n, v), v, n.kind()) == n.
// Throws ParseError on any surface the forward transform cannot produce.
Number unapply_format(const std::string& s, const FormatVariant& v, Rep kind);

enum class TokenizeMode { AlignedK, RandomK };

struct TokenizationScheme {
  TokenizeMode mode = TokenizeMode::AlignedK;
  std::size_t k = 1;
  bool operator==(const TokenizationScheme&) const = default;
};

// Splits a digit string into chunks. aligned_k cuts from the least
// significant digit so every chunk except the leftmost has exactly k
// digits; random_k draws chunk lengths uniformly from [1, k], also from the
// least significant end (pass the random source). Concatenating the chunks
// always restores the input.
std::vector<std::string> tokenize(std::string_view digits, const TokenizationScheme& scheme,
                                  std::mt19937_64* rng = nullptr);
std::string detokenize(const std::vector<std::string>& tokens);

// Dataset lines with an added "surface" field holding the transformed
// operands and answer next to the variant that produced them. The answer is
// padded too unless pad_answer is false. Throws DomainError when the variant
// fits neither the operand nor the answer representation of an instance.
void write_transformed_corpus(std::ostream& out,
                              const std::vector<generator::TaskInstance>& data,
                              const FormatVariant& v, bool pad_answer = true);

}  // namespace nupa::transforms
