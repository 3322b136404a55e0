#pragma once

// Exact unsigned decimal arithmetic over digit strings. Every value is a
// string of '0'..'9' with no leading zero (the single exception being "0"
// itself). Operands stay well under a few hundred digits, so schoolbook
// algorithms are plenty.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace nupa::digits {

bool is_digit_string(std::string_view s);

// True for a digit string with no leading zero ("0" allowed).
bool is_canonical(std::string_view s);

bool is_zero(std::string_view s);

// Removes leading zeros but always keeps at least one digit.
std::string strip_leading_zeros(std::string_view s);

// Removes trailing zeros but always keeps at least one digit.
std::string strip_trailing_zeros(std::string_view s);

// Three-way comparison of canonical digit strings: -1, 0, or +1.
int cmp(std::string_view a, std::string_view b);

std::string add(std::string_view a, std::string_view b);

// Requires a >= b.
std::string sub(std::string_view a, std::string_view b);

std::string mul(std::string_view a, std::string_view b);

// Quotient and remainder; requires b != 0.
std::pair<std::string, std::string> divmod(std::string_view a, std::string_view b);

std::string gcd(std::string a, std::string b);

// a * 10^k.
std::string shift10(std::string_view a, std::size_t k);

// base^exp for small bases; exp may be 0.
std::string pow_u32(std::uint32_t base, std::uint32_t exp);

std::string from_u64(std::uint64_t v);

}  // namespace nupa::digits
