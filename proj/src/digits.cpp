#include "nupa/digits.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <vector>

namespace nupa::digits {

bool is_digit_string(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_canonical(std::string_view s) {
  if (!is_digit_string(s)) return false;
  return s.size() == 1 || s[0] != '0';
}

bool is_zero(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0'; });
}

std::string strip_leading_zeros(std::string_view s) {
  std::size_t i = 0;
  while (i + 1 < s.size() && s[i] == '0') ++i;
  return std::string(s.substr(i));
}

std::string strip_trailing_zeros(std::string_view s) {
  std::size_t n = s.size();
  while (n > 1 && s[n - 1] == '0') --n;
  return std::string(s.substr(0, n));
}

int cmp(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::string add(std::string_view a, std::string_view b) {
  std::string out;
  out.reserve(std::max(a.size(), b.size()) + 1);
  int carry = 0;
  auto ia = a.rbegin();
  auto ib = b.rbegin();
  while (ia != a.rend() || ib != b.rend() || carry) {
    int s = carry;
    if (ia != a.rend()) s += *ia++ - '0';
    if (ib != b.rend()) s += *ib++ - '0';
    out.push_back(static_cast<char>('0' + s % 10));
    carry = s / 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string sub(std::string_view a, std::string_view b) {
  assert(cmp(a, b) >= 0);
  std::string out;
  out.reserve(a.size());
  int borrow = 0;
  auto ia = a.rbegin();
  auto ib = b.rbegin();
  while (ia != a.rend()) {
    int d = (*ia++ - '0') - borrow;
    if (ib != b.rend()) d -= *ib++ - '0';
    if (d < 0) {
      d += 10;
      borrow = 1;
    } else {
      borrow = 0;
    }
    out.push_back(static_cast<char>('0' + d));
  }
  std::reverse(out.begin(), out.end());
  return strip_leading_zeros(out);
}

std::string mul(std::string_view a, std::string_view b) {
  if (is_zero(a) || is_zero(b)) return "0";
  std::vector<int> acc(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    int da = a[a.size() - 1 - i] - '0';
    for (std::size_t j = 0; j < b.size(); ++j) {
      acc[i + j] += da * (b[b.size() - 1 - j] - '0');
    }
  }
  int carry = 0;
  for (auto& cell : acc) {
    cell += carry;
    carry = cell / 10;
    cell %= 10;
  }
  std::string out;
  out.reserve(acc.size());
  for (auto it = acc.rbegin(); it != acc.rend(); ++it) {
    out.push_back(static_cast<char>('0' + *it));
  }
  return strip_leading_zeros(out);
}

std::pair<std::string, std::string> divmod(std::string_view a, std::string_view b) {
  if (is_zero(b)) throw std::invalid_argument("divmod: division by zero");
  if (cmp(a, b) < 0) return {"0", std::string(a)};
  std::string quotient;
  quotient.reserve(a.size());
  std::string rem = "0";
  for (char c : a) {
    // Shift one dividend digit into the running remainder.
    if (rem == "0") {
      rem = std::string(1, c);
    } else {
      rem.push_back(c);
    }
    int q = 0;
    while (cmp(rem, b) >= 0) {
      rem = sub(rem, b);
      ++q;
    }
    quotient.push_back(static_cast<char>('0' + q));
  }
  return {strip_leading_zeros(quotient), rem};
}

std::string gcd(std::string a, std::string b) {
  while (!is_zero(b)) {
    auto [q, r] = divmod(a, b);
    (void)q;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::string shift10(std::string_view a, std::size_t k) {
  if (is_zero(a)) return "0";
  std::string out(a);
  out.append(k, '0');
  return out;
}

std::string pow_u32(std::uint32_t base, std::uint32_t exp) {
  std::string out = "1";
  std::string b = from_u64(base);
  for (std::uint32_t i = 0; i < exp; ++i) out = mul(out, b);
  return out;
}

std::string from_u64(std::uint64_t v) {
  return std::to_string(v);
}

}  // namespace nupa::digits
