#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nupa/errors.hpp"
#include "nupa/generator.hpp"
#include "nupa/numeral.hpp"
#include "nupa/transforms.hpp"

using namespace nupa;
using namespace nupa::transforms;

namespace {

std::string apply_text(Rep rep, const std::string& text, const FormatVariant& v) {
  return apply_format(parse(rep, text), v);
}

FormatVariant make_variant(ReverseMode mode, std::optional<std::size_t> pad, bool hints) {
  FormatVariant v;
  v.reverse_mode = mode;
  v.pad_width = pad;
  v.index_hints = hints;
  return v;
}

// Every variant the representation accepts, with the given padding target.
std::vector<FormatVariant> valid_variants(Rep rep, std::size_t pad) {
  std::vector<FormatVariant> all;
  for (ReverseMode mode : {ReverseMode::None, ReverseMode::Total, ReverseMode::EachPart,
                           ReverseMode::IntOnly, ReverseMode::DecOnly})
    for (bool padded : {false, true})
      for (bool hints : {false, true}) {
        FormatVariant v = make_variant(mode, padded ? std::optional<std::size_t>(pad) : std::nullopt, hints);
        if (valid_for(v, rep)) all.push_back(v);
      }
  return all;
}

}  // namespace

TEST_CASE("reverse mode names round-trip") {
  for (ReverseMode mode : {ReverseMode::None, ReverseMode::Total, ReverseMode::EachPart,
                           ReverseMode::IntOnly, ReverseMode::DecOnly}) {
    auto back = reverse_mode_from_name(reverse_mode_name(mode));
    REQUIRE(back.has_value());
    CHECK(*back == mode);
  }
  CHECK(!reverse_mode_from_name("reversed").has_value());
  CHECK(!reverse_mode_from_name("").has_value());
  CHECK(reverse_mode_name(ReverseMode::EachPart) == "each_part");
}

TEST_CASE("variant validity by representation") {
  const FormatVariant plain;
  CHECK(valid_for(plain, Rep::Integer));
  CHECK(valid_for(plain, Rep::Float));
  CHECK(valid_for(plain, Rep::Fraction));
  CHECK(valid_for(plain, Rep::Scientific));

  CHECK(valid_for(make_variant(ReverseMode::Total, std::nullopt, false), Rep::Integer));
  CHECK(!valid_for(make_variant(ReverseMode::DecOnly, std::nullopt, false), Rep::Integer));
  CHECK(valid_for(make_variant(ReverseMode::DecOnly, std::nullopt, false), Rep::Float));

  for (Rep rep : {Rep::Fraction, Rep::Scientific}) {
    CHECK(valid_for(make_variant(ReverseMode::EachPart, std::nullopt, false), rep));
    CHECK(!valid_for(make_variant(ReverseMode::Total, std::nullopt, false), rep));
    CHECK(!valid_for(make_variant(ReverseMode::IntOnly, std::nullopt, false), rep));
    CHECK(!valid_for(make_variant(ReverseMode::DecOnly, std::nullopt, false), rep));
    CHECK(!valid_for(make_variant(ReverseMode::None, 6, false), rep));
    CHECK(!valid_for(make_variant(ReverseMode::None, std::nullopt, true), rep));
  }
}

TEST_CASE("integer surfaces") {
  CHECK(apply_text(Rep::Integer, "12345", make_variant(ReverseMode::Total, std::nullopt, false)) ==
        "54321");
  // A single digit run makes total, each-part, and int-only reversal agree.
  CHECK(apply_text(Rep::Integer, "12345", make_variant(ReverseMode::EachPart, std::nullopt, false)) ==
        "54321");
  CHECK(apply_text(Rep::Integer, "12345", make_variant(ReverseMode::IntOnly, std::nullopt, false)) ==
        "54321");
  CHECK(apply_text(Rep::Integer, "12345", make_variant(ReverseMode::None, std::nullopt, false)) ==
        "12345");

  CHECK(apply_text(Rep::Integer, "12", make_variant(ReverseMode::None, 4, false)) == "0012");
  CHECK(apply_text(Rep::Integer, "0", make_variant(ReverseMode::None, 4, false)) == "0000");
  CHECK(apply_text(Rep::Integer, "12", make_variant(ReverseMode::Total, 4, false)) == "2100");

  CHECK(apply_text(Rep::Integer, "12345", make_variant(ReverseMode::None, std::nullopt, true)) ==
        "a1b2c3d4e5");
  CHECK(apply_text(Rep::Integer, "12345", make_variant(ReverseMode::Total, std::nullopt, true)) ==
        "a5b4c3d2e1");
  CHECK(apply_text(Rep::Integer, "12", make_variant(ReverseMode::None, 4, true)) == "a0b0c1d2");
}

TEST_CASE("float surfaces cover the four reversal columns") {
  const std::string x = "103.786";
  CHECK(apply_text(Rep::Float, x, make_variant(ReverseMode::Total, std::nullopt, false)) ==
        "687.301");
  CHECK(apply_text(Rep::Float, x, make_variant(ReverseMode::EachPart, std::nullopt, false)) ==
        "301.687");
  CHECK(apply_text(Rep::Float, x, make_variant(ReverseMode::IntOnly, std::nullopt, false)) ==
        "301.786");
  CHECK(apply_text(Rep::Float, x, make_variant(ReverseMode::DecOnly, std::nullopt, false)) ==
        "103.687");
  CHECK(apply_text(Rep::Float, x, make_variant(ReverseMode::None, 5, false)) == "00103.78600");
  CHECK(apply_text(Rep::Float, x, make_variant(ReverseMode::Total, 5, false)) == "00687.30100");
  CHECK(apply_text(Rep::Float, x, make_variant(ReverseMode::EachPart, 5, false)) ==
        "30100.00687");
  CHECK(apply_text(Rep::Float, x, make_variant(ReverseMode::None, std::nullopt, true)) ==
        "a1b0c3.d7e8f6");
  CHECK(apply_text(Rep::Float, "5.0", make_variant(ReverseMode::None, 3, false)) == "005.000");
}

TEST_CASE("fraction and scientific surfaces reverse each part only") {
  CHECK(apply_text(Rep::Fraction, "3/85", make_variant(ReverseMode::EachPart, std::nullopt, false)) ==
        "3/58");
  CHECK(apply_text(Rep::Fraction, "41/96", make_variant(ReverseMode::None, std::nullopt, false)) ==
        "41/96");
  CHECK(apply_text(Rep::Scientific, "9.83e18",
                   make_variant(ReverseMode::EachPart, std::nullopt, false)) == "9.38e81");
  CHECK(apply_text(Rep::Scientific, "1.205e7",
                   make_variant(ReverseMode::EachPart, std::nullopt, false)) == "1.502e7");
}

TEST_CASE("position labels continue past z") {
  CHECK(position_label(0) == "a");
  CHECK(position_label(1) == "b");
  CHECK(position_label(25) == "z");
  CHECK(position_label(26) == "aa");
  CHECK(position_label(27) == "ab");
  CHECK(position_label(51) == "az");
  CHECK(position_label(52) == "ba");

  // 28 digits force two-letter labels at the tail.
  const std::string digits = "1234567890123456789012345678";
  const std::string hinted =
      apply_text(Rep::Integer, digits, make_variant(ReverseMode::None, std::nullopt, true));
  CHECK(hinted.substr(0, 4) == "a1b2");
  CHECK(hinted.substr(hinted.size() - 6) == "aa7ab8");
  Number back = unapply_format(hinted, make_variant(ReverseMode::None, std::nullopt, true),
                               Rep::Integer);
  CHECK(back == parse(Rep::Integer, digits));
}

TEST_CASE("invalid variants and narrow padding are rejected") {
  CHECK_THROWS_AS(apply_text(Rep::Fraction, "3/8", make_variant(ReverseMode::Total, std::nullopt, false)),
                  DomainError);
  CHECK_THROWS_AS(apply_text(Rep::Fraction, "3/8", make_variant(ReverseMode::None, 4, false)),
                  DomainError);
  CHECK_THROWS_AS(apply_text(Rep::Scientific, "9.83e18", make_variant(ReverseMode::None, std::nullopt, true)),
                  DomainError);
  CHECK_THROWS_AS(apply_text(Rep::Integer, "12", make_variant(ReverseMode::DecOnly, std::nullopt, false)),
                  DomainError);
  CHECK_THROWS_AS(apply_text(Rep::Integer, "12345", make_variant(ReverseMode::None, 3, false)),
                  DomainError);
  CHECK_THROWS_AS(apply_text(Rep::Float, "103.786", make_variant(ReverseMode::None, 2, false)),
                  DomainError);
  CHECK_THROWS_AS(unapply_format("3/8", make_variant(ReverseMode::Total, std::nullopt, false),
                                 Rep::Fraction),
                  DomainError);
}

TEST_CASE("unapply inverts the frozen examples") {
  struct Case {
    Rep rep;
    std::string text;
    FormatVariant v;
    std::string surface;
  };
  const std::vector<Case> cases = {
      {Rep::Integer, "12345", make_variant(ReverseMode::Total, std::nullopt, false), "54321"},
      {Rep::Integer, "12", make_variant(ReverseMode::None, 4, false), "0012"},
      {Rep::Integer, "12345", make_variant(ReverseMode::None, std::nullopt, true), "a1b2c3d4e5"},
      {Rep::Float, "103.786", make_variant(ReverseMode::Total, 5, false), "00687.30100"},
      {Rep::Float, "103.786", make_variant(ReverseMode::DecOnly, std::nullopt, true),
       "a1b0c3.d6e8f7"},
      {Rep::Fraction, "3/85", make_variant(ReverseMode::EachPart, std::nullopt, false), "3/58"},
      {Rep::Scientific, "9.83e18", make_variant(ReverseMode::EachPart, std::nullopt, false),
       "9.38e81"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    CAPTURE(c.surface);
    CHECK(apply_text(c.rep, c.text, c.v) == c.surface);
    CHECK(unapply_format(c.surface, c.v, c.rep) == parse(c.rep, c.text));
  }
}

TEST_CASE("unapply rejects surfaces the forward pass cannot produce") {
  const FormatVariant hints = make_variant(ReverseMode::None, std::nullopt, true);
  CHECK_THROWS_AS(unapply_format("b1a2", hints, Rep::Integer), ParseError);
  CHECK_THROWS_AS(unapply_format("a", hints, Rep::Integer), ParseError);
  CHECK_THROWS_AS(unapply_format("a1b", hints, Rep::Integer), ParseError);
  CHECK_THROWS_AS(unapply_format("1a2", hints, Rep::Integer), ParseError);
  CHECK_THROWS_AS(unapply_format("a1a2", hints, Rep::Integer), ParseError);

  const FormatVariant pad4 = make_variant(ReverseMode::None, 4, false);
  CHECK_THROWS_AS(unapply_format("012", pad4, Rep::Integer), ParseError);
  CHECK_THROWS_AS(unapply_format("00012", pad4, Rep::Integer), ParseError);
  CHECK_THROWS_AS(unapply_format("0012.340", pad4, Rep::Float), ParseError);

  const FormatVariant plain;
  CHECK_THROWS_AS(unapply_format("0012", plain, Rep::Integer), ParseError);
  CHECK_THROWS_AS(unapply_format("12.34", plain, Rep::Integer), ParseError);
  CHECK_THROWS_AS(unapply_format("12.30", plain, Rep::Float), ParseError);
  CHECK_THROWS_AS(unapply_format("", plain, Rep::Integer), ParseError);
}

TEST_CASE("round-trip fuzz over every valid variant") {
  std::mt19937_64 rng(20240816u);
  for (Rep rep : {Rep::Integer, Rep::Float, Rep::Fraction, Rep::Scientific}) {
    for (const FormatVariant& v : valid_variants(rep, 12)) {
      CAPTURE(rep_name(rep));
      CAPTURE(reverse_mode_name(v.reverse_mode));
      CAPTURE(v.pad_width.value_or(0));
      CAPTURE(v.index_hints);
      for (int i = 0; i < 250; ++i) {
        const std::size_t lmin = rep == Rep::Scientific ? 2 : 1;
        const std::size_t L = lmin + generator::bounded(rng, 13 - lmin);
        const Number n = generator::gen_operand(rep, L, rng);
        const std::string surface = apply_format(n, v);
        CHECK(unapply_format(surface, v, rep) == n);
      }
    }
  }
}

TEST_CASE("aligned tokenization chunks from the least significant digit") {
  const TokenizationScheme k3{TokenizeMode::AlignedK, 3};
  CHECK(tokenize("1234567", k3) == std::vector<std::string>{"1", "234", "567"});
  CHECK(tokenize("123456", k3) == std::vector<std::string>{"123", "456"});
  CHECK(tokenize("12", k3) == std::vector<std::string>{"12"});
  CHECK(tokenize("5", k3) == std::vector<std::string>{"5"});
  CHECK(tokenize("", k3).empty());

  const TokenizationScheme k1{TokenizeMode::AlignedK, 1};
  const std::string digits = "90210";
  auto chars = tokenize(digits, k1);
  REQUIRE(chars.size() == digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) CHECK(chars[i] == std::string(1, digits[i]));

  // Equal-length strings cut at the same offsets, keeping place values aligned.
  auto a = tokenize("1234567", k3);
  auto b = tokenize("7654321", k3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].size() == b[i].size());
}

TEST_CASE("random tokenization stays within bounds and concatenates back") {
  const TokenizationScheme k4{TokenizeMode::RandomK, 4};
  std::mt19937_64 rng(7u);
  for (int i = 0; i < 2000; ++i) {
    std::string digits;
    const std::size_t len = 1 + generator::bounded(rng, 30);
    for (std::size_t j = 0; j < len; ++j)
      digits.push_back(static_cast<char>('0' + generator::bounded(rng, 10)));
    auto tokens = tokenize(digits, k4, &rng);
    CHECK(detokenize(tokens) == digits);
    for (const auto& t : tokens) {
      CHECK(t.size() >= 1);
      CHECK(t.size() <= 4);
    }
  }

  // Same seed, same cuts.
  std::mt19937_64 r1(42u), r2(42u);
  CHECK(tokenize("123456789", k4, &r1) == tokenize("123456789", k4, &r2));
}

TEST_CASE("tokenization argument errors") {
  CHECK_THROWS_AS(tokenize("123", TokenizationScheme{TokenizeMode::AlignedK, 0}), DomainError);
  CHECK_THROWS_AS(tokenize("12x3", TokenizationScheme{TokenizeMode::AlignedK, 2}), DomainError);
  CHECK_THROWS_AS(tokenize("123", TokenizationScheme{TokenizeMode::RandomK, 2}), DomainError);
}

TEST_CASE("transformed corpus keeps dataset fields and adds a surface") {
  auto spec = generator::spec_from_token("add-int");
  REQUIRE(spec.has_value());
  spec->min_length = 2;
  spec->max_length = 4;
  spec->per_length = 3;
  const auto data = generator::build_dataset(*spec, 11u);
  REQUIRE(data.size() == 9);

  const FormatVariant v = make_variant(ReverseMode::Total, 6, false);
  std::ostringstream out;
  write_transformed_corpus(out, data, v);

  std::istringstream in(out.str());
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    const auto& inst = data.at(row++);
    CHECK(j.at("task") == "add");
    CHECK(j.at("rep") == "integer");
    CHECK(j.at("operands").size() == 2);
    CHECK(j.at("ground_truth") == inst.ground_truth);
    REQUIRE(j.contains("surface"));
    const auto& s = j.at("surface");
    CHECK(s.at("reverse") == "total");
    CHECK(s.at("pad") == 6);
    CHECK(s.at("index_hints") == false);
    for (std::size_t i = 0; i < inst.operands.size(); ++i) {
      const std::string surface = s.at("operands").at(i).get<std::string>();
      CHECK(unapply_format(surface, v, Rep::Integer) == parse(Rep::Integer, inst.operands[i]));
    }
    CHECK(unapply_format(s.at("ground_truth").get<std::string>(), v, Rep::Integer) ==
          parse(Rep::Integer, inst.ground_truth));
  }
  CHECK(row == data.size());

  // Answers can skip the padding while operands keep it.
  std::ostringstream bare;
  write_transformed_corpus(bare, data, v, false);
  std::istringstream in2(bare.str());
  row = 0;
  while (std::getline(in2, line)) {
    const auto j = nlohmann::json::parse(line);
    const auto& inst = data.at(row++);
    const std::string surface = j.at("surface").at("ground_truth").get<std::string>();
    CHECK(surface.size() == inst.ground_truth.size());
    FormatVariant nv = v;
    nv.pad_width.reset();
    CHECK(unapply_format(surface, nv, Rep::Integer) == parse(Rep::Integer, inst.ground_truth));
  }
  CHECK(row == data.size());
}

TEST_CASE("corpus transform rejects variants the answer cannot carry") {
  auto spec = generator::spec_from_token("truediv-int");
  REQUIRE(spec.has_value());
  spec->min_length = 2;
  spec->max_length = 2;
  spec->per_length = 2;
  const auto data = generator::build_dataset(*spec, 3u);
  REQUIRE(!data.empty());

  // Operands are integers but quotients are fractions, so padding the
  // answer is undefined while padding only the operands is fine.
  std::ostringstream out;
  CHECK_THROWS_AS(
      write_transformed_corpus(out, data, make_variant(ReverseMode::None, 4, false), true),
      DomainError);
  std::ostringstream ok;
  write_transformed_corpus(ok, data, make_variant(ReverseMode::None, 4, false), false);
  CHECK(!ok.str().empty());
}
