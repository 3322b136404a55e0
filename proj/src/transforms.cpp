#include "nupa/transforms.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <ostream>
#include <utility>

#include "nupa/errors.hpp"

namespace nupa::transforms {
namespace {

using Parts = std::vector<std::pair<PartRole, std::string>>;

// Separator printed between consecutive parts of a representation.
char joiner(Rep rep, std::size_t gap) {
  switch (rep) {
    case Rep::Float:
      return '.';
    case Rep::Fraction:
      return '/';
    case Rep::Scientific:
      return gap == 0 ? '.' : 'e';
    case Rep::Integer:
      break;
  }
  throw DomainError("no separator inside an integer");
}

std::string reversed(std::string s) {
  std::reverse(s.begin(), s.end());
  return s;
}

Parts number_parts(const Number& n) {
  Parts parts;
  for (PartRole role : n.roles()) parts.emplace_back(role, n.part(role));
  return parts;
}

void pad_parts(Parts& parts, std::size_t width) {
  for (auto& [role, text] : parts) {
    if (text.size() > width)
      throw DomainError("pad width " + std::to_string(width) + " narrower than part '" + text + "'");
    const std::string zeros(width - text.size(), '0');
    // Integer-like parts grow on the left, decimal parts on the right, so
    // padding never moves a digit away from its place value.
    if (alignment_of(role) == Alignment::Right)
      text = zeros + text;
    else
      text += zeros;
  }
}

// Reordering shared by apply and unapply: every mode is its own inverse.
void reverse_parts(Parts& parts, ReverseMode mode, Rep rep) {
  switch (mode) {
    case ReverseMode::None:
      return;
    case ReverseMode::Total:
      if (rep == Rep::Float) {
        // Mirroring the whole surface puts the reversed decimal digits in
        // front of the point and the reversed integer digits behind it.
        std::string rev_int = reversed(parts[1].second);
        parts[1].second = reversed(parts[0].second);
        parts[0].second = rev_int;
      } else {
        parts[0].second = reversed(parts[0].second);
      }
      return;
    case ReverseMode::EachPart:
      for (auto& part : parts) part.second = reversed(part.second);
      return;
    case ReverseMode::IntOnly:
      parts[0].second = reversed(parts[0].second);
      return;
    case ReverseMode::DecOnly:
      parts[1].second = reversed(parts[1].second);
      return;
  }
  throw DomainError("unknown reverse mode");
}

std::string join_parts(const Parts& parts, Rep rep) {
  std::string out = parts[0].second;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    out.push_back(joiner(rep, i - 1));
    out += parts[i].second;
  }
  return out;
}

std::string add_hints(const std::string& surface) {
  std::string out;
  std::size_t index = 0;
  for (char c : surface) {
    if (std::isdigit(static_cast<unsigned char>(c))) out += position_label(index++);
    out.push_back(c);
  }
  return out;
}

// Inverse of add_hints: every digit must carry exactly the label its
// position demands. Hints are only valid on integers and floats, so the
// sole non-digit allowed through is the decimal point.
std::string strip_hints(const std::string& surface) {
  std::string out;
  std::size_t index = 0;
  std::size_t i = 0;
  while (i < surface.size()) {
    if (surface[i] == '.') {
      out.push_back('.');
      ++i;
      continue;
    }
    const std::string label = position_label(index++);
    if (surface.compare(i, label.size(), label) != 0)
      throw ParseError("index hint mismatch at offset " + std::to_string(i) + " in '" + surface + "'");
    i += label.size();
    if (i >= surface.size() || !std::isdigit(static_cast<unsigned char>(surface[i])))
      throw ParseError("index hint without digit in '" + surface + "'");
    out.push_back(surface[i]);
    ++i;
  }
  return out;
}

void unpad_parts(Parts& parts, std::size_t width) {
  for (auto& [role, text] : parts) {
    if (text.size() != width)
      throw ParseError("padded part '" + text + "' is not " + std::to_string(width) + " digits");
    if (alignment_of(role) == Alignment::Right) {
      const std::size_t first = text.find_first_not_of('0');
      text = first == std::string::npos ? "0" : text.substr(first);
    } else {
      const std::size_t last = text.find_last_not_of('0');
      text = last == std::string::npos ? "0" : text.substr(0, last + 1);
    }
  }
}

}  // namespace

std::string_view reverse_mode_name(ReverseMode mode) {
  switch (mode) {
    case ReverseMode::None:
      return "none";
    case ReverseMode::Total:
      return "total";
    case ReverseMode::EachPart:
      return "each_part";
    case ReverseMode::IntOnly:
      return "int_only";
    case ReverseMode::DecOnly:
      return "dec_only";
  }
  throw DomainError("unknown reverse mode");
}

std::optional<ReverseMode> reverse_mode_from_name(std::string_view name) {
  static constexpr std::array<ReverseMode, 5> kModes = {ReverseMode::None, ReverseMode::Total,
                                                        ReverseMode::EachPart, ReverseMode::IntOnly,
                                                        ReverseMode::DecOnly};
  for (ReverseMode mode : kModes)
    if (name == reverse_mode_name(mode)) return mode;
  return std::nullopt;
}

bool valid_for(const FormatVariant& v, Rep rep) {
  switch (rep) {
    case Rep::Integer:
      return v.reverse_mode != ReverseMode::DecOnly;
    case Rep::Float:
      return true;
    case Rep::Fraction:
    case Rep::Scientific:
      return (v.reverse_mode == ReverseMode::None || v.reverse_mode == ReverseMode::EachPart) &&
             !v.pad_width && !v.index_hints;
  }
  return false;
}

std::string position_label(std::size_t index) {
  // Spreadsheet-style letters: a..z, aa..az, ba.. (bijective base 26).
  std::string label;
  std::size_t n = index + 1;
  while (n > 0) {
    label.push_back(static_cast<char>('a' + (n - 1) % 26));
    n = (n - 1) / 26;
  }
  std::reverse(label.begin(), label.end());
  return label;
}

std::string apply_format(const Number& n, const FormatVariant& v) {
  if (!valid_for(v, n.kind()))
    throw DomainError("format variant not defined for " + std::string(rep_name(n.kind())));
  Parts parts = number_parts(n);
  if (v.pad_width) pad_parts(parts, *v.pad_width);
  reverse_parts(parts, v.reverse_mode, n.kind());
  std::string surface = join_parts(parts, n.kind());
  if (v.index_hints) surface = add_hints(surface);
  return surface;
}

Number unapply_format(const std::string& s, const FormatVariant& v, Rep kind) {
  if (!valid_for(v, kind))
    throw DomainError("format variant not defined for " + std::string(rep_name(kind)));
  const std::string bare = v.index_hints ? strip_hints(s) : s;
  auto slices = split_parts(kind, bare);
  if (!slices) throw ParseError("cannot split '" + bare + "' as " + std::string(rep_name(kind)));
  Parts parts = std::move(*slices);
  reverse_parts(parts, v.reverse_mode, kind);
  if (v.pad_width) unpad_parts(parts, *v.pad_width);
  return parse(kind, join_parts(parts, kind));
}

std::vector<std::string> tokenize(std::string_view digits, const TokenizationScheme& scheme,
                                  std::mt19937_64* rng) {
  if (scheme.k == 0) throw DomainError("chunk size must be at least 1");
  if (digits.find_first_not_of("0123456789") != std::string_view::npos)
    throw DomainError("tokenize expects a digit string, got '" + std::string(digits) + "'");
  std::vector<std::string> tokens;
  if (digits.empty()) return tokens;
  if (scheme.mode == TokenizeMode::AlignedK) {
    // Cut from the least significant digit so only the leading chunk can
    // fall short of k.
    std::size_t lead = digits.size() % scheme.k;
    if (lead == 0) lead = std::min(scheme.k, digits.size());
    tokens.emplace_back(digits.substr(0, lead));
    for (std::size_t i = lead; i < digits.size(); i += scheme.k)
      tokens.emplace_back(digits.substr(i, scheme.k));
    return tokens;
  }
  if (!rng) throw DomainError("random tokenization needs a random source");
  std::size_t end = digits.size();
  while (end > 0) {
    std::size_t len = 1 + static_cast<std::size_t>(generator::bounded(*rng, scheme.k));
    len = std::min(len, end);
    tokens.emplace_back(digits.substr(end - len, len));
    end -= len;
  }
  std::reverse(tokens.begin(), tokens.end());
  return tokens;
}

std::string detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t;
  return out;
}

void write_transformed_corpus(std::ostream& out,
                              const std::vector<generator::TaskInstance>& data,
                              const FormatVariant& v, bool pad_answer) {
  FormatVariant answer_variant = v;
  if (!pad_answer) answer_variant.pad_width.reset();
  for (const auto& inst : data) {
    const Rep answer_rep = generator::instance_answer_rep(inst);
    nlohmann::ordered_json surface;
    surface["reverse"] = std::string(reverse_mode_name(v.reverse_mode));
    if (v.pad_width)
      surface["pad"] = *v.pad_width;
    else
      surface["pad"] = nullptr;
    surface["index_hints"] = v.index_hints;
    auto ops = nlohmann::ordered_json::array();
    for (const auto& op : inst.operands) ops.push_back(apply_format(parse(inst.rep, op), v));
    surface["operands"] = std::move(ops);
    surface["ground_truth"] = apply_format(parse(answer_rep, inst.ground_truth), answer_variant);

    nlohmann::ordered_json line;
    line["task"] = std::string(oracle::task_name(inst.task));
    line["rep"] = std::string(rep_name(inst.rep));
    line["variant"] = std::string(generator::variant_name(inst.variant));
    line["length"] = inst.length;
    line["bucket"] = inst.bucket;
    line["operands"] = inst.operands;
    if (inst.extra_arg)
      line["extra_arg"] = *inst.extra_arg;
    else
      line["extra_arg"] = nullptr;
    line["ground_truth"] = inst.ground_truth;
    line["seed_path"] =
        nlohmann::ordered_json::array({inst.seed.task, inst.seed.length, inst.seed.index});
    line["surface"] = std::move(surface);
    out << line.dump() << '\n';
  }
}

}  // namespace nupa::transforms
