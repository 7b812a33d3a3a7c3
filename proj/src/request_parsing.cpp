#include "glc/request_parsing.hpp"

#include <charconv>

#include "glc/classifiers.hpp"
#include "glc/error.hpp"

namespace glc {

namespace {

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  if (text.empty()) return parts;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    while (!part.empty() && part.front() == ' ') part.erase(part.begin());
    while (!part.empty() && part.back() == ' ') part.pop_back();
    parts.push_back(part);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

template <class T>
T parse_one(const std::string& part, const std::string& what) {
  T value{};
  auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
  if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
    throw ValidationError("invalid " + what + " '" + part + "'");
  }
  return value;
}

}  // namespace

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& part : split(text)) out.push_back(parse_one<std::size_t>(part, "index"));
  return out;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text)) out.push_back(parse_one<double>(part, "number"));
  return out;
}

std::uint64_t parse_seed(const std::string& text) { return parse_one<std::uint64_t>(text, "seed"); }

LayoutConfig apply_overrides(LayoutConfig config, const LayoutOverrides& overrides,
                             const NormalizedDataset& dataset) {
  const std::size_t n = dataset.dimension();
  if (!overrides.order.empty()) config.attribute_order = parse_index_list(overrides.order);
  if (!overrides.invert.empty()) {
    config.inverted.assign(n, false);
    for (std::size_t i : parse_index_list(overrides.invert)) {
      if (i >= n) throw ValidationError("inverted attribute " + std::to_string(i) + " out of range");
      config.inverted[i] = true;
    }
  }
  if (overrides.coefficients == "lda") {
    config.coefficients = lda_dcc_coefficients(dataset);
  } else if (!overrides.coefficients.empty()) {
    config.coefficients = parse_number_list(overrides.coefficients);
  }
  config.validate(n);
  return config;
}

}  // namespace glc
