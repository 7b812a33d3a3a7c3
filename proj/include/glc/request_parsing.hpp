#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glc/dataset.hpp"
#include "glc/layout.hpp"

namespace glc {

/// "0,2,1" -> {0, 2, 1}. Empty text gives an empty list.
std::vector<std::size_t> parse_index_list(const std::string& text);
/// "1,0.5,2" -> {1, 0.5, 2}.
std::vector<double> parse_number_list(const std::string& text);
std::uint64_t parse_seed(const std::string& text);

/// Layout overrides shared by the CLI and the HTTP layout route. Indices
/// are 0-based; `coefficients` may be "lda" for the LDA-derived preset.
struct LayoutOverrides {
  std::string order;
  std::string invert;
  std::string coefficients;
};

LayoutConfig apply_overrides(LayoutConfig config, const LayoutOverrides& overrides,
                             const NormalizedDataset& dataset);

}  // namespace glc
