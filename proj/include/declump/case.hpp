#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "imaging.hpp"

namespace declump {

/// One clump to partition. The boundary comes from `polygon` when present,
/// otherwise from the `label` region of `mask`.
struct ClumpCase {
  std::string id;
  std::optional<std::vector<Vec2>> polygon;
  LabelImage mask;
  std::int32_t label = 1;
  std::vector<Vec2> seeds;
  std::optional<ScalarField> image;
  std::optional<LabelImage> truth;
};

}  // namespace declump
