#pragma once

#include "arabdoc/image.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace arabdoc {

enum class TransformCategory {
  pre_print,
  mechanical,
  human_marks,
  aging,
  digital_noise,
  geometric,
  lighting,
  blur,
};

std::string_view to_string(TransformCategory c);
inline constexpr int kTransformCategoryCount = 8;

/// Values are drawn uniformly from [sample_min, max]; explicit values may go
/// down to `min`.
struct ParamRange {
  std::string name;
  double min = 0.0;
  double sample_min = 0.0;
  double max = 1.0;
};

/// Every transform has a `strength` parameter; strength 0 leaves the image unchanged.
struct TransformSpec {
  TransformCategory category{};
  std::string name;
  std::vector<ParamRange> params;
  bool seed_consuming = false;
  std::string description;
};

using TransformParams = std::map<std::string, double>;

inline constexpr int kRegistryVersion = 1;

const std::vector<TransformSpec>& registry();
const TransformSpec& find_transform(std::string_view name);
std::string registry_json();

TransformParams sample_params(const TransformSpec& spec, std::uint64_t seed);

/// Output size always equals input size. Geometric transforms resample inside
/// the original canvas and fill uncovered area with white.
RasterImage apply_transform(const RasterImage& img, std::string_view name,
                            const TransformParams& params, std::uint64_t seed);
RasterImage apply_transform(const RasterImage& img, const TransformSpec& spec,
                            std::uint64_t seed);

struct PlanStep {
  std::string transform;
  TransformParams params;
  std::uint64_t seed = 0;
  bool operator==(const PlanStep&) const = default;
};

struct Assignment {
  std::string image_id;
  int subset = 1;  // 1, 2 or 3; equals steps.size()
  std::uint64_t seed = 0;
  std::vector<PlanStep> steps;
  bool operator==(const Assignment&) const = default;
};

struct AugmentPlan {
  static constexpr int kSchemaVersion = 1;
  std::uint64_t seed = 0;
  std::vector<Assignment> assignments;
  std::array<std::size_t, 3> subset_sizes{};
  bool operator==(const AugmentPlan&) const = default;
};

/// With allow_remainder the last subset absorbs n mod 3 extra ids.
AugmentPlan plan_augmentation(const std::vector<std::string>& image_ids, std::uint64_t seed,
                              bool allow_remainder = false);

std::string plan_to_jsonl(const AugmentPlan& plan);
AugmentPlan plan_from_jsonl(std::string_view text);

RasterImage apply_assignment(const RasterImage& img, const Assignment& a);

std::string augmented_id(std::string_view image_id);

struct AugmentRunResult {
  std::vector<std::string> output_ids;
  std::filesystem::path manifest;
};

/// Reads `<input_dir>/<id>.png`, writes `<output_dir>/<augmented id>.png` and
/// `manifest.jsonl` listing only augmented images.
AugmentRunResult run_augmentation(const AugmentPlan& plan, const std::filesystem::path& input_dir,
                                  const std::filesystem::path& output_dir, int workers = 1);

}  // namespace arabdoc
