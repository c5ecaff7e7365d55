#pragma once

#include "tactile/types.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tactile {

/// The 3 x 6 skin patch. Cells are numbered column-major: cell c sits in
/// column c / rows and row c % rows.
struct SkinGeometry {
  std::size_t rows = 3;
  std::size_t cols = 6;

  std::size_t cell_count() const { return rows * cols; }
  std::size_t column_of(std::size_t cell) const { return cell / rows; }
  std::size_t row_of(std::size_t cell) const { return cell % rows; }
  std::size_t cell_at(std::size_t row, std::size_t col) const { return col * rows + row; }

  static SkinGeometry standard() { return {}; }
};

inline constexpr std::size_t kSensorsPerCell = 3;

/// One 250 ms step of normal-force readings, three sensors per cell.
struct ForceFrame {
  std::vector<std::array<double, kSensorsPerCell>> readings;
  std::size_t step_index = 0;

  static ForceFrame zeros(std::size_t cells, std::size_t step = 0);
};

/// Skin acquisition hyperparameters. The names in the config file mirror the
/// skin firmware: MAX_FORCE, MIN_NUMBER_OF_CELLS, COMBINE_ITER, DISPLAY_DURATION.
struct AcquisitionConfig {
  double force_threshold = 0.012;
  std::size_t min_cells = 2;
  std::size_t combine_iter = 5;
  std::size_t display_duration = 3;

  void validate() const;
};

struct Dataset {
  std::vector<TactilePattern> patterns;

  std::size_t size() const { return patterns.size(); }
  bool empty() const { return patterns.empty(); }

  /// Throws InvalidInput if any pattern has the wrong length or fewer than
  /// min_cells active cells.
  void validate(std::size_t cell_count, std::size_t min_cells) const;
};

/// Combines one round of frames into a pattern. A round where fewer than
/// min_cells cells exceed the threshold yields std::nullopt.
std::optional<TactilePattern> acquire_pattern(std::span<const ForceFrame> frames,
                                              const AcquisitionConfig& config);

/// Three disjoint three-cell triangles: {0,1,2}, {6,7,8}, {12,13,14}.
Dataset make_triangle_dataset(const SkinGeometry& geometry = SkinGeometry::standard());

/// Switches off k uniformly chosen active cells of p.
TactilePattern corrupt(const TactilePattern& p, std::size_t k, Rng& rng);

TactilePattern blank(const SkinGeometry& geometry = SkinGeometry::standard());

/// rows x cols characters, one string per row.
using LedFrame = std::vector<std::string>;

/// 'B' (blue) for on cells, 'G' (green) for off cells, repeated display_duration times.
std::vector<LedFrame> render_led_frames(const TactilePattern& p, const AcquisitionConfig& config,
                                        const SkinGeometry& geometry = SkinGeometry::standard());

std::string format_led_frames(const std::vector<LedFrame>& frames);

// Pattern file format: one block of `rows` lines with `cols` characters per
// pattern, '0'/'1', blocks separated by a blank line. Row r, column k holds
// cell k * rows + r.
std::string format_patterns(std::span<const TactilePattern> patterns,
                            const SkinGeometry& geometry = SkinGeometry::standard());
std::vector<TactilePattern> parse_patterns(const std::string& text,
                                           const SkinGeometry& geometry = SkinGeometry::standard());

void write_pattern_file(const std::filesystem::path& path, std::span<const TactilePattern> patterns,
                        const SkinGeometry& geometry = SkinGeometry::standard());
std::vector<TactilePattern> read_pattern_file(const std::filesystem::path& path,
                                              const SkinGeometry& geometry = SkinGeometry::standard());

Dataset load_dataset(const std::filesystem::path& path, const AcquisitionConfig& config,
                     const SkinGeometry& geometry = SkinGeometry::standard());

/// Synthetic force stream for one round presenting `pattern`. With noise,
/// off cells read uniform [0, threshold/2) and on cells threshold + uniform
/// [0, 0.05); without noise, off cells read 0 and on cells threshold + 0.025.
std::vector<ForceFrame> simulate_round(const TactilePattern& pattern, const AcquisitionConfig& config,
                                       bool noisy, Rng& rng, std::size_t first_step = 0);

}  // namespace tactile
