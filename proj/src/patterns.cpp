#include "tactile/patterns.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace tactile {

ForceFrame ForceFrame::zeros(std::size_t cells, std::size_t step) {
  ForceFrame f;
  f.readings.assign(cells, {0.0, 0.0, 0.0});
  f.step_index = step;
  return f;
}

void AcquisitionConfig::validate() const {
  if (!(force_threshold >= 0.0 && force_threshold <= 1.0)) {
    throw InvalidInput("force threshold must lie in [0, 1]");
  }
  if (min_cells < 1 || combine_iter < 1 || display_duration < 1) {
    throw InvalidInput("MIN_NUMBER_OF_CELLS, COMBINE_ITER and DISPLAY_DURATION must be >= 1");
  }
}

void Dataset::validate(std::size_t cell_count, std::size_t min_cells) const {
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (patterns[i].size() != cell_count) {
      throw InvalidInput("dataset pattern " + std::to_string(i) + " has wrong length");
    }
    if (patterns[i].cardinality() < min_cells) {
      throw InvalidInput("dataset pattern " + std::to_string(i) + " has fewer than " +
                         std::to_string(min_cells) + " active cells");
    }
  }
}

std::optional<TactilePattern> acquire_pattern(std::span<const ForceFrame> frames,
                                              const AcquisitionConfig& config) {
  config.validate();
  if (frames.size() != config.combine_iter) {
    throw InvalidInput("expected " + std::to_string(config.combine_iter) + " frames per round, got " +
                       std::to_string(frames.size()));
  }
  const std::size_t cells = frames.front().readings.size();
  TactilePattern pattern(cells);
  for (const ForceFrame& frame : frames) {
    if (frame.readings.size() != cells) throw InvalidInput("frames disagree on cell count");
    for (std::size_t c = 0; c < cells; ++c) {
      for (double r : frame.readings[c]) {
        if (!(r >= 0.0 && r <= 1.0)) throw InvalidInput("force reading outside [0, 1]");
      }
      const double peak = *std::max_element(frame.readings[c].begin(), frame.readings[c].end());
      if (peak > config.force_threshold) pattern.set(c, true);
    }
  }
  if (pattern.cardinality() < config.min_cells) return std::nullopt;
  return pattern;
}

Dataset make_triangle_dataset(const SkinGeometry& geometry) {
  const std::size_t n = geometry.cell_count();
  Dataset d;
  d.patterns.push_back(TactilePattern::with_active(n, {0, 1, 2}));
  d.patterns.push_back(TactilePattern::with_active(n, {6, 7, 8}));
  d.patterns.push_back(TactilePattern::with_active(n, {12, 13, 14}));
  return d;
}

TactilePattern corrupt(const TactilePattern& p, std::size_t k, Rng& rng) {
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]) active.push_back(i);
  }
  if (k > active.size()) {
    throw InvalidInput("cannot switch off " + std::to_string(k) + " of " + std::to_string(active.size()) +
                       " active cells");
  }
  // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, active.size() - 1);
    std::swap(active[i], active[pick(rng)]);
  }
  TactilePattern out = p;
  for (std::size_t i = 0; i < k; ++i) out.set(active[i], false);
  return out;
}

TactilePattern blank(const SkinGeometry& geometry) { return TactilePattern(geometry.cell_count()); }

std::vector<LedFrame> render_led_frames(const TactilePattern& p, const AcquisitionConfig& config,
                                        const SkinGeometry& geometry) {
  if (p.size() != geometry.cell_count()) throw InvalidInput("pattern does not match skin geometry");
  LedFrame frame(geometry.rows, std::string(geometry.cols, 'G'));
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (p[c]) frame[geometry.row_of(c)][geometry.column_of(c)] = 'B';
  }
  return std::vector<LedFrame>(config.display_duration, frame);
}

std::string format_led_frames(const std::vector<LedFrame>& frames) {
  std::string out;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (i > 0) out += '\n';
    for (const std::string& row : frames[i]) out += row + '\n';
  }
  return out;
}

std::string format_patterns(std::span<const TactilePattern> patterns, const SkinGeometry& geometry) {
  std::string out;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const TactilePattern& p = patterns[i];
    if (p.size() != geometry.cell_count()) throw InvalidInput("pattern does not match skin geometry");
    if (i > 0) out += '\n';
    for (std::size_t r = 0; r < geometry.rows; ++r) {
      for (std::size_t k = 0; k < geometry.cols; ++k) out += p[geometry.cell_at(r, k)] ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

std::vector<TactilePattern> parse_patterns(const std::string& text, const SkinGeometry& geometry) {
  std::vector<TactilePattern> out;
  std::vector<std::string> block;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (block.empty()) return;
    if (block.size() != geometry.rows) {
      throw ParseError("pattern block ending at line " + std::to_string(line_no) + " has " +
                       std::to_string(block.size()) + " rows, expected " + std::to_string(geometry.rows));
    }
    TactilePattern p(geometry.cell_count());
    for (std::size_t r = 0; r < geometry.rows; ++r) {
      for (std::size_t k = 0; k < geometry.cols; ++k) p.set(geometry.cell_at(r, k), block[r][k] == '1');
    }
    out.push_back(std::move(p));
    block.clear();
  };

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.size() != geometry.cols) {
      throw ParseError("line " + std::to_string(line_no) + " has " + std::to_string(line.size()) +
                       " characters, expected " + std::to_string(geometry.cols));
    }
    if (line.find_first_not_of("01") != std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + " contains characters other than '0'/'1'");
    }
    block.push_back(line);
  }
  flush();
  return out;
}

void write_pattern_file(const std::filesystem::path& path, std::span<const TactilePattern> patterns,
                        const SkinGeometry& geometry) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << format_patterns(patterns, geometry);
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<TactilePattern> read_pattern_file(const std::filesystem::path& path, const SkinGeometry& geometry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_patterns(buf.str(), geometry);
}

Dataset load_dataset(const std::filesystem::path& path, const AcquisitionConfig& config,
                     const SkinGeometry& geometry) {
  Dataset d{read_pattern_file(path, geometry)};
  if (d.empty()) throw ParseError(path.string() + " contains no patterns");
  d.validate(geometry.cell_count(), config.min_cells);
  return d;
}

std::vector<ForceFrame> simulate_round(const TactilePattern& pattern, const AcquisitionConfig& config,
                                       bool noisy, Rng& rng, std::size_t first_step) {
  const double threshold = config.force_threshold;
  std::uniform_real_distribution<double> off_noise(0.0, threshold / 2.0);
  std::uniform_real_distribution<double> on_noise(0.0, 0.05);
  std::vector<ForceFrame> frames;
  frames.reserve(config.combine_iter);
  for (std::size_t s = 0; s < config.combine_iter; ++s) {
    ForceFrame f = ForceFrame::zeros(pattern.size(), first_step + s);
    for (std::size_t c = 0; c < pattern.size(); ++c) {
      for (double& r : f.readings[c]) {
        if (pattern[c]) {
          r = threshold + (noisy ? on_noise(rng) : 0.025);
        } else {
          r = noisy ? off_noise(rng) : 0.0;
        }
        r = std::min(r, 1.0);
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace tactile
