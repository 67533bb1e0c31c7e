#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace pulse {

/// Row-major grayscale image, intensities in [0,1].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

GrayImage make_image(int width, int height, double fill = 0.0);

/// Binary PGM (P5, maxval 255).
std::string encode_pgm(const GrayImage& img);
GrayImage decode_pgm(const std::string& bytes);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
GrayImage read_pgm(const std::filesystem::path& path);

/// Unigram-overlap score with exact + suffix-stem matching.
/// P, R over matched unigrams; F = 10PR/(R+9P); penalty 0.5*(chunks/matches)^3.
double meteor_score(const std::string& candidate, const std::string& reference);

/// Exposed for test oracles: tokenizer-consistent stemmer.
std::string stem_token(const std::string& token);

/// The stemmer's ordered suffix table, mirrored in data/stem_suffixes.txt.
struct StemRule {
  std::string suffix;
  std::string replacement;
  std::size_t min_stem;
};
const std::vector<StemRule>& stem_rule_list();

/// Fraction of successful outcomes.
double pass_at_1(const std::vector<bool>& outcomes);

/// 10*log10(1/MSE) for unit-range images, capped at 99.0 dB.
double psnr(const GrayImage& a, const GrayImage& b);

enum class SsimMode { Single, MultiScale };

/// Single: mean SSIM over non-overlapping 8x8 tiles, C1=0.01^2, C2=0.03^2.
/// MultiScale: geometric mean over 3 dyadic levels (2x2 mean-pooling).
double ssim(const GrayImage& a, const GrayImage& b, SsimMode mode = SsimMode::Single);

/// Compare golden/actual artifact directories; writes eval_report.json when
/// report_path is nonempty and returns the report.
nlohmann::json eval_directories(const std::filesystem::path& golden_dir,
                                const std::filesystem::path& actual_dir,
                                const std::filesystem::path& report_path);

}  // namespace pulse
