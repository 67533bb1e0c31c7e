#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "core/error.hpp"
#include "core/io.hpp"
#include "core/text.hpp"

namespace pulse {

namespace fs = std::filesystem;
using nlohmann::json;

GrayImage make_image(int width, int height, double fill) {
  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.assign(static_cast<std::size_t>(width) * height, fill);
  return img;
}

std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.pixels.size());
  for (double v : img.pixels) {
    double clamped = std::min(1.0, std::max(0.0, v));
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(clamped * 255.0))));
  }
  return out;
}

GrayImage decode_pgm(const std::string& bytes) {
  int fields[3] = {0, 0, 0};
  std::size_t pos = 0;
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    raise(ErrorCode::ParseFailure, "not a P5 PGM");
  pos = 2;
  for (int f = 0; f < 3; ++f) {
    while (pos < bytes.size() && (bytes[pos] == ' ' || bytes[pos] == '\t' || bytes[pos] == '\n' ||
                                  bytes[pos] == '\r')) {
      ++pos;
    }
    if (pos < bytes.size() && bytes[pos] == '#') {  // comment line
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      --f;
      continue;
    }
    int v = 0;
    std::size_t digits = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      v = v * 10 + (bytes[pos] - '0');
      ++pos;
      ++digits;
    }
    if (digits == 0) raise(ErrorCode::ParseFailure, "truncated PGM header");
    fields[f] = v;
  }
  if (pos >= bytes.size()) raise(ErrorCode::ParseFailure, "truncated PGM header");
  ++pos;  // single whitespace after maxval
  int width = fields[0], height = fields[1], maxval = fields[2];
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
    raise(ErrorCode::ParseFailure, "unsupported PGM geometry");
  std::size_t need = static_cast<std::size_t>(width) * height;
  if (bytes.size() - pos < need) raise(ErrorCode::ParseFailure, "truncated PGM payload");
  GrayImage img = make_image(width, height);
  for (std::size_t i = 0; i < need; ++i)
    img.pixels[i] = static_cast<unsigned char>(bytes[pos + i]) / static_cast<double>(maxval);
  return img;
}

void write_pgm(const fs::path& path, const GrayImage& img) { write_file(path, encode_pgm(img)); }

GrayImage read_pgm(const fs::path& path) { return decode_pgm(read_file(path)); }

// ---------------------------------------------------------------------------
// METEOR (exact + stem matchers; no synonym stage)

namespace {

struct SuffixRule {
  const char* suffix;
  const char* replacement;
  std::size_t min_stem;  // minimum length of the part left after stripping
};

// Ordered; first applicable rule wins. Mirrored in data/stem_suffixes.txt.
constexpr SuffixRule kSuffixRules[] = {
    {"sses", "ss", 2}, {"ies", "y", 2},   {"ational", "ate", 2}, {"tional", "tion", 1},
    {"ization", "ize", 2}, {"fulness", "ful", 2}, {"ousness", "ous", 2},
    {"iveness", "ive", 2}, {"ments", "ment", 2}, {"ness", "", 3},
    {"ing", "", 3},    {"edly", "", 3},   {"ed", "", 3},         {"ly", "", 3},
    {"es", "", 3},     {"s", "", 3},
};

bool ends_with(const std::string& s, const char* suffix, std::size_t len) {
  return s.size() >= len && s.compare(s.size() - len, len, suffix) == 0;
}

}  // namespace

const std::vector<StemRule>& stem_rule_list() {
  static const std::vector<StemRule> rules = [] {
    std::vector<StemRule> out;
    for (const auto& rule : kSuffixRules)
      out.push_back(StemRule{rule.suffix, rule.replacement, rule.min_stem});
    return out;
  }();
  return rules;
}

std::string stem_token(const std::string& token) {
  for (const auto& rule : kSuffixRules) {
    std::size_t len = std::char_traits<char>::length(rule.suffix);
    if (!ends_with(token, rule.suffix, len)) continue;
    std::size_t stem_len = token.size() - len;
    if (stem_len < rule.min_stem) continue;
    if (rule.suffix[0] == 's' && len == 1 && stem_len > 0 && token[stem_len - 1] == 's')
      continue;  // "ss" endings keep their final s
    return token.substr(0, stem_len) + rule.replacement;
  }
  return token;
}

double meteor_score(const std::string& candidate, const std::string& reference) {
  if (trim(candidate).empty() || trim(reference).empty())
    raise(ErrorCode::EmptyInput, "meteor_score requires nonempty texts");

  std::vector<std::string> cand = tokenize(candidate);
  std::vector<std::string> ref = tokenize(reference);
  if (cand.empty() || ref.empty())
    raise(ErrorCode::EmptyInput, "meteor_score requires tokenizable texts");

  const std::size_t m = cand.size(), n = ref.size();
  std::vector<int> cand_to_ref(m, -1);
  std::vector<bool> ref_used(n, false);

  // stage 1: exact, leftmost unused reference token
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!ref_used[j] && ref[j] == cand[i]) {
        cand_to_ref[i] = static_cast<int>(j);
        ref_used[j] = true;
        break;
      }
    }
  }
  // stage 2: stems of the leftovers
  std::vector<std::string> ref_stems(n);
  for (std::size_t j = 0; j < n; ++j) ref_stems[j] = stem_token(ref[j]);
  for (std::size_t i = 0; i < m; ++i) {
    if (cand_to_ref[i] >= 0) continue;
    std::string cs = stem_token(cand[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (!ref_used[j] && ref_stems[j] == cs) {
        cand_to_ref[i] = static_cast<int>(j);
        ref_used[j] = true;
        break;
      }
    }
  }

  int matches = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (cand_to_ref[i] >= 0) ++matches;
  if (matches == 0) return 0.0;

  double precision = static_cast<double>(matches) / static_cast<double>(m);
  double recall = static_cast<double>(matches) / static_cast<double>(n);
  double f_mean = 10.0 * precision * recall / (recall + 9.0 * precision);

  // chunks: maximal runs contiguous in both candidate and reference
  int chunks = 0;
  int prev_i = -2, prev_j = -2;
  for (std::size_t i = 0; i < m; ++i) {
    if (cand_to_ref[i] < 0) continue;
    if (static_cast<int>(i) != prev_i + 1 || cand_to_ref[i] != prev_j + 1) ++chunks;
    prev_i = static_cast<int>(i);
    prev_j = cand_to_ref[i];
  }

  double penalty = 0.5 * std::pow(static_cast<double>(chunks) / matches, 3.0);
  return f_mean * (1.0 - penalty);
}

double pass_at_1(const std::vector<bool>& outcomes) {
  if (outcomes.empty()) raise(ErrorCode::NoSamples, "pass_at_1 over an empty outcome list");
  std::size_t successes = 0;
  for (bool ok : outcomes)
    if (ok) ++successes;
  return static_cast<double>(successes) / static_cast<double>(outcomes.size());
}

// ---------------------------------------------------------------------------
// Image metrics

namespace {

void require_same_size(const GrayImage& a, const GrayImage& b) {
  if (a.width != b.width || a.height != b.height)
    raise(ErrorCode::SizeMismatch, "image sizes differ: " + std::to_string(a.width) + "x" +
                                       std::to_string(a.height) + " vs " +
                                       std::to_string(b.width) + "x" + std::to_string(b.height));
}

double ssim_single(const GrayImage& a, const GrayImage& b) {
  constexpr double C1 = 0.01 * 0.01;
  constexpr double C2 = 0.03 * 0.03;
  constexpr int kWindow = 8;

  double total = 0.0;
  int windows = 0;
  for (int ty = 0; ty < a.height; ty += kWindow) {
    for (int tx = 0; tx < a.width; tx += kWindow) {
      int w = std::min(kWindow, a.width - tx);
      int h = std::min(kWindow, a.height - ty);
      double n = static_cast<double>(w) * h;
      double sum_a = 0, sum_b = 0;
      for (int y = ty; y < ty + h; ++y)
        for (int x = tx; x < tx + w; ++x) {
          sum_a += a.at(x, y);
          sum_b += b.at(x, y);
        }
      double mu_a = sum_a / n, mu_b = sum_b / n;
      double var_a = 0, var_b = 0, cov = 0;
      for (int y = ty; y < ty + h; ++y)
        for (int x = tx; x < tx + w; ++x) {
          double da = a.at(x, y) - mu_a;
          double db = b.at(x, y) - mu_b;
          var_a += da * da;
          var_b += db * db;
          cov += da * db;
        }
      var_a /= n;
      var_b /= n;
      cov /= n;
      double score = ((2.0 * mu_a * mu_b + C1) * (2.0 * cov + C2)) /
                     ((mu_a * mu_a + mu_b * mu_b + C1) * (var_a + var_b + C2));
      total += score;
      ++windows;
    }
  }
  return windows == 0 ? 0.0 : total / windows;
}

GrayImage mean_pool2(const GrayImage& src) {
  GrayImage out = make_image(src.width / 2, src.height / 2);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x)
      out.at(x, y) = 0.25 * (src.at(2 * x, 2 * y) + src.at(2 * x + 1, 2 * y) +
                             src.at(2 * x, 2 * y + 1) + src.at(2 * x + 1, 2 * y + 1));
  return out;
}

}  // namespace

double psnr(const GrayImage& a, const GrayImage& b) {
  require_same_size(a, b);
  double mse = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    double d = a.pixels[i] - b.pixels[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.pixels.size());
  if (mse == 0.0) return 99.0;
  return std::min(99.0, 10.0 * std::log10(1.0 / mse));
}

double ssim(const GrayImage& a, const GrayImage& b, SsimMode mode) {
  require_same_size(a, b);
  if (mode == SsimMode::Single) return ssim_single(a, b);

  if (std::min(a.width, a.height) < 32)
    raise(ErrorCode::TooSmall, "MultiScale ssim needs min side >= 32, got " +
                                   std::to_string(std::min(a.width, a.height)));
  GrayImage la = a, lb = b;
  double product = 1.0;
  for (int level = 0; level < 3; ++level) {
    if (level > 0) {
      la = mean_pool2(la);
      lb = mean_pool2(lb);
    }
    product *= ssim_single(la, lb);
  }
  return std::cbrt(product);
}

// ---------------------------------------------------------------------------
// Evaluation harness

namespace {

json unavailable_fields(bool image) {
  json fields;
  if (image) {
    for (const char* k : {"is", "fid", "kid", "clip_fid", "lpips", "cmmd"}) fields[k] = "unavailable";
  } else {
    fields["bertscore"] = "unavailable";
    fields["gpt_score"] = "unavailable";
  }
  return fields;
}

}  // namespace

json eval_directories(const fs::path& golden_dir, const fs::path& actual_dir,
                      const fs::path& report_path) {
  if (!fs::exists(golden_dir)) raise(ErrorCode::Io, "golden dir absent: " + golden_dir.string());
  if (!fs::exists(actual_dir)) raise(ErrorCode::Io, "actual dir absent: " + actual_dir.string());

  std::map<std::string, fs::path> golden_files;
  for (const auto& entry : fs::recursive_directory_iterator(golden_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    if (ext != ".md" && ext != ".pgm") continue;
    golden_files[fs::relative(entry.path(), golden_dir).generic_string()] = entry.path();
  }

  json pairs = json::array();
  double sum_meteor = 0, sum_ssim = 0, sum_msssim = 0, sum_psnr = 0;
  int n_meteor = 0, n_ssim = 0, n_msssim = 0, n_missing = 0;

  for (const auto& [rel, golden_path] : golden_files) {
    fs::path actual_path = actual_dir / rel;
    bool image = golden_path.extension() == ".pgm";
    json entry = unavailable_fields(image);
    entry["name"] = rel;
    entry["kind"] = image ? "pgm" : "md";
    if (!fs::exists(actual_path)) {
      entry["status"] = "missing_actual";
      ++n_missing;
      pairs.push_back(entry);
      continue;
    }
    entry["status"] = "ok";
    if (image) {
      GrayImage g = read_pgm(golden_path);
      GrayImage c = read_pgm(actual_path);
      if (g.width != c.width || g.height != c.height) {
        entry["status"] = "size_mismatch";
        pairs.push_back(entry);
        continue;
      }
      double p = psnr(g, c);
      double s = ssim(g, c, SsimMode::Single);
      entry["psnr"] = p;
      entry["ssim"] = s;
      sum_psnr += p;
      sum_ssim += s;
      ++n_ssim;
      if (std::min(g.width, g.height) >= 32) {
        double ms = ssim(g, c, SsimMode::MultiScale);
        entry["ms_ssim"] = ms;
        sum_msssim += ms;
        ++n_msssim;
      } else {
        entry["ms_ssim"] = "unavailable";
      }
    } else {
      std::string golden_text = read_file(golden_path);
      std::string actual_text = read_file(actual_path);
      double score = (trim(golden_text).empty() || trim(actual_text).empty())
                         ? 0.0
                         : meteor_score(actual_text, golden_text);
      entry["meteor"] = score;
      entry["meteor_x100"] = std::round(score * 10000.0) / 100.0;
      sum_meteor += score;
      ++n_meteor;
    }
    pairs.push_back(entry);
  }

  // chart pass@1 from run reports found under the actual tree
  std::vector<bool> render_outcomes;
  for (const auto& entry : fs::recursive_directory_iterator(actual_dir)) {
    if (!entry.is_regular_file() || entry.path().filename() != "report.json") continue;
    try {
      json report = json::parse(read_file(entry.path()));
      if (report.contains("render") && report["render"].contains("success"))
        render_outcomes.push_back(report["render"]["success"].get<bool>());
    } catch (const json::exception&) {
      // unreadable reports are simply skipped
    }
  }

  json summary;
  summary["pairs_total"] = golden_files.size();
  summary["pairs_missing"] = n_missing;
  summary["mean_meteor"] = n_meteor ? json(sum_meteor / n_meteor) : json("unavailable");
  summary["mean_ssim"] = n_ssim ? json(sum_ssim / n_ssim) : json("unavailable");
  summary["mean_ms_ssim"] = n_msssim ? json(sum_msssim / n_msssim) : json("unavailable");
  summary["mean_psnr"] = n_ssim ? json(sum_psnr / n_ssim) : json("unavailable");
  summary["pass_at_1"] =
      render_outcomes.empty() ? json("unavailable") : json(pass_at_1(render_outcomes));

  json report;
  report["pairs"] = pairs;
  report["summary"] = summary;
  if (!report_path.empty()) write_file(report_path, report.dump(2) + "\n");
  return report;
}

}  // namespace pulse
