#include "core/linechart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "core/error.hpp"
#include "core/render/draw.hpp"
#include "core/text.hpp"

namespace pulse::linechart {

using nlohmann::json;

const char* direction_name(Direction d) {
  return d == Direction::HigherBetter ? "higher" : "lower";
}

Direction default_direction(const std::string& metric) {
  std::string m = to_lower(metric);
  for (const char* keyword : {"fid", "lpips", "kid", "cmmd"})
    if (m.find(keyword) != std::string::npos) return Direction::LowerBetter;
  return Direction::HigherBetter;
}

namespace {

constexpr const char* kMetricKeywords[] = {"accuracy", "f1",  "bleu",   "meteor", "psnr",
                                           "ssim",     "fid", "pass@1", "top-1",  "map"};

int table_score(const Table& table) {
  int numeric_cells = 0;
  for (const auto& row : table.rows)
    for (const auto& cell : row)
      if (cell.numeric) ++numeric_cells;
  bool keyword_hit = false;
  for (const auto& header : table.headers) {
    for (const char* keyword : kMetricKeywords) {
      if (contains_ci(header, keyword)) {
        keyword_hit = true;
        break;
      }
    }
    if (keyword_hit) break;
  }
  return numeric_cells + (keyword_hit ? 10 : 0);
}

}  // namespace

const Table& select_main_table(const ExtractedDocument& xdoc) {
  if (xdoc.tables.empty())
    raise(ErrorCode::NoTable, "document '" + xdoc.doc_id + "' has no tables");
  const Table* best = &xdoc.tables.front();
  int best_score = table_score(*best);
  for (const auto& table : xdoc.tables) {
    int score = table_score(table);
    if (score > best_score) {  // ties keep the earliest ordinal
      best = &table;
      best_score = score;
    }
  }
  return *best;
}

std::string build_extract_prompt(const Table& table,
                                 const std::vector<ReferenceEntry>& references,
                                 const PromptSet& prompts) {
  std::string refs;
  for (const auto& ref : references)
    refs += "[" + std::to_string(ref.index) + "] " + ref.raw + "\n";
  if (refs.empty()) refs = "(none)\n";
  return render_template(prompts.lchart_extract,
                         {{"table", serialize_table(table)}, {"references", refs}});
}

namespace {

struct ParsedRecord {
  json payload;
  std::vector<std::string> violations;
};

ParsedRecord parse_record_reply(const std::string& reply, const Table& table) {
  ParsedRecord out;
  std::string block;
  bool in_fence = false, closed = false;
  for (const auto& raw : split_lines_keep_ends(reply)) {
    std::string line = trim(raw);
    if (line.rfind("```", 0) == 0) {
      if (in_fence) {
        closed = true;
        break;
      }
      in_fence = true;
      continue;
    }
    if (in_fence) block += raw;
  }
  if (!in_fence || !closed) {
    out.violations.push_back("reply must contain one fenced JSON block");
    return out;
  }
  try {
    out.payload = json::parse(block);
  } catch (const json::exception& e) {
    out.violations.push_back(std::string("fenced block is not valid JSON: ") + e.what());
    return out;
  }
  const json& p = out.payload;
  if (!p.is_object()) {
    out.violations.push_back("reply JSON must be an object");
    return out;
  }
  if (!p.contains("models") || !p["models"].is_array() || p["models"].empty()) {
    out.violations.push_back("'models' must be a nonempty array of strings");
  } else {
    for (const auto& m : p["models"])
      if (!m.is_string()) out.violations.push_back("'models' entries must be strings");
  }
  if (!p.contains("observations") || !p["observations"].is_array()) {
    out.violations.push_back("'observations' must be an array");
  } else {
    std::set<std::string> model_names;
    if (p.contains("models") && p["models"].is_array())
      for (const auto& m : p["models"])
        if (m.is_string()) model_names.insert(m.get<std::string>());
    int rows = static_cast<int>(table.rows.size());
    int cols = static_cast<int>(table.headers.size());
    for (const auto& obs : p["observations"]) {
      if (!obs.is_object() || !obs.contains("row") || !obs.contains("col") ||
          !obs.contains("model") || !obs.contains("metric") ||
          !obs["row"].is_number_integer() || !obs["col"].is_number_integer() ||
          !obs["model"].is_string() || !obs["metric"].is_string()) {
        out.violations.push_back("every observation needs integer row/col and string model/metric");
        continue;
      }
      int row = obs["row"].get<int>(), col = obs["col"].get<int>();
      if (row < 0 || row >= rows || col < 0 || col >= cols)
        out.violations.push_back("observation cell (" + std::to_string(row) + "," +
                                 std::to_string(col) + ") outside the table");
      if (!model_names.count(obs["model"].get<std::string>()))
        out.violations.push_back("observation model '" + obs["model"].get<std::string>() +
                                 "' not listed in 'models'");
      if (obs.contains("direction")) {
        std::string d = obs["direction"].is_string() ? obs["direction"].get<std::string>() : "";
        if (d != "higher" && d != "lower")
          out.violations.push_back("direction must be 'higher' or 'lower'");
      }
      if (obs.contains("dataset") && !obs["dataset"].is_string())
        out.violations.push_back("dataset must be a string when present");
    }
  }
  if (p.contains("baselines")) {
    if (!p["baselines"].is_array()) {
      out.violations.push_back("'baselines' must be an array");
    } else {
      for (const auto& b : p["baselines"]) {
        if (!b.is_object() || !b.contains("model") || !b.contains("reference") ||
            !b["model"].is_string() || !b["reference"].is_number_integer())
          out.violations.push_back("every baseline needs a string model and integer reference");
      }
    }
  }
  return out;
}

}  // namespace

ChatRequest extraction_request(const Table& table, const std::vector<ReferenceEntry>& references,
                               const ExtractOptions& options) {
  ChatRequest request;
  request.messages.push_back({"user", build_extract_prompt(table, references, options.prompts)});
  request.model = options.model;
  request.max_tokens = options.max_tokens;
  return request;
}

ExperimentRecord extract_record(const ExtractedDocument& xdoc, const Table& table,
                                Backend& backend, const ExtractOptions& options) {
  ChatRequest request = extraction_request(table, xdoc.references, options);
  const std::string prompt = request.messages.front().content;
  int violations_seen = 0;

  while (true) {
    std::string reply = backend.complete(request);

    ParsedRecord parsed = parse_record_reply(reply, table);
    if (!parsed.violations.empty()) {
      ++violations_seen;
      std::string joined;
      for (const auto& v : parsed.violations) {
        if (!joined.empty()) joined += "; ";
        joined += v;
      }
      if (violations_seen >= options.repair_limit)
        raise(ErrorCode::ExtractionFailed,
              "doc '" + xdoc.doc_id + "': " + std::to_string(violations_seen) +
                  " consecutive schema violations (" + joined + ")");
      request.messages.front().content =
          prompt + render_template(options.prompts.repair_suffix, {{"violation", joined}});
      continue;
    }

    ExperimentRecord record;
    record.doc_id = xdoc.doc_id;
    record.table = table;
    record.host_year = xdoc.published_at.year;
    const json& p = parsed.payload;
    for (const auto& m : p["models"]) record.models.push_back(m.get<std::string>());

    for (const auto& obs : p["observations"]) {
      int row = obs["row"].get<int>(), col = obs["col"].get<int>();
      const TableCell& cell = table.rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
      if (!cell.numeric) {
        record.notes.push_back({"NoNumericCell",
                                "cell (" + std::to_string(row) + "," + std::to_string(col) +
                                    ") of table " + std::to_string(table.ordinal) + " is '" +
                                    cell.raw + "'"});
        continue;
      }
      MetricObservation mo;
      mo.model = obs["model"].get<std::string>();
      mo.metric = obs["metric"].get<std::string>();
      if (obs.contains("dataset")) mo.dataset = obs["dataset"].get<std::string>();
      mo.value = *cell.numeric;
      mo.direction = obs.contains("direction")
                         ? (obs["direction"].get<std::string>() == "lower"
                                ? Direction::LowerBetter
                                : Direction::HigherBetter)
                         : default_direction(mo.metric);
      mo.source = Provenance{xdoc.doc_id, table.ordinal, row, col};
      record.observations.push_back(std::move(mo));
    }

    if (p.contains("baselines")) {
      for (const auto& b : p["baselines"]) {
        std::string model = b["model"].get<std::string>();
        int ref_index = b["reference"].get<int>();
        const ReferenceEntry* entry = nullptr;
        for (const auto& ref : xdoc.references)
          if (ref.index == ref_index) {
            entry = &ref;
            break;
          }
        if (entry == nullptr) {
          record.notes.push_back({"UnknownReferenceIndex",
                                  "baseline '" + model + "' cites [" +
                                      std::to_string(ref_index) + "] which does not exist"});
          continue;
        }
        std::optional<int> year = entry->year ? entry->year : resolve_reference_year(entry->raw);
        if (!year) {
          record.notes.push_back({"UnresolvedReferenceYear",
                                  "baseline '" + model + "' reference [" +
                                      std::to_string(ref_index) + "] has no resolvable year"});
          continue;
        }
        record.baseline_years[model] = *year;
      }
    }
    return record;
  }
}

ExperimentChain align_chain(const std::vector<ExperimentRecord>& records,
                            const std::string& cluster_id) {
  if (records.empty()) raise(ErrorCode::EmptyChain, "align_chain over no records");

  ExperimentChain chain;
  chain.cluster_id = cluster_id;
  AlignStats& stats = chain.stats;

  struct Key {
    std::string metric;
    std::string dataset;
    bool operator<(const Key& other) const {
      if (metric != other.metric) return metric < other.metric;
      return dataset < other.dataset;
    }
  };
  struct Candidate {
    TrendPoint point;
  };
  std::map<Key, TrendSeries> groups;

  for (const auto& record : records) {
    for (const auto& obs : record.observations) {
      ++stats.total;
      if (!std::isfinite(obs.value)) {
        ++stats.skipped;
        continue;
      }
      Key key{obs.metric, obs.dataset.value_or("default")};
      auto [it, inserted] = groups.try_emplace(key);
      TrendSeries& series = it->second;
      if (inserted) {
        series.metric = key.metric;
        series.dataset = key.dataset;
        series.direction = obs.direction;
      }
      auto baseline = record.baseline_years.find(obs.model);
      int year = baseline != record.baseline_years.end() ? baseline->second : record.host_year;

      TrendPoint point;
      point.year = year;
      point.model = obs.model;
      point.value = obs.value;
      point.provenance.push_back(obs.source);
      series.points.push_back(std::move(point));
    }
  }
  if (stats.total == 0)
    raise(ErrorCode::EmptyChain, "no observations extracted for cluster '" + cluster_id + "'");

  auto better = [](const TrendSeries& series, double a, double b) {
    return series.direction == Direction::HigherBetter ? a > b : a < b;
  };

  for (auto& [key, series] : groups) {
    // same (model, year) from several papers: keep the better value and
    // every contributing provenance
    std::map<std::pair<std::string, int>, TrendPoint> by_model_year;
    for (auto& point : series.points) {
      auto k = std::make_pair(point.model, point.year);
      auto it = by_model_year.find(k);
      if (it == by_model_year.end()) {
        by_model_year.emplace(k, std::move(point));
        continue;
      }
      ++stats.deduped;
      TrendPoint& kept = it->second;
      if (better(series, point.value, kept.value)) {
        for (const auto& prov : kept.provenance) point.provenance.push_back(prov);
        kept = std::move(point);
      } else {
        for (const auto& prov : point.provenance) kept.provenance.push_back(prov);
      }
    }
    // distinct models colliding on a year: one point per year keeps the
    // series strictly increasing; the better value wins, ties by model name
    std::map<int, TrendPoint> by_year;
    for (auto& [k, point] : by_model_year) {
      auto it = by_year.find(point.year);
      if (it == by_year.end()) {
        by_year.emplace(point.year, std::move(point));
        continue;
      }
      ++stats.deduped;
      TrendPoint& kept = it->second;
      if (better(series, point.value, kept.value) ||
          (point.value == kept.value && point.model < kept.model)) {
        kept = std::move(point);
      }
    }
    series.points.clear();
    for (auto& [year, point] : by_year) {
      series.points.push_back(std::move(point));
      ++stats.kept;
    }
    // std::map iteration already yields ascending years
  }

  for (auto& [key, series] : groups) chain.series.push_back(std::move(series));
  return chain;
}

json echain_to_json(const ExperimentChain& chain) {
  json series = json::array();
  for (const auto& s : chain.series) {
    json points = json::array();
    for (const auto& p : s.points) {
      json provenance = json::array();
      for (const auto& prov : p.provenance) {
        json pj;
        pj["doc"] = prov.doc_id;
        pj["table"] = prov.table_ordinal;
        pj["row"] = prov.row;
        pj["col"] = prov.col;
        provenance.push_back(pj);
      }
      json point;
      point["year"] = p.year;
      point["model"] = p.model;
      point["value"] = p.value;
      point["provenance"] = provenance;
      points.push_back(point);
    }
    json sj;
    sj["metric"] = s.metric;
    sj["dataset"] = s.dataset;
    sj["direction"] = direction_name(s.direction);
    sj["points"] = points;
    series.push_back(sj);
  }
  json out;
  out["cluster_id"] = chain.cluster_id;
  out["series"] = series;
  json stats;
  stats["total"] = chain.stats.total;
  stats["kept"] = chain.stats.kept;
  stats["deduped"] = chain.stats.deduped;
  stats["skipped"] = chain.stats.skipped;
  out["stats"] = stats;
  return out;
}

namespace {

std::string series_label(const TrendSeries& s) {
  std::string label = s.metric;
  if (s.dataset != "default") label += " (" + s.dataset + ")";
  label += s.direction == Direction::HigherBetter ? "↑" : "↓";
  return label;
}

std::string spec_series_label(const ChartSeriesSpec& s) {
  return s.label;
}

}  // namespace

ChartSpec build_chart_spec(const ExperimentChain& chain, const std::string& title) {
  if (chain.series.empty())
    raise(ErrorCode::EmptyChain, "chart spec over a chain with zero series");

  ChartSpec spec;
  spec.title = title;
  int year_min = std::numeric_limits<int>::max(), year_max = std::numeric_limits<int>::min();
  double v_min = std::numeric_limits<double>::infinity();
  double v_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : chain.series) {
    ChartSeriesSpec cs;
    cs.label = series_label(s);
    cs.direction = s.direction;
    cs.points = s.points;
    for (const auto& p : s.points) {
      year_min = std::min(year_min, p.year);
      year_max = std::max(year_max, p.year);
      v_min = std::min(v_min, p.value);
      v_max = std::max(v_max, p.value);
    }
    spec.series.push_back(std::move(cs));
  }
  if (year_min > year_max) raise(ErrorCode::EmptyChain, "chart spec over series with no points");
  spec.year_min = year_min;
  spec.year_max = year_max;
  double span = v_max - v_min;
  if (span == 0.0) span = 1.0;
  spec.y_min = v_min - 0.05 * span;
  spec.y_max = v_max + 0.05 * span;

  bool uniform = true;
  for (std::size_t i = 1; i < spec.series.size(); ++i)
    if (spec.series[i].label != spec.series[0].label) uniform = false;
  spec.y_label = uniform ? spec.series[0].label : "value";
  return spec;
}

Figure render_linechart(const ChartSpec& spec, const RenderOptions& options) {
  if (spec.series.empty()) raise(ErrorCode::EmptyChain, "render over an empty chart spec");
  if (!std::isfinite(spec.y_min) || !std::isfinite(spec.y_max) || spec.y_max <= spec.y_min)
    raise(ErrorCode::InvalidValue, "chart y-range is not finite and increasing");
  for (const auto& s : spec.series)
    for (const auto& p : s.points)
      if (!std::isfinite(p.value))
        raise(ErrorCode::InvalidValue, "non-finite value for model '" + p.model + "'");

  const int W = options.raster_width, H = options.raster_height;
  const int left = 84, right = 24, top = 40, bottom = 48;
  const int plot_w = W - left - right, plot_h = H - top - bottom;

  auto map_x = [&](int year) {
    if (spec.year_max == spec.year_min) return left + plot_w / 2;
    return left + static_cast<int>(std::llround(
                      static_cast<double>(year - spec.year_min) * plot_w /
                      (spec.year_max - spec.year_min)));
  };
  auto map_y = [&](double value) {
    return top + plot_h -
           static_cast<int>(std::llround((value - spec.y_min) / (spec.y_max - spec.y_min) * plot_h));
  };

  render::Canvas canvas(W, H);
  render::SvgWriter svg(W, H);

  static const double kGrays[] = {0.0, 0.4, 0.6, 0.75};
  static const char* kHexes[] = {"#000000", "#666666", "#999999", "#bfbfbf"};

  // title and y-axis label
  canvas.text((W - render::Canvas::text_width(spec.title, 2)) / 2, 8, spec.title, 2, 0.0);
  svg.text(W / 2, 8 + 16, spec.title, 16, "middle");
  canvas.text(8, top - 18, spec.y_label, 1, 0.0);
  svg.text(8, top - 18 + 8, spec.y_label, 10);

  // axes
  canvas.line(left, top, left, top + plot_h, 0.0);
  canvas.line(left, top + plot_h, left + plot_w, top + plot_h, 0.0);
  svg.line(left, top, left, top + plot_h, "#000000");
  svg.line(left, top + plot_h, left + plot_w, top + plot_h, "#000000");

  // y ticks
  for (int i = 0; i <= 4; ++i) {
    double v = spec.y_min + (spec.y_max - spec.y_min) * i / 4.0;
    int py = map_y(v);
    canvas.line(left - 4, py, left, py, 0.0);
    svg.line(left - 4, py, left, py, "#000000");
    std::string label = format_fixed(v, 2);
    canvas.text(left - 8 - render::Canvas::text_width(label, 1), py - 4, label, 1, 0.0);
    svg.text(left - 8, py + 4, label, 10, "end");
  }

  // x ticks: every year, labels thinned when the span is wide
  int n_years = spec.year_max - spec.year_min + 1;
  int label_step = n_years <= 16 ? 1 : (n_years + 15) / 16;
  for (int year = spec.year_min; year <= spec.year_max; ++year) {
    int px = map_x(year);
    canvas.line(px, top + plot_h, px, top + plot_h + 4, 0.0);
    svg.line(px, top + plot_h, px, top + plot_h + 4, "#000000");
    if ((year - spec.year_min) % label_step != 0) continue;
    std::string label = std::to_string(year);
    canvas.text(px - render::Canvas::text_width(label, 1) / 2, top + plot_h + 8, label, 1, 0.0);
    svg.text(px, top + plot_h + 8 + 10, label, 10, "middle");
  }

  // series
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& series = spec.series[s];
    double gray = kGrays[s % 4];
    const char* hex = kHexes[s % 4];
    std::vector<std::pair<int, int>> pts;
    pts.reserve(series.points.size());
    for (const auto& p : series.points) pts.emplace_back(map_x(p.year), map_y(p.value));
    if (pts.size() >= 2) {
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        canvas.line(pts[i].first, pts[i].second, pts[i + 1].first, pts[i + 1].second, gray);
      }
      svg.polyline(pts, hex);
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      canvas.disc(pts[i].first, pts[i].second, 4, gray);
      svg.circle(pts[i].first, pts[i].second, 4, hex);
      const std::string& model = series.points[i].model;
      canvas.text(pts[i].first + 7, pts[i].second - 10, model, 1, 0.0);
      svg.text(pts[i].first + 7, pts[i].second - 10 + 8, model, 10);
    }
  }

  // legend, top-right inside the plot
  int legend_x = left + plot_w - 10;
  int legend_y = top + 8;
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const std::string label = spec_series_label(spec.series[s]);
    int text_w = render::Canvas::text_width(label, 1);
    int lx = legend_x - text_w;
    canvas.line(lx - 26, legend_y + 4, lx - 8, legend_y + 4, kGrays[s % 4]);
    canvas.text(lx, legend_y, label, 1, 0.0);
    svg.line(lx - 26, legend_y + 4, lx - 8, legend_y + 4, kHexes[s % 4], 2);
    svg.text(lx, legend_y + 8, label, 10);
    legend_y += 14;
  }

  Figure figure;
  figure.svg = svg.finish();
  figure.raster = canvas.image();
  return figure;
}

}  // namespace pulse::linechart
