#include "core/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

#include "core/error.hpp"
#include "core/io.hpp"
#include "core/linechart.hpp"
#include "core/metrics.hpp"
#include "core/mindmap.hpp"
#include "core/text.hpp"

namespace pulse {

namespace fs = std::filesystem;
using nlohmann::json;

const char* intent_name(Intent intent) {
  return intent == Intent::MethodTracking ? "method_tracking" : "experimental_analysis";
}

Intent classify_intent(const std::string& raw, Backend* backend, const PromptSet& prompts,
                       const std::string& model) {
  if (trim(raw).empty()) raise(ErrorCode::AmbiguousIntent, "empty instruction");

  for (const char* keyword : {"method", "evolution", "evolve", "motivation"})
    if (contains_ci(raw, keyword)) return Intent::MethodTracking;
  for (const char* keyword : {"result", "benchmark", "metric", "experiment", "compare"})
    if (contains_ci(raw, keyword)) return Intent::ExperimentalAnalysis;

  if (backend != nullptr) {
    ChatRequest request;
    request.messages.push_back({"user", render_template(prompts.intent, {{"instruction", raw}})});
    request.model = model;
    request.max_tokens = 16;
    std::string reply = to_lower(backend->complete(request));
    bool says_method = reply.find("method") != std::string::npos;
    bool says_experiment = reply.find("experiment") != std::string::npos;
    if (says_method && !says_experiment) return Intent::MethodTracking;
    if (says_experiment && !says_method) return Intent::ExperimentalAnalysis;
    raise(ErrorCode::AmbiguousIntent, "backend reply did not name a single intent: " + reply);
  }
  raise(ErrorCode::AmbiguousIntent, "no keyword matched and no backend configured: " + raw);
}

ExtractedDocument extract_document(const Document& doc) {
  ExtractedDocument xdoc;
  xdoc.doc_id = doc.id;
  xdoc.published_at = doc.published_at;
  if (const Section* abstract = doc.find_section(SectionKind::Abstract))
    xdoc.abstract = trim(abstract->body);
  if (const Section* intro = doc.find_section(SectionKind::Introduction))
    xdoc.introduction = trim(intro->body);
  if (xdoc.abstract.empty() && xdoc.introduction.empty())
    raise(ErrorCode::ParseFailure,
          "document '" + doc.id + "' has neither abstract nor introduction");

  TableExtraction extraction = extract_tables(doc.full_body());
  for (auto& table : extraction.tables) table.source_doc = doc.id;
  xdoc.tables = std::move(extraction.tables);
  xdoc.notes = std::move(extraction.notes);
  xdoc.no_tables = xdoc.tables.empty();
  xdoc.references = doc.references;
  return xdoc;
}

json RunReport::to_json() const {
  json failures = json::array();
  for (const auto& f : failed) {
    json fj;
    fj["doc_id"] = f.doc_id;
    fj["error"] = f.error;
    failures.push_back(fj);
  }
  json render;
  render["success"] = render_success;
  if (!render_error.empty()) render["error"] = render_error;
  json backend;
  backend["mode"] = backend_mode;
  backend["requests"] = backend_requests;
  backend["network_attempts"] = network_attempts;
  json out;
  out["cluster_id"] = cluster_id;
  out["intent"] = intent_name(intent);
  out["succeeded"] = succeeded;
  out["failed"] = failures;
  out["render"] = render;
  out["artifacts"] = artifacts;
  out["elapsed_ms"] = elapsed_ms;
  out["backend"] = backend;
  return out;
}

namespace {

struct PerDoc {
  std::string doc_id;
  std::optional<ExtractedDocument> xdoc;
  std::string error;
  std::vector<ParseNote> notes;
};

// bounded worker pool; results land at fixed indices so completion order
// cannot influence anything downstream
template <typename Fn>
void parallel_for(std::size_t count, int parallelism, Fn&& fn) {
  if (count == 0) return;
  int workers = std::max(1, std::min<int>(parallelism, static_cast<int>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : threads) t.join();
}

json parse_report_json(const std::vector<PerDoc>& docs) {
  json per_doc = json::array();
  for (const auto& d : docs) {
    json notes = json::array();
    for (const auto& note : d.notes) {
      json nj;
      nj["kind"] = note.kind;
      nj["detail"] = note.detail;
      notes.push_back(nj);
    }
    json dj;
    dj["doc_id"] = d.doc_id;
    dj["notes"] = notes;
    per_doc.push_back(dj);
  }
  json out;
  out["documents"] = per_doc;
  return out;
}

}  // namespace

RunReport run(const Instruction& instruction, const Corpus& corpus, Backend& backend,
              const RunOptions& options) {
  auto started = std::chrono::steady_clock::now();

  const Cluster* cluster = corpus.find_cluster(instruction.cluster_id);
  if (cluster == nullptr)
    raise(ErrorCode::NotFound, "unknown cluster '" + instruction.cluster_id + "'");
  if (cluster->doc_ids.empty())
    raise(ErrorCode::EmptyCluster, "cluster '" + cluster->id + "' lists no documents");

  // deterministic processing order regardless of manifest ordering
  std::vector<std::string> doc_ids = cluster->doc_ids;
  std::sort(doc_ids.begin(), doc_ids.end());

  RunReport report;
  report.cluster_id = cluster->id;
  report.intent = instruction.intent;
  report.backend_mode = backend_mode_name(backend.config().mode);

  PromptSet prompts = PromptSet::from_dir(options.prompt_dir);

  fs::path out_dir = fs::path(options.out_dir) / cluster->id / intent_name(instruction.intent);
  fs::create_directories(out_dir);

  mindmap::ChainContext ctx;
  ctx.cluster_label = cluster->label;
  for (const auto& id : doc_ids) {
    const Document* doc = corpus.find_document(id);
    if (doc != nullptr) ctx.titles[id] = doc->title;
  }

  std::vector<PerDoc> per_doc(doc_ids.size());
  std::vector<std::optional<mindmap::MotivationMethodPair>> pairs(doc_ids.size());
  std::vector<std::optional<linechart::ExperimentRecord>> records(doc_ids.size());

  const bool method_path = instruction.intent == Intent::MethodTracking;
  mindmap::ExtractOptions mmap_options;
  mmap_options.model = options.mmap_model;
  mmap_options.repair_limit = options.repair_limit;
  mmap_options.prompts = prompts;
  linechart::ExtractOptions lchart_options;
  lchart_options.model = options.lchart_model;
  lchart_options.repair_limit = options.repair_limit;
  lchart_options.prompts = prompts;

  parallel_for(doc_ids.size(), options.parallelism, [&](std::size_t i) {
    PerDoc& slot = per_doc[i];
    slot.doc_id = doc_ids[i];
    const Document* doc = corpus.find_document(doc_ids[i]);
    if (doc == nullptr) {
      slot.error = "document missing from corpus";
      return;
    }
    try {
      slot.xdoc = extract_document(*doc);
      slot.notes = slot.xdoc->notes;
      if (method_path) {
        pairs[i] = mindmap::extract_pair(*slot.xdoc, backend, mmap_options);
      } else {
        const Table& table = linechart::select_main_table(*slot.xdoc);
        records[i] = linechart::extract_record(*slot.xdoc, table, backend, lchart_options);
      }
    } catch (const Error& e) {
      slot.error = e.what();
    }
  });

  for (std::size_t i = 0; i < per_doc.size(); ++i) {
    if (!per_doc[i].error.empty())
      report.failed.push_back({per_doc[i].doc_id, per_doc[i].error});
  }

  mindmap::RenderOptions render_options;
  render_options.raster_width = options.raster_width;
  render_options.raster_height = options.raster_height;

  if (method_path) {
    std::vector<mindmap::MotivationMethodPair> collected;
    for (auto& p : pairs)
      if (p) collected.push_back(std::move(*p));
    mindmap::MethodChain chain = mindmap::sort_chain(std::move(collected), cluster->id);
    for (const auto& p : chain.pairs) report.succeeded.push_back(p.doc_id);

    std::string markdown = mindmap::emit_chain_markdown(chain, ctx);
    write_file(out_dir / "chain.md", markdown);
    report.artifacts.push_back((fs::path(cluster->id) / intent_name(instruction.intent) /
                                "chain.md").generic_string());
    try {
      mindmap::Figure figure = mindmap::render_mindmap(chain, ctx, render_options);
      write_file(out_dir / "figure.svg", figure.svg);
      write_pgm(out_dir / "figure.pgm", figure.raster);
      report.render_success = true;
      report.artifacts.push_back((fs::path(cluster->id) / intent_name(instruction.intent) /
                                  "figure.svg").generic_string());
      report.artifacts.push_back((fs::path(cluster->id) / intent_name(instruction.intent) /
                                  "figure.pgm").generic_string());
    } catch (const Error& e) {
      report.render_error = e.what();
    }
  } else {
    for (std::size_t i = 0; i < records.size(); ++i)
      if (records[i])
        for (const auto& note : records[i]->notes) per_doc[i].notes.push_back(note);
    std::vector<linechart::ExperimentRecord> collected;
    for (auto& r : records)
      if (r) collected.push_back(std::move(*r));
    for (const auto& r : collected) report.succeeded.push_back(r.doc_id);

    try {
      linechart::ExperimentChain chain = linechart::align_chain(collected, cluster->id);
      write_file(out_dir / "echain.json", echain_to_json(chain).dump(2) + "\n");
      report.artifacts.push_back((fs::path(cluster->id) / intent_name(instruction.intent) /
                                  "echain.json").generic_string());
      linechart::ChartSpec spec = linechart::build_chart_spec(chain, cluster->label);
      linechart::Figure figure = linechart::render_linechart(spec, render_options);
      write_file(out_dir / "figure.svg", figure.svg);
      write_pgm(out_dir / "figure.pgm", figure.raster);
      report.render_success = true;
      report.artifacts.push_back((fs::path(cluster->id) / intent_name(instruction.intent) /
                                  "figure.svg").generic_string());
      report.artifacts.push_back((fs::path(cluster->id) / intent_name(instruction.intent) /
                                  "figure.pgm").generic_string());
    } catch (const Error& e) {
      report.render_error = e.what();
    }
  }

  write_file(out_dir / "parse_report.json", parse_report_json(per_doc).dump(2) + "\n");
  report.artifacts.push_back((fs::path(cluster->id) / intent_name(instruction.intent) /
                              "parse_report.json").generic_string());

  report.backend_requests = backend.stats().requests.load();
  report.network_attempts = backend.stats().network_attempts.load();

  auto elapsed = std::chrono::steady_clock::now() - started;
  bool deterministic = options.zero_timings || backend.config().mode == BackendMode::Replay;
  report.elapsed_ms =
      deterministic ? 0 : std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();

  std::sort(report.artifacts.begin(), report.artifacts.end());
  write_file(out_dir / "report.json", report.to_json().dump(2) + "\n");
  return report;
}

Config Config::load(const std::string& path) {
  Config config;
  std::string content = read_file(path);
  int line_no = 0;
  for (const auto& raw : split_lines_keep_ends(content)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == '[') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      raise(ErrorCode::Config,
            path + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    auto as_int = [&](const std::string& v) {
      try {
        return std::stoi(v);
      } catch (...) {
        raise(ErrorCode::Config, path + ": key '" + key + "' needs an integer, got '" + v + "'");
      }
    };
    if (key == "endpoint") config.endpoint = value;
    else if (key == "manifest") config.manifest = value;
    else if (key == "transcript") config.transcript = value;
    else if (key == "prompt_dir") config.prompt_dir = value;
    else if (key == "mmap_model") config.mmap_model = value;
    else if (key == "lchart_model") config.lchart_model = value;
    else if (key == "plan_model") config.plan_model = value;
    else if (key == "parallelism") config.parallelism = as_int(value);
    else if (key == "repair_limit") config.repair_limit = as_int(value);
    else if (key == "raster_width") config.raster_width = as_int(value);
    else if (key == "raster_height") config.raster_height = as_int(value);
    else raise(ErrorCode::Config, path + ": unknown key '" + key + "'");
  }
  return config;
}

}  // namespace pulse
