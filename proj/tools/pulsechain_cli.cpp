// pulsechain command-line front end. Talks to the core exclusively through
// the shared-library C API.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "pulsechain/pulse.h"

namespace {

int fail(pulse_status status) {
  std::fprintf(stderr, "error (%s): %s\n", pulse_status_name(status), pulse_last_error());
  return 1;
}

void print_and_free(char* json) {
  if (json != nullptr) {
    std::fputs(json, stdout);
    pulse_string_free(json);
  }
}

struct BackendArgs {
  std::string mode = "replay";
  std::string endpoint;
  std::string transcript;
  int parallelism = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--backend", mode, "Backend mode: live, replay, or record")
        ->check(CLI::IsMember({"live", "replay", "record"}));
    cmd->add_option("--endpoint", endpoint, "Chat/embedding service base URL");
    cmd->add_option("--transcript", transcript, "Transcript JSONL for record/replay");
    cmd->add_option("--parallelism", parallelism, "Concurrent in-flight requests");
  }

  pulse_status open(pulse_backend** backend) const {
    pulse_backend_options options{};
    options.mode = mode.c_str();
    options.endpoint = endpoint.empty() ? nullptr : endpoint.c_str();
    options.transcript_path = transcript.empty() ? nullptr : transcript.c_str();
    options.parallelism = parallelism;
    return pulse_backend_open(&options, backend);
  }
};

// minimal pulse.toml reader; only the keys the CLI itself needs
void apply_config_file(const std::string& path, BackendArgs& backend, std::string& manifest,
                       std::string& prompt_dir) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr) return;
  char buf[4096];
  std::string content;
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) content.append(buf, n);
  std::fclose(f);

  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t eol = content.find('\n', pos);
    std::string line = content.substr(pos, eol == std::string::npos ? eol : eol - pos);
    pos = eol == std::string::npos ? content.size() + 1 : eol + 1;
    std::size_t eq = line.find('=');
    if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(0, 1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
      if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
      return s;
    };
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key == "endpoint" && backend.endpoint.empty()) backend.endpoint = value;
    else if (key == "transcript" && backend.transcript.empty()) backend.transcript = value;
    else if (key == "manifest" && manifest.empty()) manifest = value;
    else if (key == "prompt_dir" && prompt_dir.empty()) prompt_dir = value;
    else if (key == "parallelism" && backend.parallelism <= 0)
      backend.parallelism = std::atoi(value.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulsechain: research development chains from paper clusters"};
  app.require_subcommand(1);
  std::string config_path = "pulse.toml";
  app.add_option("--config", config_path, "Config file (pulse.toml-style key = value)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load a corpus manifest and report counts");
  std::string ingest_manifest;
  ingest->add_option("manifest", ingest_manifest, "Path to corpus.json")->required();
  bool ingest_graph = false;
  ingest->add_flag("--graph", ingest_graph, "Also print the citation graph");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Embed abstracts and regroup with K-Means");
  BackendArgs cluster_backend;
  cluster_backend.attach(cluster);
  std::string cluster_manifest, cluster_out = "clusters_out.json";
  std::string embed_model = "abstract-embedder";
  int k = 0;
  unsigned seed = 0;
  cluster->add_option("--manifest", cluster_manifest, "Path to corpus.json");
  cluster->add_option("--k", k, "Number of clusters")->required();
  cluster->add_option("--seed", seed, "RNG seed for centroid initialization");
  cluster->add_option("--out", cluster_out, "Output manifest path");
  cluster->add_option("--embed-model", embed_model, "Embedding model name");

  // run
  auto* run = app.add_subcommand("run", "Run one instruction over one cluster");
  BackendArgs run_backend;
  run_backend.attach(run);
  std::string run_manifest, run_cluster, ask, out_dir = "out", prompt_dir;
  run->add_option("--manifest", run_manifest, "Path to corpus.json");
  run->add_option("--cluster", run_cluster, "Cluster id")->required();
  run->add_option("--ask", ask, "User instruction")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--prompt-dir", prompt_dir, "Prompt template directory");

  // eval
  auto* eval = app.add_subcommand("eval", "Score actual artifacts against goldens");
  std::string golden_dir, actual_dir, eval_report = "eval_report.json";
  eval->add_option("--golden", golden_dir, "Golden artifact directory")->required();
  eval->add_option("--actual", actual_dir, "Actual artifact directory")->required();
  eval->add_option("--report", eval_report, "Report output path");

  CLI11_PARSE(app, argc, argv);

  if (ingest->parsed()) {
    pulse_corpus* corpus = nullptr;
    pulse_status status = pulse_corpus_load(ingest_manifest.c_str(), &corpus);
    if (status != PULSE_OK) return fail(status);
    char* summary = nullptr;
    status = pulse_corpus_summary(corpus, &summary);
    if (status != PULSE_OK) {
      pulse_corpus_free(corpus);
      return fail(status);
    }
    print_and_free(summary);
    if (ingest_graph) {
      char* graph = nullptr;
      status = pulse_corpus_citation_graph(corpus, &graph);
      if (status != PULSE_OK) {
        pulse_corpus_free(corpus);
        return fail(status);
      }
      print_and_free(graph);
    }
    pulse_corpus_free(corpus);
    return 0;
  }

  if (cluster->parsed()) {
    std::string prompt_unused;
    apply_config_file(config_path, cluster_backend, cluster_manifest, prompt_unused);
    if (cluster_manifest.empty()) {
      std::fprintf(stderr, "error: no manifest given (flag --manifest or config key)\n");
      return 1;
    }
    pulse_corpus* corpus = nullptr;
    pulse_status status = pulse_corpus_load(cluster_manifest.c_str(), &corpus);
    if (status != PULSE_OK) return fail(status);
    pulse_backend* backend = nullptr;
    status = cluster_backend.open(&backend);
    if (status != PULSE_OK) {
      pulse_corpus_free(corpus);
      return fail(status);
    }
    char* summary = nullptr;
    status = pulse_cluster_documents(corpus, backend, k, seed, embed_model.c_str(),
                                     cluster_out.c_str(), &summary);
    pulse_backend_free(backend);
    pulse_corpus_free(corpus);
    if (status != PULSE_OK) return fail(status);
    print_and_free(summary);
    return 0;
  }

  if (run->parsed()) {
    apply_config_file(config_path, run_backend, run_manifest, prompt_dir);
    if (run_manifest.empty()) {
      std::fprintf(stderr, "error: no manifest given (flag --manifest or config key)\n");
      return 1;
    }
    pulse_corpus* corpus = nullptr;
    pulse_status status = pulse_corpus_load(run_manifest.c_str(), &corpus);
    if (status != PULSE_OK) return fail(status);
    pulse_backend* backend = nullptr;
    status = run_backend.open(&backend);
    if (status != PULSE_OK) {
      pulse_corpus_free(corpus);
      return fail(status);
    }
    pulse_run_options options{};
    options.out_dir = out_dir.c_str();
    options.prompt_dir = prompt_dir.empty() ? nullptr : prompt_dir.c_str();
    options.parallelism = run_backend.parallelism;
    char* report = nullptr;
    status = pulse_run(corpus, backend, run_cluster.c_str(), ask.c_str(), &options, &report);
    pulse_backend_free(backend);
    pulse_corpus_free(corpus);
    if (status != PULSE_OK) return fail(status);
    print_and_free(report);
    return 0;
  }

  if (eval->parsed()) {
    char* report = nullptr;
    pulse_status status = pulse_eval_dirs(golden_dir.c_str(), actual_dir.c_str(),
                                          eval_report.c_str(), &report);
    if (status != PULSE_OK) return fail(status);
    print_and_free(report);
    return 0;
  }

  return 0;
}
