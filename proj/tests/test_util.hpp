#pragma once

#include <filesystem>
#include <string>

namespace testutil {

inline std::filesystem::path repo_dir() { return std::filesystem::path(PULSE_REPO_DIR); }
inline std::filesystem::path fixture_dir() { return repo_dir() / "tests" / "fixtures"; }
inline std::filesystem::path corpus_manifest() { return fixture_dir() / "corpus" / "corpus.json"; }
inline std::filesystem::path run_transcript() {
  return fixture_dir() / "transcripts" / "run_transcript.jsonl";
}
inline std::filesystem::path golden_dir() { return fixture_dir() / "golden"; }

/// Fresh per-test scratch directory under the ctest working directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::path("pulse_test_out") / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil
