#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pulse {

/// Built-in prompt templates; data/prompts/*.txt ships the same text and a
/// configured prompt_dir overrides them file-by-file.
struct PromptSet {
  std::string mmap_extract;
  std::string lchart_extract;
  std::string intent;
  std::string repair_suffix;

  static const PromptSet& builtin();
  /// Builtin templates with any present <dir>/{mmap_extract,lchart_extract,
  /// intent,repair_suffix}.txt overriding.
  static PromptSet from_dir(const std::string& dir);
};

/// Replace every "{{key}}" with its value.
std::string render_template(const std::string& tmpl,
                            const std::vector<std::pair<std::string, std::string>>& values);

}  // namespace pulse
