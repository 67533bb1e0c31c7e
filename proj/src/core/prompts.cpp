#include "core/prompts.hpp"

#include <filesystem>
#include <vector>

#include "core/io.hpp"

namespace pulse {

namespace {

const char* kMmapExtract =
    "Extract the core motivation and the method from the paper content below.\n"
    "\n"
    "Abstract:\n"
    "{{abstract}}\n"
    "\n"
    "Introduction:\n"
    "{{introduction}}\n"
    "\n"
    "Respond with exactly one fenced block of this form:\n"
    "\n"
    "```\n"
    "Motivation: <why the work exists, one to three sentences>\n"
    "Method: <how the work approaches it, one to three sentences>\n"
    "```\n";

const char* kLchartExtract =
    "From the experimental table and the reference list below, identify the\n"
    "models, the metric observations worth charting, and which rows are cited\n"
    "baselines.\n"
    "\n"
    "Table:\n"
    "{{table}}\n"
    "\n"
    "References:\n"
    "{{references}}\n"
    "\n"
    "Respond with exactly one fenced JSON block:\n"
    "\n"
    "```json\n"
    "{\"models\": [\"...\"],\n"
    " \"observations\": [{\"row\": 0, \"col\": 1, \"model\": \"...\", \"metric\": \"...\","
    " \"dataset\": \"...\", \"direction\": \"higher|lower\"}],\n"
    " \"baselines\": [{\"model\": \"...\", \"reference\": 1}]}\n"
    "```\n"
    "Rows and columns are 0-based positions in the table body and header.\n";

const char* kIntent =
    "Classify the user instruction as one of: method, experiment.\n"
    "\n"
    "Instruction:\n"
    "{{instruction}}\n"
    "\n"
    "Respond with the single word \"method\" or \"experiment\".\n";

const char* kRepairSuffix =
    "\n"
    "The previous reply was rejected: {{violation}}\n"
    "Respond again in exactly the required format.\n";

}  // namespace

const PromptSet& PromptSet::builtin() {
  static const PromptSet set{kMmapExtract, kLchartExtract, kIntent, kRepairSuffix};
  return set;
}

PromptSet PromptSet::from_dir(const std::string& dir) {
  PromptSet set = builtin();
  if (dir.empty()) return set;
  namespace fs = std::filesystem;
  auto maybe = [&dir](const char* name, std::string& slot) {
    fs::path p = fs::path(dir) / name;
    if (fs::exists(p)) slot = read_file(p);
  };
  maybe("mmap_extract.txt", set.mmap_extract);
  maybe("lchart_extract.txt", set.lchart_extract);
  maybe("intent.txt", set.intent);
  maybe("repair_suffix.txt", set.repair_suffix);
  return set;
}

std::string render_template(const std::string& tmpl,
                            const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out = tmpl;
  for (const auto& [key, value] : values) {
    std::string needle = "{{" + key + "}}";
    std::size_t pos = 0;
    while ((pos = out.find(needle, pos)) != std::string::npos) {
      out.replace(pos, needle.size(), value);
      pos += value.size();
    }
  }
  return out;
}

}  // namespace pulse
