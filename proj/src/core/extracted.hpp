#pragma once

#include <string>
#include <vector>

#include "core/date.hpp"
#include "core/docparse.hpp"

namespace pulse {

/// Normalized per-document content shared by both downstream agents.
struct ExtractedDocument {
  std::string doc_id;
  std::string abstract;
  std::string introduction;
  std::vector<Table> tables;
  std::vector<ReferenceEntry> references;
  Date published_at;
  bool no_tables = false;
  std::vector<ParseNote> notes;
};

}  // namespace pulse
