#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pulse {

enum class SectionKind { Abstract, Introduction, Method, Experiment, References, Other };

const char* section_kind_name(SectionKind kind);

struct Section {
  SectionKind kind = SectionKind::Other;
  std::string heading;      // heading text without the leading #'s
  std::string raw_heading;  // exact heading line incl. newline; empty for preamble
  std::string body;         // bytes after the heading line, up to the next heading
};

struct TableCell {
  std::string raw;  // trimmed original cell text, emphasis markers included
  std::optional<double> numeric;
  bool emphasized = false;
  bool percent = false;
};

struct Table {
  std::optional<std::string> caption;
  std::vector<std::string> headers;
  std::vector<std::vector<TableCell>> rows;
  std::string source_doc;
  int ordinal = 0;  // position among the document's tables, 0-based
};

struct ParseNote {
  std::string kind;    // e.g. "RowArityMismatch"
  std::string detail;
};

struct ReferenceEntry {
  int index = 0;  // marker number when present, 1-based position otherwise
  std::string raw;
  std::optional<int> year;
  std::optional<std::string> matched_doc;
};

/// One section per #/## heading; kind assigned by ordered keyword rules.
/// Concatenating raw_heading + body over the result reproduces the input.
std::vector<Section> segment_sections(const std::string& body);

SectionKind classify_heading(const std::string& heading);

struct TableExtraction {
  std::vector<Table> tables;
  std::vector<ParseNote> notes;
};

TableExtraction extract_tables(const std::string& body);

/// Canonical markdown for a table; extract_tables(serialize_table(t)) is a
/// fixed point.
std::string serialize_table(const Table& table);

/// Split a references section into entries. Numbered markers ("[n]", "n.")
/// or blank lines start a new entry; other lines continue the current one.
std::vector<ReferenceEntry> parse_references(const Section& section);

/// Last standalone 4-digit token in 1900-2099, if any.
std::optional<int> resolve_reference_year(const std::string& raw);

}  // namespace pulse
