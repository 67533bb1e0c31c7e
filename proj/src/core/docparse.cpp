#include "core/docparse.hpp"

#include <algorithm>

#include "core/text.hpp"

namespace pulse {

const char* section_kind_name(SectionKind kind) {
  switch (kind) {
    case SectionKind::Abstract: return "Abstract";
    case SectionKind::Introduction: return "Introduction";
    case SectionKind::Method: return "Method";
    case SectionKind::Experiment: return "Experiment";
    case SectionKind::References: return "References";
    case SectionKind::Other: return "Other";
  }
  return "Other";
}

SectionKind classify_heading(const std::string& heading) {
  std::string h = to_lower(heading);
  // first match wins, in this order
  if (h.find("abstract") != std::string::npos) return SectionKind::Abstract;
  if (h.find("introduction") != std::string::npos) return SectionKind::Introduction;
  if (h.find("method") != std::string::npos || h.find("approach") != std::string::npos)
    return SectionKind::Method;
  if (h.find("experiment") != std::string::npos || h.find("result") != std::string::npos ||
      h.find("evaluation") != std::string::npos)
    return SectionKind::Experiment;
  if (h.find("reference") != std::string::npos || h.find("bibliography") != std::string::npos)
    return SectionKind::References;
  return SectionKind::Other;
}

namespace {

// "# Title" or "## Title": levels 1-2 start sections, deeper stays in body.
bool is_section_heading(const std::string& line, std::string& heading_text) {
  std::size_t i = 0;
  while (i < line.size() && line[i] == '#') ++i;
  if (i == 0 || i > 2) return false;
  if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\n' && line[i] != '\r')
    return false;
  heading_text = trim(line.substr(i));
  return true;
}

}  // namespace

std::vector<Section> segment_sections(const std::string& body) {
  std::vector<Section> sections;
  auto lines = split_lines_keep_ends(body);

  Section current;
  bool have_current = false;  // false while accumulating the preamble

  auto close_current = [&]() {
    if (have_current) {
      sections.push_back(std::move(current));
    } else if (!current.body.empty()) {
      current.kind = SectionKind::Other;
      sections.push_back(std::move(current));
    }
    current = Section{};
  };

  for (const auto& line : lines) {
    std::string heading_text;
    if (is_section_heading(line, heading_text)) {
      close_current();
      current.heading = heading_text;
      current.raw_heading = line;
      current.kind = classify_heading(heading_text);
      have_current = true;
    } else {
      current.body += line;
    }
  }
  close_current();

  if (sections.empty()) {
    sections.push_back(Section{SectionKind::Other, "", "", body});
  }

  // at most one Abstract and one References per document
  bool seen_abstract = false, seen_references = false;
  for (auto& s : sections) {
    if (s.kind == SectionKind::Abstract) {
      if (seen_abstract) s.kind = SectionKind::Other;
      seen_abstract = true;
    } else if (s.kind == SectionKind::References) {
      if (seen_references) s.kind = SectionKind::Other;
      seen_references = true;
    }
  }
  return sections;
}

namespace {

bool line_has_pipe(const std::string& line) { return line.find('|') != std::string::npos; }

std::vector<std::string> split_table_row(const std::string& line) {
  std::string t = trim(line);
  if (!t.empty() && t.front() == '|') t.erase(0, 1);
  if (!t.empty() && t.back() == '|') t.pop_back();
  std::vector<std::string> cells;
  std::string cur;
  for (char c : t) {
    if (c == '|') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

bool is_delimiter_row(const std::string& line) {
  if (!line_has_pipe(line)) return false;
  auto cells = split_table_row(line);
  if (cells.empty()) return false;
  for (const auto& cell : cells) {
    if (cell.empty()) return false;
    std::size_t i = 0, e = cell.size();
    if (cell[i] == ':') ++i;
    if (e > i && cell[e - 1] == ':') --e;
    if (i >= e) return false;
    for (std::size_t j = i; j < e; ++j)
      if (cell[j] != '-') return false;
  }
  return true;
}

// "Table 3:" / "table IV." style caption lines
bool is_caption_line(const std::string& line) {
  std::string t = trim(line);
  if (!contains_ci(t.substr(0, 5), "table")) return false;
  if (t.size() < 7) return false;
  std::size_t i = 5;
  while (i < t.size() && t[i] == ' ') ++i;
  std::size_t label_start = i;
  while (i < t.size() && t[i] != ':' && t[i] != '.' && t[i] != ' ') ++i;
  if (i == label_start || i >= t.size()) return false;
  return t[i] == ':' || t[i] == '.';
}

TableCell make_cell(const std::string& raw) {
  TableCell cell;
  cell.raw = raw;
  std::string stripped = raw;
  // strip one layer of paired emphasis markers
  for (const char* marker : {"**", "__", "*", "_"}) {
    std::size_t mlen = std::string(marker).size();
    if (stripped.size() >= 2 * mlen && stripped.compare(0, mlen, marker) == 0 &&
        stripped.compare(stripped.size() - mlen, mlen, marker) == 0) {
      stripped = trim(stripped.substr(mlen, stripped.size() - 2 * mlen));
      cell.emphasized = true;
      break;
    }
  }
  if (auto num = parse_numeric(stripped)) {
    cell.numeric = num->value;
    cell.percent = num->percent;
  }
  return cell;
}

}  // namespace

TableExtraction extract_tables(const std::string& body) {
  TableExtraction out;
  auto lines = split_lines_keep_ends(body);
  std::vector<std::string> stripped(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string l = lines[i];
    while (!l.empty() && (l.back() == '\n' || l.back() == '\r')) l.pop_back();
    stripped[i] = l;
  }

  std::size_t i = 0;
  while (i + 1 < lines.size()) {
    if (!(line_has_pipe(stripped[i]) && is_delimiter_row(stripped[i + 1]))) {
      ++i;
      continue;
    }
    Table table;
    table.ordinal = static_cast<int>(out.tables.size());
    table.headers = split_table_row(stripped[i]);

    // caption: nearest non-blank line above (within 2), else below the table
    for (std::size_t back = 1; back <= 2 && back <= i; ++back) {
      const std::string& prev = stripped[i - back];
      if (trim(prev).empty()) continue;
      if (is_caption_line(prev)) table.caption = trim(prev);
      break;
    }

    std::size_t j = i + 2;
    while (j < lines.size() && line_has_pipe(stripped[j]) && !is_delimiter_row(stripped[j])) {
      auto cells = split_table_row(stripped[j]);
      if (cells.size() != table.headers.size()) {
        out.notes.push_back(
            {"RowArityMismatch", "table " + std::to_string(table.ordinal) + ": row '" +
                                     trim(stripped[j]) + "' has " + std::to_string(cells.size()) +
                                     " cells, expected " + std::to_string(table.headers.size())});
      } else {
        std::vector<TableCell> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(make_cell(c));
        table.rows.push_back(std::move(row));
      }
      ++j;
    }

    if (!table.caption) {
      for (std::size_t fwd = j; fwd < lines.size() && fwd <= j + 1; ++fwd) {
        if (trim(stripped[fwd]).empty()) continue;
        // a caption sitting directly above another table belongs to that one
        bool heads_next_table = fwd + 2 < lines.size() && line_has_pipe(stripped[fwd + 1]) &&
                                is_delimiter_row(stripped[fwd + 2]);
        if (is_caption_line(stripped[fwd]) && !heads_next_table)
          table.caption = trim(stripped[fwd]);
        break;
      }
    }

    out.tables.push_back(std::move(table));
    i = j;
  }
  return out;
}

std::string serialize_table(const Table& table) {
  std::string out;
  if (table.caption) {
    out += *table.caption;
    out.push_back('\n');
  }
  auto emit_row = [&out](const std::vector<std::string>& cells) {
    out.push_back('|');
    for (const auto& c : cells) {
      out.push_back(' ');
      out += c;
      out += " |";
    }
    out.push_back('\n');
  };
  emit_row(table.headers);
  std::vector<std::string> delim(table.headers.size(), "---");
  emit_row(delim);
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (const auto& cell : row) cells.push_back(cell.raw);
    emit_row(cells);
  }
  return out;
}

std::vector<ReferenceEntry> parse_references(const Section& section) {
  std::vector<ReferenceEntry> entries;
  std::string pending_raw;
  std::optional<int> pending_index;

  auto flush = [&]() {
    std::string raw = collapse_whitespace(pending_raw);
    if (!raw.empty()) {
      ReferenceEntry e;
      e.index = pending_index.value_or(static_cast<int>(entries.size()) + 1);
      e.raw = raw;
      e.year = resolve_reference_year(raw);
      entries.push_back(std::move(e));
    }
    pending_raw.clear();
    pending_index.reset();
  };

  auto marker_number = [](const std::string& line, int& number, std::size_t& after) -> bool {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i < line.size() && line[i] == '[') {
      std::size_t j = i + 1, digits = 0;
      int v = 0;
      while (j < line.size() && line[j] >= '0' && line[j] <= '9') {
        v = v * 10 + (line[j] - '0');
        ++j;
        ++digits;
      }
      if (digits > 0 && j < line.size() && line[j] == ']') {
        number = v;
        after = j + 1;
        return true;
      }
    }
    // "12. Author ..." style; require a space after the dot so decimal
    // numbers inside continuation lines do not start entries
    std::size_t j = i, digits = 0;
    int v = 0;
    while (j < line.size() && line[j] >= '0' && line[j] <= '9' && digits < 4) {
      v = v * 10 + (line[j] - '0');
      ++j;
      ++digits;
    }
    if (digits > 0 && j + 1 < line.size() && line[j] == '.' &&
        (line[j + 1] == ' ' || line[j + 1] == '\t')) {
      number = v;
      after = j + 1;
      return true;
    }
    return false;
  };

  for (const auto& raw_line : split_lines_keep_ends(section.body)) {
    std::string line = raw_line;
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    if (trim(line).empty()) {
      flush();
      continue;
    }
    int number = 0;
    std::size_t after = 0;
    if (marker_number(line, number, after)) {
      flush();
      pending_index = number;
      pending_raw = line.substr(after);
    } else {
      if (!pending_raw.empty()) pending_raw.push_back(' ');
      pending_raw += line;
    }
  }
  flush();
  return entries;
}

std::optional<int> resolve_reference_year(const std::string& raw) {
  std::optional<int> year;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] >= '0' && raw[i] <= '9') {
      std::size_t j = i;
      while (j < raw.size() && raw[j] >= '0' && raw[j] <= '9') ++j;
      if (j - i == 4) {
        int v = (raw[i] - '0') * 1000 + (raw[i + 1] - '0') * 100 + (raw[i + 2] - '0') * 10 +
                (raw[i + 3] - '0');
        if (v >= 1900 && v <= 2099) year = v;
      }
      i = j;
    } else {
      ++i;
    }
  }
  return year;
}

}  // namespace pulse
