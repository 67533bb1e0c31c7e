#include "core/mindmap.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/error.hpp"
#include "core/render/draw.hpp"
#include "core/render/font5x7.hpp"
#include "core/text.hpp"

namespace pulse::mindmap {

namespace {

std::string truncate_words(const std::string& s, std::size_t cap) {
  if (s.size() <= cap) return s;
  std::string cut = s.substr(0, cap > 3 ? cap - 3 : cap);
  std::size_t space = cut.find_last_of(' ');
  if (space != std::string::npos && space > 0) cut.erase(space);
  return cut + "...";
}

std::string escape_inline(const std::string& s) {
  std::string flat = collapse_whitespace(s);
  std::string out;
  out.reserve(flat.size());
  for (char c : flat) {
    if (c == '\\' || c == '#' || c == '-') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string build_extract_prompt(const ExtractedDocument& xdoc, const PromptSet& prompts) {
  return render_template(prompts.mmap_extract, {{"abstract", trim(xdoc.abstract)},
                                                {"introduction", trim(xdoc.introduction)}});
}

ParsedPair parse_pair_reply(const std::string& reply) {
  ParsedPair out;
  std::vector<std::string> inside;
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
    if (in_fence) inside.push_back(line);
  }
  if (!in_fence || !closed) {
    out.violations.push_back("reply must contain one fenced block");
    return out;
  }

  std::string* target = nullptr;
  bool saw_motivation = false, saw_method = false;
  for (const auto& line : inside) {
    std::string lower = to_lower(line);
    if (lower.rfind("motivation:", 0) == 0) {
      if (saw_method) out.violations.push_back("Motivation field must precede Method");
      saw_motivation = true;
      out.motivation = trim(line.substr(11));
      target = &out.motivation;
    } else if (lower.rfind("method:", 0) == 0) {
      saw_method = true;
      out.method = trim(line.substr(7));
      target = &out.method;
    } else if (target != nullptr && !line.empty()) {
      *target += " " + line;
    }
  }
  if (!saw_motivation) out.violations.push_back("missing 'Motivation:' field");
  if (!saw_method) out.violations.push_back("missing 'Method:' field");
  if (saw_motivation && trim(out.motivation).empty())
    out.violations.push_back("Motivation field is empty");
  if (saw_method && trim(out.method).empty()) out.violations.push_back("Method field is empty");
  out.motivation = collapse_whitespace(out.motivation);
  out.method = collapse_whitespace(out.method);
  return out;
}

ChatRequest extraction_request(const ExtractedDocument& xdoc, const ExtractOptions& options) {
  ChatRequest request;
  request.messages.push_back({"user", build_extract_prompt(xdoc, options.prompts)});
  request.model = options.model;
  request.max_tokens = options.max_tokens;
  return request;
}

MotivationMethodPair extract_pair(const ExtractedDocument& xdoc, Backend& backend,
                                  const ExtractOptions& options) {
  ChatRequest request = extraction_request(xdoc, options);
  const std::string prompt = request.messages.front().content;
  int violations_seen = 0;
  int repair_count = 0;
  std::string last_violation;

  while (true) {
    std::string reply = backend.complete(request);

    ParsedPair parsed = parse_pair_reply(reply);
    if (parsed.violations.empty()) {
      MotivationMethodPair pair;
      pair.doc_id = xdoc.doc_id;
      pair.motivation = truncate_words(parsed.motivation, options.field_cap);
      pair.method = truncate_words(parsed.method, options.field_cap);
      pair.published_at = xdoc.published_at;
      pair.repair_count = repair_count;
      return pair;
    }

    ++violations_seen;
    last_violation.clear();
    for (const auto& v : parsed.violations) {
      if (!last_violation.empty()) last_violation += "; ";
      last_violation += v;
    }
    if (violations_seen >= options.repair_limit)
      raise(ErrorCode::ExtractionFailed,
            "doc '" + xdoc.doc_id + "': " + std::to_string(violations_seen) +
                " consecutive schema violations (" + last_violation + ")");
    ++repair_count;
    request.messages.front().content =
        prompt + render_template(options.prompts.repair_suffix, {{"violation", last_violation}});
  }
}

MethodChain sort_chain(std::vector<MotivationMethodPair> pairs, const std::string& cluster_id) {
  std::set<std::string> seen;
  for (const auto& p : pairs)
    if (!seen.insert(p.doc_id).second)
      raise(ErrorCode::DuplicateDoc, "doc '" + p.doc_id + "' appears twice in the chain");
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const MotivationMethodPair& a, const MotivationMethodPair& b) {
                     if (a.published_at != b.published_at) return a.published_at < b.published_at;
                     return a.doc_id < b.doc_id;
                   });
  MethodChain chain;
  chain.cluster_id = cluster_id;
  chain.pairs = std::move(pairs);
  return chain;
}

std::string emit_chain_markdown(const MethodChain& chain, const ChainContext& ctx) {
  std::string out = "# " + escape_inline(ctx.cluster_label) + "\n";
  int current_year = -1;
  for (const auto& pair : chain.pairs) {
    if (pair.published_at.year != current_year) {
      current_year = pair.published_at.year;
      out += "\n## " + std::to_string(current_year) + "\n";
    }
    auto title_it = ctx.titles.find(pair.doc_id);
    const std::string& title = title_it != ctx.titles.end() ? title_it->second : pair.doc_id;
    out += "\n### " + escape_inline(title) + " (" + format_date(pair.published_at) + ")\n";
    out += "- Motivation: " + escape_inline(pair.motivation) + "\n";
    out += "- Method: " + escape_inline(pair.method) + "\n";
  }
  return out;
}

std::vector<Violation> validate_chain_markdown(const std::string& text) {
  std::vector<Violation> violations;
  bool saw_h1 = false;
  int current_year = -1;
  Date last_date{};
  bool have_last_date = false;

  struct OpenNode {
    std::string heading;
    bool has_motivation = false;
    bool has_method = false;
  };
  std::optional<OpenNode> node;
  std::set<std::string> node_keys;

  auto close_node = [&]() {
    if (!node) return;
    if (!node->has_motivation)
      violations.push_back({"SchemaViolation", "paper node '" + node->heading +
                                                   "' missing its Motivation bullet"});
    if (!node->has_method)
      violations.push_back(
          {"SchemaViolation", "paper node '" + node->heading + "' missing its Method bullet"});
    node.reset();
  };

  for (const auto& raw : split_lines_keep_ends(text)) {
    std::string line = raw;
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    if (trim(line).empty()) continue;

    if (line.rfind("### ", 0) == 0) {
      close_node();
      std::string heading = line.substr(4);
      if (current_year < 0) {
        violations.push_back({"SchemaViolation", "paper node outside any year group: " + heading});
      }
      // trailing "(YYYY-MM-DD)"
      std::optional<Date> date;
      if (heading.size() >= 12 && heading.back() == ')') {
        std::size_t open = heading.find_last_of('(');
        if (open != std::string::npos)
          date = parse_date(heading.substr(open + 1, heading.size() - open - 2));
      }
      if (!date) {
        violations.push_back({"SchemaViolation", "paper heading lacks a (YYYY-MM-DD) suffix: " + heading});
      } else {
        if (current_year >= 0 && date->year != current_year)
          violations.push_back({"SchemaViolation", "paper dated " + format_date(*date) +
                                                       " filed under year group " +
                                                       std::to_string(current_year)});
        if (have_last_date && *date < last_date)
          violations.push_back({"OrderViolation", "paper '" + heading + "' out of date order"});
        last_date = *date;
        have_last_date = true;
      }
      if (!node_keys.insert(heading).second)
        violations.push_back({"DuplicateNode", "duplicated paper node: " + heading});
      node = OpenNode{heading, false, false};
    } else if (line.rfind("## ", 0) == 0) {
      close_node();
      std::string year_text = trim(line.substr(3));
      bool numeric = year_text.size() == 4 &&
                     std::all_of(year_text.begin(), year_text.end(),
                                 [](char c) { return c >= '0' && c <= '9'; });
      if (!numeric) {
        violations.push_back({"SchemaViolation", "year group heading must be a 4-digit year: " + line});
      } else {
        int year = std::stoi(year_text);
        if (current_year >= 0 && year <= current_year)
          violations.push_back({"OrderViolation",
                                "year groups must be strictly ascending: " + year_text});
        current_year = year;
      }
    } else if (line.rfind("# ", 0) == 0) {
      close_node();
      if (saw_h1)
        violations.push_back({"SchemaViolation", "multiple top-level headings"});
      else if (current_year >= 0 || !node_keys.empty())
        violations.push_back({"SchemaViolation", "top-level heading must come first"});
      saw_h1 = true;
    } else if (line.rfind("- Motivation: ", 0) == 0) {
      if (!node) {
        violations.push_back({"SchemaViolation", "Motivation bullet outside a paper node"});
      } else if (node->has_motivation || node->has_method) {
        violations.push_back({"SchemaViolation",
                              "unexpected extra bullet in node '" + node->heading + "'"});
      } else if (trim(line.substr(14)).empty()) {
        violations.push_back({"SchemaViolation", "empty Motivation bullet in node '" + node->heading + "'"});
      } else {
        node->has_motivation = true;
      }
    } else if (line.rfind("- Method: ", 0) == 0) {
      if (!node) {
        violations.push_back({"SchemaViolation", "Method bullet outside a paper node"});
      } else if (node->has_method) {
        violations.push_back({"SchemaViolation", "duplicate Method bullet in node '" + node->heading + "'"});
      } else if (trim(line.substr(10)).empty()) {
        violations.push_back({"SchemaViolation", "empty Method bullet in node '" + node->heading + "'"});
      } else {
        if (!node->has_motivation)
          violations.push_back({"SchemaViolation",
                                "Method bullet precedes Motivation in node '" + node->heading + "'"});
        node->has_method = true;
      }
    } else {
      violations.push_back({"SchemaViolation", "unexpected line: " + line});
    }

    if (!saw_h1 && violations.empty()) {
      violations.push_back({"SchemaViolation", "document must start with a single # heading"});
    }
  }
  close_node();
  if (!saw_h1)
    violations.push_back({"SchemaViolation", "document must start with a single # heading"});
  return violations;
}

// ---------------------------------------------------------------------------
// Layout and rendering

namespace {

constexpr int kCharW = 6, kLineH = 10, kPadX = 6, kPadY = 4;
constexpr int kLeafGap = 12, kGroupGap = 24, kColumnGap = 40, kMargin = 10;

LayoutNode make_node(const std::string& id, const std::string& label, int depth,
                     std::size_t wrap_width) {
  LayoutNode node;
  node.id = id;
  node.depth = depth;
  node.lines = wrap_text(label, wrap_width);
  std::size_t longest = 0;
  for (const auto& line : node.lines)
    longest = std::max(longest, render::display_width(line));
  node.width = static_cast<int>(longest) * kCharW + 2 * kPadX;
  node.height = static_cast<int>(node.lines.size()) * kLineH + 2 * kPadY;
  return node;
}

}  // namespace

MindMapLayout layout_mindmap(const MethodChain& chain, const ChainContext& ctx,
                             const RenderOptions& options) {
  if (chain.pairs.empty()) raise(ErrorCode::EmptyChain, "cannot lay out an empty chain");

  MindMapLayout layout;
  layout.nodes.push_back(make_node("root", ctx.cluster_label.empty() ? chain.cluster_id
                                                                     : ctx.cluster_label,
                                   0, options.wrap_width));

  struct Group {
    int year;
    std::size_t year_node;
    std::vector<std::size_t> leaves;
  };
  std::vector<Group> groups;
  for (const auto& pair : chain.pairs) {
    if (groups.empty() || groups.back().year != pair.published_at.year) {
      std::size_t index = layout.nodes.size();
      layout.nodes.push_back(
          make_node("year-" + std::to_string(pair.published_at.year),
                    std::to_string(pair.published_at.year), 1, options.wrap_width));
      groups.push_back(Group{pair.published_at.year, index, {}});
      layout.edges.push_back(LayoutEdge{0, index});
    }
    auto title_it = ctx.titles.find(pair.doc_id);
    const std::string& title = title_it != ctx.titles.end() ? title_it->second : pair.doc_id;
    std::size_t leaf = layout.nodes.size();
    layout.nodes.push_back(make_node(pair.doc_id, title, 2, options.wrap_width));
    groups.back().leaves.push_back(leaf);
    layout.edges.push_back(LayoutEdge{groups.back().year_node, leaf});
  }

  int col_width[3] = {0, 0, 0};
  for (const auto& node : layout.nodes)
    col_width[node.depth] = std::max(col_width[node.depth], node.width);
  int col_x[3];
  col_x[0] = kMargin;
  col_x[1] = col_x[0] + col_width[0] + kColumnGap;
  col_x[2] = col_x[1] + col_width[1] + kColumnGap;

  // stack leaves, year nodes centered on their leaf groups, root on everything
  int y = kMargin;
  for (auto& group : groups) {
    int group_top = y;
    for (std::size_t leaf : group.leaves) {
      LayoutNode& node = layout.nodes[leaf];
      node.x = col_x[2];
      node.y = y;
      y += node.height + kLeafGap;
    }
    int group_bottom = y - kLeafGap;
    LayoutNode& year_node = layout.nodes[group.year_node];
    year_node.x = col_x[1];
    year_node.y = (group_top + group_bottom) / 2 - year_node.height / 2;
    y = group_bottom + kGroupGap;
  }
  int stack_bottom = y - kGroupGap;
  LayoutNode& root = layout.nodes[0];
  root.x = col_x[0];
  root.y = (kMargin + stack_bottom) / 2 - root.height / 2;

  int max_x = 0, max_y = 0, min_y = kMargin;
  for (const auto& node : layout.nodes) {
    max_x = std::max(max_x, node.x + node.width);
    max_y = std::max(max_y, node.y + node.height);
    min_y = std::min(min_y, node.y);
  }
  if (min_y < kMargin) {  // tall root label pushed above the stack
    int shift = kMargin - min_y;
    for (auto& node : layout.nodes) node.y += shift;
    max_y += shift;
  }
  layout.width = max_x + kMargin;
  layout.height = max_y + kMargin;
  return layout;
}

Figure render_mindmap(const MethodChain& chain, const ChainContext& ctx,
                      const RenderOptions& options) {
  MindMapLayout layout = layout_mindmap(chain, ctx, options);

  const int W = options.raster_width, H = options.raster_height;
  double scale = std::min(static_cast<double>(W - 2 * kMargin) / layout.width,
                          static_cast<double>(H - 2 * kMargin) / layout.height);
  scale = std::min(scale, 2.0);
  int offset_x = static_cast<int>(std::llround((W - layout.width * scale) / 2.0));
  int offset_y = static_cast<int>(std::llround((H - layout.height * scale) / 2.0));
  auto tx = [&](int x) { return offset_x + static_cast<int>(std::llround(x * scale)); };
  auto ty = [&](int y) { return offset_y + static_cast<int>(std::llround(y * scale)); };
  int glyph_scale = std::max(1, static_cast<int>(scale));
  int font_size = std::max(8, static_cast<int>(std::llround(8 * scale)));

  render::Canvas canvas(W, H);
  render::SvgWriter svg(W, H);

  for (const auto& edge : layout.edges) {
    const LayoutNode& a = layout.nodes[edge.from];
    const LayoutNode& b = layout.nodes[edge.to];
    int x0 = tx(a.x + a.width), y0 = ty(a.y + a.height / 2);
    int x1 = tx(b.x), y1 = ty(b.y + b.height / 2);
    canvas.line(x0, y0, x1, y1, 0.45);
    svg.line(x0, y0, x1, y1, "#737373");
  }
  for (const auto& node : layout.nodes) {
    int x = tx(node.x), y = ty(node.y);
    int w = tx(node.x + node.width) - x, h = ty(node.y + node.height) - y;
    canvas.fill_rect(x, y, w, h, node.depth == 0 ? 0.9 : 1.0);
    canvas.rect_outline(x, y, w, h, 0.0);
    svg.rect(x, y, w, h, node.depth == 0 ? "#e5e5e5" : "#ffffff", "#000000");
    for (std::size_t i = 0; i < node.lines.size(); ++i) {
      int line_x = x + static_cast<int>(std::llround(kPadX * scale));
      int line_y = y + static_cast<int>(std::llround((kPadY + kLineH * static_cast<int>(i)) * scale));
      canvas.text(line_x, line_y, node.lines[i], glyph_scale, 0.0);
      svg.text(line_x, line_y + font_size, node.lines[i], font_size);
    }
  }

  Figure figure;
  figure.svg = svg.finish();
  figure.raster = canvas.image();
  return figure;
}

}  // namespace pulse::mindmap
