#include "core/clusterer.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "core/error.hpp"
#include "core/text.hpp"

namespace pulse {

using nlohmann::json;

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

namespace {

// Hand-rolled Fisher-Yates: std::shuffle's draw sequence is
// implementation-defined, and seeds must reproduce across platforms.
std::vector<std::size_t> seeded_shuffle(std::size_t n, unsigned seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937 rng(seed);
  auto bounded = [&rng](std::size_t bound) -> std::size_t {
    const std::uint32_t range = static_cast<std::uint32_t>(bound);
    const std::uint32_t limit = std::numeric_limits<std::uint32_t>::max() -
                                (std::numeric_limits<std::uint32_t>::max() % range);
    std::uint32_t draw;
    do {
      draw = rng();
    } while (draw >= limit);
    return draw % range;
  };
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = bounded(i + 1);
    std::swap(order[i], order[j]);
  }
  return order;
}

double compute_inertia(const std::vector<std::vector<double>>& points,
                       const std::vector<std::vector<double>>& centroids,
                       const std::vector<int>& assignments) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    total += squared_distance(points[i], centroids[static_cast<std::size_t>(assignments[i])]);
  return total;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, unsigned seed) {
  const std::size_t n = points.size();
  if (k <= 0) raise(ErrorCode::KExceedsN, "k must be positive");
  if (static_cast<std::size_t>(k) > n)
    raise(ErrorCode::KExceedsN,
          "k=" + std::to_string(k) + " exceeds " + std::to_string(n) + " points");
  const std::size_t dim = points[0].size();
  for (const auto& p : points)
    if (p.size() != dim) raise(ErrorCode::DimensionMismatch, "points disagree on dimension");

  // initial centroids: first k pairwise-distinct points in shuffle order,
  // padding with duplicates only when the data has fewer distinct values
  auto order = seeded_shuffle(n, seed);
  std::vector<std::vector<double>> centroids;
  for (std::size_t idx : order) {
    if (static_cast<int>(centroids.size()) == k) break;
    bool duplicate = false;
    for (const auto& c : centroids)
      if (c == points[idx]) {
        duplicate = true;
        break;
      }
    if (!duplicate) centroids.push_back(points[idx]);
  }
  for (std::size_t idx : order) {
    if (static_cast<int>(centroids.size()) == k) break;
    centroids.push_back(points[idx]);
  }

  KMeansResult result;
  result.k = k;
  result.assignments.assign(n, -1);

  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        double d = squared_distance(points[i], centroids[static_cast<std::size_t>(c)]);
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      if (result.assignments[i] != best_c) {
        result.assignments[i] = best_c;
        changed = true;
      }
    }
    result.inertia_trace.push_back(compute_inertia(points, centroids, result.assignments));
    if (!changed) break;

    std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                          std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto c = static_cast<std::size_t>(result.assignments[i]);
      ++counts[c];
      for (std::size_t d = 0; d < dim; ++d) sums[c][d] += points[i][d];
    }
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t d = 0; d < dim; ++d)
        centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
    }
  }

  result.centroids = std::move(centroids);
  result.inertia = result.inertia_trace.back();
  return result;
}

std::vector<EmbeddingVector> embed_abstracts(const std::vector<const Document*>& docs,
                                             Backend& backend, const std::string& model) {
  std::vector<std::string> texts;
  texts.reserve(docs.size());
  for (const Document* doc : docs) {
    const Section* abstract = doc->find_section(SectionKind::Abstract);
    if (abstract == nullptr || trim(abstract->body).empty())
      raise(ErrorCode::EmptyText, "document '" + doc->id + "' has no abstract to embed");
    texts.push_back(trim(abstract->body));
  }
  auto raw = backend.embed(texts, model);
  std::vector<EmbeddingVector> vectors;
  vectors.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i)
    vectors.push_back(EmbeddingVector{docs[i]->id, raw[i]});
  return vectors;
}

ClusterAssignment assign_clusters(const std::vector<EmbeddingVector>& vectors, int k,
                                  unsigned seed) {
  std::vector<std::vector<double>> points;
  points.reserve(vectors.size());
  for (const auto& v : vectors) points.push_back(v.values);
  KMeansResult res = kmeans(points, k, seed);
  ClusterAssignment assignment;
  assignment.k = res.k;
  assignment.centroids = std::move(res.centroids);
  assignment.inertia = res.inertia;
  assignment.inertia_trace = std::move(res.inertia_trace);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    assignment.assignments[vectors[i].doc_id] = res.assignments[i];
  return assignment;
}

const std::vector<std::string>& stopword_list() {
  // fixed 50-word list, mirrored in data/stopwords.txt
  static const std::vector<std::string> words = {
      "a",    "an",   "and",  "are",   "as",    "at",    "be",   "by",    "can",  "for",
      "from", "has",  "have", "how",   "in",    "is",    "it",   "its",   "more", "most",
      "new",  "not",  "of",   "on",    "or",    "our",   "over", "paper", "such", "than",
      "that", "the",  "their", "these", "this",  "those", "to",   "under", "use",  "used",
      "using", "via", "we",   "well",  "when",  "which", "while", "with",  "within", "work",
  };
  return words;
}

std::string label_cluster(const std::vector<const Document*>& docs) {
  if (docs.empty()) raise(ErrorCode::EmptyCluster, "label_cluster over no documents");
  const auto& stopwords = stopword_list();
  auto is_stopword = [&stopwords](const std::string& token) {
    return std::binary_search(stopwords.begin(), stopwords.end(), token);
  };

  std::map<std::string, int> frequency;
  for (const Document* doc : docs) {
    std::string text = doc->title;
    if (const Section* abstract = doc->find_section(SectionKind::Abstract)) {
      text += " ";
      text += abstract->body;
    }
    for (const auto& token : tokenize(text)) {
      if (token.size() < 2 || is_stopword(token)) continue;
      ++frequency[token];
    }
  }
  if (frequency.empty()) return "unlabeled";

  std::vector<std::pair<std::string, int>> ranked(frequency.begin(), frequency.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::string label;
  for (std::size_t i = 0; i < ranked.size() && i < 3; ++i) {
    if (!label.empty()) label.push_back('-');
    label += ranked[i].first;
  }
  return label;
}

json clusters_out_json(const Corpus& corpus, const ClusterAssignment& assignment) {
  // regrouped docs, schema-compatible with corpus.json
  std::map<std::string, Split> doc_split;
  for (const auto& cluster : corpus.clusters)
    for (const auto& id : cluster.doc_ids) doc_split.emplace(id, cluster.split);

  std::vector<std::vector<const Document*>> groups(static_cast<std::size_t>(assignment.k));
  for (const auto& [doc_id, index] : assignment.assignments) {
    const Document* doc = corpus.find_document(doc_id);
    if (doc != nullptr) groups[static_cast<std::size_t>(index)].push_back(doc);
  }

  json clusters = json::array();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) continue;
    auto& members = groups[g];
    std::sort(members.begin(), members.end(),
              [](const Document* a, const Document* b) { return a->id < b->id; });
    int train_votes = 0, test_votes = 0;
    json docs = json::array();
    for (const Document* doc : members) {
      json entry;
      entry["id"] = doc->id;
      entry["path"] = doc->source_path;
      entry["title"] = doc->title;
      entry["published_at"] = format_date(doc->published_at);
      entry["authors"] = doc->authors;
      if (doc->venue) entry["venue"] = *doc->venue;
      docs.push_back(entry);
      auto it = doc_split.find(doc->id);
      if (it != doc_split.end() && it->second == Split::Test)
        ++test_votes;
      else
        ++train_votes;
    }
    json cluster;
    cluster["id"] = "km-" + std::to_string(g);
    cluster["label"] = label_cluster(members);
    cluster["split"] = test_votes > train_votes ? "test" : "train";
    cluster["docs"] = docs;
    clusters.push_back(cluster);
  }
  json out;
  out["clusters"] = clusters;
  return out;
}

}  // namespace pulse
