#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/backend.hpp"
#include "core/corpus.hpp"

namespace pulse {

struct EmbeddingVector {
  std::string doc_id;
  std::vector<double> values;
};

struct KMeansResult {
  int k = 0;
  std::vector<int> assignments;  // per input point
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;
  std::vector<double> inertia_trace;  // one entry per assignment step
};

struct ClusterAssignment {
  int k = 0;
  std::map<std::string, int> assignments;  // doc id -> cluster index
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;
  std::vector<double> inertia_trace;
};

/// Lloyd's iterations from a seeded shuffle pick of k distinct points, until
/// assignments are stable or 100 iterations. Deterministic for a given seed.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, unsigned seed);

double squared_distance(const std::vector<double>& a, const std::vector<double>& b);

/// One embedding per document abstract, order-aligned with the input.
std::vector<EmbeddingVector> embed_abstracts(const std::vector<const Document*>& docs,
                                             Backend& backend, const std::string& model);

ClusterAssignment assign_clusters(const std::vector<EmbeddingVector>& vectors, int k,
                                  unsigned seed);

/// Top-3 non-stopword tokens from titles+abstracts, hyphen-joined.
/// Ties break lexicographically; no qualifying tokens -> "unlabeled".
std::string label_cluster(const std::vector<const Document*>& docs);

const std::vector<std::string>& stopword_list();

/// clusters_out.json mirroring the manifest cluster schema.
nlohmann::json clusters_out_json(const Corpus& corpus, const ClusterAssignment& assignment);

}  // namespace pulse
