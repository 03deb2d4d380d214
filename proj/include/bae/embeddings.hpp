#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "bae/core.hpp"
#include "bae/corpus.hpp"
#include "bae/trainer.hpp"

namespace bae {

struct EmbeddingTable {
  std::string language;
  std::vector<std::string> words;
  std::unordered_map<std::string, uint32_t> index;
  Matrix vectors;  // D x V, columns are word vectors
};

inline EmbeddingTable embedding_table(const BilingualModel& m, bool src_side) {
  EmbeddingTable t;
  t.language = src_side ? "x" : "y";
  t.words = src_side ? m.vocab_x : m.vocab_y;
  t.vectors = src_side ? m.Wx : m.Wy;
  for (uint32_t i = 0; i < t.words.size(); ++i) t.index.emplace(t.words[i], i);
  return t;
}

// tf-idf weighted sum of the document's word columns; tf is the raw count.
// An empty document yields the zero vector.
inline Vector doc_vector(const BagOfWords& doc, const EmbeddingTable& table,
                         const TfIdfStats& stats) {
  Vector out(table.vectors.rows, 0.0);
  for (const auto& [w, n] : doc.entries) {
    if (w >= table.vectors.cols) throw DataError("doc_vector: word index out of range");
    const double weight = double(n) * stats.idf[w];
    for (uint32_t d = 0; d < table.vectors.rows; ++d) out[d] += weight * table.vectors(d, w);
  }
  return out;
}

// k nearest target columns by Euclidean distance, ascending, ties broken by
// word index. Brute-force scan.
inline std::vector<std::pair<std::string, double>> nearest(const std::string& query_word,
                                                           const EmbeddingTable& query_table,
                                                           const EmbeddingTable& target_table,
                                                           uint32_t k) {
  auto it = query_table.index.find(query_word);
  if (it == query_table.index.end()) throw DataError("OOV: " + query_word);
  if (k < 1) throw DataError("nearest: k must be >= 1");
  const uint32_t q = it->second;
  const uint32_t dim = query_table.vectors.rows;
  if (dim != target_table.vectors.rows) throw DataError("nearest: dimension mismatch");
  std::vector<std::pair<double, uint32_t>> dists;
  dists.reserve(target_table.vectors.cols);
  for (uint32_t j = 0; j < target_table.vectors.cols; ++j) {
    double d2 = 0.0;
    for (uint32_t d = 0; d < dim; ++d) {
      const double diff = query_table.vectors(d, q) - target_table.vectors(d, j);
      d2 += diff * diff;
    }
    dists.emplace_back(d2, j);
  }
  const size_t take = std::min<size_t>(k, dists.size());
  std::partial_sort(dists.begin(), dists.begin() + take, dists.end());
  std::vector<std::pair<std::string, double>> out;
  out.reserve(take);
  for (size_t i = 0; i < take; ++i)
    out.emplace_back(target_table.words[dists[i].second], std::sqrt(dists[i].first));
  return out;
}

// Text export: first line `V D`, then one line per word with 9 significant digits.
inline void export_embeddings(const EmbeddingTable& table, const std::string& path) {
  if (table.words.empty()) throw DataError("export_embeddings: empty table");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << table.vectors.cols << " " << table.vectors.rows << "\n";
  char buf[64];
  for (uint32_t j = 0; j < table.vectors.cols; ++j) {
    out << table.words[j];
    for (uint32_t d = 0; d < table.vectors.rows; ++d) {
      std::snprintf(buf, sizeof(buf), "%.9g", table.vectors(d, j));
      out << " " << buf;
    }
    out << "\n";
  }
  if (!out) throw DataError("write failure: " + path);
}

inline EmbeddingTable read_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  uint32_t v = 0, d = 0;
  if (!(in >> v >> d)) throw DataError(path + ": malformed embedding header");
  EmbeddingTable t;
  t.vectors = Matrix(d, v);
  t.words.resize(v);
  for (uint32_t j = 0; j < v; ++j) {
    if (!(in >> t.words[j])) throw DataError(path + ": truncated embedding file");
    for (uint32_t k = 0; k < d; ++k)
      if (!(in >> t.vectors(k, j))) throw DataError(path + ": truncated embedding file");
    t.index.emplace(t.words[j], j);
  }
  return t;
}

}  // namespace bae
