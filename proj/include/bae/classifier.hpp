#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bae/core.hpp"
#include "bae/corpus.hpp"
#include "bae/embeddings.hpp"
#include "bae/trainer.hpp"

namespace bae {

struct PerceptronModel {
  std::vector<std::string> classes;           // sorted
  std::vector<Vector> weights;                // per class, length D+1 (bias last)
  std::vector<Vector> averaged_weights;       // mean of the trajectory, used at prediction
};

inline uint32_t argmax_score(const std::vector<Vector>& weights, const Vector& x) {
  uint32_t best = 0;
  double best_score = 0.0;
  for (uint32_t c = 0; c < weights.size(); ++c) {
    double s = weights[c].back();  // bias times the implicit 1
    for (size_t d = 0; d < x.size(); ++d) s += weights[c][d] * x[d];
    if (c == 0 || s > best_score) {
      best = c;
      best_score = s;
    }
  }
  return best;
}

// Multi-class perceptron with feature augmentation [x; 1] and averaging over
// every example visit. Examples are shuffled per epoch with the given seed.
inline PerceptronModel perceptron_train(const std::vector<std::pair<Vector, std::string>>& examples,
                                        uint32_t epochs, uint64_t seed, bool shuffle = true) {
  if (examples.empty()) throw DataError("perceptron_train: no examples");
  std::set<std::string> label_set;
  for (const auto& [x, y] : examples) label_set.insert(y);
  if (label_set.size() < 2) throw DataError("perceptron_train: need at least 2 classes");

  PerceptronModel m;
  m.classes.assign(label_set.begin(), label_set.end());
  std::map<std::string, uint32_t> class_idx;
  for (uint32_t i = 0; i < m.classes.size(); ++i) class_idx[m.classes[i]] = i;

  const size_t dim = examples[0].first.size() + 1;
  m.weights.assign(m.classes.size(), Vector(dim, 0.0));
  std::vector<Vector> sum(m.classes.size(), Vector(dim, 0.0));

  std::vector<size_t> order(examples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  uint64_t visits = 0;

  for (uint32_t e = 0; e < epochs; ++e) {
    if (shuffle) shuffle_deterministic(order, rng);
    for (size_t i : order) {
      const Vector& x = examples[i].first;
      const uint32_t gold = class_idx[examples[i].second];
      const uint32_t pred = argmax_score(m.weights, x);
      if (pred != gold) {
        for (size_t d = 0; d < x.size(); ++d) {
          m.weights[gold][d] += x[d];
          m.weights[pred][d] -= x[d];
        }
        m.weights[gold].back() += 1.0;
        m.weights[pred].back() -= 1.0;
      }
      for (uint32_t c = 0; c < m.weights.size(); ++c)
        for (size_t d = 0; d < dim; ++d) sum[c][d] += m.weights[c][d];
      ++visits;
    }
  }

  m.averaged_weights.assign(m.classes.size(), Vector(dim, 0.0));
  for (uint32_t c = 0; c < m.classes.size(); ++c)
    for (size_t d = 0; d < dim; ++d) m.averaged_weights[c][d] = sum[c][d] / double(visits);
  return m;
}

inline std::string predict(const PerceptronModel& m, const Vector& x, bool use_averaged = true) {
  return m.classes[argmax_score(use_averaged ? m.averaged_weights : m.weights, x)];
}

struct EvalResult {
  double accuracy = 0.0;
  std::vector<std::vector<uint64_t>> confusion;  // gold x pred
  uint64_t n_test = 0;
  double majority_baseline = 0.0;
  std::vector<std::string> classes;
  uint64_t n_empty_train = 0, n_empty_test = 0;
};

// Proportional stratified subsample with largest-remainder rounding.
// Returns indices into `labels`, grouped by class.
inline std::vector<size_t> stratified_subsample(const std::vector<uint32_t>& labels,
                                                uint32_t num_classes, uint64_t train_size,
                                                uint64_t seed) {
  if (train_size > labels.size()) throw DataError("stratified_subsample: train_size too large");
  std::vector<std::vector<size_t>> by_class(num_classes);
  for (size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  const double n = double(labels.size());
  std::vector<uint64_t> quota(num_classes, 0);
  std::vector<std::pair<double, uint32_t>> remainders;
  uint64_t assigned = 0;
  for (uint32_t c = 0; c < num_classes; ++c) {
    const double exact = double(train_size) * double(by_class[c].size()) / n;
    quota[c] = uint64_t(exact);
    assigned += quota[c];
    remainders.emplace_back(-(exact - double(quota[c])), c);  // negative for descending sort
  }
  std::sort(remainders.begin(), remainders.end());
  for (size_t r = 0; assigned < train_size && r < remainders.size(); ++r) {
    const uint32_t c = remainders[r].second;
    if (quota[c] < by_class[c].size()) {
      ++quota[c];
      ++assigned;
    }
  }
  // Remainder ties and capped classes can leave a shortfall; fill round-robin.
  for (uint32_t c = 0; assigned < train_size; c = (c + 1) % num_classes) {
    if (quota[c] < by_class[c].size()) {
      ++quota[c];
      ++assigned;
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<size_t> out;
  out.reserve(train_size);
  for (uint32_t c = 0; c < num_classes; ++c) {
    shuffle_deterministic(by_class[c], rng);
    for (uint64_t i = 0; i < quota[c]; ++i) out.push_back(by_class[c][i]);
  }
  return out;
}

struct LabeledBag {
  std::string label;
  BagOfWords bag;
};

// Train an averaged perceptron on document vectors from one side of the model
// and evaluate it on documents from the other side. The idf pools supply the
// tf-idf statistics for each language (unlabeled use of the training pools).
inline EvalResult cross_lingual_eval(const BilingualModel& m, bool train_on_src_side,
                                     const std::vector<LabeledBag>& train_docs,
                                     const std::vector<LabeledBag>& test_docs,
                                     const std::vector<BagOfWords>& idf_pool_train,
                                     const std::vector<BagOfWords>& idf_pool_test,
                                     uint64_t train_size, uint64_t seed, uint32_t epochs = 10,
                                     bool l2_normalize = false) {
  if (train_docs.empty() || test_docs.empty()) throw DataError("cross_lingual_eval: empty docs");
  if (train_size > train_docs.size())
    throw DataError("cross_lingual_eval: train_size exceeds training pool");

  EvalResult res;
  std::set<std::string> label_set;
  for (const auto& d : train_docs) label_set.insert(d.label);
  res.classes.assign(label_set.begin(), label_set.end());
  std::map<std::string, uint32_t> class_idx;
  for (uint32_t i = 0; i < res.classes.size(); ++i) class_idx[res.classes[i]] = i;
  for (const auto& d : test_docs)
    if (!class_idx.count(d.label))
      throw DataError("cross_lingual_eval: test label not covered by training set: " + d.label);

  EmbeddingTable table_train = embedding_table(m, train_on_src_side);
  EmbeddingTable table_test = embedding_table(m, !train_on_src_side);
  // Vocabulary for the idf statistics is implied by each side's word list.
  Vocabulary vtrain, vtest;
  vtrain.words = table_train.words;
  vtest.words = table_test.words;
  TfIdfStats idf_train = compute_tfidf(idf_pool_train, vtrain);
  TfIdfStats idf_test = compute_tfidf(idf_pool_test, vtest);

  auto vectorize = [&](const LabeledBag& d, const EmbeddingTable& t, const TfIdfStats& s,
                       uint64_t& empty_counter) {
    if (d.bag.empty()) ++empty_counter;
    Vector v = doc_vector(d.bag, t, s);
    if (l2_normalize) {
      const double norm = std::sqrt(dot(v, v));
      if (norm > 0.0)
        for (double& x : v) x /= norm;
    }
    return v;
  };

  std::vector<uint32_t> train_labels;
  for (const auto& d : train_docs) train_labels.push_back(class_idx[d.label]);
  auto subset = stratified_subsample(train_labels, uint32_t(res.classes.size()), train_size, seed);

  std::vector<std::pair<Vector, std::string>> examples;
  std::vector<uint64_t> train_label_counts(res.classes.size(), 0);
  for (size_t i : subset) {
    examples.emplace_back(vectorize(train_docs[i], table_train, idf_train, res.n_empty_train),
                          train_docs[i].label);
    ++train_label_counts[class_idx[train_docs[i].label]];
  }

  PerceptronModel pm = perceptron_train(examples, epochs, seed);

  const uint32_t majority_class = uint32_t(
      std::max_element(train_label_counts.begin(), train_label_counts.end()) -
      train_label_counts.begin());

  res.confusion.assign(res.classes.size(), std::vector<uint64_t>(res.classes.size(), 0));
  uint64_t correct = 0, majority_correct = 0;
  for (const auto& d : test_docs) {
    Vector v = vectorize(d, table_test, idf_test, res.n_empty_test);
    const std::string pred = predict(pm, v);
    const uint32_t gold = class_idx[d.label];
    ++res.confusion[gold][class_idx[pred]];
    if (pred == d.label) ++correct;
    if (gold == majority_class) ++majority_correct;
  }
  res.n_test = test_docs.size();
  res.accuracy = double(correct) / double(res.n_test);
  res.majority_baseline = double(majority_correct) / double(res.n_test);
  return res;
}

}  // namespace bae
