#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "bae/core.hpp"
#include "bae/corpus.hpp"

namespace bae {

enum class Nonlinearity : uint8_t { sigmoid = 0, tanh = 1 };
enum class Aggregation : uint8_t { sum = 0, average = 1 };

inline double sigm(double a) { return 1.0 / (1.0 + std::exp(-a)); }

inline double activate(double a, Nonlinearity h) {
  return h == Nonlinearity::sigmoid ? sigm(a) : std::tanh(a);
}

// Derivative of the nonlinearity expressed through its output value.
inline double activate_deriv(double y, Nonlinearity h) {
  return h == Nonlinearity::sigmoid ? y * (1.0 - y) : 1.0 - y * y;
}

// Probabilities are clamped inside logs to keep losses finite.
constexpr double kProbClampLo = 1e-10;
constexpr double kProbClampHi = 1.0 - 1e-10;

inline double clamp_prob(double p) { return std::clamp(p, kProbClampLo, kProbClampHi); }

struct EncoderParams {
  Matrix W;  // D x V, columns are word vectors
  Vector c;  // length D
  Nonlinearity nonlinearity = Nonlinearity::sigmoid;
  Aggregation aggregation = Aggregation::sum;
};

struct BinaryDecoderParams {
  Matrix Vdec;  // V x D; unused when tied (the encoder W transposed is used instead)
  Vector b;     // length V
  bool tied = false;
};

// ---------------------------------------------------------------------------
// Encoders
// ---------------------------------------------------------------------------

// phi = h(c + sum of W columns for the words present). Duplicates contribute once.
inline Vector encode_binary(const BagOfWords& bag, const Matrix& W, const Vector& c,
                            Nonlinearity h) {
  Vector phi(c);
  for (const auto& [w, n] : bag.entries) {
    if (w >= W.cols) throw DataError("encode: word index out of range");
    for (uint32_t d = 0; d < W.rows; ++d) phi[d] += W(d, w);
  }
  for (double& v : phi) v = activate(v, h);
  return phi;
}

// Count-weighted sum of columns; with average aggregation the word sum is
// divided by the total count before adding c.
inline Vector encode_counts(const BagOfWords& bag, const Matrix& W, const Vector& c,
                            Nonlinearity h, Aggregation agg) {
  if (agg == Aggregation::average && bag.empty())
    throw DataError("encode: empty bag with average aggregation");
  Vector acc(W.rows, 0.0);
  for (const auto& [w, n] : bag.entries) {
    if (w >= W.cols) throw DataError("encode: word index out of range");
    for (uint32_t d = 0; d < W.rows; ++d) acc[d] += double(n) * W(d, w);
  }
  const double scale = agg == Aggregation::average ? 1.0 / double(bag.total) : 1.0;
  Vector phi(W.rows);
  for (uint32_t d = 0; d < W.rows; ++d) phi[d] = activate(c[d] + scale * acc[d], h);
  return phi;
}

inline Vector encode_binary(const BagOfWords& bag, const EncoderParams& p) {
  return encode_binary(bag, p.W, p.c, p.nonlinearity);
}

inline Vector encode_counts(const BagOfWords& bag, const EncoderParams& p) {
  return encode_counts(bag, p.W, p.c, p.nonlinearity, p.aggregation);
}

// ---------------------------------------------------------------------------
// Binary reconstruction decoder
// ---------------------------------------------------------------------------

// Decoder row score a_i = b_i + row_i . phi, where row_i comes from Vdec (V x D)
// or, when tied, from column i of the embedding matrix W (D x V).
inline double decoder_row_score(const Matrix& dec_weight, bool tied, uint32_t i,
                                const Vector& phi, double bias) {
  double a = bias;
  if (tied) {
    for (uint32_t d = 0; d < dec_weight.rows; ++d) a += dec_weight(d, i) * phi[d];
  } else {
    for (uint32_t d = 0; d < dec_weight.cols; ++d) a += dec_weight(i, d) * phi[d];
  }
  return a;
}

inline Vector decode_binary(const Vector& phi, const Matrix& dec_weight, bool tied,
                            const Vector& b) {
  const uint32_t v = tied ? dec_weight.cols : dec_weight.rows;
  const uint32_t d = tied ? dec_weight.rows : dec_weight.cols;
  if (d != phi.size() || b.size() != v) throw DataError("decode_binary: shape mismatch");
  Vector vhat(v);
  for (uint32_t i = 0; i < v; ++i) vhat[i] = sigm(decoder_row_score(dec_weight, tied, i, phi, b[i]));
  return vhat;
}

inline Vector decode_binary(const Vector& phi, const BinaryDecoderParams& p,
                            const Matrix* W_if_tied = nullptr) {
  if (p.tied) {
    if (!W_if_tied) throw DataError("decode_binary: tied decoder needs the encoder matrix");
    return decode_binary(phi, *W_if_tied, true, p.b);
  }
  return decode_binary(phi, p.Vdec, false, p.b);
}

// Full-V cross-entropy against the binary view, in nats.
inline double binary_xent_loss(const std::vector<uint32_t>& target, const Vector& vhat) {
  double loss = 0.0;
  size_t t = 0;
  for (uint32_t i = 0; i < vhat.size(); ++i) {
    const bool present = t < target.size() && target[t] == i;
    if (present) ++t;
    const double p = clamp_prob(vhat[i]);
    loss -= present ? std::log(p) : std::log(1.0 - p);
  }
  return loss;
}

// Loss plus gradient accumulation in one pass. Any sink may be null. When tied,
// gdec must have the shape of the embedding matrix (D x V), otherwise V x D.
inline double binary_loss_backward(const std::vector<uint32_t>& target, const Vector& phi,
                                   const Matrix& dec_weight, bool tied, const Vector& bias,
                                   Matrix* gdec, Vector* gbias, Vector* gphi) {
  const uint32_t v = tied ? dec_weight.cols : dec_weight.rows;
  const uint32_t dim = uint32_t(phi.size());
  if (bias.size() != v) throw DataError("binary_loss_backward: shape mismatch");
  double loss = 0.0;
  size_t t = 0;
  for (uint32_t i = 0; i < v; ++i) {
    const bool present = t < target.size() && target[t] == i;
    if (present) ++t;
    const double p = sigm(decoder_row_score(dec_weight, tied, i, phi, bias[i]));
    const double pc = clamp_prob(p);
    loss -= present ? std::log(pc) : std::log(1.0 - pc);
    const double delta = p - (present ? 1.0 : 0.0);
    if (gbias) (*gbias)[i] += delta;
    if (gdec) {
      if (tied) {
        for (uint32_t d = 0; d < dim; ++d) (*gdec)(d, i) += delta * phi[d];
      } else {
        for (uint32_t d = 0; d < dim; ++d) (*gdec)(i, d) += delta * phi[d];
      }
    }
    if (gphi) {
      for (uint32_t d = 0; d < dim; ++d)
        (*gphi)[d] += delta * (tied ? dec_weight(d, i) : dec_weight(i, d));
    }
  }
  return loss;
}

// Backprop through phi = h(c + weighted column sum). For the binary encoder every
// present word has unit weight; for the count encoder weights are counts, divided
// by the total with average aggregation.
inline void encoder_backward(const BagOfWords& bag, bool binary, Aggregation agg, Nonlinearity h,
                             const Vector& phi, const Vector& gphi, Matrix* gW, Vector* gc) {
  Vector dpre(phi.size());
  for (size_t d = 0; d < phi.size(); ++d) dpre[d] = gphi[d] * activate_deriv(phi[d], h);
  if (gc)
    for (size_t d = 0; d < phi.size(); ++d) (*gc)[d] += dpre[d];
  if (!gW) return;
  const double denom = (!binary && agg == Aggregation::average) ? double(bag.total) : 1.0;
  for (const auto& [w, n] : bag.entries) {
    const double wgt = binary ? 1.0 : double(n) / denom;
    for (uint32_t d = 0; d < gW->rows; ++d) (*gW)(d, w) += wgt * dpre[d];
  }
}

// ---------------------------------------------------------------------------
// Tree decoder
// ---------------------------------------------------------------------------

struct WordTree {
  uint32_t num_words = 0;
  uint64_t seed = 0;
  std::vector<uint32_t> perm;  // word index -> leaf position
  Vector node_bias;            // length V-1, per internal node
  Matrix node_weight;          // (V-1) x D
  // Per word, (internal node id, branch bit) pairs from root to leaf.
  std::vector<std::vector<std::pair<uint32_t, uint8_t>>> paths;

  bool operator==(const WordTree&) const = default;
};

// Paths over leaf positions of the deterministic complete binary tree:
// [a,b) splits into [a,m) / [m,b) with m = a + ceil((b-a)/2), internal nodes
// numbered in pre-order, bit 0 = left.
inline std::vector<std::vector<std::pair<uint32_t, uint8_t>>> tree_leaf_paths(uint32_t V) {
  std::vector<std::vector<std::pair<uint32_t, uint8_t>>> paths(V);
  uint32_t next_id = 0;
  std::vector<std::pair<uint32_t, uint8_t>> prefix;
  auto rec = [&](auto&& self, uint32_t a, uint32_t b) -> void {
    if (b - a == 1) {
      paths[a] = prefix;
      return;
    }
    const uint32_t id = next_id++;
    const uint32_t m = a + (b - a + 1) / 2;
    prefix.emplace_back(id, 0);
    self(self, a, m);
    prefix.back().second = 1;
    self(self, m, b);
    prefix.pop_back();
  };
  rec(rec, 0, V);
  return paths;
}

// Uniformly seeded-random assignment of words to leaves; parameters start at zero
// so the initial word distribution is exactly uniform.
inline WordTree build_tree(uint32_t V, uint32_t D, uint64_t seed) {
  if (V < 2) throw DataError("build_tree: need at least 2 words");
  WordTree t;
  t.num_words = V;
  t.seed = seed;
  t.perm.resize(V);
  for (uint32_t i = 0; i < V; ++i) t.perm[i] = i;
  std::mt19937_64 rng(seed);
  for (uint32_t i = V - 1; i > 0; --i) {
    uint32_t j = uint32_t(rand_below(rng, i + 1));
    std::swap(t.perm[i], t.perm[j]);
  }
  t.node_bias.assign(V - 1, 0.0);
  t.node_weight = Matrix(V - 1, D);
  auto leaf_paths = tree_leaf_paths(V);
  t.paths.resize(V);
  for (uint32_t w = 0; w < V; ++w) t.paths[w] = leaf_paths[t.perm[w]];
  return t;
}

// Rebuilds paths for an existing permutation (used when loading models).
inline void rebuild_tree_paths(WordTree& t, uint32_t D) {
  const uint32_t V = uint32_t(t.perm.size());
  t.num_words = V;
  auto leaf_paths = tree_leaf_paths(V);
  t.paths.resize(V);
  for (uint32_t w = 0; w < V; ++w) t.paths[w] = leaf_paths[t.perm[w]];
  (void)D;
}

inline double tree_branch_prob(uint32_t node, const Vector& phi, const WordTree& t) {
  double a = t.node_bias[node];
  for (uint32_t d = 0; d < t.node_weight.cols; ++d) a += t.node_weight(node, d) * phi[d];
  return sigm(a);
}

inline double tree_word_prob(uint32_t word, const Vector& phi, const WordTree& t) {
  double p = 1.0;
  for (const auto& [node, bit] : t.paths[word]) {
    const double pb = tree_branch_prob(node, phi, t);
    p *= bit ? pb : 1.0 - pb;
  }
  return p;
}

// Count-weighted negative log-likelihood; branch activations shared between
// paths are computed once.
inline double tree_nll_loss(const BagOfWords& bag, const Vector& phi, const WordTree& t) {
  if (bag.empty()) throw DataError("tree_nll_loss: empty bag");
  std::vector<double> cache(t.num_words - 1, -1.0);
  double loss = 0.0;
  for (const auto& [word, count] : bag.entries) {
    if (word >= t.num_words) throw DataError("tree_nll_loss: word index out of range");
    double nll = 0.0;
    for (const auto& [node, bit] : t.paths[word]) {
      if (cache[node] < 0.0) cache[node] = tree_branch_prob(node, phi, t);
      nll -= std::log(clamp_prob(bit ? cache[node] : 1.0 - cache[node]));
    }
    loss += double(count) * nll;
  }
  return loss;
}

// Loss plus gradients with respect to the node parameters and phi. Per-node
// deltas are pooled before the rank-1 updates so shared prefixes cost once.
inline double tree_loss_backward(const BagOfWords& bag, const Vector& phi, const WordTree& t,
                                 Vector* gnode_bias, Matrix* gnode_weight, Vector* gphi) {
  if (bag.empty()) throw DataError("tree_loss_backward: empty bag");
  const uint32_t n_nodes = t.num_words - 1;
  std::vector<double> cache(n_nodes, -1.0);
  std::vector<double> node_delta(n_nodes, 0.0);
  std::vector<char> touched(n_nodes, 0);
  double loss = 0.0;
  for (const auto& [word, count] : bag.entries) {
    if (word >= t.num_words) throw DataError("tree_loss_backward: word index out of range");
    for (const auto& [node, bit] : t.paths[word]) {
      if (cache[node] < 0.0) cache[node] = tree_branch_prob(node, phi, t);
      const double s = cache[node];
      loss -= double(count) * std::log(clamp_prob(bit ? s : 1.0 - s));
      node_delta[node] += double(count) * (s - double(bit));
      touched[node] = 1;
    }
  }
  for (uint32_t node = 0; node < n_nodes; ++node) {
    if (!touched[node]) continue;
    const double d = node_delta[node];
    if (gnode_bias) (*gnode_bias)[node] += d;
    for (uint32_t k = 0; k < t.node_weight.cols; ++k) {
      if (gnode_weight) (*gnode_weight)(node, k) += d * phi[k];
      if (gphi) (*gphi)[k] += d * t.node_weight(node, k);
    }
  }
  return loss;
}

// ---------------------------------------------------------------------------
// Monolingual full backward passes
// ---------------------------------------------------------------------------

struct BinaryLossGrad {
  double loss = 0.0;
  Matrix gW;
  Vector gc;
  Matrix gVdec;  // empty when tied (folded into gW)
  Vector gb;
};

inline BinaryLossGrad backward_binary(const BagOfWords& bag, const EncoderParams& enc,
                                      const BinaryDecoderParams& dec) {
  BinaryLossGrad g;
  g.gW = Matrix(enc.W.rows, enc.W.cols);
  g.gc.assign(enc.c.size(), 0.0);
  g.gb.assign(dec.b.size(), 0.0);
  if (!dec.tied) g.gVdec = Matrix(dec.Vdec.rows, dec.Vdec.cols);
  Vector phi = encode_binary(bag, enc);
  Vector gphi(phi.size(), 0.0);
  const Matrix& dw = dec.tied ? enc.W : dec.Vdec;
  Matrix* gdec = dec.tied ? &g.gW : &g.gVdec;
  g.loss = binary_loss_backward(binary_view(bag), phi, dw, dec.tied, dec.b, gdec, &g.gb, &gphi);
  encoder_backward(bag, true, enc.aggregation, enc.nonlinearity, phi, gphi, &g.gW, &g.gc);
  return g;
}

struct TreeLossGrad {
  double loss = 0.0;
  Matrix gW;
  Vector gc;
  Vector gnode_bias;
  Matrix gnode_weight;
};

inline TreeLossGrad backward_tree(const BagOfWords& bag, const EncoderParams& enc,
                                  const WordTree& tree) {
  TreeLossGrad g;
  g.gW = Matrix(enc.W.rows, enc.W.cols);
  g.gc.assign(enc.c.size(), 0.0);
  g.gnode_bias.assign(tree.node_bias.size(), 0.0);
  g.gnode_weight = Matrix(tree.node_weight.rows, tree.node_weight.cols);
  Vector phi = encode_counts(bag, enc);
  Vector gphi(phi.size(), 0.0);
  g.loss = tree_loss_backward(bag, phi, tree, &g.gnode_bias, &g.gnode_weight, &gphi);
  encoder_backward(bag, false, enc.aggregation, enc.nonlinearity, phi, gphi, &g.gW, &g.gc);
  return g;
}

}  // namespace bae
