#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "bae/autoencoder.hpp"
#include "bae/core.hpp"
#include "bae/corpus.hpp"

namespace bae {

enum class Variant : uint8_t { binary = 0, tree = 1 };

constexpr double kCorrEps = 1e-8;

struct BilingualModel {
  Variant variant = Variant::binary;
  Nonlinearity nonlinearity = Nonlinearity::sigmoid;
  Aggregation aggregation = Aggregation::sum;
  bool tied = false;
  uint32_t dim = 0;

  Matrix Wx, Wy;  // D x Vx, D x Vy
  Vector c;       // shared encoder bias

  // binary variant decoders
  Matrix Vdec_x, Vdec_y;  // Vx x D, Vy x D; empty when tied
  Vector bdec_x, bdec_y;

  // tree variant decoders
  WordTree tree_x, tree_y;
  uint64_t tree_seed = 0;

  std::vector<std::string> vocab_x, vocab_y;

  uint32_t vx() const { return Wx.cols; }
  uint32_t vy() const { return Wy.cols; }

  bool operator==(const BilingualModel&) const = default;
};

struct TrainConfig {
  uint32_t dim = 40;
  uint32_t epochs = 20;
  double learning_rate = 0.1;
  uint32_t merge_k = 5;
  double lambda = 0.0;
  uint32_t corr_batch = 20;  // merged instances per correlation window
  uint64_t seed = 1;
  Variant variant = Variant::binary;
  Nonlinearity nonlinearity = Nonlinearity::sigmoid;
  Aggregation aggregation = Aggregation::sum;
  bool tie_decoders = false;
  bool cross_only = false;  // drop the two self-reconstruction terms for pairs
  uint32_t threads = 1;
};

struct EpochStats {
  double mean_lx = 0.0, mean_ly = 0.0, mean_lxy = 0.0, mean_lyx = 0.0;
  double mean_corr = 0.0;
  uint64_t updates = 0;
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  double final_loss_sum = 0.0;  // forward-only 4-loss sum over merged corpus at final params
  uint64_t param_checksum = 0;
};

// ---------------------------------------------------------------------------
// Model init
// ---------------------------------------------------------------------------

inline BilingualModel init_model(const TrainConfig& cfg, std::vector<std::string> vocab_x,
                                 std::vector<std::string> vocab_y) {
  BilingualModel m;
  m.variant = cfg.variant;
  m.nonlinearity = cfg.nonlinearity;
  m.aggregation = cfg.aggregation;
  m.tied = cfg.variant == Variant::binary && cfg.tie_decoders;
  m.dim = cfg.dim;
  const uint32_t vx = uint32_t(vocab_x.size());
  const uint32_t vy = uint32_t(vocab_y.size());
  m.vocab_x = std::move(vocab_x);
  m.vocab_y = std::move(vocab_y);

  std::mt19937_64 rng(cfg.seed);
  const double scale = 0.1 / std::sqrt(double(cfg.dim));
  auto fill_uniform = [&](Matrix& w) {
    for (double& v : w.data) v = (2.0 * uniform01(rng) - 1.0) * scale;
  };

  m.Wx = Matrix(cfg.dim, vx);
  m.Wy = Matrix(cfg.dim, vy);
  fill_uniform(m.Wx);
  fill_uniform(m.Wy);
  m.c.assign(cfg.dim, 0.0);

  if (cfg.variant == Variant::binary) {
    m.bdec_x.assign(vx, 0.0);
    m.bdec_y.assign(vy, 0.0);
    if (!m.tied) {
      m.Vdec_x = Matrix(vx, cfg.dim);
      m.Vdec_y = Matrix(vy, cfg.dim);
      fill_uniform(m.Vdec_x);
      fill_uniform(m.Vdec_y);
    }
  } else {
    m.tree_seed = cfg.seed;
    m.tree_x = build_tree(vx, cfg.dim, cfg.seed);
    m.tree_y = build_tree(vy, cfg.dim, cfg.seed + 1);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Forward losses
// ---------------------------------------------------------------------------

inline Vector encode_side(const BagOfWords& bag, const BilingualModel& m, bool src) {
  const Matrix& W = src ? m.Wx : m.Wy;
  if (m.variant == Variant::binary) return encode_binary(bag, W, m.c, m.nonlinearity);
  return encode_counts(bag, W, m.c, m.nonlinearity, m.aggregation);
}

// Score a target-side bag given an encoding, using that side's decoder.
inline double decode_loss(const BagOfWords& target, const Vector& phi, const BilingualModel& m,
                          bool target_is_src) {
  if (m.variant == Variant::binary) {
    const Matrix& dw = m.tied ? (target_is_src ? m.Wx : m.Wy)
                              : (target_is_src ? m.Vdec_x : m.Vdec_y);
    const Vector& b = target_is_src ? m.bdec_x : m.bdec_y;
    return binary_loss_backward(binary_view(target), phi, dw, m.tied, b, nullptr, nullptr,
                                nullptr);
  }
  return tree_nll_loss(target, phi, target_is_src ? m.tree_x : m.tree_y);
}

struct PairLosses {
  double lx = 0.0, ly = 0.0, lxy = 0.0, lyx = 0.0;
};

// The four reconstruction losses for one aligned pair: self-reconstruction on
// each side plus both cross reconstructions.
inline PairLosses pair_losses(const AlignedPair& pair, const BilingualModel& m) {
  if (pair.src.empty() || pair.tgt.empty()) throw DataError("pair_losses: empty side");
  Vector phi_x = encode_side(pair.src, m, true);
  Vector phi_y = encode_side(pair.tgt, m, false);
  PairLosses l;
  l.lx = decode_loss(pair.src, phi_x, m, true);
  l.lxy = decode_loss(pair.tgt, phi_x, m, false);
  l.ly = decode_loss(pair.tgt, phi_y, m, false);
  l.lyx = decode_loss(pair.src, phi_y, m, true);
  return l;
}

// ---------------------------------------------------------------------------
// Correlation regularizer
// ---------------------------------------------------------------------------

// Sum over dimensions of the Pearson correlation across rows, each standard
// deviation stabilized by kCorrEps in the denominator.
inline double correlation(const Matrix& phis_x, const Matrix& phis_y) {
  if (phis_x.rows < 2 || phis_x.rows != phis_y.rows || phis_x.cols != phis_y.cols)
    throw DataError("correlation: need matching shapes with at least 2 rows");
  const uint32_t B = phis_x.rows, D = phis_x.cols;
  double total = 0.0;
  for (uint32_t d = 0; d < D; ++d) {
    double mx = 0.0, my = 0.0;
    for (uint32_t i = 0; i < B; ++i) {
      mx += phis_x(i, d);
      my += phis_y(i, d);
    }
    mx /= B;
    my /= B;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (uint32_t i = 0; i < B; ++i) {
      const double u = phis_x(i, d) - mx;
      const double v = phis_y(i, d) - my;
      sxy += u * v;
      sxx += u * u;
      syy += v * v;
    }
    total += sxy / ((std::sqrt(sxx) + kCorrEps) * (std::sqrt(syy) + kCorrEps));
  }
  return total;
}

// Accumulates scale * d correlation / d phis into the gradient matrices and
// returns the correlation value. Gradients flow through the batch statistics.
inline double correlation_backward(const Matrix& phis_x, const Matrix& phis_y, double scale,
                                   Matrix* gx, Matrix* gy) {
  if (phis_x.rows < 2 || phis_x.rows != phis_y.rows || phis_x.cols != phis_y.cols)
    throw DataError("correlation: need matching shapes with at least 2 rows");
  const uint32_t B = phis_x.rows, D = phis_x.cols;
  double total = 0.0;
  Vector u(B), v(B);
  for (uint32_t d = 0; d < D; ++d) {
    double mx = 0.0, my = 0.0;
    for (uint32_t i = 0; i < B; ++i) {
      mx += phis_x(i, d);
      my += phis_y(i, d);
    }
    mx /= B;
    my /= B;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (uint32_t i = 0; i < B; ++i) {
      u[i] = phis_x(i, d) - mx;
      v[i] = phis_y(i, d) - my;
      sxy += u[i] * v[i];
      sxx += u[i] * u[i];
      syy += v[i] * v[i];
    }
    const double sx = std::sqrt(sxx), sy = std::sqrt(syy);
    const double denom = (sx + kCorrEps) * (sy + kCorrEps);
    total += sxy / denom;
    for (uint32_t i = 0; i < B; ++i) {
      double dx = v[i] / denom;
      double dy = u[i] / denom;
      if (sx > 0.0) dx -= sxy * u[i] / (sx * (sx + kCorrEps) * (sx + kCorrEps) * (sy + kCorrEps));
      if (sy > 0.0) dy -= sxy * v[i] / (sy * (sy + kCorrEps) * (sy + kCorrEps) * (sx + kCorrEps));
      if (gx) (*gx)(i, d) += scale * dx;
      if (gy) (*gy)(i, d) += scale * dy;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Batch objective and gradients
// ---------------------------------------------------------------------------

enum class InstanceKind : uint8_t { pair, mono_src, mono_tgt };

struct TrainInstance {
  InstanceKind kind = InstanceKind::pair;
  BagOfWords src;  // mono instances keep their bag here regardless of language
  BagOfWords tgt;  // pair instances only
};

inline TrainInstance make_pair_instance(AlignedPair p) {
  TrainInstance t;
  t.kind = InstanceKind::pair;
  t.src = std::move(p.src);
  t.tgt = std::move(p.tgt);
  return t;
}

struct ModelGrad {
  Matrix gWx, gWy;
  Vector gc;
  Matrix gVdec_x, gVdec_y;
  Vector gbdec_x, gbdec_y;
  Vector gtbias_x, gtbias_y;
  Matrix gtweight_x, gtweight_y;

  void init_like(const BilingualModel& m) {
    gWx = Matrix(m.Wx.rows, m.Wx.cols);
    gWy = Matrix(m.Wy.rows, m.Wy.cols);
    gc.assign(m.c.size(), 0.0);
    if (m.variant == Variant::binary) {
      if (!m.tied) {
        gVdec_x = Matrix(m.Vdec_x.rows, m.Vdec_x.cols);
        gVdec_y = Matrix(m.Vdec_y.rows, m.Vdec_y.cols);
      }
      gbdec_x.assign(m.bdec_x.size(), 0.0);
      gbdec_y.assign(m.bdec_y.size(), 0.0);
    } else {
      gtbias_x.assign(m.tree_x.node_bias.size(), 0.0);
      gtbias_y.assign(m.tree_y.node_bias.size(), 0.0);
      gtweight_x = Matrix(m.tree_x.node_weight.rows, m.tree_x.node_weight.cols);
      gtweight_y = Matrix(m.tree_y.node_weight.rows, m.tree_y.node_weight.cols);
    }
  }

  void clear() {
    auto z = [](Matrix& m) { std::fill(m.data.begin(), m.data.end(), 0.0); };
    auto zv = [](Vector& v) { std::fill(v.begin(), v.end(), 0.0); };
    z(gWx); z(gWy); zv(gc);
    z(gVdec_x); z(gVdec_y); zv(gbdec_x); zv(gbdec_y);
    zv(gtbias_x); zv(gtbias_y); z(gtweight_x); z(gtweight_y);
  }
};

struct BatchStats {
  double objective = 0.0;
  double lx = 0.0, ly = 0.0, lxy = 0.0, lyx = 0.0;  // sums over pair instances
  double mono_loss = 0.0;
  double corr = 0.0;
  bool has_corr = false;
  uint32_t n_pairs = 0, n_mono = 0;
};

namespace detail {

// Per-instance forward results staged so gradient accumulation can run in a
// fixed sequential order regardless of thread count.
struct InstanceWork {
  Vector phi_x, phi_y;
  Vector gphi_x, gphi_y;  // from the loss terms only
  PairLosses losses;
  double mono_loss = 0.0;
};

inline double decode_forward_backward(const BagOfWords& target, const Vector& phi,
                                      const BilingualModel& m, bool target_is_src,
                                      Vector* delta_out, Vector* gphi) {
  if (m.variant == Variant::binary) {
    const Matrix& dw = m.tied ? (target_is_src ? m.Wx : m.Wy)
                              : (target_is_src ? m.Vdec_x : m.Vdec_y);
    const uint32_t v = m.tied ? dw.cols : dw.rows;
    const Vector& bias = target_is_src ? m.bdec_x : m.bdec_y;
    auto keys = binary_view(target);
    double loss = 0.0;
    size_t t = 0;
    delta_out->assign(v, 0.0);
    for (uint32_t i = 0; i < v; ++i) {
      const bool present = t < keys.size() && keys[t] == i;
      if (present) ++t;
      const double p = sigm(decoder_row_score(dw, m.tied, i, phi, bias[i]));
      const double pc = clamp_prob(p);
      loss -= present ? std::log(pc) : std::log(1.0 - pc);
      const double delta = p - (present ? 1.0 : 0.0);
      (*delta_out)[i] = delta;
      if (gphi)
        for (uint32_t d = 0; d < phi.size(); ++d)
          (*gphi)[d] += delta * (m.tied ? dw(d, i) : dw(i, d));
    }
    return loss;
  }
  // Tree variant: delta_out holds pooled per-node deltas, indexed by node id.
  const WordTree& tree = target_is_src ? m.tree_x : m.tree_y;
  delta_out->assign(tree.num_words - 1, 0.0);
  std::vector<double> cache(tree.num_words - 1, -1.0);
  double loss = 0.0;
  for (const auto& [word, count] : target.entries) {
    if (word >= tree.num_words) throw DataError("decode: word index out of range");
    for (const auto& [node, bit] : tree.paths[word]) {
      if (cache[node] < 0.0) cache[node] = tree_branch_prob(node, phi, tree);
      const double s = cache[node];
      loss -= double(count) * std::log(clamp_prob(bit ? s : 1.0 - s));
      (*delta_out)[node] += double(count) * (s - double(bit));
    }
  }
  if (gphi) {
    for (uint32_t node = 0; node + 1 < tree.num_words; ++node) {
      const double d = (*delta_out)[node];
      if (d == 0.0) continue;
      for (uint32_t k = 0; k < phi.size(); ++k) (*gphi)[k] += d * tree.node_weight(node, k);
    }
  }
  return loss;
}

// Applies a staged delta vector to the decoder parameter gradients.
inline void accumulate_decoder_grad(const Vector& delta, const Vector& phi,
                                    const BilingualModel& m, bool target_is_src, ModelGrad& g) {
  if (m.variant == Variant::binary) {
    Vector& gbias = target_is_src ? g.gbdec_x : g.gbdec_y;
    Matrix& gw = m.tied ? (target_is_src ? g.gWx : g.gWy)
                        : (target_is_src ? g.gVdec_x : g.gVdec_y);
    for (uint32_t i = 0; i < delta.size(); ++i) {
      const double d = delta[i];
      if (d == 0.0) continue;
      gbias[i] += d;
      if (m.tied) {
        for (uint32_t k = 0; k < phi.size(); ++k) gw(k, i) += d * phi[k];
      } else {
        for (uint32_t k = 0; k < phi.size(); ++k) gw(i, k) += d * phi[k];
      }
    }
  } else {
    Vector& gbias = target_is_src ? g.gtbias_x : g.gtbias_y;
    Matrix& gw = target_is_src ? g.gtweight_x : g.gtweight_y;
    for (uint32_t node = 0; node < delta.size(); ++node) {
      const double d = delta[node];
      if (d == 0.0) continue;
      gbias[node] += d;
      for (uint32_t k = 0; k < phi.size(); ++k) gw(node, k) += d * phi[k];
    }
  }
}

}  // namespace detail

// Objective over one batch: sum of the reconstruction losses minus
// lambda * correlation over the batch's pair encodings. Gradients, when
// requested, are accumulated in instance order for determinism.
inline BatchStats batch_objective(std::span<const TrainInstance> instances,
                                  const BilingualModel& m, const TrainConfig& cfg,
                                  ModelGrad* grads) {
  const size_t n = instances.size();
  std::vector<detail::InstanceWork> work(n);
  // Staged decoder deltas, only kept when gradients are needed.
  struct Deltas {
    Vector self_x, self_y, cross_xy, cross_yx, mono;
  };
  std::vector<Deltas> deltas(grads ? n : 0);

  auto run_forward = [&](size_t i) {
    const TrainInstance& inst = instances[i];
    detail::InstanceWork& w = work[i];
    Deltas scratch;
    Deltas& dl = grads ? deltas[i] : scratch;
    if (inst.kind == InstanceKind::pair) {
      if (inst.src.empty() || inst.tgt.empty()) throw DataError("training pair with empty side");
      w.phi_x = encode_side(inst.src, m, true);
      w.phi_y = encode_side(inst.tgt, m, false);
      w.gphi_x.assign(w.phi_x.size(), 0.0);
      w.gphi_y.assign(w.phi_y.size(), 0.0);
      Vector* gx = grads ? &w.gphi_x : nullptr;
      Vector* gy = grads ? &w.gphi_y : nullptr;
      if (!cfg.cross_only) {
        w.losses.lx = detail::decode_forward_backward(inst.src, w.phi_x, m, true, &dl.self_x, gx);
        w.losses.ly = detail::decode_forward_backward(inst.tgt, w.phi_y, m, false, &dl.self_y, gy);
      }
      w.losses.lxy = detail::decode_forward_backward(inst.tgt, w.phi_x, m, false, &dl.cross_xy, gx);
      w.losses.lyx = detail::decode_forward_backward(inst.src, w.phi_y, m, true, &dl.cross_yx, gy);
    } else {
      const bool src = inst.kind == InstanceKind::mono_src;
      if (inst.src.empty()) throw DataError("monolingual instance with empty bag");
      w.phi_x = encode_side(inst.src, m, src);
      w.gphi_x.assign(w.phi_x.size(), 0.0);
      w.mono_loss = detail::decode_forward_backward(inst.src, w.phi_x, m, src, &dl.mono,
                                                    grads ? &w.gphi_x : nullptr);
    }
  };

  if (cfg.threads > 1 && n > 1) {
    const uint32_t nt = std::min<uint32_t>(cfg.threads, uint32_t(n));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nt);
    for (uint32_t t = 0; t < nt; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (size_t i = t; i < n; i += nt) run_forward(i);
        } catch (...) {
          errs[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  } else {
    for (size_t i = 0; i < n; ++i) run_forward(i);
  }

  BatchStats stats;
  std::vector<size_t> pair_idx;
  for (size_t i = 0; i < n; ++i) {
    const auto& w = work[i];
    if (instances[i].kind == InstanceKind::pair) {
      pair_idx.push_back(i);
      ++stats.n_pairs;
      stats.lx += w.losses.lx;
      stats.ly += w.losses.ly;
      stats.lxy += w.losses.lxy;
      stats.lyx += w.losses.lyx;
    } else {
      ++stats.n_mono;
      stats.mono_loss += w.mono_loss;
    }
  }

  // Correlation over the window's pair encodings.
  if (cfg.lambda > 0.0 && pair_idx.size() >= 2) {
    const uint32_t B = uint32_t(pair_idx.size());
    const uint32_t D = m.dim;
    Matrix px(B, D), py(B, D);
    for (uint32_t i = 0; i < B; ++i)
      for (uint32_t d = 0; d < D; ++d) {
        px(i, d) = work[pair_idx[i]].phi_x[d];
        py(i, d) = work[pair_idx[i]].phi_y[d];
      }
    if (grads) {
      Matrix gpx(B, D), gpy(B, D);
      stats.corr = correlation_backward(px, py, -cfg.lambda, &gpx, &gpy);
      for (uint32_t i = 0; i < B; ++i)
        for (uint32_t d = 0; d < D; ++d) {
          work[pair_idx[i]].gphi_x[d] += gpx(i, d);
          work[pair_idx[i]].gphi_y[d] += gpy(i, d);
        }
    } else {
      stats.corr = correlation(px, py);
    }
    stats.has_corr = true;
  }

  stats.objective = stats.lx + stats.ly + stats.lxy + stats.lyx + stats.mono_loss -
                    cfg.lambda * stats.corr;
  if (!std::isfinite(stats.lx)) throw NumericError("non-finite loss term l(x)");
  if (!std::isfinite(stats.ly)) throw NumericError("non-finite loss term l(y)");
  if (!std::isfinite(stats.lxy)) throw NumericError("non-finite loss term l(x,y)");
  if (!std::isfinite(stats.lyx)) throw NumericError("non-finite loss term l(y,x)");
  if (!std::isfinite(stats.mono_loss)) throw NumericError("non-finite monolingual loss");
  if (!std::isfinite(stats.corr)) throw NumericError("non-finite correlation term");

  if (!grads) return stats;

  const bool binary_enc = m.variant == Variant::binary;
  for (size_t i = 0; i < n; ++i) {
    const TrainInstance& inst = instances[i];
    detail::InstanceWork& w = work[i];
    const Deltas& dl = deltas[i];
    if (inst.kind == InstanceKind::pair) {
      if (!cfg.cross_only) {
        detail::accumulate_decoder_grad(dl.self_x, w.phi_x, m, true, *grads);
        detail::accumulate_decoder_grad(dl.self_y, w.phi_y, m, false, *grads);
      }
      detail::accumulate_decoder_grad(dl.cross_xy, w.phi_x, m, false, *grads);
      detail::accumulate_decoder_grad(dl.cross_yx, w.phi_y, m, true, *grads);
      encoder_backward(inst.src, binary_enc, m.aggregation, m.nonlinearity, w.phi_x, w.gphi_x,
                       &grads->gWx, &grads->gc);
      encoder_backward(inst.tgt, binary_enc, m.aggregation, m.nonlinearity, w.phi_y, w.gphi_y,
                       &grads->gWy, &grads->gc);
    } else {
      const bool src = inst.kind == InstanceKind::mono_src;
      detail::accumulate_decoder_grad(dl.mono, w.phi_x, m, src, *grads);
      encoder_backward(inst.src, binary_enc, m.aggregation, m.nonlinearity, w.phi_x, w.gphi_x,
                       src ? &grads->gWx : &grads->gWy, &grads->gc);
    }
  }
  return stats;
}

inline void sgd_apply(BilingualModel& m, const ModelGrad& g, double lr) {
  auto step_m = [lr](Matrix& p, const Matrix& gp) {
    for (size_t i = 0; i < p.data.size(); ++i) p.data[i] -= lr * gp.data[i];
  };
  auto step_v = [lr](Vector& p, const Vector& gp) {
    for (size_t i = 0; i < p.size(); ++i) p[i] -= lr * gp[i];
  };
  step_m(m.Wx, g.gWx);
  step_m(m.Wy, g.gWy);
  step_v(m.c, g.gc);
  if (m.variant == Variant::binary) {
    if (!m.tied) {
      step_m(m.Vdec_x, g.gVdec_x);
      step_m(m.Vdec_y, g.gVdec_y);
    }
    step_v(m.bdec_x, g.gbdec_x);
    step_v(m.bdec_y, g.gbdec_y);
  } else {
    step_v(m.tree_x.node_bias, g.gtbias_x);
    step_v(m.tree_y.node_bias, g.gtbias_y);
    step_m(m.tree_x.node_weight, g.gtweight_x);
    step_m(m.tree_y.node_weight, g.gtweight_y);
  }
}

inline uint64_t model_checksum(const BilingualModel& m) {
  uint64_t h = fnv1a_doubles(m.Wx.data, 14695981039346656037ULL);
  h = fnv1a_doubles(m.Wy.data, h);
  h = fnv1a_doubles(m.c, h);
  h = fnv1a_doubles(m.Vdec_x.data, h);
  h = fnv1a_doubles(m.Vdec_y.data, h);
  h = fnv1a_doubles(m.bdec_x, h);
  h = fnv1a_doubles(m.bdec_y, h);
  h = fnv1a_doubles(m.tree_x.node_bias, h);
  h = fnv1a_doubles(m.tree_x.node_weight.data, h);
  h = fnv1a_doubles(m.tree_y.node_bias, h);
  h = fnv1a_doubles(m.tree_y.node_weight.data, h);
  return h;
}

// ---------------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------------

// Merged-mini-batch SGD. Pairs and optional monolingual documents are merged
// with merge_k, shuffled together each epoch, and consumed in windows of
// corr_batch instances when lambda > 0 (plain per-instance SGD otherwise).
inline TrainReport train(BilingualModel& m, const std::vector<AlignedPair>& corpus,
                         const std::vector<BagOfWords>& mono_x,
                         const std::vector<BagOfWords>& mono_y, const TrainConfig& cfg) {
  if (corpus.empty()) throw DataError("train: empty corpus");

  std::vector<TrainInstance> instances;
  for (auto& p : merge_minibatch_pairs(corpus, cfg.merge_k))
    instances.push_back(make_pair_instance(std::move(p)));
  for (auto& b : merge_minibatch(mono_x, cfg.merge_k)) {
    TrainInstance t;
    t.kind = InstanceKind::mono_src;
    t.src = std::move(b);
    instances.push_back(std::move(t));
  }
  for (auto& b : merge_minibatch(mono_y, cfg.merge_k)) {
    TrainInstance t;
    t.kind = InstanceKind::mono_tgt;
    t.src = std::move(b);
    instances.push_back(std::move(t));
  }

  const size_t batch_size = cfg.lambda > 0.0 ? std::max<uint32_t>(1, cfg.corr_batch) : 1;
  std::vector<size_t> order(instances.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  ModelGrad grads;
  grads.init_like(m);
  std::vector<TrainInstance> batch;
  TrainReport report;

  for (uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(cfg.seed + 1000003ULL * (epoch + 1));
    shuffle_deterministic(order, rng);

    EpochStats es;
    double corr_sum = 0.0;
    uint64_t corr_windows = 0, pair_count = 0;
    for (size_t start = 0; start < order.size(); start += batch_size) {
      batch.clear();
      for (size_t i = start; i < std::min(order.size(), start + batch_size); ++i)
        batch.push_back(instances[order[i]]);
      grads.clear();
      BatchStats bs = batch_objective(batch, m, cfg, &grads);
      sgd_apply(m, grads, cfg.learning_rate);
      ++es.updates;
      es.mean_lx += bs.lx;
      es.mean_ly += bs.ly;
      es.mean_lxy += bs.lxy;
      es.mean_lyx += bs.lyx;
      pair_count += bs.n_pairs;
      if (bs.has_corr) {
        corr_sum += bs.corr;
        ++corr_windows;
      }
    }
    if (pair_count > 0) {
      es.mean_lx /= double(pair_count);
      es.mean_ly /= double(pair_count);
      es.mean_lxy /= double(pair_count);
      es.mean_lyx /= double(pair_count);
    }
    es.mean_corr = corr_windows > 0 ? corr_sum / double(corr_windows) : 0.0;
    es.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.epochs.push_back(es);
  }

  // Forward-only recomputation of the loss sum at the final parameters.
  TrainConfig no_corr = cfg;
  no_corr.lambda = 0.0;
  BatchStats fin = batch_objective(instances, m, no_corr, nullptr);
  report.final_loss_sum = fin.objective;
  report.param_checksum = model_checksum(m);
  return report;
}

// ---------------------------------------------------------------------------
// Serialization (binary, little-endian)
// ---------------------------------------------------------------------------

namespace detail {

inline void put_bytes(std::ostream& out, const void* p, size_t n) {
  out.write(static_cast<const char*>(p), std::streamsize(n));
}
inline void put_u8(std::ostream& out, uint8_t v) { put_bytes(out, &v, 1); }
inline void put_u32(std::ostream& out, uint32_t v) { put_bytes(out, &v, 4); }
inline void put_u64(std::ostream& out, uint64_t v) { put_bytes(out, &v, 8); }
inline void put_f64s(std::ostream& out, const std::vector<double>& v) {
  put_bytes(out, v.data(), v.size() * 8);
}
inline void put_u32s(std::ostream& out, const std::vector<uint32_t>& v) {
  put_bytes(out, v.data(), v.size() * 4);
}

inline void get_bytes(std::istream& in, void* p, size_t n) {
  in.read(static_cast<char*>(p), std::streamsize(n));
  if (in.gcount() != std::streamsize(n)) throw DataError("truncated model file");
}
inline uint8_t get_u8(std::istream& in) {
  uint8_t v;
  get_bytes(in, &v, 1);
  return v;
}
inline uint32_t get_u32(std::istream& in) {
  uint32_t v;
  get_bytes(in, &v, 4);
  return v;
}
inline uint64_t get_u64(std::istream& in) {
  uint64_t v;
  get_bytes(in, &v, 8);
  return v;
}
inline void get_f64s(std::istream& in, std::vector<double>& v, size_t n) {
  v.resize(n);
  get_bytes(in, v.data(), n * 8);
}
inline void get_u32s(std::istream& in, std::vector<uint32_t>& v, size_t n) {
  v.resize(n);
  get_bytes(in, v.data(), n * 4);
}

inline void put_words(std::ostream& out, const std::vector<std::string>& words) {
  put_u32(out, uint32_t(words.size()));
  for (const auto& w : words) {
    put_u32(out, uint32_t(w.size()));
    put_bytes(out, w.data(), w.size());
  }
}

inline std::vector<std::string> get_words(std::istream& in) {
  const uint32_t n = get_u32(in);
  std::vector<std::string> words(n);
  for (uint32_t i = 0; i < n; ++i) {
    const uint32_t len = get_u32(in);
    words[i].resize(len);
    if (len > 0) get_bytes(in, words[i].data(), len);
  }
  return words;
}

}  // namespace detail

inline void save_model(const BilingualModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  using namespace detail;
  out.write("BAE1", 4);
  put_u8(out, 1);
  put_u8(out, uint8_t(m.variant));
  put_u8(out, uint8_t(m.nonlinearity));
  put_u8(out, uint8_t(m.aggregation));
  put_u8(out, m.tied ? 1 : 0);
  put_u32(out, m.dim);
  put_u32(out, m.vx());
  put_u32(out, m.vy());
  put_u64(out, m.variant == Variant::tree ? m.tree_seed : 0);
  put_f64s(out, m.Wx.data);
  put_f64s(out, m.Wy.data);
  put_f64s(out, m.c);
  if (m.variant == Variant::binary) {
    if (!m.tied) put_f64s(out, m.Vdec_x.data);
    put_f64s(out, m.bdec_x);
    if (!m.tied) put_f64s(out, m.Vdec_y.data);
    put_f64s(out, m.bdec_y);
  } else {
    put_u32s(out, m.tree_x.perm);
    put_f64s(out, m.tree_x.node_bias);
    put_f64s(out, m.tree_x.node_weight.data);
    put_u32s(out, m.tree_y.perm);
    put_f64s(out, m.tree_y.node_bias);
    put_f64s(out, m.tree_y.node_weight.data);
  }
  put_words(out, m.vocab_x);
  put_words(out, m.vocab_y);
  if (!out) throw DataError("write failure: " + path);
}

inline BilingualModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  using namespace detail;
  char magic[4];
  get_bytes(in, magic, 4);
  if (std::memcmp(magic, "BAE1", 4) != 0) throw DataError("bad magic");
  if (get_u8(in) != 1) throw DataError("unsupported version");
  BilingualModel m;
  m.variant = Variant(get_u8(in));
  m.nonlinearity = Nonlinearity(get_u8(in));
  m.aggregation = Aggregation(get_u8(in));
  m.tied = get_u8(in) != 0;
  m.dim = get_u32(in);
  const uint32_t vx = get_u32(in);
  const uint32_t vy = get_u32(in);
  m.tree_seed = get_u64(in);
  m.Wx = Matrix(m.dim, vx);
  m.Wy = Matrix(m.dim, vy);
  get_f64s(in, m.Wx.data, size_t(m.dim) * vx);
  get_f64s(in, m.Wy.data, size_t(m.dim) * vy);
  get_f64s(in, m.c, m.dim);
  if (m.variant == Variant::binary) {
    if (!m.tied) {
      m.Vdec_x = Matrix(vx, m.dim);
      get_f64s(in, m.Vdec_x.data, size_t(vx) * m.dim);
    }
    get_f64s(in, m.bdec_x, vx);
    if (!m.tied) {
      m.Vdec_y = Matrix(vy, m.dim);
      get_f64s(in, m.Vdec_y.data, size_t(vy) * m.dim);
    }
    get_f64s(in, m.bdec_y, vy);
  } else {
    get_u32s(in, m.tree_x.perm, vx);
    get_f64s(in, m.tree_x.node_bias, vx - 1);
    m.tree_x.node_weight = Matrix(vx - 1, m.dim);
    get_f64s(in, m.tree_x.node_weight.data, size_t(vx - 1) * m.dim);
    get_u32s(in, m.tree_y.perm, vy);
    get_f64s(in, m.tree_y.node_bias, vy - 1);
    m.tree_y.node_weight = Matrix(vy - 1, m.dim);
    get_f64s(in, m.tree_y.node_weight.data, size_t(vy - 1) * m.dim);
    m.tree_x.seed = m.tree_seed;
    m.tree_y.seed = m.tree_seed + 1;
    rebuild_tree_paths(m.tree_x, m.dim);
    rebuild_tree_paths(m.tree_y, m.dim);
  }
  m.vocab_x = get_words(in);
  m.vocab_y = get_words(in);
  if (m.vocab_x.size() != vx || m.vocab_y.size() != vy)
    throw DataError("model vocabulary size mismatch");
  return m;
}

}  // namespace bae
