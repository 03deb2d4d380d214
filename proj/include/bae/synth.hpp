#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "bae/core.hpp"

namespace bae {

// Synthetic bilingual world for desk-scale verification: a vocabulary per
// language related by a known bijection, topic classes with distinct
// word-frequency profiles, aligned sentence pairs and labeled documents.
struct SynthConfig {
  uint32_t vocab_size = 50;
  uint32_t num_classes = 4;
  uint32_t num_pairs = 2000;
  double noise = 0.1;  // per-token probability of replacing the translation by a random word
  uint32_t train_docs = 500;  // per language
  uint32_t test_docs = 200;   // per language
  uint32_t min_sent_len = 3, max_sent_len = 8;
  uint32_t min_doc_len = 20, max_doc_len = 40;
  uint64_t seed = 1;
};

struct SynthData {
  std::vector<std::string> src_lines, tgt_lines;  // aligned sentence pairs
  std::vector<std::pair<std::string, std::string>> train_docs_x, train_docs_y;  // (label, text)
  std::vector<std::pair<std::string, std::string>> test_docs_x, test_docs_y;
  std::vector<std::pair<std::string, std::string>> dictionary;  // src word -> tgt word
  std::vector<uint32_t> translation;                            // src index -> tgt index
};

namespace detail {

inline std::string synth_word(const char* prefix, uint32_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04u", prefix, i);
  return buf;
}

// Topic profile: mass 0.75 on the topic's own block (Zipf-ish within it),
// 0.25 uniform over the whole vocabulary.
inline std::vector<double> topic_cdf(uint32_t topic, uint32_t vocab, uint32_t classes) {
  const uint32_t block = vocab / classes;
  const uint32_t lo = topic * block;
  const uint32_t hi = topic + 1 == classes ? vocab : lo + block;
  std::vector<double> w(vocab, 0.0);
  double topic_mass = 0.0;
  for (uint32_t i = lo; i < hi; ++i) {
    w[i] = 1.0 / double(1 + i - lo);
    topic_mass += w[i];
  }
  std::vector<double> cdf(vocab);
  double acc = 0.0;
  for (uint32_t i = 0; i < vocab; ++i) {
    acc += 0.75 * w[i] / topic_mass + 0.25 / double(vocab);
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

inline uint32_t sample_cdf(const std::vector<double>& cdf, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  return uint32_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

}  // namespace detail

inline SynthData generate_synth(const SynthConfig& cfg) {
  if (cfg.vocab_size < cfg.num_classes || cfg.num_classes < 2)
    throw DataError("generate_synth: need vocab_size >= num_classes >= 2");
  std::mt19937_64 rng(cfg.seed);
  SynthData data;

  data.translation.resize(cfg.vocab_size);
  for (uint32_t i = 0; i < cfg.vocab_size; ++i) data.translation[i] = i;
  shuffle_deterministic(data.translation, rng);
  for (uint32_t i = 0; i < cfg.vocab_size; ++i)
    data.dictionary.emplace_back(detail::synth_word("xw", i),
                                 detail::synth_word("yw", data.translation[i]));

  std::vector<std::vector<double>> cdfs;
  for (uint32_t t = 0; t < cfg.num_classes; ++t)
    cdfs.push_back(detail::topic_cdf(t, cfg.vocab_size, cfg.num_classes));

  auto rand_len = [&](uint32_t lo, uint32_t hi) {
    return lo + uint32_t(rand_below(rng, hi - lo + 1));
  };

  for (uint32_t p = 0; p < cfg.num_pairs; ++p) {
    const uint32_t topic = uint32_t(rand_below(rng, cfg.num_classes));
    const uint32_t len = rand_len(cfg.min_sent_len, cfg.max_sent_len);
    std::string src, tgt;
    for (uint32_t k = 0; k < len; ++k) {
      const uint32_t w = detail::sample_cdf(cdfs[topic], rng);
      uint32_t tw = data.translation[w];
      if (cfg.noise > 0.0 && uniform01(rng) < cfg.noise)
        tw = uint32_t(rand_below(rng, cfg.vocab_size));
      if (k > 0) {
        src += ' ';
        tgt += ' ';
      }
      src += detail::synth_word("xw", w);
      tgt += detail::synth_word("yw", tw);
    }
    data.src_lines.push_back(std::move(src));
    data.tgt_lines.push_back(std::move(tgt));
  }

  auto make_docs = [&](uint32_t count, bool src_lang) {
    std::vector<std::pair<std::string, std::string>> docs;
    for (uint32_t i = 0; i < count; ++i) {
      const uint32_t topic = uint32_t(rand_below(rng, cfg.num_classes));
      const uint32_t len = rand_len(cfg.min_doc_len, cfg.max_doc_len);
      std::string text;
      for (uint32_t k = 0; k < len; ++k) {
        const uint32_t w = detail::sample_cdf(cdfs[topic], rng);
        if (k > 0) text += ' ';
        text += src_lang ? detail::synth_word("xw", w)
                         : detail::synth_word("yw", data.translation[w]);
      }
      docs.emplace_back("c" + std::to_string(topic), std::move(text));
    }
    return docs;
  };
  data.train_docs_x = make_docs(cfg.train_docs, true);
  data.train_docs_y = make_docs(cfg.train_docs, false);
  data.test_docs_x = make_docs(cfg.test_docs, true);
  data.test_docs_y = make_docs(cfg.test_docs, false);
  return data;
}

inline void write_synth(const SynthData& data, const std::string& prefix) {
  auto write_plain = [](const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    for (const auto& l : lines) out << l << "\n";
  };
  auto write_tsv = [](const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    for (const auto& [a, b] : rows) out << a << "\t" << b << "\n";
  };
  write_plain(prefix + ".x.txt", data.src_lines);
  write_plain(prefix + ".y.txt", data.tgt_lines);
  write_tsv(prefix + ".docs.train.x.tsv", data.train_docs_x);
  write_tsv(prefix + ".docs.train.y.tsv", data.train_docs_y);
  write_tsv(prefix + ".docs.test.x.tsv", data.test_docs_x);
  write_tsv(prefix + ".docs.test.y.tsv", data.test_docs_y);
  write_tsv(prefix + ".dict.tsv", data.dictionary);
}

}  // namespace bae
