#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bae/core.hpp"

namespace bae {

// ---------------------------------------------------------------------------
// UTF-8 helpers for the tokenizer
// ---------------------------------------------------------------------------

inline std::vector<uint32_t> decode_utf8(std::string_view s) {
  std::vector<uint32_t> out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    unsigned char b0 = s[i];
    uint32_t cp = 0xFFFD;
    size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0 && i + 1 < s.size() && (s[i + 1] & 0xC0) == 0x80) {
      cp = (uint32_t(b0 & 0x1F) << 6) | uint32_t(s[i + 1] & 0x3F);
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0 && i + 2 < s.size() && (s[i + 1] & 0xC0) == 0x80 &&
               (s[i + 2] & 0xC0) == 0x80) {
      cp = (uint32_t(b0 & 0x0F) << 12) | (uint32_t(s[i + 1] & 0x3F) << 6) |
           uint32_t(s[i + 2] & 0x3F);
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0 && i + 3 < s.size() && (s[i + 1] & 0xC0) == 0x80 &&
               (s[i + 2] & 0xC0) == 0x80 && (s[i + 3] & 0xC0) == 0x80) {
      cp = (uint32_t(b0 & 0x07) << 18) | (uint32_t(s[i + 1] & 0x3F) << 12) |
           (uint32_t(s[i + 2] & 0x3F) << 6) | uint32_t(s[i + 3] & 0x3F);
      len = 4;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void encode_utf8(uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(char(cp));
  } else if (cp < 0x800) {
    out.push_back(char(0xC0 | (cp >> 6)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(char(0xE0 | (cp >> 12)));
    out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(char(0xF0 | (cp >> 18)));
    out.push_back(char(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  }
}

inline bool is_space_cp(uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

inline bool is_punct_cp(uint32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0xA1: case 0xA6: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
      return true;
    default:
      break;
  }
  return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
         (cp >= 0x2E00 && cp <= 0x2E7F) ||
         (cp >= 0x3001 && cp <= 0x3003) || (cp >= 0x3008 && cp <= 0x3011) ||
         (cp >= 0x3014 && cp <= 0x301F) ||
         (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
         (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65);
}

// Simple case folding: ASCII, Latin-1, Latin Extended-A, Greek, Cyrillic.
inline uint32_t lower_cp(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x100 && cp <= 0x137 && (cp & 1) == 0) return cp == 0x130 ? 0x69 : cp + 1;
  if (cp >= 0x139 && cp <= 0x148 && (cp & 1) == 1) return cp + 1;
  if (cp >= 0x14A && cp <= 0x177 && (cp & 1) == 0) return cp + 1;
  if (cp == 0x178) return 0xFF;
  if ((cp == 0x179 || cp == 0x17B || cp == 0x17D)) return cp + 1;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  return cp;
}

// Lowercases, splits on whitespace and strips leading/trailing punctuation.
// Tokens that become empty are dropped. Stopwords are kept.
inline std::vector<std::string> tokenize(std::string_view line) {
  std::vector<uint32_t> cps = decode_utf8(line);
  std::vector<std::string> out;
  size_t i = 0;
  const size_t n = cps.size();
  while (i < n) {
    while (i < n && is_space_cp(cps[i])) ++i;
    size_t j = i;
    while (j < n && !is_space_cp(cps[j])) ++j;
    size_t a = i, b = j;
    while (a < b && is_punct_cp(cps[a])) ++a;
    while (b > a && is_punct_cp(cps[b - 1])) --b;
    if (b > a) {
      std::string tok;
      for (size_t k = a; k < b; ++k) encode_utf8(lower_cp(cps[k]), tok);
      out.push_back(std::move(tok));
    }
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

struct Vocabulary {
  std::vector<std::string> words;
  std::unordered_map<std::string, uint32_t> index;
  std::vector<uint64_t> freq;      // corpus term frequency, per index
  std::vector<uint64_t> doc_freq;  // documents containing the word, per index
  uint64_t corpus_doc_count = 0;

  uint32_t size() const { return uint32_t(words.size()); }

  std::optional<uint32_t> lookup(const std::string& w) const {
    auto it = index.find(w);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

class VocabularyBuilder {
 public:
  void add_document(const std::vector<std::string>& tokens) {
    ++docs_;
    std::map<std::string, uint64_t> local;
    for (const auto& t : tokens) ++local[t];
    for (const auto& [w, n] : local) {
      auto& c = counts_[w];
      c.first += n;
      c.second += 1;
    }
  }

  // Keeps words with frequency >= min_count, sorted by descending frequency
  // then ascending lexicographic order, truncated to max_size (0 = unlimited).
  Vocabulary build(uint64_t min_count = 1, size_t max_size = 0) const {
    std::vector<std::pair<std::string, std::pair<uint64_t, uint64_t>>> kept;
    for (const auto& [w, c] : counts_)
      if (c.first >= min_count) kept.emplace_back(w, c);
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      if (a.second.first != b.second.first) return a.second.first > b.second.first;
      return a.first < b.first;
    });
    if (max_size > 0 && kept.size() > max_size) kept.resize(max_size);
    if (kept.empty()) throw DataError("empty vocabulary");
    Vocabulary v;
    v.corpus_doc_count = docs_;
    v.words.reserve(kept.size());
    for (uint32_t i = 0; i < kept.size(); ++i) {
      v.words.push_back(kept[i].first);
      v.index.emplace(kept[i].first, i);
      v.freq.push_back(kept[i].second.first);
      v.doc_freq.push_back(kept[i].second.second);
    }
    return v;
  }

 private:
  std::map<std::string, std::pair<uint64_t, uint64_t>> counts_;  // word -> (freq, doc_freq)
  uint64_t docs_ = 0;
};

inline Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& streams,
                                   uint64_t min_count = 1, size_t max_size = 0) {
  VocabularyBuilder b;
  for (const auto& s : streams) b.add_document(s);
  return b.build(min_count, max_size);
}

// ---------------------------------------------------------------------------
// Bags of words
// ---------------------------------------------------------------------------

struct BagOfWords {
  std::vector<std::pair<uint32_t, uint32_t>> entries;  // (word index, count), sorted by index
  uint64_t total = 0;

  bool empty() const { return entries.empty(); }
  bool operator==(const BagOfWords&) const = default;
};

inline BagOfWords bow_from_counts(const std::map<uint32_t, uint32_t>& counts) {
  BagOfWords b;
  b.entries.assign(counts.begin(), counts.end());
  for (const auto& [w, n] : b.entries) b.total += n;
  return b;
}

inline std::vector<uint32_t> binary_view(const BagOfWords& b) {
  std::vector<uint32_t> keys;
  keys.reserve(b.entries.size());
  for (const auto& [w, n] : b.entries) keys.push_back(w);
  return keys;
}

// OOV tokens are skipped; an all-OOV sentence yields an empty bag.
inline BagOfWords to_bow(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
  std::map<uint32_t, uint32_t> counts;
  for (const auto& t : tokens)
    if (auto idx = vocab.lookup(t)) ++counts[*idx];
  return bow_from_counts(counts);
}

inline BagOfWords merge_bows(const BagOfWords& a, const BagOfWords& b) {
  BagOfWords out;
  out.entries.reserve(a.entries.size() + b.entries.size());
  size_t i = 0, j = 0;
  while (i < a.entries.size() || j < b.entries.size()) {
    if (j == b.entries.size() || (i < a.entries.size() && a.entries[i].first < b.entries[j].first)) {
      out.entries.push_back(a.entries[i++]);
    } else if (i == a.entries.size() || b.entries[j].first < a.entries[i].first) {
      out.entries.push_back(b.entries[j++]);
    } else {
      out.entries.emplace_back(a.entries[i].first, a.entries[i].second + b.entries[j].second);
      ++i;
      ++j;
    }
  }
  out.total = a.total + b.total;
  return out;
}

struct AlignedPair {
  BagOfWords src;
  BagOfWords tgt;
};

// Sums consecutive runs of k bags; a final partial run is also merged.
inline std::vector<BagOfWords> merge_minibatch(const std::vector<BagOfWords>& bags, uint32_t k) {
  if (k < 1) throw DataError("merge size must be >= 1");
  std::vector<BagOfWords> out;
  for (size_t i = 0; i < bags.size(); i += k) {
    BagOfWords acc = bags[i];
    for (size_t j = i + 1; j < std::min(bags.size(), i + k); ++j) acc = merge_bows(acc, bags[j]);
    out.push_back(std::move(acc));
  }
  return out;
}

// Same grouping applied to both sides, so pairing is preserved.
inline std::vector<AlignedPair> merge_minibatch_pairs(const std::vector<AlignedPair>& pairs,
                                                      uint32_t k) {
  if (k < 1) throw DataError("merge size must be >= 1");
  std::vector<AlignedPair> out;
  for (size_t i = 0; i < pairs.size(); i += k) {
    AlignedPair acc = pairs[i];
    for (size_t j = i + 1; j < std::min(pairs.size(), i + k); ++j) {
      acc.src = merge_bows(acc.src, pairs[j].src);
      acc.tgt = merge_bows(acc.tgt, pairs[j].tgt);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

// ---------------------------------------------------------------------------
// tf-idf
// ---------------------------------------------------------------------------

struct TfIdfStats {
  Vector idf;  // idf[i] = ln((1 + N) / (1 + doc_freq[i])), nats
};

inline TfIdfStats compute_tfidf(const std::vector<BagOfWords>& docs, const Vocabulary& vocab) {
  if (docs.empty()) throw DataError("compute_tfidf: no documents");
  std::vector<uint64_t> df(vocab.size(), 0);
  for (const auto& d : docs)
    for (const auto& [w, n] : d.entries) {
      if (w >= vocab.size()) throw DataError("compute_tfidf: word index out of range");
      ++df[w];
    }
  TfIdfStats s;
  const double n1 = 1.0 + double(docs.size());
  s.idf.resize(vocab.size());
  for (uint32_t i = 0; i < vocab.size(); ++i) s.idf[i] = std::log(n1 / (1.0 + double(df[i])));
  return s;
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// `label<TAB>document text`, one document per line.
inline std::vector<std::pair<std::string, std::string>> read_labeled_tsv(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> out;
  auto lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    size_t tab = lines[i].find('\t');
    if (tab == std::string::npos)
      throw DataError(path + ":" + std::to_string(i + 1) + ": missing tab separator");
    out.emplace_back(lines[i].substr(0, tab), lines[i].substr(tab + 1));
  }
  return out;
}

inline void write_vocab(const std::string& path, const Vocabulary& v) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "#vocab v1 N=" << v.corpus_doc_count << "\n";
  for (uint32_t i = 0; i < v.size(); ++i)
    out << v.words[i] << "\t" << v.freq[i] << "\t" << v.doc_freq[i] << "\n";
}

inline Vocabulary read_vocab(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty() || lines[0].rfind("#vocab v1 N=", 0) != 0)
    throw DataError(path + ": not a vocabulary file");
  Vocabulary v;
  v.corpus_doc_count = std::stoull(lines[0].substr(12));
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::istringstream iss(lines[i]);
    std::string word;
    uint64_t f = 0, df = 0;
    if (!std::getline(iss, word, '\t') || !(iss >> f >> df))
      throw DataError(path + ":" + std::to_string(i + 1) + ": malformed vocabulary line");
    v.index.emplace(word, uint32_t(v.words.size()));
    v.words.push_back(word);
    v.freq.push_back(f);
    v.doc_freq.push_back(df);
  }
  if (v.words.empty()) throw DataError("empty vocabulary");
  return v;
}

inline std::vector<std::vector<std::string>> tokenize_lines(const std::vector<std::string>& lines) {
  std::vector<std::vector<std::string>> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back(tokenize(l));
  return out;
}

}  // namespace bae
