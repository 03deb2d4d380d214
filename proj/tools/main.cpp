// bae: bilingual bag-of-words autoencoder trainer and evaluation tools.
//
// Subcommands: train, nn, doc-vec, classify, eval, sweep-trainsize,
// sweep-merge, gen-synth. Exit codes: 0 success, 2 usage error, 3 data error,
// 4 numeric failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bae/classifier.hpp"
#include "bae/corpus.hpp"
#include "bae/embeddings.hpp"
#include "bae/manifest.hpp"
#include "bae/synth.hpp"
#include "bae/trainer.hpp"

using nlohmann::json;

namespace {

uint64_t default_seed() {
  if (const char* env = std::getenv("BAE_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw bae::DataError(std::string("BAE_SEED is not an integer: ") + env);
  }
  return 1;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void write_manifest(bae::RunManifest m, const Timer& timer) {
  if (m.outputs.empty()) return;
  m.wall_clock_seconds = timer.seconds();
  m.write(m.outputs.front() + ".manifest.json");
}

bae::Variant parse_variant(const std::string& s) {
  if (s == "binary") return bae::Variant::binary;
  if (s == "tree") return bae::Variant::tree;
  throw CLI::ValidationError("--variant must be binary or tree");
}

bae::Nonlinearity parse_nonlinearity(const std::string& s) {
  if (s == "sigmoid") return bae::Nonlinearity::sigmoid;
  if (s == "tanh") return bae::Nonlinearity::tanh;
  throw CLI::ValidationError("--nonlinearity must be sigmoid or tanh");
}

bae::Aggregation parse_aggregation(const std::string& s) {
  if (s == "sum") return bae::Aggregation::sum;
  if (s == "average") return bae::Aggregation::average;
  throw CLI::ValidationError("--aggregation must be sum or average");
}

std::string model_tag(const bae::BilingualModel& m, double lambda) {
  std::string tag = m.variant == bae::Variant::tree ? "BAE-tr" : "BAE-cr";
  if (lambda > 0.0) tag += "/corr";
  return tag;
}

std::vector<bae::LabeledBag> load_labeled_bags(const std::string& path,
                                               const bae::Vocabulary& vocab) {
  std::vector<bae::LabeledBag> out;
  for (const auto& [label, text] : bae::read_labeled_tsv(path))
    out.push_back({label, bae::to_bow(bae::tokenize(text), vocab)});
  return out;
}

std::vector<bae::BagOfWords> load_bag_pool(const std::string& path, const bae::Vocabulary& vocab) {
  std::vector<bae::BagOfWords> out;
  for (const auto& line : bae::read_lines(path)) {
    // Accept both plain text and labeled TSV; a tab splits label from text.
    const auto tab = line.find('\t');
    const std::string text = tab == std::string::npos ? line : line.substr(tab + 1);
    out.push_back(bae::to_bow(bae::tokenize(text), vocab));
  }
  return out;
}

bae::Vocabulary vocab_from_words(const std::vector<std::string>& words) {
  bae::Vocabulary v;
  v.words = words;
  for (uint32_t i = 0; i < words.size(); ++i) v.index[words[i]] = i;
  return v;
}

json confusion_json(const bae::EvalResult& res) {
  json conf = json::object();
  for (size_t g = 0; g < res.classes.size(); ++g) {
    json row = json::object();
    for (size_t p = 0; p < res.classes.size(); ++p) row[res.classes[p]] = res.confusion[g][p];
    conf[res.classes[g]] = row;
  }
  return conf;
}

// --------------------------------------------------------------------------
// train
// --------------------------------------------------------------------------

struct TrainArgs {
  std::string src_path, tgt_path, out_path;
  std::string mono_x_path, mono_y_path;
  std::string report_path, vocab_x_out, vocab_y_out;
  std::string variant = "binary", nonlinearity = "sigmoid", aggregation = "sum";
  bae::TrainConfig cfg;
  uint32_t min_count = 1;
  uint32_t max_vocab = 0;
};

int cmd_train(const TrainArgs& a) {
  Timer timer;
  bae::TrainConfig cfg = a.cfg;
  cfg.variant = parse_variant(a.variant);
  cfg.nonlinearity = parse_nonlinearity(a.nonlinearity);
  cfg.aggregation = parse_aggregation(a.aggregation);

  auto src_lines = bae::read_lines(a.src_path);
  auto tgt_lines = bae::read_lines(a.tgt_path);
  if (src_lines.size() != tgt_lines.size())
    throw bae::DataError("aligned corpora line counts differ: " + a.src_path + " has " +
                         std::to_string(src_lines.size()) + " lines, " + a.tgt_path + " has " +
                         std::to_string(tgt_lines.size()));

  auto src_tokens = bae::tokenize_lines(src_lines);
  auto tgt_tokens = bae::tokenize_lines(tgt_lines);
  std::vector<std::vector<std::string>> vocab_src_stream = src_tokens;
  std::vector<std::vector<std::string>> vocab_tgt_stream = tgt_tokens;

  std::vector<std::vector<std::string>> mono_x_tokens, mono_y_tokens;
  if (!a.mono_x_path.empty()) {
    mono_x_tokens = bae::tokenize_lines(bae::read_lines(a.mono_x_path));
    for (const auto& t : mono_x_tokens) vocab_src_stream.push_back(t);
  }
  if (!a.mono_y_path.empty()) {
    mono_y_tokens = bae::tokenize_lines(bae::read_lines(a.mono_y_path));
    for (const auto& t : mono_y_tokens) vocab_tgt_stream.push_back(t);
  }

  auto vocab_x = bae::build_vocabulary(vocab_src_stream, a.min_count, a.max_vocab);
  auto vocab_y = bae::build_vocabulary(vocab_tgt_stream, a.min_count, a.max_vocab);

  std::vector<bae::AlignedPair> pairs;
  uint64_t dropped = 0;
  for (size_t i = 0; i < src_tokens.size(); ++i) {
    bae::AlignedPair p{bae::to_bow(src_tokens[i], vocab_x), bae::to_bow(tgt_tokens[i], vocab_y)};
    if (p.src.empty() || p.tgt.empty()) {
      ++dropped;
      continue;
    }
    pairs.push_back(std::move(p));
  }
  if (dropped > 0)
    std::cerr << "dropped " << dropped << " pair(s) empty after preprocessing\n";

  std::vector<bae::BagOfWords> mono_x, mono_y;
  for (const auto& t : mono_x_tokens) {
    auto b = bae::to_bow(t, vocab_x);
    if (!b.empty()) mono_x.push_back(std::move(b));
  }
  for (const auto& t : mono_y_tokens) {
    auto b = bae::to_bow(t, vocab_y);
    if (!b.empty()) mono_y.push_back(std::move(b));
  }

  auto model = bae::init_model(cfg, vocab_x.words, vocab_y.words);
  auto report = bae::train(model, pairs, mono_x, mono_y, cfg);
  bae::save_model(model, a.out_path);
  if (!a.vocab_x_out.empty()) bae::write_vocab(a.vocab_x_out, vocab_x);
  if (!a.vocab_y_out.empty()) bae::write_vocab(a.vocab_y_out, vocab_y);

  json cfg_json = {{"dim", cfg.dim},
                   {"epochs", cfg.epochs},
                   {"learning_rate", cfg.learning_rate},
                   {"merge_k", cfg.merge_k},
                   {"lambda", cfg.lambda},
                   {"corr_batch", cfg.corr_batch},
                   {"seed", cfg.seed},
                   {"variant", a.variant},
                   {"nonlinearity", a.nonlinearity},
                   {"aggregation", a.aggregation},
                   {"tie_decoders", cfg.tie_decoders},
                   {"cross_only", cfg.cross_only},
                   {"threads", cfg.threads},
                   {"min_count", a.min_count},
                   {"max_vocab", a.max_vocab}};

  if (!a.report_path.empty()) {
    json epochs = json::array();
    for (const auto& e : report.epochs)
      epochs.push_back({{"mean_lx", e.mean_lx},
                        {"mean_ly", e.mean_ly},
                        {"mean_lxy", e.mean_lxy},
                        {"mean_lyx", e.mean_lyx},
                        {"mean_corr", e.mean_corr},
                        {"updates", e.updates},
                        {"seconds", e.seconds}});
    json rj = {{"epochs", epochs},
               {"final_loss_sum", report.final_loss_sum},
               {"param_checksum", report.param_checksum},
               {"vx", model.vx()},
               {"vy", model.vy()},
               {"pairs", pairs.size()},
               {"dropped_pairs", dropped},
               {"config", cfg_json}};
    std::ofstream out(a.report_path);
    if (!out) throw bae::DataError("cannot write file: " + a.report_path);
    out << rj.dump(2) << "\n";
  }

  bae::RunManifest manifest;
  manifest.command = "train";
  manifest.config = cfg_json;
  manifest.seed = cfg.seed;
  manifest.inputs = {a.src_path, a.tgt_path};
  if (!a.mono_x_path.empty()) manifest.inputs.push_back(a.mono_x_path);
  if (!a.mono_y_path.empty()) manifest.inputs.push_back(a.mono_y_path);
  manifest.outputs = {a.out_path};
  if (!a.report_path.empty()) manifest.outputs.push_back(a.report_path);
  manifest.model_tag = model_tag(model, cfg.lambda);
  write_manifest(manifest, timer);
  return 0;
}

// --------------------------------------------------------------------------
// nn
// --------------------------------------------------------------------------

int cmd_nn(const std::string& model_path, const std::string& word, uint32_t k, bool cross,
           bool from_tgt, const std::string& out_path) {
  Timer timer;
  auto model = bae::load_model(model_path);
  auto tx = bae::embedding_table(model, true);
  auto ty = bae::embedding_table(model, false);
  const auto& query = from_tgt ? ty : tx;
  const auto& target = cross ? (from_tgt ? tx : ty) : query;
  auto result = bae::nearest(word, query, target, k);

  std::ostringstream body;
  char buf[64];
  for (size_t i = 0; i < result.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g", result[i].second);
    body << (i + 1) << "\t" << result[i].first << "\t" << buf << "\n";
  }
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw bae::DataError("cannot write file: " + out_path);
    out << body.str();
    bae::RunManifest manifest;
    manifest.command = "nn";
    manifest.config = {{"word", word}, {"k", k}, {"cross", cross}, {"from", from_tgt ? "y" : "x"}};
    manifest.inputs = {model_path};
    manifest.outputs = {out_path};
    write_manifest(manifest, timer);
  }
  return 0;
}

// --------------------------------------------------------------------------
// doc-vec
// --------------------------------------------------------------------------

int cmd_doc_vec(const std::string& model_path, const std::string& in_path, const std::string& side,
                const std::string& idf_pool_path, const std::string& out_path) {
  Timer timer;
  auto model = bae::load_model(model_path);
  const bool src = side == "x";
  if (!src && side != "y") throw CLI::ValidationError("--side must be x or y");
  auto table = bae::embedding_table(model, src);
  auto vocab = vocab_from_words(table.words);
  auto docs = load_bag_pool(in_path, vocab);
  auto pool = idf_pool_path.empty() ? docs : load_bag_pool(idf_pool_path, vocab);
  auto stats = bae::compute_tfidf(pool, vocab);

  std::ostringstream body;
  char buf[64];
  for (const auto& doc : docs) {
    auto v = bae::doc_vector(doc, table, stats);
    for (size_t d = 0; d < v.size(); ++d) {
      std::snprintf(buf, sizeof(buf), "%.9g", v[d]);
      body << (d > 0 ? " " : "") << buf;
    }
    body << "\n";
  }
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw bae::DataError("cannot write file: " + out_path);
    out << body.str();
    bae::RunManifest manifest;
    manifest.command = "doc-vec";
    manifest.config = {{"side", side}};
    manifest.inputs = {model_path, in_path};
    if (!idf_pool_path.empty()) manifest.inputs.push_back(idf_pool_path);
    manifest.outputs = {out_path};
    write_manifest(manifest, timer);
  }
  return 0;
}

// --------------------------------------------------------------------------
// classify / eval
// --------------------------------------------------------------------------

struct EvalArgs {
  std::string model_path, train_path, test_path;
  std::string train_side = "x";
  std::string idf_pool_train, idf_pool_test;
  uint64_t train_size = 0;  // 0 = all
  uint32_t epochs = 10;
  uint64_t seed = 1;
  bool l2_normalize = false;
  std::string out_path;      // predictions TSV (classify) or metrics JSON (eval)
  std::string metrics_path;  // classify only
};

struct EvalRun {
  bae::EvalResult result;
  std::vector<std::string> predictions;  // aligned with test docs
  std::vector<std::string> gold;
  json config;
};

EvalRun run_eval(const EvalArgs& a) {
  auto model = bae::load_model(a.model_path);
  const bool train_src = a.train_side == "x";
  if (!train_src && a.train_side != "y") throw CLI::ValidationError("--train-side must be x or y");

  auto table_train = bae::embedding_table(model, train_src);
  auto table_test = bae::embedding_table(model, !train_src);
  auto vocab_train = vocab_from_words(table_train.words);
  auto vocab_test = vocab_from_words(table_test.words);

  auto train_docs = load_labeled_bags(a.train_path, vocab_train);
  auto test_docs = load_labeled_bags(a.test_path, vocab_test);

  std::vector<bae::BagOfWords> pool_train, pool_test;
  if (a.idf_pool_train.empty()) {
    for (const auto& d : train_docs) pool_train.push_back(d.bag);
  } else {
    pool_train = load_bag_pool(a.idf_pool_train, vocab_train);
  }
  if (a.idf_pool_test.empty()) {
    for (const auto& d : test_docs) pool_test.push_back(d.bag);
  } else {
    pool_test = load_bag_pool(a.idf_pool_test, vocab_test);
  }

  const uint64_t train_size = a.train_size == 0 ? train_docs.size() : a.train_size;
  EvalRun run;
  run.result = bae::cross_lingual_eval(model, train_src, train_docs, test_docs, pool_train,
                                       pool_test, train_size, a.seed, a.epochs, a.l2_normalize);

  // Re-run the prediction pass to capture per-document outputs; the harness is
  // deterministic so this matches the confusion matrix exactly.
  auto idf_train = bae::compute_tfidf(pool_train, vocab_train);
  auto idf_test = bae::compute_tfidf(pool_test, vocab_test);
  std::vector<uint32_t> labels;
  std::map<std::string, uint32_t> class_idx;
  for (uint32_t i = 0; i < run.result.classes.size(); ++i) class_idx[run.result.classes[i]] = i;
  for (const auto& d : train_docs) labels.push_back(class_idx[d.label]);
  auto subset = bae::stratified_subsample(labels, uint32_t(run.result.classes.size()), train_size,
                                          a.seed);
  auto vectorize = [&](const bae::LabeledBag& d, const bae::EmbeddingTable& t,
                       const bae::TfIdfStats& s) {
    bae::Vector v = bae::doc_vector(d.bag, t, s);
    if (a.l2_normalize) {
      const double norm = std::sqrt(bae::dot(v, v));
      if (norm > 0.0)
        for (double& x : v) x /= norm;
    }
    return v;
  };
  std::vector<std::pair<bae::Vector, std::string>> examples;
  for (size_t i : subset)
    examples.emplace_back(vectorize(train_docs[i], table_train, idf_train), train_docs[i].label);
  auto pm = bae::perceptron_train(examples, a.epochs, a.seed);
  for (const auto& d : test_docs) {
    run.predictions.push_back(bae::predict(pm, vectorize(d, table_test, idf_test)));
    run.gold.push_back(d.label);
  }

  run.config = {{"train_side", a.train_side}, {"train_size", train_size},
                {"epochs", a.epochs},         {"seed", a.seed},
                {"l2_normalize", a.l2_normalize}};
  return run;
}

json metrics_json(const EvalRun& run) {
  return json{{"accuracy", run.result.accuracy},
              {"n_test", run.result.n_test},
              {"majority_baseline", run.result.majority_baseline},
              {"confusion", confusion_json(run.result)},
              {"config", run.config}};
}

int cmd_classify(const EvalArgs& a) {
  Timer timer;
  auto run = run_eval(a);
  std::ostringstream body;
  for (size_t i = 0; i < run.predictions.size(); ++i)
    body << i << "\t" << run.gold[i] << "\t" << run.predictions[i] << "\n";
  if (a.out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(a.out_path);
    if (!out) throw bae::DataError("cannot write file: " + a.out_path);
    out << body.str();
  }
  if (!a.metrics_path.empty()) {
    std::ofstream out(a.metrics_path);
    if (!out) throw bae::DataError("cannot write file: " + a.metrics_path);
    out << metrics_json(run).dump(2) << "\n";
  }
  std::cerr << "accuracy " << run.result.accuracy << " on " << run.result.n_test << " docs\n";
  if (!a.out_path.empty()) {
    bae::RunManifest manifest;
    manifest.command = "classify";
    manifest.config = run.config;
    manifest.seed = a.seed;
    manifest.inputs = {a.model_path, a.train_path, a.test_path};
    manifest.outputs = {a.out_path};
    if (!a.metrics_path.empty()) manifest.outputs.push_back(a.metrics_path);
    write_manifest(manifest, timer);
  }
  return 0;
}

int cmd_eval(const EvalArgs& a) {
  Timer timer;
  auto run = run_eval(a);
  const std::string body = metrics_json(run).dump(2) + "\n";
  std::cout << body;
  if (!a.out_path.empty()) {
    std::ofstream out(a.out_path);
    if (!out) throw bae::DataError("cannot write file: " + a.out_path);
    out << body;
    bae::RunManifest manifest;
    manifest.command = "eval";
    manifest.config = run.config;
    manifest.seed = a.seed;
    manifest.inputs = {a.model_path, a.train_path, a.test_path};
    manifest.outputs = {a.out_path};
    write_manifest(manifest, timer);
  }
  return 0;
}

// --------------------------------------------------------------------------
// sweep-trainsize
// --------------------------------------------------------------------------

int cmd_sweep_trainsize(EvalArgs a, const std::vector<uint64_t>& sizes,
                        const std::string& out_path) {
  Timer timer;
  std::ostringstream body;
  body << "train_size,accuracy,status\n";
  char buf[64];
  for (uint64_t size : sizes) {
    EvalArgs run_args = a;
    run_args.train_size = size;
    try {
      auto run = run_eval(run_args);
      std::snprintf(buf, sizeof(buf), "%.6f", run.result.accuracy);
      body << size << "," << buf << ",ok\n";
    } catch (const bae::DataError& e) {
      std::cerr << "size " << size << " skipped: " << e.what() << "\n";
      body << size << ",,skipped\n";
    }
  }
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw bae::DataError("cannot write file: " + out_path);
    out << body.str();
    bae::RunManifest manifest;
    manifest.command = "sweep-trainsize";
    manifest.config = {{"sizes", sizes}, {"train_side", a.train_side}, {"epochs", a.epochs}};
    manifest.seed = a.seed;
    manifest.inputs = {a.model_path, a.train_path, a.test_path};
    manifest.outputs = {out_path};
    write_manifest(manifest, timer);
  }
  return 0;
}

// --------------------------------------------------------------------------
// sweep-merge
// --------------------------------------------------------------------------

struct SweepMergeArgs {
  TrainArgs train;
  std::string train_x, test_x, train_y, test_y;
  std::vector<uint32_t> merges = {5, 25, 50};
  uint64_t train_size = 100;
  uint32_t eval_epochs = 10;
  std::string out_path;
  std::string work_dir;
};

int cmd_sweep_merge(SweepMergeArgs a) {
  Timer timer;
  const std::string work =
      a.work_dir.empty() ? std::filesystem::temp_directory_path().string() : a.work_dir;
  std::ostringstream body;
  body << "merge_k,acc_x_to_y,acc_y_to_x\n";
  char buf[64];
  for (uint32_t k : a.merges) {
    TrainArgs t = a.train;
    t.cfg.merge_k = k;
    t.out_path = work + "/bae_sweep_merge_" + std::to_string(k) + ".model";
    cmd_train(t);

    auto eval_dir = [&](const std::string& side, const std::string& train_path,
                        const std::string& test_path) {
      EvalArgs e;
      e.model_path = t.out_path;
      e.train_path = train_path;
      e.test_path = test_path;
      e.train_side = side;
      e.train_size = a.train_size;
      e.epochs = a.eval_epochs;
      e.seed = a.train.cfg.seed;
      return run_eval(e).result.accuracy;
    };
    const double xy = eval_dir("x", a.train_x, a.test_y);
    const double yx = eval_dir("y", a.train_y, a.test_x);
    std::snprintf(buf, sizeof(buf), "%u,%.6f,%.6f", k, xy, yx);
    body << buf << "\n";
  }
  if (a.out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(a.out_path);
    if (!out) throw bae::DataError("cannot write file: " + a.out_path);
    out << body.str();
    bae::RunManifest manifest;
    manifest.command = "sweep-merge";
    manifest.config = {{"merges", a.merges},
                       {"train_size", a.train_size},
                       {"seed", a.train.cfg.seed},
                       {"dim", a.train.cfg.dim},
                       {"epochs", a.train.cfg.epochs},
                       {"lambda", a.train.cfg.lambda}};
    manifest.seed = a.train.cfg.seed;
    manifest.inputs = {a.train.src_path, a.train.tgt_path, a.train_x, a.test_x, a.train_y,
                       a.test_y};
    manifest.outputs = {a.out_path};
    write_manifest(manifest, timer);
  }
  return 0;
}

// --------------------------------------------------------------------------
// gen-synth
// --------------------------------------------------------------------------

int cmd_gen_synth(const bae::SynthConfig& cfg, const std::string& prefix) {
  Timer timer;
  auto data = bae::generate_synth(cfg);
  bae::write_synth(data, prefix);
  bae::RunManifest manifest;
  manifest.command = "gen-synth";
  manifest.config = {{"vocab_size", cfg.vocab_size}, {"num_classes", cfg.num_classes},
                     {"num_pairs", cfg.num_pairs},   {"noise", cfg.noise},
                     {"train_docs", cfg.train_docs}, {"test_docs", cfg.test_docs},
                     {"seed", cfg.seed}};
  manifest.seed = cfg.seed;
  manifest.outputs = {prefix + ".x.txt",
                      prefix + ".y.txt",
                      prefix + ".docs.train.x.tsv",
                      prefix + ".docs.train.y.tsv",
                      prefix + ".docs.test.x.tsv",
                      prefix + ".docs.test.y.tsv",
                      prefix + ".dict.tsv"};
  manifest.wall_clock_seconds = timer.seconds();
  manifest.write(prefix + ".manifest.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bilingual bag-of-words autoencoder tools"};
  app.require_subcommand(1);

  uint64_t seed = 1;
  try {
    seed = default_seed();
  } catch (const bae::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  // train -----------------------------------------------------------------
  TrainArgs ta;
  ta.cfg.seed = seed;
  auto* train = app.add_subcommand("train", "train a bilingual autoencoder");
  train->add_option("-x,--src", ta.src_path, "source-language corpus, one sentence per line")
      ->required();
  train->add_option("-y,--tgt", ta.tgt_path, "target-language corpus, line-aligned with --src")
      ->required();
  train->add_option("-o,--out", ta.out_path, "output model file")->required();
  train->add_option("--dim", ta.cfg.dim, "embedding dimension");
  train->add_option("--epochs", ta.cfg.epochs, "training epochs");
  train->add_option("--merge", ta.cfg.merge_k, "merged mini-batch size");
  train->add_option("--lr", ta.cfg.learning_rate, "learning rate");
  train->add_option("--variant", ta.variant, "decoder variant: binary or tree");
  train->add_option("--lambda", ta.cfg.lambda, "correlation regularizer weight");
  train->add_option("--corr-batch", ta.cfg.corr_batch, "correlation window size");
  train->add_option("--seed", ta.cfg.seed, "random seed");
  train->add_option("--nonlinearity", ta.nonlinearity, "sigmoid or tanh");
  train->add_option("--aggregation", ta.aggregation, "sum or average (tree encoder)");
  train->add_flag("--tie-decoders", ta.cfg.tie_decoders, "tie binary decoder to W transposed");
  train->add_flag("--cross-only", ta.cfg.cross_only, "drop the self-reconstruction terms");
  train->add_option("--mono-x", ta.mono_x_path, "extra monolingual source documents");
  train->add_option("--mono-y", ta.mono_y_path, "extra monolingual target documents");
  train->add_option("--min-count", ta.min_count, "vocabulary frequency cutoff");
  train->add_option("--max-vocab", ta.max_vocab, "vocabulary size cap (0 = none)");
  train->add_option("--threads", ta.cfg.threads, "intra-batch forward threads");
  train->add_option("--report", ta.report_path, "write a JSON training report here");
  train->add_option("--vocab-x-out", ta.vocab_x_out, "write the source vocabulary here");
  train->add_option("--vocab-y-out", ta.vocab_y_out, "write the target vocabulary here");

  // nn --------------------------------------------------------------------
  std::string nn_model, nn_word, nn_out;
  uint32_t nn_k = 10;
  bool nn_cross = false, nn_from_tgt = false;
  auto* nn = app.add_subcommand("nn", "nearest neighbors of a word");
  nn->add_option("-m,--model", nn_model, "model file")->required();
  nn->add_option("-w,--word", nn_word, "query word")->required();
  nn->add_option("-k", nn_k, "number of neighbors");
  nn->add_flag("--cross", nn_cross, "search the other language's vocabulary");
  nn->add_flag("--from-tgt", nn_from_tgt, "query word is in the target language");
  nn->add_option("-o,--out", nn_out, "output file (default stdout)");

  // doc-vec ---------------------------------------------------------------
  std::string dv_model, dv_in, dv_side = "x", dv_pool, dv_out;
  auto* dv = app.add_subcommand("doc-vec", "tf-idf document vectors");
  dv->add_option("-m,--model", dv_model, "model file")->required();
  dv->add_option("-i,--in", dv_in, "documents, one per line (TSV labels allowed)")->required();
  dv->add_option("--side", dv_side, "language side: x or y");
  dv->add_option("--idf-pool", dv_pool, "documents supplying idf statistics (default: --in)");
  dv->add_option("-o,--out", dv_out, "output file (default stdout)");

  // classify / eval -------------------------------------------------------
  EvalArgs ea;
  ea.seed = seed;
  auto add_eval_opts = [&](CLI::App* cmd) {
    cmd->add_option("-m,--model", ea.model_path, "model file")->required();
    cmd->add_option("--train", ea.train_path, "labeled training documents (TSV)")->required();
    cmd->add_option("--test", ea.test_path, "labeled test documents (TSV)")->required();
    cmd->add_option("--train-side", ea.train_side, "language of the training docs: x or y");
    cmd->add_option("--train-size", ea.train_size, "stratified subsample size (0 = all)");
    cmd->add_option("--epochs", ea.epochs, "perceptron epochs");
    cmd->add_option("--seed", ea.seed, "random seed");
    cmd->add_flag("--l2-normalize-doc", ea.l2_normalize, "L2-normalize document vectors");
    cmd->add_option("--idf-pool-train", ea.idf_pool_train,
                    "idf pool for the training language (default: --train)");
    cmd->add_option("--idf-pool-test", ea.idf_pool_test,
                    "idf pool for the test language (default: --test)");
  };
  auto* classify = app.add_subcommand("classify", "per-document predictions");
  add_eval_opts(classify);
  classify->add_option("-o,--out", ea.out_path, "predictions TSV (default stdout)");
  classify->add_option("--metrics", ea.metrics_path, "also write the metrics JSON here");

  auto* ev = app.add_subcommand("eval", "cross-lingual classification metrics");
  add_eval_opts(ev);
  ev->add_option("-o,--out", ea.out_path, "also write the JSON here");

  // sweep-trainsize -------------------------------------------------------
  std::vector<uint64_t> sweep_sizes = {100, 200, 500, 1000, 5000, 10000};
  std::string sweep_out;
  auto* sts = app.add_subcommand("sweep-trainsize", "accuracy vs training-set size");
  add_eval_opts(sts);
  sts->add_option("--sizes", sweep_sizes, "training sizes to evaluate");
  sts->add_option("-o,--out", sweep_out, "CSV output (default stdout)");

  // sweep-merge -----------------------------------------------------------
  SweepMergeArgs sm;
  sm.train.cfg.seed = seed;
  auto* smc = app.add_subcommand("sweep-merge", "accuracy vs merged mini-batch size");
  smc->add_option("-x,--src", sm.train.src_path, "source corpus")->required();
  smc->add_option("-y,--tgt", sm.train.tgt_path, "target corpus")->required();
  smc->add_option("--train-x", sm.train_x, "labeled x-language training docs")->required();
  smc->add_option("--test-x", sm.test_x, "labeled x-language test docs")->required();
  smc->add_option("--train-y", sm.train_y, "labeled y-language training docs")->required();
  smc->add_option("--test-y", sm.test_y, "labeled y-language test docs")->required();
  smc->add_option("--merges", sm.merges, "merge sizes to train");
  smc->add_option("--dim", sm.train.cfg.dim, "embedding dimension");
  smc->add_option("--epochs", sm.train.cfg.epochs, "training epochs");
  smc->add_option("--lr", sm.train.cfg.learning_rate, "learning rate");
  smc->add_option("--lambda", sm.train.cfg.lambda, "correlation regularizer weight");
  smc->add_option("--corr-batch", sm.train.cfg.corr_batch, "correlation window size");
  smc->add_option("--variant", sm.train.variant, "binary or tree");
  smc->add_option("--seed", sm.train.cfg.seed, "random seed");
  smc->add_option("--threads", sm.train.cfg.threads, "intra-batch forward threads");
  smc->add_option("--train-size", sm.train_size, "classifier training-set size");
  smc->add_option("--eval-epochs", sm.eval_epochs, "perceptron epochs");
  smc->add_option("--work-dir", sm.work_dir, "where intermediate models go");
  smc->add_option("-o,--out", sm.out_path, "CSV output (default stdout)");

  // gen-synth -------------------------------------------------------------
  bae::SynthConfig sc;
  sc.seed = seed;
  std::string synth_prefix;
  auto* gs = app.add_subcommand("gen-synth", "generate a synthetic bilingual corpus");
  gs->add_option("-o,--out", synth_prefix, "output path prefix")->required();
  gs->add_option("--vocab", sc.vocab_size, "vocabulary size per language");
  gs->add_option("--classes", sc.num_classes, "number of topic classes");
  gs->add_option("--pairs", sc.num_pairs, "number of aligned sentence pairs");
  gs->add_option("--noise", sc.noise, "translation noise rate");
  gs->add_option("--train-docs", sc.train_docs, "labeled training docs per language");
  gs->add_option("--test-docs", sc.test_docs, "labeled test docs per language");
  gs->add_option("--seed", sc.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (train->parsed()) return cmd_train(ta);
    if (nn->parsed()) return cmd_nn(nn_model, nn_word, nn_k, nn_cross, nn_from_tgt, nn_out);
    if (dv->parsed()) return cmd_doc_vec(dv_model, dv_in, dv_side, dv_pool, dv_out);
    if (classify->parsed()) return cmd_classify(ea);
    if (ev->parsed()) return cmd_eval(ea);
    if (sts->parsed()) return cmd_sweep_trainsize(ea, sweep_sizes, sweep_out);
    if (smc->parsed()) return cmd_sweep_merge(sm);
    if (gs->parsed()) return cmd_gen_synth(sc, synth_prefix);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const bae::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const bae::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
