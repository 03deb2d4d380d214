#include <catch_amalgamated.hpp>

#include <random>

#include "bae/classifier.hpp"
#include "bae/synth.hpp"

using namespace bae;
using Catch::Matchers::WithinAbs;

TEST_CASE("perceptron hand trace on two points") {
  // D=1: A at +1, B at -1, one epoch, fixed order.
  std::vector<std::pair<Vector, std::string>> ex = {{{1.0}, "A"}, {{-1.0}, "B"}};
  auto m = perceptron_train(ex, 1, 0, /*shuffle=*/false);
  REQUIRE(m.classes == std::vector<std::string>{"A", "B"});

  // Visit 1: all-zero weights, argmax ties to class 0 = A, gold A, no update.
  // Visit 2: scores are w.x = 0 for both, pred A, gold B -> w_B += [-1;1], w_A -= [-1;1].
  CHECK(m.weights[0] == Vector{1.0, -1.0});
  CHECK(m.weights[1] == Vector{-1.0, 1.0});
  // Averaged over two visits: snapshots [0,0] and the final weights.
  CHECK(m.averaged_weights[0] == Vector{0.5, -0.5});
  CHECK(m.averaged_weights[1] == Vector{-0.5, 0.5});

  CHECK(predict(m, {2.0}) == "A");
  CHECK(predict(m, {-2.0}) == "B");
  // Zero input: averaged biases are -0.5 vs +0.5, so B wins.
  CHECK(predict(m, {0.0}) == "B");
}

TEST_CASE("perceptron edge cases") {
  SECTION("single class errors") {
    std::vector<std::pair<Vector, std::string>> ex = {{{1.0}, "A"}, {{2.0}, "A"}};
    CHECK_THROWS_AS(perceptron_train(ex, 1, 0), DataError);
  }
  SECTION("no examples errors") {
    CHECK_THROWS_AS(perceptron_train({}, 1, 0), DataError);
  }
  SECTION("all-zero weights tie-break to the first class") {
    PerceptronModel m;
    m.classes = {"A", "B"};
    m.weights.assign(2, Vector(3, 0.0));
    m.averaged_weights = m.weights;
    CHECK(predict(m, {1.0, 1.0}) == "A");
  }
}

TEST_CASE("perceptron predictions are invariant to uniform input scaling") {
  std::mt19937_64 rng(3);
  std::vector<std::pair<Vector, std::string>> ex, ex10;
  for (int i = 0; i < 40; ++i) {
    Vector v = {2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0};
    std::string label = v[0] + 0.5 * v[1] > 0 ? "P" : "N";
    ex.emplace_back(v, label);
    ex10.emplace_back(Vector{10.0 * v[0], 10.0 * v[1]}, label);
  }
  auto m1 = perceptron_train(ex, 5, 7);
  auto m2 = perceptron_train(ex10, 5, 7);
  for (const auto& [v, y] : ex) {
    Vector v10 = {10.0 * v[0], 10.0 * v[1]};
    CHECK(predict(m1, v) == predict(m2, v10));
  }
}

TEST_CASE("perceptron learns a separable three-class problem") {
  std::mt19937_64 rng(9);
  std::vector<std::pair<Vector, std::string>> ex;
  const std::vector<Vector> centers = {{4.0, 0.0}, {-4.0, 0.0}, {0.0, 4.0}};
  const std::vector<std::string> labels = {"a", "b", "c"};
  for (int i = 0; i < 60; ++i) {
    const uint32_t c = uint32_t(rand_below(rng, 3));
    ex.emplace_back(Vector{centers[c][0] + uniform01(rng) - 0.5,
                           centers[c][1] + uniform01(rng) - 0.5},
                    labels[c]);
  }
  auto m = perceptron_train(ex, 10, 1);
  int correct = 0;
  for (const auto& [v, y] : ex)
    if (predict(m, v) == y) ++correct;
  CHECK(correct == int(ex.size()));
}

TEST_CASE("stratified_subsample keeps class proportions") {
  std::vector<uint32_t> labels;
  for (int i = 0; i < 60; ++i) labels.push_back(0);
  for (int i = 0; i < 30; ++i) labels.push_back(1);
  for (int i = 0; i < 10; ++i) labels.push_back(2);

  auto idx = stratified_subsample(labels, 3, 20, 5);
  REQUIRE(idx.size() == 20);
  std::vector<int> counts(3, 0);
  for (size_t i : idx) ++counts[labels[i]];
  CHECK(counts == std::vector<int>{12, 6, 2});

  SECTION("deterministic for a fixed seed, different across seeds") {
    CHECK(stratified_subsample(labels, 3, 20, 5) == idx);
    CHECK(stratified_subsample(labels, 3, 20, 6) != idx);
  }
  SECTION("no duplicate indices") {
    auto big = stratified_subsample(labels, 3, 99, 2);
    std::set<size_t> uniq(big.begin(), big.end());
    CHECK(uniq.size() == big.size());
  }
  SECTION("train_size larger than pool errors") {
    CHECK_THROWS_AS(stratified_subsample(labels, 3, 200, 1), DataError);
  }
  SECTION("full pool returns everything") {
    auto all = stratified_subsample(labels, 3, labels.size(), 1);
    CHECK(all.size() == labels.size());
  }
}

namespace {

struct EvalFixture {
  BilingualModel model;
  std::vector<LabeledBag> train_docs, test_docs;
  std::vector<BagOfWords> pool_train, pool_test;
};

// A model whose embeddings already separate topics: word columns cluster by
// topic block, with x and y sharing the structure through the bijection.
EvalFixture make_fixture(uint64_t seed) {
  SynthConfig sc;
  sc.vocab_size = 24;
  sc.num_classes = 3;
  sc.num_pairs = 10;
  sc.train_docs = 90;
  sc.test_docs = 45;
  sc.seed = seed;
  auto data = generate_synth(sc);

  EvalFixture f;
  TrainConfig cfg;
  cfg.dim = 3;
  cfg.seed = seed;
  std::vector<std::string> vx, vy;
  for (uint32_t i = 0; i < sc.vocab_size; ++i) {
    vx.push_back("xw" + std::string(i < 10 ? "000" : "00") + std::to_string(i));
    vy.push_back("yw" + std::string(i < 10 ? "000" : "00") + std::to_string(i));
  }
  std::sort(vx.begin(), vx.end());
  std::sort(vy.begin(), vy.end());
  f.model = init_model(cfg, vx, vy);
  std::mt19937_64 rng(seed + 99);
  const uint32_t block = sc.vocab_size / sc.num_classes;
  for (uint32_t i = 0; i < sc.vocab_size; ++i) {
    const uint32_t topic_x = std::min(i / block, sc.num_classes - 1);
    const uint32_t yi = data.translation[i];
    for (uint32_t d = 0; d < cfg.dim; ++d) {
      const double v = (d == topic_x ? 1.0 : 0.0) + 0.05 * (uniform01(rng) - 0.5);
      f.model.Wx(d, i) = v;
      f.model.Wy(d, yi) = v + 0.05 * (uniform01(rng) - 0.5);
    }
  }

  Vocabulary vocx, vocy;
  vocx.words = vx;
  for (uint32_t i = 0; i < vx.size(); ++i) vocx.index[vx[i]] = i;
  vocy.words = vy;
  for (uint32_t i = 0; i < vy.size(); ++i) vocy.index[vy[i]] = i;

  for (const auto& [label, text] : data.train_docs_x) {
    f.train_docs.push_back({label, to_bow(tokenize(text), vocx)});
    f.pool_train.push_back(f.train_docs.back().bag);
  }
  for (const auto& [label, text] : data.test_docs_y) {
    f.test_docs.push_back({label, to_bow(tokenize(text), vocy)});
    f.pool_test.push_back(f.test_docs.back().bag);
  }
  return f;
}

}  // namespace

TEST_CASE("cross_lingual_eval on topic-separated embeddings") {
  auto f = make_fixture(11);
  auto res = cross_lingual_eval(f.model, true, f.train_docs, f.test_docs, f.pool_train,
                                f.pool_test, 60, 3);

  CHECK(res.n_test == f.test_docs.size());
  CHECK(res.classes == std::vector<std::string>{"c0", "c1", "c2"});
  CHECK(res.accuracy > 0.9);
  CHECK(res.accuracy > res.majority_baseline);

  SECTION("confusion matrix totals match the test set") {
    uint64_t total = 0, diag = 0;
    for (size_t g = 0; g < res.confusion.size(); ++g)
      for (size_t p = 0; p < res.confusion[g].size(); ++p) {
        total += res.confusion[g][p];
        if (g == p) diag += res.confusion[g][p];
      }
    CHECK(total == res.n_test);
    CHECK_THAT(double(diag) / double(total), WithinAbs(res.accuracy, 1e-12));
  }
  SECTION("deterministic for a fixed seed") {
    auto again = cross_lingual_eval(f.model, true, f.train_docs, f.test_docs, f.pool_train,
                                    f.pool_test, 60, 3);
    CHECK(again.accuracy == res.accuracy);
    CHECK(again.confusion == res.confusion);
  }
  SECTION("majority baseline reflects the majority train class on test") {
    CHECK(res.majority_baseline > 0.0);
    CHECK(res.majority_baseline < 1.0);
  }
  SECTION("unknown test label errors") {
    auto bad = f.test_docs;
    bad[0].label = "mystery";
    CHECK_THROWS_AS(cross_lingual_eval(f.model, true, f.train_docs, bad, f.pool_train,
                                       f.pool_test, 60, 3),
                    DataError);
  }
  SECTION("train_size beyond the pool errors") {
    CHECK_THROWS_AS(cross_lingual_eval(f.model, true, f.train_docs, f.test_docs, f.pool_train,
                                       f.pool_test, 10000, 3),
                    DataError);
  }
}

TEST_CASE("class relabeling permutes the confusion matrix") {
  auto f = make_fixture(17);
  auto base = cross_lingual_eval(f.model, true, f.train_docs, f.test_docs, f.pool_train,
                                 f.pool_test, 60, 3);
  // Swap labels c0 <-> c2 everywhere; accuracy must be unchanged.
  auto swap_label = [](std::string& l) {
    if (l == "c0") l = "c2";
    else if (l == "c2") l = "c0";
  };
  for (auto& d : f.train_docs) swap_label(d.label);
  for (auto& d : f.test_docs) swap_label(d.label);
  auto swapped = cross_lingual_eval(f.model, true, f.train_docs, f.test_docs, f.pool_train,
                                    f.pool_test, 60, 3);
  CHECK_THAT(swapped.accuracy, WithinAbs(base.accuracy, 1e-12));
  const size_t n = base.confusion.size();
  for (size_t g = 0; g < n; ++g)
    for (size_t p = 0; p < n; ++p) {
      const size_t g2 = g == 0 ? 2 : g == 2 ? 0 : g;
      const size_t p2 = p == 0 ? 2 : p == 2 ? 0 : p;
      CHECK(swapped.confusion[g2][p2] == base.confusion[g][p]);
    }
}
