#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cra/problems.hpp"
#include "test_util.hpp"

using namespace cra;
using namespace cra::test;

TEST_CASE("mis relaxed loss on the triangle") {
  Graph tri = completeGraph(3);
  MisProblem pr{&tri, 2.0};

  Eigen::VectorXd p(3);
  p << 1, 0, 0;
  auto [value, grad] = relaxedLoss(pr, p);
  CHECK(value == doctest::Approx(-1.0));
  CHECK(grad[0] == doctest::Approx(-1.0));
  CHECK(grad[1] == doctest::Approx(1.0));
  CHECK(grad[2] == doctest::Approx(1.0));

  p << 1, 1, 0;
  CHECK(relaxedLoss(pr, p).value == doctest::Approx(0.0));

  Eigen::VectorXd wrong(2);
  CHECK_THROWS_AS(relaxedLoss(pr, wrong), std::invalid_argument);
}

TEST_CASE("maxcut relaxed loss on a single edge") {
  Graph g(2, {{0, 1, 1.0}});
  MaxCutProblem pr{&g};
  Eigen::VectorXd p(2);
  p << 1, 0;
  CHECK(relaxedLoss(pr, p).value == doctest::Approx(-1.0));
  p << 1, 1;
  CHECK(relaxedLoss(pr, p).value == doctest::Approx(0.0));
}

TEST_CASE("mis and maxcut gradients match finite differences") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> wdist(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = generateErg(12, 0.4, 100 + trial);
    Eigen::VectorXd p = randomInterior(12, 1, rng).col(0);

    MisProblem mis{&g, 2.0};
    auto lg = relaxedLoss(mis, p);
    auto fd = finiteDifference([&](const Eigen::MatrixXd& q) { return relaxedLoss(mis, q.col(0)).value; },
                               p);
    CHECK(gradientError(lg.grad, fd.col(0)) < 1e-6);

    // weighted (and signed) instance for maxcut
    std::vector<WeightedEdge> edges = g.edges();
    for (auto& e : edges) e.w = wdist(rng);
    Graph wg(12, std::move(edges));
    MaxCutProblem mc{&wg};
    auto lg2 = relaxedLoss(mc, p);
    auto fd2 = finiteDifference(
        [&](const Eigen::MatrixXd& q) { return relaxedLoss(mc, q.col(0)).value; }, p);
    CHECK(gradientError(lg2.grad, fd2.col(0)) < 1e-6);
  }
}

TEST_CASE("dbm relaxed loss hand values") {
  DbmProblem pr;
  pr.likelihood = Eigen::MatrixXd::Constant(1, 1, 3.0);
  pr.sameField = Eigen::MatrixXi::Constant(1, 1, 1);
  pr.pFrac = 0.0;
  pr.qFrac = 0.0;
  pr.lambda << 7, 11, 13, 17;

  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(1, 1, 1.0);
  CHECK(relaxedLoss(pr, p).value == doctest::Approx(-3.0));

  DbmProblem big = generateDbm(3, 4, 0.25, 0.25, {10, 10, 25, 25}, 9);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 4);
  CHECK(relaxedLoss(big, zero).value == doctest::Approx(0.0));
}

TEST_CASE("dbm gradient matches finite differences away from kinks") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 20; ++trial) {
    DbmProblem pr = generateDbm(4, 4, 0.25, 0.25, {10, 10, 25, 25}, 200 + trial);
    Eigen::MatrixXd p = randomInterior(4, 4, rng);

    // resample if any relu argument sits near its kink
    const Eigen::ArrayXXd M = pr.sameField.cast<double>().array();
    const double total = p.sum();
    bool nearKink = std::abs(pr.pFrac * total - (M * p.array()).sum()) < 1e-3 ||
                    std::abs(pr.qFrac * total - ((1 - M) * p.array()).sum()) < 1e-3;
    for (int i = 0; i < 4; ++i) nearKink |= std::abs(p.row(i).sum() - 1.0) < 1e-3;
    for (int j = 0; j < 4; ++j) nearKink |= std::abs(p.col(j).sum() - 1.0) < 1e-3;
    if (nearKink) continue;

    auto lg = relaxedLoss(pr, p);
    auto fd = finiteDifference([&](const Eigen::MatrixXd& q) { return relaxedLoss(pr, q).value; },
                               p);
    CHECK(gradientError(lg.grad, fd) < 1e-5);
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("coloring relaxed loss") {
  Graph edge(2, {{0, 1, 1.0}});
  ColoringProblem pr{&edge, 2};

  Eigen::MatrixXd P(2, 2);
  P << 1, 0, 0, 1;
  CHECK(relaxedLoss(pr, P).value == doctest::Approx(0.0));
  P << 1, 0, 1, 0;
  CHECK(relaxedLoss(pr, P).value == doctest::Approx(1.0));

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = generateErg(8, 0.4, 300 + trial);
    ColoringProblem cp{&g, 3};
    Eigen::MatrixXd Q = randomInterior(8, 3, rng);
    auto lg = relaxedLoss(cp, Q);
    auto fd = finiteDifference([&](const Eigen::MatrixXd& q) { return relaxedLoss(cp, q).value; },
                               Q);
    CHECK(gradientError(lg.grad, fd) < 1e-6);
  }
}

TEST_CASE("discrete evaluation") {
  Graph tri = completeGraph(3);
  MisProblem mis{&tri, 2.0};
  Eigen::VectorXi x(3);
  x << 1, 1, 0;
  auto eval = evaluateDiscrete(mis, x);
  CHECK_FALSE(eval.feasible);
  CHECK(eval.violations == 1);
  CHECK(eval.cost == doctest::Approx(0.0));  // -2 + lambda

  x << 1, 0, 0;
  eval = evaluateDiscrete(mis, x);
  CHECK(eval.feasible);
  CHECK(eval.cost == doctest::Approx(-1.0));

  Graph e(2, {{0, 1, 1.0}});
  MaxCutProblem mc{&e};
  Eigen::VectorXi y(2);
  y << 1, 0;
  auto cutEval = evaluateDiscrete(mc, y);
  CHECK(cutEval.feasible);
  CHECK(cutEval.cost == doctest::Approx(-1.0));

  Eigen::VectorXi bad(3);
  bad << 0, 2, 1;
  CHECK_THROWS_AS(evaluateDiscrete(mis, bad), std::invalid_argument);
}

TEST_CASE("relaxed loss agrees with the discrete objective on binary points") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    Graph g = generateErg(10, 0.4, 400 + trial);

    MisProblem mis{&g, 2.0};
    Eigen::VectorXi x = randomBinary(10, rng);
    CHECK(relaxedLoss(mis, x.cast<double>()).value ==
          doctest::Approx(evaluateDiscrete(mis, x).cost).epsilon(1e-12));

    MaxCutProblem mc{&g};
    CHECK(relaxedLoss(mc, x.cast<double>()).value ==
          doctest::Approx(evaluateDiscrete(mc, x).cost).epsilon(1e-12));

    ColoringProblem cp{&g, 3};
    Eigen::VectorXi colors(10);
    std::uniform_int_distribution<int> cdist(0, 2);
    for (int i = 0; i < 10; ++i) colors[i] = cdist(rng);
    Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(10, 3);
    for (int i = 0; i < 10; ++i) onehot(i, colors[i]) = 1.0;
    CHECK(relaxedLoss(cp, onehot).value ==
          doctest::Approx(evaluateDiscrete(cp, colors).cost).epsilon(1e-12));

    DbmProblem dbm = generateDbm(3, 3, 0.25, 0.25, {10, 10, 25, 25}, 500 + trial);
    Eigen::MatrixXi xb(3, 3);
    for (int i = 0; i < 3; ++i) xb.row(i) = randomBinary(3, rng).transpose();
    CHECK(relaxedLoss(dbm, xb.cast<double>()).value ==
          doctest::Approx(evaluateDiscrete(dbm, xb).cost).epsilon(1e-12));
  }
}

TEST_CASE("mis with lambda 2: feasible sets score their size, violations cost extra") {
  std::mt19937_64 rng(123);
  Graph g = generateErg(12, 0.3, 999);
  MisProblem pr{&g, 2.0};

  // grow a maximal independent set greedily
  Eigen::VectorXi x = Eigen::VectorXi::Zero(12);
  for (int v = 0; v < 12; ++v) {
    bool free = true;
    for (int u : g.neighbors(v))
      if (x[u] == 1) free = false;
    if (free) x[v] = 1;
  }
  auto eval = evaluateDiscrete(pr, x);
  CHECK(eval.feasible);
  CHECK(eval.cost == doctest::Approx(-x.sum()));

  // adding a node with exactly one selected neighbor raises the cost by lambda - 1 = 1
  for (int v = 0; v < 12; ++v) {
    if (x[v] == 1) continue;
    int selectedNbrs = 0;
    for (int u : g.neighbors(v)) selectedNbrs += x[u];
    if (selectedNbrs == 1) {
      Eigen::VectorXi y = x;
      y[v] = 1;
      CHECK(evaluateDiscrete(pr, y).cost == doctest::Approx(eval.cost + 1.0));
      break;
    }
  }
}

TEST_CASE("dbm validation") {
  DbmProblem pr;
  pr.likelihood = Eigen::MatrixXd::Zero(2, 2);
  pr.sameField = Eigen::MatrixXi::Zero(2, 3);
  CHECK_THROWS_AS(pr.validate(), std::invalid_argument);

  pr.sameField = Eigen::MatrixXi::Constant(2, 2, 2);
  CHECK_THROWS_AS(pr.validate(), std::invalid_argument);

  Eigen::MatrixXd wrongShape = Eigen::MatrixXd::Zero(3, 2);
  DbmProblem ok = generateDbm(2, 2, 0.25, 0.25, {10, 10, 25, 25}, 1);
  CHECK_THROWS_AS(relaxedLoss(ok, wrongShape), std::invalid_argument);
}
