#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ntn/a2c.hpp"

using namespace ntn;

namespace {

const ActionHeads kHeads{3, 3, 11, 11};
const ActionHeads kTiny{2, 2, 3, 3};

Actor zero_actor(std::size_t obs, const ActionHeads& heads) {
  return Actor(Mlp({static_cast<int>(obs), 4, static_cast<int>(heads.total())}), heads);
}

}  // namespace

TEST_SUITE("a2c") {
  TEST_CASE("softmax per head") {
    std::vector<double> z(28, 0.0);
    softmax_heads(z, kHeads);
    for (int k = 0; k < 3; ++k) CHECK(z[static_cast<std::size_t>(k)] == doctest::Approx(1.0 / 3.0));
    for (int k = 6; k < 17; ++k) CHECK(z[static_cast<std::size_t>(k)] == doctest::Approx(1.0 / 11.0));
    std::vector<double> big = {1000.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    softmax_heads(big, kTiny);
    CHECK(big[0] == doctest::Approx(1.0));
    CHECK(std::isfinite(big[1]));
    CHECK_THROWS_AS(softmax_heads(big, kHeads), std::invalid_argument);
  }

  TEST_CASE("one hot layout") {
    const std::vector<double> v = one_hot(AgentAction{1, 0, 2, 0}, kTiny);
    const std::vector<double> expected = {0, 1, 1, 0, 0, 0, 1, 1, 0, 0};
    CHECK(v == expected);
    CHECK_THROWS_AS(one_hot(AgentAction{2, 0, 0, 0}, kTiny), std::out_of_range);
  }

  TEST_CASE("zero weights give a uniform policy") {
    const Actor a = zero_actor(5, kHeads);
    const std::vector<double> obs(5, 0.3);
    const std::vector<double> p = a.probabilities(obs);
    CHECK(p[0] == doctest::Approx(1.0 / 3.0));
    CHECK(p[20] == doctest::Approx(1.0 / 11.0));
    CHECK(a.log_prob(obs, AgentAction{0, 0, 0, 0}) ==
          doctest::Approx(2.0 * std::log(1.0 / 3.0) + 2.0 * std::log(1.0 / 11.0)));
    CHECK(a.greedy(obs) == AgentAction{0, 0, 0, 0});
  }

  TEST_CASE("two-action head: symmetric gradient for kappa = 1") {
    // a single head pair of size 2 at uniform probabilities
    const ActionHeads two{2, 1, 1, 1};
    Mlp net({1, 5});
    const Actor a(net, two);
    std::vector<double> grad(a.network().parameter_count(), 0.0);
    a.accumulate_gradient(std::vector<double>{0.0}, AgentAction{0, 0, 0, 0}, 1.0, 0.0, grad);
    // output bias gradient = kappa * (p - onehot) = (-0.5, 0.5, 0, 0, 0)
    const std::size_t b = 5;
    CHECK(grad[b + 0] == doctest::Approx(-0.5));
    CHECK(grad[b + 1] == doctest::Approx(0.5));
    CHECK(grad[b + 2] == 0.0);
  }

  TEST_CASE("actor gradient matches finite differences of the loss") {
    std::mt19937_64 rng(23);
    const Actor base(4, kTiny, 6, rng);
    std::vector<double> obs = {0.2, -0.4, 0.9, 0.1};
    const AgentAction act{1, 0, 2, 1};
    const double kappa = -0.7;
    const double beta = 0.05;
    auto loss = [&](const Actor& a) {
      const std::vector<double> p = a.probabilities(obs);
      double l = -kappa * a.log_prob(obs, act);
      std::size_t off = 0;
      for (int n : {kTiny.lane1, kTiny.lane2, kTiny.accel_x, kTiny.accel_y}) {
        double h = 0.0;
        for (int k = 0; k < n; ++k) h -= p[off + static_cast<std::size_t>(k)] * std::log(p[off + static_cast<std::size_t>(k)]);
        l -= beta * h;
        off += static_cast<std::size_t>(n);
      }
      return l;
    };
    std::vector<double> grad(base.network().parameter_count(), 0.0);
    const double reported = base.accumulate_gradient(obs, act, kappa, beta, grad);
    CHECK(reported == doctest::Approx(loss(base)));
    Actor probe = base;
    const double h = 1e-6;
    for (std::size_t k = 0; k < grad.size(); ++k) {
      const double keep = probe.network().parameters()[k];
      probe.network().parameters()[k] = keep + h;
      const double up = loss(probe);
      probe.network().parameters()[k] = keep - h;
      const double down = loss(probe);
      probe.network().parameters()[k] = keep;
      CHECK(grad[k] == doctest::Approx((up - down) / (2.0 * h)).epsilon(1e-5).scale(1.0));
    }
  }

  TEST_CASE("sampling follows the probabilities") {
    const ActionHeads two{2, 1, 1, 1};
    Mlp net({1, 5});
    net.parameters()[5] = std::log(3.0);  // bias: p = (0.75, 0.25) on the first head
    const Actor a(net, two);
    std::mt19937_64 rng(1);
    int first = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) first += a.sample(std::vector<double>{0.0}, rng).lane1 == 0;
    CHECK(static_cast<double>(first) / n == doctest::Approx(0.75).epsilon(0.02));
  }

  TEST_CASE("actor rejects mismatched network") {
    CHECK_THROWS_AS(Actor(Mlp({3, 4}), kTiny), std::invalid_argument);
  }

  TEST_CASE("critic loss and td error") {
    const CriticLoss l = critic_loss(1.0, 2.0, 3.0, false, 0.5);
    CHECK(l.kappa == doctest::Approx(0.5));
    CHECK(l.loss == doctest::Approx(0.25));
    CHECK(l.value_grad == doctest::Approx(-1.0));
    const CriticLoss t = critic_loss(1.0, 2.0, 3.0, true, 0.5);
    CHECK(t.kappa == doctest::Approx(-1.0));
    // gamma = 0 is plain regression on the reward
    CHECK(critic_loss(4.0, 1.0, 100.0, false, 0.0).kappa == doctest::Approx(3.0));
  }

  TEST_CASE("advantage telescopes with gamma one and exact values") {
    const std::vector<double> r = {1.0, -2.0, 0.5, 3.0};
    std::vector<double> v(r.size() + 1, 0.0);
    for (std::size_t t = r.size(); t-- > 0;) v[t] = r[t] + v[t + 1];
    v[0] += 0.25;  // perturb V(s0) only
    double sum = 0.0;
    for (std::size_t t = 0; t < r.size(); ++t) sum += critic_loss(r[t], v[t], v[t + 1], t + 1 == r.size(), 1.0).kappa;
    CHECK(sum == doctest::Approx(std::accumulate(r.begin(), r.end(), 0.0) - v[0]));
  }

  TEST_CASE("critic input layout and gradient") {
    std::mt19937_64 rng(5);
    const CentralCritic c(3, kTiny, 2, 8, rng);
    CHECK(c.input_size() == 2 * (3 + 10));
    const std::vector<std::vector<double>> obs = {{0.1, 0.2, 0.3}, {-0.1, 0.0, 0.5}};
    const std::vector<AgentAction> act = {AgentAction{0, 1, 2, 0}, AgentAction{1, 1, 0, 2}};
    const std::vector<std::vector<double>> enc = {one_hot(act[0], kTiny), one_hot(act[1], kTiny)};
    const std::vector<double> in = joint_input(obs, enc);
    CHECK(in.size() == c.input_size());
    // agent 0 block: obs[0..2], then heads of 2, 2, 3, 3
    CHECK(in[3 + 0] == 1.0);
    CHECK(in[3 + 2 + 1] == 1.0);
    CHECK(in[3 + 4 + 2] == 1.0);
    CHECK(in[3 + 7 + 0] == 1.0);
    CHECK(std::accumulate(in.begin() + 3, in.begin() + 13, 0.0) == 4.0);
    CHECK(in[13] == -0.1);
    CHECK(c.evaluate(obs, act) == doctest::Approx(c.value(in)));

    std::vector<double> grad(c.network().parameter_count(), 0.0);
    const double target = 2.5;
    const double loss = c.accumulate_gradient(in, target, grad);
    CHECK(loss == doctest::Approx((target - c.value(in)) * (target - c.value(in))));
    CentralCritic probe = c;
    const double h = 1e-6;
    for (std::size_t k = 0; k < grad.size(); k += 7) {
      const double keep = probe.network().parameters()[k];
      probe.network().parameters()[k] = keep + h;
      const double up = std::pow(target - probe.value(in), 2);
      probe.network().parameters()[k] = keep - h;
      const double down = std::pow(target - probe.value(in), 2);
      probe.network().parameters()[k] = keep;
      CHECK(grad[k] == doctest::Approx((up - down) / (2.0 * h)).epsilon(1e-5).scale(1.0));
    }
    CHECK_THROWS_AS(joint_input(obs, std::vector<std::vector<double>>{enc[0]}), std::invalid_argument);
  }
}
