#include <cmath>
#include <vector>

#include "doctest.h"
#include "goalnet/error.hpp"
#include "goalnet/optim.hpp"
#include "goalnet/params.hpp"

using namespace goalnet;

namespace {

ParamSet scalar_set(double value) {
  ParamSet ps;
  ps.add("w", 1, 1, InitScheme::kZeros).mutable_value()(0, 0) = value;
  return ps;
}

void set_grad(ParamSet& ps, double g) {
  ps.zero_grad();
  Tensor& w = ps.get("w");
  Tensor loss = scale(sum_all(w), g);
  loss.backward();
}

}  // namespace

TEST_CASE("biases start at zero and gains at one") {
  ParamSet ps;
  ps.add("b", 1, 7, InitScheme::kZeros);
  ps.add("g", 1, 7, InitScheme::kOnes);
  init_params(ps, 5);
  for (double v : ps.get("b").value().data()) CHECK(v == 0.0);
  for (double v : ps.get("g").value().data()) CHECK(v == 1.0);
}

TEST_CASE("same seed gives identical tensors, different seeds differ") {
  auto make = [](std::uint64_t seed) {
    ParamSet ps;
    ps.add("a", 8, 4, InitScheme::kXavierUniform);
    ps.add("k", 8, 4, InitScheme::kKaimingNormal);
    init_params(ps, seed);
    return ps;
  };
  ParamSet a = make(1), b = make(1), c = make(2);
  CHECK(a.get("a").value() == b.get("a").value());
  CHECK(a.get("k").value() == b.get("k").value());
  CHECK_FALSE(a.get("a").value() == c.get("a").value());
}

TEST_CASE("a tensor's init does not depend on its neighbours") {
  ParamSet one, two;
  one.add("x", 5, 5, InitScheme::kXavierUniform);
  two.add("other", 3, 3, InitScheme::kXavierUniform);
  two.add("x", 5, 5, InitScheme::kXavierUniform);
  init_params(one, 9);
  init_params(two, 9);
  CHECK(one.get("x").value() == two.get("x").value());
}

TEST_CASE("xavier bounds and variance, kaiming variance") {
  ParamSet ps;
  ps.add("x", 200, 100, InitScheme::kXavierUniform);
  ps.add("k", 200, 100, InitScheme::kKaimingNormal);
  init_params(ps, 77);
  const double a = std::sqrt(6.0 / 300.0);
  double sx = 0, sk = 0;
  for (double v : ps.get("x").value().data()) {
    CHECK(std::abs(v) <= a);
    sx += v * v;
  }
  for (double v : ps.get("k").value().data()) sk += v * v;
  const double n = 200.0 * 100.0;
  // 20000 draws: the sample variance sits within a few percent of a^2/3 and 2/fan_in
  CHECK(sx / n == doctest::Approx(a * a / 3.0).epsilon(0.05));
  CHECK(sk / n == doctest::Approx(2.0 / 200.0).epsilon(0.05));
}

TEST_CASE("duplicate parameter names are rejected") {
  ParamSet ps;
  ps.add("w", 1, 1, InitScheme::kZeros);
  CHECK_THROWS_AS(ps.add("w", 2, 2, InitScheme::kZeros), Error);
  CHECK_THROWS_AS((void)ps.get("missing"), Error);
}

TEST_CASE("clone does not share storage") {
  ParamSet ps = scalar_set(1.0);
  ParamSet copy = ps.clone();
  copy.get("w").mutable_value()(0, 0) = 5.0;
  CHECK(ps.get("w").value()(0, 0) == 1.0);
  ps.assign_values(copy);
  CHECK(ps.get("w").value()(0, 0) == 5.0);
}

TEST_CASE("first adam step with grad 1 moves the parameter by about lr") {
  ParamSet ps = scalar_set(0.5);
  set_grad(ps, 1.0);
  AdamOptions opt;
  opt.lr = 1e-3;
  opt.weight_decay = 0.0;
  Adam adam(opt);
  adam.step(ps);
  // m = 0.1, v = 0.001; bias correction gives m_hat = v_hat = 1
  const double expected = 0.5 - 1e-3 * 1.0 / (1.0 + 1e-8);
  CHECK(ps.get("w").value()(0, 0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("two adam steps match a hand computation") {
  ParamSet ps = scalar_set(0.2);
  AdamOptions opt;
  opt.lr = 0.01;
  opt.weight_decay = 0.1;
  Adam adam(opt);
  double p = 0.2, m = 0, v = 0;
  const double grads[] = {1.0, -2.0};
  for (int t = 1; t <= 2; ++t) {
    const double g = grads[t - 1];
    set_grad(ps, g);
    adam.step(ps);
    p *= 1.0 - 0.01 * 0.1;
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    const double mh = m / (1 - std::pow(0.9, t));
    const double vh = v / (1 - std::pow(0.999, t));
    p -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
    CHECK(ps.get("w").value()(0, 0) == doctest::Approx(p).epsilon(1e-14));
  }
  CHECK(adam.step_count() == 2);
}

TEST_CASE("zero gradient and zero decay leave the parameter unchanged") {
  ParamSet ps = scalar_set(0.7);
  ps.zero_grad();
  AdamOptions opt;
  opt.weight_decay = 0.0;
  Adam adam(opt);
  adam.step(ps);
  CHECK(ps.get("w").value()(0, 0) == 0.7);
}

TEST_CASE("zero gradient with decay scales by 1 - lr * wd") {
  ParamSet ps = scalar_set(0.7);
  ps.zero_grad();
  Adam adam;  // lr 1e-4, wd 1e-4
  adam.step(ps);
  CHECK(ps.get("w").value()(0, 0) == doctest::Approx(0.7 * (1 - 1e-8)).epsilon(1e-15));
}

TEST_CASE("lr halves after epochs 10 and 20 only") {
  std::vector<double> hist(25, 1.0);
  for (std::size_t e = 1; e <= 25; ++e) {
    const auto d = schedule_and_stop(e, std::span(hist).first(e));
    CHECK(d.lr_multiplier == ((e == 10 || e == 20) ? 0.5 : 1.0));
  }
}

TEST_CASE("plateau stops after the fifth non-improving epoch") {
  const std::vector<double> hist = {0.5, 0.49, 0.49, 0.49, 0.49, 0.49, 0.49};
  for (std::size_t e = 1; e <= hist.size(); ++e) {
    const auto d = schedule_and_stop(e, std::span(hist).first(e));
    CHECK(d.stop == (e >= 7));
  }
}

TEST_CASE("strictly decreasing history never stops") {
  std::vector<double> hist;
  for (std::size_t e = 1; e <= 25; ++e) {
    hist.push_back(1.0 / static_cast<double>(e));
    CHECK_FALSE(schedule_and_stop(e, hist).stop);
  }
}
