#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rlnc/bounds.hpp"
#include "rlnc/errors.hpp"
#include "rlnc/generators.hpp"
#include "rlnc/sim.hpp"

using namespace rlnc;

namespace {

Rational R(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

CoefficientMap constant_coefficients(const Network& net, int w, std::uint32_t v) {
  CoefficientMap map;
  for (const auto& p : coefficient_pairs(net, w))
    map[{cut_channel_name(net, p.in), net.channels()[p.out].id}] = Element{v};
  return map;
}

// Nonsingular w x w matrices over GF(q) counted by brute force.
std::uint64_t count_nonsingular(const Field& f, std::size_t w) {
  const std::uint64_t q = f.order();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < w * w; ++i) total *= q;
  std::uint64_t good = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    MatrixGF m(w, w);
    std::uint64_t x = idx;
    for (std::size_t i = 0; i < w * w; ++i, x /= q) m.at(i / w, i % w) = Element{static_cast<std::uint32_t>(x % q)};
    good += matrix_rank(f, m) == w;
  }
  return good;
}

struct ButterflyCounts {
  std::uint64_t t1 = 0, t2 = 0, any = 0;
};

// Hand-written butterfly propagation over GF(2) for all 2^12 assignments.
ButterflyCounts butterfly_by_hand() {
  ButterflyCounts c;
  for (std::uint32_t bits = 0; bits < 4096; ++bits) {
    auto k = [&](int i) { return (bits >> i) & 1u; };
    // f_e1 = (k0, k1), f_e2 = (k2, k3) as columns of the source coefficients.
    const std::uint32_t f1[2]{k(0), k(1)}, f2[2]{k(2), k(3)};
    std::uint32_t f3[2], f4[2], f5[2], f6[2], f7[2], f8[2], f9[2];
    for (int r = 0; r < 2; ++r) {
      f3[r] = k(4) & f1[r];
      f4[r] = k(5) & f1[r];
      f5[r] = k(6) & f2[r];
      f6[r] = k(7) & f2[r];
      f7[r] = (k(8) & f4[r]) ^ (k(9) & f5[r]);
      f8[r] = k(10) & f7[r];
      f9[r] = k(11) & f7[r];
    }
    const bool fail1 = ((f3[0] & f8[1]) ^ (f3[1] & f8[0])) == 0;
    const bool fail2 = ((f9[0] & f6[1]) ^ (f9[1] & f6[0])) == 0;
    c.t1 += fail1;
    c.t2 += fail2;
    c.any += fail1 || fail2;
  }
  return c;
}

Network direct(int channels) {
  std::vector<Channel> ch;
  for (int i = 1; i <= channels; ++i) ch.push_back({"x" + std::to_string(i), "s", "t"});
  return Network("direct", {"s", "t"}, "s", {"t"}, ch);
}

double se(const Rational& p, double n) {
  const double x = to_double(p);
  return std::sqrt(x * (1 - x) / n);
}

}  // namespace

TEST_CASE("free coefficient count") {
  CHECK(count_free_coefficients(gen_butterfly(), 2) == 12);
  CHECK(count_free_coefficients(gen_plait(2, 1), 2) == 8);
  CHECK(count_free_coefficients(direct(3), 3) == 9);
  CHECK(coefficient_pairs(gen_butterfly(), 2).size() == 12);
}

TEST_CASE("kernel propagation") {
  const auto gf2 = Field::of_order(2);
  const auto bf = gen_butterfly();
  const auto ones = propagate_kernels(bf, 2, gf2, constant_coefficients(bf, 2, 1));
  CHECK(ones.kernels.at("e1") == std::vector<Element>{{1}, {1}});
  CHECK(ones.kernels.at("e2") == std::vector<Element>{{1}, {1}});
  CHECK(ones.kernels.at("e7") == std::vector<Element>{{0}, {0}});
  CHECK(ones.kernels.at("d1") == std::vector<Element>{{1}, {0}});
  for (const char* t : {"t1", "t2"}) CHECK(matrix_rank(gf2, decoding_matrix(ones, bf, t)) == 1);
  const auto m1 = decoding_matrix(ones, bf, "t1");
  CHECK(m1.rows() == 2);
  CHECK(m1.cols() == 2);
  CHECK(m1.at(0, 0) == ones.kernels.at("e3")[0]);
  CHECK(m1.at(1, 1) == ones.kernels.at("e8")[1]);

  const auto zeros = propagate_kernels(bf, 2, gf2, constant_coefficients(bf, 2, 0));
  for (const auto& ch : bf.channels()) CHECK(zeros.kernels.at(ch.id) == std::vector<Element>{{0}, {0}});

  // Identity coefficients on plait(2,1): slot j feeds slot j.
  const auto plait = gen_plait(2, 1);
  const auto gf3 = Field::of_order(3);
  CoefficientMap id;
  const auto& chans = plait.channels();
  id[{"d1", chans[0].id}] = Element{1};
  id[{"d1", chans[1].id}] = Element{0};
  id[{"d2", chans[0].id}] = Element{0};
  id[{"d2", chans[1].id}] = Element{1};
  id[{chans[0].id, chans[2].id}] = Element{1};
  id[{chans[0].id, chans[3].id}] = Element{0};
  id[{chans[1].id, chans[2].id}] = Element{0};
  id[{chans[1].id, chans[3].id}] = Element{1};
  const auto k = propagate_kernels(plait, 2, gf3, id);
  CHECK(decoding_matrix(k, plait, "t") == MatrixGF(2, 2, {{1}, {0}, {0}, {1}}));

  id.erase({chans[1].id, chans[3].id});
  try {
    propagate_kernels(plait, 2, gf3, id);
    FAIL("expected missing-pair error");
  } catch (const NetworkError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(chans[1].id) != std::string::npos);
    CHECK(msg.find(chans[3].id) != std::string::npos);
  }
}

TEST_CASE("trials") {
  const auto gf2 = Field::of_order(2);
  const auto bf = gen_butterfly();
  SplitMix64 a(99), b(99);
  for (int i = 0; i < 50; ++i) {
    const auto x = run_trial(bf, 2, gf2, a), y = run_trial(bf, 2, gf2, b);
    REQUIRE(x.ranks == y.ranks);
    REQUIRE(x.network_failed == (x.sink_failed[0] || x.sink_failed[1]));
  }

  // A sink with a single in-channel can never decode rate 2.
  const Network thin("thin", {"s", "a", "t1", "t2"}, "s", {"t1", "t2"},
                     {{"x1", "s", "a"}, {"x2", "s", "a"}, {"x3", "a", "t1"}, {"x4", "a", "t2"}, {"x5", "a", "t2"}});
  SplitMix64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto o = run_trial(thin, 2, gf2, rng);
    REQUIRE(o.sink_failed[0]);
    REQUIRE(o.network_failed);
  }

  // One uniform 2x2 matrix: singular with probability a.
  const auto plait = gen_plait(2, 0);
  const int n = 100000;
  int fails = 0;
  for (int i = 0; i < n; ++i) fails += run_trial(plait, 2, gf2, rng).network_failed;
  CHECK(std::abs(fails / double(n) - 0.625) <= 4 * std::sqrt(0.625 * 0.375 / n));
}

TEST_CASE("exact enumeration against hand oracles") {
  const auto gf2 = Field::of_order(2);
  const auto bf = enumerate_exact(gen_butterfly(), 2, gf2);
  const auto hand = butterfly_by_hand();
  CHECK(bf.total == 4096);
  CHECK(bf.sink_failures == std::vector<std::uint64_t>{hand.t1, hand.t2});
  CHECK(bf.network_failures == hand.any);
  CHECK(bf.sink_probability[0] == R(125, 128));

  const auto p21 = enumerate_exact(gen_plait(2, 1), 2, gf2);
  CHECK(p21.total == 256);
  CHECK(p21.sink_probability[0] == R(55, 64));
  const auto g2 = enumerate_exact(gen_plait_union(2, 1, 2), 2, gf2);
  CHECK(g2.total == 4096);
  CHECK(g2.network_probability == R(485, 512));
  CHECK(g2.network_probability == 1 - pow(1 - compute_a(2, 2), 3));

  CHECK_THROWS_AS(enumerate_exact(gen_butterfly(), 2, Field::of_order(5)), EnumerationCapError);
  try {
    enumerate_exact(gen_butterfly(), 2, Field::of_order(5));
  } catch (const EnumerationCapError& e) {
    CHECK(e.required() == "244140625");
  }
  // Above capacity every sink fails; the CLI rejects this case up front.
  CHECK(enumerate_exact(gen_butterfly(), 3, gf2).network_probability == 1);
  CHECK_THROWS_AS(require_rate(gen_butterfly(), 3), CapacityError);
}

TEST_CASE("plait equality") {
  for (std::uint32_t q : {2u, 3u}) {
    const auto f = Field::of_order(q);
    for (int w : {1, 2}) {
      const std::uint64_t good = count_nonsingular(f, w);
      std::uint64_t all = 1;
      for (int i = 0; i < w * w; ++i) all *= q;
      for (int r = 0; r <= 2; ++r) {
        CAPTURE(q);
        CAPTURE(w);
        CAPTURE(r);
        const auto ex = enumerate_exact(gen_plait(w, r), w, f);
        // Failure iff some stage matrix is singular.
        const Rational hand = 1 - pow(Rational(BigInt(good), BigInt(all)), r + 1);
        CHECK(ex.sink_probability[0] == hand);
        CHECK(ex.sink_probability[0] == bound_sink_simple(r, q, w).value);
      }
    }
  }
}

TEST_CASE("spanning probability agrees with direct networks") {
  for (std::uint32_t q : {2u, 3u})
    for (int w : {1, 2}) {
      const auto ex = enumerate_exact(direct(w), w, Field::of_order(q));
      CHECK(1 - ex.sink_probability[0] == lemma1_probability(q, w, 0));
    }
}

TEST_CASE("G2 meets the network bound") {
  for (auto [w, R_, l, q] : std::vector<std::tuple<int, int, int, std::uint32_t>>{
           {2, 1, 2, 2}, {1, 2, 2, 2}, {1, 1, 3, 3}, {2, 0, 2, 2}, {1, 3, 2, 2}}) {
    const auto net = gen_plait_union(w, R_, l);
    std::vector<PathCollection> pcs;
    for (const auto& t : net.sinks()) pcs.push_back(find_disjoint_paths(net, t, w));
    const auto seq = build_cut_sequences(net, pcs);
    const auto ex = enumerate_exact(net, w, Field::of_order(q));
    CAPTURE(w);
    CAPTURE(R_);
    CAPTURE(l);
    CHECK(ex.network_probability == bound_network_cutwise(seq, q).value);
    CHECK(ex.network_probability == 1 - pow(1 - compute_a(q, w), R_ + l));
  }
}

TEST_CASE("butterfly meets the sink cut bound") {
  const auto ex = enumerate_exact(gen_butterfly(), 2, Field::of_order(2));
  const std::vector<std::size_t> profile{0, 1, 1, 1, 1};
  CHECK(ex.sink_probability[0] == bound_sink_cutwise(profile, 2, 2).value);
  CHECK(ex.sink_probability[1] == bound_sink_cutwise(profile, 2, 2).value);
}

TEST_CASE("exact result invariants and worker independence") {
  std::vector<std::pair<Network, int>> cases{{gen_butterfly(), 2}, {gen_plait_union(2, 1, 2), 2}, {gen_plait(1, 3), 1}};
  for (std::uint64_t seed = 0; seed < 6; ++seed) cases.push_back({gen_layered_random(2, 2, 1, 2, seed), 1});
  for (const auto& [net, w] : cases)
    for (std::uint32_t q : {2u, 3u}) {
      if (std::pow(double(q), double(count_free_coefficients(net, w))) > 2e6) continue;
      const auto f = Field::of_order(q);
      const auto one = enumerate_exact(net, w, f, kDefaultEnumerationCap, 1);
      const auto three = enumerate_exact(net, w, f, kDefaultEnumerationCap, 3);
      REQUIRE(one.to_json() == three.to_json());
      Rational sum = 0, mx = 0;
      for (const auto& p : one.sink_probability) {
        sum += p;
        mx = std::max(mx, p);
      }
      CHECK(one.network_probability >= mx);
      CHECK(one.network_probability <= sum);
      CHECK(one.network_probability == Rational(BigInt(one.network_failures), BigInt(one.total)));
    }
}

TEST_CASE("monte carlo against enumeration") {
  const std::uint64_t trials = 100000;
  std::vector<std::pair<Network, std::uint32_t>> cases{
      {gen_butterfly(), 2}, {gen_plait_union(2, 1, 2), 2}, {gen_plait(2, 1), 3}, {gen_plait_union(1, 2, 3), 3}};
  for (const auto& [net, q] : cases) {
    const int w = net.name() == "plait-union(1,2,3)" ? 1 : 2;
    const auto f = Field::of_order(q);
    const auto ex = enumerate_exact(net, w, f);
    const auto mc = monte_carlo(net, w, f, trials, 7, 1);
    CAPTURE(net.name());
    CHECK(std::abs(mc.network_failure.estimate - to_double(ex.network_probability)) <=
          4 * se(ex.network_probability, trials));
    for (std::size_t i = 0; i < ex.sink_probability.size(); ++i) {
      CHECK(std::abs(mc.sink_failure[i].estimate - to_double(ex.sink_probability[i])) <=
            4 * se(ex.sink_probability[i], trials));
      CHECK(mc.network_failure.count >= mc.sink_failure[i].count);
    }
  }
}

TEST_CASE("monte carlo determinism") {
  const auto bf = gen_butterfly();
  const auto f = Field::of_order(2);
  const auto a = monte_carlo(bf, 2, f, 20000, 5, 1);
  CHECK(a == monte_carlo(bf, 2, f, 20000, 5, 1));
  CHECK(a == monte_carlo(bf, 2, f, 20000, 5, 8));
  CHECK(a.to_csv() == monte_carlo(bf, 2, f, 20000, 5, 3).to_csv());
  CHECK_FALSE(a == monte_carlo(bf, 2, f, 20000, 6, 1));
  CHECK_THROWS_AS(monte_carlo(bf, 2, f, 0, 5, 1), std::invalid_argument);
  CHECK(trial_seed(5, 0) != trial_seed(5, 1));
}

TEST_CASE("proportion intervals") {
  const auto normal = proportion_interval(500, 1000);
  CHECK(normal.method == "normal");
  CHECK(normal.half_width == doctest::Approx(1.959964 * std::sqrt(0.25 / 1000)).epsilon(1e-5));
  const auto low = proportion_interval(2, 1000);
  CHECK(low.method == "wilson");
  CHECK(low.low > 0);
  CHECK(low.low < 0.002);
  CHECK(low.high > 0.002);
  const auto none = proportion_interval(0, 100);
  CHECK(none.method == "wilson");
  CHECK(none.low == 0);
  CHECK(none.high > 0);
  CHECK(proportion_interval(998, 1000).method == "wilson");
}
