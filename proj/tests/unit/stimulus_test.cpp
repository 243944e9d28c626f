#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "chemneuron/cn_model.hpp"
#include "chemneuron/errors.hpp"
#include "chemneuron/stimulus.hpp"

using namespace chemneuron;

namespace {

std::vector<double> channel_times(const ChannelSchedule& schedule,
                                  int channel) {
  std::vector<double> times;
  for (const auto& e : schedule.events()) {
    if (e.channel == channel) times.push_back(e.time);
  }
  return times;
}

}  // namespace

TEST_CASE("schedules are reproducible, sorted, and bounded") {
  const std::vector<ChannelProcess> processes{
      {1, PoissonProcess{4.0}},
      {2, FollowerProcess{1, 0.02, 1e-4}},
      {3, PoissonProcess{2.0}},
  };
  const ChannelSchedule a = generate_schedule(processes, 10, 50.0, 99);
  const ChannelSchedule b = generate_schedule(processes, 10, 50.0, 99);
  const ChannelSchedule c = generate_schedule(processes, 10, 50.0, 100);

  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.events()[i] == b.events()[i]);
  }
  const bool same_as_c =
      a.size() == c.size() &&
      std::equal(a.events().begin(), a.events().end(), c.events().begin());
  CHECK_FALSE(same_as_c);

  double previous = 0.0;
  for (const auto& e : a.events()) {
    CHECK(e.time >= previous);
    CHECK(e.time <= 50.0);
    CHECK(e.count == 10);
    previous = e.time;
  }
}

TEST_CASE("stream draws do not depend on process declaration order") {
  const std::vector<ChannelProcess> forward{{1, PoissonProcess{4.0}},
                                            {2, PoissonProcess{2.0}}};
  const std::vector<ChannelProcess> reversed{{2, PoissonProcess{2.0}},
                                             {1, PoissonProcess{4.0}}};
  const ChannelSchedule a = generate_schedule(forward, 5, 30.0, 7);
  const ChannelSchedule b = generate_schedule(reversed, 5, 30.0, 7);
  CHECK(channel_times(a, 1) == channel_times(b, 1));
  CHECK(channel_times(a, 2) == channel_times(b, 2));
}

TEST_CASE("poisson event counts match frequency * duration") {
  const double f = 4.0;
  const double t_end = 500.0;
  const std::vector<ChannelProcess> processes{{1, PoissonProcess{f}}};
  const ChannelSchedule s = generate_schedule(processes, 1, t_end, 11);
  const double expected = f * t_end;
  CHECK(std::abs(static_cast<double>(s.size()) - expected) <
        3.0 * std::sqrt(expected));
}

TEST_CASE("independent poisson channels are uncorrelated") {
  const std::vector<ChannelProcess> processes{{1, PoissonProcess{5.0}},
                                              {2, PoissonProcess{5.0}}};
  const ChannelSchedule s = generate_schedule(processes, 1, 400.0, 13);
  const auto t1 = channel_times(s, 1);
  const auto t2 = channel_times(s, 2);

  const int bins = 100;
  const double width = 400.0 / bins;
  std::vector<double> c1(bins, 0.0), c2(bins, 0.0);
  for (double t : t1) c1[std::min(bins - 1, static_cast<int>(t / width))] += 1;
  for (double t : t2) c2[std::min(bins - 1, static_cast<int>(t / width))] += 1;

  double m1 = 0, m2 = 0;
  for (int i = 0; i < bins; ++i) {
    m1 += c1[i];
    m2 += c2[i];
  }
  m1 /= bins;
  m2 /= bins;
  double cov = 0, v1 = 0, v2 = 0;
  for (int i = 0; i < bins; ++i) {
    cov += (c1[i] - m1) * (c2[i] - m2);
    v1 += (c1[i] - m1) * (c1[i] - m1);
    v2 += (c2[i] - m2) * (c2[i] - m2);
  }
  const double r = cov / std::sqrt(v1 * v2);
  CHECK(std::abs(r) < 3.0 / std::sqrt(static_cast<double>(bins)));
}

TEST_CASE("followers trail their parent by delta with variance sigma2") {
  const double delta = 0.5;
  const double sigma2 = 1e-4;
  // Sparse parents: consecutive events stay ordered through the jitter, so
  // the i-th child really is the i-th parent's.
  const std::vector<ChannelProcess> processes{
      {1, PoissonProcess{1.0}},
      {2, FollowerProcess{1, delta, sigma2}},
  };
  const ChannelSchedule s = generate_schedule(processes, 1, 10000.0, 17);
  const auto parents = channel_times(s, 1);
  const auto children = channel_times(s, 2);
  REQUIRE(parents.size() > 9000);

  double sum = 0, sumsq = 0;
  const std::size_t n = std::min(parents.size(), children.size());
  REQUIRE(n > 9000);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = children[i] - parents[i];
    CHECK(d >= 0.0);
    sum += d;
    sumsq += d * d;
  }
  const double mean = sum / static_cast<double>(n);
  const double var =
      (sumsq - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1);
  const double sigma = std::sqrt(sigma2);
  CHECK(std::abs(mean - delta) < 3.0 * sigma / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(sigma2).epsilon(0.2));
}

TEST_CASE("zero-delay followers clamp negative jitter to coincidence") {
  const std::vector<ChannelProcess> processes{
      {1, PoissonProcess{1.0}},
      {2, FollowerProcess{1, 0.0, 1e-4}},
  };
  const ChannelSchedule s = generate_schedule(processes, 1, 5000.0, 19);
  const auto parents = channel_times(s, 1);
  const auto children = channel_times(s, 2);
  const std::size_t n = std::min(parents.size(), children.size());
  std::size_t exact = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = children[i] - parents[i];
    CHECK(d >= 0.0);
    if (d == 0.0) ++exact;
  }
  // Half of all normal draws are negative and clamp to zero.
  CHECK(exact > n * 2 / 5);
}

TEST_CASE("follower chains fire in index order") {
  const std::vector<ChannelProcess> processes{
      {1, PoissonProcess{2.0}},
      {2, FollowerProcess{1, 0.1, 0.0}},
      {3, FollowerProcess{2, 0.1, 0.0}},
  };
  const ChannelSchedule s = generate_schedule(processes, 1, 100.0, 23);
  const auto t1 = channel_times(s, 1);
  const auto t2 = channel_times(s, 2);
  const auto t3 = channel_times(s, 3);
  for (std::size_t i = 0; i < t3.size(); ++i) {
    CHECK(t2[i] == doctest::Approx(t1[i] + 0.1));
    CHECK(t3[i] == doctest::Approx(t2[i] + 0.1));
  }
}

TEST_CASE("invalid stimulus graphs are rejected") {
  const Count beta = 5;
  const std::vector<ChannelProcess> cycle{
      {1, FollowerProcess{2, 0.1, 0.0}},
      {2, FollowerProcess{1, 0.1, 0.0}},
  };
  CHECK_THROWS_AS(generate_schedule(cycle, beta, 10.0, 1), ConfigError);

  const std::vector<ChannelProcess> dangling{{1, FollowerProcess{9, 0.1, 0.0}}};
  CHECK_THROWS_AS(generate_schedule(dangling, beta, 10.0, 1), ConfigError);

  const std::vector<ChannelProcess> duplicate{{1, PoissonProcess{1.0}},
                                              {1, PoissonProcess{2.0}}};
  CHECK_THROWS_AS(generate_schedule(duplicate, beta, 10.0, 1), ConfigError);

  const std::vector<ChannelProcess> ok{{1, PoissonProcess{1.0}}};
  CHECK_THROWS_AS(generate_schedule(ok, beta, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(generate_schedule(ok, 0, 10.0, 1), ConfigError);
  const std::vector<ChannelProcess> still{{1, PoissonProcess{0.0}}};
  CHECK_THROWS_AS(generate_schedule(still, beta, 10.0, 1), ConfigError);
}

TEST_CASE("associative pattern lays out probe, pairs, probe") {
  AssociativePattern pattern;
  pattern.beta = 20;
  const ChannelSchedule s = associative_schedule(pattern);
  REQUIRE(s.size() == 12);  // 2 probes + 5 pairs

  const auto t1 = channel_times(s, 1);
  const auto t2 = channel_times(s, 2);
  REQUIRE(t1.size() == 5);
  REQUIRE(t2.size() == 7);

  CHECK(t2.front() == doctest::Approx(10.0));
  for (int i = 0; i < 5; ++i) {
    CHECK(t1[static_cast<std::size_t>(i)] == doctest::Approx(60.0 + 50.0 * i));
    CHECK(t2[static_cast<std::size_t>(i) + 1] ==
          doctest::Approx(60.0 + 50.0 * i));
  }
  CHECK(t2.back() == doctest::Approx(310.0));
  for (const auto& e : s.events()) CHECK(e.count == 20);
}

TEST_CASE("schedule csv round-trips") {
  const std::vector<ChannelProcess> processes{
      {1, PoissonProcess{3.0}},
      {2, FollowerProcess{1, 0.25, 1e-4}},
  };
  const ChannelSchedule s = generate_schedule(processes, 7, 20.0, 29);
  std::ostringstream out;
  s.write_csv(out);
  const ChannelSchedule back = ChannelSchedule::read_csv(out.str());
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back.events()[i].channel == s.events()[i].channel);
    CHECK(back.events()[i].count == s.events()[i].count);
    CHECK(back.events()[i].time ==
          doctest::Approx(s.events()[i].time).epsilon(1e-8));
  }
}

TEST_CASE("malformed schedule csv reports the offending line") {
  CHECK_THROWS_AS(ChannelSchedule::read_csv("time,channel,count\n1.0,2\n"),
                  ParseError);
  CHECK_THROWS_AS(ChannelSchedule::read_csv("time,channel,count\nx,1,5\n"),
                  ParseError);
  CHECK_THROWS_AS(
      ChannelSchedule::read_csv("time,channel,count\n1.0,1,5,9\n"),
      ParseError);
  try {
    ChannelSchedule::read_csv("time,channel,count\n0.5,1,5\nbad,1,5\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("binding resolves channels to input species") {
  const NetworkSpec net = build_basic_cn([] {
    CNConfig c;
    c.channels = 2;
    c.chain_length = 1;
    return c;
  }());
  ChannelSchedule s(std::vector<ChannelEvent>{{1.0, 1, 5}, {2.0, 2, 5}});
  const BolusSchedule bound = s.bind_to_network(net);
  REQUIRE(bound.size() == 2);
  CHECK(bound.events()[0].species == net.species_id("I1"));
  CHECK(bound.events()[1].species == net.species_id("I2"));

  ChannelSchedule bad(std::vector<ChannelEvent>{{1.0, 3, 5}});
  CHECK_THROWS_AS(bad.bind_to_network(net), ConfigError);
}
