#include <cmath>
#include <set>
#include <string>

#include "doctest.h"

#include "chemneuron/cn_model.hpp"
#include "chemneuron/errors.hpp"

using namespace chemneuron;

namespace {

CNConfig shape(int channels, int chain_length) {
  CNConfig config;
  config.channels = channels;
  config.chain_length = chain_length;
  return config;
}

}  // namespace

TEST_CASE("basic network size scales as 5N+m+2 species, 12N+2m+1 reactions") {
  for (int n : {1, 2, 5}) {
    for (int m : {1, 3, 5}) {
      const NetworkSpec net = build_basic_cn(shape(n, m));
      CAPTURE(n);
      CAPTURE(m);
      CHECK(net.species_count() == static_cast<std::size_t>(5 * n + m + 2));
      CHECK(net.reaction_count() == static_cast<std::size_t>(12 * n + 2 * m + 1));
    }
  }
  // The smallest associative configuration, counted by hand.
  const NetworkSpec net = build_basic_cn(shape(2, 3));
  CHECK(net.species_count() == 15);
  CHECK(net.reaction_count() == 31);
}

TEST_CASE("compartmentalized network size scales with channels") {
  for (int n : {1, 2, 3}) {
    for (int m : {1, 2, 4}) {
      const NetworkSpec net = build_bio_cn(shape(n, m));
      CAPTURE(n);
      CAPTURE(m);
      CHECK(net.species_count() == static_cast<std::size_t>(9 * n + n * m + 1));
      CHECK(net.reaction_count() ==
            static_cast<std::size_t>(n * (17 + 2 * m) + 1));
    }
  }
}

TEST_CASE("basic network wires the expected species") {
  const NetworkSpec net = build_basic_cn(shape(2, 3));
  for (const char* name :
       {"I1", "A1", "AEact1", "AH1", "H1", "I2", "A2", "AEact2", "AH2", "H2",
        "B", "E0", "E1", "E2", "Eact"}) {
    CHECK(net.find_species(name).has_value());
  }
  CHECK(input_species(1) == "I1");
  CHECK(weight_species(2) == "H2");
  CHECK(trigger_species() == "Eact");
}

TEST_CASE("initial state is an empty neuron with a full ladder pool") {
  CNConfig config = shape(2, 3);
  config.e_total = 7;
  config.initial_weights = {100, 0};
  const NetworkSpec net = build_basic_cn(config);
  CHECK(net.initial_count(net.species_id("E0")) == 7);
  CHECK(net.initial_count(net.species_id("E1")) == 0);
  CHECK(net.initial_count(net.species_id("Eact")) == 0);
  CHECK(net.initial_count(net.species_id("B")) == 0);
  CHECK(net.initial_count(net.species_id("H1")) == 100);
  CHECK(net.initial_count(net.species_id("H2")) == 0);
  CHECK(net.initial_count(net.species_id("I1")) == 0);
}

TEST_CASE("every binding step has a nonzero reverse reaction") {
  // Micro-reversibility: reactions come in forward/reverse pairs except
  // the three designated irreversible arrows (I->A, H->0, B->0).
  const NetworkSpec net = build_basic_cn(shape(3, 4));
  auto reactions = net.reactions();
  int unpaired = 0;
  for (std::size_t i = 0; i < reactions.size(); ++i) {
    bool has_reverse = false;
    for (std::size_t j = 0; j < reactions.size(); ++j) {
      if (i == j) continue;
      if (reactions[i].reactants == reactions[j].products &&
          reactions[i].products == reactions[j].reactants) {
        has_reverse = true;
        break;
      }
    }
    if (!has_reverse) ++unpaired;
  }
  // 3 channels * (I->A, H->0) + B->0 = 7 one-way arrows.
  CHECK(unpaired == 7);
}

TEST_CASE("gene copies set the bio compartment's switch count") {
  CNConfig config = shape(2, 2);
  config.gene_copies = 3;
  const NetworkSpec net = build_bio_cn(config);
  CHECK(net.initial_count(net.species_id("h0_1")) == 3);
  CHECK(net.initial_count(net.species_id("h_1")) == 0);
  CHECK(compartment_trigger_species(2) == "Eact2");
  CHECK(activated_input_species(1) == "Astar1");
}

TEST_CASE("hill variant replaces each ladder with one modulated reaction") {
  CNConfig config = shape(2, 5);
  config.e_total = 5;
  const NetworkSpec net = build_hill_cn(config);

  CHECK_FALSE(net.find_species("E1_0").has_value());
  CHECK_FALSE(net.find_species("Eact1").has_value());
  CHECK_FALSE(net.find_species("EactA1").has_value());

  auto reactions = net.reactions();
  int hill_count = 0;
  for (const auto& r : reactions) {
    if (!r.hill) continue;
    ++hill_count;
    CHECK(net.species_name(r.hill->modulator) == "B");
    CHECK(r.hill->exponent == doctest::Approx(10.0));
    const double theta =
        estimate_threshold(config.chain_length, config.basic).theta;
    CHECK(r.hill->theta == doctest::Approx(theta));
    // Saturated propensity is e_total * k_AE * n_A.
    CHECK(r.rate_constant ==
          doctest::Approx(5.0 * config.bio.k_AE));
    CHECK(r.reactants.size() == 1);
    REQUIRE(r.products.size() == 1);
    const std::string product = net.species_name(r.products[0]);
    CHECK(product.rfind("Astar", 0) == 0);
  }
  CHECK(hill_count == 2);

  const NetworkSpec custom = build_hill_cn(config, 4.0, 12.5);
  for (const auto& r : custom.reactions()) {
    if (!r.hill) continue;
    CHECK(r.hill->exponent == doctest::Approx(4.0));
    CHECK(r.hill->theta == doctest::Approx(12.5));
  }
}

TEST_CASE("single-step ladder equilibrium is the two-state occupancy") {
  BasicRates rates;
  rates.k_plus = 1.0;
  rates.k_minus_last = 0.5;
  // One rung: P = y/(1+y) with y = k_plus*n_B/k_minus_last.
  CHECK(activation_equilibrium(1, rates, 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(activation_equilibrium(1, rates, 0.0) == doctest::Approx(0.0));
  CHECK(estimate_threshold(1, rates).theta == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("activation probability is monotone and hits 1/2 at theta") {
  const BasicRates rates;  // stock ladder: k+ 1, k- 5, k-last 0.5
  for (int m : {1, 2, 3, 5}) {
    const double theta = estimate_threshold(m, rates).theta;
    CHECK(activation_equilibrium(m, rates, theta) ==
          doctest::Approx(0.5).epsilon(1e-4));
    double previous = -1.0;
    for (double n_B = 0.0; n_B <= 20.0; n_B += 0.5) {
      const double p = activation_equilibrium(m, rates, n_B);
      CHECK(p >= previous);
      CHECK(p <= 1.0);
      previous = p;
    }
  }
  // Stock thresholds used throughout the experiment defaults.
  CHECK(estimate_threshold(3, BasicRates{}).theta ==
        doctest::Approx(2.9).epsilon(0.02));
  CHECK(estimate_threshold(5, BasicRates{}).theta ==
        doctest::Approx(4.03).epsilon(0.02));
}

TEST_CASE("ladder depth steepens the response up to slope m") {
  const BasicRates rates;
  double previous = 0.0;
  for (int m = 1; m <= 8; ++m) {
    const double slope = effective_hill_exponent(m, rates);
    CHECK(slope <= m + 1e-9);
    CHECK(slope > 0.0);
    if (m > 1) CHECK(slope > previous);
    previous = slope;
  }
  CHECK(naive_threshold_ratio(rates) == doctest::Approx(5.0));
}

TEST_CASE("invalid shapes are rejected") {
  CHECK_THROWS_AS(build_basic_cn(shape(0, 1)), ConfigError);
  CHECK_THROWS_AS(build_basic_cn(shape(1, 0)), ConfigError);
  CHECK_THROWS_AS(build_bio_cn(shape(-1, 2)), ConfigError);

  CNConfig bad_weights = shape(2, 1);
  bad_weights.initial_weights = {1, 2, 3};
  CHECK_THROWS_AS(build_basic_cn(bad_weights), ConfigError);

  CNConfig bad_pool = shape(1, 1);
  bad_pool.e_total = 0;
  CHECK_THROWS_AS(build_basic_cn(bad_pool), ConfigError);
}
