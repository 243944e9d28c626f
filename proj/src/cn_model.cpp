#include "chemneuron/cn_model.hpp"

#include <fmt/format.h>

#include <cmath>

#include "chemneuron/errors.hpp"

namespace chemneuron {

namespace {

void check_rate(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ConfigError(
        fmt::format("rate {} must be finite and >= 0, got {}", name, value));
  }
}

void check_basic_rates(const BasicRates& r) {
  check_rate(r.k_IA, "k_IA");
  check_rate(r.k_AB, "k_AB");
  check_rate(r.k_BA, "k_BA");
  check_rate(r.k_plus, "k_plus");
  check_rate(r.k_minus, "k_minus");
  check_rate(r.k_minus_last, "k_minus_last");
  check_rate(r.k_AE, "k_AE");
  check_rate(r.k_EA, "k_EA");
  check_rate(r.k_EH, "k_EH");
  check_rate(r.k_HE, "k_HE");
  check_rate(r.k_AH, "k_AH");
  check_rate(r.k_HA, "k_HA");
  check_rate(r.k_HB, "k_HB");
  check_rate(r.k_BH, "k_BH");
  check_rate(r.k_H_decay, "k_H_decay");
  check_rate(r.k_B_decay, "k_B_decay");
}

void check_bio_rates(const BioRates& r) {
  check_rate(r.k_IA, "k_IA");
  check_rate(r.k_AI, "k_AI");
  check_rate(r.k_plus, "k_plus");
  check_rate(r.k_minus, "k_minus");
  check_rate(r.k_minus_last, "k_minus_last");
  check_rate(r.k_AE, "k_AE");
  check_rate(r.k_EA, "k_EA");
  check_rate(r.k_AstarE, "k_AstarE");
  check_rate(r.k_EAstar, "k_EAstar");
  check_rate(r.k_AstarA, "k_AstarA");
  check_rate(r.k_AAstar, "k_AAstar");
  check_rate(r.k_Astarh, "k_Astarh");
  check_rate(r.k_hAstar, "k_hAstar");
  check_rate(r.k_leak, "k_leak");
  check_rate(r.k_h, "k_h");
  check_rate(r.k_AH, "k_AH");
  check_rate(r.k_HA, "k_HA");
  check_rate(r.k_HB, "k_HB");
  check_rate(r.k_BH, "k_BH");
  check_rate(r.k_H_decay, "k_H_decay");
  check_rate(r.k_B_decay, "k_B_decay");
}

void check_config(const CNConfig& config) {
  if (config.channels < 1) {
    throw ConfigError(fmt::format("channels must be >= 1, got {}",
                                  config.channels));
  }
  if (config.chain_length < 1) {
    throw ConfigError(fmt::format("chain_length must be >= 1, got {}",
                                  config.chain_length));
  }
  if (config.bolus_size < 1) {
    throw ConfigError(fmt::format("bolus_size must be >= 1, got {}",
                                  config.bolus_size));
  }
  if (config.e_total < 1) {
    throw ConfigError(
        fmt::format("e_total must be >= 1, got {}", config.e_total));
  }
  if (config.gene_copies < 0) {
    throw ConfigError(fmt::format("gene_copies must be >= 0, got {}",
                                  config.gene_copies));
  }
  if (!config.initial_weights.empty() &&
      config.initial_weights.size() !=
          static_cast<std::size_t>(config.channels)) {
    throw ConfigError(fmt::format(
        "initial_weights needs one entry per channel ({}), got {}",
        config.channels, config.initial_weights.size()));
  }
  for (Count w : config.initial_weights) {
    if (w < 0) {
      throw ConfigError("initial_weights entries must be nonnegative");
    }
  }
}

Count initial_weight(const CNConfig& config, int channel) {
  if (config.initial_weights.empty()) return 0;
  return config.initial_weights[static_cast<std::size_t>(channel - 1)];
}

/// Shared ladder B + E{i} <-> E{i+1}, topped by Eact. `e` holds the ids of
/// E0..E{m-1}; the first carries the initial pool.
void add_ladder(NetworkSpec& net, SpeciesId b, const std::vector<SpeciesId>& e,
                SpeciesId eact, double k_plus, double k_minus,
                double k_minus_last) {
  const int m = static_cast<int>(e.size());
  for (int i = 0; i + 1 < m; ++i) {
    net.add_reversible({b, e[static_cast<std::size_t>(i)]},
                       {e[static_cast<std::size_t>(i + 1)]}, k_plus, k_minus);
  }
  net.add_reversible({b, e[static_cast<std::size_t>(m - 1)]}, {eact}, k_plus,
                     k_minus_last);
}

}  // namespace

NetworkSpec build_basic_cn(const CNConfig& config) {
  check_config(config);
  check_basic_rates(config.basic);
  const auto& r = config.basic;
  const int n_channels = config.channels;
  const int m = config.chain_length;

  NetworkSpec net;
  SpeciesId b = net.add_species("B");
  std::vector<SpeciesId> e;
  e.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    e.push_back(net.add_species(fmt::format("E{}", i), i == 0 ? config.e_total
                                                              : 0));
  }
  SpeciesId eact = net.add_species("Eact");

  struct Channel {
    SpeciesId input, a, a_eact, ah, h;
  };
  std::vector<Channel> ch;
  for (int n = 1; n <= n_channels; ++n) {
    ch.push_back({net.add_species(input_species(n)),
                  net.add_species(fmt::format("A{}", n)),
                  net.add_species(fmt::format("AEact{}", n)),
                  net.add_species(fmt::format("AH{}", n)),
                  net.add_species(weight_species(n), initial_weight(config, n))});
  }

  for (const auto& c : ch) net.add_reaction({c.input}, {c.a}, r.k_IA);
  for (const auto& c : ch) net.add_reversible({c.a}, {b}, r.k_AB, r.k_BA);
  add_ladder(net, b, e, eact, r.k_plus, r.k_minus, r.k_minus_last);
  for (const auto& c : ch) {
    net.add_reversible({c.a, eact}, {c.a_eact}, r.k_AE, r.k_EA);
    net.add_reversible({c.a_eact}, {c.h, eact}, r.k_EH, r.k_HE);
    net.add_reversible({c.a, c.h}, {c.ah}, r.k_AH, r.k_HA);
    net.add_reversible({c.ah}, {b, c.h}, r.k_HB, r.k_BH);
  }
  for (const auto& c : ch) net.add_reaction({c.h}, {}, r.k_H_decay);
  net.add_reaction({b}, {}, r.k_B_decay);
  return net;
}

namespace {

struct BioCompartment {
  SpeciesId input, a, astar, eact_a, h0, h, transporter, ah;
  std::vector<SpeciesId> e;
  SpeciesId eact;
};

/// Declares every species of one compartment; ladder omitted when
/// with_ladder is false (Hill shortcut).
BioCompartment add_bio_compartment(NetworkSpec& net, const CNConfig& config,
                                   int n, bool with_ladder) {
  BioCompartment c{};
  c.input = net.add_species(input_species(n));
  c.a = net.add_species(fmt::format("A{}", n));
  c.astar = net.add_species(activated_input_species(n));
  if (with_ladder) c.eact_a = net.add_species(fmt::format("EactA{}", n));
  c.h0 = net.add_species(fmt::format("h0_{}", n), config.gene_copies);
  c.h = net.add_species(fmt::format("h_{}", n));
  c.transporter =
      net.add_species(weight_species(n), initial_weight(config, n));
  c.ah = net.add_species(fmt::format("AH{}", n));
  if (with_ladder) {
    for (int i = 0; i < config.chain_length; ++i) {
      c.e.push_back(net.add_species(fmt::format("E{}_{}", n, i),
                                    i == 0 ? config.e_total : 0));
    }
    c.eact = net.add_species(compartment_trigger_species(n));
  }
  return c;
}

/// Reactions common to the bio variants; the activation step (ladder plus
/// catalysis, or the Hill shortcut) is appended by the caller.
void add_bio_common(NetworkSpec& net, SpeciesId b, const BioCompartment& c,
                    const BioRates& r) {
  net.add_reversible({c.input}, {c.a}, r.k_IA, r.k_AI);
  net.add_reversible({c.astar}, {c.a}, r.k_AstarA, r.k_AAstar);
  net.add_reversible({c.h0, c.astar}, {c.h}, r.k_Astarh, r.k_hAstar);
  net.add_reaction({c.h0}, {c.transporter, c.h0}, r.k_leak);
  net.add_reaction({c.h}, {c.transporter, c.h}, r.k_h);
  net.add_reversible({c.a, c.transporter}, {c.ah}, r.k_AH, r.k_HA);
  net.add_reversible({c.ah}, {b, c.transporter}, r.k_HB, r.k_BH);
  net.add_reaction({c.transporter}, {}, r.k_H_decay);
}

}  // namespace

NetworkSpec build_bio_cn(const CNConfig& config) {
  check_config(config);
  check_bio_rates(config.bio);
  const auto& r = config.bio;

  NetworkSpec net;
  SpeciesId b = net.add_species("B");
  std::vector<BioCompartment> compartments;
  for (int n = 1; n <= config.channels; ++n) {
    compartments.push_back(add_bio_compartment(net, config, n, true));
  }
  for (const auto& c : compartments) {
    add_ladder(net, b, c.e, c.eact, r.k_plus, r.k_minus, r.k_minus_last);
    net.add_reversible({c.eact, c.a}, {c.eact_a}, r.k_AE, r.k_EA);
    net.add_reversible({c.eact_a}, {c.eact, c.astar}, r.k_AstarE, r.k_EAstar);
    add_bio_common(net, b, c, r);
  }
  net.add_reaction({b}, {}, r.k_B_decay);
  return net;
}

NetworkSpec build_hill_cn(const CNConfig& config, double hill_h,
                          double theta) {
  check_config(config);
  check_bio_rates(config.bio);
  if (!(hill_h > 0.0) || !std::isfinite(hill_h)) {
    throw ConfigError(
        fmt::format("hill exponent must be > 0, got {}", hill_h));
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw ConfigError(
        fmt::format("hill threshold must be > 0, got {}", theta));
  }
  const auto& r = config.bio;

  NetworkSpec net;
  SpeciesId b = net.add_species("B");
  for (int n = 1; n <= config.channels; ++n) {
    BioCompartment c = add_bio_compartment(net, config, n, false);
    // Lumps the entire e_total ladder pool into one modulated step; the
    // pool size scales the rate because every ladder molecule catalyzes
    // independently.
    const double k_cat =
        static_cast<double>(config.e_total) * r.k_AE;
    net.add_hill_reaction(c.a, c.astar, k_cat,
                          HillModulation{b, theta, hill_h});
    add_bio_common(net, b, c, r);
  }
  net.add_reaction({b}, {}, r.k_B_decay);
  return net;
}

NetworkSpec build_hill_cn(const CNConfig& config) {
  BasicRates ladder;
  ladder.k_plus = config.bio.k_plus;
  ladder.k_minus = config.bio.k_minus;
  ladder.k_minus_last = config.bio.k_minus_last;
  const double theta =
      estimate_threshold(config.chain_length, ladder).theta;
  return build_hill_cn(config, config.bio.hill_exponent, theta);
}

double activation_equilibrium(int m, const BasicRates& rates, double n_B) {
  if (m < 1) {
    throw ConfigError(fmt::format("chain length must be >= 1, got {}", m));
  }
  if (n_B < 0.0) {
    throw ConfigError(fmt::format("n_B must be >= 0, got {}", n_B));
  }
  if (n_B == 0.0) return 0.0;
  const double x = rates.k_plus * n_B / rates.k_minus;
  const double y = rates.k_plus * n_B / rates.k_minus_last;
  // Weights relative to the empty state; detailed balance along the chain.
  double weight_sum = 1.0;
  double x_pow = 1.0;
  for (int i = 1; i < m; ++i) {
    x_pow *= x;
    weight_sum += x_pow;
  }
  const double top = x_pow * y;
  return top / (weight_sum + top);
}

ThresholdEstimate estimate_threshold(int m, const BasicRates& rates,
                                     double n_B_cap) {
  double hi = 1.0;
  while (activation_equilibrium(m, rates, hi) < 0.5) {
    hi *= 2.0;
    if (hi > n_B_cap) {
      throw ConfigError(fmt::format(
          "activation never reaches 1/2 for B counts up to {}", n_B_cap));
    }
  }
  double lo = 0.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (activation_equilibrium(m, rates, mid) < 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return ThresholdEstimate{0.5 * (lo + hi)};
}

double effective_hill_exponent(int m, const BasicRates& rates) {
  const double theta = estimate_threshold(m, rates).theta;
  const double eps = 1e-4;
  auto log_odds = [&](double n) {
    const double p = activation_equilibrium(m, rates, n);
    return std::log(p / (1.0 - p));
  };
  return (log_odds(theta * (1.0 + eps)) - log_odds(theta * (1.0 - eps))) /
         (std::log1p(eps) - std::log1p(-eps));
}

std::string input_species(int channel) { return fmt::format("I{}", channel); }

std::string weight_species(int channel) { return fmt::format("H{}", channel); }

std::string trigger_species() { return "Eact"; }

std::string compartment_trigger_species(int channel) {
  return fmt::format("Eact{}", channel);
}

std::string activated_input_species(int channel) {
  return fmt::format("Astar{}", channel);
}

}  // namespace chemneuron
