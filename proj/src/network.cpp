#include "chemneuron/network.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace chemneuron {

SpeciesId NetworkSpec::add_species(std::string name, Count initial) {
  if (name.empty()) {
    throw ConfigError("species name must not be empty");
  }
  if (by_name_.contains(name)) {
    throw ConfigError(fmt::format("duplicate species declaration: {}", name));
  }
  if (initial < 0) {
    throw ConfigError(
        fmt::format("initial count of {} must be nonnegative", name));
  }
  const auto id = static_cast<SpeciesId>(species_.size());
  by_name_.emplace(name, id);
  species_.push_back(Species{id, std::move(name)});
  initial_counts_.push_back(initial);
  clamped_.push_back(false);
  return id;
}

SpeciesId NetworkSpec::species_id(std::string_view name) const {
  if (auto id = find_species(name)) return *id;
  throw ConfigError(fmt::format("unknown species: {}", name));
}

std::optional<SpeciesId> NetworkSpec::find_species(
    std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

void NetworkSpec::check_side(const std::vector<SpeciesId>& side,
                             const char* what) const {
  if (side.size() > 2) {
    throw ConfigError(fmt::format("a reaction may have at most two {}", what));
  }
  for (SpeciesId id : side) {
    if (id < 0 || static_cast<std::size_t>(id) >= species_.size()) {
      throw ConfigError(
          fmt::format("reaction references undeclared species id {}", id));
    }
  }
}

void NetworkSpec::add_reaction(std::vector<SpeciesId> reactants,
                               std::vector<SpeciesId> products,
                               double rate_constant) {
  check_side(reactants, "reactants");
  check_side(products, "products");
  if (!(rate_constant >= 0.0) || !std::isfinite(rate_constant)) {
    throw ConfigError(
        fmt::format("rate constant must be finite and >= 0, got {}",
                    rate_constant));
  }
  std::sort(reactants.begin(), reactants.end());
  std::sort(products.begin(), products.end());
  reactions_.push_back(
      Reaction{std::move(reactants), std::move(products), rate_constant, {}});
}

void NetworkSpec::add_reversible(std::vector<SpeciesId> left,
                                 std::vector<SpeciesId> right,
                                 double k_forward, double k_reverse) {
  add_reaction(left, right, k_forward);
  add_reaction(std::move(right), std::move(left), k_reverse);
}

void NetworkSpec::add_hill_reaction(SpeciesId reactant, SpeciesId product,
                                    double rate_constant,
                                    HillModulation hill) {
  check_side({reactant}, "reactants");
  check_side({product}, "products");
  check_side({hill.modulator}, "modulators");
  if (!(rate_constant >= 0.0) || !std::isfinite(rate_constant)) {
    throw ConfigError("rate constant must be finite and >= 0");
  }
  if (!(hill.theta > 0.0) || !(hill.exponent > 0.0)) {
    throw ConfigError("hill modulation requires theta > 0 and exponent > 0");
  }
  Reaction r;
  r.reactants = {reactant};
  r.products = {product};
  r.rate_constant = rate_constant;
  r.hill = hill;
  reactions_.push_back(std::move(r));
}

void NetworkSpec::set_clamped(SpeciesId id, bool clamped) {
  clamped_.at(static_cast<std::size_t>(id)) = clamped;
}

bool NetworkSpec::is_clamped(SpeciesId id) const {
  return clamped_.at(static_cast<std::size_t>(id));
}

void NetworkSpec::set_initial_count(SpeciesId id, Count count) {
  if (count < 0) {
    throw ConfigError(fmt::format("initial count of {} must be nonnegative",
                                  species_name(id)));
  }
  initial_counts_.at(static_cast<std::size_t>(id)) = count;
}

bool NetworkSpec::operator==(const NetworkSpec& other) const {
  return species_ == other.species_ && reactions_ == other.reactions_ &&
         initial_counts_ == other.initial_counts_ &&
         clamped_ == other.clamped_;
}

namespace {

template <typename GetCount>
double propensity_impl(const Reaction& reaction, GetCount count) {
  double a = reaction.rate_constant;
  if (reaction.hill) {
    const double n = count(reaction.hill->modulator);
    if (n <= 0.0) return 0.0;
    const double nh = std::pow(n, reaction.hill->exponent);
    const double th = std::pow(reaction.hill->theta, reaction.hill->exponent);
    a *= nh / (th + nh);
  }
  switch (reaction.reactants.size()) {
    case 0:
      return a;
    case 1:
      return a * count(reaction.reactants[0]);
    default: {
      const SpeciesId first = reaction.reactants[0];
      const SpeciesId second = reaction.reactants[1];
      const double n_first = count(first);
      if (first == second) return a * n_first * (n_first - 1.0);
      return a * n_first * count(second);
    }
  }
}

}  // namespace

double propensity(const Reaction& reaction, const SimState& state) {
  return propensity_impl(reaction, [&state](SpeciesId id) {
    return static_cast<double>(state.counts[static_cast<std::size_t>(id)]);
  });
}

double propensity(const Reaction& reaction, std::span<const double> counts) {
  // Outer clamp: n*(n-1) dips below zero for fractional n in (0,1).
  return std::max(0.0, propensity_impl(reaction, [counts](SpeciesId id) {
                    return std::max(0.0, counts[static_cast<std::size_t>(id)]);
                  }));
}

std::vector<StoichEntry> net_stoichiometry(const NetworkSpec& network,
                                           const Reaction& reaction) {
  std::vector<StoichEntry> delta;
  auto accumulate = [&delta](SpeciesId s, Count d) {
    for (auto& entry : delta) {
      if (entry.species == s) {
        entry.change += d;
        return;
      }
    }
    delta.push_back({s, d});
  };
  for (SpeciesId s : reaction.reactants) accumulate(s, -1);
  for (SpeciesId s : reaction.products) accumulate(s, +1);
  std::erase_if(delta, [&network](const StoichEntry& e) {
    return e.change == 0 || network.is_clamped(e.species);
  });
  return delta;
}

}  // namespace chemneuron
