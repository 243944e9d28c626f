#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chemneuron/errors.hpp"

namespace chemneuron {

using SpeciesId = std::int32_t;
using Count = std::int64_t;

struct Species {
  SpeciesId id = 0;
  std::string name;
  bool operator==(const Species&) const = default;
};

/// State-dependent rate law used by the Hill-approximated model variant.
/// The propensity of the carrying reaction becomes
///   k * n_reactant * n_mod^h / (theta^h + n_mod^h)
/// where n_mod is the count of `modulator`. Everything else in a network
/// stays plain mass action.
struct HillModulation {
  SpeciesId modulator = 0;
  double theta = 1.0;
  double exponent = 1.0;
  bool operator==(const HillModulation&) const = default;
};

/// A unidirectional reaction with at most two reactants and two products.
/// Reversible pairs are stored as two reactions.
struct Reaction {
  std::vector<SpeciesId> reactants;  // 0..2 entries, kept sorted
  std::vector<SpeciesId> products;   // 0..2 entries, kept sorted
  double rate_constant = 0.0;
  std::optional<HillModulation> hill;  // mass action when absent
  bool operator==(const Reaction&) const = default;
};

/// Molecule counts plus the current simulation time.
struct SimState {
  std::vector<Count> counts;
  double time = 0.0;
};

/// Immutable-after-construction description of a reaction network:
/// species, unidirectional mass-action reactions, and initial counts.
/// Safe to share read-only between concurrent simulation runs.
class NetworkSpec {
 public:
  /// Declares a species. Throws ConfigError on duplicate names or
  /// negative initial counts.
  SpeciesId add_species(std::string name, Count initial = 0);

  /// Id lookup by name; throws ConfigError when the name is unknown.
  SpeciesId species_id(std::string_view name) const;
  std::optional<SpeciesId> find_species(std::string_view name) const;

  /// Appends one unidirectional reaction. Sides are canonicalized
  /// (sorted by species id). Throws ConfigError on unknown species,
  /// more than two reactants/products, or a negative rate.
  void add_reaction(std::vector<SpeciesId> reactants,
                    std::vector<SpeciesId> products, double rate_constant);

  /// Appends the forward and reverse reactions of a reversible pair.
  void add_reversible(std::vector<SpeciesId> left,
                      std::vector<SpeciesId> right, double k_forward,
                      double k_reverse);

  /// Appends a reaction governed by HillModulation instead of mass action.
  void add_hill_reaction(SpeciesId reactant, SpeciesId product,
                         double rate_constant, HillModulation hill);

  /// Marks a species as clamped: simulations never change its count.
  /// Used by oracle tests that buffer a ligand at a fixed level;
  /// production networks leave this unset.
  void set_clamped(SpeciesId id, bool clamped = true);
  bool is_clamped(SpeciesId id) const;

  void set_initial_count(SpeciesId id, Count count);
  Count initial_count(SpeciesId id) const { return initial_counts_.at(static_cast<std::size_t>(id)); }

  std::span<const Species> species() const { return species_; }
  std::span<const Reaction> reactions() const { return reactions_; }
  std::span<const Count> initial_counts() const { return initial_counts_; }

  std::size_t species_count() const { return species_.size(); }
  std::size_t reaction_count() const { return reactions_.size(); }

  const std::string& species_name(SpeciesId id) const {
    return species_.at(static_cast<std::size_t>(id)).name;
  }

  SimState initial_state() const { return SimState{initial_counts_, 0.0}; }

  bool operator==(const NetworkSpec& other) const;

 private:
  void check_side(const std::vector<SpeciesId>& side, const char* what) const;

  std::vector<Species> species_;
  std::vector<Reaction> reactions_;
  std::vector<Count> initial_counts_;
  std::vector<bool> clamped_;
  std::unordered_map<std::string, SpeciesId> by_name_;
};

/// Instantaneous stochastic rate of `reaction` in `state` under
/// mass-action combinatorics (or the Hill law when attached).
/// Total function: zero reactant pools give zero.
double propensity(const Reaction& reaction, const SimState& state);

/// Mean-field variant on real-valued counts; negatives clamp to zero so
/// the rate law stays defined during integrator trial steps.
double propensity(const Reaction& reaction, std::span<const double> counts);

struct StoichEntry {
  SpeciesId species = 0;
  Count change = 0;
};

/// Net per-species count change when `reaction` fires. Zero-change
/// (catalytic) and clamped species are dropped.
std::vector<StoichEntry> net_stoichiometry(const NetworkSpec& network,
                                           const Reaction& reaction);

}  // namespace chemneuron
