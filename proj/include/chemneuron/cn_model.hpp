#pragma once

#include <string>
#include <vector>

#include "chemneuron/network.hpp"

namespace chemneuron {

/// Rate constants of the basic network. Defaults are the stock operating
/// point; experiment runners override individual entries where a task
/// needs a different regime.
struct BasicRates {
  double k_IA = 10.0;  // precursor decay I_n -> A_n

  double k_AB = 0.1;  // input conversion A_n <-> B
  double k_BA = 1e-6;

  double k_plus = 1.0;  // ladder binding B + E_i -> E_{i+1}
  double k_minus = 5.0;
  double k_minus_last = 0.5;  // unbinding from the fully occupied form

  double k_AE = 0.05;  // A_n + Eact <-> AEact_n
  double k_EA = 1e-6;
  double k_EH = 100.0;  // AEact_n <-> H_n + Eact
  double k_HE = 1e-6;

  double k_AH = 0.001;  // A_n + H_n <-> AH_n
  double k_HA = 1e-6;
  double k_HB = 100.0;  // AH_n <-> B + H_n
  double k_BH = 1e-6;

  double k_H_decay = 0.0003;  // H_n -> 0
  double k_B_decay = 0.1;     // B -> 0
};

/// Rate constants of the compartmentalized network. The ladder entries
/// reuse the basic defaults; the variant is usually summarized by the
/// Hill shortcut instead (exponent below).
struct BioRates {
  double k_IA = 10.0;  // I_n <-> A_n, reverse included here
  double k_AI = 1e-6;

  double k_plus = 1.0;
  double k_minus = 5.0;
  double k_minus_last = 0.5;

  double k_AE = 0.2;  // Eact_n + A_n <-> EactA_n
  double k_EA = 1e-6;
  double k_AstarE = 0.2;  // EactA_n <-> Eact_n + Astar_n
  double k_EAstar = 1e-6;

  double k_AstarA = 0.05;  // spontaneous deactivation Astar_n -> A_n
  double k_AAstar = 1e-6;

  double k_Astarh = 1.0;  // gene activation h0_n + Astar_n <-> h_n
  double k_hAstar = 0.1;

  double k_leak = 1e-4;  // h0_n -> H_n + h0_n
  double k_h = 1.0;      // h_n -> H_n + h_n

  double k_AH = 0.03;  // transport A_n + H_n <-> AH_n <-> B + H_n
  double k_HA = 1e-6;
  double k_HB = 100.0;
  double k_BH = 1e-6;

  double k_H_decay = 0.0003;
  double k_B_decay = 0.1;

  /// Steepness of the activation shortcut used by build_hill_cn.
  double hill_exponent = 10.0;
};

/// Shape and initial conditions of one neuron. `channels` is the number of
/// input channels N; `chain_length` is the ladder depth m (the
/// "nonlinearity"); `bolus_size` is the precursor copies injected per
/// stimulus event.
struct CNConfig {
  int channels = 1;
  int chain_length = 1;
  Count bolus_size = 1;
  Count e_total = 40;   // unbound ladder molecules at t=0 (per pool)
  Count gene_copies = 1;  // h0_n copies per compartment (bio variants)
  std::vector<Count> initial_weights;  // H_n(0); empty means all zero
  BasicRates basic;
  BioRates bio;
};

struct ThresholdEstimate {
  double theta = 0.0;  // B count at which activation probability is 1/2
};

/// Shared-ladder network: per channel n the reactions
///   I{n} -> A{n}                (bolus decay, irreversible)
///   A{n} <-> B
///   A{n} + Eact <-> AEact{n} <-> H{n} + Eact
///   A{n} + H{n} <-> AH{n} <-> B + H{n}
///   H{n} -> 0
/// plus one global ladder B + E{i} <-> E{i+1} ending in Eact, and B -> 0.
/// Species 5N + m + 2; unidirectional reactions 12N + 2m + 1.
NetworkSpec build_basic_cn(const CNConfig& config);

/// Compartmentalized network: every species except B lives per channel,
/// each compartment has its own ladder of e_total molecules, activation
/// drives A -> Astar catalytically, Astar switches a gene that expresses
/// the transporter H, and H exports A as B. 9N + Nm + 1 species,
/// N(17 + 2m) + 1 unidirectional reactions.
NetworkSpec build_bio_cn(const CNConfig& config);

/// The compartmentalized network with each ladder replaced by one
/// state-modulated reaction A{n} -> Astar{n} whose propensity is
///   e_total * k_cat * n_A * n_B^h / (theta^h + n_B^h).
/// k_cat is the ladder-catalysis on-rate (bio.k_AE).
NetworkSpec build_hill_cn(const CNConfig& config, double hill_h,
                          double theta);

/// Defaults: exponent from bio.hill_exponent, theta from
/// estimate_threshold of the ladder it replaces.
NetworkSpec build_hill_cn(const CNConfig& config);

/// Equilibrium probability that a single ladder molecule sits in the fully
/// occupied form when B is buffered at n_B copies. Detailed balance over
/// the (m+1)-state ladder:
///   P = x^(m-1) y / (sum_{i<m} x^i + x^(m-1) y),
/// x = k_plus n_B / k_minus, y = k_plus n_B / k_minus_last.
double activation_equilibrium(int m, const BasicRates& rates, double n_B);

/// Inverts activation_equilibrium for P = 1/2 by bisection (tolerance
/// 1e-6). Throws ConfigError when P stays below 1/2 up to n_B_cap.
ThresholdEstimate estimate_threshold(int m, const BasicRates& rates,
                                     double n_B_cap = 1e7);

/// Log-log slope of the equilibrium odds at the half-activation point;
/// bounded above by m.
double effective_hill_exponent(int m, const BasicRates& rates);

/// First-order guess theta ~ k_minus / k_plus, a scale hint only;
/// estimate_threshold is the operational definition used everywhere.
inline double naive_threshold_ratio(const BasicRates& rates) {
  return rates.k_minus / rates.k_plus;
}

/// Species-name helpers shared by stimulus binding and the experiment
/// runners. Channels are 1-based in names: I1, H1, ...
std::string input_species(int channel);
std::string weight_species(int channel);
/// Learning-signal species: the shared "Eact" for the basic network.
std::string trigger_species();
/// Per-compartment learning signal of the bio variant ("Eact{n}"); the
/// Hill variant signals through "Astar{n}" instead.
std::string compartment_trigger_species(int channel);
std::string activated_input_species(int channel);

}  // namespace chemneuron
