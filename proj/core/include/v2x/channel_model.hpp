#pragma once

// Two-hop amplify-and-forward signal model. The noise terms are the variances
// themselves added to the signal, so every quantity here is deterministic.

#include <span>
#include <string>
#include <vector>

#include "v2x/types.hpp"

namespace v2x {

/// sqrt(Q_src) * h_src * y + noise_var(relay), elementwise.
std::vector<double> received_at_relay(const SourceSignal& source, const RelayNode& relay);

/// sqrt(Q_relay) * h_dst * received_at_relay(...) + noise_var(dest), elementwise.
std::vector<double> relayed_to_destination(const SourceSignal& source, const RelayNode& relay,
                                           const DestinationNode& dest);

/// Superposition of all relayed copies plus L copies of the destination noise.
/// Throws EmptySelection for an empty relay list.
std::vector<double> combined_received(const SourceSignal& source, std::span<const RelayNode> relays,
                                      const DestinationNode& dest);

/// SNR of the combined path:
///
///   (sum_g sqrt(Q_g) h_dst_g sqrt(Q_src) h_src_g)^2 |y|^2
///   -------------------------------------------------------
///   (sum_g sqrt(Q_g) h_dst_g var_g)^2 + (L var_dst)^2
///
/// A zero numerator gives 0. A zero denominator with a non-zero numerator
/// throws InfiniteSnr.
PathSnr combined_snr(const SourceSignal& source, std::span<const RelayNode> relays,
                     const DestinationNode& dest);

/// As above, but relay g transmits with powers[g] instead of relays[g].power.
PathSnr combined_snr(const SourceSignal& source, std::span<const RelayNode> relays,
                     std::span<const double> powers, const DestinationNode& dest);

/// U^2 / I^2 for one relay, with U = |sqrt(Q_r) h_dst sqrt(Q_src) h_src| |y| and
/// I = |sqrt(Q_r) h_dst var_r|. Destination noise does not enter. U = 0 gives 0;
/// I = 0 with U > 0 throws InfiniteSnr.
PathSnr single_path_snr(const SourceSignal& source, const RelayNode& relay,
                        const DestinationNode& dest);

/// Sum of single_path_snr over the list; 0 for an empty list.
PathSnr sum_path_snr(const SourceSignal& source, std::span<const RelayNode> relays,
                     const DestinationNode& dest);

enum class StepRelation { greater_equal, equal };

struct BoundStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  StepRelation relation = StepRelation::greater_equal;
  bool holds = false;
};

struct BoundReport {
  double combined = 0.0;
  double summed = 0.0;
  bool holds = false;
  std::vector<double> ratios;  ///< u_w = U_w / I_w per relay
  std::vector<BoundStep> steps;
};

/// Evaluates both sides of "combined SNR <= sum of single-path SNRs" and the
/// intermediate inequalities used to prove it:
///   expanded_square   (sum I)^2 >= sum I^2
///   sum_lower_bound   sum SNR   >= sum u^2 * sum I^2 / (sum I)^2
///   cauchy_schwarz    sum u^2 * sum I^2 >= (sum u I)^2
///   combined_form     combined  == (sum u I)^2 / (sum I)^2
/// The bound only holds without destination noise; a non-zero dest.noise_var
/// throws PreconditionViolated.
BoundReport verify_snr_bound(const SourceSignal& source, std::span<const RelayNode> relays,
                             const DestinationNode& dest);

}  // namespace v2x
