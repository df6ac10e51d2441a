#pragma once

#include <vector>

#include "kerncollab/kernels.hpp"

namespace kerncollab {

enum class PayloadKind { ExplorationSample, InducingPair };

/// One upload: a d-dimensional point plus one scalar, so d + 1 scalars.
struct Envelope {
  long round = 0;
  int sender = 0;
  PayloadKind kind = PayloadKind::ExplorationSample;
  Point point;
  double value = 0.0;

  long scalar_count() const { return point.size() + 1; }
};

/// Scalar-level upload accounting. Each client-to-server-to-clients
/// transfer of one scalar costs one unit; broadcast fan-out is free.
class CommLedger {
 public:
  void charge(const Envelope& env);

  long total() const { return total_; }
  long client_total(int client) const;
  long kind_total(PayloadKind kind) const;

 private:
  long total_ = 0;
  std::vector<long> per_client_;
  long per_kind_[2] = {0, 0};
};

/// Synchronous, lossless star fabric. Advanced once per round by its
/// single owner; every client receives every envelope of the round.
class StarNetwork {
 public:
  /// Validates at most one envelope per sender, charges the ledger, and
  /// returns the delivery (every client sees the full list, own included).
  const std::vector<Envelope>& broadcast_round(std::vector<Envelope> envelopes);

  const CommLedger& ledger() const { return ledger_; }

 private:
  CommLedger ledger_;
  std::vector<Envelope> last_delivery_;
};

}  // namespace kerncollab
