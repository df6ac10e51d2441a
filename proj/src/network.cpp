#include "kerncollab/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace kerncollab {

void CommLedger::charge(const Envelope& env) {
  if (env.sender < 0) throw std::invalid_argument("negative sender id");
  if (static_cast<size_t>(env.sender) >= per_client_.size())
    per_client_.resize(static_cast<size_t>(env.sender) + 1, 0);
  const long n = env.scalar_count();
  per_client_[static_cast<size_t>(env.sender)] += n;
  per_kind_[static_cast<int>(env.kind)] += n;
  total_ += n;
}

long CommLedger::client_total(int client) const {
  if (client < 0 || static_cast<size_t>(client) >= per_client_.size()) return 0;
  return per_client_[static_cast<size_t>(client)];
}

long CommLedger::kind_total(PayloadKind kind) const {
  return per_kind_[static_cast<int>(kind)];
}

const std::vector<Envelope>& StarNetwork::broadcast_round(
    std::vector<Envelope> envelopes) {
  std::vector<int> senders;
  senders.reserve(envelopes.size());
  for (const Envelope& e : envelopes) senders.push_back(e.sender);
  std::sort(senders.begin(), senders.end());
  if (std::adjacent_find(senders.begin(), senders.end()) != senders.end())
    throw std::invalid_argument("duplicate sender in broadcast round");

  for (const Envelope& e : envelopes) ledger_.charge(e);
  last_delivery_ = std::move(envelopes);
  return last_delivery_;
}

}  // namespace kerncollab
