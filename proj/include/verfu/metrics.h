/*
 * Copyright 2026 The verfu Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Per (round, phase, party) communication and computation ledger, plus the
// per-phase summaries used by the benchmark.

#ifndef VERFU_METRICS_H_
#define VERFU_METRICS_H_

#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "verfu/transcript.h"

namespace verfu {

struct LedgerKey {
  uint32_t round = 0;
  Phase phase = Phase::kSetup;
  Party party;
  auto operator<=>(const LedgerKey&) const = default;
};

struct LedgerCell {
  uint64_t bytes_sent = 0;
  uint64_t bytes_received = 0;
  double cpu_ms = 0;
};

class MetricsLedger {
 public:
  // Charges byte_len to the sender's sent column and the receiver's received
  // column. Local events are ignored.
  void RecordMessage(const TranscriptRecord& record);
  void AddCpuTime(uint32_t round, Phase phase, const Party& party, double ms);

  const std::map<LedgerKey, LedgerCell>& cells() const { return cells_; }
  uint64_t TotalSent(Phase phase) const;
  uint64_t TotalReceived(Phase phase) const;
  // Sum of sent == sum of received over all parties, per phase.
  bool Conserved() const;

  // Columns: unlearn_rate,round,phase,role,bytes_sent,bytes_received,cpu_ms.
  // role is "server" or "device:<id>".
  void WriteCsv(std::ostream& out, double unlearn_rate) const;

 private:
  std::map<LedgerKey, LedgerCell> cells_;
};

struct SummaryRow {
  double unlearn_rate = 0;
  std::string role;  // "device" or "server"
  Phase phase = Phase::kPreparation;
  uint64_t total_bytes = 0;  // sent + received, summed over parties and rounds
  double total_ms = 0;
  // Largest single-party single-round figures.
  uint64_t max_sent = 0;
  uint64_t max_received = 0;
  double max_ms = 0;
};

// Six rows: {device, server} x {Preparation, AggregationUnlearning,
// Verification}. Phases without traffic report zeros.
std::vector<SummaryRow> Summarize(const MetricsLedger& ledger, double unlearn_rate);

void WriteSummaryCsvHeader(std::ostream& out);
void WriteSummaryCsvRow(std::ostream& out, const SummaryRow& row);

}  // namespace verfu

#endif  // VERFU_METRICS_H_
