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

#include "verfu/metrics.h"

#include <algorithm>

namespace verfu {

void MetricsLedger::RecordMessage(const TranscriptRecord& record) {
  if (record.is_local()) return;
  const uint64_t n = record.payload.size();
  cells_[LedgerKey{record.round, record.phase, record.sender}].bytes_sent += n;
  cells_[LedgerKey{record.round, record.phase, record.receiver}].bytes_received += n;
}

void MetricsLedger::AddCpuTime(uint32_t round, Phase phase, const Party& party, double ms) {
  cells_[LedgerKey{round, phase, party}].cpu_ms += ms;
}

uint64_t MetricsLedger::TotalSent(Phase phase) const {
  uint64_t total = 0;
  for (const auto& [key, cell] : cells_) {
    if (key.phase == phase) total += cell.bytes_sent;
  }
  return total;
}

uint64_t MetricsLedger::TotalReceived(Phase phase) const {
  uint64_t total = 0;
  for (const auto& [key, cell] : cells_) {
    if (key.phase == phase) total += cell.bytes_received;
  }
  return total;
}

bool MetricsLedger::Conserved() const {
  for (Phase p : {Phase::kSetup, Phase::kPreparation, Phase::kAggregationUnlearning, Phase::kVerification}) {
    if (TotalSent(p) != TotalReceived(p)) return false;
  }
  return true;
}

void MetricsLedger::WriteCsv(std::ostream& out, double unlearn_rate) const {
  out << "unlearn_rate,round,phase,role,bytes_sent,bytes_received,cpu_ms\n";
  for (const auto& [key, cell] : cells_) {
    out << unlearn_rate << ',' << key.round << ',' << PhaseName(key.phase) << ',' << key.party.ToString() << ','
        << cell.bytes_sent << ',' << cell.bytes_received << ',' << cell.cpu_ms << '\n';
  }
}

std::vector<SummaryRow> Summarize(const MetricsLedger& ledger, double unlearn_rate) {
  std::vector<SummaryRow> rows;
  for (const char* role : {"device", "server"}) {
    for (Phase p : {Phase::kPreparation, Phase::kAggregationUnlearning, Phase::kVerification}) {
      SummaryRow row;
      row.unlearn_rate = unlearn_rate;
      row.role = role;
      row.phase = p;
      const bool want_device = role[0] == 'd';
      for (const auto& [key, cell] : ledger.cells()) {
        if (key.phase != p || key.party.is_device() != want_device) continue;
        if (key.party.kind == Party::Kind::kDealer) continue;
        row.total_bytes += cell.bytes_sent + cell.bytes_received;
        row.total_ms += cell.cpu_ms;
        row.max_sent = std::max(row.max_sent, cell.bytes_sent);
        row.max_received = std::max(row.max_received, cell.bytes_received);
        row.max_ms = std::max(row.max_ms, cell.cpu_ms);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void WriteSummaryCsvHeader(std::ostream& out) {
  out << "unlearn_rate,role,phase,total_bytes,total_ms,max_sent,max_received,max_ms";
}

void WriteSummaryCsvRow(std::ostream& out, const SummaryRow& row) {
  out << row.unlearn_rate << ',' << row.role << ',' << PhaseName(row.phase) << ',' << row.total_bytes << ','
      << row.total_ms << ',' << row.max_sent << ',' << row.max_received << ',' << row.max_ms;
}

}  // namespace verfu
