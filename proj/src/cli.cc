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

#include "verfu/cli.h"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "verfu/adversary.h"
#include "verfu/audit.h"
#include "verfu/campaign.h"
#include "verfu/keys.h"
#include "verfu/metrics.h"
#include "verfu/status.h"
#include "verfu/transcript.h"

namespace verfu {
namespace {

namespace fs = std::filesystem;

template <class Fn>
int Guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const VerfuError& e) {
    err << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

std::ofstream OpenOutput(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw VerfuError(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void CheckKeysMatch(const RunConfig& config, const KeyMaterial& keys) {
  const KeySpec want = config.Keys();
  if (keys.spec.dim != want.dim || keys.spec.kappa_paillier != want.kappa_paillier ||
      keys.spec.kappa_group != want.kappa_group) {
    throw VerfuError(ErrorCode::kInvalidConfig,
                     "config/key mismatch: keys are for d=" + std::to_string(keys.spec.dim) + " kappa_paillier=" +
                         std::to_string(keys.spec.kappa_paillier) + " kappa_group=" +
                         std::to_string(keys.spec.kappa_group) + ", config needs d=" + std::to_string(want.dim) +
                         " kappa_paillier=" + std::to_string(want.kappa_paillier) +
                         " kappa_group=" + std::to_string(want.kappa_group));
  }
}

void WriteUtility(std::ostream& out, const CampaignResult& result) {
  out << "round,accuracy,loss\n";
  for (size_t r = 0; r < result.utility.size(); ++r) {
    out << r << ',' << result.utility[r].accuracy << ',' << result.utility[r].loss << '\n';
  }
}

void WriteSummary(std::ostream& out, const MetricsLedger& ledger, double rate) {
  WriteSummaryCsvHeader(out);
  out << '\n';
  for (const SummaryRow& row : Summarize(ledger, rate)) {
    WriteSummaryCsvRow(out, row);
    out << '\n';
  }
}

}  // namespace

int CmdKeygen(const RunConfig& config, const fs::path& out_dir, bool emit_trapdoor, std::ostream& out,
              std::ostream& err) {
  return Guarded(err, [&] {
    config.Validate();
    if (!fs::is_directory(out_dir)) throw VerfuError(ErrorCode::kIo, "output directory does not exist: " + out_dir.string());
    KeyMaterial keys = GenerateKeyMaterial(config.Keys(), config.campaign.seed);
    WriteKeyMaterial(keys, out_dir, emit_trapdoor);
    out << "wrote keys for d=" << keys.spec.dim << " kappa_paillier=" << keys.spec.kappa_paillier
        << " kappa_group=" << keys.spec.kappa_group << " to " << out_dir.string()
        << (emit_trapdoor ? " (with trapdoor)" : "") << "\n";
    return kExitOk;
  });
}

int CmdRun(const RunConfig& config, const fs::path& keys_dir, const fs::path& out_dir, bool strict,
           std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    config.Validate();
    KeyMaterial keys = ReadKeyMaterial(keys_dir);
    CheckKeysMatch(config, keys);
    CampaignOptions options;
    options.behavior = ParseBehavior(config.behavior);
    options.strict = strict;
    if (RequiresTrapdoor(options.behavior)) {
      if (!keys.trapdoor) {
        throw VerfuError(ErrorCode::kTrapdoorRequired,
                         "behavior '" + config.behavior + "' needs keys generated with --emit-trapdoor");
      }
      options.adversary_trapdoor = &*keys.trapdoor;
    }
    std::unique_ptr<Workload> workload = MakeWorkload(config);
    fs::create_directories(out_dir);

    CampaignResult result = RunCampaign(config.campaign, keys, *workload, options);

    std::ofstream transcript = OpenOutput(out_dir / kTranscriptFile);
    WriteTranscript(transcript, result.transcript);
    std::ofstream metrics = OpenOutput(out_dir / kMetricsFile);
    result.ledger.WriteCsv(metrics, config.campaign.unlearn_rate);
    std::ofstream summary = OpenOutput(out_dir / kSummaryFile);
    WriteSummary(summary, result.ledger, config.campaign.unlearn_rate);
    std::ofstream utility = OpenOutput(out_dir / kUtilityFile);
    WriteUtility(utility, result);

    out << "behavior " << BehaviorName(options.behavior) << ", " << result.rounds.size() << " rounds, "
        << result.TotalVerdicts() << " verdicts, " << result.FailedVerdicts() << " failed\n";
    for (const RoundResult& r : result.rounds) {
      for (const VerifierVerdict& v : r.verdicts) {
        if (!v.passed()) out << "  round " << r.round << " device:" << v.verifier << " FAILED: " << v.reason << "\n";
      }
    }
    if (!result.utility.empty()) {
      out << "final accuracy " << result.utility.back().accuracy << ", loss " << result.utility.back().loss << "\n";
    }
    if (result.aborted) out << "strict mode: stopped after round " << result.rounds.back().round << "\n";
    return result.AllVerified() ? kExitOk : kExitVerificationFailed;
  });
}

int CmdAudit(const fs::path& transcript, const fs::path& keys_dir, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    KeyMaterial keys = ReadKeyMaterial(keys_dir);
    std::ifstream in(transcript, std::ios::binary);
    if (!in) throw VerfuError(ErrorCode::kIo, "cannot read " + transcript.string());
    std::vector<TranscriptRecord> records = ReadTranscript(in);
    AuditReport report = AuditTranscript(records, keys);
    for (const AuditVerdict& v : report.verdicts) {
      out << "round " << v.round << " device:" << v.verifier << " audit=" << (v.audit.passed() ? "pass" : "fail")
          << " live=" << (v.live ? (v.live->passed() ? "pass" : "fail") : "missing")
          << (v.agrees() ? "" : " MISMATCH") << (v.reason.empty() ? "" : " (" + v.reason + ")") << "\n";
    }
    for (const AuditFinding& f : report.findings) out << "round " << f.round << " finding: " << f.what << "\n";
    const bool agree = report.AgreesWithLive();
    out << "audit: " << report.verdicts.size() << " verdicts, " << report.findings.size() << " findings, "
        << (agree ? "agrees" : "disagrees") << " with live verdicts\n";
    return report.AllPassed() && agree ? kExitOk : kExitVerificationFailed;
  });
}

int CmdBench(const RunConfig& base, const BenchSweep& sweep, const fs::path& out_csv, std::ostream& out,
             std::ostream& err) {
  return Guarded(err, [&] {
    std::ofstream csv = OpenOutput(out_csv);
    csv << "kappa,dim,";
    WriteSummaryCsvHeader(csv);
    csv << '\n';
    size_t rows = 0;
    for (unsigned kappa : sweep.kappas) {
      for (size_t dim : sweep.dims) {
        RunConfig cell = base;
        cell.workload = "frozen";
        cell.dim = dim;
        cell.kappa_paillier = kappa;
        cell.kappa_group = kappa;
        cell.Validate();
        KeyMaterial keys = GenerateKeyMaterial(cell.Keys(), cell.campaign.seed);
        for (double rate : sweep.unlearn_rates) {
          cell.campaign.unlearn_rate = rate;
          cell.Validate();
          std::unique_ptr<Workload> workload = MakeWorkload(cell);
          CampaignOptions options;
          options.record_transcript = false;
          options.evaluate = false;
          CampaignResult result = RunCampaign(cell.campaign, keys, *workload, options);
          for (const SummaryRow& row : Summarize(result.ledger, rate)) {
            csv << kappa << ',' << dim << ',';
            WriteSummaryCsvRow(csv, row);
            csv << '\n';
            ++rows;
          }
          out << "cell kappa=" << kappa << " d=" << dim << " rate=" << rate << " done\n";
        }
      }
    }
    out << "wrote " << rows << " rows to " << out_csv.string() << "\n";
    return kExitOk;
  });
}

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verifiable federated unlearning protocol kit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_path, keys_path, transcript_path, behavior;
  bool emit_trapdoor = false, strict = false;
  std::vector<double> rates;
  std::vector<size_t> dims;
  std::vector<unsigned> kappas;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Campaign config (JSON)");
    cmd->add_option("--seed", seed, "Seed; overrides VERFU_SEED and the config");
  };
  CLI::App* keygen = app.add_subcommand("keygen", "Generate key material");
  add_common(keygen);
  keygen->add_option("--out", out_path, "Existing output directory")->required();
  keygen->add_flag("--emit-trapdoor", emit_trapdoor, "Also write the commitment trapdoor");

  CLI::App* run = app.add_subcommand("run", "Run a campaign");
  add_common(run);
  run->add_option("--keys", keys_path, "Key directory")->required();
  run->add_option("--out", out_path, "Output directory")->required();
  run->add_option("--behavior", behavior, "Server behavior NAME[:args]");
  run->add_flag("--strict", strict, "Stop at the first failed verification");

  CLI::App* audit = app.add_subcommand("audit", "Re-verify a transcript offline");
  audit->add_option("--transcript", transcript_path, "Transcript (JSON lines)")->required();
  audit->add_option("--keys", keys_path, "Key directory")->required();

  CLI::App* bench = app.add_subcommand("bench", "Sweep rate x d x key size");
  add_common(bench);
  bench->add_option("--out", out_path, "Output CSV")->required();
  bench->add_option("--rates", rates, "Unlearning rates");
  bench->add_option("--dims", dims, "Model dimensions");
  bench->add_option("--kappas", kappas, "Key sizes in bits (n and p)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  if (audit->parsed()) return CmdAudit(transcript_path, keys_path, out, err);

  RunConfig config;
  int status = Guarded(err, [&] {
    if (!config_path.empty()) config = LoadConfig(config_path);
    config.campaign.seed = ResolveSeed(seed, std::getenv("VERFU_SEED"), config.campaign.seed);
    if (!behavior.empty()) config.behavior = behavior;
    return kExitOk;
  });
  if (status != kExitOk) return status;

  if (keygen->parsed()) return CmdKeygen(config, out_path, emit_trapdoor, out, err);
  if (run->parsed()) return CmdRun(config, keys_path, out_path, strict, out, err);
  BenchSweep sweep;
  if (!rates.empty()) sweep.unlearn_rates = rates;
  if (!dims.empty()) sweep.dims = dims;
  if (!kappas.empty()) sweep.kappas = kappas;
  return CmdBench(config, sweep, out_path, out, err);
}

}  // namespace verfu
