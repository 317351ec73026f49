// Copyright 2026 The EvoLeague Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evoleague/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "evoleague/checkpoint.h"
#include "evoleague/config.h"
#include "evoleague/error.h"
#include "evoleague/runtime.h"

namespace evoleague {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::string checkpoint_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::int64_t> units;
  std::optional<double> theta;
  AgentId agent = -1;
  AgentId opponent = -1;
  std::string what;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream OpenAppend(const fs::path& path) {
  std::ofstream out(path, std::ios::app);
  if (!out) Fail(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  return out;
}

int Train(const Options& o, std::ostream& out) {
  ExperimentConfig config;
  std::optional<LeagueState> state;
  if (!o.checkpoint_path.empty()) {
    if (o.seed) Fail(ErrorKind::kConfig, "--seed cannot override the seed of a resumed checkpoint");
    Checkpoint ck = LoadCheckpoint(o.checkpoint_path);
    config = ck.config;
    state.emplace(std::move(ck.state));
    if (!o.config_path.empty()) {
      Fail(ErrorKind::kConfig, "--config and --checkpoint are mutually exclusive for train");
    }
  } else if (!o.config_path.empty()) {
    config = ParseConfig(ReadFile(o.config_path));
  }
  if (o.seed) config.runtime.seed = *o.seed;
  if (o.workers) config.runtime.workers = *o.workers;
  if (o.units) config.runtime.total_units = *o.units;
  if (!o.out_dir.empty()) config.output.dir = o.out_dir;
  ValidateConfig(config);

  const GameSpec game = MakeGame(config.game);
  if (!state) state.emplace(InitialState(config, game));

  const fs::path dir(config.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create output directory '" + dir.string() + "'");
  std::ofstream metrics = OpenAppend(dir / "metrics.jsonl");
  std::optional<std::ofstream> matches;
  if (config.output.match_log) matches.emplace(OpenAppend(dir / "matches.jsonl"));
  const std::string checkpoint_file = (dir / "checkpoint.json").string();

  RunHooks hooks;
  hooks.on_checkpoint = [&](const LeagueState& s) {
    metrics << MetricsToJson(ComputeMetrics(s, config, game)).dump() << '\n';
    for (const auto& record : ArchiveRecords(s.archive, s.clock)) {
      metrics << record.dump() << '\n';
    }
    metrics.flush();
    SaveCheckpoint(config, s, checkpoint_file);
  };
  if (matches) {
    hooks.on_match = [&](const MatchResult& m) {
      json j = MatchToJson(m);
      j["type"] = "match";
      *matches << j.dump() << '\n';
    };
  }

  const RunResult result = RunLeague(*state, config, game, config.runtime.total_units, hooks);
  {
    std::ofstream commits = OpenAppend(dir / "commits.jsonl");
    for (const auto& p : result.commit_log) commits << ProposalToJson(p).dump() << '\n';
  }
  out << json{{"units", result.units},
              {"stale_units", result.stale_units},
              {"clock", state->clock},
              {"checkpoint", checkpoint_file},
              {"digest", StateDigest(config, *state)}}
             .dump()
      << '\n';
  return kExitOk;
}

int Nash(const Options& o, std::ostream& out) {
  Checkpoint ck = LoadCheckpoint(o.checkpoint_path);
  const GameSpec game = MakeGame(ck.config.game);
  LeagueNashOptions opts = ck.config.nash;
  if (o.theta) opts.theta = *o.theta;
  const LeagueState& s = ck.state;
  const LeagueNash nash = ComputeLeagueNash(s.league.Snapshot(s.clock), s.table, game, opts);
  out << json{{"ids", nash.game.ids},
              {"probs", nash.dist.probs},
              {"exploitability", nash.dist.exploitability},
              {"iterations", nash.dist.iterations_used},
              {"coverage", nash.game.coverage},
              {"source", NashSourceName(opts.source)},
              {"theta", nash.theta},
              {"support", nash.support.ids},
              {"support_size", nash.support.ids.size()},
              {"mixture", nash.mixture.probs},
              {"game_exploitability", nash.game_exploitability}}
             .dump(2)
      << '\n';
  return kExitOk;
}

int Eval(const Options& o, std::ostream& out) {
  Checkpoint ck = LoadCheckpoint(o.checkpoint_path);
  const GameSpec game = MakeGame(ck.config.game);
  const League& league = ck.state.league;
  const Agent* a = league.Find(o.agent);
  const Agent* b = league.Find(o.opponent);
  if (a == nullptr) Fail(ErrorKind::kNotFound, "agent " + std::to_string(o.agent) + " not found");
  if (b == nullptr) {
    Fail(ErrorKind::kNotFound, "agent " + std::to_string(o.opponent) + " not found");
  }
  const double payoff = MixedPayoff(game, PolicyToMixed(a->params), PolicyToMixed(b->params));
  out << json{{"agent", a->id}, {"opponent", b->id}, {"payoff", payoff}}.dump() << '\n';
  return kExitOk;
}

int Export(const Options& o, std::ostream& out) {
  Checkpoint ck = LoadCheckpoint(o.checkpoint_path);
  const LeagueState& s = ck.state;
  json doc;
  if (o.what == "archive") {
    doc = {{"at", s.clock},
           {"resolution", s.archive.resolution()},
           {"coverage", s.archive.Coverage()},
           {"qd_score", s.archive.QdScore()},
           {"cells", ArchiveRecords(s.archive, s.clock)}};
  } else if (o.what == "ratings") {
    doc = RatingsDocument(s);
  } else {
    doc = PayoffMatrixDocument(s);
  }
  out << doc.dump(2) << '\n';
  return kExitOk;
}

json ErrorJson(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Population league trainer for nontransitive matrix games", "evoleague"};
  app.require_subcommand(1);
  Options o;

  auto* train = app.add_subcommand("train", "Run a league and write checkpoints and metrics");
  train->add_option("--config", o.config_path, "Experiment config file")->check(CLI::ExistingFile);
  train->add_option("--checkpoint", o.checkpoint_path, "Resume from this checkpoint")
      ->check(CLI::ExistingFile);
  train->add_option("--seed", o.seed, "Override runtime.seed");
  train->add_option("--workers", o.workers, "Override runtime.workers");
  train->add_option("--units", o.units, "Override runtime.total_units");
  train->add_option("--out", o.out_dir, "Override output.dir");

  auto* nash = app.add_subcommand("nash", "Print the Nash distribution of a checkpoint's league");
  nash->add_option("--checkpoint", o.checkpoint_path)->required()->check(CLI::ExistingFile);
  nash->add_option("--theta", o.theta, "Support threshold (default 1/(4n))");

  auto* eval = app.add_subcommand("eval", "Exact payoff of one stored agent against another");
  eval->add_option("--checkpoint", o.checkpoint_path)->required()->check(CLI::ExistingFile);
  eval->add_option("agent", o.agent)->required();
  eval->add_option("opponent", o.opponent)->required();

  auto* exp = app.add_subcommand("export", "Emit archive, ratings or payoff-matrix documents");
  exp->add_option("--checkpoint", o.checkpoint_path)->required()->check(CLI::ExistingFile);
  exp->add_option("what", o.what)
      ->required()
      ->check(CLI::IsMember({"archive", "ratings", "payoff-matrix"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << ErrorJson("usage", e.what()).dump() << '\n';
    return kExitUsage;
  }

  try {
    if (*train) return Train(o, out);
    if (*nash) return Nash(o, out);
    if (*eval) return Eval(o, out);
    return Export(o, out);
  } catch (const LeagueError& e) {
    err << ErrorJson(std::string(ErrorKindName(e.kind())), e.what()).dump() << '\n';
    return e.kind() == ErrorKind::kConfig ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    err << ErrorJson("internal", e.what()).dump() << '\n';
    return kExitRuntime;
  }
}

}  // namespace evoleague
