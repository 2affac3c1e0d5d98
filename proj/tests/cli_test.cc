// Copyright 2026 The ocrobust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ocrobust/cli.h"

#include <string>
#include <vector>

#include "cli_pipeline.h"
#include "doctest.h"
#include "json.hpp"
#include "ocrobust/corpus.h"
#include "test_util.h"

namespace ocrobust {
namespace {

using testing::run_cli;

void write_fixture(const testing::TempDir& dir) {
  write_file(dir / "train.jsonl",
             "{\"text\":\"aab\",\"label\":1}\n{\"text\":\"bba\",\"label\":0}\n");
  write_file(dir / "pairs.tsv", "aab\tacb\nbba\tbb\n");
}

TEST_CASE("help and usage errors") {
  CHECK(run_cli({"--help"}).code == cli::kOk);
  CHECK(run_cli({}).code == cli::kUsageError);
  CHECK(run_cli({"no-such-command"}).code == cli::kUsageError);
  CHECK(run_cli({"train-clean", "--train", "x.jsonl"}).code == cli::kUsageError);
  CHECK(run_cli({"sweep", "--model", "m", "--test", "t", "--seeds", "1",
                 "--rates", "abc"})
            .code == cli::kUsageError);
  const auto r = run_cli({"build-confusion", "--pairs", "p.tsv"});
  CHECK(r.code == cli::kUsageError);
  CHECK(r.err.find("--out") != std::string::npos);
}

TEST_CASE("data errors exit 2") {
  testing::TempDir dir;
  write_fixture(dir);
  CHECK(run_cli({"build-confusion", "--pairs", (dir / "missing.tsv").string(),
                 "--out", (dir / "m.json").string()})
            .code == cli::kDataError);
  write_file(dir / "bad.tsv", "no tab here\n");
  const auto bad = run_cli({"build-confusion", "--pairs", (dir / "bad.tsv").string(),
                            "--out", (dir / "m.json").string()});
  CHECK(bad.code == cli::kDataError);
  CHECK(bad.err.find("bad.tsv") != std::string::npos);
  write_file(dir / "bad.jsonl", "{\"text\":\"a\",\"label\":2}\n");
  CHECK(run_cli({"simulate", "--channel", "identity", "--in",
                 (dir / "bad.jsonl").string(), "--seed", "1"})
            .code == cli::kDataError);
}

TEST_CASE("inconsistent flag combinations are usage errors") {
  testing::TempDir dir;
  write_fixture(dir);
  const auto no_matrix = run_cli({"simulate", "--channel", "rule", "--in",
                                  (dir / "train.jsonl").string(), "--seed", "1"});
  CHECK(no_matrix.code == cli::kUsageError);
  CHECK(no_matrix.err.find("--matrix") != std::string::npos);
  CHECK(run_cli({"simulate", "--channel", "warp", "--in",
                 (dir / "train.jsonl").string(), "--seed", "1"})
            .code == cli::kUsageError);
}

TEST_CASE("config files expand into flags") {
  testing::TempDir dir;
  write_fixture(dir);
  write_file(dir / "cfg.json",
             "{\"pairs\": \"pairs.tsv\", \"out\": \"m.json\", \"floor\": 0.1}\n");
  CHECK(run_cli({"build-confusion", "--config", (dir / "cfg.json").string()}).code ==
        cli::kOk);
  CHECK(std::filesystem::exists(dir / "m.json"));
  CHECK(std::filesystem::exists(dir / "m.json.config.json"));

  // Command-line flags win over the file.
  CHECK(run_cli({"build-confusion", "--config", (dir / "cfg.json").string(), "--out",
                 (dir / "n.json").string()})
            .code == cli::kOk);
  CHECK(std::filesystem::exists(dir / "n.json"));

  write_file(dir / "unknown.json", "{\"pairs\": \"pairs.tsv\", \"colour\": 1}\n");
  CHECK(run_cli({"build-confusion", "--config", (dir / "unknown.json").string()})
            .code == cli::kUsageError);
  write_file(dir / "broken.json", "{\"pairs\": ");
  CHECK(run_cli({"build-confusion", "--config", (dir / "broken.json").string()})
            .code == cli::kDataError);
}

TEST_CASE("simulate writes pool records") {
  testing::TempDir dir;
  write_fixture(dir);
  const auto r = run_cli({"simulate", "--channel", "identity", "--in",
                          (dir / "train.jsonl").string(), "--seed", "1"});
  REQUIRE(r.code == cli::kOk);
  const auto first = nlohmann::json::parse(r.out.substr(0, r.out.find('\n')));
  CHECK(first["clean"] == "aab");
  CHECK(first["noisy"] == "aab");
  CHECK(first["label"] == 1);
  CHECK(first["channel"] == "identity");
}

TEST_CASE("every stage reruns byte-identically") {
  testing::TempDir one, two;
  std::string failure;
  const auto files = testing::run_pipeline(one.path(), "1", &failure);
  REQUIRE_MESSAGE(!files.empty(), failure);
  REQUIRE(!testing::run_pipeline(two.path(), "3", &failure).empty());
  for (const std::string& f : files) {
    INFO(f);
    CHECK(read_file(one / f) == read_file(two / f));
  }
  const std::string report = read_file(one / "ablate/report.jsonl");
  CHECK(std::count(report.begin(), report.end(), '\n') == 6 * 3 * 2);
}

}  // namespace
}  // namespace ocrobust
