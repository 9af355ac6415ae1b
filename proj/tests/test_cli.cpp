#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "bgap/eval.hpp"
#include "bgap/features.hpp"
#include "bgap/parsers.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bgap;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(BGAP_WORK_DIR) / "cli";
const fs::path kSample = fs::path(BGAP_SOURCE_DIR) / "data" / "sample_treebank.mrg";

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(BGAP_CLI) + " " + args + " 2>" + (kWork / "stderr.txt").string();
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  while (std::size_t got = std::fread(buffer, 1, sizeof buffer, pipe)) r.out.append(buffer, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string last_stderr() { return slurp(kWork / "stderr.txt"); }

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string path(const std::string& name) { return (kWork / name).string(); }

struct Workdir {
  Workdir() {
    fs::create_directories(kWork);
    setenv("SOURCE_DATE_EPOCH", "1600000000", 1);
  }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE_FIXTURE(Workdir, "reverse-treebank") {
  write(path("fig1.mrg"), "(S (NP I) (VP (V like) (VP (TO to) (VP (V eat) (NP (DT an) (NN apple))))))\n");
  REQUIRE(run("reverse-treebank --in " + path("fig1.mrg") + " --out " + path("fig1.rev")).code == 0);
  CHECK(slurp(path("fig1.rev")) == "(X (X (X (X (X apple an) eat) to) like) I)\n");

  REQUIRE(run("reverse-treebank --in " + kSample.string() + " --out " + path("rev1.mrg")).code == 0);
  REQUIRE(run("reverse-treebank --in " + path("rev1.mrg") + " --out " + path("rev2.mrg")).code == 0);
  REQUIRE(run("reverse-treebank --in " + path("rev2.mrg") + " --out " + path("rev3.mrg")).code == 0);
  CHECK(slurp(path("rev1.mrg")) == slurp(path("rev3.mrg")));
  CHECK(slurp(path("rev1.mrg")) != slurp(path("rev2.mrg")));

  write(path("empty.mrg"), "");
  CHECK(run("reverse-treebank --in " + path("empty.mrg") + " --out " + path("empty.rev")).code == 0);
  CHECK(slurp(path("empty.rev")).empty());

  write(path("broken.mrg"), "(S (A a) (B b))\n(S (A a\n");
  CHECK(run("reverse-treebank --in " + path("broken.mrg") + " --out " + path("x")).code == 2);
  CHECK(last_stderr().find("line 2") != std::string::npos);
}

TEST_CASE_FIXTURE(Workdir, "parse") {
  CHECK(run("parse --algo right-b --treebank " + kSample.string() + " --out " + path("rb.jsonl")).code == 0);
  std::istringstream first(slurp(path("rb.jsonl")));
  std::string line;
  std::getline(first, line);
  CHECK(nlohmann::json::parse(line).at("tree").get<std::string>().rfind("(he (bought", 0) == 0);

  const Run missing = run("parse --algo dist --treebank " + kSample.string() + " --out " + path("d.jsonl"));
  CHECK(missing.code == 2);
  CHECK(last_stderr().find("--features or --random") != std::string::npos);

  // same flags, same bytes, whatever the thread count
  const std::string args = "parse --algo mart --random --seed 7 --treebank " + kSample.string();
  REQUIRE(run(args + " --out " + path("m1.jsonl") + " --threads 1").code == 0);
  REQUIRE(run(args + " --out " + path("m2.jsonl") + " --threads 6").code == 0);
  CHECK(slurp(path("m1.jsonl")) == slurp(path("m2.jsonl")));
  const fs::path golden = fs::path(BGAP_SOURCE_DIR) / "tests" / "golden" / "mart_random_seed7.head.jsonl";
  std::istringstream got(slurp(path("m1.jsonl")));
  std::string head;
  for (int i = 0; i < 20 && std::getline(got, line); ++i) head += line + "\n";
  CHECK(head == slurp(golden));

  CHECK(run("parse --algo mart --feature-def hidden --random --treebank " + kSample.string() + " --out " + path("x")).code == 2);
}

TEST_CASE_FIXTURE(Workdir, "feature file errors name the sentence") {
  write(path("t.mrg"), "(S (A a) (B b))\n(S (A c) (B d))\n");
  write(path("f.jsonl"),
        R"({"id":"1","tokens":["a","b"],"hidden":{"0":[[0,1],[1,0]]}})" "\n"
        R"({"id":"2","tokens":["c","e"],"hidden":{"0":[[0,1],[1,0]]}})" "\n");
  CHECK(run("parse --algo dist --feature-def hidden --features " + path("f.jsonl") + " --treebank " + path("t.mrg") + " --out " + path("x")).code == 2);
  CHECK(last_stderr().find("sentence 2") != std::string::npos);
}

TEST_CASE_FIXTURE(Workdir, "gap from prediction files") {
  const std::string s = kSample.string();
  REQUIRE(run("reverse-treebank --in " + s + " --out " + path("rev.mrg")).code == 0);
  REQUIRE(run("parse --algo right-b --treebank " + s + " --out " + path("pl.jsonl")).code == 0);
  REQUIRE(run("parse --algo right-b --treebank " + path("rev.mrg") + " --out " + path("plp.jsonl")).code == 0);
  const Run gap = run("gap --pred-l " + path("pl.jsonl") + " --gold-l " + s + " --pred-lprime " + path("plp.jsonl") + " --out " + path("gap.json"));
  REQUIRE(gap.code == 0);
  const Run rpb = run("random-parser-bias --algo right-b --seeds 1 --treebank " + s);
  REQUIRE(rpb.code == 0);
  // identical gap column from both routes
  auto column = [](const std::string& row, int c) {
    std::istringstream in(row);
    std::string cell;
    for (int i = 0; i <= c; ++i) std::getline(in, cell, '\t');
    return cell;
  };
  CHECK(column(gap.out, 5) == column(rpb.out, 5));
  const auto doc = nlohmann::json::parse(slurp(path("gap.json")));
  CHECK(doc.at("manifest").at("inputs").size() == 3);
  CHECK(doc.at("report").at("protocol") == "gap");
}

TEST_CASE_FIXTURE(Workdir, "experiment reports are byte-identical across thread counts") {
  const std::string args = "random-feature-bias --feature-def prefix-attn --seeds 2 --treebank " + kSample.string();
  REQUIRE(run(args + " --threads 1 --out " + path("r1.json")).code == 0);
  REQUIRE(run(args + " --threads 8 --out " + path("r8.json")).code == 0);
  CHECK(slurp(path("r1.json")) == slurp(path("r8.json")));
  const auto doc = nlohmann::json::parse(slurp(path("r1.json")));
  CHECK(doc.at("manifest").at("timestamp") == "2020-09-13T12:26:40Z");
  CHECK(doc.at("manifest").at("version") == "0.1.0");
  CHECK(doc.at("manifest").at("inputs").begin().value().get<std::string>().size() == 64);
  CHECK(doc.at("report").at("per_seed").size() == 2);
  CHECK(doc.at("report").at("reference").contains("EN"));

  const Run json_out = run(args + " --emit json");
  CHECK(nlohmann::json::parse(json_out.out) == doc);
}

TEST_CASE_FIXTURE(Workdir, "lm-audit with self-mirrored features") {
  write(path("t.mrg"),
        "(S (A a) (B (C b) (D c)))\n"
        "(S (A (X d) (Y e)) (B f) (C g))\n");
  // mirrored rows for the reversed side
  write(path("fl.jsonl"),
        R"({"id":"1","tokens":["a","b","c"],"hidden":{"0":[[0,0],[3,1],[4,1]]}})" "\n"
        R"({"id":"2","tokens":["d","e","f","g"],"hidden":{"0":[[1,1],[1,2],[5,0],[6,6]]}})" "\n");
  write(path("flp.jsonl"),
        R"({"id":"1","tokens":["c","b","a"],"hidden":{"0":[[4,1],[3,1],[0,0]]}})" "\n"
        R"({"id":"2","tokens":["g","f","e","d"],"hidden":{"0":[[6,6],[5,0],[1,2],[1,1]]}})" "\n");
  const Run mirrored = run("lm-audit --gold-l " + path("t.mrg") + " --features-l " + path("fl.jsonl") + " --features-lprime " + path("flp.jsonl") + " --emit json");
  REQUIRE(mirrored.code == 0);
  CHECK(nlohmann::json::parse(mirrored.out).at("report").at("gap") == 0.0);
  const Run same = run("lm-audit --gold-l " + path("t.mrg") + " --gold-lprime " + path("t.mrg") + " --features-l " + path("fl.jsonl") + " --features-lprime " + path("fl.jsonl") + " --emit json");
  REQUIRE(same.code == 0);
  CHECK(nlohmann::json::parse(same.out).at("report").at("gap") == 0.0);
  CHECK(run("lm-audit --gold-l " + path("t.mrg") + " --features-l " + path("fl.jsonl")).code == 2);
}

TEST_CASE_FIXTURE(Workdir, "tune and usage errors") {
  write(path("t.mrg"), "(S (A a) (B (C b) (D c)))\n");
  write(path("f.jsonl"),
        R"({"id":"1","tokens":["a","b","c"],"hidden":{"0":[[0],[1],[1.5]],"1":[[0],[5],[6]]}})" "\n");
  const Run t = run("tune --algo dist --feature-def hidden --layers 0,1 --treebank " + path("t.mrg") + " --features " + path("f.jsonl") + " --out " + path("tune.json"));
  REQUIRE(t.code == 0);
  CHECK(t.out.find("best\tdist+hidden@0/l2\t100") != std::string::npos);

  CHECK(run("random-parser-bias --treebank " + kSample.string() + " --no-such-flag").code == 2);
  CHECK(run("random-parser-bias --treebank " + kSample.string() + " --algo nope").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("parse --help").code == 0);
  CHECK(run("random-feature-bias --treebank " + kSample.string() + " --feature-def hidden --metric jsd").code == 2);
}

}
