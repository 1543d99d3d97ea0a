#include <groupeq/cli.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scenarios.hpp"

using namespace groupeq;
using namespace groupeq::cli;

namespace {

const std::string kRoot = GROUPEQ_SOURCE_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

template <class R>
void expect_round_trip(const R& r) {
  auto text = emit_records({to_record(r)});
  auto back = parse_records(text);
  ASSERT_EQ(back.size(), 1u) << text;
  EXPECT_EQ(from_record<R>(back[0]), r) << text;
}

// Parses a structured record back into its typed report and re-emits it.
void expect_typed_round_trip(const Record& rec) {
  auto check = [&](auto tag) {
    using R = decltype(tag);
    EXPECT_EQ(to_record(from_record<R>(rec)), rec) << rec.kind;
  };
  const std::string& k = rec.kind;
  if (k == SystemReport::kind) check(SystemReport{});
  else if (k == GroupReport::kind) check(GroupReport{});
  else if (k == ClassifyRecord::kind) check(ClassifyRecord{});
  else if (k == PqRecord::kind) check(PqRecord{});
  else if (k == PkRecord::kind) check(PkRecord{});
  else if (k == AuditErrorRecord::kind) check(AuditErrorRecord{});
  else if (k == AuditSummaryRecord::kind) check(AuditSummaryRecord{});
  else if (k == WreathRecord::kind) check(WreathRecord{});
  else if (k == CertifyRecord::kind) check(CertifyRecord{});
  else if (k == CounterexampleRecord::kind) check(CounterexampleRecord{});
  else if (k == SolveRecord::kind) check(SolveRecord{});
  else if (k == EnumerateRecord::kind) check(EnumerateRecord{});
  else ADD_FAILURE() << "unknown record kind " << k;
}

}  // namespace

TEST(Records, EscapesSurviveRoundTrip) {
  std::vector<Record> recs{{"a", {{"x", "line1\nline2"}, {"y", "back\\slash\r"}, {"z", ""}}}, {"b", {}}};
  EXPECT_EQ(parse_records(emit_records(recs)), recs);
  EXPECT_EQ(escape_value("a\\n\n"), "a\\\\n\\n");
  EXPECT_THROW(parse_records("x=1\n"), ParseError);
  EXPECT_THROW(parse_records("[a]\nnovalue\n"), ParseError);
  EXPECT_THROW(parse_records("[a]\nx=\\q\n"), ParseError);
  EXPECT_THROW(from_record<PqRecord>(Record{"solve", {}}), ParseError);
  EXPECT_THROW(from_record<PqRecord>(Record{"order-pq", {{"group", "G"}}}), ParseError);
}

TEST(Records, EveryReportTypeRoundTrips) {
  SystemReport s;
  s.file = "a b.sys";
  s.equations = 2;
  s.matrix = "[[1,2],[3,4]]";
  s.determinant = Integer("-123456789012345678901234567890");
  s.invariant_factors = {1, 2};
  s.singular_primes = std::vector<Integer>{2};
  s.p_nonsingular = {3, 5};
  s.p_singular = {2};
  s.note = "multi\nline";
  expect_round_trip(s);
  s.singular_primes.reset();
  s.determinant.reset();
  expect_round_trip(s);

  GroupReport g;
  g.name = "S3";
  g.derived_length = 2;
  g.derived_series = {6, 3, 1};
  g.element_orders = {1, 2, 3};
  g.element_order_counts = {1, 3, 2};
  expect_round_trip(g);

  ClassifyRecord c;
  c.group = "A4";
  c.witness_order = 4;
  c.witness_p = 3;
  c.witness_elements = "1 a b";
  c.notes = {"x", "y=z"};
  expect_round_trip(c);
  c.file = "f.grp";
  c.notes.clear();
  expect_round_trip(c);

  expect_round_trip(PqRecord{"S3", 2, 3, 1, 3, 2, true});
  expect_round_trip(PkRecord{"Q8", 2, 3, 7, 100, 99, {"x g = 1"}});
  expect_round_trip(AuditErrorRecord{"bad.grp", "line 2: oops"});

  AuditSummaryRecord a;
  a.orders = {12, 18};
  a.groups = {5, 5};
  a.flagged = {"42_05_AGL1_7"};
  a.reproduced = true;
  expect_round_trip(a);

  WreathRecord w;
  w.shifts = {"1", "g"};
  w.transformed_system = "vars: y\neq: y\n";
  w.rows = {"1 ; x1"};
  w.columns = {0, 2};
  w.minor_determinant = -1;
  expect_round_trip(w);

  CertifyRecord cr;
  cr.columns = {1};
  cr.minor_determinant = 6;
  expect_round_trip(cr);

  CounterexampleRecord ce;
  ce.n = 2;
  ce.m = -1;
  ce.group_order = 384;
  ce.group_inequality = false;
  ce.lhs_value = "(g;1)";
  ce.solvable_in_group = true;
  expect_round_trip(ce);

  SolveRecord so;
  so.assignment = {"x=g^2"};
  so.reversed_agrees = false;
  so.expected = "solvable";
  expect_round_trip(so);

  EnumerateRecord e;
  e.expected = 5;
  e.groups = {"G12_1: abelian"};
  e.catalog_matches = true;
  expect_round_trip(e);
}

TEST(Config, ParsesKeysAndRejectsUnknown) {
  auto c = parse_config("# comment\ncap.table = 100\nprimes=2,5\nformat=structured\njobs=3\nseed=9\ntrials=5\n");
  EXPECT_EQ(c.cap_table, 100u);
  EXPECT_EQ(c.primes, (std::vector<std::uint64_t>{2, 5}));
  EXPECT_EQ(c.format, "structured");
  EXPECT_EQ(c.jobs, 3u);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.trials, 5u);
  EXPECT_THROW(parse_config("colour=blue\n"), ParseError);
  EXPECT_THROW(parse_config("jobs\n"), ParseError);
  EXPECT_THROW(parse_config("jobs=0\n"), PreconditionError);
  EXPECT_THROW(parse_config("cap.work=0\n"), PreconditionError);
  EXPECT_THROW(parse_config("primes=2,4\n"), PreconditionError);
  EXPECT_THROW(parse_config("format=xml\n"), PreconditionError);
  EXPECT_THROW(parse_config("seed=-1\n"), ParseError);
}

TEST(Config, FileIsReadAndFlagsOverride) {
  auto dir = std::filesystem::temp_directory_path() / "groupeq_cli_config";
  std::filesystem::create_directories(dir);
  auto conf = (dir / "groupeq.conf").string();
  std::ofstream(conf) << "format=structured\nprimes=5\n";
  auto r = run_cli({"--config", conf, "analyze-system", kRoot + "/data/example0.sys"});
  EXPECT_EQ(r.code, 0);
  auto recs = parse_records(r.out);
  ASSERT_EQ(recs.size(), 1u);
  auto rep = from_record<SystemReport>(recs[0]);
  EXPECT_EQ(rep.p_singular, (std::vector<std::uint64_t>{5}));
  EXPECT_TRUE(rep.p_nonsingular.empty());

  r = run_cli({"--config", conf, "--format", "text", "analyze-system", kRoot + "/data/example0.sys"});
  EXPECT_NE(r.out.find("determinant: -5"), std::string::npos);

  std::ofstream(conf) << "colour=blue\n";
  r = run_cli({"--config", conf, "group", kRoot + "/data/c3.grp"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown config key"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, HelpAndUsage) {
  auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* cmd : {"analyze-system", "group", "classify", "audit-catalog", "wreath-transform", "certify-rows",
                          "counterexample", "solve", "enumerate", "cap.table=4096", "seed=0"})
    EXPECT_NE(r.out.find(cmd), std::string::npos) << cmd;
  r = run_cli({});
  EXPECT_EQ(r.code, 2);
  r = run_cli({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run_cli({"--jobs", "0", "group", kRoot + "/data/c3.grp"}).code, 2);
  EXPECT_EQ(run_cli({"classify", kRoot + "/catalog/08_05_Q8.grp", "--help"}).code, 0);
}

TEST(Cli, MissingFileIsOperationalError) {
  auto r = run_cli({"solve", "missing.sys", "--group", "g.grp"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
  EXPECT_EQ(run_cli({"classify", "missing.grp"}).code, 2);
  EXPECT_EQ(run_cli({"audit-catalog", "no/such/dir"}).code, 2);
}

TEST(Cli, AnalyzeWorkedExample) {
  auto r = run_cli({"analyze-system", kRoot + "/data/example0.sys"});
  EXPECT_EQ(r.code, 0);
  for (const char* s : {"[[2,-3,0],[0,0,1],[1,1,1]]", "determinant: -5", "singular primes: 5", "not unimodular",
                        "2=true 3=true 5=false 7=true 11=true 13=true"})
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
}

TEST(Cli, CounterexampleReport) {
  auto r = run_cli({"--format", "structured", "counterexample", "--p", "2", "--q", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rep = from_record<CounterexampleRecord>(parse_records(r.out).at(0));
  EXPECT_EQ(rep.n, 2);
  EXPECT_EQ(rep.m, -1);
  EXPECT_EQ(rep.exponent_sum, 1);
  EXPECT_TRUE(rep.unimodular);
  EXPECT_TRUE(rep.ring_identity);
  EXPECT_EQ(rep.group_inequality, std::optional<bool>(true));
  EXPECT_EQ(rep.group_order, std::optional<std::size_t>(384));
  EXPECT_EQ(rep.equation, "x^2 x^2^(a) x^-1 x^-1^(b) x^-1^(b^2) = c c^(a b)");
}

TEST(Cli, SolveExamples) {
  auto r = run_cli({"--format", "structured", "solve", kRoot + "/data/square_root_c3.sys"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rep = from_record<SolveRecord>(parse_records(r.out).at(0));
  EXPECT_TRUE(rep.solvable);
  EXPECT_EQ(rep.assignment, (std::vector<std::string>{"x=g^2"}));
  EXPECT_EQ(rep.search_space, 3u);
  EXPECT_EQ(run_cli({"--cap-work", "2", "solve", kRoot + "/data/square_root_c3.sys"}).code, 2);
}

TEST(Cli, ScenarioSuiteExitCodes) {
  for (const auto& s : scenario_suite(kRoot)) {
    auto r = run_cli(s.args);
    std::string line;
    for (const auto& a : s.args) line += a + " ";
    EXPECT_EQ(r.code, s.code) << line << "\n" << r.out << r.err;
    if (r.code == 2) EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << line;
  }
}

TEST(Cli, StructuredOutputParsesIntoTypedReports) {
  std::size_t records = 0;
  for (const auto& s : scenario_suite(kRoot)) {
    auto args = s.args;
    args.insert(args.begin(), {"--format", "structured"});
    auto r = run_cli(args);
    if (r.code == 2) continue;
    for (const auto& rec : parse_records(r.out)) {
      expect_typed_round_trip(rec);
      ++records;
    }
  }
  EXPECT_GT(records, 100u);
}

TEST(Cli, JobsDoNotChangeOutput) {
  for (const auto& s : scenario_suite(kRoot))
    for (const char* format : {"text", "structured"}) {
      auto one = s.args, four = s.args;
      one.insert(one.begin(), {"--format", format, "--jobs", "1"});
      four.insert(four.begin(), {"--format", format, "--jobs", "4"});
      auto a = run_cli(one), b = run_cli(four);
      EXPECT_EQ(a.code, b.code);
      EXPECT_EQ(a.out, b.out) << s.args[0];
    }
}
