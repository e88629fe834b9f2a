#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "semilab/report.hpp"

using namespace semilab;

namespace {

RunReport sample() {
  RunReport r;
  r.scenario = "demo";
  r.seed = 18446744073709551615ull;
  r.config = nlohmann::ordered_json{{"a", 1}, {"b", {1.5, 2.0}}};
  Table t{"values", {"name", "count", "x"}, {}};
  t.add({std::string("plain"), std::int64_t{3}, 0.1});
  t.add({std::string("with,comma"), std::int64_t{-7}, 1e-300});
  t.add({std::string("quote\"d"), std::int64_t{0}, -2.5});
  t.add({std::string("line\nbreak"), std::int64_t{1}, std::nan("")});
  r.tables.push_back(t);
  r.tables.push_back(Table{"empty", {"a", "b"}, {}});
  r.flags = {{"ok", true, "fine"}, {"bad", false, "detail, with comma"}};
  r.wall_time_seconds = 1.25;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Csv, QuotingFollowsRfc4180) {
  EXPECT_EQ(csv_field("abc"), "abc");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("a\r\nb"), "\"a\r\nb\"");
}

TEST(Csv, EmptyTableIsHeaderOnly) { EXPECT_EQ(to_csv(Table{"e", {"x", "y"}, {}}), "x,y\r\n"); }

TEST(Csv, NumbersAreShortestRoundTrip) {
  const auto csv = to_csv(sample().tables[0]);
  EXPECT_NE(csv.find("plain,3,0.1\r\n"), std::string::npos);
  EXPECT_NE(csv.find("\"with,comma\",-7,1e-300\r\n"), std::string::npos);
  EXPECT_NE(csv.find("\"quote\"\"d\",0,-2.5\r\n"), std::string::npos);
  EXPECT_NE(csv.find(",nan\r\n"), std::string::npos);
  EXPECT_EQ(format_number(0.30000000000000004), "0.30000000000000004");
}

TEST(Csv, RowWidthIsChecked) {
  Table t{"t", {"a"}, {}};
  EXPECT_THROW(t.add({std::int64_t{1}, std::int64_t{2}}), Error);
}

TEST(Json, RoundTripIsStructural) {
  const RunReport r = sample();
  const RunReport back = report_from_json(nlohmann::ordered_json::parse(emit_json(r)));
  // NaN never compares equal, so compare everything but that cell.
  ASSERT_EQ(back.tables[0].rows.size(), 4u);
  EXPECT_TRUE(std::isnan(std::get<double>(back.tables[0].rows[3][2])));
  RunReport a = r, b = back;
  a.tables[0].rows.pop_back();
  b.tables[0].rows.pop_back();
  EXPECT_TRUE(structurally_equal(a, b));
  EXPECT_EQ(emit_json(back), emit_json(r));
}

TEST(Json, TopLevelKeysAndNoWallTime) {
  const auto j = nlohmann::ordered_json::parse(emit_json(sample()));
  for (const char* k : {"scenario", "tables", "flags", "seed"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(emit_json(sample()).find("1.25"), std::string::npos);
}

TEST(Emit, ByteStable) {
  EXPECT_EQ(emit_json(sample()), emit_json(sample()));
  EXPECT_EQ(emit_csv(sample()), emit_csv(sample()));
}

TEST(Emit, WritesFilesAndRejectsBadDestination) {
  const auto dir = std::filesystem::temp_directory_path() / "semilab_report_test";
  std::filesystem::create_directories(dir);
  const auto written = emit(sample(), OutputFormat::csv, dir / "run.csv");
  ASSERT_EQ(written.size(), 3u);
  EXPECT_EQ(written[0].filename(), "run.values.csv");
  EXPECT_EQ(slurp(dir / "run.empty.csv"), "a,b\r\n");
  EXPECT_EQ(slurp(dir / "run.flags.csv").substr(0, 28), "scenario,flag,passed,detail\r");
  emit(sample(), OutputFormat::json, dir / "run.json");
  EXPECT_EQ(slurp(dir / "run.json"), emit_json(sample()));
  EXPECT_THROW(emit(sample(), OutputFormat::json, dir / "missing" / "run.json"), Error);
  std::filesystem::remove_all(dir);
}

TEST(Emit, FormatParsing) {
  EXPECT_EQ(parse_format("csv"), OutputFormat::csv);
  EXPECT_EQ(parse_format("json"), OutputFormat::json);
  EXPECT_THROW(parse_format("xml"), ConfigError);
}
