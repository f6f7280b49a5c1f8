#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gsc/errors.hpp"
#include "gsc/io.hpp"
#include "oracles.hpp"

using namespace gsc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("gsc_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Constellation parse(const std::string& text) {
  std::istringstream in(text);
  return read_constellation_csv(in);
}

}  // namespace

TEST(Io, FormatDouble) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-3.0), "-3");
}

TEST(Io, CsvLayout) {
  std::ostringstream out;
  write_constellation_csv(out, oracle::qpsk().scaled(std::sqrt(2.0)));
  EXPECT_EQ(out.str(),
            "dim1,dim2,label\n-1,-1,0\n-1,1,1\n1,-1,2\n1,1,3\n");
}

TEST(Io, CsvRoundTripIsBitExact) {
  std::mt19937_64 rng(61);
  for (int N : {1, 2, 3}) {
    const auto c = oracle::random_constellation(64, N, rng, 1e-3);
    std::stringstream buf;
    write_constellation_csv(buf, c);
    EXPECT_EQ(read_constellation_csv(buf), c);
  }
  const Constellation odd({5e-324, 1.7976931348623157e308, -0.0, 1.0 / 3.0}, {1, 0}, 1);
  std::stringstream buf;
  write_constellation_csv(buf, odd);
  EXPECT_EQ(read_constellation_csv(buf), odd);
}

TEST(Io, CsvRejectsMalformedInput) {
  EXPECT_THROW(parse(""), ParameterError);
  EXPECT_THROW(parse("x,y,label\n0,0,0\n1,1,1\n"), ParameterError);
  EXPECT_THROW(parse("dim1,dim2,dim3,label\n0,0,0,0\n1,1,1,1\n"), ParameterError);
  EXPECT_THROW(parse("dim1,dim2,label\n0,0,0\n1,1\n"), ParameterError);
  EXPECT_THROW(parse("dim1,dim2,label\n0,0,0\n1,abc,1\n"), ParameterError);
  EXPECT_THROW(parse("dim1,dim2,label\n0,0,0\n1,1.5x,1\n"), ParameterError);
  EXPECT_THROW(parse("dim1,dim2,label\n0,0,0\n1,1,-1\n"), ParameterError);
  EXPECT_THROW(parse("dim1,dim2,label\n0,0,0\n1,1,0\n"), std::invalid_argument);
  EXPECT_THROW(parse("dim1,dim2,label\n0,0,0\n1,1,1\n2,2,2\n"), std::invalid_argument);
  EXPECT_NO_THROW(parse("dim1,dim2,label\r\n0,0,0\r\n1,1,1\r\n"));
}

TEST(Io, SidecarJson) {
  ConstellationMeta meta{64, 1, 12.5, "gmi", "optimized", 42};
  const auto back = meta_from_json(meta_to_json(meta));
  EXPECT_EQ(back.size, 64u);
  EXPECT_EQ(back.n_pairs, 1);
  EXPECT_EQ(back.design_snr_db, 12.5);
  EXPECT_EQ(back.metric, "gmi");
  EXPECT_EQ(back.kind, "optimized");
  EXPECT_EQ(back.seed, 42u);

  const ConstellationMeta bare{16, 2, std::nullopt, "none", "square", std::nullopt};
  const auto text = meta_to_json(bare);
  EXPECT_NE(text.find("\"design_snr_db\": null"), std::string::npos);
  EXPECT_FALSE(meta_from_json(text).seed.has_value());
  EXPECT_THROW(meta_from_json("{not json"), ParameterError);
}

TEST(Io, SaveAndLoad) {
  const auto dir = temp_dir("save");
  const auto path = dir / "nested" / "c.csv";
  std::mt19937_64 rng(62);
  const auto c = oracle::random_constellation(16, 1, rng);
  save_constellation(path, c, {16, 1, 10.0, "mi", "gaussian", 7});
  EXPECT_EQ(sidecar_path(path), dir / "nested" / "c.json");
  ASSERT_TRUE(fs::exists(dir / "nested" / "c.json"));
  EXPECT_EQ(load_constellation(path), c);
  std::ifstream js(dir / "nested" / "c.json");
  const std::string text((std::istreambuf_iterator<char>(js)), std::istreambuf_iterator<char>());
  EXPECT_EQ(meta_from_json(text).kind, "gaussian");
  EXPECT_THROW(load_constellation(dir / "missing.csv"), std::exception);
}

TEST(Io, TraceCsv) {
  OptTrace t;
  t.records.push_back({1, -3.5, 0.25, 1.0, 0.5, 0.9, true, 2});
  t.records.push_back({2, -3.5, 0.25, 2.0, 1.0, -0.1, false, 3});
  std::ostringstream out;
  write_trace_csv(out, t);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iter,f,grad_norm,delta,step_norm,rho,accepted,n_objective_evals");
  std::getline(in, line);
  EXPECT_EQ(line, "1,-3.5,0.25,1,0.5,0.90000000000000002,1,2");
  std::getline(in, line);
  EXPECT_EQ(line.substr(line.size() - 4), ",0,3");
}
