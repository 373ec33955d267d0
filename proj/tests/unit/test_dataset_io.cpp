#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pconf/dataset_io.hpp"
#include "pconf/errors.hpp"
#include "pconf/rng.hpp"

using pconf::LabeledSample;
using pconf::PconfSample;
using pconf::Vec;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / "pconf_io_test";
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

}  // namespace

TEST_CASE("pconf csv round-trips doubles exactly") {
  TempDir tmp;
  pconf::Rng rng(5);
  std::vector<PconfSample> samples;
  for (int i = 0; i < 40; ++i) {
    PconfSample s;
    s.x = 1e3 * rng.normal_vec(3);
    s.r = rng.uniform();
    samples.push_back(s);
  }
  samples[0].r = 1.0;
  samples[1].r = 0.0;
  samples[2].x[0] = 1.0 / 3.0;
  samples[3].x[1] = -1e-300;

  const auto path = tmp.file("p.csv");
  pconf::write_pconf_csv(path, samples);
  const auto back = pconf::read_pconf_csv(path);
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(back[i].r == samples[i].r);
    for (int j = 0; j < 3; ++j) CHECK(back[i].x[j] == samples[i].x[j]);
  }
  CHECK(pconf::detect_csv_kind(path) == "pconf");
}

TEST_CASE("labeled csv round-trips and uses 1/-1 labels") {
  TempDir tmp;
  pconf::Rng rng(6);
  std::vector<LabeledSample> samples;
  for (int i = 0; i < 25; ++i)
    samples.push_back({rng.normal_vec(2), rng.uniform() < 0.5 ? +1 : -1});
  const auto path = tmp.file("l.csv");
  pconf::write_labeled_csv(path, samples);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x1,x2,y");

  const auto back = pconf::read_labeled_csv(path);
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(back[i].y == samples[i].y);
    for (int j = 0; j < 2; ++j) CHECK(back[i].x[j] == samples[i].x[j]);
  }
  CHECK(pconf::detect_csv_kind(path) == "labeled");
}

TEST_CASE("format errors name the problem") {
  TempDir tmp;

  const auto missing_r = tmp.file("no_r.csv");
  write_text(missing_r, "x1,x2,y\n1,2,1\n");
  CHECK_THROWS_WITH_AS((void)pconf::read_pconf_csv(missing_r),
                       doctest::Contains("'r'"), pconf::InputFormatError);

  const auto bad_header = tmp.file("bad_header.csv");
  write_text(bad_header, "a,b,r\n1,2,0.5\n");
  CHECK_THROWS_AS((void)pconf::read_pconf_csv(bad_header), pconf::InputFormatError);

  const auto bad_label = tmp.file("bad_label.csv");
  write_text(bad_label, "x1,y\n1.0,0\n");
  CHECK_THROWS_WITH_AS((void)pconf::read_labeled_csv(bad_label),
                       doctest::Contains("label"), pconf::InputFormatError);

  const auto bad_value = tmp.file("bad_value.csv");
  write_text(bad_value, "x1,r\nfoo,0.5\n");
  CHECK_THROWS_WITH_AS((void)pconf::read_pconf_csv(bad_value),
                       doctest::Contains("row 2"), pconf::InputFormatError);

  const auto bad_conf = tmp.file("bad_conf.csv");
  write_text(bad_conf, "x1,r\n1.0,1.5\n");
  CHECK_THROWS_AS((void)pconf::read_pconf_csv(bad_conf), pconf::InputFormatError);

  const auto short_row = tmp.file("short_row.csv");
  write_text(short_row, "x1,x2,r\n1.0,0.5\n");
  CHECK_THROWS_AS((void)pconf::read_pconf_csv(short_row), pconf::InputFormatError);

  CHECK_THROWS_AS((void)pconf::read_pconf_csv(tmp.file("absent.csv")), pconf::IoError);
}

TEST_CASE("CRLF input is tolerated") {
  TempDir tmp;
  const auto path = tmp.file("crlf.csv");
  write_text(path, "x1,r\r\n0.5,0.25\r\n");
  const auto back = pconf::read_pconf_csv(path);
  REQUIRE(back.size() == 1);
  CHECK(back[0].x[0] == 0.5);
  CHECK(back[0].r == 0.25);
}

TEST_CASE("written files use LF endings") {
  TempDir tmp;
  const auto path = tmp.file("lf.csv");
  std::vector<PconfSample> one;
  PconfSample s;
  s.x = (Vec(1) << 1.0).finished();
  s.r = 0.5;
  one.push_back(s);
  pconf::write_pconf_csv(path, one);
  std::ifstream in(path, std::ios::binary);
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(body == "x1,r\n1,0.5\n");
}
