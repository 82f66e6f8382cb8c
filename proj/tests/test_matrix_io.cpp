#include <doctest.h>

#include <cmath>
#include <string>

#include "motifclust/motif_io.hpp"

using namespace motifclust;

namespace {

const char* kMa0011 =
    ">MA0011 Broad-complex_2\n"
    "A  [  3  5  0  0 12  1  2  1 ]\n"
    "C  [  1  2 10  1  0  1  0  2 ]\n"
    "G  [  1  1  0  0  0  2  1  1 ]\n"
    "T  [  7  4  2 11  0  8  9  8 ]\n";

const char* kMa0011Transfac =
    "AC  MA0011\n"
    "XX\n"
    "NA  Broad-complex_2\n"
    "HC  ZN-FINGER, C2H2\n"
    "OS  Drosophila melanogaster\n"
    "P0      A      C      G      T\n"
    "01      3      1      1      7      T\n"
    "02      5      2      1      4      N\n"
    "03      0     10      0      2      C\n"
    "04      0      1      0     11      T\n"
    "05     12      0      0      0      A\n"
    "06      1      1      2      8      T\n"
    "07      2      0      1      9      T\n"
    "08      1      2      1      8      T\n"
    "XX\n"
    "//\n";

CountMatrix ma0011() { return parse_jaspar(kMa0011).records.at(0).matrix; }

}  // namespace

TEST_CASE("MA0011 parses to the published count table") {
  const auto result = parse_jaspar(kMa0011);
  REQUIRE(result.records.size() == 1);
  const auto& r = result.records[0];
  CHECK(r.id == "MA0011");
  CHECK(r.name == "Broad-complex_2");
  CHECK(r.matrix.width() == 8);
  CHECK(r.matrix.row(Base::A) == std::vector<std::int64_t>{3, 5, 0, 0, 12, 1, 2, 1});
  CHECK(r.matrix.row(Base::C) == std::vector<std::int64_t>{1, 2, 10, 1, 0, 1, 0, 2});
  CHECK(r.matrix.row(Base::G) == std::vector<std::int64_t>{1, 1, 0, 0, 0, 2, 1, 1});
  CHECK(r.matrix.row(Base::T) == std::vector<std::int64_t>{7, 4, 2, 11, 0, 8, 9, 8});
  CHECK(r.matrix.has_equal_column_sums());
}

TEST_CASE("frequency matrix matches the printed two-decimal table") {
  const double printed[4][8] = {{0.25, 0.42, 0.00, 0.00, 1.00, 0.08, 0.17, 0.08},
                                {0.08, 0.17, 0.83, 0.08, 0.00, 0.08, 0.00, 0.17},
                                {0.08, 0.08, 0.00, 0.00, 0.00, 0.17, 0.08, 0.08},
                                {0.58, 0.33, 0.17, 0.92, 0.00, 0.67, 0.75, 0.67}};
  const auto f = frequency_matrix(ma0011());
  for (int j = 0; j < 8; ++j) {
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      CHECK(std::round(f[j][k] * 100.0) / 100.0 == doctest::Approx(printed[k][j]).epsilon(1e-12));
      sum += f[j][k];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("consensus of MA0011 keeps the 0.75 boundary lowercase") {
  CHECK(consensus_string(ma0011()) == "taCTAttt");
  CHECK(consensus_string(CountMatrix({{12, 0, 0, 0}})) == "A");
  CHECK(consensus_string(CountMatrix({{3, 3, 3, 3}})) == "a");
  CHECK(consensus_string(CountMatrix({{0, 0, 4, 4}})) == "g");
  CHECK_THROWS_AS(consensus_string(CountMatrix({{0, 0, 0, 0}})), std::invalid_argument);
}

TEST_CASE("information content") {
  const std::array<double, 4> uniform{0.25, 0.25, 0.25, 0.25};
  CHECK(information_content({1, 0, 0, 0}, uniform) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(information_content({0.5, 0.5, 0, 0}, uniform) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(information_content(uniform, uniform) == 0.0);
  const std::array<double, 4> skew{0.4, 0.1, 0.1, 0.4};
  CHECK(information_content(skew, skew) == doctest::Approx(0.0).epsilon(1e-15));
  for (double v : information_content_profile(ma0011(), uniform)) CHECK(v >= 0.0);
}

TEST_CASE("jaspar errors name the line and record") {
  try {
    parse_jaspar(">X1\nA [1 2 3 4 5 6 7]\nC [1 2 3 4 5 6 7 8]\nG [1]\nT [1]\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.record_id() == "X1");
    CHECK(std::string(e.what()).find("unequal row lengths") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_jaspar(">X1\nA [1]\nC [1]\nG [1]\n"), ParseError);
  CHECK_THROWS_AS(parse_jaspar(">X1\nA [1]\nC [1]\nG [x]\nT [1]\n"), ParseError);
  CHECK_THROWS_AS(parse_jaspar(">X1\nA [1]\nC [1]\nG [1.5]\nT [1]\n"), ParseError);
  CHECK_THROWS_AS(parse_jaspar(">X1\nA [1]\nC [1]\nG [1]\nT [1]\n>X1\nA [1]\nC [1]\nG [1]\nT [1]\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_jaspar(">X1\nA [1]\nA [1]\nG [1]\nT [1]\n"), ParseError);
}

TEST_CASE("jaspar variants") {
  CHECK(parse_jaspar("").records.empty());
  // headerless, unlabelled rows in A, C, G, T order
  auto bare = parse_jaspar("3 5\n1 2\n1 1\n7 4\n");
  REQUIRE(bare.records.size() == 1);
  CHECK(bare.records[0].id == "motif");
  CHECK(bare.records[0].matrix[0] == Column{3, 1, 1, 7});
  // rows in a different order, CRLF line ends
  auto shuffled = parse_jaspar(">Y\r\nT [7 4]\r\nG [1 1]\r\nA [3 5]\r\nC [1 2]\r\n");
  CHECK(shuffled.records.at(0).matrix == bare.records[0].matrix);
  ParseOptions strict;
  strict.strict_column_sums = true;
  CHECK_THROWS_AS(parse_jaspar(">Z\nA [1 2]\nC [0 0]\nG [0 0]\nT [0 0]\n", strict), ParseError);
  CHECK_NOTHROW(parse_jaspar(">Z\nA [1 2]\nC [0 0]\nG [0 0]\nT [0 0]\n"));
}

TEST_CASE("transfac block equals the jaspar record") {
  const auto t = parse_transfac(kMa0011Transfac);
  REQUIRE(t.records.size() == 1);
  CHECK(t.records[0].matrix == ma0011());
  CHECK(t.records[0].id == "MA0011");
  CHECK(t.records[0].family == "ZN-FINGER, C2H2");
  CHECK(t.records[0].species == "Drosophila melanogaster");
  CHECK(detect_format(kMa0011Transfac) == MotifFormat::Transfac);
  CHECK(detect_format(kMa0011) == MotifFormat::Jaspar);
}

TEST_CASE("transfac skips, ordering and errors") {
  const std::string two = std::string(kMa0011Transfac) +
                          "AC  M2\nP0 T G C A\n01 1 0 0 0\n02 0 0 0 2\n//\n"
                          "AC  NOTABLE\nXX\nDE nothing here\n//\n";
  const auto r = parse_transfac(two);
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[1].id == "M2");
  CHECK(r.records[1].matrix[0] == Column{0, 0, 0, 1});  // P0 order T G C A
  CHECK(r.records[1].matrix[1] == Column{2, 0, 0, 0});
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("NOTABLE") != std::string::npos);

  CHECK_THROWS_AS(parse_transfac("AC X\nP0 A C G T\n//\n"), ParseError);
  CHECK_THROWS_AS(parse_transfac("AC X\nP0 A C G T\n01 1 1 1 1\n03 1 1 1 1\n//\n"), ParseError);
  CHECK_THROWS_AS(parse_transfac("AC X\nP0 A C G\n01 1 1 1\n//\n"), ParseError);

  const auto rounded = parse_transfac("AC D\nP0 A C G T\n01 1.5 0.4 2.49 0\n//\n");
  CHECK(rounded.records.at(0).matrix[0] == Column{2, 0, 2, 0});
  CHECK(rounded.warnings.size() == 1);
  ParseOptions exact;
  exact.integerize = false;
  CHECK_THROWS_AS(parse_transfac("AC D\nP0 A C G T\n01 1.5 0 0 0\n//\n", exact), ParseError);
}

TEST_CASE("serialisers round-trip") {
  auto records = parse_transfac(kMa0011Transfac).records;
  records.push_back({"M2", "", "", "", CountMatrix({{1, 2, 3, 4}, {0, 0, 9, 1}})});
  const auto jaspar = parse_jaspar(write_jaspar(records)).records;
  REQUIRE(jaspar.size() == 2);
  CHECK(jaspar[0].matrix == records[0].matrix);
  CHECK(jaspar[0].name == records[0].name);
  CHECK(parse_transfac(write_transfac(records)).records == records);
  CHECK(from_canonical_document(to_canonical_document(records)) == records);
  CHECK_THROWS_AS(from_canonical_document("{\"format\": \"other\"}"), ParseError);
}

TEST_CASE("width filter keeps order and reports drops") {
  std::vector<MotifRecord> records;
  for (int w : {4, 6, 8}) {
    records.push_back({"w" + std::to_string(w), "", "", "", CountMatrix(std::vector<Column>(w, Column{1, 1, 1, 1}))});
  }
  const auto f = filter_min_width(records, 6);
  REQUIRE(f.kept.size() == 2);
  CHECK(f.kept[0].id == "w6");
  CHECK(f.kept[1].id == "w8");
  REQUIRE(f.dropped.size() == 1);
  CHECK(f.dropped[0].id == "w4");
  CHECK(f.dropped[0].width == 4);
  CHECK(filter_min_width(records, 1).kept.size() == 3);
}

TEST_CASE("count matrix invariants") {
  CHECK_THROWS_AS(CountMatrix(std::vector<Column>{}), std::invalid_argument);
  CHECK_THROWS_AS(CountMatrix({{1, -1, 0, 0}}), std::invalid_argument);
  const auto m = ma0011();
  CHECK(m.slice(2, 3).size() == 3);
  CHECK(m.slice(2, 3)[0] == Column{0, 10, 0, 2});
  CHECK_THROWS_AS(m.slice(6, 3), std::out_of_range);
  CHECK(m.totals() == Column{24, 17, 6, 49});
}
