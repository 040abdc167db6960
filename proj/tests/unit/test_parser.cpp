#include <doctest.h>

#include <string>

#include "peaksharp/parser.hpp"
#include "support.hpp"

using namespace peaksharp;
using testing_support::read_file;

namespace {

ParseError parse_failure(const std::string& src) {
  try {
    parse_network(src);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for: " << src);
  return ParseError(0, 0, ParseErrorKind::syntax, "");
}

}  // namespace

TEST_CASE("gene file parses to the expected model") {
  const auto g = testing_support::gene();
  CHECK(g.name == "gene");
  REQUIRE(g.reactions.size() == 3);
  CHECK(g.reactions[0] == Reaction{0, 1, {0, 3}});
  CHECK(g.reactions[1] == Reaction{0, 3, {50, -1}});
  CHECK(g.reactions[2] == Reaction{1, -1, {0.4, 0}});
  CHECK(g.k_range == KRange{0, 50});
  CHECK(g.k_default == 0);
  CHECK(g.params.at("alpha") == 50);
}

TEST_CASE("Schlogl file parses to seven reactions") {
  const auto s = testing_support::schlogl();
  REQUIRE(s.reactions.size() == 7);
  CHECK(s.reactions[3] == Reaction{3, -1, {1e-4, 0}});
  CHECK(s.reactions[6] == Reaction{1, 1, {0, 1}});
}

TEST_CASE("round trip through the canonical form") {
  for (const char* name : {"gene.rxn", "schlogl.rxn"}) {
    const auto net = testing_support::load(name);
    const auto text = serialize_network(net);
    CHECK(parse_network(text) == net);
    CHECK(serialize_network(parse_network(text)) == text);
  }
}

TEST_CASE("canonical form matches the golden files") {
  CHECK(serialize_network(testing_support::gene()) ==
        read_file(std::string(PEAKSHARP_GOLDEN_DIR) + "/gene.canonical.rxn"));
  CHECK(serialize_network(testing_support::schlogl()) ==
        read_file(std::string(PEAKSHARP_GOLDEN_DIR) + "/schlogl.canonical.rxn"));
}

TEST_CASE("minimal network serializes to a control line and one reaction") {
  const auto net = parse_network("reaction 0 -> 1 @ 2\n");
  CHECK(serialize_network(net) == "control K range 0 0 default 0\nreaction 0 -> 1 @ 2\n");
}

TEST_CASE("affine expressions") {
  const auto net = parse_network(
      "param a = 2\ncontrol K range 0 1 default 0\n"
      "reaction 0 -> 1 @ (a + K) * 3 - 2 * K\n"
      "reaction 1 -> 0 @ -(-K) + 1.5e0\n");
  CHECK(net.reactions[0].rate == RateExpr{6, 1});
  CHECK(net.reactions[1].rate == RateExpr{1.5, 1});
}

TEST_CASE("nonaffine rates are rejected with a position") {
  const auto e = parse_failure("control K range 0 1 default 0\nreaction 0 -> 1 @ K*K\n");
  CHECK(e.kind() == ParseErrorKind::nonaffine_rate);
  CHECK(e.line() == 2);
  CHECK(e.column() == 20);
  const auto e2 = parse_failure("control K range 0 1 default 0\nreaction 0 -> 1 @ (K + 1) * (2 * K)\n");
  CHECK(e2.kind() == ParseErrorKind::nonaffine_rate);
  CHECK(e2.line() == 2);
}

TEST_CASE("negative rates are rejected with a position") {
  const auto e = parse_failure("control K range 0 60 default 0\nreaction 0 -> 1 @ 50 - K\n");
  CHECK(e.kind() == ParseErrorKind::range);
  CHECK(e.line() == 2);
  CHECK(e.column() == 19);
  CHECK(std::string(e.what()).find("rate negative at K=60") != std::string::npos);
}

TEST_CASE("other parse errors") {
  CHECK(parse_failure("reaction 0 -> 1 @ beta\n").kind() == ParseErrorKind::unknown_identifier);
  CHECK(parse_failure("reaction 0 -> 1 @ 1 / 2\n").kind() == ParseErrorKind::syntax);
  CHECK(parse_failure("reaction 0 => 1 @ 1\n").kind() == ParseErrorKind::syntax);
  CHECK(parse_failure("reaction 1 -> 1 @ 1\n").kind() == ParseErrorKind::range);
  CHECK(parse_failure("param K = 2\nreaction 0 -> 1 @ 1\n").kind() != ParseErrorKind::nonaffine_rate);
  const auto empty = parse_failure("# nothing\n");
  CHECK(empty.kind() == ParseErrorKind::syntax);
  CHECK(empty.line() == 1);
  const auto junk = parse_failure("reaction 0 -> 1 @ 1\nfrobnicate 3\n");
  CHECK(junk.line() == 2);
  CHECK(junk.column() == 1);
}

TEST_CASE("error positions always point into the source") {
  const std::string sources[] = {"reaction 0 -> 1 @ K*K\n", "param x = \n", "control K range 5 1 default 0\n",
                                 "reaction 0 -> -1 @ 1\n", "reaction 0 -> 1 @ (1\n"};
  for (const auto& src : sources) {
    const auto e = parse_failure(src);
    CHECK(e.line() >= 1);
    CHECK(e.column() >= 1);
  }
}

TEST_CASE("numbers format to the shortest round-trip text") {
  CHECK(format_number(0.4) == "0.4");
  CHECK(format_number(50) == "50");
  CHECK(std::stod(format_number(1e-4)) == 1e-4);
  CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}
