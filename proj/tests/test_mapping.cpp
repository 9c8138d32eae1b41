#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "zhconv/mapping.hpp"
#include "zhconv/utf8.hpp"

using namespace zhconv;

namespace {

MappingTable from_text(const std::string& text) {
  std::istringstream in(text);
  return MappingTable::load(in);
}

std::u32string u32(const char* s) { return decode_utf8(s); }

}  // namespace

TEST_CASE("load parses candidate lists") {
  MappingTable t = from_text("发\t發 髮\n干\t幹 乾 干 榦\n");
  CHECK(t.size() == 2);
  auto c = t.candidates(u32("发"));
  REQUIRE(c.size() == 2);
  CHECK(encode_utf8(c[0]) == "發");
  CHECK(encode_utf8(c[1]) == "髮");
  CHECK(t.candidates(u32("干")).size() == 4);
}

TEST_CASE("load skips comments and blanks, empty stream gives empty table") {
  MappingTable t = from_text("# comment\n\n发\t發\n");
  CHECK(t.size() == 1);
  CHECK(from_text("").size() == 0);
}

TEST_CASE("load rejects malformed lines with line numbers") {
  CHECK_THROWS_WITH_AS(from_text("发 發\n"), doctest::Contains("line 1"),
                       TableError);
  CHECK_THROWS_AS(from_text("发\t\n"), TableError);
  CHECK_THROWS_AS(from_text("\t發\n"), TableError);
  // candidate character count must match the key
  CHECK_THROWS_AS(from_text("发展\t發\n"), TableError);
  CHECK_THROWS_WITH_AS(from_text("发\t發\n干\t乾淨\n"),
                       doctest::Contains("line 2"), TableError);
}

TEST_CASE("duplicate keys merge, first occurrence wins ordering") {
  MappingTable t = from_text("发\t發\n发\t髮 發\n");
  auto c = t.candidates(u32("发"));
  REQUIRE(c.size() == 2);
  CHECK(encode_utf8(c[0]) == "發");
  CHECK(encode_utf8(c[1]) == "髮");
}

TEST_CASE("candidates of absent key is empty") {
  MappingTable t = from_text("发\t發 髮\n");
  CHECK(t.candidates(u32("Z")).empty());
  CHECK(t.find(u32("发展")) == nullptr);
}

TEST_CASE("char ambiguity") {
  const auto& desk = fixtures::Desk::get();
  CHECK(desk.table.char_ambiguity(u32("发")[0]) == 2);
  CHECK(desk.table.is_ambiguous(u32("发")[0]));
  CHECK(desk.table.candidates(u32("复")) ==
        std::vector<std::u32string>{u32("復"), u32("複"), u32("覆")});
  CHECK_FALSE(desk.table.is_ambiguous(u32("维")[0]));
  CHECK_FALSE(desk.table.is_ambiguous(U'Z'));
}

TEST_CASE("lattice holds overlapping word edges plus singles") {
  MappingTable t = from_text("护发\t護髮\n发展\t發展\n");
  ConversionLattice lat = build_lattice(u32("维护发展"), t);
  REQUIRE(lat.length() == 4);
  bool hufa = false, fazhan = false;
  for (const auto& e : lat.edges[1])
    if (e.end == 3 && encode_utf8(e.entry->sc) == "护发") hufa = true;
  for (const auto& e : lat.edges[2])
    if (e.end == 4 && encode_utf8(e.entry->sc) == "发展") fazhan = true;
  CHECK(hufa);
  CHECK(fazhan);
  for (size_t j = 0; j < 4; ++j) {
    REQUIRE_FALSE(lat.edges[j].empty());
    CHECK(lat.edges[j].front().end == j + 1);  // single-char edge everywhere
  }
}

TEST_CASE("code-mixed text gets identity fallback edges") {
  MappingTable t = from_text("发\t發 髮\n");
  ConversionLattice lat = build_lattice(u32("BENZ"), t);
  REQUIRE(lat.length() == 4);
  for (size_t j = 0; j < 4; ++j) {
    REQUIRE(lat.edges[j].size() == 1);
    const auto& e = lat.edges[j].front();
    CHECK(e.fallback);
    CHECK(e.entry->sc == lat.source.substr(j, 1));
    CHECK(e.entry->tc_candidates ==
          std::vector<std::u32string>{lat.source.substr(j, 1)});
  }
}

TEST_CASE("empty sentence gives empty lattice") {
  ConversionLattice lat = build_lattice(U"", fixtures::Desk::get().table);
  CHECK(lat.length() == 0);
  CHECK(lat.edges.size() == 1);
}

// every complete path must tile the sentence exactly
static void check_paths(const ConversionLattice& lat, size_t pos,
                        std::u32string& acc, int& count) {
  if (pos == lat.length()) {
    ++count;
    CHECK(acc == lat.source);
    return;
  }
  for (const auto& e : lat.edges[pos]) {
    REQUIRE(e.entry->sc ==
            std::u32string_view(lat.source).substr(pos, e.end - pos));
    acc += e.entry->sc;
    check_paths(lat, e.end, acc, count);
    acc.resize(acc.size() - e.entry->sc.size());
  }
}

TEST_CASE("totality and span fidelity on random sentences") {
  const auto& desk = fixtures::Desk::get();
  std::mt19937_64 rng(11);
  auto lines = fixtures::read_lines(fixtures::kDataDir + "/corpus_sc.txt");
  for (int i = 0; i < 30; ++i) {
    std::u32string text = decode_utf8(lines[rng() % lines.size()]);
    if (text.size() > 8) text.resize(8);
    ConversionLattice lat = build_lattice(text, desk.table);
    std::u32string acc;
    int count = 0;
    check_paths(lat, 0, acc, count);
    CHECK(count >= 1);
  }
}

TEST_CASE("reversed table maps every candidate back") {
  MappingTable t = from_text("发\t發 髮\n发展\t發展\n");
  MappingTable rev = t.reversed();
  CHECK(rev.candidates(u32("發")) == std::vector<std::u32string>{u32("发")});
  CHECK(rev.candidates(u32("髮")) == std::vector<std::u32string>{u32("发")});
  CHECK(rev.candidates(u32("發展")) == std::vector<std::u32string>{u32("发展")});
}
