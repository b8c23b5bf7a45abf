#include <doctest.h>

#include <string>

#include "dmm/text_normalize.hpp"

namespace {

std::string cp(char32_t c) {
  std::string s;
  dmm::utf8::append(s, c);
  return s;
}

}  // namespace

TEST_SUITE("text_normalize") {

TEST_CASE("strip range boundaries are exact") {
  // kept, stripped pairs straddling each range edge
  struct Probe {
    char32_t codepoint;
    bool stripped;
  };
  const Probe probes[] = {
      {0x200A, false}, {0x200B, true},  {0x200C, true},   {0x200D, true},  {0x200E, false},
      {0x24FF, false}, {0x2500, true},  {0x2BFF, true},   {0x2C00, false}, {0xD7FF, false},
      {0xE000, true},  {0xEFFF, true},  {0xF000, false},  {0xFE0D, false},
      {0xFE0E, true},  {0xFE0F, true},  {0xFE10, false},  {0xFFFF, false}, {0x10000, true},
      {0x1F602, true}, {0x1FFFF, true}, {0x20000, false}, {0x2FFFF, false}, {0x30000, true},
      {0x10FFFF, true},
  };
  for (const auto& probe : probes) {
    CAPTURE(static_cast<uint32_t>(probe.codepoint));
    std::string input = "x" + cp(probe.codepoint) + "y";
    std::string expect = probe.stripped ? "xy" : input;
    CHECK(dmm::strip_symbols(input) == expect);
  }
}

TEST_CASE("strip_symbols keeps whitespace and ordinary text") {
  CHECK(dmm::strip_symbols("hola  que tal\tbien") == "hola  que tal\tbien");
  std::string mixed = "ok " + cp(0x1F602) + cp(0x1F602) + " fine";
  CHECK(dmm::strip_symbols(mixed) == "ok  fine");
}

TEST_CASE("strip_symbols is idempotent") {
  std::string s = "a" + cp(0x2500) + "b " + cp(0x200B) + cp(0xE123) + "c" + cp(0x1F44D);
  std::string once = dmm::strip_symbols(s);
  CHECK(dmm::strip_symbols(once) == once);
}

TEST_CASE("invalid utf8 bytes pass through untouched") {
  std::string s = "ab\xFF\xFE cd";
  CHECK(dmm::strip_symbols(s) == s);
}

TEST_CASE("mentions are removed only as whole tokens") {
  CHECK(dmm::strip_mentions("@user hi there") == "hi there");
  CHECK(dmm::strip_mentions("hi @user there") == "hi there");
  CHECK(dmm::strip_mentions("hi there @user") == "hi there");
  CHECK(dmm::strip_mentions("@a @b @c") == "");
  CHECK(dmm::strip_mentions("email a@b.com stays") == "email a@b.com stays");
  CHECK(dmm::strip_mentions("@user! stays") == "@user! stays");
  CHECK(dmm::strip_mentions("lone @ stays") == "lone @ stays");
  CHECK(dmm::strip_mentions("@under_score9 goes") == "goes");
}

TEST_CASE("mention detection treats non-ascii letters as word characters") {
  std::string mention = "@jos" + cp(0x00E9);
  CHECK(dmm::strip_mentions(mention + " hola") == "hola");
}

TEST_CASE("strip_mentions collapses runs of whitespace between kept tokens") {
  CHECK(dmm::strip_mentions("a   b\t c") == "a b c");
}

TEST_CASE("unicode space classification") {
  CHECK(dmm::is_unicode_space(U' '));
  CHECK(dmm::is_unicode_space(U'\t'));
  CHECK(dmm::is_unicode_space(0x00A0));
  CHECK(dmm::is_unicode_space(0x2003));
  CHECK(dmm::is_unicode_space(0x3000));
  CHECK_FALSE(dmm::is_unicode_space(U'a'));
  CHECK_FALSE(dmm::is_unicode_space(0x200B));
}

}  // TEST_SUITE
