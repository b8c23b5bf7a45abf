#include <doctest.h>

#include <sstream>

#include "dmm/corpus.hpp"
#include "helpers.hpp"

using testutil::demo;

TEST_SUITE("corpus") {

TEST_CASE("add_message groups messages by user and averages priors") {
  dmm::Corpus corpus;
  corpus.vocab = dmm::Vocabulary({"a", "b"});
  corpus.add_message("m1", "u1", demo(0.2, 0.8, 0, 0), {1});
  corpus.add_message("m2", "u1", demo(0.6, 0.4, 0, 0), {2, 2});
  corpus.add_message("m3", "u2", demo(0.5, 0.5, 0, 0), {1, 2});
  corpus.finalize_priors();

  REQUIRE(corpus.users.size() == 2);
  CHECK(corpus.users[0].user_id == "u1");
  CHECK(corpus.users[0].messages.size() == 2);
  CHECK(corpus.users[0].prior[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(corpus.users[0].prior[1] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(corpus.users[1].prior[0] == doctest::Approx(0.5));
  CHECK(corpus.total_tokens() == 5);
  CHECK(corpus.message_tokens(1).size() == 2);
  CHECK(corpus.message_tokens(1)[0] == 2);
}

TEST_CASE("duplicate message ids are rejected") {
  dmm::Corpus corpus;
  corpus.vocab = dmm::Vocabulary({"a"});
  corpus.add_message("m1", "u1", demo(1, 0, 0, 0), {1});
  CHECK_THROWS_AS(corpus.add_message("m1", "u2", demo(1, 0, 0, 0), {1}), dmm::input_error);
}

TEST_CASE("tokenless messages violate an internal invariant") {
  dmm::Corpus corpus;
  corpus.vocab = dmm::Vocabulary({"a"});
  CHECK_THROWS_AS(corpus.add_message("m1", "u1", demo(1, 0, 0, 0), {}), dmm::invariant_error);
}

TEST_CASE("user_index finds users and rejects strangers") {
  auto corpus = testutil::small_corpus();
  CHECK(corpus.user_index("u1") == 0);
  CHECK(corpus.user_index("u2") == 1);
  CHECK_THROWS_AS((void)corpus.user_index("nobody"), dmm::input_error);
  CHECK(corpus.has_message("m3"));
  CHECK_FALSE(corpus.has_message("m99"));
}

TEST_CASE("serialization round-trips") {
  auto corpus = testutil::small_corpus();
  std::ostringstream out;
  dmm::write_corpus(corpus, out);
  std::istringstream in(out.str());
  dmm::Corpus back = dmm::read_corpus(in);

  CHECK(back.vocab.size() == corpus.vocab.size());
  CHECK(back.users.size() == corpus.users.size());
  CHECK(back.messages.size() == corpus.messages.size());
  CHECK(back.total_tokens() == corpus.total_tokens());
  for (size_t u = 0; u < corpus.users.size(); u++) {
    CHECK(back.users[u].user_id == corpus.users[u].user_id);
    for (int k = 0; k < 4; k++) CHECK(back.users[u].prior[k] == corpus.users[u].prior[k]);
  }
  for (size_t m = 0; m < corpus.messages.size(); m++) {
    CHECK(back.messages[m].msg_id == corpus.messages[m].msg_id);
    auto a = corpus.message_tokens(m);
    auto b = back.message_tokens(m);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); i++) CHECK(a[i] == b[i]);
  }

  // a second serialization is byte-identical
  std::ostringstream again;
  dmm::write_corpus(back, again);
  CHECK(again.str() == out.str());
}

TEST_CASE("file round-trip") {
  testutil::TempDir dir;
  auto corpus = testutil::small_corpus();
  dmm::write_corpus_file(corpus, dir.file("c.corpus"));
  dmm::Corpus back = dmm::read_corpus_file(dir.file("c.corpus"));
  CHECK(back.total_tokens() == corpus.total_tokens());
  CHECK_THROWS_AS((void)dmm::read_corpus_file(dir.file("missing")), dmm::input_error);
}

TEST_CASE("reader rejects corrupted files") {
  auto corpus = testutil::small_corpus();
  std::ostringstream out;
  dmm::write_corpus(corpus, out);
  std::string good = out.str();

  auto expect_reject = [](std::string text) {
    std::istringstream in(text);
    CHECK_THROWS_AS((void)dmm::read_corpus(in), dmm::input_error);
  };

  expect_reject("BOGUS header\n");
  expect_reject(good.substr(0, good.size() / 2));  // truncated
  std::string wrong_id = good;
  wrong_id.replace(wrong_id.find("0\t<OOV>"), 7, "0\tnope42");
  expect_reject(wrong_id);
  std::string bad_token = good;
  bad_token.replace(bad_token.rfind('\t') + 1, 1, "9");  // token id out of range
  expect_reject(bad_token);
}

}  // TEST_SUITE
