#include <doctest.h>

#include <sstream>

#include "dmm/synth.hpp"
#include "helpers.hpp"

using testutil::demo;

TEST_SUITE("synth") {

TEST_CASE("generation is deterministic in the seed") {
  dmm::SynthSpec spec;
  spec.vocab_words = 30;
  spec.num_users = 10;
  spec.msgs_per_user = 3;
  spec.tokens_per_msg = 5;
  spec.seed = 17;
  auto a = dmm::generate_synthetic(spec);
  auto b = dmm::generate_synthetic(spec);

  std::ostringstream sa, sb;
  dmm::write_corpus(a.corpus, sa);
  dmm::write_corpus(b.corpus, sb);
  CHECK(sa.str() == sb.str());
  CHECK(a.phi_star == b.phi_star);

  spec.seed = 18;
  auto c = dmm::generate_synthetic(spec);
  std::ostringstream sc;
  dmm::write_corpus(c.corpus, sc);
  CHECK(sc.str() != sa.str());
}

TEST_CASE("shapes and ranges are as requested") {
  dmm::SynthSpec spec;
  spec.vocab_words = 25;
  spec.num_users = 8;
  spec.msgs_per_user = 4;
  spec.tokens_per_msg = 6;
  auto result = dmm::generate_synthetic(spec);

  CHECK(result.corpus.users.size() == 8);
  CHECK(result.corpus.messages.size() == 32);
  CHECK(result.corpus.total_tokens() == 192);
  CHECK(result.corpus.vocab.size() == 26);  // requested words plus OOV
  for (size_t m = 0; m < result.corpus.messages.size(); m++) {
    for (uint32_t id : result.corpus.message_tokens(m)) {
      CHECK(id >= 1);  // the generator never emits OOV
      CHECK(id < result.corpus.vocab.size());
    }
  }
}

TEST_CASE("ground-truth topics are distributions with a zero OOV row") {
  dmm::SynthSpec spec;
  spec.vocab_words = 40;
  auto result = dmm::generate_synthetic(spec);
  const int K = spec.K;
  REQUIRE(result.phi_star.size() == static_cast<size_t>(41) * K);
  for (int k = 0; k < K; k++) {
    CHECK(result.phi_star[k] == 0.0);  // OOV row
    double sum = 0;
    for (uint32_t w = 1; w <= 40; w++) sum += result.phi_star[w * K + k];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("supplied user priors are honored") {
  dmm::SynthSpec spec;
  spec.vocab_words = 10;
  spec.num_users = 2;
  spec.msgs_per_user = 2;
  spec.tokens_per_msg = 3;
  spec.user_priors = {demo(1, 0, 0, 0), demo(0, 0, 0, 1)};
  auto result = dmm::generate_synthetic(spec);
  CHECK(result.corpus.users[0].prior[0] == 1.0);
  CHECK(result.corpus.users[1].prior[3] == 1.0);
}

TEST_CASE("prior list must match the user count") {
  dmm::SynthSpec spec;
  spec.num_users = 3;
  spec.user_priors = {demo(1, 0, 0, 0)};
  CHECK_THROWS_AS((void)dmm::generate_synthetic(spec), dmm::input_error);
}

TEST_CASE("phi table serialization round-trips") {
  testutil::TempDir dir;
  dmm::SynthSpec spec;
  spec.vocab_words = 12;
  auto result = dmm::generate_synthetic(spec);
  dmm::write_phi_file(result.phi_star, spec.K, spec.vocab_words + 1, dir.file("t.phi"));
  auto table = dmm::read_phi_file(dir.file("t.phi"));
  CHECK(table.K == spec.K);
  CHECK(table.v == static_cast<uint32_t>(spec.vocab_words + 1));
  CHECK(table.values == result.phi_star);
}

TEST_CASE("spec validation") {
  dmm::SynthSpec spec;
  spec.vocab_words = 0;
  CHECK_THROWS_AS((void)dmm::generate_synthetic(spec), dmm::input_error);
  spec = {};
  spec.K = 0;
  CHECK_THROWS_AS((void)dmm::generate_synthetic(spec), dmm::input_error);
  spec = {};
  spec.beta_per_word = 0.0;
  CHECK_THROWS_AS((void)dmm::generate_synthetic(spec), dmm::input_error);
}

}  // TEST_SUITE
