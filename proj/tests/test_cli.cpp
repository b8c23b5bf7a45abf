#include <doctest.h>

#include <cstdlib>
#include <string>

#include "helpers.hpp"

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(DMM_CLI_PATH) + " " + args + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

const char* kJsonl =
    R"({"msg_id":"j1","user_id":"ua","text":"good morning everyone here","demographics":[0.7,0.1,0.1,0.1]}
{"msg_id":"j2","user_id":"ua","text":"good evening everyone again","demographics":[0.7,0.1,0.1,0.1]}
{"msg_id":"j3","user_id":"ub","text":"buenos dias a todos hoy","demographics":[0.1,0.2,0.6,0.1]}
{"msg_id":"j4","user_id":"ub","text":"muy buenos dias amigos","demographics":[0.1,0.2,0.6,0.1]}
{"msg_id":"j5","user_id":"uc","text":"good dias everyone amigos","demographics":[0.25,0.25,0.25,0.25]}
)";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("full pipeline runs clean") {
  testutil::TempDir dir;
  auto path = [&](const char* name) { return dir.file(name); };

  CHECK(run("synth --vocab 40 --users 30 --msgs-per-user 4 --tokens-per-msg 6 --seed 5 --out " +
            path("s.corpus") + " --phi-out " + path("s.phi")) == 0);
  CHECK(testutil::slurp(path("s.corpus")).rfind("DMMCORPUS v1", 0) == 0);
  CHECK(!testutil::slurp(path("s.corpus.manifest")).empty());

  CHECK(run("train --corpus " + path("s.corpus") +
            " --iters 20 --avg-last 5 --seed 3 --out " + path("m.dmm") +
            " --retain-message-posteriors " + path("m.post") + " --loglik-log " +
            path("m.ll")) == 0);
  CHECK(testutil::slurp(path("m.dmm")).rfind("DMM v1", 0) == 0);
  CHECK(testutil::slurp(path("m.post")).rfind("DMMPOST v1", 0) == 0);
  CHECK(!testutil::slurp(path("m.ll")).empty());

  testutil::spit(path("held.jsonl"),
                 "{\"msg_id\":\"h1\",\"text\":\"w00 w01 w02\"}\n"
                 "{\"msg_id\":\"h2\",\"text\":\"nothing matches\"}\n");
  CHECK(run("infer --model " + path("m.dmm") + " --input " + path("held.jsonl") + " --out " +
            path("theta.tsv")) == 0);
  std::string theta = testutil::slurp(path("theta.tsv"));
  CHECK(theta.rfind("h1\t", 0) == 0);
  CHECK(theta.find("h2") == std::string::npos);  // no vocabulary overlap, skipped

  testutil::spit(path("baseline.tsv"), "h1\tes\nh2\ten\n");
  CHECK(run("classify --model " + path("m.dmm") + " --baseline table:" +
            path("baseline.tsv") + " --input " + path("held.jsonl") + " --out " +
            path("dec.tsv")) == 0);
  std::string decisions = testutil::slurp(path("dec.tsv"));
  CHECK(decisions.find("h1\t") != std::string::npos);
  CHECK(decisions.find("h2\ten\ten\tbaseline_english") != std::string::npos);

  CHECK(run("recall --decisions " + path("dec.tsv") + " --precision 0.9 > " +
            path("recall.tsv")) == 0);
  std::string recall = testutil::slurp(path("recall.tsv"));
  CHECK(recall.find("baseline_recall\t") != std::string::npos);
  CHECK(recall.find("ensemble_recall\t") != std::string::npos);

  CHECK(run("extract --posteriors " + path("m.post") + " --category aa --min-posterior 0.1 " +
            "--other-cap 0.99 --out " + path("users.txt")) == 0);

  CHECK(run("analyze ratios --model " + path("m.dmm") + " --min-ratio 0 --out " +
            path("ratios.tsv")) == 0);
  CHECK(!testutil::slurp(path("ratios.tsv")).empty());

  testutil::spit(path("ids.txt"), "m000\nm002\n");
  CHECK(run("analyze deciles --posteriors " + path("m.post") + " --predicate-ids " +
            path("ids.txt") + " --sample 100 --out " + path("dec10.tsv")) == 0);
  std::string deciles = testutil::slurp(path("dec10.tsv"));
  CHECK(deciles.rfind("decile\t", 0) == 0);
}

TEST_CASE("preprocess, normalize, and seedlist over jsonl input") {
  testutil::TempDir dir;
  auto path = [&](const char* name) { return dir.file(name); };
  testutil::spit(path("raw.jsonl"), kJsonl);

  CHECK(run("preprocess --input " + path("raw.jsonl") + " --min-users 2 --output " +
            path("c.corpus") + " --keep-dropped-log " + path("dropped.tsv")) == 0);
  std::string corpus_text = testutil::slurp(path("c.corpus"));
  CHECK(corpus_text.rfind("DMMCORPUS v1", 0) == 0);
  CHECK(corpus_text.find("good") != std::string::npos);   // ua + uc
  CHECK(corpus_text.find("morning") == std::string::npos);  // single user

  CHECK(run("normalize --input " + path("raw.jsonl") + " --output " + path("norm.jsonl")) == 0);
  CHECK(testutil::slurp(path("norm.jsonl")).find("\"msg_id\":\"j1\"") != std::string::npos);

  CHECK(run("seedlist --corpus " + path("c.corpus") +
            " --n 5 --m 1 --min-tweets 1 --category hispanic --out " + path("seeds.tsv")) == 0);
  CHECK(!testutil::slurp(path("seeds.tsv")).empty());

  CHECK(run("seedlist-users --corpus " + path("c.corpus") +
            " --n 5 --m 1 --min-tweets 1 --p 0.5 --category hispanic --out " +
            path("seedusers.txt")) == 0);
}

TEST_CASE("pattern and coverage reports") {
  testutil::TempDir dir;
  auto path = [&](const char* name) { return dir.file(name); };

  testutil::spit(path("tagged.tsv"),
                 "# t1\ni\tO\nbe\tV\ntripping\tV\n\n# t2\nshe\tO\nis\tV\nfine\tA\n");
  CHECK(run("analyze patterns --tagged " + path("tagged.tsv") + " --out " +
            path("hits.tsv")) == 0);
  std::string hits = testutil::slurp(path("hits.tsv"));
  CHECK(hits.find("habitual_be\t2\t1") != std::string::npos);

  testutil::spit(path("tagged_b.tsv"), "# u1\nshe\tO\nis\tV\nfine\tA\n");
  CHECK(run("analyze patterns --tagged " + path("tagged.tsv") + " --tagged-b " +
            path("tagged_b.tsv") + " --out " + path("ratio.tsv")) == 0);
  CHECK(testutil::slurp(path("ratio.tsv")).find("habitual_be") != std::string::npos);
}

TEST_CASE("determinism of file outputs") {
  testutil::TempDir dir;
  auto path = [&](const char* name) { return dir.file(name); };

  CHECK(run("synth --vocab 30 --users 20 --seed 4 --out " + path("a.corpus")) == 0);
  CHECK(run("synth --vocab 30 --users 20 --seed 4 --out " + path("b.corpus")) == 0);
  CHECK(testutil::slurp(path("a.corpus")) == testutil::slurp(path("b.corpus")));

  CHECK(run("train --corpus " + path("a.corpus") + " --iters 10 --avg-last 3 --seed 9 --out " +
            path("a.dmm")) == 0);
  CHECK(run("train --corpus " + path("b.corpus") + " --iters 10 --avg-last 3 --seed 9 --out " +
            path("b.dmm")) == 0);
  CHECK(testutil::slurp(path("a.dmm")) == testutil::slurp(path("b.dmm")));
  // manifests only differ in input path naming
  CHECK(testutil::slurp(path("a.dmm.manifest")).size() ==
        testutil::slurp(path("b.dmm.manifest")).size());
}

TEST_CASE("input problems exit with code 1") {
  testutil::TempDir dir;
  auto path = [&](const char* name) { return dir.file(name); };

  CHECK(run("train --corpus " + path("missing.corpus") + " --out " + path("x.dmm")) == 1);
  CHECK(run("") == 1);           // missing subcommand
  CHECK(run("not-a-command") == 1);

  testutil::spit(path("garbage.corpus"), "not a corpus at all\n");
  CHECK(run("train --corpus " + path("garbage.corpus") + " --out " + path("x.dmm")) == 1);

  testutil::spit(path("bad.jsonl"), "{}\n");
  CHECK(run("synth --vocab 10 --users 4 --out " + path("tiny.corpus")) == 0);
  CHECK(run("train --corpus " + path("tiny.corpus") + " --iters 2 --avg-last 1 --out " +
            path("tiny.dmm")) == 0);
  CHECK(run("infer --model " + path("tiny.dmm") + " --input " + path("bad.jsonl") +
            " --oov bogus --out " + path("t.tsv")) == 1);

  CHECK(run("recall --decisions " + path("missing.tsv")) == 1);
  testutil::spit(path("short.tsv"), "only-one-column\n");
  CHECK(run("recall --decisions " + path("short.tsv")) == 1);
}

TEST_CASE("help exits zero") {
  CHECK(run("--help >/dev/null") == 0);
  CHECK(run("train --help >/dev/null") == 0);
}

}  // TEST_SUITE
