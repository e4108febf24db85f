#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "pairlens/error.hpp"
#include "pairlens/textmetrics.hpp"
#include "pairlens/utf8.hpp"
#include "oracles.hpp"
#include "world.hpp"

using namespace pairlens;

namespace {

std::u32string random_string(std::mt19937& g) {
  static const std::u32string alphabet = U"abcde ABé!ü";
  std::uniform_int_distribution<int> len(0, 20);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::u32string s(len(g), U'a');
  for (auto& c : s) c = alphabet[pick(g)];
  return s;
}

}  // namespace

TEST_CASE("normalized_ld examples") {
  CHECK(normalized_ld("hello", "hello") == 100);
  CHECK(normalized_ld("abcd", "abce") == 75);
  CHECK(normalized_ld("", "x") == 0);
  CHECK(normalized_ld("", "") == 100);
}

TEST_CASE("normalized_ld matches the DP oracle on 1000 random pairs") {
  std::mt19937 g(1234);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_string(g);
    const auto b = random_string(g);
    const int got = normalized_ld(std::u32string_view(a), std::u32string_view(b));
    REQUIRE(got == oracles::dp_ratio(a, b));
    CHECK(indel_distance(a, b) == oracles::dp_distance(a, b));
    CHECK(got == normalized_ld(std::u32string_view(b), std::u32string_view(a)));
    CHECK(got >= 0);
    CHECK(got <= 100);
    CHECK((got == 100) == (a == b));
    CHECK(normalized_ld(utf8::encode(a), utf8::encode(b)) == got);
  }
}

TEST_CASE("structural examples") {
  const auto hi = structural("Hi there");
  CHECK(hi.chars == 7);
  CHECK(hi.words == 2);
  CHECK(hi.avg_word_len == 3.5);
  CHECK(hi.avg_sent_len == 2.0);

  const auto a = structural("A");
  CHECK(a.words == 1);
  CHECK(a.avg_sent_len == 1.0);

  const auto two = structural("One. Two two.");
  CHECK(two.sentences == 2);
  CHECK(two.avg_sent_len == 1.5);

  CHECK_THROWS_AS(structural(""), Error);
  CHECK_THROWS_AS(structural("   "), Error);
}

TEST_CASE("lexical diversity examples") {
  const auto go = lexical_diversity("go go go");
  CHECK(go.ttr == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(go.cttr == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-15));

  const auto abcd = lexical_diversity("a b c d");
  CHECK(abcd.ttr == 1.0);
  CHECK(abcd.cttr == doctest::Approx(4.0 / std::sqrt(8.0)).epsilon(1e-15));

  CHECK_THROWS_AS(lexical_diversity("!!! ..."), Error);
}

TEST_CASE("mtld hand traces") {
  // 20 distinct tokens: the running TTR never drops, no factor completes.
  std::vector<std::string> unique;
  for (int i = 0; i < 20; ++i) unique.push_back("w" + std::to_string(i));
  CHECK(mtld_pass(unique) == 20.0);
  CHECK(lexical_diversity(unique).mtld == 20.0);

  // a b a c: forward completes one factor at "a" (2/3), then c leaves TTR 1.
  // Reverse c a b a ends at 3/4 with a partial factor 0.25/0.28.
  const std::vector<std::string> seq = {"a", "b", "a", "c"};
  CHECK(mtld_pass(seq) == doctest::Approx(4.0));
  CHECK(lexical_diversity(seq).mtld == doctest::Approx(0.5 * (4.0 + 4.0 / (0.25 / 0.28))).epsilon(1e-14));
}

TEST_CASE("diversity invariants") {
  std::mt19937 g(99);
  const std::vector<std::string> vocab = {"the", "cat", "dog", "sat", "on", "mat", "a", "big"};
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::string> toks(1 + g() % 25);
    for (auto& t : toks) t = vocab[g() % vocab.size()];
    const auto base = lexical_diversity(toks);
    const double n = static_cast<double>(toks.size());
    CHECK(base.ttr * n == doctest::Approx(base.cttr * std::sqrt(2.0 * n)).epsilon(1e-12));
    auto shuffled = toks;
    std::shuffle(shuffled.begin(), shuffled.end(), g);
    CHECK(lexical_diversity(shuffled).cttr == doctest::Approx(base.cttr).epsilon(1e-12));
  }
}

TEST_CASE("mtld is symmetric under reversal and relabeling") {
  std::mt19937 g(7);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::string> toks(1 + g() % 30);
    for (auto& t : toks) t = std::string(1, static_cast<char>('a' + g() % 6));
    const double m = lexical_diversity(toks).mtld;
    const std::vector<std::string> reversed(toks.rbegin(), toks.rend());
    CHECK(lexical_diversity(reversed).mtld == doctest::Approx(m).epsilon(1e-12));
    auto relabeled = toks;
    for (auto& t : relabeled) t = "x" + t;
    CHECK(lexical_diversity(relabeled).mtld == doctest::Approx(m).epsilon(1e-12));
  }
  // General permutations are a different matter: factors close where the
  // running TTR first dips, so grouping the repeats changes the count.
  const std::vector<std::string> spread = {"a", "b", "c", "d", "a", "b", "c", "d"};
  const std::vector<std::string> grouped = {"a", "a", "b", "b", "c", "c", "d", "d"};
  CHECK(lexical_diversity(spread).mtld != doctest::Approx(lexical_diversity(grouped).mtld));
}

TEST_CASE("readability examples") {
  CHECK(readability("This is a test").ari == doctest::Approx(-6.4775).epsilon(1e-12));
  CHECK(readability("cat").fk_grade == doctest::Approx(-3.4).epsilon(1e-12));
  const auto r = readability("The dog ran home. It was fun.");
  CHECK(r.gunning_fog == doctest::Approx(0.4 * 3.5).epsilon(1e-12));
}

TEST_CASE("syllables and sentences") {
  CHECK(count_syllables("cat") == 1);
  CHECK(count_syllables("make") == 1);
  CHECK(count_syllables("table") == 2);
  CHECK(count_syllables("the") == 1);
  CHECK(count_syllables("beautiful") == 3);
  CHECK(count_syllables("2021") == 1);
  CHECK(count_sentences(U"no terminator") == 1);
  CHECK(count_sentences(U"Wait... what?! Really.") == 3);
}

TEST_CASE("readability and diversity match the plug-in oracle on 100 titles") {
  const auto rows = testsupport::read_tsv(testsupport::fixture("readability_oracle.tsv"));
  REQUIRE(rows.size() == 100);
  for (const auto& row : rows) {
    INFO(row[0]);
    const auto d = lexical_diversity(row[0]);
    const auto r = readability(row[0]);
    const double got[] = {d.ttr, d.cttr, d.mtld, r.ari, r.cli, r.fk_grade, r.fr_ease_reversed, r.gunning_fog};
    for (int k = 0; k < 8; ++k) CHECK(std::abs(got[k] - std::stod(row[k + 1])) <= 1e-9);
  }
}

TEST_CASE("vader compound matches the offline oracle") {
  const auto rows = testsupport::read_tsv(testsupport::fixture("vader_oracle.tsv"));
  REQUIRE(rows.size() == 30);
  int sign_agree = 0;
  for (const auto& row : rows) {
    INFO(row[0]);
    const double expected = std::stod(row[1]);
    const double got = vader_scores(row[0], testsupport::lexicons()).compound;
    CHECK(std::abs(got - expected) <= 0.05);
    const auto sign = [](double v) { return (v > 0) - (v < 0); };
    if (sign(got) == sign(expected)) ++sign_agree;
  }
  CHECK(sign_agree >= 28);
}

TEST_CASE("vader closed forms") {
  const auto& lex = testsupport::lexicons();
  const auto none = vader_scores("the table over there", lex);
  CHECK(none.compound == 0.0);
  CHECK(none.neu == 1.0);
  REQUIRE(lex.valence.at("funny") == 1.9);
  CHECK(vader_scores("funny", lex).compound == doctest::Approx(1.9 / std::sqrt(1.9 * 1.9 + 15)).epsilon(1e-12));

  std::ifstream in(testsupport::fixture("titles_100.txt"));
  std::string line;
  while (std::getline(in, line)) {
    const auto v = vader_scores(line, lex);
    CHECK(v.compound >= -1.0);
    CHECK(v.compound <= 1.0);
    CHECK(v.pos + v.neu + v.neg == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("stylistic flags") {
  const auto& lex = testsupport::lexicons();
  const auto wow = stylistic_flags("WOW this is GREAT!", lex);
  CHECK(wow[uppercase] == 1);
  CHECK(wow[excl_mark] == 1);
  CHECK(wow[question_mark] == 0);
  CHECK(stylistic_flags("sooooo good", lex)[repeated_chars] == 1);
  CHECK(stylistic_flags("I found 3 cats", lex)[numbers] == 1);
  CHECK(stylistic_flags("Best day \xF0\x9F\x98\x80", lex)[emoji] == 1);

  const auto calm = stylistic_flags("calm title here", lex);
  const auto calm_lex = lexicon_sentiment_binary("calm title here", lex);
  for (std::size_t k = 0; k < kFlagCount; ++k) {
    CHECK(calm[k] == 0);
    CHECK(calm_lex[k] == 0);
  }
}

TEST_CASE("lexicon sentiment flags") {
  const auto& lex = testsupport::lexicons();
  CHECK(lexicon_sentiment_binary("so happy", lex)[tb_polarity] == 1);
  CHECK(lexicon_sentiment_binary("terrified", lex)[nrc_emotion] == 1);
  const auto none = lexicon_sentiment_binary("the table", lex);
  for (auto v : none) CHECK(v == 0);
}

TEST_CASE("feature extraction is pure and rejects empty titles") {
  const auto& lex = testsupport::lexicons();
  const std::string t = "Why does my cat sit on the keyboard?";
  CHECK(features_csv_row("x", extract_features(t, lex)) == features_csv_row("x", extract_features(t, lex)));
  CHECK_THROWS_AS(extract_features("", lex), Error);
  CHECK_THROWS_AS(extract_features("?!", lex), Error);
}

TEST_CASE("missing lexicon directory") {
  try {
    Lexicons::load("/nonexistent/lexicons");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    CHECK(e.code() == "LEXICON_MISSING");
  }
}

TEST_CASE("external scores") {
  const auto dir = std::filesystem::temp_directory_path() / "pairlens_ext_test";
  std::filesystem::create_directories(dir);
  const auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir / name) << body;
    return dir / name;
  };
  const std::set<std::string> known = {"a", "b"};
  CHECK(load_external_scores(write("ok.csv", "post_id,s\na,0.5\nb,1.5\n"), &known).rows.size() == 2);
  CHECK_THROWS_AS(load_external_scores(write("dup.csv", "post_id,s\na,0.5\na,1.5\n"), &known), Error);
  const auto dropped = load_external_scores(write("unk.csv", "post_id,s\na,0.5\nzz,1.5\n"), &known);
  CHECK(dropped.rows.size() == 1);
  CHECK(dropped.dropped_unknown == 1);
  std::filesystem::remove_all(dir);
}
