#include "muto/priors.hpp"
#include "muto/random.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace muto;

namespace {

Vocabulary vs(std::vector<std::string> t) { return Vocabulary(Language::Source, std::move(t)); }
Vocabulary vt(std::vector<std::string> t) { return Vocabulary(Language::Target, std::move(t)); }

std::string random_word(Rng& rng) {
  std::string s(rng.below(7), 'a');
  for (auto& c : s) c = static_cast<char>('a' + rng.below(3));
  return s;
}

std::vector<std::string> words(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

TEST_SUITE("priors") {

TEST_CASE("levenshtein examples") {
  CHECK(levenshtein("hund", "hund") == 0);
  CHECK(levenshtein("hund", "hound") == 1);
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
  // code points, not bytes
  CHECK(levenshtein("hände", "hande") == 1);
}

TEST_CASE("levenshtein is a metric on random strings") {
  Rng rng(17);
  for (int rep = 0; rep < 300; ++rep) {
    const auto a = random_word(rng), b = random_word(rng), c = random_word(rng);
    CHECK(levenshtein(a, b) == levenshtein(b, a));
    CHECK((levenshtein(a, b) == 0) == (a == b));
    CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST_CASE("edit distance prior weights") {
  const auto s = vs({"hund", "abcde"});
  const auto t = vt({"hund", "hound", "vwxyz"});
  const auto p = edit_distance_prior(s, t);
  CHECK(p.weight(0, 0) == 10.0);
  CHECK(p.weight(0, 1) == 1.0 / 1.1);
  CHECK(p.weight(1, 2) == 1.0 / 5.1);
  CHECK(p.default_weight() == 0.0);

  const auto cut = edit_distance_prior(s, t, 2);
  CHECK(cut.weight(0, 0) == 10.0);
  CHECK(cut.stored().coeff(1, 2) == 0.0);
  CHECK(cut.weight(1, 2) == cut.default_weight());
  CHECK(cut.default_weight() == 1.0 / (0.1 + 2 + 1));
}

TEST_CASE("dictionary prior on a five-entry lexicon") {
  Lexicon lex;
  lex.add("katze", "cat");
  lex.add("katze", "kitty");
  lex.add("baum", "tree");
  lex.add("baum", "wood");
  lex.add("baum", "timber");
  const auto s = vs({"katze", "baum", "hund"});
  const auto t = vt({"cat", "kitty", "tree", "dog"});
  const auto p = dictionary_prior(lex, s, t);
  CHECK(std::abs(p.weight(0, 0) - 0.5) < 1e-12);
  CHECK(std::abs(p.weight(0, 1) - 0.5) < 1e-12);
  CHECK(std::abs(p.weight(1, 2) - 1.0) < 1e-12);
  CHECK(p.weight(2, 3) == 0.0);
  CHECK_FALSE(p.allowed(0, 2));
  CHECK(p.stored_count() == 3);
  const auto cand = candidate_edges(p);
  CHECK(cand.size() == 3);
  CHECK(std::find(cand.begin(), cand.end(), TermPair{2, 3}) == cand.end());
}

TEST_CASE("pmi ratio on a hand-counted aligned corpus") {
  // i, j in the same 10 of 100 pairs; a, b independent (50, 50, 25 jointly)
  std::vector<AlignedPair> pairs;
  for (int n = 0; n < 100; ++n) {
    std::string src = "filler", tgt = "fill";
    if (n < 10) src += " i", tgt += " j";
    if (n % 2 == 0) src += " a";
    if ((n / 2) % 2 == 0) tgt += " b";
    if (n >= 90) src += " lone";
    if (n < 5) tgt += " nolone";
    pairs.push_back({words(src), words(tgt)});
  }
  const auto s = vs({"i", "a", "lone"});
  const auto t = vt({"j", "b", "nolone"});
  const auto p = pmi_prior(pairs, s, t, 1e-4);
  CHECK(std::abs(p.weight(0, 0) - 10.0) < 1e-12);
  CHECK(std::abs(p.weight(1, 1) - 1.0) < 1e-12);
  CHECK(p.weight(2, 2) == 1e-4);  // never together
  CHECK(p.default_weight() == 1e-4);

  auto doubled = pairs;
  doubled.insert(doubled.end(), pairs.begin(), pairs.end());
  const auto q = pmi_prior(doubled, s, t, 1e-4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(p.weight(i, j) - q.weight(i, j)) < 1e-12);

  const auto sp = pmi_prior(pairs, s, t, 1e-4, PmiTransform::ShiftedPositive);
  CHECK(std::abs(sp.weight(0, 0) - 10.0) < 1e-12);
  CHECK(sp.weight(2, 2) == 1.0);
  CHECK(sp.weight(0, 1) >= 1.0);
  CHECK(sp.default_weight() == 1.0);
}

TEST_CASE("pmi floor applies to weak observed pairs") {
  std::vector<AlignedPair> pairs{{{"x"}, {"y"}}, {{"x"}, {"z"}}, {{"w"}, {"y"}}};
  const auto p = pmi_prior(pairs, vs({"x", "w"}), vt({"y", "z"}), 0.9);
  // x,y together once: 1*3/(2*2) = 0.75 -> floored
  CHECK(p.weight(0, 0) == 0.9);
  CHECK(std::abs(p.weight(0, 1) - 1.5) < 1e-12);
}

TEST_CASE("prior file round trip") {
  auto dir = support::scratch_dir("prior_rt");
  const auto s = vs({"hund", "katze", "haus"});
  const auto t = vt({"hound", "cat", "house"});
  const auto p = edit_distance_prior(s, t, 3);
  write_prior(p, s, t, dir / "prior.tsv");
  const auto q = read_prior(dir / "prior.tsv", s, t);
  CHECK(q.default_weight() == p.default_weight());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(q.weight(i, j) == p.weight(i, j));

  support::write_text(dir / "bad.tsv", "#default_weight=0\nhund\thound\n");
  CHECK_THROWS_WITH_AS(read_prior(dir / "bad.tsv", s, t), doctest::Contains(":2:"), Error);
}

TEST_CASE("candidate edges") {
  const auto p = PriorMatrix::from_entries(2, 3, {{0, 0, 2.0}, {0, 1, 5.0}, {0, 2, 1.0}, {1, 2, 3.0}}, 0.0);
  CHECK(candidate_edges(p) == std::vector<TermPair>{{0, 0}, {0, 1}, {0, 2}, {1, 2}});
  CHECK(candidate_edges(p, 2) == std::vector<TermPair>{{0, 0}, {0, 1}, {1, 2}});
  const auto dense = uniform_prior(vs({"a", "b"}), vt({"x", "y"}));
  CHECK(candidate_edges(dense).size() == 4);
}

TEST_CASE("uniform prior has weight one everywhere") {
  const auto p = uniform_prior(vs({"a"}), vt({"x", "y"}));
  CHECK(p.weight(0, 1) == 1.0);
  CHECK(std::log(p.weight(0, 0)) == 0.0);
}

}  // TEST_SUITE
