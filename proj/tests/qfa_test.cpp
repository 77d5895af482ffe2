#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qfaeq/io.hpp"
#include "support/reference.hpp"

#include <random>

using namespace qfaeq;

namespace {

auto one_state(CMatrix const &u) -> MultiLetterQFA
{
  MultiLetterQFA a;
  a.k = 1;
  a.alphabet = Alphabet("a");
  a.n = 1;
  a.accepting = {0};
  a.initial = CVector::Ones(1);
  a.table.emplace("a", u);
  return a;
}

auto hadamard_automaton() -> MultiLetterQFA
{
  MultiLetterQFA a;
  a.k = 1;
  a.alphabet = Alphabet("a");
  a.n = 2;
  a.accepting = {1};
  a.initial = CVector::Unit(2, 0);
  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  a.table.emplace("a", h / std::sqrt(2.0));
  return a;
}

auto contains(std::vector<std::string> const &v, std::string const &needle) -> bool
{
  return std::any_of(v.begin(), v.end(), [&](auto const &s) { return s.find(needle) != std::string::npos; });
}

} // namespace

TEST_CASE("Alphabet")
{
  Alphabet const ab("ab");
  CHECK(ab.size() == 2);
  CHECK(ab.index_of('b') == 1);
  CHECK(ab.index_of('c') == -1);
  CHECK_THROWS_AS(Alphabet(""), InputError);
  CHECK_THROWS_AS(Alphabet("a_"), InputError);
  CHECK_THROWS_AS(Alphabet("aba"), InputError);
  CHECK_THROWS_AS(Alphabet("a\n"), InputError);
}

TEST_CASE("usable grams")
{
  auto const g = usable_grams(2, Alphabet("ab"));
  CHECK(g == std::vector<KGram>{"_a", "_b", "aa", "ab", "ba", "bb"});
  // m + m^2 + ... + m^k
  CHECK(usable_grams(3, Alphabet("abc")).size() == 3 + 9 + 27);
  CHECK(usable_grams(1, Alphabet("ba")) == std::vector<KGram>{"b", "a"});
  CHECK(is_usable_gram("__a", 3, Alphabet("a")));
  CHECK_FALSE(is_usable_gram("a_a", 3, Alphabet("a")));
  CHECK_FALSE(is_usable_gram("___", 3, Alphabet("a")));
  CHECK_FALSE(is_usable_gram("_a", 3, Alphabet("a")));
}

TEST_CASE("validate_qfa")
{
  CHECK(validate_qfa(one_state(CMatrix::Identity(1, 1))).valid());

  auto const bad = validate_qfa(one_state(CMatrix::Constant(1, 1, 2.0)));
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].find("gram a") != std::string::npos);
  CHECK(bad.violations[0].find("= 3 >") != std::string::npos);

  auto missing = regex_ab_star_b();
  missing.table.erase("ab");
  auto const r = validate_qfa(missing);
  CHECK(contains(r.violations, "missing usable gram ab"));

  auto extra = regex_ab_star_b();
  extra.table.emplace("a_", CMatrix::Identity(2, 2));
  CHECK(contains(validate_qfa(extra).violations, "unexpected gram a_"));

  auto norm = regex_ab_star_b();
  norm.initial *= 1.1;
  CHECK(contains(validate_qfa(norm).violations, "norm defect"));

  auto range = regex_ab_star_b();
  range.accepting = {2};
  CHECK(contains(validate_qfa(range).violations, "out of range"));

  auto shape = regex_ab_star_b();
  shape.table["aa"] = CMatrix::Identity(3, 3);
  CHECK(contains(validate_qfa(shape).violations, "gram aa: matrix is 3x3"));

  CHECK(validate_qfa(regex_ab_star_b()).valid());
}

TEST_CASE("gram_for_step")
{
  CHECK(gram_for_step(3, "ab", 1) == "__a");
  CHECK(gram_for_step(2, "abba", 3) == "bb");
  CHECK(gram_for_step(1, "abc", 2) == "b");
  CHECK_THROWS_AS(gram_for_step(2, "ab", 0), InputError);
  CHECK_THROWS_AS(gram_for_step(2, "ab", 3), InputError);
}

TEST_CASE("gram_for_step matches the padded sliding window exhaustively")
{
  for (int k = 1; k <= 4; ++k) {
    for (auto const &w : reference::words_up_to("ab", 6)) {
      for (std::size_t j = 1; j <= w.size(); ++j) {
        auto const g = gram_for_step(k, w, j);
        CHECK(g == reference::gram(k, w, j));
        CHECK(is_usable_gram(g, k, Alphabet("ab")));
      }
    }
  }
}

TEST_CASE("word_unitary and final_state")
{
  auto const h = hadamard_automaton();
  CHECK(word_unitary(h, "").isApprox(CMatrix::Identity(2, 2)));
  CHECK(max_abs((word_unitary(h, "aa") - CMatrix::Identity(2, 2)).eval()) <= 1e-15);

  auto const fx = regex_ab_star_b();
  CHECK(max_abs((word_unitary(fx, "ba") - CMatrix::Identity(2, 2)).eval()) == 0.0);
  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(word_unitary(fx, "ab") == x);

  auto const psi = final_state(h, "a");
  CHECK(std::abs(psi[0] - Cx(1 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK(std::abs(psi[1] - Cx(1 / std::sqrt(2.0), 0)) < 1e-15);

  CHECK(final_state(fx, "ab") == CVector::Unit(2, 1));

  auto const id = one_state(CMatrix::Identity(1, 1));
  CHECK(final_state(id, "aaaa") == id.initial);

  CHECK_THROWS_AS(word_unitary(fx, "abc"), InputError);
  CHECK_THROWS_AS(final_state(fx, "x"), InputError);
}

TEST_CASE("acceptance_probability")
{
  auto const id = one_state(CMatrix::Identity(1, 1));
  for (auto const *w : {"", "a", "aaaaa"}) { CHECK(acceptance_probability(id, w) == 1.0); }

  auto const h = hadamard_automaton();
  CHECK(acceptance_probability(h, "a") == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(acceptance_probability(h, "aa")) <= 1e-15);

  auto const fx = regex_ab_star_b();
  CHECK(acceptance_probability(fx, "ab") == 1.0);
  CHECK(acceptance_probability(fx, "ba") == 0.0);
  CHECK(acceptance_probability(fx, "") == 0.0);
}

TEST_CASE("eta_unitary")
{
  auto const fx = regex_ab_star_b();
  CMatrix    x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(eta_unitary(fx, "ab") == x);
  CHECK_THROWS_AS(eta_unitary(fx, "a"), InputError);

  std::mt19937_64 rng(8);
  auto const      unary = gen_random_qfa(3, 3, Alphabet("s"), 99);
  CHECK(eta_unitary(unary, "sss") == unary.table.at("sss"));

  auto const k1 = gen_random_qfa(3, 1, Alphabet("ab"), 4);
  for (auto const &w : reference::words_up_to("ab", 4)) {
    if (w.empty()) { continue; }
    CHECK(max_abs((eta_unitary(k1, w) - word_unitary(k1, w)).eval()) == 0.0);
  }
}

TEST_CASE("simulation matches the reference semantics")
{
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto const a = gen_random_qfa(1 + seed % 4, 1 + seed % 3, Alphabet(seed % 2 ? "ab" : "xyz"), seed);
    for (auto const &w : reference::words_up_to(a.alphabet.symbols(), 3)) {
      CHECK(std::abs(acceptance_probability(a, w) - reference::probability(a, w)) <= 1e-12);
    }
  }
}

TEST_CASE("norm conservation and probability range")
{
  std::mt19937_64 rng(77);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto const a = gen_random_qfa(1 + seed % 5, 1 + seed % 3, Alphabet("ab"), 1000 + seed);
    for (int t = 0; t < 20; ++t) {
      auto const w = reference::random_word("ab", 12, rng);
      CHECK(std::abs(final_state(a, w).norm() - 1.0) <= 1e-9);
      auto const p = acceptance_probability(a, w);
      CHECK(p >= -1e-9);
      CHECK(p <= 1 + 1e-9);
    }
  }
}

TEST_CASE("prefix factorization through eta")
{
  std::mt19937_64 rng(13);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto const a = gen_random_qfa(1 + seed % 3, 1 + seed % 3, Alphabet("ab"), 500 + seed);
    for (auto const &w : reference::words_up_to("ab", 6)) {
      if (w.size() < static_cast<std::size_t>(a.k)) { continue; }
      CMatrix const lhs = word_unitary(a, w);
      CMatrix const rhs = eta_unitary(a, w) * word_unitary(a, w.substr(0, a.k - 1));
      CHECK(max_abs((lhs - rhs).eval()) <= 1e-10);
    }
  }
}

TEST_CASE("global phase on one transition leaves probabilities unchanged")
{
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto const a = gen_random_qfa(3, 2, Alphabet("ab"), 700 + seed);
    auto       b = a;
    auto const grams = usable_grams(2, a.alphabet);
    b.table[grams[seed % grams.size()]] *= std::polar(1.0, 0.1 + 0.3 * static_cast<double>(seed));
    for (auto const &w : reference::words_up_to("ab", 5)) {
      CHECK(std::abs(acceptance_probability(a, w) - acceptance_probability(b, w)) <= 1e-10);
    }
  }
}
