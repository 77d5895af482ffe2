#pragma once

#include "linalg.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qfaeq {

// Padding letter used before k letters have been read.
inline constexpr char kPad = '_';

using Symbol = char;
using Word = std::string;  // letters over some Alphabet, possibly empty
using KGram = std::string; // length-k window over {kPad} and the alphabet

struct Tolerances
{
  double unitary = 1e-8; // max |U^dagger U - I|
  double norm = 1e-8;    // | |psi| - 1 |
  double prob = 1e-7;    // probability comparisons
  double rank = 1e-7;    // relative residual in span bases
};

// Ordered set of distinct printable symbols. The order is canonical: it fixes
// lexicographic order on words and grams.
class Alphabet
{
public:
  Alphabet() = default;
  explicit Alphabet(std::string symbols);

  auto size() const -> std::size_t { return symbols_.size(); }
  auto symbols() const -> std::string const & { return symbols_; }
  auto index_of(Symbol c) const -> int; // -1 when absent
  auto contains(Symbol c) const -> bool { return index_of(c) >= 0; }
  auto operator[](std::size_t i) const -> Symbol { return symbols_[i]; }

  friend auto operator==(Alphabet const &, Alphabet const &) -> bool = default;

private:
  std::string symbols_;
};

// Strict weak order on grams/words: kPad first, then symbols in alphabet order,
// shorter before longer on a common prefix.
struct GramLess
{
  Alphabet const *alphabet;
  auto operator()(std::string_view a, std::string_view b) const -> bool;
};

/*
 * A k-letter measure-once quantum finite automaton. The transition table maps
 * every usable gram (padding only as a prefix, last letter a real symbol) to a
 * unitary. Plain aggregate: construction does not validate, validate_qfa does.
 */
struct MultiLetterQFA
{
  int                          k = 1;
  Alphabet                     alphabet;
  Eigen::Index                 n = 1;
  std::vector<int>             accepting; // sorted, 0-based
  CVector                      initial;
  std::map<KGram, CMatrix>     table;
};

struct ValidationReport
{
  std::vector<std::string> violations;
  auto valid() const -> bool { return violations.empty(); }
};

// All usable grams for window length k, sorted by GramLess. Count m + m^2 + ... + m^k.
auto usable_grams(int k, Alphabet const &alphabet) -> std::vector<KGram>;
auto is_usable_gram(std::string_view gram, int k, Alphabet const &alphabet) -> bool;

auto validate_qfa(MultiLetterQFA const &a, Tolerances const &tol = {}) -> ValidationReport;

// Throws InputError naming the first letter not in the alphabet.
void check_word(Alphabet const &alphabet, std::string_view word);

// Gram consulted at step j (1-based) of reading `word` with window k.
auto gram_for_step(int k, std::string_view word, std::size_t step) -> KGram;

auto transition(MultiLetterQFA const &a, std::string_view gram) -> CMatrix const &;

// Ordered product mu(gram_|w|) ... mu(gram_1); identity for the empty word.
auto word_unitary(MultiLetterQFA const &a, std::string_view word) -> CMatrix;

// Product over un-padded grams only, mu(x_{n-k+1..n}) ... mu(x_1..x_k). Needs |w| >= k.
auto eta_unitary(MultiLetterQFA const &a, std::string_view word) -> CMatrix;

auto final_state(MultiLetterQFA const &a, std::string_view word) -> CVector;

// |P_acc psi_n|^2, unclamped.
auto acceptance_probability(MultiLetterQFA const &a, std::string_view word) -> double;

// 0/1 diagonal of P_acc.
auto accepting_diagonal(MultiLetterQFA const &a) -> RVector;
auto accepting_projector(MultiLetterQFA const &a) -> CMatrix;

// |P psi|^2 given the 0/1 diagonal of P.
inline auto projected_norm2(RVector const &diag, CVector const &psi) -> double
{
  return (diag.array() * psi.array().abs2()).sum();
}

} // namespace qfaeq
