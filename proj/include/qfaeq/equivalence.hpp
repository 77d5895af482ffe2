#pragma once

#include "qfa.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace qfaeq {

/*
 * Block-diagonal composite of two automata over the same alphabet. The
 * window is k = max(k1, k2); for a gram g the shorter-window automaton reads
 * the last k_i letters of g. rho and pi embed the two initial vectors.
 */
struct DiagonalSumQFA
{
  MultiLetterQFA                                  a1, a2;
  int                                             k = 1;
  Alphabet                                        alphabet;
  Eigen::Index                                    n1 = 0, n2 = 0;
  std::map<KGram, std::pair<CMatrix, CMatrix>>    blocks; // gram -> (block 1, block 2)
  CVector                                         rho, pi;
  RVector                                         acc1, acc2; // 0/1 diagonals of the block projectors

  auto n() const -> Eigen::Index { return n1 + n2; }
  auto entry(std::string_view gram) const -> CMatrix; // full (n1+n2)x(n1+n2) block matrix
  auto accepting_diagonal() const -> RVector;         // P_acc,1 (+) P_acc,2

  // The composite as a plain automaton with the given initial vector (dim n1+n2).
  auto as_qfa(CVector const &initial) const -> MultiLetterQFA;
};

auto diagonal_sum(MultiLetterQFA const &a1, MultiLetterQFA const &a2) -> DiagonalSumQFA;

// mu(w)^dagger P_acc mu(w).
auto observable(MultiLetterQFA const &a, std::string_view word) -> CMatrix;

// Forward densities mu_i(w) psi_i psi_i^dagger mu_i(w)^dagger, one per block.
struct DensityPair
{
  CMatrix d1, d2;
};

auto initial_density_pair(DiagonalSumQFA const &s) -> DensityPair;
auto forward_density_step(DensityPair const &d, DiagonalSumQFA const &s, std::string_view gram) -> DensityPair;
auto pair_probabilities(DensityPair const &d, DiagonalSumQFA const &s) -> std::pair<double, double>;
auto vectorize_pair(DensityPair const &d) -> RVector;

// Suffix classes: the padded (k-1)-letter window that, together with the next
// letter, selects the next gram.
auto initial_class(int k) -> std::string;
auto class_of_word(int k, std::string_view word) -> std::string;
auto class_shift(std::string_view cls, Symbol a) -> std::string;
auto suffix_class_count(int k, std::size_t m) -> std::uint64_t;

// (n1^2 + n2^2 - 1) + k: unary equivalence is decided by words up to this length.
auto unary_length_bound(Eigen::Index n1, Eigen::Index n2, int k) -> std::uint64_t;
// n^2 m^(k-1) - m^(k-1) + k with n = n1 + n2; reported for comparison only.
auto reference_length_bound(Eigen::Index n1, Eigen::Index n2, std::size_t m, int k) -> std::uint64_t;

enum class Method
{
  Auto,
  UnaryBound,
  SpanClosure,
};

auto method_name(Method m) -> std::string;
auto parse_method(std::string_view s) -> Method; // auto | unary-bound | span | span-closure

struct DeciderStats
{
  Method                                method = Method::Auto;
  std::uint64_t                         words_evaluated = 0;
  std::uint64_t                         effective_z = 0; // longest word examined
  std::map<std::string, std::uint64_t>  insertions_per_class;
  std::uint64_t                         total_insertions = 0;
  std::uint64_t                         class_count = 0;    // C
  std::uint64_t                         class_cap = 0;      // n1^2 + n2^2
  std::optional<std::uint64_t>          bound_unary;        // set for unary alphabets
  std::uint64_t                         bound_reference = 0;

  auto classes_touched() const -> std::size_t { return insertions_per_class.size(); }
};

struct Counterexample
{
  Word   word;
  double p1 = 0.0;
  double p2 = 0.0;
};

struct EquivalenceVerdict
{
  std::optional<Counterexample> counterexample;
  DeciderStats                  stats;

  auto equivalent() const -> bool { return !counterexample.has_value(); }
};

// Words sigma^0 .. sigma^bound compared directly. Requires a one-letter alphabet.
auto decide_unary_bound(MultiLetterQFA const &a1, MultiLetterQFA const &a2, Tolerances const &tol = {})
  -> EquivalenceVerdict;

// Called after each completed BFS layer with the per-class bases.
using LayerObserver = std::function<void(std::size_t layer, std::map<std::string, SpanBasis<double>> const &)>;

/*
 * Breadth-first span closure over forward density pairs, one basis per suffix
 * class. A word whose density pair adds no direction to its class basis is not
 * extended. Terminates after at most 1 + m * C * (n1^2 + n2^2) words. Throws
 * CapViolation if a class basis would exceed n1^2 + n2^2 members.
 */
auto decide_span_closure(MultiLetterQFA const &a1,
                         MultiLetterQFA const &a2,
                         Tolerances const    &tol = {},
                         LayerObserver const &observer = {}) -> EquivalenceVerdict;

struct DecideOptions
{
  Method     method = Method::Auto;
  Tolerances tol;
};

auto decide_equivalence(MultiLetterQFA const &a1, MultiLetterQFA const &a2, DecideOptions const &opts = {})
  -> EquivalenceVerdict;

struct OracleResult
{
  std::optional<Counterexample> counterexample; // empty: clean up to max_length, not a proof
  std::uint64_t                 max_length = 0;
  std::uint64_t                 words_checked = 0;
};

inline constexpr std::uint64_t kDefaultOracleBudget = 20'000'000;

// Every word of length 0..max_length in layer-then-lexicographic order.
auto exhaustive_check(MultiLetterQFA const &a1,
                      MultiLetterQFA const &a2,
                      std::uint64_t         max_length,
                      double                tol_prob = Tolerances{}.prob,
                      std::uint64_t         budget = kDefaultOracleBudget) -> OracleResult;

} // namespace qfaeq
