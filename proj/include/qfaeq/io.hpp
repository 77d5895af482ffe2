#pragma once

#include "equivalence.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qfaeq {

/*
 * Automaton documents are JSON objects:
 *
 *   { "format_version": "1", "k": 2, "alphabet": "ab", "states": 2,
 *     "accepting": [1], "initial": [[1, 0], [0, 0]],
 *     "transitions": { "_a": [[re, im], ...row-major n*n...], ... },
 *     "extensions": { ... } }
 *
 * "_" stands for the padding letter in gram keys. Exactly the usable grams
 * must be present. "extensions" is optional and ignored by the parser; any
 * other unknown key is an error.
 */

struct ParseResult
{
  std::optional<MultiLetterQFA> automaton; // set only when errors is empty
  std::vector<std::string>      errors;

  auto ok() const -> bool { return errors.empty(); }
};

// Structural parse followed by validate_qfa; violations land in errors.
auto parse_qfa(std::string const &text, Tolerances const &tol = {}) -> ParseResult;

// Reads a file and parses it. I/O failures are reported as errors.
auto load_qfa(std::string const &path, Tolerances const &tol = {}) -> ParseResult;

// Canonical text: fixed key order, grams sorted with "_" first then alphabet
// order, doubles with 17 significant digits. Identical input gives identical bytes.
auto serialize_qfa(MultiLetterQFA const &a) -> std::string;

// The composite automaton (initial vector (rho + pi)/sqrt 2) with rho, pi and
// the block sizes recorded under "extensions".
auto serialize_diagonal_sum(DiagonalSumQFA const &s) -> std::string;

/*
 * Random automaton. Generator: std::mt19937_64 seeded with `seed`, standard
 * normals from std::normal_distribution. For each usable gram in canonical
 * order, a Haar unitary from the QR factorization of a complex Ginibre matrix
 * with the phases of diag(R) folded back into Q. Then a normalized complex
 * Gaussian initial vector, then the accepting set: a uniform nonempty proper
 * subset for n >= 2, a fair coin for n = 1.
 */
auto gen_random_qfa(Eigen::Index n, int k, Alphabet const &alphabet, std::uint64_t seed) -> MultiLetterQFA;

// Haar unitary of order n drawn from `rng`.
template <typename Rng> auto haar_unitary(Eigen::Index n, Rng &rng) -> CMatrix;

// Relabels states: new state perm[q] plays the role of old state q.
auto gen_permutation_variant(MultiLetterQFA const &a, std::vector<int> const &perm) -> MultiLetterQFA;

// Fixtures.
auto regex_ab_star_b() -> MultiLetterQFA; // accepts (a+b)*b with certainty
auto always_reject(Alphabet const &alphabet) -> MultiLetterQFA;

} // namespace qfaeq

#include "io_impl.hpp"
