#include "qfaeq/qfa.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace qfaeq {

Alphabet::Alphabet(std::string symbols)
  : symbols_(std::move(symbols))
{
  if (symbols_.empty()) { throw InputError("alphabet is empty"); }
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto const c = static_cast<unsigned char>(symbols_[i]);
    if (symbols_[i] == kPad) { throw InputError("alphabet may not contain the padding symbol '_'"); }
    if (!std::isprint(c)) { throw InputError("alphabet symbol " + std::to_string(int(c)) + " is not printable"); }
    if (symbols_.find(symbols_[i], i + 1) != std::string::npos) {
      throw InputError(std::string("alphabet symbol '") + symbols_[i] + "' repeated");
    }
  }
}

auto Alphabet::index_of(Symbol c) const -> int
{
  auto const at = symbols_.find(c);
  return at == std::string::npos ? -1 : static_cast<int>(at);
}

auto GramLess::operator()(std::string_view a, std::string_view b) const -> bool
{
  auto rank = [this](char c) { return c == kPad ? -1 : alphabet->index_of(c); };
  auto const common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i) {
    auto const ra = rank(a[i]), rb = rank(b[i]);
    if (ra != rb) { return ra < rb; }
  }
  return a.size() < b.size();
}

auto is_usable_gram(std::string_view gram, int k, Alphabet const &alphabet) -> bool
{
  if (k < 1 || gram.size() != static_cast<std::size_t>(k)) { return false; }
  auto const first_real = gram.find_first_not_of(kPad);
  if (first_real == std::string_view::npos) { return false; }
  return std::all_of(gram.begin() + first_real, gram.end(), [&](char c) { return alphabet.contains(c); });
}

auto usable_grams(int k, Alphabet const &alphabet) -> std::vector<KGram>
{
  std::vector<KGram> out;
  std::vector<std::string> layer{""};
  for (int j = 1; j <= k; ++j) {
    std::vector<std::string> next;
    next.reserve(layer.size() * alphabet.size());
    for (auto const &u : layer) {
      for (auto c : alphabet.symbols()) { next.push_back(u + c); }
    }
    layer = std::move(next);
    for (auto const &u : layer) { out.push_back(std::string(k - j, kPad) + u); }
  }
  std::sort(out.begin(), out.end(), GramLess{&alphabet});
  return out;
}

namespace {
auto fmt_double(double v) -> std::string
{
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}
} // namespace

auto validate_qfa(MultiLetterQFA const &a, Tolerances const &tol) -> ValidationReport
{
  ValidationReport r;
  auto add = [&r](std::string s) { r.violations.push_back(std::move(s)); };

  if (a.k < 1) { add("window length k=" + std::to_string(a.k) + " must be >= 1"); }
  if (a.n < 1) { add("state count n=" + std::to_string(a.n) + " must be >= 1"); }
  if (a.alphabet.size() == 0) { add("alphabet is empty"); }
  if (!r.valid()) { return r; }

  for (std::size_t i = 0; i < a.accepting.size(); ++i) {
    auto const q = a.accepting[i];
    if (q < 0 || q >= a.n) { add("accepting state " + std::to_string(q) + " out of range [0, " + std::to_string(a.n) + ")"); }
    if (i > 0 && q <= a.accepting[i - 1]) { add("accepting states not strictly increasing at " + std::to_string(q)); }
  }

  if (a.initial.size() != a.n) {
    add("initial vector has dimension " + std::to_string(a.initial.size()) + ", expected " + std::to_string(a.n));
  } else if (!a.initial.allFinite()) {
    add("initial vector has non-finite entries");
  } else if (auto const defect = std::abs(a.initial.norm() - 1.0); defect > tol.norm) {
    add("initial vector norm defect " + fmt_double(defect) + " > tol_norm (" + fmt_double(tol.norm) + ")");
  }

  for (auto const &g : usable_grams(a.k, a.alphabet)) {
    if (!a.table.contains(g)) { add("missing usable gram " + g); }
  }
  for (auto const &[g, u] : a.table) {
    if (!is_usable_gram(g, a.k, a.alphabet)) {
      add("unexpected gram " + g);
      continue;
    }
    if (u.rows() != a.n || u.cols() != a.n) {
      add("gram " + g + ": matrix is " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) + ", expected " +
          std::to_string(a.n) + "x" + std::to_string(a.n));
      continue;
    }
    if (!u.allFinite()) {
      add("gram " + g + ": non-finite entries");
      continue;
    }
    if (auto const chk = is_unitary(u, tol.unitary); !chk.unitary) {
      add("gram " + g + ": max|U^dagger U - I| = " + fmt_double(chk.deviation) + " > tol_unitary (" +
          fmt_double(tol.unitary) + ")");
    }
  }
  return r;
}

void check_word(Alphabet const &alphabet, std::string_view word)
{
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (!alphabet.contains(word[i])) {
      throw InputError(std::string("letter '") + word[i] + "' at position " + std::to_string(i) +
                       " is not in alphabet \"" + alphabet.symbols() + "\"");
    }
  }
}

auto gram_for_step(int k, std::string_view word, std::size_t step) -> KGram
{
  if (k < 1) { throw InputError("window length must be >= 1"); }
  if (step < 1 || step > word.size()) {
    throw InputError("step " + std::to_string(step) + " out of range 1.." + std::to_string(word.size()));
  }
  auto const ku = static_cast<std::size_t>(k);
  if (step < ku) { return std::string(ku - step, kPad) + std::string(word.substr(0, step)); }
  return std::string(word.substr(step - ku, ku));
}

auto transition(MultiLetterQFA const &a, std::string_view gram) -> CMatrix const &
{
  auto const it = a.table.find(std::string(gram));
  if (it == a.table.end()) { throw InputError("missing usable gram " + std::string(gram)); }
  return it->second;
}

auto word_unitary(MultiLetterQFA const &a, std::string_view word) -> CMatrix
{
  check_word(a.alphabet, word);
  CMatrix u = CMatrix::Identity(a.n, a.n);
  for (std::size_t j = 1; j <= word.size(); ++j) { u = transition(a, gram_for_step(a.k, word, j)) * u; }
  return u;
}

auto eta_unitary(MultiLetterQFA const &a, std::string_view word) -> CMatrix
{
  check_word(a.alphabet, word);
  auto const ku = static_cast<std::size_t>(a.k);
  if (word.size() < ku) {
    throw InputError("eta_unitary needs a word of length >= k=" + std::to_string(a.k) + ", got " +
                     std::to_string(word.size()));
  }
  CMatrix u = CMatrix::Identity(a.n, a.n);
  for (std::size_t j = ku; j <= word.size(); ++j) { u = transition(a, word.substr(j - ku, ku)) * u; }
  return u;
}

auto final_state(MultiLetterQFA const &a, std::string_view word) -> CVector
{
  check_word(a.alphabet, word);
  CVector psi = a.initial;
  for (std::size_t j = 1; j <= word.size(); ++j) { psi = transition(a, gram_for_step(a.k, word, j)) * psi; }
  return psi;
}

auto accepting_diagonal(MultiLetterQFA const &a) -> RVector
{
  RVector d = RVector::Zero(a.n);
  for (auto q : a.accepting) {
    if (q < 0 || q >= a.n) { throw InputError("accepting state " + std::to_string(q) + " out of range"); }
    d[q] = 1.0;
  }
  return d;
}

auto accepting_projector(MultiLetterQFA const &a) -> CMatrix
{
  return accepting_diagonal(a).cast<Cx>().asDiagonal();
}

auto acceptance_probability(MultiLetterQFA const &a, std::string_view word) -> double
{
  return projected_norm2(accepting_diagonal(a), final_state(a, word));
}

} // namespace qfaeq
