#include "qfaeq/equivalence.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace qfaeq {

namespace {

void require_same_alphabet(MultiLetterQFA const &a1, MultiLetterQFA const &a2)
{
  if (!(a1.alphabet == a2.alphabet)) {
    throw InputError("alphabet mismatch: \"" + a1.alphabet.symbols() + "\" vs \"" + a2.alphabet.symbols() + "\"");
  }
}

auto ipow(std::uint64_t base, int exp) -> std::uint64_t
{
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) { r *= base; }
  return r;
}

auto last_chars(std::string_view gram, int count) -> std::string
{
  return std::string(gram.substr(gram.size() - static_cast<std::size_t>(count)));
}

auto base_stats(Method method, MultiLetterQFA const &a1, MultiLetterQFA const &a2) -> DeciderStats
{
  DeciderStats st;
  st.method = method;
  int const k = std::max(a1.k, a2.k);
  auto const m = a1.alphabet.size();
  st.class_count = suffix_class_count(k, m);
  st.class_cap = static_cast<std::uint64_t>(a1.n * a1.n + a2.n * a2.n);
  if (m == 1) { st.bound_unary = unary_length_bound(a1.n, a2.n, k); }
  st.bound_reference = reference_length_bound(a1.n, a2.n, m, k);
  return st;
}

} // namespace

auto DiagonalSumQFA::entry(std::string_view gram) const -> CMatrix
{
  auto const it = blocks.find(std::string(gram));
  if (it == blocks.end()) { throw InputError("missing usable gram " + std::string(gram)); }
  CMatrix u = CMatrix::Zero(n(), n());
  u.topLeftCorner(n1, n1) = it->second.first;
  u.bottomRightCorner(n2, n2) = it->second.second;
  return u;
}

auto DiagonalSumQFA::accepting_diagonal() const -> RVector
{
  RVector d(n());
  d << acc1, acc2;
  return d;
}

auto DiagonalSumQFA::as_qfa(CVector const &initial) const -> MultiLetterQFA
{
  if (initial.size() != n()) { throw DimensionError("diagonal sum initial vector has wrong dimension"); }
  MultiLetterQFA out;
  out.k = k;
  out.alphabet = alphabet;
  out.n = n();
  out.initial = initial;
  auto const d = accepting_diagonal();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d[i] > 0.5) { out.accepting.push_back(static_cast<int>(i)); }
  }
  for (auto const &[g, _] : blocks) { out.table.emplace(g, entry(g)); }
  return out;
}

auto diagonal_sum(MultiLetterQFA const &a1, MultiLetterQFA const &a2) -> DiagonalSumQFA
{
  require_same_alphabet(a1, a2);
  DiagonalSumQFA s;
  s.a1 = a1;
  s.a2 = a2;
  s.k = std::max(a1.k, a2.k);
  s.alphabet = a1.alphabet;
  s.n1 = a1.n;
  s.n2 = a2.n;
  for (auto const &g : usable_grams(s.k, s.alphabet)) {
    s.blocks.emplace(g, std::make_pair(transition(a1, last_chars(g, a1.k)), transition(a2, last_chars(g, a2.k))));
  }
  s.rho = CVector::Zero(s.n());
  s.rho.head(s.n1) = a1.initial;
  s.pi = CVector::Zero(s.n());
  s.pi.tail(s.n2) = a2.initial;
  s.acc1 = accepting_diagonal(a1);
  s.acc2 = accepting_diagonal(a2);
  return s;
}

auto observable(MultiLetterQFA const &a, std::string_view word) -> CMatrix
{
  CMatrix const u = word_unitary(a, word);
  return u.adjoint() * accepting_projector(a) * u;
}

auto initial_density_pair(DiagonalSumQFA const &s) -> DensityPair
{
  CVector const psi1 = s.a1.initial, psi2 = s.a2.initial;
  return {psi1 * psi1.adjoint(), psi2 * psi2.adjoint()};
}

auto forward_density_step(DensityPair const &d, DiagonalSumQFA const &s, std::string_view gram) -> DensityPair
{
  if (!is_usable_gram(gram, s.k, s.alphabet)) { throw InputError("unusable gram " + std::string(gram)); }
  auto const &[u1, u2] = s.blocks.at(std::string(gram));
  DensityPair out{u1 * d.d1 * u1.adjoint(), u2 * d.d2 * u2.adjoint()};
  // Conjugation preserves hermiticity exactly in exact arithmetic; drop the rounding drift.
  out.d1 = (0.5 * (out.d1 + out.d1.adjoint())).eval();
  out.d2 = (0.5 * (out.d2 + out.d2.adjoint())).eval();
  return out;
}

auto pair_probabilities(DensityPair const &d, DiagonalSumQFA const &s) -> std::pair<double, double>
{
  double p1 = 0.0, p2 = 0.0;
  for (Eigen::Index i = 0; i < s.n1; ++i) { p1 += s.acc1[i] * std::real(d.d1(i, i)); }
  for (Eigen::Index i = 0; i < s.n2; ++i) { p2 += s.acc2[i] * std::real(d.d2(i, i)); }
  return {p1, p2};
}

auto vectorize_pair(DensityPair const &d) -> RVector
{
  RVector const v1 = vectorize_hermitian(d.d1), v2 = vectorize_hermitian(d.d2);
  RVector out(v1.size() + v2.size());
  out << v1, v2;
  return out;
}

auto initial_class(int k) -> std::string
{
  return std::string(static_cast<std::size_t>(std::max(k - 1, 0)), kPad);
}

auto class_of_word(int k, std::string_view word) -> std::string
{
  auto const width = static_cast<std::size_t>(std::max(k - 1, 0));
  if (word.size() < width) { return std::string(width - word.size(), kPad) + std::string(word); }
  return std::string(word.substr(word.size() - width));
}

auto class_shift(std::string_view cls, Symbol a) -> std::string
{
  if (cls.empty()) { return {}; }
  return std::string(cls.substr(1)) + a;
}

auto suffix_class_count(int k, std::size_t m) -> std::uint64_t
{
  std::uint64_t c = ipow(m, k - 1);
  for (int l = 0; l <= k - 2; ++l) { c += ipow(m, l); }
  return c;
}

auto unary_length_bound(Eigen::Index n1, Eigen::Index n2, int k) -> std::uint64_t
{
  return static_cast<std::uint64_t>(n1 * n1 + n2 * n2 - 1 + k);
}

auto reference_length_bound(Eigen::Index n1, Eigen::Index n2, std::size_t m, int k) -> std::uint64_t
{
  auto const n = static_cast<std::uint64_t>(n1 + n2);
  auto const mk = ipow(m, k - 1);
  return n * n * mk - mk + static_cast<std::uint64_t>(k);
}

auto method_name(Method m) -> std::string
{
  switch (m) {
  case Method::Auto: return "auto";
  case Method::UnaryBound: return "unary-bound";
  case Method::SpanClosure: return "span-closure";
  }
  return "?";
}

auto parse_method(std::string_view s) -> Method
{
  if (s == "auto") { return Method::Auto; }
  if (s == "unary-bound" || s == "unary") { return Method::UnaryBound; }
  if (s == "span" || s == "span-closure") { return Method::SpanClosure; }
  throw InputError("unknown method \"" + std::string(s) + "\" (expected auto, unary-bound or span)");
}

auto decide_unary_bound(MultiLetterQFA const &a1, MultiLetterQFA const &a2, Tolerances const &tol)
  -> EquivalenceVerdict
{
  require_same_alphabet(a1, a2);
  if (a1.alphabet.size() != 1) {
    throw InputError("unary-bound method needs a one-letter alphabet, got \"" + a1.alphabet.symbols() + "\"");
  }
  EquivalenceVerdict v;
  v.stats = base_stats(Method::UnaryBound, a1, a2);
  auto const bound = *v.stats.bound_unary;
  auto const sigma = a1.alphabet[0];
  auto const acc1 = accepting_diagonal(a1), acc2 = accepting_diagonal(a2);

  Word    w;
  CVector psi1 = a1.initial, psi2 = a2.initial;
  for (std::uint64_t j = 0;; ++j) {
    ++v.stats.words_evaluated;
    v.stats.effective_z = j;
    double const p1 = projected_norm2(acc1, psi1), p2 = projected_norm2(acc2, psi2);
    if (std::abs(p1 - p2) > tol.prob) {
      v.counterexample = Counterexample{w, p1, p2};
      return v;
    }
    if (j == bound) { break; }
    w.push_back(sigma);
    psi1 = transition(a1, gram_for_step(a1.k, w, w.size())) * psi1;
    psi2 = transition(a2, gram_for_step(a2.k, w, w.size())) * psi2;
  }
  return v;
}

auto decide_span_closure(MultiLetterQFA const &a1,
                         MultiLetterQFA const &a2,
                         Tolerances const    &tol,
                         LayerObserver const &observer) -> EquivalenceVerdict
{
  auto const s = diagonal_sum(a1, a2);
  EquivalenceVerdict v;
  v.stats = base_stats(Method::SpanClosure, a1, a2);
  auto const cap = v.stats.class_cap;
  auto const total_cap = v.stats.class_count * cap;
  auto const ambient = static_cast<Eigen::Index>(cap);

  struct Node
  {
    Word        word;
    DensityPair density;
    std::string cls;
  };
  std::map<std::string, SpanBasis<double>> bases;
  std::deque<Node>                         queue;
  queue.push_back({Word{}, initial_density_pair(s), initial_class(s.k)});

  std::size_t layer = 0;
  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    if (node.word.size() > layer) {
      if (observer) { observer(layer, bases); }
      layer = node.word.size();
    }
    ++v.stats.words_evaluated;
    v.stats.effective_z = std::max<std::uint64_t>(v.stats.effective_z, node.word.size());

    auto const [p1, p2] = pair_probabilities(node.density, s);
    if (std::abs(p1 - p2) > tol.prob) {
      v.counterexample = Counterexample{node.word, p1, p2};
      return v;
    }

    auto &basis = bases.try_emplace(node.cls, ambient, tol.rank).first->second;
    if (!basis.try_insert(vectorize_pair(node.density))) { continue; }

    auto &count = v.stats.insertions_per_class[node.cls];
    ++count;
    ++v.stats.total_insertions;
    if (count > cap || v.stats.total_insertions > total_cap) {
      throw CapViolation("class \"" + node.cls + "\" basis reached " + std::to_string(count) +
                         " members (cap " + std::to_string(cap) + "); rank tolerance too tight");
    }
    for (auto const a : s.alphabet.symbols()) {
      auto gram = node.cls + a;
      queue.push_back({node.word + a, forward_density_step(node.density, s, gram), class_shift(node.cls, a)});
    }
  }
  if (observer) { observer(layer, bases); }
  return v;
}

auto decide_equivalence(MultiLetterQFA const &a1, MultiLetterQFA const &a2, DecideOptions const &opts)
  -> EquivalenceVerdict
{
  require_same_alphabet(a1, a2);
  auto method = opts.method;
  if (method == Method::Auto) { method = a1.alphabet.size() == 1 ? Method::UnaryBound : Method::SpanClosure; }
  return method == Method::UnaryBound ? decide_unary_bound(a1, a2, opts.tol) : decide_span_closure(a1, a2, opts.tol);
}

auto exhaustive_check(MultiLetterQFA const &a1,
                      MultiLetterQFA const &a2,
                      std::uint64_t         max_length,
                      double                tol_prob,
                      std::uint64_t         budget) -> OracleResult
{
  require_same_alphabet(a1, a2);
  auto const m = a1.alphabet.size();
  std::uint64_t total = 0, layer_size = 1;
  for (std::uint64_t l = 0; l <= max_length; ++l) {
    total += layer_size;
    if (total > budget) {
      throw Error("oracle budget exceeded: words up to length " + std::to_string(max_length) + " over " +
                  std::to_string(m) + " letters exceed " + std::to_string(budget));
    }
    if (l < max_length && layer_size > std::numeric_limits<std::uint64_t>::max() / m) {
      throw Error("oracle budget exceeded");
    }
    layer_size *= m;
  }

  auto const acc1 = accepting_diagonal(a1), acc2 = accepting_diagonal(a2);
  OracleResult out;
  out.max_length = max_length;

  // Depth-first within one layer keeps memory at O(length) while visiting
  // words of that layer in lexicographic order.
  std::vector<CVector> st1(max_length + 1), st2(max_length + 1);
  st1[0] = a1.initial;
  st2[0] = a2.initial;
  Word w;
  std::function<bool(std::uint64_t)> walk = [&](std::uint64_t target) -> bool {
    auto const d = w.size();
    if (d == target) {
      ++out.words_checked;
      double const p1 = projected_norm2(acc1, st1[d]), p2 = projected_norm2(acc2, st2[d]);
      if (std::abs(p1 - p2) > tol_prob) {
        out.counterexample = Counterexample{w, p1, p2};
        return true;
      }
      return false;
    }
    for (auto const a : a1.alphabet.symbols()) {
      w.push_back(a);
      st1[d + 1] = transition(a1, gram_for_step(a1.k, w, w.size())) * st1[d];
      st2[d + 1] = transition(a2, gram_for_step(a2.k, w, w.size())) * st2[d];
      bool const hit = walk(target);
      w.pop_back();
      if (hit) { return true; }
    }
    return false;
  };
  for (std::uint64_t l = 0; l <= max_length; ++l) {
    if (walk(l)) { return out; }
  }
  return out;
}

} // namespace qfaeq
