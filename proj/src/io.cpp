#include "qfaeq/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace qfaeq {

namespace {

using nlohmann::json;

auto fmt17(double v) -> std::string
{
  if (v == 0.0) { v = 0.0; } // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

auto quoted(std::string const &s) -> std::string
{
  return json(s).dump();
}

void write_cx(std::ostringstream &os, Cx z)
{
  os << '[' << fmt17(z.real()) << ", " << fmt17(z.imag()) << ']';
}

void write_cvec(std::ostringstream &os, CVector const &v)
{
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) { os << ", "; }
    write_cx(os, v[i]);
  }
  os << ']';
}

void write_matrix(std::ostringstream &os, CMatrix const &u)
{
  os << '[';
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      if (i || j) { os << ", "; }
      write_cx(os, u(i, j));
    }
  }
  os << ']';
}

auto serialize_with(MultiLetterQFA const &a, std::string const &extensions) -> std::string
{
  std::ostringstream os;
  os << "{\n";
  os << "  \"format_version\": \"1\",\n";
  os << "  \"k\": " << a.k << ",\n";
  os << "  \"alphabet\": " << quoted(a.alphabet.symbols()) << ",\n";
  os << "  \"states\": " << a.n << ",\n";
  os << "  \"accepting\": [";
  auto acc = a.accepting;
  std::sort(acc.begin(), acc.end());
  for (std::size_t i = 0; i < acc.size(); ++i) { os << (i ? ", " : "") << acc[i]; }
  os << "],\n";
  os << "  \"initial\": ";
  write_cvec(os, a.initial);
  os << ",\n";
  os << "  \"transitions\": {";
  std::vector<KGram> keys;
  for (auto const &[g, _] : a.table) { keys.push_back(g); }
  std::sort(keys.begin(), keys.end(), GramLess{&a.alphabet});
  for (std::size_t i = 0; i < keys.size(); ++i) {
    os << (i ? ",\n" : "\n") << "    " << quoted(keys[i]) << ": ";
    write_matrix(os, a.table.at(keys[i]));
  }
  os << (keys.empty() ? "}" : "\n  }");
  if (!extensions.empty()) { os << ",\n  \"extensions\": " << extensions; }
  os << "\n}\n";
  return os.str();
}

// Tracks keys per open object so duplicates can be reported; nlohmann keeps
// only the last value for a repeated key.
struct DuplicateKeyTracker
{
  std::vector<std::set<std::string>> open;
  std::vector<std::string>           parent;
  std::string                        last_key = "(root)";
  std::vector<std::string>          *errors;

  auto operator()(int /*depth*/, json::parse_event_t event, json &parsed) -> bool
  {
    switch (event) {
    case json::parse_event_t::object_start:
      open.emplace_back();
      parent.push_back(last_key);
      break;
    case json::parse_event_t::object_end:
      if (!open.empty()) {
        open.pop_back();
        parent.pop_back();
      }
      break;
    case json::parse_event_t::key: {
      auto const key = parsed.get<std::string>();
      if (!open.empty() && !open.back().insert(key).second) {
        errors->push_back("duplicate key \"" + key + "\" in " + parent.back());
      }
      last_key = key;
      break;
    }
    default: break;
    }
    return true;
  }
};

auto parse_cx(json const &j, std::string const &where, std::vector<std::string> &errors) -> Cx
{
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    errors.push_back(where + ": expected [re, im] pair of numbers");
    return {};
  }
  Cx const z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) { errors.push_back(where + ": non-finite number"); }
  return z;
}

auto parse_int(json const &root, char const *key, std::vector<std::string> &errors) -> std::optional<long long>
{
  auto const &j = root.at(key);
  if (!j.is_number_integer()) {
    errors.push_back(std::string("\"") + key + "\": expected an integer");
    return std::nullopt;
  }
  return j.get<long long>();
}

} // namespace

auto parse_qfa(std::string const &text, Tolerances const &tol) -> ParseResult
{
  ParseResult r;
  auto       &errors = r.errors;
  json        root;
  try {
    root = json::parse(text, DuplicateKeyTracker{{}, {}, "(root)", &errors});
  } catch (json::parse_error const &e) {
    errors.push_back(std::string("syntax error: ") + e.what());
    return r;
  }
  if (!errors.empty()) { return r; }
  if (!root.is_object()) {
    errors.push_back("document root must be an object");
    return r;
  }

  static std::set<std::string> const known{"format_version", "k",           "alphabet",   "states",
                                            "accepting",      "initial",     "transitions", "extensions"};
  for (auto const &[key, _] : root.items()) {
    if (!known.contains(key)) { errors.push_back("unknown field \"" + key + "\""); }
  }
  for (auto const &key : known) {
    if (key != "extensions" && !root.contains(key)) { errors.push_back("missing field \"" + key + "\""); }
  }
  if (!errors.empty()) { return r; }

  if (root["format_version"] != "1") { errors.push_back("\"format_version\": expected \"1\""); }

  MultiLetterQFA a;
  auto const     k = parse_int(root, "k", errors);
  auto const     n = parse_int(root, "states", errors);
  if (k && *k < 1) { errors.push_back("\"k\": must be >= 1"); }
  if (n && *n < 1) { errors.push_back("\"states\": must be >= 1"); }
  if (!root["alphabet"].is_string()) {
    errors.push_back("\"alphabet\": expected a string");
  } else {
    try {
      a.alphabet = Alphabet(root["alphabet"].get<std::string>());
    } catch (InputError const &e) {
      errors.push_back(std::string("\"alphabet\": ") + e.what());
    }
  }
  if (!errors.empty()) { return r; }
  a.k = static_cast<int>(*k);
  a.n = static_cast<Eigen::Index>(*n);

  auto const &acc = root["accepting"];
  if (!acc.is_array()) {
    errors.push_back("\"accepting\": expected an array of state indices");
  } else {
    for (std::size_t i = 0; i < acc.size(); ++i) {
      if (!acc[i].is_number_integer()) {
        errors.push_back("\"accepting\"[" + std::to_string(i) + "]: expected an integer");
        continue;
      }
      a.accepting.push_back(acc[i].get<int>());
    }
  }

  auto const &init = root["initial"];
  if (!init.is_array() || static_cast<Eigen::Index>(init.size()) != a.n) {
    errors.push_back("\"initial\": expected " + std::to_string(a.n) + " [re, im] pairs");
  } else {
    a.initial.resize(a.n);
    for (Eigen::Index i = 0; i < a.n; ++i) {
      a.initial[i] = parse_cx(init[i], "\"initial\"[" + std::to_string(i) + "]", errors);
    }
  }

  auto const &tr = root["transitions"];
  if (!tr.is_object()) {
    errors.push_back("\"transitions\": expected an object keyed by gram");
  } else {
    auto const entries = static_cast<std::size_t>(a.n * a.n);
    for (auto const &[gram, mat] : tr.items()) {
      std::string const where = "\"transitions\".\"" + gram + "\"";
      if (!mat.is_array() || mat.size() != entries) {
        errors.push_back(where + ": expected " + std::to_string(entries) + " [re, im] pairs (row-major " +
                         std::to_string(a.n) + "x" + std::to_string(a.n) + ")");
        continue;
      }
      CMatrix u(a.n, a.n);
      for (std::size_t e = 0; e < entries; ++e) {
        u(static_cast<Eigen::Index>(e) / a.n, static_cast<Eigen::Index>(e) % a.n) =
          parse_cx(mat[e], where + "[" + std::to_string(e) + "]", errors);
      }
      a.table.emplace(gram, std::move(u));
    }
  }
  if (!errors.empty()) { return r; }

  if (!std::is_sorted(a.accepting.begin(), a.accepting.end())) {
    errors.push_back("\"accepting\": indices must be sorted");
  }
  auto report = validate_qfa(a, tol);
  errors.insert(errors.end(), report.violations.begin(), report.violations.end());
  if (errors.empty()) { r.automaton = std::move(a); }
  return r;
}

auto load_qfa(std::string const &path, Tolerances const &tol) -> ParseResult
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult r;
    r.errors.push_back("cannot open " + path);
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  auto r = parse_qfa(buf.str(), tol);
  for (auto &e : r.errors) { e = path + ": " + e; }
  return r;
}

auto serialize_qfa(MultiLetterQFA const &a) -> std::string
{
  return serialize_with(a, {});
}

auto serialize_diagonal_sum(DiagonalSumQFA const &s) -> std::string
{
  CVector const      theta = (s.rho + s.pi) / std::sqrt(2.0);
  std::ostringstream ext;
  ext << "{\n    \"diagonal_sum\": {\n";
  ext << "      \"blocks\": [" << s.n1 << ", " << s.n2 << "],\n";
  ext << "      \"rho\": ";
  write_cvec(ext, s.rho);
  ext << ",\n      \"pi\": ";
  write_cvec(ext, s.pi);
  ext << "\n    }\n  }";
  return serialize_with(s.as_qfa(theta), ext.str());
}

auto gen_random_qfa(Eigen::Index n, int k, Alphabet const &alphabet, std::uint64_t seed) -> MultiLetterQFA
{
  if (n < 1) { throw InputError("state count must be >= 1"); }
  if (k < 1) { throw InputError("window length must be >= 1"); }
  if (alphabet.size() == 0) { throw InputError("alphabet is empty"); }

  std::mt19937_64 rng(seed);
  MultiLetterQFA  a;
  a.k = k;
  a.alphabet = alphabet;
  a.n = n;
  for (auto const &g : usable_grams(k, alphabet)) { a.table.emplace(g, haar_unitary(n, rng)); }

  std::normal_distribution<double> normal(0.0, 1.0);
  a.initial.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double const re = normal(rng);
    double const im = normal(rng);
    a.initial[i] = Cx(re, im);
  }
  a.initial.normalize();

  std::bernoulli_distribution coin(0.5);
  if (n == 1) {
    if (coin(rng)) { a.accepting.push_back(0); }
  } else {
    std::vector<int> chosen;
    do {
      chosen.clear();
      for (Eigen::Index q = 0; q < n; ++q) {
        if (coin(rng)) { chosen.push_back(static_cast<int>(q)); }
      }
    } while (chosen.empty() || static_cast<Eigen::Index>(chosen.size()) == n);
    a.accepting = std::move(chosen);
  }
  return a;
}

auto gen_permutation_variant(MultiLetterQFA const &a, std::vector<int> const &perm) -> MultiLetterQFA
{
  if (static_cast<Eigen::Index>(perm.size()) != a.n) {
    throw InputError("permutation has " + std::to_string(perm.size()) + " entries, automaton has " +
                     std::to_string(a.n) + " states");
  }
  std::vector<bool> seen(perm.size(), false);
  for (auto const p : perm) {
    if (p < 0 || p >= a.n || seen[p]) { throw InputError("not a permutation of 0..n-1"); }
    seen[p] = true;
  }
  Eigen::PermutationMatrix<Eigen::Dynamic> P(a.n);
  for (Eigen::Index q = 0; q < a.n; ++q) { P.indices()[q] = perm[q]; }

  MultiLetterQFA out = a;
  out.initial = P * a.initial;
  for (auto &[g, u] : out.table) { u = P * a.table.at(g) * P.transpose(); }
  out.accepting.clear();
  for (auto const q : a.accepting) { out.accepting.push_back(perm[q]); }
  std::sort(out.accepting.begin(), out.accepting.end());
  return out;
}

auto regex_ab_star_b() -> MultiLetterQFA
{
  MultiLetterQFA a;
  a.k = 2;
  a.alphabet = Alphabet("ab");
  a.n = 2;
  a.accepting = {1};
  a.initial = CVector::Unit(2, 0);
  CMatrix const id = CMatrix::Identity(2, 2);
  CMatrix       x(2, 2);
  x << 0, 1, 1, 0;
  for (auto const *g : {"_a", "aa", "bb"}) { a.table.emplace(g, id); }
  for (auto const *g : {"_b", "ab", "ba"}) { a.table.emplace(g, x); }
  return a;
}

auto always_reject(Alphabet const &alphabet) -> MultiLetterQFA
{
  MultiLetterQFA a;
  a.k = 1;
  a.alphabet = alphabet;
  a.n = 1;
  a.initial = CVector::Ones(1);
  for (auto const &g : usable_grams(1, alphabet)) { a.table.emplace(g, CMatrix::Identity(1, 1)); }
  return a;
}

} // namespace qfaeq
