#pragma once

// Frobenius-family orchestration: grid classification, proposition fixtures,
// conjugator search, catalog persistence and rendering.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <complex>
#include <condition_variable>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cfsail/errors.hpp"
#include "cfsail/exactnum.hpp"
#include "cfsail/lattice.hpp"
#include "cfsail/numeric.hpp"
#include "cfsail/sail.hpp"
#include "cfsail/torus.hpp"
#include "cfsail/units.hpp"

namespace cfsail {

// ---------------------------------------------------------------------------
// Pipeline

/// A and -A define the same continued fraction.
inline IntegerOperator3 normalized(const IntegerOperator3& a) { return a.det() < 0 ? a.negated() : a; }

struct PipelineResult {
  FundamentalDomain domain;
  TorusTriangulation torus;
  CanonicalCode code;
};

inline PipelineResult run_pipeline(const IntegerOperator3& a, const Vec3& seed = Vec3(0, 0, 1),
                                   const SailOptions& opt = {}) {
  IntegerOperator3 b = normalized(a);
  FundamentalDomain fd = build_fundamental_domain(b, seed, opt);
  TorusTriangulation t = quotient(fd);
  CanonicalCode c = canonical_code(t);
  return {std::move(fd), std::move(t), std::move(c)};
}

/// One seed per sail up to the central symmetry, each the smallest integer
/// point of its orthant in the max norm, ties broken lexicographically.
inline std::vector<Vec3> sail_seeds(const SpectralData& s) {
  std::map<std::array<int, 3>, Vec3> found;
  for (long long r = 1; r <= 64 && found.size() < 4; ++r)
    for (long long x = -r; x <= r; ++x)
      for (long long y = -r; y <= r; ++y)
        for (long long z = -r; z <= r; ++z) {
          if (std::max({std::llabs(x), std::llabs(y), std::llabs(z)}) != r) continue;
          Vec3 p(x, y, z);
          std::array<int, 3> sg{};
          bool zero = false;
          for (int k = 0; k < 3; ++k) {
            sg[k] = sign_at(s.forms[k], p);
            zero = zero || sg[k] == 0;
          }
          if (zero || sg[0] < 0) continue;
          found.emplace(sg, p);
        }
  if (found.size() < 4) throw Error(ErrorKind::LimitExceeded, "no integer point found in some orthant");
  std::vector<Vec3> out;
  for (const auto& [sg, p] : found) out.push_back(p);
  return out;
}

/// Sorted canonical codes of the four sails of the continued fraction
/// (sails in opposite orthants are identified by -I).
inline std::vector<std::string> fraction_codes(const IntegerOperator3& a, const SailOptions& opt = {}) {
  IntegerOperator3 b = normalized(a);
  SpectralData s = spectral_data(b.matrix());
  UnitBasis basis = find_positive_unit_basis(s, opt.units);
  std::vector<std::string> codes;
  for (const auto& seed : sail_seeds(s)) {
    FundamentalDomain fd = build_fundamental_domain(s, basis, seed, opt);
    codes.push_back(canonical_code(quotient(fd)).text);
  }
  std::sort(codes.begin(), codes.end());
  return codes;
}

// ---------------------------------------------------------------------------
// Input parsing

/// Comma-separated integers.
inline std::vector<BigInt> parse_integers(const std::string& s) {
  std::vector<BigInt> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size();
    std::string tok = s.substr(pos, end - pos);
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    bool ok = !tok.empty();
    for (std::size_t i = 0; i < tok.size() && ok; ++i)
      ok = std::isdigit(static_cast<unsigned char>(tok[i])) || (i == 0 && (tok[i] == '-' || tok[i] == '+') && tok.size() > 1);
    if (!ok) throw Error(ErrorKind::InvalidInput, "'" + s + "' is not a list of integers");
    out.emplace_back(tok[0] == '+' ? tok.substr(1) : tok);
    pos = end + 1;
  }
  return out;
}

/// Nine integers row-major, or "frobenius:m,n".
inline IntegerOperator3 parse_operator(const std::string& s) {
  const std::string prefix = "frobenius:";
  if (s.rfind(prefix, 0) == 0) {
    auto v = parse_integers(s.substr(prefix.size()));
    if (v.size() != 2) throw Error(ErrorKind::InvalidInput, "expected frobenius:m,n");
    return frobenius(v[0], v[1]);
  }
  auto v = parse_integers(s);
  if (v.size() != 9) throw Error(ErrorKind::InvalidInput, "expected nine comma-separated integers");
  Mat3Z m;
  for (int i = 0; i < 9; ++i) m[i / 3][i % 3] = v[i];
  return IntegerOperator3(m);
}

inline Vec3 parse_vector(const std::string& s) {
  auto v = parse_integers(s);
  if (v.size() != 3) throw Error(ErrorKind::InvalidInput, "expected three comma-separated integers");
  return Vec3(v[0], v[1], v[2]);
}

// ---------------------------------------------------------------------------
// Grid cells

enum class CellClass { ComplexRoots, RootPlusOne, RootMinusOne, Cubic };

inline const char* to_string(CellClass c) {
  switch (c) {
    case CellClass::ComplexRoots: return "complex-roots";
    case CellClass::RootPlusOne: return "root-plus-one";
    case CellClass::RootMinusOne: return "root-minus-one";
    case CellClass::Cubic: return "cubic";
  }
  return "unknown";
}

inline CellClass parse_cell_class(const std::string& s) {
  for (auto c : {CellClass::ComplexRoots, CellClass::RootPlusOne, CellClass::RootMinusOne, CellClass::Cubic})
    if (s == to_string(c)) return c;
  throw Error(ErrorKind::InvalidInput, "unknown cell class '" + s + "'");
}

struct FaceSummary {
  std::size_t vertices = 0, edges = 0, faces = 0;
  std::vector<std::size_t> degrees;  // ascending

  std::string str() const {
    std::ostringstream os;
    os << "V" << vertices << " E" << edges << " F" << faces << " (";
    for (std::size_t i = 0; i < degrees.size(); ++i) os << (i ? "," : "") << degrees[i];
    os << ")";
    return os.str();
  }
  friend bool operator==(const FaceSummary& a, const FaceSummary& b) {
    return std::tie(a.vertices, a.edges, a.faces, a.degrees) == std::tie(b.vertices, b.edges, b.faces, b.degrees);
  }
};

inline FaceSummary summarize(const TorusTriangulation& t) {
  FaceSummary s{t.num_vertices, t.num_edges, t.num_faces(), {}};
  for (const auto& f : t.faces) s.degrees.push_back(f.degree());
  std::sort(s.degrees.begin(), s.degrees.end());
  return s;
}

struct GridCell {
  long long m = 0, n = 0;
  CellClass cls = CellClass::Cubic;
  bool star = false;  // chi(1) = 0
  bool hash = false;  // chi(-1) = 0
  bool gray = false;  // exactly one real root
  std::array<long long, 3> chi{};  // c2, c1, c0
  std::optional<std::string> code;
  std::optional<FaceSummary> faces;
  std::optional<std::string> field_discriminant;  // squarefree part of disc(chi)
  std::optional<std::string> error;
  std::optional<TorusTriangulation> torus;  // kept for rendering, not persisted

  friend bool operator==(const GridCell& a, const GridCell& b) {
    return std::tie(a.m, a.n, a.cls, a.star, a.hash, a.gray, a.chi, a.code, a.faces, a.field_discriminant,
                    a.error) == std::tie(b.m, b.n, b.cls, b.star, b.hash, b.gray, b.chi, b.code, b.faces,
                                         b.field_discriminant, b.error);
  }
};

struct ClassifyOptions {
  bool run_pipeline = true;
  SailOptions sail;
};

inline GridCell classify_cell(long long m, long long n, const ClassifyOptions& opt = {}) {
  GridCell c;
  c.m = m;
  c.n = n;
  IntegerOperator3 a = frobenius(BigInt(m), BigInt(n));
  CubicPoly chi = char_poly(a);
  c.chi = {static_cast<long long>(chi.c2), static_cast<long long>(chi.c1), static_cast<long long>(chi.c0)};
  auto roots = integer_roots(chi);
  c.star = std::find(roots.begin(), roots.end(), BigInt(1)) != roots.end();
  c.hash = std::find(roots.begin(), roots.end(), BigInt(-1)) != roots.end();
  // a repeated root of a real cubic is real, so one distinct real root
  // means a complex pair only when chi is squarefree
  c.gray = chi.discriminant() != 0 && count_distinct_real_roots(chi) == 1;
  if (c.star)
    c.cls = CellClass::RootPlusOne;
  else if (c.hash)
    c.cls = CellClass::RootMinusOne;
  else if (c.gray)
    c.cls = CellClass::ComplexRoots;
  else
    c.cls = CellClass::Cubic;
  if (c.cls != CellClass::Cubic) return c;
  c.field_discriminant = squarefree_core(chi.discriminant()).str();
  if (!opt.run_pipeline) return c;
  try {
    PipelineResult r = run_pipeline(a, Vec3(0, 0, 1), opt.sail);
    c.code = r.code.text;
    c.faces = summarize(r.torus);
    c.torus = std::move(r.torus);
  } catch (const Error& e) {
    c.error = e.what();
  }
  return c;
}

// ---------------------------------------------------------------------------
// Catalog persistence

struct Catalog {
  int version = 1;
  std::vector<GridCell> cells;

  friend bool operator==(const Catalog& a, const Catalog& b) { return a.version == b.version && a.cells == b.cells; }
};

inline nlohmann::ordered_json to_json(const GridCell& c) {
  nlohmann::ordered_json j;
  j["m"] = c.m;
  j["n"] = c.n;
  j["class"] = to_string(c.cls);
  j["chi"] = {c.chi[0], c.chi[1], c.chi[2]};
  j["markers"] = std::string(c.star ? "*" : "") + (c.hash ? "#" : "");
  j["gray"] = c.gray;
  if (c.code) j["code"] = *c.code;
  if (c.faces) j["faces"] = {{"vertices", c.faces->vertices},
                             {"edges", c.faces->edges},
                             {"faces", c.faces->faces},
                             {"degrees", c.faces->degrees}};
  if (c.field_discriminant) j["field_discriminant"] = *c.field_discriminant;
  if (c.error) j["error"] = *c.error;
  return j;
}

inline GridCell cell_from_json(const nlohmann::ordered_json& j) {
  GridCell c;
  c.m = j.at("m").get<long long>();
  c.n = j.at("n").get<long long>();
  c.cls = parse_cell_class(j.at("class").get<std::string>());
  auto chi = j.at("chi").get<std::vector<long long>>();
  if (chi.size() != 3) throw Error(ErrorKind::InvalidInput, "chi must have three coefficients");
  c.chi = {chi[0], chi[1], chi[2]};
  auto mk = j.value("markers", std::string());
  c.star = mk.find('*') != std::string::npos;
  c.hash = mk.find('#') != std::string::npos;
  c.gray = j.value("gray", false);
  if (j.contains("code")) c.code = j["code"].get<std::string>();
  if (j.contains("faces")) {
    const auto& f = j["faces"];
    c.faces = FaceSummary{f.at("vertices").get<std::size_t>(), f.at("edges").get<std::size_t>(),
                          f.at("faces").get<std::size_t>(), f.at("degrees").get<std::vector<std::size_t>>()};
  }
  if (j.contains("field_discriminant")) c.field_discriminant = j["field_discriminant"].get<std::string>();
  if (j.contains("error")) c.error = j["error"].get<std::string>();
  return c;
}

inline std::string render_catalog(const Catalog& cat) {
  nlohmann::ordered_json j;
  j["version"] = cat.version;
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : cat.cells) j["cells"].push_back(to_json(c));
  return j.dump(2) + "\n";
}

inline Catalog parse_catalog(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("catalog is not valid JSON: ") + e.what());
  }
  Catalog cat;
  try {
    cat.version = j.at("version").get<int>();
    for (const auto& c : j.at("cells")) cat.cells.push_back(cell_from_json(c));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed catalog: ") + e.what());
  }
  return cat;
}

/// Writes through a temporary file so readers never see a half-written catalog.
inline void write_catalog(const std::string& path, const Catalog& cat) {
  std::string tmp = path + ".tmp";
  {
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + tmp);
    std::string s = render_catalog(cat);
    std::fwrite(s.data(), 1, s.size(), f);
    std::fclose(f);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error(ErrorKind::InvalidInput, "cannot replace " + path);
}

// ---------------------------------------------------------------------------
// Grid runs

struct IntRange {
  long long lo = 0, hi = -1;  // inclusive; empty when hi < lo
  long long size() const { return hi < lo ? 0 : hi - lo + 1; }
};

/// Parses "a..b".
inline IntRange parse_range(const std::string& s) {
  auto pos = s.find("..");
  if (pos == std::string::npos) throw Error(ErrorKind::InvalidInput, "range '" + s + "' is not of the form a..b");
  try {
    std::size_t u = 0, v = 0;
    long long lo = std::stoll(s.substr(0, pos), &u);
    long long hi = std::stoll(s.substr(pos + 2), &v);
    if (u != pos || v != s.size() - pos - 2) throw std::invalid_argument(s);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidInput, "range '" + s + "' is not of the form a..b");
  }
}

struct GridOptions {
  unsigned jobs = 1;
  ClassifyOptions classify;
  const std::atomic<bool>* stop = nullptr;             // stop dispatching new cells when set
  std::function<void(const Catalog&)> persist;          // called from the calling thread only
  std::size_t persist_every = 16;
};

/// Cells are classified by worker threads; the calling thread is the single
/// writer. Cells come out sorted by (m, n) whatever the completion order.
inline Catalog run_grid(const IntRange& mr, const IntRange& nr, const GridOptions& opt = {}) {
  std::vector<std::pair<long long, long long>> work;
  for (long long m = mr.lo; m <= mr.hi; ++m)
    for (long long n = nr.lo; n <= nr.hi; ++n) work.emplace_back(m, n);
  std::vector<std::optional<GridCell>> slots(work.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::condition_variable cv;
  std::size_t done = 0, active = std::max(1u, opt.jobs);
  auto snapshot = [&]() {
    Catalog cat;
    for (const auto& s : slots)
      if (s) cat.cells.push_back(*s);
    return cat;
  };
  auto worker = [&]() {
    for (;;) {
      if (opt.stop && opt.stop->load()) break;
      std::size_t i = next.fetch_add(1);
      if (i >= work.size()) break;
      GridCell c = classify_cell(work[i].first, work[i].second, opt.classify);
      std::lock_guard<std::mutex> lock(mu);
      slots[i] = std::move(c);
      ++done;
      cv.notify_one();
    }
    std::lock_guard<std::mutex> lock(mu);
    --active;
    cv.notify_one();
  };
  std::vector<std::thread> pool;
  unsigned nthreads = std::max(1u, opt.jobs);
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  std::size_t persisted = 0;
  {
    std::unique_lock<std::mutex> lock(mu);
    while (active > 0) {
      cv.wait(lock);
      if (opt.persist && done >= persisted + std::max<std::size_t>(1, opt.persist_every)) {
        Catalog cat = snapshot();
        persisted = done;
        lock.unlock();
        opt.persist(cat);
        lock.lock();
      }
    }
  }
  for (auto& t : pool) t.join();
  Catalog cat = snapshot();
  if (opt.persist) opt.persist(cat);
  return cat;
}

// ---------------------------------------------------------------------------
// Proposition fixtures

struct NamedPoint {
  std::string name;
  Vec3 point;
};

struct UnitMap {
  char op;  // 'X' or 'Y'
  std::string from, to;
};

struct PropositionFixture {
  std::string id;
  long long a = 0, b = 0;
  BigInt m, n;
  Mat3Z x, y;
  std::vector<NamedPoint> points;
  std::vector<UnitMap> maps;
  // expected combinatorics; unset fields are not asserted
  std::optional<std::size_t> vertices, edges, faces;

  const Vec3& point(const std::string& name) const {
    for (const auto& p : points)
      if (p.name == name) return p.point;
    throw Error(ErrorKind::InvalidInput, "fixture has no point " + name);
  }
  IntegerOperator3 op() const { return frobenius(m, n); }
};

inline const std::vector<std::string>& proposition_ids() {
  static const std::vector<std::string> ids{"3.1", "3.2", "3.3", "3.4", "3.5"};
  return ids;
}

inline PropositionFixture make_fixture(const std::string& id, long long a, long long b = 0) {
  if (std::find(proposition_ids().begin(), proposition_ids().end(), id) == proposition_ids().end())
    throw Error(ErrorKind::InvalidInput, "unknown proposition " + id);
  bool two = id == "3.1" || id == "3.5";
  long long amin = id == "3.3" ? 2 : 0;
  if (a < amin || (two && b < 0))
    throw Error(ErrorKind::ParamOutOfRange, "parameters out of range for proposition " + id);
  PropositionFixture f;
  f.id = id;
  f.a = a;
  f.b = two ? b : 0;
  BigInt A(a), B(f.b);
  const Mat3Z I = Mat3Z::identity();
  auto ai_of = [&]() { return detail::inverse_unimodular(frobenius(f.m, f.n).matrix()); };
  auto inv = [](const Mat3Z& u) {
    if (abs(u.det()) != 1) throw Error(ErrorKind::InvalidOperator, "fixture generator is not unimodular");
    return detail::inverse_unimodular(u);
  };
  if (id == "3.1") {
    f.m = B - A - 1;
    f.n = (A + 2) * (B + 1);
    Mat3Z ai = ai_of();
    f.x = ai * ai;
    f.y = ai * (ai - (B + 1) * I);
    f.points = {{"A", Vec3(1, 0, A + 2)},
                {"B", Vec3(0, 0, 1)},
                {"C", Vec3(B - A - 1, 1, 0)},
                {"D", Vec3((B + 1) * (B + 1), B + 1, 1)}};
    f.maps = {{'X', "A", "D"}, {'X', "B", "C"}, {'Y', "A", "B"}, {'Y', "D", "C"}};
    f.vertices = 1;
    f.edges = 3;
    f.faces = 2;
  } else if (id == "3.2") {
    f.m = -A;
    f.n = 2 * A + 3;
    Mat3Z ai = ai_of();
    f.x = ai * ai;
    f.y = inv(2 * I - ai);
    f.points = {{"A", Vec3(0, 0, 1)}, {"B", Vec3(2, 1, 1)}, {"C", Vec3(7, 4, 2)}, {"D", Vec3(-A, 1, 0)},
                {"E", Vec3(3, 2, 1)}};
    f.maps = {{'X', "A", "D"}, {'X', "B", "C"}, {'Y', "A", "B"}, {'Y', "D", "C"}};
    f.vertices = a == 0 ? 1 : 2;
    f.edges = a == 0 ? 3 : 6;
    f.faces = a == 0 ? 2 : 4;
  } else if (id == "3.3") {
    f.m = 2 * A - 5;
    f.n = 7 * A - 5;
    Mat3Z ai = ai_of();
    Mat3Z am = frobenius(f.m, f.n).matrix();
    f.x = 2 * ai + 7 * I;
    f.y = am * am;
    f.points = {{"A", Vec3(-14, 4, -1)},
                {"B", Vec3(-1, 1 - A, 7 * A * A - 10 * A + 4)},
                {"C", Vec3(1, 5 - 7 * A, 49 * A * A - 72 * A + 30)},
                {"D", Vec3(0, 0, 1)},
                {"E", Vec3(-1, 0, 2 * A - 1)},
                {"F", Vec3(0, -A, 7 * A * A - 5 * A + 1)}};
    f.maps = {{'X', "A", "D"}, {'X', "B", "C"}, {'Y', "A", "B"}, {'Y', "D", "C"}};
    f.vertices = 3;
  } else if (id == "3.4") {
    f.m = A - 1;
    f.n = 3 + 2 * A;
    Mat3Z ai = ai_of();
    Mat3Z h = inv(2 * I + ai);
    f.x = h * h;
    f.y = ai * ai;
    f.points = {{"A", Vec3(1, -2 * A - 3, 4 * A * A + 11 * A + 10)},
                {"B", Vec3(0, 0, 1)},
                {"C", Vec3(-4 * A - 11, 2 * A + 5, -A - 2)},
                {"D", Vec3(-A - 2, 0, A * A + 3 * A + 3)},
                {"E", Vec3(-2, 1, 0)},
                {"F", Vec3(-2 * A - 3, A + 1, 1)},
                {"G", Vec3(0, -1 - A, 2 * A * A + 5 * A + 4)}};
    f.maps = {{'X', "A", "D"}, {'X', "B", "C"}, {'Y', "A", "B"}, {'Y', "G", "E"}, {'Y', "D", "C"}};
    f.vertices = 3;
  } else {
    f.m = -(A + 2) * (B + 2) + 3;
    f.n = (A + 2) * (B + 3) - 3;
    Mat3Z ai = ai_of();
    f.x = ((B + 3) * I - (B + 2) * ai) * ai * ai;
    f.y = ai * ai;
    Vec3 pa(B * B + 3 * B + 3, B * B + 2 * B - A + 1, A * A * B + 3 * A * A + 4 * A * B + B * B + 6 * A + 5 * B + 4);
    // only the first two coordinates of B are given; B is the image of A under Y
    f.points = {{"A", pa},
                {"B", f.y * pa},
                {"C", Vec3(-A * B - 2 * A - 2 * B - 1, 1, 0)},
                {"D", Vec3(0, 0, 1)},
                {"E", Vec3(B + 4, B + 3, B + 2)},
                {"F", Vec3(B + 2, B + 1, A + B + 2)},
                {"G", Vec3(1, 1, 1)}};
    f.maps = {{'X', "A", "D"}, {'X', "B", "C"}, {'Y', "A", "B"}, {'Y', "F", "E"}, {'Y', "D", "C"}};
    f.vertices = 3;
  }
  return f;
}

/// The interior points of the pentagon BEFDG of the fourth family, in closed form.
inline std::vector<Vec3> pentagon_formula_points(long long a) {
  std::vector<Vec3> out;
  for (long long i = 1; i <= a + 1; ++i)
    for (long long j = 1; j <= 2 * i - 1; ++j) out.push_back(Vec3(-j, -i + j, (2 * a + 3) * i - (a + 2) * j + 1));
  std::sort(out.begin(), out.end());
  return out;
}

struct PropositionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PropositionReport {
  std::string id;
  long long a = 0, b = 0;
  BigInt m, n;
  std::optional<FaceSummary> summary;
  std::vector<PropositionCheck> checks;

  bool passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const PropositionCheck& c) { return c.passed; });
  }
  const PropositionCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

inline std::string str(const Vec3& v) {
  std::ostringstream os;
  os << "(" << v[0] << "," << v[1] << "," << v[2] << ")";
  return os.str();
}

template <class T>
std::string joined(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace detail

inline PropositionReport verify_proposition(const std::string& id, long long a, long long b = 0,
                                            const SailOptions& opt = {}) {
  PropositionFixture f = make_fixture(id, a, b);
  PropositionReport r;
  r.id = id;
  r.a = f.a;
  r.b = f.b;
  r.m = f.m;
  r.n = f.n;
  auto check = [&](std::string name, bool ok, std::string detail = {}) {
    r.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  Mat3Z am = f.op().matrix();

  for (const auto& mp : f.maps) {
    const Mat3Z& u = mp.op == 'X' ? f.x : f.y;
    Vec3 img = u * f.point(mp.from);
    check(std::string(1, mp.op) + " maps " + mp.from + " to " + mp.to, img == f.point(mp.to),
          mp.from + " -> " + detail::str(img));
  }
  for (const auto* name : {"X", "Y"}) {
    const Mat3Z& u = std::string(name) == "X" ? f.x : f.y;
    UnitReport ur = verify_unit(u, am);
    check(std::string(name) + " is a unit commuting with A", ur.ok(), ur.str());
    check(std::string(name) + " is totally positive", is_totally_positive(u));
  }

  PipelineResult res;
  try {
    res = run_pipeline(f.op(), Vec3(0, 0, 1), opt);
  } catch (const Error& e) {
    check("pipeline", false, e.what());
    return r;
  }
  const FundamentalDomain& fd = res.domain;
  const TorusTriangulation& t = res.torus;
  r.summary = summarize(t);
  check("generators span the unit lattice", same_unit_lattice(fd.spectral, fd.basis, f.x, f.y));
  check("euler characteristic", t.euler_characteristic() == 0, std::to_string(t.euler_characteristic()));
  if (f.vertices) check("vertex count", t.num_vertices == *f.vertices, std::to_string(t.num_vertices));
  if (f.edges) check("edge count", t.num_edges == *f.edges, std::to_string(t.num_edges));
  if (f.faces) check("face count", t.num_faces() == *f.faces, std::to_string(t.num_faces()));
  for (const auto& p : f.points) {
    if (id == "3.2" && a == 0 && p.name == "E") {
      // with a = 0 only ABD and BCD are faces; E lies inside BCD
      check("point E on the sail", locate_point(fd, p.point).has_value(), detail::str(p.point));
      continue;
    }
    check("vertex " + p.name, is_sail_vertex(fd, p.point), detail::str(p.point));
  }

  auto edge = [&](const std::string& p, const std::string& q, long long interior) {
    auto loc = locate_edge(fd, f.point(p), f.point(q));
    BigInt len = integer_length(f.point(p), f.point(q));
    bool ok = loc.has_value() && len - 1 == interior;
    std::string d = "interior points " + BigInt(len - 1).str();
    if (!loc) {
      d += ", not an edge of the domain";
      auto mid = interior_points(f.point(p), f.point(q));
      if (!mid.empty())
        if (auto at = locate_point(fd, mid[mid.size() / 2]))
          d += "; the segment crosses face " + std::to_string(at->face);
    }
    check("edge " + p + q + " interior " + std::to_string(interior), ok, d);
  };
  auto faces_with = [&](std::size_t deg) {
    std::vector<std::pair<BigInt, BigInt>> v;
    for (const auto& F : t.faces)
      if (F.degree() == deg) v.emplace_back(F.area, F.distance);
    std::sort(v.begin(), v.end());
    return v;
  };
  auto pairs_str = [](const std::vector<std::pair<BigInt, BigInt>>& v) {
    std::ostringstream os;
    for (const auto& [x, y] : v) os << "(" << x << "," << y << ")";
    return os.str();
  };

  if (id == "3.1") {
    auto tri = faces_with(3);
    std::vector<std::pair<BigInt, BigInt>> want{{BigInt(b + 1), BigInt(1)}, {BigInt(b + 1), BigInt(a + 2)}};
    std::sort(want.begin(), want.end());
    check("triangle areas and distances", tri == want, pairs_str(tri));
    edge("B", "D", b);
    auto loc = locate_edge(fd, f.point("B"), f.point("D"));
    check("long edge length", loc && t.faces[loc->face].sides[loc->side].length == b + 1,
          loc ? t.faces[loc->face].sides[loc->side].length.str() : "missing");
    for (const auto& [p, q] : {std::pair<const char*, const char*>{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "A"}})
      edge(p, q, 0);
  } else if (id == "3.2") {
    auto tri = faces_with(3);
    std::vector<std::pair<BigInt, BigInt>> want;
    if (a == 0)
      want = {{BigInt(1), BigInt(2)}, {BigInt(3), BigInt(1)}};
    else
      want = {{BigInt(1), BigInt(a + 2)}, {BigInt(1), BigInt(a + 1)}, {BigInt(1), BigInt(1)}, {BigInt(1), BigInt(1)}};
    std::sort(want.begin(), want.end());
    check("triangle areas and distances", tri == want, pairs_str(tri));
  } else if (id == "3.3") {
    edge("B", "E", a - 2);
    edge("D", "F", a - 1);
    edge("A", "D", 1);
    edge("C", "B", 1);
  } else if (id == "3.4") {
    edge("B", "G", a);
    edge("D", "F", a);
    std::vector<Vec3> pent{f.point("B"), f.point("E"), f.point("F"), f.point("D"), f.point("G")};
    auto loc = locate_face(fd, pent);
    check("pentagon BEFDG", loc.has_value());
    if (loc) {
      Mat3Z back = detail::inverse_unimodular(
          detail::WordCache{fd.basis.x(), fd.basis.y(), {}}.get(loc->word));
      std::vector<Vec3> got;
      for (const auto& p : face_interior_points(fd.faces[loc->face])) got.push_back(back * p);
      std::sort(got.begin(), got.end());
      auto want = pentagon_formula_points(a);
      check("pentagon interior count", got.size() == static_cast<std::size_t>((a + 1) * (a + 1)),
            std::to_string(got.size()));
      check("pentagon interior points", got == want);
    }
  } else {
    edge("B", "D", b + 1);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Unit pairs

/// Whether (alpha, beta) is one of the unit directions of the families
/// 3.1-3.5, up to swapping and a common sign change.
inline bool covered_by_families(long long alpha, long long beta) {
  auto one = [](long long al, long long be) {
    if (std::llabs(al) == 1 || std::llabs(be) == 1) return true;  // 3.1 and 3.2
    if ((al == 7 && be == 2) || (al == 2 && be == 1)) return true;  // 3.3, 3.4
    return be <= -2 && al == -be + 1;                               // 3.5: (k+1, -k)
  };
  return one(alpha, beta) || one(beta, alpha) || one(-alpha, -beta) || one(-beta, -alpha);
}

/// Pairs with hi >= alpha >= beta >= lo, alpha beta != 0, for which some
/// A_{m,n} makes alpha I + beta A^{-1} unimodular, outside the proposition
/// families; one representative per symmetry class (the largest).
inline std::vector<std::pair<long long, long long>> uncovered_unit_pairs(long long lo, long long hi) {
  std::set<std::pair<long long, long long>> reps;
  for (long long al = hi; al >= lo; --al)
    for (long long be = al; be >= lo; --be) {
      if (al == 0 || be == 0) continue;
      if (!unit_pair_exists(BigInt(al), BigInt(be)) || covered_by_families(al, be)) continue;
      reps.insert(std::max({std::pair{al, be}, std::pair{be, al}, std::pair{-al, -be}, std::pair{-be, -al}}));
    }
  return {reps.rbegin(), reps.rend()};
}

// ---------------------------------------------------------------------------
// Conjugator search

struct EquivalenceCertificate {
  IntegerOperator3 conjugator = IntegerOperator3::identity();
  Mat3Z conjugated;  // X A X^-1, commutes with B
  std::vector<std::string> transcript;
};

struct EquivalenceResult {
  std::optional<EquivalenceCertificate> certificate;
  long long bound = 0;
  std::size_t targets = 0;     // integer elements of the centralizer of B with the spectrum of A
  std::size_t candidates = 0;  // conjugators examined
  std::optional<bool> codes_distinct;
  std::string note;

  bool found() const { return certificate.has_value(); }
};

inline std::string str(const Mat3Z& m) {
  std::ostringstream os;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) os << (i || j ? "," : "") << m[i][j];
  return os.str();
}

inline bool verify_certificate(const EquivalenceCertificate& c, const IntegerOperator3& a, const IntegerOperator3& b) {
  const Mat3Z& x = c.conjugator.matrix();
  if (x.det() != 1) return false;
  Mat3Z conj = x * a.matrix() * detail::inverse_unimodular(x);
  return conj == c.conjugated && conj * b.matrix() == b.matrix() * conj;
}

/// A certificate for (B, A) from one for (A, B): the inverse conjugator.
inline EquivalenceCertificate reverse_certificate(const EquivalenceCertificate& c, const IntegerOperator3& a,
                                                  const IntegerOperator3& b) {
  EquivalenceCertificate r;
  r.conjugator = c.conjugator.inverse();
  const Mat3Z& y = r.conjugator.matrix();
  r.conjugated = y * b.matrix() * detail::inverse_unimodular(y);
  r.transcript = {"X = " + str(y), "det X = " + y.det().str(), "X B X^-1 = " + str(r.conjugated)};
  bool ok = r.conjugated * a.matrix() == a.matrix() * r.conjugated;
  r.transcript.push_back(std::string("commutes with target: ") + (ok ? "yes" : "no"));
  return r;
}

namespace detail {

using Cx = std::complex<long double>;

inline std::array<Cx, 3> complex_roots(const CubicPoly& p) {
  long double c2 = to_ld(p.c2), c1 = to_ld(p.c1), c0 = to_ld(p.c0);
  auto f = [&](Cx x) { return ((x + c2) * x + c1) * x + c0; };
  std::array<Cx, 3> z{Cx(1, 0), Cx(0.4L, 0.9L), Cx(0.4L, 0.9L) * Cx(0.4L, 0.9L)};
  long double r = 1 + std::max({std::fabs(c2), std::fabs(c1), std::fabs(c0)});
  for (auto& x : z) x *= r;
  for (int it = 0; it < 2000; ++it) {
    long double change = 0;
    for (int k = 0; k < 3; ++k) {
      Cx d = 1;
      for (int j = 0; j < 3; ++j)
        if (j != k) d *= z[k] - z[j];
      Cx step = f(z[k]) / d;
      z[k] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-30L) break;
  }
  return z;
}

/// Solves the 3x3 complex system m k = rhs; nullopt when singular.
inline std::optional<std::array<Cx, 3>> solve3(std::array<std::array<Cx, 3>, 3> m, std::array<Cx, 3> rhs) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) < 1e-18L) return std::nullopt;
    std::swap(m[c], m[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      Cx q = m[r][c] / m[c][c];
      for (int k = c; k < 3; ++k) m[r][k] -= q * m[c][k];
      rhs[r] -= q * rhs[c];
    }
  }
  return std::array<Cx, 3>{rhs[0] / m[0][0], rhs[1] / m[1][1], rhs[2] / m[2][2]};
}

/// Integer matrices C commuting with B whose characteristic polynomial is
/// that of A. Since the centralizer of B is Q[B], C is fixed by the
/// eigenvalue it takes on each eigenvector of B, a permutation of the roots
/// of A.
inline std::vector<Mat3Z> centralizer_targets(const Mat3Z& a, const Mat3Z& b) {
  CubicPoly ca = char_poly(a);
  auto basis = centralizer_basis(b);
  if (basis.size() != 3) return {};
  auto alpha = complex_roots(ca);
  auto beta = complex_roots(char_poly(b));
  std::array<std::array<Cx, 3>, 3> m{};
  for (int i = 0; i < 3; ++i) {
    auto e = inverse_poly_expression(basis[i], b);
    if (!e) return {};
    for (int j = 0; j < 3; ++j) {
      Cx bi = Cx(1) / beta[j];
      m[j][i] = Cx(to_ld((*e)[0])) + Cx(to_ld((*e)[1])) * bi + Cx(to_ld((*e)[2])) * bi * bi;
    }
  }
  std::vector<Mat3Z> out;
  std::array<int, 3> perm{0, 1, 2};
  do {
    auto k = solve3(m, {alpha[perm[0]], alpha[perm[1]], alpha[perm[2]]});
    if (!k) continue;
    Mat3Z c = Mat3Z::zero();
    bool integral = true;
    for (int i = 0; i < 3 && integral; ++i) {
      long double re = (*k)[i].real(), im = (*k)[i].imag();
      long double tol = 1e-6L * (1 + std::fabs(re));
      long double rr = std::round(re);
      if (std::fabs(im) > tol || std::fabs(re - rr) > tol || std::fabs(rr) > 1e15L) integral = false;
      else c = c + BigInt(static_cast<long long>(rr)) * basis[i];
    }
    if (integral && char_poly(c) == ca && c * b == b * c && std::find(out.begin(), out.end(), c) == out.end())
      out.push_back(c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace detail

/// Searches X in SL(3,Z) with entries in [-bound, bound] such that X A X^-1
/// commutes with B. Candidates are ordered by the largest absolute entry,
/// then lexicographically; the first is returned.
inline EquivalenceResult equivalence_search(const IntegerOperator3& a, const IntegerOperator3& b, long long bound,
                                            bool compare_codes = true, const SailOptions& opt = {}) {
  EquivalenceResult res;
  res.bound = bound;
  for (const auto* op : {&a, &b}) {
    CubicPoly chi = char_poly(*op);
    if (!is_irreducible(chi))
      throw Error(ErrorKind::Reducible, "characteristic polynomial " + chi.str() + " is reducible");
  }
  if (compare_codes) {
    try {
      res.codes_distinct = fraction_codes(a, opt) != fraction_codes(b, opt);
    } catch (const Error& e) {
      res.note = std::string("codes unavailable: ") + e.what();
    }
  }
  const Mat3Z &am = a.matrix(), &bm = b.matrix();
  if (am * bm == bm * am) {
    EquivalenceCertificate c;
    c.conjugated = am;
    c.transcript = {"A commutes with B", "X = identity", "det X = 1"};
    res.certificate = std::move(c);
    res.targets = 1;
    res.candidates = 1;
    return res;
  }
  using Key = std::pair<long long, std::array<long long, 9>>;
  std::optional<Key> best;
  Mat3Z best_target;
  auto targets = detail::centralizer_targets(am, bm);
  res.targets = targets.size();
  for (const auto& c : targets) {
    // X A = C X, a rank-3 lattice of solutions
    detail::IntMatrix k(9, std::vector<BigInt>(9));
    for (int col = 0; col < 9; ++col) {
      Mat3Z e = Mat3Z::zero();
      e[col / 3][col % 3] = 1;
      Mat3Z d = c * e - e * am;
      for (int r = 0; r < 9; ++r) k[r][col] = d[r / 3][r % 3];
    }
    auto ker = detail::integer_kernel(k);
    if (ker.size() != 3) continue;
    detail::lll_reduce(ker);
    std::array<std::array<long long, 9>, 3> v{};
    bool fits = true;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 9; ++j) {
        if (abs(ker[i][j]) > BigInt(1'000'000'000'000LL)) fits = false;
        else v[i][j] = static_cast<long long>(ker[i][j]);
      }
    if (!fits) continue;
    // Fincke-Pohst over the ball |X|^2 <= 9 bound^2, which contains the box
    std::array<std::array<long double, 9>, 3> bs{};
    std::array<long double, 3> bn{};
    long double mu[3][3] = {};
    for (int i = 0; i < 3; ++i) {
      for (int t = 0; t < 9; ++t) bs[i][t] = static_cast<long double>(v[i][t]);
      for (int j = 0; j < i; ++j) {
        long double d = 0;
        for (int t = 0; t < 9; ++t) d += static_cast<long double>(v[i][t]) * bs[j][t];
        mu[i][j] = d / bn[j];
        for (int t = 0; t < 9; ++t) bs[i][t] -= mu[i][j] * bs[j][t];
      }
      for (int t = 0; t < 9; ++t) bn[i] += bs[i][t] * bs[i][t];
    }
    long double r2 = 9.0L * bound * bound * (1 + 1e-12L) + 1e-6L;
    auto span = [](long double c, long double w) {
      return std::pair<long long, long long>{static_cast<long long>(std::ceil(c - w - 1e-9L)),
                                             static_cast<long long>(std::floor(c + w + 1e-9L))};
    };
    auto [t2lo, t2hi] = span(0, std::sqrt(r2 / bn[2]));
    for (long long t2 = t2lo; t2 <= t2hi; ++t2) {
      long double rem2 = r2 - t2 * t2 * bn[2];
      if (rem2 < 0) continue;
      long double c1 = -t2 * mu[2][1];
      auto [t1lo, t1hi] = span(c1, std::sqrt(rem2 / bn[1]));
      for (long long t1 = t1lo; t1 <= t1hi; ++t1) {
        long double rem1 = rem2 - (t1 - c1) * (t1 - c1) * bn[1];
        if (rem1 < 0) continue;
        long double c0 = -(t1 * mu[1][0] + t2 * mu[2][0]);
        auto [t0lo, t0hi] = span(c0, std::sqrt(rem1 / bn[0]));
        for (long long t0 = t0lo; t0 <= t0hi; ++t0) {
          ++res.candidates;
          std::array<long long, 9> x{};
          long long mx = 0;
          for (int j = 0; j < 9; ++j) {
            x[j] = t0 * v[0][j] + t1 * v[1][j] + t2 * v[2][j];
            mx = std::max(mx, std::llabs(x[j]));
          }
          if (mx > bound || mx == 0) continue;
          i128 det = static_cast<i128>(x[0]) * (static_cast<i128>(x[4]) * x[8] - static_cast<i128>(x[5]) * x[7]) -
                     static_cast<i128>(x[1]) * (static_cast<i128>(x[3]) * x[8] - static_cast<i128>(x[5]) * x[6]) +
                     static_cast<i128>(x[2]) * (static_cast<i128>(x[3]) * x[7] - static_cast<i128>(x[4]) * x[6]);
          if (det != 1 && det != -1) continue;
          if (det == -1)
            for (auto& e : x) e = -e;  // odd dimension: -X has determinant 1
          Key key{mx, x};
          if (!best || key < *best) {
            best = key;
            best_target = c;
          }
        }
      }
    }
  }
  if (!best) {
    if (res.note.empty()) res.note = "no conjugator with entries in [-" + std::to_string(bound) + ", " +
                                     std::to_string(bound) + "]";
    return res;
  }
  Mat3Z x;
  for (int i = 0; i < 9; ++i) x[i / 3][i % 3] = best->second[i];
  EquivalenceCertificate cert;
  cert.conjugator = IntegerOperator3(x);
  cert.conjugated = best_target;
  cert.transcript = {"target C = " + str(best_target), "X = " + str(x), "det X = " + x.det().str(),
                     "X A = C X: " + std::string(x * am == best_target * x ? "yes" : "no"),
                     "C B = B C: " + std::string(best_target * bm == bm * best_target ? "yes" : "no")};
  res.certificate = std::move(cert);
  return res;
}

// ---------------------------------------------------------------------------
// Frobenius reachability

struct ReachabilityReport {
  long long bound = 0;
  std::string field_discriminant;
  std::vector<std::string> codes;  // of the four sails of A
  std::size_t cells_scanned = 0;
  std::vector<std::pair<long long, long long>> same_field;
  std::vector<std::pair<long long, long long>> matches;
  std::vector<std::string> errors;

  std::string conclusion() const {
    std::ostringstream os;
    if (matches.empty())
      os << "no Frobenius operator A_{m,n} with |m|,|n| <= " << bound
         << " has a matching code; bounded evidence, not a proof";
    else
      os << matches.size() << " matching Frobenius operator(s) with |m|,|n| <= " << bound;
    return os.str();
  }
};

/// Compares the sail codes of A with the code of every irreducible
/// totally real A_{m,n}, |m|,|n| <= bound, whose discriminant has the same
/// squarefree part.
inline ReachabilityReport frobenius_reachability(const IntegerOperator3& a, long long bound,
                                                 const SailOptions& opt = {}) {
  ReachabilityReport r;
  r.bound = bound;
  IntegerOperator3 b = normalized(a);
  CubicPoly chi = char_poly(b);
  require_cubic_totally_real(chi);
  BigInt core = squarefree_core(chi.discriminant());
  r.field_discriminant = core.str();
  r.codes = fraction_codes(b, opt);
  for (long long m = -bound; m <= bound; ++m)
    for (long long n = -bound; n <= bound; ++n) {
      ++r.cells_scanned;
      CubicPoly c = char_poly(frobenius(BigInt(m), BigInt(n)));
      if (!is_irreducible(c) || c.discriminant() <= 0 || squarefree_core(c.discriminant()) != core) continue;
      r.same_field.emplace_back(m, n);
      try {
        std::string code = run_pipeline(frobenius(BigInt(m), BigInt(n)), Vec3(0, 0, 1), opt).code.text;
        if (std::find(r.codes.begin(), r.codes.end(), code) != r.codes.end()) r.matches.emplace_back(m, n);
      } catch (const Error& e) {
        r.errors.push_back("(" + std::to_string(m) + "," + std::to_string(n) + "): " + e.what());
      }
    }
  return r;
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << (std::fabs(v) < 0.005 ? 0.0 : v);
  return os.str();
}

/// Identifier of the k-th lattice point along side s of face f, shared by
/// both copies of the edge: vertices by class, interior points by edge class
/// and position from the side with the smaller (face, side) index.
struct PointIds {
  const TorusTriangulation& t;

  std::string at(std::size_t f, std::size_t s, long long k) const {
    const auto& F = t.faces[f];
    const auto& S = F.sides[s];
    long long len = static_cast<long long>(S.length);
    if (k == 0) return "v" + std::to_string(F.corners[s].vertex);
    if (k == len) return "v" + std::to_string(F.corners[(s + 1) % F.degree()].vertex);
    bool primary = std::pair{f, s} <= std::pair{S.partner_face, S.partner_side};
    return "e" + std::to_string(S.edge) + "." + std::to_string(primary ? k : len - k);
  }
};

}  // namespace detail

inline std::string render_triangulation(const TorusTriangulation& t, const std::string& format) {
  if (format != "svg" && format != "txt") throw Error(ErrorKind::UnsupportedFormat, "unknown format '" + format + "'");
  if (t.faces.empty()) throw Error(ErrorKind::InvalidInput, "empty triangulation");
  detail::PointIds ids{t};
  std::ostringstream os;
  if (format == "txt") {
    os << "torus V" << t.num_vertices << " E" << t.num_edges << " F" << t.num_faces() << " euler "
       << t.euler_characteristic() << "\n";
    for (std::size_t f = 0; f < t.faces.size(); ++f) {
      const auto& F = t.faces[f];
      os << "face " << f << ": degree " << F.degree() << " area " << F.area << " distance " << F.distance
         << " type " << F.type.code() << " interior " << F.type.interior_points << "\n";
      for (std::size_t s = 0; s < F.degree(); ++s) {
        const auto& S = F.sides[s];
        os << "  side " << s << ": edge " << S.edge << " length " << S.length << " glued to face "
           << S.partner_face << " side " << S.partner_side << "; points";
        for (long long k = 0; k <= static_cast<long long>(S.length); ++k) os << " " << ids.at(f, s, k);
        os << "\n";
      }
      for (std::size_t k = 0; k < F.degree(); ++k)
        os << "  corner " << k << ": vertex " << F.corners[k].vertex << " angle " << F.corners[k].angle << " at ("
           << detail::fmt(F.corner_xy[k][0]) << "," << detail::fmt(F.corner_xy[k][1]) << ")\n";
    }
    os << "rectangle (0,0)-(1,1): bottom and top glued by X, left and right glued by Y\n";
    return os.str();
  }

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  for (const auto& F : t.faces)
    for (const auto& p : F.corner_xy) {
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    }
  const double size = 480, margin = 40;
  double scale = size / std::max(x1 - x0, y1 - y0);
  auto px = [&](double x) { return detail::fmt(margin + (x - x0) * scale); };
  auto py = [&](double y) { return detail::fmt(margin + (y1 - y) * scale); };
  double w = (x1 - x0) * scale + 2 * margin, h = (y1 - y0) * scale + 2 * margin;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(w) << "\" height=\"" << detail::fmt(h)
     << "\" viewBox=\"0 0 " << detail::fmt(w) << " " << detail::fmt(h) << "\">\n";
  os << "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"4\" orient=\"auto\">"
        "<path d=\"M0,0 L8,4 L0,8 z\" fill=\"#c03\"/></marker></defs>\n";
  os << "<polygon class=\"rectangle\" points=\"" << px(0) << "," << py(0) << " " << px(1) << "," << py(0) << " "
     << px(1) << "," << py(1) << " " << px(0) << "," << py(1)
     << "\" fill=\"#f4f4ff\" stroke=\"#99c\" stroke-dasharray=\"4 3\"/>\n";
  auto arrow = [&](double ax, double ay, double bx, double by, const char* label) {
    os << "<line class=\"identification\" data-glue=\"" << label << "\" x1=\"" << px(ax) << "\" y1=\"" << py(ay)
       << "\" x2=\"" << px(bx) << "\" y2=\"" << py(by) << "\" stroke=\"#c03\" marker-end=\"url(#arrow)\"/>\n";
  };
  arrow(0.4, 0, 0.6, 0, "X");
  arrow(0.4, 1, 0.6, 1, "X");
  arrow(0, 0.4, 0, 0.6, "Y");
  arrow(1, 0.4, 1, 0.6, "Y");
  std::set<std::string> seen;
  std::ostringstream points;
  for (std::size_t f = 0; f < t.faces.size(); ++f) {
    const auto& F = t.faces[f];
    std::size_t n = F.degree();
    for (std::size_t s = 0; s < n; ++s) {
      const auto& a = F.corner_xy[s];
      const auto& b = F.corner_xy[(s + 1) % n];
      std::string seg = px(a[0]) + "," + py(a[1]) + " " + px(b[0]) + "," + py(b[1]);
      std::string rev = px(b[0]) + "," + py(b[1]) + " " + px(a[0]) + "," + py(a[1]);
      long long len = static_cast<long long>(F.sides[s].length);
      std::vector<std::string> pid;
      for (long long k = 0; k <= len; ++k) pid.push_back(ids.at(f, s, k));
      if (seen.count("s" + seg) || seen.count("s" + rev)) continue;
      seen.insert("s" + seg);
      os << "<g class=\"side\" data-edge=\"" << F.sides[s].edge << "\" data-length=\"" << len << "\" data-points=\"";
      for (std::size_t i = 0; i < pid.size(); ++i) os << (i ? " " : "") << pid[i];
      os << "\"><line x1=\"" << px(a[0]) << "\" y1=\"" << py(a[1]) << "\" x2=\"" << px(b[0]) << "\" y2=\""
         << py(b[1]) << "\" stroke=\"#222\" stroke-width=\"1.5\"/></g>\n";
      for (long long k = 0; k <= len; ++k) {
        double u = static_cast<double>(k) / static_cast<double>(len);
        double x = a[0] + u * (b[0] - a[0]), y = a[1] + u * (b[1] - a[1]);
        std::string key = "p" + px(x) + "," + py(y);
        if (seen.count(key)) continue;
        seen.insert(key);
        bool vert = k == 0 || k == len;
        points << "<circle class=\"" << (vert ? "vertex" : "point") << "\" data-point=\"" << pid[k] << "\" cx=\""
               << px(x) << "\" cy=\"" << py(y) << "\" r=\"" << (vert ? 4 : 3) << "\" fill=\"#000\"/>\n";
      }
    }
    for (std::size_t k = 0; k < F.interior_xy.size(); ++k) {
      const auto& p = F.interior_xy[k];
      std::string key = "p" + px(p[0]) + "," + py(p[1]);
      if (seen.count(key)) continue;
      seen.insert(key);
      points << "<circle class=\"inner\" data-point=\"f" << f << "." << k << "\" cx=\"" << px(p[0]) << "\" cy=\""
             << py(p[1]) << "\" r=\"2.5\" fill=\"#555\"/>\n";
    }
  }
  os << points.str() << "</svg>\n";
  return os.str();
}

/// Grid picture: one square per cell, * and # markers, gray for a complex
/// pair of roots, and a face-edge thumbnail for every computed cubic cell.
inline std::string render_grid(const Catalog& cat, const std::string& format) {
  if (format != "svg" && format != "txt") throw Error(ErrorKind::UnsupportedFormat, "unknown format '" + format + "'");
  std::ostringstream os;
  if (cat.cells.empty()) {
    if (format == "svg") os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"0\" height=\"0\"/>\n";
    return os.str();
  }
  long long m0 = cat.cells[0].m, m1 = m0, n0 = cat.cells[0].n, n1 = n0;
  std::map<std::pair<long long, long long>, const GridCell*> at;
  for (const auto& c : cat.cells) {
    m0 = std::min(m0, c.m);
    m1 = std::max(m1, c.m);
    n0 = std::min(n0, c.n);
    n1 = std::max(n1, c.n);
    at[{c.m, c.n}] = &c;
  }
  auto mark = [](const GridCell& c) {
    if (c.star) return '*';
    if (c.hash) return '#';
    if (c.gray) return ':';
    if (c.faces) return 'o';
    return c.error ? '!' : '?';
  };
  if (format == "txt") {
    os << "n\\m";
    for (long long m = m0; m <= m1; ++m) os << std::setw(4) << m;
    os << "\n";
    for (long long n = n1; n >= n0; --n) {
      os << std::setw(3) << n;
      for (long long m = m0; m <= m1; ++m) {
        auto it = at.find({m, n});
        os << std::setw(4) << (it == at.end() ? ' ' : mark(*it->second));
      }
      os << "\n";
    }
    os << "legend: * root 1, # root -1, : complex roots, o cubic, ! pipeline error\n";
    for (const auto& c : cat.cells)
      if (c.cls == CellClass::Cubic)
        os << "(" << c.m << "," << c.n << ") " << (c.faces ? c.faces->str() : "error: " + c.error.value_or("")) << "\n";
    return os.str();
  }
  const double cell = 64;
  double w = (m1 - m0 + 1) * cell, h = (n1 - n0 + 1) * cell;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(w) << "\" height=\"" << detail::fmt(h)
     << "\" font-family=\"monospace\">\n";
  for (const auto& c : cat.cells) {
    double x = (c.m - m0) * cell, y = (n1 - c.n) * cell;
    os << "<g class=\"cell\" id=\"cell_" << c.m << "_" << c.n << "\" data-class=\"" << to_string(c.cls) << "\">";
    os << "<rect x=\"" << detail::fmt(x) << "\" y=\"" << detail::fmt(y) << "\" width=\"" << detail::fmt(cell)
       << "\" height=\"" << detail::fmt(cell) << "\" fill=\"" << (c.gray ? "#d3d3d3" : "#fff")
       << "\" stroke=\"#888\"/>";
    if (c.star || c.hash)
      os << "<text class=\"marker\" x=\"" << detail::fmt(x + 4) << "\" y=\"" << detail::fmt(y + 14) << "\">"
         << (c.star ? "*" : "#") << "</text>";
    if (c.torus && !c.torus->faces.empty()) {
      double tx0 = 1e300, tx1 = -1e300, ty0 = 1e300, ty1 = -1e300;
      for (const auto& F : c.torus->faces)
        for (const auto& p : F.corner_xy) {
          tx0 = std::min(tx0, p[0]);
          tx1 = std::max(tx1, p[0]);
          ty0 = std::min(ty0, p[1]);
          ty1 = std::max(ty1, p[1]);
        }
      double s = (cell - 16) / std::max({tx1 - tx0, ty1 - ty0, 1e-9});
      os << "<g class=\"thumbnail\" id=\"thumb_" << c.m << "_" << c.n << "\" data-summary=\""
         << (c.faces ? c.faces->str() : "") << "\">";
      for (const auto& F : c.torus->faces) {
        os << "<polygon points=\"";
        for (std::size_t k = 0; k < F.corner_xy.size(); ++k)
          os << (k ? " " : "") << detail::fmt(x + 8 + (F.corner_xy[k][0] - tx0) * s) << ","
             << detail::fmt(y + cell - 8 - (F.corner_xy[k][1] - ty0) * s);
        os << "\" fill=\"none\" stroke=\"#036\" stroke-width=\"0.8\"/>";
      }
      os << "</g>";
    } else if (c.error) {
      os << "<text class=\"error\" x=\"" << detail::fmt(x + 28) << "\" y=\"" << detail::fmt(y + 36) << "\">!</text>";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace cfsail
