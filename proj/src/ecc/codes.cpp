#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "wmx/ecc.hpp"
#include "wmx/error.hpp"

namespace wmx::ecc {
namespace {

constexpr std::size_t kExactDistanceMaxK = 16;

// Family constructors declare d from the textbook formula; for small k the
// formula is checked against enumeration.
LinearCode checked(LinearCode code) {
  if (code.k() <= kExactDistanceMaxK && minimum_distance(code) != code.d()) {
    throw std::logic_error(code.name() + ": declared distance does not match enumeration");
  }
  return code;
}

// Operators derive a bound; when enumeration is cheap the exact value replaces it.
std::size_t settle_distance(const BitMatrix& g, std::size_t bound, const std::string& name) {
  if (g.rows() > kExactDistanceMaxK) return bound;
  const LinearCode probe(name, g, 1, std::nullopt, DecoderStrategy::exhaustive_codeword);
  return minimum_distance(probe);
}

std::vector<std::size_t> checked_positions(std::span<const std::size_t> positions, std::size_t n,
                                           const char* op) {
  std::vector<std::size_t> p(positions.begin(), positions.end());
  std::sort(p.begin(), p.end());
  if (std::adjacent_find(p.begin(), p.end()) != p.end()) {
    throw ConfigError(std::string(op) + ": repeated position");
  }
  if (!p.empty() && p.back() >= n) throw ConfigError(std::string(op) + ": position out of range");
  return p;
}

std::string join_positions(std::span<const std::size_t> positions) {
  std::string s;
  for (auto p : positions) s += "," + std::to_string(p);
  return s;
}

// Remainder of a / b over GF(2), coefficients lowest degree first.
Bits poly_mod(Bits a, const Bits& b) {
  std::size_t db = b.size();
  while (db > 0 && !b[db - 1]) --db;
  if (db == 0) throw ConfigError("polynomial division by zero");
  for (std::size_t top = a.size(); top >= db; --top) {
    if (!a[top - 1]) continue;
    const std::size_t shift = top - db;
    for (std::size_t j = 0; j < db; ++j) a[shift + j] ^= b[j];
  }
  a.resize(db - 1);
  return a;
}

}  // namespace

LinearCode repetition(std::size_t n) {
  if (n < 1) throw ConfigError("repetition: n must be >= 1");
  BitMatrix g(1, n);
  for (std::size_t j = 0; j < n; ++j) g.set(0, j, true);
  return checked(LinearCode("repetition(" + std::to_string(n) + ")", std::move(g), n, std::nullopt,
                            DecoderStrategy::majority));
}

LinearCode parity(std::size_t n) {
  if (n < 2) throw ConfigError("parity: n must be >= 2");
  BitMatrix g(n - 1, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g.set(i, i, true);
    g.set(i, n - 1, true);
  }
  return checked(LinearCode("parity(" + std::to_string(n) + ")", std::move(g), 2, std::nullopt,
                            DecoderStrategy::syndrome_table));
}

LinearCode hamming(std::size_t m) {
  if (m < 2 || m > 10) throw ConfigError("hamming: m must lie in [2, 10]");
  const std::size_t n = (std::size_t{1} << m) - 1, k = n - m;
  std::vector<std::uint32_t> columns;
  for (std::uint32_t v = 1; v < (1U << m); ++v) {
    if (std::popcount(v) >= 2) columns.push_back(v);
  }
  std::stable_sort(columns.begin(), columns.end(), [](std::uint32_t a, std::uint32_t b) {
    const int wa = std::popcount(a), wb = std::popcount(b);
    return wa != wb ? wa < wb : a > b;
  });
  // Bit (m-1-j) of a column value is the coefficient of parity bit j.
  BitMatrix g(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    g.set(i, i, true);
    for (std::size_t j = 0; j < m; ++j) {
      if ((columns[i] >> (m - 1 - j)) & 1U) g.set(i, k + j, true);
    }
  }
  return checked(LinearCode("hamming(" + std::to_string(m) + ")", std::move(g), 3, std::nullopt,
                            DecoderStrategy::syndrome_table));
}

LinearCode extended_hamming(std::size_t m) {
  const LinearCode base = extend_code(hamming(m));
  return checked(LinearCode("extended_hamming(" + std::to_string(m) + ")", base.generator(), 4,
                            std::nullopt, DecoderStrategy::syndrome_table));
}

LinearCode reed_muller_1(std::size_t m) {
  if (m < 1 || m > 16) throw ConfigError("reed_muller_1: m must lie in [1, 16]");
  const std::size_t n = std::size_t{1} << m;
  BitMatrix g(m + 1, n);
  for (std::size_t j = 0; j < n; ++j) {
    g.set(0, j, true);
    for (std::size_t i = 1; i <= m; ++i) g.set(i, j, (j >> (i - 1)) & 1U);
  }
  return checked(LinearCode("reed_muller_1(" + std::to_string(m) + ")", std::move(g), n / 2,
                            std::nullopt, DecoderStrategy::hadamard));
}

LinearCode cyclic(std::size_t length, const Bits& generator_poly, std::size_t declared_distance) {
  std::size_t deg = generator_poly.size();
  while (deg > 0 && !generator_poly[deg - 1]) --deg;
  if (deg == 0) throw ConfigError("cyclic: zero generator polynomial");
  --deg;
  if (deg >= length) throw ConfigError("cyclic: generator degree must be below the length");
  Bits xn1(length + 1, 0);
  xn1[0] = 1;
  xn1[length] = 1;
  const Bits rem = poly_mod(xn1, generator_poly);
  if (std::any_of(rem.begin(), rem.end(), [](auto b) { return b != 0; })) {
    throw ConfigError("cyclic: generator polynomial does not divide x^" + std::to_string(length) +
                      " - 1");
  }
  const std::size_t k = length - deg;
  BitMatrix g(k, length);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= deg; ++j) g.set(i, i + j, generator_poly[j] != 0);
  }
  const std::string name = "cyclic(" + std::to_string(length) + ")";
  std::size_t d = declared_distance;
  if (d == 0) {
    if (k > 20) throw ConfigError("cyclic: declare d for codes with k > 20");
    const LinearCode probe(name, g, 1, std::nullopt, DecoderStrategy::exhaustive_codeword);
    d = minimum_distance(probe);
  }
  return LinearCode(name, std::move(g), d);
}

LinearCode extend_code(const LinearCode& code) {
  const std::size_t n = code.n(), k = code.k();
  BitMatrix g(k, n + 1);
  for (std::size_t i = 0; i < k; ++i) {
    bool par = false;
    for (std::size_t j = 0; j < n; ++j) {
      const bool b = code.generator().get(i, j);
      g.set(i, j, b);
      par ^= b;
    }
    g.set(i, n, par);
  }
  const std::string name = "extend(" + code.name() + ")";
  const std::size_t bound = code.d() % 2 == 1 ? code.d() + 1 : code.d();
  const std::size_t d = settle_distance(g, bound, name);
  return LinearCode(name, std::move(g), d);
}

LinearCode shorten_code(const LinearCode& code, std::span<const std::size_t> positions) {
  const auto p = checked_positions(positions, code.n(), "shorten");
  BitMatrix g = code.generator();
  std::vector<bool> used(g.rows(), false);
  for (auto col : p) {
    std::size_t pivot = g.rows();
    for (std::size_t r = 0; r < g.rows(); ++r) {
      if (!used[r] && g.get(r, col)) {
        pivot = r;
        break;
      }
    }
    if (pivot == g.rows()) {
      throw ConfigError("shorten: rank collapse, every codeword is already zero at position " +
                        std::to_string(col));
    }
    used[pivot] = true;
    for (std::size_t r = 0; r < g.rows(); ++r) {
      if (r != pivot && g.get(r, col)) g.add_row(r, pivot);
    }
  }
  std::vector<Bits> rows;
  for (std::size_t r = 0; r < g.rows(); ++r) {
    if (!used[r]) rows.push_back(g.row_bits(r));
  }
  if (rows.empty()) throw ConfigError("shorten: no message bits left");
  BitMatrix sub = BitMatrix::from_rows(rows).delete_columns(p);
  const std::string name = "shorten(" + code.name() + join_positions(p) + ")";
  const std::size_t d = settle_distance(sub, code.d(), name);
  return LinearCode(name, std::move(sub), d);
}

LinearCode puncture_code(const LinearCode& code, std::span<const std::size_t> positions) {
  const auto p = checked_positions(positions, code.n(), "puncture");
  if (p.size() >= code.d()) throw ConfigError("puncture: distance would drop below 1");
  BitMatrix g = code.generator().delete_columns(p);
  if (g.rank() != code.k()) throw ConfigError("puncture: rank collapse");
  const std::string name = "puncture(" + code.name() + join_positions(p) + ")";
  const std::size_t d = settle_distance(g, code.d() - p.size(), name);
  return LinearCode(name, std::move(g), d);
}

Bits parse_polynomial(std::string_view text) {
  Bits coeffs;
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ConfigError("empty polynomial");
  std::stringstream terms(s);
  std::string term;
  while (std::getline(terms, term, '+')) {
    std::size_t power;
    if (term == "1") {
      power = 0;
    } else if (!term.empty() && (term[0] == 'x' || term[0] == 'X')) {
      std::string_view rest(term);
      rest.remove_prefix(1);
      if (rest.starts_with("^")) rest.remove_prefix(1);
      if (rest.empty()) {
        power = 1;
      } else {
        try {
          std::size_t used = 0;
          power = std::stoul(std::string(rest), &used);
          if (used != rest.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw ConfigError("bad polynomial term '" + term + "'");
        }
      }
    } else {
      throw ConfigError("bad polynomial term '" + term + "'");
    }
    if (coeffs.size() <= power) coeffs.resize(power + 1, 0);
    coeffs[power] ^= 1U;
  }
  return coeffs;
}

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

// Splits "a,b(c,d),e" on top-level commas.
std::vector<std::string> split_args(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

std::size_t to_count(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoul(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected a non-negative integer, got '" + s + "'");
  }
}

}  // namespace

LinearCode build_named_code(std::string_view spec) {
  const std::string s = trim(spec);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') {
    throw ConfigError("code spec must look like name(params): '" + s + "'");
  }
  const std::string name = trim(std::string_view(s).substr(0, open));
  const auto args = split_args(std::string_view(s).substr(open + 1, s.size() - open - 2));
  auto expect = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      throw ConfigError(name + ": wrong number of parameters in '" + s + "'");
    }
  };
  auto positions = [&] {
    std::vector<std::size_t> p;
    for (std::size_t i = 1; i < args.size(); ++i) p.push_back(to_count(args[i]));
    return p;
  };

  if (name == "repetition") return expect(1, 1), repetition(to_count(args[0]));
  if (name == "parity") return expect(1, 1), parity(to_count(args[0]));
  if (name == "hamming") return expect(1, 1), hamming(to_count(args[0]));
  if (name == "extended_hamming") return expect(1, 1), extended_hamming(to_count(args[0]));
  if (name == "reed_muller_1") return expect(1, 1), reed_muller_1(to_count(args[0]));
  if (name == "cyclic") {
    expect(2, 3);
    return cyclic(to_count(args[0]), parse_polynomial(args[1]),
                  args.size() == 3 ? to_count(args[2]) : 0);
  }
  if (name == "extend") return expect(1, 1), extend_code(build_named_code(args[0]));
  if (name == "shorten") {
    expect(2, 1024);
    return shorten_code(build_named_code(args[0]), positions());
  }
  if (name == "puncture") {
    expect(2, 1024);
    return puncture_code(build_named_code(args[0]), positions());
  }
  throw ConfigError("unknown code '" + name +
                    "' (expected repetition, parity, hamming, extended_hamming, reed_muller_1, "
                    "cyclic, extend, shorten, puncture)");
}

LinearCode parse_code(std::string_view text, std::string name) {
  std::vector<std::string> lines;
  std::stringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw ConfigError("code file is empty");
  std::size_t n = 0, k = 0, d = 0;
  {
    std::stringstream header(lines[0]);
    if (!(header >> n >> k >> d)) throw ConfigError("code file header must be 'n k d'");
  }
  if (lines.size() < 1 + k) throw ConfigError("code file has fewer than k generator rows");
  auto read_rows = [&](std::size_t first, std::size_t count) {
    std::vector<Bits> rows;
    for (std::size_t i = first; i < first + count; ++i) {
      if (lines[i].size() != n) {
        throw ConfigError("code file row " + std::to_string(i) + " has " +
                          std::to_string(lines[i].size()) + " characters, expected " +
                          std::to_string(n));
      }
      rows.push_back(from_string(lines[i]));
    }
    return rows;
  };
  BitMatrix g = BitMatrix::from_rows(read_rows(1, k));
  std::optional<BitMatrix> h;
  std::size_t next = 1 + k;
  if (next < lines.size()) {
    if (lines[next] != "H") throw ConfigError("unexpected content after generator rows");
    if (lines.size() != next + 1 + (n - k)) throw ConfigError("H section must have n-k rows");
    h = BitMatrix::from_rows(read_rows(next + 1, n - k));
    if (n == k) h = BitMatrix(0, n);
  }
  return LinearCode(std::move(name), std::move(g), d, std::move(h));
}

LinearCode read_code_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open code file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_code(buf.str(), path.filename().string());
}

std::string format_code(const LinearCode& code) {
  std::string out = std::to_string(code.n()) + " " + std::to_string(code.k()) + " " +
                    std::to_string(code.d()) + "\n";
  for (std::size_t i = 0; i < code.k(); ++i) out += wmx::to_string(code.generator().row_bits(i)) + "\n";
  if (code.n() > code.k()) {
    out += "H\n";
    for (std::size_t i = 0; i < code.n() - code.k(); ++i) {
      out += wmx::to_string(code.parity_check().row_bits(i)) + "\n";
    }
  }
  return out;
}

}  // namespace wmx::ecc
