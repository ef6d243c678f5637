#include "qlre/operator_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace qlre::ops {

namespace {

const cplx kI{0.0, 1.0};

// Single-site product table: returns (letter, phase) with a*b = phase * letter.
std::pair<Letter, cplx> letter_product(Letter a, Letter b) {
  if (a == Letter::I) return {b, 1.0};
  if (b == Letter::I) return {a, 1.0};
  if (a == b) return {Letter::I, 1.0};
  int ia = static_cast<int>(a), ib = static_cast<int>(b);
  auto c = static_cast<Letter>(6 - ia - ib);
  bool cyclic = (ib - ia + 3) % 3 == 1;  // X->Y->Z->X
  return {c, cyclic ? kI : -kI};
}

void check_site(std::uint32_t site, int n) {
  if (static_cast<int>(site) >= n) throw std::out_of_range("Pauli site outside operator width");
}

}  // namespace

char letter_char(Letter l) {
  static const char tbl[] = {'I', 'X', 'Y', 'Z'};
  return tbl[static_cast<int>(l)];
}

Letter letter_from_char(char c) {
  switch (c) {
    case 'I': return Letter::I;
    case 'X': return Letter::X;
    case 'Y': return Letter::Y;
    case 'Z': return Letter::Z;
    default: throw std::invalid_argument(std::string("bad Pauli letter: ") + c);
  }
}

PauliString::PauliString(std::vector<std::pair<std::uint32_t, Letter>> l) {
  std::sort(l.begin(), l.end(), [](auto& a, auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < l.size(); ++i)
    if (l[i].first == l[i - 1].first) throw std::invalid_argument("duplicate site in Pauli string");
  for (auto& e : l)
    if (e.second != Letter::I) letters.push_back(e);
}

PauliString PauliString::single(std::uint32_t site, Letter l) { return PauliString({{site, l}}); }

PauliString PauliString::from_dense(const std::string& s) {
  std::vector<std::pair<std::uint32_t, Letter>> l;
  for (std::size_t i = 0; i < s.size(); ++i) l.emplace_back(static_cast<std::uint32_t>(i), letter_from_char(s[i]));
  return PauliString(std::move(l));
}

Letter PauliString::at(std::uint32_t site) const {
  auto it = std::lower_bound(letters.begin(), letters.end(), site,
                             [](const auto& e, std::uint32_t s) { return e.first < s; });
  if (it != letters.end() && it->first == site) return it->second;
  return Letter::I;
}

std::uint32_t PauliString::max_site() const { return letters.empty() ? 0 : letters.back().first; }

std::string PauliString::to_dense(int n) const {
  std::string s(n, 'I');
  for (auto& [q, l] : letters) s[q] = letter_char(l);
  return s;
}

bool PauliString::commutes_with(const PauliString& o) const {
  int anti = 0;
  std::size_t i = 0, j = 0;
  while (i < letters.size() && j < o.letters.size()) {
    if (letters[i].first < o.letters[j].first) ++i;
    else if (letters[i].first > o.letters[j].first) ++j;
    else {
      if (letters[i].second != o.letters[j].second) ++anti;
      ++i;
      ++j;
    }
  }
  return anti % 2 == 0;
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  PauliTerm r;
  r.coefficient = a.coefficient * b.coefficient;
  auto& la = a.letters.letters;
  auto& lb = b.letters.letters;
  auto& out = r.letters.letters;
  out.reserve(la.size() + lb.size());
  std::size_t i = 0, j = 0;
  while (i < la.size() || j < lb.size()) {
    if (j == lb.size() || (i < la.size() && la[i].first < lb[j].first)) {
      out.push_back(la[i++]);
    } else if (i == la.size() || lb[j].first < la[i].first) {
      out.push_back(lb[j++]);
    } else {
      auto [l, ph] = letter_product(la[i].second, lb[j].second);
      r.coefficient *= ph;
      if (l != Letter::I) out.emplace_back(la[i].first, l);
      ++i;
      ++j;
    }
  }
  return r;
}

OperatorSum::OperatorSum(int site_count, const std::vector<PauliTerm>& terms) : n_(site_count) {
  std::map<PauliString, cplx> acc;
  for (auto& t : terms) {
    if (!t.letters.letters.empty()) check_site(t.letters.max_site(), n_);
    acc[t.letters] += t.coefficient;
  }
  terms_.reserve(acc.size());
  for (auto& [p, c] : acc)
    if (std::abs(c) > kMergeTol) terms_.push_back({c, p});
}

OperatorSum OperatorSum::identity(int n, cplx c) { return OperatorSum(n, {{c, PauliString{}}}); }

OperatorSum OperatorSum::pauli(int n, const PauliString& p, cplx c) { return OperatorSum(n, {{c, p}}); }

OperatorSum OperatorSum::single(int n, std::uint32_t site, Letter l, cplx c) {
  return OperatorSum(n, {{c, PauliString::single(site, l)}});
}

OperatorSum OperatorSum::operator+(const OperatorSum& o) const {
  std::vector<PauliTerm> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return OperatorSum(std::max(n_, o.n_), all);
}

OperatorSum OperatorSum::operator-(const OperatorSum& o) const { return *this + o * cplx(-1.0); }

OperatorSum OperatorSum::operator*(const OperatorSum& o) const {
  std::vector<PauliTerm> all;
  all.reserve(terms_.size() * o.terms_.size());
  for (auto& a : terms_)
    for (auto& b : o.terms_) all.push_back(multiply(a, b));
  return OperatorSum(std::max(n_, o.n_), all);
}

OperatorSum OperatorSum::operator*(cplx s) const {
  std::vector<PauliTerm> all = terms_;
  for (auto& t : all) t.coefficient *= s;
  return OperatorSum(n_, all);
}

OperatorSum OperatorSum::dagger() const {
  std::vector<PauliTerm> all = terms_;
  for (auto& t : all) t.coefficient = std::conj(t.coefficient);
  return OperatorSum(n_, all);
}

cplx OperatorSum::coefficient_of(const PauliString& p) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), p,
                             [](const PauliTerm& t, const PauliString& q) { return t.letters < q; });
  if (it != terms_.end() && it->letters == p) return it->coefficient;
  return 0.0;
}

bool OperatorSum::is_hermitian(double tol) const {
  for (auto& t : terms_)
    if (std::abs(t.coefficient.imag()) > tol) return false;
  return true;
}

OperatorSum commutator(const OperatorSum& a, const OperatorSum& b) {
  if (a.site_count() != b.site_count()) throw std::invalid_argument("commutator: width mismatch");
  std::vector<PauliTerm> all;
  for (auto& x : a.terms())
    for (auto& y : b.terms()) {
      if (x.letters.commutes_with(y.letters)) continue;
      auto t = multiply(x, y);
      t.coefficient *= 2.0;
      all.push_back(t);
    }
  return OperatorSum(a.site_count(), all);
}

OperatorSum anticommutator(const OperatorSum& a, const OperatorSum& b) {
  if (a.site_count() != b.site_count()) throw std::invalid_argument("anticommutator: width mismatch");
  std::vector<PauliTerm> all;
  for (auto& x : a.terms())
    for (auto& y : b.terms()) {
      if (!x.letters.commutes_with(y.letters)) continue;
      auto t = multiply(x, y);
      t.coefficient *= 2.0;
      all.push_back(t);
    }
  return OperatorSum(a.site_count(), all);
}

double norm_bound(const OperatorSum& a) {
  // Neumaier-compensated: lattice sums add thousands of equal inexact terms
  double s = 0.0, c = 0.0;
  for (auto& t : a.terms()) {
    const double v = std::abs(t.coefficient);
    const double u = s + v;
    c += std::abs(s) >= v ? (s - u) + v : (v - u) + s;
    s = u;
  }
  return s + c;
}

namespace {

struct Masks {
  std::uint64_t x = 0, z = 0;
  int ny = 0;
};

Masks masks_of(const PauliString& p, int n) {
  Masks m;
  for (auto& [q, l] : p.letters) {
    std::uint64_t b = 1ULL << (n - 1 - static_cast<int>(q));
    if (l == Letter::X || l == Letter::Y) m.x |= b;
    if (l == Letter::Z || l == Letter::Y) m.z |= b;
    if (l == Letter::Y) ++m.ny;
  }
  return m;
}

cplx ipow(int k) {
  static const cplx tbl[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return tbl[((k % 4) + 4) % 4];
}

}  // namespace

DenseOperator pauli_dense(const PauliString& p, int n) {
  if (n > 14) throw std::length_error("to_dense: more than 14 sites");
  const std::uint64_t dim = 1ULL << n;
  DenseOperator m = DenseOperator::Zero(dim, dim);
  Masks k = masks_of(p, n);
  cplx base = ipow(k.ny);
  for (std::uint64_t j = 0; j < dim; ++j) {
    double s = (std::popcount(j & k.z) & 1) ? -1.0 : 1.0;
    m(j ^ k.x, j) = base * s;
  }
  return m;
}

cplx expectation(const OperatorSum& a, const DenseOperator& rho) {
  const int n = a.site_count();
  const std::uint64_t dim = 1ULL << n;
  if (static_cast<std::uint64_t>(rho.rows()) != dim || rho.rows() != rho.cols())
    throw std::invalid_argument("expectation: dimension mismatch");
  cplx total = 0.0;
  for (auto& t : a.terms()) {
    Masks k = masks_of(t.letters, n);
    cplx acc = 0.0;
    for (std::uint64_t l = 0; l < dim; ++l) {
      double s = (std::popcount(l & k.z) & 1) ? -1.0 : 1.0;
      acc += s * rho(l, l ^ k.x);
    }
    total += t.coefficient * ipow(k.ny) * acc;
  }
  return total;
}

std::uint64_t pauli_index(const PauliString& p, int n) {
  std::uint64_t idx = 0;
  for (auto& [q, l] : p.letters) {
    check_site(q, n);
    idx |= static_cast<std::uint64_t>(l) << (2 * (n - 1 - static_cast<int>(q)));
  }
  return idx;
}

PauliString pauli_from_index(std::uint64_t idx, int n) {
  std::vector<std::pair<std::uint32_t, Letter>> l;
  for (int q = 0; q < n; ++q) {
    auto v = static_cast<Letter>((idx >> (2 * (n - 1 - q))) & 3U);
    if (v != Letter::I) l.emplace_back(q, v);
  }
  return PauliString(std::move(l));
}

DenseOperator to_dense(const OperatorSum& a) {
  const int n = a.site_count();
  if (n > 14) throw std::length_error("to_dense: more than 14 sites");
  const std::uint64_t dim = 1ULL << n;
  DenseOperator m = DenseOperator::Zero(dim, dim);
  for (auto& t : a.terms()) {
    Masks k = masks_of(t.letters, n);
    cplx base = t.coefficient * ipow(k.ny);
    for (std::uint64_t j = 0; j < dim; ++j) {
      double s = (std::popcount(j & k.z) & 1) ? -1.0 : 1.0;
      m(j ^ k.x, j) += base * s;
    }
  }
  return m;
}

SparseOperator to_sparse(const OperatorSum& a) {
  const int n = a.site_count();
  if (n > 24) throw std::length_error("to_sparse: more than 24 sites");
  const std::uint64_t dim = 1ULL << n;
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(a.size() * dim);
  for (auto& t : a.terms()) {
    Masks k = masks_of(t.letters, n);
    cplx base = t.coefficient * ipow(k.ny);
    for (std::uint64_t j = 0; j < dim; ++j) {
      double s = (std::popcount(j & k.z) & 1) ? -1.0 : 1.0;
      trip.emplace_back(static_cast<int>(j ^ k.x), static_cast<int>(j), base * s);
    }
  }
  SparseOperator m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(cplx(0.0), 1e-15);
  return m;
}

// ---------------------------------------------------------------- tableau

int symplectic_product(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b, int n) {
  int s = 0;
  for (int q = 0; q < n; ++q) s ^= (a[q] & b[n + q]) ^ (a[n + q] & b[q]);
  return s;
}

CliffordTableau::CliffordTableau(int n) : n_(n), bits_(2 * n, std::vector<std::uint8_t>(2 * n, 0)), signs_(2 * n, 0) {
  for (int r = 0; r < 2 * n; ++r) bits_[r][r] = 1;
}

void CliffordTableau::set_row(int row, const std::vector<std::uint8_t>& bits, int sign) {
  if (static_cast<int>(bits.size()) != 2 * n_) throw std::invalid_argument("tableau row width");
  bits_[row] = bits;
  signs_[row] = static_cast<std::uint8_t>(sign & 1);
}

CliffordTableau CliffordTableau::hadamard(int n, int q) {
  CliffordTableau t(n);
  std::swap(t.bits_[q], t.bits_[n + q]);
  return t;
}

CliffordTableau CliffordTableau::hadamard_all(int n) {
  CliffordTableau t(n);
  for (int q = 0; q < n; ++q) std::swap(t.bits_[q], t.bits_[n + q]);
  return t;
}

CliffordTableau CliffordTableau::phase(int n, int q) {
  CliffordTableau t(n);
  t.bits_[q][n + q] = 1;  // X -> Y
  return t;
}

CliffordTableau CliffordTableau::cnot(int n, int c, int tq) {
  CliffordTableau t(n);
  t.bits_[c][tq] = 1;           // X_c -> X_c X_t
  t.bits_[n + tq][n + c] = 1;   // Z_t -> Z_c Z_t
  return t;
}

PauliTerm CliffordTableau::image_of_row(int row) const {
  std::vector<std::pair<std::uint32_t, Letter>> l;
  for (int q = 0; q < n_; ++q) {
    int x = bits_[row][q], z = bits_[row][n_ + q];
    if (x && z) l.emplace_back(q, Letter::Y);
    else if (x) l.emplace_back(q, Letter::X);
    else if (z) l.emplace_back(q, Letter::Z);
  }
  return {signs_[row] ? cplx(-1.0) : cplx(1.0), PauliString(std::move(l))};
}

PauliTerm CliffordTableau::conjugate(const PauliTerm& p) const {
  PauliTerm acc{p.coefficient, PauliString{}};
  for (auto& [q, l] : p.letters.letters) {
    if (static_cast<int>(q) >= n_) throw std::invalid_argument("conjugate_by_clifford: width mismatch");
    if (l == Letter::X) {
      acc = multiply(acc, image_of_row(q));
    } else if (l == Letter::Z) {
      acc = multiply(acc, image_of_row(n_ + q));
    } else {
      acc = multiply(acc, image_of_row(q));
      acc = multiply(acc, image_of_row(n_ + q));
      acc.coefficient *= kI;
    }
  }
  return acc;
}

bool CliffordTableau::is_symplectic() const {
  for (int a = 0; a < 2 * n_; ++a)
    for (int b = 0; b < 2 * n_; ++b) {
      int want = (std::abs(a - b) == n_) ? 1 : 0;
      if (symplectic_product(bits_[a], bits_[b], n_) != want) return false;
    }
  return true;
}

CliffordTableau CliffordTableau::after(const CliffordTableau& first) const {
  if (first.n_ != n_) throw std::invalid_argument("tableau width mismatch");
  CliffordTableau out(n_);
  for (int r = 0; r < 2 * n_; ++r) {
    PauliTerm img = conjugate(first.image_of_row(r));
    std::vector<std::uint8_t> bits(2 * n_, 0);
    for (auto& [q, l] : img.letters.letters) {
      if (l == Letter::X || l == Letter::Y) bits[q] = 1;
      if (l == Letter::Z || l == Letter::Y) bits[n_ + q] = 1;
    }
    out.set_row(r, bits, img.coefficient.real() < 0 ? 1 : 0);
  }
  return out;
}

OperatorSum conjugate_by_clifford(const CliffordTableau& t, const OperatorSum& a) {
  if (t.width() != a.site_count()) throw std::invalid_argument("conjugate_by_clifford: width mismatch");
  std::vector<PauliTerm> out;
  out.reserve(a.size());
  for (auto& term : a.terms()) out.push_back(t.conjugate(term));
  return OperatorSum(a.site_count(), out);
}

OperatorSum conjugate_by_T(int qubit, const OperatorSum& a) {
  if (qubit < 0 || qubit >= a.site_count()) throw std::out_of_range("conjugate_by_T: qubit");
  const double r = 1.0 / std::sqrt(2.0);
  const auto q = static_cast<std::uint32_t>(qubit);
  std::vector<PauliTerm> out;
  out.reserve(2 * a.size());
  auto with_letter = [&](const PauliString& p, Letter l) {
    auto v = p.letters;
    for (auto& e : v)
      if (e.first == q) e.second = l;
    return PauliString(std::move(v));
  };
  for (auto& t : a.terms()) {
    Letter l = t.letters.at(q);
    if (l == Letter::X) {
      out.push_back({t.coefficient * r, t.letters});
      out.push_back({t.coefficient * r, with_letter(t.letters, Letter::Y)});
    } else if (l == Letter::Y) {
      out.push_back({t.coefficient * r, t.letters});
      out.push_back({-t.coefficient * r, with_letter(t.letters, Letter::X)});
    } else {
      out.push_back(t);
    }
  }
  return OperatorSum(a.site_count(), out);
}

namespace {

using Vec2 = std::vector<std::uint8_t>;

bool is_zero(const Vec2& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint8_t b) { return b == 0; });
}

Vec2 random_combination(const std::vector<Vec2>& basis, std::mt19937_64& rng, int width) {
  Vec2 v(width, 0);
  for (auto& b : basis)
    if (rng() & 1)
      for (int i = 0; i < width; ++i) v[i] ^= b[i];
  return v;
}

// Row-reduce a spanning set over GF(2) to a basis.
std::vector<Vec2> gf2_basis(std::vector<Vec2> rows, int width) {
  std::vector<Vec2> out;
  int r = 0;
  for (int c = 0; c < width && r < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][c]) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != r && rows[i][c])
        for (int k = 0; k < width; ++k) rows[i][k] ^= rows[r][k];
    ++r;
  }
  rows.resize(r);
  return rows;
}

}  // namespace

CliffordTableau random_clifford(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_clifford: n >= 1");
  std::mt19937_64 rng(seed);
  const int w = 2 * n;
  std::vector<Vec2> basis;
  for (int i = 0; i < w; ++i) {
    Vec2 e(w, 0);
    e[i] = 1;
    basis.push_back(e);
  }
  CliffordTableau t(n);
  for (int q = 0; q < n; ++q) {
    Vec2 v, u;
    do v = random_combination(basis, rng, w); while (is_zero(v));
    do u = random_combination(basis, rng, w); while (symplectic_product(v, u, n) != 1);
    std::vector<Vec2> next;
    for (auto b : basis) {
      int bu = symplectic_product(b, u, n), bv = symplectic_product(b, v, n);
      for (int i = 0; i < w; ++i) b[i] ^= (bu & v[i]) ^ (bv & u[i]);
      if (!is_zero(b)) next.push_back(b);
    }
    basis = gf2_basis(next, w);
    t.set_row(q, v, static_cast<int>(rng() & 1));
    t.set_row(n + q, u, static_cast<int>(rng() & 1));
  }
  return t;
}

OperatorSum jordan_wigner(const std::vector<FermionMode>& product, int n_modes) {
  OperatorSum acc = OperatorSum::identity(n_modes);
  for (auto& f : product) {
    if (f.index < 0 || f.index >= n_modes) throw std::out_of_range("jordan_wigner: mode index");
    std::vector<std::pair<std::uint32_t, Letter>> zs;
    for (int k = 0; k < f.index; ++k) zs.emplace_back(k, Letter::Z);
    auto sx = zs, sy = zs;
    sx.emplace_back(f.index, Letter::X);
    sy.emplace_back(f.index, Letter::Y);
    cplx ycoef = f.kind == FermionMode::Kind::annihilate ? cplx(0, 0.5) : cplx(0, -0.5);
    OperatorSum op(n_modes, {{0.5, PauliString(sx)}, {ycoef, PauliString(sy)}});
    acc = acc * op;
  }
  return acc;
}

}  // namespace qlre::ops
